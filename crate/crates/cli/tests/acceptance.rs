//! Acceptance criteria, one line of output per criterion. Runs without the
//! libtest harness so the report is always printed.

use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinfano::config::{Mode, RawDeviceConfig};
use spinfano::readout::ScaledReflection;
use spinfano::spectrum::{levels_distinguishable, spin_flip_blocked};
use spinfano::{
    compare_to_fano, current, eigenlevels, fano_transmission, linear_conductance, mean_reflection, n_qubit_reflection,
    readout_report, spin_channel_reflection, validate, Arrangement, BiasPoint, DeviceConfig, HamiltonianMatrix,
    OracleLattice, PhysicalConstants, ResonanceSpec, ScalingModel, SpinCharacter, SpinOrientation, TransmissionModel,
};

const G0: f64 = PhysicalConstants::G0_SPIN_POLARIZED;
const BIN: &str = env!("CARGO_BIN_EXE_spinfano");

fn resonance(energy: f64, gamma: f64) -> ResonanceSpec {
    ResonanceSpec {
        energy,
        gamma,
        q: Complex::new(0.0, 0.0),
    }
}

fn config_with(edit: impl FnOnce(&mut RawDeviceConfig<f64>)) -> DeviceConfig {
    let mut raw = RawDeviceConfig::from(DeviceConfig::illustrative());
    edit(&mut raw);
    validate(raw).expect("valid config")
}

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn antiresonance() -> Check {
    for g in [0.1, 1.0, 10.0] {
        let t = fano_transmission(0.0, g, Complex::new(0.0, 0.0)).map_err(|e| e.to_string())?;
        if t.value != 0.0 {
            return Err(format!("T(0) = {} at Gamma = {g}", t.value));
        }
    }
    Ok("T(0) = 0 for Gamma in {0.1, 1, 10}".into())
}

fn factor_two() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let gamma = rng.gen_range(0.01..20.0);
        let e = rng.gen_range(-50.0..50.0);
        let par = TransmissionModel::new(resonance(0.0, gamma), SpinOrientation::Parallel, vec![Mode::coupled(-1e3)])
            .map_err(|e| e.to_string())?;
        let anti = par.oriented(SpinOrientation::Antiparallel);
        let d = (spin_channel_reflection(e, &anti) - spin_channel_reflection(e, &par) / 2.0).abs();
        worst = worst.max(d);
    }
    ensure(worst <= 1e-12, format!("max |R_anti - R_par/2| = {worst:e} over 10^4 samples"))
}

fn current_magnitude() -> Check {
    let m = TransmissionModel::ballistic(resonance(0.0, 1.0), vec![Mode::coupled(-100.0)]).map_err(|e| e.to_string())?;
    let i = current(&BiasPoint::symmetric(0.0, 1.0, 0.0).unwrap(), &m).map_err(|e| e.to_string())?;
    let rel = (i / 3.874e-8 - 1.0).abs();
    let rounded = (i / 4e-8 - 1.0).abs();
    ensure(rel < 1e-3 && rounded < 0.05, format!("I = {i:e} A (dev {rel:.1e} from 3.874e-8, {rounded:.3} from 4e-8)"))
}

fn conductance_quantum() -> Check {
    let r = 1.0 / G0 / 1e3;
    let dev = (r / 26.0 - 1.0).abs();
    ensure((r - 25.81).abs() < 0.01 && dev < 0.01, format!("1/G0 = {r:.4} kOhm ({:.2}% from 26)", dev * 100.0))
}

fn eigenlevels_closed_form() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let j: f64 = rng.gen_range(-10.0..10.0);
        let beta: f64 = rng.gen_range(-10.0..10.0);
        let d = eigenlevels(&HamiltonianMatrix::build(0.0, j, beta)).map_err(|e| e.to_string())?;
        let r = 0.5 * (j * j + beta * beta).sqrt();
        let mut want: Vec<f64> = [-j / 4.0 + beta / 2.0, -j / 4.0 - beta / 2.0, j / 4.0 + r, j / 4.0 - r]
            .iter()
            .flat_map(|&x| [x, x])
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in d.energies().iter().zip(&want) {
            worst = worst.max((g - w).abs());
        }
    }
    let mut gap_exact = true;
    for _ in 0..100 {
        let j: f64 = rng.gen_range(-10.0..10.0);
        let d = eigenlevels(&HamiltonianMatrix::build(0.0, j, 0.0)).map_err(|e| e.to_string())?;
        let s = d.levels.iter().find(|l| l.character == SpinCharacter::Singlet).unwrap().energy;
        let t = d.levels.iter().find(|l| l.character == SpinCharacter::Triplet).unwrap().energy;
        gap_exact &= s - t == j;
    }
    ensure(
        worst <= 1e-10 && gap_exact,
        format!("max eigenvalue error {worst:e} meV; beta = 0 gap == J bit-exact: {gap_exact}"),
    )
}

fn deficit_halving() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let gamma = rng.gen_range(0.1..3.0);
        let v = rng.gen_range(0.05..5.0);
        let temp = rng.gen_range(0.0..30.0);
        let e0 = rng.gen_range(-3.0..3.0);
        let par = TransmissionModel::new(resonance(e0, gamma), SpinOrientation::Parallel, vec![Mode::coupled(-500.0)])
            .map_err(|e| e.to_string())?;
        let bias = BiasPoint::symmetric(0.0, v, temp).map_err(|e| e.to_string())?;
        let i = |m: &TransmissionModel| current(&bias, m).map_err(|e| e.to_string());
        let i0 = i(&par.reweighted(0.0))?;
        let ratio = (i0 - i(&par.oriented(SpinOrientation::Antiparallel))?) / (i0 - i(&par)?);
        worst = worst.max((ratio / 0.5 - 1.0).abs());
    }
    ensure(worst <= 1e-9, format!("max relative deviation of dI_anti/dI_par from 1/2: {worst:e}"))
}

fn mean_reflection_window() -> Check {
    let m = TransmissionModel::new(resonance(2.0, 0.7), SpinOrientation::Parallel, vec![Mode::coupled(-100.0)])
        .map_err(|e| e.to_string())?;
    let r = mean_reflection(&m, 2.0 - 0.7, 2.0 + 0.7).map_err(|e| e.to_string())?;
    let dev = (r - FRAC_PI_4).abs();
    let report = readout_report(&DeviceConfig::illustrative(), 3.0).map_err(|e| e.to_string())?;
    let note = &report.mean_reflection_note;
    let documented = note.contains("pi/4") && note.contains("1/3");
    ensure(dev <= 1e-6 && documented, format!("<R> = {r} (|dev from pi/4| = {dev:e}); report note present: {documented}"))
}

fn oracle_agreement() -> Check {
    let mut devs = Vec::new();
    let mut unit = 0.0f64;
    for ratio in [0.4, 0.2, 0.1, 0.05, 0.025] {
        let l = OracleLattice::new(1000.0, 0.0, ratio * 1000.0).map_err(|e| e.to_string())?;
        let c = compare_to_fano(&l, 5.0).map_err(|e| e.to_string())?;
        if ratio == 0.1 {
            unit = c.max_unitarity_error;
        }
        devs.push((ratio, c.max_deviation));
    }
    let at_01 = devs.iter().find(|d| d.0 == 0.1).unwrap().1;
    let monotone = devs.windows(2).all(|w| w[1].1 < w[0].1);
    let listing: Vec<String> = devs.iter().map(|(r, d)| format!("{r}:{d:.2e}")).collect();
    ensure(
        at_01 < 0.01 && unit <= 1e-12 && monotone,
        format!("max dev at tp/t = 0.1: {at_01:e}; unitarity {unit:e}; tp/t -> dev {}", listing.join(" ")),
    )
}

fn thermal_washout() -> Check {
    let gamma = 1.0;
    let m = TransmissionModel::new(resonance(0.0, gamma), SpinOrientation::Parallel, vec![Mode::coupled(-1e5)])
        .map_err(|e| e.to_string())?;
    let mut gs = Vec::new();
    for x in [0.01, 0.1, 1.0, 10.0] {
        let temp = x * gamma / PhysicalConstants::K_B;
        gs.push(linear_conductance(&m, temp, 0.0).map_err(|e| e.to_string())? / G0);
    }
    let monotone = gs.windows(2).all(|w| w[1] >= w[0]);
    let last = *gs.last().unwrap();
    ensure(monotone && last > 0.9, format!("G/G0 at kT/Gamma = 0.01, 0.1, 1, 10: {gs:.4?}"))
}

fn n_scaling() -> Check {
    let r = 1e-4;
    let mut worst_inc = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for n in [2u32, 5, 10] {
        let get = |a| -> Result<ScaledReflection<f64>, String> {
            Ok(n_qubit_reflection(&ScalingModel::new(a, n, r).map_err(|e| e.to_string())?))
        };
        let inc = get(Arrangement::RandomIncoherent)?;
        let coh = get(Arrangement::OrderedCoherent)?;
        worst_inc = worst_inc.max((inc.reflection / (n as f64 * r) - 1.0).abs());
        worst_ratio = worst_ratio.max((coh.reflection / inc.reflection / n as f64 - 1.0).abs());
    }
    ensure(
        worst_inc < 5e-3 && worst_ratio < 0.05,
        format!("incoherent vs N R: {worst_inc:.2e}; coherent/incoherent vs N: {worst_ratio:.2e}"),
    )
}

fn nondemolition_predicates() -> Check {
    let strong = config_with(|c| {
        c.beta = Some(3.0);
        c.Gamma = 1.0;
    });
    let weak = config_with(|c| {
        c.beta = Some(0.3);
        c.Gamma = 1.0;
    });
    let a = spin_flip_blocked(&strong, 3.0).satisfied;
    let b = spin_flip_blocked(&weak, 3.0).satisfied;
    let resolved = levels_distinguishable(&strong, 3.0).satisfied;
    ensure(a && !b, format!("beta = 3: blocked {a}; beta = 0.3: blocked {b}; J resolved {resolved}"))
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().expect("spawn cli")
}

fn cli_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = dir.path().join("device.json");
    fs::write(&cfg, DeviceConfig::illustrative().to_json()).map_err(|e| e.to_string())?;
    let cfg = cfg.to_str().unwrap();
    let mut payloads = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}"));
        let o = run_cli(&["iv", "--config", cfg, "--out", out.to_str().unwrap(), "--set", "temperature=4.2"]);
        if !o.status.success() {
            return Err(format!("iv run failed: {}", String::from_utf8_lossy(&o.stderr)));
        }
        payloads.push(fs::read(Path::new(&out).join("iv.csv")).map_err(|e| e.to_string())?);
    }
    let identical = payloads[0] == payloads[1];
    let bad = run_cli(&["iv", "--config", cfg, "--out", dir.path().to_str().unwrap(), "--set", "Gamma=-1"]);
    let stderr = String::from_utf8_lossy(&bad.stderr);
    let exit = bad.status.code();
    ensure(
        identical && exit == Some(1) && stderr.contains("Gamma"),
        format!("iv.csv byte-identical: {identical}; bad Gamma exit {exit:?}, stderr names key: {}", stderr.contains("Gamma")),
    )
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    check: fn() -> Check,
}

fn main() -> ExitCode {
    let ms = Duration::from_millis;
    let criteria = [
        Criterion { id: 1, name: "antiresonance", limit: ms(1), check: antiresonance },
        Criterion { id: 2, name: "factor-2 reflection law", limit: ms(1000), check: factor_two },
        Criterion { id: 3, name: "ballistic current at 1 mV", limit: ms(1000), check: current_magnitude },
        Criterion { id: 4, name: "conductance quantum", limit: ms(1000), check: conductance_quantum },
        Criterion { id: 5, name: "eigenlevel closed form", limit: ms(1000), check: eigenlevels_closed_form },
        Criterion { id: 6, name: "current deficit halving", limit: ms(10_000), check: deficit_halving },
        Criterion { id: 7, name: "mean reflection over +/-Gamma", limit: ms(1000), check: mean_reflection_window },
        Criterion { id: 8, name: "lattice oracle agreement", limit: ms(10_000), check: oracle_agreement },
        Criterion { id: 9, name: "thermal washout", limit: ms(10_000), check: thermal_washout },
        Criterion { id: 10, name: "N-qubit scaling", limit: ms(1), check: n_scaling },
        Criterion { id: 11, name: "non-demolition predicates", limit: ms(1), check: nondemolition_predicates },
        Criterion { id: 12, name: "CLI determinism and validation exit", limit: ms(5000), check: cli_determinism },
    ];

    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let result = (c.check)();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) => (elapsed <= c.limit, d),
            Err(d) => (false, d),
        };
        println!(
            "[{}] {:>2} {:<38} {:>10.3} ms (limit {} ms)  {}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64() * 1e3,
            c.limit.as_millis(),
            detail
        );
        if !ok {
            failed.push(c.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria passed", criteria.len(), criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
