use std::fs;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use spinfano::config::RawDeviceConfig;
use spinfano::landauer::iv_curve_for_model;
use spinfano::transport::{mode_reflection, mode_transmission, total_transmission};
use spinfano::{
    compare_to_fano, eigenlevels, nondemolition_summary, readout_report, two_electron_hamiltonian,
    validate, DeviceConfig, OracleLattice, SpinOrientation, TransmissionModel,
};

use crate::args::{Command, Common, Grid, SweepParameter};
use crate::emit::{number, sorted_json, Outputs, RunManifest, Table};
use crate::failure::Failure;
use crate::overrides;

struct Loaded {
    config: DeviceConfig,
    digest: String,
}

fn load(common: &Common) -> Result<Option<Loaded>, Failure> {
    let Some(path) = &common.config else {
        if let Some(first) = common.overrides.first() {
            return Err(Failure::Usage(format!("--set {first} needs --config")));
        }
        return Ok(None);
    };
    let bytes = fs::read(path).map_err(|source| Failure::Unreadable {
        path: path.clone(),
        source,
    })?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let mut doc: Value =
        serde_json::from_slice(&bytes).map_err(|e| Failure::invalid(path.display().to_string(), e.to_string()))?;
    for assignment in &common.overrides {
        overrides::apply(&mut doc, assignment).map_err(|e| Failure::invalid(e.key, e.message))?;
    }
    let raw: RawDeviceConfig<f64> = serde_path_to_error::deserialize(doc).map_err(|e| {
        let key = e.path().to_string();
        Failure::invalid(key, e.into_inner().to_string())
    })?;
    let config = validate(raw)?;
    Ok(Some(Loaded { config, digest }))
}

fn require(loaded: Option<Loaded>, subcommand: &str) -> Result<Loaded, Failure> {
    loaded.ok_or_else(|| Failure::Usage(format!("`{subcommand}` needs --config <PATH>")))
}

pub fn run(command: &Command) -> Result<(), Failure> {
    let common = command.common();
    let loaded = load(common)?;
    let digest = loaded.as_ref().map(|l| l.digest.clone());
    let mut out = Outputs::new(&common.out).map_err(|e| Failure::Output(format!("{}: {e}", common.out.display())))?;

    match command {
        Command::Levels { .. } => levels(&require(loaded, "levels")?.config, &mut out)?,
        Command::Sweep { grid, .. } => sweep(&require(loaded, "sweep")?.config, *grid, &mut out)?,
        Command::Iv { grid, .. } => iv(&require(loaded, "iv")?.config, *grid, &mut out)?,
        Command::Readout {
            strictness,
            sweep_over,
            grid,
            ..
        } => readout(&require(loaded, "readout")?.config, *strictness, *sweep_over, *grid, &mut out)?,
        Command::Oracle {
            hopping,
            coupling,
            eps_d,
            window,
            ..
        } => oracle(*hopping, *coupling, *eps_d, *window, &mut out)?,
    }

    let manifest = RunManifest {
        subcommand: command.name().to_string(),
        config_digest: digest,
        overrides: common.overrides.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        outputs: out.paths(),
    };
    let path = out.dir().join("manifest.json");
    fs::write(path, sorted_json(&manifest)?)?;
    Ok(())
}

fn levels(config: &DeviceConfig, out: &mut Outputs) -> Result<(), Failure> {
    let diagram = eigenlevels(&two_electron_hamiltonian(config))?;
    let mut t = Table::new(["energy_meV", "character", "sz_total", "l1z", "degeneracy", "parallel_accessible"]);
    for l in &diagram.levels {
        t.push(vec![
            number(l.energy),
            l.character.as_str().to_string(),
            l.sz_total.to_string(),
            l.l1z.to_string(),
            l.degeneracy.to_string(),
            l.parallel_accessible.to_string(),
        ]);
    }
    out.write("levels.csv", &t.to_bytes()?)?;
    Ok(())
}

fn sweep(config: &DeviceConfig, grid: Option<Grid>, out: &mut Outputs) -> Result<(), Failure> {
    let model = TransmissionModel::from_config(config)?;
    let par = model.oriented(SpinOrientation::Parallel);
    let anti = model.oriented(SpinOrientation::Antiparallel);
    let (e0, g) = (model.resonance.energy, model.resonance.gamma);
    let grid = grid.unwrap_or(Grid {
        start: e0 - 10.0 * g,
        stop: e0 + 10.0 * g,
        count: 401,
    });

    let n = model.modes.len();
    let mut header = vec!["E_meV".to_string()];
    for i in 0..n {
        for q in ["T_parallel", "T_antiparallel", "R_parallel", "R_antiparallel"] {
            header.push(format!("{q}_mode{i}"));
        }
    }
    for q in ["T_parallel", "T_antiparallel", "R_parallel", "R_antiparallel"] {
        header.push(format!("{q}_total"));
    }
    let mut t = Table::new(header);
    for e in grid.points() {
        let mut row = vec![number(e)];
        let (mut r_par, mut r_anti) = (0.0, 0.0);
        for i in 0..n {
            let rp = mode_reflection(e, &par, i)?;
            let ra = mode_reflection(e, &anti, i)?;
            r_par += rp;
            r_anti += ra;
            row.push(number(mode_transmission(e, &par, i)?));
            row.push(number(mode_transmission(e, &anti, i)?));
            row.push(number(rp));
            row.push(number(ra));
        }
        row.push(number(total_transmission(e, &par)));
        row.push(number(total_transmission(e, &anti)));
        row.push(number(r_par));
        row.push(number(r_anti));
        t.push(row);
    }
    out.write("sweep.csv", &t.to_bytes()?)?;
    Ok(())
}

fn iv(config: &DeviceConfig, grid: Option<Grid>, out: &mut Outputs) -> Result<(), Failure> {
    let model = TransmissionModel::from_config(config)?;
    let g = model.resonance.gamma;
    let grid = grid
        .unwrap_or(Grid {
            start: -4.0 * g,
            stop: 4.0 * g,
            count: 81,
        })
        .points();
    let par = iv_curve_for_model(&model.oriented(SpinOrientation::Parallel), config.mu_source, config.temperature, &grid)?;
    let anti = iv_curve_for_model(&model.oriented(SpinOrientation::Antiparallel), config.mu_source, config.temperature, &grid)?;
    let mut t = Table::new(["V_mV", "I_A_parallel", "I_A_antiparallel", "G_S_parallel", "G_S_antiparallel"]);
    for (p, a) in par.points.iter().zip(&anti.points) {
        t.push(vec![
            number(p.voltage),
            number(p.current),
            number(a.current),
            number(p.conductance),
            number(a.conductance),
        ]);
    }
    out.write("iv.csv", &t.to_bytes()?)?;
    Ok(())
}

fn readout(
    config: &DeviceConfig,
    strictness: f64,
    sweep_over: Option<SweepParameter>,
    grid: Option<Grid>,
    out: &mut Outputs,
) -> Result<(), Failure> {
    if !(strictness.is_finite() && strictness > 0.0) {
        return Err(Failure::invalid("strictness", "must be finite and positive"));
    }
    let report = readout_report(config, strictness)?;
    let mut doc = serde_json::to_value(&report)?;
    doc["nondemolition"] = serde_json::to_value(nondemolition_summary(config, strictness))?;
    out.write("readout.json", sorted_json(&doc)?.as_bytes())?;

    let Some(param) = sweep_over else {
        return Ok(());
    };
    let g = config.Gamma;
    let (column, grid) = match param {
        SweepParameter::V => ("V_mV", grid.unwrap_or(Grid { start: 0.0, stop: 4.0 * g, count: 41 })),
        SweepParameter::Gamma => ("Gamma_meV", grid.unwrap_or(Grid { start: 0.1 * g, stop: 3.0 * g, count: 30 })),
    };
    let mut t = Table::new([
        column,
        "I_ballistic",
        "I_parallel",
        "I_antiparallel",
        "delta_I_parallel",
        "delta_I_antiparallel",
        "contrast",
    ]);
    for x in grid.points() {
        let mut raw = RawDeviceConfig::from(config.clone());
        match param {
            SweepParameter::V => raw.V_sd = x,
            SweepParameter::Gamma => raw.Gamma = x,
        }
        let r = readout_report(&validate(raw)?, strictness)?;
        t.push(vec![
            number(x),
            number(r.I_ballistic),
            number(r.I_parallel),
            number(r.I_antiparallel),
            number(r.delta_I_parallel),
            number(r.delta_I_antiparallel),
            number(r.contrast),
        ]);
    }
    out.write("readout_sweep.csv", &t.to_bytes()?)?;
    Ok(())
}

fn oracle(hopping: f64, coupling: f64, eps_d: f64, window: f64, out: &mut Outputs) -> Result<(), Failure> {
    if !(window.is_finite() && window > 0.0) {
        return Err(Failure::invalid("window", "must be finite and positive"));
    }
    let lattice = OracleLattice::new(hopping, eps_d, coupling)?;
    let cmp = compare_to_fano(&lattice, window)?;
    let mut t = Table::new(["E_meV", "T_oracle", "T_fano", "abs_deviation"]);
    for r in &cmp.rows {
        t.push(vec![number(r.energy), number(r.t_oracle), number(r.t_fano), number(r.abs_deviation)]);
    }
    out.write("oracle.csv", &t.to_bytes()?)?;
    let summary = json!({
        "hopping": hopping,
        "coupling": coupling,
        "eps_d": eps_d,
        "window": window,
        "dip_center": cmp.dip_center,
        "gamma_eff": cmp.gamma_eff,
        "gamma_left": cmp.gamma_left,
        "gamma_right": cmp.gamma_right,
        "max_abs_deviation": cmp.max_deviation,
        "max_unitarity_error": cmp.max_unitarity_error,
    });
    out.write("oracle_summary.json", sorted_json(&summary)?.as_bytes())?;
    println!(
        "gamma_eff_meV={} max_abs_deviation={} max_unitarity_error={}",
        number(cmp.gamma_eff),
        number(cmp.max_deviation),
        number(cmp.max_unitarity_error)
    );
    Ok(())
}
