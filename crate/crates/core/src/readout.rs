//! Measurement figures of merit built on the transport layer.

use serde::Serialize;

use crate::config::DeviceConfig;
use crate::error::{Error, Result};
use crate::landauer::{current, linear_conductance, optimal_bias, BiasPoint};
use crate::scalar::Real;
use crate::spectrum::{
    levels_distinguishable, resonance_for, spin_flip_blocked, spin_flip_time, ScaleCriterion,
    SpinFlipTime,
};
use crate::transport::{mean_reflection, mean_reflection_lorentzian, SpinOrientation, TransmissionModel};
use crate::units::{Current, Energy, PhysicalConstants};

/// Half-width a in units of Gamma for which the q = 0 dip averages to 1/3:
/// arctan(a)/a = 1/3.
pub fn one_third_window_halfwidth() -> f64 {
    let (mut lo, mut hi) = (1.0f64, 10.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid.atan() / mid > 1.0 / 3.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadoutReport<T> {
    pub V_sd: T,
    pub resonance_energy: Energy<T>,
    pub I_ballistic: Current<T>,
    pub I_parallel: Current<T>,
    pub I_antiparallel: Current<T>,
    pub delta_I_parallel: Current<T>,
    pub delta_I_antiparallel: Current<T>,
    /// (I_antiparallel - I_parallel) / I_ballistic
    pub contrast: T,
    pub relative_decrease_parallel: T,
    pub relative_decrease_antiparallel: T,
    /// 1 - G/G_ballistic at zero bias and the configured temperature.
    pub conductance_decrease_parallel: T,
    pub conductance_decrease_antiparallel: T,
    /// Mean parallel-channel reflection over |detuning| < Gamma, by quadrature.
    pub mean_reflection_gamma_window: T,
    /// Same average in closed form (pi/4 for q = 0).
    pub mean_reflection_gamma_window_closed_form: T,
    pub mean_reflection_note: String,
    pub flip_blocked: bool,
    pub levels_distinguishable: bool,
    pub optimal_V: T,
    pub unphysical_lineshape: bool,
}

fn ratio_or_zero<T: Real>(num: T, den: T) -> T {
    if den == T::zero() {
        T::zero()
    } else {
        num / den
    }
}

/// Ballistic, parallel and antiparallel currents at the configured bias and
/// the derived contrast figures.
pub fn readout_report<T: Real>(config: &DeviceConfig<T>, strictness: T) -> Result<ReadoutReport<T>> {
    let resonance = resonance_for(config)?;
    let par = TransmissionModel::new(resonance, SpinOrientation::Parallel, config.modes.clone())?;
    let anti = par.oriented(SpinOrientation::Antiparallel);
    let ball = par.reweighted(T::zero());
    let bias = BiasPoint::from_config(config)?;

    let (i_ball, (i_par, i_anti)) = rayon::join(
        || current(&bias, &ball),
        || rayon::join(|| current(&bias, &par), || current(&bias, &anti)),
    );
    let (i_ball, i_par, i_anti) = (i_ball?, i_par?, i_anti?);
    let d_par = i_ball - i_par;
    let d_anti = i_ball - i_anti;

    let (mu, temp) = (config.mu_source, config.temperature);
    let g_ball = linear_conductance(&ball, temp, mu)?;
    let g_par = linear_conductance(&par, temp, mu)?;
    let g_anti = linear_conductance(&anti, temp, mu)?;

    let (e0, g) = (resonance.energy, resonance.gamma);
    let mean_r = mean_reflection(&par, e0 - g, e0 + g)?;
    let closed = mean_reflection_lorentzian(e0, g, T::one(), e0 - g, e0 + g);
    let note = format!(
        "average of the q = 0 dip over |detuning| < Gamma is pi/4 = {:.4}, not the 1/3 rule of thumb; \
         an average of 1/3 needs a window of about +/-{:.2} Gamma",
        std::f64::consts::FRAC_PI_4,
        one_third_window_halfwidth()
    );

    Ok(ReadoutReport {
        V_sd: config.V_sd,
        resonance_energy: e0,
        I_ballistic: i_ball,
        I_parallel: i_par,
        I_antiparallel: i_anti,
        delta_I_parallel: d_par,
        delta_I_antiparallel: d_anti,
        contrast: ratio_or_zero(i_anti - i_par, i_ball),
        relative_decrease_parallel: ratio_or_zero(d_par, i_ball),
        relative_decrease_antiparallel: ratio_or_zero(d_anti, i_ball),
        conductance_decrease_parallel: T::one() - ratio_or_zero(g_par, g_ball),
        conductance_decrease_antiparallel: T::one() - ratio_or_zero(g_anti, g_ball),
        mean_reflection_gamma_window: mean_r,
        mean_reflection_gamma_window_closed_form: closed,
        mean_reflection_note: note,
        flip_blocked: spin_flip_blocked(config, strictness).satisfied,
        levels_distinguishable: levels_distinguishable(config, strictness).satisfied,
        optimal_V: optimal_bias(config.Gamma),
        unphysical_lineshape: par.is_unphysical(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Arrangement {
    /// Random positions: reflections add incoherently.
    RandomIncoherent,
    /// Ordered positions: amplitudes add in phase.
    OrderedCoherent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingModel<T> {
    pub arrangement: Arrangement,
    pub n: u32,
    pub r_single: T,
}

impl<T: Real> ScalingModel<T> {
    pub fn new(arrangement: Arrangement, n: u32, r_single: T) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("qubit count must be >= 1".into()));
        }
        if !(r_single >= T::zero() && r_single <= T::one()) {
            return Err(Error::Domain(format!("single-qubit reflection must lie in [0, 1], got {r_single}")));
        }
        Ok(Self {
            arrangement,
            n,
            r_single,
        })
    }
}

/// Coherent composition is trusted only while N²R stays below this.
pub const COHERENT_VALIDITY_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledReflection<T> {
    pub reflection: T,
    pub valid: bool,
}

/// Reflection of N identical scatterers in series.
///
/// Incoherent: R_N = N R / (1 + (N-1) R), from adding R/T ratios.
/// Coherent: min(1, N² R), a small-signal amplitude sum.
pub fn n_qubit_reflection<T: Real>(model: &ScalingModel<T>) -> ScaledReflection<T> {
    let n = T::lit(f64::from(model.n));
    let r = model.r_single;
    match model.arrangement {
        Arrangement::RandomIncoherent => ScaledReflection {
            reflection: n * r / (T::one() + (n - T::one()) * r),
            valid: true,
        },
        Arrangement::OrderedCoherent => {
            let raw = n * n * r;
            ScaledReflection {
                reflection: raw.min(T::one()),
                valid: raw <= T::lit(COHERENT_VALIDITY_LIMIT),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    QND,
    NotQND,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NondemolitionSummary<T> {
    pub verdict: Verdict,
    pub reasons: Vec<String>,
    pub flip_blocked: ScaleCriterion<T>,
    pub levels_distinguishable: ScaleCriterion<T>,
    pub spin_flip_time: SpinFlipTime<T>,
    /// |beta| over the 0.3 meV Zeeman splitting at 5 T.
    pub beta_over_zeeman: T,
    pub zeeman_comparison: String,
}

pub fn nondemolition_summary<T: Real>(config: &DeviceConfig<T>, strictness: T) -> NondemolitionSummary<T> {
    let flip = spin_flip_blocked(config, strictness);
    let dist = levels_distinguishable(config, strictness);
    let zeeman = T::lit(PhysicalConstants::ZEEMAN_REFERENCE);
    let beta_over_zeeman = config.beta.abs() / zeeman;

    let mut reasons = Vec::new();
    if !flip.satisfied {
        reasons.push(format!(
            "spin flip energetically allowed: |beta|/Gamma = {} < {}",
            flip.ratio, strictness
        ));
    }
    if !dist.satisfied {
        reasons.push(format!(
            "singlet and triplet not resolved: |J|/Gamma = {} < {}",
            dist.ratio, strictness
        ));
    }
    let zeeman_comparison = format!(
        "spin-orbit splitting |beta| = {} meV vs Zeeman splitting {} meV at 5 T (ratio {})",
        config.beta.abs(),
        PhysicalConstants::ZEEMAN_REFERENCE,
        beta_over_zeeman
    );
    if !flip.satisfied && config.beta.abs() <= zeeman {
        reasons.push(format!("splitting is at the Zeeman scale: {zeeman_comparison}"));
    }

    NondemolitionSummary {
        verdict: if flip.satisfied && dist.satisfied {
            Verdict::QND
        } else {
            Verdict::NotQND
        },
        reasons,
        flip_blocked: flip,
        levels_distinguishable: dist,
        spin_flip_time: spin_flip_time(config.J),
        beta_over_zeeman,
        zeeman_comparison,
    }
}
