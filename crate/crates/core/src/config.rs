//! Device parameters, their validation, and the JSON configuration schema.
//!
//! The JSON object uses the field names below verbatim (`U_C`, `Gamma`,
//! `alpha_R`, ...). Energies are in meV, the bias in mV, the temperature in K
//! and the Fano factor `q` is a two-element array `[re, im]`.

use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationErrors};
use crate::scalar::Real;
use crate::transport::SpinOrientation;
use crate::units::Energy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DotSpin {
    Up,
    Down,
}

/// Wire electrons are polarized up; only the relative orientation to the dot spin matters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum WireSpin {
    #[default]
    Up,
}

/// A transverse subband of the wire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode<T> {
    pub bottom_energy: T,
    pub coupled: bool,
}

impl<T> Mode<T> {
    pub fn coupled(bottom_energy: T) -> Self {
        Self {
            bottom_energy,
            coupled: true,
        }
    }

    pub fn ballistic(bottom_energy: T) -> Self {
        Self {
            bottom_energy,
            coupled: false,
        }
    }
}

fn zero_q<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Configuration as read from disk, before validation. `beta` may be absent
/// when `alpha_R` and `D` are both given.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    deny_unknown_fields,
    bound(serialize = "T: Real + Serialize", deserialize = "T: Real + DeserializeOwned")
)]
pub struct RawDeviceConfig<T> {
    pub eps0: T,
    pub eps1: T,
    pub U_C: T,
    pub J: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_R: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub D: Option<T>,
    pub Gamma: T,
    #[serde(default = "zero_q")]
    pub q: Complex<T>,
    pub mu_source: T,
    pub V_sd: T,
    pub temperature: T,
    pub modes: Vec<Mode<T>>,
    #[serde(default = "default_dot_spin")]
    pub dot_spin: DotSpin,
    #[serde(default)]
    pub wire_spin: WireSpin,
}

fn default_dot_spin() -> DotSpin {
    DotSpin::Up
}

/// Validated device parameters. Construct through [`validate`] or
/// [`DeviceConfig::from_json`]; immutable afterwards.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct DeviceConfig<T> {
    pub eps0: T,
    pub eps1: T,
    pub U_C: T,
    pub J: T,
    pub beta: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_R: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub D: Option<T>,
    pub Gamma: T,
    pub q: Complex<T>,
    pub mu_source: T,
    pub V_sd: T,
    pub temperature: T,
    pub modes: Vec<Mode<T>>,
    pub dot_spin: DotSpin,
    pub wire_spin: WireSpin,
}

/// Field names accepted at the top level of the JSON config.
pub const CONFIG_KEYS: &[&str] = &[
    "eps0",
    "eps1",
    "U_C",
    "J",
    "beta",
    "alpha_R",
    "D",
    "Gamma",
    "q",
    "mu_source",
    "V_sd",
    "temperature",
    "modes",
    "dot_spin",
    "wire_spin",
];

/// Spin-orbit coefficient of a dot of diameter `d` (nm) for Rashba constant `alpha_r` (meV nm).
pub fn rashba_beta<T: Real>(alpha_r: T, d: T) -> Result<Energy<T>> {
    if !(d > T::zero()) {
        return Err(Error::Domain(format!("dot diameter must be > 0 nm, got {d}")));
    }
    if !alpha_r.is_finite() {
        return Err(Error::Domain(format!("Rashba constant must be finite, got {alpha_r}")));
    }
    Ok(alpha_r / d)
}

/// Checks every invariant of the raw configuration and derives `beta` when needed.
pub fn validate<T: Real>(raw: RawDeviceConfig<T>) -> Result<DeviceConfig<T>, ValidationErrors> {
    let mut errs = ValidationErrors::default();

    let finite = |errs: &mut ValidationErrors, name: &str, v: T| {
        if !v.is_finite() {
            errs.push(name, format!("must be finite, got {v}"));
        }
    };
    finite(&mut errs, "eps0", raw.eps0);
    finite(&mut errs, "eps1", raw.eps1);
    finite(&mut errs, "U_C", raw.U_C);
    finite(&mut errs, "J", raw.J);
    finite(&mut errs, "mu_source", raw.mu_source);
    finite(&mut errs, "V_sd", raw.V_sd);
    if !raw.q.re.is_finite() || !raw.q.im.is_finite() {
        errs.push("q", "both components must be finite");
    }
    if let Some(b) = raw.beta {
        finite(&mut errs, "beta", b);
    }
    if let Some(a) = raw.alpha_R {
        finite(&mut errs, "alpha_R", a);
    }

    if !(raw.Gamma > T::zero()) || !raw.Gamma.is_finite() {
        errs.push("Gamma", format!("must be finite and > 0 meV, got {}", raw.Gamma));
    }
    if !(raw.temperature >= T::zero()) || !raw.temperature.is_finite() {
        errs.push(
            "temperature",
            format!("must be finite and >= 0 K, got {}", raw.temperature),
        );
    }
    if let Some(d) = raw.D {
        if !(d > T::zero()) {
            errs.push("D", format!("must be > 0 nm, got {d}"));
        }
    }

    if raw.modes.is_empty() {
        errs.push("modes", "at least one mode is required");
    } else {
        let n_coupled = raw.modes.iter().filter(|m| m.coupled).count();
        if n_coupled != 1 {
            errs.push(
                "modes",
                format!("exactly one mode must be flagged coupled, found {n_coupled}"),
            );
        }
        for (i, m) in raw.modes.iter().enumerate() {
            if !m.bottom_energy.is_finite() {
                errs.push(format!("modes.{i}.bottom_energy"), "must be finite");
            }
        }
    }

    let derived = match (raw.alpha_R, raw.D) {
        (Some(a), Some(d)) if a.is_finite() && d > T::zero() => Some(a / d),
        _ => None,
    };
    let beta = match (raw.beta, derived) {
        (Some(b), Some(want)) => {
            let scale = want.abs().max(T::min_positive_value());
            if (b - want).abs() > T::lit(1e-9) * scale {
                errs.push(
                    "beta",
                    format!("inconsistent with alpha_R/D = {want} (got {b})"),
                );
            }
            b
        }
        (Some(b), None) => b,
        (None, Some(want)) => want,
        (None, None) => {
            errs.push("beta", "required unless both alpha_R and D are given");
            T::zero()
        }
    };

    if !errs.is_empty() {
        return Err(errs);
    }
    Ok(DeviceConfig {
        eps0: raw.eps0,
        eps1: raw.eps1,
        U_C: raw.U_C,
        J: raw.J,
        beta,
        alpha_R: raw.alpha_R,
        D: raw.D,
        Gamma: raw.Gamma,
        q: raw.q,
        mu_source: raw.mu_source,
        V_sd: raw.V_sd,
        temperature: raw.temperature,
        modes: raw.modes,
        dot_spin: raw.dot_spin,
        wire_spin: raw.wire_spin,
    })
}

impl<T: Real> DeviceConfig<T> {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self>
    where
        T: DeserializeOwned,
    {
        let raw: RawDeviceConfig<T> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(validate(raw)?)
    }

    pub fn to_json(&self) -> String
    where
        T: Serialize,
    {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Diagonal offset of the excited two-electron configuration, eps1 + U_C.
    pub fn level_offset(&self) -> Energy<T> {
        self.eps1 + self.U_C
    }

    pub fn orientation(&self) -> SpinOrientation {
        match (self.dot_spin, self.wire_spin) {
            (DotSpin::Up, WireSpin::Up) => SpinOrientation::Parallel,
            (DotSpin::Down, WireSpin::Up) => SpinOrientation::Antiparallel,
        }
    }

    pub fn with_dot_spin(&self, dot_spin: DotSpin) -> Self {
        Self {
            dot_spin,
            ..self.clone()
        }
    }

    /// Illustrative parameters (not measured values): Gamma = 1 meV, J = 5 meV,
    /// beta = 3 meV, single coupled mode, source potential at the target level.
    pub fn illustrative() -> Self {
        let eps1 = T::lit(8.0);
        let u_c = T::lit(2.0);
        let j = T::lit(5.0);
        let beta = T::lit(3.0);
        // stretched |up,up> with the lower spin-orbit branch
        let target = eps1 + u_c - j / T::lit(4.0) - beta.abs() / T::two();
        Self {
            eps0: T::zero(),
            eps1,
            U_C: u_c,
            J: j,
            beta,
            alpha_R: None,
            D: None,
            Gamma: T::one(),
            q: zero_q(),
            mu_source: target,
            V_sd: T::one(),
            temperature: T::zero(),
            modes: vec![Mode::coupled(T::zero())],
            dot_spin: DotSpin::Up,
            wire_spin: WireSpin::Up,
        }
    }
}

impl<T: Real> From<DeviceConfig<T>> for RawDeviceConfig<T> {
    fn from(c: DeviceConfig<T>) -> Self {
        Self {
            eps0: c.eps0,
            eps1: c.eps1,
            U_C: c.U_C,
            J: c.J,
            beta: Some(c.beta),
            alpha_R: c.alpha_R,
            D: c.D,
            Gamma: c.Gamma,
            q: c.q,
            mu_source: c.mu_source,
            V_sd: c.V_sd,
            temperature: c.temperature,
            modes: c.modes,
            dot_spin: c.dot_spin,
            wire_spin: c.wire_spin,
        }
    }
}
