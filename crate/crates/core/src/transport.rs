//! Energy-resolved transmission of the wire with one dot-coupled mode.

use num_complex::Complex;
use serde::Serialize;

use crate::config::{DeviceConfig, Mode};
use crate::error::{Error, Result};
use crate::quadrature::Quadrature;
use crate::scalar::Real;
use crate::spectrum::{resonance_for, ResonanceSpec};
use crate::units::{Dimensionless, Energy};

/// Dot spin relative to the wire polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SpinOrientation {
    Parallel,
    Antiparallel,
}

impl SpinOrientation {
    /// Projection of the initial two-spin state onto the accessible triplet channel.
    pub fn weight<T: Real>(self) -> T {
        match self {
            SpinOrientation::Parallel => T::one(),
            SpinOrientation::Antiparallel => T::half(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SpinOrientation::Parallel => "parallel",
            SpinOrientation::Antiparallel => "antiparallel",
        }
    }
}

/// A lineshape value with a flag for results above unit transmission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FanoValue<T> {
    pub value: T,
    pub unphysical: bool,
}

#[inline]
fn fano_value<T: Real>(detuning: T, gamma: T, q: Complex<T>) -> T {
    let num = Complex::new(detuning, T::zero()) + q * gamma;
    num.norm_sqr() / (detuning * detuning + gamma * gamma)
}

#[inline]
fn exceeds_unity<T: Real>(value: T) -> bool {
    value > T::one() + T::lit(8.0) * T::epsilon()
}

/// |ε + qΓ|² / (ε² + Γ²).
pub fn fano_transmission<T: Real>(detuning: Energy<T>, gamma: Energy<T>, q: Complex<T>) -> Result<FanoValue<T>> {
    if !(gamma > T::zero()) {
        return Err(Error::Domain(format!("Gamma must be > 0, got {gamma}")));
    }
    let value = fano_value(detuning, gamma, q);
    Ok(FanoValue {
        value,
        unphysical: exceeds_unity(value),
    })
}

/// Initial panel cuts around a resonance at `center` of half-width `gamma`.
pub(crate) fn resonance_breakpoints<T: Real>(center: T, gamma: T) -> Vec<T> {
    let mut cuts = vec![center];
    for k in [1.0, 3.0, 10.0] {
        let d = T::lit(k) * gamma;
        cuts.push(center - d);
        cuts.push(center + d);
    }
    cuts
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmissionModel<T> {
    pub resonance: ResonanceSpec<T>,
    /// `None` for a wire without the dot channel (weight 0).
    pub orientation: Option<SpinOrientation>,
    /// Channel weight multiplying the reflection dip.
    pub weight: T,
    pub modes: Vec<Mode<T>>,
    coupled: usize,
}

impl<T: Real> TransmissionModel<T> {
    pub fn new(resonance: ResonanceSpec<T>, orientation: SpinOrientation, modes: Vec<Mode<T>>) -> Result<Self> {
        let mut m = Self::with_weight(resonance, orientation.weight(), modes)?;
        m.orientation = Some(orientation);
        Ok(m)
    }

    /// Same wire with the dot channel switched off.
    pub fn ballistic(resonance: ResonanceSpec<T>, modes: Vec<Mode<T>>) -> Result<Self> {
        Self::with_weight(resonance, T::zero(), modes)
    }

    /// Arbitrary channel weight; 1 and ½ are the physical spin orientations.
    pub fn with_weight(resonance: ResonanceSpec<T>, weight: T, modes: Vec<Mode<T>>) -> Result<Self> {
        if !(resonance.gamma > T::zero()) {
            return Err(Error::Domain(format!("Gamma must be > 0, got {}", resonance.gamma)));
        }
        let coupled: Vec<usize> = modes
            .iter()
            .enumerate()
            .filter(|(_, m)| m.coupled)
            .map(|(i, _)| i)
            .collect();
        if coupled.len() != 1 {
            return Err(Error::Domain(format!(
                "exactly one coupled mode required, found {}",
                coupled.len()
            )));
        }
        Ok(Self {
            resonance,
            orientation: None,
            weight,
            modes,
            coupled: coupled[0],
        })
    }

    /// Model for the spin orientation stored in `config`.
    pub fn from_config(config: &DeviceConfig<T>) -> Result<Self> {
        Self::new(resonance_for(config)?, config.orientation(), config.modes.clone())
    }

    pub fn reweighted(&self, weight: T) -> Self {
        Self {
            weight,
            orientation: None,
            ..self.clone()
        }
    }

    pub fn oriented(&self, orientation: SpinOrientation) -> Self {
        Self {
            weight: orientation.weight(),
            orientation: Some(orientation),
            ..self.clone()
        }
    }

    pub fn coupled_index(&self) -> usize {
        self.coupled
    }

    pub fn coupled_mode(&self) -> Mode<T> {
        self.modes[self.coupled]
    }

    /// Bare lineshape at total energy `e`.
    pub fn fano_at(&self, e: Energy<T>) -> T {
        let r = &self.resonance;
        fano_value(e - r.energy, r.gamma, r.q)
    }

    /// True if the lineshape exceeds unit transmission anywhere (complex q only).
    pub fn is_unphysical(&self) -> bool {
        let r = &self.resonance;
        if r.q.im == T::zero() && r.q.re == T::zero() {
            return false;
        }
        // |ε + qΓ|² - (ε² + Γ²) is quadratic in ε with leading coefficient 0:
        // 2ε Γ Re q + Γ²(|q|² - 1); positive somewhere unless Re q = 0 and |q| ≤ 1.
        r.q.re != T::zero() || exceeds_unity(r.q.norm_sqr())
    }

    pub fn breakpoints(&self) -> Vec<T> {
        let mut cuts = resonance_breakpoints(self.resonance.energy, self.resonance.gamma);
        cuts.extend(self.modes.iter().map(|m| m.bottom_energy));
        cuts
    }
}

/// Backscattering of the dot-coupled channel: w · (1 - T_fano(E - E_res)).
pub fn spin_channel_reflection<T: Real>(e: Energy<T>, model: &TransmissionModel<T>) -> Dimensionless<T> {
    model.weight * (T::one() - model.fano_at(e))
}

pub fn mode_transmission<T: Real>(e: Energy<T>, model: &TransmissionModel<T>, mode_index: usize) -> Result<Dimensionless<T>> {
    let mode = model.modes.get(mode_index).ok_or(Error::ModeIndex {
        index: mode_index,
        len: model.modes.len(),
    })?;
    Ok(mode_transmission_unchecked(e, model, mode))
}

#[inline]
pub(crate) fn mode_transmission_unchecked<T: Real>(e: T, model: &TransmissionModel<T>, mode: &Mode<T>) -> T {
    if e < mode.bottom_energy {
        T::zero()
    } else if mode.coupled {
        T::one() - spin_channel_reflection(e, model)
    } else {
        T::one()
    }
}

/// Reflection of one mode; closed modes carry no flux and report 0.
pub fn mode_reflection<T: Real>(e: Energy<T>, model: &TransmissionModel<T>, mode_index: usize) -> Result<Dimensionless<T>> {
    let mode = model.modes.get(mode_index).ok_or(Error::ModeIndex {
        index: mode_index,
        len: model.modes.len(),
    })?;
    Ok(if e >= mode.bottom_energy && mode.coupled {
        spin_channel_reflection(e, model)
    } else {
        T::zero()
    })
}

pub fn total_transmission<T: Real>(e: Energy<T>, model: &TransmissionModel<T>) -> Dimensionless<T> {
    model
        .modes
        .iter()
        .map(|m| mode_transmission_unchecked(e, model, m))
        .sum()
}

pub const MEAN_REFLECTION_ABS_TOL: f64 = 1e-9;

/// Window average of the coupled-channel reflection.
pub fn mean_reflection<T: Real>(model: &TransmissionModel<T>, e_lo: Energy<T>, e_hi: Energy<T>) -> Result<Dimensionless<T>> {
    if !e_lo.is_finite() || !e_hi.is_finite() {
        return Err(Error::Domain(format!("window must be finite, got [{e_lo}, {e_hi}]")));
    }
    if !(e_lo < e_hi) {
        return Err(Error::Domain(format!("window must satisfy lo < hi, got [{e_lo}, {e_hi}]")));
    }
    let width = e_hi - e_lo;
    let quad = Quadrature::new(T::lit(MEAN_REFLECTION_ABS_TOL) * width, T::zero());
    let cuts = resonance_breakpoints(model.resonance.energy, model.resonance.gamma);
    let integral = quad.integrate(|e| spin_channel_reflection(e, model), e_lo, e_hi, &cuts)?;
    Ok(integral.value / width)
}

/// Closed-form window average for q = 0.
pub fn mean_reflection_lorentzian<T: Real>(center: T, gamma: T, weight: T, e_lo: T, e_hi: T) -> T {
    let prim = |e: T| ((e - center) / gamma).atan();
    weight * gamma * (prim(e_hi) - prim(e_lo)) / (e_hi - e_lo)
}
