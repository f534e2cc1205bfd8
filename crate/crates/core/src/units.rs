//! Physical constants and unit conventions.
//!
//! Energies are carried in meV, biases in mV, temperatures in K, currents in A
//! and conductances in S. One meV of detuning corresponds to one mV of bias
//! per elementary charge, so energy and voltage values are numerically
//! interchangeable.

use crate::error::{Error, Result, ValidationErrors};
use crate::scalar::Real;

pub type Energy<T> = T;
pub type Voltage<T> = T;
pub type Temperature<T> = T;
pub type Current<T> = T;
pub type Conductance<T> = T;
pub type Dimensionless<T> = T;

/// CODATA 2018 values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants;

impl PhysicalConstants {
    /// Elementary charge, C.
    pub const E: f64 = 1.602176634e-19;
    /// Planck constant, J s.
    pub const H: f64 = 6.62607015e-34;
    /// Boltzmann constant, meV/K.
    pub const K_B: f64 = 8.617333262e-2;
    /// Reduced Planck constant, meV s.
    pub const HBAR: f64 = 6.582119569e-13;
    /// Conductance quantum for a spin-polarized channel, e^2/h in S.
    pub const G0_SPIN_POLARIZED: f64 = Self::E * Self::E / Self::H;
    /// Volts per meV of energy carried by one elementary charge.
    pub const VOLT_PER_MEV: f64 = 1e-3;
    /// Zeeman splitting at 5 T used as the comparison scale for spin-orbit splitting, meV.
    pub const ZEEMAN_REFERENCE: f64 = 0.3;

    pub fn k_b<T: Real>() -> T {
        T::lit(Self::K_B)
    }

    pub fn hbar<T: Real>() -> T {
        T::lit(Self::HBAR)
    }

    pub fn g0<T: Real>() -> T {
        T::lit(Self::G0_SPIN_POLARIZED)
    }

    /// Resistance quantum h/e^2 in ohms.
    pub fn resistance_quantum<T: Real>() -> T {
        T::lit(Self::H / (Self::E * Self::E))
    }
}

/// k_B T in meV.
pub fn thermal_energy<T: Real>(temperature: Temperature<T>) -> Result<Energy<T>> {
    if !(temperature >= T::zero()) || !temperature.is_finite() {
        let mut errs = ValidationErrors::default();
        errs.push("temperature", format!("must be finite and >= 0 K, got {temperature}"));
        return Err(Error::Validation(errs));
    }
    Ok(PhysicalConstants::k_b::<T>() * temperature)
}

/// Converts an energy integral in meV, weighted by e/h, into amperes.
pub(crate) fn current_from_energy_integral<T: Real>(integral_mev: T) -> Current<T> {
    PhysicalConstants::g0::<T>() * T::lit(PhysicalConstants::VOLT_PER_MEV) * integral_mev
}
