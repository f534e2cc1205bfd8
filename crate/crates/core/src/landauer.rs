//! Landauer current of the spin-polarized wire and its bias derivatives.
//!
//! I = (e/h) Σᵢ ∫ dE Tᵢ(E) [f_s(E) - f_d(E)], with e/h (no spin factor 2)
//! since the wire carries one spin species. The current is split into the
//! ballistic part, integrated in closed form, and the dip removed by the
//! dot-coupled channel, integrated adaptively:
//!
//! I(w) = I_ballistic - w · I_dip
//!
//! so the deficit is linear in the channel weight `w` by construction.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::DeviceConfig;
use crate::error::{Error, Result};
use crate::quadrature::Quadrature;
use crate::scalar::Real;
use crate::transport::{total_transmission, TransmissionModel};
use crate::units::{
    current_from_energy_integral, thermal_energy, Conductance, Current, Dimensionless, Energy,
    PhysicalConstants, Temperature, Voltage,
};

/// Thermal padding of the integration window in units of kT.
pub const THERMAL_PADDING: f64 = 40.0;
/// Resonance padding of the integration window in units of Gamma.
pub const RESONANCE_PADDING: f64 = 10.0;
pub const CURRENT_REL_TOL: f64 = 1e-8;

/// Fermi-Dirac occupation; a step with value ½ at `e == mu` when T = 0.
pub fn fermi<T: Real>(e: Energy<T>, mu: Energy<T>, temperature: Temperature<T>) -> Dimensionless<T> {
    let kt = PhysicalConstants::k_b::<T>() * temperature;
    if kt == T::zero() {
        return if e < mu {
            T::one()
        } else if e > mu {
            T::zero()
        } else {
            T::half()
        };
    }
    let x = (e - mu) / kt;
    if x > T::zero() {
        let t = (-x).exp();
        t / (T::one() + t)
    } else {
        T::one() / (T::one() + x.exp())
    }
}

/// 1 - f, accurate deep below mu.
fn fermi_hole<T: Real>(x: T) -> T {
    if x < T::zero() {
        let t = x.exp();
        t / (T::one() + t)
    } else {
        T::one() / (T::one() + (-x).exp())
    }
}

fn fermi_particle<T: Real>(x: T) -> T {
    fermi_hole(-x)
}

/// f_s - f_d at kT > 0 without cancellation when both occupations are near 1.
fn occupation_difference<T: Real>(e: T, mu_s: T, mu_d: T, kt: T) -> T {
    let xs = (e - mu_s) / kt;
    let xd = (e - mu_d) / kt;
    if xs < T::zero() && xd < T::zero() {
        fermi_hole(xd) - fermi_hole(xs)
    } else {
        fermi_particle(xs) - fermi_particle(xd)
    }
}

/// ln(1 + eˣ) without overflow.
fn softplus<T: Real>(x: T) -> T {
    if x > T::zero() {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// ∫_{bottom}^{∞} f(E; mu) dE in meV.
fn occupied_above<T: Real>(bottom: T, mu: T, kt: T) -> T {
    if kt == T::zero() {
        (mu - bottom).max(T::zero())
    } else {
        kt * softplus((mu - bottom) / kt)
    }
}

/// Electrochemical potentials of the two contacts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasPoint<T> {
    pub mu_source: Energy<T>,
    pub mu_drain: Energy<T>,
    pub temperature: Temperature<T>,
}

impl<T: Real> BiasPoint<T> {
    pub fn new(mu_source: T, mu_drain: T, temperature: T) -> Result<Self> {
        thermal_energy(temperature)?;
        if !mu_source.is_finite() || !mu_drain.is_finite() {
            return Err(Error::Domain("chemical potentials must be finite".into()));
        }
        Ok(Self {
            mu_source,
            mu_drain,
            temperature,
        })
    }

    /// Bias split symmetrically about the equilibrium potential `mu`:
    /// mu_s = mu + V/2, mu_d = mu - V/2.
    pub fn symmetric(mu: Energy<T>, bias: Voltage<T>, temperature: T) -> Result<Self> {
        let half = T::half() * bias;
        Self::new(mu + half, mu - half, temperature)
    }

    pub fn from_config(config: &DeviceConfig<T>) -> Result<Self> {
        Self::symmetric(config.mu_source, config.V_sd, config.temperature)
    }

    /// e·V_sd = mu_s - mu_d, in mV.
    pub fn voltage(&self) -> Voltage<T> {
        self.mu_source - self.mu_drain
    }
}

/// Both contributions to the current, in amperes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurrentParts<T> {
    /// Current with every open mode perfectly transmitting.
    pub ballistic: Current<T>,
    /// Current removed by a unit-weight dot channel.
    pub dip: Current<T>,
    pub weight: T,
}

impl<T: Real> CurrentParts<T> {
    pub fn total(&self) -> Current<T> {
        self.ballistic - self.weight * self.dip
    }

    /// Ballistic minus actual current.
    pub fn deficit(&self) -> Current<T> {
        self.weight * self.dip
    }
}

pub fn current_parts<T: Real>(bias: &BiasPoint<T>, model: &TransmissionModel<T>) -> Result<CurrentParts<T>> {
    let kt = thermal_energy(bias.temperature)?;
    let (mu_s, mu_d) = (bias.mu_source, bias.mu_drain);

    let ballistic_mev: T = model
        .modes
        .iter()
        .map(|m| occupied_above(m.bottom_energy, mu_s, kt) - occupied_above(m.bottom_energy, mu_d, kt))
        .sum();

    let dip_mev = if mu_s == mu_d {
        T::zero()
    } else {
        dip_integral(bias, model, kt)?
    };

    Ok(CurrentParts {
        ballistic: current_from_energy_integral(ballistic_mev),
        dip: current_from_energy_integral(dip_mev),
        weight: model.weight,
    })
}

/// ∫ (1 - T_fano(E)) (f_s - f_d) dE over the coupled mode's support, meV.
fn dip_integral<T: Real>(bias: &BiasPoint<T>, model: &TransmissionModel<T>, kt: T) -> Result<T> {
    let (mu_s, mu_d) = (bias.mu_source, bias.mu_drain);
    let bottom = model.coupled_mode().bottom_energy;
    let res = &model.resonance;
    let mut cuts = model.breakpoints();
    cuts.push(mu_s);
    cuts.push(mu_d);

    let scale = (mu_s - mu_d).abs() + kt + res.gamma;
    let quad = Quadrature::new(T::lit(1e-16) * scale, T::lit(CURRENT_REL_TOL));

    if kt == T::zero() {
        let (lo, hi, sign) = if mu_s > mu_d {
            (mu_d, mu_s, T::one())
        } else {
            (mu_s, mu_d, -T::one())
        };
        let lo = lo.max(bottom);
        if hi <= lo {
            return Ok(T::zero());
        }
        let r = quad.integrate(|e| T::one() - model.fano_at(e), lo, hi, &cuts)?;
        return Ok(sign * r.value);
    }

    let pad_t = T::lit(THERMAL_PADDING) * kt;
    let pad_g = T::lit(RESONANCE_PADDING) * res.gamma;
    let lo = mu_s.min(mu_d).min(res.energy) - pad_t - pad_g;
    let hi = mu_s.max(mu_d).max(res.energy) + pad_t + pad_g;
    let lo = lo.max(bottom);
    if hi <= lo {
        return Ok(T::zero());
    }
    for mu in [mu_s, mu_d] {
        for k in [-5.0, 5.0] {
            cuts.push(mu + T::lit(k) * kt);
        }
    }
    let r = quad.integrate(
        |e| (T::one() - model.fano_at(e)) * occupation_difference(e, mu_s, mu_d, kt),
        lo,
        hi,
        &cuts,
    )?;
    Ok(r.value)
}

/// Landauer current in amperes.
pub fn current<T: Real>(bias: &BiasPoint<T>, model: &TransmissionModel<T>) -> Result<Current<T>> {
    Ok(current_parts(bias, model)?.total())
}

fn conductance_step<T: Real>(model: &TransmissionModel<T>, kt: T) -> T {
    kt.min(model.resonance.gamma) / T::lit(50.0)
}

fn central_difference<T: Real>(model: &TransmissionModel<T>, mu: T, v: T, temperature: T, h: T) -> Result<T> {
    let up = current(&BiasPoint::symmetric(mu, v + h, temperature)?, model)?;
    let down = current(&BiasPoint::symmetric(mu, v - h, temperature)?, model)?;
    Ok((up - down) / (T::two() * h))
}

/// dI/dV at bias `v` (mV) with the bias split symmetrically about `mu`, in S.
///
/// At T = 0 this is exact: G₀ · ½ [T(mu + V/2) + T(mu - V/2)]. Otherwise a
/// Richardson-extrapolated central difference with step min(kT, Gamma)/50.
pub fn differential_conductance<T: Real>(
    model: &TransmissionModel<T>,
    mu: Energy<T>,
    v: Voltage<T>,
    temperature: Temperature<T>,
) -> Result<Conductance<T>> {
    let kt = thermal_energy(temperature)?;
    if kt == T::zero() {
        let half = T::half() * v;
        let t = T::half() * (total_transmission(mu + half, model) + total_transmission(mu - half, model));
        return Ok(PhysicalConstants::g0::<T>() * t);
    }
    let h = conductance_step(model, kt);
    let coarse = central_difference(model, mu, v, temperature, h)?;
    let fine = central_difference(model, mu, v, temperature, T::half() * h)?;
    let slope = (T::lit(4.0) * fine - coarse) / T::lit(3.0);
    // mV -> V
    Ok(slope / T::lit(PhysicalConstants::VOLT_PER_MEV))
}

/// Zero-bias conductance with equilibrium potential `mu`, in S.
pub fn linear_conductance<T: Real>(model: &TransmissionModel<T>, temperature: Temperature<T>, mu: Energy<T>) -> Result<Conductance<T>> {
    differential_conductance(model, mu, T::zero(), temperature)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IVPoint<T> {
    pub voltage: Voltage<T>,
    pub current: Current<T>,
    pub conductance: Conductance<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IVCurve<T> {
    pub points: Vec<IVPoint<T>>,
}

fn check_grid<T: Real>(grid: &[T]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("bias grid is empty".into()));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("bias grid has non-finite entries".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("bias grid must be strictly increasing".into()));
    }
    Ok(())
}

/// I-V curve for an explicit model; grid points are evaluated in parallel and
/// returned in grid order.
pub fn iv_curve_for_model<T: Real>(
    model: &TransmissionModel<T>,
    mu: Energy<T>,
    temperature: Temperature<T>,
    grid: &[Voltage<T>],
) -> Result<IVCurve<T>> {
    check_grid(grid)?;
    let points = grid
        .par_iter()
        .map(|&v| {
            let at = |e: Error| Error::AtBias {
                voltage: v.to_f64_lossy(),
                source: Box::new(e),
            };
            let bias = BiasPoint::symmetric(mu, v, temperature).map_err(at)?;
            let i = current(&bias, model).map_err(at)?;
            let g = differential_conductance(model, mu, v, temperature).map_err(at)?;
            Ok(IVPoint {
                voltage: v,
                current: i,
                conductance: g,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IVCurve { points })
}

/// I-V curve for the spin orientation and bias point stored in `config`.
pub fn iv_curve<T: Real>(config: &DeviceConfig<T>, grid: &[Voltage<T>]) -> Result<IVCurve<T>> {
    let model = TransmissionModel::from_config(config)?;
    iv_curve_for_model(&model, config.mu_source, config.temperature, grid)
}

/// Bias maximizing the readout signal, V = Gamma/e, in mV.
pub fn optimal_bias<T: Real>(gamma: Energy<T>) -> Voltage<T> {
    gamma
}
