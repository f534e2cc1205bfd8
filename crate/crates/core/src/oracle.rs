//! Independent transmission oracle: an infinite tight-binding chain with one
//! level side-coupled to site 0 (the Fano-Anderson geometry).
//!
//! Method: retarded Green's function. Each semi-infinite lead contributes the
//! surface self-energy Σ(E) = (E - i√(4t² - E²))/2 on site 0, with band
//! E = -2t cos k. Eliminating the side site gives
//!
//! G₀₀ = (E - ε_d) / [(E - 2Σ)(E - ε_d) - t'²]
//!
//! and with Γ = -2 Im Σ = √(4t² - E²) (one lead),
//! T = Γ² |G₀₀|², r = -1 + iΓ G₀₀, R = |r|².
//! T and R are computed separately, so T + R = 1 is a real check.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::units::Energy;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleLattice<T> {
    /// Nearest-neighbour hopping t, meV.
    pub hopping: T,
    /// Side level relative to the band centre, meV.
    pub eps_d: T,
    /// Chain-to-level hopping t', meV.
    pub coupling: T,
}

impl<T: Real> OracleLattice<T> {
    pub fn new(hopping: T, eps_d: T, coupling: T) -> Result<Self> {
        if !(hopping > T::zero()) || !hopping.is_finite() {
            return Err(Error::Domain(format!("hopping must be finite and > 0, got {hopping}")));
        }
        if !(coupling >= T::zero()) || !coupling.is_finite() {
            return Err(Error::Domain(format!("coupling must be finite and >= 0, got {coupling}")));
        }
        if !eps_d.is_finite() {
            return Err(Error::Domain("side level must be finite".into()));
        }
        Ok(Self {
            hopping,
            eps_d,
            coupling,
        })
    }

    pub fn band_edge(&self) -> T {
        T::two() * self.hopping
    }

    pub fn in_band(&self, e: T) -> bool {
        e.abs() < self.band_edge()
    }

    /// Wavevector k in (0, π) of a propagating state at energy `e`.
    pub fn wavevector(&self, e: T) -> Result<T> {
        self.check(e)?;
        Ok((-e / self.band_edge()).acos())
    }

    fn check(&self, e: T) -> Result<()> {
        if !self.in_band(e) {
            return Err(Error::Domain(format!(
                "energy {e} outside the open band (-{0}, {0})",
                self.band_edge()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scattering<T> {
    pub transmission: T,
    pub reflection: T,
}

pub fn oracle_scattering<T: Real>(e: Energy<T>, lattice: &OracleLattice<T>) -> Result<Scattering<T>> {
    lattice.check(e)?;
    let t = lattice.hopping;
    let root = (T::lit(4.0) * t * t - e * e).sqrt();
    let sigma = Complex::new(T::half() * e, -T::half() * root);
    let broadening = -T::two() * sigma.im;

    let detune = Complex::new(e - lattice.eps_d, T::zero());
    let tp2 = lattice.coupling * lattice.coupling;
    let bare = Complex::new(e, T::zero()) - sigma * T::two();
    let g00 = if tp2 == T::zero() {
        bare.inv()
    } else {
        detune / (bare * detune - tp2)
    };

    let transmission = broadening * broadening * g00.norm_sqr();
    let r = Complex::new(T::zero(), broadening) * g00 - T::one();
    Ok(Scattering {
        transmission,
        reflection: r.norm_sqr(),
    })
}

pub fn oracle_transmission<T: Real>(e: Energy<T>, lattice: &OracleLattice<T>) -> Result<T> {
    Ok(oracle_scattering(e, lattice)?.transmission)
}

fn t_at<T: Real>(e: T, lattice: &OracleLattice<T>) -> T {
    oracle_transmission(e, lattice).unwrap_or(T::one())
}

/// Location of the transmission minimum nearest the bare side level.
///
/// Golden-section search on a bracket that stays clear of the band edges,
/// where the transmission also drops to zero.
pub fn dip_minimum<T: Real>(lattice: &OracleLattice<T>) -> Result<Energy<T>> {
    lattice.check(lattice.eps_d)?;
    let edge = lattice.band_edge();
    let room = (edge - lattice.eps_d.abs()) * T::half();
    let (mut a, mut b) = (lattice.eps_d - room, lattice.eps_d + room);
    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (t_at(c, lattice), t_at(d, lattice));
    for _ in 0..200 {
        if !(b - a > T::epsilon() * edge) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = t_at(c, lattice);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = t_at(d, lattice);
        }
    }
    // the bare level is a candidate too: the dip may sit exactly on it
    let best = if fc <= fd { c } else { d };
    Ok(if t_at(lattice.eps_d, lattice) <= t_at(best, lattice) {
        lattice.eps_d
    } else {
        best
    })
}

/// Left and right half-widths at T = ½ about `center`.
pub fn half_widths<T: Real>(lattice: &OracleLattice<T>, center: Energy<T>) -> Result<(T, T)> {
    let depth = oracle_transmission(center, lattice)?;
    if depth > T::half() {
        return Err(Error::Extraction(format!(
            "dip minimum T = {depth} is shallower than 0.5"
        )));
    }
    let side = |dir: T| -> Result<T> {
        let mut inner = T::zero();
        let mut outer = T::lit(1e-9) * lattice.hopping;
        loop {
            let e = center + dir * outer;
            if !lattice.in_band(e) {
                return Err(Error::Extraction("half-depth point not reached inside the band".into()));
            }
            if t_at(e, lattice) >= T::half() {
                break;
            }
            inner = outer;
            outer *= T::two();
        }
        // bisect to floating-point resolution
        for _ in 0..200 {
            let mid = T::half() * (inner + outer);
            if !(mid > inner && mid < outer) {
                break;
            }
            if t_at(center + dir * mid, lattice) >= T::half() {
                outer = mid;
            } else {
                inner = mid;
            }
        }
        Ok(T::half() * (inner + outer))
    };
    Ok((side(-T::one())?, side(T::one())?))
}

/// Half-width at half depth of the oracle dip: mean of the two half-widths.
pub fn effective_broadening<T: Real>(lattice: &OracleLattice<T>, center: Energy<T>) -> Result<Energy<T>> {
    if lattice.coupling == T::zero() {
        return Ok(T::zero());
    }
    let (l, r) = half_widths(lattice, center)?;
    Ok(T::half() * (l + r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleRow<T> {
    pub energy: T,
    pub t_oracle: T,
    pub t_fano: T,
    pub abs_deviation: T,
    pub unitarity_error: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleComparison<T> {
    pub dip_center: T,
    pub gamma_eff: T,
    pub gamma_left: T,
    pub gamma_right: T,
    pub max_deviation: T,
    pub max_unitarity_error: T,
    pub rows: Vec<OracleRow<T>>,
}

pub const COMPARISON_POINTS: usize = 1001;

/// Oracle versus the q = 0 lineshape with Gamma = Gamma_eff, on a
/// 1001-point grid spanning ±`window_halfwidth`·Gamma_eff about the dip.
pub fn compare_to_fano<T: Real>(lattice: &OracleLattice<T>, window_halfwidth: T) -> Result<OracleComparison<T>> {
    if !(window_halfwidth > T::zero()) {
        return Err(Error::Domain("window half-width must be > 0".into()));
    }
    if lattice.coupling == T::zero() {
        // both lineshapes are identically 1
        return Ok(OracleComparison {
            dip_center: lattice.eps_d,
            gamma_eff: T::zero(),
            gamma_left: T::zero(),
            gamma_right: T::zero(),
            max_deviation: T::zero(),
            max_unitarity_error: T::zero(),
            rows: Vec::new(),
        });
    }
    let center = dip_minimum(lattice)?;
    let (left, right) = half_widths(lattice, center)?;
    let gamma = T::half() * (left + right);
    let span = window_halfwidth * gamma;
    let n = COMPARISON_POINTS;
    let mut rows = Vec::with_capacity(n);
    let mut max_dev = T::zero();
    let mut max_unit = T::zero();
    for i in 0..n {
        let frac = T::lit(i as f64 / (n - 1) as f64);
        let e = center - span + T::two() * span * frac;
        let s = oracle_scattering(e, lattice)?;
        let eps = e - center;
        let t_fano = eps * eps / (eps * eps + gamma * gamma);
        let dev = (s.transmission - t_fano).abs();
        let unit = (s.transmission + s.reflection - T::one()).abs();
        max_dev = max_dev.max(dev);
        max_unit = max_unit.max(unit);
        rows.push(OracleRow {
            energy: e,
            t_oracle: s.transmission,
            t_fano,
            abs_deviation: dev,
            unitarity_error: unit,
        });
    }
    Ok(OracleComparison {
        dip_center: center,
        gamma_eff: gamma,
        gamma_left: left,
        gamma_right: right,
        max_deviation: max_dev,
        max_unitarity_error: max_unit,
        rows,
    })
}
