//! Globally adaptive Gauss-Kronrod (7/15) quadrature with user breakpoints.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Real;

// Kronrod abscissae (positive half, descending); odd indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_panels: usize,
}

impl<T: Real> Default for Quadrature<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-12),
            rel_tol: T::lit(1e-10),
            max_panels: 4000,
        }
    }
}

struct Panel<T> {
    lo: T,
    hi: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// One 15-point Kronrod panel: (kronrod, |kronrod - gauss|, integral of |f|).
fn gk15<T: Real, F: Fn(T) -> T>(f: &F, lo: T, hi: T) -> (T, T, T) {
    let center = T::half() * (lo + hi);
    let half = T::half() * (hi - lo);
    let fc = f(center);
    let mut kronrod = T::lit(WGK[7]) * fc;
    let mut gauss = T::lit(WG[3]) * fc;
    let mut abs = kronrod.abs();
    for i in 0..7 {
        let dx = half * T::lit(XGK[i]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let w = T::lit(WGK[i]);
        kronrod += w * (f1 + f2);
        abs += w * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            gauss += T::lit(WG[i / 2]) * (f1 + f2);
        }
    }
    let k = kronrod * half;
    let g = gauss * half;
    (k, (k - g).abs(), abs * half.abs())
}

impl<T: Real> Quadrature<T> {
    pub fn new(abs_tol: T, rel_tol: T) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }

    /// Integrates `f` over `[lo, hi]`, starting from panels split at every
    /// breakpoint strictly inside the interval.
    pub fn integrate<F: Fn(T) -> T>(&self, f: F, lo: T, hi: T, breakpoints: &[T]) -> Result<Integral<T>> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain(format!("integration limits must be finite, got [{lo}, {hi}]")));
        }
        if lo == hi {
            return Ok(Integral {
                value: T::zero(),
                error: T::zero(),
                panels: 0,
            });
        }
        if hi < lo {
            let r = self.integrate(f, hi, lo, breakpoints)?;
            return Ok(Integral { value: -r.value, ..r });
        }

        let mut cuts: Vec<T> = breakpoints
            .iter()
            .copied()
            .filter(|x| x.is_finite() && *x > lo && *x < hi)
            .collect();
        cuts.push(lo);
        cuts.push(hi);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        cuts.dedup();

        let mut heap = BinaryHeap::new();
        let mut total = T::zero();
        let mut total_err = T::zero();
        let mut total_abs = T::zero();
        for w in cuts.windows(2) {
            let (v, e, a) = gk15(&f, w[0], w[1]);
            total += v;
            total_err += e;
            total_abs += a;
            heap.push(Panel { lo: w[0], hi: w[1], value: v, error: e });
        }

        let eps = T::epsilon();
        let floor = T::lit(50.0) * eps;
        loop {
            let target = self
                .abs_tol
                .max(self.rel_tol * total.abs())
                .max(floor * total_abs);
            if total_err <= target {
                break;
            }
            if heap.len() >= self.max_panels {
                return Err(self.failure(lo, hi, total_err, heap.len()));
            }
            let worst = heap.pop().expect("non-empty");
            let mid = T::half() * (worst.lo + worst.hi);
            if !(mid > worst.lo && mid < worst.hi) {
                // panel narrower than the floating-point grid
                return Err(self.failure(lo, hi, total_err, heap.len() + 1));
            }
            let (v1, e1, a1) = gk15(&f, worst.lo, mid);
            let (v2, e2, a2) = gk15(&f, mid, worst.hi);
            total += v1 + v2 - worst.value;
            total_err += e1 + e2 - worst.error;
            total_abs += a1 + a2;
            heap.push(Panel { lo: worst.lo, hi: mid, value: v1, error: e1 });
            heap.push(Panel { lo: mid, hi: worst.hi, value: v2, error: e2 });
        }

        // re-sum to shed the drift of the running updates
        let panels = heap.len();
        let mut parts: Vec<Panel<T>> = heap.into_vec();
        parts.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap_or(Ordering::Equal));
        let value = parts.iter().map(|p| p.value).sum();
        let error = parts.iter().map(|p| p.error).sum();
        Ok(Integral { value, error, panels })
    }

    fn failure(&self, lo: T, hi: T, err: T, panels: usize) -> Error {
        Error::Quadrature {
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
            error: err.to_f64_lossy(),
            panels,
        }
    }
}
