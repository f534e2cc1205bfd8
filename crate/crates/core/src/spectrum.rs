//! Two-electron spectrum of the dot: exchange plus spin-orbit splitting of the
//! excited (L = 1) configuration, level labeling, and the readout criteria
//! that depend on it.
//!
//! The basis is the product of the ground-electron spin `s0z`, the
//! excited-electron spin `s1z` and the excited-electron orbital projection
//! `l1z`, ordered lexicographically in `(l1z, s0z, s1z)` with `-` before `+`:
//!
//! | index | l1z | s0z | s1z |
//! |-------|-----|-----|-----|
//! | 0     | -1  | -½  | -½  |
//! | 1     | -1  | -½  | +½  |
//! | 2     | -1  | +½  | -½  |
//! | 3     | -1  | +½  | +½  |
//! | 4..7  | +1  | same pattern |
//!
//! Spins are dimensionless with eigenvalues ±½, so `S0·S1` is +¼ on the
//! triplet and -¾ on the singlet.

use std::ops::Neg;

use num_traits::Num;
use serde::Serialize;

use crate::config::DeviceConfig;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::units::{Energy, PhysicalConstants};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Spin {
    Down,
    Up,
}

impl Spin {
    /// Twice the z-projection: -1 or +1.
    pub fn twice_sz(self) -> i8 {
        match self {
            Spin::Down => -1,
            Spin::Up => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinBasisState {
    pub l1z: i8,
    pub s0z: Spin,
    pub s1z: Spin,
}

impl SpinBasisState {
    /// Total spin projection s0z + s1z (an integer).
    pub fn sz_total(self) -> i8 {
        (self.s0z.twice_sz() + self.s1z.twice_sz()) / 2
    }

    pub fn index(self) -> usize {
        let l = usize::from(self.l1z > 0);
        let a = usize::from(self.s0z == Spin::Up);
        let b = usize::from(self.s1z == Spin::Up);
        4 * l + 2 * a + b
    }
}

pub const DIM: usize = 8;

pub const BASIS: [SpinBasisState; DIM] = {
    use Spin::{Down, Up};
    [
        SpinBasisState { l1z: -1, s0z: Down, s1z: Down },
        SpinBasisState { l1z: -1, s0z: Down, s1z: Up },
        SpinBasisState { l1z: -1, s0z: Up, s1z: Down },
        SpinBasisState { l1z: -1, s0z: Up, s1z: Up },
        SpinBasisState { l1z: 1, s0z: Down, s1z: Down },
        SpinBasisState { l1z: 1, s0z: Down, s1z: Up },
        SpinBasisState { l1z: 1, s0z: Up, s1z: Down },
        SpinBasisState { l1z: 1, s0z: Up, s1z: Up },
    ]
};

/// An invariant subspace: fixed `l1z` and fixed total `Sz`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub l1z: i8,
    pub sz_total: i8,
    pub states: Vec<usize>,
}

/// Real symmetric 8x8 matrix of the two-electron Hamiltonian, excluding the
/// constant ground-level energy `eps0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix<T> {
    pub entries: [[T; DIM]; DIM],
    pub blocks: Vec<Block>,
}

impl<T> HamiltonianMatrix<T>
where
    T: Copy + Num + Neg<Output = T>,
{
    /// Builds `offset - J S0·S1 + beta L1z S1z` on the eight-state basis.
    ///
    /// Only ring operations are used, so exact scalar types work too.
    pub fn build(offset: T, exchange: T, beta: T) -> Self {
        let one = T::one();
        let two = one + one;
        let half = one / two;
        let sz = |s: Spin| match s {
            Spin::Up => half,
            Spin::Down => -half,
        };
        let l = |l1z: i8| if l1z > 0 { one } else { -one };

        let mut entries = [[T::zero(); DIM]; DIM];
        for (i, st) in BASIS.iter().enumerate() {
            entries[i][i] =
                offset - exchange * sz(st.s0z) * sz(st.s1z) + beta * l(st.l1z) * sz(st.s1z);
        }
        // flip-flop S0+ S1- + S0- S1+ carries 1/2 each; with -J in front
        for base in [0, 4] {
            let (du, ud) = (base + 1, base + 2);
            entries[du][ud] = -exchange * half;
            entries[ud][du] = -exchange * half;
        }

        let mut blocks = Vec::with_capacity(6);
        for l1z in [-1i8, 1] {
            for sz_total in [-1i8, 0, 1] {
                let states: Vec<usize> = BASIS
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.l1z == l1z && s.sz_total() == sz_total)
                    .map(|(i, _)| i)
                    .collect();
                blocks.push(Block { l1z, sz_total, states });
            }
        }
        Self { entries, blocks }
    }

    pub fn trace(&self) -> T {
        (0..DIM).fold(T::zero(), |acc, i| acc + self.entries[i][i])
    }

    pub fn is_symmetric(&self) -> bool
    where
        T: PartialEq,
    {
        (0..DIM).all(|i| (0..DIM).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// True when every entry outside the annotated blocks is exactly zero.
    pub fn is_block_diagonal(&self) -> bool
    where
        T: PartialEq,
    {
        let mut block_of = [usize::MAX; DIM];
        for (b, block) in self.blocks.iter().enumerate() {
            for &s in &block.states {
                block_of[s] = b;
            }
        }
        (0..DIM).all(|i| {
            (0..DIM).all(|j| block_of[i] == block_of[j] || self.entries[i][j] == T::zero())
        })
    }
}

pub fn two_electron_hamiltonian<T: Real>(config: &DeviceConfig<T>) -> HamiltonianMatrix<T> {
    HamiltonianMatrix::build(config.level_offset(), config.J, config.beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SpinCharacter {
    Singlet,
    Triplet,
    Mixed,
}

impl SpinCharacter {
    pub fn as_str(self) -> &'static str {
        match self {
            SpinCharacter::Singlet => "Singlet",
            SpinCharacter::Triplet => "Triplet",
            SpinCharacter::Mixed => "Mixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level<T> {
    /// Two-electron energy measured from the one-electron ground configuration, meV.
    pub energy: Energy<T>,
    pub character: SpinCharacter,
    pub sz_total: i8,
    pub l1z: i8,
    /// Number of eigenstates in the same `l1z` sector at this energy.
    pub degeneracy: usize,
    /// Reached by a wire electron whose spin is parallel to the dot spin.
    pub parallel_accessible: bool,
    /// Weight of the singlet (|↑↓⟩ - |↓↑⟩)/√2 in this eigenstate.
    pub singlet_weight: T,
}

/// One row per eigenstate, ascending in energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelDiagram<T> {
    pub levels: Vec<Level<T>>,
}

impl<T: Real> LevelDiagram<T> {
    fn tolerance(&self) -> T {
        let scale = self
            .levels
            .iter()
            .fold(T::zero(), |m, l| m.max(l.energy.abs()));
        T::lit(1e-10).max(T::lit(16.0) * T::epsilon() * scale)
    }

    pub fn energies(&self) -> Vec<T> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    /// Distinct energies over the whole spectrum with their multiplicities.
    pub fn distinct_energies(&self) -> Vec<(T, usize)> {
        let tol = self.tolerance();
        let mut out: Vec<(T, usize)> = Vec::new();
        for l in &self.levels {
            match out.last_mut() {
                Some((e, n)) if (l.energy - *e).abs() <= tol => *n += 1,
                _ => out.push((l.energy, 1)),
            }
        }
        out
    }

    pub fn sector(&self, l1z: i8) -> impl Iterator<Item = &Level<T>> {
        self.levels.iter().filter(move |l| l.l1z == l1z)
    }

    /// Energy differences between the singlet-like and triplet-like states
    /// are easiest read from here at beta = 0.
    pub fn distinct_in_sector(&self, l1z: i8) -> Vec<T> {
        let tol = self.tolerance();
        let mut out: Vec<T> = Vec::new();
        for l in self.sector(l1z) {
            if out.last().is_none_or(|e| (l.energy - *e).abs() > tol) {
                out.push(l.energy);
            }
        }
        out
    }
}

const CHARACTER_SLACK: f64 = 1e-12;

fn classify<T: Real>(singlet_weight: T) -> SpinCharacter {
    let slack = T::lit(CHARACTER_SLACK);
    if singlet_weight > T::half() + slack {
        SpinCharacter::Singlet
    } else if singlet_weight < T::half() - slack {
        SpinCharacter::Triplet
    } else {
        SpinCharacter::Mixed
    }
}

/// Diagonalizes each invariant block (1x1 or 2x2) in closed form and labels the eigenstates.
pub fn eigenlevels<T: Real>(h: &HamiltonianMatrix<T>) -> Result<LevelDiagram<T>> {
    let mut levels = Vec::with_capacity(DIM);
    for block in &h.blocks {
        match block.states.as_slice() {
            &[i] => {
                let st = BASIS[i];
                levels.push(Level {
                    energy: h.entries[i][i],
                    character: SpinCharacter::Triplet,
                    sz_total: block.sz_total,
                    l1z: block.l1z,
                    degeneracy: 0,
                    parallel_accessible: st.s0z == Spin::Up && st.s1z == Spin::Up,
                    singlet_weight: T::zero(),
                });
            }
            &[i, j] => {
                // i = |s0 down, s1 up>, j = |s0 up, s1 down>
                let (a, b, d) = (h.entries[i][i], h.entries[i][j], h.entries[j][j]);
                let mean = T::half() * (a + d);
                let diff = T::half() * (a - d);
                let radius = diff.hypot(b);
                let (hi_vec, lo_vec) = if b == T::zero() && diff == T::zero() {
                    // degenerate: keep the singlet/triplet pair as eigenbasis
                    let r = T::FRAC_1_SQRT_2();
                    ((r, r), (-r, r))
                } else {
                    let theta = T::half() * (b + b).atan2(a - d);
                    let (s, c) = theta.sin_cos();
                    ((c, s), (-s, c))
                };
                for (energy, (vi, vj)) in [(mean + radius, hi_vec), (mean - radius, lo_vec)] {
                    let overlap = (vj - vi) * T::FRAC_1_SQRT_2();
                    let w = overlap * overlap;
                    levels.push(Level {
                        energy,
                        character: classify(w),
                        sz_total: 0,
                        l1z: block.l1z,
                        degeneracy: 0,
                        parallel_accessible: false,
                        singlet_weight: w,
                    });
                }
            }
            other => {
                return Err(Error::Internal(format!(
                    "block of size {} is not reducible in closed form",
                    other.len()
                )))
            }
        }
    }

    levels.sort_by(|x, y| {
        x.energy
            .partial_cmp(&y.energy)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.l1z.cmp(&y.l1z))
            .then(y.sz_total.cmp(&x.sz_total))
    });
    let mut diagram = LevelDiagram { levels };
    let tol = diagram.tolerance();
    let snapshot: Vec<(T, i8)> = diagram.levels.iter().map(|l| (l.energy, l.l1z)).collect();
    for l in &mut diagram.levels {
        l.degeneracy = snapshot
            .iter()
            .filter(|(e, z)| *z == l.l1z && (*e - l.energy).abs() <= tol)
            .count();
    }
    Ok(diagram)
}

/// Resonance seen by the wire electrons: position, width and Fano factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceSpec<T> {
    pub energy: Energy<T>,
    pub gamma: Energy<T>,
    pub q: num_complex::Complex<T>,
}

/// The spin-aligned stretched sublevel |↑↑⟩, lower spin-orbit branch.
///
/// The other branch stays in the diagram with `parallel_accessible` set.
pub fn target_level<T: Real>(diagram: &LevelDiagram<T>, config: &DeviceConfig<T>) -> Result<ResonanceSpec<T>> {
    let energy = diagram
        .levels
        .iter()
        .filter(|l| l.parallel_accessible)
        .map(|l| l.energy)
        .fold(None, |m: Option<T>, e| Some(m.map_or(e, |m| m.min(e))))
        .ok_or_else(|| Error::Internal("level diagram has no parallel-accessible level".into()))?;
    Ok(ResonanceSpec {
        energy,
        gamma: config.Gamma,
        q: config.q,
    })
}

/// Spectrum and target resonance straight from a configuration.
pub fn resonance_for<T: Real>(config: &DeviceConfig<T>) -> Result<ResonanceSpec<T>> {
    let diagram = eigenlevels(&two_electron_hamiltonian(config))?;
    target_level(&diagram, config)
}

pub const DEFAULT_STRICTNESS: f64 = 3.0;

/// Outcome of an "A ≫ B" check, kept with its margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleCriterion<T> {
    pub satisfied: bool,
    /// Splitting over broadening.
    pub ratio: T,
    pub strictness: T,
}

fn scale_check<T: Real>(splitting: T, gamma: T, strictness: T) -> ScaleCriterion<T> {
    let ratio = splitting.abs() / gamma;
    ScaleCriterion {
        satisfied: ratio >= strictness,
        ratio,
        strictness,
    }
}

/// Spin-orbit splitting large enough to forbid the flip-flop process: |beta| ≥ strictness·Gamma.
pub fn spin_flip_blocked<T: Real>(config: &DeviceConfig<T>, strictness: T) -> ScaleCriterion<T> {
    scale_check(config.beta, config.Gamma, strictness)
}

/// Singlet and triplet resolvable: |J| ≥ strictness·Gamma.
pub fn levels_distinguishable<T: Real>(config: &DeviceConfig<T>, strictness: T) -> ScaleCriterion<T> {
    scale_check(config.J, config.Gamma, strictness)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinFlipTime<T> {
    pub seconds: T,
    pub infinite: bool,
}

/// Exchange-driven flip-flop time ħ/|J|.
pub fn spin_flip_time<T: Real>(exchange: Energy<T>) -> SpinFlipTime<T> {
    if exchange == T::zero() {
        return SpinFlipTime {
            seconds: T::infinity(),
            infinite: true,
        };
    }
    SpinFlipTime {
        seconds: PhysicalConstants::hbar::<T>() / exchange.abs(),
        infinite: false,
    }
}
