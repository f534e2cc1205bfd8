//! Dot spectrum against a dense eigensolver, closed forms and exact arithmetic.

use nalgebra::{Matrix4, SymmetricEigen};
use num_rational::Ratio;
use proptest::prelude::*;
use spinfano::spectrum::{eigenlevels, HamiltonianMatrix, SpinCharacter, DIM};

fn closed_form(offset: f64, j: f64, beta: f64) -> Vec<f64> {
    let r = 0.5 * (j * j + beta * beta).sqrt();
    let mut v = Vec::new();
    for _ in 0..2 {
        v.extend([
            offset - j / 4.0 + beta / 2.0,
            offset - j / 4.0 - beta / 2.0,
            offset + j / 4.0 + r,
            offset + j / 4.0 - r,
        ]);
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn dense_eigenvalues(h: &HamiltonianMatrix<f64>) -> Vec<f64> {
    // two 4x4 sectors; off-sector entries are checked to be zero separately
    let mut out = Vec::new();
    for base in [0, 4] {
        let m = Matrix4::from_fn(|i, j| h.entries[base + i][base + j]);
        out.extend(SymmetricEigen::new(m).eigenvalues.iter().copied());
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

proptest! {
    #[test]
    fn eigenvalues_match_closed_form_and_dense_solver(
        offset in -20.0..20.0f64,
        j in -10.0..10.0f64,
        beta in -10.0..10.0f64,
    ) {
        let h = HamiltonianMatrix::build(offset, j, beta);
        let d = eigenlevels(&h).unwrap();
        let got = d.energies();
        let want = closed_form(offset, j, beta);
        let dense = dense_eigenvalues(&h);
        for i in 0..DIM {
            prop_assert!((got[i] - want[i]).abs() <= 1e-10, "{} vs {}", got[i], want[i]);
            prop_assert!((got[i] - dense[i]).abs() <= 1e-10, "{} vs dense {}", got[i], dense[i]);
        }
    }

    #[test]
    fn spin_orbit_sign_flip_preserves_spectrum(j in -10.0..10.0f64, beta in -10.0..10.0f64) {
        let a = eigenlevels(&HamiltonianMatrix::build(3.0, j, beta)).unwrap().energies();
        let b = eigenlevels(&HamiltonianMatrix::build(3.0, j, -beta)).unwrap().energies();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn gap_equals_exchange_without_spin_orbit(j in -10.0..10.0f64) {
        let d = eigenlevels(&HamiltonianMatrix::build(1.5, j, 0.0)).unwrap();
        for l1z in [-1, 1] {
            let singlet = d.sector(l1z).find(|l| l.character == SpinCharacter::Singlet).unwrap().energy;
            let triplet: Vec<f64> = d.sector(l1z).filter(|l| l.character == SpinCharacter::Triplet).map(|l| l.energy).collect();
            prop_assert_eq!(triplet.len(), 3);
            for t in triplet {
                prop_assert!((singlet - t - j).abs() <= 4.0 * f64::EPSILON * (1.5 + j.abs()));
            }
        }
    }

    #[test]
    fn exactly_one_parallel_level_per_sector(j in -10.0..10.0f64, beta in -10.0..10.0f64) {
        let d = eigenlevels(&HamiltonianMatrix::build(0.0, j, beta)).unwrap();
        for l1z in [-1, 1] {
            prop_assert_eq!(d.sector(l1z).filter(|l| l.parallel_accessible).count(), 1);
        }
        prop_assert!(d.levels.windows(2).all(|w| w[0].energy <= w[1].energy));
    }

    #[test]
    fn exact_rational_structure(
        on in -50i64..50, od in 1i64..8,
        jn in -50i64..50, jd in 1i64..8,
        bn in -50i64..50, bd in 1i64..8,
    ) {
        let offset = Ratio::new(on, od);
        let h = HamiltonianMatrix::build(offset, Ratio::new(jn, jd), Ratio::new(bn, bd));
        prop_assert!(h.is_symmetric());
        prop_assert!(h.is_block_diagonal());
        prop_assert_eq!(h.trace(), offset * Ratio::from_integer(8));
    }
}

#[test]
fn gap_is_bit_exact_for_dyadic_exchange() {
    for j in [-8.0, -2.5, -0.125, 0.0, 0.5, 1.0, 3.0, 5.0, 6.25] {
        let d = eigenlevels(&HamiltonianMatrix::build(0.0, j, 0.0)).unwrap();
        let singlet = d.levels.iter().find(|l| l.character == SpinCharacter::Singlet).unwrap();
        let triplet = d.levels.iter().find(|l| l.character == SpinCharacter::Triplet).unwrap();
        assert_eq!(singlet.energy - triplet.energy, j);
    }
}

#[test]
fn f32_spectrum_agrees() {
    let d32 = eigenlevels(&HamiltonianMatrix::build(10.0f32, 1.0, 0.5)).unwrap();
    let d64 = eigenlevels(&HamiltonianMatrix::build(10.0f64, 1.0, 0.5)).unwrap();
    for (a, b) in d32.energies().iter().zip(d64.energies()) {
        assert!((f64::from(*a) - b).abs() < 1e-5);
    }
}
