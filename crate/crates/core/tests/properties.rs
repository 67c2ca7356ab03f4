//! Structural properties over randomized parameters.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qrabi_core::fock;
use qrabi_core::gfunc::{self, Rep};
use qrabi_core::linalg::eigenvalues_sym;
use qrabi_core::model::{rabi_matrix_element, BasisState, ModelParams, Parity};

fn merged_block_values(p: &ModelParams, n_max: u32) -> Vec<f64> {
    let mut all = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        all.extend(eigenvalues_sym(&fock::parity_block(p, parity, n_max).0));
    }
    all.sort_by(f64::total_cmp);
    all
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flat_index_is_a_bijection(idx in 0usize..4096) {
        let s = BasisState::from_flat_index(idx);
        prop_assert_eq!(s.flat_index(), idx);
    }

    #[test]
    fn opposite_parity_elements_vanish_exactly(
        g1 in 0.0..2.0f64,
        g2 in 0.0..2.0f64,
        d1 in -2.0..2.0f64,
        d2 in -2.0..2.0f64,
        i in 0usize..40,
        j in 0usize..40,
    ) {
        let p = ModelParams::new(1.0, g1, g2, d1, d2).unwrap();
        let s = BasisState::from_flat_index(i);
        let t = BasisState::from_flat_index(j);
        if s.parity() != t.parity() {
            // bitwise zero: this is what makes the parity commutator exact
            prop_assert_eq!(rabi_matrix_element(&p, s, t), 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parity_blocks_cover_the_full_spectrum(
        g1 in 0.0..1.2f64,
        g2 in 0.0..1.2f64,
        d1 in -1.5..1.5f64,
        d2 in -1.5..1.5f64,
    ) {
        let p = ModelParams::new(1.0, g1, g2, d1, d2).unwrap();
        let full = eigenvalues_sym(&fock::hamiltonian(&p, 14));
        let merged = merged_block_values(&p, 14);
        prop_assert_eq!(full.len(), merged.len());
        for (a, b) in full.iter().zip(&merged) {
            prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
        }
    }

    #[test]
    fn decoupled_spectrum_is_closed_form(
        d1 in -1.5..1.5f64,
        d2 in -1.5..1.5f64,
    ) {
        let p = ModelParams::new(1.0, 0.0, 0.0, d1, d2).unwrap();
        let n_max = 10u32;
        let mut want: Vec<f64> = (0..=n_max)
            .flat_map(|n| {
                [1.0, -1.0]
                    .into_iter()
                    .flat_map(move |s1| [1.0, -1.0].map(|s2| n as f64 + s1 * d1 + s2 * d2))
            })
            .collect();
        want.sort_by(f64::total_cmp);
        let got = eigenvalues_sym(&fock::hamiltonian(&p, n_max));
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn branch_union_covers_the_full_spectrum(
        g1 in 0.0..1.2f64,
        g2 in 0.0..1.2f64,
        d1 in -1.5..1.5f64,
        d2 in -1.5..1.5f64,
    ) {
        let p = ModelParams::new(1.0, g1, g2, d1, d2).unwrap();
        let mut union = Vec::new();
        for parity in [Parity::Even, Parity::Odd] {
            union.extend(eigenvalues_sym(&gfunc::h_plus_minus_matrix(&p, 12, parity)));
        }
        union.sort_by(f64::total_cmp);
        let full = eigenvalues_sym(&fock::hamiltonian(&p, 12));
        prop_assert_eq!(full.len(), union.len());
        for (a, b) in full.iter().zip(&union) {
            prop_assert!((a - b).abs() <= 1e-10, "{} vs {}", a, b);
        }
    }

    #[test]
    fn recurrence_algebraic_relations_hold(
        g2 in 0.1..0.8f64,
        gap in 0.15..1.0f64,
        d1 in 0.1..1.5f64,
        d2 in 0.1..1.5f64,
        e in -1.0..3.0f64,
    ) {
        let p = ModelParams::new(1.0, g2 + gap, g2, d1, d2).unwrap();
        let (g, gp) = (p.g1 + p.g2, p.g1 - p.g2);
        if let Ok(t) = gfunc::recurrence_a(&p, e, 0, 160) {
            for m in 0..t.m_used {
                let lhs = (e - m as f64 + g * g) * t.rows[0][m];
                let rhs = d1 * t.rows[3][m] + d2 * t.rows[1][m];
                let scale = lhs.abs().max(rhs.abs()).max(1e-300);
                prop_assert!(((lhs - rhs) / scale).abs() <= 1e-12);
            }
        }
        if let Ok(t) = gfunc::recurrence_b(&p, e, 1, 160) {
            for m in 0..t.m_used {
                let lhs = (e - m as f64 + gp * gp) * t.rows[1][m];
                let rhs = d1 * t.rows[2][m] + d2 * t.rows[0][m];
                let scale = lhs.abs().max(rhs.abs()).max(1e-300);
                prop_assert!(((lhs - rhs) / scale).abs() <= 1e-12);
            }
        }
        let t = gfunc::recurrence_c(&p, e, 0, 160).unwrap();
        for m in 0..t.m_used {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert_eq!(t.rows[2][m], sign * t.rows[0][m]);
            prop_assert_eq!(t.rows[3][m], sign * t.rows[1][m]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn doubling_the_cutoff_leaves_low_levels_fixed(
        g1 in 0.05..0.6f64,
        g2 in 0.05..0.6f64,
        d1 in -1.0..1.0f64,
        d2 in -1.0..1.0f64,
    ) {
        let p = ModelParams::new(1.0, g1, g2, d1, d2).unwrap();
        let coarse = merged_block_values(&p, 40);
        let fine = merged_block_values(&p, 80);
        for k in 0..10 {
            prop_assert!((coarse[k] - fine[k]).abs() < 1e-9, "level {}: {} vs {}", k, coarse[k], fine[k]);
        }
    }
}

/// Asymptotic coefficient growth of each representation matches its declared
/// convergence radius over random admissible parameter draws.
#[test]
fn empirical_radii_match_declared_values() {
    let mut rng = StdRng::seed_from_u64(071_117);
    for draw in 0..10 {
        let g2 = rng.random_range(0.1..0.8);
        let g1 = g2 + rng.random_range(0.15..1.0);
        let d1 = rng.random_range(0.2..1.5);
        let d2 = rng.random_range(0.1..1.5);
        let p = ModelParams::new(1.0, g1, g2, d1, d2).unwrap();
        let e = [0.37, 0.83, 1.41, 2.19]
            .into_iter()
            .find(|&e| gfunc::recurrence_a(&p, e, 0, 8).is_ok() && gfunc::recurrence_b(&p, e, 0, 8).is_ok())
            .unwrap();
        let tables = [
            gfunc::recurrence_a(&p, e, 0, 400).unwrap(),
            gfunc::recurrence_b(&p, e, 0, 400).unwrap(),
            gfunc::recurrence_c(&p, e, 0, 400).unwrap(),
        ];
        let want = |rep: Rep| -> f64 {
            let (g, gp) = (g1 + g2, g1 - g2);
            match rep {
                Rep::A => (g - gp).abs(),
                Rep::B => (g - gp).abs().min(2.0 * gp.abs()),
                Rep::C => gp.abs(),
            }
        };
        for t in &tables {
            let m2 = t.m_used - 1;
            let m1 = m2 / 2;
            let peak = |m: usize| t.rows.iter().map(|r| r[m].abs()).fold(0.0, f64::max);
            let est = (peak(m1) / peak(m2)).powf(1.0 / (m2 - m1) as f64);
            let w = want(t.rep);
            assert!(
                (est - w).abs() / w < 0.05,
                "draw {draw} {:?}: estimated {est} vs declared {w} (g1={g1}, g2={g2})",
                t.rep
            );
        }
    }
}
