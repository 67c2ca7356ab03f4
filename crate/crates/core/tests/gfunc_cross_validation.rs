//! Cross-checks of the series root finder against the dense solver.
//!
//! The reference lists below were produced by diagonalizing the truncated
//! Hamiltonian (photon cutoff 120, drift-checked) at delta1=0.4, delta2=0.3,
//! g1=3*g2, total coupling 1, and are frozen here to 8 decimals.

use qrabi_core::fock::{converged_block_values, TruncationSpec};
use qrabi_core::gfunc::{assemble_m, choose_betas, find_roots, representation_mismatch};
use qrabi_core::model::{ModelParams, Parity};

const EVEN_ROOTS_AT_UNIT_COUPLING: [f64; 9] = [
    -0.43962666, 0.11135753, 0.71299182, 1.15182805, 1.75077546, 1.98411694, 2.55817807,
    3.15699158, 3.72213521,
];
const ODD_ROOTS_AT_UNIT_COUPLING: [f64; 9] = [
    -0.2789082, -0.0399263, 0.69391039, 0.98337184, 1.58581817, 2.20303988, 2.75089215,
    3.00644896, 3.62571104,
];

fn three_to_one(total: f64) -> ModelParams {
    ModelParams::new(1.0, 0.75 * total, 0.25 * total, 0.4, 0.3).unwrap()
}

fn dense_reference(params: &ModelParams, parity: Parity, lo: f64, hi: f64) -> Vec<f64> {
    let (values, _) = converged_block_values(params, parity, 40, &TruncationSpec::default()).unwrap();
    values.into_iter().filter(|e| (lo..=hi).contains(e)).collect()
}

#[test]
fn frozen_reference_roots_at_unit_coupling() {
    let p = three_to_one(1.0);
    for (parity, want) in [
        (Parity::Even, &EVEN_ROOTS_AT_UNIT_COUPLING),
        (Parity::Odd, &ODD_ROOTS_AT_UNIT_COUPLING),
    ] {
        let roots = find_roots(&p, parity, -1.0, 4.0, None).unwrap();
        assert_eq!(
            roots.len(),
            want.len(),
            "{}: got {:?}",
            parity.label(),
            roots.iter().map(|r| r.energy).collect::<Vec<_>>()
        );
        for (r, w) in roots.iter().zip(want.iter()) {
            assert!(
                (r.energy - w).abs() < 1e-6,
                "{}: root {} vs frozen {}",
                parity.label(),
                r.energy,
                w
            );
            assert!(r.sigma_ratio < 1e-8);
        }
    }
}

#[test]
fn roots_match_dense_solver_across_couplings() {
    for total in [0.4, 2.8] {
        let p = three_to_one(total);
        for parity in [Parity::Even, Parity::Odd] {
            let reference = dense_reference(&p, parity, -1.0, 4.0);
            let roots = find_roots(&p, parity, -1.0, 4.0, None).unwrap();
            assert_eq!(
                roots.len(),
                reference.len(),
                "g={total} {}: roots {:?} vs dense {:?}",
                parity.label(),
                roots.iter().map(|r| r.energy).collect::<Vec<_>>(),
                reference
            );
            for (r, e) in roots.iter().zip(&reference) {
                assert!(
                    (r.energy - e).abs() < 1e-6,
                    "g={total} {}: {} vs {}",
                    parity.label(),
                    r.energy,
                    e
                );
            }
        }
    }
}

#[test]
fn mismatch_filter_separates_roots_from_gaps() {
    let p = three_to_one(1.0);
    let betas = choose_betas(&p).unwrap();
    for e in &EVEN_ROOTS_AT_UNIT_COUPLING[..3] {
        let mis = representation_mismatch(*e, &p, &betas, Parity::Even).unwrap();
        assert!(mis < 1e-6, "mismatch {mis:e} at root {e}");
    }
    // mid-gap energies: the null direction is meaningless there and the
    // three representations disagree badly
    for e in [0.4, 1.45] {
        let mis = representation_mismatch(e, &p, &betas, Parity::Even).unwrap();
        assert!(mis > 1e-3, "mismatch {mis:e} unexpectedly small at {e}");
    }
}

#[test]
fn determinant_changes_sign_at_roots_only() {
    let p = three_to_one(1.0);
    let betas = choose_betas(&p).unwrap();
    let e_star = EVEN_ROOTS_AT_UNIT_COUPLING[2];
    let lo = assemble_m(e_star - 0.01, &p, &betas, Parity::Even).unwrap();
    let hi = assemble_m(e_star + 0.01, &p, &betas, Parity::Even).unwrap();
    assert!(lo.det * hi.det < 0.0, "no sign change across {e_star}");

    // between the 4th and 5th even levels, det keeps its sign on a +/- 0.02 window
    let mid = 1.45;
    let samples: Vec<f64> = [-0.02, -0.01, 0.0, 0.01, 0.02]
        .iter()
        .map(|d| assemble_m(mid + d, &p, &betas, Parity::Even).unwrap().det)
        .collect();
    assert!(
        samples.windows(2).all(|w| w[0] * w[1] > 0.0),
        "spurious sign change near {mid}: {samples:?}"
    );
}

#[test]
fn repeated_scans_are_bitwise_identical() {
    let p = three_to_one(1.2);
    let a = find_roots(&p, Parity::Odd, -1.0, 2.0, None).unwrap();
    let b = find_roots(&p, Parity::Odd, -1.0, 2.0, None).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.energy.to_bits(), y.energy.to_bits());
    }
}
