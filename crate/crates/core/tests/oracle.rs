mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::{close, expect, max_diff, DenseSpace, MomentOracle, ParityOracle};
use lsv_metrology::expm::DEFAULT_TOL;
use lsv_metrology::metrology::{qfi_dicke_ramsey, qfi_pure};
use lsv_metrology::protocols::{
    optimal_moment_precision, parity_precision, parity_signal, parity_signal_three_mode, KtGrid, MomentProtocol,
};
use lsv_metrology::states::{dicke_balanced, dicke_probabilities, noon_state, product_state};
use lsv_metrology::{Axis, CollectiveOperator, EstimationContext, FockBasis, OperatorKind};
use num_complex::Complex64 as C64;

const ORACLE_TOL: f64 = 1e-8;

fn kt_samples() -> Vec<f64> {
    (0..17).map(|i| 0.03 + i as f64 * PI / 16.0).collect()
}

#[test]
fn sparse_operators_equal_dense_matrices() {
    for n in 1..=6 {
        let dense = DenseSpace::new(n);
        let basis = FockBasis::new(n);
        let pairs = [
            (OperatorKind::Jx, dense.jx()),
            (OperatorKind::Jy, dense.jy()),
            (OperatorKind::Jz, dense.jz()),
            (OperatorKind::Generator, dense.generator()),
            (OperatorKind::Parity0, dense.parity_zero()),
            (OperatorKind::SplitterPlusZero, dense.splitter()),
        ];
        for (kind, matrix) in pairs {
            let op = CollectiveOperator::build(&basis, kind);
            for r in 0..basis.len() {
                for col in 0..basis.len() {
                    let (a, b) = (basis.state(r), basis.state(col));
                    let expected = matrix[(dense.index([a.plus, a.zero, a.minus]), dense.index([b.plus, b.zero, b.minus]))];
                    assert!((op.get(r, col) - expected).norm() < 1e-14, "{kind:?} N={n} ({r},{col})");
                }
            }
        }
    }
}

#[test]
fn rotations_match_dense_exponentials() {
    for n in 1..=6 {
        let dense = DenseSpace::new(n);
        let amps = [C64::new(0.6, 0.1), C64::new(-0.3, 0.5), C64::new(0.2, -0.4)];
        let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let psi = product_state(n, amps.map(|c| c / norm)).unwrap();
        let v = dense.import(&psi);
        for (axis, g) in [(Axis::X, dense.jx()), (Axis::Y, dense.jy()), (Axis::Z, dense.jz())] {
            for angle in [-2.3, 0.4, FRAC_PI_2, 3.7] {
                let ours = dense.import(&psi.apply_rotation(axis, angle, DEFAULT_TOL).unwrap());
                let reference = dense.unitary(&g, angle) * &v;
                assert!(max_diff(&ours, &reference) < 1e-10, "{axis:?} N={n} angle={angle}");
            }
        }
    }
}

#[test]
fn dicke_state_is_lowered_stretched_state() {
    for n in [2, 4, 6, 8] {
        let dense = DenseSpace::new(n);
        let reference = dense.dicke();
        let ours = dense.import(&dicke_balanced(n).unwrap());
        assert!(max_diff(&ours, &reference) < 1e-12, "N={n}");
        let jz2 = dense.jz() * dense.jz();
        assert!(expect(&jz2, &reference).norm() < 1e-12);
        let probs = dicke_probabilities(n).unwrap();
        for (k, p) in probs.iter().enumerate() {
            assert!((reference[dense.index([k, n - 2 * k, k])].norm_sqr() - p).abs() < 1e-13);
        }
    }
}

#[test]
fn noon_vector_matches_reference() {
    for n in 1..=6 {
        let dense = DenseSpace::new(n);
        let ours = dense.import(&noon_state(n).unwrap().to_state_vector().unwrap());
        assert!(max_diff(&ours, &dense.noon()) < 1e-15);
    }
}

#[test]
fn moments_match_dense_oracle() {
    for n in [2, 4, 6] {
        let oracle = MomentOracle::new(n);
        let protocol = MomentProtocol::new(dicke_balanced(n).unwrap());
        let ctx = EstimationContext::canonical(n);
        for kt in kt_samples() {
            let ours = protocol.point(kt, &ctx).unwrap();
            let reference = oracle.at(kt);
            assert!(close(ours.mean_jx2, reference.mean, ORACLE_TOL), "mean N={n} kt={kt}");
            assert!(close(ours.var_jx2, reference.var, ORACLE_TOL), "var N={n} kt={kt}");
            assert!(close(ours.slope, reference.slope, ORACLE_TOL), "slope N={n} kt={kt}");
            assert!(close(ours.slope_commutator, reference.slope, ORACLE_TOL), "commutator N={n} kt={kt}");
            if let Some(dk) = ours.delta_kappa {
                assert!(close(dk, oracle.delta_kappa(kt), ORACLE_TOL), "dk N={n} kt={kt}");
            }
        }
    }
}

#[test]
fn parity_matches_dense_oracle() {
    for n in 1..=6 {
        let oracle = ParityOracle::new(n);
        for kt in kt_samples() {
            let (reference, _) = oracle.at(kt);
            assert!(close(parity_signal(n, kt).unwrap(), reference, ORACLE_TOL), "two-mode N={n} kt={kt}");
            assert!(
                close(parity_signal_three_mode(n, kt, DEFAULT_TOL).unwrap(), reference, ORACLE_TOL),
                "three-mode N={n} kt={kt}"
            );
        }
    }
}

#[test]
fn parity_precision_matches_dense_oracle() {
    for n in [2, 4, 6] {
        let oracle = ParityOracle::new(n);
        let ctx = EstimationContext::canonical(n);
        for kt in kt_samples() {
            let (value, slope) = oracle.at(kt);
            if slope.abs() < 1e-3 {
                continue;
            }
            let reference = (1.0 - value * value).max(0.0).sqrt() / slope.abs();
            let ours = parity_precision(n, kt, &ctx).unwrap();
            assert!(close(ours.delta_kappa, reference, ORACLE_TOL), "N={n} kt={kt}: {} vs {reference}", ours.delta_kappa);
        }
    }
}

#[test]
fn two_particle_optimum_matches_dense_search() {
    let oracle = MomentOracle::new(2);
    let grid = KtGrid::moment_default();
    let ours = optimal_moment_precision(2, &EstimationContext::canonical(2), &grid).unwrap();
    let steps = 20_000;
    let best = (0..=steps)
        .map(|i| grid.kt_min + (grid.kt_max - grid.kt_min) * i as f64 / steps as f64)
        .map(|kt| oracle.delta_kappa(kt))
        .fold(f64::INFINITY, f64::min);
    assert!(ours.delta_kappa <= best + 1e-10);
    assert!((ours.delta_kappa - best).abs() < 1e-7 * best, "{} vs {best}", ours.delta_kappa);
    assert!(close(ours.delta_kappa, oracle.delta_kappa(ours.kt.unwrap()), ORACLE_TOL));
}

#[test]
fn ramsey_frame_fisher_is_pure_state_fisher_after_pulse() {
    for n in [2, 4, 6, 8, 10, 12] {
        let pulsed = dicke_balanced(n).unwrap().apply_rotation(Axis::X, FRAC_PI_2, DEFAULT_TOL).unwrap();
        let h = CollectiveOperator::build(pulsed.basis(), OperatorKind::Generator);
        let direct = qfi_pure(&pulsed, &h).unwrap();
        assert!(close(qfi_dicke_ramsey(n).unwrap(), direct, 1e-10), "N={n}: {direct}");
    }
}
