//! Property bodies shared by the proptest suite and the acceptance runner.

use std::f64::consts::PI;

use lsv_metrology::expm::DEFAULT_TOL;
use lsv_metrology::metrology::qfi_pure;
use lsv_metrology::protocols::{MomentProtocol, DERIVATIVE_ABS_FLOOR, DERIVATIVE_REL_TOL};
use lsv_metrology::states::{dicke_balanced, product_state};
use lsv_metrology::{Axis, CollectiveOperator, EstimationContext, FockBasis, OperatorKind, StateVector};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type PropResult = Result<(), TestCaseError>;

pub fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)]
}

/// Random normalized state on the N-particle basis.
pub fn state(max_n: usize) -> impl Strategy<Value = StateVector> {
    (1..=max_n).prop_flat_map(|n| {
        let dim = FockBasis::dimension_for(n);
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim).prop_filter_map("zero vector", move |raw| {
            let norm = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            (norm > 1e-3).then(|| {
                let amps = raw.iter().map(|(a, b)| C64::new(a / norm, b / norm)).collect();
                StateVector::new(FockBasis::new(n), amps).expect("normalized by construction")
            })
        })
    })
}

/// Normalized single-particle amplitudes (c₊, c₀, c₋).
pub fn single_particle() -> impl Strategy<Value = [C64; 3]> {
    proptest::array::uniform3((-1.0f64..1.0, -1.0f64..1.0)).prop_filter_map("zero vector", |raw| {
        let norm = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| raw.map(|(a, b)| C64::new(a / norm, b / norm)))
    })
}

pub fn even_n(min: usize, max: usize) -> impl Strategy<Value = usize> {
    (min / 2..=max / 2).prop_map(|h| 2 * h)
}

pub fn norm_preserved(psi: &StateVector, axis: Axis, angle: f64) -> PropResult {
    let out = psi.apply_rotation(axis, angle, DEFAULT_TOL).map_err(fail)?;
    prop_assert!((out.norm() - 1.0).abs() < 1e-10, "norm {} after rotation", out.norm());
    Ok(())
}

/// Jx Jy v − Jy Jx v = i Jz v on an arbitrary vector.
pub fn angular_momentum_commutator(psi: &StateVector) -> PropResult {
    let b = psi.basis();
    let jx = CollectiveOperator::build(b, OperatorKind::Jx);
    let jy = CollectiveOperator::build(b, OperatorKind::Jy);
    let jz = CollectiveOperator::build(b, OperatorKind::Jz);
    let v = psi.amplitudes();
    let xy = jx.apply(&jy.apply(v));
    let yx = jy.apply(&jx.apply(v));
    let z = jz.apply(v);
    let scale = (b.particles() * b.particles()).max(1) as f64;
    for ((a, bb), zz) in xy.iter().zip(&yx).zip(&z) {
        let residual = (a - bb - C64::new(0.0, 1.0) * zz).norm();
        prop_assert!(residual < 1e-12 * scale, "commutator residual {residual}");
    }
    Ok(())
}

/// ⟨J²⟩ is unchanged by collective rotations.
pub fn casimir_invariant(psi: &StateVector, axis: Axis, angle: f64) -> PropResult {
    let casimir = |s: &StateVector| -> Result<f64, TestCaseError> {
        let mut total = 0.0;
        for kind in [OperatorKind::Jx, OperatorKind::Jy, OperatorKind::Jz] {
            let op = CollectiveOperator::build(s.basis(), kind);
            total += op.apply(s.amplitudes()).iter().map(|c| c.norm_sqr()).sum::<f64>();
        }
        Ok(total)
    };
    let before = casimir(psi)?;
    let after = casimir(&psi.apply_rotation(axis, angle, DEFAULT_TOL).map_err(fail)?)?;
    prop_assert!((before - after).abs() < 1e-9 * before.max(1.0), "J² {before} -> {after}");
    Ok(())
}

/// Collective J_z phases leave the Dicke occupation distribution unchanged.
pub fn dicke_dfs_invariance(n: usize, angle: f64) -> PropResult {
    let dicke = dicke_balanced(n).map_err(fail)?;
    let rotated = dicke.apply_rotation(Axis::Z, angle, DEFAULT_TOL).map_err(fail)?;
    for (p, q) in dicke.probabilities().iter().zip(rotated.probabilities()) {
        prop_assert!((p - q).abs() < 1e-14, "p_k changed: {p} -> {q}");
    }
    Ok(())
}

/// F_Q of an N-fold product is N times the single-particle value 4p(1-p),
/// p = |c₊|² + |c₋|².
pub fn qfi_additive(n: usize, amps: [C64; 3]) -> PropResult {
    let single = {
        let p = amps[0].norm_sqr() + amps[2].norm_sqr();
        4.0 * p * (1.0 - p)
    };
    let psi = product_state(n, amps).map_err(fail)?;
    let h = CollectiveOperator::build(psi.basis(), OperatorKind::Generator);
    let f = qfi_pure(&psi, &h).map_err(fail)?;
    prop_assert!((f - n as f64 * single).abs() < 1e-9 * (n as f64).max(1.0), "F = {f}, N·F₁ = {}", n as f64 * single);
    Ok(())
}

/// The finite-difference slope of ⟨Jx²⟩ agrees with i⟨[𝓗, Jx²]⟩.
pub fn derivative_cross_check(n: usize, kt: f64) -> PropResult {
    let protocol = MomentProtocol::new(dicke_balanced(n).map_err(fail)?);
    let p = protocol.point(kt, &EstimationContext::canonical(n)).map_err(fail)?;
    let tol = DERIVATIVE_REL_TOL * p.slope_commutator.abs() + DERIVATIVE_ABS_FLOOR;
    prop_assert!((p.slope - p.slope_commutator).abs() <= tol, "fd {} vs commutator {}", p.slope, p.slope_commutator);
    Ok(())
}

pub fn kt_range() -> std::ops::Range<f64> {
    0.0..PI
}

fn fail(e: lsv_metrology::Error) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}
