//! Action of `exp(-i·angle·A)` on a vector for Hermitian `A`, without forming
//! the exponential.
//!
//! The interval is split into `s` substeps with `|angle|·‖A‖/s ≤ 1`; each
//! substep applies a truncated Taylor polynomial whose degree is chosen a priori
//! from the remainder bound `x^(m+1)/(m+1)!·e^x ≤ tol/s`. The total truncation
//! error in the 2-norm is then below `tol·‖v‖`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest Taylor degree tried per substep before reporting non-convergence.
pub const MAX_TAYLOR_TERMS: usize = 60;

pub const DEFAULT_TOL: f64 = 1e-12;

/// Computes `exp(-i·angle·A)·v` where `matvec(x, y)` writes `A·x` into `y` and
/// `norm_bound ≥ ‖A‖₂`.
pub fn expm_action<F>(matvec: F, norm_bound: f64, angle: f64, v: &[C64], tol: f64) -> Result<Vec<C64>>
where
    F: Fn(&[C64], &mut [C64]),
{
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let reach = angle.abs() * norm_bound;
    if reach == 0.0 {
        return Ok(v.to_vec());
    }
    let steps = reach.ceil().max(1.0) as usize;
    let x = reach / steps as f64;
    let degree = taylor_degree(x, tol / steps as f64)?;

    let scale = C64::new(0.0, -angle / steps as f64);
    let mut out = v.to_vec();
    let mut term = vec![C64::new(0.0, 0.0); v.len()];
    let mut next = vec![C64::new(0.0, 0.0); v.len()];
    for _ in 0..steps {
        term.copy_from_slice(&out);
        for k in 1..=degree {
            matvec(&term, &mut next);
            let factor = scale / k as f64;
            for ((t, n), o) in term.iter_mut().zip(&next).zip(out.iter_mut()) {
                *t = n * factor;
                *o += *t;
            }
        }
    }
    Ok(out)
}

fn taylor_degree(x: f64, tol: f64) -> Result<usize> {
    // term_k = x^k / k!
    let mut term = 1.0;
    for m in 0..=MAX_TAYLOR_TERMS {
        let remainder = term * x / (m + 1) as f64 * x.exp();
        if remainder <= tol {
            return Ok(m);
        }
        term *= x / (m + 1) as f64;
    }
    Err(Error::NonConvergence { tol, max_terms: MAX_TAYLOR_TERMS })
}
