//! Measurement protocols: NOON parity readout and the Jₓ² moment measurement
//! on a phase-evolved probe, both with error-propagation precision.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expm::{expm_action, DEFAULT_TOL};
use crate::fock::{inner, squared_norm, CollectiveOperator, FockBasis, OperatorKind, StateVector};
use crate::metrology::{EstimationContext, PrecisionResult, Protocol};
use crate::states::{dicke_balanced, noon_state};

/// Relative agreement demanded between finite-difference and commutator slopes.
pub const DERIVATIVE_REL_TOL: f64 = 1e-6;
/// Slopes below this magnitude are not cross-checked.
pub const DERIVATIVE_ABS_FLOOR: f64 = 1e-8;
/// A moment slope below `SLOPE_FLOOR · (1 + ⟨Jₓ²⟩)` counts as vanishing.
pub const SLOPE_FLOOR: f64 = 1e-8;
/// Parity slopes below `PARITY_SLOPE_FLOOR · N` count as vanishing.
pub const PARITY_SLOPE_FLOOR: f64 = 1e-6;

/// Evenly spaced κt values, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KtGrid {
    pub kt_min: f64,
    pub kt_max: f64,
    pub points: usize,
}

impl KtGrid {
    pub fn new(kt_min: f64, kt_max: f64, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::InvalidGrid("grid has no points".into()));
        }
        if !(kt_min.is_finite() && kt_max.is_finite()) || kt_min > kt_max {
            return Err(Error::InvalidGrid(format!("need finite kt_min <= kt_max, got [{kt_min}, {kt_max}]")));
        }
        Ok(Self { kt_min, kt_max, points })
    }

    /// 64 points i·(π/2)/64, i = 1..=64, covering (0, π/2].
    pub fn moment_default() -> Self {
        Self { kt_min: FRAC_PI_2 / 64.0, kt_max: FRAC_PI_2, points: 64 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.kt_min];
        }
        let step = (self.kt_max - self.kt_min) / (self.points - 1) as f64;
        (0..self.points).map(|i| if i + 1 == self.points { self.kt_max } else { self.kt_min + step * i as f64 }).collect()
    }
}

// --- parity -----------------------------------------------------------------

/// NOON state in the (m=+1, m=0) two-mode space, indexed by n₊ with
/// n₀ = N − n₊, after free evolution for phase κt.
fn two_mode_noon(n: usize, kt: f64) -> Vec<C64> {
    let mut amps = vec![C64::new(0.0, 0.0); n + 1];
    let w = std::f64::consts::FRAC_1_SQRT_2;
    amps[0] += C64::new(w, 0.0);
    amps[n] += C64::from_polar(w, -kt * n as f64);
    amps
}

/// Sₓ = (a₊†a₀ + a₀†a₊)/2 on the two-mode space.
fn two_mode_splitter(n: usize, x: &[C64], y: &mut [C64]) {
    let hop = |m: usize| (((m + 1) * (n - m)) as f64).sqrt() / 2.0;
    for (m, out) in y.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        if m > 0 {
            acc += x[m - 1] * hop(m - 1);
        }
        if m < n {
            acc += x[m + 1] * hop(m);
        }
        *out = acc;
    }
}

/// ⟨(−1)^n₀⟩ after NOON preparation, phase κt and a π/2 pulse
/// `exp(-i(π/2)Sₓ)` between the m = 0 and m = +1 modes, simulated on the
/// (N+1)-dimensional two-mode space.
pub fn parity_signal(n: usize, kt: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::TooFewParticles { n, min: 1 });
    }
    let psi = two_mode_noon(n, kt);
    let out = expm_action(|x, y| two_mode_splitter(n, x, y), n as f64 / 2.0, FRAC_PI_2, &psi, DEFAULT_TOL)?;
    Ok(out
        .iter()
        .enumerate()
        .map(|(plus, c)| if (n - plus).is_multiple_of(2) { c.norm_sqr() } else { -c.norm_sqr() })
        .sum())
}

/// Same readout simulated on the full three-mode Fock space.
pub fn parity_signal_three_mode(n: usize, kt: f64, tol: f64) -> Result<f64> {
    let noon = noon_state(n)?.to_state_vector()?;
    let basis = Arc::clone(noon.basis());
    let pulse = CollectiveOperator::build(&basis, OperatorKind::SplitterPlusZero);
    let parity = CollectiveOperator::build(&basis, OperatorKind::Parity0);
    noon.apply_diagonal_phase(kt).evolve(&pulse, FRAC_PI_2, tol)?.expectation(&parity)
}

/// (−1)^(N/2) cos(Nκt).
pub fn parity_closed_form(n: usize, kt: f64) -> Result<f64> {
    if !n.is_multiple_of(2) {
        return Err(Error::ClosedFormUndefined(n));
    }
    let sign = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * (n as f64 * kt).cos())
}

/// δκ = ΔP / (T·√ν·|∂⟨P⟩/∂(κt)|) with ΔP = √(1 − ⟨P⟩²).
pub fn parity_precision(n: usize, kt: f64, ctx: &EstimationContext) -> Result<PrecisionResult> {
    if !n.is_multiple_of(2) {
        return Err(Error::OddParticleCount(n));
    }
    let p = parity_signal(n, kt)?;
    let h = 1e-4 / n as f64;
    let slope = (parity_signal(n, kt + h)? - parity_signal(n, kt - h)?) / (2.0 * h);
    if slope.abs() < PARITY_SLOPE_FLOOR * n as f64 {
        return Err(Error::UnboundedPrecision { kt });
    }
    let spread = (1.0 - p * p).max(0.0).sqrt();
    Ok(PrecisionResult {
        particles: n,
        protocol: Protocol::Parity,
        figure: slope.abs(),
        delta_kappa: spread / (ctx.time_factor() * slope.abs()),
        kt: Some(kt),
        duration: ctx.duration,
        trials: ctx.trials,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParityRow {
    pub kt: f64,
    pub parity: f64,
    /// Present for even N only.
    pub closed_form: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityScan {
    pub particles: usize,
    pub rows: Vec<ParityRow>,
}

pub fn parity_scan(n: usize, grid: &KtGrid) -> Result<ParityScan> {
    let rows = grid
        .values()
        .into_par_iter()
        .map(|kt| {
            Ok(ParityRow {
                kt,
                parity: parity_signal(n, kt)?,
                closed_form: n.is_multiple_of(2).then(|| parity_closed_form(n, kt)).transpose()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ParityScan { particles: n, rows })
}

// --- Jₓ² moment ---------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentPoint {
    pub kt: f64,
    pub mean_jx2: f64,
    pub var_jx2: f64,
    /// d⟨Jₓ²⟩/d(κt) by central finite difference.
    pub slope: f64,
    /// The same slope from i⟨[𝓗, Jₓ²]⟩.
    pub slope_commutator: f64,
    /// rad/s; `None` where the slope vanishes.
    pub delta_kappa: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentScan {
    pub particles: usize,
    pub rows: Vec<MomentPoint>,
    pub optimum: Option<MomentPoint>,
}

/// Jₓ² measurement on `exp(-iκt𝓗)|ψ⟩` with the Ramsey phase fixed to zero.
#[derive(Clone, Debug)]
pub struct MomentProtocol {
    state: StateVector,
    jx: CollectiveOperator,
    generator: Vec<f64>,
}

impl MomentProtocol {
    pub fn new(state: StateVector) -> Self {
        let basis: Arc<FockBasis> = Arc::clone(state.basis());
        let jx = CollectiveOperator::build(&basis, OperatorKind::Jx);
        let generator = basis.states().iter().map(|o| o.generator_eigenvalue() as f64).collect();
        Self { state, jx, generator }
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// (⟨Jₓ²⟩, ⟨Jₓ⁴⟩, i⟨[𝓗, Jₓ²]⟩) at phase κt. ⟨Jₓ⁴⟩ = ‖Jₓ²ψ‖².
    fn moments(&self, kt: f64) -> (f64, f64, f64) {
        let psi = self.state.apply_diagonal_phase(kt);
        let psi = psi.amplitudes();
        let once = self.jx.apply(psi);
        let twice = self.jx.apply(&once);
        let second = squared_norm(&once);
        let fourth = squared_norm(&twice);
        // i(⟨𝓗ψ|Aψ⟩ − ⟨Aψ|𝓗ψ⟩) = −2 Im⟨𝓗ψ|Aψ⟩
        let h_psi: Vec<C64> = psi.iter().zip(&self.generator).map(|(c, h)| c * h).collect();
        let commutator = -2.0 * inner(&h_psi, &twice).im;
        (second, fourth, commutator)
    }

    pub fn point(&self, kt: f64, ctx: &EstimationContext) -> Result<MomentPoint> {
        let (mean, fourth, commutator) = self.moments(kt);
        let h = 1e-5 * kt.abs().max(1.0);
        let slope = (self.moments(kt + h).0 - self.moments(kt - h).0) / (2.0 * h);
        if commutator.abs() > DERIVATIVE_ABS_FLOOR
            && (slope - commutator).abs() > DERIVATIVE_REL_TOL * commutator.abs()
        {
            return Err(Error::DerivativeMismatch { kt, finite_difference: slope, commutator });
        }
        let var = (fourth - mean * mean).max(0.0);
        let delta_kappa =
            (slope.abs() > SLOPE_FLOOR * (1.0 + mean)).then(|| var.sqrt() / (ctx.time_factor() * slope.abs()));
        Ok(MomentPoint { kt, mean_jx2: mean, var_jx2: var, slope, slope_commutator: commutator, delta_kappa })
    }

    pub fn precision(&self, kt: f64, ctx: &EstimationContext) -> Result<PrecisionResult> {
        let p = self.point(kt, ctx)?;
        let delta_kappa = p.delta_kappa.ok_or(Error::UnboundedPrecision { kt })?;
        Ok(self.result(&p, delta_kappa, ctx))
    }

    fn result(&self, p: &MomentPoint, delta_kappa: f64, ctx: &EstimationContext) -> PrecisionResult {
        PrecisionResult {
            particles: self.state.basis().particles(),
            protocol: Protocol::Moment,
            figure: p.slope.abs(),
            delta_kappa,
            kt: Some(p.kt),
            duration: ctx.duration,
            trials: ctx.trials,
        }
    }

    /// Evaluates the grid, then refines the best grid point by golden-section
    /// search between its neighbours.
    pub fn scan(&self, grid: &KtGrid, ctx: &EstimationContext) -> Result<MomentScan> {
        let kts = grid.values();
        let rows = kts.iter().map(|&kt| self.point(kt, ctx)).collect::<Result<Vec<_>>>()?;
        let best = rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.delta_kappa.map(|d| (i, d)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let optimum = match best {
            None => None,
            Some((i, _)) => {
                let lo = kts[i.saturating_sub(1)];
                let hi = kts[(i + 1).min(kts.len() - 1)];
                let refined = self.golden_section(lo, hi, ctx)?;
                Some(match refined.delta_kappa {
                    Some(d) if d < rows[i].delta_kappa.expect("best row is bounded") => refined,
                    _ => rows[i],
                })
            }
        };
        Ok(MomentScan { particles: self.state.basis().particles(), rows, optimum })
    }

    fn golden_section(&self, mut lo: f64, mut hi: f64, ctx: &EstimationContext) -> Result<MomentPoint> {
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let cost = |p: &MomentPoint| p.delta_kappa.unwrap_or(f64::INFINITY);
        let mut a = self.point(hi - INV_PHI * (hi - lo), ctx)?;
        let mut b = self.point(lo + INV_PHI * (hi - lo), ctx)?;
        for _ in 0..80 {
            if hi - lo <= 1e-12 * hi.abs().max(1.0) {
                break;
            }
            if cost(&a) <= cost(&b) {
                hi = b.kt;
                b = a;
                a = self.point(hi - INV_PHI * (hi - lo), ctx)?;
            } else {
                lo = a.kt;
                a = b;
                b = self.point(lo + INV_PHI * (hi - lo), ctx)?;
            }
        }
        Ok(if cost(&a) <= cost(&b) { a } else { b })
    }

    pub fn optimum(&self, grid: &KtGrid, ctx: &EstimationContext) -> Result<PrecisionResult> {
        let scan = self.scan(grid, ctx)?;
        let best = scan.optimum.ok_or(Error::AllUnbounded)?;
        Ok(self.result(&best, best.delta_kappa.expect("optimum is bounded"), ctx))
    }
}

/// δκ = √(⟨Jₓ⁴⟩ − ⟨Jₓ²⟩²) / (T·√ν·|d⟨Jₓ²⟩/d(κt)|) at one operating point.
pub fn moment_precision(state: &StateVector, kt: f64, ctx: &EstimationContext) -> Result<PrecisionResult> {
    MomentProtocol::new(state.clone()).precision(kt, ctx)
}

/// Best Jₓ² precision of the balanced Dicke state over the grid.
pub fn optimal_moment_precision(n: usize, ctx: &EstimationContext, grid: &KtGrid) -> Result<PrecisionResult> {
    MomentProtocol::new(dicke_balanced(n)?).optimum(grid, &ctx.with_particles(n))
}

/// [`optimal_moment_precision`] over several N, evaluated in parallel and
/// returned in input order.
pub fn optimal_moment_sweep(ns: &[usize], ctx: &EstimationContext, grid: &KtGrid) -> Result<Vec<PrecisionResult>> {
    ns.par_iter().map(|&n| optimal_moment_precision(n, ctx, grid)).collect()
}
