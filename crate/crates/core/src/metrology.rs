//! Quantum Fisher information and Cramér–Rao bounds for the quadratic
//! generator 𝓗 = Σᵢ (j_z⁽ⁱ⁾)².

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{squared_norm, CollectiveOperator, StateVector};
use crate::spin::{jz_squared_extremes, HalfInteger};
use crate::states::{dicke_probabilities, CatState};

/// Negative variances down to `-VARIANCE_CLAMP · max(1, ⟨𝓗²⟩)` are rounding
/// and read as zero.
pub const VARIANCE_CLAMP: f64 = 1e-10;

/// Probe duration T, trial count ν and the ensemble the bounds refer to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EstimationContext {
    /// Seconds.
    pub duration: f64,
    pub trials: u64,
    pub particles: usize,
    pub spin: HalfInteger,
}

impl EstimationContext {
    pub fn new(duration: f64, trials: u64, particles: usize, spin: HalfInteger) -> Result<Self> {
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::InvalidContext(format!("T must be positive, got {duration}")));
        }
        if trials < 1 {
            return Err(Error::InvalidContext("nu must be at least 1".into()));
        }
        Ok(Self { duration, trials, particles, spin })
    }

    /// T = 1 s, ν = 1, spin 1: the units of all figure data.
    pub fn canonical(particles: usize) -> Self {
        Self { duration: 1.0, trials: 1, particles, spin: HalfInteger::ONE }
    }

    pub fn with_particles(self, particles: usize) -> Self {
        Self { particles, ..self }
    }

    /// T·√ν, the factor every precision is divided by.
    pub fn time_factor(&self) -> f64 {
        self.duration * (self.trials as f64).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Qcrb,
    Parity,
    Moment,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrecisionResult {
    pub particles: usize,
    pub protocol: Protocol,
    /// F_Q for the bound; the magnitude of the signal slope for measured protocols.
    pub figure: f64,
    /// rad/s.
    pub delta_kappa: f64,
    pub kt: Option<f64>,
    pub duration: f64,
    pub trials: u64,
}

/// F_Q = 4(⟨𝓖²⟩ − ⟨𝓖⟩²) for a pure state.
pub fn qfi_pure(state: &StateVector, generator: &CollectiveOperator) -> Result<f64> {
    let mean = generator.expectation(state)?;
    let second = squared_norm(&generator.apply(state.amplitudes()));
    let var = second - mean * mean;
    if var < 0.0 {
        if var < -VARIANCE_CLAMP * second.max(1.0) {
            return Err(Error::NegativeVariance(var));
        }
        return Ok(0.0);
    }
    Ok(4.0 * var)
}

/// F_Q = 4|w_a|²|w_b|²(Λ_a − Λ_b)²; (Λ_a − Λ_b)² for equal weights.
///
/// With |w_a|² + |w_b|² = 1 the weight factor equals 1 − (|w_a|² − |w_b|²)²,
/// which is exactly 1 for equal weights in floating point.
pub fn qfi_cat(cat: &CatState) -> f64 {
    let gap = cat.gap();
    let imbalance = cat.weights[0].norm_sqr() - cat.weights[1].norm_sqr();
    (1.0 - imbalance * imbalance) * gap * gap
}

/// δκ ≥ 1/(√ν · T · √F_Q).
pub fn qcrb(fisher: f64, ctx: &EstimationContext) -> Result<f64> {
    if !(fisher > 0.0 && fisher.is_finite()) {
        return Err(Error::NonPositiveFisher(fisher));
    }
    Ok(1.0 / (ctx.time_factor() * fisher.sqrt()))
}

/// Heisenberg bound 1/(√ν · T · N · |λ_max − λ_min|) for N spin-j particles.
pub fn hl_bound(ctx: &EstimationContext) -> Result<f64> {
    let (max, min) = jz_squared_extremes(ctx.spin)?;
    let gap = max - min;
    if gap == 0.0 {
        return Err(Error::DegenerateGenerator(ctx.spin.to_string()));
    }
    if ctx.particles == 0 {
        return Err(Error::TooFewParticles { n: 0, min: 1 });
    }
    Ok(1.0 / (ctx.time_factor() * ctx.particles as f64 * gap))
}

pub fn qcrb_result(fisher: f64, ctx: &EstimationContext) -> Result<PrecisionResult> {
    Ok(PrecisionResult {
        particles: ctx.particles,
        protocol: Protocol::Qcrb,
        figure: fisher,
        delta_kappa: qcrb(fisher, ctx)?,
        kt: None,
        duration: ctx.duration,
        trials: ctx.trials,
    })
}

/// Frame in which the balanced Dicke state meets the quadratic generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DickeFrame {
    /// The state as prepared evolves under Σ(j_z)²; 𝓗 is diagonal on its
    /// support with eigenvalue 2k.
    Prepared,
    /// The state first passes a π/2 pulse, so the effective generator is
    /// Σ(j_y)² = N − (n₊+n₋)/2 − (a₊†a₋ + a₋†a₊)/2.
    Ramsey,
}

fn mean_and_variance(weights: &[f64], value: impl Fn(usize) -> f64) -> (f64, f64) {
    let mean: f64 = weights.iter().enumerate().map(|(k, p)| p * value(k)).sum();
    let var = weights
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let d = value(k) - mean;
            p * d * d
        })
        .sum();
    (mean, var)
}

/// F_Q of the balanced Dicke state for the prepared frame, from p_k alone:
/// 4·Var(2k).
pub fn qfi_dicke_fast(n: usize) -> Result<f64> {
    let p = dicke_probabilities(n)?;
    let (_, var_k) = mean_and_variance(&p, |k| k as f64);
    Ok(16.0 * var_k)
}

/// F_Q of the balanced Dicke state in the Ramsey frame, from p_k alone.
///
/// The rotated generator conserves n₀, and each n₀ block of the Dicke state
/// holds the single Fock state |k,k⟩ of the ±1 modes, on which the hopping
/// term has zero mean and second moment 2k(k+1). Hence
/// F_Q = 4·Var(k) + 2·E[k(k+1)].
pub fn qfi_dicke_ramsey(n: usize) -> Result<f64> {
    let p = dicke_probabilities(n)?;
    let (_, var_k) = mean_and_variance(&p, |k| k as f64);
    let hopping: f64 = p.iter().enumerate().map(|(k, p)| p * (k * (k + 1)) as f64).sum();
    Ok(4.0 * var_k + 2.0 * hopping)
}

pub fn qfi_dicke(n: usize, frame: DickeFrame) -> Result<f64> {
    match frame {
        DickeFrame::Prepared => qfi_dicke_fast(n),
        DickeFrame::Ramsey => qfi_dicke_ramsey(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{FockBasis, OperatorKind, Occupation};
    use crate::states::{noon_state, paired_dfs_cat_default, single_particle_cat};

    #[test]
    fn noon_two_particles() {
        let v = noon_state(2).unwrap().to_state_vector().unwrap();
        let h = CollectiveOperator::build(v.basis(), OperatorKind::Generator);
        assert!((qfi_pure(&v, &h).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn eigenstate_has_zero_qfi() {
        let b = FockBasis::new(6);
        let h = CollectiveOperator::build(&b, OperatorKind::Generator);
        let v = StateVector::basis_state(b, Occupation::new(0, 6, 0)).unwrap();
        assert_eq!(qfi_pure(&v, &h).unwrap(), 0.0);
    }

    #[test]
    fn cat_rule() {
        assert_eq!(qfi_cat(&noon_state(9).unwrap()), 81.0);
        assert_eq!(qfi_cat(&paired_dfs_cat_default(2).unwrap()), 576.0);
        let j = HalfInteger::from_doubled(7);
        assert_eq!(qfi_cat(&single_particle_cat(j, HalfInteger::HALF, HalfInteger::from_doubled(-1)).unwrap()), 0.0);
    }

    #[test]
    fn qcrb_substitutions() {
        assert_eq!(qcrb(16.0, &EstimationContext::canonical(4)).unwrap(), 0.25);
        assert_eq!(qcrb(4.0, &EstimationContext::new(2.0, 4, 2, HalfInteger::ONE).unwrap()).unwrap(), 0.125);
        assert!(matches!(qcrb(0.0, &EstimationContext::canonical(1)), Err(Error::NonPositiveFisher(_))));
        assert!(matches!(qcrb(-1.0, &EstimationContext::canonical(1)), Err(Error::NonPositiveFisher(_))));
    }

    #[test]
    fn heisenberg_bounds() {
        assert_eq!(hl_bound(&EstimationContext::canonical(10)).unwrap(), 0.1);
        let ion = EstimationContext { spin: HalfInteger::from_doubled(7), ..EstimationContext::canonical(10) };
        assert!((hl_bound(&ion).unwrap() - 1.0 / 120.0).abs() < 1e-16);
        let half = EstimationContext { spin: HalfInteger::HALF, ..EstimationContext::canonical(10) };
        assert!(matches!(hl_bound(&half), Err(Error::DegenerateGenerator(_))));
    }

    #[test]
    fn context_validation() {
        assert!(EstimationContext::new(0.0, 1, 2, HalfInteger::ONE).is_err());
        assert!(EstimationContext::new(1.0, 0, 2, HalfInteger::ONE).is_err());
    }

    #[test]
    fn dicke_fast_small_n() {
        assert!((qfi_dicke_fast(2).unwrap() - 32.0 / 9.0).abs() < 1e-14);
        assert!((qfi_dicke_fast(4).unwrap() - 1152.0 / 245.0).abs() < 1e-14);
        assert!(qfi_dicke_fast(3).is_err());
    }

    #[test]
    fn dicke_ramsey_small_n() {
        // p = (2/3, 1/3): Var k = 2/9, E[k(k+1)] = 2/3
        assert!((qfi_dicke_ramsey(2).unwrap() - 20.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn dicke_fast_reaches_a_million() {
        let f = qfi_dicke_fast(1_000_000).unwrap();
        assert!(f.is_finite() && f > 1e6);
    }
}
