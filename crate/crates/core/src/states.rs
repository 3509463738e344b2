//! Probe states: balanced spin-1 Dicke state, NOON state, paired-DFS cats,
//! twin-Fock superposition and symmetric product states.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, Occupation, StateVector};
use crate::spin::{check_projection, HalfInteger};

/// Above this N the Dicke weights are evaluated through log-Γ.
pub const EXACT_COMBINATORICS_MAX_N: usize = 20;

fn require_even(n: usize, min: usize) -> Result<()> {
    if !n.is_multiple_of(2) {
        return Err(Error::OddParticleCount(n));
    }
    if n < min {
        return Err(Error::TooFewParticles { n, min });
    }
    Ok(())
}

fn ln_factorial(n: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

fn binomial_exact(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Occupation probabilities p_k of the balanced spin-1 Dicke state on
/// |k, N-2k, k⟩, k = 0..=N/2:
///
/// p_k = 2^(N-2k) · C(N,k) · C(N-k,k) / C(2N,N).
pub fn dicke_probabilities(n: usize) -> Result<Vec<f64>> {
    require_even(n, 2)?;
    let half = n / 2;
    if n <= EXACT_COMBINATORICS_MAX_N {
        let n64 = n as u64;
        let denom = binomial_exact(2 * n64, n64) as f64;
        return Ok((0..=half as u64)
            .map(|k| {
                let num = (1u128 << (n64 - 2 * k)) * binomial_exact(n64, k) * binomial_exact(n64 - k, k);
                num as f64 / denom
            })
            .collect());
    }
    // ln p_k = (N-2k) ln2 - 2 ln k! - ln (N-2k)! + const. The constant
    // 3 ln N! - ln (2N)! cancels to ~1e-10 relative at N ~ 1e5, so the weights
    // are normalized by their log-sum-exp instead.
    let ln_w: Vec<f64> = (0..=half)
        .map(|k| (n - 2 * k) as f64 * LN_2 - 2.0 * ln_factorial(k) - ln_factorial(n - 2 * k))
        .collect();
    let peak = ln_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = ln_w.iter().map(|l| (l - peak).exp()).collect();
    let total: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / total).collect())
}

/// The balanced spin-1 Dicke state with zero magnetization.
pub fn dicke_balanced(n: usize) -> Result<StateVector> {
    let probs = dicke_probabilities(n)?;
    let basis = FockBasis::new(n);
    let mut amps = vec![C64::new(0.0, 0.0); basis.len()];
    for (k, p) in probs.iter().enumerate() {
        let idx = basis.index_of(Occupation::new(k, n - 2 * k, k)).expect("Dicke support lies in basis");
        amps[idx] = C64::new(p.sqrt(), 0.0);
    }
    StateVector::new(basis, amps)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatBranch {
    /// Eigenvalue Λ of Σᵢ (j_z⁽ⁱ⁾)² on this branch.
    pub eigenvalue: f64,
    pub label: String,
    /// Fock occupation for spin-1 branches that fit the three-mode space.
    pub occupation: Option<Occupation>,
}

/// Two-branch superposition of generator eigenstates, kept analytic so that
/// arbitrary N and spin need no Fock representation.
#[derive(Clone, Debug, PartialEq)]
pub struct CatState {
    pub branch_a: CatBranch,
    pub branch_b: CatBranch,
    pub weights: [C64; 2],
    pub particles: usize,
    pub spin: HalfInteger,
}

impl CatState {
    pub fn new(branch_a: CatBranch, branch_b: CatBranch, weights: [C64; 2], particles: usize, spin: HalfInteger) -> Result<Self> {
        let norm = weights[0].norm_sqr() + weights[1].norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { branch_a, branch_b, weights, particles, spin })
    }

    fn equal(branch_a: CatBranch, branch_b: CatBranch, particles: usize, spin: HalfInteger) -> Self {
        let w = C64::new(FRAC_1_SQRT_2, 0.0);
        Self { branch_a, branch_b, weights: [w, w], particles, spin }
    }

    pub fn with_weights(mut self, weights: [C64; 2]) -> Result<Self> {
        let norm = weights[0].norm_sqr() + weights[1].norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn gap(&self) -> f64 {
        (self.branch_a.eigenvalue - self.branch_b.eigenvalue).abs()
    }

    /// Expands a spin-1 cat onto the three-mode Fock basis.
    pub fn to_state_vector(&self) -> Result<StateVector> {
        let (Some(a), Some(b)) = (self.branch_a.occupation, self.branch_b.occupation) else {
            return Err(Error::InvalidQuantumNumbers(format!(
                "cat with spin {} has no three-mode Fock representation",
                self.spin
            )));
        };
        let basis = FockBasis::new(self.particles);
        let mut amps = vec![C64::new(0.0, 0.0); basis.len()];
        for (occ, w) in [(a, self.weights[0]), (b, self.weights[1])] {
            let idx = basis.index_of(occ).ok_or_else(|| {
                Error::InvalidQuantumNumbers(format!("branch occupation {occ} does not match N = {}", self.particles))
            })?;
            amps[idx] += w;
        }
        StateVector::new(basis, amps)
    }
}

/// NOON state (|m=1⟩^⊗N + |m=0⟩^⊗N)/√2 of N spin-1 particles.
pub fn noon_state(n: usize) -> Result<CatState> {
    if n < 1 {
        return Err(Error::TooFewParticles { n, min: 1 });
    }
    Ok(CatState::equal(
        CatBranch { eigenvalue: n as f64, label: "all m=+1".into(), occupation: Some(Occupation::new(n, 0, 0)) },
        CatBranch { eigenvalue: 0.0, label: "all m=0".into(), occupation: Some(Occupation::new(0, n, 0)) },
        n,
        HalfInteger::ONE,
    ))
}

/// Equal superposition of N/2 (m_hi, -m_hi) pairs and N/2 (m_lo, -m_lo) pairs
/// of spin-j particles. With the default quantum numbers (j = 7/2, m_hi = 7/2,
/// m_lo = 1/2) and N = 2 this is the two-ion DFS state.
pub fn paired_dfs_cat(n: usize, j: HalfInteger, m_hi: HalfInteger, m_lo: HalfInteger) -> Result<CatState> {
    require_even(n, 2)?;
    check_projection(j, m_hi)?;
    check_projection(j, m_lo)?;
    let half = n / 2;
    let occupation = |m: HalfInteger| {
        // spin-1 pairs map onto the three modes; m = 0 pairs put both in the middle mode
        (j == HalfInteger::ONE).then(|| match m.abs().doubled() {
            2 => Occupation::new(half, 0, half),
            _ => Occupation::new(0, n, 0),
        })
    };
    Ok(CatState::equal(
        CatBranch {
            eigenvalue: n as f64 * m_hi.squared(),
            label: format!("{half} pairs |{j},±{}⟩", m_hi.abs()),
            occupation: occupation(m_hi),
        },
        CatBranch {
            eigenvalue: n as f64 * m_lo.squared(),
            label: format!("{half} pairs |{j},±{}⟩", m_lo.abs()),
            occupation: occupation(m_lo),
        },
        n,
        j,
    ))
}

/// Default quantum numbers of the ion proposal: j = 7/2, m_hi = 7/2, m_lo = 1/2.
pub fn paired_dfs_cat_default(n: usize) -> Result<CatState> {
    paired_dfs_cat(n, HalfInteger::from_doubled(7), HalfInteger::from_doubled(7), HalfInteger::HALF)
}

/// One particle of spin j in (|j,m_a⟩ + |j,m_b⟩)/√2.
pub fn single_particle_cat(j: HalfInteger, m_a: HalfInteger, m_b: HalfInteger) -> Result<CatState> {
    check_projection(j, m_a)?;
    check_projection(j, m_b)?;
    let occupation = |m: HalfInteger| {
        (j == HalfInteger::ONE).then(|| match m.doubled() {
            2 => Occupation::new(1, 0, 0),
            0 => Occupation::new(0, 1, 0),
            _ => Occupation::new(0, 0, 1),
        })
    };
    Ok(CatState::equal(
        CatBranch { eigenvalue: m_a.squared(), label: format!("|{j},{m_a}⟩"), occupation: occupation(m_a) },
        CatBranch { eigenvalue: m_b.squared(), label: format!("|{j},{m_b}⟩"), occupation: occupation(m_b) },
        1,
        j,
    ))
}

/// (|m=1⟩^⊗N/2 |m=-1⟩^⊗N/2 + |m=0⟩^⊗N)/√2.
pub fn twin_fock_superposition(n: usize) -> Result<CatState> {
    require_even(n, 2)?;
    Ok(CatState::equal(
        CatBranch {
            eigenvalue: n as f64,
            label: "twin-Fock m=±1".into(),
            occupation: Some(Occupation::new(n / 2, 0, n / 2)),
        },
        CatBranch { eigenvalue: 0.0, label: "all m=0".into(), occupation: Some(Occupation::new(0, n, 0)) },
        n,
        HalfInteger::ONE,
    ))
}

/// N-fold symmetric product of the single-particle state
/// `amps = (c₊, c₀, c₋)`; the amplitude on (n₊, n₀, n₋) is
/// √(N!/(n₊! n₀! n₋!)) · c₊^n₊ c₀^n₀ c₋^n₋.
pub fn product_state(n: usize, amps: [C64; 3]) -> Result<StateVector> {
    let norm: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(norm));
    }
    let basis = FockBasis::new(n);
    let ln_n = ln_factorial(n);
    let power = |c: C64, k: usize| if k == 0 { C64::new(1.0, 0.0) } else { c.powu(k as u32) };
    let out = basis
        .states()
        .iter()
        .map(|occ| {
            let ln_multinomial = ln_n - ln_factorial(occ.plus) - ln_factorial(occ.zero) - ln_factorial(occ.minus);
            power(amps[0], occ.plus) * power(amps[1], occ.zero) * power(amps[2], occ.minus) * (0.5 * ln_multinomial).exp()
        })
        .collect();
    StateVector::new(Arc::clone(&basis), out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dicke_small_n_probabilities() {
        let p2 = dicke_probabilities(2).unwrap();
        assert!((p2[0] - 2.0 / 3.0).abs() < 1e-15 && (p2[1] - 1.0 / 3.0).abs() < 1e-15);
        let p4 = dicke_probabilities(4).unwrap();
        for (got, want) in p4.iter().zip([16.0 / 70.0, 48.0 / 70.0, 6.0 / 70.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn dicke_rejects_odd_and_zero() {
        assert_eq!(dicke_probabilities(3), Err(Error::OddParticleCount(3)));
        assert_eq!(dicke_probabilities(0), Err(Error::TooFewParticles { n: 0, min: 2 }));
        assert!(dicke_balanced(5).is_err());
    }

    #[test]
    fn dicke_normalized_at_ten_thousand() {
        let s: f64 = dicke_probabilities(10_000).unwrap().iter().sum();
        assert!((s - 1.0).abs() < 1e-10, "sum = {s}");
    }

    #[test]
    fn noon_vector() {
        let v = noon_state(2).unwrap().to_state_vector().unwrap();
        assert!((v.amplitude(Occupation::new(2, 0, 0)).re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((v.amplitude(Occupation::new(0, 2, 0)).re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert_eq!(noon_state(7).unwrap().gap(), 7.0);
        assert!(noon_state(0).is_err());
    }

    #[test]
    fn paired_cat_gaps() {
        assert_eq!(paired_dfs_cat_default(2).unwrap().gap(), 24.0);
        assert_eq!(paired_dfs_cat_default(4).unwrap().gap(), 48.0);
        let single = single_particle_cat(HalfInteger::from_doubled(7), HalfInteger::from_doubled(7), HalfInteger::HALF).unwrap();
        assert_eq!(single.gap(), 12.0);
        assert!(paired_dfs_cat_default(3).is_err());
        let j = HalfInteger::from_doubled(7);
        assert!(paired_dfs_cat(2, j, HalfInteger::from_doubled(9), HalfInteger::HALF).is_err());
        assert!(paired_dfs_cat(2, j, HalfInteger::ONE, HalfInteger::HALF).is_err());
    }

    #[test]
    fn twin_fock_vector() {
        let v = twin_fock_superposition(2).unwrap().to_state_vector().unwrap();
        assert!((v.amplitude(Occupation::new(1, 0, 1)).re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((v.amplitude(Occupation::new(0, 2, 0)).re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert_eq!(twin_fock_superposition(3), Err(Error::OddParticleCount(3)));
    }

    #[test]
    fn cat_weights_must_be_normalized() {
        let cat = noon_state(2).unwrap();
        assert!(cat.clone().with_weights([C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).is_err());
        assert!(cat.with_weights([C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).is_ok());
    }

    #[test]
    fn high_spin_cat_has_no_fock_vector() {
        assert!(paired_dfs_cat_default(2).unwrap().to_state_vector().is_err());
    }

    #[test]
    fn product_state_all_zero_mode() {
        let v = product_state(5, [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        assert!((v.amplitude(Occupation::new(0, 5, 0)).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_state_binomial_weights() {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let v = product_state(2, [h, h, C64::new(0.0, 0.0)]).unwrap();
        assert!((v.amplitude(Occupation::new(2, 0, 0)).re - 0.5).abs() < 1e-15);
        assert!((v.amplitude(Occupation::new(1, 1, 0)).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((v.amplitude(Occupation::new(0, 2, 0)).re - 0.5).abs() < 1e-15);
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert!(product_state(2, [h, h, h]).is_err());
    }
}
