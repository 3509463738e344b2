//! Scaling fits, figure tables, the rank-2 tensor diagonal element and the
//! κ → C₀⁽²⁾ conversion.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrology::{hl_bound, qcrb, qfi_dicke, DickeFrame, EstimationContext};
use crate::spin::{check_projection, HalfInteger};

/// ΔE/(hC₀⁽²⁾) estimated for the m = 1 / m = 0 pair of ⁸⁷Rb, in Hz.
pub const RB87_ENERGY_RATIO_HZ: f64 = 8.6e15;

/// Least-squares line through (ln N, ln y): y ≈ a·N^γ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub prefactor: f64,
    pub exponent: f64,
    pub r_squared: f64,
    pub n_min: f64,
    pub n_max: f64,
}

impl PowerLawFit {
    pub fn eval(&self, n: f64) -> f64 {
        self.prefactor * n.powf(self.exponent)
    }
}

pub fn power_law_fit(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    for &(n, y) in points {
        if !(n > 0.0 && y > 0.0 && n.is_finite() && y.is_finite()) {
            return Err(Error::NonPositiveData { n, y });
        }
    }
    let mut sorted: Vec<f64> = points.iter().map(|p| p.0).collect();
    sorted.sort_by(f64::total_cmp);
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::RepeatedAbscissa(w[0]));
    }

    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / m;
    let y_mean = ys.iter().sum::<f64>() / m;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let (dx, dy) = (x - x_mean, y - y_mean);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let exponent = sxy / sxx;
    let intercept = y_mean - exponent * x_mean;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - exponent * x).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    Ok(PowerLawFit {
        prefactor: intercept.exp(),
        exponent,
        r_squared,
        n_min: sorted[0],
        n_max: sorted[sorted.len() - 1],
    })
}

/// 10·log₁₀(F_Q/N): gain over the standard quantum limit in dB.
pub fn improvement_db(fisher: f64, n: usize) -> Result<f64> {
    if !(fisher > 0.0 && fisher.is_finite()) {
        return Err(Error::NonPositiveFisher(fisher));
    }
    if n < 1 {
        return Err(Error::TooFewParticles { n, min: 1 });
    }
    Ok(10.0 * (fisher / n as f64).log10())
}

/// `points` distinct even particle numbers spread logarithmically over
/// [n_min, n_max]. Each log-spaced value is rounded to the nearest even
/// integer and pushed up by 2 where it would repeat the previous entry.
pub fn even_log_grid(n_min: usize, n_max: usize, points: usize) -> Result<Vec<usize>> {
    if points == 0 {
        return Err(Error::InvalidGrid("empty range".into()));
    }
    if n_min < 2 || !n_min.is_multiple_of(2) || !n_max.is_multiple_of(2) || n_min > n_max {
        return Err(Error::InvalidGrid(format!("need even 2 <= n_min <= n_max, got [{n_min}, {n_max}]")));
    }
    if points == 1 {
        return Ok(vec![n_min]);
    }
    let available = (n_max - n_min) / 2 + 1;
    if points > available {
        return Err(Error::InvalidGrid(format!("{points} points do not fit in {available} even values")));
    }
    let (lo, hi) = ((n_min as f64).ln(), (n_max as f64).ln());
    let mut out: Vec<usize> = Vec::with_capacity(points);
    for i in 0..points {
        let target = if i + 1 == points {
            n_max
        } else {
            let x = (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp();
            2 * (x / 2.0).round() as usize
        };
        let floor = out.last().map_or(n_min, |&p| p + 2);
        // leave room for the remaining points below n_max
        let ceiling = n_max - 2 * (points - 1 - i);
        out.push(target.max(floor).min(ceiling));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub dk_sql: f64,
    pub dk_hl: f64,
    pub dk_dicke: f64,
    pub improvement_db: f64,
}

/// SQL, Heisenberg and Dicke-state Cramér–Rao bounds over an even log grid.
pub fn qcrb_curve(
    n_min: usize,
    n_max: usize,
    points: usize,
    ctx: &EstimationContext,
    frame: DickeFrame,
) -> Result<Vec<CurveRow>> {
    if ctx.spin != HalfInteger::ONE {
        return Err(Error::InvalidQuantumNumbers(format!("Dicke curve needs spin 1, got {}", ctx.spin)));
    }
    let ns = even_log_grid(n_min, n_max, points)?;
    ns.par_iter()
        .map(|&n| {
            let ctx = ctx.with_particles(n);
            let fisher = qfi_dicke(n, frame)?;
            Ok(CurveRow {
                n,
                dk_sql: 1.0 / (ctx.time_factor() * (n as f64).sqrt()),
                dk_hl: hl_bound(&ctx)?,
                dk_dicke: qcrb(fisher, &ctx)?,
                improvement_db: improvement_db(fisher, n)?,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FisherRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub fq_dicke: f64,
}

/// Dicke-state F_Q over an even log grid and its power-law fit.
pub fn qfi_scaling(n_min: usize, n_max: usize, points: usize, frame: DickeFrame) -> Result<(Vec<FisherRow>, PowerLawFit)> {
    let ns = even_log_grid(n_min, n_max, points)?;
    let rows = ns
        .par_iter()
        .map(|&n| Ok(FisherRow { n, fq_dicke: qfi_dicke(n, frame)? }))
        .collect::<Result<Vec<_>>>()?;
    let fit = power_law_fit(&rows.iter().map(|r| (r.n as f64, r.fq_dicke)).collect::<Vec<_>>())?;
    Ok((rows, fit))
}

/// ⟨j,m|T₀⁽²⁾|j,m⟩ = [3m² − j(j+1)]·⟨j‖T⁽²⁾‖j⟩ / √((2j+3)(j+1)(2j+1)j(2j−1)).
pub fn wigner_eckart_diag(j: HalfInteger, m: HalfInteger, reduced: f64) -> Result<f64> {
    check_projection(j, m)?;
    if j.doubled() < 2 {
        return Err(Error::InvalidQuantumNumbers(format!("rank-2 element needs j >= 1, got {j}")));
    }
    let jv = j.value();
    let numerator = 3.0 * m.squared() - jv * (jv + 1.0);
    let denominator = ((2.0 * jv + 3.0) * (jv + 1.0) * (2.0 * jv + 1.0) * jv * (2.0 * jv - 1.0)).sqrt();
    Ok(numerator * reduced / denominator)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SensitivityInput {
    /// δκ/2π in Hz.
    pub delta_kappa_over_2pi: f64,
    /// ΔE/(hC₀⁽²⁾) in Hz.
    pub energy_ratio: f64,
    /// Δ(j_z²) between the two probe levels.
    pub jz2_fluct: f64,
}

impl SensitivityInput {
    pub fn new(delta_kappa_over_2pi: f64, energy_ratio: f64, jz2_fluct: f64) -> Result<Self> {
        if !(delta_kappa_over_2pi >= 0.0 && delta_kappa_over_2pi.is_finite()) {
            return Err(Error::InvalidSensitivity(format!("delta kappa / 2pi must be non-negative, got {delta_kappa_over_2pi}")));
        }
        if !(energy_ratio > 0.0 && energy_ratio.is_finite()) {
            return Err(Error::InvalidSensitivity(format!("energy ratio must be positive, got {energy_ratio}")));
        }
        if !(jz2_fluct > 0.0 && jz2_fluct.is_finite()) {
            return Err(Error::InvalidSensitivity(format!("jz2 fluctuation must be positive, got {jz2_fluct}")));
        }
        Ok(Self { delta_kappa_over_2pi, energy_ratio, jz2_fluct })
    }
}

/// C₀⁽²⁾ = (δκ/2π)·Δ(j_z²) / (ΔE/(hC₀⁽²⁾)).
pub fn kappa_to_c02(input: &SensitivityInput) -> Result<f64> {
    let checked = SensitivityInput::new(input.delta_kappa_over_2pi, input.energy_ratio, input.jz2_fluct)?;
    Ok(checked.delta_kappa_over_2pi * checked.jz2_fluct / checked.energy_ratio)
}
