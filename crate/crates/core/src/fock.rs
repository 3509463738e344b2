//! Symmetric (bosonic) subspace of N spin-1 particles.
//!
//! Three modes m = +1, 0, -1 with occupations (n₊, n₀, n₋), n₊ + n₀ + n₋ = N.
//! Basis order: n₊ descending, then n₀ descending. For N = 2:
//! (2,0,0) (1,1,0) (1,0,1) (0,2,0) (0,1,1) (0,0,2).
//!
//! Rotations use the right-handed convention `exp(-i·angle·J_axis)` throughout.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expm;

/// Tolerance on `Σ|c|² = 1` accepted by [`StateVector::new`].
pub const NORM_TOL: f64 = 1e-10;

/// Relative imaginary residue tolerated in an expectation value.
pub const EXPECTATION_IMAG_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Occupation {
    pub plus: usize,
    pub zero: usize,
    pub minus: usize,
}

impl Occupation {
    pub const fn new(plus: usize, zero: usize, minus: usize) -> Self {
        Self { plus, zero, minus }
    }

    pub const fn total(&self) -> usize {
        self.plus + self.zero + self.minus
    }

    /// Eigenvalue of Σᵢ (j_z⁽ⁱ⁾)², i.e. n₊ + n₋.
    pub const fn generator_eigenvalue(&self) -> usize {
        self.plus + self.minus
    }

    /// Eigenvalue of J_z, i.e. n₊ - n₋.
    pub fn magnetization(&self) -> i64 {
        self.plus as i64 - self.minus as i64
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.plus, self.zero, self.minus)
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct FockBasis {
    n: usize,
    states: Vec<Occupation>,
}

impl FockBasis {
    pub fn new(n: usize) -> Arc<Self> {
        let mut states = Vec::with_capacity(Self::dimension_for(n));
        for plus in (0..=n).rev() {
            for zero in (0..=n - plus).rev() {
                states.push(Occupation::new(plus, zero, n - plus - zero));
            }
        }
        Arc::new(Self { n, states })
    }

    pub const fn dimension_for(n: usize) -> usize {
        (n + 1) * (n + 2) / 2
    }

    pub fn particles(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Occupation] {
        &self.states
    }

    pub fn state(&self, index: usize) -> Occupation {
        self.states[index]
    }

    /// Position of `occ` in the basis, the inverse of [`FockBasis::state`].
    pub fn index_of(&self, occ: Occupation) -> Option<usize> {
        if occ.total() != self.n {
            return None;
        }
        let s = self.n - occ.plus;
        Some(s * (s + 1) / 2 + (s - occ.zero))
    }

    fn check_same(&self, other: &FockBasis) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::BasisMismatch { left: self.n, right: other.n })
        }
    }
}

/// Normalized amplitude vector over a [`FockBasis`].
#[derive(Clone, Debug)]
pub struct StateVector {
    basis: Arc<FockBasis>,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(basis: Arc<FockBasis>, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), got: amplitudes.len() });
        }
        let norm_sqr = squared_norm(&amplitudes);
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { basis, amplitudes })
    }

    /// A single basis state.
    pub fn basis_state(basis: Arc<FockBasis>, occ: Occupation) -> Result<Self> {
        let idx = basis.index_of(occ).ok_or_else(|| {
            Error::InvalidQuantumNumbers(format!("occupation {occ} does not belong to N = {}", basis.particles()))
        })?;
        let mut amplitudes = vec![C64::new(0.0, 0.0); basis.len()];
        amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(Self { basis, amplitudes })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, occ: Occupation) -> C64 {
        self.basis.index_of(occ).map_or(C64::new(0.0, 0.0), |i| self.amplitudes[i])
    }

    pub fn norm(&self) -> f64 {
        squared_norm(&self.amplitudes).sqrt()
    }

    /// Occupation probabilities |c|² in basis order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Multiplies the amplitude on (n₊, n₀, n₋) by `exp(-iθ(n₊ + n₋))`: free
    /// evolution under the quadratic generator for phase θ = κt.
    pub fn apply_diagonal_phase(&self, theta: f64) -> Self {
        let amplitudes = self
            .basis
            .states()
            .iter()
            .zip(&self.amplitudes)
            .map(|(occ, c)| c * C64::from_polar(1.0, -theta * occ.generator_eigenvalue() as f64))
            .collect();
        Self { basis: Arc::clone(&self.basis), amplitudes }
    }

    /// `exp(-i·angle·J_axis)|ψ⟩`.
    pub fn apply_rotation(&self, axis: Axis, angle: f64, tol: f64) -> Result<Self> {
        let generator = CollectiveOperator::build(&self.basis, axis.into());
        self.evolve(&generator, angle, tol)
    }

    /// `exp(-i·angle·G)|ψ⟩` for a Hermitian generator `G`.
    pub fn evolve(&self, generator: &CollectiveOperator, angle: f64, tol: f64) -> Result<Self> {
        self.basis.check_same(&generator.basis)?;
        if !generator.hermitian {
            return Err(Error::NonHermitian);
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidTolerance(tol));
        }
        let amplitudes = if let Some(diag) = generator.diagonal() {
            self.amplitudes
                .iter()
                .zip(diag)
                .map(|(c, d)| c * C64::from_polar(1.0, -angle * d.re))
                .collect()
        } else {
            expm::expm_action(
                |x, y| generator.apply_into(x, y),
                generator.norm_bound(),
                angle,
                &self.amplitudes,
                tol,
            )?
        };
        Ok(Self { basis: Arc::clone(&self.basis), amplitudes })
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.basis.check_same(&other.basis)?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn expectation(&self, op: &CollectiveOperator) -> Result<f64> {
        op.expectation(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl From<Axis> for OperatorKind {
    fn from(axis: Axis) -> Self {
        match axis {
            Axis::X => OperatorKind::Jx,
            Axis::Y => OperatorKind::Jy,
            Axis::Z => OperatorKind::Jz,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Jx,
    Jy,
    Jz,
    /// Σᵢ (j_z⁽ⁱ⁾)² = n₊ + n₋.
    Generator,
    /// (-1)^n₀.
    Parity0,
    /// (a₊†a₀ + a₀†a₊)/2, the x-component of the pseudo-spin between the m = +1
    /// and m = 0 modes.
    SplitterPlusZero,
}

/// Sparse operator over a [`FockBasis`], stored row-compressed with sorted
/// column indices.
#[derive(Clone, Debug)]
pub struct CollectiveOperator {
    basis: Arc<FockBasis>,
    row_offsets: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<C64>,
    hermitian: bool,
}

impl CollectiveOperator {
    pub fn build(basis: &Arc<FockBasis>, kind: OperatorKind) -> Self {
        let mut entries: Vec<(usize, usize, C64)> = Vec::new();
        let re = |v: f64| C64::new(v, 0.0);
        for (i, occ) in basis.states().iter().enumerate() {
            let Occupation { plus, zero, minus } = *occ;
            match kind {
                OperatorKind::Jz => entries.push((i, i, re(occ.magnetization() as f64))),
                OperatorKind::Generator => entries.push((i, i, re(occ.generator_eigenvalue() as f64))),
                OperatorKind::Parity0 => entries.push((i, i, re(if zero % 2 == 0 { 1.0 } else { -1.0 }))),
                OperatorKind::Jx | OperatorKind::Jy => {
                    // J₊ = √2 (a₊†a₀ + a₀†a₋)
                    let mut raise = Vec::with_capacity(2);
                    if zero > 0 {
                        let v = (2.0 * ((plus + 1) * zero) as f64).sqrt();
                        raise.push((Occupation::new(plus + 1, zero - 1, minus), v));
                    }
                    if minus > 0 {
                        let v = (2.0 * ((zero + 1) * minus) as f64).sqrt();
                        raise.push((Occupation::new(plus, zero + 1, minus - 1), v));
                    }
                    for (target, v) in raise {
                        let j = basis.index_of(target).expect("raised occupation stays in basis");
                        // Jx = (J₊ + J₋)/2, Jy = (J₊ - J₋)/(2i)
                        let (up, down) = match kind {
                            OperatorKind::Jx => (re(v / 2.0), re(v / 2.0)),
                            _ => (C64::new(0.0, -v / 2.0), C64::new(0.0, v / 2.0)),
                        };
                        entries.push((j, i, up));
                        entries.push((i, j, down));
                    }
                }
                OperatorKind::SplitterPlusZero => {
                    if zero > 0 {
                        let v = (((plus + 1) * zero) as f64).sqrt() / 2.0;
                        let j = basis
                            .index_of(Occupation::new(plus + 1, zero - 1, minus))
                            .expect("raised occupation stays in basis");
                        entries.push((j, i, re(v)));
                        entries.push((i, j, re(v)));
                    }
                }
            }
        }
        Self::from_entries(basis, entries)
    }

    /// Assembles an operator from (row, column, value) triples; duplicates are
    /// summed.
    pub fn from_entries(basis: &Arc<FockBasis>, mut entries: Vec<(usize, usize, C64)>) -> Self {
        let dim = basis.len();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_offsets = vec![0usize; dim + 1];
        let mut cols: Vec<usize> = Vec::with_capacity(entries.len());
        let mut values: Vec<C64> = Vec::with_capacity(entries.len());
        let mut rows: Vec<usize> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside dimension {dim}");
            if rows.last() == Some(&r) && cols.last() == Some(&c) {
                *values.last_mut().expect("nonempty") += v;
            } else {
                rows.push(r);
                cols.push(c);
                values.push(v);
            }
        }
        for &r in &rows {
            row_offsets[r + 1] += 1;
        }
        for i in 0..dim {
            row_offsets[i + 1] += row_offsets[i];
        }
        let mut op = Self { basis: Arc::clone(basis), row_offsets, cols, values, hermitian: false };
        op.hermitian = op.check_hermitian();
        op
    }

    fn check_hermitian(&self) -> bool {
        let scale = self.values.iter().map(|v| v.norm()).fold(1.0, f64::max);
        self.entries().all(|(r, c, v)| (self.get(c, r) - v.conj()).norm() <= 1e-14 * scale)
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.basis.len()).flat_map(move |r| {
            (self.row_offsets[r]..self.row_offsets[r + 1]).map(move |k| (r, self.cols[k], self.values[k]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        let span = self.row_offsets[row]..self.row_offsets[row + 1];
        match self.cols[span.clone()].binary_search(&col) {
            Ok(k) => self.values[span.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    /// Diagonal entries, if the operator has no off-diagonal part.
    pub fn diagonal(&self) -> Option<Vec<C64>> {
        if self.entries().any(|(r, c, _)| r != c) {
            return None;
        }
        Some((0..self.basis.len()).map(|i| self.get(i, i)).collect())
    }

    /// Upper bound on the spectral norm: the largest absolute row sum.
    pub fn norm_bound(&self) -> f64 {
        (0..self.basis.len())
            .map(|r| self.values[self.row_offsets[r]..self.row_offsets[r + 1]].iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let span = self.row_offsets[r]..self.row_offsets[r + 1];
            *out = self.cols[span.clone()].iter().zip(&self.values[span]).map(|(&c, v)| v * x[c]).sum();
        }
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); x.len()];
        self.apply_into(x, &mut y);
        y
    }

    /// ⟨ψ|O|ψ⟩ for Hermitian `O`; the imaginary residue is checked, then dropped.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        self.basis.check_same(&state.basis)?;
        if !self.hermitian {
            return Err(Error::NonHermitian);
        }
        let z = inner(&state.amplitudes, &self.apply(&state.amplitudes));
        if z.im.abs() > EXPECTATION_IMAG_TOL * z.re.abs().max(1.0) {
            return Err(Error::ComplexExpectation(z.im));
        }
        Ok(z.re)
    }
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn squared_norm(a: &[C64]) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum()
}
