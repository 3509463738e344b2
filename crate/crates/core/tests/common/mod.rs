//! Dense brute-force reference: explicit matrices on the full symmetric
//! three-mode space, built from bilinears a_i†a_j in an enumeration order of
//! its own, and propagated with nalgebra's matrix exponential.
#![allow(dead_code)]

pub mod props;

use std::collections::HashMap;

use lsv_metrology::StateVector;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

pub const PLUS: usize = 0;
pub const ZERO: usize = 1;
pub const MINUS: usize = 2;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub struct DenseSpace {
    pub n: usize,
    pub occs: Vec<[usize; 3]>,
    index: HashMap<[usize; 3], usize>,
}

impl DenseSpace {
    /// Occupations ordered by n₋ descending, then n₀ descending.
    pub fn new(n: usize) -> Self {
        let mut occs = Vec::new();
        for minus in (0..=n).rev() {
            for zero in (0..=n - minus).rev() {
                occs.push([n - minus - zero, zero, minus]);
            }
        }
        let index = occs.iter().enumerate().map(|(i, o)| (*o, i)).collect();
        Self { n, occs, index }
    }

    pub fn dim(&self) -> usize {
        self.occs.len()
    }

    pub fn index(&self, occ: [usize; 3]) -> usize {
        self.index[&occ]
    }

    /// a_to† a_from.
    pub fn hop(&self, to: usize, from: usize) -> DMatrix<C64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (col, occ) in self.occs.iter().enumerate() {
            if to == from {
                m[(col, col)] = c(occ[from] as f64);
            } else if occ[from] > 0 {
                let mut target = *occ;
                target[from] -= 1;
                target[to] += 1;
                m[(self.index(target), col)] = c(((occ[from] * (occ[to] + 1)) as f64).sqrt());
            }
        }
        m
    }

    pub fn j_plus(&self) -> DMatrix<C64> {
        (self.hop(PLUS, ZERO) + self.hop(ZERO, MINUS)) * c(2f64.sqrt())
    }

    pub fn jx(&self) -> DMatrix<C64> {
        let jp = self.j_plus();
        (&jp + jp.adjoint()) * c(0.5)
    }

    pub fn jy(&self) -> DMatrix<C64> {
        let jp = self.j_plus();
        (&jp - jp.adjoint()) * C64::new(0.0, -0.5)
    }

    pub fn jz(&self) -> DMatrix<C64> {
        self.hop(PLUS, PLUS) - self.hop(MINUS, MINUS)
    }

    pub fn generator(&self) -> DMatrix<C64> {
        self.hop(PLUS, PLUS) + self.hop(MINUS, MINUS)
    }

    pub fn parity_zero(&self) -> DMatrix<C64> {
        DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.occs.iter().map(|o| c(if o[ZERO] % 2 == 0 { 1.0 } else { -1.0 })),
        ))
    }

    pub fn splitter(&self) -> DMatrix<C64> {
        (self.hop(PLUS, ZERO) + self.hop(ZERO, PLUS)) * c(0.5)
    }

    /// exp(-i·angle·g).
    pub fn unitary(&self, g: &DMatrix<C64>, angle: f64) -> DMatrix<C64> {
        (g * C64::new(0.0, -angle)).exp()
    }

    pub fn basis_vector(&self, occ: [usize; 3]) -> DVector<C64> {
        let mut v = DVector::zeros(self.dim());
        v[self.index(occ)] = c(1.0);
        v
    }

    /// Reorders a library state into this enumeration.
    pub fn import(&self, s: &StateVector) -> DVector<C64> {
        assert_eq!(s.basis().particles(), self.n);
        let mut v = DVector::zeros(self.dim());
        for (occ, amp) in s.basis().states().iter().zip(s.amplitudes()) {
            v[self.index([occ.plus, occ.zero, occ.minus])] = *amp;
        }
        v
    }

    /// J_-^N |N,0,0⟩, normalized: the total-spin-N, zero-magnetization state.
    pub fn dicke(&self) -> DVector<C64> {
        let lower = self.j_plus().adjoint();
        let mut v = self.basis_vector([self.n, 0, 0]);
        for _ in 0..self.n {
            v = &lower * v;
        }
        v.normalize()
    }

    pub fn noon(&self) -> DVector<C64> {
        (self.basis_vector([self.n, 0, 0]) + self.basis_vector([0, self.n, 0])) * c(std::f64::consts::FRAC_1_SQRT_2)
    }
}

pub fn expect(op: &DMatrix<C64>, v: &DVector<C64>) -> C64 {
    v.dotc(&(op * v))
}

pub fn max_diff(a: &DVector<C64>, b: &DVector<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// |a - b| ≤ tol · max(1, |b|).
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// ⟨Jx²⟩, Var(Jx²) and d⟨Jx²⟩/dκt = i⟨[𝓗, Jx²]⟩ for the Dicke state after exp(-iκt𝓗).
pub struct DenseMoment {
    pub mean: f64,
    pub var: f64,
    pub slope: f64,
}

pub struct MomentOracle {
    space: DenseSpace,
    dicke: DVector<C64>,
    h: DMatrix<C64>,
    jx2: DMatrix<C64>,
}

impl MomentOracle {
    pub fn new(n: usize) -> Self {
        let space = DenseSpace::new(n);
        let dicke = space.dicke();
        let h = space.generator();
        let jx = space.jx();
        let jx2 = &jx * &jx;
        Self { space, dicke, h, jx2 }
    }

    pub fn at(&self, kt: f64) -> DenseMoment {
        let psi = self.space.unitary(&self.h, kt) * &self.dicke;
        let mean = expect(&self.jx2, &psi).re;
        let fourth = expect(&(&self.jx2 * &self.jx2), &psi).re;
        let comm = &self.h * &self.jx2 - &self.jx2 * &self.h;
        let slope = (C64::new(0.0, 1.0) * expect(&comm, &psi)).re;
        DenseMoment { mean, var: fourth - mean * mean, slope }
    }

    pub fn delta_kappa(&self, kt: f64) -> f64 {
        let m = self.at(kt);
        m.var.max(0.0).sqrt() / m.slope.abs()
    }
}

/// Parity ⟨(-1)^n₀⟩ of NOON after exp(-iκt𝓗) and a π/2 splitter pulse, with
/// its exact κt derivative.
pub struct ParityOracle {
    space: DenseSpace,
    noon: DVector<C64>,
    h: DMatrix<C64>,
    rotated_parity: DMatrix<C64>,
}

impl ParityOracle {
    pub fn new(n: usize) -> Self {
        let space = DenseSpace::new(n);
        let noon = space.noon();
        let h = space.generator();
        let pulse = space.unitary(&space.splitter(), std::f64::consts::FRAC_PI_2);
        let rotated_parity = pulse.adjoint() * space.parity_zero() * &pulse;
        Self { space, noon, h, rotated_parity }
    }

    pub fn at(&self, kt: f64) -> (f64, f64) {
        let phi = self.space.unitary(&self.h, kt) * &self.noon;
        let value = expect(&self.rotated_parity, &phi).re;
        let comm = &self.h * &self.rotated_parity - &self.rotated_parity * &self.h;
        let slope = (C64::new(0.0, 1.0) * expect(&comm, &phi)).re;
        (value, slope)
    }
}
