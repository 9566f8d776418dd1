//! Dense complex matrices and a Hermitian eigensolver.
//!
//! Operators here never exceed 28x28 (two qubits times a machine of
//! dimension at most 7), so everything is dense, allocation-per-call, and
//! tuned for determinism rather than speed. The eigensolver is a cyclic
//! complex Jacobi iteration: each off-diagonal entry is phased to a real
//! number and annihilated by a plane rotation. It is bitwise reproducible
//! for identical input, which the Gram realization relies on.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
// Float supplies f64 math in no_std graphs; std graphs resolve the
// inherent methods instead and then see this import as unused.
#[allow(unused_imports)]
use num_traits::Float;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Build from a row-major slice.
    pub fn from_rows(rows: usize, cols: usize, data: &[Complex64]) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data length mismatch");
        CMatrix {
            rows,
            cols,
            data: data.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Max entrywise |self - other|.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max entrywise |self - self†|; zero for an exactly Hermitian matrix.
    pub fn hermiticity_deviation(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// `values` are real and sorted in descending order; column `k` of
/// `vectors` is the eigenvector for `values[k]`, with its phase fixed so
/// that the entry of largest magnitude is real and positive.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Cyclic complex Jacobi eigensolver for a Hermitian matrix.
///
/// The input is assumed Hermitian; only its Hermitian part drives the
/// rotations (the strict upper triangle and real diagonal parts are read).
pub fn hermitian_eigen(m: &CMatrix) -> HermitianEigen {
    assert!(m.is_square(), "eigensolver needs a square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut q = CMatrix::identity(n);

    let scale = a
        .data()
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let threshold = scale * 1e-15;

    for _sweep in 0..64 {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for r in p + 1..n {
                off = off.max(a[(p, r)].norm());
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                jacobi_rotate(&mut a, &mut q, p, r);
            }
        }
    }

    // Diagonal holds the eigenvalues; order descending, deterministically.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .expect("eigenvalues are finite")
    });

    let mut values = Vec::with_capacity(n);
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(a[(src, src)].re);
        // Phase convention: largest-magnitude entry real positive.
        let mut pivot = 0usize;
        let mut best = 0.0f64;
        for i in 0..n {
            let mag = q[(i, src)].norm();
            if mag > best {
                best = mag;
                pivot = i;
            }
        }
        let phase = if best > 0.0 {
            q[(pivot, src)].conj() / Complex64::from(best)
        } else {
            Complex64::ONE
        };
        for i in 0..n {
            vectors[(i, dst)] = q[(i, src)] * phase;
        }
    }

    HermitianEigen { values, vectors }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    let eig = hermitian_eigen(m);
    eig.values.last().copied().unwrap_or(0.0)
}

/// Annihilate the (p, r) entry by a unitary plane rotation, updating the
/// accumulated eigenvector matrix alongside.
fn jacobi_rotate(a: &mut CMatrix, q: &mut CMatrix, p: usize, r: usize) {
    let apr = a[(p, r)];
    let mag = apr.norm();
    if mag == 0.0 {
        return;
    }
    let n = a.rows();
    let app = a[(p, p)].re;
    let arr = a[(r, r)].re;
    // Phase the off-diagonal entry real, then apply the classic symmetric
    // Jacobi rotation for [[app, mag], [mag, arr]].
    let phase = apr / Complex64::from(mag);
    let tau = (arr - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let phase_conj = phase.conj();
    // Column update: A <- A U with U = [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
    // on columns (p, r).
    for i in 0..n {
        let aip = a[(i, p)];
        let air = a[(i, r)];
        a[(i, p)] = aip * c - air * (phase_conj * s);
        a[(i, r)] = aip * s + air * (phase_conj * c);
    }
    // Row update: A <- U† A.
    for j in 0..n {
        let apj = a[(p, j)];
        let arj = a[(r, j)];
        a[(p, j)] = apj * c - arj * (phase * s);
        a[(r, j)] = apj * s + arj * (phase * c);
    }
    // Clean the annihilated pair and enforce a real diagonal.
    a[(p, r)] = Complex64::ZERO;
    a[(r, p)] = Complex64::ZERO;
    a[(p, p)] = Complex64::from(a[(p, p)].re);
    a[(r, r)] = Complex64::from(a[(r, r)].re);

    for i in 0..n {
        let qip = q[(i, p)];
        let qir = q[(i, r)];
        q[(i, p)] = qip * c - qir * (phase_conj * s);
        q[(i, r)] = qip * s + qir * (phase_conj * c);
    }
}
