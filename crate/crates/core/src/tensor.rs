//! States and density operators on labeled tensor-product spaces.
//!
//! The pipeline works on three factors in a fixed global order: mode 0 is
//! the retained qubit, mode 1 the deleted qubit, mode 2 the machine
//! (dimension d ≥ 1). Amplitudes and matrix entries are flattened
//! row-major over this order. Mode labels survive partial traces, so a
//! reduced operator still knows which factors it describes.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// Float supplies f64 math in no_std graphs; std graphs resolve the
// inherent methods instead and then see this import as unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, CMatrix};
use crate::tol;

/// Pure state on an ordered list of tensor factors.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    dims: Vec<usize>,
}

impl StateVector {
    /// Build from amplitudes flattened row-major over `dims`.
    pub fn new(amps: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.iter().any(|&d| d == 0) || amps.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: amps.len(),
            });
        }
        Ok(StateVector { amps, dims })
    }

    /// Computational basis state |k⟩ of a single factor of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut amps = vec![Complex64::ZERO; dim];
        amps[k] = Complex64::ONE;
        StateVector {
            amps,
            dims: vec![dim],
        }
    }

    /// Single qubit a|0⟩ + b|1⟩ (not necessarily normalized).
    pub fn qubit(a: Complex64, b: Complex64) -> Self {
        StateVector {
            amps: vec![a, b],
            dims: vec![2],
        }
    }

    /// Single factor of dimension `dim` with the given amplitudes.
    pub fn single_mode(amps: &[Complex64]) -> Self {
        StateVector {
            amps: amps.to_vec(),
            dims: vec![amps.len()],
        }
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Squared 2-norm within `NORM_TOL` of 1.
    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol::NORM_TOL
    }

    /// ⟨self|other⟩ with the physics convention (conjugate on the left).
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.total_dim() != other.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                got: other.total_dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scaled(&self, c: Complex64) -> StateVector {
        StateVector {
            amps: self.amps.iter().map(|a| a * c).collect(),
            dims: self.dims.clone(),
        }
    }

    /// Sum of two states on identical factor lists.
    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                got: other.total_dim(),
            });
        }
        Ok(StateVector {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + b)
                .collect(),
            dims: self.dims.clone(),
        })
    }

    /// Reduced density operator of a pure state on the kept modes, without
    /// materializing the full projector. `keep` uses the fresh labels
    /// 0..dims.len() and the result keeps factor order.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityOp> {
        let labels: Vec<usize> = (0..self.dims.len()).collect();
        let (keep_pos, traced_pos) = split_modes(&labels, keep)?;
        let strides = strides_of(&self.dims);

        let kept_dims: Vec<usize> = keep_pos.iter().map(|&p| self.dims[p]).collect();
        let kept_labels: Vec<usize> = keep_pos.clone();
        let kept_total: usize = kept_dims.iter().product();
        let traced_dims: Vec<usize> = traced_pos.iter().map(|&p| self.dims[p]).collect();
        let traced_total: usize = traced_dims.iter().product::<usize>().max(1);

        let mut matrix = CMatrix::zeros(kept_total, kept_total);
        for i in 0..kept_total {
            let base_i = offset_for(i, &kept_dims, &keep_pos, &strides);
            for j in 0..kept_total {
                let base_j = offset_for(j, &kept_dims, &keep_pos, &strides);
                let mut acc = Complex64::ZERO;
                for t in 0..traced_total {
                    let off_t = offset_for(t, &traced_dims, &traced_pos, &strides);
                    acc += self.amps[base_i + off_t] * self.amps[base_j + off_t].conj();
                }
                matrix[(i, j)] = acc;
            }
        }
        Ok(DensityOp {
            matrix,
            dims: kept_dims,
            modes: kept_labels,
        })
    }
}

/// Kronecker product of the factors, dims concatenated in order.
pub fn tensor_product(factors: &[&StateVector]) -> Result<StateVector> {
    if factors.is_empty() {
        return Err(Error::EmptyFactorList);
    }
    let mut amps = vec![Complex64::ONE];
    let mut dims = Vec::new();
    for f in factors {
        let mut next = Vec::with_capacity(amps.len() * f.amps.len());
        for a in &amps {
            for b in &f.amps {
                next.push(a * b);
            }
        }
        amps = next;
        dims.extend_from_slice(&f.dims);
    }
    StateVector::new(amps, dims)
}

/// Hermitian, unit-trace operator on a labeled subset of tensor factors.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOp {
    matrix: CMatrix,
    dims: Vec<usize>,
    modes: Vec<usize>,
}

impl DensityOp {
    /// Build from an explicit matrix, checking the density invariants that
    /// are cheap (Hermiticity and trace; positivity is checked separately
    /// by [`validate_density`]).
    pub fn from_matrix(matrix: CMatrix, dims: Vec<usize>, modes: Vec<usize>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let total: usize = dims.iter().product();
        if total != matrix.rows() || dims.len() != modes.len() {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: matrix.rows(),
            });
        }
        let herm = matrix.hermiticity_deviation();
        if herm > tol::HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: herm });
        }
        let trace_dev = (matrix.trace() - Complex64::ONE).norm();
        if trace_dev > tol::TRACE_TOL {
            return Err(Error::TraceDeviation {
                deviation: trace_dev,
            });
        }
        Ok(DensityOp {
            matrix,
            dims,
            modes,
        })
    }

    pub(crate) fn from_parts_unchecked(
        matrix: CMatrix,
        dims: Vec<usize>,
        modes: Vec<usize>,
    ) -> Self {
        DensityOp {
            matrix,
            dims,
            modes,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Labels of the factors this operator still describes.
    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn total_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Reduced operator on the modes named in `keep` (by label). Traces
    /// out everything else; kept factor order is preserved.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOp> {
        let (keep_pos, traced_pos) = split_modes(&self.modes, keep)?;
        let strides = strides_of(&self.dims);

        let kept_dims: Vec<usize> = keep_pos.iter().map(|&p| self.dims[p]).collect();
        let kept_modes: Vec<usize> = keep_pos.iter().map(|&p| self.modes[p]).collect();
        let kept_total: usize = kept_dims.iter().product();
        let traced_dims: Vec<usize> = traced_pos.iter().map(|&p| self.dims[p]).collect();
        let traced_total: usize = traced_dims.iter().product::<usize>().max(1);

        let mut matrix = CMatrix::zeros(kept_total, kept_total);
        for i in 0..kept_total {
            let base_i = offset_for(i, &kept_dims, &keep_pos, &strides);
            for j in 0..kept_total {
                let base_j = offset_for(j, &kept_dims, &keep_pos, &strides);
                let mut acc = Complex64::ZERO;
                for t in 0..traced_total {
                    let off_t = offset_for(t, &traced_dims, &traced_pos, &strides);
                    acc += self.matrix[(base_i + off_t, base_j + off_t)];
                }
                matrix[(i, j)] = acc;
            }
        }
        Ok(DensityOp {
            matrix,
            dims: kept_dims,
            modes: kept_modes,
        })
    }

    /// ⟨φ|ρ|φ⟩ for a normalized probe state on matching factors.
    pub fn expectation(&self, phi: &StateVector) -> Result<f64> {
        if phi.total_dim() != self.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                got: phi.total_dim(),
            });
        }
        if !phi.is_normalized() {
            return Err(Error::Unnormalized {
                norm_sqr: phi.norm_sqr(),
            });
        }
        let n = self.total_dim();
        let mut acc = Complex64::ZERO;
        for i in 0..n {
            let ci = phi.amps()[i].conj();
            if ci == Complex64::ZERO {
                continue;
            }
            for j in 0..n {
                acc += ci * self.matrix[(i, j)] * phi.amps()[j];
            }
        }
        Ok(acc.re)
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        crate::linalg::hermitian_eigen(&self.matrix).values
    }
}

/// Rank-1 projector |s⟩⟨s| of a normalized state.
pub fn density_of(state: &StateVector) -> Result<DensityOp> {
    if !state.is_normalized() {
        return Err(Error::Unnormalized {
            norm_sqr: state.norm_sqr(),
        });
    }
    let n = state.total_dim();
    let mut matrix = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            matrix[(i, j)] = state.amps()[i] * state.amps()[j].conj();
        }
    }
    Ok(DensityOp {
        matrix,
        dims: state.dims().to_vec(),
        modes: (0..state.dims().len()).collect(),
    })
}

/// Diagnostics from checking the density-operator invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityDiagnostics {
    /// Max entrywise |ρ - ρ†|.
    pub hermiticity_deviation: f64,
    /// |tr ρ - 1|.
    pub trace_deviation: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    pub hermitian_ok: bool,
    pub trace_ok: bool,
    pub psd_ok: bool,
}

impl DensityDiagnostics {
    pub fn pass(&self) -> bool {
        self.hermitian_ok && self.trace_ok && self.psd_ok
    }
}

/// Check Hermiticity, unit trace, and positive semidefiniteness against
/// the crate tolerances. Always returns diagnostics rather than failing.
pub fn validate_density(rho: &DensityOp) -> DensityDiagnostics {
    let herm = rho.matrix.hermiticity_deviation();
    let trace_dev = (rho.matrix.trace() - Complex64::ONE).norm();
    let min_eig = min_eigenvalue(&rho.matrix);
    DensityDiagnostics {
        hermiticity_deviation: herm,
        trace_deviation: trace_dev,
        min_eigenvalue: min_eig,
        hermitian_ok: herm <= tol::HERMITICITY_TOL,
        trace_ok: trace_dev <= tol::TRACE_TOL,
        psd_ok: min_eig >= tol::PSD_FLOOR,
    }
}

/// Input qubit |ψ⟩ = α|0⟩ + β|1⟩ with α real in [0, 1] and
/// β = beta_modulus · e^{i·beta_phase}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    alpha: f64,
    beta_modulus: f64,
    beta_phase: f64,
}

impl QubitState {
    pub fn new(alpha: f64, beta_modulus: f64, beta_phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha,
            });
        }
        if !(0.0..=1.0).contains(&beta_modulus) || !beta_modulus.is_finite() {
            return Err(Error::OutOfRange {
                name: "beta_modulus",
                value: beta_modulus,
            });
        }
        let norm_sqr = alpha * alpha + beta_modulus * beta_modulus;
        if (norm_sqr - 1.0).abs() > tol::NORM_TOL {
            return Err(Error::Unnormalized { norm_sqr });
        }
        Ok(QubitState {
            alpha,
            beta_modulus,
            beta_phase: wrap_phase(beta_phase),
        })
    }

    /// Build from α² and the β phase; the moduli then satisfy the
    /// normalization identity exactly.
    pub fn from_alpha2(alpha2: f64, beta_phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha2) || !alpha2.is_finite() {
            return Err(Error::OutOfRange {
                name: "alpha2",
                value: alpha2,
            });
        }
        QubitState::new(alpha2.sqrt(), (1.0 - alpha2).sqrt(), beta_phase)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha * self.alpha
    }

    pub fn beta_modulus(&self) -> f64 {
        self.beta_modulus
    }

    pub fn beta_phase(&self) -> f64 {
        self.beta_phase
    }

    pub fn beta(&self) -> Complex64 {
        Complex64::from_polar(self.beta_modulus, self.beta_phase)
    }

    /// The ket as a single-qubit state vector.
    pub fn ket(&self) -> StateVector {
        StateVector::qubit(Complex64::from(self.alpha), self.beta())
    }
}

fn wrap_phase(phase: f64) -> f64 {
    let two_pi = 2.0 * core::f64::consts::PI;
    let mut p = phase % two_pi;
    if p < 0.0 {
        p += two_pi;
    }
    p
}

/// Row-major strides for a dims list.
fn strides_of(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    strides
}

/// Flat offset contributed by a multi-index `idx` running over `sub_dims`
/// placed at factor positions `positions`.
fn offset_for(mut idx: usize, sub_dims: &[usize], positions: &[usize], strides: &[usize]) -> usize {
    let mut offset = 0usize;
    for k in (0..sub_dims.len()).rev() {
        let digit = idx % sub_dims[k];
        idx /= sub_dims[k];
        offset += digit * strides[positions[k]];
    }
    offset
}

/// Resolve keep labels against the current label list. Returns kept and
/// traced factor positions, both in ascending position order.
fn split_modes(labels: &[usize], keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    for &k in keep {
        if !labels.contains(&k) {
            return Err(Error::UnknownMode { mode: k });
        }
    }
    let keep_pos: Vec<usize> = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| keep.contains(l))
        .map(|(p, _)| p)
        .collect();
    let traced_pos: Vec<usize> = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| !keep.contains(l))
        .map(|(p, _)| p)
        .collect();
    Ok((keep_pos, traced_pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn re(x: f64) -> Complex64 {
        Complex64::from(x)
    }

    #[test]
    fn tensor_product_of_basis_states() {
        let zero = StateVector::basis(2, 0);
        let prod = tensor_product(&[&zero, &zero]).unwrap();
        assert_eq!(prod.dims(), &[2, 2]);
        assert_eq!(prod.amps(), &[re(1.0), re(0.0), re(0.0), re(0.0)]);
    }

    #[test]
    fn tensor_product_embeds_identity_factor() {
        // α = 1 qubit is |0⟩; the second factor lands in the first block.
        let psi = QubitState::new(1.0, 0.0, 0.0).unwrap().ket();
        let v = StateVector::single_mode(&[re(0.6), re(0.0), re(0.8)]);
        let prod = tensor_product(&[&psi, &v]).unwrap();
        assert_eq!(prod.dims(), &[2, 3]);
        assert_eq!(prod.amps()[..3], [re(0.6), re(0.0), re(0.8)]);
        assert!(prod.amps()[3..].iter().all(|a| *a == Complex64::ZERO));
    }

    #[test]
    fn tensor_product_of_three_four_five_state() {
        // (3/5)|0⟩ + (4/5)|1⟩ squared against itself, by direct multiplication.
        let q = QubitState::new(0.6, 0.8, 0.0).unwrap().ket();
        let prod = tensor_product(&[&q, &q]).unwrap();
        let expected = [9.0 / 25.0, 12.0 / 25.0, 12.0 / 25.0, 16.0 / 25.0];
        for (a, e) in prod.amps().iter().zip(expected) {
            assert!((a - re(e)).norm() < 1e-15);
        }
        assert!((prod.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tensor_product_rejects_empty_list() {
        assert_eq!(tensor_product(&[]), Err(Error::EmptyFactorList));
    }

    #[test]
    fn tensor_norm_is_product_of_norms() {
        let a = StateVector::qubit(re(0.3), Complex64::new(0.1, -0.4));
        let b = StateVector::single_mode(&[re(1.0), Complex64::new(0.0, 2.0), re(0.5)]);
        let prod = tensor_product(&[&a, &b]).unwrap();
        assert!((prod.norm() - a.norm() * b.norm()).abs() < 1e-14);
    }

    #[test]
    fn density_of_basis_state() {
        let rho = density_of(&StateVector::basis(2, 0)).unwrap();
        assert_eq!(rho.entry(0, 0), re(1.0));
        assert_eq!(rho.entry(0, 1), re(0.0));
        assert_eq!(rho.entry(1, 0), re(0.0));
        assert_eq!(rho.entry(1, 1), re(0.0));
    }

    #[test]
    fn density_of_plus_state_is_uniform() {
        let plus = StateVector::qubit(re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2));
        let rho = density_of(&plus).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.entry(i, j) - re(0.5)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn density_of_unit_state_is_rank_one() {
        let s = StateVector::qubit(Complex64::new(0.6, 0.0), Complex64::new(0.48, 0.64));
        assert!(s.is_normalized());
        let rho = density_of(&s).unwrap();
        let eigs = rho.eigenvalues();
        assert!((eigs[0] - 1.0).abs() < 1e-14);
        assert!(eigs[1].abs() < 1e-14);
        assert!((rho.trace() - Complex64::ONE).norm() < 1e-14);
    }

    #[test]
    fn density_of_rejects_unnormalized() {
        let s = StateVector::qubit(re(1.0), re(1.0));
        assert!(matches!(density_of(&s), Err(Error::Unnormalized { .. })));
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        let mut amps = vec![Complex64::ZERO; 4];
        amps[0] = re(FRAC_1_SQRT_2);
        amps[3] = re(FRAC_1_SQRT_2);
        let bell = StateVector::new(amps, vec![2, 2]).unwrap();
        let rho = density_of(&bell).unwrap();
        let rho1 = rho.partial_trace(&[0]).unwrap();
        assert_eq!(rho1.modes(), &[0]);
        assert!((rho1.entry(0, 0) - re(0.5)).norm() < 1e-15);
        assert!((rho1.entry(1, 1) - re(0.5)).norm() < 1e-15);
        assert!(rho1.entry(0, 1).norm() < 1e-15);
    }

    #[test]
    fn product_state_partial_trace_factorizes() {
        let a = StateVector::qubit(re(0.6), Complex64::new(0.0, 0.8));
        let b = StateVector::qubit(re(0.28), re(0.96));
        let prod = tensor_product(&[&a, &b]).unwrap();
        let rho = density_of(&prod).unwrap();
        let rho_a = rho.partial_trace(&[0]).unwrap();
        let expect = density_of(&a).unwrap();
        assert!(rho_a.matrix().max_abs_diff(expect.matrix()) < 1e-14);
    }

    #[test]
    fn partial_trace_keeping_all_modes_is_identity() {
        let s = StateVector::new(
            vec![re(0.5), re(0.5), re(0.5), re(0.5)],
            vec![2, 2],
        )
        .unwrap();
        let rho = density_of(&s).unwrap();
        let same = rho.partial_trace(&[0, 1]).unwrap();
        assert_eq!(same.matrix(), rho.matrix());
        assert_eq!(same.modes(), rho.modes());
    }

    #[test]
    fn partial_trace_rejects_unknown_mode() {
        let rho = density_of(&StateVector::basis(2, 0)).unwrap();
        assert_eq!(
            rho.partial_trace(&[3]).unwrap_err(),
            Error::UnknownMode { mode: 3 }
        );
        assert_eq!(rho.partial_trace(&[]).unwrap_err(), Error::EmptyKeepSet);
    }

    #[test]
    fn two_step_trace_matches_joint_trace() {
        // Random-ish normalized 3-factor state with machine dimension 3.
        let mut amps: Vec<Complex64> = (0..12)
            .map(|k| Complex64::new(0.3 + k as f64, (k as f64) * 0.7 - 2.0))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        let s = StateVector::new(amps, vec![2, 2, 3]).unwrap();
        let rho = density_of(&s).unwrap();
        let joint = rho.partial_trace(&[0]).unwrap();
        let staged = rho
            .partial_trace(&[0, 2])
            .unwrap()
            .partial_trace(&[0])
            .unwrap();
        assert!(joint.matrix().max_abs_diff(staged.matrix()) < 1e-14);
        // Trace preserved along the way.
        assert!((joint.trace() - Complex64::ONE).norm() < 1e-14);
    }

    #[test]
    fn expectation_examples() {
        let rho0 = density_of(&StateVector::basis(2, 0)).unwrap();
        let phi0 = StateVector::basis(2, 0);
        assert!((rho0.expectation(&phi0).unwrap() - 1.0).abs() < 1e-15);

        // Maximally mixed state gives 1/2 for every probe.
        let mixed = DensityOp::from_matrix(
            CMatrix::from_rows(2, 2, &[re(0.5), re(0.0), re(0.0), re(0.5)]),
            vec![2],
            vec![0],
        )
        .unwrap();
        let probe = StateVector::qubit(re(0.6), Complex64::new(0.0, 0.8));
        assert!((mixed.expectation(&probe).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn expectation_of_transformed_corner_state() {
        let s = 1.0 / (2.0 * core::f64::consts::SQRT_2);
        let m = CMatrix::from_rows(2, 2, &[re(0.25), re(s), re(s), re(0.75)]);
        let rho = DensityOp::from_matrix(m, vec![2], vec![0]).unwrap();
        let f = rho.expectation(&StateVector::basis(2, 0)).unwrap();
        assert!((f - 0.25).abs() < 1e-15);
    }

    #[test]
    fn expectation_rejects_mismatched_probe() {
        let rho = density_of(&StateVector::basis(2, 0)).unwrap();
        let probe = StateVector::single_mode(&[re(1.0), re(0.0), re(0.0)]);
        assert!(matches!(
            rho.expectation(&probe),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn validate_density_passes_maximally_mixed() {
        let mixed = DensityOp::from_matrix(
            CMatrix::from_rows(2, 2, &[re(0.5), re(0.0), re(0.0), re(0.5)]),
            vec![2],
            vec![0],
        )
        .unwrap();
        let diag = validate_density(&mixed);
        assert!(diag.pass());
        assert!((diag.min_eigenvalue - 0.5).abs() < 1e-14);
    }

    #[test]
    fn validate_density_flags_non_hermitian() {
        let bad = DensityOp::from_parts_unchecked(
            CMatrix::from_rows(2, 2, &[re(1.0), re(1.0), re(0.0), re(0.0)]),
            vec![2],
            vec![0],
        );
        let diag = validate_density(&bad);
        assert!(!diag.hermitian_ok);
        assert!(!diag.pass());
    }

    #[test]
    fn qubit_state_invariants() {
        let q = QubitState::from_alpha2(0.36, -1.0).unwrap();
        assert!((q.alpha() - 0.6).abs() < 1e-15);
        assert!((q.beta_modulus() - 0.8).abs() < 1e-15);
        // Phase wrapped into [0, 2π).
        assert!(q.beta_phase() >= 0.0 && q.beta_phase() < 2.0 * core::f64::consts::PI);
        assert!(q.ket().is_normalized());

        assert!(QubitState::new(0.9, 0.9, 0.0).is_err());
        assert!(QubitState::from_alpha2(1.5, 0.0).is_err());
    }

    #[test]
    fn reduced_density_matches_full_projector_route() {
        let mut amps: Vec<Complex64> = (0..12)
            .map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.37).cos()))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        let s = StateVector::new(amps, vec![2, 2, 3]).unwrap();
        for keep in [&[0usize][..], &[1], &[2], &[0, 2], &[1, 2], &[0, 1]] {
            let lean = s.reduced_density(keep).unwrap();
            let full = density_of(&s).unwrap().partial_trace(keep).unwrap();
            assert!(lean.matrix().max_abs_diff(full.matrix()) < 1e-14);
            assert_eq!(lean.modes(), full.modes());
        }
    }
}
