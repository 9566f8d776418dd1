//! Machine vectors from their inner-product constraints.
//!
//! The deletion machine is specified abstractly through seven vectors
//! |A⟩, |A₀⟩, |A₁⟩, |B₀⟩, |B₁⟩, |C₀⟩, |D₀⟩ whose pairwise inner products
//! are fixed by normalization and orthogonality of the deleter, up to two
//! free parameters: λ sets the final-state norms (⟨A₀|A₀⟩ = ⟨A₁|A₁⟩ =
//! ⟨D₀|D₀⟩ = 1−2λ, ⟨B₀|B₀⟩ = ⟨B₁|B₁⟩ = ⟨C₀|C₀⟩/2 = λ) and Y is the
//! overlap of the initial state |A⟩ with each of A₀, A₁, D₀. This module
//! turns that Gram matrix into concrete vectors of minimal dimension via
//! its spectral decomposition, with feasibility diagnostics.
//!
//! PSD-ness of the Gram matrix is equivalent to 3Y² ≤ 1−2λ: |A⟩ has
//! component Y/√(1−2λ) along each of the three orthonormal directions
//! spanned by A₀, A₁, D₀, and unit norm overall.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// Float supplies f64 math in no_std graphs; std graphs resolve the
// inherent methods instead and then see this import as unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::tensor::StateVector;
use crate::tol;

/// Names for the seven machine vectors, in Gram index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MachineVector {
    /// Initial machine state |A⟩.
    A,
    /// Final state attached to the |00⟩ branch.
    A0,
    /// Final state attached to the |11⟩ branch.
    A1,
    /// Symmetric-branch state for |00⟩.
    B0,
    /// Symmetric-branch state for |11⟩.
    B1,
    /// Cross-branch state shared by |01⟩ and |10⟩.
    C0,
    /// Standard-branch state shared by |01⟩ and |10⟩.
    D0,
}

impl MachineVector {
    pub const ALL: [MachineVector; 7] = [
        MachineVector::A,
        MachineVector::A0,
        MachineVector::A1,
        MachineVector::B0,
        MachineVector::B1,
        MachineVector::C0,
        MachineVector::D0,
    ];

    pub fn index(self) -> usize {
        match self {
            MachineVector::A => 0,
            MachineVector::A0 => 1,
            MachineVector::A1 => 2,
            MachineVector::B0 => 3,
            MachineVector::B1 => 4,
            MachineVector::C0 => 5,
            MachineVector::D0 => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MachineVector::A => "A",
            MachineVector::A0 => "A0",
            MachineVector::A1 => "A1",
            MachineVector::B0 => "B0",
            MachineVector::B1 => "B1",
            MachineVector::C0 => "C0",
            MachineVector::D0 => "D0",
        }
    }
}

/// The four free parameters of a machine instance.
///
/// * `lambda` ∈ [0, 1/2] — final-state norm parameter.
/// * `y` ≥ 0 — overlap of |A⟩ with each of A₀, A₁, D₀, bounded by
///   feasibility 3Y² ≤ 1−2λ.
/// * `m1` (real) and `m2` (complex) — amplitudes of the standard state
///   |Σ⟩ = m₁|0⟩ + m₂|1⟩ with m₁² + |m₂|² = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MachineParams {
    lambda: f64,
    y: f64,
    m1: f64,
    m2: Complex64,
}

impl MachineParams {
    pub fn new(lambda: f64, y: f64, m1: f64, m2: Complex64) -> Result<Self> {
        if !lambda.is_finite() || !(-tol::PARAM_TOL..=0.5 + tol::PARAM_TOL).contains(&lambda) {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
            });
        }
        if !y.is_finite() || y < 0.0 {
            return Err(Error::OutOfRange { name: "y", value: y });
        }
        let norm = m1 * m1 + m2.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > tol::PARAM_TOL {
            return Err(Error::Unnormalized { norm_sqr: norm });
        }
        let lambda = lambda.clamp(0.0, 0.5);
        if 3.0 * y * y > (1.0 - 2.0 * lambda) + tol::PARAM_TOL {
            // Smallest eigenvalue of the (A, A0, A1, D0) principal block.
            let block_min =
                ((2.0 - 2.0 * lambda) - (4.0 * lambda * lambda + 12.0 * y * y).sqrt()) / 2.0;
            return Err(Error::Infeasible {
                lambda,
                y,
                min_eigenvalue: block_min,
            });
        }
        Ok(MachineParams { lambda, y, m1, m2 })
    }

    /// λ with the defaults Y = 0, m₁ = m₂ = 1/√2.
    pub fn with_defaults(lambda: f64) -> Result<Self> {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        MachineParams::new(lambda, 0.0, s, Complex64::from(s))
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> Complex64 {
        self.m2
    }
}

/// 7×7 Hermitian matrix of machine-vector inner products, indexed in
/// [`MachineVector`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    lambda: f64,
    y: f64,
    entries: CMatrix,
}

impl GramMatrix {
    /// Build the Gram matrix directly from (λ, Y), checking only the
    /// parameter intervals. Feasibility is *not* enforced here so that
    /// infeasible points can still be diagnosed by [`check_feasible`].
    pub fn from_lambda_y(lambda: f64, y: f64) -> Result<Self> {
        if !lambda.is_finite() || !(-tol::PARAM_TOL..=0.5 + tol::PARAM_TOL).contains(&lambda) {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
            });
        }
        if !y.is_finite() || y < 0.0 {
            return Err(Error::OutOfRange { name: "y", value: y });
        }
        let lambda = lambda.clamp(0.0, 0.5);
        let mut entries = CMatrix::zeros(7, 7);
        let diag = [
            1.0,
            1.0 - 2.0 * lambda,
            1.0 - 2.0 * lambda,
            lambda,
            lambda,
            2.0 * lambda,
            1.0 - 2.0 * lambda,
        ];
        for (i, d) in diag.iter().enumerate() {
            entries[(i, i)] = Complex64::from(*d);
        }
        for j in [
            MachineVector::A0.index(),
            MachineVector::A1.index(),
            MachineVector::D0.index(),
        ] {
            entries[(0, j)] = Complex64::from(y);
            entries[(j, 0)] = Complex64::from(y);
        }
        Ok(GramMatrix { lambda, y, entries })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn entry(&self, i: MachineVector, j: MachineVector) -> Complex64 {
        self.entries[(i.index(), j.index())]
    }
}

/// Build the Gram matrix for the given parameters: diagonal
/// (1, 1−2λ, 1−2λ, λ, λ, 2λ, 1−2λ) plus ⟨A|A₀⟩ = ⟨A|A₁⟩ = ⟨A|D₀⟩ = Y,
/// every other off-diagonal entry zero.
pub fn build_gram(params: &MachineParams) -> GramMatrix {
    GramMatrix::from_lambda_y(params.lambda(), params.y())
        .expect("validated parameters always yield a Gram matrix")
}

/// Feasibility verdicts for a Gram matrix: the PSD eigenvalue test and
/// the analytic bound 3Y² ≤ 1−2λ, which must agree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub min_eigenvalue: f64,
    /// min eigenvalue ≥ -1e-12.
    pub eigen_feasible: bool,
    /// 3Y² ≤ 1−2λ (with the same slack).
    pub analytic_feasible: bool,
    pub agree: bool,
}

impl Feasibility {
    pub fn feasible(&self) -> bool {
        self.eigen_feasible
    }
}

pub fn check_feasible(gram: &GramMatrix) -> Feasibility {
    let eig = hermitian_eigen(gram.entries());
    let min_eigenvalue = eig.values.last().copied().unwrap_or(0.0);
    let eigen_feasible = min_eigenvalue >= tol::GRAM_FEASIBILITY_FLOOR;
    let analytic_feasible =
        3.0 * gram.y() * gram.y() <= (1.0 - 2.0 * gram.lambda()) + tol::PARAM_TOL;
    Feasibility {
        min_eigenvalue,
        eigen_feasible,
        analytic_feasible,
        agree: eigen_feasible == analytic_feasible,
    }
}

/// Concrete realization of the seven machine vectors in dimension
/// d = rank(Gram), together with the Gram matrix they reproduce.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineBasis {
    vectors: Vec<Vec<Complex64>>,
    dim: usize,
    gram: GramMatrix,
}

impl MachineBasis {
    /// Wrap externally supplied vectors (used for fault injection in
    /// tests and for round-trip checks). All seven must share a length.
    pub fn from_vectors(vectors: Vec<Vec<Complex64>>, gram: GramMatrix) -> Result<Self> {
        if vectors.len() != 7 {
            return Err(Error::DimensionMismatch {
                expected: 7,
                got: vectors.len(),
            });
        }
        let dim = vectors[0].len();
        if dim == 0 || vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim.max(1),
                got: vectors.iter().map(Vec::len).find(|&l| l != dim).unwrap_or(0),
            });
        }
        Ok(MachineBasis { vectors, dim, gram })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn vector(&self, which: MachineVector) -> &[Complex64] {
        &self.vectors[which.index()]
    }

    /// The machine vector as a single-factor state (dimension d).
    pub fn state(&self, which: MachineVector) -> StateVector {
        StateVector::single_mode(self.vector(which))
    }

    /// Max entrywise |V†V − G| over all machine-vector pairs.
    pub fn reconstruction_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in MachineVector::ALL {
            for j in MachineVector::ALL {
                let mut ip = Complex64::ZERO;
                for k in 0..self.dim {
                    ip += self.vectors[i.index()][k].conj() * self.vectors[j.index()][k];
                }
                worst = worst.max((ip - self.gram.entry(i, j)).norm());
            }
        }
        worst
    }
}

/// Realize the Gram matrix as concrete vectors via its spectral
/// decomposition: with G = QΛQ† the j-th vector is
/// v_j[k] = √λ_k · conj(Q[j][k]) over the eigenvalues above the rank
/// threshold, taken in descending order. Deterministic for identical
/// input; vectors with zero Gram norm come out as genuine zero vectors.
pub fn realize_vectors(gram: &GramMatrix) -> Result<MachineBasis> {
    let feas = check_feasible(gram);
    if !feas.feasible() {
        return Err(Error::Infeasible {
            lambda: gram.lambda(),
            y: gram.y(),
            min_eigenvalue: feas.min_eigenvalue,
        });
    }
    let eig = hermitian_eigen(gram.entries());
    let dim = eig
        .values
        .iter()
        .filter(|&&v| v > tol::GRAM_RANK_TOL)
        .count()
        .max(1);
    let mut vectors = vec![vec![Complex64::ZERO; dim]; 7];
    for (j, vector) in vectors.iter_mut().enumerate() {
        for (k, slot) in vector.iter_mut().enumerate() {
            let root = eig.values[k].max(0.0).sqrt();
            *slot = eig.vectors[(j, k)].conj() * Complex64::from(root);
        }
    }
    Ok(MachineBasis {
        vectors,
        dim,
        gram: gram.clone(),
    })
}

/// The standard state |Σ⟩ = m₁|0⟩ + m₂|1⟩, its orthogonal complement
/// |Σ⊥⟩ = −m₂*|0⟩ + m₁|1⟩, and the deletion target
/// |Σ'⟩ = (|Σ⟩ + |Σ⊥⟩)/√2.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardState {
    m1: f64,
    m2: Complex64,
    sigma: StateVector,
    sigma_perp: StateVector,
    sigma_prime: StateVector,
}

impl StandardState {
    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> Complex64 {
        self.m2
    }

    pub fn sigma(&self) -> &StateVector {
        &self.sigma
    }

    pub fn sigma_perp(&self) -> &StateVector {
        &self.sigma_perp
    }

    pub fn sigma_prime(&self) -> &StateVector {
        &self.sigma_prime
    }
}

pub fn standard_state(m1: f64, m2: Complex64) -> Result<StandardState> {
    let norm = m1 * m1 + m2.norm_sqr();
    if !norm.is_finite() || (norm - 1.0).abs() > tol::PARAM_TOL {
        return Err(Error::Unnormalized { norm_sqr: norm });
    }
    let sigma = StateVector::qubit(Complex64::from(m1), m2);
    let sigma_perp = StateVector::qubit(-m2.conj(), Complex64::from(m1));
    let sigma_prime = sigma
        .add(&sigma_perp)?
        .scaled(Complex64::from(core::f64::consts::FRAC_1_SQRT_2));
    Ok(StandardState {
        m1,
        m2,
        sigma,
        sigma_perp,
        sigma_prime,
    })
}

impl MachineParams {
    /// The standard-state triple for these parameters.
    pub fn standard_state(&self) -> Result<StandardState> {
        standard_state(self.m1, self.m2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn re(x: f64) -> Complex64 {
        Complex64::from(x)
    }

    fn params(lambda: f64, y: f64) -> MachineParams {
        MachineParams::new(lambda, y, FRAC_1_SQRT_2, re(FRAC_1_SQRT_2)).unwrap()
    }

    #[test]
    fn gram_at_lambda_zero_is_projector_like() {
        let g = build_gram(&params(0.0, 0.0));
        let expect = [1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(g.entries()[(i, i)], re(*e));
        }
        for i in 0..7 {
            for j in 0..7 {
                if i != j {
                    assert_eq!(g.entries()[(i, j)], re(0.0));
                }
            }
        }
    }

    #[test]
    fn gram_quarter_lambda_with_overlap() {
        let g = build_gram(&params(0.25, 0.1));
        let expect = [1.0, 0.5, 0.5, 0.25, 0.25, 0.5, 0.5];
        for (i, e) in expect.iter().enumerate() {
            assert!((g.entries()[(i, i)] - re(*e)).norm() < 1e-15);
        }
        for v in [MachineVector::A0, MachineVector::A1, MachineVector::D0] {
            assert!((g.entry(MachineVector::A, v) - re(0.1)).norm() < 1e-15);
        }
        for v in [MachineVector::B0, MachineVector::B1, MachineVector::C0] {
            assert_eq!(g.entry(MachineVector::A, v), re(0.0));
        }
    }

    #[test]
    fn gram_at_half_lambda() {
        let g = build_gram(&params(0.5, 0.0));
        let expect = [1.0, 0.0, 0.0, 0.5, 0.5, 1.0, 0.0];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(g.entries()[(i, i)], re(*e));
        }
    }

    #[test]
    fn feasibility_examples() {
        // 3Y² = 0.27 > 1−2λ = 0.2: infeasible, negative eigenvalue in the
        // (A, A0, A1, D0) block. Analytic minimum is
        // ((2−2λ) − sqrt(4λ² + 12Y²))/2.
        let g = GramMatrix::from_lambda_y(0.4, 0.3).unwrap();
        let f = check_feasible(&g);
        let expected_min = ((2.0 - 0.8) - (4.0 * 0.16 + 12.0 * 0.09).sqrt()) / 2.0;
        assert!(!f.eigen_feasible);
        assert!(!f.analytic_feasible);
        assert!(f.agree);
        assert!((f.min_eigenvalue - expected_min).abs() < 1e-12);

        let f = check_feasible(&build_gram(&params(0.4, 0.2)));
        assert!(f.eigen_feasible && f.analytic_feasible && f.agree);
        assert!(f.min_eigenvalue > 0.07 && f.min_eigenvalue < 0.071);

        let f = check_feasible(&build_gram(&params(0.5, 0.0)));
        assert!(f.eigen_feasible && f.analytic_feasible && f.agree);
        assert!(f.min_eigenvalue.abs() < 1e-14);
    }

    #[test]
    fn rank_counts_nonzero_gram_norms() {
        // diag(1, 0, 0, 0.5, 0.5, 1, 0) has four nonzero eigenvalues.
        let basis = realize_vectors(&build_gram(&params(0.5, 0.0))).unwrap();
        assert_eq!(basis.dim(), 4);
        // Zero-norm vectors realized as genuine zero vectors.
        for v in [MachineVector::A0, MachineVector::A1, MachineVector::D0] {
            assert!(basis.vector(v).iter().all(|z| z.norm() < 1e-13));
        }

        let basis = realize_vectors(&build_gram(&params(0.0, 0.0))).unwrap();
        assert_eq!(basis.dim(), 4);
        for v in [MachineVector::B0, MachineVector::B1, MachineVector::C0] {
            assert!(basis.vector(v).iter().all(|z| z.norm() < 1e-13));
        }

        // Generic interior point keeps all seven directions.
        let basis = realize_vectors(&build_gram(&params(0.25, 0.1))).unwrap();
        assert_eq!(basis.dim(), 7);
    }

    #[test]
    fn realized_vectors_reproduce_the_gram() {
        for lambda in [0.0, 0.1, 0.25, 0.3, 0.45, 0.5] {
            let ymax = ((1.0 - 2.0 * lambda) / 3.0).sqrt();
            for frac in [0.0, 0.5, 0.99] {
                let g = build_gram(&params(lambda, ymax * frac));
                let basis = realize_vectors(&g).unwrap();
                assert!(
                    basis.reconstruction_residual() < tol::RECONSTRUCTION_TOL,
                    "residual {} at lambda={lambda}, frac={frac}",
                    basis.reconstruction_residual()
                );
            }
        }
    }

    #[test]
    fn realization_at_quarter_lambda_is_orthogonal_family() {
        let basis = realize_vectors(&build_gram(&params(0.25, 0.0))).unwrap();
        let finals = [
            MachineVector::A0,
            MachineVector::A1,
            MachineVector::B0,
            MachineVector::B1,
            MachineVector::C0,
            MachineVector::D0,
        ];
        for (i, &vi) in finals.iter().enumerate() {
            for &vj in finals.iter().skip(i + 1) {
                let ip: Complex64 = basis
                    .vector(vi)
                    .iter()
                    .zip(basis.vector(vj))
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                assert!(ip.norm() < 1e-13, "{:?} vs {:?}", vi, vj);
            }
        }
        // At Y = 0 the initial state is orthogonal to every final.
        for &v in &finals {
            let ip: Complex64 = basis
                .vector(MachineVector::A)
                .iter()
                .zip(basis.vector(v))
                .map(|(a, b)| a.conj() * b)
                .sum();
            assert!(ip.norm() < 1e-13);
        }
    }

    #[test]
    fn realize_rejects_infeasible() {
        let g = GramMatrix::from_lambda_y(0.4, 0.3).unwrap();
        assert!(matches!(
            realize_vectors(&g),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn feasibility_boundary_matches_analytic_curve() {
        // Bisect the eigenvalue verdict in Y and compare with
        // sqrt((1-2λ)/3).
        let lambda = 0.3;
        let expected = ((1.0 - 2.0 * lambda) / 3.0).sqrt();
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            let g = GramMatrix::from_lambda_y(lambda, mid).unwrap();
            if check_feasible(&g).eigen_feasible {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - expected).abs() < 1e-6, "flip at {lo}, expected {expected}");
    }

    #[test]
    fn standard_state_examples() {
        let s = standard_state(1.0, re(0.0)).unwrap();
        assert_eq!(s.sigma().amps(), &[re(1.0), re(0.0)]);
        assert_eq!(s.sigma_perp().amps(), &[re(0.0), re(1.0)]);
        assert!((s.sigma_prime().amps()[0] - re(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((s.sigma_prime().amps()[1] - re(FRAC_1_SQRT_2)).norm() < 1e-15);

        // m1 = m2 = 1/√2 drives the target to |1⟩.
        let s = standard_state(FRAC_1_SQRT_2, re(FRAC_1_SQRT_2)).unwrap();
        assert!(s.sigma_prime().amps()[0].norm() < 1e-15);
        assert!((s.sigma_prime().amps()[1] - re(1.0)).norm() < 1e-12);

        // Purely imaginary m2 keeps the pair orthonormal.
        let s = standard_state(0.0, Complex64::new(0.0, 1.0)).unwrap();
        assert!(s.sigma().inner(s.sigma_perp()).unwrap().norm() < 1e-15);
        assert!((s.sigma().norm() - 1.0).abs() < 1e-15);
        assert!((s.sigma_perp().norm() - 1.0).abs() < 1e-15);

        assert!(standard_state(0.9, re(0.9)).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(MachineParams::new(-0.1, 0.0, 1.0, re(0.0)).is_err());
        assert!(MachineParams::new(0.6, 0.0, 1.0, re(0.0)).is_err());
        assert!(MachineParams::new(0.25, -0.1, 1.0, re(0.0)).is_err());
        assert!(MachineParams::new(0.25, 0.0, 0.9, re(0.9)).is_err());
        // Feasibility bound enforced at construction.
        assert!(matches!(
            MachineParams::new(0.4, 0.3, 1.0, re(0.0)),
            Err(Error::Infeasible { .. })
        ));
        assert!(MachineParams::new(0.4, 0.2, 1.0, re(0.0)).is_ok());
    }
}
