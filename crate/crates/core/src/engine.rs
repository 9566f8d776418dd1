//! The deleter isometry, the transformer gate, and the two pipelines.
//!
//! The deleter U acts on |ab⟩ ⊗ |A⟩ (two qubits plus machine) as
//!
//! ```text
//! U|00⟩|A⟩ = |0⟩|Σ⟩|A₀⟩ + (|01⟩ + |10⟩)|B₀⟩
//! U|01⟩|A⟩ = |0⟩|Σ⊥⟩|D₀⟩ + |10⟩|C₀⟩
//! U|10⟩|A⟩ = |1⟩|Σ⟩|D₀⟩ + |01⟩|C₀⟩
//! U|11⟩|A⟩ = |1⟩|Σ⊥⟩|A₁⟩ + (|01⟩ + |10⟩)|B₁⟩
//! ```
//!
//! With the machine-vector inner products from [`crate::machine`], the
//! four images are orthonormal, so U extends linearly to an isometry on
//! the two-copy inputs |ψ⟩|ψ⟩ = α²|00⟩ + αβ(|01⟩ + |10⟩) + β²|11⟩.
//!
//! The modified pipeline follows the deleter with the two-qubit
//! transformer T = |ψ+⟩⟨00| + |11⟩⟨01| + |ψ−⟩⟨10| + |00⟩⟨11| applied to
//! modes (0, 1) with identity on the machine mode. The machine mode has
//! dimension d ≠ 4 in general, so "identity on the rest" necessarily
//! means the machine factor.

use alloc::vec;


use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::machine::{
    build_gram, realize_vectors, MachineBasis, MachineParams, MachineVector, StandardState,
};
use crate::tensor::{density_of, tensor_product, DensityOp, QubitState, StateVector};
use crate::tol;

/// Mode label of the retained qubit (the paper-facing "mode 1").
pub const MODE_RETAINED: usize = 0;
/// Mode label of the deleted qubit ("mode 2").
pub const MODE_DELETED: usize = 1;
/// Mode label of the machine factor ("mode 3").
pub const MODE_MACHINE: usize = 2;

/// The deleter as its four basis images in dims (2, 2, d), indexed by the
/// input label ab ∈ {00, 01, 10, 11} flattened as 2a + b.
#[derive(Debug, Clone, PartialEq)]
pub struct DeleterMap {
    images: [StateVector; 4],
    machine_dim: usize,
}

impl DeleterMap {
    pub fn machine_dim(&self) -> usize {
        self.machine_dim
    }

    /// Image of |ab⟩, label index 2a + b.
    pub fn image(&self, label: usize) -> &StateVector {
        &self.images[label]
    }

    pub fn images(&self) -> &[StateVector; 4] {
        &self.images
    }
}

/// Assemble the four deleter images from a realized machine basis and a
/// standard-state triple, with |Σ⟩, |Σ⊥⟩ expanded in the mode-1
/// computational basis.
pub fn build_deleter(basis: &MachineBasis, std_state: &StandardState) -> Result<DeleterMap> {
    let d = basis.dim();
    let zero = StateVector::basis(2, 0);
    let one = StateVector::basis(2, 1);
    let sigma = std_state.sigma();
    let sigma_perp = std_state.sigma_perp();

    let a0 = basis.state(MachineVector::A0);
    let a1 = basis.state(MachineVector::A1);
    let b0 = basis.state(MachineVector::B0);
    let b1 = basis.state(MachineVector::B1);
    let c0 = basis.state(MachineVector::C0);
    let d0 = basis.state(MachineVector::D0);

    let img00 = tensor_product(&[&zero, sigma, &a0])?
        .add(&tensor_product(&[&zero, &one, &b0])?)?
        .add(&tensor_product(&[&one, &zero, &b0])?)?;
    let img01 = tensor_product(&[&zero, sigma_perp, &d0])?
        .add(&tensor_product(&[&one, &zero, &c0])?)?;
    let img10 = tensor_product(&[&one, sigma, &d0])?
        .add(&tensor_product(&[&zero, &one, &c0])?)?;
    let img11 = tensor_product(&[&one, sigma_perp, &a1])?
        .add(&tensor_product(&[&zero, &one, &b1])?)?
        .add(&tensor_product(&[&one, &zero, &b1])?)?;

    Ok(DeleterMap {
        images: [img00, img01, img10, img11],
        machine_dim: d,
    })
}

/// Residual of the isometry condition over the four deleter images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryReport {
    /// max |⟨image_i|image_j⟩ − δ_ij| over all pairs.
    pub max_residual: f64,
    /// Pair (i, j) attaining the maximum, labels flattened as 2a + b.
    pub worst_pair: (usize, usize),
    pub pass: bool,
}

pub fn verify_isometry(map: &DeleterMap) -> IsometryReport {
    let mut max_residual: f64 = 0.0;
    let mut worst_pair = (0, 0);
    for i in 0..4 {
        for j in 0..4 {
            let ip = map.images[i]
                .inner(&map.images[j])
                .expect("images share dims");
            let target = if i == j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            };
            let residual = (ip - target).norm();
            if residual > max_residual {
                max_residual = residual;
                worst_pair = (i, j);
            }
        }
    }
    IsometryReport {
        max_residual,
        worst_pair,
        pass: max_residual < tol::ISOMETRY_TOL,
    }
}

/// U(|ψ⟩|ψ⟩|A⟩) by linear extension: coefficients (α², αβ, αβ, β²) on the
/// four images.
pub fn apply_deleter(input: &QubitState, map: &DeleterMap) -> Result<StateVector> {
    let alpha = Complex64::from(input.alpha());
    let beta = input.beta();
    let coeffs = [alpha * alpha, alpha * beta, alpha * beta, beta * beta];
    let mut out = map.images[0].scaled(coeffs[0]);
    for k in 1..4 {
        out = out.add(&map.images[k].scaled(coeffs[k]))?;
    }
    Ok(out)
}

/// The two-qubit transformer gate on modes (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct TransformerGate {
    matrix: CMatrix,
}

impl TransformerGate {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Max entrywise |T†T − I|.
    pub fn unitarity_residual(&self) -> f64 {
        self.matrix
            .adjoint()
            .mul(&self.matrix)
            .max_abs_diff(&CMatrix::identity(4))
    }

    /// Test-support constructor for fault injection.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: matrix.rows(),
            });
        }
        Ok(TransformerGate { matrix })
    }
}

/// T = |ψ+⟩⟨00| + |11⟩⟨01| + |ψ−⟩⟨10| + |00⟩⟨11| with
/// |ψ±⟩ = (|01⟩ ± |10⟩)/√2; columns in input order 00, 01, 10, 11.
pub fn build_transformer() -> TransformerGate {
    let s = Complex64::from(core::f64::consts::FRAC_1_SQRT_2);
    let mut m = CMatrix::zeros(4, 4);
    // column 0: |ψ+⟩
    m[(1, 0)] = s;
    m[(2, 0)] = s;
    // column 1: |11⟩
    m[(3, 1)] = Complex64::ONE;
    // column 2: |ψ−⟩
    m[(1, 2)] = s;
    m[(2, 2)] = -s;
    // column 3: |00⟩
    m[(0, 3)] = Complex64::ONE;
    TransformerGate { matrix: m }
}

/// Conjugate a density operator on modes (0, 1, 2) by T ⊗ I_machine.
pub fn apply_transformer(rho: &DensityOp, gate: &TransformerGate) -> Result<DensityOp> {
    let dims = rho.dims();
    if dims.len() != 3 || dims[0] != 2 || dims[1] != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: *dims.first().unwrap_or(&0),
        });
    }
    let d = dims[2];
    let n = 4 * d;
    // G = T ⊗ I_d, exploiting the block structure: row (q, c), col (r, c).
    let mut out = CMatrix::zeros(n, n);
    // First G ρ: (G ρ)[(q,c), j] = Σ_r T[q,r] ρ[(r,c), j].
    let mut grho = CMatrix::zeros(n, n);
    for q in 0..4 {
        for c in 0..d {
            let row = q * d + c;
            for j in 0..n {
                let mut acc = Complex64::ZERO;
                for r in 0..4 {
                    let t = gate.matrix[(q, r)];
                    if t != Complex64::ZERO {
                        acc += t * rho.matrix()[(r * d + c, j)];
                    }
                }
                grho[(row, j)] = acc;
            }
        }
    }
    // Then (G ρ) G†: out[i, (q,c)] = Σ_r (Gρ)[i, (r,c)] conj(T[q,r]).
    for i in 0..n {
        for q in 0..4 {
            for c in 0..d {
                let col = q * d + c;
                let mut acc = Complex64::ZERO;
                for r in 0..4 {
                    let t = gate.matrix[(q, r)];
                    if t != Complex64::ZERO {
                        acc += grho[(i, r * d + c)] * t.conj();
                    }
                }
                out[(i, col)] = acc;
            }
        }
    }
    Ok(DensityOp::from_parts_unchecked(
        out,
        rho.dims().to_vec(),
        rho.modes().to_vec(),
    ))
}

/// Apply T ⊗ I_machine to a pure state in dims (2, 2, d).
pub fn transform_state(state: &StateVector, gate: &TransformerGate) -> Result<StateVector> {
    let dims = state.dims();
    if dims.len() != 3 || dims[0] != 2 || dims[1] != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: *dims.first().unwrap_or(&0),
        });
    }
    let d = dims[2];
    let mut amps = vec![Complex64::ZERO; 4 * d];
    for q in 0..4 {
        for c in 0..d {
            let mut acc = Complex64::ZERO;
            for r in 0..4 {
                let t = gate.matrix[(q, r)];
                if t != Complex64::ZERO {
                    acc += t * state.amps()[r * d + c];
                }
            }
            amps[q * d + c] = acc;
        }
    }
    StateVector::new(amps, dims.to_vec())
}

/// A fully constructed machine: realized basis, standard state, deleter,
/// and transformer, ready to evolve inputs.
#[derive(Debug, Clone)]
pub struct Machine {
    params: MachineParams,
    basis: MachineBasis,
    standard: StandardState,
    deleter: DeleterMap,
    transformer: TransformerGate,
}

impl Machine {
    pub fn new(params: MachineParams) -> Result<Self> {
        let gram = build_gram(&params);
        let basis = realize_vectors(&gram)?;
        let standard = params.standard_state()?;
        let deleter = build_deleter(&basis, &standard)?;
        Ok(Machine {
            params,
            basis,
            standard,
            deleter,
            transformer: build_transformer(),
        })
    }

    pub fn params(&self) -> &MachineParams {
        &self.params
    }

    pub fn basis(&self) -> &MachineBasis {
        &self.basis
    }

    pub fn standard(&self) -> &StandardState {
        &self.standard
    }

    pub fn deleter(&self) -> &DeleterMap {
        &self.deleter
    }

    pub fn transformer(&self) -> &TransformerGate {
        &self.transformer
    }

    /// Full pipeline for one input: deleter, rank-1 density operator,
    /// optional transformer conjugation, then the three single-mode
    /// reductions.
    pub fn run(&self, input: &QubitState, with_transformer: bool) -> Result<PipelineRun> {
        let deleter_output = apply_deleter(input, &self.deleter)?;
        let rho = density_of(&deleter_output)?;
        let rho_full = if with_transformer {
            apply_transformer(&rho, &self.transformer)?
        } else {
            rho
        };
        let rho_retained = rho_full.partial_trace(&[MODE_RETAINED])?;
        let rho_deleted = rho_full.partial_trace(&[MODE_DELETED])?;
        let rho_machine = rho_full.partial_trace(&[MODE_MACHINE])?;
        Ok(PipelineRun {
            input: *input,
            transformed: with_transformer,
            deleter_output,
            rho_full,
            rho_retained,
            rho_deleted,
            rho_machine,
        })
    }

    /// All six fidelities of one input at once, via pure-state reductions
    /// (cheap enough for dense parameter grids and quadrature).
    pub fn fidelity_sample(&self, input: &QubitState) -> Result<FidelitySample> {
        let psi = input.ket();
        let sigma_prime = self.standard.sigma_prime();
        let a_state = self.basis.state(MachineVector::A);

        let out = apply_deleter(input, &self.deleter)?;
        let f1 = out.reduced_density(&[MODE_RETAINED])?.expectation(&psi)?;
        let f2 = out
            .reduced_density(&[MODE_DELETED])?
            .expectation(sigma_prime)?;
        let fc = out
            .reduced_density(&[MODE_MACHINE])?
            .expectation(&a_state)?;

        let tout = transform_state(&out, &self.transformer)?;
        let f3 = tout.reduced_density(&[MODE_RETAINED])?.expectation(&psi)?;
        let f4 = tout
            .reduced_density(&[MODE_DELETED])?
            .expectation(sigma_prime)?;
        let fc_prime = tout
            .reduced_density(&[MODE_MACHINE])?
            .expectation(&a_state)?;

        Ok(FidelitySample {
            f1,
            f2,
            f3,
            f4,
            fc,
            fc_prime,
        })
    }
}

/// Numeric fidelities of one pipeline evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelitySample {
    /// Retained-mode fidelity ⟨ψ|ρ₁|ψ⟩, conventional.
    pub f1: f64,
    /// Deletion fidelity ⟨Σ'|ρ₂|Σ'⟩, conventional.
    pub f2: f64,
    /// Retained-mode fidelity after the transformer.
    pub f3: f64,
    /// Deletion fidelity after the transformer.
    pub f4: f64,
    /// Machine overlap ⟨A|ρ₃|A⟩, conventional.
    pub fc: f64,
    /// Machine overlap after the transformer.
    pub fc_prime: f64,
}

/// Output of one full pipeline evaluation.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub input: QubitState,
    pub transformed: bool,
    /// Pure deleter output in dims (2, 2, d), before any transformer.
    pub deleter_output: StateVector,
    /// ρ on all three modes (transformed when requested).
    pub rho_full: DensityOp,
    /// Reduction to the retained qubit.
    pub rho_retained: DensityOp,
    /// Reduction to the deleted qubit.
    pub rho_deleted: DensityOp,
    /// Reduction to the machine factor.
    pub rho_machine: DensityOp,
}

/// Convenience wrapper: build the machine for `params` and run one input.
pub fn run_pipeline(
    input: &QubitState,
    params: &MachineParams,
    with_transformer: bool,
) -> Result<PipelineRun> {
    Machine::new(*params)?.run(input, with_transformer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::GramMatrix;
    use crate::tensor::validate_density;
    use alloc::vec::Vec;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn re(x: f64) -> Complex64 {
        Complex64::from(x)
    }

    fn machine(lambda: f64, y: f64) -> Machine {
        let params =
            MachineParams::new(lambda, y, FRAC_1_SQRT_2, re(FRAC_1_SQRT_2)).unwrap();
        Machine::new(params).unwrap()
    }

    #[test]
    fn image_00_at_half_lambda_is_symmetric_branch() {
        // A0 vanishes, leaving (|01⟩ + |10⟩)|B0⟩ with squared norm 2·(1/2).
        let m = machine(0.5, 0.0);
        let img = m.deleter().image(0);
        assert!((img.norm_sqr() - 1.0).abs() < 1e-13);
        let d = m.basis().dim();
        // No amplitude in the |00⟩ or |11⟩ blocks.
        for c in 0..d {
            assert!(img.amps()[c].norm() < 1e-13);
            assert!(img.amps()[3 * d + c].norm() < 1e-13);
        }
        // |01⟩ and |10⟩ blocks carry the same machine vector.
        for c in 0..d {
            assert!((img.amps()[d + c] - img.amps()[2 * d + c]).norm() < 1e-13);
        }
    }

    #[test]
    fn image_01_at_zero_lambda_is_standard_branch() {
        // C0 vanishes at λ = 0, leaving |0⟩|Σ⊥⟩|D0⟩ with unit norm.
        let m = machine(0.0, 0.0);
        let img = m.deleter().image(1);
        assert!((img.norm_sqr() - 1.0).abs() < 1e-13);
        let d = m.basis().dim();
        // No amplitude with the first qubit in |1⟩.
        for k in 2 * d..4 * d {
            assert!(img.amps()[k].norm() < 1e-13);
        }
    }

    #[test]
    fn images_are_unit_norm_across_lambda_grid() {
        for tenths in 0..=5 {
            let m = machine(tenths as f64 * 0.1, 0.0);
            for label in 0..4 {
                assert!(
                    (m.deleter().image(label).norm_sqr() - 1.0).abs() < 1e-13,
                    "label {label} at lambda {}",
                    tenths as f64 * 0.1
                );
            }
        }
    }

    #[test]
    fn isometry_holds_for_feasible_parameters() {
        for (lambda, y) in [(0.25, 0.1), (0.0, 0.0), (0.5, 0.0), (0.4, 0.25)] {
            let params =
                MachineParams::new(lambda, y, FRAC_1_SQRT_2, re(FRAC_1_SQRT_2)).unwrap();
            let m = Machine::new(params).unwrap();
            let report = verify_isometry(m.deleter());
            assert!(report.pass, "residual {} at ({lambda}, {y})", report.max_residual);
        }
    }

    #[test]
    fn corrupted_cross_overlap_shows_up_in_isometry() {
        // Force ⟨B0|C0⟩ = 0.1 and check the (00, 01) pair reports it.
        let m = machine(0.25, 0.0);
        let gram = GramMatrix::from_lambda_y(0.25, 0.0).unwrap();
        let mut vectors: Vec<Vec<Complex64>> = MachineVector::ALL
            .iter()
            .map(|&v| m.basis().vector(v).to_vec())
            .collect();
        // B0 <- B0 + (0.1/⟨C0|C0⟩) C0 gives the target overlap.
        let scale = 0.1 / 0.5;
        let c0 = vectors[MachineVector::C0.index()].clone();
        for (b, c) in vectors[MachineVector::B0.index()]
            .iter_mut()
            .zip(c0.iter())
        {
            *b += re(scale) * c;
        }
        let bad_basis = MachineBasis::from_vectors(vectors, gram).unwrap();
        let bad = build_deleter(&bad_basis, m.standard()).unwrap();
        let report = verify_isometry(&bad);
        assert!(!report.pass);
        assert_eq!(report.worst_pair, (0, 1));
        assert!((report.max_residual - 0.1).abs() < 0.02);
    }

    #[test]
    fn deleter_on_basis_inputs_returns_the_images() {
        let m = machine(0.25, 0.1);
        let zero_in = QubitState::new(1.0, 0.0, 0.0).unwrap();
        let out = apply_deleter(&zero_in, m.deleter()).unwrap();
        assert!(out
            .amps()
            .iter()
            .zip(m.deleter().image(0).amps())
            .all(|(a, b)| (a - b).norm() < 1e-15));

        let one_in = QubitState::new(0.0, 1.0, 0.0).unwrap();
        let out = apply_deleter(&one_in, m.deleter()).unwrap();
        assert!(out
            .amps()
            .iter()
            .zip(m.deleter().image(3).amps())
            .all(|(a, b)| (a - b).norm() < 1e-15));
    }

    #[test]
    fn deleter_preserves_norm_on_superpositions() {
        let m = machine(0.25, 0.0);
        for k in 0..=20 {
            let alpha2 = k as f64 / 20.0;
            for phase in [0.0, 1.0, 2.5, 4.0] {
                let input = QubitState::from_alpha2(alpha2, phase).unwrap();
                let out = apply_deleter(&input, m.deleter()).unwrap();
                assert!(
                    (out.norm_sqr() - 1.0).abs() < 1e-12,
                    "alpha2 {alpha2} phase {phase}"
                );
            }
        }
    }

    #[test]
    fn transformer_columns_and_unitarity() {
        let t = build_transformer();
        let s = FRAC_1_SQRT_2;
        // T|00⟩ = (|01⟩ + |10⟩)/√2
        assert!((t.matrix()[(1, 0)] - re(s)).norm() < 1e-16);
        assert!((t.matrix()[(2, 0)] - re(s)).norm() < 1e-16);
        // T|11⟩ = |00⟩
        assert!((t.matrix()[(0, 3)] - re(1.0)).norm() < 1e-16);
        // T|01⟩ = |11⟩
        assert!((t.matrix()[(3, 1)] - re(1.0)).norm() < 1e-16);
        assert!(t.unitarity_residual() < tol::UNITARITY_TOL);
    }

    #[test]
    fn transformer_maps_00_projector_to_triplet_projector() {
        // ρ = |00⟩⟨00| ⊗ σ_machine  →  |ψ+⟩⟨ψ+| ⊗ σ_machine.
        let two_zero = tensor_product(&[&StateVector::basis(2, 0), &StateVector::basis(2, 0)])
            .unwrap();
        let sigma_m = StateVector::single_mode(&[re(0.6), re(0.8)]);
        let full = tensor_product(&[&two_zero, &sigma_m]).unwrap();
        let rho = density_of(&full).unwrap();
        let rho_t = apply_transformer(&rho, &build_transformer()).unwrap();

        let s = FRAC_1_SQRT_2;
        let mut psi_plus_amps = vec![Complex64::ZERO; 4];
        psi_plus_amps[1] = re(s);
        psi_plus_amps[2] = re(s);
        let psi_plus = StateVector::new(psi_plus_amps, vec![2, 2]).unwrap();
        let expected =
            density_of(&tensor_product(&[&psi_plus, &sigma_m]).unwrap()).unwrap();
        assert!(rho_t.matrix().max_abs_diff(expected.matrix()) < 1e-14);
    }

    #[test]
    fn transformer_preserves_trace_and_spectrum() {
        let m = machine(0.3, 0.1);
        let input = QubitState::from_alpha2(0.7, 0.9).unwrap();
        let run = m.run(&input, false).unwrap();
        let rho_t = apply_transformer(&run.rho_full, m.transformer()).unwrap();
        assert!((rho_t.trace() - Complex64::ONE).norm() < 1e-12);
        let mut before = run.rho_full.eigenvalues();
        let mut after = rho_t.eigenvalues();
        before.sort_by(|a, b| a.partial_cmp(b).unwrap());
        after.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, y) in before.iter().zip(&after) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn transformed_corner_state_reduces_to_known_matrix() {
        // α = 1, λ = 1/2: U gives (|01⟩+|10⟩)|B0⟩; T maps it to
        // (|11⟩ + (|01⟩−|10⟩)/√2)|B0⟩; tracing modes 1,2 leaves
        // [[1/4, 1/(2√2)], [1/(2√2), 3/4]].
        let m = machine(0.5, 0.0);
        let input = QubitState::new(1.0, 0.0, 0.0).unwrap();
        let run = m.run(&input, true).unwrap();
        let s = 1.0 / (2.0 * core::f64::consts::SQRT_2);
        assert!((run.rho_retained.entry(0, 0) - re(0.25)).norm() < 1e-13);
        assert!((run.rho_retained.entry(1, 1) - re(0.75)).norm() < 1e-13);
        assert!((run.rho_retained.entry(0, 1) - re(s)).norm() < 1e-13);
        assert!((run.rho_retained.entry(1, 0) - re(s)).norm() < 1e-13);
    }

    #[test]
    fn conventional_corner_state_is_maximally_mixed() {
        let m = machine(0.5, 0.0);
        let input = QubitState::new(1.0, 0.0, 0.0).unwrap();
        let run = m.run(&input, false).unwrap();
        assert!((run.rho_retained.entry(0, 0) - re(0.5)).norm() < 1e-13);
        assert!((run.rho_retained.entry(1, 1) - re(0.5)).norm() < 1e-13);
        assert!(run.rho_retained.entry(0, 1).norm() < 1e-13);
    }

    #[test]
    fn balanced_input_at_zero_lambda_gives_half_retained_fidelity() {
        let m = machine(0.0, 0.0);
        let input = QubitState::from_alpha2(0.5, 0.0).unwrap();
        let run = m.run(&input, false).unwrap();
        let f1 = run.rho_retained.expectation(&input.ket()).unwrap();
        assert!((f1 - 0.5).abs() < 1e-13);
    }

    #[test]
    fn machine_mode_is_invariant_under_transformer() {
        let m = machine(0.3, 0.2);
        let input = QubitState::from_alpha2(0.4, 1.2).unwrap();
        let plain = m.run(&input, false).unwrap();
        let transformed = m.run(&input, true).unwrap();
        assert!(
            plain
                .rho_machine
                .matrix()
                .max_abs_diff(transformed.rho_machine.matrix())
                < 1e-12
        );
    }

    #[test]
    fn pipeline_outputs_are_valid_densities() {
        let m = machine(0.25, 0.1);
        let input = QubitState::from_alpha2(0.3, 2.0).unwrap();
        for with_t in [false, true] {
            let run = m.run(&input, with_t).unwrap();
            for rho in [&run.rho_retained, &run.rho_deleted, &run.rho_machine] {
                assert!(validate_density(rho).pass());
            }
        }
    }

    #[test]
    fn fidelity_sample_matches_full_run() {
        let m = machine(0.2, 0.15);
        let input = QubitState::from_alpha2(0.6, 0.7).unwrap();
        let s = m.fidelity_sample(&input).unwrap();
        let plain = m.run(&input, false).unwrap();
        let transformed = m.run(&input, true).unwrap();
        let psi = input.ket();
        let sp = m.standard().sigma_prime();
        let a = m.basis().state(MachineVector::A);
        assert!((s.f1 - plain.rho_retained.expectation(&psi).unwrap()).abs() < 1e-13);
        assert!((s.f2 - plain.rho_deleted.expectation(sp).unwrap()).abs() < 1e-13);
        assert!((s.fc - plain.rho_machine.expectation(&a).unwrap()).abs() < 1e-13);
        assert!((s.f3 - transformed.rho_retained.expectation(&psi).unwrap()).abs() < 1e-13);
        assert!((s.f4 - transformed.rho_deleted.expectation(sp).unwrap()).abs() < 1e-13);
        assert!(
            (s.fc_prime - transformed.rho_machine.expectation(&a).unwrap()).abs() < 1e-13
        );
    }
}
