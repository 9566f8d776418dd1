//! Numerical tolerances used across the crate.
//!
//! Everything here works in f64 on operators of dimension at most 28, so
//! the budgets are close to machine precision with a few digits of slack
//! for accumulated rounding.

/// Squared-norm deviation allowed for a state flagged as normalized.
pub const NORM_TOL: f64 = 1e-12;

/// Max entrywise |ρ - ρ†| allowed for a density operator.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// |tr ρ - 1| allowed for a density operator.
pub const TRACE_TOL: f64 = 1e-10;

/// Floor on the minimum eigenvalue of a density operator. Partial traces
/// of round-off-perturbed states can dip slightly below zero.
pub const PSD_FLOOR: f64 = -1e-10;

/// Floor on the minimum Gram eigenvalue for feasibility.
pub const GRAM_FEASIBILITY_FLOOR: f64 = -1e-12;

/// Eigenvalues above this count toward the numerical rank of a Gram matrix.
pub const GRAM_RANK_TOL: f64 = 1e-12;

/// Max entrywise |V†V - G| allowed when realizing machine vectors.
pub const RECONSTRUCTION_TOL: f64 = 1e-12;

/// Max |⟨image_i|image_j⟩ - δ_ij| allowed for the deleter images.
pub const ISOMETRY_TOL: f64 = 1e-12;

/// Max entrywise |T†T - I| allowed for the transformer gate.
pub const UNITARITY_TOL: f64 = 1e-14;

/// Slack on parameter identities such as m1^2 + |m2|^2 = 1.
pub const PARAM_TOL: f64 = 1e-12;

/// Agreement required between pipeline values and closed forms.
pub const CROSS_CHECK_TOL: f64 = 1e-10;

/// Fidelities are accepted in [-FIDELITY_SLACK, 1 + FIDELITY_SLACK] and
/// clamped into [0, 1] for emission.
pub const FIDELITY_SLACK: f64 = 1e-10;

/// Spread below which a fidelity counts as input-independent when
/// classifying a machine. Genuine input dependence in this family is
/// O(1-2λ) or larger, so anything below 1e-5 is treated as a converged
/// limit regime rather than real state dependence.
pub const CONSTANCY_TOL: f64 = 1e-5;

/// Default number of Simpson nodes for fidelity averages. The modified
/// retained-fidelity integrand has square-root endpoint behavior, which
/// composite Simpson resolves to ~1.6e-7 at this count (1e-6 is needed).
pub const DEFAULT_QUAD_NODES: usize = 8001;
