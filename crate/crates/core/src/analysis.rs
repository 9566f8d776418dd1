//! Closed-form fidelity expressions, averages, and machine classification.
//!
//! The numeric pipeline (isometry-verified) is the ground truth here; the
//! closed forms are transcriptions of the reduced operators and fidelities
//! as functions of (α², λ, m₁, m₂), and every report carries numeric and
//! closed values side by side so disagreement is visible rather than
//! hidden. The primed (transformer) forms are stated for real β; since the
//! reduced-operator entries depend on β only through |β|², they hold for
//! every β phase as well.
//!
//! Conventions: the retained-mode fidelity sandwiches the input |ψ⟩, the
//! deletion fidelity sandwiches the target |Σ'⟩ = (|Σ⟩+|Σ⊥⟩)/√2, and the
//! machine overlap sandwiches the initial machine state |A⟩ (which comes
//! out as Y², independent of the input).

use alloc::format;
use alloc::string::String;
use alloc::vec;

use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use core::fmt;

use num_complex::Complex64;

use crate::engine::{Machine, MODE_DELETED, MODE_RETAINED};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::machine::StandardState;
use crate::tensor::{DensityOp, QubitState, StateVector};
use crate::tol;

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || !value.is_finite() {
        return Err(Error::OutOfRange { name, value });
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || !(0.0..=0.5).contains(&lambda) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
        });
    }
    Ok(())
}

/// Conventional retained-mode fidelity
/// F₁(α², λ) = (1−λ) + 2α²(1−α²)(2λ−1).
pub fn closed_f1(alpha2: f64, lambda: f64) -> Result<f64> {
    check_unit("alpha2", alpha2)?;
    check_lambda(lambda)?;
    Ok((1.0 - lambda) + 2.0 * alpha2 * (1.0 - alpha2) * (2.0 * lambda - 1.0))
}

/// Conventional reduced operator on the retained mode: diagonal with
/// entries α⁴(1−λ) + α²|β|² + |β|⁴λ and α⁴λ + α²|β|² + |β|⁴(1−λ).
pub fn closed_rho1(alpha2: f64, lambda: f64) -> Result<DensityOp> {
    check_unit("alpha2", alpha2)?;
    check_lambda(lambda)?;
    let b2 = 1.0 - alpha2;
    let a4 = alpha2 * alpha2;
    let cross = alpha2 * b2;
    let b4 = b2 * b2;
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = Complex64::from(a4 * (1.0 - lambda) + cross + b4 * lambda);
    m[(1, 1)] = Complex64::from(a4 * lambda + cross + b4 * (1.0 - lambda));
    DensityOp::from_matrix(m, vec![2], vec![MODE_RETAINED])
}

/// Conventional reduced operator on the deleted mode:
/// λ(|0⟩⟨0| + |1⟩⟨1|) + (1−2λ)(α²|Σ⟩⟨Σ| + |β|²|Σ⊥⟩⟨Σ⊥|).
pub fn closed_rho2(alpha2: f64, lambda: f64, std_state: &StandardState) -> Result<DensityOp> {
    check_unit("alpha2", alpha2)?;
    check_lambda(lambda)?;
    let b2 = 1.0 - alpha2;
    let t = 1.0 - 2.0 * lambda;
    let sigma = std_state.sigma().amps();
    let perp = std_state.sigma_perp().amps();
    let mut m = CMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let mut v = Complex64::ZERO;
            if i == j {
                v += Complex64::from(lambda);
            }
            v += Complex64::from(t * alpha2) * sigma[i] * sigma[j].conj();
            v += Complex64::from(t * b2) * perp[i] * perp[j].conj();
            m[(i, j)] = v;
        }
    }
    DensityOp::from_matrix(m, vec![2], vec![MODE_DELETED])
}

/// Sum of the computational-basis overlap products of |Σ⟩ and |Σ⊥⟩ that
/// enters the conventional deletion fidelity. The squared overlaps are
/// modulus squares; the identity ⟨Σ|Σ⊥⟩ = 0 forces the value 2 for every
/// normalized standard state.
pub fn sigma_basis_overlap_sum(std_state: &StandardState) -> Complex64 {
    let sigma = std_state.sigma().amps();
    let perp = std_state.sigma_perp().amps();
    let k1 = Complex64::from(sigma[0].norm_sqr() + sigma[1].norm_sqr())
        + sigma[0].conj() * perp[0]
        + sigma[1].conj() * perp[1];
    let k2 = Complex64::from(perp[0].norm_sqr() + perp[1].norm_sqr())
        + perp[0].conj() * sigma[0]
        + perp[1].conj() * sigma[1];
    k1 + k2
}

/// Conventional deletion fidelity
/// F₂ = (1/2)[(1−2λ) + (K₁+K₂)λ] with K₁+K₂ = 2, hence 1/2 for every
/// input and machine.
pub fn closed_f2(lambda: f64, std_state: &StandardState) -> Result<f64> {
    check_lambda(lambda)?;
    let ksum = sigma_basis_overlap_sum(std_state);
    Ok(0.5 * ((1.0 - 2.0 * lambda) + ksum.re * lambda))
}

/// Overlap ⟨A|ρ₃|A⟩ between the initial machine state and the reduced
/// machine operator; equals Y² independent of the input.
pub fn machine_overlap(rho_machine: &DensityOp, a_state: &StateVector) -> Result<f64> {
    rho_machine.expectation(a_state)
}

/// Shared bracket structure of the primed reduced operators. `signs`
/// flips the three terms that differ between the retained- and
/// deleted-mode forms.
fn primed_matrix(alpha2: f64, lambda: f64, std_state: &StandardState, deleted: bool) -> CMatrix {
    let a4 = alpha2 * alpha2;
    let b2 = 1.0 - alpha2;
    let cross = alpha2 * b2;
    let b4 = b2 * b2;
    let t = 1.0 - 2.0 * lambda;
    let m1 = Complex64::from(std_state.m1());
    let m2 = std_state.m2();
    let m2c = m2.conj();
    let mm = Complex64::from(m2.norm_sqr());
    let m1sq = m1 * m1;
    let lam = Complex64::from(lambda);
    let tc = Complex64::from(t);
    let half = Complex64::from(0.5);
    let inv_sqrt2 = Complex64::from(FRAC_1_SQRT_2);

    // The |0⟩⟨0| and |1⟩⟨1| brackets differ between the two forms only in
    // the sign of m₁(m₂+m₂*); the off-diagonals differ in overall signs
    // and in λ vs −λ.
    let diag_sign = if deleted { 1.0 } else { -1.0 };
    let d00 = half
        * (Complex64::from(a4) * (m1sq * tc + lam)
            + Complex64::from(cross)
                * ((Complex64::from(3.0) * mm
                    + Complex64::from(diag_sign) * m1 * (m2 + m2c)
                    + m1sq)
                    * tc
                    + Complex64::from(2.0) * lam)
            + Complex64::from(b4) * ((mm + Complex64::from(2.0) * m1sq) * tc + lam));
    let d11 = half
        * (Complex64::from(a4) * ((m1sq + Complex64::from(2.0) * mm) * tc + Complex64::from(3.0) * lam)
            + Complex64::from(cross)
                * ((mm - Complex64::from(diag_sign) * m1 * (m2 + m2c)
                    + Complex64::from(3.0) * m1sq)
                    * tc
                    + Complex64::from(6.0) * lam)
            + Complex64::from(b4) * (mm * tc + Complex64::from(3.0) * lam));

    let (d01, d10) = if deleted {
        let d01 = inv_sqrt2
            * (Complex64::from(a4) * (m1 * m2c * tc - lam)
                - Complex64::from(cross)
                    * ((m1sq + m2 * m2 + m1 * (m2c - m2)) * tc + Complex64::from(2.0) * lam)
                - Complex64::from(b4) * (lam + m1 * m2 * tc));
        let d10 = inv_sqrt2
            * (Complex64::from(a4) * (m1 * m2 * tc - lam)
                - Complex64::from(cross)
                    * ((m1sq + m2c * m2c + m1 * (m2 - m2c)) * tc + Complex64::from(2.0) * lam)
                - Complex64::from(b4) * (lam + m1 * m2c * tc));
        (d01, d10)
    } else {
        let d01 = inv_sqrt2
            * (Complex64::from(a4) * (m1 * m2c * tc + lam)
                + Complex64::from(cross)
                    * (Complex64::from(2.0) * lam
                        + (m1sq - m2 * m2 - m1 * (m2 + m2c)) * tc)
                + Complex64::from(b4) * (lam + m1 * m2 * tc));
        let d10 = inv_sqrt2
            * (Complex64::from(a4) * (m1 * m2 * tc + lam)
                + Complex64::from(cross)
                    * (Complex64::from(2.0) * lam
                        + (m1sq - m2c * m2c - m1 * (m2 + m2c)) * tc)
                + Complex64::from(b4) * (lam + m1 * m2c * tc));
        (d01, d10)
    };

    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = d00;
    m[(0, 1)] = d01;
    m[(1, 0)] = d10;
    m[(1, 1)] = d11;
    m
}

/// Reduced operator on the retained mode after the transformer. The
/// entries depend on the input only through α² and |β|² = 1 − α², so the
/// β phase is accepted for interface uniformity but cannot change the
/// result.
pub fn closed_rho1_prime(
    alpha2: f64,
    _beta_phase: f64,
    lambda: f64,
    std_state: &StandardState,
) -> Result<DensityOp> {
    check_unit("alpha2", alpha2)?;
    check_lambda(lambda)?;
    let m = primed_matrix(alpha2, lambda, std_state, false);
    DensityOp::from_matrix(m, vec![2], vec![MODE_RETAINED])
}

/// Reduced operator on the deleted mode after the transformer.
pub fn closed_rho2_prime(
    alpha2: f64,
    _beta_phase: f64,
    lambda: f64,
    std_state: &StandardState,
) -> Result<DensityOp> {
    check_unit("alpha2", alpha2)?;
    check_lambda(lambda)?;
    let m = primed_matrix(alpha2, lambda, std_state, true);
    DensityOp::from_matrix(m, vec![2], vec![MODE_DELETED])
}

/// Retained-mode fidelity of the modified machine in the λ → 1/2 limit:
/// F₃ = 3/4 − α²/2 + α(β + β*)/(2√2). Exact at λ = 1/2 for every machine.
pub fn closed_f3(alpha: f64, beta: Complex64) -> f64 {
    0.75 - alpha * alpha / 2.0 + alpha * (beta + beta.conj()).re / (2.0 * SQRT_2)
}

/// Deletion fidelity of the modified machine, assembled from the four
/// entries R₁ = ρ'₂(0,0), R₂ = ρ'₂(1,1), R₃ = ρ'₂(0,1), R₄ = ρ'₂(1,0)
/// weighted by the |Σ'⟩ amplitudes:
/// F₄ = (1/2)[R₁(m₁−m₂)(m₁−m₂*) + R₂(m₁+m₂)(m₁+m₂*)
///            + R₃(m₁−m₂)(m₁+m₂) + R₄(m₁−m₂*)(m₁+m₂*)].
pub fn closed_f4(
    alpha2: f64,
    beta_phase: f64,
    lambda: f64,
    std_state: &StandardState,
) -> Result<f64> {
    let rho = closed_rho2_prime(alpha2, beta_phase, lambda, std_state)?;
    let m1 = Complex64::from(std_state.m1());
    let m2 = std_state.m2();
    let m2c = m2.conj();
    let value = Complex64::from(0.5)
        * (rho.entry(0, 0) * (m1 - m2) * (m1 - m2c)
            + rho.entry(1, 1) * (m1 + m2) * (m1 + m2c)
            + rho.entry(0, 1) * (m1 - m2) * (m1 + m2)
            + rho.entry(1, 0) * (m1 - m2c) * (m1 + m2c));
    Ok(value.re)
}

/// Composite Simpson integral of `f` over α² ∈ [0, 1].
///
/// `nodes` must be odd and at least 3. With the default node count the
/// quadrature error for the √(α²(1−α²)) integrand is below 2e-7.
pub fn average_fidelity<F: Fn(f64) -> f64>(f: F, nodes: usize) -> Result<f64> {
    if nodes < 3 || nodes % 2 == 0 {
        return Err(Error::QuadratureNodes { nodes });
    }
    let h = 1.0 / (nodes - 1) as f64;
    let mut acc = f(0.0) + f(1.0);
    for k in 1..nodes - 1 {
        let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += weight * f(k as f64 * h);
    }
    Ok(acc * h / 3.0)
}

/// Machine classification per the fidelity definitions. `Fa` is the
/// retained-mode fidelity, `Fb` the deletion fidelity, `Fc` the machine
/// overlap; a machine is universal when Fb and Fc are input-independent
/// and ideal when all three are.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    StateDependent,
    Universal,
    Ideal,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::StateDependent => "state-dependent",
            Classification::Universal => "universal",
            Classification::Ideal => "ideal",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classification verdict with the observed fidelity spreads behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineClass {
    pub classification: Classification,
    /// Spread of the retained-mode fidelity across the probe grid.
    pub spread_retained: f64,
    /// Spread of the deletion fidelity.
    pub spread_deletion: f64,
    /// Spread of the machine overlap.
    pub spread_machine: f64,
    pub note: String,
}

/// Probe Fa, Fb, Fc on an 11-point α² grid times 4 β phases and classify
/// by which of them stay constant (spread below the constancy tolerance).
pub fn classify_machine(machine: &Machine, with_transformer: bool) -> Result<MachineClass> {
    let phases = [
        0.0,
        core::f64::consts::FRAC_PI_2,
        core::f64::consts::PI,
        1.5 * core::f64::consts::PI,
    ];
    let mut fa = SpreadTracker::new();
    let mut fb = SpreadTracker::new();
    let mut fc = SpreadTracker::new();
    for k in 0..=10 {
        let alpha2 = k as f64 / 10.0;
        for &phase in &phases {
            let input = QubitState::from_alpha2(alpha2, phase)?;
            let sample = machine.fidelity_sample(&input)?;
            if with_transformer {
                fa.push(sample.f3);
                fb.push(sample.f4);
                fc.push(sample.fc_prime);
            } else {
                fa.push(sample.f1);
                fb.push(sample.f2);
                fc.push(sample.fc);
            }
        }
    }
    let spread_retained = fa.spread();
    let spread_deletion = fb.spread();
    let spread_machine = fc.spread();
    let constant = |s: f64| s < tol::CONSTANCY_TOL;
    let classification = if constant(spread_retained)
        && constant(spread_deletion)
        && constant(spread_machine)
    {
        Classification::Ideal
    } else if constant(spread_deletion) && constant(spread_machine) {
        Classification::Universal
    } else {
        Classification::StateDependent
    };
    let mut note = format!(
        "spreads: retained {:.2e}, deletion {:.2e}, machine {:.2e}",
        spread_retained, spread_deletion, spread_machine
    );
    if classification != Classification::StateDependent && (fb.max - 0.75).abs() < 1e-3 {
        note.push_str("; deletion fidelity at the 3/4 ceiling");
    }
    Ok(MachineClass {
        classification,
        spread_retained,
        spread_deletion,
        spread_machine,
        note,
    })
}

struct SpreadTracker {
    min: f64,
    max: f64,
}

impl SpreadTracker {
    fn new() -> Self {
        SpreadTracker {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    fn push(&mut self, v: f64) {
        self.min = self.min.min(v);
        self.max = self.max.max(v);
    }

    fn spread(&self) -> f64 {
        if self.min.is_finite() {
            self.max - self.min
        } else {
            0.0
        }
    }
}

/// One fidelity carried as numeric (pipeline) and closed-form values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityValue {
    pub numeric: f64,
    pub closed: f64,
}

impl FidelityValue {
    pub fn diff(&self) -> f64 {
        (self.numeric - self.closed).abs()
    }
}

/// All fidelities of one parameter point, numeric and closed-form side by
/// side, plus the machine classification.
#[derive(Debug, Clone)]
pub struct FidelityReport {
    pub alpha2: f64,
    pub beta_phase: f64,
    pub lambda: f64,
    pub y: f64,
    pub m1: f64,
    pub m2: Complex64,
    /// Conventional retained-mode fidelity.
    pub f1: FidelityValue,
    /// Conventional deletion fidelity.
    pub f2: FidelityValue,
    /// Conventional machine overlap (closed value Y²).
    pub fc: FidelityValue,
    /// Modified retained-mode fidelity (closed value is the λ → 1/2 limit
    /// form, exact at λ = 1/2).
    pub f3: FidelityValue,
    /// Modified deletion fidelity.
    pub f4: FidelityValue,
    /// Modified machine overlap (closed value Y²).
    pub fc_prime: FidelityValue,
    pub classification: MachineClass,
}

impl FidelityReport {
    pub fn values(&self) -> [(&'static str, FidelityValue); 6] {
        [
            ("F1", self.f1),
            ("F2", self.f2),
            ("F3", self.f3),
            ("F4", self.f4),
            ("Fc", self.fc),
            ("Fc'", self.fc_prime),
        ]
    }
}

/// Evaluate one (machine, input) point: numeric fidelities from the
/// pipeline, closed forms alongside, classification for the machine type
/// selected by `with_transformer`.
pub fn evaluate(
    machine: &Machine,
    input: &QubitState,
    with_transformer: bool,
) -> Result<FidelityReport> {
    let params = machine.params();
    let std_state = machine.standard();
    let sample = machine.fidelity_sample(input)?;
    let alpha2 = input.alpha2();
    let beta_phase = input.beta_phase();
    let lambda = params.lambda();
    let y = params.y();

    let report = FidelityReport {
        alpha2,
        beta_phase,
        lambda,
        y,
        m1: params.m1(),
        m2: params.m2(),
        f1: FidelityValue {
            numeric: sample.f1,
            closed: closed_f1(alpha2, lambda)?,
        },
        f2: FidelityValue {
            numeric: sample.f2,
            closed: closed_f2(lambda, std_state)?,
        },
        fc: FidelityValue {
            numeric: sample.fc,
            closed: y * y,
        },
        f3: FidelityValue {
            numeric: sample.f3,
            closed: closed_f3(input.alpha(), input.beta()),
        },
        f4: FidelityValue {
            numeric: sample.f4,
            closed: closed_f4(alpha2, beta_phase, lambda, std_state)?,
        },
        fc_prime: FidelityValue {
            numeric: sample.fc_prime,
            closed: y * y,
        },
        classification: classify_machine(machine, with_transformer)?,
    };

    for (name, v) in report.values() {
        if !(-tol::FIDELITY_SLACK..=1.0 + tol::FIDELITY_SLACK).contains(&v.numeric) {
            return Err(Error::OutOfRange {
                name,
                value: v.numeric,
            });
        }
    }
    Ok(report)
}

/// Clamp a fidelity into [0, 1]; values are already within the slack.
pub fn clamp_fidelity(value: f64) -> f64 {
    value.clamp(0.0, 1.0)
}
