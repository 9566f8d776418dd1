//! Parameter sweeps with deterministic CSV/JSON emission.

use std::fmt;

use anyhow::{bail, Result};
use num_complex::Complex64;
use rayon::prelude::*;

use qdel_core::analysis::{clamp_fidelity, evaluate, FidelityReport};
use qdel_core::engine::Machine;
use qdel_core::machine::MachineParams;
use qdel_core::tensor::QubitState;

use crate::emit::{csv_field, fmt12};
use crate::report::{InputsJson, ReportJson, SweepBodyJson, SweepRowJson};

pub const CSV_HEADER: &str =
    "swept_param,swept_value,alpha2,beta_phase,lambda,y,m1,m2re,m2im,F1,F2,F3,F4,Fc,class,note";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptParam {
    Lambda,
    Alpha2,
    Y,
    BetaPhase,
}

impl SweptParam {
    pub fn parse(name: &str) -> Result<Self> {
        match name.replace('-', "_").to_ascii_lowercase().as_str() {
            "lambda" => Ok(SweptParam::Lambda),
            "alpha2" => Ok(SweptParam::Alpha2),
            "y" => Ok(SweptParam::Y),
            "beta_phase" => Ok(SweptParam::BetaPhase),
            other => bail!("unknown sweep parameter `{other}` (expected lambda, alpha2, y, beta_phase)"),
        }
    }
}

impl fmt::Display for SweptParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweptParam::Lambda => "lambda",
            SweptParam::Alpha2 => "alpha2",
            SweptParam::Y => "y",
            SweptParam::BetaPhase => "beta_phase",
        })
    }
}

/// One fully resolved parameter-and-input point.
#[derive(Debug, Clone, Copy)]
pub struct Point {
    pub lambda: f64,
    pub y: f64,
    pub m1: f64,
    pub m2: Complex64,
    pub alpha2: f64,
    pub beta_phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => bail!("unknown output format `{other}` (expected csv or json)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub param: SweptParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub fixed: Point,
    pub transform: bool,
    pub format: OutputFormat,
}

impl SweepSpec {
    /// Interval legality for the swept range and the fixed point.
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            bail!("sweep needs at least 2 steps, got {}", self.steps);
        }
        if !self.from.is_finite() || !self.to.is_finite() {
            bail!("sweep range must be finite");
        }
        let (lo, hi) = (self.from.min(self.to), self.from.max(self.to));
        match self.param {
            SweptParam::Lambda => {
                if lo < 0.0 || hi > 0.5 {
                    bail!("lambda sweep range [{lo}, {hi}] leaves [0, 0.5]");
                }
            }
            SweptParam::Alpha2 => {
                if lo < 0.0 || hi > 1.0 {
                    bail!("alpha2 sweep range [{lo}, {hi}] leaves [0, 1]");
                }
            }
            SweptParam::Y => {
                if lo < 0.0 {
                    bail!("y sweep range must be nonnegative, got {lo}");
                }
            }
            SweptParam::BetaPhase => {}
        }
        Ok(())
    }

    fn value_at(&self, step: usize) -> f64 {
        self.from + (self.to - self.from) * step as f64 / (self.steps - 1) as f64
    }

    fn point_at(&self, step: usize) -> Point {
        let v = self.value_at(step);
        let mut p = self.fixed;
        match self.param {
            SweptParam::Lambda => p.lambda = v,
            SweptParam::Alpha2 => p.alpha2 = v,
            SweptParam::Y => p.y = v,
            SweptParam::BetaPhase => p.beta_phase = v,
        }
        p
    }
}

pub enum RowOutcome {
    Report(Box<FidelityReport>),
    Infeasible(String),
}

pub struct Row {
    pub swept_value: f64,
    pub point: Point,
    pub outcome: RowOutcome,
}

/// Evaluate every row (in parallel, assembled in order).
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<Row>> {
    spec.validate()?;
    let rows: Vec<Row> = (0..spec.steps)
        .into_par_iter()
        .map(|step| {
            let point = spec.point_at(step);
            let outcome = evaluate_point(&point, spec.transform);
            Row {
                swept_value: spec.value_at(step),
                point,
                outcome,
            }
        })
        .collect();
    Ok(rows)
}

pub fn evaluate_point(point: &Point, transform: bool) -> RowOutcome {
    let result = MachineParams::new(point.lambda, point.y, point.m1, point.m2)
        .and_then(Machine::new)
        .and_then(|machine| {
            let input = QubitState::from_alpha2(point.alpha2, point.beta_phase)?;
            evaluate(&machine, &input, transform)
        });
    match result {
        Ok(report) => RowOutcome::Report(Box::new(report)),
        Err(err) => RowOutcome::Infeasible(err.to_string()),
    }
}

/// Render the sweep as CSV text with the fixed header.
pub fn to_csv(spec: &SweepSpec, rows: &[Row]) -> String {
    let mut out = String::with_capacity(rows.len() * 160);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let p = &row.point;
        let echo = [
            spec.param.to_string(),
            fmt12(row.swept_value),
            fmt12(p.alpha2),
            fmt12(p.beta_phase),
            fmt12(p.lambda),
            fmt12(p.y),
            fmt12(p.m1),
            fmt12(p.m2.re),
            fmt12(p.m2.im),
        ];
        for (i, field) in echo.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&csv_field(field));
        }
        match &row.outcome {
            RowOutcome::Report(report) => {
                for v in [
                    report.f1.numeric,
                    report.f2.numeric,
                    report.f3.numeric,
                    report.f4.numeric,
                    report.fc.numeric,
                ] {
                    out.push(',');
                    out.push_str(&fmt12(clamp_fidelity(v)));
                }
                out.push(',');
                out.push_str(report.classification.classification.as_str());
                out.push(',');
            }
            RowOutcome::Infeasible(reason) => {
                // Empty fidelity and class cells, reason in the note column.
                out.push_str(",,,,,,,");
                out.push_str(&csv_field(reason));
            }
        }
        out.push('\n');
    }
    out
}

/// Render the sweep as a JSON array of report (or error) objects.
pub fn to_json(spec: &SweepSpec, rows: &[Row], transform: bool) -> Result<Vec<u8>> {
    let body: Vec<SweepRowJson> = rows
        .iter()
        .map(|row| {
            let p = &row.point;
            let body = match &row.outcome {
                RowOutcome::Report(report) => {
                    SweepBodyJson::Report(ReportJson::from_report(report, transform))
                }
                RowOutcome::Infeasible(reason) => SweepBodyJson::Error {
                    inputs: InputsJson {
                        alpha2: p.alpha2,
                        beta_phase: p.beta_phase,
                        lambda: p.lambda,
                        y: p.y,
                        m1: p.m1,
                        m2re: p.m2.re,
                        m2im: p.m2.im,
                        transform,
                    },
                    error: reason.clone(),
                },
            };
            SweepRowJson {
                swept_param: spec.param.to_string(),
                swept_value: row.swept_value,
                body,
            }
        })
        .collect();
    crate::emit::to_json_bytes(&body)
}
