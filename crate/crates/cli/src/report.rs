//! JSON schema for fidelity reports.

use serde::Serialize;

use qdel_core::analysis::FidelityReport;

#[derive(Serialize)]
pub struct InputsJson {
    pub alpha2: f64,
    pub beta_phase: f64,
    pub lambda: f64,
    pub y: f64,
    pub m1: f64,
    pub m2re: f64,
    pub m2im: f64,
    pub transform: bool,
}

#[derive(Serialize)]
pub struct FidelityJson {
    pub numeric: f64,
    pub closed: f64,
    pub diff: f64,
}

#[derive(Serialize)]
pub struct ConventionalJson {
    #[serde(rename = "F1")]
    pub f1: FidelityJson,
    #[serde(rename = "F2")]
    pub f2: FidelityJson,
    #[serde(rename = "Fc")]
    pub fc: FidelityJson,
}

#[derive(Serialize)]
pub struct ModifiedJson {
    #[serde(rename = "F3")]
    pub f3: FidelityJson,
    #[serde(rename = "F4")]
    pub f4: FidelityJson,
    #[serde(rename = "Fc")]
    pub fc: FidelityJson,
}

#[derive(Serialize)]
pub struct ReportJson {
    pub inputs: InputsJson,
    pub conventional: ConventionalJson,
    pub modified: ModifiedJson,
    pub classification: String,
}

fn fidelity_json(v: qdel_core::analysis::FidelityValue) -> FidelityJson {
    FidelityJson {
        numeric: v.numeric,
        closed: v.closed,
        diff: v.diff(),
    }
}

impl ReportJson {
    pub fn from_report(report: &FidelityReport, transform: bool) -> Self {
        ReportJson {
            inputs: InputsJson {
                alpha2: report.alpha2,
                beta_phase: report.beta_phase,
                lambda: report.lambda,
                y: report.y,
                m1: report.m1,
                m2re: report.m2.re,
                m2im: report.m2.im,
                transform,
            },
            conventional: ConventionalJson {
                f1: fidelity_json(report.f1),
                f2: fidelity_json(report.f2),
                fc: fidelity_json(report.fc),
            },
            modified: ModifiedJson {
                f3: fidelity_json(report.f3),
                f4: fidelity_json(report.f4),
                fc: fidelity_json(report.fc_prime),
            },
            classification: report.classification.classification.as_str().to_string(),
        }
    }
}

/// One sweep row: either a full report or an error marker for an
/// infeasible point.
#[derive(Serialize)]
pub struct SweepRowJson {
    pub swept_param: String,
    pub swept_value: f64,
    #[serde(flatten)]
    pub body: SweepBodyJson,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum SweepBodyJson {
    Report(ReportJson),
    Error { inputs: InputsJson, error: String },
}
