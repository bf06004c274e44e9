//! Verification reports shared by every randomized campaign.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rng::{trial_rng, TrialRng};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    Isoperimetric,
    BrunnMinkowski,
    AfCorollary,
    Alexandrov,
    MomentLemma,
    Polynomiality,
    VProperties,
    Closure,
}

impl Inequality {
    pub fn as_str(self) -> &'static str {
        match self {
            Inequality::Isoperimetric => "isoperimetric",
            Inequality::BrunnMinkowski => "brunn_minkowski",
            Inequality::AfCorollary => "af_corollary",
            Inequality::Alexandrov => "alexandrov",
            Inequality::MomentLemma => "moment_lemma",
            Inequality::Polynomiality => "polynomiality",
            Inequality::VProperties => "v_properties",
            Inequality::Closure => "closure",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub margin: f64,
    pub inputs_digest: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: u64,
    pub inputs_digest: String,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    #[serde(rename = "property")]
    pub inequality: Inequality,
    pub trials: usize,
    pub worst_margin: f64,
    pub failures: Vec<Failure>,
    pub seed: u64,
    pub tolerance: f64,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ball_facets: Option<usize>,
    /// Named diagnostics (worst value per sub-property, fit residuals, ...).
    #[serde(default)]
    pub metrics: BTreeMap<String, f64>,
    #[serde(default)]
    pub records: Vec<TrialRecord>,
}

impl VerifyReport {
    pub fn new(inequality: Inequality, seed: u64, tolerance: f64, ball_facets: Option<usize>, records: Vec<TrialRecord>) -> Self {
        let worst_margin = records.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
        // NaN margins are failures too.
        let failures = records
            .iter()
            .filter(|r| !(r.margin >= -tolerance))
            .map(|r| Failure { trial: r.trial, inputs_digest: r.inputs_digest.clone(), margin: r.margin })
            .collect();
        VerifyReport {
            inequality,
            trials: records.len(),
            worst_margin: if records.is_empty() { 0.0 } else { worst_margin },
            failures,
            seed,
            tolerance,
            version: VERSION.to_string(),
            ball_facets,
            metrics: BTreeMap::new(),
            records,
        }
    }

    pub fn with_metric(mut self, name: &str, value: f64) -> Self {
        self.metrics.insert(name.to_string(), value);
        self
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.worst_margin >= -self.tolerance
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable") + "\n"
    }

    /// One row per trial: `trial,margin,inputs_digest`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,margin,inputs_digest\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{:e},{}", r.trial, r.margin, r.inputs_digest);
        }
        out
    }
}

/// What a single trial hands back: its margin, an input digest and optional
/// named diagnostics that are folded into the report by `min`.
#[derive(Clone, Debug, Default)]
pub struct TrialOutcome {
    pub margin: f64,
    pub inputs_digest: String,
    pub metrics: Vec<(&'static str, f64)>,
}

impl TrialOutcome {
    pub fn new(margin: f64, inputs_digest: String) -> Self {
        TrialOutcome { margin, inputs_digest, metrics: Vec::new() }
    }

    pub fn metric(mut self, name: &'static str, value: f64) -> Self {
        self.metrics.push((name, value));
        self
    }
}

/// How per-trial metrics are folded.
#[derive(Clone, Copy, Debug)]
pub enum Fold {
    Min,
    Max,
}

/// Runs `trials` independent trials in parallel, each on its own
/// `(seed, trial)` stream, and assembles the report in trial order.
pub fn run_campaign<F>(
    inequality: Inequality,
    seed: u64,
    trials: usize,
    tolerance: f64,
    ball_facets: Option<usize>,
    folds: &[(&'static str, Fold)],
    trial: F,
) -> Result<VerifyReport>
where
    F: Fn(&mut TrialRng, u64) -> Result<TrialOutcome> + Sync,
{
    let outcomes: Vec<TrialOutcome> =
        (0..trials as u64).into_par_iter().map(|i| trial(&mut trial_rng(seed, i), i)).collect::<Result<_>>()?;
    let records = outcomes
        .iter()
        .enumerate()
        .map(|(i, o)| TrialRecord { trial: i as u64, margin: o.margin, inputs_digest: o.inputs_digest.clone() })
        .collect();
    let mut report = VerifyReport::new(inequality, seed, tolerance, ball_facets, records);
    for &(name, fold) in folds {
        let values = outcomes.iter().flat_map(|o| o.metrics.iter().filter(|m| m.0 == name).map(|m| m.1));
        let folded = match fold {
            Fold::Min => values.fold(f64::INFINITY, f64::min),
            Fold::Max => values.fold(f64::NEG_INFINITY, f64::max),
        };
        if folded.is_finite() {
            report.metrics.insert(name.to_string(), folded);
        }
    }
    Ok(report)
}
