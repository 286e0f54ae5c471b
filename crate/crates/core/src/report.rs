//! Structured results of identity checks.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::ring::LaurentPoly;
use crate::root_data::AlgebraSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Warn => "warn",
            Status::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Residual {
    /// Exact residual polynomial in text form; `"0"` on success.
    Exact { text: String },
    /// Largest relative error seen, against the tolerance in force.
    Numeric { max_rel_error: f64, tolerance: f64 },
    /// Free-form note (used for structural checks).
    Note { text: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckItem {
    pub label: String,
    pub status: Status,
    pub residual: Residual,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub algebra: Option<String>,
    pub n: Option<u32>,
    pub theta_zero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, String>,
}

impl ReportParams {
    pub fn for_spec(spec: &AlgebraSpec) -> Self {
        ReportParams {
            algebra: Some(spec.kind().name().to_string()),
            n: Some(spec.n()),
            theta_zero: spec.theta_zero(),
            ..Default::default()
        }
    }

    pub fn cutoff(mut self, k: usize) -> Self {
        self.cutoff = Some(k);
        self
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub params: ReportParams,
    pub status: Status,
    pub items: Vec<CheckItem>,
    pub wall_time_ms: f64,
    #[serde(skip)]
    started: Option<Instant>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, params: ReportParams) -> Self {
        CheckReport {
            check: check.into(),
            params,
            status: Status::Pass,
            items: Vec::new(),
            wall_time_ms: 0.0,
            started: Some(Instant::now()),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, status: Status, residual: Residual) {
        self.status = self.status.max(status);
        self.items.push(CheckItem {
            label: label.into(),
            status,
            residual,
        });
    }

    /// Records an exact identity: passes iff `residual` is the zero polynomial.
    pub fn exact(&mut self, label: impl Into<String>, residual: &LaurentPoly) {
        let status = if residual.is_zero() { Status::Pass } else { Status::Fail };
        self.push(
            label,
            status,
            Residual::Exact {
                text: residual.to_string(),
            },
        );
    }

    /// Records a numeric identity with its relative error.
    pub fn numeric(&mut self, label: impl Into<String>, rel_error: f64, tolerance: f64) {
        let status = if rel_error <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        self.push(
            label,
            status,
            Residual::Numeric {
                max_rel_error: rel_error,
                tolerance,
            },
        );
    }

    pub fn note(&mut self, label: impl Into<String>, status: Status, text: impl Into<String>) {
        self.push(label, status, Residual::Note { text: text.into() });
    }

    /// Folds another report's items in, prefixing labels.
    pub fn absorb(&mut self, other: CheckReport) {
        for item in other.items {
            self.push(format!("{}/{}", other.check, item.label), item.status, item.residual);
        }
    }

    pub fn finish(mut self) -> Self {
        if let Some(t) = self.started.take() {
            self.wall_time_ms = t.elapsed().as_secs_f64() * 1e3;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn first_failure(&self) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.status == Status::Fail)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.status, self.check)?;
        if let (Some(alg), Some(n)) = (&self.params.algebra, self.params.n) {
            write!(f, " ({alg}, n={n}")?;
            if self.params.theta_zero {
                f.write_str(", theta-zero")?;
            }
            if let Some(k) = self.params.cutoff {
                write!(f, ", cutoff={k}")?;
            }
            if let Some(seed) = self.params.seed {
                write!(f, ", seed={seed}")?;
            }
            if let Some(p) = &self.params.precision {
                write!(f, ", precision={p}")?;
            }
            f.write_str(")")?;
        }
        writeln!(f)?;
        for item in &self.items {
            write!(f, "  {:<4} {}", item.status, item.label)?;
            match &item.residual {
                Residual::Exact { text } if item.status != Status::Pass => write!(f, " residual: {text}")?,
                Residual::Exact { .. } => {}
                Residual::Numeric {
                    max_rel_error,
                    tolerance,
                } => write!(f, " rel.err {max_rel_error:.3e} (tol {tolerance:.0e})")?,
                Residual::Note { text } => write!(f, " {text}")?,
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
