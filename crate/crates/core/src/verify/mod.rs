//! Batch checks of the inequalities and identities over seeded corpora of
//! bodies and functions, with machine-readable reports.

mod continuity;
mod suites;

pub use continuity::{continuity_probe, ContinuityRow};

use crate::config::QuadratureConfig;
use crate::error::{Error, Result};
use crate::funclass::FunctionSpec;
use crate::geometry::BodySpec;
use serde::{Deserialize, Serialize};

/// Suite names accepted by [`run_suite`], besides `all`.
pub const SUITES: [&str; 10] = [
    "isoperimetric",
    "duality",
    "scaling",
    "ball_monotonicity",
    "bs_type",
    "inverse_santalo",
    "lp_consistency",
    "lp_homogeneity",
    "linfty",
    "continuity",
];

/// A record passes when `margin ≥ −(abs + rel·max(|lhs|, |rhs|))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slack {
    pub abs: f64,
    pub rel: f64,
}

impl Slack {
    /// Quadrature against quadrature or against a closed form.
    pub const DEFAULT: Slack = Slack { abs: 1e-9, rel: 1e-6 };
    /// Closed form against closed form.
    pub const CLOSED_FORM: Slack = Slack { abs: 1e-9, rel: 1e-8 };
    /// The tolerance is already part of the check.
    pub const NONE: Slack = Slack { abs: 0.0, rel: 0.0 };

    fn allowance(self, lhs: f64, rhs: f64) -> f64 {
        let scale = [lhs, rhs]
            .into_iter()
            .filter(|x| x.is_finite())
            .map(f64::abs)
            .fold(0.0, f64::max);
        self.abs + self.rel * scale
    }
}

/// How `lhs` is compared with `rhs`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Relation {
    Le,
    Ge,
    /// `|lhs − rhs| ≤ tol·|rhs|`.
    Near(f64),
    /// Bitwise equal values.
    Identical,
}

impl Relation {
    fn margin(self, lhs: f64, rhs: f64) -> f64 {
        if lhs == rhs {
            return match self {
                Relation::Near(tol) if rhs.is_finite() => tol * rhs.abs(),
                _ => 0.0,
            };
        }
        match self {
            Relation::Le => rhs - lhs,
            Relation::Ge => lhs - rhs,
            Relation::Near(tol) => tol * rhs.abs() - (lhs - rhs).abs(),
            Relation::Identical => -(lhs - rhs).abs(),
        }
    }
}

/// One checked instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check_id: String,
    pub trial: usize,
    pub body: BodySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSpec>,
    #[serde(with = "ext_f64")]
    pub lhs: f64,
    #[serde(with = "ext_f64")]
    pub rhs: f64,
    #[serde(with = "ext_f64")]
    pub margin: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Record {
    #[allow(clippy::too_many_arguments)]
    pub fn check(
        check_id: &str,
        trial: usize,
        body: &BodySpec,
        function: Option<&FunctionSpec>,
        lhs: f64,
        rhs: f64,
        relation: Relation,
        slack: Slack,
    ) -> Self {
        let margin = relation.margin(lhs, rhs);
        Record {
            check_id: check_id.to_string(),
            trial,
            body: body.clone(),
            function: function.cloned(),
            lhs,
            rhs,
            margin,
            pass: margin >= -slack.allowance(lhs, rhs),
            note: None,
        }
    }

    /// A record for an instance that could not be evaluated.
    pub fn failed(check_id: &str, trial: usize, body: &BodySpec, function: Option<&FunctionSpec>, err: &Error) -> Self {
        Record {
            check_id: check_id.to_string(),
            trial,
            body: body.clone(),
            function: function.cloned(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            pass: false,
            note: Some(err.to_string()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passes: usize,
    pub failures: usize,
    #[serde(with = "ext_f64")]
    pub min_margin: f64,
}

impl Summary {
    fn of(records: &[Record]) -> Self {
        let passes = records.iter().filter(|r| r.pass).count();
        Summary {
            passes,
            failures: records.len() - passes,
            min_margin: records.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub grid: usize,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl VerificationReport {
    fn new(suite: &str, seed: u64, trials: usize, grid: usize, mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| a.check_id.cmp(&b.check_id).then(a.trial.cmp(&b.trial)));
        VerificationReport {
            suite: suite.to_string(),
            seed,
            trials,
            grid,
            summary: Summary::of(&records),
            records,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One row per record; body and function specs are embedded as JSON.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::InternalConsistency(format!("csv output: {e}"));
        w.write_record(["check_id", "trial", "body", "function", "lhs", "rhs", "margin", "pass", "note"])
            .map_err(csv_err)?;
        for r in &self.records {
            let function = r
                .function
                .as_ref()
                .map(|f| serde_json::to_string(f).expect("function specs serialize"))
                .unwrap_or_default();
            w.write_record([
                r.check_id.clone(),
                r.trial.to_string(),
                r.body.to_json(),
                function,
                ext_f64::format(r.lhs),
                ext_f64::format(r.rhs),
                ext_f64::format(r.margin),
                r.pass.to_string(),
                r.note.clone().unwrap_or_default(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InternalConsistency(format!("csv output: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Runs one suite, or every suite for `all`. Random bodies are drawn from
/// `seed`; `trials` is the number of random bodies.
pub fn run_suite(suite: &str, seed: u64, trials: usize, cfg: &QuadratureConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(Error::UnknownSuite(suite.to_string()));
    };
    let ctx = suites::Context::new(seed, trials, cfg)?;
    let mut records = Vec::new();
    for name in names {
        records.extend(ctx.run(name));
    }
    Ok(VerificationReport::new(suite, seed, trials, cfg.grid, records))
}

/// `f64` as a JSON number, or `"inf"`, `"-inf"`, `"nan"`.
mod ext_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn format(x: f64) -> String {
        if x.is_nan() {
            "nan".into()
        } else if x.is_infinite() {
            if x > 0.0 { "inf" } else { "-inf" }.into()
        } else {
            x.to_string()
        }
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&format(*x))
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}
