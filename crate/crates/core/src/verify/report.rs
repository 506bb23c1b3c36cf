use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith::{BigComplex, BigReal, PrecisionContext};

/// Outcome of one numerical check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The tolerance is tighter than the evaluators can certify.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Factor by which the residual may exceed the combined error bounds before
/// a check is declared false outright.
pub const BOUND_SLACK: f64 = 10.0;

/// `Pass` needs `residual <= tolerance`, a tolerance no tighter than the
/// bounds, and a residual the bounds account for.
pub fn decide(residual: f64, error_bound: f64, tolerance: f64) -> Verdict {
    if !residual.is_finite() || residual > BOUND_SLACK * error_bound {
        return Verdict::Fail;
    }
    if tolerance < error_bound {
        return Verdict::Inconclusive;
    }
    if residual <= tolerance {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Infinite magnitudes travel as JSON `null`.
mod unbounded {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_some(x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Serialisable record of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_id: String,
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(with = "unbounded")]
    pub residual: f64,
    /// Sum of the error bounds of both sides.
    #[serde(with = "unbounded")]
    pub error_bound: f64,
    pub tolerance: f64,
    pub target_digits: u32,
    pub verdict: Verdict,
    pub pass: bool,
    pub wall_time_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn new(
        identity_id: &str,
        inputs: String,
        lhs: String,
        rhs: String,
        residual: f64,
        error_bound: f64,
        ctx: &PrecisionContext,
    ) -> Self {
        let tolerance = ctx.default_tolerance();
        let verdict = decide(residual, error_bound, tolerance);
        VerificationReport {
            identity_id: identity_id.to_string(),
            inputs,
            lhs,
            rhs,
            residual,
            error_bound,
            tolerance,
            target_digits: ctx.target_digits,
            verdict,
            pass: verdict == Verdict::Pass,
            wall_time_ms: 0.0,
            note: None,
        }
    }

    /// Compares two real values.
    pub fn compare(
        identity_id: &str,
        inputs: String,
        lhs: &BigReal,
        rhs: &BigReal,
        ctx: &PrecisionContext,
    ) -> Self {
        VerificationReport::new(
            identity_id,
            inputs,
            lhs.render(),
            rhs.render(),
            lhs.distance(rhs),
            lhs.error() + rhs.error(),
            ctx,
        )
    }

    /// Compares two complex values by the modulus of their difference.
    pub fn compare_complex(
        identity_id: &str,
        inputs: String,
        lhs: &BigComplex,
        rhs: &BigComplex,
        ctx: &PrecisionContext,
    ) -> Self {
        VerificationReport::new(
            identity_id,
            inputs,
            lhs.render(),
            rhs.render(),
            lhs.distance(rhs),
            lhs.error() + rhs.error(),
            ctx,
        )
    }

    /// A report for a computation that could not be carried out.
    pub fn failed(identity_id: &str, inputs: String, reason: String, ctx: &PrecisionContext) -> Self {
        let mut r = VerificationReport::new(
            identity_id,
            inputs,
            String::new(),
            String::new(),
            f64::INFINITY,
            f64::INFINITY,
            ctx,
        );
        r.verdict = Verdict::Fail;
        r.pass = false;
        r.note = Some(reason);
        r
    }

    /// Re-decides the verdict under a different tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.verdict = decide(self.residual, self.error_bound, tolerance);
        self.pass = self.verdict == Verdict::Pass;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }

    /// Equality ignoring the wall-clock field.
    pub fn same_outcome(&self, other: &VerificationReport) -> bool {
        let mut a = self.clone();
        a.wall_time_ms = other.wall_time_ms;
        &a == other
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<18} {:<28} {:<12} residual {:.2e} (bound {:.2e}, tol {:.1e})",
            self.identity_id,
            self.inputs,
            self.verdict.to_string(),
            self.residual,
            self.error_bound,
            self.tolerance
        )?;
        if let Some(n) = &self.note {
            write!(f, "  [{n}]")?;
        }
        Ok(())
    }
}
