use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// Outcome of one checked claim. Rationals are carried as `"n"` / `"n/d"`
/// strings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub claim: String,
    pub lhs: String,
    pub rhs: String,
    pub verdict: Verdict,
    pub witness: Value,
}

impl Report {
    pub fn new(
        claim: impl Into<String>,
        lhs: impl ToString,
        rhs: impl ToString,
        ok: bool,
        witness: Value,
    ) -> Self {
        Report {
            claim: claim.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            verdict: Verdict::from_bool(ok),
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

pub fn all_pass(reports: &[Report]) -> bool {
    reports.iter().all(Report::passed)
}
