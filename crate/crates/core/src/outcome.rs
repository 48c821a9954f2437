use serde::{Deserialize, Serialize};

/// Verdict of a hypothesis-gated check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// The hypothesis did not hold, so nothing was asserted.
    Vacuous,
    Skipped,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    /// True unless the check actually failed.
    pub fn holds(self) -> bool {
        self != Outcome::Fail
    }

    /// Combines sub-checks: any failure fails, any pass passes, else vacuous.
    pub fn all(parts: impl IntoIterator<Item = Outcome>) -> Outcome {
        let mut acc = Outcome::Vacuous;
        for o in parts {
            match o {
                Outcome::Fail => return Outcome::Fail,
                Outcome::Pass => acc = Outcome::Pass,
                Outcome::Skipped if acc == Outcome::Vacuous => acc = Outcome::Skipped,
                _ => {}
            }
        }
        acc
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Vacuous => "vacuous",
            Outcome::Skipped => "skipped",
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
