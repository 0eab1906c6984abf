use serde::Serialize;
use serde_json::{json, Value};

/// Outcome of a decision procedure.
///
/// `Yes` carries a certificate, `No` an obstruction. `Unknown` means a search
/// bound was exhausted or two routes disagreed; it never stands in for a `No`.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<C, O = String> {
    Yes(C),
    No(O),
    Unknown(String),
}

impl<C, O> Verdict<C, O> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Yes(_) => VerdictKind::Yes,
            Verdict::No(_) => VerdictKind::No,
            Verdict::Unknown(_) => VerdictKind::Unknown,
        }
    }

    pub fn yes(self) -> Option<C> {
        match self {
            Verdict::Yes(c) => Some(c),
            _ => None,
        }
    }

    pub fn no(self) -> Option<O> {
        match self {
            Verdict::No(o) => Some(o),
            _ => None,
        }
    }

    pub fn map_yes<D>(self, f: impl FnOnce(C) -> D) -> Verdict<D, O> {
        match self {
            Verdict::Yes(c) => Verdict::Yes(f(c)),
            Verdict::No(o) => Verdict::No(o),
            Verdict::Unknown(s) => Verdict::Unknown(s),
        }
    }
}

impl<C: Serialize, O: Serialize> Verdict<C, O> {
    /// `{"verdict": "yes"|"no"|"unknown", ...}` with the payload under
    /// `certificate`, `obstruction` or `reason` respectively.
    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Yes(c) => json!({ "verdict": "yes", "certificate": c }),
            Verdict::No(o) => json!({ "verdict": "no", "obstruction": o }),
            Verdict::Unknown(r) => json!({ "verdict": "unknown", "reason": r }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Yes,
    No,
    Unknown,
}

impl VerdictKind {
    /// Process exit code: 0 yes, 1 no, 2 unknown.
    pub fn exit_code(self) -> i32 {
        match self {
            VerdictKind::Yes => 0,
            VerdictKind::No => 1,
            VerdictKind::Unknown => 2,
        }
    }
}
