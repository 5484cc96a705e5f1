use std::fmt;

use crate::linalg::format_vector;
use crate::linarith::Rational;

/// Named rational vectors exhibiting why a property fails.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Evidence(pub Vec<(String, Vec<Rational>)>);

impl Evidence {
    pub fn new() -> Self {
        Evidence(Vec::new())
    }

    pub fn with(mut self, name: &str, v: Vec<Rational>) -> Self {
        self.0.push((name.to_string(), v));
        self
    }

    pub fn get(&self, name: &str) -> Option<&[Rational]> {
        self.0
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn entries(&self) -> &[(String, Vec<Rational>)] {
        &self.0
    }
}

impl fmt::Display for Evidence {
    /// `x = (1, 0), y = (0, 1)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(n, v)| format!("{n} = {}", format_vector(v)))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

/// A decided property, with evidence when it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Evidence>,
}

impl Verdict {
    pub fn yes() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn no(witness: Evidence) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
        }
    }

    /// The named vector of the witness.
    pub fn get(&self, name: &str) -> Option<&[Rational]> {
        self.witness.as_ref().and_then(|w| w.get(name))
    }
}

/// Outcome of an order-unit check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderUnit {
    Unit,
    /// Some `x` is not dominated by any multiple of `e`.
    NotUnit(Evidence),
    /// `e ∉ V₊`: the reduction used by the check does not apply, and the
    /// literal definition is left undecided.
    NotPositive,
}
