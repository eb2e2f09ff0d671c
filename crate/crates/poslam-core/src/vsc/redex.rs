//! Redexes: a rule label, the position of the rule's root pattern, and,
//! for exponential rules, the replaced variable occurrence.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Path, Step};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum RuleLabel {
    /// Multiplicative: L<\x.t> u -> L<t[x<-u]>.
    M,
    /// Exponential replacing an occurrence by a shared abstraction.
    EAbs,
    /// Exponential replacing an occurrence by a shared variable.
    EVar,
    /// Garbage collection of an unused abstraction ES.
    GcAbs,
    /// Garbage collection of an unused variable ES.
    GcVar,
    /// Useful exponential, root rule with the argument inside the pattern.
    EU1,
    /// Useful exponential, root rule with the argument provided by the context.
    EU2,
    /// Positive-calculus macro step (exponential + multiplicative + renaming).
    EmePlus,
    /// Explicit-positive multiplicative.
    MPlus,
    /// Explicit-positive exponential.
    EPlus,
    /// Explicit-positive garbage collection.
    GcPlus,
}

impl RuleLabel {
    pub fn is_gc(self) -> bool {
        matches!(
            self,
            RuleLabel::GcAbs | RuleLabel::GcVar | RuleLabel::GcPlus
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RuleLabel::M => "m",
            RuleLabel::EAbs => "e-abs",
            RuleLabel::EVar => "e-var",
            RuleLabel::GcAbs => "gc-abs",
            RuleLabel::GcVar => "gc-var",
            RuleLabel::EU1 => "e-u1",
            RuleLabel::EU2 => "e-u2",
            RuleLabel::EmePlus => "eme+",
            RuleLabel::MPlus => "m+",
            RuleLabel::EPlus => "e+",
            RuleLabel::GcPlus => "gc+",
        }
    }
}

impl fmt::Display for RuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One applicable rule instance under contextual closure.
///
/// `anchor` is the position of the rule's root pattern. `occurrence` is,
/// for the exponential family (`e-abs`, `e-var`, `e-u1`, `e-u2`), the
/// replaced variable occurrence relative to the ES body; for `e+` and
/// `eme+` it is the target frame relative to the anchor.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Redex {
    pub label: RuleLabel,
    pub anchor: Path,
    pub occurrence: Option<Path>,
}

impl Redex {
    pub fn at(label: RuleLabel, anchor: Path) -> Redex {
        Redex {
            label,
            anchor,
            occurrence: None,
        }
    }

    pub fn with_occurrence(label: RuleLabel, anchor: Path, occurrence: Path) -> Redex {
        Redex {
            label,
            anchor,
            occurrence: Some(occurrence),
        }
    }

    /// The focus position: the variable occurrence for exponential steps,
    /// the root pattern otherwise. Redex enumeration orders non-gc
    /// redexes by focus (pre-order, so textually left-to-right), with gc
    /// steps after all others.
    pub fn focus(&self) -> Path {
        match (&self.occurrence, self.label) {
            (Some(occ), RuleLabel::EPlus | RuleLabel::EmePlus) => self.anchor.join(occ),
            (Some(occ), _) => self.anchor.child(Step::EsBody).join(occ),
            (None, _) => self.anchor.clone(),
        }
    }

    pub fn order_key(&self) -> (bool, Path, RuleLabel) {
        (self.label.is_gc(), self.focus(), self.label)
    }
}

impl fmt::Display for Redex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.label, self.anchor)?;
        if let Some(occ) = &self.occurrence {
            write!(f, " occ {occ}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StepError {
    #[error("stale redex: {0}")]
    Stale(String),
    #[error("term is outside the {0} grammar")]
    WrongGrammar(&'static str),
}

pub(crate) fn stale(msg: impl Into<String>) -> StepError {
    StepError::Stale(msg.into())
}
