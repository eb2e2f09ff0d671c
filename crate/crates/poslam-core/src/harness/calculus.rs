//! Uniform dispatch over the four reduction systems.

use std::fmt;
use std::str::FromStr;

use crate::positive::{apply_opos, apply_oxpos, enumerate_opos, enumerate_oxpos};
use crate::syntax::{is_explicit_positive, is_positive, Term};
use crate::vsc::{apply_vsc, enumerate_core, enumerate_vsc, Redex, StepError, VscOpts};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Calculus {
    Vsc {
        vars_are_values: bool,
    },
    /// Core reduction of the VSC: multiplicative, useful exponential and
    /// variable exponential steps.
    VscCore,
    OPos,
    OXPos,
}

impl Calculus {
    pub fn vsc() -> Calculus {
        Calculus::Vsc {
            vars_are_values: true,
        }
    }

    pub fn enumerate(&self, t: &Term) -> Result<Vec<Redex>, StepError> {
        match self {
            Calculus::Vsc { vars_are_values } => Ok(enumerate_vsc(
                t,
                VscOpts {
                    vars_are_values: *vars_are_values,
                },
            )),
            Calculus::VscCore => Ok(enumerate_core(t)),
            Calculus::OPos => enumerate_opos(t),
            Calculus::OXPos => enumerate_oxpos(t),
        }
    }

    pub fn apply(&self, t: &Term, r: &Redex) -> Result<Term, StepError> {
        match self {
            Calculus::Vsc { .. } | Calculus::VscCore => apply_vsc(t, r),
            Calculus::OPos => apply_opos(t, r),
            Calculus::OXPos => apply_oxpos(t, r),
        }
    }

    /// Grammar admitting the calculus; a step out of it is an engine bug.
    pub fn admits(&self, t: &Term) -> bool {
        match self {
            Calculus::Vsc { .. } | Calculus::VscCore => true,
            Calculus::OPos => is_positive(t),
            Calculus::OXPos => is_explicit_positive(t),
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Calculus::Vsc {
                vars_are_values: true,
            } => f.write_str("vsc"),
            Calculus::Vsc {
                vars_are_values: false,
            } => f.write_str("vsc-no-var-values"),
            Calculus::VscCore => f.write_str("vsc-core"),
            Calculus::OPos => f.write_str("opos"),
            Calculus::OXPos => f.write_str("oxpos"),
        }
    }
}

impl FromStr for Calculus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vsc" => Ok(Calculus::vsc()),
            "vsc-core" => Ok(Calculus::VscCore),
            "opos" => Ok(Calculus::OPos),
            "oxpos" => Ok(Calculus::OXPos),
            other => Err(format!(
                "unknown calculus '{other}' (vsc, vsc-core, opos, oxpos)"
            )),
        }
    }
}
