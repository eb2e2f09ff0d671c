//! Step counters for the looping combinator: the renaming-chain overhead
//! is quadratic with variables as values, linear without, and linear in
//! the explicit positive calculus.

use std::str::FromStr;

use crate::syntax::{NameGen, Term};
use crate::translate::translate;
use crate::vsc::RuleLabel;

use super::calculus::Calculus;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OmegaVariant {
    VarsAsValues,
    NoVarValues,
    OXPos,
}

impl FromStr for OmegaVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vars-as-values" => Ok(OmegaVariant::VarsAsValues),
            "no-var-values" => Ok(OmegaVariant::NoVarValues),
            "oxpos" => Ok(OmegaVariant::OXPos),
            other => Err(format!(
                "unknown variant '{other}' (vars-as-values, no-var-values, oxpos)"
            )),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OmegaCounters {
    /// Multiplicative steps taken (= the requested n).
    pub m_steps: usize,
    /// Exponential steps before the n-th multiplicative step.
    pub e_steps: usize,
    pub total_steps: usize,
}

pub fn omega() -> Term {
    let half = Term::abs("x", Term::app(Term::var("x"), Term::var("x")));
    Term::app(half.clone(), half)
}

/// Run the leftmost strategy on the looping combinator (or its positive
/// representation) until the n-th multiplicative step, and count the
/// exponential steps before it.
pub fn bench_omega(n_m_steps: usize, variant: OmegaVariant) -> OmegaCounters {
    assert!(n_m_steps >= 1);
    let (start, calculus, m_label, e_labels) = match variant {
        OmegaVariant::VarsAsValues => (
            omega(),
            Calculus::vsc(),
            RuleLabel::M,
            vec![RuleLabel::EAbs, RuleLabel::EVar],
        ),
        OmegaVariant::NoVarValues => (
            omega(),
            Calculus::Vsc {
                vars_are_values: false,
            },
            RuleLabel::M,
            vec![RuleLabel::EAbs, RuleLabel::EVar],
        ),
        OmegaVariant::OXPos => (
            translate(&omega(), &mut NameGen::new()),
            Calculus::OXPos,
            RuleLabel::MPlus,
            vec![RuleLabel::EPlus],
        ),
    };
    // Safety bound: the quadratic variant needs n(n-1)/2 + n steps.
    let fuel = 3 * n_m_steps * (n_m_steps + 2);
    let mut cur = start;
    let mut m = 0;
    let mut e = 0;
    let mut total = 0;
    for _ in 0..fuel {
        let redexes = calculus
            .enumerate(&cur)
            .expect("the loop stays well formed");
        let r = redexes.first().expect("the loop never normalizes").clone();
        cur = calculus.apply(&cur, &r).expect("enumerated redex applies");
        total += 1;
        if r.label == m_label {
            m += 1;
            if m == n_m_steps {
                break;
            }
        } else if e_labels.contains(&r.label) {
            e += 1;
        }
    }
    assert_eq!(
        m, n_m_steps,
        "fuel was insufficient for {n_m_steps} m-steps"
    );
    OmegaCounters {
        m_steps: m,
        e_steps: e,
        total_steps: total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_chain_overhead() {
        for n in 1..=8 {
            let c = bench_omega(n, OmegaVariant::VarsAsValues);
            assert_eq!(c.e_steps, n * (n - 1) / 2, "n = {n}");
        }
    }

    #[test]
    fn linear_without_variable_values() {
        // 0, 1, 3, 5, 7, ... exponential steps: 2n - 3 for n >= 2
        for n in 1..=8 {
            let c = bench_omega(n, OmegaVariant::NoVarValues);
            let expected = if n == 1 { 0 } else { 2 * n - 3 };
            assert_eq!(c.e_steps, expected, "n = {n}");
            assert!(c.e_steps <= 2 * n);
        }
    }

    #[test]
    fn linear_in_the_explicit_positive_calculus() {
        for n in 1..=8 {
            let c = bench_omega(n, OmegaVariant::OXPos);
            assert_eq!(c.e_steps, n - 1, "n = {n}");
        }
    }
}
