//! Useful and non-useful contexts and exponential steps.
//!
//! A replacement is useful when it creates a multiplicative redex:
//! the hole sits in function position of an application, possibly under
//! ES frames. Two independent classifiers are provided: one matches the
//! context grammar on the hole path, the other recurses structurally over
//! the term. They must agree everywhere, which the harness checks.
//!
//! Indirect replacements (over a renaming chain) are non-useful here, and
//! variable exponential steps are deliberately left unclassified.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{spine_core, Path, Step, Term};

use super::engine::open_free_occurrences;
use super::redex::{stale, Redex, RuleLabel, StepError};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ContextClass {
    Useful,
    NonUseful,
}

/// Classification of an open-context position, with the additional flag
/// telling whether the context is a substitution context L.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ContextInfo {
    pub class: ContextClass,
    pub sub: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContextError {
    #[error("hole position is under an abstraction")]
    UnderAbstraction,
    #[error("hole path does not address a subterm")]
    InvalidPath,
}

/// Structural classifier: recursion on the context from the outside.
///
/// usef(O t) iff usef(O) or sub(O); usef(t O) iff usef(O);
/// usef(O[x<-t]) iff usef(O); usef(t[x<-O]) iff usef(O).
pub fn context_class(t: &Term, hole: &Path) -> Result<ContextInfo, ContextError> {
    fn rec(t: &Term, steps: &[Step]) -> Result<(bool, bool), ContextError> {
        let Some((first, rest)) = steps.split_first() else {
            return Ok((false, true)); // the empty context is L
        };
        match (t, first) {
            (Term::App(f, _), Step::AppFun) => {
                let (usef, sub) = rec(f, rest)?;
                Ok((usef || sub, false))
            }
            (Term::App(_, a), Step::AppArg) => {
                let (usef, _) = rec(a, rest)?;
                Ok((usef, false))
            }
            (Term::Es(b, _, _), Step::EsBody) => rec(b, rest),
            (Term::Es(_, _, c), Step::EsContent) => {
                let (usef, _) = rec(c, rest)?;
                Ok((usef, false))
            }
            (Term::Abs(_, _), Step::AbsBody) => Err(ContextError::UnderAbstraction),
            _ => Err(ContextError::InvalidPath),
        }
    }
    let (usef, sub) = rec(t, &hole.0)?;
    Ok(ContextInfo {
        class: if usef {
            ContextClass::Useful
        } else {
            ContextClass::NonUseful
        },
        sub,
    })
}

/// Grammar classifier: matches the hole path against
/// U ::= O<L t> and N ::= L | O<t L> | O<t[x<-L]> directly.
/// Independent of [`context_class`]; the harness checks agreement.
pub fn context_class_grammar(t: &Term, hole: &Path) -> Result<ContextInfo, ContextError> {
    // The path must address a subterm without crossing an abstraction.
    let mut cur = t;
    for step in &hole.0 {
        cur = match (cur, step) {
            (Term::Abs(_, _), Step::AbsBody) => return Err(ContextError::UnderAbstraction),
            (Term::App(f, _), Step::AppFun) => f,
            (Term::App(_, a), Step::AppArg) => a,
            (Term::Es(b, _, _), Step::EsBody) => b,
            (Term::Es(_, _, c), Step::EsContent) => c,
            _ => return Err(ContextError::InvalidPath),
        };
    }
    // Strip the trailing substitution-context frames on the hole side;
    // the step just above them decides the class.
    let trimmed: &[Step] = {
        let mut s = &hole.0[..];
        while let Some((Step::EsBody, rest)) = s.split_last() {
            s = rest;
        }
        s
    };
    Ok(match trimmed.last() {
        None => ContextInfo {
            class: ContextClass::NonUseful,
            sub: true,
        },
        Some(Step::AppFun) => ContextInfo {
            class: ContextClass::Useful,
            sub: false,
        },
        Some(Step::AppArg) | Some(Step::EsContent) => ContextInfo {
            class: ContextClass::NonUseful,
            sub: false,
        },
        Some(Step::AbsBody) | Some(Step::EsBody) => unreachable!("validated above"),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum UsefulnessVerdict {
    Useful,
    NonUseful,
    /// Variable exponential steps are not part of the useful/non-useful
    /// partition; every non-exponential label is unclassified too.
    Unclassified,
}

/// Classify an `e-abs` redex by the composite context around the acting
/// ES: the outer context composed with the context isolating the
/// occurrence, the acting frame itself dropped.
pub fn classify_usefulness(t: &Term, r: &Redex) -> UsefulnessVerdict {
    if r.label != RuleLabel::EAbs {
        return UsefulnessVerdict::Unclassified;
    }
    let (Some(occ), Some(Term::Es(body, _, _))) = (&r.occurrence, t.get(&r.anchor)) else {
        return UsefulnessVerdict::Unclassified;
    };
    let composite = t
        .with_replaced(&r.anchor, (**body).clone())
        .expect("anchor addresses a subterm");
    let hole = r.anchor.join(occ);
    match context_class(&composite, &hole) {
        Ok(info) => match info.class {
            ContextClass::Useful => UsefulnessVerdict::Useful,
            ContextClass::NonUseful => UsefulnessVerdict::NonUseful,
        },
        Err(_) => UsefulnessVerdict::Unclassified,
    }
}

/// The useful exponential steps via the two root rules closed by any open
/// context:
///
/// ```text
/// e-u1:  U<<x>>[x <- L<\y.t>]            (argument inside the pattern)
/// e-u2:  L1< L2<<x>>[x <- L3<\y.t>] > u  (argument provided by the context)
/// ```
///
/// Anchors point at the acting ES in both cases, so application is the
/// plain `e-abs` contraction.
pub fn enumerate_useful_alt(t: &Term) -> Vec<Redex> {
    let mut out = Vec::new();
    walk(t, Path::root(), &mut out);
    out.sort_by_key(|a| a.order_key());
    out
}

fn walk(t: &Term, pos: Path, out: &mut Vec<Redex>) {
    match t {
        Term::Var(_) | Term::Abs(_, _) => {}
        Term::App(f, a) => {
            // e-u2: the function part is L1< L2<<x>>[x<-L3<\y.t>] >, i.e.
            // its spine core is a variable whose binding spine frame
            // shares an abstraction.
            if let Some((es_path, occ)) = eu2_acting_frame(f) {
                out.push(Redex::with_occurrence(
                    RuleLabel::EU2,
                    pos.child(Step::AppFun).join(&es_path),
                    occ,
                ));
            }
            walk(f, pos.child(Step::AppFun), out);
            walk(a, pos.child(Step::AppArg), out);
        }
        Term::Es(body, x, content) => {
            if matches!(spine_core(content), Term::Abs(_, _)) {
                for occ in open_free_occurrences(body, x) {
                    let local = context_class(body, &occ).expect("occurrence is open");
                    if local.class == ContextClass::Useful {
                        out.push(Redex::with_occurrence(RuleLabel::EU1, pos.clone(), occ));
                    }
                }
            }
            walk(body, pos.child(Step::EsBody), out);
            walk(content, pos.child(Step::EsContent), out);
        }
    }
}

/// For `f = L1< L2<<x>>[x<-L3<\y.t>] >`: the acting frame position within
/// `f` and the head occurrence within its body.
fn eu2_acting_frame(f: &Term) -> Option<(Path, Path)> {
    // Walk the spine down to the core; remember the frames passed.
    let mut frames: Vec<&Term> = Vec::new(); // ES nodes, outermost first
    let mut cur = f;
    while let Term::Es(b, _, _) = cur {
        frames.push(cur);
        cur = b;
    }
    let Term::Var(head) = cur else { return None };
    // The binding frame is the innermost spine frame with that binder.
    let depth = frames.iter().rposition(|es| match es {
        Term::Es(_, y, _) => y == head,
        _ => unreachable!(),
    })?;
    let Term::Es(_, _, content) = frames[depth] else {
        unreachable!()
    };
    if !matches!(spine_core(content), Term::Abs(_, _)) {
        return None;
    }
    let es_path = Path(vec![Step::EsBody; depth]);
    let occ = Path(vec![Step::EsBody; frames.len() - depth - 1]);
    Some((es_path, occ))
}

/// Re-check the side conditions of the Fig-8 root rules before applying.
pub(super) fn validate_useful_alt(t: &Term, r: &Redex) -> Result<(), StepError> {
    let occ = r
        .occurrence
        .as_ref()
        .ok_or_else(|| stale("missing occurrence"))?;
    match r.label {
        RuleLabel::EU1 => {
            let Some(Term::Es(body, _, _)) = t.get(&r.anchor) else {
                return Err(stale("e-u1 anchor is not an ES"));
            };
            let info = context_class(body, occ).map_err(|e| stale(e.to_string()))?;
            if info.class != ContextClass::Useful {
                return Err(stale("e-u1 occurrence context is not useful"));
            }
        }
        RuleLabel::EU2 => {
            if !occ.is_spine() {
                return Err(stale("e-u2 occurrence is not on the spine"));
            }
            // The acting ES must sit in function position under frames.
            let mut steps = &r.anchor.0[..];
            while let Some((Step::EsBody, rest)) = steps.split_last() {
                steps = rest;
            }
            if steps.last() != Some(&Step::AppFun) {
                return Err(stale("e-u2 acting ES is not applied by the context"));
            }
        }
        _ => return Err(stale("not a useful-alternative label")),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use crate::vsc::engine::{enumerate_vsc, VscOpts};

    fn t(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    fn e_abs_verdicts(src: &str) -> Vec<UsefulnessVerdict> {
        let term = t(src);
        enumerate_vsc(&term, VscOpts::default())
            .iter()
            .filter(|r| r.label == RuleLabel::EAbs)
            .map(|r| classify_usefulness(&term, r))
            .collect()
    }

    #[test]
    fn directly_useful_and_non_useful() {
        assert_eq!(
            e_abs_verdicts("(x t)[x <- \\y. u]"),
            vec![UsefulnessVerdict::Useful]
        );
        assert_eq!(
            e_abs_verdicts("(t x)[x <- \\y. u]"),
            vec![UsefulnessVerdict::NonUseful]
        );
        assert_eq!(
            e_abs_verdicts("x[x <- \\y. u]"),
            vec![UsefulnessVerdict::NonUseful]
        );
    }

    #[test]
    fn indirect_cases_are_non_useful() {
        // the z occurrence inside [x <- z] is replaced over a chain
        assert_eq!(
            e_abs_verdicts("(x t)[x <- z][z <- \\y. u]"),
            vec![UsefulnessVerdict::NonUseful]
        );
    }

    #[test]
    fn context_provided_usefulness() {
        // x[x <- \y.u] t: the root step is not useful, the context makes it so
        assert_eq!(
            e_abs_verdicts("x[x <- \\y. u] t"),
            vec![UsefulnessVerdict::Useful]
        );
    }

    #[test]
    fn classifiers_agree_on_sub_flag() {
        let term = t("(x y)[x <- z]");
        let hole = Path(vec![Step::EsBody, Step::AppFun]);
        let a = context_class(&term, &hole).unwrap();
        let b = context_class_grammar(&term, &hole).unwrap();
        assert_eq!(a.class, b.class);
        assert_eq!(a.sub, b.sub);
        assert_eq!(a.class, ContextClass::Useful);

        let hole = Path(vec![Step::EsBody]);
        let a = context_class(&term, &hole).unwrap();
        assert!(a.sub);
        assert_eq!(a.class, ContextClass::NonUseful);
    }

    #[test]
    fn hole_under_abs_is_rejected() {
        let term = t("\\x. x");
        let hole = Path(vec![Step::AbsBody]);
        assert_eq!(
            context_class(&term, &hole),
            Err(ContextError::UnderAbstraction)
        );
        assert_eq!(
            context_class_grammar(&term, &hole),
            Err(ContextError::UnderAbstraction)
        );
    }

    #[test]
    fn useful_alt_root_rules() {
        // argument provided by the context: one e-u2
        let rs = enumerate_useful_alt(&t("x[x <- \\y. u] t"));
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].label, RuleLabel::EU2);
        // argument inside the pattern: one e-u1
        let rs = enumerate_useful_alt(&t("(x t)[x <- \\y. u]"));
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].label, RuleLabel::EU1);
        // no application anywhere: nothing useful
        assert!(enumerate_useful_alt(&t("x[x <- \\y. u]")).is_empty());
    }
}
