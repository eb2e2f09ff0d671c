//! Sub-grammar predicates: values, answers, positive and explicit-positive
//! terms, and the unique head decomposition of positive terms.

use thiserror::Error;

use super::term::{Name, Path, Step, Term};
use super::vars::spine_head_unshadowed;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("term is not an explicit-positive term")]
    NotPositive,
    #[error("context hole is not a substitution-context position")]
    NotSubstContext,
}

/// Grammar membership flags for one term.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct TermClass {
    pub is_value: bool,
    pub is_answer: bool,
    pub is_almost_answer: bool,
    pub is_positive: bool,
    pub is_explicit_positive: bool,
}

pub fn classify_term(t: &Term) -> TermClass {
    TermClass {
        is_value: is_value(t),
        is_answer: is_answer(t),
        is_almost_answer: is_almost_answer(t),
        is_positive: is_positive(t),
        is_explicit_positive: is_explicit_positive(t),
    }
}

pub fn is_value(t: &Term) -> bool {
    matches!(t, Term::Var(_) | Term::Abs(_, _))
}

/// Answers are abstractions under a list of ESs: L<\x.t>.
pub fn is_answer(t: &Term) -> bool {
    let mut cur = t;
    loop {
        match cur {
            Term::Abs(_, _) => return true,
            Term::Es(b, _, _) => cur = b,
            _ => return false,
        }
    }
}

/// An almost answer is an answer, or L< L'<<x>>[x<-t] > with t an answer.
pub fn is_almost_answer(t: &Term) -> bool {
    if is_answer(t) {
        return true;
    }
    let mut cur = t;
    loop {
        match cur {
            Term::Es(b, x, c) => {
                if is_answer(c) && spine_head_unshadowed(b) == Some(x) {
                    return true;
                }
                cur = b;
            }
            _ => return false,
        }
    }
}

/// Positive terms: x | t[x<-yz] | t[x<-\y.u] with t, u positive.
pub fn is_positive(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Es(b, _, c) => {
            is_positive(b)
                && match &**c {
                    Term::App(f, a) => matches!(**f, Term::Var(_)) && matches!(**a, Term::Var(_)),
                    Term::Abs(_, u) => is_positive(u),
                    _ => false,
                }
        }
        _ => false,
    }
}

/// Explicit-positive terms additionally allow the explicit beta frame
/// t[x<-(\y.u)z].
pub fn is_explicit_positive(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Es(b, _, c) => {
            is_explicit_positive(b)
                && match &**c {
                    Term::App(f, a) => {
                        matches!(**a, Term::Var(_))
                            && match &**f {
                                Term::Var(_) => true,
                                Term::Abs(_, u) => is_explicit_positive(u),
                                _ => false,
                            }
                    }
                    Term::Abs(_, u) => is_explicit_positive(u),
                    _ => false,
                }
        }
        _ => false,
    }
}

/// Every explicit-positive term is uniquely E<x>: the path of the hole of
/// E (a run of es-body steps) together with the head variable. Plugging
/// the variable back at the path reconstructs the term.
pub fn decompose_positive(t: &Term) -> Result<(Path, Name), GrammarError> {
    if !is_explicit_positive(t) {
        return Err(GrammarError::NotPositive);
    }
    let mut steps = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::Es(b, _, _) => {
                steps.push(Step::EsBody);
                cur = b;
            }
            Term::Var(x) => return Ok((Path(steps), x.clone())),
            _ => unreachable!("explicit-positive spine ends in a variable"),
        }
    }
}

/// Strip the ES spine: the frames (outermost first) and the core subterm.
pub fn spine_frames(t: &Term) -> (Vec<(&Name, &Term)>, &Term) {
    let mut frames = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::Es(b, x, c) => {
                frames.push((x, &**c));
                cur = b;
            }
            _ => return (frames, cur),
        }
    }
}

/// The core of the ES spine, ignoring binders.
pub fn spine_core(t: &Term) -> &Term {
    spine_frames(t).1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam_id() -> Term {
        Term::abs("z", Term::var("z"))
    }

    #[test]
    fn answers_are_abstractions_under_es() {
        // (\x.x)[y<-\z.z] is an answer
        let t = Term::es(Term::abs("x", Term::var("x")), "y", lam_id());
        let c = classify_term(&t);
        assert!(c.is_answer);
        assert!(c.is_almost_answer);
        assert!(!c.is_value);
    }

    #[test]
    fn almost_answer_needs_matching_head() {
        // y[y<-\z.z]: not an answer, but an almost answer
        let t = Term::es(Term::var("y"), "y", lam_id());
        let c = classify_term(&t);
        assert!(!c.is_answer);
        assert!(c.is_almost_answer);
        // x[y<-\z.z] with head != binder: not an almost answer
        let t = Term::es(Term::var("x"), "y", lam_id());
        assert!(!is_almost_answer(&t));
        // y[y<-x]: content not an answer
        let t = Term::es(Term::var("y"), "y", Term::var("x"));
        assert!(!is_almost_answer(&t));
    }

    #[test]
    fn almost_answer_under_outer_spine() {
        // L< y[y<-\z.z] > with L = <.>[w<-q]
        let inner = Term::es(Term::var("y"), "y", lam_id());
        let t = Term::es(inner, "w", Term::var("q"));
        assert!(is_almost_answer(&t));
    }

    #[test]
    fn positive_grammar() {
        // x[x<-yz] is positive and not an almost answer
        let t = Term::es(
            Term::var("x"),
            "x",
            Term::app(Term::var("y"), Term::var("z")),
        );
        let c = classify_term(&t);
        assert!(c.is_positive);
        assert!(c.is_explicit_positive);
        assert!(!c.is_almost_answer);
        // a beta frame is explicit-positive only
        let t = Term::es(Term::var("x"), "x", Term::app(lam_id(), Term::var("z")));
        let c = classify_term(&t);
        assert!(!c.is_positive);
        assert!(c.is_explicit_positive);
        // a plain application is neither
        let t = Term::app(Term::var("x"), Term::var("y"));
        let c = classify_term(&t);
        assert!(!c.is_positive);
        assert!(!c.is_explicit_positive);
        // variable contents are not positive
        let t = Term::es(Term::var("x"), "x", Term::var("y"));
        assert!(!is_positive(&t));
        assert!(!is_explicit_positive(&t));
    }

    #[test]
    fn decompose_positive_heads() {
        let (p, x) = decompose_positive(&Term::var("x")).unwrap();
        assert!(p.is_root());
        assert_eq!(x, Name::new("x"));

        let t = Term::es(
            Term::var("x"),
            "x",
            Term::app(Term::var("y"), Term::var("z")),
        );
        let (p, x) = decompose_positive(&t).unwrap();
        assert_eq!(p, Path(vec![Step::EsBody]));
        assert_eq!(x, Name::new("x"));
        // plugging back reconstructs the term
        assert_eq!(t.with_replaced(&p, Term::Var(x)).unwrap(), t);

        assert_eq!(
            decompose_positive(&Term::app(Term::var("x"), Term::var("y"))),
            Err(GrammarError::NotPositive)
        );

        // head variable under two frames, one of them an explicit beta
        let t = Term::es(
            Term::es(
                Term::var("w"),
                "w",
                Term::app(Term::abs("y", Term::var("y")), Term::var("z")),
            ),
            "q",
            Term::abs("p", Term::var("p")),
        );
        let (p, x) = decompose_positive(&t).unwrap();
        assert_eq!(p, Path(vec![Step::EsBody, Step::EsBody]));
        assert_eq!(x, Name::new("w"));
    }
}
