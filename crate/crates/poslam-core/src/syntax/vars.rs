//! Free-variable computations: plain, open and applied-open.

use std::collections::BTreeSet;

use super::term::{Name, Term};

/// Which occurrences count as free.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VarMode {
    /// Standard free variables, fv(t).
    All,
    /// Open free variables, ofv(t): occurrences out of all abstractions.
    Open,
    /// Applied open free variables, aofv(t): x counts exactly when some
    /// subterm `L<<x>> u` occurs out of all abstractions.
    AppliedOpen,
}

pub fn free_vars(t: &Term, mode: VarMode) -> BTreeSet<Name> {
    match mode {
        VarMode::All => fv(t),
        VarMode::Open => ofv(t),
        VarMode::AppliedOpen => aofv(t),
    }
}

pub fn fv(t: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fv_into(t, &mut out);
    out
}

fn fv_into(t: &Term, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Abs(x, b) => {
            let mut inner = BTreeSet::new();
            fv_into(b, &mut inner);
            inner.remove(x);
            out.extend(inner);
        }
        Term::App(f, a) => {
            fv_into(f, out);
            fv_into(a, out);
        }
        Term::Es(b, x, c) => {
            let mut inner = BTreeSet::new();
            fv_into(b, &mut inner);
            inner.remove(x);
            out.extend(inner);
            fv_into(c, out);
        }
    }
}

pub fn is_free_in(x: &Name, t: &Term) -> bool {
    match t {
        Term::Var(y) => y == x,
        Term::Abs(y, b) => y != x && is_free_in(x, b),
        Term::App(f, a) => is_free_in(x, f) || is_free_in(x, a),
        Term::Es(b, y, c) => (y != x && is_free_in(x, b)) || is_free_in(x, c),
    }
}

fn ofv(t: &Term) -> BTreeSet<Name> {
    match t {
        Term::Var(x) => [x.clone()].into(),
        Term::Abs(_, _) => BTreeSet::new(),
        Term::App(f, a) => {
            let mut s = ofv(f);
            s.extend(ofv(a));
            s
        }
        Term::Es(b, x, c) => {
            let mut s = ofv(b);
            s.remove(x);
            s.extend(ofv(c));
            s
        }
    }
}

fn aofv(t: &Term) -> BTreeSet<Name> {
    match t {
        Term::Var(_) | Term::Abs(_, _) => BTreeSet::new(),
        Term::App(f, a) => {
            let mut s = aofv(f);
            s.extend(aofv(a));
            if let Some(x) = spine_head_unshadowed(f) {
                s.insert(x.clone());
            }
            s
        }
        Term::Es(b, x, c) => {
            let mut s = aofv(b);
            s.remove(x);
            s.extend(aofv(c));
            s
        }
    }
}

/// If `t = L<<x>>`, i.e. stripping the ES spine reaches a variable that no
/// spine frame captures, return that variable.
pub fn spine_head_unshadowed(t: &Term) -> Option<&Name> {
    let mut cur = t;
    let mut shadowed: Vec<&Name> = Vec::new();
    loop {
        match cur {
            Term::Es(b, x, _) => {
                shadowed.push(x);
                cur = b;
            }
            Term::Var(x) => {
                return if shadowed.contains(&x) { None } else { Some(x) };
            }
            _ => return None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> BTreeSet<Name> {
        xs.iter().map(|s| Name::new(*s)).collect()
    }

    #[test]
    fn fv_of_var() {
        assert_eq!(free_vars(&Term::var("x"), VarMode::All), names(&["x"]));
    }

    #[test]
    fn ofv_ignores_abstraction_bodies() {
        // (\x.x) y : ofv = {y}
        let t = Term::app(Term::abs("x", Term::var("x")), Term::var("y"));
        assert_eq!(free_vars(&t, VarMode::Open), names(&["y"]));
        assert_eq!(free_vars(&t, VarMode::All), names(&["y"]));
    }

    #[test]
    fn aofv_marks_applied_spine_heads() {
        // x y : aofv = {x}
        let t = Term::app(Term::var("x"), Term::var("y"));
        assert_eq!(free_vars(&t, VarMode::AppliedOpen), names(&["x"]));
        // (\z.z) y : aofv = {}
        let t = Term::app(Term::abs("z", Term::var("z")), Term::var("y"));
        assert_eq!(free_vars(&t, VarMode::AppliedOpen), names(&[]));
        // (x[w<-z]) y : the spine head x is applied
        let t = Term::app(
            Term::es(Term::var("x"), "w", Term::var("z")),
            Term::var("y"),
        );
        assert_eq!(free_vars(&t, VarMode::AppliedOpen), names(&["x"]));
        // (x[x<-z]) y : head shadowed by its own spine, not applied-open
        let t = Term::app(
            Term::es(Term::var("x"), "x", Term::var("z")),
            Term::var("y"),
        );
        assert_eq!(free_vars(&t, VarMode::AppliedOpen), names(&[]));
    }

    #[test]
    fn es_binder_scopes_body_only() {
        // x[x<-x]: the content x is free
        let t = Term::es(Term::var("x"), "x", Term::var("x"));
        assert_eq!(free_vars(&t, VarMode::All), names(&["x"]));
        assert_eq!(free_vars(&t, VarMode::Open), names(&["x"]));
    }
}
