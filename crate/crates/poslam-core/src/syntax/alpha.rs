//! Alpha-equivalence and canonical renaming of binders.

use std::collections::{BTreeSet, HashMap};

use super::term::{Name, Term};
use super::vars::fv;

/// Structural equality up to renaming of bound variables. This is the
/// observable equality used by every engine and test.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    let mut env = AlphaEnv::default();
    env.eq(a, b)
}

#[derive(Default)]
struct AlphaEnv {
    left: HashMap<Name, Vec<usize>>,
    right: HashMap<Name, Vec<usize>>,
    depth: usize,
}

impl AlphaEnv {
    fn eq(&mut self, a: &Term, b: &Term) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let lx = self.left.get(x).and_then(|v| v.last());
                let ly = self.right.get(y).and_then(|v| v.last());
                match (lx, ly) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::Abs(x, tb), Term::Abs(y, ub)) => self.under(x, y, |e| e.eq(tb, ub)),
            (Term::App(f1, a1), Term::App(f2, a2)) => self.eq(f1, f2) && self.eq(a1, a2),
            (Term::Es(b1, x, c1), Term::Es(b2, y, c2)) => {
                self.eq(c1, c2) && self.under(x, y, |e| e.eq(b1, b2))
            }
            _ => false,
        }
    }

    fn under<R>(&mut self, x: &Name, y: &Name, f: impl FnOnce(&mut Self) -> R) -> R {
        let d = self.depth;
        self.depth += 1;
        self.left.entry(x.clone()).or_default().push(d);
        self.right.entry(y.clone()).or_default().push(d);
        let r = f(self);
        self.left.get_mut(x).unwrap().pop();
        self.right.get_mut(y).unwrap().pop();
        self.depth -= 1;
        r
    }
}

/// Rename every binder to `x1, x2, ...` in pre-order, skipping names free
/// in the term. Two terms are alpha-equal iff their canonical forms are
/// structurally equal, and the canonical form prints the way the traces
/// are displayed.
pub fn canonicalize(t: &Term) -> Term {
    let free: BTreeSet<Name> = fv(t);
    let mut namer = CanonNamer { free, next: 1 };
    let env = HashMap::new();
    canon(t, &env, &mut namer)
}

struct CanonNamer {
    free: BTreeSet<Name>,
    next: u32,
}

impl CanonNamer {
    fn fresh(&mut self) -> Name {
        loop {
            let n = Name::new(format!("x{}", self.next));
            self.next += 1;
            if !self.free.contains(&n) {
                return n;
            }
        }
    }
}

fn canon(t: &Term, env: &HashMap<Name, Name>, namer: &mut CanonNamer) -> Term {
    match t {
        Term::Var(x) => Term::Var(env.get(x).cloned().unwrap_or_else(|| x.clone())),
        Term::Abs(x, b) => {
            let n = namer.fresh();
            let mut env2 = env.clone();
            env2.insert(x.clone(), n.clone());
            Term::Abs(n, Box::new(canon(b, &env2, namer)))
        }
        Term::App(f, a) => Term::App(
            Box::new(canon(f, env, namer)),
            Box::new(canon(a, env, namer)),
        ),
        Term::Es(b, x, c) => {
            let n = namer.fresh();
            let mut env2 = env.clone();
            env2.insert(x.clone(), n.clone());
            let body = canon(b, &env2, namer);
            Term::Es(Box::new(body), n, Box::new(canon(c, env, namer)))
        }
    }
}

/// A hashable key identifying the alpha-class of a term.
pub fn canonical_key(t: &Term) -> String {
    fn go(t: &Term, out: &mut String) {
        match t {
            Term::Var(x) => {
                out.push('v');
                out.push_str(x.as_str());
                out.push(';');
            }
            Term::Abs(x, b) => {
                out.push('\\');
                out.push_str(x.as_str());
                out.push('.');
                go(b, out);
            }
            Term::App(f, a) => {
                out.push('(');
                go(f, out);
                go(a, out);
                out.push(')');
            }
            Term::Es(b, x, c) => {
                out.push('[');
                out.push_str(x.as_str());
                out.push('|');
                go(b, out);
                go(c, out);
                out.push(']');
            }
        }
    }
    let mut s = String::new();
    go(&canonicalize(t), &mut s);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_combinators_are_alpha_equal() {
        assert!(alpha_eq(
            &Term::abs("x", Term::var("x")),
            &Term::abs("y", Term::var("y"))
        ));
    }

    #[test]
    fn distinct_free_variables_differ() {
        assert!(!alpha_eq(&Term::var("x"), &Term::var("y")));
    }

    #[test]
    fn es_binders_are_renamed() {
        // z[z<-\x.x] =alpha= w[w<-\y.y]
        let a = Term::es(Term::var("z"), "z", Term::abs("x", Term::var("x")));
        let b = Term::es(Term::var("w"), "w", Term::abs("y", Term::var("y")));
        assert!(alpha_eq(&a, &b));
        assert_eq!(canonical_key(&a), canonical_key(&b));
    }

    #[test]
    fn es_content_is_outside_the_binder() {
        // x[x<-x] vs y[y<-x]: alpha-equal (content x is free in both)
        let a = Term::es(Term::var("x"), "x", Term::var("x"));
        let b = Term::es(Term::var("y"), "y", Term::var("x"));
        assert!(alpha_eq(&a, &b));
        // but not equal to y[y<-y] whose content is a different free var
        let c = Term::es(Term::var("y"), "y", Term::var("y"));
        assert!(!alpha_eq(&a, &c));
    }

    #[test]
    fn canonical_form_skips_free_names() {
        // free variable already named x1: binder must not collide
        let t = Term::es(Term::var("z"), "z", Term::var("x1"));
        let c = canonicalize(&t);
        assert_eq!(c, Term::es(Term::var("x2"), "x2", Term::var("x1")));
    }

    #[test]
    fn shadowing_is_respected() {
        // \x.\x.x =alpha= \y.\z.z, not \y.\z.y
        let a = Term::abs("x", Term::abs("x", Term::var("x")));
        assert!(alpha_eq(
            &a,
            &Term::abs("y", Term::abs("z", Term::var("z")))
        ));
        assert!(!alpha_eq(
            &a,
            &Term::abs("y", Term::abs("z", Term::var("y")))
        ));
    }
}
