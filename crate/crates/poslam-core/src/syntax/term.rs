//! Terms with explicit substitutions, shared by all three calculi.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A variable name. Generated names (from [`NameGen`]) start with `#`,
/// which the surface grammar cannot produce, so they never collide with
/// parsed source names.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Name(String);

impl Name {
    pub fn new(s: impl Into<String>) -> Self {
        Name(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The same name decorated with one prime.
    pub fn primed(&self) -> Name {
        Name(format!("{}'", self.0))
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name(s.to_string())
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Deterministic supply of fresh names, threaded explicitly.
#[derive(Clone, Debug, Default)]
pub struct NameGen {
    next: u32,
}

impl NameGen {
    pub fn new() -> Self {
        NameGen { next: 0 }
    }

    pub fn fresh(&mut self) -> Name {
        self.next += 1;
        Name(format!("#{}", self.next))
    }
}

/// Pick a decorated variant of `base` that avoids every name in `avoid`.
/// Deterministic: primes are appended until the name is free.
pub fn freshen_name(base: &Name, avoid: &BTreeSet<Name>) -> Name {
    let mut candidate = base.primed();
    while avoid.contains(&candidate) {
        candidate = candidate.primed();
    }
    candidate
}

/// Terms of the value substitution calculus. The positive calculi use the
/// same tree restricted by the predicates in [`crate::syntax::grammar`].
///
/// `Es(t, x, u)` is the explicit substitution `t[x<-u]`: `x` binds in `t`
/// only, `u` is outside its scope.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Term {
    Var(Name),
    Abs(Name, Box<Term>),
    App(Box<Term>, Box<Term>),
    Es(Box<Term>, Name, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(Name::new(name))
    }

    pub fn abs(binder: impl Into<String>, body: Term) -> Term {
        Term::Abs(Name::new(binder), Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn es(body: Term, binder: impl Into<String>, content: Term) -> Term {
        Term::Es(Box::new(body), Name::new(binder), Box::new(content))
    }

    /// Number of tree nodes; the size measure used by the generators.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Abs(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Es(b, _, c) => 1 + b.size() + c.size(),
        }
    }

    pub fn get(&self, path: &Path) -> Option<&Term> {
        let mut cur = self;
        for step in &path.0 {
            cur = match (cur, step) {
                (Term::Abs(_, b), Step::AbsBody) => b,
                (Term::App(f, _), Step::AppFun) => f,
                (Term::App(_, a), Step::AppArg) => a,
                (Term::Es(b, _, _), Step::EsBody) => b,
                (Term::Es(_, _, c), Step::EsContent) => c,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Replace the subterm at `path`, rebuilding the spine above it.
    /// Purely structural: no binder hygiene is applied here.
    pub fn with_replaced(&self, path: &Path, replacement: Term) -> Option<Term> {
        fn go(t: &Term, steps: &[Step], replacement: Term) -> Option<Term> {
            let Some((first, rest)) = steps.split_first() else {
                return Some(replacement);
            };
            Some(match (t, first) {
                (Term::Abs(x, b), Step::AbsBody) => {
                    Term::Abs(x.clone(), Box::new(go(b, rest, replacement)?))
                }
                (Term::App(f, a), Step::AppFun) => {
                    Term::App(Box::new(go(f, rest, replacement)?), a.clone())
                }
                (Term::App(f, a), Step::AppArg) => {
                    Term::App(f.clone(), Box::new(go(a, rest, replacement)?))
                }
                (Term::Es(b, x, c), Step::EsBody) => {
                    Term::Es(Box::new(go(b, rest, replacement)?), x.clone(), c.clone())
                }
                (Term::Es(b, x, c), Step::EsContent) => {
                    Term::Es(b.clone(), x.clone(), Box::new(go(c, rest, replacement)?))
                }
                _ => return None,
            })
        }
        go(self, &path.0, replacement)
    }

    /// Every name occurring in the term, free or bound. Used for avoid sets.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        fn go(t: &Term, out: &mut BTreeSet<Name>) {
            match t {
                Term::Var(x) => {
                    out.insert(x.clone());
                }
                Term::Abs(x, b) => {
                    out.insert(x.clone());
                    go(b, out);
                }
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
                Term::Es(b, x, c) => {
                    out.insert(x.clone());
                    go(b, out);
                    go(c, out);
                }
            }
        }
        go(self, &mut out);
        out
    }
}

/// One child selector. The derived order (`AppFun < AppArg`,
/// `EsBody < EsContent`) matches left-to-right textual order and is what
/// the deterministic redex ordering relies on.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Step {
    AbsBody,
    AppFun,
    AppArg,
    EsBody,
    EsContent,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Step::AbsBody => "abs-body",
            Step::AppFun => "app-fun",
            Step::AppArg => "app-arg",
            Step::EsBody => "es-body",
            Step::EsContent => "es-content",
        };
        f.write_str(s)
    }
}

/// A position in a term, as a sequence of child selectors from the root.
/// Lexicographic `Ord` on paths is pre-order: outer positions sort before
/// their descendants, left children before right ones.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Path(pub Vec<Step>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, step: Step) -> Path {
        let mut v = self.0.clone();
        v.push(step);
        Path(v)
    }

    pub fn join(&self, other: &Path) -> Path {
        let mut v = self.0.clone();
        v.extend(other.0.iter().copied());
        Path(v)
    }

    /// True when the path only descends through substitution-context
    /// frames, i.e. the position is on the ES spine.
    pub fn is_spine(&self) -> bool {
        self.0.iter().all(|s| *s == Step::EsBody)
    }

    /// True when the position is not under any abstraction.
    pub fn is_open(&self) -> bool {
        self.0.iter().all(|s| *s != Step::AbsBody)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
