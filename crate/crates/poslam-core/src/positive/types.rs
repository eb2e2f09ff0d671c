//! Simple types for positive terms, by first-order unification.
//!
//! The checking-style rules are syntax-directed on the three frame
//! shapes; inference introduces a fresh metavariable per unknown and
//! unifies. The explicit beta frame `t[x<-(\y.u)z]` is typed as the
//! composition of the application and abstraction rules, so translated
//! terms are covered. A standard simple-type system for full VSC terms is
//! also provided as an independent reference for the preservation checks.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::syntax::{fv, is_explicit_positive, Name, Term};

/// A simple type with named atoms. Principal types report their free
/// parameters as atoms `a`, `b`, ... in first-occurrence order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SimpleType {
    Atom(String),
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn atom(s: impl Into<String>) -> SimpleType {
        SimpleType::Atom(s.into())
    }

    pub fn arrow(a: SimpleType, b: SimpleType) -> SimpleType {
        SimpleType::Arrow(Box::new(a), Box::new(b))
    }

    /// Rename atoms by first occurrence to `a, b, c, ...`; two types are
    /// equal up to atom renaming iff their canonical forms are equal.
    pub fn canonical(&self) -> SimpleType {
        fn go(t: &SimpleType, map: &mut HashMap<String, String>) -> SimpleType {
            match t {
                SimpleType::Atom(s) => {
                    let n = map.len();
                    let name = map.entry(s.clone()).or_insert_with(|| atom_name(n)).clone();
                    SimpleType::Atom(name)
                }
                SimpleType::Arrow(a, b) => {
                    let a = go(a, map);
                    SimpleType::arrow(a, go(b, map))
                }
            }
        }
        go(self, &mut HashMap::new())
    }
}

fn atom_name(i: usize) -> String {
    let letter = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{}{}", letter, i / 26)
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Atom(s) => f.write_str(s),
            SimpleType::Arrow(a, b) => {
                if matches!(**a, SimpleType::Arrow(_, _)) {
                    write!(f, "({a}) => {b}")
                } else {
                    write!(f, "{a} => {b}")
                }
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("untypable: {0}")]
    Untypable(String),
    #[error("term is outside the {0} grammar")]
    WrongGrammar(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Meta(u32),
    Arrow(Box<Ty>, Box<Ty>),
}

#[derive(Default)]
struct Unifier {
    subst: HashMap<u32, Ty>,
    next: u32,
}

impl Unifier {
    fn fresh(&mut self) -> Ty {
        self.next += 1;
        Ty::Meta(self.next)
    }

    fn resolve(&self, ty: &Ty) -> Ty {
        match ty {
            Ty::Meta(v) => match self.subst.get(v) {
                Some(t) => self.resolve(&t.clone()),
                None => ty.clone(),
            },
            Ty::Arrow(_, _) => ty.clone(),
        }
    }

    fn occurs(&self, v: u32, ty: &Ty) -> bool {
        match self.resolve(ty) {
            Ty::Meta(w) => w == v,
            Ty::Arrow(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> Result<(), TypeError> {
        let (ra, rb) = (self.resolve(a), self.resolve(b));
        match (ra, rb) {
            (Ty::Meta(v), Ty::Meta(w)) if v == w => Ok(()),
            (Ty::Meta(v), t) | (t, Ty::Meta(v)) => {
                if self.occurs(v, &t) {
                    return Err(TypeError::Untypable(format!(
                        "occurs check: ?{v} = {}",
                        self.show(&t)
                    )));
                }
                self.subst.insert(v, t);
                Ok(())
            }
            (Ty::Arrow(a1, b1), Ty::Arrow(a2, b2)) => {
                self.unify(&a1, &a2)?;
                self.unify(&b1, &b2)
            }
        }
    }

    fn show(&self, ty: &Ty) -> String {
        match self.resolve(ty) {
            Ty::Meta(v) => format!("?{v}"),
            Ty::Arrow(a, b) => format!("({} => {})", self.show(&a), self.show(&b)),
        }
    }

    fn export(&self, ty: &Ty) -> SimpleType {
        match self.resolve(ty) {
            Ty::Meta(v) => SimpleType::Atom(format!("t{v}")),
            Ty::Arrow(a, b) => SimpleType::arrow(self.export(&a), self.export(&b)),
        }
    }
}

fn import(t: &SimpleType, atoms: &mut HashMap<String, Ty>, u: &mut Unifier) -> Ty {
    match t {
        SimpleType::Atom(s) => atoms.entry(s.clone()).or_insert_with(|| u.fresh()).clone(),
        SimpleType::Arrow(a, b) => {
            let a = import(a, atoms, u);
            Ty::Arrow(Box::new(a), Box::new(import(b, atoms, u)))
        }
    }
}

/// Principal simple type of a positive (or explicit-positive) term under
/// `env`. Free variables not covered by `env` get fresh metavariables.
/// Untypable terms are a normal return, not a fault.
pub fn infer_type_positive(
    t: &Term,
    env: &BTreeMap<Name, SimpleType>,
) -> Result<SimpleType, TypeError> {
    if !is_explicit_positive(t) {
        return Err(TypeError::WrongGrammar("explicit-positive"));
    }
    let mut u = Unifier::default();
    let mut atoms = HashMap::new();
    let mut tenv: BTreeMap<Name, Ty> = BTreeMap::new();
    for x in fv(t) {
        let ty = match env.get(&x) {
            Some(st) => import(st, &mut atoms, &mut u),
            None => u.fresh(),
        };
        tenv.insert(x, ty);
    }
    let ty = infer_pos(t, &tenv, &mut u)?;
    Ok(u.export(&ty).canonical())
}

fn lookup(env: &BTreeMap<Name, Ty>, x: &Name, u: &mut Unifier) -> Ty {
    env.get(x).cloned().unwrap_or_else(|| u.fresh())
}

fn infer_pos(t: &Term, env: &BTreeMap<Name, Ty>, u: &mut Unifier) -> Result<Ty, TypeError> {
    match t {
        Term::Var(x) => Ok(lookup(env, x, u)),
        Term::Es(body, x, content) => {
            let x_ty = match &**content {
                Term::App(f, a) => match (&**f, &**a) {
                    (Term::Var(y), Term::Var(z)) => {
                        // y : B => C,  z : B  |-  x : C
                        let c = u.fresh();
                        let z_ty = lookup(env, z, u);
                        let y_ty = lookup(env, y, u);
                        u.unify(&y_ty, &Ty::Arrow(Box::new(z_ty), Box::new(c.clone())))?;
                        c
                    }
                    (Term::Abs(y, ubody), Term::Var(z)) => {
                        // (\y.u) z : the app and abs rules composed
                        let b = u.fresh();
                        let mut inner = env.clone();
                        inner.insert(y.clone(), b.clone());
                        let c = infer_pos(ubody, &inner, u)?;
                        let z_ty = lookup(env, z, u);
                        u.unify(&z_ty, &b)?;
                        c
                    }
                    _ => return Err(TypeError::WrongGrammar("explicit-positive")),
                },
                Term::Abs(y, ubody) => {
                    // y : B |- u : C  gives  x : B => C
                    let b = u.fresh();
                    let mut inner = env.clone();
                    inner.insert(y.clone(), b.clone());
                    let c = infer_pos(ubody, &inner, u)?;
                    Ty::Arrow(Box::new(b), Box::new(c))
                }
                _ => return Err(TypeError::WrongGrammar("explicit-positive")),
            };
            let mut inner = env.clone();
            inner.insert(x.clone(), x_ty);
            infer_pos(body, &inner, u)
        }
        _ => Err(TypeError::WrongGrammar("explicit-positive")),
    }
}

/// Principal simple type of an arbitrary VSC term under the standard
/// natural-deduction rules (ES typed as a monomorphic let). Used as the
/// independent reference when checking that translation preserves typing.
pub fn infer_type_vsc(t: &Term, env: &BTreeMap<Name, SimpleType>) -> Result<SimpleType, TypeError> {
    let mut u = Unifier::default();
    let mut atoms = HashMap::new();
    let mut tenv: BTreeMap<Name, Ty> = BTreeMap::new();
    for x in fv(t) {
        let ty = match env.get(&x) {
            Some(st) => import(st, &mut atoms, &mut u),
            None => u.fresh(),
        };
        tenv.insert(x, ty);
    }
    let ty = infer_vsc(t, &tenv, &mut u)?;
    Ok(u.export(&ty).canonical())
}

fn infer_vsc(t: &Term, env: &BTreeMap<Name, Ty>, u: &mut Unifier) -> Result<Ty, TypeError> {
    match t {
        Term::Var(x) => Ok(lookup(env, x, u)),
        Term::Abs(x, body) => {
            let a = u.fresh();
            let mut inner = env.clone();
            inner.insert(x.clone(), a.clone());
            let b = infer_vsc(body, &inner, u)?;
            Ok(Ty::Arrow(Box::new(a), Box::new(b)))
        }
        Term::App(f, a) => {
            let f_ty = infer_vsc(f, env, u)?;
            let a_ty = infer_vsc(a, env, u)?;
            let r = u.fresh();
            u.unify(&f_ty, &Ty::Arrow(Box::new(a_ty), Box::new(r.clone())))?;
            Ok(r)
        }
        Term::Es(body, x, content) => {
            let c_ty = infer_vsc(content, env, u)?;
            let mut inner = env.clone();
            inner.insert(x.clone(), c_ty);
            infer_vsc(body, &inner, u)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn pos_type(src: &str) -> Result<SimpleType, TypeError> {
        infer_type_positive(&parse_term(src).unwrap(), &BTreeMap::new())
    }

    #[test]
    fn variable_takes_its_env_type() {
        let env = [(Name::new("x"), SimpleType::atom("A"))].into();
        let ty = infer_type_positive(&Term::var("x"), &env).unwrap();
        assert_eq!(ty, SimpleType::atom("a"));
    }

    #[test]
    fn shared_identity_is_a_to_a() {
        let ty = pos_type("z[z <- \\y. y]").unwrap();
        assert_eq!(
            ty,
            SimpleType::arrow(SimpleType::atom("a"), SimpleType::atom("a"))
        );
    }

    #[test]
    fn self_application_fails_occurs_check() {
        let err = pos_type("w[w <- x x]").unwrap_err();
        assert!(matches!(err, TypeError::Untypable(_)), "{err}");
    }

    #[test]
    fn application_frame_composes() {
        // w[w <- y z] : y : b => c, z : b |- w : c
        let ty = pos_type("w[w <- y z]").unwrap();
        assert_eq!(ty, SimpleType::atom("a"));
        // and the arrow is actually propagated
        let ty = pos_type("q[x <- \\y. y][q <- x z]").unwrap();
        assert_eq!(ty, SimpleType::atom("a"));
    }

    #[test]
    fn beta_frame_types_like_its_decomposition() {
        let a = pos_type("w[w <- (\\y. y) z]").unwrap();
        let b = pos_type("w[v <- \\y. y][w <- v z]").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn vsc_reference_rules() {
        let env = BTreeMap::new();
        let ty = infer_type_vsc(&parse_term("\\x. x").unwrap(), &env).unwrap();
        assert_eq!(
            ty,
            SimpleType::arrow(SimpleType::atom("a"), SimpleType::atom("a"))
        );
        let ty = infer_type_vsc(&parse_term("(\\x. x) (\\y. y)").unwrap(), &env).unwrap();
        assert_eq!(
            ty,
            SimpleType::arrow(SimpleType::atom("a"), SimpleType::atom("a"))
        );
        let err = infer_type_vsc(&parse_term("\\x. x x").unwrap(), &env).unwrap_err();
        assert!(matches!(err, TypeError::Untypable(_)));
        // let-style ES
        let ty = infer_type_vsc(&parse_term("x[x <- \\y. y]").unwrap(), &env).unwrap();
        assert_eq!(
            ty,
            SimpleType::arrow(SimpleType::atom("a"), SimpleType::atom("a"))
        );
    }
}
