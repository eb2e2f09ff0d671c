//! Capture-avoiding substitution of values for variables.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::term::{freshen_name, Name, Term};
use super::vars::{fv, is_free_in};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubstError {
    #[error("substituted term is not a value (variable or abstraction)")]
    NotAValue,
}

/// t{x <- y}: capture-avoiding renaming of the free occurrences of `x`.
pub fn rename(t: &Term, from: &Name, to: &Name) -> Term {
    if from == to {
        return t.clone();
    }
    subst_var(t, from, &Term::Var(to.clone()))
}

/// t{x <- v} for a value v. Engines only ever substitute values.
pub fn subst_value(t: &Term, x: &Name, v: &Term) -> Result<Term, SubstError> {
    match v {
        Term::Var(_) | Term::Abs(_, _) => Ok(subst_var(t, x, v)),
        _ => Err(SubstError::NotAValue),
    }
}

fn subst_var(t: &Term, x: &Name, v: &Term) -> Term {
    let fv_v = fv(v);
    go(t, x, v, &fv_v)
}

fn go(t: &Term, x: &Name, v: &Term, fv_v: &BTreeSet<Name>) -> Term {
    match t {
        Term::Var(y) => {
            if y == x {
                v.clone()
            } else {
                t.clone()
            }
        }
        Term::Abs(y, b) => {
            if y == x {
                t.clone()
            } else if fv_v.contains(y) && is_free_in(x, b) {
                let (y2, b2) = dodge(y, b, x, fv_v);
                Term::Abs(y2, Box::new(go(&b2, x, v, fv_v)))
            } else {
                Term::Abs(y.clone(), Box::new(go(b, x, v, fv_v)))
            }
        }
        Term::App(f, a) => Term::App(Box::new(go(f, x, v, fv_v)), Box::new(go(a, x, v, fv_v))),
        Term::Es(b, y, c) => {
            let c2 = go(c, x, v, fv_v);
            if y == x {
                Term::Es(b.clone(), y.clone(), Box::new(c2))
            } else if fv_v.contains(y) && is_free_in(x, b) {
                let (y2, b2) = dodge(y, b, x, fv_v);
                Term::Es(Box::new(go(&b2, x, v, fv_v)), y2, Box::new(c2))
            } else {
                Term::Es(Box::new(go(b, x, v, fv_v)), y.clone(), Box::new(c2))
            }
        }
    }
}

/// Rename a binder out of the way of the substitution.
fn dodge(y: &Name, body: &Term, x: &Name, fv_v: &BTreeSet<Name>) -> (Name, Term) {
    let mut avoid = body.all_names();
    avoid.extend(fv_v.iter().cloned());
    avoid.insert(x.clone());
    let y2 = freshen_name(y, &avoid);
    (y2.clone(), rename(body, y, &y2))
}

/// Simultaneous capture-avoiding renaming of variables for variables,
/// used by the translation's renaming component.
pub fn subst_parallel(t: &Term, map: &BTreeMap<Name, Name>) -> Term {
    let active: BTreeMap<&Name, &Name> = map.iter().filter(|(k, v)| k != v).collect();
    if active.is_empty() {
        return t.clone();
    }
    par(t, &active)
}

fn par(t: &Term, map: &BTreeMap<&Name, &Name>) -> Term {
    match t {
        Term::Var(y) => match map.get(y) {
            Some(v) => Term::Var((*v).clone()),
            None => t.clone(),
        },
        Term::Abs(y, b) => {
            let (y2, b2, inner) = scope_binder(y, b, map);
            Term::Abs(y2, Box::new(par(&b2, &inner)))
        }
        Term::App(f, a) => Term::App(Box::new(par(f, map)), Box::new(par(a, map))),
        Term::Es(b, y, c) => {
            let c2 = par(c, map);
            let (y2, b2, inner) = scope_binder(y, b, map);
            Term::Es(Box::new(par(&b2, &inner)), y2, Box::new(c2))
        }
    }
}

/// Restrict the map under a binder: drop the shadowed entry and rename the
/// binder if it would capture a codomain name relevant to the body.
fn scope_binder<'a>(
    y: &'a Name,
    body: &Term,
    map: &BTreeMap<&'a Name, &'a Name>,
) -> (Name, Term, BTreeMap<&'a Name, &'a Name>) {
    let mut inner: BTreeMap<&Name, &Name> = map
        .iter()
        .filter(|(k, _)| **k != y)
        .map(|(k, v)| (*k, *v))
        .collect();
    inner.retain(|k, _| is_free_in(k, body));
    let captures = inner.values().any(|v| *v == y);
    if captures {
        let mut avoid = body.all_names();
        avoid.extend(inner.values().map(|v| (*v).clone()));
        avoid.extend(inner.keys().map(|k| (*k).clone()));
        let y2 = freshen_name(y, &avoid);
        (y2.clone(), rename(body, y, &y2), inner)
    } else {
        (y.clone(), body.clone(), inner)
    }
}
