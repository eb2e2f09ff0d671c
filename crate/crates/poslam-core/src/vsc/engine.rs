//! Redex enumeration and rule application for the open VSC.
//!
//! All rules are at a distance: the root patterns match through a
//! substitution context L, which is hoisted outside on contraction.
//! Binders are renamed on the fly whenever hoisting or replacement would
//! capture a free variable.

use std::collections::BTreeSet;

use crate::syntax::{
    freshen_name, fv, is_answer, is_free_in, rename, spine_core, Name, Path, Step, Term,
};

use super::redex::{stale, Redex, RuleLabel, StepError};
use super::useful::{classify_usefulness, UsefulnessVerdict};

/// Options for the plain VSC engine. With `vars_are_values = false`,
/// variables are removed from values: `e-var` and `gc-var` instances are
/// suppressed.
#[derive(Clone, Copy, Debug)]
pub struct VscOpts {
    pub vars_are_values: bool,
}

impl Default for VscOpts {
    fn default() -> Self {
        VscOpts {
            vars_are_values: true,
        }
    }
}

/// All rule instances of the open VSC, closed under open contexts, in the
/// deterministic order of [`Redex::order_key`].
pub fn enumerate_vsc(t: &Term, opts: VscOpts) -> Vec<Redex> {
    let mut out = Vec::new();
    collect(t, Path::root(), opts, &mut out);
    out.sort_by_key(|a| a.order_key());
    out
}

/// Core reduction: multiplicative, useful exponential and variable
/// exponential steps (no garbage collection, no non-useful steps).
/// Variables are values here, as in the full calculus.
pub fn enumerate_core(t: &Term) -> Vec<Redex> {
    enumerate_vsc(t, VscOpts::default())
        .into_iter()
        .filter(|r| match r.label {
            RuleLabel::M | RuleLabel::EVar => true,
            RuleLabel::EAbs => classify_usefulness(t, r) == UsefulnessVerdict::Useful,
            _ => false,
        })
        .collect()
}

fn collect(t: &Term, pos: Path, opts: VscOpts, out: &mut Vec<Redex>) {
    match t {
        Term::Var(_) | Term::Abs(_, _) => {}
        Term::App(f, a) => {
            if is_answer(f) {
                out.push(Redex::at(RuleLabel::M, pos.clone()));
            }
            collect(f, pos.child(Step::AppFun), opts, out);
            collect(a, pos.child(Step::AppArg), opts, out);
        }
        Term::Es(body, x, content) => {
            let value_label = match spine_core(content) {
                Term::Abs(_, _) => Some((RuleLabel::EAbs, RuleLabel::GcAbs)),
                Term::Var(_) if opts.vars_are_values => Some((RuleLabel::EVar, RuleLabel::GcVar)),
                _ => None,
            };
            if let Some((e_label, gc_label)) = value_label {
                for occ in open_free_occurrences(body, x) {
                    out.push(Redex::with_occurrence(e_label, pos.clone(), occ));
                }
                if !is_free_in(x, body) {
                    out.push(Redex::at(gc_label, pos.clone()));
                }
            }
            collect(body, pos.child(Step::EsBody), opts, out);
            collect(content, pos.child(Step::EsContent), opts, out);
        }
    }
}

/// Free occurrences of `x` in `t` that are out of all abstractions, in
/// pre-order.
pub fn open_free_occurrences(t: &Term, x: &Name) -> Vec<Path> {
    let mut out = Vec::new();
    fn go(t: &Term, x: &Name, pos: Path, out: &mut Vec<Path>) {
        match t {
            Term::Var(y) => {
                if y == x {
                    out.push(pos);
                }
            }
            Term::Abs(_, _) => {}
            Term::App(f, a) => {
                go(f, x, pos.child(Step::AppFun), out);
                go(a, x, pos.child(Step::AppArg), out);
            }
            Term::Es(b, y, c) => {
                if y != x {
                    go(b, x, pos.child(Step::EsBody), out);
                }
                go(c, x, pos.child(Step::EsContent), out);
            }
        }
    }
    go(t, x, Path::root(), &mut out);
    out
}

/// Apply a redex previously enumerated from `t`. The pattern is
/// re-matched first; a redex that no longer matches fails loudly.
pub fn apply_vsc(t: &Term, r: &Redex) -> Result<Term, StepError> {
    if !r.anchor.is_open() {
        return Err(stale("anchor under an abstraction"));
    }
    let node = t
        .get(&r.anchor)
        .ok_or_else(|| stale(format!("no subterm at {}", r.anchor)))?;
    let contracted = match r.label {
        RuleLabel::M => contract_m(node)?,
        RuleLabel::EAbs | RuleLabel::EVar => {
            let occ = r
                .occurrence
                .as_ref()
                .ok_or_else(|| stale("missing occurrence"))?;
            contract_e(node, occ, r.label)?
        }
        RuleLabel::EU1 | RuleLabel::EU2 => {
            super::useful::validate_useful_alt(t, r)?;
            let occ = r
                .occurrence
                .as_ref()
                .ok_or_else(|| stale("missing occurrence"))?;
            contract_e(node, occ, RuleLabel::EAbs)?
        }
        RuleLabel::GcAbs | RuleLabel::GcVar => contract_gc(node, r.label)?,
        other => return Err(stale(format!("{other} is not a VSC rule"))),
    };
    Ok(t.with_replaced(&r.anchor, contracted)
        .expect("anchor path checked"))
}

/// Walk the ES spine of `content`, renaming any frame binder that occurs
/// in `protect` (the free variables of the material moved under the
/// spine), and apply `f` to the final core.
fn plug_spine<F>(content: &Term, protect: &BTreeSet<Name>, f: F) -> Result<Term, StepError>
where
    F: FnOnce(&Term) -> Result<Term, StepError>,
{
    match content {
        Term::Es(b, y, c) => {
            if protect.contains(y) {
                let mut avoid = content.all_names();
                avoid.extend(protect.iter().cloned());
                let y2 = freshen_name(y, &avoid);
                let b2 = rename(b, y, &y2);
                Ok(Term::Es(
                    Box::new(plug_spine(&b2, protect, f)?),
                    y2,
                    c.clone(),
                ))
            } else {
                Ok(Term::Es(
                    Box::new(plug_spine(b, protect, f)?),
                    y.clone(),
                    c.clone(),
                ))
            }
        }
        core => f(core),
    }
}

/// L<\x.t> u -> L<t[x<-u]>, hoisting L over the new ES.
fn contract_m(node: &Term) -> Result<Term, StepError> {
    let Term::App(fun, arg) = node else {
        return Err(stale("multiplicative anchor is not an application"));
    };
    if !is_answer(fun) {
        return Err(stale("function part is not an answer"));
    }
    let protect = fv(arg);
    plug_spine(fun, &protect, |core| match core {
        Term::Abs(x, body) => Ok(Term::Es(body.clone(), x.clone(), Box::new((**arg).clone()))),
        _ => Err(stale("answer core is not an abstraction")),
    })
}

/// O<<x>>[x<-L<v>] -> L< O<<v>>[x<-v] >: replace one occurrence, keep the
/// sharing, hoist L outside.
fn contract_e(node: &Term, occ: &Path, label: RuleLabel) -> Result<Term, StepError> {
    let Term::Es(body, x, content) = node else {
        return Err(stale("exponential anchor is not an explicit substitution"));
    };
    match (spine_core(content), label) {
        (Term::Abs(_, _), RuleLabel::EAbs) | (Term::Var(_), RuleLabel::EVar) => {}
        _ => return Err(stale("shared value does not match the rule label")),
    }

    // The ES binder must not capture free variables of the content once
    // the copy and the kept ES move under the hoisted L.
    let (x, body) = if is_free_in(x, content) {
        let avoid = node.all_names();
        let x2 = freshen_name(x, &avoid);
        (x2.clone(), rename(body, x, &x2))
    } else {
        (x.clone(), (**body).clone())
    };

    let mut protect = fv(&body);
    protect.insert(x.clone());
    plug_spine(content, &protect, |core| {
        let new_body = replace_occurrence(&body, occ, core, &x)?;
        Ok(Term::Es(
            Box::new(new_body),
            x.clone(),
            Box::new(core.clone()),
        ))
    })
}

/// Replace the variable occurrence at `occ` in `body` by the value `v`,
/// renaming ES binders along the path that would capture fv(v).
fn replace_occurrence(body: &Term, occ: &Path, v: &Term, x: &Name) -> Result<Term, StepError> {
    let fv_v = fv(v);
    fn go(
        t: &Term,
        steps: &[Step],
        v: &Term,
        fv_v: &BTreeSet<Name>,
        x: &Name,
    ) -> Result<Term, StepError> {
        let Some((first, rest)) = steps.split_first() else {
            return match t {
                Term::Var(y) if y == x => Ok(v.clone()),
                _ => Err(stale("occurrence is not the bound variable")),
            };
        };
        Ok(match (t, first) {
            (Term::App(f, a), Step::AppFun) => {
                Term::App(Box::new(go(f, rest, v, fv_v, x)?), a.clone())
            }
            (Term::App(f, a), Step::AppArg) => {
                Term::App(f.clone(), Box::new(go(a, rest, v, fv_v, x)?))
            }
            (Term::Es(b, y, c), Step::EsBody) => {
                if y == x {
                    return Err(stale("occurrence shadowed by an inner binder"));
                }
                if fv_v.contains(y) {
                    let mut avoid = t.all_names();
                    avoid.extend(fv_v.iter().cloned());
                    avoid.insert(x.clone());
                    let y2 = freshen_name(y, &avoid);
                    let b2 = rename(b, y, &y2);
                    Term::Es(Box::new(go(&b2, rest, v, fv_v, x)?), y2, c.clone())
                } else {
                    Term::Es(Box::new(go(b, rest, v, fv_v, x)?), y.clone(), c.clone())
                }
            }
            (Term::Es(b, y, c), Step::EsContent) => {
                Term::Es(b.clone(), y.clone(), Box::new(go(c, rest, v, fv_v, x)?))
            }
            (_, Step::AbsBody) => return Err(stale("occurrence under an abstraction")),
            _ => return Err(stale("occurrence path does not match the term")),
        })
    }
    go(body, &occ.0, v, &fv_v, x)
}

/// t[x<-L<v>] -> L<t> when x does not occur free in t.
fn contract_gc(node: &Term, label: RuleLabel) -> Result<Term, StepError> {
    let Term::Es(body, x, content) = node else {
        return Err(stale("gc anchor is not an explicit substitution"));
    };
    match (spine_core(content), label) {
        (Term::Abs(_, _), RuleLabel::GcAbs) | (Term::Var(_), RuleLabel::GcVar) => {}
        _ => return Err(stale("shared value does not match the rule label")),
    }
    if is_free_in(x, body) {
        return Err(stale("bound variable still occurs in the body"));
    }
    let protect = fv(body);
    plug_spine(content, &protect, |core| match core {
        Term::Abs(_, _) | Term::Var(_) => Ok((**body).clone()),
        _ => Err(stale("gc core is not a value")),
    })
}
