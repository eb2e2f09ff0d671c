//! Reduction engines for the positive calculus and its explicit variant.
//!
//! Both calculi share the anchor discipline: evaluation contexts are runs
//! of ES frames, so redex anchors live on the spine. The positive macro
//! step `eme+` concatenates a useful exponential step, the multiplicative
//! step it creates, and the meta-level renaming of the lambda binder; the
//! explicit variant splits it into `e+` and `m+` via the explicit beta
//! frame `t[x<-(\y.u)z]`.

use std::collections::BTreeSet;

use crate::syntax::{
    freshen_name, fv, is_explicit_positive, is_free_in, is_positive, rename, subst_value, Name,
    Path, Step, Term,
};
use crate::vsc::redex::{stale, Redex, RuleLabel, StepError};

/// All `eme+` and `gc+` instances of a positive term, deterministic order.
pub fn enumerate_opos(t: &Term) -> Result<Vec<Redex>, StepError> {
    if !is_positive(t) {
        return Err(StepError::WrongGrammar("positive"));
    }
    let mut out = Vec::new();
    spine_anchors(t, |anchor, node| {
        let Term::Es(body, y, content) = node else {
            return;
        };
        if let Term::Abs(_, _) = &**content {
            for occ in applied_frames(body, y) {
                out.push(Redex::with_occurrence(
                    RuleLabel::EmePlus,
                    anchor.clone(),
                    occ,
                ));
            }
            if !is_free_in(y, body) {
                out.push(Redex::at(RuleLabel::GcPlus, anchor.clone()));
            }
        }
    });
    out.sort_by_key(|a| a.order_key());
    Ok(out)
}

/// All `m+`, `e+` and `gc+` instances of an explicit-positive term.
pub fn enumerate_oxpos(t: &Term) -> Result<Vec<Redex>, StepError> {
    if !is_explicit_positive(t) {
        return Err(StepError::WrongGrammar("explicit-positive"));
    }
    let mut out = Vec::new();
    spine_anchors(t, |anchor, node| {
        let Term::Es(body, y, content) = node else {
            return;
        };
        match &**content {
            Term::App(f, _) if matches!(**f, Term::Abs(_, _)) => {
                out.push(Redex::at(RuleLabel::MPlus, anchor.clone()));
            }
            Term::Abs(_, _) => {
                for occ in applied_frames(body, y) {
                    out.push(Redex::with_occurrence(
                        RuleLabel::EPlus,
                        anchor.clone(),
                        occ,
                    ));
                }
                if !is_free_in(y, body) {
                    out.push(Redex::at(RuleLabel::GcPlus, anchor.clone()));
                }
            }
            _ => {}
        }
    });
    out.sort_by_key(|a| a.order_key());
    Ok(out)
}

fn spine_anchors(t: &Term, mut f: impl FnMut(&Path, &Term)) {
    let mut pos = Path::root();
    let mut cur = t;
    loop {
        f(&pos, cur);
        match cur {
            Term::Es(b, _, _) => {
                pos = pos.child(Step::EsBody);
                cur = b;
            }
            _ => break,
        }
    }
}

/// Frames `[x <- y z]` on the spine of `body` whose function variable is
/// the anchor binder `y`, not shadowed in between. Paths are relative to
/// the anchor node.
fn applied_frames(body: &Term, y: &Name) -> Vec<Path> {
    let mut out = Vec::new();
    let mut steps = vec![Step::EsBody];
    let mut cur = body;
    while let Term::Es(b, binder, content) = cur {
        if let Term::App(f, a) = &**content {
            if matches!(**a, Term::Var(_)) {
                if let Term::Var(fun) = &**f {
                    if fun == y {
                        out.push(Path(steps.clone()));
                    }
                }
            }
        }
        if binder == y {
            break; // deeper occurrences are shadowed
        }
        steps.push(Step::EsBody);
        cur = b;
    }
    out
}

pub fn apply_opos(t: &Term, r: &Redex) -> Result<Term, StepError> {
    if !is_positive(t) {
        return Err(StepError::WrongGrammar("positive"));
    }
    let node = t
        .get(&r.anchor)
        .ok_or_else(|| stale(format!("no subterm at {}", r.anchor)))?;
    if !r.anchor.is_spine() {
        return Err(stale("anchor is not an evaluation-context position"));
    }
    let contracted = match r.label {
        RuleLabel::EmePlus => {
            let occ = r
                .occurrence
                .as_ref()
                .ok_or_else(|| stale("missing target frame"))?;
            contract_eme_plus(node, occ)?
        }
        RuleLabel::GcPlus => contract_gc_plus(node)?,
        other => return Err(stale(format!("{other} is not a positive rule"))),
    };
    Ok(t.with_replaced(&r.anchor, contracted)
        .expect("anchor path checked"))
}

pub fn apply_oxpos(t: &Term, r: &Redex) -> Result<Term, StepError> {
    if !is_explicit_positive(t) {
        return Err(StepError::WrongGrammar("explicit-positive"));
    }
    let node = t
        .get(&r.anchor)
        .ok_or_else(|| stale(format!("no subterm at {}", r.anchor)))?;
    if !r.anchor.is_spine() {
        return Err(stale("anchor is not an evaluation-context position"));
    }
    let contracted = match r.label {
        RuleLabel::MPlus => contract_m_plus(node)?,
        RuleLabel::EPlus => {
            let occ = r
                .occurrence
                .as_ref()
                .ok_or_else(|| stale("missing target frame"))?;
            contract_e_plus(node, occ)?
        }
        RuleLabel::GcPlus => contract_gc_plus(node)?,
        other => return Err(stale(format!("{other} is not an explicit-positive rule"))),
    };
    Ok(t.with_replaced(&r.anchor, contracted)
        .expect("anchor path checked"))
}

/// t[x <- (\y.E<z>) w]  ->  E< t{x<-z} >{y<-w}
///
/// The head variable z is captured by E's binders on purpose (that is the
/// reduction at a distance). Only the occurrences created by {x<-z} may
/// be captured: E's binders that clash with other free variables of t --
/// including a binder spelled like z when t already has a free z of its
/// own -- are renamed first, and the head is read off afterwards.
fn contract_m_plus(node: &Term) -> Result<Term, StepError> {
    let Term::Es(t_body, x, content) = node else {
        return Err(stale("m+ anchor is not an explicit substitution"));
    };
    let Term::App(f, a) = &**content else {
        return Err(stale("m+ content is not an explicit beta frame"));
    };
    let (Term::Abs(y, lam_body), Term::Var(w_arg)) = (&**f, &**a) else {
        return Err(stale("m+ content is not (\\y.u) z"));
    };

    // The lambda binder must not collide with free variables of the body
    // placed under it, nor be renamed into them.
    let (y, lam_body) = if is_free_in(y, t_body) {
        let mut avoid = node.all_names();
        avoid.insert(w_arg.clone());
        let y2 = freshen_name(y, &avoid);
        (y2.clone(), rename(lam_body, y, &y2))
    } else {
        (y.clone(), (**lam_body).clone())
    };

    let mut protect = fv(t_body);
    protect.remove(x);
    let lam_body = freshen_spine_binders(&lam_body, &protect);
    let head = spine_head(&lam_body)
        .ok_or_else(|| stale("lambda body is not an evaluation context over a variable"))?;
    let tm = subst_value(t_body, x, &Term::Var(head.clone())).expect("variable is a value");
    let plugged = plug_spine_head(&lam_body, &head, tm)?;
    Ok(rename(&plugged, &y, w_arg))
}

fn spine_head(t: &Term) -> Option<Name> {
    let mut cur = t;
    loop {
        match cur {
            Term::Es(b, _, _) => cur = b,
            Term::Var(x) => return Some(x.clone()),
            _ => return None,
        }
    }
}

/// Rename every spine binder that occurs in `protect`, so that plugging a
/// term with those free variables under the spine cannot capture them.
fn freshen_spine_binders(t: &Term, protect: &BTreeSet<Name>) -> Term {
    match t {
        Term::Es(b, y, c) => {
            if protect.contains(y) {
                let mut avoid = t.all_names();
                avoid.extend(protect.iter().cloned());
                let y2 = freshen_name(y, &avoid);
                let b2 = rename(b, y, &y2);
                Term::Es(Box::new(freshen_spine_binders(&b2, protect)), y2, c.clone())
            } else {
                Term::Es(
                    Box::new(freshen_spine_binders(b, protect)),
                    y.clone(),
                    c.clone(),
                )
            }
        }
        core => core.clone(),
    }
}

/// Replace the head variable of an explicit-positive spine by `inner`.
/// The spine binders are assumed already disjoint from the free variables
/// of `inner`, except for the head itself, which is captured on purpose.
fn plug_spine_head(t: &Term, head: &Name, inner: Term) -> Result<Term, StepError> {
    match t {
        Term::Es(b, y, c) => Ok(Term::Es(
            Box::new(plug_spine_head(b, head, inner)?),
            y.clone(),
            c.clone(),
        )),
        Term::Var(x) if x == head => Ok(inner),
        _ => Err(stale("spine head changed under renaming")),
    }
}

/// E< t[x <- y z] >[y <- \w.u]  ->  E< t[x <- (\w.u) z] >[y <- \w.u]
fn contract_e_plus(node: &Term, frame: &Path) -> Result<Term, StepError> {
    let (body2, y, content) = prepare_exponential(node)?;
    let new_body = copy_abs_into_frame(&body2, &frame.0[1..], &y, &content)?;
    Ok(Term::Es(Box::new(new_body), y, Box::new(content)))
}

/// The shared checks for `e+` and `eme+`: label-independent hygiene of the
/// anchor binder against the shared abstraction.
fn prepare_exponential(node: &Term) -> Result<(Term, Name, Term), StepError> {
    let Term::Es(body, y, content) = node else {
        return Err(stale("exponential anchor is not an explicit substitution"));
    };
    let Term::Abs(_, _) = &**content else {
        return Err(stale("shared content is not an abstraction"));
    };
    if is_free_in(y, content) {
        let avoid = node.all_names();
        let y2 = freshen_name(y, &avoid);
        Ok((rename(body, y, &y2), y2, (**content).clone()))
    } else {
        Ok(((**body).clone(), y.clone(), (**content).clone()))
    }
}

/// Walk `steps` down the spine of `t` and rewrite the target frame
/// `[x <- y z]` into `[x <- (\w.u) z]`, renaming passed binders that
/// would capture the copied abstraction.
fn copy_abs_into_frame(t: &Term, steps: &[Step], y: &Name, abs: &Term) -> Result<Term, StepError> {
    let Term::Es(b, binder, content) = t else {
        return Err(stale("target frame path leaves the spine"));
    };
    if steps.is_empty() {
        let Term::App(f, a) = &**content else {
            return Err(stale("target frame does not share an application"));
        };
        let (Term::Var(fun), Term::Var(_)) = (&**f, &**a) else {
            return Err(stale("target frame is not [x <- y z]"));
        };
        if fun != y {
            return Err(stale("target function variable is not the anchor binder"));
        }
        return Ok(Term::Es(
            b.clone(),
            binder.clone(),
            Box::new(Term::App(Box::new(abs.clone()), a.clone())),
        ));
    }
    if steps[0] != Step::EsBody {
        return Err(stale("target frame path leaves the spine"));
    }
    if binder == y {
        return Err(stale("anchor binder shadowed above the target frame"));
    }
    if is_free_in(binder, abs) {
        let mut avoid = t.all_names();
        avoid.extend(abs.all_names());
        let b2name = freshen_name(binder, &avoid);
        let b2 = rename(b, binder, &b2name);
        Ok(Term::Es(
            Box::new(copy_abs_into_frame(&b2, &steps[1..], y, abs)?),
            b2name,
            content.clone(),
        ))
    } else {
        Ok(Term::Es(
            Box::new(copy_abs_into_frame(b, &steps[1..], y, abs)?),
            binder.clone(),
            content.clone(),
        ))
    }
}

/// E< t[x <- y z] >[y <- \w.E'<w'>]  ->  E< E'< t{x<-w'} >{w<-z} >[y <- \w.E'<w'>]
///
/// The macro step of the positive calculus, built directly rather than by
/// composing the explicit-variant primitives; the decomposition is a
/// cross-engine property checked by the harness.
fn contract_eme_plus(node: &Term, frame: &Path) -> Result<Term, StepError> {
    let (body2, y, content) = prepare_exponential(node)?;
    let new_body = eme_walk(&body2, &frame.0[1..], &y, &content)?;
    Ok(Term::Es(Box::new(new_body), y, Box::new(content)))
}

fn eme_walk(t: &Term, steps: &[Step], y: &Name, abs: &Term) -> Result<Term, StepError> {
    let Term::Es(b, binder, content) = t else {
        return Err(stale("target frame path leaves the spine"));
    };
    if steps.is_empty() {
        let Term::App(f, a) = &**content else {
            return Err(stale("target frame does not share an application"));
        };
        let (Term::Var(fun), Term::Var(z_arg)) = (&**f, &**a) else {
            return Err(stale("target frame is not [x <- y z]"));
        };
        if fun != y {
            return Err(stale("target function variable is not the anchor binder"));
        }
        let Term::Abs(w, u) = abs else {
            return Err(stale("shared content is not an abstraction"));
        };
        // Inline multiplicative step on the freshly created beta frame.
        let (w, u) = if is_free_in(w, b) {
            let mut avoid = t.all_names();
            avoid.extend(abs.all_names());
            avoid.insert(z_arg.clone());
            let w2 = freshen_name(w, &avoid);
            (w2.clone(), rename(u, w, &w2))
        } else {
            (w.clone(), (**u).clone())
        };
        let mut protect = fv(b);
        protect.remove(binder);
        let u = freshen_spine_binders(&u, &protect);
        let head = spine_head(&u)
            .ok_or_else(|| stale("lambda body is not an evaluation context over a variable"))?;
        let tm = subst_value(b, binder, &Term::Var(head.clone())).expect("variable is a value");
        let plugged = plug_spine_head(&u, &head, tm)?;
        return Ok(rename(&plugged, &w, z_arg));
    }
    if steps[0] != Step::EsBody {
        return Err(stale("target frame path leaves the spine"));
    }
    if binder == y {
        return Err(stale("anchor binder shadowed above the target frame"));
    }
    if is_free_in(binder, abs) {
        let mut avoid = t.all_names();
        avoid.extend(abs.all_names());
        let b2name = freshen_name(binder, &avoid);
        let b2 = rename(b, binder, &b2name);
        Ok(Term::Es(
            Box::new(eme_walk(&b2, &steps[1..], y, abs)?),
            b2name,
            content.clone(),
        ))
    } else {
        Ok(Term::Es(
            Box::new(eme_walk(b, &steps[1..], y, abs)?),
            binder.clone(),
            content.clone(),
        ))
    }
}

/// t[x <- \y.u] -> t when x does not occur in t.
fn contract_gc_plus(node: &Term) -> Result<Term, StepError> {
    let Term::Es(body, x, content) = node else {
        return Err(stale("gc+ anchor is not an explicit substitution"));
    };
    if !matches!(&**content, Term::Abs(_, _)) {
        return Err(stale("gc+ content is not an abstraction"));
    }
    if is_free_in(x, body) {
        return Err(stale("bound variable still occurs in the body"));
    }
    Ok((**body).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_term};

    fn t(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    const POS_OMEGA: &str = "x[x <- y y][y <- \\z. w[w <- z z]]";
    const XPOS_OMEGA: &str = "w[w <- (\\x. y[y <- x x]) z][z <- \\x. y[y <- x x]]";

    #[test]
    fn positive_omega_loops_in_one_macro_step() {
        let term = t(POS_OMEGA);
        let rs = enumerate_opos(&term).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].label, RuleLabel::EmePlus);
        let u = apply_opos(&term, &rs[0]).unwrap();
        assert!(
            alpha_eq(&u, &term),
            "got {}",
            crate::syntax::print_canonical(&u)
        );
    }

    #[test]
    fn explicit_omega_alternates_m_and_e() {
        let term = t(XPOS_OMEGA);
        let rs = enumerate_oxpos(&term).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].label, RuleLabel::MPlus);
        let u = apply_oxpos(&term, &rs[0]).unwrap();
        assert!(alpha_eq(&u, &t("w[w <- z z][z <- \\x. y[y <- x x]]")));

        let rs = enumerate_oxpos(&u).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].label, RuleLabel::EPlus);
        let v = apply_oxpos(&u, &rs[0]).unwrap();
        assert!(alpha_eq(&v, &term));
    }

    #[test]
    fn variables_are_normal() {
        assert!(enumerate_opos(&t("x")).unwrap().is_empty());
        assert!(enumerate_oxpos(&t("x")).unwrap().is_empty());
    }

    #[test]
    fn non_positive_inputs_are_rejected() {
        assert!(enumerate_opos(&t("x y")).is_err());
        assert!(enumerate_opos(&t(XPOS_OMEGA)).is_err());
        assert!(enumerate_oxpos(&t("x y")).is_err());
    }

    #[test]
    fn gc_plus_needs_absence() {
        let term = t("x[z <- \\y. y]");
        let rs = enumerate_oxpos(&term).unwrap();
        assert_eq!(
            rs.iter().map(|r| r.label).collect::<Vec<_>>(),
            vec![RuleLabel::GcPlus]
        );
        let u = apply_oxpos(&term, &rs[0]).unwrap();
        assert_eq!(u, t("x"));
        // x occurs: no gc
        let term = t("x[x <- \\y. y]");
        assert!(enumerate_oxpos(&term).unwrap().is_empty());
    }

    #[test]
    fn subtlety_three_chain() {
        // m+, e+, gc+ in sequence on the translated (\x.\y.y) z w
        let t0 = t("x'[x' <- y' w][y' <- (\\x. z'[z' <- \\y. y]) z]");
        let rs = enumerate_oxpos(&t0).unwrap();
        let m = rs.iter().find(|r| r.label == RuleLabel::MPlus).unwrap();
        let t1 = apply_oxpos(&t0, m).unwrap();
        assert!(alpha_eq(&t1, &t("x'[x' <- z' w][z' <- \\y. y]")));

        let rs = enumerate_oxpos(&t1).unwrap();
        let e = rs.iter().find(|r| r.label == RuleLabel::EPlus).unwrap();
        let t2 = apply_oxpos(&t1, e).unwrap();
        assert!(alpha_eq(&t2, &t("x'[x' <- (\\y. y) w][z' <- \\y. y]")));

        let rs = enumerate_oxpos(&t2).unwrap();
        let gc = rs.iter().find(|r| r.label == RuleLabel::GcPlus).unwrap();
        let t3 = apply_oxpos(&t2, gc).unwrap();
        assert!(alpha_eq(&t3, &t("x'[x' <- (\\y. y) w]")));
    }

    #[test]
    fn m_plus_captures_the_head_on_purpose() {
        // t[x <- (\y. z[z <- y y]) w]: the head z is bound by E itself
        let term = t("q[x <- (\\y. z[z <- y y]) w]");
        let rs = enumerate_oxpos(&term).unwrap();
        let m = rs.iter().find(|r| r.label == RuleLabel::MPlus).unwrap();
        let u = apply_oxpos(&term, m).unwrap();
        assert!(alpha_eq(&u, &t("q[z <- w w]")));
    }

    #[test]
    fn m_plus_head_capture_composes_with_renaming() {
        // v[v <- (\y. q[q <- y y]) q]: the head copy of v is captured by
        // E's binder q while the argument q stays free.
        let term = t("v[v <- (\\y. q[q <- y y]) q]");
        let rs = enumerate_oxpos(&term).unwrap();
        let m = rs.iter().find(|r| r.label == RuleLabel::MPlus).unwrap();
        let u = apply_oxpos(&term, m).unwrap();
        assert!(alpha_eq(&u, &t("q'[q' <- q q]")));
    }

    #[test]
    fn e_plus_renames_clashing_spine_binders() {
        // copying \w.z under the frame [z <- q q] binding its free z
        let term = t("x[x <- y z][z <- q q][y <- \\w. z]");
        let rs = enumerate_oxpos(&term).unwrap();
        let e = rs.iter().find(|r| r.label == RuleLabel::EPlus).unwrap();
        let u = apply_oxpos(&term, e).unwrap();
        // the copied \w.z must still see the outer z, so [z <- q q] is renamed
        assert!(alpha_eq(
            &u,
            &t("x[x <- (\\w. z) z'][z' <- q q][y <- \\w. z]")
        ));
    }

    #[test]
    fn shadowed_fun_vars_do_not_match() {
        // the inner [y <- ...] shadows the anchor binder: no e+ on the
        // deepest frame
        let term = t("x[x <- y q][y <- w w][y <- \\v. v]");
        let rs = enumerate_oxpos(&term).unwrap();
        assert!(rs.iter().all(|r| r.label != RuleLabel::EPlus));
    }
}
