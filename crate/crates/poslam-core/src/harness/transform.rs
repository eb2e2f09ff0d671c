//! Constructive trace transformations: garbage-collection postponement,
//! core factorization, and the simulation of core sequences in the
//! explicit positive calculus.
//!
//! Each transformation rebuilds the trace by iterated local swaps (or, for
//! the simulation, step-by-step search for the image step) and verifies
//! endpoints as it goes. A failing swap indicates an engine bug and is a
//! loud error, never silently skipped.

use thiserror::Error;

use crate::syntax::{alpha_eq, print_canonical, NameGen, Term};
use crate::translate::translate;
use crate::vsc::{
    classify_usefulness, context_class, is_core_normal, ContextClass, Redex, RuleLabel,
    UsefulnessVerdict,
};

use super::calculus::Calculus;
use super::trace::Trace;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("local swap failed at step {index}: {reason} (term: {term})")]
    SwapFailed {
        index: usize,
        reason: String,
        term: String,
    },
    #[error("trace is not in the expected fragment: {0}")]
    WrongFragment(String),
    #[error("simulation failed at step {index} ({label}): {reason}")]
    SimulationFailed {
        index: usize,
        label: RuleLabel,
        reason: String,
    },
    #[error("engine error: {0}")]
    Engine(#[from] crate::vsc::StepError),
}

fn is_gc(label: RuleLabel) -> bool {
    label.is_gc()
}

/// Postpone every garbage-collection step to the end of the trace.
/// Returns the gc-free prefix trace `e` and the gc-only suffix trace `f`
/// with the same endpoints and, for every non-gc label, the same per-label
/// counters as the input.
pub fn postpone_gc(d: &Trace) -> Result<(Trace, Trace), TransformError> {
    match d.calculus {
        Calculus::Vsc { .. } | Calculus::OXPos => {}
        other => {
            return Err(TransformError::WrongFragment(format!(
                "gc postponement applies to vsc or oxpos traces, not {other}"
            )))
        }
    }
    let mut steps: Vec<(Redex, Term)> = d
        .steps
        .iter()
        .map(|s| (s.redex.clone(), s.term.clone()))
        .collect();
    let calculus = d.calculus;

    while let Some(i) = (0..steps.len().saturating_sub(1))
        .find(|&i| is_gc(steps[i].0.label) && !is_gc(steps[i + 1].0.label))
    {
        let source = if i == 0 {
            d.start.clone()
        } else {
            steps[i - 1].1.clone()
        };
        let target = steps[i + 1].1.clone();
        let gc_label = steps[i].0.label;
        let a_label = steps[i + 1].0.label;
        let swapped = swap_pair(calculus, &source, &target, a_label, gc_label)?;
        let Some((ra, ta, rg, tg)) = swapped else {
            return Err(TransformError::SwapFailed {
                index: i,
                reason: format!("no {a_label} then {gc_label} route rejoins the trace"),
                term: print_canonical(&source),
            });
        };
        steps[i] = (ra, ta);
        steps[i + 1] = (rg, tg);
        recompute_suffix(calculus, &mut steps, i + 2)?;
    }

    let split = steps
        .iter()
        .position(|(r, _)| is_gc(r.label))
        .unwrap_or(steps.len());
    let (prefix, suffix) = rebuild_split(d, &steps, split)?;

    // counter identities of the postponement
    for (label, n) in d.counters() {
        let m = if is_gc(label) {
            suffix.count(label)
        } else {
            prefix.count(label)
        };
        if m != n {
            return Err(TransformError::WrongFragment(format!(
                "counter for {label} changed: {n} -> {m}"
            )));
        }
    }
    if !alpha_eq(suffix.end(), d.end()) {
        return Err(TransformError::WrongFragment("endpoint changed".into()));
    }
    Ok((prefix, suffix))
}

/// Search one `a`-then-`gc` route from `source` to `target`.
#[allow(clippy::type_complexity)]
fn swap_pair(
    calculus: Calculus,
    source: &Term,
    target: &Term,
    a_label: RuleLabel,
    gc_label: RuleLabel,
) -> Result<Option<(Redex, Term, Redex, Term)>, TransformError> {
    for ra in calculus.enumerate(source)? {
        if ra.label != a_label {
            continue;
        }
        let ta = calculus.apply(source, &ra)?;
        for rg in calculus.enumerate(&ta)? {
            if rg.label != gc_label {
                continue;
            }
            let tg = calculus.apply(&ta, &rg)?;
            if alpha_eq(&tg, target) {
                return Ok(Some((ra, ta, rg, tg)));
            }
        }
    }
    Ok(None)
}

/// Re-apply the stored redexes from `from` on, refreshing the stored
/// terms (local swaps may produce alpha-variants of the old intermediate
/// terms).
fn recompute_suffix(
    calculus: Calculus,
    steps: &mut [(Redex, Term)],
    from: usize,
) -> Result<(), TransformError> {
    for i in from..steps.len() {
        let source = steps[i - 1].1.clone();
        let t = calculus.apply(&source, &steps[i].0)?;
        steps[i].1 = t;
    }
    Ok(())
}

fn rebuild_split(
    d: &Trace,
    steps: &[(Redex, Term)],
    split: usize,
) -> Result<(Trace, Trace), TransformError> {
    let mut prefix = Trace::new(d.calculus, d.start.clone());
    for (r, _) in &steps[..split] {
        prefix.push(r.clone())?;
    }
    let mut suffix = Trace::new(d.calculus, prefix.end().clone());
    for (r, _) in &steps[split..] {
        suffix.push(r.clone())?;
    }
    Ok((prefix, suffix))
}

fn core_verdict(src: &Term, r: &Redex) -> Result<CoreKind, TransformError> {
    Ok(match r.label {
        RuleLabel::M => CoreKind::Core,
        RuleLabel::EVar => CoreKind::Core,
        RuleLabel::EAbs => match classify_usefulness(src, r) {
            UsefulnessVerdict::Useful => CoreKind::Core,
            UsefulnessVerdict::NonUseful => CoreKind::NonUseful,
            UsefulnessVerdict::Unclassified => {
                return Err(TransformError::WrongFragment(
                    "e-abs step with no usefulness verdict".into(),
                ))
            }
        },
        other => {
            return Err(TransformError::WrongFragment(format!(
                "factorization expects gc-free vsc traces, found {other}"
            )))
        }
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum CoreKind {
    Core,
    NonUseful,
}

/// Factorize a gc-free VSC trace into a core prefix followed by a
/// non-useful suffix, preserving the multiplicative step count and the
/// endpoints. Implements the three local swap shapes, including the
/// two-step diagram where a non-useful step over a useful one reorders
/// into variable-exponential, useful, non-useful.
pub fn factorize_core(d: &Trace) -> Result<Trace, TransformError> {
    if !matches!(d.calculus, Calculus::Vsc { .. }) {
        return Err(TransformError::WrongFragment(
            "factorization applies to vsc traces".into(),
        ));
    }
    if d.steps.iter().any(|s| is_gc(s.redex.label)) {
        return Err(TransformError::WrongFragment(
            "factorization expects gc-free traces; postpone gc first".into(),
        ));
    }
    let calculus = d.calculus;
    let mut steps: Vec<(Redex, Term)> = d
        .steps
        .iter()
        .map(|s| (s.redex.clone(), s.term.clone()))
        .collect();

    loop {
        // Find the rightmost non-useful step immediately followed by a
        // core step. Rightmost matters for termination: the two-step swap
        // inserts core steps behind the moving non-useful step, so the
        // core-after counts of the non-useful steps, read right to left,
        // decrease lexicographically.
        let mut found = None;
        for i in (0..steps.len().saturating_sub(1)).rev() {
            let src_i = if i == 0 {
                d.start.clone()
            } else {
                steps[i - 1].1.clone()
            };
            let k1 = core_verdict(&src_i, &steps[i].0)?;
            let k2 = core_verdict(&steps[i].1, &steps[i + 1].0)?;
            if k1 == CoreKind::NonUseful && k2 == CoreKind::Core {
                found = Some((i, src_i));
                break;
            }
        }
        let Some((i, source)) = found else { break };
        let target = steps[i + 1].1.clone();
        let core_label = steps[i + 1].0.label;

        if let Some(new_steps) = factor_swap_one(calculus, &source, &target, core_label)? {
            steps.splice(i..=i + 1, new_steps);
        } else if let Some(new_steps) = factor_swap_two(calculus, &source, &target)? {
            steps.splice(i..=i + 1, new_steps);
        } else {
            return Err(TransformError::SwapFailed {
                index: i,
                reason: "no core-first route rejoins the trace".into(),
                term: print_canonical(&source),
            });
        }
        recompute_suffix(calculus, &mut steps, i + 1)?;
    }

    let mut out = Trace::new(d.calculus, d.start.clone());
    for (r, _) in &steps {
        out.push(r.clone())?;
    }
    if out.count(RuleLabel::M) != d.count(RuleLabel::M) {
        return Err(TransformError::WrongFragment(
            "multiplicative step count changed".into(),
        ));
    }
    if !alpha_eq(out.end(), d.end()) {
        return Err(TransformError::WrongFragment("endpoint changed".into()));
    }
    Ok(out)
}

/// One-step shape: non-useful . core  ->  core . non-useful.
fn factor_swap_one(
    calculus: Calculus,
    source: &Term,
    target: &Term,
    core_label: RuleLabel,
) -> Result<Option<Vec<(Redex, Term)>>, TransformError> {
    for rc in calculus.enumerate(source)? {
        if rc.label != core_label || core_verdict(source, &rc)? != CoreKind::Core {
            continue;
        }
        let tc = calculus.apply(source, &rc)?;
        for rn in calculus.enumerate(&tc)? {
            if rn.label != RuleLabel::EAbs || core_verdict(&tc, &rn)? != CoreKind::NonUseful {
                continue;
            }
            let tn = calculus.apply(&tc, &rn)?;
            if alpha_eq(&tn, target) {
                return Ok(Some(vec![(rc, tc), (rn, tn)]));
            }
        }
    }
    Ok(None)
}

/// Two-step shape: non-useful . useful  ->  e-var . useful . non-useful.
fn factor_swap_two(
    calculus: Calculus,
    source: &Term,
    target: &Term,
) -> Result<Option<Vec<(Redex, Term)>>, TransformError> {
    for rv in calculus.enumerate(source)? {
        if rv.label != RuleLabel::EVar {
            continue;
        }
        let tv = calculus.apply(source, &rv)?;
        for ru in calculus.enumerate(&tv)? {
            if ru.label != RuleLabel::EAbs || core_verdict(&tv, &ru)? != CoreKind::Core {
                continue;
            }
            let tu = calculus.apply(&tv, &ru)?;
            for rn in calculus.enumerate(&tu)? {
                if rn.label != RuleLabel::EAbs || core_verdict(&tu, &rn)? != CoreKind::NonUseful {
                    continue;
                }
                let tn = calculus.apply(&tu, &rn)?;
                if alpha_eq(&tn, target) {
                    return Ok(Some(vec![(rv, tv), (ru, tu), (rn, tn)]));
                }
            }
        }
    }
    Ok(None)
}

/// Map a core trace into the explicit positive calculus through the
/// translation: multiplicative steps become one `m+` step or, when an
/// applied answer is created under a useful context, the `m+ e+ gc+`
/// chain; useful exponential steps become one `e+` step; variable
/// exponential steps are absorbed.
pub fn simulate_core(d: &Trace) -> Result<Trace, TransformError> {
    if !matches!(d.calculus, Calculus::Vsc { .. } | Calculus::VscCore) {
        return Err(TransformError::WrongFragment(
            "simulation applies to core vsc traces".into(),
        ));
    }
    let start_pos = translate(&d.start, &mut NameGen::new());
    let mut out = Trace::new(Calculus::OXPos, start_pos);

    for (i, step) in d.steps.iter().enumerate() {
        let src = d.source_of(i);
        let target = translate(&step.term, &mut NameGen::new());
        match step.redex.label {
            RuleLabel::EVar => {
                if !alpha_eq(out.end(), &target) {
                    return Err(TransformError::SimulationFailed {
                        index: i,
                        label: RuleLabel::EVar,
                        reason: "variable exponential step was not absorbed".into(),
                    });
                }
            }
            RuleLabel::EAbs => {
                if core_verdict(src, &step.redex)? != CoreKind::Core {
                    return Err(TransformError::WrongFragment(
                        "simulation expects a core trace, found a non-useful step".into(),
                    ));
                }
                let found = find_step(&mut out, &[RuleLabel::EPlus], &target)?;
                if !found {
                    return Err(TransformError::SimulationFailed {
                        index: i,
                        label: RuleLabel::EAbs,
                        reason: "no e+ step reaches the translated reduct".into(),
                    });
                }
            }
            RuleLabel::M => {
                // Predict the case split: does the root step create an
                // answer under a useful context?
                let contracted = step.term.get(&step.redex.anchor).ok_or_else(|| {
                    TransformError::SimulationFailed {
                        index: i,
                        label: RuleLabel::M,
                        reason: "anchor disappeared from the reduct".into(),
                    }
                })?;
                let creates_answer = crate::syntax::is_answer(contracted);
                let ctx_useful = context_class(src, &step.redex.anchor)
                    .map(|info| info.class == ContextClass::Useful)
                    .unwrap_or(false);
                let expect_chain = creates_answer && ctx_useful;
                if expect_chain {
                    let found = find_chain(
                        &mut out,
                        &[RuleLabel::MPlus, RuleLabel::EPlus, RuleLabel::GcPlus],
                        &target,
                    )?;
                    if !found {
                        return Err(TransformError::SimulationFailed {
                            index: i,
                            label: RuleLabel::M,
                            reason: "expected m+ e+ gc+ chain (answer under useful context)".into(),
                        });
                    }
                } else {
                    let found = find_step(&mut out, &[RuleLabel::MPlus], &target)?;
                    if !found {
                        return Err(TransformError::SimulationFailed {
                            index: i,
                            label: RuleLabel::M,
                            reason: "expected a single m+ step".into(),
                        });
                    }
                }
            }
            other => {
                return Err(TransformError::WrongFragment(format!(
                    "core traces contain m, useful e-abs and e-var steps, found {other}"
                )))
            }
        }
    }

    // endpoint and counter identities of the simulation
    if !alpha_eq(out.end(), &translate(d.end(), &mut NameGen::new())) {
        return Err(TransformError::WrongFragment(
            "translated endpoints differ".into(),
        ));
    }
    if out.count(RuleLabel::MPlus) != d.count(RuleLabel::M) {
        return Err(TransformError::WrongFragment(
            "multiplicative counters differ".into(),
        ));
    }
    let lower = d.count(RuleLabel::M) + d.count(RuleLabel::EAbs);
    if out.len() < lower || out.len() > 3 * d.len() {
        return Err(TransformError::WrongFragment(format!(
            "length bound violated: {} not in [{lower}, {}]",
            out.len(),
            3 * d.len()
        )));
    }
    Ok(out)
}

/// Extend the trace by one step with one of the labels reaching `target`.
fn find_step(out: &mut Trace, labels: &[RuleLabel], target: &Term) -> Result<bool, TransformError> {
    let cur = out.end().clone();
    for r in out.calculus.enumerate(&cur)? {
        if !labels.contains(&r.label) {
            continue;
        }
        let t = out.calculus.apply(&cur, &r)?;
        if alpha_eq(&t, target) {
            out.push(r)?;
            return Ok(true);
        }
    }
    Ok(false)
}

/// Extend the trace by the exact chain of labels reaching `target`.
fn find_chain(
    out: &mut Trace,
    labels: &[RuleLabel],
    target: &Term,
) -> Result<bool, TransformError> {
    fn search(
        calculus: Calculus,
        cur: &Term,
        labels: &[RuleLabel],
        target: &Term,
    ) -> Result<Option<Vec<Redex>>, TransformError> {
        let Some((first, rest)) = labels.split_first() else {
            return Ok(if alpha_eq(cur, target) {
                Some(Vec::new())
            } else {
                None
            });
        };
        for r in calculus.enumerate(cur)? {
            if r.label != *first {
                continue;
            }
            let t = calculus.apply(cur, &r)?;
            if let Some(mut tail) = search(calculus, &t, rest, target)? {
                let mut v = vec![r];
                v.append(&mut tail);
                return Ok(Some(v));
            }
        }
        Ok(None)
    }
    let cur = out.end().clone();
    match search(out.calculus, &cur, labels, target)? {
        Some(redexes) => {
            for r in redexes {
                out.push(r)?;
            }
            Ok(true)
        }
        None => Ok(false),
    }
}

/// Convenience used by the termination-equivalence suites: a core-normal
/// check through the translation (no m+ or e+ redex in the image).
pub fn translation_preserves_normal(t: &Term) -> Result<bool, TransformError> {
    debug_assert!(is_core_normal(t));
    let image = translate(t, &mut NameGen::new());
    let redexes = Calculus::OXPos.enumerate(&image)?;
    Ok(redexes
        .iter()
        .all(|r| !matches!(r.label, RuleLabel::MPlus | RuleLabel::EPlus)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::trace::{run_strategy, Strategy};
    use crate::syntax::parse_term;

    fn t(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    #[test]
    fn gc_free_traces_pass_through() {
        let omega = t("(\\x. x x) (\\x. x x)");
        let d = run_strategy(&omega, Calculus::vsc(), &Strategy::Lo, 9).unwrap();
        assert_eq!(d.count_gc(), 0);
        let (e, f) = postpone_gc(&d).unwrap();
        assert_eq!(e.len(), d.len());
        assert!(f.is_empty());
    }

    #[test]
    fn gc_then_m_swaps() {
        // z[q <- \w.w] ((\y. y) r): a gc step then an m step
        let start = t("z[q <- \\w. w] ((\\y. y) r)");
        let mut d = Trace::new(Calculus::vsc(), start);
        let rs = Calculus::vsc().enumerate(d.end()).unwrap();
        let gc = rs
            .iter()
            .find(|r| r.label == RuleLabel::GcAbs)
            .unwrap()
            .clone();
        d.push(gc).unwrap();
        let rs = Calculus::vsc().enumerate(d.end()).unwrap();
        let m = rs.iter().find(|r| r.label == RuleLabel::M).unwrap().clone();
        d.push(m).unwrap();

        let (e, f) = postpone_gc(&d).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(f.len(), 1);
        assert_eq!(e.steps[0].redex.label, RuleLabel::M);
        assert_eq!(f.steps[0].redex.label, RuleLabel::GcAbs);
        assert!(alpha_eq(f.end(), d.end()));
    }

    #[test]
    fn factorization_fixed_tricky_case() {
        // (x t)[x <- y][y <- \z. u]: the non-useful chain step followed by
        // the useful step reorders into e-var, useful, non-useful.
        let start = t("(x t)[x <- y][y <- \\z. u]");
        let mut d = Trace::new(Calculus::vsc(), start.clone());
        // non-useful: replace the y occurrence inside [x <- y]
        let rs = Calculus::vsc().enumerate(d.end()).unwrap();
        let nu = rs
            .iter()
            .find(|r| {
                r.label == RuleLabel::EAbs
                    && classify_usefulness(d.end(), r) == UsefulnessVerdict::NonUseful
            })
            .unwrap()
            .clone();
        d.push(nu).unwrap();
        // useful: replace the x occurrence, now sharing the abstraction
        let rs = Calculus::vsc().enumerate(d.end()).unwrap();
        let u = rs
            .iter()
            .find(|r| {
                r.label == RuleLabel::EAbs
                    && classify_usefulness(d.end(), r) == UsefulnessVerdict::Useful
            })
            .unwrap()
            .clone();
        d.push(u).unwrap();

        let e = factorize_core(&d).unwrap();
        assert_eq!(e.len(), 3);
        let labels: Vec<RuleLabel> = e.steps.iter().map(|s| s.redex.label).collect();
        assert_eq!(
            labels,
            vec![RuleLabel::EVar, RuleLabel::EAbs, RuleLabel::EAbs]
        );
        assert_eq!(e.steps[1].verdict, UsefulnessVerdict::Useful);
        assert_eq!(e.steps[2].verdict, UsefulnessVerdict::NonUseful);
        assert!(alpha_eq(e.end(), d.end()));
    }

    #[test]
    fn factorization_of_stacked_chain_steps() {
        // Two non-useful chain replacements, then the useful one: pushing
        // the later non-useful step right inserts core steps behind it,
        // after which the earlier one has to cross them all.
        let start = t("(x t)[x <- y][y <- z][z <- \\w. u]");
        let mut d = Trace::new(Calculus::vsc(), start);
        for _ in 0..2 {
            let rs = Calculus::vsc().enumerate(d.end()).unwrap();
            let nu = rs
                .iter()
                .find(|r| {
                    r.label == RuleLabel::EAbs
                        && classify_usefulness(d.end(), r) == UsefulnessVerdict::NonUseful
                })
                .expect("chain step")
                .clone();
            d.push(nu).unwrap();
        }
        let rs = Calculus::vsc().enumerate(d.end()).unwrap();
        let useful = rs
            .iter()
            .find(|r| classify_usefulness(d.end(), r) == UsefulnessVerdict::Useful)
            .expect("useful step")
            .clone();
        d.push(useful).unwrap();

        let e = factorize_core(&d).unwrap();
        assert!(alpha_eq(e.end(), d.end()));
        assert_eq!(e.count(RuleLabel::M), 0);
        // core prefix, non-useful suffix
        let kinds: Vec<bool> = e
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                classify_usefulness(e.source_of(i), &s.redex) != UsefulnessVerdict::NonUseful
            })
            .collect();
        let split = kinds.iter().position(|k| !*k).unwrap_or(kinds.len());
        assert!(
            kinds[split..].iter().all(|k| !*k),
            "suffix not non-useful: {kinds:?}"
        );
        assert!(split < e.len(), "some non-useful steps must remain");
    }

    #[test]
    fn all_core_traces_factorize_unchanged() {
        let omega = t("(\\x. x x) (\\x. x x)");
        let d = run_strategy(&omega, Calculus::vsc(), &Strategy::Lo, 9).unwrap();
        // the leftmost omega trace is gc-free and all-core
        let e = factorize_core(&d).unwrap();
        assert_eq!(e.len(), d.len());
        for (a, b) in e.steps.iter().zip(d.steps.iter()) {
            assert_eq!(a.redex, b.redex);
        }
    }

    #[test]
    fn simulation_absorbs_variable_steps() {
        let start = t("x[x <- y]");
        let mut d = Trace::new(Calculus::VscCore, start);
        let rs = Calculus::VscCore.enumerate(d.end()).unwrap();
        assert_eq!(rs[0].label, RuleLabel::EVar);
        d.push(rs[0].clone()).unwrap();
        let e = simulate_core(&d).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn simulation_of_the_answer_creating_chain() {
        // (\x.\y.y) z w: the m step turns an applied non-answer into an
        // applied answer, simulated by m+ e+ gc+.
        let start = t("(\\x. \\y. y) z w");
        let mut d = Trace::new(Calculus::VscCore, start);
        let rs = Calculus::VscCore.enumerate(d.end()).unwrap();
        let m = rs.iter().find(|r| r.label == RuleLabel::M).unwrap().clone();
        d.push(m).unwrap();
        let e = simulate_core(&d).unwrap();
        assert_eq!(
            e.steps.iter().map(|s| s.redex.label).collect::<Vec<_>>(),
            vec![RuleLabel::MPlus, RuleLabel::EPlus, RuleLabel::GcPlus]
        );
    }

    #[test]
    fn simulation_preserves_m_counters_on_omega() {
        let omega = t("(\\x. x x) (\\x. x x)");
        let d = run_strategy(&omega, Calculus::VscCore, &Strategy::Lo, 12).unwrap();
        let e = simulate_core(&d).unwrap();
        assert_eq!(e.count(RuleLabel::MPlus), d.count(RuleLabel::M));
        assert!(d.count(RuleLabel::M) + d.count(RuleLabel::EAbs) <= e.len());
        assert!(e.len() <= 3 * d.len());
    }
}
