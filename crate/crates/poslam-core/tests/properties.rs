//! Property tests over randomly generated terms.

use std::collections::BTreeSet;

use proptest::prelude::*;

use poslam_core::harness::{random_terms, Grammar};
use poslam_core::syntax::{
    alpha_eq, canonicalize, decompose_positive, free_vars, fv, parse_term, print_term, rename,
    subst_value, Name, Term, VarMode,
};
use poslam_core::vsc::{enumerate_vsc, VscOpts};

fn vsc_term(seed: u64, size: usize) -> Term {
    random_terms(Grammar::Vsc, seed, size.clamp(1, 25), 1)
        .pop()
        .unwrap()
}

proptest! {
    #[test]
    fn print_parse_round_trip(seed: u64, size in 1usize..25) {
        let t = vsc_term(seed, size);
        let reparsed = parse_term(&print_term(&t)).unwrap();
        prop_assert!(alpha_eq(&t, &reparsed));
        prop_assert_eq!(print_term(&t), print_term(&reparsed));
    }

    #[test]
    fn alpha_eq_is_an_equivalence(seed: u64, size in 1usize..20) {
        let t = vsc_term(seed, size);
        let c = canonicalize(&t);
        prop_assert!(alpha_eq(&t, &t));
        prop_assert!(alpha_eq(&t, &c));
        prop_assert!(alpha_eq(&c, &t));
    }

    #[test]
    fn free_variable_modes_are_nested(seed: u64, size in 1usize..25) {
        let t = vsc_term(seed, size);
        let all = free_vars(&t, VarMode::All);
        let open = free_vars(&t, VarMode::Open);
        let applied = free_vars(&t, VarMode::AppliedOpen);
        prop_assert!(open.is_subset(&all));
        prop_assert!(applied.is_subset(&open));
    }

    #[test]
    fn rename_is_a_congruence_for_alpha(seed: u64, size in 1usize..20) {
        let t = vsc_term(seed, size);
        let u = canonicalize(&t);
        let x = Name::new("a");
        let y = Name::new("fresh_target");
        prop_assert!(alpha_eq(&rename(&t, &x, &y), &rename(&u, &x, &y)));
    }

    // Independent substitution oracle: rename every binder apart first
    // (so no capture is possible), then replace occurrences naively.
    #[test]
    fn subst_matches_the_naive_oracle(seed: u64, size in 1usize..20, vseed: u64) {
        let t = vsc_term(seed, size);
        let v = {
            // a value: an abstraction over a random body
            let body = vsc_term(vseed, 6);
            Term::Abs(Name::new("vb"), Box::new(body))
        };
        let x = Name::new("a");

        let via_subst = subst_value(&t, &x, &v).unwrap();

        let apart = rename_binders_apart(&t, &x, &fv(&v));
        let via_oracle = naive_replace(&apart, &x, &v);
        prop_assert!(
            alpha_eq(&via_subst, &via_oracle),
            "subst {} vs oracle {}",
            print_term(&via_subst),
            print_term(&via_oracle)
        );
    }

    #[test]
    fn positive_decomposition_is_a_bijection(seed: u64, size in 1usize..25) {
        let t = random_terms(Grammar::XPositive, seed, size.clamp(1, 25), 1).pop().unwrap();
        let (path, head) = decompose_positive(&t).unwrap();
        let back = t.with_replaced(&path, Term::Var(head)).unwrap();
        prop_assert!(alpha_eq(&back, &t));
    }

    #[test]
    fn enumeration_is_stable_under_canonical_renaming(seed: u64, size in 1usize..20) {
        let t = vsc_term(seed, size);
        let c = canonicalize(&t);
        let a = enumerate_vsc(&t, VscOpts::default());
        let b = enumerate_vsc(&c, VscOpts::default());
        // positions and labels agree; only names may differ
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b.iter()) {
            prop_assert_eq!(x.label, y.label);
            prop_assert_eq!(&x.anchor, &y.anchor);
            prop_assert_eq!(&x.occurrence, &y.occurrence);
        }
    }
}

/// Rename every binder to a globally fresh name, avoiding `x` and `avoid`.
fn rename_binders_apart(t: &Term, x: &Name, avoid: &BTreeSet<Name>) -> Term {
    fn go(t: &Term, counter: &mut u32, x: &Name, avoid: &BTreeSet<Name>) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::Abs(y, b) => {
                let fresh = next_fresh(counter, x, avoid);
                let b2 = rename(b, y, &fresh);
                Term::Abs(fresh, Box::new(go(&b2, counter, x, avoid)))
            }
            Term::App(f, a) => Term::App(
                Box::new(go(f, counter, x, avoid)),
                Box::new(go(a, counter, x, avoid)),
            ),
            Term::Es(b, y, c) => {
                let fresh = next_fresh(counter, x, avoid);
                let b2 = rename(b, y, &fresh);
                Term::Es(
                    Box::new(go(&b2, counter, x, avoid)),
                    fresh,
                    Box::new(go(c, counter, x, avoid)),
                )
            }
        }
    }
    fn next_fresh(counter: &mut u32, x: &Name, avoid: &BTreeSet<Name>) -> Name {
        loop {
            *counter += 1;
            let n = Name::new(format!("ap{counter}"));
            if n != *x && !avoid.contains(&n) {
                return n;
            }
        }
    }
    go(t, &mut 0, x, avoid)
}

/// Plain textual replacement of free occurrences; sound only after the
/// binders have been renamed apart.
fn naive_replace(t: &Term, x: &Name, v: &Term) -> Term {
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
            } else {
                Term::Abs(y.clone(), Box::new(naive_replace(b, x, v)))
            }
        }
        Term::App(f, a) => Term::App(
            Box::new(naive_replace(f, x, v)),
            Box::new(naive_replace(a, x, v)),
        ),
        Term::Es(b, y, c) => {
            let c2 = naive_replace(c, x, v);
            if y == x {
                Term::Es(b.clone(), y.clone(), Box::new(c2))
            } else {
                Term::Es(Box::new(naive_replace(b, x, v)), y.clone(), Box::new(c2))
            }
        }
    }
}

proptest! {
    // Every enumerated redex applies to the term it came from, and the
    // usefulness verdicts respect the partition discipline: e-abs steps
    // are always classified, e-var steps never are.
    #[test]
    fn enumerated_redexes_apply_and_classify(seed: u64, size in 1usize..25) {
        use poslam_core::vsc::{apply_vsc, classify_usefulness, RuleLabel, UsefulnessVerdict};
        let t = vsc_term(seed, size);
        for r in enumerate_vsc(&t, VscOpts::default()) {
            prop_assert!(r.anchor.is_open());
            let verdict = classify_usefulness(&t, &r);
            match r.label {
                RuleLabel::EAbs => prop_assert!(verdict != UsefulnessVerdict::Unclassified),
                _ => prop_assert!(verdict == UsefulnessVerdict::Unclassified),
            }
            prop_assert!(apply_vsc(&t, &r).is_ok(), "redex {r} failed on {}", print_term(&t));
        }
    }
}

proptest! {
    // Reduction never invents free variables: a step's reduct only loses
    // them (sharing may erase, binders must never let occurrences
    // escape). Catches any capture or escape defect in the rewrites.
    #[test]
    fn steps_never_invent_free_variables(seed: u64, size in 1usize..25) {
        use poslam_core::harness::Calculus;
        let t = vsc_term(seed, size);
        let all = fv(&t);
        for calculus in [Calculus::vsc(), Calculus::VscCore] {
            for r in calculus.enumerate(&t).unwrap() {
                let u = calculus.apply(&t, &r).unwrap();
                prop_assert!(
                    fv(&u).is_subset(&all),
                    "{} step on {} invents variables: {}",
                    r,
                    print_term(&t),
                    print_term(&u)
                );
            }
        }
    }

    #[test]
    fn positive_steps_never_invent_free_variables(seed: u64, size in 1usize..25) {
        use poslam_core::harness::Calculus;
        let t = random_terms(Grammar::XPositive, seed, size.clamp(1, 25), 1).pop().unwrap();
        let all = fv(&t);
        for r in Calculus::OXPos.enumerate(&t).unwrap() {
            let u = Calculus::OXPos.apply(&t, &r).unwrap();
            prop_assert!(fv(&u).is_subset(&all), "{} on {}", r, print_term(&t));
        }
        let t = random_terms(Grammar::Positive, seed, size.clamp(1, 25), 1).pop().unwrap();
        let all = fv(&t);
        for r in Calculus::OPos.enumerate(&t).unwrap() {
            let u = Calculus::OPos.apply(&t, &r).unwrap();
            prop_assert!(fv(&u).is_subset(&all), "{} on {}", r, print_term(&t));
        }
    }
}

proptest! {
    // Alpha-invariance of application on shadowing-heavy states: walk the
    // translated image of a single-name self-applier and compare every
    // step against the same step on the canonically renamed variant.
    #[test]
    fn apply_is_alpha_invariant_under_shadowing(seed: u64, budget in 3usize..12, walk in 0usize..8) {
        use poslam_core::harness::{gen, Calculus};
        use poslam_core::syntax::{canonicalize, NameGen};
        use poslam_core::translate::translate;
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let body = gen::random_term_in_scope(budget, &mut rng);
        let abs = Term::Abs(Name::new("x1"), Box::new(body));
        let self_app = Term::App(Box::new(abs.clone()), Box::new(abs));

        for (calculus, start) in [
            (Calculus::vsc(), self_app.clone()),
            (Calculus::OXPos, translate(&self_app, &mut NameGen::new())),
        ] {
            let mut cur = start;
            for _ in 0..walk {
                let redexes = calculus.enumerate(&cur).unwrap();
                if redexes.is_empty() {
                    break;
                }
                let canon = canonicalize(&cur);
                let canon_redexes = calculus.enumerate(&canon).unwrap();
                prop_assert_eq!(redexes.len(), canon_redexes.len());
                for (a, b) in redexes.iter().zip(canon_redexes.iter()) {
                    let ua = calculus.apply(&cur, a).unwrap();
                    let ub = calculus.apply(&canon, b).unwrap();
                    prop_assert!(
                        alpha_eq(&ua, &ub),
                        "apply not alpha-invariant for {} on {}",
                        a,
                        print_term(&cur)
                    );
                }
                let pick = rng.gen_range(0..redexes.len());
                cur = calculus.apply(&cur, &redexes[pick]).unwrap();
            }
        }
    }
}
