//! Named property suites over enumerated and random corpora. These back
//! the command-line `check` subcommand and the acceptance tests.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::positive::{apply_oxpos, enumerate_oxpos, infer_type_positive, infer_type_vsc};
use crate::syntax::{
    alpha_eq, canonical_key, decompose_positive, free_vars, fv, is_explicit_positive, is_positive,
    parse_term, print_canonical, rename, Name, NameGen, Path, Step, Term, VarMode,
};
use crate::translate::{translate, translate_subst_ctx};
use crate::vsc::{
    classify_usefulness, context_class, context_class_grammar, enumerate_useful_alt,
    is_core_normal, Redex, RuleLabel, UsefulnessVerdict,
};

use super::calculus::Calculus;
use super::gen::{enumerate_terms, random_terms, Grammar};
use super::graph::{check_diamond, reduction_graph, termination_status};
use super::omega::{bench_omega, omega, OmegaVariant};
use super::report::CheckReport;
use super::trace::{random_trace, run_strategy, Strategy, Trace};
use super::transform::{factorize_core, postpone_gc, simulate_core};

/// Options shared by all suites; each suite has its own defaults matching
/// the acceptance criteria.
#[derive(Clone, Copy, Debug, Default)]
pub struct SuiteOpts {
    pub size: Option<usize>,
    pub seed: Option<u64>,
    pub count: Option<usize>,
}

impl SuiteOpts {
    fn size(&self, default: usize) -> usize {
        self.size.unwrap_or(default)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn count(&self, default: usize) -> usize {
        self.count.unwrap_or(default)
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "omega-traces",
    "omega-counters",
    "diamond",
    "non-diamond",
    "gc-postponement",
    "factorization",
    "simulation",
    "normal-forms",
    "preservation",
    "useful-alt",
    "termination",
    "local-termination",
    "decomposition",
    "typing",
    "partition",
    "syntax",
    "translation",
    "positive",
];

/// Run a named suite. Unknown names list the available suites.
pub fn run_suite(name: &str, opts: &SuiteOpts) -> Result<Vec<CheckReport>, String> {
    Ok(match name {
        "omega-traces" => check_omega_traces(),
        "omega-counters" => vec![check_omega_counters(opts.size(20))],
        "diamond" => vec![check_diamond_suite(
            opts.size(9),
            opts.seed(),
            opts.count(10_000),
        )],
        "non-diamond" => vec![check_non_diamond_witness()],
        "gc-postponement" => check_gc_postponement(opts.count(1000), opts.seed()),
        "factorization" => vec![check_factorization(opts.count(1000), opts.seed())],
        "simulation" => vec![check_simulation(opts.count(1000), opts.seed())],
        "normal-forms" => vec![check_normal_forms(opts.size(8))],
        "preservation" => vec![check_preservation(opts.size(8))],
        "useful-alt" => vec![check_useful_alt(opts.size(8))],
        "termination" => check_termination(opts.size(7), opts.count(10_000)),
        "local-termination" => check_local_termination(opts.size(7), 10_000),
        "decomposition" => vec![check_decomposition(opts.count(1000), opts.seed())],
        "typing" => check_typing(opts.count(100), opts.seed()),
        "partition" => vec![check_partition(opts.size(6))],
        "syntax" => check_syntax_invariants(opts.size(6)),
        "translation" => check_translation_invariants(opts.count(500), opts.seed()),
        "positive" => check_positive_invariants(opts.count(500), opts.seed()),
        other => {
            return Err(format!(
                "unknown suite '{other}'; available: {}",
                SUITE_NAMES.join(", ")
            ))
        }
    })
}

// ---------------------------------------------------------------------
// Golden traces of the looping combinator.

const OMEGA_TRACE_VARS: &[(&str, RuleLabel)] = &[
    ("(x1 x1)[x1 <- \\x. x x]", RuleLabel::M),
    ("((\\x. x x) x1)[x1 <- \\x. x x]", RuleLabel::EAbs),
    ("(x2 x2)[x2 <- x1][x1 <- \\x. x x]", RuleLabel::M),
    ("(x1 x2)[x2 <- x1][x1 <- \\x. x x]", RuleLabel::EVar),
    ("((\\x. x x) x2)[x2 <- x1][x1 <- \\x. x x]", RuleLabel::EAbs),
    ("(x3 x3)[x3 <- x2][x2 <- x1][x1 <- \\x. x x]", RuleLabel::M),
    (
        "(x2 x3)[x3 <- x2][x2 <- x1][x1 <- \\x. x x]",
        RuleLabel::EVar,
    ),
    (
        "(x1 x3)[x3 <- x2][x2 <- x1][x1 <- \\x. x x]",
        RuleLabel::EVar,
    ),
    (
        "((\\x. x x) x3)[x3 <- x2][x2 <- x1][x1 <- \\x. x x]",
        RuleLabel::EAbs,
    ),
];

const OMEGA_TRACE_NOVAR: &[(&str, RuleLabel)] = &[
    ("(x1 x1)[x1 <- \\x. x x]", RuleLabel::M),
    ("((\\x. x x) x1)[x1 <- \\x. x x]", RuleLabel::EAbs),
    ("(x2 x2)[x2 <- x1][x1 <- \\x. x x]", RuleLabel::M),
    ("(x2 x2)[x2 <- \\x. x x][x1 <- \\x. x x]", RuleLabel::EAbs),
    (
        "((\\x. x x) x2)[x2 <- \\x. x x][x1 <- \\x. x x]",
        RuleLabel::EAbs,
    ),
    (
        "(x3 x3)[x3 <- x2][x2 <- \\x. x x][x1 <- \\x. x x]",
        RuleLabel::M,
    ),
    (
        "(x3 x3)[x3 <- \\x. x x][x2 <- \\x. x x][x1 <- \\x. x x]",
        RuleLabel::EAbs,
    ),
    (
        "((\\x. x x) x3)[x3 <- \\x. x x][x2 <- \\x. x x][x1 <- \\x. x x]",
        RuleLabel::EAbs,
    ),
    (
        "(x4 x4)[x4 <- x3][x3 <- \\x. x x][x2 <- \\x. x x][x1 <- \\x. x x]",
        RuleLabel::M,
    ),
];

const OMEGA_TRACE_OXPOS: &[(&str, RuleLabel)] = &[
    ("w[w <- z z][z <- \\x. y[y <- x x]]", RuleLabel::MPlus),
    (
        "w[w <- (\\x. y[y <- x x]) z][z <- \\x. y[y <- x x]]",
        RuleLabel::EPlus,
    ),
    ("w[w <- z z][z <- \\x. y[y <- x x]]", RuleLabel::MPlus),
    (
        "w[w <- (\\x. y[y <- x x]) z][z <- \\x. y[y <- x x]]",
        RuleLabel::EPlus,
    ),
    ("w[w <- z z][z <- \\x. y[y <- x x]]", RuleLabel::MPlus),
];

fn check_trace_against(report: &mut CheckReport, trace: &Trace, golden: &[(&str, RuleLabel)]) {
    report.check(trace.len() >= golden.len(), || {
        format!("trace too short: {} < {}", trace.len(), golden.len())
    });
    for (i, (src, label)) in golden.iter().enumerate() {
        if i >= trace.len() {
            break;
        }
        let expected = parse_term(src).expect("golden term parses");
        let step = &trace.steps[i];
        report.check(step.redex.label == *label, || {
            format!(
                "step {}: label {} expected {label}",
                i + 1,
                step.redex.label
            )
        });
        report.check(alpha_eq(&step.term, &expected), || {
            format!(
                "step {}: got {} expected {src}",
                i + 1,
                print_canonical(&step.term)
            )
        });
    }
}

/// The three displayed reductions of the looping combinator, alpha-exact.
pub fn check_omega_traces() -> Vec<CheckReport> {
    let mut out = Vec::new();

    let mut r = CheckReport::new("omega-trace-quadratic", "lo on Omega, variables as values");
    let tr = run_strategy(
        &omega(),
        Calculus::vsc(),
        &Strategy::Lo,
        OMEGA_TRACE_VARS.len(),
    )
    .expect("omega reduces");
    check_trace_against(&mut r, &tr, OMEGA_TRACE_VARS);
    out.push(r);

    let mut r = CheckReport::new("omega-trace-linear", "lo on Omega, no variable values");
    let tr = run_strategy(
        &omega(),
        Calculus::Vsc {
            vars_are_values: false,
        },
        &Strategy::Lo,
        OMEGA_TRACE_NOVAR.len(),
    )
    .expect("omega reduces");
    check_trace_against(&mut r, &tr, OMEGA_TRACE_NOVAR);
    out.push(r);

    let mut r = CheckReport::new("omega-trace-positive", "lo on the translated loop");
    let pos = translate(&omega(), &mut NameGen::new());
    let tr = run_strategy(
        &pos,
        Calculus::OXPos,
        &Strategy::Lo,
        OMEGA_TRACE_OXPOS.len(),
    )
    .expect("the loop reduces");
    check_trace_against(&mut r, &tr, OMEGA_TRACE_OXPOS);
    out.push(r);

    out
}

/// Exact chain-overhead counters: quadratic with variable values, linear
/// in the explicit positive calculus, at most 2n without variable values.
pub fn check_omega_counters(max_n: usize) -> CheckReport {
    let mut r = CheckReport::new("omega-counters", format!("n in 2..={max_n}"));
    for n in 2..=max_n {
        let c = bench_omega(n, OmegaVariant::VarsAsValues);
        r.check(c.e_steps == n * (n - 1) / 2, || {
            format!("vars-as-values n={n}: {} != n(n-1)/2", c.e_steps)
        });
        let c = bench_omega(n, OmegaVariant::OXPos);
        r.check(c.e_steps == n - 1, || {
            format!("oxpos n={n}: {} != n-1", c.e_steps)
        });
        let c = bench_omega(n, OmegaVariant::NoVarValues);
        r.check(c.e_steps <= 2 * n, || {
            format!("no-var-values n={n}: {} > 2n", c.e_steps)
        });
    }
    r
}

// ---------------------------------------------------------------------
// Diamond.

/// One-step joinability of distinct peaks, checked locally per term.
fn diamond_peaks(t: &Term, report: &mut CheckReport) {
    let redexes = match Calculus::OXPos.enumerate(t) {
        Ok(r) => r,
        Err(e) => {
            report.check(false, || format!("{e} on {}", print_canonical(t)));
            return;
        }
    };
    let reducts: Vec<(String, Term)> = redexes
        .iter()
        .map(|r| {
            let u = apply_oxpos(t, r).expect("enumerated redex applies");
            (canonical_key(&u), u)
        })
        .collect();
    for i in 0..reducts.len() {
        for j in i + 1..reducts.len() {
            if reducts[i].0 == reducts[j].0 {
                continue;
            }
            let set1: HashSet<String> = one_step_keys(&reducts[i].1);
            let set2: HashSet<String> = one_step_keys(&reducts[j].1);
            report.check(set1.intersection(&set2).next().is_some(), || {
                format!(
                    "peak {} -> {} / {} does not join",
                    print_canonical(t),
                    print_canonical(&reducts[i].1),
                    print_canonical(&reducts[j].1)
                )
            });
        }
    }
}

fn one_step_keys(t: &Term) -> HashSet<String> {
    enumerate_oxpos(t)
        .expect("reducts stay in the grammar")
        .iter()
        .map(|r| canonical_key(&apply_oxpos(t, r).expect("redex applies")))
        .collect()
}

/// Diamond on every enumerated explicit-positive term up to `size` nodes
/// plus `count` random terms of size at most 20.
pub fn check_diamond_suite(size: usize, seed: u64, count: usize) -> CheckReport {
    let mut r = CheckReport::new(
        "positive-diamond",
        format!("enumerated xpositive <= {size} nodes plus {count} random <= 20"),
    );
    for t in enumerate_terms(Grammar::XPositive, size) {
        diamond_peaks(&t, &mut r);
    }
    for t in random_terms(Grammar::XPositive, seed, 20, count) {
        diamond_peaks(&t, &mut r);
    }
    r
}

/// The chain term produces the non-diamond peak of the exponential
/// relation: its two e-reducts have no one-step e-join, while one side
/// closes the peak with two e-steps, as in the displayed diagram.
pub fn check_non_diamond_witness() -> CheckReport {
    let mut r = CheckReport::new("vsc-non-diamond", "(x z)[x <- y][y <- \\w. w]");
    let t = parse_term("(x z)[x <- y][y <- \\w. w]").unwrap();
    let redexes = Calculus::vsc().enumerate(&t).unwrap();
    let e_reducts: Vec<Term> = redexes
        .iter()
        .filter(|rx| matches!(rx.label, RuleLabel::EAbs | RuleLabel::EVar))
        .map(|rx| Calculus::vsc().apply(&t, rx).unwrap())
        .collect();
    r.check(e_reducts.len() == 2, || {
        format!("expected two exponential reducts, got {}", e_reducts.len())
    });
    if e_reducts.len() != 2 {
        return r;
    }
    let (u1, u2) = (&e_reducts[0], &e_reducts[1]);
    r.check(!alpha_eq(u1, u2), || "reducts unexpectedly equal".into());
    let k1 = e_step_keys(u1);
    let k2 = e_step_keys(u2);
    // no one-step e-join
    r.check(k1.intersection(&k2).next().is_none(), || {
        "the peak joins in one exponential step; it should not".into()
    });
    // one side closes with one step, the other needs two
    let mut two_of_1: HashSet<String> = HashSet::new();
    for k in e_two_step_keys(u1) {
        two_of_1.insert(k);
    }
    let mut two_of_2: HashSet<String> = HashSet::new();
    for k in e_two_step_keys(u2) {
        two_of_2.insert(k);
    }
    let join_12 = k1.intersection(&two_of_2).next().is_some();
    let join_21 = k2.intersection(&two_of_1).next().is_some();
    r.check(join_12 || join_21, || {
        "no (one, two)-step e-join found".into()
    });
    r
}

fn e_redexes(t: &Term) -> Vec<Redex> {
    Calculus::vsc()
        .enumerate(t)
        .unwrap()
        .into_iter()
        .filter(|r| matches!(r.label, RuleLabel::EAbs | RuleLabel::EVar))
        .collect()
}

fn e_step_keys(t: &Term) -> HashSet<String> {
    e_redexes(t)
        .iter()
        .map(|r| canonical_key(&Calculus::vsc().apply(t, r).unwrap()))
        .collect()
}

fn e_two_step_keys(t: &Term) -> HashSet<String> {
    let mut out = HashSet::new();
    for r in e_redexes(t) {
        let u = Calculus::vsc().apply(t, &r).unwrap();
        out.extend(e_step_keys(&u));
    }
    out
}

// ---------------------------------------------------------------------
// Trace transformations.

/// Self-application of a random abstraction over a single variable:
/// these reduce for a long time or diverge, exercising the transforms on
/// long traces with real duplication.
fn random_self_appliers(seed: u64, budget: usize, count: usize) -> Vec<Term> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let b = rng.gen_range(3..=budget);
            let body = crate::harness::gen::random_term_in_scope(b, &mut rng);
            let abs = Term::Abs(Name::new("x1"), Box::new(body));
            Term::App(Box::new(abs.clone()), Box::new(abs))
        })
        .collect()
}

/// Random starting terms for trace corpora: a mix of open terms, closed
/// terms and self-appliers (the latter reduce much longer); for the
/// positive calculus, the closed parts go through the translation.
fn trace_corpus(calculus: Calculus, count: usize, seed: u64) -> Vec<Term> {
    let third = count / 3;
    let mut ts = Vec::with_capacity(count);
    match calculus {
        Calculus::OXPos => {
            ts.extend(random_terms(
                Grammar::XPositive,
                seed.wrapping_add(1),
                20,
                third,
            ));
            ts.extend(
                random_terms(Grammar::ClosedVsc, seed.wrapping_add(2), 16, third)
                    .iter()
                    .map(|t| translate(t, &mut NameGen::new())),
            );
            ts.extend(
                random_self_appliers(seed.wrapping_add(3), 12, count - 2 * third)
                    .iter()
                    .map(|t| translate(t, &mut NameGen::new())),
            );
        }
        _ => {
            ts.extend(random_terms(Grammar::Vsc, seed.wrapping_add(1), 20, third));
            ts.extend(random_terms(
                Grammar::ClosedVsc,
                seed.wrapping_add(2),
                16,
                third,
            ));
            ts.extend(random_self_appliers(
                seed.wrapping_add(3),
                12,
                count - 2 * third,
            ));
        }
    }
    ts
}

/// GC postponement with exact counters, in both calculi.
pub fn check_gc_postponement(count: usize, seed: u64) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for (calculus, name) in [
        (Calculus::vsc(), "gc-postponement-vsc"),
        (Calculus::OXPos, "gc-postponement-oxpos"),
    ] {
        let mut r = CheckReport::new(name, format!("{count} random traces of length <= 30"));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for t in trace_corpus(calculus, count, seed) {
            let d = random_trace(&t, calculus, 30, &mut rng, true).expect("trace runs");
            match postpone_gc(&d) {
                Ok((e, f)) => {
                    let ok = e.steps.iter().all(|s| !s.redex.label.is_gc())
                        && f.steps.iter().all(|s| s.redex.label.is_gc())
                        && f.len() == d.count_gc()
                        && alpha_eq(f.end(), d.end())
                        && d.counters()
                            .iter()
                            .filter(|(l, _)| !l.is_gc())
                            .all(|(l, n)| e.count(*l) == *n);
                    r.check(ok, || {
                        format!("identities failed on {}", print_canonical(&t))
                    });
                }
                Err(err) => r.check(false, || format!("{err}")),
            }
        }
        out.push(r);
    }
    out
}

/// Core factorization on gc-free traces: core prefix, non-useful suffix,
/// multiplicative counter preserved. Includes the fixed two-step diagram.
pub fn check_factorization(count: usize, seed: u64) -> CheckReport {
    let mut r = CheckReport::new(
        "core-factorization",
        format!("{count} random gc-free traces of length <= 30, plus the chain diagram"),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let check_one = |d: &Trace, r: &mut CheckReport| match factorize_core(d) {
        Ok(e) => {
            let kinds: Vec<bool> = e
                .steps
                .iter()
                .enumerate()
                .map(|(i, s)| match s.redex.label {
                    RuleLabel::M | RuleLabel::EVar => true,
                    RuleLabel::EAbs => {
                        classify_usefulness(e.source_of(i), &s.redex) == UsefulnessVerdict::Useful
                    }
                    _ => false,
                })
                .collect();
            let split = kinds.iter().position(|k| !*k).unwrap_or(kinds.len());
            let ok = kinds[split..].iter().all(|k| !*k)
                && e.count(RuleLabel::M) == d.count(RuleLabel::M)
                && alpha_eq(e.end(), d.end());
            r.check(ok, || {
                format!("structure broken on {}", print_canonical(&d.start))
            });
        }
        Err(err) => r.check(false, || format!("{err}")),
    };

    // the tricky fixed case from the local-postponement diagram
    let fixed = parse_term("(x t)[x <- y][y <- \\z. u]").unwrap();
    let mut d = Trace::new(Calculus::vsc(), fixed);
    let rs = Calculus::vsc().enumerate(d.end()).unwrap();
    let nu = rs
        .iter()
        .find(|rx| classify_usefulness(d.end(), rx) == UsefulnessVerdict::NonUseful)
        .expect("non-useful chain step")
        .clone();
    d.push(nu).unwrap();
    let rs = Calculus::vsc().enumerate(d.end()).unwrap();
    let useful = rs
        .iter()
        .find(|rx| classify_usefulness(d.end(), rx) == UsefulnessVerdict::Useful)
        .expect("useful step")
        .clone();
    d.push(useful).unwrap();
    check_one(&d, &mut r);

    for t in trace_corpus(Calculus::vsc(), count, seed.wrapping_add(20)) {
        let d = random_trace(&t, Calculus::vsc(), 30, &mut rng, false).expect("trace runs");
        check_one(&d, &mut r);
    }
    r
}

/// Simulation of random core traces; the counter relations are enforced
/// inside [`simulate_core`], re-checked here.
pub fn check_simulation(count: usize, seed: u64) -> CheckReport {
    let mut r = CheckReport::new(
        "core-simulation",
        format!("{count} random core traces of length <= 50"),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in trace_corpus(Calculus::VscCore, count, seed.wrapping_add(30)) {
        let d = random_trace(&t, Calculus::VscCore, 50, &mut rng, true).expect("trace runs");
        match simulate_core(&d) {
            Ok(e) => {
                let ok = e.count(RuleLabel::MPlus) == d.count(RuleLabel::M)
                    && d.count(RuleLabel::M) + d.count(RuleLabel::EAbs) <= e.len()
                    && e.len() <= 3 * d.len()
                    && alpha_eq(e.end(), &translate(d.end(), &mut NameGen::new()));
                r.check(ok, || {
                    format!("relations failed on {}", print_canonical(&t))
                });
            }
            Err(err) => r.check(false, || format!("{err}")),
        }
    }
    r
}

// ---------------------------------------------------------------------
// Normal forms and the useful-step presentations.

/// The core-normal grammar agrees with core-redex emptiness, exhaustively.
pub fn check_normal_forms(size: usize) -> CheckReport {
    let mut r = CheckReport::new(
        "core-normal-characterization",
        format!("all vsc terms <= {size} nodes"),
    );
    for t in enumerate_terms(Grammar::Vsc, size) {
        let grammar = is_core_normal(&t);
        let engine = Calculus::VscCore.enumerate(&t).unwrap().is_empty();
        r.check(grammar == engine, || {
            format!(
                "{}: grammar {} vs engine {}",
                print_canonical(&t),
                grammar,
                engine
            )
        });
    }
    r
}

/// Core-normal terms translate to terms with no m+ or e+ redex.
pub fn check_preservation(size: usize) -> CheckReport {
    let mut r = CheckReport::new(
        "normal-form-preservation",
        format!("core-normal vsc terms <= {size} nodes"),
    );
    for t in enumerate_terms(Grammar::Vsc, size) {
        if !is_core_normal(&t) {
            continue;
        }
        let image = translate(&t, &mut NameGen::new());
        let redexes = enumerate_oxpos(&image).expect("translations are explicit positive");
        let ok = redexes
            .iter()
            .all(|rx| !matches!(rx.label, RuleLabel::MPlus | RuleLabel::EPlus));
        r.check(ok, || {
            format!(
                "{} translates to {} with a non-gc redex",
                print_canonical(&t),
                print_canonical(&image)
            )
        });
    }
    r
}

/// The two presentations of useful steps produce the same reduct sets.
pub fn check_useful_alt(size: usize) -> CheckReport {
    let mut r = CheckReport::new(
        "useful-alternative-presentation",
        format!("all vsc terms <= {size} nodes"),
    );
    for t in enumerate_terms(Grammar::Vsc, size) {
        let via_classifier: BTreeSet<String> = Calculus::vsc()
            .enumerate(&t)
            .unwrap()
            .iter()
            .filter(|rx| {
                rx.label == RuleLabel::EAbs
                    && classify_usefulness(&t, rx) == UsefulnessVerdict::Useful
            })
            .map(|rx| canonical_key(&Calculus::vsc().apply(&t, rx).unwrap()))
            .collect();
        let via_root_rules: BTreeSet<String> = enumerate_useful_alt(&t)
            .iter()
            .map(|rx| canonical_key(&Calculus::vsc().apply(&t, rx).unwrap()))
            .collect();
        r.check(via_classifier == via_root_rules, || {
            format!(
                "{}: classifier {:?} vs root rules {:?}",
                print_canonical(&t),
                via_classifier,
                via_root_rules
            )
        });
    }
    r
}

// ---------------------------------------------------------------------
// Termination equivalences.

/// Weak normalization and divergence coincide across the full calculus,
/// its core, and the positive image. Cap-exceeded terms are undecided and
/// reported separately.
pub fn check_termination(size: usize, node_cap: usize) -> Vec<CheckReport> {
    let mut vsc_core = CheckReport::new(
        "termination-vsc-vs-core",
        format!("vsc terms <= {size} nodes, graph cap {node_cap}"),
    );
    let mut core_pos = CheckReport::new(
        "termination-core-vs-positive",
        format!("vsc terms <= {size} nodes, graph cap {node_cap}"),
    );
    let fuel = node_cap * 10;
    for t in enumerate_terms(Grammar::Vsc, size) {
        let g_vsc = reduction_graph(&t, Calculus::vsc(), node_cap, fuel).unwrap();
        let g_core = reduction_graph(&t, Calculus::VscCore, node_cap, fuel).unwrap();
        let image = translate(&t, &mut NameGen::new());
        let g_pos = reduction_graph(&image, Calculus::OXPos, node_cap, fuel).unwrap();
        let s_vsc = termination_status(&g_vsc);
        let s_core = termination_status(&g_core);
        let s_pos = termination_status(&g_pos);

        compare_status(
            &mut vsc_core,
            &t,
            s_vsc.weakly_normalizing,
            s_core.weakly_normalizing,
            "WN",
        );
        compare_status(
            &mut vsc_core,
            &t,
            s_vsc.diverging,
            s_core.diverging,
            "divergence",
        );
        compare_status(
            &mut core_pos,
            &t,
            s_core.weakly_normalizing,
            s_pos.weakly_normalizing,
            "WN",
        );
        compare_status(
            &mut core_pos,
            &t,
            s_core.diverging,
            s_pos.diverging,
            "divergence",
        );
    }
    vec![vsc_core, core_pos]
}

fn compare_status(
    report: &mut CheckReport,
    t: &Term,
    a: Option<bool>,
    b: Option<bool>,
    what: &str,
) {
    match (a, b) {
        (Some(x), Some(y)) => report.check(x == y, || {
            format!("{what} differs on {}: {x} vs {y}", print_canonical(t))
        }),
        _ => report.undecided(),
    }
}

/// Single-label and erasure-family reductions are strongly normalizing;
/// positive graphs have length-invariant maximal reductions.
pub fn check_local_termination(size: usize, fuel: usize) -> Vec<CheckReport> {
    let mut out = Vec::new();

    let vsc_sets: Vec<(&str, Vec<RuleLabel>)> = vec![
        ("m", vec![RuleLabel::M]),
        ("e", vec![RuleLabel::EAbs, RuleLabel::EVar]),
        ("gc", vec![RuleLabel::GcAbs, RuleLabel::GcVar]),
        (
            "e+gc",
            vec![
                RuleLabel::EAbs,
                RuleLabel::EVar,
                RuleLabel::GcAbs,
                RuleLabel::GcVar,
            ],
        ),
    ];
    let mut r = CheckReport::new(
        "local-termination-vsc",
        format!("vsc terms <= {size} nodes, fuel {fuel}"),
    );
    let vsc_corpus = enumerate_terms(Grammar::Vsc, size);
    for t in &vsc_corpus {
        for (name, labels) in &vsc_sets {
            r.check(terminates_within(t, Calculus::vsc(), labels, fuel), || {
                format!("{name} ran out of fuel on {}", print_canonical(t))
            });
        }
    }
    out.push(r);

    let pos_sets: Vec<(&str, Vec<RuleLabel>)> = vec![
        ("m+", vec![RuleLabel::MPlus]),
        ("e+", vec![RuleLabel::EPlus]),
        ("gc+", vec![RuleLabel::GcPlus]),
        ("e++gc+", vec![RuleLabel::EPlus, RuleLabel::GcPlus]),
    ];
    let xpos_size = size + 2;
    let mut r = CheckReport::new(
        "local-termination-oxpos",
        format!("xpositive terms <= {xpos_size} nodes, fuel {fuel}"),
    );
    let xpos_corpus = enumerate_terms(Grammar::XPositive, xpos_size);
    for t in &xpos_corpus {
        for (name, labels) in &pos_sets {
            r.check(terminates_within(t, Calculus::OXPos, labels, fuel), || {
                format!("{name} ran out of fuel on {}", print_canonical(t))
            });
        }
    }
    out.push(r);

    let mut r = CheckReport::new(
        "positive-length-invariance",
        format!("xpositive terms <= {xpos_size} nodes"),
    );
    for t in &xpos_corpus {
        let g = reduction_graph(t, Calculus::OXPos, 10_000, 100_000).unwrap();
        if g.truncated {
            r.undecided();
            continue;
        }
        let rep = check_diamond(&g);
        r.check(rep.all_pass(), || {
            format!(
                "diamond consequences fail on {}: {} peaks, {} length, {} uniform",
                print_canonical(t),
                rep.violations.len(),
                rep.length_violations.len(),
                rep.uniform_violations.len()
            )
        });
    }
    out.push(r);

    // Uniform normalization also holds for the full calculus and its
    // core, even though neither is diamond: a term with a reachable
    // normal form never has a diverging sequence.
    let mut r = CheckReport::new(
        "uniform-normalization-vsc-and-core",
        format!("vsc terms <= {size} nodes, both calculi"),
    );
    for t in &vsc_corpus {
        for calculus in [Calculus::vsc(), Calculus::VscCore] {
            let g = reduction_graph(t, calculus, 10_000, 100_000).unwrap();
            if g.truncated {
                r.undecided();
                continue;
            }
            let reaches_normal = g.reaches_normal();
            let reaches_cycle = g.reaches_cycle();
            let ok = (0..g.nodes.len()).all(|i| !(reaches_normal[i] && reaches_cycle[i]));
            r.check(ok, || {
                format!(
                    "a reduct of {} is weakly but not strongly normalizing in {calculus}",
                    print_canonical(t)
                )
            });
        }
    }
    out.push(r);
    out
}

fn terminates_within(t: &Term, calculus: Calculus, labels: &[RuleLabel], fuel: usize) -> bool {
    let mut cur = t.clone();
    for _ in 0..fuel {
        let redexes = calculus
            .enumerate(&cur)
            .expect("corpus terms are well formed");
        let Some(r) = redexes.into_iter().find(|r| labels.contains(&r.label)) else {
            return true;
        };
        cur = calculus.apply(&cur, &r).expect("enumerated redex applies");
    }
    false
}

// ---------------------------------------------------------------------
// The macro-step decomposition.

/// Positive terms that carry an eme+ redex by construction: a random
/// body under `[x <- y z][y <- \w.u]` with extra frames in between.
fn eme_instances(seed: u64, count: usize) -> Vec<Term> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u_budget = rng.gen_range(1..=8);
            let body_budget = rng.gen_range(1..=6);
            let u = random_terms(Grammar::Positive, rng.gen(), u_budget, 1)
                .pop()
                .unwrap();
            let body = random_terms(Grammar::Positive, rng.gen(), body_budget, 1)
                .pop()
                .unwrap();
            let z = if rng.gen_bool(0.5) { "yy" } else { "zz" };
            let mut t = Term::es(body, "xx", Term::app(Term::var("yy"), Term::var(z)));
            // a few interposed evaluation-context frames
            for _ in 0..rng.gen_range(0..3usize) {
                let filler = random_terms(Grammar::Positive, rng.gen(), 4, 1)
                    .pop()
                    .unwrap();
                let Term::Es(_, _, content) = &filler else {
                    continue;
                };
                t = Term::Es(
                    Box::new(t),
                    Name::new(format!("f{}", rng.gen_range(0..3))),
                    content.clone(),
                );
            }
            Term::es(t, "yy", Term::abs("ww", u))
        })
        .collect()
}

/// Every eme+ step equals the e+ then m+ composition through the
/// explicit variant.
pub fn check_decomposition(count: usize, seed: u64) -> CheckReport {
    let mut r = CheckReport::new(
        "macro-step-decomposition",
        format!("{count} random positive terms plus synthesized applied-sharing instances"),
    );
    let mut corpus = random_terms(Grammar::Positive, seed.wrapping_add(4), 20, count / 2);
    corpus.extend(eme_instances(seed.wrapping_add(12), count - count / 2));
    corpus.extend(enumerate_terms(Grammar::Positive, 10));
    for t in corpus {
        let redexes = match Calculus::OPos.enumerate(&t) {
            Ok(rs) => rs,
            Err(e) => {
                r.check(false, || format!("{e}"));
                continue;
            }
        };
        for rx in redexes.iter().filter(|rx| rx.label == RuleLabel::EmePlus) {
            let macro_reduct = Calculus::OPos.apply(&t, rx).expect("redex applies");
            r.check(is_positive(&macro_reduct), || {
                format!("grammar broken: {}", print_canonical(&macro_reduct))
            });
            // e+ then m+ in the explicit variant
            let e_plus = Redex::with_occurrence(
                RuleLabel::EPlus,
                rx.anchor.clone(),
                rx.occurrence.clone().expect("eme+ has a target frame"),
            );
            let mid = apply_oxpos(&t, &e_plus).expect("e+ applies to the same frame");
            let ms: Vec<Redex> = enumerate_oxpos(&mid)
                .expect("mid term is explicit positive")
                .into_iter()
                .filter(|m| m.label == RuleLabel::MPlus)
                .collect();
            let joined = ms
                .iter()
                .any(|m| alpha_eq(&apply_oxpos(&mid, m).expect("m+ applies"), &macro_reduct));
            r.check(joined, || {
                format!(
                    "{}: eme+ is not e+ then m+ (mid {})",
                    print_canonical(&t),
                    print_canonical(&mid)
                )
            });
        }
    }
    r
}

// ---------------------------------------------------------------------
// Typing.

pub fn check_typing(count: usize, seed: u64) -> Vec<CheckReport> {
    let mut out = Vec::new();

    let mut r = CheckReport::new("typing-fixed-cases", "identity and self-application");
    let id_img = translate(&parse_term("\\x. x").unwrap(), &mut NameGen::new());
    match infer_type_positive(&id_img, &BTreeMap::new()) {
        Ok(ty) => r.check(ty.to_string() == "a => a", || {
            format!("identity typed {ty}")
        }),
        Err(e) => r.check(false, || format!("identity untypable: {e}")),
    }
    let self_app = parse_term("w[w <- x x]").unwrap();
    r.check(
        matches!(
            infer_type_positive(&self_app, &BTreeMap::new()),
            Err(crate::positive::TypeError::Untypable(_))
        ),
        || "self-application should fail the occurs check".into(),
    );
    out.push(r);

    let mut r = CheckReport::new(
        "typing-preserved-by-translation",
        format!("{count} random simply-typed source terms"),
    );
    let mut found = 0;
    for t in random_terms(Grammar::Vsc, seed.wrapping_add(5), 12, count * 40) {
        if found >= count {
            break;
        }
        let Ok(src_ty) = infer_type_vsc(&t, &BTreeMap::new()) else {
            continue;
        };
        found += 1;
        let image = translate(&t, &mut NameGen::new());
        match infer_type_positive(&image, &BTreeMap::new()) {
            Ok(img_ty) => r.check(src_ty.canonical() == img_ty.canonical(), || {
                format!(
                    "{}: source {} vs image {}",
                    print_canonical(&t),
                    src_ty,
                    img_ty
                )
            }),
            Err(e) => r.check(false, || {
                format!("{} became untypable: {e}", print_canonical(&t))
            }),
        }
    }
    r.check(found >= count, || {
        format!("only {found} typable terms found, wanted {count}")
    });
    out.push(r);
    out
}

// ---------------------------------------------------------------------
// Context classifier agreement and module invariants.

/// Both classifier implementations agree and partition all open positions.
pub fn check_partition(size: usize) -> CheckReport {
    let mut r = CheckReport::new(
        "useful-partition",
        format!("all open positions of vsc terms <= {size} nodes"),
    );
    for t in enumerate_terms(Grammar::Vsc, size) {
        for hole in open_positions(&t) {
            let a = context_class(&t, &hole);
            let b = context_class_grammar(&t, &hole);
            r.check(a == b, || {
                format!("classifiers disagree at {hole} in {}", print_canonical(&t))
            });
            if let (Ok(ia), Ok(ib)) = (a, b) {
                r.check(ia.class == ib.class && ia.sub == ib.sub, || {
                    format!("verdicts differ at {hole} in {}", print_canonical(&t))
                });
            }
        }
    }
    r
}

fn open_positions(t: &Term) -> Vec<Path> {
    let mut out = vec![Path::root()];
    fn go(t: &Term, pos: &Path, out: &mut Vec<Path>) {
        match t {
            Term::Var(_) | Term::Abs(_, _) => {}
            Term::App(f, a) => {
                let pf = pos.child(Step::AppFun);
                let pa = pos.child(Step::AppArg);
                out.push(pf.clone());
                out.push(pa.clone());
                go(f, &pf, out);
                go(a, &pa, out);
            }
            Term::Es(b, _, c) => {
                let pb = pos.child(Step::EsBody);
                let pc = pos.child(Step::EsContent);
                out.push(pb.clone());
                out.push(pc.clone());
                go(b, &pb, out);
                go(c, &pc, out);
            }
        }
    }
    go(t, &Path::root(), &mut out);
    out
}

/// Variable-set inclusions, decomposition bijection, renaming congruence.
pub fn check_syntax_invariants(size: usize) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let corpus = enumerate_terms(Grammar::Vsc, size);

    let mut r = CheckReport::new(
        "free-variable-inclusions",
        format!("vsc terms <= {size} nodes"),
    );
    for t in &corpus {
        let all = free_vars(t, VarMode::All);
        let open = free_vars(t, VarMode::Open);
        let applied = free_vars(t, VarMode::AppliedOpen);
        r.check(open.is_subset(&all) && applied.is_subset(&open), || {
            format!("inclusion fails on {}", print_canonical(t))
        });
    }
    out.push(r);

    let mut r = CheckReport::new(
        "positive-decomposition-bijection",
        format!("xpositive terms <= {} nodes", size + 2),
    );
    for t in enumerate_terms(Grammar::XPositive, size + 2) {
        match decompose_positive(&t) {
            Ok((path, head)) => {
                let back = t.with_replaced(&path, Term::Var(head)).expect("path valid");
                r.check(alpha_eq(&back, &t), || {
                    format!("plug of decompose differs on {}", print_canonical(&t))
                });
            }
            Err(e) => r.check(false, || format!("{e} on {}", print_canonical(&t))),
        }
    }
    out.push(r);

    let mut r = CheckReport::new("renaming-congruence", format!("vsc terms <= {size} nodes"));
    let x = Name::new("a");
    let y = Name::new("zz");
    for t in corpus.iter().take(2000) {
        let canon = crate::syntax::canonicalize(t);
        let (a, b) = (rename(t, &x, &y), rename(&canon, &x, &y));
        r.check(alpha_eq(&a, &b), || {
            format!("congruence fails on {}", print_canonical(t))
        });
    }
    out.push(r);
    out
}

/// Translation validity, compositionality, absorption, idempotence.
pub fn check_translation_invariants(count: usize, seed: u64) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let terms = random_terms(Grammar::Vsc, seed.wrapping_add(6), 15, count);

    let mut r = CheckReport::new("translation-validity", format!("{count} random vsc terms"));
    for t in &terms {
        let image = translate(t, &mut NameGen::new());
        r.check(is_explicit_positive(&image), || {
            format!("{} -> {}", print_canonical(t), print_canonical(&image))
        });
    }
    out.push(r);

    // compositionality over the spine of each term that has one
    let mut r = CheckReport::new(
        "translation-compositionality",
        format!("spine splits of {count} random vsc terms"),
    );
    for t in &terms {
        let mut depth = 0;
        let mut cur = t;
        while let Term::Es(b, _, _) = cur {
            depth += 1;
            cur = b;
        }
        for k in 1..=depth {
            let hole = Path(vec![Step::EsBody; k]);
            let inner = t.get(&hole).unwrap().clone();
            let mut g1 = NameGen::new();
            let ct = translate_subst_ctx(t, &hole, &mut g1).unwrap();
            let mut g2 = NameGen::new();
            let inner_tr = translate(&inner, &mut g2);
            let composed = ct.ctx.plug(ct.renaming.apply(&inner_tr));
            // the context skeleton preserves the grammar and its binders
            // are disjoint from the renaming's domain
            r.check(is_explicit_positive(&composed), || {
                format!("plug leaves the grammar on {}", print_canonical(t))
            });
            r.check(
                ct.renaming
                    .iter()
                    .all(|(k, _)| ct.ctx.frames.iter().all(|(b, _)| b != k)),
                || {
                    format!(
                        "renaming domain meets ctx binders on {}",
                        print_canonical(t)
                    )
                },
            );
            let direct = translate(t, &mut NameGen::new());
            r.check(alpha_eq(&composed, &direct), || {
                format!("split at depth {k} differs on {}", print_canonical(t))
            });
        }
    }
    out.push(r);

    let mut r = CheckReport::new(
        "translation-absorption",
        format!("variable steps of {count} random vsc terms"),
    );
    for t in &terms {
        let image = translate(t, &mut NameGen::new());
        for rx in Calculus::vsc().enumerate(t).unwrap() {
            if !matches!(rx.label, RuleLabel::EVar | RuleLabel::GcVar) {
                continue;
            }
            let u = Calculus::vsc().apply(t, &rx).unwrap();
            let image_u = translate(&u, &mut NameGen::new());
            r.check(alpha_eq(&image, &image_u), || {
                format!("{} step not absorbed on {}", rx.label, print_canonical(t))
            });
        }
    }
    out.push(r);

    let mut r = CheckReport::new(
        "translation-idempotence",
        format!("{count} random positive terms"),
    );
    for t in random_terms(Grammar::Positive, seed.wrapping_add(7), 15, count) {
        let image = translate(&t, &mut NameGen::new());
        r.check(alpha_eq(&image, &t), || {
            format!("{} -> {}", print_canonical(&t), print_canonical(&image))
        });
    }
    out.push(r);
    out
}

/// Grammar preservation and stability of steps under renamings.
pub fn check_positive_invariants(count: usize, seed: u64) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(8));

    let mut r = CheckReport::new(
        "grammar-preservation",
        format!("steps of {count} random positive / explicit-positive terms"),
    );
    for t in random_terms(Grammar::Positive, seed.wrapping_add(9), 18, count) {
        for rx in Calculus::OPos.enumerate(&t).unwrap() {
            let u = Calculus::OPos.apply(&t, &rx).unwrap();
            r.check(is_positive(&u), || {
                format!("opos step leaves the grammar on {}", print_canonical(&t))
            });
        }
    }
    for t in random_terms(Grammar::XPositive, seed.wrapping_add(10), 18, count) {
        for rx in Calculus::OXPos.enumerate(&t).unwrap() {
            let u = Calculus::OXPos.apply(&t, &rx).unwrap();
            r.check(is_explicit_positive(&u), || {
                format!("oxpos step leaves the grammar on {}", print_canonical(&t))
            });
        }
    }
    out.push(r);

    let mut r = CheckReport::new(
        "step-stability-under-renaming",
        format!("{count} random explicit-positive steps"),
    );
    for t in random_terms(Grammar::XPositive, seed.wrapping_add(11), 18, count) {
        let redexes = Calculus::OXPos.enumerate(&t).unwrap();
        if redexes.is_empty() {
            continue;
        }
        use rand::Rng;
        let rx = &redexes[rng.gen_range(0..redexes.len())];
        let u = Calculus::OXPos.apply(&t, rx).unwrap();
        // a random renaming x <- y over the free variables
        let frees: Vec<Name> = fv(&t).into_iter().collect();
        if frees.is_empty() {
            continue;
        }
        let from = frees[rng.gen_range(0..frees.len())].clone();
        let to = Name::new(format!("r{}", rng.gen_range(0..3)));
        let t2 = rename(&t, &from, &to);
        let u2 = rename(&u, &from, &to);
        let ok = Calculus::OXPos
            .enumerate(&t2)
            .unwrap()
            .iter()
            .any(|r2| alpha_eq(&Calculus::OXPos.apply(&t2, r2).unwrap(), &u2));
        r.check(ok, || {
            format!(
                "renamed {} has no step to the renamed reduct",
                print_canonical(&t)
            )
        });
    }
    out.push(r);
    out
}
