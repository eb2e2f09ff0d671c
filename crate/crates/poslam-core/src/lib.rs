//! An executable laboratory for the open value substitution calculus and
//! the (explicit) positive lambda-calculus: reduction engines, the
//! useful-step classifier, the translation between the calculi, and a
//! harness that checks their meta-theory on enumerated and random terms.

pub mod syntax;
pub mod vsc;

pub use syntax::{
    alpha_eq, canonical_key, canonicalize, classify_term, decompose_positive, free_vars,
    parse_term, print_canonical, print_term, rename, subst_value, Name, NameGen, ParseError, Path,
    Step, Term, TermClass, VarMode,
};
pub use vsc::{
    apply_vsc, classify_usefulness, context_class, enumerate_core, enumerate_useful_alt,
    enumerate_vsc, is_core_normal, ContextClass, Redex, RuleLabel, StepError, UsefulnessVerdict,
    VscOpts,
};

pub mod positive;
pub use positive::{
    apply_opos, apply_oxpos, enumerate_opos, enumerate_oxpos, infer_type_positive, infer_type_vsc,
    SimpleType, TypeError,
};

pub mod translate;
pub use translate::{translate, translate_subst_ctx, CtxTranslation, EvalCtx, Renaming};

pub mod harness;
pub use harness::{
    bench_omega, check_diamond, enumerate_terms, factorize_core, postpone_gc, random_terms,
    reduction_graph, run_strategy, run_suite, simulate_core, Calculus, CheckReport, Grammar,
    OmegaVariant, ReductionGraph, Strategy, SuiteOpts, Trace,
};
