//! The open (micro-step) value substitution calculus: redex enumeration,
//! rule application, the useful-step classifier and core normal forms.

pub mod engine;
pub mod normal;
pub mod redex;
pub mod useful;

pub use engine::{apply_vsc, enumerate_core, enumerate_vsc, open_free_occurrences, VscOpts};
pub use normal::is_core_normal;
pub use redex::{Redex, RuleLabel, StepError};
pub use useful::{
    classify_usefulness, context_class, context_class_grammar, enumerate_useful_alt, ContextClass,
    ContextError, ContextInfo, UsefulnessVerdict,
};
