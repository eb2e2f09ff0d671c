//! Term representation, binding discipline and sub-grammar predicates
//! shared by all engines.

pub mod alpha;
pub mod grammar;
pub mod parse;
pub mod print;
pub mod subst;
pub mod term;
pub mod vars;

pub use alpha::{alpha_eq, canonical_key, canonicalize};
pub use grammar::{
    classify_term, decompose_positive, is_almost_answer, is_answer, is_explicit_positive,
    is_positive, is_value, spine_core, spine_frames, GrammarError, TermClass,
};
pub use parse::{parse_term, ParseError};
pub use print::{print_canonical, print_term};
pub use subst::{rename, subst_parallel, subst_value, SubstError};
pub use term::{freshen_name, Name, NameGen, Path, Step, Term};
pub use vars::{free_vars, fv, is_free_in, spine_head_unshadowed, VarMode};
