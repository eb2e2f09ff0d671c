//! Term generators, strategy runners, reduction-graph analyses and the
//! constructive meta-theory checks.

pub mod calculus;
pub mod gen;
pub mod graph;
pub mod omega;
pub mod report;
pub mod suites;
pub mod trace;
pub mod transform;

pub use calculus::Calculus;
pub use gen::{count_terms, enumerate_terms, random_term, random_terms, Grammar};
pub use graph::{
    check_diamond, reduction_graph, termination_status, DiamondReport, GraphNode, ReductionGraph,
    TerminationStatus,
};
pub use omega::{bench_omega, omega, OmegaCounters, OmegaVariant};
pub use report::CheckReport;
pub use suites::{run_suite, SuiteOpts, SUITE_NAMES};
pub use trace::{random_trace, run_strategy, Strategy, Trace, TraceStep};
pub use transform::{factorize_core, postpone_gc, simulate_core, TransformError};
