//! The open positive lambda-calculus and its explicit variant: reduction
//! engines and simple-type inference.

pub mod engine;
pub mod types;

pub use engine::{apply_opos, apply_oxpos, enumerate_opos, enumerate_oxpos};
pub use types::{infer_type_positive, infer_type_vsc, SimpleType, TypeError};
