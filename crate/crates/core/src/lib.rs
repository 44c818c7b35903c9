//! Evaluation toolkit that treats programs as objects of a programming-language
//! category.
//!
//! Equivalence-preserving and equivalence-breaking edits ([`morphism`]) turn one
//! program into another; translation, explanation and reproduction tasks
//! ([`taskgen`]) ask a model to act as a map between categories; the
//! [`harness`] judges the answers either by reading an explicit True/False
//! verdict or by compiling and running the produced code against the
//! dataset's tests, and [`metrics`] turns those judgments into pairing
//! precision and pass@1.
//!
//! The stages are independent and communicate through newline-delimited JSON
//! records ([`jsonl`]), so each can be run, inspected or replaced on its own.
//! [`pipeline`] chains them from a single run configuration.

pub mod corpus;
pub mod error;
pub mod harness;
pub mod jsonl;
pub mod lang;
pub mod metrics;
pub mod modelgw;
pub mod morphism;
pub mod pairgen;
pub mod pipeline;
pub mod syntax;
pub mod taskgen;

pub use corpus::{CodeObject, DatasetDescriptor, DatasetName, SolutionVerdict, TestSuite};
pub use error::{Error, Result};
pub use lang::Language;
pub use morphism::{AppliedMorphism, MorphismChain, MorphismKind, MorphismSite};
pub use pairgen::{Distance, EqLabel, EvalPair};
