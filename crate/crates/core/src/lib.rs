//! Joint decoding of argumentation-mining sub-task scores.
//!
//! Separately trained classifiers give per-site scores for several related
//! sub-tasks. This crate turns those scores into one globally consistent
//! labelling, either exactly with a 0-1 integer program over corpus
//! constraints ([`microtext`], [`essays`]) or with a maximum spanning
//! arborescence over an evidence graph ([`mst`]). The [`eval`] module holds
//! the scoring and simulation harness and [`synth`] generates corpora with
//! known gold structure.
//!
//! ```
//! use argjoint::{microtext, synth, JointWeights};
//!
//! let inst = synth::gen_microtext("demo", 5, &synth::NoiseSpec::new(0.0, 7)).unwrap();
//! let decoded = microtext::decode_ilp(&inst, &JointWeights::default()).unwrap().unwrap();
//! assert_eq!(decoded.labels, inst.gold);
//! ```

pub mod commands;
pub mod error;
pub mod essays;
pub mod eval;
pub mod ilp;
pub mod microtext;
pub mod model;
pub mod mst;
pub mod synth;

pub use error::{Error, Result};
pub use eval::{ArgInstance, Method, Task};
pub use ilp::{brute_force, solve, IlpProblem, IlpSolution, LinearConstraint, Sense, Status};
pub use microtext::Decoded;
pub use model::{
    check_gold_constraints, validate_instance, AnyInstance, ComponentType, CorpusKind, EssayInstance, EssayLabels,
    EssayScores, Function, JointWeights, MicrotextInstance, MicrotextLabels, MicrotextScores, Variant,
};
