//! Exact reduction of finite hidden information sources.
//!
//! A [`Generator`] is a Markov transition kernel `T(x, (y, s))` giving the
//! probability that internal state `x` moves to state `y` while emitting the
//! symbol `s`. Together with an initial distribution it defines a process
//! over output words. This crate computes those word distributions exactly,
//! decides when two generators produce the same process, and reduces a
//! generator to a minimal one generating the same set of processes:
//!
//! ```
//! use genred::{examples, reduce};
//!
//! let fixture = examples::catalog("golden-mean-redundant").unwrap();
//! let (event, reduced) = reduce::minimal_reduction(&fixture.generator);
//! assert_eq!(event.partition().num_blocks(), 2);
//! assert_eq!(reduced.reduced.num_states(), 2);
//! ```
//!
//! All probabilities are exact rationals ([`Rat`]); no comparison anywhere
//! uses a tolerance.

pub mod cli;
pub mod error;
pub mod examples;
pub mod format;
pub mod generator;
pub mod morphism;
pub mod partition;
pub mod process;
pub mod rat;
pub mod reduce;

pub use error::{Error, Result};
pub use generator::{
    delta, from_deterministic, from_nondeterministic, pushforward, DeterministicGenerator, Distribution, Generator,
    NondetMachine, ValidationReport, Violation,
};
pub use morphism::{check_transport, compose, relabel_outputs, Counterexample, Morphism};
pub use partition::Partition;
pub use process::{
    causal_state_partition, distinguishing_word, equivalent, sample, word_distribution, word_probability, Word,
    WordTable,
};
pub use rat::Rat;
pub use reduce::{
    event_reduction, minimal_reduction, sigma_observation_partition, state_reduction, state_reduction_reduced,
    EventReducedGenerator, ReductionResult,
};
