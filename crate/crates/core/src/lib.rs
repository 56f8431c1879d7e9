//! Dataset valuation toolkit.
//!
//! Computes how much each data owner contributes to a cooperative machine
//! learning task. The crate provides exact Shapley values by full enumeration
//! together with a family of budget-conscious estimators (plain and
//! antithetic Monte Carlo permutation sampling, multilinear-extension
//! sampling, and the discrete-uniform proxies DU-Shapley / DU-Shapley++ that
//! exploit utilities depending only on aggregate dataset size), executable
//! error bounds for comparing them, a closed-form linear-regression game with
//! a Monte Carlo oracle, CSV-backed games trained with truncated SGD, and a
//! reproducible experiment harness.

pub mod bench;
pub mod bounds;
pub mod empirical;
pub mod error;
pub mod estimators;
pub mod exact;
pub mod game;
mod kahan;
pub mod regression;
pub mod rng;

pub use error::{Error, Result};
pub use game::{
    aggregate_size, cardinal_to_set_utility, normalize_utility, CardinalUtility, Coalition,
    GameSpec, PlayerId, SetUtility, ValuationVector,
};
