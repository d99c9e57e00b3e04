//! Exact calculus of barter exchange-rate ensembles over four goods.
//!
//! Four goods `F`, `A`, `R`, `M` trade pairwise at positive rational rates.
//! Six *principal* rates (FA, FR, FM, AR, AM, RM) determine all twelve
//! directed rates through reciprocals. An ensemble is *balanced* when no
//! two-hop exchange through a mediator beats the direct rate.
//!
//! Over a fixed balanced base ensemble and a rational scale `alpha > 1`,
//! the lattice ensembles are those whose rates differ from the base by
//! integer powers of `alpha`; they are identified with exponent vectors in
//! `Z^6`. Every arbitrage acts linearly on these exponents, independently
//! of `alpha`, which makes the whole dynamics exactly computable in
//! integer arithmetic:
//!
//! * [`rates`] - goods, rate ensembles, exponent vectors, balanced codes,
//!   and the exact rational realization of lattice points;
//! * [`arbitrage`] - the 24 conditional (weak) and 12 unconditional
//!   (strong) arbitrages, chains, traces, and the weak/strong
//!   correspondence;
//! * [`matrix`] - the row-vector matrix representation of strong
//!   arbitrages, the change of basis separating balance defects, and the
//!   block decomposition;
//! * [`semigroup`] - kernel vectors, the key transition graph, the
//!   polyhedral norm certificate, exact product analysis (characteristic
//!   polynomials, ranks), stabilizers and destabilizers;
//! * [`search`] - deduplicated breadth-first reachability over chains,
//!   optimal-chain tables, and the bundled verification routines;
//! * [`reference`] - the reference tables and matrices that generated
//!   outputs are compared against, plus the catalogue of known
//!   discrepancies in those tables.
//!
//! All arithmetic is exact: `i64`/`i128` on the exponent lattice and
//! arbitrary-precision rationals in rate space. No floating point enters
//! any verification path.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod arbitrage;
pub mod matrix;
pub mod rates;
pub mod reference;
pub mod search;
pub mod semigroup;

use thiserror::Error;

/// Errors reported by the calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A rate ensemble contained a non-positive rate.
    #[error("rate {label} must be positive, got {value}")]
    NonPositiveRate {
        /// Which principal rate was rejected.
        label: &'static str,
        /// Offending value, rendered as `p/q`.
        value: String,
    },
    /// The scale factor must exceed one.
    #[error("scale alpha must be > 1, got {value}")]
    AlphaNotAboveOne {
        /// Offending value, rendered as `p/q`.
        value: String,
    },
    /// A base ensemble used for realization must be balanced.
    #[error("base ensemble is not balanced: {detail}")]
    UnbalancedBase {
        /// Which product identity failed.
        detail: String,
    },
    /// An index was outside its valid range.
    #[error("{what} must lie in {range}, got {got}")]
    IndexOutOfRange {
        /// What kind of index was rejected.
        what: &'static str,
        /// Human-readable valid range.
        range: &'static str,
        /// Offending value.
        got: i64,
    },
    /// A chain string could not be parsed.
    #[error("malformed chain string: {detail}")]
    MalformedChain {
        /// What went wrong.
        detail: String,
    },
    /// Neither conjugation direction reproduces the reference decomposition.
    #[error("no conjugation direction matches the reference block form for generator {generator}")]
    NoConjugationMatch {
        /// Strong generator id.
        generator: u8,
    },
    /// A point set handed to the hull builder did not span three
    /// dimensions.
    #[error("degenerate point set for hull computation: {detail}")]
    DegenerateHull {
        /// Why the set was rejected.
        detail: String,
    },
    /// A state-count budget was exhausted before the requested depth.
    #[error("state budget of {budget} states exceeded at depth {depth}")]
    StateBudgetExceeded {
        /// Configured budget.
        budget: usize,
        /// Depth at which the budget ran out.
        depth: usize,
    },
    /// An iteration budget was exhausted before a repeat was found.
    #[error("no period found within {budget} passes")]
    NoPeriod {
        /// Configured pass budget.
        budget: usize,
    },
    /// A verified claim was falsified; the evidence is attached.
    #[error("NON-CONFORMING: {claim}; counterexample: {evidence}")]
    NonConforming {
        /// The claim that failed.
        claim: String,
        /// Concrete counterexample data.
        evidence: String,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub use arbitrage::{
    apply_chain, apply_strong, apply_weak, Chain, Flavor, StrongId, Trace, WeakId,
};
pub use rates::{
    BalancedBase, BalancedCode, ExponentEnsemble, Good, PrincipalIndex, RateEnsemble,
};

/// The distinguished start state: one extra power of the scale on the FA
/// rate, all other exponents zero.
pub const START: ExponentEnsemble = ExponentEnsemble::new([1, 0, 0, 0, 0, 0]);
