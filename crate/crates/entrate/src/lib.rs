//! Deterministic LOCC transformability of bipartite pure entangled states,
//! decided exactly.
//!
//! A bipartite pure state is captured by its Schmidt spectrum, a descending
//! probability vector of exact rationals. Nielsen's criterion reduces the
//! question "can `a` be turned into `b` deterministically by local operations
//! and classical communication?" to a majorization check between those
//! vectors, and the many-copy question to majorization between tensor powers.
//! Powers of a spectrum contain astronomically many entries but only
//! polynomially many distinct values, so everything here runs on grouped
//! (value, multiplicity) spectra and stays exact.
//!
//! On top of the feasibility kernel the crate computes:
//!
//! * lower bounds on the deterministic exchange rate via the best observed
//!   copy ratio `n/m` ([`rates::rate_lower_bound`]),
//! * the matching upper bound as an infimum of Renyi entropy ratios
//!   ([`entropy::entropy_ratio`]),
//! * the closed-form rate when the target is maximally entangled
//!   ([`rates::closed_form_uniform_target`]),
//! * catalyst verification and a small-catalyst search ([`rates`]),
//! * the maximal conversion probability when a deterministic protocol does
//!   not exist ([`rates::max_conversion_probability`]).
//!
//! With the default `parallel` feature the copy-ratio sweep and the entropy
//! grid run on rayon; disabling it swaps in sequential loops with identical
//! results.

pub mod entropy;
pub mod majorization;
pub mod oracle;
pub mod rates;
pub mod rational;
pub mod spectrum;

pub use entropy::{
    asymptotic_rate, entropy_ratio, renyi, renyi_power, EntropyRatioResult, RenyiOrder,
};
pub use majorization::{
    majorizes, max_entangled_reachable, nielsen_transformable, MajorizationVerdict,
    MajorizationWitness,
};
pub use oracle::{naive_majorizes, naive_tensor_power, DenseSpectrum};
pub use rates::{
    catalyst_search_2level, catalyst_verify, closed_form_f_of_m, closed_form_uniform_target,
    default_n_cap, f_of_m, feasibility_threshold, max_conversion_probability, rate_lower_bound,
    rate_report, CatalystChoice, CatalystReport, LowerWitness, RateReport, SearchBudget,
};
pub use rational::Rational;
pub use spectrum::{parse_spectrum, tensor_power, tensor_product, GroupedSpectrum, SchmidtSpectrum};

/// Errors surfaced by parsing, validation, and budgeted searches.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An entry could not be read as a rational number.
    #[error("cannot parse {0:?} as a rational (expected \"p/q\", an integer, or a decimal)")]
    Parse(String),

    /// A spectrum entry was negative.
    #[error("spectrum entry {0} is negative")]
    NegativeEntry(String),

    /// The spectrum does not sum to exactly one.
    #[error("spectrum sums to {sum}, off by {deficit}")]
    SumNotOne { sum: String, deficit: String },

    /// A spectrum had no entries.
    #[error("spectrum has no entries")]
    EmptySpectrum,

    /// A zeroth tensor power was requested.
    #[error("tensor power must be at least 1")]
    ZeroPower,

    /// The state is a product state (single Schmidt coefficient), so
    /// entanglement rates are undefined for it.
    #[error("state is not entangled (single Schmidt coefficient)")]
    ProductState,

    /// No feasible copy pair exists within the copy budget; the smallest
    /// source block that could possibly work is reported.
    #[error("no feasible copy pair with m <= {m_max}; the first candidate source block size is m = {threshold}")]
    BudgetTooSmall { m_max: u32, threshold: u64 },

    /// A dense oracle computation would exceed its size guard.
    #[error("dense spectrum would hold {size} entries, above the guard of {guard}")]
    SizeGuardExceeded { size: String, guard: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
