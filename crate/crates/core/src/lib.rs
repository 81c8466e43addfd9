//! Exact arithmetic for rational newforms of small level.
//!
//! The crate reconstructs and verifies a catalog of non-CM newforms with
//! rational coefficients at minimal levels 1, 2, 3, 4, 6 and 8, working
//! entirely in truncated q-expansions over the rationals:
//!
//! - [`qseries`]: truncated power series over Q, Eisenstein/eta/theta
//!   constructors, push-up and Hecke operators, quadratic twists.
//! - [`arith`]: Kronecker symbols, fundamental discriminants, twist
//!   multiplicity, factorization degree patterns over prime fields.
//! - [`rings`]: explicit generator models of the graded rings M(N) with
//!   Atkin-Lehner sign grading, expression trees, and monomial bases.
//! - [`dims`]: dimension formulas, local masses, and exact signed
//!   new-space dimensions.
//! - [`heuristic`]: the random-polynomial splitting model (ensemble
//!   volumes, splitting probabilities, exact lattice counts).
//! - [`galrep`]: normalized squares s_p, the s_p <-> factor-partition
//!   correspondence, matching newforms to defining polynomials,
//!   Eisenstein degeneracy, and congruence checks.
//! - [`shell`]: the data model for the shipped tables and the catalog,
//!   with queries and serialization.
//! - [`construct`]: reconstruction of the newform catalog from the ring
//!   models by exact linear algebra on Hecke operators.
//! - [`verify`]: the verification suites used by the CLI and the
//!   acceptance tests.

pub mod arith;
pub mod construct;
pub mod dims;
pub mod galrep;
pub mod heuristic;
pub mod qseries;
pub mod rings;
pub mod shell;
pub mod verify;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("eta product has fractional or negative leading exponent {0}/24")]
    EtaLeadingExponent(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("missing a_p for prime {0}")]
    MissingPrime(u64),
    #[error("a_p = {ap} is incompatible with sign formula at p = {p}, weight {k}")]
    AlSignMismatch { ap: String, p: u64, k: i64 },
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("leading coefficient of polynomial vanishes mod {0}")]
    LeadingCoefficientVanishes(u64),
    #[error("level {0} has no ring model")]
    UnsupportedLevel(u64),
    #[error("unknown generator `{0}` at level {1}")]
    UnknownGenerator(String, u64),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("series precision {have} is below requested bound {want}")]
    PrecisionTooLow { have: usize, want: usize },
    #[error("p = ell = {0} is excluded from mod-ell reduction")]
    PEqualsEll(u64),
    #[error("summatory bound {0} exceeds stored range 30")]
    SummatoryRange(u64),
    #[error("sign string `{0}` does not match level {1}")]
    SignMismatch(String, u64),
    #[error("data error: {0}")]
    Data(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
