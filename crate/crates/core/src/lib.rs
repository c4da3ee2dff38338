//! Exact computation of topological invariants of complex complete intersections.
//!
//! A complete intersection `X_n(d_1, …, d_r) ⊂ CP^{n+r}` is described entirely by its
//! complex dimension and its multidegree. From that data this crate computes
//!
//! * power sums and elementary symmetric values ([`symfun`]),
//! * total degree, Chern and Pontrjagin coefficients and the Euler characteristic
//!   ([`invariants`]),
//! * pairwise diffeomorphism / homeomorphism verdicts ([`classify`]),
//! * the dimension of the moduli-space component and the composed-multidegree families
//!   whose members are diffeomorphic but sit in components of different dimension
//!   ([`moduli`]),
//! * bounded collision searches and a regression report over the published example
//!   tables ([`search`]).
//!
//! All arithmetic is exact. Big integers cross the JSON boundary as decimal strings.

pub mod classify;
pub mod error;
pub mod exactmath;
pub mod invariants;
pub mod moduli;
pub mod parallel;
pub mod search;
pub mod symfun;

pub use classify::{classify_pair, traving_condition, ClassificationVerdict, TravingReport};
pub use error::{Error, Result};
pub use exactmath::{binomial, factorize, BigInt, PrimeFactorization, Rational};
pub use invariants::{invariant_profile, InvariantProfile, MultiDegree};
pub use moduli::{moduli_dimension, BasePair};
