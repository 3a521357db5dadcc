//! Exact sum-of-squares certificates of positivity on the hypercube
//! `[-1, 1]^n`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything that touches files,
//! JSON or the command line lives in the companion `cube-psatz-cli` crate.
//!
//! - [`poly`]: sparse multivariate polynomials over the rationals, with a
//!   text parser and canonical printer.
//! - [`chebyshev`]: Chebyshev polynomials and Markov-type inequalities.
//! - [`certificates`]: weighted sums of squares, generator sets, quadratic
//!   module / preordering certificates and their exact verifier.
//! - [`identities`]: explicit certificates for the degree-shift identities.
//! - [`lifting`]: moves preordering certificates on a scaled cube into the
//!   quadratic module of the unit cube.
//! - [`bounds`]: effective degree formulas and lower-bound diagnostics.
//! - [`enclosure`]: certified rational enclosures of pi, e^5, logs and roots.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bounds;
pub mod certificates;
pub mod chebyshev;
pub mod enclosure;
pub mod error;
pub mod identities;
pub mod lifting;
pub mod poly;
pub mod rational;

pub use certificates::{
    GeneratorLabel, GeneratorSet, PreorderCertificate, QModCertificate, SosExpression, Subset, VerifyReport,
    WeightedSquare,
};
pub use error::{BoundsError, CertificateError, ChebyshevError, IdentityError, LiftError, PolyError};
pub use poly::{parse, Degree, Monomial, Polynomial};
pub use rational::Rational;

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
/// Output order always matches input order.
#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Sync, U: Send>(
    items: &[T],
    f: impl Fn(&T) -> U + Sync + Send,
) -> alloc::vec::Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, U>(items: &[T], f: impl Fn(&T) -> U) -> alloc::vec::Vec<U> {
    items.iter().map(f).collect()
}
