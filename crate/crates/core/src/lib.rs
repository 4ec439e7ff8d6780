//! Lifting-scheme wavelet transforms in dual analysis bases, and exact
//! shift-invariant multiresolution correlation of complex signals.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`] — coefficient fields (`f64`, exact rationals, Q(√2));
//! - [`laurent`] — Laurent polynomial algebra;
//! - [`filterbank`] — filter quadruples and polyphase matrices;
//! - [`lifting`] — lifting factorizations and lifted transforms;
//! - [`oracle`] — dense reference projections and correlations for testing;
//! - [`signal`] — complex sequences, chirps, backscatter and correlation oracles;
//! - [`sidwt`] — the shift-invariant decomposition tree and per-scale correlation.

pub mod error;
pub mod filterbank;
pub mod laurent;
pub mod lifting;
pub mod oracle;
pub mod scalar;
pub mod sidwt;
pub mod signal;

pub use error::{Error, Result};
pub use filterbank::{build_polyphase, Family, FilterQuadruple, PolyphaseMatrix, Role};
pub use laurent::LaurentPoly;
pub use lifting::{
    expand_scheme, forward_direct, forward_lift, inverse_lift, scheme_for, DwtPair, LiftingScheme, LiftingStep, OpCount,
};
pub use scalar::{QSqrt2, Rational, Scalar};
pub use signal::{circ_corr_bruteforce, circ_shift, inner_product, ComplexSeq};
