//! Exact-arithmetic real root finding for integer polynomials.
//!
//! Three engines compute the same quantity and check each other:
//!
//! - [`rewrite`]: replacement rules over a `2m`-letter alphabet, iterated on
//!   words, with signed symbol counting;
//! - the count-vector iteration `n ← R·n`, which is what symbol counting
//!   computes without materialising the words;
//! - [`recurrence`]: `m` integer sequences driven by the monic
//!   characteristic recurrence of the replacement matrix.
//!
//! [`shift`] reaches non-dominant real roots through `αI + βR`, [`oracle`]
//! is an independent floating-point solver used only for verification, and
//! [`delian`] renders the cube-doubling construction as SVG.

pub mod convergence;
pub mod delian;
pub mod error;
pub mod matrix;
pub mod numeric;
pub mod oracle;
pub mod poly;
pub mod recurrence;
pub mod rewrite;
pub mod shift;

pub use convergence::{Status, StoppingRule};
pub use error::{Error, Result};
pub use matrix::{IntMatrix, MatrixSource, ReplacementMatrix, ScaledCharCoeffs};
pub use poly::IntPolynomial;
pub use recurrence::RootEstimate;
