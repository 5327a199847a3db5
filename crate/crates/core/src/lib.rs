//! Certified laboratory for Jensen polynomials of real entire functions.
//!
//! The crate builds Jensen polynomials from Taylor jets, decides
//! hyperbolicity (real-rootedness) with certificates, implements the
//! sector/composition machinery around Obreschkoff's operator `P(D)Q`, and
//! computes the Taylor jet of the Riemann Ξ function by two independent
//! certified methods.
//!
//! Module map:
//!
//! * [`numeric`]: exact rationals, midpoint-radius balls, elementary functions.
//! * [`poly`]: polynomials over rationals or balls, Taylor jets, Jensen
//!   polynomials, half-form transform, `P(D)Q`.
//! * [`roots`]: Sturm counting, certified root enclosures, regions.
//! * [`specialfn`]: Γ, ζ, the Φ kernel and the Ξ jet.
//! * [`theorems`]: randomized and exhaustive verification harnesses.

pub mod error;
pub mod numeric;
pub mod poly;
pub mod roots;
pub mod specialfn;
pub mod theorems;

pub use error::{Error, Result};
