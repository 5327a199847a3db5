//! Γ, ζ, the Φ kernel and the Taylor jet of Ξ.

mod bernoulli;
mod cache;
mod gamma;
mod phi;
mod xi;
mod zeta;

pub use bernoulli::bernoulli;
pub use cache::{xi_taylor_cached, JetCache, CODE_VERSION, FORMAT_VERSION};
pub use gamma::{digamma_real, gamma_ball, lngamma_real};
pub use phi::{phi_density, phi_moments, QuadratureSpec};
pub use zeta::{hurwitz_zeta, sm1_zeta, sm1_zeta_series, zeta_ball};
pub use xi::{
    intersect_jets, xi_at_zero_direct, xi_decay_bound, xi_derivative_from_rotated, xi_eval, xi_taylor, XiJetRequest,
    XiMethod,
};
