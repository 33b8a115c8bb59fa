//! High-precision scalar machinery: complex Gamma and Riemann zeta,
//! Bernoulli numbers, Stieltjes data, Lambert W.
//!
//! Everything here is a pure function of `(input, precision)`; constant
//! caches are write-once per precision.

pub mod bernoulli;
pub mod gamma;
pub mod lambert;
pub mod zeta;

pub use bernoulli::{bernoulli, zeta_one_minus};
pub use gamma::{gamma, gamma_laurent_at_neg, sin_pi};
pub use lambert::{lambert_w, lambert_w_asymptotic};
pub use zeta::{riemann_zeta, stieltjes_gamma1, zeta_deriv_em, zeta_deriv_neg, zeta_laurent_at_one};
