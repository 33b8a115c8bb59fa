//! # recurpart
//!
//! Exact and asymptotic counting of non-distinct partitions over the
//! Fibonacci numbers and, more generally, over strictly increasing linear
//! recurrence sequences with a dominant real root.
//!
//! The crate is organized as the layers of that computation:
//!
//! - [`seqkit`] — recurrence sequences, characteristic roots, Binet data;
//! - [`bigcount`] — exact partition counts (the ground truth everything
//!   else is tested against);
//! - [`special`] — complex Gamma and Riemann zeta, Bernoulli numbers,
//!   Stieltjes constants, Lambert W;
//! - [`zetarec`] — the recurrence zeta functions: direct series, analytic
//!   continuation, pole lattice, residues, Laurent data;
//! - [`genlog`] — the small-s expansion of the log generating function,
//!   assembled from residues, with direct-summation oracles;
//! - [`saddle`] — saddle-point solving, Lambert-W inversion, and the
//!   log-periodic tables;
//! - [`asymp`] — the assembled asymptotic estimates and their error
//!   diagnostics;
//! - [`report`] — CSV emission for the CLI;
//! - [`verify`] — the acceptance harness behind `recurpart verify`.
//!
//! Start with the `examples/` directory: each file exercises one
//! capability end to end.

pub mod asymp;
pub mod bigcount;
pub mod error;
pub mod genlog;
pub mod hp;
pub mod report;
pub mod saddle;
pub mod seqkit;
pub mod special;
pub mod verify;
pub mod zetarec;

pub use error::{Error, Result};
pub use hp::{Cx, Prec};
pub use seqkit::RecurrenceSpec;

/// Environment variable consulted for the default decimal precision.
pub const DIGITS_ENV: &str = "RECURPART_DIGITS";

/// Default precision: the `RECURPART_DIGITS` override if set, else 64.
pub fn default_prec() -> Prec {
    std::env::var(DIGITS_ENV)
        .ok()
        .and_then(|v| v.parse::<u32>().ok())
        .map(Prec::new)
        .unwrap_or_default()
}
