//! Spectral gap estimates for Kähler manifolds.
//!
//! The first nonzero Neumann eigenvalue is bounded below three ways: by the
//! closed-form family in [`bounds`], by the first eigenvalue of a
//! one-dimensional comparison problem ([`model`], solved in [`eigensolver`]),
//! and by a numerical replay of the argument connecting the two ([`verify`]).
//!
//! ```
//! use spectral_gap::bounds::main_bound_sup;
//! use spectral_gap::eigensolver::{solve_neumann_first, SolverConfig};
//! use spectral_gap::model::{li_wang_problem, KahlerParams};
//!
//! let p = KahlerParams::new(2, 0.5, 0.5)?;
//! let mu = solve_neumann_first(&li_wang_problem(&p, 1.5)?, &SolverConfig::default())?.mu;
//! assert!(mu >= main_bound_sup(&p, 1.5)?.sup);
//! # Ok::<(), spectral_gap::Error>(())
//! ```
//!
//! The `spectral-gap` binary exposes the same operations from [`cli`].

pub mod bounds;
pub mod cli;
pub mod coeffs;
pub mod eigensolver;
pub mod error;
pub mod mesh;
pub mod model;
pub mod verify;

pub use error::{Error, Result};

// Snippets in the guide run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/coefficients.md")]
    mod coefficients {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/eigensolver.md")]
    mod eigensolver {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/verify.md")]
    mod verify {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
