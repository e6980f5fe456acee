//! Ihara zeta functions of finite multigraphs, towers of covering graphs,
//! and the L2-zeta functions their normalised zetas converge to.
//!
//! The zeta function here is the reciprocal of the Euler product,
//! `Z(X,u) = (1-u^2)^(-chi) det(I - delta u + Q u^2)`, so `Z(X,0) = 1`.
//! A loop contributes 2 to both the adjacency diagonal and the degree.
//!
//! - [`graph`] and [`corpus`]: multigraphs, their spectra, test graphs.
//! - [`zeta`]: determinant polynomial, Euler-product oracle, zeros, the
//!   region `Omega` and analytic `N`-th roots.
//! - [`covers`]: voltage covers and towers.
//! - [`l2`]: torus symbols, quadrature and spectral distributions.
//! - [`lab`]: convergence measurements over grids in `Omega`.
//!
//! The guide in `book/` walks through each of these; its snippets are
//! compiled and run as doctests of this crate.
//!
//! ```
//! use ihara::{corpus, zeta::ZetaFunction};
//!
//! let report = ZetaFunction::of(&corpus::complete(4))?.zeros()?;
//! assert!(report.all_on_c(1e-8));
//! # Ok::<(), ihara::ZetaError>(())
//! ```

// `!(x < tol)` is how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod covers;
pub mod error;
pub mod graph;
pub mod l2;
pub mod lab;
pub mod poly;
pub mod zeta;

pub use error::{Result, ZetaError};
pub use graph::{build_graph, GraphFile, MultiGraph, RegularityInfo, SpectrumData};
pub use poly::IntPolynomial;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/finite-zeta.md")]
    mod finite_zeta {}
    #[doc = include_str!("../../../book/src/region.md")]
    mod region {}
    #[doc = include_str!("../../../book/src/covers.md")]
    mod covers {}
    #[doc = include_str!("../../../book/src/l2.md")]
    mod l2 {}
    #[doc = include_str!("../../../book/src/convergence.md")]
    mod convergence {}
}
