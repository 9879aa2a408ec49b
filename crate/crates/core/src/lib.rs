//! Simulation and analysis of asynchronous push-only sum-weight gossip.
//!
//! - [`graph`]: graphs, generators, edge-list I/O, message sampling.
//! - [`spectral`]: Cheeger constant (exhaustive and sweep) and normalized
//!   Laplacian `lambda2`.
//! - [`diffusion`]: the reach process, Monte Carlo hitting times, exact
//!   oracles.
//! - [`bounds`]: moments of the diffusion time and message budgets.
//! - [`gossip`]: sum-weight averaging with the accumulated product matrix and
//!   its error bounds.
//! - [`experiments`]: the figure reproductions and CSV/SVG writers used by
//!   the command-line tool.

pub mod bounds;
pub mod diffusion;
pub mod error;
pub mod experiments;
pub mod gossip;
pub mod graph;
pub mod spectral;

pub use error::{Error, Result};
