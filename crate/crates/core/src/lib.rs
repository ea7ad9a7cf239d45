//! Nash bargaining solutions as optimal transport, at desk scale.
//!
//! When `N` players positioned at points `p_i` divide a resource measure `ν`
//! and value a unit at `y` by `s(p_i, y) = exp(-c(p_i, y))`, the allocation
//! maximizing the product of utilities is an optimal transport plan. This
//! crate solves the finite problem exactly, minimizes the continuum
//! functional `H_ν(β) + W²(μ, β)` that the finite solutions approach, and
//! checks the two against each other: density bounds, cell diameters,
//! Monge–Ampère and fourth-order Euler–Lagrange residuals.
//!
//! Modules:
//! - [`measure`]: grid-discretized measures on boxes, relative entropy, cost
//!   bookkeeping (Lipschitz bound, oscillation, `b0`).
//! - [`transport`]: exact Wasserstein cost with dual potentials — monotone
//!   quantile coupling in 1D, successive-shortest-path network flow otherwise.
//! - [`nash`]: the finite-player concave program, both functional forms,
//!   ratio-condition and cyclical-monotonicity verification.
//! - [`laguerre`]: potentials on point sets, their cell decompositions of the
//!   resource grid, the averaged pushforward measure, semidiscrete solves.
//! - [`continuum`]: minimization of entropy plus transport cost, density-cap
//!   and Hölder diagnostics of the minimizer.
//! - [`potential`]: the potential-side functional over convex grid fields,
//!   Monge–Ampère and Euler–Lagrange residuals.
//! - [`harness`]: seeded player sampling, the end-to-end convergence sweep,
//!   CSV/JSON outputs.

#![forbid(unsafe_code)]

use thiserror::Error;

pub mod continuum;
pub mod harness;
pub mod laguerre;
pub mod measure;
pub mod nash;
pub mod potential;
pub mod transport;

pub use continuum::{ContinuumSolution, GBound};
pub use laguerre::{LaguerreDecomposition, LaguerrePotential};
pub use measure::{BoxDomain, CostSpec, GridMeasure};
pub use nash::{AllocationPlan, PlayerSet};
pub use potential::PotentialField;
pub use transport::TransportSolution;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("box mismatch: {0}")]
    BoxMismatch(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("mass mismatch: total masses differ by {0:.3e}")]
    MassMismatch(f64),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("empty Laguerre cell for player {player}")]
    EmptyCell { player: usize },

    #[error("{context}: not converged after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence {
        context: String,
        iterations: usize,
        residual: f64,
    },

    /// Nash solver ran out of iterations; carries the best iterate found.
    #[error("nash solve: not converged after {iterations} iterations (residual {residual:.3e})")]
    NashNonConvergence {
        iterations: usize,
        residual: f64,
        best: Box<nash::AllocationPlan>,
    },

    #[error("gradient out of range at node {node}: maps to ({x:.6}, {y:.6}) outside the target box")]
    RangeViolation { node: usize, x: f64, y: f64 },

    #[error("potential not convex at node {node}: {detail}")]
    NonConvex { node: usize, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
