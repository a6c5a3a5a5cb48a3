//! Discrete Hermitian line bundles: U(1) phases on oriented edges, their
//! tensor powers, magnetic Schrödinger operators and spectra, holonomy and
//! gauge transformations, and transplantation between Sunada quotients.

mod connection;
mod holonomy;
mod operator;
mod transplant;
mod turn;

pub use connection::{
    descend_connection, descend_vertex_field, invariant_cover_field, pullback_by_sigma,
    pullback_potential_by_sigma, ConnectionData, Potential,
};
pub use holonomy::{
    gauge_transform, holonomy_report, spanning_forest, tree_gauge, FundamentalCycle,
    HolonomyReport, SpanningForest,
};
pub use operator::{
    build_operator, compare_spectra, eigen_pairs, eigenvalues, relative_residual, EigenPairs,
    MagneticOperator, SpectralComparison,
};
pub use transplant::Transplantation;
pub use turn::Turn;

/// Default tolerance for comparing sorted spectra.
pub const SPECTRUM_TOL: f64 = 1e-8;
/// Bound on the transplantation intertwining residual.
pub const RESIDUAL_TOL: f64 = 1e-10;
