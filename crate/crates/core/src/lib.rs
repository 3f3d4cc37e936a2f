//! Minimal sum of powered distances from the sides of a triangle.
//!
//! For a triangle and an exponent `n >= 1`, find the point of the closed
//! triangle minimizing `d1^n + d2^n + d3^n`, where `d1, d2, d3` are the
//! distances to the three side lines.
//!
//! * [`geometry`]: canonical frame, distances, projection, incenter, altitudes.
//! * [`closed_form`]: the explicit minimizer for `n > 1`, the vertex rule for
//!   `n = 1`, and the sequence of minimizers converging to the incenter.
//! * [`kkt`]: objective, gradient, Hessian and KKT certification.
//! * [`oracle`]: zooming grid search and projected gradient descent.
//! * [`cli`]: the `tripowmin` command-line front end.

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod geometry;
pub mod kkt;
pub mod oracle;
pub mod sampling;

pub use closed_form::{
    critical_point_sequence, derived_constants, limit_point, minimize_closed_form, minimize_n1, solve,
    vertex_values, DerivedConstants, Exponent, MinimizerResult, Solution, Vertex, VertexMinimizer,
};
pub use error::{Error, Result};
pub use geometry::{
    altitudes, canonicalize, contains, incenter, project_to_triangle, side_distances, CanonicalTriangle,
    GeneralTriangle, Isometry, Point, Side, SideDistances,
};
pub use kkt::{evaluate_f, gradient, hessian, kkt_residual, Hessian, KktReport, Verdict};
pub use oracle::{compare, compare_n1, grid_search, projected_gradient, DiscrepancyReport, OracleConfig};
