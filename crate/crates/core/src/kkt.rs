//! Objective, derivatives and first/second-order optimality checks.
//!
//! The constraints are `g1 = a x - b y + a b >= 0`, `g2 = -a x - c y + a c >= 0`
//! and `g3 = y >= 0`, with Lagrangian `L = F - l1 g1 - l2 g2 - l3 g3`.
//! Writing `D = (g1/p)^(n-1)` and `E = (g2/q)^(n-1)`, stationarity reads
//!
//! ```text
//! L_x = (n a/p) D - (n a/q) E - l1 a + l2 a                      = 0
//! L_y = -(n b/p) D - (n c/q) E + n y^(n-1) + l1 b + l2 c - l3    = 0
//! ```

use serde::Serialize;

use crate::error::{require_above_one, Error, Result};
use crate::geometry::{side_distances, CanonicalTriangle, Point, Side};

/// `F = d1^n + d2^n + d3^n`, valid anywhere in the plane.
pub fn evaluate_f(tri: &CanonicalTriangle, n: f64, pt: Point) -> f64 {
    let d = side_distances(tri, pt);
    if n == 1.0 {
        d.d1 + d.d2 + d.d3
    } else {
        d.d1.powf(n) + d.d2.powf(n) + d.d3.powf(n)
    }
}

/// Gradient with the slacks clamped at zero; usable on the closed triangle.
pub(crate) fn gradient_unchecked(tri: &CanonicalTriangle, n: f64, pt: Point) -> Point {
    let (a, b, c, p, q) = (tri.a(), tri.b(), tri.c(), tri.p(), tri.q());
    let [s1, s2, s3] = tri.signed_distances(pt).map(|s| s.max(0.0));
    let d = s1.powf(n - 1.0);
    let e = s2.powf(n - 1.0);
    let y = s3.powf(n - 1.0);
    Point::new(
        n * a / p * d - n * a / q * e,
        -n * b / p * d - n * c / q * e + n * y,
    )
}

fn require_interior(tri: &CanonicalTriangle, pt: Point) -> Result<()> {
    if tri.strictly_contains(pt) {
        Ok(())
    } else {
        Err(Error::PointNotInterior { x: pt.x, y: pt.y })
    }
}

/// `(dF/dx, dF/dy)` at a strictly interior point.
pub fn gradient(tri: &CanonicalTriangle, n: f64, pt: Point) -> Result<Point> {
    require_above_one(n)?;
    require_interior(tri, pt)?;
    Ok(gradient_unchecked(tri, n, pt))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hessian {
    pub fxx: f64,
    pub fxy: f64,
    pub fyy: f64,
    /// Determinant from the expanded closed-form expression.
    pub det: f64,
}

impl Hessian {
    /// `fxx fyy - fxy^2` from the entries.
    pub fn det_from_entries(&self) -> f64 {
        self.fxx * self.fyy - self.fxy * self.fxy
    }

    pub fn is_positive_definite(&self) -> bool {
        self.fxx > 0.0 && self.det > 0.0
    }
}

/// Second derivatives at a strictly interior point.
///
/// With `G = (g1/p)^(n-2)`, `H = (g2/q)^(n-2)`:
/// `fxx = n(n-1) a^2 (G/p^2 + H/q^2)` and
/// `det = n^2 (n-1)^2 / (p^2 q^2 y^2) * (G a^2 q^2 y^n + H a^2 p^2 y^n + G H a^2 (b+c)^2 y^2)`.
pub fn hessian(tri: &CanonicalTriangle, n: f64, pt: Point) -> Result<Hessian> {
    require_above_one(n)?;
    require_interior(tri, pt)?;
    let (a, b, c, p, q) = (tri.a(), tri.b(), tri.c(), tri.p(), tri.q());
    let [s1, s2, y] = tri.signed_distances(pt);
    let g = s1.powf(n - 2.0);
    let h = s2.powf(n - 2.0);
    let yn2 = y.powf(n - 2.0);
    let k = n * (n - 1.0);
    let (p2, q2) = (p * p, q * q);

    let fxx = k * a * a * (g / p2 + h / q2);
    let fxy = k * (-a * b * g / p2 + a * c * h / q2);
    let fyy = k * (b * b * g / p2 + c * c * h / q2 + yn2);

    let a2 = a * a;
    let yn = y.powf(n);
    let y2 = y * y;
    let bracket = g * a2 * q2 * yn
        + h * a2 * p2 * yn
        + g * h * a2 * b * b * y2
        + g * h * a2 * c * c * y2
        + 2.0 * g * h * a2 * b * c * y2;
    let det = k * k / (p2 * q2 * y2) * bracket;
    Ok(Hessian { fxx, fxy, fyy, det })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Satisfied,
    MultiplierNegative,
    StationarityFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KktReport {
    pub active_set: Vec<Side>,
    /// `[l1, l2, l3]`; exactly zero for inactive constraints.
    pub multipliers: [f64; 3],
    pub gradient: Point,
    /// Norm of the Lagrangian gradient.
    pub stationarity_residual: f64,
    /// Largest `|l_i g_i|`.
    pub complementary_slackness_residual: f64,
    pub hessian_fxx: Option<f64>,
    pub hessian_det: Option<f64>,
    pub verdict: Verdict,
}

/// Checks the KKT conditions at `pt`.
///
/// A constraint is active when its signed distance is at most `tolerance * a`;
/// a point more than that outside is rejected. Multipliers follow the case
/// analysis of the constrained problem:
///
/// * no active side: all multipliers zero, residual is `|grad F|`;
/// * AB or AC alone: solved from `L_x = 0` (the equation free of `l3`);
/// * BC alone: solved from `L_y = 0` (the only equation containing `l3`);
/// * a vertex (two sides): the 2x2 system solved exactly.
///
/// The verdict checks multiplier signs first, then the residuals against
/// `tolerance`. Hessian fields are filled in at strictly interior points.
pub fn kkt_residual(tri: &CanonicalTriangle, n: f64, pt: Point, tolerance: f64) -> Result<KktReport> {
    require_above_one(n)?;
    let slacks = tri.signed_distances(pt);
    let active_tol = tolerance * tri.a();
    if slacks.iter().any(|&s| s < -active_tol) {
        return Err(Error::PointNotFeasible { x: pt.x, y: pt.y });
    }
    let mut active: Vec<Side> = Side::ALL.into_iter().filter(|s| slacks[s.index()] <= active_tol).collect();
    if active.len() == 3 {
        // only reachable with a tolerance comparable to the triangle itself
        active.sort_by(|u, v| slacks[u.index()].total_cmp(&slacks[v.index()]));
        active.truncate(2);
        active.sort_by_key(|s| s.index());
    }

    let grad = gradient_unchecked(tri, n, pt);
    let normals = tri.constraint_gradients();
    let a = tri.a();
    let mut mult = [0.0; 3];
    match active.as_slice() {
        [] => {}
        [Side::AB] => mult[0] = grad.x / a,
        [Side::AC] => mult[1] = -grad.x / a,
        [Side::BC] => mult[2] = grad.y,
        [s, u] => {
            let (gi, gj) = (normals[s.index()], normals[u.index()]);
            let det = gi.cross(gj);
            mult[s.index()] = grad.cross(gj) / det;
            mult[u.index()] = gi.cross(grad) / det;
        }
        _ => unreachable!(),
    }

    let lagrangian_grad = normals
        .iter()
        .zip(mult)
        .fold(grad, |acc, (&g, l)| acc - g * l);
    let stationarity_residual = lagrangian_grad.norm();
    let values = tri.constraint_values(pt);
    let complementary_slackness_residual = values
        .iter()
        .zip(mult)
        .map(|(g, l)| (g * l).abs())
        .fold(0.0, f64::max);

    let (hessian_fxx, hessian_det) = match hessian(tri, n, pt) {
        Ok(h) if active.is_empty() => (Some(h.fxx), Some(h.det)),
        _ => (None, None),
    };

    let verdict = if mult.iter().any(|&l| l < -tolerance) {
        Verdict::MultiplierNegative
    } else if stationarity_residual > tolerance || complementary_slackness_residual > tolerance {
        Verdict::StationarityFailed
    } else {
        Verdict::Satisfied
    };

    Ok(KktReport {
        active_set: active,
        multipliers: mult,
        gradient: grad,
        stationarity_residual,
        complementary_slackness_residual,
        hessian_fxx,
        hessian_det,
        verdict,
    })
}
