//! Closed-form minimizer of `F = d1^n + d2^n + d3^n` over the closed triangle.
//!
//! For `n > 1` the minimum is attained at the unique interior point
//!
//! ```text
//! x = -(b q - c p t) / lambda,   y = a (b + c) r / lambda
//! ```
//!
//! with `p = |AB|`, `q = |AC|`, `t = (p/q)^(1/(n-1))`, `r = ((b+c)/q)^(1/(n-1))`
//! and `lambda = q + (b + c) r + p t`. At that point `d1 = t d2` and `d3 = r d2`.
//! For `n = 1` the minimum sits at the vertex carrying the smallest altitude.

use serde::Serialize;

use crate::error::{require_above_one, require_at_least_one, Error, Result};
use crate::geometry::{altitudes, CanonicalTriangle, Isometry, Point};

/// Relative gap under which two altitudes are treated as tied for `n = 1`.
pub const ALTITUDE_TIE_TOLERANCE: f64 = 1e-12;

/// Exponent of the distance sum: the linear case or a real power above one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Exponent {
    One,
    Power(f64),
}

impl Exponent {
    pub fn new(n: f64) -> Result<Self> {
        require_at_least_one(n)?;
        Ok(if n == 1.0 { Exponent::One } else { Exponent::Power(n) })
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::One => 1.0,
            Exponent::Power(n) => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    pub p: f64,
    pub q: f64,
    pub t: f64,
    pub r: f64,
    pub lambda: f64,
}

/// `p, q, t, r, lambda` for exponent `n > 1`. Roots are taken in log space.
pub fn derived_constants(tri: &CanonicalTriangle, n: f64) -> Result<DerivedConstants> {
    require_above_one(n)?;
    let (p, q) = (tri.p(), tri.q());
    let root = |x: f64| (x.ln() / (n - 1.0)).exp();
    let t = root(p / q);
    let r = root(tri.base() / q);
    let lambda = q + tri.base() * r + p * t;
    Ok(DerivedConstants { p, q, t, r, lambda })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimizerResult {
    pub point_canonical: Point,
    pub point_original: Point,
    pub value: f64,
    pub constants: DerivedConstants,
    pub exponent: f64,
}

impl MinimizerResult {
    /// Re-express the minimizer in the original frame of `iso`.
    pub fn in_frame(mut self, iso: &Isometry) -> Self {
        self.point_original = iso.inverse(self.point_canonical);
        self
    }
}

/// The interior minimizer for `n > 1`.
///
/// `point_original` equals `point_canonical` until [`MinimizerResult::in_frame`]
/// is applied.
pub fn minimize_closed_form(tri: &CanonicalTriangle, n: f64) -> Result<MinimizerResult> {
    let k = derived_constants(tri, n)?;
    let (a, b, c) = (tri.a(), tri.b(), tri.c());
    let x = -(b * k.q - c * k.p * k.t) / k.lambda;
    let y = a * (b + c) * k.r / k.lambda;
    let point = Point::new(x, y);
    Ok(MinimizerResult {
        point_canonical: point,
        point_original: point,
        value: expanded_value(tri, n, &k),
        constants: k,
        exponent: n,
    })
}

/// `(a (b+c) / lambda)^n (t^n + r^n + 1)`.
pub fn expanded_value(tri: &CanonicalTriangle, n: f64, k: &DerivedConstants) -> f64 {
    let d2 = tri.a() * tri.base() / k.lambda;
    d2.powf(n) * (k.t.powf(n) + k.r.powf(n) + 1.0)
}

/// The same minimum through `t^n + r^n + 1 = lambda / q`:
/// `a^n (b+c)^n / (q lambda^(n-1))`.
pub fn reduced_value(tri: &CanonicalTriangle, n: f64, k: &DerivedConstants) -> f64 {
    let d2 = tri.a() * tri.base() / k.lambda;
    d2.powf(n) * k.lambda / k.q
}

/// `F` at `A`, `B` and `C`: `a^n`, `(a (b+c)/q)^n`, `(a (b+c)/p)^n`.
pub fn vertex_values(tri: &CanonicalTriangle, n: f64) -> Result<[f64; 3]> {
    require_at_least_one(n)?;
    Ok(altitudes(tri).map(|h| h.powf(n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Vertex {
    A,
    B,
    C,
}

impl Vertex {
    pub fn label(self) -> &'static str {
        match self {
            Vertex::A => "A",
            Vertex::B => "B",
            Vertex::C => "C",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexMinimizer {
    pub vertex: Vertex,
    pub point: Point,
    pub value: f64,
}

/// Minimum of the plain distance sum: the vertex with the smallest altitude.
/// Near-equal altitudes (within [`ALTITUDE_TIE_TOLERANCE`]) go to the earlier
/// vertex in the order A, B, C.
pub fn minimize_n1(tri: &CanonicalTriangle) -> VertexMinimizer {
    let h = altitudes(tri);
    let mut best = 0;
    for i in 1..3 {
        if h[i] < h[best] * (1.0 - ALTITUDE_TIE_TOLERANCE) {
            best = i;
        }
    }
    let vertex = [Vertex::A, Vertex::B, Vertex::C][best];
    VertexMinimizer { vertex, point: tri.vertices()[best], value: h[best] }
}

/// Limit of the minimizers as `n` grows: the minimizer formulas with
/// `t = r = 1`, i.e. the incenter.
pub fn limit_point(tri: &CanonicalTriangle) -> Point {
    let (a, b, c, p, q) = (tri.a(), tri.b(), tri.c(), tri.p(), tri.q());
    let lambda = q + b + c + p;
    Point::new(-(b * q - c * p) / lambda, (a * b + a * c) / lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SequenceEntry {
    pub n: f64,
    pub point: Point,
    pub value: f64,
    pub distance_to_limit: f64,
}

/// Minimizers for each exponent in `ns`, in input order.
pub fn critical_point_sequence(tri: &CanonicalTriangle, ns: &[f64]) -> Result<Vec<SequenceEntry>> {
    if let Some(&bad) = ns.iter().find(|&&n| !(n.is_finite() && n > 1.0)) {
        return Err(Error::InvalidExponent { n: bad, expected: "a finite real n > 1" });
    }
    let limit = limit_point(tri);
    ns.iter()
        .map(|&n| {
            let m = minimize_closed_form(tri, n)?;
            Ok(SequenceEntry {
                n,
                point: m.point_canonical,
                value: m.value,
                distance_to_limit: m.point_canonical.distance(limit),
            })
        })
        .collect()
}

/// Either kind of minimizer, chosen by the exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Solution {
    Vertex(VertexMinimizer),
    Interior(MinimizerResult),
}

impl Solution {
    pub fn point(&self) -> Point {
        match self {
            Solution::Vertex(v) => v.point,
            Solution::Interior(m) => m.point_canonical,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Solution::Vertex(v) => v.value,
            Solution::Interior(m) => m.value,
        }
    }

    pub fn constants(&self) -> Option<DerivedConstants> {
        match self {
            Solution::Vertex(_) => None,
            Solution::Interior(m) => Some(m.constants),
        }
    }
}

pub fn solve(tri: &CanonicalTriangle, n: Exponent) -> Result<Solution> {
    Ok(match n {
        Exponent::One => Solution::Vertex(minimize_n1(tri)),
        Exponent::Power(n) => Solution::Interior(minimize_closed_form(tri, n)?),
    })
}
