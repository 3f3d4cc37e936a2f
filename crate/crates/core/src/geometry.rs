//! Triangle primitives in the apex-altitude frame.
//!
//! Every computation in this crate happens in the canonical frame where the
//! triangle has vertices `A(0, a)`, `B(-b, 0)` and `C(c, 0)` with `a, b, c > 0`.
//! The three sides lie on the lines
//!
//! ```text
//! AB:  a x - b y + a b = 0
//! AC: -a x - c y + a c = 0
//! BC:  y = 0
//! ```
//!
//! and the closed triangle is the intersection of the half-planes where those
//! left-hand sides are non-negative. [`canonicalize`] moves an arbitrary
//! triangle into this frame with a rigid, orientation-preserving motion.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative threshold on doubled area against the squared longest side.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

/// The three sides, in the order used for distances, slacks and multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    AB,
    AC,
    BC,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::AB, Side::AC, Side::BC];

    pub fn index(self) -> usize {
        match self {
            Side::AB => 0,
            Side::AC => 1,
            Side::BC => 2,
        }
    }
}

/// Triangle `A(0, a)`, `B(-b, 0)`, `C(c, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalTriangle {
    a: f64,
    b: f64,
    c: f64,
}

impl CanonicalTriangle {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(a) && ok(b) && ok(c) {
            Ok(CanonicalTriangle { a, b, c })
        } else {
            Err(Error::InvalidCanonical { a, b, c })
        }
    }

    /// Apex height.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Distance from the altitude foot to the left base vertex `B`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Distance from the altitude foot to the right base vertex `C`.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Length of side AB.
    pub fn p(&self) -> f64 {
        self.a.hypot(self.b)
    }

    /// Length of side AC.
    pub fn q(&self) -> f64 {
        self.a.hypot(self.c)
    }

    /// Length of the base BC.
    pub fn base(&self) -> f64 {
        self.b + self.c
    }

    pub fn vertex_a(&self) -> Point {
        Point::new(0.0, self.a)
    }

    pub fn vertex_b(&self) -> Point {
        Point::new(-self.b, 0.0)
    }

    pub fn vertex_c(&self) -> Point {
        Point::new(self.c, 0.0)
    }

    pub fn vertices(&self) -> [Point; 3] {
        [self.vertex_a(), self.vertex_b(), self.vertex_c()]
    }

    pub fn centroid(&self) -> Point {
        Point::new((self.c - self.b) / 3.0, self.a / 3.0)
    }

    /// Longest side length.
    pub fn diameter(&self) -> f64 {
        self.p().max(self.q()).max(self.base())
    }

    /// Mirror image across the altitude, i.e. `b` and `c` swapped.
    pub fn reflected(&self) -> Self {
        CanonicalTriangle { a: self.a, b: self.c, c: self.b }
    }

    /// Uniformly scaled copy. `s` must be positive.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        CanonicalTriangle::new(self.a * s, self.b * s, self.c * s)
    }

    /// Left-hand sides of the three half-plane constraints, unnormalized:
    /// `[a x - b y + a b, -a x - c y + a c, y]`.
    pub fn constraint_values(&self, pt: Point) -> [f64; 3] {
        let (a, b, c) = (self.a, self.b, self.c);
        [
            a * pt.x - b * pt.y + a * b,
            -a * pt.x - c * pt.y + a * c,
            pt.y,
        ]
    }

    /// Signed distances to the three side lines, positive inside.
    pub fn signed_distances(&self, pt: Point) -> [f64; 3] {
        let [g1, g2, g3] = self.constraint_values(pt);
        [g1 / self.p(), g2 / self.q(), g3]
    }

    /// Gradients of the unnormalized constraint functions.
    pub fn constraint_gradients(&self) -> [Point; 3] {
        [
            Point::new(self.a, -self.b),
            Point::new(-self.a, -self.c),
            Point::new(0.0, 1.0),
        ]
    }

    /// True when every constraint is strictly positive.
    pub fn strictly_contains(&self, pt: Point) -> bool {
        self.constraint_values(pt).iter().all(|&g| g > 0.0)
    }
}

/// Unsigned distances from a point to the three side lines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideDistances {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl SideDistances {
    pub fn as_array(&self) -> [f64; 3] {
        [self.d1, self.d2, self.d3]
    }
}

pub fn side_distances(tri: &CanonicalTriangle, pt: Point) -> SideDistances {
    let [d1, d2, d3] = tri.signed_distances(pt);
    SideDistances { d1: d1.abs(), d2: d2.abs(), d3: d3.abs() }
}

/// Closed-triangle membership; points exactly on a side count as inside.
pub fn contains(tri: &CanonicalTriangle, pt: Point) -> bool {
    tri.constraint_values(pt).iter().all(|&g| g >= 0.0)
}

fn closest_on_segment(u: Point, v: Point, pt: Point) -> Point {
    let dir = v - u;
    let len2 = dir.dot(dir);
    let s = ((pt - u).dot(dir) / len2).clamp(0.0, 1.0);
    if s == 0.0 {
        u
    } else if s == 1.0 {
        v
    } else {
        u + dir * s
    }
}

/// Euclidean-nearest point of the closed triangle.
///
/// Interior points are returned unchanged. Otherwise the nearest point of the
/// three edge segments wins (ties go to AB, then AC, then BC). Rounding can
/// leave a slanted-edge projection a few ulps outside; such points are pulled
/// toward the centroid until [`contains`] accepts them.
pub fn project_to_triangle(tri: &CanonicalTriangle, pt: Point) -> Point {
    if contains(tri, pt) {
        return pt;
    }
    let [va, vb, vc] = tri.vertices();
    let base = Point::new(pt.x.clamp(-tri.b, tri.c), 0.0);
    let candidates = [
        closest_on_segment(va, vb, pt),
        closest_on_segment(va, vc, pt),
        base,
    ];
    let mut best = candidates[0];
    let mut best_d = pt.distance(best);
    for &cand in &candidates[1..] {
        let d = pt.distance(cand);
        if d < best_d {
            best = cand;
            best_d = d;
        }
    }
    if contains(tri, best) {
        return best;
    }
    let toward = tri.centroid() - best;
    let mut eps = f64::EPSILON;
    loop {
        let moved = best + toward * eps;
        if contains(tri, moved) {
            return moved;
        }
        eps *= 2.0;
    }
}

/// Point equidistant from the three sides.
///
/// Evaluated as the side-length weighted vertex average, which equals
/// `(-(b q - c p), a (b + c)) / (p + q + b + c)` in this frame.
pub fn incenter(tri: &CanonicalTriangle) -> Point {
    let [va, vb, vc] = tri.vertices();
    let (len_bc, len_ca, len_ab) = (tri.base(), tri.q(), tri.p());
    let perimeter = len_bc + len_ca + len_ab;
    (va * len_bc + vb * len_ca + vc * len_ab) * (1.0 / perimeter)
}

pub fn inradius(tri: &CanonicalTriangle) -> f64 {
    tri.a * tri.base() / (tri.p() + tri.q() + tri.base())
}

/// Altitude lengths from `A`, `B` and `C`.
pub fn altitudes(tri: &CanonicalTriangle) -> [f64; 3] {
    let twice_area = tri.a * tri.base();
    [tri.a, twice_area / tri.q(), twice_area / tri.p()]
}

/// A triangle given by three arbitrary planar vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralTriangle {
    vertices: [Point; 3],
}

impl GeneralTriangle {
    pub fn new(v1: Point, v2: Point, v3: Point) -> Result<Self> {
        let vertices = [v1, v2, v3];
        let longest2 = (0..3)
            .map(|i| {
                let d = vertices[(i + 1) % 3] - vertices[i];
                d.dot(d)
            })
            .fold(0.0_f64, f64::max);
        let doubled_area = (v2 - v1).cross(v3 - v1).abs();
        let threshold = DEGENERACY_TOLERANCE * longest2;
        if !(doubled_area.is_finite() && longest2.is_finite()) || doubled_area < threshold || doubled_area == 0.0 {
            return Err(Error::DegenerateTriangle { doubled_area, threshold });
        }
        Ok(GeneralTriangle { vertices })
    }

    pub fn vertices(&self) -> [Point; 3] {
        self.vertices
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        v[0].distance(v[1]).max(v[1].distance(v[2])).max(v[2].distance(v[0]))
    }
}

/// Rigid motion into the canonical frame: `forward(x) = R x + translation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Isometry {
    angle: f64,
    cos: f64,
    sin: f64,
    translation: Point,
    /// Original indices of the vertices that became `A`, `B` and `C`.
    order: [usize; 3],
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { angle: 0.0, cos: 1.0, sin: 0.0, translation: Point::ORIGIN, order: [0, 1, 2] }
    }

    /// Rotation angle in radians.
    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn translation(&self) -> Point {
        self.translation
    }

    /// Index of the input vertex placed at the apex `A`.
    pub fn apex_index(&self) -> usize {
        self.order[0]
    }

    /// Input indices of the vertices mapped to `A`, `B`, `C`.
    pub fn vertex_order(&self) -> [usize; 3] {
        self.order
    }

    fn rotate(&self, pt: Point) -> Point {
        Point::new(self.cos * pt.x - self.sin * pt.y, self.sin * pt.x + self.cos * pt.y)
    }

    fn rotate_back(&self, pt: Point) -> Point {
        Point::new(self.cos * pt.x + self.sin * pt.y, -self.sin * pt.x + self.cos * pt.y)
    }

    /// Original coordinates to canonical coordinates.
    pub fn forward(&self, pt: Point) -> Point {
        self.rotate(pt) + self.translation
    }

    /// Canonical coordinates back to original coordinates.
    pub fn inverse(&self, pt: Point) -> Point {
        self.rotate_back(pt - self.translation)
    }
}

/// Both base angles at `B` and `C` are strictly acute when the apex is `A`.
fn acute_base(apex: Point, u: Point, v: Point) -> bool {
    (apex - u).dot(v - u) > 0.0 && (apex - v).dot(u - v) > 0.0
}

/// Places a triangle in the canonical frame.
///
/// The apex is the lowest-index vertex whose two neighbouring angles are both
/// acute, so that `b, c > 0`. For an obtuse or right triangle this is the
/// vertex of the obtuse (right) angle; an acute triangle keeps its first
/// vertex on top. If rounding rejects every candidate, the vertex opposite the
/// longest side is used. The base vertices are assigned so that `A, B, C` is
/// counter-clockwise, which needs a rotation and a translation only.
pub fn canonicalize(tri: &GeneralTriangle) -> Result<(CanonicalTriangle, Isometry)> {
    let v = tri.vertices;
    let apex = (0..3)
        .find(|&i| acute_base(v[i], v[(i + 1) % 3], v[(i + 2) % 3]))
        .unwrap_or_else(|| {
            (0..3)
                .max_by(|&i, &j| {
                    let opp = |k: usize| v[(k + 1) % 3].distance(v[(k + 2) % 3]);
                    opp(i).total_cmp(&opp(j)).then(j.cmp(&i))
                })
                .unwrap_or(0)
        });
    let (mut left, mut right) = ((apex + 1) % 3, (apex + 2) % 3);
    if (v[left] - v[apex]).cross(v[right] - v[apex]) < 0.0 {
        std::mem::swap(&mut left, &mut right);
    }
    let (va, vb, vc) = (v[apex], v[left], v[right]);

    let base_len = vb.distance(vc);
    let u = (vc - vb) * (1.0 / base_len);
    let b = (va - vb).dot(u);
    let c = (vc - va).dot(u);
    let foot = vb + u * b;
    // positive because A, B, C is counter-clockwise
    let a = u.cross(va - vb);

    // rotation taking u onto +x
    let (cos, sin) = (u.x, -u.y);
    let angle = sin.atan2(cos);
    let mut iso = Isometry { angle, cos, sin, translation: Point::ORIGIN, order: [apex, left, right] };
    iso.translation = -iso.rotate(foot);

    let canonical = CanonicalTriangle::new(a, b, c).map_err(|_| Error::DegenerateTriangle {
        doubled_area: (vb - va).cross(vc - va).abs(),
        threshold: DEGENERACY_TOLERANCE * base_len * base_len,
    })?;
    Ok((canonical, iso))
}
