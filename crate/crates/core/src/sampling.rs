//! Seeded random triangles for the verification suites.

use rand::Rng;

use crate::geometry::{canonicalize, CanonicalTriangle, GeneralTriangle, Isometry, Point};

/// Vertices uniform in `[-half_width, half_width]^2`, degenerate draws rejected.
pub fn random_vertex_triangle<R: Rng + ?Sized>(rng: &mut R, half_width: f64) -> GeneralTriangle {
    loop {
        let mut v = || Point::new(rng.gen_range(-half_width..=half_width), rng.gen_range(-half_width..=half_width));
        if let Ok(t) = GeneralTriangle::new(v(), v(), v()) {
            return t;
        }
    }
}

/// Side lengths uniform in `[lo, hi]`, redrawn until the triangle inequality
/// holds strictly and the result is non-degenerate.
pub fn random_edge_triangle<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> GeneralTriangle {
    loop {
        let (ab, bc, ca) = (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi), rng.gen_range(lo..=hi));
        if ab + bc <= ca || bc + ca <= ab || ca + ab <= bc {
            continue;
        }
        // A at the origin, B on the x-axis, C from the law of cosines
        let cx = (ab * ab + ca * ca - bc * bc) / (2.0 * ab);
        let cy2 = ca * ca - cx * cx;
        if cy2 <= 0.0 {
            continue;
        }
        if let Ok(t) = GeneralTriangle::new(Point::ORIGIN, Point::new(ab, 0.0), Point::new(cx, cy2.sqrt())) {
            return t;
        }
    }
}

pub fn random_canonical<R: Rng + ?Sized>(rng: &mut R) -> (CanonicalTriangle, Isometry) {
    let t = random_vertex_triangle(rng, 10.0);
    canonicalize(&t).expect("non-degenerate triangle canonicalizes")
}
