use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::closed_form::{limit_point, minimize_closed_form};
use crate::geometry::{canonicalize, CanonicalTriangle, Point};
use crate::oracle::{compare, OracleConfig};
use crate::sampling::random_vertex_triangle;

const EXPONENTS: [f64; 6] = [2.0, 3.0, 4.0, 5.0, 7.0, 10.0];
const REFLECTION_TOLERANCE: f64 = 1e-12;
const SCALE_TOLERANCE: f64 = 1e-11;
const SCALES: [f64; 2] = [0.01, 100.0];
/// Each doubling of `n` past 64 must shrink the distance to the incenter by this factor.
const CONTRACTION: f64 = 0.7;
const FINAL_DISTANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy)]
pub struct VerifySettings {
    pub trials: usize,
    pub seed: u64,
    /// Relative to the triangle diameter.
    pub tol_point: f64,
    pub tol_value: f64,
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub trial: usize,
    pub vertices: [Point; 3],
    pub n: f64,
    pub failures: Vec<String>,
}

/// Runs every trial; results come back in trial order.
pub fn run_suite(settings: &VerifySettings) -> Vec<TrialOutcome> {
    (0..settings.trials).into_par_iter().map(|i| run_trial(settings, i)).collect()
}

fn rel(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

fn run_trial(settings: &VerifySettings, trial: usize) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    rng.set_stream(trial as u64);
    let general = random_vertex_triangle(&mut rng, 10.0);
    let n = EXPONENTS[trial % EXPONENTS.len()];
    let mut failures = Vec::new();
    match canonicalize(&general) {
        Ok((tri, _)) => check_triangle(&tri, n, settings, &mut failures),
        Err(e) => failures.push(format!("canonicalization: {e}")),
    }
    TrialOutcome { trial, vertices: general.vertices(), n, failures }
}

fn check_triangle(tri: &CanonicalTriangle, n: f64, settings: &VerifySettings, failures: &mut Vec<String>) {
    let diameter = tri.diameter();
    match compare(tri, n, &OracleConfig::default(), settings.tol_point * diameter, settings.tol_value) {
        Ok(r) if r.passed => {}
        Ok(r) => failures.push(format!(
            "oracle: point gap {:e}, relative value gap {:e}",
            r.point_gap, r.value_gap_rel
        )),
        Err(e) => failures.push(format!("oracle: {e}")),
    }

    let m = match minimize_closed_form(tri, n) {
        Ok(m) => m,
        Err(e) => {
            failures.push(format!("closed form: {e}"));
            return;
        }
    };
    let scale = tri.a().max(tri.base());

    match minimize_closed_form(&tri.reflected(), n) {
        Ok(r) => {
            let mirrored = Point::new(-r.point_canonical.x, r.point_canonical.y);
            let err = rel(r.value, m.value).max(mirrored.distance(m.point_canonical) / scale);
            if err > REFLECTION_TOLERANCE {
                failures.push(format!("reflection: relative error {err:e}"));
            }
        }
        Err(e) => failures.push(format!("reflection: {e}")),
    }

    for s in SCALES {
        let scaled = tri.scaled(s).and_then(|t| minimize_closed_form(&t, n));
        match scaled {
            Ok(sm) => {
                let err = rel(sm.value, m.value * s.powf(n))
                    .max(sm.point_canonical.distance(m.point_canonical * s) / (scale * s));
                if err > SCALE_TOLERANCE {
                    failures.push(format!("scale {s}: relative error {err:e}"));
                }
            }
            Err(e) => failures.push(format!("scale {s}: {e}")),
        }
    }

    let limit = limit_point(tri);
    let dist = |n: f64| minimize_closed_form(tri, n).map(|m| m.point_canonical.distance(limit));
    for k in 6..14 {
        match (dist(2f64.powi(k)), dist(2f64.powi(k + 1))) {
            (Ok(d0), Ok(d1)) if d0 == 0.0 || d1 <= CONTRACTION * d0 => {}
            (Ok(d0), Ok(d1)) => failures.push(format!(
                "incenter: distance ratio {:e} from n = 2^{k} to 2^{}",
                d1 / d0,
                k + 1
            )),
            (Err(e), _) | (_, Err(e)) => failures.push(format!("incenter: {e}")),
        }
    }
    match dist(2f64.powi(14)) {
        Ok(d) if d <= FINAL_DISTANCE * diameter => {}
        Ok(d) => failures.push(format!("incenter: distance {:e} at n = 2^14", d / diameter)),
        Err(e) => failures.push(format!("incenter: {e}")),
    }
}
