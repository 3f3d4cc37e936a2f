//! Formula-free minimizers used to cross-check the closed form.

use serde::Serialize;

use crate::closed_form::{minimize_closed_form, minimize_n1};
use crate::error::{require_above_one, require_at_least_one, Error, Result};
use crate::geometry::{project_to_triangle, CanonicalTriangle, Point};
use crate::kkt::{evaluate_f, gradient_unchecked};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Lattice subdivisions per barycentric axis.
    pub grid_resolution: usize,
    pub zoom_iterations: usize,
    pub zoom_factor: f64,
    /// First trial step of projected gradient; `None` means `0.1 * diameter`.
    pub pg_step: Option<f64>,
    /// Stopping threshold, relative to the apex height.
    pub pg_tolerance: f64,
    pub pg_max_iters: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid_resolution: 64,
            zoom_iterations: 8,
            zoom_factor: 4.0,
            pg_step: None,
            pg_tolerance: 1e-10,
            pg_max_iters: 10_000,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_resolution == 0 {
            return Err(Error::InvalidConfig("grid_resolution must be positive"));
        }
        if !(self.zoom_factor.is_finite() && self.zoom_factor > 1.0) {
            return Err(Error::InvalidConfig("zoom_factor must exceed 1"));
        }
        if let Some(s) = self.pg_step {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::InvalidConfig("pg_step must be positive"));
            }
        }
        if !(self.pg_tolerance.is_finite() && self.pg_tolerance > 0.0) {
            return Err(Error::InvalidConfig("pg_tolerance must be positive"));
        }
        if self.pg_max_iters == 0 {
            return Err(Error::InvalidConfig("pg_max_iters must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    pub point: Point,
    pub value: f64,
    /// Best value after the initial pass and after each zoom.
    pub history: Vec<f64>,
}

fn to_cartesian(tri: &CanonicalTriangle, w: [f64; 3]) -> Point {
    let [va, vb, vc] = tri.vertices();
    Point::new(w[0] * va.x + w[1] * vb.x + w[2] * vc.x, w[0] * va.y + w[1] * vb.y + w[2] * vc.y)
}

/// Lower corner of a homothetic window of size `scale` centred on `best` and
/// shifted back into the simplex: `0 <= lo <= best`, `sum(lo) = 1 - scale`.
fn window_around(best: [f64; 3], scale: f64) -> [f64; 3] {
    let mut lo = best.map(|w| (w - scale / 3.0).max(0.0));
    // clamping at zero only adds mass; take the excess back proportionally
    let total: f64 = lo.iter().sum();
    let excess = total - (1.0 - scale);
    if excess > 0.0 && total > 0.0 {
        for w in &mut lo {
            *w -= excess * *w / total;
        }
    }
    lo
}

/// Deterministic zooming search over barycentric lattices.
///
/// Each pass samples the lattice `lo + scale * (i, j, N - i - j) / N` of the
/// current window (a scaled copy of the triangle inside it), keeps the best
/// sample (lowest lattice index on ties, the incumbent if nothing beats it),
/// then shrinks the window by `zoom_factor` around it. Every sample is
/// feasible by construction.
pub fn grid_search(tri: &CanonicalTriangle, n: f64, cfg: &OracleConfig) -> Result<GridResult> {
    require_at_least_one(n)?;
    cfg.validate()?;
    let res = cfg.grid_resolution;
    let inv = 1.0 / res as f64;

    let mut lo = [0.0; 3];
    let mut scale = 1.0;
    let mut best_w = [1.0 / 3.0; 3];
    let mut best_val = f64::INFINITY;
    let mut history = Vec::with_capacity(cfg.zoom_iterations + 1);

    for pass in 0..=cfg.zoom_iterations {
        if pass > 0 {
            scale /= cfg.zoom_factor;
            lo = window_around(best_w, scale);
        }
        for i in 0..=res {
            for j in 0..=(res - i) {
                let k = res - i - j;
                let w = [
                    lo[0] + scale * i as f64 * inv,
                    lo[1] + scale * j as f64 * inv,
                    lo[2] + scale * k as f64 * inv,
                ];
                let v = evaluate_f(tri, n, to_cartesian(tri, w));
                if v < best_val {
                    best_val = v;
                    best_w = w;
                }
            }
        }
        history.push(best_val);
    }
    Ok(GridResult { point: to_cartesian(tri, best_w), value: best_val, history })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientResult {
    pub point: Point,
    pub value: f64,
    pub iterations: usize,
    /// Accepted objective values, starting with the value at `start`.
    pub trace: Vec<f64>,
}

/// Moves a boundary point towards the centroid until every slack is positive.
fn nudge_inside(tri: &CanonicalTriangle, pt: Point) -> Point {
    if tri.strictly_contains(pt) {
        return pt;
    }
    let to_center = tri.centroid() - pt;
    let dist = to_center.norm();
    let mut step = 1e-12 * tri.a();
    loop {
        let moved = pt + to_center * (step / dist);
        if tri.strictly_contains(moved) || step >= dist {
            return moved;
        }
        step *= 2.0;
    }
}

/// Projected gradient descent `x <- project(x - s grad F(x))`.
///
/// The first trial step is `pg_step`; later iterations start from the
/// Barzilai-Borwein step of the previous move. The trial step is halved until
/// `F` strictly decreases. The run stops once `s |grad F| <= pg_tolerance * a`
/// for the step being tried, or after `pg_max_iters` iterations.
pub fn projected_gradient(
    tri: &CanonicalTriangle,
    n: f64,
    start: Point,
    cfg: &OracleConfig,
) -> Result<GradientResult> {
    require_above_one(n)?;
    cfg.validate()?;
    let tol = cfg.pg_tolerance * tri.a();
    let initial_step = cfg.pg_step.unwrap_or(0.1 * tri.diameter());

    let mut x = project_to_triangle(tri, start);
    let mut fx = evaluate_f(tri, n, x);
    let mut grad = gradient_unchecked(tri, n, nudge_inside(tri, x));
    let mut step = initial_step;
    let mut trace = vec![fx];
    let mut residual = f64::INFINITY;

    for iter in 0..cfg.pg_max_iters {
        let gnorm = grad.norm();
        if gnorm == 0.0 {
            return Ok(GradientResult { point: x, value: fx, iterations: iter, trace });
        }
        let mut trial = step;
        let accepted = loop {
            residual = trial * gnorm;
            if residual <= tol {
                break None;
            }
            let cand = project_to_triangle(tri, x - grad * trial);
            let fc = evaluate_f(tri, n, cand);
            if fc < fx {
                break Some((cand, fc));
            }
            trial *= 0.5;
        };
        let Some((next, f_next)) = accepted else {
            return Ok(GradientResult { point: x, value: fx, iterations: iter, trace });
        };

        let next_grad = gradient_unchecked(tri, n, nudge_inside(tri, next));
        let dx = next - x;
        let dg = next_grad - grad;
        let curvature = dx.dot(dg);
        step = if curvature > 0.0 { dx.dot(dx) / curvature } else { initial_step };

        x = next;
        fx = f_next;
        grad = next_grad;
        trace.push(fx);
    }

    if residual > 100.0 * tol {
        return Err(Error::DidNotConverge { iterations: cfg.pg_max_iters, residual });
    }
    Ok(GradientResult { point: x, value: fx, iterations: cfg.pg_max_iters, trace })
}

/// One oracle's distance from the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleRun {
    pub point: Point,
    pub value: f64,
    pub point_gap: f64,
    pub value_gap_rel: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    /// Against the oracle with the lower objective value.
    pub point_gap: f64,
    pub value_gap_rel: f64,
    pub oracle_value: f64,
    pub closed_form_value: f64,
    pub grid: OracleRun,
    /// Absent for `n = 1`, where `F` is not differentiable on the boundary.
    pub gradient: Option<OracleRun>,
    pub passed: bool,
}

fn run_against(point: Point, value: f64, cf_point: Point, cf_value: f64) -> OracleRun {
    OracleRun {
        point,
        value,
        point_gap: point.distance(cf_point),
        value_gap_rel: (value - cf_value).abs() / cf_value.abs(),
    }
}

/// Runs the closed form and both oracles; projected gradient starts at the
/// centroid. Tolerances are absolute for the point and relative for the value.
pub fn compare(
    tri: &CanonicalTriangle,
    n: f64,
    cfg: &OracleConfig,
    point_tol: f64,
    value_tol: f64,
) -> Result<DiscrepancyReport> {
    let cf = minimize_closed_form(tri, n)?;
    let (cf_point, cf_value) = (cf.point_canonical, cf.value);
    let grid = grid_search(tri, n, cfg)?;
    let pg = projected_gradient(tri, n, tri.centroid(), cfg)?;

    let grid = run_against(grid.point, grid.value, cf_point, cf_value);
    let gradient = run_against(pg.point, pg.value, cf_point, cf_value);
    let better = if gradient.value < grid.value { gradient } else { grid };
    Ok(report(better, cf_value, grid, Some(gradient), point_tol, value_tol))
}

/// Grid search against the smallest-altitude vertex for `n = 1`.
pub fn compare_n1(tri: &CanonicalTriangle, cfg: &OracleConfig, point_tol: f64, value_tol: f64) -> Result<DiscrepancyReport> {
    let vertex = minimize_n1(tri);
    let grid = grid_search(tri, 1.0, cfg)?;
    let grid = run_against(grid.point, grid.value, vertex.point, vertex.value);
    Ok(report(grid, vertex.value, grid, None, point_tol, value_tol))
}

fn report(
    better: OracleRun,
    closed_form_value: f64,
    grid: OracleRun,
    gradient: Option<OracleRun>,
    point_tol: f64,
    value_tol: f64,
) -> DiscrepancyReport {
    DiscrepancyReport {
        point_gap: better.point_gap,
        value_gap_rel: better.value_gap_rel,
        oracle_value: better.value,
        closed_form_value,
        grid,
        gradient,
        passed: better.point_gap <= point_tol && better.value_gap_rel <= value_tol,
    }
}
