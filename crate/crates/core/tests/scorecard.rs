//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p tripowmin --test scorecard`.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tripowmin::closed_form::{minimize_closed_form, minimize_n1, vertex_values};
use tripowmin::geometry::{
    canonicalize, contains, incenter, project_to_triangle, side_distances, CanonicalTriangle, Point,
};
use tripowmin::kkt::{evaluate_f, gradient, hessian, kkt_residual, Verdict};
use tripowmin::oracle::{grid_search, projected_gradient, OracleConfig};
use tripowmin::sampling::{random_canonical, random_edge_triangle};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn rel(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Criterion 1: isosceles n = 2 special case.
fn isosceles_n2() -> Outcome {
    let mut rng = rng(101);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (a, b) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        let tri = CanonicalTriangle::new(a, b, b).unwrap();
        let m = minimize_closed_form(&tri, 2.0).unwrap();
        let den = a * a + 3.0 * b * b;
        let value = 2.0 * a * a * b * b / den;
        let y = 2.0 * a * b * b / den;
        let point_err = m.point_canonical.distance(Point::new(0.0, y)) / y;
        worst = worst.max(rel(m.value, value)).max(point_err);
    }
    outcome(worst <= 1e-12, format!("max relative error {worst:.2e} (limit 1e-12)"))
}

/// Criterion 2: tri (3,1,2), n = 2.
fn worked_instance() -> Outcome {
    let tri = CanonicalTriangle::new(3.0, 1.0, 2.0).unwrap();
    let m = minimize_closed_form(&tri, 2.0).unwrap();
    let errs = [
        rel(m.point_canonical.x, 7.0 / 32.0),
        rel(m.point_canonical.y, 27.0 / 32.0),
        rel(m.value, 81.0 / 32.0),
    ];
    let worst = errs.iter().copied().fold(0.0, f64::max);
    let grid = grid_search(&tri, 2.0, &OracleConfig::default()).unwrap();
    let grid_gap = grid.point.distance(Point::new(7.0 / 32.0, 27.0 / 32.0));
    outcome(
        worst <= 1e-12 && grid_gap <= 1e-6,
        format!("closed form rel err {worst:.2e} (limit 1e-12), grid gap {grid_gap:.2e} (limit 1e-6)"),
    )
}

/// Criterion 3: vertex values and dominance of the interior minimum.
fn vertex_values_dominated() -> Outcome {
    let mut rng = rng(103);
    let mut worst: f64 = 0.0;
    let mut dominated = true;
    for _ in 0..100 {
        let (tri, _) = random_canonical(&mut rng);
        for n in [2.0, 3.0, 5.0] {
            let formula = vertex_values(&tri, n).unwrap();
            for (v, f) in tri.vertices().iter().zip(formula) {
                worst = worst.max(rel(evaluate_f(&tri, n, *v), f));
            }
            let m = minimize_closed_form(&tri, n).unwrap();
            dominated &= formula.iter().all(|&f| m.value < f);
        }
    }
    outcome(
        worst <= 1e-12 && dominated,
        format!("max rel err {worst:.2e} (limit 1e-12), interior value below all vertices: {dominated}"),
    )
}

const ORACLE_EXPONENTS: [f64; 6] = [2.0, 3.0, 4.0, 5.0, 7.0, 10.0];

struct OracleCase {
    tri: CanonicalTriangle,
    n: f64,
    grid_point_gap: f64,
    grid_value_gap: f64,
    pg_point_gap: f64,
    pg_value_gap: f64,
    pg_error: Option<String>,
}

fn oracle_cases() -> Vec<OracleCase> {
    let mut rng = rng(104);
    let tris: Vec<CanonicalTriangle> = (0..200)
        .map(|_| canonicalize(&random_edge_triangle(&mut rng, 0.1, 10.0)).unwrap().0)
        .collect();
    let jobs: Vec<(CanonicalTriangle, f64)> =
        tris.iter().flat_map(|&t| ORACLE_EXPONENTS.iter().map(move |&n| (t, n))).collect();
    let cfg = OracleConfig::default();
    jobs.par_iter()
        .map(|&(tri, n)| {
            let cf = minimize_closed_form(&tri, n).unwrap();
            let diam = tri.diameter();
            let grid = grid_search(&tri, n, &cfg).unwrap();
            let (pg_point_gap, pg_value_gap, pg_error) = match projected_gradient(&tri, n, tri.centroid(), &cfg) {
                Ok(pg) => (pg.point.distance(cf.point_canonical) / diam, rel(pg.value, cf.value), None),
                Err(e) => (f64::INFINITY, f64::INFINITY, Some(e.to_string())),
            };
            OracleCase {
                tri,
                n,
                grid_point_gap: grid.point.distance(cf.point_canonical) / diam,
                grid_value_gap: rel(grid.value, cf.value),
                pg_point_gap,
                pg_value_gap,
                pg_error,
            }
        })
        .collect()
}

/// Criterion 4: closed form against both oracles.
fn oracle_equivalence(cases: &[OracleCase], elapsed_s: f64) -> Outcome {
    let max = |f: fn(&OracleCase) -> f64| cases.iter().map(f).fold(0.0, f64::max);
    let (gp, gv) = (max(|c| c.grid_point_gap), max(|c| c.grid_value_gap));
    let (pp, pv) = (max(|c| c.pg_point_gap), max(|c| c.pg_value_gap));
    let failing: Vec<String> = cases
        .iter()
        .filter(|c| c.grid_point_gap > 1e-5 || c.grid_value_gap > 1e-8 || c.pg_point_gap > 1e-5 || c.pg_value_gap > 1e-8)
        .take(3)
        .map(|c| {
            format!(
                "[a={:.4} b={:.4} c={:.4} n={} grid=({:.1e},{:.1e}) pg=({:.1e},{:.1e}){}]",
                c.tri.a(),
                c.tri.b(),
                c.tri.c(),
                c.n,
                c.grid_point_gap,
                c.grid_value_gap,
                c.pg_point_gap,
                c.pg_value_gap,
                c.pg_error.as_deref().map(|e| format!(" {e}")).unwrap_or_default()
            )
        })
        .collect();
    let ok = gp <= 1e-5 && gv <= 1e-8 && pp <= 1e-5 && pv <= 1e-8 && elapsed_s < 60.0;
    outcome(
        ok,
        format!(
            "{} cases; grid point/diam {gp:.1e} value {gv:.1e}; projected gradient point/diam {pp:.1e} value {pv:.1e} \
             (limits 1e-5, 1e-8); {elapsed_s:.1}s (limit 60s) {}",
            cases.len(),
            failing.join(" ")
        ),
    )
}

/// Criterion 5: KKT certificate at every minimizer of criterion 4.
fn kkt_certification(cases: &[OracleCase]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut bad = 0;
    for c in cases {
        let m = minimize_closed_form(&c.tri, c.n).unwrap();
        let report = kkt_residual(&c.tri, c.n, m.point_canonical, 1e-9).unwrap();
        let h = hessian(&c.tri, c.n, m.point_canonical).unwrap();
        worst = worst.max(report.stationarity_residual);
        if report.verdict != Verdict::Satisfied
            || report.stationarity_residual >= 1e-9
            || !(h.fxx > 0.0 && h.det > 0.0)
        {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{bad} failures; max stationarity residual {worst:.2e} (limit 1e-9)"))
}

/// Criterion 6: feasibility identities and distance ratios.
fn feasibility_identities(cases: &[OracleCase]) -> Outcome {
    let mut worst: f64 = 0.0;
    for c in cases {
        let (tri, n) = (&c.tri, c.n);
        let m = minimize_closed_form(tri, n).unwrap();
        let k = m.constants;
        let (a, base) = (tri.a(), tri.base());
        let [g1, g2, _] = tri.constraint_values(m.point_canonical);
        let d = side_distances(tri, m.point_canonical);
        worst = worst
            .max(rel(g1, a * k.p * k.t * base / k.lambda))
            .max(rel(g2, a * k.q * base / k.lambda))
            .max(rel(d.d1 / d.d2, k.t))
            .max(rel(d.d3 / d.d2, k.r));
    }
    outcome(worst <= 1e-10, format!("max relative error {worst:.2e} (limit 1e-10)"))
}

/// Criterion 7: convergence to the incenter.
fn incenter_convergence() -> Outcome {
    let mut rng = rng(107);
    let mut worst_ratio: f64 = 0.0;
    let mut worst_final: f64 = 0.0;
    for _ in 0..20 {
        let (tri, _) = random_canonical(&mut rng);
        let center = incenter(&tri);
        let dist = |n: f64| minimize_closed_form(&tri, n).unwrap().point_canonical.distance(center);
        for k in 6..14 {
            let (n, n2) = (2f64.powi(k), 2f64.powi(k + 1));
            worst_ratio = worst_ratio.max(dist(n2) / dist(n));
        }
        worst_final = worst_final.max(dist(2f64.powi(14)) / tri.diameter());
    }
    outcome(
        worst_ratio <= 0.7 && worst_final <= 1e-3,
        format!("max d(2n)/d(n) {worst_ratio:.3} (limit 0.7), max d(2^14)/diam {worst_final:.2e} (limit 1e-3)"),
    )
}

/// Criterion 8: smallest-altitude rule for n = 1.
fn n1_rule() -> Outcome {
    let mut rng = rng(108);
    let cfg = OracleConfig::default();
    let mut worst_gap: f64 = 0.0;
    let mut wrong_vertex = 0;
    for _ in 0..100 {
        let (tri, _) = random_canonical(&mut rng);
        let m = minimize_n1(&tri);
        // altitude through each vertex as twice the area over the opposite side
        let [va, vb, vc] = tri.vertices();
        let twice_area = (vb - va).cross(vc - va).abs();
        let alt = [twice_area / vb.distance(vc), twice_area / va.distance(vc), twice_area / va.distance(vb)];
        let smallest = alt.iter().copied().fold(f64::INFINITY, f64::min);
        let chosen = tri.vertices().iter().position(|v| *v == m.point);
        let vertex_ok = chosen.is_some_and(|i| rel(alt[i], smallest) <= 1e-12);
        if !vertex_ok || rel(m.value, smallest) > 1e-12 {
            wrong_vertex += 1;
        }
        let grid = grid_search(&tri, 1.0, &cfg).unwrap();
        worst_gap = worst_gap.max(grid.point.distance(m.point) / tri.diameter());
    }
    outcome(
        wrong_vertex == 0 && worst_gap <= 1e-5,
        format!("{wrong_vertex} altitude mismatches; max grid gap/diam {worst_gap:.2e} (limit 1e-5)"),
    )
}

/// Criterion 9: reflection and scale equivariance.
fn equivariance() -> Outcome {
    let mut rng = rng(109);
    let (mut refl, mut scale): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let (tri, _) = random_canonical(&mut rng);
        let diam = tri.diameter();
        for n in [2.0, 3.0, 5.0, 10.0] {
            let m = minimize_closed_form(&tri, n).unwrap();
            let r = minimize_closed_form(&tri.reflected(), n).unwrap();
            refl = refl
                .max((r.point_canonical.x + m.point_canonical.x).abs() / diam)
                .max((r.point_canonical.y - m.point_canonical.y).abs() / diam)
                .max(rel(r.value, m.value));
            for s in [0.01, 1.0, 100.0] {
                let sm = minimize_closed_form(&tri.scaled(s).unwrap(), n).unwrap();
                scale = scale
                    .max(sm.point_canonical.distance(m.point_canonical * s) / (s * diam))
                    .max(rel(sm.value, m.value * s.powf(n)));
            }
        }
    }
    outcome(
        refl <= 1e-12 && scale <= 1e-11,
        format!("reflection max rel err {refl:.2e} (limit 1e-12), scaling {scale:.2e} (limit 1e-11)"),
    )
}

/// Criterion 10: Euclidean projection of exterior points never raises F.
///
/// Violations are tallied separately for obtuse and non-obtuse triangles.
fn projection_dominance() -> Outcome {
    let mut rng = rng(110);
    let triangles = 20;
    let (mut obtuse, mut violations, mut obtuse_violations) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..triangles {
        let (tri, _) = random_canonical(&mut rng);
        let is_obtuse = tri.b() * tri.c() > tri.a() * tri.a();
        obtuse += usize::from(is_obtuse);
        let (cx, cy) = ((tri.c() - tri.b()) / 2.0, tri.a() / 2.0);
        let (hw, hh) = (5.0 * tri.base(), 5.0 * tri.a());
        let mut drawn = 0;
        while drawn < 1000 {
            let pt = Point::new(cx + rng.gen_range(-hw..hw), cy + rng.gen_range(-hh..hh));
            if contains(&tri, pt) {
                continue;
            }
            drawn += 1;
            let proj = project_to_triangle(&tri, pt);
            for n in [1.0, 2.0, 3.0, 5.0] {
                let (fp, fq) = (evaluate_f(&tri, n, pt), evaluate_f(&tri, n, proj));
                if fq > fp {
                    violations += 1;
                    obtuse_violations += usize::from(is_obtuse);
                    worst = worst.max((fq - fp) / fp);
                }
            }
        }
    }
    outcome(
        violations == 0,
        format!(
            "{violations} violations over {triangles} triangles x 1000 points x n in {{1,2,3,5}} \
             ({obtuse_violations} on the {obtuse} obtuse triangles, {} on the others); worst relative excess {worst:.2e}",
            violations - obtuse_violations
        ),
    )
}

/// Criterion 11: analytic derivatives against finite differences.
fn derivative_checks() -> Outcome {
    let mut rng = rng(111);
    let (mut grad_err, mut det_err): (f64, f64) = (0.0, 0.0);
    let exponents = [2.0, 3.0, 5.0, 7.5];
    for i in 0..100 {
        let (tri, _) = random_canonical(&mut rng);
        let n = exponents[i % exponents.len()];
        // interior point with every barycentric weight at least 0.05
        let w: [f64; 3] = loop {
            let (u, v) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            let w = [u, v, 1.0 - u - v];
            if w.iter().all(|&x| x >= 0.05) {
                break w;
            }
        };
        let [va, vb, vc] = tri.vertices();
        let pt = va * w[0] + vb * w[1] + vc * w[2];
        let h = 1e-6 * tri.diameter();
        let (ex, ey) = (Point::new(h, 0.0), Point::new(0.0, h));

        let f = |q: Point| evaluate_f(&tri, n, q);
        let fd = Point::new((f(pt + ex) - f(pt - ex)) / (2.0 * h), (f(pt + ey) - f(pt - ey)) / (2.0 * h));
        let g = gradient(&tri, n, pt).unwrap();
        grad_err = grad_err.max((g - fd).norm() / g.norm());

        let gr = |q: Point| gradient(&tri, n, q).unwrap();
        let col_x = (gr(pt + ex) - gr(pt - ex)) * (0.5 / h);
        let col_y = (gr(pt + ey) - gr(pt - ey)) * (0.5 / h);
        let fxy = 0.5 * (col_x.y + col_y.x);
        let fd_det = col_x.x * col_y.y - fxy * fxy;
        let hs = hessian(&tri, n, pt).unwrap();
        det_err = det_err.max(rel(fd_det, hs.det));
    }
    outcome(
        grad_err <= 1e-5 && det_err <= 1e-4,
        format!("gradient max rel err {grad_err:.2e} (limit 1e-5), Hessian det {det_err:.2e} (limit 1e-4)"),
    )
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut results: Vec<(usize, &str, Outcome)> = vec![
        (1, "isosceles n=2 closed form", isosceles_n2()),
        (2, "worked instance (3,1,2), n=2", worked_instance()),
        (3, "vertex values and dominance", vertex_values_dominated()),
    ];
    let t0 = Instant::now();
    let cases = oracle_cases();
    let elapsed = t0.elapsed().as_secs_f64();
    results.push((4, "oracle equivalence", oracle_equivalence(&cases, elapsed)));
    results.push((5, "KKT certification", kkt_certification(&cases)));
    results.push((6, "feasibility identities and ratios", feasibility_identities(&cases)));
    results.push((7, "incenter convergence", incenter_convergence()));
    results.push((8, "n=1 smallest-altitude rule", n1_rule()));
    results.push((9, "reflection and scale equivariance", equivariance()));
    results.push((10, "boundary projection dominance", projection_dominance()));
    results.push((11, "gradient and Hessian checks", derivative_checks()));

    let mut failed = 0;
    for (id, name, out) in &results {
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} [{tag}] {name}: {}", out.detail);
        failed += usize::from(!out.passed);
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        results.len() - failed,
        results.len(),
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
