use std::io::{self, Write};

use serde::Serialize;

use super::{Framed, SequenceRow, SolveReport};

/// `v` rounded to 12 significant digits, printed in its shortest form.
pub fn sig12(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse::<f64>().expect("formatted float parses") + 0.0;
    let magnitude = rounded.abs();
    if rounded == 0.0 || (1e-6..1e15).contains(&magnitude) {
        rounded.to_string()
    } else {
        format!("{rounded:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(sig12).unwrap_or_default()
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

pub(super) fn solve_json(r: &SolveReport, out: &mut dyn Write) -> io::Result<()> {
    write_json(r, out)
}

pub(super) fn solve_csv(r: &SolveReport, out: &mut dyn Write) -> csv::Result<()> {
    let k = r.constants;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n", "x", "y", "x_original", "y_original", "value", "p", "q", "t", "r", "lambda",
    ])?;
    w.write_record([
        sig12(r.n),
        sig12(r.minimizer.x),
        sig12(r.minimizer.y),
        sig12(r.minimizer_original.x),
        sig12(r.minimizer_original.y),
        sig12(r.value),
        opt(k.map(|k| k.p)),
        opt(k.map(|k| k.q)),
        opt(k.map(|k| k.t)),
        opt(k.map(|k| k.r)),
        opt(k.map(|k| k.lambda)),
    ])?;
    w.flush()?;
    Ok(())
}

pub(super) fn solve_text(r: &SolveReport, out: &mut dyn Write) -> io::Result<()> {
    let c = &r.canonical;
    writeln!(out, "canonical triangle  a = {}, b = {}, c = {}", sig12(c.a), sig12(c.b), sig12(c.c))?;
    writeln!(out, "n                   {}", sig12(r.n))?;
    let at = r.vertex.map(|v| format!("  (vertex {v})")).unwrap_or_default();
    writeln!(out, "minimizer           ({}, {}){at}", sig12(r.minimizer.x), sig12(r.minimizer.y))?;
    writeln!(
        out,
        "minimizer original  ({}, {})",
        sig12(r.minimizer_original.x),
        sig12(r.minimizer_original.y)
    )?;
    writeln!(out, "value               {}", sig12(r.value))?;
    if let Some(k) = r.constants {
        writeln!(
            out,
            "constants           p = {}, q = {}, t = {}, r = {}, lambda = {}",
            sig12(k.p),
            sig12(k.q),
            sig12(k.t),
            sig12(k.r),
            sig12(k.lambda)
        )?;
    }
    if let Some(k) = &r.kkt {
        let active: Vec<String> = k.active_set.iter().map(|s| format!("{s:?}")).collect();
        writeln!(out, "kkt                 {:?}", k.verdict)?;
        writeln!(out, "  active set        [{}]", active.join(", "))?;
        writeln!(
            out,
            "  multipliers       {}, {}, {}",
            sig12(k.multipliers[0]),
            sig12(k.multipliers[1]),
            sig12(k.multipliers[2])
        )?;
        writeln!(out, "  stationarity      {}", sig12(k.stationarity_residual))?;
        if let (Some(fxx), Some(det)) = (k.hessian_fxx, k.hessian_det) {
            writeln!(out, "  hessian           fxx = {}, det = {}", sig12(fxx), sig12(det))?;
        }
    }
    if let Some(o) = &r.oracle {
        writeln!(out, "oracle              {}", if o.passed { "passed" } else { "FAILED" })?;
        writeln!(out, "  oracle value      {}", sig12(o.oracle_value))?;
        writeln!(out, "  point gap         {}", sig12(o.point_gap))?;
        writeln!(out, "  value gap (rel)   {}", sig12(o.value_gap_rel))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SequenceJson<'a> {
    triangle: &'a Framed,
    rows: &'a [SequenceRow],
}

pub(super) fn sequence_json(framed: &Framed, rows: &[SequenceRow], out: &mut dyn Write) -> io::Result<()> {
    write_json(&SequenceJson { triangle: framed, rows }, out)
}

fn sequence_fields(row: &SequenceRow) -> [String; 5] {
    [
        row.n.map(sig12).unwrap_or_else(|| "limit".to_string()),
        sig12(row.x),
        sig12(row.y),
        opt(row.value),
        sig12(row.dist_to_incenter),
    ]
}

pub(super) fn sequence_csv(rows: &[SequenceRow], out: &mut dyn Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "x", "y", "value", "dist_to_incenter"])?;
    for row in rows {
        w.write_record(sequence_fields(row))?;
    }
    w.flush()?;
    Ok(())
}

pub(super) fn sequence_text(rows: &[SequenceRow], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{:>8}  {:>20}  {:>20}  {:>20}  {:>20}", "n", "x", "y", "value", "dist_to_incenter")?;
    for row in rows {
        let [n, x, y, v, d] = sequence_fields(row);
        writeln!(out, "{n:>8}  {x:>20}  {y:>20}  {v:>20}  {d:>20}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::sig12;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(0.21875), "0.21875");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(8.0 / 7.0), "1.14285714286");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(2.5e-9), "2.5e-9");
        assert_eq!(sig12(-4.0), "-4");
    }
}
