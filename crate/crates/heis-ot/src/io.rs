//! File formats: CSV exports (curves, histograms, run ledgers, check
//! summaries) and JSON wrappers. CSV files always carry a header row; JSON
//! documents carry a `schema_version` field.

use crate::diagnostics::CheckReport;
use crate::error::Result;
use crate::heis::{eval_curve, Point};
use crate::measures::{AtomicMeasure, Histogram, SCHEMA_VERSION};
use crate::solvers::ApproximationRun;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// CSV of a minimal curve: rows `(s, xi_1.., eta_1.., t)` for `steps + 1`
/// evenly spaced parameters. `note` becomes a comment line above the header.
pub fn write_curve_csv<W: Write>(
    out: &mut W,
    x: &Point,
    y: &Point,
    steps: usize,
    note: Option<&str>,
) -> Result<()> {
    let n = x.n();
    if let Some(note) = note {
        writeln!(out, "# {note}")?;
    }
    let mut header = vec!["s".to_string()];
    header.extend((1..=n).map(|j| format!("xi{j}")));
    header.extend((1..=n).map(|j| format!("eta{j}")));
    header.push("t".to_string());
    writeln!(out, "{}", header.join(","))?;
    for k in 0..=steps {
        let s = k as f64 / steps as f64;
        let p = eval_curve(x, y, s)?;
        let coords: Vec<String> = p.coords().iter().map(|c| format!("{c:.12e}")).collect();
        writeln!(out, "{s:.6},{}", coords.join(","))?;
    }
    Ok(())
}

/// CSV ledger of an approximation run:
/// `epsilon,d_cost,d2_cost,w1_gap,cardinality,dispersion`.
pub fn write_ledger_csv<W: Write>(out: &mut W, run: &ApproximationRun) -> Result<()> {
    writeln!(out, "epsilon,d_cost,d2_cost,w1_gap,cardinality,dispersion")?;
    for step in &run.steps {
        writeln!(
            out,
            "{:.6e},{:.12e},{:.12e},{:.12e},{},{:.12e}",
            step.epsilon,
            step.breakdown.d_cost,
            step.breakdown.d2_cost,
            step.w1_gap,
            step.breakdown.cardinality,
            step.dispersion
        )?;
    }
    Ok(())
}

/// CSV of nonempty histogram cells: `center coordinates..., density`.
pub fn write_histogram_csv<W: Write>(out: &mut W, hist: &Histogram) -> Result<()> {
    let dim = hist.dims().len();
    let mut header: Vec<String> = (1..=dim).map(|k| format!("c{k}")).collect();
    header.push("density".into());
    writeln!(out, "{}", header.join(","))?;
    for (center, density) in hist.nonempty_cells() {
        let cells: Vec<String> = center.iter().map(|c| format!("{c:.6e}")).collect();
        writeln!(out, "{},{density:.12e}", cells.join(","))?;
    }
    Ok(())
}

/// Summary CSV for a batch of check reports:
/// `name,trials,violations,worst_violation,tolerance,pass`.
pub fn write_check_summary_csv<W: Write>(out: &mut W, reports: &[CheckReport]) -> Result<()> {
    writeln!(out, "name,trials,violations,worst_violation,tolerance,pass")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{:.6e},{:.6e},{}",
            r.name, r.trials, r.violations, r.worst_violation, r.tolerance, r.pass
        )?;
    }
    Ok(())
}

/// JSON document wrapping a list of check reports.
#[derive(Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub seed: u64,
    pub reports: Vec<CheckReport>,
}

impl ReportFile {
    pub fn new(seed: u64, reports: Vec<CheckReport>) -> Self {
        ReportFile {
            schema_version: SCHEMA_VERSION,
            seed,
            reports,
        }
    }
}

/// Measure specification accepted by the CLI: either an explicit atomic
/// measure or a sampled distribution given by its kind.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpec {
    UniformBox {
        schema_version: u32,
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Atomic {
        schema_version: u32,
        atoms: Vec<Vec<f64>>,
        weights: Vec<f64>,
    },
}

impl MeasureSpec {
    pub fn into_sampled(self) -> Result<crate::measures::SampledMeasure> {
        use crate::boxes::BoundingBox;
        match self {
            MeasureSpec::UniformBox { lo, hi, .. } => Ok(
                crate::measures::SampledMeasure::uniform_box(BoundingBox::new(lo, hi)),
            ),
            MeasureSpec::Atomic { .. } => Err(crate::error::Error::BadMeasure(
                "expected a sampled measure spec (kind = uniform_box)".into(),
            )),
        }
    }

    pub fn into_atomic(self) -> Result<AtomicMeasure> {
        match self {
            MeasureSpec::Atomic { atoms, weights, .. } => {
                let atoms = atoms
                    .iter()
                    .map(|c| Point::from_coords(c))
                    .collect::<Result<Vec<_>>>()?;
                AtomicMeasure::new(atoms, weights)
            }
            MeasureSpec::UniformBox { .. } => Err(crate::error::Error::BadMeasure(
                "expected an atomic measure spec (kind = atomic)".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_csv_shape() {
        let mut buf = Vec::new();
        write_curve_csv(
            &mut buf,
            &Point::origin(1),
            &Point::h1(1.0, 0.0, 0.0),
            4,
            Some("canonical selection"),
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# "));
        assert_eq!(lines[1], "s,xi1,eta1,t");
        assert_eq!(lines.len(), 2 + 5, "steps + 1 data rows");
        // Straight horizontal case: every t entry is zero.
        for row in &lines[2..] {
            assert!(row.ends_with("0.000000000000e0"), "row {row}");
        }
    }

    #[test]
    fn histogram_csv_has_header_and_cells() {
        use crate::boxes::BoundingBox;
        use crate::measures::histogram_density;
        let mu =
            AtomicMeasure::uniform_on(vec![Point::h1(0.1, 0.1, 0.1), Point::h1(0.9, 0.9, 0.9)])
                .unwrap();
        let hist = histogram_density(&mu, &BoundingBox::cube(1, 0.0, 1.0), 0.5).unwrap();
        let mut buf = Vec::new();
        write_histogram_csv(&mut buf, &hist).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "c1,c2,c3,density");
        assert_eq!(lines.len(), 3, "two occupied cells");
        assert!(
            lines[1].ends_with("4.000000000000e0"),
            "0.5 mass / 0.125 volume"
        );
    }

    #[test]
    fn measure_spec_round_trips() {
        let spec: MeasureSpec = serde_json::from_str(
            r#"{"kind":"atomic","schema_version":1,"atoms":[[0,0,0],[1,0,0]],"weights":[0.5,0.5]}"#,
        )
        .unwrap();
        let m = spec.into_atomic().unwrap();
        assert_eq!(m.len(), 2);
        let boxspec: MeasureSpec = serde_json::from_str(
            r#"{"kind":"uniform_box","schema_version":1,"lo":[0,0,0],"hi":[1,1,1]}"#,
        )
        .unwrap();
        assert!(boxspec.into_sampled().is_ok());
    }
}
