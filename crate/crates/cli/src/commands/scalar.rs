use otlab_core::{collapse_identity_check, critical_z, f_eta, f_eta_brute, lemma2_check, BruteGrid};
use serde::Serialize;

use crate::error::CliError;
use crate::report::{sig17, sig6, write_file, Report};
use crate::{ScalarArgs, ScalarCommand, ScalarCommon, TableFormat};

#[derive(Debug, Serialize)]
pub struct ScalarBody {
    pub p: f64,
    pub scalar: Table,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub check: String,
    pub passed: bool,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(check: &str, columns: &[&str]) -> Self {
        Self { check: check.into(), passed: true, columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn render(&self, format: TableFormat) -> Result<String, CliError> {
        match format {
            TableFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let encode = |e: csv::Error| CliError::Input(format!("csv: {e}"));
                w.write_record(&self.columns).map_err(encode)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|v| sig17(*v))).map_err(encode)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Input(format!("csv: {e}")))?;
                Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
            }
            TableFormat::Pretty => {
                let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|v| sig6(*v)).collect()).collect();
                let widths: Vec<usize> = self
                    .columns
                    .iter()
                    .enumerate()
                    .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
                    .collect();
                let line = |items: Vec<&str>| -> String {
                    let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
                    padded.join("  ") + "\n"
                };
                let mut out = line(self.columns.iter().map(String::as_str).collect());
                for r in &cells {
                    out += &line(r.iter().map(String::as_str).collect());
                }
                out += &format!("{}: {}\n", self.check, if self.passed { "pass" } else { "FAIL" });
                Ok(out)
            }
        }
    }
}

pub fn run(args: &ScalarArgs) -> Result<bool, CliError> {
    let (common, table) = match &args.sub {
        ScalarCommand::FEta { common, eta, grid, tol } => (common, f_eta_table(common.p, *eta, *grid, *tol)?),
        ScalarCommand::CheckLemma2 { common, eta, grid, tol } => (common, lemma2_table(common.p, *eta, *grid, *tol)?),
        ScalarCommand::Collapse { common, z, grid, tol } => (common, collapse_table(common.p, *z, *grid, *tol)?),
    };
    print!("{}", table.render(common.format)?);
    write_report(common, &table)?;
    Ok(table.passed)
}

fn write_report(common: &ScalarCommon, table: &Table) -> Result<(), CliError> {
    if let Some(path) = &common.out {
        let report = Report::new("scalar", ScalarBody { p: common.p, scalar: table.clone() });
        write_file(path, &report.to_toml()?)?;
    }
    Ok(())
}

fn require_p(p: f64) -> Result<(), CliError> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "scalar checks need p > 1 (got {p}); for p = 1 use the Kantorovich-Rubinstein path: otlab certify --p 1"
        )))
    }
}

fn log_grid(points: usize, lo: f64, hi: f64) -> Vec<f64> {
    let n = points.max(2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

/// `f(eta)` against a grid search that includes the critical point.
pub fn f_eta_table(p: f64, eta: f64, grid: usize, tol: f64) -> Result<Table, CliError> {
    require_p(p)?;
    let f = f_eta(p, eta)?;
    let z = critical_z(p, eta)?;
    let brute = f_eta_brute(p, eta, &BruteGrid { points: grid, ..BruteGrid::default() })?;
    let rel = (f - brute).abs() / f.abs().max(f64::MIN_POSITIVE);
    let mut t = Table::new("f-eta", &["p", "eta", "f_eta", "critical_z", "brute", "relative_diff"]);
    t.rows.push(vec![p, eta, f, z, brute, rel]);
    t.passed = rel <= tol;
    Ok(t)
}

/// Worst violation over a `grid x grid` logarithmic lattice in `[1e-3, 1e3]^2`
/// plus the ray `X = Z* Y` on which the inequality is tight.
pub fn lemma2_table(p: f64, eta: f64, grid: usize, tol: f64) -> Result<Table, CliError> {
    require_p(p)?;
    let axis = log_grid(grid, 1e-3, 1e3);
    let ratio = critical_z(p, eta)?.powf(1.0 / p);
    let mut samples: Vec<(f64, f64)> = axis.iter().flat_map(|&x| axis.iter().map(move |&y| (x, y))).collect();
    samples.extend(axis.iter().map(|&y| (ratio * y, y)));
    let r = lemma2_check(p, eta, &samples)?;
    let (wx, wy) = r.worst.unwrap_or((f64::NAN, f64::NAN));
    let mut t = Table::new(
        "check-lemma2",
        &["p", "eta", "samples", "max_violation", "max_relative_violation", "worst_x", "worst_y"],
    );
    t.rows.push(vec![p, eta, samples.len() as f64, r.max_violation, r.max_relative_violation, wx, wy]);
    t.passed = r.max_relative_violation <= tol;
    Ok(t)
}

/// Collapse residual at one `Z`, or the worst over a logarithmic grid.
pub fn collapse_table(p: f64, z: Option<f64>, grid: usize, tol: f64) -> Result<Table, CliError> {
    require_p(p)?;
    let zs = match z {
        Some(z) => vec![z],
        None => log_grid(grid, 1e-3, 1e3),
    };
    let mut worst = (0.0, zs[0]);
    for &z in &zs {
        let r = collapse_identity_check(p, z)?;
        if r > worst.0 {
            worst = (r, z);
        }
    }
    let mut t = Table::new("collapse", &["p", "points", "z_min", "z_max", "max_residual", "worst_z"]);
    let (lo, hi) = (zs[0], zs[zs.len() - 1]);
    t.rows.push(vec![p, zs.len() as f64, lo, hi, worst.0, worst.1]);
    t.passed = worst.0 <= tol;
    Ok(t)
}
