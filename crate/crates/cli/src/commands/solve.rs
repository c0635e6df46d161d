use std::time::Instant;

use otlab_core::{permutation_oracle, solve_transport};
use serde::Serialize;

use crate::error::CliError;
use crate::instance::load;
use crate::report::{emit, pretty_rows, sig6, Report};
use crate::SolveArgs;

#[derive(Debug, Serialize)]
pub struct SolveBody {
    pub p: f64,
    pub solve: SolveSection,
}

#[derive(Debug, Serialize)]
pub struct SolveSection {
    pub measures: Vec<String>,
    /// `W_p^p`.
    pub value: f64,
    pub wasserstein: f64,
    pub gap: f64,
    pub slackness_violation: f64,
    pub marginal_deviation: f64,
    pub dual_max_violation: f64,
    pub iterations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_match: Option<bool>,
    pub certified: bool,
    pub duals: Duals,
    pub coupling: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct Duals {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

pub fn run(args: &SolveArgs) -> Result<bool, CliError> {
    let (instance, bytes) = load(&args.instance)?;
    let picked = instance.select(&args.measures, 2)?;
    let (mu, nu) = (&picked[0].1, &picked[1].1);

    let start = Instant::now();
    let sol = solve_transport(mu, nu, args.p)?;
    let solve_seconds = start.elapsed().as_secs_f64();

    let (oracle, oracle_match, oracle_seconds) = if args.oracle {
        let start = Instant::now();
        let w = permutation_oracle(mu, nu, args.p)?;
        let ok = (w - sol.wasserstein()).abs() <= args.tol;
        (Some(w), Some(ok), Some(start.elapsed().as_secs_f64()))
    } else {
        (None, None, None)
    };
    let certified = sol.is_certified() && oracle_match.unwrap_or(true);

    let section = SolveSection {
        measures: picked.iter().map(|(n, _)| n.clone()).collect(),
        value: sol.value,
        wasserstein: sol.wasserstein(),
        gap: sol.gap,
        slackness_violation: sol.slackness_violation(),
        marginal_deviation: sol.coupling.marginal_deviation(),
        dual_max_violation: sol.duals.max_violation(),
        iterations: sol.iterations as u64,
        oracle,
        oracle_match,
        certified,
        duals: Duals { a: sol.duals.a().to_vec(), b: sol.duals.b().to_vec() },
        coupling: sol.coupling.pi().rows().into_iter().map(|r| r.to_vec()).collect(),
    };

    let mut rows = vec![
        ("measures", section.measures.join(", ")),
        ("p", sig6(args.p)),
        ("W_p", sig6(section.wasserstein)),
        ("W_p^p", sig6(section.value)),
        ("gap", sig6(section.gap)),
        ("slackness", sig6(section.slackness_violation)),
        ("pivots", section.iterations.to_string()),
    ];
    if let (Some(w), Some(ok)) = (oracle, oracle_match) {
        rows.push(("oracle", format!("{} ({})", sig6(w), if ok { "match" } else { "MISMATCH" })));
    }
    rows.push(("certified", certified.to_string()));

    let mut report = Report::new("solve", SolveBody { p: args.p, solve: section }).with_instance(&args.instance, &bytes);
    report.timings.insert("solve_seconds".into(), solve_seconds);
    if let Some(s) = oracle_seconds {
        report.timings.insert("oracle_seconds".into(), s);
    }
    emit(&report, args.out.as_deref(), &pretty_rows(&rows))?;
    Ok(certified)
}
