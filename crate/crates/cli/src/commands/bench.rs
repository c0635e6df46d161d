use std::time::Instant;

use otlab_core::{certify_triangle, certify_triangle_kr, random_triple, solve_transport, SpaceKind};
use rayon::prelude::*;

use crate::error::CliError;
use crate::report::{sig17, write_file};
use crate::{BenchArgs, Suite};

const SOLVE_COLUMNS: [&str; 10] =
    ["suite", "size", "seed", "p", "value", "wasserstein", "iterations", "gap", "slackness", "seconds"];
const CERTIFY_COLUMNS: [&str; 11] = [
    "suite", "size", "seed", "p", "w_lambda_mu", "w_mu_nu", "w_lambda_nu", "triangle_slack", "collapse_residual",
    "certified", "seconds",
];

/// One CSV row; `(size, seed)` orders the output.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub size: usize,
    pub seed: u64,
    pub cells: Vec<String>,
}

/// `a..b` and `a..=b` are inclusive ranges; otherwise a comma list.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Input(format!("cannot parse seeds {text:?}; use a..b or a comma list"));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(num).collect()
}

pub fn run(args: &BenchArgs) -> Result<bool, CliError> {
    let seeds = parse_seeds(&args.seeds)?;
    if args.sizes.contains(&0) {
        return Err(CliError::Input("sizes must be at least 1".into()));
    }
    let jobs: Vec<(usize, u64)> = args.sizes.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = args.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    let mut rows: Vec<Row> = pool.install(|| {
        jobs.par_iter().map(|&(n, s)| bench_one(args.suite, n, s, args.p)).collect::<Result<Vec<_>, _>>()
    })?;
    rows.sort_by_key(|r| (r.size, r.seed));

    let columns: &[&str] = match args.suite {
        Suite::Solve => &SOLVE_COLUMNS,
        Suite::Certify => &CERTIFY_COLUMNS,
    };
    let text = to_csv(columns, &rows)?;
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(true)
}

pub fn bench_one(suite: Suite, size: usize, seed: u64, p: f64) -> Result<Row, CliError> {
    let t = random_triple(SpaceKind::Euclidean { dim: 2 }, size, seed)?;
    let head = |name: &str| vec![name.to_string(), size.to_string(), seed.to_string(), sig17(p)];
    let cells = match suite {
        Suite::Solve => {
            let start = Instant::now();
            let sol = solve_transport(&t.lambda, &t.nu, p)?;
            let seconds = start.elapsed().as_secs_f64();
            let mut c = head("solve");
            c.extend([
                sig17(sol.value),
                sig17(sol.wasserstein()),
                sol.iterations.to_string(),
                sig17(sol.gap),
                sig17(sol.slackness_violation()),
                format!("{seconds:.6}"),
            ]);
            c
        }
        Suite::Certify => {
            let start = Instant::now();
            let r = if p == 1.0 {
                certify_triangle_kr(&t.lambda, &t.mu, &t.nu)?
            } else {
                certify_triangle(&t.lambda, &t.mu, &t.nu, p)?
            };
            let seconds = start.elapsed().as_secs_f64();
            let mut c = head("certify");
            c.extend([
                sig17(r.w_lambda_mu),
                sig17(r.w_mu_nu),
                sig17(r.w_lambda_nu),
                sig17(r.triangle_slack),
                sig17(r.collapse_residual),
                r.certified.to_string(),
                format!("{seconds:.6}"),
            ]);
            c
        }
    };
    Ok(Row { size, seed, cells })
}

fn to_csv(columns: &[&str], rows: &[Row]) -> Result<String, CliError> {
    let encode = |e: csv::Error| CliError::Input(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns).map_err(encode)?;
    for r in rows {
        w.write_record(&r.cells).map_err(encode)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
