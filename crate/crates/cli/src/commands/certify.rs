use std::time::Instant;

use otlab_core::{certify_triangle, certify_triangle_kr, triangle_via_glueing, Branch, ChainReport, GlueingCheck};
use serde::Serialize;

use crate::error::CliError;
use crate::instance::load;
use crate::report::{emit, pretty_rows, sig6, Report};
use crate::{CertifyArgs, Route};

#[derive(Debug, Serialize)]
pub struct CertifyBody {
    pub p: f64,
    pub measures: Vec<String>,
    pub route: String,
    /// Every requested route certified.
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duality: Option<ChainReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub glueing: Option<GlueingCheck>,
}

pub fn run(args: &CertifyArgs) -> Result<bool, CliError> {
    let (instance, bytes) = load(&args.instance)?;
    let picked = instance.select(&args.measures, 3)?;
    let (l, m, n) = (&picked[0].1, &picked[1].1, &picked[2].1);
    let mut timings = Vec::new();

    let duality = if matches!(args.route, Route::Duality | Route::Both) {
        let start = Instant::now();
        let report = if args.p == 1.0 { certify_triangle_kr(l, m, n)? } else { certify_triangle(l, m, n, args.p)? };
        timings.push(("duality_seconds", start.elapsed().as_secs_f64()));
        Some(report)
    } else {
        None
    };
    let glueing = if matches!(args.route, Route::Glueing | Route::Both) {
        let start = Instant::now();
        let check = triangle_via_glueing(l, m, n, args.p)?;
        timings.push(("glueing_seconds", start.elapsed().as_secs_f64()));
        Some(check)
    } else {
        None
    };
    let certified = duality.as_ref().is_none_or(|r| r.certified) && glueing.as_ref().is_none_or(|g| g.ok);

    let mut rows = vec![("measures", picked.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(", ")), ("p", sig6(args.p))];
    if let Some(r) = &duality {
        let branch = match r.branch {
            Branch::Duality => "duality",
            Branch::Trivial => "trivial",
            Branch::KantorovichRubinstein => "kantorovich-rubinstein",
        };
        rows.push(("branch", branch.into()));
        rows.push(("W(lambda, mu)", sig6(r.w_lambda_mu)));
        rows.push(("W(mu, nu)", sig6(r.w_mu_nu)));
        rows.push(("W(lambda, nu)", sig6(r.w_lambda_nu)));
        if let Some(eta) = r.eta {
            rows.push(("eta", sig6(eta)));
            rows.push(("collapse residual", sig6(r.collapse_residual)));
        }
        rows.push(("triangle slack", sig6(r.triangle_slack)));
        let verdict = match (r.certified, r.branch) {
            (true, Branch::Trivial) => "certified (trivially)",
            (true, _) => "certified",
            (false, _) => "NOT certified",
        };
        rows.push(("duality route", verdict.into()));
    }
    if let Some(g) = &glueing {
        rows.push(("glued bound", sig6(g.bound)));
        rows.push(("glueing route", if g.ok { "certified" } else { "NOT certified" }.into()));
    }

    let body = CertifyBody {
        p: args.p,
        measures: picked.iter().map(|(n, _)| n.clone()).collect(),
        route: format!("{:?}", args.route).to_lowercase(),
        certified,
        duality,
        glueing,
    };
    let mut report = Report::new("certify", body).with_instance(&args.instance, &bytes);
    report.timings.extend(timings.into_iter().map(|(k, v)| (k.to_string(), v)));
    emit(&report, args.out.as_deref(), &pretty_rows(&rows))?;
    Ok(certified)
}
