use serde::Serialize;

use crate::assemble::MissionReport;

pub const REPORT_COLUMNS: [&str; 26] = [
    "tsp_init",
    "tsp_refine",
    "coverage_method",
    "exit_transition",
    "runtime_init_s",
    "runtime_refine_s",
    "runtime_total_s",
    "l_tsp_m",
    "transit_m",
    "per_patch",
    "sum_classic_m",
    "sum_optim_m",
    "savings_m",
    "savings_pct",
    "l_total_classic_m",
    "l_total_optim_m",
    "total_savings_m",
    "total_savings_pct",
    "coverage_share_classic",
    "coverage_share_optim",
    "n_patches_all",
    "n_patches_covg",
    "l_total_m",
    "coverage_share",
    "rng_seed",
    "width_m",
];

#[derive(Serialize)]
struct Row<'a> {
    tsp_init: &'a str,
    tsp_refine: &'a str,
    coverage_method: &'a str,
    exit_transition: &'a str,
    runtime_init_s: f64,
    runtime_refine_s: f64,
    runtime_total_s: f64,
    l_tsp_m: f64,
    transit_m: f64,
    per_patch: String,
    sum_classic_m: f64,
    sum_optim_m: f64,
    savings_m: f64,
    savings_pct: f64,
    l_total_classic_m: f64,
    l_total_optim_m: f64,
    total_savings_m: f64,
    total_savings_pct: f64,
    coverage_share_classic: f64,
    coverage_share_optim: f64,
    n_patches_all: usize,
    n_patches_covg: usize,
    l_total_m: f64,
    coverage_share: f64,
    rng_seed: u64,
    width_m: f64,
}

/// CSV with a header row and one row per report. `per_patch` is packed as
/// `node:classic:optim` entries joined by `;`, where `node` is the 1-based
/// patch number used in the drawing labels.
pub fn report_csv(reports: &[MissionReport], rng_seed: u64, width: f64) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if reports.is_empty() {
        w.write_record(REPORT_COLUMNS).expect("in-memory write");
    }
    for r in reports {
        let per_patch = r
            .per_patch
            .iter()
            .map(|p| format!("{}:{}:{}", p.patch + 1, p.classic_m, p.optim_m))
            .collect::<Vec<_>>()
            .join(";");
        w.serialize(Row {
            tsp_init: &r.tsp_init,
            tsp_refine: &r.tsp_refine,
            coverage_method: &r.coverage_method,
            exit_transition: &r.exit_transition,
            runtime_init_s: r.runtime_init_s,
            runtime_refine_s: r.runtime_refine_s,
            runtime_total_s: r.runtime_total_s,
            l_tsp_m: r.l_tsp_m,
            transit_m: r.transit_m,
            per_patch,
            sum_classic_m: r.sum_classic_m,
            sum_optim_m: r.sum_optim_m,
            savings_m: r.savings_m,
            savings_pct: r.savings_pct,
            l_total_classic_m: r.l_total_classic_m,
            l_total_optim_m: r.l_total_optim_m,
            total_savings_m: r.total_savings_m,
            total_savings_pct: r.total_savings_pct,
            coverage_share_classic: r.coverage_share_classic,
            coverage_share_optim: r.coverage_share_optim,
            n_patches_all: r.n_patches_all,
            n_patches_covg: r.n_patches_covg,
            l_total_m: r.l_total_m,
            coverage_share: r.coverage_share,
            rng_seed,
            width_m: width,
        })
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}
