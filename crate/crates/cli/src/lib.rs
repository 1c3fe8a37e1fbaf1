//! Command-line driver: reads an instance document, plans the mission and
//! writes the path document, CSV report and SVG drawing.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use spotspray::io::{parse_instance, render_svg, report_csv, write_path_document, InstanceError};
use spotspray::{plan_mission, Avoidance, CoverageMethod, ExitTransition, Heuristic, PlannerConfig, TspInit};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InitArg {
    Nn,
    Denn,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RefineArg {
    H1,
    H2,
    H3,
    H4,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CoverageArg {
    Classic,
    Optimised,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExitArg {
    Straight,
    Headland,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AvoidArg {
    Tangent,
    ContourFollowing,
}

#[derive(Debug, Parser)]
#[command(name = "spotspray", version, about = "Plan a spot-spraying mission over weed patches")]
struct Args {
    /// Instance document (GeoJSON feature collection).
    #[arg(long)]
    input: PathBuf,
    /// Operating width W in meters.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    width: f64,
    /// Wall-clock budget per sampling heuristic, seconds.
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    time_limit: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "nn")]
    tsp_init: InitArg,
    /// Comma-separated refinement pipeline.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "h4")]
    tsp_refine: Vec<RefineArg>,
    #[arg(long, value_enum, default_value = "optimised")]
    coverage: CoverageArg,
    #[arg(long, value_enum, default_value = "straight")]
    exit_transition: ExitArg,
    /// Report both coverage methods and their savings.
    #[arg(long)]
    compare_coverage: bool,
    /// Move budget per sampling heuristic; replaces the time limit.
    #[arg(long)]
    moves: Option<u64>,
    #[arg(long, value_enum, default_value = "tangent")]
    avoidance: AvoidArg,
    /// Safety margin around obstacle hulls, meters.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    inflation: f64,
    /// Path document output [default: <input stem>.path.geojson].
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV report output [default: <input stem>.report.csv].
    #[arg(long)]
    report: Option<PathBuf>,
    /// SVG drawing output [default: <input stem>.svg].
    #[arg(long)]
    svg: Option<PathBuf>,
}

impl Args {
    fn config(&self) -> PlannerConfig {
        PlannerConfig {
            width: self.width,
            time_limit: self.time_limit,
            rng_seed: self.seed,
            tsp_init: match self.tsp_init {
                InitArg::Nn => TspInit::Nn,
                InitArg::Denn => TspInit::Denn,
            },
            tsp_refine: self
                .tsp_refine
                .iter()
                .map(|h| match h {
                    RefineArg::H1 => Heuristic::H1,
                    RefineArg::H2 => Heuristic::H2,
                    RefineArg::H3 => Heuristic::H3,
                    RefineArg::H4 => Heuristic::H4,
                })
                .collect(),
            coverage_method: match self.coverage {
                CoverageArg::Classic => CoverageMethod::Classic,
                CoverageArg::Optimised => CoverageMethod::Optimised,
            },
            exit_transition: match self.exit_transition {
                ExitArg::Straight => ExitTransition::Straight,
                ExitArg::Headland => ExitTransition::Headland,
            },
            move_budget: self.moves,
            avoidance: match self.avoidance {
                AvoidArg::Tangent => Avoidance::Tangent,
                AvoidArg::ContourFollowing => Avoidance::ContourFollowing,
            },
            obstacle_inflation: self.inflation,
        }
    }
}

fn default_output(input: &Path, suffix: &str) -> PathBuf {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "mission".into());
    PathBuf::from(format!("{stem}{suffix}"))
}

fn write(path: &Path, contents: &str) -> Result<(), i32> {
    fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        EXIT_INTERNAL
    })
}

fn run(args: Args) -> Result<(), i32> {
    let text = fs::read_to_string(&args.input).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", args.input.display());
        EXIT_INTERNAL
    })?;
    let config = args.config();
    let (instance, warnings, frame) = parse_instance(&text, config.clone()).map_err(|e| {
        eprintln!("error: {e}");
        match e {
            InstanceError::Json(_) | InstanceError::Schema { .. } | InstanceError::Invalid(_) => EXIT_INVALID,
        }
    })?;
    for w in &warnings {
        eprintln!("{w}");
    }
    let outcome = plan_mission(&instance).map_err(|e| {
        eprintln!("error: {e}");
        if e.is_validation() {
            EXIT_INVALID
        } else {
            EXIT_INTERNAL
        }
    })?;
    for w in &outcome.warnings {
        eprintln!("{w}");
    }

    let report = &outcome.report;
    let rows = if args.compare_coverage {
        vec![
            report.for_method(CoverageMethod::Classic),
            report.for_method(CoverageMethod::Optimised),
        ]
    } else {
        vec![report.clone()]
    };
    let out = args.out.clone().unwrap_or_else(|| default_output(&args.input, ".path.geojson"));
    let csv_path = args.report.clone().unwrap_or_else(|| default_output(&args.input, ".report.csv"));
    let svg_path = args.svg.clone().unwrap_or_else(|| default_output(&args.input, ".svg"));
    write(&out, &write_path_document(&outcome.path, report, frame))?;
    write(&csv_path, &report_csv(&rows, config.rng_seed, config.width))?;
    write(&svg_path, &render_svg(&instance, &outcome.path))?;

    println!(
        "patches: {} ({} need coverage), tour {:?}",
        report.n_patches_all,
        report.n_patches_covg,
        outcome.path.visit_order.sequence()
    );
    println!(
        "L_TSP {:.2} m, transit {:.2} m, total {:.2} m ({}), coverage share {:.1}%",
        report.l_tsp_m,
        report.transit_m,
        report.l_total_m,
        report.coverage_method,
        100.0 * report.coverage_share
    );
    if args.compare_coverage {
        println!("{:>6} {:>12} {:>12} {:>8}", "patch", "classic_m", "optim_m", "change");
        for p in &report.per_patch {
            let change = if p.classic_m > 0.0 { (p.optim_m - p.classic_m) / p.classic_m } else { 0.0 };
            println!("{:>6} {:>12.2} {:>12.2} {:>7.1}%", p.patch + 1, p.classic_m, p.optim_m, 100.0 * change);
        }
        println!(
            "{:>6} {:>12.2} {:>12.2} {:>7.1}%",
            "sum",
            report.sum_classic_m,
            report.sum_optim_m,
            -100.0 * report.savings_pct
        );
        println!(
            "total: classic {:.2} m, optimised {:.2} m ({:.1}%); coverage share {:.1}% / {:.1}%",
            report.l_total_classic_m,
            report.l_total_optim_m,
            -100.0 * report.total_savings_pct,
            100.0 * report.coverage_share_classic,
            100.0 * report.coverage_share_optim
        );
    }
    println!("wrote {}, {}, {}", out.display(), csv_path.display(), svg_path.display());
    Ok(())
}

/// Runs the driver on `args` (including the program name) and returns the
/// process exit status.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match run(args) {
        Ok(()) => EXIT_OK,
        Err(code) => code,
    }
}
