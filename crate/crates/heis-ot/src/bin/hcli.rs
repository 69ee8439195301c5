//! Command-line front end: CC distances, geodesic exports, the epsilon
//! pipeline, and the diagnostic suites. All logic lives in the library; this
//! binary parses arguments, wires files, and maps errors onto exit codes
//! (0 success, 1 validation, 2 solver, 3 check failure).

use clap::{Args, Parser, Subcommand};
use heis_ot::diagnostics::{
    check_ball_scaling, check_cyclical_monotonicity, check_interpolant_density,
    check_monotone_rays, check_transport_lower_density, verify_density, verify_geometry,
    verify_transport, CheckReport, DensitySuiteConfig, Suite,
};
use heis_ot::io::{
    write_check_summary_csv, write_curve_csv, write_ledger_csv, MeasureSpec, ReportFile,
};
use heis_ot::solvers::{c_eps_cost, run_approximation_sequence, TransportPlan};
use heis_ot::{cc_distance, is_in_omega, Point};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hcli",
    about = "Optimal transport in the Heisenberg group",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Carnot-Caratheodory distance between two points given as
    /// flat coordinate lists (xi.., eta.., t) separated by `--`.
    Dist(CoordArgs),
    /// Export a minimal curve as CSV rows (s, coordinates).
    Geod(GeodArgs),
    /// Run the variational approximation pipeline and write its ledger,
    /// final plan and diagnostic reports.
    Pipeline(PipelineArgs),
    /// Run a diagnostic suite (geometry | transport | density | all) or
    /// check a plan file.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CoordArgs {
    /// Coordinates of both points; `--` separates them.
    #[arg(allow_hyphen_values = true, num_args = 2..)]
    coords: Vec<String>,
}

#[derive(Args)]
struct GeodArgs {
    #[arg(allow_hyphen_values = true, num_args = 2..)]
    coords: Vec<String>,
    /// Number of parameter steps (rows = steps + 1).
    #[arg(long, default_value_t = 64)]
    steps: usize,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fail on center-line pairs instead of using the canonical selection.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct PipelineArgs {
    /// Sampled source measure spec (JSON, kind = uniform_box).
    #[arg(long)]
    mu: PathBuf,
    /// Atomic target measure spec (JSON, kind = atomic).
    #[arg(long)]
    nu: PathBuf,
    /// Comma-separated decreasing epsilon schedule.
    #[arg(long, default_value = "0.5,0.2,0.1,0.05,0.02", value_delimiter = ',')]
    eps: Vec<f64>,
    /// Empirical sample size for the source measure.
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Histogram cell size for the interpolant density check.
    #[arg(long, default_value_t = 0.2)]
    grid: f64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run: geometry | transport | density | all.
    #[arg(required_unless_present = "plan")]
    suite: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Group index for the ball-scaling check.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Override the density suite's empirical sample size.
    #[arg(long)]
    samples: Option<usize>,
    /// Check a serialized transport plan instead of running a suite.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Directory for the summary CSV and report JSON (stdout table always).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Dist(args) => cmd_dist(&args),
        Command::Geod(args) => cmd_geod(&args),
        Command::Pipeline(args) => cmd_pipeline(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Split flat coordinates into two points; `--` tokens are tolerated (clap
/// consumes the first), so the halves rule decides the boundary.
fn parse_point_pair(raw: &[String]) -> heis_ot::Result<(Point, Point)> {
    let values: Vec<&String> = raw.iter().filter(|s| s.as_str() != "--").collect();
    if !values.len().is_multiple_of(2) {
        return Err(heis_ot::Error::BadCoordinates(format!(
            "need two equal-length coordinate lists, got {} values (note: flags go before the coordinates)",
            values.len()
        )));
    }
    let half = values.len() / 2;
    let parse = |chunk: &[&String]| -> heis_ot::Result<Point> {
        let coords = chunk
            .iter()
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    heis_ot::Error::BadCoordinates(format!("cannot parse '{s}' as a real number"))
                })
            })
            .collect::<heis_ot::Result<Vec<f64>>>()?;
        Point::from_coords(&coords)
    };
    Ok((parse(&values[..half])?, parse(&values[half..])?))
}

fn cmd_dist(args: &CoordArgs) -> heis_ot::Result<ExitCode> {
    let (x, y) = parse_point_pair(&args.coords)?;
    println!("{:.12}", cc_distance(&x, &y));
    Ok(ExitCode::SUCCESS)
}

fn cmd_geod(args: &GeodArgs) -> heis_ot::Result<ExitCode> {
    if args.steps < 2 {
        return Err(heis_ot::Error::BadParameter(
            "--steps must be at least 2".into(),
        ));
    }
    let (x, y) = parse_point_pair(&args.coords)?;
    let note = if !is_in_omega(&x, &y) && cc_distance(&x, &y) > 0.0 {
        if args.strict {
            return Err(heis_ot::Error::CenterLine(
                "pair on the center line; canonical selection refused under --strict".into(),
            ));
        }
        Some("center-line pair: canonical minimal-curve selection used")
    } else {
        None
    };
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, &x, &y, args.steps, note)?;
    match &args.out {
        Some(path) => fs::write(path, buf)?,
        None => print!("{}", String::from_utf8_lossy(&buf)),
    }
    Ok(ExitCode::SUCCESS)
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> heis_ot::Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| heis_ot::Error::BadMeasure(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| heis_ot::Error::BadMeasure(format!("cannot parse {}: {e}", path.display())))
}

fn cmd_pipeline(args: &PipelineArgs) -> heis_ot::Result<ExitCode> {
    let mu_spec: MeasureSpec = load_json(&args.mu)?;
    let nu_spec: MeasureSpec = load_json(&args.nu)?;
    let mu = mu_spec.into_sampled()?;
    let rho_max = mu.density_bound();
    let nu = nu_spec.into_atomic()?;

    fs::create_dir_all(&args.out)?;
    let run = run_approximation_sequence(&mu, &nu, &args.eps, args.samples, args.seed, None)?;

    let mut ledger = Vec::new();
    write_ledger_csv(&mut ledger, &run)?;
    fs::write(args.out.join("ledger.csv"), &ledger)?;

    let final_step = run.steps.last().expect("validated non-empty schedule");
    fs::write(
        args.out.join("final_plan.json"),
        serde_json::to_vec_pretty(&final_step.plan)?,
    )?;

    let mut dispersion = String::from("epsilon,dispersion\n");
    for step in &run.steps {
        dispersion.push_str(&format!("{:.6e},{:.12e}\n", step.epsilon, step.dispersion));
    }
    fs::write(args.out.join("dispersion.csv"), dispersion)?;

    // Post-run diagnostics on the final plan.
    let eps_final = final_step.epsilon;
    let mut reports = vec![
        check_cyclical_monotonicity(
            &final_step.plan,
            |a, b| c_eps_cost(eps_final, a, b),
            3,
            2_000,
            args.seed,
        ),
        check_monotone_rays(&final_step.plan, 1e-6),
        check_interpolant_density(&final_step.plan, rho_max, 0.5, args.grid)?,
    ];
    let support: Vec<(Point, Point)> = final_step
        .plan
        .support_pairs()
        .map(|(x, y, _)| (x.clone(), y.clone()))
        .collect();
    if let Some(pair) = support.iter().find(|(x, y)| cc_distance(x, y) > 0.3) {
        reports.push(check_transport_lower_density(
            &support,
            pair,
            0.25,
            &[0.4, 0.2],
            20_000,
            args.seed,
        ));
    }
    fs::write(
        args.out.join("reports.json"),
        serde_json::to_vec_pretty(&ReportFile::new(args.seed, reports))?,
    )?;

    println!(
        "pipeline done: {} epsilons, W1(mu_N, nu) = {:.9}, final gap = {:.3e}, outputs in {}",
        run.steps.len(),
        run.w1_ref,
        final_step.w1_gap,
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> heis_ot::Result<ExitCode> {
    let mut reports: Vec<CheckReport> = Vec::new();

    if let Some(plan_path) = &args.plan {
        let plan: TransportPlan = load_json(plan_path)?;
        reports.push(check_cyclical_monotonicity(
            &plan,
            cc_distance,
            3,
            2_000,
            args.seed,
        ));
        reports.push(check_monotone_rays(&plan, 1e-6));
    } else {
        let suite: Suite = args
            .suite
            .as_deref()
            .expect("clap enforces suite or plan")
            .parse()
            .map_err(heis_ot::Error::BadParameter)?;
        let density_cfg = || {
            let mut cfg = DensitySuiteConfig::default();
            if let Some(n) = args.samples {
                cfg.n_samples = n;
            }
            cfg
        };
        match suite {
            Suite::Geometry => reports.extend(verify_geometry(args.seed)),
            Suite::Transport => reports.extend(verify_transport(args.seed)),
            Suite::Density => reports.extend(verify_density(args.seed, &density_cfg())),
            Suite::All => {
                reports.extend(verify_geometry(args.seed));
                reports.push(check_ball_scaling(args.n, 1_000_000, args.seed));
                reports.extend(verify_transport(args.seed));
                reports.extend(verify_density(args.seed, &density_cfg()));
            }
        }
    }

    let mut summary = Vec::new();
    write_check_summary_csv(&mut summary, &reports)?;
    print!("{}", String::from_utf8_lossy(&summary));

    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("summary.csv"), &summary)?;
        fs::write(
            dir.join("reports.json"),
            serde_json::to_vec_pretty(&ReportFile::new(args.seed, reports.clone()))?,
        )?;
    }

    let failed: Vec<&CheckReport> = reports
        .iter()
        .filter(|r| !r.pass && !r.name.contains("negative_control"))
        .collect();
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for r in &failed {
            eprintln!(
                "FAILED {} ({} violations, worst {:.3e})",
                r.name, r.violations, r.worst_violation
            );
        }
        Ok(ExitCode::from(3))
    }
}
