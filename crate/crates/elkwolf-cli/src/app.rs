//! Subcommand dispatch: parses flags, assembles the run configuration,
//! executes the requested analysis, and delivers CSV tables (standard
//! output or `--out`) and SVG plots (`--plot`). Exit codes: 0 success,
//! 1 usage or I/O error, 2 numeric failure.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use elkwolf::equilibria::{enumerate_equilibria, EquilibriumKind};
use elkwolf::hopf::{hopf_locate, normal_form};
use elkwolf::integrator::{integrate, Orbit, SolverOptions};
use elkwolf::model::State;
use elkwolf::scan::{
    bifurcation_diagram, biparametric_scan, AxisSpec, BifurcationPoint, OrbitConfig,
};
use elkwolf::selftest;
use elkwolf::sensitivity::{run_prcc_experiment, PrccExperiment};
use elkwolf::stability::{classify_equilibrium, Classification};

use crate::config::{self, RunConfig};
use crate::csvout::{num, opt_num, text, Table};
use crate::svg::{self, Series};

/// Failure classes, mapped onto exit codes 1 and 2.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, malformed configuration, or file I/O.
    Usage(String),
    /// The requested computation failed or found nothing.
    Numeric(String),
}

impl From<elkwolf::Error> for CliError {
    fn from(e: elkwolf::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

const COLOR_E: &str = "#2ca02c";
const COLOR_N: &str = "#ff7f0e";
const COLOR_P: &str = "#9467bd";

#[derive(Debug, Parser)]
#[command(
    name = "elkwolf",
    version,
    about = "Numerical laboratory for a refuge predator-prey model"
)]
struct Cli {
    /// Configuration file: flat `key = value` lines or a JSON object.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override one configuration key (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Write the data table here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one orbit and emit t,E,N,P samples.
    Simulate(SimulateArgs),
    /// List the three equilibria with existence flags.
    Equilibria,
    /// Classify each existing equilibrium by its Jacobian spectrum.
    Stability,
    /// Locate the stability crossing in a one-parameter sweep.
    Hopf(SweepArgs),
    /// Full normal-form coefficient table at the located crossing.
    Normalform(SweepArgs),
    /// Time-resolved partial rank correlation sensitivity table.
    Prcc(PrccArgs),
    /// Classify the coexistence state over a two-parameter grid.
    Scan(ScanArgs),
    /// Sweep one parameter and record attractor extrema per value.
    Bifurcation(BifurcationArgs),
    /// Run the numbered verification battery.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Initial prey density inside the refuge.
    #[arg(long, default_value_t = 340.0)]
    e0: f64,
    /// Initial prey density outside the refuge.
    #[arg(long, default_value_t = 380.0)]
    n0: f64,
    /// Initial predator density.
    #[arg(long, default_value_t = 4.0)]
    p0: f64,
    /// Integration horizon; defaults to the configured horizon.
    #[arg(long = "t-end", value_name = "TIME")]
    t_end: Option<f64>,
    /// Also write a population-versus-time SVG here.
    #[arg(long, value_name = "FILE")]
    plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Parameter to sweep.
    #[arg(long, default_value = "beta")]
    param: String,
    /// Lower end of the sweep interval.
    #[arg(long, default_value_t = 0.05)]
    min: f64,
    /// Upper end of the sweep interval.
    #[arg(long, default_value_t = 0.2)]
    max: f64,
}

#[derive(Debug, Args)]
struct PrccArgs {
    /// Latin hypercube sample count.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Half-width of each sampling range as a fraction of the baseline.
    #[arg(long, default_value_t = 0.5)]
    variation: f64,
    /// Number of output instants over the configured horizon.
    #[arg(long = "time-points", default_value_t = 400)]
    time_points: usize,
    /// Sample the doubled range reading, clipped below.
    #[arg(long = "alternative-range")]
    alternative_range: bool,
    /// Append the inert dummy column that estimates the noise floor.
    #[arg(long)]
    dummy: bool,
    /// Also write a final-time PRCC bar chart here.
    #[arg(long, value_name = "FILE")]
    plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Parameter on the horizontal axis.
    #[arg(long = "x-param", default_value = "gamma")]
    x_param: String,
    #[arg(long = "x-min", value_name = "VALUE")]
    x_min: Option<f64>,
    #[arg(long = "x-max", value_name = "VALUE")]
    x_max: Option<f64>,
    /// Horizontal grid resolution.
    #[arg(long = "x-res", default_value_t = 100)]
    x_res: usize,
    /// Parameter on the vertical axis.
    #[arg(long = "y-param", default_value = "beta")]
    y_param: String,
    #[arg(long = "y-min", value_name = "VALUE")]
    y_min: Option<f64>,
    #[arg(long = "y-max", value_name = "VALUE")]
    y_max: Option<f64>,
    /// Vertical grid resolution.
    #[arg(long = "y-res", default_value_t = 100)]
    y_res: usize,
    /// Also write the classified grid as an SVG here.
    #[arg(long, value_name = "FILE")]
    plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BifurcationArgs {
    /// Parameter to sweep.
    #[arg(long, default_value = "beta")]
    param: String,
    /// Lower end of the sweep.
    #[arg(long, default_value_t = 0.10)]
    min: f64,
    /// Upper end of the sweep.
    #[arg(long, default_value_t = 0.20)]
    max: f64,
    /// Number of sweep values (inclusive grid).
    #[arg(long, default_value_t = 51)]
    steps: usize,
    /// Integration horizon per sweep value.
    #[arg(long = "t-end", default_value_t = 7000.0)]
    t_end: f64,
    /// Fraction of the horizon discarded before extrema collection.
    #[arg(long, default_value_t = 0.7)]
    transient: f64,
    /// Initial prey density inside the refuge.
    #[arg(long, default_value_t = 360.0)]
    e0: f64,
    /// Initial prey density outside the refuge.
    #[arg(long, default_value_t = 400.0)]
    n0: f64,
    /// Initial predator density.
    #[arg(long, default_value_t = 15.0)]
    p0: f64,
    /// Also write a predator-extrema diagram here.
    #[arg(long, value_name = "FILE")]
    plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Run only the named or numbered criteria (repeatable).
    #[arg(long, value_name = "ID|NAME")]
    only: Vec<String>,
}

/// Parses the process arguments, runs the selected subcommand, and returns
/// the process exit code.
pub fn run_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            // clap routes help and version to standard output, everything
            // else to standard error.
            let _ = e.print();
            return if informational { 0 } else { 1 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            1
        }
        Err(CliError::Numeric(message)) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = load_config(&cli)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Simulate(args) => cmd_simulate(&cfg, args, out),
        Command::Equilibria => cmd_equilibria(&cfg, out),
        Command::Stability => cmd_stability(&cfg, out),
        Command::Hopf(args) => cmd_hopf(&cfg, args, out),
        Command::Normalform(args) => cmd_normalform(&cfg, args, out),
        Command::Prcc(args) => cmd_prcc(&cfg, args, out),
        Command::Scan(args) => cmd_scan(&cfg, args, out),
        Command::Bifurcation(args) => cmd_bifurcation(&cfg, args, out),
        Command::Selftest(args) => cmd_selftest(args, out),
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let file_text = match &cli.config {
        Some(path) => Some(fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read {}: {e}", path.display()))
        })?),
        None => None,
    };
    let (cfg, missing) =
        config::build(file_text.as_deref(), &cli.set).map_err(CliError::Usage)?;
    if !missing.is_empty() {
        eprintln!(
            "note: config file leaves {} at the defaults",
            missing.join(", ")
        );
    }
    Ok(cfg)
}

fn solver_options(cfg: &RunConfig) -> SolverOptions<f64> {
    SolverOptions {
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.abs_tol,
        ..SolverOptions::default()
    }
}

/// Writes the table to `--out` or standard output. Nothing but the table
/// ever reaches standard output.
fn deliver(table: &Table, out: Option<&Path>) -> Result<(), CliError> {
    let rendered = table.render();
    match out {
        Some(path) => fs::write(path, rendered).map_err(|e| {
            CliError::Usage(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn write_plot(svg_text: String, path: &Path) -> Result<(), CliError> {
    fs::write(path, svg_text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn kind_label(kind: EquilibriumKind) -> &'static str {
    match kind {
        EquilibriumKind::Extinction => "extinction",
        EquilibriumKind::NoRefugeElk => "no_refuge_elk",
        EquilibriumKind::Coexistence => "coexistence",
    }
}

fn class_label(class: Classification) -> &'static str {
    match class {
        Classification::StableNode => "stable_node",
        Classification::StableFocus => "stable_focus",
        Classification::Unstable => "unstable",
        Classification::Marginal => "marginal",
    }
}

fn component_series(orbit: &Orbit<f64>, component: usize) -> Vec<(f64, f64)> {
    orbit
        .times
        .iter()
        .zip(&orbit.states)
        .map(|(t, s)| (*t, s[component]))
        .collect()
}

fn cmd_simulate(
    cfg: &RunConfig,
    args: &SimulateArgs,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let t_end = args.t_end.unwrap_or(cfg.horizon);
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(CliError::Usage("--t-end must be positive and finite".into()));
    }
    let init = State::new(args.e0, args.n0, args.p0);
    // `sample_count` counts intervals; the orbit includes both endpoints.
    let orbit = integrate(
        &cfg.params,
        init,
        t_end,
        cfg.sample_count + 1,
        solver_options(cfg),
    )?;
    let mut table = Table::new(&["t", "E", "N", "P"]);
    for (t, s) in orbit.times.iter().zip(&orbit.states) {
        table.push(vec![num(*t), num(s[0]), num(s[1]), num(s[2])]);
    }
    deliver(&table, out)?;
    if let Some(path) = &args.plot {
        let series = vec![
            Series::line("E", COLOR_E, component_series(&orbit, 0)),
            Series::line("N", COLOR_N, component_series(&orbit, 1)),
            Series::line("P", COLOR_P, component_series(&orbit, 2)),
        ];
        let svg_text = svg::series_plot("orbit", "t", "population", &series, None)
            .map_err(CliError::Numeric)?;
        write_plot(svg_text, path)?;
    }
    Ok(())
}

fn cmd_equilibria(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    cfg.params.validated()?;
    let mut table = Table::new(&["kind", "E", "N", "P", "exists"]);
    for eq in enumerate_equilibria(&cfg.params) {
        table.push(vec![
            kind_label(eq.kind).to_owned(),
            num(eq.point[0]),
            num(eq.point[1]),
            num(eq.point[2]),
            eq.exists.to_string(),
        ]);
    }
    deliver(&table, out)
}

fn cmd_stability(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    cfg.params.validated()?;
    let mut table = Table::new(&[
        "kind",
        "classification",
        "b1",
        "b2",
        "b3",
        "hurwitz_margin",
        "lambda1_re",
        "lambda1_im",
        "lambda2_re",
        "lambda2_im",
        "lambda3_re",
        "lambda3_im",
    ]);
    for eq in enumerate_equilibria(&cfg.params) {
        if !eq.exists {
            continue;
        }
        let report = classify_equilibrium(&cfg.params, &eq);
        let mut row = vec![
            kind_label(eq.kind).to_owned(),
            class_label(report.classification).to_owned(),
            num(report.charpoly.b1),
            num(report.charpoly.b2),
            num(report.charpoly.b3),
            num(report.charpoly.hurwitz_margin()),
        ];
        for lambda in &report.eigenvalues {
            row.push(num(lambda.re));
            row.push(num(lambda.im));
        }
        table.push(row);
    }
    deliver(&table, out)
}

fn located_normal_form(
    cfg: &RunConfig,
    args: &SweepArgs,
) -> Result<elkwolf::NormalFormReport, CliError> {
    let hopf = hopf_locate(&cfg.params, &args.param, args.min, args.max)?.ok_or_else(|| {
        CliError::Numeric(format!(
            "no stability crossing of the coexistence state for {} in [{}, {}]",
            args.param, args.min, args.max
        ))
    })?;
    if hopf.multiple_candidates {
        eprintln!(
            "note: several crossings in the sweep interval; reporting the smallest"
        );
    }
    Ok(normal_form(&cfg.params, &hopf)?)
}

fn cmd_hopf(cfg: &RunConfig, args: &SweepArgs, out: Option<&Path>) -> Result<(), CliError> {
    let report = located_normal_form(cfg, args)?;
    let hopf = &report.hopf;
    let mut table = Table::new(&[
        "beta_sharp",
        "psi0",
        "b1",
        "b2",
        "b3",
        "transversality",
        "S1",
        "S2",
        "S3",
        "l1_re",
        "l1_im",
    ]);
    table.push(vec![
        num(hopf.beta_sharp),
        num(hopf.psi0),
        num(hopf.charpoly.b1),
        num(hopf.charpoly.b2),
        num(hopf.charpoly.b3),
        num(hopf.transversality_raw),
        num(report.s1),
        num(report.s2),
        num(report.s3),
        num(report.l1.re),
        num(report.l1.im),
    ]);
    deliver(&table, out)
}

fn push_scalar(table: &mut Table, name: &str, value: f64) {
    table.push(vec![name.to_owned(), num(value), String::new()]);
}

fn push_complex(table: &mut Table, name: &str, re: f64, im: f64) {
    table.push(vec![name.to_owned(), num(re), num(im)]);
}

fn push_matrix<M>(table: &mut Table, prefix: &str, m: &M)
where
    M: std::ops::Index<(usize, usize), Output = f64>,
{
    for i in 0..3 {
        for j in 0..3 {
            push_scalar(table, &format!("{prefix}_{}{}", i + 1, j + 1), m[(i, j)]);
        }
    }
}

fn cmd_normalform(
    cfg: &RunConfig,
    args: &SweepArgs,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let report = located_normal_form(cfg, args)?;
    let hopf = &report.hopf;
    let tr = &report.transformation;
    let mut table = Table::new(&["quantity", "re", "im"]);
    push_scalar(&mut table, "parameter_value", hopf.beta_sharp);
    push_scalar(&mut table, "psi0", hopf.psi0);
    push_scalar(&mut table, "equilibrium_e", hopf.equilibrium.point[0]);
    push_scalar(&mut table, "equilibrium_n", hopf.equilibrium.point[1]);
    push_scalar(&mut table, "equilibrium_p", hopf.equilibrium.point[2]);
    push_scalar(&mut table, "b1", hopf.charpoly.b1);
    push_scalar(&mut table, "b2", hopf.charpoly.b2);
    push_scalar(&mut table, "b3", hopf.charpoly.b3);
    push_scalar(&mut table, "transversality", hopf.transversality_raw);
    push_scalar(&mut table, "b1_prime", hopf.b_prime[0]);
    push_scalar(&mut table, "b2_prime", hopf.b_prime[1]);
    push_scalar(&mut table, "b3_prime", hopf.b_prime[2]);
    push_scalar(&mut table, "p1", hopf.p1);
    push_scalar(&mut table, "p2", hopf.p2);
    push_scalar(&mut table, "r1", hopf.r1);
    push_scalar(&mut table, "r2", hopf.r2);
    push_scalar(&mut table, "phi1_prime", hopf.phi1_prime);
    push_scalar(&mut table, "phi2_prime", hopf.phi2_prime);
    push_scalar(&mut table, "d1", tr.d1);
    push_scalar(&mut table, "det_c", tr.det_c);
    push_scalar(&mut table, "off_pattern", tr.off_pattern);
    push_scalar(
        &mut table,
        "orientation_flipped",
        if tr.orientation_flipped { 1.0 } else { 0.0 },
    );
    push_matrix(&mut table, "b", &tr.b_matrix);
    push_matrix(&mut table, "c", &tr.c_matrix);
    push_matrix(&mut table, "c_inv", &tr.c_inverse);
    push_matrix(&mut table, "t", &tr.t_matrix);
    for (index, hessian) in report.hessians.iter().enumerate() {
        push_matrix(&mut table, &format!("hess{}", index + 1), hessian);
    }
    push_complex(&mut table, "g20", report.g20.re, report.g20.im);
    push_complex(&mut table, "g11", report.g11.re, report.g11.im);
    push_complex(&mut table, "g02", report.g02.re, report.g02.im);
    push_complex(&mut table, "big_g21", report.big_g21.re, report.big_g21.im);
    push_complex(&mut table, "g110", report.g110.re, report.g110.im);
    push_complex(&mut table, "g101", report.g101.re, report.g101.im);
    push_scalar(&mut table, "h11", report.h11);
    push_complex(&mut table, "h20", report.h20.re, report.h20.im);
    push_scalar(&mut table, "w11", report.w11);
    push_complex(
        &mut table,
        "w20_standard",
        report.w20_standard.re,
        report.w20_standard.im,
    );
    push_complex(
        &mut table,
        "w20_variant",
        report.w20_variant.re,
        report.w20_variant.im,
    );
    push_complex(&mut table, "g21", report.g21.re, report.g21.im);
    push_complex(&mut table, "l1", report.l1.re, report.l1.im);
    push_scalar(&mut table, "p_prime0", report.p_prime0);
    push_scalar(&mut table, "q_prime0", report.q_prime0);
    push_scalar(&mut table, "s1", report.s1);
    push_scalar(&mut table, "s2", report.s2);
    push_scalar(&mut table, "s3", report.s3);
    deliver(&table, out)
}

fn cmd_prcc(cfg: &RunConfig, args: &PrccArgs, out: Option<&Path>) -> Result<(), CliError> {
    let experiment = PrccExperiment {
        baseline: cfg.params,
        variation: args.variation,
        alternative_range: args.alternative_range,
        n_samples: args.samples,
        time_points: args.time_points,
        horizon: cfg.horizon,
        seed: cfg.seed,
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.abs_tol,
        include_dummy: args.dummy,
        ..PrccExperiment::default()
    };
    let result = run_prcc_experiment(&experiment)?;
    if result.dropped_samples > 0 || result.unbounded_samples > 0 {
        eprintln!(
            "note: {} samples dropped, {} flagged as violating the boundedness condition",
            result.dropped_samples, result.unbounded_samples
        );
    }
    let mut table = Table::new(&["parameter", "output", "time", "prcc", "t", "p"]);
    for entry in &result.entries {
        table.push(vec![
            entry.parameter.clone(),
            entry.output.label().to_owned(),
            num(entry.time),
            num(entry.prcc),
            num(entry.t_statistic),
            num(entry.p_value),
        ]);
    }
    deliver(&table, out)?;
    if let Some(path) = &args.plot {
        let mut groups: Vec<(String, Vec<f64>)> = Vec::new();
        for aggregate in &result.aggregates {
            match groups.iter_mut().find(|(name, _)| *name == aggregate.parameter) {
                Some((_, values)) => values.push(aggregate.prcc),
                None => groups.push((aggregate.parameter.clone(), vec![aggregate.prcc])),
            }
        }
        let svg_text = svg::bar_chart(
            "final-time sensitivity",
            "PRCC",
            &[("E", COLOR_E), ("N", COLOR_N), ("P", COLOR_P)],
            &groups,
        )
        .map_err(CliError::Numeric)?;
        write_plot(svg_text, path)?;
    }
    Ok(())
}

/// Ranges assumed when a scan axis omits its bounds.
fn default_range(name: &str) -> Option<(f64, f64)> {
    match name {
        "gamma" => Some((0.001, 0.20)),
        "beta" => Some((0.01, 0.30)),
        "xi" => Some((0.01, 0.30)),
        _ => None,
    }
}

fn scan_axis(
    name: &str,
    min: Option<f64>,
    max: Option<f64>,
    resolution: usize,
    flag: &str,
) -> Result<AxisSpec, CliError> {
    let fallback = default_range(name);
    let lo = min.or(fallback.map(|r| r.0)).ok_or_else(|| {
        CliError::Usage(format!("no default range for `{name}`; pass --{flag}-min"))
    })?;
    let hi = max.or(fallback.map(|r| r.1)).ok_or_else(|| {
        CliError::Usage(format!("no default range for `{name}`; pass --{flag}-max"))
    })?;
    Ok(AxisSpec::new(name, lo, hi, resolution))
}

fn cmd_scan(cfg: &RunConfig, args: &ScanArgs, out: Option<&Path>) -> Result<(), CliError> {
    let x_axis = scan_axis(&args.x_param, args.x_min, args.x_max, args.x_res, "x")?;
    let y_axis = scan_axis(&args.y_param, args.y_min, args.y_max, args.y_res, "y")?;
    let grid = biparametric_scan(&cfg.params, &x_axis, &y_axis)?;
    let mut table = Table::new(&["x", "y", "class", "b1", "b3", "hurwitz_margin"]);
    for cell in &grid.cells {
        table.push(vec![
            num(cell.x),
            num(cell.y),
            cell.class.label().to_owned(),
            opt_num(cell.b1),
            opt_num(cell.b3),
            opt_num(cell.hurwitz_margin),
        ]);
    }
    deliver(&table, out)?;
    if let Some(path) = &args.plot {
        let title = format!("coexistence stability over ({}, {})", x_axis.name, y_axis.name);
        let svg_text = svg::grid_plot(&title, &grid).map_err(CliError::Numeric)?;
        write_plot(svg_text, path)?;
    }
    Ok(())
}

fn cmd_bifurcation(
    cfg: &RunConfig,
    args: &BifurcationArgs,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let orbit_config = OrbitConfig {
        initial: State::new(args.e0, args.n0, args.p0),
        t_end: args.t_end,
        sample_count: (args.t_end.ceil() as usize).max(1) + 1,
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.abs_tol,
        transient_fraction: args.transient,
        converged_tol: 0.01,
    };
    let diagram = bifurcation_diagram(
        &cfg.params,
        &args.param,
        args.min,
        args.max,
        args.steps,
        &orbit_config,
    )?;
    let mut table = Table::new(&["param", "variable", "kind", "value"]);
    let variables = ["E", "N", "P"];
    for point in &diagram.points {
        if let Some(reason) = &point.failure {
            eprintln!("note: {} = {}: {reason}", diagram.parameter, point.value);
            continue;
        }
        for (component, variable) in variables.iter().enumerate() {
            for value in &point.minima[component] {
                table.push(vec![
                    num(point.value),
                    (*variable).to_owned(),
                    "min".to_owned(),
                    num(*value),
                ]);
            }
            for value in &point.maxima[component] {
                table.push(vec![
                    num(point.value),
                    (*variable).to_owned(),
                    "max".to_owned(),
                    num(*value),
                ]);
            }
            if let Some(terminal) = &point.terminal {
                table.push(vec![
                    num(point.value),
                    (*variable).to_owned(),
                    "terminal".to_owned(),
                    num(terminal[component]),
                ]);
            }
        }
    }
    if let Some(marker) = diagram.hopf_marker {
        table.push(vec![num(marker), String::new(), "hopf".to_owned(), num(marker)]);
    }
    deliver(&table, out)?;
    if let Some(path) = &args.plot {
        let collect = |pick: fn(&BifurcationPoint) -> &Vec<f64>| {
            diagram
                .points
                .iter()
                .filter(|point| point.failure.is_none())
                .flat_map(|point| pick(point).iter().map(move |v| (point.value, *v)))
                .collect::<Vec<(f64, f64)>>()
        };
        let terminal: Vec<(f64, f64)> = diagram
            .points
            .iter()
            .filter(|point| point.failure.is_none())
            .filter_map(|point| point.terminal.as_ref().map(|s| (point.value, s[2])))
            .collect();
        let series = vec![
            Series::scatter("P max", COLOR_P, collect(|point| &point.maxima[2])),
            Series::scatter("P min", "#c5b0d5", collect(|point| &point.minima[2])),
            Series::scatter("P final", "#7f7f7f", terminal),
        ];
        let svg_text = svg::series_plot(
            "predator extrema",
            &diagram.parameter,
            "P",
            &series,
            diagram.hopf_marker.map(|marker| (marker, "crossing")),
        )
        .map_err(CliError::Numeric)?;
        write_plot(svg_text, path)?;
    }
    Ok(())
}

fn criterion_line(result: &elkwolf::selftest::CriterionResult) -> String {
    format!(
        "criterion {:02} {:<32} {} ({:.3}s) {}",
        result.id,
        result.name,
        if result.passed { "PASS" } else { "FAIL" },
        result.runtime.as_secs_f64(),
        result.detail
    )
}

fn cmd_selftest(args: &SelftestArgs, out: Option<&Path>) -> Result<(), CliError> {
    let ids: Vec<usize> = if args.only.is_empty() {
        (1..=selftest::CRITERION_COUNT).collect()
    } else {
        args.only
            .iter()
            .map(|selector| {
                selftest::resolve_selector(selector).ok_or_else(|| {
                    CliError::Usage(format!(
                        "unknown criterion `{selector}` (1..={} or a criterion name)",
                        selftest::CRITERION_COUNT
                    ))
                })
            })
            .collect::<Result<_, _>>()?
    };
    let mut table = Table::new(&["id", "name", "passed", "runtime_s", "detail"]);
    let mut failures = 0usize;
    for id in &ids {
        let result = selftest::run_criterion(*id);
        let line = criterion_line(&result);
        // The human-readable line is data without --out, a log with it.
        if out.is_some() {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
        if !result.passed {
            failures += 1;
        }
        table.push(vec![
            result.id.to_string(),
            result.name.to_owned(),
            result.passed.to_string(),
            num(result.runtime.as_secs_f64()),
            text(&result.detail),
        ]);
    }
    if let Some(path) = out {
        fs::write(path, table.render()).map_err(|e| {
            CliError::Usage(format!("cannot write {}: {e}", path.display()))
        })?;
    }
    if failures > 0 {
        return Err(CliError::Numeric(format!(
            "{failures} of {} criteria failed",
            ids.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_cover_every_variant() {
        assert_eq!(kind_label(EquilibriumKind::NoRefugeElk), "no_refuge_elk");
        assert_eq!(class_label(Classification::StableFocus), "stable_focus");
        assert_eq!(class_label(Classification::Marginal), "marginal");
    }

    #[test]
    fn scan_axes_fall_back_to_default_ranges() {
        let axis = scan_axis("gamma", None, None, 100, "x").unwrap();
        assert_eq!((axis.lo, axis.hi), (0.001, 0.20));
        let axis = scan_axis("xi", Some(0.05), None, 100, "y").unwrap();
        assert_eq!((axis.lo, axis.hi), (0.05, 0.30));
        assert!(scan_axis("eta", None, Some(0.4), 100, "x").is_err());
        let axis = scan_axis("eta", Some(0.2), Some(0.4), 100, "x").unwrap();
        assert_eq!((axis.lo, axis.hi), (0.2, 0.4));
    }
}
