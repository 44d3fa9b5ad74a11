//! Command-line front end: field generation, single-path simulation,
//! closed-form bound checks, reconstruction demos, and full Monte Carlo
//! sweeps driven by JSON config files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use arfield::error::{Error, Result};
use arfield::experiment::{self, export, ExperimentConfig, RenewalTemplate};
use arfield::noise::apply_noise;
use arfield::rng::trial_stream;
use arfield::sampling::{
    generate_path, generate_path_from_draws, path_report, structural_report, ARConfig,
};
use arfield::{bounds, estimator, field};

#[derive(Parser)]
#[command(
    name = "arfield",
    version,
    about = "Bandlimited field reconstruction from AR(1) mobile-sensor sample paths",
    propagate_version = true
)]
struct Cli {
    /// Directory that receives fixed-name artifacts (sweep.*, reconstruction.*).
    /// Explicit --out paths are used verbatim.
    #[arg(long, global = true, env = "ARFIELD_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a seeded random conjugate-symmetric spectrum and print it as JSON
    GenerateField {
        /// Bandwidth: the spectrum has nonzero coefficients for |k| ≤ b
        #[arg(long, default_value_t = 3)]
        b: u32,
        /// Seed for the spectrum draw
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the JSON to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate one AR(1) sample path and report its structure and bounds
    SamplePath {
        /// AR(1) correlation coefficient in [0, 1)
        #[arg(long)]
        rho: f64,
        /// Sampling density (mean renewal draw is 1/n); required unless --draws is given
        #[arg(long)]
        n: Option<f64>,
        /// Renewal kind: uniform, scaled-beta, exponential, lognormal, generalized-pareto
        #[arg(long, default_value = "uniform")]
        kind: String,
        /// Support factor for scaled-beta (draws lie in (0, lambda/n])
        #[arg(long)]
        lambda: Option<f64>,
        /// First shape parameter for scaled-beta
        #[arg(long)]
        alpha: Option<f64>,
        /// Log-scale variance for lognormal
        #[arg(long)]
        log_var: Option<f64>,
        /// Tail index in [0, 0.5) for generalized-pareto
        #[arg(long)]
        xi: Option<f64>,
        /// Seed for the path draw
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// File of forced positive driving draws, one per line, replacing the
        /// random renewal process
        #[arg(long)]
        draws: Option<PathBuf>,
        /// Write the path as CSV (index,location) to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the closed-form path guarantees for a (rho, lambda, n) triple
    VerifyBounds {
        /// AR(1) correlation coefficient in [0, 1)
        #[arg(long)]
        rho: f64,
        /// Support factor: driving draws lie in (0, lambda/n]
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        /// Sampling density
        #[arg(long, default_value_t = 1000.0)]
        n: f64,
        /// Emit JSON instead of the aligned table
        #[arg(long)]
        json: bool,
    },
    /// Reconstruct the field from one seeded trial per density and write
    /// overlay artifacts (reconstruction.csv, reconstruction.svg)
    Simulate {
        /// Experiment config JSON (first rho entry is used)
        #[arg(long)]
        config: PathBuf,
        /// Number of evaluation points for the reconstruction curves
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Override the config's master_seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the full Monte Carlo sweep from a config file and export
    /// sweep.csv, sweep.json, and sweep.svg
    Sweep {
        /// Experiment config JSON
        #[arg(long)]
        config: PathBuf,
        /// Override the config's master_seed
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenerateField { b, seed, out } => generate_field(b, seed, out),
        Command::SamplePath {
            rho,
            n,
            kind,
            lambda,
            alpha,
            log_var,
            xi,
            seed,
            draws,
            out,
        } => {
            let template = RenewalTemplate {
                kind,
                lambda,
                alpha,
                log_var,
                xi,
            };
            sample_path(rho, n, template, seed, draws, out)
        }
        Command::VerifyBounds {
            rho,
            lambda,
            n,
            json,
        } => verify_bounds(rho, lambda, n, json),
        Command::Simulate { config, grid, seed } => {
            simulate(&load_config(&config, seed)?, grid, &cli.out_dir)
        }
        Command::Sweep { config, seed } => sweep(&load_config(&config, seed)?, &cli.out_dir),
    }
}

/// Prints one line to stdout, exiting quietly if the reader has gone away
/// (e.g. when piped into `head`).
fn emit(text: impl std::fmt::Display) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(Error::Io(e)),
    }
}

fn load_config(path: &Path, seed_override: Option<u64>) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)?;
    let mut config: ExperimentConfig =
        serde_json::from_str(&text).map_err(|e| Error::InvalidConfig {
            field: "config".into(),
            reason: e.to_string(),
        })?;
    if let Some(seed) = seed_override {
        config.master_seed = seed;
    }
    Ok(config)
}

fn artifact_path(out_dir: &Path, name: &str) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)?;
    Ok(out_dir.join(name))
}

fn generate_field(b: u32, seed: u64, out: Option<PathBuf>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spectrum = field::random_field(b, &mut rng);
    let text = serde_json::to_string_pretty(&spectrum)?;
    if let Some(path) = &out {
        fs::write(path, format!("{text}\n"))?;
    }
    emit(text)
}

fn sample_path(
    rho: f64,
    n: Option<f64>,
    template: RenewalTemplate,
    seed: u64,
    draws: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Result<()> {
    let (path, checks) = match draws {
        Some(file) => {
            let text = fs::read_to_string(&file)?;
            let mut values = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let y: f64 = line.parse().map_err(|_| {
                    Error::InvalidParameter(format!(
                        "draws file line {}: {line:?} is not a number",
                        i + 1
                    ))
                })?;
                values.push(y);
            }
            let path = generate_path_from_draws(&values, rho)?;
            let checks = structural_report(&path);
            (path, checks)
        }
        None => {
            let n = n.ok_or_else(|| {
                Error::InvalidParameter("--n is required unless --draws is given".into())
            })?;
            let spec = template.resolve(n)?;
            let cfg = ARConfig::new(rho, spec)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let path = generate_path(&cfg, &mut rng)?;
            let checks = path_report(&path, &cfg);
            (path, checks)
        }
    };
    let mut report = json!({
        "m": path.m(),
        "remainder": path.remainder,
        "overshoot": path.overshoot,
        "checks": checks,
    });
    match out {
        Some(file) => {
            fs::write(&file, path.to_csv())?;
            report["csv"] = json!(file.display().to_string());
        }
        None => {
            report["locations"] = json!(path.locations);
        }
    }
    emit(serde_json::to_string_pretty(&report)?)
}

fn verify_bounds(rho: f64, lambda: f64, n: f64, as_json: bool) -> Result<()> {
    let b = bounds::compute_bounds(rho, lambda, n)?;
    if as_json {
        return emit(serde_json::to_string_pretty(&b)?);
    }
    let lines = [
        format!("rho                 {rho}"),
        format!("lambda              {lambda}"),
        format!("n                   {n}"),
        format!("effective density   {}", b.effective_density),
        format!("expected samples    [{}, {}]", b.em_lower, b.em_upper),
        format!("per-path samples    > {}", b.m_lower),
        format!("remainder           <= {}", b.remainder_upper),
        format!("density threshold   {}", b.density_threshold),
    ];
    emit(lines.join("\n"))
}

fn simulate(config: &ExperimentConfig, grid: usize, out_dir: &Path) -> Result<()> {
    config.validate()?;
    if grid < 2 {
        return Err(Error::InvalidParameter(
            "--grid must be at least 2".into(),
        ));
    }
    let truth = config.field.resolve();
    let rho = config.rho_list[0];
    let xs: Vec<f64> = (0..grid).map(|i| i as f64 / grid as f64).collect();
    let truth_curve: Vec<f64> = xs.iter().map(|&x| field::evaluate(&truth, x)).collect();
    let mut series: Vec<(String, Vec<f64>)> = vec![("true field".into(), truth_curve)];
    let mut points = Vec::new();
    for (n_idx, &n) in config.n_list.iter().enumerate() {
        let renewal = config.renewal.resolve(n as f64)?;
        let cfg = ARConfig::new(rho, renewal)?;
        let mut rng = trial_stream(config.master_seed, 0, n_idx, 0);
        let path = generate_path(&cfg, &mut rng)?;
        if path.m() == 0 {
            points.push(json!({ "n": n, "failed": true }));
            continue;
        }
        let mut values: Vec<f64> = path
            .locations
            .iter()
            .map(|&s| field::evaluate(&truth, s))
            .collect();
        apply_noise(&mut values, &config.noise, &mut rng)?;
        let est = estimator::estimate(&values, truth.bandwidth())?;
        let distortion = estimator::coefficient_distortion(&est, &truth)?.total;
        let recon: Vec<f64> = xs.iter().map(|&x| estimator::reconstruct(&est, x)).collect();
        points.push(json!({ "n": n, "m": path.m(), "distortion": distortion }));
        series.push((format!("estimate n={n}"), recon));
    }

    let mut csv = String::from("x,true_value");
    for (label, _) in &series[1..] {
        csv.push_str(&format!(",{}", label.replace("estimate n=", "estimate_n")));
    }
    csv.push('\n');
    for (i, &x) in xs.iter().enumerate() {
        csv.push_str(&format!("{x}"));
        for (_, ys) in &series {
            csv.push_str(&format!(",{}", ys[i]));
        }
        csv.push('\n');
    }
    let csv_path = artifact_path(out_dir, "reconstruction.csv")?;
    fs::write(&csv_path, csv)?;
    let svg_path = artifact_path(out_dir, "reconstruction.svg")?;
    fs::write(&svg_path, export::overlay_svg(&xs, &series))?;

    let summary = json!({
        "rho": rho,
        "field_digest": experiment::field_digest(&truth),
        "points": points,
        "csv": csv_path.display().to_string(),
        "svg": svg_path.display().to_string(),
    });
    emit(serde_json::to_string_pretty(&summary)?)
}

fn sweep(config: &ExperimentConfig, out_dir: &Path) -> Result<()> {
    let curve = experiment::monte_carlo(config)?;
    let csv_path = artifact_path(out_dir, "sweep.csv")?;
    fs::write(&csv_path, export::export_csv(&curve)?)?;
    let json_path = artifact_path(out_dir, "sweep.json")?;
    fs::write(&json_path, export::export_json(&curve)?)?;
    let svg_path = artifact_path(out_dir, "sweep.svg")?;
    fs::write(&svg_path, export::distortion_svg(&curve))?;
    let violations: usize = curve.points.iter().map(|p| p.bound_violations).sum();
    let summary = json!({
        "slopes": curve.slopes,
        "bound_violations": violations,
        "field_digest": curve.field_digest,
        "csv": csv_path.display().to_string(),
        "json": json_path.display().to_string(),
        "svg": svg_path.display().to_string(),
    });
    emit(serde_json::to_string_pretty(&summary)?)
}
