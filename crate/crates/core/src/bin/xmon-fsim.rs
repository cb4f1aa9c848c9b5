use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::json;

use xmon_fsim::config::RunConfig;
use xmon_fsim::dynamics::NoiseSpec;
use xmon_fsim::experiments::{
    average_gate_fidelity, linspace, parse_initial_state, run_device_curves, run_population_trace,
    run_robustness_sweep, summary_path, write_csv, write_summary, SweepAxis,
};
use xmon_fsim::metrics::FidelityMethod;
use xmon_fsim::synthesis::{GatePlan, PathKind};
use xmon_fsim::{Error, Result};

#[derive(Parser)]
#[command(name = "xmon-fsim", version, about = "Geometric fSim gate synthesis and simulation for coupled Xmon qutrits")]
struct Cli {
    /// JSON run configuration; defaults to the dimensionless reference point.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Nngqc,
    Ngqc,
}

impl From<SchemeArg> for PathKind {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Nngqc => PathKind::Nngqc,
            SchemeArg::Ngqc => PathKind::Ngqc,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseArg {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Build a parallel fSim gate plan.
    Synthesize {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Population trace of a plan from a basis superposition such as `10+11`.
    Evolve {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, default_value = "10+11")]
        init: String,
        #[arg(long, value_enum, default_value = "on")]
        noise: NoiseArg,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Average gate fidelity of a plan.
    Fidelity {
        #[arg(long)]
        plan: PathBuf,
        /// `grid`, `grid:N` or `mc:N`.
        #[arg(long, default_value = "grid")]
        method: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-sample CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fidelity against an injected error for each scheme.
    Sweep {
        #[arg(long)]
        axis: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 21)]
        points: usize,
        /// Comma-separated list of `nngqc`, `ngqc`.
        #[arg(long, default_value = "nngqc,ngqc")]
        schemes: String,
        #[arg(long, default_value = "grid")]
        method: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
    },
    /// Bessel, flux-tuning and coupler curves.
    DeviceCurves {
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::dimensionless_reference()),
    }
}

fn load_plan(path: &Path) -> Result<GatePlan> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("reading {}: {e}", path.display())))?;
    GatePlan::from_json(&text)
}

fn write_with_summary<T: serde::Serialize>(path: &Path, rows: &[T], summary: serde_json::Value) -> Result<()> {
    write_csv(path, rows)?;
    write_summary(&summary_path(path), &summary)?;
    info!("wrote {} and its summary", path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(cli.config.as_deref())?;
    let clock = Instant::now();
    match cli.command {
        Command::Synthesize { scheme, out } => {
            let plan = cfg.synthesize(scheme.into())?;
            std::fs::write(&out, plan.to_json()?)?;
            let summary = json!({
                "scheme": plan.scheme,
                "unit_system": plan.unit_system,
                "g_eff": plan.g_eff,
                "duration": plan.duration,
                "iswap_time": plan.iswap_time,
                "cycle_time": plan.cycle_time,
                "cycle_counts": plan.cycle_counts,
                "conditional_phase": plan.target.xi,
                "local_phases": plan.local_phases,
            });
            write_summary(&summary_path(&out), &summary)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Evolve { plan, init, noise, samples, out } => {
            let plan = load_plan(&plan)?;
            let mut setup = cfg.setup()?;
            if matches!(noise, NoiseArg::Off) {
                setup.noise = NoiseSpec::off();
            }
            let psi = parse_initial_state(&init)?;
            let rows = run_population_trace(&plan, &setup, &psi, samples)?;
            let last = rows.last().copied().expect("at least two samples");
            let summary = json!({
                "scheme": plan.scheme,
                "initial": init,
                "noise": setup.noise.is_active(),
                "duration": plan.duration,
                "samples": rows.len(),
                "final": last,
                "wall_seconds": clock.elapsed().as_secs_f64(),
            });
            write_with_summary(&out, &rows, summary)?;
        }
        Command::Fidelity { plan, method, seed, out } => {
            let plan = load_plan(&plan)?;
            let method = FidelityMethod::parse(&method, seed)?;
            let (report, stats) = average_gate_fidelity(&plan, &cfg.setup()?, &method)?;
            let summary = json!({
                "scheme": plan.scheme,
                "method": method.to_string(),
                "seed": seed,
                "mean": report.mean,
                "std_error": report.std_error,
                "min": report.min,
                "max": report.max,
                "samples": report.samples.len(),
                "duration": plan.duration,
                "solver": stats,
                "wall_seconds": clock.elapsed().as_secs_f64(),
            });
            if let Some(out) = out {
                write_with_summary(&out, &report.samples, summary.clone())?;
            }
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Sweep { axis, from, to, points, schemes, method, seed, out } => {
            let axis: SweepAxis = axis.parse()?;
            let method = FidelityMethod::parse(&method, seed)?;
            let kinds = schemes
                .split(',')
                .map(|s| s.trim().parse::<PathKind>())
                .collect::<Result<Vec<_>>>()?;
            let plans = kinds.iter().map(|k| cfg.synthesize(*k)).collect::<Result<Vec<_>>>()?;
            let values = linspace(from, to, points)?;
            let setup = cfg.setup()?;
            let records = run_robustness_sweep(&plans, &setup, axis, &values, &method)?;
            let identity = if axis == SweepAxis::Delta { 1.0 } else { 0.0 };
            let per_scheme: Vec<_> = plans
                .iter()
                .map(|p| {
                    let mine: Vec<_> = records.iter().filter(|r| r.scheme == p.scheme).collect();
                    let worst = mine.iter().map(|r| r.fidelity).fold(f64::INFINITY, f64::min);
                    let baseline = mine.iter().find(|r| r.value == identity).map(|r| r.fidelity);
                    json!({
                        "scheme": p.scheme,
                        "duration": p.duration,
                        "baseline": baseline,
                        "min_fidelity": worst,
                        "endpoints": [mine.first().map(|r| r.fidelity), mine.last().map(|r| r.fidelity)],
                    })
                })
                .collect();
            let summary = json!({
                "axis": axis.name(),
                "from": from,
                "to": to,
                "points": points,
                "method": method.to_string(),
                "seed": seed,
                "schemes": per_scheme,
                "wall_seconds": clock.elapsed().as_secs_f64(),
            });
            write_with_summary(&out, &records, summary)?;
        }
        Command::DeviceCurves { out_dir } => {
            let device = cfg.device();
            let curves = run_device_curves(&device)?;
            std::fs::create_dir_all(&out_dir)?;
            let s = &curves.summary;
            write_with_summary(
                &out_dir.join("bessel.csv"),
                &curves.bessel,
                json!({
                    "beta_range": device.beta_range,
                    "points": curves.bessel.len(),
                }),
            )?;
            write_with_summary(
                &out_dir.join("flux.csv"),
                &curves.flux,
                json!({
                    "omega_Q_A": s.omega_qa,
                    "alpha_Q_A": s.alpha_qa,
                    "omega_Q_B_range": s.omega_qb_range,
                    "omega_coupler_range": s.omega_coupler_range,
                    "target_frequency_b": device.target_frequency_b,
                    "flux_for_target_b": s.flux_for_target_b,
                }),
            )?;
            write_with_summary(
                &out_dir.join("coupler.csv"),
                &curves.coupler,
                json!({
                    "qubit_frequency": device.qubit_frequency,
                    "window": device.coupler_window,
                    "zero_crossings": s.coupler_zero_crossings,
                    "direct_coupling": device.direct_coupling,
                    "direct_coupling_match_points": s.coupler_match_points,
                    "match_expansion_ratios": s.match_expansion_ratios,
                }),
            )?;
            println!("{}", serde_json::to_string_pretty(s)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
