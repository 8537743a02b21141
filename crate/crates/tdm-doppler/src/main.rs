//! Command-line harness over the library pipeline.
//!
//! Subcommands: `synth`, `process`, `sweep-velocity`, `sweep-angle`,
//! `compare-oracle`. Every error path exits nonzero with a single-line
//! machine-parsable reason on stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tdm_doppler::prelude::*;
use tdm_doppler::processing::CfarParams;

// The prelude's `Result` alias is for library code; the CLI reports strings.
use std::result::Result;

#[derive(Parser)]
#[command(
    name = "tdm-doppler",
    about = "TDM-MIMO FMCW radar simulation and Doppler disambiguation",
    version
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Radar config file (key = value); defaults to the 77 GHz 12x8 preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Base seed for noise and per-point seed derivation.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Per-sample SNR in dB for generated targets.
    #[arg(long, global = true, default_value_t = 20.0, conflicts_with = "noise_free", allow_negative_numbers = true)]
    snr_db: f64,

    /// Disable noise entirely (sets the noise-free sentinel).
    #[arg(long, global = true)]
    noise_free: bool,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Peak detector.
    #[arg(long, global = true, value_enum, default_value_t = DetectorKind::StrongestK)]
    detector: DetectorKind,

    /// Number of detections for strongest-k.
    #[arg(long, global = true, default_value_t = 1)]
    k: usize,

    /// CA-CFAR guard cells per side.
    #[arg(long, global = true, default_value_t = 4)]
    cfar_guard: usize,

    /// CA-CFAR training cells per side.
    #[arg(long, global = true, default_value_t = 8)]
    cfar_train: usize,

    /// CA-CFAR threshold factor over the local noise estimate.
    #[arg(long, global = true, default_value_t = 10.0)]
    cfar_threshold: f64,

    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DetectorKind {
    StrongestK,
    CaCfar,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a data cube from a config and target list.
    Synth {
        /// Target as `range_m,velocity_mps,azimuth_deg`; repeatable.
        #[arg(long = "target", value_name = "R,V,AZ")]
        targets: Vec<String>,
        /// Output cube file name inside --out.
        #[arg(long, default_value = "cube.rdc")]
        cube: String,
    },
    /// Read a cube file, run the 2D-FFT chain, detect, disambiguate, and
    /// write a detections CSV.
    Process {
        /// Input cube file (RDC1).
        #[arg(long)]
        cube: PathBuf,
        /// Also dump the range-Doppler maps (RDM1) next to the CSV.
        #[arg(long)]
        dump_maps: bool,
    },
    /// Sweep ground-truth velocity and tabulate recovery.
    SweepVelocity {
        #[arg(long, default_value_t = -22.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 22.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 0.2)]
        step: f64,
        /// Target angle in degrees.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta_deg: f64,
        /// Target range in meters.
        #[arg(long, default_value_t = 10.0)]
        range_m: f64,
    },
    /// Sweep target angle at a fixed ground speed.
    SweepAngle {
        #[arg(long, default_value_t = -80.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 80.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        /// Ground speed in m/s (radial truth is speed·cos θ).
        #[arg(long, default_value_t = 10.0)]
        speed: f64,
        #[arg(long, default_value_t = 10.0)]
        range_m: f64,
    },
    /// Randomized agreement check against the hypothesis-compensation
    /// baseline.
    CompareOracle {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 10.0)]
        range_m: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    let params = match &cli.global.config {
        Some(path) => load_config(path).map_err(|e| e.to_string())?,
        None => RadarParams::automotive_77ghz(),
    };
    let report = params.validate();
    if !report.is_valid() {
        return Err(format!("invalid radar parameters: {report}"));
    }
    let derived = params.derive().map_err(|e| e.to_string())?;

    let snr_db = if cli.global.noise_free {
        f64::INFINITY
    } else {
        cli.global.snr_db
    };
    let detector = match cli.global.detector {
        DetectorKind::StrongestK => DetectionMethod::StrongestK { k: cli.global.k },
        DetectorKind::CaCfar => DetectionMethod::CaCfar(CfarParams {
            guard_cells: cli.global.cfar_guard,
            training_cells: cli.global.cfar_train,
            threshold_factor: cli.global.cfar_threshold,
        }),
    };
    let out_dir = &cli.global.out;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| format!("cannot create output directory {}: {e}", out_dir.display()))?;

    let scenario = Scenario {
        params: params.clone(),
        targets: Vec::new(),
        seed: cli.global.seed,
        snr_db,
        detector,
        window: Window::Hann,
    };

    match cli.command {
        Command::Synth { targets, cube } => {
            let targets = parse_targets(&targets, snr_db)?;
            let data = synthesize_cube(&params, &targets, cli.global.seed)
                .map_err(|e| e.to_string())?;
            let path = out_dir.join(cube);
            write_cube(&path, &data).map_err(|e| e.to_string())?;
            println!(
                "wrote {} ({} targets, seed {}, {} samples)",
                path.display(),
                targets.len(),
                cli.global.seed,
                data.samples().len()
            );
        }
        Command::Process { cube, dump_maps } => {
            let data = read_cube(&cube).map_err(|e| e.to_string())?;
            let maps = range_doppler_process(&data, Window::Hann).map_err(|e| e.to_string())?;
            let detections = detect_peaks(&maps, detector).map_err(|e| e.to_string())?;
            let rows: Vec<(Detection, DisambiguationResult)> = detections
                .into_iter()
                .map(|det| {
                    let result = disambiguate(&det, &data.params)?;
                    Ok((det, result))
                })
                .collect::<tdm_doppler::error::Result<_>>()
                .map_err(|e| e.to_string())?;
            let csv_path = out_dir.join("detections.csv");
            write_text(&csv_path, &tdm_doppler::output::detections_csv(&rows))?;
            println!("wrote {} ({} detections)", csv_path.display(), rows.len());
            if dump_maps {
                let maps_path = out_dir.join("maps.rdm");
                write_maps(&maps_path, &maps).map_err(|e| e.to_string())?;
                println!("wrote {}", maps_path.display());
            }
        }
        Command::SweepVelocity {
            from,
            to,
            step,
            theta_deg,
            range_m,
        } => {
            let mut base = scenario;
            base.targets = vec![Target::new(range_m, 0.0, theta_deg.to_radians(), snr_db)];
            let result = run_velocity_sweep(&base, from, to, step, cli.global.jobs)
                .map_err(|e| e.to_string())?;
            let written = emit_outputs(&result, SweepKind::Velocity, &derived, out_dir)
                .map_err(|e| e.to_string())?;
            print_sweep_outcome(&result, &written);
        }
        Command::SweepAngle {
            from,
            to,
            step,
            speed,
            range_m,
        } => {
            let mut base = scenario;
            base.targets = vec![Target::new(range_m, 0.0, 0.0, snr_db)];
            let result = run_angle_sweep(&base, from, to, step, speed, cli.global.jobs)
                .map_err(|e| e.to_string())?;
            let written = emit_outputs(&result, SweepKind::Angle, &derived, out_dir)
                .map_err(|e| e.to_string())?;
            print_sweep_outcome(&result, &written);
        }
        Command::CompareOracle { trials, range_m } => {
            let mut base = scenario;
            base.targets = vec![Target::new(range_m, 0.0, 0.0, snr_db)];
            let report = compare_oracle(&base, trials, cli.global.seed, cli.global.jobs)
                .map_err(|e| e.to_string())?;
            let mut text = format!(
                "trials: {}\nnoise_free_agreement: {}/{} ({:.4})\n",
                report.trials,
                report.noise_free_agreements,
                report.trials,
                report.noise_free_agreement()
            );
            if let (Some(snr), Some(agreements)) = (report.snr_db, report.snr_agreements) {
                text.push_str(&format!(
                    "snr_db: {snr}\nsnr_agreement: {agreements}/{} ({:.4})\n",
                    report.trials,
                    report.snr_agreement().unwrap()
                ));
            }
            for d in &report.disagreements {
                text.push_str(&format!(
                    "disagreement: trial {} v={:.3} theta={:.1} n={} n_star={} noise_free={}\n",
                    d.trial, d.truth_v_mps, d.theta_deg, d.n, d.n_star, d.noise_free
                ));
            }
            let path = out_dir.join("compare_oracle.txt");
            write_text(&path, &text)?;
            print!("{text}");
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn print_sweep_outcome(result: &SweepResult, written: &[PathBuf]) {
    println!(
        "points: {}  success: {}/{}  out_of_span: {}  max_abs_err: {:.4} m/s",
        result.rows.len(),
        result.success_count,
        result.evaluated_count,
        result.out_of_span_count,
        result.max_abs_err_mps
    );
    for path in written {
        println!("wrote {}", path.display());
    }
}

fn parse_targets(specs: &[String], snr_db: f64) -> Result<Vec<Target>, String> {
    specs
        .iter()
        .map(|spec| {
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 3 {
                return Err(format!(
                    "bad --target `{spec}`: expected range_m,velocity_mps,azimuth_deg"
                ));
            }
            let parse = |label: &str, text: &str| {
                text.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad --target `{spec}`: {label} is not a number"))
            };
            Ok(Target::new(
                parse("range", parts[0])?,
                parse("velocity", parts[1])?,
                parse("azimuth", parts[2])?.to_radians(),
                snr_db,
            ))
        })
        .collect()
}

fn write_text(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}
