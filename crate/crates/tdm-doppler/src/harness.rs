//! Scenario runner and sweep experiments.
//!
//! A [`Scenario`] bundles radar parameters, targets, a seed, the scene SNR,
//! and a detector. [`run_scenario`] drives the synth → 2D-FFT → detect →
//! disambiguate pipeline once; the sweep runners repeat it across a velocity
//! or angle grid and tabulate recovery quality, and [`compare_oracle`] checks
//! the phase-difference estimator against the hypothesis-compensation
//! baseline on random scenes.
//!
//! Sweep points run concurrently. Each point derives its own seed as
//! `mix_seed(base_seed, point_index)`, so results are identical for any
//! worker count, and rows come back in grid order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use crate::config::RadarParams;
use crate::disambiguation::{disambiguate, hpc_baseline, DisambiguationResult};
use crate::error::{Error, Result};
use crate::noise;
use crate::processing::{detect_peaks, range_doppler_process, DetectionMethod};
use crate::scene::{synthesize_cube, DataCube, Target};
use crate::window::Window;

/// A complete simulated experiment configuration.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: RadarParams,
    pub targets: Vec<Target>,
    pub seed: u64,
    /// Per-sample SNR applied to targets the runners generate themselves
    /// (sweeps, oracle trials); `f64::INFINITY` = noise-free.
    pub snr_db: f64,
    pub detector: DetectionMethod,
    pub window: Window,
}

impl Scenario {
    /// Noise-free scenario with the strongest-1 detector.
    pub fn noise_free(params: RadarParams, targets: Vec<Target>, seed: u64) -> Self {
        Self {
            params,
            targets,
            seed,
            snr_db: f64::INFINITY,
            detector: DetectionMethod::StrongestK { k: 1 },
            window: Window::Hann,
        }
    }

    /// Template (range, azimuth) for generated targets: the first configured
    /// target if any, otherwise 10 m broadside.
    fn template(&self) -> (f64, f64) {
        self.targets
            .first()
            .map(|t| (t.range_m, t.azimuth_rad))
            .unwrap_or((10.0, 0.0))
    }
}

fn stage<T>(name: &'static str, result: Result<T>) -> Result<T> {
    result.map_err(|e| Error::Stage {
        stage: name,
        source: Box::new(e),
    })
}

/// Run the full pipeline once and disambiguate every detection.
///
/// Results are ordered by descending detection magnitude. Deterministic for
/// a fixed scenario. A noise-free scenario with no targets produces an
/// all-zero cube and therefore an empty result list.
pub fn run_scenario(scenario: &Scenario) -> Result<Vec<DisambiguationResult>> {
    let cube = if scenario.targets.is_empty() && scenario.snr_db.is_infinite() {
        DataCube::zeros(scenario.params.clone(), scenario.seed)?
    } else {
        stage(
            "synth",
            synthesize_cube(&scenario.params, &scenario.targets, scenario.seed),
        )?
    };
    let maps = stage("process", range_doppler_process(&cube, scenario.window))?;
    let detections = stage("detect", detect_peaks(&maps, scenario.detector))?;
    detections
        .iter()
        .map(|det| stage("disambiguate", disambiguate(det, &scenario.params)))
        .collect()
}

/// Outcome classification for one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    /// Recovered within tolerance.
    Ok,
    /// Pipeline ran but missed the truth (or found nothing).
    Fail,
    /// Ground truth outside the recoverable extended span; not evaluated.
    OutOfSpan,
}

impl PointStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::Fail => "fail",
            PointStatus::OutOfSpan => "out_of_span",
        }
    }
}

/// One sweep point: the independent variable, ground truth, and the
/// recovered quantities.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    /// Swept variable: truth velocity (velocity sweep) or angle in degrees
    /// (angle sweep).
    pub independent: f64,
    pub truth_v_mps: f64,
    pub v_det_mps: f64,
    pub n_raw: f64,
    pub n: i64,
    pub v_hat_mps: f64,
    pub aoa_deg: f64,
    pub abs_err_mps: f64,
    pub status: PointStatus,
}

/// Sweep output: one row per grid point plus recounted summary statistics.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Success threshold: `max(0.1, doppler_resolution/2 + 1e-6)` m/s.
    pub tolerance_mps: f64,
    pub success_count: usize,
    /// Rows actually evaluated (everything not out-of-span).
    pub evaluated_count: usize,
    pub out_of_span_count: usize,
    /// Largest |v_hat − truth| over evaluated rows (0 when none).
    pub max_abs_err_mps: f64,
}

impl SweepResult {
    fn from_rows(rows: Vec<SweepRow>, tolerance_mps: f64) -> Self {
        let mut success = 0;
        let mut evaluated = 0;
        let mut out_of_span = 0;
        let mut max_err = 0.0_f64;
        for row in &rows {
            match row.status {
                PointStatus::OutOfSpan => out_of_span += 1,
                PointStatus::Ok => {
                    success += 1;
                    evaluated += 1;
                    if row.abs_err_mps.is_finite() {
                        max_err = max_err.max(row.abs_err_mps);
                    }
                }
                PointStatus::Fail => {
                    evaluated += 1;
                    if row.abs_err_mps.is_finite() {
                        max_err = max_err.max(row.abs_err_mps);
                    }
                }
            }
        }
        Self {
            rows,
            tolerance_mps,
            success_count: success,
            evaluated_count: evaluated,
            out_of_span_count: out_of_span,
            max_abs_err_mps: max_err,
        }
    }
}

/// Uniform inclusive grid from `from` to `to` in steps of `step`.
fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Estimator(format!("sweep step must be > 0, got {step}")));
    }
    if to < from {
        return Err(Error::Estimator(format!(
            "sweep range inverted: {from} > {to}"
        )));
    }
    let count = ((to - from) / step).round() as usize + 1;
    Ok((0..count).map(|i| from + i as f64 * step).collect())
}

fn failed_row(independent: f64, truth_v: f64, status: PointStatus) -> SweepRow {
    SweepRow {
        independent,
        truth_v_mps: truth_v,
        v_det_mps: f64::NAN,
        n_raw: f64::NAN,
        n: 0,
        v_hat_mps: f64::NAN,
        aoa_deg: f64::NAN,
        abs_err_mps: f64::NAN,
        status,
    }
}

/// Run one sweep point: build the single-target scene, run the pipeline,
/// keep the strongest result.
fn sweep_point(
    base: &Scenario,
    independent: f64,
    truth_v: f64,
    target: Target,
    point_seed: u64,
    tolerance: f64,
) -> Result<SweepRow> {
    let scenario = Scenario {
        targets: vec![target],
        seed: point_seed,
        ..base.clone()
    };
    let results = run_scenario(&scenario)?;
    let Some(top) = results.first() else {
        return Ok(failed_row(independent, truth_v, PointStatus::Fail));
    };
    let abs_err = (top.v_hat_mps - truth_v).abs();
    Ok(SweepRow {
        independent,
        truth_v_mps: truth_v,
        v_det_mps: top.v_det_mps,
        n_raw: top.n_raw,
        n: top.n,
        v_hat_mps: top.v_hat_mps,
        aoa_deg: top.aoa_deg,
        abs_err_mps: abs_err,
        status: if abs_err <= tolerance {
            PointStatus::Ok
        } else {
            PointStatus::Fail
        },
    })
}

/// Sweep ground-truth velocity over `[v_from, v_to]`, one pipeline run per
/// point at a fixed angle (the template target's azimuth).
///
/// Points with `|truth| > extended_v_max` are physically unrecoverable and
/// are marked out-of-span without running. `jobs = 0` uses all cores.
pub fn run_velocity_sweep(
    base: &Scenario,
    v_from: f64,
    v_to: f64,
    step: f64,
    jobs: usize,
) -> Result<SweepResult> {
    let derived = base.params.derive()?;
    let velocities = grid(v_from, v_to, step)?;
    let tolerance = (derived.doppler_resolution_mps / 2.0 + 1e-6).max(0.1);
    let (range_m, azimuth) = base.template();
    let e_max = derived.extended_v_max_mps;

    let rows = parallel_try_map(velocities.len(), jobs, |i| {
        let v = velocities[i];
        if v.abs() > e_max * (1.0 + 1e-12) {
            return Ok(failed_row(v, v, PointStatus::OutOfSpan));
        }
        let target = Target::new(range_m, v, azimuth, base.snr_db);
        sweep_point(
            base,
            v,
            v,
            target,
            noise::mix_seed(base.seed, i as u64),
            tolerance,
        )
    })?;
    Ok(SweepResult::from_rows(rows, tolerance))
}

/// Sweep target angle over `[theta_from_deg, theta_to_deg]` while the target
/// moves at `ground_speed_mps`; the radial truth is `speed·cos θ` and success
/// is measured against it.
pub fn run_angle_sweep(
    base: &Scenario,
    theta_from_deg: f64,
    theta_to_deg: f64,
    step_deg: f64,
    ground_speed_mps: f64,
    jobs: usize,
) -> Result<SweepResult> {
    let derived = base.params.derive()?;
    if theta_from_deg.abs() >= 90.0 || theta_to_deg.abs() >= 90.0 {
        return Err(Error::Estimator("angle sweep requires |θ| < 90°".into()));
    }
    let angles = grid(theta_from_deg, theta_to_deg, step_deg)?;
    let tolerance = (derived.doppler_resolution_mps / 2.0 + 1e-6).max(0.1);
    let (range_m, _) = base.template();
    let e_max = derived.extended_v_max_mps;

    let rows = parallel_try_map(angles.len(), jobs, |i| {
        let theta_deg = angles[i];
        let theta = theta_deg.to_radians();
        let radial = ground_speed_mps * theta.cos();
        if radial.abs() > e_max * (1.0 + 1e-12) {
            return Ok(failed_row(theta_deg, radial, PointStatus::OutOfSpan));
        }
        let target = Target::new(range_m, radial, theta, base.snr_db);
        sweep_point(
            base,
            theta_deg,
            radial,
            target,
            noise::mix_seed(base.seed, i as u64),
            tolerance,
        )
    })?;
    Ok(SweepResult::from_rows(rows, tolerance))
}

/// One disagreeing oracle trial, for diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct OracleDisagreement {
    pub trial: usize,
    pub truth_v_mps: f64,
    pub theta_deg: f64,
    pub n: i64,
    pub n_star: i64,
    pub noise_free: bool,
}

/// Agreement statistics between [`disambiguate`] and [`hpc_baseline`].
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub trials: usize,
    /// Agreements on noise-free versions of each scene.
    pub noise_free_agreements: usize,
    /// SNR of the noisy split, when the scenario configures one.
    pub snr_db: Option<f64>,
    /// Agreements at the configured SNR (same scenes, noise added).
    pub snr_agreements: Option<usize>,
    pub disagreements: Vec<OracleDisagreement>,
}

impl OracleReport {
    pub fn noise_free_agreement(&self) -> f64 {
        self.noise_free_agreements as f64 / self.trials as f64
    }

    pub fn snr_agreement(&self) -> Option<f64> {
        self.snr_agreements.map(|a| a as f64 / self.trials as f64)
    }
}

/// Randomized head-to-head of the phase-difference estimator against the
/// hypothesis-compensation baseline.
///
/// Draws `trials` scenes with `|v| ≤ 0.95·extended_v_max` and `|θ| ≤ 60°`,
/// runs the full pipeline, and counts trials where both methods pick the
/// same rotation count (mod N_TX, the span ambiguity). Each trial runs
/// noise-free; when the scenario carries a finite SNR the same scene is also
/// run with noise, reported separately.
pub fn compare_oracle(
    base: &Scenario,
    trials: usize,
    seed: u64,
    jobs: usize,
) -> Result<OracleReport> {
    if trials < 1 {
        return Err(Error::Estimator("compare_oracle needs ≥ 1 trial".into()));
    }
    let derived = base.params.derive()?;
    let e_max = derived.extended_v_max_mps;
    let (range_m, _) = base.template();
    let with_noise = base.snr_db.is_finite();

    struct TrialOutcome {
        noise_free_agree: bool,
        snr_agree: Option<bool>,
        detail: [Option<OracleDisagreement>; 2],
    }

    let outcomes = parallel_try_map(trials, jobs, |trial| {
        let trial_seed = noise::mix_seed(seed, trial as u64);
        let v = (noise::uniform(trial_seed, 0) * 2.0 - 1.0) * 0.95 * e_max;
        let theta = (noise::uniform(trial_seed, 1) * 2.0 - 1.0) * 60.0_f64.to_radians();

        let run_one = |snr: f64, noise_free: bool| -> Result<(bool, Option<OracleDisagreement>)> {
            let scenario = Scenario {
                targets: vec![Target::new(range_m, v, theta, snr)],
                seed: noise::mix_seed(trial_seed, 2),
                detector: DetectionMethod::StrongestK { k: 1 },
                ..base.clone()
            };
            let cube = synthesize_cube(&scenario.params, &scenario.targets, scenario.seed)?;
            let maps = range_doppler_process(&cube, scenario.window)?;
            let detections = detect_peaks(&maps, scenario.detector)?;
            let Some(det) = detections.first() else {
                return Ok((
                    false,
                    Some(OracleDisagreement {
                        trial,
                        truth_v_mps: v,
                        theta_deg: theta.to_degrees(),
                        n: 0,
                        n_star: 0,
                        noise_free,
                    }),
                ));
            };
            let pd = disambiguate(det, &scenario.params)?;
            let hpc = hpc_baseline(det, &scenario.params)?;
            let agree = (pd.n - hpc.n_star).rem_euclid(scenario.params.n_tx as i64) == 0;
            let detail = (!agree).then_some(OracleDisagreement {
                trial,
                truth_v_mps: v,
                theta_deg: theta.to_degrees(),
                n: pd.n,
                n_star: hpc.n_star,
                noise_free,
            });
            Ok((agree, detail))
        };

        let (nf_agree, nf_detail) = run_one(f64::INFINITY, true)?;
        let (snr_agree, snr_detail) = if with_noise {
            let (agree, detail) = run_one(base.snr_db, false)?;
            (Some(agree), detail)
        } else {
            (None, None)
        };
        Ok(TrialOutcome {
            noise_free_agree: nf_agree,
            snr_agree,
            detail: [nf_detail, snr_detail],
        })
    })?;

    let mut report = OracleReport {
        trials,
        noise_free_agreements: 0,
        snr_db: with_noise.then_some(base.snr_db),
        snr_agreements: with_noise.then_some(0),
        disagreements: Vec::new(),
    };
    for outcome in outcomes {
        if outcome.noise_free_agree {
            report.noise_free_agreements += 1;
        }
        if let (Some(true), Some(count)) = (outcome.snr_agree, report.snr_agreements.as_mut()) {
            *count += 1;
        }
        for detail in outcome.detail.into_iter().flatten() {
            report.disagreements.push(detail);
        }
    }
    Ok(report)
}

/// Run `f(0..count)` across `jobs` worker threads, returning results in
/// index order. Point work must be independent; determinism comes from the
/// per-index seeds, not from scheduling.
pub(crate) fn parallel_try_map<T, F>(count: usize, jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let jobs = if jobs == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        jobs
    }
    .min(count.max(1));

    if jobs <= 1 {
        return (0..count).map(f).collect();
    }

    let next = AtomicUsize::new(0);
    let (sender, receiver) = mpsc::channel::<(usize, Result<T>)>();
    let mut slots: Vec<Option<Result<T>>> = (0..count).map(|_| None).collect();

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            let sender = sender.clone();
            let next = &next;
            let f = &f;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                if sender.send((i, f(i))).is_err() {
                    break;
                }
            });
        }
        drop(sender);
        for (i, value) in receiver {
            slots[i] = Some(value);
        }
    });

    slots
        .into_iter()
        .map(|slot| slot.expect("worker filled every slot"))
        .collect()
}
