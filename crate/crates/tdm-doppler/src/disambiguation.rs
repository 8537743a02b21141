//! Phase-difference Doppler disambiguation, plus the hypothesis-compensation
//! baseline used as an independent cross-check.
//!
//! A TDM-MIMO radar measures Doppler from chirps spaced `N_TX·T_c` apart, so
//! the Doppler FFT can only place a target inside `±v_max = ±λ/(4·N_TX·T_c)`.
//! The adjacent-TX phase difference, however, accrues over a single `T_c` and
//! carries the velocity with an `N_TX`-times wider unambiguous span — once the
//! angle-of-arrival contribution is removed using the RX phase difference:
//!
//! ```text
//! φ_r   = 2π·d_r·sin θ / λ            adjacent-RX (angle only)
//! φ_t   = 2π·d_t·sin θ / λ + φ_t_v    adjacent-TX (angle + velocity)
//! φ_t_v = φ_t − (d_t/d_r)·φ_r         velocity term, angle eliminated
//! ```
//!
//! The per-chirp phase implied by the detected grid velocity,
//! `φ_det = 4π·v_det·N_TX·T_c/λ`, differs from the true per-chirp phase
//! `N_TX·φ_t_v` by a whole number of turns:
//!
//! ```text
//! n_raw = (N_TX·φ_t_v − φ_det) / 2π
//! v_hat = v_det + 2·round(n_raw)·v_max     (wrapped into the extended span)
//! ```
//!
//! `φ_t_v` is deliberately left unwrapped: because `d_t/d_r` is an integer, a
//! 2π error in the measured `φ_t` shifts `n_raw` by exactly `N_TX`, which the
//! final wrap into `(-extended_v_max, extended_v_max]` cancels. Phases are
//! estimated as the angle of magnitude-weighted sums of adjacent-element
//! conjugate products, pooled over the whole virtual array, which avoids
//! per-pair unwrapping failures at low SNR.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::config::{DerivedParams, RadarParams};
use crate::error::{Error, Result};
use crate::processing::Detection;

const TAU: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

/// Wrap a phase into the principal interval `(-π, π]`.
///
/// Values already inside the interval pass through unchanged (bit-exact).
pub fn wrap_phase(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    PI - (PI - x).rem_euclid(TAU)
}

/// Wrap a velocity into the half-open extended span `(-e_max, e_max]`.
///
/// Values already inside the span pass through unchanged (bit-exact), so an
/// unambiguous detection keeps `v_hat == v_det` exactly.
pub fn wrap_to_extended(v: f64, e_max: f64) -> f64 {
    if v > -e_max && v <= e_max {
        return v;
    }
    e_max - (e_max - v).rem_euclid(2.0 * e_max)
}

/// All phase quantities produced while disambiguating one detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEstimates {
    /// Adjacent-RX phase difference, in `(-π, π]`.
    pub phi_r: f64,
    /// Adjacent-TX phase difference, in `(-π, π]`.
    pub phi_t: f64,
    /// Angle-of-arrival part of `phi_t`, `(d_t/d_r)·phi_r` (diagnostic).
    pub phi_t_azi: f64,
    /// Velocity part of the TX step, `phi_t − (d_t/d_r)·phi_r`, unwrapped.
    pub phi_t_v: f64,
    /// Per-chirp phase implied by the grid velocity, `π·v_det/v_max`.
    pub phi_det: f64,
    /// True per-chirp phase, `N_TX·phi_t_v` (diagnostic identity).
    pub phi_true: f64,
}

/// Output of [`disambiguate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisambiguationResult {
    pub estimates: PhaseEstimates,
    /// Rotation count before rounding.
    pub n_raw: f64,
    /// Rotation count, rounded half away from zero.
    pub n: i64,
    /// Grid velocity from the Doppler bin (m/s).
    pub v_det_mps: f64,
    /// Recovered velocity in `(-extended_v_max, extended_v_max]` (m/s).
    pub v_hat_mps: f64,
    /// Angle of arrival from `phi_r` (degrees); NaN when `aoa_valid` is false.
    pub aoa_deg: f64,
    /// False when `|λ·phi_r/(2π·d_r)| > 1` (noise pushed the RX phase outside
    /// the physical range). The velocity path is still returned.
    pub aoa_valid: bool,
    /// Coherence of the pooled conjugate-product sums in [0, 1]; values well
    /// below 1 indicate a corrupted snapshot (e.g. two targets in one cell).
    pub phase_coherence: f64,
}

fn check_snapshot(snapshot: &[Complex64], params: &RadarParams) -> Result<()> {
    let expected = params.n_tx * params.n_rx;
    if snapshot.len() != expected {
        return Err(Error::DimensionMismatch(format!(
            "snapshot length {} != N_TX·N_RX = {expected}",
            snapshot.len()
        )));
    }
    Ok(())
}

/// Pooled conjugate-product sum over adjacent-RX pairs (within each TX block).
fn rx_pair_sum(snapshot: &[Complex64], params: &RadarParams) -> (Complex64, f64) {
    let n_rx = params.n_rx;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut weight = 0.0;
    for tx in 0..params.n_tx {
        for rx in 0..n_rx - 1 {
            let product = snapshot[tx * n_rx + rx + 1] * snapshot[tx * n_rx + rx].conj();
            sum += product;
            weight += product.norm();
        }
    }
    (sum, weight)
}

/// Pooled conjugate-product sum over adjacent-TX pairs (per RX channel).
fn tx_pair_sum(snapshot: &[Complex64], params: &RadarParams) -> (Complex64, f64) {
    let n_rx = params.n_rx;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut weight = 0.0;
    for tx in 0..params.n_tx - 1 {
        for rx in 0..n_rx {
            let product = snapshot[(tx + 1) * n_rx + rx] * snapshot[tx * n_rx + rx].conj();
            sum += product;
            weight += product.norm();
        }
    }
    (sum, weight)
}

/// Estimate the adjacent-RX phase difference `φ_r` from a snapshot.
///
/// Magnitude-weighted average over all `N_TX·(N_RX−1)` adjacent-RX pairs:
/// the angle of the summed conjugate products. Needs `N_RX ≥ 2`.
pub fn estimate_phi_r(snapshot: &[Complex64], params: &RadarParams) -> Result<f64> {
    check_snapshot(snapshot, params)?;
    if params.n_rx < 2 {
        return Err(Error::Estimator(
            "estimate_phi_r needs N_RX ≥ 2 for an RX baseline".into(),
        ));
    }
    Ok(wrap_phase(rx_pair_sum(snapshot, params).0.arg()))
}

/// Estimate the adjacent-TX phase difference `φ_t`, wrapped to `(-π, π]`.
///
/// Magnitude-weighted average over all `(N_TX−1)·N_RX` adjacent-TX pairs.
/// Needs `N_TX ≥ 2`.
pub fn estimate_phi_t(snapshot: &[Complex64], params: &RadarParams) -> Result<f64> {
    check_snapshot(snapshot, params)?;
    if params.n_tx < 2 {
        return Err(Error::Estimator(
            "estimate_phi_t needs N_TX ≥ 2 for a TX baseline".into(),
        ));
    }
    Ok(wrap_phase(tx_pair_sum(snapshot, params).0.arg()))
}

/// Remove the angle-of-arrival term: `φ_t_v = φ_t − (d_t/d_r)·φ_r`.
///
/// The result is intentionally not re-wrapped; see the module docs for the
/// wrap-invariance argument. Assumes validated params (integer `d_t/d_r`).
pub fn compute_phi_tv(phi_t: f64, phi_r: f64, params: &RadarParams) -> f64 {
    phi_t - params.spacing_ratio() * phi_r
}

/// Phase change implied by the detected grid velocity: `4π·v_det·N_TX·T_c/λ`,
/// computed as `π·v_det/v_max` (identical by the v_max definition), so the
/// span edges map to exactly ±π. Rejects `|v_det| > v_max`.
pub fn compute_phi_det(v_det_mps: f64, derived: &DerivedParams) -> Result<f64> {
    if !v_det_mps.is_finite() || v_det_mps.abs() > derived.v_max_mps * (1.0 + 1e-12) {
        return Err(Error::Estimator(format!(
            "|v_det| = {} exceeds v_max = {}",
            v_det_mps.abs(),
            derived.v_max_mps
        )));
    }
    Ok(PI * v_det_mps / derived.v_max_mps)
}

/// Rotation count before rounding: `(N_TX·φ_t_v − φ_det) / 2π`.
pub fn estimate_n(phi_t_v: f64, phi_det: f64, params: &RadarParams) -> f64 {
    (params.n_tx as f64 * phi_t_v - phi_det) / TAU
}

/// Run the full phase-difference chain on one detection.
///
/// `n` is `n_raw` rounded half away from zero; the recovered velocity
/// `v_det + 2·n·v_max` is wrapped into `(-extended_v_max, extended_v_max]`.
/// All intermediates are returned for diagnostics.
pub fn disambiguate(detection: &Detection, params: &RadarParams) -> Result<DisambiguationResult> {
    let derived = params.derive()?;
    let snapshot = &detection.snapshot;

    let (rx_sum, rx_weight) = {
        check_snapshot(snapshot, params)?;
        rx_pair_sum(snapshot, params)
    };
    let phi_r = estimate_phi_r(snapshot, params)?;
    let phi_t = estimate_phi_t(snapshot, params)?;
    let (tx_sum, tx_weight) = tx_pair_sum(snapshot, params);

    let phi_t_v = compute_phi_tv(phi_t, phi_r, params);
    let phi_det = compute_phi_det(detection.v_det_mps, &derived)?;
    let n_raw = estimate_n(phi_t_v, phi_det, params);
    let n = n_raw.round() as i64;
    let v_hat_mps = wrap_to_extended(
        detection.v_det_mps + 2.0 * n as f64 * derived.v_max_mps,
        derived.extended_v_max_mps,
    );

    let sin_arg = derived.wavelength_m * phi_r / (TAU * params.rx_spacing_m);
    let (aoa_deg, aoa_valid) = if sin_arg.abs() <= 1.0 {
        (sin_arg.asin().to_degrees(), true)
    } else {
        (f64::NAN, false)
    };

    let coherence = |sum: Complex64, weight: f64| {
        if weight > 0.0 {
            sum.norm() / weight
        } else {
            0.0
        }
    };
    let phase_coherence = coherence(rx_sum, rx_weight).min(coherence(tx_sum, tx_weight));

    Ok(DisambiguationResult {
        estimates: PhaseEstimates {
            phi_r,
            phi_t,
            phi_t_azi: params.spacing_ratio() * phi_r,
            phi_t_v,
            phi_det,
            phi_true: params.n_tx as f64 * phi_t_v,
        },
        n_raw,
        n,
        v_det_mps: detection.v_det_mps,
        v_hat_mps,
        aoa_deg,
        aoa_valid,
        phase_coherence,
    })
}

/// One hypothesis from the compensation baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisPeak {
    pub n: i64,
    /// Peak magnitude of the angle spectrum under this hypothesis.
    pub peak: f64,
}

/// Output of [`hpc_baseline`].
#[derive(Debug, Clone, PartialEq)]
pub struct HpcBaseline {
    /// Winning rotation hypothesis.
    pub n_star: i64,
    /// `v_det + 2·n*·v_max`, wrapped into the extended span (m/s).
    pub v_star_mps: f64,
    /// Full peak table, one entry per hypothesis, ascending in `n`.
    pub peaks: Vec<HypothesisPeak>,
}

/// Hypothesis-compensation baseline: try every rotation count, compensate the
/// per-TX velocity phase it implies, and keep the hypothesis whose angle
/// spectrum peaks highest.
///
/// Hypotheses `n ∈ {-N_TX/2, ..., N_TX/2}` cover the extended span. For each,
/// snapshot entry `(tx, rx)` is multiplied by `exp(-j·tx·(φ_det + 2πn)/N_TX)`
/// and scatter-added into the virtual aperture at position
/// `(d_t/d_r)·tx + rx` (in units of d_r); the correct hypothesis makes the
/// aperture a pure spatial tone whose zero-padded FFT peak is maximal, while
/// a wrong one decoheres the overlapping elements. Ties break toward smaller
/// `|n|`. Discrimination relies on overlap: it weakens as `d_t/d_r`
/// approaches `N_RX`.
pub fn hpc_baseline(detection: &Detection, params: &RadarParams) -> Result<HpcBaseline> {
    let derived = params.derive()?;
    check_snapshot(&detection.snapshot, params)?;
    let phi_det = compute_phi_det(detection.v_det_mps, &derived)?;

    let ratio = params.spacing_ratio() as usize;
    let n_rx = params.n_rx;
    let virtual_len = ratio * (params.n_tx - 1) + n_rx;
    let fft_len = (4 * virtual_len).max(2048).next_power_of_two();

    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(fft_len);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];

    let half_span = (params.n_tx / 2) as i64;
    let mut hypotheses: Vec<i64> = (-half_span..=half_span).collect();
    // Evaluate small |n| first so exact ties resolve toward it.
    hypotheses.sort_by_key(|&n| (n.abs(), n < 0));

    let mut peaks: Vec<HypothesisPeak> = Vec::with_capacity(hypotheses.len());
    let mut best: Option<HypothesisPeak> = None;
    let mut buffer = vec![Complex64::new(0.0, 0.0); fft_len];

    for &n in &hypotheses {
        let phi_tv_hyp = (phi_det + TAU * n as f64) / params.n_tx as f64;
        buffer.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for tx in 0..params.n_tx {
            let compensation = Complex64::from_polar(1.0, -phi_tv_hyp * tx as f64);
            for rx in 0..n_rx {
                buffer[ratio * tx + rx] += detection.snapshot[tx * n_rx + rx] * compensation;
            }
        }
        fft.process_with_scratch(&mut buffer, &mut scratch);
        let peak = buffer.iter().map(|v| v.norm()).fold(0.0_f64, f64::max);
        peaks.push(HypothesisPeak { n, peak });
        if best.is_none_or(|b| peak > b.peak) {
            best = Some(HypothesisPeak { n, peak });
        }
    }

    let winner = best.expect("hypothesis set is never empty");
    peaks.sort_by_key(|p| p.n);
    Ok(HpcBaseline {
        n_star: winner.n,
        v_star_mps: wrap_to_extended(
            detection.v_det_mps + 2.0 * winner.n as f64 * derived.v_max_mps,
            derived.extended_v_max_mps,
        ),
        peaks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RadarParams;

    fn params() -> RadarParams {
        RadarParams::automotive_77ghz()
    }

    /// Steering-model snapshot: entry (tx, rx) has phase
    /// `rx·φ_r + tx·(φ_azi + φ_t_v)` plus an arbitrary common offset, built
    /// straight from the phase-difference definitions (no FFT, no synthesis).
    fn analytic_snapshot(params: &RadarParams, v: f64, theta: f64) -> Vec<Complex64> {
        let lam = params.wavelength_m();
        let phi_r = TAU * params.rx_spacing_m * theta.sin() / lam;
        let phi_azi = TAU * params.tx_spacing_m * theta.sin() / lam;
        let phi_t_v = 2.0 * TAU * v * params.chirp_time_s / lam;
        let phi_t = phi_azi + phi_t_v;
        let mut snapshot = Vec::with_capacity(params.n_tx * params.n_rx);
        for tx in 0..params.n_tx {
            for rx in 0..params.n_rx {
                snapshot.push(Complex64::from_polar(
                    1.0,
                    0.37 + tx as f64 * phi_t + rx as f64 * phi_r,
                ));
            }
        }
        snapshot
    }

    /// Exact Doppler alias of `v` into [-v_max, v_max).
    fn exact_alias(v: f64, v_max: f64) -> f64 {
        v - 2.0 * v_max * ((v + v_max) / (2.0 * v_max)).floor()
    }

    fn detection_for(params: &RadarParams, v: f64, theta: f64) -> Detection {
        let derived = params.derive().unwrap();
        Detection {
            range_bin: 0,
            doppler_bin: 0,
            range_m: 0.0,
            v_det_mps: exact_alias(v, derived.v_max_mps),
            magnitude: 1.0,
            snapshot: analytic_snapshot(params, v, theta),
        }
    }

    #[test]
    fn phi_r_examples() {
        let p = params();
        let broadside = estimate_phi_r(&analytic_snapshot(&p, 0.0, 0.0), &p).unwrap();
        assert!(broadside.abs() < 1e-12);

        let thirty = estimate_phi_r(&analytic_snapshot(&p, 0.0, 30.0_f64.to_radians()), &p)
            .unwrap();
        assert!((thirty - 1.5707963267948963).abs() < 1e-12, "got {thirty}");

        let five = estimate_phi_r(&analytic_snapshot(&p, 10.0, 5.0_f64.to_radians()), &p)
            .unwrap();
        assert!((five - 0.27380784113420475).abs() < 1e-12, "got {five}");
    }

    #[test]
    fn phi_t_examples() {
        let p = params();
        let still = estimate_phi_t(&analytic_snapshot(&p, 0.0, 0.0), &p).unwrap();
        assert!(still.abs() < 1e-12);

        let fast = estimate_phi_t(&analytic_snapshot(&p, 10.0, 0.0), &p).unwrap();
        assert!((fast - 1.3772174891348454).abs() < 1e-12, "got {fast}");

        let angled = estimate_phi_t(&analytic_snapshot(&p, 10.0, 5.0_f64.to_radians()), &p)
            .unwrap();
        assert!((angled - 2.4724488536716644).abs() < 1e-12, "got {angled}");
    }

    #[test]
    fn phi_tv_cancels_the_angle_term() {
        let p = params();
        let got = compute_phi_tv(2.4724488536716644, 0.27380784113420475, &p);
        assert!((got - 1.3772174891348454).abs() < 1e-12, "got {got}");

        // Ratio-1 geometry: identical phases cancel exactly.
        let mut unit = p.clone();
        unit.tx_spacing_m = unit.rx_spacing_m;
        assert_eq!(compute_phi_tv(0.8, 0.8, &unit), 0.0);

        // Static target at any angle: the velocity term is zero.
        for theta_deg in [-60.0_f64, -25.0, 10.0, 45.0] {
            let snapshot = analytic_snapshot(&p, 0.0, theta_deg.to_radians());
            let phi_r = estimate_phi_r(&snapshot, &p).unwrap();
            let phi_t = estimate_phi_t(&snapshot, &p).unwrap();
            // φ_t may wrap for large angles; the unwrapped difference is then
            // a multiple of 2π, which still means zero velocity.
            let phi_t_v = compute_phi_tv(phi_t, phi_r, &p);
            let residual = wrap_phase(phi_t_v);
            assert!(residual.abs() < 1e-9, "θ={theta_deg}: residual {residual}");
        }
    }

    #[test]
    fn phi_det_examples() {
        let d = params().derive().unwrap();
        assert_eq!(compute_phi_det(0.0, &d).unwrap(), 0.0);
        let at_edge = compute_phi_det(d.v_max_mps, &d).unwrap();
        assert_eq!(at_edge, PI);
        let chain = compute_phi_det(-1.4055792871295552, &d).unwrap();
        assert!((chain - (-2.3229460519206144)).abs() < 1e-12, "got {chain}");
        assert!(compute_phi_det(d.v_max_mps * 1.01, &d).is_err());
    }

    #[test]
    fn rotation_count_chain_for_ten_mps() {
        // Full v = 10 m/s chain: v_det = 10 − 6·v_max ≈ −1.40558,
        // φ_t_v ≈ 1.37722, φ_det ≈ −2.32295, n_raw = 3 exactly.
        let p = params();
        assert_eq!(estimate_n(0.0, 0.0, &p), 0.0);
        let n_raw = estimate_n(1.3772174891348454, -2.3229460519206144, &p);
        assert!((n_raw - 3.0).abs() < 1e-9, "got {n_raw}");
        let n_neg = estimate_n(-1.3772174891348454, 2.3229460519206144, &p);
        assert!((n_neg + 3.0).abs() < 1e-9, "got {n_neg}");
    }

    #[test]
    fn disambiguate_recovers_ten_mps() {
        let p = params();
        let result = disambiguate(&detection_for(&p, 10.0, 0.0), &p).unwrap();
        assert_eq!(result.n, 3);
        assert!((result.n_raw - 3.0).abs() < 1e-9);
        assert!((result.v_hat_mps - 10.0).abs() < 1e-9, "v_hat {}", result.v_hat_mps);
        assert!(result.aoa_valid);
        assert!(result.aoa_deg.abs() < 1e-9);
        assert!(result.phase_coherence > 1.0 - 1e-12);
    }

    #[test]
    fn slow_targets_need_no_correction() {
        let p = params();
        for &v in &[-1.8, -0.4, 0.0, 0.9, 1.7] {
            let result = disambiguate(&detection_for(&p, v, 0.2), &p).unwrap();
            assert_eq!(result.n, 0, "v = {v}");
            assert_eq!(result.v_det_mps, result.v_hat_mps);
        }
    }

    #[test]
    fn zero_velocity_at_any_angle_gives_no_correction() {
        // For |θ| small enough that φ_t does not wrap (|4π·sin θ| ≤ π with
        // d_t = 2λ, i.e. |θ| ≲ 14.5°), n is literally zero. Beyond that the
        // measured φ_t wraps and n picks up a multiple of N_TX, which the
        // span wrap cancels: v_hat stays exactly v_det either way.
        let p = params();
        for theta_deg in [-10.0_f64, 0.0, 10.0] {
            let result =
                disambiguate(&detection_for(&p, 0.0, theta_deg.to_radians()), &p).unwrap();
            assert_eq!(result.n, 0, "θ = {theta_deg}");
            assert_eq!(result.v_hat_mps, result.v_det_mps);
        }
        for theta_deg in [-60.0_f64, -30.0, 30.0, 60.0] {
            let result =
                disambiguate(&detection_for(&p, 0.0, theta_deg.to_radians()), &p).unwrap();
            assert_eq!(
                result.n.rem_euclid(p.n_tx as i64),
                0,
                "θ = {theta_deg}: n = {} must be a multiple of N_TX",
                result.n
            );
            assert!(
                (result.v_hat_mps - result.v_det_mps).abs() < 1e-9,
                "θ = {theta_deg}: v_hat {} vs v_det {}",
                result.v_hat_mps,
                result.v_det_mps
            );
        }
    }

    #[test]
    fn n_raw_is_integral_across_the_span_and_angles() {
        // Analytic snapshots, exact aliases: n_raw must be an integer to
        // 1e-6 for velocities covering the extended span at every angle.
        let p = params();
        let e_max = p.derive().unwrap().extended_v_max_mps;
        for theta_deg in (-60..=60).step_by(15) {
            let theta = (theta_deg as f64).to_radians();
            for i in 0..48 {
                let v = -e_max + (i as f64 + 0.5) * (2.0 * e_max / 48.0);
                let result = disambiguate(&detection_for(&p, v, theta), &p).unwrap();
                let nearest = result.n_raw.round();
                assert!(
                    (result.n_raw - nearest).abs() < 1e-6,
                    "v={v}, θ={theta_deg}: n_raw {} not integral",
                    result.n_raw
                );
                assert!(
                    (result.v_hat_mps - v).abs() < 1e-6,
                    "v={v}, θ={theta_deg}: v_hat {}",
                    result.v_hat_mps
                );
            }
        }
    }

    #[test]
    fn wrapped_tx_phase_still_recovers_the_velocity() {
        // v = 20 m/s at θ = 50°: the physical φ_t exceeds π and wraps. The
        // unwrapped φ_t_v then shifts n_raw by a multiple of N_TX, and the
        // final span wrap cancels it.
        let p = params();
        let result = disambiguate(&detection_for(&p, 20.0, 50.0_f64.to_radians()), &p).unwrap();
        assert!((result.v_hat_mps - 20.0).abs() < 1e-9, "v_hat {}", result.v_hat_mps);
    }

    #[test]
    fn adding_a_turn_to_phi_t_shifts_n_raw_by_n_tx() {
        let p = params();
        let d = p.derive().unwrap();
        let phi_r = 0.3;
        let phi_t = 0.9;
        let v_det = 0.7;
        let phi_det = compute_phi_det(v_det, &d).unwrap();
        let n_base = estimate_n(compute_phi_tv(phi_t, phi_r, &p), phi_det, &p);
        let n_shift = estimate_n(compute_phi_tv(phi_t + TAU, phi_r, &p), phi_det, &p);
        assert!((n_shift - n_base - p.n_tx as f64).abs() < 1e-9);

        // The shifted rotation count moves v_hat by the full extended span,
        // which the wrap removes.
        let v_base = wrap_to_extended(
            v_det + 2.0 * n_base.round() * d.v_max_mps,
            d.extended_v_max_mps,
        );
        let v_shift = wrap_to_extended(
            v_det + 2.0 * n_shift.round() * d.v_max_mps,
            d.extended_v_max_mps,
        );
        assert!((v_base - v_shift).abs() < 1e-9);
    }

    #[test]
    fn aoa_roundtrip_within_half_degree() {
        let p = params();
        for theta_deg in (-60..=60).step_by(10) {
            let result = disambiguate(
                &detection_for(&p, 5.0, (theta_deg as f64).to_radians()),
                &p,
            )
            .unwrap();
            assert!(result.aoa_valid);
            assert!(
                (result.aoa_deg - theta_deg as f64).abs() < 0.5,
                "θ = {theta_deg}: aoa {}",
                result.aoa_deg
            );
        }
    }

    #[test]
    fn impossible_rx_phase_flags_aoa_invalid() {
        // With d_r = λ/4 the physical |φ_r| never exceeds π/2; force a larger
        // one and the angle readout must flag itself invalid while the
        // velocity path still runs.
        let p = RadarParams::from_spacing_ratios(77e9, 750e6, 42.67e-6, 256, 64, 12, 8, 0.25, 2.0);
        let mut snapshot = Vec::new();
        for tx in 0..p.n_tx {
            for rx in 0..p.n_rx {
                snapshot.push(Complex64::from_polar(1.0, 2.0 * rx as f64 + 0.1 * tx as f64));
            }
        }
        let detection = Detection {
            range_bin: 0,
            doppler_bin: 0,
            range_m: 0.0,
            v_det_mps: 0.0,
            magnitude: 1.0,
            snapshot,
        };
        let result = disambiguate(&detection, &p).unwrap();
        assert!(!result.aoa_valid);
        assert!(result.aoa_deg.is_nan());
        assert!(result.v_hat_mps.is_finite());
    }

    #[test]
    fn estimators_reject_degenerate_arrays() {
        let single_rx = RadarParams::from_spacing_ratios(77e9, 750e6, 42.67e-6, 8, 4, 2, 1, 0.5, 2.0);
        let snapshot = analytic_snapshot(&single_rx, 0.0, 0.0);
        assert!(estimate_phi_r(&snapshot, &single_rx).is_err());

        let single_tx = RadarParams::from_spacing_ratios(77e9, 750e6, 42.67e-6, 8, 4, 1, 4, 0.5, 2.0);
        let snapshot = analytic_snapshot(&single_tx, 0.0, 0.0);
        assert!(estimate_phi_t(&snapshot, &single_tx).is_err());
    }

    #[test]
    fn hpc_agrees_on_the_ten_mps_chain() {
        let p = params();
        let detection = detection_for(&p, 10.0, 0.0);
        let hpc = hpc_baseline(&detection, &p).unwrap();
        assert_eq!(hpc.n_star, 3);
        assert!((hpc.v_star_mps - 10.0).abs() < 1e-9);
        assert_eq!(hpc.peaks.len(), 13);

        let slow = detection_for(&p, 1.2, 0.3);
        assert_eq!(hpc_baseline(&slow, &p).unwrap().n_star, 0);
    }

    #[test]
    fn hpc_matches_disambiguate_on_random_scenes() {
        let p = params();
        let e_max = p.derive().unwrap().extended_v_max_mps;
        let mut state = 0x1234_5678_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for trial in 0..100 {
            let v = (next() * 2.0 - 1.0) * 0.95 * e_max;
            let theta = (next() * 2.0 - 1.0) * 60.0_f64.to_radians();
            let detection = detection_for(&p, v, theta);
            let pd = disambiguate(&detection, &p).unwrap();
            let hpc = hpc_baseline(&detection, &p).unwrap();
            let delta = (pd.n - hpc.n_star).rem_euclid(p.n_tx as i64);
            assert_eq!(
                delta, 0,
                "trial {trial}: v={v:.3}, θ={:.1}°: n={} vs n*={}",
                theta.to_degrees(),
                pd.n,
                hpc.n_star
            );
        }
    }

    #[test]
    fn two_targets_in_one_cell_lower_the_coherence() {
        let p = params();
        let mut snapshot = analytic_snapshot(&p, 10.0, 0.1);
        let other = analytic_snapshot(&p, -4.0, -0.3);
        for (a, b) in snapshot.iter_mut().zip(other) {
            *a += b;
        }
        let detection = Detection {
            range_bin: 0,
            doppler_bin: 0,
            range_m: 0.0,
            v_det_mps: 0.0,
            magnitude: 1.0,
            snapshot,
        };
        let result = disambiguate(&detection, &p).unwrap();
        assert!(
            result.phase_coherence < 0.99,
            "corrupted snapshot should read as incoherent, got {}",
            result.phase_coherence
        );
    }

    #[test]
    fn wrap_helpers() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(0.5) - 0.5).abs() < 1e-15);

        let e = 22.81115857425911;
        assert_eq!(wrap_to_extended(e, e), e);
        assert!((wrap_to_extended(-e, e) - e).abs() < 1e-12);
        assert!((wrap_to_extended(e + 2.0 * e, e) - e).abs() < 1e-9);
        for &v in &[-20.0, -3.3, 0.0, 7.7, 22.0] {
            assert!((wrap_to_extended(v + 4.0 * e, e) - v).abs() < 1e-9);
            assert!((wrap_to_extended(v, e) - v).abs() < 1e-12);
        }
    }
}
