//! Waveform and array parameters plus every quantity derived from them.
//!
//! [`RadarParams`] is the single source of truth for the chirp waveform and
//! the TDM-MIMO antenna geometry. [`DerivedParams`] carries the quantities
//! the rest of the pipeline consumes (wavelength, velocity spans, bin
//! resolutions). Validation is report-based: [`RadarParams::validate`]
//! returns the full list of violations instead of stopping at the first.
//!
//! Velocity span conventions:
//!
//! - `v_max` is the per-TX unambiguous radial velocity `λ / (4·N_TX·T_c)`.
//!   The Doppler FFT can only place a target inside `[-v_max, v_max)`.
//! - `extended_v_max = N_TX · v_max = λ / (4·T_c)` is the single-transmitter
//!   span that phase-difference disambiguation recovers.
//!
//! The Doppler axis is FFT-shifted everywhere in this crate: bin
//! `n_chirps / 2` maps to 0 m/s and bin 0 maps to `-v_max`.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Tolerance for "d_t/d_r is an integer" and similar ratio checks.
const RATIO_TOL: f64 = 1e-9;

/// Waveform and antenna-array configuration.
///
/// Distances are in meters, times in seconds, frequencies in Hz. TX and RX
/// arrays are uniform and linear; `rx_spacing_m` and `tx_spacing_m` are the
/// adjacent-element spacings.
#[derive(Debug, Clone, PartialEq)]
pub struct RadarParams {
    pub carrier_frequency_hz: f64,
    pub bandwidth_hz: f64,
    pub chirp_time_s: f64,
    pub n_samples: usize,
    pub n_chirps: usize,
    pub n_tx: usize,
    pub n_rx: usize,
    pub rx_spacing_m: f64,
    pub tx_spacing_m: f64,
    pub speed_of_light: f64,
}

impl RadarParams {
    /// Build params with antenna spacings given as multiples of the
    /// wavelength (the usual way array geometry is specified).
    #[allow(clippy::too_many_arguments)]
    pub fn from_spacing_ratios(
        carrier_frequency_hz: f64,
        bandwidth_hz: f64,
        chirp_time_s: f64,
        n_samples: usize,
        n_chirps: usize,
        n_tx: usize,
        n_rx: usize,
        d_r_over_lambda: f64,
        d_t_over_lambda: f64,
    ) -> Self {
        let wavelength = SPEED_OF_LIGHT / carrier_frequency_hz;
        Self {
            carrier_frequency_hz,
            bandwidth_hz,
            chirp_time_s,
            n_samples,
            n_chirps,
            n_tx,
            n_rx,
            rx_spacing_m: d_r_over_lambda * wavelength,
            tx_spacing_m: d_t_over_lambda * wavelength,
            speed_of_light: SPEED_OF_LIGHT,
        }
    }

    /// 77 GHz automotive preset: 750 MHz sweep, 42.67 µs chirps, 256 ADC
    /// samples, 64 chirps per TX, 12 TX / 8 RX with d_r = λ/2 and d_t = 2λ.
    pub fn automotive_77ghz() -> Self {
        Self::from_spacing_ratios(77.0e9, 750.0e6, 42.67e-6, 256, 64, 12, 8, 0.5, 2.0)
    }

    /// Carrier wavelength λ = c / f_c (m).
    pub fn wavelength_m(&self) -> f64 {
        self.speed_of_light / self.carrier_frequency_hz
    }

    /// `d_t / d_r` rounded to the nearest integer.
    ///
    /// Validation guarantees the exact ratio is within [`RATIO_TOL`] of this
    /// integer; the disambiguation math relies on it being exact.
    pub fn spacing_ratio(&self) -> f64 {
        (self.tx_spacing_m / self.rx_spacing_m).round()
    }

    /// Check every invariant and return the full list of violations.
    ///
    /// An empty report means the parameters are valid. The report is the
    /// error channel: nothing here panics or short-circuits.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let counts: [(&str, usize); 4] = [
            ("n_samples", self.n_samples),
            ("n_chirps", self.n_chirps),
            ("n_tx", self.n_tx),
            ("n_rx", self.n_rx),
        ];
        for (field, value) in counts {
            if value < 1 {
                report.push(field, format!("count must be >= 1, got {value}"));
            }
        }
        let scalars: [(&str, f64); 6] = [
            ("carrier_frequency_hz", self.carrier_frequency_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("chirp_time_s", self.chirp_time_s),
            ("rx_spacing_m", self.rx_spacing_m),
            ("tx_spacing_m", self.tx_spacing_m),
            ("speed_of_light", self.speed_of_light),
        ];
        let mut scalars_ok = true;
        for (field, value) in scalars {
            if !(value.is_finite() && value > 0.0) {
                report.push(field, format!("must be finite and > 0, got {value}"));
                scalars_ok = false;
            }
        }
        if scalars_ok {
            // Geometry checks only make sense once the scalars are sane.
            let half_lambda = self.wavelength_m() / 2.0;
            if self.rx_spacing_m > half_lambda * (1.0 + RATIO_TOL) {
                report.push(
                    "rx_spacing_m",
                    format!(
                        "d_r ≤ λ/2 required so the RX phase never wraps \
                         (d_r = {:.6e} m, λ/2 = {:.6e} m)",
                        self.rx_spacing_m, half_lambda
                    ),
                );
            }
            let ratio = self.tx_spacing_m / self.rx_spacing_m;
            if ratio < 1.0 - RATIO_TOL || (ratio - ratio.round()).abs() > RATIO_TOL * ratio {
                report.push(
                    "tx_spacing_m",
                    format!("d_t/d_r integer required for wrap invariance, got {ratio:.9}"),
                );
            }
        }
        report
    }

    /// Compute all derived quantities. Invalid parameters are rejected with
    /// the full validation report.
    pub fn derive(&self) -> Result<DerivedParams> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(Error::InvalidParams(report));
        }
        let wavelength_m = self.wavelength_m();
        let v_max_mps = wavelength_m / (4.0 * self.n_tx as f64 * self.chirp_time_s);
        Ok(DerivedParams {
            wavelength_m,
            v_max_mps,
            extended_v_max_mps: self.n_tx as f64 * v_max_mps,
            range_resolution_m: self.speed_of_light / (2.0 * self.bandwidth_hz),
            doppler_resolution_mps: 2.0 * v_max_mps / self.n_chirps as f64,
            sample_rate_hz: self.n_samples as f64 / self.chirp_time_s,
            chirp_slope_hz_per_s: self.bandwidth_hz / self.chirp_time_s,
            n_chirps: self.n_chirps,
            n_tx: self.n_tx,
        })
    }
}

/// Quantities derived from [`RadarParams`], consumed throughout the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedParams {
    /// Carrier wavelength λ (m).
    pub wavelength_m: f64,
    /// Maximum unambiguous radial velocity under TDM, λ/(4·N_TX·T_c) (m/s).
    pub v_max_mps: f64,
    /// Single-TX-equivalent span N_TX·v_max = λ/(4·T_c) (m/s).
    pub extended_v_max_mps: f64,
    /// Range bin width c/(2·B) (m).
    pub range_resolution_m: f64,
    /// Doppler bin width 2·v_max/n_chirps (m/s).
    pub doppler_resolution_mps: f64,
    /// ADC rate n_samples/T_c (Hz).
    pub sample_rate_hz: f64,
    /// Chirp slope B/T_c (Hz/s).
    pub chirp_slope_hz_per_s: f64,
    /// Copied from the params so bin mappings are self-contained.
    pub n_chirps: usize,
    /// Copied from the params; the disambiguation math needs N_TX.
    pub n_tx: usize,
}

impl DerivedParams {
    /// Map an FFT-shifted Doppler bin to radial velocity (m/s).
    ///
    /// Bin `n_chirps / 2` is 0 m/s; bin 0 is `-v_max`. Velocities step by
    /// `doppler_resolution_mps` and cover `[-v_max, v_max)`.
    pub fn doppler_bin_to_velocity(&self, bin: usize) -> Result<f64> {
        if bin >= self.n_chirps {
            return Err(Error::IndexOutOfRange(format!(
                "doppler bin {bin} out of range (n_chirps = {})",
                self.n_chirps
            )));
        }
        let center = (self.n_chirps / 2) as f64;
        Ok((bin as f64 - center) * self.doppler_resolution_mps)
    }
}

/// One violated invariant: the offending field plus a human-readable reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

/// Result of [`RadarParams::validate`]: empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, field: &'static str, message: String) {
        self.violations.push(Violation { field, message });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{}: {}", v.field, v.message))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

// ---------------------------------------------------------------------------
// Config file parsing
// ---------------------------------------------------------------------------

const REQUIRED_KEYS: &[&str] = &[
    "carrier_frequency_hz",
    "bandwidth_hz",
    "chirp_time_s",
    "n_samples",
    "n_chirps",
    "n_tx",
    "n_rx",
];
const OPTIONAL_KEYS: &[&str] = &["d_r_over_lambda", "d_t_over_lambda"];

/// Parse a flat `key = value` config file.
///
/// Blank lines and `#` comments are ignored. Unknown keys and duplicate keys
/// are hard errors so a typo cannot silently fall back to a default.
/// `d_r_over_lambda` defaults to 0.5 and `d_t_over_lambda` to 2.0 when
/// omitted; everything else is required.
pub fn parse_config_str(text: &str) -> Result<RadarParams> {
    let mut seen: HashSet<String> = HashSet::new();
    let mut carrier = None;
    let mut bandwidth = None;
    let mut chirp_time = None;
    let mut n_samples = None;
    let mut n_chirps = None;
    let mut n_tx = None;
    let mut n_rx = None;
    let mut d_r_ratio = 0.5_f64;
    let mut d_t_ratio = 2.0_f64;

    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        if !REQUIRED_KEYS.contains(&key) && !OPTIONAL_KEYS.contains(&key) {
            return Err(Error::Config(format!(
                "line {}: unknown key `{key}`",
                lineno + 1
            )));
        }
        if !seen.insert(key.to_string()) {
            return Err(Error::Config(format!(
                "line {}: duplicate key `{key}`",
                lineno + 1
            )));
        }
        let parse_f64 = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("line {}: bad number `{v}`", lineno + 1)))
        };
        let parse_usize = |v: &str| -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| Error::Config(format!("line {}: bad count `{v}`", lineno + 1)))
        };
        match key {
            "carrier_frequency_hz" => carrier = Some(parse_f64(value)?),
            "bandwidth_hz" => bandwidth = Some(parse_f64(value)?),
            "chirp_time_s" => chirp_time = Some(parse_f64(value)?),
            "n_samples" => n_samples = Some(parse_usize(value)?),
            "n_chirps" => n_chirps = Some(parse_usize(value)?),
            "n_tx" => n_tx = Some(parse_usize(value)?),
            "n_rx" => n_rx = Some(parse_usize(value)?),
            "d_r_over_lambda" => d_r_ratio = parse_f64(value)?,
            "d_t_over_lambda" => d_t_ratio = parse_f64(value)?,
            _ => unreachable!(),
        }
    }

    let missing: Vec<&str> = REQUIRED_KEYS
        .iter()
        .copied()
        .filter(|k| !seen.contains(*k))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Config(format!(
            "missing required keys: {}",
            missing.join(", ")
        )));
    }

    Ok(RadarParams::from_spacing_ratios(
        carrier.unwrap(),
        bandwidth.unwrap(),
        chirp_time.unwrap(),
        n_samples.unwrap(),
        n_chirps.unwrap(),
        n_tx.unwrap(),
        n_rx.unwrap(),
        d_r_ratio,
        d_t_ratio,
    ))
}

/// Read and parse a config file from disk.
pub fn load_config(path: impl AsRef<Path>) -> Result<RadarParams> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automotive_preset_is_valid() {
        let params = RadarParams::automotive_77ghz();
        let report = params.validate();
        assert!(report.is_valid(), "unexpected violations: {report}");
    }

    #[test]
    fn derived_values_match_direct_evaluation() {
        // Frozen from straight-line evaluation of λ = c/f, v = λ/(4·N·T_c),
        // ΔR = c/(2B), Δv = 2·v_max/n_chirps, fs = n/T_c, slope = B/T_c.
        let d = RadarParams::automotive_77ghz().derive().unwrap();
        assert!((d.wavelength_m - 0.0038934085454545454).abs() < 1e-18);
        assert!((d.v_max_mps - 1.9009298811882591).abs() < 1e-12);
        assert!((d.extended_v_max_mps - 22.81115857425911).abs() < 1e-11);
        assert!((d.range_resolution_m - 0.19986163866666667).abs() < 1e-12);
        assert!((d.doppler_resolution_mps - 0.0594040587871331).abs() < 1e-14);
        assert!((d.sample_rate_hz - 5999531.286618233).abs() < 1e-6);
        assert!((d.chirp_slope_hz_per_s - 17576751816264.354).abs() < 1.0);
    }

    #[test]
    fn v_max_matches_table_value() {
        // 77 GHz, 42.67 µs, 12 TX rounds to the published 1.9 m/s.
        let d = RadarParams::automotive_77ghz().derive().unwrap();
        assert!(
            (d.v_max_mps - 1.904).abs() < 0.005,
            "v_max = {} not within 0.005 of 1.904",
            d.v_max_mps
        );
    }

    #[test]
    fn single_tx_recovers_extended_span() {
        let mut params = RadarParams::automotive_77ghz();
        let extended = params.derive().unwrap().extended_v_max_mps;
        params.n_tx = 1;
        let d1 = params.derive().unwrap();
        assert!((d1.v_max_mps - extended).abs() < 1e-12);
        assert!((d1.v_max_mps - 22.81115857425911).abs() < 1e-11);
    }

    #[test]
    fn doubling_chirp_time_halves_v_max() {
        let mut params = RadarParams::automotive_77ghz();
        let v1 = params.derive().unwrap().v_max_mps;
        params.chirp_time_s *= 2.0;
        let v2 = params.derive().unwrap().v_max_mps;
        assert!((v1 / v2 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rx_spacing_above_half_lambda_is_reported() {
        let mut params = RadarParams::automotive_77ghz();
        params.rx_spacing_m = params.wavelength_m();
        let report = params.validate();
        assert!(!report.is_valid());
        assert!(
            report.to_string().contains("d_r ≤ λ/2"),
            "report should name the d_r ≤ λ/2 invariant: {report}"
        );
    }

    #[test]
    fn non_integer_spacing_ratio_is_reported() {
        let mut params = RadarParams::automotive_77ghz();
        params.tx_spacing_m = 1.5 * params.rx_spacing_m;
        let report = params.validate();
        assert!(!report.is_valid());
        assert!(
            report.to_string().contains("d_t/d_r integer"),
            "report should name the integer-ratio invariant: {report}"
        );
    }

    #[test]
    fn zero_count_is_reported() {
        let mut params = RadarParams::automotive_77ghz();
        params.n_chirps = 0;
        assert!(!params.validate().is_valid());
        assert!(params.derive().is_err());
    }

    #[test]
    fn doppler_bin_mapping() {
        let d = RadarParams::automotive_77ghz().derive().unwrap();
        assert_eq!(d.doppler_bin_to_velocity(32).unwrap(), 0.0);
        let step = d.doppler_bin_to_velocity(33).unwrap();
        assert!((step - 0.0594040587871331).abs() < 1e-14);
        let edge = d.doppler_bin_to_velocity(0).unwrap();
        assert!((edge + d.v_max_mps).abs() < 1e-12);
        assert!(d.doppler_bin_to_velocity(64).is_err());
    }

    #[test]
    fn doppler_bin_mapping_is_affine_over_the_grid() {
        let d = RadarParams::automotive_77ghz().derive().unwrap();
        let step = d.doppler_resolution_mps;
        for bin in 1..d.n_chirps {
            let lo = d.doppler_bin_to_velocity(bin - 1).unwrap();
            let hi = d.doppler_bin_to_velocity(bin).unwrap();
            assert!((hi - lo - step).abs() < 1e-12, "non-uniform step at {bin}");
        }
    }

    #[test]
    fn eq1_identity_for_random_valid_params() {
        // v_max · 4 · N_TX · T_c / λ = 1 to 1e-12 relative, for a spread of
        // parameter draws from a small deterministic generator.
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let carrier = 1.0e9 + next() * 100.0e9;
            let chirp = 1.0e-6 + next() * 100.0e-6;
            let n_tx = 1 + (next() * 16.0) as usize;
            let params = RadarParams::from_spacing_ratios(
                carrier,
                100.0e6 + next() * 1.0e9,
                chirp,
                64,
                32,
                n_tx,
                4,
                0.5,
                (1 + (next() * 8.0) as usize) as f64 * 0.5,
            );
            let d = params.derive().unwrap();
            let identity =
                d.v_max_mps * 4.0 * params.n_tx as f64 * params.chirp_time_s / d.wavelength_m;
            assert!((identity - 1.0).abs() < 1e-12);
            assert_eq!(d.extended_v_max_mps, d.v_max_mps * params.n_tx as f64);
        }
    }

    #[test]
    fn config_roundtrip_and_defaults() {
        let text = "\
# waveform
carrier_frequency_hz = 77e9
bandwidth_hz = 750e6
chirp_time_s = 42.67e-6
n_samples = 256
n_chirps = 64
n_tx = 12
n_rx = 8
";
        let params = parse_config_str(text).unwrap();
        assert_eq!(params, RadarParams::automotive_77ghz());
    }

    #[test]
    fn config_rejects_unknown_key() {
        let err = parse_config_str("carrier_frequency_hz = 77e9\nchirp_tme_s = 1e-6\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("unknown key"), "got: {err}");
        assert!(err.contains("chirp_tme_s"), "got: {err}");
    }

    #[test]
    fn config_rejects_duplicate_and_missing_keys() {
        let dup = parse_config_str("n_tx = 12\nn_tx = 8\n").unwrap_err().to_string();
        assert!(dup.contains("duplicate key"), "got: {dup}");
        let missing = parse_config_str("n_tx = 12\n").unwrap_err().to_string();
        assert!(missing.contains("missing required"), "got: {missing}");
    }
}
