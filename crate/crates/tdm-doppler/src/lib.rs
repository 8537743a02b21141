//! TDM-MIMO FMCW radar simulation and phase-difference Doppler
//! disambiguation.
//!
//! Time-division multiplexing buys a MIMO radar its virtual aperture by
//! firing transmitters one at a time, but stretches the effective chirp
//! repetition interval to `N_TX·T_c` and shrinks the unambiguous velocity to
//! `±λ/(4·N_TX·T_c)`. This crate simulates that radar end to end and
//! recovers the full single-transmitter velocity span from the phase
//! differences already present in the virtual array — no waveform changes,
//! no overlapping elements, no hypothesis search (though a
//! hypothesis-compensation baseline is included as a cross-check).
//!
//! ## Pipeline
//!
//! ```text
//! RadarParams ──► synthesize_cube ──► DataCube [tx][chirp][rx][sample]
//!                                        │
//!                                        ▼
//!                        range_doppler_process (2D FFT per TX-RX pair)
//!                                        │
//!                                        ▼
//!                        detect_peaks (strongest-k / CA-CFAR)
//!                                        │
//!                                        ▼
//!                 disambiguate: φ_r, φ_t ──► φ_t_v ──► n ──► v_hat
//! ```
//!
//! ## Example
//!
//! ```rust
//! use tdm_doppler::prelude::*;
//!
//! let params = RadarParams::automotive_77ghz();
//! let derived = params.derive().unwrap();
//!
//! // A target receding at 10 m/s: more than 5x the ambiguous span.
//! assert!(10.0 > 5.0 * derived.v_max_mps);
//! let cube = synthesize_cube(&params, &[Target::noise_free(10.0, 10.0, 0.0)], 7).unwrap();
//! let maps = range_doppler_process(&cube, Window::Hann).unwrap();
//! let detections = detect_peaks(&maps, DetectionMethod::StrongestK { k: 1 }).unwrap();
//! let result = disambiguate(&detections[0], &params).unwrap();
//!
//! assert_eq!(result.n, 3);
//! assert!((result.v_hat_mps - 10.0).abs() < 0.1);
//! ```
//!
//! ## Runnable examples
//!
//! One per capability, under `examples/`:
//!
//! - **`derived_params`** — waveform math: spans, resolutions, bin mappings
//! - **`synthesize_cube`** — build a scene, write a cube file
//! - **`range_doppler_map`** — 2D FFT, peak bins, snapshot phases
//! - **`cfar_detection`** — strongest-k vs CA-CFAR on a noisy scene
//! - **`disambiguate_velocity`** — the full phase chain, step by step
//! - **`velocity_sweep`** — recovery across the extended span (CSV + SVG)
//! - **`angle_sweep`** — recovery vs angle of arrival (CSV + SVG)
//! - **`oracle_comparison`** — phase-difference vs hypothesis compensation
//!
//! ```bash
//! cargo run --release -p tdm-doppler --example disambiguate_velocity
//! cargo run --release -p tdm-doppler --example velocity_sweep
//! ```
//!
//! The `tdm-doppler` binary exposes the same machinery as subcommands
//! (`synth`, `process`, `sweep-velocity`, `sweep-angle`, `compare-oracle`).

pub mod config;
pub mod disambiguation;
pub mod error;
pub mod harness;
pub mod io;
pub mod noise;
pub mod output;
pub mod processing;
pub mod scene;
pub mod window;

/// The items most programs need.
pub mod prelude {
    pub use crate::config::{load_config, parse_config_str, DerivedParams, RadarParams};
    pub use crate::disambiguation::{
        compute_phi_det, compute_phi_tv, disambiguate, estimate_n, estimate_phi_r,
        estimate_phi_t, hpc_baseline, DisambiguationResult, HpcBaseline, PhaseEstimates,
    };
    pub use crate::error::{Error, Result};
    pub use crate::harness::{
        compare_oracle, run_angle_sweep, run_scenario, run_velocity_sweep, OracleReport,
        PointStatus, Scenario, SweepResult, SweepRow,
    };
    pub use crate::io::{read_cube, write_cube, write_maps};
    pub use crate::output::{emit_outputs, SweepKind};
    pub use crate::processing::{
        detect_peaks, extract_snapshot, range_doppler_process, CfarParams, Detection,
        DetectionMethod, RangeDopplerMaps,
    };
    pub use crate::scene::{synthesize_cube, tdm_chirp_start, DataCube, Target};
    pub use crate::window::Window;
}

pub use prelude::*;
