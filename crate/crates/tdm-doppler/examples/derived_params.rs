//! Waveform math: derived quantities and Doppler bin mappings.
//!
//! ```bash
//! cargo run --release -p tdm-doppler --example derived_params
//! ```

use tdm_doppler::prelude::*;

fn main() {
    let params = RadarParams::automotive_77ghz();
    let derived = params.derive().unwrap();

    println!("77 GHz TDM-MIMO preset ({} TX x {} RX)", params.n_tx, params.n_rx);
    println!("  wavelength            {:>12.4} mm", derived.wavelength_m * 1e3);
    println!("  range resolution      {:>12.4} m", derived.range_resolution_m);
    println!("  sample rate           {:>12.4} MHz", derived.sample_rate_hz / 1e6);
    println!("  chirp slope           {:>12.4} MHz/us", derived.chirp_slope_hz_per_s / 1e12);
    println!("  v_max (per TX)        {:>12.4} m/s", derived.v_max_mps);
    println!("  extended v_max        {:>12.4} m/s", derived.extended_v_max_mps);
    println!("  doppler resolution    {:>12.4} m/s", derived.doppler_resolution_mps);
    println!();

    println!("TDM slows the effective chirp rate by N_TX = {}:", params.n_tx);
    println!(
        "  a target at 10 m/s aliases {} times before the extended span runs out",
        ((10.0 + derived.v_max_mps) / (2.0 * derived.v_max_mps)).floor()
    );
    println!();

    println!("FFT-shifted Doppler axis (bin -> velocity):");
    for bin in [0, 16, 32, 33, 48, 63] {
        println!(
            "  bin {bin:>2} -> {:>8.4} m/s",
            derived.doppler_bin_to_velocity(bin).unwrap()
        );
    }

    println!();
    println!("Chirp start times under the TDM schedule:");
    for (tx, chirp) in [(0, 0), (1, 0), (11, 0), (0, 1)] {
        println!(
            "  tx {tx:>2}, chirp {chirp} -> {:>9.2} us",
            tdm_chirp_start(tx, chirp, &params).unwrap() * 1e6
        );
    }

    // Validation is report-based: every violation at once.
    let mut broken = params;
    broken.rx_spacing_m *= 3.0;
    broken.n_chirps = 0;
    println!();
    println!("Validation report for a deliberately broken config:");
    for violation in broken.validate().violations {
        println!("  {}: {}", violation.field, violation.message);
    }
}
