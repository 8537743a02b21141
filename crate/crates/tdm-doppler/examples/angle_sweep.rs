//! Sweep target angle at fixed ground speed; the angle contribution to the
//! TX phase must cancel for the radial velocity to come out right at every
//! bearing. Writes outputs under `target/example-output/angle_sweep/`.
//!
//! ```bash
//! cargo run --release -p tdm-doppler --example angle_sweep
//! ```

use tdm_doppler::prelude::*;

fn main() {
    let params = RadarParams::automotive_77ghz();
    let derived = params.derive().unwrap();
    let base = Scenario::noise_free(params, Vec::new(), 1);
    let speed = 10.0;

    println!("sweeping θ from -80° to 80° at {speed} m/s ground speed, noise-free");
    println!("radial truth is speed·cos θ; success measured against it");
    let result = run_angle_sweep(&base, -80.0, 80.0, 1.0, speed, 0).unwrap();

    println!(
        "{} angles: {} recovered within {:.3} m/s, max error {:.4} m/s",
        result.rows.len(),
        result.success_count,
        result.tolerance_mps,
        result.max_abs_err_mps
    );

    println!();
    println!("{:>7} {:>9} {:>9} {:>4} {:>9} {:>8}", "θ (°)", "radial", "v_det", "n", "v_hat", "aoa (°)");
    for row in result.rows.iter().step_by(20) {
        println!(
            "{:>7.0} {:>9.4} {:>9.4} {:>4} {:>9.4} {:>8.2}",
            row.independent, row.truth_v_mps, row.v_det_mps, row.n, row.v_hat_mps, row.aoa_deg
        );
    }

    let out_dir = std::path::Path::new("target/example-output/angle_sweep");
    std::fs::create_dir_all(out_dir).unwrap();
    let written = emit_outputs(&result, SweepKind::Angle, &derived, out_dir).unwrap();
    println!();
    for path in written {
        println!("wrote {}", path.display());
    }
}
