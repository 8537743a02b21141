//! Counter-based random numbers for reproducible simulation.
//!
//! Every draw is addressed by `(seed, index)` instead of consuming a
//! sequential stream, so a cube synthesized in parallel is bit-identical to
//! one synthesized serially, and sweep points can derive independent seeds
//! from `(base_seed, point_index)` regardless of worker count.
//!
//! The generator is the splitmix64 finalizer applied to a seed/index blend;
//! complex Gaussians come from a Box-Muller transform of two such draws.

use num_complex::Complex64;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// splitmix64 avalanche step.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from `(seed, index)`.
///
/// Used for per-sample noise addressing and for per-point sweep seeds.
#[inline]
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_mul(GOLDEN).wrapping_add(GOLDEN)))
}

/// Map a u64 to the open-closed interval (0, 1].
#[inline]
fn to_unit(x: u64) -> f64 {
    ((x >> 11) as f64 + 1.0) * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw in [0, 1) addressed by `(seed, index)`.
#[inline]
pub fn uniform(seed: u64, index: u64) -> f64 {
    (mix_seed(seed, index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Circularly-symmetric complex Gaussian with unit variance (E|z|² = 1),
/// addressed by `(seed, index)`.
#[inline]
pub fn complex_gaussian(seed: u64, index: u64) -> Complex64 {
    let base = mix_seed(seed, index);
    let u1 = to_unit(mix64(base ^ 0xa076_1d64_78bd_642f));
    let u2 = to_unit(mix64(base ^ 0xe703_7ed1_a0b4_28db));
    // |z|² = -ln(u1) is Exp(1), so E|z|² = 1.
    let radius = (-u1.ln()).sqrt();
    let (sin, cos) = (std::f64::consts::TAU * u2).sin_cos();
    Complex64::new(radius * cos, radius * sin)
}
