//! Range-FFT / Doppler-FFT per TX-RX pair, peak detection, and snapshot
//! extraction.
//!
//! ```text
//! DataCube [tx][chirp][rx][sample]
//!   │
//!   ├─ windowed FFT over samples (range), per (tx, chirp, rx)
//!   ├─ windowed FFT over chirps (Doppler), per (tx, rx, range bin)
//!   ├─ FFT shift in Doppler (bin n_chirps/2 = 0 m/s)
//!   │
//!   ▼
//! RangeDopplerMaps [tx][rx][doppler][range]
//!   │
//!   ├─ noncoherent integration Σ|·|² over (tx, rx)
//!   ├─ strongest-k or 2D CA-CFAR detection
//!   │
//!   ▼
//! Detection { bins, range, v_det, virtual-array snapshot }
//! ```
//!
//! No Doppler phase compensation is applied across transmitters: the raw
//! per-TX phase progression is exactly what the disambiguation stage needs,
//! so the maps keep it intact.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::config::{DerivedParams, RadarParams};
use crate::error::{Error, Result};
use crate::scene::DataCube;
use crate::window::Window;

/// Complex range-Doppler maps for every TX-RX pair, `[tx][rx][doppler][range]`
/// row-major, Doppler axis FFT-shifted.
#[derive(Debug, Clone)]
pub struct RangeDopplerMaps {
    pub params: RadarParams,
    pub derived: DerivedParams,
    /// Window applied on both FFT axes.
    pub window: Window,
    /// Seed of the source cube, carried for provenance.
    pub seed: u64,
    n_doppler: usize,
    n_range: usize,
    maps: Vec<Complex64>,
}

impl RangeDopplerMaps {
    /// Doppler bin count (= n_chirps).
    pub fn n_doppler(&self) -> usize {
        self.n_doppler
    }

    /// Range bin count (= n_samples).
    pub fn n_range(&self) -> usize {
        self.n_range
    }

    #[inline]
    fn flat_index(&self, tx: usize, rx: usize, doppler: usize, range: usize) -> usize {
        ((tx * self.params.n_rx + rx) * self.n_doppler + doppler) * self.n_range + range
    }

    /// Map value at `[tx][rx][doppler][range]`.
    #[inline]
    pub fn at(&self, tx: usize, rx: usize, doppler: usize, range: usize) -> Complex64 {
        assert!(
            tx < self.params.n_tx
                && rx < self.params.n_rx
                && doppler < self.n_doppler
                && range < self.n_range,
            "map index out of range"
        );
        self.maps[self.flat_index(tx, rx, doppler, range)]
    }

    /// Flat row-major view, `[tx][rx][doppler][range]`.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.maps
    }

    /// Noncoherently integrated power map, `[doppler][range]` row-major:
    /// Σ over (tx, rx) of |map|².
    pub fn integrated_power(&self) -> Vec<f64> {
        let cells = self.n_doppler * self.n_range;
        let mut power = vec![0.0_f64; cells];
        for channel in 0..self.params.n_tx * self.params.n_rx {
            let offset = channel * cells;
            for (cell, value) in power.iter_mut().zip(&self.maps[offset..offset + cells]) {
                *cell += value.norm_sqr();
            }
        }
        power
    }
}

/// A range-Doppler peak with its virtual-array snapshot.
#[derive(Debug, Clone)]
pub struct Detection {
    pub range_bin: usize,
    pub doppler_bin: usize,
    /// Range of the bin center (m).
    pub range_m: f64,
    /// Grid velocity of the Doppler bin, in [-v_max, v_max) (m/s).
    pub v_det_mps: f64,
    /// Noncoherently integrated power at the cell.
    pub magnitude: f64,
    /// Complex virtual-array vector, tx-major: `snapshot[tx·N_RX + rx]`.
    pub snapshot: Vec<Complex64>,
}

/// Peak-picking strategy for [`detect_peaks`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectionMethod {
    /// Take the k strongest cells of the integrated map.
    StrongestK { k: usize },
    /// 2D cell-averaging CFAR on the integrated map.
    CaCfar(CfarParams),
}

/// CA-CFAR configuration. `guard_cells` and `training_cells` are per side,
/// per axis; the threshold is `threshold_factor` times the mean power of the
/// training ring. The ring wraps around both axes (the Doppler axis is
/// physically circular; wrapping the range axis keeps every cell testable).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfarParams {
    pub guard_cells: usize,
    pub training_cells: usize,
    pub threshold_factor: f64,
}

impl Default for CfarParams {
    fn default() -> Self {
        Self {
            guard_cells: 4,
            training_cells: 8,
            threshold_factor: 10.0,
        }
    }
}

/// 2D-FFT the cube into per-pair range-Doppler maps.
///
/// The same window is applied on both axes (Hann by default at call sites).
/// The Doppler axis is FFT-shifted so bin `n_chirps/2` is zero velocity.
pub fn range_doppler_process(cube: &DataCube, window: Window) -> Result<RangeDopplerMaps> {
    let params = cube.params.clone();
    let derived = params.derive()?;
    let n_samples = params.n_samples;
    let n_chirps = params.n_chirps;
    let expected = params.n_tx * n_chirps * params.n_rx * n_samples;
    if cube.samples().len() != expected {
        return Err(Error::DimensionMismatch(format!(
            "cube has {} samples, params imply {expected}",
            cube.samples().len()
        )));
    }

    let mut planner = FftPlanner::<f64>::new();
    let range_fft = planner.plan_fft_forward(n_samples);
    let doppler_fft = planner.plan_fft_forward(n_chirps);
    let mut scratch =
        vec![
            Complex64::new(0.0, 0.0);
            range_fft
                .get_inplace_scratch_len()
                .max(doppler_fft.get_inplace_scratch_len())
        ];

    let range_window = window.coefficients(n_samples);
    let doppler_window = window.coefficients(n_chirps);

    let n_cells = n_chirps * n_samples;
    let mut maps = vec![Complex64::new(0.0, 0.0); params.n_tx * params.n_rx * n_cells];

    let mut row = vec![Complex64::new(0.0, 0.0); n_samples];
    let mut column = vec![Complex64::new(0.0, 0.0); n_chirps];
    // Range-compressed staging for one (tx, rx) pair: [chirp][range].
    let mut compressed = vec![Complex64::new(0.0, 0.0); n_cells];

    for tx in 0..params.n_tx {
        for rx in 0..params.n_rx {
            for chirp in 0..n_chirps {
                let base = ((tx * n_chirps + chirp) * params.n_rx + rx) * n_samples;
                for (k, slot) in row.iter_mut().enumerate() {
                    *slot = cube.samples()[base + k] * range_window[k];
                }
                range_fft.process_with_scratch(&mut row, &mut scratch);
                compressed[chirp * n_samples..(chirp + 1) * n_samples].copy_from_slice(&row);
            }
            let pair_base = (tx * params.n_rx + rx) * n_cells;
            for range_bin in 0..n_samples {
                for (chirp, slot) in column.iter_mut().enumerate() {
                    *slot = compressed[chirp * n_samples + range_bin] * doppler_window[chirp];
                }
                doppler_fft.process_with_scratch(&mut column, &mut scratch);
                // FFT shift: output bin d holds input bin (d + N/2) mod N.
                let half = n_chirps / 2;
                for (d, &value) in column.iter().enumerate() {
                    let shifted = (d + half) % n_chirps;
                    maps[pair_base + shifted * n_samples + range_bin] = value;
                }
            }
        }
    }

    Ok(RangeDopplerMaps {
        params,
        derived,
        window,
        seed: cube.seed,
        n_doppler: n_chirps,
        n_range: n_samples,
        maps,
    })
}

/// Pick peaks on the noncoherently integrated map.
///
/// Detections come back sorted by descending integrated power, each with its
/// virtual-array snapshot attached. An all-zero map yields an empty list for
/// either method. `StrongestK` returns exactly `min(k, cells)` entries
/// otherwise; CFAR returns every cell above its local threshold.
pub fn detect_peaks(maps: &RangeDopplerMaps, method: DetectionMethod) -> Result<Vec<Detection>> {
    let power = maps.integrated_power();
    if power.iter().all(|&p| p == 0.0) {
        return Ok(Vec::new());
    }

    let n_range = maps.n_range;
    let mut cells: Vec<(usize, usize)> = match method {
        DetectionMethod::StrongestK { k } => {
            if k == 0 {
                return Err(Error::InvalidDetector("strongest-k requires k ≥ 1".into()));
            }
            let mut order: Vec<usize> = (0..power.len()).collect();
            order.sort_by(|&a, &b| {
                power[b]
                    .partial_cmp(&power[a])
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(a.cmp(&b))
            });
            order
                .into_iter()
                .take(k)
                .map(|flat| (flat / n_range, flat % n_range))
                .collect()
        }
        DetectionMethod::CaCfar(cfar) => cfar_cells(&power, maps.n_doppler, n_range, cfar)?,
    };

    // Deterministic ordering: power descending, then bin indices.
    cells.sort_by(|&(da, ra), &(db, rb)| {
        let pa = power[da * n_range + ra];
        let pb = power[db * n_range + rb];
        pb.partial_cmp(&pa)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then((da, ra).cmp(&(db, rb)))
    });

    cells
        .into_iter()
        .map(|(doppler_bin, range_bin)| {
            let snapshot = extract_snapshot(maps, range_bin, doppler_bin)?;
            Ok(Detection {
                range_bin,
                doppler_bin,
                range_m: range_bin as f64 * maps.derived.range_resolution_m,
                v_det_mps: maps.derived.doppler_bin_to_velocity(doppler_bin)?,
                magnitude: power[doppler_bin * n_range + range_bin],
                snapshot,
            })
        })
        .collect()
}

/// Cells whose power exceeds `threshold_factor` times the local training-ring
/// mean. Ring geometry is Chebyshev: guard ring inside, training ring outside,
/// wrapped on both axes.
fn cfar_cells(
    power: &[f64],
    n_doppler: usize,
    n_range: usize,
    cfar: CfarParams,
) -> Result<Vec<(usize, usize)>> {
    let outer = cfar.guard_cells + cfar.training_cells;
    if cfar.training_cells == 0 || cfar.threshold_factor <= 0.0 {
        return Err(Error::InvalidDetector(
            "ca-cfar requires training_cells ≥ 1 and threshold_factor > 0".into(),
        ));
    }
    if 2 * outer + 1 > n_doppler || 2 * outer + 1 > n_range {
        return Err(Error::InvalidDetector(format!(
            "ca-cfar window {}x{} does not fit a {}x{} map",
            2 * outer + 1,
            2 * outer + 1,
            n_doppler,
            n_range
        )));
    }

    let mut hits = Vec::new();
    let guard = cfar.guard_cells as isize;
    let outer = outer as isize;
    for d in 0..n_doppler {
        for r in 0..n_range {
            let mut sum = 0.0;
            let mut count = 0u32;
            for dd in -outer..=outer {
                for dr in -outer..=outer {
                    if dd.abs().max(dr.abs()) <= guard {
                        continue;
                    }
                    let di = (d as isize + dd).rem_euclid(n_doppler as isize) as usize;
                    let ri = (r as isize + dr).rem_euclid(n_range as isize) as usize;
                    sum += power[di * n_range + ri];
                    count += 1;
                }
            }
            let noise = sum / count as f64;
            if power[d * n_range + r] > cfar.threshold_factor * noise && noise > 0.0 {
                hits.push((d, r));
            }
        }
    }
    Ok(hits)
}

/// Virtual-array snapshot at one range-Doppler cell:
/// `snapshot[tx·N_RX + rx] = maps[tx][rx][doppler_bin][range_bin]`.
pub fn extract_snapshot(
    maps: &RangeDopplerMaps,
    range_bin: usize,
    doppler_bin: usize,
) -> Result<Vec<Complex64>> {
    if range_bin >= maps.n_range || doppler_bin >= maps.n_doppler {
        return Err(Error::IndexOutOfRange(format!(
            "snapshot at (range {range_bin}, doppler {doppler_bin}) outside {}x{}",
            maps.n_range, maps.n_doppler
        )));
    }
    let mut snapshot = Vec::with_capacity(maps.params.n_tx * maps.params.n_rx);
    for tx in 0..maps.params.n_tx {
        for rx in 0..maps.params.n_rx {
            snapshot.push(maps.at(tx, rx, doppler_bin, range_bin));
        }
    }
    Ok(snapshot)
}
