//! Binary container for data cubes and range-Doppler map dumps.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic: "RDC1" (cube) or "RDM1" (map dump)
//! 4       2     version: u16 = 1
//! 6       16    dims: 4 × u32
//!               cube: [n_tx, n_chirps, n_rx, n_samples]
//!               maps: [n_tx, n_rx, n_doppler, n_range]
//! 22      8     seed: u64
//! 30      48    params: 6 × f64 in declaration order
//!               [carrier_frequency_hz, bandwidth_hz, chirp_time_s,
//!                rx_spacing_m, tx_spacing_m, speed_of_light]
//!               (the four counts live in dims and are not repeated)
//! 78      ...   samples: dims product × interleaved f32 (re, im),
//!               row-major in the dims order above
//! ```
//!
//! Samples are stored as f32 pairs; the in-memory cube is f64, so
//! write → read quantizes once and is byte-stable from then on
//! (`write(read(bytes)) == bytes`). This file is the ingestion point for
//! externally captured cubes: anything that writes this layout can be fed
//! through the processing chain.

use std::path::Path;

use num_complex::Complex64;

use crate::config::RadarParams;
use crate::error::{Error, Result};
use crate::processing::RangeDopplerMaps;
use crate::scene::DataCube;

pub const CUBE_MAGIC: &[u8; 4] = b"RDC1";
pub const MAPS_MAGIC: &[u8; 4] = b"RDM1";
pub const FORMAT_VERSION: u16 = 1;

/// Hard cap on the sample count a file may declare, to keep a corrupt
/// header from driving a huge allocation.
const MAX_SAMPLES: u64 = 1 << 30;

fn encode(
    magic: &[u8; 4],
    dims: [u32; 4],
    seed: u64,
    params: &RadarParams,
    samples: &[Complex64],
) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(78 + samples.len() * 8);
    bytes.extend_from_slice(magic);
    bytes.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    for dim in dims {
        bytes.extend_from_slice(&dim.to_le_bytes());
    }
    bytes.extend_from_slice(&seed.to_le_bytes());
    for value in [
        params.carrier_frequency_hz,
        params.bandwidth_hz,
        params.chirp_time_s,
        params.rx_spacing_m,
        params.tx_spacing_m,
        params.speed_of_light,
    ] {
        bytes.extend_from_slice(&value.to_le_bytes());
    }
    for sample in samples {
        bytes.extend_from_slice(&(sample.re as f32).to_le_bytes());
        bytes.extend_from_slice(&(sample.im as f32).to_le_bytes());
    }
    bytes
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, section: &str) -> Result<&'a [u8]> {
        if self.pos + len > self.data.len() {
            return Err(Error::Format(format!(
                "truncated file: {section} section needs {len} bytes at offset {}, only {} left",
                self.pos,
                self.data.len() - self.pos
            )));
        }
        let slice = &self.data[self.pos..self.pos + len];
        self.pos += len;
        Ok(slice)
    }

    fn u16(&mut self, section: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, section)?.try_into().unwrap()))
    }

    fn u32(&mut self, section: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, section)?.try_into().unwrap()))
    }

    fn u64(&mut self, section: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, section)?.try_into().unwrap()))
    }

    fn f64(&mut self, section: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, section)?.try_into().unwrap()))
    }
}

/// Serialize a cube to the RDC1 byte layout.
pub fn cube_to_bytes(cube: &DataCube) -> Vec<u8> {
    let p = &cube.params;
    encode(
        CUBE_MAGIC,
        [
            p.n_tx as u32,
            p.n_chirps as u32,
            p.n_rx as u32,
            p.n_samples as u32,
        ],
        cube.seed,
        p,
        cube.samples(),
    )
}

/// Parse an RDC1 byte buffer back into a cube.
pub fn cube_from_bytes(bytes: &[u8]) -> Result<DataCube> {
    let mut reader = Reader {
        data: bytes,
        pos: 0,
    };
    let magic = reader.take(4, "magic")?;
    if magic != CUBE_MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:?}: RDC1 expected",
            String::from_utf8_lossy(magic)
        )));
    }
    let version = reader.u16("version")?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported version {version} (expected {FORMAT_VERSION})"
        )));
    }
    let n_tx = reader.u32("dims")? as usize;
    let n_chirps = reader.u32("dims")? as usize;
    let n_rx = reader.u32("dims")? as usize;
    let n_samples = reader.u32("dims")? as usize;
    let total = n_tx as u64 * n_chirps as u64 * n_rx as u64 * n_samples as u64;
    if total == 0 || total > MAX_SAMPLES {
        return Err(Error::Format(format!(
            "implausible dims {n_tx}x{n_chirps}x{n_rx}x{n_samples}"
        )));
    }
    let seed = reader.u64("seed")?;
    let carrier_frequency_hz = reader.f64("params")?;
    let bandwidth_hz = reader.f64("params")?;
    let chirp_time_s = reader.f64("params")?;
    let rx_spacing_m = reader.f64("params")?;
    let tx_spacing_m = reader.f64("params")?;
    let speed_of_light = reader.f64("params")?;
    let params = RadarParams {
        carrier_frequency_hz,
        bandwidth_hz,
        chirp_time_s,
        n_samples,
        n_chirps,
        n_tx,
        n_rx,
        rx_spacing_m,
        tx_spacing_m,
        speed_of_light,
    };

    let mut cube = DataCube::zeros(params, seed).map_err(|e| match e {
        Error::InvalidParams(report) => {
            Error::Format(format!("file params fail validation: {report}"))
        }
        other => other,
    })?;
    let sample_bytes = reader.take(total as usize * 8, "samples")?;
    for (i, slot) in cube.samples_mut().iter_mut().enumerate() {
        let re = f32::from_le_bytes(sample_bytes[i * 8..i * 8 + 4].try_into().unwrap());
        let im = f32::from_le_bytes(sample_bytes[i * 8 + 4..i * 8 + 8].try_into().unwrap());
        *slot = Complex64::new(re as f64, im as f64);
    }
    if reader.pos != bytes.len() {
        return Err(Error::Format(format!(
            "{} trailing bytes after samples",
            bytes.len() - reader.pos
        )));
    }
    Ok(cube)
}

/// Write a cube file.
pub fn write_cube(path: impl AsRef<Path>, cube: &DataCube) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, cube_to_bytes(cube)).map_err(|e| Error::io(path, e))
}

/// Read a cube file.
pub fn read_cube(path: impl AsRef<Path>) -> Result<DataCube> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    cube_from_bytes(&bytes)
}

/// Serialize range-Doppler maps to the RDM1 byte layout
/// (`[tx][rx][doppler][range]` row-major).
pub fn maps_to_bytes(maps: &RangeDopplerMaps) -> Vec<u8> {
    encode(
        MAPS_MAGIC,
        [
            maps.params.n_tx as u32,
            maps.params.n_rx as u32,
            maps.n_doppler() as u32,
            maps.n_range() as u32,
        ],
        maps.seed,
        &maps.params,
        maps.as_slice(),
    )
}

/// Dump range-Doppler maps to disk.
pub fn write_maps(path: impl AsRef<Path>, maps: &RangeDopplerMaps) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, maps_to_bytes(maps)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processing::range_doppler_process;
    use crate::scene::{synthesize_cube, Target};
    use crate::window::Window;

    fn small_cube() -> DataCube {
        let params =
            RadarParams::from_spacing_ratios(77.0e9, 750.0e6, 42.67e-6, 16, 4, 2, 2, 0.5, 2.0);
        synthesize_cube(&params, &[Target::new(0.8, 1.0, 0.1, 15.0)], 42).unwrap()
    }

    #[test]
    fn roundtrip_is_byte_stable_with_exact_metadata() {
        let cube = small_cube();
        let bytes = cube_to_bytes(&cube);
        let restored = cube_from_bytes(&bytes).unwrap();
        assert_eq!(restored.params, cube.params, "params must survive exactly");
        assert_eq!(restored.seed, cube.seed);
        // Samples quantize to f32 once; after that the bytes are a fixed point.
        assert_eq!(cube_to_bytes(&restored), bytes);
        let again = cube_from_bytes(&cube_to_bytes(&restored)).unwrap();
        assert_eq!(again, restored, "read(write(cube)) is bit-identical");
    }

    #[test]
    fn wrong_magic_is_named() {
        let mut bytes = cube_to_bytes(&small_cube());
        bytes[..4].copy_from_slice(b"NOPE");
        let err = cube_from_bytes(&bytes).unwrap_err().to_string();
        assert!(err.contains("RDC1 expected"), "got: {err}");
    }

    #[test]
    fn truncation_names_the_missing_section() {
        let bytes = cube_to_bytes(&small_cube());
        for (end, section) in [
            (3, "magic"),
            (5, "version"),
            (10, "dims"),
            (25, "seed"),
            (40, "params"),
            (bytes.len() - 1, "samples"),
        ] {
            let err = cube_from_bytes(&bytes[..end]).unwrap_err().to_string();
            assert!(
                err.contains(section),
                "truncating at {end} should mention `{section}`, got: {err}"
            );
        }
    }

    #[test]
    fn bad_version_and_trailing_garbage_are_rejected() {
        let mut bytes = cube_to_bytes(&small_cube());
        bytes[4] = 2;
        let err = cube_from_bytes(&bytes).unwrap_err().to_string();
        assert!(err.contains("version"), "got: {err}");

        let mut padded = cube_to_bytes(&small_cube());
        padded.push(0);
        let err = cube_from_bytes(&padded).unwrap_err().to_string();
        assert!(err.contains("trailing"), "got: {err}");
    }

    #[test]
    fn implausible_dims_are_rejected() {
        let mut bytes = cube_to_bytes(&small_cube());
        bytes[6..10].copy_from_slice(&u32::MAX.to_le_bytes());
        let err = cube_from_bytes(&bytes).unwrap_err().to_string();
        assert!(err.contains("dims"), "got: {err}");
    }

    #[test]
    fn file_roundtrip_through_disk() {
        let dir = std::env::temp_dir().join("tdm_doppler_io_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cube.rdc");
        let cube = small_cube();
        write_cube(&path, &cube).unwrap();
        let restored = read_cube(&path).unwrap();
        assert_eq!(cube_to_bytes(&restored), cube_to_bytes(&cube));
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn maps_dump_has_the_rdm1_layout() {
        let cube = small_cube();
        let maps = range_doppler_process(&cube, Window::Hann).unwrap();
        let bytes = maps_to_bytes(&maps);
        assert_eq!(&bytes[..4], MAPS_MAGIC);
        let dims: Vec<u32> = (0..4)
            .map(|i| u32::from_le_bytes(bytes[6 + 4 * i..10 + 4 * i].try_into().unwrap()))
            .collect();
        assert_eq!(dims, vec![2, 2, 4, 16]);
        let expected_len = 78 + 2 * 2 * 4 * 16 * 8;
        assert_eq!(bytes.len(), expected_len);
    }
}
