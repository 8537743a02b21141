//! FFT window functions.
//!
//! Periodic (DFT-even) definitions, the standard choice for spectral
//! processing. Hann is the pipeline default: its sidelobe suppression keeps
//! neighboring-bin leakage from biasing the snapshot phase estimates.

/// Window applied before the range and Doppler FFTs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    /// No tapering; maximum resolution, -13 dB sidelobes.
    Rectangular,
    /// 0.5 - 0.5·cos(2πi/N); -31.5 dB sidelobes.
    #[default]
    Hann,
    /// 0.54 - 0.46·cos(2πi/N); -41 dB first sidelobe.
    Hamming,
}

impl Window {
    /// Generate the N coefficients of this window.
    pub fn coefficients(self, n: usize) -> Vec<f64> {
        let nf = n as f64;
        (0..n)
            .map(|i| {
                let phase = std::f64::consts::TAU * i as f64 / nf;
                match self {
                    Window::Rectangular => 1.0,
                    Window::Hann => 0.5 - 0.5 * phase.cos(),
                    Window::Hamming => 0.54 - 0.46 * phase.cos(),
                }
            })
            .collect()
    }

    /// Sum of coefficients (coherent gain × N), used for normalization.
    pub fn coherent_sum(self, n: usize) -> f64 {
        self.coefficients(n).iter().sum()
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Window::Rectangular => "rectangular",
            Window::Hann => "hann",
            Window::Hamming => "hamming",
        };
        write!(f, "{name}")
    }
}

impl std::str::FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rectangular" | "rect" | "none" => Ok(Window::Rectangular),
            "hann" => Ok(Window::Hann),
            "hamming" => Ok(Window::Hamming),
            other => Err(format!("unknown window `{other}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hann_endpoints_and_midpoint() {
        let w = Window::Hann.coefficients(64);
        assert_eq!(w.len(), 64);
        assert!(w[0].abs() < 1e-15);
        assert!((w[32] - 1.0).abs() < 1e-12);
        // Periodic Hann sums to exactly N/2.
        assert!((Window::Hann.coherent_sum(64) - 32.0).abs() < 1e-9);
    }

    #[test]
    fn rectangular_is_all_ones() {
        assert!(Window::Rectangular.coefficients(8).iter().all(|&x| x == 1.0));
    }

    #[test]
    fn hamming_floor() {
        let w = Window::Hamming.coefficients(32);
        assert!((w[0] - 0.08).abs() < 1e-12);
        assert!(w.iter().all(|&x| x >= 0.08 - 1e-12));
    }
}
