//! Hann-windowed power spectra of uniformly sampled real series.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum {
    /// Bin spacing in cycles per unit time.
    pub df: f64,
    /// One-sided power of bins 0…n/2, mean removed.
    pub power: Vec<f64>,
}

impl PowerSpectrum {
    pub fn frequency(&self, bin: usize) -> f64 {
        bin as f64 * self.df
    }

    pub fn bin_of(&self, f: f64) -> usize {
        ((f / self.df).round() as usize).min(self.power.len() - 1)
    }

    pub fn total(&self) -> f64 {
        self.power.iter().sum()
    }

    /// Local maxima holding at least `min_fraction` of the total power, strongest first.
    pub fn peaks(&self, min_fraction: f64) -> Vec<usize> {
        let total = self.total();
        let p = &self.power;
        let mut out: Vec<usize> = (1..p.len())
            .filter(|&k| p[k] >= p[k - 1] && (k + 1 == p.len() || p[k] > p[k + 1]) && p[k] >= min_fraction * total)
            .collect();
        out.sort_by(|&a, &b| p[b].total_cmp(&p[a]));
        out
    }

    /// Fraction of the power within `halfwidth` bins of frequency f.
    pub fn fraction_near(&self, f: f64, halfwidth: usize) -> f64 {
        let k = self.bin_of(f);
        let lo = k.saturating_sub(halfwidth);
        let hi = (k + halfwidth).min(self.power.len() - 1);
        self.power[lo..=hi].iter().sum::<f64>() / self.total()
    }

    /// Whether some local maximum sits within `tolerance` bins of f.
    pub fn has_peak_near(&self, f: f64, tolerance: usize, min_fraction: f64) -> bool {
        let k = self.bin_of(f) as i64;
        self.peaks(min_fraction)
            .iter()
            .any(|&p| (p as i64 - k).abs() <= tolerance as i64)
    }
}

pub fn power_spectrum(samples: &[f64], dt: f64) -> Result<PowerSpectrum> {
    let n = samples.len();
    if n < 8 {
        return Err(Error::domain("samples", "need at least 8 samples"));
    }
    if !(dt > 0.0) {
        return Err(Error::domain("dt", "must be positive"));
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = samples
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let w = 0.5 - 0.5 * (2.0 * std::f64::consts::PI * k as f64 / (n - 1) as f64).cos();
            Complex64::new((x - mean) * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let power = buf[..=n / 2].iter().map(|z| z.norm_sqr()).collect();
    Ok(PowerSpectrum {
        df: 1.0 / (n as f64 * dt),
        power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_tone() {
        let dt = 0.01;
        let x: Vec<f64> = (0..4000)
            .map(|k| 3.0 + (2.0 * std::f64::consts::PI * 1.25 * k as f64 * dt).sin())
            .collect();
        let s = power_spectrum(&x, dt).unwrap();
        assert_eq!(s.peaks(0.05)[0], s.bin_of(1.25));
        assert!(s.fraction_near(1.25, 2) > 0.99);
    }
}
