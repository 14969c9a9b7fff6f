//! Power spectral density estimation.

use crate::Complex64;
use rustfft::FftPlanner;

/// Welch-averaged PSD of a complex record, frequencies sorted ascending
/// over (-fs/2, fs/2]. `psd` is in power per Hz; integrating over the whole
/// axis recovers the mean power.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub freqs: Vec<f64>,
    pub psd: Vec<f64>,
    pub sample_rate: f64,
}

impl Spectrum {
    /// Integrated power over `[lo, hi)` Hz.
    pub fn band_power(&self, lo: f64, hi: f64) -> f64 {
        let df = self.sample_rate / self.freqs.len() as f64;
        self.freqs
            .iter()
            .zip(&self.psd)
            .filter(|(f, _)| **f >= lo && **f < hi)
            .map(|(_, p)| p * df)
            .sum()
    }

    /// Mean PSD (power per Hz) over `[lo, hi)`, for noise-floor estimates.
    pub fn mean_psd(&self, lo: f64, hi: f64) -> f64 {
        let vals: Vec<f64> = self
            .freqs
            .iter()
            .zip(&self.psd)
            .filter(|(f, _)| **f >= lo && **f < hi)
            .map(|(_, p)| *p)
            .collect();
        if vals.is_empty() {
            0.0
        } else {
            vals.iter().sum::<f64>() / vals.len() as f64
        }
    }

    /// Total integrated power.
    pub fn total_power(&self) -> f64 {
        let df = self.sample_rate / self.freqs.len() as f64;
        self.psd.iter().map(|p| p * df).sum()
    }
}

fn hann(i: usize, n: usize) -> f64 {
    let t = std::f64::consts::PI * i as f64 / (n - 1) as f64;
    let s = t.sin();
    s * s
}

/// Welch periodogram with Hann window and 50% overlap.
pub fn periodogram(x: &[Complex64], sample_rate: f64, nfft: usize) -> Spectrum {
    let nfft = nfft.next_power_of_two().min(x.len().next_power_of_two()).max(64);
    let nfft = if nfft > x.len() { (x.len() / 2).max(64).next_power_of_two() / 2 } else { nfft };
    let nfft = nfft.max(64).min(x.len().max(64));
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(nfft);

    let w: Vec<f64> = (0..nfft).map(|i| hann(i, nfft)).collect();
    let w_energy: f64 = w.iter().map(|v| v * v).sum();

    let hop = (nfft / 2).max(1);
    let mut acc = vec![0.0f64; nfft];
    let mut segments = 0usize;
    let mut start = 0usize;
    let mut buf = vec![Complex64::new(0.0, 0.0); nfft];
    while start + nfft <= x.len() {
        for i in 0..nfft {
            buf[i] = x[start + i] * w[i];
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
        segments += 1;
        start += hop;
    }
    if segments == 0 {
        // record shorter than one segment: single zero-padded block
        for i in 0..x.len() {
            buf[i] = x[i] * w[i.min(nfft - 1)];
        }
        for b in buf.iter_mut().skip(x.len()) {
            *b = Complex64::new(0.0, 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
        segments = 1;
    }

    let norm = 1.0 / (segments as f64 * sample_rate * w_energy);
    // fftshift to ascending frequency order
    let half = nfft / 2;
    let mut freqs = Vec::with_capacity(nfft);
    let mut psd = Vec::with_capacity(nfft);
    for k in 0..nfft {
        let kk = (k + half) % nfft;
        let f = if kk < half {
            kk as f64 * sample_rate / nfft as f64
        } else {
            (kk as f64 - nfft as f64) * sample_rate / nfft as f64
        };
        freqs.push(f);
        psd.push(acc[kk] * norm);
    }
    Spectrum {
        freqs,
        psd,
        sample_rate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tone_power_lands_in_its_band() {
        let fs = 1000.0;
        let x: Vec<Complex64> = (0..16384)
            .map(|i| {
                let ph = 2.0 * std::f64::consts::PI * 200.0 * i as f64 / fs;
                Complex64::new(ph.cos(), ph.sin()) * 3.0
            })
            .collect();
        let s = periodogram(&x, fs, 1024);
        let in_band = s.band_power(180.0, 220.0);
        let out_band = s.band_power(-400.0, -100.0);
        assert!((in_band - 9.0).abs() / 9.0 < 0.02, "in-band {in_band}");
        assert!(out_band < 1e-6 * in_band);
        assert!((s.total_power() - 9.0).abs() / 9.0 < 0.02);
    }

    #[test]
    fn white_noise_psd_is_flat() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(9);
        let fs = 8.0;
        let x: Vec<Complex64> = (0..65536)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let s = periodogram(&x, fs, 512);
        let var = 2.0 / 12.0; // two uniform quadratures
        assert!((s.total_power() - var).abs() / var < 0.05);
        let lo = s.mean_psd(-3.0, -1.0);
        let hi = s.mean_psd(1.0, 3.0);
        assert!((lo - hi).abs() / lo < 0.1);
    }
}
