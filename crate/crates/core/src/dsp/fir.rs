//! Linear-phase FIR design and FFT-based convolution.
//!
//! Filters are windowed-sinc (Blackman window, ~74 dB stopband), always odd
//! length so the group delay is an integer number of samples and can be
//! removed exactly. Convolution uses overlap-save so arbitrarily long
//! records run in bounded memory.

use crate::Complex64;
use rustfft::FftPlanner;

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x)
    }
}

fn blackman(i: usize, n: usize) -> f64 {
    let t = 2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64;
    0.42 - 0.5 * t.cos() + 0.08 * (2.0 * t).cos()
}

fn next_pow2(n: usize) -> usize {
    n.next_power_of_two()
}

/// Lowpass prototype with unit DC gain.
///
/// `cutoff_hz` is the top of the flat passband; the response rolls off to
/// the stopband over `transition_hz`.
pub fn lowpass_taps(cutoff_hz: f64, transition_hz: f64, sample_rate: f64) -> Vec<f64> {
    assert!(cutoff_hz > 0.0 && transition_hz > 0.0);
    assert!(cutoff_hz + transition_hz <= sample_rate / 2.0, "band exceeds Nyquist");
    let mut n = (5.5 * sample_rate / transition_hz).ceil() as usize;
    if n < 11 {
        n = 11;
    }
    if n % 2 == 0 {
        n += 1;
    }
    let m = (n - 1) as f64 / 2.0;
    // -6 dB point centered in the transition band.
    let fc = (cutoff_hz + transition_hz / 2.0) / sample_rate;
    let mut taps: Vec<f64> = (0..n)
        .map(|i| 2.0 * fc * sinc(2.0 * fc * (i as f64 - m)) * blackman(i, n))
        .collect();
    let dc: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= dc;
    }
    taps
}

/// Complex bandpass: the lowpass prototype modulated to `center_hz`.
///
/// Passes the analytic band `center_hz ± half_bandwidth_hz` with unit gain
/// and zero phase at the center once the group delay is compensated.
pub fn bandpass_taps(
    center_hz: f64,
    half_bandwidth_hz: f64,
    transition_hz: f64,
    sample_rate: f64,
) -> Vec<Complex64> {
    let lp = lowpass_taps(half_bandwidth_hz, transition_hz, sample_rate);
    let m = (lp.len() - 1) as f64 / 2.0;
    lp.iter()
        .enumerate()
        .map(|(i, &h)| {
            let ph = 2.0 * std::f64::consts::PI * center_hz * (i as f64 - m) / sample_rate;
            Complex64::new(ph.cos(), ph.sin()) * h
        })
        .collect()
}

/// Full linear convolution via overlap-save, output length `n + taps.len() - 1`.
pub fn convolve_full(x: &[Complex64], taps: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    let l = taps.len();
    if n == 0 {
        return Vec::new();
    }
    let out_len = n + l - 1;
    let fft_len = next_pow2((4 * l).max(16_384)).min(next_pow2(out_len).max(64));
    let fft_len = fft_len.max(next_pow2(l) * 2);
    let block = fft_len - l + 1;

    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(fft_len);
    let inv = planner.plan_fft_inverse(fft_len);

    let mut h = vec![Complex64::new(0.0, 0.0); fft_len];
    h[..l].copy_from_slice(taps);
    fwd.process(&mut h);

    let mut out = vec![Complex64::new(0.0, 0.0); out_len];
    let mut seg = vec![Complex64::new(0.0, 0.0); fft_len];
    let mut k0: usize = 0;
    while k0 < out_len {
        for (t, s) in seg.iter_mut().enumerate() {
            let idx = k0 as i64 - (l as i64 - 1) + t as i64;
            *s = if idx >= 0 && (idx as usize) < n {
                x[idx as usize]
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        fwd.process(&mut seg);
        for (s, hh) in seg.iter_mut().zip(&h) {
            *s *= *hh;
        }
        inv.process(&mut seg);
        let scale = 1.0 / fft_len as f64;
        for t in (l - 1)..fft_len {
            let k = k0 + t - (l - 1);
            if k >= out_len {
                break;
            }
            out[k] = seg[t] * scale;
        }
        k0 += block;
    }
    out
}

/// Group-delay-compensated filtering: output has the same length and time
/// alignment as the input. Requires odd-length taps.
pub fn filter_same(x: &[Complex64], taps: &[Complex64]) -> Vec<Complex64> {
    assert!(taps.len() % 2 == 1, "linear-phase filters must have odd length");
    let delay = (taps.len() - 1) / 2;
    let full = convolve_full(x, taps);
    full[delay..delay + x.len()].to_vec()
}

/// Same-length filtering with real taps.
pub fn filter_same_real(x: &[Complex64], taps: &[f64]) -> Vec<Complex64> {
    let ctaps: Vec<Complex64> = taps.iter().map(|&t| Complex64::new(t, 0.0)).collect();
    filter_same(x, &ctaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn direct_conv(x: &[Complex64], h: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); x.len() + h.len() - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &hj) in h.iter().enumerate() {
                out[i + j] += xi * hj;
            }
        }
        out
    }

    #[test]
    fn overlap_save_matches_direct_convolution() {
        let x: Vec<Complex64> = (0..1000)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let h: Vec<Complex64> = (0..31)
            .map(|i| Complex64::new(0.1 / (1.0 + i as f64), 0.02 * i as f64))
            .collect();
        let a = convolve_full(&x, &h);
        let b = direct_conv(&x, &h);
        assert_eq!(a.len(), b.len());
        for (u, v) in a.iter().zip(&b) {
            assert_abs_diff_eq!(u.re, v.re, epsilon = 1e-9);
            assert_abs_diff_eq!(u.im, v.im, epsilon = 1e-9);
        }
    }

    #[test]
    fn filter_same_keeps_alignment_for_identity() {
        // delta taps of length 5 centered -> identity
        let taps = vec![0.0, 0.0, 1.0, 0.0, 0.0];
        let x: Vec<Complex64> = (0..50).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        let y = filter_same_real(&x, &taps);
        for (u, v) in x.iter().zip(&y) {
            assert_abs_diff_eq!(u.re, v.re, epsilon = 1e-12);
            assert_abs_diff_eq!(u.im, v.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn lowpass_rejects_out_of_band_tone() {
        let fs = 1000.0;
        let taps = lowpass_taps(100.0, 50.0, fs);
        let tone: Vec<Complex64> = (0..4000)
            .map(|i| {
                let ph = 2.0 * std::f64::consts::PI * 300.0 * i as f64 / fs;
                Complex64::new(ph.cos(), ph.sin())
            })
            .collect();
        let y = filter_same_real(&tone, &taps);
        let p: f64 = y[500..3500].iter().map(|s| s.norm_sqr()).sum::<f64>() / 3000.0;
        assert!(p < 1e-6, "stopband power {p}");
        let dc: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); 2000];
        let z = filter_same_real(&dc, &taps);
        assert_abs_diff_eq!(z[1000].re, 1.0, epsilon = 1e-9);
    }
}
