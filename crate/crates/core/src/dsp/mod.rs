//! Shared receiver DSP: SNU calibration, frequency-offset estimation, band
//! isolation, matched filtering, per-channel normalization and framing.
//!
//! All operations here are deterministic (no RNG).

pub mod fir;
pub mod spectrum;

use crate::{Complex64, DualPolWaveform, Error, Result};
use rustfft::FftPlanner;

/// Result of the shot/electronic-noise calibration.
///
/// `snu_scale` converts raw variance to shot-noise units: raw data scaled by
/// `sqrt(snu_scale)` has unit shot-noise variance per quadrature after the
/// electronic contribution is accounted separately.
#[derive(Debug, Clone, Copy)]
pub struct CalibrationRecord {
    pub shot_variance_raw: f64,
    pub electronic_variance_raw: f64,
    pub snu_scale: f64,
}

impl CalibrationRecord {
    /// Electronic noise expressed in SNU.
    pub fn electronic_noise_snu(&self) -> f64 {
        self.electronic_variance_raw * self.snu_scale
    }
}

fn sample_variance(data: &[f64]) -> f64 {
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    data.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
}

/// Calibrates the SNU conversion from a shot-noise run (signal off, LO on)
/// and an electronic run (everything off). Inputs are pooled quadrature
/// samples in raw units.
pub fn calibrate_snu(shot_run: &[f64], elec_run: &[f64]) -> Result<CalibrationRecord> {
    if shot_run.len() < 2 || elec_run.len() < 2 {
        return Err(Error::InvalidCalibration("calibration runs must be non-empty".into()));
    }
    let shot = sample_variance(shot_run);
    let elec = sample_variance(elec_run);
    if elec >= shot {
        return Err(Error::InvalidCalibration(format!(
            "electronic variance {elec:.3e} >= shot variance {shot:.3e}"
        )));
    }
    Ok(CalibrationRecord {
        shot_variance_raw: shot,
        electronic_variance_raw: elec,
        snu_scale: 1.0 / (shot - elec),
    })
}

/// Aligned transmitted/received symbol sequences in SNU, processed in
/// non-overlapping frames.
#[derive(Debug, Clone)]
pub struct SymbolRecord {
    pub tx_symbols: Vec<Complex64>,
    pub rx_symbols: Vec<Complex64>,
    pub frame_length: usize,
}

impl SymbolRecord {
    pub fn new(tx: Vec<Complex64>, rx: Vec<Complex64>, frame_length: usize) -> Result<Self> {
        if tx.len() != rx.len() {
            return Err(Error::LengthMismatch {
                expected: tx.len(),
                got: rx.len(),
            });
        }
        if frame_length == 0 {
            return Err(Error::InvalidConfig("frame_length must be positive".into()));
        }
        Ok(Self {
            tx_symbols: tx,
            rx_symbols: rx,
            frame_length,
        })
    }

    /// Consecutive non-overlapping frames; a trailing partial frame is
    /// discarded.
    pub fn segment_frames(&self) -> impl Iterator<Item = (&[Complex64], &[Complex64])> {
        self.tx_symbols
            .chunks_exact(self.frame_length)
            .zip(self.rx_symbols.chunks_exact(self.frame_length))
    }

    pub fn n_frames(&self) -> usize {
        self.tx_symbols.len() / self.frame_length
    }
}

/// Estimates the frequency offset of the pilot tone from its periodogram
/// peak, refined by quadratic interpolation of the three log-power bins
/// around the maximum. Both polarizations' spectra are summed so the
/// estimate is invariant to polarization rotation.
///
/// Returns the offset in Hz: `measured pilot frequency - expected_pilot`.
pub fn estimate_frequency_offset(
    wf: &DualPolWaveform,
    expected_pilot: f64,
    search_bw: f64,
) -> Result<f64> {
    if wf.is_empty() {
        return Err(Error::PilotNotFound {
            expected_hz: expected_pilot,
            searched_hz: search_bw,
        });
    }
    let fs = wf.sample_rate;
    let n = wf.len().min(1 << 20);
    // Zero-padding doubles the grid density so the parabolic fit stays well
    // inside its small-offset regime.
    let nfft = (2 * n.next_power_of_two()).min(1 << 22);

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(nfft);
    let mut power = vec![0.0f64; nfft];
    for pol in [&wf.x, &wf.y] {
        let mut buf = vec![Complex64::new(0.0, 0.0); nfft];
        buf[..n].copy_from_slice(&pol[..n]);
        fft.process(&mut buf);
        for (p, b) in power.iter_mut().zip(&buf) {
            *p += b.norm_sqr();
        }
    }

    let bin_freq = |k: usize| -> f64 {
        if k < nfft / 2 {
            k as f64 * fs / nfft as f64
        } else {
            (k as f64 - nfft as f64) * fs / nfft as f64
        }
    };

    let lo = expected_pilot - search_bw;
    let hi = expected_pilot + search_bw;
    let mut peak_k = None;
    let mut peak_v = 0.0;
    let mut floor_acc = 0.0;
    let mut floor_n = 0usize;
    for k in 0..nfft {
        let f = bin_freq(k);
        if f >= lo && f <= hi {
            floor_acc += power[k];
            floor_n += 1;
            if power[k] > peak_v {
                peak_v = power[k];
                peak_k = Some(k);
            }
        }
    }
    let peak_k = peak_k.ok_or(Error::PilotNotFound {
        expected_hz: expected_pilot,
        searched_hz: search_bw,
    })?;
    let floor = (floor_acc - peak_v) / (floor_n.max(2) - 1) as f64;
    if peak_v < floor * 10.0 {
        return Err(Error::PilotNotFound {
            expected_hz: expected_pilot,
            searched_hz: search_bw,
        });
    }

    // Parabolic refinement on log power.
    let km = (peak_k + nfft - 1) % nfft;
    let kp = (peak_k + 1) % nfft;
    let (ym, y0, yp) = (
        power[km].max(1e-300).ln(),
        power[peak_k].max(1e-300).ln(),
        power[kp].max(1e-300).ln(),
    );
    let denom = ym - 2.0 * y0 + yp;
    let delta = if denom.abs() < 1e-12 {
        0.0
    } else {
        (0.5 * (ym - yp) / denom).clamp(-0.5, 0.5)
    };
    let f_peak = bin_freq(peak_k) + delta * fs / nfft as f64;
    Ok(f_peak - expected_pilot)
}

/// Multiplies the waveform by `exp(-j 2 pi df k / fs)`, shifting all
/// spectral content down by `df`.
pub fn shift_frequency(wf: &DualPolWaveform, df: f64) -> DualPolWaveform {
    let fs = wf.sample_rate;
    let step = -2.0 * std::f64::consts::PI * df / fs;
    let mut x = Vec::with_capacity(wf.len());
    let mut y = Vec::with_capacity(wf.len());
    for k in 0..wf.len() {
        let ph = step * k as f64;
        let rot = Complex64::new(ph.cos(), ph.sin());
        x.push(wf.x[k] * rot);
        y.push(wf.y[k] * rot);
    }
    DualPolWaveform {
        x,
        y,
        sample_rate: fs,
    }
}

/// Frequency plan used to split pilot and quantum bands.
#[derive(Debug, Clone, Copy)]
pub struct BandPlan {
    pub signal_center: f64,
    /// Full occupied signal bandwidth, `symbol_rate * (1 + rolloff)`.
    pub signal_bandwidth: f64,
    pub pilot_freq: f64,
    /// Full pilot filter bandwidth.
    pub pilot_bandwidth: f64,
    /// Filter transition width.
    pub transition: f64,
}

impl BandPlan {
    pub fn validate(&self, sample_rate: f64) -> Result<()> {
        let nyq = sample_rate / 2.0;
        let sig_hi = self.signal_center + self.signal_bandwidth / 2.0 + self.transition;
        let sig_lo = self.signal_center - self.signal_bandwidth / 2.0 - self.transition;
        let pil_hi = self.pilot_freq + self.pilot_bandwidth / 2.0 + self.transition;
        let pil_lo = self.pilot_freq - self.pilot_bandwidth / 2.0 - self.transition;
        if sig_hi.abs() > nyq || sig_lo.abs() > nyq || pil_hi.abs() > nyq || pil_lo.abs() > nyq {
            return Err(Error::BandOverlap(format!(
                "bands exceed Nyquist {nyq:.3e} Hz"
            )));
        }
        if sig_hi > pil_lo && pil_hi > sig_lo {
            return Err(Error::BandOverlap(format!(
                "signal band [{sig_lo:.3e}, {sig_hi:.3e}] overlaps pilot band [{pil_lo:.3e}, {pil_hi:.3e}]"
            )));
        }
        Ok(())
    }
}

/// Pilot and quantum bands split out of the received waveform.
#[derive(Debug, Clone)]
pub struct IsolatedBands {
    /// Complex analytic pilot band, still at its passband frequency. The
    /// real part is the real-valued passband pilot used by the trackers.
    pub pilot: DualPolWaveform,
    /// Quantum band downconverted to complex baseband.
    pub quantum: DualPolWaveform,
}

/// Splits the (frequency-offset-corrected) waveform into the pilot band and
/// the baseband quantum band. Both keep the dual-polarization structure and
/// the input time alignment.
pub fn isolate_bands(wf: &DualPolWaveform, plan: &BandPlan) -> Result<IsolatedBands> {
    plan.validate(wf.sample_rate)?;
    let fs = wf.sample_rate;

    let pilot_taps = fir::bandpass_taps(
        plan.pilot_freq,
        plan.pilot_bandwidth / 2.0,
        plan.transition,
        fs,
    );
    let signal_taps = fir::bandpass_taps(
        plan.signal_center,
        plan.signal_bandwidth / 2.0,
        plan.transition,
        fs,
    );

    let pilot = DualPolWaveform {
        x: fir::filter_same(&wf.x, &pilot_taps),
        y: fir::filter_same(&wf.y, &pilot_taps),
        sample_rate: fs,
    };
    let qx = fir::filter_same(&wf.x, &signal_taps);
    let qy = fir::filter_same(&wf.y, &signal_taps);
    let quantum = shift_frequency(
        &DualPolWaveform {
            x: qx,
            y: qy,
            sample_rate: fs,
        },
        plan.signal_center,
    );
    Ok(IsolatedBands { pilot, quantum })
}

/// Matched filter + symbol-rate decimation.
///
/// Convolves with the (unit-energy) RRC taps, compensates the filter delay
/// and samples at `timing_offset + i * sps`. Output length is
/// `floor((n - timing_offset) / sps)`.
pub fn matched_filter_downsample(
    stream: &[Complex64],
    taps: &[f64],
    sps: usize,
    timing_offset: usize,
) -> Result<Vec<Complex64>> {
    if stream.len() < taps.len() {
        return Err(Error::InvalidConfig(format!(
            "stream length {} shorter than filter span {}",
            stream.len(),
            taps.len()
        )));
    }
    let filtered = fir::filter_same_real(stream, taps);
    let n = filtered.len();
    if timing_offset >= n {
        return Ok(Vec::new());
    }
    let count = (n - timing_offset) / sps;
    Ok((0..count)
        .map(|i| filtered[timing_offset + i * sps])
        .collect())
}

/// Exhaustive integer timing search: the offset in `0..sps` maximizing the
/// variance of the matched-filter output.
pub fn find_timing_offset(stream: &[Complex64], taps: &[f64], sps: usize) -> Result<usize> {
    if stream.len() < taps.len() {
        return Err(Error::InvalidConfig(
            "stream shorter than filter span".into(),
        ));
    }
    let filtered = fir::filter_same_real(stream, taps);
    let mut best = (0usize, -1.0f64);
    for off in 0..sps {
        let nsym = (filtered.len() - off) / sps;
        if nsym == 0 {
            continue;
        }
        let var: f64 = (0..nsym)
            .map(|i| filtered[off + i * sps].norm_sqr())
            .sum::<f64>()
            / nsym as f64;
        if var > best.1 {
            best = (off, var);
        }
    }
    Ok(best.0)
}

/// Scales the y polarization so both polarizations carry equal integrated
/// power over `[0, bandwidth]` Hz.
pub fn normalize_channels(wf: &DualPolWaveform, bandwidth: f64) -> Result<DualPolWaveform> {
    if bandwidth <= 0.0 || bandwidth > wf.sample_rate / 2.0 {
        return Err(Error::InvalidConfig(format!(
            "normalization bandwidth {bandwidth:.3e} outside (0, Nyquist]"
        )));
    }
    let nfft = 4096.min(wf.len().next_power_of_two());
    let sx = spectrum::periodogram(&wf.x, wf.sample_rate, nfft);
    let sy = spectrum::periodogram(&wf.y, wf.sample_rate, nfft);
    let px = sx.band_power(0.0, bandwidth);
    let py = sy.band_power(0.0, bandwidth);
    if px <= 0.0 || py <= 0.0 {
        return Err(Error::InvalidEstimate(
            "zero-power channel in normalization band".into(),
        ));
    }
    let scale = (px / py).sqrt();
    Ok(DualPolWaveform {
        x: wf.x.clone(),
        y: wf.y.iter().map(|s| s * scale).collect(),
        sample_rate: wf.sample_rate,
    })
}
