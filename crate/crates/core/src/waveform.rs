//! Dual-polarization complex sample streams.

use crate::{Complex64, Error, Result};
use std::io::Write;

/// Which polarization of a [`DualPolWaveform`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    X,
    Y,
}

/// Two synchronized complex sample streams (x/y polarization) at a common
/// sample rate. This is the electric-field representation every stage of the
/// chain passes around.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPolWaveform {
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub sample_rate: f64,
}

impl DualPolWaveform {
    /// Builds a waveform, checking that both polarizations have equal length.
    pub fn new(x: Vec<Complex64>, y: Vec<Complex64>, sample_rate: f64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        Ok(Self { x, y, sample_rate })
    }

    /// All-zero waveform of length `n`.
    pub fn zeros(n: usize, sample_rate: f64) -> Self {
        Self {
            x: vec![Complex64::new(0.0, 0.0); n],
            y: vec![Complex64::new(0.0, 0.0); n],
            sample_rate,
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Mean complex power per sample, both polarizations combined.
    pub fn mean_power(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let p: f64 = self
            .x
            .iter()
            .zip(&self.y)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum();
        p / self.len() as f64
    }

    /// Serializes one polarization as interleaved little-endian f64
    /// (re, im) pairs. Debug format for external inspection.
    pub fn write_raw<W: Write>(&self, pol: Polarization, w: &mut W) -> std::io::Result<()> {
        let stream = match pol {
            Polarization::X => &self.x,
            Polarization::Y => &self.y,
        };
        for s in stream {
            w.write_all(&s.re.to_le_bytes())?;
            w.write_all(&s.im.to_le_bytes())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mismatched_lengths() {
        let err = DualPolWaveform::new(vec![Complex64::new(1.0, 0.0)], vec![], 1.0);
        assert!(matches!(err, Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn raw_serialization_is_interleaved_le() {
        let wf = DualPolWaveform::new(
            vec![Complex64::new(1.0, -2.0)],
            vec![Complex64::new(0.0, 0.0)],
            1.0,
        )
        .unwrap();
        let mut buf = Vec::new();
        wf.write_raw(Polarization::X, &mut buf).unwrap();
        assert_eq!(buf.len(), 16);
        assert_eq!(&buf[..8], &1.0f64.to_le_bytes());
        assert_eq!(&buf[8..], &(-2.0f64).to_le_bytes());
    }
}
