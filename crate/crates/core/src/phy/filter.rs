//! Butterworth low-pass as cascaded second-order sections, discretized with
//! the bilinear transform prewarped at the cutoff.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::waveform::Waveform;

/// One biquad (or first-order section with `b2 = a2 = 0`), `a0` normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Section {
    pub fn dc_gain(&self) -> f64 {
        (self.b[0] + self.b[1] + self.b[2]) / (1.0 + self.a[0] + self.a[1])
    }

    /// |H(e^{jω})| at normalized angular frequency ω = 2π f dt.
    pub fn magnitude(&self, omega: f64) -> f64 {
        let z1 = num_complex::Complex64::from_polar(1.0, -omega);
        let z2 = z1 * z1;
        let num = self.b[0] + z1 * self.b[1] + z2 * self.b[2];
        let den = 1.0 + z1 * self.a[0] + z2 * self.a[1];
        (num / den).norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Butterworth {
    pub sections: Vec<Section>,
}

impl Butterworth {
    /// Designs an `order`-pole low-pass with -3 dB at `cutoff_ghz` for step `dt_ns`.
    pub fn design(order: usize, cutoff_ghz: f64, dt_ns: f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::config("filter order must be at least 1"));
        }
        let nyquist = 0.5 / dt_ns;
        if !(cutoff_ghz.is_finite() && cutoff_ghz > 0.0 && cutoff_ghz < nyquist) {
            return Err(Error::config(format!(
                "cutoff {cutoff_ghz} GHz must lie in (0, {nyquist}) GHz"
            )));
        }
        let k = (PI * cutoff_ghz * dt_ns).tan();
        let k2 = k * k;
        let mut sections = Vec::with_capacity(order.div_ceil(2));
        // Conjugate pole pairs at angles π(2m+1)/(2·order) from the imaginary axis.
        for m in 0..order / 2 {
            let damping = 2.0 * (PI * (2 * m + 1) as f64 / (2 * order) as f64).sin();
            let norm = 1.0 / (1.0 + damping * k + k2);
            let b0 = k2 * norm;
            sections.push(Section {
                b: [b0, 2.0 * b0, b0],
                a: [2.0 * (k2 - 1.0) * norm, (1.0 - damping * k + k2) * norm],
            });
        }
        if order % 2 == 1 {
            let norm = 1.0 / (1.0 + k);
            sections.push(Section {
                b: [k * norm, k * norm, 0.0],
                a: [(k - 1.0) * norm, 0.0],
            });
        }
        Ok(Self { sections })
    }

    pub fn magnitude(&self, freq_ghz: f64, dt_ns: f64) -> f64 {
        let omega = 2.0 * PI * freq_ghz * dt_ns;
        self.sections.iter().map(|s| s.magnitude(omega)).product()
    }

    /// Filters `x` causally. The state starts at the DC steady state of `x[0]`,
    /// so a constant input passes through unchanged from the first sample.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        let Some(&x0) = x.first() else {
            return y;
        };
        let mut level = x0;
        for s in &self.sections {
            let [b0, b1, b2] = s.b;
            let [a1, a2] = s.a;
            // Transposed direct form II, seeded with input = output = level.
            let mut z2 = (b2 - a2) * level;
            let mut z1 = (b1 - a1) * level + z2;
            for v in y.iter_mut() {
                let input = *v;
                let out = b0 * input + z1;
                z1 = b1 * input - a1 * out + z2;
                z2 = b2 * input - a2 * out;
                *v = out;
            }
            level *= s.dc_gain();
        }
        y
    }
}

/// Butterworth low-pass of `w`.
pub fn lowpass(w: &Waveform, order: usize, cutoff_ghz: f64) -> Result<Waveform> {
    let filter = Butterworth::design(order, cutoff_ghz, w.dt_ns)?;
    Ok(Waveform {
        dt_ns: w.dt_ns,
        samples: filter.apply(&w.samples),
    })
}
