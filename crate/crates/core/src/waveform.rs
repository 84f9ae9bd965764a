use crate::error::{Error, Result};

/// Uniformly sampled real signal. Sample `k` sits at `k * dt_ns`.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub dt_ns: f64,
    pub samples: Vec<f64>,
}

impl Waveform {
    pub fn new(dt_ns: f64, samples: Vec<f64>) -> Result<Self> {
        if !(dt_ns.is_finite() && dt_ns > 0.0) {
            return Err(Error::config(format!("sample step must be positive, got {dt_ns} ns")));
        }
        Ok(Self { dt_ns, samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Time span from the first to the last sample.
    pub fn span_ns(&self) -> f64 {
        self.samples.len().saturating_sub(1) as f64 * self.dt_ns
    }

    pub fn time_ns(&self, k: usize) -> f64 {
        k as f64 * self.dt_ns
    }

    pub fn mean(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub fn min_max(&self) -> Option<(f64, f64)> {
        let mut it = self.samples.iter().copied();
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Waveform {
        Waveform {
            dt_ns: self.dt_ns,
            samples: self.samples.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Samples `[start, end)` as a new waveform with the same step.
    pub fn slice(&self, start: usize, end: usize) -> Waveform {
        Waveform {
            dt_ns: self.dt_ns,
            samples: self.samples[start..end].to_vec(),
        }
    }

    /// Drops everything before `t_ns` (rounded to the nearest sample).
    pub fn skip_ns(&self, t_ns: f64) -> Waveform {
        let start = ((t_ns / self.dt_ns).round().max(0.0) as usize).min(self.samples.len());
        self.slice(start, self.samples.len())
    }

    /// Keeps every `stride`-th sample.
    pub fn decimate(&self, stride: usize) -> Waveform {
        assert!(stride >= 1);
        Waveform {
            dt_ns: self.dt_ns * stride as f64,
            samples: self.samples.iter().step_by(stride).copied().collect(),
        }
    }
}
