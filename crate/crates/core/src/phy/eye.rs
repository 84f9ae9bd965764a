use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::waveform::Waveform;

/// Occupancy histogram of a waveform folded modulo two bit periods.
///
/// `counts` is row-major with `amp_bins` rows (row 0 = lowest amplitude) of
/// `time_bins` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EyeDiagram {
    pub time_bins: usize,
    pub amp_bins: usize,
    pub amp_range: (f64, f64),
    pub counts: Vec<u64>,
}

impl EyeDiagram {
    pub fn count(&self, time_bin: usize, amp_bin: usize) -> u64 {
        self.counts[amp_bin * self.time_bins + time_bin]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Adds another diagram with identical binning.
    pub fn merge(&mut self, other: &EyeDiagram) -> Result<()> {
        if self.time_bins != other.time_bins || self.amp_bins != other.amp_bins || self.amp_range != other.amp_range {
            return Err(Error::input("eye diagrams use different binning"));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    /// Binary greyscale PGM (P5); the top row is the highest amplitude and
    /// intensities are scaled to the maximum count.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.time_bins, self.amp_bins).into_bytes();
        let max = self.max_count().max(1) as f64;
        for row in (0..self.amp_bins).rev() {
            for col in 0..self.time_bins {
                let c = self.count(col, row) as f64;
                out.push((255.0 * c / max).round() as u8);
            }
        }
        out
    }

    /// `timeBin,ampBin,count` rows for every bin.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("timeBin,ampBin,count\n");
        for row in 0..self.amp_bins {
            for col in 0..self.time_bins {
                let _ = writeln!(out, "{col},{row},{}", self.count(col, row));
            }
        }
        out
    }
}

/// Eye diagram with the amplitude range taken from the waveform's extremes.
pub fn eye(w: &Waveform, bitrate_gbps: f64, time_bins: usize, amp_bins: usize) -> Result<EyeDiagram> {
    let (lo, hi) = w.min_max().ok_or_else(|| Error::input("cannot fold an empty waveform"))?;
    let range = if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    };
    eye_with_range(w, bitrate_gbps, time_bins, amp_bins, range)
}

/// Eye diagram over an explicit amplitude range; out-of-range samples land
/// in the edge rows.
pub fn eye_with_range(
    w: &Waveform,
    bitrate_gbps: f64,
    time_bins: usize,
    amp_bins: usize,
    amp_range: (f64, f64),
) -> Result<EyeDiagram> {
    if w.is_empty() {
        return Err(Error::input("cannot fold an empty waveform"));
    }
    if time_bins == 0 || amp_bins == 0 {
        return Err(Error::config("eye diagram needs at least one bin per axis"));
    }
    if !(bitrate_gbps.is_finite() && bitrate_gbps > 0.0) {
        return Err(Error::config("bitrate must be positive"));
    }
    let (lo, hi) = amp_range;
    if !(hi > lo) {
        return Err(Error::config("eye amplitude range must be increasing"));
    }
    let window = 2.0 / bitrate_gbps;
    let bins_per_sample = w.dt_ns / window * time_bins as f64;
    let mut counts = vec![0u64; time_bins * amp_bins];
    for (k, &v) in w.samples.iter().enumerate() {
        // Position in time bins, snapped so that samples sitting on a bin
        // edge fold the same way wherever the trace starts.
        let pos = k as f64 * bins_per_sample;
        let snapped = pos.round();
        let pos = if (pos - snapped).abs() <= 1e-9 * snapped.max(1.0) { snapped } else { pos };
        let col = (pos.floor() as u64 % time_bins as u64) as usize;
        let rel = (v - lo) / (hi - lo);
        let row = if rel.is_nan() {
            0
        } else {
            ((rel * amp_bins as f64).floor().max(0.0) as usize).min(amp_bins - 1)
        };
        counts[row * time_bins + col] += 1;
    }
    Ok(EyeDiagram {
        time_bins,
        amp_bins,
        amp_range,
        counts,
    })
}
