//! Transmitter, WDM channel and receiver models for the back-to-back link.

mod eye;
mod filter;
mod link;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::bits::BitStream;
use crate::error::{Error, Result};
use crate::laserdyn::{
    integrate_solitary, intensity, nrz_level, steady_state, DriveCurrent, InitialState, LaserParams, StepConfig,
};
use crate::waveform::Waveform;

pub use eye::{eye, eye_with_range, EyeDiagram};
pub use filter::{lowpass, Butterworth, Section};
pub use link::{align, measure_latency, run_end_to_end, run_end_to_end_with, LinkReport, LinkRun, RunHooks};

/// Q reported when both rails have zero spread.
pub const Q_CAP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    /// Halfway between the smallest and largest decision sample.
    Midpoint,
    /// Halfway between the two cluster means of a 1-D two-means split.
    TwoCluster,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    pub bitrate_gbps: f64,
    pub lpf_order: usize,
    pub lpf_cutoff_ghz: f64,
    /// Receiver volts per mW of optical power.
    pub pd_responsivity: f64,
    pub noise_sigma: f64,
    pub noise_seed: u64,
    /// Decision instant as a fraction of the bit period.
    pub sample_phase: f64,
    pub threshold_mode: ThresholdMode,
    pub crosstalk: f64,
    /// LD drive rails as multiples of the derived threshold current.
    pub drive_low_factor: f64,
    pub drive_high_factor: f64,
    pub rise_ps: f64,
    /// Integration step for the transmitter lasers.
    pub ld_step_ps: f64,
    /// Zero bits sent before the data and stripped from every measurement.
    pub preamble_bits: usize,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            bitrate_gbps: 5.0,
            lpf_order: 4,
            lpf_cutoff_ghz: 3.75,
            pd_responsivity: 1.0,
            noise_sigma: 0.0,
            noise_seed: 1,
            sample_phase: 0.5,
            threshold_mode: ThresholdMode::TwoCluster,
            crosstalk: 0.0,
            drive_low_factor: 1.2,
            drive_high_factor: 3.0,
            rise_ps: 20.0,
            ld_step_ps: 0.5,
            preamble_bits: 64,
        }
    }
}

impl LinkConfig {
    pub fn bit_period_ns(&self) -> f64 {
        1.0 / self.bitrate_gbps
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bitrate_gbps.is_finite() && self.bitrate_gbps > 0.0) {
            return Err(Error::config("bitrate must be positive"));
        }
        if self.lpf_order == 0 {
            return Err(Error::config("filter order must be at least 1"));
        }
        let nyquist = 0.5 / (self.ld_step_ps * 1e-3);
        if !(self.lpf_cutoff_ghz > 0.0 && self.lpf_cutoff_ghz < nyquist) {
            return Err(Error::config(format!(
                "filter cutoff {} GHz must lie in (0, {nyquist}) GHz",
                self.lpf_cutoff_ghz
            )));
        }
        if !(self.pd_responsivity.is_finite() && self.pd_responsivity > 0.0) {
            return Err(Error::config("photodetector responsivity must be positive"));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::config("noise sigma must be >= 0"));
        }
        if !(0.0..1.0).contains(&self.sample_phase) {
            return Err(Error::config(format!("sample phase must be in [0, 1), got {}", self.sample_phase)));
        }
        if !(0.0..1.0).contains(&self.crosstalk) {
            return Err(Error::config(format!("crosstalk must be in [0, 1), got {}", self.crosstalk)));
        }
        if !(self.drive_low_factor >= 0.0 && self.drive_high_factor > self.drive_low_factor) {
            return Err(Error::config("drive rails must satisfy 0 <= low < high"));
        }
        if !(self.rise_ps >= 0.0 && self.rise_ps < self.bit_period_ns() * 1e3) {
            return Err(Error::config("rise time must be shorter than a bit"));
        }
        if !(self.ld_step_ps > 0.0 && self.ld_step_ps * 1e-3 <= self.bit_period_ns() / 10.0) {
            return Err(Error::config("laser step must be at most a tenth of a bit"));
        }
        Ok(())
    }

    /// `(low, high)` drive currents in mA for the given laser.
    pub fn drive_levels_ma(&self, params: &LaserParams) -> (f64, f64) {
        let ith = params.threshold_current_ma();
        (self.drive_low_factor * ith, self.drive_high_factor * ith)
    }
}

/// NRZ waveform with linear edges of `rise_ps`; `nbits · Tbit / dt` samples.
pub fn nrz_waveform(bits: &BitStream, bitrate_gbps: f64, lo: f64, hi: f64, rise_ps: f64, dt_ps: f64) -> Result<Waveform> {
    if !(bitrate_gbps.is_finite() && bitrate_gbps > 0.0) {
        return Err(Error::config("bitrate must be positive"));
    }
    let tbit = 1.0 / bitrate_gbps;
    let dt = dt_ps * 1e-3;
    if !(dt > 0.0 && dt <= tbit / 10.0 * (1.0 + 1e-12)) {
        return Err(Error::config(format!("step {dt_ps} ps is coarser than a tenth of a bit")));
    }
    if !(rise_ps >= 0.0 && rise_ps * 1e-3 < tbit) {
        return Err(Error::config(format!("rise time {rise_ps} ps must be shorter than a bit")));
    }
    let n = (bits.len() as f64 * tbit / dt).round() as usize;
    let rise = rise_ps * 1e-3;
    let samples = (0..n)
        .map(|k| nrz_level(bits, k as f64 * dt, tbit, rise, lo, hi))
        .collect();
    Waveform::new(dt, samples)
}

/// Optical output power (mW) of a laser whose current is NRZ-modulated by `bits`.
///
/// The laser starts in the steady state of `i_low`, a preamble of
/// `link.preamble_bits` zeros is sent first, and the returned waveform covers
/// only the data bits.
pub fn modulate_ld(bits: &BitStream, params: &LaserParams, link: &LinkConfig, i_low: f64, i_high: f64) -> Result<Waveform> {
    modulate_ld_padded(bits, 0, params, link, i_low, i_high)
}

/// As [`modulate_ld`] with `tail_bits` extra zero bits after the data.
pub(crate) fn modulate_ld_padded(
    bits: &BitStream,
    tail_bits: usize,
    params: &LaserParams,
    link: &LinkConfig,
    i_low: f64,
    i_high: f64,
) -> Result<Waveform> {
    if !(i_low >= 0.0 && i_high > i_low) {
        return Err(Error::parameter(format!(
            "drive rails must satisfy 0 <= low < high (got {i_low}, {i_high})"
        )));
    }
    let mut framed = BitStream::zeros(link.preamble_bits);
    framed.extend_from(bits);
    framed.extend_from(&BitStream::zeros(tail_bits));

    let drive = DriveCurrent::Nrz {
        low_ma: i_low,
        high_ma: i_high,
        bitrate_gbps: link.bitrate_gbps,
        rise_ps: link.rise_ps,
        bits: framed.clone(),
    };
    let (n0, s0) = steady_state(params, i_low)?;
    let init = if s0 > 0.0 {
        InitialState::new(s0.sqrt().into(), n0)
    } else {
        // Below threshold the field would stay exactly zero without a seed.
        InitialState::new(crate::laserdyn::SEED_FIELD.into(), n0)
    };
    let tbit = link.bit_period_ns();
    let grid = StepConfig::new(framed.len() as f64 * tbit, link.ld_step_ps);
    let trace = integrate_solitary(params, &drive, grid, init)?;
    let power = intensity(&trace, params.facet_power_mw_per_density());

    let dt = power.dt_ns;
    let start = (link.preamble_bits as f64 * tbit / dt).round() as usize;
    let len = ((bits.len() + tail_bits) as f64 * tbit / dt).round() as usize;
    Ok(power.slice(start, (start + len).min(power.len())))
}

/// Mux + demux leakage: each output picks up `crosstalk` of the other channel.
pub fn wdm_pair(ch1: &Waveform, ch2: &Waveform, crosstalk: f64) -> Result<(Waveform, Waveform)> {
    if ch1.len() != ch2.len() || (ch1.dt_ns - ch2.dt_ns).abs() > 1e-12 * ch1.dt_ns {
        return Err(Error::input(format!(
            "WDM channels differ in shape: {} @ {} ns vs {} @ {} ns",
            ch1.len(),
            ch1.dt_ns,
            ch2.len(),
            ch2.dt_ns
        )));
    }
    if !(0.0..1.0).contains(&crosstalk) {
        return Err(Error::config(format!("crosstalk must be in [0, 1), got {crosstalk}")));
    }
    if crosstalk == 0.0 {
        return Ok((ch1.clone(), ch2.clone()));
    }
    let mix = |a: &Waveform, b: &Waveform| Waveform {
        dt_ns: a.dt_ns,
        samples: a.samples.iter().zip(&b.samples).map(|(x, y)| x + crosstalk * y).collect(),
    };
    Ok((mix(ch1, ch2), mix(ch2, ch1)))
}

/// `v = R·p + n`, with `n` white Gaussian noise seeded by `link.noise_seed`.
pub fn photodetect(p: &Waveform, link: &LinkConfig) -> Result<Waveform> {
    let r = link.pd_responsivity;
    if link.noise_sigma == 0.0 {
        return Ok(p.map(|v| r * v));
    }
    let normal = Normal::new(0.0, link.noise_sigma).map_err(|e| Error::config(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(link.noise_seed);
    Ok(Waveform {
        dt_ns: p.dt_ns,
        samples: p.samples.iter().map(|&v| r * v + normal.sample(&mut rng)).collect(),
    })
}

/// Whole bit periods covered by `w`.
fn bit_count(w: &Waveform, bitrate_gbps: f64) -> Result<usize> {
    if !(bitrate_gbps.is_finite() && bitrate_gbps > 0.0) {
        return Err(Error::config("bitrate must be positive"));
    }
    let nbits = (w.len() as f64 * w.dt_ns * bitrate_gbps + 1e-6).floor() as usize;
    if nbits == 0 {
        return Err(Error::input("waveform is shorter than one bit period"));
    }
    Ok(nbits)
}

/// Waveform values at `(k + phase)·Tbit`, one per bit (nearest grid point).
pub fn decision_samples(w: &Waveform, bitrate_gbps: f64, sample_phase: f64) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&sample_phase) {
        return Err(Error::config(format!("sample phase must be in [0, 1), got {sample_phase}")));
    }
    let nbits = bit_count(w, bitrate_gbps)?;
    let tbit = 1.0 / bitrate_gbps;
    let last = w.len() - 1;
    Ok((0..nbits)
        .map(|k| {
            let idx = (((k as f64 + sample_phase) * tbit / w.dt_ns).round() as usize).min(last);
            w.samples[idx]
        })
        .collect())
}

/// Decision threshold for a set of decision-instant samples.
pub fn decision_threshold(samples: &[f64], mode: ThresholdMode) -> Result<f64> {
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !(hi > lo) {
        return Err(Error::degenerate("decision samples hold fewer than two distinct levels"));
    }
    let mid = 0.5 * (lo + hi);
    match mode {
        ThresholdMode::Midpoint => Ok(mid),
        ThresholdMode::TwoCluster => {
            let mut threshold = mid;
            for _ in 0..200 {
                let (mut s0, mut n0, mut s1, mut n1) = (0.0, 0usize, 0.0, 0usize);
                for &v in samples {
                    if v >= threshold {
                        s1 += v;
                        n1 += 1;
                    } else {
                        s0 += v;
                        n0 += 1;
                    }
                }
                if n0 == 0 || n1 == 0 {
                    return Err(Error::degenerate("two-cluster split left a cluster empty"));
                }
                let next = 0.5 * (s0 / n0 as f64 + s1 / n1 as f64);
                if next == threshold {
                    break;
                }
                threshold = next;
            }
            Ok(threshold)
        }
    }
}

/// Samples once per bit and slices against the chosen threshold (`1` iff `v >= threshold`).
pub fn sample_decide(w: &Waveform, bitrate_gbps: f64, sample_phase: f64, mode: ThresholdMode) -> Result<BitStream> {
    let samples = decision_samples(w, bitrate_gbps, sample_phase)?;
    let threshold = decision_threshold(&samples, mode)?;
    Ok(samples.iter().map(|&v| v >= threshold).collect())
}

/// `(errors, ratio)` between two equal-length streams.
pub fn ber(a: &BitStream, b: &BitStream) -> Result<(usize, f64)> {
    let errors = a.hamming(b)?;
    let rate = if a.is_empty() { 0.0 } else { errors as f64 / a.len() as f64 };
    Ok((errors, rate))
}

/// `(μ1 − μ0)/(σ1 + σ0)` over decision samples grouped by the true bit.
pub fn q_factor(w: &Waveform, truth: &BitStream, bitrate_gbps: f64, sample_phase: f64) -> Result<f64> {
    let samples = decision_samples(w, bitrate_gbps, sample_phase)?;
    if samples.len() != truth.len() {
        return Err(Error::input(format!(
            "waveform carries {} bits but truth has {}",
            samples.len(),
            truth.len()
        )));
    }
    q_from_samples(&samples, truth)
}

pub(crate) fn q_from_samples(samples: &[f64], truth: &BitStream) -> Result<f64> {
    let mut ones = Vec::new();
    let mut zeros = Vec::new();
    for (v, b) in samples.iter().zip(truth.iter()) {
        if b {
            ones.push(*v);
        } else {
            zeros.push(*v);
        }
    }
    if ones.is_empty() || zeros.is_empty() {
        return Err(Error::input("Q needs at least one sample of each bit value"));
    }
    let (m1, s1) = mean_sd(&ones);
    let (m0, s0) = mean_sd(&zeros);
    let spread = s1 + s0;
    let separation = m1 - m0;
    if separation == 0.0 {
        return Ok(0.0);
    }
    if spread == 0.0 || !spread.is_normal() {
        return Ok(Q_CAP.copysign(separation));
    }
    Ok((separation / spread).clamp(-Q_CAP, Q_CAP))
}

fn mean_sd(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n;
    (m, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn link() -> LinkConfig {
        LinkConfig::default()
    }

    #[test]
    fn nrz_period_and_levels() {
        let bits = BitStream::parse("1111").unwrap();
        let w = nrz_waveform(&bits, 5.0, 0.0, 1.0, 20.0, 0.5).unwrap();
        // 200 ps bits at 0.5 ps: 400 samples per bit.
        assert_eq!(w.len(), 1600);
        assert!(w.samples[40..].iter().all(|&v| v == 1.0));
        assert!(w.samples[0] == 0.0 && w.samples[20] > 0.0 && w.samples[20] < 1.0);

        let alt = BitStream::parse("01010101").unwrap();
        let w = nrz_waveform(&alt, 5.0, 0.0, 1.0, 20.0, 0.5).unwrap();
        for k in 800..w.len() - 800 {
            assert!((w.samples[k] - w.samples[k + 800]).abs() < 1e-12, "period 2·Tbit at {k}");
        }
    }

    #[test]
    fn nrz_step_must_be_fine_enough() {
        let bits = BitStream::parse("10").unwrap();
        assert!(matches!(nrz_waveform(&bits, 5.0, 0.0, 1.0, 20.0, 25.0), Err(Error::Config(_))));
        assert!(matches!(nrz_waveform(&bits, 5.0, 0.0, 1.0, 250.0, 0.5), Err(Error::Config(_))));
    }

    #[test]
    fn wdm_identity_leak_and_symmetry() {
        let a = Waveform::new(0.1, vec![1.0, 2.0, 3.0]).unwrap();
        let b = Waveform::new(0.1, vec![0.0, 0.0, 0.0]).unwrap();
        let (x, y) = wdm_pair(&a, &b, 0.0).unwrap();
        assert_eq!((x, y), (a.clone(), b.clone()));
        let (x, _) = wdm_pair(&a, &b, 1e-2).unwrap();
        assert_eq!(x, a);
        let c = Waveform::new(0.1, vec![5.0, 1.0, 0.5]).unwrap();
        let (p, q) = wdm_pair(&a, &c, 0.1).unwrap();
        let (q2, p2) = wdm_pair(&c, &a, 0.1).unwrap();
        assert_eq!((p, q), (p2, q2));
        let short = Waveform::new(0.1, vec![1.0]).unwrap();
        assert!(matches!(wdm_pair(&a, &short, 0.0), Err(Error::Input(_))));
    }

    #[test]
    fn photodetector_linearity_and_noise() {
        let p = Waveform::new(0.1, vec![0.5, 1.0, 2.0]).unwrap();
        assert_eq!(photodetect(&p, &link()).unwrap(), p);
        let doubled = LinkConfig {
            pd_responsivity: 2.0,
            ..link()
        };
        assert_eq!(photodetect(&p, &doubled).unwrap().samples, vec![1.0, 2.0, 4.0]);

        // For n = 1e6 the std-dev estimate has relative sd 1/√(2n) ≈ 7e-4;
        // [0.0997, 0.1003] is about ±4.2 of those.
        let zeros = Waveform::new(0.1, vec![0.0; 1_000_000]).unwrap();
        let noisy = LinkConfig {
            noise_sigma: 0.1,
            noise_seed: 42,
            ..link()
        };
        let v = photodetect(&zeros, &noisy).unwrap();
        let m = v.mean();
        let sd = (v.samples.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64).sqrt();
        assert!((0.0997..=0.1003).contains(&sd), "{sd}");
        assert_eq!(v, photodetect(&zeros, &noisy).unwrap());
    }

    #[test]
    fn clean_nrz_is_recovered_exactly() {
        let bits = crate::cipher::prbs(&crate::cipher::PrbsConfig::default(), 500).unwrap();
        let w = nrz_waveform(&bits, 5.0, 0.2, 1.7, 20.0, 1.0).unwrap();
        for mode in [ThresholdMode::Midpoint, ThresholdMode::TwoCluster] {
            assert_eq!(sample_decide(&w, 5.0, 0.5, mode).unwrap(), bits);
        }
    }

    #[test]
    fn flat_waveform_is_degenerate() {
        let w = Waveform::new(1.0, vec![1.0; 2000]).unwrap();
        assert!(matches!(
            sample_decide(&w, 5.0, 0.5, ThresholdMode::TwoCluster),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn ber_examples() {
        let a = crate::cipher::prbs(&crate::cipher::PrbsConfig::default(), 10_000).unwrap();
        assert_eq!(ber(&a, &a).unwrap(), (0, 0.0));
        let c = a.slice(0, 100);
        assert_eq!(ber(&c, &c.complement()).unwrap(), (100, 1.0));
        let mut b = a.clone();
        b.flip(1234);
        assert_eq!(ber(&a, &b).unwrap(), (1, 1e-4));
        assert!(matches!(ber(&a, &c), Err(Error::Input(_))));
    }

    #[test]
    fn q_factor_examples() {
        let bits = BitStream::parse("0110100110").unwrap();
        let w = nrz_waveform(&bits, 5.0, 0.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(q_factor(&w, &bits, 5.0, 0.5).unwrap(), Q_CAP);
        let flat = Waveform::new(0.001, vec![0.3; 2000]).unwrap();
        assert_eq!(q_factor(&flat, &bits, 5.0, 0.5).unwrap(), 0.0);
        let ones = BitStream::parse("1111111111").unwrap();
        assert!(matches!(q_factor(&w, &ones, 5.0, 0.5), Err(Error::Input(_))));
    }

    #[test]
    fn q_factor_with_gaussian_rails() {
        // Rails separated by d with noise s: Q → d / (2s).
        let bits = crate::cipher::prbs(&crate::cipher::PrbsConfig::default(), 10_000).unwrap();
        let (d, s) = (1.0, 0.1);
        let w = nrz_waveform(&bits, 5.0, 0.0, d, 0.0, 20.0).unwrap();
        let noisy = LinkConfig {
            noise_sigma: s,
            noise_seed: 9,
            ..link()
        };
        let v = photodetect(&w, &noisy).unwrap();
        let q = q_factor(&v, &bits, 5.0, 0.5).unwrap();
        let expected = d / (2.0 * s);
        assert!((q - expected).abs() / expected < 0.1, "{q}");
    }

    proptest! {
        #[test]
        fn decisions_invariant_under_positive_affine_maps(
            seed in 1u64..1000,
            scale_exp in -8i32..8,
            offset in -100.0f64..100.0,
            noise in 0.0f64..0.2,
        ) {
            let bits = crate::cipher::prbs(&crate::cipher::PrbsConfig::maximal(11, seed).unwrap(), 300).unwrap();
            let w = nrz_waveform(&bits, 5.0, 1.0, 2.0, 20.0, 10.0).unwrap();
            let v = photodetect(&w, &LinkConfig { noise_sigma: noise, noise_seed: seed, ..LinkConfig::default() }).unwrap();
            let alpha = 2f64.powi(scale_exp);
            let mapped = v.map(|x| alpha * x + offset);
            for mode in [ThresholdMode::Midpoint, ThresholdMode::TwoCluster] {
                prop_assert_eq!(
                    sample_decide(&v, 5.0, 0.5, mode).unwrap(),
                    sample_decide(&mapped, 5.0, 0.5, mode).unwrap()
                );
            }
        }
    }
}
