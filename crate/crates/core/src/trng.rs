//! Key extraction from a chaotic intensity waveform.
//!
//! Clocked sampling, uniform quantization, a lag-`shift` modular difference
//! between codes, and retention of the low `lsb_count` bits of each
//! difference. At a 1 GHz clock with five kept bits this yields 5 Gbit/s.

use crate::bits::BitStream;
use crate::error::{Error, Result};
use crate::waveform::Waveform;

/// How the ADC full-scale range is set from the calibration waveform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RangeMode {
    MinMax,
    /// `mean ± k·σ`.
    MeanSigma(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdcConfig {
    pub bits: u32,
    pub clock_ghz: f64,
    pub phase_ns: f64,
    pub range: RangeMode,
}

impl Default for AdcConfig {
    fn default() -> Self {
        Self {
            bits: 8,
            clock_ghz: 1.0,
            phase_ns: 0.0,
            range: RangeMode::MinMax,
        }
    }
}

impl AdcConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=16).contains(&self.bits) {
            return Err(Error::config(format!("ADC resolution must be 1..=16 bits, got {}", self.bits)));
        }
        if !(self.clock_ghz.is_finite() && self.clock_ghz > 0.0) {
            return Err(Error::config(format!("ADC clock must be positive, got {} GHz", self.clock_ghz)));
        }
        if !(self.phase_ns.is_finite() && self.phase_ns >= 0.0) {
            return Err(Error::config(format!("sampling phase must be >= 0, got {} ns", self.phase_ns)));
        }
        if let RangeMode::MeanSigma(k) = self.range {
            if !(k.is_finite() && k > 0.0) {
                return Err(Error::config(format!("sigma multiplier must be positive, got {k}")));
            }
        }
        Ok(())
    }

    pub fn full_scale(&self) -> u32 {
        (1u32 << self.bits) - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitOrder {
    MsbFirst,
    LsbFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractorConfig {
    pub shift_samples: usize,
    pub lsb_count: u32,
    pub bit_order: BitOrder,
}

impl Default for ExtractorConfig {
    fn default() -> Self {
        Self {
            shift_samples: 1,
            lsb_count: 5,
            bit_order: BitOrder::MsbFirst,
        }
    }
}

impl ExtractorConfig {
    pub fn validate(&self, adc_bits: u32) -> Result<()> {
        if self.shift_samples < 1 {
            return Err(Error::config("difference shift must be at least one sample"));
        }
        if self.lsb_count < 1 || self.lsb_count > adc_bits {
            return Err(Error::config(format!(
                "kept bits must be in 1..={adc_bits}, got {}",
                self.lsb_count
            )));
        }
        Ok(())
    }
}

/// Key bits per second (Gbit/s) for a given configuration.
pub fn key_rate_gbps(adc: &AdcConfig, ext: &ExtractorConfig) -> f64 {
    adc.clock_ghz * ext.lsb_count as f64
}

/// Number of key bits produced from `clocked_samples` ADC samples.
pub fn key_length(clocked_samples: usize, ext: &ExtractorConfig) -> usize {
    clocked_samples.saturating_sub(ext.shift_samples) * ext.lsb_count as usize
}

/// ADC output codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSeq {
    pub codes: Vec<u32>,
    pub bits: u32,
}

impl SymbolSeq {
    pub fn new(codes: Vec<u32>, bits: u32) -> Result<Self> {
        if !(1..=16).contains(&bits) {
            return Err(Error::config(format!("symbol width must be 1..=16 bits, got {bits}")));
        }
        let max = (1u32 << bits) - 1;
        if let Some(bad) = codes.iter().find(|&&c| c > max) {
            return Err(Error::input(format!("code {bad} exceeds {bits}-bit range")));
        }
        Ok(Self { codes, bits })
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }
}

/// Picks the source sample nearest to `phase + k / clock` for each clock tick.
pub fn clock_sample(w: &Waveform, cfg: &AdcConfig) -> Result<Waveform> {
    cfg.validate()?;
    if w.is_empty() {
        return Err(Error::input("cannot sample an empty waveform"));
    }
    let period = 1.0 / cfg.clock_ghz;
    if period < w.dt_ns * (1.0 - 1e-9) {
        return Err(Error::config(format!(
            "clock {} GHz is faster than the source resolution {} GHz",
            cfg.clock_ghz,
            1.0 / w.dt_ns
        )));
    }
    let span = w.span_ns();
    if cfg.phase_ns > span + 1e-9 * w.dt_ns {
        return Err(Error::input(format!(
            "sampling phase {} ns lies beyond the waveform ({span} ns)",
            cfg.phase_ns
        )));
    }
    let ticks = ((span - cfg.phase_ns) * cfg.clock_ghz + 1e-9).floor() as usize + 1;
    let last = w.len() - 1;
    let samples = (0..ticks)
        .map(|k| {
            let t = cfg.phase_ns + k as f64 * period;
            let idx = ((t / w.dt_ns).round() as usize).min(last);
            w.samples[idx]
        })
        .collect();
    Ok(Waveform {
        dt_ns: period,
        samples,
    })
}

/// Full-scale `(vmin, vmax)` from a calibration waveform.
pub fn adc_range(calib: &Waveform, mode: RangeMode) -> Result<(f64, f64)> {
    let (lo, hi) = match mode {
        RangeMode::MinMax => calib
            .min_max()
            .ok_or_else(|| Error::input("empty calibration waveform"))?,
        RangeMode::MeanSigma(k) => {
            if calib.is_empty() {
                return Err(Error::input("empty calibration waveform"));
            }
            let mean = calib.mean();
            let var = calib.samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / calib.len() as f64;
            let sd = var.sqrt();
            (mean - k * sd, mean + k * sd)
        }
    };
    if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::degenerate(format!("ADC range is degenerate ({lo}, {hi})")));
    }
    Ok((lo, hi))
}

/// Uniform quantization with round-half-up and clamping to the code range.
/// `calib` sets the full-scale range; `None` calibrates on `w` itself.
pub fn quantize(w: &Waveform, cfg: &AdcConfig, calib: Option<&Waveform>) -> Result<SymbolSeq> {
    cfg.validate()?;
    let (vmin, vmax) = adc_range(calib.unwrap_or(w), cfg.range)?;
    let full = cfg.full_scale();
    let scale = full as f64 / (vmax - vmin);
    let codes = w
        .samples
        .iter()
        .map(|&v| quantize_one(v, vmin, scale, full))
        .collect();
    Ok(SymbolSeq { codes, bits: cfg.bits })
}

#[inline]
fn quantize_one(v: f64, vmin: f64, scale: f64, full: u32) -> u32 {
    let x = ((v - vmin) * scale + 0.5).floor();
    if x.is_nan() || x <= 0.0 {
        0
    } else if x >= full as f64 {
        full
    } else {
        x as u32
    }
}

/// Lag difference modulo `2^bits`, keeping the `lsb_count` low bits of each.
pub fn diff_lsb(codes: &SymbolSeq, cfg: &ExtractorConfig) -> Result<BitStream> {
    cfg.validate(codes.bits)?;
    let shift = cfg.shift_samples;
    if codes.len() <= shift {
        return Err(Error::input(format!(
            "{} codes are too few for a difference at lag {shift}",
            codes.len()
        )));
    }
    let modulus_mask = (1u32 << codes.bits) - 1;
    let keep_mask = (1u32 << cfg.lsb_count) - 1;
    let mut out = BitStream::with_capacity(key_length(codes.len(), cfg));
    for (now, before) in codes.codes[shift..].iter().zip(&codes.codes) {
        let kept = now.wrapping_sub(*before) & modulus_mask & keep_mask;
        match cfg.bit_order {
            BitOrder::MsbFirst => out.push_word_msb(kept as u64, cfg.lsb_count),
            BitOrder::LsbFirst => {
                for b in 0..cfg.lsb_count {
                    out.push((kept >> b) & 1 == 1);
                }
            }
        }
    }
    Ok(out)
}

/// `clock_sample → quantize → diff_lsb`. The ADC range is calibrated on the
/// clocked samples.
pub fn extract_key(w: &Waveform, adc: &AdcConfig, ext: &ExtractorConfig) -> Result<BitStream> {
    ext.validate(adc.bits)?;
    let clocked = clock_sample(w, adc)?;
    let codes = quantize(&clocked, adc, None)?;
    diff_lsb(&codes, ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ramp(n: usize, dt: f64) -> Waveform {
        Waveform::new(dt, (0..n).map(|i| i as f64).collect()).unwrap()
    }

    #[test]
    fn ten_ghz_source_one_ghz_clock_takes_every_tenth() {
        let w = ramp(101, 0.1);
        let c = clock_sample(&w, &AdcConfig::default()).unwrap();
        assert_eq!(c.samples, (0..=10).map(|i| (10 * i) as f64).collect::<Vec<_>>());
        assert_eq!(c.dt_ns, 1.0);
    }

    #[test]
    fn clock_at_source_rate_is_identity() {
        let w = ramp(37, 0.1);
        let cfg = AdcConfig {
            clock_ghz: 10.0,
            ..AdcConfig::default()
        };
        assert_eq!(clock_sample(&w, &cfg).unwrap().samples, w.samples);
    }

    #[test]
    fn phase_of_one_source_step_shifts_by_one_sample() {
        let w = ramp(101, 0.1);
        let cfg = AdcConfig {
            phase_ns: 0.1,
            ..AdcConfig::default()
        };
        let c = clock_sample(&w, &cfg).unwrap();
        // floor((10 - 0.1) · 1) + 1 = 10 ticks
        assert_eq!(c.samples, (0..10).map(|i| (10 * i + 1) as f64).collect::<Vec<_>>());
    }

    #[test]
    fn clock_faster_than_source_is_rejected() {
        let w = ramp(10, 1.0);
        assert!(matches!(clock_sample(&w, &AdcConfig::default().with_clock(2.0)), Err(Error::Config(_))));
    }

    impl AdcConfig {
        fn with_clock(mut self, ghz: f64) -> Self {
            self.clock_ghz = ghz;
            self
        }
    }

    #[test]
    fn quantizer_endpoints_midpoint_and_clamp() {
        let cfg = AdcConfig::default();
        let calib = Waveform::new(1.0, vec![-1.0, 3.0]).unwrap();
        let w = Waveform::new(1.0, vec![-1.0, 3.0, 1.0, 7.0, -5.0]).unwrap();
        let q = quantize(&w, &cfg, Some(&calib)).unwrap();
        assert_eq!(q.codes, vec![0, 255, 128, 255, 0]);
    }

    #[test]
    fn degenerate_range_is_an_error() {
        let w = Waveform::new(1.0, vec![2.0; 5]).unwrap();
        assert!(matches!(quantize(&w, &AdcConfig::default(), None), Err(Error::Degenerate(_))));
    }

    #[test]
    fn mean_sigma_range() {
        let w = Waveform::new(1.0, vec![0.0, 2.0, 0.0, 2.0]).unwrap();
        let (lo, hi) = adc_range(&w, RangeMode::MeanSigma(3.0)).unwrap();
        assert!((lo + 2.0).abs() < 1e-12 && (hi - 4.0).abs() < 1e-12);
    }

    #[test]
    fn diff_examples() {
        let ext = ExtractorConfig::default();
        let s = diff_lsb(&SymbolSeq::new(vec![10, 15], 8).unwrap(), &ext).unwrap();
        assert_eq!(s.to_string(), "00101");
        let s = diff_lsb(&SymbolSeq::new(vec![200, 100], 8).unwrap(), &ext).unwrap();
        assert_eq!(s.to_string(), "11100");
        let s = diff_lsb(&SymbolSeq::new(vec![77; 9], 8).unwrap(), &ext).unwrap();
        assert_eq!(s, BitStream::zeros(40));
    }

    #[test]
    fn lsb_first_order_reverses_symbols() {
        let ext = ExtractorConfig {
            bit_order: BitOrder::LsbFirst,
            ..ExtractorConfig::default()
        };
        let s = diff_lsb(&SymbolSeq::new(vec![10, 15], 8).unwrap(), &ext).unwrap();
        assert_eq!(s.to_string(), "10100");
    }

    #[test]
    fn sawtooth_ramp_gives_unit_symbols() {
        let codes: Vec<u32> = (0..600u32).map(|i| i % 256).collect();
        let ext = ExtractorConfig {
            lsb_count: 8,
            ..ExtractorConfig::default()
        };
        let s = diff_lsb(&SymbolSeq::new(codes, 8).unwrap(), &ext).unwrap();
        assert_eq!(s.len(), 599 * 8);
        for chunk in 0..599 {
            let sym: String = (0..8).map(|b| if s.get(chunk * 8 + b) { '1' } else { '0' }).collect();
            assert_eq!(sym, "00000001", "symbol {chunk}");
        }
    }

    #[test]
    fn too_short_for_shift() {
        let ext = ExtractorConfig {
            shift_samples: 3,
            ..ExtractorConfig::default()
        };
        assert!(matches!(
            diff_lsb(&SymbolSeq::new(vec![1, 2, 3], 8).unwrap(), &ext),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn extract_key_composes_the_stages() {
        let w = Waveform::new(
            0.1,
            (0..10_001).map(|i| ((i as f64) * 0.37).sin() * (i as f64 * 0.011).cos()).collect(),
        )
        .unwrap();
        let adc = AdcConfig::default();
        let ext = ExtractorConfig::default();
        let key = extract_key(&w, &adc, &ext).unwrap();
        let clocked = clock_sample(&w, &adc).unwrap();
        let manual = diff_lsb(&quantize(&clocked, &adc, None).unwrap(), &ext).unwrap();
        assert_eq!(key, manual);
        assert_eq!(clocked.len(), 1001);
        assert_eq!(key.len(), 5000);
    }

    #[test]
    fn thousand_clocked_samples_give_4995_bits() {
        assert_eq!(key_length(1000, &ExtractorConfig::default()), 4995);
        assert_eq!(key_rate_gbps(&AdcConfig::default(), &ExtractorConfig::default()), 5.0);
    }

    proptest! {
        #[test]
        fn dc_offset_invariance(codes in proptest::collection::vec(0u32..256, 2..200), offset in 0u32..256) {
            let ext = ExtractorConfig::default();
            let a = diff_lsb(&SymbolSeq::new(codes.clone(), 8).unwrap(), &ext).unwrap();
            let shifted: Vec<u32> = codes.iter().map(|c| (c + offset) % 256).collect();
            let b = diff_lsb(&SymbolSeq::new(shifted, 8).unwrap(), &ext).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn rate_law(n in 2usize..300, shift in 1usize..4, lsb in 1u32..=8) {
            let ext = ExtractorConfig { shift_samples: shift, lsb_count: lsb, bit_order: BitOrder::MsbFirst };
            let codes: Vec<u32> = (0..n as u32).map(|i| (i * 7919) % 256).collect();
            match diff_lsb(&SymbolSeq::new(codes, 8).unwrap(), &ext) {
                Ok(s) => prop_assert_eq!(s.len(), (n - shift) * lsb as usize),
                Err(_) => prop_assert!(n <= shift),
            }
        }

        #[test]
        fn quantizer_is_monotone(mut xs in proptest::collection::vec(-10.0f64..10.0, 2..100)) {
            xs.sort_by(f64::total_cmp);
            let w = Waveform::new(1.0, xs).unwrap();
            if let Ok(q) = quantize(&w, &AdcConfig::default(), None) {
                prop_assert!(q.codes.windows(2).all(|p| p[0] <= p[1]));
            }
        }
    }
}
