//! Alice → Bob back-to-back run: chaos key, XOR encryption, two NRZ-modulated
//! lasers over a WDM pair, and a receiver that samples, decides and decrypts.

use std::fmt::Write as _;

use super::{
    decision_samples, lowpass, modulate_ld, modulate_ld_padded, photodetect, q_from_samples, sample_decide,
    wdm_pair, LinkConfig,
};
use crate::bits::BitStream;
use crate::cipher::{prbs, xor_stream};
use crate::error::{Error, Result, StageExt};
use crate::laserdyn::LaserParams;
use crate::scenario::Scenario;
use crate::trng::extract_key;
use crate::waveform::Waveform;

/// Length of each half of the step pattern used to measure latency.
const CALIBRATION_BITS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct LinkReport {
    pub ber_key: f64,
    pub ber_cipher: f64,
    pub ber_plaintext: f64,
    pub errors_plaintext: usize,
    /// Q of the ciphertext laser's optical output.
    pub q_ld_output: f64,
    /// Q of the filtered ciphertext channel at the decision instants.
    pub q_sampled: f64,
    pub bits_run: usize,
}

impl LinkReport {
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "link.bitsRun={}", self.bits_run);
        let _ = writeln!(out, "link.berKey={}", self.ber_key);
        let _ = writeln!(out, "link.berCipher={}", self.ber_cipher);
        let _ = writeln!(out, "link.berPlaintext={}", self.ber_plaintext);
        let _ = writeln!(out, "link.errorsPlaintext={}", self.errors_plaintext);
        let _ = writeln!(out, "link.qLdOutput={}", self.q_ld_output);
        let _ = writeln!(out, "link.qSampled={}", self.q_sampled);
        out
    }
}

/// Everything a run produced, for plotting and inspection.
///
/// Optical and received waveforms are aligned to the transmitted bits by the
/// measured latency and cover exactly `bits_run` bit periods.
#[derive(Debug, Clone)]
pub struct LinkRun {
    pub report: LinkReport,
    /// Chaotic intensity at the scope rate, settle time removed.
    pub chaos: Waveform,
    pub key: BitStream,
    pub plaintext: BitStream,
    pub ciphertext: BitStream,
    pub ld_key: Waveform,
    pub ld_cipher: Waveform,
    pub rx_key: Waveform,
    pub rx_cipher: Waveform,
    pub recovered_key: BitStream,
    pub recovered_cipher: BitStream,
    pub decrypted: BitStream,
    /// Response delay of the laser alone and of laser + receiver filter.
    pub latency_ld_ns: f64,
    pub latency_rx_ns: f64,
}

/// Fault injection for tests and demonstrations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunHooks {
    /// Positions flipped in the recovered key before decryption.
    pub key_flips: Vec<usize>,
}

/// Delay (ns) from the middle of a drive-current edge to the middle of the
/// response, optionally through the photodetector and receiver filter.
///
/// Measured on a zeros→ones step with the link's own drive levels.
pub fn measure_latency(params: &LaserParams, link: &LinkConfig, filtered: bool) -> Result<f64> {
    let mut bits = BitStream::zeros(CALIBRATION_BITS);
    bits.extend_from(&BitStream::from_bools(&[true; CALIBRATION_BITS]));
    let (lo, hi) = link.drive_levels_ma(params);
    let mut w = modulate_ld(&bits, params, link, lo, hi)?;
    if filtered {
        let quiet = LinkConfig {
            noise_sigma: 0.0,
            ..link.clone()
        };
        w = lowpass(&photodetect(&w, &quiet)?, link.lpf_order, link.lpf_cutoff_ghz)?;
    }
    let tbit = link.bit_period_ns();
    let edge = (CALIBRATION_BITS as f64 * tbit / w.dt_ns).round() as usize;
    let per_bit = (tbit / w.dt_ns).round() as usize;
    let low = w.samples[edge.saturating_sub(1)];
    let tail = &w.samples[w.len() - 4 * per_bit..];
    let high = tail.iter().sum::<f64>() / tail.len() as f64;
    if !(high > low) {
        return Err(Error::degenerate("laser output does not rise on a 0→1 step"));
    }
    let mid = 0.5 * (low + high);
    let k = (edge..w.len())
        .find(|&k| w.samples[k] >= mid)
        .ok_or_else(|| Error::degenerate("step response never crosses its midpoint"))?;
    // Interpolate between the straddling samples.
    let t_cross = if k > 0 && w.samples[k] > w.samples[k - 1] {
        let (a, b) = (w.samples[k - 1], w.samples[k]);
        ((k - 1) as f64 + (mid - a) / (b - a)) * w.dt_ns
    } else {
        k as f64 * w.dt_ns
    };
    let t_edge = CALIBRATION_BITS as f64 * tbit + 0.5 * link.rise_ps * 1e-3;
    Ok((t_cross - t_edge).max(0.0))
}

/// Drops the first `latency_ns` and keeps `nbits` bit periods: the ideal
/// recovered clock for a receiver with that delay.
pub fn align(w: &Waveform, latency_ns: f64, nbits: usize, bitrate_gbps: f64) -> Result<Waveform> {
    let shift = (latency_ns / w.dt_ns).round() as usize;
    let len = (nbits as f64 / bitrate_gbps / w.dt_ns).round() as usize;
    if shift + len > w.len() {
        return Err(Error::input(format!(
            "waveform of {} samples cannot hold {nbits} bits after a {shift}-sample shift",
            w.len()
        )));
    }
    Ok(w.slice(shift, shift + len))
}

pub fn run_end_to_end(scn: &Scenario) -> Result<LinkRun> {
    run_end_to_end_with(scn, &RunHooks::default())
}

pub fn run_end_to_end_with(scn: &Scenario, hooks: &RunHooks) -> Result<LinkRun> {
    scn.validate().stage("config")?;
    let link = &scn.link;
    let nbits = scn.run.plaintext_bits;
    if nbits == 0 {
        return Err(Error::config("plaintext must hold at least one bit")).stage("config");
    }

    // Enough clocked samples for the key, plus one clock period of margin.
    let clocked = nbits.div_ceil(scn.extractor.lsb_count as usize) + scn.extractor.shift_samples;
    let duration = scn.adc.phase_ns + (clocked as f64 + 1.0) / scn.adc.clock_ghz;
    let chaos = scn.chaos_waveform(duration, 1e3 / scn.chaos.scope_ghz).stage("chaos")?;

    let key = extract_key(&chaos, &scn.adc, &scn.extractor).stage("extract_key")?;
    let plaintext = prbs(&scn.prbs, nbits).stage("prbs")?;
    let ciphertext = xor_stream(&plaintext, &key).stage("encrypt")?;
    let key = key.truncated(nbits);

    let latency_ld = measure_latency(&scn.laser, link, false).stage("calibrate")?;
    let latency_rx = measure_latency(&scn.laser, link, true).stage("calibrate")?;
    let tbit = link.bit_period_ns();
    let tail_bits = (latency_rx.max(latency_ld) / tbit).ceil() as usize + 2;

    let (lo, hi) = link.drive_levels_ma(&scn.laser);
    let ld1 = modulate_ld_padded(&key, tail_bits, &scn.laser, link, lo, hi).stage("modulate_key")?;
    let ld2 = modulate_ld_padded(&ciphertext, tail_bits, &scn.laser, link, lo, hi).stage("modulate_cipher")?;

    let (opt1, opt2) = wdm_pair(&ld1, &ld2, link.crosstalk).stage("wdm")?;
    let pd2_link = LinkConfig {
        noise_seed: link.noise_seed.wrapping_add(1),
        ..link.clone()
    };
    let v1 = photodetect(&opt1, link).stage("photodetect")?;
    let v2 = photodetect(&opt2, &pd2_link).stage("photodetect")?;
    let f1 = lowpass(&v1, link.lpf_order, link.lpf_cutoff_ghz).stage("lowpass")?;
    let f2 = lowpass(&v2, link.lpf_order, link.lpf_cutoff_ghz).stage("lowpass")?;
    let rx_key = align(&f1, latency_rx, nbits, link.bitrate_gbps).stage("align")?;
    let rx_cipher = align(&f2, latency_rx, nbits, link.bitrate_gbps).stage("align")?;

    let recovered_key =
        sample_decide(&rx_key, link.bitrate_gbps, link.sample_phase, link.threshold_mode).stage("decide")?;
    let recovered_cipher =
        sample_decide(&rx_cipher, link.bitrate_gbps, link.sample_phase, link.threshold_mode).stage("decide")?;

    let mut used_key = recovered_key.clone();
    for &i in &hooks.key_flips {
        if i >= used_key.len() {
            return Err(Error::input(format!("key flip at {i} beyond {} bits", used_key.len()))).stage("hooks");
        }
        used_key.flip(i);
    }
    let decrypted = xor_stream(&recovered_cipher, &used_key).stage("decrypt")?;

    let ld_key = align(&ld1, latency_ld, nbits, link.bitrate_gbps).stage("align")?;
    let ld_cipher = align(&ld2, latency_ld, nbits, link.bitrate_gbps).stage("align")?;
    let q = |w: &Waveform| -> Result<f64> {
        q_from_samples(&decision_samples(w, link.bitrate_gbps, link.sample_phase)?, &ciphertext)
    };
    let q_ld_output = q(&ld_cipher).stage("q_factor")?;
    let q_sampled = q(&rx_cipher).stage("q_factor")?;

    let (_, ber_key) = super::ber(&key, &recovered_key).stage("ber")?;
    let (_, ber_cipher) = super::ber(&ciphertext, &recovered_cipher).stage("ber")?;
    let (errors_plaintext, ber_plaintext) = super::ber(&plaintext, &decrypted).stage("ber")?;

    Ok(LinkRun {
        report: LinkReport {
            ber_key,
            ber_cipher,
            ber_plaintext,
            errors_plaintext,
            q_ld_output,
            q_sampled,
            bits_run: nbits,
        },
        chaos,
        key,
        plaintext,
        ciphertext,
        ld_key,
        ld_cipher,
        rx_key,
        rx_cipher,
        recovered_key,
        recovered_cipher,
        decrypted,
        latency_ld_ns: latency_ld,
        latency_rx_ns: latency_rx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Scenario {
        let mut s = Scenario::default();
        s.run.plaintext_bits = 400;
        s
    }

    #[test]
    fn latency_is_positive_and_filter_adds_delay() {
        let p = LaserParams::default();
        let link = LinkConfig::default();
        let ld = measure_latency(&p, &link, false).unwrap();
        let rx = measure_latency(&p, &link, true).unwrap();
        assert!(ld > 0.0 && ld < 0.1, "{ld}");
        // A 4th-order Butterworth at 3.75 GHz delays by roughly 0.1 ns.
        assert!(rx - ld > 0.07 && rx - ld < 0.15, "{ld} {rx}");
    }

    #[test]
    fn short_run_is_error_free() {
        let run = run_end_to_end(&small()).unwrap();
        assert_eq!(run.report.errors_plaintext, 0);
        assert_eq!(run.report.ber_key, 0.0);
        assert_eq!(run.decrypted, run.plaintext);
        assert_eq!(run.rx_cipher.len(), 400 * 400);
    }

    #[test]
    fn stage_tags_are_attached() {
        let mut s = small();
        s.prbs.seed = 0;
        let err = run_end_to_end(&s).unwrap_err();
        assert!(matches!(err, Error::Stage { stage: "config", .. }), "{err}");
        assert!(matches!(err.root(), Error::Config(_)));
    }

    #[test]
    fn flip_outside_key_is_rejected() {
        let hooks = RunHooks { key_flips: vec![400] };
        let err = run_end_to_end_with(&small(), &hooks).unwrap_err();
        assert!(matches!(err.root(), Error::Input(_)));
    }
}
