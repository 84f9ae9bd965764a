use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::waveform::Waveform;

/// Autocorrelation magnitude a chaotic trace must stay below on the gate window.
pub const CHAOS_GATE_LIMIT: f64 = 0.2;
pub const CHAOS_GATE_WINDOW_NS: (f64, f64) = (1.0, 5.0);

/// Mean-removed, variance-normalized autocorrelation for lags `0..=max_lag`
/// (biased estimator, so `|r| <= 1`).
pub fn intensity_autocorrelation(w: &Waveform, max_lag: usize) -> Result<Vec<f64>> {
    let n = w.len();
    if n < 2 || max_lag >= n {
        return Err(Error::input(format!(
            "autocorrelation up to lag {max_lag} needs more than {n} samples"
        )));
    }
    let mean = w.mean();
    let size = (n + max_lag + 1).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = w
        .samples
        .iter()
        .map(|&v| Complex::new(v - mean, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(size)
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex::new(c.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    let zero = buf[0].re;
    if !(zero > 0.0) {
        return Err(Error::degenerate("constant waveform has no autocorrelation"));
    }
    Ok(buf[..=max_lag].iter().map(|c| c.re / zero).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaosGate {
    /// Largest |autocorrelation| over the gate window.
    pub max_abs: f64,
    pub at_lag_ns: f64,
    pub pass: bool,
}

/// Checks that the intensity decorrelates: `|r(τ)| < 0.2` for all τ in [1, 5] ns.
pub fn chaos_gate(w: &Waveform) -> Result<ChaosGate> {
    let (lo_ns, hi_ns) = CHAOS_GATE_WINDOW_NS;
    let lo = (lo_ns / w.dt_ns).ceil() as usize;
    let hi = (hi_ns / w.dt_ns).floor() as usize;
    let r = match intensity_autocorrelation(w, hi) {
        Ok(r) => r,
        // A flat trace is maximally non-chaotic.
        Err(Error::Degenerate(_)) => {
            return Ok(ChaosGate {
                max_abs: 1.0,
                at_lag_ns: lo_ns,
                pass: false,
            })
        }
        Err(e) => return Err(e),
    };
    let (lag, max_abs) = (lo..=hi)
        .map(|l| (l, r[l].abs()))
        .fold((lo, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    Ok(ChaosGate {
        max_abs,
        at_lag_ns: lag as f64 * w.dt_ns,
        pass: max_abs < CHAOS_GATE_LIMIT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(x: &[f64], lag: usize) -> f64 {
        let m = x.iter().sum::<f64>() / x.len() as f64;
        let num: f64 = (0..x.len() - lag).map(|i| (x[i] - m) * (x[i + lag] - m)).sum();
        let den: f64 = x.iter().map(|v| (v - m) * (v - m)).sum();
        num / den
    }

    #[test]
    fn fft_matches_direct_sum() {
        let x: Vec<f64> = (0..257).map(|i| ((i * 37 % 101) as f64).sin() + 0.01 * i as f64).collect();
        let w = Waveform::new(0.1, x.clone()).unwrap();
        let r = intensity_autocorrelation(&w, 40).unwrap();
        for lag in 0..=40 {
            assert!((r[lag] - brute(&x, lag)).abs() < 1e-10, "lag {lag}");
        }
        assert!((r[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn periodic_signal_fails_gate() {
        let x: Vec<f64> = (0..20_000)
            .map(|i| (2.0 * std::f64::consts::PI * 2.35 * i as f64 * 0.01).sin())
            .collect();
        let gate = chaos_gate(&Waveform::new(0.01, x).unwrap()).unwrap();
        assert!(!gate.pass);
        assert!(gate.max_abs > 0.9);
    }

    #[test]
    fn constant_signal_fails_gate() {
        let gate = chaos_gate(&Waveform::new(0.01, vec![3.0; 1000]).unwrap()).unwrap();
        assert!(!gate.pass);
    }
}
