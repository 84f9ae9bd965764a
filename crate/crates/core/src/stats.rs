//! A small randomness battery for extracted key streams: frequency (monobit),
//! runs, lag autocorrelation and k-bit symbol entropy. Tests pass at
//! significance 0.01; the entropy gate is [`ENTROPY_GATE`] bits per 5-bit symbol.

use std::fmt::Write as _;

use statrs::function::erf::erfc;

use crate::bits::BitStream;
use crate::error::{Error, Result};

pub const SIGNIFICANCE: f64 = 0.01;
pub const MIN_BITS: usize = 100;
pub const SYMBOL_BITS: u32 = 5;
pub const ENTROPY_GATE: f64 = 4.9;

/// `(z, p)` with `z = (2·ones − n)/√n`, `p = erfc(|z|/√2)`.
pub fn monobit(bits: &BitStream) -> Result<(f64, f64)> {
    let n = bits.len();
    if n < MIN_BITS {
        return Err(Error::input(format!("monobit needs at least {MIN_BITS} bits, got {n}")));
    }
    let ones = bits.count_ones() as f64;
    let z = (2.0 * ones - n as f64) / (n as f64).sqrt();
    Ok((z, erfc(z.abs() / std::f64::consts::SQRT_2)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunsOutcome {
    Tested { runs: usize, p: f64 },
    /// The ones proportion is too far from 1/2 for the runs statistic to apply.
    NotApplicable { proportion: f64 },
}

/// Total-runs test with the usual frequency prefilter.
pub fn runs(bits: &BitStream) -> Result<RunsOutcome> {
    let n = bits.len();
    if n < MIN_BITS {
        return Err(Error::input(format!("runs test needs at least {MIN_BITS} bits, got {n}")));
    }
    let nf = n as f64;
    let pi = bits.count_ones() as f64 / nf;
    if (pi - 0.5).abs() >= 2.0 / nf.sqrt() {
        return Ok(RunsOutcome::NotApplicable { proportion: pi });
    }
    let mut count = 1usize;
    let mut prev = bits.get(0);
    for b in bits.iter().skip(1) {
        if b != prev {
            count += 1;
            prev = b;
        }
    }
    let expect = 2.0 * nf * pi * (1.0 - pi);
    let p = erfc((count as f64 - expect).abs() / (2.0 * (2.0 * nf).sqrt() * pi * (1.0 - pi)));
    Ok(RunsOutcome::Tested { runs: count, p })
}

/// Pearson correlation between `b[i]` and `b[i + lag]`.
pub fn autocorr(bits: &BitStream, lag: usize) -> Result<f64> {
    let n = bits.len();
    if n <= lag + 1 {
        return Err(Error::input(format!("autocorrelation at lag {lag} needs more than {} bits", lag + 1)));
    }
    let m = n - lag;
    let (mut sx, mut sy, mut sxy) = (0u64, 0u64, 0u64);
    for i in 0..m {
        let x = bits.get(i) as u64;
        let y = bits.get(i + lag) as u64;
        sx += x;
        sy += y;
        sxy += x & y;
    }
    // Bits are 0/1, so Σx² = Σx.
    let mf = m as f64;
    let (sx, sy, sxy) = (sx as f64, sy as f64, sxy as f64);
    let cov = sxy - sx * sy / mf;
    let vx = sx - sx * sx / mf;
    let vy = sy - sy * sy / mf;
    if vx <= 0.0 || vy <= 0.0 {
        return Err(Error::degenerate("constant stream has undefined correlation"));
    }
    Ok((cov / (vx * vy).sqrt()).clamp(-1.0, 1.0))
}

/// Two-sided p-value of a sample correlation under independence, `r·√n ~ N(0,1)`.
pub fn autocorr_p(r: f64, n: usize) -> f64 {
    erfc(r.abs() * (n as f64).sqrt() / std::f64::consts::SQRT_2)
}

/// Empirical Shannon entropy (bits) of non-overlapping `k`-bit symbols; a
/// partial trailing symbol is dropped.
pub fn symbol_entropy(bits: &BitStream, k: u32) -> Result<f64> {
    if !(1..=16).contains(&k) {
        return Err(Error::config(format!("symbol width must be 1..=16, got {k}")));
    }
    let need = MIN_BITS << k;
    if bits.len() < need {
        return Err(Error::input(format!(
            "{k}-bit entropy needs at least {need} bits, got {}",
            bits.len()
        )));
    }
    let symbols = bits.len() / k as usize;
    let mut counts = vec![0u64; 1 << k];
    for s in 0..symbols {
        let mut v = 0usize;
        for b in 0..k as usize {
            v = (v << 1) | bits.get(s * k as usize + b) as usize;
        }
        counts[v] += 1;
    }
    let total = symbols as f64;
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    Ok(h.clamp(0.0, k as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass { statistic: f64, p: Option<f64> },
    Fail { statistic: f64, p: Option<f64> },
    NotApplicable(String),
    Error(String),
}

impl Outcome {
    fn judged(statistic: f64, p: Option<f64>, pass: bool) -> Self {
        if pass {
            Outcome::Pass { statistic, p }
        } else {
            Outcome::Fail { statistic, p }
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self, Outcome::Pass { .. })
    }

    pub fn statistic(&self) -> Option<f64> {
        match self {
            Outcome::Pass { statistic, .. } | Outcome::Fail { statistic, .. } => Some(*statistic),
            _ => None,
        }
    }

    pub fn p_value(&self) -> Option<f64> {
        match self {
            Outcome::Pass { p, .. } | Outcome::Fail { p, .. } => *p,
            _ => None,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Outcome::Pass { .. } => "pass",
            Outcome::Fail { .. } => "fail",
            Outcome::NotApplicable(_) => "not_applicable",
            Outcome::Error(_) => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub bits: usize,
    pub monobit: Outcome,
    pub runs: Outcome,
    pub autocorr_lag1: Outcome,
    /// Entropy per 5-bit symbol; the statistic is in bits.
    pub entropy: Outcome,
}

impl TestReport {
    pub fn all_passed(&self) -> bool {
        [&self.monobit, &self.runs, &self.autocorr_lag1, &self.entropy]
            .iter()
            .all(|o| o.passed())
    }

    /// Flat `key=value` lines.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "stats.bits={}", self.bits);
        for (name, o) in [
            ("monobit", &self.monobit),
            ("runs", &self.runs),
            ("autocorr_lag1", &self.autocorr_lag1),
            ("entropy5", &self.entropy),
        ] {
            let _ = writeln!(out, "stats.{name}.result={}", o.label());
            if let Some(s) = o.statistic() {
                let _ = writeln!(out, "stats.{name}.statistic={s}");
            }
            if let Some(p) = o.p_value() {
                let _ = writeln!(out, "stats.{name}.p={p}");
            }
            if let Outcome::NotApplicable(why) | Outcome::Error(why) = o {
                let _ = writeln!(out, "stats.{name}.reason={why}");
            }
        }
        let _ = writeln!(out, "stats.all_passed={}", self.all_passed());
        out
    }
}

/// Runs the whole battery. Per-test failures and errors are recorded in the
/// report rather than returned.
pub fn full_report(bits: &BitStream) -> TestReport {
    let monobit = match monobit(bits) {
        Ok((z, p)) => Outcome::judged(z, Some(p), p >= SIGNIFICANCE),
        Err(e) => Outcome::Error(e.to_string()),
    };
    let runs = match runs(bits) {
        Ok(RunsOutcome::Tested { runs, p }) => Outcome::judged(runs as f64, Some(p), p >= SIGNIFICANCE),
        Ok(RunsOutcome::NotApplicable { proportion }) => {
            Outcome::NotApplicable(format!("ones proportion {proportion} fails the frequency prefilter"))
        }
        Err(e) => Outcome::Error(e.to_string()),
    };
    let autocorr_lag1 = match autocorr(bits, 1) {
        Ok(r) => {
            let p = autocorr_p(r, bits.len() - 1);
            Outcome::judged(r, Some(p), p >= SIGNIFICANCE)
        }
        Err(e) => Outcome::Error(e.to_string()),
    };
    let entropy = match symbol_entropy(bits, SYMBOL_BITS) {
        Ok(h) => Outcome::judged(h, None, h >= ENTROPY_GATE),
        Err(e) => Outcome::Error(e.to_string()),
    };
    TestReport {
        bits: bits.len(),
        monobit,
        runs,
        autocorr_lag1,
        entropy,
    }
}
