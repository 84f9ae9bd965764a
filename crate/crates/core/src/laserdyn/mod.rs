//! Single-mode semiconductor laser rate equations.
//!
//! The state is the complex slowly varying field `E` (with `|E|^2` the
//! photon density in μm⁻³) and the carrier density `N` (μm⁻³):
//!
//! ```text
//! dE/dt = (1 + iα)/2 · [G(N, |E|²) − 1/τp] · E  (+ κ/τin · E(t − τF) · e^{−iφ0})
//! dN/dt = I/(qV) − N/τN − G(N, |E|²) · |E|²
//! G     = g (N − N0) / (1 + ε|E|²)
//! ```
//!
//! The bracketed feedback term is only present in [`integrate_feedback`].
//! Time is carried in nanoseconds internally; parameter names carry units.

mod autocorr;
mod integrate;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bits::BitStream;
use crate::error::{Error, Result};
use crate::waveform::Waveform;

pub use autocorr::{chaos_gate, intensity_autocorrelation, ChaosGate, CHAOS_GATE_LIMIT};
pub use integrate::{integrate_feedback, integrate_solitary, History, InitialState, StepConfig};

/// Elementary charge in coulombs.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
const PLANCK: f64 = 6.626_070_15e-34;
const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Initial field amplitude used to seed lasing (Eq. for E is homogeneous in E).
pub const SEED_FIELD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserParams {
    pub wavelength_nm: f64,
    /// Transparency carrier density N0 (μm⁻³).
    pub n0_per_um3: f64,
    /// Differential gain g (μm³/ns).
    pub gain_um3_per_ns: f64,
    pub tau_n_ns: f64,
    pub tau_p_ps: f64,
    /// Intracavity round-trip time; scales the feedback rate as κ/τin.
    pub tau_in_ps: f64,
    pub alpha: f64,
    /// Gain saturation ε (μm³).
    pub epsilon_um3: f64,
    pub volume_um3: f64,
    /// The quoted threshold. Informational only; physics uses [`Self::threshold_current_ma`].
    pub ith_nominal_ma: f64,
}

impl Default for LaserParams {
    fn default() -> Self {
        Self {
            wavelength_nm: 1550.0,
            n0_per_um3: 0.4e6,
            gain_um3_per_ns: 2.125e-3,
            tau_n_ns: 2.0,
            tau_p_ps: 2.0,
            tau_in_ps: 9.0,
            alpha: 5.5,
            epsilon_um3: 3e-5,
            volume_um3: 150.0,
            ith_nominal_ma: 12.0,
        }
    }
}

impl LaserParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("wavelength_nm", self.wavelength_nm),
            ("N0", self.n0_per_um3),
            ("g", self.gain_um3_per_ns),
            ("tauN", self.tau_n_ns),
            ("tauP", self.tau_p_ps),
            ("tauIn", self.tau_in_ps),
            ("V", self.volume_um3),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::parameter(format!("{name} must be positive and finite, got {v}")));
            }
        }
        // ε = 0 is the unsaturated limit and is allowed.
        if !(self.epsilon_um3.is_finite() && self.epsilon_um3 >= 0.0) {
            return Err(Error::parameter(format!(
                "epsilon must be non-negative, got {}",
                self.epsilon_um3
            )));
        }
        if !self.alpha.is_finite() {
            return Err(Error::parameter("alpha must be finite"));
        }
        Ok(())
    }

    pub fn tau_p_ns(&self) -> f64 {
        self.tau_p_ps * 1e-3
    }

    pub fn tau_in_ns(&self) -> f64 {
        self.tau_in_ps * 1e-3
    }

    /// Carrier density at which modal gain equals cavity loss.
    pub fn threshold_density(&self) -> f64 {
        self.n0_per_um3 + 1.0 / (self.gain_um3_per_ns * self.tau_p_ns())
    }

    /// Threshold current q·V·Nth/τN in mA, derived from the parameter set.
    pub fn threshold_current_ma(&self) -> f64 {
        self.threshold_density() / self.tau_n_ns * self.charge_per_density_ma()
    }

    /// Carrier injection rate I/(qV) in μm⁻³ ns⁻¹ for a current in mA.
    #[inline]
    pub fn pump_rate(&self, current_ma: f64) -> f64 {
        current_ma / self.charge_per_density_ma()
    }

    /// Current (mA) that injects one carrier per μm³ per ns.
    fn charge_per_density_ma(&self) -> f64 {
        // 1 μm⁻³ ns⁻¹ over V μm³ is V·1e9 carriers/s; times q gives A, ×1e3 for mA.
        ELEMENTARY_CHARGE * self.volume_um3 * 1e9 * 1e3
    }

    /// Single-facet output power (mW) per unit photon density, S·V·hν/(2τp).
    pub fn facet_power_mw_per_density(&self) -> f64 {
        let photon_energy = PLANCK * SPEED_OF_LIGHT / (self.wavelength_nm * 1e-9);
        self.volume_um3 * photon_energy / (2.0 * self.tau_p_ns() * 1e-9) * 1e3
    }
}

/// Injection current as a function of time (mA).
#[derive(Debug, Clone, PartialEq)]
pub enum DriveCurrent {
    Constant {
        current_ma: f64,
    },
    Sinusoid {
        bias_ma: f64,
        amplitude_ma: f64,
        freq_ghz: f64,
        phase_rad: f64,
    },
    /// NRZ levels with linear edges; holds `low_ma` after the last bit.
    Nrz {
        low_ma: f64,
        high_ma: f64,
        bitrate_gbps: f64,
        rise_ps: f64,
        bits: BitStream,
    },
}

pub const DEFAULT_SINE_FREQ_GHZ: f64 = 2.35;
pub const DEFAULT_NRZ_BITRATE_GBPS: f64 = 5.0;
pub const DEFAULT_RISE_PS: f64 = 20.0;

impl DriveCurrent {
    pub fn constant(current_ma: f64) -> Self {
        DriveCurrent::Constant { current_ma }
    }

    pub fn sinusoid(bias_ma: f64, amplitude_ma: f64) -> Self {
        DriveCurrent::Sinusoid {
            bias_ma,
            amplitude_ma,
            freq_ghz: DEFAULT_SINE_FREQ_GHZ,
            phase_rad: 0.0,
        }
    }

    pub fn nrz(bits: BitStream, low_ma: f64, high_ma: f64) -> Self {
        DriveCurrent::Nrz {
            low_ma,
            high_ma,
            bitrate_gbps: DEFAULT_NRZ_BITRATE_GBPS,
            rise_ps: DEFAULT_RISE_PS,
            bits,
        }
    }

    /// Bias 1.5× and modulation depth 0.3× the derived threshold at 2.35 GHz.
    pub fn chaos_default(params: &LaserParams) -> Self {
        let ith = params.threshold_current_ma();
        DriveCurrent::sinusoid(1.5 * ith, 0.3 * ith)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DriveCurrent::Constant { current_ma } => {
                if !(current_ma.is_finite() && *current_ma >= 0.0) {
                    return Err(Error::parameter(format!("drive current must be >= 0, got {current_ma}")));
                }
            }
            DriveCurrent::Sinusoid {
                bias_ma,
                amplitude_ma,
                freq_ghz,
                phase_rad,
            } => {
                if !(bias_ma.is_finite() && amplitude_ma.is_finite() && phase_rad.is_finite()) {
                    return Err(Error::parameter("sinusoid drive values must be finite"));
                }
                if *amplitude_ma < 0.0 || bias_ma - amplitude_ma < 0.0 {
                    return Err(Error::parameter(format!(
                        "sinusoid drive must stay >= 0 mA (bias {bias_ma}, amplitude {amplitude_ma})"
                    )));
                }
                if !(freq_ghz.is_finite() && *freq_ghz > 0.0) {
                    return Err(Error::parameter("sinusoid frequency must be positive"));
                }
            }
            DriveCurrent::Nrz {
                low_ma,
                high_ma,
                bitrate_gbps,
                rise_ps,
                ..
            } => {
                if !(low_ma.is_finite() && high_ma.is_finite() && *low_ma >= 0.0 && *high_ma >= 0.0) {
                    return Err(Error::parameter("NRZ drive levels must be finite and >= 0"));
                }
                if !(bitrate_gbps.is_finite() && *bitrate_gbps > 0.0) {
                    return Err(Error::parameter("NRZ bitrate must be positive"));
                }
                let tbit_ps = 1e3 / bitrate_gbps;
                if !(rise_ps.is_finite() && *rise_ps >= 0.0 && *rise_ps < tbit_ps) {
                    return Err(Error::parameter(format!(
                        "rise time {rise_ps} ps must lie in [0, {tbit_ps}) ps"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Current at time `t_ns` (mA).
    #[inline]
    pub fn current_ma(&self, t_ns: f64) -> f64 {
        match self {
            DriveCurrent::Constant { current_ma } => *current_ma,
            DriveCurrent::Sinusoid {
                bias_ma,
                amplitude_ma,
                freq_ghz,
                phase_rad,
            } => bias_ma + amplitude_ma * (2.0 * PI * freq_ghz * t_ns + phase_rad).sin(),
            DriveCurrent::Nrz {
                low_ma,
                high_ma,
                bitrate_gbps,
                rise_ps,
                bits,
            } => nrz_level(bits, t_ns, 1.0 / bitrate_gbps, rise_ps * 1e-3, *low_ma, *high_ma),
        }
    }
}

/// NRZ line level at `t_ns`. Each bit boundary starts a linear ramp of length
/// `rise_ns` from the previous level; before bit 0 and after the last bit
/// the line sits at `lo`.
pub(crate) fn nrz_level(bits: &BitStream, t_ns: f64, tbit_ns: f64, rise_ns: f64, lo: f64, hi: f64) -> f64 {
    let level = |j: i64| -> f64 {
        if j >= 0 && (j as usize) < bits.len() && bits.get(j as usize) {
            hi
        } else {
            lo
        }
    };
    if t_ns < 0.0 {
        return lo;
    }
    let j = (t_ns / tbit_ns).floor() as i64;
    let target = level(j);
    let into = t_ns - j as f64 * tbit_ns;
    if rise_ns > 0.0 && into < rise_ns {
        let prev = level(j - 1);
        prev + (target - prev) * (into / rise_ns)
    } else {
        target
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackParams {
    /// Fraction of the field returned per external round trip, in [0, 1).
    pub kappa: f64,
    pub tau_f_ns: f64,
    pub phi0_rad: f64,
}

impl Default for FeedbackParams {
    fn default() -> Self {
        Self {
            kappa: 0.3,
            tau_f_ns: 6.5,
            phi0_rad: 0.0,
        }
    }
}

impl FeedbackParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa.is_finite() && (0.0..1.0).contains(&self.kappa)) {
            return Err(Error::parameter(format!("kappa must lie in [0, 1), got {}", self.kappa)));
        }
        if !(self.tau_f_ns.is_finite() && self.tau_f_ns > 0.0) {
            return Err(Error::parameter(format!("feedback delay must be positive, got {}", self.tau_f_ns)));
        }
        if !self.phi0_rad.is_finite() {
            return Err(Error::parameter("feedback phase must be finite"));
        }
        Ok(())
    }
}

/// Field and carrier samples on a uniform grid starting at t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldTrace {
    pub dt_ns: f64,
    pub field: Vec<Complex64>,
    pub carriers: Vec<f64>,
}

impl FieldTrace {
    pub fn len(&self) -> usize {
        self.field.len()
    }

    pub fn is_empty(&self) -> bool {
        self.field.is_empty()
    }

    pub fn dt_ps(&self) -> f64 {
        self.dt_ns * 1e3
    }

    pub fn photon_density(&self, k: usize) -> f64 {
        self.field[k].norm_sqr()
    }

    pub fn last_state(&self) -> Option<InitialState> {
        Some(InitialState {
            field: *self.field.last()?,
            carriers: *self.carriers.last()?,
        })
    }
}

/// Zero-derivative solution `(N, S)` of the solitary equations for constant current.
///
/// Above threshold the clamped-gain branch is returned; otherwise `S = 0` and
/// `N = I·τN/(qV)`.
pub fn steady_state(params: &LaserParams, current_ma: f64) -> Result<(f64, f64)> {
    params.validate()?;
    if !(current_ma.is_finite() && current_ma >= 0.0) {
        return Err(Error::parameter(format!("current must be >= 0, got {current_ma}")));
    }
    let pump = params.pump_rate(current_ma);
    let tau_p = params.tau_p_ns();
    let nth = params.threshold_density();
    let excess = pump - nth / params.tau_n_ns;
    if excess <= 0.0 {
        return Ok((pump * params.tau_n_ns, 0.0));
    }
    // Gain clamping g(N−N0) = (1+εS)/τp makes N affine in S; the carrier
    // balance is then linear in S.
    let g_tp = params.gain_um3_per_ns * tau_p;
    let s = excess / (1.0 / tau_p + params.epsilon_um3 / (g_tp * params.tau_n_ns));
    let n = params.n0_per_um3 + (1.0 + params.epsilon_um3 * s) / g_tp;
    Ok((n, s))
}

/// Output power waveform `scale · |E|²` on the trace's time grid.
pub fn intensity(trace: &FieldTrace, scale: f64) -> Waveform {
    Waveform {
        dt_ns: trace.dt_ns,
        samples: trace.field.iter().map(|e| scale * e.norm_sqr()).collect(),
    }
}
