//! Scenario configuration: every knob of the simulation chain with its default.
//!
//! Files are sectioned `key = value` text (a TOML subset). Physical keys carry
//! their unit in the name, unknown keys are rejected and every key may be
//! omitted:
//!
//! ```text
//! [laser]
//! tauP_ps = 2.0
//! [feedback]
//! kappa = 0.3
//! tauF_ns = 6.5
//! [link]
//! noise_sigma_V = 0.0
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cipher::PrbsConfig;
use crate::error::{Error, Result};
use crate::laserdyn::{
    integrate_feedback, intensity, DriveCurrent, FeedbackParams, History, InitialState, LaserParams, StepConfig,
    SEED_FIELD,
};
use crate::phy::{LinkConfig, ThresholdMode};
use crate::trng::{AdcConfig, BitOrder, ExtractorConfig, RangeMode};
use crate::waveform::Waveform;

/// Chaotic transmitter laser: sinusoidal drive plus delayed feedback.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosConfig {
    pub bias_factor: f64,
    pub amplitude_factor: f64,
    pub freq_ghz: f64,
    pub phase_rad: f64,
    pub dt_ps: f64,
    /// Length of a standalone chaos trace.
    pub duration_ns: f64,
    /// Initial transient discarded before any use of the trace.
    pub settle_ns: f64,
    /// Output resolution of a standalone chaos trace.
    pub record_ps: f64,
    /// Recording rate of the trace fed to the key extractor in a link run.
    pub scope_ghz: f64,
    /// Perturbs the seed field amplitude; different seeds give different
    /// chaotic trajectories.
    pub seed: u64,
}

impl Default for ChaosConfig {
    fn default() -> Self {
        Self {
            bias_factor: 1.5,
            amplitude_factor: 0.3,
            freq_ghz: 2.35,
            phase_rad: 0.0,
            dt_ps: 0.2,
            duration_ns: 200.0,
            settle_ns: 50.0,
            record_ps: 0.2,
            scope_ghz: 10.0,
            seed: 0,
        }
    }
}

impl ChaosConfig {
    pub fn drive(&self, params: &LaserParams) -> DriveCurrent {
        let ith = params.threshold_current_ma();
        DriveCurrent::Sinusoid {
            bias_ma: self.bias_factor * ith,
            amplitude_ma: self.amplitude_factor * ith,
            freq_ghz: self.freq_ghz,
            phase_rad: self.phase_rad,
        }
    }

    pub fn initial_state(&self, params: &LaserParams) -> InitialState {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let u: f64 = rng.random();
        InitialState::new((SEED_FIELD * (1.0 + u)).into(), params.threshold_density())
    }

    /// Integration steps per recorded sample for a recording interval.
    pub fn stride_for(&self, record_ps: f64) -> Result<usize> {
        let ratio = record_ps / self.dt_ps;
        let stride = ratio.round();
        if stride < 1.0 || (ratio - stride).abs() > 1e-6 * ratio {
            return Err(Error::config(format!(
                "recording interval {record_ps} ps is not a whole number of {} ps steps",
                self.dt_ps
            )));
        }
        Ok(stride as usize)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub plaintext_bits: usize,
    pub eye_time_bins: usize,
    pub eye_amp_bins: usize,
    pub out_dir: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            plaintext_bits: 10_000,
            eye_time_bins: 128,
            eye_amp_bins: 96,
            out_dir: "out".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    pub laser: LaserParams,
    pub feedback: FeedbackParams,
    pub chaos: ChaosConfig,
    pub adc: AdcConfig,
    pub extractor: ExtractorConfig,
    pub prbs: PrbsConfig,
    pub link: LinkConfig,
    pub run: RunConfig,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.laser.validate()?;
        self.feedback.validate()?;
        self.chaos.drive(&self.laser).validate()?;
        self.chaos.stride_for(self.chaos.record_ps)?;
        if !(self.chaos.scope_ghz > 0.0) {
            return Err(Error::config("scope rate must be positive"));
        }
        self.chaos.stride_for(1e3 / self.chaos.scope_ghz)?;
        if !(self.chaos.duration_ns > 0.0 && self.chaos.settle_ns >= 0.0) {
            return Err(Error::config("chaos duration must be positive and settle time >= 0"));
        }
        self.adc.validate()?;
        self.extractor.validate(self.adc.bits)?;
        self.prbs.validate()?;
        self.link.validate()?;
        let key_rate = self.adc.clock_ghz * self.extractor.lsb_count as f64;
        if (key_rate - self.link.bitrate_gbps).abs() > 1e-9 * key_rate {
            return Err(Error::config(format!(
                "key rate {key_rate} Gbit/s differs from the line rate {} Gbit/s",
                self.link.bitrate_gbps
            )));
        }
        if self.run.eye_time_bins == 0 || self.run.eye_amp_bins == 0 {
            return Err(Error::config("eye bins must be positive"));
        }
        Ok(())
    }

    /// Chaotic intensity (mW) after the settle time: `duration_ns / record_ps`
    /// samples, one every `record_ps`.
    pub fn chaos_waveform(&self, duration_ns: f64, record_ps: f64) -> Result<Waveform> {
        if !(duration_ns.is_finite() && duration_ns > 0.0) {
            return Err(Error::config(format!("trace duration must be positive, got {duration_ns} ns")));
        }
        let stride = self.chaos.stride_for(record_ps)?;
        let grid = StepConfig::new(self.chaos.settle_ns + duration_ns, self.chaos.dt_ps).with_stride(stride);
        let history = History::Constant(self.chaos.initial_state(&self.laser));
        let trace = integrate_feedback(&self.laser, &self.feedback, &self.chaos.drive(&self.laser), grid, &history)?;
        let w = intensity(&trace, self.laser.facet_power_mw_per_density()).skip_ns(self.chaos.settle_ns);
        let n = ((duration_ns / (record_ps * 1e-3)).round() as usize).min(w.len());
        Ok(w.slice(0, n))
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        let scn = file.into_scenario()?;
        scn.validate()?;
        Ok(scn)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&ScenarioFile::from_scenario(self)).expect("scenario serializes")
    }

    /// Overrides every RNG-dependent seed.
    pub fn apply_seed(&mut self, seed: u64) {
        self.chaos.seed = seed;
        self.link.noise_seed = seed;
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ScenarioFile {
    laser: LaserSection,
    feedback: FeedbackSection,
    chaos: ChaosSection,
    adc: AdcSection,
    extractor: ExtractorSection,
    prbs: PrbsSection,
    link: LinkSection,
    run: RunSection,
}

impl Default for ScenarioFile {
    fn default() -> Self {
        Self::from_scenario(&Scenario::default())
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct LaserSection {
    wavelength_nm: f64,
    #[serde(rename = "N0_per_um3")]
    n0: f64,
    #[serde(rename = "g_um3_per_ns")]
    g: f64,
    #[serde(rename = "tauN_ns")]
    tau_n: f64,
    #[serde(rename = "tauP_ps")]
    tau_p: f64,
    #[serde(rename = "tauIn_ps")]
    tau_in: f64,
    alpha: f64,
    #[serde(rename = "eps_um3")]
    eps: f64,
    #[serde(rename = "V_um3")]
    volume: f64,
    #[serde(rename = "Ith_nominal_mA")]
    ith_nominal: f64,
}

impl Default for LaserSection {
    fn default() -> Self {
        LaserParams::default().into()
    }
}

impl From<LaserParams> for LaserSection {
    fn from(p: LaserParams) -> Self {
        Self {
            wavelength_nm: p.wavelength_nm,
            n0: p.n0_per_um3,
            g: p.gain_um3_per_ns,
            tau_n: p.tau_n_ns,
            tau_p: p.tau_p_ps,
            tau_in: p.tau_in_ps,
            alpha: p.alpha,
            eps: p.epsilon_um3,
            volume: p.volume_um3,
            ith_nominal: p.ith_nominal_ma,
        }
    }
}

impl From<&LaserSection> for LaserParams {
    fn from(s: &LaserSection) -> Self {
        Self {
            wavelength_nm: s.wavelength_nm,
            n0_per_um3: s.n0,
            gain_um3_per_ns: s.g,
            tau_n_ns: s.tau_n,
            tau_p_ps: s.tau_p,
            tau_in_ps: s.tau_in,
            alpha: s.alpha,
            epsilon_um3: s.eps,
            volume_um3: s.volume,
            ith_nominal_ma: s.ith_nominal,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FeedbackSection {
    kappa: f64,
    #[serde(rename = "tauF_ns")]
    tau_f: f64,
    phi0_rad: f64,
}

impl Default for FeedbackSection {
    fn default() -> Self {
        let f = FeedbackParams::default();
        Self {
            kappa: f.kappa,
            tau_f: f.tau_f_ns,
            phi0_rad: f.phi0_rad,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ChaosSection {
    bias_x_ith: f64,
    amplitude_x_ith: f64,
    #[serde(rename = "freq_GHz")]
    freq: f64,
    phase_rad: f64,
    dt_ps: f64,
    duration_ns: f64,
    settle_ns: f64,
    record_ps: f64,
    #[serde(rename = "scope_GHz")]
    scope: f64,
    seed: u64,
}

impl Default for ChaosSection {
    fn default() -> Self {
        (&ChaosConfig::default()).into()
    }
}

impl From<&ChaosConfig> for ChaosSection {
    fn from(c: &ChaosConfig) -> Self {
        Self {
            bias_x_ith: c.bias_factor,
            amplitude_x_ith: c.amplitude_factor,
            freq: c.freq_ghz,
            phase_rad: c.phase_rad,
            dt_ps: c.dt_ps,
            duration_ns: c.duration_ns,
            settle_ns: c.settle_ns,
            record_ps: c.record_ps,
            scope: c.scope_ghz,
            seed: c.seed,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct AdcSection {
    bits: u32,
    #[serde(rename = "clock_GHz")]
    clock: f64,
    phase_ns: f64,
    /// `minmax` or `meansigma`.
    range: String,
    sigma_k: f64,
}

impl Default for AdcSection {
    fn default() -> Self {
        (&AdcConfig::default()).into()
    }
}

impl From<&AdcConfig> for AdcSection {
    fn from(a: &AdcConfig) -> Self {
        let (range, sigma_k) = match a.range {
            RangeMode::MinMax => ("minmax", 3.0),
            RangeMode::MeanSigma(k) => ("meansigma", k),
        };
        Self {
            bits: a.bits,
            clock: a.clock_ghz,
            phase_ns: a.phase_ns,
            range: range.into(),
            sigma_k,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ExtractorSection {
    shift_samples: usize,
    lsb_count: u32,
    /// `msb` or `lsb` first within each kept symbol.
    bit_order: String,
}

impl Default for ExtractorSection {
    fn default() -> Self {
        let e = ExtractorConfig::default();
        Self {
            shift_samples: e.shift_samples,
            lsb_count: e.lsb_count,
            bit_order: "msb".into(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct PrbsSection {
    order: u32,
    /// Empty selects the tabulated maximal-length taps for `order`.
    taps: Vec<u32>,
    seed: u64,
}

impl Default for PrbsSection {
    fn default() -> Self {
        let p = PrbsConfig::default();
        Self {
            order: p.order,
            taps: p.taps,
            seed: p.seed,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct LinkSection {
    #[serde(rename = "bitrate_Gbps")]
    bitrate: f64,
    lpf_order: usize,
    #[serde(rename = "lpf_cutoff_GHz")]
    lpf_cutoff: f64,
    #[serde(rename = "pd_responsivity_V_per_mW")]
    responsivity: f64,
    #[serde(rename = "noise_sigma_V")]
    noise_sigma: f64,
    noise_seed: u64,
    sample_phase: f64,
    /// `twocluster` or `midpoint`.
    threshold: String,
    crosstalk: f64,
    drive_low_x_ith: f64,
    drive_high_x_ith: f64,
    rise_ps: f64,
    ld_step_ps: f64,
    preamble_bits: usize,
}

impl Default for LinkSection {
    fn default() -> Self {
        (&LinkConfig::default()).into()
    }
}

impl From<&LinkConfig> for LinkSection {
    fn from(l: &LinkConfig) -> Self {
        Self {
            bitrate: l.bitrate_gbps,
            lpf_order: l.lpf_order,
            lpf_cutoff: l.lpf_cutoff_ghz,
            responsivity: l.pd_responsivity,
            noise_sigma: l.noise_sigma,
            noise_seed: l.noise_seed,
            sample_phase: l.sample_phase,
            threshold: match l.threshold_mode {
                ThresholdMode::TwoCluster => "twocluster",
                ThresholdMode::Midpoint => "midpoint",
            }
            .into(),
            crosstalk: l.crosstalk,
            drive_low_x_ith: l.drive_low_factor,
            drive_high_x_ith: l.drive_high_factor,
            rise_ps: l.rise_ps,
            ld_step_ps: l.ld_step_ps,
            preamble_bits: l.preamble_bits,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunSection {
    plaintext_bits: usize,
    eye_time_bins: usize,
    eye_amp_bins: usize,
    out_dir: String,
}

impl Default for RunSection {
    fn default() -> Self {
        let r = RunConfig::default();
        Self {
            plaintext_bits: r.plaintext_bits,
            eye_time_bins: r.eye_time_bins,
            eye_amp_bins: r.eye_amp_bins,
            out_dir: r.out_dir,
        }
    }
}

impl ScenarioFile {
    fn from_scenario(s: &Scenario) -> Self {
        Self {
            laser: s.laser.into(),
            feedback: FeedbackSection {
                kappa: s.feedback.kappa,
                tau_f: s.feedback.tau_f_ns,
                phi0_rad: s.feedback.phi0_rad,
            },
            chaos: (&s.chaos).into(),
            adc: (&s.adc).into(),
            extractor: ExtractorSection {
                shift_samples: s.extractor.shift_samples,
                lsb_count: s.extractor.lsb_count,
                bit_order: match s.extractor.bit_order {
                    BitOrder::MsbFirst => "msb",
                    BitOrder::LsbFirst => "lsb",
                }
                .into(),
            },
            prbs: PrbsSection {
                order: s.prbs.order,
                taps: s.prbs.taps.clone(),
                seed: s.prbs.seed,
            },
            link: (&s.link).into(),
            run: RunSection {
                plaintext_bits: s.run.plaintext_bits,
                eye_time_bins: s.run.eye_time_bins,
                eye_amp_bins: s.run.eye_amp_bins,
                out_dir: s.run.out_dir.clone(),
            },
        }
    }

    fn into_scenario(self) -> Result<Scenario> {
        let range = match self.adc.range.to_ascii_lowercase().as_str() {
            "minmax" => RangeMode::MinMax,
            "meansigma" => RangeMode::MeanSigma(self.adc.sigma_k),
            other => return Err(Error::config(format!("unknown ADC range mode `{other}`"))),
        };
        let bit_order = match self.extractor.bit_order.to_ascii_lowercase().as_str() {
            "msb" => BitOrder::MsbFirst,
            "lsb" => BitOrder::LsbFirst,
            other => return Err(Error::config(format!("unknown bit order `{other}`"))),
        };
        let threshold_mode = match self.link.threshold.to_ascii_lowercase().as_str() {
            "twocluster" => ThresholdMode::TwoCluster,
            "midpoint" => ThresholdMode::Midpoint,
            other => return Err(Error::config(format!("unknown threshold mode `{other}`"))),
        };
        let taps = if self.prbs.taps.is_empty() {
            crate::cipher::maximal_taps(self.prbs.order)
                .ok_or_else(|| {
                    Error::config(format!("no tabulated taps for PRBS order {}; give `taps`", self.prbs.order))
                })?
                .to_vec()
        } else {
            self.prbs.taps
        };
        let c = self.chaos;
        let l = self.link;
        Ok(Scenario {
            laser: (&self.laser).into(),
            feedback: FeedbackParams {
                kappa: self.feedback.kappa,
                tau_f_ns: self.feedback.tau_f,
                phi0_rad: self.feedback.phi0_rad,
            },
            chaos: ChaosConfig {
                bias_factor: c.bias_x_ith,
                amplitude_factor: c.amplitude_x_ith,
                freq_ghz: c.freq,
                phase_rad: c.phase_rad,
                dt_ps: c.dt_ps,
                duration_ns: c.duration_ns,
                settle_ns: c.settle_ns,
                record_ps: c.record_ps,
                scope_ghz: c.scope,
                seed: c.seed,
            },
            adc: AdcConfig {
                bits: self.adc.bits,
                clock_ghz: self.adc.clock,
                phase_ns: self.adc.phase_ns,
                range,
            },
            extractor: ExtractorConfig {
                shift_samples: self.extractor.shift_samples,
                lsb_count: self.extractor.lsb_count,
                bit_order,
            },
            prbs: PrbsConfig {
                order: self.prbs.order,
                taps,
                seed: self.prbs.seed,
            },
            link: LinkConfig {
                bitrate_gbps: l.bitrate,
                lpf_order: l.lpf_order,
                lpf_cutoff_ghz: l.lpf_cutoff,
                pd_responsivity: l.responsivity,
                noise_sigma: l.noise_sigma,
                noise_seed: l.noise_seed,
                sample_phase: l.sample_phase,
                threshold_mode,
                crosstalk: l.crosstalk,
                drive_low_factor: l.drive_low_x_ith,
                drive_high_factor: l.drive_high_x_ith,
                rise_ps: l.rise_ps,
                ld_step_ps: l.ld_step_ps,
                preamble_bits: l.preamble_bits,
            },
            run: RunConfig {
                plaintext_bits: self.run.plaintext_bits,
                eye_time_bins: self.run.eye_time_bins,
                eye_amp_bins: self.run.eye_amp_bins,
                out_dir: self.run.out_dir,
            },
        })
    }
}
