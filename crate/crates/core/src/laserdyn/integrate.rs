//! Fixed-step RK4 for the rate equations, with an optional delayed-feedback term.

use num_complex::Complex64;

use super::{DriveCurrent, FeedbackParams, FieldTrace, LaserParams};
use crate::error::{Error, Result};

/// Time grid for an integration run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub duration_ns: f64,
    pub dt_ps: f64,
    /// Keep every `record_stride`-th step in the output trace (1 = all).
    pub record_stride: usize,
}

impl StepConfig {
    pub fn new(duration_ns: f64, dt_ps: f64) -> Self {
        Self {
            duration_ns,
            dt_ps,
            record_stride: 1,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.record_stride = stride;
        self
    }

    pub fn dt_ns(&self) -> f64 {
        self.dt_ps * 1e-3
    }

    /// Number of steps, `ceil(duration / dt)`.
    pub fn steps(&self) -> usize {
        let ratio = self.duration_ns / self.dt_ns();
        // Absorb representation error in ratios such as 50 / 0.0005.
        (ratio - 1e-9 * ratio.max(1.0)).ceil().max(0.0) as usize
    }

    fn validate(&self, params: &LaserParams) -> Result<()> {
        if !(self.duration_ns.is_finite() && self.duration_ns > 0.0) {
            return Err(Error::config(format!("duration must be positive, got {} ns", self.duration_ns)));
        }
        if !(self.dt_ps.is_finite() && self.dt_ps > 0.0) {
            return Err(Error::config(format!("step must be positive, got {} ps", self.dt_ps)));
        }
        if self.dt_ps > params.tau_p_ps / 4.0 * (1.0 + 1e-12) {
            return Err(Error::config(format!(
                "step {} ps exceeds tauP/4 = {} ps",
                self.dt_ps,
                params.tau_p_ps / 4.0
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::config("record stride must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub field: Complex64,
    pub carriers: f64,
}

impl InitialState {
    pub fn new(field: Complex64, carriers: f64) -> Self {
        Self { field, carriers }
    }

    /// Weak seed field at the transparency-to-threshold carrier level.
    pub fn seeded(params: &LaserParams) -> Self {
        Self {
            field: Complex64::new(super::SEED_FIELD, 0.0),
            carriers: params.threshold_density(),
        }
    }
}

/// Field history on `[−τF, 0]` for the delayed term.
#[derive(Debug, Clone, PartialEq)]
pub enum History {
    /// The state is held constant over the whole delay window.
    Constant(InitialState),
    /// A trace whose last sample is the state at t = 0. Must use the same step
    /// and cover at least the delay.
    Trace(FieldTrace),
}

struct Derivs<'a> {
    params: &'a LaserParams,
    tau_p: f64,
    half_one_i_alpha: Complex64,
}

impl<'a> Derivs<'a> {
    fn new(params: &'a LaserParams) -> Self {
        Self {
            params,
            tau_p: params.tau_p_ns(),
            half_one_i_alpha: Complex64::new(0.5, 0.5 * params.alpha),
        }
    }

    #[inline(always)]
    fn eval(&self, e: Complex64, n: f64, pump: f64) -> (Complex64, f64) {
        let p = self.params;
        let s = e.norm_sqr();
        let gain = p.gain_um3_per_ns * (n - p.n0_per_um3) / (1.0 + p.epsilon_um3 * s);
        let de = self.half_one_i_alpha * (gain - 1.0 / self.tau_p) * e;
        let dn = pump - n / p.tau_n_ns - gain * s;
        (de, dn)
    }
}

struct Delay {
    /// Ring of the last `steps + 1` field values; slot `k mod len` holds step k.
    ring: Vec<Complex64>,
    coupling: Complex64,
}

impl Delay {
    #[inline(always)]
    fn at(&self, step: i64) -> Complex64 {
        let len = self.ring.len() as i64;
        self.ring[step.rem_euclid(len) as usize]
    }
}

/// Integrates the solitary-laser equations from `init`.
///
/// Returns `ceil(duration/dt) + 1` samples (fewer when `record_stride > 1`).
pub fn integrate_solitary(
    params: &LaserParams,
    drive: &DriveCurrent,
    grid: StepConfig,
    init: InitialState,
) -> Result<FieldTrace> {
    params.validate()?;
    drive.validate()?;
    grid.validate(params)?;
    run(params, drive, grid, init, None)
}

/// Integrates with Lang–Kobayashi delayed optical feedback.
///
/// The delay is rounded to a whole number of steps `D`. RK4 stages at the
/// step start and end read the stored field at steps `k − D` and `k − D + 1`;
/// the two midpoint stages use their average. With `kappa == 0` no feedback
/// arithmetic is performed, so the result is bitwise identical to
/// [`integrate_solitary`].
pub fn integrate_feedback(
    params: &LaserParams,
    feedback: &FeedbackParams,
    drive: &DriveCurrent,
    grid: StepConfig,
    history: &History,
) -> Result<FieldTrace> {
    params.validate()?;
    feedback.validate()?;
    drive.validate()?;
    grid.validate(params)?;

    let dt = grid.dt_ns();
    if feedback.tau_f_ns < dt {
        return Err(Error::config(format!(
            "feedback delay {} ns is shorter than one step ({dt} ns)",
            feedback.tau_f_ns
        )));
    }
    let delay_steps = (feedback.tau_f_ns / dt).round() as usize;

    let (init, ring) = match history {
        History::Constant(state) => (*state, vec![state.field; delay_steps + 1]),
        History::Trace(trace) => {
            if ((trace.dt_ns - dt) / dt).abs() > 1e-9 {
                return Err(Error::config(format!(
                    "history step {} ns does not match integration step {dt} ns",
                    trace.dt_ns
                )));
            }
            if trace.len() < delay_steps + 1 {
                return Err(Error::config(format!(
                    "history holds {} samples, delay needs {}",
                    trace.len(),
                    delay_steps + 1
                )));
            }
            let init = trace.last_state().expect("nonempty history");
            // Step j (−D..=0) goes to slot j mod (D+1).
            let len = delay_steps + 1;
            let tail = &trace.field[trace.len() - len..];
            let mut ring = vec![Complex64::new(0.0, 0.0); len];
            for (offset, e) in tail.iter().enumerate() {
                let step = offset as i64 - delay_steps as i64;
                ring[step.rem_euclid(len as i64) as usize] = *e;
            }
            (init, ring)
        }
    };

    if feedback.kappa == 0.0 {
        return run(params, drive, grid, init, None);
    }
    let coupling = Complex64::from_polar(feedback.kappa / params.tau_in_ns(), -feedback.phi0_rad);
    run(params, drive, grid, init, Some(Delay { ring, coupling }))
}

fn run(
    params: &LaserParams,
    drive: &DriveCurrent,
    grid: StepConfig,
    init: InitialState,
    mut delay: Option<Delay>,
) -> Result<FieldTrace> {
    if !(init.field.re.is_finite() && init.field.im.is_finite() && init.carriers.is_finite()) || init.carriers < 0.0 {
        return Err(Error::parameter("initial state must be finite with N >= 0"));
    }
    let dt = grid.dt_ns();
    let steps = grid.steps();
    let stride = grid.record_stride;
    let derivs = Derivs::new(params);

    let records = steps / stride + 1;
    let mut field = Vec::with_capacity(records);
    let mut carriers = Vec::with_capacity(records);
    field.push(init.field);
    carriers.push(init.carriers);

    let mut e = init.field;
    let mut n = init.carriers;
    let half = 0.5 * dt;
    let sixth = dt / 6.0;

    for k in 0..steps {
        let t = k as f64 * dt;
        let pump0 = params.pump_rate(drive.current_ma(t));
        let pump_mid = params.pump_rate(drive.current_ma(t + half));
        let pump1 = params.pump_rate(drive.current_ma(t + dt));

        let (k1e, k1n, k2e, k2n, k3e, k3n, k4e, k4n);
        match &delay {
            None => {
                (k1e, k1n) = derivs.eval(e, n, pump0);
                (k2e, k2n) = derivs.eval(e + k1e * half, n + k1n * half, pump_mid);
                (k3e, k3n) = derivs.eval(e + k2e * half, n + k2n * half, pump_mid);
                (k4e, k4n) = derivs.eval(e + k3e * dt, n + k3n * dt, pump1);
            }
            Some(d) => {
                let lag = d.ring.len() as i64 - 1;
                let past0 = d.at(k as i64 - lag);
                let past1 = d.at(k as i64 - lag + 1);
                let fb0 = d.coupling * past0;
                let fb1 = d.coupling * past1;
                let fb_mid = (fb0 + fb1) * 0.5;

                let (de, dn) = derivs.eval(e, n, pump0);
                (k1e, k1n) = (de + fb0, dn);
                let (de, dn) = derivs.eval(e + k1e * half, n + k1n * half, pump_mid);
                (k2e, k2n) = (de + fb_mid, dn);
                let (de, dn) = derivs.eval(e + k2e * half, n + k2n * half, pump_mid);
                (k3e, k3n) = (de + fb_mid, dn);
                let (de, dn) = derivs.eval(e + k3e * dt, n + k3n * dt, pump1);
                (k4e, k4n) = (de + fb1, dn);
            }
        }

        e += (k1e + k2e * 2.0 + k3e * 2.0 + k4e) * sixth;
        n += (k1n + 2.0 * k2n + 2.0 * k3n + k4n) * sixth;

        if !(e.re.is_finite() && e.im.is_finite() && n.is_finite()) {
            return Err(Error::Divergence {
                step: k + 1,
                reason: "non-finite state".into(),
            });
        }
        if n < 0.0 {
            return Err(Error::Divergence {
                step: k + 1,
                reason: format!("negative carrier density {n}"),
            });
        }

        if let Some(d) = delay.as_mut() {
            let len = d.ring.len();
            d.ring[(k + 1) % len] = e;
        }
        if (k + 1) % stride == 0 {
            field.push(e);
            carriers.push(n);
        }
    }

    Ok(FieldTrace {
        dt_ns: dt * stride as f64,
        field,
        carriers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laserdyn::{intensity, steady_state};

    fn params() -> LaserParams {
        LaserParams::default()
    }

    #[test]
    fn sample_count_is_ceil_plus_one() {
        let p = params();
        let drive = DriveCurrent::constant(p.threshold_current_ma());
        let tr = integrate_solitary(&p, &drive, StepConfig::new(0.01, 0.5), InitialState::seeded(&p)).unwrap();
        assert_eq!(tr.len(), 21);
        let tr = integrate_solitary(&p, &drive, StepConfig::new(0.0102, 0.5), InitialState::seeded(&p)).unwrap();
        assert_eq!(tr.len(), 22);
        let tr = integrate_solitary(
            &p,
            &drive,
            StepConfig::new(0.01, 0.5).with_stride(4),
            InitialState::seeded(&p),
        )
        .unwrap();
        assert_eq!(tr.len(), 6);
        assert!((tr.dt_ns - 0.002).abs() < 1e-15);
    }

    #[test]
    fn step_above_quarter_photon_lifetime_is_rejected() {
        let p = params();
        let drive = DriveCurrent::constant(10.0);
        let err = integrate_solitary(&p, &drive, StepConfig::new(1.0, 0.6), InitialState::seeded(&p)).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn zero_field_stays_zero_and_carriers_relax() {
        let p = params();
        let i = 2.0 * p.threshold_current_ma();
        let init = InitialState::new(Complex64::new(0.0, 0.0), 0.0);
        let tr = integrate_solitary(&p, &DriveCurrent::constant(i), StepConfig::new(20.0, 0.5), init).unwrap();
        assert!(tr.field.iter().all(|e| e.re == 0.0 && e.im == 0.0));
        let target = p.pump_rate(i) * p.tau_n_ns;
        let last = *tr.carriers.last().unwrap();
        assert!(((last - target) / target).abs() < 1e-3, "{last} vs {target}");
    }

    #[test]
    fn below_threshold_field_decays_monotonically() {
        let p = params();
        let i = 0.5 * p.threshold_current_ma();
        let (n_ss, _) = steady_state(&p, i).unwrap();
        let init = InitialState::new(Complex64::new(1e-3, 0.0), n_ss);
        let tr = integrate_solitary(&p, &DriveCurrent::constant(i), StepConfig::new(2.0, 0.5), init).unwrap();
        // Ignore the tail once |E|² has underflowed to subnormals.
        let s: Vec<f64> = tr.field.iter().map(|e| e.norm_sqr()).filter(|&v| v > 1e-300).collect();
        assert!(s.len() > 100);
        assert!(s.windows(2).all(|w| w[1] <= w[0]));
        assert!(s.last().unwrap() < &1e-12);
    }

    #[test]
    fn deterministic_and_prefix_stable() {
        let p = params();
        let drive = DriveCurrent::chaos_default(&p);
        let short = integrate_solitary(&p, &drive, StepConfig::new(1.0, 0.5), InitialState::seeded(&p)).unwrap();
        let again = integrate_solitary(&p, &drive, StepConfig::new(1.0, 0.5), InitialState::seeded(&p)).unwrap();
        assert_eq!(short, again);
        let long = integrate_solitary(&p, &drive, StepConfig::new(2.0, 0.5), InitialState::seeded(&p)).unwrap();
        assert_eq!(&long.field[..short.len()], &short.field[..]);
        assert_eq!(&long.carriers[..short.len()], &short.carriers[..]);
    }

    #[test]
    fn zero_kappa_matches_solitary_bitwise() {
        let p = params();
        let drive = DriveCurrent::chaos_default(&p);
        let grid = StepConfig::new(5.0, 0.2);
        let init = InitialState::seeded(&p);
        let solitary = integrate_solitary(&p, &drive, grid, init).unwrap();
        let fb = FeedbackParams {
            kappa: 0.0,
            ..FeedbackParams::default()
        };
        let with_fb = integrate_feedback(&p, &fb, &drive, grid, &History::Constant(init)).unwrap();
        assert_eq!(solitary, with_fb);
    }

    #[test]
    fn feedback_delay_shorter_than_step_is_config_error() {
        let p = params();
        let fb = FeedbackParams {
            tau_f_ns: 1e-4,
            ..FeedbackParams::default()
        };
        let err = integrate_feedback(
            &p,
            &fb,
            &DriveCurrent::constant(10.0),
            StepConfig::new(1.0, 0.2),
            &History::Constant(InitialState::seeded(&p)),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn trace_history_continues_a_run() {
        // Splitting a feedback run in two, with the first part as the history
        // of the second, reproduces the single run bitwise.
        let p = params();
        let fb = FeedbackParams {
            tau_f_ns: 0.1,
            ..FeedbackParams::default()
        };
        let drive = DriveCurrent::constant(1.5 * p.threshold_current_ma());
        let init = InitialState::seeded(&p);
        let whole = integrate_feedback(&p, &fb, &drive, StepConfig::new(2.0, 0.2), &History::Constant(init)).unwrap();
        let first = integrate_feedback(&p, &fb, &drive, StepConfig::new(1.0, 0.2), &History::Constant(init)).unwrap();
        assert_eq!(&whole.field[..first.len()], &first.field[..]);
        let history = History::Trace(first.clone());
        let second = integrate_feedback(&p, &fb, &drive, StepConfig::new(1.0, 0.2), &history).unwrap();
        let offset = first.len() - 1;
        for (k, e) in second.field.iter().enumerate() {
            assert_eq!(*e, whole.field[offset + k], "mismatch at step {k}");
        }
    }

    #[test]
    fn history_step_mismatch_is_rejected() {
        let p = params();
        let hist = FieldTrace {
            dt_ns: 0.0005,
            field: vec![Complex64::new(1e-3, 0.0); 20_000],
            carriers: vec![p.threshold_density(); 20_000],
        };
        let err = integrate_feedback(
            &p,
            &FeedbackParams::default(),
            &DriveCurrent::constant(10.0),
            StepConfig::new(1.0, 0.2),
            &History::Trace(hist),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn intensity_follows_the_field() {
        let p = params();
        let tr = integrate_solitary(
            &p,
            &DriveCurrent::constant(2.0 * p.threshold_current_ma()),
            StepConfig::new(1.0, 0.5),
            InitialState::seeded(&p),
        )
        .unwrap();
        let w = intensity(&tr, 1.0);
        assert_eq!(w.len(), tr.len());
        assert!(w.samples.iter().all(|&v| v >= 0.0));
    }
}
