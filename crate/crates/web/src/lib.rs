//! Browser bindings: three interactive operations over the simulator, each
//! returning plain numbers and strings the page can draw directly.

use photocipher::cipher::xor_stream;
use photocipher::laserdyn::{chaos_gate, intensity_autocorrelation};
use photocipher::phy::{eye, run_end_to_end, EyeDiagram};
use photocipher::stats::{autocorr, monobit, symbol_entropy};
use photocipher::trng::extract_key;
use photocipher::{BitStream, Error, Scenario, Waveform};
use wasm_bindgen::prelude::*;

/// Scope resolution of the chaos plots.
const CHAOS_RECORD_PS: f64 = 10.0;
const PLOT_WINDOW_NS: f64 = 20.0;
const AUTOCORR_SPAN_NS: f64 = 10.0;
const PREVIEW_BITS: usize = 128;
const EYE_COLS: usize = 96;
const EYE_ROWS: usize = 64;

fn msg(e: Error) -> String {
    e.to_string()
}

fn bit_string(b: &BitStream, n: usize) -> String {
    b.iter().take(n).map(|v| if v { '1' } else { '0' }).collect()
}

fn seeded(seed: u32) -> Scenario {
    let mut scn = Scenario::default();
    scn.apply_seed(seed as u64);
    scn
}

#[wasm_bindgen]
pub struct ChaosDemo {
    dt_ns: f64,
    trace: Vec<f64>,
    autocorr: Vec<f64>,
    gate_max: f64,
    gate_lag_ns: f64,
    gate_pass: bool,
    key_bits: usize,
    key_preview: String,
    monobit_p: f64,
    lag1_r: f64,
    entropy5: f64,
}

#[wasm_bindgen]
impl ChaosDemo {
    #[wasm_bindgen(getter)]
    pub fn dt_ns(&self) -> f64 {
        self.dt_ns
    }
    /// Intensity (mW) over the first 20 ns.
    #[wasm_bindgen(getter)]
    pub fn trace(&self) -> Vec<f64> {
        self.trace.clone()
    }
    /// Normalized autocorrelation for lags 0..10 ns, one per `dt_ns`.
    #[wasm_bindgen(getter)]
    pub fn autocorr(&self) -> Vec<f64> {
        self.autocorr.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn gate_max(&self) -> f64 {
        self.gate_max
    }
    #[wasm_bindgen(getter)]
    pub fn gate_lag_ns(&self) -> f64 {
        self.gate_lag_ns
    }
    #[wasm_bindgen(getter)]
    pub fn gate_pass(&self) -> bool {
        self.gate_pass
    }
    #[wasm_bindgen(getter)]
    pub fn key_bits(&self) -> usize {
        self.key_bits
    }
    #[wasm_bindgen(getter)]
    pub fn key_preview(&self) -> String {
        self.key_preview.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn monobit_p(&self) -> f64 {
        self.monobit_p
    }
    #[wasm_bindgen(getter)]
    pub fn lag1_r(&self) -> f64 {
        self.lag1_r
    }
    /// Entropy per 5-bit symbol; NaN when the key is too short to estimate.
    #[wasm_bindgen(getter)]
    pub fn entropy5(&self) -> f64 {
        self.entropy5
    }
}

/// Integrates the feedback laser at feedback strength `kappa` and extracts a
/// key from `duration_ns` of its output.
#[wasm_bindgen]
pub fn chaos_demo(kappa: f64, duration_ns: f64, seed: u32) -> Result<ChaosDemo, String> {
    if !(20.0..=2000.0).contains(&duration_ns) {
        return Err(format!("duration must lie in 20..2000 ns, got {duration_ns}"));
    }
    let mut scn = seeded(seed);
    scn.feedback.kappa = kappa;
    scn.validate().map_err(msg)?;
    let w = scn.chaos_waveform(duration_ns, CHAOS_RECORD_PS).map_err(msg)?;
    let gate = chaos_gate(&w).map_err(msg)?;
    let lags = ((AUTOCORR_SPAN_NS / w.dt_ns).round() as usize).min(w.len() - 1);
    let autocorr_curve = match intensity_autocorrelation(&w, lags) {
        Ok(r) => r,
        Err(Error::Degenerate(_)) => vec![1.0; lags + 1],
        Err(e) => return Err(msg(e)),
    };
    let key = extract_key(&w, &scn.adc, &scn.extractor).map_err(msg)?;
    let plot = (PLOT_WINDOW_NS / w.dt_ns).round() as usize;
    Ok(ChaosDemo {
        dt_ns: w.dt_ns,
        trace: w.samples[..plot.min(w.len())].to_vec(),
        autocorr: autocorr_curve,
        gate_max: gate.max_abs,
        gate_lag_ns: gate.at_lag_ns,
        gate_pass: gate.pass,
        key_bits: key.len(),
        key_preview: bit_string(&key, PREVIEW_BITS),
        monobit_p: monobit(&key).map(|(_, p)| p).unwrap_or(f64::NAN),
        lag1_r: autocorr(&key, 1).unwrap_or(f64::NAN),
        entropy5: symbol_entropy(&key, 5).unwrap_or(f64::NAN),
    })
}

#[wasm_bindgen]
pub struct LinkDemo {
    bits: usize,
    ber_key: f64,
    ber_cipher: f64,
    ber_plaintext: f64,
    q_ld_output: f64,
    q_sampled: f64,
    eye_ld: Vec<f64>,
    eye_rx: Vec<f64>,
    rx_dt_ns: f64,
    rx_trace: Vec<f64>,
    plaintext: String,
    ciphertext: String,
    decrypted: String,
}

#[wasm_bindgen]
impl LinkDemo {
    #[wasm_bindgen(getter)]
    pub fn bits(&self) -> usize {
        self.bits
    }
    #[wasm_bindgen(getter)]
    pub fn ber_key(&self) -> f64 {
        self.ber_key
    }
    #[wasm_bindgen(getter)]
    pub fn ber_cipher(&self) -> f64 {
        self.ber_cipher
    }
    #[wasm_bindgen(getter)]
    pub fn ber_plaintext(&self) -> f64 {
        self.ber_plaintext
    }
    #[wasm_bindgen(getter)]
    pub fn q_ld_output(&self) -> f64 {
        self.q_ld_output
    }
    #[wasm_bindgen(getter)]
    pub fn q_sampled(&self) -> f64 {
        self.q_sampled
    }
    #[wasm_bindgen(getter)]
    pub fn eye_cols(&self) -> usize {
        EYE_COLS
    }
    #[wasm_bindgen(getter)]
    pub fn eye_rows(&self) -> usize {
        EYE_ROWS
    }
    /// Eye of the ciphertext laser output: row-major, top row highest,
    /// scaled to 0..1.
    #[wasm_bindgen(getter)]
    pub fn eye_ld(&self) -> Vec<f64> {
        self.eye_ld.clone()
    }
    /// Eye of the filtered ciphertext channel at the receiver.
    #[wasm_bindgen(getter)]
    pub fn eye_rx(&self) -> Vec<f64> {
        self.eye_rx.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn rx_dt_ns(&self) -> f64 {
        self.rx_dt_ns
    }
    /// Received ciphertext voltage over the first 32 bits.
    #[wasm_bindgen(getter)]
    pub fn rx_trace(&self) -> Vec<f64> {
        self.rx_trace.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn plaintext(&self) -> String {
        self.plaintext.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn ciphertext(&self) -> String {
        self.ciphertext.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn decrypted(&self) -> String {
        self.decrypted.clone()
    }
}

fn image(e: &EyeDiagram) -> Vec<f64> {
    let max = e.max_count().max(1) as f64;
    (0..e.amp_bins)
        .rev()
        .flat_map(|row| (0..e.time_bins).map(move |col| (row, col)))
        .map(|(row, col)| e.count(col, row) as f64 / max)
        .collect()
}

/// Sends `bits` PRBS bits through the encrypted back-to-back link with
/// receiver noise of `noise_mv` (per simulation sample).
#[wasm_bindgen]
pub fn link_demo(bits: u32, noise_mv: f64, seed: u32) -> Result<LinkDemo, String> {
    let bits = bits as usize;
    if !(32..=4000).contains(&bits) {
        return Err(format!("bit count must lie in 32..4000, got {bits}"));
    }
    if !(noise_mv.is_finite() && noise_mv >= 0.0) {
        return Err(format!("noise must be non-negative, got {noise_mv} mV"));
    }
    let mut scn = seeded(seed);
    scn.run.plaintext_bits = bits;
    scn.link.noise_sigma = noise_mv * 1e-3;
    let run = run_end_to_end(&scn).map_err(msg)?;
    let rate = scn.link.bitrate_gbps;
    let eye_ld = eye(&run.ld_cipher, rate, EYE_COLS, EYE_ROWS).map_err(msg)?;
    let eye_rx = eye(&run.rx_cipher, rate, EYE_COLS, EYE_ROWS).map_err(msg)?;
    // 32 bits at roughly 12.5 ps per plotted point.
    let stride = ((0.0125 / run.rx_cipher.dt_ns).round() as usize).max(1);
    let shown = (32.0 / rate / run.rx_cipher.dt_ns).round() as usize;
    let rx: Waveform = run.rx_cipher.slice(0, shown.min(run.rx_cipher.len())).decimate(stride);
    let r = &run.report;
    Ok(LinkDemo {
        bits,
        ber_key: r.ber_key,
        ber_cipher: r.ber_cipher,
        ber_plaintext: r.ber_plaintext,
        q_ld_output: r.q_ld_output,
        q_sampled: r.q_sampled,
        eye_ld: image(&eye_ld),
        eye_rx: image(&eye_rx),
        rx_dt_ns: rx.dt_ns,
        rx_trace: rx.samples,
        plaintext: bit_string(&run.plaintext, PREVIEW_BITS),
        ciphertext: bit_string(&run.ciphertext, PREVIEW_BITS),
        decrypted: bit_string(&run.decrypted, PREVIEW_BITS),
    })
}

#[wasm_bindgen]
pub struct TextDemo {
    key_hex: String,
    cipher_hex: String,
    decrypted: String,
}

#[wasm_bindgen]
impl TextDemo {
    #[wasm_bindgen(getter)]
    pub fn key_hex(&self) -> String {
        self.key_hex.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn cipher_hex(&self) -> String {
        self.cipher_hex.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn decrypted(&self) -> String {
        self.decrypted.clone()
    }
}

const MAX_TEXT_BYTES: usize = 2048;

fn hex(b: &BitStream) -> String {
    b.as_bytes().iter().map(|x| format!("{x:02x}")).collect()
}

/// Encrypts UTF-8 text with a fresh chaotic key and decrypts it again.
#[wasm_bindgen]
pub fn encrypt_text(text: &str, seed: u32) -> Result<TextDemo, String> {
    let bytes = text.as_bytes();
    if bytes.is_empty() || bytes.len() > MAX_TEXT_BYTES {
        return Err(format!("text must hold 1..{MAX_TEXT_BYTES} bytes"));
    }
    let mut plain = BitStream::with_capacity(8 * bytes.len());
    for &b in bytes {
        plain.push_word_msb(b as u64, 8);
    }
    let scn = seeded(seed);
    let clocks = plain.len().div_ceil(scn.extractor.lsb_count as usize) + scn.extractor.shift_samples + 1;
    let duration = (clocks as f64 / scn.adc.clock_ghz).max(20.0);
    let w = scn.chaos_waveform(duration, 100.0).map_err(msg)?;
    let key = extract_key(&w, &scn.adc, &scn.extractor).map_err(msg)?.truncated(plain.len());
    let cipher = xor_stream(&plain, &key).map_err(msg)?;
    let back = xor_stream(&cipher, &key).map_err(msg)?;
    Ok(TextDemo {
        key_hex: hex(&key),
        cipher_hex: hex(&cipher),
        decrypted: String::from_utf8_lossy(back.as_bytes()).into_owned(),
    })
}
