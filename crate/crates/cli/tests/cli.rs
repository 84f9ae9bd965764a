use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn photocipher(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_photocipher"))
        .current_dir(dir)
        .args(["--out", "out"])
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let o = photocipher(dir, args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn value<'a>(kv: &'a str, key: &str) -> &'a str {
    kv.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in\n{kv}"))
}

fn le_u64(b: &[u8]) -> u64 {
    u64::from_le_bytes(b.try_into().unwrap())
}

#[test]
fn default_chaos_trace_header() {
    let tmp = TempDir::new().unwrap();
    let stdout = ok(tmp.path(), &["chaos"]);
    assert_eq!(value(&stdout, "chaos.gate"), "PASS");
    let b = fs::read(tmp.path().join("out/chaos.ctrc")).unwrap();
    assert_eq!(&b[..4], b"CTRC");
    assert_eq!(u32::from_le_bytes(b[4..8].try_into().unwrap()), 1);
    let dt_ns = f64::from_le_bytes(b[8..16].try_into().unwrap());
    assert!((dt_ns * 1e3 - 0.2).abs() < 1e-12, "{dt_ns}");
    assert_eq!(le_u64(&b[16..24]), 1_000_000);
    assert_eq!(b.len(), 24 + 8 * 1_000_000);
}

#[test]
fn chaos_without_feedback_fails_the_gate() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("cw.toml"), "[feedback]\nkappa = 0\n").unwrap();
    let stdout = ok(tmp.path(), &["--config", "cw.toml", "chaos", "--duration-ns", "100"]);
    assert_eq!(value(&stdout, "chaos.gate"), "FAIL");
}

#[test]
fn same_seed_gives_identical_files() {
    let tmp = TempDir::new().unwrap();
    let run = |seed: &str, name: &str| {
        ok(tmp.path(), &["--seed", seed, "chaos", "--duration-ns", "20"]);
        fs::rename(tmp.path().join("out/chaos.ctrc"), tmp.path().join(name)).unwrap();
        fs::read(tmp.path().join(name)).unwrap()
    };
    let a = run("7", "a");
    let b = run("7", "b");
    let c = run("8", "c");
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn keygen_rate_law_and_format_equivalence() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(d, &["chaos", "--duration-ns", "10000", "--record-ps", "100"]);
    ok(d, &["chaos", "--duration-ns", "10000", "--record-ps", "100", "--csv"]);
    let bin = ok(d, &["keygen", "out/chaos.ctrc"]);
    assert_eq!(value(&bin, "keygen.bits"), "49995");
    assert_eq!(value(&bin, "keygen.rate_Gbps"), "5");
    let from_bin = fs::read(d.join("out/key.bits")).unwrap();

    let csv = ok(d, &["keygen", "out/chaos.csv", "--stats"]);
    assert_eq!(fs::read(d.join("out/key.bits")).unwrap(), from_bin);
    assert_eq!(value(&csv, "stats.bits"), "49995");
    assert_eq!(value(&csv, "stats.monobit.result"), "pass");
    assert!(!bin.contains("stats."));
}

#[test]
fn encrypt_then_decrypt_restores_the_plaintext() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(d, &["chaos", "--duration-ns", "2100", "--record-ps", "100"]);
    ok(d, &["keygen", "out/chaos.ctrc"]);
    let enc = ok(d, &["encrypt", "--key", "out/key.bits"]);
    assert_eq!(value(&enc, "encrypt.bits"), "10000");
    ok(d, &["decrypt", "out/cipher.bits", "--key", "out/key.bits"]);
    let plain = fs::read(d.join("out/plaintext.bits")).unwrap();
    assert_eq!(fs::read(d.join("out/decrypted.bits")).unwrap(), plain);
    assert_ne!(fs::read(d.join("out/cipher.bits")).unwrap(), plain);
}

#[test]
fn short_key_exits_with_input_status() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(d, &["chaos", "--duration-ns", "100", "--record-ps", "100"]);
    ok(d, &["keygen", "out/chaos.ctrc"]);
    let o = photocipher(d, &["encrypt", "--key", "out/key.bits"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("key exhausted"));
}

#[test]
fn config_errors_exit_with_status_2() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("bad.toml"), "[laser]\nno_such_key = 1\n").unwrap();
    let o = photocipher(tmp.path(), &["--config", "bad.toml", "chaos"]);
    assert_eq!(o.status.code(), Some(2));
    fs::write(tmp.path().join("rate.toml"), "[link]\nbitrate_Gbps = 10\n").unwrap();
    let o = photocipher(tmp.path(), &["--config", "rate.toml", "simulate", "--bits", "100"]);
    assert_eq!(o.status.code(), Some(2));
    let o = photocipher(tmp.path(), &["stats", "missing.bits"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flat_trace_is_a_degenerate_input() {
    let tmp = TempDir::new().unwrap();
    let mut csv = String::from("t_ns,value\n");
    for k in 0..2000 {
        csv.push_str(&format!("{}.0,1.0\n", k));
    }
    fs::write(tmp.path().join("flat.csv"), csv).unwrap();
    let o = photocipher(tmp.path(), &["keygen", "flat.csv"]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn simulate_decrypts_without_errors() {
    let tmp = TempDir::new().unwrap();
    let stdout = ok(tmp.path(), &["simulate", "--bits", "10000", "--panels"]);
    assert_eq!(value(&stdout, "link.bitsRun"), "10000");
    assert_eq!(value(&stdout, "link.berPlaintext"), "0");
    let report = fs::read_to_string(tmp.path().join("out/report.txt")).unwrap();
    assert_eq!(report, stdout);
    // The echoed scenario reproduces the run.
    let echoed = tmp.path().join("out/scenario.toml");
    let again = ok(tmp.path(), &["--config", echoed.to_str().unwrap(), "simulate"]);
    assert_eq!(again, stdout);
    for name in ["chaos", "key", "plaintext", "ciphertext", "ld_key", "ld_cipher", "rx_cipher", "decrypted"] {
        let body = fs::read_to_string(tmp.path().join(format!("out/panels/{name}.csv"))).unwrap();
        assert!(body.lines().count() > 100, "{name}");
    }
}

/// Q from the amplitude histogram at the bit centres of an eye CSV. Q does
/// not change under affine rescaling, so amplitude bin indices suffice.
fn eye_csv_q(csv: &str, time_bins: usize) -> f64 {
    let centres = [time_bins / 4, 3 * time_bins / 4];
    let mut values = Vec::new();
    for line in csv.lines().skip(1) {
        let f: Vec<u64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        if centres.contains(&(f[0] as usize)) {
            values.extend(std::iter::repeat_n(f[1] as f64 + 0.5, f[2] as usize));
        }
    }
    let (lo, hi) = values.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    let mut threshold = 0.5 * (lo + hi);
    let stats = |t: f64| {
        let moments = |sel: &dyn Fn(f64) -> bool| {
            let xs: Vec<f64> = values.iter().copied().filter(|&v| sel(v)).collect();
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            let s = (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt();
            (m, s)
        };
        (moments(&|v| v < t), moments(&|v| v >= t))
    };
    for _ in 0..50 {
        let ((m0, _), (m1, _)) = stats(threshold);
        threshold = 0.5 * (m0 + m1);
    }
    let ((m0, s0), (m1, s1)) = stats(threshold);
    (m1 - m0) / (s0 + s1)
}

#[test]
fn eye_exports_agree_with_the_reported_q_ordering() {
    let tmp = TempDir::new().unwrap();
    let stdout = ok(tmp.path(), &["simulate", "--bits", "3000", "--eye"]);
    let q_ld: f64 = value(&stdout, "link.qLdOutput").parse().unwrap();
    let q_rx: f64 = value(&stdout, "link.qSampled").parse().unwrap();
    let mut q_eye = Vec::new();
    for name in ["eye_ld_output", "eye_sampled"] {
        let pgm = fs::read(tmp.path().join(format!("out/{name}.pgm"))).unwrap();
        assert!(pgm.starts_with(b"P5\n128 96\n255\n"));
        assert_eq!(pgm.len(), b"P5\n128 96\n255\n".len() + 128 * 96);
        let csv = fs::read_to_string(tmp.path().join(format!("out/{name}.csv"))).unwrap();
        q_eye.push(eye_csv_q(&csv, 128));
    }
    assert_eq!(q_rx >= q_ld, q_eye[1] >= q_eye[0], "report {q_ld} {q_rx}, eyes {q_eye:?}");
}

#[test]
fn eye_subcommand_folds_a_trace() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["chaos", "--duration-ns", "20"]);
    let stdout = ok(tmp.path(), &["eye", "out/chaos.ctrc", "--time-bins", "32", "--amp-bins", "16"]);
    assert_eq!(value(&stdout, "eye.samples"), "100000");
    assert!(fs::read(tmp.path().join("out/eye.pgm")).unwrap().starts_with(b"P5\n32 16\n255\n"));
}

#[test]
fn stats_reports_failures_but_exits_zero_unless_strict() {
    let tmp = TempDir::new().unwrap();
    let mut zeros = b"BITS\x01\0\0\0".to_vec();
    zeros.extend_from_slice(&20_000u64.to_le_bytes());
    zeros.extend(std::iter::repeat_n(0u8, 2500));
    fs::write(tmp.path().join("zeros.bits"), zeros).unwrap();

    let stdout = ok(tmp.path(), &["stats", "zeros.bits"]);
    for test in ["monobit", "runs", "autocorr_lag1", "entropy5"] {
        assert_ne!(value(&stdout, &format!("stats.{test}.result")), "pass", "{test}");
    }
    assert_eq!(value(&stdout, "stats.all_passed"), "false");
    assert_eq!(fs::read_to_string(tmp.path().join("out/stats.txt")).unwrap(), stdout);

    let o = photocipher(tmp.path(), &["stats", "zeros.bits", "--strict"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn generated_key_passes_monobit() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["chaos", "--duration-ns", "4000", "--record-ps", "100"]);
    ok(tmp.path(), &["keygen", "out/chaos.ctrc"]);
    let stdout = ok(tmp.path(), &["stats", "out/key.bits", "--strict"]);
    assert_eq!(value(&stdout, "stats.monobit.result"), "pass");
}
