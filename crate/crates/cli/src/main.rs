use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use photocipher::cipher::{prbs, xor_stream};
use photocipher::laserdyn::chaos_gate;
use photocipher::phy::{eye, run_end_to_end, LinkRun};
use photocipher::trng::{extract_key, key_rate_gbps};
use photocipher::{io, stats, BitStream, Error, Scenario};

#[derive(Parser)]
#[command(name = "photocipher", version, about = "Chaotic-laser key generation and XOR-encrypted optical link simulator")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Scenario file (TOML); built-in defaults when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides the chaos seed and the receiver noise seed.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Output directory; defaults to `run.out_dir` of the scenario.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate the feedback laser and write its intensity trace.
    Chaos {
        #[arg(long)]
        duration_ns: Option<f64>,
        /// Recording interval; must be a whole number of integration steps.
        #[arg(long)]
        record_ps: Option<f64>,
        /// Write `chaos.csv` instead of the binary `chaos.ctrc`.
        #[arg(long)]
        csv: bool,
    },
    /// Sample, quantize and difference a trace into key bits.
    Keygen {
        trace: PathBuf,
        /// Append the randomness battery to the output.
        #[arg(long)]
        stats: bool,
    },
    /// XOR a plaintext with a key. Without a plaintext file a PRBS of
    /// `run.plaintext_bits` bits is generated and saved alongside.
    Encrypt {
        plaintext: Option<PathBuf>,
        #[arg(long)]
        key: PathBuf,
    },
    Decrypt {
        cipher: PathBuf,
        #[arg(long)]
        key: PathBuf,
    },
    /// Run the full back-to-back link.
    Simulate {
        #[arg(long)]
        bits: Option<usize>,
        /// Write eye diagrams of the laser output and the sampled receiver.
        #[arg(long)]
        eye: bool,
        /// Write per-stage CSVs (chaos, key, streams, waveforms).
        #[arg(long)]
        panels: bool,
    },
    /// Randomness battery on a bitstream file.
    Stats {
        bits: PathBuf,
        /// Exit with status 5 when any test fails.
        #[arg(long)]
        strict: bool,
    },
    /// Fold a trace into an eye diagram.
    Eye {
        trace: PathBuf,
        #[arg(long)]
        bitrate_gbps: Option<f64>,
        #[arg(long)]
        time_bins: Option<usize>,
        #[arg(long)]
        amp_bins: Option<usize>,
    },
}

/// Waveform panels are cut to this many bits so the CSVs stay readable.
const PANEL_BITS: usize = 500;

const STRICT_FAILURE: u8 = 5;

enum Done {
    Ok,
    StrictFailure,
}

fn exit_code(err: &Error) -> u8 {
    match err.root() {
        Error::Divergence { .. } => 3,
        Error::Degenerate(_) | Error::Input(_) | Error::KeyExhausted { .. } => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Done::Ok) => ExitCode::SUCCESS,
        Ok(Done::StrictFailure) => ExitCode::from(STRICT_FAILURE),
        Err(e) => {
            eprintln!("photocipher: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Error> {
    fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, data: impl AsRef<[u8]>) -> Result<PathBuf, Error> {
    let path = dir.join(name);
    fs::write(&path, data).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn read_bits(path: &Path) -> Result<BitStream, Error> {
    io::bits_from_bytes(&read(path)?)
}

fn load_scenario(g: &Global) -> Result<Scenario, Error> {
    let mut scn = match &g.config {
        Some(path) => {
            let text = String::from_utf8(read(path)?).map_err(|_| Error::config("scenario file is not UTF-8"))?;
            Scenario::from_toml_str(&text)?
        }
        None => Scenario::default(),
    };
    if let Some(seed) = g.seed {
        scn.apply_seed(seed);
    }
    Ok(scn)
}

fn run(cli: Cli) -> Result<Done, Error> {
    let mut scn = load_scenario(&cli.global)?;
    let out = cli.global.out.clone().unwrap_or_else(|| PathBuf::from(&scn.run.out_dir));
    fs::create_dir_all(&out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;

    match cli.cmd {
        Cmd::Chaos { duration_ns, record_ps, csv } => {
            let duration = duration_ns.unwrap_or(scn.chaos.duration_ns);
            let record = record_ps.unwrap_or(scn.chaos.record_ps);
            let w = scn.chaos_waveform(duration, record)?;
            let path = if csv {
                write(&out, "chaos.csv", io::trace_to_csv(&w))?
            } else {
                write(&out, "chaos.ctrc", io::trace_to_bytes(&w))?
            };
            let gate = chaos_gate(&w)?;
            println!("chaos.file={}", path.display());
            println!("chaos.dt_ps={}", w.dt_ns * 1e3);
            println!("chaos.samples={}", w.len());
            println!("chaos.gate.max_abs={:.6}", gate.max_abs);
            println!("chaos.gate.at_lag_ns={:.4}", gate.at_lag_ns);
            println!("chaos.gate={}", if gate.pass { "PASS" } else { "FAIL" });
        }
        Cmd::Keygen { trace, stats: with_stats } => {
            let w = io::trace_from_any(&read(&trace)?)?;
            let key = extract_key(&w, &scn.adc, &scn.extractor)?;
            let path = write(&out, "key.bits", io::bits_to_bytes(&key))?;
            println!("keygen.file={}", path.display());
            println!("keygen.bits={}", key.len());
            println!("keygen.rate_Gbps={}", key_rate_gbps(&scn.adc, &scn.extractor));
            if with_stats {
                print!("{}", stats::full_report(&key).to_kv());
            }
        }
        Cmd::Encrypt { plaintext, key } => {
            let key = read_bits(&key)?;
            let plain = match plaintext {
                Some(p) => read_bits(&p)?,
                None => {
                    let p = prbs(&scn.prbs, scn.run.plaintext_bits)?;
                    write(&out, "plaintext.bits", io::bits_to_bytes(&p))?;
                    p
                }
            };
            let cipher = xor_stream(&plain, &key)?;
            let path = write(&out, "cipher.bits", io::bits_to_bytes(&cipher))?;
            println!("encrypt.file={}", path.display());
            println!("encrypt.bits={}", cipher.len());
        }
        Cmd::Decrypt { cipher, key } => {
            let plain = xor_stream(&read_bits(&cipher)?, &read_bits(&key)?)?;
            let path = write(&out, "decrypted.bits", io::bits_to_bytes(&plain))?;
            println!("decrypt.file={}", path.display());
            println!("decrypt.bits={}", plain.len());
        }
        Cmd::Simulate { bits, eye: with_eye, panels } => {
            if let Some(n) = bits {
                scn.run.plaintext_bits = n;
            }
            let run = run_end_to_end(&scn)?;
            let report = run.report.to_kv();
            write(&out, "report.txt", &report)?;
            write(&out, "scenario.toml", scn.to_toml_string())?;
            print!("{report}");
            if with_eye {
                write_eyes(&scn, &run, &out)?;
            }
            if panels {
                write_panels(&scn, &run, &out)?;
            }
        }
        Cmd::Stats { bits, strict } => {
            let report = stats::full_report(&read_bits(&bits)?);
            let kv = report.to_kv();
            write(&out, "stats.txt", &kv)?;
            print!("{kv}");
            if strict && !report.all_passed() {
                return Ok(Done::StrictFailure);
            }
        }
        Cmd::Eye { trace, bitrate_gbps, time_bins, amp_bins } => {
            let w = io::trace_from_any(&read(&trace)?)?;
            let e = eye(
                &w,
                bitrate_gbps.unwrap_or(scn.link.bitrate_gbps),
                time_bins.unwrap_or(scn.run.eye_time_bins),
                amp_bins.unwrap_or(scn.run.eye_amp_bins),
            )?;
            write(&out, "eye.pgm", e.to_pgm())?;
            write(&out, "eye.csv", e.to_csv())?;
            println!("eye.samples={}", e.total());
            println!("eye.max_count={}", e.max_count());
        }
    }
    Ok(Done::Ok)
}

fn write_eyes(scn: &Scenario, run: &LinkRun, out: &Path) -> Result<(), Error> {
    let (tb, ab) = (scn.run.eye_time_bins, scn.run.eye_amp_bins);
    for (name, w) in [("eye_ld_output", &run.ld_cipher), ("eye_sampled", &run.rx_cipher)] {
        let e = eye(w, scn.link.bitrate_gbps, tb, ab)?;
        write(out, &format!("{name}.pgm"), e.to_pgm())?;
        write(out, &format!("{name}.csv"), e.to_csv())?;
    }
    Ok(())
}

fn write_panels(scn: &Scenario, run: &LinkRun, out: &Path) -> Result<(), Error> {
    let rate = scn.link.bitrate_gbps;
    let n = run.report.bits_run.min(PANEL_BITS);
    let samples = (n as f64 / rate / run.ld_cipher.dt_ns).round() as usize;
    let panels = [
        ("chaos.csv", io::trace_to_csv(&run.chaos)),
        ("key.csv", io::bits_to_csv(&run.key.truncated(n), rate)),
        ("plaintext.csv", io::bits_to_csv(&run.plaintext.truncated(n), rate)),
        ("ciphertext.csv", io::bits_to_csv(&run.ciphertext.truncated(n), rate)),
        ("ld_key.csv", io::trace_to_csv(&run.ld_key.slice(0, samples))),
        ("ld_cipher.csv", io::trace_to_csv(&run.ld_cipher.slice(0, samples))),
        ("rx_cipher.csv", io::trace_to_csv(&run.rx_cipher.slice(0, samples))),
        ("decrypted.csv", io::bits_to_csv(&run.decrypted.truncated(n), rate)),
    ];
    let dir = out.join("panels");
    fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    for (name, body) in &panels {
        write(&dir, name, body)?;
    }
    Ok(())
}
