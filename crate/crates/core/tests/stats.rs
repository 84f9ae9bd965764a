use photocipher::stats::*;
use photocipher::BitStream;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn uniform(seed: u64, n: usize) -> BitStream {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random::<bool>()).collect()
}

#[test]
fn uniform_streams_pass_monobit_and_runs_for_nearly_all_seeds() {
    let (mut mono, mut run) = (0, 0);
    for seed in 0..100 {
        let bits = uniform(seed, 100_000);
        if monobit(&bits).unwrap().1 >= SIGNIFICANCE {
            mono += 1;
        }
        if let RunsOutcome::Tested { p, .. } = runs(&bits).unwrap() {
            if p >= SIGNIFICANCE {
                run += 1;
            }
        }
    }
    assert!(mono >= 98, "monobit passed {mono}/100");
    assert!(run >= 98, "runs passed {run}/100");
}

#[test]
fn million_uniform_bits_pass_the_battery() {
    let bits = uniform(2024, 1_000_000);
    let h = symbol_entropy(&bits, SYMBOL_BITS).unwrap();
    assert!(h >= 4.99, "{h}");
    let r = autocorr(&bits, 1).unwrap();
    assert!(r.abs() < 3.0 / (bits.len() as f64).sqrt());
    assert!(full_report(&bits).all_passed());
}

#[test]
fn all_zero_stream_fails_everything_applicable() {
    let report = full_report(&BitStream::zeros(100_000));
    assert!(!report.monobit.passed());
    assert!(!report.runs.passed());
    assert!(!report.autocorr_lag1.passed());
    assert_eq!(report.entropy.statistic(), Some(0.0));
    assert!(!report.all_passed());
}
