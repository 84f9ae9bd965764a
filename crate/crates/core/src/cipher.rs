//! Plaintext generation and the XOR stream cipher.

use crate::bits::BitStream;
use crate::error::{Error, Result};

/// Fibonacci LFSR configuration. Taps are 1-based register positions; the
/// polynomial `x^order + ... + 1` has a tap at `order` and one per other term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrbsConfig {
    pub order: u32,
    pub taps: Vec<u32>,
    pub seed: u64,
}

impl Default for PrbsConfig {
    fn default() -> Self {
        Self::maximal(15, 1).expect("PRBS15 is tabulated")
    }
}

/// Maximal-length tap sets for the common PRBS orders.
pub fn maximal_taps(order: u32) -> Option<&'static [u32]> {
    Some(match order {
        3 => &[3, 2],
        4 => &[4, 3],
        5 => &[5, 3],
        6 => &[6, 5],
        7 => &[7, 6],
        9 => &[9, 5],
        10 => &[10, 7],
        11 => &[11, 9],
        15 => &[15, 14],
        17 => &[17, 14],
        20 => &[20, 17],
        23 => &[23, 18],
        31 => &[31, 28],
        _ => return None,
    })
}

impl PrbsConfig {
    pub fn maximal(order: u32, seed: u64) -> Option<Self> {
        Some(Self {
            order,
            taps: maximal_taps(order)?.to_vec(),
            seed,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=63).contains(&self.order) {
            return Err(Error::config(format!("PRBS order must be 2..=63, got {}", self.order)));
        }
        if self.taps.is_empty() || !self.taps.contains(&self.order) {
            return Err(Error::config(format!("PRBS taps must include the order {}", self.order)));
        }
        if let Some(t) = self.taps.iter().find(|&&t| t == 0 || t > self.order) {
            return Err(Error::config(format!("PRBS tap {t} outside 1..={}", self.order)));
        }
        if self.seed & self.mask() == 0 {
            return Err(Error::config("PRBS seed must be nonzero in the register"));
        }
        Ok(())
    }

    fn mask(&self) -> u64 {
        (1u64 << self.order) - 1
    }
}

/// `nbits` of the LFSR sequence. Each step XORs the tapped register bits,
/// shifts the result in at the bottom and emits it.
pub fn prbs(cfg: &PrbsConfig, nbits: usize) -> Result<BitStream> {
    cfg.validate()?;
    let mask = cfg.mask();
    let tap_mask = cfg.taps.iter().fold(0u64, |m, &t| m | 1 << (t - 1));
    let mut state = cfg.seed & mask;
    let mut out = BitStream::with_capacity(nbits);
    for _ in 0..nbits {
        let bit = (state & tap_mask).count_ones() & 1;
        state = ((state << 1) | bit as u64) & mask;
        out.push(bit == 1);
    }
    Ok(out)
}

/// `data XOR key` over the length of `data`. The key must cover the data;
/// it is never wrapped or reused.
pub fn xor_stream(data: &BitStream, key: &BitStream) -> Result<BitStream> {
    if key.len() < data.len() {
        return Err(Error::KeyExhausted {
            needed: data.len(),
            available: key.len(),
        });
    }
    let nbytes = data.as_bytes().len();
    let mut packed: Vec<u8> = data
        .as_bytes()
        .iter()
        .zip(&key.as_bytes()[..nbytes])
        .map(|(d, k)| d ^ k)
        .collect();
    // Clear key bits that fall in the data's padding.
    let spare = nbytes * 8 - data.len();
    if spare > 0 {
        packed[nbytes - 1] &= !((1u8 << spare) - 1);
    }
    BitStream::from_packed(packed, data.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_and_deterministic() {
        let cfg = PrbsConfig::default();
        assert!(prbs(&cfg, 0).unwrap().is_empty());
        assert_eq!(prbs(&cfg, 1000).unwrap(), prbs(&cfg, 1000).unwrap());
    }

    #[test]
    fn zero_seed_rejected() {
        let cfg = PrbsConfig::maximal(7, 0).unwrap();
        assert!(matches!(prbs(&cfg, 10), Err(Error::Config(_))));
        let cfg = PrbsConfig::maximal(7, 128).unwrap();
        assert!(prbs(&cfg, 10).is_err(), "seed outside the register is zero after masking");
    }

    #[test]
    fn bad_taps_rejected() {
        let cfg = PrbsConfig {
            order: 7,
            taps: vec![6, 5],
            seed: 1,
        };
        assert!(prbs(&cfg, 10).is_err());
        let cfg = PrbsConfig {
            order: 7,
            taps: vec![7, 9],
            seed: 1,
        };
        assert!(prbs(&cfg, 10).is_err());
    }

    /// Smallest p such that s[i] == s[i+p] for all i in the window.
    fn brute_period(s: &[bool]) -> Option<usize> {
        (1..s.len() / 2).find(|&p| (0..s.len() - p).all(|i| s[i] == s[i + p]))
    }

    #[test]
    fn prbs7_has_period_127() {
        let cfg = PrbsConfig::maximal(7, 0x5a).unwrap();
        let s = prbs(&cfg, 3 * 127).unwrap().to_bools();
        assert_eq!(brute_period(&s), Some(127));
        // 64 ones and 63 zeros per period for a maximal sequence.
        assert_eq!(s[..127].iter().filter(|&&b| b).count(), 64);
    }

    #[test]
    fn tabulated_taps_are_maximal() {
        for order in [3, 4, 5, 6, 7, 9, 10, 11] {
            let cfg = PrbsConfig::maximal(order, 1).unwrap();
            let period = (1usize << order) - 1;
            let s = prbs(&cfg, 3 * period).unwrap().to_bools();
            assert_eq!(brute_period(&s), Some(period), "order {order}");
        }
    }

    #[test]
    fn xor_example() {
        let p = BitStream::parse("10110").unwrap();
        let k = BitStream::parse("01100").unwrap();
        assert_eq!(xor_stream(&p, &k).unwrap().to_string(), "11010");
    }

    #[test]
    fn longer_key_is_truncated_cleanly() {
        let p = BitStream::parse("101").unwrap();
        let k = BitStream::parse("11111111").unwrap();
        let c = xor_stream(&p, &k).unwrap();
        assert_eq!(c.to_string(), "010");
        assert_eq!(c.as_bytes(), &[0b0100_0000]);
    }

    #[test]
    fn short_key_is_exhausted() {
        let p = BitStream::zeros(10);
        let k = BitStream::zeros(9);
        assert_eq!(
            xor_stream(&p, &k),
            Err(Error::KeyExhausted {
                needed: 10,
                available: 9
            })
        );
    }

    proptest! {
        #[test]
        fn involution_and_length(p in proptest::collection::vec(any::<bool>(), 0..300), extra in 0usize..20, seed in any::<u64>()) {
            let p = BitStream::from_bools(&p);
            let kcfg = PrbsConfig::maximal(23, seed | 1).unwrap();
            let k = prbs(&kcfg, p.len() + extra).unwrap();
            let c = xor_stream(&p, &k).unwrap();
            prop_assert_eq!(c.len(), p.len());
            prop_assert_eq!(xor_stream(&c, &k).unwrap(), p.clone());
            prop_assert_eq!(xor_stream(&p, &BitStream::zeros(p.len())).unwrap(), p);
        }
    }
}
