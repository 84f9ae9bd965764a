//! Packed, length-tagged binary sequences.
//!
//! Bit `i` lives in bit `7 - i % 8` of byte `i / 8` (MSB-first). Unused
//! trailing bits of the last byte are always zero, so two streams with the
//! same logical content compare equal byte-for-byte.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitStream {
    packed: Vec<u8>,
    len_bits: usize,
}

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            packed: Vec::with_capacity(bits.div_ceil(8)),
            len_bits: 0,
        }
    }

    pub fn zeros(len_bits: usize) -> Self {
        Self {
            packed: vec![0; len_bits.div_ceil(8)],
            len_bits,
        }
    }

    /// Builds a stream from already-packed bytes. Padding bits must be zero.
    pub fn from_packed(packed: Vec<u8>, len_bits: usize) -> Result<Self> {
        if packed.len() != len_bits.div_ceil(8) {
            return Err(Error::Format(format!(
                "{} packed bytes cannot hold exactly {} bits",
                packed.len(),
                len_bits
            )));
        }
        let spare = packed.len() * 8 - len_bits;
        if spare > 0 {
            let mask = (1u8 << spare) - 1;
            if packed[packed.len() - 1] & mask != 0 {
                return Err(Error::Format("nonzero padding bits in last byte".into()));
            }
        }
        Ok(Self { packed, len_bits })
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        bits.iter().copied().collect()
    }

    /// Parses a string of `0`/`1` characters; whitespace and `_` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = BitStream::with_capacity(text.len());
        for c in text.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                c if c.is_whitespace() || c == '_' => {}
                c => return Err(Error::input(format!("unexpected character {c:?} in bit string"))),
            }
        }
        Ok(out)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len_bits
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len_bits == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.packed
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len_bits, "bit index {i} out of range {}", self.len_bits);
        (self.packed[i >> 3] >> (7 - (i & 7))) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len_bits, "bit index {i} out of range {}", self.len_bits);
        let mask = 1u8 << (7 - (i & 7));
        if value {
            self.packed[i >> 3] |= mask;
        } else {
            self.packed[i >> 3] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.get(i);
        self.set(i, !v);
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        if self.len_bits & 7 == 0 {
            self.packed.push(0);
        }
        if bit {
            let last = self.packed.len() - 1;
            self.packed[last] |= 1 << (7 - (self.len_bits & 7));
        }
        self.len_bits += 1;
    }

    /// Appends the `width` low bits of `value`, most significant first.
    pub fn push_word_msb(&mut self, value: u64, width: u32) {
        for b in (0..width).rev() {
            self.push((value >> b) & 1 == 1);
        }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len_bits).map(move |i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().collect()
    }

    pub fn count_ones(&self) -> usize {
        self.packed.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Number of positions where the two streams differ.
    pub fn hamming(&self, other: &BitStream) -> Result<usize> {
        if self.len_bits != other.len_bits {
            return Err(Error::input(format!(
                "length mismatch: {} vs {} bits",
                self.len_bits, other.len_bits
            )));
        }
        Ok(self
            .packed
            .iter()
            .zip(&other.packed)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    /// Copy of bits `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> BitStream {
        assert!(start <= end && end <= self.len_bits);
        (start..end).map(|i| self.get(i)).collect()
    }

    pub fn truncated(&self, len_bits: usize) -> BitStream {
        self.slice(0, len_bits.min(self.len_bits))
    }

    pub fn complement(&self) -> BitStream {
        self.iter().map(|b| !b).collect()
    }

    pub fn extend_from(&mut self, other: &BitStream) {
        for b in other.iter() {
            self.push(b);
        }
    }
}

impl FromIterator<bool> for BitStream {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let iter = iter.into_iter();
        let mut out = BitStream::with_capacity(iter.size_hint().0);
        for b in iter {
            out.push(b);
        }
        out
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOW: usize = 64;
        write!(f, "BitStream({} bits: ", self.len_bits)?;
        for b in self.iter().take(SHOW) {
            f.write_str(if b { "1" } else { "0" })?;
        }
        if self.len_bits > SHOW {
            f.write_str("...")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn msb_first_packing() {
        let s = BitStream::parse("1000_0000 01").unwrap();
        assert_eq!(s.len(), 10);
        assert_eq!(s.as_bytes(), &[0x80, 0x40]);
        assert!(s.get(0));
        assert!(s.get(9));
    }

    #[test]
    fn padding_must_be_zero() {
        assert!(BitStream::from_packed(vec![0x81], 7).is_err());
        assert!(BitStream::from_packed(vec![0x80], 7).is_ok());
        assert!(BitStream::from_packed(vec![0x80, 0], 7).is_err());
    }

    #[test]
    fn set_and_flip_keep_padding_clean() {
        let mut s = BitStream::zeros(3);
        s.set(2, true);
        s.flip(0);
        assert_eq!(s.as_bytes(), &[0b1010_0000]);
        assert_eq!(s.count_ones(), 2);
    }

    #[test]
    fn hamming_rejects_length_mismatch() {
        let a = BitStream::zeros(4);
        let b = BitStream::zeros(5);
        assert!(matches!(a.hamming(&b), Err(Error::Input(_))));
    }

    proptest! {
        #[test]
        fn pack_unpack_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..=64)) {
            let s = BitStream::from_bools(&bits);
            prop_assert_eq!(s.as_bytes().len(), bits.len().div_ceil(8));
            prop_assert_eq!(s.to_bools(), bits.clone());
            let again = BitStream::from_packed(s.as_bytes().to_vec(), s.len()).unwrap();
            prop_assert_eq!(again, s);
        }
    }
}
