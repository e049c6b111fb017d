//! Fixed-length bit arrays packed 64 entries per word.
//!
//! Entry `i` lives in bit `i % 64` of word `i / 64`. Bits past `len` in the
//! last word are always zero, so word-level popcounts and comparisons never
//! need masking.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bits {
            len,
            words: vec![u64::MAX; len.div_ceil(64)],
        };
        b.clear_tail();
        b
    }

    /// Builds from raw words; bits beyond `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(len.div_ceil(64), 0);
        let mut b = Bits { len, words };
        b.clear_tail();
        b
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut b = Bits::zeros(len);
        for i in 0..len {
            if f(i) {
                b.words[i >> 6] |= 1 << (i & 63);
            }
        }
        b
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1 << (i & 63);
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        assert_eq!(self.len, other.len, "bit array length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_assign(&mut self, other: &Bits) {
        assert_eq!(self.len, other.len, "bit array length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn not_assign(&mut self) {
        for w in &mut self.words {
            *w = !*w;
        }
        self.clear_tail();
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &Bits) -> bool {
        assert_eq!(self.len, other.len, "bit array length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + tz)
            })
        })
    }

    /// Hex rendering: digit `d` holds entries `4d..4d+4`, entry `4d+k` in bit `k`.
    pub fn to_hex(&self) -> String {
        const DIGITS: &[u8; 16] = b"0123456789abcdef";
        let digits = self.len.div_ceil(4);
        let mut s = String::with_capacity(digits);
        for d in 0..digits {
            let nibble = (self.words[d / 16] >> ((d % 16) * 4)) & 0xf;
            s.push(DIGITS[nibble as usize] as char);
        }
        s
    }

    /// Inverse of [`Bits::to_hex`]. Rejects wrong digit counts and set padding bits.
    pub fn from_hex(len: usize, s: &str) -> Option<Self> {
        let s = s.trim();
        if s.len() != len.div_ceil(4) {
            return None;
        }
        let mut words = vec![0u64; len.div_ceil(64)];
        for (d, c) in s.chars().enumerate() {
            let nibble = u64::from(c.to_digit(16)?);
            words[d / 16] |= nibble << ((d % 16) * 4);
        }
        let b = Bits::from_words(len, words.clone());
        if b.words != words {
            return None;
        }
        Some(b)
    }

    fn clear_tail(&mut self) {
        let rem = self.len & 63;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits[{}]({})", self.len, self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_bits_stay_clear() {
        let mut b = Bits::ones(70);
        assert_eq!(b.count_ones(), 70);
        b.not_assign();
        assert!(b.is_zero());
        b.not_assign();
        assert_eq!(b.words()[1], (1 << 6) - 1);
    }

    #[test]
    fn hex_layout_is_little_endian_by_index() {
        let b = Bits::from_fn(8, |i| i == 0 || i == 5);
        assert_eq!(b.to_hex(), "12");
        assert_eq!(Bits::from_hex(8, "12"), Some(b));
        assert_eq!(Bits::from_hex(8, "1"), None);
        // padding bit 2 of a 2-entry table
        assert_eq!(Bits::from_hex(2, "4"), None);
    }

    #[test]
    fn iter_ones_crosses_words() {
        let b = Bits::from_fn(130, |i| i % 63 == 0);
        assert_eq!(b.iter_ones().collect::<Vec<_>>(), vec![0, 63, 126]);
    }
}
