//! Boolean functions as truth tables and their Walsh–Hadamard spectra.
//!
//! Index convention: the integer value of `x` is its truth-table index, and
//! bit `i` of `x` is the coordinate `x_{i+1}`. The character is
//! `(-1)^{f(x) + ν·x}` with the vector dot product; field-trace characters
//! are handled one level up, in [`crate::vectorial`].
//!
//! Every spectrum is an exact `i64` table.

use crate::bits::Bits;
use crate::constructions::SpreadFamily;
use crate::gf2::dot;
use thiserror::Error;

/// Upper bound on the number of variables of a stored truth table.
pub const MAX_VARIABLES: u32 = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoolFunError {
    #[error("unsupported number of variables {0} (max {MAX_VARIABLES})")]
    TooManyVariables(u32),
    #[error("truth table has {got} entries, expected {expected}")]
    TableLength { got: usize, expected: usize },
    #[error("functions have different numbers of variables: {0} vs {1}")]
    Mismatch(u32, u32),
    #[error("malformed hex truth table for n = {0}")]
    BadHex(u32),
    #[error("spread index set must be non-empty and within 0..={max}")]
    BadIndices { max: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BooleanFunction {
    n: u32,
    table: Bits,
}

impl BooleanFunction {
    pub fn new(n: u32, table: Bits) -> Result<Self, BoolFunError> {
        if n > MAX_VARIABLES {
            return Err(BoolFunError::TooManyVariables(n));
        }
        if table.len() != 1 << n {
            return Err(BoolFunError::TableLength {
                got: table.len(),
                expected: 1 << n,
            });
        }
        Ok(BooleanFunction { n, table })
    }

    /// # Panics
    /// If `n > MAX_VARIABLES`.
    pub fn zero(n: u32) -> Self {
        assert!(n <= MAX_VARIABLES, "too many variables");
        BooleanFunction {
            n,
            table: Bits::zeros(1 << n),
        }
    }

    /// # Panics
    /// If `n > MAX_VARIABLES`.
    pub fn from_fn(n: u32, f: impl Fn(u32) -> bool) -> Self {
        assert!(n <= MAX_VARIABLES, "too many variables");
        BooleanFunction {
            n,
            table: Bits::from_fn(1 << n, |x| f(x as u32)),
        }
    }

    /// The linear function `x ↦ a·x`.
    pub fn linear(n: u32, a: u32) -> Self {
        Self::from_fn(n, |x| dot(a, x) == 1)
    }

    pub fn from_hex(n: u32, s: &str) -> Result<Self, BoolFunError> {
        if n > MAX_VARIABLES {
            return Err(BoolFunError::TooManyVariables(n));
        }
        let table = Bits::from_hex(1 << n, s).ok_or(BoolFunError::BadHex(n))?;
        Ok(BooleanFunction { n, table })
    }

    pub fn to_hex(&self) -> String {
        self.table.to_hex()
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn table(&self) -> &Bits {
        &self.table
    }

    #[inline]
    pub fn get(&self, x: u32) -> bool {
        self.table.get(x as usize)
    }

    /// `f(x)` as 0 or 1.
    #[inline]
    pub fn value(&self, x: u32) -> u32 {
        u32::from(self.get(x))
    }

    pub fn set(&mut self, x: u32, v: bool) {
        self.table.set(x as usize, v);
    }

    pub fn weight(&self) -> u64 {
        self.table.count_ones()
    }

    pub fn xor(&self, other: &BooleanFunction) -> Result<Self, BoolFunError> {
        self.same_n(other)?;
        let mut table = self.table.clone();
        table.xor_assign(&other.table);
        Ok(BooleanFunction { n: self.n, table })
    }

    pub fn and(&self, other: &BooleanFunction) -> Result<Self, BoolFunError> {
        self.same_n(other)?;
        let mut table = self.table.clone();
        table.and_assign(&other.table);
        Ok(BooleanFunction { n: self.n, table })
    }

    pub fn complement(&self) -> Self {
        let mut table = self.table.clone();
        table.not_assign();
        BooleanFunction { n: self.n, table }
    }

    /// `(-1)^{f(x)}` for every `x`.
    pub fn signs(&self) -> Vec<i64> {
        (0..self.len())
            .map(|x| if self.table.get(x) { -1 } else { 1 })
            .collect()
    }

    /// Algebraic degree, via the binary Möbius transform of the truth table.
    pub fn degree(&self) -> u32 {
        let mut anf: Vec<u8> = (0..self.len())
            .map(|x| u8::from(self.table.get(x)))
            .collect();
        let mut h = 1;
        while h < anf.len() {
            for block in anf.chunks_mut(2 * h) {
                let (lo, hi) = block.split_at_mut(h);
                for (a, b) in lo.iter().zip(hi.iter_mut()) {
                    *b ^= *a;
                }
            }
            h *= 2;
        }
        anf.iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(i, _)| i.count_ones())
            .max()
            .unwrap_or(0)
    }

    pub fn is_affine(&self) -> bool {
        self.degree() <= 1
    }

    fn same_n(&self, other: &BooleanFunction) -> Result<(), BoolFunError> {
        if self.n != other.n {
            return Err(BoolFunError::Mismatch(self.n, other.n));
        }
        Ok(())
    }
}

/// `W_f(ν)` for every `ν`, indexed like truth tables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WalshSpectrum {
    n: u32,
    values: Vec<i64>,
}

impl WalshSpectrum {
    /// Wraps raw values; the length must be `2^n`.
    pub fn from_values(n: u32, values: Vec<i64>) -> Result<Self, BoolFunError> {
        if values.len() != 1 << n {
            return Err(BoolFunError::TableLength {
                got: values.len(),
                expected: 1 << n,
            });
        }
        Ok(WalshSpectrum { n, values })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, nu: u32) -> i64 {
        self.values[nu as usize]
    }

    pub fn max(&self) -> i64 {
        *self.values.iter().max().expect("non-empty")
    }

    pub fn min(&self) -> i64 {
        *self.values.iter().min().expect("non-empty")
    }

    pub fn max_abs(&self) -> i64 {
        max_abs(&self.values)
    }

    /// `Σ_ν W(ν)²`; equals `2^{2n}` for any Boolean function.
    pub fn energy(&self) -> i128 {
        self.values
            .iter()
            .map(|&w| i128::from(w) * i128::from(w))
            .sum()
    }

    /// `Σ_ν W(ν)`; equals `2^n (-1)^{f(0)}`.
    pub fn sum(&self) -> i64 {
        self.values.iter().sum()
    }

    pub fn nonlinearity(&self) -> i64 {
        (1i64 << (self.n - 1)) - self.max_abs() / 2
    }

    pub fn plateaued_amplitude(&self) -> Option<i64> {
        plateaued_amplitude_of(&self.values)
    }

    pub fn sign_profile(&self) -> SignProfile {
        sign_profile_of(&self.values)
    }

    /// Recovers `(-1)^{f(x)}` by applying the butterfly again and dividing by `2^n`.
    pub fn inverse_signs(&self) -> Vec<i64> {
        let mut buf = self.values.clone();
        fwht_in_place(&mut buf);
        buf.iter().map(|v| v >> self.n).collect()
    }
}

/// Unnormalised radix-2 Walsh–Hadamard butterfly over a power-of-two buffer.
pub fn fwht_in_place(buf: &mut [i64]) {
    debug_assert!(buf.len().is_power_of_two());
    let mut h = 1;
    while h < buf.len() {
        for block in buf.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

pub fn fwht(f: &BooleanFunction) -> WalshSpectrum {
    let mut values = f.signs();
    fwht_in_place(&mut values);
    WalshSpectrum { n: f.n, values }
}

pub fn nonlinearity(f: &BooleanFunction) -> i64 {
    fwht(f).nonlinearity()
}

pub fn plateaued_amplitude(f: &BooleanFunction) -> Option<i64> {
    fwht(f).plateaued_amplitude()
}

pub fn sign_profile(f: &BooleanFunction) -> SignProfile {
    fwht(f).sign_profile()
}

pub(crate) fn max_abs(values: &[i64]) -> i64 {
    values.iter().map(|v| v.abs()).max().unwrap_or(0)
}

/// `Some(Λ)` when every value lies in `{0, ±Λ}`.
pub(crate) fn plateaued_amplitude_of(values: &[i64]) -> Option<i64> {
    let amp = max_abs(values);
    (amp > 0 && values.iter().all(|&v| v == 0 || v.abs() == amp)).then_some(amp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignProfile {
    AllNonNegative,
    AllNonPositive,
    Mixed,
}

pub(crate) fn sign_profile_of(values: &[i64]) -> SignProfile {
    if values.iter().all(|&v| v >= 0) {
        SignProfile::AllNonNegative
    } else if values.iter().all(|&v| v <= 0) {
        SignProfile::AllNonPositive
    } else {
        SignProfile::Mixed
    }
}

/// Majority of three functions together with the spectrum predicted by
/// `½(W_φ1 + W_φ2 + W_φ3 − W_φ4)`, `φ4 = φ1 + φ2 + φ3`.
#[derive(Debug, Clone)]
pub struct Majority {
    pub function: BooleanFunction,
    pub predicted: WalshSpectrum,
}

pub fn combine3(
    phi1: &BooleanFunction,
    phi2: &BooleanFunction,
    phi3: &BooleanFunction,
) -> Result<Majority, BoolFunError> {
    phi1.same_n(phi2)?;
    phi1.same_n(phi3)?;
    let n = phi1.n;
    let function = BooleanFunction::from_fn(n, |x| {
        let (a, b, c) = (phi1.get(x), phi2.get(x), phi3.get(x));
        (a & b) ^ (a & c) ^ (b & c)
    });
    let phi4 = phi1.xor(phi2)?.xor(phi3)?;
    let (w1, w2, w3, w4) = (fwht(phi1), fwht(phi2), fwht(phi3), fwht(&phi4));
    let values = (0..1usize << n)
        .map(|v| {
            let s = w1.values[v] + w2.values[v] + w3.values[v] - w4.values[v];
            debug_assert!(s % 2 == 0);
            s / 2
        })
        .collect();
    Ok(Majority {
        function,
        predicted: WalshSpectrum { n, values },
    })
}

/// Closed-form spectrum of `f = Σ_{i ∈ indices} 1_{E_i}` over a spread of F_2^{2t}.
///
/// With `s = |indices|`:
/// * `W(0) = 2^n − 2s(2^t − 1) − 2f(0)`,
/// * `W(ν) = −2^{t+1} + 2s − 2f(0)` for nonzero `ν` in some `E_i^⊥`,
/// * `W(ν) = 2s − 2f(0)` otherwise.
pub fn indicator_sum_walsh(
    spread: &SpreadFamily,
    indices: &[usize],
) -> Result<WalshSpectrum, BoolFunError> {
    let count = spread.len();
    let mut chosen = vec![false; count];
    for &i in indices {
        if i >= count || chosen[i] {
            return Err(BoolFunError::BadIndices { max: count - 1 });
        }
        chosen[i] = true;
    }
    if indices.is_empty() {
        return Err(BoolFunError::BadIndices { max: count - 1 });
    }
    let t = spread.t();
    let n = 2 * t;
    let s = indices.len() as i64;
    let f0 = s & 1;
    let mut in_dual = Bits::zeros(1 << n);
    for &i in indices {
        for v in spread.dual(i).iter() {
            in_dual.set(v as usize, true);
        }
    }
    let values = (0..1usize << n)
        .map(|v| {
            if v == 0 {
                (1i64 << n) - 2 * s * ((1i64 << t) - 1) - 2 * f0
            } else if in_dual.get(v) {
                -(1i64 << (t + 1)) + 2 * s - 2 * f0
            } else {
                2 * s - 2 * f0
            }
        })
        .collect();
    Ok(WalshSpectrum { n, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(f: &BooleanFunction) -> Vec<i64> {
        (0..1u32 << f.n())
            .map(|nu| {
                (0..1u32 << f.n())
                    .map(|x| {
                        if (f.value(x) ^ dot(nu, x)) == 1 {
                            -1
                        } else {
                            1
                        }
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn constant_zero_spectrum() {
        let w = fwht(&BooleanFunction::zero(4));
        assert_eq!(w.get(0), 16);
        assert!(w.values()[1..].iter().all(|&v| v == 0));
        assert_eq!(w.sign_profile(), SignProfile::AllNonNegative);
        assert_eq!(w.plateaued_amplitude(), Some(16));
    }

    #[test]
    fn shifted_linear_spectrum() {
        let f = BooleanFunction::linear(4, 0b1010).complement();
        let w = fwht(&f);
        for nu in 0..16 {
            assert_eq!(w.get(nu), if nu == 0b1010 { -16 } else { 0 });
        }
        assert_eq!(w.sign_profile(), SignProfile::AllNonPositive);
        assert_eq!(w.nonlinearity(), 0);
        assert!(f.is_affine());
    }

    #[test]
    fn and_of_two_variables() {
        let f = BooleanFunction::from_fn(2, |x| x == 3);
        assert_eq!(naive(&f), vec![2, 2, 2, -2]);
        let w = fwht(&f);
        assert_eq!(w.values(), &[2, 2, 2, -2]);
        assert_eq!(w.nonlinearity(), 1);
        assert_eq!(w.plateaued_amplitude(), Some(2));
        assert_eq!(w.sign_profile(), SignProfile::Mixed);
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn majority_plateaued_and_flipped_origin_is_not() {
        let tt = [0, 0, 0, 1, 0, 1, 1, 1];
        let f = BooleanFunction::from_fn(3, |x| tt[x as usize] == 1);
        let w = naive(&f);
        assert_eq!(w, vec![0, 4, 4, 0, 4, 0, 0, -4]);
        // flipping f(0) shifts every coefficient by -2
        let mut g = f.clone();
        g.set(0, true);
        let wg = naive(&g);
        assert_eq!(wg, vec![-2, 2, 2, -2, 2, -2, -2, -6]);
        assert_eq!(fwht(&g).values(), &wg[..]);
        assert_eq!(plateaued_amplitude(&g), None);
    }

    #[test]
    fn bent_on_four_variables() {
        let f = BooleanFunction::from_fn(4, |x| {
            ((x & 1) & ((x >> 1) & 1)) ^ (((x >> 2) & 1) & ((x >> 3) & 1)) == 1
        });
        assert_eq!(nonlinearity(&f), 6);
        assert_eq!(plateaued_amplitude(&f), Some(4));
    }

    #[test]
    fn combine3_special_cases() {
        let f = BooleanFunction::from_fn(4, |x| x % 3 == 1);
        let m = combine3(&f, &f, &f).unwrap();
        assert_eq!(m.function, f);
        assert_eq!(m.predicted, fwht(&f));
        let g = BooleanFunction::from_fn(4, |x| x % 5 == 2);
        let z = BooleanFunction::zero(4);
        let m = combine3(&f, &g, &z).unwrap();
        assert_eq!(m.function, f.and(&g).unwrap());
        assert_eq!(m.predicted, fwht(&m.function));
    }

    #[test]
    fn degree_and_mismatch() {
        let f = BooleanFunction::from_fn(3, |x| x == 7);
        assert_eq!(f.degree(), 3);
        assert_eq!(BooleanFunction::zero(3).degree(), 0);
        assert_eq!(
            f.xor(&BooleanFunction::zero(2)),
            Err(BoolFunError::Mismatch(3, 2))
        );
    }

    #[test]
    fn inverse_recovers_signs() {
        let f = BooleanFunction::from_fn(5, |x| (x * 7) % 5 < 2);
        assert_eq!(fwht(&f).inverse_signs(), f.signs());
    }
}
