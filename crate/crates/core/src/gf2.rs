//! Arithmetic substrate over F_2.
//!
//! Vectors of F_2^n are `u32` values with bit `i` holding coordinate `i`.
//! [`FieldContext`] realises GF(2^n) in the polynomial basis
//! `{1, α, …, α^(n-1)}`, so a field element and its coordinate vector share
//! the same integer encoding. Two pairings live side by side:
//!
//! * the vector dot product [`dot`], and
//! * the trace form `Tr_1^n(νx)`, exposed as a dot product through
//!   [`FieldContext::trace_dual`].
//!
//! They are different bilinear forms; callers pick one explicitly.

use crate::bits::Bits;
use thiserror::Error;

/// Largest ambient dimension supported by fields and subspaces.
pub const MAX_DIMENSION: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("value {value:#x} does not fit in {n} bits")]
    OutOfRange { value: u64, n: u32 },
    #[error("unsupported dimension {0}: expected 2..=16")]
    UnsupportedDimension(u32),
    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {n}")]
    Reducible { modulus: u32, n: u32 },
    #[error("{r} does not divide {n}")]
    NotADivisor { r: u32, n: u32 },
    #[error("basis vectors are linearly dependent")]
    Dependent,
}

/// Parity of `popcount(u & v)`.
#[inline]
pub fn dot(u: u32, v: u32) -> u32 {
    (u & v).count_ones() & 1
}

/// A vector of F_2^n with its dimension attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vec2n {
    value: u32,
    n: u32,
}

impl Vec2n {
    pub fn new(value: u32, n: u32) -> Result<Self, Gf2Error> {
        if n == 0 || n > 32 {
            return Err(Gf2Error::UnsupportedDimension(n));
        }
        if n < 32 && value >> n != 0 {
            return Err(Gf2Error::OutOfRange {
                value: value.into(),
                n,
            });
        }
        Ok(Vec2n { value, n })
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn dot(self, other: Vec2n) -> Result<u32, Gf2Error> {
        if self.n != other.n {
            return Err(Gf2Error::DimensionMismatch(self.n, other.n));
        }
        Ok(dot(self.value, other.value))
    }
}

/// Built-in irreducible moduli, indexed by degree. Entry `d` encodes the
/// polynomial with bit `j` as the coefficient of `x^j`.
const DEFAULT_MODULI: [u32; 17] = [
    0, 0, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x4443,
    0x8003, 0x1100b,
];

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Exhaustive trial division by every polynomial of degree `1..=n/2`.
pub fn is_irreducible(modulus: u32, n: u32) -> bool {
    if n == 0 || degree(modulus.into()) != n as i32 {
        return false;
    }
    for d in 1..=n / 2 {
        for p in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(modulus.into(), p) == 0 {
                return false;
            }
        }
    }
    true
}

/// GF(2^n) for `2 <= n <= 16` in the polynomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldContext {
    n: u32,
    modulus: u32,
    /// Bit `j` is `Tr_1^n(α^j)`, so `Tr_1^n(x) = dot(trace_mask, x)`.
    trace_mask: u32,
}

impl FieldContext {
    pub fn new(n: u32, modulus: u32) -> Result<Self, Gf2Error> {
        if !(2..=MAX_DIMENSION).contains(&n) {
            return Err(Gf2Error::UnsupportedDimension(n));
        }
        if !is_irreducible(modulus, n) {
            return Err(Gf2Error::Reducible { modulus, n });
        }
        let mut ctx = FieldContext {
            n,
            modulus,
            trace_mask: 0,
        };
        let mut mask = 0;
        for j in 0..n {
            let mut acc = 0;
            let mut y = 1 << j;
            for _ in 0..n {
                acc ^= y;
                y = ctx.mul(y, y);
            }
            debug_assert!(acc <= 1);
            mask |= acc << j;
        }
        ctx.trace_mask = mask;
        Ok(ctx)
    }

    /// The field with the built-in modulus of degree `n`, re-verified here.
    pub fn with_default_modulus(n: u32) -> Result<Self, Gf2Error> {
        if !(2..=MAX_DIMENSION).contains(&n) {
            return Err(Gf2Error::UnsupportedDimension(n));
        }
        Self::new(n, DEFAULT_MODULI[n as usize])
    }

    pub fn default_modulus(n: u32) -> Option<u32> {
        (2..=MAX_DIMENSION)
            .contains(&n)
            .then(|| DEFAULT_MODULI[n as usize])
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn order(&self) -> usize {
        1 << self.n
    }

    pub fn check(&self, a: u32) -> Result<u32, Gf2Error> {
        if a >> self.n != 0 {
            return Err(Gf2Error::OutOfRange {
                value: a.into(),
                n: self.n,
            });
        }
        Ok(a)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a >> self.n == 0 && b >> self.n == 0);
        let mut acc: u64 = 0;
        let mut a = u64::from(a);
        let mut b = b;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            a <<= 1;
            b >>= 1;
        }
        let n = self.n as i32;
        let modulus = u64::from(self.modulus);
        let mut top = degree(acc);
        while top >= n {
            acc ^= modulus << (top - n);
            top = degree(acc);
        }
        acc as u32
    }

    #[inline]
    pub fn square(&self, a: u32) -> u32 {
        self.mul(a, a)
    }

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, (1u64 << self.n) - 2))
    }

    /// `x^(2^k)`.
    pub fn frobenius(&self, mut x: u32, k: u32) -> u32 {
        for _ in 0..k {
            x = self.square(x);
        }
        x
    }

    /// `Tr_r^n(x) = x + x^(2^r) + … + x^(2^(n-r))`, an element of the subfield GF(2^r).
    pub fn trace(&self, r: u32, x: u32) -> Result<u32, Gf2Error> {
        if r == 0 || !self.n.is_multiple_of(r) {
            return Err(Gf2Error::NotADivisor { r, n: self.n });
        }
        self.check(x)?;
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.n / r {
            acc ^= y;
            y = self.frobenius(y, r);
        }
        Ok(acc)
    }

    /// `Tr_1^n(x)` as 0 or 1.
    #[inline]
    pub fn absolute_trace(&self, x: u32) -> u32 {
        dot(self.trace_mask, x)
    }

    /// The vector `w` with `Tr_1^n(μx) = dot(w, x)` for every `x`.
    pub fn trace_dual(&self, mu: u32) -> u32 {
        let mut w = 0;
        for j in 0..self.n {
            w |= self.absolute_trace(self.mul(mu, 1 << j)) << j;
        }
        w
    }

    /// GF(2^r) inside GF(2^n) as an F_2-subspace: the fixed points of `x ↦ x^(2^r)`.
    pub fn subfield(&self, r: u32) -> Result<Subspace, Gf2Error> {
        if r == 0 || !self.n.is_multiple_of(r) {
            return Err(Gf2Error::NotADivisor { r, n: self.n });
        }
        let fixed: Vec<u32> = (0..self.order() as u32)
            .filter(|&x| self.frobenius(x, r) == x)
            .collect();
        Subspace::span(self.n, &fixed)
    }
}

/// A linear subspace of F_2^n with an explicit membership bitset.
#[derive(Clone, Debug)]
pub struct Subspace {
    n: u32,
    basis: Vec<u32>,
    members: Bits,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.members == other.members
    }
}

impl Eq for Subspace {}

impl Subspace {
    /// XOR-span of `generators`; dependent generators are dropped from the basis.
    pub fn span(n: u32, generators: &[u32]) -> Result<Self, Gf2Error> {
        if n == 0 || n > MAX_DIMENSION {
            return Err(Gf2Error::UnsupportedDimension(n));
        }
        let mut members = Bits::zeros(1 << n);
        members.set(0, true);
        let mut list = vec![0u32];
        let mut basis = Vec::new();
        for &g in generators {
            if g >> n != 0 {
                return Err(Gf2Error::OutOfRange { value: g.into(), n });
            }
            if members.get(g as usize) {
                continue;
            }
            basis.push(g);
            let len = list.len();
            for k in 0..len {
                let v = list[k] ^ g;
                members.set(v as usize, true);
                list.push(v);
            }
        }
        Ok(Subspace { n, basis, members })
    }

    /// Like [`Subspace::span`] but rejects dependent vectors.
    pub fn from_basis(n: u32, basis: &[u32]) -> Result<Self, Gf2Error> {
        let s = Self::span(n, basis)?;
        if s.basis.len() != basis.len() {
            return Err(Gf2Error::Dependent);
        }
        Ok(s)
    }

    pub fn zero(n: u32) -> Result<Self, Gf2Error> {
        Self::span(n, &[])
    }

    pub fn full(n: u32) -> Result<Self, Gf2Error> {
        let units: Vec<u32> = (0..n).map(|i| 1 << i).collect();
        Self::span(n, &units)
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// Membership bitset of length `2^n`; doubles as the indicator truth table.
    pub fn members(&self) -> &Bits {
        &self.members
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        (v as usize) < self.members.len() && self.members.get(v as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter_ones().map(|v| v as u32)
    }

    pub fn len(&self) -> usize {
        1 << self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `E^⊥ = {w : dot(w, e) = 0 for all e ∈ E}`.
    pub fn dual(&self) -> Subspace {
        let orthogonal: Vec<u32> = (0..1u32 << self.n)
            .filter(|&w| self.basis.iter().all(|&b| dot(w, b) == 0))
            .collect();
        let dual = Subspace::span(self.n, &orthogonal).expect("dimension already validated");
        debug_assert_eq!(dual.dim(), self.n - self.dim());
        dual
    }

    /// True when the only common vector is zero.
    pub fn meets_trivially(&self, other: &Subspace) -> bool {
        let mut common = self.members.clone();
        common.and_assign(&other.members);
        common.count_ones() == 1
    }
}

/// Free-function form of [`Subspace::dual`].
pub fn dual_subspace(e: &Subspace) -> Subspace {
    e.dual()
}

/// Rank over F_2 of a list of packed rows.
pub fn rank_of_rows(rows: &[Bits]) -> usize {
    let mut pivots: Vec<(usize, Bits)> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for (p, pr) in &pivots {
            if r.get(*p) {
                r.xor_assign(pr);
            }
        }
        // later pivot rows were reduced by earlier ones, so one forward pass suffices
        let lead = r.iter_ones().next();
        if let Some(p) = lead {
            pivots.push((p, r));
        }
    }
    pivots.len()
}
