//! Binary linear codes `C_F = {c(μ,ν) = (μ·F(x) + ν·x)_{x ≠ 0}}`.
//!
//! Coordinates run over `x = 1 … 2^n − 1` in increasing order. Generator
//! rows are the `m` unit-μ rows (bit order) followed by the `n` unit-ν rows,
//! so the message index of `c(μ,ν)` is `μ | ν << m`. The augmented variant
//! adds `x = 0` as a coordinate and a constant row last (index bit `m + n`).

mod ab;
mod minimality;
mod weights;

pub use ab::{ab_check, ab_from_spectrum_extremes, spectrum_extremes, ABReport};
pub use minimality::{
    bound_argument, construction2_premises, covering_scan, ding_scan, generic_ab_criterion,
    is_minimal_bruteforce, minimality_walsh_criterion, sample_ding_triples,
    theorem10_phi_value_set, BoundReport, GenericReport, Inequality, MinimalityReport,
    PremiseReport, Route, SampleReport, Theorem10Extras, Verdict, Witness, BRUTEFORCE_MAX_K,
    CRITERION_MAX_NM,
};
pub use weights::{
    codeword_weight, codeword_weight_popcount, codeword_weight_walsh, codeword_weight_walsh_of,
    popcount_distribution, table_frequencies, verify_weight_routes, walsh_distribution,
    weight_distribution, RouteCheck, TableKind, WeightDistribution, POPCOUNT_MAX_K,
};

use crate::bits::Bits;
use crate::gf2::{dot, rank_of_rows};
use crate::vectorial::{Pairing, VectorialError, VectorialFunction};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("F(0) = {0:#x}, expected 0")]
    NonzeroAtOrigin(u32),
    #[error("component μ = {mu:#x} is linear; the dimension would drop below n + m")]
    LinearComponent { mu: u32 },
    #[error("generator rows have rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("rows must be non-empty and of equal length")]
    BadRows,
    #[error("message {msg:#x} out of range for dimension {k}")]
    MessageRange { msg: u64, k: usize },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("premise failed: {0}")]
    Premise(String),
    #[error("operation needs a code built from a function")]
    NoFunction,
    #[error(transparent)]
    Vectorial(#[from] VectorialError),
}

/// A binary linear code given by generator rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    length: usize,
    rows: Vec<Bits>,
}

impl LinearCode {
    /// Rows must be linearly independent.
    pub fn from_rows(rows: Vec<Bits>) -> Result<Self, CodeError> {
        let length = rows.first().map(Bits::len).ok_or(CodeError::BadRows)?;
        if length == 0 || rows.iter().any(|r| r.len() != length) || rows.len() > 63 {
            return Err(CodeError::BadRows);
        }
        let rank = rank_of_rows(&rows);
        if rank != rows.len() {
            return Err(CodeError::RankDeficient {
                rank,
                expected: rows.len(),
            });
        }
        Ok(LinearCode { length, rows })
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.length
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Bits] {
        &self.rows
    }

    pub fn codeword(&self, msg: u64) -> Bits {
        let mut c = Bits::zeros(self.length);
        for (j, row) in self.rows.iter().enumerate() {
            if msg >> j & 1 == 1 {
                c.xor_assign(row);
            }
        }
        c
    }

    pub fn check_message(&self, msg: u64) -> Result<(), CodeError> {
        if msg >> self.rows.len() != 0 {
            return Err(CodeError::MessageRange {
                msg,
                k: self.rows.len(),
            });
        }
        Ok(())
    }

    /// Generator matrix, one hex row per line.
    pub fn generator_hex(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            s.push_str(&r.to_hex());
            s.push('\n');
        }
        s
    }
}

/// `C_F` together with the function and pairing it came from.
#[derive(Debug, Clone)]
pub struct FunctionCode {
    code: LinearCode,
    function: VectorialFunction,
    pairing: Pairing,
    augmented: bool,
}

impl FunctionCode {
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn function(&self) -> &VectorialFunction {
        &self.function
    }

    pub fn pairing(&self) -> &Pairing {
        &self.pairing
    }

    pub fn augmented(&self) -> bool {
        self.augmented
    }

    /// Message index of `c(μ,ν)`.
    pub fn message(&self, mu: u32, nu: u32) -> u64 {
        u64::from(mu) | u64::from(nu) << self.function.m()
    }

    /// `(μ, ν)` of a message index (the constant bit of augmented codes is dropped).
    pub fn split_message(&self, msg: u64) -> (u32, u32) {
        let m = self.function.m();
        let n = self.function.n();
        (
            (msg & ((1 << m) - 1)) as u32,
            ((msg >> m) & ((1 << n) - 1)) as u32,
        )
    }

    /// `[N, k, d]` with `d` from the given distribution.
    pub fn parameters(&self, dist: &WeightDistribution) -> String {
        format!(
            "[{},{},{}]",
            self.code.length(),
            self.code.dimension(),
            dist.min_distance()
        )
    }
}

/// Construction 1 under `pairing`; refuses `F(0) ≠ 0` and linear components.
pub fn build_code(f: &VectorialFunction, pairing: &Pairing) -> Result<FunctionCode, CodeError> {
    build(f, pairing, false)
}

/// The length-`2^n` code with an extra all-ones row. Never minimal; kept as a negative fixture.
pub fn build_augmented_code(
    f: &VectorialFunction,
    pairing: &Pairing,
) -> Result<FunctionCode, CodeError> {
    build(f, pairing, true)
}

fn build(
    f: &VectorialFunction,
    pairing: &Pairing,
    augmented: bool,
) -> Result<FunctionCode, CodeError> {
    pairing.check(f.n())?;
    if f.get(0) != 0 {
        return Err(CodeError::NonzeroAtOrigin(f.get(0)));
    }
    if let Some(mu) = f.affine_component() {
        return Err(CodeError::LinearComponent { mu });
    }
    let (n, m) = (f.n(), f.m());
    let start = u32::from(!augmented);
    let length = (1usize << n) - start as usize;
    let mut specs: Vec<(bool, u32)> = (0..m).map(|j| (true, j)).collect();
    specs.extend((0..n).map(|i| (false, i)));
    let mut rows: Vec<Bits> = specs
        .par_iter()
        .map(|&(is_mu, j)| {
            let w = if is_mu {
                f.component_mask(1 << j)
            } else {
                pairing.dual(1 << j)
            };
            Bits::from_fn(length, |c| {
                let x = c as u32 + start;
                let v = if is_mu { f.get(x) } else { x };
                dot(w, v) == 1
            })
        })
        .collect();
    if augmented {
        rows.push(Bits::ones(length));
    }
    let expected = rows.len();
    let code = LinearCode::from_rows(rows).map_err(|e| match e {
        CodeError::RankDeficient { rank, .. } => CodeError::RankDeficient { rank, expected },
        other => other,
    })?;
    Ok(FunctionCode {
        code,
        function: f.clone(),
        pairing: pairing.clone(),
        augmented,
    })
}
