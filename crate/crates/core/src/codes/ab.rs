//! The Ashikhmin–Barg ratio test, by weights and by spectrum extremes.

use super::{CodeError, WeightDistribution};
use crate::vectorial::{Pairing, VectorialFunction};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ABReport {
    pub w_min: u64,
    pub w_max: u64,
    /// `w_min/w_max`, unreduced.
    pub ratio: String,
    /// `2 w_min > w_max`.
    pub satisfied: bool,
    /// The same verdict read off the spectrum: `2 max W − min W < 2^n`.
    pub spectral: bool,
    pub two_max_minus_min: i64,
    pub agree: bool,
}

/// `(max, min)` of `W_F(μ,ν)` over `μ ≠ 0` and all `ν`.
pub fn spectrum_extremes(
    f: &VectorialFunction,
    pairing: &Pairing,
) -> Result<(i64, i64), CodeError> {
    let rows = f.map_rows(pairing, |_, row| {
        (
            *row.iter().max().expect("non-empty"),
            *row.iter().min().expect("non-empty"),
        )
    })?;
    let max = rows.iter().map(|r| r.0).max().expect("m >= 1");
    let min = rows.iter().map(|r| r.1).min().expect("m >= 1");
    Ok((max, min))
}

pub fn ab_check(dist: &WeightDistribution, n: u32, max_w: i64, min_w: i64) -> ABReport {
    let (w_min, w_max) = (dist.w_min(), dist.w_max());
    let satisfied = 2 * w_min > w_max;
    let two_max_minus_min = 2 * max_w - min_w;
    let spectral = two_max_minus_min < 1 << n;
    ABReport {
        w_min,
        w_max,
        ratio: format!("{w_min}/{w_max}"),
        satisfied,
        spectral,
        two_max_minus_min,
        agree: satisfied == spectral,
    }
}

/// [`ab_check`] with the extremes computed from `f`.
pub fn ab_from_spectrum_extremes(
    dist: &WeightDistribution,
    f: &VectorialFunction,
    pairing: &Pairing,
) -> Result<ABReport, CodeError> {
    let (max, min) = spectrum_extremes(f, pairing)?;
    Ok(ab_check(dist, f.n(), max, min))
}
