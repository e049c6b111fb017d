//! Weight distributions by two routes: the Walsh formula and popcount enumeration.

use super::{CodeError, FunctionCode, LinearCode};
use crate::vectorial::{ComponentSpectra, Pairing, VectorialFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Largest dimension enumerated codeword by codeword.
pub const POPCOUNT_MAX_K: usize = 24;

/// Weight → frequency, including the zero word.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightDistribution {
    freq: BTreeMap<u64, u64>,
}

impl WeightDistribution {
    pub fn from_map(freq: BTreeMap<u64, u64>) -> Self {
        let freq = freq.into_iter().filter(|&(_, c)| c > 0).collect();
        WeightDistribution { freq }
    }

    pub fn add(&mut self, weight: u64, count: u64) {
        if count > 0 {
            *self.freq.entry(weight).or_default() += count;
        }
    }

    pub fn merge(&mut self, other: &WeightDistribution) {
        for (&w, &c) in &other.freq {
            self.add(w, c);
        }
    }

    pub fn frequency(&self, weight: u64) -> u64 {
        self.freq.get(&weight).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.freq.iter().map(|(&w, &c)| (w, c))
    }

    pub fn map(&self) -> &BTreeMap<u64, u64> {
        &self.freq
    }

    /// Σ frequencies; `2^k` for a full distribution.
    pub fn total(&self) -> u128 {
        self.freq.values().map(|&c| u128::from(c)).sum()
    }

    /// Smallest nonzero weight.
    pub fn w_min(&self) -> u64 {
        self.freq.keys().copied().find(|&w| w > 0).unwrap_or(0)
    }

    pub fn w_max(&self) -> u64 {
        self.freq.keys().copied().next_back().unwrap_or(0)
    }

    pub fn min_distance(&self) -> u64 {
        self.w_min()
    }

    /// `1+A_i z^i+…` in increasing weight order; a coefficient of 1 is omitted.
    pub fn enumerator(&self) -> String {
        let mut s = String::new();
        for (w, c) in self.entries() {
            if w == 0 {
                let _ = write!(s, "{c}");
                continue;
            }
            s.push('+');
            if c != 1 {
                let _ = write!(s, "{c}");
            }
            let _ = write!(s, "z^{w}");
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("weight,frequency\n");
        for (w, c) in self.entries() {
            let _ = writeln!(s, "{w},{c}");
        }
        s
    }

    pub fn from_csv(text: &str) -> Option<Self> {
        let mut lines = text.lines();
        if lines.next()? != "weight,frequency" {
            return None;
        }
        let mut freq = BTreeMap::new();
        for line in lines.filter(|l| !l.is_empty()) {
            let (w, c) = line.split_once(',')?;
            if freq.insert(w.parse().ok()?, c.parse().ok()?).is_some() {
                return None;
            }
        }
        Some(WeightDistribution { freq })
    }
}

/// Weight of `c(μ,ν)` from `W = W_F(μ,ν)` (ignored when `μ = 0`).
pub fn codeword_weight_walsh(n: u32, mu: u32, nu: u32, w: i64) -> u64 {
    let half = 1u64 << (n - 1);
    match (mu, nu) {
        (0, 0) => 0,
        (0, _) => half,
        _ => {
            debug_assert!(w % 2 == 0);
            (half as i64 - w / 2) as u64
        }
    }
}

/// Walsh-formula weight of a message, augmented codes included.
fn message_weight(code: &FunctionCode, msg: u64, row: Option<&[i64]>) -> u64 {
    let (mu, nu) = code.split_message(msg);
    let n = code.function.n();
    let w = row.map_or(0, |r| r[nu as usize]);
    let base = codeword_weight_walsh(n, mu, nu, w);
    let constant = msg >> (code.function.m() + n) & 1 == 1;
    if code.augmented && constant {
        (1u64 << n) - base
    } else {
        base
    }
}

pub fn codeword_weight_popcount(code: &FunctionCode, mu: u32, nu: u32) -> u64 {
    code.code.codeword(code.message(mu, nu)).count_ones()
}

/// Walsh route for a single codeword; computes the `μ` row on demand.
pub fn codeword_weight_walsh_of(code: &FunctionCode, mu: u32, nu: u32) -> Result<u64, CodeError> {
    let row = if mu == 0 {
        None
    } else {
        Some(code.function.spectrum(mu, &code.pairing)?)
    };
    Ok(codeword_weight_walsh(
        code.function.n(),
        mu,
        nu,
        row.map_or(0, |r| r.get(nu)),
    ))
}

/// Weight of `c(μ,ν)` by both routes, `(popcount, walsh)`.
pub fn codeword_weight(code: &FunctionCode, mu: u32, nu: u32) -> Result<(u64, u64), CodeError> {
    if mu >> code.function.m() != 0 || nu >> code.function.n() != 0 {
        return Err(CodeError::MessageRange {
            msg: code.message(mu, nu),
            k: code.code.dimension(),
        });
    }
    Ok((
        codeword_weight_popcount(code, mu, nu),
        codeword_weight_walsh_of(code, mu, nu)?,
    ))
}

/// Full distribution from component spectra, `O(2^m · n · 2^n)`; rows are streamed.
pub fn walsh_distribution(
    f: &VectorialFunction,
    pairing: &Pairing,
    augmented: bool,
) -> Result<WeightDistribution, CodeError> {
    let n = f.n();
    let half = 1u64 << (n - 1);
    let rows = f.map_rows(pairing, |_, row| {
        let mut d = WeightDistribution::default();
        for &w in row {
            d.add((half as i64 - w / 2) as u64, 1);
        }
        d
    })?;
    let mut dist = WeightDistribution::default();
    dist.add(0, 1);
    dist.add(half, (1 << n) - 1);
    for d in &rows {
        dist.merge(d);
    }
    if augmented {
        let full = 1u64 << n;
        let complement: Vec<(u64, u64)> = dist.entries().map(|(w, c)| (full - w, c)).collect();
        for (w, c) in complement {
            dist.add(w, c);
        }
    }
    Ok(dist)
}

/// The Walsh-route distribution of a function code.
pub fn weight_distribution(code: &FunctionCode) -> Result<WeightDistribution, CodeError> {
    walsh_distribution(&code.function, &code.pairing, code.augmented)
}

/// Visits every codeword in Gray-code order, split into independent chunks.
pub(super) fn gray_fold<A, I, V>(code: &LinearCode, init: I, visit: V) -> Vec<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, u64, u64) + Sync,
{
    let k = code.dimension();
    let hi = k.min(8);
    let low = k - hi;
    (0..1u64 << hi)
        .into_par_iter()
        .map(|h| {
            let mut acc = init();
            let mut msg = h << low;
            let mut cur = code.codeword(msg);
            visit(&mut acc, msg, cur.count_ones());
            for i in 1..1u64 << low {
                let b = i.trailing_zeros() as usize;
                cur.xor_assign(&code.rows()[b]);
                msg ^= 1 << b;
                visit(&mut acc, msg, cur.count_ones());
            }
            acc
        })
        .collect()
}

/// Distribution by enumerating all `2^k` codewords; `k <= POPCOUNT_MAX_K`.
pub fn popcount_distribution(code: &LinearCode) -> Result<WeightDistribution, CodeError> {
    if code.dimension() > POPCOUNT_MAX_K {
        return Err(CodeError::Budget(format!(
            "popcount enumeration needs k <= {POPCOUNT_MAX_K}, got k = {}",
            code.dimension()
        )));
    }
    let parts = gray_fold(code, BTreeMap::<u64, u64>::new, |acc, _, w| {
        *acc.entry(w).or_default() += 1;
    });
    let mut dist = WeightDistribution::default();
    for p in parts {
        for (w, c) in p {
            dist.add(w, c);
        }
    }
    Ok(dist)
}

/// Outcome of comparing the popcount and Walsh weights codeword by codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteCheck {
    pub exhaustive: bool,
    pub checked: u64,
    /// First disagreeing message with `(popcount, walsh)`.
    pub mismatch: Option<(u64, u64, u64)>,
}

impl RouteCheck {
    pub fn agrees(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Every codeword when `k <= POPCOUNT_MAX_K`, otherwise `samples` random messages.
pub fn verify_weight_routes(
    code: &FunctionCode,
    samples: u64,
    seed: u64,
) -> Result<RouteCheck, CodeError> {
    let k = code.code.dimension();
    let f = &code.function;
    if k <= POPCOUNT_MAX_K {
        let spectra = ComponentSpectra::compute(f, &code.pairing)?;
        let m = f.m();
        let parts = gray_fold(
            &code.code,
            || (0u64, None),
            |acc, msg, pop| {
                acc.0 += 1;
                let mu = (msg & ((1 << m) - 1)) as u32;
                let row = (mu != 0).then(|| spectra.row(mu));
                let walsh = message_weight(code, msg, row);
                if walsh != pop && acc.1.is_none_or(|(first, _, _)| msg < first) {
                    acc.1 = Some((msg, pop, walsh));
                }
            },
        );
        let checked = parts.iter().map(|p| p.0).sum();
        let mismatch = parts.iter().filter_map(|p| p.1).min();
        return Ok(RouteCheck {
            exhaustive: true,
            checked,
            mismatch,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let msgs: Vec<u64> = (0..samples).map(|_| rng.gen_range(0..1u64 << k)).collect();
    let results: Vec<Option<(u64, u64, u64)>> = msgs
        .par_iter()
        .map(|&msg| -> Result<_, CodeError> {
            let pop = code.code.codeword(msg).count_ones();
            let (mu, _) = code.split_message(msg);
            let spectrum = if mu == 0 {
                None
            } else {
                Some(f.spectrum(mu, &code.pairing)?)
            };
            let walsh = message_weight(code, msg, spectrum.as_ref().map(|s| s.values()));
            Ok((walsh != pop).then_some((msg, pop, walsh)))
        })
        .collect::<Result<_, _>>()?;
    Ok(RouteCheck {
        exhaustive: false,
        checked: samples,
        mismatch: results.into_iter().flatten().min(),
    })
}

/// Closed-form weight tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// Single amplitude `2^{(n+λ)/2}`.
    Plateaued {
        lambda: u32,
    },
    Bent,
    Ab,
    /// `F_i = (f, g_i)` on the spread, `m = 2`.
    Theorem6,
}

/// The closed-form distribution for `kind` at `(n, m)`, checked against its hypotheses.
pub fn table_frequencies(kind: TableKind, n: u32, m: u32) -> Result<WeightDistribution, CodeError> {
    let hyp = |msg: String| Err(CodeError::Hypothesis(msg));
    if !(5..=20).contains(&n) {
        return hyp(format!("4 < n <= 20 (got n = {n})"));
    }
    if m == 0 || n + m > 40 {
        return hyp(format!("1 <= m (got m = {m})"));
    }
    let p = |e: u32| 1i128 << e;
    let (pm, pn) = (p(m) - 1, p(n));
    let half = p(n - 1);
    let rows: Vec<(i128, i128)> = match kind {
        TableKind::Plateaued { lambda } => {
            if lambda > n - 4 || !(n - lambda).is_multiple_of(2) {
                return hyp(format!(
                    "0 <= λ <= n-4 and λ ≡ n (mod 2) (got λ = {lambda}, n = {n})"
                ));
            }
            let s = (n + lambda) / 2 - 1;
            let r = (n - lambda) / 2 - 1;
            vec![
                (half, pn - 1 + pm * (pn - p(n - lambda))),
                (half + p(s), pm * (p(n - lambda - 1) - p(r))),
                (half - p(s), pm * (p(n - lambda - 1) + p(r))),
            ]
        }
        TableKind::Bent => {
            if !n.is_multiple_of(2) || m > n / 2 {
                return hyp(format!("n even and m <= n/2 (got n = {n}, m = {m})"));
            }
            let s = n / 2 - 1;
            vec![
                (half, pn - 1),
                (half + p(s), pm * (half - p(s))),
                (half - p(s), pm * (half + p(s))),
            ]
        }
        TableKind::Ab => {
            if n.is_multiple_of(2) || m != n {
                return hyp(format!("n odd and m = n (got n = {n}, m = {m})"));
            }
            let s = n.div_ceil(2) - 1;
            let r = (n - 1) / 2 - 1;
            vec![
                (half, pn - 1 + (pn - 1) * half),
                (half + p(s), (pn - 1) * (p(n - 2) - p(r))),
                (half - p(s), (pn - 1) * (p(n - 2) + p(r))),
            ]
        }
        TableKind::Theorem6 => {
            if !n.is_multiple_of(2) || n < 6 || m != 2 {
                return hyp(format!(
                    "n = 2t with t >= 3 and m = 2 (got n = {n}, m = {m})"
                ));
            }
            let t = n / 2;
            vec![
                (half, pn - 1),
                (p(t + 1) - 2, 1),
                (half + p(t) - 2, p(t + 1) - 2),
                (half - 2, pn - p(t + 1) + 1),
                (half - p(t - 1), pn + p(t)),
                (half + p(t - 1), pn - p(t)),
            ]
        }
    };
    let mut dist = WeightDistribution::default();
    dist.add(0, 1);
    for (w, c) in rows {
        debug_assert!(w >= 0 && c >= 0);
        dist.add(w as u64, c as u64);
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerator_format() {
        let mut d = WeightDistribution::default();
        d.add(0, 1);
        d.add(14, 1);
        d.add(28, 72);
        assert_eq!(d.enumerator(), "1+z^14+72z^28");
        assert_eq!(d.to_csv(), "weight,frequency\n0,1\n14,1\n28,72\n");
        assert_eq!(WeightDistribution::from_csv(&d.to_csv()), Some(d.clone()));
        assert_eq!((d.w_min(), d.w_max(), d.total()), (14, 28, 74));
    }

    #[test]
    fn walsh_formula_cases() {
        assert_eq!(codeword_weight_walsh(6, 0, 0, 0), 0);
        assert_eq!(codeword_weight_walsh(6, 0, 5, 0), 32);
        assert_eq!(codeword_weight_walsh(6, 1, 5, 8), 28);
        assert_eq!(codeword_weight_walsh(6, 1, 5, -8), 36);
    }

    #[test]
    fn closed_forms_instantiated() {
        let b = table_frequencies(TableKind::Bent, 6, 3).unwrap();
        assert_eq!(b.enumerator(), "1+252z^28+63z^32+196z^36");
        let a = table_frequencies(TableKind::Ab, 7, 7).unwrap();
        assert_eq!(a.enumerator(), "1+4572z^56+8255z^64+3556z^72");
        let t = table_frequencies(TableKind::Theorem6, 6, 2).unwrap();
        assert_eq!(t.enumerator(), "1+z^14+72z^28+49z^30+63z^32+56z^36+14z^38");
        for d in [&b, &a, &t] {
            assert!(d.total().is_power_of_two());
        }
        assert!(table_frequencies(TableKind::Bent, 4, 2).is_err());
        assert!(table_frequencies(TableKind::Plateaued { lambda: 3 }, 6, 1).is_err());
    }
}
