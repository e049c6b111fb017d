//! Concrete function families: spreads, spread-indicator functions, the
//! vectorial bent `G = (g_0, …, g_{r-1})`, the quadratically modified
//! indicator, Gold power maps, and the composed `F = (f, G)` families.
//!
//! Spread convention: F_2^{2t} is GF(2^t)², a pair `(x, y)` stored as
//! `x | y << t`. For `k < 2^t`, `E_k = {(x, λ_k x)}` where `λ_k` is the field
//! element encoded by `k`; `E_{2^t} = {(0, y)}`.

use crate::bits::Bits;
use crate::boolfun::BooleanFunction;
use crate::gf2::{FieldContext, Gf2Error, Subspace};
use crate::io::hex_opt;
use crate::vectorial::{ComponentForm, Pairing, VectorialError, VectorialFunction};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    /// A parameter constraint failed; the message names the clause.
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("invalid spread: {0}")]
    Spread(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Vectorial(#[from] VectorialError),
}

fn violated(clause: impl Into<String>) -> ConstructionError {
    ConstructionError::Constraint(clause.into())
}

/// `2^t + 1` t-dimensional subspaces of F_2^{2t} meeting pairwise in `{0}`.
#[derive(Debug, Clone)]
pub struct SpreadFamily {
    t: u32,
    subspaces: Vec<Subspace>,
    duals: Vec<Subspace>,
}

impl SpreadFamily {
    /// Validates dimensions and the exact cover of the nonzero vectors.
    pub fn new(t: u32, subspaces: Vec<Subspace>) -> Result<Self, ConstructionError> {
        let n = 2 * t;
        if subspaces.len() != (1 << t) + 1 {
            return Err(ConstructionError::Spread(format!(
                "expected {} subspaces, got {}",
                (1 << t) + 1,
                subspaces.len()
            )));
        }
        let mut seen = Bits::zeros(1 << n);
        for (k, e) in subspaces.iter().enumerate() {
            if e.n() != n || e.dim() != t {
                return Err(ConstructionError::Spread(format!(
                    "E_{k} has dimension {} in F_2^{}",
                    e.dim(),
                    e.n()
                )));
            }
            for v in e.iter().filter(|&v| v != 0) {
                if seen.get(v as usize) {
                    return Err(ConstructionError::Spread(format!(
                        "vector {v:#x} lies in E_{k} and an earlier member"
                    )));
                }
                seen.set(v as usize, true);
            }
        }
        debug_assert_eq!(seen.count_ones(), (1 << n) - 1);
        let duals = subspaces.iter().map(Subspace::dual).collect();
        Ok(SpreadFamily {
            t,
            subspaces,
            duals,
        })
    }

    /// The Desarguesian spread over GF(2^t) with its default modulus, `2 <= t <= 8`.
    pub fn desarguesian(t: u32) -> Result<Self, ConstructionError> {
        if !(2..=8).contains(&t) {
            return Err(violated(format!("2 <= t <= 8 (got t = {t})")));
        }
        desarguesian_spread(&FieldContext::with_default_modulus(t)?)
    }

    #[inline]
    pub fn t(&self) -> u32 {
        self.t
    }

    #[inline]
    pub fn n(&self) -> u32 {
        2 * self.t
    }

    /// Always `2^t + 1`.
    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn subspace(&self, k: usize) -> &Subspace {
        &self.subspaces[k]
    }

    pub fn dual(&self, k: usize) -> &Subspace {
        &self.duals[k]
    }

    pub fn indicator(&self, k: usize) -> BooleanFunction {
        BooleanFunction::new(self.n(), self.subspaces[k].members().clone())
            .expect("spread members live in F_2^{2t}")
    }

    /// `Σ_{k ∈ indices} 1_{E_k}`.
    pub fn indicator_sum(&self, indices: impl IntoIterator<Item = usize>) -> BooleanFunction {
        let mut table = Bits::zeros(1 << self.n());
        for k in indices {
            table.xor_assign(self.subspaces[k].members());
        }
        BooleanFunction::new(self.n(), table).expect("length matches")
    }
}

/// Lines of GF(2^t)² through the origin, with the field taken from `ctx`.
pub fn desarguesian_spread(ctx: &FieldContext) -> Result<SpreadFamily, ConstructionError> {
    let t = ctx.degree();
    if !(2..=8).contains(&t) {
        return Err(violated(format!("2 <= t <= 8 (got t = {t})")));
    }
    let n = 2 * t;
    let mut subspaces = Vec::with_capacity((1 << t) + 1);
    for k in 0..1u32 << t {
        let basis: Vec<u32> = (0..t)
            .map(|j| (1 << j) | (ctx.mul(k, 1 << j) << t))
            .collect();
        subspaces.push(Subspace::from_basis(n, &basis)?);
    }
    let vertical: Vec<u32> = (0..t).map(|j| 1 << (j + t)).collect();
    subspaces.push(Subspace::from_basis(n, &vertical)?);
    SpreadFamily::new(t, subspaces)
}

/// `1_{E_0} + 1_{E_{2^t}}`.
pub fn ps_f(spread: &SpreadFamily) -> BooleanFunction {
    spread.indicator_sum([0, 1 << spread.t()])
}

/// `1_{E_{2^t - 1}} + 1_{E_{2^t}}`, the partner of the complemented `g_i`.
pub fn ps_f_complemented(spread: &SpreadFamily) -> BooleanFunction {
    let top = 1usize << spread.t();
    spread.indicator_sum([top - 1, top])
}

/// `g_i = Σ_{k_i = 1} 1_{E_k} + 1_{E_{2^t}} + 1`; with `complemented` the sum runs over `k_i = 0`.
pub fn ps_g(
    spread: &SpreadFamily,
    i: u32,
    complemented: bool,
) -> Result<BooleanFunction, ConstructionError> {
    let t = spread.t();
    if i >= t {
        return Err(violated(format!("0 <= i <= t-1 (got i = {i}, t = {t})")));
    }
    let want = usize::from(!complemented);
    let indices = (0..1usize << t)
        .filter(|k| (k >> i) & 1 == want)
        .chain([1 << t]);
    Ok(spread.indicator_sum(indices).complement())
}

/// `G = (g_0, …, g_{r-1})`, bit `i` of `G(x)` is `g_i(x)`.
pub fn ps_vectorial_bent(
    spread: &SpreadFamily,
    r: u32,
    complemented: bool,
) -> Result<VectorialFunction, ConstructionError> {
    let t = spread.t();
    if !(2..=t).contains(&r) {
        return Err(violated(format!("2 <= r <= t (got r = {r}, t = {t})")));
    }
    let gs = (0..r)
        .map(|i| ps_g(spread, i, complemented))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VectorialFunction::from_fn(spread.n(), r, |x| {
        gs.iter()
            .enumerate()
            .fold(0, |acc, (i, g)| acc | g.value(x) << i)
    })?)
}

#[derive(Debug, Clone)]
pub struct ModifiedIndicator {
    pub function: BooleanFunction,
    /// Whether `a, b, a+b ∉ E^⊥`.
    pub condition_holds: bool,
}

/// `f(x) = 1_E(x) + (a·x)(b·x) + 1`.
pub fn modified_indicator(
    e: &Subspace,
    a: u32,
    b: u32,
) -> Result<ModifiedIndicator, ConstructionError> {
    let n = e.n();
    if !n.is_multiple_of(2) || e.dim() != n / 2 {
        return Err(violated(format!(
            "dim(E) = n/2 with n even (got dim {} in F_2^{n})",
            e.dim()
        )));
    }
    if a == 0 || b == 0 || a == b {
        return Err(violated("a, b nonzero and a != b"));
    }
    if a >> n != 0 || b >> n != 0 {
        return Err(violated(format!("a, b < 2^{n}")));
    }
    let dual = e.dual();
    let condition_holds = !dual.contains(a) && !dual.contains(b) && !dual.contains(a ^ b);
    let function = BooleanFunction::from_fn(n, |x| {
        let q = crate::gf2::dot(a, x) & crate::gf2::dot(b, x);
        (u32::from(e.contains(x)) ^ q ^ 1) == 1
    });
    Ok(ModifiedIndicator {
        function,
        condition_holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldParams {
    pub n: u32,
    pub i: u32,
    pub lambda: u32,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `x ↦ x^{2^i + 1}` with trace components; requires `n/gcd(n,i)` odd.
pub fn gold(
    ctx: &FieldContext,
    i: u32,
) -> Result<(VectorialFunction, GoldParams), ConstructionError> {
    let n = ctx.degree();
    if !(1..n).contains(&i) {
        return Err(violated(format!("1 <= i <= n-1 (got i = {i}, n = {n})")));
    }
    let lambda = gcd(n, i);
    if (n / lambda).is_multiple_of(2) {
        return Err(violated(format!(
            "n/λ is odd (λ = gcd({n}, {i}) = {lambda}, n/λ = {})",
            n / lambda
        )));
    }
    let e = (1u64 << i) + 1;
    let table = (0..1u32 << n).map(|x| ctx.pow(x, e)).collect();
    let f = VectorialFunction::with_form(n, n, table, ComponentForm::Trace(ctx.clone()))?;
    Ok((f, GoldParams { n, i, lambda }))
}

/// `F = (f, G)`; bit 0 of `F(x)` is `f(x)`.
pub fn concat(
    f: &BooleanFunction,
    g: &VectorialFunction,
) -> Result<VectorialFunction, ConstructionError> {
    if f.n() != g.n() {
        return Err(VectorialError::Mismatch(f.n(), g.n()).into());
    }
    let table = (0..1u32 << f.n())
        .map(|x| f.value(x) | g.get(x) << 1)
        .collect();
    Ok(VectorialFunction::with_form(
        f.n(),
        g.m() + 1,
        table,
        ComponentForm::Concat(Box::new(g.form().clone())),
    )?)
}

/// Inverse of [`concat`]; `None` unless `F` carries the concatenated form.
pub fn split_concat(f: &VectorialFunction) -> Option<(BooleanFunction, VectorialFunction)> {
    let ComponentForm::Concat(inner) = f.form() else {
        return None;
    };
    if f.m() < 2 {
        return None;
    }
    let head = BooleanFunction::from_fn(f.n(), |x| f.get(x) & 1 == 1);
    let tail = f.table().iter().map(|&y| y >> 1).collect();
    let g = VectorialFunction::with_form(f.n(), f.m() - 1, tail, (**inner).clone()).ok()?;
    Some((head, g))
}

/// Parameter record for every buildable family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    Gold {
        n: u32,
        i: u32,
        #[serde(default, with = "hex_opt", skip_serializing_if = "Option::is_none")]
        modulus: Option<u32>,
    },
    VectorialBent {
        n: u32,
        r: u32,
        #[serde(default)]
        complemented: bool,
    },
    Theorem6 {
        n: u32,
        i: u32,
        #[serde(default)]
        complemented: bool,
    },
    Theorem8 {
        n: u32,
        r: u32,
        #[serde(default, with = "hex_opt", skip_serializing_if = "Option::is_none")]
        a: Option<u32>,
        #[serde(default, with = "hex_opt", skip_serializing_if = "Option::is_none")]
        b: Option<u32>,
        #[serde(default)]
        complemented: bool,
    },
    Theorem10 {
        n: u32,
        i: u32,
        #[serde(default, with = "hex_opt", skip_serializing_if = "Option::is_none")]
        a: Option<u32>,
        #[serde(default, with = "hex_opt", skip_serializing_if = "Option::is_none")]
        b: Option<u32>,
        #[serde(default, with = "hex_opt", skip_serializing_if = "Option::is_none")]
        modulus: Option<u32>,
    },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Gold { .. } => "gold",
            FamilySpec::VectorialBent { .. } => "vectorial-bent",
            FamilySpec::Theorem6 { .. } => "theorem6",
            FamilySpec::Theorem8 { .. } => "theorem8",
            FamilySpec::Theorem10 { .. } => "theorem10",
        }
    }
}

/// A built family: the resolved parameters (defaults filled in), the
/// function, the input pairing its code uses, and interpretation notes.
#[derive(Debug, Clone)]
pub struct Family {
    pub spec: FamilySpec,
    pub function: VectorialFunction,
    pub pairing: Pairing,
    pub notes: Vec<String>,
}

fn half(n: u32) -> Result<u32, ConstructionError> {
    if !n.is_multiple_of(2) {
        return Err(violated(format!("n = 2t is even (got n = {n})")));
    }
    Ok(n / 2)
}

fn field(n: u32, modulus: Option<u32>) -> Result<FieldContext, ConstructionError> {
    Ok(match modulus {
        Some(m) => FieldContext::new(n, m)?,
        None => FieldContext::with_default_modulus(n)?,
    })
}

/// Lexicographically first `(a, b)` with `a, b, a+b` nonzero in `E_0^⊥`.
pub fn theorem8_default_pair(spread: &SpreadFamily) -> (u32, u32) {
    let dual = spread.dual(0);
    let members: Vec<u32> = dual.iter().filter(|&v| v != 0).collect();
    members
        .iter()
        .flat_map(|&a| members.iter().map(move |&b| (a, b)))
        .find(|&(a, b)| a != b && dual.contains(a ^ b))
        .expect("E_0^⊥ has dimension >= 2")
}

/// Smallest `a ∉ E`, then smallest `b ∉ E` with `a + b ∉ E`.
pub fn theorem10_default_pair(e: &Subspace) -> (u32, u32) {
    let size = 1u32 << e.n();
    let a = (1..size)
        .find(|&v| !e.contains(v))
        .expect("proper subspace");
    let b = (1..size)
        .find(|&v| !e.contains(v) && !e.contains(a ^ v))
        .expect("E has index at least 4");
    (a, b)
}

pub fn build_family(spec: &FamilySpec) -> Result<Family, ConstructionError> {
    match *spec {
        FamilySpec::Gold { n, i, modulus } => {
            let ctx = field(n, modulus)?;
            let (function, _) = gold(&ctx, i)?;
            Ok(Family {
                spec: FamilySpec::Gold {
                    n,
                    i,
                    modulus: Some(ctx.modulus()),
                },
                function,
                pairing: Pairing::FieldTrace(ctx),
                notes: vec![],
            })
        }
        FamilySpec::VectorialBent { n, r, complemented } => {
            let spread = SpreadFamily::desarguesian(half(n)?)?;
            Ok(Family {
                spec: spec.clone(),
                function: ps_vectorial_bent(&spread, r, complemented)?,
                pairing: Pairing::VectorDot,
                notes: vec![],
            })
        }
        FamilySpec::Theorem6 { n, i, complemented } => {
            let t = half(n)?;
            if t < 3 {
                return Err(violated(format!("t >= 3 (got t = {t})")));
            }
            let spread = SpreadFamily::desarguesian(t)?;
            let f = if complemented {
                ps_f_complemented(&spread)
            } else {
                ps_f(&spread)
            };
            let g = VectorialFunction::from_boolean(&ps_g(&spread, i, complemented)?);
            Ok(Family {
                spec: spec.clone(),
                function: concat(&f, &g)?,
                pairing: Pairing::VectorDot,
                notes: vec![],
            })
        }
        FamilySpec::Theorem8 {
            n,
            r,
            a,
            b,
            complemented,
        } => {
            let t = half(n)?;
            if t < 3 {
                return Err(violated(format!("t >= 3 (got t = {t})")));
            }
            let spread = SpreadFamily::desarguesian(t)?;
            let (a, b) = match (a, b) {
                (Some(a), Some(b)) => (a, b),
                (None, None) => theorem8_default_pair(&spread),
                _ => return Err(violated("a and b are given together")),
            };
            let dual0 = spread.dual(0);
            if a == 0 || b == 0 || a == b || ![a, b, a ^ b].iter().all(|&v| dual0.contains(v)) {
                return Err(violated(format!(
                    "a, b, a+b ∈ E_0^⊥ \\ {{0}} (got a = {a:#x}, b = {b:#x})"
                )));
            }
            let top = 1usize << t;
            let f = modified_indicator(spread.subspace(top), a, b)?;
            debug_assert!(f.condition_holds);
            let g = ps_vectorial_bent(&spread, r, complemented)?;
            Ok(Family {
                spec: FamilySpec::Theorem8 {
                    n,
                    r,
                    a: Some(a),
                    b: Some(b),
                    complemented,
                },
                function: concat(&f.function, &g)?,
                pairing: Pairing::VectorDot,
                notes: vec![format!(
                    "the indicator in f is read as 1_{{E_{top}}}, the vertical spread member E_{{2^t}}"
                )],
            })
        }
        FamilySpec::Theorem10 {
            n,
            i,
            a,
            b,
            modulus,
        } => {
            let t = half(n)?;
            if n <= 8 {
                return Err(violated(format!("n = 2t > 8 (got n = {n})")));
            }
            if !(2..n).contains(&i) {
                return Err(violated(format!("2 <= i <= n-1 (got i = {i})")));
            }
            let ctx = field(n, modulus)?;
            let (g, _) = gold(&ctx, i)?;
            let e = ctx.subfield(t)?;
            let (a, b) = match (a, b) {
                (Some(a), Some(b)) => (ctx.check(a)?, ctx.check(b)?),
                (None, None) => theorem10_default_pair(&e),
                _ => return Err(violated("a and b are given together")),
            };
            if e.contains(a) || e.contains(b) || e.contains(a ^ b) {
                return Err(violated(format!(
                    "a, b ∉ E and a+b ∉ E for E = F_{{2^{t}}} (got a = {a:#x}, b = {b:#x})"
                )));
            }
            // Tr(ax) = dot(τ(a), x)
            let f = modified_indicator(&e, ctx.trace_dual(a), ctx.trace_dual(b))?;
            debug_assert!(f.condition_holds);
            Ok(Family {
                spec: FamilySpec::Theorem10 {
                    n,
                    i,
                    a: Some(a),
                    b: Some(b),
                    modulus: Some(ctx.modulus()),
                },
                function: concat(&f.function, &g)?,
                pairing: Pairing::FieldTrace(ctx),
                notes: vec![
                    "no closed-form weight distribution is known for this family; \
                     the distribution reported for its code is computed output only"
                        .into(),
                ],
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::fwht;

    #[test]
    fn small_spreads_partition() {
        let s = SpreadFamily::desarguesian(2).unwrap();
        assert_eq!(s.len(), 5);
        assert!((0..5).all(|k| s.subspace(k).len() == 4));
        assert!(s.subspace(0).contains(0b0001));
        assert!(s.subspace(4).contains(0b0100));
        let s = SpreadFamily::desarguesian(3).unwrap();
        for j in 0..9 {
            assert_eq!(s.indicator(j).weight(), 8);
            for k in j + 1..9 {
                assert_eq!(s.indicator(j).and(&s.indicator(k)).unwrap().weight(), 1);
            }
        }
    }

    #[test]
    fn bad_spread_is_rejected() {
        let s = SpreadFamily::desarguesian(2).unwrap();
        let mut members: Vec<Subspace> = (0..5).map(|k| s.subspace(k).clone()).collect();
        members[1] = members[0].clone();
        assert!(matches!(
            SpreadFamily::new(2, members),
            Err(ConstructionError::Spread(_))
        ));
    }

    #[test]
    fn ps_f_spectrum_n6() {
        let s = SpreadFamily::desarguesian(3).unwrap();
        let f = ps_f(&s);
        assert!(!f.get(0));
        assert_eq!(f.weight(), 14);
        let w = fwht(&f);
        for nu in 0..64 {
            let expect = if nu == 0 {
                36
            } else if s.dual(0).contains(nu) || s.dual(8).contains(nu) {
                -12
            } else {
                4
            };
            assert_eq!(w.get(nu), expect, "ν = {nu}");
        }
    }

    #[test]
    fn ps_g_selection_and_spectrum() {
        let s = SpreadFamily::desarguesian(3).unwrap();
        let g = ps_g(&s, 0, false).unwrap();
        assert!(!g.get(0));
        let w = fwht(&g);
        for nu in 0..64u32 {
            let plus = [1usize, 3, 5, 7, 8].iter().any(|&k| s.dual(k).contains(nu));
            assert_eq!(w.get(nu), if plus { 8 } else { -8 });
        }
        assert!(ps_g(&s, 3, false).is_err());
    }

    #[test]
    fn gold_rejects_even_ratio() {
        let ctx = FieldContext::with_default_modulus(10).unwrap();
        let err = gold(&ctx, 5).unwrap_err();
        assert!(err.to_string().contains("n/λ is odd"));
        let ctx = FieldContext::with_default_modulus(3).unwrap();
        let (g, p) = gold(&ctx, 1).unwrap();
        assert_eq!((g.get(0), g.get(1)), (0, 1));
        assert_eq!(p.lambda, 1);
    }

    #[test]
    fn default_pairs() {
        let s = SpreadFamily::desarguesian(3).unwrap();
        assert_eq!(theorem8_default_pair(&s), (8, 16));
        let ctx = FieldContext::with_default_modulus(10).unwrap();
        let e = ctx.subfield(5).unwrap();
        let (a, b) = theorem10_default_pair(&e);
        assert!(!e.contains(a) && !e.contains(b) && !e.contains(a ^ b));
    }

    #[test]
    fn concat_round_trip() {
        let s = SpreadFamily::desarguesian(3).unwrap();
        let g = ps_vectorial_bent(&s, 2, false).unwrap();
        let f = ps_f(&s);
        let fg = concat(&f, &g).unwrap();
        assert_eq!(fg.get(0), 0);
        let (f2, g2) = split_concat(&fg).unwrap();
        assert_eq!((f2, g2), (f, g));
    }

    #[test]
    fn family_spec_json_shape() {
        let spec = FamilySpec::Theorem8 {
            n: 6,
            r: 2,
            a: Some(8),
            b: Some(16),
            complemented: false,
        };
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            s,
            r#"{"family":"theorem8","n":6,"r":2,"a":"0x8","b":"0x10","complemented":false}"#
        );
        assert_eq!(serde_json::from_str::<FamilySpec>(&s).unwrap(), spec);
    }
}
