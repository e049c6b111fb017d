//! (n,m)-functions, their component spectra `W_F(μ,ν)`, and classification.
//!
//! A component is selected by a nonzero mask `μ`. How `μ` acts on an output
//! value depends on the [`ComponentForm`]: the dot product `μ·F(x)`, the
//! field trace `Tr_1^m(μF(x))`, or a concatenation `(f, G)` whose bit 0 is
//! `f` and whose remaining bits follow `G`'s form. The input character is
//! chosen separately by a [`Pairing`].

use crate::boolfun::{
    fwht_in_place, max_abs, plateaued_amplitude_of, BoolFunError, BooleanFunction, WalshSpectrum,
};
use crate::gf2::{dot, FieldContext};
use rayon::prelude::*;
use thiserror::Error;

/// Largest `n + m` for which all component spectra are held in memory at once.
pub const MATERIALIZE_LIMIT: u32 = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VectorialError {
    #[error("unsupported sizes n = {n}, m = {m}")]
    Size { n: u32, m: u32 },
    #[error("value table has {got} entries, expected {expected}")]
    TableLength { got: usize, expected: usize },
    #[error("entry F({x:#x}) = {value:#x} does not fit in {m} bits")]
    EntryRange { x: u32, value: u32, m: u32 },
    #[error("component mask must be nonzero and below 2^{m}, got {mu:#x}")]
    BadMask { mu: u32, m: u32 },
    #[error("input dimensions differ: {0} vs {1}")]
    Mismatch(u32, u32),
    #[error("field of degree {field} does not match dimension {dim}")]
    FieldDegree { field: u32, dim: u32 },
    #[error("n + m = {0} is too large to materialize every component spectrum")]
    TooLarge(u32),
    #[error(transparent)]
    BoolFun(#[from] BoolFunError),
}

/// How a component mask `μ` acts on output values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentForm {
    /// `μ·F(x)`.
    Dot,
    /// `Tr_1^m(μF(x))` in the given field of degree `m`.
    Trace(FieldContext),
    /// `F = (f, G)`: bit 0 of `μ` multiplies `f`, the rest act on `G` through the inner form.
    Concat(Box<ComponentForm>),
}

impl ComponentForm {
    /// The vector `w` with `component_μ(x) = dot(w, F(x))`. Linear in `μ`.
    pub fn mask(&self, mu: u32) -> u32 {
        match self {
            ComponentForm::Dot => mu,
            ComponentForm::Trace(ctx) => ctx.trace_dual(mu),
            ComponentForm::Concat(inner) => (mu & 1) | (inner.mask(mu >> 1) << 1),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ComponentForm::Dot => "dot".into(),
            ComponentForm::Trace(_) => "trace".into(),
            ComponentForm::Concat(inner) => format!("concat({})", inner.name()),
        }
    }
}

/// The input character `ν ↦ (-1)^{⟨ν,x⟩}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pairing {
    /// `⟨ν,x⟩ = ν·x`.
    VectorDot,
    /// `⟨ν,x⟩ = Tr_1^n(νx)`.
    FieldTrace(FieldContext),
}

impl Pairing {
    /// The vector `w` with `⟨ν,x⟩ = dot(w, x)`.
    pub fn dual(&self, nu: u32) -> u32 {
        match self {
            Pairing::VectorDot => nu,
            Pairing::FieldTrace(ctx) => ctx.trace_dual(nu),
        }
    }

    #[inline]
    pub fn apply(&self, nu: u32, x: u32) -> u32 {
        dot(self.dual(nu), x)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Pairing::VectorDot => "vector-dot",
            Pairing::FieldTrace(_) => "field-trace",
        }
    }

    /// Lookup table `ν ↦ dual(ν)`; `None` for the identity pairing.
    fn table(&self, n: u32) -> Option<Vec<u32>> {
        match self {
            Pairing::VectorDot => None,
            Pairing::FieldTrace(ctx) => {
                let basis: Vec<u32> = (0..n).map(|j| ctx.trace_dual(1 << j)).collect();
                Some(
                    (0..1u32 << n)
                        .map(|nu| {
                            (0..n)
                                .filter(|j| nu >> j & 1 == 1)
                                .fold(0, |acc, j| acc ^ basis[j as usize])
                        })
                        .collect(),
                )
            }
        }
    }

    pub(crate) fn check(&self, n: u32) -> Result<(), VectorialError> {
        match self {
            Pairing::FieldTrace(ctx) if ctx.degree() != n => Err(VectorialError::FieldDegree {
                field: ctx.degree(),
                dim: n,
            }),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorialFunction {
    n: u32,
    m: u32,
    table: Vec<u32>,
    form: ComponentForm,
}

impl VectorialFunction {
    /// An (n,m)-function with dot-product components.
    pub fn new(n: u32, m: u32, table: Vec<u32>) -> Result<Self, VectorialError> {
        Self::with_form(n, m, table, ComponentForm::Dot)
    }

    pub fn with_form(
        n: u32,
        m: u32,
        table: Vec<u32>,
        form: ComponentForm,
    ) -> Result<Self, VectorialError> {
        if n == 0 || n > crate::boolfun::MAX_VARIABLES || m == 0 || m > 24 {
            return Err(VectorialError::Size { n, m });
        }
        if table.len() != 1 << n {
            return Err(VectorialError::TableLength {
                got: table.len(),
                expected: 1 << n,
            });
        }
        if let Some((x, &value)) = table.iter().enumerate().find(|(_, &v)| v >> m != 0) {
            return Err(VectorialError::EntryRange {
                x: x as u32,
                value,
                m,
            });
        }
        match &form {
            ComponentForm::Trace(ctx) if ctx.degree() != m => {
                return Err(VectorialError::FieldDegree {
                    field: ctx.degree(),
                    dim: m,
                })
            }
            ComponentForm::Concat(inner) => {
                if let ComponentForm::Trace(ctx) = inner.as_ref() {
                    if ctx.degree() != m - 1 {
                        return Err(VectorialError::FieldDegree {
                            field: ctx.degree(),
                            dim: m - 1,
                        });
                    }
                }
            }
            _ => {}
        }
        Ok(VectorialFunction { n, m, table, form })
    }

    pub fn from_fn(n: u32, m: u32, f: impl Fn(u32) -> u32) -> Result<Self, VectorialError> {
        Self::new(n, m, (0..1u32 << n).map(f).collect())
    }

    /// A Boolean function viewed as an (n,1)-function.
    pub fn from_boolean(f: &BooleanFunction) -> Self {
        VectorialFunction {
            n: f.n(),
            m: 1,
            table: (0..1u32 << f.n()).map(|x| f.value(x)).collect(),
            form: ComponentForm::Dot,
        }
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn form(&self) -> &ComponentForm {
        &self.form
    }

    #[inline]
    pub fn get(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn check_mask(&self, mu: u32) -> Result<(), VectorialError> {
        if mu == 0 || mu >> self.m != 0 {
            return Err(VectorialError::BadMask { mu, m: self.m });
        }
        Ok(())
    }

    /// The vector `w` with `component(μ)(x) = dot(w, F(x))`.
    pub fn component_mask(&self, mu: u32) -> u32 {
        self.form.mask(mu)
    }

    /// The Boolean function `x ↦ μ·F(x)` (in this function's component form).
    pub fn component(&self, mu: u32) -> Result<BooleanFunction, VectorialError> {
        self.check_mask(mu)?;
        let w = self.component_mask(mu);
        Ok(BooleanFunction::from_fn(self.n, |x| {
            dot(w, self.get(x)) == 1
        }))
    }

    /// `W_F(μ,·)` under `pairing`.
    pub fn spectrum(&self, mu: u32, pairing: &Pairing) -> Result<WalshSpectrum, VectorialError> {
        self.check_mask(mu)?;
        pairing.check(self.n)?;
        let perm = pairing.table(self.n);
        let values = self.row(mu, perm.as_deref());
        Ok(WalshSpectrum::from_values(self.n, values)?)
    }

    fn row(&self, mu: u32, perm: Option<&[u32]>) -> Vec<i64> {
        let w = self.component_mask(mu);
        let mut buf: Vec<i64> = self
            .table
            .iter()
            .map(|&y| 1 - 2 * i64::from(dot(w, y)))
            .collect();
        fwht_in_place(&mut buf);
        match perm {
            None => buf,
            Some(p) => p.iter().map(|&d| buf[d as usize]).collect(),
        }
    }

    /// Runs `f(μ, W_F(μ,·))` for every nonzero `μ`, in parallel, and returns
    /// the results in increasing `μ` order. Only one row per worker is alive
    /// at a time.
    pub fn map_rows<T, G>(&self, pairing: &Pairing, f: G) -> Result<Vec<T>, VectorialError>
    where
        T: Send,
        G: Fn(u32, &[i64]) -> T + Sync,
    {
        pairing.check(self.n)?;
        let perm = pairing.table(self.n);
        Ok((1u32..1 << self.m)
            .into_par_iter()
            .map(|mu| f(mu, &self.row(mu, perm.as_deref())))
            .collect())
    }

    /// The (n, k)-function `x ↦ (μ_1·F(x), …, μ_k·F(x))` with dot components.
    pub fn project(&self, masks: &[u32]) -> Result<VectorialFunction, VectorialError> {
        for &mu in masks {
            self.check_mask(mu)?;
        }
        let ws: Vec<u32> = masks.iter().map(|&mu| self.component_mask(mu)).collect();
        Self::new(
            self.n,
            masks.len() as u32,
            self.table
                .iter()
                .map(|&y| {
                    ws.iter()
                        .enumerate()
                        .fold(0, |acc, (j, &w)| acc | dot(w, y) << j)
                })
                .collect(),
        )
    }

    /// First `μ` whose component is affine, if any.
    pub fn affine_component(&self) -> Option<u32> {
        let full = 1i64 << self.n;
        self.map_rows(&Pairing::VectorDot, |mu, row| {
            (max_abs(row) == full).then_some(mu)
        })
        .expect("dot pairing always fits")
        .into_iter()
        .flatten()
        .next()
    }
}

/// Every row `W_F(μ,·)`, `μ = 1 … 2^m − 1`, stored flat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSpectra {
    n: u32,
    m: u32,
    values: Vec<i64>,
}

impl ComponentSpectra {
    pub fn compute(f: &VectorialFunction, pairing: &Pairing) -> Result<Self, VectorialError> {
        if f.n + f.m > MATERIALIZE_LIMIT {
            return Err(VectorialError::TooLarge(f.n + f.m));
        }
        let rows = f.map_rows(pairing, |_, row| row.to_vec())?;
        Ok(ComponentSpectra {
            n: f.n,
            m: f.m,
            values: rows.concat(),
        })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// `W_F(μ,·)` for `μ ≠ 0`.
    pub fn row(&self, mu: u32) -> &[i64] {
        assert!(mu != 0 && mu >> self.m == 0, "component mask out of range");
        let len = 1usize << self.n;
        let start = (mu as usize - 1) * len;
        &self.values[start..start + len]
    }

    #[inline]
    pub fn get(&self, mu: u32, nu: u32) -> i64 {
        self.values[((mu as usize - 1) << self.n) + nu as usize]
    }

    pub fn rows(&self) -> impl Iterator<Item = (u32, &[i64])> {
        self.values
            .chunks(1 << self.n)
            .enumerate()
            .map(|(i, r)| (i as u32 + 1, r))
    }

    pub fn max_abs(&self) -> i64 {
        max_abs(&self.values)
    }

    pub fn max(&self) -> i64 {
        *self.values.iter().max().expect("non-empty")
    }

    pub fn min(&self) -> i64 {
        *self.values.iter().min().expect("non-empty")
    }
}

pub fn all_spectra(
    f: &VectorialFunction,
    pairing: &Pairing,
) -> Result<ComponentSpectra, VectorialError> {
    ComponentSpectra::compute(f, pairing)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorialKind {
    Bent,
    AlmostBent,
    /// Every component plateaued with the same amplitude.
    Plateaued {
        amplitude: i64,
    },
    /// Every component plateaued, amplitudes differ.
    PlateauedMixed,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub kind: VectorialKind,
    pub nonlinearity: i64,
}

/// Classification from component amplitudes. Almost bent requires `m = n`.
///
/// The pairing does not matter here: it only permutes each row.
pub fn classify_vectorial(f: &VectorialFunction) -> Classification {
    let stats = f
        .map_rows(&Pairing::VectorDot, |_, row| {
            (plateaued_amplitude_of(row), max_abs(row))
        })
        .expect("dot pairing always fits");
    let max = stats.iter().map(|s| s.1).max().unwrap_or(0);
    let nonlinearity = (1i64 << (f.n - 1)) - max / 2;
    let amps: Option<Vec<i64>> = stats.iter().map(|s| s.0).collect();
    let kind = match amps {
        None => VectorialKind::General,
        Some(a) if a.iter().all(|&x| x == a[0]) => {
            let amp = a[0];
            if f.n.is_multiple_of(2) && amp == 1 << (f.n / 2) {
                VectorialKind::Bent
            } else if f.n % 2 == 1 && f.m == f.n && amp == 1 << f.n.div_ceil(2) {
                VectorialKind::AlmostBent
            } else {
                VectorialKind::Plateaued { amplitude: amp }
            }
        }
        Some(_) => VectorialKind::PlateauedMixed,
    };
    Classification { kind, nonlinearity }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::fwht;

    fn naive(f: &VectorialFunction, mu: u32, nu: u32, pairing: &Pairing) -> i64 {
        let w = f.component_mask(mu);
        (0..1u32 << f.n())
            .map(|x| {
                if (dot(w, f.get(x)) ^ pairing.apply(nu, x)) == 1 {
                    -1
                } else {
                    1
                }
            })
            .sum()
    }

    #[test]
    fn identity_rows_are_spikes() {
        let id = VectorialFunction::from_fn(4, 4, |x| x).unwrap();
        let s = all_spectra(&id, &Pairing::VectorDot).unwrap();
        for (mu, row) in s.rows() {
            for nu in 0..16 {
                assert_eq!(row[nu as usize], if nu == mu { 16 } else { 0 });
            }
        }
        assert_eq!(id.component(5).unwrap(), BooleanFunction::linear(4, 5));
        assert_eq!(id.affine_component(), Some(1));
        assert!(id.component(0).is_err());
    }

    #[test]
    fn field_identity_under_trace_pairing() {
        let ctx = FieldContext::with_default_modulus(5).unwrap();
        let id = VectorialFunction::with_form(
            5,
            5,
            (0..32).collect(),
            ComponentForm::Trace(ctx.clone()),
        )
        .unwrap();
        let p = Pairing::FieldTrace(ctx);
        let s = all_spectra(&id, &p).unwrap();
        for (mu, row) in s.rows() {
            for nu in 0..32 {
                assert_eq!(row[nu as usize], if nu == mu { 32 } else { 0 });
            }
        }
    }

    #[test]
    fn single_row_matches_fwht() {
        let f = BooleanFunction::from_fn(5, |x| (x * x + 3) % 7 < 3);
        let v = VectorialFunction::from_boolean(&f);
        assert_eq!(v.spectrum(1, &Pairing::VectorDot).unwrap(), fwht(&f));
    }

    #[test]
    fn rows_match_naive_sums_for_both_pairings() {
        let ctx = FieldContext::with_default_modulus(5).unwrap();
        let f = VectorialFunction::with_form(
            5,
            5,
            (0..32).map(|x| ctx.pow(x, 3)).collect(),
            ComponentForm::Trace(ctx.clone()),
        )
        .unwrap();
        for pairing in [Pairing::VectorDot, Pairing::FieldTrace(ctx.clone())] {
            let s = all_spectra(&f, &pairing).unwrap();
            for mu in [1, 7, 19, 31] {
                for nu in 0..32 {
                    assert_eq!(s.get(mu, nu), naive(&f, mu, nu, &pairing));
                }
            }
        }
        assert_eq!(classify_vectorial(&f).kind, VectorialKind::AlmostBent);
    }

    #[test]
    fn concat_mask_layout() {
        let form = ComponentForm::Concat(Box::new(ComponentForm::Dot));
        assert_eq!(form.mask(0b1), 0b1);
        assert_eq!(form.mask(0b110), 0b110);
        assert_eq!(form.name(), "concat(dot)");
    }

    #[test]
    fn entry_range_is_checked() {
        assert!(matches!(
            VectorialFunction::new(2, 1, vec![0, 1, 2, 0]),
            Err(VectorialError::EntryRange { x: 2, .. })
        ));
    }

    #[test]
    fn projection_keeps_selected_components() {
        let f = VectorialFunction::from_fn(4, 3, |x| (x * 5 + 1) & 7).unwrap();
        let p = f.project(&[3, 4]).unwrap();
        assert_eq!(p.component(1).unwrap(), f.component(3).unwrap());
        assert_eq!(p.component(3).unwrap(), f.component(7).unwrap());
    }
}
