//! On-disk formats: function files, code bundles, verification reports.
//!
//! Scalars that are F_2 data (masks, moduli, message indices) are written as
//! `"0x…"` strings; bulk tables and generator rows as bare hex. JSON is
//! pretty-printed with a trailing newline and a fixed field order, so
//! serialize → parse → serialize is byte-identical.

use crate::codes::{
    ABReport, BoundReport, GenericReport, MinimalityReport, Route, RouteCheck, SampleReport,
    WeightDistribution,
};
use crate::constructions::{build_family, ConstructionError, FamilySpec};
use crate::gf2::{FieldContext, Gf2Error};
use crate::vectorial::{ComponentForm, Pairing, VectorialError, VectorialFunction};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Vectorial(#[from] VectorialError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

fn malformed(what: &'static str, detail: impl Into<String>) -> IoError {
    IoError::Malformed {
        what,
        detail: detail.into(),
    }
}

fn parse_hex(s: &str) -> Result<u64, String> {
    let digits = s
        .strip_prefix("0x")
        .ok_or_else(|| format!("expected 0x-prefixed hex, got {s:?}"))?;
    u64::from_str_radix(digits, 16).map_err(|e| format!("{s:?}: {e}"))
}

/// `u64` as `"0x…"`.
pub mod hex_u64 {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{v:#x}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_hex(&s).map_err(D::Error::custom)
    }
}

/// `u32` as `"0x…"`.
pub mod hex_u32 {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u32, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{v:#x}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u32, D::Error> {
        let s = String::deserialize(d)?;
        let v = super::parse_hex(&s).map_err(D::Error::custom)?;
        u32::try_from(v).map_err(D::Error::custom)
    }
}

/// `Option<u32>` as `"0x…"` or absent.
pub mod hex_opt {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<u32>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_str(&format!("{v:#x}")),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u32>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| {
            let v = super::parse_hex(&s).map_err(D::Error::custom)?;
            u32::try_from(v).map_err(D::Error::custom)
        })
        .transpose()
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, IoError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingTag {
    VectorDot,
    FieldTrace,
}

/// A vectorial function: a family parameter record, or an explicit table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub format: String,
    pub version: u32,
    pub n: u32,
    pub m: u32,
    pub pairing: PairingTag,
    /// Modulus of GF(2^n) for the trace pairing.
    #[serde(default, with = "hex_opt", skip_serializing_if = "Option::is_none")]
    pub input_modulus: Option<u32>,
    /// Present for families; the table is then rebuilt from these parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    /// Explicit value table, one hex entry per input, with dot components.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub const FUNCTION_FORMAT: &str = "mincodes-function";
pub const CODE_FORMAT: &str = "mincodes-code";
pub const REPORT_FORMAT: &str = "mincodes-verify";

/// A loaded function file.
#[derive(Debug, Clone)]
pub struct LoadedFunction {
    pub function: VectorialFunction,
    pub pairing: Pairing,
    pub family: Option<FamilySpec>,
    pub notes: Vec<String>,
}

impl FunctionFile {
    /// Builds the family and records its resolved parameters.
    pub fn from_family(spec: &FamilySpec) -> Result<(Self, LoadedFunction), IoError> {
        let family = build_family(spec)?;
        let (pairing, input_modulus) = match &family.pairing {
            Pairing::VectorDot => (PairingTag::VectorDot, None),
            Pairing::FieldTrace(ctx) => (PairingTag::FieldTrace, Some(ctx.modulus())),
        };
        let file = FunctionFile {
            format: FUNCTION_FORMAT.into(),
            version: FORMAT_VERSION,
            n: family.function.n(),
            m: family.function.m(),
            pairing,
            input_modulus,
            family: Some(family.spec.clone()),
            table: None,
            notes: family.notes.clone(),
        };
        let loaded = LoadedFunction {
            function: family.function,
            pairing: family.pairing,
            family: Some(family.spec),
            notes: family.notes,
        };
        Ok((file, loaded))
    }

    /// A table file; the table is re-read with dot-product components.
    pub fn from_table(f: &VectorialFunction, pairing: &Pairing) -> Self {
        let width = f.m().div_ceil(4) as usize;
        let (tag, input_modulus) = match pairing {
            Pairing::VectorDot => (PairingTag::VectorDot, None),
            Pairing::FieldTrace(ctx) => (PairingTag::FieldTrace, Some(ctx.modulus())),
        };
        FunctionFile {
            format: FUNCTION_FORMAT.into(),
            version: FORMAT_VERSION,
            n: f.n(),
            m: f.m(),
            pairing: tag,
            input_modulus,
            family: None,
            table: Some(f.table().iter().map(|v| format!("{v:0width$x}")).collect()),
            notes: vec![],
        }
    }

    pub fn load(&self) -> Result<LoadedFunction, IoError> {
        if self.format != FUNCTION_FORMAT || self.version != FORMAT_VERSION {
            return Err(malformed(
                "function file",
                format!("format {:?} version {}", self.format, self.version),
            ));
        }
        match (&self.family, &self.table) {
            (Some(spec), None) => {
                let (again, loaded) = FunctionFile::from_family(spec)?;
                if (again.n, again.m, again.pairing, again.input_modulus)
                    != (self.n, self.m, self.pairing, self.input_modulus)
                {
                    return Err(malformed(
                        "function file",
                        "header does not match the family parameters",
                    ));
                }
                Ok(loaded)
            }
            (None, Some(table)) => {
                let values = table
                    .iter()
                    .map(|s| u32::from_str_radix(s, 16))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| malformed("function table", e.to_string()))?;
                let function =
                    VectorialFunction::with_form(self.n, self.m, values, ComponentForm::Dot)?;
                let pairing = match (self.pairing, self.input_modulus) {
                    (PairingTag::VectorDot, None) => Pairing::VectorDot,
                    (PairingTag::FieldTrace, modulus) => Pairing::FieldTrace(match modulus {
                        Some(m) => FieldContext::new(self.n, m)?,
                        None => FieldContext::with_default_modulus(self.n)?,
                    }),
                    (PairingTag::VectorDot, Some(_)) => {
                        return Err(malformed(
                            "function file",
                            "input_modulus given with the vector-dot pairing",
                        ))
                    }
                };
                Ok(LoadedFunction {
                    function,
                    pairing,
                    family: None,
                    notes: self.notes.clone(),
                })
            }
            _ => Err(malformed(
                "function file",
                "exactly one of `family` and `table` is required",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub weight: u64,
    pub frequency: u64,
}

pub fn weight_entries(dist: &WeightDistribution) -> Vec<WeightEntry> {
    dist.entries()
        .map(|(weight, frequency)| WeightEntry { weight, frequency })
        .collect()
}

pub fn distribution_from_entries(entries: &[WeightEntry]) -> WeightDistribution {
    let mut d = WeightDistribution::default();
    for e in entries {
        d.add(e.weight, e.frequency);
    }
    d
}

/// Everything `code` produces, in one file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeBundle {
    pub format: String,
    pub version: u32,
    pub function: FunctionFile,
    pub augmented: bool,
    pub length: usize,
    pub dimension: usize,
    pub min_distance: u64,
    pub parameters: String,
    pub enumerator: String,
    pub weights: Vec<WeightEntry>,
    /// Generator rows, bare hex, in message-bit order.
    pub generator: Vec<String>,
}

/// Output of `verify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub format: String,
    pub version: u32,
    pub parameters: String,
    pub route: Route,
    pub minimal: bool,
    pub minimality: MinimalityReport,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cross_checks: Vec<MinimalityReport>,
    pub ab: ABReport,
    pub weight_routes: RouteSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generic: Option<GenericReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SampleReport>,
    /// All internal agreements held and, when a witness was reported, it re-checked.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteSummary {
    pub exhaustive: bool,
    pub checked: u64,
    pub agree: bool,
}

impl From<&RouteCheck> for RouteSummary {
    fn from(r: &RouteCheck) -> Self {
        RouteSummary {
            exhaustive: r.exhaustive,
            checked: r.checked,
            agree: r.agrees(),
        }
    }
}
