//! JSON-facing forms of specs, analyses and dual reports.
//!
//! Polynomials are LSB-first binary strings. Divisor-type generators (`F1`,
//! `F2`, `G3`) are written with `len + 1` characters so the full modulus fits;
//! block residues (`G1`, `G2`) and codewords use exactly the block length.
//! Input strings may have any length.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{Analysis, BlockStructure, CodeSpec};
use crate::dual::{DualReport, Verdict};
use crate::gf2poly::BinPoly;
use crate::ring::{RingContext, RingError};

/// A problem with one field of a JSON code spec.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("field `{field}`: {message}")]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

/// `{"r","s","t","F1","F2","G1","G2","G3"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecJson {
    pub r: usize,
    pub s: usize,
    pub t: usize,
    #[serde(rename = "F1")]
    pub f1: String,
    #[serde(rename = "F2")]
    pub f2: String,
    #[serde(rename = "G1")]
    pub g1: String,
    #[serde(rename = "G2")]
    pub g2: String,
    #[serde(rename = "G3")]
    pub g3: String,
}

impl SpecJson {
    pub fn from_parts(ctx: RingContext, [f1, f2, g1, g2, g3]: [&BinPoly; 5]) -> Self {
        let [r, s, t] = ctx.lens();
        Self {
            r,
            s,
            t,
            f1: f1.to_binary_string_width(r + 1),
            f2: f2.to_binary_string_width(s + 1),
            g1: g1.to_binary_string_width(r),
            g2: g2.to_binary_string_width(s),
            g3: g3.to_binary_string_width(t + 1),
        }
    }

    pub fn from_spec(spec: &CodeSpec) -> Self {
        Self::from_parts(spec.ctx(), [spec.f1(), spec.f2(), spec.g1(), spec.g2(), spec.g3()])
    }

    pub fn context(&self) -> Result<RingContext, FieldError> {
        RingContext::new(self.r, self.s, self.t).map_err(|e| {
            let field = match e {
                RingError::ZeroBlock { r: 0, .. } => "r",
                RingError::ZeroBlock { s: 0, .. } => "s",
                RingError::ZeroBlock { .. } => "t",
                _ => "r,s,t",
            };
            FieldError {
                field: field.into(),
                message: e.to_string(),
            }
        })
    }

    /// The generators exactly as written, not yet canonicalized.
    pub fn to_spec(&self) -> Result<CodeSpec, FieldError> {
        let ctx = self.context()?;
        let poly = |field: &str, text: &str| {
            BinPoly::parse_binary(text).map_err(|_| FieldError {
                field: field.into(),
                message: format!("{text:?} is not a nonempty string of 0 and 1"),
            })
        };
        Ok(CodeSpec::raw(
            ctx,
            poly("F1", &self.f1)?,
            poly("F2", &self.f2)?,
            poly("G1", &self.g1)?,
            poly("G2", &self.g2)?,
            poly("G3", &self.g3)?,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionJson {
    pub generator: String,
    pub dimension: usize,
    pub size: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisJson {
    pub input: SpecJson,
    /// The input after canonicalization.
    pub canonical: SpecJson,
    /// Whether `canonical` meets every canonical-form invariant. When it
    /// does not, `code` describes what the input generators actually span.
    pub canonical_form: bool,
    /// Canonical triple of the generated code; absent when the code has none.
    pub code: Option<SpecJson>,
    pub d: usize,
    /// `2^d`; absent when it does not fit in 128 bits.
    pub size: Option<u128>,
    pub min_distance: Option<u32>,
    pub projections: BTreeMap<String, ProjectionJson>,
    pub separable: bool,
    /// Minimal generating set, one `u1|u2|u3` row per word.
    pub basis: Vec<String>,
}

impl AnalysisJson {
    pub fn new(a: &Analysis) -> Self {
        let ctx = a.body.ctx();
        let projections = ["r", "s", "t"]
            .into_iter()
            .enumerate()
            .map(|(b, name)| {
                let g = &a.projections[b];
                let dimension = ctx.lens()[b] - g.deg().unwrap_or(0);
                let json = ProjectionJson {
                    generator: g.to_binary_string_width(ctx.lens()[b] + 1),
                    dimension,
                    size: 1u128 << dimension,
                };
                (name.to_string(), json)
            })
            .collect();
        Self {
            input: SpecJson::from_spec(&a.input),
            canonical: SpecJson::from_spec(&a.canonical),
            canonical_form: a.canonical.is_canonical(),
            code: a.recovered.as_ref().map(SpecJson::from_spec),
            d: a.body.dimension(),
            size: a.body.size(),
            min_distance: a.min_distance,
            projections,
            separable: a.separable,
            basis: a.body.basis().iter().map(|&w| ctx.format_word(w)).collect(),
        }
    }
}

/// A failed check together with where it failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    pub context: String,
    pub spec: Option<SpecJson>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGeneratorsJson {
    #[serde(rename = "F1")]
    pub f1: String,
    #[serde(rename = "F2")]
    pub f2: String,
    #[serde(rename = "G1")]
    pub g1: String,
    #[serde(rename = "G2")]
    pub g2: String,
    #[serde(rename = "G3")]
    pub g3: String,
    /// Whether these generate the whole dual.
    pub three_generated: bool,
}

impl DualGeneratorsJson {
    pub fn new(bs: &BlockStructure) -> Self {
        let s = SpecJson::from_parts(bs.ctx, [&bs.f1, &bs.f2, &bs.g1, &bs.g2, &bs.g3]);
        Self {
            f1: s.f1,
            f2: s.f2,
            g1: s.g1,
            g2: s.g2,
            g3: s.g3,
            three_generated: bs.three_generated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualReportJson {
    pub primal: SpecJson,
    pub dual: DualGeneratorsJson,
    pub d: usize,
    pub dual_d: usize,
    pub kappa: usize,
    pub nu: Option<String>,
    pub zeta: Option<String>,
    pub checks: BTreeMap<String, Verdict>,
    /// Reasons for every check that did not hold.
    pub details: BTreeMap<String, String>,
    pub witnesses: Vec<Witness>,
}

impl DualReportJson {
    pub fn new(report: &DualReport) -> Self {
        let primal = SpecJson::from_spec(&report.primal);
        let context = report.primal.ctx().to_string();
        Self {
            dual: DualGeneratorsJson::new(&report.dual),
            d: report.dimension,
            dual_d: report.dual_dimension,
            kappa: report.kappa,
            nu: report.nu.as_ref().map(BinPoly::to_binary_string),
            zeta: report.zeta.as_ref().map(BinPoly::to_binary_string),
            checks: report.checks.iter().map(|(k, c)| (k.to_string(), c.verdict)).collect(),
            details: report
                .checks
                .iter()
                .filter_map(|(k, c)| Some((k.to_string(), c.detail.clone()?)))
                .collect(),
            witnesses: report
                .failures()
                .map(|(k, c)| Witness {
                    check: k.to_string(),
                    context: context.clone(),
                    spec: Some(primal.clone()),
                    detail: c.detail.clone().unwrap_or_default(),
                })
                .collect(),
            primal,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{analyze, DEFAULT_ENUM_CAP};

    fn worked_example() -> SpecJson {
        SpecJson {
            r: 6,
            s: 6,
            t: 1,
            f1: "101".into(),
            f2: "010001".into(),
            g1: "000111".into(),
            g2: "0010001".into(),
            g3: "1".into(),
        }
    }

    #[test]
    fn parses_and_rewrites_with_fixed_widths() {
        let spec = worked_example().to_spec().unwrap();
        let out = SpecJson::from_spec(&spec);
        assert_eq!(out.f1, "1010000");
        assert_eq!(out.g2, "0010001");
        assert_eq!(out.g3, "10");
        assert_eq!(out.to_spec().unwrap(), spec);
    }

    #[test]
    fn field_diagnostics() {
        let mut bad = worked_example();
        bad.g2 = "01x".into();
        assert_eq!(bad.to_spec().unwrap_err().field, "G2");
        let mut bad = worked_example();
        bad.f1 = String::new();
        assert_eq!(bad.to_spec().unwrap_err().field, "F1");
        let mut bad = worked_example();
        bad.s = 0;
        assert_eq!(bad.to_spec().unwrap_err().field, "s");
    }

    #[test]
    fn analysis_of_worked_example() {
        let a = analyze(&worked_example().to_spec().unwrap(), DEFAULT_ENUM_CAP).unwrap();
        let json = AnalysisJson::new(&a);
        assert_eq!(json.canonical.g1, "001000");
        assert_eq!(json.canonical.g2, "000000");
        assert!(!json.canonical_form);
        assert_eq!(json.d, json.basis.len());
    }
}
