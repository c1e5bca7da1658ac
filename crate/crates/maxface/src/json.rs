//! JSON shapes: coefficient arrays, report schemas and the custom-data input.

use anyhow::{anyhow, bail, Result};
use maxface_core::algebra::{Chart, ComplexRational, CurveFunction, MeromorphicForm, PointLocus};
use maxface_core::periods::{LoopPeriod, PeriodReport, Verdict};
use maxface_core::surface::{Domain, InvolutionSpec, LoopId};
use maxface_core::weierstrass::{EndData, TopologyReport, WeierstrassData};
use maxface_core::{Poly, C64};
use serde::{Deserialize, Serialize};

use crate::catalog::Expected;
use crate::UsageError;

/// `[re, im]`
pub type JsonComplex = [f64; 2];

pub fn to_json(c: C64) -> JsonComplex {
    [c.re, c.im]
}

pub fn from_json(c: JsonComplex) -> C64 {
    C64::new(c[0], c[1])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: Vec<JsonComplex>,
    pub den: Vec<JsonComplex>,
}

impl From<&ComplexRational> for RationalJson {
    fn from(r: &ComplexRational) -> Self {
        let coeffs = |p: &Poly| p.coeffs().iter().map(|c| to_json(*c)).collect();
        RationalJson { num: coeffs(r.numerator()), den: coeffs(r.denominator()) }
    }
}

impl RationalJson {
    pub fn to_rational(&self) -> Result<ComplexRational> {
        let poly = |v: &[JsonComplex]| Poly::new(v.iter().map(|c| from_json(*c)).collect());
        Ok(ComplexRational::new(poly(&self.num), poly(&self.den))?)
    }
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::WellDefined => "well-defined",
        Verdict::Obstructed => "obstructed",
    }
}

fn loop_name(id: LoopId) -> String {
    match id {
        LoopId::Gamma1 => "gamma1".into(),
        LoopId::Gamma2 => "gamma2".into(),
        LoopId::Puncture(i) => format!("puncture{i}"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopJson {
    pub id: String,
    pub horizontal_value: JsonComplex,
    pub vertical_value: f64,
    pub tolerance: f64,
    pub well_defined: bool,
}

impl From<&LoopPeriod> for LoopJson {
    fn from(l: &LoopPeriod) -> Self {
        LoopJson {
            id: loop_name(l.id),
            horizontal_value: to_json(l.horizontal_value),
            vertical_value: l.vertical_value,
            tolerance: l.tolerance,
            well_defined: l.well_defined,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodReportJson {
    pub label: String,
    pub loops: Vec<LoopJson>,
    pub max_residual: f64,
    pub verdict: String,
}

impl PeriodReportJson {
    pub fn new(label: &str, r: &PeriodReport) -> Self {
        PeriodReportJson {
            label: label.to_string(),
            loops: r.loops.iter().map(LoopJson::from).collect(),
            max_residual: r.max_residual(),
            verdict: verdict_str(r.verdict).into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndJson {
    pub point: PointJson,
    pub mu: i32,
    pub ord_phi: [u32; 3],
    pub residues: [JsonComplex; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityJson {
    pub deg_even: bool,
    pub deg_at_least_4: bool,
    pub embedded_ends_even_genus: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyJson {
    pub label: String,
    pub deg_g: usize,
    pub chi_bar: i32,
    pub chi_bar_quotient: Option<i32>,
    pub ends: Vec<EndJson>,
    pub jm_residual: i64,
    pub quotient_residual: Option<i64>,
    pub parity_flags: ParityJson,
    pub verdict: String,
}

impl TopologyJson {
    pub fn new(label: &str, t: &TopologyReport, ends: &[EndData], verdict: Verdict) -> Self {
        TopologyJson {
            label: label.to_string(),
            deg_g: t.deg_g,
            chi_bar: t.chi_bar,
            chi_bar_quotient: t.chi_bar_quotient,
            ends: ends
                .iter()
                .map(|e| EndJson { point: PointJson::from(&e.point), mu: e.mu, ord_phi: e.ord_phi, residues: e.residues.map(to_json) })
                .collect(),
            jm_residual: t.jm_residual,
            quotient_residual: t.quotient_residual,
            parity_flags: ParityJson {
                deg_even: t.parity.deg_even,
                deg_at_least_4: t.parity.deg_at_least_4,
                embedded_ends_even_genus: t.parity.embedded_ends_even_genus,
            },
            verdict: verdict_str(verdict).into(),
        }
    }
}

/// A point of the compact model: `{"z": [re, im]}` or `{"z": "infinity"}`,
/// with an optional sheet `w`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub z: ZJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<JsonComplex>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZJson {
    Finite(JsonComplex),
    Named(String),
}

impl From<&PointLocus> for PointJson {
    fn from(p: &PointLocus) -> Self {
        let z = match p.chart {
            Chart::Finite(z) => ZJson::Finite(to_json(z)),
            Chart::Infinity => ZJson::Named("infinity".into()),
        };
        PointJson { z, w: p.sheet.map(to_json) }
    }
}

impl PointJson {
    pub fn to_locus(&self) -> Result<PointLocus> {
        let chart = match &self.z {
            ZJson::Finite(z) => Chart::Finite(from_json(*z)),
            ZJson::Named(s) if s == "infinity" => Chart::Infinity,
            ZJson::Named(s) => bail!(UsageError(format!("unknown point {s:?}"))),
        };
        Ok(PointLocus { chart, sheet: self.w.map(from_json) })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainJson {
    PuncturedPlane { punctures: Vec<JsonComplex> },
    RootCurve { f: RationalJson, removed: Vec<PointJson> },
}

/// `a + b w`; `b` defaults to zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveFunctionJson {
    pub a: RationalJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<RationalJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvolutionJson {
    PlaneAntipodal,
    CurveAntipodal,
    PlaneConjugateAntipodal,
}

impl From<InvolutionJson> for InvolutionSpec {
    fn from(i: InvolutionJson) -> Self {
        match i {
            InvolutionJson::PlaneAntipodal => InvolutionSpec::PlaneAntipodal,
            InvolutionJson::CurveAntipodal => InvolutionSpec::CurveAntipodal,
            InvolutionJson::PlaneConjugateAntipodal => InvolutionSpec::PlaneConjugateAntipodal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedJson {
    pub deg_g: usize,
    pub mus: Vec<i32>,
    pub verdict: String,
    #[serde(default)]
    pub jm_residual: i64,
    #[serde(default = "yes")]
    pub topology_pass: bool,
    #[serde(default)]
    pub branched: bool,
}

fn yes() -> bool {
    true
}

impl ExpectedJson {
    pub fn to_expected(&self) -> Result<Expected> {
        let verdict = match self.verdict.as_str() {
            "well-defined" => Verdict::WellDefined,
            "obstructed" => Verdict::Obstructed,
            v => bail!(UsageError(format!("unknown verdict {v:?}"))),
        };
        Ok(Expected {
            deg_g: self.deg_g,
            mus: self.mus.clone(),
            verdict,
            jm_residual: self.jm_residual,
            topology_pass: self.topology_pass,
            branched: self.branched,
        })
    }
}

/// Custom Weierstrass data. Compact topology is metadata and is never
/// inferred from the coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataJson {
    pub label: String,
    pub domain: DomainJson,
    pub g: CurveFunctionJson,
    /// Coefficient of `dz`.
    pub phi3: CurveFunctionJson,
    #[serde(default)]
    pub involution: Option<InvolutionJson>,
    pub ends: Vec<PointJson>,
    pub chi_bar: i32,
    #[serde(default)]
    pub quotient_chi: Option<i32>,
    #[serde(default)]
    pub expected: Option<ExpectedJson>,
}

impl DataJson {
    pub fn to_data(&self) -> Result<WeierstrassData> {
        let (domain, f) = match &self.domain {
            DomainJson::PuncturedPlane { punctures } => (Domain::punctured_plane(punctures.iter().map(|c| from_json(*c)).collect()), None),
            DomainJson::RootCurve { f, removed } => {
                let f = f.to_rational()?;
                let removed = removed.iter().map(PointJson::to_locus).collect::<Result<Vec<_>>>()?;
                (Domain::root_curve(f.clone(), removed)?, Some(f))
            }
        };
        let function = |j: &CurveFunctionJson| -> Result<CurveFunction> {
            let a = j.a.to_rational()?;
            match (&j.b, &f) {
                (None, _) => Ok(CurveFunction::rational(a)),
                (Some(b), Some(f)) => Ok(CurveFunction::on_curve(a, b.to_rational()?, f.clone())),
                (Some(_), None) => Err(anyhow!(UsageError("a w-part needs a root_curve domain".into()))),
            }
        };
        let ends = self.ends.iter().map(PointJson::to_locus).collect::<Result<Vec<_>>>()?;
        let data = WeierstrassData::new(
            domain,
            function(&self.g)?,
            MeromorphicForm::new(function(&self.phi3)?),
            self.involution.map(InvolutionSpec::from),
            ends,
            self.label.clone(),
        )?;
        Ok(data)
    }
}
