//! JSON form of a single law: a formal group law, a 2-valued formal group
//! law or a formal ternary law.

use std::collections::BTreeMap;

use ftl_core::fgl::Fgl;
use ftl_core::ftl::Ftl;
use ftl_core::mvseries::MSeries;
use ftl_core::{CoefficientRing, Polynomial, Var};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LawKind {
    #[serde(rename = "fgl")]
    Fgl,
    #[serde(rename = "2fgl")]
    TwoFgl,
    #[serde(rename = "ftl")]
    Ftl,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawFile {
    pub schema_version: u32,
    pub kind: LawKind,
    pub ring: String,
    /// "free", "+1" or "-1".
    pub epsilon: String,
    pub truncation: u32,
    pub variables: Vec<String>,
    /// `F` for a formal group law, `F_1 .. F_n` otherwise.
    pub components: Vec<String>,
    /// Relations of the coefficient ring besides ε² = 1.
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<BTreeMap<String, String>>,
}

pub fn epsilon_str(e: Option<i64>) -> String {
    match e {
        None => "free".into(),
        Some(1) => "+1".into(),
        Some(_) => "-1".into(),
    }
}

fn parse_epsilon(s: &str) -> Result<Option<i64>, CliError> {
    match s {
        "free" => Ok(None),
        "+1" | "1" => Ok(Some(1)),
        "-1" => Ok(Some(-1)),
        _ => Err(CliError::Usage(format!("bad epsilon `{s}`"))),
    }
}

impl LawFile {
    fn from_series(kind: LawKind, s: &MSeries, epsilon: Option<i64>, relations: &[Polynomial]) -> Self {
        LawFile {
            schema_version: SCHEMA_VERSION,
            kind,
            ring: s.ring().to_string(),
            epsilon: epsilon_str(epsilon),
            truncation: s.truncation(),
            variables: s.vars().iter().map(|v| v.name()).collect(),
            components: s.components().iter().map(|c| c.to_string()).collect(),
            relations: relations.iter().map(|p| p.to_string()).collect(),
            report: None,
        }
    }

    pub fn from_ftl(f: &Ftl) -> Self {
        LawFile::from_series(LawKind::Ftl, &f.series, f.epsilon, &f.relations)
    }

    pub fn from_two_fgl(s: &MSeries, epsilon: Option<i64>, relations: &[Polynomial]) -> Self {
        LawFile::from_series(LawKind::TwoFgl, s, epsilon, relations)
    }

    pub fn from_fgl(f: &Fgl) -> Self {
        LawFile {
            schema_version: SCHEMA_VERSION,
            kind: LawKind::Fgl,
            ring: f.ring().to_string(),
            epsilon: "-1".into(),
            truncation: f.truncation(),
            variables: vec!["x".into(), "y".into()],
            components: vec![f.polynomial().to_string()],
            relations: Vec::new(),
            report: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        let f: LawFile = serde_json::from_str(s)?;
        if f.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!("unsupported schema version {}", f.schema_version)));
        }
        Ok(f)
    }

    pub fn ring(&self) -> Result<CoefficientRing, CliError> {
        Ok(self.ring.parse()?)
    }

    pub fn epsilon_value(&self) -> Result<Option<i64>, CliError> {
        parse_epsilon(&self.epsilon)
    }

    pub fn relation_polynomials(&self) -> Result<Vec<Polynomial>, CliError> {
        let r = self.ring()?;
        Ok(self.relations.iter().map(|s| Polynomial::parse(r, s)).collect::<Result<_, _>>()?)
    }

    pub fn series(&self) -> Result<MSeries, CliError> {
        let r = self.ring()?;
        let vars = self.variables.iter().map(|s| Var::parse(s)).collect::<Result<Vec<_>, _>>()?;
        let comps = self.components.iter().map(|s| Polynomial::parse(r, s)).collect::<Result<Vec<_>, _>>()?;
        Ok(MSeries::new(r, vars, comps, self.truncation)?)
    }

    pub fn to_ftl(&self) -> Result<Ftl, CliError> {
        if self.kind != LawKind::Ftl {
            return Err(CliError::Usage("expected a formal ternary law file".into()));
        }
        Ok(Ftl::new(self.series()?, self.epsilon_value()?, "file")?.with_relations(self.relation_polynomials()?))
    }

    pub fn to_fgl(&self) -> Result<Fgl, CliError> {
        if self.kind != LawKind::Fgl || self.components.len() != 1 {
            return Err(CliError::Usage("expected a formal group law file".into()));
        }
        let f = Polynomial::parse(self.ring()?, &self.components[0])?;
        Ok(Fgl::new(f, self.truncation)?)
    }
}
