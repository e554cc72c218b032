//! The JSON record of a relation computation.

use std::collections::BTreeMap;

use ftl_core::groebner::{RunResult, RunStats};
use ftl_core::relgen::{DegreeWindow, EpsilonMode};
use ftl_core::{CoefficientRing, Polynomial, Var};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub steps: u64,
    pub relations_seen: u64,
    pub skipped_by_prereduction: u64,
    pub gb_calls: u64,
    pub max_basis_size: usize,
}

impl From<&RunStats> for Stats {
    fn from(s: &RunStats) -> Self {
        Stats {
            steps: s.steps,
            relations_seen: s.relations_seen,
            skipped_by_prereduction: s.skipped_by_prereduction,
            gb_calls: s.gb_calls,
            max_basis_size: s.max_basis_size,
        }
    }
}

/// Field order is the serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunFile {
    pub schema_version: u32,
    pub command: String,
    pub ring: String,
    pub degree_range: [i32; 2],
    pub epsilon: String,
    pub inverted: Vec<i64>,
    pub fixed: BTreeMap<String, String>,
    pub free: Vec<String>,
    pub relations: Vec<String>,
    pub stats: Stats,
    pub incomplete: bool,
}

impl RunFile {
    pub fn from_run(
        command: &str,
        ring: CoefficientRing,
        window: DegreeWindow,
        epsilon: EpsilonMode,
        invert2: bool,
        run: &RunResult,
    ) -> Self {
        RunFile {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            ring: ring.to_string(),
            degree_range: [window.d_min, window.d_max],
            epsilon: epsilon.as_str().to_string(),
            inverted: if invert2 { vec![2] } else { Vec::new() },
            fixed: run.fixed.iter().map(|(v, p)| (v.name(), p.to_string())).collect(),
            free: run.free.iter().map(|v| v.name()).collect(),
            relations: run.relations.iter().map(|p| p.to_string()).collect(),
            stats: Stats::from(&run.stats),
            incomplete: run.incomplete,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        let f: RunFile = serde_json::from_str(s)?;
        if f.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!("unsupported schema version {}", f.schema_version)));
        }
        Ok(f)
    }

    pub fn coefficient_ring(&self) -> Result<CoefficientRing, CliError> {
        Ok(self.ring.parse()?)
    }

    pub fn relation_polynomials(&self) -> Result<Vec<Polynomial>, CliError> {
        let r = self.coefficient_ring()?;
        Ok(self.relations.iter().map(|s| Polynomial::parse(r, s)).collect::<Result<_, _>>()?)
    }

    pub fn fixed_polynomials(&self) -> Result<BTreeMap<Var, Polynomial>, CliError> {
        let r = self.coefficient_ring()?;
        self.fixed.iter().map(|(k, v)| Ok((Var::parse(k)?, Polynomial::parse(r, v)?))).collect()
    }

    pub fn free_vars(&self) -> Result<Vec<Var>, CliError> {
        Ok(self.free.iter().map(|s| Var::parse(s)).collect::<Result<_, _>>()?)
    }
}
