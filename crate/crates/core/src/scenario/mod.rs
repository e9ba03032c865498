//! Scenario documents, the area × configuration run grid and sweeps.

pub mod calibrate;
mod schema;
mod sweep;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::costmodel::{evaluate, SavingsReport};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::inventory::{AreaKind, AreaProfile, CostTable};
use crate::scalar::Scalar;
use crate::sharing::{validate_with_policy, RegulatoryPolicy, SharingConfiguration};

pub use sweep::{sweep, SweepParameter, SweepPoint, SweepSpec, MAX_SWEEP_STEPS};

use schema::{Named, ScenarioDoc, SweepDoc};

#[derive(Debug, Clone, PartialEq)]
pub struct AreaInput<T> {
    pub profile: AreaProfile,
    pub table: CostTable<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub name: String,
    pub horizon_years: u32,
    /// Operator whose cost share is reported.
    pub operator_index: usize,
    pub areas: Vec<AreaInput<T>>,
    pub configurations: Vec<SharingConfiguration<T>>,
    pub policy: Option<RegulatoryPolicy>,
    pub sweep: Option<SweepSpec>,
}

impl<T: Scalar> Scenario<T> {
    /// Checks the structural invariants and runs configuration validation
    /// under the scenario policy. Any configuration error rejects the whole
    /// scenario.
    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: String| Error::InvalidScenario { reason, report: None };
        if self.areas.is_empty() {
            return Err(invalid("scenario needs at least one area".into()));
        }
        if self.configurations.is_empty() {
            return Err(invalid("scenario needs at least one configuration".into()));
        }
        if self.horizon_years == 0 {
            return Err(invalid("horizon_years must be >= 1".into()));
        }
        let mut kinds = BTreeSet::new();
        for a in &self.areas {
            a.profile.validate()?;
            if !kinds.insert(a.profile.kind) {
                return Err(invalid(format!("area `{}` listed twice", a.profile.kind)));
            }
            if a.table.area != a.profile.kind {
                return Err(invalid(format!(
                    "cost table for `{}` declares area `{}`",
                    a.profile.kind, a.table.area
                )));
            }
            a.table.validate()?;
            if !a.table.is_usable() {
                return Err(invalid(format!("cost table for `{}` is all zero", a.profile.kind)));
            }
        }
        let mut names = BTreeSet::new();
        for cfg in &self.configurations {
            if !names.insert(cfg.name.as_str()) {
                return Err(invalid(format!("configuration `{}` listed twice", cfg.name)));
            }
            cfg.check_structure()?;
            if self.operator_index >= cfg.operators {
                return Err(invalid(format!(
                    "operator_index {} out of range for `{}` ({} operators)",
                    self.operator_index, cfg.name, cfg.operators
                )));
            }
            let policy = cfg.policy.or(self.policy).unwrap_or_default();
            let report = validate_with_policy(cfg, &policy, None);
            if !report.valid {
                return Err(Error::InvalidScenario {
                    reason: report.to_string(),
                    report: Some(Box::new(report)),
                });
            }
        }
        if let Some(s) = &self.sweep {
            s.check()?;
        }
        Ok(())
    }
}

/// Parses and validates a scenario document. Cost-table references are
/// resolved against the fixture directory.
pub fn load_scenario<T: Scalar>(document: &str) -> Result<Scenario<T>> {
    load_scenario_from(document, None)
}

/// Like [`load_scenario`], resolving cost-table references relative to
/// `base_dir` first.
pub fn load_scenario_from<T: Scalar>(document: &str, base_dir: Option<&Path>) -> Result<Scenario<T>> {
    let doc: ScenarioDoc<T> =
        serde_json::from_str(document).map_err(|e| Error::MalformedScenario(e.to_string()))?;
    let invalid = |reason: String| Error::InvalidScenario { reason, report: None };

    let mut tables = BTreeMap::new();
    for (kind, entry) in doc.cost_tables {
        let table = match entry {
            Named::Inline(t) => t,
            Named::Name(reference) => {
                let text = read_reference(&reference, base_dir)?;
                CostTable::from_json(&text).map_err(|e| invalid(format!("cost table `{reference}`: {e}")))?
            }
        };
        tables.insert(kind, table);
    }

    let mut areas = Vec::new();
    for entry in doc.areas {
        let profile = match entry {
            Named::Name(n) => AreaProfile::default_for(n.parse().map_err(invalid)?),
            Named::Inline(p) => p,
        };
        let table = tables
            .remove(&profile.kind)
            .ok_or_else(|| invalid(format!("no cost table for area `{}`", profile.kind)))?;
        areas.push(AreaInput { profile, table });
    }
    if let Some(kind) = tables.keys().next() {
        return Err(invalid(format!("cost table `{kind}` has no matching area")));
    }

    let configurations = doc
        .configurations
        .into_iter()
        .map(|entry| match entry {
            Named::Name(n) => SharingConfiguration::from_preset_name(&n).map_err(|e| invalid(e.to_string())),
            Named::Inline(c) => Ok(c),
        })
        .collect::<Result<Vec<_>>>()?;

    let scenario = Scenario {
        name: doc.name,
        horizon_years: doc.horizon_years,
        operator_index: doc.operator_index,
        areas,
        configurations,
        policy: doc.policy,
        sweep: doc.sweep.map(SweepDoc::into_spec).transpose()?,
    };
    scenario.validate()?;
    Ok(scenario)
}

pub fn load_scenario_file<T: Scalar>(path: &Path) -> Result<Scenario<T>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_scenario_from(&text, path.parent())
}

fn read_reference(name: &str, base_dir: Option<&Path>) -> Result<String> {
    if let Some(dir) = base_dir {
        let candidate = dir.join(name);
        if candidate.is_file() {
            return std::fs::read_to_string(&candidate).map_err(|source| Error::Io {
                path: candidate.display().to_string(),
                source,
            });
        }
    }
    fixtures::read_fixture(name)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub scenario: String,
    pub timestamp: String,
    pub engine_version: String,
}

impl Provenance {
    pub fn now(scenario: &str) -> Self {
        Self {
            scenario: scenario.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Savings for every (area, configuration) cell, areas outermost, both in
/// scenario order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult<T> {
    pub scenario: String,
    pub horizon_years: u32,
    pub cells: Vec<SavingsReport<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl<T: Scalar> ScenarioResult<T> {
    pub fn get(&self, area: AreaKind, configuration: &str) -> Option<&SavingsReport<T>> {
        self.cells
            .iter()
            .find(|r| r.area == area && r.configuration == configuration)
    }

    pub fn area(&self, area: AreaKind) -> impl Iterator<Item = &SavingsReport<T>> {
        self.cells.iter().filter(move |r| r.area == area)
    }

    pub fn without_provenance(mut self) -> Self {
        self.provenance = None;
        self
    }
}

pub fn run_scenario<T: Scalar>(s: &Scenario<T>) -> Result<ScenarioResult<T>> {
    let grid: Vec<(usize, usize)> = (0..s.areas.len())
        .flat_map(|a| (0..s.configurations.len()).map(move |c| (a, c)))
        .collect();
    let cells = grid
        .par_iter()
        .map(|&(a, c)| {
            let area = &s.areas[a];
            let cfg = &s.configurations[c];
            evaluate(&area.table, cfg, s.horizon_years, s.operator_index).map_err(|e| Error::GridCell {
                area: area.profile.kind,
                configuration: cfg.name.clone(),
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScenarioResult {
        scenario: s.name.clone(),
        horizon_years: s.horizon_years,
        cells,
        provenance: Some(Provenance::now(&s.name)),
    })
}
