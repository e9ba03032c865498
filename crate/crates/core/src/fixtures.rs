//! Bundled fixtures: the use-case scenario, the calibrated reference cost
//! tables and the calibration targets that produced them.
//!
//! Setting `NETSHARE_FIXTURES` to a directory replaces the bundled copies.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::inventory::{AreaKind, CostTable};
use crate::scenario::{load_scenario, Scenario};

pub const FIXTURES_ENV: &str = "NETSHARE_FIXTURES";

const BUNDLED: &[(&str, &str)] = &[
    ("paper_use_case.json", include_str!("../fixtures/paper_use_case.json")),
    ("reference_costs_urban.json", include_str!("../fixtures/reference_costs_urban.json")),
    ("reference_costs_suburban.json", include_str!("../fixtures/reference_costs_suburban.json")),
    ("reference_costs_rural.json", include_str!("../fixtures/reference_costs_rural.json")),
    ("calibration_targets.json", include_str!("../fixtures/calibration_targets.json")),
];

pub fn fixture_dir_override() -> Option<PathBuf> {
    std::env::var_os(FIXTURES_ENV).map(PathBuf::from)
}

pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

/// Fixture contents by file name.
pub fn read_fixture(name: &str) -> Result<String> {
    if let Some(dir) = fixture_dir_override() {
        let path = dir.join(name);
        return std::fs::read_to_string(&path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        });
    }
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| Error::Fixture {
            name: name.to_string(),
            reason: "no such bundled fixture".into(),
        })
}

pub fn reference_table(area: AreaKind) -> Result<CostTable<f64>> {
    let name = format!("reference_costs_{area}.json");
    CostTable::from_json(&read_fixture(&name)?).map_err(|e| Error::Fixture {
        name,
        reason: e.to_string(),
    })
}

pub fn paper_use_case() -> Result<Scenario<f64>> {
    load_scenario(&read_fixture("paper_use_case.json")?)
}
