//! Techno-economic model of mobile network infrastructure sharing.
//!
//! Cost tables per area feed a cumulative CAPEX/OPEX model; sharing
//! configurations split the cost of shared element classes between
//! operators, and savings reports compare the result against the
//! stand-alone baseline. Rule tables cover qualitative sharing advice.
//!
//! All cost arithmetic is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.

pub mod advisor;
pub mod costmodel;
pub mod error;
pub mod fixtures;
pub mod inventory;
pub mod scalar;
pub mod scenario;
pub mod sharing;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use costmodel::{apply_sharing, config_delta, cumulative_cost, evaluate, savings_report, SavingLedger};
pub use inventory::{
    build_inventory, check_repartition, default_constraints, AreaKind, AreaProfile, ElementClass, Ledger,
    Market,
};
pub use scenario::{load_scenario, run_scenario, sweep};
pub use sharing::{sharing_level, validate_configuration, Preset};

pub type CostTable = inventory::CostTable<f64>;
pub type CostTableF32 = inventory::CostTable<f32>;
pub type CostBreakdown = costmodel::CostBreakdown<f64>;
pub type CostBreakdownF32 = costmodel::CostBreakdown<f32>;
pub type SavingsReport = costmodel::SavingsReport<f64>;
pub type SavingsReportF32 = costmodel::SavingsReport<f32>;
pub type SavingsDelta = costmodel::SavingsDelta<f64>;
pub type SharingConfiguration = sharing::SharingConfiguration<f64>;
pub type SharingConfigurationF32 = sharing::SharingConfiguration<f32>;
pub type Scenario = scenario::Scenario<f64>;
pub type ScenarioResult = scenario::ScenarioResult<f64>;
pub type SweepPoint = scenario::SweepPoint<f64>;
