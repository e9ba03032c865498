//! Cumulative cost over the amortization horizon, the sharing split rule and
//! savings reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inventory::{AreaKind, CostTable, ElementClass, Ledger};
use crate::scalar::{pct, Scalar};
use crate::sharing::SharingConfiguration;

pub const DEFAULT_HORIZON_YEARS: u32 = 5;

/// CAPEX counted once plus OPEX accumulated over the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassCost<T> {
    pub capex: T,
    pub opex_cumulative: T,
}

impl<T: Scalar> ClassCost<T> {
    pub fn total(&self) -> T {
        self.capex + self.opex_cumulative
    }

    pub fn get(&self, ledger: Ledger) -> T {
        match ledger {
            Ledger::Capex => self.capex,
            Ledger::Opex => self.opex_cumulative,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown<T> {
    pub horizon_years: u32,
    pub per_class: BTreeMap<ElementClass, ClassCost<T>>,
    pub capex_total: T,
    pub opex_cumulative_total: T,
    pub grand_total: T,
}

impl<T: Scalar> CostBreakdown<T> {
    fn from_classes(horizon_years: u32, per_class: BTreeMap<ElementClass, ClassCost<T>>) -> Self {
        let capex_total = per_class.values().map(|c| c.capex).sum();
        let opex_cumulative_total = per_class.values().map(|c| c.opex_cumulative).sum();
        Self {
            horizon_years,
            per_class,
            capex_total,
            opex_cumulative_total,
            grand_total: capex_total + opex_cumulative_total,
        }
    }

    pub fn class(&self, class: ElementClass) -> ClassCost<T> {
        self.per_class.get(&class).copied().unwrap_or_default()
    }

    pub fn ledger_total(&self, ledger: Ledger) -> T {
        match ledger {
            Ledger::Capex => self.capex_total,
            Ledger::Opex => self.opex_cumulative_total,
        }
    }
}

pub fn cumulative_cost<T: Scalar>(table: &CostTable<T>, horizon_years: u32) -> Result<CostBreakdown<T>> {
    if horizon_years == 0 {
        return Err(Error::InvalidHorizon(horizon_years));
    }
    let years = T::from_u32(horizon_years).expect("horizon fits scalar");
    let per_class = ElementClass::ALL
        .iter()
        .map(|&c| {
            let e = table.entry(c);
            (
                c,
                ClassCost {
                    capex: e.capex,
                    opex_cumulative: e.opex_annual * years,
                },
            )
        })
        .collect();
    Ok(CostBreakdown::from_classes(horizon_years, per_class))
}

/// Cost borne by operator `my_index`: every shared class is scaled by that
/// operator's split ratio, unshared classes are unchanged.
pub fn apply_sharing<T: Scalar>(
    breakdown: &CostBreakdown<T>,
    cfg: &SharingConfiguration<T>,
    my_index: usize,
) -> Result<CostBreakdown<T>> {
    let ratio = *cfg.split.get(my_index).ok_or(Error::InvalidOperatorIndex {
        index: my_index,
        count: cfg.split.len(),
    })?;
    let pooled_nodeb = cfg.is_shared(ElementClass::SpectrumLicense);
    let per_class = breakdown
        .per_class
        .iter()
        .map(|(&c, &cost)| {
            let mut out = cost;
            if cfg.shares_cost(c) {
                out.capex *= ratio;
                out.opex_cumulative *= ratio;
            }
            if c == ElementClass::NodeB && pooled_nodeb {
                out.capex *= cfg.spectrum_capex_factor;
            }
            (c, out)
        })
        .collect();
    Ok(CostBreakdown::from_classes(breakdown.horizon_years, per_class))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavingsReport<T> {
    pub area: AreaKind,
    pub configuration: String,
    pub horizon_years: u32,
    pub capex_saving_pct: T,
    pub opex_saving_pct: T,
    pub total_saving_pct: T,
    pub class_savings: BTreeMap<ElementClass, ClassCost<T>>,
    pub baseline: CostBreakdown<T>,
    pub shared_cost: CostBreakdown<T>,
}

impl<T: Scalar> SavingsReport<T> {
    pub fn saving_pct(&self, ledger: SavingLedger) -> T {
        match ledger {
            SavingLedger::Capex => self.capex_saving_pct,
            SavingLedger::Opex => self.opex_saving_pct,
            SavingLedger::Total => self.total_saving_pct,
        }
    }
}

/// Ledger a saving percentage refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SavingLedger {
    Capex,
    Opex,
    Total,
}

impl SavingLedger {
    pub const ALL: [SavingLedger; 3] = [SavingLedger::Capex, SavingLedger::Opex, SavingLedger::Total];
}

pub fn savings_report<T: Scalar>(
    baseline: &CostBreakdown<T>,
    shared_cost: &CostBreakdown<T>,
    configuration: &str,
    area: AreaKind,
) -> Result<SavingsReport<T>> {
    if baseline.horizon_years != shared_cost.horizon_years {
        return Err(Error::HorizonMismatch(
            baseline.horizon_years,
            shared_cost.horizon_years,
        ));
    }
    if baseline.grand_total <= T::zero() {
        return Err(Error::ZeroBaseline);
    }
    let mut class_savings = BTreeMap::new();
    for c in ElementClass::ALL {
        let (b, s) = (baseline.class(c), shared_cost.class(c));
        let saving = ClassCost {
            capex: b.capex - s.capex,
            opex_cumulative: b.opex_cumulative - s.opex_cumulative,
        };
        if saving.capex < T::zero() || saving.opex_cumulative < T::zero() {
            return Err(Error::NegativeSaving(c.label().to_string()));
        }
        class_savings.insert(c, saving);
    }
    Ok(SavingsReport {
        area,
        configuration: configuration.to_string(),
        horizon_years: baseline.horizon_years,
        capex_saving_pct: pct(baseline.capex_total - shared_cost.capex_total, baseline.capex_total),
        opex_saving_pct: pct(
            baseline.opex_cumulative_total - shared_cost.opex_cumulative_total,
            baseline.opex_cumulative_total,
        ),
        total_saving_pct: pct(baseline.grand_total - shared_cost.grand_total, baseline.grand_total),
        class_savings,
        baseline: baseline.clone(),
        shared_cost: shared_cost.clone(),
    })
}

/// Baseline, sharing and report in one step for operator `my_index`.
pub fn evaluate<T: Scalar>(
    table: &CostTable<T>,
    cfg: &SharingConfiguration<T>,
    horizon_years: u32,
    my_index: usize,
) -> Result<SavingsReport<T>> {
    let baseline = cumulative_cost(table, horizon_years)?;
    let shared = apply_sharing(&baseline, cfg, my_index)?;
    savings_report(&baseline, &shared, &cfg.name, table.area)
}

/// Percentage-point difference `a - b` per ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavingsDelta<T> {
    pub area: AreaKind,
    pub minuend: String,
    pub subtrahend: String,
    pub capex_pp: T,
    pub opex_pp: T,
    pub total_pp: T,
}

impl<T: Scalar> SavingsDelta<T> {
    pub fn get(&self, ledger: SavingLedger) -> T {
        match ledger {
            SavingLedger::Capex => self.capex_pp,
            SavingLedger::Opex => self.opex_pp,
            SavingLedger::Total => self.total_pp,
        }
    }
}

pub fn config_delta<T: Scalar>(a: &SavingsReport<T>, b: &SavingsReport<T>) -> Result<SavingsDelta<T>> {
    if a.area != b.area {
        return Err(Error::AreaMismatch(a.area, b.area));
    }
    if a.horizon_years != b.horizon_years {
        return Err(Error::HorizonMismatch(a.horizon_years, b.horizon_years));
    }
    Ok(SavingsDelta {
        area: a.area,
        minuend: a.configuration.clone(),
        subtrahend: b.configuration.clone(),
        capex_pp: a.capex_saving_pct - b.capex_saving_pct,
        opex_pp: a.opex_saving_pct - b.opex_saving_pct,
        total_pp: a.total_saving_pct - b.total_saving_pct,
    })
}
