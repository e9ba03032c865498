//! Network element classes, cost tables, area profiles and the repartition
//! constraint checker.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::calibrate::CalibrationRecord;

/// Closed set of cost-bearing network element classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ElementClass {
    #[serde(rename = "passive_site")]
    PassiveSite,
    #[serde(rename = "antenna")]
    Antenna,
    #[serde(rename = "nodeb")]
    NodeB,
    #[serde(rename = "rnc")]
    Rnc,
    #[serde(rename = "backhaul")]
    Backhaul,
    #[serde(rename = "core_sgsn")]
    CoreSgsn,
    #[serde(rename = "core_ggsn")]
    CoreGgsn,
    #[serde(rename = "oam")]
    Oam,
    #[serde(rename = "spectrum_license")]
    SpectrumLicense,
    #[serde(rename = "international_connectivity")]
    InternationalConnectivity,
    #[serde(rename = "site_rent")]
    SiteRent,
    #[serde(rename = "power")]
    Power,
    #[serde(rename = "staff")]
    Staff,
}

/// Coarse partition of [`ElementClass`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassGroup {
    Ran,
    Transport,
    Core,
    Overhead,
}

impl ElementClass {
    pub const ALL: [ElementClass; 13] = [
        ElementClass::PassiveSite,
        ElementClass::Antenna,
        ElementClass::NodeB,
        ElementClass::Rnc,
        ElementClass::Backhaul,
        ElementClass::CoreSgsn,
        ElementClass::CoreGgsn,
        ElementClass::Oam,
        ElementClass::SpectrumLicense,
        ElementClass::InternationalConnectivity,
        ElementClass::SiteRent,
        ElementClass::Power,
        ElementClass::Staff,
    ];

    /// Snake-case label used in every JSON document.
    pub fn label(self) -> &'static str {
        match self {
            ElementClass::PassiveSite => "passive_site",
            ElementClass::Antenna => "antenna",
            ElementClass::NodeB => "nodeb",
            ElementClass::Rnc => "rnc",
            ElementClass::Backhaul => "backhaul",
            ElementClass::CoreSgsn => "core_sgsn",
            ElementClass::CoreGgsn => "core_ggsn",
            ElementClass::Oam => "oam",
            ElementClass::SpectrumLicense => "spectrum_license",
            ElementClass::InternationalConnectivity => "international_connectivity",
            ElementClass::SiteRent => "site_rent",
            ElementClass::Power => "power",
            ElementClass::Staff => "staff",
        }
    }

    pub fn group(self) -> ClassGroup {
        use ElementClass::*;
        match self {
            PassiveSite | Antenna | NodeB | Rnc => ClassGroup::Ran,
            Backhaul | InternationalConnectivity => ClassGroup::Transport,
            CoreSgsn | CoreGgsn => ClassGroup::Core,
            Oam | SiteRent | Power | Staff | SpectrumLicense => ClassGroup::Overhead,
        }
    }
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ElementClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ElementClass::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| Error::UnknownClass(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaKind {
    Urban,
    Suburban,
    Rural,
}

impl AreaKind {
    pub const ALL: [AreaKind; 3] = [AreaKind::Urban, AreaKind::Suburban, AreaKind::Rural];

    pub fn label(self) -> &'static str {
        match self {
            AreaKind::Urban => "urban",
            AreaKind::Suburban => "suburban",
            AreaKind::Rural => "rural",
        }
    }
}

impl fmt::Display for AreaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for AreaKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "urban" | "dense" => Ok(AreaKind::Urban),
            "suburban" | "sub-urban" => Ok(AreaKind::Suburban),
            "rural" => Ok(AreaKind::Rural),
            other => Err(format!("unknown area `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ledger {
    Capex,
    Opex,
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ledger::Capex => "CAPEX",
            Ledger::Opex => "OPEX",
        })
    }
}

/// One-off CAPEX and yearly OPEX for a class (or for one unit of it).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostEntry<T> {
    pub capex: T,
    pub opex_annual: T,
}

impl<T: Scalar> CostEntry<T> {
    pub fn new(capex: T, opex_annual: T) -> Self {
        Self { capex, opex_annual }
    }

    pub fn get(&self, ledger: Ledger) -> T {
        match ledger {
            Ledger::Capex => self.capex,
            Ledger::Opex => self.opex_annual,
        }
    }

    fn get_mut(&mut self, ledger: Ledger) -> &mut T {
        match ledger {
            Ledger::Capex => &mut self.capex,
            Ledger::Opex => &mut self.opex_annual,
        }
    }
}

/// Per-class CAPEX and annual OPEX for one operator in one area.
///
/// Amounts are in an opaque currency; only ratios carry meaning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostTable<T> {
    pub area: AreaKind,
    pub currency: String,
    pub entries: BTreeMap<ElementClass, CostEntry<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationRecord>,
}

impl<T: Scalar> CostTable<T> {
    pub fn new(area: AreaKind, currency: impl Into<String>) -> Self {
        Self {
            area,
            currency: currency.into(),
            entries: BTreeMap::new(),
            calibration: None,
        }
    }

    pub fn with_entry(mut self, class: ElementClass, capex: T, opex_annual: T) -> Self {
        self.entries.insert(class, CostEntry::new(capex, opex_annual));
        self
    }

    /// Entry for `class`, zero when absent.
    pub fn entry(&self, class: ElementClass) -> CostEntry<T> {
        self.entries.get(&class).copied().unwrap_or_default()
    }

    pub fn amount(&self, class: ElementClass, ledger: Ledger) -> T {
        self.entry(class).get(ledger)
    }

    pub fn set_amount(&mut self, class: ElementClass, ledger: Ledger, value: T) {
        *self.entries.entry(class).or_default().get_mut(ledger) = value;
    }

    pub fn total(&self, ledger: Ledger) -> T {
        self.entries.values().map(|e| e.get(ledger)).sum()
    }

    /// A table is usable when at least one ledger has a positive total.
    pub fn is_usable(&self) -> bool {
        self.total(Ledger::Capex) > T::zero() || self.total(Ledger::Opex) > T::zero()
    }

    pub fn fraction(&self, class: ElementClass, ledger: Ledger) -> Result<T> {
        self.set_fraction(&[class], ledger)
    }

    /// Summed fraction of a set of classes within one ledger.
    pub fn set_fraction(&self, classes: &[ElementClass], ledger: Ledger) -> Result<T> {
        let total = self.total(ledger);
        if total <= T::zero() {
            return Err(Error::ZeroTotalLedger(ledger));
        }
        let part: T = classes.iter().map(|&c| self.amount(c, ledger)).sum();
        Ok(part / total)
    }

    pub fn fractions(&self, ledger: Ledger) -> Result<BTreeMap<ElementClass, T>> {
        let total = self.total(ledger);
        if total <= T::zero() {
            return Err(Error::ZeroTotalLedger(ledger));
        }
        Ok(ElementClass::ALL
            .iter()
            .map(|&c| (c, self.amount(c, ledger) / total))
            .collect())
    }

    /// Every amount scaled by `k`.
    pub fn scaled(&self, k: T) -> Self {
        let mut out = self.clone();
        for e in out.entries.values_mut() {
            e.capex *= k;
            e.opex_annual *= k;
        }
        out
    }

    /// Rejects negative or non-finite amounts.
    pub fn validate(&self) -> Result<()> {
        for (&class, e) in &self.entries {
            for v in [e.capex, e.opex_annual] {
                if !v.is_finite() || v < T::zero() {
                    return Err(Error::InvalidAmount {
                        class,
                        value: v.to_f64_lossy(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let table: Self = serde_json::from_str(text)
            .map_err(|e| Error::MalformedScenario(format!("cost table: {e}")))?;
        table.validate()?;
        Ok(table)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("cost table serializes")
    }
}

/// Table 4 style dimensioning of one area.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AreaProfile {
    pub kind: AreaKind,
    pub nodeb_count: u32,
    pub subscriber_count: u32,
    pub rnc_count: u32,
    pub sgsn_count: u32,
    pub ggsn_count: u32,
}

impl AreaProfile {
    pub const DEFAULT_SUBSCRIBERS: u32 = 17_700;

    /// Reference dimensioning: 78/58/108 NodeBs, 17 700 subscribers and a
    /// single RNC, SGSN and GGSN per area.
    pub fn default_for(kind: AreaKind) -> Self {
        let nodeb_count = match kind {
            AreaKind::Urban => 78,
            AreaKind::Suburban => 58,
            AreaKind::Rural => 108,
        };
        Self {
            kind,
            nodeb_count,
            subscriber_count: Self::DEFAULT_SUBSCRIBERS,
            rnc_count: 1,
            sgsn_count: 1,
            ggsn_count: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("nodeb_count", self.nodeb_count),
            ("rnc_count", self.rnc_count),
            ("sgsn_count", self.sgsn_count),
            ("ggsn_count", self.ggsn_count),
        ];
        for (name, n) in counts {
            if n == 0 {
                return Err(Error::InvalidScenario {
                    reason: format!("{} profile: {name} must be >= 1", self.kind),
                    report: None,
                });
            }
        }
        Ok(())
    }

    /// Quantity of `class` deployed in this area, or `None` for classes
    /// that are not count-scaled (quantity one).
    ///
    /// Site-level classes follow the NodeB count since no separate site
    /// count is given.
    pub fn scaled_quantity(&self, class: ElementClass) -> Option<u32> {
        use ElementClass::*;
        match class {
            NodeB | PassiveSite | Power | SiteRent => Some(self.nodeb_count),
            Rnc => Some(self.rnc_count),
            CoreSgsn => Some(self.sgsn_count),
            CoreGgsn => Some(self.ggsn_count),
            _ => None,
        }
    }

    pub fn quantity(&self, class: ElementClass) -> u32 {
        self.scaled_quantity(class).unwrap_or(1)
    }
}

/// Per-unit CAPEX and per-unit annual OPEX.
pub type UnitCosts<T> = BTreeMap<ElementClass, CostEntry<T>>;

/// Multiplies unit costs by the area's class quantities.
pub fn build_inventory<T: Scalar>(
    profile: &AreaProfile,
    unit_costs: &UnitCosts<T>,
    currency: &str,
) -> Result<CostTable<T>> {
    profile.validate()?;
    let mut table = CostTable::new(profile.kind, currency);
    for class in ElementClass::ALL {
        let unit = match (unit_costs.get(&class), profile.scaled_quantity(class)) {
            (Some(u), _) => *u,
            (None, Some(_)) => return Err(Error::MissingCostEntry(class)),
            (None, None) => continue,
        };
        for v in [unit.capex, unit.opex_annual] {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::InvalidAmount {
                    class,
                    value: v.to_f64_lossy(),
                });
            }
        }
        let q = T::from_u32(profile.quantity(class)).expect("count fits scalar");
        table
            .entries
            .insert(class, CostEntry::new(unit.capex * q, unit.opex_annual * q));
    }
    Ok(table)
}

/// Inverse of [`build_inventory`]: per-unit costs that rebuild `table`.
pub fn unit_costs_for<T: Scalar>(table: &CostTable<T>, profile: &AreaProfile) -> UnitCosts<T> {
    ElementClass::ALL
        .iter()
        .map(|&c| {
            let q = T::from_u32(profile.quantity(c)).expect("count fits scalar");
            let e = table.entry(c);
            (c, CostEntry::new(e.capex / q, e.opex_annual / q))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Market {
    Emerging,
    Developed,
}

/// Which published breakdown a constraint set encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintFamily {
    Capex,
    Opex,
    UseCaseCapex,
    UseCaseOpex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaScope {
    All,
    #[serde(untagged)]
    Area(AreaKind),
}

impl AreaScope {
    pub fn applies_to(self, area: AreaKind) -> bool {
        match self {
            AreaScope::All => true,
            AreaScope::Area(a) => a == area,
        }
    }
}

/// Summed fraction of `classes` within `ledger` must lie in `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepartitionConstraint {
    pub label: String,
    pub ledger: Ledger,
    pub classes: BTreeSet<ElementClass>,
    pub lower: f64,
    pub upper: f64,
    pub scope: AreaScope,
}

impl RepartitionConstraint {
    pub fn new(
        label: impl Into<String>,
        ledger: Ledger,
        classes: impl IntoIterator<Item = ElementClass>,
        lower: f64,
        upper: f64,
        scope: AreaScope,
    ) -> Self {
        assert!(
            (0.0..=1.0).contains(&lower) && (0.0..=1.0).contains(&upper) && lower <= upper,
            "bad interval [{lower}, {upper}]"
        );
        Self {
            label: label.into(),
            ledger,
            classes: classes.into_iter().collect(),
            lower,
            upper,
            scope,
        }
    }

    /// Point value widened by the rounding allowance of prose percentages.
    pub fn around(
        label: impl Into<String>,
        ledger: Ledger,
        classes: impl IntoIterator<Item = ElementClass>,
        point: f64,
        scope: AreaScope,
    ) -> Self {
        let lo = (point - POINT_WIDENING).max(0.0);
        let hi = (point + POINT_WIDENING).min(1.0);
        Self::new(label, ledger, classes, lo, hi, scope)
    }

    pub fn class_list(&self) -> Vec<ElementClass> {
        self.classes.iter().copied().collect()
    }

    pub fn contains(&self, fraction: f64) -> bool {
        fraction >= self.lower - FRACTION_TOLERANCE && fraction <= self.upper + FRACTION_TOLERANCE
    }
}

pub const POINT_WIDENING: f64 = 0.02;
pub const FRACTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RepartitionConstraintSet {
    pub constraints: Vec<RepartitionConstraint>,
}

impl RepartitionConstraintSet {
    pub fn new(constraints: Vec<RepartitionConstraint>) -> Self {
        Self { constraints }
    }

    pub fn extended(mut self, other: RepartitionConstraintSet) -> Self {
        self.constraints.extend(other.constraints);
        self
    }

    pub fn applicable(&self, area: AreaKind) -> impl Iterator<Item = &RepartitionConstraint> {
        self.constraints.iter().filter(move |c| c.scope.applies_to(area))
    }
}

/// Published repartition constraints for a market and breakdown.
///
/// The use-case families are area-scoped and identical for both markets.
pub fn default_constraints(market: Market, family: ConstraintFamily) -> RepartitionConstraintSet {
    use AreaScope::All;
    use ElementClass::*;
    let c = match (market, family) {
        (Market::Emerging, ConstraintFamily::Capex) => vec![
            RepartitionConstraint::around("civil and site", Ledger::Capex, [PassiveSite], 0.41, All),
            RepartitionConstraint::around("power", Ledger::Capex, [Power], 0.31, All),
            RepartitionConstraint::around("BTS/NodeB", Ledger::Capex, [NodeB], 0.15, All),
        ],
        (Market::Developed, ConstraintFamily::Capex) => vec![RepartitionConstraint::around(
            "civil and site",
            Ledger::Capex,
            [PassiveSite],
            0.52,
            All,
        )],
        (Market::Emerging, ConstraintFamily::Opex) => vec![
            RepartitionConstraint::around("hardware and software support", Ledger::Opex, [NodeB, Rnc], 0.20, All),
            RepartitionConstraint::around("power", Ledger::Opex, [Power], 0.20, All),
            RepartitionConstraint::around("land rent", Ledger::Opex, [SiteRent], 0.15, All),
            RepartitionConstraint::around("backhaul", Ledger::Opex, [Backhaul], 0.14, All),
        ],
        (Market::Developed, ConstraintFamily::Opex) => vec![RepartitionConstraint::around(
            "land rent",
            Ledger::Opex,
            [SiteRent],
            0.42,
            All,
        )],
        (_, ConstraintFamily::UseCaseCapex) => use_case_capex(),
        (_, ConstraintFamily::UseCaseOpex) => vec![
            RepartitionConstraint::new(
                "international connectivity",
                Ledger::Opex,
                [InternationalConnectivity],
                0.50,
                0.60,
                All,
            ),
            RepartitionConstraint::new(
                "licence and core",
                Ledger::Opex,
                [SpectrumLicense, CoreSgsn, CoreGgsn],
                0.08,
                0.12,
                All,
            ),
        ],
    };
    RepartitionConstraintSet::new(c)
}

fn use_case_capex() -> Vec<RepartitionConstraint> {
    use ElementClass::*;
    let all = AreaScope::All;
    let mut c = vec![
        // Core and O&M are bounded together: separate 8% floors on each are
        // incompatible with the backhaul, RNC and NodeB floors in urban and
        // suburban areas.
        RepartitionConstraint::new("core and O&M", Ledger::Capex, [CoreSgsn, CoreGgsn, Oam], 0.08, 0.17, all),
        RepartitionConstraint::new("core", Ledger::Capex, [CoreSgsn, CoreGgsn], 0.0, 0.17, all),
        RepartitionConstraint::new("O&M", Ledger::Capex, [Oam], 0.0, 0.17, all),
        RepartitionConstraint::new("backhaul", Ledger::Capex, [Backhaul], 0.32, 0.41, all),
        RepartitionConstraint::new("NodeB", Ledger::Capex, [NodeB], 0.23, 0.29, all),
    ];
    for area in [AreaKind::Urban, AreaKind::Suburban] {
        c.push(RepartitionConstraint::new(
            "RNC close to backhaul",
            Ledger::Capex,
            [Rnc],
            0.32,
            0.41,
            AreaScope::Area(area),
        ));
    }
    c.push(RepartitionConstraint::around(
        "RNC",
        Ledger::Capex,
        [Rnc],
        0.11,
        AreaScope::Area(AreaKind::Rural),
    ));
    c
}

/// Midpoint table for a market's CAPEX/OPEX breakdown, 100 units per ledger.
///
/// Percentages not attributed to a named item are booked under OAM.
pub fn market_default_table(market: Market, area: AreaKind) -> CostTable<f64> {
    let mut table = CostTable::new(area, "units");
    for (family, ledger) in [
        (ConstraintFamily::Capex, Ledger::Capex),
        (ConstraintFamily::Opex, Ledger::Opex),
    ] {
        let mut assigned = 0.0;
        for c in default_constraints(market, family).constraints {
            let mid = 0.5 * (c.lower + c.upper);
            let share = mid / c.classes.len() as f64;
            for &class in &c.classes {
                table.set_amount(class, ledger, 100.0 * share);
            }
            assigned += mid;
        }
        table.set_amount(ElementClass::Oam, ledger, 100.0 * (1.0 - assigned).max(0.0));
    }
    table
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintOutcome {
    pub constraint: RepartitionConstraint,
    /// Rounded to four decimals.
    pub observed_fraction: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub area: AreaKind,
    pub outcomes: Vec<ConstraintOutcome>,
    pub overall: bool,
}

impl ConstraintReport {
    pub fn violated(&self) -> impl Iterator<Item = &ConstraintOutcome> {
        self.outcomes.iter().filter(|o| !o.satisfied)
    }
}

/// Evaluates every constraint scoped to the table's area.
pub fn check_repartition<T: Scalar>(
    table: &CostTable<T>,
    constraints: &RepartitionConstraintSet,
) -> Result<ConstraintReport> {
    let mut outcomes = Vec::new();
    for c in constraints.applicable(table.area) {
        let observed = table.set_fraction(&c.class_list(), c.ledger)?.to_f64_lossy();
        outcomes.push(ConstraintOutcome {
            constraint: c.clone(),
            observed_fraction: (observed * 1e4).round() / 1e4,
            satisfied: c.contains(observed),
        });
    }
    let overall = outcomes.iter().all(|o| o.satisfied);
    Ok(ConstraintReport {
        area: table.area,
        outcomes,
        overall,
    })
}
