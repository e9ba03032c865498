//! Offline search for reference cost tables.
//!
//! Published sources give only percentage breakdowns and headline savings,
//! never absolute costs. The search looks for per-area tables whose
//! breakdowns satisfy a [`RepartitionConstraintSet`] and whose savings under
//! the cost model come closest to a list of targets. Its output is committed
//! as fixtures; nothing at runtime depends on it.
//!
//! Method: a (1+1) evolution strategy with the one-fifth success rule over
//! softmax-parametrised CAPEX and OPEX fractions plus a logistic CAPEX share
//! of the cumulative total. Constraints enter as a quadratic penalty against
//! bounds shrunk by a small margin, tightened over three stages; the best of
//! several seeded restarts is kept, re-evaluated through the real cost model
//! and rejected if any constraint or target bound fails.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::costmodel::{config_delta, evaluate, SavingLedger};
use crate::error::{Error, Result};
use crate::inventory::{
    check_repartition, AreaKind, CostTable, ElementClass, Ledger, RepartitionConstraint,
    RepartitionConstraintSet,
};
use crate::sharing::SharingConfiguration;

pub const DEFAULT_TOLERANCE_PP: f64 = 2.0;
pub const METHOD: &str = "(1+1)-ES, one-fifth rule, staged quadratic penalty, softmax fractions";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetMetric {
    /// Saving percentage of one configuration.
    Saving { ledger: SavingLedger, configuration: String },
    /// Percentage-point difference `minuend - subtrahend`.
    Delta {
        ledger: SavingLedger,
        minuend: String,
        subtrahend: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTarget {
    pub area: AreaKind,
    #[serde(flatten)]
    pub metric: TargetMetric,
    pub value: f64,
    /// Largest acceptable |achieved - value|, in percentage points.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE_PP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetResidual {
    pub target: CalibrationTarget,
    pub achieved: f64,
    pub residual: f64,
}

/// Header stored with a calibrated cost table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationRecord {
    pub method: String,
    pub seed: u64,
    pub horizon_years: u32,
    pub residuals: Vec<TargetResidual>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationOptions {
    pub seed: u64,
    pub horizon_years: u32,
    pub restarts: usize,
    pub iterations: usize,
    /// Constraint bounds are tightened by this much during the search.
    pub margin: f64,
    pub capex_classes: Vec<ElementClass>,
    pub opex_classes: Vec<ElementClass>,
    pub capex_total: f64,
    pub currency: String,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        use ElementClass::*;
        Self {
            seed: 20_240_101,
            horizon_years: crate::costmodel::DEFAULT_HORIZON_YEARS,
            restarts: 8,
            iterations: 6_000,
            margin: 0.003,
            capex_classes: vec![PassiveSite, Power, NodeB, Rnc, Backhaul, CoreSgsn, CoreGgsn, Oam],
            opex_classes: vec![
                PassiveSite,
                SiteRent,
                Power,
                NodeB,
                Rnc,
                Backhaul,
                CoreSgsn,
                CoreGgsn,
                Oam,
                SpectrumLicense,
                InternationalConnectivity,
                Staff,
            ],
            capex_total: 1_000_000.0,
            currency: "units".into(),
        }
    }
}

/// Input document for the `calibrate` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationSpec {
    #[serde(default)]
    pub options: CalibrationOptions,
    pub targets: Vec<CalibrationTarget>,
}

const N: usize = ElementClass::ALL.len();

fn idx(c: ElementClass) -> usize {
    ElementClass::ALL.iter().position(|&x| x == c).expect("class in ALL")
}

/// Savings arithmetic on fixed-size arrays for the inner loop. Mirrors
/// `apply_sharing`; final numbers always come from the real model.
struct FastConfig {
    capex_keep: [f64; N],
    opex_keep: [f64; N],
}

impl FastConfig {
    fn new(cfg: &SharingConfiguration<f64>) -> Self {
        let r = cfg.split[0];
        let mut capex_keep = [1.0; N];
        let mut opex_keep = [1.0; N];
        for c in ElementClass::ALL {
            if cfg.shares_cost(c) {
                capex_keep[idx(c)] = r;
                opex_keep[idx(c)] = r;
            }
        }
        if cfg.is_shared(ElementClass::SpectrumLicense) {
            capex_keep[idx(ElementClass::NodeB)] *= cfg.spectrum_capex_factor;
        }
        Self { capex_keep, opex_keep }
    }

    /// (capex, opex, total) saving percentages for fractions and capex share.
    fn savings(&self, capex: &[f64; N], opex: &[f64; N], w: f64) -> [f64; 3] {
        let cs: f64 = (0..N).map(|i| capex[i] * (1.0 - self.capex_keep[i])).sum();
        let os: f64 = (0..N).map(|i| opex[i] * (1.0 - self.opex_keep[i])).sum();
        [100.0 * cs, 100.0 * os, 100.0 * (w * cs + (1.0 - w) * os)]
    }
}

fn ledger_index(l: SavingLedger) -> usize {
    match l {
        SavingLedger::Capex => 0,
        SavingLedger::Opex => 1,
        SavingLedger::Total => 2,
    }
}

struct Problem<'a> {
    opts: &'a CalibrationOptions,
    constraints: Vec<(&'a RepartitionConstraint, f64, f64)>,
    targets: Vec<&'a CalibrationTarget>,
    configs: BTreeMap<String, FastConfig>,
}

impl Problem<'_> {
    fn dim(&self) -> usize {
        self.opts.capex_classes.len() + self.opts.opex_classes.len() + 1
    }

    fn decode(&self, x: &[f64]) -> ([f64; N], [f64; N], f64) {
        let nc = self.opts.capex_classes.len();
        let no = self.opts.opex_classes.len();
        let softmax = |xs: &[f64], classes: &[ElementClass]| {
            let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let e: Vec<f64> = xs.iter().map(|v| (v - m).exp()).collect();
            let s: f64 = e.iter().sum();
            let mut out = [0.0; N];
            for (c, v) in classes.iter().zip(e) {
                out[idx(*c)] += v / s;
            }
            out
        };
        let capex = softmax(&x[..nc], &self.opts.capex_classes);
        let opex = softmax(&x[nc..nc + no], &self.opts.opex_classes);
        let w = 1.0 / (1.0 + (-x[nc + no]).exp());
        (capex, opex, w)
    }

    fn metric(&self, m: &TargetMetric, capex: &[f64; N], opex: &[f64; N], w: f64) -> f64 {
        match m {
            TargetMetric::Saving { ledger, configuration } => {
                self.configs[configuration].savings(capex, opex, w)[ledger_index(*ledger)]
            }
            TargetMetric::Delta {
                ledger,
                minuend,
                subtrahend,
            } => {
                let i = ledger_index(*ledger);
                self.configs[minuend].savings(capex, opex, w)[i] - self.configs[subtrahend].savings(capex, opex, w)[i]
            }
        }
    }

    fn violation(&self, capex: &[f64; N], opex: &[f64; N]) -> f64 {
        self.constraints
            .iter()
            .map(|(c, lo, hi)| {
                let f: f64 = c
                    .classes
                    .iter()
                    .map(|&k| match c.ledger {
                        Ledger::Capex => capex[idx(k)],
                        Ledger::Opex => opex[idx(k)],
                    })
                    .sum();
                let v = (lo - f).max(0.0) + (f - hi).max(0.0);
                v * v
            })
            .sum()
    }

    fn objective(&self, x: &[f64], penalty: f64) -> f64 {
        let (capex, opex, w) = self.decode(x);
        let fit: f64 = self
            .targets
            .iter()
            .map(|t| {
                let r = (self.metric(&t.metric, &capex, &opex, w) - t.value) / t.tolerance.max(1e-6);
                r * r
            })
            .sum();
        fit + penalty * self.violation(&capex, &opex)
    }

    fn search(&self, rng: &mut ChaCha8Rng) -> (Vec<f64>, f64) {
        let d = self.dim();
        let mut x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut fx = f64::INFINITY;
        for penalty in [1e3, 1e5, 1e7] {
            fx = self.objective(&x, penalty);
            let mut sigma = 0.5;
            let mut successes = 0;
            for it in 1..=self.opts.iterations {
                let y: Vec<f64> = x
                    .iter()
                    .map(|v| v + sigma * standard_normal(rng))
                    .collect();
                let fy = self.objective(&y, penalty);
                if fy <= fx {
                    x = y;
                    fx = fy;
                    successes += 1;
                }
                if it % 20 == 0 {
                    sigma *= if successes > 4 { 1.5 } else { 1.0 / 1.5 };
                    sigma = sigma.clamp(1e-6, 4.0);
                    successes = 0;
                }
            }
        }
        (x, fx)
    }
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn config_by_name(name: &str) -> Result<SharingConfiguration<f64>> {
    SharingConfiguration::from_preset_name(name)
}

/// Achieved value of one target on a concrete table, through the full model.
pub fn achieved(table: &CostTable<f64>, target: &CalibrationTarget, horizon_years: u32) -> Result<f64> {
    let eval = |name: &str| evaluate(table, &config_by_name(name)?, horizon_years, 0);
    Ok(match &target.metric {
        TargetMetric::Saving { ledger, configuration } => eval(configuration)?.saving_pct(*ledger),
        TargetMetric::Delta {
            ledger,
            minuend,
            subtrahend,
        } => config_delta(&eval(minuend)?, &eval(subtrahend)?)?.get(*ledger),
    })
}

/// Calibrates one table per area named in `targets`.
pub fn calibrate_reference(
    constraints: &RepartitionConstraintSet,
    targets: &[CalibrationTarget],
    opts: &CalibrationOptions,
) -> Result<BTreeMap<AreaKind, CostTable<f64>>> {
    let mut areas: Vec<AreaKind> = targets.iter().map(|t| t.area).collect();
    areas.sort();
    areas.dedup();
    let mut out = BTreeMap::new();
    for area in areas {
        let area_targets: Vec<&CalibrationTarget> = targets.iter().filter(|t| t.area == area).collect();
        out.insert(area, calibrate_area(area, constraints, &area_targets, opts)?);
    }
    Ok(out)
}

fn calibrate_area(
    area: AreaKind,
    constraints: &RepartitionConstraintSet,
    targets: &[&CalibrationTarget],
    opts: &CalibrationOptions,
) -> Result<CostTable<f64>> {
    let mut configs = BTreeMap::new();
    for t in targets {
        let names = match &t.metric {
            TargetMetric::Saving { configuration, .. } => vec![configuration],
            TargetMetric::Delta { minuend, subtrahend, .. } => vec![minuend, subtrahend],
        };
        for n in names {
            configs.insert(n.clone(), FastConfig::new(&config_by_name(n)?));
        }
    }
    let problem = Problem {
        opts,
        constraints: constraints
            .applicable(area)
            .map(|c| {
                let shrink = opts.margin.min((c.upper - c.lower) / 4.0);
                (c, c.lower + shrink, c.upper - shrink)
            })
            .collect(),
        targets: targets.to_vec(),
        configs,
    };

    let area_seed = opts.seed ^ (area as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for r in 0..opts.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(area_seed.wrapping_add(r as u64));
        let (x, fx) = problem.search(&mut rng);
        if best.as_ref().is_none_or(|(_, b)| fx < *b) {
            best = Some((x, fx));
        }
    }
    let (x, _) = best.expect("at least one restart");
    let (capex, opex, w) = problem.decode(&x);
    let table = materialise(area, &capex, &opex, w, opts);

    let mut violated: Vec<String> = Vec::new();
    let report = check_repartition(&table, constraints)?;
    for o in report.violated() {
        violated.push(format!(
            "{area} {} {} = {:.4} outside [{}, {}]",
            o.constraint.ledger, o.constraint.label, o.observed_fraction, o.constraint.lower, o.constraint.upper
        ));
    }
    let mut residuals = Vec::new();
    for t in targets {
        let a = achieved(&table, t, opts.horizon_years)?;
        let residual = a - t.value;
        if residual.abs() > t.tolerance {
            violated.push(format!(
                "{area} target {:?} = {:.3}, achieved {:.3} (tolerance {})",
                t.metric, t.value, a, t.tolerance
            ));
        }
        residuals.push(TargetResidual {
            target: (*t).clone(),
            achieved: a,
            residual,
        });
    }
    if !violated.is_empty() {
        return Err(Error::InfeasibleCalibration { violated });
    }
    let mut table = table;
    table.calibration = Some(CalibrationRecord {
        method: METHOD.to_string(),
        seed: opts.seed,
        horizon_years: opts.horizon_years,
        residuals,
    });
    Ok(table)
}

/// Absolute amounts from fractions: tiny shares snap to zero, amounts are
/// rounded to cents.
fn materialise(area: AreaKind, capex: &[f64; N], opex: &[f64; N], w: f64, opts: &CalibrationOptions) -> CostTable<f64> {
    let snap = |f: &[f64; N]| {
        let mut g = *f;
        for v in g.iter_mut() {
            if *v < 1e-5 {
                *v = 0.0;
            }
        }
        let s: f64 = g.iter().sum();
        g.iter_mut().for_each(|v| *v /= s);
        g
    };
    let (capex, opex) = (snap(capex), snap(opex));
    let capex_total = opts.capex_total;
    let opex_annual_total = capex_total * (1.0 - w) / (w * opts.horizon_years as f64);
    let cents = |v: f64| (v * 100.0).round() / 100.0;
    let mut table = CostTable::new(area, opts.currency.clone());
    for c in ElementClass::ALL {
        let (ca, oa) = (cents(capex[idx(c)] * capex_total), cents(opex[idx(c)] * opex_annual_total));
        if ca > 0.0 || oa > 0.0 {
            table = table.with_entry(c, ca, oa);
        }
    }
    table
}

/// Re-checks a committed table: constraints hold and every recorded target
/// is still reproduced by the model within its tolerance.
pub fn reverify(table: &CostTable<f64>, constraints: &RepartitionConstraintSet) -> Result<Vec<TargetResidual>> {
    let record = table.calibration.as_ref().ok_or_else(|| Error::Fixture {
        name: format!("reference_costs_{}", table.area),
        reason: "missing calibration header".into(),
    })?;
    let mut violated = Vec::new();
    let report = check_repartition(table, constraints)?;
    for o in report.violated() {
        violated.push(format!("{} {} = {:.4}", o.constraint.ledger, o.constraint.label, o.observed_fraction));
    }
    let mut out = Vec::new();
    for r in &record.residuals {
        let a = achieved(table, &r.target, record.horizon_years)?;
        if (a - r.target.value).abs() > r.target.tolerance || (a - r.achieved).abs() > 1e-6 {
            violated.push(format!("target {:?}: recorded {:.4}, now {:.4}", r.target.metric, r.achieved, a));
        }
        out.push(TargetResidual {
            target: r.target.clone(),
            achieved: a,
            residual: a - r.target.value,
        });
    }
    if violated.is_empty() {
        Ok(out)
    } else {
        Err(Error::InfeasibleCalibration { violated })
    }
}
