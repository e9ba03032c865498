use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_scenario, Scenario, ScenarioResult};
use crate::error::{Error, Result};
use crate::inventory::{ElementClass, Ledger};
use crate::scalar::Scalar;

pub const MAX_SWEEP_STEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Split ratio of the reporting operator; partners share the rest equally.
    SplitRatio,
    HorizonYears,
    /// Evaluated at 0 (off) and 1 (on).
    IntlShared,
    /// Fraction of `class` within `ledger`; other classes rescale
    /// proportionally so the ledger total is unchanged.
    ClassCostFraction { class: ElementClass, ledger: Ledger },
}

impl SweepParameter {
    pub fn label(&self) -> String {
        match self {
            SweepParameter::SplitRatio => "split_ratio".into(),
            SweepParameter::HorizonYears => "horizon_years".into(),
            SweepParameter::IntlShared => "intl_shared".into(),
            SweepParameter::ClassCostFraction { class, ledger } => {
                format!("class_cost_fraction({class},{})", format!("{ledger}").to_lowercase())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSweepParameter(m));
        if !(self.from.is_finite() && self.to.is_finite() && self.from < self.to) {
            return bad(format!("range must satisfy from < to, got {} .. {}", self.from, self.to));
        }
        if !(2..=MAX_SWEEP_STEPS).contains(&self.steps) {
            return bad(format!("steps must be in 2..={MAX_SWEEP_STEPS}, got {}", self.steps));
        }
        match self.parameter {
            SweepParameter::SplitRatio if self.from <= 0.0 || self.to >= 1.0 => {
                bad("split_ratio range must lie strictly inside (0, 1)".into())
            }
            SweepParameter::HorizonYears if self.from < 1.0 => bad("horizon_years must start at >= 1".into()),
            SweepParameter::ClassCostFraction { .. } if self.from < 0.0 || self.to > 1.0 => {
                bad("class_cost_fraction range must lie in [0, 1]".into())
            }
            _ => Ok(()),
        }
    }

    /// Grid points after canonicalisation (integer horizons, boolean
    /// toggles), strictly increasing.
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        let raw = (0..n).map(|i| {
            if i == n - 1 {
                self.to
            } else {
                self.from + (self.to - self.from) * i as f64 / (n - 1) as f64
            }
        });
        let mut out: Vec<f64> = match self.parameter {
            SweepParameter::HorizonYears => raw.map(f64::round).collect(),
            SweepParameter::IntlShared => vec![0.0, 1.0],
            // snap away linspace noise such as 0.39999999999999997
            _ => raw.map(|v| (v * 1e12).round() / 1e12).collect(),
        };
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint<T> {
    pub value: f64,
    pub result: ScenarioResult<T>,
}

/// Runs the scenario once per sweep value, ordered by value.
pub fn sweep<T: Scalar>(s: &Scenario<T>) -> Result<Vec<SweepPoint<T>>> {
    let spec = s
        .sweep
        .ok_or_else(|| Error::InvalidSweepParameter("scenario has no sweep".into()))?;
    spec.check()?;
    if let SweepParameter::ClassCostFraction { class, ledger } = spec.parameter {
        if s.areas.iter().all(|a| a.table.amount(class, ledger) <= T::zero()) {
            return Err(Error::InvalidSweepParameter(format!(
                "class `{class}` has no {ledger} cost in any area"
            )));
        }
    }
    spec.values()
        .into_par_iter()
        .map(|v| {
            let variant = substitute(s, spec.parameter, v)?;
            Ok(SweepPoint {
                value: v,
                result: run_scenario(&variant)?,
            })
        })
        .collect()
}

fn substitute<T: Scalar>(s: &Scenario<T>, parameter: SweepParameter, v: f64) -> Result<Scenario<T>> {
    let mut out = s.clone();
    out.sweep = None;
    match parameter {
        SweepParameter::SplitRatio => {
            let mine = T::lit(v);
            for cfg in &mut out.configurations {
                let rest = (T::one() - mine) / T::from_usize(cfg.operators - 1).expect("count fits");
                for (i, r) in cfg.split.iter_mut().enumerate() {
                    *r = if i == s.operator_index { mine } else { rest };
                }
            }
        }
        SweepParameter::HorizonYears => out.horizon_years = v as u32,
        SweepParameter::IntlShared => {
            for cfg in &mut out.configurations {
                cfg.intl_shared = v >= 0.5;
            }
        }
        SweepParameter::ClassCostFraction { class, ledger } => {
            let target = T::lit(v);
            for area in &mut out.areas {
                let t = &mut area.table;
                let total = t.total(ledger);
                let own = t.amount(class, ledger);
                let rest = total - own;
                if total <= T::zero() {
                    continue;
                }
                if rest <= T::zero() && target < T::one() {
                    return Err(Error::InvalidSweepParameter(format!(
                        "`{class}` holds all {ledger} cost in {}; cannot rescale",
                        t.area
                    )));
                }
                let scale = if rest > T::zero() {
                    (T::one() - target) * total / rest
                } else {
                    T::zero()
                };
                for c in ElementClass::ALL {
                    let amount = if c == class {
                        target * total
                    } else {
                        t.amount(c, ledger) * scale
                    };
                    if t.entries.contains_key(&c) || c == class {
                        t.set_amount(c, ledger, amount);
                    }
                }
            }
        }
    }
    Ok(out)
}
