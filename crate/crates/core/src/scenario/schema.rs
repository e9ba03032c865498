use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer};

use super::sweep::{SweepParameter, SweepSpec};
use crate::error::{Error, Result};
use crate::inventory::{AreaKind, AreaProfile, CostTable, ElementClass, Ledger};
use crate::scalar::Scalar;
use crate::sharing::{RegulatoryPolicy, SharingConfiguration};

#[derive(Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Scalar"))]
pub(super) struct ScenarioDoc<T> {
    pub name: String,
    #[serde(default = "default_horizon")]
    pub horizon_years: u32,
    #[serde(default)]
    pub operator_index: usize,
    pub areas: Vec<Named<AreaProfile>>,
    pub cost_tables: BTreeMap<AreaKind, Named<CostTable<T>>>,
    pub configurations: Vec<Named<SharingConfiguration<T>>>,
    #[serde(default)]
    pub policy: Option<RegulatoryPolicy>,
    #[serde(default)]
    pub sweep: Option<SweepDoc>,
}

fn default_horizon() -> u32 {
    crate::costmodel::DEFAULT_HORIZON_YEARS
}

/// Either a name (preset, area kind, fixture file) or an inline object.
pub(super) enum Named<V> {
    Name(String),
    Inline(V),
}

impl<'de, V: Deserialize<'de>> Deserialize<'de> for Named<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct NamedVisitor<V>(PhantomData<V>);

        impl<'de, V: Deserialize<'de>> Visitor<'de> for NamedVisitor<V> {
            type Value = Named<V>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a name or an inline object")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                Ok(Named::Name(v.to_string()))
            }

            fn visit_map<A: MapAccess<'de>>(self, map: A) -> std::result::Result<Self::Value, A::Error> {
                V::deserialize(de::value::MapAccessDeserializer::new(map)).map(Named::Inline)
            }
        }

        d.deserialize_any(NamedVisitor(PhantomData))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct SweepDoc {
    parameter: String,
    #[serde(default)]
    class: Option<ElementClass>,
    #[serde(default)]
    ledger: Option<Ledger>,
    from: f64,
    to: f64,
    steps: usize,
}

impl SweepDoc {
    pub fn into_spec(self) -> Result<SweepSpec> {
        let bad = |m: String| Error::InvalidSweepParameter(m);
        let parameter = match self.parameter.as_str() {
            "split_ratio" => SweepParameter::SplitRatio,
            "horizon_years" => SweepParameter::HorizonYears,
            "intl_shared" => SweepParameter::IntlShared,
            "class_cost_fraction" => SweepParameter::ClassCostFraction {
                class: self
                    .class
                    .ok_or_else(|| bad("class_cost_fraction needs `class`".into()))?,
                ledger: self.ledger.unwrap_or(Ledger::Capex),
            },
            other => return Err(bad(format!("unknown sweep parameter `{other}`"))),
        };
        if self.class.is_some() && !matches!(parameter, SweepParameter::ClassCostFraction { .. }) {
            return Err(bad(format!("`class` does not apply to `{}`", self.parameter)));
        }
        let spec = SweepSpec {
            parameter,
            from: self.from,
            to: self.to,
            steps: self.steps,
        };
        spec.check()?;
        Ok(spec)
    }
}
