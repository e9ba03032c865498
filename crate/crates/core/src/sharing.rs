//! Sharing configurations, named presets, the five-level sharing ladder and
//! configuration validation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inventory::ElementClass;
use crate::scalar::Scalar;

/// Rungs of the sharing ladder, site through core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    #[serde(rename = "L1_Site")]
    L1Site,
    #[serde(rename = "L2_Antenna")]
    L2Antenna,
    #[serde(rename = "L3_NodeB")]
    L3NodeB,
    #[serde(rename = "L4_RNC")]
    L4Rnc,
    #[serde(rename = "L5_Core")]
    L5Core,
}

impl Level {
    pub const ALL: [Level; 5] = [
        Level::L1Site,
        Level::L2Antenna,
        Level::L3NodeB,
        Level::L4Rnc,
        Level::L5Core,
    ];

    /// Classes whose sharing defines this rung (any one suffices).
    pub fn defining_classes(self) -> &'static [ElementClass] {
        match self {
            Level::L1Site => &[ElementClass::PassiveSite],
            Level::L2Antenna => &[ElementClass::Antenna],
            Level::L3NodeB => &[ElementClass::NodeB],
            Level::L4Rnc => &[ElementClass::Rnc],
            Level::L5Core => &[ElementClass::CoreSgsn, ElementClass::CoreGgsn],
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::L1Site => "L1_Site",
            Level::L2Antenna => "L2_Antenna",
            Level::L3NodeB => "L3_NodeB",
            Level::L4Rnc => "L4_RNC",
            Level::L5Core => "L5_Core",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharingLevel {
    pub level: Level,
    pub non_contiguous: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegulatoryPolicy {
    pub min_own_coverage_fraction: f64,
    pub spectrum_pooling_allowed: bool,
    pub max_level: Option<Level>,
}

impl Default for RegulatoryPolicy {
    fn default() -> Self {
        Self {
            min_own_coverage_fraction: 0.0,
            spectrum_pooling_allowed: true,
            max_level: None,
        }
    }
}

/// Named configurations: the six use-case columns plus passive and
/// roaming variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Mocn,
    MocnBackhaul,
    MocnMinusSpectrum,
    Gwcn,
    GwcnBackhaul,
    GwcnMinusSpectrum,
    PassiveOnly,
    SiteAntenna,
    GatewayRoaming,
    Moran,
}

impl Preset {
    /// The nine canonical presets; [`Preset::Moran`] is an extra alias.
    pub const ALL: [Preset; 9] = [
        Preset::Mocn,
        Preset::MocnBackhaul,
        Preset::MocnMinusSpectrum,
        Preset::Gwcn,
        Preset::GwcnBackhaul,
        Preset::GwcnMinusSpectrum,
        Preset::PassiveOnly,
        Preset::SiteAntenna,
        Preset::GatewayRoaming,
    ];

    /// The six MOCN/GWCN columns of the use-case study.
    pub const USE_CASE: [Preset; 6] = [
        Preset::Mocn,
        Preset::MocnBackhaul,
        Preset::MocnMinusSpectrum,
        Preset::Gwcn,
        Preset::GwcnBackhaul,
        Preset::GwcnMinusSpectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Mocn => "MOCN",
            Preset::MocnBackhaul => "MOCN + Backhaul",
            Preset::MocnMinusSpectrum => "MOCN - Spectrum",
            Preset::Gwcn => "GWCN",
            Preset::GwcnBackhaul => "GWCN + Backhaul",
            Preset::GwcnMinusSpectrum => "GWCN - Spectrum",
            Preset::PassiveOnly => "PassiveOnly",
            Preset::SiteAntenna => "SiteAntenna",
            Preset::GatewayRoaming => "GatewayRoaming",
            Preset::Moran => "MORAN",
        }
    }

    pub fn shared_classes(self) -> &'static [ElementClass] {
        use ElementClass::*;
        match self {
            Preset::Mocn => &[PassiveSite, NodeB, Rnc, SpectrumLicense],
            Preset::MocnBackhaul => &[PassiveSite, NodeB, Rnc, Backhaul, SpectrumLicense],
            Preset::MocnMinusSpectrum => &[PassiveSite, NodeB, Rnc, Backhaul],
            Preset::Gwcn => &[PassiveSite, NodeB, Rnc, SpectrumLicense, CoreSgsn],
            Preset::GwcnBackhaul => &[PassiveSite, NodeB, Rnc, Backhaul, SpectrumLicense, CoreSgsn],
            Preset::GwcnMinusSpectrum => &[PassiveSite, NodeB, Rnc, Backhaul, CoreSgsn],
            Preset::PassiveOnly => &[PassiveSite],
            Preset::SiteAntenna => &[PassiveSite, Antenna],
            Preset::GatewayRoaming => &[PassiveSite, NodeB, Rnc, Backhaul],
            Preset::Moran => &[PassiveSite, NodeB, Rnc],
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .chain([Preset::Moran])
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// Which classes an operator group shares and how the shared cost is split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigurationDoc<T>", bound(deserialize = "T: Scalar"))]
pub struct SharingConfiguration<T> {
    pub name: String,
    pub shared: BTreeMap<ElementClass, bool>,
    pub operators: usize,
    pub split: Vec<T>,
    pub intl_shared: bool,
    /// Share site rent and power along with the passive site.
    pub site_coupling: bool,
    /// Only one partner's spectrum carries traffic.
    pub single_spectrum: bool,
    /// Extra NodeB CAPEX multiplier when spectrum is pooled (fewer carrier
    /// units). 1.0 disables the effect.
    pub spectrum_capex_factor: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<RegulatoryPolicy>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigurationDoc<T> {
    name: String,
    #[serde(default)]
    shared: BTreeMap<ElementClass, bool>,
    #[serde(default = "two")]
    operators: usize,
    #[serde(default)]
    split: Option<Vec<T>>,
    #[serde(default)]
    intl_shared: bool,
    #[serde(default = "yes")]
    site_coupling: bool,
    #[serde(default)]
    single_spectrum: bool,
    #[serde(default)]
    spectrum_capex_factor: Option<T>,
    #[serde(default)]
    policy: Option<RegulatoryPolicy>,
}

fn two() -> usize {
    2
}

fn yes() -> bool {
    true
}

impl<T: Scalar> TryFrom<ConfigurationDoc<T>> for SharingConfiguration<T> {
    type Error = Error;

    fn try_from(doc: ConfigurationDoc<T>) -> Result<Self> {
        let mut cfg = SharingConfiguration::custom(doc.name, doc.operators, doc.shared.iter().filter(|(_, &v)| v).map(|(&c, _)| c));
        if let Some(split) = doc.split {
            cfg.split = split;
        }
        cfg.intl_shared = doc.intl_shared;
        cfg.site_coupling = doc.site_coupling;
        cfg.single_spectrum = doc.single_spectrum;
        if let Some(f) = doc.spectrum_capex_factor {
            cfg.spectrum_capex_factor = f;
        }
        cfg.policy = doc.policy;
        cfg.check_structure()?;
        Ok(cfg)
    }
}

impl<T: Scalar> SharingConfiguration<T> {
    /// Configuration sharing `classes` among `operators` with an equal split.
    pub fn custom(
        name: impl Into<String>,
        operators: usize,
        classes: impl IntoIterator<Item = ElementClass>,
    ) -> Self {
        let mut shared: BTreeMap<ElementClass, bool> =
            ElementClass::ALL.iter().map(|&c| (c, false)).collect();
        for c in classes {
            shared.insert(c, true);
        }
        let split = if operators == 0 {
            Vec::new()
        } else {
            vec![T::one() / T::from_usize(operators).expect("operator count fits"); operators]
        };
        Self {
            name: name.into(),
            shared,
            operators,
            split,
            intl_shared: false,
            site_coupling: true,
            single_spectrum: false,
            spectrum_capex_factor: T::one(),
            policy: None,
        }
    }

    pub fn preset(preset: Preset) -> Self {
        let mut cfg = Self::custom(preset.name(), 2, preset.shared_classes().iter().copied());
        cfg.single_spectrum = preset == Preset::GatewayRoaming;
        cfg
    }

    pub fn from_preset_name(name: &str) -> Result<Self> {
        Ok(Self::preset(name.parse()?))
    }

    pub fn with_operators(mut self, operators: usize) -> Self {
        self.operators = operators;
        self.split = vec![T::one() / T::from_usize(operators).expect("operator count fits"); operators];
        self
    }

    pub fn with_split(mut self, split: Vec<T>) -> Self {
        self.operators = split.len();
        self.split = split;
        self
    }

    pub fn is_shared(&self, class: ElementClass) -> bool {
        self.shared.get(&class).copied().unwrap_or(false)
    }

    pub fn set_shared(&mut self, class: ElementClass, on: bool) {
        self.shared.insert(class, on);
    }

    pub fn shared_set(&self) -> Vec<ElementClass> {
        ElementClass::ALL
            .into_iter()
            .filter(|&c| self.is_shared(c))
            .collect()
    }

    /// Whether the cost of `class` is split between operators, taking the
    /// international-link and site-coupling toggles into account.
    pub fn shares_cost(&self, class: ElementClass) -> bool {
        match class {
            ElementClass::InternationalConnectivity => self.intl_shared || self.is_shared(class),
            ElementClass::SiteRent | ElementClass::Power => {
                self.is_shared(class) || (self.site_coupling && self.is_shared(ElementClass::PassiveSite))
            }
            _ => self.is_shared(class),
        }
    }

    /// Structural well-formedness: operator count, split ratios and factor.
    pub fn check_structure(&self) -> Result<()> {
        let fail = |reason: String| Error::InvalidConfiguration {
            name: self.name.clone(),
            reason,
        };
        if self.operators < 2 {
            return Err(fail(format!("operator count must be >= 2, got {}", self.operators)));
        }
        if self.split.len() != self.operators {
            return Err(fail(format!(
                "split has {} ratios for {} operators",
                self.split.len(),
                self.operators
            )));
        }
        if let Some(r) = self.split.iter().find(|&&r| !(r > T::zero() && r <= T::one())) {
            return Err(fail(format!("split ratio {r} outside (0, 1]")));
        }
        let sum: T = self.split.iter().copied().sum();
        if (sum - T::one()).abs() > T::tolerance() {
            return Err(fail(format!("split ratios sum to {sum}, expected 1")));
        }
        let f = self.spectrum_capex_factor;
        if !(f > T::zero() && f <= T::one()) {
            return Err(fail(format!("spectrum_capex_factor {f} outside (0, 1]")));
        }
        if let Some(p) = &self.policy {
            if !(0.0..=1.0).contains(&p.min_own_coverage_fraction) {
                return Err(fail("min_own_coverage_fraction outside [0, 1]".into()));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedScenario(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }
}

/// Highest shared rung of the ladder, or `None` when nothing on the ladder is
/// shared.
pub fn sharing_level<T: Scalar>(cfg: &SharingConfiguration<T>) -> Option<SharingLevel> {
    let on = |l: Level| l.defining_classes().iter().any(|&c| cfg.is_shared(c));
    let level = Level::ALL.into_iter().rev().find(|&l| on(l))?;
    let non_contiguous = Level::ALL
        .into_iter()
        .take_while(|&l| l < level)
        .any(|l| !on(l));
    Some(SharingLevel {
        level,
        non_contiguous,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    GwcnWithoutRan,
    SpectrumPoolingForbidden,
    LevelExceedsPolicy,
    CoverageLengthMismatch,
    NonContiguousLevels,
    CoverageBelowMinimum,
    ManyOperators,
    SingleSpectrumCapacity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub configuration: String,
    pub errors: Vec<Violation>,
    pub warnings: Vec<Violation>,
    pub valid: bool,
}

impl ValidationReport {
    pub fn has_error(&self, rule: Rule) -> bool {
        self.errors.iter().any(|v| v.rule == rule)
    }

    pub fn has_warning(&self, rule: Rule) -> bool {
        self.warnings.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration `{}`", self.configuration)?;
        for e in &self.errors {
            write!(f, "; error {:?}: {}", e.rule, e.message)?;
        }
        for w in &self.warnings {
            write!(f, "; warning {:?}: {}", w.rule, w.message)?;
        }
        Ok(())
    }
}

/// Validates against the configuration's own policy (or the permissive
/// default).
pub fn validate_configuration<T: Scalar>(
    cfg: &SharingConfiguration<T>,
    coverage: Option<&[f64]>,
) -> ValidationReport {
    validate_with_policy(cfg, &cfg.policy.unwrap_or_default(), coverage)
}

pub fn validate_with_policy<T: Scalar>(
    cfg: &SharingConfiguration<T>,
    policy: &RegulatoryPolicy,
    coverage: Option<&[f64]>,
) -> ValidationReport {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let push = |list: &mut Vec<Violation>, rule, message: String| list.push(Violation { rule, message });

    let core_shared = cfg.is_shared(ElementClass::CoreSgsn) || cfg.is_shared(ElementClass::CoreGgsn);
    if core_shared && !cfg.is_shared(ElementClass::Rnc) {
        push(&mut errors, Rule::GwcnWithoutRan, "core shared without a shared RAN (RNC)".into());
    }
    if cfg.is_shared(ElementClass::SpectrumLicense) && !policy.spectrum_pooling_allowed {
        push(
            &mut errors,
            Rule::SpectrumPoolingForbidden,
            "spectrum pooling is not allowed by policy".into(),
        );
    }
    let level = sharing_level(cfg);
    if let (Some(l), Some(max)) = (level, policy.max_level) {
        if l.level > max {
            push(
                &mut errors,
                Rule::LevelExceedsPolicy,
                format!("sharing level {} exceeds policy maximum {}", l.level, max),
            );
        }
    }
    if let Some(l) = level.filter(|l| l.non_contiguous) {
        push(
            &mut warnings,
            Rule::NonContiguousLevels,
            format!("ladder up to {} skips lower levels", l.level),
        );
    }
    if let Some(cov) = coverage {
        if cov.len() != cfg.operators {
            push(
                &mut errors,
                Rule::CoverageLengthMismatch,
                format!("{} coverage fractions for {} operators", cov.len(), cfg.operators),
            );
        } else {
            for (i, &c) in cov.iter().enumerate() {
                if c < policy.min_own_coverage_fraction {
                    push(
                        &mut warnings,
                        Rule::CoverageBelowMinimum,
                        format!(
                            "operator {i} covers {c:.3} with its own network, policy minimum {:.3}",
                            policy.min_own_coverage_fraction
                        ),
                    );
                }
            }
        }
    }
    if cfg.operators > 4 {
        push(
            &mut warnings,
            Rule::ManyOperators,
            format!("{} operators on one NodeB; 3 or 4 is the usual limit", cfg.operators),
        );
    }
    if cfg.single_spectrum {
        push(
            &mut warnings,
            Rule::SingleSpectrumCapacity,
            "single-spectrum operation reduces capacity".into(),
        );
    }
    let valid = errors.is_empty();
    ValidationReport {
        configuration: cfg.name.clone(),
        errors,
        warnings,
        valid,
    }
}
