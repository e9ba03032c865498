//! Rule tables: per-area sharing verdicts, constraint checklists for
//! existing and new networks, and the MOCN/GWCN comparison for LTE.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::inventory::AreaKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Technology {
    #[serde(rename = "2g")]
    G2,
    #[serde(rename = "3g")]
    G3,
}

impl Technology {
    pub const ALL: [Technology; 2] = [Technology::G2, Technology::G3];
}

impl fmt::Display for Technology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Technology::G2 => "2G",
            Technology::G3 => "3G",
        })
    }
}

impl FromStr for Technology {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "2g" | "g2" => Ok(Technology::G2),
            "3g" | "g3" => Ok(Technology::G3),
            other => Err(format!("unknown technology `{other}` (expected 2g or 3g)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    StronglyRecommended,
    CaseByCase,
    NotRecommended,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recommendation {
    pub area: AreaKind,
    pub technology: Technology,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

const COLOCATE_NOTE: &str = "Co-locate 3G sites with existing 2G infrastructure sites.";
const LOCAL_NOTE: &str = "Local constraints decide; evaluate the specific situation.";

pub fn recommend(area: AreaKind, technology: Technology) -> Recommendation {
    let verdict = match (area, technology) {
        (AreaKind::Rural, _) => Verdict::StronglyRecommended,
        (AreaKind::Suburban, _) => Verdict::CaseByCase,
        (AreaKind::Urban, Technology::G2) => Verdict::NotRecommended,
        (AreaKind::Urban, Technology::G3) => Verdict::CaseByCase,
    };
    let place = match area {
        AreaKind::Urban => "Urban",
        AreaKind::Suburban => "Suburban",
        AreaKind::Rural => "Rural",
    };
    let mut notes = vec![match verdict {
        Verdict::StronglyRecommended => format!("{place} sharing is strongly recommended for both 2G and 3G."),
        Verdict::CaseByCase => format!("{place} {technology} sharing can be recommended in some cases."),
        Verdict::NotRecommended => format!("{place} {technology} sharing is not recommended."),
    }];
    notes.push(COLOCATE_NOTE.to_string());
    if verdict == Verdict::CaseByCase {
        notes.push(LOCAL_NOTE.to_string());
    }
    Recommendation {
        area,
        technology,
        verdict,
        notes,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkState {
    Existing,
    New,
}

impl FromStr for NetworkState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "existing" => Ok(NetworkState::Existing),
            "new" => Ok(NetworkState::New),
            other => Err(format!("unknown network state `{other}` (expected existing or new)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Domain {
    Site,
    Energy,
    #[serde(rename = "RAN")]
    Ran,
    Backhaul,
}

impl Domain {
    pub const ALL: [Domain; 4] = [Domain::Site, Domain::Energy, Domain::Ran, Domain::Backhaul];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecklistItem {
    pub domain: Domain,
    pub constraint: String,
    #[serde(default)]
    pub answered: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintChecklist {
    pub network_state: NetworkState,
    pub items: Vec<ChecklistItem>,
}

impl ConstraintChecklist {
    pub fn unanswered(&self) -> impl Iterator<Item = &ChecklistItem> {
        self.items.iter().filter(|i| i.answered.is_none())
    }

    /// Copies answers from `answers` onto matching items (same domain and
    /// text). Returns the constraint texts that matched nothing.
    pub fn apply_answers(&mut self, answers: &ConstraintChecklist) -> Vec<String> {
        let mut unmatched = Vec::new();
        for a in &answers.items {
            match self
                .items
                .iter_mut()
                .find(|i| i.domain == a.domain && i.constraint == a.constraint)
            {
                Some(item) => item.answered = a.answered,
                None => unmatched.push(a.constraint.clone()),
            }
        }
        unmatched
    }
}

const EXISTING: &[(Domain, &str)] = &[
    (Domain::Site, "Area of the site: is it sufficient for new equipment or must additional site area be acquired"),
    (Domain::Site, "Mast of site: dimensioned enough to receive new antennas"),
    (Domain::Energy, "Energy is generally dimensioned for current needs only: adapt the energy to the new requirements"),
    (Domain::Energy, "Electrical: change the standing charge"),
    (Domain::Energy, "Battery and emergency energy: add new batteries"),
    (Domain::Energy, "Diesel: replace the existing generators with new generators"),
    (Domain::Energy, "Solar: add new solar panels (site extension requirements)"),
    (Domain::Ran, "Add new radio components to meet additional traffic demands"),
    (Domain::Ran, "Network already operating: accept the other operator's constraints on network design, radio optimization, software level and quality of service"),
    (Domain::Backhaul, "Microwave: dimensioned enough to carry the added traffic"),
    (Domain::Backhaul, "Capacity and lines"),
];

const NEW: &[(Domain, &str)] = &[
    (Domain::Site, "Choice of site or geographical splitting"),
    (Domain::Site, "Number of sites (coverage quality)"),
    (Domain::Energy, "Choice of power: electrical if possible, diesel, solar"),
    (Domain::Ran, "Technical complexity: agree on infrastructure manufacturers, technologies and frequencies"),
    (Domain::Ran, "Operational complexity: agree on network design, radio optimization, software level, release level and QoS"),
    (Domain::Backhaul, "Choice of the type of backhaul: lines, Microwave, VSAT (Very Small Aperture Terminals)"),
    (Domain::Backhaul, "Data traffic"),
];

pub fn checklist(state: NetworkState) -> ConstraintChecklist {
    let rows = match state {
        NetworkState::Existing => EXISTING,
        NetworkState::New => NEW,
    };
    ConstraintChecklist {
        network_state: state,
        items: rows
            .iter()
            .map(|&(domain, text)| ChecklistItem {
                domain,
                constraint: text.to_string(),
                answered: None,
            })
            .collect(),
    }
}

/// What the deployment needs from LTE RAN sharing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LteContext {
    pub needs_inter_rat_mobility: bool,
    pub needs_cs_fallback: bool,
    pub voice_via_ims: bool,
    pub needs_roaming: bool,
    /// In [0, 1].
    pub cost_priority_weight: f64,
}

impl LteContext {
    pub fn new(
        needs_inter_rat_mobility: bool,
        needs_cs_fallback: bool,
        voice_via_ims: bool,
        needs_roaming: bool,
        cost_priority_weight: f64,
    ) -> Result<Self, String> {
        if !(0.0..=1.0).contains(&cost_priority_weight) {
            return Err(format!("cost weight {cost_priority_weight} outside [0, 1]"));
        }
        Ok(Self {
            needs_inter_rat_mobility,
            needs_cs_fallback,
            voice_via_ims,
            needs_roaming,
            cost_priority_weight,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mark {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "=")]
    Equal,
}

impl Mark {
    fn score(self) -> f64 {
        match self {
            Mark::Plus => 1.0,
            Mark::Minus => -1.0,
            Mark::Equal => 0.0,
        }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mark::Plus => "+",
            Mark::Minus => "-",
            Mark::Equal => "=",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    InterworkingLegacy,
    CsFallbackVoice,
    ImsVoice,
    Roaming,
    Cost,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [
        Criterion::InterworkingLegacy,
        Criterion::CsFallbackVoice,
        Criterion::ImsVoice,
        Criterion::Roaming,
        Criterion::Cost,
    ];

    /// Fixed (MOCN, GWCN) marks.
    pub fn marks(self) -> (Mark, Mark) {
        match self {
            Criterion::InterworkingLegacy | Criterion::CsFallbackVoice | Criterion::Roaming => {
                (Mark::Plus, Mark::Minus)
            }
            Criterion::ImsVoice => (Mark::Equal, Mark::Equal),
            Criterion::Cost => (Mark::Minus, Mark::Plus),
        }
    }

    pub fn remark(self) -> &'static str {
        match self {
            Criterion::InterworkingLegacy => {
                "Inter-RAT mobility needs MME interfaces toward legacy SGSNs; a shared MME ties the shared eUTRAN tightly to every partner core."
            }
            Criterion::CsFallbackVoice => {
                "CS fallback needs SGs between MMEs and MSCs; a shared MME ties the shared eUTRAN tightly to every partner core."
            }
            Criterion::ImsVoice => "IMS is the long-term voice solution for LTE either way.",
            Criterion::Roaming => {
                "A shared MME must hold the HSS address of every roaming partner of every connected core."
            }
            Criterion::Cost => "A shared MME shares its cost; the size of the gain depends on context.",
        }
    }

    fn weight(self, ctx: &LteContext) -> f64 {
        let gate = |on: bool| if on { 1.0 } else { 0.0 };
        match self {
            Criterion::InterworkingLegacy => gate(ctx.needs_inter_rat_mobility),
            Criterion::CsFallbackVoice => gate(ctx.needs_cs_fallback),
            Criterion::ImsVoice => gate(ctx.voice_via_ims),
            Criterion::Roaming => gate(ctx.needs_roaming),
            Criterion::Cost => ctx.cost_priority_weight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Approach {
    #[serde(rename = "MOCN")]
    Mocn,
    #[serde(rename = "GWCN")]
    Gwcn,
    Tie,
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Approach::Mocn => "MOCN",
            Approach::Gwcn => "GWCN",
            Approach::Tie => "Tie",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionScore {
    pub criterion: Criterion,
    pub mocn: Mark,
    pub gwcn: Mark,
    pub weight: f64,
    pub remark: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LteComparisonReport {
    pub context: LteContext,
    pub criteria: Vec<CriterionScore>,
    pub mocn_score: f64,
    pub gwcn_score: f64,
    pub preferred: Approach,
}

impl LteComparisonReport {
    pub fn raw_matrix(&self) -> Vec<(Criterion, Mark, Mark)> {
        self.criteria.iter().map(|c| (c.criterion, c.mocn, c.gwcn)).collect()
    }
}

/// Tallies ±1 per criterion, gated by the context flags, with the cost row
/// weighted by `cost_priority_weight`.
pub fn compare_lte(ctx: &LteContext) -> LteComparisonReport {
    let mut mocn_score = 0.0;
    let mut gwcn_score = 0.0;
    let criteria = Criterion::ALL
        .iter()
        .map(|&criterion| {
            let (mocn, gwcn) = criterion.marks();
            let weight = criterion.weight(ctx);
            mocn_score += weight * mocn.score();
            gwcn_score += weight * gwcn.score();
            CriterionScore {
                criterion,
                mocn,
                gwcn,
                weight,
                remark: criterion.remark().to_string(),
            }
        })
        .collect();
    let preferred = if mocn_score > gwcn_score {
        Approach::Mocn
    } else if gwcn_score > mocn_score {
        Approach::Gwcn
    } else {
        Approach::Tie
    };
    LteComparisonReport {
        context: *ctx,
        criteria,
        mocn_score,
        gwcn_score,
        preferred,
    }
}
