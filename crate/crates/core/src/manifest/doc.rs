//! Serialized form of a manifest. Expressions are strings; maps and fields
//! are keyed by coordinate name, forms by space-separated index names.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::SamplePolicy;

pub const MANIFEST_VERSION: u32 = 1;

pub type Table = BTreeMap<String, String>;

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<(f64, f64)>,
}

impl PolicyDoc {
    /// Overlays the set fields onto `base`.
    pub fn apply(&self, base: &SamplePolicy) -> Result<SamplePolicy> {
        let mut p = SamplePolicy::new(
            self.samples.unwrap_or(base.samples()),
            self.tolerance.unwrap_or(base.tolerance()),
            self.seed.unwrap_or(base.seed()),
        )?;
        let (lo, hi) = self.bounds.unwrap_or(base.default_box());
        p = p.with_box(lo, hi)?;
        Ok(p)
    }

    /// Fields set in `over` win.
    pub fn merged(&self, over: &PolicyDoc) -> PolicyDoc {
        PolicyDoc {
            samples: over.samples.or(self.samples),
            tolerance: over.tolerance.or(self.tolerance),
            seed: over.seed.or(self.seed),
            bounds: over.bounds.or(self.bounds),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDoc {
    pub coords: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub periodic: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub source: String,
    pub target: String,
    pub components: Table,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    pub degree: usize,
    pub terms: Table,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDoc {
    pub chart: String,
    pub eta: FormDoc,
    pub omega: FormDoc,
    #[serde(default, skip_serializing_if = "is_false")]
    pub attest_nonvanishing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub chart: String,
    /// Over the `g1.`/`g2.` copies of the chart.
    pub mult: Table,
    pub unit: Table,
    pub inverse: Table,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupActionDoc {
    pub group: String,
    pub space: String,
    /// Over the unprefixed group and space coordinates.
    pub components: Table,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairsDoc {
    pub chart: String,
    pub pr1: MapDoc,
    pub pr2: MapDoc,
    pub m: MapDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<MapDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriplesDoc {
    pub chart: String,
    pub first: MapDoc,
    pub second: MapDoc,
    pub third: MapDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeafDoc {
    pub name: String,
    pub map: MapDoc,
    #[serde(default, skip_serializing_if = "is_false")]
    pub attest_injective: bool,
    pub omega: FormDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeafPairsDoc {
    pub chart: String,
    pub iota: MapDoc,
    pub m: MapDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidLeafDoc {
    pub leaf: LeafDoc,
    pub unit: MapDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<LeafPairsDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDoc {
    pub objects: String,
    pub arrows: String,
    pub s: MapDoc,
    pub t: MapDoc,
    pub u: MapDoc,
    pub inv: MapDoc,
    pub pairs: PairsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<TriplesDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<FormDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<FormDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf: Option<GroupoidLeafDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionPairsDoc {
    pub chart: String,
    pub pr_g: MapDoc,
    pub pr_m: MapDoc,
    pub phi: MapDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<MapDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionTriplesDoc {
    pub chart: String,
    pub first: MapDoc,
    pub second: MapDoc,
    pub point: MapDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionDoc {
    pub leaf_m: LeafDoc,
    pub leaf_g: LeafDoc,
    pub chart: String,
    pub iota: MapDoc,
    pub arrow: MapDoc,
    pub point: MapDoc,
    pub phi: MapDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub groupoid: String,
    /// Act through the opposite groupoid, i.e. a right action.
    #[serde(default, skip_serializing_if = "is_false")]
    pub opposite: bool,
    pub module: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_m: Option<String>,
    pub rho: MapDoc,
    pub pairs: ActionPairsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<ActionTriplesDoc>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub free: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub proper: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf: Option<RestrictionDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentumDoc {
    pub action: String,
    pub coadjoint: String,
    pub structure: String,
    pub generators: Vec<Table>,
    pub mu: MapDoc,
    pub flow: MapDoc,
    pub groupoid_omega: FormDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub free: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub proper: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelDoc {
    pub name: String,
    pub map: MapDoc,
    #[serde(default, skip_serializing_if = "is_false")]
    pub attest_injective: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryDoc {
    pub xi: Vec<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub attest_regular: bool,
    pub level: LevelDoc,
    /// A group action on the level chart.
    pub isotropy: String,
    pub generators: Vec<Table>,
    pub quotient: String,
    pub p: MapDoc,
    pub sigma: MapDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeafReductionDoc {
    pub leaf: LeafDoc,
    pub geometry: GeometryDoc,
    pub quotient_leaf: MapDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction: Option<RestrictionDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateDoc {
    pub eta: FormDoc,
    pub omega: FormDoc,
}

/// Exactly one of `momentum` (group route plus Reeb-flow groupoid route) and
/// `action` (groupoid route only) is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
    pub geometry: GeometryDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf: Option<LeafReductionDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<CandidateDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiActionDoc {
    pub chart: String,
    pub left: MapDoc,
    pub point: MapDoc,
    pub right: MapDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub section: MapDoc,
    pub connector: MapDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeafBiActionDoc {
    pub chart: String,
    pub iota: MapDoc,
    pub point: MapDoc,
    pub left: MapDoc,
    pub right: MapDoc,
    pub both: MapDoc,
}

/// The leaf restrictions come from the `leaf` entries of the two actions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeafBimoduleDoc {
    pub leaf: LeafDoc,
    pub biaction: LeafBiActionDoc,
    #[serde(default, skip_serializing_if = "is_false")]
    pub attest_orbit_closure: bool,
}

/// `right` names an action with `opposite: true`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoritaDoc {
    pub left: String,
    pub right: String,
    pub structure_m: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub biaction: Option<BiActionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_witness: Option<WitnessDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_witness: Option<WitnessDoc>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub attest_surjective: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf: Option<LeafBimoduleDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestDoc {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicyDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub charts: BTreeMap<String, ChartDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub structures: BTreeMap<String, StructureDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub products: BTreeMap<String, ProductDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub groups: BTreeMap<String, GroupDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub group_actions: BTreeMap<String, GroupActionDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub groupoids: BTreeMap<String, GroupoidDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub actions: BTreeMap<String, ActionDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub momentum: BTreeMap<String, MomentumDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub reductions: BTreeMap<String, ReductionDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morita: BTreeMap<String, MoritaDoc>,
}

impl Default for ManifestDoc {
    fn default() -> Self {
        ManifestDoc {
            version: MANIFEST_VERSION,
            policy: None,
            charts: BTreeMap::new(),
            structures: BTreeMap::new(),
            products: BTreeMap::new(),
            groups: BTreeMap::new(),
            group_actions: BTreeMap::new(),
            groupoids: BTreeMap::new(),
            actions: BTreeMap::new(),
            momentum: BTreeMap::new(),
            reductions: BTreeMap::new(),
            morita: BTreeMap::new(),
        }
    }
}

impl ManifestDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(parse_error)?;
        match value.get("version") {
            Some(v) if v.as_u64() == Some(MANIFEST_VERSION as u64) => {}
            Some(v) => {
                return Err(Error::invalid("manifest", format!("unsupported version {v}")));
            }
            None => return Err(Error::invalid("manifest", "missing `version` field")),
        }
        // Reparse from text so that schema errors carry positions.
        serde_json::from_str(text).map_err(parse_error)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("manifest serializes")
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}
