//! The JSON scenario document and its conversion to and from [`Scenario`].
//!
//! Top-level keys are `metadata`, `stacks`, `components`, `finance`,
//! `deployment` and `structures`. See `docs/scenario.schema.json`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::curve::ExperienceCurve;
use crate::deployment::DeploymentState;
use crate::error::{Error, Result};
use crate::scenario::{FinanceParams, LearningRateBand, Metadata, PathwayPoint, Scenario};
use crate::types::{ComponentStructure, CostCategory, Region, StackStructure, StackVariant};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDocument {
    pub metadata: MetadataDoc,
    pub stacks: StacksDoc,
    pub components: ComponentsDoc,
    pub finance: FinanceParams,
    pub deployment: DeploymentDoc,
    pub structures: StructuresDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetadataDoc {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StacksDoc {
    pub curves: BTreeMap<StackVariant, StackCurveDoc>,
    pub learning_rate_band: LearningRateBand,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StackCurveDoc {
    pub initial_cost_usd_per_kw: f64,
    pub installed_base_gw: f64,
    pub learning_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentsDoc {
    pub curves: BTreeMap<Region, RegionCurvesDoc>,
    pub learning_rate_band: LearningRateBand,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCurvesDoc {
    pub installed_base_gw: f64,
    pub bop: CategoryCurveDoc,
    pub epc: CategoryCurveDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CategoryCurveDoc {
    pub initial_cost_usd_per_kw: f64,
    pub learning_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeploymentDoc {
    #[serde(default)]
    pub capacity_uncertainty: f64,
    pub pathway: Vec<PathwayPointDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathwayPointDoc {
    pub label: String,
    /// Capacity added on top of the installed bases.
    pub added: DeploymentState,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuresDoc {
    pub stack: StackStructure,
    pub component: ComponentStructure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoadMode {
    /// Unknown keys are an error.
    #[default]
    Strict,
    /// Unknown keys are reported as warnings and otherwise ignored.
    Lax,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub warnings: Vec<String>,
}

/// Parses and validates a scenario document.
pub fn load_scenario(text: &str, mode: LoadMode) -> Result<LoadedScenario> {
    let mut de = serde_json::Deserializer::from_str(text);
    let mut ignored = Vec::new();
    let doc: ScenarioDocument = serde_ignored::deserialize(&mut de, |path| ignored.push(path.to_string()))?;
    de.end()?;
    finish_load(doc, ignored, mode)
}

/// Like [`load_scenario`], starting from an already-parsed JSON value.
pub fn load_scenario_value(value: Value, mode: LoadMode) -> Result<LoadedScenario> {
    let mut ignored = Vec::new();
    let doc: ScenarioDocument =
        serde_ignored::deserialize(value, |path| ignored.push(path.to_string())).map_err(|e: serde_json::Error| {
            Error::Parse {
                line: 0,
                column: 0,
                message: e.to_string(),
            }
        })?;
    finish_load(doc, ignored, mode)
}

fn finish_load(doc: ScenarioDocument, mut unknown: Vec<String>, mode: LoadMode) -> Result<LoadedScenario> {
    let tree = serde_json::to_value(&doc).map_err(|e| Error::Io(e.to_string()))?;
    for key in doc.metadata.provenance.keys() {
        if !path_exists(&tree, key) {
            unknown.push(format!("metadata.provenance.{key} (no such document path)"));
        }
    }
    let warnings = match mode {
        LoadMode::Strict if !unknown.is_empty() => return Err(Error::UnknownKeys(unknown)),
        LoadMode::Strict => Vec::new(),
        LoadMode::Lax => unknown.into_iter().map(|k| format!("ignored unknown key: {k}")).collect(),
    };
    let scenario = Scenario::try_from(doc)?;
    Ok(LoadedScenario { scenario, warnings })
}

impl TryFrom<ScenarioDocument> for Scenario {
    type Error = Error;

    fn try_from(doc: ScenarioDocument) -> Result<Self> {
        let mut stack_curves = BTreeMap::new();
        for (variant, c) in &doc.stacks.curves {
            let curve = ExperienceCurve::new(c.initial_cost_usd_per_kw, c.installed_base_gw, c.learning_rate)
                .map_err(|e| {
                    e.at(&format!("stacks.curves.{variant}"))
                        .renamed("initial_base_gw", "installed_base_gw")
                })?;
            stack_curves.insert(*variant, curve);
        }
        let mut component_curves = BTreeMap::new();
        for (region, rc) in &doc.components.curves {
            for (category, c) in [(CostCategory::Bop, rc.bop), (CostCategory::Epc, rc.epc)] {
                let curve = ExperienceCurve::new(c.initial_cost_usd_per_kw, rc.installed_base_gw, c.learning_rate)
                    .map_err(|e| match e {
                        Error::Validation { ref field, .. } if field == "initial_base_gw" => {
                            e.renamed("initial_base_gw", "installed_base_gw")
                                .at(&format!("components.curves.{region}"))
                        }
                        other => other.at(&format!("components.curves.{region}.{category}")),
                    })?;
                component_curves.insert((*region, category), curve);
            }
        }
        let scenario = Scenario {
            metadata: Metadata {
                name: doc.metadata.name,
                description: doc.metadata.description,
                provenance: doc.metadata.provenance,
            },
            stack_curves,
            component_curves,
            stack_structure: doc.structures.stack,
            component_structure: doc.structures.component,
            stack_lr_band: doc.stacks.learning_rate_band,
            component_lr_band: doc.components.learning_rate_band,
            finance: doc.finance,
            capacity_uncertainty: doc.deployment.capacity_uncertainty,
            pathway: doc
                .deployment
                .pathway
                .into_iter()
                .map(|p| PathwayPoint {
                    label: p.label,
                    added: p.added,
                })
                .collect(),
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

impl From<&Scenario> for ScenarioDocument {
    fn from(s: &Scenario) -> Self {
        let stacks = s
            .stack_curves
            .iter()
            .map(|(v, c)| {
                (
                    *v,
                    StackCurveDoc {
                        initial_cost_usd_per_kw: c.initial_cost(),
                        installed_base_gw: c.initial_base(),
                        learning_rate: c.learning_rate(),
                    },
                )
            })
            .collect();
        let category = |c: &ExperienceCurve| CategoryCurveDoc {
            initial_cost_usd_per_kw: c.initial_cost(),
            learning_rate: c.learning_rate(),
        };
        let mut components = BTreeMap::new();
        for r in Region::ALL {
            if let (Some(bop), Some(epc)) = (
                s.component_curves.get(&(*r, CostCategory::Bop)),
                s.component_curves.get(&(*r, CostCategory::Epc)),
            ) {
                components.insert(
                    *r,
                    RegionCurvesDoc {
                        installed_base_gw: bop.initial_base(),
                        bop: category(bop),
                        epc: category(epc),
                    },
                );
            }
        }
        ScenarioDocument {
            metadata: MetadataDoc {
                name: s.metadata.name.clone(),
                description: s.metadata.description.clone(),
                provenance: s.metadata.provenance.clone(),
            },
            stacks: StacksDoc {
                curves: stacks,
                learning_rate_band: s.stack_lr_band,
            },
            components: ComponentsDoc {
                curves: components,
                learning_rate_band: s.component_lr_band,
            },
            finance: s.finance,
            deployment: DeploymentDoc {
                capacity_uncertainty: s.capacity_uncertainty,
                pathway: s
                    .pathway
                    .iter()
                    .map(|p| PathwayPointDoc {
                        label: p.label.clone(),
                        added: p.added.clone(),
                    })
                    .collect(),
            },
            structures: StructuresDoc {
                stack: s.stack_structure,
                component: s.component_structure,
            },
        }
    }
}

/// Pretty-printed JSON document for a scenario.
pub fn scenario_to_json(scenario: &Scenario) -> String {
    serde_json::to_string_pretty(&ScenarioDocument::from(scenario)).expect("scenario documents always serialize")
}

pub fn scenario_to_value(scenario: &Scenario) -> Value {
    serde_json::to_value(ScenarioDocument::from(scenario)).expect("scenario documents always serialize")
}

/// Splits `a.b[2].c` into `["a", "b", "[2]", "c"]`.
fn path_segments(path: &str) -> Vec<String> {
    let mut out = Vec::new();
    for part in path.split('.') {
        let mut rest = part;
        if let Some(idx) = rest.find('[') {
            out.push(rest[..idx].to_string());
            rest = &rest[idx..];
            while let Some(end) = rest.find(']') {
                out.push(rest[..=end].to_string());
                rest = &rest[end + 1..];
            }
            if !rest.is_empty() {
                out.push(rest.to_string());
            }
        } else {
            out.push(rest.to_string());
        }
    }
    out
}

pub(crate) fn lookup_path<'a>(tree: &'a Value, path: &str) -> Option<&'a Value> {
    let mut node = tree;
    for seg in path_segments(path) {
        node = if let Some(index) = seg.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            node.as_array()?.get(index.parse::<usize>().ok()?)?
        } else {
            node.as_object()?.get(&seg)?
        };
    }
    Some(node)
}

fn path_exists(tree: &Value, path: &str) -> bool {
    !path.is_empty() && lookup_path(tree, path).is_some()
}

/// Dotted paths of every numeric leaf in a JSON tree, skipping `metadata`.
pub fn numeric_leaf_paths(tree: &Value) -> Vec<String> {
    fn walk(node: &Value, path: String, out: &mut Vec<String>) {
        match node {
            Value::Number(_) => out.push(path),
            Value::Array(items) => {
                for (i, item) in items.iter().enumerate() {
                    walk(item, format!("{path}[{i}]"), out);
                }
            }
            Value::Object(map) => {
                for (k, v) in map {
                    if path.is_empty() && k == "metadata" {
                        continue;
                    }
                    let child = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                    walk(v, child, out);
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(tree, String::new(), &mut out);
    out
}

impl Error {
    fn renamed(self, from: &str, to: &str) -> Self {
        match self {
            Error::Validation {
                field,
                value,
                constraint,
            } => Error::Validation {
                field: field.replace(from, to),
                value,
                constraint,
            },
            other => other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segments() {
        assert_eq!(
            path_segments("deployment.pathway[1].added.per_region_gw.us"),
            vec!["deployment", "pathway", "[1]", "added", "per_region_gw", "us"]
        );
    }

    #[test]
    fn lookup() {
        let v: Value = serde_json::json!({"a": {"b": [1, {"c": 2.5}]}});
        assert_eq!(lookup_path(&v, "a.b[1].c"), Some(&serde_json::json!(2.5)));
        assert!(lookup_path(&v, "a.b[2]").is_none());
        assert!(lookup_path(&v, "a.x").is_none());
        assert_eq!(numeric_leaf_paths(&v), vec!["a.b[0]", "a.b[1].c"]);
    }
}
