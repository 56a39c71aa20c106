//! Built-in benchmark scenarios and preset lookup.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::document::{load_scenario, numeric_leaf_paths, scenario_to_value, LoadMode};
use crate::scenario::Scenario;

pub const STACKS_BENCHMARK: &str = "paper-stacks-benchmark";
pub const BOP_EPC_2030: &str = "paper-bop-epc-2030";

const BUILTIN: &[(&str, &str)] = &[
    (STACKS_BENCHMARK, include_str!("../../presets/paper-stacks-benchmark.json")),
    (BOP_EPC_2030, include_str!("../../presets/paper-bop-epc-2030.json")),
];

/// Named scenarios. Each carries its provenance notes in `metadata.provenance`.
#[derive(Debug, Clone, Default)]
pub struct PresetCatalog {
    presets: BTreeMap<String, Scenario>,
}

/// The catalog shipped with the library.
pub fn builtin_presets() -> PresetCatalog {
    let presets = BUILTIN
        .iter()
        .map(|(name, text)| {
            let loaded = load_scenario(text, LoadMode::Strict)
                .unwrap_or_else(|e| panic!("built-in preset {name} is invalid: {e}"));
            (name.to_string(), loaded.scenario)
        })
        .collect();
    PresetCatalog { presets }
}

impl PresetCatalog {
    pub fn get(&self, name: &str) -> Result<&Scenario> {
        self.presets.get(name).ok_or_else(|| Error::UnknownPreset(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.presets.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Scenario)> {
        self.presets.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.presets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.presets.is_empty()
    }

    pub fn insert(&mut self, name: impl Into<String>, scenario: Scenario) {
        self.presets.insert(name.into(), scenario);
    }

    /// Adds every `*.json` file in `dir`, keyed by file stem. Built-in names
    /// are not overridden.
    pub fn extend_from_dir(&mut self, dir: &Path) -> Result<()> {
        let entries = std::fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let mut paths: Vec<_> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
            .collect();
        paths.sort();
        for path in paths {
            let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            if self.presets.contains_key(stem) {
                continue;
            }
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let loaded = load_scenario(&text, LoadMode::Strict).map_err(|e| match e {
                Error::Parse { line, column, message } => Error::Parse {
                    line,
                    column,
                    message: format!("{}: {message}", path.display()),
                },
                other => other,
            })?;
            self.presets.insert(stem.to_string(), loaded.scenario);
        }
        Ok(())
    }
}

/// Numeric fields of `scenario` that have no provenance note, either on the
/// field itself or on one of its ancestors.
pub fn missing_provenance(scenario: &Scenario) -> Vec<String> {
    let tree = scenario_to_value(scenario);
    let notes = &scenario.metadata.provenance;
    numeric_leaf_paths(&tree)
        .into_iter()
        .filter(|path| {
            !notes
                .keys()
                .any(|k| path == k || path.starts_with(&format!("{k}.")) || path.starts_with(&format!("{k}[")))
        })
        .collect()
}
