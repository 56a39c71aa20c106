//! Scenario documents, built-in presets and tabular dataset emitters.

pub mod dataset;
pub mod document;
pub mod figures;
pub mod presets;

pub use dataset::{Cell, DatasetMetadata, FigureDataset};
pub use document::{load_scenario, load_scenario_value, scenario_to_json, scenario_to_value, LoadMode, LoadedScenario, ScenarioDocument};
pub use figures::{emit_figure_dataset, FigureId};
pub use presets::{builtin_presets, missing_provenance, PresetCatalog, BOP_EPC_2030, STACKS_BENCHMARK};
