//! Experience-curve projections of electrolysis capital costs under
//! alternative learning structures.
//!
//! Stack costs learn per variant family (shared, technology-fragmented or
//! regionally fragmented); BoP and EPC costs learn per region family (local,
//! global or hybrid). On top of the projections the crate solves for the
//! deployment and investment needed to reach cost targets, converts capex
//! into a hydrogen-cost contribution, and emits tabular datasets.
//!
//! All values are immutable after construction and every operation is a
//! pure function of its inputs.

pub mod analysis;
pub mod curve;
pub mod deployment;
mod error;
pub mod io;
pub mod projection;
pub mod scenario;
pub mod structure;
pub mod types;

pub use curve::{exponent_from_learning_rate, project_cost, ExperienceCurve};
pub use deployment::{family_cumulative, DeploymentState};
pub use error::{Error, Result};
pub use projection::{project_component_cost, project_stack_cost, Projection};
pub use scenario::{FinanceParams, LearningRateBand, Metadata, PathwayPoint, Scenario};
pub use structure::{region_family, stack_family};
pub use types::{ComponentStructure, CostCategory, Region, StackStructure, StackVariant, Structure, Subject};
