//! Inverse solves, learning investment, LCOH arithmetic, sensitivity
//! envelopes and structure comparisons.

mod delta;
mod envelope;
mod finance;
mod investment;
mod target;

pub use delta::{structure_delta, StructureComparison, StructureCost, StructureDelta};
pub use envelope::{default_axis, family_bases, sweep_envelope, DeploymentRange, TrajectoryEnvelope};
pub use finance::{capital_recovery_factor, lcoh_contribution, HOURS_PER_YEAR};
pub use investment::{learning_investment, KW_PER_GW};
pub use target::{
    capacity_to_target, component_investment_to_target, investment_to_target, ComponentSelection, TargetResult,
};
