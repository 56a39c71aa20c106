//! Structure-aware projections of stack and component costs.

use serde::Serialize;

use crate::curve::project_cost;
use crate::deployment::{family_cumulative, DeploymentState};
use crate::error::Result;
use crate::scenario::Scenario;
use crate::structure::{region_family, stack_family};
use crate::types::{ComponentStructure, CostCategory, Region, StackStructure, StackVariant};

/// A projected cost together with the family bases that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Projection {
    pub family_current_gw: f64,
    pub family_projected_gw: f64,
    pub cost_usd_per_kw: f64,
}

/// Family bases (current, at `at`) for a stack variant under `structure`.
pub fn stack_family_bases(
    scenario: &Scenario,
    variant: StackVariant,
    structure: StackStructure,
    at: &DeploymentState,
) -> Result<(f64, f64)> {
    let family = stack_family(structure, variant);
    let current = family_cumulative(&scenario.current_state(), &family)?;
    let projected = family_cumulative(at, &family)?;
    Ok((current, projected))
}

pub fn region_family_bases(
    scenario: &Scenario,
    region: Region,
    category: CostCategory,
    structure: ComponentStructure,
    at: &DeploymentState,
) -> Result<(f64, f64)> {
    let family = region_family(structure, category, region);
    let current = family_cumulative(&scenario.current_state(), &family)?;
    let projected = family_cumulative(at, &family)?;
    Ok((current, projected))
}

/// Projects a variant's stack cost to the absolute cumulative state `at`
/// under an explicit structure, optionally overriding its learning rate.
pub fn project_stack_under(
    scenario: &Scenario,
    variant: StackVariant,
    structure: StackStructure,
    at: &DeploymentState,
    learning_rate: Option<f64>,
) -> Result<Projection> {
    let mut curve = *scenario.stack_curve(variant)?;
    if let Some(lr) = learning_rate {
        curve = curve.with_learning_rate(lr)?;
    }
    let (current, projected) = stack_family_bases(scenario, variant, structure, at)?;
    Ok(Projection {
        family_current_gw: current,
        family_projected_gw: projected,
        cost_usd_per_kw: project_cost(&curve, current, projected)?,
    })
}

pub fn project_component_under(
    scenario: &Scenario,
    region: Region,
    category: CostCategory,
    structure: ComponentStructure,
    at: &DeploymentState,
    learning_rate: Option<f64>,
) -> Result<Projection> {
    let mut curve = *scenario.component_curve(region, category)?;
    if let Some(lr) = learning_rate {
        curve = curve.with_learning_rate(lr)?;
    }
    let (current, projected) = region_family_bases(scenario, region, category, structure, at)?;
    Ok(Projection {
        family_current_gw: current,
        family_projected_gw: projected,
        cost_usd_per_kw: project_cost(&curve, current, projected)?,
    })
}

/// Stack cost of `variant` at the absolute cumulative state `at`, under the
/// scenario's stack structure.
pub fn project_stack_cost(scenario: &Scenario, variant: StackVariant, at: &DeploymentState) -> Result<f64> {
    project_stack_under(scenario, variant, scenario.stack_structure, at, None).map(|p| p.cost_usd_per_kw)
}

/// BoP or EPC cost for `region` at `at`, under the scenario's component structure.
pub fn project_component_cost(
    scenario: &Scenario,
    region: Region,
    category: CostCategory,
    at: &DeploymentState,
) -> Result<f64> {
    project_component_under(scenario, region, category, scenario.component_structure, at, None)
        .map(|p| p.cost_usd_per_kw)
}
