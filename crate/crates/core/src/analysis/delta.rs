//! Cost differences across learning structures at a fixed deployment state.

use serde::Serialize;

use crate::analysis::finance::lcoh_contribution;
use crate::deployment::DeploymentState;
use crate::error::Result;
use crate::projection::{project_component_under, project_stack_under};
use crate::scenario::Scenario;
use crate::types::{ComponentStructure, CostCategory, Region, StackStructure, StackVariant, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructureCost {
    pub structure: Structure,
    pub cost_usd_per_kw: f64,
}

/// One subject evaluated under every applicable structure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureComparison {
    /// `western_pem`, `us.bop`, `us.bop_epc`, ...
    pub subject: String,
    pub costs: Vec<StructureCost>,
    /// max - min over structures.
    pub spread_usd_per_kw: f64,
    pub spread_lcoh_usd_per_kg: Option<f64>,
}

impl StructureComparison {
    fn new(subject: String, costs: Vec<StructureCost>, scenario: &Scenario, utilization: Option<f64>) -> Result<Self> {
        let max = costs.iter().map(|c| c.cost_usd_per_kw).fold(f64::NEG_INFINITY, f64::max);
        let min = costs.iter().map(|c| c.cost_usd_per_kw).fold(f64::INFINITY, f64::min);
        let spread = max - min;
        let spread_lcoh = utilization
            .map(|u| lcoh_contribution(spread, &scenario.finance, u))
            .transpose()?;
        Ok(Self {
            subject,
            costs,
            spread_usd_per_kw: spread,
            spread_lcoh_usd_per_kg: spread_lcoh,
        })
    }

    pub fn cost(&self, structure: impl Into<Structure>) -> Option<f64> {
        let structure = structure.into();
        self.costs
            .iter()
            .find(|c| c.structure == structure)
            .map(|c| c.cost_usd_per_kw)
    }
}

impl From<StackStructure> for Structure {
    fn from(s: StackStructure) -> Self {
        Structure::Stack(s)
    }
}

impl From<ComponentStructure> for Structure {
    fn from(s: ComponentStructure) -> Self {
        Structure::Component(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureDelta {
    pub stacks: Vec<StructureComparison>,
    /// Per region: BoP, EPC, then their sum (`bop_epc`).
    pub components: Vec<StructureComparison>,
}

impl StructureDelta {
    pub fn find(&self, subject: &str) -> Option<&StructureComparison> {
        self.stacks
            .iter()
            .chain(&self.components)
            .find(|c| c.subject == subject)
    }
}

/// Evaluates every stack variant under all three stack structures and every
/// region's BoP, EPC and BoP+EPC under all three component structures, at
/// the absolute cumulative state `at`.
pub fn structure_delta(scenario: &Scenario, at: &DeploymentState, utilization: Option<f64>) -> Result<StructureDelta> {
    let mut stacks = Vec::new();
    for variant in StackVariant::ALL {
        let costs = StackStructure::ALL
            .iter()
            .map(|s| {
                project_stack_under(scenario, *variant, *s, at, None).map(|p| StructureCost {
                    structure: Structure::Stack(*s),
                    cost_usd_per_kw: p.cost_usd_per_kw,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        stacks.push(StructureComparison::new(variant.to_string(), costs, scenario, utilization)?);
    }

    let mut components = Vec::new();
    for region in Region::ALL {
        let mut combined: Vec<StructureCost> = Vec::new();
        for category in CostCategory::ALL {
            let costs = ComponentStructure::ALL
                .iter()
                .map(|s| {
                    project_component_under(scenario, *region, *category, *s, at, None).map(|p| StructureCost {
                        structure: Structure::Component(*s),
                        cost_usd_per_kw: p.cost_usd_per_kw,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if combined.is_empty() {
                combined = costs.clone();
            } else {
                for (total, c) in combined.iter_mut().zip(&costs) {
                    total.cost_usd_per_kw += c.cost_usd_per_kw;
                }
            }
            components.push(StructureComparison::new(
                format!("{region}.{category}"),
                costs,
                scenario,
                utilization,
            )?);
        }
        components.push(StructureComparison::new(
            format!("{region}.bop_epc"),
            combined,
            scenario,
            utilization,
        )?);
    }
    Ok(StructureDelta { stacks, components })
}
