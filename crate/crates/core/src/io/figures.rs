//! Source data for the five benchmark figures.
//!
//! * `fig1` stack cost vs. global added deployment, per structure, with the lr band
//! * `fig2` learning investment and capacity vs. Western PEM cost target
//! * `fig3` stack LCOH contribution vs. utilization
//! * `fig4` regional BoP + EPC costs per component structure, with bounds
//! * `fig5` regional BoP + EPC LCOH contribution vs. utilization, with bounds

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::{investment_to_target, lcoh_contribution};
use crate::deployment::DeploymentState;
use crate::error::{Error, Result};
use crate::io::dataset::{DatasetMetadata, FigureDataset};
use crate::projection::{project_component_under, project_stack_under};
use crate::scenario::Scenario;
use crate::types::{ComponentStructure, CostCategory, Region, StackStructure, StackVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [FigureId::Fig1, FigureId::Fig2, FigureId::Fig3, FigureId::Fig4, FigureId::Fig5];

    pub fn token(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL.into_iter().find(|id| id.token() == s).ok_or_else(|| Error::UnknownToken {
            kind: "figure id",
            token: s.to_string(),
            expected: "fig1, fig2, fig3, fig4, fig5".to_string(),
        })
    }
}

/// Points on the global added-deployment axis of `fig1`.
pub const FIG1_POINTS: usize = 41;
/// Spacing of the `fig2` cost-target grid, USD/kW.
pub const FIG2_TARGET_STEP: f64 = 25.0;
/// `fig2` targets run down to this fraction of the initial cost.
pub const FIG2_DEEPEST_FRACTION: f64 = 1.0 / 6.0;

/// Utilization 0.05, 0.10, ..., 1.00.
pub fn utilization_grid() -> Vec<f64> {
    (1..=20).map(|k| k as f64 / 20.0).collect()
}

pub fn emit_figure_dataset(id: FigureId, scenario: &Scenario) -> Result<FigureDataset> {
    scenario.validate()?;
    match id {
        FigureId::Fig1 => fig1(scenario),
        FigureId::Fig2 => fig2(scenario),
        FigureId::Fig3 => fig3(scenario),
        FigureId::Fig4 => fig4(scenario),
        FigureId::Fig5 => fig5(scenario),
    }
}

fn band_costs(
    scenario: &Scenario,
    variant: StackVariant,
    structure: StackStructure,
    at: &DeploymentState,
) -> Result<(f64, [f64; 3])> {
    let mut costs = [0.0; 3];
    let mut family = 0.0;
    for (i, (_, lr)) in scenario.stack_lr_band.cases().into_iter().enumerate() {
        let p = project_stack_under(scenario, variant, structure, at, Some(lr))?;
        costs[i] = p.cost_usd_per_kw;
        family = p.family_projected_gw;
    }
    Ok((family, costs))
}

fn fig1(scenario: &Scenario) -> Result<FigureDataset> {
    let mut d = FigureDataset::new(
        "fig1",
        &[
            "structure",
            "variant",
            "added_total_gw",
            "family_cumulative_gw",
            "cost_lr_low_usd_per_kw",
            "cost_lr_base_usd_per_kw",
            "cost_lr_high_usd_per_kw",
        ],
        DatasetMetadata::for_scenario(scenario),
    );
    let max_total = scenario
        .pathway
        .iter()
        .map(|p| p.added.total_variant_gw())
        .fold(0.0, f64::max);
    let end = if max_total > 0.0 { 2.0 * max_total } else { 100.0 };
    let axis: Vec<f64> = (0..FIG1_POINTS)
        .map(|i| end * i as f64 / (FIG1_POINTS - 1) as f64)
        .collect();
    for structure in StackStructure::ALL {
        for variant in StackVariant::ALL {
            for added in &axis {
                let at = scenario.state_after(&DeploymentState::evenly_split(*added));
                let (family, [low, base, high]) = band_costs(scenario, *variant, *structure, &at)?;
                d.push(vec![
                    structure.token().into(),
                    variant.token().into(),
                    (*added).into(),
                    family.into(),
                    low.into(),
                    base.into(),
                    high.into(),
                ])?;
            }
        }
    }
    Ok(d)
}

/// Cost targets from the initial cost down to a sixth of it, on a 25 USD/kW grid.
pub fn target_grid(initial_cost: f64) -> Vec<f64> {
    let mut targets = vec![initial_cost];
    let floor = initial_cost * FIG2_DEEPEST_FRACTION;
    let mut k = (initial_cost / FIG2_TARGET_STEP).ceil() - 1.0;
    while k >= 1.0 && k * FIG2_TARGET_STEP >= floor - 1e-9 {
        let t = k * FIG2_TARGET_STEP;
        if t < initial_cost {
            targets.push(t);
        }
        k -= 1.0;
    }
    targets
}

fn fig2(scenario: &Scenario) -> Result<FigureDataset> {
    let mut d = FigureDataset::new(
        "fig2",
        &[
            "structure",
            "lr_case",
            "learning_rate",
            "target_cost_usd_per_kw",
            "family_current_gw",
            "required_family_capacity_gw",
            "required_investment_usd",
        ],
        DatasetMetadata::for_scenario(scenario),
    );
    let variant = StackVariant::WesternPem;
    let initial = scenario.stack_curve(variant)?.initial_cost();
    for structure in StackStructure::ALL {
        for (case, lr) in scenario.stack_lr_band.cases() {
            for target in target_grid(initial) {
                // below-initial targets are only reachable with positive learning
                if target < initial && lr <= 0.0 {
                    continue;
                }
                let r = investment_to_target(scenario, variant, *structure, target, Some(lr))?;
                d.push(vec![
                    structure.token().into(),
                    case.into(),
                    lr.into(),
                    target.into(),
                    r.family_current_gw.into(),
                    r.required_family_capacity_gw.into(),
                    r.required_investment_usd.into(),
                ])?;
            }
        }
    }
    Ok(d)
}

fn fig3(scenario: &Scenario) -> Result<FigureDataset> {
    let mut d = FigureDataset::new(
        "fig3",
        &[
            "point",
            "structure",
            "variant",
            "utilization",
            "capex_lr_base_usd_per_kw",
            "lcoh_lr_low_usd_per_kg",
            "lcoh_lr_base_usd_per_kg",
            "lcoh_lr_high_usd_per_kg",
        ],
        DatasetMetadata::for_scenario(scenario),
    );
    for point in &scenario.pathway {
        let at = scenario.state_after(&point.added);
        for structure in StackStructure::ALL {
            for variant in StackVariant::ALL {
                let (_, capex) = band_costs(scenario, *variant, *structure, &at)?;
                for u in utilization_grid() {
                    let lcoh = |c: f64| lcoh_contribution(c, &scenario.finance, u);
                    d.push(vec![
                        point.label.as_str().into(),
                        structure.token().into(),
                        variant.token().into(),
                        u.into(),
                        capex[1].into(),
                        lcoh(capex[0])?.into(),
                        lcoh(capex[1])?.into(),
                        lcoh(capex[2])?.into(),
                    ])?;
                }
            }
        }
    }
    Ok(d)
}

/// BoP, EPC and their sum at the base case, plus the min/max of the sum over
/// capacity scalings and the component learning-rate band.
struct RegionalCost {
    bop: f64,
    epc: f64,
    min: f64,
    max: f64,
}

fn regional_cost(
    scenario: &Scenario,
    added: &DeploymentState,
    region: Region,
    structure: ComponentStructure,
) -> Result<RegionalCost> {
    let combined = |at: &DeploymentState, lr: Option<f64>| -> Result<(f64, f64)> {
        let bop = project_component_under(scenario, region, CostCategory::Bop, structure, at, lr)?;
        let epc = project_component_under(scenario, region, CostCategory::Epc, structure, at, lr)?;
        Ok((bop.cost_usd_per_kw, epc.cost_usd_per_kw))
    };
    let (bop, epc) = combined(&scenario.state_after(added), None)?;
    let u = scenario.capacity_uncertainty;
    let mut min = bop + epc;
    let mut max = bop + epc;
    for factor in [1.0 - u, 1.0, 1.0 + u] {
        let at = scenario.state_after(&added.scaled(factor));
        for (_, lr) in scenario.component_lr_band.cases() {
            let (b, e) = combined(&at, Some(lr))?;
            min = min.min(b + e);
            max = max.max(b + e);
        }
    }
    Ok(RegionalCost { bop, epc, min, max })
}

fn fig4(scenario: &Scenario) -> Result<FigureDataset> {
    let mut d = FigureDataset::new(
        "fig4",
        &[
            "point",
            "structure",
            "region",
            "bop_usd_per_kw",
            "epc_usd_per_kw",
            "bop_epc_usd_per_kw",
            "bop_epc_min_usd_per_kw",
            "bop_epc_max_usd_per_kw",
        ],
        DatasetMetadata::for_scenario(scenario),
    );
    for point in &scenario.pathway {
        for structure in ComponentStructure::ALL {
            for region in Region::ALL {
                let c = regional_cost(scenario, &point.added, *region, *structure)?;
                d.push(vec![
                    point.label.as_str().into(),
                    structure.token().into(),
                    region.token().into(),
                    c.bop.into(),
                    c.epc.into(),
                    (c.bop + c.epc).into(),
                    c.min.into(),
                    c.max.into(),
                ])?;
            }
        }
    }
    Ok(d)
}

fn fig5(scenario: &Scenario) -> Result<FigureDataset> {
    let mut d = FigureDataset::new(
        "fig5",
        &[
            "point",
            "structure",
            "region",
            "utilization",
            "lcoh_usd_per_kg",
            "lcoh_min_usd_per_kg",
            "lcoh_max_usd_per_kg",
        ],
        DatasetMetadata::for_scenario(scenario),
    );
    for point in &scenario.pathway {
        for structure in ComponentStructure::ALL {
            for region in Region::ALL {
                let c = regional_cost(scenario, &point.added, *region, *structure)?;
                for u in utilization_grid() {
                    let lcoh = |capex: f64| lcoh_contribution(capex, &scenario.finance, u);
                    d.push(vec![
                        point.label.as_str().into(),
                        structure.token().into(),
                        region.token().into(),
                        u.into(),
                        lcoh(c.bop + c.epc)?.into(),
                        lcoh(c.min)?.into(),
                        lcoh(c.max)?.into(),
                    ])?;
                }
            }
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_grid_for_600() {
        let grid = target_grid(600.0);
        assert_eq!(grid.first(), Some(&600.0));
        assert_eq!(grid.last(), Some(&100.0));
        assert_eq!(grid.len(), 21);
        assert!(grid.contains(&300.0));
    }

    #[test]
    fn target_grid_off_step() {
        assert_eq!(target_grid(37.0), vec![37.0, 25.0]);
        assert_eq!(target_grid(10.0), vec![10.0]);
    }

    #[test]
    fn utilization_grid_bounds() {
        let g = utilization_grid();
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[19], 1.0);
    }

    #[test]
    fn figure_tokens() {
        for id in FigureId::ALL {
            assert_eq!(id.token().parse::<FigureId>().unwrap(), id);
        }
        assert!("fig6".parse::<FigureId>().is_err());
    }
}
