//! Request arguments and their evaluation, shared by the HTTP handlers and
//! the command-line front end.
//!
//! Every operation resolves a scenario, evaluates it and returns a
//! [`FigureDataset`], so both front ends render identical numbers.

use learncurve_core::analysis::{
    component_investment_to_target, default_axis, investment_to_target, lcoh_contribution, sweep_envelope,
    ComponentSelection, TargetResult,
};
use learncurve_core::io::figures::utilization_grid;
use learncurve_core::io::{
    emit_figure_dataset, load_scenario_value, scenario_to_value, DatasetMetadata, FigureDataset, FigureId, LoadMode,
    PresetCatalog,
};
use learncurve_core::projection::{project_component_under, project_stack_under};
use learncurve_core::{
    CostCategory, DeploymentState, Error, LearningRateBand, Region, Result, Scenario, StackVariant, Structure,
    Subject,
};
use serde::Deserialize;
use serde_json::Value;

fn invalid(field: &str, value: impl ToString, constraint: &str) -> Error {
    Error::Validation {
        field: field.to_string(),
        value: value.to_string(),
        constraint: constraint.to_string(),
    }
}

/// Where the scenario comes from: a named preset or an inline document,
/// optionally adjusted by a JSON merge patch.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
pub struct ScenarioSource {
    pub preset: Option<String>,
    pub scenario: Option<Value>,
    pub overrides: Option<Value>,
    #[serde(default)]
    pub lax: bool,
}

pub const SOURCE_KEYS: [&str; 4] = ["preset", "scenario", "overrides", "lax"];

#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub scenario: Scenario,
    pub warnings: Vec<String>,
}

impl ScenarioSource {
    pub fn resolve(&self, catalog: &PresetCatalog) -> Result<Resolved> {
        let mut doc = match (&self.preset, &self.scenario) {
            (Some(name), None) => scenario_to_value(catalog.get(name)?),
            (None, Some(doc)) => doc.clone(),
            (Some(_), Some(_)) => return Err(invalid("preset", "and scenario", "are mutually exclusive")),
            (None, None) => return Err(invalid("preset", "missing", "or scenario is required")),
        };
        if let Some(patch) = &self.overrides {
            if !patch.is_object() {
                return Err(invalid("overrides", patch, "must be a JSON object (merge patch)"));
            }
            json_patch::merge(&mut doc, patch);
        }
        let mode = if self.lax { LoadMode::Lax } else { LoadMode::Strict };
        let loaded = load_scenario_value(doc, mode)?;
        Ok(Resolved {
            scenario: loaded.scenario,
            warnings: loaded.warnings,
        })
    }
}

/// Deployment to evaluate at. At most one selector may be set; with none,
/// every pathway point of the scenario is used.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
pub struct AtArgs {
    /// Added capacity split evenly across the four variants and four regions.
    pub at_total_gw: Option<f64>,
    /// Added capacity per variant and region.
    pub at_added: Option<DeploymentState>,
    /// A pathway label.
    pub point: Option<String>,
}

impl AtArgs {
    /// Labeled absolute cumulative states.
    pub fn states(&self, scenario: &Scenario) -> Result<Vec<(String, DeploymentState)>> {
        let set = [self.at_total_gw.is_some(), self.at_added.is_some(), self.point.is_some()];
        if set.iter().filter(|s| **s).count() > 1 {
            return Err(invalid("at_total_gw", "several", "at_total_gw, at_added and point are mutually exclusive"));
        }
        if let Some(total) = self.at_total_gw {
            if !(total.is_finite() && total >= 0.0) {
                return Err(invalid("at_total_gw", total, "must be finite and >= 0"));
            }
            let added = DeploymentState::evenly_split(total);
            return Ok(vec![(format!("+{total}gw"), scenario.state_after(&added))]);
        }
        if let Some(added) = &self.at_added {
            added.validate().map_err(|e| e.at("at_added"))?;
            for v in StackVariant::ALL {
                added.get(*v).map_err(|e| e.at("at_added.per_variant_gw"))?;
            }
            for r in Region::ALL {
                added.get(*r).map_err(|e| e.at("at_added.per_region_gw"))?;
            }
            return Ok(vec![("custom".to_string(), scenario.state_after(added))]);
        }
        if let Some(label) = &self.point {
            let p = scenario.pathway_point(label)?;
            return Ok(vec![(p.label.clone(), scenario.state_after(&p.added))]);
        }
        Ok(scenario
            .pathway
            .iter()
            .map(|p| (p.label.clone(), scenario.state_after(&p.added)))
            .collect())
    }
}

fn apply_structure(scenario: &mut Scenario, structure: Option<Structure>) {
    match structure {
        Some(Structure::Stack(s)) => scenario.stack_structure = s,
        Some(Structure::Component(s)) => scenario.component_structure = s,
        None => {}
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
pub struct ProjectArgs {
    pub structure: Option<Structure>,
    pub variant: Option<StackVariant>,
    pub region: Option<Region>,
    pub category: Option<CostCategory>,
    pub at_total_gw: Option<f64>,
    pub at_added: Option<DeploymentState>,
    pub point: Option<String>,
}

impl ProjectArgs {
    fn at(&self) -> AtArgs {
        AtArgs {
            at_total_gw: self.at_total_gw,
            at_added: self.at_added.clone(),
            point: self.point.clone(),
        }
    }
}

/// Projected stack and component costs. A structure selects which kind of
/// subject is reported unless a variant or region is named explicitly.
pub fn project(scenario: &Scenario, args: &ProjectArgs) -> Result<FigureDataset> {
    if args.variant.is_some() && (args.region.is_some() || args.category.is_some()) {
        return Err(invalid("variant", "with region", "a projection names either a variant or a region"));
    }
    if args.category.is_some() && args.region.is_none() {
        return Err(invalid("category", "without region", "requires a region"));
    }
    let mut scenario = scenario.clone();
    apply_structure(&mut scenario, args.structure);
    let mut stacks = args.region.is_none() && !matches!(args.structure, Some(Structure::Component(_)));
    let mut components = args.variant.is_none() && !matches!(args.structure, Some(Structure::Stack(_)));
    if args.variant.is_some() {
        stacks = true;
        components = false;
        if let Some(s @ Structure::Component(_)) = args.structure {
            return Err(invalid("structure", s, "does not apply to stack variants"));
        }
    }
    if args.region.is_some() {
        stacks = false;
        components = true;
        if let Some(s @ Structure::Stack(_)) = args.structure {
            return Err(invalid("structure", s, "does not apply to regional BoP/EPC costs"));
        }
    }

    let mut d = FigureDataset::new(
        "project",
        &[
            "point",
            "subject",
            "structure",
            "family_current_gw",
            "family_projected_gw",
            "cost_usd_per_kw",
        ],
        DatasetMetadata::for_scenario(&scenario),
    );
    let variants: Vec<StackVariant> = args.variant.map_or_else(|| StackVariant::ALL.to_vec(), |v| vec![v]);
    let regions: Vec<Region> = args.region.map_or_else(|| Region::ALL.to_vec(), |r| vec![r]);
    let categories: Vec<CostCategory> = args.category.map_or_else(|| CostCategory::ALL.to_vec(), |k| vec![k]);
    for (label, at) in args.at().states(&scenario)? {
        if stacks {
            for v in &variants {
                let p = project_stack_under(&scenario, *v, scenario.stack_structure, &at, None)?;
                d.push(vec![
                    label.as_str().into(),
                    v.token().into(),
                    scenario.stack_structure.token().into(),
                    p.family_current_gw.into(),
                    p.family_projected_gw.into(),
                    p.cost_usd_per_kw.into(),
                ])?;
            }
        }
        if components {
            for r in &regions {
                for k in &categories {
                    let p = project_component_under(&scenario, *r, *k, scenario.component_structure, &at, None)?;
                    d.push(vec![
                        label.as_str().into(),
                        format!("{r}.{k}").into(),
                        scenario.component_structure.token().into(),
                        p.family_current_gw.into(),
                        p.family_projected_gw.into(),
                        p.cost_usd_per_kw.into(),
                    ])?;
                }
            }
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
pub struct TargetArgs {
    pub variant: Option<StackVariant>,
    pub region: Option<Region>,
    /// Component costs the target applies to; defaults to `bop_epc`.
    pub category: Option<ComponentSelection>,
    pub structure: Option<Structure>,
    pub target_cost_usd_per_kw: f64,
    /// Overrides the curve's learning rate.
    pub learning_rate: Option<f64>,
}

pub fn target(scenario: &Scenario, args: &TargetArgs) -> Result<FigureDataset> {
    let result: TargetResult = match (args.variant, args.region) {
        (Some(variant), None) => {
            if args.category.is_some() {
                return Err(invalid("category", "with variant", "applies to regional targets only"));
            }
            let structure = match args.structure {
                None => scenario.stack_structure,
                Some(Structure::Stack(s)) => s,
                Some(s) => return Err(invalid("structure", s, "does not apply to stack variants")),
            };
            investment_to_target(scenario, variant, structure, args.target_cost_usd_per_kw, args.learning_rate)?
        }
        (None, Some(region)) => {
            let structure = match args.structure {
                None => scenario.component_structure,
                Some(Structure::Component(s)) => s,
                Some(s) => return Err(invalid("structure", s, "does not apply to regional BoP/EPC costs")),
            };
            component_investment_to_target(
                scenario,
                region,
                args.category.unwrap_or(ComponentSelection::BopEpc),
                structure,
                args.target_cost_usd_per_kw,
                args.learning_rate,
            )?
        }
        (Some(_), Some(_)) => return Err(invalid("variant", "with region", "a target names either a variant or a region")),
        (None, None) => return Err(invalid("variant", "missing", "or region is required")),
    };
    let mut d = FigureDataset::new(
        "target",
        &[
            "subject",
            "structure",
            "learning_rate",
            "initial_cost_usd_per_kw",
            "target_cost_usd_per_kw",
            "family_current_gw",
            "required_family_capacity_gw",
            "required_investment_usd",
        ],
        DatasetMetadata::for_scenario(scenario),
    );
    d.push(vec![
        result.subject.into(),
        result.structure.to_string().into(),
        result.learning_rate.into(),
        result.initial_cost_usd_per_kw.into(),
        result.target_cost_usd_per_kw.into(),
        result.family_current_gw.into(),
        result.required_family_capacity_gw.into(),
        result.required_investment_usd.into(),
    ])?;
    Ok(d)
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
pub struct LcohArgs {
    /// Evaluate this capex directly instead of projecting one.
    pub capex_usd_per_kw: Option<f64>,
    /// A single utilization; defaults to 0.05, 0.10, ..., 1.00.
    pub utilization: Option<f64>,
    pub structure: Option<Structure>,
    pub variant: Option<StackVariant>,
    /// Report the region's combined BoP + EPC cost.
    pub region: Option<Region>,
    pub at_total_gw: Option<f64>,
    pub at_added: Option<DeploymentState>,
    pub point: Option<String>,
}

/// Capital-cost contribution to LCOH, either for a given capex or for
/// projected stack (or regional BoP + EPC) costs.
pub fn lcoh(scenario: &Scenario, args: &LcohArgs) -> Result<FigureDataset> {
    let utilizations = match args.utilization {
        Some(u) => vec![u],
        None => utilization_grid(),
    };
    let mut d = FigureDataset::new(
        "lcoh",
        &[
            "point",
            "subject",
            "structure",
            "capex_usd_per_kw",
            "utilization",
            "lcoh_usd_per_kg",
        ],
        DatasetMetadata::for_scenario(scenario),
    );
    let push = |d: &mut FigureDataset, point: &str, subject: &str, structure: &str, capex: f64| -> Result<()> {
        for u in &utilizations {
            d.push(vec![
                point.into(),
                subject.into(),
                structure.into(),
                capex.into(),
                (*u).into(),
                lcoh_contribution(capex, &scenario.finance, *u)?.into(),
            ])?;
        }
        Ok(())
    };
    if let Some(capex) = args.capex_usd_per_kw {
        let conflicting = args.variant.is_some()
            || args.region.is_some()
            || args.structure.is_some()
            || args.at_total_gw.is_some()
            || args.at_added.is_some()
            || args.point.is_some();
        if conflicting {
            return Err(invalid("capex_usd_per_kw", capex, "excludes projection arguments"));
        }
        push(&mut d, "", "capex", "", capex)?;
        return Ok(d);
    }
    let projected = project(
        scenario,
        &ProjectArgs {
            structure: args.structure,
            variant: args.variant,
            region: args.region,
            category: None,
            at_total_gw: args.at_total_gw,
            at_added: args.at_added.clone(),
            point: args.point.clone(),
        },
    )?;
    let cost_col = projected.column_index("cost_usd_per_kw").expect("project column");
    let text = |c: &learncurve_core::io::Cell| match c {
        learncurve_core::io::Cell::Text(t) => t.clone(),
        learncurve_core::io::Cell::Number(n) => n.to_string(),
    };
    let mut rows = projected.rows.iter().peekable();
    while let Some(row) = rows.next() {
        let (point, subject, structure) = (text(&row[0]), text(&row[1]), text(&row[2]));
        let mut capex = row[cost_col].as_number().expect("numeric cost");
        // components come as consecutive bop, epc rows per region
        if let Some(region) = subject.strip_suffix(".bop") {
            let epc = rows.next().expect("epc row follows bop");
            capex += epc[cost_col].as_number().expect("numeric cost");
            push(&mut d, &point, &format!("{region}.bop_epc"), &structure, capex)?;
        } else {
            push(&mut d, &point, &subject, &structure, capex)?;
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
pub struct SweepArgs {
    pub variant: Option<StackVariant>,
    pub region: Option<Region>,
    pub category: Option<CostCategory>,
    pub structure: Option<Structure>,
    /// Family cumulative capacities, GW. Defaults to an evenly spaced axis.
    pub axis_gw: Option<Vec<f64>>,
    /// Points on the default axis.
    pub points: Option<usize>,
    pub learning_rate_band: Option<LearningRateBand>,
}

pub const DEFAULT_SWEEP_POINTS: usize = 21;

/// Cost over a deployment axis for the low/base/high learning rates, plus
/// rows at the smallest and largest family capacity the pathway reaches.
pub fn sweep(scenario: &Scenario, args: &SweepArgs) -> Result<FigureDataset> {
    let (subject, structure, band) = match (args.variant, args.region, args.category) {
        (Some(variant), None, None) => (
            Subject::Stack { variant },
            args.structure.unwrap_or(Structure::Stack(scenario.stack_structure)),
            scenario.stack_lr_band,
        ),
        (None, Some(region), Some(category)) => (
            Subject::Component { region, category },
            args.structure.unwrap_or(Structure::Component(scenario.component_structure)),
            scenario.component_lr_band,
        ),
        (None, Some(_), None) => return Err(invalid("category", "missing", "is required with region")),
        _ => return Err(invalid("variant", "missing", "or region and category are required")),
    };
    let band = args.learning_rate_band.unwrap_or(band);
    let axis = match &args.axis_gw {
        Some(axis) => axis.clone(),
        None => default_axis(scenario, subject, structure, args.points.unwrap_or(DEFAULT_SWEEP_POINTS))?,
    };
    let env = sweep_envelope(scenario, subject, structure, &axis, band)?;
    let mut d = FigureDataset::new(
        "sweep",
        &[
            "subject",
            "structure",
            "row",
            "family_cumulative_gw",
            "cost_lr_low_usd_per_kw",
            "cost_lr_base_usd_per_kw",
            "cost_lr_high_usd_per_kw",
        ],
        DatasetMetadata::for_scenario(scenario),
    );
    let subject_token = subject.to_string();
    let structure_token = structure.to_string();
    let push = |d: &mut FigureDataset, row: &str, x: f64, costs: [f64; 3]| -> Result<()> {
        d.push(vec![
            subject_token.as_str().into(),
            structure_token.as_str().into(),
            row.into(),
            x.into(),
            costs[0].into(),
            costs[1].into(),
            costs[2].into(),
        ])
    };
    for i in 0..env.axis_gw.len() {
        push(
            &mut d,
            "axis",
            env.axis_gw[i],
            [
                env.cost_lr_low_usd_per_kw[i],
                env.cost_lr_base_usd_per_kw[i],
                env.cost_lr_high_usd_per_kw[i],
            ],
        )?;
    }
    if let Some(range) = env.deployment_range {
        for (row, x) in [("pathway_min", range.family_min_gw), ("pathway_max", range.family_max_gw)] {
            let at = sweep_envelope(scenario, subject, structure, &[x], band)?;
            push(
                &mut d,
                row,
                x,
                [
                    at.cost_lr_low_usd_per_kw[0],
                    at.cost_lr_base_usd_per_kw[0],
                    at.cost_lr_high_usd_per_kw[0],
                ],
            )?;
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct FigureArgs {
    pub id: FigureId,
}

pub fn figure(scenario: &Scenario, args: &FigureArgs) -> Result<FigureDataset> {
    emit_figure_dataset(args.id, scenario)
}
