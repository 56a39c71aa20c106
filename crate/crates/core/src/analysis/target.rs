//! Inverse solves: how much family deployment, and how much cumulative
//! spend, it takes to bring a cost down to a target.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::investment::learning_investment;
use crate::curve::ExperienceCurve;
use crate::error::{Error, Result};
use crate::projection::{region_family_bases, stack_family_bases};
use crate::scenario::Scenario;
use crate::types::{ComponentStructure, CostCategory, Region, StackStructure, StackVariant, Structure};

/// Family cumulative capacity (GW) at which `curve` reaches `target_cost`.
///
/// Closed form: `x0 * (target / C0)^(1 / b)`.
pub fn capacity_to_target(curve: &ExperienceCurve, target_cost: f64) -> Result<f64> {
    if !(target_cost.is_finite() && target_cost > 0.0) {
        return Err(Error::validation("target_cost_usd_per_kw", target_cost, "must be finite and > 0"));
    }
    let initial = curve.initial_cost();
    if target_cost == initial {
        return Ok(curve.initial_base());
    }
    let lr = curve.learning_rate();
    if lr == 0.0 {
        return Err(Error::UnreachableTarget);
    }
    if lr > 0.0 && target_cost > initial {
        return Err(Error::validation(
            "target_cost_usd_per_kw",
            target_cost,
            format!("exceeds the initial cost {initial} USD/kW (costs only fall under positive learning)"),
        ));
    }
    if lr < 0.0 && target_cost < initial {
        return Err(Error::validation(
            "target_cost_usd_per_kw",
            target_cost,
            format!("is below the initial cost {initial} USD/kW (costs only rise under negative learning)"),
        ));
    }
    Ok(curve.initial_base() * (target_cost / initial).powf(1.0 / curve.exponent()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetResult {
    pub subject: String,
    pub structure: Structure,
    pub learning_rate: f64,
    pub initial_cost_usd_per_kw: f64,
    pub target_cost_usd_per_kw: f64,
    pub family_current_gw: f64,
    pub required_family_capacity_gw: f64,
    pub required_investment_usd: f64,
}

/// Which component costs a target applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentSelection {
    Bop,
    Epc,
    /// BoP and EPC summed.
    BopEpc,
}

impl ComponentSelection {
    pub fn categories(self) -> &'static [CostCategory] {
        match self {
            ComponentSelection::Bop => &[CostCategory::Bop],
            ComponentSelection::Epc => &[CostCategory::Epc],
            ComponentSelection::BopEpc => CostCategory::ALL,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            ComponentSelection::Bop => "bop",
            ComponentSelection::Epc => "epc",
            ComponentSelection::BopEpc => "bop_epc",
        }
    }
}

impl fmt::Display for ComponentSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for ComponentSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bop" => Ok(Self::Bop),
            "epc" => Ok(Self::Epc),
            "bop_epc" => Ok(Self::BopEpc),
            _ => Err(Error::UnknownToken {
                kind: "cost category",
                token: s.to_string(),
                expected: "bop, epc, bop_epc".to_string(),
            }),
        }
    }
}

fn solve(
    subject: String,
    structure: Structure,
    family_curve: ExperienceCurve,
    target_cost: f64,
) -> Result<TargetResult> {
    let capacity = capacity_to_target(&family_curve, target_cost)?;
    let current = family_curve.initial_base();
    Ok(TargetResult {
        subject,
        structure,
        learning_rate: family_curve.learning_rate(),
        initial_cost_usd_per_kw: family_curve.initial_cost(),
        target_cost_usd_per_kw: target_cost,
        family_current_gw: current,
        required_family_capacity_gw: capacity,
        required_investment_usd: learning_investment(&family_curve, current, capacity)?,
    })
}

/// Family capacity and cumulative investment for `variant` to reach
/// `target_cost` under `structure`.
///
/// The named variant's own cost curve is integrated over its family's
/// cumulative-deployment axis, starting at the family's current base.
pub fn investment_to_target(
    scenario: &Scenario,
    variant: StackVariant,
    structure: StackStructure,
    target_cost: f64,
    learning_rate: Option<f64>,
) -> Result<TargetResult> {
    let curve = scenario.stack_curve(variant)?;
    let current_state = scenario.current_state();
    let (current, _) = stack_family_bases(scenario, variant, structure, &current_state)?;
    let family_curve = ExperienceCurve::new(
        curve.initial_cost(),
        current,
        learning_rate.unwrap_or(curve.learning_rate()),
    )?;
    solve(variant.to_string(), Structure::Stack(structure), family_curve, target_cost)
}

/// Component counterpart of [`investment_to_target`]. With
/// [`ComponentSelection::BopEpc`] the two categories are treated as one
/// curve, which requires them to share a learning family and learning rate.
pub fn component_investment_to_target(
    scenario: &Scenario,
    region: Region,
    selection: ComponentSelection,
    structure: ComponentStructure,
    target_cost: f64,
    learning_rate: Option<f64>,
) -> Result<TargetResult> {
    let current_state = scenario.current_state();
    let mut initial_cost = 0.0;
    let mut family_base: Option<f64> = None;
    let mut rate: Option<f64> = None;
    for category in selection.categories() {
        let curve = scenario.component_curve(region, *category)?;
        let (current, _) = region_family_bases(scenario, region, *category, structure, &current_state)?;
        let lr = learning_rate.unwrap_or(curve.learning_rate());
        if family_base.is_some_and(|b| b != current) {
            return Err(Error::Domain(format!(
                "BoP and EPC learn from different families under `{structure}`; solve them separately"
            )));
        }
        if rate.is_some_and(|r| r != lr) {
            return Err(Error::Domain(format!(
                "BoP and EPC learning rates differ in {region}; solve them separately"
            )));
        }
        family_base = Some(current);
        rate = Some(lr);
        initial_cost += curve.initial_cost();
    }
    let (Some(base), Some(lr)) = (family_base, rate) else {
        unreachable!("every selection names at least one category");
    };
    let family_curve = ExperienceCurve::new(initial_cost, base, lr)?;
    solve(
        format!("{region}.{selection}"),
        Structure::Component(structure),
        family_curve,
        target_cost,
    )
}
