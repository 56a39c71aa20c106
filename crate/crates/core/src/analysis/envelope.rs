//! Cost trajectories over a deployment axis for a band of learning rates.

use serde::Serialize;

use crate::curve::project_cost;
use crate::deployment::DeploymentState;
use crate::error::{Error, Result};
use crate::projection::{region_family_bases, stack_family_bases};
use crate::scenario::{LearningRateBand, Scenario};
use crate::types::{Structure, Subject};

/// Projected cost paths, one per learning rate in the band.
///
/// The series for the higher learning rate lies at or below the series for
/// the lower rate at every axis point beyond the current base.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryEnvelope {
    pub subject: Subject,
    pub structure: Structure,
    pub band: LearningRateBand,
    pub family_current_gw: f64,
    /// Family cumulative deployment, GW.
    pub axis_gw: Vec<f64>,
    pub cost_lr_low_usd_per_kw: Vec<f64>,
    pub cost_lr_base_usd_per_kw: Vec<f64>,
    pub cost_lr_high_usd_per_kw: Vec<f64>,
    pub deployment_range: Option<DeploymentRange>,
}

/// Cost bracket over the scenario's deployment pathway (and its capacity
/// uncertainty), across all learning rates in the band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeploymentRange {
    pub family_min_gw: f64,
    pub family_max_gw: f64,
    pub cost_min_usd_per_kw: f64,
    pub cost_max_usd_per_kw: f64,
}

pub(crate) fn check_subject_structure(subject: Subject, structure: Structure) -> Result<()> {
    match (subject, structure) {
        (Subject::Stack { .. }, Structure::Stack(_)) | (Subject::Component { .. }, Structure::Component(_)) => Ok(()),
        _ => Err(Error::validation(
            "structure",
            structure,
            format!("does not apply to `{subject}` (stack subjects take shared/technology_fragmented/regionally_fragmented, components take local/global/hybrid)"),
        )),
    }
}

/// `(current, projected)` family bases for any subject.
pub fn family_bases(
    scenario: &Scenario,
    subject: Subject,
    structure: Structure,
    at: &DeploymentState,
) -> Result<(f64, f64)> {
    check_subject_structure(subject, structure)?;
    match (subject, structure) {
        (Subject::Stack { variant }, Structure::Stack(s)) => stack_family_bases(scenario, variant, s, at),
        (Subject::Component { region, category }, Structure::Component(s)) => {
            region_family_bases(scenario, region, category, s, at)
        }
        _ => unreachable!("checked above"),
    }
}

fn subject_curve(scenario: &Scenario, subject: Subject) -> Result<crate::curve::ExperienceCurve> {
    match subject {
        Subject::Stack { variant } => scenario.stack_curve(variant).copied(),
        Subject::Component { region, category } => scenario.component_curve(region, category).copied(),
    }
}

/// The absolute states the pathway spans, including capacity-uncertainty
/// scalings of the added capacity.
pub(crate) fn pathway_states(scenario: &Scenario) -> Vec<DeploymentState> {
    let u = scenario.capacity_uncertainty;
    let factors: &[f64] = if u > 0.0 { &[1.0 - u, 1.0, 1.0 + u] } else { &[1.0] };
    scenario
        .pathway
        .iter()
        .flat_map(|p| factors.iter().map(|f| scenario.state_after(&p.added.scaled(*f))))
        .collect()
}

pub fn sweep_envelope(
    scenario: &Scenario,
    subject: Subject,
    structure: Structure,
    axis_gw: &[f64],
    band: LearningRateBand,
) -> Result<TrajectoryEnvelope> {
    band.validate().map_err(|e| e.at("learning_rate_band"))?;
    let (current, _) = family_bases(scenario, subject, structure, &scenario.current_state())?;
    if axis_gw.is_empty() {
        return Err(Error::validation("axis_gw", "[]", "must contain at least one point"));
    }
    if let Some(x) = axis_gw.iter().find(|x| !x.is_finite()) {
        return Err(Error::validation("axis_gw", x, "must contain finite values"));
    }
    if axis_gw.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation("axis_gw", format!("{axis_gw:?}"), "must be strictly increasing"));
    }
    if axis_gw[0] < current {
        return Err(Error::validation(
            "axis_gw",
            axis_gw[0],
            format!("starts below the current family base of {current} GW"),
        ));
    }
    let curve = subject_curve(scenario, subject)?;
    let series = |lr: f64| -> Result<Vec<f64>> {
        let c = curve.with_learning_rate(lr)?;
        axis_gw.iter().map(|x| project_cost(&c, current, *x)).collect()
    };

    let mut deployment_range: Option<DeploymentRange> = None;
    for state in pathway_states(scenario) {
        let (_, projected) = family_bases(scenario, subject, structure, &state)?;
        for (_, lr) in band.cases() {
            let cost = project_cost(&curve.with_learning_rate(lr)?, current, projected)?;
            let r = deployment_range.get_or_insert(DeploymentRange {
                family_min_gw: projected,
                family_max_gw: projected,
                cost_min_usd_per_kw: cost,
                cost_max_usd_per_kw: cost,
            });
            r.family_min_gw = r.family_min_gw.min(projected);
            r.family_max_gw = r.family_max_gw.max(projected);
            r.cost_min_usd_per_kw = r.cost_min_usd_per_kw.min(cost);
            r.cost_max_usd_per_kw = r.cost_max_usd_per_kw.max(cost);
        }
    }

    Ok(TrajectoryEnvelope {
        subject,
        structure,
        band,
        family_current_gw: current,
        axis_gw: axis_gw.to_vec(),
        cost_lr_low_usd_per_kw: series(band.low)?,
        cost_lr_base_usd_per_kw: series(band.base)?,
        cost_lr_high_usd_per_kw: series(band.high)?,
        deployment_range,
    })
}

/// `points` evenly spaced family capacities from the current family base to
/// twice the largest family capacity the pathway reaches.
pub fn default_axis(scenario: &Scenario, subject: Subject, structure: Structure, points: usize) -> Result<Vec<f64>> {
    let (current, _) = family_bases(scenario, subject, structure, &scenario.current_state())?;
    let mut top = current;
    for state in pathway_states(scenario) {
        top = top.max(family_bases(scenario, subject, structure, &state)?.1);
    }
    let end = if top > current { 2.0 * top } else { 2.0 * current };
    let n = points.max(2);
    Ok((0..n)
        .map(|i| current + (end - current) * i as f64 / (n - 1) as f64)
        .collect())
}
