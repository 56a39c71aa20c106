//! Full scenario parameterization.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curve::{check_learning_rate, ExperienceCurve};
use crate::deployment::DeploymentState;
use crate::error::{Error, Result};
use crate::types::{ComponentStructure, CostCategory, Region, StackStructure, StackVariant};

/// Low / base / high learning rates used for sensitivity envelopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearningRateBand {
    pub low: f64,
    pub base: f64,
    pub high: f64,
}

impl LearningRateBand {
    pub fn new(low: f64, base: f64, high: f64) -> Result<Self> {
        let band = Self { low, base, high };
        band.validate()?;
        Ok(band)
    }

    pub fn collapsed(lr: f64) -> Result<Self> {
        Self::new(lr, lr, lr)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, lr) in [("low", self.low), ("base", self.base), ("high", self.high)] {
            check_learning_rate(lr).map_err(|e| match e {
                Error::Validation { value, constraint, .. } => Error::Validation {
                    field: name.to_string(),
                    value,
                    constraint,
                },
                other => other,
            })?;
        }
        if !(self.low <= self.base && self.base <= self.high) {
            return Err(Error::validation(
                "",
                format!("({}, {}, {})", self.low, self.base, self.high),
                "must satisfy low <= base <= high",
            ));
        }
        Ok(())
    }

    /// `(case, learning rate)` pairs in low, base, high order.
    pub fn cases(&self) -> [(&'static str, f64); 3] {
        [("low", self.low), ("base", self.base), ("high", self.high)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinanceParams {
    /// Weighted average cost of capital, fraction per year.
    pub wacc: f64,
    pub lifetime_years: u32,
    /// Electricity consumed per kg of hydrogen.
    pub specific_energy_kwh_per_kg: f64,
}

impl FinanceParams {
    pub fn new(wacc: f64, lifetime_years: u32, specific_energy_kwh_per_kg: f64) -> Result<Self> {
        let finance = Self {
            wacc,
            lifetime_years,
            specific_energy_kwh_per_kg,
        };
        finance.validate()?;
        Ok(finance)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.wacc.is_finite() && self.wacc >= 0.0) {
            return Err(Error::validation("wacc", self.wacc, "must be finite and >= 0"));
        }
        if self.lifetime_years < 1 {
            return Err(Error::validation("lifetime_years", self.lifetime_years, "must be >= 1"));
        }
        if !(self.specific_energy_kwh_per_kg.is_finite() && self.specific_energy_kwh_per_kg > 0.0) {
            return Err(Error::validation(
                "specific_energy_kwh_per_kg",
                self.specific_energy_kwh_per_kg,
                "must be finite and > 0",
            ));
        }
        Ok(())
    }
}

/// One labeled point of a deployment pathway. Capacities are additions on
/// top of the scenario's current installed bases.
#[derive(Debug, Clone, PartialEq)]
pub struct PathwayPoint {
    pub label: String,
    pub added: DeploymentState,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata {
    pub name: String,
    pub description: String,
    /// Dotted document path to a note on where the value comes from.
    pub provenance: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub metadata: Metadata,
    /// Per-variant curves; each curve's base is that variant's own installed capacity.
    pub stack_curves: BTreeMap<StackVariant, ExperienceCurve>,
    /// Per-region, per-category curves; both categories of a region share the
    /// region's installed capacity as their base.
    pub component_curves: BTreeMap<(Region, CostCategory), ExperienceCurve>,
    pub stack_structure: StackStructure,
    pub component_structure: ComponentStructure,
    pub stack_lr_band: LearningRateBand,
    pub component_lr_band: LearningRateBand,
    pub finance: FinanceParams,
    /// Relative variation applied to added capacity for uncertainty bounds.
    pub capacity_uncertainty: f64,
    pub pathway: Vec<PathwayPoint>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        for v in StackVariant::ALL {
            if !self.stack_curves.contains_key(v) {
                return Err(Error::validation(format!("stacks.curves.{v}"), "missing", "is required"));
            }
        }
        for r in Region::ALL {
            let mut bases = Vec::new();
            for k in CostCategory::ALL {
                match self.component_curves.get(&(*r, *k)) {
                    Some(curve) => bases.push(curve.initial_base()),
                    None => {
                        return Err(Error::validation(
                            format!("components.curves.{r}.{k}"),
                            "missing",
                            "is required",
                        ))
                    }
                }
            }
            if bases.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::validation(
                    format!("components.curves.{r}.installed_base_gw"),
                    format!("{bases:?}"),
                    "must be identical for every cost category of a region",
                ));
            }
        }
        self.stack_lr_band
            .validate()
            .map_err(|e| e.at("stacks.learning_rate_band"))?;
        self.component_lr_band
            .validate()
            .map_err(|e| e.at("components.learning_rate_band"))?;
        self.finance.validate().map_err(|e| e.at("finance"))?;
        if !(self.capacity_uncertainty.is_finite() && (0.0..1.0).contains(&self.capacity_uncertainty)) {
            return Err(Error::validation(
                "deployment.capacity_uncertainty",
                self.capacity_uncertainty,
                "must lie in [0, 1)",
            ));
        }
        if self.pathway.is_empty() {
            return Err(Error::validation("deployment.pathway", "[]", "must contain at least one point"));
        }
        for (i, point) in self.pathway.iter().enumerate() {
            if self.pathway[..i].iter().any(|p| p.label == point.label) {
                return Err(Error::validation(
                    format!("deployment.pathway[{i}].label"),
                    &point.label,
                    "duplicates an earlier pathway label",
                ));
            }
        }
        let mut previous: Option<&PathwayPoint> = None;
        for (i, point) in self.pathway.iter().enumerate() {
            let path = format!("deployment.pathway[{i}]");
            point.added.validate().map_err(|e| e.at(&format!("{path}.added")))?;
            for v in StackVariant::ALL {
                point.added.get(*v).map_err(|e| e.at(&format!("{path}.added.per_variant_gw")))?;
            }
            for r in Region::ALL {
                point.added.get(*r).map_err(|e| e.at(&format!("{path}.added.per_region_gw")))?;
            }
            if let Some(prev) = previous {
                let shrinks_variant = StackVariant::ALL
                    .iter()
                    .find(|v| point.added.per_variant_gw[v] < prev.added.per_variant_gw[v]);
                if let Some(v) = shrinks_variant {
                    return Err(Error::validation(
                        format!("{path}.added.per_variant_gw.{v}"),
                        point.added.per_variant_gw[v],
                        "is below the previous pathway point (cumulative capacity never shrinks)",
                    ));
                }
                let shrinks_region = Region::ALL
                    .iter()
                    .find(|r| point.added.per_region_gw[r] < prev.added.per_region_gw[r]);
                if let Some(r) = shrinks_region {
                    return Err(Error::validation(
                        format!("{path}.added.per_region_gw.{r}"),
                        point.added.per_region_gw[r],
                        "is below the previous pathway point (cumulative capacity never shrinks)",
                    ));
                }
            }
            previous = Some(point);
        }
        Ok(())
    }

    pub fn stack_curve(&self, variant: StackVariant) -> Result<&ExperienceCurve> {
        self.stack_curves
            .get(&variant)
            .ok_or_else(|| Error::validation(format!("stacks.curves.{variant}"), "missing", "is required"))
    }

    pub fn component_curve(&self, region: Region, category: CostCategory) -> Result<&ExperienceCurve> {
        self.component_curves.get(&(region, category)).ok_or_else(|| {
            Error::validation(format!("components.curves.{region}.{category}"), "missing", "is required")
        })
    }

    /// Installed capacity per variant and region, read from the curves' bases.
    pub fn current_state(&self) -> DeploymentState {
        let per_variant_gw = self
            .stack_curves
            .iter()
            .map(|(v, c)| (*v, c.initial_base()))
            .collect();
        let per_region_gw = self
            .component_curves
            .iter()
            .map(|((r, _), c)| (*r, c.initial_base()))
            .collect();
        DeploymentState {
            per_variant_gw,
            per_region_gw,
        }
    }

    /// Absolute cumulative state after `added` capacity on top of current bases.
    pub fn state_after(&self, added: &DeploymentState) -> DeploymentState {
        self.current_state().plus(added)
    }

    pub fn pathway_point(&self, label: &str) -> Result<&PathwayPoint> {
        self.pathway.iter().find(|p| p.label == label).ok_or_else(|| {
            Error::validation(
                "deployment.pathway",
                label,
                format!(
                    "is not a pathway label (available: {})",
                    self.pathway.iter().map(|p| p.label.as_str()).collect::<Vec<_>>().join(", ")
                ),
            )
        })
    }

    /// Replaces one variant's installed base, keeping its cost and learning rate.
    pub fn with_stack_base(mut self, variant: StackVariant, base_gw: f64) -> Result<Self> {
        let curve = self.stack_curve(variant)?.with_base(base_gw)?;
        self.stack_curves.insert(variant, curve);
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_ordering() {
        assert!(LearningRateBand::new(0.15, 0.20, 0.25).is_ok());
        assert!(LearningRateBand::new(0.25, 0.20, 0.15).is_err());
        let err = LearningRateBand::new(0.1, 0.2, 1.0).unwrap_err();
        assert!(err.to_string().starts_with("high = 1"), "{err}");
    }

    #[test]
    fn finance_validation() {
        assert!(FinanceParams::new(0.076, 10, 57.0).is_ok());
        assert!(FinanceParams::new(-0.01, 10, 57.0).is_err());
        assert!(FinanceParams::new(0.076, 0, 57.0).is_err());
        assert!(FinanceParams::new(0.076, 10, 0.0).is_err());
    }
}
