use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Region, StackVariant};

/// Cumulative deployed capacity (GW) per stack variant and per region.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DeploymentState {
    #[serde(default)]
    pub per_variant_gw: BTreeMap<StackVariant, f64>,
    #[serde(default)]
    pub per_region_gw: BTreeMap<Region, f64>,
}

/// Keys that index a [`DeploymentState`].
pub trait DeploymentKey: Ord + Copy + Display {
    fn capacities(state: &DeploymentState) -> &BTreeMap<Self, f64>;
}

impl DeploymentKey for StackVariant {
    fn capacities(state: &DeploymentState) -> &BTreeMap<Self, f64> {
        &state.per_variant_gw
    }
}

impl DeploymentKey for Region {
    fn capacities(state: &DeploymentState) -> &BTreeMap<Self, f64> {
        &state.per_region_gw
    }
}

impl DeploymentState {
    /// Every variant and every region set to the same capacity.
    pub fn uniform(variant_gw: f64, region_gw: f64) -> Self {
        Self {
            per_variant_gw: StackVariant::ALL.iter().map(|v| (*v, variant_gw)).collect(),
            per_region_gw: Region::ALL.iter().map(|r| (*r, region_gw)).collect(),
        }
    }

    /// `total_gw` split evenly across the four variants and, separately,
    /// across the four regions.
    pub fn evenly_split(total_gw: f64) -> Self {
        Self::uniform(total_gw / 4.0, total_gw / 4.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (v, gw) in &self.per_variant_gw {
            check_capacity(gw).map_err(|e| e.at(&format!("per_variant_gw.{v}")))?;
        }
        for (r, gw) in &self.per_region_gw {
            check_capacity(gw).map_err(|e| e.at(&format!("per_region_gw.{r}")))?;
        }
        let totals = [self.total_variant_gw(), self.total_region_gw()];
        if totals.iter().any(|t| !t.is_finite()) {
            return Err(Error::validation("", format!("{totals:?}"), "totals must be finite"));
        }
        Ok(())
    }

    pub fn get<K: DeploymentKey>(&self, key: K) -> Result<f64> {
        K::capacities(self)
            .get(&key)
            .copied()
            .ok_or_else(|| Error::validation(key.to_string(), "missing", "is required in the deployment state"))
    }

    pub fn total_variant_gw(&self) -> f64 {
        self.per_variant_gw.values().sum()
    }

    pub fn total_region_gw(&self) -> f64 {
        self.per_region_gw.values().sum()
    }

    /// Key-wise sum. Keys present in either operand appear in the result.
    pub fn plus(&self, other: &DeploymentState) -> DeploymentState {
        fn merge<K: Ord + Copy>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> BTreeMap<K, f64> {
            let mut out = a.clone();
            for (k, v) in b {
                *out.entry(*k).or_insert(0.0) += v;
            }
            out
        }
        DeploymentState {
            per_variant_gw: merge(&self.per_variant_gw, &other.per_variant_gw),
            per_region_gw: merge(&self.per_region_gw, &other.per_region_gw),
        }
    }

    pub fn scaled(&self, factor: f64) -> DeploymentState {
        DeploymentState {
            per_variant_gw: self.per_variant_gw.iter().map(|(k, v)| (*k, v * factor)).collect(),
            per_region_gw: self.per_region_gw.iter().map(|(k, v)| (*k, v * factor)).collect(),
        }
    }
}

fn check_capacity(gw: &f64) -> Result<()> {
    if !gw.is_finite() || *gw < 0.0 {
        return Err(Error::validation("", gw, "must be finite and >= 0 GW"));
    }
    Ok(())
}

/// Sum of cumulative capacity over the members of a learning family.
pub fn family_cumulative<K: DeploymentKey>(state: &DeploymentState, family: &BTreeSet<K>) -> Result<f64> {
    family.iter().map(|member| state.get(*member)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::stack_family;
    use crate::types::StackStructure;

    #[test]
    fn shared_family_sums_everything() {
        let state = DeploymentState::uniform(25.0, 0.0);
        let family = stack_family(StackStructure::Shared, StackVariant::WesternPem);
        assert_eq!(family_cumulative(&state, &family).unwrap(), 100.0);
    }

    #[test]
    fn pem_family_installed_base() {
        let mut state = DeploymentState::uniform(7.0, 0.0);
        state.per_variant_gw.insert(StackVariant::WesternPem, 0.5);
        state.per_variant_gw.insert(StackVariant::ChinesePem, 0.5);
        let family = stack_family(StackStructure::TechnologyFragmented, StackVariant::ChinesePem);
        assert_eq!(family_cumulative(&state, &family).unwrap(), 1.0);
    }

    #[test]
    fn empty_family_is_zero() {
        let state = DeploymentState::default();
        assert_eq!(family_cumulative::<Region>(&state, &BTreeSet::new()).unwrap(), 0.0);
    }

    #[test]
    fn missing_member_is_named() {
        let mut state = DeploymentState::uniform(1.0, 1.0);
        state.per_region_gw.remove(&Region::Row);
        let family: BTreeSet<Region> = Region::ALL.iter().copied().collect();
        let err = family_cumulative(&state, &family).unwrap_err();
        assert!(err.to_string().starts_with("row ="), "{err}");
    }

    #[test]
    fn negative_capacity_rejected() {
        let mut state = DeploymentState::uniform(1.0, 1.0);
        state.per_variant_gw.insert(StackVariant::ChineseAlk, -0.1);
        let err = state.validate().unwrap_err();
        assert!(err.to_string().contains("per_variant_gw.chinese_alk"), "{err}");
    }

    #[test]
    fn plus_and_scaled() {
        let a = DeploymentState::uniform(1.0, 2.0);
        let b = DeploymentState::evenly_split(100.0);
        let c = a.plus(&b).scaled(0.5);
        assert_eq!(c.get(StackVariant::WesternAlk).unwrap(), 13.0);
        assert_eq!(c.get(Region::China).unwrap(), 13.5);
    }
}
