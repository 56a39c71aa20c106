//! Learning families: which variants or regions pool their cumulative
//! deployment into a common experience base.

use std::collections::BTreeSet;

use crate::types::{ComponentStructure, CostCategory, Region, StackStructure, StackVariant};

/// The set of stack variants whose deployment counts toward `variant`'s
/// experience base under `structure`.
pub fn stack_family(structure: StackStructure, variant: StackVariant) -> BTreeSet<StackVariant> {
    match structure {
        StackStructure::Shared => StackVariant::ALL.iter().copied().collect(),
        StackStructure::TechnologyFragmented => StackVariant::ALL
            .iter()
            .copied()
            .filter(|v| v.technology() == variant.technology())
            .collect(),
        StackStructure::RegionallyFragmented => BTreeSet::from([variant]),
    }
}

/// The set of regions whose deployment counts toward `region`'s experience
/// base for `category` under `structure`.
pub fn region_family(
    structure: ComponentStructure,
    category: CostCategory,
    region: Region,
) -> BTreeSet<Region> {
    let global = match structure {
        ComponentStructure::Global => true,
        ComponentStructure::Local => false,
        ComponentStructure::Hybrid => category == CostCategory::Bop,
    };
    if global {
        Region::ALL.iter().copied().collect()
    } else {
        BTreeSet::from([region])
    }
}
