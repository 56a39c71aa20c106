use approx::assert_relative_eq;
use learncurve_core::io::{builtin_presets, BOP_EPC_2030, STACKS_BENCHMARK};
use learncurve_core::projection::{project_component_under, project_stack_under};
use learncurve_core::{
    family_cumulative, project_component_cost, project_cost, project_stack_cost, stack_family, ComponentStructure,
    CostCategory, DeploymentState, ExperienceCurve, Region, Scenario, StackStructure, StackVariant,
};

fn stacks() -> Scenario {
    builtin_presets().get(STACKS_BENCHMARK).unwrap().clone()
}

fn components() -> Scenario {
    builtin_presets().get(BOP_EPC_2030).unwrap().clone()
}

fn bop_epc(scenario: &Scenario, region: Region, structure: ComponentStructure, at: &DeploymentState) -> f64 {
    CostCategory::ALL
        .iter()
        .map(|k| {
            project_component_under(scenario, region, *k, structure, at, None)
                .unwrap()
                .cost_usd_per_kw
        })
        .sum()
}

#[test]
fn one_doubling() {
    let c = ExperienceCurve::new(600.0, 24.0, 0.2).unwrap();
    assert_relative_eq!(project_cost(&c, 24.0, 48.0).unwrap(), 480.0, max_relative = 1e-12);
}

#[test]
fn halving_point_of_fragmented_pem() {
    let c = ExperienceCurve::new(600.0, 1.0, 0.2).unwrap();
    let cost = project_cost(&c, 1.0, 8.614).unwrap();
    assert!((cost - 300.0).abs() < 0.1, "{cost}");
}

#[test]
fn shared_western_pem_after_100_gw() {
    let s = stacks();
    let at = s.state_after(&DeploymentState::evenly_split(100.0));
    let p = project_stack_under(&s, StackVariant::WesternPem, StackStructure::Shared, &at, None).unwrap();
    assert_relative_eq!(p.family_current_gw, 24.0, max_relative = 1e-12);
    assert_relative_eq!(p.family_projected_gw, 124.0, max_relative = 1e-12);
    assert!((p.cost_usd_per_kw - 353.6).abs() < 0.5, "{}", p.cost_usd_per_kw);
    assert_eq!(project_stack_cost(&s, StackVariant::WesternPem, &at).unwrap(), p.cost_usd_per_kw);
}

#[test]
fn technology_fragmented_western_pem() {
    let s = stacks();
    let at = s.state_after(&DeploymentState::evenly_split(100.0));
    let p = project_stack_under(&s, StackVariant::WesternPem, StackStructure::TechnologyFragmented, &at, None).unwrap();
    assert_relative_eq!(p.family_current_gw, 1.0, max_relative = 1e-12);
    assert_relative_eq!(p.family_projected_gw, 51.0, max_relative = 1e-12);
    assert!((p.cost_usd_per_kw - 169.3).abs() < 0.5, "{}", p.cost_usd_per_kw);
}

#[test]
fn identity_at_current_state() {
    for s in [stacks(), components()] {
        let now = s.current_state();
        for structure in StackStructure::ALL {
            for v in StackVariant::ALL {
                let p = project_stack_under(&s, *v, *structure, &now, None).unwrap();
                assert_eq!(p.cost_usd_per_kw, s.stack_curve(*v).unwrap().initial_cost());
            }
        }
        for structure in ComponentStructure::ALL {
            for r in Region::ALL {
                for k in CostCategory::ALL {
                    let p = project_component_under(&s, *r, *k, *structure, &now, None).unwrap();
                    assert_eq!(p.cost_usd_per_kw, s.component_curve(*r, *k).unwrap().initial_cost());
                }
            }
        }
    }
}

#[test]
fn us_bop_epc_local_and_global() {
    let s = components();
    let at = s.state_after(&s.pathway[0].added);
    let local = bop_epc(&s, Region::Us, ComponentStructure::Local, &at);
    let global = bop_epc(&s, Region::Us, ComponentStructure::Global, &at);
    assert!((local - 1288.0).abs() < 2.0, "{local}");
    assert!((global - 1104.0).abs() < 2.0, "{global}");
}

#[test]
fn scenario_structure_drives_component_cost() {
    let mut s = components();
    let at = s.state_after(&s.pathway[0].added);
    s.component_structure = ComponentStructure::Hybrid;
    let bop = project_component_cost(&s, Region::Eu, CostCategory::Bop, &at).unwrap();
    let epc = project_component_cost(&s, Region::Eu, CostCategory::Epc, &at).unwrap();
    let global_bop =
        project_component_under(&s, Region::Eu, CostCategory::Bop, ComponentStructure::Global, &at, None).unwrap();
    let local_epc =
        project_component_under(&s, Region::Eu, CostCategory::Epc, ComponentStructure::Local, &at, None).unwrap();
    assert_eq!(bop, global_bop.cost_usd_per_kw);
    assert_eq!(epc, local_epc.cost_usd_per_kw);
}

#[test]
fn china_gap_scales_with_initial_cost() {
    let s = components();
    // equal additions give equal local growth ratios, so the gap is linear in
    // the initial cost
    let mut added = s.pathway[0].added.clone();
    added.per_region_gw.insert(Region::China, added.per_region_gw[&Region::Us]);
    let at = s.state_after(&added);
    let gap = |r: Region| bop_epc(&s, r, ComponentStructure::Local, &at) - bop_epc(&s, r, ComponentStructure::Global, &at);
    let initial = |r: Region| -> f64 {
        CostCategory::ALL
            .iter()
            .map(|k| s.component_curve(r, *k).unwrap().initial_cost())
            .sum()
    };
    assert_relative_eq!(
        gap(Region::China) / gap(Region::Us),
        initial(Region::China) / initial(Region::Us),
        max_relative = 1e-9
    );
    assert!(gap(Region::China) < gap(Region::Us) / 3.0);
}

#[test]
fn fragmented_pem_is_not_costlier_than_shared() {
    let s = stacks();
    for total in [4.0, 60.0, 100.0, 140.0, 1000.0] {
        let at = s.state_after(&DeploymentState::evenly_split(total));
        for v in [StackVariant::WesternPem, StackVariant::ChinesePem] {
            let shared = project_stack_under(&s, v, StackStructure::Shared, &at, None).unwrap();
            let tech = project_stack_under(&s, v, StackStructure::TechnologyFragmented, &at, None).unwrap();
            assert!(tech.cost_usd_per_kw <= shared.cost_usd_per_kw, "{total} {v}");
        }
    }
}

#[test]
fn symmetric_bases_collapse_structures() {
    let mut s = stacks();
    for v in StackVariant::ALL {
        s.stack_curves.insert(*v, ExperienceCurve::new(500.0, 2.5, 0.2).unwrap());
    }
    for total in [1.0, 37.0, 400.0] {
        let at = s.state_after(&DeploymentState::evenly_split(total));
        for v in StackVariant::ALL {
            let costs: Vec<f64> = StackStructure::ALL
                .iter()
                .map(|st| project_stack_under(&s, *v, *st, &at, None).unwrap().cost_usd_per_kw)
                .collect();
            assert_relative_eq!(costs[0], costs[1], max_relative = 1e-9);
            assert_relative_eq!(costs[0], costs[2], max_relative = 1e-9);
        }
    }
}

#[test]
fn family_sums() {
    let s = stacks();
    let now = s.current_state();
    let shared = family_cumulative(&now, &stack_family(StackStructure::Shared, StackVariant::WesternPem)).unwrap();
    let pem =
        family_cumulative(&now, &stack_family(StackStructure::TechnologyFragmented, StackVariant::ChinesePem)).unwrap();
    assert_relative_eq!(shared, 24.0, max_relative = 1e-12);
    assert_relative_eq!(pem, 1.0, max_relative = 1e-12);
    let empty: std::collections::BTreeSet<StackVariant> = Default::default();
    assert_eq!(family_cumulative(&now, &empty).unwrap(), 0.0);
}

#[test]
fn shrinking_deployment_is_rejected() {
    let s = stacks();
    let mut at = s.current_state();
    at.per_variant_gw.insert(StackVariant::WesternPem, 0.1);
    let err = project_stack_under(&s, StackVariant::WesternPem, StackStructure::RegionallyFragmented, &at, None)
        .unwrap_err();
    assert!(err.is_validation(), "{err}");
}
