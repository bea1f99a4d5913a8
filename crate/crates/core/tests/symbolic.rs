use std::collections::{BTreeMap, BTreeSet};

use icregion::dist::{AlphabetSpec, Form};
use icregion::polytope::{bind, Binding};
use icregion::regions::{binding_for, build_system, hk_r_extended, label_of, RegionId};
use icregion::sampler::sample_nth;
use icregion::scalar::Rational;
use icregion::symfm::{
    axiom_set, derive_region, fm_eliminate, prune_redundant, substitute_rate_sums, system_equal, system_from_json,
    system_to_json, AxiomSetId, Combo, RateVar, SystemId,
};
use icregion::terms::TermSymbol;
use num_traits::Zero;

fn binary() -> AlphabetSpec {
    AlphabetSpec::uniform(2).unwrap()
}

fn quadruple_cases() -> Vec<(SystemId, Form)> {
    vec![
        (SystemId::Hk, Form::Hk2),
        (SystemId::HkModified, Form::Hk2),
        (SystemId::Cmg, Form::Cmg9),
        (SystemId::Hod, Form::Hod16),
    ]
}

#[test]
fn golden_row_counts_after_derivation() {
    let want = [
        (SystemId::Hk, AxiomSetId::HkIndep, 9),
        (SystemId::HkModified, AxiomSetId::HkIndep, 13),
        (SystemId::Cmg, AxiomSetId::Chain, 9),
        (SystemId::Hod, AxiomSetId::Chain, 13),
    ];
    for (s, a, n) in want {
        let d = derive_region(s, a);
        assert_eq!(d.result().len(), n, "{s}");
        let (eq, diff) = system_equal(d.result(), &build_system(s.target())).unwrap();
        assert!(eq, "{s}: {diff:?}");
    }
}

#[test]
fn elimination_order_does_not_matter() {
    for (sys, form) in quadruple_cases() {
        let sub = substitute_rate_sums(&sys.start()).unwrap();
        for i in 0..20 {
            let b = binding_for(&sample_nth(binary(), form, 3, i)).unwrap();
            let p = bind(&sub, &b).unwrap();
            let x = p.eliminate_all(&[RateVar::T1, RateVar::T2]);
            let y = p.eliminate_all(&[RateVar::T2, RateVar::T1]);
            assert!(x.equal(&y, &Rational::zero()).unwrap(), "{sys} #{i}");
        }
    }
}

#[test]
fn numeric_projection_equals_bound_golden() {
    for (sys, form) in quadruple_cases() {
        let sub = substitute_rate_sums(&sys.start()).unwrap();
        let golden = build_system(sys.target());
        for i in 0..20 {
            let b = binding_for(&sample_nth(binary(), form, 5, i)).unwrap();
            let projected = bind(&sub, &b).unwrap().eliminate_all(&[RateVar::T1, RateVar::T2]);
            let bound = bind(&golden, &b).unwrap();
            assert!(projected.equal(&bound, &Rational::zero()).unwrap(), "{sys} #{i}");
        }
    }
}

#[test]
fn symbolic_elimination_is_sound_pointwise() {
    let sub = substitute_rate_sums(&SystemId::Hod.start()).unwrap();
    let proj = fm_eliminate(&fm_eliminate(&sub, RateVar::T1), RateVar::T2);
    for i in 0..10 {
        let b = binding_for(&sample_nth(binary(), Form::Hod16, 8, i)).unwrap();
        let quad = bind(&sub, &b).unwrap();
        let pair = bind(&proj, &b).unwrap();
        for c in [[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [2, 1, 0, 0], [1, 2, 1, 1]] {
            let c: Vec<Rational> = c.iter().map(|k| Rational::from_integer((*k).into())).collect();
            let (_, x) = quad.maximize(&c).unwrap().unwrap();
            let dims: Vec<RateVar> = quad.dims().iter().collect();
            let r1 = &x[dims.iter().position(|d| *d == RateVar::R1).unwrap()];
            let r2 = &x[dims.iter().position(|d| *d == RateVar::R2).unwrap()];
            assert!(pair.contains_point(&[r1.clone(), r2.clone()]));
        }
    }
}

#[test]
fn pruning_keeps_the_bound_region() {
    let d = derive_region(SystemId::Hod, AxiomSetId::Chain);
    for i in 0..10 {
        let b = binding_for(&sample_nth(binary(), Form::Hod16, 13, i)).unwrap();
        let raw = bind(&d.eliminated, &b).unwrap();
        let pruned = bind(d.result(), &b).unwrap();
        assert!(raw.equal(&pruned, &Rational::zero()).unwrap());
    }
}

#[test]
fn pruning_is_idempotent_and_a_subset() {
    let d = derive_region(SystemId::Hk, AxiomSetId::HkIndep);
    let axioms = axiom_set(AxiomSetId::HkIndep);
    let again = prune_redundant(d.result(), &axioms);
    assert_eq!(again.rows(), d.result().rows());
    for r in d.result().rows() {
        assert!(d.eliminated.contains_row(r));
    }
}

#[test]
fn hk_first_stage_is_the_extended_description() {
    let d = derive_region(SystemId::Hk, AxiomSetId::HkIndep);
    let (eq, diff) = system_equal(&d.stages[0].result, &hk_r_extended()).unwrap();
    assert!(eq, "{diff:?}");
    assert_eq!(d.stages[0].result.len(), 11);
}

#[test]
fn hod_weighted_rows_survive_the_chain_axioms() {
    let d = derive_region(SystemId::Hod, AxiomSetId::Chain);
    let labels: BTreeSet<String> = d.result().rows().iter().filter_map(|r| label_of(RegionId::HodR, r)).collect();
    assert!(labels.contains("hod/11"));
    assert!(labels.contains("hod/13"));
}

#[test]
fn cmg_and_hk_differ_in_two_rows() {
    let (eq, diff) = system_equal(&build_system(RegionId::CmgR), &build_system(RegionId::HkR)).unwrap();
    assert!(!eq);
    let left: BTreeSet<_> = diff.only_left.iter().filter_map(|r| label_of(RegionId::CmgR, r)).collect();
    let right: BTreeSet<_> = diff.only_right.iter().filter_map(|r| label_of(RegionId::HkR, r)).collect();
    assert_eq!(left, BTreeSet::from(["cmg/2".to_string(), "cmg/4".to_string()]));
    assert_eq!(right, BTreeSet::from(["hk/2".to_string(), "hk/4".to_string()]));
}

#[test]
fn correlated_region_collapses_without_dependence() {
    use TermSymbol::*;
    let mut map = BTreeMap::new();
    for (big, small) in [(BigB1, B1), (BigC1, C1), (BigF1, F1), (BigB2, B2), (BigC2, C2), (BigF2, F2)] {
        map.insert(big, Combo::term(small));
    }
    map.insert(Rho1, Combo::new());
    map.insert(Rho2, Combo::new());
    let hod = build_system(RegionId::HodR).substitute_symbols(&map);
    let pruned = prune_redundant(&hod, &axiom_set(AxiomSetId::HkIndep));
    let (eq, diff) = system_equal(&pruned, &build_system(RegionId::HkR)).unwrap();
    assert!(eq, "{diff:?}");
}

#[test]
fn system_json_round_trip() {
    for id in RegionId::ALL {
        let s = build_system(id);
        let back = system_from_json(&system_to_json(&s)).unwrap();
        assert_eq!(back.rows(), s.rows(), "{id}");
    }
}

#[test]
fn degenerate_binding_gives_origin() {
    let b = Binding::zeros();
    for id in [RegionId::HkR, RegionId::HodR, RegionId::CmgR, RegionId::CompactR] {
        let v = bind(&build_system(id), &b).unwrap().vertices2().unwrap();
        assert_eq!(v.len(), 1, "{id}");
    }
}
