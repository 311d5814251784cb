use std::collections::BTreeSet;
use std::time::Instant;

use hecke_dirac::cm::*;
use hecke_dirac::dirac::casimir_scalar;
use hecke_dirac::group::build_group;
use hecke_dirac::pbw::presets::constant_parameter;
use hecke_dirac::Cyclo;

fn cst(id: &str, c: Cyclo) -> Vec<Cyclo> {
    constant_parameter(&build_group(id).unwrap(), &c)
}

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn partition_matches_families_at_equal_parameters() {
    for id in ["A1", "A2", "B2"] {
        let g = build_group(id).unwrap();
        let p = dirac_partition(g.clone(), cst(id, Cyclo::one())).unwrap();
        assert_eq!(p.families_agree(&g), Some(true), "{}", id);
        let mut expect: Vec<BTreeSet<String>> = lusztig_families(id).unwrap().iter().map(|f| set(f)).collect();
        let mut got = p.blocks.clone();
        expect.sort();
        got.sort();
        assert_eq!(got, expect, "{}", id);
        assert!(p.casimir_constant_on_blocks);
        assert!(p.undecided_pairs.is_empty(), "{}", id);
    }
}

#[test]
fn b2_block_evidence() {
    let g = build_group("B2").unwrap();
    let p = dirac_partition(g, cst("B2", Cyclo::one())).unwrap();
    assert_eq!(p.block_of("1x1").unwrap(), &set(&["0x2", "11x0", "1x1"]));
    // every merge is backed by an occurrence with positive multiplicity
    assert!(p.evidence.iter().all(|e| e.multiplicity > 0));
    assert!(p.evidence.iter().any(|e| e.sigma == "11x0" && e.mu != "11x0"));
}

#[test]
fn baby_verma_source_gives_no_merges() {
    let g = build_group("B2").unwrap();
    let p = dirac_partition_from(g.clone(), cst("B2", Cyclo::one()), PartitionSource::BabyVermas).unwrap();
    assert_eq!(p.blocks.len(), 5);
    for e in &p.evidence {
        assert_eq!(e.mu, e.sigma);
        assert_eq!(e.multiplicity, 4);
    }
}

#[test]
fn generic_parameter_separates_distinct_casimirs() {
    let g = build_group("B2").unwrap();
    let c = hecke_dirac::pbw::presets::named_parameter(
        &g,
        &[("short".into(), Cyclo::from_frac(1, 3)), ("long".into(), Cyclo::from_frac(1, 7))],
        &Cyclo::zero(),
    )
    .unwrap();
    let p = dirac_partition(g.clone(), c.clone()).unwrap();
    assert!(p.casimir_constant_on_blocks);
    assert_eq!(p.families_agree(&g), None);
    for b in &p.blocks {
        for l in b {
            assert_eq!(p.casimir[l], casimir_scalar(&g, &c, l).unwrap());
        }
    }
}

#[test]
fn central_character_is_minus_casimir() {
    let g = build_group("A2").unwrap();
    let c = cst("A2", Cyclo::from_frac(1, 2));
    assert_eq!(omega_central_character(&g, &c, "triv").unwrap(), Cyclo::from_frac(-3, 2));
    assert_eq!(omega_central_character(&g, &c, "sgn").unwrap(), Cyclo::from_frac(3, 2));
    assert!(omega_central_character(&g, &c, "refl").unwrap().is_zero());
}

#[test]
fn fundamental_invariants_have_preimages() {
    for (id, expected) in [("A1", 2), ("A2", 4)] {
        let start = Instant::now();
        let g = build_group(id).unwrap();
        let pre = verify_cm_factorization(g, cst(id, Cyclo::one()), 3).unwrap();
        assert_eq!(pre.len(), expected, "{}", id);
        for p in &pre {
            assert!(p.verified, "{} {:?} degree {}", id, p.side, p.degree);
            assert!(p.delta_part.is_zero());
        }
        eprintln!("{}: {:?}", id, start.elapsed());
    }
}
