use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use hecke_dirac::clifford::{CElem, Clifford, SpinModule};
use hecke_dirac::cm::dirac_partition;
use hecke_dirac::dirac::{Dirac, TElem};
use hecke_dirac::group::build_group;
use hecke_dirac::modules::{contravariant_form, standard_module, DiracComplex};
use hecke_dirac::pbw::presets::{cherednik, constant_parameter, hh_pairing, named_parameter};
use hecke_dirac::pbw::{FormFamily, HElem, HKey};
use hecke_dirac::scalar::reduce;
use hecke_dirac::Cyclo;

const CONDUCTORS: [u32; 6] = [1, 3, 4, 5, 8, 12];

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Sparse polynomial in ζ with small rational coefficients.
fn poly() -> impl Strategy<Value = Vec<(i64, BigRational)>> {
    prop::collection::vec((0i64..24, -5i64..=5, 1i64..=4), 0..6)
        .prop_map(|v| v.into_iter().map(|(e, p, q)| (e, rat(p, q))).collect())
}

fn cyclo_in(n: u32) -> impl Strategy<Value = Cyclo> {
    poly().prop_map(move |p| reduce(&p, n))
}

fn conductor() -> impl Strategy<Value = u32> {
    prop::sample::select(CONDUCTORS.to_vec())
}

fn triple() -> impl Strategy<Value = (Cyclo, Cyclo, Cyclo)> {
    (conductor(), conductor(), conductor())
        .prop_flat_map(|(a, b, c)| (cyclo_in(a), cyclo_in(b), cyclo_in(c)))
}

fn small_rational() -> impl Strategy<Value = Cyclo> {
    (-6i64..=6, 1i64..=5).prop_map(|(p, q)| Cyclo::from_frac(p, q))
}

/// (f·g) mod x^n - 1, before any cyclotomic reduction.
fn product(f: &[(i64, BigRational)], g: &[(i64, BigRational)]) -> Vec<(i64, BigRational)> {
    let mut out = Vec::new();
    for (a, p) in f {
        for (b, q) in g {
            out.push((a + b, p * q));
        }
    }
    out
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
            prop_assert_eq!(&(&b / &a) * &a, b.clone());
        }
    }

    #[test]
    fn reduce_is_idempotent_and_multiplicative(n in conductor(), f in poly(), g in poly()) {
        let a = reduce(&f, n);
        let dense: Vec<(i64, BigRational)> = a
            .coeffs()
            .iter()
            .enumerate()
            .map(|(e, q)| (e as i64 * (n / a.conductor()) as i64, q.clone()))
            .collect();
        prop_assert_eq!(reduce(&dense, n), a.clone());
        prop_assert_eq!(&a * &reduce(&g, n), reduce(&product(&f, &g), n));
    }

    #[test]
    fn conjugation_is_a_ring_involution((a, b, _c) in triple()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        let norm = &a * &a.conj();
        prop_assert_eq!(norm.conj(), norm);
    }
}

fn cherednik_clifford(n: usize) -> Clifford {
    let v_to_cl = (0..2 * n)
        .map(|a| if a < n { 2 * a } else { 2 * (a - n) + 1 })
        .collect();
    Clifford::new(&hh_pairing(n), v_to_cl)
}

/// Random element of Cl(V) for rank 2, masks over four generators.
fn celem() -> impl Strategy<Value = CElem> {
    prop::collection::vec((0u32..16, -3i64..=3), 1..5).prop_map(|terms| {
        let mut e = CElem::zero();
        for (m, v) in terms {
            e.add_assign_scaled(&CElem::monomial(m), &Cyclo::from_int(v));
        }
        e
    })
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn clifford_product_is_associative(a in celem(), b in celem(), c in celem()) {
        let cl = cherednik_clifford(2);
        prop_assert_eq!(cl.mul(&cl.mul(&a, &b), &c), cl.mul(&a, &cl.mul(&b, &c)));
    }

    #[test]
    fn spin_action_is_a_homomorphism(a in celem(), b in celem()) {
        let cl = cherednik_clifford(2);
        let s = SpinModule::new(2);
        prop_assert_eq!(s.action(&cl.mul(&a, &b)), &s.action(&a) * &s.action(&b));
    }
}

fn a1_family(t: Cyclo, c: Cyclo) -> FormFamily {
    let g = build_group("A1").unwrap();
    let k = constant_parameter(&g, &c);
    cherednik(g, t, k).unwrap()
}

fn b2_family(t: Cyclo, short: Cyclo, long: Cyclo) -> FormFamily {
    let g = build_group("B2").unwrap();
    let k = named_parameter(&g, &[("short".into(), short), ("long".into(), long)], &Cyclo::zero()).unwrap();
    cherednik(g, t, k).unwrap()
}

/// PBW monomial x^a w y^b of bounded degree in rank 2.
fn monomial(order: usize, max_exp: u32) -> impl Strategy<Value = HKey> {
    (
        prop::collection::vec(0..=max_exp, 2),
        0..order,
        prop::collection::vec(0..=max_exp, 2),
    )
        .prop_map(|(left, w, right)| HKey { left, w, right })
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn pbw_product_is_associative(
        c in small_rational(),
        d in small_rational(),
        a in monomial(8, 1),
        b in monomial(8, 1),
        e in monomial(8, 1),
    ) {
        let f = b2_family(Cyclo::one(), c, d);
        let (a, b, e) = (
            HElem::term(a, Cyclo::one()),
            HElem::term(b, Cyclo::one()),
            HElem::term(e, Cyclo::one()),
        );
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &e), f.mul(&a, &f.mul(&b, &e)));
    }

    #[test]
    fn derivation_rule_on_random_elements(
        t in prop::sample::select(vec![0i64, 1]),
        c in small_rational(),
        ha in monomial(8, 1),
        hb in monomial(8, 1),
        ma in 0u32..16,
        mb in 0u32..16,
    ) {
        let f = b2_family(Cyclo::from_int(t), c.clone(), c);
        let d = Dirac::new(&f).unwrap();
        let a = TElem::tensor(&HElem::term(ha, Cyclo::one()), &CElem::monomial(ma));
        let b = TElem::tensor(&HElem::term(hb, Cyclo::one()), &CElem::monomial(mb));
        let lhs = d.d(&d.mul(&a, &b));
        let rhs = d.mul(&d.d(&a), &b).add(&d.mul(&a.eps(), &d.d(&b)));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn a1_dirac_square_scalar_law(c in small_rational(), sigma in prop::sample::select(vec!["triv", "sgn"])) {
        let g = build_group("A1").unwrap();
        let m = standard_module(g.clone(), sigma, constant_parameter(&g, &c), 5).unwrap();
        let cx = DiracComplex::new(&m).unwrap();
        prop_assert!(cx.sparsity_ok());
        prop_assert!(cx.equivariant());
        prop_assert!(cx.check_scalar_law(4).unwrap().iter().all(|s| s.holds));
    }

    #[test]
    fn b2_dirac_square_scalar_law(
        short in small_rational(),
        long in small_rational(),
        sigma in prop::sample::select(vec!["2x0", "11x0", "1x1", "0x2", "0x11"]),
    ) {
        let g = build_group("B2").unwrap();
        let k = named_parameter(&g, &[("short".into(), short), ("long".into(), long)], &Cyclo::zero()).unwrap();
        let m = standard_module(g, sigma, k, 3).unwrap();
        let cx = DiracComplex::new(&m).unwrap();
        prop_assert!(cx.check_scalar_law(2).unwrap().iter().all(|s| s.holds));
    }

    #[test]
    fn contravariant_form_is_star_invariant(
        short in small_rational(),
        long in small_rational(),
        sigma in prop::sample::select(vec!["2x0", "11x0", "1x1", "0x2", "0x11"]),
    ) {
        let g = build_group("B2").unwrap();
        let k = named_parameter(&g, &[("short".into(), short), ("long".into(), long)], &Cyclo::zero()).unwrap();
        let m = standard_module(g.clone(), sigma, k, 3).unwrap();
        let grams = contravariant_form(&m).unwrap();
        for k in 0..=3u32 {
            let idx = m.indices_of_degree(k);
            let gk = &grams[k as usize];
            for &w in &g.gens {
                let mw = m.w[w].submatrix(&idx, &idx);
                prop_assert_eq!(&(&mw.transpose() * gk) * &mw, gk.clone());
            }
            if k > 0 {
                let low = m.indices_of_degree(k - 1);
                for i in 0..2 {
                    let xi = m.x[i].submatrix(&idx, &low);
                    let yi = m.y[i].submatrix(&low, &idx);
                    prop_assert_eq!(&xi.transpose() * gk, &grams[k as usize - 1] * &yi);
                }
            }
        }
    }
}

fn twisted(g: &hecke_dirac::group::ReflectionGroup, block: &BTreeSet<String>) -> BTreeSet<String> {
    block
        .iter()
        .map(|l| g.irreps[g.twist_by_det(g.irrep_index(l).unwrap(), 1)].label.clone())
        .collect()
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn partition_blocks_are_casimir_constant_and_twist_stable(
        id in prop::sample::select(vec!["A1", "A2"]),
        c in small_rational(),
    ) {
        let g = build_group(id).unwrap();
        let p = dirac_partition(g.clone(), constant_parameter(&g, &c)).unwrap();
        prop_assert!(p.casimir_constant_on_blocks);
        for b in &p.blocks {
            let first = &p.casimir[b.iter().next().unwrap()];
            prop_assert!(b.iter().all(|l| &p.casimir[l] == first));
            prop_assert!(p.blocks.contains(&twisted(&g, b)));
        }
    }

    #[test]
    fn a1_relation_for_random_parameters(t in small_rational(), c in small_rational()) {
        let f = a1_family(t.clone(), c.clone());
        let s = f.group().reflections[0].element;
        let yx = f.mul(&f.gen(1), &f.gen(0));
        let xy = f.mul(&f.gen(0), &f.gen(1));
        // [y, x] = t - c s
        let expect = f.scalar(t).sub(&f.group_elem(s).scale(&c));
        prop_assert_eq!(yx.sub(&xy), expect);
    }
}
