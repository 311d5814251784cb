use hecke_dirac::group::{build_group, diagonal_action, WRep, CATALOGUE};
use hecke_dirac::linalg::Mat;
use hecke_dirac::poly::Poly;
use hecke_dirac::{Cyclo, Error};

fn q(p: i64, r: i64) -> Cyclo {
    Cyclo::from_frac(p, r)
}

#[test]
fn catalogue_orders() {
    let expect = [
        ("A1", 2),
        ("A2", 6),
        ("B2", 8),
        ("B3", 48),
        ("I2(4)", 8),
        ("I2(5)", 10),
        ("I2(6)", 12),
        ("Z3", 3),
        ("Z6", 6),
        ("G(3,1,2)", 18),
        ("G(4,1,2)", 32),
    ];
    for (id, order) in expect {
        let g = build_group(id).unwrap();
        assert_eq!(g.order(), order, "{}", id);
    }
}

#[test]
fn unknown_group() {
    assert!(matches!(build_group("E8"), Err(Error::UnknownGroup(_))));
    assert!(matches!(build_group("Z9"), Err(Error::UnknownGroup(_))));
}

#[test]
fn every_catalogue_entry_is_consistent() {
    for id in CATALOGUE {
        let g = build_group(id).unwrap();
        let dims: usize = g.irreps.iter().map(|ir| ir.dim * ir.dim).sum();
        assert_eq!(dims, g.order(), "{}", id);
        let prod: u32 = g.invariant_degrees.iter().product();
        assert_eq!(prod as usize, g.order(), "{} degrees {:?}", id, g.invariant_degrees);
        for ir in &g.irreps {
            ir.rep.validate(&g).unwrap();
        }
        for f in &g.invariant_generators {
            assert!(g.is_invariant_x(f), "{}: {}", id, f);
        }
        for f in &g.invariant_generators_y {
            assert!(g.is_invariant_y(f), "{}: {}", id, f);
        }
        // column orthogonality
        for a in 0..g.classes.len() {
            for b in 0..g.classes.len() {
                let s: Cyclo = (0..g.irreps.len())
                    .map(|i| &g.characters[i][a] * &g.characters[i][b].conj())
                    .sum();
                let expect = if a == b {
                    Cyclo::from_int((g.order() / g.classes[a].len()) as i64)
                } else {
                    Cyclo::zero()
                };
                assert_eq!(s, expect, "{} classes {} {}", id, a, b);
            }
        }
    }
}

#[test]
fn reflection_data_invariants() {
    for id in CATALOGUE {
        let g = build_group(id).unwrap();
        let mut generated = std::collections::BTreeSet::from([0usize]);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for r in &g.reflections {
                let y = g.mul(x, r.element);
                if generated.insert(y) {
                    frontier.push(y);
                }
            }
        }
        assert_eq!(generated.len(), g.order(), "{}: reflections generate", id);
        for r in &g.reflections {
            let s = &g.elements[r.element];
            let sv = s.mul_vec(&r.alpha_check);
            let expect: Vec<Cyclo> = r.alpha_check.iter().map(|a| a * &r.lambda).collect();
            assert_eq!(sv, expect, "{}: s(α^∨) = λ α^∨", id);
            let sa = g.dual[r.element].mul_vec(&r.alpha);
            let expect: Vec<Cyclo> = r.alpha.iter().map(|a| a / &r.lambda).collect();
            assert_eq!(sa, expect, "{}: s(α) = λ⁻¹ α", id);
            assert_ne!(r.lambda, Cyclo::one());
            let moved = &g.v_matrix(r.element) - &Mat::identity(2 * g.n);
            assert_eq!(moved.rank(), 2);
            assert_eq!(&r.sqrt_lambda * &r.sqrt_lambda, r.lambda);
            // s has eigenvalue λ⁻¹ on 𝔥* exactly once, so det_𝔥(s) = λ
            assert_eq!(s.det(), r.lambda);
        }
    }
}

#[test]
fn a1_data() {
    let g = build_group("A1").unwrap();
    assert_eq!(g.order(), 2);
    assert_eq!(g.reflections.len(), 1);
    assert_eq!(g.reflections[0].lambda, Cyclo::from_int(-1));
    assert_eq!(g.labels(), vec!["triv", "sgn"]);
    assert_eq!(g.invariant_degrees, vec![2]);
}

#[test]
fn b2_data() {
    let g = build_group("B2").unwrap();
    assert_eq!(g.reflections.len(), 4);
    let dims: Vec<usize> = g.irreps.iter().map(|ir| ir.dim).collect();
    assert_eq!(dims, vec![1, 1, 2, 1, 1]);
    assert_eq!(g.classes.len(), 5);
    let long = g.reflection_class_by_name("long").unwrap();
    let short = g.reflection_class_by_name("short").unwrap();
    assert_eq!(g.classes[long].len(), 2);
    assert_eq!(g.classes[short].len(), 2);
    assert_eq!(g.invariant_degrees, vec![2, 4]);
}

#[test]
fn z3_data() {
    let g = build_group("Z3").unwrap();
    assert_eq!(g.order(), 3);
    let mut lambdas: Vec<Cyclo> = g.reflections.iter().map(|r| r.lambda.clone()).collect();
    lambdas.sort_by_key(|l| l.to_string());
    let mut expect = vec![Cyclo::zeta(3, 1), Cyclo::zeta(3, 2)];
    expect.sort_by_key(|l| l.to_string());
    assert_eq!(lambdas, expect);
    assert_eq!(g.root_norm, Cyclo::one());
}

#[test]
fn decompose_regular_a1() {
    let g = build_group("A1").unwrap();
    let m = WRep::regular(&g).decompose(&g).unwrap();
    assert_eq!(m.get("triv"), Some(&1));
    assert_eq!(m.get("sgn"), Some(&1));
}

/// ⟨χ², 1⟩ computed directly from traces of the element matrices.
fn square_trace_inner_trivial(id: &str) -> Cyclo {
    let g = build_group(id).unwrap();
    let s: Cyclo = g.elements.iter().map(|m| m.trace() * m.trace()).sum();
    s / Cyclo::from_int(g.order() as i64)
}

#[test]
fn decompose_h_tensor_h_b2() {
    let g = build_group("B2").unwrap();
    let h = WRep::reflection(&g);
    let hh = diagonal_action(&[&h, &h]);
    let m = hh.decompose(&g).unwrap();
    assert_eq!(Cyclo::from_int(m["2x0"] as i64), square_trace_inner_trivial("B2"));
    assert_eq!(m["2x0"], 1);
}

#[test]
fn decompose_wedge2_b2() {
    let g = build_group("B2").unwrap();
    let w2 = WRep::exterior(&g, 2);
    // ⋀² has character det, so it is the sign of both reflection classes
    for (k, cls) in g.classes.iter().enumerate() {
        assert_eq!(w2.mats[cls[0]].trace(), g.det(cls[0]), "class {}", k);
    }
    let m = w2.decompose(&g).unwrap();
    assert_eq!(m.len(), 1);
    assert_eq!(m["0x11"], 1);
    // ε = det_𝔥 for B2 is the product of the short and long signs
    assert_eq!(g.det_label(), "0x11");
}

#[test]
fn projectors() {
    let a1 = build_group("A1").unwrap();
    let reg = WRep::regular(&a1);
    let p = reg.isotypic_projector(&a1, 0);
    assert_eq!(&p * &p, p);
    assert_eq!(p.rank(), 1);
    assert_eq!(p, Mat::from_rows(vec![vec![q(1, 2), q(1, 2)], vec![q(1, 2), q(1, 2)]]));

    let b2 = build_group("B2").unwrap();
    let h = WRep::reflection(&b2);
    let idx = b2.irrep_index("1x1").unwrap();
    assert_eq!(h.isotypic_projector(&b2, idx), Mat::identity(2));

    let a2 = build_group("A2").unwrap();
    let h = WRep::reflection(&a2);
    let hh = WRep {
        dim: 4,
        mats: h
            .mats
            .iter()
            .map(|m| {
                let mut out = Mat::zeros(4, 4);
                for i in 0..2 {
                    for j in 0..2 {
                        out.set(i, j, m.get(i, j).clone());
                        out.set(2 + i, 2 + j, m.get(i, j).clone());
                    }
                }
                out
            })
            .collect(),
    };
    let p = hh.isotypic_projector(&a2, 0);
    assert!(p.is_zero());
    for g in 0..a2.order() {
        let q = hh.isotypic_projector(&a2, 1);
        assert_eq!(&q * &hh.mats[g], &hh.mats[g] * &q);
    }
}

#[test]
fn diagonal_action_examples() {
    let b2 = build_group("B2").unwrap();
    let triv = &b2.irrep("2x0").unwrap().rep;
    assert_eq!(diagonal_action(&[triv, triv]), *triv);
    let s = &b2.irrep("11x0").unwrap().rep;
    let eps = &b2.irrep(b2.det_label()).unwrap().rep;
    let t = diagonal_action(&[s, eps]);
    let m = t.decompose(&b2).unwrap();
    assert_eq!(m.keys().collect::<Vec<_>>(), vec!["0x2"]);

    let a2 = build_group("A2").unwrap();
    let h = WRep::reflection(&a2);
    let hd = WRep::dual_reflection(&a2);
    let m = diagonal_action(&[&h, &hd]).decompose(&a2).unwrap();
    assert_eq!(m.get("triv"), Some(&1));
    assert_eq!(m.get("sgn"), Some(&1));
    assert_eq!(m.get("refl"), Some(&1));
}

#[test]
fn not_a_representation() {
    let a2 = build_group("A2").unwrap();
    let mut bad = WRep::reflection(&a2);
    bad.mats[1] = Mat::identity(2);
    assert!(matches!(bad.decompose(&a2), Err(Error::NotARepresentation(_))));
}

#[test]
fn twist_labels() {
    let b3 = build_group("B3").unwrap();
    assert_eq!(b3.det_label(), "0x111");
    let h = b3.irrep_index("2x1").unwrap();
    let t = b3.twist_by_det(h, 1);
    assert_eq!(b3.irreps[t].label, "1x11");
    let z3 = build_group("Z3").unwrap();
    assert_eq!(z3.det_label(), "chi1");
}

#[test]
fn invariant_generators_a1() {
    let g = build_group("A1").unwrap();
    assert_eq!(g.invariant_generators, vec![Poly::var(1, 0).pow(2)]);
}
