//! Standard form families: rational Cherednik, graded affine Hecke, and a
//! few deliberately broken families for exercising the PBW checker.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{FormData, FormFamily, PositiveSystem, Preset};
use crate::error::{Error, Result};
use crate::group::{build_group, ReflectionGroup};
use crate::linalg::Mat;
use crate::scalar::Cyclo;

/// Class-indexed parameter that is `value` on every reflection class.
pub fn constant_parameter(group: &ReflectionGroup, value: &Cyclo) -> Vec<Cyclo> {
    let mut c = vec![Cyclo::zero(); group.classes.len()];
    for (k, _) in &group.reflection_classes {
        c[*k] = value.clone();
    }
    c
}

/// Class-indexed parameter from (class name, value) pairs; unnamed classes get `default`.
pub fn named_parameter(
    group: &ReflectionGroup,
    values: &[(String, Cyclo)],
    default: &Cyclo,
) -> Result<Vec<Cyclo>> {
    let mut c = constant_parameter(group, default);
    for (name, v) in values {
        let k = group.reflection_class_by_name(name).ok_or_else(|| {
            let known: Vec<&str> = group
                .reflection_classes
                .iter()
                .map(|(_, n)| n.as_str())
                .collect();
            Error::Config(format!(
                "group {} has no reflection class `{}` (classes: {})",
                group.id,
                name,
                known.join(", ")
            ))
        })?;
        c[k] = v.clone();
    }
    Ok(c)
}

/// Symmetric pairing ⟨x_i, y_j⟩ = δ_ij on V = 𝔥* ⊕ 𝔥.
pub fn hh_pairing(n: usize) -> Mat {
    let mut b = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        b.set(i, n + i, Cyclo::one());
        b.set(n + i, i, Cyclo::one());
    }
    b
}

fn skew_set(m: &mut Mat, i: usize, j: usize, v: Cyclo) {
    m.set(j, i, -&v);
    m.set(i, j, v);
}

/// Cherednik forms with an arbitrary per-element parameter (used to build
/// both the honest preset and a broken variant).
pub fn cherednik_data_per_element(
    group: Arc<ReflectionGroup>,
    t: &Cyclo,
    c_elem: &dyn Fn(usize) -> Cyclo,
) -> FormData {
    let n = group.n;
    let action = (0..group.order()).map(|w| group.v_matrix(w)).collect();
    let mut forms = BTreeMap::new();
    if !t.is_zero() {
        let mut a = Mat::zeros(2 * n, 2 * n);
        for i in 0..n {
            // a_1(y_i, x_i) = t
            skew_set(&mut a, n + i, i, t.clone());
        }
        forms.insert(0, a);
    }
    for r in &group.reflections {
        let c = c_elem(r.element);
        if c.is_zero() {
            continue;
        }
        let f = &(-&c) / &group.root_norm;
        let mut a = Mat::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                // a_s(y_i, x_j) = -c ⟨y_i, α⟩⟨α^∨, x_j⟩ / ⟨α^∨, α⟩
                let v = &(&f * &r.alpha[i]) * &r.alpha_check[j];
                if !v.is_zero() {
                    skew_set(&mut a, n + i, j, v);
                }
            }
        }
        forms.insert(r.element, a);
    }
    FormData {
        dim: 2 * n,
        n_left: n,
        action,
        forms,
        group,
    }
}

pub fn cherednik_data(group: Arc<ReflectionGroup>, t: &Cyclo, c: &[Cyclo]) -> FormData {
    let g = group.clone();
    cherednik_data_per_element(group, t, &|s| c[g.class_of[s]].clone())
}

pub fn cherednik(group: Arc<ReflectionGroup>, t: Cyclo, c: Vec<Cyclo>) -> Result<FormFamily> {
    if c.len() != group.classes.len() {
        return Err(Error::Config("parameter must be indexed by conjugacy class".into()));
    }
    let data = cherednik_data(group.clone(), &t, &c);
    FormFamily::new(data, Preset::Cherednik { t, c }, hh_pairing(group.n))
}

/// Cherednik family with a constant parameter on all reflections.
pub fn cherednik_constant(id: &str, t: Cyclo, c: Cyclo) -> Result<FormFamily> {
    let g = build_group(id)?;
    let cv = constant_parameter(&g, &c);
    cherednik(g, t, cv)
}

/// A nondegenerate symmetric W-invariant bilinear form on 𝔥, by averaging.
pub fn invariant_form(group: &ReflectionGroup) -> Mat {
    let n = group.n;
    let mut seeds = vec![Mat::identity(n)];
    for i in 0..n {
        for j in i + 1..n {
            let mut s = Mat::zeros(n, n);
            s.set(i, j, Cyclo::one());
            s.set(j, i, Cyclo::one());
            seeds.push(s);
        }
    }
    let mut acc = Mat::zeros(n, n);
    for s in seeds {
        let mut avg = Mat::zeros(n, n);
        for g in &group.elements {
            avg = &avg + &(&(&g.transpose() * &s) * g);
        }
        acc = &acc + &avg;
        if !acc.det().is_zero() {
            return acc;
        }
    }
    panic!("no nondegenerate invariant form for {}", group.id)
}

/// The invariant form rescaled so that the first positive root α has ⟨α,α⟩ = 2
/// for the induced form on 𝔥*.
pub fn root_normalized_form(group: &ReflectionGroup, ps: PositiveSystem) -> Mat {
    let b = invariant_form(group);
    let binv = b.inverse().expect("nondegenerate");
    let roots = positive_roots(group, ps);
    let a = &roots[0].0;
    let norm: Cyclo = a.iter().zip(binv.mul_vec(a)).map(|(x, y)| x * &y).sum();
    b.scale(&(norm / Cyclo::from_int(2)))
}

fn is_positive(v: &[Cyclo], ps: PositiveSystem) -> bool {
    let pick = match ps {
        PositiveSystem::Lex => v.iter().find(|c| !c.is_zero()),
        PositiveSystem::ReverseLex => v.iter().rev().find(|c| !c.is_zero()),
    };
    let lead = pick.expect("nonzero root");
    lead.rational_part_sign()
        .map(|s| s == crate::scalar::Sign::Positive)
        .expect("positivity needs rational root coordinates")
}

/// Positive roots (in 𝔥*) with their reflection elements.
pub fn positive_roots(group: &ReflectionGroup, ps: PositiveSystem) -> Vec<(Vec<Cyclo>, usize)> {
    // one W-orbit per reflection class keeps a single length per class
    let mut roots: Vec<Vec<Cyclo>> = Vec::new();
    for (k, _) in &group.reflection_classes {
        let r = group.reflection(group.classes[*k][0]).expect("reflection class");
        for d in &group.dual {
            let v = d.mul_vec(&r.alpha);
            if !roots.contains(&v) {
                roots.push(v);
            }
        }
    }
    let mut out: Vec<(Vec<Cyclo>, usize)> = roots
        .into_iter()
        .filter(|v| is_positive(v, ps))
        .map(|v| {
            let s = group
                .reflections
                .iter()
                .find(|r| {
                    let i = r.alpha.iter().position(|c| !c.is_zero()).unwrap();
                    let f = &v[i] / &r.alpha[i];
                    r.alpha.iter().zip(&v).all(|(a, b)| &(a * &f) == b)
                })
                .expect("root belongs to a reflection")
                .element;
            (v, s)
        })
        .collect();
    out.sort_by_key(|(_, s)| *s);
    out
}

/// Graded affine Hecke forms on V₀ = 𝔥:
/// a_w(u,v) = -Σ_{s_α s_β = w} k_α k_β (α(u)β(v) - α(v)β(u)).
pub fn graded_affine_hecke_data(
    group: Arc<ReflectionGroup>,
    k: &[Cyclo],
    ps: PositiveSystem,
) -> Result<FormData> {
    if !group.real || !group.elements.iter().all(|m| m.data.iter().all(Cyclo::is_rational)) {
        return Err(Error::UnsupportedField(format!(
            "graded affine Hecke preset needs a rational real group, got {}",
            group.id
        )));
    }
    let n = group.n;
    let roots = positive_roots(&group, ps);
    let mut forms: BTreeMap<usize, Mat> = BTreeMap::new();
    for (a, sa) in &roots {
        for (b, sb) in &roots {
            if sa == sb {
                continue;
            }
            let w = group.mul(*sa, *sb);
            let kk = &k[group.class_of[*sa]] * &k[group.class_of[*sb]];
            if kk.is_zero() {
                continue;
            }
            let m = forms.entry(w).or_insert_with(|| Mat::zeros(n, n));
            for i in 0..n {
                for j in 0..n {
                    let v = &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
                    if !v.is_zero() {
                        let cur = m.get(i, j) - &(&kk * &v);
                        m.set(i, j, cur);
                    }
                }
            }
        }
    }
    forms.retain(|_, m| !m.is_zero());
    Ok(FormData {
        dim: n,
        n_left: n,
        action: group.elements.clone(),
        forms,
        group,
    })
}

pub fn graded_affine_hecke(
    group: Arc<ReflectionGroup>,
    k: Vec<Cyclo>,
    ps: PositiveSystem,
) -> Result<FormFamily> {
    let data = graded_affine_hecke_data(group.clone(), &k, ps)?;
    let pairing = root_normalized_form(&group, ps);
    FormFamily::new(data, Preset::GradedAffineHecke { k, positive: ps }, pairing)
}

/// B2 Cherednik forms whose parameter differs on the two long reflections.
pub fn corrupted_nonconstant_parameter() -> FormData {
    let g = build_group("B2").unwrap();
    let long = g.reflection_class_by_name("long").unwrap();
    let first_long = g.classes[long][0];
    let gc = g.clone();
    cherednik_data_per_element(g, &Cyclo::one(), &move |s| {
        if s == first_long {
            Cyclo::from_int(2)
        } else if gc.class_of[s] == long {
            Cyclo::one()
        } else {
            Cyclo::from_frac(1, 2)
        }
    })
}

/// B2 on 𝔥 ⊕ 𝔥* with the (nondegenerate) symplectic pairing placed on the long reflections.
pub fn corrupted_nondegenerate_form() -> FormData {
    let g = build_group("B2").unwrap();
    let n = g.n;
    let mut omega = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        skew_set(&mut omega, n + i, i, Cyclo::one());
    }
    let long = g.reflection_class_by_name("long").unwrap();
    let mut forms = BTreeMap::new();
    for &s in &g.classes[long] {
        forms.insert(s, omega.clone());
    }
    FormData {
        dim: 2 * n,
        n_left: n,
        action: (0..g.order()).map(|w| g.v_matrix(w)).collect(),
        forms,
        group: g,
    }
}

/// B2 on V₀ = 𝔥 with the area form attached to the central element -1.
pub fn corrupted_area_form() -> FormData {
    let g = build_group("B2").unwrap();
    let minus = g
        .index_of(&Mat::scalar(2, &Cyclo::from_int(-1)))
        .unwrap();
    let mut area = Mat::zeros(2, 2);
    skew_set(&mut area, 0, 1, Cyclo::one());
    let mut forms = BTreeMap::new();
    forms.insert(minus, area);
    FormData {
        dim: 2,
        n_left: 2,
        action: g.elements.clone(),
        forms,
        group: g,
    }
}

/// A1 on V = 𝔥 ⊕ (trivial line) with a_s the area form; the radical of a_s
/// is zero while V^s is the trivial line.
pub fn corrupted_a1() -> FormData {
    let g = build_group("A1").unwrap();
    let action = g
        .elements
        .iter()
        .map(|m| {
            let mut a = Mat::identity(2);
            a.set(0, 0, m.get(0, 0).clone());
            a
        })
        .collect();
    let mut area = Mat::zeros(2, 2);
    skew_set(&mut area, 0, 1, Cyclo::one());
    let s = g.reflections[0].element;
    let mut forms = BTreeMap::new();
    forms.insert(s, area);
    FormData {
        dim: 2,
        n_left: 2,
        action,
        forms,
        group: g,
    }
}
