//! JSON and plain-table emitters. Objects are `serde_json::Map`, which keeps
//! keys sorted, so output is byte-stable.

use serde_json::{json, Value};

use crate::clifford::CElem;
use crate::cm::{DiracPartition, PartitionSource};
use crate::dirac::{class_name, Dirac, TElem};
use crate::error::Result;
use crate::group::ReflectionGroup;
use crate::linalg::Mat;
use crate::modules::{DiracCohomology, UnitarityReport, Violation};
use crate::pbw::{FormData, FormFamily, HElem, PbwVerdict, PositiveSystem, Preset};
use crate::scalar::Cyclo;

pub fn scalar(c: &Cyclo) -> Value {
    Value::String(c.to_string())
}

pub fn scalars(v: &[Cyclo]) -> Value {
    Value::Array(v.iter().map(scalar).collect())
}

pub fn matrix(m: &Mat) -> Value {
    Value::Array((0..m.rows).map(|i| scalars(m.row(i))).collect())
}

/// Parameter as {reflection class name: value}.
pub fn parameter(g: &ReflectionGroup, c: &[Cyclo]) -> Value {
    let mut m = serde_json::Map::new();
    for (k, name) in &g.reflection_classes {
        m.insert(name.clone(), scalar(&c[*k]));
    }
    Value::Object(m)
}

/// Terms sorted by (x-exponents, w, y-exponents).
pub fn helem(h: &HElem) -> Value {
    Value::Array(
        h.terms
            .iter()
            .map(|(k, c)| json!({"x": k.left, "w": k.w, "y": k.right, "coeff": scalar(c)}))
            .collect(),
    )
}

fn mask_list(mask: u32) -> Vec<u32> {
    (0..32).filter(|g| mask >> g & 1 == 1).collect()
}

pub fn celem(c: &CElem) -> Value {
    Value::Array(
        c.terms
            .iter()
            .map(|(m, v)| json!({"gens": mask_list(*m), "coeff": scalar(v)}))
            .collect(),
    )
}

pub fn telem(t: &TElem) -> Value {
    Value::Array(
        t.terms
            .iter()
            .map(|((k, m), c)| {
                json!({"x": k.left, "w": k.w, "y": k.right, "gens": mask_list(*m), "coeff": scalar(c)})
            })
            .collect(),
    )
}

pub fn preset_name(p: &Preset) -> String {
    match p {
        Preset::Cherednik { .. } => "cherednik".into(),
        Preset::GradedAffineHecke { positive: PositiveSystem::Lex, .. } => "gah".into(),
        Preset::GradedAffineHecke { positive: PositiveSystem::ReverseLex, .. } => "gah-reverse".into(),
        Preset::Custom(name) => name.clone(),
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub json: Value,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .checks
            .iter()
            .map(|c| {
                vec![
                    c.name.clone(),
                    if c.pass { "pass" } else { "FAIL" }.into(),
                    c.detail.clone(),
                ]
            })
            .collect();
        table(&rows)
    }
}

fn checks_json(checks: &[Check]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail}))
            .collect(),
    )
}

pub fn pbw_json(v: &PbwVerdict) -> Value {
    json!({
        "pass": v.pass(),
        "failed_conditions": v.failed_conditions(),
        "failures": v.failures.iter().map(|f| json!({
            "condition": f.condition,
            "w": f.w,
            "h": f.h,
            "witness": f.vectors.iter().map(|v| scalars(v)).collect::<Vec<_>>(),
            "detail": f.detail,
        })).collect::<Vec<_>>(),
    })
}

fn pbw_check(data: &FormData) -> (Check, Value) {
    let v = data.pbw_check();
    let detail = if v.pass() {
        String::new()
    } else {
        format!("conditions {:?}", v.failed_conditions())
    };
    (Check::new("pbw", v.pass(), detail), pbw_json(&v))
}

/// PBW verdict for raw form data (used for the seeded corrupted families).
pub fn verify_form_data(data: &FormData, name: &str) -> VerifyReport {
    let (check, pbw) = pbw_check(data);
    VerifyReport {
        json: json!({"group": data.group.id, "preset": name, "pbw": pbw, "checks": checks_json(std::slice::from_ref(&check))}),
        checks: vec![check],
    }
}

/// Every identity the library checks symbolically for one family.
pub fn verify_family(f: &FormFamily) -> Result<VerifyReport> {
    let g = f.group();
    let (pbw, pbw_value) = pbw_check(&f.data);
    let mut checks = vec![pbw];
    let d = Dirac::new(f)?;
    let sq = d.verify_dirac_square()?;
    checks.push(Check::new(
        "dirac_square",
        sq.equality,
        match sq.delta_matches {
            Some(false) => "Σ w⊗(κ_w/2 - e_w) differs from Δ(Ω_W,c)",
            _ => "",
        },
    ));
    let om = d.omega_tilde()?;
    checks.push(Check::new("d_kills_omega_tilde", d.d(&om).is_zero(), ""));
    // Leibniz rule on products of generators
    let gens: Vec<TElem> = (0..f.dim())
        .map(|a| d.h_part(&f.gen(a)))
        .chain((0..f.dim()).map(|a| d.c_part(&d.cl.gen(a))))
        .collect();
    let mut leibniz = true;
    for a in &gens {
        for b in &gens {
            let lhs = d.d(&d.mul(a, b));
            let rhs = d.mul(&d.d(a), b).add(&d.mul(&a.eps(), &d.d(b)));
            leibniz &= lhs == rhs;
        }
    }
    checks.push(Check::new("derivation_rule", leibniz, ""));
    let mut t_value = Value::Null;
    let mut c_value = Value::Null;
    let mut omega_w = Value::Null;
    match &f.preset {
        Preset::Cherednik { t, c } => {
            t_value = scalar(t);
            c_value = parameter(g, c);
            omega_w = sq.omega_w.as_ref().map(|o| o.to_json(g)).unwrap_or(Value::Null);
            let dx = d.dirac_x();
            let dy = d.dirac_y();
            checks.push(Check::new("dirac_x_squared_zero", d.mul(&dx, &dx).is_zero(), ""));
            checks.push(Check::new("dirac_y_squared_zero", d.mul(&dy, &dy).is_zero(), ""));
            checks.push(Check::new("dirac_delta_invariant", d.is_diagonal_invariant(d.dirac())?, ""));
            let pin = d.pin.as_ref().expect("Cherednik families carry a pin section");
            let mut hom = true;
            for w in 0..g.order() {
                for &s in &g.gens {
                    hom &= d.cl.mul(&pin.tau[w], &pin.tau[s]) == pin.tau[g.mul(w, s)];
                }
            }
            checks.push(Check::new("tau_homomorphism", hom, ""));
            let mut refl = true;
            for r in &g.reflections {
                let s = r.element;
                let inv = &pin.tau[g.inverse[s]];
                refl &= d.cl.mul(&pin.tau[s], inv) == CElem::one();
                refl &= pin.tau[s].eps() == pin.tau[s];
                refl &= d.cl.transpose(&pin.tau[s]) == inv.scale(&r.lambda);
                let vm = g.v_matrix(s);
                for a in 0..f.dim() {
                    let conj = d.cl.mul(&d.cl.mul(&pin.tau[s], &d.cl.gen(a)), inv);
                    refl &= conj == d.cl.act_on_vector(&vm, a);
                }
            }
            checks.push(Check::new("tau_reflection_properties", refl, ""));
            let mut kills = true;
            for w in &g.gens {
                kills &= d.d(&d.delta(*w)?).is_zero();
            }
            checks.push(Check::new("d_kills_delta", kills, ""));
        }
        Preset::GradedAffineHecke { k, .. } => {
            c_value = parameter(g, k);
        }
        Preset::Custom(_) => {}
    }
    let dirac_square = json!({
        "group": g.id,
        "preset": preset_name(&f.preset),
        "t": t_value,
        "c": c_value,
        "equality": sq.equality,
        "omega_H": helem(&sq.omega_h),
        "omega_W": omega_w,
        "kappa1": celem(&sq.kappa1),
    });
    Ok(VerifyReport {
        json: json!({
            "group": g.id,
            "preset": preset_name(&f.preset),
            "pbw": pbw_value,
            "dirac_square": dirac_square,
            "checks": checks_json(&checks),
        }),
        checks,
    })
}

fn cells(set: &std::collections::BTreeSet<(u32, u32)>) -> Value {
    Value::Array(set.iter().map(|(k, l)| json!([k, l])).collect())
}

pub fn cohomology_json(g: &ReflectionGroup, t: &Cyclo, c: &[Cyclo], h: &DiracCohomology) -> Value {
    json!({
        "group": g.id,
        "t": scalar(t),
        "c": parameter(g, c),
        "sigma": h.sigma,
        "module": h.kind.name(),
        "window": h.window,
        "H_D": h.multiplicities.iter().map(|(l, m)| json!({
            "irrep": l,
            "multiplicity": m,
            "cells": cells(&h.cells[l]),
        })).collect::<Vec<_>>(),
    })
}

pub fn cohomology_table(h: &DiracCohomology) -> String {
    let rows: Vec<Vec<String>> = h
        .multiplicities
        .iter()
        .map(|(l, m)| {
            let cs: Vec<String> = h.cells[l].iter().map(|(k, l)| format!("({},{})", k, l)).collect();
            vec![l.clone(), m.to_string(), cs.join(" ")]
        })
        .collect();
    table(&rows)
}

pub fn partition_json(g: &ReflectionGroup, p: &DiracPartition) -> Value {
    json!({
        "group": p.group,
        "c": parameter(g, &p.c),
        "source": match p.source {
            PartitionSource::SimpleHeads => "simple_heads",
            PartitionSource::BabyVermas => "baby_vermas",
        },
        "blocks": p.blocks,
        "evidence": p.evidence.iter().map(|e| json!({
            "sigma": e.sigma, "nu": e.nu, "mu": e.mu, "multiplicity": e.multiplicity,
        })).collect::<Vec<_>>(),
        "casimir": p.casimir.iter().map(|(l, v)| (l.clone(), scalar(v))).collect::<serde_json::Map<_, _>>(),
        "undecided_pairs": p.undecided_pairs,
        "casimir_constant_on_blocks": p.casimir_constant_on_blocks,
        "families_agree": p.families_agree(g),
    })
}

pub fn partition_table(p: &DiracPartition) -> String {
    let rows: Vec<Vec<String>> = p
        .blocks
        .iter()
        .map(|b| {
            let labels: Vec<&str> = b.iter().map(String::as_str).collect();
            let n = &p.casimir[b.iter().next().unwrap()];
            vec![format!("{{{}}}", labels.join(", ")), n.to_string()]
        })
        .collect();
    table(&rows)
}

fn violation_json(v: &Violation) -> Value {
    json!({
        "k": v.k, "l": v.l, "nu": v.nu, "mu": v.mu,
        "scalar": scalar(&v.scalar), "in_radical": v.in_radical,
    })
}

pub fn unitarity_json(g: &ReflectionGroup, c: &[Cyclo], r: &UnitarityReport) -> Value {
    json!({
        "group": g.id,
        "t": "1",
        "c": parameter(g, c),
        "sigma": r.sigma,
        "K": r.degree_cap,
        "gram_verdicts": r.gram.iter().map(|v| json!({
            "degree": v.degree, "dim": v.dim, "rank": v.rank,
            "psd": v.psd, "definite": v.definite, "pivots": scalars(&v.pivots),
        })).collect::<Vec<_>>(),
        "violations": r.violations.iter().map(violation_json).collect::<Vec<_>>(),
        "simple_violations": r.simple_violations.iter().map(violation_json).collect::<Vec<_>>(),
        "first_gram_failure": r.first_gram_failure,
        "consistent": r.consistent,
    })
}

pub fn unitarity_table(r: &UnitarityReport) -> String {
    let mut rows: Vec<Vec<String>> = r
        .gram
        .iter()
        .map(|v| {
            vec![
                format!("degree {}", v.degree),
                if v.psd { "psd" } else { "not psd" }.into(),
                format!("rank {}/{}", v.rank, v.dim),
            ]
        })
        .collect();
    for v in &r.violations {
        rows.push(vec![
            format!("k={} l={}", v.k, v.l),
            format!("mu={}", v.mu),
            format!("scalar {}{}", v.scalar, if v.in_radical { " (radical)" } else { "" }),
        ]);
    }
    rows.push(vec!["consistent".into(), r.consistent.to_string(), String::new()]);
    table(&rows)
}

pub fn group_json(g: &ReflectionGroup) -> Value {
    json!({
        "id": g.id,
        "rank": g.n,
        "order": g.order(),
        "conductor": g.conductor,
        "generators": g.gens,
        "elements": g.elements.iter().map(matrix).collect::<Vec<_>>(),
        "words": g.words,
        "classes": g.classes,
        "class_names": (0..g.classes.len()).map(|k| class_name(g, k)).collect::<Vec<_>>(),
        "irreps": g.irreps.iter().map(|i| json!({"label": i.label, "dim": i.dim})).collect::<Vec<_>>(),
        "characters": g.irreps.iter().zip(&g.characters)
            .map(|(i, ch)| (i.label.clone(), scalars(ch)))
            .collect::<serde_json::Map<_, _>>(),
        "invariant_degrees": g.invariant_degrees,
        "reflections": g.reflections.iter().map(|r| json!({
            "element": r.element,
            "class": class_name(g, r.class),
            "alpha": scalars(&r.alpha),
            "alpha_check": scalars(&r.alpha_check),
            "lambda": scalar(&r.lambda),
        })).collect::<Vec<_>>(),
    })
}

/// Left-aligned columns separated by two spaces.
pub fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (j, cell) in r.iter().enumerate() {
            if j + 1 == r.len() {
                line.push_str(cell);
            } else {
                line.push_str(cell);
                line.push_str(&" ".repeat(widths[j] - cell.chars().count() + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Canonical pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
