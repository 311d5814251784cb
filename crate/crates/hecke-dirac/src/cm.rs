//! Dirac partition of Irr(W) at t = 0 and the desk instance of the
//! factorization of S(𝔥)^W ⊗ S(𝔥*)^W through the kernel of d.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::dirac::{ClassFunction, Dirac, TElem, DEFAULT_UNKNOWN_LIMIT};
use crate::error::{Error, Result};
use crate::group::ReflectionGroup;
use crate::modules::{baby_verma, dirac_cohomology, omega_w_conj, simple_head};
use crate::pbw::presets::cherednik;
use crate::pbw::HKey;
use crate::poly::Poly;
use crate::scalar::Cyclo;
use crate::clifford::CElem;

/// Modules whose Dirac cohomology drives the merges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionSource {
    /// L̄(σ), the simple heads.
    SimpleHeads,
    /// M̄(σ) itself; only σ ⊗ ε shows up there, so no merges happen.
    BabyVermas,
}

/// One merge: ν occurs in H_D of the module attached to σ, so σ and μ = ν ⊗ ε⁻¹ share a block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub sigma: String,
    pub nu: String,
    pub mu: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct DiracPartition {
    pub group: String,
    pub source: PartitionSource,
    pub c: Vec<Cyclo>,
    pub blocks: Vec<BTreeSet<String>>,
    pub evidence: Vec<Evidence>,
    /// N̄_c(σ) for every σ.
    pub casimir: BTreeMap<String, Cyclo>,
    /// Pairs with equal Casimir scalar left in different blocks.
    pub undecided_pairs: Vec<(String, String)>,
    /// Casimir scalar is constant on every block.
    pub casimir_constant_on_blocks: bool,
}

impl DiracPartition {
    pub fn block_of(&self, label: &str) -> Option<&BTreeSet<String>> {
        self.blocks.iter().find(|b| b.contains(label))
    }

    /// Comparison with `lusztig_families`; None off equal nonzero parameters
    /// or when no table is known.
    pub fn families_agree(&self, g: &ReflectionGroup) -> Option<bool> {
        let families = lusztig_families(&g.id)?;
        let values: Vec<&Cyclo> = g.reflection_classes.iter().map(|(k, _)| &self.c[*k]).collect();
        if values.iter().any(|v| v.is_zero() || *v != values[0]) {
            return None;
        }
        let expect: BTreeSet<BTreeSet<String>> = families
            .iter()
            .map(|f| f.iter().map(|l| l.to_string()).collect())
            .collect();
        Some(self.blocks.iter().cloned().collect::<BTreeSet<_>>() == expect)
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut j = i;
    while parent[j] != r {
        let next = parent[j];
        parent[j] = r;
        j = next;
    }
    r
}

pub fn dirac_partition(group: Arc<ReflectionGroup>, c: Vec<Cyclo>) -> Result<DiracPartition> {
    dirac_partition_from(group, c, PartitionSource::SimpleHeads)
}

pub fn dirac_partition_from(
    group: Arc<ReflectionGroup>,
    c: Vec<Cyclo>,
    source: PartitionSource,
) -> Result<DiracPartition> {
    let g = &group;
    let m = g.irreps.len();
    let mut parent: Vec<usize> = (0..m).collect();
    let mut evidence = Vec::new();
    for s in 0..m {
        let label = &g.irreps[s].label;
        let verma = baby_verma(group.clone(), label, c.clone())?;
        let h = match source {
            PartitionSource::SimpleHeads => dirac_cohomology(&simple_head(&verma)?)?,
            PartitionSource::BabyVermas => dirac_cohomology(&verma)?,
        };
        for (nu, mult) in &h.multiplicities {
            let mu = g.twist_by_det(g.irrep_index(nu)?, -1);
            evidence.push(Evidence {
                sigma: label.clone(),
                nu: nu.clone(),
                mu: g.irreps[mu].label.clone(),
                multiplicity: *mult,
            });
            let (a, b) = (find(&mut parent, s), find(&mut parent, mu));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut by_root: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    for i in 0..m {
        let r = find(&mut parent, i);
        by_root.entry(r).or_default().insert(g.irreps[i].label.clone());
    }
    let blocks: Vec<BTreeSet<String>> = by_root.into_values().collect();
    let cf = omega_w_conj(g, &c);
    let casimir: BTreeMap<String, Cyclo> = (0..m)
        .map(|i| (g.irreps[i].label.clone(), cf.scalar_on(g, i)))
        .collect();
    let mut undecided = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = (&g.irreps[i].label, &g.irreps[j].label);
            if find(&mut parent, i) != find(&mut parent, j) && casimir[a] == casimir[b] {
                undecided.push((a.clone(), b.clone()));
            }
        }
    }
    let constant = blocks.iter().all(|b| {
        let first = &casimir[b.iter().next().unwrap()];
        b.iter().all(|l| &casimir[l] == first)
    });
    Ok(DiracPartition {
        group: g.id.clone(),
        source,
        c,
        blocks,
        evidence,
        casimir,
        undecided_pairs: undecided,
        casimir_constant_on_blocks: constant,
    })
}

/// Ω_𝐇 on M̄(σ) as -N̄_c(σ).
pub fn omega_central_character(g: &ReflectionGroup, c: &[Cyclo], sigma: &str) -> Result<Cyclo> {
    let i = g.irrep_index(sigma)?;
    Ok(-&omega_w_conj(g, c).scalar_on(g, i))
}

/// Blocks of Irr(W) at equal parameters, for comparison only.
pub fn lusztig_families(id: &str) -> Option<Vec<Vec<&'static str>>> {
    match id {
        "A1" => Some(vec![vec!["triv"], vec!["sgn"]]),
        "A2" => Some(vec![vec!["triv"], vec!["refl"], vec!["sgn"]]),
        "B2" => Some(vec![vec!["2x0"], vec!["11x0", "1x1", "0x2"], vec!["0x11"]]),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// f ∈ S(𝔥*)^W, polynomial in x.
    X,
    /// f ∈ S(𝔥)^W, polynomial in y.
    Y,
}

#[derive(Clone, Debug)]
pub struct Preimage {
    pub side: Side,
    pub invariant: Poly,
    pub degree: u32,
    pub unknowns: usize,
    /// Δ-component of f ⊗ 1; zero when f ⊗ 1 lies in im d.
    pub delta_part: ClassFunction,
    pub preimage: TElem,
    pub verified: bool,
}

fn embed(f: &Poly, side: Side, n: usize) -> TElem {
    let mut h = crate::pbw::HElem::zero();
    for (e, c) in &f.terms {
        let key = match side {
            Side::X => HKey { left: e.clone(), w: 0, right: vec![0; n] },
            Side::Y => HKey { left: vec![0; n], w: 0, right: e.clone() },
        };
        h.add_assign_scaled(&crate::pbw::HElem::term(key, Cyclo::one()), c);
    }
    TElem::tensor(&h, &CElem::one())
}

/// f ⊗ 1 = d(b) for fundamental invariants of degree ≤ max_degree at t = 0.
pub fn verify_cm_factorization(
    group: Arc<ReflectionGroup>,
    c: Vec<Cyclo>,
    max_degree: u32,
) -> Result<Vec<Preimage>> {
    let n = group.n;
    let family = cherednik(group.clone(), Cyclo::zero(), c)?;
    let dirac = Dirac::new(&family)?;
    let mut out = Vec::new();
    for (side, gens) in [
        (Side::X, &group.invariant_generators),
        (Side::Y, &group.invariant_generators_y),
    ] {
        for f in gens {
            let d = f.total_degree().unwrap_or(0);
            if d == 0 {
                return Err(Error::Precondition("constant invariant has no preimage".into()));
            }
            if d > max_degree {
                continue;
            }
            let z = embed(f, side, n);
            let dec = dirac.decompose_kernel_element(&z, d, DEFAULT_UNKNOWN_LIMIT)?;
            let verified = dec.s.is_zero() && dirac.d(&dec.b) == z;
            out.push(Preimage {
                side,
                invariant: f.clone(),
                degree: d,
                unknowns: dec.unknowns,
                delta_part: dec.s,
                preimage: dec.b,
                verified,
            });
        }
    }
    Ok(out)
}
