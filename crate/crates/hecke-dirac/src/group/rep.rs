use std::collections::BTreeMap;

use super::ReflectionGroup;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Cyclo;

/// A representation given by one matrix per group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WRep {
    pub dim: usize,
    pub mats: Vec<Mat>,
}

impl WRep {
    /// Extend generator images along the BFS words of the group.
    pub fn from_generators(group: &ReflectionGroup, gens: &[Mat]) -> WRep {
        let dim = gens.first().map_or(1, |m| m.rows);
        let mats = group
            .words
            .iter()
            .map(|w| {
                w.iter()
                    .fold(Mat::identity(dim), |acc, &k| &acc * &gens[k])
            })
            .collect();
        WRep { dim, mats }
    }

    pub fn trivial(group: &ReflectionGroup) -> WRep {
        WRep {
            dim: 1,
            mats: vec![Mat::identity(1); group.order()],
        }
    }

    /// The reflection representation 𝔥.
    pub fn reflection(group: &ReflectionGroup) -> WRep {
        WRep {
            dim: group.n,
            mats: group.elements.clone(),
        }
    }

    /// The dual 𝔥*.
    pub fn dual_reflection(group: &ReflectionGroup) -> WRep {
        WRep {
            dim: group.n,
            mats: group.dual.clone(),
        }
    }

    pub fn regular(group: &ReflectionGroup) -> WRep {
        let n = group.order();
        let mats = (0..n)
            .map(|g| {
                let mut m = Mat::zeros(n, n);
                for h in 0..n {
                    m.set(group.mul(g, h), h, Cyclo::one());
                }
                m
            })
            .collect();
        WRep { dim: n, mats }
    }

    /// ⋀^k of the reflection representation, basis = sorted k-subsets.
    pub fn exterior(group: &ReflectionGroup, k: usize) -> WRep {
        let subsets = subsets_of_size(group.n, k);
        let mats = group
            .elements
            .iter()
            .map(|g| {
                let mut m = Mat::zeros(subsets.len(), subsets.len());
                for (b, sb) in subsets.iter().enumerate() {
                    for (a, sa) in subsets.iter().enumerate() {
                        let minor = g.submatrix(sa, sb);
                        m.set(a, b, minor.det());
                    }
                }
                m
            })
            .collect();
        WRep {
            dim: subsets.len(),
            mats,
        }
    }

    pub fn character(&self) -> Vec<Cyclo> {
        self.mats.iter().map(Mat::trace).collect()
    }

    /// Exhaustive homomorphism check.
    pub fn validate(&self, group: &ReflectionGroup) -> Result<()> {
        if self.mats.len() != group.order() {
            return Err(Error::NotARepresentation(format!(
                "{} matrices for a group of order {}",
                self.mats.len(),
                group.order()
            )));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if &self.mats[g] * &self.mats[h] != self.mats[group.mul(g, h)] {
                    return Err(Error::NotARepresentation(format!(
                        "ρ({})ρ({}) != ρ({})",
                        g,
                        h,
                        group.mul(g, h)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Multiplicities of the irreducibles, by label.
    pub fn decompose(&self, group: &ReflectionGroup) -> Result<BTreeMap<String, usize>> {
        self.validate(group)?;
        Ok(self.decompose_unchecked(group))
    }

    /// Multiplicities from the character alone (no homomorphism check).
    pub fn decompose_unchecked(&self, group: &ReflectionGroup) -> BTreeMap<String, usize> {
        multiplicities(group, &self.character())
    }

    /// (dim σ/|W|) Σ_g conj(χ_σ(g)) ρ(g).
    pub fn isotypic_projector(&self, group: &ReflectionGroup, irrep: usize) -> Mat {
        let mut acc = Mat::zeros(self.dim, self.dim);
        for (g, m) in self.mats.iter().enumerate() {
            let c = group.character(irrep, g).conj();
            if !c.is_zero() {
                acc = &acc + &m.scale(&c);
            }
        }
        let f = Cyclo::from_frac(group.irreps[irrep].dim as i64, group.order() as i64);
        acc.scale(&f)
    }
}

/// Decompose a class-constant function given on elements.
pub fn multiplicities(group: &ReflectionGroup, chi: &[Cyclo]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for (i, ir) in group.irreps.iter().enumerate() {
        let m = group.inner_with_irrep(chi, i);
        let m = m
            .to_i64()
            .filter(|&v| v >= 0)
            .unwrap_or_else(|| panic!("non-integral multiplicity {} for {}", m, ir.label));
        if m > 0 {
            out.insert(ir.label.clone(), m as usize);
        }
    }
    out
}

pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Tensor product with the diagonal action.
pub fn diagonal_action(reps: &[&WRep]) -> WRep {
    let order = reps.first().map_or(0, |r| r.mats.len());
    let dim = reps.iter().map(|r| r.dim).product();
    let mats = (0..order)
        .map(|g| {
            reps.iter()
                .fold(Mat::identity(1), |acc, r| acc.kron(&r.mats[g]))
        })
        .collect();
    WRep { dim, mats }
}
