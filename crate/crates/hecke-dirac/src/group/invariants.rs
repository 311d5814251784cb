use super::ReflectionGroup;
use crate::linalg::{Echelon, Mat, SparseVec};
use crate::poly::{monomials, Exps, Poly};
use crate::scalar::Cyclo;

fn reynolds(p: &Poly, mats: &[Mat]) -> Poly {
    let mut acc = Poly::zero(p.nvars);
    for m in mats {
        acc = acc.add(&p.substitute(m));
    }
    acc.scale(&Cyclo::from_frac(1, mats.len() as i64))
}

fn to_sparse(p: &Poly, basis: &[Exps]) -> SparseVec {
    basis
        .iter()
        .enumerate()
        .filter_map(|(i, e)| p.terms.get(e).map(|c| (i, c.clone())))
        .collect()
}

/// Products of the given generators with total degree exactly d.
fn decomposables(gens: &[(u32, Poly)], nvars: usize, d: u32) -> Vec<Poly> {
    fn rec(gens: &[(u32, Poly)], start: usize, d: u32, cur: Poly, out: &mut Vec<Poly>) {
        if d == 0 {
            out.push(cur);
            return;
        }
        for i in start..gens.len() {
            let (deg, g) = &gens[i];
            if *deg <= d {
                rec(gens, i, d - deg, cur.mul(g), out);
            }
        }
    }
    let mut out = Vec::new();
    rec(gens, 0, d, Poly::constant(nvars, Cyclo::one()), &mut out);
    out
}

/// Degrees and a set of fundamental invariants for the action given by
/// `mats` (column i = image of variable i).
pub(crate) fn fundamental_invariants(
    group: &ReflectionGroup,
    mats: &[Mat],
) -> (Vec<u32>, Vec<Poly>) {
    let n = group.n;
    let mut found: Vec<(u32, Poly)> = Vec::new();
    let mut d = 1;
    while found.len() < n && d as usize <= group.order() {
        let basis = monomials(n, d);
        let mut ech = Echelon::new();
        for p in decomposables(&found, n, d) {
            ech.insert(&to_sparse(&p, &basis));
        }
        for e in &basis {
            if found.len() == n {
                break;
            }
            let r = reynolds(&Poly::monomial(e.clone(), Cyclo::one()), mats);
            if r.is_zero() {
                continue;
            }
            if ech.insert(&to_sparse(&r, &basis)) {
                let lead = basis
                    .iter()
                    .map(|e| r.coeff(e))
                    .find(|c| !c.is_zero())
                    .unwrap();
                found.push((d, r.scale(&lead.inv())));
            }
        }
        d += 1;
    }
    found.into_iter().unzip()
}
