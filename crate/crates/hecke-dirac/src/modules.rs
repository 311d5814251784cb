//! Standard modules at t = 1, baby Verma modules at t = 0, the Dirac
//! operator on M ⊗ S, Dirac cohomology, contravariant forms.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::clifford::{Clifford, PinSection, SpinModule};
use crate::dirac::ClassFunction;
use crate::error::{Error, Result};
use crate::group::{multiplicities, ReflectionGroup, WRep};
use crate::linalg::{Mat, SparseVec};
use crate::pbw::presets::cherednik;
use crate::pbw::{FormFamily, HElem, HKey, Preset};
use crate::poly::{degree, monomials, Exps, Poly};
use crate::scalar::{Cyclo, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    /// M(σ) at t = 1, truncated above `degree_cap`.
    Standard { degree_cap: u32 },
    /// M̄(σ) at t = 0.
    BabyVerma,
    /// V_σ with x and y acting by zero.
    OneDimensional,
    /// L̄(σ), the graded simple quotient of M̄(σ).
    SimpleHead,
}

impl ModuleKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModuleKind::Standard { .. } => "standard",
            ModuleKind::BabyVerma => "baby_verma",
            ModuleKind::OneDimensional => "one_dimensional",
            ModuleKind::SimpleHead => "simple_head",
        }
    }
}

/// Graded complement of the ideal generated by positive-degree invariants.
pub struct Coinvariants {
    pub n: usize,
    /// Standard monomials, the basis of S(𝔥*)_W.
    pub basis: Vec<Exps>,
    pub top: u32,
    // per degree: monomials of that degree and RREF rows (pivot, row)
    pieces: Vec<(Vec<Exps>, Vec<(usize, Vec<Cyclo>)>)>,
}

impl Coinvariants {
    pub fn new(group: &ReflectionGroup) -> Self {
        let n = group.n;
        let top: u32 = group.invariant_degrees.iter().map(|d| d - 1).sum();
        let mut pieces = Vec::new();
        let mut basis = Vec::new();
        for d in 0..=top + 1 {
            let monos = monomials(n, d);
            let idx: HashMap<&Exps, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut rows = Vec::new();
            for f in &group.invariant_generators {
                let df = f.total_degree().unwrap_or(0);
                if df == 0 || df > d {
                    continue;
                }
                for m in monomials(n, d - df) {
                    let p = f.mul(&Poly::monomial(m, Cyclo::one()));
                    let mut row = vec![Cyclo::zero(); monos.len()];
                    for (e, c) in &p.terms {
                        row[idx[e]] = c.clone();
                    }
                    rows.push(row);
                }
            }
            let (rref, pivots) = if rows.is_empty() {
                (Mat::zeros(0, monos.len()), vec![])
            } else {
                Mat::from_rows(rows).rref()
            };
            let reduced: Vec<(usize, Vec<Cyclo>)> = pivots
                .iter()
                .enumerate()
                .map(|(r, &p)| (p, rref.row(r).to_vec()))
                .collect();
            for (i, m) in monos.iter().enumerate() {
                if !pivots.contains(&i) {
                    basis.push(m.clone());
                }
            }
            pieces.push((monos, reduced));
        }
        Coinvariants { n, basis, top, pieces }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Normal form of a polynomial on the standard monomials.
    pub fn reduce(&self, p: &Poly) -> Vec<(Exps, Cyclo)> {
        let mut by_degree: BTreeMap<u32, Vec<(Exps, Cyclo)>> = BTreeMap::new();
        for (e, c) in &p.terms {
            by_degree.entry(degree(e)).or_default().push((e.clone(), c.clone()));
        }
        let mut out = Vec::new();
        for (d, terms) in by_degree {
            if d > self.top {
                continue;
            }
            let (monos, rows) = &self.pieces[d as usize];
            let mut v = vec![Cyclo::zero(); monos.len()];
            for (e, c) in terms {
                let i = monos.iter().position(|m| *m == e).unwrap();
                v[i] += &c;
            }
            for (p, row) in rows {
                if v[*p].is_zero() {
                    continue;
                }
                let f = v[*p].clone();
                for (a, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *a -= &(&f * r);
                    }
                }
            }
            for (i, c) in v.into_iter().enumerate() {
                if !c.is_zero() {
                    out.push((monos[i].clone(), c));
                }
            }
        }
        out
    }
}

/// A module with basis (monomial) ⊗ e_j and exact action matrices.
pub struct GradedModule {
    pub kind: ModuleKind,
    pub family: FormFamily,
    pub sigma: usize,
    pub dim_sigma: usize,
    /// Monomial of each block of dim_sigma basis vectors; empty for quotients.
    pub monomials: Vec<Exps>,
    /// Degree of every basis vector.
    pub degrees: Vec<u32>,
    index: HashMap<Exps, usize>,
    pub x: Vec<Mat>,
    pub y: Vec<Mat>,
    /// Action of every group element.
    pub w: Vec<Mat>,
}

impl GradedModule {
    fn build(
        kind: ModuleKind,
        family: FormFamily,
        sigma: usize,
        monos: Vec<Exps>,
        reduce: &dyn Fn(&Poly) -> Vec<(Exps, Cyclo)>,
    ) -> Self {
        let g = family.data.group.clone();
        let n = g.n;
        let ds = g.irreps[sigma].dim;
        let rep = &g.irreps[sigma].rep;
        let index: HashMap<Exps, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let dim = monos.len() * ds;
        let place = |m: &mut Mat, col: usize, terms: &[(Exps, Cyclo)], w: usize, j: usize| {
            for (e, c) in terms {
                let Some(&b) = index.get(e) else { continue };
                for i in 0..ds {
                    let s = rep.mats[w].get(i, j);
                    if !s.is_zero() {
                        *m.at_mut(b * ds + i, col) += &(c * s);
                    }
                }
            }
        };
        let mut x = vec![Mat::zeros(dim, dim); n];
        let mut y = vec![Mat::zeros(dim, dim); n];
        let mut wm = vec![Mat::zeros(dim, dim); g.order()];
        for (b, m) in monos.iter().enumerate() {
            let mono = Poly::monomial(m.clone(), Cyclo::one());
            for i in 0..n {
                let xm = reduce(&mono.mul(&Poly::var(n, i)));
                // y_i x^m: keep PBW terms without y, w acts through σ
                let key = HKey {
                    left: m.clone(),
                    w: 0,
                    right: vec![0; n],
                };
                let ym = family.left_mul_gen(n + i, &HElem::term(key, Cyclo::one()));
                let mut by_w: BTreeMap<usize, Poly> = BTreeMap::new();
                for (k, c) in &ym.terms {
                    if k.right.iter().any(|&e| e > 0) {
                        continue;
                    }
                    by_w.entry(k.w)
                        .or_insert_with(|| Poly::zero(n))
                        .add_term(k.left.clone(), c.clone());
                }
                for j in 0..ds {
                    let col = b * ds + j;
                    place(&mut x[i], col, &xm, 0, j);
                    for (w, p) in &by_w {
                        place(&mut y[i], col, &reduce(p), *w, j);
                    }
                }
            }
            for w in 0..g.order() {
                let image = reduce(&mono.substitute(&g.dual[w]));
                for j in 0..ds {
                    place(&mut wm[w], b * ds + j, &image, w, j);
                }
            }
        }
        GradedModule {
            kind,
            family,
            sigma,
            dim_sigma: ds,
            degrees: monos.iter().flat_map(|m| std::iter::repeat_n(degree(m), ds)).collect(),
            monomials: monos,
            index,
            x,
            y,
            w: wm,
        }
    }

    pub fn group(&self) -> &ReflectionGroup {
        self.family.group()
    }

    pub fn group_arc(&self) -> Arc<ReflectionGroup> {
        self.family.data.group.clone()
    }

    pub fn sigma_label(&self) -> &str {
        &self.group().irreps[self.sigma].label
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree_of(&self, idx: usize) -> u32 {
        self.degrees[idx]
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn indices_of_degree(&self, k: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree_of(i) == k).collect()
    }

    pub fn index_of(&self, m: &[u32], j: usize) -> Option<usize> {
        self.index.get(m).map(|b| b * self.dim_sigma + j)
    }

    pub fn parameter(&self) -> (Cyclo, Vec<Cyclo>) {
        match &self.family.preset {
            Preset::Cherednik { t, c } => (t.clone(), c.clone()),
            _ => unreachable!("modules are built over Cherednik families"),
        }
    }

    /// Matrix of an algebra element; exact on degrees where no raised term is truncated.
    pub fn act(&self, h: &HElem) -> Mat {
        let dim = self.dim();
        let mut out = Mat::zeros(dim, dim);
        for (k, c) in &h.terms {
            let mut m = Mat::identity(dim);
            for (i, &e) in k.right.iter().enumerate() {
                for _ in 0..e {
                    m = &self.y[i] * &m;
                }
            }
            m = &self.w[k.w] * &m;
            for (i, &e) in k.left.iter().enumerate() {
                for _ in 0..e {
                    m = &self.x[i] * &m;
                }
            }
            out = &out + &m.scale(c);
        }
        out
    }
}

fn cherednik_family(group: Arc<ReflectionGroup>, t: Cyclo, c: Vec<Cyclo>) -> Result<FormFamily> {
    cherednik(group, t, c)
}

/// M(σ) at t = 1 on S^{≤K}(𝔥*) ⊗ V_σ.
pub fn standard_module(
    group: Arc<ReflectionGroup>,
    sigma: &str,
    c: Vec<Cyclo>,
    degree_cap: u32,
) -> Result<GradedModule> {
    let s = group.irrep_index(sigma)?;
    let n = group.n;
    let family = cherednik_family(group, Cyclo::one(), c)?;
    let monos: Vec<Exps> = (0..=degree_cap).flat_map(|d| monomials(n, d)).collect();
    let reduce = move |p: &Poly| -> Vec<(Exps, Cyclo)> {
        p.terms
            .iter()
            .filter(|(e, _)| degree(e) <= degree_cap)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect()
    };
    Ok(GradedModule::build(
        ModuleKind::Standard { degree_cap },
        family,
        s,
        monos,
        &reduce,
    ))
}

/// M̄(σ) at t = 0 on S(𝔥*)_W ⊗ V_σ.
pub fn baby_verma(group: Arc<ReflectionGroup>, sigma: &str, c: Vec<Cyclo>) -> Result<GradedModule> {
    let s = group.irrep_index(sigma)?;
    let co = Coinvariants::new(&group);
    let family = cherednik_family(group, Cyclo::zero(), c)?;
    let monos = co.basis.clone();
    let reduce = |p: &Poly| co.reduce(p);
    Ok(GradedModule::build(ModuleKind::BabyVerma, family, s, monos, &reduce))
}

/// V_σ with x, y acting by zero, when [y, x] ∈ ℂ[W] acts by zero on σ.
pub fn one_dimensional_module(
    group: Arc<ReflectionGroup>,
    sigma: &str,
    t: Cyclo,
    c: Vec<Cyclo>,
) -> Result<GradedModule> {
    let s = group.irrep_index(sigma)?;
    let n = group.n;
    let family = cherednik_family(group.clone(), t, c)?;
    let rep = &group.irreps[s].rep;
    for i in 0..n {
        for j in 0..n {
            let comm = family.commutator(&family.gen(n + i), &family.gen(j));
            let mut m = Mat::zeros(rep.dim, rep.dim);
            for (k, coef) in &comm.terms {
                if k.left.iter().chain(&k.right).any(|&e| e > 0) {
                    return Err(Error::Precondition("commutator is not in ℂ[W]".into()));
                }
                m = &m + &rep.mats[k.w].scale(coef);
            }
            if !m.is_zero() {
                return Err(Error::Precondition(format!(
                    "[y_{}, x_{}] does not act by zero on {}",
                    i + 1,
                    j + 1,
                    sigma
                )));
            }
        }
    }
    let monos = vec![vec![0; n]];
    let reduce = |p: &Poly| -> Vec<(Exps, Cyclo)> {
        p.terms
            .iter()
            .filter(|(e, _)| degree(e) == 0)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect()
    };
    Ok(GradedModule::build(ModuleKind::OneDimensional, family, s, monos, &reduce))
}

/// L̄(σ) = M̄(σ)/rad, where rad in degree k is the common kernel of all
/// y-monomials of degree k.
pub fn simple_head(m: &GradedModule) -> Result<GradedModule> {
    if m.kind != ModuleKind::BabyVerma {
        return Err(Error::Precondition("simple head is taken of a baby Verma module".into()));
    }
    let g = m.group_arc();
    let n = g.n;
    let (t, c) = m.parameter();
    let bottom = m.indices_of_degree(0);
    // per degree: old indices, RREF rows of rad (pivot, row), kept positions
    let mut pieces = Vec::new();
    let mut new_index: HashMap<usize, usize> = HashMap::new();
    let mut degrees = Vec::new();
    let mut old_of_new = Vec::new();
    for k in 0..=m.max_degree() {
        let idx = m.indices_of_degree(k);
        let mut rows: Vec<Vec<Cyclo>> = Vec::new();
        for b in monomials(n, k) {
            let mut yb = Mat::identity(m.dim());
            for (i, &e) in b.iter().enumerate() {
                for _ in 0..e {
                    yb = &m.y[i] * &yb;
                }
            }
            let block = yb.submatrix(&bottom, &idx);
            for r in 0..block.rows {
                rows.push(block.row(r).to_vec());
            }
        }
        let rad = Mat::from_rows(rows).kernel();
        let (rref, pivots) = if rad.is_empty() {
            (Mat::zeros(0, idx.len()), vec![])
        } else {
            Mat::from_rows(rad).rref()
        };
        let kept: Vec<usize> = (0..idx.len()).filter(|p| !pivots.contains(p)).collect();
        for &p in &kept {
            new_index.insert(idx[p], degrees.len());
            degrees.push(k);
            old_of_new.push(idx[p]);
        }
        let reduced: Vec<(usize, Vec<Cyclo>)> = pivots.iter().enumerate().map(|(r, &p)| (p, rref.row(r).to_vec())).collect();
        pieces.push((idx, reduced));
    }
    let dim = degrees.len();
    let project = |v: Vec<Cyclo>| -> Vec<Cyclo> {
        let mut out = vec![Cyclo::zero(); dim];
        for (idx, rows) in &pieces {
            let mut local: Vec<Cyclo> = idx.iter().map(|&i| v[i].clone()).collect();
            for (p, row) in rows {
                if local[*p].is_zero() {
                    continue;
                }
                let f = local[*p].clone();
                for (a, r) in local.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *a -= &(&f * r);
                    }
                }
            }
            for (pos, val) in local.into_iter().enumerate() {
                if let Some(&j) = new_index.get(&idx[pos]) {
                    out[j] = val;
                }
            }
        }
        out
    };
    let quotient = |a: &Mat| -> Mat {
        let cols: Vec<Vec<Cyclo>> = old_of_new.iter().map(|&j| project(a.col(j))).collect();
        Mat::from_cols(dim, &cols)
    };
    Ok(GradedModule {
        kind: ModuleKind::SimpleHead,
        family: cherednik_family(g, t, c)?,
        sigma: m.sigma,
        dim_sigma: m.dim_sigma,
        monomials: Vec::new(),
        index: HashMap::new(),
        degrees,
        x: m.x.iter().map(quotient).collect(),
        y: m.y.iter().map(quotient).collect(),
        w: m.w.iter().map(quotient).collect(),
    })
}

/// Ω_{W,c} with λ̄ in place of λ; its scalar on σ is how Ω_𝐇 sees the lowest weight.
pub fn omega_w_conj(g: &ReflectionGroup, c: &[Cyclo]) -> ClassFunction {
    let mut out = ClassFunction::default();
    for (k, _) in &g.reflection_classes {
        let s = g.classes[*k][0];
        let lam = g.reflection(s).unwrap().lambda.conj();
        let v = &(&Cyclo::from_int(2) * &c[*k]) / &(&Cyclo::one() - &lam);
        out.coefficients.insert(*k, v);
    }
    out
}

/// Scalar of D² on the ν-isotypic part of S^k(𝔥*) ⊗ V_σ ⊗ ⋀^ℓ𝔥:
/// -2t(k + n - ℓ) + N̄_c(σ) + N_c(ν), with ν the diagonal type.
pub fn d2_scalar(g: &ReflectionGroup, t: &Cyclo, c: &[Cyclo], sigma: usize, k: u32, l: u32, nu: usize) -> Cyclo {
    let n = g.n as i64;
    let base = t * &Cyclo::from_int(-2 * (k as i64 + n - l as i64));
    let ns = omega_w_conj(g, c).scalar_on(g, sigma);
    let nn = crate::dirac::omega_w(g, c).scalar_on(g, nu);
    &(&base + &ns) + &nn
}

/// Largest k with a zero D² scalar at t = 1, over all types and wedge degrees.
pub fn zero_scalar_window(g: &ReflectionGroup, c: &[Cyclo], sigma: usize) -> Option<u32> {
    let n = g.n as i64;
    let ns = omega_w_conj(g, c).scalar_on(g, sigma);
    let ow = crate::dirac::omega_w(g, c);
    let mut best: Option<u32> = None;
    for nu in 0..g.irreps.len() {
        let s = &ns + &ow.scalar_on(g, nu);
        for l in 0..=n {
            // 2(k + n - ℓ) = s
            let k = &(&s / &Cyclo::from_int(2)) - &Cyclo::from_int(n - l);
            if let Some(v) = k.to_i64() {
                if v >= 0 {
                    best = Some(best.map_or(v as u32, |b| b.max(v as u32)));
                }
            }
        }
    }
    best
}

/// M ⊗ S with D, the diagonal group action, and cell bookkeeping.
pub struct DiracComplex<'m> {
    pub module: &'m GradedModule,
    pub spin: SpinModule,
    spin_rho: Vec<Mat>,
    columns: Vec<SparseVec>,
    projector_cache: std::cell::RefCell<HashMap<(usize, u32, u32), Mat>>,
}

impl<'m> DiracComplex<'m> {
    pub fn new(module: &'m GradedModule) -> Result<Self> {
        let g = module.group();
        let n = g.n;
        let spin = SpinModule::new(n);
        let cl = Clifford::for_family(&module.family);
        let pin = PinSection::new(g, &cl)?;
        let spin_rho = (0..g.order()).map(|w| spin.action(&pin.tau[w])).collect();
        let sd = spin.dim();
        let mut columns = Vec::with_capacity(module.dim() * sd);
        for b in 0..module.dim() {
            for mask in 0..sd {
                let mut col = SparseVec::new();
                for i in 0..n {
                    for (hm, sm) in [(&module.x[i], &spin.y[i]), (&module.y[i], &spin.x[i])] {
                        let Some((p, sc)) = column_entry(sm, mask) else { continue };
                        for r in 0..module.dim() {
                            let a = hm.get(r, b);
                            if !a.is_zero() {
                                let idx = r * sd + p;
                                let v = col.entry(idx).or_default();
                                *v += &(a * &sc);
                                if v.is_zero() {
                                    col.remove(&idx);
                                }
                            }
                        }
                    }
                }
                columns.push(col);
            }
        }
        Ok(DiracComplex {
            module,
            spin,
            spin_rho,
            columns,
            projector_cache: Default::default(),
        })
    }

    pub fn group(&self) -> &ReflectionGroup {
        self.module.group()
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// (k, ℓ) of a basis index.
    pub fn cell_of(&self, idx: usize) -> (u32, u32) {
        let sd = self.spin.dim();
        (
            self.module.degree_of(idx / sd),
            (idx % sd).count_ones(),
        )
    }

    pub fn cell_indices(&self, k: u32, l: u32) -> Vec<usize> {
        let sd = self.spin.dim();
        let mut out = Vec::new();
        for b in self.module.indices_of_degree(k) {
            for mask in 0..sd {
                if mask.count_ones() == l {
                    out.push(b * sd + mask);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v {
            crate::linalg::axpy(&mut out, c, &self.columns[*j]);
        }
        out
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    /// Dense block D[rows, cols].
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        let mut m = Mat::zeros(rows.len(), cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (r, v) in &self.columns[*c] {
                if let Some(&i) = pos.get(r) {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }

    /// D² on a cell, checked to stay inside the cell.
    pub fn d_squared_cell(&self, k: u32, l: u32) -> Result<Mat> {
        let cell = self.cell_indices(k, l);
        let pos: HashMap<usize, usize> = cell.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        let mut m = Mat::zeros(cell.len(), cell.len());
        for (j, c) in cell.iter().enumerate() {
            let mut e = SparseVec::new();
            e.insert(*c, Cyclo::one());
            for (r, v) in self.apply(&self.apply(&e)) {
                let i = *pos.get(&r).ok_or_else(|| {
                    Error::Precondition(format!("D² leaves the cell ({}, {})", k, l))
                })?;
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// True when D maps every (k, ℓ) into (k+1, ℓ+1) ⊕ (k-1, ℓ-1).
    pub fn sparsity_ok(&self) -> bool {
        (0..self.dim()).all(|j| {
            let (k, l) = self.cell_of(j);
            self.columns[j].keys().all(|&r| {
                let (k2, l2) = self.cell_of(r);
                (k2 == k + 1 && l2 == l + 1) || (k2 + 1 == k && l2 + 1 == l)
            })
        })
    }

    /// ρ(w) restricted to a cell.
    pub fn rho_cell(&self, w: usize, k: u32, l: u32) -> Mat {
        let b = self.module.indices_of_degree(k);
        let masks: Vec<usize> = (0..self.spin.dim()).filter(|m| m.count_ones() == l).collect();
        let mw = self.module.w[w].submatrix(&b, &b);
        let sw = self.spin_rho[w].submatrix(&masks, &masks);
        mw.kron(&sw)
    }

    /// ρ(w) D = D ρ(w) for the generators, on all cells.
    pub fn equivariant(&self) -> bool {
        let g = self.group();
        let maxk = self.module.max_degree();
        let n = g.n as u32;
        for &w in &g.gens {
            for k in 0..=maxk {
                for l in 0..=n {
                    let cols = self.cell_indices(k, l);
                    let rw = self.rho_cell(w, k, l);
                    for (k2, l2) in [(k + 1, l + 1), (k.wrapping_sub(1), l.wrapping_sub(1))] {
                        if k2 > maxk || l2 > n {
                            continue;
                        }
                        let rows = self.cell_indices(k2, l2);
                        let d = self.block(&rows, &cols);
                        let lhs = &self.rho_cell(w, k2, l2) * &d;
                        let rhs = &d * &rw;
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn projector_cell(&self, nu: usize, k: u32, l: u32) -> Mat {
        if let Some(p) = self.projector_cache.borrow().get(&(nu, k, l)) {
            return p.clone();
        }
        let g = self.group();
        let size = self.cell_indices(k, l).len();
        let mut acc = Mat::zeros(size, size);
        for w in 0..g.order() {
            let ch = g.character(nu, w).conj();
            if !ch.is_zero() {
                acc = &acc + &self.rho_cell(w, k, l).scale(&ch);
            }
        }
        let p = acc.scale(&Cyclo::from_frac(g.irreps[nu].dim as i64, g.order() as i64));
        self.projector_cache.borrow_mut().insert((nu, k, l), p.clone());
        p
    }

    /// Check D² = scalar on every isotypic part of every cell with k ≤ max_k.
    pub fn check_scalar_law(&self, max_k: u32) -> Result<Vec<CellScalar>> {
        let g = self.group();
        let (t, c) = self.module.parameter();
        let mut out = Vec::new();
        for k in 0..=max_k {
            for l in 0..=g.n as u32 {
                let d2 = self.d_squared_cell(k, l)?;
                for nu in 0..g.irreps.len() {
                    let p = self.projector_cell(nu, k, l);
                    if p.is_zero() {
                        continue;
                    }
                    let s = d2_scalar(g, &t, &c, self.module.sigma, k, l, nu);
                    let holds = &d2 * &p == p.scale(&s);
                    out.push(CellScalar {
                        k,
                        l,
                        nu: g.irreps[nu].label.clone(),
                        multiplicity: p.rank() / g.irreps[nu].dim,
                        scalar: s,
                        holds,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Apply the ν-projector to vectors given on the index list `idx`, cell by cell.
    fn project(&self, nu: usize, idx: &[usize], x: &Mat) -> Mat {
        let mut out = Mat::zeros(x.rows, x.cols);
        let mut by_cell: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
        for (pos, &i) in idx.iter().enumerate() {
            by_cell.entry(self.cell_of(i)).or_default().push(pos);
        }
        for ((k, l), positions) in by_cell {
            let cell = self.cell_indices(k, l);
            let p = self.projector_cell(nu, k, l);
            // the listed positions must be the whole cell, in order
            let local: Vec<usize> = positions.iter().map(|&pp| cell.iter().position(|&c| c == idx[pp]).unwrap()).collect();
            let sub = p.submatrix(&local, &local);
            let xs = x.submatrix(&positions, &(0..x.cols).collect::<Vec<_>>());
            let ys = &sub * &xs;
            for (a, &pp) in positions.iter().enumerate() {
                for j in 0..x.cols {
                    out.set(pp, j, ys.get(a, j).clone());
                }
            }
        }
        out
    }

    fn multiplicities_of(&self, idx: &[usize], basis: &Mat) -> BTreeMap<usize, usize> {
        let g = self.group();
        let mut out = BTreeMap::new();
        if basis.cols == 0 {
            return out;
        }
        for nu in 0..g.irreps.len() {
            let r = self.project(nu, idx, basis).rank();
            if r > 0 {
                out.insert(nu, r / g.irreps[nu].dim);
            }
        }
        out
    }

    fn cells_supporting(&self, nu: usize, idx: &[usize], basis: &Mat) -> BTreeSet<(u32, u32)> {
        let proj = self.project(nu, idx, basis);
        let mut out = BTreeSet::new();
        for (pos, &i) in idx.iter().enumerate() {
            if proj.row(pos).iter().any(|c| !c.is_zero()) {
                out.insert(self.cell_of(i));
            }
        }
        out
    }
}

fn column_entry(m: &Mat, col: usize) -> Option<(usize, Cyclo)> {
    (0..m.rows).find(|&r| !m.get(r, col).is_zero()).map(|r| (r, m.get(r, col).clone()))
}

#[derive(Clone, Debug)]
pub struct CellScalar {
    pub k: u32,
    pub l: u32,
    pub nu: String,
    pub multiplicity: usize,
    pub scalar: Cyclo,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct DiracCohomology {
    pub kind: ModuleKind,
    pub sigma: String,
    /// Multiplicities of diagonal W-types.
    pub multiplicities: BTreeMap<String, usize>,
    pub cells: BTreeMap<String, BTreeSet<(u32, u32)>>,
    /// Degree bound used for standard modules.
    pub window: Option<u32>,
}

impl DiracCohomology {
    pub fn multiplicity(&self, label: &str) -> usize {
        self.multiplicities.get(label).copied().unwrap_or(0)
    }
}

fn as_mat(rows: usize, cols: &[Vec<Cyclo>]) -> Mat {
    Mat::from_cols(rows, cols)
}

/// H_D = ker D / (ker D ∩ im D) as diagonal W-types.
pub fn dirac_cohomology(module: &GradedModule) -> Result<DiracCohomology> {
    let cx = DiracComplex::new(module)?;
    dirac_cohomology_of(&cx)
}

pub fn dirac_cohomology_of(cx: &DiracComplex) -> Result<DiracCohomology> {
    let module = cx.module;
    let g = module.group();
    let n = g.n as i64;
    let (_, c) = module.parameter();
    let (window, kmax) = match module.kind {
        ModuleKind::Standard { degree_cap } => {
            let Some(kmax) = zero_scalar_window(g, &c, module.sigma) else {
                return Ok(DiracCohomology {
                    kind: module.kind,
                    sigma: module.sigma_label().to_string(),
                    multiplicities: BTreeMap::new(),
                    cells: BTreeMap::new(),
                    window: None,
                });
            };
            if kmax + 1 > degree_cap {
                return Err(Error::WindowExceedsCap { min_k: (kmax + 1) as usize });
            }
            (Some(kmax), kmax)
        }
        _ => (None, module.max_degree()),
    };
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cells: BTreeMap<usize, BTreeSet<(u32, u32)>> = BTreeMap::new();
    for delta in -n..=kmax as i64 {
        let in_diag = |k: u32, l: u32| k as i64 - l as i64 == delta;
        let top = if window.is_some() { kmax + 1 } else { kmax };
        let mut idx: Vec<usize> = Vec::new();
        for k in 0..=top {
            for l in 0..=n as u32 {
                if in_diag(k, l) {
                    idx.extend(cx.cell_indices(k, l));
                }
            }
        }
        if idx.is_empty() {
            continue;
        }
        let d = cx.block(&idx, &idx);
        let (ker, boundary) = if window.is_some() {
            // restrict to ker D² (cells k ≤ kmax), where D acts
            let mut zcols: Vec<Vec<Cyclo>> = Vec::new();
            for k in 0..=kmax {
                for l in 0..=n as u32 {
                    if !in_diag(k, l) {
                        continue;
                    }
                    let cell = cx.cell_indices(k, l);
                    let d2 = cx.d_squared_cell(k, l)?;
                    for v in d2.kernel() {
                        let mut full = vec![Cyclo::zero(); idx.len()];
                        for (a, ci) in cell.iter().enumerate() {
                            let p = idx.iter().position(|x| x == ci).unwrap();
                            full[p] = v[a].clone();
                        }
                        zcols.push(full);
                    }
                }
            }
            if zcols.is_empty() {
                continue;
            }
            let z = as_mat(idx.len(), &zcols);
            let dz = &d * &z;
            // coordinates of D z in the basis z
            let mut r = Mat::zeros(z.cols, z.cols);
            for j in 0..z.cols {
                let sol = z.solve(&dz.col(j)).ok_or_else(|| {
                    Error::Precondition("D does not preserve ker D²".into())
                })?;
                for (i, v) in sol.into_iter().enumerate() {
                    r.set(i, j, v);
                }
            }
            let k1 = r.kernel_mat();
            let k2 = (&r * &r).kernel_mat();
            (&z * &k1, &z * &(&r * &k2))
        } else {
            let k1 = d.kernel_mat();
            let k2 = (&d * &d).kernel_mat();
            (k1, &d * &k2)
        };
        let a = cx.multiplicities_of(&idx, &ker);
        let b = cx.multiplicities_of(&idx, &boundary);
        for (nu, m) in a {
            let m2 = b.get(&nu).copied().unwrap_or(0);
            if m > m2 {
                *mult.entry(nu).or_default() += m - m2;
                cells
                    .entry(nu)
                    .or_default()
                    .extend(cx.cells_supporting(nu, &idx, &ker));
            }
        }
    }
    let label = |i: &usize| g.irreps[*i].label.clone();
    Ok(DiracCohomology {
        kind: module.kind,
        sigma: module.sigma_label().to_string(),
        multiplicities: mult.iter().map(|(k, v)| (label(k), *v)).collect(),
        cells: cells.into_iter().map(|(k, v)| (label(&k), v)).collect(),
        window,
    })
}

/// Which generator is peeled off a monomial when building the form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Peel {
    First,
    Last,
}

/// Gram matrices (one per degree) of the contravariant form with x^⋆ = y.
pub fn contravariant_form(module: &GradedModule) -> Result<Vec<Mat>> {
    contravariant_form_peeling(module, Peel::First)
}

pub fn contravariant_form_peeling(module: &GradedModule, peel: Peel) -> Result<Vec<Mat>> {
    let g = module.group();
    let ModuleKind::Standard { degree_cap } = module.kind else {
        return Err(Error::Precondition("contravariant form is built on standard modules".into()));
    };
    let rep = &g.irreps[module.sigma].rep;
    let orthogonal = rep.mats.iter().all(|m| &m.transpose() * m == Mat::identity(m.rows));
    if !g.orthonormal || !orthogonal {
        return Err(Error::UnsupportedField(format!(
            "{}: the contravariant form needs orthogonal matrix models",
            g.id
        )));
    }
    let (_, c) = module.parameter();
    if !c.iter().all(Cyclo::is_rational) {
        return Err(Error::UnsupportedField("the contravariant form needs rational c".into()));
    }
    let ds = module.dim_sigma;
    let mut grams = vec![Mat::identity(ds)];
    for k in 1..=degree_cap {
        let basis = module.indices_of_degree(k);
        let prev = module.indices_of_degree(k - 1);
        let prev_pos: HashMap<usize, usize> = prev.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut gram = Mat::zeros(basis.len(), basis.len());
        for (a, &bi) in basis.iter().enumerate() {
            let m = &module.monomials[bi / ds];
            let j = bi % ds;
            let vars: Vec<usize> = (0..m.len()).filter(|&i| m[i] > 0).collect();
            let i = match peel {
                Peel::First => vars[0],
                Peel::Last => *vars.last().unwrap(),
            };
            let mut lower = m.clone();
            lower[i] -= 1;
            let low = module.index_of(&lower, j).unwrap();
            let la = prev_pos[&low];
            for (b, &bj) in basis.iter().enumerate() {
                // (x_i u, v) = (u, y_i v)
                let mut s = Cyclo::zero();
                for (pi, &p) in prev.iter().enumerate() {
                    let yv = module.y[i].get(p, bj);
                    if !yv.is_zero() {
                        s += &(grams[k as usize - 1].get(la, pi) * &yv.conj());
                    }
                }
                gram.set(a, b, s);
            }
        }
        grams.push(gram);
    }
    Ok(grams)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definiteness {
    pub psd: bool,
    pub definite: bool,
    pub pivots: Vec<Cyclo>,
}

/// Exact symmetric elimination with diagonal pivots.
pub fn definiteness(g: &Mat) -> Result<Definiteness> {
    let n = g.rows;
    let mut a = g.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::new();
    loop {
        let Some(pos) = active.iter().position(|&i| !a.get(i, i).is_zero()) else {
            let zero = active
                .iter()
                .all(|&i| active.iter().all(|&j| a.get(i, j).is_zero()));
            return Ok(Definiteness {
                psd: zero,
                definite: zero && active.is_empty(),
                pivots,
            });
        };
        let i = active.remove(pos);
        let p = a.get(i, i).clone();
        let sign = p.rational_part_sign()?;
        if !p.is_rational() {
            return Err(Error::UnsupportedField("Gram pivot is not rational".into()));
        }
        pivots.push(p.clone());
        if sign != Sign::Positive {
            return Ok(Definiteness {
                psd: false,
                definite: false,
                pivots,
            });
        }
        let inv = p.inv();
        for &r in &active {
            let f = a.get(r, i) * &inv;
            if f.is_zero() {
                continue;
            }
            for &s in &active {
                let v = a.get(i, s);
                if !v.is_zero() {
                    let nv = a.get(r, s) - &(&f * v);
                    a.set(r, s, nv);
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct GramVerdict {
    pub degree: u32,
    pub dim: usize,
    pub rank: usize,
    pub psd: bool,
    pub definite: bool,
    pub pivots: Vec<Cyclo>,
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub k: u32,
    /// Degree ℓ' = n - ℓ, so the cell is S^k ⊗ V_σ ⊗ ⋀^{n-ℓ'}𝔥.
    pub l: u32,
    /// Diagonal type ν and μ = ν ⊗ ε⁻¹.
    pub nu: String,
    pub mu: String,
    pub scalar: Cyclo,
    /// The ν-part of the cell lies in the radical of the form.
    pub in_radical: bool,
}

#[derive(Clone, Debug)]
pub struct UnitarityReport {
    pub sigma: String,
    pub degree_cap: u32,
    pub gram: Vec<GramVerdict>,
    /// Failures of N(σ) - N(μ) ≤ 2(k + ℓ') in M(σ) ⊗ S, k ≤ K.
    pub violations: Vec<Violation>,
    /// The k = 0 part, a necessary condition for the simple quotient.
    pub simple_violations: Vec<Violation>,
    pub first_gram_failure: Option<u32>,
    /// PSD through degree f - 1 rules out non-radical violations below level f - 1.
    pub consistent: bool,
}

/// Character of a W-stable subspace (basis columns) of a module degree piece.
fn subspace_character(module: &GradedModule, k: u32, basis: &Mat) -> Vec<Cyclo> {
    let g = module.group();
    let idx = module.indices_of_degree(k);
    (0..g.order())
        .map(|w| {
            if basis.cols == 0 {
                return Cyclo::zero();
            }
            let mw = module.w[w].submatrix(&idx, &idx);
            let img = &mw * basis;
            let mut tr = Cyclo::zero();
            for j in 0..basis.cols {
                let sol = basis.solve(&img.col(j)).expect("stable subspace");
                tr += &sol[j];
            }
            tr
        })
        .collect()
}

pub fn unitarity_report(group: Arc<ReflectionGroup>, sigma: &str, c: Vec<Cyclo>, degree_cap: u32) -> Result<UnitarityReport> {
    let module = standard_module(group.clone(), sigma, c.clone(), degree_cap)?;
    let grams = contravariant_form(&module)?;
    let g = &group;
    let n = g.n as u32;
    let t = Cyclo::one();
    let mut verdicts = Vec::new();
    let mut first_failure = None;
    for (k, gm) in grams.iter().enumerate() {
        let d = definiteness(gm)?;
        if !d.psd && first_failure.is_none() {
            first_failure = Some(k as u32);
        }
        verdicts.push(GramVerdict {
            degree: k as u32,
            dim: gm.rows,
            rank: gm.rank(),
            psd: d.psd,
            definite: d.definite,
            pivots: d.pivots,
        });
    }
    let wedge: Vec<Vec<Cyclo>> = (0..=n as usize)
        .map(|l| WRep::exterior(g, l).character())
        .collect();
    let mut violations = Vec::new();
    for k in 0..=degree_cap {
        let idx = module.indices_of_degree(k);
        let full: Vec<Cyclo> = (0..g.order())
            .map(|w| module.w[w].submatrix(&idx, &idx).trace())
            .collect();
        let rad = grams[k as usize].kernel_mat();
        let rad_char = subspace_character(&module, k, &rad);
        let quot: Vec<Cyclo> = full.iter().zip(&rad_char).map(|(a, b)| a - b).collect();
        for l in 0..=n {
            let prod: Vec<Cyclo> = full.iter().zip(&wedge[l as usize]).map(|(a, b)| a * b).collect();
            let qprod: Vec<Cyclo> = quot.iter().zip(&wedge[l as usize]).map(|(a, b)| a * b).collect();
            let occurring = multiplicities(g, &prod);
            let visible = multiplicities(g, &qprod);
            for label in occurring.keys() {
                let nu = g.irrep_index(label)?;
                let s = d2_scalar(g, &t, &c, module.sigma, k, l, nu);
                if s.rational_part_sign()? == Sign::Positive {
                    violations.push(Violation {
                        k,
                        l: n - l,
                        nu: label.clone(),
                        mu: g.irreps[g.twist_by_det(nu, -1)].label.clone(),
                        scalar: s,
                        in_radical: !visible.contains_key(label),
                    });
                }
            }
        }
    }
    let f = first_failure.unwrap_or(degree_cap + 1);
    let consistent = violations
        .iter()
        .filter(|v| !v.in_radical && v.k < degree_cap)
        .all(|v| v.k + 1 >= f);
    let simple_violations = violations.iter().filter(|v| v.k == 0).cloned().collect();
    Ok(UnitarityReport {
        sigma: sigma.to_string(),
        degree_cap,
        gram: verdicts,
        violations,
        simple_violations,
        first_gram_failure: first_failure,
        consistent,
    })
}
