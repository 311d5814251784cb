//! The Dirac element in 𝐇 ⊗ C(V), the square formula, the derivation d
//! and the bounded-degree kernel solve.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::clifford::{CElem, Clifford, PinSection};
use crate::error::{Error, Result};
use crate::group::ReflectionGroup;
use crate::linalg::{Echelon, SparseVec};
use crate::pbw::{add_term, FormFamily, HElem, HKey, Preset};
use crate::poly::monomials;
use crate::scalar::Cyclo;

pub type TKey = (HKey, u32);

/// Sparse element of 𝐇 ⊗ C(V).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TElem {
    pub terms: BTreeMap<TKey, Cyclo>,
}

impl TElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn tensor(h: &HElem, c: &CElem) -> Self {
        let mut out = Self::zero();
        for (k, a) in &h.terms {
            for (m, b) in &c.terms {
                add_term(&mut out.terms, (k.clone(), *m), a * b);
            }
        }
        out
    }

    pub fn add_assign_scaled(&mut self, other: &TElem, s: &Cyclo) {
        if s.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            add_term(&mut self.terms, k.clone(), c * s);
        }
    }

    pub fn add(&self, other: &TElem) -> TElem {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Cyclo::one());
        out
    }

    pub fn sub(&self, other: &TElem) -> TElem {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Cyclo::from_int(-1));
        out
    }

    pub fn scale(&self, s: &Cyclo) -> TElem {
        let mut out = TElem::zero();
        out.add_assign_scaled(self, s);
        out
    }

    /// ε on the Clifford factor, identity on 𝐇.
    pub fn eps(&self) -> TElem {
        TElem {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), if k.1.count_ones() % 2 == 0 { c.clone() } else { -c }))
                .collect(),
        }
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|k| k.1.count_ones() % 2 == 0)
    }

    /// Filtration degree in 𝐇.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|k| k.0.degree()).max().unwrap_or(0)
    }

    /// Group by Clifford monomial.
    fn by_mask(&self) -> BTreeMap<u32, HElem> {
        let mut out: BTreeMap<u32, HElem> = BTreeMap::new();
        for ((k, m), c) in &self.terms {
            add_term(&mut out.entry(*m).or_default().terms, k.clone(), c.clone());
        }
        out
    }
}

/// Central element of ℂ[W] given by its coefficient on each conjugacy class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassFunction {
    pub coefficients: BTreeMap<usize, Cyclo>,
}

impl ClassFunction {
    pub fn class_sum(k: usize) -> Self {
        ClassFunction {
            coefficients: BTreeMap::from([(k, Cyclo::one())]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.values().all(Cyclo::is_zero)
    }

    /// Coefficient of each group element.
    pub fn element_coefficients(&self, g: &ReflectionGroup) -> Vec<Cyclo> {
        (0..g.order())
            .map(|w| self.coefficients.get(&g.class_of[w]).cloned().unwrap_or_default())
            .collect()
    }

    pub fn mul(&self, other: &ClassFunction, g: &ReflectionGroup) -> ClassFunction {
        let a = self.element_coefficients(g);
        let b = other.element_coefficients(g);
        let mut prod = vec![Cyclo::zero(); g.order()];
        for (u, cu) in a.iter().enumerate() {
            if cu.is_zero() {
                continue;
            }
            for (v, cv) in b.iter().enumerate() {
                if !cv.is_zero() {
                    prod[g.mul(u, v)] += &(cu * cv);
                }
            }
        }
        let mut out = ClassFunction::default();
        for (k, cls) in g.classes.iter().enumerate() {
            add_term(&mut out.coefficients, k, prod[cls[0]].clone());
        }
        out
    }

    /// Scalar by which the central element acts on the irrep σ.
    pub fn scalar_on(&self, g: &ReflectionGroup, sigma: usize) -> Cyclo {
        let dim = g.irreps[sigma].dim as i64;
        let mut s = Cyclo::zero();
        for (k, c) in &self.coefficients {
            let size = Cyclo::from_int(g.classes[*k].len() as i64);
            s += &(&(c * &size) * &g.characters[sigma][*k]);
        }
        s / Cyclo::from_int(dim)
    }

    pub fn to_json(&self, g: &ReflectionGroup) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for (k, c) in &self.coefficients {
            if !c.is_zero() {
                m.insert(class_name(g, *k), serde_json::Value::String(c.to_string()));
            }
        }
        serde_json::Value::Object(m)
    }
}

/// Reflection class name, or "[w]" with a representative word for other classes.
pub fn class_name(g: &ReflectionGroup, k: usize) -> String {
    if let Some((_, name)) = g.reflection_classes.iter().find(|(c, _)| *c == k) {
        return name.clone();
    }
    let rep = g.classes[k][0];
    if rep == 0 {
        return "1".into();
    }
    let word: Vec<String> = g.words[rep].iter().map(|i| format!("s{}", i + 1)).collect();
    format!("[{}]", word.join(""))
}

/// Ω_{W,c} = Σ_s 2c_s/(1-λ_s) s for a class-indexed parameter.
pub fn omega_w(g: &ReflectionGroup, c: &[Cyclo]) -> ClassFunction {
    let mut out = ClassFunction::default();
    for (k, _) in &g.reflection_classes {
        let s = g.classes[*k][0];
        let lam = &g.reflection(s).unwrap().lambda;
        let v = &(&Cyclo::from_int(2) * &c[*k]) / &(&Cyclo::one() - lam);
        add_term(&mut out.coefficients, *k, v);
    }
    out
}

/// N_c(σ), the scalar of Ω_{W,c} on σ.
pub fn casimir_scalar(g: &ReflectionGroup, c: &[Cyclo], sigma: &str) -> Result<Cyclo> {
    let i = g.irrep_index(sigma)?;
    Ok(omega_w(g, c).scalar_on(g, i))
}

/// Output of the symbolic check of 𝒟².
#[derive(Clone, Debug)]
pub struct DiracSquareReport {
    pub equality: bool,
    pub square: TElem,
    pub omega_h: HElem,
    pub kappa1: CElem,
    /// Σ_{w ≠ 1} w ⊗ (κ_w/2 - e_w).
    pub omega_w_term: TElem,
    /// The same term assembled as Δ(Ω_{W,c}) from the pin elements (Cherednik only).
    pub omega_w: Option<ClassFunction>,
    pub delta_matches: Option<bool>,
}

/// Decomposition z = Δ(s) + d(b).
#[derive(Clone, Debug)]
pub struct KernelDecomposition {
    pub s: ClassFunction,
    pub b: TElem,
    pub unknowns: usize,
}

pub const DEFAULT_UNKNOWN_LIMIT: usize = 6000;

pub struct Dirac<'a> {
    pub family: &'a FormFamily,
    pub cl: Clifford,
    pub pin: Option<PinSection>,
    dirac: TElem,
    right_memo: RefCell<HashMap<(HKey, usize), HElem>>,
}

impl<'a> Dirac<'a> {
    pub fn new(family: &'a FormFamily) -> Result<Self> {
        let cl = Clifford::for_family(family);
        let pin = if matches!(family.preset, Preset::Cherednik { .. }) {
            Some(PinSection::new(family.group(), &cl)?)
        } else {
            None
        };
        let dual = family.dual_basis();
        let mut dirac = TElem::zero();
        for (a, da) in dual.iter().enumerate() {
            dirac = dirac.add(&TElem::tensor(&family.gen(a), &cl.vector(da)));
        }
        Ok(Dirac {
            family,
            cl,
            pin,
            dirac,
            right_memo: RefCell::new(HashMap::new()),
        })
    }

    pub fn group(&self) -> &ReflectionGroup {
        self.family.group()
    }

    /// 𝒟 = Σ_a v_a ⊗ v^a.
    pub fn dirac(&self) -> &TElem {
        &self.dirac
    }

    /// 𝒟_x = Σ x_i ⊗ y_i, the part with left-block 𝐇 factor.
    pub fn dirac_x(&self) -> TElem {
        self.block_part(true)
    }

    pub fn dirac_y(&self) -> TElem {
        self.block_part(false)
    }

    fn block_part(&self, left: bool) -> TElem {
        TElem {
            terms: self
                .dirac
                .terms
                .iter()
                .filter(|((k, _), _)| (k.left.iter().sum::<u32>() > 0) == left)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn one(&self) -> TElem {
        TElem::tensor(&self.family.one(), &CElem::one())
    }

    pub fn h_part(&self, h: &HElem) -> TElem {
        TElem::tensor(h, &CElem::one())
    }

    pub fn c_part(&self, c: &CElem) -> TElem {
        TElem::tensor(&self.family.one(), c)
    }

    fn h_mul(&self, a: &HElem, b: &HElem) -> HElem {
        // right factor a single generator: use the memo
        if b.terms.len() == 1 {
            let (bk, bc) = b.terms.iter().next().unwrap();
            if bk.w == 0 && bk.degree() == 1 {
                let nl = self.family.n_left();
                let g = bk
                    .left
                    .iter()
                    .position(|&e| e == 1)
                    .or_else(|| bk.right.iter().position(|&e| e == 1).map(|i| i + nl))
                    .unwrap();
                let mut out = HElem::zero();
                for (k, c) in &a.terms {
                    out.add_assign_scaled(&self.right_mul_gen(k, g), &(c * bc));
                }
                return out;
            }
        }
        self.family.mul(a, b)
    }

    fn right_mul_gen(&self, key: &HKey, g: usize) -> HElem {
        let mk = (key.clone(), g);
        if let Some(v) = self.right_memo.borrow().get(&mk) {
            return v.clone();
        }
        let out = self.family.left_mul_key(key, &self.family.gen(g));
        self.right_memo.borrow_mut().insert(mk, out.clone());
        out
    }

    pub fn mul(&self, a: &TElem, b: &TElem) -> TElem {
        let am = a.by_mask();
        let bm = b.by_mask();
        let mut out = TElem::zero();
        for (ma, ha) in &am {
            for (mb, hb) in &bm {
                let c = self.cl.mul(&CElem::monomial(*ma), &CElem::monomial(*mb));
                if c.is_zero() {
                    continue;
                }
                let h = self.h_mul(ha, hb);
                if h.is_zero() {
                    continue;
                }
                out = out.add(&TElem::tensor(&h, &c));
            }
        }
        out
    }

    /// Δ(w) = w ⊗ τ_w.
    pub fn delta(&self, w: usize) -> Result<TElem> {
        let pin = self.pin.as_ref().ok_or_else(|| {
            Error::UnsupportedField("the diagonal embedding needs the Cherednik pin elements".into())
        })?;
        Ok(TElem::tensor(&self.family.group_elem(w), pin.get(w)?))
    }

    pub fn delta_class(&self, s: &ClassFunction) -> Result<TElem> {
        let g = self.group();
        let mut out = TElem::zero();
        for (k, c) in &s.coefficients {
            for &w in &g.classes[*k] {
                out.add_assign_scaled(&self.delta(w)?, c);
            }
        }
        Ok(out)
    }

    /// d(a) = 𝒟a - ε(a)𝒟.
    pub fn d(&self, a: &TElem) -> TElem {
        self.mul(&self.dirac, a).sub(&self.mul(&a.eps(), &self.dirac))
    }

    /// Ω̃_𝐇 = Ω_𝐇 ⊗ 1 - 1 ⊗ κ_1/2.
    pub fn omega_tilde(&self) -> Result<TElem> {
        let omega = self.family.casimir_omega()?;
        let k1 = self.cl.chevalley_lift(self.family, 0).scale(&Cyclo::from_frac(1, 2));
        Ok(self.h_part(&omega).sub(&self.c_part(&k1)))
    }

    /// 𝒟² against -Ω_𝐇⊗1 + 1⊗κ_1/2 + Σ_{w≠1} w⊗(κ_w/2 - e_w); for Cherednik
    /// families the last sum is also compared with Δ(Ω_{W,c}).
    pub fn verify_dirac_square(&self) -> Result<DiracSquareReport> {
        let f = self.family;
        let square = self.mul(&self.dirac, &self.dirac);
        let omega_h = f.casimir_omega()?;
        let half = Cyclo::from_frac(1, 2);
        let kappa1 = self.cl.chevalley_lift(f, 0);
        let mut omega_w_term = TElem::zero();
        for w in f.data.support() {
            if w == 0 {
                continue;
            }
            let e = f.compute_e_w(w)?;
            let cw = self
                .cl
                .chevalley_lift(f, w)
                .scale(&half)
                .sub(&CElem::scalar(e));
            omega_w_term = omega_w_term.add(&TElem::tensor(&f.group_elem(w), &cw));
        }
        let rhs = self
            .h_part(&omega_h)
            .scale(&Cyclo::from_int(-1))
            .add(&self.c_part(&kappa1.scale(&half)))
            .add(&omega_w_term);
        let (omega_w_cf, delta_matches) = match &f.preset {
            Preset::Cherednik { c, .. } => {
                let ow = omega_w(self.group(), c);
                let assembled = self.delta_class(&ow)?;
                (Some(ow), Some(assembled == omega_w_term))
            }
            _ => (None, None),
        };
        Ok(DiracSquareReport {
            equality: square == rhs && delta_matches != Some(false),
            square,
            omega_h,
            kappa1,
            omega_w_term,
            omega_w: omega_w_cf,
            delta_matches,
        })
    }

    /// Total ℤ-degree of a basis tensor: x ↦ +1, y ↦ -1 in both factors.
    fn sector(&self, key: &TKey) -> i64 {
        let f = self.family;
        if 2 * f.n_left() != f.dim() {
            return 0;
        }
        let h: i64 = key.0.left.iter().map(|&a| a as i64).sum::<i64>()
            - key.0.right.iter().map(|&a| a as i64).sum::<i64>();
        let mut c = 0;
        for g in 0..self.cl.ngen {
            if key.1 >> g & 1 == 1 {
                c += if g % 2 == 0 { 1 } else { -1 };
            }
        }
        h + c
    }

    /// Check that z commutes with every Δ(s).
    pub fn is_diagonal_invariant(&self, z: &TElem) -> Result<bool> {
        let g = self.group();
        for r in &g.reflections {
            let dw = self.delta(r.element)?;
            if self.mul(&dw, z) != self.mul(z, &dw) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Average of Δ(w) b Δ(w)⁻¹ over W.
    pub fn average(&self, b: &TElem) -> Result<TElem> {
        let g = self.group();
        let mut out = TElem::zero();
        for w in 0..g.order() {
            let conj = self.mul(&self.mul(&self.delta(w)?, b), &self.delta(g.inverse[w])?);
            out = out.add(&conj);
        }
        Ok(out.scale(&Cyclo::from_frac(1, g.order() as i64)))
    }

    /// Solve z = Δ(s) + d(b) with b of filtration degree ≤ degree_cap + 1.
    pub fn decompose_kernel_element(
        &self,
        z: &TElem,
        degree_cap: u32,
        unknown_limit: usize,
    ) -> Result<KernelDecomposition> {
        if !z.is_even() {
            return Err(Error::Precondition("kernel element must have even Clifford parity".into()));
        }
        if z.degree() > degree_cap {
            return Err(Error::Precondition(format!(
                "filtration degree {} exceeds the cap {}",
                z.degree(),
                degree_cap
            )));
        }
        if !self.is_diagonal_invariant(z)? {
            return Err(Error::Precondition("element is not invariant under the diagonal W action".into()));
        }
        if !self.family.t().is_zero() {
            let om = self.omega_tilde()?;
            if self.mul(&om, z) != self.mul(z, &om) {
                return Err(Error::Precondition("element does not commute with Ω̃_𝐇".into()));
            }
        }
        if !self.d(z).is_zero() {
            return Err(Error::NotInKernel);
        }
        let g = self.group();
        let mut sectors: BTreeSet<i64> = z.terms.keys().map(|k| self.sector(k)).collect();
        sectors.insert(0);

        // odd unknowns b_j sorted into sectors
        let f = self.family;
        let nl = f.n_left();
        let nr = f.dim() - nl;
        let mut unknowns: Vec<TKey> = Vec::new();
        for deg in 0..=degree_cap + 1 {
            for dl in 0..=deg {
                for l in monomials(nl, dl) {
                    for r in monomials(nr, deg - dl) {
                        for w in 0..g.order() {
                            let key = HKey { left: l.clone(), w, right: r.clone() };
                            for mask in 0u32..(1 << self.cl.ngen) {
                                if mask.count_ones() % 2 == 0 {
                                    continue;
                                }
                                let tk = (key.clone(), mask);
                                if sectors.contains(&self.sector(&tk)) {
                                    unknowns.push(tk);
                                }
                            }
                        }
                    }
                }
            }
        }
        if unknowns.len() > unknown_limit {
            return Err(Error::SolverOverflow {
                unknowns: unknowns.len(),
                limit: unknown_limit,
            });
        }

        let mut index: HashMap<TKey, usize> = HashMap::new();
        let mut to_sparse = |t: &TElem| -> SparseVec {
            let mut v = SparseVec::new();
            for (k, c) in &t.terms {
                let n = index.len();
                let i = *index.entry(k.clone()).or_insert(n);
                v.insert(i, c.clone());
            }
            v
        };
        let nclasses = g.classes.len();
        let mut delta_ech = Echelon::new();
        let mut ech = Echelon::new();
        for k in 0..nclasses {
            let col = to_sparse(&self.delta_class(&ClassFunction::class_sum(k))?);
            delta_ech.insert(&col);
            ech.insert(&col);
        }
        let mut image_ech = Echelon::new();
        for u in &unknowns {
            let mut b = TElem::zero();
            b.terms.insert(u.clone(), Cyclo::one());
            let col = to_sparse(&self.d(&b));
            image_ech.insert(&col);
            ech.insert(&col);
        }
        if delta_ech.rank() + image_ech.rank() != ech.rank() {
            return Err(Error::Precondition(format!(
                "Δ(ℂ[W]^W) meets the image of d: ranks {} + {} ≠ {}",
                delta_ech.rank(),
                image_ech.rank(),
                ech.rank()
            )));
        }
        let target = to_sparse(z);
        let combo = ech.express(&target).ok_or_else(|| {
            Error::Precondition(format!(
                "no decomposition with filtration degree ≤ {}",
                degree_cap + 1
            ))
        })?;
        let mut s = ClassFunction::default();
        let mut b = TElem::zero();
        for (j, c) in combo {
            if j < nclasses {
                add_term(&mut s.coefficients, j, c);
            } else {
                add_term(&mut b.terms, unknowns[j - nclasses].clone(), c);
            }
        }
        let b = self.average(&b)?;
        Ok(KernelDecomposition {
            s,
            b,
            unknowns: unknowns.len(),
        })
    }

    /// The projection ζ onto ℂ[W]^W.
    pub fn zeta(&self, z: &TElem, degree_cap: u32) -> Result<ClassFunction> {
        Ok(self.decompose_kernel_element(z, degree_cap, DEFAULT_UNKNOWN_LIMIT)?.s)
    }
}
