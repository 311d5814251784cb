//! Drinfeld graded Hecke algebras in PBW normal form.
//!
//! V has a basis v_0..v_{d-1}; the first `n_left` vectors form the block
//! written to the left of the group element, the rest the block written
//! to the right. For the Cherednik presets the left block is 𝔥* (x_i) and
//! the right block is 𝔥 (y_i).

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::ReflectionGroup;
use crate::linalg::Mat;
use crate::scalar::Cyclo;

/// Raw family of skew forms, not yet checked.
#[derive(Clone, Debug)]
pub struct FormData {
    pub group: Arc<ReflectionGroup>,
    pub dim: usize,
    pub n_left: usize,
    /// Matrix of each group element on V (columns are images of basis vectors).
    pub action: Vec<Mat>,
    /// a_w(v_i, v_j) = forms[w][(i, j)]; absent means zero.
    pub forms: BTreeMap<usize, Mat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    /// c is indexed by conjugacy class (non-reflection classes carry zero).
    Cherednik { t: Cyclo, c: Vec<Cyclo> },
    GradedAffineHecke { k: Vec<Cyclo>, positive: PositiveSystem },
    Custom(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositiveSystem {
    /// First nonzero coordinate positive.
    Lex,
    /// Last nonzero coordinate positive.
    ReverseLex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwFailure {
    pub condition: u8,
    pub w: usize,
    pub h: Option<usize>,
    pub vectors: Vec<Vec<Cyclo>>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwVerdict {
    pub failures: Vec<PbwFailure>,
}

impl PbwVerdict {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed_conditions(&self) -> Vec<u8> {
        let mut c: Vec<u8> = self.failures.iter().map(|f| f.condition).collect();
        c.sort_unstable();
        c.dedup();
        c
    }
}

fn unit(d: usize, i: usize) -> Vec<Cyclo> {
    let mut v = vec![Cyclo::zero(); d];
    v[i] = Cyclo::one();
    v
}

impl FormData {
    pub fn form(&self, w: usize) -> Option<&Mat> {
        self.forms.get(&w)
    }

    pub fn support(&self) -> Vec<usize> {
        self.forms
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(w, _)| *w)
            .collect()
    }

    /// a_w(u, v) for coordinate vectors.
    pub fn eval(&self, w: usize, u: &[Cyclo], v: &[Cyclo]) -> Cyclo {
        match self.forms.get(&w) {
            None => Cyclo::zero(),
            Some(a) => {
                let av = a.mul_vec(v);
                u.iter().zip(&av).map(|(x, y)| x * y).sum()
            }
        }
    }

    /// Check the three PBW conditions; every failure is reported with a witness.
    pub fn pbw_check(&self) -> PbwVerdict {
        let g = &self.group;
        let d = self.dim;
        let zero = Mat::zeros(d, d);
        let mut failures = Vec::new();

        for (w, a) in &self.forms {
            let skew = &a.transpose() + a;
            if !skew.is_zero() {
                failures.push(PbwFailure {
                    condition: 1,
                    w: *w,
                    h: None,
                    vectors: Vec::new(),
                    detail: "form is not skew-symmetric".into(),
                });
            }
        }

        // (1) a_{h^-1 w h} = Hᵀ a_w H
        for w in 0..g.order() {
            let aw = self.forms.get(&w).unwrap_or(&zero);
            for h in 0..g.order() {
                let conj = g.mul(g.mul(g.inverse[h], w), h);
                let lhs = self.forms.get(&conj).unwrap_or(&zero);
                let hm = &self.action[h];
                let rhs = &(&hm.transpose() * aw) * hm;
                if *lhs == rhs {
                    continue;
                }
                let (i, j) = (0..d)
                    .flat_map(|i| (0..d).map(move |j| (i, j)))
                    .find(|&(i, j)| lhs.get(i, j) != rhs.get(i, j))
                    .unwrap();
                failures.push(PbwFailure {
                    condition: 1,
                    w,
                    h: Some(h),
                    vectors: vec![unit(d, i), unit(d, j)],
                    detail: format!(
                        "a_(h^-1 w h)(v{},v{}) = {} but a_w(h v{}, h v{}) = {}",
                        i,
                        j,
                        lhs.get(i, j),
                        i,
                        j,
                        rhs.get(i, j)
                    ),
                });
                break;
            }
        }

        // (2) ker a_w = V^w of codimension 2
        for w in self.support() {
            if w == 0 {
                continue;
            }
            let a = &self.forms[&w];
            let fixed = (&self.action[w] - &Mat::identity(d)).kernel_mat();
            let ker = a.kernel_mat();
            if fixed.cols + 2 != d {
                failures.push(PbwFailure {
                    condition: 2,
                    w,
                    h: None,
                    vectors: (0..fixed.cols).map(|j| fixed.col(j)).collect(),
                    detail: format!("dim V^w = {}, expected {}", fixed.cols, d as i64 - 2),
                });
                continue;
            }
            let joint = fixed.hstack(&ker).rank();
            if joint != fixed.cols || ker.cols != fixed.cols {
                // a vector in one space but not the other
                let witness = (0..ker.cols)
                    .map(|j| ker.col(j))
                    .find(|v| fixed.hstack(&Mat::from_cols(d, std::slice::from_ref(v))).rank() > fixed.cols)
                    .or_else(|| {
                        (0..fixed.cols)
                            .map(|j| fixed.col(j))
                            .find(|v| a.mul_vec(v).iter().any(|x| !x.is_zero()))
                    })
                    .unwrap_or_default();
                failures.push(PbwFailure {
                    condition: 2,
                    w,
                    h: None,
                    vectors: vec![witness],
                    detail: format!(
                        "radical has dimension {}, V^w has dimension {}",
                        ker.cols, fixed.cols
                    ),
                });
            }
        }

        // (3) det(h | (V^w)^⊥) = 1 for h centralizing w; (V^w)^⊥ = im(1 - w)
        for w in self.support() {
            if w == 0 {
                continue;
            }
            let moved = (&Mat::identity(d) - &self.action[w]).column_basis();
            if moved.cols == 0 {
                continue;
            }
            for h in 0..g.order() {
                if g.mul(h, w) != g.mul(w, h) {
                    continue;
                }
                let img = &self.action[h] * &moved;
                let coords: Vec<Vec<Cyclo>> = (0..moved.cols)
                    .map(|j| moved.solve(&img.col(j)).expect("centralizer preserves im(1-w)"))
                    .collect();
                let det = Mat::from_cols(moved.cols, &coords).det();
                if !det.is_one() {
                    failures.push(PbwFailure {
                        condition: 3,
                        w,
                        h: Some(h),
                        vectors: (0..moved.cols).map(|j| moved.col(j)).collect(),
                        detail: format!("det = {}", det),
                    });
                    break;
                }
            }
        }
        failures.sort_by_key(|f| (f.condition, f.w));
        PbwVerdict { failures }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HKey {
    pub left: Vec<u32>,
    pub w: usize,
    pub right: Vec<u32>,
}

impl HKey {
    pub fn degree(&self) -> u32 {
        self.left.iter().sum::<u32>() + self.right.iter().sum::<u32>()
    }
}

/// Element of the algebra as a sparse sum of PBW monomials x^a · w · y^b.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HElem {
    pub terms: BTreeMap<HKey, Cyclo>,
}

pub(crate) fn add_term<K: Ord>(map: &mut BTreeMap<K, Cyclo>, k: K, c: Cyclo) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl HElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(k: HKey, c: Cyclo) -> Self {
        let mut e = Self::zero();
        add_term(&mut e.terms, k, c);
        e
    }

    pub fn add_assign_scaled(&mut self, other: &HElem, s: &Cyclo) {
        if s.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            add_term(&mut self.terms, k.clone(), c * s);
        }
    }

    pub fn add(&self, other: &HElem) -> HElem {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Cyclo::one());
        out
    }

    pub fn sub(&self, other: &HElem) -> HElem {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Cyclo::from_int(-1));
        out
    }

    pub fn scale(&self, s: &Cyclo) -> HElem {
        let mut out = HElem::zero();
        out.add_assign_scaled(self, s);
        out
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(HKey::degree).max().unwrap_or(0)
    }
}

/// A family that passed the PBW check, with its multiplication engine.
pub struct FormFamily {
    pub data: FormData,
    pub preset: Preset,
    /// Nondegenerate W-invariant symmetric form on V.
    pub pairing: Mat,
    pub pairing_inv: Mat,
    left_commutative: bool,
    gen_memo: RefCell<HashMap<(usize, HKey), HElem>>,
    grp_memo: RefCell<HashMap<(usize, HKey), HElem>>,
}

impl FormFamily {
    pub fn new(data: FormData, preset: Preset, pairing: Mat) -> Result<Self> {
        let verdict = data.pbw_check();
        if !verdict.pass() {
            return Err(Error::NotPbw(verdict.failed_conditions()));
        }
        let d = data.dim;
        let nl = data.n_left;
        let block_commutes = |lo: usize, hi: usize| {
            data.forms
                .values()
                .all(|a| (lo..hi).all(|i| (lo..hi).all(|j| a.get(i, j).is_zero())))
        };
        let left_commutative = block_commutes(0, nl);
        if nl < d && !block_commutes(nl, d) {
            return Err(Error::Precondition(
                "right block generators must commute".into(),
            ));
        }
        for m in &data.action {
            for i in 0..d {
                for j in 0..d {
                    if (i < nl) != (j < nl) && !m.get(i, j).is_zero() {
                        return Err(Error::Precondition(
                            "group action must preserve the left/right split".into(),
                        ));
                    }
                }
            }
            if &(&m.transpose() * &pairing) * m != pairing {
                return Err(Error::Precondition("pairing is not W-invariant".into()));
            }
        }
        let pairing_inv = pairing
            .inverse()
            .ok_or_else(|| Error::Precondition("pairing is degenerate".into()))?;
        Ok(FormFamily {
            data,
            preset,
            pairing,
            pairing_inv,
            left_commutative,
            gen_memo: RefCell::new(HashMap::new()),
            grp_memo: RefCell::new(HashMap::new()),
        })
    }

    pub fn group(&self) -> &ReflectionGroup {
        &self.data.group
    }

    pub fn dim(&self) -> usize {
        self.data.dim
    }

    pub fn n_left(&self) -> usize {
        self.data.n_left
    }

    pub fn one(&self) -> HElem {
        self.group_elem(0)
    }

    pub fn scalar(&self, c: Cyclo) -> HElem {
        HElem::term(self.key(0), c)
    }

    fn key(&self, w: usize) -> HKey {
        HKey {
            left: vec![0; self.data.n_left],
            w,
            right: vec![0; self.data.dim - self.data.n_left],
        }
    }

    pub fn group_elem(&self, w: usize) -> HElem {
        HElem::term(self.key(w), Cyclo::one())
    }

    /// The basis vector v_i as an algebra element.
    pub fn gen(&self, i: usize) -> HElem {
        let mut k = self.key(0);
        let nl = self.data.n_left;
        if i < nl {
            k.left[i] = 1;
        } else {
            k.right[i - nl] = 1;
        }
        HElem::term(k, Cyclo::one())
    }

    /// A vector of V (coordinates) as an algebra element.
    pub fn vector(&self, v: &[Cyclo]) -> HElem {
        let mut out = HElem::zero();
        for (i, c) in v.iter().enumerate() {
            out.add_assign_scaled(&self.gen(i), c);
        }
        out
    }

    /// Left multiplication of a basis monomial by v_g.
    fn left_mul_gen_key(&self, g: usize, key: &HKey) -> HElem {
        let memo_key = (g, key.clone());
        if let Some(v) = self.gen_memo.borrow().get(&memo_key) {
            return v.clone();
        }
        let nl = self.data.n_left;
        let first = key.left.iter().position(|&a| a > 0);
        let out = match first {
            Some(j) if g >= nl || (!self.left_commutative && j < g) => {
                // v_g x_j L' = x_j (v_g L') + Σ_u a_u(v_g, x_j) u L'
                let mut rest = key.clone();
                rest.left[j] -= 1;
                let inner = self.left_mul_gen_key(g, &rest);
                let mut out = self.left_mul_gen(j, &inner);
                for (u, a) in &self.data.forms {
                    let c = a.get(g, j);
                    if !c.is_zero() {
                        out.add_assign_scaled(&self.left_mul_group_key(*u, &rest), c);
                    }
                }
                out
            }
            _ if g < nl => {
                let mut k = key.clone();
                k.left[g] += 1;
                HElem::term(k, Cyclo::one())
            }
            _ => {
                // v_g w R = w · w^{-1}(v_g) · R with the right block commutative
                let winv = self.data.group.inverse[key.w];
                let col = self.data.action[winv].col(g);
                let mut out = HElem::zero();
                for (k, c) in col.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut nk = key.clone();
                    nk.right[k - nl] += 1;
                    add_term(&mut out.terms, nk, c.clone());
                }
                out
            }
        };
        self.gen_memo.borrow_mut().insert(memo_key, out.clone());
        out
    }

    fn left_mul_group_key(&self, u: usize, key: &HKey) -> HElem {
        if u == 0 {
            return HElem::term(key.clone(), Cyclo::one());
        }
        let memo_key = (u, key.clone());
        if let Some(v) = self.grp_memo.borrow().get(&memo_key) {
            return v.clone();
        }
        let out = match key.left.iter().position(|&a| a > 0) {
            None => {
                let mut k = key.clone();
                k.w = self.data.group.mul(u, key.w);
                HElem::term(k, Cyclo::one())
            }
            Some(j) => {
                // u x_j L' = u(x_j) · u L'
                let mut rest = key.clone();
                rest.left[j] -= 1;
                let inner = self.left_mul_group_key(u, &rest);
                let col = self.data.action[u].col(j);
                let mut out = HElem::zero();
                for (k, c) in col.iter().enumerate() {
                    if !c.is_zero() {
                        out.add_assign_scaled(&self.left_mul_gen(k, &inner), c);
                    }
                }
                out
            }
        };
        self.grp_memo.borrow_mut().insert(memo_key, out.clone());
        out
    }

    pub fn left_mul_gen(&self, g: usize, e: &HElem) -> HElem {
        let mut out = HElem::zero();
        for (k, c) in &e.terms {
            out.add_assign_scaled(&self.left_mul_gen_key(g, k), c);
        }
        out
    }

    pub fn left_mul_group(&self, u: usize, e: &HElem) -> HElem {
        let mut out = HElem::zero();
        for (k, c) in &e.terms {
            out.add_assign_scaled(&self.left_mul_group_key(u, k), c);
        }
        out
    }

    /// Left multiplication by a single monomial.
    pub fn left_mul_key(&self, key: &HKey, e: &HElem) -> HElem {
        let nl = self.data.n_left;
        let mut cur = e.clone();
        for (i, &b) in key.right.iter().enumerate().rev() {
            for _ in 0..b {
                cur = self.left_mul_gen(nl + i, &cur);
            }
        }
        cur = self.left_mul_group(key.w, &cur);
        for (i, &a) in key.left.iter().enumerate().rev() {
            for _ in 0..a {
                cur = self.left_mul_gen(i, &cur);
            }
        }
        cur
    }

    pub fn mul(&self, a: &HElem, b: &HElem) -> HElem {
        let mut out = HElem::zero();
        for (k, c) in &a.terms {
            out.add_assign_scaled(&self.left_mul_key(k, b), c);
        }
        out
    }

    pub fn commutator(&self, a: &HElem, b: &HElem) -> HElem {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// Dual basis vectors v^i = Σ_b (B⁻¹)_{b i} v_b as coordinate vectors.
    pub fn dual_basis(&self) -> Vec<Vec<Cyclo>> {
        (0..self.dim()).map(|i| self.pairing_inv.col(i)).collect()
    }

    /// 𝐡 = Σ_i v_i v^i.
    pub fn casimir_h(&self) -> HElem {
        let mut out = HElem::zero();
        for (i, dual) in self.dual_basis().iter().enumerate() {
            out = out.add(&self.mul(&self.gen(i), &self.vector(dual)));
        }
        out
    }

    /// e_w from Σ_i (a_w(x,v_i) w(v^i) + a_w(x,v^i) v_i) = e_w (x - w(x)),
    /// solved for every basis vector x moved by w; all solutions must agree.
    pub fn compute_e_w(&self, w: usize) -> Result<Cyclo> {
        let d = self.dim();
        let dual = self.dual_basis();
        let act = &self.data.action[w];
        let mut value: Option<Cyclo> = None;
        for x in 0..d {
            let ux = unit(d, x);
            let moved: Vec<Cyclo> = ux
                .iter()
                .zip(act.mul_vec(&ux))
                .map(|(a, b)| a - &b)
                .collect();
            let Some(p) = moved.iter().position(|c| !c.is_zero()) else {
                continue;
            };
            let mut lhs = vec![Cyclo::zero(); d];
            for i in 0..d {
                let a1 = self.data.eval(w, &ux, &unit(d, i));
                if !a1.is_zero() {
                    for (l, r) in lhs.iter_mut().zip(act.mul_vec(&dual[i])) {
                        *l += &(&a1 * &r);
                    }
                }
                let a2 = self.data.eval(w, &ux, &dual[i]);
                if !a2.is_zero() {
                    lhs[i] += &a2;
                }
            }
            let e = &lhs[p] / &moved[p];
            let consistent = lhs
                .iter()
                .zip(&moved)
                .all(|(l, m)| *l == &e * m);
            if !consistent {
                return Err(Error::Precondition(format!(
                    "linear identity for e_w has no solution at w = {}",
                    w
                )));
            }
            match &value {
                None => value = Some(e),
                Some(v) if *v != e => {
                    return Err(Error::Precondition(format!(
                        "e_w depends on the witness at w = {}",
                        w
                    )))
                }
                _ => {}
            }
        }
        value.ok_or(Error::DegenerateWitness(w))
    }

    /// Ω_𝐇 = 𝐡 - Σ_{w ∈ W(𝐚)∖1} e_w w.
    pub fn casimir_omega(&self) -> Result<HElem> {
        let mut out = self.casimir_h();
        for w in self.data.support() {
            if w == 0 {
                continue;
            }
            let e = self.compute_e_w(w)?;
            out.add_assign_scaled(&self.group_elem(w), &(-e));
        }
        Ok(out)
    }

    /// 𝐣(x) = Σ_i a_1(x, v_i) v^i for a basis vector x.
    pub fn j_map(&self, x: usize) -> Vec<Cyclo> {
        let d = self.dim();
        let dual = self.dual_basis();
        let mut out = vec![Cyclo::zero(); d];
        for (i, di) in dual.iter().enumerate() {
            let a = self.data.eval(0, &unit(d, x), &unit(d, i));
            if !a.is_zero() {
                for (o, v) in out.iter_mut().zip(di) {
                    *o += &(&a * v);
                }
            }
        }
        out
    }

    /// Evaluate the class-function parameter c_s of the Cherednik preset.
    pub fn c_of(&self, s: usize) -> Cyclo {
        match &self.preset {
            Preset::Cherednik { c, .. } => c[self.group().class_of[s]].clone(),
            _ => Cyclo::zero(),
        }
    }

    pub fn t(&self) -> Cyclo {
        match &self.preset {
            Preset::Cherednik { t, .. } => t.clone(),
            _ => Cyclo::zero(),
        }
    }

    /// Total Z-grading: +1 on the left block, -1 on the right block.
    pub fn grading(&self, i: usize) -> i64 {
        if i < self.n_left() {
            1
        } else {
            -1
        }
    }
}

pub mod presets;
