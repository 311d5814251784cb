//! Clifford algebra C(V) with v·v' + v'·v = -2⟨v,v'⟩, the spin module on
//! ⋀𝔥, and the pin elements τ_w.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::group::ReflectionGroup;
use crate::linalg::Mat;
use crate::pbw::{add_term, FormFamily};
use crate::scalar::Cyclo;

/// Sparse sum of ordered square-free monomials, keyed by generator bitmask.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CElem {
    pub terms: BTreeMap<u32, Cyclo>,
}

impl CElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: Cyclo) -> Self {
        let mut e = Self::zero();
        add_term(&mut e.terms, 0, c);
        e
    }

    pub fn one() -> Self {
        Self::scalar(Cyclo::one())
    }

    pub fn monomial(mask: u32) -> Self {
        let mut e = Self::zero();
        e.terms.insert(mask, Cyclo::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign_scaled(&mut self, other: &CElem, s: &Cyclo) {
        if s.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            add_term(&mut self.terms, *k, c * s);
        }
    }

    pub fn add(&self, other: &CElem) -> CElem {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Cyclo::one());
        out
    }

    pub fn sub(&self, other: &CElem) -> CElem {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Cyclo::from_int(-1));
        out
    }

    pub fn scale(&self, s: &Cyclo) -> CElem {
        let mut out = CElem::zero();
        out.add_assign_scaled(self, s);
        out
    }

    /// The parity automorphism ε.
    pub fn eps(&self) -> CElem {
        CElem {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if m.count_ones() % 2 == 0 { c.clone() } else { -c }))
                .collect(),
        }
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 1)
    }

    pub fn scalar_part(&self) -> Cyclo {
        self.terms.get(&0).cloned().unwrap_or_default()
    }
}

pub struct Clifford {
    pub ngen: usize,
    /// Gram matrix of the symmetric form on the generators.
    pub gram: Mat,
    /// Clifford generator index of each basis vector of V.
    pub v_to_cl: Vec<usize>,
    memo: RefCell<HashMap<(u32, usize), Vec<(u32, Cyclo)>>>,
}

impl Clifford {
    /// C(V) for a form `pairing` on V, with V basis vector a sent to generator v_to_cl[a].
    pub fn new(pairing: &Mat, v_to_cl: Vec<usize>) -> Self {
        let d = pairing.rows;
        let mut gram = Mat::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                gram.set(v_to_cl[a], v_to_cl[b], pairing.get(a, b).clone());
            }
        }
        Clifford {
            ngen: d,
            gram,
            v_to_cl,
            memo: RefCell::new(HashMap::new()),
        }
    }

    /// For a family: interleaved order x_1 < y_1 < ... when V = 𝔥* ⊕ 𝔥,
    /// the given basis order otherwise.
    pub fn for_family(f: &FormFamily) -> Self {
        let d = f.dim();
        let nl = f.n_left();
        let v_to_cl = if 2 * nl == d {
            (0..d)
                .map(|a| if a < nl { 2 * a } else { 2 * (a - nl) + 1 })
                .collect()
        } else {
            (0..d).collect()
        };
        Self::new(&f.pairing, v_to_cl)
    }

    /// The monomial g_{i1}…g_{ik} times g on the right, in normal form.
    fn right_mul_gen(&self, mask: u32, g: usize) -> Vec<(u32, Cyclo)> {
        if let Some(v) = self.memo.borrow().get(&(mask, g)) {
            return v.clone();
        }
        let bit = 1u32 << g;
        let out = if mask == 0 || (31 - mask.leading_zeros()) < g as u32 {
            vec![(mask | bit, Cyclo::one())]
        } else {
            let hi = (31 - mask.leading_zeros()) as usize;
            let rest = mask & !(1 << hi);
            if hi == g {
                let c = -self.gram.get(g, g);
                if c.is_zero() {
                    vec![]
                } else {
                    vec![(rest, c)]
                }
            } else {
                // A'·hi·g = -(A'·g)·hi - 2G(hi,g)·A'
                let mut acc: BTreeMap<u32, Cyclo> = BTreeMap::new();
                for (m, c) in self.right_mul_gen(rest, g) {
                    add_term(&mut acc, m | (1 << hi), -c);
                }
                let two_g = &Cyclo::from_int(-2) * self.gram.get(hi, g);
                add_term(&mut acc, rest, two_g);
                acc.into_iter().collect()
            }
        };
        self.memo.borrow_mut().insert((mask, g), out.clone());
        out
    }

    pub fn mul(&self, a: &CElem, b: &CElem) -> CElem {
        let mut out = CElem::zero();
        for (mb, cb) in &b.terms {
            // a · (monomial mb)
            let mut cur: BTreeMap<u32, Cyclo> = a.terms.iter().map(|(m, c)| (*m, c * cb)).collect();
            for g in 0..self.ngen {
                if mb >> g & 1 == 0 {
                    continue;
                }
                let mut next = BTreeMap::new();
                for (m, c) in &cur {
                    for (m2, c2) in self.right_mul_gen(*m, g) {
                        add_term(&mut next, m2, c * &c2);
                    }
                }
                cur = next;
            }
            for (m, c) in cur {
                add_term(&mut out.terms, m, c);
            }
        }
        out
    }

    /// A vector of V (in V coordinates) as a Clifford element.
    pub fn vector(&self, v: &[Cyclo]) -> CElem {
        let mut e = CElem::zero();
        for (a, c) in v.iter().enumerate() {
            add_term(&mut e.terms, 1 << self.v_to_cl[a], c.clone());
        }
        e
    }

    pub fn gen(&self, a: usize) -> CElem {
        CElem::monomial(1 << self.v_to_cl[a])
    }

    /// Anti-involution with v^t = -v on generators.
    pub fn transpose(&self, a: &CElem) -> CElem {
        let mut out = CElem::zero();
        for (m, c) in &a.terms {
            let mut cur = CElem::scalar(c.clone());
            for g in (0..self.ngen).rev() {
                if m >> g & 1 == 1 {
                    cur = self.mul(&cur, &CElem::monomial(1 << g).scale(&Cyclo::from_int(-1)));
                }
            }
            out = out.add(&cur);
        }
        out
    }

    /// κ_w = Σ_{a,b} a_w(v_a, v^b) v^a v_b.
    pub fn chevalley_lift(&self, f: &FormFamily, w: usize) -> CElem {
        let d = f.dim();
        let dual = f.dual_basis();
        let mut out = CElem::zero();
        if f.data.form(w).is_none() {
            return out;
        }
        for a in 0..d {
            let mut ua = vec![Cyclo::zero(); d];
            ua[a] = Cyclo::one();
            let va_dual = self.vector(&dual[a]);
            for b in 0..d {
                let coef = f.data.eval(w, &ua, &dual[b]);
                if coef.is_zero() {
                    continue;
                }
                let prod = self.mul(&va_dual, &self.gen(b));
                out.add_assign_scaled(&prod, &coef);
            }
        }
        out
    }

    /// Action of a linear map on V (columns = images) on the generators.
    pub fn act_on_vector(&self, m: &Mat, a: usize) -> CElem {
        self.vector(&m.col(a))
    }
}

/// Spin module ⋀𝔥 for V = 𝔥* ⊕ 𝔥, basis = subsets of {0..n-1} as bitmasks.
pub struct SpinModule {
    pub n: usize,
    /// Matrices of x_i then y_i.
    pub x: Vec<Mat>,
    pub y: Vec<Mat>,
}

impl SpinModule {
    pub fn new(n: usize) -> Self {
        let dim = 1usize << n;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..n {
            let mut ym = Mat::zeros(dim, dim);
            let mut xm = Mat::zeros(dim, dim);
            for mask in 0..dim {
                let below = (mask & ((1 << i) - 1)).count_ones() as i64;
                if mask >> i & 1 == 0 {
                    // y_i ∧ y_I: move y_i past the smaller indices
                    let sign = if below % 2 == 0 { 1 } else { -1 };
                    ym.set(mask | (1 << i), mask, Cyclo::from_int(sign));
                } else {
                    // contraction, position of i in I is below+1 (1-based)
                    let sign = if (below + 1) % 2 == 0 { 2 } else { -2 };
                    xm.set(mask & !(1 << i), mask, Cyclo::from_int(sign));
                }
            }
            x.push(xm);
            y.push(ym);
        }
        SpinModule { n, x, y }
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Wedge degree of a basis vector.
    pub fn degree(mask: usize) -> usize {
        mask.count_ones() as usize
    }

    /// Matrix of Clifford generator g (interleaved order x_1 < y_1 < ...).
    pub fn generator(&self, g: usize) -> &Mat {
        if g.is_multiple_of(2) {
            &self.x[g / 2]
        } else {
            &self.y[g / 2]
        }
    }

    pub fn action(&self, a: &CElem) -> Mat {
        let dim = self.dim();
        let mut out = Mat::zeros(dim, dim);
        for (m, c) in &a.terms {
            let mut cur = Mat::identity(dim);
            for g in 0..2 * self.n {
                if m >> g & 1 == 1 {
                    cur = &cur * self.generator(g);
                }
            }
            out = &out + &cur.scale(c);
        }
        out
    }
}

/// τ_w for every element, built from τ_s = (1-λ)/(2N) α^∨ α + 1 along
/// reflection words; every word is checked to give the same value.
pub struct PinSection {
    pub tau: Vec<CElem>,
}

impl PinSection {
    pub fn new(group: &ReflectionGroup, cl: &Clifford) -> Result<Self> {
        let n = group.n;
        let tau_s = |g: usize| -> CElem {
            let r = group.reflection(g).expect("reflection");
            let mut check = vec![Cyclo::zero(); 2 * n];
            let mut alpha = vec![Cyclo::zero(); 2 * n];
            for i in 0..n {
                check[n + i] = r.alpha_check[i].clone();
                alpha[i] = r.alpha[i].clone();
            }
            let f = &(&Cyclo::one() - &r.lambda) / &(&Cyclo::from_int(2) * &group.root_norm);
            cl.mul(&cl.vector(&check), &cl.vector(&alpha))
                .scale(&f)
                .add(&CElem::one())
        };
        let mut tau: Vec<Option<CElem>> = vec![None; group.order()];
        tau[0] = Some(CElem::one());
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for r in &group.reflections {
                let s = r.element;
                let ws = group.mul(w, s);
                let val = cl.mul(tau[w].as_ref().unwrap(), &tau_s(s));
                match &tau[ws] {
                    None => {
                        tau[ws] = Some(val);
                        queue.push_back(ws);
                    }
                    Some(existing) if *existing != val => {
                        return Err(Error::Precondition(format!(
                            "τ is not well defined on element {}",
                            ws
                        )));
                    }
                    _ => {}
                }
            }
        }
        let tau: Vec<CElem> = tau.into_iter().map(|t| t.expect("connected")).collect();
        Ok(PinSection { tau })
    }

    pub fn get(&self, w: usize) -> Result<&CElem> {
        self.tau.get(w).ok_or(Error::WordRequired)
    }
}
