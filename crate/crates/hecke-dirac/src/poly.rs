//! Commutative polynomials over [`Cyclo`] in a fixed number of variables.

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::Mat;
use crate::scalar::Cyclo;

pub type Exps = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Exps, Cyclo>,
}

/// All exponent vectors of total degree d in n variables, lexicographically
/// decreasing (x_1^d first).
pub fn monomials(n: usize, d: u32) -> Vec<Exps> {
    fn rec(n: usize, d: u32, prefix: &mut Exps, out: &mut Vec<Exps>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

pub fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Cyclo) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Cyclo::one())
    }

    pub fn monomial(e: Exps, c: Cyclo) -> Self {
        let mut p = Self::zero(e.len());
        p.add_term(e, c);
        p
    }

    pub fn linear(coeffs: &[Cyclo]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exps, c: Cyclo) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&Cyclo::from_int(-1)))
    }

    pub fn scale(&self, s: &Cyclo) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if s.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e: Exps = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(self.nvars, Cyclo::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree(e)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| degree(e));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn coeff(&self, e: &[u32]) -> Cyclo {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// Substitute x_i ↦ Σ_j m[j][i] x_j, i.e. column i of `m` is the image
    /// of the i-th variable.
    pub fn substitute(&self, m: &Mat) -> Poly {
        let n = self.nvars;
        let images: Vec<Poly> = (0..n).map(|i| Poly::linear(&m.col(i))).collect();
        let mut cache: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero(n);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (i, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let p = cache
                    .entry((i, a))
                    .or_insert_with(|| images[i].pow(a))
                    .clone();
                t = t.mul(&p);
            }
            out = out.add(&t);
        }
        out
    }

    /// ∂/∂x_i.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c * &Cyclo::from_int(e[i] as i64));
        }
        out
    }

    /// Exact division by a linear form; None if it does not divide.
    pub fn div_linear(&self, l: &[Cyclo]) -> Option<Poly> {
        // pick the last variable with nonzero coefficient as leading
        let lead = (0..l.len()).rev().find(|&i| !l[i].is_zero())?;
        let inv = l[lead].inv();
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((e, c)) = rem
            .terms
            .iter()
            .filter(|(e, _)| e[lead] > 0)
            .max_by(|a, b| (a.0[lead], a.0).cmp(&(b.0[lead], b.0)))
            .map(|(e, c)| (e.clone(), c.clone()))
        {
            let mut f = e.clone();
            f[lead] -= 1;
            let t = Poly::monomial(f, &c * &inv);
            rem = rem.sub(&t.mul(&Poly::linear(l)));
            q = q.add(&t);
        }
        rem.is_zero().then_some(q)
    }

    /// Coordinates in a list of monomials; terms outside the list are dropped.
    pub fn coords(&self, basis: &[Exps]) -> Vec<Cyclo> {
        basis.iter().map(|e| self.coeff(e)).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(i, &a)| {
                        if a == 1 {
                            format!("v{}", i + 1)
                        } else {
                            format!("v{}^{}", i + 1, a)
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    format!("{}", c)
                } else {
                    format!("({})*{}", c, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 3).len(), 4);
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(2, 0), vec![vec![0, 0]]);
    }

    #[test]
    fn divide_by_linear_form() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.mul(&x).sub(&y.mul(&y));
        let q = p.div_linear(&[Cyclo::one(), Cyclo::from_int(-1)]).unwrap();
        assert_eq!(q, x.add(&y));
        assert!(x.div_linear(&[Cyclo::zero(), Cyclo::one()]).is_none());
    }
}
