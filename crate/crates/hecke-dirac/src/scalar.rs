//! Exact arithmetic in cyclotomic fields.
//!
//! An element of Q(ζ_N) is stored in the power basis 1, ζ, …, ζ^{φ(N)-1}
//! reduced modulo Φ_N. Rationals always carry conductor 1, and conductors
//! of the form 2m with m odd are rewritten to m, so the only conductors
//! in use are 1, odd numbers and multiples of 4.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

#[derive(Clone, Debug)]
pub struct Cyclo {
    n: u32,
    c: Vec<BigRational>,
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div(&num, &cyclotomic_poly(d));
        }
    }
    let p = Arc::new(num);
    cyclotomic_cache().lock().unwrap().insert(n, p.clone());
    p
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut q = vec![0i64; r.len() - dd];
    for i in (0..q.len()).rev() {
        let coef = r[i + dd] / lead;
        q[i] = coef;
        for (j, &d) in den.iter().enumerate() {
            r[i + j] -= coef * d;
        }
    }
    debug_assert!(r.iter().all(|&v| v == 0));
    q
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

fn canonical_conductor(n: u32) -> u32 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

/// Reduce a dense polynomial (coefficient of ζ^i at index i) modulo Φ_n.
fn reduce_dense(mut p: Vec<BigRational>, n: u32) -> Vec<BigRational> {
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    if p.len() > d {
        for i in (d..p.len()).rev() {
            if p[i].is_zero() {
                continue;
            }
            let coef = std::mem::replace(&mut p[i], BigRational::zero());
            for (j, &pj) in phi.iter().enumerate().take(d) {
                if pj != 0 {
                    p[i - d + j] -= &coef * BigRational::from_integer(BigInt::from(pj));
                }
            }
        }
        p.truncate(d);
    }
    p.resize(d, BigRational::zero());
    p
}

/// Reduce a sparse polynomial with integer exponents modulo Φ_n.
pub fn reduce(poly: &[(i64, BigRational)], n: u32) -> Cyclo {
    assert!(n >= 1);
    let mut dense = vec![BigRational::zero(); n as usize];
    for (e, q) in poly {
        let k = e.rem_euclid(n as i64) as usize;
        dense[k] += q;
    }
    Cyclo::from_dense(n, dense)
}

impl Cyclo {
    pub fn zero() -> Self {
        Cyclo { n: 1, c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_frac(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        if q.is_zero() {
            Self::zero()
        } else {
            Cyclo { n: 1, c: vec![q] }
        }
    }

    /// ζ_n^e with ζ_n = exp(2πi/n).
    pub fn zeta(n: u32, e: i64) -> Self {
        reduce(&[(e, BigRational::one())], n)
    }

    /// Build from a polynomial of degree < n (or any length) in ζ_n.
    fn from_dense(n: u32, dense: Vec<BigRational>) -> Self {
        let reduced = reduce_dense(dense, n);
        Self::normalize(n, reduced)
    }

    fn normalize(n: u32, c: Vec<BigRational>) -> Self {
        if c.iter().skip(1).all(Zero::is_zero) {
            return match c.into_iter().next() {
                Some(q) => Self::from_rational(q),
                None => Self::zero(),
            };
        }
        let m = canonical_conductor(n);
        if m != n {
            // ζ_{2m} = -ζ_m^{(m+1)/2}
            let half = (m as i64 + 1) / 2;
            let terms: Vec<(i64, BigRational)> = c
                .into_iter()
                .enumerate()
                .filter(|(_, q)| !q.is_zero())
                .map(|(e, q)| {
                    let q = if e % 2 == 1 { -q } else { q };
                    (e as i64 * half, q)
                })
                .collect();
            return reduce(&terms, m);
        }
        Cyclo { n, c }
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Power-basis coefficients; empty for zero.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.n != 1 {
            return None;
        }
        Some(self.c.first().cloned().unwrap_or_else(BigRational::zero))
    }

    /// Small-integer value if rational with denominator 1 and it fits.
    pub fn to_i64(&self) -> Option<i64> {
        let q = self.to_rational()?;
        if q.is_integer() {
            q.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn rational_part_sign(&self) -> Result<Sign> {
        let q = self.to_rational().ok_or(Error::NotRational)?;
        Ok(match q.cmp(&BigRational::zero()) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        })
    }

    /// Rewrite in conductor `m`, which must be a multiple of the current one.
    /// The result is not normalized.
    fn lifted(&self, m: u32) -> Vec<BigRational> {
        if self.n == m {
            let mut c = self.c.clone();
            c.resize(euler_phi(m) as usize, BigRational::zero());
            return c;
        }
        assert!(m.is_multiple_of(self.n), "conductor {} does not divide {}", self.n, m);
        let step = (m / self.n) as usize;
        let mut dense = vec![BigRational::zero(); m as usize];
        for (e, q) in self.c.iter().enumerate() {
            dense[(e * step) % m as usize] += q;
        }
        reduce_dense(dense, m)
    }

    /// Value of this element written over conductor `m` (a multiple of the
    /// conductor). Used when serializing group data over a fixed field.
    pub fn coeffs_in(&self, m: u32) -> Vec<BigRational> {
        if self.is_zero() {
            return vec![BigRational::zero(); euler_phi(m) as usize];
        }
        self.lifted(m)
    }

    /// The Galois automorphism ζ ↦ ζ^k, for k coprime to the conductor.
    pub fn galois(&self, k: i64) -> Self {
        if self.n == 1 {
            return self.clone();
        }
        let terms: Vec<(i64, BigRational)> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(|(e, q)| (e as i64 * k, q.clone()))
            .collect();
        reduce(&terms, self.n)
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if self.n == 1 {
            return Self::from_rational(self.c[0].recip());
        }
        let n = self.n as i64;
        let mut others = Self::one();
        for k in 2..n {
            if k.gcd(&n) == 1 {
                others = &others * &self.galois(k);
            }
        }
        let norm = (self * &others)
            .to_rational()
            .expect("field norm is rational");
        &others * &Self::from_rational(norm.recip())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        if self.n == 1 && other.n == 1 {
            let a = self.c.first().cloned().unwrap_or_else(BigRational::zero);
            let b = other.c.first().cloned().unwrap_or_else(BigRational::zero);
            return Self::from_rational(if sign { a - b } else { a + b });
        }
        let m = lcm(self.n, other.n);
        let mut a = self.lifted(m);
        let b = other.lifted(m);
        for (x, y) in a.iter_mut().zip(b) {
            if sign {
                *x -= y;
            } else {
                *x += y;
            }
        }
        Self::normalize(m, a)
    }
}

impl Default for Cyclo {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.c == other.c;
        }
        if self.n == 1 || other.n == 1 {
            return false;
        }
        (self - other).is_zero()
    }
}

impl Eq for Cyclo {}

impl From<i64> for Cyclo {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<BigRational> for Cyclo {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl<'a> Add<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        self.combine(rhs, false)
    }
}

impl<'a> Sub<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        if rhs.is_zero() {
            return self.clone();
        }
        self.combine(rhs, true)
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        if self.is_zero() || rhs.is_zero() {
            return Cyclo::zero();
        }
        if self.n == 1 && rhs.n == 1 {
            return Cyclo::from_rational(&self.c[0] * &rhs.c[0]);
        }
        if self.n == 1 || rhs.n == 1 {
            let (q, z) = if self.n == 1 { (&self.c[0], rhs) } else { (&rhs.c[0], self) };
            return Cyclo {
                n: z.n,
                c: z.c.iter().map(|v| v * q).collect(),
            };
        }
        let m = lcm(self.n, rhs.n);
        let a = self.lifted(m);
        let b = rhs.lifted(m);
        let mut prod = vec![BigRational::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Cyclo::from_dense(m, prod)
    }
}

impl<'a> Div<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn div(self, rhs: &Cyclo) -> Cyclo {
        if rhs.n == 1 {
            return self * &Cyclo::from_rational(rhs.c[0].recip());
        }
        self * &rhs.inv()
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            n: self.n,
            c: self.c.iter().map(|q| -q).collect(),
        }
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $f(self, rhs: Cyclo) -> Cyclo {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $f(self, rhs: &Cyclo) -> Cyclo {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<Cyclo> for &'a Cyclo {
            type Output = Cyclo;
            fn $f(self, rhs: Cyclo) -> Cyclo {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &Cyclo) {
        if rhs.is_zero() {
            return;
        }
        if self.n == 1 && rhs.n == 1 && !self.is_zero() {
            self.c[0] += &rhs.c[0];
            if self.c[0].is_zero() {
                self.c.clear();
            }
            return;
        }
        *self = &*self + rhs;
    }
}

impl AddAssign<Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: Cyclo) {
        *self += &rhs;
    }
}

impl SubAssign<&Cyclo> for Cyclo {
    fn sub_assign(&mut self, rhs: &Cyclo) {
        *self += &(-rhs);
    }
}

impl SubAssign<Cyclo> for Cyclo {
    fn sub_assign(&mut self, rhs: Cyclo) {
        *self += &(-rhs);
    }
}

impl MulAssign<&Cyclo> for Cyclo {
    fn mul_assign(&mut self, rhs: &Cyclo) {
        *self = &*self * rhs;
    }
}

impl Sum for Cyclo {
    fn sum<I: Iterator<Item = Cyclo>>(iter: I) -> Cyclo {
        let mut acc = Cyclo::zero();
        for v in iter {
            acc += &v;
        }
        acc
    }
}

impl<'a> Sum<&'a Cyclo> for Cyclo {
    fn sum<I: Iterator<Item = &'a Cyclo>>(iter: I) -> Cyclo {
        let mut acc = Cyclo::zero();
        for v in iter {
            acc += v;
        }
        acc
    }
}

impl Product for Cyclo {
    fn product<I: Iterator<Item = Cyclo>>(iter: I) -> Cyclo {
        iter.fold(Cyclo::one(), |a, b| &a * &b)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{}", q);
        }
        write!(f, "cyclo({};", self.n)?;
        let mut first = true;
        for (e, q) in self.c.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            write!(f, "{} {}:{}", if first { "" } else { "," }, e, q)?;
            first = false;
        }
        write!(f, ")")
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{}`", s));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for Cyclo {
    type Err = Error;

    /// Accepts "p", "p/q" and the serialized form "cyclo(N; e:p/q, ...)".
    fn from_str(s: &str) -> Result<Cyclo> {
        let s = s.trim();
        let Some(body) = s.strip_prefix("cyclo(").and_then(|r| r.strip_suffix(')')) else {
            return Ok(Cyclo::from_rational(parse_rational(s)?));
        };
        let (n, terms) = body
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("missing `;` in `{}`", s)))?;
        let n: u32 = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad conductor in `{}`", s)))?;
        if n == 0 {
            return Err(Error::Parse("conductor must be positive".into()));
        }
        let mut poly = Vec::new();
        for t in terms.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (e, q) = t
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad term `{}`", t)))?;
            let e: i64 = e
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent `{}`", e)))?;
            poly.push((e, parse_rational(q)?));
        }
        Ok(reduce(&poly, n))
    }
}

/// Sign of a rational, as used by the positivity tests.
pub fn sign_of(q: &BigRational) -> Sign {
    if q.is_zero() {
        Sign::Zero
    } else if q.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}
