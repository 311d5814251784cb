//! Dense and sparse exact linear algebra over [`Cyclo`].

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use crate::scalar::Cyclo;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Cyclo>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Cyclo::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Cyclo::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Cyclo>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Cyclo::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn scalar(n: usize, v: &Cyclo) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = v.clone();
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclo {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclo) {
        self.data[i * self.cols + j] = v;
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Cyclo {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Cyclo] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Cyclo> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Cyclo::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn conj(&self) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Cyclo::conj).collect(),
        }
    }

    pub fn scale(&self, s: &Cyclo) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn trace(&self) -> Cyclo {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, v: &[Cyclo]) -> Vec<Cyclo> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Cyclo::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut out = Mat::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, cols)
    }

    pub fn from_cols(rows: usize, cols: &[Vec<Cyclo>]) -> Mat {
        let mut out = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                out.set(i, j, v.clone());
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let rv = m.get(r, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * rv);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Cyclo>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Cyclo::zero(); self.cols];
                v[f] = Cyclo::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f);
                }
                v
            })
            .collect()
    }

    /// Kernel vectors as columns of a matrix.
    pub fn kernel_mat(&self) -> Mat {
        Mat::from_cols(self.cols, &self.kernel())
    }

    /// Basis of the column space, as the pivot columns.
    pub fn column_basis(&self) -> Mat {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }

    pub fn det(&self) -> Cyclo {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Cyclo::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Cyclo::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(r.submatrix(&(0..n).collect::<Vec<_>>(), &cols))
    }

    /// Some solution x of self·x = b, if one exists.
    pub fn solve(&self, b: &[Cyclo]) -> Option<Vec<Cyclo>> {
        let bm = Mat::from_cols(self.rows, &[b.to_vec()]);
        let (r, pivots) = self.hstack(&bm).rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Cyclo::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

pub type SparseVec = BTreeMap<usize, Cyclo>;

/// `acc += f·v` on sparse vectors, dropping zeros.
pub fn axpy(acc: &mut SparseVec, f: &Cyclo, v: &SparseVec) {
    for (k, x) in v {
        let d = f * x;
        match acc.get_mut(k) {
            Some(e) => {
                *e += &d;
                if e.is_zero() {
                    acc.remove(k);
                }
            }
            None => {
                if !d.is_zero() {
                    acc.insert(*k, d);
                }
            }
        }
    }
}

/// Incremental row echelon basis of a span of sparse vectors. Each stored
/// row remembers which combination of inserted vectors produced it.
#[derive(Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, usize>,
    rows: Vec<SparseVec>,
    combos: Vec<SparseVec>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduce `v` against the stored rows. Returns the remainder and the
    /// combination c of inserted vectors with v - remainder = Σ c_j input_j.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut combo = SparseVec::new();
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .find(|(k, _)| self.pivots.contains_key(k))
                .map(|(k, x)| (*k, x.clone()));
            let Some((col, coef)) = next else { break };
            let r = self.pivots[&col];
            axpy(&mut v, &(-&coef), &self.rows[r]);
            axpy(&mut combo, &coef, &self.combos[r]);
            cursor = col + 1;
        }
        (v, combo)
    }

    /// Insert a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (rem, combo) = self.reduce(v);
        let Some((&col, lead)) = rem.iter().next() else {
            return false;
        };
        let inv = lead.inv();
        let mut row = SparseVec::new();
        axpy(&mut row, &inv, &rem);
        let mut c = SparseVec::new();
        c.insert(idx, inv.clone());
        axpy(&mut c, &(-&inv), &combo);
        self.pivots.insert(col, self.rows.len());
        self.rows.push(row);
        self.combos.push(c);
        true
    }

    /// Coefficients expressing `v` in the inserted vectors, if it lies in the span.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rem, combo) = self.reduce(v);
        rem.is_empty().then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(k, v)| (k, Cyclo::from_int(v))).collect()
    }

    #[test]
    fn echelon_tracks_combinations() {
        let mut e = Echelon::new();
        assert!(e.insert(&sv(&[(0, 1), (1, 1)])));
        assert!(e.insert(&sv(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&sv(&[(0, 1), (2, -1)])));
        let target = sv(&[(0, 2), (1, 3), (2, 1)]);
        let combo = e.express(&target).unwrap();
        assert_eq!(combo.get(&0), Some(&Cyclo::from_int(2)));
        assert_eq!(combo.get(&1), Some(&Cyclo::from_int(1)));
        assert!(e.express(&sv(&[(3, 1)])).is_none());
    }

    #[test]
    fn det_and_inverse() {
        let m = Mat::from_ints(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.det(), Cyclo::from_int(1));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat::identity(2));
        assert_eq!(Mat::from_ints(&[&[1, 2], &[2, 4]]).rank(), 1);
    }
}
