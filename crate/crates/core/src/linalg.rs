//! Dense linear algebra over a prime field.

use crate::gf::{Fe, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    ncols: usize,
    rows: Vec<Vec<Fe>>,
}

/// Outcome of `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve {
    /// One particular solution.
    Solution(Vec<Fe>),
    /// `y` with `yᵀA = 0` and `yᵀb = 1`.
    Infeasible(Vec<Fe>),
}

#[inline]
fn axpy(field: &PrimeField, dst: &mut [Fe], src: &[Fe], c: Fe, from: usize) {
    // dst -= c * src
    if c.is_zero() {
        return;
    }
    let p = field.p() as u64;
    let nc = p - c.0 as u64;
    for (d, s) in dst[from..].iter_mut().zip(&src[from..]) {
        if s.0 != 0 {
            d.0 = ((d.0 as u64 + nc * s.0 as u64) % p) as u32;
        }
    }
}

fn scale_row(field: &PrimeField, row: &mut [Fe], c: Fe) {
    for v in row.iter_mut() {
        *v = field.mul(*v, c);
    }
}

impl Matrix {
    pub fn zeros(field: PrimeField, nrows: usize, ncols: usize) -> Self {
        Matrix {
            field,
            ncols,
            rows: vec![vec![Fe::ZERO; ncols]; nrows],
        }
    }

    pub fn from_rows(field: PrimeField, rows: Vec<Vec<Fe>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Matrix { field, ncols, rows }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.rows[i][i] = Fe::ONE;
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.rows[i][j] = v;
    }

    pub fn push_row(&mut self, row: Vec<Fe>) {
        assert_eq!(row.len(), self.ncols);
        self.rows.push(row);
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.ncols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                t.rows[j][i] = v;
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        self.rows
            .iter()
            .map(|r| r.iter().zip(x).fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols, other.nrows());
        let t = other.transpose();
        let rows = self.rows.iter().map(|r| t.mul_vec(r)).collect();
        Matrix::from_rows(self.field, rows, other.ncols)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == rows.len() {
                break;
            }
            let Some(sel) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, sel);
            let inv = f.inv(rows[r][c]).expect("nonzero pivot");
            scale_row(&f, &mut rows[r], inv);
            let (head, tail) = rows.split_at_mut(r);
            let (pivot, rest) = tail.split_first_mut().unwrap();
            for other in head.iter_mut().chain(rest.iter_mut()) {
                let k = other[c];
                axpy(&f, other, pivot, k, c);
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        (Matrix::from_rows(f, rows, self.ncols), pivots)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.field, self.ncols);
        for r in &self.rows {
            e.insert(r.clone());
            if e.rank() == self.ncols {
                break;
            }
        }
        e.rank()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Fe>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots, self.ncols)
    }

    pub fn solve(&self, b: &[Fe]) -> Solve {
        assert_eq!(b.len(), self.rows.len());
        let f = self.field;
        let aug_rows: Vec<Vec<Fe>> = self
            .rows
            .iter()
            .zip(b)
            .map(|(r, &bi)| {
                let mut v = r.clone();
                v.push(bi);
                v
            })
            .collect();
        let aug = Matrix::from_rows(f, aug_rows, self.ncols + 1);
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.ncols) {
            // certificate: Aᵀ y = 0, bᵀ y = 1
            let mut rows = self.transpose().rows;
            rows.push(b.to_vec());
            let mut rhs = vec![Fe::ZERO; rows.len()];
            *rhs.last_mut().unwrap() = Fe::ONE;
            let m = Matrix::from_rows(f, rows, self.rows.len());
            match m.solve(&rhs) {
                Solve::Solution(y) => return Solve::Infeasible(y),
                Solve::Infeasible(_) => unreachable!("Fredholm alternative"),
            }
        }
        let mut x = vec![Fe::ZERO; self.ncols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = r.rows[i][self.ncols];
        }
        Solve::Solution(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.rows.len();
        if n != self.ncols {
            return None;
        }
        let aug_rows: Vec<Vec<Fe>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut v = r.clone();
                v.extend((0..n).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }));
                v
            })
            .collect();
        let (r, pivots) = Matrix::from_rows(self.field, aug_rows, 2 * n).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let rows = r.rows.iter().map(|row| row[n..].to_vec()).collect();
        Some(Matrix::from_rows(self.field, rows, n))
    }
}

fn kernel_from_rref(r: &Matrix, pivots: &[usize], ncols: usize) -> Vec<Vec<Fe>> {
    let f = r.field;
    let mut is_pivot = vec![None; ncols];
    for (i, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(i);
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| is_pivot[c].is_none()) {
        let mut v = vec![Fe::ZERO; ncols];
        v[free] = Fe::ONE;
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = f.neg(r.rows[i][free]);
        }
        basis.push(v);
    }
    basis
}

/// Incrementally built row space in echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    ncols: usize,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
    pivot_of_col: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        Echelon {
            field,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_of_col: vec![None; ncols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Reduces `v` against the current basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &mut [Fe]) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let k = v[c];
            if !k.is_zero() {
                axpy(&self.field, v, row, k, c);
            }
        }
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Fe>) -> bool {
        assert_eq!(v.len(), self.ncols);
        self.reduce(&mut v);
        let Some(c) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = self.field.inv(v[c]).expect("nonzero");
        scale_row(&self.field, &mut v, inv);
        // keep earlier rows reduced at the new pivot
        for row in self.rows.iter_mut() {
            let k = row[c];
            if !k.is_zero() {
                axpy(&self.field, row, &v, k, 0);
            }
        }
        self.pivot_of_col[c] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(c);
        true
    }

    pub fn rows(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    /// Basis of the orthogonal complement `{x : row · x = 0 for every row}`.
    pub fn kernel(&self) -> Vec<Vec<Fe>> {
        let f = self.field;
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|&c| self.pivot_of_col[c].is_none()) {
            let mut v = vec![Fe::ZERO; self.ncols];
            v[free] = Fe::ONE;
            for (row, &c) in self.rows.iter().zip(&self.pivots) {
                v[c] = f.neg(row[free]);
            }
            basis.push(v);
        }
        basis
    }

    /// Canonical RREF rows sorted by pivot; equal row spaces give equal output.
    pub fn canonical_rows(&self) -> Vec<Vec<Fe>> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&i| self.pivots[i]);
        idx.into_iter().map(|i| self.rows[i].clone()).collect()
    }

    pub fn pivots_sorted(&self) -> Vec<usize> {
        let mut p = self.pivots.clone();
        p.sort();
        p
    }
}

pub fn dot(field: &PrimeField, a: &[Fe], b: &[Fe]) -> Fe {
    let p = field.p() as u64;
    let mut s = 0u64;
    for (x, y) in a.iter().zip(b) {
        s = (s + x.0 as u64 * y.0 as u64) % p;
    }
    Fe(s as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64, rows: &[&[u32]]) -> Matrix {
        let f = PrimeField::new(p).unwrap();
        let nc = rows[0].len();
        Matrix::from_rows(f, rows.iter().map(|r| r.iter().map(|&v| Fe(v)).collect()).collect(), nc)
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(5, &[&[1, 2, 3], &[0, 1, 4], &[1, 3, 2]]);
        // row3 = row1 + row2
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_and_certificate() {
        let f = PrimeField::new(7).unwrap();
        let a = m(7, &[&[1, 1], &[2, 2]]);
        match a.solve(&[Fe(3), Fe(6)]) {
            Solve::Solution(x) => assert_eq!(a.mul_vec(&x), vec![Fe(3), Fe(6)]),
            _ => panic!(),
        }
        match a.solve(&[Fe(3), Fe(5)]) {
            Solve::Infeasible(y) => {
                let at = a.transpose();
                assert!(at.mul_vec(&y).iter().all(|v| v.is_zero()));
                assert_eq!(dot(&f, &y, &[Fe(3), Fe(5)]), Fe::ONE);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(11, &[&[2, 3, 0], &[1, 0, 5], &[0, 4, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(a.field(), 3));
        assert!(m(3, &[&[1, 2], &[2, 1]]).inverse().is_none());
    }

    #[test]
    fn echelon_canonical() {
        let f = PrimeField::new(3).unwrap();
        let mut e1 = Echelon::new(f, 3);
        e1.insert(vec![Fe(1), Fe(1), Fe(0)]);
        e1.insert(vec![Fe(0), Fe(1), Fe(2)]);
        let mut e2 = Echelon::new(f, 3);
        e2.insert(vec![Fe(1), Fe(2), Fe(2)]);
        e2.insert(vec![Fe(2), Fe(2), Fe(0)]);
        assert_eq!(e1.canonical_rows(), e2.canonical_rows());
        assert!(!e1.insert(vec![Fe(1), Fe(0), Fe(1)]));
    }
}
