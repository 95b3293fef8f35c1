//! Affine maps `k^m -> k^n`, affine subspaces in canonical form, and affine
//! functionals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Fe, PrimeField};
use crate::linalg::{dot, Echelon, Matrix};
use crate::poly::decode;

/// `t ↦ A t + b` with `A` stored as `n` rows of length `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    field: PrimeField,
    matrix: Vec<Vec<Fe>>,
    offset: Vec<Fe>,
    m: usize,
}

impl AffineMap {
    pub fn new(field: PrimeField, matrix: Vec<Vec<Fe>>, offset: Vec<Fe>) -> Result<Self> {
        if matrix.len() != offset.len() {
            return Err(Error::DimensionMismatch {
                expected: offset.len(),
                got: matrix.len(),
            });
        }
        let m = matrix.first().map(Vec::len).unwrap_or(0);
        if matrix.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidInput("ragged affine matrix".into()));
        }
        Ok(AffineMap {
            field,
            matrix,
            offset,
            m,
        })
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let matrix = Matrix::identity(field, n).rows().to_vec();
        AffineMap {
            field,
            matrix,
            offset: vec![Fe::ZERO; n],
            m: n,
        }
    }

    /// The map whose matrix entries and offset are the base-q digits of `code`,
    /// offset first, then the matrix row by row.
    pub fn from_code(field: PrimeField, n: usize, m: usize, code: u64) -> Self {
        let digits = decode(code, n * (m + 1), field.p() as u64);
        let offset = digits[..n].to_vec();
        let matrix = (0..n).map(|i| digits[n + i * m..n + (i + 1) * m].to_vec()).collect();
        AffineMap {
            field,
            matrix,
            offset,
            m,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn source_dim(&self) -> usize {
        self.m
    }

    pub fn target_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn matrix(&self) -> &[Vec<Fe>] {
        &self.matrix
    }

    pub fn offset(&self) -> &[Fe] {
        &self.offset
    }

    pub fn apply(&self, t: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, &b)| f.add(dot(f, row, t), b))
            .collect()
    }

    pub fn linear_part(&self) -> Matrix {
        Matrix::from_rows(self.field, self.matrix.clone(), self.m)
    }

    pub fn is_invertible(&self) -> bool {
        self.m == self.target_dim() && self.linear_part().rank() == self.m
    }

    pub fn is_injective(&self) -> bool {
        self.linear_part().rank() == self.m
    }

    pub fn inverse(&self) -> Option<AffineMap> {
        let inv = self.linear_part().inverse()?;
        let f = &self.field;
        let off: Vec<Fe> = inv.mul_vec(&self.offset).into_iter().map(|v| f.neg(v)).collect();
        Some(AffineMap {
            field: self.field,
            matrix: inv.rows().to_vec(),
            offset: off,
            m: self.m,
        })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        let a = self.linear_part().mul(&inner.linear_part());
        let f = &self.field;
        let off: Vec<Fe> = self
            .linear_part()
            .mul_vec(&inner.offset)
            .into_iter()
            .zip(&self.offset)
            .map(|(x, &b)| f.add(x, b))
            .collect();
        AffineMap {
            field: self.field,
            matrix: a.rows().to_vec(),
            offset: off,
            m: inner.m,
        }
    }

    /// The image as an affine subspace, if the map is injective.
    pub fn image(&self) -> Result<AffineSubspace> {
        let dirs = (0..self.m)
            .map(|j| self.matrix.iter().map(|r| r[j]).collect())
            .collect();
        AffineSubspace::new(self.field, self.offset.clone(), dirs)
    }
}

/// An affine subspace `base + span(basis)`. The basis is the reduced row
/// echelon form of the direction space and the base point is zero at every
/// pivot column, so equal point sets have equal encodings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineSubspace {
    field: PrimeField,
    base: Vec<Fe>,
    basis: Vec<Vec<Fe>>,
}

impl AffineSubspace {
    pub fn new(field: PrimeField, base: Vec<Fe>, dirs: Vec<Vec<Fe>>) -> Result<Self> {
        let n = base.len();
        let mut e = Echelon::new(field, n);
        for d in &dirs {
            if d.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: d.len(),
                });
            }
            if !e.insert(d.clone()) {
                return Err(Error::InvalidInput("direction vectors are dependent".into()));
            }
        }
        Ok(Self::from_echelon(field, base, &e))
    }

    /// Builds from already-canonical data: RREF basis and a base point with
    /// zeros at pivot columns. Not validated.
    pub(crate) fn from_canonical_parts(field: PrimeField, base: Vec<Fe>, basis: Vec<Vec<Fe>>) -> Self {
        AffineSubspace {
            field,
            base,
            basis,
        }
    }

    fn from_echelon(field: PrimeField, mut base: Vec<Fe>, e: &Echelon) -> Self {
        let basis = e.canonical_rows();
        let pivots = e.pivots_sorted();
        for (row, &c) in basis.iter().zip(&pivots) {
            let k = base[c];
            if !k.is_zero() {
                for (b, &r) in base.iter_mut().zip(row) {
                    *b = field.sub(*b, field.mul(k, r));
                }
            }
        }
        AffineSubspace {
            field,
            base,
            basis,
        }
    }

    pub fn point(field: PrimeField, x: Vec<Fe>) -> Self {
        AffineSubspace {
            field,
            base: x,
            basis: Vec::new(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn base(&self) -> &[Fe] {
        &self.base
    }

    pub fn basis(&self) -> &[Vec<Fe>] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).unwrap())
            .collect()
    }

    /// `base + Σ t_i basis_i`.
    pub fn param(&self, t: &[Fe]) -> Vec<Fe> {
        let f = self.field();
        let mut x = self.base.clone();
        for (ti, v) in t.iter().zip(&self.basis) {
            if !ti.is_zero() {
                for (xj, &vj) in x.iter_mut().zip(v) {
                    *xj = f.add(*xj, f.mul(*ti, vj));
                }
            }
        }
        x
    }

    /// All `q^m` points, in code order of the parameter `t`.
    pub fn points(&self) -> Vec<Vec<Fe>> {
        let q = self.field.p() as u64;
        let m = self.dim();
        (0..q.pow(m as u32)).map(|c| self.param(&decode(c, m, q))).collect()
    }

    pub fn to_map(&self) -> AffineMap {
        let n = self.ambient_dim();
        let m = self.dim();
        let matrix = (0..n).map(|i| (0..m).map(|j| self.basis[j][i]).collect()).collect();
        AffineMap {
            field: self.field(),
            matrix,
            offset: self.base.clone(),
            m,
        }
    }

    pub fn contains(&self, x: &[Fe]) -> bool {
        let f = self.field();
        let mut e = Echelon::new(f, self.ambient_dim());
        for b in &self.basis {
            e.insert(b.clone());
        }
        let diff: Vec<Fe> = x.iter().zip(&self.base).map(|(&a, &b)| f.sub(a, b)).collect();
        e.contains(&diff)
    }

    pub fn contains_subspace(&self, other: &AffineSubspace) -> bool {
        if !self.contains(&other.base) {
            return false;
        }
        let f = self.field();
        let mut e = Echelon::new(f, self.ambient_dim());
        for b in &self.basis {
            e.insert(b.clone());
        }
        other.basis.iter().all(|v| e.contains(v))
    }

    /// The span of this subspace and one more direction, if independent.
    pub fn extend(&self, dir: &[Fe]) -> Option<AffineSubspace> {
        let f = self.field();
        let mut e = Echelon::new(f, self.ambient_dim());
        for b in &self.basis {
            e.insert(b.clone());
        }
        if !e.insert(dir.to_vec()) {
            return None;
        }
        Some(Self::from_echelon(f, self.base.clone(), &e))
    }

    /// Re-parameterised copy: new base `param(t0)` and directions `basis·G`
    /// for an invertible `G`. Used to test canonicalisation.
    pub fn reparametrize(&self, t0: &[Fe], g: &Matrix) -> Result<AffineSubspace> {
        let f = self.field();
        let base = self.param(t0);
        let m = self.dim();
        let dirs: Vec<Vec<Fe>> = (0..m)
            .map(|j| {
                let mut v = vec![Fe::ZERO; self.ambient_dim()];
                for i in 0..m {
                    let c = g.get(i, j);
                    for (vk, &bk) in v.iter_mut().zip(&self.basis[i]) {
                        *vk = f.add(*vk, f.mul(c, bk));
                    }
                }
                v
            })
            .collect();
        AffineSubspace::new(f, base, dirs)
    }
}

/// `l(x) = Σ c_i x_i + c_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunctional {
    pub coeffs: Vec<Fe>,
    pub constant: Fe,
}

impl AffineFunctional {
    pub fn linear(coeffs: Vec<Fe>) -> Self {
        AffineFunctional {
            coeffs,
            constant: Fe::ZERO,
        }
    }

    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut c = vec![Fe::ZERO; n];
        c[i] = Fe::ONE;
        Self::linear(c)
    }

    pub fn eval(&self, field: &PrimeField, x: &[Fe]) -> Fe {
        field.add(dot(field, &self.coeffs, x), self.constant)
    }

    /// Value of the linear part on a direction vector.
    pub fn eval_linear(&self, field: &PrimeField, v: &[Fe]) -> Fe {
        dot(field, &self.coeffs, v)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn to_poly(&self, field: PrimeField) -> crate::poly::MultiPoly {
        let n = self.coeffs.len();
        let mut p = crate::poly::MultiPoly::constant(field, n, self.constant);
        for (i, &c) in self.coeffs.iter().enumerate() {
            p.add_term(crate::poly::Monomial::var(n, i), c);
        }
        p
    }
}

/// An affine subspace given by equations `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineEquations {
    pub rows: Vec<(Vec<Fe>, Fe)>,
}

impl AffineEquations {
    pub fn hyperplane(coeffs: Vec<Fe>, b: Fe) -> Self {
        AffineEquations {
            rows: vec![(coeffs, b)],
        }
    }

    pub fn whole() -> Self {
        AffineEquations { rows: Vec::new() }
    }

    pub fn contains(&self, field: &PrimeField, x: &[Fe]) -> bool {
        self.rows.iter().all(|(c, b)| dot(field, c, x) == *b)
    }

    pub fn codim(&self, field: PrimeField, n: usize) -> usize {
        let rows = self.rows.iter().map(|(c, _)| c.clone()).collect();
        Matrix::from_rows(field, rows, n).rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_is_unique() {
        let f = PrimeField::new(5).unwrap();
        let s1 = AffineSubspace::new(
            f,
            vec![Fe(1), Fe(2), Fe(3)],
            vec![vec![Fe(1), Fe(1), Fe(0)], vec![Fe(0), Fe(2), Fe(1)]],
        )
        .unwrap();
        let g = Matrix::from_rows(f, vec![vec![Fe(2), Fe(1)], vec![Fe(3), Fe(3)]], 2);
        let s2 = s1.reparametrize(&[Fe(4), Fe(2)], &g).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1.points().len(), 25);
        for p in s2.points() {
            assert!(s1.contains(&p));
        }
    }

    #[test]
    fn maps_compose_and_invert() {
        let f = PrimeField::new(7).unwrap();
        let a = AffineMap::new(f, vec![vec![Fe(1), Fe(2)], vec![Fe(3), Fe(1)]], vec![Fe(5), Fe(6)]).unwrap();
        let inv = a.inverse().unwrap();
        let id = a.compose(&inv);
        for x in crate::poly::all_points(2, 7) {
            assert_eq!(id.apply(&x), x);
        }
    }
}
