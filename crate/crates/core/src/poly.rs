//! Sparse multivariate polynomials over a prime field.
//!
//! A [`MultiPoly`] is a formal polynomial: exponents are kept as given until
//! [`MultiPoly::reduce_function`] folds them with `x^p = x`. Dense function
//! tables over `k^n` use the code order of [`encode`] (first coordinate most
//! significant), and [`MultiPoly::eval_table`] / [`interpolate_table`] convert
//! between the two representations with one `q x q` transform per axis.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::gf::{DeltaSubgroup, Fe, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Folds exponents with `x^p = x`.
    pub fn reduced(&self, p: u32) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|&e| if e == 0 { 0 } else { (e - 1) % (p - 1) + 1 })
                .collect(),
        )
    }

    pub fn eval(&self, field: &PrimeField, x: &[Fe]) -> Fe {
        let mut acc = Fe::ONE;
        for (&xi, &e) in x.iter().zip(&self.0) {
            if e > 0 {
                acc = field.mul(acc, field.pow(xi, e as u64));
            }
        }
        acc
    }
}

/// All exponent vectors in `n` variables with total degree `<= deg` and every
/// exponent `<= max_exp`, in lexicographic order.
pub fn monomials_up_to(n: usize, deg: u32, max_exp: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, max_exp: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=left.min(max_exp) {
            cur[i] = e;
            rec(i + 1, left - e, max_exp, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, deg, max_exp, &mut cur, &mut out);
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    field: PrimeField,
    n: usize,
    terms: BTreeMap<Monomial, Fe>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[F_{}; n={}]({})", self.field.p(), self.n, self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            match (c.0, vars.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", vars.join("*"))?,
                _ => write!(f, "{}*{}", c, vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl MultiPoly {
    pub fn zero(field: PrimeField, n: usize) -> Self {
        MultiPoly {
            field,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, n: usize, c: Fe) -> Self {
        let mut p = Self::zero(field, n);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn var(field: PrimeField, n: usize, i: usize) -> Self {
        let mut p = Self::zero(field, n);
        p.add_term(Monomial::var(n, i), Fe::ONE);
        p
    }

    pub fn monomial(field: PrimeField, m: Monomial, c: Fe) -> Self {
        let mut p = Self::zero(field, m.0.len());
        p.add_term(m, c);
        p
    }

    /// Builds from `(coefficient, exponents)` pairs; coefficients are reduced
    /// mod p and like terms are combined.
    pub fn from_terms<I>(field: PrimeField, n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Vec<u32>)>,
    {
        let mut p = Self::zero(field, n);
        for (c, e) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: e.len(),
                });
            }
            p.add_term(Monomial(e), field.elem(c));
        }
        Ok(p)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Fe)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Fe {
        self.terms.get(m).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Formal total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn var_degree(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// Homogeneous component of degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> MultiPoly {
        MultiPoly {
            field: self.field,
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Fe) {
        debug_assert_eq!(m.0.len(), self.n);
        if c.is_zero() {
            return;
        }
        let f = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn same_space(&self, other: &MultiPoly) {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.n, other.n, "variable count mismatch");
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.same_space(other);
        let mut r = self.clone();
        for (m, &c) in &other.terms {
            r.add_term(m.clone(), c);
        }
        r
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(self.field.neg(Fe::ONE))
    }

    pub fn scale(&self, c: Fe) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.field, self.n);
        }
        MultiPoly {
            field: self.field,
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, &a)| (m.clone(), self.field.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.same_space(other);
        let mut r = MultiPoly::zero(self.field, self.n);
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                r.add_term(m1.mul(m2), self.field.mul(c1, c2));
            }
        }
        r
    }

    pub fn mul_monomial(&self, m: &Monomial, c: Fe) -> MultiPoly {
        let mut r = MultiPoly::zero(self.field, self.n);
        for (m1, &c1) in &self.terms {
            r.add_term(m1.mul(m), self.field.mul(c1, c));
        }
        r
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.field, self.n, Fe::ONE);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &[Fe]) -> Result<Fe> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    pub fn eval_unchecked(&self, x: &[Fe]) -> Fe {
        let f = &self.field;
        let mut acc = Fe::ZERO;
        for (m, &c) in &self.terms {
            acc = f.add(acc, f.mul(c, m.eval(f, x)));
        }
        acc
    }

    /// Function representative: every exponent folded below p.
    pub fn reduce_function(&self) -> MultiPoly {
        let mut r = MultiPoly::zero(self.field, self.n);
        for (m, &c) in &self.terms {
            r.add_term(m.reduced(self.field.p()), c);
        }
        r
    }

    pub fn is_function_reduced(&self) -> bool {
        let p = self.field.p();
        self.terms.keys().all(|m| m.0.iter().all(|&e| e < p))
    }

    /// Substitutes `x_i -> subs[i]`; all substitutes share one variable count.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<MultiPoly> {
        if subs.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: subs.len(),
            });
        }
        let m = subs.first().map(|s| s.n).unwrap_or(0);
        if subs.iter().any(|s| s.n != m || s.field != self.field) {
            return Err(Error::InvalidInput("substitutes live in different spaces".into()));
        }
        let one = MultiPoly::constant(self.field, m, Fe::ONE);
        let mut powers: Vec<Vec<MultiPoly>> = subs.iter().map(|_| vec![one.clone()]).collect();
        for i in 0..self.n {
            let need = self.var_degree(i) as usize;
            while powers[i].len() <= need {
                let next = powers[i].last().unwrap().mul(&subs[i]);
                powers[i].push(next);
            }
        }
        let mut r = MultiPoly::zero(self.field, m);
        for (mono, &c) in &self.terms {
            let mut t = MultiPoly::constant(self.field, m, c);
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            r = r.add(&t);
        }
        Ok(r)
    }

    /// `P ∘ φ` for an affine map `φ: k^m -> k^n`.
    pub fn restrict(&self, phi: &AffineMap) -> Result<MultiPoly> {
        if phi.target_dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: phi.target_dim(),
            });
        }
        let m = phi.source_dim();
        let subs: Vec<MultiPoly> = (0..self.n)
            .map(|i| {
                let mut g = MultiPoly::constant(self.field, m, phi.offset()[i]);
                for j in 0..m {
                    g.add_term(Monomial::var(m, j), phi.matrix()[i][j]);
                }
                g
            })
            .collect();
        self.compose(&subs)
    }

    /// Places this polynomial's variables at `offset..offset+n` inside `new_n`.
    pub fn embed(&self, new_n: usize, offset: usize) -> MultiPoly {
        assert!(offset + self.n <= new_n);
        let mut r = MultiPoly::zero(self.field, new_n);
        for (m, &c) in &self.terms {
            let mut e = vec![0; new_n];
            e[offset..offset + self.n].copy_from_slice(&m.0);
            r.add_term(Monomial(e), c);
        }
        r
    }

    /// `Δ_h P(x) = P(x + h) - P(x)`.
    pub fn delta(&self, h: &[Fe]) -> Result<MultiPoly> {
        if h.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: h.len(),
            });
        }
        let subs: Vec<MultiPoly> = (0..self.n)
            .map(|i| {
                let mut g = MultiPoly::var(self.field, self.n, i);
                g.add_term(Monomial::one(self.n), h[i]);
                g
            })
            .collect();
        Ok(self.compose(&subs)?.sub(self))
    }

    /// `P̃ = Δ_{h_1} … Δ_{h_d} P` of order `d = deg P`.
    pub fn multilinear_form(&self) -> Result<MultilinearForm> {
        let d = self.degree();
        if d == 0 {
            return Err(Error::Precondition("multilinear form needs degree >= 1".into()));
        }
        self.multilinear_form_order(d as usize)
    }

    /// `Δ_{h_1} … Δ_{h_d} P` as a polynomial in `d*n` variables, block `i`
    /// holding `h_{i+1}`. Fails if the result still depends on the base point,
    /// which happens exactly when `deg P > d`.
    pub fn multilinear_form_order(&self, d: usize) -> Result<MultilinearForm> {
        if d == 0 {
            return Err(Error::Precondition("order must be >= 1".into()));
        }
        let n = self.n;
        let big = (d + 1) * n;
        let xoff = d * n;
        let f = self.field;
        let mut acc = MultiPoly::zero(f, big);
        for omega in 0u32..(1 << d) {
            let subs: Vec<MultiPoly> = (0..n)
                .map(|j| {
                    let mut g = MultiPoly::var(f, big, xoff + j);
                    for i in 0..d {
                        if omega >> i & 1 == 1 {
                            g.add_term(Monomial::var(big, i * n + j), Fe::ONE);
                        }
                    }
                    g
                })
                .collect();
            let term = self.compose(&subs)?;
            // Δ-product sign: the full shift carries +1
            if (d as u32 - omega.count_ones()).is_multiple_of(2) {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
        }
        let mut out = MultiPoly::zero(f, d * n);
        for (m, &c) in &acc.terms {
            if m.0[xoff..].iter().any(|&e| e > 0) {
                return Err(Error::Precondition(format!(
                    "order-{d} difference still depends on the base point (degree {} > {d})",
                    self.degree()
                )));
            }
            out.add_term(Monomial(m.0[..xoff].to_vec()), c);
        }
        Ok(MultilinearForm { d, n, poly: out })
    }

    /// `Σ_{ω ∈ {0,1}^d} (-1)^{|ω|} P(x + ω·h)`; equals `(-1)^d P̃(h)` when
    /// `d = deg P`.
    pub fn alternating_sum_eval(&self, x: &[Fe], hs: &[Vec<Fe>]) -> Result<Fe> {
        if x.len() != self.n || hs.iter().any(|h| h.len() != self.n) {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let f = &self.field;
        let d = hs.len();
        let mut acc = Fe::ZERO;
        let mut pt = vec![Fe::ZERO; self.n];
        for omega in 0u32..(1 << d) {
            pt.copy_from_slice(x);
            for (i, h) in hs.iter().enumerate() {
                if omega >> i & 1 == 1 {
                    for j in 0..self.n {
                        pt[j] = f.add(pt[j], h[j]);
                    }
                }
            }
            let v = self.eval_unchecked(&pt);
            acc = if omega.count_ones() % 2 == 0 {
                f.add(acc, v)
            } else {
                f.sub(acc, v)
            };
        }
        Ok(acc)
    }

    /// Values on all of `k^n` in code order.
    pub fn eval_table(&self) -> Vec<Fe> {
        let q = self.field.p() as usize;
        let n = self.n;
        let size = q.pow(n as u32);
        let red = self.reduce_function();
        let mut table = vec![Fe::ZERO; size];
        for (m, &c) in &red.terms {
            let idx = m.0.iter().fold(0usize, |acc, &e| acc * q + e as usize);
            table[idx] = c;
        }
        let mat: Vec<Vec<Fe>> = (0..q as u32)
            .map(|a| (0..q as u64).map(|j| self.field.pow(Fe(a), j)).collect())
            .collect();
        axis_transform(&self.field, &mut table, n, &mat);
        table
    }
}

/// Applies `mat` (`mat[out][in]`) along every axis of a dense `q^n` table.
fn axis_transform(field: &PrimeField, table: &mut [Fe], n: usize, mat: &[Vec<Fe>]) {
    let q = mat.len();
    let mut buf = vec![Fe::ZERO; q];
    for axis in 0..n {
        let stride = q.pow((n - 1 - axis) as u32);
        let block = stride * q;
        for base in (0..table.len()).step_by(block) {
            for off in 0..stride {
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = table[base + off + i * stride];
                }
                for (o, row) in mat.iter().enumerate() {
                    let mut s = 0u64;
                    for (r, b) in row.iter().zip(&buf) {
                        s += r.0 as u64 * b.0 as u64;
                        if s >= 1 << 62 {
                            s %= field.p() as u64;
                        }
                    }
                    table[base + off + o * stride] = Fe((s % field.p() as u64) as u32);
                }
            }
        }
    }
}

/// The unique function-reduced polynomial taking `values` on `k^n` (code order).
pub fn interpolate_table(field: PrimeField, n: usize, values: &[Fe]) -> Result<MultiPoly> {
    let q = field.p() as usize;
    if values.len() != q.pow(n as u32) {
        return Err(Error::DimensionMismatch {
            expected: q.pow(n as u32),
            got: values.len(),
        });
    }
    let p = field.p() as u64;
    let mat: Vec<Vec<Fe>> = (0..q)
        .map(|j| {
            (0..q as u32)
                .map(|a| {
                    if j == 0 {
                        if a == 0 {
                            Fe::ONE
                        } else {
                            Fe::ZERO
                        }
                    } else {
                        let e = p - 1 - j as u64;
                        let v = if a == 0 {
                            if e == 0 {
                                Fe::ONE
                            } else {
                                Fe::ZERO
                            }
                        } else {
                            field.pow(Fe(a), e)
                        };
                        field.neg(v)
                    }
                })
                .collect()
        })
        .collect();
    let mut table = values.to_vec();
    axis_transform(&field, &mut table, n, &mat);
    let mut poly = MultiPoly::zero(field, n);
    for (idx, &c) in table.iter().enumerate() {
        if !c.is_zero() {
            poly.add_term(Monomial(decode_u32(idx as u64, n, q as u64)), c);
        }
    }
    Ok(poly)
}

/// Interpolates values on an `l`-dimensional grid and reports whether the
/// reduced degree is at most `a`.
pub fn interpolate(field: PrimeField, l: usize, values: &[Fe], a: u32) -> Result<(MultiPoly, bool)> {
    let poly = interpolate_table(field, l, values)?;
    let ok = poly.degree() <= a;
    Ok((poly, ok))
}

/// Code of a point with the first coordinate most significant.
#[inline]
pub fn encode(x: &[Fe], q: u64) -> u64 {
    x.iter().fold(0u64, |acc, v| acc * q + v.0 as u64)
}

pub fn decode(code: u64, n: usize, q: u64) -> Vec<Fe> {
    decode_u32(code, n, q).into_iter().map(Fe).collect()
}

fn decode_u32(mut code: u64, n: usize, q: u64) -> Vec<u32> {
    let mut v = vec![0u32; n];
    for i in (0..n).rev() {
        v[i] = (code % q) as u32;
        code /= q;
    }
    v
}

/// Iterates every point of `k^n` in code order.
pub fn all_points(n: usize, q: u32) -> impl Iterator<Item = Vec<Fe>> {
    let total = (q as u64).pow(n as u32);
    (0..total).map(move |c| decode(c, n, q as u64))
}

/// `Δ^N ⊂ k^N`.
pub fn delta_grid(delta: &DeltaSubgroup, big_n: usize) -> Vec<Vec<Fe>> {
    let m = delta.order() as u64;
    let els = delta.elements();
    (0..m.pow(big_n as u32))
        .map(|c| {
            decode_u32(c, big_n, m)
                .into_iter()
                .map(|i| els[i as usize])
                .collect()
        })
        .collect()
}

/// `{(a_{t_1}, …, a_{t_k}) : t_1 >= … >= t_k}` for distinct points `a_0..a_d`.
pub fn simplex_grid(pts: &[Fe], k: usize) -> Vec<Vec<Fe>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(pts: &[Fe], k: usize, hi: usize, cur: &mut Vec<Fe>, out: &mut Vec<Vec<Fe>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for t in 0..=hi {
            cur.push(pts[t]);
            rec(pts, k, t, cur, out);
            cur.pop();
        }
    }
    if !pts.is_empty() {
        rec(pts, k, pts.len() - 1, &mut cur, &mut out);
    }
    out
}

/// The symmetric `d`-linear form `P̃` stored as a polynomial in `d` blocks of
/// `n` variables; variable `i*n + j` is coordinate `j` of block `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearForm {
    pub d: usize,
    pub n: usize,
    pub poly: MultiPoly,
}

impl MultilinearForm {
    /// Wraps a polynomial after checking it has degree <= 1 in each block.
    pub fn new(d: usize, n: usize, poly: MultiPoly) -> Result<Self> {
        if poly.nvars() != d * n {
            return Err(Error::DimensionMismatch {
                expected: d * n,
                got: poly.nvars(),
            });
        }
        let f = MultilinearForm { d, n, poly };
        if !f.is_multilinear() {
            return Err(Error::InvalidInput("not multilinear in the blocks".into()));
        }
        Ok(f)
    }

    pub fn field(&self) -> PrimeField {
        self.poly.field()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_multilinear(&self) -> bool {
        self.poly.terms().all(|(m, _)| {
            (0..self.d).all(|i| m.0[i * self.n..(i + 1) * self.n].iter().sum::<u32>() == 1)
        })
    }

    pub fn permute_blocks(&self, perm: &[usize]) -> MultilinearForm {
        let (d, n) = (self.d, self.n);
        let mut r = MultiPoly::zero(self.poly.field(), d * n);
        for (m, c) in self.poly.terms() {
            let mut e = vec![0; d * n];
            for i in 0..d {
                e[perm[i] * n..(perm[i] + 1) * n].copy_from_slice(&m.0[i * n..(i + 1) * n]);
            }
            r.add_term(Monomial(e), c);
        }
        MultilinearForm { d, n, poly: r }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.d.saturating_sub(1)).all(|i| {
            let mut perm: Vec<usize> = (0..self.d).collect();
            perm.swap(i, i + 1);
            self.permute_blocks(&perm) == *self
        })
    }

    pub fn eval(&self, blocks: &[Vec<Fe>]) -> Result<Fe> {
        if blocks.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: blocks.len(),
            });
        }
        let flat: Vec<Fe> = blocks.iter().flatten().copied().collect();
        self.poly.eval(&flat)
    }
}

/// A polynomial family `P̄ = (P_1, …, P_c)` on a common space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFamily {
    polys: Vec<MultiPoly>,
}

impl PolyFamily {
    pub fn new(polys: Vec<MultiPoly>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::InvalidInput("empty polynomial family".into()));
        }
        let (f, n) = (polys[0].field(), polys[0].nvars());
        if polys.iter().any(|p| p.field() != f || p.nvars() != n) {
            return Err(Error::InvalidInput("family members live in different spaces".into()));
        }
        Ok(PolyFamily { polys })
    }

    pub fn single(p: MultiPoly) -> Self {
        PolyFamily { polys: vec![p] }
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn field(&self) -> PrimeField {
        self.polys[0].field()
    }

    pub fn nvars(&self) -> usize {
        self.polys[0].nvars()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.polys.iter().map(MultiPoly::degree).collect()
    }

    /// Dimension of the linear span of the members as formal polynomials.
    pub fn span_dimension(&self) -> usize {
        let mut monos: Vec<Monomial> = self
            .polys
            .iter()
            .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
            .collect();
        monos.sort();
        monos.dedup();
        let rows: Vec<Vec<Fe>> = self
            .polys
            .iter()
            .map(|p| monos.iter().map(|m| p.coeff(m)).collect())
            .collect();
        crate::linalg::Matrix::from_rows(self.field(), rows, monos.len()).rank()
    }

    pub fn is_independent(&self) -> bool {
        self.span_dimension() == self.len()
    }

    pub fn eval(&self, x: &[Fe]) -> Vec<Fe> {
        self.polys.iter().map(|p| p.eval_unchecked(x)).collect()
    }

    /// `Σ a_i P_i`.
    pub fn combination(&self, a: &[Fe]) -> MultiPoly {
        let mut r = MultiPoly::zero(self.field(), self.nvars());
        for (p, &c) in self.polys.iter().zip(a) {
            r = r.add(&p.scale(c));
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffineMap;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u64, n: usize, t: &[(i64, &[u32])]) -> MultiPoly {
        MultiPoly::from_terms(f(p), n, t.iter().map(|(c, e)| (*c, e.to_vec()))).unwrap()
    }

    #[test]
    fn eval_examples() {
        let p = poly(5, 2, &[(1, &[1, 1])]);
        assert_eq!(p.eval(&[Fe(2), Fe(3)]).unwrap(), Fe(1));
        assert_eq!(MultiPoly::zero(f(5), 2).eval(&[Fe(4), Fe(1)]).unwrap(), Fe(0));
        let p = poly(3, 2, &[(1, &[2, 0]), (1, &[0, 1])]);
        assert_eq!(p.eval(&[Fe(1), Fe(1)]).unwrap(), Fe(2));
        assert!(p.eval(&[Fe(1)]).is_err());
    }

    #[test]
    fn delta_examples() {
        let p = poly(5, 1, &[(1, &[2])]);
        assert_eq!(p.delta(&[Fe(1)]).unwrap(), poly(5, 1, &[(2, &[1]), (1, &[0])]));
        let p = poly(5, 2, &[(1, &[1, 1])]);
        let (a, b) = (Fe(2), Fe(3));
        assert_eq!(
            p.delta(&[a, b]).unwrap(),
            poly(5, 2, &[(2, &[0, 1]), (3, &[1, 0]), (6, &[0, 0])])
        );
        let p = poly(7, 2, &[(3, &[1, 0]), (5, &[0, 1]), (2, &[0, 0])]);
        let h = [Fe(4), Fe(6)];
        let dp = p.delta(&h).unwrap();
        assert!(dp.is_constant());
        let c = f(7).sub(p.eval(&h).unwrap(), p.eval(&[Fe(0), Fe(0)]).unwrap());
        assert_eq!(dp, MultiPoly::constant(f(7), 2, c));
    }

    #[test]
    fn multilinear_form_examples() {
        let p = poly(5, 2, &[(1, &[1, 1])]);
        let t = p.multilinear_form().unwrap();
        // h_1 h'_2 + h_2 h'_1
        assert_eq!(t.poly, poly(5, 4, &[(1, &[1, 0, 0, 1]), (1, &[0, 1, 1, 0])]));
        assert!(t.is_symmetric() && t.is_multilinear());

        let p = poly(5, 2, &[(1, &[1, 0]), (3, &[0, 1])]);
        assert!(p.multilinear_form_order(2).unwrap().is_zero());

        let p = poly(2, 1, &[(1, &[2])]);
        assert!(p.multilinear_form().unwrap().is_zero());

        let p = poly(5, 1, &[(1, &[3])]);
        assert!(p.multilinear_form_order(2).is_err());
    }

    #[test]
    fn alternating_sum_examples() {
        let fl = f(5);
        let p = poly(5, 1, &[(1, &[1])]);
        let v = p.alternating_sum_eval(&[Fe(3)], &[vec![Fe(2)]]).unwrap();
        assert_eq!(v, fl.neg(Fe(2)));

        let p = poly(5, 2, &[(1, &[1, 1])]);
        let hs = vec![vec![Fe(1), Fe(0)], vec![Fe(0), Fe(1)]];
        for x in all_points(2, 5) {
            assert_eq!(p.alternating_sum_eval(&x, &hs).unwrap(), Fe(1));
        }
        let t = p.multilinear_form().unwrap();
        assert_eq!(t.eval(&hs).unwrap(), Fe(1));

        let p = poly(5, 2, &[(1, &[1, 0]), (2, &[0, 1])]);
        assert_eq!(p.alternating_sum_eval(&[Fe(1), Fe(2)], &hs).unwrap(), Fe(0));
    }

    #[test]
    fn restrict_examples() {
        let fl = f(5);
        let p = poly(5, 2, &[(1, &[1, 1])]);
        let diag = AffineMap::new(fl, vec![vec![Fe(1)], vec![Fe(1)]], vec![Fe(0), Fe(0)]).unwrap();
        assert_eq!(p.restrict(&diag).unwrap(), poly(5, 1, &[(1, &[2])]));
        let axis = AffineMap::new(fl, vec![vec![Fe(1)], vec![Fe(0)]], vec![Fe(0), Fe(0)]).unwrap();
        assert!(p.restrict(&axis).unwrap().is_zero());

        // (t, 1, t, 2) into x1y1 + x2y2 with block order (x1, y1, x2, y2): t + 2t = 0
        let f3 = f(3);
        let p = poly(3, 4, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]);
        let phi = AffineMap::new(
            f3,
            vec![vec![Fe(1)], vec![Fe(0)], vec![Fe(1)], vec![Fe(0)]],
            vec![Fe(0), Fe(1), Fe(0), Fe(2)],
        )
        .unwrap();
        assert!(p.restrict(&phi).unwrap().is_zero());
        // interleaved order (x1, x2, y1, y2) gives t^2 + 2 instead
        let p = poly(3, 4, &[(1, &[1, 0, 1, 0]), (1, &[0, 1, 0, 1])]);
        assert_eq!(p.restrict(&phi).unwrap(), poly(3, 1, &[(1, &[2]), (2, &[0])]));
    }

    #[test]
    fn interpolation_examples() {
        let fl = f(5);
        let vals: Vec<Fe> = fl.elements().map(|t| fl.mul(t, t)).collect();
        let (p, ok) = interpolate(fl, 1, &vals, 2).unwrap();
        assert!(ok);
        assert_eq!(p, poly(5, 1, &[(1, &[2])]));
        let (p, _) = interpolate(fl, 1, &[Fe(0); 5], 0).unwrap();
        assert!(p.is_zero());
        let vals: Vec<Fe> = fl.elements().map(|t| fl.pow(t, 4)).collect();
        let (p, ok) = interpolate(fl, 1, &vals, 3).unwrap();
        assert!(!ok);
        assert_eq!(p.degree(), 4);
    }

    #[test]
    fn table_roundtrip_exhaustive_small() {
        let f2 = f(2);
        for code in 0..(1u64 << 8) {
            let vals: Vec<Fe> = (0..8).map(|i| Fe((code >> i & 1) as u32)).collect();
            let p = interpolate_table(f2, 3, &vals).unwrap();
            assert!(p.is_function_reduced());
            assert_eq!(p.eval_table(), vals);
        }
    }

    #[test]
    fn reduce_function_agrees_pointwise() {
        let p = poly(3, 2, &[(1, &[5, 0]), (2, &[3, 4]), (1, &[0, 7])]);
        let r = p.reduce_function();
        assert!(r.is_function_reduced());
        for x in all_points(2, 3) {
            assert_eq!(p.eval_unchecked(&x), r.eval_unchecked(&x));
        }
    }

    #[test]
    fn grids() {
        let fl = f(7);
        let d = fl.delta_subgroup(3).unwrap();
        assert_eq!(delta_grid(&d, 2).len(), 9);
        let pts = [Fe(0), Fe(1), Fe(2)];
        let g = simplex_grid(&pts, 2);
        assert_eq!(g.len(), 6);
        assert!(g.iter().all(|x| x[0] >= x[1]));
    }

    #[test]
    fn family_span() {
        let a = poly(2, 4, &[(1, &[1, 0, 1, 0])]);
        let fam = PolyFamily::new(vec![a.clone(), a.clone()]).unwrap();
        assert_eq!(fam.span_dimension(), 1);
        assert!(!fam.is_independent());
    }
}
