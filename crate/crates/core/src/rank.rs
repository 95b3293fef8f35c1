//! Exhaustive small-scale rank decisions.
//!
//! Every rank question here has the shape "is the target a sum of at most r
//! elements of a finite product set S?". The search stores level sets
//! `L_k = L_{k-1} + S` (with `0 ∈ S`, so the levels are nested) and decides
//! `target ∈ L_r` by meeting in the middle: `target - u ∈ L_⌈r/2⌉` for some
//! `u ∈ L_⌊r/2⌋`. Certificates are recovered by walking the levels back down.

use num_rational::BigRational;
use serde::Serialize;
use std::collections::{HashMap, HashSet};

use crate::affine::{AffineMap, AffineSubspace};
use crate::analytic::{form_histogram, rat_string};
use crate::ctx::{mul_cost, pow_cost, Ctx};
use crate::error::{Error, Result};
use crate::gf::{Fe, PrimeField};
use crate::poly::{monomials_up_to, Monomial, MultiPoly, MultilinearForm, PolyFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RankValue {
    Finite(u32),
    /// Degree-1 and nonzero constant polynomials.
    Infinite,
    /// Proven larger than the search ceiling.
    Exceeds(u32),
    /// Proven larger than `above`, then the budget stopped the search.
    Undecided { above: u32 },
}

impl RankValue {
    pub fn finite(&self) -> Option<u32> {
        match self {
            RankValue::Finite(r) => Some(*r),
            _ => None,
        }
    }

    pub fn is_decided(&self) -> bool {
        !matches!(self, RankValue::Undecided { .. })
    }
}

impl std::fmt::Display for RankValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RankValue::Finite(r) => write!(f, "{r}"),
            RankValue::Infinite => write!(f, "inf"),
            RankValue::Exceeds(r) => write!(f, "> {r}"),
            RankValue::Undecided { above } => write!(f, "> {above} (search abandoned)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LevelOutcome {
    No { r: u32 },
    Yes { r: u32 },
    Refused { r: u32, cost: String },
}

/// One term `Q·R` of a decomposition. For partition-type terms `blocks` lists
/// the blocks `Q` depends on; `R` depends on the complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTerm {
    pub q: MultiPoly,
    pub r: MultiPoly,
    pub blocks: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankCertificate {
    Decomposition(Vec<ProductTerm>),
    LowerBound { bound: u32, provenance: String },
}

impl RankCertificate {
    /// Re-expands a decomposition and compares it with `target` exactly.
    pub fn verify(&self, target: &MultiPoly) -> bool {
        match self {
            RankCertificate::Decomposition(terms) => {
                let mut s = MultiPoly::zero(target.field(), target.nvars());
                for t in terms {
                    s = s.add(&t.q.mul(&t.r));
                }
                s == *target
            }
            RankCertificate::LowerBound { .. } => true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RankResult {
    pub value: RankValue,
    pub certificate: Option<RankCertificate>,
    pub log: Vec<LevelOutcome>,
}

// ---------------------------------------------------------------------------
// coordinate vectors and level sets

/// Vectors in `F_q^dim` packed as base-q integers.
#[derive(Clone, Copy, Debug)]
struct Packed {
    q: u128,
    dim: usize,
}

impl Packed {
    fn fits(q: u32, dim: usize) -> bool {
        (dim as f64) * (q as f64).log2() < 127.0
    }

    fn encode(&self, v: &[u8]) -> u128 {
        v.iter().rev().fold(0u128, |acc, &x| acc * self.q + x as u128)
    }

    fn decode(&self, mut c: u128) -> Vec<u8> {
        (0..self.dim)
            .map(|_| {
                let d = (c % self.q) as u8;
                c /= self.q;
                d
            })
            .collect()
    }

    #[inline]
    fn add(&self, a: u128, b: u128) -> u128 {
        if self.q == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let (mut r, mut pw) = (0u128, 1u128);
        while a > 0 || b > 0 {
            r += ((a % self.q + b % self.q) % self.q) * pw;
            a /= self.q;
            b /= self.q;
            pw *= self.q;
        }
        r
    }

}

const BITSET_LIMIT: u128 = 1 << 29;

enum Level {
    Bits { words: Vec<u64>, len: u64 },
    Codes(HashSet<u128>),
    Bytes(HashSet<Vec<u8>>),
}

impl Level {
    fn len(&self) -> u64 {
        match self {
            Level::Bits { len, .. } => *len,
            Level::Codes(s) => s.len() as u64,
            Level::Bytes(s) => s.len() as u64,
        }
    }
}

enum Keyspace {
    Packed(Packed),
    Bytes,
}

/// Exhaustive "sum of r products" search over a fixed product set.
pub struct ProductSearch {
    field: PrimeField,
    dim: usize,
    keys: Keyspace,
    use_bits: bool,
    /// Distinct nonzero products as coordinate vectors, with a witness index.
    products: Vec<Vec<u8>>,
    witnesses: Vec<ProductTerm>,
    index: HashMap<Vec<u8>, usize>,
    /// `levels[k]` is `L_{k+1}`.
    levels: Vec<Level>,
}

impl ProductSearch {
    fn new(field: PrimeField, dim: usize) -> Self {
        let q = field.p();
        let keys = if Packed::fits(q, dim) {
            Keyspace::Packed(Packed { q: q as u128, dim })
        } else {
            Keyspace::Bytes
        };
        let use_bits = matches!(keys, Keyspace::Packed(_)) && (q as f64).powi(dim as i32) <= BITSET_LIMIT as f64;
        ProductSearch {
            field,
            dim,
            keys,
            use_bits,
            products: Vec::new(),
            witnesses: Vec::new(),
            index: HashMap::new(),
            levels: Vec::new(),
        }
    }

    fn push_product(&mut self, v: Vec<u8>, w: ProductTerm) {
        if v.iter().all(|&x| x == 0) || self.index.contains_key(&v) {
            return;
        }
        self.index.insert(v.clone(), self.products.len());
        self.products.push(v);
        self.witnesses.push(w);
    }

    pub fn num_products(&self) -> usize {
        self.products.len()
    }

    fn empty_level(&self) -> Level {
        match &self.keys {
            Keyspace::Packed(p) if self.use_bits => {
                let bits = p.q.pow(p.dim as u32) as usize;
                Level::Bits {
                    words: vec![0u64; bits.div_ceil(64)],
                    len: 0,
                }
            }
            Keyspace::Packed(_) => Level::Codes(HashSet::new()),
            Keyspace::Bytes => Level::Bytes(HashSet::new()),
        }
    }

    fn add_vec(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let q = self.field.p() as u8;
        a.iter().zip(b).map(|(&x, &y)| (x + y) % q).collect()
    }

    fn sub_vec(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let q = self.field.p() as u8;
        a.iter().zip(b).map(|(&x, &y)| (x + q - y) % q).collect()
    }

    fn level_contains(&self, k: usize, v: &[u8]) -> bool {
        if k == 0 {
            return v.iter().all(|&x| x == 0);
        }
        match (&self.levels[k - 1], &self.keys) {
            (Level::Bits { words, .. }, Keyspace::Packed(p)) => {
                let c = p.encode(v) as usize;
                words[c / 64] >> (c % 64) & 1 == 1
            }
            (Level::Codes(s), Keyspace::Packed(p)) => s.contains(&p.encode(v)),
            (Level::Bytes(s), _) => s.contains(v),
            _ => unreachable!(),
        }
    }

    /// Calls `f` on each member of `L_k` until it returns true.
    fn level_any(&self, k: usize, mut f: impl FnMut(&[u8]) -> bool) -> bool {
        if k == 0 {
            return f(&vec![0u8; self.dim]);
        }
        match (&self.levels[k - 1], &self.keys) {
            (Level::Bits { words, .. }, Keyspace::Packed(p)) => {
                for (wi, &w) in words.iter().enumerate() {
                    let mut w = w;
                    while w != 0 {
                        let b = w.trailing_zeros() as usize;
                        w &= w - 1;
                        if f(&p.decode((wi * 64 + b) as u128)) {
                            return true;
                        }
                    }
                }
                false
            }
            (Level::Codes(s), Keyspace::Packed(p)) => {
                let mut v: Vec<u128> = s.iter().copied().collect();
                v.sort_unstable();
                v.into_iter().any(|c| f(&p.decode(c)))
            }
            (Level::Bytes(s), _) => {
                let mut v: Vec<&Vec<u8>> = s.iter().collect();
                v.sort();
                v.into_iter().any(|x| f(x))
            }
            _ => unreachable!(),
        }
    }

    fn level_size(&self, k: usize) -> u64 {
        if k == 0 {
            1
        } else {
            self.levels[k - 1].len()
        }
    }

    /// Estimated cost of materialising `L_k`.
    fn build_cost(&self, k: usize) -> u128 {
        let mut size = 1u128;
        let mut cost = 0u128;
        let s = self.products.len() as u128 + 1;
        for j in 1..=k {
            if j <= self.levels.len() {
                size = self.levels[j - 1].len() as u128;
            } else {
                cost += size * s * self.dim as u128;
                size = (size * s).min(self.space_size());
            }
        }
        cost
    }

    fn space_size(&self) -> u128 {
        (self.field.p() as f64).powi(self.dim as i32).min(u128::MAX as f64 / 4.0) as u128
    }

    fn ensure_level(&mut self, k: usize, ctx: &Ctx) -> Result<()> {
        if self.levels.len() >= k {
            return Ok(());
        }
        ctx.check(self.build_cost(k), "product-sum level set")?;
        while self.levels.len() < k {
            let prev = self.levels.len();
            let mut next = self.empty_level();
            match (&mut next, &self.keys) {
                (Level::Bits { words, len }, Keyspace::Packed(p)) => {
                    let pc: Vec<u128> = self.products.iter().map(|v| p.encode(v)).collect();
                    let mut set = |c: u128| {
                        let c = c as usize;
                        let (w, b) = (c / 64, c % 64);
                        if words[w] >> b & 1 == 0 {
                            words[w] |= 1 << b;
                            *len += 1;
                        }
                    };
                    set(0);
                    if prev == 0 {
                        pc.iter().for_each(|&c| set(c));
                    } else if let Level::Bits { words: old, .. } = &self.levels[prev - 1] {
                        for (wi, &w) in old.iter().enumerate() {
                            let mut w = w;
                            while w != 0 {
                                let b = w.trailing_zeros() as u128;
                                w &= w - 1;
                                let u = wi as u128 * 64 + b;
                                set(u);
                                for &c in &pc {
                                    set(p.add(u, c));
                                }
                            }
                        }
                    }
                }
                (Level::Codes(set), Keyspace::Packed(p)) => {
                    let pc: Vec<u128> = self.products.iter().map(|v| p.encode(v)).collect();
                    set.insert(0);
                    if prev == 0 {
                        set.extend(pc.iter().copied());
                    } else if let Level::Codes(old) = &self.levels[prev - 1] {
                        for &u in old {
                            set.insert(u);
                            for &c in &pc {
                                set.insert(p.add(u, c));
                            }
                        }
                    }
                }
                (Level::Bytes(set), _) => {
                    set.insert(vec![0u8; self.dim]);
                    if prev == 0 {
                        set.extend(self.products.iter().cloned());
                    } else if let Level::Bytes(old) = &self.levels[prev - 1] {
                        for u in old {
                            set.insert(u.clone());
                            for c in &self.products {
                                set.insert(self.add_vec(u, c));
                            }
                        }
                    }
                }
                _ => unreachable!(),
            }
            self.levels.push(next);
        }
        Ok(())
    }

    /// Decides `target ∈ L_r`.
    fn member(&mut self, target: &[u8], r: usize, ctx: &Ctx) -> Result<bool> {
        let a = r.div_ceil(2);
        let b = r / 2;
        self.ensure_level(a, ctx)?;
        ctx.check(self.level_size(b) as u128 * self.dim as u128, "meet-in-the-middle scan")?;
        Ok(self.level_any(b, |u| self.level_contains(a, &self.sub_vec(target, u))))
    }

    /// Splits a member of `L_k` into at most `k` products; levels below `k` must exist.
    fn decompose(&self, target: &[u8], k: usize) -> Vec<usize> {
        if target.iter().all(|&x| x == 0) {
            return Vec::new();
        }
        if let Some(&i) = self.index.get(target) {
            return vec![i];
        }
        for (i, s) in self.products.iter().enumerate() {
            let rest = self.sub_vec(target, s);
            if self.level_contains(k - 1, &rest) {
                let mut out = vec![i];
                out.extend(self.decompose(&rest, k - 1));
                return out;
            }
        }
        unreachable!("target was a level member")
    }

    fn certificate(&mut self, target: &[u8], r: usize) -> Vec<ProductTerm> {
        let a = r.div_ceil(2);
        let b = r / 2;
        let mut found = None;
        self.level_any(b, |u| {
            let w = self.sub_vec(target, u);
            if self.level_contains(a, &w) {
                found = Some((u.to_vec(), w));
                true
            } else {
                false
            }
        });
        let (u, w) = found.expect("member");
        let mut idx = self.decompose(&w, a);
        idx.extend(self.decompose(&u, b));
        idx.into_iter().map(|i| self.witnesses[i].clone()).collect()
    }

    /// Minimal `r <= r_max` with `target ∈ L_r`.
    pub fn min_rank(&mut self, target: &[u8], r_max: u32, ctx: &Ctx) -> RankResult {
        let mut log = Vec::new();
        if target.iter().all(|&x| x == 0) {
            return RankResult {
                value: RankValue::Finite(0),
                certificate: Some(RankCertificate::Decomposition(Vec::new())),
                log,
            };
        }
        for r in 1..=r_max {
            match self.member(target, r as usize, ctx) {
                Ok(true) => {
                    log.push(LevelOutcome::Yes { r });
                    let cert = self.certificate(target, r as usize);
                    return RankResult {
                        value: RankValue::Finite(r),
                        certificate: Some(RankCertificate::Decomposition(cert)),
                        log,
                    };
                }
                Ok(false) => log.push(LevelOutcome::No { r }),
                Err(e) => {
                    let cost = match e {
                        Error::BudgetExceeded { cost, .. } => cost.to_string(),
                        other => other.to_string(),
                    };
                    log.push(LevelOutcome::Refused { r, cost });
                    return RankResult {
                        value: RankValue::Undecided { above: r - 1 },
                        certificate: (r > 1).then(|| RankCertificate::LowerBound {
                            bound: r - 1,
                            provenance: format!("exhaustion through r = {}", r - 1),
                        }),
                        log,
                    };
                }
            }
        }
        RankResult {
            value: RankValue::Exceeds(r_max),
            certificate: Some(RankCertificate::LowerBound {
                bound: r_max,
                provenance: format!("exhaustion through r = {r_max}"),
            }),
            log,
        }
    }
}

fn to_digits(v: &[Fe]) -> Vec<u8> {
    v.iter().map(|x| x.0 as u8).collect()
}

/// All vectors of length `len` over F_q; `normalized` keeps those whose first
/// nonzero entry is 1 (and drops zero).
fn all_vectors(q: u32, len: usize, normalized: bool) -> impl Iterator<Item = Vec<Fe>> {
    let total = (q as u64).pow(len as u32);
    (0..total)
        .map(move |c| crate::poly::decode(c, len, q as u64))
        .filter(move |v| !normalized || v.iter().find(|x| !x.is_zero()).map(|x| x.0 == 1).unwrap_or(false))
}

// ---------------------------------------------------------------------------
// Schmidt rank

/// Product set and levels for Schmidt-rank questions on degree-`d`
/// polynomials in `n` variables over one field.
pub struct SchmidtSearch {
    n: usize,
    d: u32,
    monos: Vec<Monomial>,
    mono_index: HashMap<Monomial, usize>,
    search: ProductSearch,
}

impl SchmidtSearch {
    /// Factor pairs: `Q` of degree `<= d1` (normalised), `R` of degree
    /// `<= min(d-1, d-d1)`, for `d1 = 1..=d/2`.
    pub fn new(field: PrimeField, n: usize, d: u32, ctx: &Ctx) -> Result<Self> {
        if d < 2 {
            return Err(Error::Precondition("Schmidt search needs degree >= 2".into()));
        }
        let q = field.p();
        let monos = monomials_up_to(n, d, d);
        let mono_index: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut pairs = Vec::new();
        let mut cost = 0u128;
        for d1 in 1..=d / 2 {
            let dr = (d - 1).min(d - d1);
            let qm = monomials_up_to(n, d1, d1);
            let rm = monomials_up_to(n, dr, dr);
            cost = cost.saturating_add(mul_cost(&[
                pow_cost(q as u128, qm.len() + rm.len()),
                (qm.len() * rm.len()) as u128,
            ]));
            pairs.push((qm, rm));
        }
        ctx.check(cost, "Schmidt factor enumeration")?;
        let mut search = ProductSearch::new(field, monos.len());
        for (qm, rm) in &pairs {
            let table: Vec<Vec<usize>> = qm
                .iter()
                .map(|a| rm.iter().map(|b| mono_index[&a.mul(b)]).collect())
                .collect();
            let rvecs: Vec<Vec<Fe>> = all_vectors(q, rm.len(), false).collect();
            for qv in all_vectors(q, qm.len(), true) {
                for rv in &rvecs {
                    let mut v = vec![0u32; monos.len()];
                    for (i, a) in qv.iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        for (j, b) in rv.iter().enumerate() {
                            if !b.is_zero() {
                                v[table[i][j]] += a.0 * b.0;
                            }
                        }
                    }
                    let v: Vec<u8> = v.into_iter().map(|x| (x % q) as u8).collect();
                    if search.index.contains_key(&v) || v.iter().all(|&x| x == 0) {
                        continue;
                    }
                    let qp = poly_from(field, n, qm, &qv);
                    let rp = poly_from(field, n, rm, rv);
                    search.push_product(v, ProductTerm { q: qp, r: rp, blocks: None });
                }
            }
        }
        Ok(SchmidtSearch {
            n,
            d,
            monos,
            mono_index,
            search,
        })
    }

    pub fn num_products(&self) -> usize {
        self.search.num_products()
    }

    fn vector(&self, p: &MultiPoly) -> Option<Vec<u8>> {
        let mut v = vec![0u8; self.monos.len()];
        for (m, c) in p.terms() {
            v[*self.mono_index.get(m)?] = c.0 as u8;
        }
        Some(v)
    }

    pub fn rank(&mut self, p: &MultiPoly, r_max: u32, ctx: &Ctx) -> Result<RankResult> {
        if p.nvars() != self.n || p.degree() > self.d {
            return Err(Error::InvalidInput("polynomial outside this search space".into()));
        }
        if let Some(v) = trivial_rank(p) {
            return Ok(v);
        }
        if p.degree() != self.d {
            return Err(Error::InvalidInput(format!(
                "search set is for degree {}, polynomial has degree {}",
                self.d,
                p.degree()
            )));
        }
        let v = self.vector(p).expect("monomials in range");
        let res = self.search.min_rank(&v, r_max, ctx);
        if let Some(c) = &res.certificate {
            if !c.verify(p) {
                return Err(Error::Verification("Schmidt certificate does not expand to P".into()));
            }
        }
        Ok(res)
    }
}

fn poly_from(field: PrimeField, n: usize, monos: &[Monomial], coeffs: &[Fe]) -> MultiPoly {
    let mut p = MultiPoly::zero(field, n);
    for (m, &c) in monos.iter().zip(coeffs) {
        p.add_term(m.clone(), c);
    }
    p
}

fn trivial_rank(p: &MultiPoly) -> Option<RankResult> {
    if p.is_zero() {
        return Some(RankResult {
            value: RankValue::Finite(0),
            certificate: Some(RankCertificate::Decomposition(Vec::new())),
            log: Vec::new(),
        });
    }
    if p.degree() <= 1 {
        return Some(RankResult {
            value: RankValue::Infinite,
            certificate: None,
            log: Vec::new(),
        });
    }
    None
}

/// Schmidt rank of `P` as a formal polynomial.
pub fn schmidt_rank(p: &MultiPoly, r_max: u32, ctx: &Ctx) -> Result<RankResult> {
    if let Some(v) = trivial_rank(p) {
        return Ok(v);
    }
    let mut s = SchmidtSearch::new(p.field(), p.nvars(), p.degree(), ctx)?;
    s.rank(p, r_max, ctx)
}

/// Shares Schmidt product sets across many decisions keyed by (field, n, d).
#[derive(Default)]
pub struct RankOracle {
    cache: HashMap<(u32, usize, u32), SchmidtSearch>,
}

impl RankOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn schmidt(&mut self, p: &MultiPoly, r_max: u32, ctx: &Ctx) -> Result<RankResult> {
        if let Some(v) = trivial_rank(p) {
            return Ok(v);
        }
        let key = (p.field().p(), p.nvars(), p.degree());
        if let std::collections::hash_map::Entry::Vacant(e) = self.cache.entry(key) {
            let s = SchmidtSearch::new(p.field(), p.nvars(), p.degree(), ctx)?;
            e.insert(s);
        }
        self.cache.get_mut(&key).unwrap().rank(p, r_max, ctx)
    }
}

// ---------------------------------------------------------------------------
// Tensors and partition rank

/// Coordinates of a `d`-block multilinear form, indexed by `(k_1, …, k_d)`
/// with the first block most significant.
pub fn tensor_coords(t: &MultilinearForm) -> Vec<Fe> {
    let (d, n) = (t.d, t.n);
    let mut v = vec![Fe::ZERO; n.pow(d as u32)];
    for (m, c) in t.poly.terms() {
        let mut idx = 0;
        for i in 0..d {
            let k = m.0[i * n..(i + 1) * n].iter().position(|&e| e == 1).unwrap();
            idx = idx * n + k;
        }
        v[idx] = c;
    }
    v
}

/// The multilinear form with the given coordinates.
pub fn tensor_from_coords(field: PrimeField, d: usize, n: usize, coords: &[Fe]) -> MultilinearForm {
    let mut poly = MultiPoly::zero(field, d * n);
    for (idx, &c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut e = vec![0u32; d * n];
        let mut rest = idx;
        for i in (0..d).rev() {
            e[i * n + rest % n] = 1;
            rest /= n;
        }
        poly.add_term(Monomial(e), c);
    }
    MultilinearForm { d, n, poly }
}

/// A tensor on a subset of blocks, as a polynomial in all `d*n` variables.
fn sub_tensor_poly(field: PrimeField, d: usize, n: usize, blocks: &[usize], coords: &[Fe]) -> MultiPoly {
    let mut poly = MultiPoly::zero(field, d * n);
    let k = blocks.len();
    for (idx, &c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut e = vec![0u32; d * n];
        let mut rest = idx;
        for j in (0..k).rev() {
            e[blocks[j] * n + rest % n] = 1;
            rest /= n;
        }
        poly.add_term(Monomial(e), c);
    }
    poly
}

/// Nonempty proper block subsets containing block 0.
fn bipartitions(d: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << d) {
        if mask & 1 == 0 || mask == (1 << d) - 1 {
            continue;
        }
        let j: Vec<usize> = (0..d).filter(|&i| mask >> i & 1 == 1).collect();
        let jc: Vec<usize> = (0..d).filter(|&i| mask >> i & 1 == 0).collect();
        out.push((j, jc));
    }
    out
}

/// Builds the coordinate vector of `Q(x_J)·R(x_{J^c})`.
fn product_coords(d: usize, n: usize, q: u32, j: &[usize], jc: &[usize], qc: &[Fe], rc: &[Fe]) -> Vec<u8> {
    let mut v = vec![0u8; n.pow(d as u32)];
    let mut pos = vec![0usize; d];
    for (qi, a) in qc.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let mut t = qi;
        for &b in j.iter().rev() {
            pos[b] = t % n;
            t /= n;
        }
        for (ri, b) in rc.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let mut t = ri;
            for &bb in jc.iter().rev() {
                pos[bb] = t % n;
                t /= n;
            }
            let idx = pos.iter().fold(0usize, |acc, &k| acc * n + k);
            v[idx] = ((a.0 * b.0) % q) as u8;
        }
    }
    v
}

/// Product set of partition-rank-one tensors with `d` blocks of size `n`.
pub struct PartitionSearch {
    field: PrimeField,
    d: usize,
    n: usize,
    search: ProductSearch,
}

impl PartitionSearch {
    pub fn new(field: PrimeField, d: usize, n: usize, ctx: &Ctx) -> Result<Self> {
        if d < 2 {
            return Err(Error::Precondition("partition rank needs d >= 2".into()));
        }
        let q = field.p();
        let parts = bipartitions(d);
        let cost: u128 = parts
            .iter()
            .map(|(j, jc)| {
                let a = n.pow(j.len() as u32);
                let b = n.pow(jc.len() as u32);
                mul_cost(&[pow_cost(q as u128, a + b), (a * b) as u128])
            })
            .fold(0u128, u128::saturating_add);
        ctx.check(cost, "partition factor enumeration")?;
        let mut search = ProductSearch::new(field, n.pow(d as u32));
        for (j, jc) in &parts {
            let a = n.pow(j.len() as u32);
            let b = n.pow(jc.len() as u32);
            let rs: Vec<Vec<Fe>> = all_vectors(q, b, true).collect();
            for qc in all_vectors(q, a, true) {
                for rc0 in &rs {
                    for s in 1..q {
                        let rc: Vec<Fe> = rc0.iter().map(|x| field.mul(*x, Fe(s))).collect();
                        let v = product_coords(d, n, q, j, jc, &qc, &rc);
                        if search.index.contains_key(&v) {
                            continue;
                        }
                        let term = ProductTerm {
                            q: sub_tensor_poly(field, d, n, j, &qc),
                            r: sub_tensor_poly(field, d, n, jc, &rc),
                            blocks: Some(j.clone()),
                        };
                        search.push_product(v, term);
                    }
                }
            }
        }
        Ok(PartitionSearch { field, d, n, search })
    }

    pub fn rank(&mut self, t: &MultilinearForm, r_max: u32, ctx: &Ctx) -> Result<RankResult> {
        if t.d != self.d || t.n != self.n || t.field() != self.field {
            return Err(Error::InvalidInput("tensor outside this search space".into()));
        }
        let v = to_digits(&tensor_coords(t));
        let res = self.search.min_rank(&v, r_max, ctx);
        if let Some(c) = &res.certificate {
            if !c.verify(&t.poly) {
                return Err(Error::Verification("partition certificate does not expand to T".into()));
            }
        }
        Ok(res)
    }
}

pub fn partition_rank(t: &MultilinearForm, r_max: u32, ctx: &Ctx) -> Result<RankResult> {
    if t.is_zero() {
        return Ok(RankResult {
            value: RankValue::Finite(0),
            certificate: Some(RankCertificate::Decomposition(Vec::new())),
            log: Vec::new(),
        });
    }
    if t.d == 1 {
        return Ok(RankResult {
            value: RankValue::Infinite,
            certificate: None,
            log: Vec::new(),
        });
    }
    let mut s = PartitionSearch::new(t.field(), t.d, t.n, ctx)?;
    s.rank(t, r_max, ctx)
}

// ---------------------------------------------------------------------------
// Invariant pool search

/// Set partitions of `{0..k}` as class labels (restricted growth strings).
fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; k];
    fn rec(i: usize, maxc: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=maxc {
            cur[i] = c;
            rec(i + 1, if c == maxc { maxc + 1 } else { maxc }, cur, out);
        }
    }
    if k == 0 {
        out.push(Vec::new());
    } else {
        rec(0, 0, &mut cur, &mut out);
    }
    out
}

/// Orbit sums spanning the forms on `k` blocks that are invariant under
/// permuting coordinates simultaneously in every block: one basis element
/// per set partition of the blocks, summing over injective class labellings.
fn invariant_basis(n: usize, k: usize) -> Vec<Vec<u8>> {
    let size = n.pow(k as u32);
    let mut basis = Vec::new();
    for part in set_partitions(k) {
        let classes = part.iter().max().map(|m| m + 1).unwrap_or(0);
        let mut v = vec![0u8; size];
        for idx in 0..size {
            let mut digits = vec![0usize; k];
            let mut t = idx;
            for j in (0..k).rev() {
                digits[j] = t % n;
                t /= n;
            }
            let mut label = vec![None; classes];
            let mut ok = true;
            for j in 0..k {
                match label[part[j]] {
                    None => label[part[j]] = Some(digits[j]),
                    Some(x) if x != digits[j] => ok = false,
                    _ => {}
                }
            }
            let vals: Vec<usize> = label.iter().flatten().copied().collect();
            let mut sorted = vals.clone();
            sorted.sort();
            sorted.dedup();
            if ok && sorted.len() == vals.len() {
                v[idx] = 1;
            }
        }
        if v.iter().any(|&x| x != 0) {
            basis.push(v);
        }
    }
    basis
}

fn span_vectors(q: u32, basis: &[Vec<u8>], normalized: bool) -> Vec<Vec<Fe>> {
    let len = basis.first().map(Vec::len).unwrap_or(0);
    all_vectors(q, basis.len(), normalized)
        .map(|c| {
            let mut v = vec![0u32; len];
            for (a, b) in c.iter().zip(basis) {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x += a.0 * y as u32;
                }
            }
            v.into_iter().map(|x| Fe(x % q)).collect()
        })
        .collect()
}

/// Upper bound on the partition rank (hence on the Schmidt rank) of a tensor
/// using only products of invariant forms; exact only inside that pool.
pub fn invariant_pool_rank(t: &MultilinearForm, r_max: u32, ctx: &Ctx) -> Result<(RankResult, usize)> {
    let field = t.field();
    let q = field.p();
    let (d, n) = (t.d, t.n);
    let mut search = ProductSearch::new(field, n.pow(d as u32));
    for (j, jc) in bipartitions(d) {
        let qs = span_vectors(q, &invariant_basis(n, j.len()), true);
        let rs = span_vectors(q, &invariant_basis(n, jc.len()), false);
        ctx.check((qs.len() * rs.len()) as u128 * n.pow(d as u32) as u128, "invariant pool")?;
        for qc in &qs {
            for rc in &rs {
                let v = product_coords(d, n, q, &j, &jc, qc, rc);
                if search.index.contains_key(&v) {
                    continue;
                }
                let term = ProductTerm {
                    q: sub_tensor_poly(field, d, n, &j, qc),
                    r: sub_tensor_poly(field, d, n, &jc, rc),
                    blocks: Some(j.clone()),
                };
                search.push_product(v, term);
            }
        }
    }
    let pool = search.num_products();
    let v = to_digits(&tensor_coords(t));
    let res = search.min_rank(&v, r_max, ctx);
    if let Some(c) = &res.certificate {
        if !c.verify(&t.poly) {
            return Err(Error::Verification("pool certificate does not expand to T".into()));
        }
    }
    Ok((res, pool))
}

// ---------------------------------------------------------------------------
// nc-rank, family rank, bias bound, axioms

#[derive(Clone, Debug)]
pub struct NcRank {
    /// Exhaustive Schmidt rank of `P̃`, when the search fits the budget.
    pub exact: Option<RankResult>,
    /// Certificate-backed upper bound from the invariant pool.
    pub upper_bound: Option<(u32, RankCertificate)>,
    pub partition: Option<RankResult>,
    pub form: Option<MultilinearForm>,
}

impl NcRank {
    pub fn value(&self) -> Option<RankValue> {
        self.exact.as_ref().map(|r| r.value)
    }
}

pub fn nc_rank(p: &MultiPoly, r_max: u32, ctx: &Ctx) -> Result<NcRank> {
    let p = p.reduce_function();
    if p.degree() <= 1 {
        let value = if p.is_zero() {
            RankValue::Finite(0)
        } else {
            RankValue::Infinite
        };
        return Ok(NcRank {
            exact: Some(RankResult {
                value,
                certificate: None,
                log: Vec::new(),
            }),
            upper_bound: None,
            partition: None,
            form: None,
        });
    }
    let t = p.multilinear_form()?;
    let exact = match schmidt_rank(&t.poly, r_max, ctx) {
        Ok(r) if r.value.is_decided() => Some(r),
        Ok(_) | Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let partition = match partition_rank(&t, r_max, ctx) {
        Ok(r) if r.value.is_decided() => Some(r),
        Ok(_) | Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut upper_bound = None;
    if exact.is_none() {
        if let Ok((res, _)) = invariant_pool_rank(&t, r_max, ctx) {
            if let (RankValue::Finite(r), Some(c)) = (res.value, res.certificate) {
                upper_bound = Some((r, c));
            }
        }
    }
    Ok(NcRank {
        exact,
        upper_bound,
        partition,
        form: Some(t),
    })
}

#[derive(Clone, Debug)]
pub struct FamilyRank {
    pub value: RankValue,
    /// Members are linearly dependent; the rank is taken over a basis of the span.
    pub dependent: bool,
    pub span_dim: usize,
    /// The minimising combination.
    pub witness: Option<Vec<Fe>>,
}

/// Minimum Schmidt rank over nonzero combinations of a basis of the span.
pub fn family_rank(fam: &PolyFamily, r_max: u32, ctx: &Ctx) -> Result<FamilyRank> {
    let f = fam.field();
    let q = f.p();
    // basis of the span by greedy independence
    let mut basis: Vec<MultiPoly> = Vec::new();
    for p in fam.polys() {
        let mut cand = basis.clone();
        cand.push(p.clone());
        if PolyFamily::new(cand.clone())?.is_independent() {
            basis = cand;
        }
    }
    let dependent = basis.len() < fam.len();
    let span_dim = basis.len();
    if span_dim == 0 {
        return Ok(FamilyRank {
            value: RankValue::Finite(0),
            dependent,
            span_dim,
            witness: None,
        });
    }
    let span = PolyFamily::new(basis)?;
    ctx.check(pow_cost(q as u128, span_dim), "family combinations")?;
    let mut oracle = RankOracle::new();
    let mut best: Option<(RankValue, Vec<Fe>)> = None;
    for a in all_vectors(q, span_dim, true) {
        let combo = span.combination(&a);
        let r = oracle.schmidt(&combo, r_max, ctx)?;
        let better = match (&best, r.value) {
            (None, _) => true,
            (Some((RankValue::Finite(b), _)), RankValue::Finite(x)) => x < *b,
            (Some((RankValue::Finite(_), _)), _) => false,
            (Some(_), RankValue::Finite(_)) => true,
            (Some((RankValue::Exceeds(_), _)), RankValue::Undecided { .. }) => false,
            (Some((RankValue::Infinite, _)), RankValue::Exceeds(_) | RankValue::Undecided { .. }) => true,
            _ => false,
        };
        if better {
            best = Some((r.value, a));
        }
    }
    let (value, w) = best.unwrap();
    Ok(FamilyRank {
        value,
        dependent,
        span_dim,
        witness: Some(w),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BiasBound {
    #[serde(serialize_with = "ser_rat")]
    pub bias: BigRational,
    /// Largest `r` with `|E| < q^{-r}`; `None` when `|E| = 1`.
    pub bound: Option<u32>,
}

fn ser_rat<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_string(v))
}

/// `|E_{h ∈ V^d} e_q(T(h))|` and the partition-rank lower bound it implies.
pub fn prank_lower_bound_from_bias(t: &MultilinearForm, ctx: &Ctx) -> Result<BiasBound> {
    let h = form_histogram(t, ctx)?;
    let s = h.sum().rational().ok_or_else(|| {
        Error::Verification("multilinear character sum is not rational".into())
    })?;
    let n = h.domain_size as i128;
    let bias = BigRational::new(s.into(), n.into());
    let q = t.field().p() as i128;
    // largest r with s/n < q^{-r}, i.e. s·q^r < n
    let mut bound = None;
    let mut r = 0u32;
    let mut pw = 1i128;
    while s * pw < n {
        bound = Some(r);
        r += 1;
        pw *= q;
    }
    Ok(BiasBound { bias, bound })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    /// `None` means untested within budget.
    pub holds: Option<bool>,
    pub detail: String,
}

impl AxiomReport {
    pub fn violations(&self) -> usize {
        self.checks.iter().filter(|c| c.holds == Some(false)).count()
    }

    pub fn untested(&self) -> usize {
        self.checks.iter().filter(|c| c.holds.is_none()).count()
    }

    fn push(&mut self, name: &str, holds: Option<bool>, detail: String) {
        self.checks.push(AxiomCheck {
            name: name.into(),
            holds,
            detail,
        });
    }
}

/// Checks invariance under `phi`, the codimension drop on `w`, and the
/// tensor sandwich `r <= pr <= 4^d r` for `P̃`-type inputs given as `form`.
pub fn check_rank_axioms(
    p: &MultiPoly,
    phi: Option<&AffineMap>,
    w: Option<&AffineSubspace>,
    form: Option<&MultilinearForm>,
    r_max: u32,
    oracle: &mut RankOracle,
    ctx: &Ctx,
) -> AxiomReport {
    let mut rep = AxiomReport::default();
    let base = oracle.schmidt(p, r_max, ctx).map(|r| r.value);
    if let Some(phi) = phi {
        let res = (|| -> Result<Option<bool>> {
            if !phi.is_invertible() {
                return Err(Error::InvalidInput("map is not invertible".into()));
            }
            let a = base.clone()?;
            let b = oracle.schmidt(&p.restrict(phi)?, r_max, ctx)?.value;
            Ok(match (a, b) {
                (RankValue::Undecided { .. }, _) | (_, RankValue::Undecided { .. }) => None,
                (x, y) => Some(x == y),
            })
        })();
        match res {
            Ok(h) => rep.push("affine-invariance", h, String::new()),
            Err(e) if e.is_budget() => rep.push("affine-invariance", None, e.to_string()),
            Err(e) => rep.push("affine-invariance", Some(false), e.to_string()),
        }
    }
    if let Some(w) = w {
        let res = (|| -> Result<(Option<bool>, String)> {
            let a = base.clone()?;
            let restricted = p.restrict(&w.to_map())?;
            let b = oracle.schmidt(&restricted, r_max, ctx)?.value;
            let codim = (w.ambient_dim() - w.dim()) as i64;
            let detail = format!("rank {a}, restricted {b}, codim {codim}");
            // restricted rank must be >= rank - codim
            let holds = match (a, b) {
                (RankValue::Finite(r), RankValue::Finite(s)) => Some(s as i64 >= r as i64 - codim),
                (RankValue::Finite(_), RankValue::Infinite | RankValue::Exceeds(_)) => Some(true),
                (RankValue::Exceeds(r), RankValue::Finite(s)) => {
                    if (s as i64) >= r as i64 + 1 - codim {
                        Some(true)
                    } else {
                        None
                    }
                }
                (RankValue::Infinite, RankValue::Finite(s)) => {
                    // a linear form restricted is linear, constant or zero
                    Some(s == 0 && restricted.is_zero())
                }
                (RankValue::Infinite, _) => Some(true),
                _ => None,
            };
            Ok((holds, detail))
        })();
        match res {
            Ok((h, d)) => rep.push("subspace-drop", h, d),
            Err(e) if e.is_budget() => rep.push("subspace-drop", None, e.to_string()),
            Err(e) => rep.push("subspace-drop", Some(false), e.to_string()),
        }
    }
    if let Some(t) = form {
        let res = (|| -> Result<(Option<bool>, String)> {
            let r = oracle.schmidt(&t.poly, r_max, ctx)?.value;
            let pr = partition_rank(t, r_max, ctx)?.value;
            let bound = 4u64.pow(t.d as u32);
            let detail = format!("r = {r}, pr = {pr}");
            let holds = match (r, pr) {
                (RankValue::Finite(r), RankValue::Finite(pr)) => Some(r <= pr && pr as u64 <= bound * r as u64),
                (RankValue::Finite(r), RankValue::Exceeds(m)) => (r <= m).then_some(true),
                _ => None,
            };
            Ok((holds, detail))
        })();
        match res {
            Ok((h, d)) => rep.push("rank-sandwich", h, d),
            Err(e) if e.is_budget() => rep.push("rank-sandwich", None, e.to_string()),
            Err(e) => rep.push("rank-sandwich", Some(false), e.to_string()),
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fl(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u64, n: usize, t: &[(i64, &[u32])]) -> MultiPoly {
        MultiPoly::from_terms(fl(p), n, t.iter().map(|(c, e)| (*c, e.to_vec()))).unwrap()
    }

    fn matrix_rank(f: PrimeField, n: usize, coords: &[Fe]) -> usize {
        let rows = (0..n).map(|i| coords[i * n..(i + 1) * n].to_vec()).collect();
        crate::linalg::Matrix::from_rows(f, rows, n).rank()
    }

    #[test]
    fn schmidt_examples() {
        let ctx = Ctx::default();
        let r = schmidt_rank(&poly(2, 2, &[(1, &[1, 1])]), 3, &ctx).unwrap();
        assert_eq!(r.value, RankValue::Finite(1));
        let p = poly(2, 4, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]);
        let r = schmidt_rank(&p, 3, &ctx).unwrap();
        assert_eq!(r.value, RankValue::Finite(2));
        assert!(r.certificate.unwrap().verify(&p));
        assert_eq!(schmidt_rank(&poly(3, 2, &[(1, &[1, 0])]), 3, &ctx).unwrap().value, RankValue::Infinite);
        assert_eq!(schmidt_rank(&MultiPoly::zero(fl(3), 2), 3, &ctx).unwrap().value, RankValue::Finite(0));
    }

    #[test]
    fn schmidt_cubic_small() {
        let ctx = Ctx::default();
        let p = poly(2, 3, &[(1, &[1, 1, 1])]);
        assert_eq!(schmidt_rank(&p, 2, &ctx).unwrap().value, RankValue::Finite(1));
    }

    #[test]
    fn partition_examples() {
        let ctx = Ctx::default();
        let f2 = fl(2);
        let t = tensor_from_coords(f2, 2, 1, &[Fe(1)]);
        assert_eq!(partition_rank(&t, 3, &ctx).unwrap().value, RankValue::Finite(1));
        // P̃ of x1y1 + x2y2 is the 4x4 matrix [[0, I], [I, 0]]
        let p = poly(2, 4, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]);
        let t = p.multilinear_form().unwrap();
        assert_eq!(partition_rank(&t, 5, &ctx).unwrap().value, RankValue::Finite(4));
        let z = tensor_from_coords(f2, 2, 2, &[Fe(0); 4]);
        assert_eq!(partition_rank(&z, 3, &ctx).unwrap().value, RankValue::Finite(0));
    }

    #[test]
    fn bilinear_partition_rank_is_matrix_rank() {
        let ctx = Ctx::default();
        let f3 = fl(3);
        let mut s = PartitionSearch::new(f3, 2, 2, &ctx).unwrap();
        for code in 0..81u64 {
            let c = crate::poly::decode(code, 4, 3);
            let t = tensor_from_coords(f3, 2, 2, &c);
            let expected = matrix_rank(f3, 2, &c) as u32;
            assert_eq!(s.rank(&t, 3, &ctx).unwrap().value, RankValue::Finite(expected));
        }
    }

    #[test]
    fn nc_rank_examples() {
        let ctx = Ctx::default();
        let r = nc_rank(&poly(2, 2, &[(1, &[1, 1])]), 3, &ctx).unwrap();
        assert_eq!(r.value(), Some(RankValue::Finite(2)));
        let r = nc_rank(&poly(5, 2, &[(1, &[1, 0])]), 3, &ctx).unwrap();
        assert_eq!(r.value(), Some(RankValue::Infinite));
    }

    #[test]
    fn bias_bounds() {
        let ctx = Ctx::default();
        let f2 = fl(2);
        let p = poly(2, 4, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]);
        let b = prank_lower_bound_from_bias(&p.multilinear_form().unwrap(), &ctx).unwrap();
        assert_eq!(b.bias, BigRational::new(1.into(), 16.into()));
        assert_eq!(b.bound, Some(3));
        let z = tensor_from_coords(f2, 2, 2, &[Fe(0); 4]);
        assert_eq!(prank_lower_bound_from_bias(&z, &ctx).unwrap().bound, None);
        let t = tensor_from_coords(f2, 2, 1, &[Fe(1)]);
        let b = prank_lower_bound_from_bias(&t, &ctx).unwrap();
        assert_eq!(b.bias, BigRational::new(1.into(), 2.into()));
        assert_eq!(b.bound, Some(0));
    }

    #[test]
    fn family_examples() {
        let ctx = Ctx::default();
        let a = poly(2, 4, &[(1, &[1, 1, 0, 0])]);
        let b = poly(2, 4, &[(1, &[0, 0, 1, 1])]);
        let r = family_rank(&PolyFamily::new(vec![a.clone(), b]).unwrap(), 3, &ctx).unwrap();
        assert_eq!(r.value, RankValue::Finite(1));
        assert!(!r.dependent);
        let r = family_rank(&PolyFamily::new(vec![a.clone(), a.clone()]).unwrap(), 3, &ctx).unwrap();
        assert!(r.dependent);
        assert_eq!(r.span_dim, 1);
        assert_eq!(r.value, RankValue::Finite(1));
    }

    #[test]
    fn pool_search_recovers_bilinear() {
        let ctx = Ctx::default();
        // Σ x_i y_i is invariant; its polar form has pool rank equal to its rank
        let p = poly(3, 4, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]);
        let t = p.multilinear_form().unwrap();
        let (res, pool) = invariant_pool_rank(&t, 4, &ctx).unwrap();
        assert!(pool > 0);
        assert!(matches!(res.value, RankValue::Finite(_) | RankValue::Exceeds(_)));
    }

    #[test]
    fn char2_quartic_pool_certificate() {
        let ctx = Ctx::default();
        let f2 = fl(2);
        let mut p = MultiPoly::zero(f2, 5);
        for skip in 0..5 {
            let e: Vec<u32> = (0..5).map(|i| u32::from(i != skip)).collect();
            p.add_term(Monomial(e), Fe(1));
        }
        let t = p.multilinear_form().unwrap();
        let (res, pool) = invariant_pool_rank(&t, 3, &ctx).unwrap();
        assert!(pool > 100);
        let r = res.value.finite().unwrap();
        assert!(r <= 3);
        assert!(res.certificate.unwrap().verify(&t.poly));
    }

    #[test]
    fn set_partition_counts() {
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(set_partitions(4).len(), 15);
        assert_eq!(invariant_basis(5, 2).len(), 2);
        assert_eq!(invariant_basis(2, 3).len(), 4);
    }

    #[test]
    fn budget_is_per_level() {
        let p = poly(2, 4, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]);
        let mut s = SchmidtSearch::new(fl(2), 4, 2, &Ctx::default()).unwrap();
        let tight = Ctx::new(s.num_products() as u64 * 20, 1);
        let r = s.rank(&p, 3, &tight).unwrap();
        assert_eq!(r.log[0], LevelOutcome::No { r: 1 });
        assert!(r.value.is_decided() || matches!(r.value, RankValue::Undecided { above: 1 }));
    }
}
