//! Points of `X = {P_1 = … = P_c = 0}`, affine subspaces inside `X`, and the
//! composition fibers of `φ ↦ P̄ ∘ φ`.

use num_rational::BigRational;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

use crate::affine::{AffineEquations, AffineFunctional, AffineSubspace};
use crate::analytic::{eval_table_checked, rat_string};
use crate::ctx::{mul_cost, pow_cost, Ctx};
use crate::error::{Error, Result};
use crate::gf::{Fe, PrimeField};
use crate::poly::{decode, encode, interpolate_table, monomials_up_to, MultiPoly, PolyFamily};

/// An exact ratio whose empty case (`0/0`) is a legitimate answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        Ratio { num, den }
    }

    pub fn value(&self) -> Option<BigRational> {
        (self.den != 0).then(|| BigRational::new(self.num.into(), self.den.into()))
    }

    pub fn is_empty(&self) -> bool {
        self.den == 0
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{}", rat_string(&v)),
            None => write!(f, "undefined/empty"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The `k`-points of a subset of `k^n`, sorted in code order.
#[derive(Clone, Debug)]
pub struct VarietyPoints {
    field: PrimeField,
    n: usize,
    points: Vec<Vec<Fe>>,
    codes: Vec<u64>,
    member: Vec<bool>,
}

impl VarietyPoints {
    pub fn from_member(field: PrimeField, n: usize, member: Vec<bool>) -> Self {
        let q = field.p() as u64;
        let codes: Vec<u64> = (0..member.len() as u64).filter(|&c| member[c as usize]).collect();
        let points = codes.iter().map(|&c| decode(c, n, q)).collect();
        VarietyPoints {
            field,
            n,
            points,
            codes,
            member,
        }
    }

    pub fn from_points(field: PrimeField, n: usize, pts: &[Vec<Fe>]) -> Self {
        let q = field.p() as u64;
        let mut member = vec![false; q.pow(n as u32) as usize];
        for x in pts {
            member[encode(x, q) as usize] = true;
        }
        Self::from_member(field, n, member)
    }

    pub fn whole(field: PrimeField, n: usize) -> Self {
        let q = field.p() as u64;
        Self::from_member(field, n, vec![true; q.pow(n as u32) as usize])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Fe>] {
        &self.points
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn contains(&self, x: &[Fe]) -> bool {
        self.member[encode(x, self.field.p() as u64) as usize]
    }

    pub fn contains_code(&self, c: u64) -> bool {
        self.member[c as usize]
    }

    /// Ordinal of a point in the sorted list.
    pub fn index(&self, x: &[Fe]) -> Option<usize> {
        self.codes.binary_search(&encode(x, self.field.p() as u64)).ok()
    }

    pub fn filter(&self, keep: impl Fn(&[Fe]) -> bool) -> VarietyPoints {
        let mut member = vec![false; self.member.len()];
        for (x, &c) in self.points.iter().zip(&self.codes) {
            if keep(x) {
                member[c as usize] = true;
            }
        }
        Self::from_member(self.field, self.n, member)
    }
}

pub fn enumerate_points(fam: &PolyFamily, ctx: &Ctx) -> Result<VarietyPoints> {
    let field = fam.field();
    let n = fam.nvars();
    let q = field.p() as u64;
    let size = q.pow(n as u32) as usize;
    let mut member = vec![true; size];
    for p in fam.polys() {
        let t = eval_table_checked(p, ctx)?;
        for (m, v) in member.iter_mut().zip(t) {
            *m &= v.is_zero();
        }
    }
    if fam.is_empty() {
        ctx.check(size as u128, "point enumeration")?;
    }
    Ok(VarietyPoints::from_member(field, n, member))
}

/// `X_I = {x ∈ X : l(x) ∈ I}`.
pub fn slice(x: &VarietyPoints, l: &AffineFunctional, levels: &[Fe]) -> VarietyPoints {
    let f = x.field();
    x.filter(|p| levels.contains(&l.eval(&f, p)))
}

/// Reduced row echelon `m × n` matrices of rank `m`, in a fixed order.
pub fn echelon_bases(field: PrimeField, m: usize, n: usize) -> Vec<Vec<Vec<Fe>>> {
    let q = field.p() as u64;
    let mut out = Vec::new();
    if m > n {
        return out;
    }
    let mut piv: Vec<usize> = (0..m).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| {
                let piv = &piv;
                (piv[i] + 1..n).filter(move |j| !piv.contains(j)).map(move |j| (i, j))
            })
            .collect();
        for code in 0..q.pow(free.len() as u32) {
            let vals = decode(code, free.len(), q);
            let mut rows = vec![vec![Fe::ZERO; n]; m];
            for (i, &p) in piv.iter().enumerate() {
                rows[i][p] = Fe::ONE;
            }
            for (&(i, j), &v) in free.iter().zip(&vals) {
                rows[i][j] = v;
            }
            out.push(rows);
        }
        // next combination
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if piv[i] < n - m + i {
                piv[i] += 1;
                for k in i + 1..m {
                    piv[k] = piv[k - 1] + 1;
                }
                break;
            }
        }
    }
}

fn add_scaled(f: &PrimeField, x: &mut [Fe], t: Fe, v: &[Fe]) {
    if t.is_zero() {
        return;
    }
    for (a, &b) in x.iter_mut().zip(v) {
        *a = f.add(*a, f.mul(t, b));
    }
}

/// True iff every point `base + Σ t_i dirs_i` lies in `x` (and in `w`).
fn span_inside(x: &VarietyPoints, w: Option<&AffineEquations>, base: &[Fe], dirs: &[Vec<Fe>]) -> bool {
    let f = x.field();
    let q = f.p() as u64;
    let m = dirs.len();
    // Cheap rejections along the directions first.
    for v in dirs {
        let mut p = base.to_vec();
        add_scaled(&f, &mut p, Fe::ONE, v);
        if !x.contains(&p) || w.is_some_and(|w| !w.contains(&f, &p)) {
            return false;
        }
    }
    for c in 0..q.pow(m as u32) {
        let t = decode(c, m, q);
        let mut p = base.to_vec();
        for (ti, v) in t.iter().zip(dirs) {
            add_scaled(&f, &mut p, *ti, v);
        }
        if !x.contains(&p) || w.is_some_and(|w| !w.contains(&f, &p)) {
            return false;
        }
    }
    true
}

/// All `m`-dimensional affine subspaces contained in `X` (and in `W`), one
/// canonical representative each, sorted.
pub fn enumerate_subspaces_in(
    x: &VarietyPoints,
    m: usize,
    w: Option<&AffineEquations>,
    ctx: &Ctx,
) -> Result<Vec<AffineSubspace>> {
    let f = x.field();
    let n = x.ambient_dim();
    if m > n {
        return Ok(Vec::new());
    }
    let q = f.p() as u128;
    // Gaussian binomial times |X| base candidates times q^m checks
    let mut grass = 1f64;
    for i in 0..m {
        grass *= (q as f64).powi((n - i) as i32) - 1.0;
        grass /= (q as f64).powi((m - i) as i32) - 1.0;
    }
    let cost = grass * x.len() as f64 * (q as f64).powi(m as i32);
    ctx.check(cost.min(u128::MAX as f64 / 2.0) as u128, "subspace enumeration")?;
    let bases = echelon_bases(f, m, n);
    let found: Vec<Vec<AffineSubspace>> = ctx.par_map(&bases, |rows| {
        let piv: Vec<usize> = rows.iter().map(|r| r.iter().position(|v| !v.is_zero()).unwrap()).collect();
        x.points()
            .iter()
            .filter(|p| piv.iter().all(|&j| p[j].is_zero()))
            .filter(|p| span_inside(x, w, p, rows))
            .map(|p| AffineSubspace::from_canonical_parts(f, p.clone(), rows.clone()))
            .collect()
    });
    let mut out: Vec<AffineSubspace> = found.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

/// Directions completing `L` to an `(m+1)`-space: zero on the pivots of `L`,
/// first nonzero entry 1.
fn completion_directions(l: &AffineSubspace) -> Vec<Vec<Fe>> {
    let f = l.field();
    let q = f.p() as u64;
    let n = l.ambient_dim();
    let piv = l.pivots();
    let free: Vec<usize> = (0..n).filter(|j| !piv.contains(j)).collect();
    let mut out = Vec::new();
    for c in 1..q.pow(free.len() as u32) {
        let vals = decode(c, free.len(), q);
        if vals.iter().find(|v| !v.is_zero()).unwrap().0 != 1 {
            continue;
        }
        let mut v = vec![Fe::ZERO; n];
        for (&j, &a) in free.iter().zip(&vals) {
            v[j] = a;
        }
        out.push(v);
    }
    out
}

/// All `(m+1)`-spaces `M ⊂ X` containing `L` for which `accept(M)` holds;
/// stops at the first when `first_only`.
fn extensions_of(
    x: &VarietyPoints,
    l: &AffineSubspace,
    first_only: bool,
    accept: impl Fn(&[Fe]) -> bool,
) -> Vec<AffineSubspace> {
    let mut out = Vec::new();
    let lpts = l.points();
    let f = x.field();
    let q = f.p();
    for v in completion_directions(l) {
        if !accept(&v) {
            continue;
        }
        let ok = (1..q).all(|s| {
            lpts.iter().all(|p| {
                let mut pt = p.clone();
                add_scaled(&f, &mut pt, Fe(s), &v);
                x.contains(&pt)
            })
        });
        if ok {
            out.push(l.extend(&v).expect("independent direction"));
            if first_only {
                break;
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SubspaceCensus {
    pub m: usize,
    pub z: Vec<AffineSubspace>,
    pub y: Vec<AffineSubspace>,
    pub ratio: Ratio,
}

/// `Z`: `m`-spaces in `X ∩ W`; `Y ⊆ Z`: those not contained in any
/// `(m+1)`-space `M ⊂ X` with `M ⊄ W`.
pub fn census_yz(fam: &PolyFamily, w: &AffineEquations, m: usize, ctx: &Ctx) -> Result<SubspaceCensus> {
    let x = enumerate_points(fam, ctx)?;
    census_yz_on(&x, w, m, ctx)
}

pub fn census_yz_on(x: &VarietyPoints, w: &AffineEquations, m: usize, ctx: &Ctx) -> Result<SubspaceCensus> {
    let f = x.field();
    let z = enumerate_subspaces_in(x, m, Some(w), ctx)?;
    let n = x.ambient_dim();
    let per = pow_cost(f.p() as u128, n - m.min(n) + m + 1);
    ctx.check(mul_cost(&[z.len() as u128, per]), "census extension check")?;
    let flags: Vec<bool> = ctx.par_map(&z, |l| {
        let base = l.base().to_vec();
        extensions_of(x, l, true, |v| {
            let mut p = base.clone();
            add_scaled(&f, &mut p, Fe::ONE, v);
            !w.contains(&f, &p)
        })
        .is_empty()
    });
    let y: Vec<AffineSubspace> = z.iter().zip(&flags).filter(|(_, &b)| b).map(|(l, _)| l.clone()).collect();
    let ratio = Ratio::new(y.len() as u64, z.len() as u64);
    Ok(SubspaceCensus { m, z, y, ratio })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionFraction {
    pub total: u64,
    pub extendable: u64,
    pub ratio: Ratio,
}

/// Fraction of `m`-spaces `L ⊂ X_b` lying in some `(m+1)`-space `M ⊂ X`
/// that meets `X_0`.
pub fn line_plane_extension_fraction(
    fam: &PolyFamily,
    l: &AffineFunctional,
    b: Fe,
    m: usize,
    ctx: &Ctx,
) -> Result<ExtensionFraction> {
    let x = enumerate_points(fam, ctx)?;
    let f = x.field();
    let xb = slice(&x, l, &[b]);
    let ls = enumerate_subspaces_in(&xb, m, None, ctx)?;
    let flags: Vec<bool> = ctx.par_map(&ls, |sub| {
        // M ∩ {l = 0} ≠ ∅ iff l is nonconstant on M, or b = 0
        !extensions_of(&x, sub, true, |v| b.is_zero() || !l.eval_linear(&f, v).is_zero()).is_empty()
    });
    let extendable = flags.iter().filter(|&&v| v).count() as u64;
    Ok(ExtensionFraction {
        total: ls.len() as u64,
        extendable,
        ratio: Ratio::new(extendable, ls.len() as u64),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaFibers {
    pub m: usize,
    pub homogeneous: bool,
    pub maps: u64,
    /// Size of the target space `∏ q^{dim_i}`.
    pub targets: u128,
    pub attained: u64,
    /// Value tables of `P̄ ∘ φ` on `k^m` (concatenated over the family) to fiber size.
    #[serde(skip)]
    pub fibers: BTreeMap<Vec<Fe>, u64>,
    pub min: u64,
    pub max: u64,
    /// `|1 − n_min/n_max|` over every target, exact.
    pub deviation: Ratio,
}

fn target_dims(fam: &PolyFamily, m: usize, homogeneous: bool) -> Vec<usize> {
    let q = fam.field().p();
    fam.polys()
        .iter()
        .map(|p| {
            let d = p.degree();
            if homogeneous {
                let mut red: Vec<_> = monomials_up_to(m, d, d)
                    .into_iter()
                    .filter(|mo| mo.degree() == d)
                    .map(|mo| mo.reduced(q))
                    .collect();
                red.sort();
                red.dedup();
                red.len()
            } else {
                monomials_up_to(m, d, q - 1).len()
            }
        })
        .collect()
}

/// Fibers of `φ ↦ P̄ ∘ φ` over all affine (or, when `homogeneous`, linear)
/// maps `φ: k^m → k^n`.
pub fn kappa_fibers(fam: &PolyFamily, m: usize, homogeneous: bool, ctx: &Ctx) -> Result<KappaFibers> {
    let field = fam.field();
    let q = field.p() as u64;
    let n = fam.nvars();
    if homogeneous && fam.polys().iter().any(|p| !p.is_homogeneous()) {
        return Err(Error::Precondition("linear-map variant needs homogeneous polynomials".into()));
    }
    let cols = if homogeneous { m } else { m + 1 };
    let maps = pow_cost(q as u128, n * cols);
    ctx.check(mul_cost(&[maps, pow_cost(q as u128, m), (n * cols) as u128]), "composition fibers")?;
    let qm = q.pow(m as u32);
    let tables: Vec<Vec<Fe>> = fam.polys().iter().map(|p| eval_table_checked(p, ctx)).collect::<Result<_>>()?;
    let ts: Vec<Vec<Fe>> = (0..qm).map(|c| decode(c, m, q)).collect();
    let maps = maps as u64;
    let fibers = ctx.fold_range(
        maps,
        HashMap::<Vec<Fe>, u64>::new,
        |acc, r| {
            let mut pt = vec![Fe::ZERO; n];
            for code in r {
                // digits: offset (n, affine only) then the columns
                let digits = decode(code, n * cols, q);
                let (offset, mat) = if homogeneous {
                    (vec![Fe::ZERO; n], &digits[..])
                } else {
                    (digits[..n].to_vec(), &digits[n..])
                };
                let mut key = Vec::with_capacity(tables.len() * qm as usize);
                let mut codes = Vec::with_capacity(qm as usize);
                for t in &ts {
                    pt.copy_from_slice(&offset);
                    for (j, &tj) in t.iter().enumerate() {
                        add_scaled(&field, &mut pt, tj, &mat[j * n..(j + 1) * n]);
                    }
                    codes.push(encode(&pt, q) as usize);
                }
                for tab in &tables {
                    key.extend(codes.iter().map(|&c| tab[c]));
                }
                *acc.entry(key).or_insert(0) += 1;
            }
        },
        |a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
        },
    );
    let fibers: BTreeMap<Vec<Fe>, u64> = fibers.into_iter().collect();
    let dims = target_dims(fam, m, homogeneous);
    let targets = mul_cost(&dims.iter().map(|&d| pow_cost(q as u128, d)).collect::<Vec<_>>());
    let attained = fibers.len() as u64;
    let max = fibers.values().copied().max().unwrap_or(0);
    let min = if (attained as u128) < targets {
        0
    } else {
        fibers.values().copied().min().unwrap_or(0)
    };
    Ok(KappaFibers {
        m,
        homogeneous,
        maps,
        targets,
        attained,
        fibers,
        min,
        max,
        deviation: Ratio::new(max - min, max),
    })
}

impl KappaFibers {
    /// Fiber keys as target tuples of reduced polynomials on `k^m`.
    pub fn key_polys(&self, field: PrimeField, key: &[Fe]) -> Vec<MultiPoly> {
        let qm = (field.p() as usize).pow(self.m as u32);
        key.chunks(qm)
            .map(|c| interpolate_table(field, self.m, c).expect("table size"))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Universality {
    pub universal: bool,
    pub missed: u128,
    /// Up to `limit` missed target tuples.
    pub witnesses: Vec<Vec<MultiPoly>>,
    pub fibers: KappaFibers,
}

/// Every target tuple of degree `<= d_i` polynomials on `k^m` is some `P̄ ∘ φ`.
pub fn universality_check(fam: &PolyFamily, m: usize, limit: usize, ctx: &Ctx) -> Result<Universality> {
    let fibers = kappa_fibers(fam, m, false, ctx)?;
    let field = fam.field();
    let q = field.p() as u64;
    let missed = fibers.targets - fibers.attained as u128;
    let mut witnesses = Vec::new();
    if missed > 0 && limit > 0 {
        ctx.check(mul_cost(&[fibers.targets, pow_cost(q as u128, m)]), "listing missed targets")?;
        let spaces: Vec<Vec<crate::poly::Monomial>> = fam
            .polys()
            .iter()
            .map(|p| monomials_up_to(m, p.degree(), field.p() - 1))
            .collect();
        let total_dim: usize = spaces.iter().map(Vec::len).sum();
        for code in 0..(fibers.targets as u64) {
            let c = decode(code, total_dim, q);
            let mut polys = Vec::new();
            let mut key = Vec::new();
            let mut off = 0;
            for sp in &spaces {
                let mut p = MultiPoly::zero(field, m);
                for (mo, &a) in sp.iter().zip(&c[off..off + sp.len()]) {
                    p.add_term(mo.clone(), a);
                }
                off += sp.len();
                key.extend(p.eval_table());
                polys.push(p);
            }
            if !fibers.fibers.contains_key(&key) {
                witnesses.push(polys);
                if witnesses.len() >= limit {
                    break;
                }
            }
        }
    }
    Ok(Universality {
        universal: missed == 0,
        missed,
        witnesses,
        fibers,
    })
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

    #[test]
    fn point_examples() {
        let ctx = Ctx::default();
        let x = enumerate_points(&PolyFamily::single(poly(3, 2, &[(1, &[1, 1])])), &ctx).unwrap();
        assert_eq!(x.len(), 5);
        let x = enumerate_points(&PolyFamily::single(poly(5, 1, &[(1, &[1])])), &ctx).unwrap();
        assert_eq!(x.points(), &[vec![Fe(0)]]);
        let fam = PolyFamily::new(vec![poly(5, 1, &[(1, &[1])]), poly(5, 1, &[(1, &[1]), (1, &[0])])]).unwrap();
        assert!(enumerate_points(&fam, &ctx).unwrap().is_empty());
    }

    #[test]
    fn echelon_counts_are_gaussian_binomials() {
        let f3 = fl(3);
        assert_eq!(echelon_bases(f3, 1, 2).len(), 4);
        assert_eq!(echelon_bases(f3, 2, 4).len(), 130);
        assert_eq!(echelon_bases(fl(2), 3, 4).len(), 15);
        assert_eq!(echelon_bases(f3, 0, 3).len(), 1);
    }

    #[test]
    fn lines_in_cross() {
        let ctx = Ctx::default();
        let x = enumerate_points(&PolyFamily::single(poly(3, 2, &[(1, &[1, 1])])), &ctx).unwrap();
        let lines = enumerate_subspaces_in(&x, 1, None, &ctx).unwrap();
        // xy = 0 is the union of the two axes
        assert_eq!(lines.len(), 2);
        let axis = AffineSubspace::new(fl(3), vec![Fe(0), Fe(0)], vec![vec![Fe(1), Fe(0)]]).unwrap();
        assert!(lines.contains(&axis));
        assert!(enumerate_subspaces_in(&x, 2, None, &ctx).unwrap().is_empty());
    }

    #[test]
    fn subspaces_of_whole_space() {
        let ctx = Ctx::default();
        let x = VarietyPoints::whole(fl(3), 2);
        // 4 directions times 3 parallel translates
        assert_eq!(enumerate_subspaces_in(&x, 1, None, &ctx).unwrap().len(), 12);
        assert_eq!(enumerate_subspaces_in(&x, 2, None, &ctx).unwrap().len(), 1);
    }

    #[test]
    fn slices() {
        let ctx = Ctx::default();
        let x = enumerate_points(&PolyFamily::single(poly(3, 2, &[(1, &[1, 1])])), &ctx).unwrap();
        let l = AffineFunctional::coordinate(2, 0);
        assert_eq!(slice(&x, &l, &[Fe(0)]).len(), 3);
        let all: Vec<Fe> = fl(3).elements().collect();
        assert_eq!(slice(&x, &l, &all).len(), 5);
        assert!(slice(&x, &l, &[]).is_empty());
    }

    #[test]
    fn census_empty_is_undefined() {
        let ctx = Ctx::default();
        let p = poly(3, 2, &[(1, &[2, 0]), (1, &[0, 0])]);
        let w = AffineEquations::hyperplane(vec![Fe(0), Fe(1)], Fe(0));
        let c = census_yz(&PolyFamily::single(p), &w, 1, &ctx).unwrap();
        assert!(c.z.is_empty());
        assert!(c.ratio.is_empty());
        assert_eq!(c.ratio.to_string(), "undefined/empty");
    }

    #[test]
    fn kappa_counts() {
        let ctx = Ctx::default();
        let p = poly(3, 4, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]);
        let k = kappa_fibers(&PolyFamily::single(p), 1, false, &ctx).unwrap();
        assert_eq!(k.maps, 6561);
        assert_eq!(k.targets, 27);
        assert_eq!(k.attained, 27);
        assert_eq!(k.fibers.values().sum::<u64>(), 6561);
        let lin = poly(5, 2, &[(1, &[1, 0])]);
        let k = kappa_fibers(&PolyFamily::single(lin), 1, false, &ctx).unwrap();
        assert_eq!(k.deviation, Ratio::new(0, k.max));
    }

    #[test]
    fn rank_one_quadric_is_not_universal() {
        let ctx = Ctx::default();
        let u = universality_check(&PolyFamily::single(poly(2, 2, &[(1, &[1, 1])])), 2, 4, &ctx).unwrap();
        assert!(!u.universal);
        assert!(!u.witnesses.is_empty());
    }
}
