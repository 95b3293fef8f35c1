//! Exact character sums.
//!
//! A sum `Σ_x e_p(f(x))` is stored as the histogram of `f` over `F_p`, which
//! is the cyclotomic integer `Σ_a c_a ζ^a`. Products and magnitudes are taken
//! in the ring `Z[ζ]` with the normal form `r_{p-1} = 0`; a value is rational
//! exactly when every other non-constant coordinate vanishes as well.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::ctx::{mul_cost, pow_cost, Ctx};
use crate::error::{Error, Result};
use crate::gf::{Fe, PrimeField};
use crate::poly::{decode, encode, MultiPoly, MultilinearForm, PolyFamily};

/// Exact counts of a `F_p`-valued expression over an enumerated domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharHistogram {
    pub counts: Vec<u64>,
    pub domain_size: u64,
}

impl CharHistogram {
    pub fn new(counts: Vec<u64>) -> Self {
        let domain_size = counts.iter().sum();
        CharHistogram { counts, domain_size }
    }

    pub fn p(&self) -> usize {
        self.counts.len()
    }

    pub fn from_values(p: u32, values: &[Fe]) -> Self {
        let mut counts = vec![0u64; p as usize];
        for v in values {
            counts[v.0 as usize] += 1;
        }
        Self::new(counts)
    }

    /// The sum `Σ c_a ζ^a` as a cyclotomic integer.
    pub fn sum(&self) -> CycloInt {
        CycloInt::new(self.counts.iter().map(|&c| c as i128).collect())
    }

    /// `|Σ c_a ζ^a|^2`, whose `k`-th raw coordinate is `Σ_a c_a c_{a-k}`.
    pub fn magnitude_squared(&self) -> CycloInt {
        let p = self.p();
        let mut r = vec![0i128; p];
        for (k, rk) in r.iter_mut().enumerate() {
            for a in 0..p {
                *rk += self.counts[a] as i128 * self.counts[(a + p - k) % p] as i128;
            }
        }
        CycloInt::new(r)
    }

    /// Presentation-only complex value of the normalised sum.
    pub fn float_mean(&self) -> (f64, f64) {
        let p = self.p() as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (a, &c) in self.counts.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * a as f64 / p;
            re += c as f64 * t.cos();
            im += c as f64 * t.sin();
        }
        let n = self.domain_size.max(1) as f64;
        (re / n, im / n)
    }

    pub fn merge(&mut self, other: &CharHistogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.domain_size += other.domain_size;
    }
}

/// An element of `Z[ζ_p]` in the normal form `coeffs[p-1] = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycloInt {
    pub coeffs: Vec<i128>,
}

impl CycloInt {
    pub fn new(mut raw: Vec<i128>) -> Self {
        let last = *raw.last().unwrap_or(&0);
        if last != 0 {
            for c in raw.iter_mut() {
                *c -= last;
            }
        }
        CycloInt { coeffs: raw }
    }

    pub fn is_rational(&self) -> bool {
        let p = self.coeffs.len();
        p <= 1 || self.coeffs[1..p - 1].iter().all(|&c| c == 0)
    }

    pub fn rational(&self) -> Option<i128> {
        self.is_rational().then(|| self.coeffs.first().copied().unwrap_or(0))
    }

    pub fn float(&self) -> f64 {
        let p = self.coeffs.len() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c as f64 * (2.0 * std::f64::consts::PI * k as f64 / p).cos())
            .sum()
    }
}

/// `|E e_p(·)|` with the histogram kept as the exact truth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactMagnitude {
    pub histogram: CharHistogram,
    /// The normal-form vector of `|Σ|^2`.
    pub cyclo_squared: CycloInt,
    /// `|E|^2` when it is rational.
    #[serde(serialize_with = "ser_opt_rat")]
    pub magnitude_squared: Option<BigRational>,
    /// `|E|` when it is rational.
    #[serde(serialize_with = "ser_opt_rat")]
    pub magnitude: Option<BigRational>,
    pub float: f64,
}

pub fn rat_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ser_opt_rat<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&rat_string(r)),
        None => s.serialize_none(),
    }
}

fn ser_rat<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_string(v))
}

fn rat(n: i128, d: u128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a nonnegative rational, if it exists.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

impl ExactMagnitude {
    pub fn from_histogram(histogram: CharHistogram) -> Self {
        let cyclo = histogram.magnitude_squared();
        let n = histogram.domain_size as u128;
        let magnitude_squared = cyclo.rational().map(|v| rat(v, n * n));
        let magnitude = magnitude_squared.as_ref().and_then(rational_sqrt);
        let float = cyclo.float().max(0.0).sqrt() / n.max(1) as f64;
        ExactMagnitude {
            histogram,
            cyclo_squared: cyclo,
            magnitude_squared,
            magnitude,
            float,
        }
    }

    /// `|E|^2` compared exactly against a rational; `None` when `|E|^2` is irrational.
    pub fn squared_le(&self, bound: &BigRational) -> Option<bool> {
        self.magnitude_squared.as_ref().map(|m| m <= bound)
    }
}

/// Values of `P` on all of `k^n`, refused above the budget.
pub fn eval_table_checked(p: &MultiPoly, ctx: &Ctx) -> Result<Vec<Fe>> {
    let q = p.field().p() as u128;
    ctx.check(mul_cost(&[pow_cost(q, p.nvars()), p.nvars().max(1) as u128]), "dense evaluation table")?;
    Ok(p.eval_table())
}

fn histogram_of_table(ctx: &Ctx, p: u32, table: &[Fe]) -> CharHistogram {
    let counts = ctx.histogram(table.len() as u64, p as usize, |r, h| {
        for i in r {
            h[table[i as usize].0 as usize] += 1;
        }
    });
    CharHistogram::new(counts)
}

/// `|E_{x ∈ k^n} e_p(P(x))|`.
pub fn bias(p: &MultiPoly, ctx: &Ctx) -> Result<ExactMagnitude> {
    let table = eval_table_checked(p, ctx)?;
    Ok(ExactMagnitude::from_histogram(histogram_of_table(
        ctx,
        p.field().p(),
        &table,
    )))
}

/// `‖e_p(P)‖_{U_d}^{2^d}` and what can be extracted from it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GowersNorm {
    pub d: usize,
    pub histogram: CharHistogram,
    pub power_cyclo: CycloInt,
    /// The `2^d`-th power of the norm, when rational.
    #[serde(serialize_with = "ser_opt_rat")]
    pub power: Option<BigRational>,
    /// The norm itself, when the `2^d`-th root is rational.
    #[serde(serialize_with = "ser_opt_rat")]
    pub norm: Option<BigRational>,
    pub float: f64,
}

impl GowersNorm {
    fn from_histogram(d: usize, histogram: CharHistogram) -> Self {
        let cyclo = histogram.sum();
        let n = histogram.domain_size as u128;
        let power = cyclo.rational().map(|v| rat(v, n));
        let mut norm = power.clone();
        for _ in 0..d {
            norm = norm.as_ref().and_then(rational_sqrt);
        }
        let pf = cyclo.float() / n.max(1) as f64;
        let float = pf.max(0.0).powf(1.0 / (1u64 << d) as f64);
        GowersNorm {
            d,
            histogram,
            power_cyclo: cyclo,
            power,
            norm,
            float,
        }
    }
}

/// Gowers norm through `‖e(P)‖^{2^d} = E_h e(P̃(h))`, valid for `deg P <= d`.
pub fn gowers_norm(p: &MultiPoly, d: usize, ctx: &Ctx) -> Result<GowersNorm> {
    let red = p.reduce_function();
    if red.degree() as usize > d {
        return Err(Error::Precondition(format!(
            "degree {} exceeds the norm order {d}; use the direct path",
            red.degree()
        )));
    }
    let q = p.field().p() as u128;
    ctx.check(pow_cost(q, p.nvars() * d), "multilinear-form histogram over V^d")?;
    let t = red.multilinear_form_order(d)?;
    let hist = form_histogram(&t, ctx)?;
    Ok(GowersNorm::from_histogram(d, hist))
}

/// Histogram of a multilinear form over `V^d`.
pub fn form_histogram(t: &MultilinearForm, ctx: &Ctx) -> Result<CharHistogram> {
    let table = eval_table_checked(&t.poly, ctx)?;
    Ok(histogram_of_table(ctx, t.field().p(), &table))
}

/// The defining average over `V^{d+1}` of `e(Σ_ω (-1)^{|ω|} P(x + ω·h))`.
pub fn gowers_norm_direct(p: &MultiPoly, d: usize, ctx: &Ctx) -> Result<GowersNorm> {
    let f = p.field();
    let q = f.p() as u64;
    let n = p.nvars();
    let cost = mul_cost(&[pow_cost(q as u128, n * (d + 1)), pow_cost(2, d)]);
    ctx.check(cost, "direct Gowers enumeration over V^{d+1}")?;
    let vsize = q.pow(n as u32);
    let table = p.eval_table();
    let hsize = vsize.pow(d as u32);
    let counts = ctx.histogram(vsize, f.p() as usize, |r, h| {
        let mut pt = vec![Fe::ZERO; n];
        for xc in r {
            let x = decode(xc, n, q);
            for hc in 0..hsize {
                let hs: Vec<Vec<Fe>> = (0..d)
                    .map(|i| decode(hc / vsize.pow((d - 1 - i) as u32) % vsize, n, q))
                    .collect();
                let mut acc = Fe::ZERO;
                for omega in 0u32..(1 << d) {
                    pt.copy_from_slice(&x);
                    for (i, hi) in hs.iter().enumerate() {
                        if omega >> i & 1 == 1 {
                            for j in 0..n {
                                pt[j] = f.add(pt[j], hi[j]);
                            }
                        }
                    }
                    let v = table[encode(&pt, q) as usize];
                    acc = if omega.count_ones() % 2 == 0 {
                        f.add(acc, v)
                    } else {
                        f.sub(acc, v)
                    };
                }
                h[acc.0 as usize] += 1;
            }
        }
    });
    Ok(GowersNorm::from_histogram(d, CharHistogram::new(counts)))
}

/// `-log_q ‖e(P)‖_{U_d}`, exact when the norm power is an integral power of q.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyticRank {
    #[serde(serialize_with = "ser_opt_rat")]
    pub exact: Option<BigRational>,
    pub float: f64,
    pub norm: GowersNorm,
}

pub fn analytic_rank(p: &MultiPoly, d: usize, ctx: &Ctx) -> Result<AnalyticRank> {
    let norm = gowers_norm(p, d, ctx)?;
    Ok(analytic_rank_from_norm(p.field().p(), norm))
}

pub fn analytic_rank_from_norm(q: u32, norm: GowersNorm) -> AnalyticRank {
    let d = norm.d;
    let exact = norm.power.as_ref().and_then(|v| {
        let k = neg_log_exact(v, q)?;
        Some(BigRational::new(BigInt::from(k), BigInt::from(1u64 << d)))
    });
    let float = match &norm.power {
        Some(v) => -(v.to_f64().unwrap_or(0.0)).ln() / (q as f64).ln() / (1u64 << d) as f64,
        None => -(norm.float.ln()) / (q as f64).ln(),
    };
    AnalyticRank { exact, float, norm }
}

/// `k` with `v = q^{-k}`.
fn neg_log_exact(v: &BigRational, q: u32) -> Option<u64> {
    if !v.numer().is_one() {
        return None;
    }
    let mut d = v.denom().clone();
    let qb = BigInt::from(q);
    let mut k = 0;
    while d > BigInt::one() {
        if !(&d % &qb).is_zero() {
            return None;
        }
        d /= &qb;
        k += 1;
    }
    Some(k)
}

/// Fiber counts of `P̄ : k^n -> k^c` and the uniformity defect.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueDistribution {
    /// Indexed by the code of `b̄` (first member most significant).
    pub counts: Vec<u64>,
    /// `max_b |q^c·count(b) - q^n| / q^n`.
    #[serde(serialize_with = "ser_rat")]
    pub epsilon: BigRational,
    pub epsilon_float: f64,
}

fn family_tables(fam: &PolyFamily, ctx: &Ctx) -> Result<Vec<Vec<Fe>>> {
    let q = fam.field().p() as u128;
    ctx.check(
        mul_cost(&[pow_cost(q, fam.nvars()), fam.len() as u128]),
        "family evaluation over k^n",
    )?;
    Ok(fam.polys().iter().map(|p| p.eval_table()).collect())
}

pub fn value_distribution(fam: &PolyFamily, ctx: &Ctx) -> Result<ValueDistribution> {
    let q = fam.field().p() as u64;
    let c = fam.len();
    let tables = family_tables(fam, ctx)?;
    let size = tables[0].len() as u64;
    let bins = q.pow(c as u32) as usize;
    let counts = ctx.histogram(size, bins, |r, h| {
        for i in r {
            let code = tables.iter().fold(0u64, |acc, t| acc * q + t[i as usize].0 as u64);
            h[code as usize] += 1;
        }
    });
    let qc = bins as i128;
    let worst = counts
        .iter()
        .map(|&k| (qc * k as i128 - size as i128).abs())
        .max()
        .unwrap_or(0);
    let epsilon = rat(worst, size as u128);
    let epsilon_float = epsilon.to_f64().unwrap_or(f64::NAN);
    Ok(ValueDistribution {
        counts,
        epsilon,
        epsilon_float,
    })
}

/// `#{x : P̄(x) = b̄}` through `q^{-c} Σ_{ā} Σ_x e(ā·(P̄(x) - b̄))`, evaluated in
/// `Z[ζ]` and required to be rational.
pub fn count_points_char_sum(fam: &PolyFamily, b: &[Fe], ctx: &Ctx) -> Result<u64> {
    let f: PrimeField = fam.field();
    let q = f.p() as u64;
    let c = fam.len();
    if b.len() != c {
        return Err(Error::DimensionMismatch {
            expected: c,
            got: b.len(),
        });
    }
    let tables = family_tables(fam, ctx)?;
    ctx.check(
        mul_cost(&[tables[0].len() as u128, pow_cost(q as u128, c)]),
        "character-sum point count",
    )?;
    let size = tables[0].len() as u64;
    let mut total = vec![0u64; q as usize];
    for acode in 0..q.pow(c as u32) {
        let a = decode(acode, c, q);
        let h = ctx.histogram(size, q as usize, |r, h| {
            for i in r {
                let mut s = Fe::ZERO;
                for ((t, &ai), &bi) in tables.iter().zip(&a).zip(b) {
                    s = f.add(s, f.mul(ai, f.sub(t[i as usize], bi)));
                }
                h[s.0 as usize] += 1;
            }
        });
        for (t, v) in total.iter_mut().zip(h) {
            *t += v;
        }
    }
    let s = CharHistogram::new(total).sum();
    let v = s
        .rational()
        .ok_or_else(|| Error::Verification("character-sum count is not rational".into()))?;
    let qc = q.pow(c as u32) as i128;
    if v < 0 || v % qc != 0 {
        return Err(Error::Verification(format!("character sum {v} not divisible by q^c")));
    }
    Ok((v / qc) as u64)
}

/// Direct enumeration count, the oracle for [`count_points_char_sum`].
pub fn count_points_direct(fam: &PolyFamily, b: &[Fe], ctx: &Ctx) -> Result<u64> {
    let tables = family_tables(fam, ctx)?;
    let size = tables[0].len();
    Ok((0..size)
        .filter(|&i| tables.iter().zip(b).all(|(t, bi)| t[i] == *bi))
        .count() as u64)
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

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// x1y1 + … + xnyn with block order (x1, y1, x2, y2, …).
    fn inner(p: u64, n: usize) -> MultiPoly {
        let mut terms = Vec::new();
        for i in 0..n {
            let mut e = vec![0u32; 2 * n];
            e[2 * i] = 1;
            e[2 * i + 1] = 1;
            terms.push((1i64, e));
        }
        MultiPoly::from_terms(fl(p), 2 * n, terms).unwrap()
    }

    #[test]
    fn bias_examples() {
        let ctx = Ctx::default();
        let b = bias(&poly(3, 1, &[(1, &[1])]), &ctx).unwrap();
        assert_eq!(b.magnitude, Some(r(0, 1)));
        let b = bias(&poly(2, 2, &[(1, &[1, 1])]), &ctx).unwrap();
        assert_eq!(b.histogram.counts, vec![3, 1]);
        assert_eq!(b.magnitude, Some(r(1, 2)));
        let b = bias(&MultiPoly::zero(fl(5), 2), &ctx).unwrap();
        assert_eq!(b.magnitude, Some(r(1, 1)));
    }

    #[test]
    fn gauss_sum_is_rational_in_magnitude() {
        // |Σ e_5(x^2)|^2 = 5
        let b = bias(&poly(5, 1, &[(1, &[2])]), &Ctx::default()).unwrap();
        assert_eq!(b.magnitude_squared, Some(r(5, 25)));
        assert_eq!(b.magnitude, None);
        assert!((b.float - (5f64).sqrt() / 5.0).abs() < 1e-12);
    }

    #[test]
    fn gowers_examples() {
        let ctx = Ctx::default();
        let g = gowers_norm(&poly(3, 2, &[(1, &[1, 0]), (2, &[0, 0])]), 2, &ctx).unwrap();
        assert_eq!(g.norm, Some(r(1, 1)));
        for n in 1..=2 {
            let p = inner(2, n);
            let g = gowers_norm(&p, 2, &ctx).unwrap();
            assert_eq!(g.power, Some(r(1, 4i64.pow(n as u32))));
            let direct = gowers_norm_direct(&p, 2, &ctx).unwrap();
            assert_eq!(direct.power, g.power);
        }
        let p = poly(2, 3, &[(1, &[1, 1, 1])]);
        let a = gowers_norm(&p, 3, &ctx).unwrap();
        let b = gowers_norm_direct(&p, 3, &ctx).unwrap();
        assert_eq!(a.power, b.power);
        assert!(a.power.is_some());
    }

    #[test]
    fn analytic_rank_examples() {
        let ctx = Ctx::default();
        let a = analytic_rank(&inner(2, 1), 2, &ctx).unwrap();
        assert_eq!(a.exact, Some(r(1, 2)));
        let a = analytic_rank(&inner(2, 2), 2, &ctx).unwrap();
        assert_eq!(a.exact, Some(r(1, 1)));
        let a = analytic_rank(&poly(5, 2, &[(1, &[1, 0])]), 2, &ctx).unwrap();
        assert_eq!(a.exact, Some(r(0, 1)));
    }

    #[test]
    fn equidistribution_examples() {
        let ctx = Ctx::default();
        let v = value_distribution(&PolyFamily::single(poly(5, 1, &[(1, &[1])])), &ctx).unwrap();
        assert_eq!(v.counts, vec![1; 5]);
        assert_eq!(v.epsilon, r(0, 1));
        let v = value_distribution(&PolyFamily::single(poly(3, 2, &[(1, &[1, 1])])), &ctx).unwrap();
        assert_eq!(v.counts, vec![5, 2, 2]);
        assert_eq!(v.epsilon, r(2, 3));
        let v = value_distribution(&PolyFamily::single(inner(3, 2)), &ctx).unwrap();
        assert_eq!(v.counts.iter().sum::<u64>(), 81);
        assert!(v.epsilon < r(1, 3));
    }

    #[test]
    fn char_sum_counts() {
        let ctx = Ctx::default();
        let fam = PolyFamily::single(poly(3, 2, &[(1, &[1, 1])]));
        assert_eq!(count_points_char_sum(&fam, &[Fe(0)], &ctx).unwrap(), 5);
        let fam = PolyFamily::single(poly(7, 1, &[(1, &[1])]));
        assert_eq!(count_points_char_sum(&fam, &[Fe(3)], &ctx).unwrap(), 1);
        let fam = PolyFamily::new(vec![poly(3, 2, &[(1, &[1, 0])]), poly(3, 2, &[(1, &[0, 1])])]).unwrap();
        assert_eq!(count_points_char_sum(&fam, &[Fe(0), Fe(0)], &ctx).unwrap(), 1);
    }

    #[test]
    fn budget_refusal() {
        let ctx = Ctx::new(10, 1);
        assert!(bias(&inner(3, 2), &ctx).unwrap_err().is_budget());
    }
}
