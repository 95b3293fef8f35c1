//! The acceptance suite. Every criterion returns a verdict plus a record of
//! its numeric outputs; the records are what the determinism check compares.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use rankforge::affine::{AffineEquations, AffineMap};
use rankforge::analytic::{
    bias, count_points_char_sum, count_points_direct, gowers_norm, gowers_norm_direct, rat_string,
    value_distribution,
};
use rankforge::ctx::Ctx;
use rankforge::error::{Error, Result};
use rankforge::explicit::{build, build_formal, check_admissible_field, explicit_extension, mu_bias};
use rankforge::geometry::{census_yz, census_yz_on, enumerate_points, kappa_fibers, universality_check, Ratio};
use rankforge::gf::{Fe, PrimeField};
use rankforge::linalg::{Echelon, Matrix};
use rankforge::nullsatz::{ideal_membership, rough_bound_check, vanishing_vs_ideal_dims};
use rankforge::poly::{decode, delta_grid, monomials_up_to, Monomial, MultiPoly, MultilinearForm, PolyFamily};
use rankforge::rank::{check_rank_axioms, partition_rank, prank_lower_bound_from_bias, RankOracle, RankValue};
use rankforge::weakpoly::{extend_by_solve, is_weakly_polynomial, star_check, weak_space, Extension, FunctionOnX};

use crate::named;

/// Exact comparisons only: the allowed difference in every rational check.
pub const TOLERANCE: i64 = 0;
/// Samples per (field, degree) cell in the Gowers and bias criteria.
pub const GOWERS_SAMPLES: usize = 100;
pub const GOWERS_TIME_LIMIT: Duration = Duration::from_secs(300);
pub const STAR_TIME_LIMIT: Duration = Duration::from_secs(600);
/// Largest `n` tried when looking for star-equality on the explicit family.
pub const STAR_MAX_N: usize = 3;
/// Budget the suite runs under unless one is given explicitly. The exhaustive
/// rank-3 searches need more than the library default.
pub const SUITE_BUDGET: u64 = 10_000_000_000;
pub const DETERMINISM_WORKERS: [usize; 2] = [1, 8];
const SEED: u64 = 0x05ee_d0ff_1e1d;

pub const CRITERIA: [(u8, &str); 15] = [
    (1, "gowers-identity"),
    (2, "bias-norm"),
    (3, "explicit-arank"),
    (4, "counterexample"),
    (5, "star-explicit"),
    (6, "dual-path"),
    (7, "equidistribution"),
    (8, "kappa-uniformity"),
    (9, "census-ratio"),
    (10, "bias-prank"),
    (11, "rank-axioms"),
    (12, "nullstellensatz-dims"),
    (13, "rough-bound"),
    (14, "grid-vanishing"),
    (15, "determinism"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Refused,
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub summary: String,
    /// Numeric outputs; compared across worker counts.
    pub record: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Refused => "REFUSED",
        };
        format!("[{tag}] {:>2} {:<22} {} ({:.2?})", self.id, self.name, self.summary, self.elapsed)
    }
}

type Verdict = Result<(bool, String, Value)>;

pub fn criterion_id(name: &str) -> Option<u8> {
    CRITERIA.iter().find(|(_, n)| *n == name).map(|(i, _)| *i).or_else(|| {
        name.parse::<u8>().ok().filter(|i| (1..=15).contains(i))
    })
}

fn name_of(id: u8) -> &'static str {
    CRITERIA[id as usize - 1].1
}

pub fn run_criterion(id: u8, ctx: &Ctx) -> Outcome {
    let start = Instant::now();
    let res = match id {
        1 => gowers_identity(ctx),
        2 => bias_norm(ctx),
        3 => explicit_arank(ctx),
        4 => counterexample(ctx),
        5 => star_explicit(ctx),
        6 => dual_path(ctx),
        7 => equidistribution(ctx),
        8 => kappa_uniformity(ctx),
        9 => census_ratio(ctx),
        10 => bias_prank(ctx),
        11 => rank_axioms(ctx),
        12 => nullstellensatz_dims(ctx),
        13 => rough_bound(ctx),
        14 => grid_vanishing(ctx),
        15 => determinism(ctx.budget(), &[]),
        _ => Err(Error::InvalidInput(format!("no criterion {id}"))),
    };
    finish(id, res, start.elapsed())
}

fn finish(id: u8, res: Verdict, elapsed: Duration) -> Outcome {
    let (status, summary, record) = match res {
        Ok((true, s, r)) => (Status::Pass, s, r),
        Ok((false, s, r)) => (Status::Fail, s, r),
        Err(e) if e.is_budget() => (Status::Refused, e.to_string(), Value::Null),
        Err(e) => (Status::Fail, e.to_string(), Value::Null),
    };
    Outcome {
        id,
        name: name_of(id),
        status,
        summary,
        record,
        elapsed,
    }
}

/// Runs the selected criteria (all when `only` is empty). The determinism
/// criterion reuses the records of this pass for the matching worker count.
pub fn run_suite(only: &[u8], ctx: &Ctx) -> Vec<Outcome> {
    let ids: Vec<u8> = if only.is_empty() { (1..=15).collect() } else { only.to_vec() };
    let mut out: Vec<Outcome> = Vec::new();
    for &id in ids.iter().filter(|&&i| i != 15) {
        out.push(run_criterion(id, ctx));
    }
    if ids.contains(&15) {
        let start = Instant::now();
        let reuse: Vec<(u8, Value)> = if DETERMINISM_WORKERS.contains(&ctx.workers()) && out.len() == 14 {
            out.iter().map(|o| (o.id, o.record.clone())).collect()
        } else {
            Vec::new()
        };
        let res = determinism_with(ctx.budget(), ctx.workers(), &reuse);
        out.push(finish(15, res, start.elapsed()));
    }
    out
}

pub fn all_passed(outcomes: &[Outcome]) -> bool {
    outcomes.iter().all(|o| o.status == Status::Pass)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ratio_value(r: &Ratio) -> Option<BigRational> {
    r.value()
}

fn opt_str(r: &Option<BigRational>) -> Value {
    r.as_ref().map(|v| Value::String(rat_string(v))).unwrap_or(Value::Null)
}

/// Exact equality within the pinned tolerance.
fn close(a: &BigRational, b: &BigRational) -> bool {
    let diff = (a - b).abs();
    diff <= BigRational::from_integer(TOLERANCE.into())
}

fn random_poly(field: PrimeField, n: usize, d: u32, rng: &mut ChaCha8Rng) -> MultiPoly {
    let q = field.p();
    let monos = monomials_up_to(n, d, q - 1);
    let top: Vec<&Monomial> = monos.iter().filter(|m| m.degree() == d).collect();
    let mut p = MultiPoly::zero(field, n);
    for m in &monos {
        p.add_term(m.clone(), Fe(rng.gen_range(0..q)));
    }
    let lead = top[rng.gen_range(0..top.len())];
    if p.coeff(lead).is_zero() {
        p.add_term(lead.clone(), Fe(rng.gen_range(1..q)));
    }
    p
}

fn gowers_sample() -> Vec<(u32, usize, u32, Vec<MultiPoly>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    for (q, n) in [(2u64, 3usize), (3, 2)] {
        let field = PrimeField::new(q).expect("prime");
        for d in [2u32, 3] {
            let polys = (0..GOWERS_SAMPLES).map(|_| random_poly(field, n, d, &mut rng)).collect();
            out.push((q as u32, n, d, polys));
        }
    }
    out
}

fn gowers_identity(ctx: &Ctx) -> Verdict {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut mismatches = 0;
    let mut total = 0;
    for (q, n, d, polys) in gowers_sample() {
        let mut values = Vec::new();
        for p in &polys {
            let fast = gowers_norm(p, d as usize, ctx)?;
            let direct = gowers_norm_direct(p, d as usize, ctx)?;
            // the direct average runs over one extra copy of V
            let scale = (q as u64).pow(n as u32);
            let hist_ok = fast.histogram.counts.len() == direct.histogram.counts.len()
                && fast.histogram.counts.iter().zip(&direct.histogram.counts).all(|(a, b)| a * scale == *b);
            let same = match (&fast.power, &direct.power) {
                (Some(a), Some(b)) => close(a, b) && hist_ok,
                _ => false,
            };
            if !same {
                mismatches += 1;
            }
            total += 1;
            values.push(opt_str(&fast.power));
        }
        rows.push(json!({"q": q, "n": n, "d": d, "values": values}));
    }
    let elapsed = start.elapsed();
    let ok = mismatches == 0 && total >= 4 * GOWERS_SAMPLES && elapsed < GOWERS_TIME_LIMIT;
    Ok((
        ok,
        format!("{total} polynomials, {mismatches} mismatches, {:.1?} (limit {:?})", elapsed, GOWERS_TIME_LIMIT),
        json!(rows),
    ))
}

fn bias_norm(ctx: &Ctx) -> Verdict {
    let mut violations = 0;
    let mut total = 0;
    let mut rows = Vec::new();
    for (q, n, d, polys) in gowers_sample() {
        let mut values = Vec::new();
        for p in &polys {
            let b = bias(p, ctx)?;
            let g = gowers_norm(p, d as usize, ctx)?;
            let ok = match (&b.magnitude_squared, &g.power) {
                // |E|^{2^d} <= ||e(P)||^{2^d}
                (Some(m2), Some(pw)) => num_traits::pow(m2.clone(), 1usize << (d - 1)) <= *pw,
                _ => false,
            };
            if !ok {
                violations += 1;
            }
            total += 1;
            values.push(opt_str(&b.magnitude_squared));
        }
        rows.push(json!({"q": q, "n": n, "d": d, "bias_squared": values}));
    }
    Ok((violations == 0, format!("{total} polynomials, {violations} violations"), json!(rows)))
}

fn explicit_arank(ctx: &Ctx) -> Verdict {
    let mut ok = true;
    let mut rows = Vec::new();
    for n in 1..=3usize {
        let p = build_formal(2, n, 2)?.poly;
        let fast = gowers_norm(&p, 2, ctx)?.power;
        let oracle = gowers_norm_direct(&p, 2, ctx)?.power;
        let expected = BigRational::new(BigInt::one(), BigInt::from(4).pow(n as u32));
        let good = fast.as_ref().is_some_and(|v| close(v, &expected)) && fast == oracle;
        ok &= good;
        rows.push(json!({"n": n, "norm4": opt_str(&fast), "oracle": opt_str(&oracle)}));
    }
    let t = mu_bias(2, 2, ctx)?.magnitude;
    let t_ok = t.as_ref().is_some_and(|v| close(v, &rat(1, 2)));
    Ok((
        ok && t_ok,
        format!("norm^4 = 4^-n for n = 1..3: {ok}; mu_bias(2,2) = {}", t.as_ref().map(rat_string).unwrap_or_default()),
        json!({"rows": rows, "mu_bias": opt_str(&t)}),
    ))
}

fn counterexample(ctx: &Ctx) -> Verdict {
    let p = named::counterexample_poly();
    let field = p.field();
    let x = enumerate_points(&PolyFamily::single(p), ctx)?;
    let star = star_check(&x, 1, ctx)?;
    // oracle: the three lines through 0 with a value at 0 and one slope each
    let mut in_weak = 0usize;
    let w = weak_space(&x, 1, ctx)?;
    let mut fams = Echelon::new(field, x.len());
    for code in 0..625u64 {
        let c = decode(code, 4, 5);
        let f = FunctionOnX::from_fn(&x, |pt| {
            let (a, b) = (pt[0], pt[1]);
            let slope = if b.is_zero() {
                c[1]
            } else if a.is_zero() {
                c[2]
            } else {
                c[3]
            };
            let t = if a.is_zero() { b } else { a };
            field.add(c[0], field.mul(slope, t))
        });
        if is_weakly_polynomial(&f, &x, 1, ctx)?.holds && w.contains(&f) {
            in_weak += 1;
        }
        fams.insert(f.values.clone());
    }
    let mut restrictions = std::collections::BTreeSet::new();
    for code in 0..125u64 {
        let c = decode(code, 3, 5);
        restrictions.insert(x.points().iter().map(|pt| field.add(c[0], field.add(field.mul(c[1], pt[0]), field.mul(c[2], pt[1])))).collect::<Vec<_>>());
    }
    let oracle_weak = fams.rank();
    let oracle_restr = (restrictions.len() as f64).log(5.0).round() as usize;
    let f = named::counterexample_function(&x);
    let dual_ok = match extend_by_solve(&f, &x, 1, ctx)? {
        Extension::Infeasible { dual } => {
            let pair = |vals: &[Fe]| vals.iter().zip(&dual).fold(Fe::ZERO, |s, (&a, &b)| field.add(s, field.mul(a, b)));
            let kills = [vec![0, 0], vec![1, 0], vec![0, 1]].iter().all(|e| {
                let m = Monomial(e.clone());
                pair(&x.points().iter().map(|pt| m.eval(&field, pt)).collect::<Vec<_>>()).is_zero()
            });
            kills && pair(&f.values) == Fe::ONE
        }
        Extension::Feasible(_) => false,
    };
    let ok = !star.holds
        && star.gap == 1
        && (star.weak_dim, star.restriction_dim) == (4, 3)
        && (oracle_weak, oracle_restr) == (4, 3)
        && in_weak == 625
        && restrictions.len() == 125
        && dual_ok;
    Ok((
        ok,
        format!(
            "|X| = {}, weak dim {} (oracle {oracle_weak}), restriction dim {} (oracle {oracle_restr}), gap {}, dual certificate {}",
            x.len(),
            star.weak_dim,
            star.restriction_dim,
            star.gap,
            if dual_ok { "verified" } else { "missing" }
        ),
        json!({"points": x.len(), "weak": star.weak_dim, "restriction": star.restriction_dim, "dual": dual_ok}),
    ))
}

const STAR_D: usize = 2;
const STAR_Q: u64 = 7;
const STAR_M: u32 = 3;
const STAR_A: u32 = 1;

fn star_explicit(ctx: &Ctx) -> Verdict {
    let start = Instant::now();
    check_admissible_field(PrimeField::new(STAR_Q)?, STAR_M, STAR_A, STAR_D)?;
    let mut rows = Vec::new();
    let mut threshold = None;
    for n in 1..=STAR_MAX_N {
        let x = build(STAR_D, n, STAR_Q)?;
        let pts = x.points(ctx)?;
        let s = star_check(&pts, STAR_A, ctx)?;
        rows.push(json!({"n": n, "points": pts.len(), "weak": s.weak_dim, "restriction": s.restriction_dim}));
        if s.holds {
            threshold = Some(n);
            break;
        }
    }
    let elapsed = start.elapsed();
    Ok((
        threshold.is_some() && elapsed < STAR_TIME_LIMIT,
        match threshold {
            Some(n) => format!("equality first at n = {n}; {:.1?}", elapsed),
            None => format!("no equality up to n = {STAR_MAX_N}"),
        },
        json!({"rows": rows, "threshold": threshold}),
    ))
}

fn dual_path(ctx: &Ctx) -> Verdict {
    let x = build(STAR_D, 2, STAR_Q)?;
    let pts = x.points(ctx)?;
    let w = weak_space(&pts, STAR_A, ctx)?;
    let mut agree = 0;
    let basis = w.basis();
    let mut degrees = Vec::new();
    for f in &basis {
        let e = explicit_extension(&x, &pts, f, STAR_M, STAR_A, ctx)?;
        let s = extend_by_solve(f, &pts, STAR_A, ctx)?;
        if let Extension::Feasible(p) = s {
            if FunctionOnX::from_poly(&pts, &p) == FunctionOnX::from_poly(&pts, &e.poly) && f.agrees_with(&pts, &p) {
                agree += 1;
            }
        }
        degrees.push(json!({"assembled": e.assembled.degree(), "final": e.poly.degree(), "components": e.components.len(), "reduction_trivial": e.reduction_trivial}));
    }
    Ok((
        agree == basis.len() && !basis.is_empty(),
        format!("{agree}/{} basis functions extended by both paths and agree on X", basis.len()),
        json!(degrees),
    ))
}

fn equidistribution(ctx: &Ctx) -> Verdict {
    let mut eps = Vec::new();
    let mut count_ok = true;
    let mut rows = Vec::new();
    for n in 1..=3 {
        let fam = build(2, n, 3)?.family();
        let vd = value_distribution(&fam, ctx)?;
        for b in 0..3 {
            let a = count_points_char_sum(&fam, &[Fe(b)], ctx)?;
            let c = count_points_direct(&fam, &[Fe(b)], ctx)?;
            count_ok &= a == c && vd.counts[b as usize] == c;
        }
        rows.push(json!({"n": n, "counts": vd.counts, "epsilon": rat_string(&vd.epsilon)}));
        eps.push(vd.epsilon);
    }
    let decreasing = eps.windows(2).all(|w| w[1] < w[0]);
    Ok((
        decreasing && count_ok,
        format!(
            "epsilon {}; character-sum counts match: {count_ok}",
            eps.iter().map(rat_string).collect::<Vec<_>>().join(" > ")
        ),
        json!(rows),
    ))
}

fn kappa_uniformity(ctx: &Ctx) -> Verdict {
    let mut rows = Vec::new();
    let mut devs = Vec::new();
    let mut universal = true;
    for n in 2..=3 {
        let fam = build(2, n, 3)?.family();
        let k = kappa_fibers(&fam, 1, false, ctx)?;
        let u = universality_check(&fam, 1, 0, ctx)?;
        universal &= u.universal && k.attained as u128 == k.targets && k.targets == 27;
        rows.push(json!({"n": n, "maps": k.maps, "attained": k.attained, "targets": k.targets, "min": k.min, "max": k.max, "deviation": k.deviation.to_string()}));
        devs.push(ratio_value(&k.deviation));
    }
    let shrinks = matches!((&devs[0], &devs[1]), (Some(a), Some(b)) if b < a);
    Ok((
        universal && shrinks,
        format!(
            "all 27 targets attained at n = 2, 3: {universal}; deviation {} -> {}",
            rows[0]["deviation"].as_str().unwrap_or(""),
            rows[1]["deviation"].as_str().unwrap_or("")
        ),
        json!(rows),
    ))
}

fn census_ratio(ctx: &Ctx) -> Verdict {
    let mut rows = Vec::new();
    let mut ratios = Vec::new();
    for n in 2..=3 {
        let x = build(2, n, 3)?;
        let pts = x.points(ctx)?;
        let mut c = vec![Fe::ZERO; 2 * n];
        c[0] = Fe::ONE;
        let w = AffineEquations::hyperplane(c, Fe::ZERO);
        let cen = census_yz_on(&pts, &w, 1, ctx)?;
        rows.push(json!({"n": n, "y": cen.y.len(), "z": cen.z.len(), "ratio": cen.ratio.to_string()}));
        ratios.push(ratio_value(&cen.ratio));
    }
    let monotone = matches!((&ratios[0], &ratios[1]), (Some(a), Some(b)) if b <= a);
    // Σ_{i<n} x_i^2 + x_n over F_3 in 4 variables, W = {x_n = 0}
    let f3 = PrimeField::new(3)?;
    let mut p = MultiPoly::zero(f3, 4);
    for i in 0..3 {
        let mut e = vec![0; 4];
        e[i] = 2;
        p.add_term(Monomial(e), Fe::ONE);
    }
    p.add_term(Monomial(vec![0, 0, 0, 1]), Fe::ONE);
    let w = AffineEquations::hyperplane(vec![Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE], Fe::ZERO);
    let deg = census_yz(&PolyFamily::single(p), &w, 1, ctx)?;
    Ok((
        monotone && !deg.y.is_empty(),
        format!(
            "|Y|/|Z| = {} -> {}; degenerate example |Y| = {}",
            rows[0]["ratio"].as_str().unwrap_or(""),
            rows[1]["ratio"].as_str().unwrap_or(""),
            deg.y.len()
        ),
        json!({"rows": rows, "degenerate_y": deg.y.len(), "degenerate_z": deg.z.len()}),
    ))
}

fn bilinear(field: PrimeField, n: usize, code: u64) -> Result<MultilinearForm> {
    let mut p = MultiPoly::zero(field, 2 * n);
    for i in 0..n {
        for j in 0..n {
            if code >> (i * n + j) & 1 == 1 {
                let mut e = vec![0; 2 * n];
                e[i] = 1;
                e[n + j] = 1;
                p.add_term(Monomial(e), Fe::ONE);
            }
        }
    }
    MultilinearForm::new(2, n, p)
}

fn matrix_rank(field: PrimeField, n: usize, code: u64) -> usize {
    let rows = (0..n)
        .map(|i| (0..n).map(|j| Fe((code >> (i * n + j) & 1) as u32)).collect())
        .collect();
    Matrix::from_rows(field, rows, n).rank()
}

fn bias_prank(ctx: &Ctx) -> Verdict {
    let f2 = PrimeField::new(2)?;
    let mut violations = 0;
    let mut rank_mismatch = 0;
    let mut total = 0;
    let mut hist = Vec::new();
    for n in 1..=3usize {
        let mut tally = [0u64; 4];
        for code in 0..(1u64 << (n * n)) {
            let t = bilinear(f2, n, code)?;
            let pr = partition_rank(&t, n as u32, ctx)?.value;
            let bb = prank_lower_bound_from_bias(&t, ctx)?;
            let expect = matrix_rank(f2, n, code) as u32;
            match pr {
                RankValue::Finite(r) => {
                    if r != expect {
                        rank_mismatch += 1;
                    }
                    if bb.bound.is_some_and(|b| b > r) {
                        violations += 1;
                    }
                    tally[r as usize] += 1;
                }
                _ => rank_mismatch += 1,
            }
            total += 1;
        }
        hist.push(json!({"n": n, "prank_histogram": tally}));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut tri = Vec::new();
    for _ in 0..64 {
        let code: u64 = rng.gen_range(0..256);
        let mut p = MultiPoly::zero(f2, 6);
        for k in 0..8 {
            if code >> k & 1 == 1 {
                let mut e = vec![0; 6];
                e[k >> 2 & 1] = 1;
                e[2 + (k >> 1 & 1)] = 1;
                e[4 + (k & 1)] = 1;
                p.add_term(Monomial(e), Fe::ONE);
            }
        }
        let t = MultilinearForm::new(3, 2, p)?;
        let pr = partition_rank(&t, 3, ctx)?.value;
        let bb = prank_lower_bound_from_bias(&t, ctx)?;
        match pr {
            RankValue::Finite(r) => {
                if bb.bound.is_some_and(|b| b > r) {
                    violations += 1;
                }
                tri.push(json!([code, r, bb.bound]));
            }
            _ => rank_mismatch += 1,
        }
        total += 1;
    }
    Ok((
        violations == 0 && rank_mismatch == 0,
        format!("{total} forms, {violations} bias-bound violations, {rank_mismatch} partition-rank/matrix-rank mismatches"),
        json!({"bilinear": hist, "trilinear": tri}),
    ))
}

fn random_invertible(field: PrimeField, n: usize, rng: &mut ChaCha8Rng) -> Result<AffineMap> {
    let q = field.p();
    loop {
        let mat: Vec<Vec<Fe>> = (0..n).map(|_| (0..n).map(|_| Fe(rng.gen_range(0..q))).collect()).collect();
        let off: Vec<Fe> = (0..n).map(|_| Fe(rng.gen_range(0..q))).collect();
        let m = AffineMap::new(field, mat, off)?;
        if m.is_invertible() {
            return Ok(m);
        }
    }
}

fn random_hyperplane_map(field: PrimeField, n: usize, rng: &mut ChaCha8Rng) -> Result<AffineMap> {
    let q = field.p();
    loop {
        let mat: Vec<Vec<Fe>> = (0..n).map(|_| (0..n - 1).map(|_| Fe(rng.gen_range(0..q))).collect()).collect();
        let off: Vec<Fe> = (0..n).map(|_| Fe(rng.gen_range(0..q))).collect();
        let m = AffineMap::new(field, mat, off)?;
        if m.is_injective() {
            return Ok(m);
        }
    }
}

fn rank_axioms(ctx: &Ctx) -> Verdict {
    let f2 = PrimeField::new(2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    let mut oracle = RankOracle::new();
    let mut violations = 0;
    let mut untested = 0;
    let mut checks = 0;
    let mut hist = Vec::new();
    for n in 1..=3usize {
        let mut tally = Vec::new();
        for code in 0..(1u64 << (n * n)) {
            let t = bilinear(f2, n, code)?;
            let phi = random_invertible(f2, 2 * n, &mut rng)?;
            let w = random_hyperplane_map(f2, 2 * n, &mut rng)?.image()?;
            let rep = check_rank_axioms(&t.poly, Some(&phi), Some(&w), Some(&t), n as u32, &mut oracle, ctx);
            // undecided checks only come from searches stopped by the budget
            if let Some(c) = rep.checks.iter().find(|c| c.holds.is_none()) {
                return Err(Error::BudgetExceeded {
                    cost: 0,
                    budget: ctx.budget(),
                    context: Some(format!("{} undecided on form {code:#x} (n = {n}): {}", c.name, c.detail)),
                });
            }
            violations += rep.violations();
            untested += rep.untested();
            checks += rep.checks.len();
            tally.push(rep.checks.iter().map(|c| c.holds).collect::<Vec<_>>());
        }
        hist.push(json!({"n": n, "checks": tally.len()}));
    }
    Ok((
        violations == 0 && untested == 0,
        format!("{checks} checks, {violations} violations, {untested} undecided"),
        json!({"rows": hist, "violations": violations, "untested": untested}),
    ))
}

fn nullstellensatz_dims(ctx: &Ctx) -> Verdict {
    let mut rows = Vec::new();
    let mut ok = true;
    let xn = build(2, 2, 7)?.family();
    for e in 1..=2 {
        let d = vanishing_vs_ideal_dims(&xn, e, ctx)?;
        ok &= d.equal;
        rows.push(json!({"family": "X_2", "e": e, "vanishing": d.vanishing, "ideal": d.ideal}));
    }
    let sq = PolyFamily::single(MultiPoly::from_terms(PrimeField::new(5)?, 1, [(1, vec![2])])?);
    for e in 1..=3 {
        let d = vanishing_vs_ideal_dims(&sq, e, ctx)?;
        ok &= !d.equal && d.ideal < d.vanishing;
        rows.push(json!({"family": "x^2", "e": e, "vanishing": d.vanishing, "ideal": d.ideal}));
    }
    // raising the cofactor cap never makes x a member of (x^2)
    let x = MultiPoly::from_terms(PrimeField::new(5)?, 1, [(1, vec![1])])?;
    let mut converted = Vec::new();
    for e in 1..=4 {
        converted.push(ideal_membership(&x, &sq, e, ctx)?.is_member());
    }
    ok &= converted.iter().all(|&m| !m);
    rows.push(json!({"family": "x in (x^2)", "caps": "1..=4", "member": converted}));
    Ok((
        ok,
        rows.iter()
            .filter(|r| r.get("e").is_some())
            .map(|r| format!("{} e={}: {}/{}", r["family"].as_str().unwrap_or(""), r["e"], r["ideal"], r["vanishing"]))
            .collect::<Vec<_>>()
            .join(", "),
        json!(rows),
    ))
}

fn rough_bound(ctx: &Ctx) -> Verdict {
    let f3 = PrimeField::new(3)?;
    let f5 = PrimeField::new(5)?;
    let fixtures: Vec<(&str, PolyFamily, Option<MultiPoly>)> = vec![
        ("x1 = 0 in F_5^3", PolyFamily::single(MultiPoly::from_terms(f5, 3, [(1, vec![1, 0, 0])])?), None),
        ("x1y1 + x2y2 over F_3", PolyFamily::single(MultiPoly::from_terms(f3, 4, [(1, vec![1, 1, 0, 0]), (1, vec![0, 0, 1, 1])])?), None),
        (
            "x1x2 = x3x4 = 0 over F_3",
            PolyFamily::new(vec![
                MultiPoly::from_terms(f3, 4, [(1, vec![1, 1, 0, 0])])?,
                MultiPoly::from_terms(f3, 4, [(1, vec![0, 0, 1, 1])])?,
            ])?,
            None,
        ),
        ("X_2, d = 2 over F_7", build(2, 2, 7)?.family(), None),
        (
            "x1y1 + x2y2 = x1 = 0 over F_3",
            PolyFamily::single(MultiPoly::from_terms(f3, 4, [(1, vec![1, 1, 0, 0]), (1, vec![0, 0, 1, 1])])?),
            Some(MultiPoly::from_terms(f3, 4, [(1, vec![1, 0, 0, 0])])?),
        ),
    ];
    let mut ok = true;
    let mut equality = false;
    let mut rows = Vec::new();
    for (name, fam, extra) in &fixtures {
        let b = rough_bound_check(fam, extra.as_ref(), ctx)?;
        ok &= b.holds;
        equality |= b.count as u128 == b.bound;
        rows.push(json!({"fixture": name, "count": b.count, "bound": b.bound.to_string()}));
    }
    Ok((
        ok && equality,
        rows.iter().map(|r| format!("{} <= {}", r["count"], r["bound"].as_str().unwrap_or(""))).collect::<Vec<_>>().join(", "),
        json!(rows),
    ))
}

fn grid_vanishing(ctx: &Ctx) -> Verdict {
    let f7 = PrimeField::new(7)?;
    let delta = f7.delta_subgroup(6)?;
    let deg = 4u32;
    // one variable: every polynomial of degree <= 4
    let grid1 = delta_grid(&delta, 1);
    let monos1 = monomials_up_to(1, deg, deg);
    let n_polys = 7u64.pow(monos1.len() as u32);
    ctx.check(n_polys as u128 * grid1.len() as u128, "grid enumeration")?;
    let vanishing = ctx.fold_range(
        n_polys,
        || 0u64,
        |acc, r| {
            let mut c = *acc;
            for code in r {
                let coeffs = decode(code, monos1.len(), 7);
                let zero = grid1.iter().all(|pt| {
                    monos1
                        .iter()
                        .zip(&coeffs)
                        .fold(Fe::ZERO, |s, (m, &a)| f7.add(s, f7.mul(a, m.eval(&f7, pt))))
                        .is_zero()
                });
                if zero {
                    c += 1;
                }
            }
            *acc = c;
        },
        |a, b| *a += b,
    );
    // two variables: 7^15 polynomials, decided by the evaluation matrix
    let grid2 = delta_grid(&delta, 2);
    let monos2 = monomials_up_to(2, deg, deg);
    let rows: Vec<Vec<Fe>> = grid2.iter().map(|pt| monos2.iter().map(|m| m.eval(&f7, pt)).collect()).collect();
    let rank2 = Matrix::from_rows(f7, rows, monos2.len()).rank();
    let ok = vanishing == 1 && rank2 == monos2.len();
    Ok((
        ok,
        format!(
            "1 variable: {vanishing} of {n_polys} vanish on the grid; 2 variables: evaluation rank {rank2} of {}",
            monos2.len()
        ),
        json!({"one_var_vanishing": vanishing, "two_var_rank": rank2, "two_var_monomials": monos2.len()}),
    ))
}

fn records(budget: u64, workers: usize) -> Vec<(u8, Value)> {
    let ctx = Ctx::new(budget, workers);
    (1..=14).map(|id| (id, run_criterion(id, &ctx).record)).collect()
}

fn determinism(budget: u64, reuse: &[(u8, Value)]) -> Verdict {
    determinism_with(budget, 0, reuse)
}

fn determinism_with(budget: u64, reused_workers: usize, reuse: &[(u8, Value)]) -> Verdict {
    let mut runs = Vec::new();
    for w in DETERMINISM_WORKERS {
        if w == reused_workers && !reuse.is_empty() {
            runs.push(reuse.to_vec());
        } else {
            runs.push(records(budget, w));
        }
    }
    let diffs: Vec<u8> = runs[0]
        .iter()
        .zip(&runs[1])
        .filter(|(a, b)| serde_json::to_string(&a.1).ok() != serde_json::to_string(&b.1).ok())
        .map(|(a, _)| a.0)
        .collect();
    let nulls = runs[0].iter().filter(|(_, v)| v.is_null()).count();
    Ok((
        diffs.is_empty() && nulls == 0,
        if diffs.is_empty() {
            format!("criteria 1-14 byte-identical at workers {:?}", DETERMINISM_WORKERS)
        } else {
            format!("records differ for criteria {diffs:?}")
        },
        json!({"differing": diffs, "missing": nulls}),
    ))
}
