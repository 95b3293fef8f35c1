//! The hypersurfaces `X_n = {Σ_i μ(w_i) = 0}` with `μ(x^1, …, x^d) = ∏ x^j`,
//! and the torus-character route to extending weakly polynomial functions on
//! them.
//!
//! Variable `i*d + j` is coordinate `j` of block `w_i` (both 0-based).
//!
//! Characters of `T_1 = {u ∈ Δ^d : ∏ u_j = 1}` are exponent vectors
//! `a ∈ (Z/m)^d` modulo the diagonal, acting by `u = g^e ↦ g^{Σ a_j e_j}`.
//! They are stored normalised with `a_0 = 0`. For a pair `j ≠ j'` the
//! exponent `α_{j,j'}` is the representative of `a_j − a_{j'}` in
//! `(−m/2, m/2]`.

use num_rational::BigRational;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

use crate::analytic::{bias, form_histogram, rat_string, ExactMagnitude};
use crate::ctx::{pow_cost, Ctx};
use crate::error::{Error, Result};
use crate::geometry::{enumerate_points, VarietyPoints};
use crate::gf::{DeltaSubgroup, Fe, PrimeField};
use crate::poly::{decode, Monomial, MultiPoly, MultilinearForm, PolyFamily};
use crate::weakpoly::{extend_by_solve, Extension, FunctionOnX};

#[derive(Clone, Debug)]
pub struct ExplicitVariety {
    pub field: PrimeField,
    pub d: usize,
    pub n: usize,
    pub poly: MultiPoly,
}

pub fn build(d: usize, n: usize, q: u64) -> Result<ExplicitVariety> {
    if d as u64 >= q {
        return Err(Error::Precondition(format!("need d < q, got d = {d}, q = {q}")));
    }
    build_formal(d, n, q)
}

/// `P_n` as a formal polynomial, without the `d < q` requirement. Used for
/// the bias computations, which never treat `P_n` as a reduced function.
pub fn build_formal(d: usize, n: usize, q: u64) -> Result<ExplicitVariety> {
    let field = PrimeField::new(q)?;
    if d == 0 || n == 0 {
        return Err(Error::InvalidInput("d and n must be positive".into()));
    }
    let mut poly = MultiPoly::zero(field, n * d);
    for i in 0..n {
        let mut e = vec![0u32; n * d];
        e[i * d..(i + 1) * d].iter_mut().for_each(|x| *x = 1);
        poly.add_term(Monomial(e), Fe::ONE);
    }
    Ok(ExplicitVariety { field, d, n, poly })
}

impl ExplicitVariety {
    pub fn nvars(&self) -> usize {
        self.n * self.d
    }

    pub fn family(&self) -> PolyFamily {
        PolyFamily::single(self.poly.clone())
    }

    pub fn points(&self, ctx: &Ctx) -> Result<VarietyPoints> {
        enumerate_points(&self.family(), ctx)
    }

    pub fn block<'a>(&self, v: &'a [Fe], i: usize) -> &'a [Fe] {
        &v[i * self.d..(i + 1) * self.d]
    }

    /// `κ(c) = (w(c_1), …, w(c_n))` with `w(c) = (c, 1, …, 1)`, for `Σ c_i = 0`.
    pub fn kappa_embed(&self, c: &[Fe]) -> Result<Vec<Fe>> {
        let f = self.field;
        if c.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: c.len(),
            });
        }
        if c.iter().fold(Fe::ZERO, |s, &x| f.add(s, x)) != Fe::ZERO {
            return Err(Error::InvalidInput("κ needs Σ c_i = 0".into()));
        }
        let mut v = vec![Fe::ONE; self.nvars()];
        for (i, &ci) in c.iter().enumerate() {
            v[i * self.d] = ci;
        }
        Ok(v)
    }

    /// `ν(v) = (μ(w_1), …, μ(w_n))`.
    pub fn nu(&self, v: &[Fe]) -> Vec<Fe> {
        let f = self.field;
        (0..self.n)
            .map(|i| self.block(v, i).iter().fold(Fe::ONE, |s, &x| f.mul(s, x)))
            .collect()
    }

    /// Points of `L = {Σ c_i = 0}` in code order.
    pub fn l_points(&self) -> Vec<Vec<Fe>> {
        let f = self.field;
        let q = f.p() as u64;
        (0..q.pow(self.n as u32 - 1))
            .map(|code| {
                let mut c = decode(code, self.n - 1, q);
                let s = c.iter().fold(Fe::ZERO, |s, &x| f.add(s, x));
                c.push(f.neg(s));
                c
            })
            .collect()
    }
}

/// `|E_{w ∈ k^d} e_q(μ(w))|`.
pub fn mu_bias(d: usize, q: u64, ctx: &Ctx) -> Result<ExactMagnitude> {
    let field = PrimeField::new(q)?;
    let mut e = vec![1u32; d];
    if d == 0 {
        e.clear();
    }
    let mu = MultiPoly::monomial(field, Monomial(e), Fe::ONE);
    bias(&mu, ctx)
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    /// `|E_{u ∈ U} e_q(P̃_n(u))|`, enumerated on the diagonal subspace.
    #[serde(serialize_with = "ser_opt")]
    pub u_value: Option<BigRational>,
    /// `t^n`.
    #[serde(serialize_with = "ser_opt")]
    pub t_power: Option<BigRational>,
    /// `|E_{u ∈ V^d} e_q(P̃_n(u))|` when within budget.
    #[serde(serialize_with = "ser_opt")]
    pub full_value: Option<BigRational>,
    pub full_le_u: Option<bool>,
}

fn ser_opt<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&rat_string(r)),
        None => s.serialize_none(),
    }
}

fn abs_mean(h: &crate::analytic::CharHistogram) -> Option<BigRational> {
    let s = h.sum().rational()?;
    Some(BigRational::new(s.abs().into(), (h.domain_size as i128).into()))
}

/// Bias of `P̃_n` on all of `V^d` against its value on the subspace `U` where
/// argument `l` only uses coordinate `l` of each block.
pub fn nc_rank_growth_check(d: usize, q: u64, ns: &[usize], ctx: &Ctx) -> Result<Vec<GrowthRow>> {
    let t = mu_bias(d, q, ctx)?.magnitude;
    let mut rows = Vec::new();
    for &n in ns {
        let x = build_formal(d, n, q)?;
        let form = if d == 1 {
            // P̃ of a linear form is the form itself
            MultilinearForm::new(1, n, x.poly.clone())?
        } else {
            x.poly.multilinear_form()?
        };
        // restriction to U: block l, sub-block i, coordinate j kept iff j == l
        let nv = x.nvars();
        let mut subs = Vec::new();
        let mut kept = 0usize;
        for l in 0..d {
            for _i in 0..n {
                for j in 0..d {
                    if j == l {
                        subs.push(MultiPoly::var(x.field, n * d, kept));
                        kept += 1;
                    } else {
                        subs.push(MultiPoly::zero(x.field, n * d));
                    }
                }
            }
        }
        debug_assert_eq!(subs.len(), d * nv);
        let restricted = form.poly.compose(&subs)?;
        let u_value = bias(&restricted, ctx)?.magnitude;
        let t_power = t.as_ref().map(|t| num_traits::pow(t.clone(), n));
        let full_value = match form_histogram(&form, ctx) {
            Ok(h) => abs_mean(&h),
            Err(e) if e.is_budget() => None,
            Err(e) => return Err(e),
        };
        let full_le_u = match (&full_value, &u_value) {
            (Some(f), Some(u)) => Some(f <= u),
            _ => None,
        };
        rows.push(GrowthRow {
            n,
            u_value,
            t_power,
            full_value,
            full_le_u,
        });
    }
    Ok(rows)
}

/// Representative of `k mod m` in `(−m/2, m/2]`.
pub fn centered(k: i64, m: u32) -> i64 {
    let m = m as i64;
    let r = k.rem_euclid(m);
    if 2 * r > m {
        r - m
    } else {
        r
    }
}

/// `T = T_1^n` acting on `V` coordinatewise.
#[derive(Clone, Debug)]
pub struct TorusT {
    pub delta: DeltaSubgroup,
    pub d: usize,
    pub n: usize,
    /// Each element as per-block exponent vectors with `Σ_j e_j ≡ 0 (mod m)`.
    pub elements: Vec<Vec<Vec<u32>>>,
}

impl TorusT {
    pub fn new(field: PrimeField, m: u32, d: usize, n: usize, ctx: &Ctx) -> Result<Self> {
        let delta = field.delta_subgroup(m)?;
        let block: Vec<Vec<u32>> = (0..(m as u64).pow(d as u32 - 1))
            .map(|c| {
                let mut e: Vec<u32> = decode(c, d - 1, m as u64).into_iter().map(|x| x.0).collect();
                let s: u32 = e.iter().sum();
                e.push((m - s % m) % m);
                e
            })
            .collect();
        let size = pow_cost(block.len() as u128, n);
        ctx.check(size, "torus elements")?;
        let mut elements = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for prefix in &elements {
                for b in &block {
                    let mut t: Vec<Vec<u32>> = prefix.clone();
                    t.push(b.clone());
                    next.push(t);
                }
            }
            elements = next;
        }
        Ok(TorusT { delta, d, n, elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn m(&self) -> u32 {
        self.delta.order()
    }

    pub fn act(&self, t: &[Vec<u32>], x: &[Fe]) -> Vec<Fe> {
        let f = self.delta.field();
        let mut y = x.to_vec();
        for (i, e) in t.iter().enumerate() {
            for (j, &k) in e.iter().enumerate() {
                let idx = i * self.d + j;
                y[idx] = f.mul(y[idx], self.delta.power(k as i64));
            }
        }
        y
    }

    /// All characters of `T`, normalised.
    pub fn characters(&self) -> Vec<CharacterTheta> {
        let m = self.m();
        let block: Vec<Vec<u32>> = (0..(m as u64).pow(self.d as u32 - 1))
            .map(|c| {
                let mut a = vec![0u32];
                a.extend(decode(c, self.d - 1, m as u64).into_iter().map(|x| x.0));
                a
            })
            .collect();
        let mut out = vec![Vec::new()];
        for _ in 0..self.n {
            let mut next = Vec::new();
            for prefix in &out {
                for b in &block {
                    let mut t: Vec<Vec<u32>> = prefix.clone();
                    t.push(b.clone());
                    next.push(t);
                }
            }
            out = next;
        }
        out.into_iter().map(|exps| CharacterTheta { m, exps }).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CharacterTheta {
    pub m: u32,
    /// Per block exponent vectors, normalised to `a_0 = 0`.
    pub exps: Vec<Vec<u32>>,
}

impl CharacterTheta {
    pub fn trivial(m: u32, d: usize, n: usize) -> Self {
        CharacterTheta {
            m,
            exps: vec![vec![0; d]; n],
        }
    }

    /// From arbitrary exponent vectors, reduced modulo the diagonal.
    pub fn from_exps(m: u32, exps: Vec<Vec<i64>>) -> Self {
        let exps = exps
            .into_iter()
            .map(|a| {
                let a0 = a[0];
                a.iter().map(|&x| (x - a0).rem_euclid(m as i64) as u32).collect()
            })
            .collect();
        CharacterTheta { m, exps }
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|a| a.iter().all(|&x| x == 0))
    }

    /// Discrete log (base the generator of Δ) of `θ(t)`.
    pub fn log_value(&self, t: &[Vec<u32>]) -> u32 {
        let m = self.m as u64;
        let s: u64 = self
            .exps
            .iter()
            .zip(t)
            .map(|(a, e)| a.iter().zip(e).map(|(&x, &y)| x as u64 * y as u64).sum::<u64>())
            .sum();
        (s % m) as u32
    }

    pub fn value(&self, delta: &DeltaSubgroup, t: &[Vec<u32>]) -> Fe {
        delta.power(self.log_value(t) as i64)
    }

    /// `α_{j,j'}` for block `i`.
    pub fn alpha(&self, i: usize, j: usize, jp: usize) -> i64 {
        let a = &self.exps[i];
        centered(a[j] as i64 - a[jp] as i64, self.m)
    }

    pub fn is_admissible(&self, a: u32) -> bool {
        let d = self.exps.first().map(Vec::len).unwrap_or(0);
        (0..self.exps.len()).all(|i| {
            (0..d).all(|j| (0..d).all(|jp| j == jp || self.alpha(i, j, jp).unsigned_abs() <= a as u64))
        })
    }

    /// Admissible with `α_{j',j} >= 0` for every `j < j'`, so the exponents
    /// `β_j = α_{j,0}` are nonnegative and nondecreasing.
    pub fn is_admissible_plus(&self, a: u32) -> bool {
        let d = self.exps.first().map(Vec::len).unwrap_or(0);
        self.is_admissible(a)
            && (0..self.exps.len()).all(|i| (0..d).all(|j| (j + 1..d).all(|jp| self.alpha(i, jp, j) >= 0)))
    }

    /// `β_{i,j} = α_{j,0}` of block `i`.
    pub fn beta(&self, i: usize) -> Vec<i64> {
        (0..self.exps[i].len()).map(|j| if j == 0 { 0 } else { self.alpha(i, j, 0) }).collect()
    }

    /// The exponent vectors of `t ↦ θ(γ·t)`.
    pub fn compose(&self, g: &GammaElement) -> CharacterTheta {
        let exps = self
            .exps
            .iter()
            .zip(&g.perms)
            .map(|(a, s)| {
                // θ(γt) = Σ_j a_j e_{σ(j)} = Σ_k a_{σ^{-1}(k)} e_k
                let mut out = vec![0i64; a.len()];
                for (j, &sj) in s.iter().enumerate() {
                    out[sj] = a[j] as i64;
                }
                out
            })
            .collect();
        CharacterTheta::from_exps(self.m, exps)
    }
}

impl std::fmt::Display for CharacterTheta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let blocks: Vec<String> = self
            .exps
            .iter()
            .map(|a| a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", blocks.join(";"))
    }
}

/// `γ = (σ_1, …, σ_n) ∈ (S_d)^n` acting by `(γ·x)_i^j = x_i^{σ_i(j)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GammaElement {
    pub perms: Vec<Vec<usize>>,
}

impl GammaElement {
    pub fn identity(d: usize, n: usize) -> Self {
        GammaElement {
            perms: vec![(0..d).collect(); n],
        }
    }

    /// `(self ∘ other)·x = self·(other·x)`.
    pub fn compose(&self, other: &GammaElement) -> GammaElement {
        // (self·(other·x))_j = (other·x)_{σ(j)} = x_{τ(σ(j))}
        let perms = self
            .perms
            .iter()
            .zip(&other.perms)
            .map(|(s, t)| s.iter().map(|&sj| t[sj]).collect())
            .collect();
        GammaElement { perms }
    }

    pub fn inverse(&self) -> GammaElement {
        let perms = self
            .perms
            .iter()
            .map(|s| {
                let mut inv = vec![0; s.len()];
                for (j, &sj) in s.iter().enumerate() {
                    inv[sj] = j;
                }
                inv
            })
            .collect();
        GammaElement { perms }
    }

    pub fn act(&self, x: &[Fe]) -> Vec<Fe> {
        let d = self.perms.first().map(Vec::len).unwrap_or(0);
        let mut y = x.to_vec();
        for (i, s) in self.perms.iter().enumerate() {
            for j in 0..d {
                y[i * d + j] = x[i * d + s[j]];
            }
        }
        y
    }

    /// `P ∘ γ` as a polynomial.
    pub fn pull_back(&self, p: &MultiPoly) -> Result<MultiPoly> {
        let d = self.perms.first().map(Vec::len).unwrap_or(0);
        let mut subs = Vec::new();
        for (i, s) in self.perms.iter().enumerate() {
            for j in 0..d {
                subs.push(MultiPoly::var(p.field(), p.nvars(), i * d + s[j]));
            }
        }
        p.compose(&subs)
    }
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

/// Components `f^θ(x) = |T|^{-1} Σ_t θ(t)^{-1} f(t·x)`; zero components dropped.
pub fn torus_decompose(
    f: &FunctionOnX,
    x: &VarietyPoints,
    torus: &TorusT,
    ctx: &Ctx,
) -> Result<BTreeMap<CharacterTheta, FunctionOnX>> {
    let field = x.field();
    let chars = torus.characters();
    ctx.check(
        chars.len() as u128 * torus.order() as u128 * x.len() as u128,
        "torus decomposition",
    )?;
    // orbit table: for each point and each t, the ordinal of t·x
    let orbit: Vec<Vec<usize>> = ctx.par_map(x.points(), |p| {
        torus
            .elements
            .iter()
            .map(|t| x.index(&torus.act(t, p)).expect("T preserves X"))
            .collect()
    });
    let inv_order = field.inv(field.elem(torus.order() as i64))?;
    let comps: Vec<(CharacterTheta, FunctionOnX)> = ctx.par_map(&chars, |chi| {
        let inv_vals: Vec<Fe> = torus
            .elements
            .iter()
            .map(|t| torus.delta.power(-(chi.log_value(t) as i64)))
            .collect();
        let values = orbit
            .iter()
            .map(|row| {
                let s = row
                    .iter()
                    .zip(&inv_vals)
                    .fold(Fe::ZERO, |s, (&k, &c)| field.add(s, field.mul(c, f.values[k])));
                field.mul(s, inv_order)
            })
            .collect();
        (chi.clone(), FunctionOnX::new(values))
    });
    Ok(comps.into_iter().filter(|(_, v)| !v.is_zero()).collect())
}

/// Checks `f(t·x) = θ(t) f(x)` exhaustively.
pub fn is_equivariant(f: &FunctionOnX, x: &VarietyPoints, torus: &TorusT, chi: &CharacterTheta) -> bool {
    let field = x.field();
    x.points().iter().zip(&f.values).all(|(p, &v)| {
        torus.elements.iter().all(|t| {
            let k = x.index(&torus.act(t, p)).expect("T preserves X");
            f.values[k] == field.mul(chi.value(&torus.delta, t), v)
        })
    })
}

#[derive(Clone, Debug, Default)]
pub struct AdmissibleSplit {
    pub plus: Vec<CharacterTheta>,
    /// Admissible characters outside the `+` set, with the witness moving them in.
    pub admissible: Vec<(CharacterTheta, Option<GammaElement>)>,
    pub rest: Vec<CharacterTheta>,
}

/// `γ` with `θ∘γ` in the `+` set, searched blockwise over `S_d`.
pub fn plus_witness(chi: &CharacterTheta, a: u32) -> Option<GammaElement> {
    let n = chi.exps.len();
    let d = chi.exps.first().map(Vec::len).unwrap_or(0);
    let perms = permutations(d);
    let mut out = Vec::new();
    for i in 0..n {
        let single = CharacterTheta {
            m: chi.m,
            exps: vec![chi.exps[i].clone()],
        };
        let s = perms.iter().find(|s| {
            let g = GammaElement { perms: vec![(*s).clone()] };
            single.compose(&g).is_admissible_plus(a)
        })?;
        out.push(s.clone());
    }
    Some(GammaElement { perms: out })
}

pub fn admissible_filter<'a>(chars: impl IntoIterator<Item = &'a CharacterTheta>, a: u32) -> AdmissibleSplit {
    let mut split = AdmissibleSplit::default();
    for chi in chars {
        if chi.is_admissible_plus(a) {
            split.plus.push(chi.clone());
        } else if chi.is_admissible(a) {
            split.admissible.push((chi.clone(), plus_witness(chi, a)));
        } else {
            split.rest.push(chi.clone());
        }
    }
    split
}

/// `P(v) = ∏_i ∏_j (x_i^j)^{β_{i,j}} · h(ν(v))` for `θ` in the `+` set.
pub fn build_p_from_h(x: &ExplicitVariety, h: &MultiPoly, chi: &CharacterTheta, a: u32) -> Result<MultiPoly> {
    if !chi.is_admissible_plus(a) {
        return Err(Error::Precondition(format!("character {chi} is not in the + set")));
    }
    if h.nvars() != x.n {
        return Err(Error::DimensionMismatch {
            expected: x.n,
            got: h.nvars(),
        });
    }
    let nv = x.nvars();
    let mus: Vec<MultiPoly> = (0..x.n)
        .map(|i| {
            let mut e = vec![0u32; nv];
            e[i * x.d..(i + 1) * x.d].iter_mut().for_each(|v| *v = 1);
            MultiPoly::monomial(x.field, Monomial(e), Fe::ONE)
        })
        .collect();
    let hn = h.compose(&mus)?;
    let mut e = vec![0u32; nv];
    for i in 0..x.n {
        for (j, b) in chi.beta(i).into_iter().enumerate() {
            e[i * x.d + j] = b as u32;
        }
    }
    let p = hn.mul_monomial(&Monomial(e), Fe::ONE);
    if !p.is_zero() && p.degree() as usize > a as usize * x.d {
        return Err(Error::Verification(format!(
            "assembled polynomial has degree {} > a·d = {}",
            p.degree(),
            a as usize * x.d
        )));
    }
    Ok(p)
}

#[derive(Clone, Debug, Serialize)]
pub struct Strata {
    /// `z(x)` per point of `X`.
    #[serde(skip)]
    pub z: Vec<usize>,
    /// Number of points with `z(x) = s`.
    pub counts: Vec<u64>,
    /// `Y_0` equals the `Γ`-orbit of `X ∩ (W^0)^n`.
    pub y0_is_gamma_orbit: bool,
}

fn z_block(delta: &DeltaSubgroup, w: &[Fe]) -> usize {
    let i = w.iter().filter(|&&v| !delta.contains(v)).count();
    i.saturating_sub(1)
}

pub fn stratify_ys(x: &ExplicitVariety, points: &VarietyPoints, delta: &DeltaSubgroup) -> Strata {
    let z: Vec<usize> = points
        .points()
        .iter()
        .map(|p| (0..x.n).map(|i| z_block(delta, x.block(p, i))).sum())
        .collect();
    let maxz = z.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0u64; maxz + 1];
    for &s in &z {
        counts[s] += 1;
    }
    // W^0: coordinates 1.. of each block in Δ
    let perms = permutations(x.d);
    let x0: Vec<&Vec<Fe>> = points
        .points()
        .iter()
        .filter(|p| (0..x.n).all(|i| x.block(p, i)[1..].iter().all(|&v| delta.contains(v))))
        .collect();
    let mut orbit = BTreeSet::new();
    let mut gamma = vec![0usize; x.n];
    loop {
        let g = GammaElement {
            perms: gamma.iter().map(|&k| perms[k].clone()).collect(),
        };
        for p in &x0 {
            orbit.insert(g.act(p));
        }
        let mut i = 0;
        while i < x.n {
            gamma[i] += 1;
            if gamma[i] < perms.len() {
                break;
            }
            gamma[i] = 0;
            i += 1;
        }
        if i == x.n {
            break;
        }
    }
    let y0: BTreeSet<Vec<Fe>> = points
        .points()
        .iter()
        .zip(&z)
        .filter(|(_, &s)| s == 0)
        .map(|(p, _)| p.clone())
        .collect();
    Strata {
        z,
        counts,
        y0_is_gamma_orbit: y0 == orbit,
    }
}

#[derive(Clone, Debug)]
pub struct ComponentReport {
    pub theta: CharacterTheta,
    pub gamma: GammaElement,
    pub degree: u32,
}

#[derive(Clone, Debug)]
pub struct ExplicitExtension {
    /// Sum of the per-character polynomials, degree `<= a·d`.
    pub assembled: MultiPoly,
    /// Final extension of degree `<= a`.
    pub poly: MultiPoly,
    pub components: Vec<ComponentReport>,
    /// The assembled polynomial already had degree `<= a`.
    pub reduction_trivial: bool,
}

/// Checks the torus field conditions: `m | q − 1` and `m > a·d`.
pub fn check_admissible_field(field: PrimeField, m: u32, a: u32, d: usize) -> Result<()> {
    if m == 0 || !(field.p() - 1).is_multiple_of(m) {
        return Err(Error::NotAdmissible(format!("m = {m} does not divide q − 1 = {}", field.p() - 1)));
    }
    if m as usize <= a as usize * d {
        return Err(Error::NotAdmissible(format!("need m > a·d, got m = {m}, a·d = {}", a as usize * d)));
    }
    Ok(())
}

/// Extends a weakly polynomial `f` of degree `<= a` on `X_n` through the
/// character decomposition. Each residual is checked on `Y_0` and then on
/// every stratum.
pub fn explicit_extension(
    x: &ExplicitVariety,
    points: &VarietyPoints,
    f: &FunctionOnX,
    m: u32,
    a: u32,
    ctx: &Ctx,
) -> Result<ExplicitExtension> {
    let field = x.field;
    check_admissible_field(field, m, a, x.d)?;
    let torus = TorusT::new(field, m, x.d, x.n, ctx)?;
    let strata = stratify_ys(x, points, &torus.delta);
    let comps = torus_decompose(f, points, &torus, ctx)?;
    let lpts = x.l_points();
    let lvar = VarietyPoints::from_points(field, x.n, &lpts);
    let mut assembled = MultiPoly::zero(field, x.nvars());
    let mut reports = Vec::new();
    for (chi, comp) in &comps {
        if !chi.is_admissible(a) {
            return Err(Error::Verification(format!(
                "non-admissible character {chi} carries a nonzero component"
            )));
        }
        let gamma = plus_witness(chi, a).ok_or_else(|| {
            Error::Verification(format!("no permutation moves {chi} into the + set"))
        })?;
        let chi_plus = chi.compose(&gamma);
        // f' = f^θ ∘ γ is θ∘γ-equivariant
        let fp = FunctionOnX::from_fn(points, |p| comp.values[points.index(&gamma.act(p)).expect("Γ preserves X")]);
        let hvals = FunctionOnX::new(
            lpts.iter()
                .map(|c| fp.values[points.index(&x.kappa_embed(c).expect("c in L")).expect("κ(c) in X")])
                .collect(),
        );
        let h = match extend_by_solve(&hvals, &lvar, a, ctx)? {
            Extension::Feasible(h) => h,
            Extension::Infeasible { .. } => {
                return Err(Error::Verification(format!(
                    "h for {chi} is not a polynomial of degree <= {a} on L"
                )))
            }
        };
        let pp = build_p_from_h(x, &h, &chi_plus, a)?;
        // residual on Y_0, then stratum by stratum
        let resid: Vec<bool> = points
            .points()
            .iter()
            .zip(&fp.values)
            .map(|(pt, &v)| pp.eval_unchecked(pt) != v)
            .collect();
        for s in 0..strata.counts.len() {
            if let Some(k) = (0..points.len()).find(|&k| strata.z[k] == s && resid[k]) {
                return Err(Error::Verification(format!(
                    "residual for {chi} is nonzero on stratum Y_{s} at {:?}",
                    points.points()[k].iter().map(|v| v.0).collect::<Vec<_>>()
                )));
            }
        }
        let p = gamma.inverse().pull_back(&pp)?;
        if !comp.agrees_with(points, &p) {
            return Err(Error::Verification(format!("component {chi} not reproduced")));
        }
        reports.push(ComponentReport {
            theta: chi.clone(),
            gamma,
            degree: if p.is_zero() { 0 } else { p.degree() },
        });
        assembled = assembled.add(&p);
    }
    if !f.agrees_with(points, &assembled) {
        return Err(Error::Verification("assembled polynomial does not restrict to f".into()));
    }
    let reduction_trivial = assembled.is_zero() || assembled.degree() <= a;
    let poly = if reduction_trivial {
        assembled.clone()
    } else {
        let g = FunctionOnX::from_poly(points, &assembled);
        match extend_by_solve(&g, points, a, ctx)? {
            Extension::Feasible(p) => p,
            Extension::Infeasible { .. } => {
                return Err(Error::Infeasible(format!(
                    "degree <= {} restriction has no degree <= {a} extension",
                    a as usize * x.d
                )))
            }
        }
    };
    Ok(ExplicitExtension {
        assembled,
        poly,
        components: reports,
        reduction_trivial,
    })
}

/// `Σ_θ f^θ = f`.
pub fn reconstructs(f: &FunctionOnX, comps: &BTreeMap<CharacterTheta, FunctionOnX>, field: PrimeField) -> bool {
    let mut s = vec![Fe::ZERO; f.len()];
    for c in comps.values() {
        for (a, &b) in s.iter_mut().zip(&c.values) {
            *a = field.add(*a, b);
        }
    }
    s == f.values
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::weakpoly::weak_space;

    #[test]
    fn build_examples() {
        let x = build(2, 2, 3).unwrap();
        assert_eq!(x.poly.num_terms(), 2);
        assert_eq!(x.poly.degree(), 2);
        let y = build(3, 1, 5).unwrap();
        assert_eq!(y.poly.num_terms(), 1);
        assert_eq!(y.poly.degree(), 3);
        let z = build(2, 3, 5).unwrap();
        assert_eq!((z.nvars(), z.poly.num_terms()), (6, 3));
        assert!(build(3, 2, 3).is_err());
    }

    #[test]
    fn mu_bias_values() {
        let ctx = Ctx::default();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(mu_bias(2, 2, &ctx).unwrap().magnitude, Some(half));
        assert_eq!(mu_bias(1, 5, &ctx).unwrap().magnitude, Some(BigRational::zero()));
        assert_eq!(mu_bias(2, 3, &ctx).unwrap().magnitude, Some(BigRational::new(1.into(), 3.into())));
    }

    #[test]
    fn growth_rows() {
        let ctx = Ctx::default();
        let rows = nc_rank_growth_check(2, 2, &[1, 2], &ctx).unwrap();
        assert_eq!(rows[0].full_value, Some(BigRational::new(1.into(), 4.into())));
        assert_eq!(rows[0].u_value, Some(BigRational::new(1.into(), 2.into())));
        for r in &rows {
            assert_eq!(r.u_value, r.t_power);
            assert_eq!(r.full_le_u, Some(true));
        }
        let lin = nc_rank_growth_check(1, 3, &[2], &ctx).unwrap();
        assert_eq!(lin[0].full_value, Some(BigRational::zero()));
    }

    #[test]
    fn kappa_and_nu() {
        let x = build(2, 2, 5).unwrap();
        let v = x.kappa_embed(&[Fe(1), Fe(4)]).unwrap();
        assert_eq!(x.nu(&v), vec![Fe(1), Fe(4)]);
        assert_eq!(x.poly.eval_unchecked(&v), Fe(0));
        assert!(x.kappa_embed(&[Fe(1), Fe(1)]).is_err());
        for c in x.l_points() {
            assert_eq!(x.poly.eval_unchecked(&x.kappa_embed(&c).unwrap()), Fe(0));
        }
    }

    #[test]
    fn alpha_and_admissibility() {
        let t = CharacterTheta::trivial(3, 2, 2);
        assert!(t.is_admissible_plus(1));
        let chi = CharacterTheta::from_exps(7, vec![vec![0, 4]]);
        assert_eq!(chi.alpha(0, 1, 0), -3);
        assert!(!chi.is_admissible(2));
        let chi = CharacterTheta::from_exps(7, vec![vec![0, 5]]);
        assert!(chi.is_admissible(2));
        assert!(!chi.is_admissible_plus(2));
        let g = plus_witness(&chi, 2).unwrap();
        assert!(chi.compose(&g).is_admissible_plus(2));
    }

    #[test]
    fn torus_and_gamma_conventions_agree() {
        let ctx = Ctx::default();
        let x = build(2, 1, 7).unwrap();
        let pts = x.points(&ctx).unwrap();
        let torus = TorusT::new(x.field, 3, 2, 1, &ctx).unwrap();
        assert_eq!(torus.order(), 3);
        // x_1^1 · x_1^2 … the monomial x^1 transforms by u_1
        let mono = MultiPoly::var(x.field, 2, 0);
        let f = FunctionOnX::from_poly(&pts, &mono);
        let comps = torus_decompose(&f, &pts, &torus, &ctx).unwrap();
        assert_eq!(comps.len(), 1);
        let (chi, comp) = comps.iter().next().unwrap();
        assert!(is_equivariant(comp, &pts, &torus, chi));
        let swap = GammaElement { perms: vec![vec![1, 0]] };
        let moved = chi.compose(&swap);
        let fg = FunctionOnX::from_fn(&pts, |p| comp.values[pts.index(&swap.act(p)).unwrap()]);
        assert!(is_equivariant(&fg, &pts, &torus, &moved));
    }

    #[test]
    fn decomposition_reconstructs() {
        let ctx = Ctx::default();
        let x = build(2, 2, 7).unwrap();
        let pts = x.points(&ctx).unwrap();
        let torus = TorusT::new(x.field, 3, 2, 2, &ctx).unwrap();
        let f = FunctionOnX::from_fn(&pts, |p| Fe((p[0].0 * 3 + p[3].0 * p[1].0) % 7));
        let comps = torus_decompose(&f, &pts, &torus, &ctx).unwrap();
        assert!(reconstructs(&f, &comps, x.field));
        for (chi, c) in &comps {
            assert!(is_equivariant(c, &pts, &torus, chi));
        }
        let one = FunctionOnX::new(vec![Fe(1); pts.len()]);
        let comps = torus_decompose(&one, &pts, &torus, &ctx).unwrap();
        assert_eq!(comps.len(), 1);
        assert!(comps.keys().next().unwrap().is_trivial());
    }

    #[test]
    fn strata_small() {
        let ctx = Ctx::default();
        let x = build(2, 2, 7).unwrap();
        let pts = x.points(&ctx).unwrap();
        let delta = x.field.delta_subgroup(3).unwrap();
        let s = stratify_ys(&x, &pts, &delta);
        assert!(s.y0_is_gamma_orbit);
        assert_eq!(s.counts.iter().sum::<u64>(), pts.len() as u64);
    }

    #[test]
    fn pipeline_on_weak_basis() {
        let ctx = Ctx::default();
        let x = build(2, 2, 7).unwrap();
        let pts = x.points(&ctx).unwrap();
        let w = weak_space(&pts, 1, &ctx).unwrap();
        for f in w.basis() {
            let e = explicit_extension(&x, &pts, &f, 3, 1, &ctx).unwrap();
            assert!(f.agrees_with(&pts, &e.poly));
            assert!(e.poly.degree() <= 1);
        }
    }

    #[test]
    fn pipeline_matches_solver() {
        let ctx = Ctx::default();
        let x = build(2, 2, 7).unwrap();
        let pts = x.points(&ctx).unwrap();
        let w = weak_space(&pts, 1, &ctx).unwrap();
        for f in w.basis() {
            let e = explicit_extension(&x, &pts, &f, 3, 1, &ctx).unwrap();
            match extend_by_solve(&f, &pts, 1, &ctx).unwrap() {
                Extension::Feasible(p) => assert_eq!(FunctionOnX::from_poly(&pts, &p), FunctionOnX::from_poly(&pts, &e.poly)),
                Extension::Infeasible { .. } => panic!("solver disagrees"),
            }
        }
    }

    #[test]
    fn non_admissible_component_rejected() {
        let ctx = Ctx::default();
        let x = build(2, 1, 7).unwrap();
        let pts = x.points(&ctx).unwrap();
        let sq = MultiPoly::from_terms(x.field, 2, [(1, vec![2, 0])]).unwrap();
        let f = FunctionOnX::from_poly(&pts, &sq);
        let err = explicit_extension(&x, &pts, &f, 6, 1, &ctx).unwrap_err();
        assert!(err.to_string().contains("non-admissible"), "{err}");
        assert!(matches!(explicit_extension(&x, &pts, &f, 2, 1, &ctx), Err(Error::NotAdmissible(_))));
        assert!(matches!(explicit_extension(&x, &pts, &f, 5, 1, &ctx), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn global_polynomial_restriction_extends() {
        let ctx = Ctx::default();
        let x = build(2, 2, 7).unwrap();
        let pts = x.points(&ctx).unwrap();
        let g = MultiPoly::from_terms(x.field, 4, [(3, vec![1, 0, 0, 0]), (5, vec![0, 0, 0, 1]), (2, vec![0; 4])]).unwrap();
        let f = FunctionOnX::from_poly(&pts, &g);
        let e = explicit_extension(&x, &pts, &f, 3, 1, &ctx).unwrap();
        assert!(f.agrees_with(&pts, &e.poly));
    }

    #[test]
    fn build_p_trivial_character() {
        let x = build(2, 2, 7).unwrap();
        let h = MultiPoly::var(x.field, 2, 0);
        let chi = CharacterTheta::trivial(3, 2, 2);
        let p = build_p_from_h(&x, &h, &chi, 1).unwrap();
        assert_eq!(p, MultiPoly::from_terms(x.field, 4, [(1, vec![1, 1, 0, 0])]).unwrap());
        assert!(build_p_from_h(&x, &MultiPoly::zero(x.field, 2), &chi, 1).unwrap().is_zero());
    }
}
