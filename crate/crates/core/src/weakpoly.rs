//! Weakly polynomial functions on `X` and their extensions to `V`.
//!
//! A function on `X` is weakly polynomial of degree `<= a` when its
//! restriction to every affine subspace of the testing dimension contained in
//! `X` is a polynomial of degree `<= a`. Everything here is exact linear
//! algebra in the values of `f` at the points of `X`.

use num_rational::BigRational;
use serde::Serialize;

use crate::affine::{AffineFunctional, AffineSubspace};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::geometry::{enumerate_subspaces_in, slice, Ratio, VarietyPoints};
use crate::gf::{Fe, PrimeField};
use crate::linalg::{Echelon, Matrix, Solve};
use crate::poly::{decode, interpolate_table, monomials_up_to, Monomial, MultiPoly};

/// Values of a function at the points of `X`, in point order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionOnX {
    pub values: Vec<Fe>,
}

impl FunctionOnX {
    pub fn new(values: Vec<Fe>) -> Self {
        FunctionOnX { values }
    }

    pub fn zero(x: &VarietyPoints) -> Self {
        FunctionOnX::new(vec![Fe::ZERO; x.len()])
    }

    pub fn from_poly(x: &VarietyPoints, p: &MultiPoly) -> Self {
        FunctionOnX::new(x.points().iter().map(|v| p.eval_unchecked(v)).collect())
    }

    pub fn from_fn(x: &VarietyPoints, f: impl Fn(&[Fe]) -> Fe) -> Self {
        FunctionOnX::new(x.points().iter().map(|v| f(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn value_at(&self, x: &VarietyPoints, pt: &[Fe]) -> Option<Fe> {
        x.index(pt).map(|i| self.values[i])
    }

    /// The restriction to a subset `y ⊆ x`.
    pub fn restrict(&self, x: &VarietyPoints, y: &VarietyPoints) -> FunctionOnX {
        FunctionOnX::new(
            y.points()
                .iter()
                .map(|p| self.values[x.index(p).expect("subset of X")])
                .collect(),
        )
    }

    pub fn sub(&self, field: &PrimeField, other: &FunctionOnX) -> FunctionOnX {
        FunctionOnX::new(self.values.iter().zip(&other.values).map(|(&a, &b)| field.sub(a, b)).collect())
    }

    /// True iff `p` agrees with this function at every point of `x`.
    pub fn agrees_with(&self, x: &VarietyPoints, p: &MultiPoly) -> bool {
        x.points().iter().zip(&self.values).all(|(pt, &v)| p.eval_unchecked(pt) == v)
    }
}

/// A subspace of `k[X]` held as canonical echelon rows.
#[derive(Clone, Debug)]
pub struct LinearSpaceOfFunctions {
    echelon: Echelon,
}

impl LinearSpaceOfFunctions {
    pub fn from_basis(field: PrimeField, len: usize, basis: impl IntoIterator<Item = Vec<Fe>>) -> Self {
        let mut echelon = Echelon::new(field, len);
        for v in basis {
            echelon.insert(v);
        }
        LinearSpaceOfFunctions { echelon }
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn basis(&self) -> Vec<FunctionOnX> {
        self.echelon.canonical_rows().into_iter().map(FunctionOnX::new).collect()
    }

    pub fn contains(&self, f: &FunctionOnX) -> bool {
        self.echelon.contains(&f.values)
    }

    pub fn is_subspace_of(&self, other: &LinearSpaceOfFunctions) -> bool {
        self.echelon.rows().iter().all(|r| other.echelon.contains(r))
    }
}

/// `⌈(a+1)/(q−1)⌉`, the subspace dimension on which degree `<= a` is tested
/// over a prime field.
pub fn testing_dim(q: u32, a: u32) -> usize {
    ((a + 1) as usize).div_ceil(q as usize - 1)
}

/// Reduced monomials of degree `> a` in `l` variables paired with the linear
/// functional (on the `q^l` values in code order) giving their coefficient.
fn high_coefficient_rows(field: PrimeField, l: usize, a: u32) -> Vec<(Monomial, Vec<Fe>)> {
    let q = field.p();
    let size = (q as usize).pow(l as u32);
    let interps: Vec<MultiPoly> = (0..size)
        .map(|t| {
            let mut e = vec![Fe::ZERO; size];
            e[t] = Fe::ONE;
            interpolate_table(field, l, &e).expect("table size")
        })
        .collect();
    monomials_up_to(l, l as u32 * (q - 1), q - 1)
        .into_iter()
        .filter(|m| m.degree() > a)
        .map(|m| {
            let row = interps.iter().map(|p| p.coeff(&m)).collect();
            (m, row)
        })
        .collect()
}

fn test_subspaces(x: &VarietyPoints, a: u32, ctx: &Ctx) -> Result<(usize, Vec<AffineSubspace>)> {
    let l = testing_dim(x.field().p(), a).min(x.ambient_dim());
    Ok((l, enumerate_subspaces_in(x, l, None, ctx)?))
}

#[derive(Clone, Debug)]
pub struct WeakTest {
    pub holds: bool,
    pub testing_dim: usize,
    pub subspaces_tested: usize,
    /// A subspace where the restriction has degree `> a`, with that degree.
    pub offending: Option<(AffineSubspace, u32)>,
}

pub fn is_weakly_polynomial(f: &FunctionOnX, x: &VarietyPoints, a: u32, ctx: &Ctx) -> Result<WeakTest> {
    let field = x.field();
    let (l, subs) = test_subspaces(x, a, ctx)?;
    for s in &subs {
        let vals: Vec<Fe> = s.points().iter().map(|p| f.value_at(x, p).expect("inside X")).collect();
        let deg = interpolate_table(field, l, &vals)?.degree();
        if deg > a {
            return Ok(WeakTest {
                holds: false,
                testing_dim: l,
                subspaces_tested: subs.len(),
                offending: Some((s.clone(), deg)),
            });
        }
    }
    Ok(WeakTest {
        holds: true,
        testing_dim: l,
        subspaces_tested: subs.len(),
        offending: None,
    })
}

/// Largest degree of `f|_L` over testing subspaces `L ⊂ X` of the dimension
/// used for degree `a`. `None` when `X` holds no such subspace.
pub fn weak_degree(f: &FunctionOnX, x: &VarietyPoints, a: u32, ctx: &Ctx) -> Result<Option<u32>> {
    let field = x.field();
    let (l, subs) = test_subspaces(x, a, ctx)?;
    let mut best: Option<u32> = None;
    for s in &subs {
        let vals: Vec<Fe> = s.points().iter().map(|p| f.value_at(x, p).expect("inside X")).collect();
        let p = interpolate_table(field, l, &vals)?;
        let d = if p.is_zero() { 0 } else { p.degree() };
        best = Some(best.map_or(d, |b| b.max(d)));
    }
    Ok(best)
}

/// The space of weakly polynomial functions of degree `<= a` on `X`.
pub fn weak_space(x: &VarietyPoints, a: u32, ctx: &Ctx) -> Result<LinearSpaceOfFunctions> {
    let field = x.field();
    let (l, subs) = test_subspaces(x, a, ctx)?;
    let rows = high_coefficient_rows(field, l, a);
    ctx.check(
        subs.len() as u128 * rows.len() as u128 * x.len() as u128,
        "weak-polynomial constraint system",
    )?;
    let point_idx: Vec<Vec<usize>> = ctx.par_map(&subs, |s| {
        s.points().iter().map(|p| x.index(p).expect("inside X")).collect()
    });
    let mut cons = Echelon::new(field, x.len());
    'outer: for idx in &point_idx {
        for (_, r) in &rows {
            let mut v = vec![Fe::ZERO; x.len()];
            for (&i, &c) in idx.iter().zip(r) {
                v[i] = field.add(v[i], c);
            }
            cons.insert(v);
            if cons.is_full() {
                break 'outer;
            }
        }
    }
    Ok(LinearSpaceOfFunctions::from_basis(field, x.len(), cons.kernel()))
}

fn function_monomials(x: &VarietyPoints, a: u32) -> Vec<Monomial> {
    let q = x.field().p();
    monomials_up_to(x.ambient_dim(), a, q - 1)
}

/// Restrictions to `X` of polynomials of degree `<= a` on `V`.
pub fn restriction_space(x: &VarietyPoints, a: u32, ctx: &Ctx) -> Result<LinearSpaceOfFunctions> {
    let field = x.field();
    let monos = function_monomials(x, a);
    ctx.check(monos.len() as u128 * x.len() as u128, "restriction space")?;
    let rows = monos.iter().map(|m| x.points().iter().map(|p| m.eval(&field, p)).collect());
    Ok(LinearSpaceOfFunctions::from_basis(field, x.len(), rows))
}

#[derive(Clone, Debug, Serialize)]
pub struct StarReport {
    pub a: u32,
    pub weak_dim: usize,
    pub restriction_dim: usize,
    /// Restrictions are always weakly polynomial; checked on every run.
    pub contained: bool,
    pub holds: bool,
    pub gap: usize,
}

pub fn star_check(x: &VarietyPoints, a: u32, ctx: &Ctx) -> Result<StarReport> {
    let w = weak_space(x, a, ctx)?;
    let r = restriction_space(x, a, ctx)?;
    let contained = r.is_subspace_of(&w);
    if !contained {
        return Err(Error::Verification(
            "a restriction of a global polynomial failed the weak test".into(),
        ));
    }
    Ok(StarReport {
        a,
        weak_dim: w.dim(),
        restriction_dim: r.dim(),
        contained,
        holds: w.dim() == r.dim(),
        gap: w.dim() - r.dim(),
    })
}

#[derive(Clone, Debug)]
pub enum Extension {
    Feasible(MultiPoly),
    /// `y` over the points of `X` with `Σ y_x m(x) = 0` for every monomial of
    /// degree `<= a` and `Σ y_x f(x) = 1`.
    Infeasible { dual: Vec<Fe> },
}

impl Extension {
    pub fn poly(&self) -> Option<&MultiPoly> {
        match self {
            Extension::Feasible(p) => Some(p),
            Extension::Infeasible { .. } => None,
        }
    }
}

/// A polynomial of degree `<= a` on `V` restricting to `f`, or a dual certificate.
pub fn extend_by_solve(f: &FunctionOnX, x: &VarietyPoints, a: u32, ctx: &Ctx) -> Result<Extension> {
    let field = x.field();
    let n = x.ambient_dim();
    let monos = function_monomials(x, a);
    ctx.check(
        monos.len() as u128 * x.len() as u128 * (monos.len().min(x.len()) as u128 + 1),
        "extension solve",
    )?;
    let rows: Vec<Vec<Fe>> = x.points().iter().map(|p| monos.iter().map(|m| m.eval(&field, p)).collect()).collect();
    let mat = Matrix::from_rows(field, rows, monos.len());
    match mat.solve(&f.values) {
        Solve::Solution(c) => {
            let mut p = MultiPoly::zero(field, n);
            for (m, v) in monos.into_iter().zip(c) {
                p.add_term(m, v);
            }
            if !f.agrees_with(x, &p) {
                return Err(Error::Verification("solved extension does not restrict to f".into()));
            }
            Ok(Extension::Feasible(p))
        }
        Solve::Infeasible(y) => {
            let ok_cols = (0..monos.len()).all(|j| {
                (0..x.len()).fold(Fe::ZERO, |s, i| field.add(s, field.mul(y[i], mat.get(i, j)))).is_zero()
            });
            let pairing = y.iter().zip(&f.values).fold(Fe::ZERO, |s, (&a, &b)| field.add(s, field.mul(a, b)));
            if !ok_cols || pairing != Fe::ONE {
                return Err(Error::Verification("dual certificate fails".into()));
            }
            Ok(Extension::Infeasible { dual: y })
        }
    }
}

fn product_of_levels(field: PrimeField, l: &AffineFunctional, s: &[Fe], b: Fe) -> Result<MultiPoly> {
    let lp = l.to_poly(field);
    let n = lp.nvars();
    let mut num = MultiPoly::constant(field, n, Fe::ONE);
    let mut den = Fe::ONE;
    for &si in s {
        num = num.mul(&lp.sub(&MultiPoly::constant(field, n, si)));
        den = field.mul(den, field.sub(b, si));
    }
    Ok(num.scale(field.inv(den)?))
}

#[derive(Clone, Debug)]
pub struct SliceStep {
    pub b: Fe,
    pub q: MultiPoly,
    /// Largest degree of `f|_L` over testing subspaces `L ⊂ X_b`.
    pub measured_degree: Option<u32>,
}

/// `Q` of degree `<= a` with `Q ≡ 0` on `X_S` and `Q ≡ f` on `X_b`. The inner
/// extension of `f|_{X_b}` (degree `<= a − |S|`) is solved exactly.
pub fn slice_extension_step(
    f: &FunctionOnX,
    x: &VarietyPoints,
    l: &AffineFunctional,
    s: &[Fe],
    b: Fe,
    a: u32,
    ctx: &Ctx,
) -> Result<SliceStep> {
    let field = x.field();
    if s.contains(&b) {
        return Err(Error::Precondition("level b must lie outside S".into()));
    }
    if s.len() > a as usize {
        return Err(Error::Precondition(format!("|S| = {} exceeds a = {a}", s.len())));
    }
    let xs = slice(x, l, s);
    if !f.restrict(x, &xs).is_zero() {
        return Err(Error::Precondition("f does not vanish on X_S".into()));
    }
    let xb = slice(x, l, &[b]);
    let g = f.restrict(x, &xb);
    let inner_a = a - s.len() as u32;
    let measured_degree = if g.is_empty() {
        None
    } else {
        weak_degree(&g, &xb, inner_a, ctx)?
    };
    let qprime = match extend_by_solve(&g, &xb, inner_a, ctx)? {
        Extension::Feasible(p) => p,
        Extension::Infeasible { .. } => {
            return Err(Error::Infeasible(format!(
                "no extension of degree <= {inner_a} on the slice l = {}",
                b.0
            )))
        }
    };
    let q = qprime.mul(&product_of_levels(field, l, s, b)?);
    if q.degree() > a && !q.is_zero() {
        return Err(Error::Verification("slice polynomial exceeds degree a".into()));
    }
    if !FunctionOnX::zero(&xs).agrees_with(&xs, &q) || !g.agrees_with(&xb, &q) {
        return Err(Error::Verification("slice polynomial fails a vanishing condition".into()));
    }
    Ok(SliceStep { b, q, measured_degree })
}

#[derive(Clone, Debug)]
pub struct SliceExtension {
    pub poly: MultiPoly,
    pub steps: Vec<SliceStep>,
    /// `extend_by_solve` on the same input also succeeded.
    pub solver_agrees: bool,
}

/// Assembles an extension level by level over `b = 0, 1, …, q−1`.
pub fn extend_by_slices(
    f: &FunctionOnX,
    x: &VarietyPoints,
    l: &AffineFunctional,
    a: u32,
    ctx: &Ctx,
) -> Result<SliceExtension> {
    let field = x.field();
    if l.is_constant() {
        return Err(Error::InvalidInput("slicing functional must be nonconstant".into()));
    }
    let mut g = f.clone();
    let mut total = MultiPoly::zero(field, x.ambient_dim());
    let mut s: Vec<Fe> = Vec::new();
    let mut steps = Vec::new();
    for b in field.elements() {
        if s.len() > a as usize {
            let xb = slice(x, l, &[b]);
            if !g.restrict(x, &xb).is_zero() {
                return Err(Error::Infeasible(format!(
                    "residual nonzero on level {} after {} vanishing levels",
                    b.0,
                    s.len()
                )));
            }
        } else {
            let step = slice_extension_step(&g, x, l, &s, b, a, ctx)?;
            g = g.sub(&field, &FunctionOnX::from_poly(x, &step.q));
            total = total.add(&step.q);
            steps.push(step);
        }
        s.push(b);
    }
    if !f.agrees_with(x, &total) {
        return Err(Error::Verification("assembled slice extension does not restrict to f".into()));
    }
    let solver_agrees = matches!(extend_by_solve(f, x, a, ctx)?, Extension::Feasible(_));
    Ok(SliceExtension {
        poly: total,
        steps,
        solver_agrees,
    })
}

/// A functional vanishing on `inner` and equal to 1 at `inner.base + dir`.
fn separating_functional(inner: &AffineSubspace, dir: &[Fe]) -> Result<AffineFunctional> {
    let f = inner.field();
    let n = inner.ambient_dim();
    // unknowns (c_1..c_n, c_0): c·base + c_0 = 0, c·v = 0, c·dir = 1
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut r = inner.base().to_vec();
    r.push(Fe::ONE);
    rows.push(r);
    rhs.push(Fe::ZERO);
    for v in inner.basis() {
        let mut r = v.clone();
        r.push(Fe::ZERO);
        rows.push(r);
        rhs.push(Fe::ZERO);
    }
    let mut r = dir.to_vec();
    r.push(Fe::ZERO);
    rows.push(r);
    rhs.push(Fe::ONE);
    match Matrix::from_rows(f, rows, n + 1).solve(&rhs) {
        Solve::Solution(c) => Ok(AffineFunctional {
            coeffs: c[..n].to_vec(),
            constant: c[n],
        }),
        Solve::Infeasible(_) => Err(Error::InvalidInput("direction lies in the subspace".into())),
    }
}

#[derive(Clone, Debug)]
pub struct FlagExtension {
    pub poly: MultiPoly,
    /// Dimensions of the flag members, starting at `W`.
    pub flag: Vec<usize>,
}

/// Extends `f` from `X ∩ W` up a flag `W = W_0 ⊂ W_1 ⊂ … ⊂ V`, one hyperplane
/// step at a time. `r_w` is a polynomial in the parameters of `W` agreeing
/// with `f` on `X ∩ W`.
pub fn flag_extension(
    f: &FunctionOnX,
    x: &VarietyPoints,
    w: &AffineSubspace,
    r_w: &MultiPoly,
    a: u32,
    ctx: &Ctx,
) -> Result<FlagExtension> {
    let field = x.field();
    let n = x.ambient_dim();
    if r_w.nvars() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            got: r_w.nvars(),
        });
    }
    // R ∘ s with s the projection onto W read off the pivot coordinates
    let piv = w.pivots();
    let subs: Vec<MultiPoly> = piv.iter().map(|&j| MultiPoly::var(field, n, j)).collect();
    let mut total = r_w.compose(&subs)?;
    let xw = x.filter(|p| w.contains(p));
    if !f.restrict(x, &xw).agrees_with(&xw, &total) {
        return Err(Error::Precondition("r_w does not agree with f on X ∩ W".into()));
    }
    let mut cur = w.clone();
    let mut flag = vec![cur.dim()];
    for j in 0..n {
        if cur.dim() == n {
            break;
        }
        let mut e = vec![Fe::ZERO; n];
        e[j] = Fe::ONE;
        let Some(next) = cur.extend(&e) else {
            continue;
        };
        let l = separating_functional(&cur, &e)?;
        let xn = x.filter(|p| next.contains(p));
        let resid = f.restrict(x, &xn).sub(&field, &FunctionOnX::from_poly(&xn, &total));
        let step = extend_by_slices(&resid, &xn, &l, a, ctx)?;
        total = total.add(&step.poly);
        cur = next;
        flag.push(cur.dim());
    }
    if !f.agrees_with(x, &total) {
        return Err(Error::Verification("flag extension does not restrict to f".into()));
    }
    Ok(FlagExtension { poly: total, flag })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensityVerdict {
    HypothesisNotMet(String),
    /// `|C|/|A| >= δ(1−ε)`: the density argument makes no claim.
    NoClaim,
    /// Hypotheses hold, `C` is small, and `C` is empty as the argument forces.
    Empty,
    /// Hypotheses hold and `C` is small but nonempty.
    Violated,
}

/// `B` as neighbourhoods `B_x ⊆ A` (indices), `C` as a membership mask.
pub fn density_certificate(
    neighbours: &[Vec<usize>],
    c: &[bool],
    delta: &BigRational,
    eps: &BigRational,
) -> DensityVerdict {
    let a = neighbours.len();
    if c.len() != a {
        return DensityVerdict::HypothesisNotMet("C mask has the wrong length".into());
    }
    let na = BigRational::from_integer(a.into());
    for (x, bx) in neighbours.iter().enumerate() {
        if BigRational::from_integer(bx.len().into()) < delta * &na {
            return DensityVerdict::HypothesisNotMet(format!("B is not δ-dense at {x}"));
        }
    }
    let one = BigRational::from_integer(1.into());
    for (z, bz) in neighbours.iter().enumerate() {
        if !c[z] {
            continue;
        }
        let inside = bz.iter().filter(|&&y| c[y]).count();
        if bz.is_empty() || BigRational::new(inside.into(), bz.len().into()) < &one - eps {
            return DensityVerdict::HypothesisNotMet(format!("C is not ε-invariant at {z}"));
        }
    }
    let size = c.iter().filter(|&&v| v).count();
    if a == 0 || BigRational::new(size.into(), a.into()) >= delta * (&one - eps) {
        return DensityVerdict::NoClaim;
    }
    if size == 0 {
        DensityVerdict::Empty
    } else {
        DensityVerdict::Violated
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LineDegeneracy {
    pub degree: u32,
    pub directions: u64,
    /// Directions on which the top homogeneous part vanishes.
    pub null_directions: u64,
    pub lines: u64,
    /// Lines on which `R` drops below its degree.
    pub degenerate_lines: u64,
    pub fraction: Ratio,
}

/// Counts affine lines in `k^n` on which `R` has degree `< deg R`.
pub fn line_degeneracy(r: &MultiPoly, ctx: &Ctx) -> Result<LineDegeneracy> {
    let field = r.field();
    let q = field.p() as u64;
    let n = r.nvars();
    let a = r.degree();
    let whole = VarietyPoints::whole(field, n);
    let lines = enumerate_subspaces_in(&whole, 1, None, ctx)?;
    let top = r.homogeneous_part(a);
    let mut directions = 0;
    let mut null_directions = 0;
    for c in 1..q.pow(n as u32) {
        let v = decode(c, n, q);
        if v.iter().find(|x| !x.is_zero()).unwrap().0 != 1 {
            continue;
        }
        directions += 1;
        if top.eval_unchecked(&v).is_zero() {
            null_directions += 1;
        }
    }
    let mut degenerate = 0u64;
    for l in &lines {
        let vals: Vec<Fe> = l.points().iter().map(|p| r.eval_unchecked(p)).collect();
        let p = interpolate_table(field, 1, &vals)?;
        if p.is_zero() || p.degree() < a {
            degenerate += 1;
        }
    }
    Ok(LineDegeneracy {
        degree: a,
        directions,
        null_directions,
        lines: lines.len() as u64,
        degenerate_lines: degenerate,
        fraction: Ratio::new(degenerate, lines.len() as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::enumerate_points;
    use crate::poly::PolyFamily;

    fn fl(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u64, n: usize, t: &[(i64, &[u32])]) -> MultiPoly {
        MultiPoly::from_terms(fl(p), n, t.iter().map(|(c, e)| (*c, e.to_vec()))).unwrap()
    }

    fn cross(ctx: &Ctx) -> VarietyPoints {
        // xy(x − y) = x²y − xy²
        let p = poly(5, 2, &[(1, &[2, 1]), (-1, &[1, 2])]);
        enumerate_points(&PolyFamily::single(p), ctx).unwrap()
    }

    fn counterexample(x: &VarietyPoints) -> FunctionOnX {
        FunctionOnX::from_fn(x, |p| if p[0] == p[1] { p[0] } else { Fe::ZERO })
    }

    #[test]
    fn testing_dims() {
        assert_eq!(testing_dim(5, 1), 1);
        assert_eq!(testing_dim(2, 1), 2);
        assert_eq!(testing_dim(7, 6), 2);
        assert_eq!(testing_dim(3, 1), 1);
    }

    #[test]
    fn counterexample_is_weakly_linear_but_not_extendable() {
        let ctx = Ctx::default();
        let x = cross(&ctx);
        assert_eq!(x.len(), 13);
        let f = counterexample(&x);
        assert!(is_weakly_polynomial(&f, &x, 1, &ctx).unwrap().holds);
        let star = star_check(&x, 1, &ctx).unwrap();
        assert_eq!((star.weak_dim, star.restriction_dim, star.gap), (4, 3, 1));
        assert!(!star.holds);
        assert!(matches!(extend_by_solve(&f, &x, 1, &ctx).unwrap(), Extension::Infeasible { .. }));
        let l = AffineFunctional::coordinate(2, 0);
        assert!(matches!(extend_by_slices(&f, &x, &l, 1, &ctx), Err(Error::Infeasible(_))));
    }

    #[test]
    fn indicator_is_not_weakly_linear() {
        let ctx = Ctx::default();
        let x = cross(&ctx);
        let f = FunctionOnX::from_fn(&x, |p| if p == [Fe(1), Fe(0)] { Fe(1) } else { Fe(0) });
        let t = is_weakly_polynomial(&f, &x, 1, &ctx).unwrap();
        assert!(!t.holds);
        let (line, _) = t.offending.unwrap();
        assert!(line.contains(&[Fe(1), Fe(0)]));
    }

    #[test]
    fn whole_space_and_point() {
        let ctx = Ctx::default();
        let x = VarietyPoints::whole(fl(3), 2);
        assert_eq!(weak_space(&x, 1, &ctx).unwrap().dim(), 3);
        assert_eq!(restriction_space(&x, 1, &ctx).unwrap().dim(), 3);
        let pt = VarietyPoints::from_points(fl(3), 2, &[vec![Fe(1), Fe(2)]]);
        assert_eq!(restriction_space(&pt, 1, &ctx).unwrap().dim(), 1);
        let empty = VarietyPoints::from_points(fl(3), 2, &[]);
        assert_eq!(weak_space(&empty, 1, &ctx).unwrap().dim(), 0);
        assert_eq!(restriction_space(&x, 4, &ctx).unwrap().dim(), 9);
    }

    #[test]
    fn restriction_extends() {
        let ctx = Ctx::default();
        let x = cross(&ctx);
        let g = poly(5, 2, &[(2, &[1, 0]), (3, &[0, 1]), (1, &[0, 0])]);
        let f = FunctionOnX::from_poly(&x, &g);
        let e = extend_by_solve(&f, &x, 1, &ctx).unwrap();
        assert!(f.agrees_with(&x, e.poly().unwrap()));
        let l = AffineFunctional::coordinate(2, 0);
        let s = extend_by_slices(&f, &x, &l, 1, &ctx).unwrap();
        assert!(s.solver_agrees);
        assert!(f.agrees_with(&x, &s.poly));
    }

    #[test]
    fn slice_step_zero() {
        let ctx = Ctx::default();
        let x = cross(&ctx);
        let f = FunctionOnX::zero(&x);
        let l = AffineFunctional::coordinate(2, 0);
        let s = slice_extension_step(&f, &x, &l, &[Fe(0)], Fe(1), 1, &ctx).unwrap();
        assert!(s.q.is_zero());
        assert!(slice_extension_step(&f, &x, &l, &[Fe(1)], Fe(1), 1, &ctx).is_err());
    }

    #[test]
    fn flag_from_a_point() {
        let ctx = Ctx::default();
        let p = poly(5, 3, &[(1, &[1, 1, 0]), (-1, &[0, 0, 2])]);
        let x = enumerate_points(&PolyFamily::single(p), &ctx).unwrap();
        let g = poly(5, 3, &[(1, &[1, 0, 0]), (2, &[0, 0, 1]), (3, &[0, 0, 0])]);
        let f = FunctionOnX::from_poly(&x, &g);
        let w = AffineSubspace::new(fl(5), vec![Fe(0); 3], vec![vec![Fe(1), Fe(0), Fe(0)]]).unwrap();
        let r = poly(5, 1, &[(1, &[1]), (3, &[0])]);
        let e = flag_extension(&f, &x, &w, &r, 1, &ctx).unwrap();
        assert_eq!(e.flag, vec![1, 2, 3]);
        assert!(f.agrees_with(&x, &e.poly));
        assert!(e.poly.degree() <= 1);
    }

    #[test]
    fn density_cases() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let full: Vec<Vec<usize>> = (0..6).map(|_| (0..6).collect()).collect();
        assert_eq!(density_certificate(&full, &[false; 6], &r(1, 1), &r(1, 10)), DensityVerdict::Empty);
        let sparse: Vec<Vec<usize>> = (0..6).map(|x| vec![x]).collect();
        assert!(matches!(
            density_certificate(&sparse, &[false; 6], &r(1, 2), &r(0, 1)),
            DensityVerdict::HypothesisNotMet(_)
        ));
        let mut c = [false; 6];
        c[0] = true;
        // one point of six cannot be invariant under complete incidence
        assert!(matches!(
            density_certificate(&full, &c, &r(1, 1), &r(1, 10)),
            DensityVerdict::HypothesisNotMet(_)
        ));
    }

    #[test]
    fn degenerate_lines_bounded() {
        let ctx = Ctx::default();
        let r = poly(5, 3, &[(1, &[1, 1, 0]), (1, &[0, 0, 2]), (1, &[1, 0, 0])]);
        let d = line_degeneracy(&r, &ctx).unwrap();
        assert!(d.null_directions <= 2 * 6);
        assert!(d.degenerate_lines * 5 <= 2 * d.lines);
    }
}
