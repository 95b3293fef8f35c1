//! Degree-capped ideal membership and point-count bounds.
//!
//! Membership `R ∈ (P_1, …, P_c)` is tested with cofactors of degree
//! `<= e − deg P_i`, as one linear system in the cofactor coefficients.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::ctx::{mul_cost, pow_cost, Ctx};
use crate::error::{Error, Result};
use crate::geometry::enumerate_points;
use crate::gf::Fe;
use crate::linalg::{Echelon, Matrix, Solve};
use crate::poly::{monomials_up_to, Monomial, MultiPoly, PolyFamily};

#[derive(Clone, Debug, Serialize)]
pub struct MembershipCertificate {
    pub cap: u32,
    #[serde(skip)]
    pub cofactors: Vec<MultiPoly>,
}

impl MembershipCertificate {
    /// `Σ Q_i P_i − R` as a formal polynomial.
    pub fn residual(&self, r: &MultiPoly, fam: &PolyFamily) -> MultiPoly {
        let mut s = r.neg();
        for (q, p) in self.cofactors.iter().zip(fam.polys()) {
            s = s.add(&q.mul(p));
        }
        s
    }
}

#[derive(Clone, Debug)]
pub enum Membership {
    Member(MembershipCertificate),
    /// A functional on coefficient vectors that kills every `m·P_i` in range
    /// and takes value 1 on `R`.
    NotMember { cap: u32, dual: BTreeMap<Monomial, Fe> },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

fn products(fam: &PolyFamily, e: u32) -> Vec<(usize, Monomial)> {
    let n = fam.nvars();
    let mut out = Vec::new();
    for (i, p) in fam.polys().iter().enumerate() {
        let d = p.degree();
        if p.is_zero() || d > e {
            continue;
        }
        for m in monomials_up_to(n, e - d, e - d) {
            out.push((i, m));
        }
    }
    out
}

fn support(fam: &PolyFamily, gens: &[(usize, Monomial)], r: Option<&MultiPoly>) -> Vec<Monomial> {
    let mut set = std::collections::BTreeSet::new();
    for (i, m) in gens {
        for (t, _) in fam.polys()[*i].terms() {
            set.insert(t.mul(m));
        }
    }
    if let Some(r) = r {
        set.extend(r.terms().map(|(t, _)| t.clone()));
    }
    set.into_iter().collect()
}

pub fn ideal_membership(r: &MultiPoly, fam: &PolyFamily, e: u32, ctx: &Ctx) -> Result<Membership> {
    if r.field() != fam.field() {
        return Err(Error::FieldMismatch(r.field().p(), fam.field().p()));
    }
    if r.nvars() != fam.nvars() {
        return Err(Error::DimensionMismatch {
            expected: fam.nvars(),
            got: r.nvars(),
        });
    }
    if !r.is_zero() && r.degree() > e {
        return Err(Error::Precondition(format!("cap {e} is below deg R = {}", r.degree())));
    }
    let field = r.field();
    let gens = products(fam, e);
    let rows_m = support(fam, &gens, Some(r));
    ctx.check(
        rows_m.len() as u128 * (gens.len() as u128 + 1) * (rows_m.len().min(gens.len()) as u128 + 1),
        "cofactor system",
    )?;
    let index: BTreeMap<&Monomial, usize> = rows_m.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let cols: Vec<Vec<Fe>> = ctx.par_map(&gens, |(i, m)| {
        let mut col = vec![Fe::ZERO; rows_m.len()];
        for (t, c) in fam.polys()[*i].terms() {
            col[index[&t.mul(m)]] = c;
        }
        col
    });
    let rows: Vec<Vec<Fe>> = (0..rows_m.len()).map(|k| cols.iter().map(|c| c[k]).collect()).collect();
    let mat = Matrix::from_rows(field, rows, gens.len());
    let b: Vec<Fe> = rows_m.iter().map(|m| r.coeff(m)).collect();
    match mat.solve(&b) {
        Solve::Solution(z) => {
            let mut cofactors: Vec<MultiPoly> = (0..fam.len()).map(|_| MultiPoly::zero(field, fam.nvars())).collect();
            for ((i, m), c) in gens.iter().zip(z) {
                cofactors[*i].add_term(m.clone(), c);
            }
            let cert = MembershipCertificate { cap: e, cofactors };
            if !cert.residual(r, fam).is_zero() {
                return Err(Error::Verification("cofactors do not expand to R".into()));
            }
            Ok(Membership::Member(cert))
        }
        Solve::Infeasible(y) => {
            let pair = |col: &[Fe]| {
                col.iter().zip(&y).fold(Fe::ZERO, |s, (&a, &b)| field.add(s, field.mul(a, b)))
            };
            if cols.iter().any(|c| !pair(c).is_zero()) || pair(&b) != Fe::ONE {
                return Err(Error::Verification("membership dual certificate fails".into()));
            }
            let dual = rows_m.into_iter().zip(y).filter(|(_, v)| !v.is_zero()).collect();
            Ok(Membership::NotMember { cap: e, dual })
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingDims {
    pub e: u32,
    /// Formal polynomials of degree `<= e` vanishing on `X(F_q)`.
    pub vanishing: usize,
    /// Degree `<= e` part of the ideal, cofactors capped at `e − d_i`.
    pub ideal: usize,
    pub equal: bool,
}

pub fn vanishing_vs_ideal_dims(fam: &PolyFamily, e: u32, ctx: &Ctx) -> Result<VanishingDims> {
    let field = fam.field();
    let n = fam.nvars();
    let monos = monomials_up_to(n, e, e);
    let x = enumerate_points(fam, ctx)?;
    ctx.check(
        monos.len() as u128 * x.len() as u128 * (monos.len() as u128 + 1),
        "vanishing dimension",
    )?;
    let mut ev = Echelon::new(field, monos.len());
    for p in x.points() {
        ev.insert(monos.iter().map(|m| m.eval(&field, p)).collect());
        if ev.is_full() {
            break;
        }
    }
    let vanishing = monos.len() - ev.rank();
    let index: BTreeMap<&Monomial, usize> = monos.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let gens = products(fam, e);
    ctx.check(gens.len() as u128 * monos.len() as u128 * monos.len() as u128, "ideal dimension")?;
    let mut id = Echelon::new(field, monos.len());
    for (i, m) in &gens {
        let mut row = vec![Fe::ZERO; monos.len()];
        for (t, c) in fam.polys()[*i].terms() {
            row[index[&t.mul(m)]] = c;
        }
        id.insert(row);
    }
    let ideal = id.rank();
    if ideal > vanishing {
        return Err(Error::Verification("ideal part exceeds the vanishing part".into()));
    }
    Ok(VanishingDims {
        e,
        vanishing,
        ideal,
        equal: ideal == vanishing,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RoughBound {
    pub count: u64,
    pub bound: u128,
    pub holds: bool,
}

/// `|Y| <= q^{n−c}·D` for `Y = {P_1 = … = P_c = 0}`, `D = ∏ deg P_i`, and with
/// an extra polynomial `R`, `|Y ∩ {R = 0}| <= q^{n−c−1}·D·deg R`. The family
/// is assumed to be a complete intersection.
pub fn rough_bound_check(fam: &PolyFamily, extra: Option<&MultiPoly>, ctx: &Ctx) -> Result<RoughBound> {
    let q = fam.field().p() as u128;
    let n = fam.nvars();
    let c = fam.len();
    let dprod: u128 = fam.polys().iter().map(|p| p.degree() as u128).product();
    let (polys, exp, factor) = match extra {
        None => (fam.polys().to_vec(), n.checked_sub(c), 1u128),
        Some(r) => {
            let mut v = fam.polys().to_vec();
            v.push(r.clone());
            (v, n.checked_sub(c + 1), r.degree() as u128)
        }
    };
    let exp = exp.ok_or_else(|| Error::Precondition("more equations than variables".into()))?;
    let all = PolyFamily::new(polys)?;
    let count = enumerate_points(&all, ctx)?.len() as u64;
    let bound = mul_cost(&[pow_cost(q, exp), dprod, factor]);
    Ok(RoughBound {
        count,
        bound,
        holds: count as u128 <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::PrimeField;

    fn poly(q: u64, n: usize, t: &[(i64, &[u32])]) -> MultiPoly {
        MultiPoly::from_terms(PrimeField::new(q).unwrap(), n, t.iter().map(|(c, e)| (*c, e.to_vec()))).unwrap()
    }

    #[test]
    fn x_not_in_x_squared() {
        let ctx = Ctx::default();
        let fam = PolyFamily::single(poly(5, 1, &[(1, &[2])]));
        let r = poly(5, 1, &[(1, &[1])]);
        for e in 1..4 {
            match ideal_membership(&r, &fam, e, &ctx).unwrap() {
                Membership::NotMember { dual, .. } => assert_eq!(dual.get(&Monomial(vec![1])), Some(&Fe(1))),
                Membership::Member(_) => panic!("x is not in (x^2)"),
            }
        }
        let d = vanishing_vs_ideal_dims(&fam, 1, &ctx).unwrap();
        assert_eq!((d.vanishing, d.ideal, d.equal), (1, 0, false));
    }

    #[test]
    fn multiple_is_member() {
        let ctx = Ctx::default();
        let p = poly(3, 4, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]);
        let fam = PolyFamily::single(p.clone());
        let r = poly(3, 4, &[(1, &[1, 0, 0, 0]), (1, &[0; 4])]).mul(&p);
        match ideal_membership(&r, &fam, 3, &ctx).unwrap() {
            Membership::Member(c) => {
                assert_eq!(c.cofactors[0], poly(3, 4, &[(1, &[1, 0, 0, 0]), (1, &[0; 4])]));
            }
            Membership::NotMember { .. } => panic!("multiple of P"),
        }
        assert!(ideal_membership(&r, &fam, 2, &ctx).is_err());
    }

    #[test]
    fn dims_explicit_family() {
        let ctx = Ctx::default();
        let p = poly(7, 4, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]);
        let d = vanishing_vs_ideal_dims(&PolyFamily::single(p.clone()), 2, &ctx).unwrap();
        assert!(d.equal);
        assert_eq!(d.ideal, 1);
        let z = vanishing_vs_ideal_dims(&PolyFamily::single(p), 0, &ctx).unwrap();
        assert_eq!((z.vanishing, z.ideal), (0, 0));
    }

    #[test]
    fn rough_bounds() {
        let ctx = Ctx::default();
        let h = PolyFamily::single(poly(5, 3, &[(1, &[1, 0, 0])]));
        let b = rough_bound_check(&h, None, &ctx).unwrap();
        assert_eq!((b.count, b.bound), (25, 25));
        let p = PolyFamily::single(poly(3, 4, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]));
        let b = rough_bound_check(&p, None, &ctx).unwrap();
        assert_eq!((b.count, b.bound, b.holds), (33, 54, true));
        let inc = PolyFamily::single(poly(5, 2, &[(1, &[0, 0])]));
        let b = rough_bound_check(&inc, None, &ctx).unwrap();
        assert_eq!(b.count, 0);
        let r = poly(3, 4, &[(1, &[1, 0, 0, 0])]);
        let b = rough_bound_check(&p, Some(&r), &ctx).unwrap();
        assert_eq!((b.count, b.bound), (15, 18));
    }
}
