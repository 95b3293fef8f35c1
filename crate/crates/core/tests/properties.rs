use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use proptest::prelude::*;

use rankforge::affine::AffineMap;
use rankforge::analytic::{bias, count_points_char_sum, count_points_direct, gowers_norm, gowers_norm_direct, value_distribution};
use rankforge::ctx::Ctx;
use rankforge::explicit::{build, is_equivariant, reconstructs, torus_decompose, TorusT};
use rankforge::geometry::{enumerate_points, enumerate_subspaces_in, kappa_fibers, VarietyPoints};
use rankforge::gf::{Fe, PrimeField};
use rankforge::io::{parse_poly, poly_to_json};
use rankforge::nullsatz::{ideal_membership, vanishing_vs_ideal_dims, Membership};
use rankforge::poly::{all_points, interpolate_table, monomials_up_to, MultiPoly, PolyFamily};
use rankforge::rank::{schmidt_rank, RankValue};
use rankforge::weakpoly::{extend_by_solve, restriction_space, weak_space, Extension, FunctionOnX};

fn ctx() -> Ctx {
    Ctx::new(100_000_000, 1)
}

/// Random polynomial over `F_p` in `n` variables with monomials of degree `<= deg`.
fn poly_in(p: u32, n: usize, deg: u32) -> impl Strategy<Value = MultiPoly> {
    let monos = monomials_up_to(n, deg, deg);
    prop::collection::vec(0..p as i64, monos.len()).prop_map(move |cs| {
        let f = PrimeField::new(p as u64).unwrap();
        MultiPoly::from_terms(f, n, cs.into_iter().zip(&monos).map(|(c, m)| (c, m.exps().to_vec()))).unwrap()
    })
}

fn elems(p: u32, len: usize) -> impl Strategy<Value = Vec<Fe>> {
    prop::collection::vec((0..p).prop_map(Fe), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_inverses(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 97]), a in 0u32..97) {
        let f = PrimeField::new(p).unwrap();
        let a = f.elem(a as i64);
        prop_assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
        }
    }

    #[test]
    fn interpolation_round_trip(p in poly_in(3, 2, 4)) {
        let f = p.field();
        let table = p.eval_table();
        let back = interpolate_table(f, 2, &table).unwrap();
        prop_assert_eq!(back, p.reduce_function());
    }

    #[test]
    fn restrict_commutes_with_eval(
        p in poly_in(5, 2, 3),
        mat in elems(5, 2),
        off in elems(5, 2),
        t in elems(5, 1),
    ) {
        let f = p.field();
        let phi = AffineMap::new(f, vec![vec![mat[0]], vec![mat[1]]], off).unwrap();
        let r = p.restrict(&phi).unwrap();
        prop_assert_eq!(r.eval(&t).unwrap(), p.eval(&phi.apply(&t)).unwrap());
    }

    #[test]
    fn alternating_sum_is_base_point_free(
        p in poly_in(5, 2, 3),
        x in elems(5, 2),
        y in elems(5, 2),
        hs in prop::collection::vec(elems(5, 2), 3),
    ) {
        prop_assume!(p.degree() == 3);
        prop_assert_eq!(p.alternating_sum_eval(&x, &hs).unwrap(), p.alternating_sum_eval(&y, &hs).unwrap());
    }

    #[test]
    fn multilinear_form_is_symmetric(p in poly_in(5, 2, 3)) {
        prop_assume!(p.degree() == 3);
        let t = p.multilinear_form().unwrap();
        prop_assert!(t.is_symmetric());
        prop_assert!(t.is_multilinear());
    }

    #[test]
    fn gowers_identity_and_bias_bound((d, p) in prop::sample::select(vec![(2usize, 2u32), (3, 2), (2, 3), (3, 3)])
        .prop_flat_map(|(d, q)| (Just(d), poly_in(q, if q == 2 { 3 } else { 2 }, d as u32))))
    {
        let p = p.reduce_function();
        prop_assume!(p.degree() as usize <= d);
        let fast = gowers_norm(&p, d, &ctx()).unwrap();
        let direct = gowers_norm_direct(&p, d, &ctx()).unwrap();
        prop_assert_eq!(&fast.power, &direct.power);
        let b = bias(&p, &ctx()).unwrap();
        if let (Some(m2), Some(pow)) = (b.magnitude_squared, fast.power) {
            let lhs: BigRational = m2.pow(1u32 << (d - 1));
            prop_assert!(lhs <= pow);
        }
    }

    #[test]
    fn bias_at_most_norm(p in poly_in(3, 2, 2)) {
        let p = p.reduce_function();
        prop_assume!(p.degree() == 2);
        let b = bias(&p, &ctx()).unwrap();
        let g = gowers_norm(&p, 2, &ctx()).unwrap();
        let m2 = b.magnitude_squared.unwrap();
        prop_assert!(&m2 * &m2 <= g.power.unwrap());
        prop_assert!(m2 <= BigRational::one());
    }

    #[test]
    fn char_sum_count_matches_enumeration(a in poly_in(3, 3, 2), b in poly_in(3, 3, 2), level in elems(3, 2)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let fam = PolyFamily::new(vec![a, b]).unwrap();
        prop_assert_eq!(
            count_points_char_sum(&fam, &level, &ctx()).unwrap(),
            count_points_direct(&fam, &level, &ctx()).unwrap()
        );
    }

    #[test]
    fn counts_independent_of_workers(p in poly_in(5, 3, 3)) {
        prop_assume!(!p.is_zero());
        let fam = PolyFamily::single(p.clone());
        let a = value_distribution(&fam, &Ctx::new(100_000_000, 1)).unwrap();
        let b = value_distribution(&fam, &Ctx::new(100_000_000, 4)).unwrap();
        prop_assert_eq!(a.counts, b.counts);
        let ha = bias(&p, &Ctx::new(100_000_000, 1)).unwrap().histogram;
        let hb = bias(&p, &Ctx::new(100_000_000, 3)).unwrap().histogram;
        prop_assert_eq!(ha, hb);
    }

    #[test]
    fn json_round_trip(p in poly_in(7, 3, 3)) {
        let back = parse_poly(&poly_to_json(&p).to_string()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn schmidt_certificates_verify(a in poly_in(2, 4, 1), b in poly_in(2, 4, 1), c in poly_in(2, 4, 1), e in poly_in(2, 4, 1)) {
        let p = a.mul(&b).add(&c.mul(&e));
        prop_assume!(p.degree() == 2);
        let r = schmidt_rank(&p, 2, &ctx()).unwrap();
        let value = r.value.finite();
        prop_assert!(matches!(value, Some(1) | Some(2)), "{:?}", r.value);
        let cert = r.certificate.unwrap();
        prop_assert!(cert.verify(&p));
    }

    #[test]
    fn subspaces_lie_in_variety(p in poly_in(3, 3, 2)) {
        prop_assume!(!p.is_zero());
        let x = enumerate_points(&PolyFamily::single(p), &ctx()).unwrap();
        for s in enumerate_subspaces_in(&x, 1, None, &ctx()).unwrap() {
            for pt in s.points() {
                prop_assert!(x.contains(&pt));
            }
        }
    }

    #[test]
    fn kappa_mass(p in poly_in(2, 3, 2)) {
        prop_assume!(p.degree() == 2);
        let k = kappa_fibers(&PolyFamily::single(p), 1, false, &ctx()).unwrap();
        prop_assert_eq!(k.fibers.values().sum::<u64>(), 2u64.pow(3 * 2));
        prop_assert_eq!(k.maps, 64);
    }

    #[test]
    fn restriction_inside_weak(p in poly_in(5, 2, 3), a in 1u32..=2) {
        prop_assume!(p.degree() >= 2);
        let x = enumerate_points(&PolyFamily::single(p), &ctx()).unwrap();
        prop_assume!(!x.is_empty());
        let r = restriction_space(&x, a, &ctx()).unwrap();
        let w = weak_space(&x, a, &ctx()).unwrap();
        prop_assert!(r.is_subspace_of(&w));
    }

    #[test]
    fn solver_extends_restrictions(p in poly_in(5, 2, 3), g in poly_in(5, 2, 2)) {
        prop_assume!(p.degree() >= 2);
        let x = enumerate_points(&PolyFamily::single(p), &ctx()).unwrap();
        let f = FunctionOnX::from_poly(&x, &g);
        match extend_by_solve(&f, &x, 2, &ctx()).unwrap() {
            Extension::Feasible(e) => prop_assert!(f.agrees_with(&x, &e)),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn ideal_inside_vanishing(p in poly_in(3, 2, 2), e in 1u32..=3) {
        prop_assume!(p.degree() >= 1);
        let d = vanishing_vs_ideal_dims(&PolyFamily::single(p), e, &ctx()).unwrap();
        prop_assert!(d.ideal <= d.vanishing);
    }

    #[test]
    fn membership_certificates_expand(p in poly_in(5, 2, 2), c in poly_in(5, 2, 1)) {
        prop_assume!(p.degree() == 2);
        let fam = PolyFamily::single(p.clone());
        let r = c.mul(&p);
        for cap in 3..=4 {
            match ideal_membership(&r, &fam, cap, &ctx()).unwrap() {
                Membership::Member(cert) => prop_assert!(cert.residual(&r, &fam).is_zero()),
                Membership::NotMember { .. } => prop_assert!(false, "c·P not found at cap {}", cap),
            }
        }
    }

    #[test]
    fn membership_monotone_in_cap(p in poly_in(3, 2, 2), r in poly_in(3, 2, 2)) {
        prop_assume!(p.degree() == 2);
        let fam = PolyFamily::single(p);
        let mut seen = false;
        for cap in 2..=4 {
            let m = ideal_membership(&r, &fam, cap, &ctx()).unwrap().is_member();
            prop_assert!(!seen || m);
            seen |= m;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn torus_components_reconstruct(vals in elems(7, 13)) {
        let xv = build(2, 1, 7).unwrap();
        let c = ctx();
        let x = xv.points(&c).unwrap();
        prop_assert_eq!(x.len(), 13);
        let torus = TorusT::new(x.field(), 3, 2, 1, &c).unwrap();
        let f = FunctionOnX::new(vals);
        let comps = torus_decompose(&f, &x, &torus, &c).unwrap();
        prop_assert!(reconstructs(&f, &comps, x.field()));
        for (chi, comp) in &comps {
            prop_assert!(is_equivariant(comp, &x, &torus, chi));
        }
    }
}

#[test]
fn membership_gap_below_field_size() {
    let f = PrimeField::new(5).unwrap();
    let sq = PolyFamily::single(MultiPoly::from_terms(f, 1, [(1, vec![2])]).unwrap());
    let x = MultiPoly::var(f, 1, 0);
    for e in 1..4 {
        assert!(!ideal_membership(&x, &sq, e, &ctx()).unwrap().is_member());
        let d = vanishing_vs_ideal_dims(&sq, e, &ctx()).unwrap();
        assert_eq!(d.vanishing, d.ideal + 1);
    }
}

#[test]
fn whole_space_points() {
    let f = PrimeField::new(3).unwrap();
    let x = VarietyPoints::whole(f, 2);
    assert_eq!(x.len(), all_points(2, 3).count());
    let u4: BigRational = BigRational::new(BigInt::one(), BigInt::from(4));
    let p = MultiPoly::from_terms(PrimeField::new(2).unwrap(), 2, [(1, vec![1, 1])]).unwrap();
    assert_eq!(gowers_norm(&p, 2, &ctx()).unwrap().power, Some(u4));
    assert_eq!(schmidt_rank(&p, 2, &ctx()).unwrap().value, RankValue::Finite(1));
}
