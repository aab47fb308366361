use hmf_core::galois::{
    capitulation_report, companion, composed_product, frob_inert, frob_split, functional_equation_sign, go4_image,
    go4_inert_oracle, go4_split_oracle, m2_identity, parity_predicates, satake_naive_charpoly,
};
use hmf_core::matrix::Matrix;
use hmf_core::numfield::{adjoin_square_root, embed_base, join_tower, AlgElem, FieldSpec};
use hmf_core::poly::Poly;
use hmf_core::quadfield::{QuadField, QuadInt};
use hmf_core::ring::{FieldOps, Q};
use hmf_core::weight::{m2_det, m2_mul, M2};
use proptest::prelude::*;
use std::sync::Arc;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn f2() -> Arc<QuadField> {
    QuadField::new(2).unwrap()
}

fn elem(f: &Arc<FieldSpec>, a: i64, b: i64) -> AlgElem {
    AlgElem::from_ints(f, &[a, b])
}

fn m2(f: &Arc<FieldSpec>, v: [(i64, i64); 4]) -> M2 {
    v.map(|(a, b)| elem(f, a, b))
}

/// L = F(b) with b^2 = -3w - 8.
fn eigen_field(qf: &QuadField) -> Arc<FieldSpec> {
    adjoin_square_root(&qf.field, &elem(&qf.field, -8, -3), "L", "b").unwrap()
}

fn in_l(l: &Arc<FieldSpec>, x: (i64, i64), y: (i64, i64)) -> AlgElem {
    let base = &l.tower().unwrap().base;
    join_tower(l, &elem(base, x.0, x.1), &elem(base, y.0, y.1))
}

#[test]
fn parity_of_the_example_weights() {
    let part = vec![vec![0, 1]];
    let r = parity_predicates(&[4, 3], &part, None).unwrap();
    assert!(!r.paritious);
    assert!(r.e_paritious);
    assert_eq!(r.algebraic_t, Some((vec![q(-7, 4), q(-5, 4)], q(1, 2))));

    assert!(parity_predicates(&[4, 4], &part, None).unwrap().paritious);

    let t = [q(-1, 1), q(-1, 2)];
    let r = parity_predicates(&[4, 3], &part, Some(&t)).unwrap();
    assert_eq!(r.supplied_r, Some(Some(q(2, 1))));
    assert_eq!(r.supplied_integral, Some(false));
}

#[test]
fn parity_with_trivial_subfield_blocks() {
    // over F itself every block is a single place
    let part = vec![vec![0], vec![1]];
    let r = parity_predicates(&[4, 3], &part, None).unwrap();
    assert!(!r.e_paritious);
    assert_eq!(r.algebraic_t, None);
    let r = parity_predicates(&[4, 2], &part, None).unwrap();
    assert!(r.e_paritious);
}

#[test]
fn malformed_partitions_are_rejected() {
    assert!(parity_predicates(&[4, 3], &[vec![0]], None).is_err());
    assert!(parity_predicates(&[4, 3], &[vec![0, 0]], None).is_err());
    assert!(parity_predicates(&[4, 3], &[vec![0, 1, 2]], None).is_err());
    assert!(parity_predicates(&[4, 3, 2], &[vec![0, 1], vec![2]], None).is_err());
}

#[test]
fn go4_fixed_examples() {
    let f = f2().field.clone();
    let id = m2_identity(&AlgElem::one(&f));
    let g = go4_image(&id, &id, false).unwrap();
    assert_eq!(g.matrix, Matrix::identity(4, AlgElem::zero(&f)));
    assert!(g.nu.is_one_elem());

    let z = elem(&f, 1, 1);
    let zi = z.inv().unwrap();
    let zero = AlgElem::zero(&f);
    let a: M2 = [z.clone(), zero.clone(), zero.clone(), z];
    let b: M2 = [zi.clone(), zero.clone(), zero, zi];
    assert_eq!(go4_image(&a, &b, false).unwrap().matrix, Matrix::identity(4, AlgElem::zero(&f)));

    let t = go4_image(&id, &id, true).unwrap();
    let mut perm = Matrix::zeros(4, 4, AlgElem::zero(&f));
    for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        perm.set(i, j, AlgElem::one(&f));
    }
    assert_eq!(t.matrix, perm);
    assert_eq!(t.matrix.det(), AlgElem::from_int(&f, -1));
    assert!(t.nu.is_one_elem());

    let sing = m2(&f, [(1, 0), (2, 0), (2, 0), (4, 0)]);
    assert!(go4_image(&sing, &id, false).is_err());
}

fn arb_m2() -> impl Strategy<Value = [(i64, i64); 4]> {
    prop::array::uniform4((-6i64..=6, -4i64..=4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn go4_is_a_homomorphism(a in arb_m2(), b in arb_m2(), c in arb_m2(), d in arb_m2()) {
        let f = f2().field.clone();
        let (g1, g2, h1, h2) = (m2(&f, a), m2(&f, b), m2(&f, c), m2(&f, d));
        prop_assume!([&g1, &g2, &h1, &h2].iter().all(|m| !m2_det(m).is_zero()));
        let x = go4_image(&g1, &g2, false).unwrap();
        let y = go4_image(&h1, &h2, false).unwrap();
        let xy = go4_image(&m2_mul(&g1, &h1), &m2_mul(&g2, &h2), false).unwrap();
        prop_assert_eq!(&xy.matrix, &x.matrix.mul(&y.matrix));
        prop_assert_eq!(xy.nu, x.nu.mul(&y.nu));
    }

    #[test]
    fn go4_determinant_is_plus_or_minus_nu_squared(a in arb_m2(), b in arb_m2()) {
        let f = f2().field.clone();
        let (g1, g2) = (m2(&f, a), m2(&f, b));
        prop_assume!(!m2_det(&g1).is_zero() && !m2_det(&g2).is_zero());
        let x = go4_image(&g1, &g2, false).unwrap();
        prop_assert_eq!(x.matrix.det(), x.nu.mul(&x.nu));
        let y = go4_image(&g1, &g2, true).unwrap();
        prop_assert_eq!(y.matrix.det(), x.nu.mul(&x.nu).neg());
    }

    #[test]
    fn scalar_pairs_lie_in_the_kernel(a in -9i64..=9, b in -9i64..=9) {
        let f = f2().field.clone();
        let z = elem(&f, a, b);
        prop_assume!(!z.is_zero());
        let zi = z.inv().unwrap();
        let o = AlgElem::zero(&f);
        let g1: M2 = [z.clone(), o.clone(), o.clone(), z];
        let g2: M2 = [zi.clone(), o.clone(), o, zi];
        prop_assert_eq!(go4_image(&g1, &g2, false).unwrap().matrix, Matrix::identity(4, AlgElem::zero(&f)));
    }

    #[test]
    fn composed_product_matches_the_tensor_oracle(t1 in (-20i64..=20, -9i64..=9), n1 in (1i64..=30, -9i64..=9),
                                                     t2 in (-20i64..=20, -9i64..=9), n2 in (1i64..=30, -9i64..=9)) {
        let f = f2().field.clone();
        let quad = |t: (i64, i64), n: (i64, i64)| Poly::new(vec![elem(&f, n.0, n.1), elem(&f, t.0, t.1).neg(), AlgElem::one(&f)], AlgElem::zero(&f));
        let (h1, h2) = (quad(t1, n1), quad(t2, n2));
        prop_assume!(!h1.coeffs[0].is_zero() && !h2.coeffs[0].is_zero());
        prop_assert_eq!(composed_product(&h1, &h2), go4_split_oracle(&h1, &h2).unwrap());
    }
}

#[test]
fn companion_has_the_right_charpoly() {
    let f = f2().field.clone();
    let h = Poly::new(vec![elem(&f, 5, 2), elem(&f, -3, 1), AlgElem::one(&f)], AlgElem::zero(&f));
    let c = companion(&h).unwrap();
    let m = Matrix::from_rows(vec![vec![c[0].clone(), c[1].clone()], vec![c[2].clone(), c[3].clone()]], AlgElem::zero(&f));
    assert_eq!(m.charpoly(), h);
}

#[test]
fn inert_frobenius_rows() {
    let qf = f2();
    let l = eigen_field(&qf);
    // t(3) = (7w - 4)b, eps(3) = -1
    let t3 = in_l(&l, (0, 0), (-4, 7));
    let h = frob_inert(3, &t3, 5, -1);
    let want = Poly::new(
        vec![
            AlgElem::from_int(&l, -59049),
            in_l(&l, (0, 0), (972, -1701)),
            AlgElem::zero(&l),
            in_l(&l, (0, 0), (4, -7)),
            AlgElem::one(&l),
        ],
        AlgElem::zero(&l),
    );
    assert_eq!(h.poly, want);
    assert_eq!(go4_inert_oracle(3, &t3, 5, -1).unwrap(), h.poly);
    assert_eq!(functional_equation_sign(&h.poly, &AlgElem::from_int(&l, -243)), Some(-1));

    // t(11) = 170w + 366, eps(11) = +1
    let t11 = in_l(&l, (366, 170), (0, 0));
    let h = frob_inert(11, &t11, 5, 1);
    assert_eq!(h.poly.coeff(3), in_l(&l, (-366, -170), (0, 0)));
    assert_eq!(h.poly.coeff(1), in_l(&l, (58944666, 27378670), (0, 0)));
    assert_eq!(h.poly.coeff(0), AlgElem::from_int(&l, -25937424601));
    assert_eq!(go4_inert_oracle(11, &t11, 5, 1).unwrap(), h.poly);
}

#[test]
fn split_formula_matches_the_oracle_on_satake_data() {
    let qf = f2();
    let l = eigen_field(&qf);
    let lift = |x: &AlgElem| embed_base(&l, x);
    // arbitrary eigenvalues in bF and F at the two primes above 17
    let v1 = qf.parse("2w + 5").unwrap();
    let v2 = qf.parse("5 - 2w").unwrap();
    let t1 = in_l(&l, (0, 0), (12, 3));
    let t2 = in_l(&l, (-18, -8), (0, 0));
    let h1 = satake_naive_charpoly(&qf, [4, 3], v1, -1, &t1, lift);
    let h2 = satake_naive_charpoly(&qf, [4, 3], v2, -1, &t2, lift);
    let tp = t1.mul(&t2);
    // t(p^2) = t(v1^2) t(v2^2) with t(v^2) = t(v)^2 - Nm(v) S(v), the constant term of H_v
    let tsq = |h: &Poly<AlgElem>, t: &AlgElem| t.mul(t).sub(&h.coeffs[0]);
    let tp2 = tsq(&h1, &t1).mul(&tsq(&h2, &t2));
    let h = frob_split(17, &tp, &tp2, 5, 1);
    assert_eq!(go4_split_oracle(&h1, &h2).unwrap(), h.poly);
    assert_eq!(functional_equation_sign(&h.poly, &AlgElem::from_int(&l, 1419857)), Some(1));
}

#[test]
fn satake_constant_terms() {
    let qf = f2();
    let l = eigen_field(&qf);
    let lift = |x: &AlgElem| embed_base(&l, x);
    let t3 = in_l(&l, (0, 0), (-4, 7));
    let h = satake_naive_charpoly(&qf, [4, 3], QuadInt::int(3), -1, &t3, lift);
    assert_eq!(h.coeffs[0], AlgElem::from_int(&l, -243));
    assert_eq!(h.coeffs[1], t3.neg());

    let v = qf.parse("2w + 5").unwrap();
    let h = satake_naive_charpoly(&qf, [4, 3], v, -1, &t3, lift);
    let f = &qf.field;
    let a = elem(f, 5, 2);
    let c = elem(f, 5, -2);
    let want = a.mul(&a).mul(&a).mul(&c).mul(&c).neg();
    assert_eq!(h.coeffs[0], embed_base(&l, &want));
}

#[test]
fn capitulation_scope() {
    let r = capitulation_report(&f2(), true).unwrap();
    assert_eq!((r.unit_norm, r.quotient_order), (-1, 1));
    assert!(r.action_trivial && r.pullback_bijective && r.scope_flag.is_none());

    // Nm((1 + sqrt5)/2) = (1 - 5)/4 = -1
    let r = capitulation_report(&QuadField::new(5).unwrap(), true).unwrap();
    assert_eq!((r.unit_norm, r.quotient_order), (-1, 1));
    assert!(r.pullback_bijective);

    // Nm(2 + sqrt3) = 4 - 3 = 1
    let r = capitulation_report(&QuadField::new(3).unwrap(), true).unwrap();
    assert_eq!((r.unit_norm, r.quotient_order), (1, 2));
    assert!(!r.pullback_bijective && r.scope_flag.is_some());

    assert!(capitulation_report(&f2(), false).is_err());
}
