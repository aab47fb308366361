use hmf_core::enumerate::{enumerate_by_norm, norm_one_group, unit_orbits};
use hmf_core::quadfield::{QuadField, QuadInt};
use hmf_core::quaternion::{QuatAlgebra, QuatOrder};
use std::collections::HashMap;

fn setup() -> QuatOrder {
    let qf = QuadField::new(2).unwrap();
    let alg = QuatAlgebra::new(qf, QuadInt::int(-1), QuadInt::int(-1)).unwrap();
    QuatOrder::standard_maximal_sqrt2(alg).unwrap()
}

#[test]
fn binary_octahedral_units() {
    let o = setup();
    let g = norm_one_group(&o, None).unwrap();
    assert_eq!(g.order(), 48);
    assert_eq!(g.center_size(), 2);
    let mut hist: HashMap<usize, usize> = HashMap::new();
    for i in 0..48 {
        *hist.entry(g.element_order(i)).or_default() += 1;
    }
    // binary octahedral group: orders 1,2,3,4,6,8 with counts 1,1,8,18,8,12
    let want: HashMap<usize, usize> = [(1, 1), (2, 1), (3, 8), (4, 18), (6, 8), (8, 12)].into_iter().collect();
    assert_eq!(hist, want);
}

#[test]
fn maximal_and_standard_orders() {
    let o = setup();
    let c = o.verify_maximal(QuadInt::int(1)).unwrap();
    assert!(c.maximal);
    assert_eq!(c.z_gram_det, 4096.into());
}

#[test]
fn orbit_count_at_three() {
    let o = setup();
    let g = norm_one_group(&o, None).unwrap();
    let els = enumerate_by_norm(&o, QuadInt::int(3), None).unwrap();
    assert_eq!(els.len(), 480);
    let reps = unit_orbits(&o, &g, &els).unwrap();
    assert_eq!(reps.len(), 10);
}

#[test]
fn bucket_pairing_matches_ellipsoid_enumeration() {
    use hmf_core::enumerate::enumerate_by_norm_shell;
    let o = setup();
    let qf = o.alg.qf.clone();
    for t in ["1", "2 + w", "3", "3 + w", "5 + 2w", "5 - 2w", "5", "7 + w", "9 + 4w", "23 + 14w", "11"] {
        let x = qf.parse(t).unwrap();
        let a = enumerate_by_norm(&o, x, None).unwrap();
        let b = enumerate_by_norm_shell(&o, x).unwrap();
        assert_eq!(a, b, "target {}", t);
        assert!(!a.is_empty());
    }
}
