use hmf_core::brandt::{eigen_decompose, hecke_s, hecke_t, hecke_t_via, invariant_space, HeckeSetup, SumRoute};
use hmf_core::numfield::render_tower;
use hmf_core::quadfield::{render_sqrt_form, CharKind, EpsilonChar, Level, QuadField, QuadInt};
use hmf_core::quaternion::{QuatAlgebra, QuatOrder};
use hmf_core::weight::{LevelModule, WeightSpec};
use std::sync::Arc;

fn setup() -> HeckeSetup {
    let qf = QuadField::new(2).unwrap();
    let alg = QuatAlgebra::new(qf.clone(), QuadInt::int(-1), QuadInt::int(-1)).unwrap();
    let order = Arc::new(QuatOrder::standard_maximal_sqrt2(alg).unwrap());
    let level = Level::new(&qf, qf.parse("5 - 3w").unwrap()).unwrap();
    let eps = EpsilonChar::new(level, CharKind::Quadratic).unwrap();
    let module = LevelModule::new(order, WeightSpec::naive([4, 3]).unwrap(), eps).unwrap();
    HeckeSetup::new(module, None).unwrap()
}

// Values of the weight (4,3) eigenform of level 5 - 3w with quadratic character.
#[test]
fn first_rows_of_the_table() {
    let s = setup();
    let qf = s.qf.clone();
    let sp = invariant_space(&s).unwrap();
    assert_eq!(sp.dim(), 2);
    let t3 = hecke_t(&s, &sp, QuadInt::int(3)).unwrap();
    let es = eigen_decompose(&s, &sp, &[t3.clone()], None).unwrap();
    assert_eq!(es.len(), 1);
    let e = &es[0];
    assert_eq!(render_sqrt_form(e.b_square.as_ref().unwrap()), "-3w - 8");
    assert_eq!(render_tower(&e.probe_value, "b"), "(7w - 4)b");
    let expect = [
        ("2w + 5", "(3w + 12)b", 864, 18),
        ("5 - 2w", "-8w - 18", 864, 18),
        ("w + 5", "-22w + 14", 1152, 24),
        ("5 - w", "26w + 36", 1152, 24),
        ("5", "(-16w + 18)b", 1248, 26),
    ];
    for (g, v, n, o) in expect {
        let h = hecke_t(&s, &sp, qf.parse(g).unwrap()).unwrap();
        let mu = e.eigenvalue(&h).unwrap();
        assert_eq!(render_tower(&mu, "b"), v, "t({})", g);
        assert_eq!((h.elements, h.orbits), (n, o), "counts for {}", g);
    }
    let s3 = hecke_s(&s, &sp, QuadInt::int(3)).unwrap();
    assert_eq!(s3.to_string(), "-27");
}

#[test]
fn integral_and_exact_sums_agree() {
    let s = setup();
    let qf = s.qf.clone();
    let sp = invariant_space(&s).unwrap();
    for g in ["3", "2 + w", "5 + 2w", "5", "1"] {
        let x = qf.parse(g).unwrap();
        let a = hecke_t_via(&s, &sp, x, SumRoute::Integral).unwrap();
        let b = hecke_t_via(&s, &sp, x, SumRoute::Exact).unwrap();
        assert_eq!(a.matrix, b.matrix, "T({})", g);
    }
}

// T(v u^2) = u T(v) for the fundamental unit u = 1 + w, with the same law at
// every prime, and the normalized value does not see the change of generator.
#[test]
fn generator_change_law() {
    use hmf_core::brandt::same_normalized_value;
    let s = setup();
    let qf = s.qf.clone();
    let sp = invariant_space(&s).unwrap();
    let t3 = hecke_t(&s, &sp, QuadInt::int(3)).unwrap();
    let e = &eigen_decompose(&s, &sp, &[t3], None).unwrap()[0];
    let u = e.from_f(&qf.to_alg(qf.unit));
    for g in ["3", "2w + 5", "5 - 2w", "w + 5", "5 + 3w", "2 + w"] {
        let v = qf.parse(g).unwrap();
        let vu = qf.mul(v, qf.tp_unit);
        let t = e.eigenvalue(&hecke_t(&s, &sp, v).unwrap()).unwrap();
        let tu = e.eigenvalue(&hecke_t(&s, &sp, vu).unwrap()).unwrap();
        assert_eq!(tu, t.mul(&u), "t({} u^2)", g);
        assert!(same_normalized_value(&qf, &t, v, &tu, vu, |x| e.from_f(x)));
    }
}
