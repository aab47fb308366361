use hmf_core::groups::{catalog, extend_index2, induce_finite_lhom, is_homomorphism, ExtensionFailure, FiniteGroup, InductionModel, Mask};

fn mask_of(xs: &[usize]) -> Mask {
    xs.iter().fold(0, |m, &x| m | 1 << x)
}

fn members(m: Mask, n: usize) -> Vec<usize> {
    (0..n).filter(|&x| m >> x & 1 == 1).collect()
}

fn s3() -> FiniteGroup {
    FiniteGroup::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
}

#[test]
fn catalog_has_the_known_group_counts() {
    // number of groups of order n up to isomorphism, n = 1..24
    let known = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14, 1, 5, 1, 5, 2, 2, 1, 15];
    let c = catalog(24);
    let counts: Vec<usize> = c.iter().skip(1).map(|v| v.len()).collect();
    assert_eq!(counts, known);
    for (n, gs) in c.iter().enumerate().skip(1) {
        for (i, a) in gs.iter().enumerate() {
            assert_eq!(a.order(), n);
            for b in &gs[i + 1..] {
                assert!(!a.is_isomorphic(b), "{} and {} coincide", a.name, b.name);
            }
        }
    }
}

fn check_induction(u: &FiniteGroup, v: Mask, h: &FiniteGroup, rho: Vec<usize>) {
    let model = InductionModel { u, v, reps: u.left_transversal(v), h, rho };
    let ind = induce_finite_lhom(&model).unwrap_or_else(|e| panic!("{}: {}", u.name, e));
    let d = model.reps.len();
    assert_eq!(ind.f.len(), u.order());
    assert!(ind.f.iter().all(|f| f.len() == d));
}

#[test]
fn induction_on_all_small_groups() {
    let c2 = FiniteGroup::cyclic(2);
    let c1 = FiniteGroup::cyclic(1);
    let mut checked = 0;
    for gs in catalog(24).iter().skip(1) {
        for u in gs {
            let n = u.order();
            let subs = u.subgroups();
            for &v in &subs {
                let k = v.count_ones() as usize;
                if n / k > 4 {
                    continue;
                }
                // inclusion into U
                check_induction(u, v, u, (0..n).collect());
                // trivial map
                check_induction(u, v, &c1, vec![0; n]);
                // maps onto C2 with kernel an index-2 subgroup of V
                for &w in &subs {
                    if w & !v == 0 && 2 * w.count_ones() as usize == k {
                        let rho = (0..n).map(|x| if w >> x & 1 == 1 { 0 } else { 1 }).collect();
                        check_induction(u, v, &c2, rho);
                    }
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn induction_examples() {
    // index one
    let c4 = FiniteGroup::cyclic(4);
    let all = mask_of(&[0, 1, 2, 3]);
    let model = InductionModel { u: &c4, v: all, reps: vec![0], h: &c4, rho: vec![0, 1, 2, 3] };
    let ind = induce_finite_lhom(&model).unwrap();
    assert!(ind.f.iter().enumerate().all(|(g, f)| f == &vec![g]));

    // C4 over C2 into C2, nontrivially
    let c2 = FiniteGroup::cyclic(2);
    let v = mask_of(&[0, 2]);
    let model = InductionModel { u: &c4, v, reps: vec![0, 1], h: &c2, rho: vec![0, 0, 1, 0] };
    induce_finite_lhom(&model).unwrap();

    // S3 over A3 into C3, an isomorphism
    let s = s3();
    let a3 = (0..6).filter(|&x| s.element_order(x) != 2).collect::<Vec<_>>();
    let r = *a3.iter().find(|&&x| s.element_order(x) == 3).unwrap();
    let mut rho = vec![0; 6];
    rho[r] = 1;
    rho[s.mul(r, r)] = 2;
    let c3 = FiniteGroup::cyclic(3);
    let v = mask_of(&a3);
    let model = InductionModel { u: &s, v, reps: s.left_transversal(v), h: &c3, rho: rho.clone() };
    let ind = induce_finite_lhom(&model).unwrap();
    for &x in &a3 {
        assert_eq!(ind.f[x][0], rho[x]);
    }
}

#[test]
fn induction_rejects_bad_input() {
    let c4 = FiniteGroup::cyclic(4);
    let c2 = FiniteGroup::cyclic(2);
    let v = mask_of(&[0, 2]);
    // 2 lies in V, so both representatives pick the same coset
    let bad_reps = InductionModel { u: &c4, v, reps: vec![0, 2], h: &c2, rho: vec![0, 0, 1, 0] };
    assert!(induce_finite_lhom(&bad_reps).is_err());
    let bad_rho = InductionModel { u: &c4, v, reps: vec![0, 1], h: &c2, rho: vec![1, 0, 1, 0] };
    assert!(induce_finite_lhom(&bad_rho).is_err());
    let not_sub = InductionModel { u: &c4, v: mask_of(&[0, 1]), reps: vec![0, 2], h: &c2, rho: vec![0; 4] };
    assert!(induce_finite_lhom(&not_sub).is_err());
}

#[test]
fn extension_into_a_two_divisible_center() {
    let c4 = FiniteGroup::cyclic(4);
    let c8 = FiniteGroup::cyclic(8);
    let psi = vec![0, 0, 4, 0];
    let t = extend_index2(&c4, mask_of(&[0, 2]), &c8, &psi, 1, Some(0)).unwrap().unwrap();
    assert!(t[1] == 2 || t[1] == 6);
    assert_eq!(t[2], 4);
    assert!(is_homomorphism(&c4, &c8, &t));

    // trivial psi, mu central
    let t = extend_index2(&c4, mask_of(&[0, 2]), &c8, &[0; 4], 1, Some(0)).unwrap().unwrap();
    assert_eq!(t, vec![0; 4]);
}

#[test]
fn extension_failures() {
    let c4 = FiniteGroup::cyclic(4);
    let c2 = FiniteGroup::cyclic(2);
    // z = psi(mu^2) generates the center C2: no square root
    let r = extend_index2(&c4, mask_of(&[0, 2]), &c2, &[0, 0, 1, 0], 1, None).unwrap();
    assert_eq!(r, Err(ExtensionFailure::NoCentralSquareRoot(1)));

    // trivial image in S3 has centralizer bigger than the center
    let s = s3();
    let r = extend_index2(&c4, mask_of(&[0, 2]), &s, &[0; 4], 1, None).unwrap();
    assert_eq!(r, Err(ExtensionFailure::ImageNotBig));

    assert!(extend_index2(&c4, mask_of(&[0, 1]), &c2, &[0; 4], 2, None).is_err());
}

/// Brute force: some psi(mu) in V making the extended table a homomorphism.
fn brute_extension(u: &FiniteGroup, inside: &[usize], v: &FiniteGroup, psi: &[usize], mu: usize) -> bool {
    (0..v.order()).any(|m| {
        let mut t = vec![0; u.order()];
        for &x in inside {
            t[x] = psi[x];
            t[u.mul(mu, x)] = v.mul(m, psi[x]);
        }
        is_homomorphism(u, v, &t)
    })
}

#[test]
fn extension_agrees_with_brute_force_on_small_groups() {
    let mut successes = 0;
    let mut failures = 0;
    for gs in catalog(16).iter().skip(2) {
        for u in gs {
            for h in u.subgroups() {
                if 2 * h.count_ones() as usize != u.order() {
                    continue;
                }
                let inside = members(h, u.order());
                let (hg, emb) = u.subgroup_as_group(h).unwrap();
                // psi: U' -> U' as an abstract group, the identity map
                let mut psi = vec![0; u.order()];
                for (i, &x) in emb.iter().enumerate() {
                    psi[x] = i;
                }
                let mu = (0..u.order()).find(|&x| h >> x & 1 == 0).unwrap();
                match extend_index2(u, h, &hg, &psi, mu, None).unwrap() {
                    Ok(t) => {
                        successes += 1;
                        assert!(is_homomorphism(u, &hg, &t));
                        for &x in &inside {
                            assert_eq!(t[x], psi[x]);
                        }
                    }
                    Err(ExtensionFailure::ImageNotBig) => {}
                    Err(_) => {
                        failures += 1;
                        // with big image the construction is exhaustive
                        assert!(!brute_extension(u, &inside, &hg, &psi, mu), "{} missed an extension", u.name);
                    }
                }
            }
        }
    }
    assert!(successes > 0 && failures > 0, "{} {}", successes, failures);
}
