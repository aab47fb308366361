//! Parity of weights, the orthogonal model of the dual group for a quadratic
//! field, degree-4 Frobenius polynomials, and the unit-capitulation check.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numfield::AlgElem;
use crate::poly::Poly;
use crate::quadfield::{QuadField, QuadInt};
use crate::ring::{FieldOps, Q};
use crate::weight::{m2_det, m2_mul, M2};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct ParityReport {
    pub paritious: bool,
    /// Parity of the sum of k over each block is the same for all blocks.
    pub e_paritious: bool,
    /// Some reasonable t with sum over each block of (t - 1/2) integral, chosen
    /// with the least R = k + 2t >= 0; present exactly when e_paritious.
    pub algebraic_t: Option<(Vec<Q>, Q)>,
    /// For a supplied t: Some(R) if k + 2t is constant.
    pub supplied_r: Option<Option<Q>>,
    /// For a supplied t: whether each block sum of (t - 1/2) is integral.
    pub supplied_integral: Option<bool>,
}

/// Partition: the places of F grouped by the place of E below them.
pub fn parity_predicates(k: &[i64], partition: &[Vec<usize>], t: Option<&[Q]>) -> Result<ParityReport> {
    let n = k.len();
    let mut seen = vec![false; n];
    for b in partition {
        for &s in b {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Config("partition must cover each place exactly once".into()));
            }
        }
    }
    if seen.iter().any(|x| !x) || partition.is_empty() {
        return Err(Error::Config("partition must cover each place exactly once".into()));
    }
    let m = partition[0].len();
    if partition.iter().any(|b| b.len() != m) {
        return Err(Error::Config("blocks must have equal size [F:E]".into()));
    }
    if let Some(t) = t {
        if t.len() != n {
            return Err(Error::Config("t must have one entry per place".into()));
        }
    }
    let paritious = k.iter().all(|x| (x - k[0]).is_even());
    let sums: Vec<i64> = partition.iter().map(|b| b.iter().map(|&s| k[s]).sum()).collect();
    let e_paritious = sums.iter().all(|s| (s - sums[0]).is_even());
    // sum_{block}(t - 1/2) = (m (R - 1) - sum k) / 2; least R >= 0 in (1/m)Z making it integral
    let algebraic_t = if e_paritious {
        let s = sums[0];
        let mut j = -s;
        let r_of = |j: i64| Q::from_integer(1.into()) + Q::new((s + 2 * j).into(), (m as i64).into());
        while r_of(j) < Q::zero() {
            j += 1;
        }
        while r_of(j - 1) >= Q::zero() {
            j -= 1;
        }
        let r = r_of(j);
        let t: Vec<Q> = k.iter().map(|&x| (&r - Q::from_integer(x.into())) / Q::from_integer(2.into())).collect();
        Some((t, r))
    } else {
        None
    };
    let (supplied_r, supplied_integral) = match t {
        Some(t) => {
            let rs: Vec<Q> = k.iter().zip(t).map(|(&x, y)| Q::from_integer(x.into()) + y * Q::from_integer(2.into())).collect();
            let r = if rs.iter().all(|x| *x == rs[0]) { Some(rs[0].clone()) } else { None };
            let half = Q::new(1.into(), 2.into());
            let integral = partition.iter().all(|b| {
                let s: Q = b.iter().map(|&i| &t[i] - &half).fold(Q::zero(), |a, x| a + x);
                s.is_integer()
            });
            (Some(r), Some(integral))
        }
        None => (None, None),
    };
    Ok(ParityReport { paritious, e_paritious, algebraic_t, supplied_r, supplied_integral })
}

pub fn m2_identity(like: &AlgElem) -> M2 {
    let (z, o) = (like.zero_like(), like.one_like());
    [o.clone(), z.clone(), z, o]
}

/// Companion matrix of a monic quadratic X^2 + c1 X + c0.
pub fn companion(h: &Poly<AlgElem>) -> Result<M2> {
    if h.degree() != Some(2) || !h.coeffs[2].is_one_elem() {
        return Err(Error::Config("companion matrix needs a monic quadratic".into()));
    }
    let z = h.coeffs[0].zero_like();
    Ok([z.clone(), h.coeffs[0].neg(), z.one_like(), h.coeffs[1].neg()])
}

#[derive(Clone, Debug)]
pub struct Go4Image {
    /// Matrix on the basis E11, E12, E21, E22 of 2x2 matrices.
    pub matrix: Matrix<AlgElem>,
    /// det(g1) det(g2).
    pub nu: AlgElem,
}

fn m2_transpose(m: &M2) -> M2 {
    [m[0].clone(), m[2].clone(), m[1].clone(), m[3].clone()]
}

/// m -> g1 m g2^t, preceded by m -> m^t when twist is set.
pub fn go4_image(g1: &M2, g2: &M2, twist: bool) -> Result<Go4Image> {
    let nu = m2_det(g1).mul(&m2_det(g2));
    if nu.is_zero() {
        return Err(Error::Config("singular input to the orthogonal image".into()));
    }
    let z = g1[0].zero_like();
    let act = |m: &M2| {
        let m = if twist { m2_transpose(m) } else { m.clone() };
        m2_mul(&m2_mul(g1, &m), &m2_transpose(g2))
    };
    let mut cols = vec![];
    for e in 0..4 {
        let mut m: M2 = [z.clone(), z.clone(), z.clone(), z.clone()];
        m[e] = z.one_like();
        cols.push(act(&m).to_vec());
    }
    let matrix = Matrix::from_cols(cols, z.clone());
    // det is scaled by nu on random integer matrices
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..4 {
        let m: M2 = std::array::from_fn(|_| z.from_int_like(rng.gen_range(-9..=9)));
        if m2_det(&act(&m)) != nu.mul(&m2_det(&m)) {
            return Err(Error::Certificate("image does not scale the determinant form by nu".into()));
        }
    }
    Ok(Go4Image { matrix, nu })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
}

#[derive(Clone, Debug)]
pub struct FrobPoly {
    pub p: i64,
    pub kind: Splitting,
    pub poly: Poly<AlgElem>,
}

/// A = p^e eps(p), the multiplier of Frobenius; e = k1 + k2 - 2.
pub fn frob_multiplier(like: &AlgElem, p: i64, e: u32, eps_p: i32) -> AlgElem {
    like.from_int_like(eps_p as i64).mul(&like.from_int_like(p).pow_u(e as u64))
}

/// X^4 - t X^3 + (t^2 - t(p^2) - A) X^2 - A t X + A^2.
pub fn frob_split(p: i64, t: &AlgElem, t_p2: &AlgElem, e: u32, eps_p: i32) -> FrobPoly {
    let a = frob_multiplier(t, p, e, eps_p);
    let c2 = t.mul(t).sub(t_p2).sub(&a);
    let coeffs = vec![a.mul(&a), a.mul(t).neg(), c2, t.neg(), t.one_like()];
    FrobPoly { p, kind: Splitting::Split, poly: Poly::new(coeffs, t.zero_like()) }
}

/// X^4 - t X^3 + A t X - A^2.
pub fn frob_inert(p: i64, t: &AlgElem, e: u32, eps_p: i32) -> FrobPoly {
    let a = frob_multiplier(t, p, e, eps_p);
    let coeffs = vec![a.mul(&a).neg(), a.mul(t), t.zero_like(), t.neg(), t.one_like()];
    FrobPoly { p, kind: Splitting::Inert, poly: Poly::new(coeffs, t.zero_like()) }
}

/// Characteristic polynomial of the orthogonal image of the two Satake classes.
pub fn go4_split_oracle(h1: &Poly<AlgElem>, h2: &Poly<AlgElem>) -> Result<Poly<AlgElem>> {
    Ok(go4_image(&companion(h1)?, &companion(h2)?, false)?.matrix.charpoly())
}

/// Characteristic polynomial of (companion of X^2 - t X + A, 1) followed by the twist.
pub fn go4_inert_oracle(p: i64, t: &AlgElem, e: u32, eps_p: i32) -> Result<Poly<AlgElem>> {
    let a = frob_multiplier(t, p, e, eps_p);
    let h = Poly::new(vec![a, t.neg(), t.one_like()], t.zero_like());
    Ok(go4_image(&companion(&h)?, &m2_identity(t), true)?.matrix.charpoly())
}

/// Product of X - a_i b_j over the roots of two monic quadratics, in closed form.
pub fn composed_product(h1: &Poly<AlgElem>, h2: &Poly<AlgElem>) -> Poly<AlgElem> {
    let (t1, n1) = (h1.coeffs[1].neg(), h1.coeffs[0].clone());
    let (t2, n2) = (h2.coeffs[1].neg(), h2.coeffs[0].clone());
    let two = t1.from_int_like(2);
    let t = t1.mul(&t2);
    let n = n1.mul(&n2);
    let c2 = n2.mul(&t1.mul(&t1).sub(&two.mul(&n1))).add(&t2.mul(&t2).mul(&n1));
    Poly::new(vec![n.mul(&n), t.mul(&n).neg(), c2, t.neg(), t.one_like()], t.zero_like())
}

/// s with X^4 H(A/X) / A^2 = s H, if any.
pub fn functional_equation_sign(h: &Poly<AlgElem>, a: &AlgElem) -> Option<i32> {
    if h.degree() != Some(4) {
        return None;
    }
    let a2 = a.mul(a);
    let rev: Vec<AlgElem> = (0..=4).map(|i| h.coeffs[4 - i].mul(&a.pow_u(4 - i as u64)).div_ref(&a2)).collect();
    for s in [1, -1] {
        let sa = a.from_int_like(s);
        if (0..=4).all(|i| rev[i] == h.coeffs[i].mul(&sa)) {
            return Some(s as i32);
        }
    }
    None
}

/// X^2 - t X + sigma1(varpi)^(k1-1) sigma2(varpi)^(k2-1) eps(varpi), with the
/// constant lifted into the field of t.
pub fn satake_naive_charpoly(qf: &QuadField, k: [i64; 2], varpi: QuadInt, eps: i32, t: &AlgElem, lift: impl Fn(&AlgElem) -> AlgElem) -> Poly<AlgElem> {
    let c = qf.mul(qf.pow(varpi, (k[0] - 1) as u32), qf.pow(qf.conj(varpi), (k[1] - 1) as u32));
    let c = lift(&qf.to_alg(c)).mul(&t.from_int_like(eps as i64));
    Poly::new(vec![c, t.neg(), t.one_like()], t.zero_like())
}

#[derive(Clone, Debug)]
pub struct CapitulationReport {
    pub unit_norm: i64,
    /// |O_F^{x+} / (O_F^x)^2|.
    pub quotient_order: usize,
    pub action_trivial: bool,
    pub pullback_bijective: bool,
    pub scope_flag: Option<String>,
}

/// Totally positive units modulo squares of units, for E = Q under an asserted
/// narrow class number one.
pub fn capitulation_report(qf: &QuadField, narrow_class_one: bool) -> Result<CapitulationReport> {
    if !narrow_class_one {
        return Err(Error::Scope("capitulation structure needs narrow class number one".into()));
    }
    let unit_norm = qf.unit_norm as i64;
    if unit_norm == -1 {
        Ok(CapitulationReport { unit_norm, quotient_order: 1, action_trivial: true, pullback_bijective: true, scope_flag: None })
    } else {
        Ok(CapitulationReport {
            unit_norm,
            quotient_order: 2,
            action_trivial: false,
            pullback_bijective: false,
            scope_flag: Some(
                "fundamental unit has norm +1: totally positive units are not all squares, so the narrow class number exceeds one".into(),
            ),
        })
    }
}

/// Rational q as an exponent-style string for reports.
pub fn q_str(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
