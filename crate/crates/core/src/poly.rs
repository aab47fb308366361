//! Dense univariate polynomials over any `FieldOps` coefficient type.

use crate::ring::{FieldOps, Q};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T: FieldOps> {
    /// Coefficients, constant term first, no trailing zeros.
    pub coeffs: Vec<T>,
    pub zero: T,
}

impl<T: FieldOps> Poly<T> {
    pub fn new(mut coeffs: Vec<T>, zero: T) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero_elem()) {
            coeffs.pop();
        }
        Poly { coeffs, zero }
    }
    pub fn zero(zero: T) -> Self {
        Poly { coeffs: vec![], zero }
    }
    pub fn constant(c: T) -> Self {
        let z = c.zero_like();
        Poly::new(vec![c], z)
    }
    /// The monomial `c X^n`.
    pub fn monomial(c: T, n: usize) -> Self {
        let z = c.zero_like();
        let mut v = vec![z.clone(); n];
        v.push(c);
        Poly::new(v, z)
    }
    pub fn x(one: T) -> Self {
        Poly::monomial(one, 1)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }
    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(|| self.zero.clone())
    }
    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).add_ref(&o.coeff(i))).collect();
        Poly::new(v, self.zero.clone())
    }
    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).sub_ref(&o.coeff(i))).collect();
        Poly::new(v, self.zero.clone())
    }
    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.neg_ref()).collect(), self.zero.clone())
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.zero.clone());
        }
        let mut v = vec![self.zero.clone(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Poly::new(v, self.zero.clone())
    }
    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.mul_ref(c)).collect(), self.zero.clone())
    }
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv_ref())
    }
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let inv = d.lead().inv_ref();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(self.zero.clone()), self.clone());
        }
        let mut q = vec![self.zero.clone(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul_ref(&inv);
            if !c.is_zero_elem() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].sub_ref(&c.mul_ref(dj));
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q, self.zero.clone()), Poly::new(r, self.zero.clone()))
    }
    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }
    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
    /// Returns (g, s, t) with s*self + t*o = g monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let z = self.zero.clone();
        let one = Poly::constant(z.one_like());
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (one.clone(), Poly::zero(z.clone()));
        let (mut t0, mut t1) = (Poly::zero(z.clone()), one);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s;
            let t = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().inv_ref();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }
    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul_ref(&c.from_int_like(i as i64)))
            .collect();
        Poly::new(v, self.zero.clone())
    }
    pub fn eval(&self, x: &T) -> T {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x).add_ref(c);
        }
        acc
    }
    /// Evaluate at a polynomial argument.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Poly::zero(self.zero.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(c.clone()));
        }
        acc
    }
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Poly::constant(self.zero.one_like()).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.monic()
        } else {
            self.divrem(&g).0.monic()
        }
    }
    pub fn map<U: FieldOps>(&self, zero: U, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect(), zero)
    }
}

pub type QPoly = Poly<Q>;

pub fn qpoly_from_ints(c: &[i64]) -> QPoly {
    Poly::new(c.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect(), Q::zero())
}

pub fn qpoly_from_bigints(c: &[BigInt]) -> QPoly {
    Poly::new(c.iter().map(|x| Q::from_integer(x.clone())).collect(), Q::zero())
}

/// Sign of a rational: -1, 0, 1.
pub fn q_sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain of a squarefree rational polynomial.
pub fn sturm_chain(f: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain
}

pub fn sign_variations(chain: &[QPoly], x: &Q) -> usize {
    let signs: Vec<i32> = chain.iter().map(|p| q_sign(&p.eval(x))).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in the half-open interval (a, b].
pub fn count_roots(chain: &[QPoly], a: &Q, b: &Q) -> usize {
    sign_variations(chain, a) - sign_variations(chain, b)
}

/// Cauchy bound: all real roots lie strictly inside (-B, B).
pub fn root_bound(f: &QPoly) -> Q {
    let lead = f.lead();
    let mut m = Q::zero();
    for c in &f.coeffs[..f.coeffs.len() - 1] {
        let r = (c / &lead).abs();
        if r > m {
            m = r;
        }
    }
    m + Q::from_integer(BigInt::from(1))
}

/// Isolating intervals (lo, hi) for the real roots of a squarefree polynomial,
/// sorted increasingly; f is nonzero at both endpoints.
pub fn isolate_real_roots(f: &QPoly) -> Vec<(Q, Q)> {
    let f = f.squarefree_part();
    if f.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let chain = sturm_chain(&f);
    let b = root_bound(&f);
    let mut out = vec![];
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_roots(&chain, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((lo, hi));
            continue;
        }
        let two = Q::from_integer(BigInt::from(2));
        let mut mid = (&lo + &hi) / &two;
        let mut k = 3i64;
        while f.eval(&mid).is_zero() {
            mid = (&lo * Q::from_integer(BigInt::from(k - 1)) + &hi) / Q::from_integer(BigInt::from(k));
            k += 1;
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    // Make the endpoints non-roots: a root at hi is shrunk onto exactly.
    let mut fixed = vec![];
    for (lo, hi) in out {
        if f.eval(&hi).is_zero() {
            fixed.push((hi.clone(), hi));
        } else {
            fixed.push((lo, hi));
        }
    }
    fixed.sort_by(|a, b| a.1.cmp(&b.1));
    fixed
}

/// Halve an isolating interval of a simple root, keeping endpoint signs opposite.
/// Degenerate intervals (lo == hi) are exact rational roots and stay put.
pub fn refine_root(f: &QPoly, lo: &Q, hi: &Q) -> (Q, Q) {
    if lo == hi {
        return (lo.clone(), hi.clone());
    }
    let two = Q::from_integer(BigInt::from(2));
    let mid = (lo + hi) / &two;
    let sm = q_sign(&f.eval(&mid));
    if sm == 0 {
        return (mid.clone(), mid);
    }
    let sl = q_sign(&f.eval(lo));
    if sl == sm {
        (mid, hi.clone())
    } else {
        (lo.clone(), mid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_identity() {
        let a = qpoly_from_ints(&[1, 2, 3, 4, 5]);
        let b = qpoly_from_ints(&[-1, 0, 2]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn roots_of_x2_minus_2() {
        let f = qpoly_from_ints(&[-2, 0, 1]);
        let r = isolate_real_roots(&f);
        assert_eq!(r.len(), 2);
        for (lo, hi) in &r {
            assert!(q_sign(&f.eval(lo)) * q_sign(&f.eval(hi)) < 0);
        }
        assert!(r[0].1 <= Q::zero() && r[1].0 >= Q::zero());
    }

    #[test]
    fn sturm_counts_cyclotomic_8_has_no_real_roots() {
        let f = qpoly_from_ints(&[1, 0, 0, 0, 1]);
        assert!(isolate_real_roots(&f).is_empty());
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = qpoly_from_ints(&[-2, 0, 1]);
        let b = qpoly_from_ints(&[3, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, qpoly_from_ints(&[1]));
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }
}
