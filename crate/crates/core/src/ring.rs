//! Minimal field interface shared by rationals, prime fields and number fields.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

pub type Q = BigRational;

pub trait FieldOps: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Panics on zero.
    fn inv_ref(&self) -> Self;

    fn div_ref(&self, o: &Self) -> Self {
        self.mul_ref(&o.inv_ref())
    }
    fn is_one_elem(&self) -> bool {
        self.sub_ref(&self.one_like()).is_zero_elem()
    }
    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }
    fn pow_i(&self, e: i64) -> Self {
        if e >= 0 {
            self.pow_u(e as u64)
        } else {
            self.inv_ref().pow_u((-e) as u64)
        }
    }
    fn from_int_like(&self, n: i64) -> Self {
        let one = self.one_like();
        let mut acc = self.zero_like();
        let mut base = if n < 0 { one.neg_ref() } else { one };
        let mut m = n.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc.add_ref(&base);
            }
            base = base.add_ref(&base);
            m >>= 1;
        }
        acc
    }
}

impl FieldOps for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv_ref(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        self.recip()
    }
    fn from_int_like(&self, n: i64) -> Self {
        Q::from_integer(BigInt::from(n))
    }
}

/// Element of a prime field F_p with p < 2^31.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: i128, p: u64) -> Self {
        let m = p as i128;
        Fp { v: (((v % m) + m) % m) as u64, p }
    }
    pub fn legendre(&self) -> i32 {
        if self.v == 0 {
            return 0;
        }
        let r = self.pow_u((self.p - 1) / 2);
        if r.v == 1 {
            1
        } else {
            -1
        }
    }
    /// Some square root, if one exists.
    pub fn sqrt(&self) -> Option<Fp> {
        if self.v == 0 {
            return Some(*self);
        }
        if self.p == 2 {
            return Some(*self);
        }
        if self.legendre() != 1 {
            return None;
        }
        (1..self.p).map(|x| Fp { v: x, p: self.p }).find(|x| x.mul_ref(x) == *self)
    }
}

impl FieldOps for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1 % self.p, p: self.p }
    }
    fn is_zero_elem(&self) -> bool {
        self.v == 0
    }
    fn add_ref(&self, o: &Self) -> Self {
        Fp { v: (self.v + o.v) % self.p, p: self.p }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Fp { v: (self.v + self.p - o.v) % self.p, p: self.p }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Fp { v: (self.v * o.v) % self.p, p: self.p }
    }
    fn neg_ref(&self) -> Self {
        Fp { v: (self.p - self.v) % self.p, p: self.p }
    }
    fn inv_ref(&self) -> Self {
        assert!(self.v != 0, "inverse of zero in F_p");
        self.pow_u(self.p - 2)
    }
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Floor of a rational.
pub fn q_floor(x: &Q) -> BigInt {
    x.floor().to_integer()
}

pub fn q_abs(x: &Q) -> Q {
    x.abs()
}
