//! Fixed-point real approximations: value = mant / 2^bits, truncated.

use crate::numfield::AlgElem;
use crate::quadfield::QuadField;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug)]
pub struct Fixed {
    pub mant: BigInt,
    pub bits: u32,
}

impl Fixed {
    pub fn zero(bits: u32) -> Fixed {
        Fixed { mant: BigInt::zero(), bits }
    }
    /// sigma1 of an element of a real quadratic field (sqrt d positive).
    pub fn sigma1(qf: &QuadField, x: &AlgElem, bits: u32) -> Fixed {
        let c = x.coeffs();
        let scale = BigInt::from(1) << bits;
        let sd = (BigInt::from(qf.d) << (2 * bits)).sqrt();
        let a = (c[0].numer() * &scale) / c[0].denom();
        let b = (c[1].numer() * &sd) / c[1].denom();
        Fixed { mant: a + b, bits }
    }
    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed { mant: (&self.mant * &o.mant) >> self.bits, bits: self.bits }
    }
    /// n-th root of a nonnegative value.
    pub fn nth_root(&self, n: u32) -> Fixed {
        assert!(!self.mant.is_negative(), "root of a negative value");
        let m = &self.mant << ((n - 1) * self.bits);
        Fixed { mant: m.nth_root(n), bits: self.bits }
    }
    pub fn to_decimal(&self, digits: usize) -> String {
        let neg = self.mant.is_negative();
        let a = self.mant.abs();
        let ten = BigInt::from(10).pow(digits as u32);
        let scaled = (&a * &ten) >> self.bits;
        let ip = &scaled / &ten;
        let fp = &scaled % &ten;
        let mut s = format!("{}.{:0>width$}", ip, fp.to_string(), width = digits);
        if neg && !scaled.is_zero() {
            s.insert(0, '-');
        }
        s
    }
}
