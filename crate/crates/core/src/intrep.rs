//! Integer model of the level-module action for fast Hecke sums.
//!
//! Elements of K are numerator vectors over the power basis with a fixed
//! denominator per tensor factor, so the sum of rho(x) over many x is computed
//! in checked i128 arithmetic and converted to exact field elements once.

use crate::matrix::Matrix;
use crate::numfield::AlgElem;
use crate::quaternion::ZVec;
use crate::ring::Q;
use crate::weight::LevelModule;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

const MAXK: usize = 8;
type KInt = [i128; MAXK];

pub struct IntegralModel<'a> {
    module: &'a LevelModule,
    n: usize,
    /// x^k reduced, for k < 2n - 1.
    red: Vec<KInt>,
    /// Scaled images of the Z-basis: den[j] * sigma_j(e_t), entry e of the 2x2 matrix.
    basis: [[[KInt; 4]; 8]; 2],
    den: [BigInt; 2],
}

fn kadd(a: &KInt, b: &KInt, n: usize) -> Option<KInt> {
    let mut c = [0i128; MAXK];
    for i in 0..n {
        c[i] = a[i].checked_add(b[i])?;
    }
    Some(c)
}

impl<'a> IntegralModel<'a> {
    pub fn new(module: &'a LevelModule) -> Option<IntegralModel<'a>> {
        let k = module.k();
        let n = k.degree();
        if n > MAXK {
            return None;
        }
        let m: Vec<i128> = k.modulus.iter().map(|c| c.to_i128()).collect::<Option<_>>()?;
        let mut red = vec![];
        for i in 0..n {
            let mut v = [0i128; MAXK];
            v[i] = 1;
            red.push(v);
        }
        // x^n = -sum m_i x^i
        for _ in n..2 * n - 1 {
            let prev: KInt = *red.last().unwrap();
            let mut v = [0i128; MAXK];
            for i in 1..n {
                v[i] = prev[i - 1];
            }
            let top = prev[n - 1];
            for i in 0..n {
                v[i] = v[i].checked_sub(top.checked_mul(m[i])?)?;
            }
            red.push(v);
        }
        let mut basis = [[[[0i128; MAXK]; 4]; 8]; 2];
        let mut den = [BigInt::one(), BigInt::one()];
        for j in 0..2 {
            let imgs: Vec<_> = (0..8)
                .map(|t| {
                    let mut e = [0i64; 8];
                    e[t] = 1;
                    module.splittings.image(&e, j)
                })
                .collect();
            for m2 in &imgs {
                for x in m2 {
                    for c in x.coeffs() {
                        den[j] = den[j].lcm(c.denom());
                    }
                }
            }
            let dq = Q::from_integer(den[j].clone());
            for (t, m2) in imgs.iter().enumerate() {
                for e in 0..4 {
                    for (i, c) in m2[e].coeffs().iter().enumerate() {
                        let v = c * &dq;
                        basis[j][t][e][i] = v.to_integer().to_i128()?;
                    }
                }
            }
        }
        Some(IntegralModel { module, n, red, basis, den })
    }

    fn kmul(&self, a: &KInt, b: &KInt) -> Option<KInt> {
        let n = self.n;
        let mut prod = [0i128; 2 * MAXK];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = prod[i + j].checked_add(a[i].checked_mul(b[j])?)?;
            }
        }
        let mut c = [0i128; MAXK];
        for k in 0..2 * n - 1 {
            if prod[k] == 0 {
                continue;
            }
            for i in 0..n {
                c[i] = c[i].checked_add(prod[k].checked_mul(self.red[k][i])?)?;
            }
        }
        Some(c)
    }

    fn image(&self, x: &ZVec, j: usize) -> Option<[KInt; 4]> {
        let mut m = [[0i128; MAXK]; 4];
        for t in 0..8 {
            if x[t] == 0 {
                continue;
            }
            let c = x[t] as i128;
            for e in 0..4 {
                for i in 0..self.n {
                    m[e][i] = m[e][i].checked_add(c.checked_mul(self.basis[j][t][e][i])?)?;
                }
            }
        }
        Some(m)
    }

    /// Same convention as the exact symmetric power: column i is the image of X^(d-i) Y^i.
    fn sym(&self, m: &[KInt; 4], d: usize) -> Option<Vec<Vec<KInt>>> {
        let n = self.n;
        let one = {
            let mut v = [0i128; MAXK];
            v[0] = 1;
            v
        };
        let pmul = |a: &Vec<KInt>, b: &[KInt; 2]| -> Option<Vec<KInt>> {
            let mut r = vec![[0i128; MAXK]; a.len() + 1];
            for (i, x) in a.iter().enumerate() {
                for (jj, y) in b.iter().enumerate() {
                    r[i + jj] = kadd(&r[i + jj], &self.kmul(x, y)?, n)?;
                }
            }
            Some(r)
        };
        let ex = [m[0], m[2]];
        let ey = [m[1], m[3]];
        let mut xpow = vec![vec![one]];
        let mut ypow = vec![vec![one]];
        for _ in 0..d {
            xpow.push(pmul(xpow.last().unwrap(), &ex)?);
            ypow.push(pmul(ypow.last().unwrap(), &ey)?);
        }
        let mut out = vec![vec![[0i128; MAXK]; d + 1]; d + 1];
        for i in 0..=d {
            // product of the two coefficient lists
            let a = &xpow[d - i];
            let b = &ypow[i];
            for (s, x) in a.iter().enumerate() {
                for (t, y) in b.iter().enumerate() {
                    out[s + t][i] = kadd(&out[s + t][i], &self.kmul(x, y)?, n)?;
                }
            }
        }
        Some(out)
    }

    fn accumulate(&self, x: &ZVec, acc: &mut [KInt]) -> Option<()> {
        let md = self.module;
        let sd = md.weight.sym_degrees();
        let (d1, d2) = (md.dims[0], md.dims[1]);
        let s1 = self.sym(&self.image(x, 0)?, sd[0])?;
        let s2 = self.sym(&self.image(x, 1)?, sd[1])?;
        let mut kr = vec![[0i128; MAXK]; d1 * d2 * d1 * d2];
        for r1 in 0..d1 {
            for c1 in 0..d1 {
                for r2 in 0..d2 {
                    for c2 in 0..d2 {
                        kr[((r1 * d2 + r2) * d1 + c1) * d2 + c2] = self.kmul(&s1[r1][c1], &s2[r2][c2])?;
                    }
                }
            }
        }
        let perm = md.p1_perm(x).ok()?;
        let dim = md.dim;
        let bd = d1 * d2;
        for (pt, &(pt2, sign)) in perm.iter().enumerate() {
            if sign == 0 {
                continue;
            }
            for r in 0..bd {
                for c in 0..bd {
                    let v = &kr[r * bd + c];
                    let (ri, ci) = (md.index(r / d2, r % d2, pt2), md.index(c / d2, c % d2, pt));
                    let slot = &mut acc[ri * dim + ci];
                    for i in 0..self.n {
                        slot[i] = if sign > 0 { slot[i].checked_add(v[i])? } else { slot[i].checked_sub(v[i])? };
                    }
                }
            }
        }
        Some(())
    }

    /// Sum of the tensor-and-permutation part of rho(x) over xs, as an exact
    /// dim x dim matrix over K; None on i128 overflow.
    pub fn sum(&self, xs: &[ZVec]) -> Option<Matrix<AlgElem>> {
        let md = self.module;
        let dim = md.dim;
        let n = self.n;
        let parts: Vec<Option<Vec<KInt>>> = xs
            .par_chunks(256)
            .map(|chunk| {
                let mut acc = vec![[0i128; MAXK]; dim * dim];
                for x in chunk {
                    self.accumulate(x, &mut acc)?;
                }
                Some(acc)
            })
            .collect();
        let mut total = vec![[0i128; MAXK]; dim * dim];
        for p in parts {
            let p = p?;
            for (t, v) in total.iter_mut().zip(&p) {
                *t = kadd(t, v, n)?;
            }
        }
        let sd = md.weight.sym_degrees();
        let scale = self.den[0].pow(sd[0] as u32) * self.den[1].pow(sd[1] as u32);
        let k = md.k();
        let mut m = Matrix::zeros(dim, dim, AlgElem::zero(k));
        for r in 0..dim {
            for c in 0..dim {
                let v = &total[r * dim + c];
                if v[..n].iter().all(|&x| x == 0) {
                    continue;
                }
                let coeffs: Vec<Q> = v[..n].iter().map(|&x| Q::new(BigInt::from(x), scale.clone())).collect();
                m.set(r, c, AlgElem::from_coeffs(k, &coeffs));
            }
        }
        Some(m)
    }
}
