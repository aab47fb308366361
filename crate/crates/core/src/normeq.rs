//! Solving nrd(x) = target when the algebra is defined over Q.
//!
//! With F-coordinates on 1, i, j, k written as A + B sqrt(d), A, B in Q^4,
//! nrd(x) = q(A) + d q(B) + 2 sqrt(d) <A, B> for the diagonal form
//! q = diag(1, -a, -b, ab). Solutions come from pairing the two 4-dimensional
//! norm buckets, which is far cheaper than enumerating an 8-dimensional ellipsoid.

use crate::matrix::Matrix;
use crate::quadfield::QuadInt;
use crate::quaternion::{QuatOrder, ZVec};
use crate::ring::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

type V4 = [i64; 4];

pub struct NormEquation {
    d: i64,
    q: V4,
    /// Common denominator of the A, B parts over the order.
    den: i64,
    /// Row r: (den A, den B) of the r-th Z-basis vector.
    to_ab: [[i64; 8]; 8],
    /// to_ab^{-1} = adj / det.
    adj: [[i128; 8]; 8],
    det: i128,
    hnf_a: [V4; 4],
    hnf_b: [V4; 4],
}

fn int_of(q: &Q) -> i64 {
    assert!(q.is_integer());
    q.to_integer().to_i64().expect("coordinate overflow")
}

/// Echelon basis (pivots on the diagonal) of the Z-span of the rows.
fn hnf4(rows: &[V4]) -> Option<[V4; 4]> {
    let mut m: Vec<[i128; 4]> = rows.iter().map(|r| r.map(|x| x as i128)).collect();
    let mut out = [[0i64; 4]; 4];
    for col in 0..4 {
        // gcd-reduce column col over the remaining rows
        loop {
            let nz: Vec<usize> = (0..m.len()).filter(|&i| m[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| m[i][col].abs()).unwrap();
            for &i in &nz {
                if i != piv {
                    let f = m[i][col] / m[piv][col];
                    for c in 0..4 {
                        m[i][c] -= f * m[piv][c];
                    }
                }
            }
        }
        let i = (0..m.len()).find(|&i| m[i][col] != 0)?;
        let mut r = m.remove(i);
        if r[col] < 0 {
            r = r.map(|x| -x);
        }
        out[col] = r.map(|x| x as i64);
    }
    Some(out)
}

fn in_span(h: &[V4; 4], v: &V4) -> bool {
    let mut v = *v;
    for i in 0..4 {
        if v[i] % h[i][i] != 0 {
            return false;
        }
        let f = v[i] / h[i][i];
        if f != 0 {
            for c in i..4 {
                v[c] -= f * h[i][c];
            }
        }
    }
    true
}

impl NormEquation {
    /// Available when a and b are rational integers.
    pub fn new(order: &QuatOrder) -> Option<NormEquation> {
        let alg = &order.alg;
        let qf = &alg.qf;
        let (a, b) = (qf.to_alg(alg.a).as_rational()?, qf.to_alg(alg.b).as_rational()?);
        if !a.is_integer() || !b.is_integer() {
            return None;
        }
        let (a, b) = (int_of(&a), int_of(&b));
        let q = [1, -a, -b, a * b];
        let mut parts = vec![];
        let mut den = BigInt::one();
        for r in 0..8 {
            let mut e = [0i64; 8];
            e[r] = 1;
            let x = order.quat(&e);
            let mut row = vec![];
            for m in 0..4 {
                let c = x.c[m].coeffs();
                row.push(c[0].clone());
                row.push(c[1].clone());
            }
            for c in &row {
                den = den.lcm(c.denom());
            }
            parts.push(row);
        }
        let den_q = Q::from_integer(den.clone());
        let mut to_ab = [[0i64; 8]; 8];
        for r in 0..8 {
            for m in 0..4 {
                to_ab[r][m] = int_of(&(&parts[r][2 * m] * &den_q));
                to_ab[r][4 + m] = int_of(&(&parts[r][2 * m + 1] * &den_q));
            }
        }
        let mm = Matrix::from_rows(
            to_ab.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect(),
            Q::zero(),
        );
        let det = mm.det();
        let inv = mm.inverse()?;
        let mut adj = [[0i128; 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                adj[i][j] = int_of(&(inv.get(i, j) * &det)) as i128;
            }
        }
        let ra: Vec<V4> = to_ab.iter().map(|r| [r[0], r[1], r[2], r[3]]).collect();
        let rb: Vec<V4> = to_ab.iter().map(|r| [r[4], r[5], r[6], r[7]]).collect();
        Some(NormEquation {
            d: qf.d,
            q,
            den: den.to_i64()?,
            to_ab,
            adj,
            det: int_of(&det) as i128,
            hnf_a: hnf4(&ra)?,
            hnf_b: hnf4(&rb)?,
        })
    }

    fn qform(&self, v: &V4) -> i64 {
        (0..4).map(|m| self.q[m] * v[m] * v[m]).sum()
    }

    /// Lattice vectors of the projection with q(v) <= bound, bucketed by q(v).
    fn buckets(&self, h: &[V4; 4], bound: i64) -> Vec<Vec<V4>> {
        let mut out = vec![vec![]; bound as usize + 1];
        let q = self.q;
        let lim = |rem: i64, qm: i64| ((rem as f64 / qm as f64).sqrt() + 1e-9).floor() as i64;
        let b0 = lim(bound, q[0]);
        for x0 in -b0..=b0 {
            let r0 = bound - q[0] * x0 * x0;
            let b1 = lim(r0, q[1]);
            for x1 in -b1..=b1 {
                let r1 = r0 - q[1] * x1 * x1;
                let b2 = lim(r1, q[2]);
                for x2 in -b2..=b2 {
                    let r2 = r1 - q[2] * x2 * x2;
                    let b3 = lim(r2, q[3]);
                    for x3 in -b3..=b3 {
                        let v = [x0, x1, x2, x3];
                        if in_span(h, &v) {
                            out[self.qform(&v) as usize].push(v);
                        }
                    }
                }
            }
        }
        out
    }

    fn to_zvec(&self, ab: &[i64; 8]) -> Option<ZVec> {
        let mut z = [0i64; 8];
        for j in 0..8 {
            let mut s: i128 = 0;
            for i in 0..8 {
                s += ab[i] as i128 * self.adj[i][j];
            }
            if s % self.det != 0 {
                return None;
            }
            z[j] = (s / self.det) as i64;
        }
        Some(z)
    }

    /// All x in the order with nrd(x) = target, sorted.
    pub fn solve(&self, order: &QuatOrder, target: QuadInt) -> Vec<ZVec> {
        let qf = &order.alg.qf;
        let (t1, t2, tden) = qf.sqrt_form(target);
        let s = (self.den * self.den) as i128;
        // q(alpha) + d q(beta) = n1, <alpha, beta> = n2
        if (s * t1) % tden != 0 || (s * t2) % (2 * tden) != 0 {
            return vec![];
        }
        let n1 = (s * t1 / tden) as i64;
        let n2 = (s * t2 / (2 * tden)) as i64;
        if n1 < 0 {
            return vec![];
        }
        let ba = self.buckets(&self.hnf_a, n1);
        let bb = self.buckets(&self.hnf_b, n1 / self.d);
        let mut out = vec![];
        for (m, betas) in bb.iter().enumerate() {
            let n = n1 - self.d * m as i64;
            if n < 0 {
                break;
            }
            let alphas = &ba[n as usize];
            for be in betas {
                let w = [self.q[0] * be[0], self.q[1] * be[1], self.q[2] * be[2], self.q[3] * be[3]];
                for al in alphas {
                    if al[0] * w[0] + al[1] * w[1] + al[2] * w[2] + al[3] * w[3] != n2 {
                        continue;
                    }
                    let ab = [al[0], al[1], al[2], al[3], be[0], be[1], be[2], be[3]];
                    if let Some(z) = self.to_zvec(&ab) {
                        debug_assert_eq!(order.nrd_z(&z), target);
                        out.push(z);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// (den A, den B) for an element given on the Z-basis.
    pub fn ab_coords(&self, z: &ZVec) -> [i64; 8] {
        let mut ab = [0i64; 8];
        for c in 0..8 {
            ab[c] = (0..8).map(|r| z[r] * self.to_ab[r][c]).sum();
        }
        ab
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::QuadField;
    use crate::quaternion::QuatAlgebra;

    #[test]
    fn coordinates_roundtrip() {
        let qf = QuadField::new(2).unwrap();
        let alg = QuatAlgebra::new(qf, QuadInt::int(-1), QuadInt::int(-1)).unwrap();
        let o = QuatOrder::standard_maximal_sqrt2(alg).unwrap();
        let ne = NormEquation::new(&o).unwrap();
        for z in [[1, 0, 0, 0, 0, 0, 0, 0], [3, -1, 2, 5, 0, 7, -4, 1]] {
            assert_eq!(ne.to_zvec(&ne.ab_coords(&z)), Some(z));
        }
    }
}
