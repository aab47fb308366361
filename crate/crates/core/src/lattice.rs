//! Positive definite integral quadratic forms on Z^n (n <= 8): Gram-matrix LLL
//! and Fincke-Pohst enumeration of exact level sets.

use crate::matrix::Matrix;
use crate::ring::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

pub const MAXDIM: usize = 8;
pub type IVec = [i64; MAXDIM];

fn qi(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

fn round_q(x: &Q) -> BigInt {
    let two = BigInt::from(2);
    (x.numer() * &two + x.denom()).div_floor(&(x.denom() * &two))
}

/// LLL-reduce the basis of a Gram matrix; returns (U, U^T G U) with U unimodular,
/// columns of U being the new basis in old coordinates.
pub fn lll_gram(g: &Matrix<Q>) -> (Matrix<Q>, Matrix<Q>) {
    let n = g.rows;
    let mut u = Matrix::identity(n, Q::zero());
    let delta = Q::new(BigInt::from(3), BigInt::from(4));
    let gso = |h: &Matrix<Q>| -> (Vec<Vec<Q>>, Vec<Q>) {
        let mut mu = vec![vec![Q::zero(); n]; n];
        let mut bb = vec![Q::zero(); n];
        let mut r = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in 0..=i {
                let mut v = h.get(i, j).clone();
                for k in 0..j {
                    v -= &mu[j][k] * &r[i][k];
                }
                r[i][j] = v.clone();
                if j < i {
                    mu[i][j] = v / &bb[j];
                } else {
                    bb[i] = v;
                }
            }
        }
        (mu, bb)
    };
    let mut h = u.transpose().mul(g).mul(&u);
    let mut k = 1;
    let mut guard = 0;
    while k < n {
        guard += 1;
        assert!(guard < 100_000, "LLL did not terminate");
        for j in (0..k).rev() {
            let (mu, _) = gso(&h);
            let q = round_q(&mu[k][j]);
            if !q.is_zero() {
                let qq = Q::from_integer(q);
                for i in 0..n {
                    let v = u.get(i, k) - &qq * u.get(i, j);
                    u.set(i, k, v);
                }
                h = u.transpose().mul(g).mul(&u);
            }
        }
        let (mu, bb) = gso(&h);
        let m = &mu[k][k - 1];
        if bb[k] >= (&delta - m * m) * &bb[k - 1] {
            k += 1;
        } else {
            for i in 0..n {
                let a = u.get(i, k).clone();
                let b = u.get(i, k - 1).clone();
                u.set(i, k, b);
                u.set(i, k - 1, a);
            }
            h = u.transpose().mul(g).mul(&u);
            k = (k - 1).max(1);
        }
    }
    (u, h)
}

/// Q(y) = sum_i qd[i] (y_i + sum_{j>i} qu[i][j] y_j)^2, exact.
pub fn cholesky_exact(g: &Matrix<Q>) -> (Vec<Q>, Vec<Vec<Q>>) {
    let n = g.rows;
    let mut qd = vec![Q::zero(); n];
    let mut qu = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        let mut v = g.get(i, i).clone();
        for k in 0..i {
            v -= &qd[k] * &qu[k][i] * &qu[k][i];
        }
        qd[i] = v;
        for j in i + 1..n {
            let mut w = g.get(i, j).clone();
            for k in 0..i {
                w -= &qd[k] * &qu[k][i] * &qu[k][j];
            }
            qu[i][j] = w / &qd[i];
        }
    }
    (qd, qu)
}

/// Enumerator for vectors with y^T G2 y equal to a given even value, G2 = 2G
/// an integral positive definite matrix.
pub struct ShellEnumerator {
    n: usize,
    u: [[i64; MAXDIM]; MAXDIM],
    g2red: [[i64; MAXDIM]; MAXDIM],
    qd: [f64; MAXDIM],
    qu: [[f64; MAXDIM]; MAXDIM],
}

impl ShellEnumerator {
    pub fn new(g2: &[Vec<i64>]) -> ShellEnumerator {
        let n = g2.len();
        assert!(n >= 1 && n <= MAXDIM);
        let g = Matrix::from_rows(
            g2.iter().map(|r| r.iter().map(|&x| Q::new(BigInt::from(x), BigInt::from(2))).collect()).collect(),
            Q::zero(),
        );
        let (u, h) = lll_gram(&g);
        let (qd, qu) = cholesky_exact(&h);
        assert!(qd.iter().all(|x| x.is_positive()), "form is not positive definite");
        let mut e = ShellEnumerator {
            n,
            u: [[0; MAXDIM]; MAXDIM],
            g2red: [[0; MAXDIM]; MAXDIM],
            qd: [0.0; MAXDIM],
            qu: [[0.0; MAXDIM]; MAXDIM],
        };
        for i in 0..n {
            e.qd[i] = qd[i].to_f64().unwrap();
            for j in 0..n {
                e.u[i][j] = u.get(i, j).to_integer().to_i64().expect("LLL transform overflow");
                let v = h.get(i, j) * qi(2);
                assert!(v.is_integer());
                e.g2red[i][j] = v.to_integer().to_i64().expect("Gram overflow");
                e.qu[i][j] = qu[i][j].to_f64().unwrap();
            }
        }
        e
    }

    fn exact_value2(&self, y: &IVec) -> i128 {
        let mut acc: i128 = 0;
        for i in 0..self.n {
            if y[i] == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for j in 0..self.n {
                row += self.g2red[i][j] as i128 * y[j] as i128;
            }
            acc += row * y[i] as i128;
        }
        acc
    }

    fn to_old(&self, y: &IVec) -> IVec {
        let mut x = [0i64; MAXDIM];
        for i in 0..self.n {
            let mut s = 0i64;
            for j in 0..self.n {
                s += self.u[i][j] * y[j];
            }
            x[i] = s;
        }
        x
    }

    fn center(&self, i: usize, y: &IVec) -> f64 {
        let mut c = 0.0;
        for j in i + 1..self.n {
            c -= self.qu[i][j] * y[j] as f64;
        }
        c
    }

    fn dfs<F: Fn(&IVec) -> bool>(&self, i: usize, y: &mut IVec, partial: f64, c: f64, tol: f64, value2: i128, keep: &F, out: &mut Vec<IVec>) {
        let rem = c - partial;
        if rem < -tol {
            return;
        }
        let ctr = self.center(i, y);
        let rem = rem.max(0.0);
        if i == 0 {
            let r = (rem / self.qd[0]).sqrt();
            let a = (ctr - r).round() as i64;
            let b = (ctr + r).round() as i64;
            for cand in [a, b] {
                y[0] = cand;
                if self.exact_value2(y) == value2 {
                    let x = self.to_old(y);
                    if keep(&x) {
                        out.push(x);
                    }
                }
                if a == b {
                    break;
                }
            }
            y[0] = 0;
            return;
        }
        let r = ((rem + tol) / self.qd[i]).sqrt();
        let lo = (ctr - r).ceil() as i64;
        let hi = (ctr + r).floor() as i64;
        for v in lo..=hi {
            y[i] = v;
            let t = v as f64 - ctr;
            self.dfs(i - 1, y, partial + self.qd[i] * t * t, c, tol, value2, keep, out);
        }
        y[i] = 0;
    }

    /// All x (original coordinates) with x^T G2 x = value2 and keep(x), sorted.
    pub fn shell<F: Fn(&IVec) -> bool + Sync>(&self, value2: i64, keep: F) -> Vec<IVec> {
        assert!(value2 >= 0 && value2 % 2 == 0, "value must be even in G2 units");
        let c = value2 as f64 / 2.0;
        let tol = 1e-7 * (1.0 + c);
        let n = self.n;
        let mut out: Vec<IVec> = if n <= 2 {
            let mut v = vec![];
            let mut y = [0i64; MAXDIM];
            self.dfs(n - 1, &mut y, 0.0, c, tol, value2 as i128, &keep, &mut v);
            v
        } else {
            // prefixes on the two outermost coordinates, enumerated in parallel
            let mut prefixes = vec![];
            let mut y = [0i64; MAXDIM];
            let top = n - 1;
            let r = ((c + tol) / self.qd[top]).sqrt();
            let ctr = self.center(top, &y);
            for v in (ctr - r).ceil() as i64..=(ctr + r).floor() as i64 {
                y[top] = v;
                let t = v as f64 - ctr;
                let p1 = self.qd[top] * t * t;
                let ctr2 = self.center(top - 1, &y);
                let rem = (c - p1).max(0.0);
                let r2 = ((rem + tol) / self.qd[top - 1]).sqrt();
                for w in (ctr2 - r2).ceil() as i64..=(ctr2 + r2).floor() as i64 {
                    let t2 = w as f64 - ctr2;
                    prefixes.push((v, w, p1 + self.qd[top - 1] * t2 * t2));
                }
            }
            prefixes
                .par_iter()
                .map(|&(v, w, p)| {
                    let mut y = [0i64; MAXDIM];
                    y[n - 1] = v;
                    y[n - 2] = w;
                    let mut res = vec![];
                    self.dfs(n - 3, &mut y, p, c, tol, value2 as i128, &keep, &mut res);
                    res
                })
                .flatten()
                .collect()
        };
        out.sort();
        out.dedup();
        out
    }
}

/// Determinant of an integer matrix (exact).
pub fn det_i64(rows: &[Vec<i64>]) -> BigInt {
    let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect(), Q::zero());
    let d = m.det();
    assert!(d.is_integer());
    d.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(g2: &[Vec<i64>], value2: i64, box_: i64) -> Vec<IVec> {
        let n = g2.len();
        let mut out = vec![];
        let total = (2 * box_ + 1).pow(n as u32);
        for mut idx in 0..total {
            let mut x = [0i64; MAXDIM];
            for i in 0..n {
                x[i] = idx % (2 * box_ + 1) - box_;
                idx /= 2 * box_ + 1;
            }
            let mut v = 0;
            for i in 0..n {
                for j in 0..n {
                    v += g2[i][j] * x[i] * x[j];
                }
            }
            if v == value2 {
                out.push(x);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn sums_of_four_squares() {
        // r_4(n) = 8 * sum of divisors not divisible by 4
        let g2: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| if i == j { 2 } else { 0 }).collect()).collect();
        let e = ShellEnumerator::new(&g2);
        assert_eq!(e.shell(2 * 1, |_| true).len(), 8);
        assert_eq!(e.shell(2 * 5, |_| true).len(), 48);
        assert_eq!(e.shell(2 * 12, |_| true).len(), 8 * (1 + 2 + 3 + 6));
    }

    #[test]
    fn skewed_form_matches_brute_force() {
        let g2 = vec![
            vec![10, 7, 3],
            vec![7, 12, 5],
            vec![3, 5, 8],
        ];
        let e = ShellEnumerator::new(&g2);
        for v in [8, 10, 24, 40] {
            assert_eq!(e.shell(v, |_| true), brute(&g2, v, 8));
        }
    }
}
