//! Dense matrices over any `FieldOps` entry type.

use crate::poly::Poly;
use crate::ring::FieldOps;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T: FieldOps> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
    pub zero: T,
}

impl<T: FieldOps> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, zero: T) -> Self {
        Matrix { rows, cols, data: vec![zero.clone(); rows * cols], zero }
    }
    pub fn identity(n: usize, zero: T) -> Self {
        let mut m = Matrix::zeros(n, n, zero.clone());
        for i in 0..n {
            m.set(i, i, zero.one_like());
        }
        m
    }
    pub fn from_rows(rows: Vec<Vec<T>>, zero: T) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let data: Vec<T> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged matrix rows");
        Matrix { rows: r, cols: c, data, zero }
    }
    pub fn from_cols(cols: Vec<Vec<T>>, zero: T) -> Self {
        Matrix::from_rows(cols, zero).transpose()
    }
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }
    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn transpose(&self) -> Self {
        let mut m = Matrix::zeros(self.cols, self.rows, self.zero.clone());
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut m = Matrix::zeros(self.rows, o.cols, self.zero.clone());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_elem() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero_elem() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    m.data[idx] = m.data[idx].add_ref(&a.mul_ref(b));
                }
            }
        }
        m
    }
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.zero.clone();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero_elem() && !v[j].is_zero_elem() {
                        acc = acc.add_ref(&a.mul_ref(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }
    pub fn add(&self, o: &Self) -> Self {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect();
        Matrix { data, ..self.clone() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect();
        Matrix { data, ..self.clone() }
    }
    pub fn scale(&self, c: &T) -> Self {
        let data = self.data.iter().map(|a| a.mul_ref(c)).collect();
        Matrix { data, ..self.clone() }
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero_elem())
    }
    pub fn trace(&self) -> T {
        let mut acc = self.zero.clone();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add_ref(self.get(i, i));
        }
        acc
    }
    pub fn map<U: FieldOps>(&self, zero: U, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect(), zero }
    }
    pub fn kron(&self, o: &Self) -> Self {
        let mut m = Matrix::zeros(self.rows * o.rows, self.cols * o.cols, self.zero.clone());
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero_elem() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        m.set(i * o.rows + k, j * o.cols + l, a.mul_ref(o.get(k, l)));
                    }
                }
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero_elem()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv_ref();
            for j in 0..m.cols {
                let v = m.get(r, j).mul_ref(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero_elem() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(i, j).sub_ref(&f.mul_ref(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
    /// Basis of the right kernel {x : A x = 0}.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.zero.clone(); self.cols];
                v[f] = self.zero.one_like();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = r.get(i, f).neg_ref();
                }
                v
            })
            .collect()
    }
    /// Some solution of A x = b, if consistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let mut aug = Matrix::zeros(self.rows, self.cols + 1, self.zero.clone());
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![self.zero.clone(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n, self.zero.clone());
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.zero.one_like());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n, self.zero.clone());
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.zero.one_like();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero_elem()) else {
                return self.zero.clone();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.neg_ref();
            }
            let piv = m.get(c, c).clone();
            det = det.mul_ref(&piv);
            let inv = piv.inv_ref();
            for i in c + 1..n {
                let f = m.get(i, c).mul_ref(&inv);
                if f.is_zero_elem() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).sub_ref(&f.mul_ref(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }
    /// Characteristic polynomial det(X - A) via Hessenberg reduction.
    pub fn charpoly(&self) -> Poly<T> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let z = self.zero.clone();
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h.get(i, m - 1).is_zero_elem()) else {
                continue;
            };
            if i != m {
                for j in 0..n {
                    h.data.swap(i * n + j, m * n + j);
                }
                for j in 0..n {
                    h.data.swap(j * n + i, j * n + m);
                }
            }
            let t = h.get(m, m - 1).inv_ref();
            for i in m + 1..n {
                let u = h.get(i, m - 1).mul_ref(&t);
                if u.is_zero_elem() {
                    continue;
                }
                for j in 0..n {
                    let v = h.get(i, j).sub_ref(&u.mul_ref(h.get(m, j)));
                    h.set(i, j, v);
                }
                for j in 0..n {
                    let v = h.get(j, m).add_ref(&u.mul_ref(h.get(j, i)));
                    h.set(j, m, v);
                }
            }
        }
        let x = Poly::x(z.one_like());
        let mut p: Vec<Poly<T>> = vec![Poly::constant(z.one_like())];
        for m in 0..n {
            let mut next = x.sub(&Poly::constant(h.get(m, m).clone())).mul(&p[m]);
            let mut t = z.one_like();
            for i in 1..=m {
                t = t.mul_ref(h.get(m - i + 1, m - i));
                let c = h.get(m - i, m).mul_ref(&t);
                next = next.sub(&p[m - i].scale(&c));
            }
            p.push(next);
        }
        p.pop().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q_int, Q};
    use num_traits::Zero;

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect(), Q::zero())
    }

    #[test]
    fn charpoly_matches_cayley_hamilton_and_det() {
        let a = qm(&[&[2, 1, 0, 3], &[0, -1, 4, 1], &[5, 2, 2, 0], &[1, 1, 1, 1]]);
        let p = a.charpoly();
        assert_eq!(p.degree(), Some(4));
        let mut acc = Matrix::zeros(4, 4, Q::zero());
        let mut pw = Matrix::identity(4, Q::zero());
        for c in &p.coeffs {
            acc = acc.add(&pw.scale(c));
            pw = pw.mul(&a);
        }
        assert!(acc.is_zero());
        assert_eq!(p.coeff(0), a.det());
        assert_eq!(p.coeff(3), -a.trace());
    }

    #[test]
    fn inverse_and_kernel() {
        let a = qm(&[&[1, 2], &[3, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2, Q::zero()));
        let s = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = s.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(s.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }
}
