//! Definite quaternion algebras (a, b / F) over a real quadratic field and
//! O_F-orders with a fast integer model on Z^8.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numfield::AlgElem;
use crate::quadfield::{Level, QuadField, QuadInt};
use crate::ring::{FieldOps, Fp, Q};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use std::sync::Arc;

/// Coordinates on the Z-basis (e_0, w e_0, e_1, w e_1, ...) of an order.
pub type ZVec = [i64; 8];

pub struct QuatAlgebra {
    pub qf: Arc<QuadField>,
    pub a: QuadInt,
    pub b: QuadInt,
}

/// Element x0 + x1 i + x2 j + x3 k with i^2 = a, j^2 = b, k = ij.
#[derive(Clone, Debug, PartialEq)]
pub struct Quat {
    pub c: [AlgElem; 4],
}

impl QuatAlgebra {
    pub fn new(qf: Arc<QuadField>, a: QuadInt, b: QuadInt) -> Result<Arc<QuatAlgebra>> {
        for x in [a, b] {
            if !(qf.sign1(x) < 0 && qf.sign2(x) < 0) {
                return Err(Error::Scope(format!(
                    "{} is not totally negative; only totally definite algebras are supported",
                    qf.render(x)
                )));
            }
        }
        Ok(Arc::new(QuatAlgebra { qf, a, b }))
    }
    fn fa(&self) -> AlgElem {
        self.qf.to_alg(self.a)
    }
    fn fb(&self) -> AlgElem {
        self.qf.to_alg(self.b)
    }
    pub fn zero(&self) -> Quat {
        let z = AlgElem::zero(&self.qf.field);
        Quat { c: [z.clone(), z.clone(), z.clone(), z] }
    }
    pub fn scalar(&self, x: &AlgElem) -> Quat {
        let mut q = self.zero();
        q.c[0] = x.clone();
        q
    }
    pub fn from_coeffs(&self, c: [AlgElem; 4]) -> Quat {
        Quat { c }
    }
    pub fn mul(&self, x: &Quat, y: &Quat) -> Quat {
        let (a, b) = (self.fa(), self.fb());
        let ab = a.mul(&b);
        let x = &x.c;
        let y = &y.c;
        let r0 = x[0].mul(&y[0]).add(&a.mul(&x[1].mul(&y[1]))).add(&b.mul(&x[2].mul(&y[2]))).sub(&ab.mul(&x[3].mul(&y[3])));
        let r1 = x[0].mul(&y[1]).add(&x[1].mul(&y[0])).sub(&b.mul(&x[2].mul(&y[3]))).add(&b.mul(&x[3].mul(&y[2])));
        let r2 = x[0].mul(&y[2]).add(&x[2].mul(&y[0])).add(&a.mul(&x[1].mul(&y[3]))).sub(&a.mul(&x[3].mul(&y[1])));
        let r3 = x[0].mul(&y[3]).add(&x[3].mul(&y[0])).add(&x[1].mul(&y[2])).sub(&x[2].mul(&y[1]));
        Quat { c: [r0, r1, r2, r3] }
    }
    pub fn add(&self, x: &Quat, y: &Quat) -> Quat {
        Quat { c: std::array::from_fn(|i| x.c[i].add(&y.c[i])) }
    }
    pub fn sub(&self, x: &Quat, y: &Quat) -> Quat {
        Quat { c: std::array::from_fn(|i| x.c[i].sub(&y.c[i])) }
    }
    pub fn scale(&self, s: &AlgElem, x: &Quat) -> Quat {
        Quat { c: std::array::from_fn(|i| x.c[i].mul(s)) }
    }
    pub fn conj(&self, x: &Quat) -> Quat {
        Quat { c: [x.c[0].clone(), x.c[1].neg(), x.c[2].neg(), x.c[3].neg()] }
    }
    pub fn nrd(&self, x: &Quat) -> AlgElem {
        let (a, b) = (self.fa(), self.fb());
        let c = &x.c;
        c[0].mul(&c[0]).sub(&a.mul(&c[1].mul(&c[1]))).sub(&b.mul(&c[2].mul(&c[2]))).add(&a.mul(&b).mul(&c[3].mul(&c[3])))
    }
    pub fn trd(&self, x: &Quat) -> AlgElem {
        x.c[0].add(&x.c[0])
    }
}

/// Proof data for maximality.
#[derive(Clone, Debug)]
pub struct MaximalityCertificate {
    /// Generator of the discriminant ideal det(trd(e_m e_n)).
    pub disc_generator: QuadInt,
    /// Generator r with (r)^2 = discriminant ideal, when it exists.
    pub reduced_disc: Option<QuadInt>,
    pub z_gram_det: BigInt,
    pub expected_z_det: BigInt,
    pub maximal: bool,
}

pub struct QuatOrder {
    pub alg: Arc<QuatAlgebra>,
    pub basis: [Quat; 4],
    pub hash: String,
    /// e_m e_n = sum_l mult[m][n][l] e_l.
    mult: [[[QuadInt; 4]; 4]; 4],
    /// nrd(sum x_m e_m) = sum_{m <= n} nrd_form[m][n] x_m x_n.
    nrd_form: [[QuadInt; 4]; 4],
    /// trd(e_m).
    trd_basis: [QuadInt; 4],
    coord_inv: Matrix<AlgElem>,
}

impl QuatOrder {
    pub fn new(alg: Arc<QuatAlgebra>, basis: [Quat; 4]) -> Result<QuatOrder> {
        let qf = alg.qf.clone();
        let f = &qf.field;
        let cols: Vec<Vec<AlgElem>> = basis.iter().map(|e| e.c.to_vec()).collect();
        let m = Matrix::from_cols(cols, AlgElem::zero(f));
        let coord_inv = m
            .inverse()
            .ok_or_else(|| Error::Certificate("order basis is not linearly independent".into()))?;
        let mut order = QuatOrder {
            alg: alg.clone(),
            basis: basis.clone(),
            hash: String::new(),
            mult: [[[QuadInt::int(0); 4]; 4]; 4],
            nrd_form: [[QuadInt::int(0); 4]; 4],
            trd_basis: [QuadInt::int(0); 4],
            coord_inv,
        };
        for mi in 0..4 {
            for ni in 0..4 {
                let p = alg.mul(&basis[mi], &basis[ni]);
                let c = order.f_coords(&p);
                for l in 0..4 {
                    order.mult[mi][ni][l] = qf.from_alg(&c[l]).map_err(|_| {
                        Error::Certificate(format!("basis is not closed under multiplication (e{} e{})", mi, ni))
                    })?;
                }
            }
            order.trd_basis[mi] = qf
                .from_alg(&alg.trd(&basis[mi]))
                .map_err(|_| Error::Certificate("reduced trace not integral".into()))?;
        }
        for mi in 0..4 {
            order.nrd_form[mi][mi] = qf
                .from_alg(&alg.nrd(&basis[mi]))
                .map_err(|_| Error::Certificate("reduced norm not integral".into()))?;
            for ni in mi + 1..4 {
                let t = alg.trd(&alg.mul(&basis[mi], &alg.conj(&basis[ni])));
                order.nrd_form[mi][ni] = qf
                    .from_alg(&t)
                    .map_err(|_| Error::Certificate("reduced norm form not integral".into()))?;
            }
        }
        if !order.contains_one() {
            return Err(Error::Certificate("order does not contain 1".into()));
        }
        order.hash = order.compute_hash();
        Ok(order)
    }

    /// The maximal order with O_F-basis 1, (1+i)/w, (1+j)/w, (1+i+j+k)/2 in (-1,-1 / Q(sqrt 2)).
    pub fn standard_maximal_sqrt2(alg: Arc<QuatAlgebra>) -> Result<QuatOrder> {
        let f = alg.qf.field.clone();
        let q = |a: i64, b: i64| Q::new(BigInt::from(a), BigInt::from(b));
        let el = |c: [(Q, Q); 4]| Quat { c: c.map(|(x, y)| AlgElem::from_coeffs(&f, &[x, y])) };
        let z = (q(0, 1), q(0, 1));
        let h = (q(0, 1), q(1, 2));
        let basis = [
            el([(q(1, 1), q(0, 1)), z.clone(), z.clone(), z.clone()]),
            el([h.clone(), h.clone(), z.clone(), z.clone()]),
            el([h.clone(), z.clone(), h.clone(), z.clone()]),
            el([(q(1, 2), q(0, 1)), (q(1, 2), q(0, 1)), (q(1, 2), q(0, 1)), (q(1, 2), q(0, 1))]),
        ];
        QuatOrder::new(alg, basis)
    }

    fn contains_one(&self) -> bool {
        let one = self.alg.scalar(&AlgElem::one(&self.alg.qf.field));
        let c = self.f_coords(&one);
        c.iter().all(|x| self.alg.qf.from_alg(x).is_ok())
    }

    fn compute_hash(&self) -> String {
        let qf = &self.alg.qf;
        let mut s = format!("d={};a={:?};b={:?};", qf.d, self.alg.a, self.alg.b);
        for e in &self.basis {
            for c in &e.c {
                s.push_str(&format!("{:?},", c.coeffs()));
            }
            s.push(';');
        }
        let digest = Sha256::digest(s.as_bytes());
        digest.iter().map(|b| format!("{:02x}", b)).collect()
    }

    /// Coordinates over F with respect to the order basis.
    pub fn f_coords(&self, x: &Quat) -> Vec<AlgElem> {
        self.coord_inv.mul_vec(&x.c)
    }

    /// Coordinates in Z^8, if x lies in the order.
    pub fn zvec(&self, x: &Quat) -> Result<ZVec> {
        let qf = &self.alg.qf;
        let c = self.f_coords(x);
        let mut v = [0i64; 8];
        for m in 0..4 {
            let q = qf.from_alg(&c[m])?;
            v[2 * m] = q.a as i64;
            v[2 * m + 1] = q.b as i64;
        }
        Ok(v)
    }

    pub fn quat(&self, v: &ZVec) -> Quat {
        let qf = &self.alg.qf;
        let mut acc = self.alg.zero();
        for m in 0..4 {
            let s = qf.to_alg(QuadInt::new(v[2 * m] as i128, v[2 * m + 1] as i128));
            acc = self.alg.add(&acc, &self.alg.scale(&s, &self.basis[m]));
        }
        acc
    }

    pub fn of_coords(v: &ZVec) -> [QuadInt; 4] {
        std::array::from_fn(|m| QuadInt::new(v[2 * m] as i128, v[2 * m + 1] as i128))
    }

    pub fn to_zvec(c: &[QuadInt; 4]) -> ZVec {
        let mut v = [0i64; 8];
        for m in 0..4 {
            v[2 * m] = c[m].a as i64;
            v[2 * m + 1] = c[m].b as i64;
        }
        v
    }

    pub fn mul_z(&self, x: &ZVec, y: &ZVec) -> ZVec {
        let qf = &self.alg.qf;
        let xc = Self::of_coords(x);
        let yc = Self::of_coords(y);
        let mut r = [QuadInt::int(0); 4];
        for m in 0..4 {
            if xc[m] == QuadInt::int(0) {
                continue;
            }
            for n in 0..4 {
                if yc[n] == QuadInt::int(0) {
                    continue;
                }
                let p = qf.mul(xc[m], yc[n]);
                for l in 0..4 {
                    r[l] = qf.add(r[l], qf.mul(p, self.mult[m][n][l]));
                }
            }
        }
        Self::to_zvec(&r)
    }

    pub fn nrd_z(&self, x: &ZVec) -> QuadInt {
        let qf = &self.alg.qf;
        let xc = Self::of_coords(x);
        let mut acc = QuadInt::int(0);
        for m in 0..4 {
            for n in m..4 {
                if self.nrd_form[m][n] == QuadInt::int(0) {
                    continue;
                }
                acc = qf.add(acc, qf.mul(self.nrd_form[m][n], qf.mul(xc[m], xc[n])));
            }
        }
        acc
    }

    pub fn trd_z(&self, x: &ZVec) -> QuadInt {
        let qf = &self.alg.qf;
        let xc = Self::of_coords(x);
        let mut acc = QuadInt::int(0);
        for m in 0..4 {
            acc = qf.add(acc, qf.mul(self.trd_basis[m], xc[m]));
        }
        acc
    }

    /// conj(x) = trd(x) - x.
    pub fn conj_z(&self, x: &ZVec) -> ZVec {
        let t = self.trd_z(x);
        let one = self.one_z();
        let mut r = [0i64; 8];
        // trd(x) * 1 in Z^8 coordinates
        let tq = Self::of_coords(&one);
        let qf = &self.alg.qf;
        let tc: [QuadInt; 4] = std::array::from_fn(|m| qf.mul(t, tq[m]));
        let tv = Self::to_zvec(&tc);
        for i in 0..8 {
            r[i] = tv[i] - x[i];
        }
        r
    }

    pub fn one_z(&self) -> ZVec {
        self.zvec(&self.alg.scalar(&AlgElem::one(&self.alg.qf.field))).expect("1 in order")
    }

    /// Z^8 coordinates of a central element.
    pub fn scalar_z(&self, x: QuadInt) -> ZVec {
        let q = self.alg.scalar(&self.alg.qf.to_alg(x));
        self.zvec(&q).expect("O_F in order")
    }

    /// Integer matrix of y -> x*y (left) or y -> y*x (right) on Z^8, column j = image of basis j.
    pub fn mult_matrix_z(&self, x: &ZVec, left: bool) -> [[i64; 8]; 8] {
        let mut m = [[0i64; 8]; 8];
        for j in 0..8 {
            let mut e = [0i64; 8];
            e[j] = 1;
            let r = if left { self.mul_z(x, &e) } else { self.mul_z(&e, x) };
            for i in 0..8 {
                m[i][j] = r[i];
            }
        }
        m
    }

    /// Twice the Gram matrix of x -> Tr_{F/Q}(lambda nrd(x)) on Z^8.
    pub fn twisted_trace_gram2(&self, lambda: QuadInt) -> [[i64; 8]; 8] {
        let qf = &self.alg.qf;
        let form = |v: &ZVec| -> i128 { qf.trace(qf.mul(lambda, self.nrd_z(v))) };
        let mut g = [[0i64; 8]; 8];
        for i in 0..8 {
            let mut ei = [0i64; 8];
            ei[i] = 1;
            g[i][i] = (2 * form(&ei)) as i64;
            for j in i + 1..8 {
                let mut eij = ei;
                eij[j] = 1;
                let mut ej = [0i64; 8];
                ej[j] = 1;
                let v = form(&eij) - form(&ei) - form(&ej);
                g[i][j] = v as i64;
                g[j][i] = v as i64;
            }
        }
        g
    }

    /// Compare the discriminant with the given algebra discriminant through the
    /// O_F-determinant of the reduced trace pairing and the Z-Gram determinant of
    /// Tr_{F/Q} o trd independently.
    pub fn verify_maximal(&self, algebra_disc: QuadInt) -> Result<MaximalityCertificate> {
        let qf = self.alg.qf.clone();
        let f = &qf.field;
        let mut rows = vec![];
        for m in 0..4 {
            let mut row = vec![];
            for n in 0..4 {
                row.push(self.alg.trd(&self.alg.mul(&self.basis[m], &self.basis[n])));
            }
            rows.push(row);
        }
        let det = Matrix::from_rows(rows, AlgElem::zero(f)).det();
        let disc_generator = qf.from_alg(&det)?;
        let target = qf.mul(algebra_disc, algebra_disc);
        let f_ok = qf.same_ideal(disc_generator, target);
        // reduced discriminant: r with r^2 = D up to units
        let mut reduced = None;
        for u in [QuadInt::int(1), QuadInt::int(-1), qf.unit, qf.neg(qf.unit)] {
            let x = qf.to_alg(qf.mul(disc_generator, u));
            if let Some(s) = x.sqrt() {
                if let Ok(r) = qf.from_alg(&s) {
                    reduced = Some(qf.totally_positive_generator(r).unwrap_or(r));
                    break;
                }
            }
        }
        // Z-route
        let mut g = Matrix::zeros(8, 8, Q::zero());
        let zb: Vec<Quat> = (0..8)
            .map(|i| {
                let mut v = [0i64; 8];
                v[i] = 1;
                self.quat(&v)
            })
            .collect();
        for i in 0..8 {
            for j in 0..8 {
                let t = self.alg.trd(&self.alg.mul(&zb[i], &zb[j])).trace();
                g.set(i, j, t);
            }
        }
        let zdet = g.det();
        let zdet = zdet.to_integer().abs();
        let nd = BigInt::from(qf.norm(algebra_disc).abs());
        let expected = BigInt::from(qf.disc).pow(4) * &nd * &nd;
        let z_ok = zdet == expected;
        if f_ok != z_ok {
            return Err(Error::Certificate(format!(
                "discriminant routes disagree: O_F-determinant {:?}, Z-determinant {}",
                disc_generator, zdet
            )));
        }
        Ok(MaximalityCertificate {
            disc_generator,
            reduced_disc: reduced,
            z_gram_det: zdet,
            expected_z_det: expected,
            maximal: f_ok && z_ok,
        })
    }

    /// A ring map O -> M_2(F_q) modulo a prime level of degree one, found through
    /// a rank-one idempotent; returns the images of the O_F-basis e_m (row-major 2x2).
    pub fn split_mod_level(&self, level: &Level, seed: u64) -> Result<LevelSplitting> {
        if level.is_unit_ideal() {
            return Err(Error::Scope("no splitting needed at the unit level".into()));
        }
        let p = level.norm as u64;
        let red = |x: QuadInt| level.reduce(x);
        let mult: Vec<Vec<Vec<Fp>>> = (0..4)
            .map(|m| (0..4).map(|n| (0..4).map(|l| red(self.mult[m][n][l])).collect()).collect())
            .collect();
        let amul = |x: &[Fp], y: &[Fp]| -> Vec<Fp> {
            let mut r = vec![Fp { v: 0, p }; 4];
            for m in 0..4 {
                for n in 0..4 {
                    let c = x[m].mul_ref(&y[n]);
                    if c.v == 0 {
                        continue;
                    }
                    for l in 0..4 {
                        r[l] = r[l].add_ref(&c.mul_ref(&mult[m][n][l]));
                    }
                }
            }
            r
        };
        let one_c: Vec<Fp> = Self::of_coords(&self.one_z()).iter().map(|&x| red(x)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let x: Vec<Fp> = (0..4).map(|_| Fp { v: rng.gen_range(0..p), p }).collect();
            let t = self.trd_reduced(&x, level);
            let n = self.nrd_reduced(&x, level);
            let mut rs = vec![];
            for r in 0..p {
                let rf = Fp { v: r, p };
                if rf.mul_ref(&rf).sub_ref(&t.mul_ref(&rf)).add_ref(&n).v == 0 {
                    rs.push(rf);
                }
            }
            if rs.len() != 2 {
                continue;
            }
            let (r1, r2) = (rs[0], rs[1]);
            let inv = r1.sub_ref(&r2).inv_ref();
            let e: Vec<Fp> = (0..4).map(|i| x[i].sub_ref(&r2.mul_ref(&one_c[i])).mul_ref(&inv)).collect();
            if amul(&e, &e) != e {
                continue;
            }
            // left ideal A e
            let vecs: Vec<Vec<Fp>> = (0..4)
                .map(|m| {
                    let mut b = vec![Fp { v: 0, p }; 4];
                    b[m] = Fp { v: 1, p };
                    amul(&b, &e)
                })
                .collect();
            let mut chosen: Vec<Vec<Fp>> = vec![];
            for v in &vecs {
                let mut cand = chosen.clone();
                cand.push(v.clone());
                if Matrix::from_cols(cand.clone(), Fp { v: 0, p }).rank() == cand.len() {
                    chosen = cand;
                }
                if chosen.len() == 2 {
                    break;
                }
            }
            if chosen.len() != 2 {
                continue;
            }
            let vm = Matrix::from_cols(chosen.clone(), Fp { v: 0, p });
            let mut images = vec![];
            let mut ok = true;
            for m in 0..4 {
                let mut b = vec![Fp { v: 0, p }; 4];
                b[m] = Fp { v: 1, p };
                let mut img = [Fp { v: 0, p }; 4];
                for j in 0..2 {
                    let w = amul(&b, &chosen[j]);
                    match vm.solve(&w) {
                        Some(c) => {
                            img[j] = c[0];
                            img[2 + j] = c[1];
                        }
                        None => ok = false,
                    }
                }
                images.push(img);
            }
            if !ok {
                continue;
            }
            let s = LevelSplitting { p, images: [images[0], images[1], images[2], images[3]] };
            s.verify(self, level)?;
            return Ok(s);
        }
        Err(Error::Certificate("no splitting modulo the level found".into()))
    }

    fn trd_reduced(&self, x: &[Fp], level: &Level) -> Fp {
        let p = level.norm as u64;
        let mut acc = Fp { v: 0, p };
        for m in 0..4 {
            acc = acc.add_ref(&x[m].mul_ref(&level.reduce(self.trd_basis[m])));
        }
        acc
    }

    fn nrd_reduced(&self, x: &[Fp], level: &Level) -> Fp {
        let p = level.norm as u64;
        let mut acc = Fp { v: 0, p };
        for m in 0..4 {
            for n in m..4 {
                acc = acc.add_ref(&x[m].mul_ref(&x[n]).mul_ref(&level.reduce(self.nrd_form[m][n])));
            }
        }
        acc
    }

    pub fn mult_constant(&self, m: usize, n: usize, l: usize) -> QuadInt {
        self.mult[m][n][l]
    }
}

/// Images of the O_F-basis in M_2(F_q), entries [a, b, c, d] row-major.
#[derive(Clone, Debug)]
pub struct LevelSplitting {
    pub p: u64,
    pub images: [[Fp; 4]; 4],
}

fn m2mul(x: &[Fp; 4], y: &[Fp; 4]) -> [Fp; 4] {
    [
        x[0].mul_ref(&y[0]).add_ref(&x[1].mul_ref(&y[2])),
        x[0].mul_ref(&y[1]).add_ref(&x[1].mul_ref(&y[3])),
        x[2].mul_ref(&y[0]).add_ref(&x[3].mul_ref(&y[2])),
        x[2].mul_ref(&y[1]).add_ref(&x[3].mul_ref(&y[3])),
    ]
}

impl LevelSplitting {
    /// Image of an order element.
    pub fn apply(&self, order: &QuatOrder, level: &Level, v: &ZVec) -> [Fp; 4] {
        let c = QuatOrder::of_coords(v);
        let mut r = [Fp { v: 0, p: self.p }; 4];
        for m in 0..4 {
            let s = level.reduce(c[m]);
            if s.v == 0 {
                continue;
            }
            for i in 0..4 {
                r[i] = r[i].add_ref(&s.mul_ref(&self.images[m][i]));
            }
        }
        let _ = order;
        r
    }

    fn verify(&self, order: &QuatOrder, level: &Level) -> Result<()> {
        let p = self.p;
        for m in 0..4 {
            for n in 0..4 {
                let lhs = m2mul(&self.images[m], &self.images[n]);
                let mut rhs = [Fp { v: 0, p }; 4];
                for l in 0..4 {
                    let c = level.reduce(order.mult_constant(m, n, l));
                    for i in 0..4 {
                        rhs[i] = rhs[i].add_ref(&c.mul_ref(&self.images[l][i]));
                    }
                }
                if lhs != rhs {
                    return Err(Error::Certificate("splitting is not multiplicative".into()));
                }
            }
        }
        let cols: Vec<Vec<Fp>> = self.images.iter().map(|x| x.to_vec()).collect();
        if Matrix::from_cols(cols, Fp { v: 0, p }).rank() != 4 {
            return Err(Error::Certificate("splitting is not surjective".into()));
        }
        let one = order.one_z();
        let id = self.apply(order, level, &one);
        if id != [Fp { v: 1, p }, Fp { v: 0, p }, Fp { v: 0, p }, Fp { v: 1, p }] {
            return Err(Error::Certificate("splitting does not send 1 to the identity".into()));
        }
        Ok(())
    }
}

/// Multiplication table of a finite set of units closed under products.
pub struct UnitGroup {
    pub elements: Vec<ZVec>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

impl UnitGroup {
    pub fn from_elements(order: &QuatOrder, mut elements: Vec<ZVec>) -> Result<UnitGroup> {
        elements.sort();
        let index: std::collections::HashMap<ZVec, usize> =
            elements.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let n = elements.len();
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = order.mul_z(&elements[i], &elements[j]);
                table[i][j] = *index
                    .get(&p)
                    .ok_or_else(|| Error::Certificate("unit set not closed under multiplication".into()))?;
            }
        }
        let one = order.one_z();
        let identity =
            *index.get(&one).ok_or_else(|| Error::Certificate("identity missing from unit set".into()))?;
        let g = UnitGroup { elements, table, identity };
        g.verify_axioms()?;
        Ok(g)
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.order();
        for i in 0..n {
            if self.table[self.identity][i] != i || self.table[i][self.identity] != i {
                return Err(Error::Certificate("identity axiom fails".into()));
            }
            if !(0..n).any(|j| self.table[i][j] == self.identity) {
                return Err(Error::Certificate("inverse axiom fails".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.table[a][b];
                for c in 0..n {
                    if self.table[ab][c] != self.table[a][self.table[b][c]] {
                        return Err(Error::Certificate("associativity fails".into()));
                    }
                }
            }
        }
        Ok(())
    }
    pub fn inverse(&self, i: usize) -> usize {
        (0..self.order()).find(|&j| self.table[i][j] == self.identity).unwrap()
    }
    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != self.identity {
            x = self.table[x][i];
            k += 1;
        }
        k
    }
    pub fn center_size(&self) -> usize {
        let n = self.order();
        (0..n).filter(|&i| (0..n).all(|j| self.table[i][j] == self.table[j][i])).count()
    }
}
