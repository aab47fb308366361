//! Weight modules Sym^(k1-2) (x) Sym^(k2-2) twisted by powers of the reduced norm,
//! tensored with the character-twisted permutation module on P^1(O_F / level).

use crate::error::{Error, Result};
use crate::numfield::{adjoin_square_root, embed_base, AlgElem, FieldSpec};
use crate::quadfield::{EpsilonChar, Level, QuadField, QuadInt};
use crate::quaternion::{LevelSplitting, QuatOrder, ZVec};
use crate::ring::{FieldOps, Fp, Q};
use crate::matrix::Matrix;
use std::sync::Arc;

/// 2x2 matrix, row-major.
pub type M2 = [AlgElem; 4];

pub fn m2_mul(x: &M2, y: &M2) -> M2 {
    [
        x[0].mul(&y[0]).add(&x[1].mul(&y[2])),
        x[0].mul(&y[1]).add(&x[1].mul(&y[3])),
        x[2].mul(&y[0]).add(&x[3].mul(&y[2])),
        x[2].mul(&y[1]).add(&x[3].mul(&y[3])),
    ]
}

pub fn m2_det(x: &M2) -> AlgElem {
    x[0].mul(&x[3]).sub(&x[1].mul(&x[2]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec {
    pub k: [i64; 2],
    /// Exponents e_i of (sigma_i o nrd)^(e_i); zero for the naive normalization t' = 2 - k.
    pub nrd_twist: [i64; 2],
}

impl WeightSpec {
    pub fn naive(k: [i64; 2]) -> Result<WeightSpec> {
        if k.iter().any(|&x| x < 2) {
            return Err(Error::Config(format!("weights must be at least 2, got {:?}", k)));
        }
        Ok(WeightSpec { k, nrd_twist: [0, 0] })
    }
    pub fn sym_degrees(&self) -> [usize; 2] {
        [(self.k[0] - 2) as usize, (self.k[1] - 2) as usize]
    }
    /// The naive twist parameter t' = 2 - k.
    pub fn naive_t(&self) -> [i64; 2] {
        [2 - self.k[0], 2 - self.k[1]]
    }
    /// Exponent of sigma_i(z) in the action of a central z: k_i - 2 + 2 e_i.
    pub fn central_exponents(&self) -> [i64; 2] {
        [self.k[0] - 2 + 2 * self.nrd_twist[0], self.k[1] - 2 + 2 * self.nrd_twist[1]]
    }
}

/// Symmetric power of a 2x2 matrix on the basis X^(n-j) Y^j.
pub fn sym_power(m: &M2, n: usize) -> Matrix<AlgElem> {
    let z = m[0].zero_like();
    let one = m[0].one_like();
    let mut out = Matrix::zeros(n + 1, n + 1, z.clone());
    // images of X and Y as coefficient vectors in powers of Y
    let ex = vec![m[0].clone(), m[2].clone()];
    let ey = vec![m[1].clone(), m[3].clone()];
    let pmul = |a: &Vec<AlgElem>, b: &Vec<AlgElem>| -> Vec<AlgElem> {
        let mut r = vec![z.clone(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] = r[i + j].add(&x.mul(y));
            }
        }
        r
    };
    let mut xpow = vec![vec![one.clone()]];
    let mut ypow = vec![vec![one.clone()]];
    for _ in 0..n {
        let a = pmul(xpow.last().unwrap(), &ex);
        xpow.push(a);
        let b = pmul(ypow.last().unwrap(), &ey);
        ypow.push(b);
    }
    for i in 0..=n {
        let col = pmul(&xpow[n - i], &ypow[i]);
        for (j, c) in col.into_iter().enumerate() {
            out.set(j, i, c);
        }
    }
    out
}

/// Embeddings of the order into M_2(K) for K = F(sqrt a), one per real place.
pub struct Splittings {
    pub k: Arc<FieldSpec>,
    /// Images of sqrt d under sigma1, sigma2.
    pub w_images: [AlgElem; 2],
    /// Images of the eight Z-basis elements of the order under each embedding.
    basis_images: [Vec<M2>; 2],
}

impl Splittings {
    pub fn new(order: &QuatOrder) -> Result<Splittings> {
        let alg = &order.alg;
        let qf = &alg.qf;
        if alg.a.b != 0 {
            return Err(Error::Scope("the splitting needs a rational first structure constant a".into()));
        }
        let f = &qf.field;
        let a_f = qf.to_alg(alg.a);
        let k = adjoin_square_root(f, &a_f, "K", "z")?;
        let s = k.tower().unwrap().sqrt_elem(&k);
        let w1 = embed_base(&k, &AlgElem::gen(f));
        let w_images = [w1.clone(), w1.neg()];
        let sigma = |x: &AlgElem, j: usize| -> AlgElem {
            let c = x.coeffs();
            AlgElem::from_rational(&k, &c[0]).add(&w_images[j].scale_q(&c[1]))
        };
        let zero = AlgElem::zero(&k);
        let one = AlgElem::one(&k);
        let mut basis_images: [Vec<M2>; 2] = [vec![], vec![]];
        for j in 0..2 {
            let b = sigma(&qf.to_alg(alg.b), j);
            let im = [s.clone(), zero.clone(), zero.clone(), s.neg()];
            let jm = [zero.clone(), b.clone(), one.clone(), zero.clone()];
            let km = m2_mul(&im, &jm);
            let id = [one.clone(), zero.clone(), zero.clone(), one.clone()];
            for t in 0..8 {
                let mut v = [0i64; 8];
                v[t] = 1;
                let q = order.quat(&v);
                let c: Vec<AlgElem> = q.c.iter().map(|x| sigma(x, j)).collect();
                let mut m: M2 = std::array::from_fn(|_| zero.clone());
                for (coef, basis) in c.iter().zip([&id, &im, &jm, &km]) {
                    for e in 0..4 {
                        m[e] = m[e].add(&coef.mul(&basis[e]));
                    }
                }
                basis_images[j].push(m);
            }
        }
        let sp = Splittings { k, w_images, basis_images };
        sp.verify(order)?;
        Ok(sp)
    }

    /// sigma_j of an element of F.
    pub fn sigma(&self, x: &AlgElem, j: usize) -> AlgElem {
        let c = x.coeffs();
        AlgElem::from_rational(&self.k, &c[0]).add(&self.w_images[j].scale_q(&c[1]))
    }

    pub fn sigma_int(&self, qf: &QuadField, x: QuadInt, j: usize) -> AlgElem {
        self.sigma(&qf.to_alg(x), j)
    }

    pub fn image(&self, x: &ZVec, j: usize) -> M2 {
        let z = AlgElem::zero(&self.k);
        let mut m: M2 = std::array::from_fn(|_| z.clone());
        for t in 0..8 {
            if x[t] == 0 {
                continue;
            }
            let c = Q::from_integer(x[t].into());
            for e in 0..4 {
                m[e] = m[e].add(&self.basis_images[j][t][e].scale_q(&c));
            }
        }
        m
    }

    fn verify(&self, order: &QuatOrder) -> Result<()> {
        let qf = &order.alg.qf;
        for s in 0..8 {
            for t in 0..8 {
                let mut a = [0i64; 8];
                a[s] = 1;
                let mut b = [0i64; 8];
                b[t] = 1;
                let ab = order.mul_z(&a, &b);
                for j in 0..2 {
                    if m2_mul(&self.image(&a, j), &self.image(&b, j)) != self.image(&ab, j) {
                        return Err(Error::Certificate("splitting is not multiplicative".into()));
                    }
                }
            }
            let mut a = [0i64; 8];
            a[s] = 1;
            for j in 0..2 {
                if m2_det(&self.image(&a, j)) != self.sigma_int(qf, order.nrd_z(&a), j) {
                    return Err(Error::Certificate("determinant differs from the reduced norm".into()));
                }
            }
        }
        Ok(())
    }
}

/// Structured action of one element: rho(x) = scalar * (A (x) B (x) P).
#[derive(Clone, Debug)]
pub struct Action {
    pub sym: [Matrix<AlgElem>; 2],
    pub scalar: AlgElem,
    /// Point h goes to perm[h].0 with sign perm[h].1.
    pub perm: Vec<(usize, i32)>,
}

pub struct LevelModule {
    pub order: Arc<QuatOrder>,
    pub weight: WeightSpec,
    pub eps: EpsilonChar,
    pub splittings: Splittings,
    level_split: Option<LevelSplitting>,
    pub dims: [usize; 2],
    pub npts: usize,
    pub dim: usize,
}

impl LevelModule {
    pub fn new(order: Arc<QuatOrder>, weight: WeightSpec, eps: EpsilonChar) -> Result<LevelModule> {
        let splittings = Splittings::new(&order)?;
        let level_split = if eps.level.is_unit_ideal() {
            None
        } else {
            Some(order.split_mod_level(&eps.level, 7)?)
        };
        let sd = weight.sym_degrees();
        let dims = [sd[0] + 1, sd[1] + 1];
        let npts = eps.level.p1_points().len();
        Ok(LevelModule { order, weight, eps, splittings, level_split, dims, npts, dim: dims[0] * dims[1] * npts })
    }

    pub fn k(&self) -> &Arc<FieldSpec> {
        &self.splittings.k
    }

    pub fn level(&self) -> &Level {
        &self.eps.level
    }

    /// The image of x in M_2(F_q).
    pub fn level_image(&self, x: &ZVec) -> Option<[Fp; 4]> {
        self.level_split.as_ref().map(|s| s.apply(&self.order, &self.eps.level, x))
    }

    pub fn p1_perm(&self, x: &ZVec) -> Result<Vec<(usize, i32)>> {
        let Some(g) = self.level_image(x) else {
            return Ok(vec![(0, 1)]);
        };
        let p = g[0].p;
        let det = g[0].mul_ref(&g[3]).sub_ref(&g[1].mul_ref(&g[2]));
        if det.v == 0 {
            return Err(Error::NotCoprime("element is not invertible modulo the level".into()));
        }
        let lvl = &self.eps.level;
        let rep = |h: usize| -> [Fp; 4] {
            let one = Fp { v: 1, p };
            let zero = Fp { v: 0, p };
            if h == self.npts - 1 {
                [one, zero, zero, one]
            } else {
                [Fp { v: h as u64, p }, one.neg_ref(), one, zero]
            }
        };
        let mul = |x: &[Fp; 4], y: &[Fp; 4]| -> [Fp; 4] {
            [
                x[0].mul_ref(&y[0]).add_ref(&x[1].mul_ref(&y[2])),
                x[0].mul_ref(&y[1]).add_ref(&x[1].mul_ref(&y[3])),
                x[2].mul_ref(&y[0]).add_ref(&x[3].mul_ref(&y[2])),
                x[2].mul_ref(&y[1]).add_ref(&x[3].mul_ref(&y[3])),
            ]
        };
        let inv = |x: &[Fp; 4]| -> [Fp; 4] {
            let d = x[0].mul_ref(&x[3]).sub_ref(&x[1].mul_ref(&x[2])).inv_ref();
            [x[3].mul_ref(&d), x[1].neg_ref().mul_ref(&d), x[2].neg_ref().mul_ref(&d), x[0].mul_ref(&d)]
        };
        let mut out = vec![];
        for h in 0..self.npts {
            let r = rep(h);
            let gh = mul(&g, &r);
            let h2 = lvl.p1_index(gh[0], gh[2]);
            let b = mul(&inv(&rep(h2)), &gh);
            debug_assert_eq!(b[2].v, 0);
            out.push((h2, self.eps.eval_fp(b[3])));
        }
        Ok(out)
    }

    pub fn act(&self, x: &ZVec) -> Result<Action> {
        let qf = &self.order.alg.qf;
        let n = self.order.nrd_z(x);
        if !self.eps.level.is_coprime(n) {
            return Err(Error::NotCoprime(format!("nrd = {} meets the level", qf.render(n))));
        }
        let sd = self.weight.sym_degrees();
        let sym = [
            sym_power(&self.splittings.image(x, 0), sd[0]),
            sym_power(&self.splittings.image(x, 1), sd[1]),
        ];
        let mut scalar = AlgElem::one(self.k());
        for j in 0..2 {
            let e = self.weight.nrd_twist[j];
            if e != 0 {
                scalar = scalar.mul(&self.splittings.sigma_int(qf, n, j).pow(e));
            }
        }
        let perm = self.p1_perm(x)?;
        Ok(Action { sym, scalar, perm })
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize, pt: usize) -> usize {
        (i1 * self.dims[1] + i2) * self.npts + pt
    }

    /// v -> rho(x) v using the tensor structure.
    pub fn apply(&self, a: &Action, v: &[AlgElem]) -> Vec<AlgElem> {
        let z = AlgElem::zero(self.k());
        let (d1, d2) = (self.dims[0], self.dims[1]);
        let mut out = vec![z.clone(); self.dim];
        for pt in 0..self.npts {
            // block V[i1][i2]
            if (0..d1).all(|i1| (0..d2).all(|i2| v[self.index(i1, i2, pt)].is_zero())) {
                continue;
            }
            let (pt2, sign) = a.perm[pt];
            if sign == 0 {
                continue;
            }
            // W = A V B^T
            let mut tmp = vec![z.clone(); d1 * d2];
            for j1 in 0..d1 {
                for i1 in 0..d1 {
                    let c = a.sym[0].get(j1, i1);
                    if c.is_zero() {
                        continue;
                    }
                    for i2 in 0..d2 {
                        let x = &v[self.index(i1, i2, pt)];
                        if !x.is_zero() {
                            tmp[j1 * d2 + i2] = tmp[j1 * d2 + i2].add(&c.mul(x));
                        }
                    }
                }
            }
            for j1 in 0..d1 {
                for j2 in 0..d2 {
                    let mut acc = z.clone();
                    for i2 in 0..d2 {
                        let c = a.sym[1].get(j2, i2);
                        let t = &tmp[j1 * d2 + i2];
                        if !c.is_zero() && !t.is_zero() {
                            acc = acc.add(&c.mul(t));
                        }
                    }
                    if acc.is_zero() {
                        continue;
                    }
                    let acc = if sign < 0 { acc.neg() } else { acc };
                    let idx = self.index(j1, j2, pt2);
                    out[idx] = out[idx].add(&acc);
                }
            }
        }
        if !a.scalar.is_one_elem() {
            for x in out.iter_mut() {
                if !x.is_zero() {
                    *x = x.mul(&a.scalar);
                }
            }
        }
        out
    }

    /// The full dim x dim matrix of rho(x).
    pub fn full_matrix(&self, a: &Action) -> Matrix<AlgElem> {
        let z = AlgElem::zero(self.k());
        let mut perm = Matrix::zeros(self.npts, self.npts, z.clone());
        for (h, &(h2, s)) in a.perm.iter().enumerate() {
            perm.set(h2, h, AlgElem::from_int(self.k(), s as i64));
        }
        a.sym[0].kron(&a.sym[1]).kron(&perm).scale(&a.scalar)
    }

    /// Trace of rho(x), from the tensor factors.
    pub fn trace(&self, a: &Action) -> AlgElem {
        let fixed: i64 = a.perm.iter().enumerate().filter(|(h, (h2, _))| h == h2).map(|(_, (_, s))| *s as i64).sum();
        a.sym[0].trace().mul(&a.sym[1].trace()).mul(&a.scalar).scale_q(&Q::from_integer(fixed.into()))
    }

    /// The scalar by which a central element z of O_F acts: sigma1(z)^c1 sigma2(z)^c2 eps(z).
    pub fn central_scalar(&self, z: QuadInt) -> AlgElem {
        let qf = &self.order.alg.qf;
        let c = self.weight.central_exponents();
        let mut s = AlgElem::from_int(self.k(), self.eps.eval(z) as i64);
        for j in 0..2 {
            s = s.mul(&self.splittings.sigma_int(qf, z, j).pow(c[j]));
        }
        s
    }

    /// Check that central elements act through the expected scalar.
    pub fn central_character_check(&self, zs: &[QuadInt]) -> Result<()> {
        for &z in zs {
            let a = self.act(&self.order.scalar_z(z))?;
            let m = self.full_matrix(&a);
            let want = Matrix::identity(self.dim, AlgElem::zero(self.k())).scale(&self.central_scalar(z));
            if m != want {
                return Err(Error::Certificate(format!(
                    "central element {} does not act by the expected scalar",
                    self.order.alg.qf.render(z)
                )));
            }
        }
        Ok(())
    }
}

/// Whether a vector is identically zero.
pub fn is_zero_vec(v: &[AlgElem]) -> bool {
    v.iter().all(|x| x.is_zero())
}
