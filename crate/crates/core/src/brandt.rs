//! Spaces of invariants under the norm-one units, Hecke operators as orbit sums,
//! and eigensystems over a CM quadratic extension of F.

use crate::enumerate::{enumerate_by_norm, norm_one_group, unit_orbits};
use crate::error::{Error, Result};
use crate::intrep::IntegralModel;
use crate::matrix::Matrix;
use crate::numfield::{adjoin_square_root, descend, embed_base, factor_over_field, join_tower, split_tower, AlgElem, FieldSpec};
use crate::poly::Poly;
use crate::quadfield::{QuadField, QuadInt};
use crate::quaternion::{QuatOrder, UnitGroup};
use crate::ring::Q;
use crate::weight::{Action, LevelModule};
use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use std::path::PathBuf;
use std::sync::Arc;

pub struct HeckeSetup {
    pub qf: Arc<QuadField>,
    pub order: Arc<QuatOrder>,
    pub units: UnitGroup,
    pub module: LevelModule,
    pub cache: Option<PathBuf>,
    unit_actions: Vec<Action>,
}

impl HeckeSetup {
    pub fn new(module: LevelModule, cache: Option<PathBuf>) -> Result<HeckeSetup> {
        let order = module.order.clone();
        let qf = order.alg.qf.clone();
        let units = norm_one_group(&order, cache.as_deref())?;
        let unit_actions = units.elements.iter().map(|g| module.act(g)).collect::<Result<Vec<_>>>()?;
        Ok(HeckeSetup { qf, order, units, module, cache, unit_actions })
    }
    pub fn k(&self) -> &Arc<FieldSpec> {
        self.module.k()
    }
    pub fn f(&self) -> &Arc<FieldSpec> {
        &self.qf.field
    }
    /// (1/|G|) sum_g rho(g) v.
    pub fn project(&self, v: &[AlgElem]) -> Vec<AlgElem> {
        let k = self.k();
        let mut acc = vec![AlgElem::zero(k); v.len()];
        for a in &self.unit_actions {
            let w = self.module.apply(a, v);
            for (x, y) in acc.iter_mut().zip(w) {
                *x = x.add(&y);
            }
        }
        let inv = Q::new(BigInt::from(1), BigInt::from(self.units.order()));
        acc.iter().map(|x| x.scale_q(&inv)).collect()
    }
    /// Dimension of the invariants from the character: (1/|G|) sum tr rho(g).
    pub fn character_dimension(&self) -> Result<usize> {
        let k = self.k();
        let mut s = AlgElem::zero(k);
        for a in &self.unit_actions {
            s = s.add(&self.module.trace(a));
        }
        let d = s.scale_q(&Q::new(BigInt::from(1), BigInt::from(self.units.order())));
        let q = d.as_rational().ok_or_else(|| Error::Certificate("character average is not rational".into()))?;
        if !q.is_integer() || q.is_negative() {
            return Err(Error::Certificate(format!("character average {} is not a natural number", q)));
        }
        Ok(q.to_integer().try_into().unwrap())
    }
}

#[derive(Clone, Debug)]
pub struct InvariantSpace {
    /// Rows in reduced echelon form over K.
    pub basis: Vec<Vec<AlgElem>>,
    pub pivots: Vec<usize>,
}

impl InvariantSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    /// Coordinates of a vector of the space on the basis; None if it is not in the space.
    pub fn coordinates(&self, w: &[AlgElem]) -> Option<Vec<AlgElem>> {
        let c: Vec<AlgElem> = self.pivots.iter().map(|&p| w[p].clone()).collect();
        let mut r = w.to_vec();
        for (ci, b) in c.iter().zip(&self.basis) {
            if ci.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = x.sub(&ci.mul(y));
                }
            }
        }
        if r.iter().all(|x| x.is_zero()) {
            Some(c)
        } else {
            None
        }
    }
}

/// The invariants of the norm-one units, spanned by projections of standard vectors,
/// with the dimension certified by the character formula.
pub fn invariant_space(setup: &HeckeSetup) -> Result<InvariantSpace> {
    let dim = setup.character_dimension()?;
    let k = setup.k();
    let n = setup.module.dim;
    let mut rows: Vec<Vec<AlgElem>> = vec![];
    for i in 0..n {
        if rows.len() == dim {
            break;
        }
        let mut e = vec![AlgElem::zero(k); n];
        e[i] = AlgElem::one(k);
        let p = setup.project(&e);
        if p.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut cand = rows.clone();
        cand.push(p);
        if Matrix::from_rows(cand.clone(), AlgElem::zero(k)).rank() == cand.len() {
            rows = cand;
        }
    }
    if rows.len() != dim {
        return Err(Error::Certificate(format!(
            "projection spans {} dimensions but the character gives {}",
            rows.len(),
            dim
        )));
    }
    if dim == 0 {
        return Ok(InvariantSpace { basis: vec![], pivots: vec![] });
    }
    let (r, pivots) = Matrix::from_rows(rows, AlgElem::zero(k)).rref();
    let basis: Vec<Vec<AlgElem>> = (0..dim).map(|i| r.row(i)).collect();
    for b in &basis {
        for a in &setup.unit_actions {
            if setup.module.apply(a, b) != *b {
                return Err(Error::Certificate("basis vector is not invariant".into()));
            }
        }
    }
    Ok(InvariantSpace { basis, pivots })
}

#[derive(Clone, Debug)]
pub struct HeckeMatrix {
    pub target: QuadInt,
    /// Column j holds the coordinates of T(b_j).
    pub matrix: Matrix<AlgElem>,
    pub elements: usize,
    pub orbits: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumRoute {
    /// Integer accumulation of the full matrix (falls back to Exact on overflow).
    Integral,
    /// Exact field arithmetic, orbit by orbit.
    Exact,
}

/// T(target) = sum over right cosets x Gamma of rho(x), computed as the sum of
/// rho(conj(a)) over left-orbit representatives a of {nrd = target}.
pub fn hecke_t(setup: &HeckeSetup, space: &InvariantSpace, target: QuadInt) -> Result<HeckeMatrix> {
    hecke_t_via(setup, space, target, SumRoute::Integral)
}

pub fn hecke_t_via(setup: &HeckeSetup, space: &InvariantSpace, target: QuadInt, route: SumRoute) -> Result<HeckeMatrix> {
    let qf = &setup.qf;
    if !setup.module.level().is_coprime(target) {
        return Err(Error::NotCoprime(format!("{} meets the level", qf.render(target))));
    }
    let els = enumerate_by_norm(&setup.order, target, setup.cache.as_deref())?;
    let reps = unit_orbits(&setup.order, &setup.units, &els)?;
    let conj: Vec<_> = reps.iter().map(|a| setup.order.conj_z(a)).collect();
    let k = setup.k();
    let d = space.dim();
    let fast = match route {
        SumRoute::Integral => IntegralModel::new(&setup.module).and_then(|m| m.sum(&conj)),
        SumRoute::Exact => None,
    };
    let images: Vec<Vec<AlgElem>> = match fast {
        Some(m) => {
            // the nrd twist is constant on the fiber
            let scalar = setup.module.act(&conj[0])?.scalar;
            space
                .basis
                .iter()
                .map(|b| m.mul_vec(b).into_iter().map(|x| if x.is_zero() { x } else { x.mul(&scalar) }).collect())
                .collect()
        }
        None => exact_images(setup, space, &conj)?,
    };
    let mut cols = vec![];
    for w in &images {
        let c = space
            .coordinates(w)
            .ok_or_else(|| Error::Certificate("Hecke image leaves the invariant space".into()))?;
        cols.push(c);
    }
    let matrix = if d == 0 { Matrix::zeros(0, 0, AlgElem::zero(k)) } else { Matrix::from_cols(cols, AlgElem::zero(k)) };
    Ok(HeckeMatrix { target, matrix, elements: els.len(), orbits: reps.len() })
}

fn exact_images(setup: &HeckeSetup, space: &InvariantSpace, conj: &[crate::quaternion::ZVec]) -> Result<Vec<Vec<AlgElem>>> {
    let k = setup.k();
    let n = setup.module.dim;
    let d = space.dim();
    let zero_block = || vec![vec![AlgElem::zero(k); n]; d];
    let sums = conj
        .par_chunks(16)
        .map(|chunk| -> Result<Vec<Vec<AlgElem>>> {
            let mut acc = zero_block();
            for x in chunk {
                let act = setup.module.act(x)?;
                for (j, b) in space.basis.iter().enumerate() {
                    let w = setup.module.apply(&act, b);
                    for (s, y) in acc[j].iter_mut().zip(w) {
                        if !y.is_zero() {
                            *s = s.add(&y);
                        }
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = zero_block();
    for s in sums {
        for j in 0..d {
            for (x, y) in total[j].iter_mut().zip(&s[j]) {
                if !y.is_zero() {
                    *x = x.add(y);
                }
            }
        }
    }
    Ok(total)
}

/// S(target): the action of the central element, read off the basis and checked
/// against sigma1^c1 sigma2^c2 eps. Returned as an element of F.
pub fn hecke_s(setup: &HeckeSetup, space: &InvariantSpace, target: QuadInt) -> Result<AlgElem> {
    let qf = &setup.qf;
    if !setup.module.level().is_coprime(target) {
        return Err(Error::NotCoprime(format!("{} meets the level", qf.render(target))));
    }
    let act = setup.module.act(&setup.order.scalar_z(target))?;
    let s = setup.module.central_scalar(target);
    for b in &space.basis {
        let w = setup.module.apply(&act, b);
        let want: Vec<AlgElem> = b.iter().map(|x| x.mul(&s)).collect();
        if w != want {
            return Err(Error::Certificate("central element does not act by a scalar".into()));
        }
    }
    descend(&s).ok_or_else(|| Error::Certificate("central scalar is not in F".into()))
}

/// One Galois orbit of eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    /// Field of eigenvalues over F: F itself or F(b).
    pub l: Arc<FieldSpec>,
    /// b^2 in F when l = F(b).
    pub b_square: Option<AlgElem>,
    /// Field of the eigenvector coordinates: K or K(b).
    pub kb: Arc<FieldSpec>,
    pub vector: Vec<AlgElem>,
    pub probe: QuadInt,
    /// Eigenvalue of the probe.
    pub probe_value: AlgElem,
}

fn k_to_f(x: &AlgElem) -> Result<AlgElem> {
    descend(x).ok_or_else(|| Error::Certificate(format!("{} does not lie in F", x)))
}

/// Canonical b^2 for a discriminant: delta divided by the largest square of a
/// totally positive integral element, then the u^2-scaling of least coefficient height.
pub fn canonical_b_square(qf: &QuadField, delta: &AlgElem) -> Result<AlgElem> {
    let mut b2 = delta.clone();
    // clear denominators with a rational square
    let den = delta.den().clone();
    if den > BigInt::from(1) {
        b2 = b2.scale_q(&Q::from_integer(&den * &den));
    }
    let mut x = qf.from_alg(&b2)?;
    let nm = qf.norm(x).unsigned_abs();
    let mut best = 1u128;
    let mut gbest = QuadInt::int(1);
    let mut n = 2u128;
    while n * n <= nm {
        if nm % (n * n) == 0 {
            for g in qf.canonical_elements_of_norm(n as i64) {
                if qf.div_exact(x, qf.mul(g, g)).is_some() && n > best {
                    best = n;
                    gbest = g;
                }
            }
        }
        n += 1;
    }
    x = qf.div_exact(x, qf.mul(gbest, gbest)).unwrap();
    let u2 = qf.tp_unit;
    let u2i = qf.conj(u2);
    let height = |y: QuadInt| {
        let (a, b, _) = qf.sqrt_form(y);
        a.abs().max(b.abs())
    };
    loop {
        let up = qf.mul(x, u2);
        let down = qf.mul(x, u2i);
        if height(up) < height(x) {
            x = up;
        } else if height(down) < height(x) {
            x = down;
        } else {
            break;
        }
    }
    Ok(qf.to_alg(x))
}

/// Decompose the space under a separable probe operator.
pub fn eigen_decompose(
    setup: &HeckeSetup,
    space: &InvariantSpace,
    probes: &[HeckeMatrix],
    b_square_target: Option<&AlgElem>,
) -> Result<Vec<EigenSystem>> {
    let k = setup.k().clone();
    let f = setup.f().clone();
    let qf = &setup.qf;
    let d = space.dim();
    if d == 0 {
        return Ok(vec![]);
    }
    for probe in probes {
        let cp = probe.matrix.charpoly();
        let cpf = Poly::new(cp.coeffs.iter().map(k_to_f).collect::<Result<Vec<_>>>()?, AlgElem::zero(&f));
        if cpf.squarefree_part().degree() != cpf.degree() {
            continue;
        }
        let mut out = vec![];
        for h in factor_over_field(&cpf) {
            match h.degree() {
                Some(1) => {
                    let lam = h.coeffs[0].neg();
                    let lk = embed_base(&k, &lam);
                    let m = probe.matrix.sub(&Matrix::identity(d, AlgElem::zero(&k)).scale(&lk));
                    let ker = m.kernel();
                    if ker.len() != 1 {
                        return Err(Error::Certificate("eigenspace of a simple root is not a line".into()));
                    }
                    out.push(EigenSystem {
                        l: f.clone(),
                        b_square: None,
                        kb: k.clone(),
                        vector: ker[0].clone(),
                        probe: probe.target,
                        probe_value: lam,
                    });
                }
                Some(2) => {
                    let t = h.coeffs[1].neg();
                    let nn = h.coeffs[0].clone();
                    let delta = t.mul(&t).sub(&nn.scale_q(&Q::from_integer(4.into())));
                    let b2 = match b_square_target {
                        Some(b) => b.clone(),
                        None => canonical_b_square(qf, &delta)?,
                    };
                    let c = crate::numfield::is_square_ratio(&delta, &b2)?.ok_or_else(|| {
                        Error::NotSquare(format!("discriminant {} over b^2 = {}", delta, b2))
                    })?;
                    let c = if c.embed_sign(qf.sigma_indices()[0])? < 0 { c.neg() } else { c };
                    let l = adjoin_square_root(&f, &b2, "L", "b")?;
                    let kb = adjoin_square_root(&k, &embed_base(&k, &b2), "K(b)", "y")?;
                    let half = Q::new(BigInt::from(1), BigInt::from(2));
                    let lam_x = t.scale_q(&half);
                    let lam_y = c.scale_q(&half);
                    let lam_kb = join_tower(&kb, &embed_base(&k, &lam_x), &embed_base(&k, &lam_y));
                    let pm = probe.matrix.map(AlgElem::zero(&kb), |x| embed_base(&kb, x));
                    let m = pm.sub(&Matrix::identity(d, AlgElem::zero(&kb)).scale(&lam_kb));
                    let ker = m.kernel();
                    if ker.len() != 1 {
                        return Err(Error::Certificate("eigenspace of a simple root is not a line".into()));
                    }
                    out.push(EigenSystem {
                        l: l.clone(),
                        b_square: Some(b2),
                        kb,
                        vector: ker[0].clone(),
                        probe: probe.target,
                        probe_value: join_tower(&l, &lam_x, &lam_y),
                    });
                }
                _ => {
                    return Err(Error::Scope(format!(
                        "eigenvalue field of degree {} over F is not supported",
                        h.degree().unwrap()
                    )))
                }
            }
        }
        return Ok(out);
    }
    Err(Error::Certificate(
        "no probe operator has a separable characteristic polynomial (possible CM or Eisenstein situation)".into(),
    ))
}

impl EigenSystem {
    /// Eigenvalue of a Hecke matrix on this system, verified by H v = mu v.
    pub fn eigenvalue(&self, h: &HeckeMatrix) -> Result<AlgElem> {
        let kb = &self.kb;
        let m = if self.b_square.is_some() {
            h.matrix.map(AlgElem::zero(kb), |x| embed_base(kb, x))
        } else {
            h.matrix.clone()
        };
        let hv = m.mul_vec(&self.vector);
        let i = self.vector.iter().position(|x| !x.is_zero()).unwrap();
        let mu = hv[i].div(&self.vector[i])?;
        let want: Vec<AlgElem> = self.vector.iter().map(|x| x.mul(&mu)).collect();
        if hv != want {
            return Err(Error::Certificate("vector is not an eigenvector of the operator".into()));
        }
        self.to_l(&mu)
    }

    /// Map an element of the vector field down to the eigenvalue field.
    pub fn to_l(&self, mu: &AlgElem) -> Result<AlgElem> {
        if self.b_square.is_some() {
            let (x, y) = split_tower(mu);
            Ok(join_tower(&self.l, &k_to_f(&x)?, &k_to_f(&y)?))
        } else {
            k_to_f(mu)
        }
    }

    /// Embed an element of F into the eigenvalue field.
    pub fn from_f(&self, x: &AlgElem) -> AlgElem {
        if self.b_square.is_some() {
            embed_base(&self.l, x)
        } else {
            x.clone()
        }
    }

    /// Write t in L as x + y b with x, y in F.
    pub fn parts(&self, t: &AlgElem) -> (AlgElem, AlgElem) {
        if self.b_square.is_some() {
            split_tower(t)
        } else {
            (t.clone(), AlgElem::zero(&t.field))
        }
    }
}

/// tau = ratio^(1/4) t with ratio = sigma2(varpi)/sigma1(varpi); exact pair plus a
/// fixed-point complex approximation under sigma1.
#[derive(Clone, Debug)]
pub struct NormalizedEigenvalue {
    pub naive: AlgElem,
    pub ratio: AlgElem,
    pub re: String,
    pub im: String,
}

pub fn normalized_eigenvalue(setup: &HeckeSetup, es: &EigenSystem, t: &AlgElem, varpi: QuadInt, bits: u32) -> Result<NormalizedEigenvalue> {
    let qf = &setup.qf;
    let ratio = qf.to_alg(qf.conj(varpi)).div(&qf.to_alg(varpi))?;
    let (x, y) = es.parts(t);
    let bits = bits.max(16);
    let guard = bits + 32;
    let fx = crate::approx::Fixed::sigma1(qf, &x, guard);
    let fy = crate::approx::Fixed::sigma1(qf, &y, guard);
    let r4 = crate::approx::Fixed::sigma1(qf, &ratio, guard).nth_root(4);
    let re = fx.mul(&r4);
    let im = match &es.b_square {
        Some(b2) => {
            let mb = crate::approx::Fixed::sigma1(qf, &b2.neg(), guard).nth_root(2);
            fy.mul(&mb).mul(&r4)
        }
        None => crate::approx::Fixed::zero(guard),
    };
    let digits = (bits as f64 * std::f64::consts::LOG10_2).floor() as usize;
    Ok(NormalizedEigenvalue { naive: t.clone(), ratio, re: re.to_decimal(digits), im: im.to_decimal(digits) })
}

/// sigma2(varpi)/sigma1(varpi) as an element of F.
pub fn generator_ratio(qf: &QuadField, varpi: QuadInt) -> AlgElem {
    qf.to_alg(qf.conj(varpi)).div(&qf.to_alg(varpi)).unwrap()
}

/// Exact check that two generators give the same normalized value:
/// tau^4 agrees, i.e. t1^4 ratio1 = t2^4 ratio2.
pub fn same_normalized_value(qf: &QuadField, t1: &AlgElem, v1: QuadInt, t2: &AlgElem, v2: QuadInt, embed: impl Fn(&AlgElem) -> AlgElem) -> bool {
    let r1 = embed(&generator_ratio(qf, v1));
    let r2 = embed(&generator_ratio(qf, v2));
    t1.pow(4).mul(&r1) == t2.pow(4).mul(&r2)
}
