//! Exact number fields Q[x]/(f) for monic irreducible integer f, with real
//! embeddings, quadratic extensions and square-root extraction.

use crate::error::{Error, Result};
use crate::factor::{factor_rational, is_irreducible_monic};
use crate::matrix::Matrix;
use crate::poly::{isolate_real_roots, q_sign, refine_root, count_roots, sturm_chain, Poly, QPoly};
use crate::ring::{FieldOps, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

pub struct FieldSpec {
    pub label: String,
    /// Name of the power-basis generator used when printing.
    pub gen_name: String,
    pub modulus: Vec<BigInt>,
    degree: usize,
    /// x^(n+k) mod f, k = 0..n-1, as integer vectors.
    reduction: Vec<Vec<BigInt>>,
    roots: Vec<(Q, Q)>,
    tower: Option<Tower>,
}

/// Data for a field built as base(sqrt(delta)).
pub struct Tower {
    pub base: Arc<FieldSpec>,
    pub delta: AlgElem,
    sqrt: Vec<Q>,
    base_gen: Vec<Q>,
    /// Row i gives the tower coordinates (x in base, y in base) of theta^i.
    to_tower: Matrix<Q>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({}, {:?})", self.label, self.modulus)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, o: &Self) -> bool {
        self.modulus == o.modulus && self.label == o.label
    }
}

impl FieldSpec {
    /// Validate that `modulus` (constant term first) is monic, integral and irreducible.
    pub fn new(modulus: Vec<BigInt>, label: &str, gen_name: &str) -> Result<Arc<FieldSpec>> {
        let mut m = modulus;
        while m.last().map_or(false, |c| c.is_zero()) {
            m.pop();
        }
        if m.len() < 2 {
            return Err(Error::BadModulus("degree must be at least 1".into()));
        }
        if !m.last().unwrap().is_one() {
            return Err(Error::BadModulus("polynomial must be monic".into()));
        }
        if !is_irreducible_monic(&m) {
            return Err(Error::BadModulus(format!("{:?} is reducible over Q", m)));
        }
        Ok(Arc::new(Self::build(m, label, gen_name, None)))
    }

    pub fn rationals() -> Arc<FieldSpec> {
        Arc::new(Self::build(vec![BigInt::zero(), BigInt::one()], "Q", "x", None))
    }

    fn build(m: Vec<BigInt>, label: &str, gen_name: &str, tower: Option<Tower>) -> FieldSpec {
        let n = m.len() - 1;
        let mut reduction = vec![];
        // x^n = -(m_0 + ... + m_{n-1} x^{n-1})
        let mut cur: Vec<BigInt> = m[..n].iter().map(|c| -c).collect();
        for _ in 0..n {
            reduction.push(cur.clone());
            // multiply by x
            let top = cur[n - 1].clone();
            let mut next = vec![BigInt::zero(); n];
            for i in 1..n {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..n {
                next[i] += &top * &reduction[0][i];
            }
            cur = next;
        }
        let roots = isolate_real_roots(&crate::poly::qpoly_from_bigints(&m));
        FieldSpec { label: label.into(), gen_name: gen_name.into(), modulus: m, degree: n, reduction, roots, tower }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn real_root_count(&self) -> usize {
        self.roots.len()
    }
    pub fn modulus_poly(&self) -> QPoly {
        crate::poly::qpoly_from_bigints(&self.modulus)
    }
    pub fn tower(&self) -> Option<&Tower> {
        self.tower.as_ref()
    }
    pub fn root_interval(&self, idx: usize) -> Result<(Q, Q)> {
        self.roots
            .get(idx)
            .cloned()
            .ok_or(Error::RootIndex { index: idx, count: self.roots.len() })
    }
}

/// Field element: num / den in the power basis of the generator.
#[derive(Clone)]
pub struct AlgElem {
    pub field: Arc<FieldSpec>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coeffs();
        let mut terms = vec![];
        for (i, q) in c.iter().enumerate().rev() {
            if q.is_zero() {
                continue;
            }
            let base = match i {
                0 => String::new(),
                1 => self.field.gen_name.clone(),
                _ => format!("{}^{}", self.field.gen_name, i),
            };
            terms.push((q.clone(), base));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (k, (q, base)) in terms.iter().enumerate() {
            let neg = q.is_negative();
            let a = q.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if base.is_empty() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(base);
            } else if a.is_integer() {
                s.push_str(&format!("{}{}", a, base));
            } else {
                s.push_str(&format!("({}){}", a, base));
            }
        }
        write!(f, "{}", s)
    }
}

impl PartialEq for AlgElem {
    fn eq(&self, o: &Self) -> bool {
        same_field(&self.field, &o.field) && self.den == o.den && self.num == o.num
    }
}

fn same_field(a: &Arc<FieldSpec>, b: &Arc<FieldSpec>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl AlgElem {
    fn normalized(field: Arc<FieldSpec>, mut num: Vec<BigInt>, mut den: BigInt) -> AlgElem {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(|c| c.is_zero()) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= &g;
        }
        AlgElem { field, num, den }
    }
    pub fn from_coeffs(field: &Arc<FieldSpec>, c: &[Q]) -> AlgElem {
        let n = field.degree;
        assert!(c.len() <= n, "too many coefficients");
        let mut den = BigInt::one();
        for q in c {
            den = den.lcm(q.denom());
        }
        let mut num = vec![BigInt::zero(); n];
        for (i, q) in c.iter().enumerate() {
            num[i] = q.numer() * (&den / q.denom());
        }
        Self::normalized(field.clone(), num, den)
    }
    pub fn from_ints(field: &Arc<FieldSpec>, c: &[i64]) -> AlgElem {
        let q: Vec<Q> = c.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect();
        Self::from_coeffs(field, &q)
    }
    pub fn from_rational(field: &Arc<FieldSpec>, q: &Q) -> AlgElem {
        Self::from_coeffs(field, std::slice::from_ref(q))
    }
    pub fn from_int(field: &Arc<FieldSpec>, n: i64) -> AlgElem {
        Self::from_ints(field, &[n])
    }
    pub fn zero(field: &Arc<FieldSpec>) -> AlgElem {
        Self::from_int(field, 0)
    }
    pub fn one(field: &Arc<FieldSpec>) -> AlgElem {
        Self::from_int(field, 1)
    }
    /// The power-basis generator theta.
    pub fn gen(field: &Arc<FieldSpec>) -> AlgElem {
        if field.degree == 1 {
            return Self::from_rational(field, &-Q::from_integer(field.modulus[0].clone()));
        }
        Self::from_ints(field, &[0, 1])
    }
    pub fn coeffs(&self) -> Vec<Q> {
        self.num.iter().map(|c| Q::new(c.clone(), self.den.clone())).collect()
    }
    pub fn den(&self) -> &BigInt {
        &self.den
    }
    pub fn num(&self) -> &[BigInt] {
        &self.num
    }
    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }
    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(|c| c.is_zero())
    }
    pub fn as_rational(&self) -> Option<Q> {
        if self.is_rational() {
            Some(Q::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }
    fn check(&self, o: &AlgElem) {
        assert!(same_field(&self.field, &o.field), "field mismatch: {} vs {}", self.field.label, o.field.label);
    }
    pub fn add(&self, o: &AlgElem) -> AlgElem {
        self.check(o);
        let num = if self.den == o.den {
            self.num.iter().zip(&o.num).map(|(a, b)| a + b).collect()
        } else {
            self.num.iter().zip(&o.num).map(|(a, b)| a * &o.den + b * &self.den).collect()
        };
        let den = if self.den == o.den { self.den.clone() } else { &self.den * &o.den };
        Self::normalized(self.field.clone(), num, den)
    }
    pub fn neg(&self) -> AlgElem {
        AlgElem { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
    pub fn sub(&self, o: &AlgElem) -> AlgElem {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &AlgElem) -> AlgElem {
        self.check(o);
        let n = self.field.degree;
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = prod[..n].to_vec();
        for k in n..2 * n - 1 {
            let c = &prod[k];
            if c.is_zero() {
                continue;
            }
            for (i, r) in self.field.reduction[k - n].iter().enumerate() {
                if !r.is_zero() {
                    num[i] += c * r;
                }
            }
        }
        Self::normalized(self.field.clone(), num, &self.den * &o.den)
    }
    pub fn scale_q(&self, q: &Q) -> AlgElem {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::normalized(self.field.clone(), num, &self.den * q.denom())
    }
    pub fn to_poly(&self) -> QPoly {
        Poly::new(self.coeffs(), Q::zero())
    }
    pub fn inv(&self) -> Result<AlgElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field.modulus_poly();
        let (g, s, _) = self.to_poly().ext_gcd(&f);
        debug_assert_eq!(g.degree(), Some(0));
        let s = s.rem(&f);
        let mut c = s.coeffs;
        c.resize(self.field.degree, Q::zero());
        Ok(Self::from_coeffs(&self.field, &c))
    }
    pub fn div(&self, o: &AlgElem) -> Result<AlgElem> {
        Ok(self.mul(&o.inv()?))
    }
    pub fn pow(&self, e: i64) -> AlgElem {
        FieldOps::pow_i(self, e)
    }
    /// Matrix of multiplication by self on the power basis (column j = self * theta^j).
    pub fn mult_matrix(&self) -> Matrix<Q> {
        let n = self.field.degree;
        let mut cols = vec![];
        let mut basis = AlgElem::one(&self.field);
        let g = AlgElem::gen(&self.field);
        for _ in 0..n {
            let mut c = self.mul(&basis).coeffs();
            c.resize(n, Q::zero());
            cols.push(c);
            basis = basis.mul(&g);
        }
        Matrix::from_cols(cols, Q::zero())
    }
    pub fn charpoly(&self) -> QPoly {
        self.mult_matrix().charpoly()
    }
    pub fn norm(&self) -> Q {
        self.mult_matrix().det()
    }
    pub fn trace(&self) -> Q {
        self.mult_matrix().trace()
    }
    pub fn is_integral(&self) -> bool {
        self.charpoly().coeffs.iter().all(|c| c.is_integer())
    }

    /// Exact sign of the image under the real embedding with the given root index
    /// (roots sorted increasingly).
    pub fn embed_sign(&self, idx: usize) -> Result<i32> {
        let (mut lo, mut hi) = self.field.root_interval(idx)?;
        if self.is_zero() {
            return Ok(0);
        }
        let g = self.to_poly();
        if g.degree() == Some(0) {
            return Ok(q_sign(&g.coeffs[0]));
        }
        let f = self.field.modulus_poly();
        if lo == hi {
            return Ok(q_sign(&g.eval(&lo)));
        }
        let gs = g.squarefree_part();
        let chain = sturm_chain(&gs);
        loop {
            if !g.eval(&lo).is_zero() && count_roots(&chain, &lo, &hi) == 0 {
                return Ok(q_sign(&g.eval(&hi)));
            }
            let (a, b) = refine_root(&f, &lo, &hi);
            lo = a;
            hi = b;
            if lo == hi {
                return Ok(q_sign(&g.eval(&lo)));
            }
        }
    }

    /// Rational enclosure (lo, hi) of the real embedding, width at most 2^-bits.
    pub fn embed_interval(&self, idx: usize, bits: u32) -> Result<(Q, Q)> {
        let (mut lo, mut hi) = self.field.root_interval(idx)?;
        let f = self.field.modulus_poly();
        let eps = Q::new(BigInt::one(), BigInt::one() << (bits as usize + 8));
        // derivative bound on the root interval gives the enclosure of g(theta)
        let g = self.to_poly();
        loop {
            let (a, b) = refine_root(&f, &lo, &hi);
            lo = a;
            hi = b;
            let w = &hi - &lo;
            let bound = deriv_bound(&g, &lo, &hi);
            if &w * &bound < eps || lo == hi {
                break;
            }
        }
        let mid = (&lo + &hi) / Q::from_integer(BigInt::from(2));
        let v = g.eval(&mid);
        let r = (&hi - &lo) * deriv_bound(&g, &lo, &hi);
        Ok((&v - &r, &v + &r))
    }

    pub fn embed_f64(&self, idx: usize) -> Result<f64> {
        use num_traits::ToPrimitive;
        let (lo, hi) = self.embed_interval(idx, 60)?;
        Ok(((lo + hi) / Q::from_integer(BigInt::from(2))).to_f64().unwrap_or(f64::NAN))
    }

    /// Some square root in this field, or None.
    pub fn sqrt(&self) -> Option<AlgElem> {
        sqrt_in_field(self)
    }
}

/// Upper bound of |g'| on [lo, hi] by summing |coefficients| * max|x|^k.
fn deriv_bound(g: &QPoly, lo: &Q, hi: &Q) -> Q {
    let m = lo.abs().max(hi.abs()) + Q::one();
    let d = g.derivative();
    let mut acc = Q::zero();
    let mut pw = Q::one();
    for c in &d.coeffs {
        acc += c.abs() * &pw;
        pw *= &m;
    }
    acc + Q::one()
}

impl FieldOps for AlgElem {
    fn zero_like(&self) -> Self {
        AlgElem::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        AlgElem::one(&self.field)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn inv_ref(&self) -> Self {
        self.inv().expect("inverse of zero")
    }
    fn from_int_like(&self, n: i64) -> Self {
        AlgElem::from_int(&self.field, n)
    }
}

fn rational_sqrt(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Monic irreducible factors of a squarefree polynomial over a number field
/// (norm of a shift g(X - c theta), factored over Q, then gcds over the field).
pub fn factor_over_field(g: &Poly<AlgElem>) -> Vec<Poly<AlgElem>> {
    let m = g.degree().expect("factor of zero polynomial");
    let g = g.monic();
    if m <= 1 {
        return vec![g];
    }
    let k = g.zero.field.clone();
    let n = k.degree;
    let theta = AlgElem::gen(&k);
    let zero = AlgElem::zero(&k);
    let one = AlgElem::one(&k);
    for c in 0i64..30 {
        let shift = theta.scale_q(&Q::from_integer(BigInt::from(c)));
        // A = K[X]/(g), basis theta^i X^j; multiplication by X + shift over Q.
        let mut cols = vec![];
        for j in 0..m {
            for i in 0..n {
                let mut ti = vec![Q::zero(); n];
                ti[i] = Q::one();
                let b = AlgElem::from_coeffs(&k, &ti);
                let mut img = vec![zero.clone(); m];
                img[j] = img[j].add(&b.mul(&shift));
                if j + 1 < m {
                    img[j + 1] = img[j + 1].add(&b);
                } else {
                    for l in 0..m {
                        img[l] = img[l].sub(&b.mul(&g.coeffs[l]));
                    }
                }
                let mut col = vec![];
                for x in &img {
                    let mut cc = x.coeffs();
                    cc.resize(n, Q::zero());
                    col.extend(cc);
                }
                cols.push(col);
            }
        }
        let norm = Matrix::from_cols(cols, Q::zero()).charpoly();
        if norm.squarefree_part().degree() != norm.degree() {
            continue;
        }
        let facs = factor_rational(&norm);
        if facs.len() == 1 {
            return vec![g];
        }
        let xshift = Poly::new(vec![shift.clone(), one.clone()], zero.clone());
        let mut out = vec![];
        for h in facs {
            let hk = h.map(zero.clone(), |q| AlgElem::from_rational(&k, q));
            let f = g.gcd(&hk.compose(&xshift));
            if f.degree().unwrap_or(0) > 0 {
                out.push(f);
            }
        }
        out.sort_by_key(|f| f.degree());
        return out;
    }
    panic!("no squarefree norm found for factorization over {}", k.label);
}

/// Square root through the factorization of Z^2 - r.
fn sqrt_in_field(r: &AlgElem) -> Option<AlgElem> {
    let k = &r.field;
    if r.is_zero() {
        return Some(r.clone());
    }
    if let Some(q) = r.as_rational() {
        if let Some(s) = rational_sqrt(&q) {
            return Some(AlgElem::from_rational(k, &s));
        }
        if k.degree == 1 {
            return None;
        }
    }
    let zero = AlgElem::zero(k);
    let p = Poly::new(vec![r.neg(), zero.clone(), AlgElem::one(k)], zero);
    for f in factor_over_field(&p) {
        if f.degree() == Some(1) {
            let s = f.coeffs[0].neg();
            if s.mul(&s) == *r {
                return Some(s);
            }
        }
    }
    None
}

/// Some square root of x / y, if one exists in the field.
pub fn is_square_ratio(x: &AlgElem, y: &AlgElem) -> Result<Option<AlgElem>> {
    let q = x.div(y)?;
    Ok(q.sqrt())
}

/// Build base(sqrt(delta)) with a primitive element s + c * alpha, validating
/// that delta is not a square in base.
pub fn adjoin_square_root(base: &Arc<FieldSpec>, delta: &AlgElem, label: &str, gen_name: &str) -> Result<Arc<FieldSpec>> {
    if !same_field(base, &delta.field) {
        return Err(Error::FieldMismatch(base.label.clone(), delta.field.label.clone()));
    }
    if delta.sqrt().is_some() {
        return Err(Error::AlreadySquare(format!("{} in {}", delta, base.label)));
    }
    let n = base.degree;
    let alpha = AlgElem::gen(base);
    // Tower arithmetic on pairs (x, y) meaning x + y s, s^2 = delta.
    let tmul = |a: &(AlgElem, AlgElem), b: &(AlgElem, AlgElem)| -> (AlgElem, AlgElem) {
        (a.0.mul(&b.0).add(&a.1.mul(&b.1).mul(delta)), a.0.mul(&b.1).add(&a.1.mul(&b.0)))
    };
    let flat = |a: &(AlgElem, AlgElem)| -> Vec<Q> {
        let mut v = a.0.coeffs();
        v.extend(a.1.coeffs());
        v
    };
    let zero = AlgElem::zero(base);
    let one = AlgElem::one(base);
    for c in [0i64, 1, -1, 2, -2, 3, -3, 4, 5, 7] {
        let theta = (alpha.scale_q(&Q::from_integer(BigInt::from(c))), one.clone());
        let theta = if n == 1 { (zero.clone(), one.clone()) } else { theta };
        let mut powers = vec![(one.clone(), zero.clone())];
        for _ in 0..2 * n {
            let last = powers.last().unwrap().clone();
            powers.push(tmul(&last, &theta));
        }
        let basis = Matrix::from_cols(powers[..2 * n].iter().map(flat).collect(), Q::zero());
        if basis.rank() < 2 * n {
            continue;
        }
        let top = flat(&powers[2 * n]);
        let sol = basis.solve(&top).expect("independent powers span");
        // theta^(2n) = sum sol_i theta^i, so minpoly = X^(2n) - sum sol_i X^i
        let mut minpoly: Vec<Q> = sol.iter().map(|q| -q).collect();
        minpoly.push(Q::one());
        // scale theta by m so the minimal polynomial becomes integral
        let deg = 2 * n;
        let mut m = BigInt::one();
        loop {
            let mq = Q::from_integer(m.clone());
            let ok = (0..=deg).all(|i| (&minpoly[i] * mq.pow((deg - i) as i32)).is_integer());
            if ok {
                break;
            }
            m += 1;
        }
        let mq = Q::from_integer(m.clone());
        let modulus: Vec<BigInt> =
            (0..=deg).map(|i| (&minpoly[i] * mq.pow((deg - i) as i32)).to_integer()).collect();
        // Tower coordinates of (m theta)^i.
        let mut tpow = vec![(one.clone(), zero.clone())];
        let mtheta = (theta.0.scale_q(&mq), theta.1.scale_q(&mq));
        for _ in 1..deg {
            let last = tpow.last().unwrap().clone();
            tpow.push(tmul(&last, &mtheta));
        }
        let to_tower = Matrix::from_rows(tpow.iter().map(flat).collect(), Q::zero());
        // Solve for the absolute coordinates of s and alpha.
        let tt = to_tower.transpose();
        let mut s_flat = vec![Q::zero(); deg];
        s_flat[n] = Q::one();
        let sqrt = tt.solve(&s_flat).expect("s in span");
        let mut a_flat = vec![Q::zero(); deg];
        a_flat[..n].clone_from_slice(&alpha.coeffs());
        let base_gen = tt.solve(&a_flat).expect("alpha in span");
        let tower = Tower { base: base.clone(), delta: delta.clone(), sqrt, base_gen, to_tower };
        let spec = FieldSpec::build(modulus, label, gen_name, Some(tower));
        return Ok(Arc::new(spec));
    }
    Err(Error::BadModulus("no primitive element found".into()))
}

impl Tower {
    pub fn sqrt_elem(&self, field: &Arc<FieldSpec>) -> AlgElem {
        AlgElem::from_coeffs(field, &self.sqrt)
    }
    pub fn base_gen_elem(&self, field: &Arc<FieldSpec>) -> AlgElem {
        AlgElem::from_coeffs(field, &self.base_gen)
    }
}

/// Embed a base-field element into a quadratic extension.
pub fn embed_base(ext: &Arc<FieldSpec>, x: &AlgElem) -> AlgElem {
    let t = ext.tower().expect("field is not a tower");
    assert!(same_field(&t.base, &x.field), "embed_base: wrong base field");
    let g = t.base_gen_elem(ext);
    let mut acc = AlgElem::zero(ext);
    for c in x.coeffs().iter().rev() {
        acc = acc.mul(&g).add(&AlgElem::from_rational(ext, c));
    }
    acc
}

/// Write z = x + y * sqrt(delta) with x, y in the base field.
pub fn split_tower(z: &AlgElem) -> (AlgElem, AlgElem) {
    let t = z.field.tower().expect("field is not a tower");
    let n = t.base.degree;
    let c = z.coeffs();
    let mut flat = vec![Q::zero(); 2 * n];
    for (i, ci) in c.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        for j in 0..2 * n {
            flat[j] += ci * t.to_tower.get(i, j);
        }
    }
    (AlgElem::from_coeffs(&t.base, &flat[..n]), AlgElem::from_coeffs(&t.base, &flat[n..]))
}

/// Join x + y * sqrt(delta).
pub fn join_tower(ext: &Arc<FieldSpec>, x: &AlgElem, y: &AlgElem) -> AlgElem {
    let s = ext.tower().expect("field is not a tower").sqrt_elem(ext);
    embed_base(ext, x).add(&embed_base(ext, y).mul(&s))
}

/// Render z = x + y * s as "x + (y)s", with s named by `sqrt_name`.
pub fn render_tower(z: &AlgElem, sqrt_name: &str) -> String {
    let (x, y) = split_tower(z);
    if y.is_zero() {
        return x.to_string();
    }
    let (neg, yterm) = match y.as_rational() {
        Some(q) if q.abs().is_one() => (q.is_negative(), sqrt_name.to_string()),
        Some(q) if q.is_integer() => (q.is_negative(), format!("{}{}", q.abs(), sqrt_name)),
        Some(q) => (q.is_negative(), format!("({}){}", q.abs(), sqrt_name)),
        None => (false, format!("({}){}", y, sqrt_name)),
    };
    match (x.is_zero(), neg) {
        (true, false) => yterm,
        (true, true) => format!("-{}", yterm),
        (false, false) => format!("{} + {}", x, yterm),
        (false, true) => format!("{} - {}", x, yterm),
    }
}

/// Base-field preimage of z, if z lies in the image of the base field.
pub fn descend(z: &AlgElem) -> Option<AlgElem> {
    let (x, y) = split_tower(z);
    if y.is_zero() {
        Some(x)
    } else {
        None
    }
}

/// Convenience: the polynomial X^2 - d.
pub fn quadratic_modulus(d: i64) -> Vec<BigInt> {
    vec![BigInt::from(-d), BigInt::zero(), BigInt::one()]
}
