//! Real quadratic fields Q(sqrt d): integers, units, total positivity, primes,
//! prime levels and their quadratic residue characters.

use crate::error::{Error, Result};
use crate::numfield::{quadratic_modulus, AlgElem, FieldSpec};
use crate::ring::{FieldOps, Fp, Q};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::Arc;

/// Integer a + b*omega where omega = sqrt(d) (d = 2, 3 mod 4) or (1 + sqrt d)/2 (d = 1 mod 4).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct QuadInt {
    pub a: i128,
    pub b: i128,
}

impl QuadInt {
    pub const fn new(a: i128, b: i128) -> Self {
        QuadInt { a, b }
    }
    pub fn int(a: i128) -> Self {
        QuadInt { a, b: 0 }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PrimeKind {
    Split,
    Inert,
    Ramified,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimeIdeal {
    /// Rational prime below.
    pub p: i64,
    pub norm: i64,
    pub kind: PrimeKind,
    /// Canonical totally positive generator.
    pub gen: QuadInt,
}

pub struct QuadField {
    pub d: i64,
    pub field: Arc<FieldSpec>,
    pub half_basis: bool,
    pub unit: QuadInt,
    pub unit_norm: i64,
    /// Generator of the totally positive units.
    pub tp_unit: QuadInt,
    pub disc: i64,
    sigma1: usize,
    sigma2: usize,
}

fn is_squarefree(n: i64) -> bool {
    let mut k = 2i64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Kronecker symbol (D / p) for an odd prime p or p = 2.
fn kronecker(disc: i64, p: i64) -> i32 {
    if disc.rem_euclid(p) == 0 {
        return 0;
    }
    if p == 2 {
        return match disc.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    Fp::new(disc as i128, p as u64).legendre()
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl QuadField {
    pub fn new(d: i64) -> Result<Arc<QuadField>> {
        if d < 2 || !is_squarefree(d) {
            return Err(Error::Config(format!("d = {} must be a squarefree integer > 1", d)));
        }
        let field = FieldSpec::new(quadratic_modulus(d), &format!("Q(sqrt{})", d), "w")?;
        let half_basis = d.rem_euclid(4) == 1;
        let disc = if half_basis { d } else { 4 * d };
        let sigma1 = (0..2).find(|&i| AlgElem::gen(&field).embed_sign(i).unwrap() > 0).unwrap();
        let mut qf = QuadField {
            d,
            field,
            half_basis,
            unit: QuadInt::int(1),
            unit_norm: 1,
            tp_unit: QuadInt::int(1),
            disc,
            sigma1,
            sigma2: 1 - sigma1,
        };
        let u = qf.fundamental_unit_cf()?;
        qf.unit = u;
        qf.unit_norm = qf.norm(u) as i64;
        qf.tp_unit = if qf.unit_norm == -1 { qf.mul(u, u) } else { u };
        Ok(Arc::new(qf))
    }

    /// Root indices of the two real embeddings: sigma1 sends sqrt d to the positive root.
    pub fn sigma_indices(&self) -> [usize; 2] {
        [self.sigma1, self.sigma2]
    }

    /// Continued fraction of omega; first convergent p/q with Nm(p - q conj(omega)) = +-1.
    fn fundamental_unit_cf(&self) -> Result<QuadInt> {
        // omega = (P + sqrt D)/Q
        let dd = BigInt::from(self.d);
        let (mut pp, mut qq) = if self.half_basis { (BigInt::one(), BigInt::from(2)) } else { (BigInt::zero(), BigInt::one()) };
        let s = dd.sqrt();
        let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
        let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
        for _ in 0..10_000 {
            let a = (&pp + &s).div_floor(&qq);
            let h2 = &a * &h1 + &h0;
            let k2 = &a * &k1 + &k0;
            h0 = std::mem::replace(&mut h1, h2);
            k0 = std::mem::replace(&mut k1, k2);
            // unit candidate (p - q) + q omega in the half basis, p + q omega otherwise
            let (ua, ub) = if self.half_basis { (&h1 - &k1, k1.clone()) } else { (h1.clone(), k1.clone()) };
            let (Some(ua), Some(ub)) = (ua.to_i128(), ub.to_i128()) else {
                return Err(Error::Scope(format!("fundamental unit of Q(sqrt{}) exceeds 128-bit range", self.d)));
            };
            let u = QuadInt::new(ua, ub);
            let n = self.norm_checked(u);
            if n == Some(1) || n == Some(-1) {
                return Ok(u);
            }
            pp = &a * &qq - &pp;
            qq = (&dd - &pp * &pp) / &qq;
        }
        Err(Error::Scope("continued fraction did not terminate".into()))
    }

    pub fn mul(&self, x: QuadInt, y: QuadInt) -> QuadInt {
        let be = x.b * y.b;
        if self.half_basis {
            let c = (self.d as i128 - 1) / 4;
            QuadInt::new(x.a * y.a + be * c, x.a * y.b + x.b * y.a + be)
        } else {
            QuadInt::new(x.a * y.a + be * self.d as i128, x.a * y.b + x.b * y.a)
        }
    }
    pub fn add(&self, x: QuadInt, y: QuadInt) -> QuadInt {
        QuadInt::new(x.a + y.a, x.b + y.b)
    }
    pub fn sub(&self, x: QuadInt, y: QuadInt) -> QuadInt {
        QuadInt::new(x.a - y.a, x.b - y.b)
    }
    pub fn neg(&self, x: QuadInt) -> QuadInt {
        QuadInt::new(-x.a, -x.b)
    }
    pub fn pow(&self, x: QuadInt, e: u32) -> QuadInt {
        let mut acc = QuadInt::int(1);
        for _ in 0..e {
            acc = self.mul(acc, x);
        }
        acc
    }
    pub fn conj(&self, x: QuadInt) -> QuadInt {
        if self.half_basis {
            QuadInt::new(x.a + x.b, -x.b)
        } else {
            QuadInt::new(x.a, -x.b)
        }
    }
    fn norm_checked(&self, x: QuadInt) -> Option<i128> {
        if self.half_basis {
            let c = (1 - self.d as i128) / 4;
            x.a.checked_mul(x.a)?.checked_add(x.a.checked_mul(x.b)?)?.checked_add(x.b.checked_mul(x.b)?.checked_mul(c)?)
        } else {
            x.a.checked_mul(x.a)?.checked_sub(x.b.checked_mul(x.b)?.checked_mul(self.d as i128)?)
        }
    }
    pub fn norm(&self, x: QuadInt) -> i128 {
        self.norm_checked(x).expect("norm overflow")
    }
    pub fn trace(&self, x: QuadInt) -> i128 {
        if self.half_basis {
            2 * x.a + x.b
        } else {
            2 * x.a
        }
    }
    /// x = (A + B sqrt d)/den.
    pub fn sqrt_form(&self, x: QuadInt) -> (i128, i128, i128) {
        if self.half_basis {
            (2 * x.a + x.b, x.b, 2)
        } else {
            (x.a, x.b, 1)
        }
    }
    fn sign_ab(&self, a: i128, b: i128) -> i32 {
        let ds = self.d as i128;
        if a >= 0 && b >= 0 {
            return if a == 0 && b == 0 { 0 } else { 1 };
        }
        if a <= 0 && b <= 0 {
            return -1;
        }
        let c = (a * a).cmp(&(ds * b * b));
        let s = match c {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        };
        if a > 0 {
            s
        } else {
            -s
        }
    }
    /// Sign under sigma1 (sqrt d > 0).
    pub fn sign1(&self, x: QuadInt) -> i32 {
        let (a, b, _) = self.sqrt_form(x);
        self.sign_ab(a, b)
    }
    /// Sign under sigma2 (sqrt d < 0).
    pub fn sign2(&self, x: QuadInt) -> i32 {
        let (a, b, _) = self.sqrt_form(x);
        self.sign_ab(a, -b)
    }
    pub fn is_totally_positive(&self, x: QuadInt) -> bool {
        self.sign1(x) > 0 && self.sign2(x) > 0
    }
    pub fn sigma1_f64(&self, x: QuadInt) -> f64 {
        let (a, b, den) = self.sqrt_form(x);
        (a as f64 + b as f64 * (self.d as f64).sqrt()) / den as f64
    }
    pub fn sigma2_f64(&self, x: QuadInt) -> f64 {
        let (a, b, den) = self.sqrt_form(x);
        (a as f64 - b as f64 * (self.d as f64).sqrt()) / den as f64
    }
    pub fn to_alg(&self, x: QuadInt) -> AlgElem {
        let (a, b, den) = self.sqrt_form(x);
        let c = [
            Q::new(BigInt::from(a), BigInt::from(den)),
            Q::new(BigInt::from(b), BigInt::from(den)),
        ];
        AlgElem::from_coeffs(&self.field, &c)
    }
    /// Integral element with the given field value, if integral.
    pub fn from_alg(&self, x: &AlgElem) -> Result<QuadInt> {
        let c = x.coeffs();
        let (a, b) = (&c[0], &c[1]);
        let res = if self.half_basis {
            // a + b sqrt d = (a - b) + 2b omega
            let bb = b * Q::from_integer(BigInt::from(2));
            let aa = a - b;
            (aa, bb)
        } else {
            (a.clone(), b.clone())
        };
        if !res.0.is_integer() || !res.1.is_integer() {
            return Err(Error::NotIntegral(x.to_string()));
        }
        let conv = |q: &Q| q.to_integer().to_i128().ok_or_else(|| Error::Scope("integer overflow".into()));
        Ok(QuadInt::new(conv(&res.0)?, conv(&res.1)?))
    }
    /// Exact quotient x / y if it is integral.
    pub fn div_exact(&self, x: QuadInt, y: QuadInt) -> Option<QuadInt> {
        let n = self.norm(y);
        if n == 0 {
            return None;
        }
        let t = self.mul(x, self.conj(y));
        if t.a % n == 0 && t.b % n == 0 {
            Some(QuadInt::new(t.a / n, t.b / n))
        } else {
            None
        }
    }
    pub fn divides(&self, y: QuadInt, x: QuadInt) -> bool {
        self.div_exact(x, y).is_some()
    }
    pub fn is_unit(&self, x: QuadInt) -> bool {
        let n = self.norm(x);
        n == 1 || n == -1
    }
    /// Ideal equality (x) = (y).
    pub fn same_ideal(&self, x: QuadInt, y: QuadInt) -> bool {
        match self.div_exact(x, y) {
            Some(q) => self.is_unit(q),
            None => false,
        }
    }

    /// Canonical totally positive generator of (x): the unique one with
    /// 1 <= sigma1(g)/|Nm g|^(1/2) < sigma1(tp_unit).
    pub fn totally_positive_generator(&self, x: QuadInt) -> Result<QuadInt> {
        let n = self.norm(x);
        if n == 0 {
            return Err(Error::NoTotallyPositiveGenerator("zero".into()));
        }
        let mut g = x;
        let (s1, s2) = (self.sign1(g), self.sign2(g));
        if s1 != s2 {
            if self.unit_norm != -1 {
                return Err(Error::NoTotallyPositiveGenerator(format!(
                    "{:?} has mixed signs and every unit of Q(sqrt{}) has norm +1",
                    x, self.d
                )));
            }
            g = self.mul(g, self.unit);
        }
        if self.sign1(g) < 0 {
            g = self.neg(g);
        }
        let n = n.abs();
        let nq = QuadInt::int(n);
        let eps = self.tp_unit;
        let eps_inv = self.conj(eps);
        let upper = self.mul(nq, self.mul(eps, eps));
        for _ in 0..10_000 {
            let g2 = self.mul(g, g);
            if self.sign1(self.sub(g2, nq)) < 0 {
                g = self.mul(g, eps);
            } else if self.sign1(self.sub(upper, g2)) <= 0 {
                g = self.mul(g, eps_inv);
            } else {
                return Ok(g);
            }
        }
        Err(Error::Scope("canonical generator search did not converge".into()))
    }

    /// All canonical totally positive elements of norm n (one per principal ideal of norm n).
    pub fn canonical_elements_of_norm(&self, n: i64) -> Vec<QuadInt> {
        let den: i128 = if self.half_basis { 2 } else { 1 };
        let ds = self.d as i128;
        let eps = self.sigma1_f64(self.tp_unit);
        let bmax = (den as f64 * eps * (n as f64).sqrt() / (2.0 * (self.d as f64).sqrt())).ceil() as i128 + 2;
        let mut out = vec![];
        for bb in 0..=bmax {
            let a2 = den * den * n as i128 + ds * bb * bb;
            let aa = a2.sqrt();
            if aa * aa != a2 {
                continue;
            }
            let x = if self.half_basis {
                if (aa - bb) % 2 != 0 {
                    continue;
                }
                QuadInt::new((aa - bb) / 2, bb)
            } else {
                QuadInt::new(aa, bb)
            };
            if let Ok(g) = self.totally_positive_generator(x) {
                if g == x && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out.sort_by(|x, y| self.sigma1_f64(*x).partial_cmp(&self.sigma1_f64(*y)).unwrap());
        out
    }

    pub fn prime_kind(&self, p: i64) -> PrimeKind {
        match kronecker(self.disc, p) {
            0 => PrimeKind::Ramified,
            1 => PrimeKind::Split,
            _ => PrimeKind::Inert,
        }
    }

    /// Prime ideals of norm < bound, ordered by norm then by sigma1 of the
    /// canonical generator. Requires the primes to be principal.
    pub fn primes_below(&self, bound: i64) -> Result<Vec<PrimeIdeal>> {
        let mut out = vec![];
        for p in 2..bound {
            if !is_prime(p) {
                continue;
            }
            match self.prime_kind(p) {
                PrimeKind::Inert => {
                    if p * p < bound {
                        let gen = self.totally_positive_generator(QuadInt::int(p as i128))?;
                        out.push(PrimeIdeal { p, norm: p * p, kind: PrimeKind::Inert, gen });
                    }
                }
                kind => {
                    let gens = self.canonical_elements_of_norm(p);
                    let want = if kind == PrimeKind::Split { 2 } else { 1 };
                    if gens.len() != want {
                        return Err(Error::Scope(format!(
                            "primes above {} are not generated by totally positive elements",
                            p
                        )));
                    }
                    for gen in gens {
                        out.push(PrimeIdeal { p, norm: p, kind, gen });
                    }
                }
            }
        }
        out.sort_by_key(|x| x.norm);
        Ok(out)
    }

    /// Parse "a + b w" style input where w = sqrt d.
    pub fn parse(&self, s: &str) -> Result<QuadInt> {
        let x = parse_sqrt_expr(s)?;
        let c = [x.0, x.1];
        self.from_alg(&AlgElem::from_coeffs(&self.field, &c))
    }

    /// Render in the basis {1, w}, w = sqrt d, as "b w + a".
    pub fn render(&self, x: QuadInt) -> String {
        render_sqrt_form(&self.to_alg(x))
    }
}

/// Parse a linear expression in w with rational coefficients, like "-3w + 5/2".
pub fn parse_sqrt_expr(s: &str) -> Result<(Q, Q)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Config("empty field element".into()));
    }
    let mut c0 = Q::zero();
    let mut c1 = Q::zero();
    let mut terms = vec![];
    let mut cur = String::new();
    for (i, ch) in t.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('*') {
            terms.push(cur.clone());
            cur.clear();
        }
        cur.push(ch);
    }
    terms.push(cur);
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(r) => (-1, r.to_string()),
            None => (1, term.trim_start_matches('+').to_string()),
        };
        let (is_w, coef) = if let Some(r) = body.strip_suffix('w') {
            (true, r.trim_end_matches('*').to_string())
        } else {
            (false, body.clone())
        };
        let coef = coef.trim_matches(|c| c == '(' || c == ')');
        let q = if coef.is_empty() {
            Q::one()
        } else if let Some((n, d)) = coef.split_once('/') {
            let n: BigInt = n.parse().map_err(|_| Error::Config(format!("bad number in {:?}", s)))?;
            let d: BigInt = d.parse().map_err(|_| Error::Config(format!("bad number in {:?}", s)))?;
            if d.is_zero() {
                return Err(Error::Config(format!("zero denominator in {:?}", s)));
            }
            Q::new(n, d)
        } else {
            Q::from_integer(coef.parse().map_err(|_| Error::Config(format!("bad number in {:?}", s)))?)
        };
        let q = if sign < 0 { -q } else { q };
        if is_w {
            c1 += q;
        } else {
            c0 += q;
        }
    }
    Ok((c0, c1))
}

fn fmt_coeff(q: &Q) -> String {
    if q.is_integer() {
        q.to_string()
    } else {
        format!("({})", q)
    }
}

/// "b w + a" style rendering of an element of a quadratic field (power basis 1, w).
pub fn render_sqrt_form(x: &AlgElem) -> String {
    let c = x.coeffs();
    let (a, b) = (&c[0], &c[1]);
    let mut s = String::new();
    if !b.is_zero() {
        if b.is_one() {
            s.push('w');
        } else if (-b).is_one() {
            s.push_str("-w");
        } else {
            s.push_str(&format!("{}w", fmt_coeff(b)));
        }
    }
    if !a.is_zero() {
        if s.is_empty() {
            s.push_str(&fmt_coeff(a));
        } else if a.is_negative() {
            s.push_str(&format!(" - {}", fmt_coeff(&-a)));
        } else {
            s.push_str(&format!(" + {}", fmt_coeff(a)));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Level: either the unit ideal or a prime of degree one.
#[derive(Clone, Debug)]
pub struct Level {
    pub gen: QuadInt,
    /// Size q of the residue field (1 for the unit ideal).
    pub norm: i64,
    /// Image of omega in F_q.
    root: u64,
}

impl Level {
    pub fn new(qf: &QuadField, gen: QuadInt) -> Result<Level> {
        let n = qf.norm(gen).abs() as i64;
        if n == 1 {
            return Ok(Level { gen, norm: 1, root: 0 });
        }
        if !is_prime(n) {
            return Err(Error::Scope(format!(
                "level of norm {} is not a prime of degree one; only such levels are supported",
                n
            )));
        }
        let p = n as u64;
        let (a, b) = (Fp::new(gen.a, p), Fp::new(gen.b, p));
        for r in 0..p {
            let rf = Fp { v: r, p };
            // omega's minimal polynomial
            let minpoly = if qf.half_basis {
                rf.mul_ref(&rf).sub_ref(&rf).sub_ref(&Fp::new((qf.d as i128 - 1) / 4, p))
            } else {
                rf.mul_ref(&rf).sub_ref(&Fp::new(qf.d as i128, p))
            };
            if minpoly.v == 0 && a.add_ref(&b.mul_ref(&rf)).v == 0 {
                return Ok(Level { gen, norm: n, root: r });
            }
        }
        Err(Error::Certificate("no residue map for the level".into()))
    }
    pub fn is_unit_ideal(&self) -> bool {
        self.norm == 1
    }
    /// Residue of x in F_q.
    pub fn reduce(&self, x: QuadInt) -> Fp {
        let p = self.norm.max(2) as u64;
        if self.is_unit_ideal() {
            return Fp { v: 0, p: 2 };
        }
        Fp::new(x.a, p).add_ref(&Fp::new(x.b, p).mul_ref(&Fp { v: self.root, p }))
    }
    pub fn is_coprime(&self, x: QuadInt) -> bool {
        self.is_unit_ideal() || self.reduce(x).v != 0
    }
    /// Residue of an integral element given in the sqrt-basis as rationals (a + b sqrt d).
    pub fn reduce_rational_pair(&self, qf: &QuadField, a: &Q, b: &Q) -> Result<Fp> {
        let x = qf.from_alg(&AlgElem::from_coeffs(&qf.field, &[a.clone(), b.clone()]))?;
        Ok(self.reduce(x))
    }
    pub fn p1_points(&self) -> Vec<(u64, u64)> {
        let q = self.norm as u64;
        if self.is_unit_ideal() {
            return vec![(0, 1)];
        }
        let mut v: Vec<(u64, u64)> = (0..q).map(|x| (x, 1)).collect();
        v.push((1, 0));
        v
    }
    /// Index of the normalized point [x : y].
    pub fn p1_index(&self, x: Fp, y: Fp) -> usize {
        if self.is_unit_ideal() {
            return 0;
        }
        if y.v != 0 {
            x.mul_ref(&y.inv_ref()).v as usize
        } else {
            assert!(x.v != 0, "[0:0] is not a point");
            self.norm as usize
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharKind {
    Trivial,
    Quadratic,
}

/// Character of (O_F / level)^x: trivial or the quadratic residue symbol.
#[derive(Clone, Debug)]
pub struct EpsilonChar {
    pub level: Level,
    pub kind: CharKind,
}

impl EpsilonChar {
    pub fn new(level: Level, kind: CharKind) -> Result<Self> {
        if kind == CharKind::Quadratic && level.is_unit_ideal() {
            return Err(Error::Config("a quadratic character needs a nontrivial level".into()));
        }
        Ok(EpsilonChar { level, kind })
    }
    pub fn eval_fp(&self, x: Fp) -> i32 {
        if self.level.is_unit_ideal() {
            return 1;
        }
        if x.v == 0 {
            return 0;
        }
        match self.kind {
            CharKind::Trivial => 1,
            CharKind::Quadratic => x.legendre(),
        }
    }
    pub fn eval(&self, x: QuadInt) -> i32 {
        if self.level.is_unit_ideal() {
            return 1;
        }
        self.eval_fp(self.level.reduce(x))
    }
}

/// Compatibility of the character with the weight on global units:
/// eps(u) = prod sign(sigma_i(u))^(k_i) for u in {-1, fundamental unit}.
pub fn check_sign_condition(qf: &QuadField, k: &[i64], eps: &EpsilonChar) -> Result<()> {
    for u in [QuadInt::int(-1), qf.unit] {
        let lhs = eps.eval(u);
        let s1 = if qf.sign1(u) < 0 && k[0] % 2 != 0 { -1 } else { 1 };
        let s2 = if qf.sign2(u) < 0 && k[1] % 2 != 0 { -1 } else { 1 };
        if lhs != s1 * s2 {
            return Err(Error::Certificate(format!(
                "sign condition fails at unit {}: character gives {}, weight gives {}",
                qf.render(u),
                lhs,
                s1 * s2
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units() {
        let f2 = QuadField::new(2).unwrap();
        assert_eq!(f2.unit, QuadInt::new(1, 1));
        assert_eq!(f2.unit_norm, -1);
        let f3 = QuadField::new(3).unwrap();
        assert_eq!(f3.unit, QuadInt::new(2, 1));
        assert_eq!(f3.unit_norm, 1);
        let f5 = QuadField::new(5).unwrap();
        assert_eq!(f5.unit, QuadInt::new(0, 1));
        assert_eq!(f5.unit_norm, -1);
        let f94 = QuadField::new(94).unwrap();
        assert_eq!(f94.unit, QuadInt::new(2143295, 221064));
    }

    #[test]
    fn canonical_generator_of_level() {
        let f = QuadField::new(2).unwrap();
        let g = f.totally_positive_generator(QuadInt::new(5, -3)).unwrap();
        assert_eq!(g, QuadInt::new(3, 1));
        assert!(f.is_totally_positive(QuadInt::new(5, -3)));
        assert!(!f.is_totally_positive(QuadInt::new(1, 1)));
    }

    #[test]
    fn residue_character_values() {
        let f = QuadField::new(2).unwrap();
        let lvl = Level::new(&f, QuadInt::new(5, -3)).unwrap();
        assert_eq!(lvl.norm, 7);
        assert_eq!(lvl.reduce(QuadInt::new(0, 1)).v, 4);
        let eps = EpsilonChar::new(lvl, CharKind::Quadratic).unwrap();
        assert_eq!(eps.eval(QuadInt::int(3)), -1);
        assert_eq!(eps.eval(QuadInt::new(5, -2)), 1);
        assert_eq!(eps.eval(QuadInt::int(5)), -1);
        assert_eq!(eps.eval(QuadInt::int(11)), 1);
        assert_eq!(eps.eval(QuadInt::new(5, -3)), 0);
    }

    #[test]
    fn sign_condition() {
        let f = QuadField::new(2).unwrap();
        let lvl = Level::new(&f, QuadInt::new(5, -3)).unwrap();
        let eps = EpsilonChar::new(lvl.clone(), CharKind::Quadratic).unwrap();
        assert!(check_sign_condition(&f, &[4, 3], &eps).is_ok());
        let triv = EpsilonChar::new(lvl, CharKind::Trivial).unwrap();
        assert!(check_sign_condition(&f, &[4, 3], &triv).is_err());
    }

    #[test]
    fn parse_and_render() {
        let f = QuadField::new(2).unwrap();
        assert_eq!(f.parse("5 - 3w").unwrap(), QuadInt::new(5, -3));
        assert_eq!(f.parse("-w").unwrap(), QuadInt::new(0, -1));
        assert_eq!(f.render(QuadInt::new(5, 2)), "2w + 5");
        assert_eq!(f.render(QuadInt::new(-18, -8)), "-8w - 18");
        assert_eq!(f.render(QuadInt::new(-10, 0)), "-10");
    }

    #[test]
    fn primes_of_qsqrt2() {
        let f = QuadField::new(2).unwrap();
        let ps = f.primes_below(30).unwrap();
        let norms: Vec<i64> = ps.iter().map(|p| p.norm).collect();
        assert_eq!(norms, vec![2, 7, 7, 9, 17, 17, 23, 23, 25]);
        for p in &ps {
            assert!(f.is_totally_positive(p.gen));
            assert_eq!(f.norm(p.gen) as i64, p.norm);
        }
    }
}
