//! Orchestration: setup from a config, Hecke matrices on demand, eigen systems,
//! table rows and Frobenius polynomials.

use hmf_core::brandt::{eigen_decompose, hecke_t, invariant_space, normalized_eigenvalue, EigenSystem, HeckeMatrix, HeckeSetup, InvariantSpace};
use hmf_core::galois::{frob_inert, frob_split, functional_equation_sign, go4_inert_oracle, go4_split_oracle, satake_naive_charpoly, FrobPoly};
use hmf_core::numfield::{join_tower, AlgElem};
use hmf_core::poly::Poly;
use hmf_core::quadfield::{check_sign_condition, parse_sqrt_expr, CharKind, EpsilonChar, Level, PrimeKind, QuadField, QuadInt};
use hmf_core::quaternion::{MaximalityCertificate, QuatAlgebra, QuatOrder};
use hmf_core::ring::FieldOps;
use hmf_core::weight::{LevelModule, WeightSpec};
use hmf_core::Error;
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use crate::config::{JobConfig, P2Route};
use crate::CliError;

pub struct Job {
    pub cfg: JobConfig,
    pub qf: Arc<QuadField>,
    pub setup: HeckeSetup,
    pub space: InvariantSpace,
    pub cert: MaximalityCertificate,
    pub order_default: bool,
    /// Ok, or the reason the weight and character are incompatible on global units.
    pub sign_gate: Result<(), String>,
    pub algebra_disc: QuadInt,
    hecke: HashMap<QuadInt, HeckeMatrix>,
}

#[derive(Clone, Debug)]
pub enum Row {
    Split { p: i64, v1: QuadInt, v2: QuadInt, t1: AlgElem, t2: AlgElem },
    Inert { p: i64, t: AlgElem },
}

impl Row {
    pub fn norm(&self) -> i64 {
        match self {
            Row::Split { p, .. } => *p,
            Row::Inert { p, .. } => p * p,
        }
    }
}

pub struct FrobRow {
    pub frob: FrobPoly,
    /// |constant term| = p^exponent.
    pub exponent: u32,
    pub sign: i32,
}

fn parse_int(qf: &QuadField, what: &str, s: &str) -> Result<QuadInt, CliError> {
    qf.parse(s).map_err(|e| CliError::Config(format!("{}: {}", what, e)))
}

impl Job {
    pub fn new(cfg: JobConfig, cache: Option<PathBuf>) -> Result<Job, CliError> {
        let raw = &cfg.raw;
        let qf = QuadField::new(raw.field.d).map_err(|e| CliError::Config(format!("field.d: {}", e)))?;
        let a = parse_int(&qf, "algebra.a", &raw.algebra.a)?;
        let b = parse_int(&qf, "algebra.b", &raw.algebra.b)?;
        let algebra_disc = parse_int(&qf, "algebra.discriminant", &raw.algebra.discriminant)?;
        let alg = QuatAlgebra::new(qf.clone(), a, b).map_err(|e| CliError::Config(format!("algebra: {}", e)))?;
        let (order, order_default) = match &raw.algebra.order {
            Some(rows) => {
                let f = &qf.field;
                let mut basis = vec![];
                for row in rows {
                    let mut c = vec![];
                    for s in row {
                        let (x, y) = parse_sqrt_expr(s).map_err(|e| CliError::Config(format!("algebra.order: {}", e)))?;
                        c.push(AlgElem::from_coeffs(f, &[x, y]));
                    }
                    basis.push(alg.from_coeffs([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]));
                }
                let basis: [_; 4] = basis.try_into().unwrap();
                (QuatOrder::new(alg, basis)?, false)
            }
            None => {
                if raw.field.d != 2 || a != QuadInt::int(-1) || b != QuadInt::int(-1) {
                    return Err(CliError::Config(
                        "algebra.order is required unless d = 2 and (a, b) = (-1, -1)".into(),
                    ));
                }
                (QuatOrder::standard_maximal_sqrt2(alg)?, true)
            }
        };
        let cert = order.verify_maximal(algebra_disc)?;
        if !cert.maximal {
            return Err(CliError::Core(Error::Certificate(format!(
                "order is not maximal for discriminant {}: Z-Gram determinant {} but {} expected",
                qf.render(algebra_disc),
                cert.z_gram_det,
                cert.expected_z_det
            ))));
        }
        let order = Arc::new(order);
        let level_gen = parse_int(&qf, "level.generator", &raw.level.generator)?;
        let level = Level::new(&qf, level_gen).map_err(|e| CliError::Config(format!("level.generator: {}", e)))?;
        let kind = if cfg.quadratic_character { CharKind::Quadratic } else { CharKind::Trivial };
        let eps = EpsilonChar::new(level, kind).map_err(|e| CliError::Config(format!("character: {}", e)))?;
        let sign_gate = check_sign_condition(&qf, &raw.weight.k, &eps).map_err(|e| e.to_string());
        let mut weight = WeightSpec::naive(raw.weight.k).map_err(|e| CliError::Config(format!("weight.k: {}", e)))?;
        weight.nrd_twist = raw.weight.nrd_twist;
        let module = LevelModule::new(order, weight, eps)?;
        let setup = HeckeSetup::new(module, cache)?;
        let space = invariant_space(&setup)?;
        Ok(Job { cfg, qf, setup, space, cert, order_default, sign_gate, algebra_disc, hecke: HashMap::new() })
    }

    pub fn level(&self) -> &Level {
        self.setup.module.level()
    }

    pub fn eps(&self, x: QuadInt) -> i32 {
        self.setup.module.eps.eval(x)
    }

    pub fn hecke(&mut self, x: QuadInt) -> Result<&HeckeMatrix, CliError> {
        if !self.hecke.contains_key(&x) {
            let h = hecke_t(&self.setup, &self.space, x)?;
            self.hecke.insert(x, h);
        }
        Ok(&self.hecke[&x])
    }

    /// Whether p can appear in the tables: unramified in F, prime to the level and to d_B.
    pub fn check_prime(&self, p: i64) -> Result<PrimeKind, CliError> {
        if !hmf_core::quadfield::is_prime(p) {
            return Err(CliError::Config(format!("{} is not a rational prime", p)));
        }
        let kind = self.qf.prime_kind(p);
        if kind == PrimeKind::Ramified {
            return Err(CliError::Core(Error::Scope(format!("p = {} is ramified in F: unsupported", p))));
        }
        if !self.level().is_coprime(QuadInt::int(p as i128)) {
            return Err(CliError::Config(format!("p = {} lies below a prime dividing the level", p)));
        }
        if self.qf.norm(self.algebra_disc) % (p as i128) == 0 {
            return Err(CliError::Config(format!("p = {} lies below a prime dividing the algebra discriminant", p)));
        }
        Ok(kind)
    }

    /// (varpi1, varpi2) with varpi1 varpi2 = p, from the generator table or the
    /// canonical generator of least sigma1.
    pub fn split_generators(&self, p: i64) -> Result<(QuadInt, QuadInt), CliError> {
        let qf = &self.qf;
        let v1 = match self.cfg.generators.get(&p) {
            Some(s) => {
                let v = parse_int(qf, &format!("generators.{}", p), s)?;
                if qf.norm(v) != p as i128 || !qf.is_totally_positive(v) {
                    return Err(CliError::Config(format!(
                        "generators.{}: {} is not a totally positive element of norm {}",
                        p,
                        qf.render(v),
                        p
                    )));
                }
                v
            }
            None => qf.canonical_elements_of_norm(p)[0],
        };
        let v2 = qf.div_exact(QuadInt::int(p as i128), v1).expect("norm p element divides p");
        Ok((v1, v2))
    }

    /// Rational primes with a prime above them of norm below the bound, that can appear in the tables.
    pub fn table_primes(&self, bound: i64) -> Vec<(i64, PrimeKind)> {
        let mut out = vec![];
        for p in 2..bound {
            if !hmf_core::quadfield::is_prime(p) {
                continue;
            }
            let Ok(kind) = self.check_prime(p) else { continue };
            let norm = if kind == PrimeKind::Inert { p * p } else { p };
            if norm < bound {
                out.push((norm, p, kind));
            }
        }
        out.sort_by_key(|&(n, p, _)| (n, p));
        out.into_iter().map(|(_, p, k)| (p, k)).collect()
    }

    fn probe_targets(&self) -> Result<Vec<QuadInt>, CliError> {
        if !self.cfg.raw.eigen.probes.is_empty() {
            return self
                .cfg
                .raw
                .eigen
                .probes
                .iter()
                .enumerate()
                .map(|(i, s)| parse_int(&self.qf, &format!("eigen.probes[{}]", i), s))
                .collect();
        }
        let mut out = vec![];
        for (p, kind) in self.table_primes(200) {
            match kind {
                PrimeKind::Inert => out.push(QuadInt::int(p as i128)),
                _ => {
                    let (v1, v2) = self.split_generators(p)?;
                    out.push(v1);
                    out.push(v2);
                }
            }
            if out.len() >= 4 {
                break;
            }
        }
        Ok(out)
    }

    pub fn eigen_systems(&mut self) -> Result<Vec<EigenSystem>, CliError> {
        if self.space.dim() == 0 {
            return Err(CliError::Core(Error::Scope("the space is zero: nothing to tabulate".into())));
        }
        let targets = self.probe_targets()?;
        let mut probes = vec![];
        for t in targets {
            probes.push(self.hecke(t)?.clone());
        }
        let b2 = match &self.cfg.raw.eigen.b_square {
            Some(s) => Some(self.qf.to_alg(parse_int(&self.qf, "eigen.b_square", s)?)),
            None => None,
        };
        Ok(eigen_decompose(&self.setup, &self.space, &probes, b2.as_ref())?)
    }

    /// Eigenvalue of T(x), with the configured b -> -b conjugation applied.
    pub fn eigenvalue(&mut self, es: &EigenSystem, x: QuadInt) -> Result<AlgElem, CliError> {
        let t = es.eigenvalue(self.hecke(x)?)?;
        Ok(self.orient(es, &t))
    }

    pub fn orient(&self, es: &EigenSystem, t: &AlgElem) -> AlgElem {
        if self.cfg.raw.eigen.conjugate_b && es.b_square.is_some() {
            let (x, y) = es.parts(t);
            join_tower(&es.l, &x, &y.neg())
        } else {
            t.clone()
        }
    }

    pub fn rows(&mut self, es: &EigenSystem, bound: i64) -> Result<Vec<Row>, CliError> {
        let mut rows = vec![];
        for (p, kind) in self.table_primes(bound) {
            match kind {
                PrimeKind::Inert => {
                    let t = self.eigenvalue(es, QuadInt::int(p as i128))?;
                    rows.push(Row::Inert { p, t });
                }
                _ => {
                    let (v1, v2) = self.split_generators(p)?;
                    let t1 = self.eigenvalue(es, v1)?;
                    let t2 = self.eigenvalue(es, v2)?;
                    rows.push(Row::Split { p, v1, v2, t1, t2 });
                }
            }
        }
        Ok(rows)
    }

    /// Normalized eigenvalue as decimal (re, im) strings under sigma1.
    pub fn normalized(&self, es: &EigenSystem, t: &AlgElem, v: QuadInt, bits: u32) -> Result<(String, String), CliError> {
        // undo the conjugation: the approximation follows the computed orientation
        let t0 = self.orient(es, t);
        let n = normalized_eigenvalue(&self.setup, es, &t0, v, bits)?;
        let im = if self.cfg.raw.eigen.conjugate_b { negate_decimal(&n.im) } else { n.im };
        Ok((n.re, im))
    }

    /// Exponent e with A = p^e eps(p).
    pub fn frob_exponent(&self) -> u32 {
        let c = self.setup.module.weight.central_exponents();
        (c[0] + c[1] + 2) as u32
    }

    /// H_v for a prime generator v.
    pub fn satake(&self, es: &EigenSystem, v: QuadInt, t: &AlgElem) -> Poly<AlgElem> {
        let c = self.setup.module.weight.central_exponents();
        satake_naive_charpoly(&self.qf, [c[0] + 2, c[1] + 2], v, self.eps(v), t, |x| es.from_f(x))
    }

    /// t(v^2) from the relation T(v)^2 = T(v^2) + Nm(v) S(v).
    fn t_square(&self, es: &EigenSystem, v: QuadInt, t: &AlgElem) -> AlgElem {
        t.mul(t).sub(&self.satake(es, v, t).coeffs[0])
    }

    /// Frobenius polynomial, certified by the orthogonal-group model.
    pub fn frob(&mut self, es: &EigenSystem, p: i64) -> Result<FrobRow, CliError> {
        let kind = self.check_prime(p)?;
        let e = self.frob_exponent();
        let pq = QuadInt::int(p as i128);
        let eps_p = self.eps(pq);
        let (frob, oracle) = match kind {
            PrimeKind::Inert => {
                let t = self.eigenvalue(es, pq)?;
                let oracle = go4_inert_oracle(p, &t, e, eps_p)?;
                (frob_inert(p, &t, e, eps_p), oracle)
            }
            _ => {
                let (v1, v2) = self.split_generators(p)?;
                let t1 = self.eigenvalue(es, v1)?;
                let t2 = self.eigenvalue(es, v2)?;
                let tp = t1.mul(&t2);
                let formula = self.t_square(es, v1, &t1).mul(&self.t_square(es, v2, &t2));
                let tp2 = match self.cfg.p2_route {
                    P2Route::Formula => formula,
                    P2Route::Direct => self.eigenvalue(es, self.qf.mul(pq, pq))?,
                    P2Route::Both => {
                        let direct = self.eigenvalue(es, self.qf.mul(pq, pq))?;
                        if direct != formula {
                            return Err(CliError::Core(Error::Certificate(format!(
                                "t({}^2): direct sum gives {}, relation gives {}",
                                p, direct, formula
                            ))));
                        }
                        direct
                    }
                };
                let h1 = self.satake(es, v1, &t1);
                let h2 = self.satake(es, v2, &t2);
                (frob_split(p, &tp, &tp2, e, eps_p), go4_split_oracle(&h1, &h2)?)
            }
        };
        if frob.poly != oracle {
            return Err(CliError::Core(Error::Certificate(format!(
                "Frobenius polynomial at p = {} disagrees with the orthogonal-group model",
                p
            ))));
        }
        let a = AlgElem::from_int(&frob.poly.coeffs[0].field, eps_p as i64).mul(&AlgElem::from_int(&frob.poly.coeffs[0].field, p).pow_u(e as u64));
        let sign = functional_equation_sign(&frob.poly, &a)
            .ok_or_else(|| CliError::Core(Error::Certificate(format!("no functional equation at p = {}", p))))?;
        Ok(FrobRow { frob, exponent: 2 * e, sign })
    }
}

fn negate_decimal(s: &str) -> String {
    match s.strip_prefix('-') {
        Some(r) => r.to_string(),
        None if s.chars().all(|c| c == '0' || c == '.') => s.to_string(),
        None => format!("-{}", s),
    }
}
