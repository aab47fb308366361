//! Factorization of monic squarefree integer polynomials (Zassenhaus:
//! Cantor-Zassenhaus modulo a small prime, linear Hensel lifting, subset recombination).

use crate::poly::{Poly, QPoly};
use crate::ring::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Fpx = Vec<u64>;

fn trim(mut a: Fpx) -> Fpx {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_sub(a: &Fpx, b: &Fpx, p: u64) -> Fpx {
    let n = a.len().max(b.len());
    trim((0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect())
}

fn fp_mul(a: &Fpx, b: &Fpx, p: u64) -> Fpx {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    trim(r)
}

fn fp_divrem(a: &Fpx, d: &Fpx, p: u64) -> (Fpx, Fpx) {
    let dd = d.len() - 1;
    let inv = inv_mod(*d.last().unwrap(), p);
    let mut r = a.clone();
    if r.len() <= dd {
        return (vec![], trim(r));
    }
    let mut q = vec![0u64; r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd] * inv % p;
        if c != 0 {
            for (j, dj) in d.iter().enumerate() {
                r[k + j] = (r[k + j] + p * p - c * dj % p) % p;
            }
        }
        q[k] = c;
    }
    r.truncate(dd);
    (trim(q), trim(r))
}

fn fp_monic(a: &Fpx, p: u64) -> Fpx {
    if a.is_empty() {
        return vec![];
    }
    let inv = inv_mod(*a.last().unwrap(), p);
    a.iter().map(|x| x * inv % p).collect()
}

fn fp_gcd(a: &Fpx, b: &Fpx, p: u64) -> Fpx {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    fp_monic(&x, p)
}

fn fp_ext_gcd(a: &Fpx, b: &Fpx, p: u64) -> (Fpx, Fpx, Fpx) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fpx, Fpx) = (vec![1], vec![]);
    let (mut t0, mut t1): (Fpx, Fpx) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        r0 = r1;
        r1 = r;
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        s0 = s1;
        s1 = s;
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        t0 = t1;
        t1 = t;
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &Fpx| trim(v.iter().map(|x| x * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_powmod(a: &Fpx, mut e: u128, m: &Fpx, p: u64) -> Fpx {
    let mut base = fp_divrem(a, m, p).1;
    let mut acc = fp_divrem(&vec![1], m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_divrem(&fp_mul(&acc, &base, p), m, p).1;
        }
        base = fp_divrem(&fp_mul(&base, &base, p), m, p).1;
        e >>= 1;
    }
    acc
}

fn fp_deriv(a: &Fpx, p: u64) -> Fpx {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect())
}

fn reduce(f: &[BigInt], p: u64) -> Fpx {
    let pb = BigInt::from(p);
    trim(f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

/// Distinct-degree then equal-degree splitting into monic irreducible factors mod p.
fn factor_mod_p(f: &Fpx, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fpx> {
    let mut out = vec![];
    let mut g = fp_monic(f, p);
    let x: Fpx = vec![0, 1];
    let mut h = x.clone();
    let mut i = 1usize;
    while g.len() - 1 >= 2 * i {
        h = fp_powmod(&h, p as u128, &g, p);
        let d = fp_gcd(&fp_sub(&h, &x, p), &g, p);
        if d.len() > 1 {
            out.extend(equal_degree(&d, i, p, rng));
            g = fp_divrem(&g, &d, p).0;
            h = fp_divrem(&h, &g, p).1;
        }
        i += 1;
    }
    if g.len() > 1 {
        out.push(g);
    }
    out
}

fn equal_degree(f: &Fpx, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fpx> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let e = ((p as u128).pow(d as u32) - 1) / 2;
    loop {
        let a: Fpx = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, e, f, p), &vec![1], p);
        let g = fp_gcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let q = fp_divrem(f, &g, p).0;
            let mut r = equal_degree(&g, d, p, rng);
            r.extend(equal_degree(&fp_monic(&q, p), d, p, rng));
            return r;
        }
    }
}

fn zpoly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

fn zpoly_trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().map_or(false, |c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zpoly_mod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    zpoly_trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    zpoly_trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Exact division by a monic integer polynomial; None if it does not divide.
fn zpoly_div_exact(a: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    let dd = d.len() - 1;
    if a.len() < d.len() {
        return None;
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd].clone();
        if !c.is_zero() {
            for (j, dj) in d.iter().enumerate() {
                r[k + j] -= &c * dj;
            }
        }
        q[k] = c;
    }
    if r[..dd].iter().all(|c| c.is_zero()) {
        Some(q)
    } else {
        None
    }
}

fn to_big(a: &Fpx) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lift f = g*h (mod p) to mod p^k, g and h monic.
fn hensel_pair(f: &[BigInt], g: &Fpx, h: &Fpx, p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (_, _, t) = fp_ext_gcd(g, h, p);
    let pb = BigInt::from(p);
    let mut gz = to_big(g);
    let mut hz = to_big(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        let prod = zpoly_mul(&gz, &hz);
        let n = f.len().max(prod.len());
        let diff: Vec<BigInt> = (0..n)
            .map(|i| {
                f.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default()
            })
            .collect();
        let e: Vec<BigInt> = diff.iter().map(|c| c / &pj).collect();
        let e = reduce(&e, p);
        let g_p = reduce(&gz, p);
        let h_p = reduce(&hz, p);
        let dg = fp_divrem(&fp_mul(&t, &e, p), &g_p, p).1;
        let rest = fp_sub(&e, &fp_mul(&dg, &h_p, p), p);
        let (dh, rr) = fp_divrem(&rest, &g_p, p);
        debug_assert!(rr.is_empty());
        let next = &pj * &pb;
        let add = |a: &mut Vec<BigInt>, d: &Fpx| {
            if a.len() < d.len() {
                a.resize(d.len(), BigInt::zero());
            }
            for (i, c) in d.iter().enumerate() {
                a[i] += &pj * BigInt::from(*c);
            }
        };
        add(&mut gz, &dg);
        add(&mut hz, &dh);
        gz = zpoly_mod(&gz, &next);
        hz = zpoly_mod(&hz, &next);
        pj = next;
    }
    (gz, hz)
}

fn hensel_multi(f: &[BigInt], factors: &[Fpx], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        return vec![zpoly_mod(f, &BigInt::from(p).pow(k))];
    }
    let g = &factors[0];
    let mut h: Fpx = vec![1];
    for x in &factors[1..] {
        h = fp_mul(&h, x, p);
    }
    let (gz, hz) = hensel_pair(f, g, &h, p, k);
    let mut out = vec![gz];
    out.extend(hensel_multi(&hz, &factors[1..], p, k));
    out
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..200).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Monic irreducible factors over Z of a monic squarefree integer polynomial.
pub fn factor_monic_squarefree(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let f = zpoly_trim(f.to_vec());
    let n = f.len() - 1;
    assert!(f.last().map_or(false, |c| c.is_one()), "factor: polynomial must be monic");
    if n <= 1 {
        return vec![f];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best: Option<(u64, Vec<Fpx>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (p as u128).checked_pow(n as u32).is_none() {
            break;
        }
        let fp = reduce(&f, p);
        if fp.len() != f.len() {
            continue;
        }
        if fp_gcd(&fp, &fp_deriv(&fp, p), p).len() != 1 {
            continue;
        }
        let facs = factor_mod_p(&fp, p, &mut rng);
        if facs.len() == 1 {
            return vec![f];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, facs) = best.expect("no suitable prime for factorization");
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << (n + 2)) * (norm2.sqrt() + 1u32);
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut m = pb.clone();
    while m <= bound {
        m *= &pb;
        k += 1;
    }
    let lifted = hensel_multi(&f, &facs, p, k);
    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut g = f.clone();
    let mut out = vec![];
    let mut s = 1usize;
    while 2 * s <= remaining.len() {
        let mut found = false;
        for subset in subsets(remaining.len(), s) {
            let mut cand = vec![BigInt::one()];
            for &i in &subset {
                cand = zpoly_mod(&zpoly_mul(&cand, &remaining[i]), &m);
            }
            let cand = symmetric(&cand, &m);
            if let Some(q) = zpoly_div_exact(&g, &cand) {
                out.push(cand);
                g = q;
                let keep: Vec<Vec<BigInt>> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                remaining = keep;
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    out.push(g);
    out.sort_by_key(|v| v.len());
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, n, k, &mut vec![], &mut out);
    out
}

/// Monic irreducible factors over Q of a rational polynomial (with multiplicity
/// collapsed: the squarefree part is factored).
pub fn factor_rational(f: &QPoly) -> Vec<QPoly> {
    let g = f.squarefree_part();
    let n = g.degree().expect("factor of zero polynomial");
    if n == 0 {
        return vec![];
    }
    // g(X) monic rational; h(Y) = D^n g(Y/D) is monic integral for D = lcm of denominators.
    let mut d = BigInt::one();
    for c in &g.coeffs {
        d = d.lcm(c.denom());
    }
    let dq = Q::from_integer(d.clone());
    let hz: Vec<BigInt> = (0..=n)
        .map(|i| {
            let c = &g.coeffs[i] * dq.pow((n - i) as i32);
            assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    let facs = factor_monic_squarefree(&hz);
    facs.into_iter()
        .map(|fz| {
            // back-substitute Y = D X: factor(X) = D^{-m} fz(D X)
            let m = fz.len() - 1;
            let coeffs: Vec<Q> = (0..=m)
                .map(|i| Q::from_integer(fz[i].clone()) * dq.pow(i as i32) / dq.pow(m as i32))
                .collect();
            Poly::new(coeffs, Q::zero())
        })
        .collect()
}

pub fn is_irreducible_monic(f: &[BigInt]) -> bool {
    let q = crate::poly::qpoly_from_bigints(f);
    if q.squarefree_part().degree() != q.degree() {
        return false;
    }
    factor_monic_squarefree(f).len() == 1
}
