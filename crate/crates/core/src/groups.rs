//! Finite groups as Cayley tables: subgroups, automorphisms, isomorphism tests,
//! a catalog of small groups, and the two homomorphism constructions (induction
//! into a wreath-type product, extension across an index-2 subgroup).

use crate::error::{Error, Result};
use std::collections::{HashMap, VecDeque};

/// Subsets of a group of order at most 64, as bitmasks.
pub type Mask = u64;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub inv: Vec<usize>,
}

impl FiniteGroup {
    /// Checks closure, identity, inverses and associativity exhaustively.
    pub fn from_table(name: &str, table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 || n > 64 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Certificate(format!("{}: malformed table", name)));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Certificate(format!("{}: no identity", name)))?;
        let mut inv = vec![0; n];
        for x in 0..n {
            inv[x] = (0..n)
                .find(|&y| table[x][y] == identity)
                .ok_or_else(|| Error::Certificate(format!("{}: element without inverse", name)))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::Certificate(format!("{}: not associative", name)));
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.to_string(), table, identity, inv })
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(&format!("C{}", n), table).unwrap()
    }

    /// Group generated by permutations of 0..m.
    pub fn from_permutations(name: &str, gens: &[Vec<usize>]) -> Result<FiniteGroup> {
        let m = gens[0].len();
        let id: Vec<usize> = (0..m).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let x: Vec<usize> = (0..m).map(|k| elems[i][g[k]]).collect();
                if !index.contains_key(&x) {
                    index.insert(x.clone(), elems.len());
                    elems.push(x);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let table = (0..n)
            .map(|a| (0..n).map(|b| index[&(0..m).map(|k| elems[a][elems[b][k]]).collect::<Vec<_>>()]).collect())
            .collect();
        FiniteGroup::from_table(name, table)
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (a.order(), b.order());
        let table = (0..n * m)
            .map(|x| (0..n * m).map(|y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m)).collect())
            .collect();
        FiniteGroup::from_table(&format!("{}x{}", a.name, b.name), table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv[g])
    }
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
    pub fn center(&self) -> Vec<usize> {
        (0..self.order()).filter(|&z| (0..self.order()).all(|x| self.mul(z, x) == self.mul(x, z))).collect()
    }
    pub fn centralizer_of(&self, s: &[usize]) -> Vec<usize> {
        (0..self.order()).filter(|&v| s.iter().all(|&x| self.mul(v, x) == self.mul(x, v))).collect()
    }

    /// Subgroup generated by a set.
    pub fn generated(&self, gens: Mask) -> Mask {
        let mut m: Mask = 1 << self.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for g in 0..self.order() {
                if gens >> g & 1 == 1 {
                    let y = self.mul(x, g);
                    if m >> y & 1 == 0 {
                        m |= 1 << y;
                        queue.push_back(y);
                    }
                }
            }
        }
        m
    }

    /// All subgroups, as masks, by repeatedly joining cyclic subgroups.
    pub fn subgroups(&self) -> Vec<Mask> {
        let cyclic: Vec<Mask> = {
            let mut v: Vec<Mask> = (0..self.order()).map(|g| self.generated(1 << g)).collect();
            v.sort();
            v.dedup();
            v
        };
        let mut all: Vec<Mask> = cyclic.clone();
        let mut frontier = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = vec![];
            for &h in &frontier {
                for &c in &cyclic {
                    if h & c != c {
                        let j = self.generated(h | c);
                        if !all.contains(&j) && !next.contains(&j) {
                            next.push(j);
                        }
                    }
                }
            }
            all.extend(&next);
            frontier = next;
        }
        all.sort_by_key(|m| (m.count_ones(), *m));
        all
    }

    pub fn is_normal(&self, h: Mask) -> bool {
        (0..self.order()).all(|g| (0..self.order()).filter(|&x| h >> x & 1 == 1).all(|x| h >> self.conj(g, x) & 1 == 1))
    }

    /// Left coset representatives u_i of a subgroup (u_1 the identity), or an
    /// error if the given list is not a transversal.
    pub fn check_transversal(&self, sub: Mask, reps: &[usize]) -> Result<()> {
        let k = sub.count_ones() as usize;
        if reps.is_empty() || reps[0] != self.identity || reps.len() * k != self.order() {
            return Err(Error::Config("coset representatives: wrong count or first is not the identity".into()));
        }
        let mut covered: Mask = 0;
        for &r in reps {
            for v in 0..self.order() {
                if sub >> v & 1 == 1 {
                    covered |= 1 << self.mul(r, v);
                }
            }
        }
        if covered.count_ones() as usize != self.order() {
            return Err(Error::Config("coset representatives do not form a transversal".into()));
        }
        Ok(())
    }

    /// A subgroup as a group in its own right, with the inclusion map.
    pub fn subgroup_as_group(&self, h: Mask) -> Result<(FiniteGroup, Vec<usize>)> {
        if self.generated(h) != h {
            return Err(Error::Config("not a subgroup".into()));
        }
        let elems: Vec<usize> = (0..self.order()).filter(|&x| h >> x & 1 == 1).collect();
        let pos = |g: usize| elems.iter().position(|&x| x == g).unwrap();
        let table = elems.iter().map(|&a| elems.iter().map(|&b| pos(self.mul(a, b))).collect()).collect();
        Ok((FiniteGroup::from_table(&format!("{}_sub", self.name), table)?, elems))
    }

    pub fn left_transversal(&self, sub: Mask) -> Vec<usize> {
        let mut reps = vec![self.identity];
        let mut covered: Mask = sub;
        for g in 0..self.order() {
            if covered >> g & 1 == 0 {
                reps.push(g);
                for v in 0..self.order() {
                    if sub >> v & 1 == 1 {
                        covered |= 1 << self.mul(g, v);
                    }
                }
            }
        }
        reps
    }

    /// A generating set built greedily from elements of large order.
    fn generating_set(&self) -> Vec<usize> {
        let mut elems: Vec<usize> = (0..self.order()).collect();
        elems.sort_by_key(|&g| (std::cmp::Reverse(self.element_order(g)), g));
        let mut gens = vec![];
        let mut h: Mask = 1 << self.identity;
        for g in elems {
            if h >> g & 1 == 0 {
                gens.push(g);
                h = self.generated(h | 1 << g);
            }
        }
        gens
    }

    fn profile(&self, g: usize) -> (usize, usize) {
        (self.element_order(g), self.centralizer_of(&[g]).len())
    }

    /// Extend generator images to a map by words; Some(map) if it is a homomorphism.
    fn extend_by_words(&self, gens: &[usize], images: &[usize], target: &FiniteGroup) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order()];
        map[self.identity] = target.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &h) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = target.mul(map[x], h);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        if is_homomorphism(self, target, &map) {
            Some(map)
        } else {
            None
        }
    }

    /// All isomorphisms onto another group (the automorphism group when other = self).
    pub fn isomorphisms(&self, other: &FiniteGroup, first_only: bool) -> Vec<Vec<usize>> {
        if self.order() != other.order() {
            return vec![];
        }
        let gens = self.generating_set();
        let cands: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let p = self.profile(g);
                (0..other.order()).filter(|&h| other.profile(h) == p).collect()
            })
            .collect();
        let mut out = vec![];
        let mut images = vec![0; gens.len()];
        fn rec(
            s: &FiniteGroup,
            o: &FiniteGroup,
            gens: &[usize],
            cands: &[Vec<usize>],
            i: usize,
            images: &mut Vec<usize>,
            first_only: bool,
            out: &mut Vec<Vec<usize>>,
        ) {
            if first_only && !out.is_empty() {
                return;
            }
            if i == gens.len() {
                if let Some(m) = s.extend_by_words(gens, images, o) {
                    let mut seen = vec![false; m.len()];
                    if m.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        out.push(m);
                    }
                }
                return;
            }
            for &h in &cands[i] {
                images[i] = h;
                rec(s, o, gens, cands, i + 1, images, first_only, out);
            }
        }
        rec(self, other, &gens, &cands, 0, &mut images, first_only, &mut out);
        out
    }

    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        self.invariants() == other.invariants() && !self.isomorphisms(other, true).is_empty()
    }

    /// Sorted (order, centralizer size) profile plus center and derived sizes.
    pub fn invariants(&self) -> (usize, Vec<(usize, usize)>, usize, usize) {
        let mut p: Vec<(usize, usize)> = (0..self.order()).map(|g| self.profile(g)).collect();
        p.sort();
        let comm: Mask = (0..self.order())
            .flat_map(|a| (0..self.order()).map(move |b| (a, b)))
            .fold(0, |m, (a, b)| m | 1 << self.mul(self.mul(a, b), self.mul(self.inv[a], self.inv[b])));
        (self.order(), p, self.center().len(), self.generated(comm).count_ones() as usize)
    }

    /// N.C_p with g acting by phi and g^p = c; None when (phi, c) violates
    /// phi(c) = c or phi^p = conjugation by c.
    pub fn cyclic_extension(n: &FiniteGroup, p: usize, phi: &[usize], c: usize) -> Option<FiniteGroup> {
        if phi[c] != c {
            return None;
        }
        let k = n.order();
        let mut phis = vec![(0..k).collect::<Vec<_>>()];
        for i in 1..=p {
            let prev = &phis[i - 1];
            phis.push((0..k).map(|x| phi[prev[x]]).collect());
        }
        if (0..k).any(|x| phis[p][x] != n.conj(c, x)) {
            return None;
        }
        let table: Vec<Vec<usize>> = (0..k * p)
            .map(|x| {
                let (a, i) = (x % k, x / k);
                (0..k * p)
                    .map(|y| {
                        let (b, j) = (y % k, y / k);
                        let mut e = n.mul(a, phis[i][b]);
                        let mut s = i + j;
                        if s >= p {
                            e = n.mul(e, c);
                            s -= p;
                        }
                        e + k * s
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(&format!("{}.C{}", n.name, p), table).ok()
    }
}

pub fn is_homomorphism(src: &FiniteGroup, dst: &FiniteGroup, map: &[usize]) -> bool {
    map.len() == src.order()
        && (0..src.order()).all(|a| (0..src.order()).all(|b| map[src.mul(a, b)] == dst.mul(map[a], map[b])))
}

fn smallest_prime_factor(n: usize) -> usize {
    (2..=n).find(|p| n % p == 0).unwrap()
}

/// Every group of order at most max_order (all solvable, max_order < 60), up to
/// isomorphism, grouped by order. Built by closing under cyclic extensions of
/// prime index, which reach every solvable group.
pub fn catalog(max_order: usize) -> Vec<Vec<FiniteGroup>> {
    assert!(max_order < 60, "non-solvable groups appear at order 60");
    let mut by_order: Vec<Vec<FiniteGroup>> = vec![vec![]; max_order + 1];
    by_order[1].push(FiniteGroup::cyclic(1));
    for n in 2..=max_order {
        let mut found: Vec<FiniteGroup> = vec![];
        let mut p = smallest_prime_factor(n);
        let mut m = n;
        let mut primes = vec![];
        while m > 1 {
            if m % p == 0 {
                primes.push(p);
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        for &p in &primes {
            for base in by_order[n / p].clone() {
                let auts = base.isomorphisms(&base, false);
                for phi in &auts {
                    for c in 0..base.order() {
                        let Some(g) = FiniteGroup::cyclic_extension(&base, p, phi, c) else { continue };
                        if !found.iter().any(|h| h.is_isomorphic(&g)) {
                            found.push(g);
                        }
                    }
                }
            }
        }
        for (i, g) in found.iter_mut().enumerate() {
            g.name = format!("G{}_{}", n, i + 1);
        }
        by_order[n] = found;
    }
    by_order
}

/// Data for inducing a homomorphism rho: V -> H to U.
pub struct InductionModel<'a> {
    pub u: &'a FiniteGroup,
    pub v: Mask,
    pub reps: Vec<usize>,
    pub h: &'a FiniteGroup,
    /// rho on elements of U lying in V; other entries are ignored.
    pub rho: Vec<usize>,
}

/// Images (f_u, u) in H^(U/V) x| U, with f_u(u_i) = rho(u_i^-1 u u_k) and
/// u_i^-1 u u_k in V; returned as the list of f_u indexed by u.
pub struct InducedHom {
    pub f: Vec<Vec<usize>>,
}

impl InductionModel<'_> {
    fn coset_of(&self, g: usize) -> usize {
        let u = self.u;
        self.reps.iter().position(|&r| self.v >> u.mul(u.inv[r], g) & 1 == 1).unwrap()
    }

    fn check_rho(&self) -> Result<()> {
        let u = self.u;
        for a in 0..u.order() {
            for b in 0..u.order() {
                if self.v >> a & 1 == 1 && self.v >> b & 1 == 1 && self.rho[u.mul(a, b)] != self.h.mul(self.rho[a], self.rho[b]) {
                    return Err(Error::Config("rho is not a homomorphism on V".into()));
                }
            }
        }
        Ok(())
    }

    /// Multiplication in H^(U/V) x| U: (f, a)(f', b) = (x -> f(x) f'(a^-1 x), ab).
    pub fn mul_pair(&self, f: &[usize], a: usize, g: &[usize], b: usize) -> (Vec<usize>, usize) {
        let u = self.u;
        let prod = (0..self.reps.len())
            .map(|x| {
                let y = self.coset_of(u.mul(u.inv[a], self.reps[x]));
                self.h.mul(f[x], g[y])
            })
            .collect();
        (prod, u.mul(a, b))
    }
}

/// The induced map, verified to be a homomorphism on all pairs and to restrict
/// on V, in the first coordinate, to rho.
pub fn induce_finite_lhom(model: &InductionModel) -> Result<InducedHom> {
    let u = model.u;
    if u.generated(model.v) != model.v {
        return Err(Error::Config("V is not a subgroup".into()));
    }
    u.check_transversal(model.v, &model.reps)?;
    model.check_rho()?;
    let d = model.reps.len();
    let f: Vec<Vec<usize>> = (0..u.order())
        .map(|g| {
            (0..d)
                .map(|i| {
                    let ui = model.reps[i];
                    // u_k with g u_k in u_i V
                    let k = model.coset_of(u.mul(u.inv[g], ui));
                    let w = u.mul(u.mul(u.inv[ui], g), model.reps[k]);
                    debug_assert!(model.v >> w & 1 == 1);
                    model.rho[w]
                })
                .collect()
        })
        .collect();
    for a in 0..u.order() {
        for b in 0..u.order() {
            let (prod, ab) = model.mul_pair(&f[a], a, &f[b], b);
            if prod != f[ab] {
                return Err(Error::Certificate(format!("induced map fails on ({}, {})", a, b)));
            }
        }
    }
    for v in 0..u.order() {
        if model.v >> v & 1 == 1 && f[v][0] != model.rho[v] {
            return Err(Error::Certificate("restriction to V does not project to rho".into()));
        }
    }
    Ok(InducedHom { f })
}

#[derive(Debug, PartialEq)]
pub enum ExtensionFailure {
    ImageNotBig,
    NoConjugatingWitness,
    /// v^-2 psi(mu^2), central in V, has no square root in Z(V).
    NoCentralSquareRoot(usize),
}

/// Extend psi: U' -> V across an index-2 subgroup U' of U using mu in U \ U'
/// and a witness v with v psi(x) v^-1 = psi(mu x mu^-1); psi(mu) = v z~ with
/// z~^2 = v^-2 psi(mu^2). Returns the full table on U.
pub fn extend_index2(
    u: &FiniteGroup,
    u_prime: Mask,
    v_grp: &FiniteGroup,
    psi: &[usize],
    mu: usize,
    witness: Option<usize>,
) -> Result<std::result::Result<Vec<usize>, ExtensionFailure>> {
    if u.generated(u_prime) != u_prime || 2 * u_prime.count_ones() as usize != u.order() || u_prime >> mu & 1 == 1 {
        return Err(Error::Config("expected an index-2 subgroup and mu outside it".into()));
    }
    let inside: Vec<usize> = (0..u.order()).filter(|&x| u_prime >> x & 1 == 1).collect();
    for &a in &inside {
        for &b in &inside {
            if psi[u.mul(a, b)] != v_grp.mul(psi[a], psi[b]) {
                return Err(Error::Config("psi is not a homomorphism on U'".into()));
            }
        }
    }
    let image: Vec<usize> = inside.iter().map(|&x| psi[x]).collect();
    let center = v_grp.center();
    if v_grp.centralizer_of(&image) != center {
        return Ok(Err(ExtensionFailure::ImageNotBig));
    }
    let is_witness = |v: usize| inside.iter().all(|&x| v_grp.conj(v, psi[x]) == psi[u.conj(mu, x)]);
    let v = match witness {
        Some(v) if is_witness(v) => v,
        Some(_) => return Ok(Err(ExtensionFailure::NoConjugatingWitness)),
        None => match (0..v_grp.order()).find(|&v| is_witness(v)) {
            Some(v) => v,
            None => return Ok(Err(ExtensionFailure::NoConjugatingWitness)),
        },
    };
    let v2 = v_grp.mul(v, v);
    let z = v_grp.mul(v_grp.inv[v2], psi[u.mul(mu, mu)]);
    if !center.contains(&z) {
        return Err(Error::Certificate("v^-2 psi(mu^2) is not central".into()));
    }
    let Some(&zt) = center.iter().find(|&&c| v_grp.mul(c, c) == z) else {
        return Ok(Err(ExtensionFailure::NoCentralSquareRoot(z)));
    };
    let pm = v_grp.mul(v, zt);
    let mut table = vec![0; u.order()];
    for &x in &inside {
        table[x] = psi[x];
        table[u.mul(mu, x)] = v_grp.mul(pm, psi[x]);
    }
    if !is_homomorphism(u, v_grp, &table) {
        return Err(Error::Certificate("extended map is not a homomorphism".into()));
    }
    Ok(Ok(table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_permutation_groups() {
        let s3 = FiniteGroup::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.subgroups().len(), 6);
        let c6 = FiniteGroup::cyclic(6);
        assert!(!s3.is_isomorphic(&c6));
        assert!(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3)).is_isomorphic(&c6));
        assert_eq!(s3.isomorphisms(&s3, false).len(), 6);
    }
}
