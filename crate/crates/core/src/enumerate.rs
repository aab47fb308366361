//! Elements of given reduced norm in an order, unit orbits, and an on-disk cache.

use crate::error::{Error, Result};
use crate::lattice::ShellEnumerator;
use crate::normeq::NormEquation;
use crate::quadfield::QuadInt;
use crate::quaternion::{QuatOrder, UnitGroup, ZVec};
use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

const CACHE_VERSION: &str = "hmf-enum v1";

/// All x in the order with nrd(x) = target, sorted lexicographically on Z^8.
///
/// Uses the bucket pairing of [`NormEquation`] when the algebra is defined over Q,
/// and the ellipsoid enumeration of [`enumerate_by_norm_shell`] otherwise.
pub fn enumerate_by_norm(order: &QuatOrder, target: QuadInt, cache: Option<&Path>) -> Result<Vec<ZVec>> {
    check_target(order, target)?;
    if let Some(dir) = cache {
        if let Some(v) = read_cache(order, target, dir) {
            return Ok(v);
        }
    }
    let out = match NormEquation::new(order) {
        Some(ne) => ne.solve(order, target),
        None => enumerate_by_norm_shell(order, target)?,
    };
    if let Some(dir) = cache {
        write_cache(order, target, dir, &out)?;
    }
    Ok(out)
}

fn check_target(order: &QuatOrder, target: QuadInt) -> Result<()> {
    let qf = &order.alg.qf;
    if !qf.is_totally_positive(target) {
        return Err(Error::NoTotallyPositiveGenerator(format!(
            "norm target {} is not totally positive",
            qf.render(target)
        )));
    }
    Ok(())
}

/// Enumerates the level set Tr(conj(target) nrd(x)) = 2 Nm(target), which
/// contains every solution, and filters by the exact norm.
pub fn enumerate_by_norm_shell(order: &QuatOrder, target: QuadInt) -> Result<Vec<ZVec>> {
    check_target(order, target)?;
    let qf = &order.alg.qf;
    let lambda = qf.conj(target);
    let g2 = order.twisted_trace_gram2(lambda);
    let rows: Vec<Vec<i64>> = g2.iter().map(|r| r.to_vec()).collect();
    let en = ShellEnumerator::new(&rows);
    let nm = qf.norm(target) as i64;
    Ok(en.shell(4 * nm, |x| order.nrd_z(x) == target))
}

fn cache_path(order: &QuatOrder, target: QuadInt, dir: &Path) -> PathBuf {
    dir.join(format!("{}_{}_{}.enum", &order.hash[..16], target.a, target.b))
}

fn render_cache(order: &QuatOrder, target: QuadInt, elems: &[ZVec]) -> String {
    let mut s = String::new();
    s.push_str(CACHE_VERSION);
    s.push('\n');
    s.push_str(&format!("order {}\n", order.hash));
    s.push_str(&format!("target {} {}\n", target.a, target.b));
    s.push_str(&format!("count {}\n", elems.len()));
    for e in elems {
        let line: Vec<String> = e.iter().map(|x| x.to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

fn read_cache(order: &QuatOrder, target: QuadInt, dir: &Path) -> Option<Vec<ZVec>> {
    let text = fs::read_to_string(cache_path(order, target, dir)).ok()?;
    let mut lines = text.lines();
    if lines.next()? != CACHE_VERSION {
        return None;
    }
    if lines.next()? != format!("order {}", order.hash) {
        return None;
    }
    if lines.next()? != format!("target {} {}", target.a, target.b) {
        return None;
    }
    let count: usize = lines.next()?.strip_prefix("count ")?.parse().ok()?;
    let mut out = Vec::with_capacity(count);
    for l in lines {
        let v: Vec<i64> = l.split_whitespace().map(|t| t.parse().ok()).collect::<Option<Vec<_>>>()?;
        if v.len() != 8 {
            return None;
        }
        let z: ZVec = std::array::from_fn(|i| v[i]);
        if order.nrd_z(&z) != target {
            return None;
        }
        out.push(z);
    }
    if out.len() != count {
        return None;
    }
    Some(out)
}

fn write_cache(order: &QuatOrder, target: QuadInt, dir: &Path, elems: &[ZVec]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Cache(format!("{}: {}", dir.display(), e)))?;
    let path = cache_path(order, target, dir);
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp).map_err(|e| Error::Cache(format!("{}: {}", tmp.display(), e)))?;
    f.write_all(render_cache(order, target, elems).as_bytes()).map_err(|e| Error::Cache(e.to_string()))?;
    drop(f);
    fs::rename(&tmp, &path).map_err(|e| Error::Cache(e.to_string()))?;
    Ok(())
}

/// Representatives of the orbits of left multiplication by the unit group,
/// each the lexicographically least member of its orbit.
pub fn unit_orbits(order: &QuatOrder, units: &UnitGroup, elements: &[ZVec]) -> Result<Vec<ZVec>> {
    let mats: Vec<[[i64; 8]; 8]> = units.elements.iter().map(|g| order.mult_matrix_z(g, true)).collect();
    let mut sorted = elements.to_vec();
    sorted.sort();
    let index: HashMap<ZVec, usize> = sorted.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut seen = vec![false; sorted.len()];
    let mut reps = vec![];
    for (i, x) in sorted.iter().enumerate() {
        if seen[i] {
            continue;
        }
        reps.push(*x);
        for m in &mats {
            let mut y = [0i64; 8];
            for r in 0..8 {
                let mut s = 0i64;
                for c in 0..8 {
                    s += m[r][c] * x[c];
                }
                y[r] = s;
            }
            let j = *index
                .get(&y)
                .ok_or_else(|| Error::Certificate("norm set not stable under units".into()))?;
            seen[j] = true;
        }
    }
    if reps.len() * units.order() != sorted.len() {
        return Err(Error::Certificate(format!(
            "unit action is not free: {} elements, {} orbits, {} units",
            sorted.len(),
            reps.len(),
            units.order()
        )));
    }
    Ok(reps)
}

/// The unit group of reduced norm one, with its multiplication table.
pub fn norm_one_group(order: &QuatOrder, cache: Option<&Path>) -> Result<UnitGroup> {
    let els = enumerate_by_norm(order, QuadInt::int(1), cache)?;
    UnitGroup::from_elements(order, els)
}
