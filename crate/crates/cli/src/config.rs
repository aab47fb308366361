//! TOML job description. Every field has a default except the level; the
//! resolved values are echoed in each output header.

use hmf_core::quadfield::parse_sqrt_expr;
use hmf_core::ring::Q;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub field: RawField,
    #[serde(default)]
    pub algebra: RawAlgebra,
    pub level: RawLevel,
    #[serde(default)]
    pub character: RawCharacter,
    #[serde(default)]
    pub weight: RawWeight,
    #[serde(default)]
    pub eigen: RawEigen,
    /// Rational prime -> chosen generator of one prime above it.
    #[serde(default)]
    pub generators: BTreeMap<String, String>,
    #[serde(default)]
    pub output: RawOutput,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawField {
    pub d: i64,
}

impl Default for RawField {
    fn default() -> Self {
        RawField { d: 2 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAlgebra {
    pub a: String,
    pub b: String,
    /// Generator of the finite part of the discriminant.
    pub discriminant: String,
    /// Four basis elements, each as coefficients on 1, i, j, k.
    pub order: Option<Vec<Vec<String>>>,
}

impl Default for RawAlgebra {
    fn default() -> Self {
        RawAlgebra { a: "-1".into(), b: "-1".into(), discriminant: "1".into(), order: None }
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawLevel {
    pub generator: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCharacter {
    pub kind: String,
}

impl Default for RawCharacter {
    fn default() -> Self {
        RawCharacter { kind: "trivial".into() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawWeight {
    pub k: [i64; 2],
    /// Rational t, used by the parity report only.
    pub t: Option<[String; 2]>,
    /// Integral exponents of sigma_i o nrd in the weight module.
    #[serde(default)]
    pub nrd_twist: [i64; 2],
}

impl Default for RawWeight {
    fn default() -> Self {
        RawWeight { k: [2, 2], t: None, nrd_twist: [0, 0] }
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawEigen {
    pub b_square: Option<String>,
    #[serde(default)]
    pub probes: Vec<String>,
    #[serde(default)]
    pub conjugate_b: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOutput {
    #[serde(default = "default_bound")]
    pub norm_bound: i64,
    #[serde(default = "default_format")]
    pub format: String,
    #[serde(default = "default_frob_primes")]
    pub frob_primes: Vec<i64>,
    #[serde(default = "default_route")]
    pub p2_route: String,
    /// Enumeration cache directory; --cache overrides.
    pub cache: Option<String>,
    /// Worker threads; --threads overrides. Output does not depend on it.
    pub threads: Option<usize>,
}

fn default_bound() -> i64 {
    200
}

fn default_format() -> String {
    "text".into()
}

fn default_frob_primes() -> Vec<i64> {
    vec![3, 5, 11, 17, 23, 31]
}

fn default_route() -> String {
    "formula".into()
}

impl Default for RawOutput {
    fn default() -> Self {
        RawOutput {
            norm_bound: default_bound(),
            format: default_format(),
            frob_primes: default_frob_primes(),
            p2_route: default_route(),
            cache: None,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format, CliError> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Config(format!("output.format: unknown format {:?} (text, csv, json)", s))),
        }
    }
}

/// How t(p^2) is obtained at split primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum P2Route {
    /// From t(v1), t(v2) and the central characters.
    Formula,
    /// From the sum over elements of norm p^2.
    Direct,
    /// Both, failing if they differ.
    Both,
}

impl P2Route {
    pub fn parse(s: &str) -> Result<P2Route, CliError> {
        match s {
            "formula" => Ok(P2Route::Formula),
            "direct" => Ok(P2Route::Direct),
            "both" => Ok(P2Route::Both),
            _ => Err(CliError::Config(format!("output.p2_route: unknown route {:?} (formula, direct, both)", s))),
        }
    }
}

/// Validated job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub raw: RawConfig,
    pub source: String,
    pub quadratic_character: bool,
    pub t: Option<[Q; 2]>,
    pub format: Format,
    pub p2_route: P2Route,
    /// Keys of the generator table, as rational primes.
    pub generators: BTreeMap<i64, String>,
    /// Fields the file left at their defaults.
    pub defaulted: Vec<&'static str>,
}

fn check_expr(what: &str, s: &str) -> Result<(), CliError> {
    parse_sqrt_expr(s).map(|_| ()).map_err(|e| CliError::Config(format!("{}: {}", what, e)))
}

fn parse_q(what: &str, s: &str) -> Result<Q, CliError> {
    let (a, b) = parse_sqrt_expr(s).map_err(|e| CliError::Config(format!("{}: {}", what, e)))?;
    if b != Q::from_integer(0.into()) {
        return Err(CliError::Config(format!("{}: expected a rational number, got {:?}", what, s)));
    }
    Ok(a)
}

impl JobConfig {
    pub fn from_file(path: &Path) -> Result<JobConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {}", path.display(), e)))?;
        JobConfig::from_str(&text, &path.display().to_string())
    }

    pub fn from_str(text: &str, source: &str) -> Result<JobConfig, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(format!("{}: {}", source, e)))?;
        let value: toml::Value = toml::from_str(text).map_err(|e| CliError::Config(format!("{}: {}", source, e)))?;
        let has = |sec: &str, key: &str| value.get(sec).and_then(|s| s.get(key)).is_some();
        let mut defaulted = vec![];
        for (sec, key, name) in [
            ("field", "d", "field.d"),
            ("algebra", "a", "algebra.a"),
            ("algebra", "b", "algebra.b"),
            ("algebra", "discriminant", "algebra.discriminant"),
            ("algebra", "order", "algebra.order"),
            ("character", "kind", "character.kind"),
            ("weight", "k", "weight.k"),
            ("eigen", "b_square", "eigen.b_square"),
            ("eigen", "probes", "eigen.probes"),
            ("output", "norm_bound", "output.norm_bound"),
            ("output", "frob_primes", "output.frob_primes"),
        ] {
            if !has(sec, key) {
                defaulted.push(name);
            }
        }
        check_expr("algebra.a", &raw.algebra.a)?;
        check_expr("algebra.b", &raw.algebra.b)?;
        check_expr("algebra.discriminant", &raw.algebra.discriminant)?;
        check_expr("level.generator", &raw.level.generator)?;
        if let Some(order) = &raw.algebra.order {
            if order.len() != 4 || order.iter().any(|r| r.len() != 4) {
                return Err(CliError::Config("algebra.order: expected four rows of four coefficients".into()));
            }
            for (i, row) in order.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    check_expr(&format!("algebra.order[{}][{}]", i, j), c)?;
                }
            }
        }
        let quadratic_character = match raw.character.kind.as_str() {
            "trivial" => false,
            "quadratic" => true,
            s => return Err(CliError::Config(format!("character.kind: unknown character {:?} (trivial, quadratic)", s))),
        };
        if raw.weight.k.iter().any(|&k| k < 2) {
            return Err(CliError::Config(format!("weight.k: entries must be at least 2, got {:?}", raw.weight.k)));
        }
        let t = match &raw.weight.t {
            Some([a, b]) => Some([parse_q("weight.t[0]", a)?, parse_q("weight.t[1]", b)?]),
            None => None,
        };
        if let Some(b2) = &raw.eigen.b_square {
            check_expr("eigen.b_square", b2)?;
        }
        for (i, p) in raw.eigen.probes.iter().enumerate() {
            check_expr(&format!("eigen.probes[{}]", i), p)?;
        }
        let mut generators = BTreeMap::new();
        for (k, v) in &raw.generators {
            let p: i64 = k.trim().parse().map_err(|_| CliError::Config(format!("generators: key {:?} is not a rational prime", k)))?;
            check_expr(&format!("generators.{}", k), v)?;
            generators.insert(p, v.clone());
        }
        if raw.output.threads == Some(0) {
            return Err(CliError::Config("output.threads must be positive".into()));
        }
        if raw.output.norm_bound < 2 {
            return Err(CliError::Config("output.norm_bound must be at least 2".into()));
        }
        let format = Format::parse(&raw.output.format)?;
        let p2_route = P2Route::parse(&raw.output.p2_route)?;
        Ok(JobConfig { raw, source: source.to_string(), quadratic_character, t, format, p2_route, generators, defaulted })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_defaults() {
        let c = JobConfig::from_str("[level]\ngenerator = \"1\"\n", "inline").unwrap();
        assert_eq!(c.raw.field.d, 2);
        assert_eq!(c.raw.weight.k, [2, 2]);
        assert!(!c.quadratic_character);
        assert!(c.defaulted.contains(&"algebra.order"));
    }

    #[test]
    fn errors_name_the_field() {
        let e = JobConfig::from_str("[level]\ngenerator = \"5 - 3x\"\n", "inline").unwrap_err();
        assert!(e.to_string().contains("level.generator"), "{}", e);
        let e = JobConfig::from_str("[level]\ngenerator = \"1\"\n[weight]\nk = [1, 2]\n", "inline").unwrap_err();
        assert!(e.to_string().contains("weight.k"), "{}", e);
        let e = JobConfig::from_str("[level]\ngenerator = \"1\"\n[levle]\n", "inline").unwrap_err();
        assert!(e.to_string().contains("levle"), "{}", e);
        let e = JobConfig::from_str("[level]\ngenerator = \"1\"\n[generators]\nx = \"3\"\n", "inline").unwrap_err();
        assert!(e.to_string().contains("generators"), "{}", e);
    }
}
