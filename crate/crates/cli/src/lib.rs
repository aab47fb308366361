//! Command line driver: `space`, `eigen`, `frob` and `parity`.

pub mod config;
pub mod job;
pub mod render;

use clap::{Args, Parser, Subcommand};
use hmf_core::galois::{parity_predicates, q_str};
use hmf_core::quadfield::render_sqrt_form;
use hmf_core::ring::Q;
use serde_json::json;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use config::{Format, JobConfig, P2Route};
use job::{Job, Row};
use render::{csv_field, elem_json, frob_str, l_str};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(hmf_core::Error),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(s) => write!(f, "configuration error: {}", s),
            CliError::Core(e) => write!(f, "{}", e),
            CliError::Io(s) => write!(f, "i/o error: {}", s),
        }
    }
}

impl From<hmf_core::Error> for CliError {
    fn from(e: hmf_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    /// 2 configuration, 3 certificate failure, 4 scope violation.
    pub fn exit_code(&self) -> i32 {
        use hmf_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                E::Certificate(_) | E::NotSquare(_) | E::AlreadySquare(_) => 3,
                E::Scope(_) | E::NoTotallyPositiveGenerator(_) => 4,
                _ => 2,
            },
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "hmf", about = "Exact Hecke eigenvalues of Hilbert modular forms over real quadratic fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Dimension of the space of forms, with the central-character gate.
    Space(Common),
    /// Table of Hecke eigenvalues at primes of norm below the bound.
    Eigen(Common),
    /// Degree-4 Frobenius polynomials at rational primes.
    Frob(FrobArgs),
    /// Parity classification of a weight.
    Parity(ParityArgs),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    norm_bound: Option<i64>,
    /// text, csv or json
    #[arg(long)]
    format: Option<String>,
    /// Directory for the enumeration cache.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Bits for the decimal view of normalized eigenvalues; off by default.
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Args, Debug)]
struct FrobArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated rational primes; defaults to output.frob_primes.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<i64>>,
    /// formula, direct or both
    #[arg(long)]
    p2_route: Option<String>,
}

#[derive(Args, Debug)]
struct ParityArgs {
    /// Comma-separated weight, one entry per real place.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    k: Vec<i64>,
    /// Comma-separated rational t, same length as k.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t: Option<Vec<String>>,
    /// Places grouped by the place of E below, like "0,1" or "0;1"; default E = Q.
    #[arg(long)]
    blocks: Option<String>,
    #[arg(long)]
    format: Option<String>,
}

/// Run with the given arguments; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{}", e) } else { write!(err, "{}", e) };
            return code;
        }
    };
    let mut buf = Vec::new();
    let res = dispatch(cli, &mut buf);
    let _ = out.write_all(&buf);
    match res {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, out: &mut Vec<u8>) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Parity(a) => cmd_parity(&a, out),
        Cmd::Space(c) => with_threads(threads(&c), || cmd_space(&c, out)),
        Cmd::Eigen(c) => with_threads(threads(&c), || cmd_eigen(&c, out)),
        Cmd::Frob(a) => with_threads(threads(&a.common), || cmd_frob(&a, out)),
    }
}

fn threads(c: &Common) -> Option<usize> {
    c.threads.or_else(|| JobConfig::from_file(&c.config).ok().and_then(|cfg| cfg.raw.output.threads))
}

fn cache_dir(c: &Common, cfg: &JobConfig) -> Option<PathBuf> {
    c.cache.clone().or_else(|| cfg.raw.output.cache.as_ref().map(PathBuf::from))
}

fn with_threads<R: Send>(n: Option<usize>, f: impl FnOnce() -> Result<R, CliError> + Send) -> Result<R, CliError> {
    match n {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(format!("--threads: {}", e)))?;
            pool.install(f)
        }
        None => f(),
    }
}

fn load(c: &Common) -> Result<JobConfig, CliError> {
    let mut cfg = JobConfig::from_file(&c.config)?;
    if let Some(b) = c.norm_bound {
        if b < 2 {
            return Err(CliError::Config("--norm-bound must be at least 2".into()));
        }
        cfg.raw.output.norm_bound = b;
    }
    if let Some(f) = &c.format {
        cfg.format = Format::parse(f)?;
    }
    Ok(cfg)
}

fn header_lines(job: &Job) -> Vec<String> {
    let cfg = &job.cfg;
    let raw = &cfg.raw;
    let qf = &job.qf;
    let mut h = vec![
        format!("config: {}", cfg.source),
        format!("field: Q(sqrt{}), w = sqrt{}", raw.field.d, raw.field.d),
        format!("algebra: ({}, {}), finite discriminant {}", raw.algebra.a, raw.algebra.b, raw.algebra.discriminant),
        if job.order_default {
            "order: 1, (1 + i)/w, (1 + j)/w, (1 + i + j + k)/2 (default)".to_string()
        } else {
            "order: from config".to_string()
        },
        format!("maximality: certified (Z-Gram determinant {})", job.cert.z_gram_det),
        format!("level: {}", qf.render(job.level().gen)),
        format!("character: {}", raw.character.kind),
        format!("weight: k = ({}, {}), nrd twist ({}, {})", raw.weight.k[0], raw.weight.k[1], raw.weight.nrd_twist[0], raw.weight.nrd_twist[1]),
    ];
    if let Some(t) = &cfg.t {
        h.push(format!("t = ({}, {})", q_str(&t[0]), q_str(&t[1])));
    }
    h.push(format!("norm bound: {}", raw.output.norm_bound));
    h.push(format!(
        "generators: varpi1 from the config table ({} entries), else the canonical totally positive generator of least sigma1; varpi2 = p/varpi1",
        cfg.generators.len()
    ));
    if !cfg.defaulted.is_empty() {
        h.push(format!("defaulted: {}", cfg.defaulted.join(", ")));
    }
    h
}

fn eigen_header(job: &Job, es: &hmf_core::brandt::EigenSystem) -> Vec<String> {
    let mut h = vec![];
    match &es.b_square {
        Some(b2) => {
            h.push(format!("eigenvalue field: L = F(b), b^2 = {}", render_sqrt_form(b2)));
            h.push(format!(
                "b orientation: the b-part of t({}) is positive under sigma1; b -> -b conjugation {}",
                job.qf.render(es.probe),
                if job.cfg.raw.eigen.conjugate_b { "applied" } else { "not applied" }
            ));
        }
        None => h.push("eigenvalue field: F".to_string()),
    }
    h
}

fn write_header(out: &mut dyn Write, lines: &[String]) -> Result<(), CliError> {
    for l in lines {
        writeln!(out, "# {}", l)?;
    }
    Ok(())
}

fn cmd_space(c: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load(c)?;
    let format = cfg.format;
    let job = Job::new(cfg.clone(), cache_dir(c, &cfg))?;
    let dim = job.space.dim();
    let units = job.setup.units.order();
    let (gate, dim_line) = match &job.sign_gate {
        Ok(()) => ("compatible".to_string(), format!("dim = {}", dim)),
        Err(e) if dim == 0 => (e.clone(), "dim = 0 (central character obstruction)".to_string()),
        Err(e) => {
            return Err(CliError::Core(hmf_core::Error::Certificate(format!(
                "central character gate failed ({}) but the space has dimension {}",
                e, dim
            ))))
        }
    };
    match format {
        Format::Json => {
            let v = json!({
                "header": header_lines(&job),
                "dim": dim,
                "central_character": gate,
                "unit_group_order": units,
                "module_dim": job.setup.module.dim,
                "pivots": job.space.pivots,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap())?;
        }
        Format::Csv => {
            writeln!(out, "dim,central_character,unit_group_order,module_dim")?;
            writeln!(out, "{},{},{},{}", dim, csv_field(&gate), units, job.setup.module.dim)?;
        }
        Format::Text => {
            write_header(out, &header_lines(&job))?;
            writeln!(out, "{}", dim_line)?;
            if dim > 0 {
                writeln!(
                    out,
                    "basis: {} unit-invariant vectors in the {}-dimensional module, echelon pivots {:?}",
                    dim, job.setup.module.dim, job.space.pivots
                )?;
            }
            writeln!(out, "central character: {}", gate)?;
            writeln!(out, "unit group: {} elements of reduced norm 1 (group table verified)", units)?;
        }
    }
    Ok(())
}

fn cmd_eigen(c: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load(c)?;
    let format = cfg.format;
    let bound = cfg.raw.output.norm_bound;
    let mut job = Job::new(cfg.clone(), cache_dir(c, &cfg))?;
    let systems = job.eigen_systems()?;
    let mut json_systems = vec![];
    if format == Format::Text {
        write_header(out, &header_lines(&job))?;
        writeln!(out, "# dim = {}, {} eigen system(s)", job.space.dim(), systems.len())?;
    }
    if format == Format::Csv {
        let mut cols = vec!["system", "norm", "varpi1", "t_varpi1", "t_varpi2"];
        if c.precision.is_some() {
            cols.extend(["tau1_re", "tau1_im", "tau2_re", "tau2_im"]);
        }
        writeln!(out, "{}", cols.join(","))?;
    }
    for (si, es) in systems.iter().enumerate() {
        let rows = job.rows(es, bound)?;
        let tau = |job: &Job, t: &_, v| -> Result<Option<(String, String)>, CliError> {
            match c.precision {
                Some(bits) => Ok(Some(job.normalized(es, t, v, bits)?)),
                None => Ok(None),
            }
        };
        match format {
            Format::Text => {
                for l in eigen_header(&job, es) {
                    writeln!(out, "# {}", l)?;
                }
                if systems.len() > 1 {
                    writeln!(out, "# system {}", si + 1)?;
                }
                writeln!(out, "Nm(p) | varpi1 | t(varpi1) | t(varpi2)")?;
                for r in &rows {
                    match r {
                        Row::Inert { p, t } => writeln!(out, "{} | {} | {}", r.norm(), p, l_str(t))?,
                        Row::Split { v1, t1, t2, .. } => {
                            writeln!(out, "{} | {} | {} | {}", r.norm(), job.qf.render(*v1), l_str(t1), l_str(t2))?
                        }
                    }
                }
                if c.precision.is_some() {
                    writeln!(out, "# normalized eigenvalues under sigma1, b = i sqrt(-sigma1(b^2))")?;
                    for r in &rows {
                        match r {
                            Row::Inert { p, t } => {
                                let (re, im) = tau(&job, t, hmf_core::quadfield::QuadInt::int(*p as i128))?.unwrap();
                                writeln!(out, "# tau({}) = {} + {} i", p, re, im)?;
                            }
                            Row::Split { v1, v2, t1, t2, .. } => {
                                for (v, t) in [(v1, t1), (v2, t2)] {
                                    let (re, im) = tau(&job, t, *v)?.unwrap();
                                    writeln!(out, "# tau({}) = {} + {} i", job.qf.render(*v), re, im)?;
                                }
                            }
                        }
                    }
                }
            }
            Format::Csv => {
                for r in &rows {
                    let (v1, t1, t2, vs) = match r {
                        Row::Inert { p, t } => (p.to_string(), l_str(t), String::new(), vec![(hmf_core::quadfield::QuadInt::int(*p as i128), t.clone())]),
                        Row::Split { v1, v2, t1, t2, .. } => (job.qf.render(*v1), l_str(t1), l_str(t2), vec![(*v1, t1.clone()), (*v2, t2.clone())]),
                    };
                    let mut f = vec![(si + 1).to_string(), r.norm().to_string(), csv_field(&v1), csv_field(&t1), csv_field(&t2)];
                    if c.precision.is_some() {
                        for (v, t) in &vs {
                            let (re, im) = tau(&job, t, *v)?.unwrap();
                            f.push(re);
                            f.push(im);
                        }
                        if vs.len() == 1 {
                            f.push(String::new());
                            f.push(String::new());
                        }
                    }
                    writeln!(out, "{}", f.join(","))?;
                }
            }
            Format::Json => {
                let mut jr = vec![];
                for r in &rows {
                    let v = match r {
                        Row::Inert { p, t } => {
                            let mut v = json!({
                                "norm": r.norm(), "p": p, "kind": "inert",
                                "t": elem_json(Some(es), t), "t_text": l_str(t),
                            });
                            if let Some((re, im)) = tau(&job, t, hmf_core::quadfield::QuadInt::int(*p as i128))? {
                                v["tau"] = json!({ "re": re, "im": im });
                            }
                            v
                        }
                        Row::Split { p, v1, v2, t1, t2 } => {
                            let mut v = json!({
                                "norm": r.norm(), "p": p, "kind": "split",
                                "varpi1": elem_json(None, &job.qf.to_alg(*v1)), "varpi1_text": job.qf.render(*v1),
                                "varpi2": elem_json(None, &job.qf.to_alg(*v2)), "varpi2_text": job.qf.render(*v2),
                                "t1": elem_json(Some(es), t1), "t1_text": l_str(t1),
                                "t2": elem_json(Some(es), t2), "t2_text": l_str(t2),
                            });
                            if let (Some(a), Some(b)) = (tau(&job, t1, *v1)?, tau(&job, t2, *v2)?) {
                                v["tau1"] = json!({ "re": a.0, "im": a.1 });
                                v["tau2"] = json!({ "re": b.0, "im": b.1 });
                            }
                            v
                        }
                    };
                    jr.push(v);
                }
                json_systems.push(json!({
                    "eigen_header": eigen_header(&job, es),
                    "b_square": es.b_square.as_ref().map(|b| elem_json(None, b)),
                    "rows": jr,
                }));
            }
        }
    }
    if format == Format::Json {
        let v = json!({ "header": header_lines(&job), "dim": job.space.dim(), "systems": json_systems });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap())?;
    }
    Ok(())
}

fn cmd_frob(a: &FrobArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = load(&a.common)?;
    if let Some(r) = &a.p2_route {
        cfg.p2_route = P2Route::parse(r)?;
    }
    let primes = a.primes.clone().unwrap_or_else(|| cfg.raw.output.frob_primes.clone());
    let format = cfg.format;
    let mut job = Job::new(cfg.clone(), cache_dir(&a.common, &cfg))?;
    // reject bad primes before any Hecke computation
    for &p in &primes {
        job.check_prime(p)?;
    }
    let systems = job.eigen_systems()?;
    let mut json_systems = vec![];
    if format == Format::Text {
        write_header(out, &header_lines(&job))?;
        writeln!(out, "# A = p^{} eps(p); t(p^2) route: {:?}; every row agrees with the orthogonal-group model", job.frob_exponent(), job.cfg.p2_route)?;
    }
    if format == Format::Csv {
        writeln!(out, "system,p,kind,functional_equation_sign,H_p")?;
    }
    for (si, es) in systems.iter().enumerate() {
        let mut frows = vec![];
        for &p in &primes {
            frows.push(job.frob(es, p)?);
        }
        let kind = |k: hmf_core::galois::Splitting| match k {
            hmf_core::galois::Splitting::Split => "split",
            hmf_core::galois::Splitting::Inert => "inert",
        };
        match format {
            Format::Text => {
                for l in eigen_header(&job, es) {
                    writeln!(out, "# {}", l)?;
                }
                if systems.len() > 1 {
                    writeln!(out, "# system {}", si + 1)?;
                }
                writeln!(out, "p | kind | H_p(X)")?;
                for r in &frows {
                    writeln!(out, "{} | {} | {}", r.frob.p, kind(r.frob.kind), frob_str(r))?;
                }
            }
            Format::Csv => {
                for r in &frows {
                    writeln!(out, "{},{},{},{},{}", si + 1, r.frob.p, kind(r.frob.kind), r.sign, csv_field(&frob_str(r)))?;
                }
            }
            Format::Json => {
                let rows: Vec<_> = frows
                    .iter()
                    .map(|r| {
                        json!({
                            "p": r.frob.p,
                            "kind": kind(r.frob.kind),
                            "functional_equation_sign": r.sign,
                            "coeffs_low_to_high": r.frob.poly.coeffs.iter().map(|c| elem_json(Some(es), c)).collect::<Vec<_>>(),
                            "text": frob_str(r),
                        })
                    })
                    .collect();
                json_systems.push(json!({ "eigen_header": eigen_header(&job, es), "rows": rows }));
            }
        }
    }
    if format == Format::Json {
        let v = json!({ "header": header_lines(&job), "systems": json_systems });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap())?;
    }
    Ok(())
}

fn parse_blocks(s: &str, n: usize) -> Result<Vec<Vec<usize>>, CliError> {
    let bad = || CliError::Config(format!("--blocks: cannot parse {:?}", s));
    if s.contains(';') {
        s.split(';')
            .map(|b| b.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect())
            .collect()
    } else {
        let v: Vec<usize> = s.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_, _>>()?;
        if v.len() == n {
            Ok(vec![v])
        } else {
            Err(bad())
        }
    }
}

fn cmd_parity(a: &ParityArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.k.is_empty() {
        return Err(CliError::Config("--k is required".into()));
    }
    let n = a.k.len();
    let blocks = match &a.blocks {
        Some(s) => parse_blocks(s, n)?,
        None => vec![(0..n).collect()],
    };
    let t: Option<Vec<Q>> = match &a.t {
        Some(ts) => Some(
            ts.iter()
                .map(|s| {
                    let (x, y) = hmf_core::quadfield::parse_sqrt_expr(s).map_err(|e| CliError::Config(format!("--t: {}", e)))?;
                    if y != Q::from_integer(0.into()) {
                        return Err(CliError::Config(format!("--t: {:?} is not rational", s)));
                    }
                    Ok(x)
                })
                .collect::<Result<_, _>>()?,
        ),
        None => None,
    };
    let r = parity_predicates(&a.k, &blocks, t.as_deref()).map_err(|e| match e {
        hmf_core::Error::Config(s) => CliError::Config(s),
        e => CliError::Core(e),
    })?;
    let yn = |b: bool| if b { "yes" } else { "no" };
    let fmt_t = |t: &[Q]| t.iter().map(q_str).collect::<Vec<_>>().join(", ");
    let half = Q::new(1.into(), 2.into());
    let block_sums: Option<Vec<Q>> = t.as_ref().map(|t| {
        blocks.iter().map(|b| b.iter().fold(Q::from_integer(0.into()), |acc, &i| acc + &t[i] - &half)).collect()
    });
    let format = match &a.format {
        Some(f) => Format::parse(f)?,
        None => Format::Text,
    };
    match format {
        Format::Json => {
            let v = json!({
                "k": a.k,
                "blocks": blocks,
                "paritious": r.paritious,
                "e_paritious": r.e_paritious,
                "algebraic_t": r.algebraic_t.as_ref().map(|(t, rr)| json!({ "t": t.iter().map(q_str).collect::<Vec<_>>(), "R": q_str(rr) })),
                "supplied_R": r.supplied_r.as_ref().map(|x| x.as_ref().map(q_str)),
                "supplied_integral": r.supplied_integral,
                "block_sums": block_sums.as_ref().map(|s| s.iter().map(q_str).collect::<Vec<_>>()),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap())?;
        }
        _ => {
            writeln!(out, "k = ({})", a.k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))?;
            writeln!(out, "paritious: {}", yn(r.paritious))?;
            writeln!(out, "E-paritious for blocks {:?}: {}", blocks, yn(r.e_paritious))?;
            match &r.algebraic_t {
                Some((t, rr)) => writeln!(out, "reasonable t with integral block sums: t = ({}), R = {}", fmt_t(t), q_str(rr))?,
                None => writeln!(out, "reasonable t with integral block sums: none")?,
            }
            if let (Some(t), Some(sr), Some(si), Some(sums)) = (&t, &r.supplied_r, r.supplied_integral, &block_sums) {
                writeln!(out, "supplied t = ({})", fmt_t(t))?;
                match sr {
                    Some(rr) => writeln!(out, "reasonable: yes, R = {}", q_str(rr))?,
                    None => writeln!(out, "reasonable: no (k + 2t is not constant)")?,
                }
                let s = sums.iter().map(q_str).collect::<Vec<_>>().join(", ");
                writeln!(out, "block sums of t - 1/2: {} ({})", s, if si { "integral" } else { "not integral: fails" })?;
            }
        }
    }
    Ok(())
}
