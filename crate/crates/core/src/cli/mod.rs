//! The `hurwitz` command line: argument parsing, dispatch, output formats and
//! the result cache.
//!
//! Exit codes: 0 on success, 2 on invalid input (including malformed flags),
//! 3 when a search would exceed the resource limits, 1 on internal or I/O
//! failures.

mod cache;
mod experiment;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bridge::verify_correspondence;
use crate::factorize::{count_with, FactorizationSpec, SearchConfig, SearchLimits, SignSequence, Variant};
use crate::permcore::{Partition, Permutation};
use crate::tropical::{
    enumerate_colourings, enumerate_covers_with, real_multiplicity, vertex_splitting, Edge, TropicalCover,
};
use crate::zigzag::{
    build_case_cover, build_component_chain, build_kmixed_cover, build_standard_universal, build_string_cover,
    chain_types, classify, is_kmixed, zigzag_number, CaseFamily, ComponentType, TailCase, TailSpec, ZigzagClass,
    ZigzagFamily, ZigzagStructure,
};
use crate::HurwitzError;

pub use cache::{spec_key, CacheRecord, ResultCache};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentFamily, ExperimentRow, ExperimentTable};

/// Environment variable naming the cache directory when `--cache-dir` is absent.
pub const CACHE_ENV: &str = "HURWITZ_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "hurwitz", version, about = "Exact double Hurwitz numbers, real tropical covers and zigzag covers")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Result cache directory (falls back to $HURWITZ_CACHE_DIR; no caching if neither is set).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Maximum degree d (default 8).
    #[arg(long, global = true)]
    limit_d: Option<usize>,
    /// Maximum number of branch points r (default 10).
    #[arg(long, global = true)]
    limit_r: Option<usize>,
    /// Acknowledge long runs: allows limits above the defaults, and lifts them
    /// entirely when no limit is given.
    #[arg(long, global = true)]
    allow_unbounded: bool,
}

#[derive(Args, Debug, Clone)]
struct TypeArgs {
    #[arg(long, default_value_t = 0)]
    genus: u32,
    /// Comma-separated parts, e.g. 1,3.
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    mu: String,
}

impl TypeArgs {
    fn parse(&self) -> CliResult<(u32, Partition, Partition)> {
        Ok((self.genus, self.lambda.parse()?, self.mu.parse()?))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count factorizations of one family; prints a single integer.
    Count {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_enum, default_value = "complex")]
        variant: VariantName,
        /// Sign sequence over + and -, one per branch point (real variants).
        #[arg(long, allow_hyphen_values = true)]
        signs: Option<String>,
        /// Monotone prefix length for real-kmixed.
        #[arg(long)]
        k: Option<usize>,
        /// Fix the first permutation, in cycle notation, e.g. "(1)(234)".
        #[arg(long)]
        sigma1: Option<String>,
    },
    /// Enumerate tropical covers with their colourings and real multiplicities.
    Covers {
        #[command(flatten)]
        ty: TypeArgs,
        /// Keep only colourings with this splitting.
        #[arg(long, allow_hyphen_values = true)]
        signs: Option<String>,
    },
    /// Compare the real count with the tropical sum for one sign sequence.
    VerifyCorrespondence {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, allow_hyphen_values = true)]
        signs: String,
    },
    /// Zigzag covers: classification, zigzag numbers and builders.
    Zigzag {
        #[command(subcommand)]
        command: ZigzagCommand,
    },
    /// Exact finite-m counts of the zigzag lower-bound constructions.
    Asymptotics {
        #[arg(long, value_enum)]
        family: ExperimentFamily,
        #[arg(long, default_value_t = 1)]
        m_min: usize,
        #[arg(long, default_value_t = 2)]
        m_max: usize,
        /// Offset in the k-mixed bound.
        #[arg(long, default_value_t = 0)]
        m0: usize,
        /// Base λ of the k-mixed family.
        #[arg(long, default_value = "2,1")]
        lambda: String,
        /// Base μ of the k-mixed family.
        #[arg(long, default_value = "2,1")]
        mu: String,
    },
    /// Inspect or clear the result cache.
    Cache {
        #[command(subcommand)]
        command: CacheCommand,
    },
}

#[derive(Subcommand, Debug)]
enum ZigzagCommand {
    /// Classify one cover (from JSON) or every cover of a type.
    Classify {
        /// Cover JSON as written by `zigzag build --json`, or `-` for stdin.
        #[arg(long, conflicts_with_all = ["lambda", "mu"])]
        cover: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        mu: Option<String>,
        /// Also test k-mixedness.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Sum over the family's covers of the minimal factorization count.
    Number {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_enum)]
        family: FamilyName,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Build a cover from one of the constructions.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
        /// Emit Graphviz instead of text or JSON.
        #[arg(long, global = true)]
        dot: bool,
    },
}

#[derive(Subcommand, Debug)]
enum BuildKind {
    /// The standard universally monotone cover of type (g, (1^{2m+1}), (1^{2m+1})).
    Standard {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        genus: u32,
    },
    /// A string with tails, e.g. `--tails i2f,o2f,o2f,i2f` (i/o: in/out, weight, f: fork).
    String {
        /// Weight of the string end the string starts from.
        #[arg(long, default_value_t = 1)]
        start: i64,
        #[arg(long)]
        tails: String,
        #[arg(long, default_value_t = 0)]
        genus: u32,
    },
    /// A chain of monotone components glued in a 0-based order.
    Chain {
        /// 0-based positions, e.g. 1,0.
        #[arg(long)]
        order: String,
        /// Component types 1..4; derived from the order when absent.
        #[arg(long)]
        types: Option<String>,
        /// Glue the second component on the right of the first.
        #[arg(long)]
        first_right: bool,
        /// Simple splitting to realize, exchanging a tail if needed.
        #[arg(long)]
        s: Option<usize>,
    },
    /// The case construction for a type with at most two odd distinct parts.
    Case {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        case: u8,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        splitting: SplittingName,
        #[arg(long)]
        s: Option<usize>,
    },
    /// A universally monotone part glued to a zigzag part.
    Kmixed {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        lambda_prime: String,
        #[arg(long)]
        mu_prime: String,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CacheCommand {
    /// List the stored records.
    Inspect,
    /// Delete the store.
    Clear,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantName {
    Complex,
    Monotone,
    Real,
    RealMonotone,
    RealKmixed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyName {
    Monotone,
    Universal,
    Kmixed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SplittingName {
    Simple,
    Arbitrary,
}

#[derive(Debug)]
enum CliError {
    Engine(HurwitzError),
    Io(io::Error),
}

impl From<HurwitzError> for CliError {
    fn from(e: HurwitzError) -> Self {
        CliError::Engine(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(HurwitzError::ResourceLimit(_)) => 3,
            CliError::Engine(HurwitzError::Invariant(_)) | CliError::Io(_) => 1,
            CliError::Engine(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Engine(HurwitzError::InvalidInput(msg.into()))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Human,
    Json,
    Csv,
}

struct Ctx {
    format: Format,
    search: SearchConfig,
    cache: Option<ResultCache>,
}

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn context(g: &GlobalArgs) -> CliResult<Ctx> {
    let format = if g.json {
        Format::Json
    } else if g.csv {
        Format::Csv
    } else {
        Format::Human
    };
    let defaults = SearchLimits::default();
    let limits = if g.allow_unbounded && g.limit_d.is_none() && g.limit_r.is_none() {
        SearchLimits { max_degree: usize::MAX, max_r: usize::MAX }
    } else {
        let max_degree = g.limit_d.unwrap_or(defaults.max_degree);
        let max_r = g.limit_r.unwrap_or(defaults.max_r);
        if !g.allow_unbounded && (max_degree > defaults.max_degree || max_r > defaults.max_r) {
            return Err(bad(format!(
                "limits above d ≤ {}, r ≤ {} need --allow-unbounded",
                defaults.max_degree, defaults.max_r
            )));
        }
        SearchLimits { max_degree, max_r }
    };
    if g.threads == Some(0) {
        return Err(bad("--threads must be at least 1"));
    }
    let dir = g.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    Ok(Ctx { format, search: SearchConfig { limits, threads: g.threads }, cache: dir.map(ResultCache::new) })
}

fn execute(cli: Cli) -> CliResult<String> {
    let ctx = context(&cli.global)?;
    match cli.command {
        Command::Count { ty, variant, signs, k, sigma1 } => cmd_count(&ctx, &ty, variant, signs, k, sigma1),
        Command::Covers { ty, signs } => cmd_covers(&ctx, &ty, signs),
        Command::VerifyCorrespondence { ty, signs } => cmd_verify(&ctx, &ty, &signs),
        Command::Zigzag { command } => match command {
            ZigzagCommand::Classify { cover, genus, lambda, mu, k } => cmd_classify(&ctx, cover, genus, lambda, mu, k),
            ZigzagCommand::Number { ty, family, k } => cmd_number(&ctx, &ty, family, k),
            ZigzagCommand::Build { kind, dot } => cmd_build(&ctx, kind, dot),
        },
        Command::Asymptotics { family, m_min, m_max, m0, lambda, mu } => {
            let cfg = ExperimentConfig {
                family,
                m_min,
                m_max,
                m0,
                base_lambda: lambda.parse()?,
                base_mu: mu.parse()?,
                search: ctx.search,
            };
            let table = run_experiment(&cfg)?;
            Ok(match ctx.format {
                Format::Json => json_line(&table),
                Format::Csv => table.to_csv(),
                Format::Human => table.to_human(),
            })
        }
        Command::Cache { command } => cmd_cache(&ctx, command),
    }
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn parse_variant(v: VariantName, k: Option<usize>) -> CliResult<Variant> {
    match (v, k) {
        (VariantName::RealKmixed, Some(k)) => Ok(Variant::RealKMixed(k)),
        (VariantName::RealKmixed, None) => Err(bad("real-kmixed needs --k")),
        (_, Some(_)) => Err(bad("--k only applies to real-kmixed")),
        (VariantName::Complex, None) => Ok(Variant::Complex),
        (VariantName::Monotone, None) => Ok(Variant::Monotone),
        (VariantName::Real, None) => Ok(Variant::Real),
        (VariantName::RealMonotone, None) => Ok(Variant::RealMonotone),
    }
}

fn cmd_count(
    ctx: &Ctx,
    ty: &TypeArgs,
    variant: VariantName,
    signs: Option<String>,
    k: Option<usize>,
    sigma1: Option<String>,
) -> CliResult<String> {
    let variant = parse_variant(variant, k)?;
    let spec = FactorizationSpec::parse(ty.genus, &ty.lambda, &ty.mu, variant, signs.as_deref())?;
    let sigma1: Option<Permutation> = sigma1.map(|s| s.parse()).transpose()?;
    // fixed-start counts are not cached: the key covers the spec only
    let cache = ctx.cache.as_ref().filter(|_| sigma1.is_none());
    let mut cached = false;
    let value = match cache.map(|c| c.lookup(&spec)).transpose()?.flatten() {
        Some(v) => {
            cached = true;
            v
        }
        None => {
            let v = count_with(&spec, sigma1.as_ref(), &ctx.search)?;
            if let Some(c) = cache {
                c.store(&spec, v)?;
            }
            v
        }
    };
    Ok(match ctx.format {
        Format::Human => format!("{value}\n"),
        Format::Json => json_line(&json!({
            "spec": spec,
            "sigma1": sigma1.map(|p| p.to_string()),
            "value": value,
            "cached": cached,
        })),
        Format::Csv => format!(
            "genus,lambda,mu,variant,signs,value\n{},{},{},{},{},{value}\n",
            spec.genus,
            csv_field(&spec.lambda.to_string()),
            csv_field(&spec.mu.to_string()),
            csv_field(&spec.variant.to_string()),
            spec.signs.as_ref().map(|s| s.to_string()).unwrap_or_default(),
        ),
    })
}

#[derive(Serialize)]
struct ColouringRow {
    colouring: String,
    splitting: String,
    multiplicity: String,
}

#[derive(Serialize)]
struct CoverRow {
    cover_id: String,
    text: String,
    cover: TropicalCover,
    colourings: Vec<ColouringRow>,
}

fn cmd_covers(ctx: &Ctx, ty: &TypeArgs, signs: Option<String>) -> CliResult<String> {
    let (g, lambda, mu) = ty.parse()?;
    let filter: Option<SignSequence> = signs.map(|s| s.parse()).transpose()?;
    let mut rows = Vec::new();
    for c in enumerate_covers_with(g, &lambda, &mu, &ctx.search.limits)? {
        let mut colourings = Vec::new();
        for rho in enumerate_colourings(&c) {
            let splitting = vertex_splitting(&c, &rho)?;
            if filter.as_ref().is_some_and(|f| *f != splitting) {
                continue;
            }
            colourings.push(ColouringRow {
                colouring: rho.to_string(),
                splitting: splitting.to_string(),
                multiplicity: real_multiplicity(&c, &rho).to_string(),
            });
        }
        if filter.is_some() && colourings.is_empty() {
            continue;
        }
        rows.push(CoverRow { cover_id: c.cover_id(), text: c.to_string(), cover: c, colourings });
    }
    Ok(match ctx.format {
        Format::Json => json_line(&rows),
        Format::Csv => {
            let mut out = String::from("cover_id,cover,colouring,splitting,multiplicity\n");
            for r in &rows {
                for c in &r.colourings {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        r.cover_id,
                        csv_field(&r.text),
                        csv_field(&c.colouring),
                        c.splitting,
                        c.multiplicity
                    );
                }
            }
            out
        }
        Format::Human => {
            let mut out = format!("{} covers\n", rows.len());
            for r in &rows {
                let _ = writeln!(out, "{}  {}", r.cover_id, r.text);
                for c in &r.colourings {
                    let _ = writeln!(out, "    {}  splitting {}  mult {}", c.colouring, c.splitting, c.multiplicity);
                }
            }
            out
        }
    })
}

fn cmd_verify(ctx: &Ctx, ty: &TypeArgs, signs: &str) -> CliResult<String> {
    let (g, lambda, mu) = ty.parse()?;
    let signs: SignSequence = signs.parse()?;
    let report = verify_correspondence(g, &lambda, &mu, &signs, &ctx.search)?;
    Ok(match ctx.format {
        Format::Json => json_line(&report),
        Format::Csv => format!(
            "genus,lambda,mu,signs,lhs,rhs,equal\n{g},{},{},{},{},{},{}\n",
            csv_field(&lambda.to_string()),
            csv_field(&mu.to_string()),
            report.signs,
            report.lhs,
            report.rhs,
            report.equal
        ),
        Format::Human => {
            let mut out = format!("lhs {}\nrhs {}\nequal {}\n", report.lhs, report.rhs, report.equal);
            for t in &report.rhs_terms {
                let _ = writeln!(out, "  {}  {}  {}  mult {}  d!·mult {}", t.cover_id, t.cover, t.colouring, t.mult, t.contribution);
            }
            out
        }
    })
}

#[derive(Serialize)]
struct StringVerdict {
    shape: String,
    /// The string's edges in reading order.
    edges: Vec<Edge>,
    edge_indices: Vec<usize>,
    bent_vertices: Vec<usize>,
}

impl StringVerdict {
    fn of(c: &TropicalCover, s: &ZigzagStructure) -> Self {
        StringVerdict {
            shape: format!("{:?}", s.shape).to_lowercase(),
            edges: s.string_edges.iter().map(|&i| c.edges()[i]).collect(),
            edge_indices: s.string_edges.clone(),
            bent_vertices: s.bent_vertices.clone(),
        }
    }
}

#[derive(Serialize)]
struct Verdict {
    cover_id: String,
    cover: String,
    class: ZigzagClass,
    witness: Option<StringVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kmixed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kmixed_witness: Option<StringVerdict>,
}

fn read_cover(path: &PathBuf) -> CliResult<TropicalCover> {
    let text = if path.as_os_str() == "-" {
        io::read_to_string(io::stdin())?
    } else {
        std::fs::read_to_string(path)?
    };
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(format!("cover JSON: {e}")))?;
    // accept the bare cover or the object `zigzag build --json` writes
    let v = v.get("cover").cloned().unwrap_or(v);
    serde_json::from_value(v).map_err(|e| bad(format!("cover JSON: {e}")))
}

fn cmd_classify(
    ctx: &Ctx,
    cover: Option<PathBuf>,
    genus: u32,
    lambda: Option<String>,
    mu: Option<String>,
    k: Option<usize>,
) -> CliResult<String> {
    let covers = match (cover, lambda, mu) {
        (Some(p), _, _) => vec![read_cover(&p)?],
        (None, Some(l), Some(m)) => enumerate_covers_with(genus, &l.parse()?, &m.parse()?, &ctx.search.limits)?,
        _ => return Err(bad("give --cover FILE or both --lambda and --mu")),
    };
    let mut verdicts = Vec::new();
    for c in &covers {
        let cl = classify(c);
        let km = k.map(|k| is_kmixed(c, k)).transpose()?;
        verdicts.push(Verdict {
            cover_id: c.cover_id(),
            cover: c.to_string(),
            class: cl.class,
            witness: cl.witness.as_ref().map(|s| StringVerdict::of(c, s)),
            k,
            kmixed: km.as_ref().map(Option::is_some),
            kmixed_witness: km.flatten().map(|w| StringVerdict::of(c, &w.string)),
        });
    }
    Ok(match ctx.format {
        Format::Json => json_line(&verdicts),
        Format::Csv => {
            let mut out = String::from("cover_id,cover,class,string_edges,kmixed\n");
            for v in &verdicts {
                let edges = v.witness.as_ref().map(|w| format!("{:?}", w.edge_indices)).unwrap_or_default();
                let km = v.kmixed.map(|b| b.to_string()).unwrap_or_default();
                let _ = writeln!(out, "{},{},{:?},{},{km}", v.cover_id, csv_field(&v.cover), v.class, csv_field(&edges));
            }
            out
        }
        Format::Human => {
            let mut out = String::new();
            for v in &verdicts {
                let _ = writeln!(out, "{}  {}\n    {:?}", v.cover_id, v.cover, v.class);
                if let Some(w) = &v.witness {
                    let _ = writeln!(out, "    string ({}) edges {:?}", w.shape, w.edge_indices);
                }
                if let (Some(k), Some(b)) = (v.k, v.kmixed) {
                    let _ = writeln!(out, "    {k}-mixed: {b}");
                }
            }
            out
        }
    })
}

fn cmd_number(ctx: &Ctx, ty: &TypeArgs, family: FamilyName, k: Option<usize>) -> CliResult<String> {
    let (g, lambda, mu) = ty.parse()?;
    let family = match (family, k) {
        (FamilyName::Monotone, None) => ZigzagFamily::Monotone,
        (FamilyName::Universal, None) => ZigzagFamily::Universal,
        (FamilyName::Kmixed, Some(k)) => ZigzagFamily::KMixed(k),
        (FamilyName::Kmixed, None) => return Err(bad("the kmixed family needs --k")),
        (_, Some(_)) => return Err(bad("--k only applies to the kmixed family")),
    };
    let z = zigzag_number(g, &lambda, &mu, family, &ctx.search)?;
    Ok(match ctx.format {
        Format::Json => json_line(&z),
        Format::Csv => {
            let mut out = String::from("cover_id,cover,class,n\n");
            for t in &z.terms {
                let _ = writeln!(out, "{},{},{:?},{}", t.cover_id, csv_field(&t.cover), t.class, t.n);
            }
            out
        }
        Format::Human => {
            let mut out = format!("{}\n", z.value);
            for t in &z.terms {
                let _ = writeln!(out, "  {}  {}  {:?}  N = {}", t.cover_id, t.cover, t.class, t.n);
            }
            out
        }
    })
}

fn parse_csv_usize(s: &str, what: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| bad(format!("bad {what} entry {t:?}"))))
        .collect()
}

fn parse_tails(s: &str) -> CliResult<Vec<TailSpec>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let (incoming, rest) = match t.split_at_checked(1) {
                Some(("i", r)) => (true, r),
                Some(("o", r)) => (false, r),
                _ => return Err(bad(format!("tail {t:?} must start with i or o"))),
            };
            let (digits, fork) = match rest.strip_suffix('f') {
                Some(d) => (d, true),
                None => (rest, false),
            };
            let weight = digits.parse::<u32>().map_err(|_| bad(format!("bad tail weight in {t:?}")))?;
            Ok(TailSpec { incoming, weight, fork })
        })
        .collect()
}

fn cmd_build(ctx: &Ctx, kind: BuildKind, dot: bool) -> CliResult<String> {
    let (cover, meta) = match kind {
        BuildKind::Standard { m, genus } => (build_standard_universal(m, genus)?, json!({"kind": "standard", "m": m})),
        BuildKind::String { start, tails, genus } => {
            let specs = parse_tails(&tails)?;
            (build_string_cover(start, &specs, genus)?, json!({"kind": "string", "start": start, "tails": specs}))
        }
        BuildKind::Chain { order, types, first_right, s } => {
            let order = parse_csv_usize(&order, "order")?;
            let types = match types {
                Some(t) => parse_csv_usize(&t, "types")?
                    .into_iter()
                    .map(|i| ComponentType::from_index(i.min(u8::MAX as usize) as u8))
                    .collect::<crate::Result<Vec<_>>>()?,
                None => chain_types(&order, !first_right)?,
            };
            let chain = build_component_chain(&types, &order, s)?;
            let meta = json!({"kind": "chain", "types": chain.types, "order": chain.order, "exchange": chain.exchange});
            (chain.cover, meta)
        }
        BuildKind::Case { ty, case, m, splitting, s } => {
            let (g, lambda, mu) = ty.parse()?;
            let family = match splitting {
                SplittingName::Simple => CaseFamily::SimpleSplitting,
                SplittingName::Arbitrary => CaseFamily::ArbitrarySplitting,
            };
            let cc = build_case_cover(&lambda, &mu, g, TailCase::from_index(case)?, m, family, s)?;
            let meta = json!({
                "kind": "case",
                "sequence": cc.sequence,
                "family": cc.family,
                "added_pairs": cc.added_pairs,
                "chain": cc.chain.as_ref().map(|c| json!({"types": c.types, "order": c.order, "exchange": c.exchange})),
            });
            (cc.cover, meta)
        }
        BuildKind::Kmixed { ty, lambda_prime, mu_prime, m } => {
            let (g, lambda, mu) = ty.parse()?;
            let km = build_kmixed_cover(&lambda, &mu, &lambda_prime.parse()?, &mu_prime.parse()?, g, m)?;
            let meta = json!({"kind": "kmixed", "k": km.k, "universal_part": km.universal_part, "zigzag_tails": km.zigzag_tails});
            (km.cover, meta)
        }
    };
    if dot {
        return Ok(cover.to_dot(None));
    }
    Ok(match ctx.format {
        Format::Json => json_line(&json!({"cover_id": cover.cover_id(), "cover": cover.to_json(), "build": meta})),
        Format::Csv => {
            let mut out = String::from("edge,from,to,weight\n");
            for (i, e) in cover.edges().iter().enumerate() {
                let _ = writeln!(out, "{i},{},{},{}", e.from, e.to, e.weight);
            }
            out
        }
        Format::Human => format!(
            "{}\n{}\nclass {:?}\n",
            cover.cover_id(),
            cover,
            classify(&cover).class
        ),
    })
}

fn cmd_cache(ctx: &Ctx, command: CacheCommand) -> CliResult<String> {
    let cache = ctx
        .cache
        .as_ref()
        .ok_or_else(|| bad(format!("no cache directory; pass --cache-dir or set {CACHE_ENV}")))?;
    match command {
        CacheCommand::Inspect => {
            let records = cache.records()?;
            Ok(match ctx.format {
                Format::Json => json_line(&records),
                Format::Csv => {
                    let mut out = String::from("key,genus,lambda,mu,variant,signs,value,engine_version,timestamp\n");
                    for r in &records {
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{},{},{},{},{}",
                            r.key,
                            r.spec.genus,
                            csv_field(&r.spec.lambda.to_string()),
                            csv_field(&r.spec.mu.to_string()),
                            csv_field(&r.spec.variant.to_string()),
                            r.spec.signs.as_ref().map(|s| s.to_string()).unwrap_or_default(),
                            r.value,
                            r.engine_version,
                            r.timestamp
                        );
                    }
                    out
                }
                Format::Human => {
                    let mut out = format!("{} records in {}\n", records.len(), cache.path().display());
                    for r in &records {
                        let signs = r.spec.signs.as_ref().map(|s| s.to_string()).unwrap_or_default();
                        let _ = writeln!(
                            out,
                            "{}  g={} λ=({}) μ=({}) {} {}  = {}",
                            &r.key[..12],
                            r.spec.genus,
                            r.spec.lambda,
                            r.spec.mu,
                            r.spec.variant,
                            signs,
                            r.value
                        );
                    }
                    out
                }
            })
        }
        CacheCommand::Clear => {
            let n = cache.clear()?;
            Ok(match ctx.format {
                Format::Json => json_line(&json!({"removed": n})),
                _ => format!("removed {n} records\n"),
            })
        }
    }
}

#[cfg(test)]
mod tests;
