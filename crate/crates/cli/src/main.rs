//! Command-line surface: build the exterior algebras, print Hilbert series
//! and first cohomology, run the identity verification suites and the
//! conjecture comparisons, and manage the on-disk degree cache.
//!
//! Exit codes: 0 success / all checks pass; 1 verification failure;
//! 2 usage or IO error; 3 resource cap exceeded.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use weylform::cache::{self, DegreeCache};
use weylform::calculus::{
    build_quad_algebra, build_quar_algebra, build_woronowicz_handle, h1, theta_squared_central,
};
use weylform::connections::{check_conjecture, verify_identity, ConjectureId, Identity};
use weylform::ncalg::{AlgebraError, AlgebraHandle, ResourceCaps};
use weylform::report::{RunReport, VerificationReport};
use weylform::{RootSystem, RootSystemType};

const CACHE_DIR_ENV: &str = "WEYLFORM_CACHE_DIR";
const DEFAULT_CAP: u64 = 1 << 20;

#[derive(Parser)]
#[command(
    name = "weylform",
    version,
    about = "Exterior differential algebras and flat connections on finite Weyl groups"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Directory for cached degree bases (default: $WEYLFORM_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Monomial cap: refuse degrees whose monomial count exceeds this.
    #[arg(long, global = true)]
    cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum AlgebraChoice {
    Quad,
    Quar,
    Woronowicz,
    Anticomm,
}

impl std::fmt::Display for AlgebraChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgebraChoice::Quad => write!(f, "quad"),
            AlgebraChoice::Quar => write!(f, "quar"),
            AlgebraChoice::Woronowicz => write!(f, "woronowicz"),
            AlgebraChoice::Anticomm => write!(f, "anticomm"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Graded dimensions of one of the algebras.
    Hilbert {
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, value_enum, default_value_t = AlgebraChoice::Quad)]
        algebra: AlgebraChoice,
        #[arg(long = "max-deg", default_value_t = 6)]
        max_deg: usize,
    },
    /// Run a verification suite or a single named identity.
    Verify {
        /// Suite (lemma5.1, lemma5.2, lemma5.3, lemma5.4, lemma5.5, cor5.1,
        /// cor5.2, thm5.1, prop5.1, prop3.2, example3.1, remark2.3,
        /// square_remark, b_family, all) or identity name (cyclic, chain,
        /// telescoping, power_sum, top_product, hat_expansion, elementary,
        /// hat_sum, anticomm, flat).
        suite: String,
        #[arg(long = "type")]
        kind: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
        /// Algebra to check in (defaults to the suite's natural algebra).
        #[arg(long, value_enum)]
        algebra: Option<AlgebraChoice>,
        /// Letters for cyclic/chain/telescoping, e.g. --letters 1,2,3.
        #[arg(long, value_delimiter = ',')]
        letters: Option<Vec<usize>>,
        /// Index parameter for elementary/hat_expansion/flat.
        #[arg(long)]
        k: Option<usize>,
        /// Power parameter for power_sum.
        #[arg(long)]
        m: Option<usize>,
    },
    /// First cohomology: dimension and a basis of closed 1-forms.
    Cohomology {
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Degree-by-degree comparison table for a conjecture (2.1, 2.2, 5.1).
    Conjecture {
        which: String,
        #[arg(long = "type")]
        kind: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long = "max-deg", default_value_t = 4)]
        max_deg: usize,
    },
    /// Inspect or clear the degree cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// List cache entries with their decoded headers.
    List,
    /// Entry count and total size.
    Stats,
    /// Remove all cache entries.
    Clear,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit)
        }
    }
}

struct CliError {
    message: String,
    exit: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            exit: 2,
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        let exit = match e {
            AlgebraError::CapExceeded { .. } => 3,
            _ => 2,
        };
        CliError {
            message: e.to_string(),
            exit,
        }
    }
}

impl From<weylform::weyl::WeylError> for CliError {
    fn from(e: weylform::weyl::WeylError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<weylform::cache::CacheError> for CliError {
    fn from(e: weylform::cache::CacheError) -> Self {
        CliError {
            message: e.to_string(),
            exit: 2,
        }
    }
}

fn parse_system(kind: &str, rank: Option<usize>) -> Result<Arc<RootSystem>, CliError> {
    let kind: RootSystemType = kind.parse()?;
    let rank = match (kind, rank) {
        (RootSystemType::G2, r) => r.unwrap_or(2),
        (_, Some(r)) => r,
        (k, None) => {
            return Err(CliError::usage(format!(
                "--rank is required for type {}",
                k
            )))
        }
    };
    Ok(Arc::new(RootSystem::build(kind, rank)?))
}

struct Env {
    format: Format,
    cache_dir: Option<PathBuf>,
    cap: Option<u64>,
}

impl Env {
    fn caps(&self, min_cap: u64) -> ResourceCaps {
        ResourceCaps {
            max_monomials: self.cap.unwrap_or_else(|| DEFAULT_CAP.max(min_cap)),
        }
    }

    fn handle(
        &self,
        rs: &Arc<RootSystem>,
        algebra: AlgebraChoice,
        min_cap: u64,
    ) -> Result<AlgebraHandle, CliError> {
        let caps = self.caps(min_cap);
        let mut h = match algebra {
            AlgebraChoice::Quad => build_quad_algebra(Arc::clone(rs), caps)?,
            AlgebraChoice::Quar => {
                if rs.kind() != RootSystemType::B {
                    return Err(CliError::usage(
                        "the quartic algebra is defined for type B only",
                    ));
                }
                build_quar_algebra(Arc::clone(rs), caps)?
            }
            AlgebraChoice::Woronowicz => build_woronowicz_handle(Arc::clone(rs), caps)?,
            AlgebraChoice::Anticomm => {
                build_quad_algebra(Arc::clone(rs), caps)?.anticommutative_quotient()?
            }
        };
        if let Some(dir) = &self.cache_dir {
            h = h.with_cache(DegreeCache::new(dir, &rs.kind().to_string(), rs.rank()));
        }
        Ok(h)
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let env = Env {
        format: cli.format,
        cache_dir: cli
            .cache_dir
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from)),
        cap: cli.cap,
    };
    match cli.command {
        Command::Hilbert {
            kind,
            rank,
            algebra,
            max_deg,
        } => cmd_hilbert(&env, &kind, rank, algebra, max_deg),
        Command::Verify {
            suite,
            kind,
            rank,
            algebra,
            letters,
            k,
            m,
        } => cmd_verify(&env, &suite, kind.as_deref(), rank, algebra, letters, k, m),
        Command::Cohomology { kind, rank } => cmd_cohomology(&env, &kind, rank),
        Command::Conjecture {
            which,
            kind,
            rank,
            max_deg,
        } => cmd_conjecture(&env, &which, kind.as_deref(), rank, max_deg),
        Command::Cache { action } => cmd_cache(&env, action),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit_report(env: &Env, report: &RunReport) -> Result<(), CliError> {
    match env.format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(report).map_err(|e| CliError::usage(e.to_string()))?
            );
        }
        Format::Csv => {
            if !report.dims.is_empty() {
                println!("degree,dim");
                for (d, dim) in report.degrees.iter().zip(&report.dims) {
                    println!("{},{}", d, dim);
                }
            }
            if !report.identities.is_empty() {
                println!("name,params,status,witness");
                for r in &report.identities {
                    println!(
                        "{},{},{},{}",
                        csv_field(&r.name),
                        csv_field(&r.params),
                        if r.passed() { "pass" } else { "fail" },
                        csv_field(r.witness.as_deref().unwrap_or(""))
                    );
                }
            }
            if let Some(t) = &report.table {
                println!(
                    "degree,{},{},agree",
                    csv_field(&t.lhs_label),
                    csv_field(&t.rhs_label)
                );
                for row in &t.rows {
                    println!("{},{},{},{}", row.degree, row.lhs, row.rhs, row.agree);
                }
            }
        }
        Format::Text => unreachable!("text output is emitted by each command"),
    }
    Ok(())
}

fn cmd_hilbert(
    env: &Env,
    kind: &str,
    rank: Option<usize>,
    algebra: AlgebraChoice,
    max_deg: usize,
) -> Result<ExitCode, CliError> {
    let rs = parse_system(kind, rank)?;
    let h = env.handle(&rs, algebra, 0)?;
    let dims = h.hilbert_dims(max_deg)?;
    let mut report = RunReport::new("hilbert")
        .with_param("type", rs.kind())
        .with_param("rank", rs.rank())
        .with_param("algebra", algebra)
        .with_param("max_deg", max_deg);
    report.degrees = (0..=max_deg).collect();
    report.dims = dims.clone();
    match env.format {
        Format::Text => {
            println!(
                "{}",
                dims.iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
        }
        _ => emit_report(env, &report)?,
    }
    Ok(ExitCode::SUCCESS)
}

/// One verification job: a root system, the algebra to reduce in, the
/// identity, and the monomial count its degrees require.
struct Job {
    system: (RootSystemType, usize),
    algebra: AlgebraChoice,
    ident: Identity,
    min_cap: u64,
}

impl Job {
    fn new(kind: RootSystemType, rank: usize, algebra: AlgebraChoice, ident: Identity) -> Self {
        Job {
            system: (kind, rank),
            algebra,
            ident,
            min_cap: 0,
        }
    }

    fn with_cap(mut self, cap: u64) -> Self {
        self.min_cap = cap;
        self
    }
}

fn suite_jobs(suite: &str) -> Option<Vec<Job>> {
    use AlgebraChoice::{Quad, Quar};
    use RootSystemType::{A, B, D, G2};
    let mut jobs = Vec::new();
    match suite {
        "lemma5.1" => {
            jobs.push(Job::new(
                A,
                2,
                Quad,
                Identity::Cyclic {
                    letters: vec![1, 2, 3],
                },
            ));
            jobs.push(Job::new(
                A,
                3,
                Quad,
                Identity::Cyclic {
                    letters: vec![1, 2, 3],
                },
            ));
            jobs.push(Job::new(
                A,
                3,
                Quad,
                Identity::Cyclic {
                    letters: vec![1, 2, 3, 4],
                },
            ));
        }
        "lemma5.2" => {
            jobs.push(Job::new(
                A,
                3,
                Quad,
                Identity::Chain {
                    letters: vec![1, 2, 3, 4],
                },
            ));
            jobs.push(Job::new(
                A,
                4,
                Quad,
                Identity::Chain {
                    letters: vec![1, 2, 3, 4, 5],
                },
            ));
        }
        "lemma5.3" => {
            jobs.push(Job::new(A, 2, Quad, Identity::TopProduct));
            jobs.push(Job::new(A, 3, Quad, Identity::TopProduct));
        }
        "lemma5.4" => {
            for k in 1..=3 {
                jobs.push(Job::new(A, 2, Quad, Identity::HatExpansion { k }));
            }
            for k in 1..=4 {
                jobs.push(Job::new(A, 3, Quad, Identity::HatExpansion { k }));
            }
        }
        "lemma5.5" => {
            jobs.push(Job::new(
                A,
                2,
                Quad,
                Identity::Telescoping {
                    letters: vec![1, 2, 3],
                },
            ));
            jobs.push(Job::new(
                A,
                3,
                Quad,
                Identity::Telescoping {
                    letters: vec![1, 2, 3, 4],
                },
            ));
        }
        "cor5.1" => {
            jobs.push(Job::new(A, 2, Quad, Identity::PowerSum { m: 1 }));
            jobs.push(Job::new(A, 2, Quad, Identity::PowerSum { m: 2 }));
            jobs.push(Job::new(A, 3, Quad, Identity::PowerSum { m: 1 }));
        }
        "cor5.2" => {
            for k in 1..=3 {
                jobs.push(Job::new(D, 3, Quad, Identity::Elementary { k }));
            }
            jobs.push(Job::new(D, 3, Quad, Identity::TopProduct));
            jobs.push(Job::new(D, 3, Quad, Identity::HatSum));
            for k in 1..=2 {
                jobs.push(Job::new(D, 4, Quad, Identity::Elementary { k }));
            }
            jobs.push(Job::new(D, 4, Quad, Identity::TopProduct));
            jobs.push(Job::new(D, 4, Quad, Identity::HatSum));
        }
        "thm5.1" => {
            for k in 1..=3 {
                jobs.push(Job::new(A, 2, Quad, Identity::Elementary { k }));
            }
            jobs.push(Job::new(A, 2, Quad, Identity::TopProduct));
            jobs.push(Job::new(A, 2, Quad, Identity::HatSum));
            for k in 1..=4 {
                jobs.push(Job::new(A, 3, Quad, Identity::Elementary { k }).with_cap(1 << 21));
            }
            jobs.push(Job::new(A, 3, Quad, Identity::TopProduct));
            jobs.push(Job::new(A, 3, Quad, Identity::HatSum));
        }
        "square_remark" => {
            jobs.push(Job::new(A, 2, Quad, Identity::SquareRemark));
            jobs.push(Job::new(A, 3, Quad, Identity::SquareRemark));
        }
        "prop5.1" => {
            for rank in [3, 4] {
                jobs.push(Job::new(D, rank, Quad, Identity::DEmbeddingRelations));
                jobs.push(Job::new(D, rank, Quad, Identity::DEmbeddingIota));
                jobs.push(Job::new(D, rank, Quad, Identity::DEmbeddingPi));
            }
        }
        "prop3.2" => {
            for (kind, rank, n) in [(A, 2, 3), (A, 3, 4), (B, 2, 2), (B, 3, 3), (D, 3, 3)] {
                for i in 1..=n {
                    for j in (i + 1)..=n {
                        jobs.push(Job::new(kind, rank, Quad, Identity::Anticomm { i, j }));
                    }
                    jobs.push(Job::new(kind, rank, Quad, Identity::Flat { i }));
                }
            }
        }
        "example3.1" => {
            jobs.push(Job::new(G2, 2, Quad, Identity::G2KernelRelations));
            jobs.push(Job::new(G2, 2, Quad, Identity::G2EtaFlat { which: 1 }));
            jobs.push(Job::new(G2, 2, Quad, Identity::G2EtaFlat { which: 2 }));
            jobs.push(Job::new(G2, 2, Quad, Identity::G2EtaAnticomm));
        }
        "remark2.3" => {
            jobs.push(Job::new(
                B,
                2,
                Quad,
                Identity::QuarticSeparates { i: 1, j: 2 },
            ));
        }
        "b_family" => {
            jobs.push(Job::new(B, 2, Quar, Identity::Anticomm { i: 1, j: 2 }));
            for k in 1..=2 {
                jobs.push(Job::new(B, 2, Quar, Identity::Elementary { k }));
            }
            for i in 1..=3usize {
                for j in (i + 1)..=3 {
                    jobs.push(Job::new(B, 3, Quar, Identity::Anticomm { i, j }));
                }
            }
            for k in 1..=3 {
                jobs.push(Job::new(B, 3, Quar, Identity::Elementary { k }));
            }
        }
        "all" => {
            for s in [
                "lemma5.1",
                "lemma5.2",
                "lemma5.3",
                "lemma5.4",
                "lemma5.5",
                "cor5.1",
                "cor5.2",
                "thm5.1",
                "square_remark",
                "prop5.1",
                "prop3.2",
                "example3.1",
                "remark2.3",
                "b_family",
            ] {
                jobs.extend(suite_jobs(s).unwrap());
            }
        }
        _ => return None,
    }
    Some(jobs)
}

#[allow(clippy::too_many_arguments)]
fn single_identity_job(
    name: &str,
    kind: Option<&str>,
    rank: Option<usize>,
    algebra: Option<AlgebraChoice>,
    letters: Option<Vec<usize>>,
    k: Option<usize>,
    m: Option<usize>,
) -> Result<Option<Vec<Job>>, CliError> {
    let need_letters = || {
        letters
            .clone()
            .ok_or_else(|| CliError::usage(format!("identity `{}` needs --letters", name)))
    };
    let need_k = || k.ok_or_else(|| CliError::usage(format!("identity `{}` needs --k", name)));
    let ident = match name {
        "cyclic" => Identity::Cyclic {
            letters: need_letters()?,
        },
        "chain" => Identity::Chain {
            letters: need_letters()?,
        },
        "telescoping" => Identity::Telescoping {
            letters: need_letters()?,
        },
        "power_sum" => Identity::PowerSum {
            m: m.ok_or_else(|| CliError::usage("power_sum needs --m"))?,
        },
        "top_product" => Identity::TopProduct,
        "hat_expansion" => Identity::HatExpansion { k: need_k()? },
        "elementary" => Identity::Elementary { k: need_k()? },
        "hat_sum" => Identity::HatSum,
        "square_remark_identity" => Identity::SquareRemark,
        "anticomm" => {
            let l = need_letters()?;
            if l.len() != 2 {
                return Err(CliError::usage("anticomm needs --letters i,j"));
            }
            Identity::Anticomm { i: l[0], j: l[1] }
        }
        "flat" => Identity::Flat { i: need_k()? },
        _ => return Ok(None),
    };
    let kind = kind.ok_or_else(|| CliError::usage("a single identity needs --type"))?;
    let rs = parse_system(kind, rank)?;
    let algebra = algebra.unwrap_or(AlgebraChoice::Quad);
    Ok(Some(vec![Job::new(rs.kind(), rs.rank(), algebra, ident)]))
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    env: &Env,
    suite: &str,
    kind: Option<&str>,
    rank: Option<usize>,
    algebra: Option<AlgebraChoice>,
    letters: Option<Vec<usize>>,
    k: Option<usize>,
    m: Option<usize>,
) -> Result<ExitCode, CliError> {
    let mut jobs = match suite_jobs(suite) {
        Some(jobs) => jobs,
        None => single_identity_job(suite, kind, rank, algebra, letters, k, m)?
            .ok_or_else(|| CliError::usage(format!("unknown suite or identity `{}`", suite)))?,
    };
    // Suites can be narrowed to one system; algebra can be overridden.
    if suite_jobs(suite).is_some() {
        if let Some(kind) = kind {
            let kind: RootSystemType = kind.parse()?;
            jobs.retain(|j| j.system.0 == kind);
        }
        if let Some(rank) = rank {
            jobs.retain(|j| j.system.1 == rank);
        }
        if let Some(algebra) = algebra {
            for j in &mut jobs {
                j.algebra = algebra;
            }
        }
        if jobs.is_empty() {
            return Err(CliError::usage(
                "no instances of this suite match the requested type/rank",
            ));
        }
    }

    // one handle per (system, algebra), sized for the largest job on it
    let mut needed: BTreeMap<(String, usize, String), u64> = BTreeMap::new();
    for job in &jobs {
        let key = (
            job.system.0.to_string(),
            job.system.1,
            job.algebra.to_string(),
        );
        let e = needed.entry(key).or_insert(0);
        *e = (*e).max(job.min_cap);
    }
    let mut handles: BTreeMap<(String, usize, String), AlgebraHandle> = BTreeMap::new();
    let mut reports: Vec<VerificationReport> = Vec::new();
    for job in &jobs {
        let key = (
            job.system.0.to_string(),
            job.system.1,
            job.algebra.to_string(),
        );
        if !handles.contains_key(&key) {
            let rs = Arc::new(RootSystem::build(job.system.0, job.system.1)?);
            handles.insert(key.clone(), env.handle(&rs, job.algebra, needed[&key])?);
        }
        let h = &handles[&key];
        reports.push(verify_identity(h, &job.ident)?);
    }

    let all_pass = reports.iter().all(|r| r.passed());
    let mut report = RunReport::new("verify").with_param("suite", suite);
    report.identities = reports;
    match env.format {
        Format::Text => {
            for r in &report.identities {
                match &r.witness {
                    None => println!("PASS {} [{}]", r.name, r.params),
                    Some(w) => println!("FAIL {} [{}]: {}", r.name, r.params, w),
                }
            }
            let n = report.identities.len();
            let passed = report.identities.iter().filter(|r| r.passed()).count();
            println!("{}/{} checks passed", passed, n);
        }
        _ => emit_report(env, &report)?,
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_cohomology(env: &Env, kind: &str, rank: Option<usize>) -> Result<ExitCode, CliError> {
    let rs = parse_system(kind, rank)?;
    let caps = env.caps(0);
    let (dim, basis) = h1(Arc::clone(&rs), caps)?;
    let h = env.handle(&rs, AlgebraChoice::Quad, 0)?;
    let names: Vec<String> = rs.reflections().iter().map(|r| r.name.clone()).collect();
    let central = theta_squared_central(&h, 2)?;
    let mut report = RunReport::new("cohomology")
        .with_param("type", rs.kind())
        .with_param("rank", rs.rank());
    report.degrees = vec![1];
    report.dims = vec![dim];
    report.notes.push(
        "H^1 is computed as closed 1-forms; exact 1-forms vanish because d kills constants"
            .to_string(),
    );
    report.notes.push(format!(
        "theta^2 central on degrees <= 2 (d^2 = [theta^2, -]): {}",
        central
    ));
    for b in &basis {
        report.notes.push(format!("basis: {}", b.display(&names)));
    }
    match env.format {
        Format::Text => {
            println!("H^1({}) dimension: {}", rs.label(), dim);
            for b in &basis {
                println!("  basis: {}", b.display(&names));
            }
            for n in &report.notes[..2] {
                println!("  note: {}", n);
            }
        }
        _ => emit_report(env, &report)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_conjecture(
    env: &Env,
    which: &str,
    kind: Option<&str>,
    rank: Option<usize>,
    max_deg: usize,
) -> Result<ExitCode, CliError> {
    let id: ConjectureId = which.parse().map_err(CliError::usage)?;
    let kind = kind.unwrap_or(match id {
        ConjectureId::QuarComplete => "B",
        _ => "A",
    });
    let rs = parse_system(kind, rank)?;
    let table = check_conjecture(Arc::clone(&rs), id, max_deg, env.caps(0))?;
    let mut report = RunReport::new("conjecture")
        .with_param("which", which)
        .with_param("type", rs.kind())
        .with_param("rank", rs.rank())
        .with_param("max_deg", max_deg);
    report.table = Some(table);
    match env.format {
        Format::Text => {
            let t = report.table.as_ref().unwrap();
            println!(
                "conjecture {} at {}: {} vs {}",
                t.which, t.system, t.lhs_label, t.rhs_label
            );
            let short = |s: &str| s.chars().take(10).collect::<String>();
            println!(
                "{:>6} {:>10} {:>10} {:>7}",
                "degree",
                short(&t.lhs_label),
                short(&t.rhs_label),
                "agree"
            );
            for row in &t.rows {
                println!(
                    "{:>6} {:>10} {:>10} {:>7}",
                    row.degree, row.lhs, row.rhs, row.agree
                );
            }
            for note in &t.notes {
                println!("note: {}", note);
            }
            println!(
                "agreement at all checked degrees: {} (reported, not asserted)",
                t.all_agree()
            );
        }
        _ => emit_report(env, &report)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_cache(env: &Env, action: CacheAction) -> Result<ExitCode, CliError> {
    let dir = env.cache_dir.clone().ok_or_else(|| {
        CliError::usage(format!(
            "no cache directory (--cache-dir or ${})",
            CACHE_DIR_ENV
        ))
    })?;
    let mut report = RunReport::new("cache").with_param("dir", dir.display().to_string());
    match action {
        CacheAction::List => {
            let infos = cache::list_dir(&dir)?;
            for info in &infos {
                let desc = match &info.header {
                    Some(h) => format!(
                        "type={} rank={} kind={} degree={} rows={} qdim={}",
                        h.system, h.rank, h.kind, h.degree, h.rows, h.qdim
                    ),
                    None => "unrecognized".to_string(),
                };
                report
                    .notes
                    .push(format!("{} {} bytes: {}", info.file, info.bytes, desc));
            }
            report = report.with_param("entries", infos.len());
            match env.format {
                Format::Text => {
                    for n in &report.notes {
                        println!("{}", n);
                    }
                    println!("{} entries", infos.len());
                }
                _ => emit_report(env, &report)?,
            }
        }
        CacheAction::Stats => {
            let infos = cache::list_dir(&dir)?;
            let bytes: u64 = infos.iter().map(|i| i.bytes).sum();
            report = report
                .with_param("entries", infos.len())
                .with_param("bytes", bytes);
            match env.format {
                Format::Text => println!("{} entries, {} bytes", infos.len(), bytes),
                _ => emit_report(env, &report)?,
            }
        }
        CacheAction::Clear => {
            let removed = cache::clear_dir(&dir)?;
            report = report.with_param("removed", removed);
            match env.format {
                Format::Text => println!("removed {} entries", removed),
                _ => emit_report(env, &report)?,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
