//! `expsum`: tau caches, exponential sums, Farey dissections,
//! Piatetski-Shapiro reports and verification suites.

mod cache;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use expsum_core::amplitude::{Amplitude, PowerAmplitude};
use expsum_core::eigenforms::{CoefficientKind, CoefficientSequence};
use expsum_core::expsum::{direct_sum, farey_decomposed_sum, ArcDiagnostic, QPolicy, SumPhase, SumRequest};
use expsum_core::farey::{default_level, dissect_and_project};
use expsum_core::piatetski::{theorem5_ratio, PSConfig, Theorem5Report};
use expsum_core::verify::{run_suite, Scale, Suite, VerifyConfig};
use expsum_core::Error;

use output::{emit, Cell, Format, Table};

const AFTER_HELP: &str = "\
CSV columns:
  tau     n_max,tau_n_max,path,status
  expsum  N,N_prime,gamma,j,coeff,prime_only,method,Q,value_re,value_im,abs_value,n_terms,abs_sum,bound_ratio
          (--arcs PATH: q,l,x0,m1,m2,subsum_re,subsum_im,residual_norms)
  farey   l,q,arc_left,arc_right,M1,M2,clipped,x0,anchored,lo,hi,m1,m2,integers
  ps      N,c,ps_count,sum_lambda_sq,main_term,ratio,diff_over_N
  verify  suite,check,pass,value,limit,detail
  report  bounds: N,gamma,j,coeff,prime_only,abs_value,bound_ratio; ps: as `ps`
Every file starts with `#` lines naming the versions and the full config.
NA marks a value that does not apply (e.g. bound_ratio outside the admissible window).

Exit codes: 0 success, 1 verification failure, 2 usage, 3 resource or format.";

#[derive(Debug, Parser)]
#[command(name = "expsum", version, about = "Exponential sums with Hecke eigenvalue coefficients", after_help = AFTER_HELP)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Directory holding `tau_v1_<n_max>.txt` caches.
    #[arg(long, global = true, env = "EXPSUM_CACHE_DIR", default_value = ".expsum-cache")]
    cache_dir: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build (or reuse) the tau cache up to n_max.
    Tau(TauArgs),
    /// Evaluate sum_{N < n <= N'} a_n e(j n^gamma).
    Expsum(ExpsumArgs),
    /// Farey dissection of [h(N'), h(N)) projected back to (N, N'].
    Farey(FareyArgs),
    /// Piatetski-Shapiro statistics sum lambda([n^c])^2 over a grid of N.
    Ps(PsArgs),
    /// Run a verification suite; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Trend tables over the standard grids.
    Report(ReportArgs),
}

/// Integer arguments also accept `1e4`-style input.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if f >= 0.0 && f.fract() == 0.0 && f <= 9.0e15 {
        Ok(f as u64)
    } else {
        Err(format!("`{s}` is not a nonnegative integer"))
    }
}

#[derive(Debug, Args, Serialize)]
struct TauArgs {
    #[arg(long, value_parser = parse_count)]
    n_max: u64,
    /// Rebuild even if the cache is unreadable.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Coeff {
    Unit,
    Hecke,
    HeckeSquareAtPrimes,
    Sym2Full,
}

impl From<Coeff> for CoefficientKind {
    fn from(c: Coeff) -> Self {
        match c {
            Coeff::Unit => CoefficientKind::Unit,
            Coeff::Hecke => CoefficientKind::Hecke,
            Coeff::HeckeSquareAtPrimes => CoefficientKind::HeckeSquareAtPrimes,
            Coeff::Sym2Full => CoefficientKind::Sym2Full,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct PhaseArgs {
    #[arg(long, value_parser = parse_count)]
    n: u64,
    /// Upper end N' (default 2N).
    #[arg(long, value_parser = parse_count)]
    n_prime: Option<u64>,
    #[arg(long, default_value_t = 0.95)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    j: f64,
    /// Explicit Farey level (default N^{1/2} / f(N)^{1/3}).
    #[arg(long)]
    q: Option<f64>,
}

impl PhaseArgs {
    fn n_prime(&self) -> u64 {
        self.n_prime.unwrap_or(self.n.saturating_mul(2))
    }

    fn q_policy(&self) -> QPolicy {
        self.q.map_or(QPolicy::DefaultLevel, |q| QPolicy::Explicit { q })
    }
}

#[derive(Debug, Args, Serialize)]
struct ExpsumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    phase: PhaseArgs,
    #[arg(long, value_enum, default_value = "hecke")]
    coeff: Coeff,
    #[arg(long)]
    prime_only: bool,
    /// Regroup over Farey arcs instead of summing directly.
    #[arg(long)]
    farey: bool,
    /// Also write per-arc diagnostics (CSV) here; implies --farey.
    #[arg(long)]
    arcs: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct FareyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    phase: PhaseArgs,
}

#[derive(Debug, Args, Serialize)]
struct PsArgs {
    #[arg(long, default_value_t = 1.05)]
    c: f64,
    /// Comma-separated N values.
    #[arg(long, value_parser = parse_count, value_delimiter = ',', default_value = "1000,10000,100000")]
    n: Vec<u64>,
    /// Admit 1 <= c < 2 outside the theorem range.
    #[arg(long)]
    diagnostic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SuiteArg {
    Identities,
    Farey,
    Oscillatory,
    Bounds,
    Ps,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Grid {
    Small,
    Full,
}

impl From<Grid> for Scale {
    fn from(g: Grid) -> Self {
        match g {
            Grid::Small => Scale::Small,
            Grid::Full => Scale::Full,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    #[arg(long, value_enum, default_value = "small")]
    grid: Grid,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// c for the ps suite.
    #[arg(long, default_value_t = 1.05)]
    c: f64,
    /// N for the ps counting identity.
    #[arg(long, value_parser = parse_count, default_value = "10000")]
    n: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ReportKind {
    Bounds,
    Ps,
}

#[derive(Debug, Args, Serialize)]
struct ReportArgs {
    #[arg(value_enum)]
    table: ReportKind,
    #[arg(long, value_enum, default_value = "small")]
    grid: Grid,
    #[arg(long, default_value_t = 1.05)]
    c: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("no tau cache covering n_max = {need} in {dir}; run `expsum tau --n-max {need}` (or set EXPSUM_CACHE_DIR)")]
    MissingCache { need: u64, dir: PathBuf },
    #[error("{0}; rerun `expsum tau` with --force to rebuild")]
    CorruptCache(Error),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
    #[error("verification failed")]
    Failed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed => 1,
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::InvalidArgument(_) | Error::Precondition(_) => 2,
                Error::OutOfRange { .. }
                | Error::ResourceLimit(_)
                | Error::Format { .. }
                | Error::Io { .. }
                | Error::BudgetExceeded { .. } => 3,
                _ => 1,
            },
            CliError::MissingCache { .. } | CliError::CorruptCache(_) | CliError::Output(_) => 3,
        }
    }
}

#[derive(Serialize)]
struct RunConfig<'a, A: Serialize> {
    command: &'a str,
    format: Format,
    #[serde(flatten)]
    args: &'a A,
}

struct Ctx {
    format: Format,
    cache_dir: PathBuf,
    out: Option<PathBuf>,
}

impl Ctx {
    fn write<A: Serialize>(&self, command: &str, args: &A, table: &Table) -> Result<(), CliError> {
        let cfg = RunConfig {
            command,
            format: self.format,
            args,
        };
        match &self.out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                emit(&mut w, self.format, command, &cfg, table)?;
                w.flush()?;
            }
            None => {
                let stdout = std::io::stdout();
                let mut w = stdout.lock();
                emit(&mut w, self.format, command, &cfg, table)?;
            }
        }
        Ok(())
    }
}

fn cmd_tau(ctx: &Ctx, args: &TauArgs) -> Result<(), CliError> {
    if args.n_max == 0 {
        return Err(CliError::Usage("--n-max must be positive".into()));
    }
    let (table, status) = cache::ensure_table(&ctx.cache_dir, args.n_max, args.force)?;
    let mut t = Table::new(&["n_max", "tau_n_max", "path", "status"]);
    t.push(vec![
        table.n_max().into(),
        table.tau(table.n_max())?.into(),
        cache::table_path(&ctx.cache_dir, args.n_max).display().to_string().into(),
        status.as_str().into(),
    ]);
    ctx.write("tau", args, &t)
}

fn coefficients(ctx: &Ctx, kind: CoefficientKind, n_prime: u64) -> Result<CoefficientSequence, CliError> {
    if kind == CoefficientKind::Unit {
        return Ok(CoefficientSequence::unit());
    }
    let need = CoefficientSequence::required_table_size(kind, n_prime);
    let table = cache::find_table(&ctx.cache_dir, need)?;
    Ok(CoefficientSequence::new(kind, table))
}

fn cmd_expsum(ctx: &Ctx, args: &ExpsumArgs) -> Result<(), CliError> {
    let p = &args.phase;
    let n_prime = p.n_prime();
    let phase = SumPhase::power(p.j, p.gamma)?;
    let kind = CoefficientKind::from(args.coeff);
    let coeff = coefficients(ctx, kind, n_prime)?;
    let req = SumRequest::new(coeff, phase, p.n, n_prime)
        .prime_only(args.prime_only)
        .with_q(p.q_policy());
    let farey = args.farey || args.arcs.is_some();
    let res = if farey {
        farey_decomposed_sum(&req)?
    } else {
        direct_sum(&req)?
    };
    let mut t = Table::new(&[
        "N",
        "N_prime",
        "gamma",
        "j",
        "coeff",
        "prime_only",
        "method",
        "Q",
        "value_re",
        "value_im",
        "abs_value",
        "n_terms",
        "abs_sum",
        "bound_ratio",
    ]);
    t.push(vec![
        p.n.into(),
        n_prime.into(),
        p.gamma.into(),
        p.j.into(),
        kind.to_string().into(),
        args.prime_only.into(),
        (if farey { "farey" } else { "direct" }).into(),
        if farey { Cell::Float(req.level()?) } else { Cell::Na },
        res.value.re.into(),
        res.value.im.into(),
        res.value.norm().into(),
        res.n_terms.into(),
        res.abs_sum.into(),
        res.bound_ratio.into(),
    ]);
    if let (Some(path), Some(arcs)) = (&args.arcs, &res.per_arc) {
        write_arcs(path, args, arcs)?;
    }
    ctx.write("expsum", args, &t)
}

fn write_arcs(path: &PathBuf, args: &ExpsumArgs, arcs: &[ArcDiagnostic]) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    let cfg = serde_json::to_string(args).map_err(std::io::Error::other)?;
    writeln!(w, "# expsum-cli {} per-arc diagnostics config={cfg}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "{}", ArcDiagnostic::CSV_HEADER)?;
    for a in arcs {
        writeln!(w, "{}", a.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_farey(ctx: &Ctx, args: &FareyArgs) -> Result<(), CliError> {
    let p = &args.phase;
    let amp = PowerAmplitude::new(p.j, p.gamma)?;
    if p.n == 0 || p.n_prime() < p.n || p.n_prime() > 2 * p.n {
        return Err(CliError::Usage(format!("need 0 < N <= N' <= 2N, got N = {}, N' = {}", p.n, p.n_prime())));
    }
    let (n, n_prime) = (p.n as f64, p.n_prime() as f64);
    let level = p.q.unwrap_or_else(|| default_level(&amp, n));
    let parts = dissect_and_project(&amp, n, n_prime, level)?;
    let mut t = Table::new(&[
        "l", "q", "arc_left", "arc_right", "M1", "M2", "clipped", "x0", "anchored", "lo", "hi", "m1", "m2", "integers",
    ]);
    for (arc, iv) in &parts {
        let r = iv.integers();
        let count = if r.is_empty() { 0 } else { r.end() - r.start() + 1 };
        t.push(vec![
            arc.l.into(),
            arc.q.into(),
            arc.arc_left().into(),
            arc.arc_right().into(),
            arc.m1().into(),
            arc.m2().into(),
            arc.is_clipped().into(),
            iv.x0.into(),
            iv.anchored.into(),
            iv.lo.into(),
            iv.hi.into(),
            iv.m1().into(),
            iv.m2().into(),
            count.into(),
        ]);
    }
    eprintln!("Q = {level}, {} arcs, f(N) = {}", parts.len(), amp.value(n));
    ctx.write("farey", args, &t)
}

fn ps_row(r: &Theorem5Report) -> Vec<Cell> {
    vec![
        r.n.into(),
        r.c.into(),
        r.ps_count.into(),
        r.sum_lambda_sq.into(),
        r.main_term.into(),
        r.ratio.into(),
        r.diff_over_n.into(),
    ]
}

const PS_COLUMNS: [&str; 7] = ["N", "c", "ps_count", "sum_lambda_sq", "main_term", "ratio", "diff_over_N"];

fn ps_table(ctx: &Ctx, c: f64, grid: &[u64], diagnostic: bool, compute_missing: bool) -> Result<Table, CliError> {
    let cfgs = grid
        .iter()
        .map(|&n| if diagnostic { PSConfig::diagnostic(c, n) } else { PSConfig::new(c, n) })
        .collect::<Result<Vec<_>, _>>()?;
    let need = cfgs.iter().map(|c| c.p_max()).collect::<Result<Vec<_>, _>>()?.into_iter().max().unwrap_or(1);
    let table = if compute_missing {
        cache::find_or_compute(&ctx.cache_dir, need)?
    } else {
        cache::find_table(&ctx.cache_dir, need)?
    };
    let mut t = Table::new(&PS_COLUMNS);
    for cfg in &cfgs {
        eprintln!("ps: c = {}, N = {}", cfg.c, cfg.n);
        t.push(ps_row(&theorem5_ratio(cfg, &table)?));
    }
    Ok(t)
}

fn cmd_ps(ctx: &Ctx, args: &PsArgs) -> Result<(), CliError> {
    let t = ps_table(ctx, args.c, &args.n, args.diagnostic, false)?;
    ctx.write("ps", args, &t)
}

fn cmd_verify(ctx: &Ctx, args: &VerifyArgs) -> Result<(), CliError> {
    let cfg = VerifyConfig {
        scale: args.grid.into(),
        seed: args.seed,
        ps_c: args.c,
        ps_n: args.n,
    };
    let suites: Vec<Suite> = match args.suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Identities => vec![Suite::Identities],
        SuiteArg::Farey => vec![Suite::Farey],
        SuiteArg::Oscillatory => vec![Suite::Oscillatory],
        SuiteArg::Bounds => vec![Suite::Bounds],
        SuiteArg::Ps => vec![Suite::Ps],
    };
    let need = suites.iter().map(|&s| cfg.required_table(s)).max().unwrap_or(0);
    let table: Option<Arc<_>> = if need > 0 {
        Some(cache::find_or_compute(&ctx.cache_dir, need)?)
    } else {
        None
    };
    let mut t = Table::new(&["suite", "check", "pass", "value", "limit", "detail"]);
    let mut ok = true;
    for suite in suites {
        eprintln!("verify: {suite}");
        let rep = run_suite(suite, &cfg, table.as_ref())?;
        ok &= rep.pass;
        for c in rep.checks {
            eprintln!("  {}", c.line());
            t.push(vec![
                suite.to_string().into(),
                c.name.into(),
                c.pass.into(),
                c.value.into(),
                c.limit.into(),
                c.detail.into(),
            ]);
        }
    }
    ctx.write("verify", args, &t)?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

fn cmd_report(ctx: &Ctx, args: &ReportArgs) -> Result<(), CliError> {
    let cfg = VerifyConfig {
        scale: args.grid.into(),
        ps_c: args.c,
        ..VerifyConfig::default()
    };
    let t = match args.table {
        ReportKind::Ps => ps_table(ctx, args.c, &cfg.theorem5_grid(), false, true)?,
        ReportKind::Bounds => {
            let grid = cfg.bounds_grid();
            let table = cache::find_or_compute(&ctx.cache_dir, 2 * grid.iter().max().copied().unwrap_or(1))?;
            let mut t = Table::new(&["N", "gamma", "j", "coeff", "prime_only", "abs_value", "bound_ratio"]);
            for &n in &grid {
                eprintln!("report bounds: N = {n}");
                for kind in [CoefficientKind::Unit, CoefficientKind::Hecke] {
                    for prime_only in [false, true] {
                        for gamma in [0.92, 0.95] {
                            for j in [1.0, 2.0] {
                                let coeff = CoefficientSequence::with_kind(kind, Some(table.clone()))?;
                                let req = SumRequest::new(coeff, SumPhase::power(j, gamma)?, n, 2 * n)
                                    .prime_only(prime_only);
                                let r = direct_sum(&req)?;
                                t.push(vec![
                                    n.into(),
                                    gamma.into(),
                                    j.into(),
                                    kind.to_string().into(),
                                    prime_only.into(),
                                    r.value.norm().into(),
                                    r.bound_ratio.into(),
                                ]);
                            }
                        }
                    }
                }
            }
            t
        }
    };
    ctx.write("report", args, &t)
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    let ctx = Ctx {
        format: cli.format,
        cache_dir: cli.cache_dir,
        out: cli.out,
    };
    match &cli.command {
        Command::Tau(a) => cmd_tau(&ctx, a),
        Command::Expsum(a) => cmd_expsum(&ctx, a),
        Command::Farey(a) => cmd_farey(&ctx, a),
        Command::Ps(a) => cmd_ps(&ctx, a),
        Command::Verify(a) => cmd_verify(&ctx, a),
        Command::Report(a) => cmd_report(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accept_scientific() {
        assert_eq!(parse_count("10000").unwrap(), 10_000);
        assert_eq!(parse_count("1e4").unwrap(), 10_000);
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
