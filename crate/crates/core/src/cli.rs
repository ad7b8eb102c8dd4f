//! Command-line front end. [`run`] parses arguments and dispatches; it never
//! exits the process itself so that tests can drive it directly.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::completion;
use crate::error::Error;
use crate::instance::{self, InstanceSpec, Objective, Transform, WeightMatrix, GENERATOR_ID};
use crate::matching::Matching;
use crate::maxplus::{fmt_rational, ExtReal, MaxPolynomial, Rational, SingularValue, TermClass, BRUTE_FORCE_BOUND};
use crate::oracle;
use crate::parametric::{self, GkResult, RunOptions};
use crate::sequence::AssignmentSequence;
use crate::ssp;

#[derive(Parser, Debug)]
#[command(name = "kassign", version, about = "Exact k-cardinality assignments and max-plus singular values")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Solver pipeline.
    #[arg(long, value_enum, global = true, default_value_t = Algo::Auto)]
    pub algo: Algo,
    /// Treat the instance as a minimisation problem.
    #[arg(long, global = true)]
    pub min: bool,
    /// Write the pivot/cycle trace of the parametric sweep to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub trace: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Brute,
    Ssp,
    Gk,
    GkFill,
    Auto,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Brute => "brute",
            Algo::Ssp => "ssp",
            Algo::Gk => "gk",
            Algo::GkFill => "gk-fill",
            Algo::Auto => "auto",
        }
    }

    fn resolve(self, n: usize) -> Algo {
        match self {
            Algo::Auto if n <= BRUTE_FORCE_BOUND => Algo::Brute,
            Algo::Auto => Algo::GkFill,
            a => a,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute all k-assignments of an instance.
    Solve {
        file: PathBuf,
        /// Leave the matchings out of the report.
        #[arg(long)]
        no_matchings: bool,
    },
    /// Run several solvers and compare their results exactly.
    Verify(VerifyArgs),
    /// Time the solvers on generated instances.
    Bench(BenchArgs),
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Print the full characteristic maxpolynomial, its roots and term classes.
    Poly { file: PathBuf },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Instance file; omit to use seeded random instances.
    pub file: Option<PathBuf>,
    /// Solvers to compare.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algo::Brute, Algo::Ssp, Algo::GkFill])]
    pub solvers: Vec<Algo>,
    /// Number of random instances, seeds `seed, seed+1, ...`.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(short = 'n', long, default_value_t = 5)]
    pub size: usize,
    #[arg(long, default_value_t = -5, allow_hyphen_values = true)]
    pub lo: i64,
    #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
    pub hi: i64,
    #[arg(long, default_value = "0.2")]
    pub density: String,
    /// Corrupt the value at this k in the last solver's result.
    #[arg(long, hide = true)]
    pub inject_fault: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [100usize, 200, 400])]
    pub sizes: Vec<usize>,
    /// Weight range of the generated instances.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, default_values_t = [-1000i64, 1000])]
    pub range: Vec<i64>,
    #[arg(long, default_value = "0")]
    pub density: String,
    /// Use all-zero matrices instead of random ones.
    #[arg(long)]
    pub zero: bool,
    /// Phases to time.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Phase::Ssp, Phase::Gk, Phase::Fill])]
    pub phases: Vec<Phase>,
    /// Repetitions per phase; the fastest is reported.
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Phase {
    Ssp,
    Gk,
    Fill,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(short = 'n', long)]
    pub size: usize,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub lo: i64,
    #[arg(long, default_value_t = 9, allow_hyphen_values = true)]
    pub hi: i64,
    /// Probability of an absent entry, decimal or `p/q`.
    #[arg(long, default_value = "0")]
    pub density: String,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Mismatch(msg)) => {
            let _ = writeln!(err, "{msg}");
            EXIT_MISMATCH
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Solve { file, no_matchings } => {
            let (w, transform) = load(file, cli.min)?;
            let report = solve(&w, transform, cli.algo, !no_matchings, cli.trace.as_deref())?;
            emit(out, cli.format, &report, render_report)
        }
        Command::Poly { file } => {
            let (w, transform) = load(file, cli.min)?;
            let report = solve(&w, transform, cli.algo, false, cli.trace.as_deref())?;
            let poly = PolyReport {
                schema: 1,
                algorithm: report.algorithm.clone(),
                polynomial: report.polynomial.clone(),
                singular_values: report.singular_values.clone(),
                term_classes: report.term_classes.clone(),
            };
            emit(out, cli.format, &poly, render_poly)
        }
        Command::Verify(args) => verify(cli, args, out),
        Command::Bench(args) => bench(cli, args, out),
        Command::Gen(args) => gen(cli, args, out),
    }
}

fn load(path: &Path, force_min: bool) -> CliResult<(WeightMatrix, Transform)> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut spec = instance::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if force_min {
        spec.objective = Objective::Min;
    }
    Ok(instance::normalize(&spec))
}

fn parse_density(s: &str) -> CliResult<Rational> {
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| Failure::Usage(format!("bad density {s}")))?;
            let q: i128 = q.trim().parse().map_err(|_| Failure::Usage(format!("bad density {s}")))?;
            if q == 0 {
                return Err(Failure::Usage(format!("bad density {s}")));
            }
            Rational::new(p, q)
        }
        None => instance::parse_decimal(s).ok_or_else(|| Failure::Usage(format!("bad density {s}")))?,
    };
    Ok(r)
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    value: &T,
    text: fn(&T) -> String,
) -> CliResult<()> {
    match format {
        Format::Json => {
            let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(out, "{s}")?;
        }
        Format::Text => out.write_all(text(value).as_bytes())?,
    }
    Ok(())
}

#[derive(Serialize, Clone, Debug)]
pub struct InstanceInfo {
    pub objective: String,
    pub rows: usize,
    pub cols: usize,
    pub n: usize,
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct SingularValueEntry {
    pub value: String,
    pub multiplicity: usize,
}

#[derive(Serialize, Clone, Debug)]
pub struct MatchingEntry {
    pub k: usize,
    /// 1-based `(row, col)` pairs.
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Serialize, Clone, Debug, Default)]
pub struct PhaseTimes {
    pub gk_seconds: Option<f64>,
    pub fill_seconds: Option<f64>,
    pub solve_seconds: Option<f64>,
    pub total_seconds: f64,
}

/// Everything `solve` prints. Values are strings (`p/q`, `-inf`, `inf`);
/// `null` marks a value the chosen algorithm does not determine.
#[derive(Serialize, Clone, Debug)]
pub struct RunReport {
    pub schema: u32,
    pub instance: InstanceInfo,
    pub algorithm: String,
    pub omegas: Vec<Option<String>>,
    pub matchings: Option<Vec<MatchingEntry>>,
    /// Full characteristic maxpolynomial of the normalised max instance.
    pub polynomial: String,
    pub singular_values: Vec<SingularValueEntry>,
    /// `E`, `S` or `I` for the term of each `k`.
    pub term_classes: Vec<String>,
    pub times: PhaseTimes,
}

#[derive(Serialize, Clone, Debug)]
struct PolyReport {
    schema: u32,
    algorithm: String,
    polynomial: String,
    singular_values: Vec<SingularValueEntry>,
    term_classes: Vec<String>,
}

fn sv_entries(svs: &[SingularValue]) -> Vec<SingularValueEntry> {
    svs.iter().map(|s| SingularValueEntry { value: s.value.to_string(), multiplicity: s.multiplicity }).collect()
}

/// Result of one solver pipeline on a normalised matrix.
pub struct Solved {
    pub algo: Algo,
    /// `None` where the pipeline leaves a value undetermined.
    pub omegas: Vec<Option<ExtReal>>,
    pub matchings: Vec<Option<Matching>>,
    pub polynomial: MaxPolynomial,
    pub singular_values: Vec<SingularValue>,
    pub term_classes: Vec<TermClass>,
    pub gk: Option<GkResult>,
    pub times: PhaseTimes,
}

fn from_sequence(algo: Algo, seq: AssignmentSequence, times: PhaseTimes) -> Solved {
    Solved {
        algo,
        omegas: seq.omegas.iter().map(|o| Some(*o)).collect(),
        matchings: seq.matchings.clone(),
        polynomial: seq.polynomial(),
        singular_values: seq.singular_values(),
        term_classes: seq.term_class.clone(),
        gk: None,
        times,
    }
}

/// Runs one pipeline. `gk` alone determines every `ω_k` through the singular
/// values but reports matchings only at the indices it visits.
pub fn run_pipeline(w: &WeightMatrix, algo: Algo, trace: bool) -> crate::Result<Solved> {
    let algo = algo.resolve(w.n());
    let start = Instant::now();
    let secs = |d: Duration| d.as_secs_f64();
    match algo {
        Algo::Brute | Algo::Ssp => {
            let seq = if algo == Algo::Brute { oracle::solve_sequence(w)? } else { ssp::solve_sequence(w, true)? };
            let t = secs(start.elapsed());
            Ok(from_sequence(algo, seq, PhaseTimes { solve_seconds: Some(t), total_seconds: t, ..Default::default() }))
        }
        Algo::Gk | Algo::GkFill => {
            let gk = parametric::run_with(w, &RunOptions { trace, audit: false })?;
            let t_gk = start.elapsed();
            if algo == Algo::GkFill {
                let t1 = Instant::now();
                let seq = completion::complete_sequence(w, &gk)?;
                let t_fill = t1.elapsed();
                let times = PhaseTimes {
                    gk_seconds: Some(secs(t_gk)),
                    fill_seconds: Some(secs(t_fill)),
                    solve_seconds: None,
                    total_seconds: secs(start.elapsed()),
                };
                let mut solved = from_sequence(algo, seq, times);
                solved.gk = Some(gk);
                return Ok(solved);
            }
            let n = w.n();
            let mut desc = vec![ExtReal::ZERO];
            let mut acc = ExtReal::ZERO;
            for sv in &gk.singular_values {
                for _ in 0..sv.multiplicity {
                    acc = acc + sv.value;
                    desc.push(acc);
                }
            }
            let polynomial = MaxPolynomial::from_descending(&desc);
            let mut term_classes = polynomial.classify_all();
            term_classes.reverse();
            let mut matchings = vec![None; n + 1];
            matchings[0] = Some(Matching::empty());
            for (&k, (_, m)) in &gk.essential {
                matchings[k] = Some(m.clone());
            }
            let t = secs(start.elapsed());
            Ok(Solved {
                algo,
                omegas: desc.into_iter().map(Some).collect(),
                matchings,
                polynomial,
                singular_values: gk.singular_values.clone(),
                term_classes,
                gk: Some(gk),
                times: PhaseTimes { gk_seconds: Some(t), total_seconds: t, ..Default::default() },
            })
        }
        Algo::Auto => unreachable!("resolved above"),
    }
}

fn solve(
    w: &WeightMatrix,
    transform: Transform,
    algo: Algo,
    with_matchings: bool,
    trace: Option<&Path>,
) -> CliResult<RunReport> {
    let resolved = algo.resolve(w.n());
    if trace.is_some() && !matches!(resolved, Algo::Gk | Algo::GkFill) {
        return Err(Failure::Usage(format!("--trace needs a parametric pipeline, not {}", resolved.name())));
    }
    let solved = run_pipeline(w, algo, trace.is_some())?;
    if let (Some(path), Some(gk)) = (trace, &solved.gk) {
        let mut text = String::new();
        for ev in &gk.trace {
            let _ = writeln!(text, "{ev}");
        }
        std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(build_report(&solved, transform, with_matchings))
}

pub fn build_report(solved: &Solved, transform: Transform, with_matchings: bool) -> RunReport {
    let omegas = solved.omegas.iter().map(|o| o.map(|v| transform.report(v).to_string())).collect();
    let matchings = with_matchings.then(|| {
        solved
            .matchings
            .iter()
            .enumerate()
            .filter_map(|(k, m)| m.as_ref().map(|m| (k, m)))
            .filter(|(k, _)| *k > 0)
            .map(|(k, m)| MatchingEntry { k, pairs: m.pairs().iter().map(|&(r, c)| (r + 1, c + 1)).collect() })
            .collect()
    });
    RunReport {
        schema: 1,
        instance: InstanceInfo {
            objective: transform.objective.to_string(),
            rows: transform.rows,
            cols: transform.cols,
            n: transform.n,
        },
        algorithm: solved.algo.name().to_string(),
        omegas,
        matchings,
        polynomial: solved.polynomial.to_string(),
        singular_values: sv_entries(&solved.singular_values),
        term_classes: solved.term_classes.iter().map(|c| c.short().to_string()).collect(),
        times: solved.times.clone(),
    }
}

fn render_report(r: &RunReport) -> String {
    let mut s = String::new();
    let i = &r.instance;
    let _ = writeln!(s, "instance: {} {}x{} (n={})", i.objective, i.rows, i.cols, i.n);
    let _ = writeln!(s, "algorithm: {}", r.algorithm);
    let omegas: Vec<&str> = r.omegas.iter().map(|o| o.as_deref().unwrap_or("?")).collect();
    let _ = writeln!(s, "omega: {}", omegas.join(" "));
    let _ = writeln!(s, "polynomial: {}", r.polynomial);
    let _ = writeln!(s, "singular values: {}", fmt_svs(&r.singular_values));
    let _ = writeln!(s, "terms: {}", r.term_classes.join(" "));
    if let Some(ms) = &r.matchings {
        let _ = writeln!(s, "matchings:");
        for m in ms {
            let pairs: Vec<String> = m.pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
            let _ = writeln!(s, "{}: {}", m.k, pairs.join(" "));
        }
    }
    let t = &r.times;
    let mut parts = Vec::new();
    if let Some(v) = t.solve_seconds {
        parts.push(format!("solve {v:.6}s"));
    }
    if let Some(v) = t.gk_seconds {
        parts.push(format!("gk {v:.6}s"));
    }
    if let Some(v) = t.fill_seconds {
        parts.push(format!("fill {v:.6}s"));
    }
    parts.push(format!("total {:.6}s", t.total_seconds));
    let _ = writeln!(s, "time: {}", parts.join(" "));
    s
}

fn fmt_svs(svs: &[SingularValueEntry]) -> String {
    svs.iter().map(|e| format!("({},{})", e.value, e.multiplicity)).collect::<Vec<_>>().join(" ")
}

fn render_poly(p: &PolyReport) -> String {
    format!(
        "polynomial: {}\nroots: {}\nterms: {}\n",
        p.polynomial,
        fmt_svs(&p.singular_values),
        p.term_classes.join(" ")
    )
}

#[derive(Serialize, Debug)]
struct VerifyReport {
    schema: u32,
    solvers: Vec<String>,
    instances: usize,
    agreed: bool,
    divergence: Option<Divergence>,
}

#[derive(Serialize, Debug, Clone)]
struct Divergence {
    instance: String,
    k: usize,
    values: Vec<(String, Option<String>)>,
    reason: String,
}

/// Compares the pipelines on one matrix; `None` when they all agree.
fn compare(w: &WeightMatrix, solvers: &[Algo], fault: Option<usize>, label: &str) -> CliResult<Option<Divergence>> {
    let mut results = Vec::with_capacity(solvers.len());
    for &a in solvers {
        results.push(run_pipeline(w, a, false)?);
    }
    if let (Some(k), Some(last)) = (fault, results.last_mut()) {
        if k >= last.omegas.len() {
            return Err(Failure::Usage(format!("fault index {k} out of range")));
        }
        last.omegas[k] = Some(match last.omegas[k] {
            Some(ExtReal::Fin(r)) => ExtReal::Fin(r + 1),
            _ => ExtReal::ZERO,
        });
    }
    let n = w.n();
    for k in 0..=n {
        let vals: Vec<Option<ExtReal>> = results.iter().map(|r| r.omegas[k]).collect();
        let reference = vals.iter().flatten().next().copied();
        let differs = vals.iter().any(|v| v.is_some_and(|v| Some(v) != reference));
        let bad_matching = results.iter().find_map(|r| {
            let m = r.matchings[k].as_ref()?;
            let omega = r.omegas[k]?;
            (m.len() != k || !m.fits(n) || m.weight(w) != omega).then(|| format!("{} matching invalid", r.algo.name()))
        });
        if differs || bad_matching.is_some() {
            return Ok(Some(Divergence {
                instance: label.to_string(),
                k,
                values: results
                    .iter()
                    .zip(&vals)
                    .map(|(r, v)| (r.algo.name().to_string(), v.map(|v| v.to_string())))
                    .collect(),
                reason: if differs { "values differ".into() } else { bad_matching.unwrap_or_default() },
            }));
        }
    }
    Ok(None)
}

fn verify(cli: &Cli, args: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut solvers: Vec<Algo> = Vec::new();
    for s in &args.solvers {
        if !solvers.contains(s) {
            solvers.push(*s);
        }
    }
    if solvers.len() < 2 {
        return Err(Failure::Usage("verify needs at least two distinct solvers".into()));
    }
    let mut divergence = None;
    let mut instances = 0;
    match &args.file {
        Some(path) => {
            let (w, _) = load(path, cli.min)?;
            instances = 1;
            divergence = compare(&w, &solvers, args.inject_fault, &path.display().to_string())?;
        }
        None => {
            let density = parse_density(&args.density)?;
            for i in 0..args.count {
                let seed = cli.seed.wrapping_add(i as u64);
                let w = instance::generate(args.size, args.lo, args.hi, density, seed)?;
                instances += 1;
                divergence = compare(&w, &solvers, args.inject_fault, &format!("seed {seed}"))?;
                if divergence.is_some() {
                    break;
                }
            }
        }
    }
    let report = VerifyReport {
        schema: 1,
        solvers: solvers.iter().map(|s| s.name().to_string()).collect(),
        instances,
        agreed: divergence.is_none(),
        divergence: divergence.clone(),
    };
    emit(out, cli.format, &report, |r| {
        if r.agreed {
            format!("agree: {} on {} instance(s)\n", r.solvers.join(", "), r.instances)
        } else {
            String::new()
        }
    })?;
    match divergence {
        None => Ok(()),
        Some(d) => {
            let vals: Vec<String> =
                d.values.iter().map(|(s, v)| format!("{s}={}", v.as_deref().unwrap_or("?"))).collect();
            Err(Failure::Mismatch(format!(
                "divergence on {} at k={}: {} ({})",
                d.instance,
                d.k,
                vals.join(" "),
                d.reason
            )))
        }
    }
}

#[derive(Serialize, Debug)]
struct BenchRow {
    n: usize,
    ssp_seconds: Option<f64>,
    gk_seconds: Option<f64>,
    fill_seconds: Option<f64>,
    /// Number of indices the parametric sweep reported.
    gk_reported: Option<usize>,
}

#[derive(Serialize, Debug)]
struct BenchReport {
    schema: u32,
    instance: String,
    rows: Vec<BenchRow>,
}

fn fastest<T>(repeat: usize, mut f: impl FnMut() -> crate::Result<T>) -> crate::Result<(f64, T)> {
    let mut best = f64::INFINITY;
    let mut last = None;
    for _ in 0..repeat.max(1) {
        let t = Instant::now();
        let v = f()?;
        best = best.min(t.elapsed().as_secs_f64());
        last = Some(v);
    }
    Ok((best, last.expect("at least one repetition")))
}

fn bench(cli: &Cli, args: &BenchArgs, out: &mut dyn Write) -> CliResult<()> {
    let (lo, hi) = (args.range[0], args.range[1]);
    let density = parse_density(&args.density)?;
    let mut rows = Vec::new();
    for &n in &args.sizes {
        let w = if args.zero { WeightMatrix::zeros(n) } else { instance::generate(n, lo, hi, density, cli.seed)? };
        let mut row = BenchRow { n, ssp_seconds: None, gk_seconds: None, fill_seconds: None, gk_reported: None };
        if args.phases.contains(&Phase::Ssp) {
            row.ssp_seconds = Some(fastest(args.repeat, || ssp::solve_sequence(&w, true))?.0);
        }
        if args.phases.contains(&Phase::Gk) || args.phases.contains(&Phase::Fill) {
            let (t, gk) = fastest(args.repeat, || parametric::run(&w))?;
            row.gk_reported = Some(gk.essential.len());
            if args.phases.contains(&Phase::Gk) {
                row.gk_seconds = Some(t);
            }
            if args.phases.contains(&Phase::Fill) {
                row.fill_seconds = Some(fastest(args.repeat, || completion::complete_sequence(&w, &gk))?.0);
            }
        }
        rows.push(row);
    }
    let instance = if args.zero { "zero".to_string() } else { format!("random [{lo},{hi}] density {}", fmt_rational(&density)) };
    let report = BenchReport { schema: 1, instance, rows };
    emit(out, cli.format, &report, |r| {
        let mut s = format!("instance: {}\n{:>8} {:>12} {:>12} {:>12} {:>10}\n", r.instance, "n", "ssp_s", "gk_s", "fill_s", "reported");
        let cell = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.6}"));
        for row in &r.rows {
            let _ = writeln!(
                s,
                "{:>8} {:>12} {:>12} {:>12} {:>10}",
                row.n,
                cell(row.ssp_seconds),
                cell(row.gk_seconds),
                cell(row.fill_seconds),
                row.gk_reported.map_or("-".to_string(), |v| v.to_string())
            );
        }
        s
    })
}

fn gen(cli: &Cli, args: &GenArgs, out: &mut dyn Write) -> CliResult<()> {
    let density = parse_density(&args.density)?;
    let w = instance::generate(args.size, args.lo, args.hi, density, cli.seed)?;
    let mut spec: InstanceSpec = instance::spec_from_matrix(&w);
    if cli.min {
        spec.objective = Objective::Min;
    }
    let mut text = format!(
        "# {GENERATOR_ID} seed={} n={} lo={} hi={} density={}\n",
        cli.seed,
        args.size,
        args.lo,
        args.hi,
        fmt_rational(&density)
    );
    text.push_str(&instance::serialize(&spec)?);
    match &args.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}
