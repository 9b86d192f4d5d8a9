//! Batch command-line front end for the wgcalc library.
//!
//! Every subcommand validates its flags, runs one exact computation, and
//! prints a single report to stdout as JSON (default) or CSV. Reports are
//! byte-identical across runs given identical flags and cache state: results
//! use canonical orders, rationals are printed as exact numerator/denominator
//! strings (never as decimals unless `--digits` asks for them), and anything
//! run-dependent — timing, log output — goes to stderr only.
//!
//! Exit codes: 0 success, 2 validation error, 3 singular Gram matrix; the
//! `verify` subcommand exits 1 when any check fails. Errors are emitted as a
//! one-line JSON object on stderr.
//!
//! The normative output schemas live in `docs/cli.md`.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use wgcalc::error::Error;
use wgcalc::monomial::{classify, parse_generators, saturate, GroupLabel, DEFAULT_K_MAX};
use wgcalc::moments::{asymptotic_reference, haar_integral, law_moments, sphere_moment};
use wgcalc::oracles;
use wgcalc::partitions::{enumerate_pairings, enumerate_pairings_shape, PairingFamily};
use wgcalc::ratmat::RationalMatrix;
use wgcalc::verify::{run_suite, Status};
use wgcalc::weingarten::{resolve_cache_dir, Cache};

const EXIT_FAILURE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_SINGULAR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "wgcalc",
    version,
    about = "Exact Weingarten calculus for orthogonal pairing families and their spheres"
)]
struct Cli {
    /// Output format for the report on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Cache directory (precedence: this flag, then $WG_CACHE_DIR, then the
    /// platform data directory).
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the pairings of a family, one-row or on a (k, l) shape.
    Pairings(PairingsArgs),
    /// Gram matrix N^|π∨σ| of a family at (k, N).
    Gram(GramArgs),
    /// Weingarten matrix (exact Gram inverse) of a family at (k, N).
    Weingarten(MatrixArgs),
    /// Exact Haar moment ∫ u_{i₁j₁} ⋯ u_{iₖjₖ}.
    Moment(MomentArgs),
    /// Exact sphere moment ∫ x_{i₁} ⋯ x_{iₖ}.
    SphereMoment(SphereMomentArgs),
    /// Scaled even moments N^l·m_{2l} with their asymptotic reference counts.
    Law(LawArgs),
    /// Closed-form oracles evaluated directly, bypassing the Weingarten route.
    Oracle(OracleArgs),
    /// Saturate permutation generators and classify the resulting truncation.
    Classify(ClassifyArgs),
    /// Run a verification suite; exits 1 when any check fails.
    Verify(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Pairings(_) => "pairings",
            Command::Gram(_) => "gram",
            Command::Weingarten(_) => "weingarten",
            Command::Moment(_) => "moment",
            Command::SphereMoment(_) => "sphere-moment",
            Command::Law(_) => "law",
            Command::Oracle(_) => "oracle",
            Command::Classify(_) => "classify",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Args)]
struct PairingsArgs {
    /// Pairing family.
    #[arg(long, default_value = "classical")]
    family: PairingFamily,
    /// Number of points (one-row), or of upper legs when --l is given.
    #[arg(long)]
    k: usize,
    /// Number of lower legs; selects the two-row shape (k, l).
    #[arg(long)]
    l: Option<usize>,
}

#[derive(Args)]
struct MatrixArgs {
    /// Pairing family.
    #[arg(long, default_value = "classical")]
    family: PairingFamily,
    /// Number of points (must be even).
    #[arg(long)]
    k: usize,
    /// Dimension.
    #[arg(long = "N", value_name = "N")]
    n: u32,
    /// Raise the bound on k (defaults to 10; larger inversions at your own risk).
    #[arg(long, value_name = "K")]
    k_bound: Option<usize>,
}

#[derive(Args)]
struct GramArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    /// Use the signed fixed vectors (the Gram entries are unchanged).
    #[arg(long)]
    twisted: bool,
}

#[derive(Args)]
struct MomentArgs {
    /// Pairing family.
    #[arg(long, default_value = "classical")]
    family: PairingFamily,
    /// Use the twisted (signed) integration formula.
    #[arg(long)]
    twisted: bool,
    /// Degree of the monomial; must match the index tuple lengths.
    #[arg(long)]
    k: usize,
    /// Dimension.
    #[arg(long = "N", value_name = "N")]
    n: u32,
    /// Row indices, comma-separated (1-based), e.g. `1,1`.
    #[arg(long, value_name = "LIST")]
    i: String,
    /// Column indices, comma-separated (1-based), e.g. `2,2`.
    #[arg(long, value_name = "LIST")]
    j: String,
    /// Raise the bound on k.
    #[arg(long, value_name = "K")]
    k_bound: Option<usize>,
}

#[derive(Args)]
struct SphereMomentArgs {
    /// Sphere family.
    #[arg(long, visible_alias = "family", default_value = "classical")]
    sphere: PairingFamily,
    /// Use the twisted sphere.
    #[arg(long)]
    twisted: bool,
    /// Coordinate indices, comma-separated (1-based), e.g. `1,1,2,2`.
    #[arg(long, value_name = "LIST")]
    indices: String,
    /// Dimension.
    #[arg(long = "N", value_name = "N")]
    n: u32,
    /// Raise the bound on k.
    #[arg(long, value_name = "K")]
    k_bound: Option<usize>,
}

#[derive(Args)]
struct LawArgs {
    /// Pairing family.
    #[arg(long, default_value = "classical")]
    family: PairingFamily,
    /// Use the twisted sphere (single-coordinate moments are unchanged).
    #[arg(long)]
    twisted: bool,
    /// Largest l; moments are reported for l = 1..=lmax.
    #[arg(long)]
    lmax: usize,
    /// Dimension.
    #[arg(long = "N", value_name = "N")]
    n: u32,
    /// Raise the bound on k (the largest Gram computation uses k = 2·lmax).
    #[arg(long, value_name = "K")]
    k_bound: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    Classical,
    Half,
    Free,
}

#[derive(Args)]
struct OracleArgs {
    /// Which closed form to evaluate.
    #[arg(value_enum)]
    which: OracleKind,
    /// Occurrence counts per coordinate, comma-separated. For `classical`
    /// these are the exponents; for `half` the half-degrees (coordinate a
    /// appears 2·profile[a] times).
    #[arg(long, value_name = "LIST")]
    profile: Option<String>,
    /// Moment order for `free` (the moment is ∫ x₁^{2l}).
    #[arg(long)]
    l: Option<u64>,
    /// Dimension.
    #[arg(long = "N", value_name = "N")]
    n: u32,
    /// Decimal digits for the `free` value (which is irrational); also the
    /// precision of the internal q approximation. Minimum 40.
    #[arg(long, default_value_t = 40)]
    digits: usize,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Generators, e.g. `"3:(3,2,1);5:(2,1,3,4,5)"`; empty for none.
    #[arg(long, default_value = "")]
    generators: String,
    /// Truncation horizon (levels 1..=kmax are saturated).
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    kmax: usize,
    /// Name the sphere cut out by the twisted relations instead.
    #[arg(long)]
    twisted: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run.
    #[arg(long, default_value = "all")]
    suite: String,
}

/// One finished report: the JSON tree, the CSV rendering of the same values,
/// and the exit code.
struct Report {
    json: Value,
    csv: String,
    exit: u8,
}

impl Report {
    fn ok(json: Value, csv: String) -> Report {
        Report {
            json,
            csv,
            exit: 0,
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = err.print();
                return ExitCode::SUCCESS;
            }
            return emit_error(EXIT_VALIDATION, "usage", &err.to_string());
        }
    };
    let name = cli.command.name();
    let started = Instant::now();
    let outcome = run(&cli);
    let elapsed = started.elapsed();
    match outcome {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{:#}", report.json),
                Format::Csv => print!("{}", report.csv),
            }
            eprintln!("wgcalc: {name} finished in {:.1} ms", elapsed.as_secs_f64() * 1e3);
            ExitCode::from(report.exit)
        }
        Err(err) => {
            let (code, kind) = match err {
                Error::GramSingular { .. } => (EXIT_SINGULAR, "gram-singular"),
                _ => (EXIT_VALIDATION, "validation"),
            };
            emit_error(code, kind, &err.to_string())
        }
    }
}

/// One-line machine-parsable error JSON on stderr.
fn emit_error(code: u8, kind: &str, message: &str) -> ExitCode {
    let line = json!({
        "error": {
            "code": code,
            "kind": kind,
            "message": message.replace('\n', "; "),
        }
    });
    eprintln!("{line}");
    ExitCode::from(code)
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Pairings(args) => pairings_report(args),
        Command::Gram(args) => gram_report(cli, args),
        Command::Weingarten(args) => weingarten_report(cli, args),
        Command::Moment(args) => moment_report(cli, args),
        Command::SphereMoment(args) => sphere_moment_report(cli, args),
        Command::Law(args) => law_report(cli, args),
        Command::Oracle(args) => oracle_report(args),
        Command::Classify(args) => classify_report(args),
        Command::Verify(args) => verify_report(cli, args),
    }
}

fn make_cache(cli: &Cli, k_bound: Option<usize>) -> Cache {
    let dir = resolve_cache_dir(cli.cache_dir.clone());
    let cache = Cache::new(Some(dir));
    match k_bound {
        Some(bound) => cache.with_k_bound(bound),
        None => cache,
    }
}

// ----- shared rendering -------------------------------------------------------

fn rational_json(x: &BigRational) -> Value {
    json!({ "num": x.numer().to_string(), "den": x.denom().to_string() })
}

fn cache_json(cache: &Cache) -> Value {
    let c = cache.counters();
    json!({
        "memory_hits": c.memory_hits,
        "disk_hits": c.disk_hits,
        "computed": c.computed,
    })
}

/// Quotes a CSV field when it contains a delimiter, quote, or newline.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn matrix_csv(m: &RationalMatrix) -> String {
    let mut out = String::from("row,col,num,den\n");
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let x = m.get(r, c);
            let _ = writeln!(out, "{r},{c},{},{}", x.numer(), x.denom());
        }
    }
    out
}

fn parse_u32_list(text: &str, what: &str) -> Result<Vec<u32>, Error> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|_| Error::Invalid(format!("bad {what} entry `{tok}` in `{text}`")))
        })
        .collect()
}

fn parse_u64_list(text: &str, what: &str) -> Result<Vec<u64>, Error> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .map_err(|_| Error::Invalid(format!("bad {what} entry `{tok}` in `{text}`")))
        })
        .collect()
}

// ----- subcommands -----------------------------------------------------------

fn pairings_report(args: &PairingsArgs) -> Result<Report, Error> {
    let list = match args.l {
        Some(l) => enumerate_pairings_shape(args.k, l, args.family),
        None => enumerate_pairings(args.k, args.family),
    };
    let rows: Vec<Value> = list
        .iter()
        .enumerate()
        .map(|(index, p)| {
            json!({
                "index": index,
                "partition": p.to_string(),
                "balanced": p.is_balanced(),
                "noncrossing": p.is_noncrossing(),
            })
        })
        .collect();
    let mut csv = String::from("index,partition,balanced,noncrossing\n");
    for (index, p) in list.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{index},{},{},{}",
            csv_field(&p.to_string()),
            p.is_balanced(),
            p.is_noncrossing()
        );
    }
    let json = json!({
        "command": "pairings",
        "query": { "family": args.family.name(), "k": args.k, "l": args.l },
        "count": list.len(),
        "pairings": rows,
        "notes": ["canonical order: lexicographic on the canonical block labels"],
    });
    Ok(Report::ok(json, csv))
}

fn matrix_json(
    command: &str,
    query: Value,
    basis: &[wgcalc::partitions::Partition],
    rank: usize,
    matrix: &RationalMatrix,
    notes: Vec<&str>,
    cache: &Cache,
) -> Value {
    let rows: Vec<Vec<Value>> = (0..matrix.rows())
        .map(|r| (0..matrix.cols()).map(|c| rational_json(matrix.get(r, c))).collect())
        .collect();
    json!({
        "command": command,
        "query": query,
        "order": basis.len(),
        "rank": rank,
        "basis": basis.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "matrix": rows,
        "notes": notes,
        "cache": cache_json(cache),
    })
}

fn gram_report(cli: &Cli, args: &GramArgs) -> Result<Report, Error> {
    let cache = make_cache(cli, args.matrix.k_bound);
    let entry = cache.entry(args.matrix.family, args.matrix.k, args.matrix.n)?;
    let mut notes = vec!["Gram entries are N^(blocks of the join)"];
    if args.twisted {
        notes.push("signed and unsigned fixed vectors have the same Gram matrix");
    }
    let query = json!({
        "family": args.matrix.family.name(),
        "k": args.matrix.k,
        "N": args.matrix.n,
        "twisted": args.twisted,
    });
    let json = matrix_json("gram", query, &entry.basis, entry.rank, &entry.gram, notes, &cache);
    Ok(Report::ok(json, matrix_csv(&entry.gram)))
}

fn weingarten_report(cli: &Cli, args: &MatrixArgs) -> Result<Report, Error> {
    let cache = make_cache(cli, args.k_bound);
    let entry = cache.entry(args.family, args.k, args.n)?;
    let w = entry.weingarten()?;
    let query = json!({ "family": args.family.name(), "k": args.k, "N": args.n });
    let notes = vec!["exact Gram inverse by fraction-free elimination, max-magnitude pivoting"];
    let json = matrix_json("weingarten", query, &entry.basis, entry.rank, w, notes, &cache);
    Ok(Report::ok(json, matrix_csv(w)))
}

fn value_csv(value: &BigRational) -> String {
    format!("num,den\n{},{}\n", value.numer(), value.denom())
}

fn moment_report(cli: &Cli, args: &MomentArgs) -> Result<Report, Error> {
    let i = parse_u32_list(&args.i, "row index")?;
    let j = parse_u32_list(&args.j, "column index")?;
    if i.len() != args.k || j.len() != args.k {
        return Err(Error::Invalid(format!(
            "--k {} does not match index tuples of lengths {} and {}",
            args.k,
            i.len(),
            j.len()
        )));
    }
    let cache = make_cache(cli, args.k_bound);
    let value = haar_integral(&cache, args.family, args.twisted, args.n, &i, &j)?;
    let json = json!({
        "command": "moment",
        "query": { "k": args.k, "i": i, "j": j },
        "family": args.family.name(),
        "twisted": args.twisted,
        "N": args.n,
        "value": rational_json(&value),
        "notes": ["pairing sum Σ δ_π(i) δ_σ(j) W(π,σ); falls back to an exact consistent solve when the Gram matrix is singular"],
        "cache": cache_json(&cache),
    });
    Ok(Report::ok(json, value_csv(&value)))
}

fn sphere_moment_report(cli: &Cli, args: &SphereMomentArgs) -> Result<Report, Error> {
    let indices = parse_u32_list(&args.indices, "index")?;
    let cache = make_cache(cli, args.k_bound);
    let value = sphere_moment(&cache, args.sphere, args.twisted, args.n, &indices)?;
    let json = json!({
        "command": "sphere-moment",
        "query": { "indices": indices },
        "family": args.sphere.name(),
        "twisted": args.twisted,
        "N": args.n,
        "value": rational_json(&value),
        "notes": ["weight-vector sum Σ δ_σ(i) w_σ with w the Weingarten row sums"],
        "cache": cache_json(&cache),
    });
    Ok(Report::ok(json, value_csv(&value)))
}

fn law_report(cli: &Cli, args: &LawArgs) -> Result<Report, Error> {
    if args.lmax == 0 {
        return Err(Error::Invalid("--lmax must be at least 1".into()));
    }
    let cache = make_cache(cli, args.k_bound);
    let scaled = law_moments(&cache, args.family, args.twisted, args.n, args.lmax)?;
    let mut rows = Vec::new();
    let mut csv = String::from("l,num,den,scaled_num,scaled_den,reference\n");
    for (idx, s) in scaled.iter().enumerate() {
        let l = idx + 1;
        let raw = s / BigRational::from_integer(num_bigint::BigInt::from(args.n).pow(l as u32));
        let reference = asymptotic_reference(args.family, l as u64);
        rows.push(json!({
            "l": l,
            "raw": rational_json(&raw),
            "scaled": rational_json(s),
            "reference": reference.to_string(),
        }));
        let _ = writeln!(
            csv,
            "{l},{},{},{},{},{reference}",
            raw.numer(),
            raw.denom(),
            s.numer(),
            s.denom()
        );
    }
    let json = json!({
        "command": "law",
        "query": { "lmax": args.lmax },
        "family": args.family.name(),
        "twisted": args.twisted,
        "N": args.n,
        "moments": rows,
        "notes": ["raw = ∫x₁^(2l); scaled = N^l·raw, converging to the reference pairing count as N grows"],
        "cache": cache_json(&cache),
    });
    Ok(Report::ok(json, csv))
}

fn oracle_report(args: &OracleArgs) -> Result<Report, Error> {
    let profile = |args: &OracleArgs| -> Result<Vec<u64>, Error> {
        let text = args
            .profile
            .as_ref()
            .ok_or_else(|| Error::Invalid("this oracle needs --profile".into()))?;
        parse_u64_list(text, "profile")
    };
    match args.which {
        OracleKind::Classical => {
            let profile = profile(args)?;
            let value = oracles::classical_sphere_integral(&profile, args.n)?;
            let json = json!({
                "command": "oracle",
                "oracle": "classical",
                "query": { "profile": profile, "N": args.n },
                "value": rational_json(&value),
                "provenance": "double-factorial ratio (N−1)!!·Πlₐ!!/(N+Σl−1)!!; zero unless all exponents are even",
            });
            Ok(Report::ok(json, value_csv(&value)))
        }
        OracleKind::Half => {
            let profile = profile(args)?;
            let value = oracles::half_liberated_integral_sum(&profile, args.n)?;
            let stated = oracles::half_liberated_integral_stated(&profile, args.n)?;
            let json = json!({
                "command": "oracle",
                "oracle": "half",
                "query": { "profile": profile, "N": args.n },
                "value": rational_json(&value),
                "stated_form": rational_json(&stated),
                "provenance": "binomial sum over coordinate splittings on the (2N−1)-sphere; the stated closed form is reported alongside but disagrees with it and is not used as ground truth",
            });
            let mut csv = String::from("num,den,stated_num,stated_den\n");
            let _ = writeln!(
                csv,
                "{},{},{},{}",
                value.numer(),
                value.denom(),
                stated.numer(),
                stated.denom()
            );
            Ok(Report::ok(json, csv))
        }
        OracleKind::Free => {
            let l = args
                .l
                .ok_or_else(|| Error::Invalid("the free oracle needs --l".into()))?;
            let digits = args.digits.max(40);
            let value = oracles::free_moment(l, args.n, digits)?;
            let decimal = oracles::decimal_string(&value, digits);
            let json = json!({
                "command": "oracle",
                "oracle": "free",
                "query": { "l": l, "N": args.n, "digits": digits },
                "value": { "decimal": decimal, "digits": digits },
                "provenance": "q-series with prefactor 1/(N+2)^l at the exact rational approximation of q",
            });
            let csv = format!("decimal,digits\n{decimal},{digits}\n");
            Ok(Report::ok(json, csv))
        }
    }
}

/// The sphere cut out by imposing the relations of the labelled group, plain
/// or twisted, following the 3×3 sphere table.
fn sphere_name(label: GroupLabel, twisted: bool) -> &'static str {
    match (label, twisted) {
        (GroupLabel::Trivial, _) => "free",
        (GroupLabel::Star, false) => "half-liberated",
        (GroupLabel::Star, true) => "twisted half-liberated",
        (GroupLabel::Full, false) => "classical",
        (GroupLabel::Full, true) => "twisted classical",
        (GroupLabel::Unknown, _) => "unknown",
    }
}

fn classify_report(args: &ClassifyArgs) -> Result<Report, Error> {
    let generators = parse_generators(&args.generators)?;
    let saturation = saturate(&generators, args.kmax)?;
    let label = classify(&saturation.truncation);
    let stats = saturation.stats;
    let levels: Vec<Value> = (1..=args.kmax)
        .map(|k| json!({ "k": k, "order": saturation.truncation.order(k) }))
        .collect();
    let mut csv = String::from("k,order,label\n");
    for k in 1..=args.kmax {
        let _ = writeln!(csv, "{k},{},{}", saturation.truncation.order(k), label.name());
    }
    let json = json!({
        "command": "classify",
        "query": { "generators": args.generators, "kmax": args.kmax, "twisted": args.twisted },
        "levels": levels,
        "label": label.name(),
        "sphere": sphere_name(label, args.twisted),
        "rules": {
            "inverses": stats.inverses,
            "products": stats.products,
            "concatenations": stats.concatenations,
            "outer_removals": stats.outer_removals,
            "neighbor_removals": stats.neighbor_removals,
        },
        "notes": ["labels compare every level 2..=kmax against the trivial, balanced, and full groups; truncations matching none are reported unknown"],
    });
    Ok(Report::ok(json, csv))
}

fn status_str(status: Status) -> &'static str {
    match status {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Info => "info",
    }
}

fn verify_report(cli: &Cli, args: &VerifyArgs) -> Result<Report, Error> {
    let cache = make_cache(cli, None);
    let report = run_suite(&cache, &args.suite)?;
    let failures = report.failures();
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "status": status_str(c.status),
                "detail": c.detail,
            })
        })
        .collect();
    let mut csv = String::from("suite,check,status,detail\n");
    for c in &report.checks {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            csv_field(&report.suite),
            csv_field(c.name),
            status_str(c.status),
            csv_field(&c.detail)
        );
    }
    let json = json!({
        "command": "verify",
        "suite": report.suite,
        "checks": checks,
        "failures": failures,
    });
    Ok(Report {
        json,
        csv,
        exit: if failures > 0 { EXIT_FAILURE } else { 0 },
    })
}
