//! `lrc`: construct locally recoverable codes, encode, erase and repair
//! codewords, check parameters against distance bounds, and simulate node
//! failures. Reports are JSON on stdout; codewords are plain text.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use lrc_core::bounds::parse_params_csv;
use lrc_core::construct::point_label;
use lrc_core::evalcode::{DesignDistance, Provenance};
use lrc_core::lifted::{good_monomials, hermitian_curve, norm_trace_curve, DeltaConvention, Reduction};
use lrc_core::storesim::degraded_read;
use lrc_core::{
    build, classify, recover, simulate, BuiltCode, ClusterModel, CodeSpecFile, MinDistance, ParamTuple, ReceivedWord,
    Verify,
};

#[derive(Parser)]
#[command(name = "lrc", version, about = "Locally recoverable codes over finite fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a code and report its parameters.
    Construct {
        #[command(flatten)]
        spec: SpecArgs,
        /// Include the evaluation point labels.
        #[arg(long)]
        points: bool,
        /// Also write the canonical spec JSON here.
        #[arg(long)]
        emit_spec: Option<PathBuf>,
    },
    /// Encode a message (or a random one) into a codeword file.
    Encode {
        #[command(flatten)]
        spec: SpecArgs,
        /// File of k whitespace-separated field integers.
        #[arg(long, conflicts_with = "seed")]
        message: Option<PathBuf>,
        /// Seed for a random message.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Replace symbols of a codeword file by `?`.
    Erase {
        /// Codeword file, `-` for stdin.
        #[arg(long)]
        word: PathBuf,
        /// Comma-separated coordinate indices.
        #[arg(long, value_delimiter = ',', required_unless_present = "random")]
        indices: Vec<usize>,
        /// Erase this many coordinates chosen at random.
        #[arg(long, conflicts_with = "indices")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Fill erasures by local repair.
    Recover {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        word: PathBuf,
        /// Write the repaired word here.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Classify (n, k, d, r, t) against the distance bounds.
    Bounds {
        #[arg(long, required_unless_present = "csv")]
        n: Option<u64>,
        #[arg(long, required_unless_present = "csv")]
        k: Option<u64>,
        #[arg(long, required_unless_present = "csv")]
        d: Option<u64>,
        #[arg(long, required_unless_present = "csv")]
        r: Option<u64>,
        #[arg(long, default_value_t = 1)]
        t: u64,
        /// Count the all-symbol availability bound toward the verdict.
        #[arg(long)]
        all_symbol: bool,
        /// Batch mode: CSV with columns n, k, d, r and optionally t, q.
        #[arg(long, conflicts_with_all = ["n", "k", "d", "r"])]
        csv: Option<PathBuf>,
    },
    /// Enumerate good monomials of a lifted code.
    Monomials {
        #[arg(value_enum)]
        family: Family,
        /// q for the Hermitian curve, r for the norm-trace curve.
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long, value_enum, default_value = "interpolation")]
        delta_convention: ConventionArg,
        #[arg(long, value_enum, default_value = "curve-equation")]
        reduction: ReductionArg,
        /// Write (a, b, class) rows as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact minimum distance by exhaustive scan.
    Mindist {
        #[command(flatten)]
        spec: SpecArgs,
        /// Largest number of messages to scan.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u128,
    },
    /// Random node failures with local repair.
    Simulate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, required_unless_present = "fail")]
        p: Option<f64>,
        /// Fixed failed nodes instead of random ones.
        #[arg(long, value_delimiter = ',', conflicts_with = "p")]
        fail: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also report degraded reads of this coordinate.
        #[arg(long)]
        hot: Option<usize>,
        #[arg(long, default_value_t = 64)]
        readers: usize,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// Code spec JSON file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Construction tag and key=value parameters, e.g. `tamo-barg q=13 r=2 k=6`.
    #[arg(value_name = "TAG [KEY=VALUE]...", conflicts_with = "spec")]
    inline: Vec<String>,
    #[arg(long, value_enum, default_value = "full")]
    verify: VerifyArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    Full,
    Fast,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    HermitianLifted,
    NtLifted,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Literal,
    Interpolation,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionArg {
    CurveEquation,
    Intersection,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<lrc_core::Error> for Failure {
    fn from(e: lrc_core::Error) -> Failure {
        Failure::Domain(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_text(path: &Path) -> CliResult<String> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Domain(format!("stdin: {e}")));
    }
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON value"));
}

impl SpecArgs {
    fn spec(&self) -> CliResult<CodeSpecFile> {
        match (&self.spec, self.inline.split_first()) {
            (Some(path), _) => Ok(CodeSpecFile::from_json(&read_text(path)?)?),
            (None, Some((tag, pairs))) => Ok(CodeSpecFile::from_pairs(tag, pairs)?),
            (None, None) => Err(Failure::Usage("give --spec FILE or a construction tag with parameters".into())),
        }
    }

    fn build(&self) -> CliResult<BuiltCode> {
        let verify = match self.verify {
            VerifyArg::Full => Verify::Full,
            VerifyArg::Fast => Verify::Fast,
        };
        Ok(build(&self.spec()?, verify)?)
    }
}

fn parse_word(built: &BuiltCode, text: &str) -> CliResult<ReceivedWord> {
    let w = ReceivedWord::parse(built.code.field(), text)?;
    if w.len() != built.code.len() {
        return Err(lrc_core::Error::WordLength { got: w.len(), expected: built.code.len() }.into());
    }
    Ok(w)
}

fn construct(spec: &SpecArgs, points: bool, emit_spec: Option<&Path>) -> CliResult<Value> {
    let built = spec.build()?;
    if let Some(path) = emit_spec {
        write_text(path, &built.spec.to_json())?;
    }
    let mut v = json!({ "spec": built.spec, "summary": built.summary() });
    if points {
        v["points"] = json!(built.labels());
    }
    Ok(v)
}

fn encode(spec: &SpecArgs, message: Option<&Path>, seed: Option<u64>, out: Option<&Path>) -> CliResult<()> {
    let built = spec.build()?;
    let f = built.code.field();
    let msg = match message {
        Some(path) => {
            let w = ReceivedWord::parse(f, &read_text(path)?)?;
            w.complete().ok_or_else(|| Failure::Domain("message contains erasures".into()))?
        }
        None => built.code.random_message(&mut ChaCha8Rng::seed_from_u64(seed.unwrap_or(0))),
    };
    let text = ReceivedWord::from_codeword(&built.code.encode(&msg)?).to_text();
    match out {
        Some(path) => write_text(path, &format!("{text}\n")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn erase(word: &Path, indices: &[usize], random: Option<usize>, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let text = read_text(word)?;
    let mut tokens: Vec<&str> = text.split_whitespace().collect();
    let n = tokens.len();
    let chosen = match random {
        Some(count) if count > n => return Err(Failure::Domain(format!("cannot erase {count} of {n} symbols"))),
        Some(count) => sample(&mut ChaCha8Rng::seed_from_u64(seed), n, count).into_vec(),
        None => indices.to_vec(),
    };
    for i in chosen {
        *tokens.get_mut(i).ok_or_else(|| Failure::from(lrc_core::Error::IndexOutOfRange { index: i, n }))? = "?";
    }
    let text = tokens.join(" ");
    match out {
        Some(path) => write_text(path, &format!("{text}\n")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn recover_cmd(spec: &SpecArgs, word: &Path, out: Option<&Path>) -> CliResult<Value> {
    let built = spec.build()?;
    let received = parse_word(&built, &read_text(word)?)?;
    let labels = built.labels();
    let (filled, report) = recover(built.code.field(), &received, &built.recovery)?;
    if let Some(path) = out {
        write_text(path, &format!("{}\n", filled.to_text()))?;
    }
    let repaired: Vec<Value> = report
        .repairs
        .iter()
        .map(|r| {
            json!({
                "index": r.coordinate,
                "point": labels[r.coordinate],
                "value": r.value,
                "group": r.group,
                "support": r.support,
                "support_points": r.support.iter().map(|&j| &labels[j]).collect::<Vec<_>>(),
            })
        })
        .collect();
    let residual: Vec<Value> = report.residual.iter().map(|&i| json!({ "index": i, "point": labels[i] })).collect();
    Ok(json!({
        "repaired": repaired,
        "bandwidth": report.bandwidth,
        "residual": residual,
        "word": filled.to_text(),
    }))
}

fn bounds_cmd(single: Option<ParamTuple>, all_symbol: bool, csv: Option<&Path>) -> CliResult<Value> {
    match (single, csv) {
        (_, Some(path)) => {
            let rows = parse_params_csv(&read_text(path)?)?;
            let reports = rows.iter().map(|p| classify(p, all_symbol)).collect::<Result<Vec<_>, _>>()?;
            Ok(json!(reports))
        }
        (Some(p), None) => {
            p.validate()?;
            Ok(json!(classify(&p, all_symbol)?))
        }
        (None, None) => Err(Failure::Usage("give --n --k --d --r or --csv".into())),
    }
}

fn monomials_cmd(
    family: Family,
    q: Option<u32>,
    r: Option<u32>,
    convention: ConventionArg,
    reduction: ReductionArg,
    csv: Option<&Path>,
) -> CliResult<Value> {
    let reduction = match reduction {
        ReductionArg::CurveEquation => Reduction::CurveEquation,
        ReductionArg::Intersection => Reduction::Intersection,
    };
    let (curve, delta) = match (family, q, r) {
        (Family::HermitianLifted, Some(q), None) => {
            if q < 2 {
                return Err(Failure::Domain("q must be at least 2".into()));
            }
            (hermitian_curve(q)?, q as usize - 1)
        }
        (Family::NtLifted, None, Some(r)) => {
            if !(3..=8).contains(&r) {
                return Err(Failure::Domain(format!("r = {r} is outside the supported range 3..=8")));
            }
            let c = match convention {
                ConventionArg::Literal => DeltaConvention::Literal,
                ConventionArg::Interpolation => DeltaConvention::Interpolation,
            };
            (norm_trace_curve(r)?, c.delta(r))
        }
        (Family::HermitianLifted, _, _) => return Err(Failure::Usage("hermitian-lifted takes --q only".into())),
        (Family::NtLifted, _, _) => return Err(Failure::Usage("nt-lifted takes --r only".into())),
    };
    let set = good_monomials(&curve, delta, reduction)?;
    if let Some(path) = csv {
        write_text(path, &set.to_csv())?;
    }
    Ok(json!({
        "q": set.q,
        "r": set.r,
        "n": curve.points().len(),
        "delta": set.delta,
        "reduction": set.reduction,
        "good": set.count(),
        "baseline": set.baseline_count(),
        "rank": set.rank,
        "monomials": set.monomials,
    }))
}

fn mindist_cmd(spec: &SpecArgs, budget: u128) -> CliResult<Value> {
    let built = spec.build()?;
    let result = built.code.min_distance_bruteforce(budget)?;
    let mut v = json!({
        "n": built.code.len(),
        "k": built.code.dimension(),
        "design_distance": built.code.design_distance(),
        "result": result,
    });
    if let MinDistance::Exact(d) = result {
        let dd = DesignDistance { value: d, provenance: Provenance::BruteForce };
        v["distance"] = json!(dd);
        v["bounds"] = json!(built.bound_report(d)?);
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn simulate_cmd(
    spec: &SpecArgs,
    p: Option<f64>,
    fail: &[usize],
    trials: u64,
    seed: u64,
    hot: Option<usize>,
    readers: usize,
) -> CliResult<Value> {
    let built = spec.build()?;
    let certified = built.certified()?;
    let n = built.code.len();
    let model = match p {
        Some(p) => ClusterModel::iid(n, p, seed)?,
        None => ClusterModel::explicit(n, fail.to_vec())?,
    };
    let report = simulate(&built.code, &certified, &model, trials)?;
    let mut v = json!({ "model": model, "report": report });
    if let Some(h) = hot {
        let failed = model.sample(0);
        v["degraded_read"] = json!({
            "index": h,
            "point": built.code.points().get(h).map(|pt| point_label(pt)),
            "readers": readers,
            "served_no_failures": degraded_read(&certified, h, readers, &[])?,
            "served_first_trial": degraded_read(&certified, h, readers, &failed)?,
        });
    }
    Ok(v)
}

fn run(cli: Cli) -> CliResult<Option<Value>> {
    Ok(match cli.cmd {
        Cmd::Construct { spec, points, emit_spec } => Some(construct(&spec, points, emit_spec.as_deref())?),
        Cmd::Encode { spec, message, seed, out } => {
            encode(&spec, message.as_deref(), seed, out.as_deref())?;
            None
        }
        Cmd::Erase { word, indices, random, seed, out } => {
            erase(&word, &indices, random, seed, out.as_deref())?;
            None
        }
        Cmd::Recover { spec, word, out } => Some(recover_cmd(&spec, &word, out.as_deref())?),
        Cmd::Bounds { n, k, d, r, t, all_symbol, csv } => {
            let single = match (n, k, d, r) {
                (Some(n), Some(k), Some(d), Some(r)) => Some(ParamTuple { n, k, d, r, t, q: None }),
                _ => None,
            };
            Some(bounds_cmd(single, all_symbol, csv.as_deref())?)
        }
        Cmd::Monomials { family, q, r, delta_convention, reduction, csv } => {
            Some(monomials_cmd(family, q, r, delta_convention, reduction, csv.as_deref())?)
        }
        Cmd::Mindist { spec, budget } => Some(mindist_cmd(&spec, budget)?),
        Cmd::Simulate { spec, p, fail, trials, seed, hot, readers } => {
            Some(simulate_cmd(&spec, p, &fail, trials, seed, hot, readers)?)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not errors
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Some(v)) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("{}", json!({ "error": msg, "kind": "usage" }));
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("{}", json!({ "error": msg, "kind": "domain" }));
            ExitCode::from(1)
        }
    }
}
