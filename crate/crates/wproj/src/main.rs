//! Command-line surface over the library: every subcommand parses its
//! arguments, calls the corresponding library function, and prints the
//! result either human-readable or as one deterministic JSON object.

use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use wproj::db::{Collection, IngestReport};
use wproj::{
    abs_height, abs_wgcd, canonical, enumerate_bounded, height, moduli, normalize, normalize_abs,
    twists_up_to, wgcd, Error, FactoredRadical, HeightBound, HeightValue, Mode, NormalizedPoint,
    Removed, WeightedTuple, Weights,
};

#[derive(Parser)]
#[command(
    name = "wproj",
    version,
    about = "Weighted projective points over Q: weighted GCDs, normalization, twists, heights"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Emit one structured JSON object instead of human-readable text
    #[arg(long, global = true)]
    json: bool,
    /// Worker-thread hint for enumeration and batch ingestion
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct WeightSpec {
    /// Comma-separated positive integer weights, e.g. 2,4,6,10
    #[arg(long, value_name = "Q0,Q1,...")]
    weights: Option<String>,
    /// Named weight system (genus2-igusa, genus2-half, genus3-octavic,
    /// genus3-octavic-extended)
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
}

#[derive(Args)]
struct PointSpec {
    #[command(flatten)]
    weights: WeightSpec,
    /// Comma-separated signed decimal coordinates
    #[arg(long, value_name = "X0,X1,...")]
    point: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rational,
    Absolute,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Rational => Mode::Rational,
            ModeArg::Absolute => Mode::Absolute,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Weighted greatest common divisor of a tuple
    Wgcd(PointSpec),
    /// Absolute weighted greatest common divisor (a radical)
    AbsWgcd(PointSpec),
    /// Divide out the weighted gcd
    Normalize(PointSpec),
    /// Divide out the absolute weighted gcd
    AbsNormalize(PointSpec),
    /// Canonical representative under the chosen equivalence
    Canonical {
        #[command(flatten)]
        point: PointSpec,
        #[arg(long, value_enum, default_value = "rational")]
        mode: ModeArg,
    },
    /// Exact weighted height of the point
    Height(PointSpec),
    /// Exact absolute weighted height (minimal among twists)
    AbsHeight(PointSpec),
    /// Rational twists of the point up to a height bound
    Twists {
        #[command(flatten)]
        point: PointSpec,
        /// Height bound as an integer or fraction a/b; defaults to the
        /// height of the point itself
        #[arg(long, value_name = "A[/B]")]
        bound: Option<String>,
    },
    /// All points of height at most the bound, in lexicographic order
    Enumerate {
        #[command(flatten)]
        weights: WeightSpec,
        /// Height bound as an integer or fraction a/b
        #[arg(long, value_name = "A[/B]")]
        bound: String,
    },
    /// Line-delimited record collections
    #[command(subcommand)]
    Db(DbCmd),
}

#[derive(Subcommand)]
enum DbCmd {
    /// Validate records and compute derived fields; reads stdin when no
    /// file is given
    Ingest {
        file: Option<PathBuf>,
        /// Save the ingested collection (with derived fields) here
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Keep one record per equivalence class
    Dedupe {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "rational")]
        mode: ModeArg,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Sort ascending by exact height
    Sort {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "rational")]
        mode: ModeArg,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Group records that are equivalent over the algebraic closure
    TwistGroups { file: Option<PathBuf> },
}

struct CliError {
    reason: String,
    message: String,
}

impl CliError {
    fn new(reason: &str, message: String) -> Self {
        CliError {
            reason: reason.to_string(),
            message,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let reason = match &e {
            Error::InvalidWeights => "invalid-weights",
            Error::ZeroTuple => "zero-tuple",
            Error::ArityMismatch { .. } => "arity-mismatch",
            Error::ZeroScalar => "zero-scalar",
            Error::ZeroValuation => "zero-valuation",
            Error::NonRationalResult => "non-rational-result",
            Error::WeightsMismatch => "weights-mismatch",
            Error::UnknownPreset(_) => "unknown-preset",
            Error::DegenerateModuli { .. } => "degenerate-moduli",
            Error::MalformedRecord(_) => "malformed-record",
        };
        CliError::new(reason, e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::new("io-error", e.to_string())
    }
}

fn parse_weights(spec: &WeightSpec) -> Result<(Weights, Option<String>), CliError> {
    match (&spec.weights, &spec.preset) {
        (Some(list), None) => {
            let q: Result<Vec<u32>, _> = list.split(',').map(|s| s.trim().parse::<u32>()).collect();
            let q = q.map_err(|_| {
                CliError::new("invalid-weights", format!("cannot parse weights `{list}`"))
            })?;
            Ok((Weights::new(q)?, None))
        }
        (None, Some(name)) => {
            let p = moduli::preset(name)?;
            Ok((p.weights().clone(), Some(name.clone())))
        }
        _ => Err(CliError::new(
            "missing-weights",
            "exactly one of --weights / --preset is required".to_string(),
        )),
    }
}

fn parse_point(spec: &PointSpec) -> Result<WeightedTuple, CliError> {
    let coords: Result<Vec<BigInt>, _> = spec
        .point
        .split(',')
        .map(|s| s.trim().parse::<BigInt>())
        .collect();
    let coords = coords.map_err(|_| {
        CliError::new(
            "bad-coordinate",
            format!("cannot parse point `{}`", spec.point),
        )
    })?;
    match (&spec.weights.weights, &spec.weights.preset) {
        (None, Some(name)) => {
            let p = moduli::preset(name)?;
            Ok(moduli::moduli_point(&p, coords)?)
        }
        _ => {
            let (w, _) = parse_weights(&spec.weights)?;
            Ok(WeightedTuple::new(w, coords)?)
        }
    }
}

fn parse_bound(text: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::new("bad-bound", format!("cannot parse bound `{text}`"));
    let r = match text.split_once('/') {
        Some((a, b)) => {
            let num: BigInt = a.trim().parse().map_err(|_| bad())?;
            let den: BigInt = b.trim().parse().map_err(|_| bad())?;
            if den == BigInt::from(0) {
                return Err(bad());
            }
            BigRational::new(num, den)
        }
        None => BigRational::from(text.trim().parse::<BigInt>().map_err(|_| bad())?),
    };
    Ok(r)
}

fn coords_json(t: &WeightedTuple) -> Value {
    Value::Array(
        t.coords()
            .iter()
            .map(|c| Value::String(c.to_string()))
            .collect(),
    )
}

fn radical_json(r: &FactoredRadical) -> Value {
    let mut map = Map::new();
    for (p, e) in r.factors() {
        map.insert(p.to_string(), Value::String(format!("{}/{}", e.numer(), e.denom())));
    }
    Value::Object(map)
}

fn height_json(h: &HeightValue) -> Value {
    json!({
        "base": h.base().to_string(),
        "root": h.root(),
        "approx": h.approx(),
    })
}

fn removed_json(r: &Removed) -> Value {
    match r {
        Removed::Rational(d) => Value::String(d.to_string()),
        Removed::Radical(rad) => radical_json(rad),
    }
}

fn removed_text(r: &Removed) -> String {
    match r {
        Removed::Rational(d) => d.to_string(),
        Removed::Radical(rad) => rad.to_string(),
    }
}

fn print_point_result(json: bool, n: &NormalizedPoint, extra: Option<(&str, Value)>) {
    if json {
        let mut obj = Map::new();
        obj.insert(
            "weights".to_string(),
            Value::Array(
                n.tuple
                    .weights()
                    .as_slice()
                    .iter()
                    .map(|&w| Value::from(w))
                    .collect(),
            ),
        );
        obj.insert("point".to_string(), coords_json(&n.tuple));
        obj.insert("removed".to_string(), removed_json(&n.removed));
        if let Some((k, v)) = extra {
            obj.insert(k.to_string(), v);
        }
        println!("{}", Value::Object(obj));
    } else {
        println!("{}", n.tuple);
        println!("removed: {}", removed_text(&n.removed));
    }
}

fn open_input(file: &Option<PathBuf>) -> Result<Box<dyn BufRead>, CliError> {
    match file {
        Some(path) => Ok(Box::new(io::BufReader::new(std::fs::File::open(path)?))),
        None => Ok(Box::new(io::BufReader::new(io::stdin()))),
    }
}

fn emit_collection(col: &Collection, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => col.save(path)?,
        None => {
            let stdout = io::stdout();
            col.export(stdout.lock())?;
        }
    }
    Ok(())
}

fn report_json(report: &IngestReport) -> Value {
    json!({
        "accepted": report.accepted,
        "rejected": report.rejected,
        "duplicate_labels": report.duplicate_labels,
    })
}

fn print_report(json: bool, report: &IngestReport) {
    if json {
        println!("{}", report_json(report));
    } else {
        println!("accepted: {}", report.accepted);
        for (reason, n) in &report.rejected {
            println!("rejected ({reason}): {n}");
        }
        println!("duplicate labels: {}", report.duplicate_labels);
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.cmd {
        Cmd::Wgcd(spec) => {
            let t = parse_point(spec)?;
            let d = wgcd(&t);
            if cli.json {
                println!("{}", json!({ "wgcd": d.to_string() }));
            } else {
                println!("{d}");
            }
        }
        Cmd::AbsWgcd(spec) => {
            let t = parse_point(spec)?;
            let r = abs_wgcd(&t);
            if cli.json {
                println!(
                    "{}",
                    json!({ "abs_wgcd": radical_json(&r), "approx": r.approx() })
                );
            } else {
                println!("{r}");
            }
        }
        Cmd::Normalize(spec) => {
            let t = parse_point(spec)?;
            print_point_result(cli.json, &normalize(&t), None);
        }
        Cmd::AbsNormalize(spec) => {
            let t = parse_point(spec)?;
            print_point_result(cli.json, &normalize_abs(&t), None);
        }
        Cmd::Canonical { point, mode } => {
            let t = parse_point(point)?;
            let mode_name = match mode {
                ModeArg::Rational => "rational",
                ModeArg::Absolute => "absolute",
            };
            print_point_result(
                cli.json,
                &canonical(&t, (*mode).into()),
                Some(("mode", Value::String(mode_name.to_string()))),
            );
        }
        Cmd::Height(spec) => {
            let t = parse_point(spec)?;
            let h = height(&t);
            if cli.json {
                println!("{}", height_json(&h));
            } else {
                println!("{} (~{})", h, h.approx());
            }
        }
        Cmd::AbsHeight(spec) => {
            let t = parse_point(spec)?;
            let h = abs_height(&t);
            if cli.json {
                println!("{}", height_json(&h));
            } else {
                println!("{} (~{})", h, h.approx());
            }
        }
        Cmd::Twists { point, bound } => {
            let t = parse_point(point)?;
            let b = match bound {
                Some(text) => HeightBound::Rational(parse_bound(text)?),
                None => HeightBound::Value(height(&t)),
            };
            let twists = twists_up_to(&t, &b);
            if cli.json {
                let items: Vec<Value> = twists
                    .iter()
                    .map(|p| {
                        let h = height(&p.tuple);
                        json!({ "point": coords_json(&p.tuple), "height": height_json(&h) })
                    })
                    .collect();
                println!("{}", json!({ "count": twists.len(), "twists": items }));
            } else {
                for p in &twists {
                    let h = height(&p.tuple);
                    println!("{}  height {} (~{})", p.tuple, h, h.approx());
                }
            }
        }
        Cmd::Enumerate { weights, bound } => {
            let (w, _) = parse_weights(weights)?;
            let c = parse_bound(bound)?;
            let points = enumerate_bounded(&w, &c);
            if cli.json {
                let items: Vec<Value> = points.iter().map(|p| coords_json(&p.tuple)).collect();
                println!("{}", json!({ "count": points.len(), "points": items }));
            } else {
                for p in &points {
                    println!("{}", p.tuple);
                }
            }
        }
        Cmd::Db(db) => run_db(cli, db)?,
    }
    Ok(())
}

fn run_db(cli: &Cli, cmd: &DbCmd) -> Result<(), CliError> {
    match cmd {
        DbCmd::Ingest { file, out } => {
            let (col, report) = wproj::db::ingest(open_input(file)?)?;
            if let Some(path) = out {
                col.save(path)?;
            }
            print_report(cli.json, &report);
        }
        DbCmd::Dedupe { file, mode, out } => {
            let (col, _) = wproj::db::ingest(open_input(file)?)?;
            emit_collection(&col.dedupe((*mode).into()), out)?;
        }
        DbCmd::Sort { file, mode, out } => {
            let (col, _) = wproj::db::ingest(open_input(file)?)?;
            emit_collection(&col.sort_by_height((*mode).into()), out)?;
        }
        DbCmd::TwistGroups { file } => {
            let (col, _) = wproj::db::ingest(open_input(file)?)?;
            let groups = col.twist_groups();
            if cli.json {
                let items: Vec<Value> = groups
                    .iter()
                    .map(|g| {
                        json!({
                            "twist_key": g.twist_key,
                            "representative": g.representative
                                .iter()
                                .map(|c| Value::String(c.to_string()))
                                .collect::<Vec<_>>(),
                            "members": g.members,
                        })
                    })
                    .collect();
                println!("{}", json!({ "count": groups.len(), "groups": items }));
            } else {
                for g in &groups {
                    let rep: Vec<String> =
                        g.representative.iter().map(|c| c.to_string()).collect();
                    println!("[{}]  members: {}", rep.join(" : "), g.members.join(", "));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.threads {
        // a hint only; ignore failure if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.reason, "message": e.message }));
            } else {
                let _ = writeln!(io::stderr(), "error: {}", e.message);
            }
            ExitCode::FAILURE
        }
    }
}
