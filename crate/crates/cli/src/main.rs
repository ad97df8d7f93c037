use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use tamagawa::cohomology::{self, Budget, OracleReport};
use tamagawa::fields::{self, families::LegendreEntry, DihedralReport, Prediction, SplitVerdict};
use tamagawa::io::{parse_datum, to_canonical_json};
use tamagawa::torus::{self, DensityBound, NkBound, ProductReport};
use tamagawa::{landau, BigRational, Error, NormTorusDatum, TamagawaReport};

#[derive(Parser)]
#[command(name = "tamagawa", version, about = "Tamagawa numbers of CM and norm-type tori from finite group data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tamagawa number of a named field or a datum file
    Tau {
        #[command(subcommand)]
        what: TauCommand,
    },
    /// Structural predictions for a CM datum
    Classify { file: PathBuf },
    /// Brute-force cohomology checks
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
    /// Landau pair search
    Landau {
        #[command(subcommand)]
        what: LandauCommand,
    },
}

#[derive(Subcommand)]
enum TauCommand {
    /// The n-th cyclotomic field
    Cyclotomic { n: u64 },
    /// The quaternion field attached to (P, Q)
    Q8 {
        #[arg(value_name = "P")]
        big_p: u64,
        #[arg(value_name = "Q")]
        big_q: u64,
    },
    /// A datum file
    Datum {
        file: PathBuf,
        /// Also run the cochain oracle
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 16)]
        max_order: usize,
    },
    /// Product of the tori in several datum files
    Product {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Also evaluate the combined datum on the product group
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 16)]
        max_order: usize,
    },
}

#[derive(Subcommand)]
enum LandauCommand {
    Search {
        #[arg(long)]
        a_max: u64,
        #[arg(long)]
        b_max: u64,
        #[arg(long)]
        threads: Option<usize>,
        /// CSV file for the pairs (columns a,p,b,q with p = 1 + 4a²)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: &'a str,
    context: &'a str,
}

#[derive(Serialize)]
struct ErrorPayload<'a> {
    error: ErrorBody<'a>,
}

fn fail(code: &str, message: &str, context: &str, exit: u8) -> ExitCode {
    print!("{}", to_canonical_json(&ErrorPayload { error: ErrorBody { code, message, context } }));
    ExitCode::from(exit)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain { .. } => 3,
        Error::FastPathUnavailable { .. } => 4,
        Error::Budget { .. } => 5,
        Error::Overflow { .. } => 6,
        Error::Internal { .. } => 1,
    }
}

fn describe(e: &Error) -> String {
    if e.context().is_empty() {
        e.message().to_string()
    } else {
        format!("{}: {}", e.message(), e.context())
    }
}

fn read_datum(path: &Path) -> tamagawa::Result<NormTorusDatum> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::domain("cannot read datum file").with_context(format!("{}: {e}", path.display())))?;
    parse_datum(&text).map_err(|e| {
        let ctx = if e.context().is_empty() { path.display().to_string() } else { format!("{}: {}", path.display(), e.context()) };
        e.with_context(ctx)
    })
}

#[derive(Serialize)]
struct CyclotomicOut {
    n: u64,
    #[serde(serialize_with = "tamagawa::io::serialize_rational")]
    predicted_tau: BigRational,
    #[serde(flatten)]
    report: TamagawaReport,
}

#[derive(Serialize)]
struct Q8Out {
    #[serde(rename = "P")]
    big_p: u64,
    #[serde(rename = "Q")]
    big_q: u64,
    b: u64,
    legendre: Vec<LegendreEntry>,
    #[serde(serialize_with = "tamagawa::io::serialize_rational")]
    predicted_tau: BigRational,
    #[serde(flatten)]
    report: TamagawaReport,
}

#[derive(Serialize)]
struct DatumOut {
    #[serde(flatten)]
    report: TamagawaReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleOutcome>,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum OracleOutcome {
    Report(OracleReport),
    Skipped { code: &'static str, message: String },
}

#[derive(Serialize)]
struct ImaginaryQuadratic {
    count: usize,
    n_k: NkBound,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum Outcome<T> {
    Value(T),
    NotApplicable(String),
}

impl<T> Outcome<T> {
    fn from(r: tamagawa::Result<T>) -> tamagawa::Result<Self> {
        match r {
            Ok(v) => Ok(Outcome::Value(v)),
            Err(e @ Error::Domain { .. }) => Ok(Outcome::NotApplicable(describe(&e))),
            Err(e) => Err(e),
        }
    }
}

#[derive(Serialize)]
struct ClassifyOut {
    group_order: usize,
    abelian: Outcome<Prediction>,
    split: Outcome<SplitVerdict>,
    /// Present when `G` is dihedral.
    #[serde(skip_serializing_if = "Option::is_none")]
    dihedral: Option<Outcome<DihedralReport>>,
    density: DensityBound,
    imaginary_quadratic: ImaginaryQuadratic,
}

#[derive(Serialize)]
struct LandauSummary {
    pair_count: usize,
    distinct_p_count: usize,
    a_max: u64,
    b_max: u64,
    elapsed_ms: u128,
}

#[derive(Serialize)]
struct CsvRow {
    a: u64,
    p: u64,
    b: u64,
    q: u64,
}

fn run(cli: Cli) -> tamagawa::Result<String> {
    Ok(match cli.command {
        Command::Tau { what } => match what {
            TauCommand::Cyclotomic { n } => {
                let c = fields::cyclotomic(n)?;
                to_canonical_json(&CyclotomicOut { n, predicted_tau: c.predicted_tau, report: torus::tamagawa(&c.datum)? })
            }
            TauCommand::Q8 { big_p, big_q } => {
                let c = fields::q8_landau(big_p, big_q)?;
                to_canonical_json(&Q8Out {
                    big_p,
                    big_q,
                    b: c.b,
                    legendre: c.legendre,
                    predicted_tau: c.predicted_tau,
                    report: torus::tamagawa(&c.datum)?,
                })
            }
            TauCommand::Datum { file, oracle, max_order } => {
                let d = read_datum(&file)?;
                let report = torus::tamagawa(&d)?;
                let oracle = oracle
                    .then(|| match cohomology::oracle(&d, &Budget::with_max_order(max_order)) {
                        Ok(r) => Ok(OracleOutcome::Report(r)),
                        Err(e @ (Error::Budget { .. } | Error::Domain { .. })) => {
                            Ok(OracleOutcome::Skipped { code: e.code(), message: describe(&e) })
                        }
                        Err(e) => Err(e),
                    })
                    .transpose()?;
                to_canonical_json(&DatumOut { report, oracle })
            }
            TauCommand::Product { files, verify } => {
                let factors = files.iter().map(|f| read_datum(f)).collect::<tamagawa::Result<Vec<_>>>()?;
                let report: ProductReport = torus::product_tamagawa(&factors, &[], verify)?;
                to_canonical_json(&report)
            }
        },
        Command::Classify { file } => {
            let d = read_datum(&file)?;
            let iota = d.iota().ok_or_else(|| Error::domain("classify needs a CM datum with iota"))?;
            let g = d.group();
            let (count, n_k) = torus::imaginary_quadratic_count(g, iota)?;
            to_canonical_json(&ClassifyOut {
                group_order: g.order(),
                abelian: Outcome::from(fields::abelian_classifier(g, iota))?,
                split: Outcome::from(fields::split_classifier(&d, &Budget::default()))?,
                dihedral: fields::dihedral_degree(g).map(|n| Outcome::from(fields::dihedral_cm(n))).transpose()?,
                density: torus::density_bound(g, iota)?,
                imaginary_quadratic: ImaginaryQuadratic { count, n_k },
            })
        }
        Command::Oracle { what: OracleCommand::Verify { file, max_order } } => {
            let d = read_datum(&file)?;
            to_canonical_json(&cohomology::verify_structure(&d, &Budget::with_max_order(max_order))?)
        }
        Command::Landau { what: LandauCommand::Search { a_max, b_max, threads, out } } => {
            let start = Instant::now();
            let result = match threads {
                Some(t) => landau::search_with_threads(a_max, b_max, t)?,
                None => landau::search(a_max, b_max)?,
            };
            let elapsed_ms = start.elapsed().as_millis();
            if let Some(path) = out {
                write_csv(&path, &result.pairs)?;
            }
            to_canonical_json(&LandauSummary {
                pair_count: result.pair_count,
                distinct_p_count: result.distinct_p_count,
                a_max,
                b_max,
                elapsed_ms,
            })
        }
    })
}

fn write_csv(path: &Path, pairs: &[landau::LandauPair]) -> tamagawa::Result<()> {
    let io_err = |e: &dyn std::fmt::Display| Error::domain("cannot write CSV").with_context(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(&e))?;
    for x in pairs {
        w.serialize(CsvRow { a: x.half_root(), p: x.p, b: x.b, q: x.q }).map_err(|e| io_err(&e))?;
    }
    w.flush().map_err(|e| io_err(&e))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", "invalid command line", e.to_string().trim(), 2),
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(e.code(), e.message(), e.context(), exit_code(&e)),
    }
}
