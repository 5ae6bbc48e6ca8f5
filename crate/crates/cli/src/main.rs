use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use neighborly::bounds::BoundFact;
use neighborly::budget::Budget;
use neighborly::certificate::{self, Certificate};
use neighborly::family::{FamilyParams, Mode};
use neighborly::geometry::GaleDiagram;
use neighborly::matroid::{Sign, SignMatrix};
use neighborly::travel::TravelKind;
use neighborly::Error;
use serde_json::Value;

#[derive(Parser)]
#[command(name = "neighborly", version, about = "Exact certificates for k-neighbourly constructions")]
struct Cli {
    /// Write certificates here instead of stdout, one JSON object per line.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Stop enumerations after this many seconds and emit a partial certificate.
    #[arg(long, global = true)]
    max_seconds: Option<u64>,
    /// Stop enumerations after this many cases and emit a partial certificate.
    #[arg(long, global = true)]
    max_cases: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a travel proposition over every (or sampled) matrix of a shape.
    Verify {
        #[arg(value_enum)]
        proposition: Proposition,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        cols: usize,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Build a chessboard family or verify its reorientation lemma.
    Family {
        #[arg(value_enum)]
        action: FamilyAction,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: Option<usize>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Top, bottom or plain travels of a matrix file.
    Travel {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Gale transform of a points file, or the inverse of a vectors file.
    Gale {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        invert: bool,
    },
    /// k-divisibility (or s-block divisibility with --s).
    Divide {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: Option<usize>,
        /// Refuse s-block searches over more partitions than this.
        #[arg(long, default_value_t = 10_000_000)]
        cap: u128,
    },
    /// k-neighbourliness of the points' convex hull.
    Neighbourly {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Search sign flips of the Gale diagram and build the projective map.
    Signflip {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Permissible projective map with prescribed denominator signs.
    Projective {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        signs: PathBuf,
    },
    /// Propagate a table of bounds through the index relations.
    Bounds {
        #[arg(long)]
        table: PathBuf,
    },
    /// Re-check a stream of certificates.
    Replay { cert: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Proposition {
    PropLlom,
    PropPt,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyAction {
    Build,
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Top,
    Bottom,
    Plain,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct ModeArgs {
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    #[arg(long, default_value_t = 100_000)]
    count: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl ModeArgs {
    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Sampled => Mode::Sampled { count: self.count, seed: self.seed },
        }
    }
}

/// `{"facts": [...], "d_max": D, "ks": [...]}`; `d_max` defaults to 12 and
/// `ks` to every `k` named by a fact.
#[derive(serde::Deserialize)]
struct BoundsTable {
    facts: Vec<BoundFact>,
    #[serde(default = "default_d_max")]
    d_max: usize,
    #[serde(default)]
    ks: Vec<usize>,
}

fn default_d_max() -> usize {
    12
}

enum Outcome {
    Certificates(Vec<Certificate>),
    Replayed(Vec<(String, bool)>),
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, Error> {
    Ok(serde_json::from_str(&read(path)?)?)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let mut budget = Budget::unlimited();
    if let Some(s) = cli.max_seconds {
        budget = budget.with_max_duration(Duration::from_secs(s));
    }
    if let Some(c) = cli.max_cases {
        budget = budget.with_max_cases(c);
    }
    let one = |c: Certificate| Ok(Outcome::Certificates(vec![c]));
    match &cli.command {
        Command::Verify { proposition, rank, cols, mode } => one(match proposition {
            Proposition::PropLlom => certificate::prop_llom(*rank, *cols, mode.mode(), &budget)?,
            Proposition::PropPt => certificate::prop_pt(*rank, *cols, mode.mode(), &budget)?,
        }),
        Command::Family { action, rank, k, l, mode } => {
            let p = FamilyParams::new(*rank, *k, *l)?;
            one(match action {
                FamilyAction::Build => certificate::family_board(p)?,
                FamilyAction::Verify => certificate::lemma_family(p, mode.mode(), &budget)?,
            })
        }
        Command::Travel { matrix, kind } => {
            let m: SignMatrix = read(matrix)?.parse()?;
            let kind = match kind {
                KindArg::Top => TravelKind::Top,
                KindArg::Bottom => TravelKind::Bottom,
                KindArg::Plain => TravelKind::Plain,
            };
            one(certificate::travel(&m, kind)?)
        }
        Command::Gale { points, invert } => {
            if *invert {
                one(certificate::gale_inverse_cert(&GaleDiagram::from_json(&read_json(points)?)?)?)
            } else {
                one(certificate::gale(&certificate::parse_points(&read(points)?)?)?)
            }
        }
        Command::Divide { points, k, s, cap } => {
            let x = certificate::parse_points(&read(points)?)?;
            match s {
                None | Some(2) => one(certificate::k_divisible(&x, *k)?),
                Some(s) => match certificate::s_k_divisible(&x, *s, *k, *cap) {
                    Err(Error::SearchCap { needed, cap }) => {
                        eprintln!("error: {needed} partitions exceed the cap of {cap}");
                        one(certificate::s_k_divisible_capped(&x, *s, *k, needed))
                    }
                    r => one(r?),
                },
            }
        }
        Command::Neighbourly { points, k } => {
            one(certificate::neighbourly(&certificate::parse_points(&read(points)?)?, *k)?)
        }
        Command::Signflip { points, k } => one(certificate::signflip(&certificate::parse_points(&read(points)?)?, *k)?),
        Command::Projective { points, signs } => {
            let x = certificate::parse_points(&read(points)?)?;
            let raw: Vec<i8> = serde_json::from_value(read_json(signs)?)?;
            let e: Vec<Sign> = raw
                .into_iter()
                .map(|s| Sign::from_i8(s).ok_or_else(|| Error::InvalidInput(format!("sign {s} is not ±1"))))
                .collect::<Result<_, _>>()?;
            one(certificate::projective(&x, &e)?)
        }
        Command::Bounds { table } => {
            let t: BoundsTable = serde_json::from_value(read_json(table)?)?;
            let mut ks = t.ks;
            if ks.is_empty() {
                ks = t.facts.iter().map(|f| f.k).collect();
                ks.sort_unstable();
                ks.dedup();
            }
            one(certificate::bounds(&t.facts, t.d_max, &ks)?)
        }
        Command::Replay { cert } => {
            let certs = certificate::parse_stream(&read(cert)?)?;
            let mut out = Vec::with_capacity(certs.len());
            for c in &certs {
                out.push((c.claim.clone(), certificate::replay(c)?));
            }
            Ok(Outcome::Replayed(out))
        }
    }
}

fn emit(out: Option<&Path>, lines: &[String]) -> io::Result<()> {
    let mut w: Box<dyn Write> = match out {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    };
    for l in lines {
        writeln!(w, "{l}")?;
    }
    w.flush()
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("NEIGHBORLY_THREADS") else { return Ok(()) };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidInput(format!("NEIGHBORLY_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidInput(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let (lines, code) = match outcome {
        Outcome::Certificates(certs) => {
            let partial = certs.iter().any(|c| !c.coverage.is_complete());
            let refuted = certs.iter().any(|c| !c.verified);
            for c in &certs {
                eprintln!(
                    "{}: verified={} coverage={}/{}",
                    c.claim, c.verified, c.coverage.checked, c.coverage.total
                );
            }
            let code = if partial { 2 } else if refuted { 1 } else { 0 };
            (certs.iter().map(Certificate::to_json_line).collect::<Vec<_>>(), code)
        }
        Outcome::Replayed(results) => {
            let code = if results.iter().all(|(_, ok)| *ok) { 0 } else { 1 };
            let lines = results
                .iter()
                .map(|(claim, ok)| serde_json::json!({ "claim": claim, "replay": ok }).to_string())
                .collect();
            (lines, code)
        }
    };
    if let Err(e) = emit(cli.out.as_deref(), &lines) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
