use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hypertilt::action::{centralizer, ensure_valid, hyperfocal_subgroup, reduce_to_hyperfocal};
use hypertilt::decide::{
    decide_abelian_with, decide_frattini, quiver_of, reduced_quiver, DecideOptions, Outcome,
};
use hypertilt::format::{
    field_of_order, parse_cycle, parse_group_spec, parse_quiver, parse_rep, to_json, GroupSpec,
    Mode, ParsedSpec, RepFile,
};
use hypertilt::quiverbuild::{quiver_from_character_table, to_dot, BoundQuiver, CharacterTable};
use hypertilt::repcheck::{
    endomorphism_dimension, enumerate_bricks, eval_relations, has_nontrivial_idempotent,
};
use hypertilt::zigzag::{default_max_len, find_qualifying_cycles, is_qualifying, validate_zigzag};
use hypertilt::Error;

const EXIT_UNKNOWN: u8 = 3;
const EXIT_INVALID: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser)]
#[command(
    name = "hypertilt",
    version,
    about = "τ-tilting finiteness for blocks of P⋊H with abelian P and H"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Abelian,
    Frattini,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Abelian => Mode::Abelian,
            ModeArg::Frattini => Mode::Frattini,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide τ-tilting finiteness and print the verdict
    Decide {
        spec: PathBuf,
        #[arg(long)]
        mode: Option<ModeArg>,
        /// zigzag search bound (default 2·|vertices|)
        #[arg(long)]
        max_cycle_len: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the Gabriel quiver with relations
    Quiver {
        /// group spec; omit with --table
        spec: Option<PathBuf>,
        #[arg(long)]
        mode: Option<ModeArg>,
        /// quiver of [P,H] ⋊ H instead of P ⋊ H
        #[arg(long)]
        reduced: bool,
        /// build from a character table document instead
        #[arg(long, conflicts_with_all = ["spec", "reduced"])]
        table: Option<PathBuf>,
        /// also write Graphviz DOT here
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print [P,H], C_P(H) and the reduced presentation
    Hyperfocal {
        spec: PathBuf,
        #[arg(long)]
        mode: Option<ModeArg>,
    },
    /// Check a certificate against a quiver, or search for qualifying cycles
    Zigzag {
        quiver: PathBuf,
        /// verdict, cycle certificate or list of arrow ids
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        max_cycle_len: Option<usize>,
    },
    /// Relation and brick report for a representation
    CheckRep { quiver: PathBuf, rep: PathBuf },
    /// Count brick isoclasses of a dimension vector by brute force
    OracleBricks {
        quiver: PathBuf,
        /// comma-separated dimension per vertex
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        field_q: u64,
        /// restrict to the subquiver on these arrow ids first
        #[arg(long, value_delimiter = ',')]
        arrows: Option<Vec<usize>>,
        /// include representatives in the output
        #[arg(long)]
        representatives: bool,
    },
}

enum Failure {
    Io(PathBuf, std::io::Error),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn emit(text: &str, output: Option<&Path>) -> CliResult<()> {
    match output {
        Some(p) => write_file(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e))
        }
    }
}

fn load_spec(path: &Path, mode: Option<ModeArg>) -> CliResult<ParsedSpec> {
    Ok(parse_group_spec(&read(path)?, mode.map(Mode::from))?)
}

fn load_quiver(path: &Path) -> CliResult<BoundQuiver> {
    Ok(parse_quiver(&read(path)?)?)
}

fn subgroup_doc(s: &hypertilt::abgroup::SubgroupData) -> serde_json::Value {
    json!({
        "invariant_factors": s.invariant_factors(),
        "order": s.order(),
        "generators": s.generators(),
    })
}

fn run(cmd: Command) -> CliResult<u8> {
    match cmd {
        Command::Decide {
            spec,
            mode,
            max_cycle_len,
            output,
        } => {
            let verdict = match load_spec(&spec, mode)? {
                ParsedSpec::Abelian(pres) => {
                    decide_abelian_with(&pres, &DecideOptions { max_cycle_len })?
                }
                ParsedSpec::Frattini(f) => decide_frattini(&f)?,
            };
            emit(&to_json(&verdict), output.as_deref())?;
            Ok(if verdict.outcome == Outcome::Unknown {
                EXIT_UNKNOWN
            } else {
                0
            })
        }
        Command::Quiver {
            spec,
            mode,
            reduced,
            table,
            dot,
            output,
        } => {
            let q = match (table, spec) {
                (Some(t), _) => {
                    let doc: hypertilt::quiverbuild::CharacterTableSpec =
                        serde_json::from_slice(&read(&t)?)
                            .map_err(|e| Error::Parse(format!("character table: {e}")))?;
                    quiver_from_character_table(&CharacterTable::try_from(doc)?)?
                }
                (None, Some(s)) => {
                    let parsed = load_spec(&s, mode)?;
                    let pres = parsed.presentation();
                    ensure_valid(pres)?;
                    if reduced {
                        reduced_quiver(&reduce_to_hyperfocal(pres)?)?
                    } else {
                        quiver_of(pres)?
                    }
                }
                (None, None) => {
                    return Err(Error::InvalidInput("give a group spec or --table".into()).into())
                }
            };
            if let Some(d) = dot {
                write_file(&d, &to_dot(&q))?;
            }
            emit(&to_json(&q), output.as_deref())?;
            Ok(0)
        }
        Command::Hyperfocal { spec, mode } => {
            let parsed = load_spec(&spec, mode)?;
            let pres = parsed.presentation();
            ensure_valid(pres)?;
            let r = hyperfocal_subgroup(pres)?;
            let c = centralizer(pres)?;
            let reduced = ParsedSpec::Abelian(reduce_to_hyperfocal(pres)?);
            let doc = json!({
                "p": pres.p(),
                "hyperfocal": subgroup_doc(&r),
                "centralizer": subgroup_doc(&c),
                "reduced": GroupSpec::from_parsed(&reduced),
            });
            emit(&to_json(&doc), None)?;
            Ok(0)
        }
        Command::Zigzag {
            quiver,
            certificate,
            max_cycle_len,
        } => {
            let q = load_quiver(&quiver)?;
            match certificate {
                Some(path) => {
                    let arrows = parse_cycle(&read(&path)?, &q)?;
                    let doc = match validate_zigzag(&q, &arrows) {
                        Ok(c) => {
                            let report = is_qualifying(&q, &c);
                            let ok = report.qualifies;
                            emit(
                                &to_json(
                                    &json!({ "valid": true, "cycle": c, "qualification": report }),
                                ),
                                None,
                            )?;
                            return Ok(if ok { 0 } else { EXIT_INVALID });
                        }
                        Err(v) => json!({ "valid": false, "violation": v }),
                    };
                    emit(&to_json(&doc), None)?;
                    Ok(EXIT_INVALID)
                }
                None => {
                    let bound = max_cycle_len.unwrap_or_else(|| default_max_len(&q));
                    let cycles = find_qualifying_cycles(&q, bound);
                    emit(
                        &to_json(&json!({ "max_cycle_len": bound, "cycles": cycles })),
                        None,
                    )?;
                    Ok(0)
                }
            }
        }
        Command::CheckRep { quiver, rep } => {
            let q = load_quiver(&quiver)?;
            let r = parse_rep(&read(&rep)?, &q)?;
            let relations = match &q.relations {
                None => json!({ "known": false }),
                Some(rels) => match eval_relations(&r, rels) {
                    Ok(()) => json!({ "known": true, "ok": true }),
                    Err(v) => json!({ "known": true, "ok": false, "generator": v.generator }),
                },
            };
            let end = endomorphism_dimension(&r);
            let idempotent = match has_nontrivial_idempotent(&r) {
                Ok(b) => json!(b),
                Err(Error::SearchSpaceTooLarge { .. }) => json!(null),
                Err(e) => return Err(e.into()),
            };
            let doc = json!({
                "dimension": r.total_dimension(),
                "relations": relations,
                "endomorphism_dimension": end,
                "brick": r.total_dimension() > 0 && end == 1,
                "nontrivial_idempotent": idempotent,
            });
            emit(&to_json(&doc), None)?;
            Ok(0)
        }
        Command::OracleBricks {
            quiver,
            dims,
            field_q,
            arrows,
            representatives,
        } => {
            let mut q = load_quiver(&quiver)?;
            if let Some(keep) = arrows {
                q = q.restrict_to_arrows(&keep)?;
            }
            let field = field_of_order(field_q)?;
            let bricks = enumerate_bricks(&q, &dims, &field)?;
            let mut doc = json!({ "q": field_q, "dims": dims, "count": bricks.count() });
            if representatives {
                let reps: Vec<RepFile> = bricks
                    .representatives
                    .iter()
                    .map(RepFile::from_rep)
                    .collect();
                doc["representatives"] = json!(reps);
            }
            emit(&to_json(&doc), None)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            let internal = e.is_internal() || matches!(e, Error::InconsistentRankOne);
            ExitCode::from(if internal {
                EXIT_INTERNAL
            } else {
                EXIT_INVALID
            })
        }
    }
}
