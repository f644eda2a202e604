use std::process::ExitCode;

use ample_core::imaginaries::{CosetQuery, Relation};
use ample_core::jsj::{all_passed, example_jsj, validate, witness_jsj_left, witness_jsj_right, GraphOfGroups};
use ample_core::stallings::SubgroupGraph;
use ample_core::verifier::{verify_ample, Config, VerifyError};
use ample_core::whitehead::{minimize, primitivity_trace, WhiteheadError};
use ample_core::word::{parse_word, parse_word_list, product, Word};
use clap::{Parser, Subcommand, ValueEnum};

const PASS: u8 = 0;
const CHECK_FAILED: u8 = 1;
const USAGE: u8 = 2;
const RESOURCE_LIMIT: u8 = 3;

/// Free-group word algebra, subgroup graphs, Whitehead minimization, basic
/// sorts, JSJ catalog, and the ampleness verifier.
///
/// Words: letters `e<k>` and inverses `E<k>` (k >= 1), `1` for the
/// identity, `[u,v]` for u v U V, `(w)^m` for powers; whitespace between
/// factors is optional. Lists of words are separated by `;`.
///
/// Exit codes: 0 success or pass, 1 check failed, 2 usage error,
/// 3 resource limit.
#[derive(Parser)]
#[command(name = "ample", version)]
struct Cli {
    /// Largest rank for Whitehead scans.
    #[arg(long, global = true, env = "AMPLE_MAX_RANK", default_value_t = 8)]
    max_rank: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Word algebra.
    Word {
        #[command(subcommand)]
        op: WordOp,
    },
    /// Stallings subgroup graph queries.
    Subgroup {
        #[command(subcommand)]
        op: SubgroupOp,
    },
    /// Whether a word is primitive in F_rank.
    Primitive {
        word: String,
        #[arg(long)]
        rank: u32,
        /// Print the minimization trace as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Greedy Whitehead minimization of a tuple of words.
    Minimize {
        #[arg(required = true)]
        words: Vec<String>,
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        json: bool,
    },
    /// Decide a basic equivalence relation between two tuples.
    ///
    /// Give the left tuple followed by the right tuple as separate word
    /// arguments: 1+1 words for e1 (conjugacy), 2+2 for e2 and e3 (pairs
    /// (a, b) up to a_1^-1 a_2 resp. a_1 a_2^-1 in <b^m>, with equal
    /// centralizers of the b's), 3+3 for e4 (triples (a, b, c) with
    /// b_2 in <a^n> b_1 <c^n>, with equal centralizers of the a's and of
    /// the c's).
    ///
    /// The e4 relation is indexed by (m, n) but its defining condition only
    /// involves n: --m is accepted and has no effect on e4. Likewise --n has
    /// no effect on e1, e2 and e3.
    ///
    /// Tuples failing a side condition (a trivial b, a or c) are related
    /// exactly when they are equal; the output marks such answers as
    /// off-domain.
    #[command(verbatim_doc_comment)]
    BasicSort {
        /// One of e1, e2, e3, e4.
        #[arg(long)]
        relation: String,
        /// Modulus of e2 and e3. Inert for e4: accepted and ignored.
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Modulus of e4, applied to both the a-side and the c-side.
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(required = true)]
        words: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Catalog decompositions.
    Jsj {
        #[command(subcommand)]
        op: JsjOp,
    },
    /// Check the ampleness clauses for the witnessing sequence a_0..a_n.
    VerifyAmple {
        #[arg(long)]
        n: usize,
        /// Word-length bound of the conjugacy cross-check oracle.
        #[arg(long, env = "AMPLE_ORACLE_BOUND", default_value_t = 8)]
        oracle_bound: usize,
        /// Worker threads (0: automatic).
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum WordOp {
    /// Freely reduce.
    Reduce { word: String },
    /// Product of the words in order.
    Mul {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Inverse.
    Inv { word: String },
    /// g w g^-1.
    Conj { word: String, by: String },
}

#[derive(Subcommand)]
enum SubgroupOp {
    /// Print the folded core graph.
    Build {
        #[arg(long)]
        gens: String,
    },
    /// Whether the word lies in <gens>.
    Member {
        #[arg(long)]
        gens: String,
        word: String,
    },
    /// A free basis of <gens>.
    Basis {
        #[arg(long)]
        gens: String,
    },
    Rank {
        #[arg(long)]
        gens: String,
    },
    /// A basis of <gens> ∩ <with>.
    Intersect {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        with: String,
    },
}

#[derive(Subcommand)]
enum JsjOp {
    /// Print a catalog entry.
    Show {
        which: Entry,
        #[arg(long, default_value_t = 1)]
        index: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Parse a decomposition in the text format and run the structural checks.
    Validate { file: std::path::PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Entry {
    Example,
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Dot,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: USAGE, message: message.to_string() }
    }
}

impl From<WhiteheadError> for Failure {
    fn from(e: WhiteheadError) -> Self {
        let code = match e {
            WhiteheadError::UnsupportedRank { .. } => RESOURCE_LIMIT,
            _ => USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn word(s: &str) -> Result<Word, Failure> {
    parse_word(s).map_err(|e| Failure::usage(format!("'{s}': {e}")))
}

fn words(ss: &[String]) -> Result<Vec<Word>, Failure> {
    ss.iter().map(|s| word(s)).collect()
}

fn subgroup(gens: &str) -> Result<SubgroupGraph, Failure> {
    parse_word_list(gens).map(|g| SubgroupGraph::build(&g)).map_err(|e| Failure::usage(format!("'{gens}': {e}")))
}

fn join(ws: &[Word]) -> String {
    ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("; ")
}

fn check_rank(rank: u32, max: u32) -> Result<(), Failure> {
    if rank > max {
        return Err(Failure {
            code: RESOURCE_LIMIT,
            message: format!("rank {rank} exceeds the maximum {max} (see --max-rank)"),
        });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Word { op } => {
            let out = match op {
                WordOp::Reduce { word: w } => word(&w)?,
                WordOp::Mul { words: ws } => product(&words(&ws)?),
                WordOp::Inv { word: w } => word(&w)?.inverse(),
                WordOp::Conj { word: w, by } => word(&w)?.conjugate_by(&word(&by)?),
            };
            println!("{out}");
        }
        Command::Subgroup { op } => match op {
            SubgroupOp::Build { gens } => print!("{}", subgroup(&gens)?),
            SubgroupOp::Member { gens, word: w } => println!("{}", subgroup(&gens)?.contains(&word(&w)?)),
            SubgroupOp::Basis { gens } => println!("{}", join(&subgroup(&gens)?.basis())),
            SubgroupOp::Rank { gens } => println!("{}", subgroup(&gens)?.rank()),
            SubgroupOp::Intersect { gens, with } => {
                println!("{}", join(&subgroup(&gens)?.intersect(&subgroup(&with)?).basis()))
            }
        },
        Command::Primitive { word: w, rank, json } => {
            check_rank(rank, cli.max_rank)?;
            let trace = primitivity_trace(&word(&w)?, rank)?;
            let primitive = trace.as_ref().is_some_and(|t| t.minimal_length() == 1);
            if json {
                let out = serde_json::json!({ "primitive": primitive, "trace": trace });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("{primitive}");
            }
        }
        Command::Minimize { words: ws, rank, json } => {
            check_rank(rank, cli.max_rank)?;
            let trace = minimize(&words(&ws)?, rank)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&trace).unwrap());
            } else {
                for (aut, len) in trace.automorphisms_applied.iter().zip(&trace.total_lengths[1..]) {
                    println!("{aut}  -> total length {len}");
                }
                println!("minimal: {}", join(&trace.end));
                println!(
                    "total length {} ({} cut automorphisms scanned at the minimum)",
                    trace.minimal_length(),
                    trace.final_scan_size
                );
            }
        }
        Command::BasicSort { relation, m, n, words: ws, json } => {
            let relation: Relation = relation.parse().map_err(Failure::usage)?;
            let ws = words(&ws)?;
            if ws.len() % 2 != 0 {
                return Err(Failure::usage(format!("{relation} needs two tuples of {} words", relation.arity())));
            }
            let (left, right) = ws.split_at(ws.len() / 2);
            let query = CosetQuery { relation, modulus_m: m, modulus_n: n, left: left.to_vec(), right: right.to_vec() };
            let d = query.decide().map_err(Failure::usage)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&d).unwrap());
            } else if d.in_domain {
                println!("{}", d.holds);
            } else {
                println!("{} (off-domain: decided by equality of tuples)", d.holds);
            }
        }
        Command::Jsj { op } => match op {
            JsjOp::Show { which, index, format } => {
                if index == 0 {
                    return Err(Failure::usage("--index must be at least 1"));
                }
                let g = match which {
                    Entry::Example => example_jsj(index),
                    Entry::Left => witness_jsj_left(index),
                    Entry::Right => witness_jsj_right(index),
                };
                match format {
                    Format::Text => print!("{}", g.to_text()),
                    Format::Dot => print!("{}", g.to_dot()),
                }
            }
            JsjOp::Validate { file } => {
                let text =
                    std::fs::read_to_string(&file).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
                let g = GraphOfGroups::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
                let checks = validate(&g);
                for c in &checks {
                    let mark = if c.passed { "pass" } else { "FAIL" };
                    if c.detail.is_empty() {
                        println!("{mark} {}", c.name);
                    } else {
                        println!("{mark} {}: {}", c.name, c.detail);
                    }
                }
                if !all_passed(&checks) {
                    return Ok(CHECK_FAILED);
                }
            }
        },
        Command::VerifyAmple { n, oracle_bound, threads, json } => {
            if n == 0 || oracle_bound == 0 || cli.max_rank == 0 {
                return Err(Failure::usage("--n, --oracle-bound and --max-rank must be at least 1"));
            }
            let config = Config { max_rank: cli.max_rank, oracle_bound, parallelism: threads };
            let report = verify_ample(n, &config).map_err(|e| match e {
                VerifyError::ResourceLimit { .. } => Failure { code: RESOURCE_LIMIT, message: e.to_string() },
                _ => Failure::usage(e),
            })?;
            if json {
                println!("{}", report.to_json());
            } else {
                println!("ampleness check for a_0..a_{n}");
                for c in &report.clauses {
                    let status = serde_json::to_value(c.status).unwrap();
                    let bound = c.bound.map(|b| format!(", oracle bound {b}")).unwrap_or_default();
                    println!("clause {}: {} [{} ms{}]", c.id, status.as_str().unwrap(), c.millis, bound);
                    println!("    {}", c.method);
                }
                let overall = serde_json::to_value(report.overall).unwrap();
                println!("overall: {}", overall.as_str().unwrap());
            }
            if !report.passed() {
                return Ok(CHECK_FAILED);
            }
        }
    }
    Ok(PASS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { PASS });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
