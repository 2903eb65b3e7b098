//! `ruletree`: inspect rule systems, build and check decision trees.
//!
//! Exit codes: 0 ok, 1 other errors, 2 unreadable input, 3 tree does not
//! solve the problem, 4 search or enumeration cap hit, 5 audit failures.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use ruletree::audit::{run_audit, AuditConfig};
use ruletree::bounds::{class_bounds, BoundQuery, Extremum};
use ruletree::cover::min_node_cover;
use ruletree::dsl::{parse_assignment, parse_system, to_dsl};
use ruletree::generators::{gen_family, Family, FamilySpec};
use ruletree::solver::{min_depth, SolveLimits};
use ruletree::surgery::restrict_tree;
use ruletree::tree_io::{to_dot, tree_from_json, tree_to_json};
use ruletree::verify::{verify, Verdict};
use ruletree::{Error, Mode, ProblemKind, Restriction, RuleSystem};

#[derive(Parser)]
#[command(
    name = "ruletree",
    version,
    about = "Decision rule systems and minimum-depth decision trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sr,
    Ad,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Sr => Mode::Sr,
            ModeArg::Ad => Mode::Ad,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print n, d, k, the decision set, the node cover number and completeness.
    Params { system: PathBuf },
    /// Print the maximal reduced subsystem.
    Reduce {
        #[arg(long, value_enum)]
        mode: ModeArg,
        system: PathBuf,
    },
    /// Print the core subsystem built around rules with empty left-hand side.
    Core {
        #[arg(long, value_enum)]
        mode: ModeArg,
        system: PathBuf,
    },
    /// Print S_α; with --tree, also restrict a tree to it.
    Restrict {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        system: PathBuf,
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long, requires = "tree")]
        out_tree: Option<PathBuf>,
    },
    /// Whether every tuple leaves some rule consistent.
    Complete { system: PathBuf },
    /// A minimum node cover of the attribute hypergraph.
    Cover { system: PathBuf },
    /// Minimum depth of a tree solving a problem, with an optimal tree.
    Solve {
        #[arg(long)]
        problem: ProblemKind,
        system: PathBuf,
        #[arg(long)]
        out_tree: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000_000)]
        max_states: usize,
        /// Seconds.
        #[arg(long, default_value_t = 60)]
        timeout: u64,
    },
    /// Check that a tree file solves a problem for a system.
    Verify {
        #[arg(long)]
        problem: ProblemKind,
        system: PathBuf,
        tree: PathBuf,
    },
    /// Print a generated system; --trees DIR also writes its certified trees.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trees: Option<PathBuf>,
    },
    /// Bounds on the least or greatest depth over a parameter class.
    Bounds {
        #[arg(long)]
        problem: ProblemKind,
        /// Least depth over the class.
        #[arg(long, conflicts_with = "max", required_unless_present = "max")]
        min: bool,
        /// Greatest depth over the class.
        #[arg(long)]
        max: bool,
        /// Only reduced systems.
        #[arg(long)]
        reduced: bool,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
    },
    /// Cross-check solver, generators and bounds.
    Audit {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        max_k: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated; all six by default.
        #[arg(long, value_delimiter = ',')]
        problems: Vec<ProblemKind>,
        #[arg(long)]
        exhaustive_tiny: bool,
    },
}

struct Exit {
    code: u8,
    message: String,
}

impl Exit {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Exit {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. }
            | Error::DuplicateAttribute { .. }
            | Error::EmptySystem
            | Error::TreeFormat(_)
            | Error::DigestMismatch { .. } => 2,
            Error::NotSolving { .. } => 3,
            Error::CapExceeded { .. } | Error::EnumerationCap { .. } | Error::SizeCap { .. } => 4,
            _ => 1,
        };
        Exit::new(code, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| Exit::new(2, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Exit> {
    fs::write(path, text).map_err(|e| Exit::new(1, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<RuleSystem, Exit> {
    parse_system(&read(path)?).map_err(|e| {
        let mut exit = Exit::from(e);
        exit.message = format!("{}:{}", path.display(), exit.message);
        exit
    })
}

fn braces<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let items: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn run(cli: Cli) -> Result<(), Exit> {
    match cli.command {
        Command::Params { system } => {
            let s = load(&system)?;
            let (n, d, k) = s.profile().params();
            println!("n={n} d={d} k={k} D={}", braces(&s.profile().decisions));
            match min_node_cover(&s) {
                Ok(cover) => println!("β={}", cover.len()),
                Err(e) => println!("β=unknown ({e})"),
            }
            match s.is_complete() {
                Ok(c) => println!("complete={c}"),
                Err(e) => println!("complete=unknown ({e})"),
            }
        }
        Command::Reduce { mode, system } => {
            print!("{}", to_dsl(&load(&system)?.reduce(mode.into())))
        }
        Command::Core { mode, system } => {
            print!("{}", to_dsl(&load(&system)?.core_subsystem(mode.into())))
        }
        Command::Restrict {
            alpha,
            system,
            tree,
            out_tree,
        } => {
            let s = load(&system)?;
            let alpha = parse_assignment(&alpha)?;
            let Some(tree) = tree else {
                match s.restrict(&alpha)? {
                    Restriction::Empty => return Err(Error::EmptyRestriction.into()),
                    Restriction::Rules { system, .. } => print!("{}", to_dsl(&system)),
                }
                return Ok(());
            };
            let tree = tree_from_json(&read(&tree)?, &s)?;
            let out = restrict_tree(&tree, &alpha, &s)?;
            print!("{}", to_dsl(&out.system));
            if let Some(path) = out_tree {
                write(&path, &tree_to_json(&out.tree, &out.system))?;
            }
        }
        Command::Complete { system } => println!("complete={}", load(&system)?.is_complete()?),
        Command::Cover { system } => {
            let cover = min_node_cover(&load(&system)?)?;
            println!("β={} cover={}", cover.len(), braces(&cover));
        }
        Command::Solve {
            problem,
            system,
            out_tree,
            dot,
            max_states,
            timeout,
        } => {
            let s = load(&system)?;
            let limits = SolveLimits {
                max_states,
                timeout: Duration::from_secs(timeout),
            };
            let r = min_depth(&s, problem, limits)?;
            log::info!(
                "{} states, {} memo hits, {:.1?}",
                r.stats.states,
                r.stats.memo_hits,
                r.stats.elapsed
            );
            println!("h={}", r.depth);
            if let Some(path) = out_tree {
                write(&path, &tree_to_json(&r.tree, &s))?;
            }
            if let Some(path) = dot {
                write(&path, &to_dot(&r.tree))?;
            }
        }
        Command::Verify {
            problem,
            system,
            tree,
        } => {
            let s = load(&system)?;
            let t = tree_from_json(&read(&tree)?, &s)?;
            match verify(&t, &s, problem)? {
                Verdict::Solves => println!("solves {problem}, depth {}", t.depth()),
                Verdict::Fails(c) => {
                    return Err(Exit::new(3, format!("does not solve {problem}: {c}")))
                }
            }
        }
        Command::Gen {
            family,
            n,
            d,
            k,
            seed,
            trees,
        } => {
            let g = gen_family(&FamilySpec {
                family,
                n,
                d,
                k,
                seed,
            })?;
            print!("{}", to_dsl(&g.system));
            if let Some(dir) = trees {
                fs::create_dir_all(&dir)
                    .map_err(|e| Exit::new(1, format!("{}: {e}", dir.display())))?;
                for (p, t) in &g.certified {
                    write(&dir.join(format!("{p}.json")), &tree_to_json(t, &g.system))?;
                }
            }
        }
        Command::Bounds {
            problem,
            min,
            max: _,
            reduced,
            n,
            d,
            k,
        } => {
            let extremum = if min { Extremum::Min } else { Extremum::Max };
            let b = class_bounds(&BoundQuery {
                problem,
                reduced,
                extremum,
                n,
                d,
                k,
            })?;
            println!("{b}");
        }
        Command::Audit {
            max_n,
            max_k,
            trials,
            seed,
            problems,
            exhaustive_tiny,
        } => {
            let config = AuditConfig {
                max_n,
                max_k,
                trials,
                seed,
                problems: if problems.is_empty() {
                    ProblemKind::ALL.to_vec()
                } else {
                    problems
                },
                exhaustive_tiny,
                ..AuditConfig::default()
            };
            let report = run_audit(&config);
            print!("{report}");
            if !report.is_clean() {
                return Err(Exit::new(
                    5,
                    format!("{} audit checks failed", report.failed()),
                ));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("RULETREE_LOG")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(exit) => {
            eprintln!("error: {}", exit.message);
            ExitCode::from(exit.code)
        }
    }
}
