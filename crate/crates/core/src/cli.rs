//! The `blockgame` command-line front end. Every command prints one pretty
//! JSON document; failures go to stderr and map onto the exit codes of
//! [`Error::exit_code`].

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{disjointify, IndexSet};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::game::{
    enumerate_net_in_span, play, replay, solve_bounded, GameMode, GameTranscript, Position,
    StrategyII,
};
use crate::net::{covering_sequence, enumerate_net_below, round_to_net, verify_covering};
use crate::vector::{BlockVector, FiniteBlockSequence};
use crate::verify::run_suite;

pub const CONFIG_ENV: &str = "BLOCKGAME_CONFIG";

#[derive(Debug, Parser)]
#[command(
    name = "blockgame",
    version,
    about = "Exact dyadic nets and bounded block-sequence games"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Run configuration (JSON); falls back to $BLOCKGAME_CONFIG.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the configured horizon.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlayMode {
    Scripted,
    Interactive,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the net elements supported in [0, N).
    NetEnum { n: usize },
    /// Round a vector onto the net inside the span of a board.
    Round {
        #[arg(long)]
        vector: PathBuf,
        #[arg(long)]
        board: PathBuf,
    },
    /// Round a block subsequence of the paired board back onto the board.
    Cover {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        board: PathBuf,
    },
    /// Play one game from the configuration.
    Play {
        #[arg(long, value_enum, default_value_t = PlayMode::Scripted)]
        mode: PlayMode,
    },
    /// Re-run a transcript through the engine.
    Replay {
        #[arg(long)]
        transcript: PathBuf,
    },
    /// Decide the configured game with player I restricted to the menu.
    Solve,
    /// Run a seeded property suite.
    Verify {
        suite: String,
        #[arg(long)]
        cases: Option<usize>,
    },
    /// Build the interval partition for a tuple of subsets of N.
    Disjointify {
        #[arg(long)]
        input: PathBuf,
    },
}

/// Input of `disjointify`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisjointifyInput {
    pub k: usize,
    pub sets: Vec<IndexSet>,
}

#[derive(Serialize)]
struct NetListing {
    n: usize,
    count: usize,
    vectors: Vec<BlockVector>,
}

#[derive(Serialize)]
struct CoverOutput {
    rounded: FiniteBlockSequence,
    certificate: crate::net::CoveringCertificate,
    pass: bool,
}

#[derive(Serialize)]
struct StrategyEntry<'a> {
    picks: &'a [BlockVector],
    menu_index: usize,
    reply: &'a BlockVector,
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    accepts: bool,
    positions: usize,
    refutation: Option<usize>,
    strategy: Option<Vec<StrategyEntry<'a>>>,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 64 } else { 0 };
        }
    };
    match execute(&cli, stdin, stderr) {
        Ok((json, code)) => match emit(&cli.global, &json, stdout) {
            Ok(()) => code,
            Err(e) => report(&e, stderr),
        },
        Err(e) => report(&e, stderr),
    }
}

fn report(e: &Error, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "error: {e}");
    e.exit_code()
}

fn emit(global: &GlobalArgs, json: &str, stdout: &mut dyn Write) -> Result<()> {
    match &global.out {
        Some(path) => std::fs::write(path, format!("{json}\n"))?,
        None => writeln!(stdout, "{json}")?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// The configuration from `--config`, else `$BLOCKGAME_CONFIG`, else the
/// defaults, with the command-line overrides applied.
pub fn load_config(global: &GlobalArgs) -> Result<RunConfig> {
    let path = global
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut cfg = match path {
        Some(p) => RunConfig::load(&p)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    if let Some(h) = global.horizon {
        cfg.horizon = h;
    }
    Ok(cfg)
}

fn execute(cli: &Cli, stdin: &mut dyn BufRead, stderr: &mut dyn Write) -> Result<(String, i32)> {
    let cfg = load_config(&cli.global)?;
    match &cli.command {
        Command::NetEnum { n } => {
            if *n == 0 {
                return Err(Error::Usage("net-enum needs N ≥ 1".into()));
            }
            let vectors = enumerate_net_below(*n, &cfg.net)?;
            Ok((
                to_json(&NetListing {
                    n: *n,
                    count: vectors.len(),
                    vectors,
                })?,
                0,
            ))
        }
        Command::Round { vector, board } => {
            let w: BlockVector = read_json(vector)?;
            let board: FiniteBlockSequence = read_json(board)?;
            let r = round_to_net(&w, &board, &cfg.net)?;
            Ok((to_json(&r)?, if r.pass { 0 } else { 3 }))
        }
        Command::Cover { input, board } => {
            let u: FiniteBlockSequence = read_json(input)?;
            let board: FiniteBlockSequence = read_json(board)?;
            let z = covering_sequence(&board);
            let (rounded, certificate) = verify_covering(&u, &z, &board, &cfg.net)?;
            let pass = certificate.pass();
            Ok((
                to_json(&CoverOutput {
                    rounded,
                    certificate,
                    pass,
                })?,
                if pass { 0 } else { 3 },
            ))
        }
        Command::Play { mode } => {
            let board = cfg.board();
            let mut strat_i = cfg.strategy_i();
            let mut strat_ii: Box<dyn StrategyII + '_> = match mode {
                PlayMode::Scripted => cfg.strategy_ii(),
                PlayMode::Interactive => Box::new(Interactive::new(stdin, stderr)),
            };
            let t = play(
                cfg.mode,
                &board,
                &cfg.prefix,
                cfg.horizon,
                &mut strat_i,
                &mut strat_ii,
                &cfg.family,
                &cfg.net,
            )?;
            Ok((to_json(&t)?, 0))
        }
        Command::Replay { transcript } => {
            let recorded: GameTranscript = read_json(transcript)?;
            let again = replay(&recorded, cfg.mode, &cfg.family, &cfg.net)?;
            if again.verdict != recorded.verdict {
                return Err(Error::certification(
                    "replayed verdict",
                    format!("{:?}", again.verdict),
                    format!("{:?}", recorded.verdict),
                ));
            }
            Ok((to_json(&again)?, 0))
        }
        Command::Solve => {
            let out = solve_bounded(
                &cfg.board(),
                &cfg.prefix,
                cfg.horizon,
                &cfg.menu(),
                &cfg.family,
                &cfg.net,
            )?;
            let strategy = out.strategy.as_ref().map(|s| {
                s.entries()
                    .into_iter()
                    .map(|(picks, menu_index, reply)| StrategyEntry {
                        picks,
                        menu_index,
                        reply,
                    })
                    .collect()
            });
            Ok((
                to_json(&SolveOutput {
                    accepts: out.accepts,
                    positions: out.positions,
                    refutation: out.refutation,
                    strategy,
                })?,
                0,
            ))
        }
        Command::Verify { suite, cases } => {
            let report = run_suite(suite, *cases, cfg.seed)?;
            Ok((to_json(&report)?, if report.pass() { 0 } else { 3 }))
        }
        Command::Disjointify { input } => {
            let input: DisjointifyInput = read_json(input)?;
            let p = disjointify(&input.sets, input.k)?;
            Ok((to_json(&p)?, 0))
        }
    }
}

/// Player II driven by a human: lists the legal replies on `prompt` and
/// reads an index from `input`. Indices may be separated by commas,
/// whitespace or newlines, so `0,0,0` can be piped in at once.
pub struct Interactive<'a> {
    input: &'a mut dyn BufRead,
    prompt: &'a mut dyn Write,
    pending: std::collections::VecDeque<String>,
}

impl<'a> Interactive<'a> {
    pub fn new(input: &'a mut dyn BufRead, prompt: &'a mut dyn Write) -> Self {
        Interactive {
            input,
            prompt,
            pending: Default::default(),
        }
    }

    fn next_token(&mut self) -> Result<String> {
        while self.pending.is_empty() {
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                return Err(Error::Precondition(
                    "input ended before the game did".into(),
                ));
            }
            self.pending.extend(
                line.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(str::to_string),
            );
        }
        Ok(self.pending.pop_front().expect("nonempty"))
    }
}

impl StrategyII for Interactive<'_> {
    fn respond(&mut self, pos: &Position<'_>, offer: &FiniteBlockSequence) -> Result<BlockVector> {
        let options = match pos.mode {
            GameMode::Discrete => enumerate_net_in_span(offer, pos.last(), pos.cfg)?,
            GameMode::Continuous => {
                return Err(Error::Usage(
                    "interactive play lists net replies and needs mode \"discrete\"".into(),
                ))
            }
        };
        writeln!(self.prompt, "round {}: player I offers {offer}", pos.round)?;
        for (i, o) in options.iter().enumerate() {
            writeln!(self.prompt, "  [{i}] {o}")?;
        }
        loop {
            write!(self.prompt, "choice> ")?;
            self.prompt.flush()?;
            let token = self.next_token()?;
            match token.parse::<usize>() {
                Ok(i) if i < options.len() => return Ok(options[i].clone()),
                _ => writeln!(self.prompt, "expected an index below {}", options.len())?,
            }
        }
    }
}
