use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use interaction_nfa::bench::{bench_lock, BenchError, BenchOptions};
use interaction_nfa::interaction::Action;
use interaction_nfa::model::locks::{lock_model, LockSpec, Scheduling, Topology};
use interaction_nfa::model::{parse_model, print_model, Model};
use interaction_nfa::nfa::{
    determinize, equivalent, minimize_dfa, MinimizeAlgorithm, Mode, Nfa, NfaError,
};
use interaction_nfa::trace::{
    analyze_interaction, gen_accepted, gen_errors, parse_trace_file, write_trace_file, GenError,
    Method, NfaAnalyzer, Outcome, DEFAULT_ERROR_ATTEMPTS,
};
use interaction_nfa::translate::{build_nfa, compo, CompoError, TranslateError, DEFAULT_STATE_CAP};

#[derive(Parser)]
#[command(
    name = "intnfa",
    version,
    about = "Interaction models to NFA, and trace analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CapArg {
    /// Maximum number of automaton states to build.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a model and report its size.
    Validate { model: PathBuf },
    /// Build the automaton of a model.
    Generate {
        model: PathBuf,
        /// Do not simplify reachable terms.
        #[arg(long)]
        raw: bool,
        /// Write a Graphviz rendering.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
        /// Write one `id<TAB>term` line per state.
        #[arg(long, value_name = "FILE")]
        states_dump: Option<PathBuf>,
        /// Write a JSON stats record.
        #[arg(long, value_name = "FILE")]
        stats: Option<PathBuf>,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Determinize and minimize the simplified automaton.
    Mindfa {
        model: PathBuf,
        #[arg(long, default_value = "hopcroft")]
        algo: MinimizeAlgorithm,
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Compositional translation.
    Compo {
        model: PathBuf,
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Analyze every trace of a trace file; prints JSON lines.
    Analyze {
        model: PathBuf,
        traces: PathBuf,
        #[arg(long, default_value = "nfa")]
        method: Method,
        #[arg(long, default_value = "exact")]
        mode: Mode,
        /// Per-trace timeout in seconds.
        #[arg(long, default_value_t = 10.0)]
        timeout: f64,
    },
    /// Generate accepted traces and error traces.
    Gentraces {
        model: PathBuf,
        #[arg(long, default_value_t = 10)]
        accepted: usize,
        #[arg(long, default_value_t = 10)]
        errors: usize,
        #[arg(long, default_value_t = 1)]
        min_len: usize,
        #[arg(long, default_value_t = 20)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Mode in which error traces must fail.
        #[arg(long, default_value = "prefix")]
        mode: Mode,
        /// Write accepted traces here instead of standard output.
        #[arg(long, value_name = "FILE")]
        accepted_out: Option<PathBuf>,
        /// Write error traces here instead of standard output.
        #[arg(long, value_name = "FILE")]
        errors_out: Option<PathBuf>,
    },
    /// Language equivalence of two models over the same signature.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Benchmarks.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Digital lock networks; prints one JSON row.
    Locks {
        /// chain:N, diamond4 or diamond8.
        #[arg(long, default_value = "chain:1")]
        topology: Topology,
        /// Strict and interleaved scheduling between locks.
        #[arg(long)]
        sp: bool,
        /// Cap for the unsimplified exploration.
        #[arg(long, default_value_t = 200_000)]
        raw_cap: usize,
        /// Also write the generated model.
        #[arg(long, value_name = "FILE")]
        model_out: Option<PathBuf>,
    },
}

enum CliError {
    Input(String),
    Resource(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<TranslateError> for CliError {
    fn from(e: TranslateError) -> Self {
        match e {
            TranslateError::StateCapExceeded { .. } => CliError::Resource(e.to_string()),
            TranslateError::InvalidTerm => CliError::Input(e.to_string()),
        }
    }
}

impl From<NfaError> for CliError {
    fn from(e: NfaError) -> Self {
        match e {
            NfaError::StateCapExceeded { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<CompoError> for CliError {
    fn from(e: CompoError) -> Self {
        match e {
            CompoError::Translate(e) => e.into(),
            CompoError::Nfa(e) => e.into(),
            e @ CompoError::UnsupportedScope { .. } => CliError::Input(e.to_string()),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Translate(e) => e.into(),
            BenchError::Compo(e) => e.into(),
            BenchError::Nfa(e) => e.into(),
        }
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::Input(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Model> {
    parse_model(&read(path)?).map_err(|e| CliError::Input(format!("{}:{e}", path.display())))
}

fn dot(model: &Model, nfa: &Nfa<Action>) -> String {
    nfa.to_dot(|a| model.signature.action_name(*a))
}

fn nfa_s(model: &Model, cap: usize) -> Result<Nfa<Action>> {
    Ok(build_nfa(&model.signature, &model.interaction, true, cap)?.nfa)
}

fn run(cli: Cli, out: &mut impl Write) -> Result<u8> {
    let io = |e: std::io::Error| CliError::Input(e.to_string());
    match cli.command {
        Command::Validate { model } => {
            let m = load(&model)?;
            writeln!(
                out,
                "ok: {} lifelines, {} messages, {} nodes",
                m.signature.lifelines().len(),
                m.signature.messages().len(),
                m.interaction.node_count()
            )
            .map_err(io)?;
        }
        Command::Generate {
            model,
            raw,
            dot: dot_path,
            states_dump,
            stats,
            cap,
        } => {
            let m = load(&model)?;
            let start = Instant::now();
            let t = build_nfa(&m.signature, &m.interaction, !raw, cap.cap)?;
            let elapsed = start.elapsed();
            writeln!(out, "states: {}", t.nfa.num_states()).map_err(io)?;
            writeln!(out, "transitions: {}", t.nfa.num_transitions()).map_err(io)?;
            if let Some(p) = dot_path {
                write(&p, &dot(&m, &t.nfa))?;
            }
            if let Some(p) = states_dump {
                write(&p, &t.index.dump(&m.signature))?;
            }
            if let Some(p) = stats {
                let json = serde_json::to_string(&t.nfa.stats(elapsed)).expect("serializable");
                write(&p, &(json + "\n"))?;
            }
        }
        Command::Mindfa {
            model,
            algo,
            dot: dot_path,
            cap,
        } => {
            let m = load(&model)?;
            let nfa = nfa_s(&m, cap.cap)?;
            let min = minimize_dfa(&determinize(&nfa, cap.cap)?, algo, cap.cap)?;
            writeln!(out, "states: {}", min.num_states()).map_err(io)?;
            if let Some(p) = dot_path {
                write(&p, &dot(&m, min.as_nfa()))?;
            }
        }
        Command::Compo {
            model,
            dot: dot_path,
        } => {
            let m = load(&model)?;
            let c = compo(&m.signature, &m.interaction)?;
            writeln!(out, "states: {}", c.num_states()).map_err(io)?;
            if let Some(p) = dot_path {
                write(&p, &dot(&m, &c))?;
            }
        }
        Command::Analyze {
            model,
            traces,
            method,
            mode,
            timeout,
        } => {
            let m = load(&model)?;
            let traces = parse_trace_file(&m.signature, &read(&traces)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", traces.display())))?;
            let timeout = Some(Duration::from_secs_f64(timeout.max(0.0)));
            let analyzer = match method {
                Method::Nfa => Some(NfaAnalyzer::new(&nfa_s(&m, DEFAULT_STATE_CAP)?)),
                Method::Interaction => None,
            };
            let (mut fails, mut timeouts) = (0, 0);
            for (index, t) in traces.iter().enumerate() {
                let verdict = match &analyzer {
                    Some(a) => a.analyze(t, mode, timeout),
                    None => analyze_interaction(&m.signature, &m.interaction, t, mode, timeout),
                }
                .map_err(|e| CliError::Input(format!("trace {index}: {e}")))?;
                match verdict.outcome {
                    Outcome::Pass => {}
                    Outcome::Fail => fails += 1,
                    Outcome::Timeout => timeouts += 1,
                }
                let line = serde_json::to_string(&verdict.record(index)).expect("serializable");
                writeln!(out, "{line}").map_err(io)?;
            }
            return Ok(if fails > 0 {
                1
            } else if timeouts > 0 {
                3
            } else {
                0
            });
        }
        Command::Gentraces {
            model,
            accepted,
            errors,
            min_len,
            max_len,
            seed,
            mode,
            accepted_out,
            errors_out,
        } => {
            if min_len > max_len {
                return Err(CliError::Input("--min-len exceeds --max-len".into()));
            }
            let m = load(&model)?;
            let nfa = nfa_s(&m, DEFAULT_STATE_CAP)?;
            let acc = gen_accepted(&nfa, accepted.max(errors), min_len, max_len, seed)?;
            let err = gen_errors(&nfa, &acc[..errors], mode, seed, DEFAULT_ERROR_ATTEMPTS)?;
            let acc_text = write_trace_file(&m.signature, &acc[..accepted]);
            let err_text = write_trace_file(&m.signature, &err);
            match accepted_out {
                Some(p) => write(&p, &acc_text)?,
                None => write!(out, "# accepted\n{acc_text}").map_err(io)?,
            }
            match errors_out {
                Some(p) => write(&p, &err_text)?,
                None => write!(out, "# errors\n{err_text}").map_err(io)?,
            }
        }
        Command::Equiv { a, b, cap } => {
            let (ma, mb) = (load(&a)?, load(&b)?);
            if ma.signature.alphabet() != mb.signature.alphabet() {
                return Err(CliError::Input("models have different signatures".into()));
            }
            let same = equivalent(&nfa_s(&ma, cap.cap)?, &nfa_s(&mb, cap.cap)?, cap.cap)?;
            writeln!(
                out,
                "{}",
                if same { "equivalent" } else { "not equivalent" }
            )
            .map_err(io)?;
            return Ok(if same { 0 } else { 1 });
        }
        Command::Bench(BenchCommand::Locks {
            topology,
            sp,
            raw_cap,
            model_out,
        }) => {
            let scheduling = if sp {
                Scheduling::StrictAndPar
            } else {
                Scheduling::Seq
            };
            let options = BenchOptions {
                raw_cap,
                ..BenchOptions::default()
            };
            if let Some(p) = model_out {
                write(
                    &p,
                    &print_model(&lock_model(&LockSpec::new(topology, scheduling))),
                )?;
            }
            let row = bench_lock(topology, scheduling, &options)?;
            let line = serde_json::to_string(&row).expect("serializable");
            writeln!(out, "{line}").map_err(io)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let (CliError::Input(msg) | CliError::Resource(msg)) = &e;
            eprintln!("error: {msg}");
            ExitCode::from(e.code())
        }
    }
}
