mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use minsynth::compile::Pipeline;
use minsynth::symbolic::Prune;

/// Compile LTLf formulas to minimal DFAs and synthesize controllers.
#[derive(Debug, Parser)]
#[command(name = "minsynth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a formula to its minimal DFA.
    Compile {
        #[command(flatten)]
        formula: FormulaSource,
        /// Alphabet of the DFA; defaults to the formula's atoms.
        #[arg(long, value_delimiter = ',')]
        props: Option<Vec<String>>,
        #[arg(long, default_value = "hopcroft")]
        pipeline: Pipeline,
        /// DFA text output; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Graphviz output.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Decide realizability and write a strategy when realizable.
    Synthesize {
        #[command(flatten)]
        formula: FormulaSource,
        /// Environment propositions, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "")]
        inputs: Vec<String>,
        /// System propositions, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "")]
        outputs: Vec<String>,
        #[arg(long, default_value = "brz-symbolic")]
        pipeline: Pipeline,
        #[arg(long, default_value = "restrict")]
        prune: Prune,
        /// Strategy file output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Compare a DFA file with the formula semantics on all short traces.
    Check {
        #[command(flatten)]
        formula: FormulaSource,
        #[arg(long)]
        dfa: PathBuf,
        #[arg(long, default_value_t = 5)]
        maxlen: usize,
    },
    /// Run the benchmark harness and write its CSV.
    Bench {
        /// Families to generate: kv, random, or all.
        #[arg(long, default_value = "all")]
        family: String,
        /// Number of random instances.
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Propositions per random instance.
        #[arg(long, default_value_t = 3)]
        nprops: usize,
        #[arg(long, default_value_t = 10)]
        max_connectives: usize,
        /// Largest KV parameter.
        #[arg(long, default_value_t = 3)]
        kv_max: usize,
        /// Extra instances, one `formula [; inputs ; outputs]` per line.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "hopcroft,brz-explicit,brz-symbolic")]
        pipelines: Vec<Pipeline>,
        #[arg(long, default_value = "restrict")]
        prune: Prune,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Step a strategy against input assignments, one line per step.
    Play {
        #[arg(long)]
        strategy: PathBuf,
        /// Input lines (names of the true inputs); stdin when omitted.
        #[arg(long)]
        inputs: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct FormulaSource {
    /// Formula text.
    #[arg(short = 'f', long = "formula")]
    text: Option<String>,
    /// File holding the formula.
    #[arg(long = "formula-file")]
    file: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Copy)]
struct Limits {
    /// Wall-clock limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Explicit state cap; overrides MINSYNTH_STATE_CAP.
    #[arg(long)]
    state_cap: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
