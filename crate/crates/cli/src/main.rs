use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dtst_cli::{cmd_compare, cmd_process, validate, RunConfig};
use dtst_core::attention::Heuristic;

#[derive(Parser)]
#[command(
    name = "dtst",
    version,
    about = "Plan-based speech act disambiguation for scheduling dialogues"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Annotate dialogues with one heuristic.
    Process {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "extended")]
        heuristic: Heuristic,
        /// Also write an indented dump of each plan tree.
        #[arg(long)]
        dump_tree: bool,
        /// Output directory; annotated records go to stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Score both heuristics against gold annotations.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Directory holding `<name>.gold.jsonl` files.
        #[arg(long)]
        gold: Option<PathBuf>,
        /// Write the report here as well as to stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Dialogue files (line-delimited JSON). The bundled corpus is used when none are given.
    inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Plan library JSON; defaults to the shipped library.
    #[arg(long)]
    plan_library: Option<PathBuf>,
    /// Matching rules JSON; defaults to the shipped rules.
    #[arg(long)]
    rules: Option<PathBuf>,
}

impl Common {
    fn into_config(self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            plan_library: self.plan_library,
            rules: self.rules,
            inputs: self.inputs,
            ..RunConfig::default()
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Process {
            common,
            heuristic,
            dump_tree,
            output,
        } => {
            let config = RunConfig {
                heuristic,
                dump_tree,
                output,
                ..common.into_config()
            };
            validate(&config)?;
            let files = cmd_process(&config)?;
            if config.output.is_none() {
                for f in files.iter().filter(|f| f.name.ends_with(".jsonl")) {
                    stdout.write_all(f.contents.as_bytes())?;
                }
                for f in files.iter().filter(|f| !f.name.ends_with(".jsonl")) {
                    stdout.write_all(f.contents.as_bytes())?;
                }
            }
        }
        Command::Compare {
            common,
            gold,
            report,
        } => {
            let config = RunConfig {
                gold,
                report,
                ..common.into_config()
            };
            validate(&config)?;
            stdout.write_all(cmd_compare(&config)?.as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
