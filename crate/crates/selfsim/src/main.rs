use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};
use std::process;

use clap::{Parser, Subcommand};
use selfsim::ast::{Command, ContextAst, Located, Script, Statement};
use selfsim::{CliError, ExitCode, Format, Options};

#[derive(Parser)]
#[command(name = "selfsim", version, about = "Abelian self-similar groups of tree automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Tree degree; overrides the script's context.
    #[arg(long, global = true)]
    m: Option<u32>,
    /// Digit precision of m-adic coefficients.
    #[arg(long = "K", global = true)]
    k: Option<usize>,
    /// Degree bound of power series.
    #[arg(long = "D", global = true)]
    d: Option<usize>,
    /// Portrait depth.
    #[arg(long = "L", global = true)]
    l: Option<usize>,
    /// Human-readable output.
    #[arg(long, global = true, conflicts_with = "json")]
    pretty: bool,
    /// JSON Lines output (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Portraits as Graphviz DOT.
    #[arg(long, global = true)]
    dot: bool,
    /// Cap on interned portrait nodes.
    #[arg(long, global = true, env = "SELFSIM_CACHE_SIZE")]
    cache_size: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a script file ("-" reads standard input).
    Run { script: PathBuf },
    /// Run a built-in suite: example1, example2, example3, adding, quotient,
    /// transversal-change, uniform-gap, self-power, exponent-law, portrait-oracle or all.
    Verify { suite: String },
}

fn main() {
    let cli = Cli::parse();
    let code = match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("selfsim: {e}");
            e.exit_code()
        }
    };
    process::exit(code as i32);
}

fn execute(cli: &Cli) -> Result<ExitCode, CliError> {
    let (script, base_dir) = match &cli.command {
        Cmd::Run { script } => {
            let text = if script == Path::new("-") {
                io::read_to_string(io::stdin())
            } else {
                std::fs::read_to_string(script)
            }
            .map_err(|e| CliError::Io(format!("{}: {e}", script.display())))?;
            let dir = script.parent().map(Path::to_path_buf).unwrap_or_default();
            (selfsim::parse(&text)?, dir)
        }
        Cmd::Verify { suite } => {
            let statement = Statement::Command(Command::Verify { suite: suite.clone() });
            (Script { statements: vec![Located { line: 1, statement }] }, PathBuf::new())
        }
    };
    let opts = Options {
        context: ContextAst { m: cli.m, k: cli.k, d: cli.d, l: cli.l },
        format: if cli.pretty { Format::Pretty } else { Format::Json },
        dot: cli.dot,
        node_cap: cli.cache_size,
        base_dir,
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let summary = selfsim::run(&script, &opts, &mut out)?;
    if summary.failures.is_empty() {
        Ok(ExitCode::Ok)
    } else {
        for f in &summary.failures {
            eprintln!("selfsim: failed: {f}");
        }
        Ok(ExitCode::Failed)
    }
}
