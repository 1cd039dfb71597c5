mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::CliError;

#[derive(Parser)]
#[command(name = "decmin", version, about = "Decreasingly-minimal elements of M-convex sets, orientations and flows")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dec-min element of the base set of a set function given as a JSON table.
    Decmin {
        pfile: PathBuf,
        /// Box file, `i lo hi` per line.
        #[arg(long = "box")]
        boxfile: Option<PathBuf>,
    },
    /// Dec-min orientation of an undirected graph.
    Orient(OrientArgs),
    /// Dec-min semi-matching of a bipartite graph.
    Semimatch(SemiArgs),
    /// Flow feasibility and discrete Megiddo flows.
    Flow {
        #[command(subcommand)]
        which: FlowCommand,
    },
    /// Runs a solver and compares it with exhaustive enumeration.
    Verify(VerifyArgs),
}

#[derive(Args)]
pub struct OrientArgs {
    pub graph: PathBuf,
    /// In-degree bounds, `v f g` per line.
    #[arg(long)]
    pub bounds: Option<PathBuf>,
    /// Strongly connected orientations.
    #[arg(long, conflicts_with_all = ["k", "cheapest", "capacitated"])]
    pub strong: bool,
    /// (k,l)-edge-connected orientations: in-degree at least k into root-free sets.
    #[arg(long, requires = "l", conflicts_with_all = ["cheapest", "capacitated"])]
    pub k: Option<i64>,
    /// In-degree at least l into proper sets containing the root.
    #[arg(long, requires = "k")]
    pub l: Option<i64>,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    /// Report the cost of the orientation from the graph file's cost columns.
    #[arg(long)]
    pub cost: bool,
    /// Report the canonical chain, partition and values.
    #[arg(long)]
    pub canonical: bool,
    /// Cheapest dec-min orientation with respect to the file's costs.
    #[arg(long, conflicts_with = "capacitated")]
    pub cheapest: bool,
    /// Treat the multiplicity column as edge capacities.
    #[arg(long)]
    pub capacitated: bool,
}

#[derive(Args)]
pub struct SemiArgs {
    pub graph: PathBuf,
    /// Nodes of the side S, comma separated.
    #[arg(long = "s", value_delimiter = ',', required = true)]
    pub s_nodes: Vec<usize>,
    #[arg(long, value_enum, default_value = "unit")]
    pub variant: Variant,
    /// Degree specification on T, one entry per node, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub mt: Option<Vec<i64>>,
    #[arg(long)]
    pub bounds: Option<PathBuf>,
    #[arg(long)]
    pub gamma: Option<i64>,
    /// Cheapest dec-min solution; edge cost is the first cost column.
    #[arg(long)]
    pub min_cost: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
pub enum Variant {
    Unit,
    Spec,
    Bounded,
    FixedSize,
    Capacitated,
}

#[derive(Subcommand)]
enum FlowCommand {
    /// A flow within the arc bounds with net in-flow m, or a violating set.
    Feasible {
        digraph: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        m: Vec<i64>,
    },
    /// Flow of amount M from S to T with inc-max net in-flow on S; upper bounds are capacities.
    Megiddo {
        digraph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sources: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        sinks: Vec<usize>,
        #[arg(long)]
        amount: i64,
    },
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Graph file, mixed graph file (with --mixed) or set-function JSON (`.json`).
    pub instance: PathBuf,
    #[arg(long)]
    pub mixed: bool,
    #[arg(long)]
    pub strong: bool,
    /// For mixed graphs: compare in-degrees from the undirected part only.
    #[arg(long)]
    pub free_part: bool,
    #[arg(long)]
    pub bounds: Option<PathBuf>,
    #[arg(long = "box")]
    pub boxfile: Option<PathBuf>,
}

fn run(cli: &Cli) -> Result<report::Report, CliError> {
    match &cli.command {
        Command::Decmin { pfile, boxfile } => commands::decmin(pfile, boxfile.as_deref()),
        Command::Orient(a) => commands::orient(a),
        Command::Semimatch(a) => commands::semimatch(a),
        Command::Flow { which } => match which {
            FlowCommand::Feasible { digraph, m } => commands::flow_feasible(digraph, m),
            FlowCommand::Megiddo { digraph, sources, sinks, amount } => {
                commands::megiddo(digraph, sources, sinks, *amount)
            }
        },
        Command::Verify(a) => commands::verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(r) => {
            r.print(cli.json);
            ExitCode::from(r.code)
        }
        Err(e) => {
            e.print(cli.json);
            ExitCode::from(e.code())
        }
    }
}
