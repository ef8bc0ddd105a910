use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ramsey_core::arrowing::{Budget, SolveOptions};
use ramsey_core::gadgets::{Polarity, VerifyOptions};
use serde::Serialize;

mod commands;
mod report;
mod select;

/// Builds Ramsey gadget graphs and checks arrowing, minimality and gadget properties.
///
/// Exit codes: 0 verified or built, 1 refuted, 2 unknown or incomplete, 3 usage or I/O error.
#[derive(Debug, Parser, Serialize)]
#[command(name = "ramsey", version)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Common {
    /// Number of colors.
    #[arg(long, global = true, default_value_t = 2)]
    pub q: u8,
    /// Search-node budget per engine call.
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
    /// Wall-time budget per engine call, in milliseconds.
    #[arg(long, global = true)]
    pub max_time_ms: Option<u64>,
    /// Engine workers; 1 gives deterministic runs. Defaults to available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on enumerated cases per gadget property.
    #[arg(long, global = true, default_value_t = 20_000)]
    pub max_cases: u64,
    /// JSON report path; stdout when absent.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Also write the resulting graph as graph6 to this file.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub graph_out: Option<PathBuf>,
}

impl Common {
    pub fn solve(&self) -> SolveOptions {
        let budget = Budget { max_nodes: self.max_nodes, max_time: self.max_time_ms.map(Duration::from_millis) };
        let workers = self
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1);
        SolveOptions { budget, workers }
    }

    pub fn verify(&self) -> VerifyOptions {
        VerifyOptions { solve: self.solve(), max_cases: self.max_cases, seed: self.seed }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
}

impl From<Sign> for Polarity {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Positive => Polarity::Positive,
            Sign::Negative => Polarity::Negative,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct HostTarget {
    /// Host graph: family name, g6:<literal>, file, or graph6 literal.
    #[arg(long)]
    pub host: String,
    /// Target graph H, same forms as --host.
    #[arg(long)]
    pub target: String,
}

/// Where signal senders come from; stubs when no directory is given.
#[derive(Debug, Args, Serialize)]
pub struct SenderSource {
    /// Directory of sender sidecar JSON files.
    #[arg(long)]
    pub senders: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct IndicatorArgs {
    #[arg(long)]
    pub target: String,
    /// Graph F.
    #[arg(long, default_value = "M2")]
    pub f: String,
    #[arg(long, value_enum, default_value_t = Sign::Positive)]
    pub polarity: Sign,
    /// Signal distance; defaults to v(H) + 1.
    #[arg(long)]
    pub d: Option<usize>,
    #[command(flatten)]
    pub source: SenderSource,
}

#[derive(Debug, Args, Serialize)]
pub struct GniArgs {
    #[arg(long)]
    pub target: String,
    #[arg(long, default_value = "M2")]
    pub f: String,
    /// Graph G whose edges are split into q - 1 classes.
    #[arg(long, default_value = "P4")]
    pub g: String,
    /// Edge-id classes of G (`0,2/1`); defaults to id mod (q - 1).
    #[arg(long)]
    pub classes: Option<String>,
    #[arg(long)]
    pub d: Option<usize>,
    #[command(flatten)]
    pub source: SenderSource,
}

#[derive(Debug, Args, Serialize)]
pub struct PatternArgs {
    #[arg(long)]
    pub target: String,
    /// Graph G carrying the patterns.
    #[arg(long)]
    pub g: String,
    /// Patterns as edge-id classes: `0,1/2,3;0,2/1,3`.
    #[arg(long)]
    pub patterns: String,
    #[arg(long)]
    pub d: Option<usize>,
    #[command(flatten)]
    pub source: SenderSource,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Construct {
    /// Cycle construction with k vertices of degree q + 1.
    Cycle {
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        source: SenderSource,
    },
    /// Clique-with-pendant construction (two colors) with k vertices of degree t - 1.
    Ktk2 {
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        source: SenderSource,
    },
    /// The clique graph on the phi_q base.
    Clique {
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        source: SenderSource,
    },
    /// 3-connected construction from a seed graph F, vertex v and edge e.
    #[command(name = "3conn")]
    #[serde(rename = "3conn")]
    ThreeConn {
        #[arg(long)]
        target: String,
        #[arg(long)]
        seed_graph: String,
        #[arg(long)]
        v: u32,
        /// Edge e as u-v.
        #[arg(long)]
        e: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        source: SenderSource,
    },
    /// C_k with a pendant edge at every cycle vertex.
    P4 {
        #[arg(long)]
        k: usize,
    },
    /// The phi_q coloring of K_{(t-1)^q}.
    Phi {
        #[arg(long)]
        t: usize,
    },
    /// The psi_q coloring of K_{(t-1)^q + 1}.
    Psi {
        #[arg(long)]
        t: usize,
    },
    Indicator(IndicatorArgs),
    Gni(GniArgs),
    PatternGadget(PatternArgs),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Verify {
    /// Checks a sender sidecar file against S1-S3.
    Sender {
        #[arg(long)]
        file: PathBuf,
    },
    Indicator(IndicatorArgs),
    Gni(GniArgs),
    PatternGadget(PatternArgs),
    /// Randomized robustness of (host, inner vertices).
    Robust {
        #[command(flatten)]
        ht: HostTarget,
        /// Inner vertices, comma separated.
        #[arg(long)]
        inner: String,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        s_max: usize,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// Does every q-coloring of the host contain a monochromatic target?
    Arrow(HostTarget),
    /// Finds a target-free q-coloring of the host.
    Color(HostTarget),
    /// Extends a partial coloring (`u-v=c,...`) to a target-free one.
    Extend {
        #[command(flatten)]
        ht: HostTarget,
        #[arg(long)]
        partial: String,
    },
    /// Deletes edges greedily while arrowing holds.
    Minimalize(HostTarget),
    CheckMinimal(HostTarget),
    #[command(subcommand)]
    Construct(Construct),
    #[command(subcommand)]
    Verify(Verify),
    /// Scans a corpus for a signal sender.
    SearchSender {
        #[arg(long)]
        target: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_enum, default_value_t = Sign::Positive)]
        polarity: Sign,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        /// graph6/sparse6 corpus file; defaults to the corpus directory, then the bundled graphs.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Write a found sender as a sidecar JSON file.
        #[arg(long)]
        #[serde(skip)]
        sender_out: Option<PathBuf>,
    },
    /// Compares the star characterization with the engine, plus the degree-one count.
    StarCheck {
        #[arg(long)]
        host: String,
        #[arg(long)]
        m: usize,
    },
    /// Degree statistics and basic invariants.
    Stats {
        #[arg(long)]
        host: String,
    },
}

impl Construct {
    pub fn name(&self) -> &'static str {
        match self {
            Construct::Cycle { .. } => "cycle",
            Construct::Ktk2 { .. } => "ktk2",
            Construct::Clique { .. } => "clique",
            Construct::ThreeConn { .. } => "3conn",
            Construct::P4 { .. } => "p4",
            Construct::Phi { .. } => "phi",
            Construct::Psi { .. } => "psi",
            Construct::Indicator(_) => "indicator",
            Construct::Gni(_) => "gni",
            Construct::PatternGadget(_) => "pattern-gadget",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(report) => match report.write(cli.common.out.as_deref()) {
            Ok(()) => {
                eprintln!("{}: {:?}", report.command, report.outcome);
                ExitCode::from(report.exit_code)
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(3)
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
