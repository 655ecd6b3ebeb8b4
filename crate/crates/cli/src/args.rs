use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cbrsp", version, about = "Controlled bidirectional remote state preparation simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every valid channel specification
    EnumerateChannels(EnumerateArgs),
    /// Run one protocol and print its transcript as JSON
    Run(RunArgs),
    /// Noisy fidelity sweep of the probabilistic protocol
    Sweep(SweepArgs),
    /// Run a verification suite
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Controller basis: comp, pm or theta=<t>,phi=<p>
    #[arg(long, default_value = "pm")]
    pub basis: String,
    /// List seven-qubit GHZ channels of this ancilla family instead
    #[arg(long, value_enum)]
    pub seven: Option<Family>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProtocolArg {
    Prob,
    Det,
    Joint,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(value_enum)]
    pub protocol: ProtocolArg,
    /// `standard`, `noise-study` or a canonical spec string
    #[arg(long, default_value = "standard")]
    pub channel: String,
    /// A→B target as theta,phi in radians
    #[arg(long, allow_hyphen_values = true)]
    pub t1: String,
    /// B→A target as theta,phi in radians
    #[arg(long, allow_hyphen_values = true)]
    pub t2: String,
    /// Forced outcomes, e.g. q2,q2,a or u0,v1,u1,v0,b
    #[arg(long, conflicts_with_all = ["seed", "all"])]
    pub force: Option<String>,
    /// Seed for Born-rule sampling (default 0)
    #[arg(long, conflicts_with = "all")]
    pub seed: Option<u64>,
    /// Emit every branch with nonzero probability as a JSON array
    #[arg(long)]
    pub all: bool,
    /// Joint protocol on a preset: ancilla values for S1' and S2'
    #[arg(long, default_value = "0,0")]
    pub ancillas: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Noise model(s): ad, pd or ad,pd
    #[arg(long, default_value = "ad,pd")]
    pub noise: String,
    /// Each angle and eta accepts a value or start:stop:step
    #[arg(long, default_value = "0.7853981633974483")]
    pub theta1: String,
    #[arg(long, default_value = "0.7853981633974483")]
    pub theta2: String,
    #[arg(long, default_value = "0")]
    pub phi1: String,
    #[arg(long, default_value = "0")]
    pub phi2: String,
    #[arg(long, default_value = "0:1:0.05")]
    pub eta: String,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// closedform, tables, enumeration, cptp or all
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Print the full report as JSON instead of text
    #[arg(long)]
    pub json: bool,
}
