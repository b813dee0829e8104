use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quantum_dialogue::attacks::{AttackKind, Legs};
use quantum_dialogue::protocol::{BitsPolicy, InitialPolicy};
use quantum_dialogue::quantum::{BellLabel, MessageBits, PauliEncoding};

#[derive(Debug, Parser)]
#[command(
    name = "qdialogue",
    version,
    about = "Detection-probability analysis of the quantum dialogue protocol under intercept attacks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full claim-reproduction suite and print a pass/fail table
    Verify(VerifyArgs),
    /// Exact detection probability for one configuration or all 64
    Exact(ExactArgs),
    /// Monte Carlo estimate of the control-mode detection rate
    Simulate(SimulateArgs),
    /// One annotated protocol run with intermediate states
    Trace(TraceArgs),
    /// Cumulative detection over N control runs, corrected vs claimed
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DocFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeChoice {
    Control,
    Message,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct AttackArgs {
    /// none | z-basis | basis:theta=<radians>,phi=<radians>
    #[arg(long, default_value = "z-basis", value_parser = parse_attack)]
    pub attack: AttackKind,

    /// Legs Eve is active on: b2a | a2b | both
    #[arg(long, default_value = "b2a", value_parser = parse_legs)]
    pub legs: Legs,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write output to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Seed for the Monte Carlo cross-check
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = DocFormat::Text)]
    pub format: DocFormat,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ExactArgs {
    /// Evaluate all 64 (initial, bob, alice) configurations
    #[arg(long, conflicts_with_all = ["initial", "bob", "alice"])]
    pub sweep: bool,

    /// Initial Bell state: psi-minus | psi-plus | phi-minus | phi-plus
    #[arg(long, required_unless_present = "sweep", value_parser = parse_bell)]
    pub initial: Option<BellLabel>,

    /// Bob's message bits: 00 | 01 | 10 | 11
    #[arg(long, required_unless_present = "sweep", value_parser = parse_bits)]
    pub bob: Option<MessageBits>,

    /// Alice's message bits: 00 | 01 | 10 | 11
    #[arg(long, required_unless_present = "sweep", value_parser = parse_bits)]
    pub alice: Option<MessageBits>,

    #[command(flatten)]
    pub attack: AttackArgs,

    #[arg(long, value_enum, default_value_t = DocFormat::Text)]
    pub format: DocFormat,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Number of protocol runs
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,

    /// Probability that Alice picks control mode
    #[arg(long = "cm-prob", default_value_t = 0.5, value_parser = parse_probability)]
    pub cm_prob: f64,

    /// Seed; drawn from system entropy and echoed when omitted
    #[arg(long)]
    pub seed: Option<u64>,

    /// random | psi-minus | psi-plus | phi-minus | phi-plus
    #[arg(long, default_value = "random", value_parser = parse_initial_policy)]
    pub initial: InitialPolicy,

    /// random | 00 | 01 | 10 | 11
    #[arg(long, default_value = "random", value_parser = parse_bits_policy)]
    pub bob: BitsPolicy,

    /// random | 00 | 01 | 10 | 11
    #[arg(long, default_value = "random", value_parser = parse_bits_policy)]
    pub alice: BitsPolicy,

    /// Worker threads; the result does not depend on this
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,

    #[command(flatten)]
    pub attack: AttackArgs,

    #[arg(long, value_enum, default_value_t = DocFormat::Text)]
    pub format: DocFormat,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    /// random | psi-minus | psi-plus | phi-minus | phi-plus
    #[arg(long, default_value = "random", value_parser = parse_initial_policy)]
    pub initial: InitialPolicy,

    /// random | 00 | 01 | 10 | 11
    #[arg(long, default_value = "random", value_parser = parse_bits_policy)]
    pub bob: BitsPolicy,

    /// random | 00 | 01 | 10 | 11
    #[arg(long, default_value = "random", value_parser = parse_bits_policy)]
    pub alice: BitsPolicy,

    /// Run mode; `random` flips a fair coin
    #[arg(long, value_enum, default_value_t = ModeChoice::Control)]
    pub mode: ModeChoice,

    /// Seed; drawn from system entropy and echoed when omitted
    #[arg(long)]
    pub seed: Option<u64>,

    #[command(flatten)]
    pub attack: AttackArgs,

    #[arg(long, value_enum, default_value_t = DocFormat::Text)]
    pub format: DocFormat,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// Largest number of control runs
    #[arg(long = "max-n", default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_n: u32,

    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,

    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn parse_bell(s: &str) -> Result<BellLabel, String> {
    s.parse().map_err(|e: quantum_dialogue::Error| e.to_string())
}

pub fn parse_bits(s: &str) -> Result<MessageBits, String> {
    s.parse().map_err(|e: quantum_dialogue::Error| e.to_string())
}

fn parse_attack(s: &str) -> Result<AttackKind, String> {
    s.parse().map_err(|e: quantum_dialogue::Error| e.to_string())
}

fn parse_legs(s: &str) -> Result<Legs, String> {
    s.parse().map_err(|e: quantum_dialogue::Error| e.to_string())
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(0.0..=1.0).contains(&p) {
        return Err(format!("{p} is outside [0, 1]"));
    }
    Ok(p)
}

fn parse_initial_policy(s: &str) -> Result<InitialPolicy, String> {
    if s == "random" {
        return Ok(InitialPolicy::RandomAnnounced);
    }
    parse_bell(s).map(InitialPolicy::Fixed)
}

fn parse_bits_policy(s: &str) -> Result<BitsPolicy, String> {
    if s == "random" {
        return Ok(BitsPolicy::UniformRandom);
    }
    parse_bits(s).map(BitsPolicy::Fixed)
}

pub fn initial_token(p: InitialPolicy) -> String {
    match p {
        InitialPolicy::RandomAnnounced => "random".into(),
        InitialPolicy::Fixed(l) => l.token().into(),
    }
}

pub fn bits_token(p: BitsPolicy) -> String {
    match p {
        BitsPolicy::UniformRandom => "random".into(),
        BitsPolicy::Fixed(b) => b.to_string(),
    }
}

pub fn attack_token(kind: &AttackKind) -> String {
    match kind {
        AttackKind::None => "none".into(),
        AttackKind::ZBasis => "z-basis".into(),
        AttackKind::Basis(b) => format!("basis:theta={},phi={}", b.theta(), b.phi()),
    }
}

pub fn encoding(bits: MessageBits) -> PauliEncoding {
    PauliEncoding::from_bits(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn probability_parser_bounds() {
        assert!(parse_probability("0").is_ok());
        assert!(parse_probability("1.0").is_ok());
        assert!(parse_probability("1.01").is_err());
        assert!(parse_probability("-0.5").is_err());
        assert!(parse_probability("x").is_err());
    }
}
