//! Command-line schema.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "wiretap-lab", version, about = "Wiretap secrecy, Holevo quantities, cq polarization and protocol simulation")]
#[command(after_help = "Exit status: 0 on success, 2 on a domain or usage error, 1 on an internal error.\n\
Every option may also come from a JSON file given to --config whose keys mirror the flag names; flags on the command line win.")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// JSON file of default option values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Worker threads; never changes results.
    #[arg(long, global = true, env = "WIRETAP_LAB_WORKERS")]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

const SCALAR_CSV: &str = "CSV: one header row of report keys (nested keys joined with '.') and one value row.";

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shannon quantities in bits.
    #[command(subcommand)]
    Entropy(EntropyCmd),
    /// Crossover of two binary symmetric channels in series.
    #[command(after_help = SCALAR_CSV)]
    Cascade(EpsDelta),
    /// Secrecy capacities and binary-symmetric broadcast models.
    #[command(subcommand)]
    Secrecy(SecrecyCmd),
    /// Converse bit-transmission rates over log2 alphabet sizes.
    #[command(subcommand)]
    Rates(RatesCmd),
    /// Quantum states, channels and Holevo quantities.
    #[command(subcommand)]
    Holevo(HolevoCmd),
    /// Fano, Helstrom and blocklength bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Channel combining and splitting on cq channels.
    #[command(subcommand)]
    Polar(PolarCmd),
    /// Monte Carlo transmission with Eve's substitution attack.
    #[command(after_help = "CSV: the report flattened to one row. --dump writes per-trial rows with columns \
trial,message,bob_flips,bob_accepted,bob_correct,eve_flips,eve_correct,forgery,forgery_accepted,false_accept.")]
    Simulate(SimulateArgs),
    /// Error-correction and false-acceptance rates on the three channels.
    #[command(after_help = "CSV columns: channel,party,crossover,p_fa,p_fa_low,p_fa_high,p_ec,p_ec_low,p_ec_high,reject.")]
    Domination(DominationArgs),
    /// XOR games.
    #[command(subcommand)]
    Games(GamesCmd),
    /// Runs the acceptance property suite.
    #[command(after_help = "CSV columns: id,name,passed,detail. Exits 1 when any check fails.")]
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EpsDelta {
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct JointSource {
    /// Joint table, rows separated by ';' and entries by ','.
    #[arg(long, conflicts_with_all = ["dmc", "input"], required_unless_present = "dmc")]
    pub rows: Option<String>,
    /// DMC JSON file {"inputs", "outputs", "rows"}; the joint law uses --input.
    #[arg(long, requires = "input")]
    pub dmc: Option<PathBuf>,
    /// Input distribution for --dmc, comma separated.
    #[arg(long)]
    pub input: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum EntropyCmd {
    /// h(p).
    #[command(after_help = SCALAR_CSV)]
    Binary(PArg),
    /// H(P) for a comma-separated distribution.
    #[command(after_help = SCALAR_CSV)]
    Shannon(DistArg),
    /// I(X;Y).
    #[command(after_help = SCALAR_CSV)]
    Mutual(JointSource),
    /// H(Y|X).
    #[command(after_help = SCALAR_CSV)]
    Conditional(JointSource),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PArg {
    #[arg(long)]
    pub p: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistArg {
    #[arg(long)]
    pub dist: String,
}

#[derive(Debug, Subcommand)]
pub enum SecrecyCmd {
    /// Secrecy capacity of the degraded BSC wiretap channel.
    #[command(after_help = SCALAR_CSV)]
    Cs(EpsDelta),
    /// Closed-form public-discussion capacity for BSCs.
    #[command(after_help = SCALAR_CSV)]
    CsBar(EpsDelta),
    /// Numerical sup over inputs of I(X;Y|Z), Bob at --eps, Eve at --delta.
    #[command(after_help = SCALAR_CSV)]
    CsBarUpper(EpsDelta),
    /// Lower bound from the three pairwise cascades, reported raw.
    #[command(after_help = SCALAR_CSV)]
    CsBarLower(Triple),
    /// Crossover of the composed channel.
    #[command(after_help = SCALAR_CSV)]
    Compose(EpsDelta),
    /// Sends a bit string through BSC(--eps).
    #[command(after_help = SCALAR_CSV)]
    Transmit(TransmitArgs),
    /// Eve's view cascaded with the conceptual stage.
    #[command(after_help = SCALAR_CSV)]
    ForwardConceptual(BroadcastArgs),
    /// I(X;Y|Z) for P(X=1) = --p1.
    #[command(after_help = SCALAR_CSV)]
    Cmi(CmiArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Triple {
    #[arg(long)]
    pub ea: f64,
    #[arg(long)]
    pub eb: f64,
    #[arg(long)]
    pub ee: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TransmitArgs {
    #[arg(long)]
    pub eps: f64,
    /// Bits as a string of 0 and 1.
    #[arg(long)]
    pub word: String,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BroadcastArgs {
    /// Bob's crossover.
    #[arg(long)]
    pub main: f64,
    /// Eve's crossover.
    #[arg(long)]
    pub eve: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CmiArgs {
    #[arg(long)]
    pub main: f64,
    #[arg(long)]
    pub eve: f64,
    #[arg(long)]
    pub p1: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Sizes {
    /// log2 |X|.
    #[arg(long)]
    pub lx: f64,
    /// log2 |X*|, defaults to --lx.
    #[arg(long)]
    pub lx_star: Option<f64>,
    /// log2 |Y|, defaults to --ly-star.
    #[arg(long)]
    pub ly: Option<f64>,
    /// log2 |Y*|.
    #[arg(long)]
    pub ly_star: f64,
    /// log2 |Z|.
    #[arg(long)]
    pub lz: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BranchArgs {
    /// Formula to evaluate; chosen from the size comparisons when absent.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub branch: Option<u8>,
    #[command(flatten)]
    pub sizes: Sizes,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AdaptiveArgs {
    #[command(flatten)]
    pub sizes: Sizes,
    /// Forward-conceptual log2 |X|; each --fc-* and --bc-* value defaults to the public one.
    #[arg(long)]
    pub fc_lx: Option<f64>,
    #[arg(long)]
    pub fc_lx_star: Option<f64>,
    #[arg(long)]
    pub fc_ly_star: Option<f64>,
    #[arg(long)]
    pub fc_lz: Option<f64>,
    #[arg(long)]
    pub bc_lx: Option<f64>,
    #[arg(long)]
    pub bc_lx_star: Option<f64>,
    #[arg(long)]
    pub bc_ly_star: Option<f64>,
    #[arg(long)]
    pub bc_lz: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LettersArgs {
    /// Comma-separated symbols.
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    #[arg(long)]
    pub z: String,
}

#[derive(Debug, Subcommand)]
pub enum RatesCmd {
    /// One rate formula; a domain failure is reported as a record, not an error.
    #[command(after_help = "CSV columns: kind,branch,value,term,condition.")]
    Branch(BranchArgs),
    /// Branch whose size comparisons hold.
    #[command(after_help = SCALAR_CSV)]
    Select(Sizes),
    /// (r1, r2, r3) over the public, forward and backward channels.
    #[command(after_help = "CSV columns: channel,kind,branch,value,term,condition.")]
    Adaptive(AdaptiveArgs),
    /// X ∩ Y ∩ Z.
    #[command(after_help = SCALAR_CSV)]
    Overlap(LettersArgs),
    /// Greedy removal of overlap letters, Y first.
    #[command(after_help = SCALAR_CSV)]
    Prune(LettersArgs),
}

const STATE_CSV: &str = concat!(
    "States: zero, one, plus, minus, mixed:D, basis:D:I or a JSON file {\"dim\", \"entries\": [[re, im], ...]}.\n",
    "Channels: identity:D, depolarizing:L, amplitude-damping:G, dephasing:P or a JSON file ",
    "{\"input_dim\", \"output_dim\", \"kraus\": [[[re, im], ...], ...]}.\n",
    "cq channels: amplitude:THETA, classical-bit or a JSON file {\"inputs\", \"dim\", \"states\": {input: matrix}}.\n",
    "CSV: one header row of report keys (nested keys joined with '.') and one value row."
);

#[derive(Debug, Clone, Args, Serialize)]
pub struct StateArg {
    #[arg(long)]
    pub rho: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StatePair {
    #[arg(long)]
    pub rho: String,
    #[arg(long)]
    pub sigma: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChannelState {
    #[arg(long)]
    pub channel: String,
    #[arg(long)]
    pub rho: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChannelPair {
    #[arg(long)]
    pub channel: String,
    #[arg(long)]
    pub rho: String,
    #[arg(long)]
    pub sigma: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChiArgs {
    #[arg(long)]
    pub cq: String,
    /// Comma-separated prior; uniform when absent.
    #[arg(long)]
    pub prior: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CqEve {
    #[arg(long)]
    pub cq: String,
    /// Channel mapping Bob's states to Eve's.
    #[arg(long)]
    pub eve: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RateArgs {
    #[arg(long)]
    pub cq: String,
    #[arg(long)]
    pub eve: String,
    #[arg(long)]
    pub prior: String,
}

#[derive(Debug, Subcommand)]
pub enum HolevoCmd {
    /// Von Neumann entropy.
    #[command(after_help = STATE_CSV)]
    Entropy(StateArg),
    /// ||rho - sigma||_1.
    #[command(after_help = STATE_CSV)]
    TraceDistance(StatePair),
    #[command(after_help = STATE_CSV)]
    Fidelity(StatePair),
    /// D(rho||sigma), possibly "infinite".
    #[command(after_help = STATE_CSV)]
    RelativeEntropy(StatePair),
    /// Output state of a channel.
    #[command(after_help = STATE_CSV)]
    Apply(ChannelState),
    /// rho ⊗ sigma.
    #[command(after_help = STATE_CSV)]
    Tensor(StatePair),
    /// D(rho||sigma) - D(Φrho||Φsigma).
    #[command(after_help = STATE_CSV)]
    Dpi(ChannelPair),
    /// ||rho - sigma||_1 - ||Φrho - Φsigma||_1.
    #[command(after_help = STATE_CSV)]
    Contractivity(ChannelPair),
    /// Holevo information of a cq channel under a prior.
    #[command(after_help = STATE_CSV)]
    Chi(ChiArgs),
    /// χ(Bob) - χ(Eve) at a fixed prior.
    #[command(after_help = STATE_CSV)]
    Rate(RateArgs),
    /// Secrecy rate maximised over priors.
    #[command(after_help = STATE_CSV)]
    Optimize(CqEve),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FanoArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub chi: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BlocklengthArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub chi: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MultiArgs {
    #[arg(long)]
    pub m: u64,
    /// Bound on the pairwise trace distance.
    #[arg(long)]
    pub eps: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HelstromArgs {
    #[arg(long)]
    pub rho0: String,
    #[arg(long)]
    pub rho1: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GapArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub chi: f64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = wiretap_lab::bounds::DEFAULT_M_THRESHOLD)]
    pub m_threshold: u64,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// Smallest error probability allowed by Fano's inequality.
    #[command(after_help = SCALAR_CSV)]
    Fano(FanoArgs),
    /// -log2 N (log2 M - χ - 1), flagged when outside [0, 1].
    #[command(after_help = SCALAR_CSV)]
    Blocklength(BlocklengthArgs),
    /// Error lower bound for M states of pairwise trace distance at most --eps.
    #[command(after_help = SCALAR_CSV)]
    HelstromMulti(MultiArgs),
    /// Optimal two-state discrimination with equal priors.
    #[command(after_help = STATE_CSV)]
    Helstrom(HelstromArgs),
    /// Gap in Eve's false-acceptance probability.
    #[command(after_help = SCALAR_CSV)]
    EveGap(GapArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CqArg {
    #[arg(long)]
    pub cq: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PolarizeArgs {
    #[arg(long)]
    pub cq: String,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub depth: u8,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IndexSetArgs {
    #[arg(long)]
    pub cq: String,
    #[arg(long)]
    pub eve: String,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub depth: u8,
    #[arg(long)]
    pub theta: f64,
}

#[derive(Debug, Subcommand)]
pub enum PolarCmd {
    /// χ of the worse synthesized channel.
    #[command(after_help = SCALAR_CSV)]
    Minus(CqArg),
    /// χ of the better synthesized channel.
    #[command(after_help = SCALAR_CSV)]
    Plus(CqArg),
    /// |(χ+ + χ-)/2 - χ| for one split.
    #[command(after_help = SCALAR_CSV)]
    Residual(CqArg),
    /// χ of every synthesized channel at the given depth.
    #[command(after_help = "CSV columns: index,path,chi.")]
    Polarize(PolarizeArgs),
    /// Indices good for Bob and bad for Eve.
    #[command(after_help = "CSV columns: index,path,chi_bob,chi_eve,selected.")]
    IndexSet(IndexSetArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OnOff {
    On,
    Off,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    /// Bob's crossover.
    #[arg(long)]
    pub p: f64,
    /// Eve's crossover.
    #[arg(long)]
    pub q: f64,
    #[arg(long)]
    pub rate: f64,
    /// Acceptance radius fraction; (p + q)/2 when absent.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OnOff::On)]
    pub attack: OnOff,
    /// Extra BSC cascaded onto Eve's view.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Per-trial CSV destination.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DominationArgs {
    #[arg(long)]
    pub ea: f64,
    #[arg(long)]
    pub eb: f64,
    #[arg(long)]
    pub ee: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub rate: f64,
    #[arg(long, default_value_t = wiretap_lab::protosim::DOMINATION_TAU)]
    pub tau: f64,
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
}

const GAME_CSV: &str = concat!(
    "Games: chsh, trivial:S:T or a JSON file {\"s\", \"t\", \"entries\": [[...], ...]} with Σ|G| = 1.\n",
    "Strategies: tsirelson, all-plus, random (needs --seed).\n",
    "Three-player games: random:S:T:U (needs --seed), chsh-extended or a JSON file {\"s\", \"t\", \"u\", \"entries\": [[[...]]]}.\n",
    "Three-player strategies: ghz-xy, all-plus, tsirelson-extended.\n",
    "CSV: one header row of report keys (nested keys joined with '.') and one value row."
);

#[derive(Debug, Clone, Args, Serialize)]
pub struct BiasArgs {
    #[arg(long)]
    pub game: String,
    #[arg(long)]
    pub strategy: String,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BetaArg {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GameArg {
    #[arg(long)]
    pub game: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EpsCheckArgs {
    #[arg(long)]
    pub game: String,
    #[arg(long)]
    pub strategy: String,
    #[arg(long)]
    pub beta_star: f64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Multi3Args {
    #[arg(long)]
    pub game: String,
    #[arg(long)]
    pub strategy: String,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum GamesCmd {
    /// Quantum bias of a strategy.
    #[command(after_help = GAME_CSV)]
    Bias(BiasArgs),
    /// (β + 1)/2.
    #[command(after_help = SCALAR_CSV)]
    Win(BetaArg),
    /// Best deterministic bias by enumeration.
    #[command(after_help = GAME_CSV)]
    Classical(GameArg),
    /// Whether (1 - ε)β* ≤ β(G, S) ≤ β*.
    #[command(after_help = GAME_CSV)]
    EpsCheck(EpsCheckArgs),
    /// Three-player bias.
    #[command(after_help = GAME_CSV)]
    Multi(Multi3Args),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: u64,
    /// Reduced sample sizes.
    #[arg(long)]
    pub quick: bool,
    /// Run only these check ids (1 to 12).
    #[arg(long, value_delimiter = ',')]
    pub check: Vec<usize>,
}
