use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "noisestab", version, about = "Noise stability, influence and extremal search for Boolean functions")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Worker threads for parallel enumeration (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// 𝔼(T_ε f)^α, or 𝔼Φ(T_ε f) with --phi.
    Stability {
        #[command(flatten)]
        f: FunctionArgs,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// power:<a>, entropy-pair or hellinger; overrides --alpha.
        #[arg(long)]
        phi: Option<String>,
        #[command(flatten)]
        eps: EpsArgs,
    },
    /// ℙ(f(Y¹) = ⋯ = f(Y^k)) for k noisy copies of one uniform string.
    Agreement {
        #[command(flatten)]
        f: FunctionArgs,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[command(flatten)]
        eps: EpsArgs,
    },
    /// Per-coordinate and total influence, plus the edge boundary.
    Influence {
        #[command(flatten)]
        f: FunctionArgs,
        #[arg(long, value_enum, default_value_t = CubeInfluence::Flip)]
        method: CubeInfluence,
    },
    /// Shift the support upward until the function is monotone.
    Monotonize {
        #[command(flatten)]
        f: FunctionArgs,
    },
    /// I(X; f(Y)) in bits.
    Mi {
        #[command(flatten)]
        f: FunctionArgs,
        #[command(flatten)]
        eps: EpsArgs,
    },
    /// Exhaustive search for the optimizers of an objective.
    Search {
        #[arg(long)]
        n: usize,
        /// Support size |S|.
        #[arg(long, conflicts_with = "balanced", required_unless_present = "balanced")]
        support: Option<usize>,
        /// |S| = 2^(n-1).
        #[arg(long)]
        balanced: bool,
        #[command(flatten)]
        objective: ObjectiveArgs,
        /// Restrict to monotone functions (n <= 6).
        #[arg(long)]
        monotone_only: bool,
        /// Largest search space accepted.
        #[arg(long, default_value_t = noisestab::search::DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long, default_value_t = noisestab::search::DEFAULT_TIE_TOLERANCE)]
        tie_tolerance: f64,
        /// Report every optimizer instead of the first 64.
        #[arg(long)]
        all_argmax: bool,
    },
    /// Evaluate named candidates and rank them.
    Compare {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        objective: ObjectiveArgs,
        /// maj:r, dict, dict:i, lex:s, lexc:s, ball:s, parity, const:0|1, hex:<table>.
        #[arg(required = true)]
        candidates: Vec<String>,
    },
    /// Functions on (Z/pZ)^n.
    Torus {
        #[command(subcommand)]
        command: TorusCommand,
    },
    /// Correlation and agreement of players on a broadcast tree.
    Tree {
        /// JSON file: {"n", "edges": [[u, v, eps], ...], "players": [{"v", "table_hex"}, ...]}.
        #[arg(long)]
        input: PathBuf,
        /// Also run a Monte Carlo simulation with this many samples.
        #[arg(long, requires = "seed")]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run acceptance scenarios; exits 1 if any fails.
    Verify {
        /// Criterion number; all of them when omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
        criterion: Option<u8>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TorusCommand {
    Stability {
        #[command(flatten)]
        f: TorusArgs,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long, value_enum, default_value_t = Model::Uniform)]
        model: Model,
        #[command(flatten)]
        eps: EpsArgs,
    },
    Influence {
        #[command(flatten)]
        f: TorusArgs,
        #[arg(long, value_enum, default_value_t = Flavor::RandomFlip)]
        flavor: Flavor,
        #[arg(long, value_enum, default_value_t = TorusMethod::Direct)]
        method: TorusMethod,
    },
    Boundary {
        #[command(flatten)]
        f: TorusArgs,
    },
    Monotonize {
        #[command(flatten)]
        f: TorusArgs,
    },
}

#[derive(Args, Debug)]
pub struct FunctionArgs {
    #[arg(long)]
    pub n: usize,
    /// Hex truth table, bit x = f(x).
    #[arg(long, conflicts_with = "named", required_unless_present = "named")]
    pub table: Option<String>,
    /// Named function such as maj:3 or lex:5.
    #[arg(long)]
    pub named: Option<String>,
}

#[derive(Args, Debug)]
pub struct TorusArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub n: usize,
    /// p^n digits '0'/'1', coordinate 1 varying fastest.
    #[arg(long, conflicts_with = "points", required_unless_present = "points")]
    pub table: Option<String>,
    /// Comma-separated support points as base-p digit strings, coordinate 1 first.
    #[arg(long, value_delimiter = ',')]
    pub points: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct EpsArgs {
    #[arg(long, conflicts_with = "eps_grid", required_unless_present = "eps_grid")]
    pub eps: Option<f64>,
    /// start:stop:step, inclusive of stop.
    #[arg(long)]
    pub eps_grid: Option<String>,
}

#[derive(Args, Debug)]
pub struct ObjectiveArgs {
    #[arg(long, value_enum)]
    pub objective: ObjectiveKind,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Players for the agreement objective.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveKind {
    Stability,
    Agreement,
    Mi,
    Degree1,
    Influence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CubeInfluence {
    Flip,
    Fourier,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Uniform,
    Nearest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Flavor {
    RandomFlip,
    Nearest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TorusMethod {
    Direct,
    Fourier,
}
