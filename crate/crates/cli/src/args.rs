use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "qtlab", version, about = "Quasi-tree and group-action workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Write the report here instead of stdout; for construct, the action file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Recorded in the report; every analysis here is exhaustive.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Vertex cap for exhaustive scans (overrides QTLAB_MAX_VERTICES).
    #[arg(long)]
    pub max_vertices: Option<usize>,
}

/// Where the space (and action) comes from.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Input {
    /// A qtlab-graph-v1 or qtlab-action-v1 file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// A qtlab-action-v1 file.
    #[arg(long, conflicts_with = "graph")]
    pub action: Option<PathBuf>,
    /// A built-in fixture such as bs12-r8.
    #[arg(long, conflicts_with_all = ["graph", "action"])]
    pub fixture: Option<String>,
    /// Base vertex id; defaults to the file's base point or the first vertex.
    #[arg(long)]
    pub basepoint: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Metric invariants of a graph.
    Analyze(AnalyzeArgs),
    /// Build a space with its action.
    Construct(ConstructArgs),
    /// Orbit of the base point up to a word-length horizon.
    Orbit(OrbitArgs),
    /// Rips graph on an orbit.
    RipsOrbit(RipsOrbitArgs),
    /// Classify one word, or the whole action when no word is given.
    Classify(ClassifyArgs),
    /// Acylindricity, uniform properness and stabilizer tables.
    Properness(PropernessArgs),
    /// Products of graphs.
    #[command(subcommand)]
    Product(ProductCommand),
    /// Exact arithmetic for the planar ℤ² representation.
    #[command(subcommand)]
    Lm(LmCommand),
    /// Write fixture files, or list them.
    Fixtures(FixturesArgs),
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Analyze(_) => "analyze".into(),
            Command::Construct(_) => "construct".into(),
            Command::Orbit(_) => "orbit".into(),
            Command::RipsOrbit(_) => "rips-orbit".into(),
            Command::Classify(_) => "classify".into(),
            Command::Properness(_) => "properness".into(),
            Command::Product(p) => format!("product {}", p.name()),
            Command::Lm(l) => format!("lm {}", l.name()),
            Command::Fixtures(_) => "fixtures".into(),
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Analyze(a) => &a.common,
            Command::Construct(a) => &a.common,
            Command::Orbit(a) => &a.common,
            Command::RipsOrbit(a) => &a.common,
            Command::Classify(a) => &a.common,
            Command::Properness(a) => &a.common,
            Command::Product(p) => p.common(),
            Command::Lm(l) => l.common(),
            Command::Fixtures(a) => &a.common,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: Input,
    /// Four-point δ.
    #[arg(long)]
    pub delta: bool,
    /// Bottleneck constant.
    #[arg(long)]
    pub bottleneck: bool,
    /// Check the bottleneck property at this constant.
    #[arg(long)]
    pub quasitree: Option<u32>,
    /// Ends profile about the base point up to this radius.
    #[arg(long)]
    pub ends: Option<u32>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Builder {
    Cayley,
    Farey,
    Bs12,
    Coset,
    Horoball,
    Doubleline,
    Cone,
    Ladder,
    Rips,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    pub builder: Builder,
    /// Ball radius (cayley, bs12, cone, and the line under horoball).
    #[arg(long)]
    pub radius: Option<u32>,
    /// Cayley family: Z, Z:2,3, Z2, F2 or a cyclic product such as C2xC3.
    #[arg(long)]
    pub family: Option<String>,
    /// Farey denominator bound.
    #[arg(long)]
    pub q: Option<i64>,
    /// Farey numerator bound (default 3Q).
    #[arg(long)]
    pub p: Option<i64>,
    /// Subgroup chain for the coset tree, e.g. C2xC3xC5.
    #[arg(long)]
    pub chain: Option<String>,
    /// Horoball depth.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Size parameter for doubleline and ladder.
    #[arg(long)]
    pub n: Option<i64>,
    /// Rips scale (with --graph).
    #[arg(long)]
    pub r: Option<u32>,
    /// Source graph for rips.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, default_value_t = 6)]
    pub horizon: usize,
    /// Also compare ball counts at horizons L and L/2 up to this radius.
    #[arg(long)]
    pub radius: Option<u32>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct RipsOrbitArgs {
    #[command(flatten)]
    pub input: Input,
    /// Scale; defaults to the connectivity radius.
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long, default_value_t = 6)]
    pub horizon: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub input: Input,
    /// Word such as "t a^-1"; words are read left to right.
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long, default_value_t = 16)]
    pub horizon: usize,
    /// Certify the space as a quasitree at this constant first.
    #[arg(long)]
    pub quasitree: Option<u32>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct PropernessArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, default_value_t = 4)]
    pub horizon: usize,
    #[arg(long, default_value_t = 20_000)]
    pub limit: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct Factors {
    #[arg(long, value_enum, default_value_t = NormArg::L1)]
    pub norm: NormArg,
    /// Factor files (graph or action), in order.
    #[arg(long, num_args = 1.., required = true)]
    pub factors: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormArg {
    L1,
    L2,
    Linf,
}

#[derive(Debug, Subcommand)]
pub enum ProductCommand {
    /// Product distance between two points such as "(0,2)".
    Distance(ProductDistanceArgs),
    /// Geodesic audit in the ℓ1 product.
    Geodesics(ProductGeodesicArgs),
    /// Whether an isometry permutes the factors.
    FactorCheck(FactorCheckArgs),
    /// Orbit-map distortion of the componentwise action.
    Distortion(DistortionArgs),
}

impl ProductCommand {
    fn name(&self) -> &'static str {
        match self {
            ProductCommand::Distance(_) => "distance",
            ProductCommand::Geodesics(_) => "geodesics",
            ProductCommand::FactorCheck(_) => "factor-check",
            ProductCommand::Distortion(_) => "distortion",
        }
    }

    fn common(&self) -> &Common {
        match self {
            ProductCommand::Distance(a) => &a.common,
            ProductCommand::Geodesics(a) => &a.common,
            ProductCommand::FactorCheck(a) => &a.common,
            ProductCommand::Distortion(a) => &a.common,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ProductDistanceArgs {
    #[command(flatten)]
    pub factors: Factors,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct ProductGeodesicArgs {
    #[command(flatten)]
    pub factors: Factors,
    /// Points to compare; without them every pair is audited.
    #[arg(long, requires = "y")]
    pub x: Option<String>,
    #[arg(long, requires = "x")]
    pub y: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub cap: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct FactorCheckArgs {
    #[command(flatten)]
    pub factors: Factors,
    /// JSON file {"map": [["(0,0)", "(0,2)"], …]} on product point ids.
    #[arg(long)]
    pub map: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct DistortionArgs {
    #[command(flatten)]
    pub factors: Factors,
    /// Product base point, e.g. "(0,0)"; defaults to each factor's base point.
    #[arg(long)]
    pub basepoint: Option<String>,
    /// Keep only these generators (lifted names such as a_1).
    #[arg(long, value_delimiter = ',')]
    pub generators: Option<Vec<String>>,
    /// Add the coordinate swap for this permutation, e.g. 2,1.
    #[arg(long, value_delimiter = ',')]
    pub swap: Option<Vec<usize>>,
    #[arg(long, default_value_t = 8)]
    pub horizon: usize,
    #[arg(long, default_value_t = 20_000)]
    pub limit: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum LmCommand {
    /// Conjugation exponents (α, β, γ, δ) for n = 1..=N.
    Exponents(LmExponentsArgs),
    /// Rational eigenvector obstruction for K = 1..=K_max.
    Obstruction(LmObstructionArgs),
    /// Fit |θ| to translation-length samples and audit the seminorm laws.
    Fit(LmFitArgs),
}

impl LmCommand {
    fn name(&self) -> &'static str {
        match self {
            LmCommand::Exponents(_) => "exponents",
            LmCommand::Obstruction(_) => "obstruction",
            LmCommand::Fit(_) => "fit",
        }
    }

    fn common(&self) -> &Common {
        match self {
            LmCommand::Exponents(a) => &a.common,
            LmCommand::Obstruction(a) => &a.common,
            LmCommand::Fit(a) => &a.common,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct LmExponentsArgs {
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct LmObstructionArgs {
    #[arg(long, default_value_t = 200)]
    pub k_max: u32,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct LmFitArgs {
    #[arg(long)]
    pub samples: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct FixturesArgs {
    /// Fixture name, or "list".
    pub name: String,
    /// Directory for the graph, action and manifest files.
    #[arg(long, default_value = ".")]
    pub dir: PathBuf,
    #[command(flatten)]
    pub common: Common,
}
