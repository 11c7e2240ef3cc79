use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gls_paths::gls::Bounds;

#[derive(Debug, Parser)]
#[command(name = "gls", version, about = "Exact path model for generalized Kac-Moody algebras")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Search budgets, e.g. `height=24,chain=64,enum=20000,orbit=200000,nodes=1000000`.
    #[arg(long, global = true, value_parser = parse_bounds, default_value = "")]
    pub bounds: Limits,
    /// Worker threads for crystal generation; 1 disables parallelism.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    /// Seed of the property suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Run manifest; defaults to `<output>.manifest.json` when `--output` is set.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub bounds: Bounds,
    /// Largest generated crystal.
    pub nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { bounds: Bounds::default(), nodes: 1_000_000 }
    }
}

fn parse_bounds(text: &str) -> Result<Limits, String> {
    let mut limits = Limits::default();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item.split_once('=').ok_or_else(|| format!("expected key=value, got {item:?}"))?;
        let n: usize = value.trim().parse().map_err(|_| format!("bound {key} is not a number: {value:?}"))?;
        if n == 0 {
            return Err(format!("bound {key} must be positive"));
        }
        match key.trim() {
            "height" => limits.bounds.height = n,
            "chain" => limits.bounds.chain = n,
            "enum" => limits.bounds.enumeration = n,
            "orbit" => limits.bounds.orbit = n,
            "nodes" => limits.nodes = n,
            other => return Err(format!("unknown bound {other:?} (height, chain, enum, orbit, nodes)")),
        }
    }
    Ok(limits)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cartan data.
    #[command(subcommand)]
    Datum(DatumCmd),
    /// The generalized Weyl monoid.
    #[command(subcommand)]
    Monoid(MonoidCmd),
    /// The lift to the Kac-Moody path model.
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// Truncated crystal graphs and decomposition rules.
    #[command(subcommand)]
    Crystal(CrystalCmd),
    /// Seeded property suite.
    Suite {
        name: String,
        /// Datum file or inline JSON such as `[[2]]`.
        datum: String,
        /// Use a monoid with a wrong relation (monoid suite only).
        #[arg(long)]
        inject_bug: bool,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Reruns the command recorded in a manifest and checks the output hash.
    Rerun { manifest_file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum DatumCmd {
    /// Parses and checks a datum.
    Validate { datum: String },
    /// Entry of the lifted matrix at `((i,m),(j,n))`.
    Lift {
        datum: String,
        /// `i,m,j,n` with `i`, `j` labels and `m`, `n` levels.
        #[arg(long)]
        entry: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum MonoidCmd {
    /// Canonical reduced word.
    Reduce {
        word: String,
        /// Without a datum, letters are real with no braid relations.
        #[arg(long)]
        datum: Option<String>,
    },
    /// Bruhat comparison `u ≤ w`.
    Leq {
        u: String,
        w: String,
        #[arg(long)]
        datum: Option<String>,
    },
    /// `wμ`
    Act {
        word: String,
        weight: String,
        #[arg(long)]
        datum: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum EmbedCmd {
    /// Ordered index `(i_k,m_k) ⋯ (i_1,m_1)` of an operator word.
    Word { datum: String, fword: String },
    /// `F_𝐢 π_Λ` and its lift.
    Path {
        datum: String,
        /// Weights separated by `;`.
        shape: String,
        fword: String,
        /// Compare height functions prefix by prefix.
        #[arg(long)]
        check_h: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Jsonl,
}

#[derive(Debug, Subcommand)]
pub enum CrystalCmd {
    /// Breadth-first generation from the highest path.
    Gen {
        datum: String,
        /// Weights separated by `;` give the component of their tensor product.
        shape: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        string_close: bool,
        #[arg(long, value_enum, default_value = "dot")]
        out: GraphFormat,
        /// Also check that every node lies in the ambient crystal.
        #[arg(long)]
        check: bool,
    },
    /// Summands of `𝔹(λ) ⊗ 𝔹(μ)`.
    Tensor {
        datum: String,
        lambda: String,
        mu: String,
        #[arg(long)]
        depth: usize,
        /// Compare against the generated tensor product graph.
        #[arg(long)]
        verify: bool,
    },
    /// Summands of the restriction of `𝔹(λ)` to a Levi datum.
    Branch {
        datum: String,
        lambda: String,
        /// Labels of the Levi datum.
        #[arg(long)]
        subset: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        verify: bool,
    },
    /// Standardness of a concatenation, with a defining-chain search.
    Standard {
        datum: String,
        /// Weights separated by `;`.
        ambient: String,
        path_file: PathBuf,
        /// Longest monoid word tried in the chain search.
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Weight multiplicities of a JSONL graph.
    Char { graph_file: PathBuf },
}
