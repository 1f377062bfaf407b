use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "scc", version, about = "Small cancellation presentations, thin cones and their posets")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    /// Omit the `meta` block (version, timestamp, timing) from JSON output.
    #[arg(long, global = true)]
    pub no_meta: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse, validate and re-serialize a presentation.
    #[command(subcommand)]
    Pres(PresCmd),
    /// Piece statistics and small cancellation checks.
    #[command(subcommand)]
    Pieces(PiecesCmd),
    /// Alias for `pieces check`.
    Check(CheckArgs),
    /// Cone graphs C_i^X.
    #[command(subcommand)]
    Cone(ConeCmd),
    /// The cube-free relator family r'_n.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Truncated Cayley balls and S-paths.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Comparison profiles between generating sets.
    #[command(subcommand)]
    Poset(PosetCmd),
}

#[derive(Subcommand, Debug)]
pub enum PresCmd {
    /// Report alphabet, relator lengths and the symmetrized closure size.
    Parse { pres: PathBuf },
    /// Print the canonical text form.
    Serialize { pres: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum PiecesCmd {
    /// Longest piece p(r_i) and p(r_i)/|r_i| per relator.
    Stats { pres: PathBuf },
    /// Exit 0 iff the presentation is C'(λ).
    Check(CheckArgs),
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// λ as p/q; defaults to the presentation's lambda line, else 1/24.
    #[arg(long)]
    pub lambda: Option<String>,
    pub pres: PathBuf,
}

#[derive(Args, Debug)]
pub struct ConeArgs {
    /// Spec file, or inline rules such as "P4", "default: L; 2: laced@3".
    #[arg(long, default_value = "P4")]
    pub spec: String,
    /// 1-based relator index.
    #[arg(long, default_value_t = 1)]
    pub relator: usize,
    pub pres: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum ConeCmd {
    /// Size, chord count and diameter of C_i^X.
    Build(ConeArgs),
    /// Four-point and slim-triangle constants of C_i^X.
    Hyp(ConeArgs),
    /// Edge list or DOT rendering of C_i^X.
    Export {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, default_value = "edge-list", value_parser = ["edge-list", "dot"])]
        format: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    /// Write the presentation of r'_n, ..., r'_to.
    Gen {
        #[arg(long)]
        n: usize,
        /// Last index of the range; defaults to n.
        #[arg(long)]
        to: Option<usize>,
    },
    /// Length, cube-freeness, piece bound and joint C'(1/24) for n in from..=to.
    Verify {
        #[arg(long, default_value_t = 6)]
        from: usize,
        #[arg(long, default_value_t = 12)]
        to: usize,
        /// Also write the report to this file.
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
        /// Probe pieces relator by relator instead of building the joint index.
        #[arg(long)]
        streamed: bool,
        /// Cap on the joint closure length for the in-memory index.
        #[arg(long, default_value_t = scc_families::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Number of cube-free binary words of each length up to max-len.
    Count {
        #[arg(long, default_value_t = 18)]
        max_len: usize,
    },
    /// Values of the counting inequality and the threshold n₀.
    Inequality {
        #[arg(long, default_value_t = 40)]
        upto: usize,
    },
}

#[derive(Args, Debug)]
pub struct BallArgs {
    /// "S" for the generators only, or a spec as for `cone --spec`.
    #[arg(long, default_value = "S")]
    pub metric: String,
    /// Use relators r_1..r_N.
    #[arg(long, default_value_t = 1)]
    pub trunc: usize,
    #[arg(long, default_value_t = 2)]
    pub radius: u32,
    /// Vertex cap.
    #[arg(long, default_value_t = scc_group::DEFAULT_BUDGET)]
    pub budget: usize,
    pub pres: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Vertex and edge counts of the ball.
    Ball(BallArgs),
    /// Structural checks on S-paths of sampled X-geodesics.
    Spath {
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long, default_value_t = 50)]
        sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dehn normal form of a word.
    Reduce {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 1)]
        trunc: usize,
        pres: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct UptoArgs {
    /// Relators r_1..r_N.
    #[arg(long)]
    pub upto: usize,
    pub pres: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum PosetCmd {
    /// How far the chords of Y are from X, per relator.
    Compare {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Also write the profile as CSV.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
        #[command(flatten)]
        range: UptoArgs,
    },
    /// Both directed profiles of the laced cones at antipodal bases.
    Laced {
        #[arg(long, default_value_t = scc_poset::DEFAULT_WITNESS_THRESHOLD)]
        threshold: u32,
        #[command(flatten)]
        range: UptoArgs,
    },
    /// Profiles between the mixtures X^A and X^B.
    Pfin {
        #[arg(long, default_value = "laced@0")]
        x1: String,
        #[arg(long, default_value = "P4")]
        x2: String,
        /// 1-based positions into the witness indices, e.g. "1,3,5".
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = scc_poset::DEFAULT_WITNESS_THRESHOLD)]
        threshold: u32,
        #[command(flatten)]
        range: UptoArgs,
    },
    /// Profiles between the antichain mixtures W^A and W^B.
    Antichain {
        /// Defaults to the laced cones at vertex 0 and at antipodal bases.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = scc_poset::DEFAULT_WITNESS_THRESHOLD)]
        threshold: u32,
        #[command(flatten)]
        range: UptoArgs,
    },
    /// Full-cycle piece counts and whether they stay bounded.
    Trivial(UptoArgs),
}
