//! Word problem by Dehn reduction, truncated Cayley balls in the `S` and `X`
//! metrics, certified geodesics and the (essential) S-path of an X-geodesic.

mod ball;
mod dehn;
mod invariants;
pub mod oracle;
mod solver;
mod spath;

pub use ball::{
    build_ball, build_ball_with, generator_words, BallConfig, BallStats, GeodesicPath, TruncatedBall, DEFAULT_BUDGET,
};
pub use dehn::{DehnMachine, Factor};
pub use invariants::Invariants;
pub use solver::{ElementTable, WordSolver};
pub use spath::{
    cone_convexity, s_path, spath_suite, Assertion, Choice, ConvexityReport, SPath, SPathChecks, SPathContext, Segment,
    SuiteReport,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("Dehn reduction needs λ ≤ 1/6, got {0}")]
    LambdaTooLarge(String),
    #[error("presentation fails C'({lambda}): relator {relator} has a piece of length {piece}")]
    NotSmallCancellation { lambda: String, relator: usize, piece: usize },
    #[error("ball exceeded the vertex budget of {cap}")]
    BudgetExceeded { cap: usize },
    #[error("pair ({u}, {v}) at distance {distance:?} is outside the certified region of radius {radius}")]
    OutOfCertifiedRegion { u: usize, v: usize, distance: Option<u32>, radius: u32 },
    #[error("vertex {0} is not in the ball")]
    UnknownVertex(usize),
    #[error("not a path in the ball: {0}")]
    InvalidPath(String),
    #[error(transparent)]
    Pieces(#[from] scc_pieces::PieceError),
    #[error(transparent)]
    Cone(#[from] scc_cones::ConeError),
}
