use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("erosion of the domain is empty")]
    EmptyErosion,
    #[error("configuration violates pairwise separation between robots {0} and {1}")]
    InfeasibleConfiguration(usize, usize),
    #[error("trajectories do not share a common time interval")]
    MismatchedIntervals,
    #[error("configurations are not commonly ordered")]
    NotCommonlyOrdered,
    #[error("requested duration {requested} is below the diameter {diameter}")]
    DBelowDiameter { requested: String, diameter: String },
    #[error("no placement satisfies the state constraints")]
    StateInfeasible,
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("configuration is not inside the domain")]
    NotInDomain,
    #[error("target is not reachable from start")]
    NotReachable,
    #[error("search budget of {0} states exceeded")]
    BudgetExceeded(usize),
    #[error("target unreachable in the discrete model")]
    Unreachable,
    #[error("state has no separated representative")]
    NoRepresentative,
    #[error("robot count mismatch: {0}")]
    RobotCount(String),
    #[error("instance is not aligned to the lattice step")]
    NotLatticeExact,
    #[error("covering domains {0} and {1} overlap")]
    OverlappingCover(usize, usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
