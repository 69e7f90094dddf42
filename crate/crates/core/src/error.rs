use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("weight {weight} is not coprime to the group order {order}")]
    NonFree { order: u32, weight: u32 },
    #[error("weight {weight} is zero modulo {order}")]
    ZeroWeight { order: u32, weight: i64 },
    #[error("no weight is invertible modulo {order}")]
    NoUnitWeight { order: u32 },
    #[error("an action needs at least two weights, got {0}")]
    TooFewWeights(usize),
    #[error("group order must be positive")]
    ZeroOrder,
    #[error("empty factor list")]
    NoFactors,
    #[error("cannot parse action `{0}`; expected r:w1,w2,...")]
    BadAction(String),
    #[error("zeta has {got} entries, expected {expected}")]
    ZetaLength { expected: usize, got: usize },
    #[error("zeta entries sum to {0}, not zero")]
    ZetaSum(String),
    #[error("cannot parse zeta entry `{0}`")]
    BadZeta(String),
    #[error("flow has length {got}, quiver has {expected} arrows")]
    FlowLength { expected: usize, got: usize },
    #[error("flow is not closed: boundary is non-zero")]
    NotClosed,
    #[error("flow is not integral")]
    NotIntegral,
    #[error("boundary is not of the form chi_end - chi_start")]
    BoundaryShape,
    #[error(
        "x = {x:?} and zeta are incompatible: obstruction {obstruction} in the character group"
    )]
    Incompatible { x: Vec<String>, obstruction: String },
    #[error("vector is not in the lattice Pi")]
    NotInPi,
    #[error("operation requires a cyclic action")]
    NotCyclic,
    #[error("arrow set is not a spanning tree")]
    NotSpanningTree,
    #[error("quiver is not connected")]
    Disconnected,
    #[error("configuration is not admissible for zeta")]
    NotAdmissible,
    #[error("arrow id {0} out of range")]
    ArrowOutOfRange(usize),
    #[error("oracle disagreement: {0}")]
    OracleMismatch(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
