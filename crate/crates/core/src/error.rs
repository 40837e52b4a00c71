use thiserror::Error;

/// Errors raised while building or analysing flat surfaces.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed document: {0}")]
    Parse(String),
    #[error("face is not a triangle: {0}")]
    NonTriangleFace(String),
    #[error("half-edge {0} is not paired with exactly one opposite")]
    UnpairedHalfEdge(usize),
    #[error("edge {edge}: vectors do not respect the gluing (mismatch {mismatch:.3e})")]
    GluingMismatch { edge: usize, mismatch: f64 },
    #[error("triangle {face} is not closed (residual {residual:.3e})")]
    TriangleNotClosed { face: usize, residual: f64 },
    #[error("triangle {face} is not positively oriented")]
    NegativeOrientation { face: usize },
    #[error("vertex {vertex} has cone angle {angle} which is not admissible")]
    BadConeAngle { vertex: usize, angle: f64 },
    #[error("surface is not connected")]
    Disconnected,
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("degenerate triangle {0}")]
    DegenerateTriangle(usize),
    #[error("Delaunay flip budget of {0} flips exceeded")]
    FlipLimitExceeded(usize),
    #[error("saddle connection search exceeded its budget of {0} strips")]
    BudgetExceeded(usize),
    #[error("cochain has {found} values but the surface has {expected} half-edges")]
    CochainMismatch { expected: usize, found: usize },
    #[error("cochain violates the cocycle condition (residual {0:.3e})")]
    NotCocycle(f64),
    #[error("homology rank {found} does not match 2g = {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("hermitian self-pairing is negative ({0:.3e}); input is not holomorphic")]
    NegativePairing(f64),
    #[error("quadratic differential is a global square; the double cover is disconnected")]
    AlreadySquare,
    #[error("expected a {0} surface")]
    WrongKind(&'static str),
    #[error("deformation degenerates triangle {face} at t = {t}")]
    DegenerateAtT { face: usize, t: f64 },
    #[error("no cylinder with id {0}")]
    NoSuchCylinder(usize),
    #[error("epsilon must lie in (0, 1/2), got {0}")]
    BadEpsilon(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
