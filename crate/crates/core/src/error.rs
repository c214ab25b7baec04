use thiserror::Error;

/// Every domain error the library can report.
///
/// Variants carry enough context to be printed as a one-line diagnostic;
/// [`Error::code`] gives the stable machine-readable name used by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lines are projectively identical")]
    IdenticalLines,
    #[error("points do not determine a unique conic (null space dimension {nullity})")]
    DegeneratePoints { nullity: usize },
    #[error("point {point} does not lie on the conic")]
    PointNotOnConic { point: String },
    #[error("conic is singular (rank {rank})")]
    SingularConic { rank: usize },
    #[error("form is identically zero")]
    ZeroForm,
    #[error("tangency parameter {param} appears more than once")]
    DuplicateParameter { param: String },
    #[error("lines {lines:?} are concurrent at {point}")]
    ConcurrentLines { lines: [usize; 3], point: String },
    #[error("lines are not tangent to a common smooth conic")]
    NotCommonlyTangent,
    #[error("Humbert invariant is negative ({value})")]
    NegativeInvariant { value: i64 },
    #[error("selected nodes do not determine a unique conic")]
    DegenerateSelection,
    #[error("node {label} lies on the remaining line l{line}")]
    SelectionTouchesLine { label: String, line: usize },
    #[error("family scan needs at least two samples, got {samples}")]
    EmptyFamily { samples: usize },
    #[error("residual has no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: String, hi: String },
    #[error("configuration degenerates inside [{lo}, {hi}]")]
    DegenerateInside { lo: String, hi: String },
    #[error("curve is contained in line l{line}")]
    CurveInsideSextic { line: usize },
    #[error("form has odd degree {degree}")]
    OddDegree { degree: usize },
    #[error("cover splits; there is no single normalization model")]
    SplitCover,
    #[error("a second independent square root would be needed: {detail}")]
    NestedExtension { detail: String },
    #[error("zero and pole coincide")]
    CoincidentPoints,
    #[error("normalization point must differ from zero and pole")]
    RNotDistinct,
    #[error("point {point} on an exceptional component has no blow-down link")]
    UnresolvedLink { point: String },
    #[error("net pole of order {order} at infinity")]
    UnbalancedAtInfinity { order: i64 },
    #[error("point {point} is not a Weierstrass point")]
    NonWeierstrassInput { point: String },
    #[error("configuration lies on the Humbert locus; the cycle is undefined here")]
    OnLocus,
    #[error("conditions are not in general position: {detail}")]
    DegenerateConditions { detail: String },
    #[error("{label} is not a node of the curve")]
    NotANode { label: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::IdenticalLines => "IdenticalLines",
            Error::DegeneratePoints { .. } => "DegeneratePoints",
            Error::PointNotOnConic { .. } => "PointNotOnConic",
            Error::SingularConic { .. } => "SingularConic",
            Error::ZeroForm => "ZeroForm",
            Error::DuplicateParameter { .. } => "DuplicateParameter",
            Error::ConcurrentLines { .. } => "ConcurrentLines",
            Error::NotCommonlyTangent => "NotCommonlyTangent",
            Error::NegativeInvariant { .. } => "NegativeInvariant",
            Error::DegenerateSelection => "DegenerateSelection",
            Error::SelectionTouchesLine { .. } => "SelectionTouchesLine",
            Error::EmptyFamily { .. } => "EmptyFamily",
            Error::NoSignChange { .. } => "NoSignChange",
            Error::DegenerateInside { .. } => "DegenerateInside",
            Error::CurveInsideSextic { .. } => "CurveInsideSextic",
            Error::OddDegree { .. } => "OddDegree",
            Error::SplitCover => "SplitCover",
            Error::NestedExtension { .. } => "NestedExtension",
            Error::CoincidentPoints => "CoincidentPoints",
            Error::RNotDistinct => "RNotDistinct",
            Error::UnresolvedLink { .. } => "UnresolvedLink",
            Error::UnbalancedAtInfinity { .. } => "UnbalancedAtInfinity",
            Error::NonWeierstrassInput { .. } => "NonWeierstrassInput",
            Error::OnLocus => "OnLocus",
            Error::DegenerateConditions { .. } => "DegenerateConditions",
            Error::NotANode { .. } => "NotANode",
            Error::Parse(_) => "ParseError",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
