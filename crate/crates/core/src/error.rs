use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the numeric modules can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("finite-difference step must be positive, got {0}")]
    InvalidStep(f64),
    #[error("field evaluation failed inside stencil around {at:?}: {source}")]
    StencilOutOfDomain {
        at: [f64; 3],
        #[source]
        source: Box<Error>,
    },
    #[error("field vanishes at {at:?}, cannot normalize")]
    ZeroFieldPoint { at: [f64; 3] },
    #[error("field is singular at {at:?}")]
    FieldSingularity { at: [f64; 3] },
    #[error("electric charge must be nonzero")]
    InvalidCharge,
    #[error("invalid radius: {0}")]
    InvalidRadius(String),
    #[error("invalid monopole configuration: {0}")]
    InvalidMonopole(String),
    #[error("point {at:?} lies on the Dirac string")]
    StringSingularity { at: [f64; 3] },
    #[error("point {at:?} coincides with the monopole at the origin")]
    OriginSingularity { at: [f64; 3] },
    #[error("unsupported gamma representation `{0}`")]
    Unsupported(String),
    #[error("spacetime index {0} out of range 0..4")]
    InvalidIndex(usize),
    #[error("Green's kernel evaluated at coincident points")]
    CoincidentPoints,
    #[error("evaluation loop point {at:?} lies inside the source grid region")]
    GeometryOverlap { at: [f64; 3] },
    #[error("degenerate wave sample: |D| = {magnitude:e} at loop point {index}")]
    DegenerateSample { index: usize, magnitude: f64 },
    #[error("need at least {min} loop samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("invalid probe configuration: {0}")]
    InvalidProbe(String),
}
