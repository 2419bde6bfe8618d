use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(String, String),
    #[error("coefficient domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),
    #[error("leading coefficient is zero")]
    ZeroLeading,
    #[error("inconsistent target width: factor {0} is not a positive integer")]
    InconsistentWidth(String),
    #[error("weight {0} is not an even integer >= 4")]
    BadWeight(i64),
    #[error("eta quotient has non-integral total exponent {0}/24")]
    FractionalEta(i64),
    #[error("Im z = {0} below evaluation floor {1}")]
    BelowFloor(f64, f64),
    #[error("unknown group {0}")]
    UnknownGroup(String),
    #[error("registry: {0}")]
    Registry(String),
    #[error("imaginary part {0:e} exceeds tolerance for acceptable group {1}")]
    ImaginaryPart(f64, String),
    #[error("singular or inconsistent cusp system for {0} at weight {1}")]
    SingularSystem(String, u32),
    #[error("weight {1} not flagged good for {0}")]
    NotGood(String, u32),
    #[error("hauptmodul recipe for {0} gives {1}")]
    BadRecipe(String, String),
    #[error("cusp {0} not in group")]
    UnknownCusp(String),
    #[error("derivative indeterminate on arc {0}")]
    Indeterminate(usize),
    #[error("boundary zero: jitter budget exhausted")]
    JitterExhausted,
    #[error("winding quadrature did not converge")]
    QuadratureFailed,
    #[error("Newton refinement diverged near {0}")]
    NewtonDiverged(String),
    #[error("valence mismatch for {group} weight {weight}: expected {expected}, found {found}")]
    ValenceMismatch { group: String, weight: u32, expected: String, found: String },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("cardinality mismatch after folding: {0} vs {1}")]
    CardinalityMismatch(usize, usize),
    #[error("groups {0} and {1} are not related")]
    UnrelatedGroups(String, String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
