use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("element does not belong to group {descriptor}")]
    DescriptorMismatch { descriptor: String },

    #[error("invalid group descriptor `{0}`")]
    InvalidDescriptor(String),

    #[error("invalid element literal `{literal}` for group {descriptor}: {reason}")]
    InvalidElement {
        literal: String,
        descriptor: String,
        reason: String,
    },

    #[error("group {0} is infinite")]
    InfiniteGroup(String),

    #[error("group or closure exceeds the enumeration guard of {limit} elements")]
    GuardExceeded { limit: usize },

    #[error("generating set does not c-generate the group: {unreached} elements unreached")]
    NotCGenerating { unreached: usize },

    #[error("element is not in the span of the supplied generators")]
    NotInSpan,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("product of the supplied base elements is not the identity")]
    ProductNotIdentity,

    #[error("environment capacity {capacity} is smaller than the required {required}")]
    CapacityExceeded { capacity: usize, required: usize },

    #[error("map is not a homomorphism on sample ({a}, {b})")]
    NotHomomorphism { a: String, b: String },

    #[error("representatives do not form a transversal: {0}")]
    NotTransversal(String),

    #[error("subgroups do not commute: [{a}, {b}] != 1")]
    NotCommuting { a: String, b: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
