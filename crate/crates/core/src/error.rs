use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in Q(ζ)")]
    DivisionByZero,

    #[error("strand count mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),

    #[error("strand count {n} outside supported range {min}..={max}")]
    StrandsOutOfRange { n: usize, min: usize, max: usize },

    #[error("generator index {index} out of range for {strands} strands")]
    GeneratorOutOfRange { index: i64, strands: usize },

    #[error("conjugate of word {word} by s_{generator} is not a signed word: {image}")]
    NotSignedWord { generator: usize, word: String, image: String },

    #[error("group enumeration exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("invalid Young diagram {0:?}: rows must be positive and weakly decreasing")]
    InvalidDiagram(Vec<u32>),

    #[error("cannot read {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON in {path}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
