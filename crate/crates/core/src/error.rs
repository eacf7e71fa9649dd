use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice must be at least 3x3, got {lx}x{ly}")]
    LatticeTooSmall { lx: usize, ly: usize },

    #[error("{n} seams cannot be equally spaced on a width-{lx} lattice")]
    SeamCount { n: usize, lx: usize },

    #[error("configuration has {got} spins but the lattice has {expected} sites")]
    SizeMismatch { expected: usize, got: usize },

    #[error("stripe configuration needs an even number of rows, got {0}")]
    OddRows(usize),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("seam at column {open} is still open; glue it before cutting column {requested}")]
    SeamAlreadyOpen { open: usize, requested: usize },

    #[error("seam at column {0} is not open")]
    SeamNotOpen(usize),

    #[error("glue step {step} outside 1..={ns}")]
    GlueStep { step: usize, ns: usize },

    #[error("system of {n} sites exceeds the exact-solver limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),

    #[error("cannot build a histogram from zero records")]
    EmptyHistogram,

    #[error("invalid experiment configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
