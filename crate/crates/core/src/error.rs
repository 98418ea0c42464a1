use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set size {0} outside 1..=64")]
    GroundSize(usize),

    #[error("element {element} outside [1, {n}]")]
    ElementOutOfRange { element: i64, n: usize },

    #[error("mask {mask:#x} has bits beyond n = {n}")]
    MaskOutOfRange { mask: u64, n: usize },

    #[error("subsets live on different ground sets ({left} vs {right})")]
    MismatchedGround { left: usize, right: usize },

    #[error("expected cardinality {expected}, found {found}")]
    Cardinality { expected: usize, found: usize },

    #[error("set must be a proper nonempty subset of the ground set")]
    TrivialSet,

    #[error("cannot parse subset {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("collection is not weakly separated: {0} and {1} conflict")]
    NotSeparated(String, String),

    #[error("collection is not maximal: {0} could be added")]
    NotMaximal(String),

    #[error("pair is not balanced")]
    Unbalanced,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid necklace: {0}")]
    InvalidNecklace(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid cyclic pattern: {0}")]
    InvalidPattern(String),

    #[error("square move not applicable: {0}")]
    MoveNotApplicable(String),

    #[error("no chain exists: {0}")]
    ChainAbsent(String),

    #[error("no valid four-tuple for {0}")]
    NoProfile(String),

    #[error("lattice points on different levels ({0} vs {1})")]
    LevelMismatch(i64, i64),

    #[error("split {split:?} does not sum to n = {n}")]
    Split { split: [usize; 4], n: usize },

    #[error("check failed: {0}")]
    Falsified(String),

    #[error("problem ({k},{n}) exceeds desk scale; enable large problems explicitly")]
    Gated { k: usize, n: usize },
}
