use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclic factor order {0} is smaller than 2")]
    InvalidFactor(u64),

    #[error("residue vector {residues:?} is not an element of a group with factors {factors:?}")]
    ResidueOutOfRange {
        residues: Vec<u64>,
        factors: Vec<u64>,
    },

    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("{what}: size {size} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("expected {expected} generator images, got {got}")]
    WrongImageCount { expected: usize, got: usize },

    #[error("lower subgroup is not contained in the upper subgroup")]
    NotNested,

    #[error("element set is not a subgroup")]
    NotASubgroup,

    #[error("the element set is empty")]
    EmptySet,

    #[error("not a partition: element {element} of class {class} is repeated or missing")]
    NotAPartition { class: usize, element: usize },

    #[error("the identity element does not form a singleton class")]
    IdentityNotSingleton,

    #[error("the inverse of class {class} is not a class")]
    NotInverseClosed { class: usize },

    #[error(
        "product of classes {x} and {y} is not constant on a class: \
         coefficient {coeff_a} at element {elem_a}, {coeff_b} at element {elem_b}"
    )]
    NotClosedUnderProduct {
        x: usize,
        y: usize,
        elem_a: usize,
        coeff_a: u64,
        elem_b: usize,
        coeff_b: u64,
    },

    #[error("the rational conjugate of class {class} by {multiplier} is not a class")]
    SchurViolation { class: usize, multiplier: i64 },

    #[error("multiplier {0} is not coprime to the group order")]
    NotCoprime(i64),

    #[error("the set is not a union of basic sets")]
    NotAnASet,

    #[error("the section is not an S-ring section: {0}")]
    NotASection(&'static str),

    #[error("group mismatch: expected factors {expected:?}, got {got:?}")]
    GroupMismatch { expected: Vec<u64>, got: Vec<u64> },

    #[error("the two S-rings induce different partitions on the common section")]
    IncompatibleOnSection,

    #[error("permutation is not an automorphism of the group")]
    NotAnAutomorphism,

    #[error("the permutation group does not contain the right regular representation")]
    RightRegularNotContained,

    #[error("class map is not an algebraic isomorphism: {0}")]
    MapNotAlgebraic(String),

    #[error("permutation is not a combinatorial isomorphism")]
    NotCombinatorialIso,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("expected the group C_p^3 with p in {{2, 3}}, got factors {0:?}")]
    WrongGroup(Vec<u64>),

    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
}

impl Error {
    pub(crate) fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            location: location.into(),
            message: message.into(),
        }
    }
}
