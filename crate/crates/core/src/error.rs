use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group spec `{spec}`: {reason}")]
    Spec { spec: String, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("group order {order} exceeds the table cap of {cap}")]
    OrderTooLarge { order: usize, cap: usize },

    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),

    #[error("subset belongs to a different group")]
    GroupMismatch,

    #[error("element index {index} out of range for a group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },

    #[error("unknown element label `{0}`")]
    UnknownLabel(String),

    #[error("{0} is not a subgroup")]
    NotASubgroup(String),

    #[error("{0} is not a normal subgroup")]
    NotNormal(String),

    #[error("group must be abelian: {0}")]
    NotAbelian(String),

    #[error("not a prime power: {0}")]
    NotPrimePower(u64),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("closed form does not apply: {0}")]
    NotDivisible(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("construction failed verification: {0}")]
    Verification(String),

    #[error("search budget exceeded: {0}")]
    Budget(String),

    #[error("unknown property suite `{0}`")]
    UnknownSuite(String),
}
