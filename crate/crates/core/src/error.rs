use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} must be odd and at least 3")]
    BadModulus(u32),

    #[error("pairing of order {order} needs {expected} pairs, found {found}")]
    WrongLength {
        order: u32,
        expected: usize,
        found: usize,
    },

    #[error("entry {value} of pair {index} is out of range for modulus {modulus}")]
    OutOfRange { index: usize, value: u32, modulus: u32 },

    #[error("{divisor} does not divide {modulus}")]
    NotADivisor { divisor: u32, modulus: u32 },

    #[error("order {order} exceeds the enumeration bound {bound}")]
    AboveEnumerationBound { order: u32, bound: u32 },

    #[error("no strong starter of order {0} exists")]
    NoStrongStarter(u32),

    #[error("hill climbing for order {order} gave up after {steps} steps")]
    HillClimbExhausted { order: u32, steps: u64 },

    #[error("modulus {0} is not coprime to 3")]
    NotCoprimeToThree(u32),

    #[error("base order {0} must be odd, at least 7 and coprime to 6")]
    BadBaseOrder(u32),

    #[error("order {0} is not 3p with p >= 7 coprime to 6")]
    BadTripledOrder(u32),

    #[error("base pairing is not a starter")]
    NotAStarter,

    #[error("base pairing is a starter but not strong")]
    NotStrong,

    #[error("key {key} is out of range for order {order}")]
    KeyOutOfRange { key: u32, order: u32 },

    #[error("key {key} is inadmissible ({reason}); no solution can exist")]
    InadmissibleKey { key: u32, reason: String },

    #[error("assignment has no value for variable {0}")]
    PartialAssignment(usize),

    #[error("value {value} for variable {var} is not a residue mod 3")]
    BadTernaryValue { var: usize, value: u8 },

    #[error("solution violates {0} constraint(s)")]
    InvalidSolution(usize),

    #[error("variable {0} is not one-hot in the boolean model")]
    NotOneHot(usize),

    #[error("dimacs line {line}: {msg}")]
    Dimacs { line: usize, msg: String },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("structural: {0}")]
    Structural(String),

    #[error("external solver: {0}")]
    ExternalSolver(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
