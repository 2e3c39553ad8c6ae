use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid fraction {n}/{q}: need 0 < q < n and gcd(n, q) = 1")]
    InvalidFraction { n: String, q: String },
    #[error("chain is not admissible: p_{index} = {value} is not positive")]
    NotAdmissible { index: usize, value: String },
    #[error("entry {index} has weight {value}, only entries equal to 1 can be contracted")]
    NotAContractibleEntry { index: usize, value: i64 },
    #[error("contraction produces a non-positive weight at position {index}")]
    NegativeWeight { index: usize },
    #[error("index {index} out of range for chain of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("chain {0} is not admissible for chains")]
    NotAdmissibleForChains(String),
    #[error("malformed chain {0}")]
    MalformedChain(String),
    #[error("chain {0} is not in strict form (all entries >= 2)")]
    NotStrict(String),
    #[error("chain {0} is not in general form (all entries >= 1)")]
    NotGeneral(String),
    #[error("empty chain")]
    EmptyChain,
    #[error("{0} is not a core")]
    NotACore(String),
    #[error("center {0} is not admissible for chains")]
    InvalidCenter(String),
    #[error("delta case {case} requires parameter {param}")]
    MissingParameter { case: &'static str, param: &'static str },
    #[error("delta case {case} does not take parameter {param}")]
    UnexpectedParameter { case: &'static str, param: &'static str },
    #[error("unknown delta case label {0:?}")]
    UnknownCase(String),
    #[error("ledger is incomplete: {0} is required")]
    IncompleteLedger(&'static str),
    #[error("index n = {0} is too small, need n > 2")]
    IndexTooSmall(String),
    #[error("seed {seed} is not ample: bridge degree {degree} is not positive")]
    NotAmple { seed: String, degree: String },
    #[error("need at least 2 terms, got {0}")]
    TooFewTerms(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}
