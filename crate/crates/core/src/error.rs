use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice {n1}x{n2}: {reason}")]
    InvalidLattice { n1: usize, n2: usize, reason: String },

    #[error("cannot parse lattice description {0:?} (expected N1xN2)")]
    LatticeSyntax(String),

    #[error("invalid spin configuration: {0}")]
    InvalidConfiguration(String),

    #[error("bond between sites {a} and {b} is ambiguous: {images} periodic images satisfy |dx| <= {max_dx:.6}")]
    AmbiguousBond {
        a: usize,
        b: usize,
        images: usize,
        max_dx: f64,
    },

    #[error("bond rule |dx| <= {max_dx_steps}b is ambiguous on a lattice with N1 = {n1} (needs 2*max_dx < L1)")]
    AmbiguousBondRule { max_dx_steps: usize, n1: usize },

    #[error("no periodic image of the bond between sites {a} and {b} has |dx| <= {max_dx:.6}")]
    BondTooLong { a: usize, b: usize, max_dx: f64 },

    #[error("theta function requires Im(tau) > 0, got {0}")]
    InvalidTau(f64),

    #[error(
        "configuration space of dimension {dimension} exceeds the enumeration budget {budget}; \
         use the Monte Carlo engine (`cslab vmc` / `cslab table1`) for this lattice"
    )]
    BudgetExceeded { dimension: u128, budget: u64 },

    #[error("lattice mismatch: {0} vs {1}")]
    LatticeMismatch(String, String),

    #[error("code states are numerically parallel (|<Phi0|Phi1>| = {overlap:.12})")]
    DegenerateCode { overlap: f64 },

    #[error("observable {0} is not diagonal in the sigma-z basis")]
    NonDiagonalObservable(String),

    #[error("chain {chain} is stuck: acceptance rate {acceptance:.4} during warmup")]
    StuckChain { chain: usize, acceptance: f64 },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed state dump: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
