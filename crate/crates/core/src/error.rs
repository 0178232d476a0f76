use num_bigint::BigUint;
use thiserror::Error;

/// Default cap on the number of candidates any brute-force enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HallError {
    #[error("enumeration budget exceeded: {what} needs {needed} candidates, limit is {limit}")]
    Budget {
        what: String,
        needed: String,
        limit: u64,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("capability missing: {0}")]
    Capability(String),
    #[error("identity mismatch in {identity} for {operands}: {lhs} != {rhs}")]
    IdentityMismatch {
        identity: String,
        operands: String,
        lhs: String,
        rhs: String,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, HallError>;

/// Upper bound on brute-force work, checked before an enumeration starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub limit: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            limit: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit }
    }

    pub fn check(&self, what: &str, needed: &BigUint) -> Result<()> {
        if *needed > BigUint::from(self.limit) {
            return Err(HallError::Budget {
                what: what.to_string(),
                needed: needed.to_string(),
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// Checks `base^exp` without materialising huge numbers first.
    pub fn check_pow(&self, what: &str, base: u64, exp: usize) -> Result<()> {
        self.check(what, &BigUint::from(base).pow(exp as u32))
    }
}
