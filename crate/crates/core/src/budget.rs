//! Resource budgets for the exponential searches.
//!
//! Every enumeration in this crate charges work units against a [`Budget`].
//! Exceeding a budget is reported as a [`CapError`], which is always distinct
//! from a verdict: a capped run says "we stopped", never "no".

use core::cell::Cell;
use core::fmt;

/// A cap was exceeded. Carries the stage that hit it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapError {
    pub stage: &'static str,
    pub limit: u64,
}

impl fmt::Display for CapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "resource cap exceeded in {} (limit {})", self.stage, self.limit)
    }
}

/// A mutable countdown of enumeration states.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: Cell<u64>,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: Cell::new(0) }
    }

    /// Effectively unlimited; used by small internal searches.
    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    /// Charge `n` units, failing when the total would exceed the limit.
    pub fn charge(&self, stage: &'static str, n: u64) -> Result<(), CapError> {
        let next = self.used.get().saturating_add(n);
        if next > self.limit {
            return Err(CapError { stage, limit: self.limit });
        }
        self.used.set(next);
        Ok(())
    }

    pub fn exhausted(&self) -> bool {
        self.used.get() >= self.limit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charges_accumulate() {
        let b = Budget::new(10);
        assert!(b.charge("t", 6).is_ok());
        assert!(b.charge("t", 4).is_ok());
        let e = b.charge("t", 1).unwrap_err();
        assert_eq!(e.limit, 10);
    }
}
