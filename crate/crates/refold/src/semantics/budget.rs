//! Budgets keep the exhaustive checks interactive.

use crate::error::{Error, Result};

pub const DEFAULT_HORIZON_CAP: usize = 6;
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Caps on horizon length and on the number of candidates any single
/// operation may enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub horizon_cap: usize,
    pub enumeration_cap: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            horizon_cap: DEFAULT_HORIZON_CAP,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl Budget {
    pub fn with_cap(enumeration_cap: u64) -> Self {
        Budget {
            enumeration_cap,
            ..Budget::default()
        }
    }

    pub fn check_horizon(&self, horizon: usize) -> Result<()> {
        if horizon == 0 {
            return Err(Error::Budget("horizon must be at least 1".into()));
        }
        if horizon > self.horizon_cap {
            return Err(Error::Budget(format!(
                "horizon {horizon} exceeds the cap of {}",
                self.horizon_cap
            )));
        }
        Ok(())
    }

    pub fn meter(&self) -> CostMeter {
        CostMeter {
            used: 0,
            cap: self.enumeration_cap,
        }
    }
}

/// Counts enumeration work against the budget's cap.
#[derive(Debug)]
pub struct CostMeter {
    used: u64,
    cap: u64,
}

impl CostMeter {
    pub fn charge(&mut self, amount: u64) -> Result<()> {
        self.used = self.used.saturating_add(amount);
        if self.used > self.cap {
            Err(Error::Budget(format!(
                "enumeration exceeded {} candidates",
                self.cap
            )))
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}
