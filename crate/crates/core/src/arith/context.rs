use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Requested accuracy and safety limits for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub target_digits: u32,
    pub guard_digits: u32,
    pub max_terms: usize,
}

impl PrecisionContext {
    pub const MAX_DIGITS: u32 = 250;

    pub fn new(target_digits: u32, guard_digits: u32, max_terms: usize) -> Result<Self> {
        if target_digits < 10 {
            return Err(Error::Context(format!("target_digits {target_digits} < 10")));
        }
        if target_digits > Self::MAX_DIGITS {
            return Err(Error::Context(format!(
                "target_digits {target_digits} exceeds {}",
                Self::MAX_DIGITS
            )));
        }
        if guard_digits < 5 {
            return Err(Error::Context(format!("guard_digits {guard_digits} < 5")));
        }
        if max_terms < 1000 {
            return Err(Error::Context(format!("max_terms {max_terms} < 1000")));
        }
        Ok(PrecisionContext {
            target_digits,
            guard_digits,
            max_terms,
        })
    }

    /// Default guard digits and term cap.
    pub fn digits(target_digits: u32) -> Result<Self> {
        Self::new(target_digits, 12, 5_000_000)
    }

    pub fn with_target(self, target_digits: u32) -> Result<Self> {
        Self::new(target_digits, self.guard_digits, self.max_terms)
    }

    /// Working precision in bits.
    pub fn bits(&self) -> usize {
        ((self.target_digits + self.guard_digits) as f64 * LOG2_10).ceil() as usize + 32
    }

    /// `10^-target_digits`.
    pub fn epsilon(&self) -> f64 {
        10f64.powi(-(self.target_digits as i32))
    }

    /// `10^-(target_digits - 5)`.
    pub fn default_tolerance(&self) -> f64 {
        10f64.powi(-(self.target_digits as i32 - 5))
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext::digits(30).expect("valid default")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PrecisionContext::new(9, 5, 1000).is_err());
        assert!(PrecisionContext::new(10, 4, 1000).is_err());
        assert!(PrecisionContext::new(10, 5, 999).is_err());
        assert!(PrecisionContext::new(10, 5, 1000).is_ok());
    }

    #[test]
    fn bits_grow_with_digits() {
        let a = PrecisionContext::digits(30).unwrap();
        let b = PrecisionContext::digits(60).unwrap();
        assert!(b.bits() > a.bits());
        assert!(a.bits() as f64 >= 42.0 * LOG2_10);
    }
}
