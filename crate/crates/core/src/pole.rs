//! Guarded reciprocals for perturbative denominators.

use crate::error::{Error, Result};

/// |denominator| below this is a pole (1 kHz, in GHz).
pub const HARD_POLE_GHZ: f64 = 1e-6;
/// |denominator| below this marks the value as near a pole (10 MHz).
pub const SOFT_POLE_GHZ: f64 = 1e-2;

/// Collects the near-pole flag while a formula evaluates its denominators.
#[derive(Debug, Clone)]
pub struct PoleGuard {
    term: &'static str,
    near: bool,
}

impl PoleGuard {
    pub fn new(term: &'static str) -> Self {
        PoleGuard { term, near: false }
    }

    /// 1/d, or a pole error naming the denominator.
    pub fn inv(&mut self, d: f64, label: &str) -> Result<f64> {
        self.check(d, label)?;
        Ok(1.0 / d)
    }

    pub fn check(&mut self, d: f64, label: &str) -> Result<()> {
        if !d.is_finite() || d.abs() < HARD_POLE_GHZ {
            return Err(Error::Pole {
                term: self.term,
                label: label.to_string(),
                denominator: d,
            });
        }
        if d.abs() < SOFT_POLE_GHZ {
            self.near = true;
        }
        Ok(())
    }

    pub fn near_pole(&self) -> bool {
        self.near
    }
}

/// A value together with its near-pole flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Guarded {
    pub value: f64,
    pub near_pole: bool,
}

impl Guarded {
    pub fn new(value: f64, guard: &PoleGuard) -> Self {
        Guarded {
            value,
            near_pole: guard.near_pole(),
        }
    }
}
