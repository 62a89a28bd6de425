//! Temporal coherence learning: per-weight learning rates from the ratio of
//! net to absolute accumulated weight change.

use crate::error::{Error, Result};

/// Transfer function applied to `|N_i| / A_i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Transfer {
    Identity,
    /// `g(x) = exp(β (x - 1))`.
    Exp { beta: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TclConfig {
    pub transfer: Transfer,
    /// Starting value of both accumulators.
    pub init: f64,
}

impl TclConfig {
    pub const DEFAULT_INIT: f64 = 1e-4;

    pub fn identity() -> Self {
        TclConfig { transfer: Transfer::Identity, init: Self::DEFAULT_INIT }
    }

    pub fn exp(beta: f64) -> Self {
        TclConfig { transfer: Transfer::Exp { beta }, init: Self::DEFAULT_INIT }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.init > 0.0 && self.init.is_finite()) {
            return Err(Error::InvalidParam(format!("TCL init must be positive, got {}", self.init)));
        }
        if let Transfer::Exp { beta } = self.transfer {
            if !(beta > 0.0 && beta.is_finite()) {
                return Err(Error::InvalidParam(format!("TCL beta must be positive, got {beta}")));
            }
        }
        Ok(())
    }
}

/// `α_i` from the accumulators. A zero `A_i` (never updated) gives 1.
#[inline]
pub fn tcl_rate(n: f64, a: f64, transfer: Transfer) -> f64 {
    if a == 0.0 {
        return 1.0;
    }
    let x = (n.abs() / a).min(1.0);
    match transfer {
        Transfer::Identity => x,
        Transfer::Exp { beta } => (beta * (x - 1.0)).exp(),
    }
}

/// Accumulators `N_i` (signed) and `A_i` (absolute), one pair per weight.
#[derive(Clone, Debug, PartialEq)]
pub struct TclState {
    pub config: TclConfig,
    pub net: Vec<f64>,
    pub abs: Vec<f64>,
}

impl TclState {
    pub fn new(config: TclConfig, weights: usize) -> Self {
        TclState { config, net: vec![config.init; weights], abs: vec![config.init; weights] }
    }

    #[inline]
    pub fn rate(&self, j: usize) -> f64 {
        tcl_rate(self.net[j], self.abs[j], self.config.transfer)
    }

    /// Adds the recommended weight change `r` to weight `j`'s accumulators.
    #[inline]
    pub fn accumulate(&mut self, j: usize, r: f64) {
        self.net[j] += r;
        self.abs[j] += r.abs();
    }
}
