use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How the horizon buffer reacts to random exploration moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EligibilityMode {
    /// Keep the buffer across exploration moves.
    Et,
    /// Clear the buffer whenever a random move is made.
    Reset,
}

impl FromStr for EligibilityMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "et" => Ok(EligibilityMode::Et),
            "reset" => Ok(EligibilityMode::Reset),
            other => Err(Error::InvalidParam(format!("unknown eligibility mode '{other}' (et|reset)"))),
        }
    }
}

impl fmt::Display for EligibilityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EligibilityMode::Et => "et",
            EligibilityMode::Reset => "reset",
        })
    }
}

/// Number of past entries kept so that every retained term has
/// `λ^k ≥ cut`: `⌊log_λ cut⌋`, 0 for `λ = 0`. `λ = 1` needs an explicit cap.
pub fn horizon_length(lambda: f64, cut: f64, cap: Option<usize>) -> Result<usize> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParam(format!("lambda must be in [0,1], got {lambda}")));
    }
    if !(cut > 0.0 && cut < 1.0) {
        return Err(Error::InvalidParam(format!("horizon cut must be in (0,1), got {cut}")));
    }
    let h = if lambda == 0.0 {
        0
    } else if lambda == 1.0 {
        return cap.ok_or_else(|| Error::InvalidParam("lambda = 1 needs an explicit horizon cap".into()));
    } else {
        // The tolerance keeps exact powers (λ^k == cut) on the inclusive side.
        ((cut.ln() / lambda.ln()) + 1e-9).floor() as usize
    };
    Ok(cap.map_or(h, |c| h.min(c)))
}

/// Features of one afterstate (or state-action pair) as seen by the network.
#[derive(Clone, Debug, PartialEq)]
pub struct Activation {
    /// Orbit size `N_S`.
    pub n_s: u32,
    /// Flat weight indices, one per (orbit member, tuple), with repeats.
    pub all: Vec<u32>,
    /// `all` with repeats inside each tuple removed (index inhibition).
    pub unique: Vec<u32>,
}

/// One buffered afterstate of the learning player.
#[derive(Clone, Debug)]
pub struct HorizonEntry {
    pub act: Activation,
    /// `σ'(ν)` captured the first time this entry was the updated state.
    pub grad: Option<f64>,
}

/// The last `h + 1` afterstates of one player, newest first.
#[derive(Clone, Debug)]
pub struct EligibilityHorizon {
    entries: VecDeque<HorizonEntry>,
    h: usize,
    lambda: f64,
    mode: EligibilityMode,
}

impl EligibilityHorizon {
    pub fn new(h: usize, lambda: f64, mode: EligibilityMode) -> Self {
        EligibilityHorizon { entries: VecDeque::with_capacity(h + 1), h, lambda, mode }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mode(&self) -> EligibilityMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, act: Activation) {
        self.entries.push_front(HorizonEntry { act, grad: None });
        self.entries.truncate(self.h + 1);
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    pub fn newest(&self) -> Option<&HorizonEntry> {
        self.entries.front()
    }

    pub(crate) fn entries_mut(&mut self) -> impl Iterator<Item = &mut HorizonEntry> {
        self.entries.iter_mut()
    }

    /// `λ^k` for the entry `k` steps back.
    pub fn lambda_power(&self, k: usize) -> f64 {
        self.lambda.powi(k as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizon_examples() {
        assert_eq!(horizon_length(0.5, 0.1, None).unwrap(), 3);
        assert_eq!(horizon_length(0.0, 0.1, None).unwrap(), 0);
        assert_eq!(horizon_length(0.5, 0.01, None).unwrap(), 6);
        assert_eq!(horizon_length(0.1, 0.1, None).unwrap(), 1);
        assert!(horizon_length(1.0, 0.1, None).is_err());
        assert_eq!(horizon_length(1.0, 0.1, Some(12)).unwrap(), 12);
        assert_eq!(horizon_length(0.9, 0.01, Some(5)).unwrap(), 5);
    }

    #[test]
    fn buffer_is_bounded() {
        let mut hz = EligibilityHorizon::new(2, 0.5, EligibilityMode::Et);
        for i in 0..10 {
            hz.push(Activation { n_s: 1, all: vec![i], unique: vec![i] });
            assert!(hz.len() <= 3);
        }
        assert_eq!(hz.newest().unwrap().act.all, vec![9]);
        assert_eq!(hz.lambda_power(2), 0.25);
    }
}
