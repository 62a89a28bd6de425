use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::games::GameKind;
use crate::ntuple::{horizon_length, EligibilityMode, Sigma, TclConfig, TupleLayout};

/// Episode driver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Player-centric TD with final adaptation (value net over afterstates).
    TdFarl,
    /// Player-centric SARSA with final adaptation (action net).
    SarsaFarl,
    /// Per-player Q-learning.
    QLearn,
    /// Per-player SARSA.
    Sarsa,
    /// Per-player TD without the final-adaptation step.
    TdPlain,
}

impl Algorithm {
    /// Whether the driver learns `Q(s, a)` rather than `V(s')`.
    pub fn uses_action_net(self) -> bool {
        matches!(self, Algorithm::SarsaFarl | Algorithm::QLearn | Algorithm::Sarsa)
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "td-farl" => Ok(Algorithm::TdFarl),
            "sarsa-farl" => Ok(Algorithm::SarsaFarl),
            "q-learn" => Ok(Algorithm::QLearn),
            "sarsa" => Ok(Algorithm::Sarsa),
            "td-plain" => Ok(Algorithm::TdPlain),
            other => Err(Error::InvalidParam(format!(
                "unknown algorithm '{other}' (td-farl|sarsa-farl|q-learn|sarsa|td-plain)"
            ))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::TdFarl => "td-farl",
            Algorithm::SarsaFarl => "sarsa-farl",
            Algorithm::QLearn => "q-learn",
            Algorithm::Sarsa => "sarsa",
            Algorithm::TdPlain => "td-plain",
        })
    }
}

/// Learning hyperparameters and switches.
#[derive(Clone, Debug, PartialEq)]
pub struct AgentParams {
    pub alpha_start: f64,
    pub alpha_final: f64,
    pub epsilon_start: f64,
    pub epsilon_final: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub horizon_cut: f64,
    /// Upper bound on the horizon; required when `lambda == 1`.
    pub horizon_cap: Option<usize>,
    pub farl_enabled: bool,
    /// Second final-adaptation part: pull the terminal afterstate to 0.
    pub farl_terminal_zero: bool,
    pub t_after: bool,
    pub learn_from_rm: bool,
    pub use_symmetry: bool,
    /// Divide rewards by the width of the game's score range.
    pub normalize: bool,
    pub sigma: Sigma,
    pub tcl: Option<TclConfig>,
    pub eligibility: EligibilityMode,
    pub choose_start_01: bool,
    pub train_episodes: usize,
    pub num_eval: usize,
}

impl Default for AgentParams {
    fn default() -> Self {
        AgentParams {
            alpha_start: 1.0,
            alpha_final: 1.0,
            epsilon_start: 0.1,
            epsilon_final: 0.0,
            lambda: 0.0,
            gamma: 1.0,
            horizon_cut: 0.1,
            horizon_cap: None,
            farl_enabled: true,
            farl_terminal_zero: true,
            t_after: true,
            learn_from_rm: false,
            use_symmetry: true,
            normalize: false,
            sigma: Sigma::Tanh,
            tcl: None,
            eligibility: EligibilityMode::Et,
            choose_start_01: false,
            train_episodes: 10_000,
            num_eval: 1_000,
        }
    }
}

impl AgentParams {
    /// Settings used for each game in the reference experiments.
    pub fn preset(kind: GameKind) -> Self {
        let d = AgentParams::default();
        match kind {
            GameKind::G2048 => AgentParams {
                epsilon_start: 0.0,
                epsilon_final: 0.0,
                sigma: Sigma::Identity,
                tcl: Some(TclConfig::identity()),
                learn_from_rm: true,
                train_episodes: 200_000,
                num_eval: 5_000,
                ..d
            },
            GameKind::TicTacToe => AgentParams { alpha_final: 0.5, train_episodes: 30_000, num_eval: 1_000, ..d },
            GameKind::ConnectFour => AgentParams {
                alpha_start: 3.7,
                alpha_final: 3.7,
                tcl: Some(TclConfig::exp(2.7)),
                train_episodes: 5_000_000,
                num_eval: 100_000,
                ..d
            },
            GameKind::Hex => AgentParams {
                epsilon_start: 0.2,
                epsilon_final: 0.2,
                alpha_final: 0.5,
                tcl: Some(TclConfig::identity()),
                choose_start_01: true,
                learn_from_rm: true,
                train_episodes: 300_000,
                num_eval: 10_000,
                ..d
            },
            GameKind::Othello => AgentParams {
                epsilon_start: 0.2,
                epsilon_final: 0.2,
                alpha_start: 0.2,
                alpha_final: 0.2,
                lambda: 0.5,
                horizon_cut: 0.01,
                tcl: Some(TclConfig::exp(2.7)),
                choose_start_01: true,
                train_episodes: 250_000,
                num_eval: 2_000,
                ..d
            },
            GameKind::Nim => AgentParams {
                epsilon_start: 0.1,
                epsilon_final: 0.1,
                alpha_start: 0.5,
                alpha_final: 0.5,
                lambda: 0.5,
                horizon_cut: 0.1,
                use_symmetry: false,
                tcl: Some(TclConfig::identity()),
                learn_from_rm: true,
                train_episodes: 20_000,
                num_eval: 1_000,
                ..d
            },
            GameKind::Nim3P => AgentParams {
                epsilon_start: 0.15,
                epsilon_final: 0.15,
                alpha_start: 0.2,
                alpha_final: 0.2,
                lambda: 0.5,
                horizon_cut: 0.01,
                eligibility: EligibilityMode::Reset,
                use_symmetry: false,
                tcl: Some(TclConfig::identity()),
                choose_start_01: true,
                learn_from_rm: false,
                train_episodes: 300_000,
                num_eval: 10_000,
                ..d
            },
        }
    }

    /// Tuple layout used with the preset.
    pub fn preset_layout(kind: GameKind) -> TupleLayout {
        match kind {
            GameKind::G2048 => TupleLayout::Rect2048,
            GameKind::TicTacToe => TupleLayout::Random { count: 1, len: 9 },
            GameKind::ConnectFour => TupleLayout::RandomWalk { count: 70, len: 8 },
            GameKind::Hex => TupleLayout::RandomWalk { count: 25, len: 6 },
            GameKind::Othello => TupleLayout::RandomWalk { count: 50, len: 6 },
            GameKind::Nim => TupleLayout::AllCells { copies: 1 },
            GameKind::Nim3P => TupleLayout::AllCells { copies: 2 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidParam(format!("{name} must be in [0,1], got {v}")))
            }
        };
        for (name, v) in [("alpha_start", self.alpha_start), ("alpha_final", self.alpha_final)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParam(format!("{name} must be positive, got {v}")));
            }
        }
        unit("epsilon_start", self.epsilon_start)?;
        unit("epsilon_final", self.epsilon_final)?;
        unit("lambda", self.lambda)?;
        unit("gamma", self.gamma)?;
        if self.train_episodes == 0 {
            return Err(Error::InvalidParam("train_episodes must be at least 1".into()));
        }
        if self.num_eval == 0 {
            return Err(Error::InvalidParam("num_eval must be at least 1".into()));
        }
        if let Some(t) = &self.tcl {
            t.validate()?;
        }
        self.horizon().map(|_| ())
    }

    pub fn horizon(&self) -> Result<usize> {
        horizon_length(self.lambda, self.horizon_cut, self.horizon_cap)
    }

    fn interpolate(start: f64, end: f64, episode: usize, total: usize) -> f64 {
        if total <= 1 || start == end {
            return start;
        }
        let f = episode.min(total - 1) as f64 / (total - 1) as f64;
        start + (end - start) * f
    }

    /// Learning rate for 0-based `episode`, linear from start to final.
    pub fn alpha_at(&self, episode: usize) -> f64 {
        Self::interpolate(self.alpha_start, self.alpha_final, episode, self.train_episodes)
    }

    pub fn epsilon_at(&self, episode: usize) -> f64 {
        Self::interpolate(self.epsilon_start, self.epsilon_final, episode, self.train_episodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules_are_linear() {
        let p = AgentParams { alpha_start: 1.0, alpha_final: 0.5, epsilon_start: 0.1, epsilon_final: 0.0, train_episodes: 11, ..Default::default() };
        assert_eq!(p.alpha_at(0), 1.0);
        assert!((p.alpha_at(5) - 0.75).abs() < 1e-15);
        assert_eq!(p.alpha_at(10), 0.5);
        assert_eq!(p.epsilon_at(10), 0.0);
    }

    #[test]
    fn constant_schedule() {
        let p = AgentParams { alpha_start: 3.7, alpha_final: 3.7, train_episodes: 100, ..Default::default() };
        assert!((0..100).all(|e| p.alpha_at(e) == 3.7));
    }

    #[test]
    fn presets_validate() {
        for k in [GameKind::TicTacToe, GameKind::Nim, GameKind::Nim3P, GameKind::ConnectFour, GameKind::Hex, GameKind::Othello, GameKind::G2048] {
            AgentParams::preset(k).validate().unwrap();
        }
        assert_eq!(AgentParams::preset(GameKind::Othello).horizon().unwrap(), 6);
        assert_eq!(AgentParams::preset(GameKind::Nim).horizon().unwrap(), 3);
    }

    #[test]
    fn algorithm_names() {
        for a in ["td-farl", "sarsa-farl", "q-learn", "sarsa", "td-plain"] {
            assert_eq!(a.parse::<Algorithm>().unwrap().to_string(), a);
        }
        assert!("ppo".parse::<Algorithm>().is_err());
    }
}
