use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::agents::{AgentParams, Algorithm};
use crate::error::{Error, Result};
use crate::games::GameSpec;
use crate::ntuple::{TclConfig, Transfer, TupleLayout};
use crate::opponents::OpponentSpec;

/// Everything needed to train and evaluate one agent family.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub game: GameSpec,
    pub algorithm: Algorithm,
    pub params: AgentParams,
    pub layout: TupleLayout,
    pub runs: usize,
    pub opponents: Vec<OpponentSpec>,
    pub eval_episodes: usize,
    pub seed: u64,
    pub workers: usize,
    /// Opponent for the learning-curve checkpoints; none disables them.
    pub curve_opponent: Option<OpponentSpec>,
    pub curve_episodes: usize,
    pub agent_out: Option<PathBuf>,
    pub curve_out: Option<PathBuf>,
    pub report_out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Preset parameters and layout for `game`, evaluated against random play.
    pub fn for_game(game: GameSpec) -> Self {
        ExperimentConfig {
            game,
            algorithm: Algorithm::TdFarl,
            params: AgentParams::preset(game.kind),
            layout: AgentParams::preset_layout(game.kind),
            runs: 1,
            opponents: vec![OpponentSpec::Random],
            eval_episodes: 100,
            seed: 0,
            workers: 1,
            curve_opponent: None,
            curve_episodes: 100,
            agent_out: None,
            curve_out: None,
            report_out: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.game.validate()?;
        self.params.validate()?;
        if self.runs == 0 {
            return Err(Error::InvalidParam("runs must be at least 1".into()));
        }
        if self.eval_episodes == 0 {
            return Err(Error::InvalidParam("eval_episodes must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidParam("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment. The `game` key
    /// selects the preset that all other keys override.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
        let mut order = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config { line: line_no, msg: format!("expected key = value, got '{line}'") })?;
            let key = k.trim().to_ascii_lowercase();
            if entries.insert(key.clone(), (line_no, v.trim().to_string())).is_some() {
                return Err(Error::Config { line: line_no, msg: format!("duplicate key '{key}'") });
            }
            order.push(key);
        }
        let (game_line, game_text) =
            entries.get("game").cloned().ok_or_else(|| Error::Config { line: 0, msg: "missing 'game' key".into() })?;
        let game: GameSpec = game_text.parse().map_err(|e: Error| Error::Config { line: game_line, msg: e.to_string() })?;
        let mut cfg = ExperimentConfig::for_game(game);
        for key in order.iter().filter(|k| k.as_str() != "game") {
            let (line, value) = &entries[key];
            cfg.set(key, value).map_err(|e| match e {
                Error::Config { .. } => e,
                other => Error::Config { line: *line, msg: format!("{key}: {other}") },
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::InvalidParam(format!("'{v}' is not a valid value for {key}")))
        }
        fn flag(key: &str, v: &str) -> Result<bool> {
            match v.to_ascii_lowercase().as_str() {
                "true" | "yes" | "on" | "1" => Ok(true),
                "false" | "no" | "off" | "0" => Ok(false),
                _ => Err(Error::InvalidParam(format!("'{v}' is not a boolean for {key}"))),
            }
        }
        fn path(v: &str) -> Option<PathBuf> {
            (!v.is_empty() && v != "none").then(|| PathBuf::from(v))
        }
        let p = &mut self.params;
        match key {
            "game" => self.game = value.parse()?,
            "algorithm" => self.algorithm = value.parse()?,
            "layout" => self.layout = value.parse()?,
            "runs" => self.runs = num(key, value)?,
            "opponents" => {
                self.opponents = value.split(',').map(|s| s.trim().parse()).collect::<Result<Vec<_>>>()?;
            }
            "eval_episodes" => self.eval_episodes = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "workers" => self.workers = num(key, value)?,
            "curve_opponent" => {
                self.curve_opponent = if value == "none" { None } else { Some(value.parse()?) };
            }
            "curve_episodes" => self.curve_episodes = num(key, value)?,
            "agent_out" => self.agent_out = path(value),
            "curve_out" => self.curve_out = path(value),
            "report_out" => self.report_out = path(value),
            "alpha_start" => p.alpha_start = num(key, value)?,
            "alpha_final" => p.alpha_final = num(key, value)?,
            "epsilon_start" => p.epsilon_start = num(key, value)?,
            "epsilon_final" => p.epsilon_final = num(key, value)?,
            "lambda" => p.lambda = num(key, value)?,
            "gamma" => p.gamma = num(key, value)?,
            "horizon_cut" => p.horizon_cut = num(key, value)?,
            "horizon_cap" => p.horizon_cap = if value == "none" { None } else { Some(num(key, value)?) },
            "farl_enabled" => p.farl_enabled = flag(key, value)?,
            "farl_terminal_zero" => p.farl_terminal_zero = flag(key, value)?,
            "t_after" => p.t_after = flag(key, value)?,
            "learn_from_rm" => p.learn_from_rm = flag(key, value)?,
            "use_symmetry" => p.use_symmetry = flag(key, value)?,
            "normalize" => p.normalize = flag(key, value)?,
            "sigma" => p.sigma = value.parse()?,
            "tcl" => p.tcl = parse_tcl(value, p.tcl.map_or(TclConfig::DEFAULT_INIT, |t| t.init))?,
            "tcl_init" => {
                let init = num(key, value)?;
                match &mut p.tcl {
                    Some(t) => t.init = init,
                    None => return Err(Error::InvalidParam("tcl_init needs tcl enabled first".into())),
                }
            }
            "eligibility" => p.eligibility = value.parse()?,
            "choose_start_01" => p.choose_start_01 = flag(key, value)?,
            "train_episodes" => p.train_episodes = num(key, value)?,
            "num_eval" => p.num_eval = num(key, value)?,
            other => return Err(Error::InvalidParam(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Renders the configuration back into the text format.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let opt = |x: &Option<PathBuf>| x.as_ref().map_or("none".to_string(), |p| p.display().to_string());
        let _ = writeln!(s, "game = {}", self.game);
        let _ = writeln!(s, "algorithm = {}", self.algorithm);
        let _ = writeln!(s, "layout = {}", self.layout);
        let _ = writeln!(s, "runs = {}", self.runs);
        let _ = writeln!(s, "opponents = {}", self.opponents.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(","));
        let _ = writeln!(s, "eval_episodes = {}", self.eval_episodes);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "workers = {}", self.workers);
        let _ = writeln!(s, "curve_opponent = {}", self.curve_opponent.map_or("none".into(), |o| o.to_string()));
        let _ = writeln!(s, "curve_episodes = {}", self.curve_episodes);
        let _ = writeln!(s, "agent_out = {}", opt(&self.agent_out));
        let _ = writeln!(s, "curve_out = {}", opt(&self.curve_out));
        let _ = writeln!(s, "report_out = {}", opt(&self.report_out));
        let _ = writeln!(s, "alpha_start = {}", p.alpha_start);
        let _ = writeln!(s, "alpha_final = {}", p.alpha_final);
        let _ = writeln!(s, "epsilon_start = {}", p.epsilon_start);
        let _ = writeln!(s, "epsilon_final = {}", p.epsilon_final);
        let _ = writeln!(s, "lambda = {}", p.lambda);
        let _ = writeln!(s, "gamma = {}", p.gamma);
        let _ = writeln!(s, "horizon_cut = {}", p.horizon_cut);
        let _ = writeln!(s, "horizon_cap = {}", p.horizon_cap.map_or("none".into(), |h| h.to_string()));
        let _ = writeln!(s, "farl_enabled = {}", p.farl_enabled);
        let _ = writeln!(s, "farl_terminal_zero = {}", p.farl_terminal_zero);
        let _ = writeln!(s, "t_after = {}", p.t_after);
        let _ = writeln!(s, "learn_from_rm = {}", p.learn_from_rm);
        let _ = writeln!(s, "use_symmetry = {}", p.use_symmetry);
        let _ = writeln!(s, "normalize = {}", p.normalize);
        let _ = writeln!(s, "sigma = {}", p.sigma);
        let _ = writeln!(s, "tcl = {}", tcl_text(p.tcl));
        if let Some(t) = p.tcl {
            let _ = writeln!(s, "tcl_init = {}", t.init);
        }
        let _ = writeln!(s, "eligibility = {}", p.eligibility);
        let _ = writeln!(s, "choose_start_01 = {}", p.choose_start_01);
        let _ = writeln!(s, "train_episodes = {}", p.train_episodes);
        let _ = writeln!(s, "num_eval = {}", p.num_eval);
        s
    }
}

/// `none`, `identity` or `exp:BETA`.
fn parse_tcl(v: &str, init: f64) -> Result<Option<TclConfig>> {
    let v = v.trim().to_ascii_lowercase();
    let cfg = match v.split_once(':') {
        None if v == "none" || v == "off" => return Ok(None),
        None if v == "identity" || v == "id" => TclConfig::identity(),
        Some(("exp", b)) => {
            TclConfig::exp(b.parse().map_err(|_| Error::InvalidParam(format!("bad TCL beta '{b}'")))?)
        }
        _ => return Err(Error::InvalidParam(format!("bad tcl '{v}' (none | identity | exp:BETA)"))),
    };
    let cfg = TclConfig { init, ..cfg };
    cfg.validate()?;
    Ok(Some(cfg))
}

fn tcl_text(t: Option<TclConfig>) -> String {
    match t.map(|t| t.transfer) {
        None => "none".into(),
        Some(Transfer::Identity) => "identity".into(),
        Some(Transfer::Exp { beta }) => format!("exp:{beta}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::GameKind;

    #[test]
    fn preset_then_overrides() {
        let cfg = ExperimentConfig::parse(
            "# TicTacToe ablation\ngame = tictactoe\nruns = 10   # seeds\nopponents = maxn:10, random\nfarl_enabled = false\n",
        )
        .unwrap();
        assert_eq!(cfg.game.kind, GameKind::TicTacToe);
        assert_eq!(cfg.runs, 10);
        assert_eq!(cfg.opponents.len(), 2);
        assert!(!cfg.params.farl_enabled);
        assert_eq!(cfg.params.alpha_final, 0.5);
        assert_eq!(cfg.layout, TupleLayout::Random { count: 1, len: 9 });
    }

    #[test]
    fn errors_name_the_line() {
        let e = ExperimentConfig::parse("game = nim:3x5\n\nlambda = lots\n").unwrap_err();
        assert!(matches!(e, Error::Config { line: 3, .. }), "{e}");
        let e = ExperimentConfig::parse("game = nim:3x5\nfoo = 1\n").unwrap_err();
        assert!(matches!(e, Error::Config { line: 2, .. }));
        assert!(ExperimentConfig::parse("runs = 3\n").is_err());
        assert!(ExperimentConfig::parse("game = nim:3x5\nruns = 0\n").is_err());
        assert!(ExperimentConfig::parse("game = nim:3x5\nopponents = maxn:0\n").is_err());
    }

    #[test]
    fn text_round_trip() {
        for g in ["tictactoe", "nim:3x5", "nim3p:3x5", "connectfour", "hex:6", "othello", "2048"] {
            let mut cfg = ExperimentConfig::for_game(g.parse().unwrap());
            cfg.agent_out = Some(PathBuf::from("a.ntnf"));
            cfg.curve_opponent = Some(OpponentSpec::MaxN { depth: 3 });
            let again = ExperimentConfig::parse(&cfg.to_text()).unwrap();
            assert_eq!(again, cfg, "{g}");
        }
    }
}
