use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::agents::{build_network, reward_scale, train, Algorithm, CurvePoint, GreedyAgent, TrainSummary};
use crate::error::{Error, Result};
use crate::game::{rng_from_seed, Game};
use crate::games::{new_game, AnyGame, GameSpec};
use crate::harness::config::ExperimentConfig;
use crate::harness::eval::{evaluate, mean_sd, EvalEntry};
use crate::ntuple::NTupleNetwork;

/// Mixed into a run seed to derive its evaluation stream.
const EVAL_STREAM: u64 = 0x5EED_E7A1_0000_0001;

/// Facts stored in the agent file's metadata string.
#[derive(Clone, Debug, PartialEq)]
pub struct AgentMeta {
    pub game: GameSpec,
    pub algorithm: Algorithm,
    pub gamma: f64,
    pub reward_scale: f64,
    pub seed: u64,
    pub farl: bool,
}

impl AgentMeta {
    pub fn to_meta_string(&self) -> String {
        format!(
            "game={} algorithm={} gamma={} reward_scale={} seed={} farl={}",
            self.game, self.algorithm, self.gamma, self.reward_scale, self.seed, self.farl
        )
    }

    pub fn parse(meta: &str) -> Result<Self> {
        let fields: BTreeMap<&str, &str> = meta.split_whitespace().filter_map(|t| t.split_once('=')).collect();
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| Error::Format(format!("agent metadata lacks '{k}'")));
        let num = |k: &str| -> Result<f64> { get(k)?.parse().map_err(|_| Error::Format(format!("bad '{k}' in metadata"))) };
        Ok(AgentMeta {
            game: get("game")?.parse()?,
            algorithm: get("algorithm")?.parse()?,
            gamma: num("gamma")?,
            reward_scale: num("reward_scale")?,
            seed: get("seed")?.parse().map_err(|_| Error::Format("bad 'seed' in metadata".into()))?,
            farl: get("farl")? == "true",
        })
    }
}

/// An agent file: metadata, the game it plays and the greedy player.
pub struct LoadedAgent {
    pub meta: AgentMeta,
    pub game: AnyGame,
    pub agent: GreedyAgent,
}

pub fn load_agent(path: &Path) -> Result<LoadedAgent> {
    let net = NTupleNetwork::load(path)?;
    let meta = AgentMeta::parse(net.meta())?;
    let game = new_game(&meta.game)?;
    if game.num_cells() != net.num_cells() {
        return Err(Error::Format(format!("network has {} cells but {} has {}", net.num_cells(), meta.game, game.num_cells())));
    }
    let mut agent = GreedyAgent::new(net);
    agent.gamma = meta.gamma;
    agent.reward_scale = meta.reward_scale;
    Ok(LoadedAgent { meta, game, agent })
}

pub struct TrainedAgent {
    pub meta: AgentMeta,
    pub net: NTupleNetwork,
    pub summary: TrainSummary,
}

impl TrainedAgent {
    pub fn greedy(&self) -> GreedyAgent {
        let mut a = GreedyAgent::new(self.net.clone());
        a.gamma = self.meta.gamma;
        a.reward_scale = self.meta.reward_scale;
        a
    }
}

/// Trains one agent with `cfg` (FARL switched to `farl`) from `seed`.
/// Tuple layout and training share one random stream; learning-curve
/// evaluations use a separate stream so they do not perturb training.
pub fn train_agent(cfg: &ExperimentConfig, seed: u64, farl: bool) -> Result<TrainedAgent> {
    cfg.validate()?;
    let game = new_game(&cfg.game)?;
    let mut params = cfg.params.clone();
    params.farl_enabled = farl;
    let meta = AgentMeta {
        game: cfg.game,
        algorithm: cfg.algorithm,
        gamma: params.gamma,
        reward_scale: reward_scale(&game, &params),
        seed,
        farl,
    };
    let mut rng = rng_from_seed(seed);
    let mut net = build_network(&game, cfg.algorithm, &params, &cfg.layout, &mut rng)?;
    net.set_meta(meta.to_meta_string());
    let mut eval_rng = rng_from_seed(seed ^ EVAL_STREAM);
    let multi = game.num_players() > 1;
    let mut checkpoint = |episode: usize, n: &NTupleNetwork, alpha: f64, epsilon: f64| -> Result<Vec<CurvePoint>> {
        let Some(opp) = cfg.curve_opponent else {
            return Ok(Vec::new());
        };
        let mut agent = GreedyAgent { net: n.clone(), gamma: meta.gamma, reward_scale: meta.reward_scale };
        let e = evaluate(&game, &mut agent, &opp, cfg.curve_episodes, &mut eval_rng)?;
        Ok(vec![CurvePoint {
            episode,
            eval_opponent: e.opponent,
            win_rate: multi.then_some(e.overall.mean),
            score_mean: e.overall.mean,
            score_sd: e.overall.sd,
            active_weight_fraction: n.active_weight_fraction(),
            alpha,
            epsilon,
        }])
    };
    let summary = train(&game, &mut net, cfg.algorithm, &params, &mut rng, Some(&mut checkpoint))?;
    Ok(TrainedAgent { meta, net, summary })
}

/// Evaluates a trained agent against every configured opponent.
pub fn evaluate_agent(cfg: &ExperimentConfig, agent: &TrainedAgent) -> Result<Vec<EvalEntry>> {
    let game = new_game(&cfg.game)?;
    let mut rng = rng_from_seed(agent.meta.seed ^ EVAL_STREAM ^ 0xA5A5);
    let mut player = agent.greedy();
    cfg.opponents.iter().map(|o| evaluate(&game, &mut player, o, cfg.eval_episodes, &mut rng)).collect()
}

/// One line of the report CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub game: String,
    pub algorithm: String,
    pub farl: bool,
    pub opponent: String,
    pub role: String,
    pub value: f64,
    pub sd_of_mean: f64,
    pub runs: usize,
}

pub const REPORT_HEADER: [&str; 8] =
    ["game", "algorithm", "farl", "opponent", "role", "win_rate_or_score", "sd_of_mean", "runs"];

pub fn write_report_csv<W: Write>(out: W, rows: &[ReportRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for r in rows {
        w.write_record([
            r.game.clone(),
            r.algorithm.clone(),
            r.farl.to_string(),
            r.opponent.clone(),
            r.role.clone(),
            r.value.to_string(),
            r.sd_of_mean.to_string(),
            r.runs.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Report rows for a single evaluation (sd of mean over episodes).
pub fn eval_rows(game: &GameSpec, algorithm: Algorithm, farl: bool, entry: &EvalEntry) -> Vec<ReportRow> {
    std::iter::once(&entry.overall)
        .chain(&entry.roles)
        .map(|r| ReportRow {
            game: game.to_string(),
            algorithm: algorithm.to_string(),
            farl,
            opponent: entry.opponent.clone(),
            role: r.role.clone(),
            value: r.mean,
            sd_of_mean: if r.episodes > 0 { r.sd / (r.episodes as f64).sqrt() } else { 0.0 },
            runs: 1,
        })
        .collect()
}

/// Result of one (seed, arm) job.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub farl: bool,
    pub run: usize,
    pub seed: u64,
    pub active_weight_fraction: f64,
    pub entries: Vec<EvalEntry>,
}

/// Paired FARL / no-FARL results.
#[derive(Clone, Debug)]
pub struct AblationReport {
    pub game: GameSpec,
    pub algorithm: Algorithm,
    pub runs: Vec<RunResult>,
    pub rows: Vec<ReportRow>,
}

impl AblationReport {
    /// Mean over runs of one arm's overall result against `opponent`.
    pub fn mean(&self, farl: bool, opponent: &str) -> Option<f64> {
        self.row(farl, opponent, "all").map(|r| r.value)
    }

    pub fn row(&self, farl: bool, opponent: &str, role: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.farl == farl && r.opponent == opponent && r.role == role)
    }

    /// Mean active-weight fraction of an arm.
    pub fn active_weights(&self, farl: bool) -> f64 {
        let xs: Vec<f64> = self.runs.iter().filter(|r| r.farl == farl).map(|r| r.active_weight_fraction).collect();
        mean_sd(&xs).0
    }

    /// Table with one line per opponent: FARL and no-FARL as mean ± sd of mean.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<12} {:<11} {:<14} {:>16} {:>16}", "game", "algorithm", "opponent", "FARL", "no-FARL");
        let mut opponents: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !opponents.contains(&r.opponent.as_str()) {
                opponents.push(&r.opponent);
            }
        }
        let cell = |farl: bool, opp: &str| {
            self.row(farl, opp, "all").map_or("-".to_string(), |r| format!("{:.3}±{:.3}", r.value, r.sd_of_mean))
        };
        for o in opponents {
            let _ = writeln!(
                s,
                "{:<12} {:<11} {:<14} {:>16} {:>16}",
                self.game.to_string(),
                self.algorithm.to_string(),
                o,
                cell(true, o),
                cell(false, o)
            );
        }
        let _ = writeln!(
            s,
            "{:<12} {:<11} {:<14} {:>15.3}% {:>15.3}%",
            "",
            "",
            "active weights",
            100.0 * self.active_weights(true),
            100.0 * self.active_weights(false)
        );
        s
    }
}

fn summarize(game: &GameSpec, algorithm: Algorithm, runs: &[RunResult]) -> Vec<ReportRow> {
    let mut groups: BTreeMap<(bool, String, String), Vec<f64>> = BTreeMap::new();
    let mut order: Vec<(bool, String, String)> = Vec::new();
    for r in runs {
        for e in &r.entries {
            for role in std::iter::once(&e.overall).chain(&e.roles) {
                let key = (r.farl, e.opponent.clone(), role.role.clone());
                if !groups.contains_key(&key) {
                    order.push(key.clone());
                }
                groups.entry(key).or_default().push(role.mean);
            }
        }
    }
    order
        .into_iter()
        .map(|key| {
            let xs = &groups[&key];
            let (m, sd) = mean_sd(xs);
            ReportRow {
                game: game.to_string(),
                algorithm: algorithm.to_string(),
                farl: key.0,
                opponent: key.1,
                role: key.2,
                value: m,
                sd_of_mean: sd / (xs.len() as f64).sqrt(),
                runs: xs.len(),
            }
        })
        .collect()
}

/// Trains `cfg.runs` seeds per arm (FARL on and off, same seeds) on up to
/// `cfg.workers` threads and evaluates every agent against every opponent.
/// With `report_out` set, each finished job is appended to
/// `<report_out>.runs.csv` as soon as it completes.
pub fn run_ablation(cfg: &ExperimentConfig) -> Result<AblationReport> {
    cfg.validate()?;
    let jobs: Vec<(bool, usize)> = [true, false].iter().flat_map(|&f| (0..cfg.runs).map(move |r| (f, r))).collect();
    let partial = match &cfg.report_out {
        Some(p) => {
            let mut path = p.clone().into_os_string();
            path.push(".runs.csv");
            let mut w = csv::Writer::from_path(path)?;
            w.write_record(["farl", "run", "seed", "opponent", "role", "win_rate_or_score", "active_weight_fraction"])?;
            w.flush()?;
            Some(Mutex::new(w))
        }
        None => None,
    };
    let job = |&(farl, run): &(bool, usize)| -> Result<RunResult> {
        let seed = cfg.seed.wrapping_add(run as u64);
        let trained = train_agent(cfg, seed, farl)?;
        let entries = evaluate_agent(cfg, &trained)?;
        let result = RunResult { farl, run, seed, active_weight_fraction: trained.net.active_weight_fraction(), entries };
        if let Some(w) = &partial {
            let mut w = w.lock().unwrap_or_else(|e| e.into_inner());
            for e in &result.entries {
                for r in std::iter::once(&e.overall).chain(&e.roles) {
                    w.write_record([
                        farl.to_string(),
                        run.to_string(),
                        seed.to_string(),
                        e.opponent.clone(),
                        r.role.clone(),
                        r.mean.to_string(),
                        result.active_weight_fraction.to_string(),
                    ])?;
                }
            }
            w.flush()?;
        }
        Ok(result)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParam(format!("thread pool: {e}")))?;
    let results: Vec<Result<RunResult>> = pool.install(|| jobs.par_iter().map(job).collect());
    let runs = results.into_iter().collect::<Result<Vec<_>>>()?;
    let rows = summarize(&cfg.game, cfg.algorithm, &runs);
    Ok(AblationReport { game: cfg.game, algorithm: cfg.algorithm, runs, rows })
}
