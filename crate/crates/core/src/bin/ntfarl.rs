use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use ntuple_farl::agents::write_curve_csv;
use ntuple_farl::game::rng_from_seed;
use ntuple_farl::harness::{
    eval_rows, evaluate, inspect_summary, load_agent, play_interactive, run_ablation, train_agent, write_report_csv,
    ExperimentConfig,
};
use ntuple_farl::opponents::OpponentSpec;
use ntuple_farl::Game;

#[derive(Parser)]
#[command(name = "ntfarl", version, about = "N-tuple TD agents with final adaptation (FARL) for N-player games")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Train one agent from a config; writes the agent file and a learning curve.
    Train {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Agent file to write (default: config `agent_out` or agent.ntnf).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Learning-curve CSV (default: config `curve_out` or <out>.curve.csv).
        #[arg(long)]
        curve: Option<PathBuf>,
        /// Extra `key=value` settings applied after the config file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Evaluate a frozen agent against an opponent in every role.
    Eval {
        #[arg(long)]
        agent: PathBuf,
        /// `random`, `maxn:D` or `mcts:I[:C[:CAP]]`.
        #[arg(long, default_value = "random")]
        opponent: String,
        #[arg(long, default_value_t = 200)]
        episodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report CSV to write in addition to stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Train FARL and no-FARL arms over several seeds and compare them.
    Ablate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Report CSV (default: config `report_out`, else stdout only).
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Play against an agent in the terminal.
    Play {
        #[arg(long)]
        agent: PathBuf,
        /// Your seat, 1-based.
        #[arg(long, default_value_t = 1)]
        seat: usize,
        /// Let the agent play every seat.
        #[arg(long)]
        watch: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print tuple, weight and TCL summaries of an agent file.
    Inspect {
        #[arg(long)]
        agent: PathBuf,
    },
}

fn load_config(path: &PathBuf, set: &[String]) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path).with_context(|| format!("config {}", path.display()))?;
    for kv in set {
        let Some((k, v)) = kv.split_once('=') else { bail!("--set expects KEY=VALUE, got '{kv}'") };
        cfg.set(k.trim(), v.trim()).with_context(|| format!("--set {kv}"))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.cmd {
        Cmd::Train { config, seed, out, curve, set } => {
            let cfg = load_config(&config, &set)?;
            let seed = seed.unwrap_or(cfg.seed);
            let out = out.or_else(|| cfg.agent_out.clone()).unwrap_or_else(|| PathBuf::from("agent.ntnf"));
            let curve = curve.or_else(|| cfg.curve_out.clone()).unwrap_or_else(|| {
                let mut p = out.clone().into_os_string();
                p.push(".curve.csv");
                p.into()
            });
            let trained = train_agent(&cfg, seed, cfg.params.farl_enabled)?;
            trained.net.save(&out).with_context(|| format!("writing {}", out.display()))?;
            write_curve_csv(BufWriter::new(File::create(&curve)?), &trained.summary.curve)?;
            println!(
                "trained {} episodes ({} moves); active weights {:.4}%; agent {} ; curve {} ({} points)",
                trained.summary.episodes,
                trained.summary.moves,
                100.0 * trained.net.active_weight_fraction(),
                out.display(),
                curve.display(),
                trained.summary.curve.len()
            );
        }
        Cmd::Eval { agent, opponent, episodes, seed, csv } => {
            let opp: OpponentSpec = opponent.parse()?;
            let mut loaded = load_agent(&agent).with_context(|| format!("agent {}", agent.display()))?;
            let entry = evaluate(&loaded.game, &mut loaded.agent, &opp, episodes, &mut rng_from_seed(seed))?;
            let rows = eval_rows(&loaded.meta.game, loaded.meta.algorithm, loaded.meta.farl, &entry);
            write_report_csv(io::stdout().lock(), &rows)?;
            if let Some(path) = csv {
                write_report_csv(BufWriter::new(File::create(&path)?), &rows)?;
            }
        }
        Cmd::Ablate { config, runs, workers, seed, report, set } => {
            let mut cfg = load_config(&config, &set)?;
            if let Some(r) = runs {
                cfg.runs = r;
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if report.is_some() {
                cfg.report_out = report;
            }
            cfg.validate()?;
            let rep = run_ablation(&cfg)?;
            print!("{}", rep.table());
            if let Some(path) = &cfg.report_out {
                write_report_csv(BufWriter::new(File::create(path)?), &rep.rows)?;
            }
        }
        Cmd::Play { agent, seat, watch, seed } => {
            let loaded = load_agent(&agent).with_context(|| format!("agent {}", agent.display()))?;
            let human = if watch {
                None
            } else {
                if seat == 0 || seat > loaded.game.num_players() {
                    bail!("seat must be between 1 and {}", loaded.game.num_players());
                }
                Some(seat - 1)
            };
            let stdin = io::stdin();
            let mut input = stdin.lock();
            let mut out = io::stdout().lock();
            play_interactive(&loaded.game, &loaded.agent, human, &mut input, &mut out, &mut rng_from_seed(seed))?;
        }
        Cmd::Inspect { agent } => {
            let loaded = load_agent(&agent).with_context(|| format!("agent {}", agent.display()))?;
            print!("{}", inspect_summary(&loaded.agent.net));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("ntfarl: {msg}");
            ExitCode::FAILURE
        }
    }
}
