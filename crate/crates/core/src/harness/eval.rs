use crate::error::{Error, Result};
use crate::game::{Game, GameRng, GameState};
use crate::games::AnyGame;
use crate::opponents::{OpponentSpec, Policy};

/// Mean and sample standard deviation (0 for fewer than two values).
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Outcome statistics for one seat (or all seats together).
#[derive(Clone, Debug, PartialEq)]
pub struct RoleStats {
    pub role: String,
    pub episodes: usize,
    /// Mean agent reward: win rate in 2-player games (win 1, draw 0.5).
    pub mean: f64,
    pub sd: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalEntry {
    pub opponent: String,
    pub overall: RoleStats,
    pub roles: Vec<RoleStats>,
}

pub const ROLE_NAMES: [&str; 3] = ["first", "second", "third"];

/// Plays one game from `start`; `seats[p]` moves for player `p`.
pub fn play_episode(
    game: &AnyGame,
    seats: &mut [&mut dyn Policy],
    start: GameState,
    rng: &mut GameRng,
) -> Result<GameState> {
    if seats.len() != game.num_players() {
        return Err(Error::InvalidParam(format!("{} seats for a {}-player game", seats.len(), game.num_players())));
    }
    let mut s = start;
    while !s.terminal {
        let a = seats[s.player()].choose(game, &s, rng)?;
        s = game.make_action(&s, a, true, rng)?.next_state;
    }
    Ok(s)
}

/// Evaluates `agent` on the game's standard evaluation start positions.
pub fn evaluate(
    game: &AnyGame,
    agent: &mut dyn Policy,
    opponent: &OpponentSpec,
    episodes: usize,
    rng: &mut GameRng,
) -> Result<EvalEntry> {
    let starts = game.evaluation_starts(rng);
    evaluate_from(game, agent, opponent, episodes, &starts, rng)
}

/// Plays `episodes` games, cycling the agent through every seat (the other
/// seats get independent instances of `opponent`) and, within each seat,
/// through `starts`. Single-player games ignore the opponent and report the
/// mean final score.
pub fn evaluate_from(
    game: &AnyGame,
    agent: &mut dyn Policy,
    opponent: &OpponentSpec,
    episodes: usize,
    starts: &[GameState],
    rng: &mut GameRng,
) -> Result<EvalEntry> {
    if starts.is_empty() {
        return Err(Error::InvalidParam("no start positions".into()));
    }
    let n = game.num_players();
    let mut opponents: Vec<Box<dyn Policy>> = (0..n.saturating_sub(1)).map(|_| opponent.build()).collect();
    let mut per_seat: Vec<Vec<f64>> = vec![Vec::new(); n];
    for i in 0..episodes {
        let seat = i % n;
        let start = starts[(i / n) % starts.len()];
        let mut others = opponents.iter_mut();
        let mut seats: Vec<&mut dyn Policy> = Vec::with_capacity(n);
        let mut agent_slot = Some(&mut *agent);
        for p in 0..n {
            if p == seat {
                seats.push(agent_slot.take().expect("agent seated once"));
            } else {
                seats.push(others.next().expect("enough opponent instances").as_mut());
            }
        }
        let end = play_episode(game, &mut seats, start, rng)?;
        per_seat[seat].push(end.scores[seat] - start.scores[seat]);
    }
    let all: Vec<f64> = per_seat.iter().flatten().copied().collect();
    let (mean, sd) = mean_sd(&all);
    let roles = if n == 1 {
        Vec::new()
    } else {
        per_seat
            .iter()
            .enumerate()
            .map(|(p, xs)| {
                let (m, s) = mean_sd(xs);
                RoleStats { role: ROLE_NAMES[p].into(), episodes: xs.len(), mean: m, sd: s }
            })
            .collect()
    };
    let opponent = if n == 1 { "none".to_string() } else { opponent.to_string() };
    Ok(EvalEntry { opponent, overall: RoleStats { role: "all".into(), episodes, mean, sd }, roles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::rng_from_seed;
    use crate::games::{new_game, GameSpec};
    use crate::opponents::RandomPlayer;

    #[test]
    fn seats_are_balanced() {
        let g = new_game(&GameSpec::nim3p(3, 5)).unwrap();
        let mut me = RandomPlayer;
        let e = evaluate(&g, &mut me, &OpponentSpec::Random, 100, &mut rng_from_seed(1)).unwrap();
        let counts: Vec<usize> = e.roles.iter().map(|r| r.episodes).collect();
        assert_eq!(counts, vec![34, 33, 33]);
        assert_eq!(e.overall.episodes, 100);
    }

    #[test]
    fn seat_count_mismatch_is_an_error() {
        let g = new_game(&GameSpec::tictactoe()).unwrap();
        let mut a = RandomPlayer;
        let s = g.initial_state(&mut rng_from_seed(0));
        let mut seats: Vec<&mut dyn Policy> = vec![&mut a];
        assert!(play_episode(&g, &mut seats, s, &mut rng_from_seed(0)).is_err());
    }

    #[test]
    fn mean_sd_values() {
        assert_eq!(mean_sd(&[]), (0.0, 0.0));
        assert_eq!(mean_sd(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_sd(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
