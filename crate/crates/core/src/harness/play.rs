use std::io::{BufRead, Write};

use crate::agents::GreedyAgent;
use crate::error::{Error, Result};
use crate::game::{Game, GameRng, GameState};
use crate::games::AnyGame;

/// Terminal game between a human at `human_seat` and the agent on all other
/// seats (`None`: the agent plays every seat). Illegal or unreadable input
/// is rejected with a re-prompt; `quit` ends the game early.
pub fn play_interactive<R: BufRead, W: Write>(
    game: &AnyGame,
    agent: &GreedyAgent,
    human_seat: Option<usize>,
    input: &mut R,
    out: &mut W,
    rng: &mut GameRng,
) -> Result<GameState> {
    if let Some(h) = human_seat {
        if h >= game.num_players() {
            return Err(Error::InvalidParam(format!("seat {h} does not exist in a {}-player game", game.num_players())));
        }
    }
    let mut s = game.initial_state(rng);
    let mut line = String::new();
    while !s.terminal {
        write!(out, "{}", game.render(&s))?;
        let p = s.player();
        let a = if Some(p) == human_seat {
            let legal = game.legal_actions(&s)?;
            let labels: Vec<String> = legal.iter().map(|&a| game.action_label(a)).collect();
            writeln!(out, "legal moves: {}", labels.join(" "))?;
            loop {
                write!(out, "your move> ")?;
                out.flush()?;
                line.clear();
                if input.read_line(&mut line)? == 0 {
                    return Err(Error::InvalidParam("input closed before the game ended".into()));
                }
                let text = line.trim();
                if text == "quit" || text == "q" {
                    writeln!(out, "game abandoned")?;
                    return Ok(s);
                }
                match game.parse_action(text) {
                    Some(a) if legal.contains(&a) => break a,
                    _ => writeln!(out, "illegal move '{text}', try again")?,
                }
            }
        } else {
            let a = agent.choose(game, &s, rng)?;
            writeln!(out, "agent (player {}) plays {}", p + 1, game.action_label(a))?;
            a
        };
        s = game.make_action(&s, a, true, rng)?.next_state;
    }
    write!(out, "{}", game.render(&s))?;
    let scores: Vec<String> = (0..game.num_players()).map(|p| format!("player {}: {}", p + 1, s.scores[p])).collect();
    writeln!(out, "game over. {}", scores.join(", "))?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::rng_from_seed;
    use crate::games::{new_game, GameSpec};
    use crate::ntuple::{NTupleNetwork, Sigma};

    #[test]
    fn occupied_cell_is_reprompted() {
        let g = new_game(&GameSpec::tictactoe()).unwrap();
        let net = NTupleNetwork::for_game(&g, vec![(0..9).collect()], false, Sigma::Tanh, true, None).unwrap();
        let agent = GreedyAgent::new(net);
        // Human plays first at 4; typing 4 again must be rejected.
        let mut input = std::io::Cursor::new("4\n4\nzz\n0\n1\n2\n3\n5\n6\n7\n8\n");
        let mut out = Vec::new();
        let end = play_interactive(&g, &agent, Some(0), &mut input, &mut out, &mut rng_from_seed(3)).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("illegal move '4', try again"));
        assert!(text.contains("illegal move 'zz', try again"));
        assert!(end.terminal || text.contains("game over"));
    }

    #[test]
    fn closed_input_is_an_error() {
        let g = new_game(&GameSpec::nim(3, 5)).unwrap();
        let net = NTupleNetwork::for_game(&g, vec![vec![0, 1, 2]], false, Sigma::Tanh, false, None).unwrap();
        let mut input = std::io::Cursor::new("");
        let r = play_interactive(&g, &GreedyAgent::new(net), Some(0), &mut input, &mut Vec::new(), &mut rng_from_seed(0));
        assert!(r.is_err());
    }
}
