//! Max-N search on a few positions: backed-up value tuples for two- and
//! three-player games.
//!
//! `cargo run --release --example maxn_search`

use ntuple_farl::game::rng_from_seed;
use ntuple_farl::games::{Nim, TicTacToe};
use ntuple_farl::opponents::max_n_search;

fn main() -> ntuple_farl::Result<()> {
    let mut rng = rng_from_seed(0);
    let ttt = TicTacToe;
    for board in [".........", "X...O....", "XX.OO...."] {
        let s = ttt.state_from_str(board);
        let r = max_n_search(&ttt, &s, 9, &mut rng)?;
        println!("tictactoe {board}: play {} value {:?}", r.action, r.value.as_slice());
    }
    let nim3 = Nim::new(3, 5, 3);
    for heaps in [[1u8, 2, 3], [5, 5, 5], [0, 1, 1]] {
        let s = nim3.state_from_heaps(&heaps, 0);
        let r = max_n_search(&nim3, &s, 15, &mut rng)?;
        println!("nim3p {heaps:?}: play {} value {:?}", r.action, r.value.as_slice());
    }
    Ok(())
}
