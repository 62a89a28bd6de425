use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::game::{ActionId, Cells, Game, GameState, Symmetry};
use crate::ntuple::horizon::{Activation, EligibilityHorizon};
use crate::ntuple::tcl::{TclConfig, TclState};
use crate::ntuple::tuple::NTupleDef;

/// Output squashing function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sigma {
    Identity,
    Tanh,
}

impl Sigma {
    #[inline]
    pub fn apply(self, nu: f64) -> f64 {
        match self {
            Sigma::Identity => nu,
            Sigma::Tanh => nu.tanh(),
        }
    }

    /// `σ'(ν)` written in terms of the output `V = σ(ν)`.
    #[inline]
    pub fn derivative_at_value(self, v: f64) -> f64 {
        match self {
            Sigma::Identity => 1.0,
            Sigma::Tanh => 1.0 - v * v,
        }
    }
}

impl FromStr for Sigma {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "identity" | "id" | "none" | "linear" => Ok(Sigma::Identity),
            "tanh" => Ok(Sigma::Tanh),
            other => Err(Error::InvalidParam(format!("unknown sigma '{other}' (identity|tanh)"))),
        }
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sigma::Identity => "identity",
            Sigma::Tanh => "tanh",
        })
    }
}

/// Single-output value net or one output per action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NetMode {
    Value,
    Action { n_actions: usize },
}

/// Everything needed to build a network.
#[derive(Clone, Debug)]
pub struct NetConfig {
    pub tuples: Vec<Vec<usize>>,
    pub alphabet: usize,
    pub num_cells: usize,
    pub mode: NetMode,
    pub sigma: Sigma,
    /// Full symmetry group, identity first.
    pub symmetries: Vec<Symmetry>,
    pub use_symmetry: bool,
    pub tcl: Option<TclConfig>,
}

type Orbit = SmallVec<[Cells; 8]>;

/// n-tuple look-up-table network with symmetric weight sharing.
///
/// Weights start at zero. For action nets the block of tuple `i` holds one
/// LUT per action, so the weight count is `N_a` times that of a value net
/// with the same tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct NTupleNetwork {
    tuples: Vec<NTupleDef>,
    offsets: Vec<usize>,
    lut_lens: Vec<usize>,
    num_cells: usize,
    mode: NetMode,
    sigma: Sigma,
    symmetries: Vec<Symmetry>,
    use_symmetry: bool,
    weights: Vec<f64>,
    touched: Vec<u64>,
    tcl: Option<TclState>,
    meta: String,
}

impl NTupleNetwork {
    pub fn new(cfg: NetConfig) -> Result<Self> {
        if cfg.tuples.is_empty() {
            return Err(Error::InvalidTuple("network needs at least one tuple".into()));
        }
        if let NetMode::Action { n_actions } = cfg.mode {
            if n_actions == 0 || n_actions > u16::MAX as usize {
                return Err(Error::InvalidParam(format!("bad action count {n_actions}")));
            }
        }
        let symmetries = if cfg.symmetries.is_empty() {
            let n_actions = match cfg.mode {
                NetMode::Action { n_actions } => n_actions,
                NetMode::Value => 0,
            };
            vec![Symmetry::identity(cfg.num_cells, n_actions)]
        } else {
            cfg.symmetries
        };
        for s in &symmetries {
            if s.cell_src.len() != cfg.num_cells {
                return Err(Error::InvalidParam("symmetry size differs from board size".into()));
            }
            if let NetMode::Action { n_actions } = cfg.mode {
                if s.action_map.len() != n_actions {
                    return Err(Error::InvalidParam("symmetry action map differs from action count".into()));
                }
            }
        }
        let tuples = cfg
            .tuples
            .into_iter()
            .map(|t| NTupleDef::new(t, cfg.alphabet, cfg.num_cells))
            .collect::<Result<Vec<_>>>()?;
        let per_action = match cfg.mode {
            NetMode::Value => 1,
            NetMode::Action { n_actions } => n_actions,
        };
        let lut_lens: Vec<usize> = tuples.iter().map(|t| t.lut_len()).collect();
        let mut offsets = Vec::with_capacity(tuples.len());
        let mut total = 0usize;
        for &l in &lut_lens {
            offsets.push(total);
            total = total
                .checked_add(l * per_action)
                .filter(|&t| t <= u32::MAX as usize)
                .ok_or_else(|| Error::InvalidTuple("network too large".into()))?;
        }
        if let Some(c) = &cfg.tcl {
            c.validate()?;
        }
        Ok(NTupleNetwork {
            tuples,
            offsets,
            lut_lens,
            num_cells: cfg.num_cells,
            mode: cfg.mode,
            sigma: cfg.sigma,
            symmetries,
            use_symmetry: cfg.use_symmetry,
            weights: vec![0.0; total],
            touched: vec![0; total.div_ceil(64)],
            tcl: cfg.tcl.map(|c| TclState::new(c, total)),
            meta: String::new(),
        })
    }

    /// Value or action net over `tuples` using the game's board shape and
    /// symmetry group.
    pub fn for_game<G: Game + ?Sized>(
        game: &G,
        tuples: Vec<Vec<usize>>,
        action_net: bool,
        sigma: Sigma,
        use_symmetry: bool,
        tcl: Option<TclConfig>,
    ) -> Result<Self> {
        let mode = if action_net { NetMode::Action { n_actions: game.num_actions() } } else { NetMode::Value };
        let mut syms = game.symmetries();
        if !action_net {
            for s in &mut syms {
                s.action_map.clear();
            }
        }
        NTupleNetwork::new(NetConfig {
            tuples,
            alphabet: game.cell_alphabet(),
            num_cells: game.num_cells(),
            mode,
            sigma,
            symmetries: syms,
            use_symmetry,
            tcl,
        })
    }

    pub fn tuples(&self) -> &[NTupleDef] {
        &self.tuples
    }

    pub fn num_tuples(&self) -> usize {
        self.tuples.len()
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn alphabet(&self) -> usize {
        self.tuples[0].alphabet()
    }

    pub fn mode(&self) -> NetMode {
        self.mode
    }

    pub fn sigma(&self) -> Sigma {
        self.sigma
    }

    pub fn symmetries(&self) -> &[Symmetry] {
        &self.symmetries
    }

    pub fn use_symmetry(&self) -> bool {
        self.use_symmetry
    }

    pub fn tcl(&self) -> Option<&TclState> {
        self.tcl.as_ref()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Direct weight access, e.g. for seeding tests. Does not mark weights
    /// as touched.
    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn num_weights(&self) -> usize {
        self.weights.len()
    }

    pub fn lut_offset(&self, tuple: usize) -> usize {
        self.offsets[tuple]
    }

    pub fn lut_len(&self, tuple: usize) -> usize {
        self.lut_lens[tuple]
    }

    /// Free-form `key=value` lines stored alongside the weights.
    pub fn meta(&self) -> &str {
        &self.meta
    }

    pub fn set_meta(&mut self, meta: impl Into<String>) {
        self.meta = meta.into();
    }

    pub fn is_touched(&self, j: usize) -> bool {
        self.touched[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn touched_count(&self) -> usize {
        self.touched.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Share of weights that were ever changed by an update.
    pub fn active_weight_fraction(&self) -> f64 {
        self.touched_count() as f64 / self.weights.len() as f64
    }

    /// CRC32 of the weight bytes.
    pub fn weight_checksum(&self) -> u32 {
        let mut h = crc32fast::Hasher::new();
        for w in &self.weights {
            h.update(&w.to_le_bytes());
        }
        h.finalize()
    }

    pub(crate) fn touched_words(&self) -> &[u64] {
        &self.touched
    }

    pub(crate) fn restore(
        &mut self,
        weights: Vec<f64>,
        touched: Vec<u64>,
        tcl: Option<(Vec<f64>, Vec<f64>)>,
        meta: String,
    ) -> Result<()> {
        if weights.len() != self.weights.len() || touched.len() != self.touched.len() {
            return Err(Error::Format("weight array length mismatch".into()));
        }
        self.weights = weights;
        self.touched = touched;
        match (&mut self.tcl, tcl) {
            (Some(state), Some((n, a))) if n.len() == state.net.len() && a.len() == state.abs.len() => {
                state.net = n;
                state.abs = a;
            }
            (None, None) => {}
            _ => return Err(Error::Format("TCL array mismatch".into())),
        }
        self.meta = meta;
        Ok(())
    }

    /// Checks that every cell of `s` fits the tuple alphabet.
    pub fn check_state(&self, s: &GameState) -> Result<()> {
        if s.cells.len() != self.num_cells {
            return Err(Error::InvalidParam(format!("board has {} cells, net expects {}", s.cells.len(), self.num_cells)));
        }
        for t in &self.tuples {
            t.lut_index(&s.cells)?;
        }
        Ok(())
    }

    fn orbit(&self, cells: &Cells) -> Orbit {
        let mut out = Orbit::new();
        out.push(*cells);
        if self.use_symmetry {
            for sym in self.symmetries.iter().skip(1) {
                let q = sym.apply_cells(cells);
                if !out.contains(&q) {
                    out.push(q);
                }
            }
        }
        out
    }

    /// Orbit of `(s, a)` as distinct (board, mapped action) pairs.
    fn action_orbit(&self, cells: &Cells, a: ActionId) -> SmallVec<[(Cells, u16); 8]> {
        let mut out: SmallVec<[(Cells, u16); 8]> = SmallVec::new();
        out.push((*cells, a.0));
        if self.use_symmetry {
            for sym in self.symmetries.iter().skip(1) {
                let pair = (sym.apply_cells(cells), sym.action_map[a.index()]);
                if !out.contains(&pair) {
                    out.push(pair);
                }
            }
        }
        out
    }

    /// Symmetric states of `s` the network sums over (`S(s)`, deduplicated).
    pub fn orbit_size(&self, s: &GameState) -> usize {
        self.orbit(&s.cells).len()
    }

    /// Activation `ν(s')`: the Eq.-2 double sum before squashing.
    pub fn activation_sum(&self, s: &GameState) -> f64 {
        debug_assert_eq!(self.mode, NetMode::Value);
        let mut nu = 0.0;
        for q in self.orbit(&s.cells) {
            for (t, &off) in self.tuples.iter().zip(&self.offsets) {
                nu += self.weights[off + t.index_fast(&q)];
            }
        }
        nu
    }

    /// `V(s') = σ(Σ_i Σ_{q ∈ S(s')} w_i[Ind_i(q)])`.
    pub fn value(&self, s: &GameState) -> f64 {
        self.sigma.apply(self.activation_sum(s))
    }

    fn action_nu(&self, cells: &Cells, a: ActionId) -> f64 {
        let mut nu = 0.0;
        for (q, b) in self.action_orbit(cells, a) {
            for ((t, &off), &len) in self.tuples.iter().zip(&self.offsets).zip(&self.lut_lens) {
                nu += self.weights[off + b as usize * len + t.index_fast(&q)];
            }
        }
        nu
    }

    pub fn q_value(&self, s: &GameState, a: ActionId) -> Result<f64> {
        match self.mode {
            NetMode::Action { n_actions } if a.index() < n_actions => Ok(self.sigma.apply(self.action_nu(&s.cells, a))),
            NetMode::Action { .. } => Err(Error::InvalidParam(format!("action {a} outside the net's alphabet"))),
            NetMode::Value => Err(Error::ModeMismatch("q_value needs an action net")),
        }
    }

    /// `Q(s, a)` for each action in `actions`, in order.
    pub fn q_values(&self, s: &GameState, actions: &[ActionId]) -> Result<Vec<f64>> {
        actions.iter().map(|&a| self.q_value(s, a)).collect()
    }

    fn finish_activation(&self, n_s: usize, all: Vec<u32>) -> Activation {
        let m = self.tuples.len();
        let mut unique = Vec::with_capacity(all.len());
        for i in 0..m {
            let start = unique.len();
            for q in 0..n_s {
                let j = all[q * m + i];
                if !unique[start..].contains(&j) {
                    unique.push(j);
                }
            }
        }
        Activation { n_s: n_s as u32, all, unique }
    }

    /// Weight indices activated by afterstate `s` (value nets).
    pub fn activation(&self, s: &GameState) -> Result<Activation> {
        if self.mode != NetMode::Value {
            return Err(Error::ModeMismatch("activation needs a value net"));
        }
        let orbit = self.orbit(&s.cells);
        let mut all = Vec::with_capacity(orbit.len() * self.tuples.len());
        for q in &orbit {
            for (t, &off) in self.tuples.iter().zip(&self.offsets) {
                all.push((off + t.index_fast(q)) as u32);
            }
        }
        Ok(self.finish_activation(orbit.len(), all))
    }

    /// Weight indices activated by the pair `(s, a)` (action nets).
    pub fn action_activation(&self, s: &GameState, a: ActionId) -> Result<Activation> {
        match self.mode {
            NetMode::Action { n_actions } if a.index() < n_actions => {}
            NetMode::Action { .. } => return Err(Error::InvalidParam(format!("action {a} outside the net's alphabet"))),
            NetMode::Value => return Err(Error::ModeMismatch("action_activation needs an action net")),
        }
        let orbit = self.action_orbit(&s.cells, a);
        let mut all = Vec::with_capacity(orbit.len() * self.tuples.len());
        for (q, b) in &orbit {
            for ((t, &off), &len) in self.tuples.iter().zip(&self.offsets).zip(&self.lut_lens) {
                all.push((off + *b as usize * len + t.index_fast(q)) as u32);
            }
        }
        Ok(self.finish_activation(orbit.len(), all))
    }

    /// Output for a precomputed activation.
    pub fn output(&self, act: &Activation) -> f64 {
        self.sigma.apply(act.all.iter().map(|&j| self.weights[j as usize]).sum())
    }

    /// One TD(λ) step for the newest horizon entry `s'_t` with error `delta`.
    ///
    /// Every entry `k` steps back contributes `α α_j δ λ^k σ'(ν) / (m N_S)`
    /// to each of its activated weights, each index at most once per
    /// (entry, tuple). Returns false when the step is skipped because
    /// `s'_t` came from an exploration move and `learn_from_rm` is off.
    pub fn td_lambda_update(
        &mut self,
        horizon: &mut EligibilityHorizon,
        delta: f64,
        alpha: f64,
        learn_from_rm: bool,
        random_generated: bool,
    ) -> bool {
        if !learn_from_rm && random_generated {
            return false;
        }
        let m = self.tuples.len() as f64;
        let lambda = horizon.lambda();
        let mut lp = 1.0;
        for entry in horizon.entries_mut() {
            let grad = match entry.grad {
                Some(g) => g,
                None => {
                    let g = self.sigma.derivative_at_value(self.output(&entry.act));
                    entry.grad = Some(g);
                    g
                }
            };
            let r = delta * lp * grad / (m * entry.act.n_s as f64);
            for &j in &entry.act.unique {
                self.apply(j as usize, r, alpha);
            }
            lp *= lambda;
        }
        true
    }

    #[inline]
    fn apply(&mut self, j: usize, r: f64, alpha: f64) {
        let dw = match &mut self.tcl {
            Some(tcl) => {
                let rate = tcl.rate(j);
                tcl.accumulate(j, r);
                alpha * rate * r
            }
            None => alpha * r,
        };
        if dw != 0.0 {
            self.weights[j] += dw;
            self.touched[j / 64] |= 1 << (j % 64);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::rng_from_seed;
    use crate::games::{Nim, TicTacToe};
    use crate::ntuple::horizon::EligibilityMode;

    fn ttt_net(sym: bool, sigma: Sigma) -> NTupleNetwork {
        NTupleNetwork::for_game(&TicTacToe, vec![(0..9).collect()], false, sigma, sym, None).unwrap()
    }

    #[test]
    fn zero_net_values() {
        let net = ttt_net(true, Sigma::Tanh);
        let s = TicTacToe.initial_state(&mut rng_from_seed(0));
        assert_eq!(net.value(&s), 0.0);
    }

    #[test]
    fn single_weight_identity() {
        let mut net = ttt_net(false, Sigma::Identity);
        let s = TicTacToe.state_from_str("X........");
        let j = net.activation(&s).unwrap().all[0] as usize;
        net.weights_mut()[j] = 0.5;
        assert_eq!(net.value(&s), 0.5);
    }

    #[test]
    fn corner_orbit_sums_four_contributions() {
        let mut net = ttt_net(true, Sigma::Identity);
        let s = TicTacToe.state_from_str("X........");
        let act = net.activation(&s).unwrap();
        assert_eq!(act.n_s, 4);
        for &j in &act.unique {
            net.weights_mut()[j as usize] = 0.25;
        }
        assert!((net.value(&s) - 1.0).abs() < 1e-15);
        assert_eq!(net.orbit_size(&TicTacToe.state_from_str("....X....")), 1);
    }

    #[test]
    fn one_step_reaches_target() {
        let mut net = NTupleNetwork::for_game(&TicTacToe, vec![(0..9).collect(), vec![0, 1, 2]], false, Sigma::Identity, false, None)
            .unwrap();
        let s = TicTacToe.state_from_str("X...O....");
        let mut hz = EligibilityHorizon::new(0, 0.0, EligibilityMode::Et);
        hz.push(net.activation(&s).unwrap());
        let delta = 1.0 - net.value(&s);
        assert!(net.td_lambda_update(&mut hz, delta, 1.0, true, false));
        assert_eq!(net.value(&s), 1.0);
        let j = net.activation(&s).unwrap().all[0] as usize;
        assert_eq!(net.weights()[j], 0.5);
    }

    #[test]
    fn skipped_update_changes_nothing() {
        let mut net = ttt_net(true, Sigma::Tanh);
        let s = TicTacToe.state_from_str("X........");
        let mut hz = EligibilityHorizon::new(0, 0.0, EligibilityMode::Et);
        hz.push(net.activation(&s).unwrap());
        assert!(!net.td_lambda_update(&mut hz, 1.0, 1.0, false, true));
        assert!(net.weights().iter().all(|&w| w == 0.0));
        assert_eq!(net.touched_count(), 0);
    }

    #[test]
    fn action_net_memory_factor() {
        let v = ttt_net(true, Sigma::Tanh);
        let q = NTupleNetwork::for_game(&TicTacToe, vec![(0..9).collect()], true, Sigma::Tanh, true, None).unwrap();
        assert_eq!(q.num_weights(), 9 * v.num_weights());
    }

    #[test]
    fn q_slice_isolation() {
        let mut q = NTupleNetwork::for_game(&TicTacToe, vec![(0..9).collect()], true, Sigma::Identity, false, None).unwrap();
        let s = TicTacToe.state_from_str("X...O....");
        let act = q.action_activation(&s, ActionId(3)).unwrap();
        q.weights_mut()[act.all[0] as usize] = 1.0;
        let vals = q.q_values(&s, &[ActionId(1), ActionId(3), ActionId(8)]).unwrap();
        assert_eq!(vals, vec![0.0, 1.0, 0.0]);
        assert!(ttt_net(false, Sigma::Identity).q_value(&s, ActionId(0)).is_err());
    }

    #[test]
    fn inhibition_on_repeated_index() {
        // Orbit of heaps (1,1,2): (1,1,2), (1,2,1), (2,1,1). The single-cell
        // tuple on heap 2 reads 2, 1, 1, so index "1" is activated twice.
        let g = Nim::new(3, 5, 2);
        let mut net = NTupleNetwork::for_game(&g, vec![vec![2]], false, Sigma::Identity, true, None).unwrap();
        let s = g.state_from_heaps(&[1, 1, 2], 0);
        let act = net.activation(&s).unwrap();
        assert_eq!(act.n_s, 3);
        assert_eq!(act.all.len(), 3);
        assert_eq!(act.unique.len(), 2);
        let mut hz = EligibilityHorizon::new(0, 0.0, EligibilityMode::Et);
        hz.push(act);
        net.td_lambda_update(&mut hz, 1.0, 1.0, true, false);
        assert_eq!(net.weights()[1], 1.0 / 3.0);
        assert_eq!(net.weights()[2], 1.0 / 3.0);
        assert!((net.value(&s) - 1.0).abs() < 1e-15);
    }
}
