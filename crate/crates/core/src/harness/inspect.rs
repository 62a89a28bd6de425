use std::fmt::Write as _;

use crate::ntuple::{NTupleNetwork, NetMode, Transfer};

/// Human-readable summary of a network: tuples, weight statistics and TCL
/// learning-rate statistics.
pub fn inspect_summary(net: &NTupleNetwork) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "meta: {}", net.meta());
    let mode = match net.mode() {
        NetMode::Value => "value".to_string(),
        NetMode::Action { n_actions } => format!("action ({n_actions} actions)"),
    };
    let _ = writeln!(s, "mode: {mode}, sigma: {}, symmetry: {} ({} maps)", net.sigma(), net.use_symmetry(), net.symmetries().len());
    let _ = writeln!(s, "cells: {}, alphabet: {}", net.num_cells(), net.alphabet());
    let _ = writeln!(s, "tuples: {}", net.num_tuples());
    for (i, t) in net.tuples().iter().enumerate() {
        let lo = net.lut_offset(i);
        let hi = lo + net.lut_len(i) * match net.mode() {
            NetMode::Value => 1,
            NetMode::Action { n_actions } => n_actions,
        };
        let active = (lo..hi).filter(|&j| net.is_touched(j)).count();
        let _ = writeln!(s, "  #{i:<3} len {:<2} cells {:?} active {active}/{}", t.len(), t.cells().collect::<Vec<_>>(), hi - lo);
    }
    let w = net.weights();
    let (mut min, mut max, mut abs_sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    for &x in w {
        min = min.min(x);
        max = max.max(x);
        abs_sum += x.abs();
    }
    let _ = writeln!(
        s,
        "weights: {} (active {:.4}%), min {min:.6}, max {max:.6}, mean |w| {:.6}",
        w.len(),
        100.0 * net.active_weight_fraction(),
        abs_sum / w.len().max(1) as f64
    );
    match net.tcl() {
        None => {
            let _ = writeln!(s, "tcl: off");
        }
        Some(t) => {
            let kind = match t.config.transfer {
                Transfer::Identity => "identity".to_string(),
                Transfer::Exp { beta } => format!("exp (beta {beta})"),
            };
            let rates: Vec<f64> = (0..w.len()).filter(|&j| net.is_touched(j)).map(|j| t.rate(j)).collect();
            let mean = if rates.is_empty() { 1.0 } else { rates.iter().sum::<f64>() / rates.len() as f64 };
            let low = rates.iter().filter(|&&r| r < 0.1).count();
            let _ = writeln!(
                s,
                "tcl: {kind}, init {}, mean rate over active weights {mean:.4}, {low} active weights below 0.1",
                t.config.init
            );
        }
    }
    let _ = writeln!(s, "checksum: {:08x}", net.weight_checksum());
    s
}
