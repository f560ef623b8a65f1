//! Workloads shared by the benchmarks.

use revasm::harness::{random_module, SizeBounds};
use revasm::{corpus, Module};

/// The three corpus modules followed by `n` generated ones.
pub fn suite(n: u64) -> Vec<Module> {
    let mut mods = corpus::principal();
    mods.extend((0..n).map(|s| random_module(s, SizeBounds::default())));
    mods
}

/// Sort over an input of `len` distinct naturals, as initial-state seeds
/// for `sort_fn`.
pub fn sort_input(len: u64) -> Vec<revasm::Seed> {
    let xs = (0..len).rev().map(revasm::Value::nat);
    vec![revasm::Seed::new("inp", vec![], revasm::Value::tuple(xs))]
}
