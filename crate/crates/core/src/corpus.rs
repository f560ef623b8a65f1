//! The bundled example modules, embedded at compile time.

use crate::syntax::{parse_module, Module};

pub const BISECTION: &str = include_str!("../../../corpus/bisection.asm");
pub const BISECTION_B_HAND: &str = include_str!("../../../corpus/bisection_B_hand.asm");
pub const BISECTION_C_HAND: &str = include_str!("../../../corpus/bisection_C_hand.asm");
pub const SORT: &str = include_str!("../../../corpus/sort.asm");
pub const SORT_FN: &str = include_str!("../../../corpus/sort_fn.asm");
pub const SORT_B_HAND: &str = include_str!("../../../corpus/sort_B_hand.asm");
pub const SORT_C_HAND: &str = include_str!("../../../corpus/sort_C_hand.asm");
pub const SORT_B_KEEP_F0: &str = include_str!("../../../corpus/sort_B_keep_f0.asm");
pub const SORT_C_KEEP_F0: &str = include_str!("../../../corpus/sort_C_keep_f0.asm");
pub const SORT_B_KEEP_G1: &str = include_str!("../../../corpus/sort_B_keep_g1.asm");
pub const SORT_C_KEEP_G1: &str = include_str!("../../../corpus/sort_C_keep_g1.asm");
pub const KARGER: &str = include_str!("../../../corpus/karger.asm");

/// Every bundled file as `(file name, source)`.
pub const ALL: &[(&str, &str)] = &[
    ("bisection.asm", BISECTION),
    ("bisection_B_hand.asm", BISECTION_B_HAND),
    ("bisection_C_hand.asm", BISECTION_C_HAND),
    ("sort.asm", SORT),
    ("sort_fn.asm", SORT_FN),
    ("sort_B_hand.asm", SORT_B_HAND),
    ("sort_C_hand.asm", SORT_C_HAND),
    ("sort_B_keep_f0.asm", SORT_B_KEEP_F0),
    ("sort_C_keep_f0.asm", SORT_C_KEEP_F0),
    ("sort_B_keep_g1.asm", SORT_B_KEEP_G1),
    ("sort_C_keep_g1.asm", SORT_C_KEEP_G1),
    ("karger.asm", KARGER),
];

/// Parses a bundled source; the bundled files are known to be valid.
pub fn load(src: &str) -> Module {
    match parse_module(src) {
        Ok(m) => m,
        Err(d) => panic!("bundled module does not parse: {d:?}"),
    }
}

pub fn bisection() -> Module {
    load(BISECTION)
}

pub fn sort() -> Module {
    load(SORT)
}

pub fn karger() -> Module {
    load(KARGER)
}

/// The three principal example modules.
pub fn principal() -> Vec<Module> {
    vec![bisection(), sort(), karger()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_file_parses_and_validates() {
        for (name, src) in ALL {
            if let Err(d) = parse_module(src) {
                panic!("{name}: {d:?}");
            }
        }
    }
}
