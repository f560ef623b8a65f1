//! The hand-simplified reversible pairs of the corpus against the generic
//! reversifier.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use revasm::harness::{roundtrip_pair, CheckConfig};
use revasm::{corpus, interp, parse_module, reversify, Module, Oracle, Seed, Value};

const INSTANCES: u64 = 50;

fn sort_instance(seed: u64) -> Vec<Seed> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<u64> = (0..7).collect();
    pool.shuffle(&mut rng);
    (0..3)
        .map(|i| Seed::new("f", vec![Value::nat(i)], Value::nat(pool[i as usize])))
        .collect()
}

fn bisection_instance(seed: u64) -> Vec<Seed> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Value::ratio(-rng.gen_range(0..16), 16);
    let b = Value::ratio(rng.gen_range(9..33), 16);
    vec![Seed::new("a", vec![], a), Seed::new("b", vec![], b)]
}

/// Checks that (`b`, `c`) round-trips and that `b` agrees with the generic
/// expansion of `a` on the vocabulary of `a`.
fn check_pair(a: &Module, b: &Module, c: &Module, instance: fn(u64) -> Vec<Seed>) {
    let generic = reversify(a).unwrap().b;
    for seed in 0..INSTANCES {
        let overrides = instance(seed);
        let cfg = CheckConfig {
            overrides: overrides.clone(),
            ..CheckConfig::default()
        };
        let r = roundtrip_pair(b, c, &cfg).unwrap();
        assert!(r.passed(), "{} instance {seed}: {r}", b.name);
        assert!(r.stats.forward_steps > 0);

        let hand = interp::run(b, &overrides, &mut Oracle::none(), cfg.budget).unwrap();
        let gen = interp::run(&generic, &overrides, &mut Oracle::none(), cfg.budget).unwrap();
        assert_eq!(hand.steps(), gen.steps());
        assert_eq!(hand.stop, gen.stop);
        for (i, (x, y)) in hand.states.iter().zip(&gen.states).enumerate() {
            assert_eq!(
                x.reduct(&a.vocab).unwrap(),
                y.reduct(&a.vocab).unwrap(),
                "{} instance {seed} step {i}",
                b.name
            );
        }
    }
}

fn load(src: &str) -> Module {
    corpus::load(src)
}

#[test]
fn bisection_pair() {
    check_pair(
        &corpus::bisection(),
        &load(corpus::BISECTION_B_HAND),
        &load(corpus::BISECTION_C_HAND),
        bisection_instance,
    );
}

#[test]
fn sort_pair_keeping_both() {
    check_pair(
        &corpus::sort(),
        &load(corpus::SORT_B_HAND),
        &load(corpus::SORT_C_HAND),
        sort_instance,
    );
}

#[test]
fn sort_pair_without_g1() {
    check_pair(
        &corpus::sort(),
        &load(corpus::SORT_B_KEEP_F0),
        &load(corpus::SORT_C_KEEP_F0),
        sort_instance,
    );
}

#[test]
fn sort_pair_without_f0() {
    check_pair(
        &corpus::sort(),
        &load(corpus::SORT_B_KEEP_G1),
        &load(corpus::SORT_C_KEEP_G1),
        sort_instance,
    );
}

fn fails_somewhere(b: &str, c: &str, instance: fn(u64) -> Vec<Seed>) -> bool {
    let (b, c) = (parse_module(b).unwrap(), parse_module(c).unwrap());
    (0..INSTANCES).any(|seed| {
        let cfg = CheckConfig {
            overrides: instance(seed),
            ..CheckConfig::default()
        };
        !roundtrip_pair(&b, &c, &cfg).unwrap().passed()
    })
}

// The inverses as literally transcribed, before the corrections noted in the
// corpus files, do not reverse their forward programs.

#[test]
fn literal_sort_inverse_writes_the_wrong_entry() {
    let c = corpus::SORT_C_HAND.replace("f(l - 1) := f0(k)", "f(l) := f0(k)");
    assert_ne!(c, corpus::SORT_C_HAND);
    assert!(fails_somewhere(corpus::SORT_B_HAND, &c, sort_instance));
    let c = corpus::SORT_C_KEEP_G1.replace("f(l - 1) := g1(l)", "f(l) := g1(l + 1)");
    assert_ne!(c, corpus::SORT_C_KEEP_G1);
    assert!(fails_somewhere(corpus::SORT_B_KEEP_G1, &c, sort_instance));
}

#[test]
fn literal_bisection_inverse_undoes_the_last_step_twice() {
    let c = corpus::BISECTION_C_HAND.replace("else if c = nil then", "else");
    assert_ne!(c, corpus::BISECTION_C_HAND);
    assert!(fails_somewhere(corpus::BISECTION_B_HAND, &c, bisection_instance));
}
