use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use revasm::harness::{faithfulness_check, lemma_checks_with, roundtrip_pair, CheckConfig};
use revasm::{corpus, interp, parse_module, print_module, reversify, Oracle};
use revasm_bench::{sort_input, suite};

fn parse_print(c: &mut Criterion) {
    let text = print_module(&reversify(&corpus::sort()).unwrap().b);
    c.bench_function("parse sort_B", |b| {
        b.iter(|| parse_module(black_box(&text)).unwrap())
    });
    let m = parse_module(&text).unwrap();
    c.bench_function("print sort_B", |b| b.iter(|| print_module(black_box(&m))));
}

fn interpret(c: &mut Criterion) {
    let m = corpus::sort();
    c.bench_function("run sort", |b| {
        b.iter(|| interp::run(&m, &[], &mut Oracle::none(), 100).unwrap())
    });
    let m = corpus::bisection();
    c.bench_function("run bisection", |b| {
        b.iter(|| interp::run(&m, &[], &mut Oracle::none(), 100).unwrap())
    });

    let f = corpus::load(corpus::SORT_FN);
    let mut group = c.benchmark_group("sort_fn by input length");
    for len in [8u64, 32, 128] {
        let mut m = f.clone();
        m.bind("n", revasm::Binding::Const(revasm::Value::nat(len)));
        let seeds = sort_input(len);
        group.bench_with_input(BenchmarkId::from_parameter(len), &len, |b, _| {
            b.iter(|| interp::run(&m, &seeds, &mut Oracle::none(), 1000).unwrap())
        });
    }
    group.finish();
}

fn reversifier(c: &mut Criterion) {
    let mods = suite(50);
    c.bench_function("reversify 53 modules", |b| {
        b.iter(|| mods.iter().map(|m| reversify(m).unwrap()).collect::<Vec<_>>())
    });
}

fn checks(c: &mut Criterion) {
    let mut group = c.benchmark_group("checks");
    group.sample_size(10);
    let mods = suite(20);
    let arts: Vec<_> = mods.iter().map(|m| reversify(m).unwrap()).collect();
    let cfg = CheckConfig::with_budget(300);
    group.bench_function("roundtrip", |b| {
        b.iter(|| {
            arts.iter()
                .filter(|a| roundtrip_pair(&a.b, &a.c, &cfg).unwrap().passed())
                .count()
        })
    });
    group.bench_function("faithfulness", |b| {
        b.iter(|| {
            arts.iter()
                .filter(|a| faithfulness_check(&a.source, &a.b, &cfg).unwrap().passed())
                .count()
        })
    });
    group.bench_function("lemmas", |b| {
        b.iter(|| {
            arts.iter()
                .filter(|a| lemma_checks_with(a, &cfg).unwrap().passed())
                .count()
        })
    });
    group.finish();
}

criterion_group!(benches, parse_print, interpret, reversifier, checks);
criterion_main!(benches);
