use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use indexcode_bench::{bundled, circulant};
use indexcode_core::bersim::{simulate, Channel};
use indexcode_core::enumerate::enumerate_optimal_codes;
use indexcode_core::minmax::{first_plans, select_minmax};
use indexcode_core::optlen::optimal_length_minrank;
use indexcode_core::transfer::verify_optimality_by_theorem1;
use indexcode_core::{BerConfig, Gf2Matrix, IndexCode, Limits};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gf2(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = Gf2Matrix::from_fn(256, 256, |_, _| rng.random_bool(0.5));
    c.bench_function("rank_256x256", |b| b.iter(|| black_box(&m).rank()));
    c.bench_function("rref_256x256", |b| b.iter(|| black_box(&m).rref()));
    let a = Gf2Matrix::from_fn(128, 128, |_, _| rng.random_bool(0.5));
    c.bench_function("mul_128", |b| b.iter(|| black_box(&a).mul(&a).unwrap()));
}

fn search(c: &mut Criterion) {
    let limits = Limits::default();
    let p = circulant(8, 2);
    c.bench_function("minrank_circulant_8_2", |b| {
        b.iter(|| optimal_length_minrank(black_box(&p), &limits).unwrap())
    });
    let ex4 = bundled("ex4");
    c.bench_function("enumerate_four_message", |b| {
        b.iter(|| enumerate_optimal_codes(black_box(&ex4), &limits).unwrap())
    });
    c.bench_function("minmax_four_message", |b| {
        b.iter(|| select_minmax(black_box(&ex4), &limits).unwrap())
    });
    let su = bundled("ex2").normalize().unwrap();
    c.bench_function("optimality_check_two_known_c2", |b| {
        b.iter(|| verify_optimality_by_theorem1(black_box(&su), 2, &limits).unwrap())
    });
}

fn ber(c: &mut Criterion) {
    let p = bundled("ex4");
    let code = IndexCode::parse(4, "x3+x2, x2+x1, x1+x4+x3").unwrap();
    let plans = first_plans(&p, &code).unwrap();
    let cfg = BerConfig {
        snr_grid_db: vec![10.0],
        trials: 100_000,
        seed: 3,
        channel: Channel::RayleighBpsk,
    };
    c.bench_function("simulate_100k", |b| {
        b.iter_batched(|| cfg.clone(), |cfg| simulate(&p, &code, &plans, &cfg).unwrap(), BatchSize::SmallInput)
    });
}

criterion_group!(benches, gf2, search, ber);
criterion_main!(benches);
