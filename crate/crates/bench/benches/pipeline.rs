use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use parseval_dilate::dynamics::{discover_partition, DEFAULT_MAX_SPLITS};
use parseval_dilate::encoding::{d_c, d_c_inv};
use parseval_dilate::filter::{
    aperiodic_filter, block_word, build_aperiodic_filter_prefix, build_cycle_filter,
};
use parseval_dilate::frame::{complement_gram, psd_report};
use parseval_dilate::rational::rat;
use parseval_dilate::wavelet::scaling_set;
use parseval_dilate::{dilate, Cycle, EPWord, Limits};
use parseval_dilate_bench::{example_strategies, example_wavelet, two_interval_set, CYCLE_WORDS};
use std::hint::black_box;

fn bench_dilate(c: &mut Criterion) {
    let p = example_wavelet();
    let mut group = c.benchmark_group("dilate");
    for (name, strategy) in example_strategies() {
        group.bench_function(name, |b| {
            b.iter(|| dilate(black_box(&p), &strategy, Limits::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("scaling_set");
    for den in [8i64, 64, 1024] {
        let p = two_interval_set(&rat(1, den));
        group.bench_with_input(BenchmarkId::from_parameter(den), &p, |b, p| {
            b.iter(|| scaling_set(p, 1024).unwrap())
        });
    }
    group.finish();
}

fn bench_partition(c: &mut Criterion) {
    let mut group = c.benchmark_group("discover_partition");
    for word in CYCLE_WORDS {
        let m = build_cycle_filter(&rat(1, 32), word).unwrap().m;
        group.bench_with_input(BenchmarkId::new("cycle", word.len()), &m, |b, m| {
            b.iter(|| discover_partition(m, DEFAULT_MAX_SPLITS).unwrap())
        });
    }
    for n in [10usize, 20, 40] {
        let (s_n, report) = build_aperiodic_filter_prefix(&block_word(n), 3, n).unwrap();
        let m = aperiodic_filter(&s_n, &report).unwrap().m;
        group.bench_with_input(BenchmarkId::new("aperiodic_prefix", n), &m, |b, m| {
            b.iter(|| discover_partition(m, DEFAULT_MAX_SPLITS).unwrap())
        });
    }
    group.finish();
}

fn bench_encoding(c: &mut Criterion) {
    let cycle = Cycle::from_word(&[1, 0, 0, 1, 1, 0, 0]).unwrap();
    let w: EPWord = "0110(1001100)".parse().unwrap();
    let x = rat(5, 17);
    c.bench_function("d_c_roundtrip", |b| {
        b.iter(|| {
            let (y, j) = d_c(black_box(&x), &w, &cycle).unwrap();
            d_c_inv(&y, j, &cycle).unwrap()
        })
    });
}

fn bench_gram(c: &mut Criterion) {
    let p = example_wavelet();
    let mut group = c.benchmark_group("complement_gram_psd");
    for (j, k) in [(1i64, 2i64), (2, 3), (3, 6)] {
        group.bench_function(format!("{j}x{k}"), |b| {
            b.iter(|| psd_report(&complement_gram(black_box(&p), j, k)))
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_dilate,
    bench_scaling,
    bench_partition,
    bench_encoding,
    bench_gram
);
criterion_main!(benches);
