use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use llmrisk_bench::{prompt_injection_assignments, scheme, spread_assessments};
use llmrisk_core::{build_matrix, evaluate, render, Catalog, OutputFormat};

fn bench_evaluate(c: &mut Criterion) {
    let scheme = scheme();
    let assignments = prompt_injection_assignments();
    c.bench_function("evaluate/prompt_injection", |b| {
        b.iter(|| evaluate(black_box(&assignments), black_box(&scheme)).unwrap())
    });
}

fn bench_matrix(c: &mut Criterion) {
    let scheme = scheme();
    let catalog = Catalog::bundled();
    let mut group = c.benchmark_group("build_matrix");
    for n in [0usize, 2, 10] {
        let docs = spread_assessments(n);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &docs, |b, docs| {
            b.iter(|| build_matrix(&catalog, black_box(docs), &scheme, None).unwrap())
        });
    }
    group.finish();
}

fn bench_render(c: &mut Criterion) {
    let matrix = build_matrix(
        &Catalog::bundled(),
        &spread_assessments(10),
        &scheme(),
        None,
    )
    .unwrap();
    let mut group = c.benchmark_group("render");
    for format in [
        OutputFormat::Csv,
        OutputFormat::Markdown,
        OutputFormat::Json,
    ] {
        group.bench_function(format.to_string(), |b| {
            b.iter(|| render(black_box(&matrix), format))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_evaluate, bench_matrix, bench_render);
criterion_main!(benches);
