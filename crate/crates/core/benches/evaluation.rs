use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use setrisk::fixtures;
use setrisk::laws::{check_correspondence, check_measure_law, Direction, MeasureLaw, SampleBudget, Subject};
use setrisk::measures::{eval_measure, MeasureExpr};
use setrisk::rational::{frac, vec_of};

type Workload = (&'static str, Box<dyn Fn() + Sync>);

fn workloads() -> Vec<Workload> {
    let b = fixtures::mkt_b();
    let a = fixtures::mkt_a();
    let budget = SampleBudget::new(48, 7);
    let var = MeasureExpr::var_strong(frac(1, 4));
    let union = MeasureExpr::Union(vec![
        MeasureExpr::var_weak(frac(1, 4)),
        MeasureExpr::var_strong(frac(1, 2)),
        MeasureExpr::WorstCase.shift(vec_of(&[1, 1])),
    ]);
    let x = fixtures::var_x();
    vec![
        ("eval_union", {
            let b = b.clone();
            Box::new(move || {
                black_box(eval_measure(&b, &union, &x).unwrap());
            })
        }),
        ("law_R6_var", {
            let b = b.clone();
            let var = var.clone();
            Box::new(move || {
                black_box(check_measure_law(&b, &var, MeasureLaw::R6, &budget).unwrap());
            })
        }),
        ("correspondence_wc", {
            Box::new(move || {
                let wc = MeasureExpr::WorstCase;
                black_box(check_correspondence(&a, Subject::Measure(&wc), Direction::REqRar, &budget).unwrap());
            })
        }),
    ]
}

#[cfg(feature = "parallel")]
fn compare(c: &mut Criterion) {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    let mut group = c.benchmark_group("pool");
    group.sample_size(10);
    for (name, work) in workloads() {
        group.bench_function(BenchmarkId::new(name, "1-thread"), |bench| bench.iter(|| one.install(&work)));
        let label = format!("default-{}", all.current_num_threads());
        group.bench_function(BenchmarkId::new(name, label), |bench| bench.iter(|| all.install(&work)));
    }
    group.finish();
}

#[cfg(not(feature = "parallel"))]
fn compare(c: &mut Criterion) {
    let mut group = c.benchmark_group("pool");
    group.sample_size(10);
    for (name, work) in workloads() {
        group.bench_function(BenchmarkId::new(name, "sequential"), |bench| bench.iter(&work));
    }
    group.finish();
}

criterion_group!(benches, compare);
criterion_main!(benches);
