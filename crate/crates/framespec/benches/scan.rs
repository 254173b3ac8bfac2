//! Compares the parallel and sequential grid-scan paths on a realistic
//! resolvent predicate. Build with `--no-default-features` to also time
//! the fully sequential library configuration.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use framespec::enclosures::{self, BoundingBox, RieszSplitData};
use framespec::frames;
use framespec::multipliers::Symbol;
use framespec::numerics::C64;

fn scan_benchmark(c: &mut Criterion) {
    let d = 32;
    let a: f64 = 0.75;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    let u = frames::random_unitary(d, &mut rng);
    let v = frames::random_unitary(d, &mut rng);
    let alphas = [C64::new(a.sqrt(), 0.0), C64::new((1.0 - a).sqrt(), 0.0)];
    let phi = frames::scaled_onb_union(d, &alphas, &[u, v]).unwrap();
    let m = Symbol::periodic(
        &[
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ],
        2 * d,
    );
    let indices: Vec<usize> = (0..2 * d).step_by(2).collect();
    let data = RieszSplitData::compute(&phi, &phi, &indices).unwrap();
    let bbox = BoundingBox {
        re_lo: -0.1,
        re_hi: 1.1,
        im_lo: -0.6,
        im_hi: 0.6,
    };
    let predicate = |z: C64| enclosures::riesz_split_resolvent(z, &m, &indices, &data);

    let mut group = c.benchmark_group("region_scan");
    for &n in &[101usize, 201, 401] {
        group.bench_with_input(BenchmarkId::new("default", n), &n, |b, &n| {
            b.iter(|| enclosures::region_scan(predicate, bbox, (n, n), "bench").unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| enclosures::region_scan_seq(predicate, bbox, (n, n), "bench").unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, scan_benchmark);
criterion_main!(benches);
