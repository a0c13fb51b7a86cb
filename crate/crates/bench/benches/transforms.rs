use criterion::{black_box, criterion_group, criterion_main, Criterion};
use jeft_core::geometry::{busemann, polar_to_point, BoundaryPoint, Dim, Isometry};
use jeft_core::sampling::{sample_bump, BumpSpec, Profile, SamplingGrids};
use jeft_core::spectral::{c_function, spherical_phi};
use jeft_core::transforms::{helgason_forward, jeft_direct, JeftEvaluator};
use jeft_core::CFitConfig;
use num_complex::Complex64;

fn dims() -> [(Dim, &'static str); 2] {
    [(Dim::Two, "d2"), (Dim::Three, "d3")]
}

fn bump(dim: Dim) -> BumpSpec {
    let e1 = BoundaryPoint::e1(dim);
    let axis = BoundaryPoint::new(dim, &[0.0, 1.0, 0.0][..dim.as_usize()]).unwrap();
    let center = Isometry::translation_by(0.5, &e1).unwrap();
    BumpSpec::new(1.0, center, 0.5, axis, Profile::Smooth).unwrap()
}

fn geometry(c: &mut Criterion) {
    for (dim, tag) in dims() {
        let b = BoundaryPoint::e1(dim);
        let x = polar_to_point(1.3, &b).unwrap();
        c.bench_function(&format!("busemann/{tag}"), |bench| {
            bench.iter(|| busemann(black_box(&x), black_box(&b)).unwrap())
        });
    }
}

fn spectral(c: &mut Criterion) {
    let lam = Complex64::new(2.5, 0.0);
    for (dim, tag) in dims() {
        c.bench_function(&format!("spherical_phi/{tag}"), |bench| {
            bench.iter(|| spherical_phi(dim, black_box(lam), black_box(2.0)))
        });
    }
    c.bench_function("c_function/d2", |bench| {
        bench.iter(|| c_function(Dim::Two, black_box(lam), &CFitConfig::default()).unwrap())
    });
}

fn transforms(c: &mut Criterion) {
    let lam = Complex64::new(2.0, 0.0);
    let mut group = c.benchmark_group("transforms");
    group.sample_size(10);
    for (dim, tag) in dims() {
        let f = sample_bump(&bump(dim), &SamplingGrids::default_for(dim)).unwrap();
        let b = BoundaryPoint::e1(dim);
        let x = polar_to_point(0.7, &b).unwrap();
        group.bench_function(format!("helgason_forward/{tag}"), |bench| {
            bench.iter(|| helgason_forward(&f, black_box(lam), &b).unwrap())
        });
        group.bench_function(format!("jeft_evaluator_new/{tag}"), |bench| {
            bench.iter(|| JeftEvaluator::for_reach(&f, black_box(lam), 1.0).unwrap())
        });
        let eval = JeftEvaluator::for_reach(&f, lam, 1.0).unwrap();
        group.bench_function(format!("jeft_eval/{tag}"), |bench| {
            bench.iter(|| eval.eval(black_box(&x)).unwrap())
        });
        group.bench_function(format!("jeft_direct/{tag}"), |bench| {
            bench.iter(|| jeft_direct(&f, black_box(lam), &x).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, geometry, spectral, transforms);
criterion_main!(benches);
