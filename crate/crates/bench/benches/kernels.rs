use conelab_bench::{classes, cp2_3_config, deep_class};
use conelab_core::audit::interior_start;
use conelab_core::cones::{cone_from_rays, conic_certificate, dual_cone, k_symplectic_cone};
use conelab_core::configurations::validate_configuration;
use conelab_core::cremona::cremona_reduce;
use conelab_core::enumeration::{exceptional_classes, nine_squares_representations};
use conelab_core::inflation::achieve_all_rays;
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn enumeration(c: &mut Criterion) {
    c.bench_function("exceptional_classes k=6", |b| b.iter(|| exceptional_classes(black_box(6))));
    c.bench_function("nine_squares 54", |b| b.iter(|| nine_squares_representations(black_box(54), true)));
}

fn cones(c: &mut Criterion) {
    let rays = exceptional_classes(5).expect("k=5");
    c.bench_function("dual of -1 cone k=5", |b| b.iter(|| dual_cone(&cone_from_rays(black_box(&rays)).unwrap())));
    c.bench_function("k-symplectic cone k=4", |b| b.iter(|| k_symplectic_cone(black_box(4))));
    let gens = classes(3, &["E1", "E2", "E3", "H-E1-E2", "H-E1-E3", "H-E2-E3"]);
    let x = classes(3, &["5H-2E1-2E2-E3"]).remove(0);
    c.bench_function("conic certificate", |b| b.iter(|| conic_certificate(black_box(&gens), black_box(&x))));
}

fn cremona(c: &mut Criterion) {
    let x = deep_class();
    c.bench_function("cremona reduce k=6", |b| b.iter(|| cremona_reduce(black_box(&x), 1_000)));
}

fn configurations(c: &mut Criterion) {
    let cfg = cp2_3_config(1);
    c.bench_function("validate cp2+3 case 1", |b| b.iter(|| validate_configuration(black_box(&cfg))));
    let start = interior_start(&cfg.curves).expect("interior start");
    c.bench_function("achieve all rays cp2+3 case 1", |b| {
        b.iter(|| achieve_all_rays(black_box(&cfg.curves), black_box(&start)))
    });
}

criterion_group!(benches, enumeration, cones, cremona, configurations);
criterion_main!(benches);
