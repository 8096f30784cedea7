//! Grid-sweep benchmarks: the library's (feature-dependent) execution path
//! against an explicit single-threaded baseline doing identical work.
//!
//! With the default `parallel` feature the "library" cases run on the rayon
//! pool; rebuilding with `--no-default-features` makes them sequential, so
//! the two configurations can be compared against the fixed baseline.

use std::f64::consts::PI;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use telsim_core::lindblad::{evolve_expm, NoiseKind};
use telsim_core::quadrature;
use telsim_core::states::{make_channel, BlochAngles};
use telsim_core::teleport::{avg_fidelity_numeric, build_circuit, fidelity, rho_out, StdChannel};

fn bench_avg_fidelity(c: &mut Criterion) {
    let u = build_circuit(StdChannel::Ghz).expect("circuit");
    let rho0 = make_channel(&StdChannel::Ghz.kind()).expect("state").density();
    let chan = evolve_expm(&rho0, &NoiseKind::AxisX.spec(3, 1.0), 0.5).expect("evolve");

    let mut group = c.benchmark_group("avg_fidelity_512_nodes");
    group.sample_size(20);
    group.bench_function("library", |b| {
        b.iter(|| avg_fidelity_numeric(&u, &chan).unwrap())
    });
    group.bench_function("sequential_baseline", |b| {
        let (xs, ws) = quadrature::gauss_legendre(quadrature::THETA_NODES);
        b.iter(|| {
            let mut total = 0.0;
            for (x, w) in xs.iter().zip(&ws) {
                let theta = x.clamp(-1.0, 1.0).acos();
                for j in 0..quadrature::PHI_NODES {
                    let phi = 2.0 * PI * j as f64 / quadrature::PHI_NODES as f64;
                    let angles = BlochAngles::wrapped(theta, phi).unwrap();
                    total +=
                        w * fidelity(&rho_out(&u, &angles, &chan).unwrap(), &angles).unwrap();
                }
            }
            total * (2.0 * PI / quadrature::PHI_NODES as f64) / (4.0 * PI)
        })
    });
    group.finish();
}

fn bench_surface_grid(c: &mut Criterion) {
    let u = build_circuit(StdChannel::W).expect("circuit");
    let rho0 = make_channel(&StdChannel::W.kind()).expect("state").density();
    let chan = evolve_expm(&rho0, &NoiseKind::Isotropic.spec(3, 1.0), 0.5).expect("evolve");
    let n = 31usize;

    let mut group = c.benchmark_group("fidelity_surface_31x31");
    group.sample_size(10);
    group.bench_function("library", |b| {
        b.iter(|| {
            let vals = telsim_core::exec::map_indexed(n * n, |idx| {
                let theta = PI * (idx / n) as f64 / (n - 1) as f64;
                let phi = 2.0 * PI * (idx % n) as f64 / (n - 1) as f64;
                let angles = BlochAngles::wrapped(theta, phi).unwrap();
                fidelity(&rho_out(&u, &angles, &chan).unwrap(), &angles).unwrap()
            });
            vals.iter().sum::<f64>()
        })
    });
    group.bench_function("sequential_baseline", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for idx in 0..n * n {
                let theta = PI * (idx / n) as f64 / (n - 1) as f64;
                let phi = 2.0 * PI * (idx % n) as f64 / (n - 1) as f64;
                let angles = BlochAngles::wrapped(theta, phi).unwrap();
                acc += fidelity(&rho_out(&u, &angles, &chan).unwrap(), &angles).unwrap();
            }
            acc
        })
    });
    group.finish();
}

fn bench_w_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("w_circuit_search");
    group.sample_size(10);
    group.bench_function("build", |b| {
        b.iter_batched(
            || (),
            |_| build_circuit(StdChannel::W).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, bench_avg_fidelity, bench_surface_grid, bench_w_search);
criterion_main!(benches);
