use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ghzcert::angle::DirectionList;
use ghzcert::certify::{run_certification_pair, CertificationConfig, Ensemble};
use ghzcert::classifier::{m_set_exec, Mode};
use ghzcert::exec::Exec;
use ghzcert::ghz::canonical_angles;
use ghzcert::sweep::oracle_sweep;

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle_sweep");
    g.sample_size(10);
    for n in [4, 6] {
        for (name, exec) in POLICIES {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| oracle_sweep(black_box(n), 20, 1, 1e-9, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn certification(c: &mut Criterion) {
    let mut g = c.benchmark_group("certification");
    g.sample_size(10);
    let d = canonical_angles(6).unwrap();
    let b = DirectionList::sigma_z(6).unwrap();
    let mixed = Ensemble::maximally_mixed(6).unwrap();
    let cfg = CertificationConfig { shots: 2000, ..Default::default() };
    for (name, exec) in POLICIES {
        g.bench_function(name, |bench| {
            bench.iter(|| run_certification_pair(black_box(&mixed), &d, &b, &cfg, exec).unwrap())
        });
    }
    g.finish();
}

fn m_set_enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("m_set");
    let d = canonical_angles(18).unwrap();
    for (mode, mname) in [(Mode::Exact, "exact"), (Mode::Approx, "approx")] {
        for (name, exec) in POLICIES {
            g.bench_function(format!("{mname}/{name}"), |b| {
                b.iter(|| m_set_exec(black_box(&d), mode, 1e-9, exec).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, oracle, certification, m_set_enumeration);
criterion_main!(benches);
