use ghzcert::angle::{Angle, DirectionList};
use ghzcert::certify::{measure_round, run_certification, run_certification_pair, CertificationConfig, Ensemble};
use ghzcert::eigensolver::solve_common_eigenspace;
use ghzcert::exec::Exec;
use ghzcert::ghz::canonical_angles;
use ghzcert::observables::product_observable;
use ghzcert::tensor::StateVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let amps = (0..1 << n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    StateVector::from_amplitudes(amps).unwrap().normalized().unwrap()
}

fn random_directions(rng: &mut ChaCha8Rng, n: usize) -> DirectionList {
    DirectionList::new(
        (0..n).map(|_| Angle::radians(rng.random_range(0.0..std::f64::consts::PI))).collect(),
        (0..n).map(|_| Angle::radians(rng.random_range(-3.2..3.2))).collect(),
    )
    .unwrap()
}

#[test]
fn empirical_means_track_expectations() {
    let shots = 4000;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..25 {
        let n = rng.random_range(1..=4);
        let psi = random_state(&mut rng, n);
        let d = random_directions(&mut rng, n);
        let exact = psi.inner(&product_observable(&d).unwrap().apply(&psi).unwrap()).unwrap().re;
        let sum: i64 = (0..shots).map(|_| measure_round(&psi, &d, &mut rng).unwrap().product as i64).sum();
        let mean = sum as f64 / shots as f64;
        assert!((mean - exact).abs() <= 5.0 / (shots as f64).sqrt(), "{mean} vs {exact}");
    }
}

#[test]
fn stabilized_state_has_uniform_local_marginals() {
    let shots = 8000;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 2..=5 {
        let d = canonical_angles(n).unwrap();
        let b = DirectionList::sigma_z(n).unwrap();
        let psi = solve_common_eigenspace(&d, 1e-9).unwrap().basis.vectors()[0].clone();
        for setting in [&d, &b] {
            let mut ups = vec![0usize; n];
            for _ in 0..shots {
                let out = measure_round(&psi, setting, &mut rng).unwrap();
                assert_eq!(out.product, 1);
                for (l, &o) in out.locals.iter().enumerate() {
                    ups[l] += usize::from(o == 1);
                }
            }
            for u in ups {
                assert!((u as f64 / shots as f64 - 0.5).abs() <= 5.0 * 0.5 / (shots as f64).sqrt());
            }
        }
    }
}

#[test]
fn unique_state_passes_with_exact_means() {
    for n in 2..=6 {
        let d = canonical_angles(n).unwrap();
        let psi = solve_common_eigenspace(&d, 1e-9).unwrap().basis.vectors()[0].clone();
        let r = run_certification(&psi, &d, &CertificationConfig::default()).unwrap();
        assert!(r.pass);
        assert_eq!((r.mean_a, r.mean_b), (1.0, 1.0));
        assert_eq!(r.count_a + r.count_b, 10_000);
    }
}

#[test]
fn reports_are_reproducible() {
    let d = canonical_angles(4).unwrap();
    let b = DirectionList::sigma_z(4).unwrap();
    let mixed = Ensemble::maximally_mixed(4).unwrap();
    let cfg = CertificationConfig { shots: 3000, seed: 99, ..Default::default() };
    let first = run_certification_pair(&mixed, &d, &b, &cfg, Exec::Parallel).unwrap();
    let again = run_certification_pair(&mixed, &d, &b, &cfg, Exec::Parallel).unwrap();
    let seq = run_certification_pair(&mixed, &d, &b, &cfg, Exec::Sequential).unwrap();
    assert_eq!(first, again);
    assert_eq!(first, seq);
    let other =
        run_certification_pair(&mixed, &d, &b, &CertificationConfig { seed: 100, ..cfg }, Exec::Parallel).unwrap();
    assert_ne!(first, other);
}
