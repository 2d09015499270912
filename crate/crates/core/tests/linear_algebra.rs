use ghzcert::tensor::{
    fidelity, kron, null_space, null_space_of, subspace_distance, svd, Operator, StateVector, SubspaceBasis,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn gaussian(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(r, c, |_, _| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
}

fn random_state(rng: &mut ChaCha8Rng, n: u32) -> StateVector {
    let v = gaussian(rng, 1 << n, 1).column(0).into_owned();
    StateVector::new(n, v).unwrap().normalized().unwrap()
}

fn random_operator(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    Operator::new(gaussian(rng, dim, dim)).unwrap()
}

#[test]
fn svd_reconstructs_rank_deficient_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let (r, c) = (rng.random_range(1..30), rng.random_range(1..30));
        let k = rng.random_range(1..=r.min(c));
        let a = gaussian(&mut rng, r, k) * gaussian(&mut rng, k, c);
        let s = svd(&a, true).unwrap();
        let mut sigma = DMatrix::zeros(r, c);
        for i in 0..r.min(c) {
            sigma[(i, i)] = Complex64::new(s.singular_values[i], 0.0);
        }
        let rebuilt = s.u.as_ref().unwrap() * sigma * s.v.adjoint();
        assert!((rebuilt - &a).norm() <= 1e-12 * a.norm());
        assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn null_space_of_low_rank_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let n = rng.random_range(1..=6u32);
        let dim = 1usize << n;
        let rank = rng.random_range(0..=dim);
        let rows = rng.random_range(1..=2 * dim);
        let m = gaussian(&mut rng, rows, rank.min(rows)) * gaussian(&mut rng, rank.min(rows), dim);
        let ns = null_space_of(&m, 1e-9).unwrap();
        assert_eq!(ns.basis.len(), dim - rank.min(rows));
        assert_eq!(ns.rank(), rank.min(rows));
        assert!(ns.basis.gram_deviation() < 1e-10);
        for v in ns.basis.vectors() {
            assert!((&m * v.amplitudes()).norm() <= 1e-9 * m.norm().max(1.0));
        }
    }
}

#[test]
fn null_space_of_exactly_degenerate_structure() {
    // Kernel spanned by every fifth column of a random unitary.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = gaussian(&mut rng, 64, 64).qr().q();
    let diag = DMatrix::from_fn(64, 64, |i, j| {
        if i == j && i % 5 != 0 {
            Complex64::new(0.5, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let m = &u * diag * u.adjoint();
    let basis = null_space(&Operator::new(m.clone()).unwrap(), 1e-9).unwrap();
    assert_eq!(basis.len(), 13);
    let expected = SubspaceBasis::orthonormalize(
        64,
        &(0..64).step_by(5).map(|k| StateVector::new(6, u.column(k).into_owned()).unwrap()).collect::<Vec<_>>(),
        1e-12,
    )
    .unwrap();
    assert!(subspace_distance(&basis, &expected).unwrap() < 1e-10);
}

#[test]
fn kron_matches_elementwise_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a = random_operator(&mut rng, 2);
    let b = random_operator(&mut rng, 4);
    let k = kron(&a, &b).unwrap();
    for r in 0..8 {
        for c in 0..8 {
            let want = a.matrix()[(r / 4, c / 4)] * b.matrix()[(r % 4, c % 4)];
            assert_eq!(k.matrix()[(r, c)], want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_mixed_product(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_operator(&mut rng, 2), random_operator(&mut rng, 2));
        let (c, d) = (random_operator(&mut rng, 4), random_operator(&mut rng, 4));
        let lhs = kron(&a, &c).unwrap().mul(&kron(&b, &d).unwrap()).unwrap();
        let rhs = kron(&a.mul(&b).unwrap(), &c.mul(&d).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn fidelity_is_symmetric_and_phase_blind(seed in any::<u64>(), phase in 0.0..std::f64::consts::TAU) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=4u32);
        let (u, v) = (random_state(&mut rng, n), random_state(&mut rng, n));
        let f = fidelity(&u, &v).unwrap();
        prop_assert!((f - fidelity(&v, &u).unwrap()).abs() < 1e-14);
        let rotated = StateVector::new(n, v.amplitudes() * Complex64::from_polar(1.0, phase)).unwrap();
        prop_assert!((f - fidelity(&u, &rotated).unwrap()).abs() < 1e-13);
        prop_assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn subspace_distance_ignores_basis_choice(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.random_range(1..=4usize);
        let vecs: Vec<StateVector> = (0..k).map(|_| random_state(&mut rng, 3)).collect();
        let a = SubspaceBasis::orthonormalize(8, &vecs, 1e-12).unwrap();
        let mixer = gaussian(&mut rng, k, k);
        let cols = a.as_columns() * mixer;
        let mixed: Vec<StateVector> = (0..k).map(|j| StateVector::new(3, cols.column(j).into_owned()).unwrap()).collect();
        let b = SubspaceBasis::orthonormalize(8, &mixed, 1e-12).unwrap();
        prop_assert!(subspace_distance(&a, &b).unwrap() < 1e-9);
    }
}
