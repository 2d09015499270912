use ghzcert::angle::{Angle, DirectionList};
use ghzcert::classifier::{classify, classify_with_mode, m_set, Case, Mode};
use ghzcert::eigensolver::{character_sum, oracle_eigenspace, sector_dimensions, solve_common_eigenspace};
use ghzcert::ghz::{canonical_angles, case_iii_ghz_basis, random_unitary, stabilizing_pair_for, GhzSpec};
use ghzcert::observables::{product_observable, sigma_z_product};
use ghzcert::sweep::{random_direction_list, random_direction_list_in, Family};
use ghzcert::tensor::{apply_local_ops, subspace_distance, SubspaceBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn with_phis(d: &DirectionList, phis: Vec<Angle>) -> DirectionList {
    DirectionList::new(d.thetas().to_vec(), phis).unwrap()
}

#[test]
fn dimension_equals_m_count_on_quarter_turn_grid() {
    for n in 1..=4usize {
        for code in 0..4usize.pow(n as u32) {
            let fracs: Vec<(i64, i64)> = (0..n).map(|l| ((code / 4usize.pow(l as u32) % 4) as i64, 2)).collect();
            let d = DirectionList::from_pi_fracs(&fracs).unwrap();
            let oracle =
                oracle_eigenspace(&product_observable(&d).unwrap(), &sigma_z_product(n).unwrap(), TOL).unwrap();
            assert_eq!(oracle.len(), m_set(&d, TOL).unwrap().len(), "{fracs:?}");
        }
    }
}

#[test]
fn eigenspace_moves_with_local_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..40 {
        let n = rng.random_range(2..=5);
        let d = random_direction_list(n, &mut rng).unwrap();
        let us: Vec<_> = (0..n).map(|_| random_unitary(&mut rng)).collect();
        let a = product_observable(&d).unwrap().conjugated(&us).unwrap();
        let b = sigma_z_product(n).unwrap().conjugated(&us).unwrap();
        let moved = oracle_eigenspace(&a, &b, TOL).unwrap();
        let solved = solve_common_eigenspace(&d, TOL).unwrap();
        let mapped: Vec<_> = solved.basis.vectors().iter().map(|v| apply_local_ops(v, &us).unwrap()).collect();
        let mapped = SubspaceBasis::orthonormalize(1 << n, &mapped, 1e-12).unwrap();
        assert_eq!(moved.len(), mapped.len());
        assert!(subspace_distance(&moved, &mapped).unwrap() < 1e-8);
    }
}

#[test]
fn azimuths_do_not_change_the_classification() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let n = rng.random_range(1..=6);
        let d = random_direction_list(n, &mut rng).unwrap();
        let phis = (0..n).map(|_| Angle::radians(rng.random_range(-3.2..3.2))).collect();
        let e = with_phis(&d, phis);
        let (rd, re) = (classify(&d, TOL).unwrap(), classify(&e, TOL).unwrap());
        assert_eq!(rd.case, re.case);
        assert_eq!(rd.m_set.members, re.m_set.members);
        assert_eq!(solve_common_eigenspace(&e, TOL).unwrap().dimension, rd.m_set.len());
    }
}

#[test]
fn canonical_angles_are_unique_in_both_modes() {
    for n in 2..=12 {
        let d = canonical_angles(n).unwrap();
        let exact = classify_with_mode(&d, Mode::Exact, TOL).unwrap();
        let approx = classify_with_mode(&d, Mode::Approx, TOL).unwrap();
        assert_eq!(exact.case, Case::UniqueGhz, "n = {n}");
        assert_eq!(exact.m_set.members, approx.m_set.members);
    }
}

#[test]
fn sector_dimensions_cover_every_common_eigenstate() {
    // The four sectors of (A, B) partition the whole space when A and B
    // commute; otherwise they at least never overlap.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let n = rng.random_range(1..=5);
        let d = random_direction_list_in(n, Family::Rational, &mut rng).unwrap();
        let dims = sector_dimensions(&d, TOL).unwrap();
        let a = product_observable(&d).unwrap();
        let b = sigma_z_product(n).unwrap();
        assert!(dims.total() <= 1 << n);
        if a.full().commutes_with(b.full(), 1e-10) {
            assert_eq!(dims.total(), 1 << n);
        }
        assert_eq!(dims.dims[0], dims.dims[3]);
    }
}

#[test]
fn character_sums_match_closed_form_exhaustively() {
    for n in 1..=6usize {
        for code in 0..3usize.pow(n as u32) {
            let v: Vec<u8> = (0..n).map(|l| (code / 3usize.pow(l as u32) % 3) as u8).collect();
            let closed = if v.iter().all(|x| x % 2 == 0) { 1i64 << n } else { 0 };
            assert_eq!(character_sum(&v), closed);
        }
    }
}

#[test]
fn constructed_pairs_rebuild_from_their_directions() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 2..=6 {
        let spec = GhzSpec::random(n, &mut rng).unwrap();
        let pair = stabilizing_pair_for(&spec).unwrap();
        let a = product_observable(&pair.a_directions).unwrap();
        let b = product_observable(&pair.b_directions).unwrap();
        assert!(a.full().max_abs_diff(pair.a.full()) < 1e-10);
        assert!(b.full().max_abs_diff(pair.b.full()) < 1e-10);
        let target = spec.to_state().unwrap();
        let space = oracle_eigenspace(&a, &b, TOL).unwrap();
        assert_eq!(space.len(), 1);
        assert!(ghzcert::tensor::fidelity(&space.vectors()[0], &target).unwrap() > 1.0 - 1e-9);
    }
}

#[test]
fn degenerate_ghz_basis_is_orthonormal_and_spans_the_eigenspace() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut seen = 0;
    while seen < 20 {
        let d = random_direction_list_in(rng.random_range(2..=5), Family::Rational, &mut rng).unwrap();
        if classify(&d, TOL).unwrap().case != Case::Degenerate {
            continue;
        }
        seen += 1;
        let basis = case_iii_ghz_basis(&d, TOL).unwrap();
        for (i, u) in basis.states.iter().enumerate() {
            for (j, v) in basis.states.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((u.inner(v).unwrap().norm() - want).abs() < 1e-10);
            }
        }
        assert_eq!(basis.oracle_dimension, basis.members.len());
        assert!(basis.audit_distance < 1e-8);
    }
}
