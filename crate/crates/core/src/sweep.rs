//! Randomized sweeps comparing the solver against the brute-force oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::angle::{Angle, DirectionList};
use crate::bits::BitString;
use crate::classifier::{signed_angle_sum, Case};
use crate::eigensolver::{oracle_eigenspace, solve_common_eigenspace};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::observables::{product_observable, sigma_z_product};
use crate::tensor::subspace_distance;

/// How a random direction list was drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Continuous thetas; almost surely no string satisfies the condition.
    Generic,
    /// Small-denominator multiples of pi; usually several strings match.
    Rational,
    /// Theta 1 chosen so that one random string satisfies the condition.
    Planted,
}

fn random_phis<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Angle> {
    (0..n).map(|_| Angle::radians(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))).collect()
}

pub fn random_direction_list_in<R: Rng + ?Sized>(n: usize, family: Family, rng: &mut R) -> Result<DirectionList> {
    if n == 0 {
        return Err(Error::Domain("need at least one party".into()));
    }
    let thetas = match family {
        Family::Generic => (0..n).map(|_| Angle::radians(rng.random_range(0.0..std::f64::consts::PI))).collect(),
        Family::Rational => {
            const DENS: [i64; 5] = [1, 2, 3, 4, 6];
            (0..n)
                .map(|_| {
                    let den = DENS[rng.random_range(0..DENS.len())];
                    Angle::pi_frac(rng.random_range(0..=den), den)
                })
                .collect::<Result<Vec<_>>>()?
        }
        Family::Planted => {
            const QS: [i64; 4] = [5, 7, 9, 11];
            let q = QS[rng.random_range(0..QS.len())];
            let mut thetas = vec![Angle::ZERO];
            thetas.extend((1..n).map(|_| Angle::pi_frac(rng.random_range(1..q), q)).collect::<Result<Vec<_>>>()?);
            let m = BitString::new(n, rng.random_range(0..1u64 << (n - 1)))?;
            let rest = signed_angle_sum(&DirectionList::from_thetas(thetas.clone())?, &m)?;
            let (num, den) = rest.as_pi_fraction().expect("exact by construction");
            thetas[0] = Angle::pi_frac((-num).rem_euclid(2 * den), den)?;
            thetas
        }
    };
    let phis = random_phis(n, rng);
    DirectionList::new(thetas, phis)
}

/// A direction list from a family picked uniformly at random.
pub fn random_direction_list<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DirectionList> {
    let family = [Family::Generic, Family::Rational, Family::Planted][rng.random_range(0..3)];
    random_direction_list_in(n, family, rng)
}

#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub directions: DirectionList,
    pub case: Case,
    pub m_count: usize,
    pub solver_dim: usize,
    pub oracle_dim: usize,
    /// Projector distance between solver and oracle eigenspaces.
    pub distance: f64,
    pub residual: f64,
}

impl SweepRecord {
    pub fn agrees(&self, tol: f64) -> bool {
        self.solver_dim == self.oracle_dim && self.solver_dim == self.m_count && self.distance <= tol
    }
}

pub fn compare_with_oracle(d: &DirectionList, tol: f64) -> Result<SweepRecord> {
    let report = solve_common_eigenspace(d, tol)?;
    let a = product_observable(d)?;
    let b = sigma_z_product(d.n_parties())?;
    let oracle = oracle_eigenspace(&a, &b, tol)?;
    let distance = subspace_distance(&report.basis, &oracle)?;
    Ok(SweepRecord {
        directions: d.clone(),
        case: report.classification.case,
        m_count: report.classification.m_set.len(),
        solver_dim: report.dimension,
        oracle_dim: oracle.len(),
        distance,
        residual: report.residuals,
    })
}

/// `count` random instances on `n` parties; instance `k` uses stream `k` of
/// a generator seeded with `seed`, so output does not depend on `exec`.
pub fn oracle_sweep(n: usize, count: usize, seed: u64, tol: f64, exec: Exec) -> Result<Vec<SweepRecord>> {
    exec.map(count, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let d = random_direction_list(n, &mut rng)?;
        compare_with_oracle(&d, tol)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::classify;

    #[test]
    fn planted_lists_satisfy_their_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=8 {
            for _ in 0..20 {
                let d = random_direction_list_in(n, Family::Planted, &mut rng).unwrap();
                assert!(d.thetas_exact());
                assert_ne!(classify(&d, 1e-9).unwrap().case, Case::NoCommonEigenstate);
            }
        }
    }

    #[test]
    fn generic_lists_have_no_common_eigenstate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let d = random_direction_list_in(4, Family::Generic, &mut rng).unwrap();
            assert_eq!(classify(&d, 1e-9).unwrap().case, Case::NoCommonEigenstate);
        }
    }

    #[test]
    fn small_sweep_agrees_and_is_policy_independent() {
        let seq = oracle_sweep(3, 30, 9, 1e-9, Exec::Sequential).unwrap();
        let par = oracle_sweep(3, 30, 9, 1e-9, Exec::Parallel).unwrap();
        for (s, p) in seq.iter().zip(&par) {
            assert!(s.agrees(1e-8), "{s:?}");
            assert_eq!(s.directions, p.directions);
            assert_eq!(s.solver_dim, p.solver_dim);
        }
    }
}
