//! Constructing observable pairs that uniquely stabilize a given GHZ state,
//! and the explicit GHZ-form states spanning the common eigenspace.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::angle::{Angle, DirectionList};
use crate::bits::BitString;
use crate::classifier::{classify, Case};
use crate::eigensolver::{eigen_residual, oracle_eigenspace};
use crate::error::{Error, Result};
use crate::observables::{direction_of, hadamard, product_observable, sigma_z_product, ProductObservable};
use crate::tensor::{apply_local_ops, subspace_distance, Operator, StateVector, SubspaceBasis, I, ONE, ZERO};

/// Largest party count for which the pair is re-verified with the dense oracle.
pub const MAX_ORACLE_PARTIES: usize = 10;

/// Default directions with a unique M set: `theta_l = 2pi/n` for odd `n`;
/// `theta_1 = 4pi/(n+1)` and `theta_l = 2pi/(n+1)` otherwise. All `phi_l = 0`.
pub fn canonical_angles(n: usize) -> Result<DirectionList> {
    if n < 2 {
        return Err(Error::Domain(format!("canonical angles need n >= 2, got {n}")));
    }
    let n64 = n as i64;
    let thetas = if n % 2 == 1 {
        vec![Angle::pi_frac(2, n64)?; n]
    } else {
        let mut t = vec![Angle::pi_frac(2, n64 + 1)?; n];
        t[0] = Angle::pi_frac(4, n64 + 1)?;
        t
    };
    DirectionList::from_thetas(thetas)
}

fn unit(phi: &Angle) -> Complex64 {
    let (c, s) = phi.cos_sin();
    Complex64::new(c, s)
}

/// `e^{i beta(j)} = prod_l (i e^{i phi_l})^{j_l}`.
pub fn phase_beta(j: &BitString, phis: &[Angle]) -> Result<Complex64> {
    if j.n() != phis.len() {
        return Err(Error::Shape(format!("{}-bit string for {} phases", j.n(), phis.len())));
    }
    Ok((1..=j.n()).filter(|&l| j.party(l) == 1).fold(ONE, |acc, l| acc * I * unit(&phis[l - 1])))
}

/// Per-party basis `|~0> = |0>`, `|~1> = i (-1)^{m_l} e^{i phi_l} |1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TildeBasis {
    /// Phase multiplying `|1>` for each party.
    pub one_phases: Vec<Complex64>,
}

impl TildeBasis {
    pub fn new(d: &DirectionList, m: &BitString) -> Result<Self> {
        if m.n() != d.n_parties() {
            return Err(Error::Shape(format!("{}-bit string for {} parties", m.n(), d.n_parties())));
        }
        let one_phases = d
            .phis()
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let sign = if m.party(k + 1) == 0 { 1.0 } else { -1.0 };
                I * sign * unit(p)
            })
            .collect();
        Ok(Self { one_phases })
    }

    pub fn zero(&self, _party: usize) -> StateVector {
        StateVector::from_amplitudes(vec![ONE, ZERO]).expect("qubit")
    }

    /// `|~1>` for party `party` (1-based).
    pub fn one(&self, party: usize) -> StateVector {
        StateVector::from_amplitudes(vec![ZERO, self.one_phases[party - 1]]).expect("qubit")
    }

    /// `diag(1, phase_l)`, mapping `|j>` to `|~j>`.
    pub fn change_of_basis(&self, party: usize) -> Operator {
        Operator::from_2x2([[ONE, ZERO], [ZERO, self.one_phases[party - 1]]])
    }
}

/// `sum_{j in S_0} (x)_l |~j_l>`, normalized.
pub fn tilde_state(d: &DirectionList, m: &BitString) -> Result<StateVector> {
    if m.n() != d.n_parties() {
        return Err(Error::Shape(format!("{}-bit string for {} parties", m.n(), d.n_parties())));
    }
    if m.party(1) != 0 {
        return Err(Error::Precondition(format!("string {m} must have m_1 = 0")));
    }
    let n = d.n_parties();
    let basis = TildeBasis::new(d, m)?;
    let amps = (0..1usize << n)
        .map(|k| {
            if k.count_ones() % 2 == 1 {
                return ZERO;
            }
            let j = BitString::raw(n, k as u64);
            (1..=n).filter(|&l| j.party(l) == 1).fold(ONE, |acc, l| acc * basis.one_phases[l - 1])
        })
        .collect();
    StateVector::from_amplitudes(amps)?.normalized()
}

/// An N-GHZ state given as local unitaries applied to
/// `(|0..0> + |1..1>)/sqrt(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GhzSpec {
    unitaries: Vec<Operator>,
}

impl GhzSpec {
    pub fn new(unitaries: Vec<Operator>) -> Result<Self> {
        if unitaries.is_empty() {
            return Err(Error::Domain("a GHZ specification needs at least one party".into()));
        }
        for (l, u) in unitaries.iter().enumerate() {
            if u.dim() != 2 || !u.is_unitary(1e-12) {
                return Err(Error::Domain(format!("local operator {} is not a 2x2 unitary", l + 1)));
            }
        }
        Ok(Self { unitaries })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![Operator::identity(2)?; n])
    }

    /// Haar-random local unitaries.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Self::new((0..n).map(|_| random_unitary(rng)).collect())
    }

    pub fn n_parties(&self) -> usize {
        self.unitaries.len()
    }

    pub fn unitaries(&self) -> &[Operator] {
        &self.unitaries
    }

    pub fn to_state(&self) -> Result<StateVector> {
        apply_local_ops(&StateVector::ghz(self.n_parties() as u32)?, &self.unitaries)
    }
}

/// Haar-distributed 2x2 unitary: a uniform unit quaternion times a phase.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Operator {
    let mut q = [0.0f64; 4];
    let norm = loop {
        for x in q.iter_mut() {
            *x = StandardNormal.sample(rng);
        }
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            break n;
        }
    };
    let a = Complex64::new(q[0], q[1]) / norm;
    let b = Complex64::new(q[2], q[3]) / norm;
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    Operator::from_2x2([[a * phase, -b.conj() * phase], [b * phase, a.conj() * phase]])
}

#[derive(Debug, Clone)]
pub struct StabilizingPair {
    pub a: ProductObservable,
    pub b: ProductObservable,
    pub target: StateVector,
    /// Per-party directions of `a` and `b`.
    pub a_directions: DirectionList,
    pub b_directions: DirectionList,
    /// Largest `||(X - I) target||` over both observables.
    pub residual: f64,
    /// Oracle eigenspace dimension; `None` above [`MAX_ORACLE_PARTIES`].
    pub oracle_dimension: Option<usize>,
}

fn directions_of(obs: &ProductObservable) -> Result<DirectionList> {
    let (thetas, phis) = obs.locals().iter().map(direction_of).collect::<Result<Vec<_>>>()?.into_iter().unzip();
    DirectionList::new(thetas, phis)
}

/// Observables uniquely stabilizing the GHZ state described by `spec`.
///
/// Starts from [`canonical_angles`] against `sigma_Z^{(x)N}`, whose unique
/// stabilized state is `psi_0 = (x)(T_l H) |GHZ>` with `T_l` the tilde basis
/// change. Both observables are then conjugated by `V_l = U_l H T_l^dagger`.
pub fn stabilizing_pair_for(spec: &GhzSpec) -> Result<StabilizingPair> {
    let n = spec.n_parties();
    let d = canonical_angles(n)?;
    let class = classify(&d, crate::tensor::DEFAULT_NULL_TOL)?;
    if class.case != Case::UniqueGhz {
        return Err(Error::Inconsistent(format!("canonical angles for n = {n} classify as {}", class.case)));
    }
    let m = class.m_set.members[0];
    let tilde = TildeBasis::new(&d, &m)?;
    let h = hadamard();
    let frames = (1..=n)
        .map(|l| {
            let w = h.mul(&tilde.change_of_basis(l).adjoint())?;
            spec.unitaries()[l - 1].mul(&w)
        })
        .collect::<Result<Vec<_>>>()?;

    let a = product_observable(&d)?.conjugated(&frames)?;
    let b = sigma_z_product(n)?.conjugated(&frames)?;
    let target = spec.to_state()?;
    let residual = eigen_residual(&a, &target)?.max(eigen_residual(&b, &target)?);
    if residual > 1e-9 {
        return Err(Error::Inconsistent(format!("constructed pair misses the target by {residual:e}")));
    }
    let oracle_dimension = if n <= MAX_ORACLE_PARTIES {
        let dim = oracle_eigenspace(&a, &b, crate::tensor::DEFAULT_NULL_TOL)?.len();
        if dim != 1 {
            return Err(Error::Inconsistent(format!("constructed pair has a {dim}-dimensional common eigenspace")));
        }
        Some(dim)
    } else {
        None
    };
    Ok(StabilizingPair {
        a_directions: directions_of(&a)?,
        b_directions: directions_of(&b)?,
        a,
        b,
        target,
        residual,
        oracle_dimension,
    })
}

/// GHZ-form states `tilde_state(d, m)` for every member of a degenerate M
/// set, with an audit of their span against the oracle eigenspace.
#[derive(Debug, Clone)]
pub struct CaseIiiBasis {
    pub members: Vec<BitString>,
    pub states: Vec<StateVector>,
    pub oracle_dimension: usize,
    /// Projector distance between the span of `states` and the oracle
    /// eigenspace.
    pub audit_distance: f64,
}

pub fn case_iii_ghz_basis(d: &DirectionList, tol: f64) -> Result<CaseIiiBasis> {
    let class = classify(d, tol)?;
    if class.case != Case::Degenerate {
        return Err(Error::Precondition(format!("expected a degenerate classification, got {}", class.case)));
    }
    let states = class.m_set.members.iter().map(|m| tilde_state(d, m)).collect::<Result<Vec<_>>>()?;
    let dim = 1usize << d.n_parties();
    let span = SubspaceBasis::orthonormalize(dim, &states, 1e-10)?;
    let oracle = oracle_eigenspace(&product_observable(d)?, &sigma_z_product(d.n_parties())?, tol)?;
    Ok(CaseIiiBasis {
        members: class.m_set.members,
        states,
        oracle_dimension: oracle.len(),
        audit_distance: subspace_distance(&span, &oracle)?,
    })
}
