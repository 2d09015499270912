//! Monte-Carlo simulation of the two-setting certification protocol.
//!
//! Each round every party measures the spin of its qubit along its direction
//! for the chosen setting; the product of the local outcomes is the global
//! +/-1 outcome. A state passes when the empirical means of both settings
//! reach the threshold.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::angle::DirectionList;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::observables::{spin_down_eigenvector, spin_up_eigenvector};
use crate::tensor::StateVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificationConfig {
    pub shots: usize,
    /// Probability that a round measures setting A.
    pub a_fraction: f64,
    pub seed: u64,
    pub pass_threshold: f64,
}

impl Default for CertificationConfig {
    fn default() -> Self {
        Self { shots: 10_000, a_fraction: 0.5, seed: 0, pass_threshold: 0.999 }
    }
}

impl CertificationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::Domain("shots must be positive".into()));
        }
        if !(self.a_fraction > 0.0 && self.a_fraction < 1.0) {
            return Err(Error::Domain(format!("a_fraction must lie in (0, 1), got {}", self.a_fraction)));
        }
        if !(self.pass_threshold > 0.0 && self.pass_threshold <= 1.0) {
            return Err(Error::Domain(format!("pass_threshold must lie in (0, 1], got {}", self.pass_threshold)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub locals: Vec<i8>,
    pub product: i8,
}

impl Outcome {
    fn from_locals(locals: Vec<i8>) -> Self {
        let product = locals.iter().product();
        Self { locals, product }
    }

    /// Index of the outcome string, `-1` outcomes as set bits, party 1 most
    /// significant.
    pub fn index(&self) -> usize {
        self.locals.iter().fold(0, |acc, &o| (acc << 1) | usize::from(o < 0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertReport {
    pub mean_a: f64,
    pub mean_b: f64,
    pub count_a: usize,
    pub count_b: usize,
    pub stderr_a: f64,
    pub stderr_b: f64,
    pub pass: bool,
}

/// A mixed state as weighted pure states.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<(StateVector, f64)>,
}

impl Ensemble {
    pub fn new(members: Vec<(StateVector, f64)>) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::Domain("an ensemble needs at least one state".into()))?;
        let dim = first.0.dim();
        if members.iter().any(|(s, _)| s.dim() != dim) {
            return Err(Error::Shape("ensemble states differ in dimension".into()));
        }
        if members.iter().any(|(_, w)| !(w.is_finite() && *w >= 0.0)) || members.iter().all(|(_, w)| *w == 0.0) {
            return Err(Error::Domain("ensemble weights must be non-negative with a positive total".into()));
        }
        for (s, _) in &members {
            if (s.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::Domain("ensemble states must be normalized".into()));
            }
        }
        Ok(Self { members })
    }

    pub fn pure(state: StateVector) -> Result<Self> {
        Self::new(vec![(state, 1.0)])
    }

    /// Every computational basis state with equal weight: the maximally mixed
    /// state.
    pub fn maximally_mixed(n: u32) -> Result<Self> {
        let members = (0..1usize << n).map(|k| StateVector::basis(n, k).map(|s| (s, 1.0))).collect::<Result<_>>()?;
        Self::new(members)
    }

    pub fn n_qubits(&self) -> u32 {
        self.members[0].0.n_qubits()
    }

    fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> &StateVector {
        if self.members.len() == 1 {
            return &self.members[0].0;
        }
        let total: f64 = self.members.iter().map(|(_, w)| w).sum();
        let mut x = rng.random::<f64>() * total;
        for (s, w) in &self.members {
            if x < *w {
                return s;
            }
            x -= w;
        }
        &self.members.last().expect("non-empty").0
    }
}

fn check_dims(state: &StateVector, d: &DirectionList) -> Result<()> {
    if state.n_qubits() as usize != d.n_parties() {
        return Err(Error::Shape(format!(
            "{}-qubit state measured with {} directions",
            state.n_qubits(),
            d.n_parties()
        )));
    }
    Ok(())
}

/// Per-party `[up, down]` eigenvector amplitudes.
fn local_bases(d: &DirectionList) -> Vec<[[Complex64; 2]; 2]> {
    d.thetas()
        .iter()
        .zip(d.phis())
        .map(|(&t, &p)| {
            let up = spin_up_eigenvector(t, p);
            let down = spin_down_eigenvector(t, p);
            [[up.amplitudes()[0], up.amplitudes()[1]], [down.amplitudes()[0], down.amplitudes()[1]]]
        })
        .collect()
}

/// Projects party `l` (0-based) onto `vec`, in place. Returns the squared
/// norm of the projected (unnormalized) state.
fn project(amps: &mut DVector<Complex64>, n: usize, l: usize, vec: &[Complex64; 2]) -> f64 {
    let bit = 1usize << (n - 1 - l);
    let mut weight = 0.0;
    for idx in 0..amps.len() {
        if idx & bit != 0 {
            continue;
        }
        let r = vec[0].conj() * amps[idx] + vec[1].conj() * amps[idx | bit];
        amps[idx] = vec[0] * r;
        amps[idx | bit] = vec[1] * r;
        weight += r.norm_sqr();
    }
    weight
}

/// One round of party-by-party projective measurement with collapse.
pub fn measure_round<R: Rng + ?Sized>(state: &StateVector, d: &DirectionList, rng: &mut R) -> Result<Outcome> {
    check_dims(state, d)?;
    let n = d.n_parties();
    let bases = local_bases(d);
    let mut amps = state.amplitudes().clone();
    let mut norm_sq = amps.norm_squared();
    let mut locals = Vec::with_capacity(n);
    for (l, basis) in bases.iter().enumerate() {
        let mut up = amps.clone();
        let w_up = project(&mut up, n, l, &basis[0]);
        if rng.random::<f64>() * norm_sq < w_up {
            amps = up;
            norm_sq = w_up;
            locals.push(1);
        } else {
            let w_down = project(&mut amps, n, l, &basis[1]);
            norm_sq = w_down;
            locals.push(-1);
        }
    }
    Ok(Outcome::from_locals(locals))
}

/// Exact outcome distribution of the sequential procedure, obtained by
/// following every branch of the collapse chain. Indexed by
/// [`Outcome::index`].
pub fn sequential_outcome_distribution(state: &StateVector, d: &DirectionList) -> Result<Vec<f64>> {
    check_dims(state, d)?;
    let n = d.n_parties();
    let bases = local_bases(d);
    let mut probs = vec![0.0; 1 << n];
    let mut stack = vec![(0usize, 0usize, state.amplitudes().clone(), state.amplitudes().norm_squared())];
    while let Some((l, prefix, amps, w)) = stack.pop() {
        if l == n {
            probs[prefix] = w;
            continue;
        }
        for (k, v) in bases[l].iter().enumerate() {
            let mut branch = amps.clone();
            let wk = project(&mut branch, n, l, v);
            stack.push((l + 1, (prefix << 1) | k, branch, wk));
        }
    }
    Ok(probs)
}

/// Exact outcome distribution from the joint Born rule: rotate every party
/// into its measurement basis and read off `|amplitude|^2`.
pub fn joint_outcome_distribution(state: &StateVector, d: &DirectionList) -> Result<Vec<f64>> {
    check_dims(state, d)?;
    let n = d.n_parties();
    let bases = local_bases(d);
    let mut amps = state.amplitudes().clone();
    for (l, b) in bases.iter().enumerate() {
        let bit = 1usize << (n - 1 - l);
        for idx in 0..amps.len() {
            if idx & bit != 0 {
                continue;
            }
            let (a0, a1) = (amps[idx], amps[idx | bit]);
            amps[idx] = b[0][0].conj() * a0 + b[0][1].conj() * a1;
            amps[idx | bit] = b[1][0].conj() * a0 + b[1][1].conj() * a1;
        }
    }
    Ok(amps.iter().map(|a| a.norm_sqr()).collect())
}

/// One round sampled from the joint distribution in a single draw.
pub fn sample_joint<R: Rng + ?Sized>(state: &StateVector, d: &DirectionList, rng: &mut R) -> Result<Outcome> {
    let probs = joint_outcome_distribution(state, d)?;
    let total: f64 = probs.iter().sum();
    let mut x = rng.random::<f64>() * total;
    let mut idx = probs.len() - 1;
    for (k, p) in probs.iter().enumerate() {
        if x < *p {
            idx = k;
            break;
        }
        x -= p;
    }
    let n = d.n_parties();
    Ok(Outcome::from_locals((0..n).map(|l| if (idx >> (n - 1 - l)) & 1 == 0 { 1 } else { -1 }).collect()))
}

/// Certification of `state` against `A` from `d` and `B = sigma_Z^{(x)N}`.
pub fn run_certification(state: &StateVector, d: &DirectionList, cfg: &CertificationConfig) -> Result<CertReport> {
    let b = DirectionList::sigma_z(d.n_parties())?;
    run_certification_pair(&Ensemble::pure(state.clone())?, d, &b, cfg, Exec::default())
}

/// Certification of an ensemble against arbitrary settings `a` and `b`.
///
/// Shot `k` draws its setting, its ensemble member and its outcomes from a
/// generator seeded by `(cfg.seed, k)`, so results do not depend on `exec`.
pub fn run_certification_pair(
    ensemble: &Ensemble,
    a: &DirectionList,
    b: &DirectionList,
    cfg: &CertificationConfig,
    exec: Exec,
) -> Result<CertReport> {
    cfg.validate()?;
    if a.n_parties() != b.n_parties() || ensemble.n_qubits() as usize != a.n_parties() {
        return Err(Error::Shape("settings and state disagree on the party count".into()));
    }
    let shots = exec.map(cfg.shots, |k| -> Result<(bool, i8)> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(k as u64);
        let use_a = rng.random::<f64>() < cfg.a_fraction;
        let state = ensemble.pick(&mut rng);
        let out = measure_round(state, if use_a { a } else { b }, &mut rng)?;
        Ok((use_a, out.product))
    });
    let (mut sum_a, mut count_a, mut sum_b, mut count_b) = (0i64, 0usize, 0i64, 0usize);
    for s in shots {
        let (use_a, p) = s?;
        if use_a {
            sum_a += p as i64;
            count_a += 1;
        } else {
            sum_b += p as i64;
            count_b += 1;
        }
    }
    let (mean_a, stderr_a) = mean_and_stderr(sum_a, count_a);
    let (mean_b, stderr_b) = mean_and_stderr(sum_b, count_b);
    let pass = count_a > 0 && count_b > 0 && mean_a >= cfg.pass_threshold && mean_b >= cfg.pass_threshold;
    Ok(CertReport { mean_a, mean_b, count_a, count_b, stderr_a, stderr_b, pass })
}

/// Mean and standard error of `count` samples in {-1, +1} summing to `sum`.
fn mean_and_stderr(sum: i64, count: usize) -> (f64, f64) {
    if count == 0 {
        return (0.0, 0.0);
    }
    let c = count as f64;
    let mean = sum as f64 / c;
    if count == 1 {
        return (mean, 0.0);
    }
    let var = ((1.0 - mean * mean) * c / (c - 1.0)).max(0.0);
    (mean, (var / c).sqrt())
}
