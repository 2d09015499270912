//! Common +1 eigenspace of `A = (x) A_l` and `B = sigma_Z^{(x)N}`.
//!
//! The solver restricts to the even-parity subspace (the +1 eigenspace of
//! `B`) and solves `T c = c`, where `T` is the even-parity block of `A`
//! written out factor by factor. The oracle takes the null space of the
//! stacked matrix `[A - I; B - I]` on the full space and never looks at parity.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::angle::{Angle, DirectionList};
use crate::bits::{check_parties, even_indices, BitString};
use crate::classifier::{classify, sector_transform, ClassificationReport, Sign};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::observables::{product_observable, sigma_z_product, ProductObservable};
use crate::tensor::{fidelity, null_space_of, svd, StateVector, SubspaceBasis, I, ONE};

/// Largest party count for the dense solver.
pub const MAX_SOLVER_PARTIES: usize = 12;

/// Residual above which a solver basis vector is reported as a bug.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

/// Even-parity block of `(x) A_l`, rows `j` and columns `i` both running over
/// `S_0` in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    pub n: usize,
    pub s0: Vec<BitString>,
    pub entries: DMatrix<Complex64>,
}

/// `x^e` for `e` in {0, 1} with `0^0 = 1`.
fn pow01(x: Complex64, e: u8) -> Complex64 {
    if e == 0 {
        ONE
    } else {
        x
    }
}

pub fn coefficient_matrix(d: &DirectionList) -> Result<CoefficientMatrix> {
    let n = d.n_parties();
    if n > MAX_SOLVER_PARTIES {
        return Err(Error::Size(format!("the dense solver handles at most {MAX_SOLVER_PARTIES} parties, got {n}")));
    }
    // Per party: cos t, e^{-ip} sin t, e^{ip} sin t, -cos t.
    let factors: Vec<[Complex64; 4]> = d
        .thetas()
        .iter()
        .zip(d.phis())
        .map(|(t, p)| {
            let (c, s) = t.cos_sin();
            let (cp, sp) = p.cos_sin();
            let e = Complex64::new(cp, sp);
            [Complex64::new(c, 0.0), e.conj() * s, e * s, Complex64::new(-c, 0.0)]
        })
        .collect();
    let s0: Vec<BitString> = even_indices(n).map(|k| BitString::raw(n, k as u64)).collect();
    let entries = DMatrix::from_fn(s0.len(), s0.len(), |r, c| {
        let (j, i) = (&s0[r], &s0[c]);
        (1..=n).fold(ONE, |acc, l| {
            let [cos, em_sin, ep_sin, neg_cos] = factors[l - 1];
            let (il, jl) = (i.party(l), j.party(l));
            let row0 = pow01(cos, 1 - il) * pow01(em_sin, il);
            let row1 = pow01(ep_sin, 1 - il) * pow01(neg_cos, il);
            acc * pow01(row0, 1 - jl) * pow01(row1, jl)
        })
    });
    Ok(CoefficientMatrix { n, s0, entries })
}

/// Relative singular values on either side of the rank cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutSpectrum {
    pub last_zero: Option<f64>,
    pub first_nonzero: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct StabilizerReport {
    pub classification: ClassificationReport,
    pub dimension: usize,
    /// Orthonormal basis of the common +1 eigenspace in the full space.
    pub basis: SubspaceBasis,
    /// Largest of `||(A - I) v||` and `||(B - I) v||` over the basis.
    pub residuals: f64,
    pub cut: CutSpectrum,
}

pub fn solve_common_eigenspace(d: &DirectionList, tol: f64) -> Result<StabilizerReport> {
    let classification = classify(d, tol)?;
    let t = coefficient_matrix(d)?;
    let n = t.n;
    let k = t.entries.nrows();
    let shifted = &t.entries - DMatrix::<Complex64>::identity(k, k);
    let ns = null_space_of(&shifted, tol)?;

    let a = product_observable(d)?;
    let b = sigma_z_product(n)?;
    let mut vectors = Vec::with_capacity(ns.basis.len());
    let mut residuals: f64 = 0.0;
    for c in ns.basis.vectors() {
        let mut amps = DVector::zeros(1 << n);
        for (pos, j) in t.s0.iter().enumerate() {
            amps[j.index()] = c.amplitudes()[pos];
        }
        let mut v = StateVector::new(n as u32, amps)?;
        v.fix_global_phase();
        residuals = residuals.max(eigen_residual(&a, &v)?).max(eigen_residual(&b, &v)?);
        vectors.push(v);
    }
    if residuals > RESIDUAL_LIMIT {
        return Err(Error::Inconsistent(format!("solver basis vector misses the +1 eigenvalue by {residuals:e}")));
    }
    Ok(StabilizerReport {
        classification,
        dimension: vectors.len(),
        basis: SubspaceBasis::from_orthonormal(1 << n, vectors),
        residuals,
        cut: CutSpectrum { last_zero: ns.last_zero, first_nonzero: ns.first_nonzero },
    })
}

/// `||(op - I) v||`.
pub fn eigen_residual(op: &ProductObservable, v: &StateVector) -> Result<f64> {
    Ok((op.apply(v)?.amplitudes() - v.amplitudes()).norm())
}

/// Null space of `[A - I; B - I]` on the full `2^N` space.
pub fn oracle_eigenspace(a: &ProductObservable, b: &ProductObservable, tol: f64) -> Result<SubspaceBasis> {
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!("observables of dims {} and {}", a.dim(), b.dim())));
    }
    let dim = a.dim();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let mut stacked = DMatrix::zeros(2 * dim, dim);
    stacked.rows_mut(0, dim).copy_from(&(a.full().matrix() - &id));
    stacked.rows_mut(dim, dim).copy_from(&(b.full().matrix() - &id));
    Ok(null_space_of(&stacked, tol)?.basis)
}

/// Common +1 eigenspace dimensions of `(s_A A, s_B B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectorDims {
    /// Ordered `(+,+)`, `(+,-)`, `(-,+)`, `(-,-)`.
    pub dims: [usize; 4],
}

impl SectorDims {
    pub const SECTORS: [(Sign, Sign); 4] =
        [(Sign::Plus, Sign::Plus), (Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus), (Sign::Minus, Sign::Minus)];

    pub fn get(&self, sign_a: Sign, sign_b: Sign) -> usize {
        let k = Self::SECTORS.iter().position(|&s| s == (sign_a, sign_b)).expect("all sectors listed");
        self.dims[k]
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// Each sector computed twice, by the oracle on negated observables and by
/// the solver on sector-transformed angles. Disagreement is a bug.
pub fn sector_dimensions(d: &DirectionList, tol: f64) -> Result<SectorDims> {
    let a = product_observable(d)?;
    let b = sigma_z_product(d.n_parties())?;
    let mut dims = [0usize; 4];
    for (k, &(sa, sb)) in SectorDims::SECTORS.iter().enumerate() {
        let a_s = if sa == Sign::Minus { a.negated() } else { a.clone() };
        let b_s = if sb == Sign::Minus { b.negated() } else { b.clone() };
        let oracle = oracle_eigenspace(&a_s, &b_s, tol)?.len();
        let solver = solve_common_eigenspace(&sector_transform(d, sa, sb), tol)?.dimension;
        if oracle != solver {
            return Err(Error::Inconsistent(format!(
                "sector ({:+}, {:+}): oracle dimension {oracle}, solver dimension {solver}",
                sa.value(),
                sb.value()
            )));
        }
        dims[k] = oracle;
    }
    Ok(SectorDims { dims })
}

/// Deviations `(odd, even)` of the parity-restricted expansions of
/// `prod_l (cos t_l - i sin t_l)` from `-i sin(sum t)` and `cos(sum t)`.
///
/// Each term is `prod_l cos(t_l)^{1 - j_l} (-i sin t_l)^{j_l}`, which avoids
/// dividing by `cos t_l`.
pub fn induction_identity_residual(d: &DirectionList) -> Result<(f64, f64)> {
    let n = d.n_parties();
    check_parties(n)?;
    let cs: Vec<(f64, f64)> = d.thetas().iter().map(Angle::cos_sin).collect();
    let neg_i = -I;
    let (mut odd, mut even) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for bits in 0..1u64 << n {
        let j = BitString::raw(n, bits);
        let term = (1..=n).fold(ONE, |acc, l| {
            let (c, s) = cs[l - 1];
            acc * if j.party(l) == 0 { Complex64::new(c, 0.0) } else { neg_i * s }
        });
        if j.parity() == 1 {
            odd += term;
        } else {
            even += term;
        }
    }
    let total = d.thetas().iter().fold(Angle::ZERO, |acc, &t| acc + t);
    let (c, s) = total.cos_sin();
    Ok(((odd - neg_i * s).norm(), (even - Complex64::new(c, 0.0)).norm()))
}

/// `sum_{m in Z_2^n} (-1)^{m . v}` by direct enumeration.
pub fn character_sum(v: &[u8]) -> i64 {
    let n = v.len();
    (0..1u64 << n)
        .map(|m| {
            let dot: u64 = (0..n).map(|l| ((m >> (n - 1 - l)) & 1) * v[l] as u64).sum();
            if dot.is_multiple_of(2) {
                1
            } else {
                -1
            }
        })
        .sum()
}

/// Largest deviation of [`character_sum`] from its closed form (`2^n` when
/// every component is even, else 0) over 100 random `v` in `{0,1,2}^n`.
pub fn fourier_cancellation_check(n: usize) -> Result<f64> {
    fourier_cancellation_check_seeded(n, 0x5eed ^ n as u64)
}

pub fn fourier_cancellation_check_seeded(n: usize, seed: u64) -> Result<f64> {
    if n == 0 || n > 16 {
        return Err(Error::Size(format!("character sums are checked for 1..=16 components, got {n}")));
    }
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let worst = (0..100)
        .map(|_| {
            let v: Vec<u8> = (0..n).map(|_| rng.random_range(0..3u8)).collect();
            let closed = if v.iter().all(|x| x % 2 == 0) { 1i64 << n } else { 0 };
            (character_sum(&v) - closed).abs()
        })
        .max()
        .unwrap_or(0);
    Ok(worst as f64)
}

/// A joint system-environment state `sum_{i in S_0} |i> (x) |e_i>`.
#[derive(Debug, Clone)]
pub struct PurificationModel {
    pub env_dim: usize,
    /// `(i, |e_i>)` for every even-parity `i`.
    pub env_vectors: Vec<(BitString, DVector<Complex64>)>,
    /// `|e'_i> = prod_l i^{i_l} e^{-i phi_l i_l} |e_i>`.
    pub primed_vectors: Vec<(BitString, DVector<Complex64>)>,
    /// Row `i`, column `k` is the amplitude of `|i> (x) |k>`.
    pub joint_state: DMatrix<Complex64>,
}

impl PurificationModel {
    /// Splits a joint state into environment vectors. Fails if the state has
    /// weight on odd-parity system indices.
    pub fn from_joint(d: &DirectionList, joint_state: DMatrix<Complex64>) -> Result<Self> {
        let n = d.n_parties();
        if joint_state.nrows() != 1 << n {
            return Err(Error::Shape(format!("joint state has {} system rows for {n} parties", joint_state.nrows())));
        }
        let odd_weight = (0..joint_state.nrows())
            .filter(|k| k.count_ones() % 2 == 1)
            .map(|k| joint_state.row(k).norm())
            .fold(0.0, f64::max);
        if odd_weight > 1e-10 {
            return Err(Error::Domain(format!("joint state has odd-parity weight {odd_weight:e}")));
        }
        let phases: Vec<Complex64> = d
            .phis()
            .iter()
            .map(|p| {
                let (c, s) = p.cos_sin();
                I * Complex64::new(c, -s)
            })
            .collect();
        let mut env_vectors = Vec::new();
        let mut primed_vectors = Vec::new();
        for k in even_indices(n) {
            let i = BitString::raw(n, k as u64);
            let e: DVector<Complex64> = joint_state.row(k).transpose();
            let phase = (1..=n).fold(ONE, |acc, l| acc * pow01(phases[l - 1], i.party(l)));
            primed_vectors.push((i, &e * phase));
            env_vectors.push((i, e));
        }
        Ok(Self { env_dim: joint_state.ncols(), env_vectors, primed_vectors, joint_state })
    }

    /// Rebuilds `sum_i |i> (x) |e_i>` from the environment vectors.
    pub fn reassemble(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.joint_state.nrows(), self.env_dim);
        for (i, e) in &self.env_vectors {
            m.set_row(i.index(), &e.transpose());
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurityReport {
    pub dimension: usize,
    pub env_dim: usize,
    pub trials: usize,
    /// True when the common +1 eigenspace is empty and no joint state exists.
    pub empty_projector: bool,
    /// Largest system:environment entanglement entropy (bits) over the trials.
    pub max_entropy: f64,
    /// Largest `||(A (x) I) Psi - Psi||` or `||(B (x) I) Psi - Psi||`.
    pub max_residual: f64,
    /// Smallest fidelity of the dominant system Schmidt vector with the
    /// solver's state; only reported when the eigenspace is one-dimensional.
    pub min_fidelity: Option<f64>,
}

impl PurityReport {
    /// Every sampled purification was a product state carrying the solver's
    /// unique state.
    pub fn product_form(&self) -> bool {
        !self.empty_projector && self.max_entropy <= 1e-8 && self.min_fidelity.is_some_and(|f| f >= 1.0 - 1e-9)
    }
}

pub fn purity_security_check(d: &DirectionList, env_dim: usize, trials: usize, seed: u64) -> Result<PurityReport> {
    purity_security_check_with(d, env_dim, trials, seed, crate::tensor::DEFAULT_NULL_TOL, Exec::default())
}

/// Samples random joint states in the range of `Pi_{A cap B} (x) I_E` and
/// measures how entangled they are with the environment.
pub fn purity_security_check_with(
    d: &DirectionList,
    env_dim: usize,
    trials: usize,
    seed: u64,
    tol: f64,
    exec: Exec,
) -> Result<PurityReport> {
    let report = solve_common_eigenspace(d, tol)?;
    if report.dimension == 0 {
        return Ok(PurityReport {
            dimension: 0,
            env_dim,
            trials: 0,
            empty_projector: true,
            max_entropy: 0.0,
            max_residual: 0.0,
            min_fidelity: None,
        });
    }
    if env_dim < report.dimension {
        return Err(Error::Domain(format!(
            "environment dimension {env_dim} is smaller than the eigenspace dimension {}",
            report.dimension
        )));
    }
    let n = d.n_parties();
    let a = product_observable(d)?;
    let b = sigma_z_product(n)?;
    let q = report.basis.as_columns();
    let unique = (report.dimension == 1).then(|| report.basis.vectors()[0].clone());

    let outcomes = exec.map(trials, |trial| -> Result<(f64, f64, Option<f64>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let g = DMatrix::from_fn(1 << n, env_dim, |_, _| {
            Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
        });
        let mut joint = &q * (q.adjoint() * g);
        let norm = joint.norm();
        joint.unscale_mut(norm);
        let model = PurificationModel::from_joint(d, joint)?;

        let mut residual: f64 = 0.0;
        for k in 0..env_dim {
            let col = StateVector::new(n as u32, model.joint_state.column(k).into_owned())?;
            residual = residual.max(eigen_residual(&a, &col)?).max(eigen_residual(&b, &col)?);
        }

        let svd = svd(&model.joint_state, unique.is_some())?;
        let entropy =
            svd.singular_values.iter().map(|s| s * s).filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum::<f64>().max(0.0);
        let fid = match &unique {
            Some(psi) => {
                let u = svd.u.as_ref().expect("requested U");
                let sys = StateVector::new(n as u32, u.column(0).into_owned())?;
                Some(fidelity(psi, &sys)?)
            }
            None => None,
        };
        Ok((entropy, residual, fid))
    });

    let mut out = PurityReport {
        dimension: report.dimension,
        env_dim,
        trials,
        empty_projector: false,
        max_entropy: 0.0,
        max_residual: 0.0,
        min_fidelity: None,
    };
    for o in outcomes {
        let (entropy, residual, fid) = o?;
        out.max_entropy = out.max_entropy.max(entropy);
        out.max_residual = out.max_residual.max(residual);
        if let Some(f) = fid {
            out.min_fidelity = Some(out.min_fidelity.map_or(f, |m: f64| m.min(f)));
        }
    }
    if out.max_residual > RESIDUAL_LIMIT {
        return Err(Error::Inconsistent(format!(
            "sampled joint state misses the +1 eigenvalue by {:e}",
            out.max_residual
        )));
    }
    Ok(out)
}
