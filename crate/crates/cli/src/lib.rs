//! Library side of the `ghzcert` command-line tool: JSON schemas and the
//! subcommand implementations, kept here so they can be tested directly.

pub mod schema;

use ghzcert::angle::DirectionList;
use ghzcert::certify::{run_certification_pair, CertificationConfig, Ensemble};
use ghzcert::classifier::{classify_with_mode, ClassificationReport, Mode};
use ghzcert::eigensolver::{
    induction_identity_residual, oracle_eigenspace, purity_security_check_with, sector_dimensions,
    solve_common_eigenspace,
};
use ghzcert::exec::Exec;
use ghzcert::ghz::{canonical_angles, stabilizing_pair_for, GhzSpec, MAX_ORACLE_PARTIES};
use ghzcert::observables::{product_observable, sigma_z_product};
use ghzcert::tensor::{subspace_distance, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use schema::{
    sparse_amplitudes, AngleFile, CertOutput, ConstructOutput, IdentityResiduals, PairFile, PuritySummary, Report,
    StateFile, UnitariesFile, VerifyOutput,
};

pub const DEFAULT_TOL: f64 = 1e-9;
/// Largest party count `solve` reports sector dimensions for; each sector
/// needs an oracle decomposition of the full space.
pub const SECTOR_LIMIT: usize = 8;

/// Failure of a subcommand, split by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit status 2.
    Input(String),
    /// A library self-check failed; exit status 3.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<ghzcert::Error> for CliError {
    fn from(e: ghzcert::Error) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Tolerance and mode resolved from flags, then the input file, then
/// defaults. Flags win.
#[derive(Debug, Clone, Copy, Default)]
pub struct Settings {
    pub tol: Option<f64>,
    pub mode: Option<Mode>,
}

struct Resolved {
    d: DirectionList,
    tol: f64,
    mode: Mode,
}

fn resolve(input: &AngleFile, s: Settings) -> CliResult<Resolved> {
    let d = input.to_directions().map_err(CliError::Input)?;
    let tol = s.tol.or(input.tol).unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Input(format!("tol must lie in (0, 1), got {tol}")));
    }
    let mode = s.mode.or(input.mode.map(Mode::from)).unwrap_or_else(|| Mode::auto(&d));
    if mode == Mode::Exact && !d.thetas_exact() {
        return Err(CliError::Input("exact mode needs every theta as a rational multiple of pi".into()));
    }
    Ok(Resolved { d, tol, mode })
}

fn labels(c: &ClassificationReport) -> Vec<String> {
    c.m_set.members.iter().map(|m| m.label()).collect()
}

pub fn cmd_classify(input: &AngleFile, s: Settings) -> CliResult<Report> {
    let r = resolve(input, s)?;
    let c = classify_with_mode(&r.d, r.mode, r.tol)?;
    Ok(Report {
        case: c.case.as_str().into(),
        m_set: labels(&c),
        dimension: None,
        states: None,
        residuals: None,
        sector_dims: None,
        warnings: c.warnings(),
    })
}

pub fn cmd_solve(input: &AngleFile, s: Settings) -> CliResult<Report> {
    let r = resolve(input, s)?;
    let report = solve_common_eigenspace(&r.d, r.tol)?;
    // The solver classifies with the automatic mode. An explicit mode only
    // changes the reported classification; disagreement becomes a warning.
    let c = classify_with_mode(&r.d, r.mode, r.tol)?;
    let mut warnings = c.warnings();
    if c.m_set.len() != report.dimension {
        warnings.push(format!(
            "{} mode finds {} strings but the eigenspace has dimension {}",
            r.mode,
            c.m_set.len(),
            report.dimension
        ));
    }
    let sector_dims = if r.d.n_parties() <= SECTOR_LIMIT {
        Some(sector_dimensions(&r.d, r.tol)?.dims)
    } else {
        warnings.push(format!("sector dimensions skipped above {SECTOR_LIMIT} parties"));
        None
    };
    Ok(Report {
        case: c.case.as_str().into(),
        m_set: labels(&c),
        dimension: Some(report.dimension),
        states: Some(report.basis.vectors().iter().map(sparse_amplitudes).collect()),
        residuals: Some(report.residuals),
        sector_dims,
        warnings,
    })
}

/// Where the target GHZ state of `construct` comes from.
pub enum Target {
    Canonical,
    Unitaries(UnitariesFile),
    Random(u64),
}

pub fn cmd_construct(n: usize, target: Target) -> CliResult<ConstructOutput> {
    if n < 2 {
        return Err(CliError::Input(format!("construct needs n >= 2, got {n}")));
    }
    let spec = match target {
        Target::Canonical => GhzSpec::identity(n)?,
        Target::Unitaries(file) => {
            if file.len() != n {
                return Err(CliError::Input(format!("{} unitaries for n = {n}", file.len())));
            }
            GhzSpec::new(schema::unitaries_from_file(&file))?
        }
        Target::Random(seed) => GhzSpec::random(n, &mut ChaCha8Rng::seed_from_u64(seed))?,
    };
    let pair = stabilizing_pair_for(&spec)?;
    let base = classify_with_mode(&canonical_angles(n)?, Mode::Exact, DEFAULT_TOL)?;
    let mut warnings = Vec::new();
    if pair.oracle_dimension.is_none() {
        warnings.push(format!("oracle check skipped above {MAX_ORACLE_PARTIES} parties"));
    }
    Ok(ConstructOutput {
        report: Report {
            case: base.case.as_str().into(),
            m_set: labels(&base),
            dimension: Some(pair.oracle_dimension.unwrap_or(1)),
            states: Some(vec![sparse_amplitudes(&pair.target)]),
            residuals: Some(pair.residual),
            sector_dims: None,
            warnings,
        },
        pair: PairFile {
            a: AngleFile::from_directions(&pair.a_directions),
            b: AngleFile::from_directions(&pair.b_directions),
        },
    })
}

pub struct CertifyArgs {
    pub state: Option<StateFile>,
    pub b: Option<AngleFile>,
    pub shots: usize,
    pub seed: u64,
    pub threshold: f64,
}

pub fn cmd_certify(input: &AngleFile, args: CertifyArgs, s: Settings) -> CliResult<CertOutput> {
    let r = resolve(input, s)?;
    let n = r.d.n_parties();
    let b = match &args.b {
        Some(f) => f.to_directions().map_err(CliError::Input)?,
        None => DirectionList::sigma_z(n)?,
    };
    let state: StateVector = match &args.state {
        Some(f) => f.to_state().map_err(CliError::Input)?,
        None if args.b.is_some() => {
            return Err(CliError::Input("a custom second observable needs an explicit --state".into()));
        }
        None => {
            let report = solve_common_eigenspace(&r.d, r.tol)?;
            report.basis.vectors().first().cloned().ok_or_else(|| {
                CliError::Input("no state given and the observables have no common +1 eigenstate".into())
            })?
        }
    };
    let cfg = CertificationConfig {
        shots: args.shots,
        seed: args.seed,
        pass_threshold: args.threshold,
        ..Default::default()
    };
    let rep = run_certification_pair(&Ensemble::pure(state)?, &r.d, &b, &cfg, Exec::default())?;
    Ok(CertOutput {
        mean_a: rep.mean_a,
        mean_b: rep.mean_b,
        count_a: rep.count_a,
        count_b: rep.count_b,
        stderr_a: rep.stderr_a,
        stderr_b: rep.stderr_b,
        pass: rep.pass,
        shots: args.shots,
        seed: args.seed,
        threshold: args.threshold,
    })
}

pub struct VerifyArgs {
    pub env_dim: usize,
    pub trials: usize,
    pub seed: u64,
}

pub fn cmd_verify(input: &AngleFile, args: VerifyArgs, s: Settings) -> CliResult<VerifyOutput> {
    let r = resolve(input, s)?;
    let n = r.d.n_parties();
    let report = solve_common_eigenspace(&r.d, r.tol)?;
    let (oracle_dimension, distance, sector_dims) = if n <= MAX_ORACLE_PARTIES {
        let oracle = oracle_eigenspace(&product_observable(&r.d)?, &sigma_z_product(n)?, r.tol)?;
        let dist = subspace_distance(&report.basis, &oracle)?;
        let sectors = if n <= SECTOR_LIMIT { Some(sector_dimensions(&r.d, r.tol)?.dims) } else { None };
        (Some(oracle.len()), Some(dist), sectors)
    } else {
        (None, None, None)
    };
    let (odd, even) = induction_identity_residual(&r.d)?;
    let env_dim = args.env_dim.max(report.dimension);
    let p = purity_security_check_with(&r.d, env_dim, args.trials, args.seed, r.tol, Exec::default())?;
    let m_count = report.classification.m_set.len();
    let agree = oracle_dimension.is_none_or(|o| o == report.dimension)
        && distance.is_none_or(|x| x <= 1e-7)
        && m_count == report.dimension;
    Ok(VerifyOutput {
        case: report.classification.case.as_str().into(),
        m_count,
        solver_dimension: report.dimension,
        oracle_dimension,
        subspace_distance: distance,
        sector_dims,
        identity_residuals: IdentityResiduals { odd, even },
        purity: PuritySummary {
            env_dim: p.env_dim,
            trials: p.trials,
            empty_projector: p.empty_projector,
            max_entropy: p.max_entropy,
            max_residual: p.max_residual,
            min_fidelity: p.min_fidelity,
            product_form: p.product_form(),
        },
        agree,
    })
}
