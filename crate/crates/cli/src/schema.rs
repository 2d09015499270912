//! JSON documents read and written by the command-line tool.

use ghzcert::angle::{Angle, DirectionList};
use ghzcert::bits::BitString;
use ghzcert::classifier::Mode;
use ghzcert::tensor::{Operator, StateVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Amplitudes at or below this magnitude are left out of sparse listings.
pub const SPARSE_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleValue {
    PiFraction { pi_num: i64, pi_den: i64 },
    Radians { rad: f64 },
}

impl Default for AngleValue {
    fn default() -> Self {
        AngleValue::PiFraction { pi_num: 0, pi_den: 1 }
    }
}

impl AngleValue {
    pub fn to_angle(self) -> Result<Angle, String> {
        match self {
            AngleValue::PiFraction { pi_num, pi_den } => {
                if pi_den <= 0 {
                    return Err(format!("pi_den must be positive, got {pi_den}"));
                }
                Angle::pi_frac(pi_num, pi_den).map_err(|e| e.to_string())
            }
            AngleValue::Radians { rad } if rad.is_finite() => Ok(Angle::radians(rad)),
            AngleValue::Radians { rad } => Err(format!("angle {rad} is not finite")),
        }
    }

    pub fn from_angle(a: &Angle) -> Self {
        match a.as_pi_fraction() {
            Some((pi_num, pi_den)) => AngleValue::PiFraction { pi_num, pi_den },
            None => AngleValue::Radians { rad: a.to_radians() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleRecord {
    pub theta: AngleValue,
    #[serde(default)]
    pub phi: AngleValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Exact,
    Approx,
}

impl From<ModeName> for Mode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::Exact => Mode::Exact,
            ModeName::Approx => Mode::Approx,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleFile {
    pub n: usize,
    pub angles: Vec<AngleRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeName>,
}

impl AngleFile {
    pub fn from_directions(d: &DirectionList) -> Self {
        let angles = d
            .thetas()
            .iter()
            .zip(d.phis())
            .map(|(t, p)| AngleRecord { theta: AngleValue::from_angle(t), phi: AngleValue::from_angle(p) })
            .collect();
        Self { n: d.n_parties(), angles, tol: None, mode: None }
    }

    pub fn to_directions(&self) -> Result<DirectionList, String> {
        if self.n != self.angles.len() {
            return Err(format!("n = {} but {} angle records", self.n, self.angles.len()));
        }
        if self.n == 0 {
            return Err("n must be at least 1".into());
        }
        let mut thetas = Vec::with_capacity(self.n);
        let mut phis = Vec::with_capacity(self.n);
        for (l, rec) in self.angles.iter().enumerate() {
            thetas.push(rec.theta.to_angle().map_err(|e| format!("party {}: theta: {e}", l + 1))?);
            phis.push(rec.phi.to_angle().map_err(|e| format!("party {}: phi: {e}", l + 1))?);
        }
        DirectionList::new(thetas, phis).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Amplitude {
    pub index: usize,
    pub label: String,
    pub re: f64,
    pub im: f64,
}

pub fn sparse_amplitudes(v: &StateVector) -> Vec<Amplitude> {
    let n = v.n_qubits() as usize;
    v.amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > SPARSE_CUTOFF)
        .map(|(index, a)| Amplitude {
            index,
            label: BitString::new(n, index as u64).map(|b| b.label()).unwrap_or_default(),
            re: a.re,
            im: a.im,
        })
        .collect()
}

/// A state given as sparse amplitudes. Labels are informational and
/// ignored on input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n: usize,
    pub amplitudes: Vec<StateAmplitude>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateAmplitude {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl StateFile {
    pub fn to_state(&self) -> Result<StateVector, String> {
        if self.n == 0 || self.n > 14 {
            return Err(format!("state files support 1..=14 qubits, got {}", self.n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        for a in &self.amplitudes {
            let slot = amps.get_mut(a.index).ok_or_else(|| format!("index {} out of range", a.index))?;
            *slot += Complex64::new(a.re, a.im);
        }
        let v = StateVector::from_amplitudes(amps).map_err(|e| e.to_string())?;
        if (v.norm() - 1.0).abs() > 1e-9 {
            return Err(format!("state has norm {}, expected 1", v.norm()));
        }
        Ok(v)
    }
}

/// One `[[a, b], [c, d]]` unitary per party, entries as `[re, im]`.
pub type UnitariesFile = Vec<[[[f64; 2]; 2]; 2]>;

pub fn unitaries_from_file(file: &UnitariesFile) -> Vec<Operator> {
    file.iter()
        .map(|m| {
            let c = |e: [f64; 2]| Complex64::new(e[0], e[1]);
            Operator::from_2x2([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub case: String,
    pub m_set: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<Vec<Amplitude>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sector_dims: Option<[usize; 4]>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    pub a: AngleFile,
    pub b: AngleFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructOutput {
    pub report: Report,
    pub pair: PairFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertOutput {
    pub mean_a: f64,
    pub mean_b: f64,
    pub count_a: usize,
    pub count_b: usize,
    pub stderr_a: f64,
    pub stderr_b: f64,
    pub pass: bool,
    pub shots: usize,
    pub seed: u64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityResiduals {
    pub odd: f64,
    pub even: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PuritySummary {
    pub env_dim: usize,
    pub trials: usize,
    pub empty_projector: bool,
    pub max_entropy: f64,
    pub max_residual: f64,
    pub min_fidelity: Option<f64>,
    pub product_form: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyOutput {
    pub case: String,
    pub m_count: usize,
    pub solver_dimension: usize,
    /// Absent above the oracle size limit.
    pub oracle_dimension: Option<usize>,
    pub subspace_distance: Option<f64>,
    pub sector_dims: Option<[usize; 4]>,
    pub identity_residuals: IdentityResiduals,
    pub purity: PuritySummary,
    pub agree: bool,
}
