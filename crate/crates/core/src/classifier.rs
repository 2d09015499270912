//! Classification of `A = (x) A_l` against `B = sigma_Z^{(x)N}` by the set of
//! sign strings `m` whose signed angle sum `s_m = sum_l (-1)^{m_l} theta_l`
//! satisfies `sin(s_m / 2) = 0`.

use std::fmt;

use crate::angle::{Angle, DirectionList};
use crate::bits::{check_parties, BitString};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// How the condition `sin(s/2) = 0` is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Integer arithmetic on rational multiples of pi.
    Exact,
    /// Floating point, `|sin(s/2)| <= tol`.
    Approx,
}

impl Mode {
    /// Exact when every theta is an exact multiple of pi.
    pub fn auto(d: &DirectionList) -> Mode {
        if d.thetas_exact() {
            Mode::Exact
        } else {
            Mode::Approx
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Approx => "approx",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    NoCommonEigenstate,
    UniqueGhz,
    Degenerate,
}

impl Case {
    pub fn as_str(&self) -> &'static str {
        match self {
            Case::NoCommonEigenstate => "NoCommonEigenstate",
            Case::UniqueGhz => "UniqueGHZ",
            Case::Degenerate => "Degenerate",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Strings with `m_1 = 0` satisfying the condition. Complements (which always
/// satisfy it too) are listed separately and never counted as members.
#[derive(Debug, Clone, PartialEq)]
pub struct MSet {
    pub members: Vec<BitString>,
    pub sums: Vec<Angle>,
    pub complements: Vec<BitString>,
    /// Approx mode only: non-members with `|sin(s/2)|` within `10 * tol`.
    pub near_misses: Vec<BitString>,
}

impl MSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn fragile(&self) -> bool {
        !self.near_misses.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub case: Case,
    pub m_set: MSet,
    pub mode: Mode,
    pub tol: f64,
}

impl ClassificationReport {
    pub fn warnings(&self) -> Vec<String> {
        self.m_set
            .near_misses
            .iter()
            .map(|m| format!("fragile: string {m} misses the condition by less than 10x tol ({})", self.tol))
            .collect()
    }
}

/// `sum_l (-1)^{m_l} theta_l`, exact when every theta is exact.
pub fn signed_angle_sum(d: &DirectionList, m: &BitString) -> Result<Angle> {
    if m.n() != d.n_parties() {
        return Err(Error::Shape(format!("{}-bit string for {} parties", m.n(), d.n_parties())));
    }
    Ok(d.thetas().iter().enumerate().fold(
        Angle::ZERO,
        |acc, (k, &t)| {
            if m.party(k + 1) == 0 {
                acc + t
            } else {
                acc - t
            }
        },
    ))
}

/// Evaluates the condition for arbitrary strings under one mode.
enum Condition {
    /// Scaled numerators over the common denominator `den`.
    Exact {
        nums: Vec<i128>,
        den: i128,
    },
    Approx {
        radians: Vec<f64>,
        tol: f64,
    },
}

impl Condition {
    fn new(d: &DirectionList, mode: Mode, tol: f64) -> Result<Self> {
        match mode {
            Mode::Exact => {
                let fracs =
                    d.thetas().iter().map(|t| t.as_pi_fraction()).collect::<Option<Vec<_>>>().ok_or_else(|| {
                        Error::Domain("exact mode requires every theta to be a rational multiple of pi".into())
                    })?;
                let overflow = || Error::Domain("common denominator of the angles overflows".into());
                let mut den: i128 = 1;
                for &(_, q) in &fracs {
                    let q = q as i128;
                    den = den.checked_mul(q / gcd(den, q)).ok_or_else(overflow)?;
                }
                let nums = fracs
                    .iter()
                    .map(|&(p, q)| (p as i128).checked_mul(den / q as i128).ok_or_else(overflow))
                    .collect::<Result<Vec<_>>>()?;
                // Sums of up to 24 terms must stay representable.
                nums.iter().try_fold(0i128, |acc, &a| acc.checked_add(a.abs())).ok_or_else(overflow)?;
                Ok(Condition::Exact { nums, den })
            }
            Mode::Approx => {
                if !(tol.is_finite() && tol >= 0.0) {
                    return Err(Error::Domain(format!("tolerance must be finite and non-negative, got {tol}")));
                }
                Ok(Condition::Approx { radians: d.thetas().iter().map(Angle::to_radians).collect(), tol })
            }
        }
    }

    fn n(&self) -> usize {
        match self {
            Condition::Exact { nums, .. } => nums.len(),
            Condition::Approx { radians, .. } => radians.len(),
        }
    }

    /// `(holds, near_miss)` for string `bits`.
    fn test(&self, bits: u64) -> (bool, bool) {
        let n = self.n();
        match self {
            Condition::Exact { nums, den } => {
                let s: i128 =
                    nums.iter().enumerate().map(|(k, &a)| if (bits >> (n - 1 - k)) & 1 == 0 { a } else { -a }).sum();
                (s.rem_euclid(2 * den) == 0, false)
            }
            Condition::Approx { radians, tol } => {
                let s: f64 =
                    radians.iter().enumerate().map(|(k, &a)| if (bits >> (n - 1 - k)) & 1 == 0 { a } else { -a }).sum();
                let v = (s / 2.0).sin().abs();
                (v <= *tol, v > *tol && v <= 10.0 * tol)
            }
        }
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Every string (both halves, no `m_1 = 0` filter) satisfying the condition.
pub fn condition_strings(d: &DirectionList, mode: Mode, tol: f64) -> Result<Vec<BitString>> {
    let n = d.n_parties();
    check_parties(n)?;
    let cond = Condition::new(d, mode, tol)?;
    Ok(Exec::default().filter_map(1 << n, |b| cond.test(b as u64).0.then(|| BitString::raw(n, b as u64))))
}

/// The M set under the automatically chosen mode.
pub fn m_set(d: &DirectionList, tol: f64) -> Result<MSet> {
    m_set_with_mode(d, Mode::auto(d), tol)
}

pub fn m_set_with_mode(d: &DirectionList, mode: Mode, tol: f64) -> Result<MSet> {
    m_set_exec(d, mode, tol, Exec::default())
}

pub fn m_set_exec(d: &DirectionList, mode: Mode, tol: f64, exec: Exec) -> Result<MSet> {
    let n = d.n_parties();
    check_parties(n)?;
    let cond = Condition::new(d, mode, tol)?;
    // m_1 = 0 means the most significant bit is clear.
    let hits = exec.filter_map(1 << (n - 1), |b| {
        let (holds, near) = cond.test(b as u64);
        (holds || near).then_some((b as u64, holds))
    });
    let mut set = MSet { members: Vec::new(), sums: Vec::new(), complements: Vec::new(), near_misses: Vec::new() };
    for (b, holds) in hits {
        let m = BitString::raw(n, b);
        if holds {
            set.sums.push(signed_angle_sum(d, &m)?);
            set.complements.push(m.complement());
            set.members.push(m);
        } else {
            set.near_misses.push(m);
        }
    }
    Ok(set)
}

/// Classification under the automatically chosen mode.
pub fn classify(d: &DirectionList, tol: f64) -> Result<ClassificationReport> {
    classify_with_mode(d, Mode::auto(d), tol)
}

pub fn classify_with_mode(d: &DirectionList, mode: Mode, tol: f64) -> Result<ClassificationReport> {
    let m_set = m_set_with_mode(d, mode, tol)?;
    let case = match m_set.len() {
        0 => Case::NoCommonEigenstate,
        1 => Case::UniqueGhz,
        _ => Case::Degenerate,
    };
    Ok(ClassificationReport { case, m_set, mode, tol })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Directions whose `(+1, +1)` analysis against `sigma_Z^{(x)N}` is the
/// `(sign_a, sign_b)` sector of the original pair.
///
/// `sign_a = -1` maps party 1 to `(pi - theta, phi + pi)`, which negates
/// `A_1`. `sign_b = -1` conjugates party 1 by `sigma_X`, mapping it to
/// `(pi - theta, -phi)` and sending `-B` back to `B`.
pub fn sector_transform(d: &DirectionList, sign_a: Sign, sign_b: Sign) -> DirectionList {
    let mut out = d.clone();
    let (mut theta, mut phi) = (d.thetas()[0], d.phis()[0]);
    if sign_a == Sign::Minus {
        theta = Angle::PI - theta;
        phi = phi + Angle::PI;
    }
    if sign_b == Sign::Minus {
        theta = Angle::PI - theta;
        phi = -phi;
    }
    out.set_party(0, theta, phi);
    out
}
