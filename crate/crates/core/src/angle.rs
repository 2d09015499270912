//! Measurement angles, either exact rational multiples of pi or raw radians.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

/// An angle. `Exact { num, den }` means `(num / den) * pi`, kept in lowest
/// terms with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Exact { num: i64, den: i64 },
    Approx(f64),
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Angle {
    pub const ZERO: Angle = Angle::Exact { num: 0, den: 1 };
    pub const PI: Angle = Angle::Exact { num: 1, den: 1 };

    /// `(num / den) * pi`. `den` must be nonzero; the sign is moved to the
    /// numerator.
    pub fn pi_frac(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("angle denominator must be nonzero".into()));
        }
        Self::reduced(num as i128, den as i128)
            .ok_or_else(|| Error::Domain(format!("angle {num}/{den} pi does not fit in 64 bits")))
    }

    pub fn radians(r: f64) -> Self {
        Angle::Approx(r)
    }

    fn reduced(num: i128, den: i128) -> Option<Self> {
        let g = gcd(num, den).max(1);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Some(Angle::Exact { num: i64::try_from(n).ok()?, den: i64::try_from(d).ok()? })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Angle::Exact { .. })
    }

    /// `(num, den)` for exact angles.
    pub fn as_pi_fraction(&self) -> Option<(i64, i64)> {
        match *self {
            Angle::Exact { num, den } => Some((num, den)),
            Angle::Approx(_) => None,
        }
    }

    pub fn to_radians(&self) -> f64 {
        match *self {
            Angle::Exact { num, den } => num as f64 * PI / den as f64,
            Angle::Approx(r) => r,
        }
    }

    pub fn half(&self) -> Self {
        match *self {
            Angle::Exact { num, den } => {
                Self::reduced(num as i128, 2 * den as i128).unwrap_or(Angle::Approx(self.to_radians() / 2.0))
            }
            Angle::Approx(r) => Angle::Approx(r / 2.0),
        }
    }

    /// `(cos, sin)`. Exact multiples of pi/2 give exact values; other exact
    /// angles are first reduced modulo 2 pi so large numerators lose nothing.
    pub fn cos_sin(&self) -> (f64, f64) {
        match *self {
            Angle::Exact { num, den } => {
                let (num, den) = (num as i128, den as i128);
                let r = num.rem_euclid(2 * den);
                if (2 * r) % den == 0 {
                    return match (2 * r) / den {
                        0 => (1.0, 0.0),
                        1 => (0.0, 1.0),
                        2 => (-1.0, 0.0),
                        _ => (0.0, -1.0),
                    };
                }
                let centred = if r > den { r - 2 * den } else { r };
                let x = centred as f64 * PI / den as f64;
                (x.cos(), x.sin())
            }
            Angle::Approx(r) => (r.cos(), r.sin()),
        }
    }

    pub fn cos(&self) -> f64 {
        self.cos_sin().0
    }

    pub fn sin(&self) -> f64 {
        self.cos_sin().1
    }

    fn combine(self, other: Angle, sign: i128) -> Angle {
        match (self, other) {
            (Angle::Exact { num: a, den: b }, Angle::Exact { num: c, den: d }) => {
                let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
                let l = b / gcd(b, d) * d;
                Self::reduced(a * (l / b) + sign * c * (l / d), l)
                    .unwrap_or(Angle::Approx(self.to_radians() + sign as f64 * other.to_radians()))
            }
            _ => Angle::Approx(self.to_radians() + sign as f64 * other.to_radians()),
        }
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        match self {
            Angle::Exact { num, den } => Angle::Exact { num: -num, den },
            Angle::Approx(r) => Angle::Approx(-r),
        }
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        self.combine(rhs, 1)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        self.combine(rhs, -1)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Angle::Exact { num: 0, .. } => write!(f, "0"),
            Angle::Exact { num, den: 1 } => write!(f, "{num}pi"),
            Angle::Exact { num, den } => write!(f, "{num}pi/{den}"),
            Angle::Approx(r) => write!(f, "{r}"),
        }
    }
}

/// Per-party measurement directions `(theta_l, phi_l)`, party 1 first.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionList {
    thetas: Vec<Angle>,
    phis: Vec<Angle>,
}

impl DirectionList {
    pub fn new(thetas: Vec<Angle>, phis: Vec<Angle>) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::Domain("a direction list needs at least one party".into()));
        }
        if thetas.len() != phis.len() {
            return Err(Error::Shape(format!("{} thetas but {} phis", thetas.len(), phis.len())));
        }
        Ok(Self { thetas, phis })
    }

    /// Directions with every `phi_l = 0`.
    pub fn from_thetas(thetas: Vec<Angle>) -> Result<Self> {
        let phis = vec![Angle::ZERO; thetas.len()];
        Self::new(thetas, phis)
    }

    /// Exact `theta_l = (num_l / den_l) pi`, `phi_l = 0`.
    pub fn from_pi_fracs(fracs: &[(i64, i64)]) -> Result<Self> {
        let thetas = fracs.iter().map(|&(p, q)| Angle::pi_frac(p, q)).collect::<Result<Vec<_>>>()?;
        Self::from_thetas(thetas)
    }

    /// All directions along z, i.e. the observable `sigma_Z^{(x)n}`.
    pub fn sigma_z(n: usize) -> Result<Self> {
        Self::from_thetas(vec![Angle::ZERO; n])
    }

    pub fn n_parties(&self) -> usize {
        self.thetas.len()
    }

    pub fn thetas(&self) -> &[Angle] {
        &self.thetas
    }

    pub fn phis(&self) -> &[Angle] {
        &self.phis
    }

    /// True when every theta is an exact multiple of pi.
    pub fn thetas_exact(&self) -> bool {
        self.thetas.iter().all(Angle::is_exact)
    }

    pub(crate) fn set_party(&mut self, idx: usize, theta: Angle, phi: Angle) {
        self.thetas[idx] = theta;
        self.phis[idx] = phi;
    }
}
