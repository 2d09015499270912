//! Local spin observables, their tensor products and the commuting Pauli
//! generator set of the GHZ state.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::angle::{Angle, DirectionList};
use crate::error::{Error, Result};
use crate::tensor::{apply_local_ops, kron, Operator, StateVector, I, MAX_DIM, ONE, ZERO};

const LOCAL_TOL: f64 = 1e-12;

pub fn pauli_i() -> Operator {
    Operator::from_2x2([[ONE, ZERO], [ZERO, ONE]])
}

pub fn pauli_x() -> Operator {
    Operator::from_2x2([[ZERO, ONE], [ONE, ZERO]])
}

pub fn pauli_y() -> Operator {
    Operator::from_2x2([[ZERO, -I], [I, ZERO]])
}

pub fn pauli_z() -> Operator {
    Operator::from_2x2([[ONE, ZERO], [ZERO, -ONE]])
}

/// Hadamard gate.
pub fn hadamard() -> Operator {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Operator::from_2x2([[h, h], [h, -h]])
}

/// `(sin t cos p, sin t sin p, cos t) . sigma`, i.e.
/// `[[cos t, e^{-ip} sin t], [e^{ip} sin t, -cos t]]`.
pub fn local_observable(theta: Angle, phi: Angle) -> Operator {
    let (c, s) = theta.cos_sin();
    let (cp, sp) = phi.cos_sin();
    let e = Complex64::new(cp, sp);
    Operator::from_2x2([[Complex64::new(c, 0.0), e.conj() * s], [e * s, Complex64::new(-c, 0.0)]])
}

/// `(cos(t/2), e^{ip} sin(t/2))`, the +1 eigenvector of
/// `local_observable(t, p)`.
pub fn spin_up_eigenvector(theta: Angle, phi: Angle) -> StateVector {
    let (c, s) = theta.half().cos_sin();
    let (cp, sp) = phi.cos_sin();
    StateVector::from_amplitudes(vec![Complex64::new(c, 0.0), Complex64::new(cp, sp) * s])
        .expect("two amplitudes form a qubit state")
}

/// `(sin(t/2), -e^{ip} cos(t/2))`, the -1 eigenvector of
/// `local_observable(t, p)`.
pub fn spin_down_eigenvector(theta: Angle, phi: Angle) -> StateVector {
    let (c, s) = theta.half().cos_sin();
    let (cp, sp) = phi.cos_sin();
    StateVector::from_amplitudes(vec![Complex64::new(s, 0.0), -Complex64::new(cp, sp) * c])
        .expect("two amplitudes form a qubit state")
}

/// Recovers `(theta, phi)` from a traceless Hermitian involution `n . sigma`.
pub fn direction_of(op: &Operator) -> Result<(Angle, Angle)> {
    if op.dim() != 2 || !op.is_hermitian(1e-10) || !op.is_involution(1e-10) || op.trace().norm() > 1e-10 {
        return Err(Error::Domain("not a 2x2 traceless Hermitian involution".into()));
    }
    let m = op.matrix();
    let theta = m[(0, 0)].re.clamp(-1.0, 1.0).acos();
    let phi = if m[(1, 0)].norm() > 1e-14 { m[(1, 0)].arg() } else { 0.0 };
    Ok((Angle::radians(theta), Angle::radians(phi)))
}

/// Tensor product of per-party 2x2 Hermitian involutions. The full
/// `2^N x 2^N` matrix is only built on first request.
#[derive(Debug, Clone)]
pub struct ProductObservable {
    locals: Vec<Operator>,
    full: OnceLock<Operator>,
}

impl ProductObservable {
    pub fn new(locals: Vec<Operator>) -> Result<Self> {
        if locals.is_empty() {
            return Err(Error::Domain("a product observable needs at least one party".into()));
        }
        if locals.len() >= usize::BITS as usize || (1usize << locals.len()) > MAX_DIM {
            return Err(Error::Size(format!("{} parties exceed the dimension cap {MAX_DIM}", locals.len())));
        }
        for (l, op) in locals.iter().enumerate() {
            if op.dim() != 2 || !op.is_hermitian(LOCAL_TOL) || !op.is_involution(1e-10) {
                return Err(Error::Domain(format!("local factor {} is not a 2x2 Hermitian involution", l + 1)));
            }
        }
        Ok(Self { locals, full: OnceLock::new() })
    }

    pub fn n_parties(&self) -> usize {
        self.locals.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.locals.len()
    }

    pub fn locals(&self) -> &[Operator] {
        &self.locals
    }

    /// The materialized tensor product, party 1 most significant.
    pub fn full(&self) -> &Operator {
        self.full.get_or_init(|| {
            let mut it = self.locals.iter();
            let first = it.next().expect("non-empty by construction").clone();
            it.fold(first, |acc, op| kron(&acc, op).expect("dimension checked at construction"))
        })
    }

    /// Applies the observable factor by factor without materializing it.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.dim() {
            return Err(Error::Shape(format!("observable of dim {} applied to state dim {}", self.dim(), v.dim())));
        }
        apply_local_ops(v, &self.locals)
    }

    /// `-self`, realized by negating the first local factor.
    pub fn negated(&self) -> Self {
        let mut locals = self.locals.clone();
        locals[0] = locals[0].scaled(-1.0);
        Self { locals, full: OnceLock::new() }
    }

    /// `(x) V_l A_l V_l^dagger` for per-party unitaries `V_l`.
    pub fn conjugated(&self, unitaries: &[Operator]) -> Result<Self> {
        if unitaries.len() != self.n_parties() {
            return Err(Error::Shape(format!("{} unitaries for {} parties", unitaries.len(), self.n_parties())));
        }
        let locals =
            self.locals.iter().zip(unitaries).map(|(a, v)| v.mul(a)?.mul(&v.adjoint())).collect::<Result<Vec<_>>>()?;
        Self::new(locals)
    }
}

/// `(x)_l local_observable(theta_l, phi_l)`.
pub fn product_observable(d: &DirectionList) -> Result<ProductObservable> {
    let locals = d.thetas().iter().zip(d.phis()).map(|(&t, &p)| local_observable(t, p)).collect();
    ProductObservable::new(locals)
}

/// `sigma_Z^{(x)n}`: diagonal with `(-1)^{parity(index)}`.
pub fn sigma_z_product(n: usize) -> Result<ProductObservable> {
    ProductObservable::new(vec![pauli_z(); n])
}

/// `X^{(x)n}` followed by `Z_1 Z_k` for `k = 2..n`.
pub fn canonical_stabilizer_generators(n: usize) -> Result<Vec<ProductObservable>> {
    if n < 2 {
        return Err(Error::Domain(format!("the GHZ generator set needs n >= 2, got {n}")));
    }
    let mut gens = vec![ProductObservable::new(vec![pauli_x(); n])?];
    for k in 1..n {
        let mut locals = vec![pauli_i(); n];
        locals[0] = pauli_z();
        locals[k] = pauli_z();
        gens.push(ProductObservable::new(locals)?);
    }
    Ok(gens)
}

/// Dimension of the common +1 eigenspace of commuting generators on `n`
/// qubits: the trace of `prod_i (I + P_i) / 2^k`, rounded.
pub fn stabilizer_dimension(n: usize, generators: &[ProductObservable]) -> Result<usize> {
    let dim = 1usize
        .checked_shl(n as u32)
        .filter(|&d| d <= MAX_DIM)
        .ok_or_else(|| Error::Size(format!("{n} qubits exceed the dimension cap")))?;
    for g in generators {
        if g.dim() != dim {
            return Err(Error::Shape(format!("generator on {} parties, expected {n}", g.n_parties())));
        }
    }
    for (a, ga) in generators.iter().enumerate() {
        for gb in &generators[a + 1..] {
            if !ga.full().commutes_with(gb.full(), 1e-10) {
                return Err(Error::Precondition("stabilizer generators must pairwise commute".into()));
            }
        }
    }
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let mut proj = id.clone();
    for g in generators {
        proj = (&proj * (&id + g.full().matrix())).scale(0.5);
    }
    let tr = proj.trace();
    Ok(tr.re.round().max(0.0) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pi(p: i64, q: i64) -> Angle {
        Angle::pi_frac(p, q).unwrap()
    }

    #[test]
    fn local_observable_examples() {
        assert!(local_observable(pi(1, 2), Angle::ZERO).max_abs_diff(&pauli_x()) < 1e-15);
        assert!(local_observable(Angle::ZERO, Angle::radians(1.234)).max_abs_diff(&pauli_z()) < 1e-15);
        assert!(local_observable(pi(1, 2), pi(1, 2)).max_abs_diff(&pauli_y()) < 1e-15);
    }

    #[test]
    fn product_observable_examples() {
        let d = DirectionList::from_pi_fracs(&[(1, 2), (1, 2)]).unwrap();
        let xx = kron(&pauli_x(), &pauli_x()).unwrap();
        assert!(product_observable(&d).unwrap().full().max_abs_diff(&xx) < 1e-15);

        let d = DirectionList::from_pi_fracs(&[(0, 1)]).unwrap();
        assert!(product_observable(&d).unwrap().full().max_abs_diff(&pauli_z()) < 1e-15);

        let d = DirectionList::from_pi_fracs(&[(2, 3); 3]).unwrap();
        let a = product_observable(&d).unwrap();
        assert_eq!(a.dim(), 8);
        assert!(a.full().is_hermitian(1e-12));
        assert!(a.full().is_involution(1e-12));
    }

    #[test]
    fn sigma_z_product_examples() {
        let diag = |n: usize| -> Vec<f64> {
            let z = sigma_z_product(n).unwrap();
            (0..1 << n).map(|k| z.full().matrix()[(k, k)].re).collect()
        };
        assert_eq!(diag(1), vec![1.0, -1.0]);
        assert_eq!(diag(2), vec![1.0, -1.0, -1.0, 1.0]);
        assert_eq!(diag(3), vec![1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0]);
        let m = sigma_z_product(3).unwrap().full().matrix().clone();
        assert!((0..8).all(|i| (0..8).all(|j| i == j || m[(i, j)].norm() == 0.0)));
    }

    #[test]
    fn canonical_generators_examples() {
        let g2 = canonical_stabilizer_generators(2).unwrap();
        let xx = kron(&pauli_x(), &pauli_x()).unwrap();
        let zz = kron(&pauli_z(), &pauli_z()).unwrap();
        assert!(g2[0].full().max_abs_diff(&xx) < 1e-15);
        assert!(g2[1].full().max_abs_diff(&zz) < 1e-15);
        assert_eq!(stabilizer_dimension(2, &g2).unwrap(), 1);

        let g3 = canonical_stabilizer_generators(3).unwrap();
        let zi = kron(&zz, &pauli_i()).unwrap();
        let ziz = kron(&kron(&pauli_z(), &pauli_i()).unwrap(), &pauli_z()).unwrap();
        assert!(g3[1].full().max_abs_diff(&zi) < 1e-15);
        assert!(g3[2].full().max_abs_diff(&ziz) < 1e-15);
        assert!(matches!(canonical_stabilizer_generators(1), Err(Error::Domain(_))));
    }

    #[test]
    fn stabilizer_dimension_examples() {
        let g3 = canonical_stabilizer_generators(3).unwrap();
        assert_eq!(stabilizer_dimension(3, &g3).unwrap(), 1);
        assert_eq!(stabilizer_dimension(3, &g3[..2]).unwrap(), 2);
        assert_eq!(stabilizer_dimension(4, &[]).unwrap(), 16);
    }

    #[test]
    fn stabilizer_dimension_rejects_anticommuting() {
        let x = ProductObservable::new(vec![pauli_x()]).unwrap();
        let z = ProductObservable::new(vec![pauli_z()]).unwrap();
        assert!(matches!(stabilizer_dimension(1, &[x, z]), Err(Error::Precondition(_))));
    }

    #[test]
    fn canonical_generators_stabilize_ghz() {
        for n in 2..=8 {
            let gens = canonical_stabilizer_generators(n).unwrap();
            assert_eq!(stabilizer_dimension(n, &gens).unwrap(), 1, "n = {n}");
            let ghz = StateVector::ghz(n as u32).unwrap();
            for g in &gens {
                let out = g.apply(&ghz).unwrap();
                assert!((out.amplitudes() - ghz.amplitudes()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn spin_up_examples() {
        let up0 = spin_up_eigenvector(Angle::ZERO, Angle::radians(0.7));
        assert_eq!(up0.amplitudes()[0], ONE);
        assert_eq!(up0.amplitudes()[1].norm(), 0.0);
        let plus = spin_up_eigenvector(pi(1, 2), Angle::ZERO);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((plus.amplitudes()[0].re - h).abs() < 1e-15 && (plus.amplitudes()[1].re - h).abs() < 1e-15);
        let down = spin_up_eigenvector(Angle::PI, Angle::ZERO);
        assert!(down.amplitudes()[0].norm() < 1e-15 && (down.amplitudes()[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn direction_round_trip() {
        let op = local_observable(Angle::radians(1.1), Angle::radians(-2.0));
        let (t, p) = direction_of(&op).unwrap();
        assert!(local_observable(t, p).max_abs_diff(&op) < 1e-12);
        assert!(direction_of(&pauli_i()).is_err());
    }

    #[test]
    fn apply_matches_full_matrix() {
        let d = DirectionList::new(
            vec![Angle::radians(0.3), Angle::radians(2.1), Angle::radians(-1.0)],
            vec![Angle::radians(1.0), Angle::radians(0.2), Angle::radians(4.0)],
        )
        .unwrap();
        let a = product_observable(&d).unwrap();
        let v =
            StateVector::from_amplitudes((0..8).map(|k| Complex64::new(k as f64, 1.0 - k as f64)).collect()).unwrap();
        let fast = a.apply(&v).unwrap();
        let slow = a.full().apply(&v).unwrap();
        assert!((fast.amplitudes() - slow.amplitudes()).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn local_observable_is_traceless_hermitian_involution(t in -10.0f64..10.0, p in -10.0f64..10.0) {
            let op = local_observable(Angle::radians(t), Angle::radians(p));
            prop_assert!(op.is_hermitian(1e-12));
            prop_assert!(op.is_involution(1e-12));
            prop_assert!(op.trace().norm() < 1e-12);
        }

        #[test]
        fn spin_vectors_are_eigenvectors(t in -10.0f64..10.0, p in -10.0f64..10.0) {
            let (t, p) = (Angle::radians(t), Angle::radians(p));
            let op = local_observable(t, p);
            let up = spin_up_eigenvector(t, p);
            let down = spin_down_eigenvector(t, p);
            prop_assert!((op.apply(&up).unwrap().amplitudes() - up.amplitudes()).norm() < 1e-12);
            prop_assert!((op.apply(&down).unwrap().amplitudes() + down.amplitudes()).norm() < 1e-12);
            prop_assert!(up.inner(&down).unwrap().norm() < 1e-12);
        }
    }
}
