//! Dense complex linear algebra on 2^N-dimensional Hilbert spaces.
//!
//! Basis index convention: party `l` (1-based) occupies bit `N - l` of the
//! computational-basis index, so party 1 is the most significant bit and
//! `kron(a, b)` gives `a` the most significant index block.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest ambient dimension any operator or state may have.
pub const MAX_DIM: usize = 1 << 14;

/// Default relative tolerance for rank decisions.
pub const DEFAULT_NULL_TOL: f64 = 1e-9;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

fn log2_exact(dim: usize) -> Option<u32> {
    (dim > 0 && dim.is_power_of_two()).then(|| dim.trailing_zeros())
}

/// Pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: u32,
    amps: DVector<Complex64>,
}

impl StateVector {
    pub fn new(n_qubits: u32, amps: DVector<Complex64>) -> Result<Self> {
        let dim = 1usize
            .checked_shl(n_qubits)
            .filter(|&d| d <= MAX_DIM)
            .ok_or_else(|| Error::Size(format!("{n_qubits} qubits exceeds the dimension cap {MAX_DIM}")))?;
        if amps.len() != dim {
            return Err(Error::Shape(format!(
                "{} amplitudes supplied for {n_qubits} qubits (expected {dim})",
                amps.len()
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Builds a state from a vector whose length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = log2_exact(amps.len())
            .ok_or_else(|| Error::Shape(format!("length {} is not a power of two", amps.len())))?;
        Self::new(n, DVector::from_vec(amps))
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: u32, index: usize) -> Result<Self> {
        let mut s = Self::new(n_qubits, DVector::zeros(1 << n_qubits))?;
        if index >= s.dim() {
            return Err(Error::Domain(format!("basis index {index} out of range")));
        }
        s.amps[index] = ONE;
        Ok(s)
    }

    /// `(|0..0> + |1..1>)/sqrt(2)`.
    pub fn ghz(n_qubits: u32) -> Result<Self> {
        let mut s = Self::new(n_qubits, DVector::zeros(1 << n_qubits))?;
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let last = s.dim() - 1;
        s.amps[0] = h;
        s.amps[last] += h;
        Ok(s)
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// Scales to unit norm. A zero vector is a domain error.
    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        self.amps.unscale_mut(n);
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!("inner product of dims {} and {}", self.dim(), other.dim())));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Multiplies by the unit phase that makes the largest-magnitude amplitude
    /// (first one on ties within 1e-12) real and positive.
    pub fn fix_global_phase(&mut self) {
        let mut best = 0usize;
        let mut best_mag = 0.0;
        for (k, a) in self.amps.iter().enumerate() {
            if a.norm() > best_mag + 1e-12 {
                best = k;
                best_mag = a.norm();
            }
        }
        if best_mag > 0.0 {
            let phase = self.amps[best].conj() / best_mag;
            for a in self.amps.iter_mut() {
                *a *= phase;
            }
        }
    }

    /// Single-party reduced density matrix for party `party` (1-based).
    pub fn reduced_single_party(&self, party: u32) -> Result<DMatrix<Complex64>> {
        if party == 0 || party > self.n_qubits {
            return Err(Error::Domain(format!("party {party} out of range 1..={}", self.n_qubits)));
        }
        let bit = 1usize << (self.n_qubits - party);
        let mut rho = DMatrix::zeros(2, 2);
        for idx in 0..self.dim() {
            if idx & bit != 0 {
                continue;
            }
            let a0 = self.amps[idx];
            let a1 = self.amps[idx | bit];
            rho[(0, 0)] += a0 * a0.conj();
            rho[(0, 1)] += a0 * a1.conj();
            rho[(1, 0)] += a1 * a0.conj();
            rho[(1, 1)] += a1 * a1.conj();
        }
        Ok(rho)
    }
}

/// Square complex matrix acting on a power-of-two dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(DMatrix<Complex64>);

impl Operator {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Shape(format!("operator must be square, got {}x{}", m.nrows(), m.ncols())));
        }
        if log2_exact(m.nrows()).is_none() {
            return Err(Error::Shape(format!("operator dimension {} is not a power of two", m.nrows())));
        }
        if m.nrows() > MAX_DIM {
            return Err(Error::Size(format!("operator dimension {} exceeds {MAX_DIM}", m.nrows())));
        }
        Ok(Self(m))
    }

    /// 2x2 operator from row-major entries.
    pub fn from_2x2(entries: [[Complex64; 2]; 2]) -> Self {
        Self(DMatrix::from_fn(2, 2, |r, c| entries[r][c]))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn mul(&self, other: &Operator) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!("product of dims {} and {}", self.dim(), other.dim())));
        }
        Ok(Self(&self.0 * &other.0))
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if self.dim() != v.dim() {
            return Err(Error::Shape(format!("operator dim {} applied to state dim {}", self.dim(), v.dim())));
        }
        StateVector::new(v.n_qubits(), &self.0 * v.amplitudes())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Largest absolute entry-wise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_involution(&self, tol: f64) -> bool {
        let sq = Self(&self.0 * &self.0);
        sq.max_abs_diff(&Self(DMatrix::identity(self.dim(), self.dim()))) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let p = Self(&self.0 * self.0.adjoint());
        p.max_abs_diff(&Self(DMatrix::identity(self.dim(), self.dim()))) <= tol
    }

    /// `self * other - other * self` is zero within `tol` (entry-wise).
    pub fn commutes_with(&self, other: &Operator, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let c = &self.0 * &other.0 - &other.0 * &self.0;
        c.iter().all(|z| z.norm() <= tol)
    }
}

/// Applies `(x)_l ops[l]` to `v` one 2x2 factor at a time.
pub fn apply_local_ops(v: &StateVector, ops: &[Operator]) -> Result<StateVector> {
    let n = v.n_qubits() as usize;
    if ops.len() != n {
        return Err(Error::Shape(format!("{} local operators for {n} qubits", ops.len())));
    }
    let mut amps = v.amplitudes().clone();
    for (l, op) in ops.iter().enumerate() {
        if op.dim() != 2 {
            return Err(Error::Shape(format!("local operator {} has dim {}", l + 1, op.dim())));
        }
        let m = op.matrix();
        let bit = 1usize << (n - 1 - l);
        for idx in 0..amps.len() {
            if idx & bit != 0 {
                continue;
            }
            let (a0, a1) = (amps[idx], amps[idx | bit]);
            amps[idx] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
            amps[idx | bit] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
        }
    }
    StateVector::new(v.n_qubits(), amps)
}

/// Kronecker product with the default dimension cap.
pub fn kron(a: &Operator, b: &Operator) -> Result<Operator> {
    kron_capped(a, b, MAX_DIM)
}

/// Kronecker product; `a` owns the most significant index block.
pub fn kron_capped(a: &Operator, b: &Operator, max_dim: usize) -> Result<Operator> {
    let dim = a
        .dim()
        .checked_mul(b.dim())
        .filter(|&d| d <= max_dim)
        .ok_or_else(|| Error::Size(format!("kron of dims {} and {} exceeds {max_dim}", a.dim(), b.dim())))?;
    let (am, bm) = (a.matrix(), b.matrix());
    let db = b.dim();
    let m = DMatrix::from_fn(dim, dim, |r, c| am[(r / db, c / db)] * bm[(r % db, c % db)]);
    Ok(Operator(m))
}

/// Orthonormal spanning set of a subspace of a `dim`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    dim: usize,
    vectors: Vec<StateVector>,
}

impl SubspaceBasis {
    pub fn empty(dim: usize) -> Self {
        Self { dim, vectors: Vec::new() }
    }

    /// Orthonormalizes `vectors` (two passes of modified Gram-Schmidt),
    /// dropping any whose residual norm falls below `tol` relative to its
    /// original norm.
    pub fn orthonormalize(dim: usize, vectors: &[StateVector], tol: f64) -> Result<Self> {
        let mut out: Vec<StateVector> = Vec::new();
        for v in vectors {
            if v.dim() != dim {
                return Err(Error::Shape(format!("vector of dim {} in a {dim}-dimensional basis", v.dim())));
            }
            let n0 = v.norm();
            if n0 == 0.0 {
                continue;
            }
            let mut w = v.amplitudes().clone();
            for _ in 0..2 {
                for u in &out {
                    let c = u.amplitudes().dotc(&w);
                    w -= u.amplitudes() * c;
                }
            }
            let n = w.norm();
            if n > tol * n0 {
                w.unscale_mut(n);
                out.push(StateVector::new(v.n_qubits(), w)?);
            }
        }
        Ok(Self { dim, vectors: out })
    }

    pub(crate) fn from_orthonormal(dim: usize, vectors: Vec<StateVector>) -> Self {
        Self { dim, vectors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<StateVector> {
        self.vectors
    }

    /// Basis vectors as the columns of a `dim x len` matrix.
    pub fn as_columns(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.len());
        for (k, v) in self.vectors.iter().enumerate() {
            m.set_column(k, v.amplitudes());
        }
        m
    }

    /// Orthogonal projector onto the span.
    pub fn projector(&self) -> DMatrix<Complex64> {
        let q = self.as_columns();
        &q * q.adjoint()
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_deviation(&self) -> f64 {
        let q = self.as_columns();
        let g = q.adjoint() * &q;
        let id = DMatrix::<Complex64>::identity(self.len(), self.len());
        (g - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Null space of a (possibly rectangular) matrix together with the
/// singular-value spectrum used to decide it.
#[derive(Debug, Clone)]
pub struct NullSpace {
    pub basis: SubspaceBasis,
    /// Singular values in descending order.
    pub singular_values: Vec<f64>,
    /// Largest singular value counted as zero, relative to the largest one.
    pub last_zero: Option<f64>,
    /// Smallest singular value counted as nonzero, relative to the largest one.
    pub first_nonzero: Option<f64>,
}

impl NullSpace {
    pub fn rank(&self) -> usize {
        self.basis.dim() - self.basis.len()
    }
}

/// Orthonormal basis of `{v : m v = 0}` for a square operator.
pub fn null_space(m: &Operator, tol: f64) -> Result<SubspaceBasis> {
    Ok(null_space_of(m.matrix(), tol)?.basis)
}

/// Null space of an arbitrary `r x c` matrix via SVD. Singular values at or
/// below `tol` times the largest count as zero; a zero matrix has a full null
/// space.
pub fn null_space_of(m: &DMatrix<Complex64>, tol: f64) -> Result<NullSpace> {
    let cols = m.ncols();
    let n_qubits =
        log2_exact(cols).ok_or_else(|| Error::Shape(format!("column count {cols} is not a power of two")))?;
    if cols > MAX_DIM {
        return Err(Error::Size(format!("null space of width {cols} exceeds {MAX_DIM}")));
    }
    let svd = svd(m, false)?;
    // Columns of v past the row count of a wide matrix are null directions.
    let mut sv = svd.singular_values.clone();
    sv.resize(cols, 0.0);
    let top = sv.first().copied().unwrap_or(0.0);

    let mut vectors = Vec::new();
    let (mut last_zero, mut first_nonzero) = (None, None);
    for (k, &s) in sv.iter().enumerate() {
        let rel = if top > 0.0 { s / top } else { 0.0 };
        if rel <= tol {
            last_zero = Some(last_zero.map_or(rel, |z: f64| z.max(rel)));
            let col: DVector<Complex64> = svd.v.column(k).into_owned();
            vectors.push(StateVector::new(n_qubits, col)?);
        } else {
            first_nonzero = Some(first_nonzero.map_or(rel, |z: f64| z.min(rel)));
        }
    }
    Ok(NullSpace {
        basis: SubspaceBasis::from_orthonormal(cols, vectors),
        singular_values: sv,
        last_zero,
        first_nonzero,
    })
}

/// Full singular value decomposition `m = u diag(s) v^dagger`.
pub struct Svd {
    /// Left singular vectors, `r x r`, when requested.
    pub u: Option<DMatrix<Complex64>>,
    /// Descending, length `min(r, c)`.
    pub singular_values: Vec<f64>,
    /// Right singular vectors, `c x c`.
    pub v: DMatrix<Complex64>,
}

/// Full SVD through LAPACK. The pure-Rust decompositions tried here lose
/// accuracy on the exactly degenerate matrices this crate produces.
pub fn svd(m: &DMatrix<Complex64>, want_u: bool) -> Result<Svd> {
    use ndarray_linalg::SVD;
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Ok(Svd {
            u: want_u.then(|| DMatrix::identity(r, r)),
            singular_values: Vec::new(),
            v: DMatrix::identity(c, c),
        });
    }
    let a = ndarray::Array2::from_shape_fn((r, c), |(i, j)| m[(i, j)]);
    let (u, s, vt) = a.svd(want_u, true).map_err(|e| Error::Inconsistent(format!("SVD failed: {e}")))?;
    let vt = vt.expect("requested V");
    Ok(Svd {
        u: u.map(|u| DMatrix::from_fn(r, r, |i, j| u[(i, j)])),
        singular_values: s.to_vec(),
        v: DMatrix::from_fn(c, c, |i, j| vt[(j, i)].conj()),
    })
}

/// `|<u|v>|`, clamped to `[0, 1]`.
pub fn fidelity(u: &StateVector, v: &StateVector) -> Result<f64> {
    Ok(u.inner(v)?.norm().min(1.0))
}

/// Operator-norm distance `||P_a - P_b||` between the orthogonal projectors
/// onto two subspaces.
///
/// Subspaces of different dimension are at distance 1. For equal dimensions
/// the distance is the sine of the largest principal angle, computed as the
/// largest singular value of `(I - P_a) Q_b` to stay accurate near zero.
pub fn subspace_distance(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!("subspaces of ambient dims {} and {}", a.dim(), b.dim())));
    }
    if a.len() != b.len() {
        return Ok(1.0);
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let qa = a.as_columns();
    let qb = b.as_columns();
    let resid = &qb - &qa * (qa.adjoint() * &qb);
    let sv = svd(&resid, false)?.singular_values;
    Ok(sv.first().copied().unwrap_or(0.0).min(1.0))
}
