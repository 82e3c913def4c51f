//! Dense complex linear algebra over declared Hilbert-space bases.
//!
//! Index conventions: in a Fock or Dicke basis the index is the excitation
//! number (`|n>_j = |j, -j + n>`). In a tensor basis the left factor is the
//! slow (outer) index, so joint index `i * right.dim() + k` addresses
//! `|i> ⊗ |k>`.

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for construction-time checks (normalisation, Hermiticity).
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Spin quantum number `j`, stored as the non-negative integer `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Spin(u32);

impl Spin {
    pub const fn from_two_j(two_j: u32) -> Self {
        Spin(two_j)
    }

    /// Collective spin of `n` two-level atoms in the symmetric subspace, `j = n/2`.
    pub const fn from_atoms(n: u32) -> Self {
        Spin(n)
    }

    pub fn try_from_f64(j: f64) -> Result<Self> {
        let two_j = 2.0 * j;
        if !j.is_finite() || j < 0.0 || (two_j - two_j.round()).abs() > 1e-9 || two_j > u32::MAX as f64 {
            return Err(Error::InvalidSpin(j));
        }
        Ok(Spin(two_j.round() as u32))
    }

    pub const fn two_j(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn dim(self) -> usize {
        self.0 as usize + 1
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl std::str::FromStr for Spin {
    type Err = Error;

    /// Accepts `3/2`, `1.5` or `2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse spin '{s}'"));
        match s.split_once('/') {
            Some((num, "2")) => num.trim().parse::<u32>().map(Spin).map_err(|_| bad()),
            Some((num, "1")) => num.trim().parse::<u32>().map(|n| Spin(2 * n)).map_err(|_| bad()),
            Some(_) => Err(bad()),
            None => Spin::try_from_f64(s.parse::<f64>().map_err(|_| bad())?),
        }
    }
}

/// A declared Hilbert-space basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Photon numbers `0..=n_max`.
    Fock { n_max: usize },
    /// Dicke states `|n>_j`, `n = 0..=2j`.
    Dicke { spin: Spin },
    Tensor(Box<Basis>, Box<Basis>),
}

impl Basis {
    pub fn fock(n_max: usize) -> Self {
        Basis::Fock { n_max }
    }

    pub fn dicke(spin: Spin) -> Self {
        Basis::Dicke { spin }
    }

    pub fn tensor(left: Basis, right: Basis) -> Self {
        Basis::Tensor(Box::new(left), Box::new(right))
    }

    pub fn dim(&self) -> usize {
        match self {
            Basis::Fock { n_max } => n_max + 1,
            Basis::Dicke { spin } => spin.dim(),
            Basis::Tensor(l, r) => l.dim() * r.dim(),
        }
    }

    /// The two factors of a tensor basis.
    pub fn factors(&self) -> Result<(&Basis, &Basis)> {
        match self {
            Basis::Tensor(l, r) => Ok((l, r)),
            other => Err(Error::NotTensorBasis(other.to_string())),
        }
    }

    pub(crate) fn ensure_eq(&self, other: &Basis) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::BasisMismatch { expected: self.to_string(), found: other.to_string() })
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Fock { n_max } => write!(f, "Fock(n_max={n_max})"),
            Basis::Dicke { spin } => write!(f, "Dicke(j={spin})"),
            Basis::Tensor(l, r) => write!(f, "{l}⊗{r}"),
        }
    }
}

/// A pure state: complex amplitudes over a declared basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: Basis,
    amps: DVector<C64>,
}

fn check_len(basis: &Basis, len: usize) -> Result<()> {
    if basis.dim() != len {
        return Err(Error::InvalidArgument(format!(
            "amplitude vector has length {len}, basis {basis} has dimension {}",
            basis.dim()
        )));
    }
    Ok(())
}

impl StateVector {
    /// Wraps amplitudes that must already be normalised to within 1e-12.
    pub fn new(basis: Basis, amps: DVector<C64>) -> Result<Self> {
        check_len(&basis, amps.len())?;
        let norm = amps.norm();
        if (norm - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector { basis, amps })
    }

    /// Normalises the given amplitudes.
    pub fn normalized(basis: Basis, amps: DVector<C64>) -> Result<Self> {
        check_len(&basis, amps.len())?;
        let norm = amps.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector { basis, amps: amps / C64::from(norm) })
    }

    pub fn from_vec(basis: Basis, amps: Vec<C64>) -> Result<Self> {
        Self::normalized(basis, DVector::from_vec(amps))
    }

    /// The basis vector with a single unit amplitude at `index`.
    pub fn basis_state(basis: Basis, index: usize) -> Result<Self> {
        let dim = basis.dim();
        if index >= dim {
            return Err(Error::InvalidArgument(format!("index {index} out of range for {basis}")));
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        Ok(StateVector { basis, amps })
    }

    /// No normalisation check; for results of unitary maps whose norm is
    /// monitored by the caller.
    pub(crate) fn from_raw(basis: Basis, amps: DVector<C64>) -> Self {
        debug_assert_eq!(basis.dim(), amps.len());
        StateVector { basis, amps }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn amps(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn into_amps(self) -> DVector<C64> {
        self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.basis.ensure_eq(&other.basis)?;
        Ok(self.amps.dotc(&other.amps))
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Density matrix `|ψ><ψ|`.
    pub fn density(&self) -> OperatorMatrix {
        let rho = &self.amps * self.amps.adjoint();
        OperatorMatrix { basis: self.basis.clone(), entries: rho, hermitian: true }
    }
}

/// A complex matrix over a declared basis with a Hermitian flag.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    basis: Basis,
    entries: DMatrix<C64>,
    hermitian: bool,
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut d = 0.0_f64;
    for i in 0..n {
        for k in i..n {
            d = d.max((m[(i, k)] - m[(k, i)].conj()).norm());
        }
    }
    d
}

impl OperatorMatrix {
    pub fn new(basis: Basis, entries: DMatrix<C64>) -> Result<Self> {
        let dim = basis.dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::InvalidArgument(format!(
                "matrix is {}x{}, basis {basis} has dimension {dim}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(OperatorMatrix { basis, entries, hermitian: false })
    }

    /// Builds an operator flagged Hermitian; fails if `max|A - A†| > 1e-12`.
    pub fn new_hermitian(basis: Basis, entries: DMatrix<C64>) -> Result<Self> {
        Self::new(basis, entries)?.into_hermitian()
    }

    pub(crate) fn from_raw(basis: Basis, entries: DMatrix<C64>, hermitian: bool) -> Self {
        debug_assert_eq!(basis.dim(), entries.nrows());
        OperatorMatrix { basis, entries, hermitian }
    }

    pub fn identity(basis: Basis) -> Self {
        let dim = basis.dim();
        OperatorMatrix { basis, entries: DMatrix::identity(dim, dim), hermitian: true }
    }

    pub fn diagonal(basis: Basis, diag: &[f64]) -> Result<Self> {
        check_len(&basis, diag.len())?;
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::from(x)));
        Ok(OperatorMatrix { basis, entries: DMatrix::from_diagonal(&d), hermitian: true })
    }

    /// Sets the Hermitian flag after checking the entries.
    pub fn into_hermitian(mut self) -> Result<Self> {
        let defect = hermiticity_defect(&self.entries);
        if defect > CONSTRUCTION_TOL * max_abs(&self.entries).max(1.0) {
            return Err(Error::NotHermitian { defect });
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `max |A - A†|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.entries)
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.entries)
    }

    pub fn dagger(&self) -> Self {
        OperatorMatrix { basis: self.basis.clone(), entries: self.entries.adjoint(), hermitian: self.hermitian }
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn scale(&self, c: C64) -> Self {
        OperatorMatrix {
            basis: self.basis.clone(),
            entries: &self.entries * c,
            hermitian: self.hermitian && c.im == 0.0,
        }
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<Self> {
        self.basis.ensure_eq(&other.basis)?;
        Ok(OperatorMatrix {
            basis: self.basis.clone(),
            entries: &self.entries + &other.entries,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<Self> {
        self.basis.ensure_eq(&other.basis)?;
        Ok(OperatorMatrix {
            basis: self.basis.clone(),
            entries: &self.entries - &other.entries,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> Result<Self> {
        self.basis.ensure_eq(&other.basis)?;
        Ok(OperatorMatrix { basis: self.basis.clone(), entries: &self.entries * &other.entries, hermitian: false })
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &OperatorMatrix) -> Result<Self> {
        self.basis.ensure_eq(&other.basis)?;
        Ok(OperatorMatrix {
            basis: self.basis.clone(),
            entries: &self.entries * &other.entries - &other.entries * &self.entries,
            hermitian: false,
        })
    }

    /// `A|ψ>` without renormalisation.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        self.basis.ensure_eq(&psi.basis)?;
        Ok(StateVector::from_raw(self.basis.clone(), &self.entries * &psi.amps))
    }

    /// `max |A - B|` entrywise.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> Result<f64> {
        self.basis.ensure_eq(&other.basis)?;
        Ok(max_abs(&(&self.entries - &other.entries)))
    }
}

/// Spectral decomposition `A = V diag(λ) V†` of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub basis: Basis,
    /// Ascending.
    pub eigenvalues: DVector<f64>,
    /// Columns are the eigenvectors.
    pub eigenvectors: DMatrix<C64>,
}

/// Eigendecomposition of a raw Hermitian matrix, eigenvalues ascending.
pub(crate) fn eigh_matrix(m: &DMatrix<C64>) -> (DVector<f64>, DMatrix<C64>) {
    let sym = (m + m.adjoint()) * C64::from(0.5);
    let eig = SymmetricEigen::new(sym);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `e^{-iλt}` phases applied in the eigenbasis: `V diag(e^{-iλt}) V† ψ`,
/// where `coeffs = V† ψ` has been precomputed.
pub(crate) fn evolve_coeffs(values: &DVector<f64>, vectors: &DMatrix<C64>, coeffs: &DVector<C64>, t: f64) -> DVector<C64> {
    let phased = DVector::from_iterator(
        coeffs.len(),
        values.iter().zip(coeffs.iter()).map(|(&lam, &c)| c * C64::from_polar(1.0, -lam * t)),
    );
    vectors * phased
}

pub fn eigh(op: &OperatorMatrix) -> Result<EigenSystem> {
    let defect = op.hermiticity_defect();
    if !op.hermitian || defect > CONSTRUCTION_TOL * op.max_abs().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    let (eigenvalues, eigenvectors) = eigh_matrix(&op.entries);
    Ok(EigenSystem { basis: op.basis.clone(), eigenvalues, eigenvectors })
}

impl EigenSystem {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let d = DVector::from_iterator(self.eigenvalues.len(), self.eigenvalues.iter().map(|&x| C64::from(x)));
        &self.eigenvectors * DMatrix::from_diagonal(&d) * self.eigenvectors.adjoint()
    }

    /// `U(t) = V diag(e^{-iλt}) V†`.
    pub fn propagator(&self, t: f64) -> OperatorMatrix {
        let phases =
            DVector::from_iterator(self.eigenvalues.len(), self.eigenvalues.iter().map(|&x| C64::from_polar(1.0, -x * t)));
        let u = &self.eigenvectors * DMatrix::from_diagonal(&phases) * self.eigenvectors.adjoint();
        OperatorMatrix::from_raw(self.basis.clone(), u, false)
    }

    /// `U(t)|ψ>` without forming `U`.
    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        self.basis.ensure_eq(&psi.basis)?;
        let coeffs = self.eigenvectors.adjoint() * &psi.amps;
        Ok(StateVector::from_raw(self.basis.clone(), evolve_coeffs(&self.eigenvalues, &self.eigenvectors, &coeffs, t)))
    }
}

/// `e^{-iAt}` for Hermitian `A`.
pub fn propagator(op: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    Ok(eigh(op)?.propagator(t))
}

/// `e^{G}` for anti-Hermitian `G`, through the Hermitian matrix `iG`.
pub fn expm_antihermitian(generator: &OperatorMatrix) -> Result<OperatorMatrix> {
    let h = OperatorMatrix::new(generator.basis.clone(), &generator.entries * C64::i())?.into_hermitian()?;
    propagator(&h, 1.0)
}

/// Kronecker product with the left operand as the slow index.
pub trait Kron: Sized {
    fn kron(&self, other: &Self) -> Self;
}

impl Kron for StateVector {
    fn kron(&self, other: &Self) -> Self {
        StateVector {
            basis: Basis::tensor(self.basis.clone(), other.basis.clone()),
            amps: self.amps.kronecker(&other.amps),
        }
    }
}

impl Kron for OperatorMatrix {
    fn kron(&self, other: &Self) -> Self {
        OperatorMatrix {
            basis: Basis::tensor(self.basis.clone(), other.basis.clone()),
            entries: self.entries.kronecker(&other.entries),
            hermitian: self.hermitian && other.hermitian,
        }
    }
}

pub fn tensor<T: Kron>(a: &T, b: &T) -> T {
    a.kron(b)
}

/// Which tensor factor survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    Left,
    Right,
}

pub trait PartialTrace {
    /// Reduced density matrix on the kept factor.
    fn partial_trace(&self, keep: Keep) -> Result<OperatorMatrix>;
}

fn hermitize(m: DMatrix<C64>) -> DMatrix<C64> {
    (&m + m.adjoint()) * C64::from(0.5)
}

impl PartialTrace for StateVector {
    fn partial_trace(&self, keep: Keep) -> Result<OperatorMatrix> {
        let (left, right) = self.basis.factors()?;
        let (dl, dr) = (left.dim(), right.dim());
        // Row i of `m` holds the amplitudes <i, k|ψ> for fixed left index i.
        let m = DMatrix::from_fn(dl, dr, |i, k| self.amps[i * dr + k]);
        let (basis, rho) = match keep {
            Keep::Left => (left.clone(), &m * m.adjoint()),
            Keep::Right => (right.clone(), m.transpose() * m.map(|z| z.conj())),
        };
        Ok(OperatorMatrix::from_raw(basis, hermitize(rho), true))
    }
}

impl PartialTrace for OperatorMatrix {
    fn partial_trace(&self, keep: Keep) -> Result<OperatorMatrix> {
        let (left, right) = self.basis.factors()?;
        let (dl, dr) = (left.dim(), right.dim());
        let e = &self.entries;
        let (basis, rho) = match keep {
            Keep::Left => (
                left.clone(),
                DMatrix::from_fn(dl, dl, |i, j| (0..dr).map(|k| e[(i * dr + k, j * dr + k)]).sum::<C64>()),
            ),
            Keep::Right => (
                right.clone(),
                DMatrix::from_fn(dr, dr, |k, l| (0..dl).map(|i| e[(i * dr + k, i * dr + l)]).sum::<C64>()),
            ),
        };
        Ok(OperatorMatrix::from_raw(basis, hermitize(rho), true))
    }
}

pub fn partial_trace<T: PartialTrace>(x: &T, keep: Keep) -> Result<OperatorMatrix> {
    x.partial_trace(keep)
}

/// `<ψ|A|ψ>`.
pub fn expval(state: &StateVector, op: &OperatorMatrix) -> Result<C64> {
    op.basis.ensure_eq(&state.basis)?;
    Ok(state.amps.dotc(&(&op.entries * &state.amps)))
}

/// `tr(ρ A)`.
pub fn expval_density(rho: &OperatorMatrix, op: &OperatorMatrix) -> Result<C64> {
    op.basis.ensure_eq(&rho.basis)?;
    let (r, a) = (&rho.entries, &op.entries);
    let n = r.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += r[(i, k)] * a[(k, i)];
        }
    }
    Ok(acc)
}
