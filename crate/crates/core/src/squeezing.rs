//! Squeezing figures of merit.
//!
//! Bosonic: principal quadrature squeezing `ζ = min_θ (ΔX_θ)²` and the
//! sufficient-condition quantity `ζ̃`. Atomic: Kitagawa-Ueda `ξ` (twice the
//! minimal spin variance perpendicular to the mean spin, over `j`), its
//! closed form for states with `<S_+> = 0`, the Wineland parameter `ξ'`, and
//! the frame transforms that move `<a>` to zero or the mean spin onto `-z`.
//!
//! Moments are read off reduced density matrices, so the same code serves
//! single-mode states and the field or atom factor of a composite state.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::golden_section;
use crate::qalgebra::{Basis, Keep, OperatorMatrix, PartialTrace, Spin, StateVector, C64};
use crate::qstates::{annihilation_matrix, displacement, lowering_element, rotation};

/// Mean spin lengths at or below this are treated as having no direction.
pub const MEAN_SPIN_FLOOR: f64 = 1e-8;

/// `|<S_+>|` above this rules out the axial shortcut.
pub const AXIAL_TOL: f64 = 1e-10;

/// Largest population allowed in the top Fock level.
pub const FOCK_EDGE_LIMIT: f64 = 1e-10;

/// Size of the coarse θ grid used by [`min_variance_grid`].
pub const THETA_GRID_POINTS: usize = 720;

/// Density-matrix elements `ρ_{nm}` of one factor, as a closure so pure
/// states need not materialise `|ψ><ψ|`.
enum Reduced<'a> {
    Pure(&'a DVector<C64>),
    Mixed(OperatorMatrix),
}

impl Reduced<'_> {
    fn elem(&self, n: usize, m: usize) -> C64 {
        match self {
            Reduced::Pure(v) => v[n] * v[m].conj(),
            Reduced::Mixed(rho) => rho.entries()[(n, m)],
        }
    }

    fn pop(&self, n: usize) -> f64 {
        self.elem(n, n).re
    }
}

fn field_factor(state: &StateVector) -> Result<(usize, Reduced<'_>)> {
    match state.basis() {
        Basis::Fock { n_max } => Ok((*n_max, Reduced::Pure(state.amps()))),
        Basis::Tensor(_, r) => match **r {
            Basis::Fock { n_max } => Ok((n_max, Reduced::Mixed(state.partial_trace(Keep::Right)?))),
            _ => Err(mismatch("Fock or X⊗Fock", state.basis())),
        },
        other => Err(mismatch("Fock or X⊗Fock", other)),
    }
}

fn spin_factor(state: &StateVector) -> Result<(Spin, Reduced<'_>)> {
    match state.basis() {
        Basis::Dicke { spin } => Ok((*spin, Reduced::Pure(state.amps()))),
        Basis::Tensor(l, _) => match **l {
            Basis::Dicke { spin } => Ok((spin, Reduced::Mixed(state.partial_trace(Keep::Left)?))),
            _ => Err(mismatch("Dicke or Dicke⊗X", state.basis())),
        },
        other => Err(mismatch("Dicke or Dicke⊗X", other)),
    }
}

fn mismatch(expected: &str, found: &Basis) -> Error {
    Error::BasisMismatch { expected: expected.to_string(), found: found.to_string() }
}

/// First and second moments of a single boson mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BosonMoments {
    pub mean_a: C64,
    pub mean_n: f64,
    pub mean_a2: C64,
    /// Population of the highest retained Fock level.
    pub edge_population: f64,
}

impl BosonMoments {
    /// Moments of a Fock-basis state, or of the right (field) factor of a
    /// composite state.
    pub fn from_state(state: &StateVector) -> Result<Self> {
        let (n_max, rho) = field_factor(state)?;
        Ok(Self::from_reduced(n_max, &rho))
    }

    pub fn from_density(rho: &OperatorMatrix) -> Result<Self> {
        match rho.basis() {
            Basis::Fock { n_max } => Ok(Self::from_reduced(*n_max, &Reduced::Mixed(rho.clone()))),
            other => Err(mismatch("Fock", other)),
        }
    }

    fn from_reduced(n_max: usize, rho: &Reduced<'_>) -> Self {
        let mut mean_a = C64::from(0.0);
        let mut mean_a2 = C64::from(0.0);
        let mut mean_n = 0.0;
        for n in 0..=n_max {
            let nf = n as f64;
            mean_n += nf * rho.pop(n);
            if n >= 1 {
                mean_a += rho.elem(n, n - 1) * nf.sqrt();
            }
            if n >= 2 {
                mean_a2 += rho.elem(n, n - 2) * (nf * (nf - 1.0)).sqrt();
            }
        }
        BosonMoments { mean_a, mean_n, mean_a2, edge_population: rho.pop(n_max) }
    }

    /// `<a†a> - |<a>|²`.
    pub fn centered_number(&self) -> f64 {
        self.mean_n - self.mean_a.norm_sqr()
    }

    /// `<a²> - <a>²`.
    pub fn centered_a2(&self) -> C64 {
        self.mean_a2 - self.mean_a * self.mean_a
    }
}

/// Principal squeezing `ζ` with the minimising quadrature angle in `[0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrincipalSqueezing {
    pub zeta: f64,
    pub theta_star: f64,
}

/// `ζ = 1 + 2(<a†a> - |<a>|²) - 2|<a²> - <a>²|`, minimised at
/// `θ* = (π + arg(<a²> - <a>²)) / 2 mod π`.
pub fn principal_squeezing_from_moments(m: &BosonMoments) -> PrincipalSqueezing {
    let c = m.centered_a2();
    let zeta = 1.0 + 2.0 * m.centered_number() - 2.0 * c.norm();
    // With <a²> - <a>² = 0 every angle ties; report the smallest.
    let theta_star = if c.norm() <= 1e-14 { 0.0 } else { (0.5 * (PI + c.arg())).rem_euclid(PI) };
    PrincipalSqueezing { zeta, theta_star }
}

pub fn principal_squeezing(state: &StateVector) -> Result<PrincipalSqueezing> {
    let m = BosonMoments::from_state(state)?;
    if m.edge_population > FOCK_EDGE_LIMIT {
        return Err(Error::TruncationTooSmall { tail: m.edge_population, limit: FOCK_EDGE_LIMIT });
    }
    Ok(principal_squeezing_from_moments(&m))
}

/// `ζ̃ = <a†a> - |<a²>|`, taken about the mean field so that `ζ = 1 + 2ζ̃`.
pub fn zeta_tilde(m: &BosonMoments) -> f64 {
    m.centered_number() - m.centered_a2().norm()
}

/// `(ΔX_θ)²` by direct action of the quadrature matrix.
///
/// The state is padded by one Fock level so that `X_θ|ψ>` is exact.
pub fn variance_xtheta(state: &StateVector, theta: f64) -> Result<f64> {
    let n_max = match state.basis() {
        Basis::Fock { n_max } => *n_max,
        other => return Err(mismatch("Fock", other)),
    };
    let dim = n_max + 2;
    let psi = DVector::from_fn(dim, |n, _| if n <= n_max { state.amps()[n] } else { C64::from(0.0) });
    let a = annihilation_matrix(n_max + 1);
    let ph = C64::from_polar(1.0, theta);
    let x = &a * ph.conj() + a.adjoint() * ph;
    let v = &x * &psi;
    let mean = psi.dotc(&v).re;
    Ok(v.norm_squared() - mean * mean)
}

/// Minimum of [`variance_xtheta`] over a 720-point grid on `[0, π)`, refined
/// by golden-section search. Returns `(θ, variance)`.
pub fn min_variance_grid(state: &StateVector) -> Result<(f64, f64)> {
    let step = PI / THETA_GRID_POINTS as f64;
    let mut best = (0.0, f64::INFINITY);
    for k in 0..THETA_GRID_POINTS {
        let th = k as f64 * step;
        let v = variance_xtheta(state, th)?;
        if v < best.1 {
            best = (th, v);
        }
    }
    let (lo, hi) = (best.0 - step, best.0 + step);
    let (th, v) = golden_section(|t| variance_xtheta(state, t).unwrap_or(f64::INFINITY), lo, hi, 1e-9);
    Ok(if v < best.1 { (th.rem_euclid(PI), v) } else { best })
}

/// Mean spin and symmetrised second moments of a collective spin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinMoments {
    pub spin: Spin,
    /// `<S_x>, <S_y>, <S_z>`.
    pub mean: [f64; 3],
    /// `<(S_a S_b + S_b S_a)/2>`.
    pub second: [[f64; 3]; 3],
    pub mean_n: f64,
    pub mean_n2: f64,
    pub mean_s_minus: C64,
    pub mean_s_minus2: C64,
}

impl SpinMoments {
    /// Moments of a Dicke-basis state, or of the left (atomic) factor of a
    /// composite state.
    pub fn from_state(state: &StateVector) -> Result<Self> {
        let (spin, rho) = spin_factor(state)?;
        Ok(Self::from_reduced(spin, &rho))
    }

    pub fn from_density(rho: &OperatorMatrix) -> Result<Self> {
        match rho.basis() {
            Basis::Dicke { spin } => Ok(Self::from_reduced(*spin, &Reduced::Mixed(rho.clone()))),
            other => Err(mismatch("Dicke", other)),
        }
    }

    fn from_reduced(spin: Spin, rho: &Reduced<'_>) -> Self {
        let j = spin.value();
        let dim = spin.dim();
        let s = |n: usize| lowering_element(spin, n);
        let mut mean_n = 0.0;
        let mut mean_n2 = 0.0;
        let mut sz2 = 0.0;
        // <S_+S_- + S_-S_+>
        let mut pm_sym = 0.0;
        let mut sm = C64::from(0.0);
        let mut sm2 = C64::from(0.0);
        // <S_- S_z + S_z S_->
        let mut sm_sz = C64::from(0.0);
        for n in 0..dim {
            let p = rho.pop(n);
            let nf = n as f64;
            mean_n += nf * p;
            mean_n2 += nf * nf * p;
            sz2 += (nf - j) * (nf - j) * p;
            let up = if n + 1 < dim { s(n + 1) } else { 0.0 };
            pm_sym += (s(n) * s(n) + up * up) * p;
            if n >= 1 {
                let r = rho.elem(n, n - 1);
                sm += r * s(n);
                sm_sz += r * ((2.0 * nf - 1.0 - 2.0 * j) * s(n));
            }
            if n >= 2 {
                sm2 += rho.elem(n, n - 2) * (s(n) * s(n - 1));
            }
        }
        let sx2 = 0.25 * (pm_sym + 2.0 * sm2.re);
        let sy2 = 0.25 * (pm_sym - 2.0 * sm2.re);
        let sxy = -0.5 * sm2.im;
        let sxz = 0.5 * sm_sz.re;
        let syz = -0.5 * sm_sz.im;
        SpinMoments {
            spin,
            mean: [sm.re, -sm.im, mean_n - j],
            second: [[sx2, sxy, sxz], [sxy, sy2, syz], [sxz, syz, sz2]],
            mean_n,
            mean_n2,
            mean_s_minus: sm,
            mean_s_minus2: sm2,
        }
    }

    pub fn mean_spin_length(&self) -> f64 {
        norm3(&self.mean)
    }

    /// Covariance `<ΔS_a ΔS_b>` (symmetrised).
    pub fn covariance(&self) -> [[f64; 3]; 3] {
        let mut c = self.second;
        for (a, row) in c.iter_mut().enumerate() {
            for (b, x) in row.iter_mut().enumerate() {
                *x -= self.mean[a] * self.mean[b];
            }
        }
        c
    }
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn quad(c: &[[f64; 3]; 3], u: &[f64; 3], v: &[f64; 3]) -> f64 {
    (0..3).map(|a| (0..3).map(|b| u[a] * c[a][b] * v[b]).sum::<f64>()).sum()
}

/// An orthonormal pair spanning the plane perpendicular to unit vector `n0`.
pub fn perpendicular_pair(n0: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let k = (0..3).min_by(|&a, &b| n0[a].abs().total_cmp(&n0[b].abs())).unwrap();
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let d = dot3(&e, n0);
    let mut n1 = [e[0] - d * n0[0], e[1] - d * n0[1], e[2] - d * n0[2]];
    let l = norm3(&n1);
    n1.iter_mut().for_each(|x| *x /= l);
    let n2 = cross3(n0, &n1);
    (n1, n2)
}

/// Kitagawa-Ueda squeezing and the axis that attains it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KitagawaUeda {
    pub xi: f64,
    pub n_perp_star: [f64; 3],
    pub mean_spin: [f64; 3],
}

/// `ξ = 2 λ_min / j` for the given perpendicular basis `{n1, n2}`.
pub fn kitagawa_in_plane(m: &SpinMoments, n1: &[f64; 3], n2: &[f64; 3]) -> KitagawaUeda {
    let cov = m.covariance();
    let (a, b, c) = (quad(&cov, n1, n1), quad(&cov, n2, n2), quad(&cov, n1, n2));
    let root = ((a - b) * (a - b) + 4.0 * c * c).sqrt();
    let lam = 0.5 * (a + b - root);
    // Eigenvector of [[a, c], [c, b]] for the smaller eigenvalue.
    let (u, v) = if c.abs() <= 1e-300 {
        if a <= b {
            (1.0, 0.0)
        } else {
            (0.0, 1.0)
        }
    } else {
        let p = (c, lam - a);
        let q = (lam - b, c);
        if p.0.hypot(p.1) >= q.0.hypot(q.1) {
            p
        } else {
            q
        }
    };
    let l = u.hypot(v);
    let (u, v) = (u / l, v / l);
    let n_perp_star = [u * n1[0] + v * n2[0], u * n1[1] + v * n2[1], u * n1[2] + v * n2[2]];
    KitagawaUeda { xi: 2.0 * lam / m.spin.value(), n_perp_star, mean_spin: m.mean }
}

pub fn kitagawa_from_moments(m: &SpinMoments) -> Result<KitagawaUeda> {
    let length = m.mean_spin_length();
    if length <= MEAN_SPIN_FLOOR {
        return Err(Error::DegenerateMeanSpin { length });
    }
    let n0 = [m.mean[0] / length, m.mean[1] / length, m.mean[2] / length];
    let (n1, n2) = perpendicular_pair(&n0);
    Ok(kitagawa_in_plane(m, &n1, &n2))
}

pub fn spin_squeezing_kitagawa(state: &StateVector) -> Result<KitagawaUeda> {
    kitagawa_from_moments(&SpinMoments::from_state(state)?)
}

/// `ξ` and `ξ̃` from the closed form valid when `<S_+> = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxialSpinSqueezing {
    pub xi: f64,
    pub xi_tilde: f64,
}

pub fn evenodd_from_moments(m: &SpinMoments) -> Result<AxialSpinSqueezing> {
    let abs_s_plus = m.mean_s_minus.norm();
    if abs_s_plus > AXIAL_TOL {
        return Err(Error::MeanSpinNotAxial { abs_s_plus });
    }
    let j = m.spin.value();
    let s2 = m.mean_s_minus2.norm();
    Ok(AxialSpinSqueezing {
        xi: 1.0 + 2.0 * m.mean_n - m.mean_n2 / j - s2 / j,
        xi_tilde: 2.0 * j * m.mean_n - m.mean_n2 - s2,
    })
}

pub fn spin_squeezing_evenodd(state: &StateVector) -> Result<AxialSpinSqueezing> {
    evenodd_from_moments(&SpinMoments::from_state(state)?)
}

/// `ξ' = ξ / |<S>/j|²`.
pub fn wineland_from_moments(m: &SpinMoments, xi: f64) -> Result<f64> {
    let length = m.mean_spin_length();
    if length <= MEAN_SPIN_FLOOR {
        return Err(Error::DegenerateMeanSpin { length });
    }
    let r = length / m.spin.value();
    Ok(xi / (r * r))
}

pub fn spin_squeezing_wineland(state: &StateVector) -> Result<f64> {
    let m = SpinMoments::from_state(state)?;
    let ku = kitagawa_from_moments(&m)?;
    wineland_from_moments(&m, ku.xi)
}

/// `D(-<a>)|Ψ>`: the same state with zero mean field.
pub fn normalize_frame_boson(state: &StateVector) -> Result<StateVector> {
    let n_max = match state.basis() {
        Basis::Fock { n_max } => *n_max,
        other => return Err(mismatch("Fock", other)),
    };
    let m = BosonMoments::from_state(state)?;
    displacement(-m.mean_a, n_max).apply(state)
}

/// Polar and azimuthal angles of the mean spin and the rotation
/// `R(π - θ, φ)` that carries it onto `-z`.
pub fn mean_spin_frame(m: &SpinMoments) -> Result<(f64, f64)> {
    let length = m.mean_spin_length();
    if length <= MEAN_SPIN_FLOOR {
        return Err(Error::DegenerateMeanSpin { length });
    }
    let theta = (m.mean[2] / length).clamp(-1.0, 1.0).acos();
    let phi = m.mean[1].atan2(m.mean[0]);
    Ok((theta, phi))
}

/// Rotates a Dicke-basis state so that its mean spin points along `-z`.
pub fn normalize_frame_spin(state: &StateVector) -> Result<StateVector> {
    let spin = match state.basis() {
        Basis::Dicke { spin } => *spin,
        other => return Err(mismatch("Dicke", other)),
    };
    let m = SpinMoments::from_state(state)?;
    let (theta, phi) = mean_spin_frame(&m)?;
    rotation(PI - theta, phi, spin).apply(state)
}

/// All squeezing quantities that apply to a state. Bosonic fields are set for
/// Fock states and for the field factor of an atom⊗field state; spin fields
/// for Dicke states and the atomic factor.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SqueezingReport {
    pub zeta: Option<f64>,
    /// Radians in `[0, π)`.
    pub theta_star: Option<f64>,
    pub zeta_tilde: Option<f64>,
    pub xi: Option<f64>,
    /// `None` when the mean spin has no direction.
    pub xi_prime: Option<f64>,
    pub xi_tilde: Option<f64>,
    pub mean_spin: Option<[f64; 3]>,
    pub n_perp_star: Option<[f64; 3]>,
}

impl SqueezingReport {
    pub fn for_state(state: &StateVector) -> Result<Self> {
        let (boson, spin) = match state.basis() {
            Basis::Fock { .. } => (true, false),
            Basis::Dicke { .. } => (false, true),
            Basis::Tensor(l, r) => (matches!(**r, Basis::Fock { .. }), matches!(**l, Basis::Dicke { .. })),
        };
        if !boson && !spin {
            return Err(mismatch("Fock, Dicke or Dicke⊗Fock", state.basis()));
        }
        let mut report = SqueezingReport::default();
        if boson {
            let m = BosonMoments::from_state(state)?;
            if m.edge_population > FOCK_EDGE_LIMIT {
                return Err(Error::TruncationTooSmall { tail: m.edge_population, limit: FOCK_EDGE_LIMIT });
            }
            let p = principal_squeezing_from_moments(&m);
            report.zeta = Some(p.zeta);
            report.theta_star = Some(p.theta_star);
            report.zeta_tilde = Some(zeta_tilde(&m));
        }
        if spin {
            let m = SpinMoments::from_state(state)?;
            report.mean_spin = Some(m.mean);
            let axial = evenodd_from_moments(&m).ok();
            match kitagawa_from_moments(&m) {
                Ok(ku) => {
                    report.xi = Some(ku.xi);
                    report.n_perp_star = Some(ku.n_perp_star);
                    report.xi_prime = wineland_from_moments(&m, ku.xi).ok();
                    report.xi_tilde = Some(axial.map_or(m.spin.value() * (ku.xi - 1.0), |a| a.xi_tilde));
                }
                Err(Error::DegenerateMeanSpin { .. }) => {
                    if let Some(a) = axial {
                        report.xi = Some(a.xi);
                        report.xi_tilde = Some(a.xi_tilde);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Ok(report)
    }
}
