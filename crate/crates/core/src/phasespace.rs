//! Husimi-type phase-space grids: `Q(α) = <α|ρ_field|α>` for the field and
//! `Q(η) = <η|ρ_atoms|η>` for the atoms, both from reduced density matrices
//! of an atom⊗field state. Stored values are raw overlaps, without `1/π`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::linspace;
use crate::qalgebra::{Basis, Keep, OperatorMatrix, PartialTrace, Spin, StateVector, C64};
use crate::qstates::{coherent_amplitudes, scs_amplitudes};

/// Relative tolerance when comparing mapped axes.
pub const AXIS_TOL: f64 = 1e-9;

/// Atom-plane points with `|η| > 1 - ETA_EDGE_TOL` are left out, so grid
/// points that sit on the unit circle in exact arithmetic are dropped
/// whatever the rounding.
pub const ETA_EDGE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Plane {
    FieldAlpha,
    AtomEta,
}

impl std::fmt::Display for Plane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Plane::FieldAlpha => "field_alpha",
            Plane::AtomEta => "atom_eta",
        })
    }
}

/// Square grid `[lo, hi]²` with `points` samples per axis, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridSpec {
    pub const FIELD_DEFAULT: GridSpec = GridSpec { lo: -3.0, hi: 3.0, points: 121 };
    pub const ATOM_DEFAULT: GridSpec = GridSpec { lo: -1.0, hi: 1.0, points: 101 };

    /// The atom grid whose image under `η ↦ √(2j) η` is `field`.
    pub fn atoms_matching(field: &GridSpec, spin: Spin) -> GridSpec {
        let s = alpha_scale(spin);
        GridSpec { lo: field.lo / s, hi: field.hi / s, points: field.points }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi && self.points >= 2) {
            return Err(Error::InvalidArgument(format!("bad grid [{}, {}] x {}", self.lo, self.hi, self.points)));
        }
        Ok(())
    }

    pub fn axis(&self) -> Vec<f64> {
        linspace(self.lo, self.hi, self.points)
    }
}

/// `√(2j)`, the factor taking `η` to the equivalent boson amplitude.
pub fn alpha_scale(spin: Spin) -> f64 {
    (spin.two_j() as f64).sqrt()
}

/// Values are indexed `(im, re)`. Atom-plane points with `|η| ≥ 1` are NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGrid {
    pub plane: Plane,
    pub re_axis: Vec<f64>,
    pub im_axis: Vec<f64>,
    pub values: DMatrix<f64>,
    pub time_tau: f64,
    /// Factor mapping this plane's coordinates to boson amplitudes.
    pub alpha_scale: f64,
}

fn fill(re: &[f64], im: &[f64], f: impl Fn(C64) -> f64 + Sync) -> DMatrix<f64> {
    let rows: Vec<Vec<f64>> = im.par_iter().map(|&y| re.iter().map(|&x| f(C64::new(x, y))).collect()).collect();
    DMatrix::from_fn(im.len(), re.len(), |r, c| rows[r][c])
}

/// `v† ρ v`.
fn quadratic_form(rho: &DMatrix<C64>, v: &DVector<C64>) -> f64 {
    v.dotc(&(rho * v)).re
}

fn factor_density(state: &StateVector, keep: Keep) -> Result<(Basis, OperatorMatrix)> {
    match state.basis() {
        Basis::Tensor(l, r) => {
            let factor = match keep {
                Keep::Left => (**l).clone(),
                Keep::Right => (**r).clone(),
            };
            Ok((factor, state.partial_trace(keep)?))
        }
        single => Ok((single.clone(), state.density())),
    }
}

fn mismatch(expected: &str, found: &Basis) -> Error {
    Error::BasisMismatch { expected: expected.to_string(), found: found.to_string() }
}

/// `Q(α)` of the field: a Fock state, or the right factor of a composite.
pub fn field_q(state: &StateVector, grid: &GridSpec, time_tau: f64) -> Result<PhaseGrid> {
    grid.validate()?;
    let (factor, rho) = factor_density(state, Keep::Right)?;
    let Basis::Fock { n_max } = factor else {
        return Err(mismatch("Fock or X⊗Fock", state.basis()));
    };
    let rho = rho.entries();
    let axis = grid.axis();
    let values = fill(&axis, &axis, |alpha| {
        quadratic_form(rho, &DVector::from_vec(coherent_amplitudes(alpha, n_max)))
    });
    Ok(PhaseGrid { plane: Plane::FieldAlpha, re_axis: axis.clone(), im_axis: axis, values, time_tau, alpha_scale: 1.0 })
}

/// `Q(η)` of the atoms: a Dicke state, or the left factor of a composite.
pub fn atom_husimi(state: &StateVector, grid: &GridSpec, time_tau: f64) -> Result<PhaseGrid> {
    grid.validate()?;
    let (factor, rho) = factor_density(state, Keep::Left)?;
    let Basis::Dicke { spin } = factor else {
        return Err(mismatch("Dicke or Dicke⊗X", state.basis()));
    };
    let rho = rho.entries();
    let axis = grid.axis();
    let values = fill(&axis, &axis, |eta| {
        if eta.norm() > 1.0 - ETA_EDGE_TOL {
            f64::NAN
        } else {
            quadratic_form(rho, &DVector::from_vec(scs_amplitudes(eta, spin)))
        }
    });
    Ok(PhaseGrid {
        plane: Plane::AtomEta,
        re_axis: axis.clone(),
        im_axis: axis,
        values,
        time_tau,
        alpha_scale: alpha_scale(spin),
    })
}

impl PhaseGrid {
    /// `(1/π) Σ Q ΔRe ΔIm` over finite points.
    pub fn normalization(&self) -> f64 {
        let step = |a: &[f64]| (a[a.len() - 1] - a[0]) / (a.len() - 1) as f64;
        let da = step(&self.re_axis) * step(&self.im_axis);
        self.values.iter().filter(|v| v.is_finite()).sum::<f64>() * da / std::f64::consts::PI
    }

    /// Smallest finite value.
    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().filter(|v| v.is_finite()).fold(f64::INFINITY, f64::min)
    }

    fn symmetric_axes(&self) -> bool {
        let sym = |a: &[f64]| a.iter().zip(a.iter().rev()).all(|(x, y)| (x + y).abs() <= AXIS_TOL * x.abs().max(1.0));
        sym(&self.re_axis) && sym(&self.im_axis)
    }

    /// The grid of `Q(-x)`; needs axes symmetric about 0.
    pub fn reflected(&self) -> Result<PhaseGrid> {
        if !self.symmetric_axes() {
            return Err(Error::AxisMismatch("reflection needs axes symmetric about 0".into()));
        }
        let (r, c) = self.values.shape();
        let values = DMatrix::from_fn(r, c, |i, k| self.values[(r - 1 - i, c - 1 - k)]);
        Ok(PhaseGrid { values, ..self.clone() })
    }

    /// The grid of `Q(-i z)`: the state acted on by `exp(iπ/2 n)`, the local
    /// phase separating the beam-splitter at `τ = π/2` from an exact swap.
    /// Needs identical axes symmetric about 0.
    pub fn quarter_turned(&self) -> Result<PhaseGrid> {
        if !self.symmetric_axes() || !axes_match(&self.re_axis, 1.0, &self.im_axis, 1.0) {
            return Err(Error::AxisMismatch("quarter turn needs identical axes symmetric about 0".into()));
        }
        let n = self.values.nrows();
        // -i(x + iy) = y - ix
        let values = DMatrix::from_fn(n, n, |i, k| self.values[(n - 1 - k, i)]);
        Ok(PhaseGrid { values, ..self.clone() })
    }

    /// `max |Q(x) - Q(-x)|` over finite points.
    pub fn parity_asymmetry(&self) -> Result<f64> {
        let refl = self.reflected()?;
        Ok(self
            .values
            .iter()
            .zip(refl.values.iter())
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Rows of `tau,re,im,value` in row-major order, NaN points skipped.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.im_axis.iter().enumerate().flat_map(move |(i, &y)| {
            self.re_axis.iter().enumerate().filter_map(move |(k, &x)| {
                let v = self.values[(i, k)];
                v.is_finite().then_some((x, y, v))
            })
        })
    }
}

fn axes_match(a: &[f64], sa: f64, b: &[f64], sb: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x * sa - y * sb).abs() <= AXIS_TOL * (x * sa).abs().max(1.0))
}

/// Zero-mean normalised cross-correlation of two grids after mapping both
/// planes to boson amplitudes, clamped to `[0, 1]`. Points that are NaN in
/// either grid are ignored.
pub fn grid_similarity(a: &PhaseGrid, b: &PhaseGrid) -> Result<f64> {
    if !axes_match(&a.re_axis, a.alpha_scale, &b.re_axis, b.alpha_scale)
        || !axes_match(&a.im_axis, a.alpha_scale, &b.im_axis, b.alpha_scale)
    {
        return Err(Error::AxisMismatch(format!(
            "{} grid (scale {}) and {} grid (scale {}) do not share mapped axes",
            a.plane, a.alpha_scale, b.plane, b.alpha_scale
        )));
    }
    let pairs: Vec<(f64, f64)> =
        a.values.iter().zip(b.values.iter()).filter(|(x, y)| x.is_finite() && y.is_finite()).map(|(x, y)| (*x, *y)).collect();
    if pairs.is_empty() {
        return Err(Error::AxisMismatch("grids share no finite points".into()));
    }
    let n = pairs.len() as f64;
    let ma = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let mb = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in &pairs {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Ok(if saa == sbb { 1.0 } else { 0.0 });
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::Kron;
    use crate::qstates::{cat_state, coherent_state, dicke_state, spin_coherent_state, CatParity, SpinCoherentParam};

    fn product(atoms: &StateVector, field: &StateVector) -> StateVector {
        atoms.kron(field)
    }

    #[test]
    fn coherent_field_q_is_gaussian() {
        let a0 = C64::new(0.6, -0.3);
        let psi = product(&dicke_state(Spin::from_atoms(3), 1).unwrap(), &coherent_state(a0, 30).unwrap());
        let spec = GridSpec { lo: -2.0, hi: 2.0, points: 41 };
        let q = field_q(&psi, &spec, 0.0).unwrap();
        for (x, y, v) in q.points() {
            let expect = (-(C64::new(x, y) - a0).norm_sqr()).exp();
            assert!((v - expect).abs() < 1e-10);
        }
        let peak = field_q(&psi, &GridSpec { lo: 0.6, hi: 1.0, points: 2 }, 0.0).unwrap();
        assert!(peak.values.iter().all(|v| *v <= 1.0 + 1e-12));
    }

    #[test]
    fn field_normalization_on_default_grid() {
        let psi = cat_state(C64::from(0.7995), CatParity::Even, 24).unwrap();
        let q = field_q(&psi, &GridSpec::FIELD_DEFAULT, 0.0).unwrap();
        assert!((q.normalization() - 1.0).abs() < 0.02);
        assert!(q.min_value() >= -1e-12);
        assert!(q.parity_asymmetry().unwrap() < 1e-12);
    }

    #[test]
    fn ground_atoms_husimi() {
        let spin = Spin::from_atoms(10);
        let q = atom_husimi(&dicke_state(spin, 0).unwrap(), &GridSpec::ATOM_DEFAULT, 0.0).unwrap();
        let mut n_points = 0;
        for (x, y, v) in q.points() {
            let expect = (1.0 + x * x + y * y).powf(-10.0);
            assert!((v - expect).abs() < 1e-12);
            n_points += 1;
        }
        assert!(n_points < 101 * 101);
        assert!((q.values[(50, 50)] - 1.0).abs() < 1e-14);
        assert!(q.values[(0, 0)].is_nan());
    }

    #[test]
    fn scs_husimi_peaks_at_parameter() {
        let spin = Spin::from_atoms(8);
        let p = SpinCoherentParam::new(C64::new(0.4, 0.2), spin).unwrap();
        let q = atom_husimi(&spin_coherent_state(&p), &GridSpec::ATOM_DEFAULT, 0.0).unwrap();
        let (mut best, mut at) = (0.0, (0.0, 0.0));
        for (x, y, v) in q.points() {
            if v > best {
                best = v;
                at = (x, y);
            }
        }
        assert!((at.0 - 0.4).abs() < 1e-9 && (at.1 - 0.2).abs() < 1e-9);
        assert!((best - 1.0).abs() < 1e-12);
    }

    #[test]
    fn similarity_basics() {
        let psi = cat_state(C64::from(0.7995), CatParity::Even, 24).unwrap();
        let q = field_q(&psi, &GridSpec::FIELD_DEFAULT, 0.0).unwrap();
        assert!((grid_similarity(&q, &q).unwrap() - 1.0).abs() < 1e-12);
        assert!((grid_similarity(&q, &q.reflected().unwrap()).unwrap() - 1.0).abs() < 1e-12);
        let spin = Spin::from_atoms(10);
        let atoms = atom_husimi(&dicke_state(spin, 0).unwrap(), &GridSpec::ATOM_DEFAULT, 0.0).unwrap();
        assert!(matches!(grid_similarity(&q, &atoms), Err(Error::AxisMismatch(_))));
        let matched = GridSpec::atoms_matching(&GridSpec::FIELD_DEFAULT, spin);
        let atoms = atom_husimi(&dicke_state(spin, 0).unwrap(), &matched, 0.0).unwrap();
        let s = grid_similarity(&q, &atoms).unwrap();
        assert!((0.0..=1.0).contains(&s));
    }

    #[test]
    fn quarter_turn_moves_coherent_peak() {
        let psi = coherent_state(C64::new(0.0, -1.0), 30).unwrap();
        let spec = GridSpec { lo: -2.0, hi: 2.0, points: 21 };
        let q = field_q(&psi, &spec, 0.0).unwrap().quarter_turned().unwrap();
        // Q'(z) = Q(-iz) peaks where -iz = -i, i.e. z = 1.
        for (x, y, v) in q.points() {
            let expect = (-(C64::new(x, y) - 1.0).norm_sqr()).exp();
            assert!((v - expect).abs() < 1e-10);
        }
        let four = (0..4).try_fold(q.clone(), |g, _| g.quarter_turned()).unwrap();
        assert_eq!(four.values, q.values);
    }

    #[test]
    fn basis_checks() {
        let field = coherent_state(C64::from(0.5), 20).unwrap();
        assert!(matches!(atom_husimi(&field, &GridSpec::ATOM_DEFAULT, 0.0), Err(Error::BasisMismatch { .. })));
        let atoms = dicke_state(Spin::from_atoms(2), 0).unwrap();
        assert!(matches!(field_q(&atoms, &GridSpec::FIELD_DEFAULT, 0.0), Err(Error::BasisMismatch { .. })));
        assert!(GridSpec { lo: 1.0, hi: -1.0, points: 5 }.validate().is_err());
    }

    #[test]
    fn reduced_traces_are_unit() {
        let psi = product(&dicke_state(Spin::from_atoms(4), 2).unwrap(), &coherent_state(C64::from(0.9), 24).unwrap());
        let (_, rf) = factor_density(&psi, Keep::Right).unwrap();
        let (_, ra) = factor_density(&psi, Keep::Left).unwrap();
        assert!((rf.trace().re - 1.0).abs() < 1e-10 && (ra.trace().re - 1.0).abs() < 1e-10);
    }
}
