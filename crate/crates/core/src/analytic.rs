//! Closed-form squeezing of even/odd coherent states, factorial moments of
//! even/odd spin coherent states, the linear form of `ξ̃`, parameter scans and
//! the large-`j` contraction sequence.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::golden_section;
use crate::qalgebra::{Spin, C64};
use crate::qstates::{spin_cat_state, CatParity, SpinCoherentParam};
use crate::squeezing::{evenodd_from_moments, wineland_from_moments, SpinMoments};

/// Tolerance of the golden-section search in [`minimize_zeta_even`].
pub const ALPHA_SEARCH_TOL: f64 = 1e-6;

/// Default bracket for [`minimize_zeta_even`].
pub const DEFAULT_ALPHA_BRACKET: (f64, f64) = (0.1, 2.0);

/// `ζ±(|α|²) = 1 + 2|α|²[tanh(|α|²) - 1]` (even) or with `coth` (odd).
pub fn zeta_cat_closed(alpha_abs2: f64, parity: CatParity) -> Result<f64> {
    if !(alpha_abs2 >= 0.0) {
        return Err(Error::InvalidArgument(format!("|alpha|^2 = {alpha_abs2} must be non-negative")));
    }
    match parity {
        CatParity::Even => Ok(1.0 + 2.0 * alpha_abs2 * (alpha_abs2.tanh() - 1.0)),
        CatParity::Odd if alpha_abs2 == 0.0 => Err(Error::OddCatAtZero),
        CatParity::Odd => Ok(1.0 + 2.0 * alpha_abs2 * (1.0 / alpha_abs2.tanh() - 1.0)),
    }
}

/// Real `α` in `bracket` minimising `ζ+`; returns `(α*, ζ*)`.
pub fn minimize_zeta_even(bracket: (f64, f64)) -> Result<(f64, f64)> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && hi < 3.0 && lo < hi) {
        return Err(Error::InvalidArgument(format!("bracket ({lo}, {hi}) must lie inside (0, 3)")));
    }
    let f = |a: f64| 1.0 + 2.0 * a * a * ((a * a).tanh() - 1.0);
    Ok(golden_section(f, lo, hi, ALPHA_SEARCH_TOL))
}

/// `F1 = <𝒩>` and `F2 = <𝒩(𝒩 - 1)>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorialMoments {
    pub f1: f64,
    pub f2: f64,
}

/// The binomial (spin coherent state) values `2j|η|²/(1+|η|²)` and
/// `2j(2j-1)|η|⁴/(1+|η|²)²` that the cat moments are compared against.
pub fn coherent_factorial_moments(param: &SpinCoherentParam) -> FactorialMoments {
    let two_j = param.spin().two_j() as f64;
    let e2 = param.eta().norm_sqr();
    let q = e2 / (1.0 + e2);
    FactorialMoments { f1: two_j * q, f2: two_j * (two_j - 1.0) * q * q }
}

pub fn factorial_moments_cat(param: &SpinCoherentParam, parity: CatParity) -> FactorialMoments {
    let two_j = param.spin().two_j() as i32;
    let g = param.gamma();
    let base = coherent_factorial_moments(param);
    let (g0, g1, g2) = (g.powi(two_j), g.powi(two_j - 1), g.powi(two_j - 2));
    match parity {
        CatParity::Even => FactorialMoments { f1: base.f1 * (1.0 - g1) / (1.0 + g0), f2: base.f2 * (1.0 + g2) / (1.0 + g0) },
        CatParity::Odd => FactorialMoments { f1: base.f1 * (1.0 + g1) / (1.0 - g0), f2: base.f2 * (1.0 - g2) / (1.0 - g0) },
    }
}

/// `ξ̃ = [2j - 1 + (4j - 2)|η|²] F1 - (1 + |η|²) F2 - 2j(2j - 1)|η|²`.
pub fn xi_tilde_from_moments(param: &SpinCoherentParam, fm: &FactorialMoments) -> f64 {
    let two_j = param.spin().two_j() as f64;
    let e2 = param.eta().norm_sqr();
    (two_j - 1.0 + (2.0 * two_j - 2.0) * e2) * fm.f1 - (1.0 + e2) * fm.f2 - two_j * (two_j - 1.0) * e2
}

pub fn xi_tilde_linear(param: &SpinCoherentParam, parity: CatParity) -> f64 {
    xi_tilde_from_moments(param, &factorial_moments_cat(param, parity))
}

/// The linear form with the spin-coherent baseline (which contributes exactly
/// zero) subtracted analytically:
/// `∓[(2j-1)(1+2|η|²) B1 (γ^{2j-1} + γ^{2j}) + (1+|η|²) B2 (γ^{2j-2} - γ^{2j})] / (1 ± γ^{2j})`
/// with `B1, B2` the coherent factorial moments. Both bracketed terms are
/// non-negative, so the sign is exact even where `ξ - 1` is far below `f64`
/// resolution.
pub fn xi_tilde_closed(param: &SpinCoherentParam, parity: CatParity) -> f64 {
    let two_j = param.spin().two_j() as i32;
    let e2 = param.eta().norm_sqr();
    let g = param.gamma();
    let base = coherent_factorial_moments(param);
    let (g0, g1, g2) = (g.powi(two_j), g.powi(two_j - 1), g.powi(two_j - 2));
    let bracket = (two_j as f64 - 1.0) * (1.0 + 2.0 * e2) * base.f1 * (g1 + g0) + (1.0 + e2) * base.f2 * (g2 - g0);
    match parity {
        CatParity::Even => -bracket / (1.0 + g0),
        CatParity::Odd => bracket / (1.0 - g0),
    }
}

/// One `(j, η, parity)` point of the even/odd spin-cat scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub spin: Spin,
    pub eta: f64,
    pub parity: CatParity,
    /// From the state vector.
    pub xi: f64,
    pub xi_tilde: f64,
    /// Closed forms.
    pub f1: f64,
    pub f2: f64,
    pub xi_tilde_linear: f64,
    /// [`xi_tilde_closed`]; `ξ - 1 = xi_tilde_closed / j` without cancellation.
    pub xi_tilde_closed: f64,
    /// Direct expectation values on the state vector.
    pub f1_direct: f64,
    pub f2_direct: f64,
    /// `<(2j - 𝒩)(2j - 𝒩 - 1)>`.
    pub lowering_pair_mean: f64,
}

pub fn scan_point(spin: Spin, eta: f64, parity: CatParity) -> Result<ScanPoint> {
    let param = SpinCoherentParam::real(eta, spin)?;
    let state = spin_cat_state(&param, parity)?;
    let m = SpinMoments::from_state(&state)?;
    let ax = evenodd_from_moments(&m)?;
    let fm = factorial_moments_cat(&param, parity);
    let two_j = spin.two_j() as f64;
    Ok(ScanPoint {
        spin,
        eta,
        parity,
        xi: ax.xi,
        xi_tilde: ax.xi_tilde,
        f1: fm.f1,
        f2: fm.f2,
        xi_tilde_linear: xi_tilde_from_moments(&param, &fm),
        xi_tilde_closed: xi_tilde_closed(&param, parity),
        f1_direct: m.mean_n,
        f2_direct: m.mean_n2 - m.mean_n,
        lowering_pair_mean: two_j * (two_j - 1.0) - (2.0 * two_j - 1.0) * m.mean_n + m.mean_n2,
    })
}

/// Both parities at every `(j, η)`, ordered by `j`, then `η`, then `+` before `-`.
pub fn proposition1_scan(spins: &[Spin], etas: &[f64]) -> Result<Vec<ScanPoint>> {
    let jobs: Vec<(Spin, f64, CatParity)> = spins
        .iter()
        .flat_map(|&s| etas.iter().flat_map(move |&e| [CatParity::Even, CatParity::Odd].map(|p| (s, e, p))))
        .collect();
    jobs.par_iter().map(|&(s, e, p)| scan_point(s, e, p)).collect()
}

/// `j = 1, 3/2, ..., j_max`: the range on which even cats have a non-trivial
/// even sector.
pub fn default_scan_spins(j_max: f64) -> Result<Vec<Spin>> {
    let top = Spin::try_from_f64(j_max)?;
    Ok((2..=top.two_j()).map(Spin::from_two_j).collect())
}

/// `η = step, 2 step, ...` strictly below 1.
pub fn default_scan_etas(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::InvalidArgument(format!("eta step {step} must lie in (0, 1)")));
    }
    let n = ((1.0 - 1e-9) / step).floor() as usize;
    Ok((1..=n).map(|k| (k as f64 * step * 1e9).round() / 1e9).collect())
}

/// One element of the `j → ∞` sequence at fixed `2j|η|² = |α|²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitSequencePoint {
    pub spin: Spin,
    pub eta_abs: f64,
    pub xi: f64,
    pub xi_prime: f64,
    pub zeta_target: f64,
    /// `|ξ - ζ±|`.
    pub gap: f64,
    pub f1: f64,
    pub f2: f64,
    /// `<𝒩> / N`.
    pub mean_excitation_fraction: f64,
}

pub fn contraction_limit_scan(alpha_abs2: f64, spins: &[Spin], parity: CatParity) -> Result<Vec<LimitSequencePoint>> {
    let zeta_target = zeta_cat_closed(alpha_abs2, parity)?;
    for s in spins {
        let eta = (alpha_abs2 / s.two_j() as f64).sqrt();
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::EtaOutOfRange { abs: eta });
        }
    }
    spins
        .par_iter()
        .map(|&spin| {
            let two_j = spin.two_j() as f64;
            let eta_abs = (alpha_abs2 / two_j).sqrt();
            let param = SpinCoherentParam::new(C64::from(eta_abs), spin)?;
            let state = spin_cat_state(&param, parity)?;
            let m = SpinMoments::from_state(&state)?;
            let xi = evenodd_from_moments(&m)?.xi;
            let xi_prime = wineland_from_moments(&m, xi)?;
            Ok(LimitSequencePoint {
                spin,
                eta_abs,
                xi,
                xi_prime,
                zeta_target,
                gap: (xi - zeta_target).abs(),
                f1: m.mean_n,
                f2: m.mean_n2 - m.mean_n,
                mean_excitation_fraction: m.mean_n / two_j,
            })
        })
        .collect()
}

/// Least-squares slope and `R²` of `ln gap` against `ln j`.
pub fn loglog_fit(points: &[LimitSequencePoint]) -> (f64, f64) {
    let xs: Vec<f64> = points.iter().map(|p| p.spin.value().ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.gap.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    (slope, sxy * sxy / (sxx * syy))
}

/// Spins `j` from a list of values, rejecting non-half-integers.
pub fn spins_from_values(js: &[f64]) -> Result<Vec<Spin>> {
    js.iter().map(|&j| Spin::try_from_f64(j)).collect()
}
