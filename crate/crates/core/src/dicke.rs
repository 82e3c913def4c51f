//! Resonant atom-field dynamics in the interaction picture,
//! `H = λ/√(2j) (S_+ a + S_- a†)`, starting from `|0>_j ⊗ |α₀>_+`, and the
//! two-mode beam-splitter `H = λ(b†a + b a†)` it approaches as `N → ∞`.
//!
//! `H` conserves the total excitation `E = 𝒩 + a†a`, so the default
//! propagation diagonalises each fixed-`E` block on its own.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qalgebra::{eigh_matrix, evolve_coeffs, Basis, Keep, OperatorMatrix, PartialTrace, Spin, StateVector, C64};
use crate::qstates::{annihilation_matrix, cat_state, default_cutoff, lowering_element, CatParity};
use crate::squeezing::{
    evenodd_from_moments, kitagawa_from_moments, principal_squeezing_from_moments, wineland_from_moments, BosonMoments,
    SpinMoments,
};

/// Largest tolerated `|‖ψ(τ)‖ - 1|`.
pub const NORM_LEAK_LIMIT: f64 = 1e-9;

/// Atom numbers used for the transfer-trend runs.
pub const DEFAULT_ATOM_NUMBERS: [u32; 4] = [1, 10, 30, 60];

/// `α₀` of the even cat with the smallest `ζ`.
pub const OPTIMAL_ALPHA0: f64 = 0.7995;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DickeConfig {
    pub n_atoms: u32,
    pub alpha0: C64,
    pub lambda: f64,
    /// Scaled times `τ = λt`, ascending.
    pub tau_grid: Vec<f64>,
    /// Photon cutoff; `None` selects [`default_photon_cutoff`].
    pub n_max: Option<usize>,
    pub use_blocks: bool,
}

impl DickeConfig {
    pub fn new(n_atoms: u32, alpha0: C64, tau_grid: Vec<f64>) -> Self {
        DickeConfig { n_atoms, alpha0, lambda: 1.0, tau_grid, n_max: None, use_blocks: true }
    }

    pub fn spin(&self) -> Spin {
        Spin::from_atoms(self.n_atoms)
    }

    pub fn photon_cutoff(&self) -> usize {
        self.n_max.unwrap_or_else(|| default_photon_cutoff(self.alpha0.norm(), self.n_atoms))
    }

    pub fn basis(&self) -> Basis {
        Basis::tensor(Basis::dicke(self.spin()), Basis::fock(self.photon_cutoff()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 {
            return Err(Error::InvalidArgument("n_atoms must be positive".into()));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidArgument(format!("lambda = {} must be positive", self.lambda)));
        }
        if !self.alpha0.is_finite() || self.alpha0.norm() == 0.0 {
            return Err(Error::InvalidArgument("alpha0 must be finite and nonzero".into()));
        }
        validate_tau_grid(&self.tau_grid)?;
        let floor = default_cutoff(self.alpha0.norm());
        if self.photon_cutoff() < floor {
            return Err(Error::InvalidArgument(format!("n_max = {} is below the cutoff {floor} for alpha0", self.photon_cutoff())));
        }
        Ok(())
    }
}

pub fn validate_tau_grid(taus: &[f64]) -> Result<()> {
    if taus.is_empty() {
        return Err(Error::InvalidArgument("tau grid is empty".into()));
    }
    if taus.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("tau grid has non-finite entries".into()));
    }
    if taus.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("tau grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Tail cutoff for the initial cat plus one photon level per atom.
pub fn default_photon_cutoff(alpha0_abs: f64, n_atoms: u32) -> usize {
    default_cutoff(alpha0_abs) + n_atoms as usize
}

/// Index of `|k>_atoms ⊗ |m>_field`.
fn joint_index(k: usize, m: usize, n_max: usize) -> usize {
    k * (n_max + 1) + m
}

/// `<k+1, m-1| H |k, m>`.
fn coupling(spin: Spin, lambda: f64, k: usize, m: usize) -> f64 {
    lambda / (spin.two_j() as f64).sqrt() * lowering_element(spin, k + 1) * (m as f64).sqrt()
}

/// `H` on `Dicke(spin) ⊗ Fock(n_max)`.
pub fn dicke_hamiltonian(spin: Spin, n_max: usize, lambda: f64) -> OperatorMatrix {
    let basis = Basis::tensor(Basis::dicke(spin), Basis::fock(n_max));
    let dim = basis.dim();
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    for k in 0..spin.two_j() as usize {
        for m in 1..=n_max {
            let g = C64::from(coupling(spin, lambda, k, m));
            let (up, down) = (joint_index(k + 1, m - 1, n_max), joint_index(k, m, n_max));
            h[(up, down)] = g;
            h[(down, up)] = g;
        }
    }
    OperatorMatrix::from_raw(basis, h, true)
}

pub fn build_hamiltonian(config: &DickeConfig) -> OperatorMatrix {
    dicke_hamiltonian(config.spin(), config.photon_cutoff(), config.lambda)
}

/// `Π = (-1)^{𝒩 + a†a}` and `𝒩 + a†a` as diagonal operators.
pub fn parity_and_excitation(spin: Spin, n_max: usize) -> (OperatorMatrix, OperatorMatrix) {
    let basis = Basis::tensor(Basis::dicke(spin), Basis::fock(n_max));
    let exc: Vec<f64> = (0..spin.dim()).flat_map(|k| (0..=n_max).map(move |m| (k + m) as f64)).collect();
    let par: Vec<f64> = exc.iter().map(|&e| if e as usize % 2 == 0 { 1.0 } else { -1.0 }).collect();
    (
        OperatorMatrix::diagonal(basis.clone(), &par).expect("dimension"),
        OperatorMatrix::diagonal(basis, &exc).expect("dimension"),
    )
}

/// Diagonalised fixed-excitation block carrying the initial amplitude of
/// `|0>_atoms ⊗ |E>_field`.
struct Block {
    k_min: usize,
    excitation: usize,
    values: DVector<f64>,
    vectors: DMatrix<C64>,
    coeffs: DVector<C64>,
}

enum Route {
    Blocks(Vec<Block>),
    Full { values: DVector<f64>, vectors: DMatrix<C64>, coeffs: DVector<C64> },
}

/// Prepared propagation of the initial state; `state_at` is cheap after
/// construction.
pub struct DickePropagator {
    spin: Spin,
    n_max: usize,
    lambda: f64,
    basis: Basis,
    initial: StateVector,
    route: Route,
}

impl DickePropagator {
    pub fn new(config: &DickeConfig) -> Result<Self> {
        config.validate()?;
        let spin = config.spin();
        let n_max = config.photon_cutoff();
        let basis = config.basis();
        let cat = cat_state(config.alpha0, CatParity::Even, n_max)?;
        let mut amps = DVector::<C64>::zeros(basis.dim());
        for m in 0..=n_max {
            amps[joint_index(0, m, n_max)] = cat.amps()[m];
        }
        let initial = StateVector::from_raw(basis.clone(), amps);
        // H is rescaled by 1/λ so that phases are e^{-i(H/λ)τ}.
        let route = if config.use_blocks {
            let blocks = cat
                .amps()
                .iter()
                .enumerate()
                .filter(|(_, c)| c.norm_sqr() > 0.0)
                .map(|(e, &c)| excitation_block(spin, n_max, e, c))
                .collect();
            Route::Blocks(blocks)
        } else {
            let h = dicke_hamiltonian(spin, n_max, 1.0);
            let (values, vectors) = eigh_matrix(h.entries());
            let coeffs = vectors.adjoint() * initial.amps();
            Route::Full { values, vectors, coeffs }
        };
        Ok(DickePropagator { spin, n_max, lambda: config.lambda, basis, initial, route })
    }

    pub fn initial(&self) -> &StateVector {
        &self.initial
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `|ψ(τ)>`, unnormalised so that leaks stay visible.
    pub fn state_at(&self, tau: f64) -> StateVector {
        match &self.route {
            Route::Full { values, vectors, coeffs } => {
                StateVector::from_raw(self.basis.clone(), evolve_coeffs(values, vectors, coeffs, tau))
            }
            Route::Blocks(blocks) => {
                let mut amps = DVector::<C64>::zeros(self.basis.dim());
                for b in blocks {
                    let v = evolve_coeffs(&b.values, &b.vectors, &b.coeffs, tau);
                    for (i, x) in v.iter().enumerate() {
                        let k = b.k_min + i;
                        amps[joint_index(k, b.excitation - k, self.n_max)] = *x;
                    }
                }
                StateVector::from_raw(self.basis.clone(), amps)
            }
        }
    }
}

/// Block `E` in the basis `|k, E-k>`, `k = max(0, E-n_max)..=min(E, 2j)`,
/// with `H/λ` tridiagonal.
fn excitation_block(spin: Spin, n_max: usize, e: usize, weight: C64) -> Block {
    let k_min = e.saturating_sub(n_max);
    let k_max = e.min(spin.two_j() as usize);
    let dim = k_max - k_min + 1;
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    for i in 0..dim - 1 {
        let k = k_min + i;
        let g = C64::from(coupling(spin, 1.0, k, e - k));
        h[(i + 1, i)] = g;
        h[(i, i + 1)] = g;
    }
    let (values, vectors) = eigh_matrix(&h);
    // The initial amplitude sits on k = 0, which is the first row when E ≤ n_max.
    let coeffs = if k_min == 0 {
        DVector::from_iterator(dim, vectors.row(0).iter().map(|v| v.conj() * weight))
    } else {
        DVector::zeros(dim)
    };
    Block { k_min, excitation: e, values, vectors, coeffs }
}

/// Observables of one time step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DickeRow {
    pub tau: f64,
    pub zeta_field: f64,
    /// Closed form valid for `<S_+> = 0`.
    pub xi_atoms: f64,
    /// `None` when the mean spin vanishes.
    pub xi_prime_atoms: Option<f64>,
    /// Covariance route, `None` when the mean spin vanishes.
    pub xi_general: Option<f64>,
    pub parity: f64,
    pub total_excitation: f64,
    pub norm: f64,
    pub abs_mean_a: f64,
    pub abs_mean_s_minus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DickeRun {
    pub config: DickeConfig,
    pub rows: Vec<DickeRow>,
}

pub fn observe(spin: Spin, n_max: usize, tau: f64, state: &StateVector) -> Result<DickeRow> {
    let amps = state.amps();
    let norm = state.norm();
    let leak = (norm - 1.0).abs();
    if leak > NORM_LEAK_LIMIT {
        return Err(Error::TruncationTooSmall { tail: leak, limit: NORM_LEAK_LIMIT });
    }
    let (mut parity, mut total_excitation) = (0.0, 0.0);
    for k in 0..spin.dim() {
        for m in 0..=n_max {
            let p = amps[joint_index(k, m, n_max)].norm_sqr();
            parity += if (k + m) % 2 == 0 { p } else { -p };
            total_excitation += (k + m) as f64 * p;
        }
    }
    let field = BosonMoments::from_state(state)?;
    let atoms = SpinMoments::from_state(state)?;
    let xi_atoms = evenodd_from_moments(&atoms)?.xi;
    let xi_prime_atoms = wineland_from_moments(&atoms, xi_atoms).ok();
    let xi_general = kitagawa_from_moments(&atoms).ok().map(|k| k.xi);
    Ok(DickeRow {
        tau,
        zeta_field: principal_squeezing_from_moments(&field).zeta,
        xi_atoms,
        xi_prime_atoms,
        xi_general,
        parity,
        total_excitation,
        norm,
        abs_mean_a: field.mean_a.norm(),
        abs_mean_s_minus: atoms.mean_s_minus.norm(),
    })
}

pub fn evolve(config: &DickeConfig) -> Result<DickeRun> {
    let prop = DickePropagator::new(config)?;
    let rows = config
        .tau_grid
        .par_iter()
        .map(|&tau| observe(prop.spin, prop.n_max, tau, &prop.state_at(tau)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DickeRun { config: config.clone(), rows })
}

/// `ζ` of both modes under `λ(b†a + b a†)`, mode `b` starting in vacuum and
/// mode `a` in the even cat.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapRow {
    pub tau: f64,
    pub zeta_a: f64,
    pub zeta_b: f64,
    pub norm: f64,
}

/// State of `Fock(n_max)_b ⊗ Fock(n_max)_a` at each `τ`.
pub fn swap_states(alpha0: C64, n_max: usize, tau_grid: &[f64]) -> Result<Vec<StateVector>> {
    validate_tau_grid(tau_grid)?;
    let cat = cat_state(alpha0, CatParity::Even, n_max)?;
    let fock = Basis::fock(n_max);
    let basis = Basis::tensor(fock.clone(), fock);
    let a = annihilation_matrix(n_max);
    let id = DMatrix::<C64>::identity(n_max + 1, n_max + 1);
    let a_mode = id.kronecker(&a);
    let b_mode = a.kronecker(&id);
    let h = b_mode.adjoint() * &a_mode + &b_mode * a_mode.adjoint();
    let (values, vectors) = eigh_matrix(&h);
    let mut psi0 = DVector::<C64>::zeros(basis.dim());
    psi0.rows_mut(0, n_max + 1).copy_from(cat.amps());
    let coeffs = vectors.adjoint() * &psi0;
    Ok(tau_grid
        .iter()
        .map(|&t| StateVector::from_raw(basis.clone(), evolve_coeffs(&values, &vectors, &coeffs, t)))
        .collect())
}

pub fn swap_reference(alpha0: C64, n_max: usize, tau_grid: &[f64]) -> Result<Vec<SwapRow>> {
    let states = swap_states(alpha0, n_max, tau_grid)?;
    tau_grid
        .par_iter()
        .zip(states.par_iter())
        .map(|(&tau, psi)| {
            let norm = psi.norm();
            let leak = (norm - 1.0).abs();
            if leak > NORM_LEAK_LIMIT {
                return Err(Error::TruncationTooSmall { tail: leak, limit: NORM_LEAK_LIMIT });
            }
            let zeta_of = |keep| -> Result<f64> {
                let m = BosonMoments::from_density(&relabel_fock(psi.partial_trace(keep)?, n_max))?;
                Ok(principal_squeezing_from_moments(&m).zeta)
            };
            Ok(SwapRow { tau, zeta_a: zeta_of(Keep::Right)?, zeta_b: zeta_of(Keep::Left)?, norm })
        })
        .collect()
}

fn relabel_fock(rho: OperatorMatrix, n_max: usize) -> OperatorMatrix {
    OperatorMatrix::from_raw(Basis::fock(n_max), rho.entries().clone(), true)
}

/// Summary of the atom-side transfer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferMetrics {
    pub xi_min: f64,
    pub tau_at_min: f64,
    /// Depth of the field-`ζ` local minimum nearest `π/2`, measured from the
    /// lower of the two adjacent maxima; 0 if there is none within `π/4`.
    pub zeta_dip_depth: f64,
}

pub fn transfer_metrics(run: &DickeRun) -> Result<TransferMetrics> {
    let rows = &run.rows;
    if rows.is_empty() {
        return Err(Error::InvalidArgument("run has no rows".into()));
    }
    let (mut xi_min, mut tau_at_min) = (f64::INFINITY, 0.0);
    for r in rows {
        if r.xi_atoms < xi_min {
            xi_min = r.xi_atoms;
            tau_at_min = r.tau;
        }
    }
    let z: Vec<f64> = rows.iter().map(|r| r.zeta_field).collect();
    let dip = (1..z.len().saturating_sub(1))
        .filter(|&i| z[i] < z[i - 1] && z[i] <= z[i + 1])
        .filter(|&i| (rows[i].tau - FRAC_PI_2).abs() <= FRAC_PI_2 / 2.0)
        .min_by(|&i, &k| (rows[i].tau - FRAC_PI_2).abs().total_cmp(&(rows[k].tau - FRAC_PI_2).abs()));
    let zeta_dip_depth = dip.map_or(0.0, |i| {
        let mut l = i;
        while l > 0 && z[l - 1] >= z[l] {
            l -= 1;
        }
        let mut r = i;
        while r + 1 < z.len() && z[r + 1] >= z[r] {
            r += 1;
        }
        (z[l].min(z[r]) - z[i]).max(0.0)
    });
    Ok(TransferMetrics { xi_min, tau_at_min, zeta_dip_depth })
}

/// `steps + 1` equally spaced points on `[start, end]`.
pub fn tau_grid(start: f64, end: f64, steps: usize) -> Vec<f64> {
    crate::numeric::linspace(start, end, steps + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::zeta_cat_closed;
    use crate::numeric::MaxAbs;
    use std::f64::consts::PI;

    fn config(n_atoms: u32, steps: usize) -> DickeConfig {
        DickeConfig::new(n_atoms, C64::from(OPTIMAL_ALPHA0), tau_grid(0.0, PI, steps))
    }

    #[test]
    fn single_atom_single_photon_matrix() {
        let h = dicke_hamiltonian(Spin::from_atoms(1), 1, 1.0);
        // Order: |g,0>, |g,1>, |e,0>, |e,1>.
        let mut expect = DMatrix::<C64>::zeros(4, 4);
        expect[(1, 2)] = C64::from(1.0);
        expect[(2, 1)] = C64::from(1.0);
        assert!((h.entries() - expect).max_abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_commutes_with_parity_and_excitation() {
        for (n, n_max) in [(1, 4), (4, 10), (9, 12)] {
            let spin = Spin::from_atoms(n);
            let h = dicke_hamiltonian(spin, n_max, 1.3);
            let (par, exc) = parity_and_excitation(spin, n_max);
            assert!(h.commutator(&par).unwrap().max_abs() <= 1e-12);
            assert!(h.commutator(&exc).unwrap().max_abs() <= 1e-12);
            assert!(h.hermiticity_defect() == 0.0);
        }
    }

    #[test]
    fn blocks_match_full_diagonalisation() {
        for n in 1..=6 {
            let mut cfg = config(n, 12);
            let blocked = DickePropagator::new(&cfg).unwrap();
            cfg.use_blocks = false;
            let full = DickePropagator::new(&cfg).unwrap();
            for &t in &cfg.tau_grid {
                let d = (blocked.state_at(t).amps() - full.state_at(t).amps()).max_abs();
                assert!(d < 1e-9, "N={n} τ={t}: {d}");
            }
        }
    }

    #[test]
    fn initial_row_and_conservation() {
        let run = evolve(&config(10, 40)).unwrap();
        let first = run.rows[0];
        let zeta0 = zeta_cat_closed(OPTIMAL_ALPHA0 * OPTIMAL_ALPHA0, CatParity::Even).unwrap();
        assert!((first.zeta_field - zeta0).abs() < 1e-9);
        assert!((first.xi_atoms - 1.0).abs() < 1e-12);
        for r in &run.rows {
            assert!((r.norm - 1.0).abs() < 1e-9);
            assert!((r.parity - 1.0).abs() < 1e-9);
            assert!((r.total_excitation - first.total_excitation).abs() < 1e-9);
            assert!(r.abs_mean_a <= 1e-10 && r.abs_mean_s_minus <= 1e-10);
            if let Some(g) = r.xi_general {
                assert!((g - r.xi_atoms).abs() < 1e-8, "τ={} {g} {}", r.tau, r.xi_atoms);
            }
        }
    }

    #[test]
    fn single_atom_is_never_squeezed() {
        let run = evolve(&config(1, 60)).unwrap();
        assert!(run.rows.iter().all(|r| (r.xi_atoms - 1.0).abs() < 1e-12));
        assert!((transfer_metrics(&run).unwrap().xi_min - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blocks_skip_odd_excitations_but_route_is_exact() {
        let mut cfg = config(3, 4);
        cfg.n_max = Some(20);
        let prop = DickePropagator::new(&cfg).unwrap();
        assert_eq!(prop.n_max(), 20);
        let psi = prop.state_at(1.0);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swap_at_quarter_and_half_period() {
        let zeta0 = zeta_cat_closed(OPTIMAL_ALPHA0 * OPTIMAL_ALPHA0, CatParity::Even).unwrap();
        let rows = swap_reference(C64::from(OPTIMAL_ALPHA0), 24, &[0.0, FRAC_PI_2, PI]).unwrap();
        assert!((rows[0].zeta_a - zeta0).abs() < 1e-9);
        assert!((rows[0].zeta_b - 1.0).abs() < 1e-12);
        assert!((rows[1].zeta_b - rows[0].zeta_a).abs() < 1e-8);
        assert!((rows[1].zeta_a - 1.0).abs() < 1e-8);
        assert!((rows[2].zeta_a - rows[0].zeta_a).abs() < 1e-8);
    }

    #[test]
    fn large_n_approaches_two_mode_limit() {
        let taus = tau_grid(0.0, PI, 8);
        let n_max = default_cutoff(OPTIMAL_ALPHA0);
        let reference = swap_reference(C64::from(OPTIMAL_ALPHA0), n_max, &taus).unwrap();
        let gaps = |n: u32| -> Vec<f64> {
            let run = evolve(&DickeConfig::new(n, C64::from(OPTIMAL_ALPHA0), taus.clone())).unwrap();
            run.rows.iter().zip(&reference).map(|(r, s)| (r.zeta_field - s.zeta_a).abs()).collect()
        };
        let (g10, g30, g60) = (gaps(10), gaps(30), gaps(60));
        for i in 1..taus.len() {
            assert!(g30[i] < g10[i] && g60[i] < g30[i], "τ={}: {} {} {}", taus[i], g10[i], g30[i], g60[i]);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = config(4, 4);
        cfg.tau_grid = vec![0.0, 0.0];
        assert!(matches!(evolve(&cfg), Err(Error::InvalidArgument(_))));
        let mut cfg = config(4, 4);
        cfg.n_max = Some(3);
        assert!(matches!(evolve(&cfg), Err(Error::InvalidArgument(_))));
        let mut cfg = config(0, 4);
        cfg.n_atoms = 0;
        assert!(evolve(&cfg).is_err());
    }

    #[test]
    fn dip_depth_from_synthetic_rows() {
        let taus = tau_grid(0.0, PI, 8);
        let zetas = [0.4, 0.6, 0.8, 0.7, 0.5, 0.75, 0.9, 0.6, 0.4];
        let rows = taus
            .iter()
            .zip(zetas)
            .map(|(&tau, z)| DickeRow {
                tau,
                zeta_field: z,
                xi_atoms: 1.0 - z / 2.0,
                xi_prime_atoms: None,
                xi_general: None,
                parity: 1.0,
                total_excitation: 0.0,
                norm: 1.0,
                abs_mean_a: 0.0,
                abs_mean_s_minus: 0.0,
            })
            .collect();
        let run = DickeRun { config: config(1, 8), rows };
        let m = transfer_metrics(&run).unwrap();
        assert!((m.zeta_dip_depth - 0.3).abs() < 1e-12);
        assert!((m.xi_min - 0.55).abs() < 1e-12);
        assert!((m.tau_at_min - taus[6]).abs() < 1e-12);
    }
}
