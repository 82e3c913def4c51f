//! Operators and states: a single boson mode on a truncated Fock space, a
//! collective spin `j` in the Dicke basis, coherent and cat states of both,
//! and the displacement and rotation operators.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ln_binomial, ln_factorial};
use crate::qalgebra::{expm_antihermitian, Basis, OperatorMatrix, Spin, StateVector, C64};

/// Largest Poisson tail accepted when truncating a coherent state.
pub const FOCK_TAIL_LIMIT: f64 = 1e-12;

/// Smallest cutoff returned by [`default_cutoff`].
pub const MIN_CUTOFF: usize = 16;

/// Label of an even (`+`) or odd (`-`) superposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CatParity {
    #[serde(rename = "+")]
    Even,
    #[serde(rename = "-")]
    Odd,
}

impl CatParity {
    pub fn sign(self) -> f64 {
        match self {
            CatParity::Even => 1.0,
            CatParity::Odd => -1.0,
        }
    }

    /// Whether excitation number `n` belongs to this parity sector.
    pub fn admits(self, n: usize) -> bool {
        (n % 2 == 0) == (self == CatParity::Even)
    }
}

impl fmt::Display for CatParity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatParity::Even => "+",
            CatParity::Odd => "-",
        })
    }
}

impl FromStr for CatParity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "even" | "e" => Ok(CatParity::Even),
            "-" | "−" | "odd" | "o" => Ok(CatParity::Odd),
            _ => Err(Error::InvalidArgument(format!("unknown parity '{s}', expected + or -"))),
        }
    }
}

/// Parameters of a spin coherent state `|η>` with `0 < |η| < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinCoherentParam {
    eta: C64,
    spin: Spin,
}

impl SpinCoherentParam {
    pub fn new(eta: C64, spin: Spin) -> Result<Self> {
        let abs = eta.norm();
        if !(abs > 0.0 && abs < 1.0) {
            return Err(Error::EtaOutOfRange { abs });
        }
        if spin.two_j() == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        Ok(SpinCoherentParam { eta, spin })
    }

    pub fn real(eta: f64, spin: Spin) -> Result<Self> {
        Self::new(C64::from(eta), spin)
    }

    pub fn eta(&self) -> C64 {
        self.eta
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    /// `γ = (1 - |η|²) / (1 + |η|²)`.
    pub fn gamma(&self) -> f64 {
        let e2 = self.eta.norm_sqr();
        (1.0 - e2) / (1.0 + e2)
    }
}

/// Mode operators on `Fock(n_max)`.
#[derive(Clone, Debug)]
pub struct BosonOps {
    pub basis: Basis,
    pub a: OperatorMatrix,
    pub a_dag: OperatorMatrix,
    pub number: OperatorMatrix,
    pub x: OperatorMatrix,
    pub p: OperatorMatrix,
}

impl BosonOps {
    /// `X_θ = a e^{-iθ} + a† e^{iθ}`.
    pub fn x_theta(&self, theta: f64) -> OperatorMatrix {
        let ph = C64::from_polar(1.0, theta);
        let m = self.a.entries() * ph.conj() + self.a_dag.entries() * ph;
        OperatorMatrix::new_hermitian(self.basis.clone(), m).expect("X_theta is Hermitian by construction")
    }
}

pub(crate) fn annihilation_matrix(n_max: usize) -> DMatrix<C64> {
    let dim = n_max + 1;
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::from((n as f64).sqrt());
    }
    a
}

pub fn boson_ops(n_max: usize) -> Result<BosonOps> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("boson operators need n_max >= 1".into()));
    }
    let basis = Basis::fock(n_max);
    let a = annihilation_matrix(n_max);
    let ad = a.adjoint();
    let number = &ad * &a;
    let x = &a + &ad;
    let p = (&a - &ad) * C64::new(0.0, -1.0);
    Ok(BosonOps {
        a: OperatorMatrix::new(basis.clone(), a)?,
        a_dag: OperatorMatrix::new(basis.clone(), ad)?,
        number: OperatorMatrix::new_hermitian(basis.clone(), number)?,
        x: OperatorMatrix::new_hermitian(basis.clone(), x)?,
        p: OperatorMatrix::new_hermitian(basis.clone(), p)?,
        basis,
    })
}

/// Collective spin operators in the excitation basis `|n>_j`.
#[derive(Clone, Debug)]
pub struct SpinOps {
    pub basis: Basis,
    pub s_plus: OperatorMatrix,
    pub s_minus: OperatorMatrix,
    pub s_z: OperatorMatrix,
    pub s_x: OperatorMatrix,
    pub s_y: OperatorMatrix,
    /// `𝒩 = S_z + j`.
    pub number: OperatorMatrix,
}

/// `<n-1|S_-|n>_j = sqrt(n (2j - n + 1))`.
pub(crate) fn lowering_element(spin: Spin, n: usize) -> f64 {
    let two_j = spin.two_j() as f64;
    let n = n as f64;
    (n * (two_j - n + 1.0)).sqrt()
}

pub fn spin_ops(spin: Spin) -> SpinOps {
    let basis = Basis::dicke(spin);
    let dim = spin.dim();
    let j = spin.value();
    let mut sm = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        sm[(n - 1, n)] = C64::from(lowering_element(spin, n));
    }
    let sp = sm.adjoint();
    let sz = DMatrix::from_diagonal(&DVector::from_fn(dim, |n, _| C64::from(n as f64 - j)));
    let num = DMatrix::from_diagonal(&DVector::from_fn(dim, |n, _| C64::from(n as f64)));
    let sx = (&sp + &sm) * C64::from(0.5);
    let sy = (&sp - &sm) * C64::new(0.0, -0.5);
    let herm = |m| OperatorMatrix::new_hermitian(basis.clone(), m).expect("spin operator is Hermitian");
    SpinOps {
        s_plus: OperatorMatrix::new(basis.clone(), sp).expect("dimension"),
        s_minus: OperatorMatrix::new(basis.clone(), sm).expect("dimension"),
        s_z: herm(sz),
        s_x: herm(sx),
        s_y: herm(sy),
        number: herm(num),
        basis,
    }
}

/// Poisson tail `Σ_{n > n_max} e^{-x} x^n / n!` for mean `x = |α|²`.
pub fn fock_tail(alpha_abs2: f64, n_max: usize) -> f64 {
    if alpha_abs2 <= 0.0 {
        return 0.0;
    }
    let n0 = n_max + 1;
    let mut term = (-alpha_abs2 + n0 as f64 * alpha_abs2.ln() - ln_factorial(n0)).exp();
    let mut sum = 0.0;
    let mut n = n0;
    loop {
        sum += term;
        n += 1;
        term *= alpha_abs2 / n as f64;
        if term <= 1e-18 * sum || term == 0.0 {
            break;
        }
    }
    sum
}

/// Smallest cutoff (at least [`MIN_CUTOFF`]) whose Poisson tail for `|α|` is
/// below [`FOCK_TAIL_LIMIT`].
pub fn default_cutoff(alpha_abs: f64) -> usize {
    let x = alpha_abs * alpha_abs;
    let mut n = MIN_CUTOFF;
    while fock_tail(x, n) > FOCK_TAIL_LIMIT {
        n += 1;
    }
    n
}

/// `<n|α>` for `n = 0..=n_max` without renormalising the truncated vector.
pub(crate) fn coherent_amplitudes(alpha: C64, n_max: usize) -> Vec<C64> {
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut c = C64::from((-0.5 * alpha.norm_sqr()).exp());
    amps.push(c);
    for n in 1..=n_max {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    amps
}

fn check_tail(alpha: C64, n_max: usize) -> Result<()> {
    let tail = fock_tail(alpha.norm_sqr(), n_max);
    if tail > FOCK_TAIL_LIMIT {
        return Err(Error::TruncationTooSmall { tail, limit: FOCK_TAIL_LIMIT });
    }
    Ok(())
}

pub fn fock_state(n_max: usize, n: usize) -> Result<StateVector> {
    StateVector::basis_state(Basis::fock(n_max), n)
}

/// Truncated coherent state `|α>`, renormalised on `Fock(n_max)`.
pub fn coherent_state(alpha: C64, n_max: usize) -> Result<StateVector> {
    check_tail(alpha, n_max)?;
    StateVector::from_vec(Basis::fock(n_max), coherent_amplitudes(alpha, n_max))
}

/// Even or odd bosonic coherent state `(|α> ± |-α>)` normalised.
pub fn cat_state(alpha: C64, parity: CatParity, n_max: usize) -> Result<StateVector> {
    if parity == CatParity::Odd && alpha.norm() == 0.0 {
        return Err(Error::OddCatAtZero);
    }
    check_tail(alpha, n_max)?;
    let amps = coherent_amplitudes(alpha, n_max)
        .into_iter()
        .enumerate()
        .map(|(n, c)| if parity.admits(n) { c * 2.0 } else { C64::from(0.0) })
        .collect();
    StateVector::from_vec(Basis::fock(n_max), amps)
}

/// `<n|η>_j = (1+|η|²)^{-j} C(2j,n)^{1/2} η^n` for any complex `η`.
pub(crate) fn scs_amplitudes(eta: C64, spin: Spin) -> Vec<C64> {
    let two_j = spin.two_j() as usize;
    let j = spin.value();
    let r = eta.norm();
    if r == 0.0 {
        let mut v = vec![C64::from(0.0); two_j + 1];
        v[0] = C64::from(1.0);
        return v;
    }
    let ln_pref = -j * (1.0 + r * r).ln();
    let (ln_r, arg) = (r.ln(), eta.arg());
    (0..=two_j)
        .map(|n| {
            let ln_mag = ln_pref + 0.5 * ln_binomial(two_j, n) + n as f64 * ln_r;
            C64::from_polar(ln_mag.exp(), n as f64 * arg)
        })
        .collect()
}

pub fn dicke_state(spin: Spin, n: usize) -> Result<StateVector> {
    StateVector::basis_state(Basis::dicke(spin), n)
}

pub fn spin_coherent_state(param: &SpinCoherentParam) -> StateVector {
    let amps = scs_amplitudes(param.eta, param.spin);
    StateVector::from_vec(Basis::dicke(param.spin), amps).expect("SCS has unit norm")
}

/// Even or odd spin coherent state `(|η> ± |-η>)` normalised.
pub fn spin_cat_state(param: &SpinCoherentParam, parity: CatParity) -> Result<StateVector> {
    let amps: Vec<C64> = scs_amplitudes(param.eta, param.spin)
        .into_iter()
        .enumerate()
        .map(|(n, c)| if parity.admits(n) { c * 2.0 } else { C64::from(0.0) })
        .collect();
    // j = 1/2 has no n = 2 component; the even cat is then just |0>.
    StateVector::from_vec(Basis::dicke(param.spin), amps)
}

/// `D(α) = exp(α a† - α* a)` on `Fock(n_max)`.
pub fn displacement(alpha: C64, n_max: usize) -> OperatorMatrix {
    let a = annihilation_matrix(n_max);
    let g = a.adjoint() * alpha - a * alpha.conj();
    let g = OperatorMatrix::new(Basis::fock(n_max), g).expect("dimension");
    expm_antihermitian(&g).expect("generator is anti-Hermitian")
}

/// `R(θ, φ) = exp(-θ/2 (S_+ e^{-iφ} - S_- e^{iφ}))`, a rotation by `θ` about
/// the axis `(-sin φ, cos φ, 0)`.
pub fn rotation(theta: f64, phi: f64, spin: Spin) -> OperatorMatrix {
    let ops = spin_ops(spin);
    let ph = C64::from_polar(1.0, phi);
    let g = (ops.s_plus.entries() * ph.conj() - ops.s_minus.entries() * ph) * C64::from(-0.5 * theta);
    let g = OperatorMatrix::new(Basis::dicke(spin), g).expect("dimension");
    expm_antihermitian(&g).expect("generator is anti-Hermitian")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::expval;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn canonical_commutator_on_interior() {
        let ops = boson_ops(10).unwrap();
        let comm = ops.x.commutator(&ops.p).unwrap();
        for r in 0..10 {
            for k in 0..10 {
                let expect = if r == k { c(0.0, 2.0) } else { c(0.0, 0.0) };
                assert!((comm.entries()[(r, k)] - expect).norm() < 1e-13);
            }
        }
        // Truncation spoils the last diagonal element.
        assert!((comm.entries()[(10, 10)] - c(0.0, 2.0)).norm() > 1.0);
    }

    #[test]
    fn quadrature_special_angles() {
        let ops = boson_ops(6).unwrap();
        assert!(ops.x_theta(0.0).max_abs_diff(&ops.x).unwrap() < 1e-15);
        assert!(ops.x_theta(std::f64::consts::FRAC_PI_2).max_abs_diff(&ops.p).unwrap() < 1e-15);
        assert!((ops.a.entries()[(1, 2)] - c(2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(ops.x_theta(0.3).is_hermitian());
        assert!(boson_ops(0).is_err());
    }

    #[test]
    fn su2_commutators_exact() {
        for two_j in 1..=12 {
            let spin = Spin::from_two_j(two_j);
            let ops = spin_ops(spin);
            let pm = ops.s_plus.commutator(&ops.s_minus).unwrap();
            assert!(pm.max_abs_diff(&ops.s_z.scale(c(2.0, 0.0))).unwrap() <= 1e-13);
            let zp = ops.s_z.commutator(&ops.s_plus).unwrap();
            assert!(zp.max_abs_diff(&ops.s_plus).unwrap() <= 1e-13);
            let zm = ops.s_z.commutator(&ops.s_minus).unwrap();
            assert!(zm.max_abs_diff(&ops.s_minus.scale(c(-1.0, 0.0))).unwrap() <= 1e-13);
            let sum = ops.s_x.add(&ops.s_y.scale(C64::i())).unwrap();
            assert!(sum.max_abs_diff(&ops.s_plus).unwrap() <= 1e-15);
        }
    }

    #[test]
    fn spin_half_sz() {
        let ops = spin_ops(Spin::from_two_j(1));
        let expect = OperatorMatrix::diagonal(Basis::dicke(Spin::from_two_j(1)), &[-0.5, 0.5]).unwrap();
        assert!(ops.s_z.max_abs_diff(&expect).unwrap() < 1e-15);
    }

    #[test]
    fn contraction_commutator() {
        for two_j in [1, 2, 5, 10, 40] {
            let spin = Spin::from_two_j(two_j);
            let ops = spin_ops(spin);
            let s = 1.0 / (two_j as f64).sqrt();
            let b = ops.s_minus.scale(c(s, 0.0));
            let bd = ops.s_plus.scale(c(s, 0.0));
            let lhs = b.commutator(&bd).unwrap();
            let rhs = OperatorMatrix::identity(Basis::dicke(spin))
                .sub(&ops.number.scale(c(1.0 / spin.value(), 0.0)))
                .unwrap();
            assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-13);
        }
    }

    #[test]
    fn holstein_primakoff_elements() {
        for n in 0..4usize {
            let mut prev = f64::INFINITY;
            for two_j in [20u32, 40, 80, 160, 320] {
                let spin = Spin::from_two_j(two_j);
                let elem = lowering_element(spin, n + 1) / (two_j as f64).sqrt();
                let expect = ((n as f64 + 1.0) * (1.0 - n as f64 / two_j as f64)).sqrt();
                assert!((elem - expect).abs() < 1e-14);
                let dev = 1.0 - elem / ((n + 1) as f64).sqrt();
                let x = n as f64 / two_j as f64;
                assert!(dev >= 0.0 && dev <= x + x * x);
                assert!(dev <= prev);
                prev = dev;
            }
        }
    }

    #[test]
    fn fock_tail_and_cutoff() {
        assert_eq!(fock_tail(0.0, 3), 0.0);
        // P(n > 0) = 1 - e^{-x}
        assert!((fock_tail(0.5, 0) - (1.0 - (-0.5f64).exp())).abs() < 1e-15);
        assert_eq!(default_cutoff(0.0), MIN_CUTOFF);
        let n = default_cutoff(3.0);
        assert!(fock_tail(9.0, n) <= FOCK_TAIL_LIMIT);
        assert!(fock_tail(9.0, n - 1) > FOCK_TAIL_LIMIT);
    }

    #[test]
    fn coherent_state_examples() {
        let vac = coherent_state(c(0.0, 0.0), 16).unwrap();
        assert_eq!(vac.amps()[0], c(1.0, 0.0));
        let alpha = c(0.7995, 0.0);
        let s = coherent_state(alpha, 32).unwrap();
        let ops = boson_ops(32).unwrap();
        assert!((expval(&s, &ops.number).unwrap().re - alpha.norm_sqr()).abs() < 1e-10);
        assert!((s.inner(&s).unwrap().norm() - 1.0).abs() < 1e-14);
        let al = ops.a.apply(&s).unwrap();
        let residual = al.amps() - s.amps() * alpha;
        assert!(residual.norm() < 1e-10);
        assert!(matches!(coherent_state(c(3.0, 0.0), 10), Err(Error::TruncationTooSmall { .. })));
    }

    #[test]
    fn cat_state_examples() {
        let ops = boson_ops(40).unwrap();
        let even = cat_state(c(1.0, 0.0), CatParity::Even, 40).unwrap();
        assert!((expval(&even, &ops.number).unwrap().re - 1f64.tanh()).abs() < 1e-10);
        assert_eq!(expval(&even, &ops.a).unwrap(), c(0.0, 0.0));
        let vac = cat_state(c(0.0, 0.0), CatParity::Even, 16).unwrap();
        assert_eq!(vac.amps()[0], c(1.0, 0.0));
        assert!(matches!(cat_state(c(0.0, 0.0), CatParity::Odd, 16), Err(Error::OddCatAtZero)));

        let alpha = c(0.6, -0.8);
        for parity in [CatParity::Even, CatParity::Odd] {
            let s = cat_state(alpha, parity, 40).unwrap();
            for n in 0..=40 {
                if !parity.admits(n) {
                    assert_eq!(s.amps()[n], c(0.0, 0.0));
                }
            }
            let a2 = ops.a.matmul(&ops.a).unwrap().apply(&s).unwrap();
            assert!((a2.amps() - s.amps() * (alpha * alpha)).norm() < 1e-10);
            // Closed-form normalisation of the untruncated series.
            let e = (-2.0 * alpha.norm_sqr()).exp();
            let mean = (1.0 - parity.sign() * e) / (1.0 + parity.sign() * e) * alpha.norm_sqr();
            assert!((expval(&s, &ops.number).unwrap().re - mean).abs() < 1e-10);
        }
    }

    #[test]
    fn spin_coherent_examples() {
        let p = SpinCoherentParam::real(0.1, Spin::from_two_j(1)).unwrap();
        let s = spin_coherent_state(&p);
        assert!((s.amps()[1] / s.amps()[0] - c(0.1, 0.0)).norm() < 1e-15);
        let p = SpinCoherentParam::new(c(0.2, 0.25), Spin::from_two_j(9)).unwrap();
        let s = spin_coherent_state(&p);
        // Already unit norm by the binomial theorem, before any rescaling.
        let raw: f64 = scs_amplitudes(p.eta(), p.spin()).iter().map(|z| z.norm_sqr()).sum();
        assert!((raw - 1.0).abs() < 1e-12);
        assert!((s.norm() - 1.0).abs() < 1e-12);

        let p = SpinCoherentParam::real(0.3, Spin::from_two_j(4)).unwrap();
        let s = spin_coherent_state(&p);
        let ops = spin_ops(p.spin());
        assert!((expval(&s, &ops.number).unwrap().re - 0.330_275_229_357_798).abs() < 1e-12);

        assert!(matches!(SpinCoherentParam::real(1.0, Spin::from_two_j(2)), Err(Error::EtaOutOfRange { .. })));
        assert!(matches!(SpinCoherentParam::real(0.0, Spin::from_two_j(2)), Err(Error::EtaOutOfRange { .. })));
    }

    #[test]
    fn scs_lowering_identity() {
        for two_j in [1u32, 4, 7, 20] {
            let spin = Spin::from_two_j(two_j);
            let p = SpinCoherentParam::new(c(0.4, -0.3), spin).unwrap();
            let s = spin_coherent_state(&p);
            let ops = spin_ops(spin);
            let lhs = ops.s_minus.apply(&s).unwrap();
            let two_j_minus_n = OperatorMatrix::identity(Basis::dicke(spin))
                .scale(c(two_j as f64, 0.0))
                .sub(&ops.number)
                .unwrap();
            let rhs = two_j_minus_n.apply(&s).unwrap();
            assert!((lhs.amps() - rhs.amps() * p.eta()).norm() < 1e-10);
        }
    }

    #[test]
    fn spin_cat_examples() {
        let p = SpinCoherentParam::real(0.5, Spin::from_two_j(2)).unwrap();
        let s = spin_cat_state(&p, CatParity::Even).unwrap();
        let norm = 1.0625f64.sqrt();
        assert!((s.amps()[0] - c(1.0 / norm, 0.0)).norm() < 1e-15);
        assert!((s.amps()[2] - c(0.25 / norm, 0.0)).norm() < 1e-15);
        let ops = spin_ops(p.spin());
        assert!((expval(&s, &ops.number).unwrap().re - 0.117_647_058_823_529_4).abs() < 1e-12);
        let odd = spin_cat_state(&p, CatParity::Odd).unwrap();
        assert_eq!(odd.amps()[0], c(0.0, 0.0));
        for st in [&s, &odd] {
            assert!(expval(st, &ops.s_minus).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn spin_cat_ladder_and_positivity() {
        for two_j in [2u32, 5, 9, 16] {
            let spin = Spin::from_two_j(two_j);
            let ops = spin_ops(spin);
            let sm2 = ops.s_minus.matmul(&ops.s_minus).unwrap();
            let id = OperatorMatrix::identity(Basis::dicke(spin));
            let a = id.scale(c(two_j as f64, 0.0)).sub(&ops.number).unwrap();
            let b = a.sub(&id).unwrap();
            for eta in [c(0.3, 0.0), c(0.2, 0.6)] {
                let p = SpinCoherentParam::new(eta, spin).unwrap();
                for parity in [CatParity::Even, CatParity::Odd] {
                    let s = spin_cat_state(&p, parity).unwrap();
                    let lhs = sm2.apply(&s).unwrap();
                    let rhs = a.matmul(&b).unwrap().apply(&s).unwrap();
                    assert!((lhs.amps() - rhs.amps() * (eta * eta)).norm() < 1e-10);
                    if eta.im == 0.0 {
                        assert!(s.amps().iter().all(|z| z.re >= 0.0 && z.im == 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn displacement_and_rotation() {
        let id = OperatorMatrix::identity(Basis::fock(12));
        assert!(displacement(c(0.0, 0.0), 12).max_abs_diff(&id).unwrap() < 1e-14);
        let spin = Spin::from_two_j(3);
        assert!(rotation(0.0, 0.7, spin).max_abs_diff(&OperatorMatrix::identity(Basis::dicke(spin))).unwrap() < 1e-14);

        let d = displacement(c(0.8, 0.0), 32);
        let uu = d.dagger().matmul(&d).unwrap();
        assert!(uu.max_abs_diff(&OperatorMatrix::identity(Basis::fock(32))).unwrap() < 1e-10);
        let disp_vac = d.apply(&fock_state(32, 0).unwrap()).unwrap();
        let coh = coherent_state(c(0.8, 0.0), 32).unwrap();
        assert!(disp_vac.fidelity(&coh).unwrap() >= 1.0 - 1e-8);

        let half = Spin::from_two_j(1);
        let r = rotation(std::f64::consts::PI, 0.0, half);
        let up = r.apply(&dicke_state(half, 0).unwrap()).unwrap();
        assert!((up.amps()[1].norm() - 1.0).abs() < 1e-12);
        assert!(up.amps()[0].norm() < 1e-12);
    }

    #[test]
    fn parity_parsing() {
        assert_eq!("+".parse::<CatParity>().unwrap(), CatParity::Even);
        assert_eq!("odd".parse::<CatParity>().unwrap(), CatParity::Odd);
        assert!("x".parse::<CatParity>().is_err());
        assert_eq!(CatParity::Odd.to_string(), "-");
    }
}
