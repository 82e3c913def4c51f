use nalgebra::DVector;
use proptest::prelude::*;

use squeeze_core::analytic::{factorial_moments_cat, scan_point};
use squeeze_core::dicke::{dicke_hamiltonian, parity_and_excitation};
use squeeze_core::qalgebra::{eigh, expval, partial_trace, tensor};
use squeeze_core::qstates::{displacement, rotation, spin_ops};
use squeeze_core::squeezing::{principal_squeezing, spin_squeezing_kitagawa};
use squeeze_core::{Basis, CatParity, Keep, OperatorMatrix, Spin, SpinCoherentParam, StateVector, C64};

fn amps(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
}

fn state_from(basis: Basis, parts: &[(f64, f64)]) -> Option<StateVector> {
    let mut v = DVector::<C64>::zeros(basis.dim());
    for (i, (re, im)) in parts.iter().enumerate() {
        v[i] = C64::new(*re, *im);
    }
    if v.norm() < 1e-3 {
        return None;
    }
    StateVector::normalized(basis, v).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn zeta_is_displacement_invariant(parts in amps(6), re in -0.6..0.6f64, im in -0.6..0.6f64) {
        let n_max = 48;
        let Some(psi) = state_from(Basis::fock(n_max), &parts) else { return Ok(()) };
        let moved = displacement(C64::new(re, im), n_max).apply(&psi).unwrap();
        let z0 = principal_squeezing(&psi).unwrap().zeta;
        let z1 = principal_squeezing(&moved).unwrap().zeta;
        prop_assert!((z0 - z1).abs() < 1e-9, "{z0} vs {z1}");
    }

    #[test]
    fn xi_is_rotation_invariant(two_j in 2u32..12, parts in amps(12), theta in 0.0..3.1f64, phi in -3.1..3.1f64) {
        let spin = Spin::from_two_j(two_j);
        let Some(psi) = state_from(Basis::dicke(spin), &parts[..spin.dim()]) else { return Ok(()) };
        let Ok(before) = spin_squeezing_kitagawa(&psi) else { return Ok(()) };
        let turned = rotation(theta, phi, spin).apply(&psi).unwrap();
        let after = spin_squeezing_kitagawa(&turned).unwrap();
        prop_assert!((before.xi - after.xi).abs() < 1e-9);
    }

    #[test]
    fn partial_trace_gives_local_expectations(parts in amps(20)) {
        let spin = Spin::from_two_j(3);
        let basis = Basis::tensor(Basis::dicke(spin), Basis::fock(4));
        let Some(psi) = state_from(basis.clone(), &parts) else { return Ok(()) };
        let rho_atoms = partial_trace(&psi, Keep::Left).unwrap();
        let rho_field = partial_trace(&psi, Keep::Right).unwrap();
        prop_assert!((rho_atoms.trace().re - 1.0).abs() < 1e-12);
        prop_assert!((rho_field.trace().re - 1.0).abs() < 1e-12);
        let sz = spin_ops(spin).s_z;
        let lifted = tensor(&sz, &OperatorMatrix::identity(Basis::fock(4)));
        let direct = expval(&psi, &lifted).unwrap().re;
        let reduced = (rho_atoms.entries() * sz.entries()).trace().re;
        prop_assert!((direct - reduced).abs() < 1e-12);
        prop_assert!(eigh(&rho_field).unwrap().eigenvalues.iter().all(|&l| l > -1e-12));
    }

    #[test]
    fn cat_moments_match_state_vectors(two_j in 2u32..50, eta in 0.02..0.98f64, odd in any::<bool>()) {
        let parity = if odd { CatParity::Odd } else { CatParity::Even };
        let spin = Spin::from_two_j(two_j);
        let pt = scan_point(spin, eta, parity).unwrap();
        let fm = factorial_moments_cat(&SpinCoherentParam::real(eta, spin).unwrap(), parity);
        prop_assert!((fm.f1 - pt.f1_direct).abs() < 1e-10);
        prop_assert!((fm.f2 - pt.f2_direct).abs() < 1e-10);
        prop_assert!(fm.f2 <= two_j as f64 * fm.f1 + 1e-12);
        prop_assert!((pt.xi_tilde - pt.xi_tilde_linear).abs() < 1e-9);
    }

    #[test]
    fn dicke_hamiltonian_conserves_excitation(n_atoms in 1u32..8, n_max in 1usize..10, lambda in 0.1..3.0f64) {
        let spin = Spin::from_atoms(n_atoms);
        let h = dicke_hamiltonian(spin, n_max, lambda);
        let (parity, excitation) = parity_and_excitation(spin, n_max);
        prop_assert!(h.commutator(&parity).unwrap().max_abs() <= 1e-12);
        prop_assert!(h.commutator(&excitation).unwrap().max_abs() <= 1e-12);
    }
}
