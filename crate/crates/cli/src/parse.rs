use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use squeeze_core::qstates::{
    cat_state, coherent_state, default_cutoff, dicke_state, fock_state, spin_cat_state, spin_coherent_state, MIN_CUTOFF,
};
use squeeze_core::{CatParity, GridSpec, Spin, SpinCoherentParam, StateVector};

use crate::CliError;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

/// A real number, also accepting `pi`, `k*pi` and `pi/k`.
pub fn real(s: &str) -> Result<f64, CliError> {
    let t = s.trim();
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|_| invalid(format!("not a number: '{s}'")));
    let value = if let Some(rest) = t.strip_prefix("pi") {
        match rest.trim().strip_prefix('/') {
            Some(den) => PI / parse(den)?,
            None if rest.trim().is_empty() => PI,
            None => return Err(invalid(format!("not a number: '{s}'"))),
        }
    } else if let Some(k) = t.strip_suffix("pi") {
        parse(k.trim().trim_end_matches('*'))? * PI
    } else {
        parse(t)?
    };
    if !value.is_finite() {
        return Err(invalid(format!("not a finite number: '{s}'")));
    }
    Ok(value)
}

pub fn complex(s: &str) -> Result<Complex64, CliError> {
    if let Ok(x) = real(s) {
        return Ok(Complex64::from(x));
    }
    let z = Complex64::from_str(s.trim()).map_err(|_| invalid(format!("not a complex number: '{s}'")))?;
    if !z.is_finite() {
        return Err(invalid(format!("not a finite number: '{s}'")));
    }
    Ok(z)
}

pub fn spin(s: &str) -> Result<Spin, CliError> {
    s.parse::<Spin>().map_err(|_| invalid(format!("j must be a positive half-integer, got '{s}'")))
}

pub fn parity(s: &str) -> Result<CatParity, CliError> {
    s.parse::<CatParity>().map_err(|e| invalid(e.to_string()))
}

/// `start:end:steps` (`steps + 1` points) or a comma-separated list.
pub fn tau_list(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let taus = match parts.as_slice() {
        [start, end, steps] => {
            let steps: usize = steps.trim().parse().map_err(|_| invalid(format!("bad step count in '{s}'")))?;
            if steps == 0 {
                return Err(invalid("tau grid needs at least one step"));
            }
            squeeze_core::dicke::tau_grid(real(start)?, real(end)?, steps)
        }
        [_] => s.split(',').map(real).collect::<Result<_, _>>()?,
        _ => return Err(invalid(format!("tau must be start:end:steps or a list, got '{s}'"))),
    };
    squeeze_core::dicke::validate_tau_grid(&taus).map_err(|e| invalid(e.to_string()))?;
    Ok(taus)
}

/// `lo:hi:points`.
pub fn grid(s: &str) -> Result<GridSpec, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, points] = parts.as_slice() else {
        return Err(invalid(format!("grid must be lo:hi:points, got '{s}'")));
    };
    let points = points.trim().parse().map_err(|_| invalid(format!("bad point count in '{s}'")))?;
    let spec = GridSpec { lo: real(lo)?, hi: real(hi)?, points };
    spec.validate().map_err(|e| invalid(e.to_string()))?;
    Ok(spec)
}

/// Builds the state named by `fock:n`, `coherent:α`, `cat:α:±`, `dicke:j:n`,
/// `scs:j:η` or `spincat:j:η:±`. Returns the state and its photon cutoff,
/// if any.
pub fn state(spec: &str, n_max: Option<usize>) -> Result<(StateVector, Option<usize>), CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let cutoff = |alpha: Complex64| n_max.unwrap_or_else(|| default_cutoff(alpha.norm()));
    let count = |s: &str| s.trim().parse::<usize>().map_err(|_| invalid(format!("not a level index: '{s}'")));
    let (psi, nm) = match parts.as_slice() {
        ["fock", n] => {
            let n = count(n)?;
            let nm = n_max.unwrap_or(MIN_CUTOFF.max(n + 2));
            if n > nm {
                return Err(invalid(format!("fock level {n} exceeds n_max {nm}")));
            }
            (fock_state(nm, n)?, Some(nm))
        }
        ["coherent", a] => {
            let a = complex(a)?;
            let nm = cutoff(a);
            (coherent_state(a, nm)?, Some(nm))
        }
        ["cat", a, p] => {
            let a = complex(a)?;
            let nm = cutoff(a);
            (cat_state(a, parity(p)?, nm)?, Some(nm))
        }
        ["dicke", j, n] => {
            let (j, n) = (spin(j)?, count(n)?);
            if n >= j.dim() {
                return Err(invalid(format!("Dicke level {n} exceeds 2j = {}", j.two_j())));
            }
            (dicke_state(j, n)?, None)
        }
        ["scs", j, eta] => (spin_coherent_state(&SpinCoherentParam::new(complex(eta)?, spin(j)?)?), None),
        ["spincat", j, eta, p] => {
            (spin_cat_state(&SpinCoherentParam::new(complex(eta)?, spin(j)?)?, parity(p)?)?, None)
        }
        _ => {
            return Err(invalid(format!(
                "unknown state '{spec}'; expected fock:n, coherent:a, cat:a:+|-, dicke:j:n, scs:j:eta or spincat:j:eta:+|-"
            )))
        }
    };
    Ok((psi, nm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals() {
        assert_eq!(real("0.5").unwrap(), 0.5);
        assert_eq!(real("pi").unwrap(), PI);
        assert_eq!(real("pi/2").unwrap(), PI / 2.0);
        assert_eq!(real("2pi").unwrap(), 2.0 * PI);
        assert!(real("pie").is_err() && real("nan").is_err());
    }

    #[test]
    fn complexes() {
        assert_eq!(complex("0.3+0.4i").unwrap(), Complex64::new(0.3, 0.4));
        assert_eq!(complex("-1").unwrap(), Complex64::from(-1.0));
        assert!(complex("abc").is_err());
    }

    #[test]
    fn taus() {
        assert_eq!(tau_list("0:1:4").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(tau_list("0,pi/2").unwrap().len(), 2);
        assert!(tau_list("1,0").is_err());
        assert!(tau_list("0:1:0").is_err());
    }

    #[test]
    fn states() {
        let (psi, nm) = state("cat:0.7995:+", None).unwrap();
        assert_eq!(nm, Some(default_cutoff(0.7995)));
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert_eq!(state("dicke:3/2:1", None).unwrap().0.dim(), 4);
        assert_eq!(state("fock:3", None).unwrap().1, Some(MIN_CUTOFF));
        assert!(matches!(state("scs:1:1.5", None), Err(CliError::Invalid(_))));
        assert!(matches!(state("cat:0:-", None), Err(CliError::Invalid(_))));
        assert!(matches!(state("cat:3:+", Some(5)), Err(CliError::Truncation(_))));
        assert!(state("wigner:1", None).is_err());
    }
}
