//! Small scalar helpers shared by several modules.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Returns `(x, f(x))` once the bracket is narrower than `tol`.
pub(crate) fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (hi - lo).abs() > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// `ln(n!)` by direct summation; exact enough for the n ≤ a few thousand used here.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln C(m, k)`.
pub(crate) fn ln_binomial(m: usize, k: usize) -> f64 {
    debug_assert!(k <= m);
    let k = k.min(m - k);
    (1..=k).map(|i| ((m - k + i) as f64 / i as f64).ln()).sum()
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_section(|x| (x - 0.3) * (x - 0.3) + 2.0, -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ln_binomial_small_values() {
        assert!((ln_binomial(4, 2).exp() - 6.0).abs() < 1e-12);
        assert!((ln_binomial(10, 0)).abs() < 1e-15);
        assert!((ln_factorial(5).exp() - 120.0).abs() < 1e-10);
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(-1.0, 1.0, 101);
        assert_eq!(v.len(), 101);
        assert_eq!(v[0], -1.0);
        assert_eq!(v[100], 1.0);
        assert!(v[50].abs() < 1e-15);
    }
}

#[cfg(test)]
pub(crate) trait MaxAbs {
    fn max_abs(&self) -> f64;
}

#[cfg(test)]
impl<R, C, S> MaxAbs for nalgebra::Matrix<crate::qalgebra::C64, R, C, S>
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: nalgebra::RawStorage<crate::qalgebra::C64, R, C>,
{
    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }
}
