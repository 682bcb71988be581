//! Hydrogen bound-state radial wavefunctions (Z = 1, atomic units).

use crate::{Error, Result};

/// Normalized radial function `R_nl(r)` in units of `a_0^{-3/2}`,
///
/// ```text
/// R_nl(r) = sqrt((2/n)^3 (n-l-1)! / (2n (n+l)!))
///           e^{-r/n} (2r/n)^l  L^{2l+1}_{n-l-1}(2r/n)
/// ```
///
/// with `int_0^inf R_nl^2 r^2 dr = 1`.
pub fn hydrogen_radial(n: u32, l: u32, r: f64) -> Result<f64> {
    if n == 0 || l >= n {
        return Err(Error::domain(format!(
            "hydrogen_radial requires 0 <= l < n, got n={n}, l={l}"
        )));
    }
    if !(r >= 0.0) {
        return Err(Error::domain(format!(
            "hydrogen_radial requires r >= 0, got {r}"
        )));
    }
    let nf = f64::from(n);
    let rho = 2.0 * r / nf;

    // log of the normalization to stay finite for large quantum numbers:
    // (n-l-1)!/(n+l)! = 1 / prod_{j=n-l}^{n+l} j
    let mut log_norm = 1.5 * (2.0 / nf).ln() - (2.0 * nf).ln() / 2.0;
    for j in (n - l)..=(n + l) {
        log_norm -= 0.5 * f64::from(j).ln();
    }

    let lag = assoc_laguerre(n - l - 1, f64::from(2 * l + 1), rho);
    Ok((log_norm - 0.5 * rho).exp() * rho.powi(l as i32) * lag)
}

/// `R'_10(r)`, in `a_0^{-5/2}`. For the ground state the derivative is
/// proportional to the function itself: `-a_0 R'_10(r) = R_10(r)`. Kept as
/// its own entry point so the matrix elements can also be evaluated without
/// that substitution as a cross-check.
pub fn radial_derivative_ground(r: f64) -> f64 {
    -2.0 * (-r).exp()
}

/// Generalized Laguerre polynomial `L^alpha_k(x)` by the three-term
/// recurrence.
fn assoc_laguerre(k: u32, alpha: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut lm = 1.0;
    let mut l = 1.0 + alpha - x;
    for i in 1..k {
        let fi = f64::from(i);
        let lp = ((2.0 * fi + 1.0 + alpha - x) * l - (fi + alpha) * lm) / (fi + 1.0);
        lm = l;
        l = lp;
    }
    l
}
