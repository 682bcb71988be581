//! Integer-order Bessel functions of the first kind.
//!
//! Three regimes, chosen by `(order, x)`:
//! - ascending power series for small arguments,
//! - Miller's downward recurrence, normalized with
//!   `J_0 + 2*(J_2 + J_4 + ...) = 1`, when the order exceeds the argument,
//! - forward recurrence seeded by `J_0`, `J_1` from the Hankel asymptotic
//!   expansion for large arguments (stable because the order stays below
//!   the argument there).
//!
//! Negative orders and arguments go through the reflection
//! `J_{-n}(x) = (-1)^n J_n(x)` and `J_n(-x) = (-1)^n J_n(x)`.

use num_complex::Complex64;

use crate::{Error, Result};

/// Largest argument covered by the pure power series.
const SERIES_CUTOFF: f64 = 8.0;
/// Smallest argument handed to the asymptotic expansion for `J_0`, `J_1`.
const ASYMPTOTIC_CUTOFF: f64 = 17.0;

/// `J_order(x)` for any integer order.
pub fn bessel_j(order: i32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!(
            "bessel_j requires a finite argument, got {x}"
        )));
    }
    Ok(bessel_j_unchecked(order, x))
}

/// Same as [`bessel_j`] but without the finiteness check; callers must
/// guarantee `x` is finite.
pub(crate) fn bessel_j_unchecked(order: i32, x: f64) -> f64 {
    let mut sign = 1.0;
    if order < 0 && order % 2 != 0 {
        sign = -sign;
    }
    if x < 0.0 && order % 2 != 0 {
        sign = -sign;
    }
    sign * bessel_j_core(order.unsigned_abs(), x.abs())
}

/// `J_n(x)` for `n >= 0`, `x >= 0`.
fn bessel_j_core(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if (n as f64) > x {
        if x <= SERIES_CUTOFF {
            series(n, x)
        } else {
            miller(n, x)
        }
    } else if x <= SERIES_CUTOFF {
        series(n, x)
    } else if x < ASYMPTOTIC_CUTOFF {
        miller(n, x)
    } else {
        // n <= x: forward recurrence is stable.
        let (j0, j1) = (asymptotic(0, x), asymptotic(1, x));
        match n {
            0 => j0,
            1 => j1,
            _ => {
                let mut jm = j0;
                let mut j = j1;
                for k in 1..n {
                    let jp = (2.0 * f64::from(k) / x) * j - jm;
                    jm = j;
                    j = jp;
                }
                j
            }
        }
    }
}

/// Ascending power series; the first term is built as a running product so
/// it underflows gracefully for large `n`.
fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0_f64;
    for k in 1..=n {
        term *= half / f64::from(k);
        if term == 0.0 {
            return 0.0;
        }
    }
    let ratio = -half * half;
    let mut sum = term;
    for k in 1..=80_u32 {
        term *= ratio / (f64::from(k) * f64::from(n + k));
        sum += term;
        if term.abs() <= f64::EPSILON * sum.abs() {
            break;
        }
    }
    sum
}

/// Miller's algorithm: unnormalized downward recurrence from well above
/// `max(n, x)`, then rescale with `J_0 + 2 sum_{k even} J_k = 1`.
fn miller(n: u32, x: f64) -> f64 {
    let top = (n as f64).max(x);
    let start = (top + 20.0 + 8.0 * top.cbrt()).ceil() as u32;
    let start = start + (start & 1); // even

    let mut j_hi = 0.0_f64; // J_{k+1}
    let mut j_lo = 1e-30_f64; // J_k, arbitrary seed
    let mut norm = if start % 2 == 0 { 2.0 * j_lo } else { 0.0 };
    let mut result = if n == start { j_lo } else { 0.0 };

    for k in (1..=start).rev() {
        let j_next = (2.0 * f64::from(k) / x) * j_lo - j_hi;
        j_hi = j_lo;
        j_lo = j_next;
        let ord = k - 1;
        if ord == n {
            result = j_lo;
        }
        if ord > 0 && ord % 2 == 0 {
            norm += 2.0 * j_lo;
        }
        if j_lo.abs() > 1e250 {
            j_lo *= 1e-250;
            j_hi *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
    }
    norm += j_lo; // j_lo now holds the unnormalized J_0
    result / norm
}

/// Hankel asymptotic expansion for `nu` in {0, 1}, `x >= ASYMPTOTIC_CUTOFF`.
fn asymptotic(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(nu * nu);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut prev = f64::INFINITY;
    for k in 1..=20_u32 {
        let twok = f64::from(2 * k - 1);
        term *= (mu - twok * twok) / (f64::from(k) * 8.0 * x);
        if term.abs() >= prev {
            break; // divergent tail reached
        }
        prev = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    let chi = x - (2.0 * f64::from(nu) + 1.0) * std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Partial sum of the Bessel translation (addition) theorem,
///
/// ```text
/// e^{i n phi'} J_n(kappa |rho - b|)
///     = sum_{N} e^{i N phi_rho} e^{-i (N - n) phi_b}
///       J_N(kappa rho) J_{N-n}(kappa b)
/// ```
///
/// truncated at `|N| <= n_max`. Serves as an independent reconstruction of
/// the shifted-axis beam for validating [`crate::beam::translate_potential`].
pub fn bessel_translation_partial_sum(
    n: i32,
    kappa_rho: f64,
    kappa_b: f64,
    phi_rho: f64,
    phi_b: f64,
    n_max: i32,
) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for big_n in -n_max..=n_max {
        let j_rho = bessel_j_unchecked(big_n, kappa_rho);
        if j_rho == 0.0 {
            continue;
        }
        let j_b = bessel_j_unchecked(big_n - n, kappa_b);
        let phase = f64::from(big_n) * phi_rho - f64::from(big_n - n) * phi_b;
        sum += Complex64::from_polar(j_rho * j_b, phase);
    }
    sum
}

/// Suggested truncation order for [`bessel_translation_partial_sum`]: the
/// Bessel product tail decays super-exponentially past the turning point.
pub fn translation_order_default(n: i32, kappa_rho: f64, kappa_b: f64) -> i32 {
    n.abs() + (kappa_rho + kappa_b).ceil() as i32 + 40
}
