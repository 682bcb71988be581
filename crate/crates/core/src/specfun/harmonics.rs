//! Spherical harmonics on the `phi = 0` meridian, Condon-Shortley phase.
//!
//! `Y_lm(theta, 0)` is real there, and the full harmonic is recovered as
//! `Y_lm(theta, phi) = Y_lm(theta, 0) e^{i m phi}`.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Real value of `Y_lm(theta, phi = 0)`.
pub fn spherical_harmonic_phi0(l: u32, m: i32, theta: f64) -> Result<f64> {
    if m.unsigned_abs() > l {
        return Err(Error::domain(format!(
            "spherical_harmonic_phi0 requires |m| <= l, got l={l}, m={m}"
        )));
    }
    let ma = m.unsigned_abs();

    // sqrt((2l+1)/(4 pi) * (l-m)!/(l+m)!) in log space
    let mut log_norm = 0.5 * ((2.0 * f64::from(l) + 1.0) / (4.0 * PI)).ln();
    for j in (l - ma + 1)..=(l + ma) {
        log_norm -= 0.5 * f64::from(j).ln();
    }

    let mut val = log_norm.exp() * assoc_legendre(l, ma, theta.cos(), theta.sin());
    // Y_{l,-m}(theta, 0) = (-1)^m Y_{lm}(theta, 0)
    if m < 0 && ma % 2 == 1 {
        val = -val;
    }
    Ok(val)
}

/// Associated Legendre `P_l^m(cos theta)` with the Condon-Shortley factor
/// `(-1)^m` built in; upward recurrence in `l`.
fn assoc_legendre(l: u32, m: u32, cos_t: f64, sin_t: f64) -> f64 {
    // P_m^m = (-1)^m (2m-1)!! sin^m(theta)
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * sin_t;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = cos_t * (2.0 * f64::from(m) + 1.0) * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut p = 0.0;
    for ll in (m + 2)..=l {
        let fl = f64::from(ll);
        let fm = f64::from(m);
        p = ((2.0 * fl - 1.0) * cos_t * pm1 - (fl + fm - 1.0) * pmm) / (fl - fm);
        pmm = pm1;
        pm1 = p;
    }
    p
}
