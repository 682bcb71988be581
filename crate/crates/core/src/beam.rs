//! The twisted-photon state: kinematics, polarization basis,
//! coordinate-space wavefunction, electromagnetic fields, Poynting vector,
//! beam translation and angular-momentum projections.
//!
//! The state is a superposition of plane waves whose momenta form a cone of
//! fixed pitch angle `theta_k` about `z`, weighted by the azimuthal phase
//! `e^{i m_gamma phi_k}`. In coordinate space the vector potential is the
//! three-term Bessel expansion
//!
//! ```text
//! A = e^{-i(omega t - k_z z)} sqrt(kappa/2pi) {
//!       (Lambda/sqrt2) e^{i m phi} sin(theta_k) J_m(kappa rho) eta_0
//!     + i^{-Lambda} e^{i(m-Lambda) phi} cos^2(theta_k/2) J_{m-Lambda}(kappa rho) eta_{+Lambda}
//!     + i^{+Lambda} e^{i(m+Lambda) phi} sin^2(theta_k/2) J_{m+Lambda}(kappa rho) eta_{-Lambda} }
//! ```
//!
//! All fields here use the photon wavenumber `k = alpha * omega` (atomic
//! units) where the derivation in natural units would use `omega` itself.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::specfun::bessel_j_unchecked;
use crate::{Error, Result, FINE_STRUCTURE};

/// Photon energy, cone geometry and angular-momentum labels, with the
/// derived transverse/longitudinal wavenumbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonKinematics {
    omega: f64,
    pitch_angle: f64,
    m_gamma: i32,
    helicity: i32,
}

impl PhotonKinematics {
    /// `omega` in Hartree, `pitch_angle` in radians (strictly inside
    /// `(0, pi/2)`), `helicity` in `{-1, +1}`.
    pub fn new(omega: f64, pitch_angle: f64, m_gamma: i32, helicity: i32) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::domain(format!(
                "photon energy must be positive and finite, got {omega}"
            )));
        }
        if !(pitch_angle > 0.0 && pitch_angle < PI / 2.0) {
            return Err(Error::domain(format!(
                "pitch angle must lie in (0, pi/2), got {pitch_angle}"
            )));
        }
        if helicity != 1 && helicity != -1 {
            return Err(Error::domain(format!(
                "helicity must be +1 or -1, got {helicity}"
            )));
        }
        Ok(PhotonKinematics {
            omega,
            pitch_angle,
            m_gamma,
            helicity,
        })
    }

    /// Same beam with the helicity flipped and a new total projection;
    /// used by the helicity-asymmetry observable.
    pub fn flipped(&self, m_gamma: i32) -> Self {
        PhotonKinematics {
            m_gamma,
            helicity: -self.helicity,
            ..*self
        }
    }

    /// Photon energy in Hartree.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Cone opening angle `theta_k` in radians.
    pub fn pitch_angle(&self) -> f64 {
        self.pitch_angle
    }

    /// Total angular-momentum projection `m_gamma`.
    pub fn m_gamma(&self) -> i32 {
        self.m_gamma
    }

    /// Helicity `Lambda`, +1 or -1.
    pub fn helicity(&self) -> i32 {
        self.helicity
    }

    /// Photon wavenumber `k = alpha omega` in `1/a_0`.
    pub fn wavenumber(&self) -> f64 {
        FINE_STRUCTURE * self.omega
    }

    /// Transverse wavenumber `kappa = k sin(theta_k)`.
    pub fn kappa(&self) -> f64 {
        self.wavenumber() * self.pitch_angle.sin()
    }

    /// Longitudinal wavenumber `k_z = k cos(theta_k)`.
    pub fn k_z(&self) -> f64 {
        self.wavenumber() * self.pitch_angle.cos()
    }

    /// Vacuum wavelength `2 pi / k` in `a_0`.
    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.wavenumber()
    }
}

/// A spacetime sample point in cylindrical coordinates; `rho`, `z` in
/// `a_0`, `t` in `1/Hartree`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylindricalPoint {
    pub rho: f64,
    pub phi: f64,
    pub z: f64,
    pub t: f64,
}

impl CylindricalPoint {
    /// Normalizes `phi` into `[0, 2 pi)`.
    pub fn new(rho: f64, phi: f64, z: f64, t: f64) -> Self {
        debug_assert!(rho >= 0.0, "negative cylindrical radius {rho}");
        CylindricalPoint {
            rho,
            phi: phi.rem_euclid(2.0 * PI),
            z,
            t,
        }
    }

    /// Point in the transverse plane at `t = 0` from Cartesian components.
    pub fn from_cartesian(x: f64, y: f64, z: f64, t: f64) -> Self {
        CylindricalPoint::new(x.hypot(y), y.atan2(x), z, t)
    }
}

/// Transverse displacement of the beam axis in the x-y plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamOffset {
    /// Impact parameter magnitude, `a_0`.
    pub b: f64,
    /// Azimuth of the displacement.
    pub phi_b: f64,
}

impl BeamOffset {
    pub fn new(b: f64, phi_b: f64) -> Self {
        debug_assert!(b >= 0.0, "negative impact parameter {b}");
        BeamOffset { b, phi_b }
    }

    /// Centered beam.
    pub fn centered() -> Self {
        BeamOffset { b: 0.0, phi_b: 0.0 }
    }
}

/// Constant polarization basis vector `eta_lambda`, `lambda` in
/// `{-1, 0, +1}`, as a 4-vector `(t, x, y, z)`:
/// `eta_{+-1} = (0, -+1, -i, 0)/sqrt2`, `eta_0 = (0, 0, 0, 1)`.
pub fn eta(lambda: i32) -> [Complex64; 4] {
    let zero = Complex64::new(0.0, 0.0);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    match lambda {
        1 => [
            zero,
            Complex64::new(-inv_sqrt2, 0.0),
            Complex64::new(0.0, -inv_sqrt2),
            zero,
        ],
        -1 => [
            zero,
            Complex64::new(inv_sqrt2, 0.0),
            Complex64::new(0.0, -inv_sqrt2),
            zero,
        ],
        0 => [zero, zero, zero, Complex64::new(1.0, 0.0)],
        _ => panic!("polarization label must be -1, 0 or +1, got {lambda}"),
    }
}

/// Polarization vector of the plane-wave component at cone azimuth
/// `phi_k`:
///
/// ```text
/// eps = e^{-i Lambda phi_k} cos^2(theta_k/2) eta_{+Lambda}
///     + e^{+i Lambda phi_k} sin^2(theta_k/2) eta_{-Lambda}
///     + (Lambda/sqrt2) sin(theta_k) eta_0
/// ```
pub fn polarization_vector(kin: &PhotonKinematics, phi_k: f64) -> [Complex64; 4] {
    let lam = kin.helicity();
    let half = 0.5 * kin.pitch_angle();
    let cos2 = half.cos().powi(2);
    let sin2 = half.sin().powi(2);
    let c_plus = Complex64::from_polar(cos2, -f64::from(lam) * phi_k);
    let c_minus = Complex64::from_polar(sin2, f64::from(lam) * phi_k);
    let c_zero = Complex64::new(f64::from(lam) / 2f64.sqrt() * kin.pitch_angle().sin(), 0.0);

    let e_p = eta(lam);
    let e_m = eta(-lam);
    let e_0 = eta(0);
    std::array::from_fn(|i| c_plus * e_p[i] + c_minus * e_m[i] + c_zero * e_0[i])
}

/// `i^{lambda}` for `lambda` in `{-1, +1}`.
pub(crate) fn i_pow(lambda: i32) -> Complex64 {
    Complex64::new(0.0, f64::from(lambda))
}

/// The three Bessel-channel amplitudes of the wavefunction about a given
/// axis, including the common factor; the azimuth `phi` is measured about
/// that axis.
fn potential_about_axis(
    kin: &PhotonKinematics,
    rho: f64,
    phi: f64,
    z: f64,
    t: f64,
) -> [Complex64; 4] {
    let lam = kin.helicity();
    let m = kin.m_gamma();
    let kappa = kin.kappa();
    let half = 0.5 * kin.pitch_angle();
    let cos2 = half.cos().powi(2);
    let sin2 = half.sin().powi(2);

    let common = Complex64::from_polar(
        (kappa / (2.0 * PI)).sqrt(),
        kin.k_z() * z - kin.omega() * t,
    );

    let t_zero = Complex64::from_polar(
        f64::from(lam) / 2f64.sqrt() * kin.pitch_angle().sin() * bessel_j_unchecked(m, kappa * rho),
        f64::from(m) * phi,
    );
    let t_plus = i_pow(-lam)
        * Complex64::from_polar(
            cos2 * bessel_j_unchecked(m - lam, kappa * rho),
            f64::from(m - lam) * phi,
        );
    let t_minus = i_pow(lam)
        * Complex64::from_polar(
            sin2 * bessel_j_unchecked(m + lam, kappa * rho),
            f64::from(m + lam) * phi,
        );

    let e_0 = eta(0);
    let e_p = eta(lam);
    let e_m = eta(-lam);
    std::array::from_fn(|i| common * (t_zero * e_0[i] + t_plus * e_p[i] + t_minus * e_m[i]))
}

/// Coordinate-space wavefunction (vector potential) of the twisted photon,
/// as a 4-vector in Cartesian components `(t, x, y, z)`.
pub fn vector_potential(kin: &PhotonKinematics, x: &CylindricalPoint) -> [Complex64; 4] {
    potential_about_axis(kin, x.rho, x.phi, x.z, x.t)
}

/// Wavefunction of the beam whose axis pierces the x-y plane at `offset`:
/// the Bessel arguments become `kappa |x_perp - b_perp|` and the azimuthal
/// phases use the angle about the shifted axis.
pub fn translate_potential(
    kin: &PhotonKinematics,
    offset: &BeamOffset,
    x: &CylindricalPoint,
) -> [Complex64; 4] {
    let dx = x.rho * x.phi.cos() - offset.b * offset.phi_b.cos();
    let dy = x.rho * x.phi.sin() - offset.b * offset.phi_b.sin();
    potential_about_axis(kin, dx.hypot(dy), dy.atan2(dx), x.z, x.t)
}

/// Complex electromagnetic fields and the (real, time-independent)
/// Poynting vector at one point, in cylindrical components
/// `(rho, phi, z)`. Physical fields are the real parts; `S_rho` vanishes
/// identically.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample {
    pub e: [Complex64; 3],
    pub b: [Complex64; 3],
    pub s: [f64; 3],
}

/// Closed-form fields of the beam. For helicity `Lambda` the magnetic
/// field is
///
/// ```text
/// B_rho = i Lambda k sqrt(kappa/4pi) e^{i Psi} (cos^2(theta_k/2) J_{m-Lambda} + sin^2(theta_k/2) J_{m+Lambda})
/// B_phi =          k sqrt(kappa/4pi) e^{i Psi} (sin^2(theta_k/2) J_{m+Lambda} - cos^2(theta_k/2) J_{m-Lambda})
/// B_z   = k sin(theta_k) sqrt(kappa/4pi) e^{i Psi} J_m
/// ```
///
/// with `Psi = k_z z - omega t + m phi`, and the electric field is 90
/// degrees out of phase: `E = i Lambda B` (so `E = i B` for helicity +1).
/// These expressions agree with the curl of [`vector_potential`]; the beam
/// is a curl eigenstate, `curl A = Lambda k A`.
pub fn em_fields(kin: &PhotonKinematics, x: &CylindricalPoint) -> FieldSample {
    let lam = kin.helicity();
    let m = kin.m_gamma();
    let k = kin.wavenumber();
    let kappa = kin.kappa();
    let half = 0.5 * kin.pitch_angle();
    let cos2 = half.cos().powi(2);
    let sin2 = half.sin().powi(2);

    let j_lo = bessel_j_unchecked(m - lam, kappa * x.rho);
    let j_hi = bessel_j_unchecked(m + lam, kappa * x.rho);
    let j_mid = bessel_j_unchecked(m, kappa * x.rho);

    let psi = kin.k_z() * x.z - kin.omega() * x.t + f64::from(m) * x.phi;
    let pref = Complex64::from_polar(k * (kappa / (4.0 * PI)).sqrt(), psi);

    let b = [
        i_pow(lam) * pref * (cos2 * j_lo + sin2 * j_hi),
        pref * (sin2 * j_hi - cos2 * j_lo),
        pref * kin.pitch_angle().sin() * j_mid,
    ];
    let e = [i_pow(lam) * b[0], i_pow(lam) * b[1], i_pow(lam) * b[2]];
    FieldSample {
        e,
        b,
        s: poynting(kin, x.rho),
    }
}

/// Time-independent Poynting vector `(S_rho, S_phi, S_z)` of the physical
/// fields:
///
/// ```text
/// S_rho = 0
/// S_phi = (kappa k^2 / 4pi) sin(theta_k) J_m (cos^2(theta_k/2) J_{m-Lambda} + sin^2(theta_k/2) J_{m+Lambda})
/// S_z   = (kappa k^2 / 4pi) (cos^4(theta_k/2) J_{m-Lambda}^2 - sin^4(theta_k/2) J_{m+Lambda}^2)
/// ```
pub fn poynting(kin: &PhotonKinematics, rho: f64) -> [f64; 3] {
    let lam = kin.helicity();
    let m = kin.m_gamma();
    let k = kin.wavenumber();
    let kappa = kin.kappa();
    let half = 0.5 * kin.pitch_angle();
    let cos2 = half.cos().powi(2);
    let sin2 = half.sin().powi(2);

    let j_lo = bessel_j_unchecked(m - lam, kappa * rho);
    let j_hi = bessel_j_unchecked(m + lam, kappa * rho);
    let j_mid = bessel_j_unchecked(m, kappa * rho);

    let scale = kappa * k * k / (4.0 * PI);
    [
        0.0,
        scale * kin.pitch_angle().sin() * j_mid * (cos2 * j_lo + sin2 * j_hi),
        scale * (cos2 * cos2 * j_lo * j_lo - sin2 * sin2 * j_hi * j_hi),
    ]
}

/// Angular-momentum projections along the propagation axis, in units of
/// hbar: the spin part `Lambda cos(theta_k)`, the orbital part
/// `m_gamma - Lambda cos(theta_k)`, and their total, exactly `m_gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMomentum {
    pub spin: f64,
    pub oam: f64,
    pub total: f64,
}

pub fn angular_momentum(kin: &PhotonKinematics) -> AngularMomentum {
    let spin = f64::from(kin.helicity()) * kin.pitch_angle().cos();
    let oam = f64::from(kin.m_gamma()) - spin;
    debug_assert!(
        (oam_from_channel_weights(kin) - oam).abs()
            <= 1e-12 * (1.0 + f64::from(kin.m_gamma().abs())),
        "channel-weight identity violated"
    );
    AngularMomentum {
        spin,
        oam,
        total: f64::from(kin.m_gamma()),
    }
}

/// Orbital projection assembled from the three Bessel channels of the
/// wavefunction,
///
/// ```text
/// (1/2) m sin^2(theta_k) + (m - Lambda) cos^4(theta_k/2) + (m + Lambda) sin^4(theta_k/2),
/// ```
///
/// algebraically equal to `m_gamma - Lambda cos(theta_k)`.
pub fn oam_from_channel_weights(kin: &PhotonKinematics) -> f64 {
    let m = f64::from(kin.m_gamma());
    let lam = f64::from(kin.helicity());
    let half = 0.5 * kin.pitch_angle();
    let sin_t = kin.pitch_angle().sin();
    0.5 * m * sin_t * sin_t
        + (m - lam) * half.cos().powi(4)
        + (m + lam) * half.sin().powi(4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_j, bessel_translation_partial_sum};
    use rand::{Rng, SeedableRng};

    fn kin(omega: f64, pitch: f64, m: i32, lam: i32) -> PhotonKinematics {
        PhotonKinematics::new(omega, pitch, m, lam).unwrap()
    }

    #[test]
    fn kinematics_validation() {
        assert!(PhotonKinematics::new(0.5, 0.2, 4, 1).is_ok());
        assert!(PhotonKinematics::new(-0.5, 0.2, 4, 1).is_err());
        assert!(PhotonKinematics::new(0.5, 0.0, 4, 1).is_err());
        assert!(PhotonKinematics::new(0.5, 2.0, 4, 1).is_err());
        assert!(PhotonKinematics::new(0.5, 0.2, 4, 2).is_err());
    }

    #[test]
    fn wavenumber_decomposition() {
        let k = kin(0.46875, 0.2, 3, 1);
        let reconstructed = k.kappa().hypot(k.k_z());
        assert!((reconstructed - k.wavenumber()).abs() <= 1e-16 * k.wavenumber());
        // wavefront moves slower than light: k_z < k
        assert!(k.k_z() / k.wavenumber() < 1.0);
        assert!((k.k_z() / k.wavenumber() - 0.2f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn eta_basis_orthonormal() {
        // unit spatial norm and mutual orthogonality under the Hermitian
        // spatial product
        for a in [-1, 0, 1] {
            for b in [-1, 0, 1] {
                let ea = eta(a);
                let eb = eta(b);
                let dot: Complex64 = (1..4).map(|i| ea[i].conj() * eb[i]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - want).norm() < 1e-15, "eta_{a} . eta_{b} = {dot}");
            }
        }
    }

    #[test]
    fn polarization_paraxial_limit() {
        // at phi_k = 0 the paraxial polarization is eta_Lambda itself; at
        // other azimuths only the Trueman-Wick phase e^{-i Lambda phi_k}
        // remains
        let k = kin(0.5, 1e-9, 1, 1);
        let e_p = eta(1);
        let eps = polarization_vector(&k, 0.0);
        for i in 0..4 {
            assert!((eps[i] - e_p[i]).norm() < 1e-9);
        }
        let eps = polarization_vector(&k, 0.7);
        let phase = Complex64::from_polar(1.0, -0.7);
        for i in 0..4 {
            assert!((eps[i] - phase * e_p[i]).norm() < 1e-9);
        }
    }

    #[test]
    fn polarization_right_angle() {
        // theta_k = pi/2 (approached from below), Lambda = 1: z-component
        // is Lambda sin(theta_k)/sqrt2 -> 1/sqrt2
        let k = kin(0.5, std::f64::consts::FRAC_PI_2 - 1e-12, 1, 1);
        let eps = polarization_vector(&k, 0.0);
        assert!((eps[3].re - 1.0 / 2f64.sqrt()).abs() < 1e-9);
        assert!(eps[3].im.abs() < 1e-12);
    }

    #[test]
    fn polarization_transverse_to_momentum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let pitch: f64 = rng.random_range(0.01..1.5);
            let phi_k: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let lam = if rng.random_bool(0.5) { 1 } else { -1 };
            let k = kin(0.5, pitch, 2, lam);
            let eps = polarization_vector(&k, phi_k);
            let kvec = [
                k.kappa() * phi_k.cos(),
                k.kappa() * phi_k.sin(),
                k.k_z(),
            ];
            let dot: Complex64 = (0..3).map(|i| eps[i + 1] * kvec[i]).sum();
            assert!(dot.norm() / k.wavenumber() < 1e-14, "{dot}");
        }
    }

    #[test]
    fn potential_on_axis_single_channel() {
        // rho = 0, m_gamma = Lambda = 1: only the eta_{+1} channel survives
        let k = kin(0.5, 0.3, 1, 1);
        let x = CylindricalPoint::new(0.0, 0.0, 0.0, 0.0);
        let a = vector_potential(&k, &x);
        let amp = (k.kappa() / (2.0 * PI)).sqrt() * (0.15f64).cos().powi(2);
        let want = i_pow(-1) * amp;
        let e_p = eta(1);
        for i in 0..4 {
            assert!((a[i] - want * e_p[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn potential_on_axis_high_m_vanishes() {
        let k = kin(0.5, 0.3, 4, 1);
        let x = CylindricalPoint::new(0.0, 1.0, 0.5, 0.2);
        let a = vector_potential(&k, &x);
        for c in a {
            assert_eq!(c, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn potential_matches_cone_integral() {
        // trapezoid evaluation of the defining phi_k integral,
        // A = e^{-i(wt - k_z z)} sqrt(kappa/2pi)
        //     int dphi_k/2pi (-i)^m e^{i m phi_k} eps e^{i k_perp . x_perp}
        let k = kin(0.46875, 0.2, 2, 1);
        let x = CylindricalPoint::new(700.0, 1.1, 35.0, 4.0);
        let n = 2048;
        let mut acc = [Complex64::new(0.0, 0.0); 4];
        for j in 0..n {
            let phi_k = 2.0 * PI * j as f64 / n as f64;
            let eps = polarization_vector(&k, phi_k);
            let phase = Complex64::from_polar(1.0, -f64::from(k.m_gamma()) * PI / 2.0)
                * Complex64::from_polar(1.0, f64::from(k.m_gamma()) * phi_k)
                * Complex64::from_polar(1.0, k.kappa() * x.rho * (phi_k - x.phi).cos());
            for i in 0..4 {
                acc[i] += eps[i] * phase;
            }
        }
        let common = Complex64::from_polar(
            (k.kappa() / (2.0 * PI)).sqrt() / n as f64,
            k.k_z() * x.z - k.omega() * x.t,
        );
        let direct = vector_potential(&k, &x);
        for i in 0..4 {
            let integral = common * acc[i];
            assert!(
                (integral - direct[i]).norm() < 1e-9,
                "component {i}: {integral} vs {}",
                direct[i]
            );
        }
    }

    #[test]
    fn azimuthal_rotation_covariance() {
        // rotating phi -> phi + delta multiplies the eta_0, eta_{+Lambda},
        // eta_{-Lambda} channel coefficients by e^{i m delta},
        // e^{i (m-Lambda) delta}, e^{i (m+Lambda) delta}
        let k = kin(0.5, 0.4, 3, 1);
        let delta = 0.37;
        let x0 = CylindricalPoint::new(900.0, 0.9, 3.0, 1.0);
        let x1 = CylindricalPoint::new(900.0, 0.9 + delta, 3.0, 1.0);
        let a0 = vector_potential(&k, &x0);
        let a1 = vector_potential(&k, &x1);
        let project = |a: &[Complex64; 4], lam: i32| -> Complex64 {
            let e = eta(lam);
            (1..4).map(|i| e[i].conj() * a[i]).sum()
        };
        for (lam, order) in [(0, 3), (1, 2), (-1, 4)] {
            let c0 = project(&a0, lam);
            let c1 = project(&a1, lam);
            let want = c0 * Complex64::from_polar(1.0, f64::from(order) * delta);
            assert!((c1 - want).norm() <= 1e-12 * c0.norm().max(1e-30));
        }
    }

    #[test]
    fn coulomb_gauge_divergence() {
        // |div A| / (k |A|) < 1e-6 by central differences
        let k = kin(0.46875, 0.2, 3, 1);
        let h = 1e-4;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let x: f64 = rng.random_range(-2000.0..2000.0);
            let y: f64 = rng.random_range(-2000.0..2000.0);
            let z: f64 = rng.random_range(-50.0..50.0);
            let at = |x: f64, y: f64, z: f64| {
                vector_potential(&k, &CylindricalPoint::from_cartesian(x, y, z, 0.0))
            };
            let div = (at(x + h, y, z)[1] - at(x - h, y, z)[1]
                + at(x, y + h, z)[2]
                - at(x, y - h, z)[2]
                + at(x, y, z + h)[3]
                - at(x, y, z - h)[3])
                / (2.0 * h);
            let a = at(x, y, z);
            let norm_a = (a[1].norm_sqr() + a[2].norm_sqr() + a[3].norm_sqr()).sqrt();
            assert!(
                div.norm() / (k.wavenumber() * norm_a) < 1e-6,
                "divergence {div} with |A| = {norm_a}"
            );
        }
    }

    #[test]
    fn translation_identity_at_zero_offset() {
        let k = kin(0.5, 0.25, 2, -1);
        let x = CylindricalPoint::new(450.0, 2.2, 7.0, 0.3);
        let plain = vector_potential(&k, &x);
        let moved = translate_potential(&k, &BeamOffset::centered(), &x);
        for i in 0..4 {
            assert!((plain[i] - moved[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn translation_collinear_geometry() {
        // x_perp = (rho, phi) = (1, 0) against b = (1, pi) puts the point
        // at distance 2 from the shifted axis, azimuth 0
        let k = kin(0.5, 0.3, 2, 1);
        let x = CylindricalPoint::new(1.0, 0.0, 0.0, 0.0);
        let off = BeamOffset::new(1.0, PI);
        let moved = translate_potential(&k, &off, &x);
        let direct = vector_potential(&k, &CylindricalPoint::new(2.0, 0.0, 0.0, 0.0));
        for i in 0..4 {
            assert!((moved[i] - direct[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn translation_matches_partial_sum() {
        // reconstruct each Bessel channel by the addition theorem
        let k = kin(0.46875, 0.2, 3, 1);
        let kappa = k.kappa();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let x = CylindricalPoint::new(
                rng.random_range(0.0..3000.0),
                rng.random_range(0.0..std::f64::consts::TAU),
                rng.random_range(-20.0..20.0),
                0.0,
            );
            let off = BeamOffset::new(
                rng.random_range(0.0..2.0) * k.wavelength(),
                rng.random_range(0.0..std::f64::consts::TAU),
            );
            let moved = translate_potential(&k, &off, &x);

            let common = Complex64::from_polar((kappa / (2.0 * PI)).sqrt(), k.k_z() * x.z);
            let n_max =
                crate::specfun::translation_order_default(3, kappa * x.rho, kappa * off.b);
            let channel = |order: i32| {
                bessel_translation_partial_sum(
                    order,
                    kappa * x.rho,
                    kappa * off.b,
                    x.phi,
                    off.phi_b,
                    n_max,
                )
            };
            let half = 0.1_f64;
            let t0 = channel(3).scale(half.sin() * half.cos() * 2.0 / 2f64.sqrt());
            let tp = i_pow(-1) * channel(2) * half.cos().powi(2);
            let tm = i_pow(1) * channel(4) * half.sin().powi(2);
            let e_0 = eta(0);
            let e_p = eta(1);
            let e_m = eta(-1);
            for i in 0..4 {
                let want = common * (t0 * e_0[i] + tp * e_p[i] + tm * e_m[i]);
                assert!(
                    (moved[i] - want).norm() < 1e-9 * (kappa / (2.0 * PI)).sqrt(),
                    "component {i}"
                );
            }
        }
    }

    #[test]
    fn fields_electric_is_rotated_magnetic() {
        let k = kin(0.46875, 0.2, 4, 1);
        let x = CylindricalPoint::new(1500.0, 0.6, 10.0, 2.0);
        let f = em_fields(&k, &x);
        for i in 0..3 {
            assert!((f.e[i] - Complex64::new(0.0, 1.0) * f.b[i]).norm() < 1e-18);
        }
    }

    #[test]
    fn fields_axis_zero_for_high_m() {
        let k = kin(0.46875, 0.2, 4, 1);
        let x = CylindricalPoint::new(0.0, 0.0, 0.0, 0.0);
        let f = em_fields(&k, &x);
        assert_eq!(f.b[2], Complex64::new(0.0, 0.0));
        assert_eq!(f.s[2], 0.0);
    }

    #[test]
    fn poynting_structure() {
        let k = kin(0.46875, 0.2, 4, 1);
        for &rho in &[0.0, 300.0, 1200.0, 5000.0] {
            let s = poynting(&k, rho);
            assert_eq!(s[0], 0.0);
        }
        // paraxial, m_gamma = 1: S_phi -> 0, S_z -> (kappa k^2/4pi) J_0^2
        let k = kin(0.46875, 1e-7, 1, 1);
        let rho = 500.0;
        let s = poynting(&k, rho);
        let scale = k.kappa() * k.wavenumber().powi(2) / (4.0 * PI);
        let j0 = bessel_j(0, k.kappa() * rho).unwrap();
        assert!(s[1].abs() <= 1e-7 * scale);
        assert!((s[2] - scale * j0 * j0).abs() <= 1e-7 * scale);
    }

    #[test]
    fn poynting_matches_time_averaged_field_product() {
        // S = E x B from the physical fields of em_fields, averaged over a
        // period by 16-point sampling
        let k = kin(0.46875, 0.2, 4, 1);
        let period = 2.0 * PI / k.omega();
        for &rho in &[400.0, 1800.0, 3600.0] {
            let mut avg = [0.0; 3];
            for step in 0..16 {
                let x = CylindricalPoint::new(rho, 0.8, 5.0, period * step as f64 / 16.0);
                let f = em_fields(&k, &x);
                let e: Vec<f64> = f.e.iter().map(|c| c.re).collect();
                let b: Vec<f64> = f.b.iter().map(|c| c.re).collect();
                avg[0] += e[1] * b[2] - e[2] * b[1];
                avg[1] += e[2] * b[0] - e[0] * b[2];
                avg[2] += e[0] * b[1] - e[1] * b[0];
            }
            let s = poynting(&k, rho);
            let scale = k.kappa() * k.wavenumber().powi(2) / (4.0 * PI);
            for i in 0..3 {
                assert!(
                    (avg[i] / 16.0 - s[i]).abs() <= 1e-8 * scale,
                    "component {i} at rho = {rho}"
                );
            }
        }
    }

    #[test]
    fn angular_momentum_closed_forms() {
        let am = angular_momentum(&kin(0.5, 0.2, 4, 1));
        let c = 0.2f64.cos();
        assert!((am.spin - c).abs() < 1e-15);
        assert!((am.oam - (4.0 - c)).abs() < 1e-15);
        assert_eq!(am.total, 4.0);

        // sign flip under helicity reversal
        let am = angular_momentum(&kin(0.5, 0.2, 4, -1));
        assert!((am.spin + c).abs() < 1e-15);
        assert!((am.oam - (4.0 + c)).abs() < 1e-15);

        // paraxial limit: spin -> Lambda, oam -> m - Lambda
        let am = angular_momentum(&kin(0.5, 1e-12, 1, 1));
        assert_eq!(am.spin, 1.0);
        assert_eq!(am.oam, 0.0);
    }

    #[test]
    fn spin_and_oam_sum_to_total() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let k = kin(
                rng.random_range(0.1..1.0),
                rng.random_range(0.001..1.5),
                rng.random_range(-6..=6),
                if rng.random_bool(0.5) { 1 } else { -1 },
            );
            let am = angular_momentum(&k);
            assert!((am.spin + am.oam - am.total).abs() <= 4.0 * f64::EPSILON * (1.0 + am.total.abs()));
            // channel-weight identity to machine epsilon
            assert!(
                (oam_from_channel_weights(&k) - am.oam).abs()
                    <= 8.0 * f64::EPSILON * (1.0 + am.total.abs())
            );
        }
    }
}
