//! Cross sections and the observables built from them.
//!
//! Averaging the excitation probability over atom positions in a large
//! disk leaves `|J_{m_f-m_gamma}|^2` integrated against `b db`, whose
//! large-radius limit `R/(pi kappa)` is independent of the Bessel order.
//! Divided by the twisted-photon flux `2 k_z / (pi^2 R)`, the disk radius
//! cancels and the averaged cross section becomes
//!
//! ```text
//! sigma_bar = (8 pi^3 alpha^3 / (3 k_z)) |curly_bracket|^2
//! ```
//!
//! per final substate, with `2 pi delta(E_f - E_i - omega)` stripped
//! (the on-shell condition is enforced by construction through
//! [`crate::matelem::transition_energy`]). The plane-wave analogue carries
//! `1/(alpha omega)` in place of `1/k_z`; the rate ratio between the two is
//! therefore dominated by `1/cos(theta_k)`.

use std::f64::consts::PI;

use crate::beam::{BeamOffset, PhotonKinematics};
use crate::matelem::{amplitude, curly_bracket, plane_wave_g, AtomicState};
use crate::specfun::{bessel_j_unchecked, integrate, QuadratureSpec};
use crate::{Error, Result, FINE_STRUCTURE};

/// Finite averaging disk, used only by the cross-check path: the
/// production cross sections take the `R -> infinity` limit analytically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragingSpec {
    /// Disk radius `R` in `a_0`.
    pub disk_radius: f64,
}

impl AveragingSpec {
    /// Twisted-photon flux through the disk, `2 k_z / (pi^2 R)`.
    pub fn flux(&self, k_z: f64) -> f64 {
        2.0 * k_z / (PI * PI * self.disk_radius)
    }

    /// `(pi kappa / R) int_0^R b J_order(kappa b)^2 db`, which tends to 1
    /// as `kappa R -> infinity` independently of the order. Deviation from
    /// 1 measures the finite-disk truncation of the averaging integral.
    pub fn normalized_disk_integral(
        &self,
        order: i32,
        kappa: f64,
        quad: &QuadratureSpec,
    ) -> Result<f64> {
        let q = integrate(
            |b| {
                let j = bessel_j_unchecked(order, kappa * b);
                b * j * j
            },
            0.0,
            self.disk_radius,
            quad,
        )?;
        Ok(PI * kappa / self.disk_radius * q.value)
    }
}

/// Delta-stripped reduced cross section for one final substate, in `a_0^2`
/// (times the stripped `2 pi delta` in full units).
#[derive(Debug, Clone, Copy)]
pub struct CrossSection {
    pub value: f64,
    pub final_state: AtomicState,
    pub omega: f64,
    pub helicity: i32,
    /// `None` for the plane-wave cross section.
    pub pitch_angle: Option<f64>,
}

/// Position-averaged twisted-photon cross section,
/// `(8 pi^3 alpha^3 / (3 k_z)) |curly|^2`. Independent of `m_gamma`: the
/// disk average removed the only place it entered.
pub fn averaged_sigma(
    state: &AtomicState,
    kin: &PhotonKinematics,
    quad: &QuadratureSpec,
) -> Result<CrossSection> {
    let bracket = curly_bracket(state, kin, quad)?;
    let value = 8.0 * PI.powi(3) * FINE_STRUCTURE.powi(3) / (3.0 * kin.k_z()) * bracket.norm_sqr();
    Ok(CrossSection {
        value,
        final_state: *state,
        omega: kin.omega(),
        helicity: kin.helicity(),
        pitch_angle: Some(kin.pitch_angle()),
    })
}

/// Plane-wave cross section,
/// `(8 pi^3 alpha^3 / (3 alpha omega)) delta_{m_f Lambda} |g_pw|^2`.
pub fn plane_wave_sigma(
    state: &AtomicState,
    helicity: i32,
    omega: f64,
    quad: &QuadratureSpec,
) -> Result<CrossSection> {
    let g = plane_wave_g(state, helicity, omega, quad)?;
    let value =
        8.0 * PI.powi(3) * FINE_STRUCTURE.powi(3) / (3.0 * FINE_STRUCTURE * omega) * g.norm_sqr();
    Ok(CrossSection {
        value,
        final_state: *state,
        omega,
        helicity,
        pitch_angle: None,
    })
}

/// Fraction of the averaged excitation strength of level `(n_f, l_f)`
/// going to magnetic substates a plane wave cannot reach
/// (`m_f != Lambda`).
pub fn f_twisted(
    n_f: u32,
    l_f: u32,
    kin: &PhotonKinematics,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let (unique, total) = partitioned_sums(n_f, l_f, kin, quad)?;
    if total == 0.0 {
        return Err(Error::domain(format!(
            "degenerate transition: no strength into (n_f={n_f}, l_f={l_f})"
        )));
    }
    Ok(unique / total)
}

/// Total twisted-photon rate into `(n_f, l_f)` relative to the plane-wave
/// rate for the same level and helicity.
pub fn r_twisted(
    n_f: u32,
    l_f: u32,
    kin: &PhotonKinematics,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let (_, total) = partitioned_sums(n_f, l_f, kin, quad)?;
    let pw_state = AtomicState::new(n_f, l_f, kin.helicity())?;
    let pw = plane_wave_sigma(&pw_state, kin.helicity(), kin.omega(), quad)?.value;
    if pw == 0.0 {
        return Err(Error::domain(format!(
            "plane-wave rate into (n_f={n_f}, l_f={l_f}) vanishes; ratio undefined"
        )));
    }
    Ok(total / pw)
}

/// Summed averaged cross sections over `m_f` in `[-l_f, l_f]`:
/// `(sum over m_f != Lambda, full sum)`.
fn partitioned_sums(
    n_f: u32,
    l_f: u32,
    kin: &PhotonKinematics,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if l_f < 1 {
        return Err(Error::domain(format!(
            "twisted-fraction observables need l_f >= 1, got {l_f}"
        )));
    }
    let mut unique = 0.0;
    let mut total = 0.0;
    for m_f in -(l_f as i32)..=(l_f as i32) {
        let state = AtomicState::new(n_f, l_f, m_f)?;
        let sigma = averaged_sigma(&state, kin, quad)?.value;
        total += sigma;
        if m_f != kin.helicity() {
            unique += sigma;
        }
    }
    Ok((unique, total))
}

/// Where the excitation probability is evaluated for the helicity
/// comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymmetryMode {
    /// Position-averaged cross sections.
    Averaged,
    /// Pointwise at impact parameter `b` (in `a_0`).
    FixedImpact { b: f64 },
}

/// What the opposite-helicity beam holds fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HelicityPairing {
    /// Same total projection `m_gamma`.
    FixedTotalProjection,
    /// Same orbital content: `m_gamma' = m_gamma - 2 Lambda`, so both
    /// beams carry the azimuthal winding `m_gamma - Lambda`. This is the
    /// pairing under which the plane-wave-reducible beam (`m_gamma =
    /// Lambda`) has exactly zero asymmetry.
    FixedOrbitalProjection,
}

/// `(P_+ - P_-)/(P_+ + P_-)` where `P_+-` sums the excitation strength of
/// level `(n_f, l_f)` over `m_f` for the beam and its opposite-helicity
/// partner. Averaging over atom positions kills the asymmetry; at fixed
/// `b` it survives.
pub fn helicity_asymmetry(
    n_f: u32,
    l_f: u32,
    kin: &PhotonKinematics,
    mode: AsymmetryMode,
    pairing: HelicityPairing,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if l_f < 1 {
        return Err(Error::domain(format!(
            "helicity asymmetry needs l_f >= 1, got {l_f}"
        )));
    }
    let opposite_m = match pairing {
        HelicityPairing::FixedTotalProjection => kin.m_gamma(),
        HelicityPairing::FixedOrbitalProjection => kin.m_gamma() - 2 * kin.helicity(),
    };
    let flipped = kin.flipped(opposite_m);

    let strength = |beam: &PhotonKinematics| -> Result<f64> {
        let mut sum = 0.0;
        for m_f in -(l_f as i32)..=(l_f as i32) {
            let state = AtomicState::new(n_f, l_f, m_f)?;
            sum += match mode {
                AsymmetryMode::Averaged => averaged_sigma(&state, beam, quad)?.value,
                AsymmetryMode::FixedImpact { b } => {
                    amplitude(&state, beam, &BeamOffset::new(b, 0.0), quad)?
                        .value
                        .norm_sqr()
                }
            };
        }
        Ok(sum)
    };

    let p_plus = strength(kin)?;
    let p_minus = strength(&flipped)?;
    let total = p_plus + p_minus;
    if total == 0.0 {
        return Err(Error::domain(
            "helicity asymmetry undefined: no strength in either beam".to_string(),
        ));
    }
    Ok((p_plus - p_minus) / total)
}
