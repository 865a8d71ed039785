//! Effective-field components entering the LLG equation.
//!
//! All fields are returned in A/m. The spin-transfer torque is not a field
//! proper; it is kept as a separate torque contribution in the integrator.

use rand::Rng;

use crate::demag::DemagFactors;
use crate::magnet::{MagnetSpec, MeOxideSpec};
use crate::math::Vec3;
use crate::{consts, Real};

/// Shape-anisotropy (demagnetization) field: `-M_S (Nxx mx, Nyy my, Nzz mz)`.
pub fn h_demag<R: Real>(m: Vec3<R>, spec: &MagnetSpec<R>, factors: &DemagFactors<R>) -> Vec3<R> {
    let ms = spec.saturation_magnetization;
    Vec3::new(
        -ms * factors.nxx * m.x,
        -ms * factors.nyy * m.y,
        -ms * factors.nzz * m.z,
    )
}

/// Interface perpendicular anisotropy field: `(0, 0, 2 K_i / (μ₀ M_S t_FL) · m_z)`.
pub fn h_interface<R: Real>(m: Vec3<R>, spec: &MagnetSpec<R>) -> Vec3<R> {
    let mu0 = R::real(consts::MU_0);
    let hk = R::real(2.0) * spec.interface_anisotropy
        / (mu0 * spec.saturation_magnetization * spec.thickness_z);
    Vec3::new(R::zero(), R::zero(), hk * m.z)
}

/// Magneto-electric drive field along x.
///
/// `α_ME · E` is a flux density in Tesla; dividing by μ₀ yields H in A/m.
/// A positive voltage produces a +x field.
pub fn h_me<R: Real>(v_me: R, oxide: &MeOxideSpec<R>) -> Vec3<R> {
    let e_field = v_me / oxide.oxide_thickness;
    let hx = oxide.me_coefficient * e_field / R::real(consts::MU_0);
    Vec3::new(hx, R::zero(), R::zero())
}

/// Standard deviation of each thermal-field component for time step `dt`.
///
/// `σ = sqrt(2 α k_B T / (γ' μ₀² M_S Vol dt))`, with γ' = γ/(1+α²).
pub fn thermal_sigma<R: Real>(spec: &MagnetSpec<R>, dt: R) -> R {
    if spec.temperature == R::zero() {
        return R::zero();
    }
    let mu0 = R::real(consts::MU_0);
    let kb = R::real(consts::K_B);
    let num = R::real(2.0) * spec.gilbert_damping * kb * spec.temperature;
    let den = spec.gamma_prime().abs()
        * mu0
        * mu0
        * spec.saturation_magnetization
        * spec.volume()
        * dt;
    (num / den).sqrt()
}

/// One thermal-field realization: independent standard normals scaled by
/// [`thermal_sigma`]. Exactly zero at T = 0.
pub fn h_thermal<R: Real, G: Rng + ?Sized>(spec: &MagnetSpec<R>, dt: R, rng: &mut G) -> Vec3<R> {
    let sigma = thermal_sigma(spec, dt);
    if sigma == R::zero() {
        return Vec3::zero();
    }
    Vec3::new(
        R::standard_normal(rng) * sigma,
        R::standard_normal(rng) * sigma,
        R::standard_normal(rng) * sigma,
    )
}

/// Slonczewski torque prefactor β = ħ P J / (2 e μ₀ M_S t_FL), in A/m.
pub fn stt_beta<R: Real>(current_density: R, polarization: R, spec: &MagnetSpec<R>) -> R {
    let hbar = R::real(consts::HBAR);
    let q = R::real(consts::Q_E);
    let mu0 = R::real(consts::MU_0);
    hbar * polarization * current_density
        / (R::real(2.0) * q * mu0 * spec.saturation_magnetization * spec.thickness_z)
}

/// Spin-transfer torque contribution `β (m × axis)`, to be crossed with `m`
/// again inside the LLG torque term.
pub fn h_stt<R: Real>(
    m: Vec3<R>,
    current_density: R,
    axis: Vec3<R>,
    polarization: R,
    spec: &MagnetSpec<R>,
) -> Vec3<R> {
    if current_density == R::zero() {
        return Vec3::zero();
    }
    m.cross(axis).scale(stt_beta(current_density, polarization, spec))
}

/// Deterministic part of the effective field:
/// `H_demag + H_interface + H_ME` (thermal noise is added by the integrator,
/// STT is handled as a separate torque term).
pub fn effective_field_deterministic<R: Real>(
    m: Vec3<R>,
    spec: &MagnetSpec<R>,
    factors: &DemagFactors<R>,
    oxide: &MeOxideSpec<R>,
    v_me: R,
) -> Vec3<R> {
    h_demag(m, spec, factors) + h_interface(m, spec) + h_me(v_me, oxide)
}
