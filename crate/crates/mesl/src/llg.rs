//! Stochastic Landau-Lifshitz-Gilbert integration (Heun / Stratonovich).
//!
//! The equation is integrated in physical time:
//!
//! `dm/dt = -γ'μ₀ [ m × H_eff + α m × (m × H_eff) + m × (β m × p) ]`
//!
//! with `γ' = γ/(1+α²)`. One thermal-field realization per step is shared by
//! the predictor and the corrector stages, and the magnetization is
//! renormalized after every step.

use rand::Rng;

use crate::demag::{demag_factors, DemagFactors};
use crate::error::MeslError;
use crate::fields;
use crate::magnet::{DriveSegment, DriveWaveform, MagnetSpec, MeOxideSpec, SimOutcome};
use crate::math::Vec3;
use crate::{consts, Real};

/// Largest admissible integration step, s.
pub const MAX_DT: f64 = 1e-12;

/// Projection threshold of the switching criterion.
pub const SWITCH_THRESHOLD: f64 = 0.9;

/// One magnet plus its ME oxide, ready for integration.
#[derive(Debug, Clone)]
pub struct LlgSystem<R> {
    pub magnet: MagnetSpec<R>,
    pub oxide: MeOxideSpec<R>,
    pub demag: DemagFactors<R>,
    /// Spin polarization P of the STT comparison term.
    pub stt_polarization: R,
}

impl<R: Real> LlgSystem<R> {
    pub fn new(magnet: MagnetSpec<R>, oxide: MeOxideSpec<R>) -> Result<Self, MeslError> {
        magnet.validate()?;
        oxide.validate()?;
        Ok(LlgSystem {
            demag: demag_factors(&magnet)?,
            magnet,
            oxide,
            stt_polarization: R::real(0.5),
        })
    }

    pub fn with_stt_polarization(mut self, p: R) -> Self {
        self.stt_polarization = p;
        self
    }

    /// Time derivative of `m` for a fixed thermal-field realization.
    fn torque(&self, m: Vec3<R>, drive: &DriveSegment<R>, h_thermal: Vec3<R>) -> Vec3<R> {
        let h_eff = fields::effective_field_deterministic(
            m,
            &self.magnet,
            &self.demag,
            &self.oxide,
            drive.v_me,
        ) + h_thermal;

        let m_x_h = m.cross(h_eff);
        let mut torque = m_x_h + m.cross(m_x_h).scale(self.magnet.gilbert_damping);
        if drive.stt_current_density != R::zero() {
            let h_stt = fields::h_stt(
                m,
                drive.stt_current_density,
                drive.stt_axis,
                self.stt_polarization,
                &self.magnet,
            );
            torque += m.cross(h_stt);
        }
        torque.scale(-self.magnet.gamma_prime() * R::real(consts::MU_0))
    }

    /// One Heun predictor-corrector step; the result is renormalized.
    pub fn heun_step<G: Rng + ?Sized>(
        &self,
        m: Vec3<R>,
        drive: &DriveSegment<R>,
        dt: R,
        rng: &mut G,
    ) -> Vec3<R> {
        // Single Gaussian draw per step, shared by both stages (Stratonovich).
        let h_th = fields::h_thermal(&self.magnet, dt, rng);
        let k1 = self.torque(m, drive, h_th);
        let predictor = m + k1.scale(dt);
        let k2 = self.torque(predictor, drive, h_th);
        (m + (k1 + k2).scale(dt * R::real(0.5))).normalized()
    }

    /// Integrate a full drive waveform.
    ///
    /// `record_every = 0` disables trajectory recording; `n` keeps every n-th
    /// step (plus the initial state).
    pub fn simulate<G: Rng + ?Sized>(
        &self,
        m0: Vec3<R>,
        waveform: &DriveWaveform<R>,
        dt: R,
        rng: &mut G,
        target_axis: Vec3<R>,
        record_every: usize,
    ) -> Result<SimOutcome<R>, MeslError> {
        if !m0.is_unit(R::real(1e-6)) {
            return Err(MeslError::InvalidState(format!(
                "initial magnetization must be a unit vector, |m0| = {}",
                m0.norm()
            )));
        }
        if dt <= R::zero() || dt > R::real(MAX_DT) {
            return Err(MeslError::config(
                "dt",
                format!("time step must lie in (0, {MAX_DT:e}] s, got {dt}"),
            ));
        }

        let threshold = R::real(SWITCH_THRESHOLD);
        let total = waveform.total_duration();
        let n_steps = (total / dt).round().to_usize().unwrap_or(0);

        let mut m = m0.normalized();
        let mut trajectory = Vec::new();
        if record_every > 0 {
            trajectory.push((R::zero(), m));
        }

        // Candidate switching time: earliest threshold crossing not followed
        // by a drop below the threshold.
        let mut switch_candidate: Option<R> = None;

        for step in 0..n_steps {
            let t = dt * R::real(step as f64);
            let drive = waveform.at(t);
            m = self.heun_step(m, &drive, dt, rng);
            let t_next = dt * R::real((step + 1) as f64);
            if m.dot(target_axis) >= threshold {
                if switch_candidate.is_none() {
                    switch_candidate = Some(t_next);
                }
            } else {
                switch_candidate = None;
            }
            if record_every > 0 && (step + 1) % record_every == 0 {
                trajectory.push((t_next, m));
            }
        }

        Ok(SimOutcome {
            trajectory,
            switched: switch_candidate.is_some(),
            switching_time: switch_candidate,
            final_m: m,
        })
    }
}

/// Tilt a magnetization slightly toward +z.
///
/// Deterministic (T = 0) runs start 1° off the easy axis: an exactly
/// anti-parallel field exerts zero torque, so the untilted state never moves.
pub fn tilt_toward_z<R: Real>(m: Vec3<R>, angle_deg: R) -> Vec3<R> {
    let angle = angle_deg * R::real(std::f64::consts::PI / 180.0);
    (m + Vec3::unit_z().scale(angle.tan())).normalized()
}
