use crate::error::MeslError;
use crate::math::Vec3;
use crate::{consts, Real};

/// Geometry and material record of one mono-domain nano-magnet.
///
/// The long in-plane axis (x) is the easy axis; z is the film normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetSpec<R> {
    /// Magnet length along x, m.
    pub length_x: R,
    /// Magnet width along y, m.
    pub width_y: R,
    /// Free-layer thickness along z, m.
    pub thickness_z: R,
    /// Saturation magnetization M_S, A/m.
    pub saturation_magnetization: R,
    /// Gilbert damping constant, dimensionless.
    pub gilbert_damping: R,
    /// Interface perpendicular anisotropy K_i, J/m².
    pub interface_anisotropy: R,
    /// Gyromagnetic ratio, rad·s⁻¹·T⁻¹.
    pub gyromagnetic_ratio: R,
    /// Ambient temperature, K.
    pub temperature: R,
}

impl<R: Real> MagnetSpec<R> {
    pub fn new(
        length_x: R,
        width_y: R,
        thickness_z: R,
        saturation_magnetization: R,
        gilbert_damping: R,
        interface_anisotropy: R,
        gyromagnetic_ratio: R,
        temperature: R,
    ) -> Result<Self, MeslError> {
        let spec = MagnetSpec {
            length_x,
            width_y,
            thickness_z,
            saturation_magnetization,
            gilbert_damping,
            interface_anisotropy,
            gyromagnetic_ratio,
            temperature,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), MeslError> {
        let zero = R::zero();
        if self.length_x <= zero || self.width_y <= zero || self.thickness_z <= zero {
            return Err(MeslError::InvalidGeometry(format!(
                "magnet dimensions must be positive, got ({}, {}, {})",
                self.length_x, self.width_y, self.thickness_z
            )));
        }
        if self.saturation_magnetization <= zero {
            return Err(MeslError::config("m_s", "saturation magnetization must be > 0"));
        }
        // alpha = 0 is admitted for undamped precession checks.
        if self.gilbert_damping < zero || self.gilbert_damping >= R::one() {
            return Err(MeslError::config("alpha", "gilbert damping must lie in [0, 1)"));
        }
        if self.temperature < zero {
            return Err(MeslError::config("temperature", "temperature must be >= 0 K"));
        }
        Ok(())
    }

    /// Magnet volume, m³.
    pub fn volume(&self) -> R {
        self.length_x * self.width_y * self.thickness_z
    }

    /// Damping-scaled gyromagnetic ratio γ' = γ/(1+α²), rad·s⁻¹·T⁻¹.
    pub fn gamma_prime(&self) -> R {
        self.gyromagnetic_ratio / (R::one() + self.gilbert_damping * self.gilbert_damping)
    }
}

/// Magneto-electric capacitor record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeOxideSpec<R> {
    /// ME coefficient α_ME (ratio of generated B to applied E), s/m.
    pub me_coefficient: R,
    /// ME oxide thickness, m.
    pub oxide_thickness: R,
    /// Relative permittivity, dimensionless.
    pub relative_permittivity: R,
    /// Capacitor plate area, m².
    pub plate_area: R,
}

impl<R: Real> MeOxideSpec<R> {
    pub fn new(
        me_coefficient: R,
        oxide_thickness: R,
        relative_permittivity: R,
        plate_area: R,
    ) -> Result<Self, MeslError> {
        let spec = MeOxideSpec {
            me_coefficient,
            oxide_thickness,
            relative_permittivity,
            plate_area,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), MeslError> {
        if self.me_coefficient <= R::zero() {
            return Err(MeslError::config("alpha_me", "ME coefficient must be > 0"));
        }
        if self.oxide_thickness <= R::zero() {
            return Err(MeslError::config("t_me", "ME oxide thickness must be > 0"));
        }
        if self.relative_permittivity < R::one() {
            return Err(MeslError::config("eps_me", "relative permittivity must be >= 1"));
        }
        if self.plate_area <= R::zero() {
            return Err(MeslError::config("plate_area", "plate area must be > 0"));
        }
        Ok(())
    }

    /// Parallel-plate capacitance, F.
    pub fn capacitance(&self) -> R {
        R::real(consts::EPS_0) * self.relative_permittivity * self.plate_area
            / self.oxide_thickness
    }
}

/// One piecewise-constant segment of the drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSegment<R> {
    /// Segment duration, s.
    pub duration: R,
    /// Voltage across the ME capacitor, V.
    pub v_me: R,
    /// Spin current density for STT comparison runs, A/m². Zero for pure-ME runs.
    pub stt_current_density: R,
    /// Spin polarization axis for the STT term (unit vector when the current is nonzero).
    pub stt_axis: Vec3<R>,
}

impl<R: Real> DriveSegment<R> {
    pub fn me(duration: R, v_me: R) -> Self {
        DriveSegment {
            duration,
            v_me,
            stt_current_density: R::zero(),
            stt_axis: Vec3::unit_x(),
        }
    }

    pub fn stt(duration: R, current_density: R, axis: Vec3<R>) -> Self {
        DriveSegment {
            duration,
            v_me: R::zero(),
            stt_current_density: current_density,
            stt_axis: axis,
        }
    }

    pub fn idle(duration: R) -> Self {
        DriveSegment::me(duration, R::zero())
    }
}

/// Piecewise-constant drive waveform.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveWaveform<R> {
    pub segments: Vec<DriveSegment<R>>,
}

impl<R: Real> DriveWaveform<R> {
    pub fn new(segments: Vec<DriveSegment<R>>) -> Result<Self, MeslError> {
        for seg in &segments {
            if seg.duration <= R::zero() || !seg.duration.is_finite() {
                return Err(MeslError::Schedule(
                    "waveform segment durations must be positive and finite".into(),
                ));
            }
        }
        Ok(DriveWaveform { segments })
    }

    /// Single ME voltage pulse followed by a zero-drive settle interval.
    pub fn pulse_then_settle(pulse_width: R, v_me: R, settle: R) -> Result<Self, MeslError> {
        let mut segments = vec![DriveSegment::me(pulse_width, v_me)];
        if settle > R::zero() {
            segments.push(DriveSegment::idle(settle));
        }
        DriveWaveform::new(segments)
    }

    pub fn total_duration(&self) -> R {
        self.segments
            .iter()
            .fold(R::zero(), |acc, s| acc + s.duration)
    }

    /// Drive value at time `t` (segment boundaries belong to the later segment).
    pub fn at(&self, t: R) -> DriveSegment<R> {
        let mut acc = R::zero();
        for seg in &self.segments {
            acc = acc + seg.duration;
            if t < acc {
                return *seg;
            }
        }
        // Past the end of the waveform: no drive.
        DriveSegment::idle(R::one())
    }
}

/// Result of a single-trajectory simulation.
#[derive(Debug, Clone)]
pub struct SimOutcome<R> {
    /// Recorded `(t, m)` samples, decimated per the recording setting.
    pub trajectory: Vec<(R, Vec3<R>)>,
    /// True iff the switching criterion was met.
    pub switched: bool,
    /// First time `m · target >= 0.9` after which the projection stays `>= 0.9`
    /// for the remainder of the run.
    pub switching_time: Option<R>,
    /// Magnetization at the end of the run.
    pub final_m: Vec3<R>,
}
