//! Macrospin simulator for magneto-electric spin logic (MESL).
//!
//! The crate models a mono-domain nano-magnet driven by a magneto-electric
//! capacitor, integrates the stochastic Landau-Lifshitz-Gilbert equation with
//! Heun's method, wraps the magnet pairs into behavioral MTJ read circuits,
//! and composes those devices into XNOR/NAND/NOR gates with a global-reset,
//! domino-clocked cascade protocol. Monte Carlo characterization (switching
//! probability, switching-time statistics, energy) lives in [`characterize`].
//!
//! All core math is generic over the scalar type through the [`Real`] trait;
//! `f64` aliases are exported at the crate root.

use std::fmt;

use num_traits::{Float, FromPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub mod characterize;
pub mod config;
pub mod demag;
pub mod error;
pub mod fields;
pub mod gates;
pub mod llg;
pub mod magnet;
pub mod math;
pub mod mtj;
pub mod rng;

pub use error::MeslError;

/// Scalar type the physics core is generic over: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + fmt::Debug + fmt::Display + Copy + Send + Sync + 'static
{
    /// Convert an `f64` literal (parameter, physical constant) into `Self`.
    fn real(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("literal representable")
    }

    /// One draw from the standard normal distribution.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Real for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

/// Physical constants in SI units.
pub mod consts {
    /// Vacuum permeability, T·m/A.
    pub const MU_0: f64 = 1.256_637_061_27e-6;
    /// Vacuum permittivity, F/m.
    pub const EPS_0: f64 = 8.854_187_818_8e-12;
    /// Boltzmann constant, J/K.
    pub const K_B: f64 = 1.380_649e-23;
    /// Reduced Planck constant, J·s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Elementary charge, C.
    pub const Q_E: f64 = 1.602_176_634e-19;
    /// Speed of light, m/s.
    pub const C_LIGHT: f64 = 2.997_924_58e8;
    /// Electron gyromagnetic ratio, rad·s⁻¹·T⁻¹.
    pub const GAMMA_E: f64 = 1.76e11;
}

// Concrete double-precision aliases for the generic core types.
pub type Vec3d = math::Vec3<f64>;
pub type MagnetSpecD = magnet::MagnetSpec<f64>;
pub type MeOxideSpecD = magnet::MeOxideSpec<f64>;
pub type DriveWaveformD = magnet::DriveWaveform<f64>;
pub type SimOutcomeD = magnet::SimOutcome<f64>;
pub type DemagFactorsD = demag::DemagFactors<f64>;
pub type MtjModelD = mtj::MtjModel<f64>;
pub type ReadCircuitD = mtj::ReadCircuit<f64>;
pub type LlgSystemD = llg::LlgSystem<f64>;
