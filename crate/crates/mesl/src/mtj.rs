//! Behavioral MTJ resistance model and the read path.
//!
//! The bias dependence follows the usual roll-off of the anti-parallel
//! conductance: `R_AP(V) = R_P0 (1 + TMR0 / (1 + (V/V_h)²))` with a bias-flat
//! parallel branch. Intermediate angles interpolate the conductances.

use crate::error::MeslError;
use crate::Real;

/// Bias-dependent parallel/anti-parallel resistance record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MtjModel<R> {
    /// Parallel resistance at zero bias, Ω.
    pub r_p0: R,
    /// Zero-bias TMR ratio, dimensionless.
    pub tmr0: R,
    /// Bias roll-off voltage of the anti-parallel conductance, V.
    pub v_h: R,
}

impl<R: Real> MtjModel<R> {
    pub fn new(r_p0: R, tmr0: R, v_h: R) -> Result<Self, MeslError> {
        if r_p0 <= R::zero() {
            return Err(MeslError::config("r_p0", "parallel resistance must be > 0"));
        }
        if tmr0 <= R::zero() {
            return Err(MeslError::config("tmr0", "TMR ratio must be > 0"));
        }
        if v_h <= R::zero() {
            return Err(MeslError::config("v_h", "roll-off voltage must be > 0"));
        }
        Ok(MtjModel { r_p0, tmr0, v_h })
    }

    /// Parallel resistance (bias-flat), Ω.
    pub fn r_parallel(&self, _v: R) -> R {
        self.r_p0
    }

    /// Anti-parallel resistance at bias `v`, Ω.
    pub fn r_antiparallel(&self, v: R) -> R {
        let x = v / self.v_h;
        self.r_p0 * (R::one() + self.tmr0 / (R::one() + x * x))
    }

    /// Resistance at relative angle `theta` (rad) and bias `v`, by conductance
    /// interpolation `G = ½[G_P (1+cosθ) + G_AP (1−cosθ)]`.
    pub fn resistance(&self, theta: R, v: R) -> R {
        let half = R::real(0.5);
        let c = theta.cos();
        let g_p = R::one() / self.r_parallel(v);
        let g_ap = R::one() / self.r_antiparallel(v);
        let g = half * (g_p * (R::one() + c) + g_ap * (R::one() - c));
        R::one() / g
    }
}

/// Read-path parameters: sense divider, abstract trip-point inverter, and
/// the node-T disturb guard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadCircuit<R> {
    /// Sense voltage across the divider, V.
    pub v_read: R,
    /// Reference (pull) resistance of the divider, Ω.
    pub r_ref: R,
    /// Inverter trip point, V.
    pub inverter_trip: R,
    /// Inverter output for input below the trip, V.
    pub v_out_high: R,
    /// Inverter output for input at or above the trip, V.
    pub v_out_low: R,
    /// Gate capacitance of the read-enable transistor, F.
    pub c_g: R,
    /// Gate voltage of the read-enable transistor, V.
    pub v_g: R,
    /// Minimum ME voltage that can disturb a magnet, V.
    pub v_switch_min: R,
}

impl<R: Real> ReadCircuit<R> {
    pub fn validate(&self) -> Result<(), MeslError> {
        if self.v_read <= R::zero() {
            return Err(MeslError::config("v_read", "sense voltage must be > 0"));
        }
        if self.r_ref <= R::zero() {
            return Err(MeslError::config("r_ref", "reference resistance must be > 0"));
        }
        if !(self.v_out_low < self.inverter_trip && self.inverter_trip < self.v_out_high) {
            return Err(MeslError::config(
                "inverter_trip",
                "must satisfy v_out_low < trip < v_out_high",
            ));
        }
        Ok(())
    }
}

const DIVIDER_MAX_ITERS: usize = 200;
const DIVIDER_DAMPING: f64 = 0.5;
// Voltage tolerance well below the 1e-9 relative current-balance target.
const DIVIDER_TOL_V: f64 = 1e-13;

/// Solve the sense divider for the mid-node voltage.
///
/// Both arms may be bias-dependent; `r_top` sees `v_read - v_node` and
/// `r_bottom` sees `v_node`. Damped fixed-point iteration of
/// `v_node = v_read · r_bot / (r_top + r_bot)`.
pub fn solve_divider<R, FT, FB>(r_top: FT, r_bottom: FB, v_read: R) -> Result<R, MeslError>
where
    R: Real,
    FT: Fn(R) -> R,
    FB: Fn(R) -> R,
{
    let damping = R::real(DIVIDER_DAMPING);
    let tol = R::real(DIVIDER_TOL_V);
    let mut v = v_read * R::real(0.5);
    for _ in 0..DIVIDER_MAX_ITERS {
        let rt = r_top(v_read - v);
        let rb = r_bottom(v);
        if rt <= R::zero() || rb <= R::zero() {
            return Err(MeslError::config(
                "divider",
                "arm resistances must stay positive over the bias range",
            ));
        }
        let target = v_read * rb / (rt + rb);
        let next = v + damping * (target - v);
        if (next - v).abs() < tol {
            return Ok(next);
        }
        v = next;
    }
    let residual = {
        let rt = r_top(v_read - v);
        let rb = r_bottom(v);
        (v_read * rb / (rt + rb) - v).abs()
    };
    Err(MeslError::NonConvergence {
        iterations: DIVIDER_MAX_ITERS,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// Ideal static inverter. Input exactly at the trip resolves low.
pub fn inverter_out<R: Real>(v_in: R, circuit: &ReadCircuit<R>) -> R {
    if v_in < circuit.inverter_trip {
        circuit.v_out_high
    } else {
        circuit.v_out_low
    }
}

/// Disturb guard: true iff the sensed node voltage cannot switch a magnet.
/// The boundary counts as a disturb.
pub fn check_disturb<R: Real>(v_node: R, circuit: &ReadCircuit<R>) -> bool {
    v_node.abs() < circuit.v_switch_min
}
