//! Monte Carlo characterization: switching-probability curves, switching-time
//! statistics, the ME-vs-STT comparison, and the gate energy model.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::MeslError;
use crate::gates::GateInstance;
use crate::llg::LlgSystem;
use crate::magnet::{DriveSegment, DriveWaveform, SimOutcome};
use crate::math::Vec3;
use crate::mtj::solve_divider;
use crate::rng::trial_rng;
use crate::{MagnetSpecD, MeOxideSpecD, Vec3d};

/// Switching-probability sweep request.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Sorted, non-empty voltage grid, V.
    pub voltages: Vec<f64>,
    /// Drive pulse width, s.
    pub pulse_width: f64,
    /// Zero-drive settle interval simulated after the pulse, s.
    pub settle_time: f64,
    /// Monte Carlo trials per voltage.
    pub trials: usize,
    /// Integration step, s.
    pub dt: f64,
    pub base_seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), MeslError> {
        if self.voltages.is_empty() {
            return Err(MeslError::config("sweep.voltages", "voltage grid must be non-empty"));
        }
        if self.voltages.windows(2).any(|w| w[0] > w[1]) {
            return Err(MeslError::config("sweep.voltages", "voltage grid must be sorted"));
        }
        if self.trials < 1 {
            return Err(MeslError::config("sweep.trials", "at least one trial required"));
        }
        Ok(())
    }
}

/// One point of the switching-probability curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepPoint {
    pub voltage: f64,
    pub p_switch: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: usize,
}

/// Wilson 95% score interval for `k` successes out of `n`.
pub fn wilson_ci(k: usize, n: usize) -> (f64, f64) {
    assert!(n > 0 && k <= n);
    let z = 1.959963984540054f64; // 97.5th percentile of the standard normal
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Run one ME switching trial: start at -x, pulse toward +x, settle, and
/// report the switching time (criterion: `m·x >= 0.9` sustained to run end).
fn me_trial(
    system: &LlgSystem<f64>,
    v_me: f64,
    pulse_width: f64,
    settle_time: f64,
    dt: f64,
    base_seed: u64,
    stream: u64,
) -> Result<Option<f64>, MeslError> {
    let wf = DriveWaveform::pulse_then_settle(pulse_width, v_me, settle_time)?;
    let mut rng = trial_rng(base_seed, stream);
    let m0 = if system.magnet.temperature == 0.0 {
        crate::llg::tilt_toward_z(-Vec3d::unit_x(), 1.0)
    } else {
        -Vec3d::unit_x()
    };
    let out = system.simulate(m0, &wf, dt, &mut rng, Vec3d::unit_x(), 0)?;
    Ok(out.switching_time)
}

/// Switching probability versus ME voltage (thermal noise on, m0 = -x,
/// target +x). Deterministic for a fixed base seed regardless of thread count.
pub fn switching_probability_sweep(
    magnet: &MagnetSpecD,
    oxide: &MeOxideSpecD,
    sweep: &SweepSpec,
) -> Result<Vec<SweepPoint>, MeslError> {
    sweep.validate()?;
    let system = LlgSystem::new(*magnet, *oxide)?;
    let mut curve = Vec::with_capacity(sweep.voltages.len());
    for (vi, &v) in sweep.voltages.iter().enumerate() {
        let hits: Result<Vec<bool>, MeslError> = (0..sweep.trials)
            .into_par_iter()
            .map(|trial| {
                let stream = (vi * sweep.trials + trial) as u64;
                Ok(me_trial(
                    &system,
                    v,
                    sweep.pulse_width,
                    sweep.settle_time,
                    sweep.dt,
                    sweep.base_seed,
                    stream,
                )?
                .is_some())
            })
            .collect();
        let hits = hits?;
        let k = hits.iter().filter(|&&h| h).count();
        let (ci_low, ci_high) = wilson_ci(k, sweep.trials);
        curve.push(SweepPoint {
            voltage: v,
            p_switch: k as f64 / sweep.trials as f64,
            ci_low,
            ci_high,
            trials: sweep.trials,
        });
    }
    Ok(curve)
}

/// Smallest grid voltage whose switching probability reaches `p_min`.
pub fn operating_voltage(curve: &[SweepPoint], p_min: f64) -> Option<f64> {
    curve
        .iter()
        .find(|pt| pt.p_switch >= p_min)
        .map(|pt| pt.voltage)
}

/// Switching-time statistics over an ensemble.
#[derive(Debug, Clone, Serialize)]
pub struct TimeStats {
    pub mean: f64,
    pub std: f64,
    pub switched_fraction: f64,
    pub trials: usize,
    /// `(bin_start_s, bin_end_s, count)` over the histogram range.
    pub histogram: Vec<(f64, f64, usize)>,
}

impl TimeStats {
    pub fn coefficient_of_variation(&self) -> f64 {
        self.std / self.mean
    }
}

/// Drive used for a switching-time ensemble.
#[derive(Debug, Clone, Copy)]
pub enum SwitchDrive {
    /// ME voltage pulse.
    Me { v_me: f64 },
    /// Constant spin current along +x.
    Stt { current_density: f64 },
}

/// Distribution of switching times at the given drive.
///
/// Statistics are flagged unreliable when fewer than 99% of trials switch.
pub fn switching_time_distribution(
    magnet: &MagnetSpecD,
    oxide: &MeOxideSpecD,
    drive: SwitchDrive,
    run_duration: f64,
    settle_time: f64,
    dt: f64,
    trials: usize,
    base_seed: u64,
    bins: usize,
    histogram_range: f64,
) -> Result<TimeStats, MeslError> {
    let system = LlgSystem::new(*magnet, *oxide)?;
    let times: Result<Vec<Option<f64>>, MeslError> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let seg = match drive {
                SwitchDrive::Me { v_me } => DriveSegment::me(run_duration, v_me),
                SwitchDrive::Stt { current_density } => {
                    DriveSegment::stt(run_duration, current_density, Vec3::unit_x())
                }
            };
            let mut segments = vec![seg];
            if settle_time > 0.0 {
                segments.push(DriveSegment::idle(settle_time));
            }
            let wf = DriveWaveform::new(segments)?;
            let mut rng = trial_rng(base_seed, trial as u64);
            let m0 = if system.magnet.temperature == 0.0 {
                crate::llg::tilt_toward_z(-Vec3d::unit_x(), 1.0)
            } else {
                -Vec3d::unit_x()
            };
            let out = system.simulate(m0, &wf, dt, &mut rng, Vec3d::unit_x(), 0)?;
            Ok(out.switching_time)
        })
        .collect();
    let times = times?;
    let switched: Vec<f64> = times.iter().flatten().copied().collect();
    let switched_fraction = switched.len() as f64 / trials as f64;
    if switched_fraction < 0.99 {
        return Err(MeslError::UnreliableStatistics(format!(
            "only {:.1}% of {} trials switched; need >= 99% for switching-time statistics",
            switched_fraction * 100.0,
            trials
        )));
    }
    let n = switched.len() as f64;
    let mean = switched.iter().sum::<f64>() / n;
    let var = switched.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / n;
    let bin_w = histogram_range / bins as f64;
    let mut histogram: Vec<(f64, f64, usize)> = (0..bins)
        .map(|i| (i as f64 * bin_w, (i + 1) as f64 * bin_w, 0usize))
        .collect();
    for &t in &switched {
        let idx = ((t / bin_w) as usize).min(bins - 1);
        histogram[idx].2 += 1;
    }
    Ok(TimeStats {
        mean,
        std: var.sqrt(),
        switched_fraction,
        trials,
        histogram,
    })
}

// ---------------------------------------------------------------------------
// Energy model
// ---------------------------------------------------------------------------

/// Inputs of the gate switching-energy estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergyInputs {
    /// ME capacitor capacitance, F.
    pub c_me: f64,
    /// Reset voltage magnitude, V.
    pub v_reset: f64,
    /// Data voltage magnitude, V.
    pub v_data: f64,
    /// Read-enable transistor gate capacitance, F.
    pub c_g: f64,
    /// Read-enable transistor gate voltage, V.
    pub v_g: f64,
}

/// Itemized switching-energy report.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SwitchingEnergy {
    pub reset_j: f64,
    pub data_j: f64,
    pub gate_j: f64,
    pub total_j: f64,
}

/// Total switching energy `2 C_ME V_reset² + 2 C_ME V_data² + C_G V_G²`.
pub fn switching_energy(inputs: &EnergyInputs) -> SwitchingEnergy {
    let reset_j = 2.0 * inputs.c_me * inputs.v_reset * inputs.v_reset;
    let data_j = 2.0 * inputs.c_me * inputs.v_data * inputs.v_data;
    let gate_j = inputs.c_g * inputs.v_g * inputs.v_g;
    SwitchingEnergy {
        reset_j,
        data_j,
        gate_j,
        total_j: reset_j + data_j + gate_j,
    }
}

/// Itemized read-energy report.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReadEnergy {
    pub v_read: f64,
    /// Total divider resistance at the operating point, Ω.
    pub r_total: f64,
    pub divider_j: f64,
    pub gate_j: f64,
    pub total_j: f64,
    pub duration_s: f64,
}

/// Static read energy: divider dissipation over `duration` plus the
/// read-enable gate energy.
pub fn read_energy(gate: &GateInstance, duration: f64) -> Result<ReadEnergy, MeslError> {
    let read = &gate.read;
    let stack = |v: f64| -> f64 {
        match gate.devices.len() {
            1 => gate.devices[0].resistance(v),
            _ => gate.devices[0].resistance(v * 0.5) + gate.devices[1].resistance(v * 0.5),
        }
    };
    let v_node = solve_divider(|_| read.r_ref, stack, read.v_read)?;
    let r_total = read.r_ref + stack(v_node);
    let divider_j = read.v_read * read.v_read / r_total * duration;
    let gate_j = read.c_g * read.v_g * read.v_g;
    Ok(ReadEnergy {
        v_read: read.v_read,
        r_total,
        divider_j,
        gate_j,
        total_j: divider_j + gate_j,
        duration_s: duration,
    })
}

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

/// Write a trajectory as CSV with header `t_s,mx,my,mz`.
pub fn write_trajectory_csv<W: Write>(out: &mut W, outcome: &SimOutcome<f64>) -> std::io::Result<()> {
    writeln!(out, "t_s,mx,my,mz")?;
    for (t, m) in &outcome.trajectory {
        writeln!(out, "{:.6e},{:.9},{:.9},{:.9}", t, m.x, m.y, m.z)?;
    }
    Ok(())
}

/// Write a sweep curve as CSV with header `V,p_switch,ci_low,ci_high,trials`.
pub fn write_sweep_csv<W: Write>(out: &mut W, curve: &[SweepPoint]) -> std::io::Result<()> {
    writeln!(out, "V,p_switch,ci_low,ci_high,trials")?;
    for pt in curve {
        writeln!(
            out,
            "{:.6},{:.6},{:.6},{:.6},{}",
            pt.voltage, pt.p_switch, pt.ci_low, pt.ci_high, pt.trials
        )?;
    }
    Ok(())
}

/// Write a switching-time histogram as CSV: `bin_start_s,bin_end_s,count`.
pub fn write_tdist_csv<W: Write>(out: &mut W, stats: &TimeStats) -> std::io::Result<()> {
    writeln!(out, "bin_start_s,bin_end_s,count")?;
    for (lo, hi, n) in &stats.histogram {
        writeln!(out, "{:.6e},{:.6e},{}", lo, hi, n)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_interval_is_sane() {
        let (lo, hi) = wilson_ci(50, 100);
        assert!(lo < 0.5 && hi > 0.5);
        let (lo, hi) = wilson_ci(0, 100);
        assert!(lo.abs() < 1e-12);
        assert!(hi < 0.05);
        let (lo, hi) = wilson_ci(100, 100);
        assert!(lo > 0.95);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn switching_energy_terms() {
        let zero = switching_energy(&EnergyInputs {
            c_me: 4.5e-15,
            v_reset: 0.0,
            v_data: 0.0,
            c_g: 1e-16,
            v_g: 0.0,
        });
        assert_eq!(zero.total_j, 0.0);

        let base = EnergyInputs {
            c_me: 4.5e-15,
            v_reset: 0.5,
            v_data: 0.5,
            c_g: 1e-16,
            v_g: 1.0,
        };
        let e1 = switching_energy(&base);
        let e2 = switching_energy(&EnergyInputs {
            v_data: 1.0,
            ..base
        });
        // Doubling v_data quadruples the data term only.
        assert!((e2.data_j - 4.0 * e1.data_j).abs() < 1e-30);
        assert_eq!(e2.reset_j, e1.reset_j);
        assert_eq!(e2.gate_j, e1.gate_j);
        // Linear in capacitance.
        let e3 = switching_energy(&EnergyInputs {
            c_me: 9.0e-15,
            ..base
        });
        assert!((e3.reset_j - 2.0 * e1.reset_j).abs() < 1e-30);
    }
}
