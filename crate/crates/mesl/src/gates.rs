//! MESL gate composition: XNOR/NAND/NOR devices, the global-reset protocol,
//! and domino-clocked cascades.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::MeslError;
use crate::llg::{tilt_toward_z, LlgSystem};
use crate::magnet::DriveWaveform;
use crate::mtj::{check_disturb, inverter_out, solve_divider};
use crate::rng::trial_rng;
use crate::{MagnetSpecD, MeOxideSpecD, MtjModelD, ReadCircuitD, Vec3d};

/// Digital level. Positive drive voltage writes a `1`, negative a `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicLevel {
    Zero,
    One,
}

impl LogicLevel {
    pub fn from_bool(b: bool) -> Self {
        if b {
            LogicLevel::One
        } else {
            LogicLevel::Zero
        }
    }

    pub fn as_bool(self) -> bool {
        self == LogicLevel::One
    }

    /// Drive voltage encoding the level: `+v_data` for 1, `-v_data` for 0.
    pub fn drive_voltage(self, v_data: f64) -> f64 {
        match self {
            LogicLevel::One => v_data,
            LogicLevel::Zero => -v_data,
        }
    }
}

/// One nano-magnet of a device, with its ME oxide and current state.
#[derive(Debug, Clone)]
pub struct Magnet {
    pub m: Vec3d,
    pub spec: MagnetSpecD,
    pub oxide: MeOxideSpecD,
    /// Fixed magnets never change during simulation.
    pub fixed: bool,
}

impl Magnet {
    pub fn free(spec: MagnetSpecD, oxide: MeOxideSpecD, m: Vec3d) -> Self {
        Magnet {
            m,
            spec,
            oxide,
            fixed: false,
        }
    }

    pub fn fixed_at(spec: MagnetSpecD, oxide: MeOxideSpecD, m: Vec3d) -> Self {
        Magnet {
            m,
            spec,
            oxide,
            fixed: true,
        }
    }
}

/// Four-terminal MESL device: two magnets around an MgO spacer.
#[derive(Debug, Clone)]
pub struct MeslDevice {
    pub top: Magnet,
    pub bottom: Magnet,
    pub mtj: MtjModelD,
}

impl MeslDevice {
    /// Relative angle between the two magnetizations, rad.
    pub fn angle(&self) -> f64 {
        self.top.m.angle_to(self.bottom.m)
    }

    /// Device resistance at bias `v`, always through the angle-dependent model.
    pub fn resistance(&self, v: f64) -> f64 {
        self.mtj.resistance(self.angle(), v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Xnor,
    Nand,
    Nor,
}

impl GateKind {
    pub fn eval(self, a: bool, b: bool) -> bool {
        match self {
            GateKind::Xnor => a == b,
            GateKind::Nand => !(a && b),
            GateKind::Nor => !(a || b),
        }
    }
}

/// Simulation parameters shared by all gate-level operations.
#[derive(Debug, Clone, Copy)]
pub struct GateEnv {
    /// Integration step, s.
    pub dt: f64,
    /// Write/reset pulse width, s.
    pub pulse_width: f64,
    /// Zero-drive settle interval appended after each pulse, s.
    pub settle_time: f64,
    /// Data voltage magnitude, V.
    pub v_data: f64,
    /// Reset voltage magnitude, V (applied as a negative pulse).
    pub v_reset: f64,
    /// Initial tilt for deterministic (T = 0) runs, degrees.
    pub tilt_deg: f64,
}

/// A gate: one device (XNOR) or two in series (NAND/NOR) plus its read path.
#[derive(Debug, Clone)]
pub struct GateInstance {
    pub kind: GateKind,
    pub devices: Vec<MeslDevice>,
    pub read: ReadCircuitD,
}

/// Reference node voltages of the three series-stack resistance classes,
/// used for NAND/NOR inverter sizing.
#[derive(Debug, Clone, Copy)]
pub struct StackNodeVoltages {
    /// Both stacks parallel (2 R_P).
    pub both_p: f64,
    /// One stack anti-parallel (R_P + R_AP).
    pub mixed: f64,
    /// Both stacks anti-parallel (2 R_AP).
    pub both_ap: f64,
}

/// Solve the divider node voltage for a series stack of two MTJs with fixed
/// angles. Bias across the stack splits evenly between the two junctions.
fn stack_node_voltage(
    mtj: &MtjModelD,
    r_ref: f64,
    v_read: f64,
    theta1: f64,
    theta2: f64,
) -> Result<f64, MeslError> {
    solve_divider(
        |_| r_ref,
        |v| mtj.resistance(theta1, v * 0.5) + mtj.resistance(theta2, v * 0.5),
        v_read,
    )
}

pub fn stack_node_voltages(
    mtj: &MtjModelD,
    r_ref: f64,
    v_read: f64,
) -> Result<StackNodeVoltages, MeslError> {
    use std::f64::consts::PI;
    Ok(StackNodeVoltages {
        both_p: stack_node_voltage(mtj, r_ref, v_read, 0.0, 0.0)?,
        mixed: stack_node_voltage(mtj, r_ref, v_read, 0.0, PI)?,
        both_ap: stack_node_voltage(mtj, r_ref, v_read, PI, PI)?,
    })
}

/// Midpoint trip level implementing the gate's sizing rule.
///
/// NAND: between the mixed and both-AP node voltages (output low only when
/// both stacks are anti-parallel). NOR: between both-P and mixed (output high
/// only when both stacks are parallel). XNOR keeps the configured trip.
pub fn calibrated_trip(
    kind: GateKind,
    mtj: &MtjModelD,
    r_ref: f64,
    v_read: f64,
) -> Result<f64, MeslError> {
    match kind {
        GateKind::Xnor => Ok(v_read * 0.5),
        GateKind::Nand => {
            let v = stack_node_voltages(mtj, r_ref, v_read)?;
            Ok(0.5 * (v.mixed + v.both_ap))
        }
        GateKind::Nor => {
            let v = stack_node_voltages(mtj, r_ref, v_read)?;
            Ok(0.5 * (v.both_p + v.mixed))
        }
    }
}

impl GateInstance {
    /// Build a gate with all magnets in the reset (-x) state.
    ///
    /// `read.inverter_trip` is taken as given; use [`calibrated_trip`] to
    /// derive the sizing-rule default.
    pub fn new(
        kind: GateKind,
        magnet: MagnetSpecD,
        oxide: MeOxideSpecD,
        mtj: MtjModelD,
        read: ReadCircuitD,
    ) -> Result<Self, MeslError> {
        read.validate()?;
        let minus_x = -Vec3d::unit_x();
        let devices = match kind {
            GateKind::Xnor => vec![MeslDevice {
                top: Magnet::free(magnet, oxide, minus_x),
                bottom: Magnet::free(magnet, oxide, minus_x),
                mtj,
            }],
            GateKind::Nand | GateKind::Nor => {
                let dev = || MeslDevice {
                    top: Magnet::free(magnet, oxide, minus_x),
                    bottom: Magnet::fixed_at(magnet, oxide, minus_x),
                    mtj,
                };
                vec![dev(), dev()]
            }
        };
        Ok(GateInstance {
            kind,
            devices,
            read,
        })
    }

    /// The input magnets, in input order (A, B).
    fn input_magnets_mut(&mut self) -> Vec<&mut Magnet> {
        match self.kind {
            GateKind::Xnor => {
                let dev = &mut self.devices[0];
                vec![&mut dev.top, &mut dev.bottom]
            }
            GateKind::Nand | GateKind::Nor => self
                .devices
                .iter_mut()
                .map(|d| &mut d.top)
                .collect(),
        }
    }

    fn free_magnets_mut(&mut self) -> Vec<&mut Magnet> {
        let mut out = Vec::new();
        for dev in &mut self.devices {
            if !dev.top.fixed {
                out.push(&mut dev.top);
            }
            if !dev.bottom.fixed {
                out.push(&mut dev.bottom);
            }
        }
        out
    }

    /// Snapshot of all magnet states, for non-destructive-read checks.
    pub fn magnet_states(&self) -> Vec<Vec3d> {
        self.devices
            .iter()
            .flat_map(|d| [d.top.m, d.bottom.m])
            .collect()
    }
}

/// Events reported by gate-level operations.
#[derive(Debug, Clone, PartialEq)]
pub enum GateEvent {
    ResetFailure { magnet: usize, m_x: f64 },
    WriteFailure { input: usize, m_x: f64 },
}

/// Drive one magnet with a voltage pulse followed by a settle interval.
fn drive_magnet(
    magnet: &mut Magnet,
    v_me: f64,
    env: &GateEnv,
    rng: &mut ChaCha8Rng,
) -> Result<f64, MeslError> {
    if magnet.fixed {
        return Ok(magnet.m.x);
    }
    let sys = LlgSystem::new(magnet.spec, magnet.oxide)?;
    let mut m0 = magnet.m;
    if magnet.spec.temperature == 0.0 && env.tilt_deg > 0.0 {
        m0 = tilt_toward_z(m0, env.tilt_deg);
    }
    let wf = DriveWaveform::pulse_then_settle(env.pulse_width, v_me, env.settle_time)?;
    let target = if v_me >= 0.0 {
        Vec3d::unit_x()
    } else {
        -Vec3d::unit_x()
    };
    let out = sys.simulate(m0, &wf, env.dt, rng, target, 0)?;
    magnet.m = out.final_m;
    Ok(out.final_m.x)
}

/// Global reset: drive every free magnet to -x with a negative pulse.
///
/// Returns reset-failure events for magnets that did not reach `m_x <= -0.9`.
pub fn apply_reset(
    gate: &mut GateInstance,
    v_reset: f64,
    duration: f64,
    env: &GateEnv,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<GateEvent>, MeslError> {
    if v_reset >= 0.0 {
        return Err(MeslError::Schedule(format!(
            "reset voltage must be negative, got {v_reset} V"
        )));
    }
    if duration < env.pulse_width {
        return Err(MeslError::Schedule(format!(
            "reset duration {duration} s is shorter than the switching pulse {} s",
            env.pulse_width
        )));
    }
    let reset_env = GateEnv {
        pulse_width: duration,
        ..*env
    };
    let mut events = Vec::new();
    for (i, magnet) in gate.free_magnets_mut().into_iter().enumerate() {
        let m_x = drive_magnet(magnet, v_reset, &reset_env, rng)?;
        if m_x > -0.9 {
            events.push(GateEvent::ResetFailure { magnet: i, m_x });
        }
    }
    Ok(events)
}

/// Write logic levels onto the gate's input magnets.
pub fn write_inputs(
    gate: &mut GateInstance,
    levels: &[LogicLevel],
    env: &GateEnv,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<GateEvent>, MeslError> {
    let v_data = env.v_data;
    let mut events = Vec::new();
    let inputs = gate.input_magnets_mut();
    if levels.len() != inputs.len() {
        return Err(MeslError::Schedule(format!(
            "gate expects {} inputs, got {} levels",
            inputs.len(),
            levels.len()
        )));
    }
    for (i, (magnet, level)) in inputs.into_iter().zip(levels).enumerate() {
        let m_x = drive_magnet(magnet, level.drive_voltage(v_data), env, rng)?;
        let expected = match level {
            LogicLevel::One => m_x >= 0.9,
            LogicLevel::Zero => m_x <= -0.9,
        };
        if !expected {
            events.push(GateEvent::WriteFailure { input: i, m_x });
        }
    }
    Ok(events)
}

/// Outcome of one read: logic level plus the sensed node voltage.
#[derive(Debug, Clone, Copy)]
pub struct ReadOutcome {
    pub level: LogicLevel,
    pub v_node: f64,
    pub v_out: f64,
}

/// Sense the gate. Purely electrical: magnet states are never touched, and
/// the disturb guard is asserted on the sensed node voltage.
pub fn read_gate(gate: &GateInstance) -> Result<ReadOutcome, MeslError> {
    let read = &gate.read;
    let v_node = match gate.kind {
        GateKind::Xnor => {
            let dev = &gate.devices[0];
            solve_divider(|_| read.r_ref, |v| dev.resistance(v), read.v_read)?
        }
        GateKind::Nand | GateKind::Nor => {
            let (d1, d2) = (&gate.devices[0], &gate.devices[1]);
            solve_divider(
                |_| read.r_ref,
                |v| d1.resistance(v * 0.5) + d2.resistance(v * 0.5),
                read.v_read,
            )?
        }
    };
    if !check_disturb(v_node, read) {
        return Err(MeslError::ReadDisturb {
            v_node,
            v_switch_min: read.v_switch_min,
        });
    }
    let v_out = inverter_out(v_node, read);
    let level = if v_out > 0.5 * (read.v_out_high + read.v_out_low) {
        LogicLevel::One
    } else {
        LogicLevel::Zero
    };
    Ok(ReadOutcome {
        level,
        v_node,
        v_out,
    })
}

// ---------------------------------------------------------------------------
// Cascades
// ---------------------------------------------------------------------------

/// Where a stage input comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputSource {
    /// External terminal, indexed into the cascade input vector.
    External(usize),
    /// Output of an earlier stage.
    Stage(usize),
}

#[derive(Debug, Clone)]
pub struct Stage {
    pub gate: GateInstance,
    pub inputs: Vec<InputSource>,
    pub name: String,
}

/// Reset/data/evaluate pulse timeline.
#[derive(Debug, Clone)]
pub struct CascadeSchedule {
    /// Reset level, V (must be negative).
    pub v_reset: f64,
    /// Reset pulse duration, s.
    pub reset_duration: f64,
    /// Data phase duration, s.
    pub data_duration: f64,
    /// Evaluate pulses, ordered by stage depth: (stage index, start, duration).
    pub evaluate: Vec<(usize, f64, f64)>,
}

impl CascadeSchedule {
    /// Uniform schedule: reset, data, then one evaluate pulse per stage.
    pub fn uniform(n_stages: usize, v_reset: f64, pulse: f64, gap: f64) -> Self {
        let reset_duration = pulse;
        let data_start = reset_duration + gap;
        let data_duration = pulse;
        let eval_start = data_start + data_duration + gap;
        let evaluate = (0..n_stages)
            .map(|i| (i, eval_start + i as f64 * (pulse + gap), pulse))
            .collect();
        CascadeSchedule {
            v_reset,
            reset_duration,
            data_duration,
            evaluate,
        }
    }
}

/// One entry of the cascade event log.
#[derive(Debug, Clone)]
pub struct NodeEvent {
    pub t: f64,
    pub node: String,
    pub value_v: f64,
}

#[derive(Debug, Clone)]
pub struct CascadeResult {
    /// Final logic level of each stage, in stage order.
    pub outputs: Vec<LogicLevel>,
    /// Per-stage evaluation timestamps.
    pub evaluated_at: Vec<f64>,
    /// Voltage events on named nodes.
    pub events: Vec<NodeEvent>,
    /// Write/reset failures observed during the run.
    pub gate_events: Vec<GateEvent>,
}

fn stage_depth(stages: &[Stage], idx: usize) -> usize {
    stages[idx]
        .inputs
        .iter()
        .map(|s| match s {
            InputSource::External(_) => 0,
            InputSource::Stage(k) => stage_depth(stages, *k) + 1,
        })
        .max()
        .unwrap_or(0)
}

/// Run a cascade: global reset, input writes, then domino-style evaluation.
///
/// `skip_reset` preserves the magnet states from a previous run; correct
/// operation requires the reset, and skipping it exists to demonstrate that.
pub fn run_cascade(
    stages: &mut [Stage],
    schedule: &CascadeSchedule,
    inputs: &[LogicLevel],
    env: &GateEnv,
    rng: &mut ChaCha8Rng,
    skip_reset: bool,
) -> Result<CascadeResult, MeslError> {
    // Wiring must be acyclic and reference earlier stages only.
    for (i, stage) in stages.iter().enumerate() {
        for src in &stage.inputs {
            match src {
                InputSource::Stage(k) if *k >= i => {
                    return Err(MeslError::Schedule(format!(
                        "stage {i} wires input from stage {k}: wiring must be acyclic \
                         and reference earlier stages"
                    )));
                }
                InputSource::External(k) if *k >= inputs.len() => {
                    return Err(MeslError::Schedule(format!(
                        "stage {i} references external input {k}, only {} provided",
                        inputs.len()
                    )));
                }
                _ => {}
            }
        }
    }
    // Evaluate pulses: one per stage, disjoint in time, ordered by depth.
    if schedule.evaluate.len() != stages.len() {
        return Err(MeslError::Schedule(format!(
            "schedule has {} evaluate pulses for {} stages",
            schedule.evaluate.len(),
            stages.len()
        )));
    }
    let mut last_end = f64::NEG_INFINITY;
    let mut last_depth = 0usize;
    for &(stage_idx, start, duration) in &schedule.evaluate {
        if stage_idx >= stages.len() {
            return Err(MeslError::Schedule(format!(
                "evaluate pulse targets unknown stage {stage_idx}"
            )));
        }
        if start < last_end {
            return Err(MeslError::Schedule(
                "evaluate pulses must be disjoint in time".into(),
            ));
        }
        let depth = stage_depth(stages, stage_idx);
        if depth < last_depth {
            return Err(MeslError::Schedule(
                "evaluate pulses must be ordered by stage depth".into(),
            ));
        }
        last_end = start + duration;
        last_depth = depth;
    }

    let mut events = Vec::new();
    let mut gate_events = Vec::new();

    // Phase 1: global reset on every input and intermediate terminal.
    if !skip_reset {
        for (i, stage) in stages.iter_mut().enumerate() {
            let evs = apply_reset(
                &mut stage.gate,
                schedule.v_reset,
                schedule.reset_duration,
                env,
                rng,
            )?;
            gate_events.extend(evs);
            events.push(NodeEvent {
                t: 0.0,
                node: format!("G{}", i + 1),
                value_v: schedule.v_reset,
            });
        }
        for (k, _) in inputs.iter().enumerate() {
            events.push(NodeEvent {
                t: 0.0,
                node: format!("in{k}"),
                value_v: schedule.v_reset,
            });
        }
    }

    // Phase 2: data. Write every externally wired input magnet.
    let data_start = schedule.reset_duration;
    for stage in stages.iter_mut() {
        let sources = stage.inputs.clone();
        let input_magnets = stage.gate.input_magnets_mut();
        for ((i, magnet), src) in input_magnets.into_iter().enumerate().zip(&sources) {
            if let InputSource::External(k) = src {
                let level = inputs[*k];
                let v = level.drive_voltage(env.v_data);
                let m_x = drive_magnet(magnet, v, env, rng)?;
                let ok = if level.as_bool() { m_x >= 0.9 } else { m_x <= -0.9 };
                if !ok {
                    gate_events.push(GateEvent::WriteFailure { input: i, m_x });
                }
                events.push(NodeEvent {
                    t: data_start,
                    node: format!("in{k}"),
                    value_v: v,
                });
            }
        }
    }

    // Phase 3: domino evaluation. A high output writes the downstream input
    // magnet; a zero output leaves it in the reset state.
    let mut outputs: Vec<Option<LogicLevel>> = vec![None; stages.len()];
    let mut evaluated_at = vec![0.0; stages.len()];
    for &(stage_idx, start, _duration) in &schedule.evaluate {
        let outcome = read_gate(&stages[stage_idx].gate)?;
        outputs[stage_idx] = Some(outcome.level);
        evaluated_at[stage_idx] = start;
        events.push(NodeEvent {
            t: start,
            node: format!("V{}", stage_idx + 1),
            value_v: stages[stage_idx].gate.read.v_read,
        });
        events.push(NodeEvent {
            t: start,
            node: format!("Out{}", stage_idx + 1),
            value_v: outcome.v_out,
        });

        // Propagate to downstream stages wired to this output.
        let high = outcome.level == LogicLevel::One;
        for later in stage_idx + 1..stages.len() {
            let sources = stages[later].inputs.clone();
            let input_magnets = stages[later].gate.input_magnets_mut();
            for (magnet, src) in input_magnets.into_iter().zip(&sources) {
                if *src == InputSource::Stage(stage_idx) && high {
                    let m_x = drive_magnet(magnet, env.v_data, env, rng)?;
                    if m_x < 0.9 {
                        gate_events.push(GateEvent::WriteFailure { input: 0, m_x });
                    }
                }
            }
        }
    }

    Ok(CascadeResult {
        outputs: outputs.into_iter().map(|o| o.expect("all stages evaluated")).collect(),
        evaluated_at,
        events,
        gate_events,
    })
}

// ---------------------------------------------------------------------------
// Truth tables
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct TruthRow {
    pub inputs: Vec<LogicLevel>,
    /// Boolean reference output.
    pub expected: LogicLevel,
    /// Fraction of trials whose read matched the reference.
    pub success_rate: f64,
    /// Output observed in the majority of trials.
    pub output: LogicLevel,
}

/// Exhaustive truth table of a single gate over `trials` Monte Carlo trials
/// per input row (reset, write, read per trial).
///
/// Per-trial RNG streams are keyed by `(row, trial)` so results are
/// independent of execution order.
pub fn truth_table(
    kind: GateKind,
    magnet: MagnetSpecD,
    oxide: MeOxideSpecD,
    mtj: MtjModelD,
    read: ReadCircuitD,
    env: &GateEnv,
    trials: usize,
    base_seed: u64,
) -> Result<Vec<TruthRow>, MeslError> {
    assert!(trials >= 1);
    let combos: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];
    let mut rows = Vec::with_capacity(4);
    for (row, &(a, b)) in combos.iter().enumerate() {
        let levels = [LogicLevel::from_bool(a), LogicLevel::from_bool(b)];
        let expected = LogicLevel::from_bool(kind.eval(a, b));
        let results: Result<Vec<LogicLevel>, MeslError> = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = trial_rng(base_seed, (row * trials + trial) as u64);
                let mut gate = GateInstance::new(kind, magnet, oxide, mtj, read)?;
                apply_reset(&mut gate, -env.v_reset, env.pulse_width, env, &mut rng)?;
                write_inputs(&mut gate, &levels, env, &mut rng)?;
                Ok(read_gate(&gate)?.level)
            })
            .collect();
        let results = results?;
        let matches = results.iter().filter(|&&l| l == expected).count();
        let ones = results.iter().filter(|&&l| l == LogicLevel::One).count();
        rows.push(TruthRow {
            inputs: levels.to_vec(),
            expected,
            success_rate: matches as f64 / trials as f64,
            output: LogicLevel::from_bool(2 * ones >= trials),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_kinds_match_boolean_reference() {
        assert!(GateKind::Xnor.eval(true, true));
        assert!(!GateKind::Xnor.eval(true, false));
        assert!(GateKind::Nand.eval(false, true));
        assert!(!GateKind::Nand.eval(true, true));
        assert!(GateKind::Nor.eval(false, false));
        assert!(!GateKind::Nor.eval(false, true));
    }

    #[test]
    fn logic_level_voltage_encoding() {
        assert_eq!(LogicLevel::One.drive_voltage(0.7), 0.7);
        assert_eq!(LogicLevel::Zero.drive_voltage(0.7), -0.7);
    }
}
