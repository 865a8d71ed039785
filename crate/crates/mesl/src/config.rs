//! Configuration ingestion: TOML sections with SI unit-suffix values
//! (`"2.5nm"`, `"500ps"`, `"0.5V"`), eager validation, defaults, and the
//! reproducibility manifest.

use std::fmt;
use std::path::Path;

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer};

use crate::error::MeslError;
use crate::gates::{calibrated_trip, GateEnv, GateKind, InputSource};
use crate::{consts, MagnetSpecD, MeOxideSpecD, MtjModelD, ReadCircuitD};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

// ---------------------------------------------------------------------------
// Unit-suffixed quantities
// ---------------------------------------------------------------------------

/// A physical value, given either as a bare number (SI) or as a string with
/// an SI prefix and unit, e.g. `"2.5nm"`, `"500ps"`, `"0.5V"`, `"5kOhm"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity(pub f64);

const UNIT_TOKENS: &[&str] = &[
    "A/m^2", "A/m2", "J/m^2", "J/m2", "A/m", "Ohm", "ohm", "Ω", "s/m", "m^2", "m2", "m", "s",
    "V", "K", "F", "T", "A",
];

fn prefix_multiplier(prefix: &str) -> Option<f64> {
    Some(match prefix {
        "" => 1.0,
        "f" => 1e-15,
        "p" => 1e-12,
        "n" => 1e-9,
        "u" | "µ" => 1e-6,
        "m" => 1e-3,
        "k" => 1e3,
        "M" => 1e6,
        "G" => 1e9,
        _ => return None,
    })
}

/// Parse `"<number><prefix><unit>"`. The unit token only anchors the prefix;
/// dimensions are checked by the per-key validation that follows.
pub fn parse_quantity(raw: &str) -> Result<f64, String> {
    let s = raw.trim();
    let split = s
        .char_indices()
        .find(|&(_, c)| !(c.is_ascii_digit() || "+-.eE".contains(c)))
        // A trailing exponent letter with digits after it belongs to the number.
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    // Walk back over an `e`/`E` that was actually the start of a unit.
    let (num_str, rest) = s.split_at(split);
    let value: f64 = num_str
        .trim()
        .parse()
        .map_err(|_| format!("`{raw}`: not a number"))?;
    let suffix = rest.trim();
    if suffix.is_empty() {
        return Ok(value);
    }
    for unit in UNIT_TOKENS {
        if let Some(prefix) = suffix.strip_suffix(unit) {
            // A prefixed pure area unit ("nm^2") squares the prefix; in
            // composite units ("J/m^2") the prefix binds linearly.
            let squared = matches!(*unit, "m^2" | "m2");
            if let Some(mult) = prefix_multiplier(prefix) {
                return Ok(value * if squared { mult * mult } else { mult });
            }
        }
    }
    Err(format!("`{raw}`: unrecognized unit suffix `{suffix}`"))
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Quantity(v)),
            Raw::Int(v) => Ok(Quantity(v as f64)),
            Raw::Text(s) => parse_quantity(&s).map(Quantity).map_err(DeError::custom),
        }
    }
}

// ---------------------------------------------------------------------------
// Raw TOML schema (all keys optional; unknown keys rejected)
// ---------------------------------------------------------------------------

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    magnet: RawMagnet,
    #[serde(default)]
    me_oxide: RawMeOxide,
    #[serde(default)]
    mtj: RawMtj,
    #[serde(default)]
    read_circuit: RawReadCircuit,
    #[serde(default)]
    sim: RawSim,
    #[serde(default)]
    sweep: RawSweep,
    #[serde(default)]
    netlist: RawNetlist,
    /// Emitted into manifests; ignored on re-parse.
    #[serde(default)]
    #[allow(dead_code)]
    manifest: RawManifest,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMagnet {
    length_x: Option<Quantity>,
    width_y: Option<Quantity>,
    thickness_z: Option<Quantity>,
    m_s: Option<Quantity>,
    alpha: Option<Quantity>,
    k_i: Option<Quantity>,
    gamma: Option<Quantity>,
    temperature: Option<Quantity>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeOxide {
    alpha_me: Option<Quantity>,
    t_me: Option<Quantity>,
    eps_me: Option<Quantity>,
    plate_area: Option<Quantity>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMtj {
    r_p0: Option<Quantity>,
    tmr0: Option<Quantity>,
    v_h: Option<Quantity>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReadCircuit {
    v_read: Option<Quantity>,
    r_ref: Option<Quantity>,
    inverter_trip: Option<Quantity>,
    v_out_high: Option<Quantity>,
    v_out_low: Option<Quantity>,
    c_g: Option<Quantity>,
    v_g: Option<Quantity>,
    v_switch_min: Option<Quantity>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSim {
    dt: Option<Quantity>,
    pulse_width: Option<Quantity>,
    settle_time: Option<Quantity>,
    v_data: Option<Quantity>,
    v_reset: Option<Quantity>,
    tilt_deg: Option<Quantity>,
    stt_polarization: Option<Quantity>,
    stt_current_density: Option<Quantity>,
    stt_run_duration: Option<Quantity>,
    seed: Option<u64>,
    record_every: Option<usize>,
    threads: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    voltages: Option<Vec<Quantity>>,
    v_start: Option<Quantity>,
    v_stop: Option<Quantity>,
    v_step: Option<Quantity>,
    trials: Option<usize>,
    p_min: Option<Quantity>,
    bins: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetlist {
    #[serde(default)]
    stages: Vec<RawStage>,
    pulse_gap: Option<Quantity>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStage {
    kind: String,
    inputs: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct RawManifest {
    tool_version: Option<String>,
    seed: Option<u64>,
    defaulted_keys: Option<Vec<String>>,
}

// ---------------------------------------------------------------------------
// Resolved configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadSettings {
    pub v_read: f64,
    /// None: derived as the geometric mean of the stack's P and AP resistance.
    pub r_ref: Option<f64>,
    /// None: derived from the gate kind's sizing rule.
    pub inverter_trip: Option<f64>,
    /// None: follows `sim.v_data`.
    pub v_out_high: Option<f64>,
    pub v_out_low: f64,
    pub c_g: f64,
    pub v_g: f64,
    pub v_switch_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    pub dt: f64,
    pub pulse_width: f64,
    pub settle_time: f64,
    pub v_data: f64,
    pub v_reset: f64,
    pub tilt_deg: f64,
    pub stt_polarization: f64,
    pub stt_current_density: f64,
    pub stt_run_duration: f64,
    pub seed: u64,
    pub record_every: usize,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub voltages: Vec<f64>,
    pub trials: usize,
    pub p_min: f64,
    pub bins: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageConfig {
    pub kind: GateKind,
    pub inputs: Vec<InputSource>,
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub magnet: MagnetSpecD,
    pub oxide: MeOxideSpecD,
    pub mtj: MtjModelD,
    pub read: ReadSettings,
    pub sim: SimSettings,
    pub sweep: SweepSettings,
    pub stages: Vec<StageConfig>,
    /// External terminal names, in wiring order.
    pub terminals: Vec<String>,
    pub pulse_gap: f64,
    /// Keys that fell back to defaults, reported in the manifest.
    pub defaulted_keys: Vec<String>,
}

/// Default operating voltage, V. Derived by the switching-probability sweep
/// with Table-default parameters: smallest default-grid voltage with
/// p >= 0.999 over 1000 trials for a 500 ps pulse (p = 0.998 at 40 V,
/// 1.000 at 44 V).
pub const DEFAULT_V_OP: f64 = 44.0;

/// Default STT current density, A/m². Calibrated so the mean thermal
/// switching time lands in the 5-10 ns range (8.97 ns at this value).
pub const DEFAULT_STT_J: f64 = 2.6e11;

macro_rules! take {
    ($defaults:ident, $raw:expr, $key:literal, $default:expr) => {
        match $raw {
            Some(q) => q.0,
            None => {
                $defaults.push($key.to_string());
                $default
            }
        }
    };
}

impl SimConfig {
    /// Parse and validate a configuration file. An empty file yields the full
    /// Table-default configuration.
    pub fn from_path(path: &Path) -> Result<Self, MeslError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MeslError::io(path.display().to_string(), e))?;
        Self::from_toml(&text)
    }

    pub fn default_config() -> Self {
        Self::from_toml("").expect("defaults are valid")
    }

    pub fn from_toml(text: &str) -> Result<Self, MeslError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| MeslError::Parse(e.to_string()))?;
        let mut defaulted = Vec::new();

        let m = &raw.magnet;
        let magnet = MagnetSpecD::new(
            take!(defaulted, m.length_x, "magnet.length_x", 112.5e-9),
            take!(defaulted, m.width_y, "magnet.width_y", 45e-9),
            take!(defaulted, m.thickness_z, "magnet.thickness_z", 2.5e-9),
            take!(defaulted, m.m_s, "magnet.m_s", 1257.3e3),
            take!(defaulted, m.alpha, "magnet.alpha", 0.03),
            take!(defaulted, m.k_i, "magnet.k_i", 1e-3),
            take!(defaulted, m.gamma, "magnet.gamma", consts::GAMMA_E),
            take!(defaulted, m.temperature, "magnet.temperature", 300.0),
        )?;

        let o = &raw.me_oxide;
        let oxide = MeOxideSpecD::new(
            take!(defaulted, o.alpha_me, "me_oxide.alpha_me", 0.15 / consts::C_LIGHT),
            take!(defaulted, o.t_me, "me_oxide.t_me", 5e-9),
            take!(defaulted, o.eps_me, "me_oxide.eps_me", 500.0),
            take!(
                defaulted,
                o.plate_area,
                "me_oxide.plate_area",
                magnet.length_x * magnet.width_y
            ),
        )?;

        let j = &raw.mtj;
        let mtj = MtjModelD::new(
            take!(defaulted, j.r_p0, "mtj.r_p0", 5e3),
            take!(defaulted, j.tmr0, "mtj.tmr0", 1.0),
            take!(defaulted, j.v_h, "mtj.v_h", 0.5),
        )?;

        let r = &raw.read_circuit;
        let read = ReadSettings {
            v_read: take!(defaulted, r.v_read, "read_circuit.v_read", 0.85),
            r_ref: r.r_ref.map(|q| q.0),
            inverter_trip: r.inverter_trip.map(|q| q.0),
            v_out_high: r.v_out_high.map(|q| q.0),
            v_out_low: take!(defaulted, r.v_out_low, "read_circuit.v_out_low", 0.0),
            c_g: take!(defaulted, r.c_g, "read_circuit.c_g", 1e-16),
            v_g: take!(defaulted, r.v_g, "read_circuit.v_g", 1.0),
            // Largest voltage with 500 ps switching probability < 1e-3
            // (2000 trials: p = 0 at 0.60 V, 0.006 at 0.65 V).
            v_switch_min: take!(
                defaulted,
                r.v_switch_min,
                "read_circuit.v_switch_min",
                0.6
            ),
        };
        if read.v_read <= 0.0 {
            return Err(MeslError::config("read_circuit.v_read", "must be > 0"));
        }
        if let Some(r_ref) = read.r_ref {
            if r_ref <= 0.0 {
                return Err(MeslError::config("read_circuit.r_ref", "must be > 0"));
            }
        }

        let s = &raw.sim;
        let sim = SimSettings {
            dt: take!(defaulted, s.dt, "sim.dt", 1e-13),
            pulse_width: take!(defaulted, s.pulse_width, "sim.pulse_width", 500e-12),
            settle_time: take!(defaulted, s.settle_time, "sim.settle_time", 1.5e-9),
            v_data: take!(defaulted, s.v_data, "sim.v_data", DEFAULT_V_OP),
            v_reset: take!(defaulted, s.v_reset, "sim.v_reset", DEFAULT_V_OP),
            tilt_deg: take!(defaulted, s.tilt_deg, "sim.tilt_deg", 1.0),
            stt_polarization: take!(defaulted, s.stt_polarization, "sim.stt_polarization", 0.5),
            stt_current_density: take!(
                defaulted,
                s.stt_current_density,
                "sim.stt_current_density",
                DEFAULT_STT_J
            ),
            stt_run_duration: take!(
                defaulted,
                s.stt_run_duration,
                "sim.stt_run_duration",
                40e-9
            ),
            seed: s.seed.unwrap_or_else(|| {
                defaulted.push("sim.seed".into());
                42
            }),
            record_every: s.record_every.unwrap_or_else(|| {
                defaulted.push("sim.record_every".into());
                10
            }),
            threads: s.threads.unwrap_or(0),
        };
        if sim.dt <= 0.0 || sim.dt > crate::llg::MAX_DT {
            return Err(MeslError::config(
                "sim.dt",
                format!("must lie in (0, {:e}] s", crate::llg::MAX_DT),
            ));
        }
        if sim.pulse_width <= 0.0 {
            return Err(MeslError::config("sim.pulse_width", "must be > 0"));
        }
        if sim.v_data <= 0.0 || sim.v_reset <= 0.0 {
            return Err(MeslError::config(
                "sim.v_data",
                "data/reset voltage magnitudes must be > 0",
            ));
        }

        let w = &raw.sweep;
        let voltages = match (&w.voltages, w.v_start, w.v_stop, w.v_step) {
            (Some(v), _, _, _) => v.iter().map(|q| q.0).collect::<Vec<_>>(),
            (None, Some(a), Some(b), Some(st)) => {
                if st.0 <= 0.0 || b.0 < a.0 {
                    return Err(MeslError::config(
                        "sweep.v_step",
                        "need v_step > 0 and v_stop >= v_start",
                    ));
                }
                let n = ((b.0 - a.0) / st.0).round() as usize;
                (0..=n).map(|i| a.0 + i as f64 * st.0).collect()
            }
            _ => {
                defaulted.push("sweep.voltages".into());
                // Spans the full 500 ps switching transition (22-42 V).
                (0..=12).map(|i| i as f64 * 4.0).collect()
            }
        };
        let sweep = SweepSettings {
            voltages,
            trials: w.trials.unwrap_or_else(|| {
                defaulted.push("sweep.trials".into());
                1000
            }),
            p_min: take!(defaulted, w.p_min, "sweep.p_min", 0.999),
            bins: w.bins.unwrap_or_else(|| {
                defaulted.push("sweep.bins".into());
                50
            }),
        };
        if sweep.voltages.is_empty() || sweep.voltages.windows(2).any(|x| x[0] > x[1]) {
            return Err(MeslError::config(
                "sweep.voltages",
                "must be non-empty and sorted ascending",
            ));
        }
        if sweep.trials < 1 {
            return Err(MeslError::config("sweep.trials", "must be >= 1"));
        }

        // Netlist: default is the two-XNOR cascade demo.
        let mut terminals: Vec<String> = Vec::new();
        let raw_stages: Vec<RawStage> = if raw.netlist.stages.is_empty() {
            defaulted.push("netlist.stages".into());
            vec![
                RawStage {
                    kind: "xnor".into(),
                    inputs: vec!["A".into(), "B".into()],
                },
                RawStage {
                    kind: "xnor".into(),
                    inputs: vec!["out1".into(), "C".into()],
                },
            ]
        } else {
            raw.netlist.stages
        };
        let mut stages = Vec::with_capacity(raw_stages.len());
        for (i, st) in raw_stages.iter().enumerate() {
            let kind = match st.kind.to_ascii_lowercase().as_str() {
                "xnor" => GateKind::Xnor,
                "nand" => GateKind::Nand,
                "nor" => GateKind::Nor,
                other => {
                    return Err(MeslError::config(
                        "netlist.stages.kind",
                        format!("unknown gate kind `{other}`"),
                    ))
                }
            };
            if st.inputs.len() != 2 {
                return Err(MeslError::config(
                    "netlist.stages.inputs",
                    format!("stage {i} must have exactly 2 inputs"),
                ));
            }
            let mut inputs = Vec::with_capacity(2);
            for name in &st.inputs {
                let lower = name.to_ascii_lowercase();
                if let Some(idx) = lower.strip_prefix("out").and_then(|n| n.parse::<usize>().ok())
                {
                    if idx == 0 || idx > i {
                        return Err(MeslError::config(
                            "netlist.stages.inputs",
                            format!("stage {i} wires from `{name}`: only earlier stages allowed"),
                        ));
                    }
                    inputs.push(InputSource::Stage(idx - 1));
                } else {
                    let pos = terminals.iter().position(|t| t == name).unwrap_or_else(|| {
                        terminals.push(name.clone());
                        terminals.len() - 1
                    });
                    inputs.push(InputSource::External(pos));
                }
            }
            stages.push(StageConfig { kind, inputs });
        }
        let pulse_gap = take!(defaulted, raw.netlist.pulse_gap, "netlist.pulse_gap", 100e-12);

        Ok(SimConfig {
            magnet,
            oxide,
            mtj,
            read,
            sim,
            sweep,
            stages,
            terminals,
            pulse_gap,
            defaulted_keys: defaulted,
        })
    }

    /// Reference resistance of the sense divider for a gate kind, defaulting
    /// to the geometric mean of the stack's P and AP resistance.
    pub fn r_ref_for(&self, kind: GateKind) -> f64 {
        if let Some(r) = self.read.r_ref {
            return r;
        }
        let per_mtj = (self.mtj.r_p0 * self.mtj.r_antiparallel(0.0)).sqrt();
        match kind {
            GateKind::Xnor => per_mtj,
            GateKind::Nand | GateKind::Nor => 2.0 * per_mtj,
        }
    }

    /// Fully resolved read circuit for a gate kind.
    pub fn read_circuit_for(&self, kind: GateKind) -> Result<ReadCircuitD, MeslError> {
        let r_ref = self.r_ref_for(kind);
        let trip = match self.read.inverter_trip {
            Some(t) => t,
            None => calibrated_trip(kind, &self.mtj, r_ref, self.read.v_read)?,
        };
        let circuit = ReadCircuitD {
            v_read: self.read.v_read,
            r_ref,
            inverter_trip: trip,
            v_out_high: self.read.v_out_high.unwrap_or(self.sim.v_data),
            v_out_low: self.read.v_out_low,
            c_g: self.read.c_g,
            v_g: self.read.v_g,
            v_switch_min: self.read.v_switch_min,
        };
        circuit.validate()?;
        Ok(circuit)
    }

    pub fn gate_env(&self) -> GateEnv {
        GateEnv {
            dt: self.sim.dt,
            pulse_width: self.sim.pulse_width,
            settle_time: self.sim.settle_time,
            v_data: self.sim.v_data,
            v_reset: self.sim.v_reset,
            tilt_deg: self.sim.tilt_deg,
        }
    }

    /// Serialize the fully resolved configuration (all values in SI units)
    /// plus provenance. Re-parsing the manifest yields an identical config.
    pub fn to_manifest_toml(&self) -> String {
        let mut out = String::new();
        use fmt::Write;
        let w = &mut out;
        writeln!(w, "[magnet]").unwrap();
        writeln!(w, "length_x = {:e}", self.magnet.length_x).unwrap();
        writeln!(w, "width_y = {:e}", self.magnet.width_y).unwrap();
        writeln!(w, "thickness_z = {:e}", self.magnet.thickness_z).unwrap();
        writeln!(w, "m_s = {:e}", self.magnet.saturation_magnetization).unwrap();
        writeln!(w, "alpha = {:e}", self.magnet.gilbert_damping).unwrap();
        writeln!(w, "k_i = {:e}", self.magnet.interface_anisotropy).unwrap();
        writeln!(w, "gamma = {:e}", self.magnet.gyromagnetic_ratio).unwrap();
        writeln!(w, "temperature = {:e}", self.magnet.temperature).unwrap();
        writeln!(w, "\n[me_oxide]").unwrap();
        writeln!(w, "alpha_me = {:e}", self.oxide.me_coefficient).unwrap();
        writeln!(w, "t_me = {:e}", self.oxide.oxide_thickness).unwrap();
        writeln!(w, "eps_me = {:e}", self.oxide.relative_permittivity).unwrap();
        writeln!(w, "plate_area = {:e}", self.oxide.plate_area).unwrap();
        writeln!(w, "\n[mtj]").unwrap();
        writeln!(w, "r_p0 = {:e}", self.mtj.r_p0).unwrap();
        writeln!(w, "tmr0 = {:e}", self.mtj.tmr0).unwrap();
        writeln!(w, "v_h = {:e}", self.mtj.v_h).unwrap();
        writeln!(w, "\n[read_circuit]").unwrap();
        writeln!(w, "v_read = {:e}", self.read.v_read).unwrap();
        if let Some(r) = self.read.r_ref {
            writeln!(w, "r_ref = {r:e}").unwrap();
        }
        if let Some(t) = self.read.inverter_trip {
            writeln!(w, "inverter_trip = {t:e}").unwrap();
        }
        if let Some(v) = self.read.v_out_high {
            writeln!(w, "v_out_high = {v:e}").unwrap();
        }
        writeln!(w, "v_out_low = {:e}", self.read.v_out_low).unwrap();
        writeln!(w, "c_g = {:e}", self.read.c_g).unwrap();
        writeln!(w, "v_g = {:e}", self.read.v_g).unwrap();
        writeln!(w, "v_switch_min = {:e}", self.read.v_switch_min).unwrap();
        writeln!(w, "\n[sim]").unwrap();
        writeln!(w, "dt = {:e}", self.sim.dt).unwrap();
        writeln!(w, "pulse_width = {:e}", self.sim.pulse_width).unwrap();
        writeln!(w, "settle_time = {:e}", self.sim.settle_time).unwrap();
        writeln!(w, "v_data = {:e}", self.sim.v_data).unwrap();
        writeln!(w, "v_reset = {:e}", self.sim.v_reset).unwrap();
        writeln!(w, "tilt_deg = {:e}", self.sim.tilt_deg).unwrap();
        writeln!(w, "stt_polarization = {:e}", self.sim.stt_polarization).unwrap();
        writeln!(w, "stt_current_density = {:e}", self.sim.stt_current_density).unwrap();
        writeln!(w, "stt_run_duration = {:e}", self.sim.stt_run_duration).unwrap();
        writeln!(w, "seed = {}", self.sim.seed).unwrap();
        writeln!(w, "record_every = {}", self.sim.record_every).unwrap();
        writeln!(w, "\n[sweep]").unwrap();
        let volts: Vec<String> = self.sweep.voltages.iter().map(|v| format!("{v:e}")).collect();
        writeln!(w, "voltages = [{}]", volts.join(", ")).unwrap();
        writeln!(w, "trials = {}", self.sweep.trials).unwrap();
        writeln!(w, "p_min = {:e}", self.sweep.p_min).unwrap();
        writeln!(w, "bins = {}", self.sweep.bins).unwrap();
        writeln!(w, "\n[netlist]").unwrap();
        writeln!(w, "pulse_gap = {:e}", self.pulse_gap).unwrap();
        for st in &self.stages {
            writeln!(w, "\n[[netlist.stages]]").unwrap();
            let kind = match st.kind {
                GateKind::Xnor => "xnor",
                GateKind::Nand => "nand",
                GateKind::Nor => "nor",
            };
            writeln!(w, "kind = \"{kind}\"").unwrap();
            let names: Vec<String> = st
                .inputs
                .iter()
                .map(|src| match src {
                    InputSource::External(k) => format!("\"{}\"", self.terminals[*k]),
                    InputSource::Stage(k) => format!("\"out{}\"", k + 1),
                })
                .collect();
            writeln!(w, "inputs = [{}]", names.join(", ")).unwrap();
        }
        writeln!(w, "\n[manifest]").unwrap();
        writeln!(w, "tool_version = \"{TOOL_VERSION}\"").unwrap();
        writeln!(w, "seed = {}", self.sim.seed).unwrap();
        let keys: Vec<String> = self
            .defaulted_keys
            .iter()
            .map(|k| format!("\"{k}\""))
            .collect();
        writeln!(w, "defaulted_keys = [{}]", keys.join(", ")).unwrap();
        out
    }

    /// Table-default ME capacitor energy inputs for the Eq-style estimate.
    pub fn energy_inputs(&self) -> crate::characterize::EnergyInputs {
        crate::characterize::EnergyInputs {
            c_me: self.oxide.capacitance(),
            v_reset: self.sim.v_reset,
            v_data: self.sim.v_data,
            c_g: self.read.c_g,
            v_g: self.read.v_g,
        }
    }
}

/// Per-key physical comparison, used by the manifest round-trip test.
impl PartialEq for SimConfig {
    fn eq(&self, other: &Self) -> bool {
        self.magnet == other.magnet
            && self.oxide == other.oxide
            && self.mtj == other.mtj
            && self.read == other.read
            && self.sim == other.sim
            && self.sweep == other.sweep
            && self.stages == other.stages
            && self.terminals == other.terminals
            && self.pulse_gap == other.pulse_gap
    }
}
