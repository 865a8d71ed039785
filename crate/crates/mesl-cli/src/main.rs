//! `mesl`: command-line front end for the MESL device and circuit simulator.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mesl::characterize::{
    operating_voltage, read_energy, switching_energy, switching_probability_sweep,
    switching_time_distribution, write_sweep_csv, write_tdist_csv, write_trajectory_csv,
    SweepSpec, SwitchDrive,
};
use mesl::config::SimConfig;
use mesl::demag::demag_factors;
use mesl::error::MeslError;
use mesl::gates::{
    run_cascade, truth_table, CascadeSchedule, GateInstance, GateKind, LogicLevel, Stage,
};
use mesl::llg::tilt_toward_z;
use mesl::magnet::DriveWaveform;
use mesl::rng::trial_rng;
use mesl::{LlgSystemD, MagnetSpecD, Vec3d};

#[derive(Parser)]
#[command(name = "mesl", version, about = "Magneto-electric spin logic simulator")]
struct Cli {
    /// Configuration file (TOML). Missing keys fall back to defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Base RNG seed (overrides the configured seed).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory for all artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Monte Carlo trials (overrides the configured count).
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Temperature in K (overrides the configured value).
    #[arg(long, global = true)]
    temp: Option<f64>,

    /// Worker threads for ensembles (0 = all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Xnor,
    Nand,
    Nor,
}

impl From<KindArg> for GateKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Xnor => GateKind::Xnor,
            KindArg::Nand => GateKind::Nand,
            KindArg::Nor => GateKind::Nor,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DriveArg {
    Me,
    Stt,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a single switching trajectory and export it as CSV.
    Simulate {
        /// ME drive voltage; defaults to the configured data voltage.
        #[arg(long)]
        v_me: Option<f64>,
    },
    /// Switching probability versus ME voltage (Monte Carlo).
    Sweep,
    /// Switching-time distribution for ME or STT driving.
    Tdist {
        #[arg(long, value_enum, default_value = "me")]
        drive: DriveArg,
    },
    /// Exhaustive gate truth table with per-row success rates.
    TruthTable {
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Run the configured gate cascade over all input combinations.
    Cascade {
        /// Skip the global reset phase (demonstrates why reset is required).
        #[arg(long)]
        skip_reset: bool,
    },
    /// Itemized switching and read energy report.
    Energy,
    /// Demagnetization factors of the configured magnet.
    Demag,
}

#[derive(Serialize)]
struct ErrorPayload<'a> {
    error: &'a str,
    kind: &'a str,
    exit_code: i32,
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(&cli) {
        let kind = match &err {
            MeslError::InvalidGeometry(_) => "invalid_geometry",
            MeslError::InvalidState(_) => "invalid_state",
            MeslError::Config { .. } => "config",
            MeslError::Parse(_) => "parse",
            MeslError::NonConvergence { .. } => "non_convergence",
            MeslError::ReadDisturb { .. } => "read_disturb",
            MeslError::Schedule(_) => "schedule",
            MeslError::UnreliableStatistics(_) => "unreliable_statistics",
            MeslError::Io { .. } => "io",
        };
        let payload = ErrorPayload {
            error: &err.to_string(),
            kind,
            exit_code: err.exit_code(),
        };
        eprintln!("{}", serde_json::to_string(&payload).unwrap());
        std::process::exit(err.exit_code());
    }
}

fn load_config(cli: &Cli) -> Result<SimConfig, MeslError> {
    let mut cfg = match &cli.config {
        Some(path) => SimConfig::from_path(path)?,
        None => SimConfig::default_config(),
    };
    if let Some(seed) = cli.seed {
        cfg.sim.seed = seed;
        cfg.defaulted_keys.retain(|k| k != "sim.seed");
    }
    if let Some(trials) = cli.trials {
        if trials < 1 {
            return Err(MeslError::config("trials", "must be >= 1"));
        }
        cfg.sweep.trials = trials;
        cfg.defaulted_keys.retain(|k| k != "sweep.trials");
    }
    if let Some(temp) = cli.temp {
        let m = cfg.magnet;
        cfg.magnet = MagnetSpecD::new(
            m.length_x,
            m.width_y,
            m.thickness_z,
            m.saturation_magnetization,
            m.gilbert_damping,
            m.interface_anisotropy,
            m.gyromagnetic_ratio,
            temp,
        )?;
        cfg.defaulted_keys.retain(|k| k != "magnet.temperature");
    }
    if let Some(threads) = cli.threads {
        cfg.sim.threads = threads;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), MeslError> {
    let cfg = load_config(cli)?;
    if cfg.sim.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.sim.threads)
            .build_global()
            .map_err(|e| MeslError::config("threads", e.to_string()))?;
    }
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| MeslError::io(cli.out.display().to_string(), e))?;
    write_text(&cli.out.join("manifest.toml"), &cfg.to_manifest_toml())?;

    match &cli.command {
        Command::Simulate { v_me } => cmd_simulate(&cfg, &cli.out, v_me.unwrap_or(cfg.sim.v_data)),
        Command::Sweep => cmd_sweep(&cfg, &cli.out),
        Command::Tdist { drive } => cmd_tdist(&cfg, &cli.out, *drive),
        Command::TruthTable { kind } => cmd_truth_table(&cfg, &cli.out, (*kind).into()),
        Command::Cascade { skip_reset } => cmd_cascade(&cfg, &cli.out, *skip_reset),
        Command::Energy => cmd_energy(&cfg, &cli.out),
        Command::Demag => cmd_demag(&cfg, &cli.out),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), MeslError> {
    std::fs::write(path, text).map_err(|e| MeslError::io(path.display().to_string(), e))
}

fn create_out(path: &Path) -> Result<BufWriter<File>, MeslError> {
    Ok(BufWriter::new(File::create(path).map_err(|e| {
        MeslError::io(path.display().to_string(), e)
    })?))
}

fn cmd_simulate(cfg: &SimConfig, out: &Path, v_me: f64) -> Result<(), MeslError> {
    let system = LlgSystemD::new(cfg.magnet, cfg.oxide)?
        .with_stt_polarization(cfg.sim.stt_polarization);
    let mut m0 = -Vec3d::unit_x();
    if cfg.magnet.temperature == 0.0 && cfg.sim.tilt_deg > 0.0 {
        m0 = tilt_toward_z(m0, cfg.sim.tilt_deg);
    }
    let wf = DriveWaveform::pulse_then_settle(cfg.sim.pulse_width, v_me, cfg.sim.settle_time)?;
    let mut rng = trial_rng(cfg.sim.seed, 0);
    let outcome = system.simulate(
        m0,
        &wf,
        cfg.sim.dt,
        &mut rng,
        Vec3d::unit_x(),
        cfg.sim.record_every.max(1),
    )?;
    let path = out.join("trajectory.csv");
    let mut w = create_out(&path)?;
    write_trajectory_csv(&mut w, &outcome).map_err(|e| MeslError::io(path.display().to_string(), e))?;
    w.flush().map_err(|e| MeslError::io(path.display().to_string(), e))?;
    println!(
        "simulate: v_me = {v_me} V, switched = {}, t_switch = {}",
        outcome.switched,
        outcome
            .switching_time
            .map(|t| format!("{t:.4e} s"))
            .unwrap_or_else(|| "-".into()),
    );
    Ok(())
}

fn sweep_spec(cfg: &SimConfig) -> SweepSpec {
    SweepSpec {
        voltages: cfg.sweep.voltages.clone(),
        pulse_width: cfg.sim.pulse_width,
        // The sweep criterion is switching within the pulse, so no settle
        // interval is simulated.
        settle_time: 0.0,
        trials: cfg.sweep.trials,
        dt: cfg.sim.dt,
        base_seed: cfg.sim.seed,
    }
}

fn cmd_sweep(cfg: &SimConfig, out: &Path) -> Result<(), MeslError> {
    let curve = switching_probability_sweep(&cfg.magnet, &cfg.oxide, &sweep_spec(cfg))?;
    let path = out.join("sweep.csv");
    let mut w = create_out(&path)?;
    write_sweep_csv(&mut w, &curve).map_err(|e| MeslError::io(path.display().to_string(), e))?;
    w.flush().map_err(|e| MeslError::io(path.display().to_string(), e))?;
    for pt in &curve {
        println!(
            "V = {:5.2}  p = {:6.4}  ci = [{:6.4}, {:6.4}]  n = {}",
            pt.voltage, pt.p_switch, pt.ci_low, pt.ci_high, pt.trials
        );
    }
    match operating_voltage(&curve, cfg.sweep.p_min) {
        Some(v) => println!("operating voltage (p >= {}): {v} V", cfg.sweep.p_min),
        None => println!(
            "operating voltage (p >= {}): not reached on this grid",
            cfg.sweep.p_min
        ),
    }
    Ok(())
}

fn cmd_tdist(cfg: &SimConfig, out: &Path, drive: DriveArg) -> Result<(), MeslError> {
    let (drive, run, range) = match drive {
        DriveArg::Me => (
            SwitchDrive::Me { v_me: cfg.sim.v_data },
            cfg.sim.pulse_width,
            cfg.sim.pulse_width,
        ),
        DriveArg::Stt => (
            SwitchDrive::Stt {
                current_density: cfg.sim.stt_current_density,
            },
            cfg.sim.stt_run_duration,
            20e-9,
        ),
    };
    let stats = switching_time_distribution(
        &cfg.magnet,
        &cfg.oxide,
        drive,
        run,
        0.0,
        cfg.sim.dt,
        cfg.sweep.trials,
        cfg.sim.seed,
        cfg.sweep.bins,
        range,
    )?;
    let path = out.join("tdist.csv");
    let mut w = create_out(&path)?;
    write_tdist_csv(&mut w, &stats).map_err(|e| MeslError::io(path.display().to_string(), e))?;
    w.flush().map_err(|e| MeslError::io(path.display().to_string(), e))?;
    println!(
        "tdist: mean = {:.4e} s, std = {:.4e} s, cv = {:.4}, switched = {:.4}",
        stats.mean,
        stats.std,
        stats.coefficient_of_variation(),
        stats.switched_fraction
    );
    Ok(())
}

fn cmd_truth_table(cfg: &SimConfig, out: &Path, kind: GateKind) -> Result<(), MeslError> {
    let read = cfg.read_circuit_for(kind)?;
    let rows = truth_table(
        kind,
        cfg.magnet,
        cfg.oxide,
        cfg.mtj,
        read,
        &cfg.gate_env(),
        cfg.sweep.trials,
        cfg.sim.seed,
    )?;
    let path = out.join("truth_table.csv");
    let mut w = create_out(&path)?;
    let io_err = |e| MeslError::io(path.display().to_string(), e);
    writeln!(w, "a,b,expected,output,success_rate").map_err(io_err)?;
    for row in &rows {
        writeln!(
            w,
            "{},{},{},{},{:.6}",
            row.inputs[0].as_bool() as u8,
            row.inputs[1].as_bool() as u8,
            row.expected.as_bool() as u8,
            row.output.as_bool() as u8,
            row.success_rate
        )
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    println!("a b | out (expected)  success");
    for row in &rows {
        println!(
            "{} {} |  {}  ({})          {:.4}",
            row.inputs[0].as_bool() as u8,
            row.inputs[1].as_bool() as u8,
            row.output.as_bool() as u8,
            row.expected.as_bool() as u8,
            row.success_rate
        );
    }
    Ok(())
}

fn build_stages(cfg: &SimConfig) -> Result<Vec<Stage>, MeslError> {
    cfg.stages
        .iter()
        .enumerate()
        .map(|(i, st)| {
            let read = cfg.read_circuit_for(st.kind)?;
            Ok(Stage {
                gate: GateInstance::new(st.kind, cfg.magnet, cfg.oxide, cfg.mtj, read)?,
                inputs: st.inputs.clone(),
                name: format!("stage{}", i + 1),
            })
        })
        .collect()
}

fn cmd_cascade(cfg: &SimConfig, out: &Path, skip_reset: bool) -> Result<(), MeslError> {
    let n_inputs = cfg.terminals.len();
    let schedule = CascadeSchedule::uniform(
        cfg.stages.len(),
        -cfg.sim.v_reset.abs(),
        cfg.sim.pulse_width,
        cfg.pulse_gap,
    );
    let path = out.join("cascade.csv");
    let mut w = create_out(&path)?;
    let io_err = |e| MeslError::io(path.display().to_string(), e);
    writeln!(w, "t_s,node,value_V").map_err(io_err)?;

    println!(
        "{} | {}",
        cfg.terminals.join(" "),
        (1..=cfg.stages.len())
            .map(|i| format!("Out{i}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    let mut stages = build_stages(cfg)?;
    for combo in 0..(1u32 << n_inputs) {
        let inputs: Vec<LogicLevel> = (0..n_inputs)
            .map(|b| LogicLevel::from_bool(combo >> (n_inputs - 1 - b) & 1 == 1))
            .collect();
        // With reset every run starts clean; without it, state carries over,
        // which is exactly the failure mode the flag demonstrates.
        if !skip_reset {
            stages = build_stages(cfg)?;
        }
        let mut rng = trial_rng(cfg.sim.seed, combo as u64);
        let result = run_cascade(
            &mut stages,
            &schedule,
            &inputs,
            &cfg.gate_env(),
            &mut rng,
            skip_reset,
        )?;
        for ev in &result.events {
            writeln!(w, "{:.6e},{},{:.6}", ev.t, ev.node, ev.value_v).map_err(io_err)?;
        }
        println!(
            "{} | {}{}",
            inputs
                .iter()
                .map(|l| (l.as_bool() as u8).to_string())
                .collect::<Vec<_>>()
                .join(" "),
            result
                .outputs
                .iter()
                .map(|l| (l.as_bool() as u8).to_string())
                .collect::<Vec<_>>()
                .join("    "),
            if result.gate_events.is_empty() {
                String::new()
            } else {
                format!("   ({} write/reset events)", result.gate_events.len())
            }
        );
    }
    w.flush().map_err(io_err)?;
    Ok(())
}

#[derive(Serialize)]
struct EnergyReport {
    v_data: f64,
    v_reset: f64,
    c_me_f: f64,
    switching: mesl::characterize::SwitchingEnergy,
    read: mesl::characterize::ReadEnergy,
}

fn cmd_energy(cfg: &SimConfig, out: &Path) -> Result<(), MeslError> {
    let switching = switching_energy(&cfg.energy_inputs());
    let gate = GateInstance::new(
        GateKind::Xnor,
        cfg.magnet,
        cfg.oxide,
        cfg.mtj,
        cfg.read_circuit_for(GateKind::Xnor)?,
    )?;
    let read = read_energy(&gate, cfg.sim.pulse_width)?;
    let report = EnergyReport {
        v_data: cfg.sim.v_data,
        v_reset: cfg.sim.v_reset,
        c_me_f: cfg.oxide.capacitance(),
        switching,
        read,
    };
    let json = serde_json::to_string_pretty(&report).expect("serializable");
    write_text(&out.join("energy.json"), &json)?;
    println!("{json}");
    Ok(())
}

fn cmd_demag(cfg: &SimConfig, out: &Path) -> Result<(), MeslError> {
    let f = demag_factors(&cfg.magnet)?;
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "nxx": f.nxx,
        "nyy": f.nyy,
        "nzz": f.nzz,
    }))
    .unwrap();
    write_text(&out.join("demag.json"), &json)?;
    println!("{json}");
    Ok(())
}
