//! Acceptance suite. Each test prints one `ACCEPTANCE n: ... PASS/FAIL` line
//! (visible with `--nocapture`, or automatically on failure) and asserts the
//! criterion.

use std::sync::OnceLock;

use mesl::characterize::{
    operating_voltage, read_energy, switching_energy, switching_probability_sweep,
    switching_time_distribution, EnergyInputs, SweepPoint, SweepSpec, SwitchDrive,
};
use mesl::consts;
use mesl::demag::demag_factors_for;
use mesl::fields;
use mesl::gates::{
    calibrated_trip, run_cascade, truth_table, CascadeSchedule, GateEnv, GateInstance, GateKind,
    InputSource, LogicLevel, Stage,
};
use mesl::magnet::{DriveSegment, DriveWaveform};
use mesl::rng::trial_rng;
use mesl::{LlgSystemD, MagnetSpecD, MeOxideSpecD, MtjModelD, ReadCircuitD, Vec3d};

const V_OP_GRID_STEP: f64 = 4.0;
const PULSE: f64 = 500e-12;
const DT: f64 = 1e-13;

fn table_magnet(temperature: f64) -> MagnetSpecD {
    MagnetSpecD::new(
        112.5e-9,
        45e-9,
        2.5e-9,
        1257.3e3,
        0.03,
        1e-3,
        consts::GAMMA_E,
        temperature,
    )
    .unwrap()
}

fn table_oxide() -> MeOxideSpecD {
    MeOxideSpecD::new(0.15 / consts::C_LIGHT, 5e-9, 500.0, 112.5e-9 * 45e-9).unwrap()
}

fn table_mtj() -> MtjModelD {
    MtjModelD::new(5e3, 1.0, 0.5).unwrap()
}

fn read_circuit(kind: GateKind) -> ReadCircuitD {
    let mtj = table_mtj();
    let per = (mtj.r_p0 * mtj.r_antiparallel(0.0)).sqrt();
    let r_ref = match kind {
        GateKind::Xnor => per,
        _ => 2.0 * per,
    };
    let v_read = 0.85;
    ReadCircuitD {
        v_read,
        r_ref,
        inverter_trip: calibrated_trip(kind, &mtj, r_ref, v_read).unwrap(),
        v_out_high: 44.0,
        v_out_low: 0.0,
        c_g: 1e-16,
        v_g: 1.0,
        v_switch_min: 0.6,
    }
}

fn gate_env(v: f64) -> GateEnv {
    GateEnv {
        dt: DT,
        pulse_width: PULSE,
        settle_time: 1.5e-9,
        v_data: v,
        v_reset: v,
        tilt_deg: 1.0,
    }
}

fn report(n: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {n}: {name}: {} {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

// ---------------------------------------------------------------------------
// 1. Demag factors versus a brute-force quadrature oracle
// ---------------------------------------------------------------------------

/// Panel-composite Gauss-Legendre nodes over [-h/2, h/2].
fn gl_nodes(h: f64, panels: usize) -> Vec<(f64, f64)> {
    // 10-point Gauss-Legendre (node, weight) pairs on [-1, 1].
    let base: [(f64, f64); 10] = [
        (-0.9739065285171717, 0.0666713443086881),
        (-0.8650633666889845, 0.1494513491505806),
        (-0.6794095682990244, 0.2190863625159820),
        (-0.4333953941292472, 0.2692667193099963),
        (-0.1488743389816312, 0.2955242247147529),
        (0.1488743389816312, 0.2955242247147529),
        (0.4333953941292472, 0.2692667193099963),
        (0.6794095682990244, 0.2190863625159820),
        (0.8650633666889845, 0.1494513491505806),
        (0.9739065285171717, 0.0666713443086881),
    ];
    let w_panel = h / panels as f64;
    let mut out = Vec::with_capacity(panels * 10);
    for p in 0..panels {
        let lo = -0.5 * h + p as f64 * w_panel;
        let mid = lo + 0.5 * w_panel;
        for &(x, w) in &base {
            out.push((mid + 0.5 * w_panel * x, 0.5 * w_panel * w));
        }
    }
    out
}

/// Solid angle of the rectangle [y1,y2]x[z1,z2] at perpendicular distance `d`.
fn rect_solid_angle(d: f64, y1: f64, y2: f64, z1: f64, z2: f64) -> f64 {
    let f = |y: f64, z: f64| (y * z).atan2(d * (d * d + y * y + z * z).sqrt());
    f(y2, z2) - f(y1, z2) - f(y2, z1) + f(y1, z1)
}

/// Brute-force Nxx for a prism (la, lb, lc): volume average of the solid
/// angle subtended by the two charged x-faces, divided by 4 pi.
fn oracle_nxx(la: f64, lb: f64, lc: f64) -> f64 {
    let xs = gl_nodes(la, 6);
    let ys = gl_nodes(lb, 6);
    let zs = gl_nodes(lc, 6);
    let mut acc = 0.0;
    for &(x, wx) in &xs {
        for &(y, wy) in &ys {
            for &(z, wz) in &zs {
                let omega = rect_solid_angle(
                    la / 2.0 - x,
                    -lb / 2.0 - y,
                    lb / 2.0 - y,
                    -lc / 2.0 - z,
                    lc / 2.0 - z,
                ) + rect_solid_angle(
                    la / 2.0 + x,
                    -lb / 2.0 - y,
                    lb / 2.0 - y,
                    -lc / 2.0 - z,
                    lc / 2.0 - z,
                );
                acc += wx * wy * wz * omega;
            }
        }
    }
    acc / (4.0 * std::f64::consts::PI * la * lb * lc)
}

#[test]
fn acceptance_01_demag_oracle() {
    let (lx, ly, lz) = (112.5e-9, 45e-9, 2.5e-9);
    let f = demag_factors_for(lx, ly, lz).unwrap();
    let oracle = (
        oracle_nxx(lx, ly, lz),
        oracle_nxx(ly, lz, lx),
        oracle_nxx(lz, lx, ly),
    );
    let d = (
        (f.nxx - oracle.0).abs(),
        (f.nyy - oracle.1).abs(),
        (f.nzz - oracle.2).abs(),
    );
    let sum_err = (f.sum() - 1.0).abs();
    let pass = d.0 <= 1e-4 && d.1 <= 1e-4 && d.2 <= 1e-4 && sum_err <= 1e-9;
    report(
        1,
        "demag closed form vs quadrature oracle",
        pass,
        &format!(
            "(|d| = {:.2e}/{:.2e}/{:.2e}, |sum-1| = {:.2e})",
            d.0, d.1, d.2, sum_err
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------
// 2. Larmor precession at alpha = 0
// ---------------------------------------------------------------------------

#[test]
fn acceptance_02_larmor_frequency() {
    // Cube geometry (isotropic demag exerts no torque), no interface
    // anisotropy, alpha = 0: pure precession around the ME field.
    let magnet =
        MagnetSpecD::new(10e-9, 10e-9, 10e-9, 1257.3e3, 0.0, 0.0, consts::GAMMA_E, 0.0).unwrap();
    let oxide = table_oxide();
    let h_target = 5e4; // A/m
    let v_me = h_target * consts::MU_0 * oxide.oxide_thickness / oxide.me_coefficient;
    let f_expected = consts::GAMMA_E * consts::MU_0 * h_target / (2.0 * std::f64::consts::PI);

    let sys = LlgSystemD::new(magnet, oxide).unwrap();
    let dt = 1e-14;
    let duration = 10.0 / f_expected;
    let wf = DriveWaveform::new(vec![DriveSegment::me(duration, v_me)]).unwrap();
    let mut rng = trial_rng(0, 0);
    let out = sys
        .simulate(Vec3d::unit_z(), &wf, dt, &mut rng, Vec3d::unit_x(), 1)
        .unwrap();

    // Accumulated phase of (m_y, m_z) around the +x axis.
    let mut phase = 0.0;
    let mut prev = f64::atan2(out.trajectory[0].1.y, out.trajectory[0].1.z);
    for (_, m) in &out.trajectory[1..] {
        let cur = f64::atan2(m.y, m.z);
        let mut d = cur - prev;
        if d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        } else if d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        phase += d;
        prev = cur;
    }
    let t_total = out.trajectory.last().unwrap().0;
    let f_measured = phase.abs() / (2.0 * std::f64::consts::PI * t_total);
    let rel = (f_measured - f_expected).abs() / f_expected;
    let pass = rel < 1e-3;
    report(
        2,
        "Larmor frequency at alpha = 0",
        pass,
        &format!("(f = {f_measured:.6e} Hz vs {f_expected:.6e} Hz, rel {rel:.2e})"),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------
// 3. Norm preservation over a million thermal steps
// ---------------------------------------------------------------------------

#[test]
fn acceptance_03_norm_preservation() {
    let sys = LlgSystemD::new(table_magnet(300.0), table_oxide()).unwrap();
    let drive = DriveSegment::me(1.0, 0.0);
    let mut rng = trial_rng(11, 0);
    let mut m = -Vec3d::unit_x();
    let mut worst: f64 = 0.0;
    for _ in 0..1_000_000 {
        m = sys.heun_step(m, &drive, DT, &mut rng);
        worst = worst.max((m.norm() - 1.0).abs());
    }
    let pass = worst <= 1e-9;
    report(
        3,
        "|m| preserved across 1e6 thermal steps",
        pass,
        &format!("(worst deviation {worst:.2e})"),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------
// 4. Thermal-field statistics
// ---------------------------------------------------------------------------

#[test]
fn acceptance_04_thermal_variance() {
    let spec = table_magnet(300.0);
    let sigma = fields::thermal_sigma(&spec, DT);
    let mut rng = trial_rng(13, 0);
    let n = 1_000_000;
    let (mut sum, mut sum2) = ([0.0; 3], [0.0; 3]);
    for _ in 0..n {
        let h = fields::h_thermal(&spec, DT, &mut rng);
        for (i, v) in [h.x, h.y, h.z].into_iter().enumerate() {
            sum[i] += v;
            sum2[i] += v * v;
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        let mean = sum[i] / n as f64;
        let var = sum2[i] / n as f64 - mean * mean;
        worst = worst.max((var / (sigma * sigma) - 1.0).abs());
    }
    let pass = worst < 0.02;
    report(
        4,
        "thermal field variance within 2%",
        pass,
        &format!("(worst relative error {worst:.4})"),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------
// 5, 6, 8 share the 1000-trial switching-probability sweep
// ---------------------------------------------------------------------------

fn sweep_curve() -> &'static Vec<SweepPoint> {
    static CURVE: OnceLock<Vec<SweepPoint>> = OnceLock::new();
    CURVE.get_or_init(|| {
        let spec = SweepSpec {
            voltages: (0..=12).map(|i| i as f64 * V_OP_GRID_STEP).collect(),
            pulse_width: PULSE,
            settle_time: 0.0,
            trials: 1000,
            dt: DT,
            base_seed: 42,
        };
        switching_probability_sweep(&table_magnet(300.0), &table_oxide(), &spec).unwrap()
    })
}

/// Operating voltage with boundary refinement. A 1000-trial point estimate
/// can land a hair above 0.999 by luck, so each candidate from the curve is
/// confirmed with a larger independent ensemble before being declared.
fn v_op() -> f64 {
    static VOP: OnceLock<f64> = OnceLock::new();
    *VOP.get_or_init(|| {
        let curve = sweep_curve();
        let first = operating_voltage(curve, 0.999).expect("sweep must reach p >= 0.999");
        let idx = curve.iter().position(|pt| pt.voltage == first).unwrap();
        for pt in &curve[idx..] {
            let spec = SweepSpec {
                voltages: vec![pt.voltage],
                pulse_width: PULSE,
                settle_time: 0.0,
                trials: 4000,
                dt: DT,
                base_seed: 43,
            };
            let confirm =
                switching_probability_sweep(&table_magnet(300.0), &table_oxide(), &spec).unwrap();
            if confirm[0].p_switch >= 0.999 {
                return pt.voltage;
            }
        }
        panic!("no grid voltage sustains p >= 0.999 under refinement");
    })
}

#[test]
fn acceptance_05_switching_within_500ps_at_v_op() {
    let v = v_op();
    // Independent ensemble (fresh seed) at the derived operating voltage.
    let spec = SweepSpec {
        voltages: vec![v],
        pulse_width: PULSE,
        settle_time: 0.0,
        trials: 1000,
        dt: DT,
        base_seed: 4242,
    };
    let curve = switching_probability_sweep(&table_magnet(300.0), &table_oxide(), &spec).unwrap();
    let p = curve[0].p_switch;
    let pass = p >= 0.999;
    report(
        5,
        "switching within 500 ps at V_op",
        pass,
        &format!("(V_op = {v} V, p = {p:.4})"),
    );
    assert!(pass);
}

#[test]
fn acceptance_06_sweep_shape() {
    let curve = sweep_curve();
    // Monotone within CI: no point's interval falls significantly below its
    // predecessor's.
    let mut monotone = true;
    for w in curve.windows(2) {
        if w[1].ci_high < w[0].ci_low {
            monotone = false;
        }
    }
    let starts_low = curve.first().unwrap().p_switch <= 0.01;
    let ends_high = curve.last().unwrap().p_switch >= 0.999;
    let pass = monotone && starts_low && ends_high;
    report(
        6,
        "switching probability monotone from ~0 to 1",
        pass,
        &format!(
            "(p(0) = {:.4}, p(max) = {:.4}, monotone = {monotone})",
            curve.first().unwrap().p_switch,
            curve.last().unwrap().p_switch
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------
// 7. ME vs STT switching-time spread
// ---------------------------------------------------------------------------

#[test]
fn acceptance_07_me_spread_less_than_stt() {
    let magnet = table_magnet(300.0);
    let oxide = table_oxide();
    let me = switching_time_distribution(
        &magnet,
        &oxide,
        SwitchDrive::Me { v_me: 44.0 },
        PULSE,
        0.0,
        DT,
        1000,
        101,
        50,
        PULSE,
    )
    .unwrap();
    let stt = switching_time_distribution(
        &magnet,
        &oxide,
        SwitchDrive::Stt {
            current_density: 2.6e11,
        },
        40e-9,
        0.0,
        DT,
        1000,
        102,
        50,
        20e-9,
    )
    .unwrap();
    let stt_in_band = stt.mean >= 5e-9 && stt.mean <= 10e-9;
    let me_fast = me.mean <= PULSE;
    let spread = me.coefficient_of_variation() < stt.coefficient_of_variation();
    let pass = stt_in_band && me_fast && spread;
    report(
        7,
        "ME switching-time spread < STT",
        pass,
        &format!(
            "(ME mean {:.3e} s cv {:.3}; STT mean {:.3e} s cv {:.3})",
            me.mean,
            me.coefficient_of_variation(),
            stt.mean,
            stt.coefficient_of_variation()
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------
// 8. Capacitive switching energy at the published operating point
// ---------------------------------------------------------------------------

#[test]
fn acceptance_08_switching_energy_5_5fj() {
    let oxide = table_oxide();
    let c_me = oxide.capacitance();
    let c_hand = 4.4824325832675e-15;
    let c_ok = (c_me - c_hand).abs() / c_hand < 0.005;

    let v = v_op();
    let e = switching_energy(&EnergyInputs {
        c_me,
        v_reset: v,
        v_data: v,
        c_g: 1e-16,
        v_g: 1.0,
    });
    let v_in_band = (0.45..=0.65).contains(&v);
    let e_in_band = (4.0e-15..=7.0e-15).contains(&e.total_j);

    let gate = GateInstance::new(
        GateKind::Xnor,
        table_magnet(300.0),
        oxide,
        table_mtj(),
        read_circuit(GateKind::Xnor),
    )
    .unwrap();
    let read = read_energy(&gate, PULSE).unwrap();
    let read_ok = (read.total_j - 30e-15).abs() / 30e-15 < 0.05;

    let pass = c_ok && v_in_band && e_in_band && read_ok;
    report(
        8,
        "switching energy 5.5 fJ at V_op in [0.45, 0.65] V",
        pass,
        &format!(
            "(C_ME ok = {c_ok}; V_op = {v} V, in band = {v_in_band}; \
             E = {:.3e} J, in band = {e_in_band}; read = {:.3e} J, ok = {read_ok}. \
             The derived V_op is fixed by the 500 ps switching requirement and \
             lies far above the band implied by the 5.5 fJ estimate; see the \
             repository README for the analysis.)",
            e.total_j, read.total_j
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------
// 9. Truth tables
// ---------------------------------------------------------------------------

#[test]
fn acceptance_09_truth_tables() {
    let v = 44.0;
    let mut pass = true;
    let mut detail = String::new();
    for kind in [GateKind::Xnor, GateKind::Nand, GateKind::Nor] {
        // Exact at T = 0.
        let rows = truth_table(
            kind,
            table_magnet(0.0),
            table_oxide(),
            table_mtj(),
            read_circuit(kind),
            &gate_env(v),
            1,
            7,
        )
        .unwrap();
        let exact = rows
            .iter()
            .all(|r| r.output == r.expected && r.success_rate == 1.0);
        // >= 99% per row at 300 K over 1000 trials.
        let rows_t = truth_table(
            kind,
            table_magnet(300.0),
            table_oxide(),
            table_mtj(),
            read_circuit(kind),
            &gate_env(v),
            1000,
            7,
        )
        .unwrap();
        let min_rate = rows_t
            .iter()
            .map(|r| r.success_rate)
            .fold(f64::INFINITY, f64::min);
        let reliable = min_rate >= 0.99;
        detail.push_str(&format!(
            "[{kind:?}: T0 exact = {exact}, min row rate = {min_rate:.4}] "
        ));
        pass &= exact && reliable;
    }
    report(9, "XNOR/NAND/NOR truth tables", pass, detail.trim());
    assert!(pass);
}

// ---------------------------------------------------------------------------
// 10. Two-XNOR cascade and the reset-omission experiment
// ---------------------------------------------------------------------------

fn two_xnor_stages() -> Vec<Stage> {
    vec![
        Stage {
            gate: GateInstance::new(
                GateKind::Xnor,
                table_magnet(0.0),
                table_oxide(),
                table_mtj(),
                read_circuit(GateKind::Xnor),
            )
            .unwrap(),
            inputs: vec![InputSource::External(0), InputSource::External(1)],
            name: "xnor1".into(),
        },
        Stage {
            gate: GateInstance::new(
                GateKind::Xnor,
                table_magnet(0.0),
                table_oxide(),
                table_mtj(),
                read_circuit(GateKind::Xnor),
            )
            .unwrap(),
            inputs: vec![InputSource::Stage(0), InputSource::External(2)],
            name: "xnor2".into(),
        },
    ]
}

#[test]
fn acceptance_10_cascade_and_reset_omission() {
    let env = gate_env(44.0);
    let schedule = CascadeSchedule::uniform(2, -44.0, PULSE, 100e-12);

    let mut all_correct = true;
    for combo in 0..8u32 {
        let bits = [(combo >> 2) & 1 == 1, (combo >> 1) & 1 == 1, combo & 1 == 1];
        let inputs: Vec<LogicLevel> = bits.iter().map(|&b| LogicLevel::from_bool(b)).collect();
        let mut stages = two_xnor_stages();
        let mut rng = trial_rng(17, combo as u64);
        let result = run_cascade(&mut stages, &schedule, &inputs, &env, &mut rng, false).unwrap();
        let expected = !(!(bits[0] ^ bits[1]) ^ bits[2]);
        if result.outputs[1].as_bool() != expected {
            all_correct = false;
        }
    }

    // Reset omission: reuse the magnet state across runs without resetting.
    let mut stages = two_xnor_stages();
    let mut failures = 0;
    for combo in 0..8u32 {
        let bits = [(combo >> 2) & 1 == 1, (combo >> 1) & 1 == 1, combo & 1 == 1];
        let inputs: Vec<LogicLevel> = bits.iter().map(|&b| LogicLevel::from_bool(b)).collect();
        let mut rng = trial_rng(18, combo as u64);
        let result = run_cascade(&mut stages, &schedule, &inputs, &env, &mut rng, true).unwrap();
        let expected = !(!(bits[0] ^ bits[1]) ^ bits[2]);
        if result.outputs[1].as_bool() != expected {
            failures += 1;
        }
    }
    let pass = all_correct && failures >= 1;
    report(
        10,
        "two-XNOR cascade, reset-omission failure",
        pass,
        &format!("(with reset: all 8 correct = {all_correct}; without reset: {failures}/8 wrong)"),
    );
    assert!(pass);
}
