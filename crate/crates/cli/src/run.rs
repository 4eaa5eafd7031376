//! Execution of a resolved config into output files and a summary.

use std::fmt::Write;

use anyhow::{bail, Result};
use rydsim_core::devices::{chain_work_time, find_work_time, ChainScale, SWITCH_WORK_TIME};
use rydsim_core::engine::{run_device, EngineKind, RunSettings};
use rydsim_core::experiments::{
    conservation_ok, diode_scan, diode_sweep, gas_switch, logic_table, quantum_vs_classical,
    switch_scan, transport, DiodePoint, Gate,
};
use rydsim_core::geometry::positions_csv;
use rydsim_core::series::fmt_sig;
use rydsim_core::{devices, SimParams, TimeSeries};
use serde_json::{json, Value};

use crate::config::{Experiment, Noise, RunConfig};

pub struct OutputFile {
    pub name: String,
    pub body: String,
}

#[derive(Default)]
pub struct Report {
    pub files: Vec<OutputFile>,
    pub results: Value,
    pub conservation_ok: bool,
}

impl Report {
    fn new() -> Self {
        Self {
            conservation_ok: true,
            ..Self::default()
        }
    }

    fn file(&mut self, name: impl Into<String>, body: String) {
        self.files.push(OutputFile {
            name: name.into(),
            body,
        });
    }

    fn series(&mut self, name: impl Into<String>, s: &TimeSeries) {
        self.conservation_ok &= conservation_ok(s);
        self.file(name, s.to_csv());
    }
}

/// A config the CLI accepted but the experiment cannot honor.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn settings(cfg: &RunConfig) -> RunSettings {
    let mut s = RunSettings::new(cfg.t_end).with_seed(cfg.seed);
    s.samples = cfg.samples;
    s.dt = cfg.dt;
    s.trajectories = cfg.trajectories;
    s
}

fn params(cfg: &RunConfig, n: &Noise) -> Result<SimParams> {
    Ok(SimParams::new(cfg.omega, n.gamma, n.kappa)?)
}

fn scale(cfg: &RunConfig) -> Result<ChainScale> {
    Ok(ChainScale::new(cfg.c6, 1.0)?)
}

fn engine(cfg: &RunConfig, default: EngineKind) -> EngineKind {
    cfg.engine.unwrap_or(default)
}

fn switch_outputs(cfg: &RunConfig) -> Result<usize> {
    if cfg.atoms < 3 {
        bail!(usage("the switch needs at least three atoms"));
    }
    Ok(cfg.atoms - 2)
}

/// `value,N_o@t...,t_w` rows; `t_w` is the time of the point's largest
/// recorded `N_o`.
fn scan_table(values: &[f64], times: &[f64], series: &[TimeSeries]) -> Result<String> {
    let mut out = String::from("value");
    for t in times {
        let _ = write!(out, ",N_o@{t}");
    }
    out.push_str(",t_w\n");
    for (v, s) in values.iter().zip(series) {
        out.push_str(&fmt_sig(*v));
        for &t in times {
            out.push(',');
            out.push_str(&fmt_sig(s.output_at(t)?));
        }
        out.push(',');
        out.push_str(&fmt_sig(find_work_time(&s.times, &s.output)?));
        out.push('\n');
    }
    Ok(out)
}

fn diode_table(points: &[DiodePoint]) -> String {
    let mut out = String::from("ratio,gamma,kappa,t_read,forward,reverse\n");
    for p in points {
        let row = [p.ratio, p.gamma, p.kappa, p.t_read, p.forward, p.reverse].map(fmt_sig);
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Run the experiment a config names.
pub fn execute(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new();
    let settings = settings(cfg);
    report.results = match cfg.experiment {
        Experiment::Fig3 => fig3(cfg, &settings, &mut report)?,
        Experiment::AppD => app_d(cfg, &settings, &mut report)?,
        Experiment::Fig4 => fig4(cfg, &settings, &mut report)?,
        Experiment::Fig5c => fig5c(cfg, &settings, &mut report)?,
        Experiment::AppE => app_e(cfg, &settings, &mut report)?,
        Experiment::Fig7And => logic(cfg, Gate::And, &settings, &mut report)?,
        Experiment::Fig7Nand => logic(cfg, Gate::Nand, &settings, &mut report)?,
        Experiment::AppB => app_b(cfg, &settings, &mut report)?,
        Experiment::AppC => app_c(cfg, &settings, &mut report)?,
        Experiment::Custom => custom(cfg, &settings, &mut report)?,
    };
    Ok(report)
}

fn fig3(cfg: &RunConfig, settings: &RunSettings, report: &mut Report) -> Result<Value> {
    let p = params(cfg, &cfg.noise[0])?;
    let values = cfg.scan.values();
    let times = if cfg.readout_times.is_empty() {
        vec![chain_work_time(p.gamma())]
    } else {
        cfg.readout_times.clone()
    };
    let e = engine(cfg, EngineKind::Quantum);
    let scan = switch_scan(
        scale(cfg)?,
        switch_outputs(cfg)?,
        &p,
        e,
        &values,
        &times,
        settings,
    )?;
    for (i, s) in scan.series.iter().enumerate() {
        report.series(format!("point_{i:03}.csv"), s);
    }
    report.file("scan.csv", scan_table(&values, &times, &scan.series)?);
    let peak = scan.peak().expect("nonempty scan");
    let baseline = match (scan.value_near(0.3), scan.value_near(2.5)) {
        (Some(a), Some(b)) => (a + b) / 2.0,
        _ => f64::NAN,
    };
    Ok(json!({
        "engine": e,
        "readout_times": times,
        "points": scan.points,
        "peak_ratio": peak.value,
        "peak_n_o": peak.n_o[0],
        "baseline_n_o": baseline,
        "peak_over_baseline": peak.n_o[0] / baseline,
    }))
}

fn app_d(cfg: &RunConfig, settings: &RunSettings, report: &mut Report) -> Result<Value> {
    let values = cfg.scan.values();
    let e = engine(cfg, EngineKind::Quantum);
    let outputs = switch_outputs(cfg)?;
    let mut per_noise = Vec::new();
    for (g, n) in cfg.noise.iter().enumerate() {
        let p = params(cfg, n)?;
        let times = if cfg.readout_times.is_empty() {
            vec![chain_work_time(n.gamma)]
        } else {
            cfg.readout_times.clone()
        };
        let scan = switch_scan(scale(cfg)?, outputs, &p, e, &values, &times, settings)?;
        for (i, s) in scan.series.iter().enumerate() {
            report.series(format!("noise{g}_point_{i:03}.csv"), s);
        }
        report.file(
            format!("noise{g}_scan.csv"),
            scan_table(&values, &times, &scan.series)?,
        );
        let reference =
            devices::build_switch_chain_with(scale(cfg)?, scale(cfg)?.delta_f(), outputs)?;
        let r = run_device(&reference, &p, e, settings)?;
        report.series(format!("noise{g}_reference.csv"), &r);
        per_noise.push(json!({
            "gamma": n.gamma,
            "kappa": n.kappa,
            "work_time": find_work_time(&r.times, &r.output)?,
            "points": scan.points,
        }));
    }
    Ok(json!({ "engine": e, "noise": per_noise }))
}

fn fig4(cfg: &RunConfig, settings: &RunSettings, report: &mut Report) -> Result<Value> {
    if let Some(e) = cfg.engine.filter(|&e| e != EngineKind::Kmc) {
        bail!(usage(format!(
            "the gas switch runs on the kmc engine only, not {e}"
        )));
    }
    let spec = cfg.gas_spec();
    let result = gas_switch(&spec, cfg.instances, settings)?;
    report.series("on.csv", &result.on);
    report.series("off.csv", &result.off);
    let geometry = devices::build_gas_switch(&spec, true, cfg.seed, 0)?;
    report.file("geometry.csv", positions_csv(&geometry.network));
    Ok(json!({
        "engine": EngineKind::Kmc,
        "spec": spec,
        "r_f_um": spec.r_f(),
        "density_um3": spec.cylinder.density(),
        "params": spec.params()?,
        "instances": result.instances,
        "trajectories": result.trajectories,
        "plateau_fraction": result.plateau_fraction,
        "plateau_on": result.plateau_on,
        "plateau_off": result.plateau_off,
        "ratio": result.ratio,
    }))
}

fn fig5c(cfg: &RunConfig, settings: &RunSettings, report: &mut Report) -> Result<Value> {
    let noise: Vec<(f64, f64)> = cfg.noise.iter().map(|n| (n.gamma, n.kappa)).collect();
    let t_read = cfg.readout_times.first().copied().unwrap_or(4.0);
    let e = engine(cfg, EngineKind::Quantum);
    let points = diode_sweep(
        scale(cfg)?,
        cfg.gate_ratio,
        &noise,
        cfg.omega,
        e,
        t_read,
        settings,
    )?;
    for (i, p) in points.iter().enumerate() {
        let (f, r) = p.series.as_ref().expect("sweep keeps series");
        report.series(format!("noise{i}_forward.csv"), f);
        report.series(format!("noise{i}_reverse.csv"), r);
    }
    report.file("sweep.csv", diode_table(&points));
    let gaps: Vec<f64> = points.iter().map(DiodePoint::gap).collect();
    Ok(json!({
        "engine": e,
        "gate_ratio": cfg.gate_ratio,
        "t_read": t_read,
        "points": points,
        "gap_decreasing": gaps.windows(2).all(|w| w[1] < w[0]),
    }))
}

fn app_e(cfg: &RunConfig, settings: &RunSettings, report: &mut Report) -> Result<Value> {
    let values = cfg.scan.values();
    let e = engine(cfg, EngineKind::Quantum);
    let mut all = Vec::new();
    for (g, n) in cfg.noise.iter().enumerate() {
        let p = params(cfg, n)?;
        let t_read = cfg
            .readout_times
            .first()
            .copied()
            .unwrap_or(chain_work_time(n.gamma));
        let points = diode_scan(scale(cfg)?, &p, e, &values, t_read, settings)?;
        for (i, pt) in points.iter().enumerate() {
            let (f, r) = pt.series.as_ref().expect("scan keeps series");
            report.series(format!("noise{g}_point_{i:03}_forward.csv"), f);
            report.series(format!("noise{g}_point_{i:03}_reverse.csv"), r);
        }
        report.file(format!("noise{g}_scan.csv"), diode_table(&points));
        all.push(json!({ "gamma": n.gamma, "kappa": n.kappa, "t_read": t_read, "points": points }));
    }
    Ok(json!({ "engine": e, "noise": all }))
}

fn bits_label(inputs: &[bool]) -> String {
    inputs.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn logic(
    cfg: &RunConfig,
    gate: Gate,
    settings: &RunSettings,
    report: &mut Report,
) -> Result<Value> {
    let e = engine(cfg, EngineKind::Quantum);
    let mut table = String::from("gamma,kappa,inputs,N_o,output_bit,expected_bit,t_w\n");
    let mut all = Vec::new();
    for (g, n) in cfg.noise.iter().enumerate() {
        let p = params(cfg, n)?;
        let t = logic_table(gate, scale(cfg)?, &p, e, settings)?;
        for (row, s) in t.rows.iter().zip(&t.series) {
            let label = bits_label(&row.inputs);
            report.series(format!("noise{g}_in{label}.csv"), s);
            let expected = gate.expected([row.inputs[0], row.inputs[1]]);
            let _ = writeln!(
                table,
                "{},{},{label},{},{},{},{}",
                fmt_sig(n.gamma),
                fmt_sig(n.kappa),
                fmt_sig(row.n_o_at_work_time),
                u8::from(row.output_bit),
                u8::from(expected),
                fmt_sig(t.work_time)
            );
        }
        all.push(json!({
            "gamma": n.gamma,
            "kappa": n.kappa,
            "table": t,
            "correct": t.is_correct(),
        }));
    }
    report.file("table.csv", table);
    Ok(json!({ "engine": e, "gate": gate, "noise": all }))
}

fn app_b(cfg: &RunConfig, settings: &RunSettings, report: &mut Report) -> Result<Value> {
    if cfg.engine.is_some() {
        log::warn!("appB compares fixed engines; the engine override is ignored");
    }
    let mut all = Vec::new();
    for (g, n) in cfg.noise.iter().enumerate() {
        let p = params(cfg, n)?;
        let cmp = quantum_vs_classical(cfg.atoms, scale(cfg)?, &p, cfg.t_end, settings)?;
        report.series(format!("noise{g}_quantum.csv"), &cmp.quantum);
        report.series(format!("noise{g}_classical.csv"), &cmp.classical);
        all.push(json!({
            "gamma": n.gamma,
            "kappa": n.kappa,
            "max_site_difference": cmp.max_difference,
        }));
    }
    Ok(json!({ "atoms": cfg.atoms, "t_max": cfg.t_end, "noise": all }))
}

fn app_c(cfg: &RunConfig, settings: &RunSettings, report: &mut Report) -> Result<Value> {
    let e = engine(cfg, EngineKind::Quantum);
    let c6s = if cfg.c6_values.is_empty() {
        vec![cfg.c6]
    } else {
        cfg.c6_values.clone()
    };
    let mut files = Vec::new();
    for &c6 in &c6s {
        for (g, n) in cfg.noise.iter().enumerate() {
            let p = params(cfg, n)?;
            let s = transport(cfg.atoms, ChainScale::new(c6, 1.0)?, &p, e, settings)?;
            let name = format!("c6_{c6}_noise{g}.csv");
            report.series(name.clone(), &s);
            files.push(json!({ "c6": c6, "gamma": n.gamma, "kappa": n.kappa, "file": name }));
        }
    }
    Ok(json!({ "engine": e, "atoms": cfg.atoms, "runs": files }))
}

fn custom(cfg: &RunConfig, settings: &RunSettings, report: &mut Report) -> Result<Value> {
    let device = cfg.device.as_ref().expect("checked in config");
    let e = engine(cfg, device.engine_hint);
    let p = params(cfg, &cfg.noise[0])?;
    let s = run_device(device, &p, e, settings)?;
    report.series("series.csv", &s);
    report.file("geometry.csv", positions_csv(&device.network));
    let t_w = device.work_time.unwrap_or(SWITCH_WORK_TIME).min(cfg.t_end);
    Ok(json!({
        "engine": e,
        "device": device.name,
        "work_time": t_w,
        "n_o_at_work_time": s.output_at(t_w)?,
        "plateau": s.plateau(0.1)?,
    }))
}
