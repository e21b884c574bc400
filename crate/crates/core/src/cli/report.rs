use serde::Serialize;
use serde_json::{json, Value};

use crate::dofcore::{self, DofBreakdown, ModeBandwidthProfile, NormalizedParams, Scenario};
use crate::simulation::SimulationReport;

use super::config::ScenarioSource;

/// Significant digits written for every real number.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Plain decimal text of `x` at [`SIGNIFICANT_DIGITS`] significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{}", round_sig(x))
}

/// Rounds every floating-point number in a JSON tree.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_sig(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_json),
        Value::Object(o) => o.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn to_rounded_json(v: &impl Serialize) -> Value {
    let mut v = serde_json::to_value(v).expect("report serializes");
    round_json(&mut v);
    v
}

/// Truncation indices reported for `s`; a zero radius keeps only mode 0.
pub fn reported_indices(s: &Scenario) -> (usize, usize) {
    if s.radius == 0.0 {
        (0, 0)
    } else {
        dofcore::truncation_indices(s)
    }
}

/// Evaluated bound for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub scenario: Scenario,
    pub params: NormalizedParams,
    pub profile: ModeBandwidthProfile,
    pub dof: DofBreakdown,
    /// `None` for a zero radius, where the per-mode sum is undefined.
    pub mode_sum: Option<f64>,
}

pub fn evaluate(s: &Scenario) -> crate::Result<Evaluation> {
    let dof = dofcore::dof_bound(s)?;
    let (n_min, n_max) = reported_indices(s);
    let profile = dofcore::profile_from_indices(s, n_min, n_max, None);
    let mode_sum = if s.radius > 0.0 {
        Some(dofcore::dof_mode_sum(s)?)
    } else {
        None
    };
    Ok(Evaluation {
        scenario: *s,
        params: NormalizedParams::from_scenario(s),
        profile,
        dof,
        mode_sum,
    })
}

pub const CSV_HEADER: [&str; 11] = [
    "a", "b", "d", "rho", "n_min", "n_max", "t_eff", "d1", "d2", "d3", "dof_total",
];

pub fn csv_row(e: &Evaluation) -> Vec<String> {
    let p = &e.params;
    vec![
        fmt_num(p.a),
        fmt_num(p.b),
        fmt_num(p.d),
        fmt_num(p.rho),
        e.profile.n_min.to_string(),
        e.profile.n_max.to_string(),
        fmt_num(e.dof.t_eff),
        fmt_num(e.dof.d1),
        fmt_num(e.dof.d2),
        fmt_num(e.dof.d3),
        fmt_num(e.dof.total),
    ]
}

pub fn write_csv(rows: &[Evaluation]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for e in rows {
        w.write_record(csv_row(e)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}

fn input_echo(src: &ScenarioSource) -> Value {
    match src {
        ScenarioSource::Physical(c) => json!({ "scenario": {
            "radius": c.radius,
            "mid_freq": c.mid_freq,
            "half_bandwidth": c.half_bandwidth,
            "obs_time": c.obs_time,
            "wave_speed": c.wave_speed,
            "threshold": c.threshold,
            "snr_alpha_max": c.snr_alpha_max,
        }}),
        ScenarioSource::Normalized(n) => json!({ "normalized": {
            "a": n.a, "b": n.b, "d": n.d, "rho": n.rho,
            "mid_freq": n.mid_freq,
            "wave_speed": n.wave_speed,
        }}),
    }
}

pub fn compute_json(src: &ScenarioSource, e: &Evaluation) -> Value {
    let modes: Vec<Value> = e
        .profile
        .per_mode
        .iter()
        .map(|m| {
            json!({
                "n": m.n,
                "critical_freq": m.critical_freq,
                "eff_bandwidth": m.eff_bandwidth,
                "band_lo": m.band_lo,
                "band_hi": m.band_hi,
                "mid_band": m.mid_band,
            })
        })
        .collect();
    let mut v = json!({
        "input": input_echo(src),
        "n_min": e.profile.n_min,
        "n_max": e.profile.n_max,
        "t_eff": e.dof.t_eff,
        "modes": modes,
        "dof": {
            "d1": e.dof.d1,
            "d2": e.dof.d2,
            "d3": e.dof.d3,
            "total": e.dof.total,
        },
        "dof_mode_sum": e.mode_sum,
    });
    round_json(&mut v);
    v
}

pub fn simulate_json(src: &ScenarioSource, e: &Evaluation, sim: &SimulationReport) -> Value {
    let mut v = compute_json(src, e);
    v["simulation"] = to_rounded_json(sim);
    v
}

pub const SIMULATE_CSV_HEADER: [&str; 4] = ["n", "critical_freq", "empirical_critical_freq", "passed"];

pub fn simulate_csv(sim: &SimulationReport) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(SIMULATE_CSV_HEADER).expect("in-memory write");
    for d in &sim.detections {
        w.write_record([
            d.n.to_string(),
            fmt_num(d.critical_freq),
            d.empirical_critical_freq.map(fmt_num).unwrap_or_default(),
            d.passed.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}
