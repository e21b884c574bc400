//! Batch runner for the library's numerical invariants.
//!
//! Each check can run against a mutated rule (see [`Mutations`]), which is how
//! the suite demonstrates that it detects wrong constants or wrong rounding.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dofcore::{self, NormalizedParams, Scenario};
use crate::error::Result;
use crate::sampling::{self, ModeBand, TimeSignal};
use crate::simulation::{self, SimulationConfig};
use crate::specfun::{
    make_quadrature, sph_bessel_j, sph_bessel_j_bound, sph_harmonics_upto, ModeIndex,
};

/// Replaceable pieces of the analytic model.
#[derive(Clone, Copy)]
pub struct Mutations {
    /// Rounding applied to the real-valued truncation indices.
    pub index_round: fn(f64) -> f64,
    /// Critical frequency `F_n`.
    pub critical_frequency: fn(&Scenario, usize) -> Result<f64>,
}

impl Default for Mutations {
    fn default() -> Self {
        Self {
            index_round: f64::ceil,
            critical_frequency: dofcore::critical_frequency,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

/// Runs every check with the given model.
pub fn run_checks(m: &Mutations) -> Vec<CheckResult> {
    let checks: Vec<fn(&Mutations) -> CheckResult> = vec![
        |_| bessel_bound(),
        |_| bessel_recurrence(),
        |_| harmonic_gram(),
        |_| phi_orthogonality(),
        |_| legendre_support(),
        dof_ordering,
        |_| dof_consistency(),
        detectability,
    ];
    checks.iter().map(|c| c(m)).collect()
}

fn error_result(name: &'static str, e: crate::Error) -> CheckResult {
    CheckResult::new(name, false, format!("error: {e}"))
}

/// `|j_n(z)| <= bound(n, z)(1 + 1e-12)` for `n ≤ 60` on 1000 points of `(0, 100]`.
pub fn bessel_bound() -> CheckResult {
    let name = "bessel_bound";
    let violations: Result<usize> = (0..=60usize)
        .into_par_iter()
        .map(|n| {
            let mut bad = 0;
            for k in 1..=1000 {
                let z = 0.1 * k as f64;
                if sph_bessel_j(n, z)?.abs() > sph_bessel_j_bound(n, z) * (1.0 + 1e-12) {
                    bad += 1;
                }
            }
            Ok(bad)
        })
        .sum();
    match violations {
        Ok(v) => CheckResult::new(name, v == 0, format!("{v} violations over 61x1000 points")),
        Err(e) => error_result(name, e),
    }
}

/// Three-term recurrence residual relative to its largest term, `z >= 0.1`.
pub fn bessel_recurrence() -> CheckResult {
    let name = "bessel_recurrence";
    let mut worst: f64 = 0.0;
    for n in 1..60usize {
        for k in 1..=1000 {
            let z = 0.1 * k as f64;
            let (a, b, c) = match (
                sph_bessel_j(n - 1, z),
                sph_bessel_j(n, z),
                sph_bessel_j(n + 1, z),
            ) {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return error_result(name, e),
            };
            let mid = (2 * n + 1) as f64 * b / z;
            let scale = a.abs().max(c.abs()).max(mid.abs());
            if scale > 1e-300 {
                worst = worst.max((a + c - mid).abs() / scale);
            }
        }
    }
    CheckResult::new(name, worst <= 1e-10, format!("max relative residual {worst:.3e}"))
}

/// Largest entry of `|G − I|` for the harmonic Gram matrix up to degree `degree`
/// under the degree-`degree` product rule.
pub fn harmonic_gram_error(degree: usize) -> Result<f64> {
    let rule = make_quadrature(degree)?;
    let count = ModeIndex::count(degree);
    let ys: Vec<Vec<Complex64>> = rule
        .nodes()
        .iter()
        .map(|p| sph_harmonics_upto(degree, p.theta, p.phi))
        .collect();
    let worst = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut w: f64 = 0.0;
            for j in 0..count {
                let g: Complex64 = ys
                    .iter()
                    .zip(rule.weights())
                    .map(|(y, wq)| y[i] * y[j].conj() * *wq)
                    .sum();
                let want = if i == j { 1.0 } else { 0.0 };
                w = w.max((g - want).norm());
            }
            w
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

pub fn harmonic_gram() -> CheckResult {
    let name = "harmonic_gram";
    match harmonic_gram_error(15) {
        Ok(e) => CheckResult::new(name, e <= 1e-10, format!("max |G - I| = {e:.3e} (degree 15)")),
        Err(e) => error_result(name, e),
    }
}

/// Largest `W_n |G_ll' − δ_ll'/W_n|` over `ℓ, ℓ' ∈ [0, 10]` at window `50/W_n`.
pub fn phi_gram_error(band: &ModeBand) -> Result<f64> {
    let window = sampling::MIN_WINDOW_PERIODS / band.w_n;
    let mut worst: f64 = 0.0;
    for l in 0..=10 {
        for l2 in 0..=10 {
            let g = sampling::phi_inner(l, l2, band, window)?;
            let want = if l == l2 { 1.0 / band.w_n } else { 0.0 };
            worst = worst.max((g - want).norm() * band.w_n);
        }
    }
    Ok(worst)
}

pub fn phi_orthogonality() -> CheckResult {
    let name = "phi_orthogonality";
    let mut worst: f64 = 0.0;
    for (lo, hi) in [(0.5, 1.5), (1.171, 1.5)] {
        match ModeBand::new(lo, hi).and_then(|b| phi_gram_error(&b)) {
            Ok(e) => worst = worst.max(e),
            Err(e) => return error_result(name, e),
        }
    }
    CheckResult::new(name, worst <= 1e-6, format!("max relative Gram error {worst:.3e}"))
}

/// `(T, r, c)` cases for the support check.
pub const SUPPORT_CASES: [(f64, f64, f64); 2] = [(1e-3, 0.3, 3e8), (0.01, 1.0, 343.0)];
pub const SUPPORT_MODES: [usize; 4] = [0, 1, 3, 8];

pub fn legendre_support() -> CheckResult {
    let name = "legendre_support";
    let mut worst: f64 = 0.0;
    for (t, r, c) in SUPPORT_CASES {
        let step = sampling::support_grid_step(r, c);
        for n in SUPPORT_MODES {
            match sampling::legendre_support_check(&TimeSignal::Rect { duration: t }, r, n, c) {
                Ok(s) => worst = worst.max((s - (t + 2.0 * r / c)).abs() / step),
                Err(e) => return error_result(name, e),
            }
        }
    }
    CheckResult::new(
        name,
        worst <= 1.0,
        format!("max |support - (T + 2r/c)| = {worst:.3e} grid steps"),
    )
}

/// Grid of the ordering check: `a ∈ {0.1, …, 2}`, `b ∈ {0, 0.05, …, 1}`,
/// `d ∈ {0.5, 1, 2}`, `ρ ∈ {1, 2, 4}`.
pub fn ordering_grid() -> Vec<NormalizedParams> {
    let mut out = Vec::new();
    for i in 1..=20 {
        for j in 0..=20 {
            for d in [0.5, 1.0, 2.0] {
                for rho in [1.0, 2.0, 4.0] {
                    out.push(NormalizedParams {
                        a: 0.1 * i as f64,
                        b: 0.05 * j as f64,
                        d,
                        rho,
                    });
                }
            }
        }
    }
    out
}

/// Mode-sum below the closed form on [`ordering_grid`], both built from the
/// (possibly mutated) truncation rounding.
pub fn dof_ordering(m: &Mutations) -> CheckResult {
    let name = "dof_ordering";
    let round = m.index_round;
    let mut bad = Vec::new();
    for p in ordering_grid() {
        let s = p.to_scenario(1.0, 1.0);
        let (n_min, n_max) = dofcore::truncation_indices_with(&s, round);
        let profile = dofcore::profile_from_indices(&s, n_min, n_max, None);
        let sum = dofcore::mode_sum_from_profile(&profile, dofcore::effective_time(&s));
        let closed = dofcore::closed_form_from_indices(&s, n_min, n_max).total;
        if sum > closed * (1.0 + 1e-12) {
            bad.push(p);
        }
    }
    let detail = match bad.first() {
        None => format!("mode-sum <= closed form at {} points", ordering_grid().len()),
        Some(p) => format!(
            "{} violations, first at a={}, b={}, d={}, rho={}",
            bad.len(),
            p.a,
            p.b,
            p.d,
            p.rho
        ),
    };
    CheckResult::new(name, bad.is_empty(), detail)
}

/// Asymptotic form equals the closed form at `γ = SNR`, and the normalized
/// form equals the closed form, both to 1e-9 relative.
pub fn dof_consistency() -> CheckResult {
    let name = "dof_consistency";
    let mut worst: f64 = 0.0;
    for i in 1..=20 {
        for j in 0..=10 {
            for d in [0.0, 0.5, 3.0] {
                for rho in [0.5, 1.0, 7.0] {
                    let p = NormalizedParams {
                        a: 0.1 * i as f64,
                        b: 0.1 * j as f64,
                        d,
                        rho,
                    };
                    let s = p.to_scenario(2.5, 340.0);
                    let (closed, norm) = match (dofcore::dof_closed_form(&s), dofcore::dof_normalized(&p)) {
                        (Ok(c), Ok(n)) => (c.total, n),
                        (Err(e), _) | (_, Err(e)) => return error_result(name, e),
                    };
                    worst = worst.max((norm - closed).abs() / closed);
                    let even = Scenario { snr_alpha_max: s.threshold, ..s };
                    let (c1, a1) = match (dofcore::dof_closed_form(&even), dofcore::dof_asymptotic(&even)) {
                        (Ok(c), Ok(a)) => (c.total, a.total),
                        (Err(e), _) | (_, Err(e)) => return error_result(name, e),
                    };
                    worst = worst.max((a1 - c1).abs() / c1);
                }
            }
        }
    }
    CheckResult::new(name, worst <= 1e-9, format!("max relative difference {worst:.3e}"))
}

/// Scenario of the detectability check: `a = 1`, `b = 0.5`, `ρ = 10⁴`, where
/// modes up to 11 become detectable inside the band.
pub fn detectability_scenario() -> Scenario {
    NormalizedParams {
        a: 1.0,
        b: 0.5,
        d: 1.0,
        rho: 1e4,
    }
    .to_scenario(1.0, 1.0)
}

/// Measured cutoffs never precede `F_n` by more than one grid step.
pub fn detectability(m: &Mutations) -> CheckResult {
    let name = "detectability";
    let s = detectability_scenario();
    let cfg = SimulationConfig {
        trials: 0,
        ..SimulationConfig::default()
    };
    let critical = m.critical_frequency;
    match simulation::detectability_scan(&s, &cfg, &critical) {
        Ok(d) => {
            let detected = d.iter().filter(|x| x.empirical_critical_freq.is_some()).count();
            let failed: Vec<usize> = d.iter().filter(|x| !x.passed).map(|x| x.n).collect();
            CheckResult::new(
                name,
                failed.is_empty(),
                format!(
                    "{detected} of {} modes detected in band; early detections for modes {failed:?}",
                    d.len()
                ),
            )
        }
        Err(e) => error_result(name, e),
    }
}

/// Critical frequency with the `e` factor dropped from `eπ`, for mutation tests.
pub fn critical_frequency_without_e(s: &Scenario, n: usize) -> Result<f64> {
    let f = dofcore::critical_frequency(s, n)?;
    Ok(f * std::f64::consts::E)
}
