//! End-to-end acceptance criteria. Runs without the libtest harness so every
//! criterion prints one PASS/FAIL line; exits non-zero if any fails.

use std::f64::consts::{E, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use modecap::dofcore::{self, NormalizedParams, Scenario};
use modecap::sampling::{self, ModeBand, PulseTrain, TimeSignal};
use modecap::simulation::{self, SimulationConfig};
use modecap::specfun::{sph_bessel_j, sph_bessel_j_bound, SpherePoint};
use modecap::verify;
use modecap::wavefield::{self, NoiseModel, PlaneWaveSource, SphericalGrid};
use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn scenario(a: f64, b: f64, d: f64, rho: f64) -> Scenario {
    NormalizedParams { a, b, d, rho }.to_scenario(1.0, 1.0)
}

/// Independent evaluation of the per-mode sum `Σ (2n+1)(W_n T_eff + 1)`,
/// written from the definitions without the library's helpers.
fn oracle_mode_sum(s: &Scenario) -> (usize, usize, f64) {
    let e_pi = E * PI;
    let (f0, w, r, c) = (s.mid_freq, s.half_bandwidth, s.radius, s.wave_speed);
    let ln_rho = (s.snr_alpha_max / s.threshold).ln();
    let t_eff = s.obs_time + 2.0 * r / c;
    let index = |f: f64| (e_pi * f * r / c + 0.5 * ln_rho).ceil().max(0.0) as usize;
    let n_min = index(f0 - w);
    let n_max = index(f0 + w).max(n_min);
    let mut total = 0.0;
    for n in 0..=n_max {
        let f_n = (n as f64 * c / (e_pi * r) - c / (2.0 * e_pi * r) * ln_rho).max(0.0);
        let w_n = if n <= n_min { 2.0 * w } else { (f0 + w - f_n).max(0.0) };
        total += (2 * n + 1) as f64 * (w_n * t_eff + 1.0);
    }
    (n_min, n_max, total)
}

/// Independent evaluation of the closed-form bound.
fn oracle_closed_form(s: &Scenario) -> f64 {
    let e_pi = E * PI;
    let (n_min, n_max, _) = oracle_mode_sum(s);
    let (f0, w) = (s.mid_freq, s.half_bandwidth);
    let k = e_pi * s.radius / s.wave_speed;
    let t_eff = s.obs_time + 2.0 * s.radius / s.wave_speed;
    let ln_rho = (s.snr_alpha_max / s.threshold).ln();
    let d1 = ((n_max + 1) as f64).powi(2);
    let d2 = 2.0 * w * t_eff * ((n_min + 1) as f64).powi(2);
    let d3 = 2.0 * w * t_eff
        * (2.0 * k * k * (f0 * w - w * w / 3.0) + k * (2.0 * f0 - w) + ln_rho * (k * w + 1.0));
    d1 + d2 + d3.max(0.0)
}

fn shannon_reduction() -> Outcome {
    let mut worst: f64 = 0.0;
    for wt in [1.0, 10.0, 100.0] {
        let s = Scenario {
            radius: 0.0,
            mid_freq: 1e3,
            half_bandwidth: 250.0,
            obs_time: wt / 250.0,
            wave_speed: 343.0,
            threshold: 1.0,
            snr_alpha_max: 1.0,
        };
        let d = dofcore::dof_asymptotic(&s).unwrap().total;
        worst = worst.max(rel(d, 2.0 * wt + 1.0));
    }
    outcome(worst <= 1e-9, format!("max relative error {worst:.2e} for WT in {{1, 10, 100}}"))
}

fn narrowband_reduction() -> Outcome {
    // (⌈eπa⌉ + 1)² with eπ ≈ 8.5397: ⌈4.27⌉ = 5, ⌈8.54⌉ = 9, ⌈17.08⌉ = 18.
    let expected = [(0.5, 36.0), (1.0, 100.0), (2.0, 361.0)];
    let mut got = Vec::new();
    let mut ok = true;
    for (a, want) in expected {
        let s = scenario(a, 0.0, 1.0, 1.0);
        let d = dofcore::dof_bound(&s).unwrap().total;
        let n = dofcore::dof_normalized(&NormalizedParams { a, b: 0.0, d: 1.0, rho: 1.0 }).unwrap();
        ok &= d == want && n == want;
        got.push(d);
    }
    outcome(ok, format!("D = {got:?}, expected [36, 100, 361]"))
}

fn pinned_point() -> Outcome {
    let s = scenario(1.0, 0.5, 1.0, 1.0);
    let (n_min, n_max) = dofcore::truncation_indices(&s);
    let closed = dofcore::dof_closed_form(&s).unwrap().total;
    let sum = dofcore::dof_mode_sum(&s).unwrap();
    let (o_min, o_max, o_sum) = oracle_mode_sum(&s);
    let o_closed = oracle_closed_form(&s);
    let ok = (n_min, n_max) == (5, 13)
        && (o_min, o_max) == (5, 13)
        && (closed - 524.75).abs() <= 0.5
        && (sum - 462.3).abs() <= 0.5
        && rel(sum, o_sum) <= 1e-12
        && rel(closed, o_closed) <= 1e-12
        && sum <= closed;
    outcome(
        ok,
        format!(
            "n_min={n_min}, n_max={n_max}, closed form {closed:.4}, mode sum {sum:.4} (oracles {o_closed:.4}, {o_sum:.4})"
        ),
    )
}

fn monotone_trends() -> Outcome {
    let a_grid: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
    let b_grid: Vec<f64> = (0..=20).map(|j| 0.05 * j as f64).collect();
    let d_grid = [0.5, 1.0, 2.0];
    let rho_grid = [0.5, 1.0, 2.0];
    let dof = |a: f64, b: f64, d: f64, rho: f64| {
        dofcore::dof_normalized(&NormalizedParams { a, b, d, rho }).unwrap()
    };
    let nondecreasing = |lo: f64, hi: f64| hi >= lo * (1.0 - 1e-12);

    let mut violations = [0usize; 4];
    let mut example_b = None;
    for (ia, &a) in a_grid.iter().enumerate() {
        for (ib, &b) in b_grid.iter().enumerate() {
            for (id, &d) in d_grid.iter().enumerate() {
                for (ir, &rho) in rho_grid.iter().enumerate() {
                    let here = dof(a, b, d, rho);
                    if ia + 1 < a_grid.len() && !nondecreasing(here, dof(a_grid[ia + 1], b, d, rho)) {
                        violations[0] += 1;
                    }
                    if ib + 1 < b_grid.len() {
                        let next = dof(a, b_grid[ib + 1], d, rho);
                        if !nondecreasing(here, next) {
                            violations[1] += 1;
                            example_b.get_or_insert((a, b, d, rho, here, next));
                        }
                    }
                    if id + 1 < d_grid.len() && !nondecreasing(here, dof(a, b, d_grid[id + 1], rho)) {
                        violations[2] += 1;
                    }
                    if ir + 1 < rho_grid.len() && !nondecreasing(here, dof(a, b, d, rho_grid[ir + 1])) {
                        violations[3] += 1;
                    }
                }
            }
        }
    }

    let mut ratio_violations = 0;
    let mut worst_ratio: f64 = 0.0;
    for &a in a_grid.iter().filter(|&&a| a >= 1.0 - 1e-12 && 2.0 * a <= 2.0 + 1e-12) {
        for &b in &b_grid {
            for &d in &d_grid {
                for &rho in &rho_grid {
                    let ratio = dof(2.0 * a, b, d, rho) / dof(a, b, d, rho);
                    worst_ratio = worst_ratio.max(ratio);
                    if ratio > 4.5 {
                        ratio_violations += 1;
                    }
                }
            }
        }
    }

    let mut detail = format!(
        "monotonicity violations (a, b, d, rho) = {violations:?}; D(2a)/D(a) > 4.5 at {ratio_violations} points, max {worst_ratio:.3}"
    );
    if let Some((a, b, d, rho, here, next)) = example_b {
        detail.push_str(&format!(
            "; e.g. a={a:.1}, d={d}, rho={rho}: D(b={b:.2})={here:.3} > D(b={:.2})={next:.3}",
            b + 0.05
        ));
    }
    outcome(violations.iter().all(|&v| v == 0) && ratio_violations == 0, detail)
}

fn bessel_bound() -> Outcome {
    let mut violations = 0;
    let mut bound_err: f64 = 0.0;
    for n in 0..=60usize {
        for k in 1..=1000 {
            let z = 0.1 * k as f64;
            // √π/2 · (z/2)^n / Γ(n + 3/2)
            let oracle = (0.5 * PI.ln() - 2f64.ln() + n as f64 * (0.5 * z).ln()
                - ln_gamma(n as f64 + 1.5))
                .exp();
            let bound = sph_bessel_j_bound(n, z);
            bound_err = bound_err.max(rel(bound, oracle));
            if sph_bessel_j(n, z).unwrap().abs() > bound * (1.0 + 1e-12) {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0 && bound_err <= 1e-10,
        format!("{violations} violations over n in [0, 60] x 1000 points; bound vs oracle {bound_err:.2e}"),
    )
}

fn harmonic_orthonormality() -> Outcome {
    let e = verify::harmonic_gram_error(15).unwrap();
    outcome(e <= 1e-10, format!("max |G - I| = {e:.2e} up to degree 15"))
}

fn jacobi_anger() -> Outcome {
    let radius = 1.0;
    let c = 1.0;
    let mut worst: f64 = 0.0;
    for kr in [1.0, 5.0, 10.0] {
        let freqs = vec![kr * c / (2.0 * PI * radius)];
        let order = (kr as usize) + 10;
        let grid = SphericalGrid::new(radius, wavefield::required_degree(order, kr)).unwrap();
        let mut sources = vec![PlaneWaveSource {
            direction: SpherePoint { theta: 0.7, phi: 2.1 },
            amplitude: vec![Complex64::new(0.8, -0.3)],
        }];
        sources.extend(wavefield::random_sources(3, &freqs, 11));
        for set in [&sources[..1], &sources[..]] {
            let field = wavefield::synthesize_field(set, &grid, &freqs, c).unwrap();
            let got = wavefield::analyze_modes(field.view(), &grid, order, &freqs).unwrap();
            let want = wavefield::theoretical_modes(set, radius, &freqs, order, c).unwrap();
            worst = worst.max(got.max_relative_difference(&want));
        }
    }
    outcome(worst <= 1e-8, format!("max relative difference {worst:.2e} for kR in {{1, 5, 10}}"))
}

fn noise_projection() -> Outcome {
    let grid = SphericalGrid::new(1.0, 10).unwrap();
    let noise = NoiseModel { sigma0_sq: 1.0, alpha_max_sq: 1.0, seed: 0 };
    let check = simulation::noise_check(&grid, 5, &noise, 10_000).unwrap();
    outcome(
        check.passed,
        format!(
            "max |var/sigma0^2 - 1| = {:.4} over 36 slots; max correlation {:.4} < {:.4}",
            check.max_variance_deviation, check.max_correlation, check.correlation_limit
        ),
    )
}

fn one_sided_detection() -> Outcome {
    let cfg = SimulationConfig { trials: 0, freq_points: 513, ..SimulationConfig::default() };
    let mut parts = Vec::new();
    let mut ok = true;
    for rho in [1.0, 1e4] {
        let s = scenario(1.0, 0.5, 1.0, rho);
        let det = simulation::detectability_scan(&s, &cfg, &dofcore::critical_frequency).unwrap();
        let step = 2.0 * s.half_bandwidth / 512.0;
        let in_range: Vec<_> = det.iter().filter(|d| (1..=13).contains(&d.n)).collect();
        let covered = in_range.len() == 13;
        let early: Vec<usize> = in_range
            .iter()
            .filter(|d| d.empirical_critical_freq.is_some_and(|f| f < d.critical_freq - step))
            .map(|d| d.n)
            .collect();
        let detected = in_range.iter().filter(|d| d.empirical_critical_freq.is_some()).count();
        ok &= covered && early.is_empty();
        parts.push(format!("rho={rho}: {detected}/13 detected, early {early:?}"));
    }
    outcome(ok, parts.join("; "))
}

fn phi_orthogonality() -> Outcome {
    let s = scenario(1.0, 0.5, 1.0, 1.0);
    let profile = dofcore::bandwidth_profile(&s, None).unwrap();
    let mut worst: f64 = 0.0;
    let mut bands = Vec::new();
    for n in [0, 10] {
        let band = ModeBand::from_mode(&profile.per_mode[n]).unwrap();
        worst = worst.max(verify::phi_gram_error(&band).unwrap());
        bands.push(format!("({:.3}, {:.3})", band.w_n, band.w_0n));
    }
    outcome(
        worst <= 1e-6,
        format!("max relative Gram error {worst:.2e} for (W_n, W_0n) = {}", bands.join(", ")),
    )
}

fn sampling_and_reconstruction() -> Outcome {
    let s = scenario(1.0, 0.5, 40.0, 1.0);
    let t_eff = dofcore::effective_time(&s);
    let profile = dofcore::bandwidth_profile(&s, None).unwrap();
    let mut identity: f64 = 0.0;
    let mut full: f64 = 0.0;
    let mut half = f64::INFINITY;
    let mut counts = Vec::new();
    for n in [0, 6, 7, 8, 9] {
        let band = ModeBand::from_mode(&profile.per_mode[n]).unwrap();
        let k = (band.w_n * t_eff).floor() as usize + 1;
        counts.push(k);
        let signal = PulseTrain::random(band, 0.0, t_eff, k, 100 + n as u64);
        let spec = |w: f64| signal.spectrum(w);
        identity = identity.max(sampling::sample_identity_error(&spec, &band, -3, k as i64).unwrap());
        for seed in 0..3 {
            full = full.max(sampling::reconstruction_trial(&band, t_eff, k, seed).unwrap());
            half = half.min(sampling::reconstruction_trial(&band, t_eff, k / 2, seed).unwrap());
        }
    }
    outcome(
        identity <= 1e-8 && full <= 1e-2 && half > 5e-2,
        format!(
            "sample identity {identity:.2e}; worst error with floor(W_n T_eff)+1 samples {full:.2e}; \
             best with half {half:.3} (modes 0, 6..9, K = {counts:?})"
        ),
    )
}

fn convolution_support() -> Outcome {
    let mut worst: f64 = 0.0;
    for (t, r, c) in [(1e-3, 0.3, 3e8), (0.01, 1.0, 343.0)] {
        let step = sampling::support_grid_step(r, c);
        for n in [0, 1, 3, 8] {
            let got = sampling::legendre_support_check(&TimeSignal::Rect { duration: t }, r, n, c).unwrap();
            worst = worst.max((got - (t + 2.0 * r / c)).abs() / step);
        }
    }
    outcome(worst <= 1.0, format!("max |support - (T + 2r/c)| = {worst:.2e} grid steps"))
}

type Criterion = (usize, &'static str, fn() -> Outcome, Duration);

fn main() {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 12] = [
        (1, "shannon_reduction", shannon_reduction, secs(1)),
        (2, "narrowband_reduction", narrowband_reduction, secs(1)),
        (3, "pinned_point", pinned_point, secs(1)),
        (4, "monotone_trends", monotone_trends, secs(10)),
        (5, "bessel_bound", bessel_bound, secs(5)),
        (6, "harmonic_orthonormality", harmonic_orthonormality, secs(5)),
        (7, "jacobi_anger_round_trip", jacobi_anger, secs(30)),
        (8, "projected_noise", noise_projection, secs(60)),
        (9, "one_sided_detection", one_sided_detection, secs(30)),
        (10, "phi_orthogonality", phi_orthogonality, secs(10)),
        (11, "sampling_and_reconstruction", sampling_and_reconstruction, secs(10)),
        (12, "convolution_support", convolution_support, secs(10)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, name, run, budget) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(o) if elapsed > budget => (false, format!("{} [over budget {budget:?}]", o.detail)),
            Ok(o) => (o.passed, o.detail),
            Err(_) => (false, "panicked".to_string()),
        };
        if !passed {
            failed += 1;
        }
        println!(
            "{} criterion {id:>2} {name} ({:.2} s): {detail}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
