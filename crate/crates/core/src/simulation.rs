//! End-to-end simulation run for one scenario: synthesize a random
//! plane-wave field, project it onto modes, measure per-mode SNR and
//! detection cutoffs, and check them against the analytic results.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dofcore::{self, Scenario};
use crate::error::{domain, Error, Result};
use crate::sampling::{self, ModeBand};
use crate::specfun::{sph_bessel_j, sph_bessel_j_bound, MAX_BESSEL_ORDER, MAX_QUADRATURE_DEGREE};
use crate::wavefield::{self, NoiseModel, SphericalGrid};

/// Tolerances applied by [`run_simulation`].
pub const JACOBI_ANGER_TOL: f64 = 1e-8;
pub const PARSEVAL_TOL: f64 = 1e-8;
pub const NOISE_VARIANCE_TOL: f64 = 0.05;
pub const RECONSTRUCTION_TOL: f64 = 1e-2;
/// Highest mode entering the noise statistics.
pub const NOISE_ORDER: usize = 5;
/// Bounds on the reconstruction experiment's sample count.
pub const MIN_RECONSTRUCTION_SAMPLES: usize = 32;
pub const MAX_RECONSTRUCTION_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    /// Number of random plane-wave sources.
    pub sources: usize,
    /// Points on the frequency grid over `[F0 − W, F0 + W]`.
    pub freq_points: usize,
    /// Quadrature degree; the smallest alias-free degree when absent.
    pub quad_degree: Option<usize>,
    /// Highest analysed mode; `N_max` when absent.
    pub order: Option<usize>,
    pub seed: u64,
    /// Monte Carlo noise realizations; 0 skips the noise check.
    pub trials: usize,
    /// Mode-domain noise variance `σ0²`.
    pub sigma0_sq: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            sources: 6,
            freq_points: 513,
            quad_degree: None,
            order: None,
            seed: 0,
            trials: 10_000,
            sigma0_sq: 1.0,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sources == 0 {
            return Err(Error::NoSources);
        }
        if self.freq_points < 2 {
            return domain("freq_points must be >= 2");
        }
        if !(self.sigma0_sq > 0.0 && self.sigma0_sq.is_finite()) {
            return domain("sigma0_sq must be positive and finite");
        }
        Ok(())
    }
}

/// Analytic and measured cutoff for one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeDetection {
    pub n: usize,
    pub critical_freq: f64,
    /// First grid frequency where the mode reaches the threshold; `None` if
    /// it never does on the band.
    pub empirical_critical_freq: Option<f64>,
    /// `F̂_n >= F_n − Δf`.
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseCheck {
    pub trials: usize,
    pub order: usize,
    /// Largest `|Var(ν_nm)/σ0² − 1|` over modes.
    pub max_variance_deviation: f64,
    pub max_correlation: f64,
    pub correlation_limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionCheck {
    pub samples: usize,
    pub window: f64,
    pub error: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub order: usize,
    pub quad_degree: usize,
    pub max_kr: f64,
    pub freq_step: f64,
    pub detections: Vec<ModeDetection>,
    pub detectability_passed: bool,
    pub jacobi_anger_error: f64,
    pub jacobi_anger_passed: bool,
    pub parseval_degree: usize,
    pub parseval_error: f64,
    pub parseval_passed: bool,
    /// Grid points where measured SNR exceeded `(SNR)_{α,max} j_n²` or the
    /// power-law bound.
    pub snr_bound_violations: usize,
    pub noise: Option<NoiseCheck>,
    pub reconstruction: Option<ReconstructionCheck>,
    pub passed: bool,
}

/// Everything the detection scan needs, built once per run.
struct Setup {
    freqs: Vec<f64>,
    step: f64,
    order: usize,
    max_kr: f64,
    grid: SphericalGrid,
    noise: NoiseModel,
    sources: Vec<wavefield::PlaneWaveSource>,
}

fn setup(s: &Scenario, cfg: &SimulationConfig) -> Result<Setup> {
    s.validate()?;
    cfg.validate()?;
    if s.radius == 0.0 {
        return Err(Error::ZeroRadius);
    }
    let profile = dofcore::bandwidth_profile(s, None)?;
    let order = cfg.order.unwrap_or(profile.n_max);
    if order > MAX_BESSEL_ORDER {
        return Err(Error::Resource(format!(
            "analysis order {order} exceeds {MAX_BESSEL_ORDER}"
        )));
    }
    let (lo, hi) = s.band();
    let freqs = wavefield::uniform_frequencies(lo, hi, cfg.freq_points);
    let step = (hi - lo) / (cfg.freq_points - 1) as f64;
    let max_kr = 2.0 * PI * hi * s.radius / s.wave_speed;
    let required = wavefield::required_degree(order, max_kr);
    let degree = cfg.quad_degree.unwrap_or(required);
    if degree < required {
        return Err(Error::Aliasing {
            requested: order,
            supported: degree,
            required,
        });
    }
    if degree > MAX_QUADRATURE_DEGREE {
        return Err(Error::Resource(format!(
            "quadrature degree {degree} exceeds {MAX_QUADRATURE_DEGREE}"
        )));
    }
    let grid = SphericalGrid::new(s.radius, degree)?;
    let noise = NoiseModel {
        sigma0_sq: cfg.sigma0_sq,
        alpha_max_sq: s.snr_alpha_max * cfg.sigma0_sq,
        seed: cfg.seed,
    };
    let mut sources = wavefield::random_sources(cfg.sources, &freqs, cfg.seed);
    wavefield::normalize_to_alpha_max(&mut sources, &freqs, order, noise.alpha_max_sq)?;
    Ok(Setup {
        freqs,
        step,
        order,
        max_kr,
        grid,
        noise,
        sources,
    })
}

/// Runs the full pipeline with the library's critical frequency.
pub fn run_simulation(s: &Scenario, cfg: &SimulationConfig) -> Result<SimulationReport> {
    run_simulation_with(s, cfg, &dofcore::critical_frequency)
}

/// [`run_simulation`] comparing detections against a caller-supplied
/// critical-frequency rule.
pub fn run_simulation_with(
    s: &Scenario,
    cfg: &SimulationConfig,
    critical: &dyn Fn(&Scenario, usize) -> Result<f64>,
) -> Result<SimulationReport> {
    let st = setup(s, cfg)?;
    let field = wavefield::synthesize_field(&st.sources, &st.grid, &st.freqs, s.wave_speed)?;
    let measured = wavefield::analyze_modes(field.view(), &st.grid, st.order, &st.freqs)?;
    drop(field);
    let theory =
        wavefield::theoretical_modes(&st.sources, s.radius, &st.freqs, st.order, s.wave_speed)?;
    let jacobi_anger_error = measured.max_relative_difference(&theory);

    let snr = wavefield::mode_snr(&measured, &st.noise);
    let detections = detect(s, &st, &snr, critical)?;
    let snr_bound_violations = snr_bound_violations(s, &st, &snr)?;

    // Parseval needs every mode the field carries, on a rule exact for |Ψ|².
    let full = wavefield::field_order(st.max_kr);
    let parseval_degree = 2 * full;
    let pgrid = SphericalGrid::new(s.radius, parseval_degree)?;
    let pfield = wavefield::synthesize_field(&st.sources, &pgrid, &st.freqs, s.wave_speed)?;
    let pspec = wavefield::analyze_modes(pfield.view(), &pgrid, full, &st.freqs)?;
    let parseval_error = wavefield::parseval_check(pfield.view(), &pgrid, &pspec)?;
    let parseval_passed = parseval_error <= PARSEVAL_TOL;

    let noise = if cfg.trials > 0 {
        Some(noise_check(&st.grid, st.order.min(NOISE_ORDER), &st.noise, cfg.trials)?)
    } else {
        None
    };
    let reconstruction = reconstruction_check(s, cfg.seed)?;

    let detectability_passed = detections.iter().all(|d| d.passed);
    let jacobi_anger_passed = jacobi_anger_error <= JACOBI_ANGER_TOL;
    let passed = detectability_passed
        && jacobi_anger_passed
        && parseval_passed
        && snr_bound_violations == 0
        && noise.as_ref().is_none_or(|c| c.passed)
        && reconstruction.as_ref().is_none_or(|c| c.passed);
    Ok(SimulationReport {
        order: st.order,
        quad_degree: st.grid.rule.max_degree(),
        max_kr: st.max_kr,
        freq_step: st.step,
        detections,
        detectability_passed,
        jacobi_anger_error,
        jacobi_anger_passed,
        parseval_degree,
        parseval_error,
        parseval_passed,
        snr_bound_violations,
        noise,
        reconstruction,
        passed,
    })
}

/// Detection scan only: measured cutoffs for modes `1..=order` against
/// `critical`. Skips the auxiliary checks of [`run_simulation_with`].
pub fn detectability_scan(
    s: &Scenario,
    cfg: &SimulationConfig,
    critical: &dyn Fn(&Scenario, usize) -> Result<f64>,
) -> Result<Vec<ModeDetection>> {
    let st = setup(s, cfg)?;
    let field = wavefield::synthesize_field(&st.sources, &st.grid, &st.freqs, s.wave_speed)?;
    let measured = wavefield::analyze_modes(field.view(), &st.grid, st.order, &st.freqs)?;
    let snr = wavefield::mode_snr(&measured, &st.noise);
    detect(s, &st, &snr, critical)
}

fn detect(
    s: &Scenario,
    st: &Setup,
    snr: &ndarray::Array2<f64>,
    critical: &dyn Fn(&Scenario, usize) -> Result<f64>,
) -> Result<Vec<ModeDetection>> {
    (1..=st.order)
        .map(|n| {
            let critical_freq = critical(s, n)?;
            let f_hat = wavefield::empirical_critical_frequency(snr, &st.freqs, s.threshold, n);
            Ok(ModeDetection {
                n,
                critical_freq,
                empirical_critical_freq: f_hat.is_finite().then_some(f_hat),
                passed: f_hat >= critical_freq - st.step,
            })
        })
        .collect()
}

/// Counts grid points breaking `√SNR <= √SNRmax (|j_n| + 1e-8)` or
/// `|j_n| <= bound(n)`. The `1e-8` absorbs quadrature error in the measured
/// coefficients.
fn snr_bound_violations(s: &Scenario, st: &Setup, snr: &ndarray::Array2<f64>) -> Result<usize> {
    let mut count = 0;
    for (f, &freq) in st.freqs.iter().enumerate() {
        let kr = 2.0 * PI * freq * s.radius / s.wave_speed;
        for n in 0..=st.order {
            let j = sph_bessel_j(n, kr)?.abs();
            if j > sph_bessel_j_bound(n, kr) * (1.0 + 1e-12) {
                count += 1;
            }
            let cap = s.snr_alpha_max.sqrt() * (j + 1e-8);
            count += (n * n..(n + 1) * (n + 1))
                .filter(|&k| snr[[k, f]].sqrt() > cap)
                .count();
        }
    }
    Ok(count)
}

/// Projected-noise statistics on `grid` for modes up to `order`.
pub fn noise_check(
    grid: &SphericalGrid,
    order: usize,
    noise: &NoiseModel,
    trials: usize,
) -> Result<NoiseCheck> {
    let stats = wavefield::projected_noise_stats(grid, order, noise, trials)?;
    let max_variance_deviation = stats
        .variance
        .iter()
        .map(|v| (v / noise.sigma0_sq - 1.0).abs())
        .fold(0.0, f64::max);
    let correlation_limit = 3.0 / (trials as f64).sqrt();
    Ok(NoiseCheck {
        trials,
        order,
        max_variance_deviation,
        max_correlation: stats.max_correlation,
        correlation_limit,
        passed: max_variance_deviation <= NOISE_VARIANCE_TOL
            && stats.max_correlation < correlation_limit,
    })
}

/// Reconstruction of a random mode-0 signal from `⌊2W T_eff⌋ + 1` samples.
/// The window is clamped so the count lies in
/// `[MIN_RECONSTRUCTION_SAMPLES, MAX_RECONSTRUCTION_SAMPLES]`; below the
/// minimum the interior 80% sits within a few samples of the edges.
/// `None` for a zero-width band.
fn reconstruction_check(s: &Scenario, seed: u64) -> Result<Option<ReconstructionCheck>> {
    let (lo, hi) = s.band();
    if hi == lo {
        return Ok(None);
    }
    let band = ModeBand::new(lo, hi)?;
    let t_eff = dofcore::effective_time(s);
    let shortest = (MIN_RECONSTRUCTION_SAMPLES - 1) as f64 / band.w_n;
    let longest = (MAX_RECONSTRUCTION_SAMPLES - 1) as f64 / band.w_n;
    let window = t_eff.clamp(shortest, longest);
    let samples = (band.w_n * window).floor() as usize + 1;
    let error = sampling::reconstruction_trial(&band, window, samples, seed)?;
    Ok(Some(ReconstructionCheck {
        samples,
        window,
        error,
        passed: error <= RECONSTRUCTION_TOL,
    }))
}
