//! Brute-force wavefield simulation on a sphere.
//!
//! Plane-wave fields are synthesized on quadrature nodes at radius `R`,
//! projected onto spherical harmonics, perturbed with white Gaussian noise,
//! and reduced to per-mode SNR curves. Arrays are laid out `[node, freq]` for
//! fields and `[mode, freq]` for spectra, modes in [`ModeIndex::flat`] order.

use std::f64::consts::PI;

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{
    fill_harmonics, make_quadrature, sph_bessel_j, QuadratureRule, SpherePoint, ModeIndex,
    MAX_BESSEL_ORDER,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A far-field plane wave arriving from `direction`, with its complex
/// spectrum sampled on the simulation frequency grid.
#[derive(Debug, Clone)]
pub struct PlaneWaveSource {
    pub direction: SpherePoint,
    pub amplitude: Vec<Complex64>,
}

/// Observation sphere of a given radius with its quadrature rule.
#[derive(Debug, Clone)]
pub struct SphericalGrid {
    pub radius: f64,
    pub rule: QuadratureRule,
}

impl SphericalGrid {
    pub fn new(radius: f64, degree: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return domain(format!("grid radius must be positive, got {radius}"));
        }
        Ok(Self {
            radius,
            rule: make_quadrature(degree)?,
        })
    }
}

/// Harmonic coefficients `Ψ_nm(r, ω)` on a frequency grid.
#[derive(Debug, Clone)]
pub struct ModeSpectrum {
    pub radius: f64,
    /// Frequencies in hertz.
    pub freqs: Vec<f64>,
    /// Highest spatial mode held.
    pub order: usize,
    /// `[(order + 1)², freqs.len()]`.
    pub coeffs: Array2<Complex64>,
}

impl ModeSpectrum {
    pub fn coeff(&self, idx: ModeIndex, freq: usize) -> Complex64 {
        self.coeffs[[idx.flat(), freq]]
    }

    /// Largest coefficient magnitude relative error against `other`,
    /// normalized by the largest magnitude in `other` at the same frequency.
    pub fn max_relative_difference(&self, other: &ModeSpectrum) -> f64 {
        let rows = self.coeffs.nrows().min(other.coeffs.nrows());
        let mut worst: f64 = 0.0;
        for f in 0..self.freqs.len() {
            let scale = other
                .coeffs
                .column(f)
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            if scale == 0.0 {
                continue;
            }
            for k in 0..rows {
                let d = (self.coeffs[[k, f]] - other.coeffs[[k, f]]).norm() / scale;
                worst = worst.max(d);
            }
        }
        worst
    }
}

/// White Gaussian noise on the sphere, specified by its mode-domain variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Variance of each projected mode coefficient `ν_nm`.
    pub sigma0_sq: f64,
    /// Bound on the signal spectrum power `|α_nm|²`.
    pub alpha_max_sq: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn snr_alpha_max(&self) -> f64 {
        self.alpha_max_sq / self.sigma0_sq
    }

    /// Independent realization for Monte Carlo trial `trial`.
    pub fn for_trial(&self, trial: u64) -> Self {
        Self {
            seed: splitmix64(self.seed ^ splitmix64(trial.wrapping_add(1))),
            ..*self
        }
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `points` evenly spaced frequencies covering `[lo, hi]` inclusive.
pub fn uniform_frequencies(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points).map(|i| lo + i as f64 * step).collect()
        }
    }
}

/// Spherical-harmonic content of a plane wave with `kR = max_kr`, generous
/// enough that the truncated Jacobi–Anger tail is far below 1e-10.
pub fn field_order(max_kr: f64) -> usize {
    max_kr.ceil() as usize + 20
}

/// Quadrature degree needed to analyze up to `order` a field of plane waves
/// with `kR <= max_kr`.
pub fn required_degree(order: usize, max_kr: f64) -> usize {
    order + field_order(max_kr)
}

fn check_sources(sources: &[PlaneWaveSource], freqs: &[f64]) -> Result<()> {
    if sources.is_empty() {
        return Err(Error::NoSources);
    }
    for s in sources {
        if s.amplitude.len() != freqs.len() {
            return Err(Error::LengthMismatch {
                expected: freqs.len(),
                got: s.amplitude.len(),
            });
        }
    }
    Ok(())
}

/// Samples `Σ_s A_s(ω) exp(i (ω/c) R x̂·ŷ_s)` at every grid node.
pub fn synthesize_field(
    sources: &[PlaneWaveSource],
    grid: &SphericalGrid,
    freqs: &[f64],
    wave_speed: f64,
) -> Result<Array2<Complex64>> {
    check_sources(sources, freqs)?;
    let dirs: Vec<[f64; 3]> = sources.iter().map(|s| s.direction.unit_vector()).collect();
    let rows: Vec<Complex64> = grid
        .rule
        .nodes()
        .par_iter()
        .flat_map_iter(|node| {
            let x = node.unit_vector();
            let cosines: Vec<f64> = dirs
                .iter()
                .map(|y| x[0] * y[0] + x[1] * y[1] + x[2] * y[2])
                .collect();
            freqs.iter().enumerate().map(move |(f, &freq)| {
                let kr = 2.0 * PI * freq / wave_speed * grid.radius;
                sources
                    .iter()
                    .zip(&cosines)
                    .map(|(s, &cos)| s.amplitude[f] * Complex64::from_polar(1.0, kr * cos))
                    .sum::<Complex64>()
            })
        })
        .collect();
    Ok(Array2::from_shape_vec((grid.rule.len(), freqs.len()), rows).expect("shape"))
}

/// `α_nm(ω) = Σ_s 4π iⁿ A_s(ω) Y*_nm(ŷ_s)` for `n <= order`.
pub fn theoretical_alpha(
    sources: &[PlaneWaveSource],
    freqs: &[f64],
    order: usize,
) -> Result<Array2<Complex64>> {
    check_sources(sources, freqs)?;
    let modes = ModeIndex::count(order);
    let mut alpha = Array2::from_elem((modes, freqs.len()), ZERO);
    let mut y = vec![ZERO; modes];
    for s in sources {
        fill_harmonics(order, s.direction.theta, s.direction.phi, &mut y);
        for (k, yk) in y.iter().enumerate() {
            let n = ModeIndex::from_flat(k).n();
            let weight = i_pow(n) * yk.conj() * (4.0 * PI);
            for (f, a) in s.amplitude.iter().enumerate() {
                alpha[[k, f]] += weight * a;
            }
        }
    }
    Ok(alpha)
}

fn i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Jacobi–Anger coefficients `Ψ_nm = α_nm(ω) j_n(ωR/c)` of a plane-wave field.
pub fn theoretical_modes(
    sources: &[PlaneWaveSource],
    radius: f64,
    freqs: &[f64],
    order: usize,
    wave_speed: f64,
) -> Result<ModeSpectrum> {
    if order > MAX_BESSEL_ORDER {
        return domain(format!("mode order {order} exceeds {MAX_BESSEL_ORDER}"));
    }
    let mut coeffs = theoretical_alpha(sources, freqs, order)?;
    for (f, &freq) in freqs.iter().enumerate() {
        let kr = 2.0 * PI * freq * radius / wave_speed;
        for n in 0..=order {
            let j = sph_bessel_j(n, kr)?;
            for k in n * n..(n + 1) * (n + 1) {
                coeffs[[k, f]] *= j;
            }
        }
    }
    Ok(ModeSpectrum {
        radius,
        freqs: freqs.to_vec(),
        order,
        coeffs,
    })
}

/// Per-ring tables for the ring-by-ring harmonic projection.
struct RingTables {
    /// `p̄_n^m(cos θ_i)` for `m >= 0`, indexed `[ring][n² + n + m]`.
    legendre: Vec<Vec<f64>>,
    /// Quadrature weight of each node on ring `i`.
    weight: Vec<f64>,
    /// `e^{-imφ_j}` indexed `[m][j]`.
    twiddle: Vec<Vec<Complex64>>,
}

impl RingTables {
    fn new(rule: &QuadratureRule, order: usize) -> Self {
        let n_phi = rule.azimuths();
        let mut y = vec![ZERO; ModeIndex::count(order)];
        let mut legendre = Vec::with_capacity(rule.rings());
        let mut weight = Vec::with_capacity(rule.rings());
        for i in 0..rule.rings() {
            let q = i * n_phi;
            fill_harmonics(order, rule.nodes()[q].theta, 0.0, &mut y);
            legendre.push(y.iter().map(|c| c.re).collect());
            weight.push(rule.weights()[q]);
        }
        let phis: Vec<f64> = rule.nodes()[..n_phi].iter().map(|p| p.phi).collect();
        let twiddle = (0..=order)
            .map(|m| {
                phis.iter()
                    .map(|&phi| Complex64::from_polar(1.0, -(m as f64) * phi))
                    .collect()
            })
            .collect();
        Self {
            legendre,
            weight,
            twiddle,
        }
    }

    /// Projects one frequency column onto all harmonics up to `order`.
    fn project(&self, column: &[Complex64], order: usize, out: &mut [Complex64]) {
        out.fill(ZERO);
        let n_phi = self.twiddle[0].len();
        for (i, ring) in column.chunks(n_phi).enumerate() {
            let w = self.weight[i];
            let p = &self.legendre[i];
            for m in 0..=order {
                let tw = &self.twiddle[m];
                let (mut pos, mut neg) = (ZERO, ZERO);
                for (v, t) in ring.iter().zip(tw) {
                    pos += v * t;
                    neg += v * t.conj();
                }
                let sign = if m % 2 == 0 { w } else { -w };
                for n in m..=order {
                    let base = n * n + n;
                    out[base + m] += pos * (w * p[base + m]);
                    if m > 0 {
                        out[base - m] += neg * (sign * p[base + m]);
                    }
                }
            }
        }
    }
}

/// Projects a sampled field onto spherical harmonics up to `order`:
/// `Ψ_nm(R, ω) = ∫ Ψ(R, x̂, ω) Y*_nm(x̂) dΩ` by the grid's quadrature.
pub fn analyze_modes(
    field: ArrayView2<Complex64>,
    grid: &SphericalGrid,
    order: usize,
    freqs: &[f64],
) -> Result<ModeSpectrum> {
    let rule = &grid.rule;
    if order > rule.max_degree() {
        return Err(Error::Aliasing {
            requested: order,
            supported: rule.max_degree(),
            required: order,
        });
    }
    if field.nrows() != rule.len() {
        return Err(Error::LengthMismatch {
            expected: rule.len(),
            got: field.nrows(),
        });
    }
    if field.ncols() != freqs.len() {
        return Err(Error::LengthMismatch {
            expected: freqs.len(),
            got: field.ncols(),
        });
    }
    let tables = RingTables::new(rule, order);
    let modes = ModeIndex::count(order);
    let columns: Vec<Vec<Complex64>> = (0..freqs.len())
        .into_par_iter()
        .map(|f| {
            let column: Vec<Complex64> = field.column(f).to_vec();
            let mut out = vec![ZERO; modes];
            tables.project(&column, order, &mut out);
            out
        })
        .collect();
    let mut coeffs = Array2::from_elem((modes, freqs.len()), ZERO);
    for (f, col) in columns.into_iter().enumerate() {
        for (k, v) in col.into_iter().enumerate() {
            coeffs[[k, f]] = v;
        }
    }
    Ok(ModeSpectrum {
        radius: grid.radius,
        freqs: freqs.to_vec(),
        order,
        coeffs,
    })
}

/// Adds circularly-symmetric complex Gaussian noise at every node and
/// frequency. Node `q` gets variance `σ0²/w_q`, so each projected coefficient
/// `ν_nm` has variance exactly `σ0²` and distinct modes are uncorrelated.
///
/// Each frequency column draws from its own ChaCha8 stream keyed by the
/// seed, so the output is reproducible bit-for-bit and independent of the
/// thread count.
pub fn add_noise(
    field: ArrayView2<Complex64>,
    grid: &SphericalGrid,
    noise: &NoiseModel,
) -> Result<Array2<Complex64>> {
    if field.nrows() != grid.rule.len() {
        return Err(Error::LengthMismatch {
            expected: grid.rule.len(),
            got: field.nrows(),
        });
    }
    if !(noise.sigma0_sq >= 0.0 && noise.sigma0_sq.is_finite()) {
        return domain("noise variance must be finite and >= 0");
    }
    let mut out = field.to_owned();
    if noise.sigma0_sq == 0.0 {
        return Ok(out);
    }
    let scales: Vec<f64> = grid
        .rule
        .weights()
        .iter()
        .map(|w| (0.5 * noise.sigma0_sq / w).sqrt())
        .collect();
    let draws: Vec<Vec<Complex64>> = (0..out.ncols())
        .into_par_iter()
        .map(|f| {
            let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
            rng.set_stream(f as u64);
            scales
                .iter()
                .map(|s| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re * s, im * s)
                })
                .collect()
        })
        .collect();
    for (f, column) in draws.into_iter().enumerate() {
        for (q, v) in column.into_iter().enumerate() {
            out[[q, f]] += v;
        }
    }
    Ok(out)
}

/// `SNR_nm(ω) = |Ψ_nm(ω)|² / σ0²` with `Ψ_nm = α_nm j_n(ωR/c)` taken from a
/// deterministic signal spectrum.
pub fn mode_snr(signal: &ModeSpectrum, noise: &NoiseModel) -> Array2<f64> {
    signal.coeffs.mapv(|c| c.norm_sqr() / noise.sigma0_sq)
}

/// Lowest grid frequency where some order `m` of mode `n` reaches `gamma`,
/// or `+∞` if none does.
pub fn empirical_critical_frequency(
    snr: &Array2<f64>,
    freqs: &[f64],
    gamma: f64,
    n: usize,
) -> f64 {
    let rows = n * n..((n + 1) * (n + 1)).min(snr.nrows());
    for (f, &freq) in freqs.iter().enumerate() {
        if rows.clone().any(|k| snr[[k, f]] >= gamma) {
            return freq;
        }
    }
    f64::INFINITY
}

/// Worst relative mismatch between surface power and summed mode power,
/// `|∫|Ψ|² dΩ - Σ|Ψ_nm|²| / ∫|Ψ|² dΩ`, over frequencies with nonzero power.
pub fn parseval_check(
    field: ArrayView2<Complex64>,
    grid: &SphericalGrid,
    spectrum: &ModeSpectrum,
) -> Result<f64> {
    if field.nrows() != grid.rule.len() {
        return Err(Error::LengthMismatch {
            expected: grid.rule.len(),
            got: field.nrows(),
        });
    }
    let weights = grid.rule.weights();
    let mut worst: f64 = 0.0;
    let mut any = false;
    for f in 0..field.ncols() {
        let surface: f64 = field
            .column(f)
            .iter()
            .zip(weights)
            .map(|(v, w)| v.norm_sqr() * w)
            .sum();
        if surface == 0.0 {
            continue;
        }
        any = true;
        let modal: f64 = spectrum.coeffs.column(f).iter().map(|c| c.norm_sqr()).sum();
        worst = worst.max((surface - modal).abs() / surface);
    }
    if !any {
        return Err(Error::ZeroField);
    }
    Ok(worst)
}

/// Monte Carlo statistics of projected noise coefficients.
#[derive(Debug, Clone, Serialize)]
pub struct NoiseStats {
    pub trials: usize,
    /// Sample `E|ν_nm|²` per mode slot, flat order.
    pub variance: Vec<f64>,
    /// Largest `|Σ ν_i ν_j*| / sqrt(Σ|ν_i|² Σ|ν_j|²)` over distinct slots.
    pub max_correlation: f64,
}

/// Projects `trials` independent noise-only fields onto modes up to `order`.
pub fn projected_noise_stats(
    grid: &SphericalGrid,
    order: usize,
    noise: &NoiseModel,
    trials: usize,
) -> Result<NoiseStats> {
    if order > grid.rule.max_degree() {
        return Err(Error::Aliasing {
            requested: order,
            supported: grid.rule.max_degree(),
            required: order,
        });
    }
    let zero = Array2::from_elem((grid.rule.len(), 1), ZERO);
    let tables = RingTables::new(&grid.rule, order);
    let modes = ModeIndex::count(order);
    let samples: Vec<Vec<Complex64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let noisy = add_noise(zero.view(), grid, &noise.for_trial(t))?;
            let column: Vec<Complex64> = noisy.column(0).to_vec();
            let mut out = vec![ZERO; modes];
            tables.project(&column, order, &mut out);
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut power = vec![0.0; modes];
    let mut cross = vec![ZERO; modes * modes];
    for nu in &samples {
        for i in 0..modes {
            power[i] += nu[i].norm_sqr();
            for j in (i + 1)..modes {
                cross[i * modes + j] += nu[i] * nu[j].conj();
            }
        }
    }
    let mut max_correlation: f64 = 0.0;
    for i in 0..modes {
        for j in (i + 1)..modes {
            let c = cross[i * modes + j].norm() / (power[i] * power[j]).sqrt();
            max_correlation = max_correlation.max(c);
        }
    }
    let variance = power.iter().map(|p| p / trials as f64).collect();
    Ok(NoiseStats {
        trials,
        variance,
        max_correlation,
    })
}

/// `count` plane waves from uniformly random directions with unit-modulus,
/// random-phase spectra on `freqs`.
pub fn random_sources(count: usize, freqs: &[f64], seed: u64) -> Vec<PlaneWaveSource> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let cos_theta: f64 = rng.random_range(-1.0..=1.0);
            let phi: f64 = rng.random_range(0.0..2.0 * PI);
            let amplitude = freqs
                .iter()
                .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI)))
                .collect();
            PlaneWaveSource {
                direction: SpherePoint {
                    theta: cos_theta.acos(),
                    phi,
                },
                amplitude,
            }
        })
        .collect()
}

/// Rescales source spectra so that `max |α_nm(ω)|²` over `n <= order` and the
/// frequency grid equals `alpha_max_sq`. Returns the scale factor applied.
pub fn normalize_to_alpha_max(
    sources: &mut [PlaneWaveSource],
    freqs: &[f64],
    order: usize,
    alpha_max_sq: f64,
) -> Result<f64> {
    let alpha = theoretical_alpha(sources, freqs, order)?;
    let peak = alpha.iter().map(|a| a.norm_sqr()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::ZeroField);
    }
    let scale = (alpha_max_sq / peak).sqrt();
    for s in sources.iter_mut() {
        for a in &mut s.amplitude {
            *a *= scale;
        }
    }
    Ok(scale)
}
