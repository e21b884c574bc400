//! Per-mode bandpass sampling in time.
//!
//! A mode coefficient `Ψ_nm(r, ω)` restricted to its usable band is a
//! bandpass signal in time; it is carried by samples spaced `1/W_n` apart and
//! rebuilt with modulated sincs `φ_ℓ`. Frequencies are in hertz except where a
//! spectrum closure takes angular frequency `ω` in rad/s.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dofcore::ModeBandwidth;
use crate::error::{domain, Error, Result};
use crate::integrate;
use crate::specfun::{gauss_legendre, legendre_p};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative tolerance of the adaptive inverse transform.
pub const TIME_SIGNAL_TOL: f64 = 1e-9;

/// Clearance between test pulses and the window edges, in sample periods.
pub const PULSE_GUARD: f64 = 4.0;

/// Smallest orthogonality window, in units of `1/W_n`.
pub const MIN_WINDOW_PERIODS: f64 = 50.0;

/// Usable band of one mode: `[lo, hi]` hertz, width `w_n`, midpoint `w_0n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeBand {
    pub w_n: f64,
    pub w_0n: f64,
    pub lo: f64,
    pub hi: f64,
}

impl ModeBand {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi >= lo) {
            return domain(format!("invalid band [{lo}, {hi}]"));
        }
        Ok(Self {
            w_n: hi - lo,
            w_0n: 0.5 * (lo + hi),
            lo,
            hi,
        })
    }

    pub fn from_mode(mode: &ModeBandwidth) -> Result<Self> {
        Self::new(mode.band_lo, mode.band_hi)
    }

    /// Sample spacing `1/W_n`.
    pub fn spacing(&self) -> f64 {
        1.0 / self.w_n
    }

    fn require_width(&self) -> Result<()> {
        if self.w_n > 0.0 {
            Ok(())
        } else {
            domain("mode band has zero width")
        }
    }
}

/// Samples `ψ(ℓ/W_n)` for `ℓ ∈ [l_lo, l_hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTrain {
    pub values: Vec<Complex64>,
    pub l_lo: i64,
    pub l_hi: i64,
    pub spacing: f64,
}

impl SampleTrain {
    pub fn new(values: Vec<Complex64>, l_lo: i64, spacing: f64) -> Self {
        let l_hi = l_lo + values.len() as i64 - 1;
        Self {
            values,
            l_lo,
            l_hi,
            spacing,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Fourier-series coefficients `c_ℓ = ψ(ℓ/W_n) / W_n`.
    pub fn coefficients(&self) -> Vec<Complex64> {
        self.values.iter().map(|v| v * self.spacing).collect()
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.l_lo..=self.l_hi
    }
}

fn band_integral(
    spectrum: &dyn Fn(f64) -> Complex64,
    band: &ModeBand,
    t: f64,
    quad: impl Fn(&dyn Fn(f64) -> Complex64, f64, f64) -> Complex64,
) -> Complex64 {
    if band.w_n == 0.0 {
        return ZERO;
    }
    let f = |w: f64| spectrum(w) * Complex64::from_polar(1.0, w * t);
    quad(&f, 2.0 * PI * band.lo, 2.0 * PI * band.hi) / (2.0 * PI)
}

/// `ψ(t) = (1/2π) ∫_{Ω_n} Ψ(ω) e^{iωt} dω` by adaptive Gauss–Kronrod.
/// `spectrum` takes angular frequency. A zero-width band gives 0.
pub fn mode_time_signal(
    spectrum: &dyn Fn(f64) -> Complex64,
    band: &ModeBand,
    t: f64,
) -> Complex64 {
    band_integral(spectrum, band, t, |f, a, b| {
        integrate::adaptive(f, a, b, TIME_SIGNAL_TOL)
    })
}

/// Samples `ψ(ℓ/W_n)` through [`mode_time_signal`].
pub fn sample_mode_signal(
    spectrum: &dyn Fn(f64) -> Complex64,
    band: &ModeBand,
    l_lo: i64,
    l_hi: i64,
) -> Result<SampleTrain> {
    band.require_width()?;
    let values = (l_lo..=l_hi)
        .map(|l| mode_time_signal(spectrum, band, l as f64 / band.w_n))
        .collect();
    Ok(SampleTrain::new(values, l_lo, band.spacing()))
}

/// Fourier-series coefficients of the band-limited spectrum,
/// `c_ℓ = (1/(2πW_n)) ∫_{Ω_n} Ψ(ω) e^{iωℓ/W_n} dω`, returned as the train
/// `W_n c_ℓ` so it compares directly with samples. Uses composite
/// Gauss–Legendre with panel doubling, independent of [`mode_time_signal`].
pub fn fourier_coefficients(
    spectrum: &dyn Fn(f64) -> Complex64,
    band: &ModeBand,
    l_lo: i64,
    l_hi: i64,
) -> Result<SampleTrain> {
    band.require_width()?;
    let values = (l_lo..=l_hi)
        .map(|l| {
            band_integral(spectrum, band, l as f64 / band.w_n, |f, a, b| {
                integrate::doubling(f, a, b, 1e-13)
            })
        })
        .collect();
    Ok(SampleTrain::new(values, l_lo, band.spacing()))
}

/// `max_ℓ |W_n c_ℓ − ψ(ℓ/W_n)| / max_ℓ |ψ(ℓ/W_n)|`.
pub fn sample_identity_error(
    spectrum: &dyn Fn(f64) -> Complex64,
    band: &ModeBand,
    l_lo: i64,
    l_hi: i64,
) -> Result<f64> {
    let coeffs = fourier_coefficients(spectrum, band, l_lo, l_hi)?;
    let samples = sample_mode_signal(spectrum, band, l_lo, l_hi)?;
    let scale = samples.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::ZeroField);
    }
    let worst = coeffs
        .values
        .iter()
        .zip(&samples.values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(worst / scale)
}

/// `sin x / x` with the removable point handled by its series.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `φ_ℓ(t) = e^{i2πW_0n(t − ℓ/W_n)} sinc(πW_n(t − ℓ/W_n))`.
pub fn phi_basis(l: i64, t: f64, band: &ModeBand) -> Complex64 {
    let dt = t - l as f64 / band.w_n;
    Complex64::from_polar(sinc(PI * band.w_n * dt), 2.0 * PI * band.w_0n * dt)
}

/// `∫_U^∞ du / ((u − a)(u − b))` for `U > max(a, b)`.
fn tail_half(a: f64, b: f64, u: f64) -> f64 {
    if a == b {
        1.0 / (u - a)
    } else {
        ((u - b) / (u - a)).ln() / (a - b)
    }
}

/// `∫_U^∞ cos(2πu) g(u) du` with `g = 1/((u − a)(u − b))`, by two steps of
/// integration by parts.
fn tail_cos(a: f64, b: f64, u: f64) -> f64 {
    let (p, q) = (u - a, u - b);
    let g = 1.0 / (p * q);
    let g1 = -g * (1.0 / p + 1.0 / q);
    let g2 = g * (2.0 / (p * p) + 2.0 / (q * q) + 2.0 / (p * q));
    let w = 2.0 * PI * u;
    let k = 2.0 * PI;
    -w.sin() * g / k - w.cos() * g1 / (k * k) + w.sin() * g2 / (k * k * k)
}

/// `∫_{−X}^{X} φ_ℓ(t) φ*_ℓ'(t) dt` plus the analytic tail beyond `±X`.
///
/// The product reduces to `(−1)^{ℓ+ℓ'} e^{iθ} sin²(πW_n t) / (π²W_n²(t − ℓ/W_n)(t − ℓ'/W_n))`;
/// the window is integrated by composite Gauss–Legendre on half-period panels
/// and the remainder beyond the window is added in closed form. Requires
/// `window >= 50/W_n`.
pub fn phi_inner(l: i64, l2: i64, band: &ModeBand, window: f64) -> Result<Complex64> {
    band.require_width()?;
    let required = MIN_WINDOW_PERIODS / band.w_n;
    if window.is_nan() || window < required {
        return Err(Error::WindowTooSmall { window, required });
    }
    let lim = (l.abs().max(l2.abs()) as f64 + 1.0) / band.w_n;
    if window <= lim {
        return Err(Error::WindowTooSmall {
            window,
            required: lim,
        });
    }
    let panels = (4.0 * window * band.w_n).ceil() as usize;
    let body = integrate::composite(
        |t| phi_basis(l, t, band) * phi_basis(l2, t, band).conj(),
        -window,
        window,
        panels,
    );
    let (a, b, u) = (l as f64, l2 as f64, window * band.w_n);
    // u -> -u maps the left tail onto the right one with a, b negated.
    let tail = 0.5 * (tail_half(a, b, u) + tail_half(-a, -b, u))
        - 0.5 * (tail_cos(a, b, u) + tail_cos(-a, -b, u));
    let sign = if (l + l2) % 2 == 0 { 1.0 } else { -1.0 };
    let phase = Complex64::from_polar(1.0, 2.0 * PI * band.w_0n * (l2 - l) as f64 / band.w_n);
    Ok(body + phase * (sign * tail / (PI * PI * band.w_n)))
}

/// `ψ̂(t) = Σ_ℓ ψ(ℓ/W_n) φ_ℓ(t)`.
pub fn reconstruct(samples: &SampleTrain, band: &ModeBand, t: f64) -> Result<Complex64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    band.require_width()?;
    Ok(samples
        .indices()
        .zip(&samples.values)
        .map(|(l, v)| v * phi_basis(l, t, band))
        .sum())
}

/// Relative L2 error of `reconstruct` against `truth` on `points` uniform
/// instants spanning `[t0, t1]`.
pub fn reconstruction_error(
    samples: &SampleTrain,
    band: &ModeBand,
    truth: impl Fn(f64) -> Complex64,
    t0: f64,
    t1: f64,
    points: usize,
) -> Result<f64> {
    let mut err = 0.0;
    let mut norm = 0.0;
    for k in 0..points {
        let t = t0 + (t1 - t0) * (k as f64 + 0.5) / points as f64;
        let want = truth(t);
        err += (reconstruct(samples, band, t)? - want).norm_sqr();
        norm += want.norm_sqr();
    }
    if norm == 0.0 {
        return Ok(err.sqrt());
    }
    Ok((err / norm).sqrt())
}

/// Band-limited test signal made of shifted pulses with a Hann-tapered
/// spectrum `H(f) Σ_j a_j e^{−iωτ_j}` on the band, `H = ½ + ½cos(2π(f − W_0n)/W_n)`.
/// Each pulse decays as `1/t³` in time.
#[derive(Debug, Clone)]
pub struct PulseTrain {
    pub band: ModeBand,
    pub centers: Vec<f64>,
    pub amplitudes: Vec<Complex64>,
}

impl PulseTrain {
    /// `count` pulses with centres uniform on `[t0, t1]` and standard complex
    /// Gaussian amplitudes.
    pub fn random(band: ModeBand, t0: f64, t1: f64, count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let centers = (0..count).map(|_| rng.random_range(t0..=t1)).collect();
        let amplitudes = (0..count)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            })
            .collect();
        Self {
            band,
            centers,
            amplitudes,
        }
    }

    /// Spectrum at angular frequency `w`; zero off the band.
    pub fn spectrum(&self, w: f64) -> Complex64 {
        let f = w / (2.0 * PI);
        if f < self.band.lo || f > self.band.hi {
            return ZERO;
        }
        let taper = 0.5 + 0.5 * (2.0 * PI * (f - self.band.w_0n) / self.band.w_n).cos();
        taper * self
            .centers
            .iter()
            .zip(&self.amplitudes)
            .map(|(tau, a)| a * Complex64::from_polar(1.0, -w * tau))
            .sum::<Complex64>()
    }

    /// Closed-form time signal.
    pub fn at(&self, t: f64) -> Complex64 {
        let b = &self.band;
        let pulse = |dt: f64| {
            let x = PI * b.w_n * dt;
            let env = 0.5 * sinc(x) + 0.25 * (sinc(x + PI) + sinc(x - PI));
            Complex64::from_polar(b.w_n * env, 2.0 * PI * b.w_0n * dt)
        };
        self.centers
            .iter()
            .zip(&self.amplitudes)
            .map(|(tau, a)| a * pulse(t - tau))
            .sum()
    }
}

/// Reconstruction experiment on `[0, t_eff]`: a random pulse train with
/// `⌊W_n t_eff⌋ + 1` pulses is sampled at `ℓ/W_n` for `ℓ ∈ [0, samples)` and
/// rebuilt; returns the relative L2 error over the interior 80% of the window.
///
/// Pulse centres keep [`PULSE_GUARD`] sample periods clear of both window
/// edges (when the window is wide enough), so the signal's content lies
/// inside the observation window.
pub fn reconstruction_trial(band: &ModeBand, t_eff: f64, samples: usize, seed: u64) -> Result<f64> {
    band.require_width()?;
    if !(t_eff > 0.0 && t_eff.is_finite()) {
        return domain("observation window must be positive");
    }
    let pulses = (band.w_n * t_eff).floor() as usize + 1;
    let guard = PULSE_GUARD / band.w_n;
    let guard = if t_eff > 4.0 * guard { guard } else { 0.0 };
    let signal = PulseTrain::random(*band, guard, t_eff - guard, pulses, seed);
    let train = sample_mode_signal(&|w| signal.spectrum(w), band, 0, samples as i64 - 1)?;
    let points = 20 * pulses.max(50);
    reconstruction_error(
        &train,
        band,
        |t| signal.at(t),
        0.1 * t_eff,
        0.9 * t_eff,
        points,
    )
}

/// A time-limited source signal starting at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeSignal {
    /// Unit impulse at `t = 0`.
    Impulse,
    /// Unit amplitude on `[0, duration]`.
    Rect { duration: f64 },
}

impl TimeSignal {
    pub fn duration(&self) -> f64 {
        match *self {
            TimeSignal::Impulse => 0.0,
            TimeSignal::Rect { duration } => duration,
        }
    }
}

/// Time step of the support scan, `(r/c)/256`.
pub fn support_grid_step(r: f64, c: f64) -> f64 {
    r / c / 256.0
}

/// `y(t) = ∫ a(s) P_n((t − s)c/r) ds` over `|t − s| <= r/c`.
pub fn legendre_convolve(signal: &TimeSignal, r: f64, n: usize, c: f64, t: f64) -> Result<f64> {
    let half = r / c;
    match *signal {
        TimeSignal::Impulse => {
            if t.abs() > half {
                Ok(0.0)
            } else {
                legendre_p(n, (t / half).clamp(-1.0, 1.0))
            }
        }
        TimeSignal::Rect { duration } => {
            let lo = (t - half).max(0.0);
            let hi = (t + half).min(duration);
            if hi <= lo {
                return Ok(0.0);
            }
            // Polynomial integrand of degree n: exact with n/2 + 1 nodes.
            let (xs, ws) = gauss_legendre(n / 2 + 1);
            let (mid, rad) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            let mut sum = 0.0;
            for (x, w) in xs.iter().zip(&ws) {
                let s = mid + rad * x;
                sum += w * legendre_p(n, ((t - s) / half).clamp(-1.0, 1.0))?;
            }
            Ok(sum * rad)
        }
    }
}

/// Measured support length of `a * P_n(tc/r)`: the distance between the
/// outermost instants where `|y|` exceeds `1e-9` of its peak. The grid of step
/// [`support_grid_step`] is scanned inward from both ends; each edge is then
/// refined by bisection between the last quiet and first active grid instant.
pub fn legendre_support_check(signal: &TimeSignal, r: f64, n: usize, c: f64) -> Result<f64> {
    let duration = signal.duration();
    if !(duration >= 0.0 && duration.is_finite()) {
        return domain("signal duration must be finite and >= 0");
    }
    if !(c > 0.0 && c.is_finite()) {
        return domain("wave speed must be positive");
    }
    if !(r >= 0.0 && r.is_finite()) {
        return domain("radius must be finite and >= 0");
    }
    if r == 0.0 {
        return Ok(duration);
    }
    let half = r / c;
    let h = support_grid_step(r, c);
    let y = |t: f64| legendre_convolve(signal, r, n, c, t).map(f64::abs);

    let mut peak: f64 = 0.0;
    for k in 0..=512 {
        let u = -half + 2.0 * half * k as f64 / 512.0;
        peak = peak.max(y(u)?).max(y(duration + u)?);
    }
    peak = peak.max(y(0.5 * duration)?);
    if peak == 0.0 {
        return Err(Error::ZeroField);
    }
    let floor = 1e-9 * peak;

    let margin = 8;
    let start = -half - margin as f64 * h;
    let steps = ((duration + 2.0 * half) / h).ceil() as i64 + 2 * margin;
    let at = |k: i64| start + k as f64 * h;
    let mut left = None;
    for k in 0..=steps {
        if y(at(k))? > floor {
            left = Some(k);
            break;
        }
    }
    let left = left.ok_or(Error::ZeroField)?;
    let mut right = left;
    for k in (left..=steps).rev() {
        if y(at(k))? > floor {
            right = k;
            break;
        }
    }
    let lo_edge = crossing(&y, floor, at(left - 1), at(left))?;
    let hi_edge = crossing(&y, floor, at(right + 1), at(right))?;
    Ok(hi_edge - lo_edge)
}

/// Bisects between a quiet instant and an active one for the threshold crossing.
fn crossing(y: &impl Fn(f64) -> Result<f64>, floor: f64, quiet: f64, active: f64) -> Result<f64> {
    let (mut q, mut a) = (quiet, active);
    for _ in 0..60 {
        let mid = 0.5 * (q + a);
        if mid == q || mid == a {
            break;
        }
        if y(mid)? > floor {
            a = mid;
        } else {
            q = mid;
        }
    }
    Ok(0.5 * (q + a))
}
