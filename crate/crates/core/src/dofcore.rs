//! Closed-form degrees-of-freedom results for a band-limited field observed
//! over a sphere of radius `R` for a time `T`.
//!
//! Logarithms are natural throughout. Truncation indices use the standard
//! ceiling and are clamped at zero; mode 0 is always full-band. DoF values are
//! reals, no final rounding is applied.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// `e·π`, the constant that sets the mode cutoff `n ≈ eπ f R / c`.
pub const E_PI: f64 = E * PI;

/// Default wave speed (vacuum speed of light, m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A physical observation problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// Radius of the observation sphere (m).
    pub radius: f64,
    /// Mid-band frequency `F0` (Hz).
    pub mid_freq: f64,
    /// Half bandwidth `W` (Hz); the band is `[F0 - W, F0 + W]`.
    pub half_bandwidth: f64,
    /// Observation time `T` (s).
    pub obs_time: f64,
    /// Wave speed `c` (m/s).
    pub wave_speed: f64,
    /// Detection threshold `γ` (linear power ratio).
    pub threshold: f64,
    /// Best-case signal SNR `|α_max|² / σ0²` (linear power ratio).
    pub snr_alpha_max: f64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("radius", self.radius),
            ("mid_freq", self.mid_freq),
            ("half_bandwidth", self.half_bandwidth),
            ("obs_time", self.obs_time),
            ("wave_speed", self.wave_speed),
            ("threshold", self.threshold),
            ("snr_alpha_max", self.snr_alpha_max),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return domain(format!("{name} must be finite, got {v}"));
            }
        }
        if self.radius < 0.0 {
            return domain("radius must be >= 0");
        }
        if self.mid_freq <= 0.0 {
            return domain("mid_freq must be > 0");
        }
        if self.half_bandwidth < 0.0 || self.half_bandwidth > self.mid_freq {
            return domain("half_bandwidth must lie in [0, mid_freq]");
        }
        if self.obs_time < 0.0 {
            return domain("obs_time must be >= 0");
        }
        if self.wave_speed <= 0.0 {
            return domain("wave_speed must be > 0");
        }
        if self.threshold <= 0.0 || self.snr_alpha_max <= 0.0 {
            return domain("threshold and snr_alpha_max must be > 0");
        }
        Ok(())
    }

    /// `ln((SNR)_{α,max} / γ)`.
    pub fn ln_rho(&self) -> f64 {
        (self.snr_alpha_max / self.threshold).ln()
    }

    /// `R / c`, the one-way transit time to the sphere's centre.
    pub fn transit_time(&self) -> f64 {
        self.radius / self.wave_speed
    }

    pub fn band(&self) -> (f64, f64) {
        (
            self.mid_freq - self.half_bandwidth,
            self.mid_freq + self.half_bandwidth,
        )
    }

    fn require_radius(&self) -> Result<()> {
        self.validate()?;
        if self.radius == 0.0 {
            return Err(Error::ZeroRadius);
        }
        Ok(())
    }
}

/// The dimensionless view: `R = aλ0`, `W = bF0`, `T = d/F0`, `ρ = SNR/γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedParams {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub rho: f64,
}

impl NormalizedParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("d", self.d), ("rho", self.rho)] {
            if !v.is_finite() {
                return domain(format!("{name} must be finite, got {v}"));
            }
        }
        if self.a < 0.0 || self.d < 0.0 {
            return domain("a and d must be >= 0");
        }
        if !(0.0..=1.0).contains(&self.b) {
            return domain("b must lie in [0, 1]");
        }
        if self.rho <= 0.0 {
            return domain("rho must be > 0");
        }
        Ok(())
    }

    pub fn from_scenario(s: &Scenario) -> Self {
        Self {
            a: s.radius * s.mid_freq / s.wave_speed,
            b: s.half_bandwidth / s.mid_freq,
            d: s.obs_time * s.mid_freq,
            rho: s.snr_alpha_max / s.threshold,
        }
    }

    /// Physical scenario at mid-band frequency `mid_freq` and wave speed
    /// `wave_speed`, with `γ = 1` so that `(SNR)_{α,max} = ρ`.
    pub fn to_scenario(&self, mid_freq: f64, wave_speed: f64) -> Scenario {
        let wavelength = wave_speed / mid_freq;
        Scenario {
            radius: self.a * wavelength,
            mid_freq,
            half_bandwidth: self.b * mid_freq,
            obs_time: self.d / mid_freq,
            wave_speed,
            threshold: 1.0,
            snr_alpha_max: self.rho,
        }
    }
}

/// Effective bandwidth data for one spatial mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeBandwidth {
    pub n: usize,
    /// Critical frequency `F_n` (Hz).
    pub critical_freq: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    /// Effective bandwidth `W_n = band_hi - band_lo` (Hz).
    pub eff_bandwidth: f64,
    /// Midpoint of the usable band (Hz).
    pub mid_band: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeBandwidthProfile {
    pub n_min: usize,
    pub n_max: usize,
    pub per_mode: Vec<ModeBandwidth>,
}

/// Terms of the closed-form bound: `total = d1 + d2 + d3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DofBreakdown {
    /// `(N_max + 1)²`, one sample per usable spatial mode.
    pub d1: f64,
    /// Time-bandwidth contribution of the full-band modes.
    pub d2: f64,
    /// Time-bandwidth contribution of the partial-band modes.
    pub d3: f64,
    pub total: f64,
    /// Effective observation time (s).
    pub t_eff: f64,
}

impl DofBreakdown {
    fn new(d1: f64, d2: f64, d3: f64, t_eff: f64) -> Self {
        Self {
            d1,
            d2,
            d3,
            total: d1 + d2 + d3,
            t_eff,
        }
    }
}

/// `T + 2R/c`: the span of source signal seen through the sphere. Depends
/// only on `T`, `R` and `c`.
pub fn effective_time(s: &Scenario) -> f64 {
    s.obs_time + 2.0 * s.radius / s.wave_speed
}

/// Frequency below which mode `n` cannot reach the detection threshold:
/// `nc/(eπR) + (c/(2eπR)) ln(γ/(SNR)_{α,max})`, floored at zero. Mode 0 is
/// full-band and returns 0.
pub fn critical_frequency(s: &Scenario, n: usize) -> Result<f64> {
    s.require_radius()?;
    Ok(critical_frequency_unchecked(s, n))
}

fn critical_frequency_unchecked(s: &Scenario, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let scale = s.wave_speed / (E_PI * s.radius);
    (n as f64 * scale - 0.5 * scale * s.ln_rho()).max(0.0)
}

fn clamped_ceil(x: f64) -> usize {
    let c = x.ceil();
    if c > 0.0 {
        c as usize
    } else {
        0
    }
}

/// `(N_min, N_max)` from the ceilings of `eπ(F0 ∓ W)R/c + ½ ln ρ`, clamped
/// at zero with `N_max >= N_min`.
pub fn truncation_indices(s: &Scenario) -> (usize, usize) {
    truncation_indices_with(s, f64::ceil)
}

/// [`truncation_indices`] with a caller-supplied rounding of the real-valued
/// index, used by the verification suite to evaluate mutated rules.
pub fn truncation_indices_with(s: &Scenario, round: impl Fn(f64) -> f64) -> (usize, usize) {
    let k = E_PI * s.transit_time();
    let half_ln = 0.5 * s.ln_rho();
    let to_index = |x: f64| clamped_ceil(round(x));
    let n_min = to_index(k * (s.mid_freq - s.half_bandwidth) + half_ln);
    let n_max = to_index(k * (s.mid_freq + s.half_bandwidth) + half_ln).max(n_min);
    (n_min, n_max)
}

/// Per-mode critical frequencies and effective bandwidths.
///
/// The table covers `n ∈ [0, n_cap]` when `n_cap` is given (entries past
/// `N_max` have zero bandwidth) and `n ∈ [0, N_max]` otherwise.
pub fn bandwidth_profile(s: &Scenario, n_cap: Option<usize>) -> Result<ModeBandwidthProfile> {
    s.require_radius()?;
    let (n_min, n_max) = truncation_indices(s);
    Ok(profile_from_indices(s, n_min, n_max, n_cap))
}

/// Builds the bandwidth table for given truncation indices. `W_n = 2W` for
/// `n <= n_min`, `max(0, F0 + W - F_n)` up to `n_max`, zero beyond.
pub fn profile_from_indices(
    s: &Scenario,
    n_min: usize,
    n_max: usize,
    n_cap: Option<usize>,
) -> ModeBandwidthProfile {
    let (lo, hi) = s.band();
    let last = n_cap.unwrap_or(n_max);
    let per_mode = (0..=last)
        .map(|n| {
            let critical_freq = if s.radius > 0.0 {
                critical_frequency_unchecked(s, n)
            } else {
                0.0
            };
            let band_lo = if n <= n_min {
                lo
            } else if n <= n_max {
                critical_freq.clamp(lo, hi)
            } else {
                hi
            };
            ModeBandwidth {
                n,
                critical_freq,
                band_lo,
                band_hi: hi,
                eff_bandwidth: hi - band_lo,
                mid_band: 0.5 * (band_lo + hi),
            }
        })
        .collect();
    ModeBandwidthProfile {
        n_min,
        n_max,
        per_mode,
    }
}

/// `Σ_{n ≤ N_max} (2n+1)(W_n T_eff + 1)`: the per-mode sample count summed
/// over all modes and orders.
pub fn dof_mode_sum(s: &Scenario) -> Result<f64> {
    let profile = bandwidth_profile(s, None)?;
    Ok(mode_sum_from_profile(&profile, effective_time(s)))
}

pub fn mode_sum_from_profile(profile: &ModeBandwidthProfile, t_eff: f64) -> f64 {
    profile
        .per_mode
        .iter()
        .take(profile.n_max + 1)
        .map(|m| (2 * m.n + 1) as f64 * (m.eff_bandwidth * t_eff + 1.0))
        .sum()
}

/// Closed-form upper bound on the degrees of freedom.
pub fn dof_closed_form(s: &Scenario) -> Result<DofBreakdown> {
    s.require_radius()?;
    let (n_min, n_max) = truncation_indices(s);
    Ok(closed_form_from_indices(s, n_min, n_max))
}

/// The closed-form bound evaluated with explicit truncation indices.
pub fn closed_form_from_indices(s: &Scenario, n_min: usize, n_max: usize) -> DofBreakdown {
    let t_eff = effective_time(s);
    let (f0, w) = (s.mid_freq, s.half_bandwidth);
    let k = E_PI * s.transit_time();
    let time_band = 2.0 * w * t_eff;
    let d1 = ((n_max + 1) * (n_max + 1)) as f64;
    let d2 = time_band * ((n_min + 1) * (n_min + 1)) as f64;
    let partial = 2.0 * k * k * (f0 * w - w * w / 3.0)
        + k * (2.0 * f0 - w)
        + s.ln_rho() * (k * w + 1.0);
    let d3 = (time_band * partial).max(0.0);
    DofBreakdown::new(d1, d2, d3, t_eff)
}

/// The bound written in normalized parameters. Agrees with
/// [`dof_closed_form`] on the corresponding scenario; `a = 0` is the
/// single-point case `2bd + 1`.
pub fn dof_normalized(p: &NormalizedParams) -> Result<f64> {
    p.validate()?;
    let NormalizedParams { a, b, d, rho } = *p;
    if a == 0.0 {
        return Ok(2.0 * b * d + 1.0);
    }
    let half_ln = 0.5 * rho.ln();
    let eta_min = clamped_ceil(E_PI * a * (1.0 - b) + half_ln);
    let eta_max = clamped_ceil(E_PI * a * (1.0 + b) + half_ln).max(eta_min);
    let span = b * (2.0 * a + d);
    let x = E_PI * a;
    let full = 2.0 * ((eta_min + 1) * (eta_min + 1)) as f64;
    // b·[(2xb)²(1/b - 1/3) + 2xb(2/b - 1)] with the 1/b factors cleared
    let partial = (2.0 * x * b).powi(2) * (1.0 - b / 3.0)
        + 2.0 * x * b * (2.0 - b)
        + 2.0 * rho.ln() * b * (x * b + 1.0);
    let partial = ((2.0 * a + d) * partial).max(0.0);
    Ok(((eta_max + 1) * (eta_max + 1)) as f64 + span * full + partial)
}

/// The bound specialised to `γ = (SNR)_{α,max}`, where mode `n` is undetectable
/// below `nc/(eπR)`. Accepts `R = 0`, giving `2WT + 1`.
pub fn dof_asymptotic(s: &Scenario) -> Result<DofBreakdown> {
    s.validate()?;
    let t_eff = effective_time(s);
    let (f0, w) = (s.mid_freq, s.half_bandwidth);
    let r_c = s.transit_time();
    let n_hi = (E_PI * (f0 + w) * r_c).ceil();
    let n_lo = (E_PI * (f0 - w) * r_c).ceil();
    let d1 = (n_hi + 1.0).powi(2);
    let d2 = 2.0 * w * t_eff * (n_lo + 1.0).powi(2);
    let d3 = w
        * t_eff
        * ((2.0 * E_PI * r_c).powi(2) * (f0 * w - w * w / 3.0)
            + 2.0 * E_PI * r_c * (2.0 * f0 - w));
    Ok(DofBreakdown::new(d1, d2, d3, t_eff))
}

/// The bound for any valid scenario: the closed form for `R > 0`, the
/// single-point `2WT + 1` for `R = 0`.
pub fn dof_bound(s: &Scenario) -> Result<DofBreakdown> {
    s.validate()?;
    if s.radius == 0.0 {
        dof_asymptotic(s)
    } else {
        dof_closed_form(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pinned() -> Scenario {
        NormalizedParams {
            a: 1.0,
            b: 0.5,
            d: 1.0,
            rho: 1.0,
        }
        .to_scenario(1e9, SPEED_OF_LIGHT)
    }

    #[test]
    fn effective_time_examples() {
        let mut s = pinned();
        s.radius = 0.0;
        s.obs_time = 1.0;
        assert_eq!(effective_time(&s), 1.0);

        s.radius = 0.3;
        s.obs_time = 1e-3;
        s.wave_speed = 3e8;
        assert!((effective_time(&s) - (1e-3 + 2e-9)).abs() < 1e-18);

        s.obs_time = 2e-3;
        s.radius = s.wave_speed * s.obs_time / 2.0;
        assert!((effective_time(&s) - 4e-3).abs() < 1e-15);
    }

    #[test]
    fn effective_time_ignores_band_and_threshold() {
        let s = pinned();
        let mut t = s;
        t.mid_freq *= 3.0;
        t.half_bandwidth = 0.1;
        t.threshold = 7.0;
        assert_eq!(effective_time(&s), effective_time(&t));
    }

    #[test]
    fn critical_frequency_examples() {
        let s = pinned();
        let f1 = critical_frequency(&s, 1).unwrap();
        let want = s.wave_speed / (E_PI * s.radius);
        assert!(((f1 - want) / want).abs() < 1e-14);

        let f10 = critical_frequency(&s, 10).unwrap();
        assert!((f10 / s.mid_freq - 10.0 / 8.539734).abs() < 1e-6);
        assert!((f10 / s.mid_freq - 1.1710).abs() < 1e-4);

        let mut quiet = s;
        quiet.snr_alpha_max = 1e12;
        assert_eq!(critical_frequency(&quiet, 3).unwrap(), 0.0);
        assert_eq!(critical_frequency(&s, 0).unwrap(), 0.0);

        let mut point = s;
        point.radius = 0.0;
        assert_eq!(critical_frequency(&point, 1), Err(Error::ZeroRadius));
    }

    #[test]
    fn profile_at_pinned_point() {
        let s = pinned();
        let p = bandwidth_profile(&s, None).unwrap();
        assert_eq!((p.n_min, p.n_max), (5, 13));
        assert_eq!(p.per_mode.len(), 14);
        let two_w = 2.0 * s.half_bandwidth;
        for m in &p.per_mode[..=5] {
            assert_eq!(m.eff_bandwidth, two_w);
        }
        let w10 = p.per_mode[10].eff_bandwidth / s.mid_freq;
        assert!((w10 - (1.5 - 10.0 / 8.539734)).abs() < 1e-6);
        assert!((w10 - 0.3290).abs() < 1e-4);
        // F_13 lies above the band: clamped to zero
        assert_eq!(p.per_mode[13].eff_bandwidth, 0.0);
        for m in &p.per_mode {
            assert!((m.mid_band - 0.5 * (m.band_lo + m.band_hi)).abs() < 1e-6);
        }
    }

    #[test]
    fn profile_cap_extends_with_zero_modes() {
        let s = pinned();
        let p = bandwidth_profile(&s, Some(20)).unwrap();
        assert_eq!(p.per_mode.len(), 21);
        assert!(p.per_mode[14..].iter().all(|m| m.eff_bandwidth == 0.0));
    }

    #[test]
    fn indices_clamp_with_tiny_rho() {
        let mut s = pinned();
        s.threshold = 1e30;
        let (lo, hi) = truncation_indices(&s);
        assert_eq!((lo, hi), (0, 0));
        let p = bandwidth_profile(&s, None).unwrap();
        assert_eq!(p.per_mode[0].eff_bandwidth, 2.0 * s.half_bandwidth);
    }

    #[test]
    fn ceiling_at_exact_integer() {
        // eπ a (1 + b) = 13 exactly when a = 13 / (eπ 1.5)
        let p = NormalizedParams {
            a: 13.0 / (E_PI * 1.5),
            b: 0.5,
            d: 1.0,
            rho: 1.0,
        };
        let s = p.to_scenario(1.0, 1.0);
        let x = E_PI * s.transit_time() * (s.mid_freq + s.half_bandwidth);
        let (_, n_max) = truncation_indices(&s);
        assert_eq!(n_max, x.ceil() as usize);
    }

    #[test]
    fn mode_sum_pinned() {
        let d = dof_mode_sum(&pinned()).unwrap();
        assert!((d - 462.3).abs() < 0.05, "{d}");
    }

    #[test]
    fn mode_sum_single_mode() {
        // W = 0 and a region small enough that only mode 0 survives
        let s = Scenario {
            radius: 1e-3,
            mid_freq: 1.0,
            half_bandwidth: 0.0,
            obs_time: 1.0,
            wave_speed: 1.0,
            threshold: 1.0,
            snr_alpha_max: 1.0,
        };
        let p = bandwidth_profile(&s, None).unwrap();
        assert_eq!(p.n_max, 1);
        let mut s0 = s;
        s0.threshold = 10.0;
        let p0 = bandwidth_profile(&s0, None).unwrap();
        assert_eq!(p0.n_max, 0);
        assert_eq!(dof_mode_sum(&s0).unwrap(), 1.0);
    }

    #[test]
    fn closed_form_pinned() {
        let b = dof_closed_form(&pinned()).unwrap();
        assert_eq!(b.d1, 196.0);
        assert!((b.total - 524.75).abs() < 0.01, "{}", b.total);
        assert!((b.total - (b.d1 + b.d2 + b.d3)).abs() < 1e-12);
    }

    #[test]
    fn closed_form_narrowband() {
        for a in [0.5, 1.0, 2.0] {
            let s = NormalizedParams { a, b: 0.0, d: 1.0, rho: 1.0 }.to_scenario(1e9, SPEED_OF_LIGHT);
            let want = ((E_PI * a).ceil() + 1.0).powi(2);
            assert_eq!(dof_closed_form(&s).unwrap().total, want);
        }
        let s = NormalizedParams { a: 1.0, b: 0.0, d: 1.0, rho: 1.0 }.to_scenario(1e9, SPEED_OF_LIGHT);
        assert_eq!(dof_closed_form(&s).unwrap().total, 100.0);
    }

    #[test]
    fn normalized_examples() {
        let p = NormalizedParams { a: 1.0, b: 0.5, d: 1.0, rho: 1.0 };
        assert!((dof_normalized(&p).unwrap() - 524.75).abs() < 0.01);
        let p0 = NormalizedParams { a: 0.0, b: 0.3, d: 4.0, rho: 1.0 };
        assert!((dof_normalized(&p0).unwrap() - (2.0 * 0.3 * 4.0 + 1.0)).abs() < 1e-12);
        for rho in [0.5, 1.0, 3.0] {
            let p = NormalizedParams { a: 0.7, b: 0.0, d: 2.0, rho };
            let eta = (E_PI * 0.7 + 0.5 * f64::ln(rho)).ceil();
            assert_eq!(dof_normalized(&p).unwrap(), (eta + 1.0).powi(2));
        }
    }

    #[test]
    fn asymptotic_examples() {
        let mut s = pinned();
        s.radius = 0.0;
        let b = dof_asymptotic(&s).unwrap();
        let want = 2.0 * s.half_bandwidth * s.obs_time + 1.0;
        assert!(((b.total - want) / want).abs() < 1e-12);
        assert_eq!(b.d1, 1.0);
        assert_eq!(b.d3, 0.0);

        let s = NormalizedParams { a: 1.0, b: 0.0, d: 1.0, rho: 1.0 }.to_scenario(1e9, SPEED_OF_LIGHT);
        assert_eq!(dof_asymptotic(&s).unwrap().total, 100.0);
    }

    #[test]
    fn asymptotic_at_zero_time() {
        let s = NormalizedParams { a: 1.0, b: 0.5, d: 0.0, rho: 1.0 }.to_scenario(1e9, SPEED_OF_LIGHT);
        let (f0, w, rc) = (s.mid_freq, s.half_bandwidth, s.radius / s.wave_speed);
        let ep = E * PI;
        let rhs = ((ep * (f0 + w) * rc).ceil() + 1.0).powi(2)
            + 4.0 * w * rc * ((ep * (f0 - w) * rc).ceil() + 1.0).powi(2)
            + 2.0 * w * rc * ((2.0 * ep * rc).powi(2) * (f0 * w - w * w / 3.0) + 2.0 * ep * rc * (2.0 * f0 - w));
        let got = dof_asymptotic(&s).unwrap().total;
        assert!(((got - rhs) / rhs).abs() < 1e-12, "{got} vs {rhs}");
    }

    #[test]
    fn bound_dispatch() {
        let mut s = pinned();
        assert_eq!(dof_bound(&s).unwrap(), dof_closed_form(&s).unwrap());
        s.radius = 0.0;
        assert!(dof_closed_form(&s).is_err());
        assert_eq!(dof_bound(&s).unwrap(), dof_asymptotic(&s).unwrap());
    }

    #[test]
    fn scenario_validation() {
        let mut s = pinned();
        s.half_bandwidth = 2.0 * s.mid_freq;
        assert!(s.validate().is_err());
        let mut s = pinned();
        s.obs_time = f64::INFINITY;
        assert!(s.validate().is_err());
        let mut s = pinned();
        s.half_bandwidth = s.mid_freq;
        assert!(s.validate().is_ok());
    }

    #[test]
    fn normalized_round_trip() {
        let p = NormalizedParams { a: 1.3, b: 0.25, d: 2.5, rho: 4.0 };
        let s = p.to_scenario(2.4e9, SPEED_OF_LIGHT);
        let q = NormalizedParams::from_scenario(&s);
        for (x, y) in [(p.a, q.a), (p.b, q.b), (p.d, q.d), (p.rho, q.rho)] {
            assert!((x - y).abs() <= 1e-15 * x.abs().max(1.0));
        }
    }

    // The closed form can drop as W grows: N_min steps down by one and D2
    // loses 2W·T_eff·(2N_min + 1).
    #[test]
    fn closed_form_not_monotone_in_bandwidth() {
        let lo = NormalizedParams { a: 0.1, b: 0.20, d: 0.5, rho: 2.0 };
        let hi = NormalizedParams { b: 0.25, ..lo };
        assert!(dof_normalized(&hi).unwrap() < dof_normalized(&lo).unwrap());
    }

    // For ρ < 1 the partial-band term is not an upper bound on its sum.
    #[test]
    fn ordering_fails_below_unit_rho() {
        let s = NormalizedParams { a: 0.1, b: 1.0, d: 0.5, rho: 0.5 }.to_scenario(1.0, 1.0);
        assert!(dof_mode_sum(&s).unwrap() > dof_closed_form(&s).unwrap().total);
    }
}
