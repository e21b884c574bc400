use crate::error::{domain, Result};

/// Largest order accepted by [`sph_bessel_j`].
pub const MAX_BESSEL_ORDER: usize = 200;

/// Spherical Bessel function of the first kind, `j_n(z)`, for `z >= 0`.
///
/// Above the turning point (`z > n`) the function is oscillatory and forward
/// recurrence from `j_0`, `j_1` is stable. Below it the forward recurrence
/// amplifies rounding exponentially, so the ratios `j_k / j_{k-1}` are built
/// by backward recurrence (Miller) and anchored on whichever of `j_0`, `j_1`
/// is larger in magnitude, which keeps the result away from the zeros of the
/// anchor.
pub fn sph_bessel_j(n: usize, z: f64) -> Result<f64> {
    if !z.is_finite() {
        return domain(format!("sph_bessel_j: argument must be finite, got {z}"));
    }
    if z < 0.0 {
        return domain(format!("sph_bessel_j: argument must be >= 0, got {z}"));
    }
    if n > MAX_BESSEL_ORDER {
        return domain(format!(
            "sph_bessel_j: order {n} exceeds supported maximum {MAX_BESSEL_ORDER}"
        ));
    }
    if z == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    Ok(match n {
        0 => j0(z),
        1 => j1(z),
        _ if z > n as f64 => upward(n, z),
        _ => downward(n, z),
    })
}

fn j0(z: f64) -> f64 {
    if z < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

fn j1(z: f64) -> f64 {
    if z < 0.5 {
        // z/3 * sum_k (-z^2/2)^k / (k! (5)(7)...(2k+3))
        let x = -0.5 * z * z;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..20 {
            term *= x / (k as f64 * (2 * k + 3) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        z / 3.0 * sum
    } else {
        let (s, c) = z.sin_cos();
        (s / z - c) / z
    }
}

fn upward(n: usize, z: f64) -> f64 {
    let mut prev = j0(z);
    let mut cur = j1(z);
    for k in 1..n {
        let next = (2 * k + 1) as f64 / z * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn downward(n: usize, z: f64) -> f64 {
    let start = n + 40 + (40.0 * n as f64).sqrt().ceil() as usize;
    // ratios[k] = j_k / j_{k-1}
    let mut ratios = vec![0.0; n + 1];
    let mut r = 0.0;
    for k in (1..=start).rev() {
        r = z / ((2 * k + 1) as f64 - z * r);
        if k <= n {
            ratios[k] = r;
        }
    }
    let a0 = j0(z);
    let a1 = j1(z);
    let (mut value, from) = if a0.abs() >= a1.abs() {
        (a0, 1)
    } else {
        (a1, 2)
    };
    for &ratio in &ratios[from..=n] {
        value *= ratio;
    }
    value
}

/// `ln Γ(n + 3/2)`, using `Γ(3/2) = √π/2` and `Γ(x + 1) = x Γ(x)`.
pub fn ln_gamma_n_plus_three_halves(n: usize) -> f64 {
    let base = (std::f64::consts::PI.sqrt() / 2.0).ln();
    (1..=n).fold(base, |acc, k| acc + (k as f64 + 0.5).ln())
}

/// Power-law envelope `(√π/2)(z/2)^n / Γ(n + 3/2)` that dominates `|j_n(z)|`.
///
/// Evaluated in log space so large orders neither overflow nor underflow
/// before the final exponentiation.
pub fn sph_bessel_j_bound(n: usize, z: f64) -> f64 {
    if z == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let ln_prefactor = (std::f64::consts::PI.sqrt() / 2.0).ln();
    let ln = ln_prefactor + n as f64 * (z / 2.0).ln() - ln_gamma_n_plus_three_halves(n);
    ln.exp()
}
