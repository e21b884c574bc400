use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Spatial mode `n` and order `m` of a spherical harmonic, `|m| <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    n: usize,
    m: i64,
}

impl ModeIndex {
    pub fn new(n: usize, m: i64) -> Result<Self> {
        if m.unsigned_abs() as usize > n {
            return domain(format!("mode index requires |m| <= n, got n={n}, m={m}"));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Position in the `n^2 + n + m` packing used by all mode arrays.
    pub fn flat(&self) -> usize {
        ((self.n * self.n + self.n) as i64 + self.m) as usize
    }

    pub fn from_flat(k: usize) -> Self {
        let n = (k as f64).sqrt() as usize;
        let n = if (n + 1) * (n + 1) <= k { n + 1 } else { n };
        let m = k as i64 - (n * n + n) as i64;
        Self { n, m }
    }

    /// Number of `(n, m)` slots with `n <= n_max`.
    pub fn count(n_max: usize) -> usize {
        (n_max + 1) * (n_max + 1)
    }

    /// All indices with `n <= n_max` in packing order.
    pub fn upto(n_max: usize) -> impl Iterator<Item = ModeIndex> {
        (0..Self::count(n_max)).map(Self::from_flat)
    }
}

/// Complex spherical harmonic `Y_nm(θ, φ)`, orthonormal on the unit sphere,
/// with the Condon–Shortley phase `(-1)^m` included in the associated
/// Legendre function. Negative orders follow `Y_{n,-m} = (-1)^m conj(Y_nm)`.
pub fn sph_harmonic(idx: ModeIndex, theta: f64, phi: f64) -> Complex64 {
    let m = idx.m.unsigned_abs() as usize;
    let p = normalized_assoc_legendre(idx.n, m, theta.cos(), theta.sin());
    let y = Complex64::from_polar(p, m as f64 * phi);
    if idx.m >= 0 {
        y
    } else if m.is_multiple_of(2) {
        y.conj()
    } else {
        -y.conj()
    }
}

/// `p̄_n^m(cos θ)` for a single `(n, m)`, `m >= 0`, normalized so that
/// `Y_nm = p̄_n^m e^{imφ}`.
fn normalized_assoc_legendre(n: usize, m: usize, x: f64, s: f64) -> f64 {
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for k in 1..=m {
        pmm *= -((2 * k + 1) as f64 / (2 * k) as f64).sqrt() * s;
    }
    if n == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = ((2 * m + 3) as f64).sqrt() * x * pmm;
    for l in (m + 2)..=n {
        let next = recurrence_a(l, m) * (x * cur - prev / recurrence_a(l - 1, m));
        prev = cur;
        cur = next;
    }
    cur
}

fn recurrence_a(l: usize, m: usize) -> f64 {
    let (l, m) = (l as f64, m as f64);
    ((4.0 * l * l - 1.0) / (l * l - m * m)).sqrt()
}

/// All harmonics with `n <= n_max` at one direction, in [`ModeIndex::flat`]
/// order. Cheaper than calling [`sph_harmonic`] per index.
pub fn sph_harmonics_upto(n_max: usize, theta: f64, phi: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); ModeIndex::count(n_max)];
    fill_harmonics(n_max, theta, phi, &mut out);
    out
}

pub(crate) fn fill_harmonics(n_max: usize, theta: f64, phi: f64, out: &mut [Complex64]) {
    let (s, x) = theta.sin_cos();
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for m in 0..=n_max {
        if m > 0 {
            pmm *= -((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
        }
        let e = Complex64::from_polar(1.0, m as f64 * phi);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let mut store = |n: usize, p: f64| {
            let y = e * p;
            out[n * n + n + m] = y;
            if m > 0 {
                out[n * n + n - m] = y.conj() * sign;
            }
        };
        store(m, pmm);
        if m == n_max {
            break;
        }
        let mut prev = pmm;
        let mut cur = ((2 * m + 3) as f64).sqrt() * x * pmm;
        store(m + 1, cur);
        for l in (m + 2)..=n_max {
            let next = recurrence_a(l, m) * (x * cur - prev / recurrence_a(l - 1, m));
            prev = cur;
            cur = next;
            store(l, cur);
        }
    }
}
