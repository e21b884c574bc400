use crate::error::{domain, Result};

/// Legendre polynomial `P_n(x)` on `[-1, 1]` by the three-term recurrence.
pub fn legendre_p(n: usize, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return domain(format!("legendre_p: |x| must be <= 1, got {x}"));
    }
    Ok(legendre_p_unchecked(n, x))
}

pub(crate) fn legendre_p_unchecked(n: usize, x: f64) -> f64 {
    legendre_p_and_prev(n, x).0
}

/// Returns `(P_n(x), P_{n-1}(x))`; `P_{-1}` is taken as zero.
pub(crate) fn legendre_p_and_prev(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let next = ((2 * k + 1) as f64 * x * cur - k as f64 * prev) / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}
