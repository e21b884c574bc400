//! One-dimensional quadrature helpers for complex-valued integrands.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::specfun::gauss_legendre;

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1] (non-negative half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    abs: f64,
}

fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        kronrod += (f1 + f2) * WGK[j];
        abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    Panel {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).norm(),
        abs: abs * h.abs(),
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Stops when the summed error estimate falls below `rel_tol` times the
/// integral of `|f|`, which stays meaningful when the signed integral cancels.
pub fn adaptive(f: impl Fn(f64) -> Complex64, a: f64, b: f64, rel_tol: f64) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let initial = 8;
    let step = (b - a) / initial as f64;
    let mut panels: Vec<Panel> = (0..initial)
        .map(|i| gk15(&f, a + i as f64 * step, a + (i + 1) as f64 * step))
        .collect();
    for _ in 0..20_000 {
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let scale: f64 = panels.iter().map(|p| p.abs).sum();
        if error <= rel_tol * scale || scale == 0.0 {
            break;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        panels.push(gk15(&f, p.a, mid));
        panels.push(gk15(&f, mid, p.b));
    }
    panels.iter().map(|p| p.value).sum()
}

const PANEL_ORDER: usize = 16;

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Composite 16-point Gauss–Legendre over `panels` equal panels.
pub fn composite(f: impl Fn(f64) -> Complex64, a: f64, b: f64, panels: usize) -> Complex64 {
    let (xs, ws) = panel_rule();
    let h = (b - a) / panels as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..panels {
        let c = a + (i as f64 + 0.5) * h;
        for (x, w) in xs.iter().zip(ws) {
            sum += f(c + 0.5 * h * x) * *w;
        }
    }
    sum * (0.5 * h)
}

/// Composite Gauss–Legendre with panel doubling until two successive
/// estimates agree to `rel_tol` of the integral of `|f|`.
pub fn doubling(f: impl Fn(f64) -> Complex64, a: f64, b: f64, rel_tol: f64) -> Complex64 {
    let mut panels = 4;
    let mut prev = composite(&f, a, b, panels);
    loop {
        panels *= 2;
        let cur = composite(&f, a, b, panels);
        let scale = composite(|t| Complex64::new(f(t).norm(), 0.0), a, b, panels).re;
        if (cur - prev).norm() <= rel_tol * scale || panels >= 1 << 16 {
            return cur;
        }
        prev = cur;
    }
}
