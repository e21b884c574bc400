use std::f64::consts::PI;

use num_complex::Complex64;

use super::legendre::legendre_p_and_prev;
use crate::error::{Error, Result};

/// Largest degree accepted by [`make_quadrature`].
pub const MAX_QUADRATURE_DEGREE: usize = 512;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(points: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; points];
    let mut weights = vec![0.0; points];
    let n = points as f64;
    for i in 0..points.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        for _ in 0..100 {
            let (p, pm) = legendre_p_and_prev(points, x);
            let dx = p / (n * (x * p - pm) / (x * x - 1.0));
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (p, pm) = legendre_p_and_prev(points, x);
        let dp = n * (x * p - pm) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[points - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[points - 1 - i] = w;
    }
    (nodes, weights)
}

/// A direction on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    /// Polar angle in `[0, π]`.
    pub theta: f64,
    /// Azimuth in `[0, 2π)`.
    pub phi: f64,
}

impl SpherePoint {
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Product rule on the sphere: Gauss–Legendre in `cos θ` times a uniform
/// azimuth grid. Integrates `Y_nm Y*_n'm'` exactly for `n, n' <= max_degree`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<SpherePoint>,
    weights: Vec<f64>,
    max_degree: usize,
    azimuths: usize,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[SpherePoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes per polar ring; node `q` sits on ring `q / azimuths()`.
    pub fn azimuths(&self) -> usize {
        self.azimuths
    }

    pub fn rings(&self) -> usize {
        self.nodes.len() / self.azimuths
    }
}

/// Builds the product rule of degree `degree`: `degree + 1` polar nodes and
/// `2 degree + 2` azimuths.
pub fn make_quadrature(degree: usize) -> Result<QuadratureRule> {
    if degree > MAX_QUADRATURE_DEGREE {
        return Err(Error::Resource(format!(
            "quadrature degree {degree} exceeds {MAX_QUADRATURE_DEGREE}"
        )));
    }
    let (xs, ws) = gauss_legendre(degree + 1);
    let n_phi = 2 * degree + 2;
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(xs.len() * n_phi);
    let mut weights = Vec::with_capacity(xs.len() * n_phi);
    for (&x, &w) in xs.iter().zip(&ws) {
        let theta = x.clamp(-1.0, 1.0).acos();
        for j in 0..n_phi {
            nodes.push(SpherePoint {
                theta,
                phi: j as f64 * dphi,
            });
            weights.push(w * dphi);
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        max_degree: degree,
        azimuths: n_phi,
    })
}

/// Weighted sum approximating `∫ f dΩ` for `f` sampled on the rule's nodes.
pub fn sphere_integrate(f: &[Complex64], rule: &QuadratureRule) -> Result<Complex64> {
    if f.len() != rule.len() {
        return Err(Error::LengthMismatch {
            expected: rule.len(),
            got: f.len(),
        });
    }
    Ok(f.iter().zip(&rule.weights).map(|(v, &w)| v * w).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{sph_harmonic, ModeIndex};

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        for p in 0..20 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
            let want = if p % 2 == 1 { 0.0 } else { 2.0 / (p + 1) as f64 };
            assert!((got - want).abs() < 1e-14, "degree {p}");
        }
    }

    #[test]
    fn weights_sum_to_sphere_area() {
        for degree in [0, 1, 7, 64, 512] {
            let rule = make_quadrature(degree).unwrap();
            let s: f64 = rule.weights().iter().sum();
            assert!(((s - 4.0 * PI) / (4.0 * PI)).abs() < 1e-12, "degree {degree}: {s}");
        }
    }

    #[test]
    fn rejects_huge_degree() {
        assert!(matches!(make_quadrature(513), Err(Error::Resource(_))));
    }

    #[test]
    fn integrate_examples() {
        let rule = make_quadrature(15).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); rule.len()];
        assert!((sphere_integrate(&ones, &rule).unwrap().re - 4.0 * PI).abs() < 1e-12);

        let y = |n, m| -> Vec<Complex64> {
            rule.nodes()
                .iter()
                .map(|p| sph_harmonic(ModeIndex::new(n, m).unwrap(), p.theta, p.phi))
                .collect()
        };
        let y21 = y(2, 1);
        let y33 = y(3, 3);
        let y00 = y(0, 0);
        let self_prod: Vec<_> = y21.iter().map(|a| a * a.conj()).collect();
        let cross: Vec<_> = y21.iter().zip(&y33).map(|(a, b)| a * b.conj()).collect();
        assert!((sphere_integrate(&self_prod, &rule).unwrap() - 1.0).norm() < 1e-12);
        assert!(sphere_integrate(&cross, &rule).unwrap().norm() < 1e-12);
        assert!((sphere_integrate(&y00, &rule).unwrap().re - (4.0 * PI).sqrt()).abs() < 1e-12);

        assert!(matches!(
            sphere_integrate(&y00[1..], &rule),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
