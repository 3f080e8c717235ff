//! Simultaneous polynomial root finding (Aberth–Ehrlich).

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;

/// Roots of an integer polynomial, with multiplicities collapsed.
#[derive(Clone, Debug, PartialEq)]
pub struct RootReport {
    /// Distinct nonzero roots.
    pub roots: Vec<Complex64>,
    /// Multiplicity of the root at zero in the input.
    pub zero_multiplicity: usize,
    pub iterations: usize,
}

impl RootReport {
    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Finds the distinct roots of `p`.
///
/// The polynomial is first made square-free over ℤ[x] and stripped of zero
/// roots, so every root handed to the iteration is simple. Convergence is
/// declared when every root has relative backward error
/// `|q(z)| / Σ|aᵢ||z|ⁱ ≤ tol`.
pub fn polynomial_roots(p: &IntPoly, tol: f64, max_iterations: usize) -> Result<RootReport> {
    let zero_multiplicity = p.zero_root_multiplicity();
    let q = p.shift_down(zero_multiplicity).square_free_part();
    let coeffs: Vec<f64> = q
        .coefficients()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Unsupported("polynomial coefficients exceed f64 range".into()));
    }
    let degree = coeffs.len().saturating_sub(1);
    let (roots, iterations) = match degree {
        0 => (Vec::new(), 0),
        1 => (vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)], 0),
        _ => aberth(&coeffs, tol, max_iterations)?,
    };
    Ok(RootReport { roots, zero_multiplicity, iterations })
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    // value, derivative, and Σ|aᵢ||z|ⁱ for the backward-error scale
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    let mut scale = 0.0;
    let r = z.norm();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        scale = scale * r + c.abs();
    }
    (p, dp, scale)
}

fn initial_guesses(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].abs();
    // Fujiwara-style radius from the geometric mean of the coefficients' ratio
    let radius = (coeffs[0].abs() / lead).powf(1.0 / n as f64).max(1e-3);
    let offset = 0.4;
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + offset;
            Complex64::from_polar(radius, theta)
        })
        .collect()
}

fn aberth(coeffs: &[f64], tol: f64, max_iterations: usize) -> Result<(Vec<Complex64>, usize)> {
    let mut z = initial_guesses(coeffs);
    let n = z.len();
    let mut worst = f64::INFINITY;
    for iter in 1..=max_iterations {
        worst = 0.0;
        for k in 0..n {
            let (p, dp, scale) = horner(coeffs, z[k]);
            let residual = if scale > 0.0 { p.norm() / scale } else { 0.0 };
            worst = worst.max(residual);
            if residual <= tol * 1e-3 || p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.is_zero() {
                        Complex64::new(1e-12, 0.0).inv()
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
            } else {
                // nudge off a critical point
                let r = 1.0 + z[k].norm();
                z[k] += Complex64::new(1e-8, 1e-8) * r;
            }
        }
        if worst <= tol {
            polish(coeffs, &mut z);
            return Ok((z, iter));
        }
    }
    Err(Error::NoConvergence { iterations: max_iterations, residual: worst })
}

// A few Newton steps on each simple root; kept only when the residual drops.
fn polish(coeffs: &[f64], z: &mut [Complex64]) {
    for root in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp, _) = horner(coeffs, *root);
            if dp.is_zero() {
                break;
            }
            let candidate = *root - p / dp;
            if horner(coeffs, candidate).0.norm() < p.norm() {
                *root = candidate;
            } else {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn quadratic_roots_match_formula() {
        let r = polynomial_roots(&p(&[1, -3, 1]), DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS).unwrap();
        let mut re: Vec<f64> = r.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-13);
        assert!((re[1] - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-13);
    }

    #[test]
    fn repeated_and_zero_roots() {
        // x^2 (x - 1)^3
        let r = polynomial_roots(&p(&[0, 0, -1, 3, -3, 1]), DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS).unwrap();
        assert_eq!(r.zero_multiplicity, 2);
        assert_eq!(r.roots.len(), 1);
        assert!((r.max_modulus() - 1.0).abs() < 1e-14);
        let nil = polynomial_roots(&p(&[0, 0, 0, 1]), DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS).unwrap();
        assert_eq!(nil.max_modulus(), 0.0);
    }

    #[test]
    fn complex_pairs() {
        // x^4 + 1: all roots on the unit circle
        let r = polynomial_roots(&p(&[1, 0, 0, 0, 1]), DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS).unwrap();
        assert_eq!(r.roots.len(), 4);
        for z in &r.roots {
            assert!((z.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn iteration_cap_reports_failure() {
        let err = polynomial_roots(&p(&[7, -5, 3, -2, 1]), 1e-300, 3).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { iterations: 3, .. }));
    }
}
