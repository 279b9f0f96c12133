//! Polynomial roots via companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// All complex roots of `Σ_k coeffs[k] x^k` with real coefficients.
///
/// Tiny leading coefficients (relative to the largest coefficient) are
/// trimmed first, so a degree drop — a root escaping to infinity — simply
/// shortens the returned list. Returns an empty list for constant (or zero)
/// polynomials.
pub fn real_coeff_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut deg = coeffs.len().saturating_sub(1);
    while deg > 0 && coeffs[deg].abs() <= 1e-14 * scale {
        deg -= 1;
    }
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let mut companion = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let mut roots: Vec<Complex64> = companion.complex_eigenvalues().iter().copied().collect();
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    roots
}

/// Product of linear factors `Π_k (x − r_k)` as an ascending coefficient vector.
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut p = vec![1.0];
    for &r in roots {
        let mut q = vec![0.0; p.len() + 1];
        for (i, &a) in p.iter().enumerate() {
            q[i + 1] += a;
            q[i] -= r * a;
        }
        p = q;
    }
    p
}

/// Evaluate an ascending-coefficient polynomial at a complex point.
pub fn eval(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::ZERO, |acc, &c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_real_roots() {
        // (x-1)(x-3) = 3 - 4x + x^2
        let roots = real_coeff_roots(&[3.0, -4.0, 1.0]);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        assert!((roots[1] - Complex64::new(3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn conjugate_pair() {
        // x^2 + 1
        let roots = real_coeff_roots(&[1.0, 0.0, 1.0]);
        assert_eq!(roots.len(), 2);
        assert!((roots[0].im + 1.0).abs() < 1e-10);
        assert!((roots[1].im - 1.0).abs() < 1e-10);
    }

    #[test]
    fn degree_drop_shortens_root_list() {
        // effectively linear: 2 - x + 1e-17 x^2
        let roots = real_coeff_roots(&[2.0, -1.0, 1e-17]);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - Complex64::new(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(real_coeff_roots(&[5.0]).is_empty());
        assert!(real_coeff_roots(&[]).is_empty());
    }

    #[test]
    fn roots_roundtrip_through_coefficients() {
        let p = poly_from_roots(&[-2.0, 0.5, 4.0]);
        let mut roots = real_coeff_roots(&p);
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (r, want) in roots.iter().zip([-2.0, 0.5, 4.0]) {
            assert!((r - Complex64::new(want, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn eval_matches_roots() {
        let p = poly_from_roots(&[1.0, 2.0]);
        assert!(eval(&p, Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(eval(&p, Complex64::new(2.0, 0.0)).norm() < 1e-14);
        assert!((eval(&p, Complex64::new(0.0, 0.0)) - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }
}
