//! Damped Newton iteration on the Bethe systems.
//!
//! The equations are holomorphic in the roots, so the iteration runs in
//! complex arithmetic with the analytic Jacobian. Steps are clipped to half
//! the distance to the nearest fixed pole and damped whenever an iterate
//! would bring two roots closer than the separation tolerance.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{family_poles, BetheFamily, SolverParams};
use crate::hilbert::LevelScheme;

/// One Bethe equation system
/// `F_m = Σ_j (−w_j)/(p_j − x_m) + constant − [zero_root] / x_m − Σ_{k≠m} 1/(x_m − x_k)`.
///
/// Covers all three families; the Richardson constant `1/(2|G|d)` may be
/// complex while a continuation path detours around a real-axis collision.
#[derive(Debug, Clone)]
pub(crate) struct BaeSystem {
    pub poles: Vec<f64>,
    pub weights: Vec<f64>,
    pub constant: Complex64,
    pub zero_root: bool,
    /// Center of the pole set; with `escape_radius` it bounds the region in
    /// which genuine solutions can live. All equations vanish as the roots
    /// escape to infinity, so an unbounded iteration would otherwise accept
    /// the spurious projective solution.
    pub center: f64,
    pub escape_radius: f64,
}

impl BaeSystem {
    pub fn for_family(scheme: &LevelScheme, family: BetheFamily) -> Self {
        let poles = family_poles(scheme, family);
        let weights: Vec<f64> =
            (0..scheme.n_levels()).map(|j| scheme.omega(j) as f64 / 2.0).collect();
        let (constant, zero_root) = match family {
            BetheFamily::Richardson => (Complex64::new(1.0 / (2.0 * scheme.gd()), 0.0), false),
            BetheFamily::DegenerateGeneric => (Complex64::ZERO, false),
            BetheFamily::DegenerateZero => (Complex64::ZERO, true),
        };
        let center: f64 = poles.iter().sum::<f64>() / poles.len() as f64;
        let spread = poles.iter().map(|p| (p - center).abs()).fold(0.0f64, f64::max);
        let mut escape_radius = 8.0 * (spread + 1.0);
        if family == BetheFamily::Richardson {
            // strong coupling drives Richardson roots to magnitudes ~ |G| d N
            let n_max = scheme.pair_capacity() as f64;
            let omega_max =
                (0..scheme.n_levels()).map(|j| scheme.omega(j)).max().unwrap_or(1) as f64;
            escape_radius += 4.0 * scheme.gd() * (n_max + 2.0 * omega_max + 2.0);
        }
        BaeSystem { poles, weights, constant, zero_root, center, escape_radius }
    }

    /// Richardson system at an explicit (possibly complex) coupling.
    pub fn richardson_with_coupling(scheme: &LevelScheme, g: Complex64) -> Self {
        let mut sys = Self::for_family(scheme, BetheFamily::Richardson);
        sys.constant = (Complex64::new(2.0 * scheme.level_spacing(), 0.0) * g).inv();
        // rescale the escape bound to the coupling actually in force
        let n_max = sys.weights.iter().sum::<f64>() * 2.0;
        let omega_max = sys.weights.iter().cloned().fold(1.0, f64::max) * 2.0;
        let spread = sys.poles.iter().map(|p| (p - sys.center).abs()).fold(0.0f64, f64::max);
        let gd = g.norm() / sys.poles.len() as f64;
        sys.escape_radius = 8.0 * (spread + 1.0) + 4.0 * gd * (n_max + 2.0 * omega_max + 2.0);
        sys
    }

    fn in_bounds(&self, roots: &[Complex64]) -> bool {
        roots
            .iter()
            .all(|r| (r - Complex64::new(self.center, 0.0)).norm() <= self.escape_radius)
    }

    /// Equation values at the given roots.
    pub fn values(&self, roots: &[Complex64]) -> Vec<Complex64> {
        self.values_and_scale(roots).0
    }

    /// Equation values together with the magnitude scale of the largest
    /// equation (sum of absolute term sizes), the natural backward-error
    /// denominator.
    pub fn values_and_scale(&self, roots: &[Complex64]) -> (Vec<Complex64>, f64) {
        let n = roots.len();
        let mut out = Vec::with_capacity(n);
        let mut scale = 0.0f64;
        for m in 0..n {
            let x = roots[m];
            let mut f = self.constant;
            let mut mag = self.constant.norm();
            for (p, w) in self.poles.iter().zip(&self.weights) {
                let term = -w / (Complex64::new(*p, 0.0) - x);
                f += term;
                mag += term.norm();
            }
            if self.zero_root {
                let term = -x.inv();
                f += term;
                mag += term.norm();
            }
            for (k, y) in roots.iter().enumerate() {
                if k != m {
                    let term = -(x - y).inv();
                    f += term;
                    mag += term.norm();
                }
            }
            out.push(f);
            scale = scale.max(mag);
        }
        (out, scale)
    }

    /// Max-norm residual of the system.
    pub fn residual(&self, roots: &[Complex64]) -> f64 {
        self.values(roots).iter().map(|f| f.norm()).fold(0.0, f64::max)
    }

    /// Smallest residual magnitude distinguishable from zero at a true root,
    /// given f64 rounding of both the terms and the roots themselves. Near a
    /// pole the term sensitivity `|∂F/∂x| · |x| · ε` dominates.
    pub fn residual_floor(&self, roots: &[Complex64]) -> f64 {
        let eps = f64::EPSILON;
        let (_, scale) = self.values_and_scale(roots);
        let jac = self.jacobian(roots);
        let n = roots.len();
        let mut sensitivity = 0.0f64;
        for m in 0..n {
            let mut row = 0.0;
            for (k, x) in roots.iter().enumerate() {
                row += jac[(m, k)].norm() * (1.0 + x.norm());
            }
            sensitivity = sensitivity.max(row);
        }
        eps * (scale + sensitivity)
    }

    /// Residual acceptance gate: the max-norm residual must beat
    /// `tol · max(1, equation scale)` — reachable in f64 even when individual
    /// terms are huge (weak-coupling Richardson) — or be at the attainable
    /// floating-point floor for roots adjacent to a pole.
    pub fn accepts(&self, roots: &[Complex64], tol: f64) -> bool {
        let (values, scale) = self.values_and_scale(roots);
        let res = values.iter().map(|f| f.norm()).fold(0.0, f64::max);
        res <= (tol * scale.max(1.0)).max(4.0 * self.residual_floor(roots))
    }

    /// Analytic Jacobian `∂F_m/∂x_k`.
    fn jacobian(&self, roots: &[Complex64]) -> DMatrix<Complex64> {
        let n = roots.len();
        let mut jac = DMatrix::zeros(n, n);
        for m in 0..n {
            let x = roots[m];
            let mut diag = Complex64::ZERO;
            for (p, w) in self.poles.iter().zip(&self.weights) {
                let d = Complex64::new(*p, 0.0) - x;
                diag += -w / (d * d);
            }
            if self.zero_root {
                diag += (x * x).inv();
            }
            for (k, y) in roots.iter().enumerate() {
                if k != m {
                    let dd = ((x - y) * (x - y)).inv();
                    diag += dd;
                    jac[(m, k)] = -dd;
                }
            }
            jac[(m, m)] = diag;
        }
        jac
    }

    /// Distance from `x` to the nearest fixed pole (including the origin for
    /// zero-root systems).
    pub fn min_pole_distance(&self, x: Complex64) -> f64 {
        let mut d = self
            .poles
            .iter()
            .map(|&p| (x - Complex64::new(p, 0.0)).norm())
            .fold(f64::INFINITY, f64::min);
        if self.zero_root {
            d = d.min(x.norm());
        }
        d
    }

    /// Distinctness, pole-distance, and boundedness constraints on a
    /// candidate solution.
    pub fn admissible(&self, roots: &[Complex64], sep_tol: f64) -> bool {
        if roots.len() > 1 && min_separation(roots) <= sep_tol {
            return false;
        }
        self.in_bounds(roots) && roots.iter().all(|&r| self.min_pole_distance(r) > sep_tol)
    }
}

fn min_separation(roots: &[Complex64]) -> f64 {
    let mut min = f64::INFINITY;
    for i in 0..roots.len() {
        for k in (i + 1)..roots.len() {
            min = min.min((roots[i] - roots[k]).norm());
        }
    }
    min
}

/// Newton-iterate from `start` until the scaled residual drops below the
/// tolerance. Returns the converged roots, or `None` for diverged, stalled,
/// or coincident-root paths.
pub(crate) fn newton_polish(
    system: &BaeSystem,
    start: &[Complex64],
    params: &SolverParams,
) -> Option<Vec<Complex64>> {
    let n = start.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut roots = start.to_vec();
    let mut best = f64::INFINITY;
    let mut stall = 0usize;
    for _ in 0..params.max_iter {
        if !system.in_bounds(&roots) {
            return None;
        }
        let (f, scale) = system.values_and_scale(&roots);
        let res = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if !res.is_finite() {
            return None;
        }
        if res <= (params.newton_tol * scale.max(1.0)).max(4.0 * system.residual_floor(&roots)) {
            return Some(roots);
        }
        if res < best * 0.99 {
            best = res;
            stall = 0;
        } else {
            stall += 1;
            if stall > 12 {
                return None;
            }
        }
        let jac = system.jacobian(&roots);
        let rhs = DVector::from_iterator(n, f.iter().map(|v| -v));
        let step = jac.lu().solve(&rhs)?;
        // clip: no root may move more than half its distance to the nearest pole
        let mut damp = 1.0f64;
        for m in 0..n {
            let dist = system.min_pole_distance(roots[m]);
            let len = step[m].norm();
            if len > 0.5 * dist {
                damp = damp.min(0.5 * dist / len);
            }
        }
        // damp further until the iterate keeps roots apart and off the poles
        let mut accepted = false;
        for _ in 0..10 {
            let trial: Vec<Complex64> =
                roots.iter().zip(step.iter()).map(|(r, s)| r + s * damp).collect();
            let sep_ok = n < 2 || min_separation(&trial) > 0.5 * params.separation_tol;
            let pole_ok =
                trial.iter().all(|&t| system.min_pole_distance(t) > 0.5 * params.separation_tol);
            if sep_ok && pole_ok {
                roots = trial;
                accepted = true;
                break;
            }
            damp *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    system.accepts(&roots, params.newton_tol).then_some(roots)
}
