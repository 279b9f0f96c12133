//! Homotopy continuation for the Richardson equations.
//!
//! At weak coupling the roots cluster around the unperturbed pair energies
//! `2ε_j`, one cluster per occupied level of each occupancy configuration
//! `(N_1, …, N_n)`, `Σ N_j = N`. Within a cluster of `q` roots the first-order
//! offsets `δ_k` solve the electrostatic problem
//! `Σ_{l≠k} 2/(δ_k − δ_l) − Ω/δ_k = 1`, whose solutions are the roots of a
//! degree-`q` polynomial (an associated Laguerre polynomial with negative
//! parameter). Each configuration seeds one continuation path
//! `ξ_k ≈ 2ε_j + |G|d δ_k`, tracked to the target coupling with adaptive step
//! halving and, if a real-axis collision blocks the path, a detour through
//! complex coupling.

use num_complex::Complex64;
use rayon::prelude::*;

use super::newton::{newton_polish, BaeSystem};
use super::BetheProblem;
use crate::hilbert::LevelScheme;
use crate::poly;

/// All level occupancies `(N_1, …, N_n)` with `0 ≤ N_j ≤ Ω_j` and `Σ N_j = N`.
/// Their count equals the dimension of the `N`-pair sector.
pub fn occupancy_configs(scheme: &LevelScheme, n_pairs: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; scheme.n_levels()];
    fn recurse(
        scheme: &LevelScheme,
        level: usize,
        remaining: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if level == scheme.n_levels() {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let cap: u32 = (level..scheme.n_levels()).map(|j| scheme.omega(j)).sum();
        if remaining > cap {
            return;
        }
        for nj in 0..=scheme.omega(level).min(remaining) {
            current[level] = nj;
            recurse(scheme, level + 1, remaining - nj, current, out);
        }
        current[level] = 0;
    }
    recurse(scheme, 0, n_pairs, &mut current, &mut out);
    out
}

/// First-order weak-coupling offsets of a `q`-root cluster on a level of
/// capacity `Ω`: the roots of the monic polynomial solving
/// `δ p'' − (Ω + δ) p' + q p = 0`.
pub fn laguerre_cluster_offsets(omega: u32, q: usize) -> Vec<Complex64> {
    let mut coeffs = vec![0.0f64; q + 1];
    coeffs[q] = 1.0;
    for i in (0..q).rev() {
        coeffs[i] =
            coeffs[i + 1] * (i as f64 + 1.0) * (i as f64 - omega as f64) / (i as f64 - q as f64);
    }
    poly::real_coeff_roots(&coeffs)
}

fn seed_roots(scheme: &LevelScheme, config: &[u32], g: f64) -> Vec<Complex64> {
    let d = scheme.level_spacing();
    let mut roots = Vec::new();
    for (j, &q) in config.iter().enumerate() {
        if q == 0 {
            continue;
        }
        let base = Complex64::new(2.0 * scheme.epsilon(j), 0.0);
        for delta in laguerre_cluster_offsets(scheme.omega(j), q as usize) {
            roots.push(base + Complex64::new(g * d, 0.0) * delta);
        }
    }
    roots
}

fn max_cluster_offset(scheme: &LevelScheme, config: &[u32]) -> f64 {
    config
        .iter()
        .enumerate()
        .filter(|&(_, &q)| q > 0)
        .flat_map(|(j, &q)| laguerre_cluster_offsets(scheme.omega(j), q as usize))
        .map(|d| d.norm())
        .fold(1.0, f64::max)
}

fn min_level_gap(scheme: &LevelScheme) -> f64 {
    let n = scheme.n_levels();
    let mut gap = f64::INFINITY;
    for j in 0..n {
        for k in (j + 1)..n {
            gap = gap.min(2.0 * (scheme.epsilon(j) - scheme.epsilon(k)).abs());
        }
    }
    gap
}

/// Walk the coupling from `g_from` to `g_to` along a log-linear path,
/// re-polishing the roots at every step, with adaptive step halving.
fn walk_coupling(
    problem: &BetheProblem,
    roots: &mut Vec<Complex64>,
    g_from: Complex64,
    g_to: Complex64,
) -> bool {
    if (g_from - g_to).norm() < 1e-300 {
        return true;
    }
    let log_from = g_from.ln();
    let log_to = g_to.ln();
    let mut t = 0.0f64;
    let mut dt = 0.25f64;
    let mut here = roots.clone();
    while t < 1.0 {
        let t_next = (t + dt).min(1.0);
        let g = ((1.0 - t_next) * log_from + t_next * log_to).exp();
        let sys = BaeSystem::richardson_with_coupling(&problem.scheme, g);
        match newton_polish(&sys, &here, &problem.params) {
            Some(next) => {
                here = next;
                t = t_next;
                dt = (dt * 1.6).min(0.25);
            }
            None => {
                dt *= 0.5;
                if dt < 1e-4 {
                    return false;
                }
            }
        }
    }
    *roots = here;
    true
}

fn track_config(problem: &BetheProblem, config: &[u32]) -> Option<Vec<Complex64>> {
    let scheme = &problem.scheme;
    let g_target = scheme.g();
    let d = scheme.level_spacing();
    let gap = min_level_gap(scheme);
    let mut g0 = g_target;
    if gap.is_finite() {
        g0 = g_target.min(1e-3 * gap / (d * max_cluster_offset(scheme, config)));
    }

    // polish the asymptotic seeds at g0, retrying with smaller g0 if needed
    let mut roots = None;
    let mut g_here = g0;
    for attempt in 0..4 {
        let g_try = g0 * 0.1f64.powi(attempt);
        let seeds = seed_roots(scheme, config, g_try);
        let sys = BaeSystem::richardson_with_coupling(scheme, Complex64::new(g_try, 0.0));
        if let Some(polished) = newton_polish(&sys, &seeds, &problem.params) {
            roots = Some(polished);
            g_here = g_try;
            break;
        }
    }
    let mut roots = roots?;

    let g_start = Complex64::new(g_here, 0.0);
    let g_end = Complex64::new(g_target, 0.0);
    if !walk_coupling(problem, &mut roots, g_start, g_end) {
        // real-axis collision: detour through complex coupling
        let lift = Complex64::new(1.0, 0.2);
        let ok = walk_coupling(problem, &mut roots, g_start, g_start * lift)
            && walk_coupling(problem, &mut roots, g_start * lift, g_end * lift)
            && walk_coupling(problem, &mut roots, g_end * lift, g_end);
        if !ok {
            log::warn!("continuation path failed for occupancy {config:?}");
            return None;
        }
    }

    // final polish on the exact target system
    let sys = BaeSystem::richardson_with_coupling(scheme, g_end);
    newton_polish(&sys, &roots, &problem.params)
}

/// Track every weak-coupling configuration to the target coupling. Failed
/// paths are dropped (reported via log), not fatal.
pub(crate) fn track_all_configs(problem: &BetheProblem) -> Vec<Vec<Complex64>> {
    let configs = occupancy_configs(&problem.scheme, problem.pair_count);
    configs.par_iter().filter_map(|config| track_config(problem, config)).collect()
}
