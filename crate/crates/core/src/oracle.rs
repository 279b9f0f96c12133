//! Brute-force ground truth: dense per-sector diagonalization with joint
//! eigenbasis extraction, operator-identity audits, and the off-shell
//! action checks for the invariants.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{
    quasispin_generators, vacuum_state, LinearOperator, PairingMode, QuasispinBasis, StateVector,
};
use crate::operators::{
    build_half_rotation, build_pair_field, build_symmetry_b, FieldComponent, OperatorSet,
    PairField,
};
use crate::spectrum::empty_shell_eigenvalues;

/// Largest sector dimension the dense oracle will diagonalize.
pub const DENSE_DIMENSION_CAP: usize = 4096;

/// Gap below which adjacent eigenvalues are treated as degenerate when
/// extracting the joint eigenbasis.
pub const DEGENERACY_GAP_TOL: f64 = 1e-8;

/// Joint spectrum of one pair sector: energies and per-invariant eigenvalues
/// of a simultaneous eigenbasis.
pub struct OracleSpectrum {
    pub sector: u32,
    pub dim: usize,
    /// Hamiltonian eigenvalues, one per joint eigenvector.
    pub energies: Vec<f64>,
    /// Per state: the eigenvalue under each invariant, in invariant order.
    pub invariant_eigenvalues: Vec<Vec<f64>>,
    /// Joint eigenvectors over the sector basis.
    pub vectors: Vec<StateVector>,
    /// Per state: worst eigen-residual over the Hamiltonian and invariants.
    pub residuals: Vec<f64>,
}

impl OracleSpectrum {
    /// `(energy, e_1, ..., e_n)` tuple of state `i`.
    pub fn tuple(&self, i: usize) -> Vec<f64> {
        let mut t = Vec::with_capacity(1 + self.invariant_eigenvalues[i].len());
        t.push(self.energies[i]);
        t.extend_from_slice(&self.invariant_eigenvalues[i]);
        t
    }
}

/// Dense Hermitian diagonalization of the Hamiltonian restricted to the
/// sector, with degeneracies resolved by the invariants in fixed order.
pub fn exact_diagonalize_sector(ops: &OperatorSet, sector: u32) -> Result<OracleSpectrum> {
    diagonalize_sector_capped(ops, sector, DENSE_DIMENSION_CAP)
}

/// As [`exact_diagonalize_sector`] with an explicit dimension cap.
pub fn diagonalize_sector_capped(
    ops: &OperatorSet,
    sector: u32,
    cap: usize,
) -> Result<OracleSpectrum> {
    let sector_basis = QuasispinBasis::build(ops.scheme(), Some(sector))?;
    let dim = sector_basis.dim();
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let mut mats = Vec::with_capacity(1 + ops.invariants.len());
    for op in std::iter::once(&ops.hamiltonian).chain(ops.invariants.iter()) {
        let block = op.restrict_to_sector(sector)?;
        let dense = block
            .matrix()
            .to_dense_real(1e-12)
            .ok_or_else(|| Error::Verification("oracle operator has complex entries".into()))?;
        mats.push(dense);
    }

    let vectors = joint_eigenbasis(&mats, DEGENERACY_GAP_TOL);

    // Rayleigh values and residuals on the refined basis
    let n_states = dim;
    let mut energies = Vec::with_capacity(n_states);
    let mut invariant_eigenvalues = vec![Vec::with_capacity(mats.len() - 1); n_states];
    let mut residuals = vec![0.0f64; n_states];
    for (k, mat) in mats.iter().enumerate() {
        for i in 0..n_states {
            let v = vectors.column(i);
            let mv = mat * v;
            let val = v.dot(&mv);
            let res = (&mv - v * val).norm();
            residuals[i] = residuals[i].max(res);
            if k == 0 {
                energies.push(val);
            } else {
                invariant_eigenvalues[i].push(val);
            }
        }
    }

    // orthonormality of the joint basis
    let gram = vectors.transpose() * &vectors;
    let defect = (&gram - DMatrix::<f64>::identity(n_states, n_states)).norm();
    if defect > 1e-10 {
        return Err(Error::Verification(format!(
            "joint basis orthonormality defect {defect:.3e}"
        )));
    }
    for (i, r) in residuals.iter().enumerate() {
        if *r > 1e-8 {
            return Err(Error::Verification(format!(
                "joint eigenvector {i} in sector {sector} has residual {r:.3e}"
            )));
        }
    }

    // deterministic order: by (energy, invariant tuple)
    let mut order: Vec<usize> = (0..n_states).collect();
    order.sort_by(|&a, &b| {
        let ta = (energies[a], &invariant_eigenvalues[a]);
        let tb = (energies[b], &invariant_eigenvalues[b]);
        ta.partial_cmp(&tb).unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut out = OracleSpectrum {
        sector,
        dim,
        energies: Vec::with_capacity(n_states),
        invariant_eigenvalues: Vec::with_capacity(n_states),
        vectors: Vec::with_capacity(n_states),
        residuals: Vec::with_capacity(n_states),
    };
    for &i in &order {
        out.energies.push(energies[i]);
        out.invariant_eigenvalues.push(invariant_eigenvalues[i].clone());
        out.residuals.push(residuals[i]);
        let amp: Vec<Complex64> =
            vectors.column(i).iter().map(|&x| Complex64::new(x, 0.0)).collect();
        out.vectors.push(StateVector::new(&sector_basis, amp)?);
    }
    Ok(out)
}

/// Simultaneous eigenbasis of a family of commuting real symmetric matrices:
/// diagonalize the first, then split each degenerate cluster with the next
/// operator, recursively.
fn joint_eigenbasis(mats: &[DMatrix<f64>], gap_tol: f64) -> DMatrix<f64> {
    let dim = mats[0].nrows();
    let mut vectors = DMatrix::<f64>::identity(dim, dim);
    let mut clusters: Vec<(usize, usize)> = vec![(0, dim)];
    for mat in mats {
        let mut next_clusters = Vec::new();
        for &(start, len) in &clusters {
            if len == 1 {
                next_clusters.push((start, 1));
                continue;
            }
            let sub = vectors.columns(start, len).into_owned();
            let projected = {
                let p = sub.transpose() * mat * &sub;
                (&p + p.transpose()) * 0.5
            };
            let eig = SymmetricEigen::new(projected);
            let mut order: Vec<usize> = (0..len).collect();
            order.sort_by(|&a, &b| {
                eig.eigenvalues[a]
                    .partial_cmp(&eig.eigenvalues[b])
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            let mut rotated = DMatrix::<f64>::zeros(dim, len);
            let mut values = Vec::with_capacity(len);
            for (slot, &k) in order.iter().enumerate() {
                rotated.set_column(slot, &(&sub * eig.eigenvectors.column(k)));
                values.push(eig.eigenvalues[k]);
            }
            vectors.columns_mut(start, len).copy_from(&rotated);
            // split by gaps in the sorted values
            let mut cluster_start = 0usize;
            for i in 1..len {
                if values[i] - values[i - 1] > gap_tol {
                    next_clusters.push((start + cluster_start, i - cluster_start));
                    cluster_start = i;
                }
            }
            next_clusters.push((start + cluster_start, len - cluster_start));
        }
        clusters = next_clusters;
        if clusters.len() == dim {
            break;
        }
    }
    vectors
}

/// One checked identity in an audit report.
pub struct AuditEntry {
    pub label: String,
    pub value: f64,
    /// `Some(bound)`: pass iff `value < bound`.
    pub bound: Option<f64>,
    /// `Some(floor)`: pass iff `value > floor` (deliberately nonzero entries).
    pub floor: Option<f64>,
    pub pass: bool,
}

impl AuditEntry {
    fn below(label: impl Into<String>, value: f64, bound: f64) -> Self {
        AuditEntry { label: label.into(), value, bound: Some(bound), floor: None, pass: value < bound }
    }

    fn above(label: impl Into<String>, value: f64, floor: f64) -> Self {
        AuditEntry { label: label.into(), value, bound: None, floor: Some(floor), pass: value > floor }
    }
}

/// Result of an operator-identity audit.
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
    pub passed: bool,
}

impl AuditReport {
    fn from_entries(entries: Vec<AuditEntry>) -> Self {
        let passed = entries.iter().all(|e| e.pass);
        AuditReport { entries, passed }
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    /// Concatenate reports.
    pub fn merge(mut self, other: AuditReport) -> AuditReport {
        self.entries.extend(other.entries);
        self.passed = self.passed && other.passed;
        self
    }
}

const COMMUTATOR_TOL: f64 = 1e-10;
const HERMITICITY_TOL: f64 = 1e-12;
const RECONSTRUCTION_TOL: f64 = 1e-10;

fn relative_difference(a: &LinearOperator, b: &LinearOperator) -> Result<f64> {
    let diff = a.sub(b)?.frobenius_norm();
    let den = a.frobenius_norm().max(b.frobenius_norm()).max(1.0);
    Ok(diff / den)
}

/// Pairwise commutators of the invariant family with one another, the
/// Hamiltonian, and the number operator, plus the reconstruction identities
/// and Hermiticity checks of the active mode. Degenerate mode also audits
/// the half-rotation asymmetry and the hole-map symmetry.
pub fn commutator_audit(ops: &OperatorSet) -> Result<AuditReport> {
    let mut entries = Vec::new();
    let basis = ops.basis();
    let scheme = ops.scheme();
    let n = scheme.n_levels();
    let name = match scheme.mode() {
        PairingMode::Reduced => "R",
        PairingMode::Degenerate => "P",
        PairingMode::General => "I",
    };

    entries.push(AuditEntry::below(
        "hermiticity |H - H^dag|",
        ops.hamiltonian.hermiticity_defect(),
        HERMITICITY_TOL * ops.hamiltonian.frobenius_norm().max(1.0),
    ));
    for (j, inv) in ops.invariants.iter().enumerate() {
        entries.push(AuditEntry::below(
            format!("hermiticity |{name}_{j} - {name}_{j}^dag|"),
            inv.hermiticity_defect(),
            HERMITICITY_TOL * inv.frobenius_norm().max(1.0),
        ));
    }

    for j in 0..ops.invariants.len() {
        for jp in (j + 1)..ops.invariants.len() {
            entries.push(AuditEntry::below(
                format!("[{name}_{j}, {name}_{jp}]"),
                ops.invariants[j].relative_commutator_norm(&ops.invariants[jp])?,
                COMMUTATOR_TOL,
            ));
        }
        entries.push(AuditEntry::below(
            format!("[{name}_{j}, H]"),
            ops.invariants[j].relative_commutator_norm(&ops.hamiltonian)?,
            COMMUTATOR_TOL,
        ));
        entries.push(AuditEntry::below(
            format!("[{name}_{j}, N]"),
            ops.invariants[j].relative_commutator_norm(&ops.number_op)?,
            COMMUTATOR_TOL,
        ));
    }

    match scheme.mode() {
        PairingMode::Degenerate => {
            // H_D = |G| sum_j c_j^2 P_j
            let mut rebuilt = LinearOperator::zero_on(basis);
            for (j, inv) in ops.invariants.iter().enumerate() {
                rebuilt = rebuilt
                    .add(&inv.scale(Complex64::new(scheme.g() * scheme.c(j) * scheme.c(j), 0.0)))?;
            }
            entries.push(AuditEntry::below(
                "H_D = |G| sum c_j^2 P_j",
                relative_difference(&rebuilt, &ops.hamiltonian)?,
                RECONSTRUCTION_TOL,
            ));

            // sum_j P_j = N^2 - N(sum Omega + 1) + (1/4) sum_{j!=j'} Omega_j Omega_j'
            let mut total = LinearOperator::zero_on(basis);
            for inv in &ops.invariants {
                total = total.add(inv)?;
            }
            let omega_sum: f64 = (0..n).map(|j| scheme.omega(j) as f64).sum();
            let mut cross = 0.0;
            for j in 0..n {
                for jp in 0..n {
                    if j != jp {
                        cross += scheme.omega(j) as f64 * scheme.omega(jp) as f64;
                    }
                }
            }
            let nsq = ops.number_op.compose(&ops.number_op)?;
            let rhs = nsq
                .sub(&ops.number_op.scale(Complex64::new(omega_sum + 1.0, 0.0)))?
                .add(&LinearOperator::identity(basis).scale(Complex64::new(cross / 4.0, 0.0)))?;
            entries.push(AuditEntry::below(
                "sum P_j quadratic number formula",
                relative_difference(&total, &rhs)?,
                RECONSTRUCTION_TOL,
            ));

            // half-rotation asymmetry and hole-map symmetry
            let t = build_half_rotation(basis)?;
            let b = build_symmetry_b(basis)?;
            let mut max_pt = 0.0f64;
            for (j, inv) in ops.invariants.iter().enumerate() {
                entries.push(AuditEntry::below(
                    format!("[P_{j}, B]"),
                    inv.relative_commutator_norm(&b)?,
                    COMMUTATOR_TOL,
                ));
                max_pt = max_pt.max(inv.relative_commutator_norm(&t)?);
            }
            entries.push(AuditEntry::below(
                "[H_D, B]",
                ops.hamiltonian.relative_commutator_norm(&b)?,
                COMMUTATOR_TOL,
            ));
            entries.push(AuditEntry::above(
                "max_j [P_j, T] (no particle-hole symmetry)",
                max_pt,
                1e-6,
            ));
        }
        PairingMode::Reduced => {
            // N = sum_j (R_j + Omega_j/2)
            let mut total = LinearOperator::zero_on(basis);
            for inv in &ops.invariants {
                total = total.add(inv)?;
            }
            let half_cap: f64 = (0..n).map(|j| scheme.omega(j) as f64 / 2.0).sum();
            let rhs = ops
                .number_op
                .sub(&LinearOperator::identity(basis).scale(Complex64::new(half_cap, 0.0)))?;
            entries.push(AuditEntry::below(
                "sum R_j = N - sum Omega_j/2",
                relative_difference(&total, &rhs)?,
                RECONSTRUCTION_TOL,
            ));

            // H_R = sum(2eps_j - |G|d) R_j + |G|d (sum R)^2 - |G|d sum s_j(s_j+1) + sum eps_j Omega_j
            let gd = scheme.gd();
            let mut rebuilt = LinearOperator::zero_on(basis);
            for (j, inv) in ops.invariants.iter().enumerate() {
                rebuilt =
                    rebuilt.add(&inv.scale(Complex64::new(2.0 * scheme.epsilon(j) - gd, 0.0)))?;
            }
            let rsum = total;
            rebuilt = rebuilt.add(&rsum.compose(&rsum)?.scale(Complex64::new(gd, 0.0)))?;
            let casimir: f64 = (0..n)
                .map(|j| {
                    let s = scheme.omega(j) as f64 / 2.0;
                    s * (s + 1.0)
                })
                .sum();
            let kinetic_const: f64 =
                (0..n).map(|j| scheme.epsilon(j) * scheme.omega(j) as f64).sum();
            rebuilt = rebuilt.add(
                &LinearOperator::identity(basis)
                    .scale(Complex64::new(kinetic_const - gd * casimir, 0.0)),
            )?;
            entries.push(AuditEntry::below(
                "H_R from R_j (quadratic reconstruction)",
                relative_difference(&rebuilt, &ops.hamiltonian)?,
                RECONSTRUCTION_TOL,
            ));
        }
        PairingMode::General => {
            entries.push(AuditEntry::below(
                "[H, N]",
                ops.hamiltonian.relative_commutator_norm(&ops.number_op)?,
                COMMUTATOR_TOL,
            ));
        }
    }

    Ok(AuditReport::from_entries(entries))
}

/// Defining relations of the rational Gaudin algebra for the realization
/// `J(alpha; lambda)` at `pairs` random `(lambda, mu)` points.
pub fn gaudin_realization_audit(
    basis: &Arc<QuasispinBasis>,
    alphas: &[f64],
    pairs: usize,
    seed: u64,
) -> Result<AuditReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = alphas.iter().fold(1.0f64, |m, a| m.max(a.abs()));
    let mut entries = Vec::new();
    let field = |l: Complex64, comp| {
        build_pair_field(basis, &PairField::GaudinGeneral { alphas: alphas.to_vec(), lambda: l }, comp)
    };
    let mut sampled = 0usize;
    while sampled < pairs {
        let draw = |rng: &mut ChaCha8Rng| {
            Complex64::new(
                2.0 * scale * rng.random_range(-1.0..1.0),
                2.0 * scale * rng.random_range(-1.0..1.0),
            )
        };
        let lambda = draw(&mut rng);
        let mu = draw(&mut rng);
        let clear =
            |z: Complex64| alphas.iter().all(|&a| (z - Complex64::new(a, 0.0)).norm() > 0.05 * scale);
        if !clear(lambda) || !clear(mu) || (lambda - mu).norm() < 0.05 * scale {
            continue;
        }
        sampled += 1;

        let jl_p = field(lambda, FieldComponent::Raise)?;
        let jm_m = field(mu, FieldComponent::Lower)?;
        let jl_0 = field(lambda, FieldComponent::Weight)?;
        let jm_0 = field(mu, FieldComponent::Weight)?;
        let jm_p = field(mu, FieldComponent::Raise)?;

        let lhs = jl_p.commutator(&jm_m)?;
        let rhs = jl_0.sub(&jm_0)?.scale(Complex64::new(2.0, 0.0) / (lambda - mu));
        entries.push(AuditEntry::below(
            format!("[J+({lambda:.3}), J-({mu:.3})] relation"),
            relative_difference(&lhs, &rhs)?,
            COMMUTATOR_TOL,
        ));

        let lhs = jl_0.commutator(&jm_p)?;
        let rhs = jl_p.sub(&jm_p)?.scale(Complex64::ONE / (lambda - mu));
        entries.push(AuditEntry::below(
            format!("[J0({lambda:.3}), J+({mu:.3})] relation"),
            relative_difference(&lhs, &rhs)?,
            COMMUTATOR_TOL,
        ));
    }
    Ok(AuditReport::from_entries(entries))
}

/// The change of basis `S(x) = [J(1/c; sqrt x) + J(1/c; -sqrt x)]/2` at
/// `count` random complex points.
pub fn basis_change_audit(
    basis: &Arc<QuasispinBasis>,
    count: usize,
    seed: u64,
) -> Result<AuditReport> {
    let scheme = basis.scheme();
    if scheme.mode() != PairingMode::Degenerate {
        return Err(Error::InvalidScheme("basis-change audit needs a degenerate scheme".into()));
    }
    let alphas: Vec<f64> = (0..scheme.n_levels()).map(|j| 1.0 / scheme.c(j)).collect();
    let poles: Vec<f64> =
        (0..scheme.n_levels()).map(|j| 1.0 / (scheme.c(j) * scheme.c(j))).collect();
    let scale = poles.iter().fold(1.0f64, |m, p| m.max(*p));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    let mut sampled = 0usize;
    while sampled < count {
        let x = Complex64::new(
            1.5 * scale * rng.random_range(-1.0..1.0),
            1.5 * scale * rng.random_range(-1.0..1.0),
        );
        if poles.iter().any(|&p| (x - Complex64::new(p, 0.0)).norm() < 0.05 * scale) {
            continue;
        }
        let sq = x.sqrt();
        if alphas.iter().any(|&a| {
            (sq - Complex64::new(a, 0.0)).norm() < 0.02 || (sq + Complex64::new(a, 0.0)).norm() < 0.02
        }) {
            continue;
        }
        sampled += 1;
        for comp in [FieldComponent::Raise, FieldComponent::Lower] {
            let direct = build_pair_field(basis, &PairField::DegenerateS { x }, comp)?;
            let jp = build_pair_field(
                basis,
                &PairField::GaudinGeneral { alphas: alphas.clone(), lambda: sq },
                comp,
            )?;
            let jm = build_pair_field(
                basis,
                &PairField::GaudinGeneral { alphas: alphas.clone(), lambda: -sq },
                comp,
            )?;
            let combo = jp.add(&jm)?.scale(Complex64::new(0.5, 0.0));
            entries.push(AuditEntry::below(
                format!("S({x:.3}) basis change"),
                relative_difference(&direct, &combo)?,
                COMMUTATOR_TOL,
            ));
        }
    }
    Ok(AuditReport::from_entries(entries))
}

/// Off-shell action of one invariant on a one-pair trial state:
/// `P_j S+(x)|0> = (E_j0 - Omega_j/(1-c_j^2 x)) S+(x)|0>
///   + x (sum_j' Omega_j'/(1/c_j'^2 - x)) c_j S_j+/(1-c_j^2 x) |0>`.
/// Returns the relative deviation, which must vanish for every `x` off the
/// poles; no Bethe equation is assumed.
pub fn offshell_action_check(basis: &Arc<QuasispinBasis>, j: usize, x: Complex64) -> Result<f64> {
    multi_pair_offshell_check(basis, j, &[x])
}

/// The `N`-pair generalization: the action of `P_j` on
/// `S+(x_1)...S+(x_N)|0>` expands into the diagonal term with coefficient
/// `E_j0 - sum_k Omega_j/(1-c_j^2 x_k)` plus one remainder per root `k`,
/// weighted by `x_k (sum_{l!=k} 2/(x_k-x_l) + sum_j' Omega_j'/(1/c_j'^2 - x_k))`,
/// in which the `k`-th factor is replaced by `c_j S_j+/(1-c_j^2 x_k)`.
pub fn multi_pair_offshell_check(
    basis: &Arc<QuasispinBasis>,
    j: usize,
    roots: &[Complex64],
) -> Result<f64> {
    let scheme = basis.scheme();
    if scheme.mode() != PairingMode::Degenerate {
        return Err(Error::InvalidScheme("off-shell checks need a degenerate scheme".into()));
    }
    if j >= scheme.n_levels() {
        return Err(Error::InvalidScheme(format!("level index {j} out of range")));
    }
    for (a, xa) in roots.iter().enumerate() {
        for xb in roots.iter().skip(a + 1) {
            if (xa - xb).norm() < 1e-9 {
                return Err(Error::InvalidScheme("off-shell roots must be distinct".into()));
            }
        }
    }
    let invariants = crate::operators::build_degenerate_invariants(basis)?;
    let gens = quasispin_generators(basis)?;
    let vac = vacuum_state(basis)?;
    let n = scheme.n_levels();
    let e0 = empty_shell_eigenvalues(scheme)?;

    let factors: Result<Vec<LinearOperator>> = roots
        .iter()
        .map(|&x| build_pair_field(basis, &PairField::DegenerateS { x }, FieldComponent::Raise))
        .collect();
    let factors = factors?;
    let mut product_state = vac.clone();
    for f in factors.iter().rev() {
        product_state = f.apply(&product_state)?;
    }
    let lhs = invariants[j].apply(&product_state)?;

    // diagonal coefficient
    let cj2 = scheme.c(j) * scheme.c(j);
    let mut diag = Complex64::new(e0[j], 0.0);
    for &x in roots {
        diag -= Complex64::new(scheme.omega(j) as f64, 0.0) / (Complex64::ONE - cj2 * x);
    }
    let mut rhs = product_state.scale(diag);

    // remainder terms
    for (k, &xk) in roots.iter().enumerate() {
        let mut bracket = Complex64::ZERO;
        for (l, &xl) in roots.iter().enumerate() {
            if l != k {
                bracket += Complex64::new(2.0, 0.0) / (xk - xl);
            }
        }
        for jp in 0..n {
            let p = 1.0 / (scheme.c(jp) * scheme.c(jp));
            bracket += Complex64::new(scheme.omega(jp) as f64, 0.0) / (Complex64::new(p, 0.0) - xk);
        }
        let weight = xk * bracket;
        if weight.norm() == 0.0 {
            continue;
        }
        let replaced =
            gens[j].raise.scale(Complex64::new(scheme.c(j), 0.0) / (Complex64::ONE - cj2 * xk));
        let mut term = vac.clone();
        for (i, f) in factors.iter().enumerate().rev() {
            term = if i == k { replaced.apply(&term)? } else { f.apply(&term)? };
        }
        rhs = rhs.add(&term.scale(weight));
    }

    let denom = product_state.norm().max(1e-300);
    Ok(lhs.sub(&rhs).norm() / denom)
}

/// Sample the off-shell identities at random levels, points, and root sets.
pub fn offshell_audit(
    basis: &Arc<QuasispinBasis>,
    single_samples: usize,
    multi_samples: usize,
    seed: u64,
) -> Result<AuditReport> {
    let scheme = basis.scheme();
    let poles: Vec<f64> =
        (0..scheme.n_levels()).map(|j| 1.0 / (scheme.c(j) * scheme.c(j))).collect();
    let scale = poles.iter().fold(1.0f64, |m, p| m.max(*p));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();

    let draw_point = |rng: &mut ChaCha8Rng| loop {
        let x = Complex64::new(
            1.5 * scale * rng.random_range(-1.0..1.0),
            1.5 * scale * rng.random_range(-1.0..1.0),
        );
        if poles.iter().all(|&p| (x - Complex64::new(p, 0.0)).norm() > 0.05 * scale) {
            return x;
        }
    };

    for s in 0..single_samples {
        let j = rng.random_range(0..scheme.n_levels());
        let x = draw_point(&mut rng);
        let dev = offshell_action_check(basis, j, x)?;
        entries.push(AuditEntry::below(
            format!("off-shell single sample {s} (level {j})"),
            dev,
            1e-10,
        ));
    }

    let max_roots = (scheme.pair_capacity() as usize).clamp(2, 4);
    for s in 0..multi_samples {
        let j = rng.random_range(0..scheme.n_levels());
        let count = rng.random_range(2..=max_roots);
        let mut roots: Vec<Complex64> = Vec::with_capacity(count);
        while roots.len() < count {
            let x = draw_point(&mut rng);
            if roots.iter().all(|r| (r - x).norm() > 0.05 * scale) {
                roots.push(x);
            }
        }
        let dev = multi_pair_offshell_check(basis, j, &roots)?;
        entries.push(AuditEntry::below(
            format!("off-shell multi sample {s} ({count} roots, level {j})"),
            dev,
            1e-10,
        ));
    }
    Ok(AuditReport::from_entries(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{Level, LevelScheme};
    use crate::operators::build_hamiltonian;

    fn scheme(
        omegas: &[u32],
        epsilons: &[f64],
        cs: &[f64],
        g: f64,
        mode: PairingMode,
    ) -> Arc<LevelScheme> {
        let levels = omegas
            .iter()
            .zip(epsilons)
            .zip(cs)
            .map(|((&omega, &epsilon), &c)| Level { omega, epsilon, c })
            .collect();
        Arc::new(LevelScheme::new(levels, g, mode).unwrap())
    }

    fn degenerate_ops() -> OperatorSet {
        let s = scheme(
            &[1, 1],
            &[0.0, 0.0],
            &[0.2f64.sqrt(), 0.8f64.sqrt()],
            1.0,
            PairingMode::Degenerate,
        );
        let b = QuasispinBasis::build(&s, None).unwrap();
        OperatorSet::build(&b).unwrap()
    }

    #[test]
    fn vacuum_sector_has_zero_energy() {
        let ops = degenerate_ops();
        let spec = exact_diagonalize_sector(&ops, 0).unwrap();
        assert_eq!(spec.dim, 1);
        assert!(spec.energies[0].abs() < 1e-12);
    }

    #[test]
    fn one_pair_sector_spectrum() {
        // H_D spectrum in N=1 is {-1, 0}: the collective pair and the orthogonal state
        let ops = degenerate_ops();
        let spec = exact_diagonalize_sector(&ops, 1).unwrap();
        assert_eq!(spec.dim, 2);
        assert!((spec.energies[0] + 1.0).abs() < 1e-12);
        assert!(spec.energies[1].abs() < 1e-12);
    }

    #[test]
    fn full_sector_eigenvalue() {
        let ops = degenerate_ops();
        let spec = exact_diagonalize_sector(&ops, 2).unwrap();
        assert_eq!(spec.dim, 1);
        assert!((spec.energies[0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn energies_recombine_from_invariant_eigenvalues() {
        let s = scheme(&[2, 1, 1], &[0.0; 3], &[0.25, 0.55, 0.85], 0.9, PairingMode::Degenerate);
        let b = QuasispinBasis::build(&s, None).unwrap();
        let ops = OperatorSet::build(&b).unwrap();
        for sector in 0..=s.pair_capacity() {
            let spec = exact_diagonalize_sector(&ops, sector).unwrap();
            for i in 0..spec.dim {
                let rebuilt: f64 = (0..3)
                    .map(|j| s.g() * s.c(j) * s.c(j) * spec.invariant_eigenvalues[i][j])
                    .sum();
                assert!(
                    (rebuilt - spec.energies[i]).abs() < 1e-9,
                    "sector {sector} state {i}: {rebuilt} vs {}",
                    spec.energies[i]
                );
            }
        }
    }

    #[test]
    fn reduced_magnet_eigenvalues_sum_to_sector_offset() {
        let s = scheme(&[2, 1], &[0.0, 1.3], &[1.0, 1.0], 0.4, PairingMode::Reduced);
        let b = QuasispinBasis::build(&s, None).unwrap();
        let ops = OperatorSet::build(&b).unwrap();
        let half_cap: f64 = 1.5;
        for sector in 0..=3u32 {
            let spec = exact_diagonalize_sector(&ops, sector).unwrap();
            for i in 0..spec.dim {
                let sum: f64 = spec.invariant_eigenvalues[i].iter().sum();
                assert!((sum + half_cap - sector as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dimension_cap_enforced() {
        let ops = degenerate_ops();
        assert!(matches!(
            diagonalize_sector_capped(&ops, 1, 1),
            Err(Error::DimensionCap { dim: 2, cap: 1 })
        ));
    }

    #[test]
    fn audit_passes_on_valid_schemes() {
        let ops = degenerate_ops();
        let report = commutator_audit(&ops).unwrap();
        assert!(
            report.passed,
            "failures: {:?}",
            report.failures().map(|e| &e.label).collect::<Vec<_>>()
        );

        let s = scheme(&[2, 1, 2], &[0.0, 0.8, 1.9], &[1.0, 1.0, 1.0], 0.5, PairingMode::Reduced);
        let b = QuasispinBasis::build(&s, None).unwrap();
        let ops = OperatorSet::build(&b).unwrap();
        let report = commutator_audit(&ops).unwrap();
        assert!(
            report.passed,
            "failures: {:?}",
            report.failures().map(|e| &e.label).collect::<Vec<_>>()
        );
    }

    #[test]
    fn sector_spectra_concatenate_to_dense_spectrum() {
        let s = scheme(&[1, 2], &[0.1, 0.9], &[0.6, 0.6], 0.7, PairingMode::Reduced);
        let b = QuasispinBasis::build(&s, None).unwrap();
        let h = build_hamiltonian(&b).unwrap();
        let ops = OperatorSet::build(&b).unwrap();
        let full = h.matrix().to_dense_real(1e-12).unwrap();
        let all = SymmetricEigen::new(full);
        let mut dense: Vec<f64> = all.eigenvalues.iter().copied().collect();
        dense.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut sector_vals = Vec::new();
        for sector in 0..=3 {
            sector_vals.extend(exact_diagonalize_sector(&ops, sector).unwrap().energies);
        }
        sector_vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (d, v) in dense.iter().zip(&sector_vals) {
            assert!((d - v).abs() < 1e-10);
        }
    }

    #[test]
    fn offshell_identity_at_origin_on_shell_and_off_shell() {
        let ops = degenerate_ops();
        let basis = ops.basis();
        // x = 0 kills the remainder term
        let dev = offshell_action_check(basis, 0, Complex64::ZERO).unwrap();
        assert!(dev < 1e-12);
        // the one-pair generic root is on shell
        let dev = offshell_action_check(basis, 1, Complex64::new(3.125, 0.0)).unwrap();
        assert!(dev < 1e-10);
        // a random off-shell complex point still satisfies the identity
        let dev = offshell_action_check(basis, 0, Complex64::new(1.7, 0.3)).unwrap();
        assert!(dev < 1e-10);
    }

    #[test]
    fn on_shell_remainder_coefficient_vanishes() {
        // at the generic root the bracket sum_j Omega_j/(1/c_j^2 - x) is zero
        let ops = degenerate_ops();
        let s = ops.scheme();
        let x = Complex64::new(3.125, 0.0);
        let mut bracket = Complex64::ZERO;
        for j in 0..2 {
            let p = 1.0 / (s.c(j) * s.c(j));
            bracket += Complex64::new(s.omega(j) as f64, 0.0) / (Complex64::new(p, 0.0) - x);
        }
        assert!(bracket.norm() < 1e-10);
    }

    #[test]
    fn offshell_rejects_coincident_roots() {
        let ops = degenerate_ops();
        let x = Complex64::new(1.7, 0.3);
        assert!(multi_pair_offshell_check(ops.basis(), 0, &[x, x]).is_err());
    }

    #[test]
    fn offshell_audit_samples_pass() {
        let s = scheme(&[2, 1], &[0.0, 0.0], &[0.35, 0.75], 1.1, PairingMode::Degenerate);
        let b = QuasispinBasis::build(&s, None).unwrap();
        let report = offshell_audit(&b, 10, 4, 7).unwrap();
        assert!(
            report.passed,
            "failures: {:?}",
            report.failures().map(|e| (&e.label, e.value)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn gaudin_and_basis_change_audits_pass() {
        let s = scheme(&[1, 2], &[0.0, 0.0], &[0.3, 0.8], 0.9, PairingMode::Degenerate);
        let b = QuasispinBasis::build(&s, None).unwrap();
        let alphas: Vec<f64> = (0..2).map(|j| 1.0 / s.c(j)).collect();
        assert!(gaudin_realization_audit(&b, &alphas, 5, 3).unwrap().passed);
        assert!(basis_change_audit(&b, 5, 5).unwrap().passed);
    }

    #[test]
    fn oracle_spectra_invariant_under_level_relabeling() {
        let s1 = scheme(&[2, 1, 1], &[0.0; 3], &[0.25, 0.55, 0.85], 0.9, PairingMode::Degenerate);
        let s2 = scheme(&[1, 1, 2], &[0.0; 3], &[0.85, 0.55, 0.25], 0.9, PairingMode::Degenerate);
        let b1 = QuasispinBasis::build(&s1, None).unwrap();
        let b2 = QuasispinBasis::build(&s2, None).unwrap();
        let o1 = OperatorSet::build(&b1).unwrap();
        let o2 = OperatorSet::build(&b2).unwrap();
        for sector in 0..=s1.pair_capacity() {
            let e1 = exact_diagonalize_sector(&o1, sector).unwrap().energies;
            let e2 = exact_diagonalize_sector(&o2, sector).unwrap().energies;
            for (a, b) in e1.iter().zip(&e2) {
                assert!((a - b).abs() < 1e-9, "sector {sector}");
            }
        }
    }
}
