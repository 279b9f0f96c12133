//! The model operators: pairing Hamiltonians, the commuting invariant
//! families of both integrable limits, parametrized pair fields, and the
//! half-rotation / hole-mapping operators.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{
    pair_number_operator, quasispin_generators, LevelOps, LinearOperator, PairingMode,
    QuasispinBasis,
};
use crate::sparse::CsMat;

/// Relative guard around the poles of parametrized fields.
const POLE_GUARD: f64 = 1e-10;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Hamiltonian plus its invariant family and the number operator, all over
/// one unrestricted basis.
pub struct OperatorSet {
    basis: Arc<QuasispinBasis>,
    pub hamiltonian: LinearOperator,
    /// `R̂_j` in reduced mode, `P̂_j` in degenerate mode, empty in general mode.
    pub invariants: Vec<LinearOperator>,
    pub number_op: LinearOperator,
}

impl OperatorSet {
    pub fn build(basis: &Arc<QuasispinBasis>) -> Result<Self> {
        let hamiltonian = build_hamiltonian(basis)?;
        let invariants = match basis.scheme().mode() {
            PairingMode::Reduced => build_gaudin_magnets(basis)?,
            PairingMode::Degenerate => build_degenerate_invariants(basis)?,
            PairingMode::General => Vec::new(),
        };
        Ok(OperatorSet {
            basis: Arc::clone(basis),
            hamiltonian,
            invariants,
            number_op: pair_number_operator(basis),
        })
    }

    pub fn basis(&self) -> &Arc<QuasispinBasis> {
        &self.basis
    }

    pub fn scheme(&self) -> &Arc<crate::hilbert::LevelScheme> {
        self.basis.scheme()
    }
}

fn require_unrestricted(basis: &Arc<QuasispinBasis>, what: &str) -> Result<()> {
    if basis.sector().is_some() {
        return Err(Error::BasisKind(format!("{what} needs the unrestricted basis")));
    }
    Ok(())
}

/// The pairing Hamiltonian in quasispin form,
/// `Ĥ = Σ_j ε_j (2S_j⁰ + Ω_j) − |G| (Σ_j c_j S_j⁺)(Σ_j c_j S_j⁻)`.
///
/// The kinetic constant is kept so the empty shell has energy zero. In
/// degenerate mode the kinetic term is a multiple of `N̂` plus a constant and
/// is dropped entirely, leaving `Ĥ_D = −|G| S⁺(0) S⁻(0)`.
pub fn build_hamiltonian(basis: &Arc<QuasispinBasis>) -> Result<LinearOperator> {
    require_unrestricted(basis, "hamiltonian assembly")?;
    let scheme = basis.scheme();
    let gens = quasispin_generators(basis)?;
    let n = scheme.n_levels();

    let mut collective_raise = LinearOperator::zero_on(basis);
    for j in 0..n {
        collective_raise = collective_raise.add(&gens[j].raise.scale(re(scheme.c(j))))?;
    }
    let collective_lower = collective_raise.adjoint();
    let pairing = collective_raise.compose(&collective_lower)?.scale(re(-scheme.g()));

    if scheme.mode() == PairingMode::Degenerate {
        return Ok(pairing);
    }

    let mut kinetic = LinearOperator::zero_on(basis);
    for j in 0..n {
        let shifted = gens[j]
            .weight
            .scale(re(2.0))
            .add(&LinearOperator::identity(basis).scale(re(scheme.omega(j) as f64)))?;
        kinetic = kinetic.add(&shifted.scale(re(scheme.epsilon(j))))?;
    }
    kinetic.add(&pairing)
}

fn spin_dot(a: &LevelOps, b: &LevelOps) -> Result<LinearOperator> {
    let zz = a.weight.compose(&b.weight)?;
    let pm = a.raise.compose(&b.lower)?;
    let mp = a.lower.compose(&b.raise)?;
    zz.add(&pm.add(&mp)?.scale(re(0.5)))
}

/// The rational Gaudin magnets
/// `R̂_j = S_j⁰ − |G| d Σ_{j'≠j} S⃗_j·S⃗_{j'} / (ε_j − ε_{j'})`,
/// the invariants of the reduced pairing Hamiltonian.
pub fn build_gaudin_magnets(basis: &Arc<QuasispinBasis>) -> Result<Vec<LinearOperator>> {
    require_unrestricted(basis, "Gaudin magnet assembly")?;
    let scheme = basis.scheme();
    if scheme.mode() != PairingMode::Reduced {
        return Err(Error::InvalidScheme("Gaudin magnets need a reduced-mode scheme".into()));
    }
    let gens = quasispin_generators(basis)?;
    let gd = scheme.gd();
    let n = scheme.n_levels();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut r = gens[j].weight.clone();
        for jp in 0..n {
            if jp == j {
                continue;
            }
            let denom = scheme.epsilon(j) - scheme.epsilon(jp);
            let dot = spin_dot(&gens[j], &gens[jp])?;
            r = r.add(&dot.scale(re(-gd / denom)))?;
        }
        out.push(r);
    }
    Ok(out)
}

/// The invariants of the degenerate pairing Hamiltonian,
/// `P̂_j = −S_j⁺S_j⁻ + 2 Σ_{j'≠j} c_{j'}²/(c_{j'}²−c_j²) S_j⁰S_{j'}⁰
///        + Σ_{j'≠j} c_j c_{j'}/(c_{j'}²−c_j²) (S_j⁺S_{j'}⁻ + S_{j'}⁺S_j⁻)`.
pub fn build_degenerate_invariants(basis: &Arc<QuasispinBasis>) -> Result<Vec<LinearOperator>> {
    require_unrestricted(basis, "invariant assembly")?;
    let scheme = basis.scheme();
    if scheme.mode() != PairingMode::Degenerate {
        return Err(Error::InvalidScheme("degenerate invariants need a degenerate-mode scheme".into()));
    }
    let gens = quasispin_generators(basis)?;
    let n = scheme.n_levels();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let cj = scheme.c(j);
        let mut p = gens[j].raise.compose(&gens[j].lower)?.scale(re(-1.0));
        for jp in 0..n {
            if jp == j {
                continue;
            }
            let cjp = scheme.c(jp);
            let denom = cjp * cjp - cj * cj;
            let zz = gens[j].weight.compose(&gens[jp].weight)?;
            p = p.add(&zz.scale(re(2.0 * cjp * cjp / denom)))?;
            let exch = gens[j]
                .raise
                .compose(&gens[jp].lower)?
                .add(&gens[jp].raise.compose(&gens[j].lower)?)?;
            p = p.add(&exch.scale(re(cj * cjp / denom)))?;
        }
        out.push(p);
    }
    Ok(out)
}

/// Parametrized pair-field families.
#[derive(Debug, Clone, PartialEq)]
pub enum PairField {
    /// `J(ξ) = Σ_j S_j / (2ε_j − ξ)`, the Richardson field.
    RichardsonJ { xi: Complex64 },
    /// `S(x) = Σ_j c_j S_j / (1 − c_j² x)`, the degenerate-case field.
    DegenerateS { x: Complex64 },
    /// `J(α; λ) = Σ_j S_j / (α_j − λ)`, the generic rational Gaudin realization.
    GaudinGeneral { alphas: Vec<f64>, lambda: Complex64 },
}

/// Which su(2) component a pair field carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldComponent {
    Raise,
    Lower,
    Weight,
}

fn field_coefficients(scheme: &crate::hilbert::LevelScheme, field: &PairField) -> Result<Vec<Complex64>> {
    let n = scheme.n_levels();
    let mut coeffs = Vec::with_capacity(n);
    match field {
        PairField::RichardsonJ { xi } => {
            for j in 0..n {
                let denom = re(2.0 * scheme.epsilon(j)) - xi;
                if denom.norm() < POLE_GUARD * (1.0 + 2.0 * scheme.epsilon(j).abs()) {
                    return Err(Error::PoleProximity {
                        value: format!("{xi}"),
                        pole: format!("2*epsilon_{j} = {}", 2.0 * scheme.epsilon(j)),
                        tol: POLE_GUARD,
                    });
                }
                coeffs.push(denom.inv());
            }
        }
        PairField::DegenerateS { x } => {
            for j in 0..n {
                let c2 = scheme.c(j) * scheme.c(j);
                let pole = 1.0 / c2;
                if (x - re(pole)).norm() < POLE_GUARD * pole.max(1.0) {
                    return Err(Error::PoleProximity {
                        value: format!("{x}"),
                        pole: format!("1/c_{j}^2 = {pole}"),
                        tol: POLE_GUARD,
                    });
                }
                coeffs.push(re(scheme.c(j)) / (re(1.0) - re(c2) * x));
            }
        }
        PairField::GaudinGeneral { alphas, lambda } => {
            if alphas.len() != n {
                return Err(Error::InvalidScheme(format!(
                    "gaudin field needs {n} alphas, got {}",
                    alphas.len()
                )));
            }
            for (j, &a) in alphas.iter().enumerate() {
                let denom = re(a) - lambda;
                if denom.norm() < POLE_GUARD * a.abs().max(1.0) {
                    return Err(Error::PoleProximity {
                        value: format!("{lambda}"),
                        pole: format!("alpha_{j} = {a}"),
                        tol: POLE_GUARD,
                    });
                }
                coeffs.push(denom.inv());
            }
        }
    }
    Ok(coeffs)
}

/// Assemble a parametrized pair field as an operator on the unrestricted basis.
pub fn build_pair_field(
    basis: &Arc<QuasispinBasis>,
    field: &PairField,
    component: FieldComponent,
) -> Result<LinearOperator> {
    require_unrestricted(basis, "pair field assembly")?;
    let coeffs = field_coefficients(basis.scheme(), field)?;
    let gens = quasispin_generators(basis)?;
    let mut out = LinearOperator::zero_on(basis);
    for (j, coeff) in coeffs.into_iter().enumerate() {
        let gen = match component {
            FieldComponent::Raise => &gens[j].raise,
            FieldComponent::Lower => &gens[j].lower,
            FieldComponent::Weight => &gens[j].weight,
        };
        out = out.add(&gen.scale(coeff))?;
    }
    Ok(out)
}

/// The half rotation `T̂ = exp(−iπ Σ_j (S_j⁺ + S_j⁻)/2)`.
///
/// Per level the rotation takes `|N_j⟩` to `(−i)^{Ω_j} |Ω_j − N_j⟩`, so the
/// whole operator is the occupation flip times the phase `(−i)^{N_max}`;
/// exact unitarity with no exponential tolerance. It conjugates `S_j^±` into
/// `S_j^∓` and `S_j⁰` into `−S_j⁰`, and maps the empty shell to the full
/// shell up to the global phase.
pub fn build_half_rotation(basis: &Arc<QuasispinBasis>) -> Result<LinearOperator> {
    require_unrestricted(basis, "half rotation (mixes pair sectors so it")?;
    let scheme = basis.scheme();
    let phase = Complex64::new(0.0, -1.0).powu(scheme.pair_capacity());
    let triplets = (0..basis.dim()).map(|i| {
        let occ = basis.occupation(i);
        let flipped: Vec<u8> =
            occ.iter().enumerate().map(|(j, &nj)| scheme.omega(j) as u8 - nj).collect();
        let t = basis.index_of(&flipped).expect("flipped occupation in unrestricted basis");
        (t, i, phase)
    });
    Ok(LinearOperator::square(basis, CsMat::from_triplets(basis.dim(), basis.dim(), triplets)))
}

/// The hole-mapping operator `B̂ = T̂† S⁻(0)`, which commutes with every
/// invariant and with `Ĥ_D` and sends `N`-pair eigenstates to eigenstates
/// with `N−1` hole pairs.
pub fn build_symmetry_b(basis: &Arc<QuasispinBasis>) -> Result<LinearOperator> {
    require_unrestricted(basis, "symmetry operator assembly")?;
    if basis.scheme().mode() != PairingMode::Degenerate {
        return Err(Error::InvalidScheme("B operator is defined for degenerate-mode schemes".into()));
    }
    let t = build_half_rotation(basis)?;
    let s_minus_0 =
        build_pair_field(basis, &PairField::DegenerateS { x: Complex64::ZERO }, FieldComponent::Lower)?;
    t.adjoint().compose(&s_minus_0)
}
