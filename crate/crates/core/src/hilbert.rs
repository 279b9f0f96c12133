//! Seniority-zero Hilbert space in the quasispin representation.
//!
//! Each level `j` with pair capacity `Ω_j` carries the spin-`Ω_j/2` irrep of
//! its quasispin su(2) algebra; the many-level space is the tensor product.
//! Basis states are labelled by per-level pair counts `N_j ∈ 0..=Ω_j`
//! (weights `m_j = N_j − Ω_j/2`), optionally restricted to a fixed total
//! pair number.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sparse::CsMat;

/// Minimum separation demanded of the quantities that enter invariant
/// denominators: `c_j²` in degenerate mode, `ε_j` in reduced mode.
pub const DISTINCTNESS_TOL: f64 = 1e-9;

/// Which integrable limit (if any) a scheme targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingMode {
    /// Orbit-dependent pairing with no integrability assumption.
    General,
    /// Equal amplitudes, distinct level energies (Richardson).
    Reduced,
    /// Equal level energies, distinct amplitudes.
    Degenerate,
}

impl fmt::Display for PairingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairingMode::General => write!(f, "general"),
            PairingMode::Reduced => write!(f, "reduced"),
            PairingMode::Degenerate => write!(f, "degenerate"),
        }
    }
}

/// One single-particle level: pair capacity, energy, occupation amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub omega: u32,
    pub epsilon: f64,
    pub c: f64,
}

/// Validated model input: levels, coupling strength `|G|`, and mode flag.
///
/// Amplitudes are normalized to `Σ c_j² = 1` on construction; the applied
/// scale factor is retained for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelScheme {
    levels: Vec<Level>,
    g: f64,
    mode: PairingMode,
    norm_scale: f64,
}

impl LevelScheme {
    pub fn new(levels: Vec<Level>, g: f64, mode: PairingMode) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidScheme("scheme needs at least one level".into()));
        }
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidScheme(format!("coupling |G| must be finite and >= 0, got {g}")));
        }
        for (j, lv) in levels.iter().enumerate() {
            if lv.omega < 1 {
                return Err(Error::InvalidScheme(format!("level {j}: pair capacity omega must be >= 1")));
            }
            if !lv.epsilon.is_finite() {
                return Err(Error::InvalidScheme(format!("level {j}: epsilon must be finite")));
            }
            if !lv.c.is_finite() || lv.c <= 0.0 {
                return Err(Error::InvalidScheme(format!(
                    "level {j}: amplitude c must be finite and > 0, got {}",
                    lv.c
                )));
            }
        }
        let sumsq: f64 = levels.iter().map(|lv| lv.c * lv.c).sum();
        let norm_scale = sumsq.sqrt();
        let mut levels = levels;
        for lv in &mut levels {
            lv.c /= norm_scale;
        }
        if (norm_scale - 1.0).abs() > 1e-12 {
            log::info!("amplitudes rescaled by 1/{norm_scale:.17e} to enforce sum(c^2) = 1");
        }

        let n = levels.len();
        match mode {
            PairingMode::General => {}
            PairingMode::Reduced => {
                for j in 0..n {
                    for k in (j + 1)..n {
                        if (levels[j].c - levels[k].c).abs() > DISTINCTNESS_TOL {
                            return Err(Error::InvalidScheme(format!(
                                "reduced mode requires equal amplitudes; levels {j} and {k} differ"
                            )));
                        }
                        if (levels[j].epsilon - levels[k].epsilon).abs() <= DISTINCTNESS_TOL {
                            return Err(Error::InvalidScheme(format!(
                                "reduced mode requires pairwise distinct epsilon (tol {DISTINCTNESS_TOL:e}); \
                                 levels {j} and {k} coincide"
                            )));
                        }
                    }
                }
            }
            PairingMode::Degenerate => {
                for j in 0..n {
                    for k in (j + 1)..n {
                        if (levels[j].epsilon - levels[k].epsilon).abs() > DISTINCTNESS_TOL {
                            return Err(Error::InvalidScheme(format!(
                                "degenerate mode requires equal epsilon; levels {j} and {k} differ"
                            )));
                        }
                        let dj = levels[j].c * levels[j].c;
                        let dk = levels[k].c * levels[k].c;
                        if (dj - dk).abs() <= DISTINCTNESS_TOL {
                            return Err(Error::InvalidScheme(format!(
                                "degenerate mode requires pairwise distinct c^2 (tol {DISTINCTNESS_TOL:e}); \
                                 levels {j} and {k} coincide"
                            )));
                        }
                    }
                }
            }
        }
        Ok(LevelScheme { levels, g, mode, norm_scale })
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn omega(&self, j: usize) -> u32 {
        self.levels[j].omega
    }

    pub fn epsilon(&self, j: usize) -> f64 {
        self.levels[j].epsilon
    }

    /// Normalized amplitude `c_j`.
    pub fn c(&self, j: usize) -> f64 {
        self.levels[j].c
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn mode(&self) -> PairingMode {
        self.mode
    }

    /// Scale divided out of the input amplitudes to reach `Σ c² = 1`.
    pub fn norm_scale(&self) -> f64 {
        self.norm_scale
    }

    /// Maximum total pair number `N_max = Σ_j Ω_j`.
    pub fn pair_capacity(&self) -> u32 {
        self.levels.iter().map(|lv| lv.omega).sum()
    }

    /// Richardson level spacing `d = 1/n`, fixed by the amplitude
    /// normalization in reduced mode.
    pub fn level_spacing(&self) -> f64 {
        1.0 / self.levels.len() as f64
    }

    /// Effective pairing strength in reduced mode, `|G|·d`.
    pub fn gd(&self) -> f64 {
        self.g * self.level_spacing()
    }
}

/// Enumerated product basis of per-level pair counts, optionally restricted
/// to a fixed total pair number. Ordering is lexicographic in the occupation
/// tuple and therefore deterministic.
#[derive(Debug)]
pub struct QuasispinBasis {
    scheme: Arc<LevelScheme>,
    sector: Option<u32>,
    states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl QuasispinBasis {
    /// Build the (sector-restricted) product basis.
    pub fn build(scheme: &Arc<LevelScheme>, sector: Option<u32>) -> Result<Arc<Self>> {
        if let Some(n) = sector {
            let max = scheme.pair_capacity();
            if n > max {
                return Err(Error::SectorOutOfRange { sector: n, max });
            }
        }
        let n_levels = scheme.n_levels();
        let mut states = Vec::new();
        let mut occ = vec![0u8; n_levels];
        // odometer enumeration, lexicographic
        loop {
            let total: u32 = occ.iter().map(|&x| x as u32).sum();
            if sector.map_or(true, |s| total == s) {
                states.push(occ.clone());
            }
            let mut pos = n_levels;
            while pos > 0 {
                pos -= 1;
                if (occ[pos] as u32) < scheme.omega(pos) {
                    occ[pos] += 1;
                    for o in occ.iter_mut().skip(pos + 1) {
                        *o = 0;
                    }
                    break;
                }
                if pos == 0 {
                    let index =
                        states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
                    return Ok(Arc::new(QuasispinBasis {
                        scheme: Arc::clone(scheme),
                        sector,
                        states,
                        index,
                    }));
                }
            }
        }
    }

    pub fn scheme(&self) -> &Arc<LevelScheme> {
        &self.scheme
    }

    pub fn sector(&self) -> Option<u32> {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Per-level pair counts of basis state `i`.
    pub fn occupation(&self, i: usize) -> &[u8] {
        &self.states[i]
    }

    pub fn index_of(&self, occ: &[u8]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    /// Quasispin weight `m_j = N_j − Ω_j/2` of basis state `i` at level `j`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.states[i][j] as f64 - self.scheme.omega(j) as f64 / 2.0
    }

    /// Total pair count of basis state `i`.
    pub fn pair_count(&self, i: usize) -> u32 {
        self.states[i].iter().map(|&x| x as u32).sum()
    }

    /// Indices of the unrestricted basis states lying in pair sector `n`.
    pub fn sector_indices(&self, n: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.pair_count(i) == n).collect()
    }

    fn same_space(&self, other: &QuasispinBasis) -> bool {
        std::ptr::eq(self, other)
            || (self.sector == other.sector
                && self.scheme.as_ref() == other.scheme.as_ref()
                && self.states == other.states)
    }
}

/// Complex amplitude vector over a basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: Arc<QuasispinBasis>,
    amp: Vec<Complex64>,
}

impl StateVector {
    pub fn new(basis: &Arc<QuasispinBasis>, amp: Vec<Complex64>) -> Result<Self> {
        if amp.len() != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "amplitude length {} vs basis dimension {}",
                amp.len(),
                basis.dim()
            )));
        }
        Ok(StateVector { basis: Arc::clone(basis), amp })
    }

    pub fn zero(basis: &Arc<QuasispinBasis>) -> Self {
        StateVector { basis: Arc::clone(basis), amp: vec![Complex64::ZERO; basis.dim()] }
    }

    /// Unit vector on a single basis state.
    pub fn basis_state(basis: &Arc<QuasispinBasis>, i: usize) -> Self {
        let mut v = Self::zero(basis);
        v.amp[i] = Complex64::ONE;
        v
    }

    pub fn basis(&self) -> &Arc<QuasispinBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hermitian inner product `⟨self|other⟩`.
    pub fn dot(&self, other: &StateVector) -> Complex64 {
        self.amp.iter().zip(&other.amp).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        StateVector { basis: Arc::clone(&self.basis), amp: self.amp.iter().map(|a| a * s).collect() }
    }

    pub fn add(&self, other: &StateVector) -> Self {
        StateVector {
            basis: Arc::clone(&self.basis),
            amp: self.amp.iter().zip(&other.amp).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &StateVector) -> Self {
        StateVector {
            basis: Arc::clone(&self.basis),
            amp: self.amp.iter().zip(&other.amp).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    /// Overlap of the rays spanned by two states: `|⟨u|v⟩| / (‖u‖‖v‖)`.
    pub fn ray_overlap(&self, other: &StateVector) -> f64 {
        self.dot(other).norm() / (self.norm() * other.norm())
    }
}

/// Sparse complex matrix mapping one basis into another (square when both
/// coincide, rectangular for sector-to-sector ladder blocks).
#[derive(Debug, Clone)]
pub struct LinearOperator {
    domain: Arc<QuasispinBasis>,
    codomain: Arc<QuasispinBasis>,
    mat: CsMat,
}

impl LinearOperator {
    pub fn new(domain: &Arc<QuasispinBasis>, codomain: &Arc<QuasispinBasis>, mat: CsMat) -> Self {
        assert_eq!(mat.ncols(), domain.dim());
        assert_eq!(mat.nrows(), codomain.dim());
        LinearOperator { domain: Arc::clone(domain), codomain: Arc::clone(codomain), mat }
    }

    pub fn square(basis: &Arc<QuasispinBasis>, mat: CsMat) -> Self {
        Self::new(basis, basis, mat)
    }

    pub fn identity(basis: &Arc<QuasispinBasis>) -> Self {
        Self::square(basis, CsMat::identity(basis.dim()))
    }

    pub fn zero_on(basis: &Arc<QuasispinBasis>) -> Self {
        Self::square(basis, CsMat::zeros(basis.dim(), basis.dim()))
    }

    pub fn domain(&self) -> &Arc<QuasispinBasis> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<QuasispinBasis> {
        &self.codomain
    }

    pub fn matrix(&self) -> &CsMat {
        &self.mat
    }

    pub fn is_square(&self) -> bool {
        self.domain.same_space(&self.codomain)
    }

    fn check_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if !self.domain.same_space(&other.domain) || !self.codomain.same_space(&other.codomain) {
            return Err(Error::BasisMismatch(format!("{what} over different bases")));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "operator sum")?;
        Ok(LinearOperator {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&self.codomain),
            mat: self.mat.add(&other.mat),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "operator difference")?;
        Ok(LinearOperator {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&self.codomain),
            mat: self.mat.sub(&other.mat),
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        LinearOperator {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&self.codomain),
            mat: self.mat.scale(s),
        }
    }

    /// Operator composition `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if !self.domain.same_space(&other.codomain) {
            return Err(Error::BasisMismatch("composition domain/codomain mismatch".into()));
        }
        Ok(LinearOperator {
            domain: Arc::clone(&other.domain),
            codomain: Arc::clone(&self.codomain),
            mat: self.mat.matmul(&other.mat),
        })
    }

    pub fn adjoint(&self) -> Self {
        LinearOperator {
            domain: Arc::clone(&self.codomain),
            codomain: Arc::clone(&self.domain),
            mat: self.mat.adjoint(),
        }
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if !self.domain.same_space(&v.basis) {
            return Err(Error::BasisMismatch("operator applied to state over another basis".into()));
        }
        Ok(StateVector { basis: Arc::clone(&self.codomain), amp: self.mat.matvec(&v.amp) })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.mat.hermiticity_defect()
    }

    /// `‖[A,B]‖_F / (‖A‖_F ‖B‖_F)`, scheme-size independent.
    pub fn relative_commutator_norm(&self, other: &Self) -> Result<f64> {
        let num = self.commutator(other)?.frobenius_norm();
        let den = self.frobenius_norm() * other.frobenius_norm();
        Ok(if den == 0.0 { num } else { num / den })
    }

    /// Rayleigh quotient `⟨v|A|v⟩ / ⟨v|v⟩`.
    pub fn rayleigh(&self, v: &StateVector) -> Result<Complex64> {
        let av = self.apply(v)?;
        Ok(v.dot(&av) / v.dot(v))
    }

    /// Relative eigen-residual `‖A v − λ v‖ / ‖v‖`.
    pub fn eigen_residual(&self, v: &StateVector, lambda: Complex64) -> Result<f64> {
        let av = self.apply(v)?;
        Ok(av.sub(&v.scale(lambda)).norm() / v.norm())
    }

    /// Restrict a number-conserving operator on the unrestricted basis to one
    /// pair sector. Fails if the operator leaks outside the sector.
    pub fn restrict_to_sector(&self, n: u32) -> Result<LinearOperator> {
        let (block, sector_basis, leak) = self.sector_block_impl(n, n)?;
        if leak > 1e-12 {
            return Err(Error::Verification(format!(
                "operator is not block-diagonal over sector {n}: leakage {leak:.3e}"
            )));
        }
        Ok(LinearOperator { domain: Arc::clone(&sector_basis.0), codomain: sector_basis.1, mat: block })
    }

    /// Extract the block mapping pair sector `from` into pair sector `to`.
    /// Fails if the operator has weight outside the target sector.
    pub fn sector_block(&self, from: u32, to: u32) -> Result<LinearOperator> {
        let (block, bases, leak) = self.sector_block_impl(from, to)?;
        if leak > 1e-12 {
            return Err(Error::Verification(format!(
                "operator maps sector {from} outside sector {to}: leakage {leak:.3e}"
            )));
        }
        Ok(LinearOperator { domain: Arc::clone(&bases.0), codomain: bases.1, mat: block })
    }

    fn sector_block_impl(
        &self,
        from: u32,
        to: u32,
    ) -> Result<(CsMat, (Arc<QuasispinBasis>, Arc<QuasispinBasis>), f64)> {
        if !self.is_square() || self.domain.sector().is_some() {
            return Err(Error::BasisKind(
                "sector extraction needs a square operator on the unrestricted basis".into(),
            ));
        }
        let rows = self.domain.sector_indices(to);
        let cols = self.domain.sector_indices(from);
        let (block, leak) = self.mat.submatrix(&rows, &cols);
        let dom = QuasispinBasis::build(self.domain.scheme(), Some(from))?;
        let cod = QuasispinBasis::build(self.domain.scheme(), Some(to))?;
        debug_assert_eq!(dom.dim(), cols.len());
        debug_assert_eq!(cod.dim(), rows.len());
        Ok((block, (dom, cod), leak))
    }

    /// Embed a state over a sector basis into the unrestricted basis.
    pub fn promote_state(unrestricted: &Arc<QuasispinBasis>, v: &StateVector) -> Result<StateVector> {
        if unrestricted.sector().is_some() {
            return Err(Error::BasisKind("promotion target must be unrestricted".into()));
        }
        let mut out = StateVector::zero(unrestricted);
        for (i, &a) in v.amp.iter().enumerate() {
            let occ = v.basis.occupation(i);
            let k = unrestricted
                .index_of(occ)
                .ok_or_else(|| Error::BasisMismatch("sector state not found in full basis".into()))?;
            out.amp[k] = a;
        }
        Ok(out)
    }
}

/// The su(2) ladder matrix element `⟨N+1|S⁺|N⟩ = √((Ω−N)(N+1))` for the
/// spin-`Ω/2` irrep labelled by pair count.
fn raise_amp(omega: u32, n: u8) -> f64 {
    ((omega as f64 - n as f64) * (n as f64 + 1.0)).sqrt()
}

/// Quasispin generator triple for one level.
pub struct LevelOps {
    pub raise: LinearOperator,
    pub lower: LinearOperator,
    pub weight: LinearOperator,
}

/// Realize `(S_j⁺, S_j⁻, S_j⁰)` for every level as square operators on the
/// unrestricted basis. Sector bases carry rectangular ladder blocks instead;
/// see [`sector_ladder`].
pub fn quasispin_generators(basis: &Arc<QuasispinBasis>) -> Result<Vec<LevelOps>> {
    if basis.sector().is_some() {
        return Err(Error::BasisKind(
            "square generators need the unrestricted basis; use sector_ladder for sector blocks".into(),
        ));
    }
    let scheme = basis.scheme();
    let mut out = Vec::with_capacity(scheme.n_levels());
    for j in 0..scheme.n_levels() {
        let omega = scheme.omega(j);
        let mut raise = Vec::new();
        let mut weight = Vec::new();
        for i in 0..basis.dim() {
            let occ = basis.occupation(i);
            weight.push((i, i, Complex64::new(basis.weight(i, j), 0.0)));
            if (occ[j] as u32) < omega {
                let mut target = occ.to_vec();
                target[j] += 1;
                let t = basis.index_of(&target).expect("raised state in unrestricted basis");
                raise.push((t, i, Complex64::new(raise_amp(omega, occ[j]), 0.0)));
            }
        }
        let raise = LinearOperator::square(basis, CsMat::from_triplets(basis.dim(), basis.dim(), raise));
        let lower = raise.adjoint();
        let weight =
            LinearOperator::square(basis, CsMat::from_triplets(basis.dim(), basis.dim(), weight));
        out.push(LevelOps { raise, lower, weight });
    }
    Ok(out)
}

/// Ladder direction for sector-to-sector blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Raise,
    Lower,
}

/// The block of `S_j^±` mapping a fixed-`N` sector basis into the `N±1`
/// sector basis.
pub fn sector_ladder(basis: &Arc<QuasispinBasis>, j: usize, dir: Ladder) -> Result<LinearOperator> {
    let n = basis
        .sector()
        .ok_or_else(|| Error::BasisKind("sector_ladder needs a sector-restricted basis".into()))?;
    let scheme = basis.scheme();
    let max = scheme.pair_capacity();
    let target = match dir {
        Ladder::Raise => {
            if n == max {
                return Err(Error::SectorOutOfRange { sector: n + 1, max });
            }
            n + 1
        }
        Ladder::Lower => {
            if n == 0 {
                return Err(Error::SectorOutOfRange { sector: 0, max });
            }
            n - 1
        }
    };
    let codomain = QuasispinBasis::build(scheme, Some(target))?;
    let omega = scheme.omega(j);
    let mut triplets = Vec::new();
    for i in 0..basis.dim() {
        let occ = basis.occupation(i);
        match dir {
            Ladder::Raise => {
                if (occ[j] as u32) < omega {
                    let mut t = occ.to_vec();
                    t[j] += 1;
                    let ti = codomain.index_of(&t).expect("target in N+1 sector");
                    triplets.push((ti, i, Complex64::new(raise_amp(omega, occ[j]), 0.0)));
                }
            }
            Ladder::Lower => {
                if occ[j] > 0 {
                    let mut t = occ.to_vec();
                    t[j] -= 1;
                    let ti = codomain.index_of(&t).expect("target in N-1 sector");
                    triplets.push((ti, i, Complex64::new(raise_amp(omega, occ[j] - 1), 0.0)));
                }
            }
        }
    }
    let mat = CsMat::from_triplets(codomain.dim(), basis.dim(), triplets);
    Ok(LinearOperator::new(basis, &codomain, mat))
}

/// Total pair number operator `N̂ = Σ_j (S_j⁰ + Ω_j/2)`; diagonal on any basis.
pub fn pair_number_operator(basis: &Arc<QuasispinBasis>) -> LinearOperator {
    let triplets = (0..basis.dim()).map(|i| (i, i, Complex64::new(basis.pair_count(i) as f64, 0.0)));
    LinearOperator::square(basis, CsMat::from_triplets(basis.dim(), basis.dim(), triplets))
}

/// The empty shell `|0⟩`: every level at lowest weight. Requires the
/// unrestricted basis or the `N = 0` sector.
pub fn vacuum_state(basis: &Arc<QuasispinBasis>) -> Result<StateVector> {
    if let Some(s) = basis.sector() {
        if s != 0 {
            return Err(Error::SectorOutOfRange { sector: s, max: 0 });
        }
    }
    let occ = vec![0u8; basis.scheme().n_levels()];
    let i = basis.index_of(&occ).expect("vacuum occupation present");
    Ok(StateVector::basis_state(basis, i))
}

/// The fully occupied shell `|0̄⟩`: every level at highest weight. Requires
/// the unrestricted basis or the `N = N_max` sector.
pub fn full_shell_state(basis: &Arc<QuasispinBasis>) -> Result<StateVector> {
    let max = basis.scheme().pair_capacity();
    if let Some(s) = basis.sector() {
        if s != max {
            return Err(Error::SectorOutOfRange { sector: s, max });
        }
    }
    let occ: Vec<u8> = basis.scheme().levels().iter().map(|lv| lv.omega as u8).collect();
    let i = basis.index_of(&occ).expect("full-shell occupation present");
    Ok(StateVector::basis_state(basis, i))
}
