//! Property tests for the structural invariants: basis enumeration counts,
//! the quasispin algebra at every level, number-operator sector shifts, and
//! canonicalization of Bethe solutions.

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use gaudin_pair::bethe::{canonicalize, same_solution, BetheFamily, BetheSolution};
use gaudin_pair::hilbert::{
    pair_number_operator, quasispin_generators, Level, LevelScheme, PairingMode, QuasispinBasis,
};

fn arb_general_scheme() -> impl Strategy<Value = Arc<LevelScheme>> {
    (
        proptest::collection::vec((1u32..=4, -1.0f64..2.0, 0.05f64..1.0), 1..=5),
        0.0f64..2.0,
    )
        .prop_map(|(raw, g)| {
            let levels = raw
                .into_iter()
                .map(|(omega, epsilon, c)| Level { omega, epsilon, c })
                .collect();
            Arc::new(LevelScheme::new(levels, g, PairingMode::General).unwrap())
        })
}

/// Degenerate schemes with constructed, well-separated c² values.
fn arb_degenerate_scheme() -> impl Strategy<Value = Arc<LevelScheme>> {
    (
        proptest::collection::vec((1u32..=3, 0.05f64..0.6), 2..=4),
        0.1f64..2.0,
        -0.5f64..0.5,
    )
        .prop_map(|(raw, g, eps)| {
            let mut c2 = 0.0;
            let levels = raw
                .into_iter()
                .map(|(omega, gap)| {
                    c2 += gap;
                    Level { omega, epsilon: eps, c: c2.sqrt() }
                })
                .collect();
            Arc::new(LevelScheme::new(levels, g, PairingMode::Degenerate).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Unrestricted dimension is the product rule and the sector dimensions
    /// partition it; enumeration is a bijection.
    #[test]
    fn basis_dimensions_and_bijection(scheme in arb_general_scheme()) {
        let basis = QuasispinBasis::build(&scheme, None).unwrap();
        let want: usize = (0..scheme.n_levels()).map(|j| scheme.omega(j) as usize + 1).product();
        prop_assert_eq!(basis.dim(), want);

        let mut total = 0usize;
        for n in 0..=scheme.pair_capacity() {
            let sector = QuasispinBasis::build(&scheme, Some(n)).unwrap();
            total += sector.dim();
            for i in 0..sector.dim() {
                prop_assert_eq!(sector.pair_count(i), n);
            }
        }
        prop_assert_eq!(total, basis.dim());

        for i in 0..basis.dim() {
            prop_assert_eq!(basis.index_of(basis.occupation(i)), Some(i));
        }
    }

    /// `[S_j⁺,S_j⁻] = 2S_j⁰` and `[S_j⁰,S_j^±] = ±S_j^±` at every level,
    /// with structurally vanishing cross-level commutators.
    #[test]
    fn quasispin_algebra_holds(scheme in arb_general_scheme()) {
        let basis = QuasispinBasis::build(&scheme, None).unwrap();
        let gens = quasispin_generators(&basis).unwrap();
        for (j, g) in gens.iter().enumerate() {
            let pm = g.raise.commutator(&g.lower).unwrap();
            let want = g.weight.scale(Complex64::new(2.0, 0.0));
            prop_assert!(pm.sub(&want).unwrap().frobenius_norm() < 1e-12);

            let zp = g.weight.commutator(&g.raise).unwrap();
            prop_assert!(zp.sub(&g.raise).unwrap().frobenius_norm() < 1e-12);
            let zm = g.weight.commutator(&g.lower).unwrap();
            prop_assert!(zm.add(&g.lower).unwrap().frobenius_norm() < 1e-12);

            for (jp, gp) in gens.iter().enumerate() {
                if jp != j {
                    prop_assert_eq!(g.raise.commutator(&gp.lower).unwrap().matrix().nnz(), 0);
                    prop_assert_eq!(g.raise.commutator(&gp.weight).unwrap().matrix().nnz(), 0);
                }
            }
        }
    }

    /// `N̂` commutes with every `S_j⁰` and shifts ladders by one sector:
    /// `[N̂, S_j^±] = ±S_j^±`.
    #[test]
    fn number_operator_grading(scheme in arb_general_scheme()) {
        let basis = QuasispinBasis::build(&scheme, None).unwrap();
        let gens = quasispin_generators(&basis).unwrap();
        let nop = pair_number_operator(&basis);
        for g in &gens {
            prop_assert!(nop.commutator(&g.weight).unwrap().frobenius_norm() < 1e-14);
            let c = nop.commutator(&g.raise).unwrap();
            prop_assert!(c.sub(&g.raise).unwrap().frobenius_norm() < 1e-12);
        }
    }

    /// Canonical forms are permutation invariant and equality respects the
    /// separation tolerance.
    #[test]
    fn canonical_forms_permutation_invariant(
        roots in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..6),
        swap in any::<prop::sample::Index>(),
    ) {
        let roots: Vec<Complex64> = roots.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let mut shuffled = roots.clone();
        let i = swap.index(roots.len());
        shuffled.swap(0, i);
        let a = canonicalize(BetheSolution {
            family: BetheFamily::DegenerateGeneric,
            roots,
            residual: 0.0,
            converged: true,
        });
        let b = canonicalize(BetheSolution {
            family: BetheFamily::DegenerateGeneric,
            roots: shuffled,
            residual: 0.0,
            converged: true,
        });
        prop_assert!(same_solution(&a, &b, 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// The degenerate invariant family commutes and rebuilds the
    /// Hamiltonian on randomized schemes.
    #[test]
    fn degenerate_invariants_commute(scheme in arb_degenerate_scheme()) {
        use gaudin_pair::operators::OperatorSet;
        let basis = QuasispinBasis::build(&scheme, None).unwrap();
        let ops = OperatorSet::build(&basis).unwrap();
        for j in 0..ops.invariants.len() {
            for jp in (j + 1)..ops.invariants.len() {
                let norm = ops.invariants[j]
                    .relative_commutator_norm(&ops.invariants[jp])
                    .unwrap();
                prop_assert!(norm < 1e-10, "[P_{}, P_{}] = {}", j, jp, norm);
            }
            let h = ops.invariants[j].relative_commutator_norm(&ops.hamiltonian).unwrap();
            prop_assert!(h < 1e-10);
        }
    }

    /// Closed-form eigenvalues of assembled one-pair records agree with
    /// Rayleigh quotients.
    #[test]
    fn one_pair_formulas_match_rayleigh(scheme in arb_degenerate_scheme()) {
        use gaudin_pair::operators::OperatorSet;
        use gaudin_pair::spectrum::{assemble_record, StateClass};
        let basis = QuasispinBasis::build(&scheme, None).unwrap();
        let ops = OperatorSet::build(&basis).unwrap();
        let record = assemble_record(&ops, StateClass::TalmiZero, &[], 1).unwrap();
        for (inv, &e) in ops.invariants.iter().zip(&record.invariant_eigenvalues) {
            let rq = inv.rayleigh(&record.state).unwrap();
            prop_assert!((rq.re - e).abs() < 1e-8);
            prop_assert!(rq.im.abs() < 1e-10);
        }
    }
}
