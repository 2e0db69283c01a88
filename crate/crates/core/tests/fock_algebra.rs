use arstat_core::algebra::{
    commutator, ladder_set, triple_bracket, verify_heisenberg, verify_lie_triple_axioms,
    verify_triple_relations, verify_triple_relations_for, verify_triple_relations_with_margin,
};
use arstat_core::fock::{
    bose_limit_constant, bose_limit_deviation, enumerate_basis, hamiltonian_matrix, ladder_matrix,
    HamiltonianMode, Ladder,
};
use arstat_core::{Sector, SectorParams};
use proptest::prelude::*;

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, j| acc * (n + 1 - j) / j)
}

fn fermi(r: usize, k: u32) -> SectorParams {
    SectorParams::unit_energies(r, Sector::Fermionic, k).unwrap()
}

fn bose(r: usize, k: u32) -> SectorParams {
    SectorParams::unit_energies(r, Sector::Bosonic, k).unwrap()
}

#[test]
fn fermionic_dimension_formula() {
    for r in 1..=4usize {
        for k in 1..=8u32 {
            let basis = enumerate_basis(&fermi(r, k), 0).unwrap();
            assert_eq!(
                basis.len() as u64,
                binomial(u64::from(k) - 1 + r as u64, r as u64)
            );
            for (idx, n) in basis.states().iter().enumerate() {
                assert_eq!(basis.index_of(n), Some(idx));
            }
            assert!(basis.states().windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn bosonic_dimension_formula() {
    for r in 1..=3usize {
        for cutoff in 0..=6usize {
            let basis = enumerate_basis(&bose(r, 2), cutoff).unwrap();
            assert_eq!(basis.len() as u64, binomial((cutoff + r) as u64, r as u64));
        }
    }
}

#[test]
fn pauli_bound_kills_top_shell() {
    for (r, k) in [(1usize, 3u32), (2, 4), (3, 3)] {
        let basis = enumerate_basis(&fermi(r, k), 0).unwrap();
        for i in 0..r {
            let raise = ladder_matrix(&basis, i, Ladder::Raise).unwrap();
            for (idx, n) in basis.states().iter().enumerate() {
                if n.total() == k as usize - 1 {
                    assert!(raise.column(idx).iter().all(|&v| v == 0.0));
                }
            }
        }
    }
}

#[test]
fn fermionic_algebra_is_exact() {
    for r in 1..=3usize {
        for k in 1..=6u32 {
            let basis = enumerate_basis(&fermi(r, k), 0).unwrap();
            let rep = verify_triple_relations_with_margin(&basis, 1e-12, 0).unwrap();
            assert!(rep.pass, "r={r} k={k}: {}", rep.residual);
            if k >= 2 {
                let rep = verify_heisenberg(&basis, 1e-12).unwrap();
                assert!(rep.pass, "r={r} k={k}: {}", rep.residual);
            }
        }
    }
}

#[test]
fn bosonic_masking_is_necessary() {
    for r in 1..=2usize {
        for k in 2..=4u32 {
            let basis = enumerate_basis(&bose(r, k), 8).unwrap();
            assert!(verify_triple_relations(&basis, 1e-10).unwrap().pass);
            assert!(verify_heisenberg(&basis, 1e-10).unwrap().pass);
            assert!(
                !verify_triple_relations_with_margin(&basis, 1e-10, 0)
                    .unwrap()
                    .pass
            );
        }
    }
}

#[test]
fn mis_scaled_generators_fail() {
    let basis = enumerate_basis(&fermi(2, 3), 0).unwrap();
    let (raise, lower) = ladder_set(&basis).unwrap();
    let scaled: Vec<_> = raise.iter().map(|m| m.scaled(2.0)).collect();
    let rep = verify_triple_relations_for(&basis, &scaled, &lower, 1e-10, 0).unwrap();
    assert!(!rep.pass);
}

#[test]
fn single_entry_perturbations_are_detected() {
    let basis = enumerate_basis(&fermi(2, 3), 0).unwrap();
    let (raise, lower) = ladder_set(&basis).unwrap();
    for (mode, matrix) in raise.iter().enumerate() {
        for ((row, col), value) in matrix.iter() {
            let mut bumped = raise.clone();
            bumped[mode].set(row, col, value + 1e-3);
            let rep = verify_triple_relations_for(&basis, &bumped, &lower, 1e-10, 0).unwrap();
            assert!(
                rep.residual >= 1e-3 * 0.999,
                "{mode} {row} {col}: {}",
                rep.residual
            );
        }
    }
}

#[test]
fn lie_triple_axioms_hold() {
    let basis = enumerate_basis(&fermi(2, 3), 0).unwrap();
    let (raise, lower) = ladder_set(&basis).unwrap();
    let gens: Vec<_> = raise.into_iter().chain(lower).collect();
    let rep = verify_lie_triple_axioms(&gens, 25, 42, 1e-10).unwrap();
    assert!(rep.pass, "{}", rep.residual);
    let again = verify_lie_triple_axioms(&gens, 25, 42, 1e-10).unwrap();
    assert_eq!(rep, again);
}

#[test]
fn spectrum_agrees_on_interior() {
    let p = SectorParams::new(2, Sector::Bosonic, 3, vec![1.0, 2.0]).unwrap();
    let basis = enumerate_basis(&p, 6).unwrap();
    let diag = hamiltonian_matrix(&basis, HamiltonianMode::Diagonal).unwrap();
    let built = hamiltonian_matrix(&basis, HamiltonianMode::Constructed).unwrap();
    let mask = basis.interior_mask(1);
    assert!(diag.checked_sub(&built).unwrap().max_abs_masked(&mask) < 1e-12);
}

#[test]
fn bose_limit_scaling() {
    for sector in [Sector::Bosonic, Sector::Fermionic] {
        let ks = [10, 100, 1000, 10_000];
        let pts = bose_limit_deviation(2, sector, &ks, 4).unwrap();
        assert!(pts.windows(2).all(|w| w[1].deviation < w[0].deviation));
        assert!(pts[3].deviation < 1e-3);
        let c = bose_limit_constant(&pts, 4);
        for p in &pts {
            assert!(p.deviation <= c * 5.0 / f64::from(p.k) * (1.0 + 1e-12));
        }
    }
}

fn params_strategy() -> impl Strategy<Value = (SectorParams, usize)> {
    prop_oneof![
        (1usize..=3, 1u32..=5).prop_map(|(r, k)| (fermi(r, k), 0)),
        (1usize..=2, 2u32..=4, 3usize..=6).prop_map(|(r, k, c)| (bose(r, k), c)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn raise_is_transpose_of_lower((p, cutoff) in params_strategy(), mode in 0usize..3) {
        let basis = enumerate_basis(&p, cutoff).unwrap();
        let i = mode % p.modes();
        let raise = ladder_matrix(&basis, i, Ladder::Raise).unwrap();
        let lower = ladder_matrix(&basis, i, Ladder::Lower).unwrap();
        prop_assert_eq!(raise, lower.transpose());
    }

    #[test]
    fn same_kind_ladders_commute((p, cutoff) in params_strategy()) {
        let basis = enumerate_basis(&p, cutoff).unwrap();
        let (raise, lower) = ladder_set(&basis).unwrap();
        let mask = basis.interior_mask(if basis.is_truncated() { 2 } else { 0 });
        for i in 0..p.modes() {
            for j in 0..p.modes() {
                prop_assert!(commutator(&raise[i], &raise[j]).unwrap().max_abs_masked(&mask) < 1e-12);
                prop_assert!(commutator(&lower[i], &lower[j]).unwrap().max_abs_masked(&mask) < 1e-12);
            }
        }
    }

    #[test]
    fn bracket_is_antisymmetric((p, cutoff) in params_strategy(), a in 0usize..3, b in 0usize..3) {
        let basis = enumerate_basis(&p, cutoff).unwrap();
        let (raise, lower) = ladder_set(&basis).unwrap();
        let x = &raise[a % p.modes()];
        let y = &lower[b % p.modes()];
        let sum = commutator(x, y).unwrap().checked_add(&commutator(y, x).unwrap()).unwrap();
        prop_assert_eq!(sum.nnz(), 0);
        prop_assert_eq!(triple_bracket(x, x, y).unwrap().nnz(), 0);
    }
}
