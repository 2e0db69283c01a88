use arstat_core::coherent::{
    coherent_amplitudes, eigenstate_residuals, overlap, overlap_kernel, CoherentFamily,
    CoherentPoint, Truncation,
};
use arstat_core::{Sector, SectorParams};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng, r: usize, radius: f64) -> Vec<Complex64> {
    (0..r)
        .map(|_| {
            Complex64::from_polar(
                radius * rng.random::<f64>(),
                std::f64::consts::TAU * rng.random::<f64>(),
            )
        })
        .collect()
}

#[test]
fn projective_states_are_normalized() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for r in 1..=3usize {
        for k in 1..=8u32 {
            let p = SectorParams::unit_energies(r, Sector::Fermionic, k).unwrap();
            for _ in 0..20 {
                let coords = random_point(&mut rng, r, 2.0);
                let pt = CoherentPoint::new(CoherentFamily::ProjectiveCP, coords).unwrap();
                let state = coherent_amplitudes(&p, &pt, Truncation::Fixed(0)).unwrap();
                assert!((state.norm_sq() - 1.0).abs() < 1e-12, "r={r} k={k}");
            }
        }
    }
}

#[test]
fn truncated_kp_overlaps_match_kernel() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for r in 1..=2usize {
        for k in 2..=4u32 {
            let p = SectorParams::unit_energies(r, Sector::Bosonic, k).unwrap();
            for _ in 0..5 {
                let a = CoherentPoint::new(
                    CoherentFamily::KlauderPerelomov,
                    random_point(&mut rng, r, 0.8_f64.sqrt() / (r as f64).sqrt()),
                )
                .unwrap();
                let b = CoherentPoint::new(
                    CoherentFamily::KlauderPerelomov,
                    random_point(&mut rng, r, 0.8_f64.sqrt() / (r as f64).sqrt()),
                )
                .unwrap();
                let trunc = Truncation::Auto { tail_tol: 1e-10 };
                let sa = coherent_amplitudes(&p, &a, trunc).unwrap();
                let cutoff = sa
                    .cutoff()
                    .max(coherent_amplitudes(&p, &b, trunc).unwrap().cutoff());
                let sa = coherent_amplitudes(&p, &a, Truncation::Fixed(cutoff)).unwrap();
                let sb = coherent_amplitudes(&p, &b, Truncation::Fixed(cutoff)).unwrap();
                let numeric = overlap(&sa, &sb).unwrap();
                let exact = overlap_kernel(&p, &a, &b).unwrap();
                assert!(
                    (numeric - exact).norm() < 1e-8,
                    "r={r} k={k}: {numeric} vs {exact}"
                );
                assert!((overlap(&sa, &sa).unwrap().re - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn gk_boundary_residual_shrinks_with_cutoff() {
    let p = SectorParams::unit_energies(2, Sector::Bosonic, 3).unwrap();
    let pt = CoherentPoint::new(
        CoherentFamily::GazeauKlauder,
        vec![Complex64::new(1.2, 0.3), Complex64::new(-0.5, 0.9)],
    )
    .unwrap();
    let mut last = f64::INFINITY;
    for cutoff in [4usize, 8, 16, 32] {
        let state = coherent_amplitudes(&p, &pt, Truncation::Fixed(cutoff)).unwrap();
        let worst = eigenstate_residuals(&state)
            .unwrap()
            .iter()
            .map(|r| r.boundary)
            .fold(0.0, f64::max);
        assert!(worst < last, "cutoff {cutoff}: {worst} !< {last}");
        last = worst;
    }
    assert!(last < 1e-12);
}

#[test]
fn gk_kernel_matches_truncated_sum() {
    let p = SectorParams::unit_energies(2, Sector::Bosonic, 3).unwrap();
    let a = CoherentPoint::new(
        CoherentFamily::GazeauKlauder,
        vec![Complex64::new(1.0, 0.5), Complex64::new(0.2, -0.7)],
    )
    .unwrap();
    let b = CoherentPoint::new(
        CoherentFamily::GazeauKlauder,
        vec![Complex64::new(-0.4, 1.1), Complex64::new(0.9, 0.0)],
    )
    .unwrap();
    let sa = coherent_amplitudes(&p, &a, Truncation::Fixed(32)).unwrap();
    let sb = coherent_amplitudes(&p, &b, Truncation::Fixed(32)).unwrap();
    let diff = overlap(&sa, &sb).unwrap() - overlap_kernel(&p, &a, &b).unwrap();
    assert!(diff.norm() < 1e-12);
}

fn coords(r: usize, radius: f64) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((0.0..radius, 0.0..std::f64::consts::TAU), r).prop_map(|v| {
        v.into_iter()
            .map(|(m, a)| Complex64::from_polar(m, a))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn overlap_is_conjugate_symmetric(a in coords(2, 0.6), b in coords(2, 0.6), k in 2u32..5) {
        for (family, sector) in [
            (CoherentFamily::GazeauKlauder, Sector::Bosonic),
            (CoherentFamily::KlauderPerelomov, Sector::Bosonic),
            (CoherentFamily::ProjectiveCP, Sector::Fermionic),
        ] {
            let p = SectorParams::unit_energies(2, sector, k).unwrap();
            let sa = coherent_amplitudes(&p, &CoherentPoint::new(family, a.clone()).unwrap(), Truncation::Fixed(10)).unwrap();
            let sb = coherent_amplitudes(&p, &CoherentPoint::new(family, b.clone()).unwrap(), Truncation::Fixed(10)).unwrap();
            prop_assert_eq!(overlap(&sa, &sb).unwrap(), overlap(&sb, &sa).unwrap().conj());
        }
    }

    #[test]
    fn projective_norm_identity(z in coords(3, 2.0), k in 1u32..=8) {
        let p = SectorParams::unit_energies(3, Sector::Fermionic, k).unwrap();
        let pt = CoherentPoint::new(CoherentFamily::ProjectiveCP, z).unwrap();
        let state = coherent_amplitudes(&p, &pt, Truncation::Fixed(0)).unwrap();
        prop_assert!((state.raw_norm_sq - 1.0).abs() < 1e-12);
    }
}
