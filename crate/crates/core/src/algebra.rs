//! Commutator calculus and residual certificates for the defining identities.
//!
//! Residuals are max-abs entry norms. On a truncated (bosonic) basis only the
//! rows and columns of interior shells are compared: a word of ladder
//! operators that climbs `m` shells above its input is exact as long as the
//! input sits `m` shells below the cutoff. The triple relations climb two
//! shells, the Heisenberg equation one.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fock::{self, FockBasis, HamiltonianMode, Ladder};
use crate::{Error, Result, SectorParams, SparseOperator};

pub const TRIPLE_MARGIN: usize = 2;
pub const HEISENBERG_MARGIN: usize = 1;

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub identity: String,
    /// Largest residual over every checked instance.
    pub residual: f64,
    pub mean_residual: f64,
    pub tolerance: f64,
    /// `residual <= tolerance`.
    pub pass: bool,
    /// Which states entered the comparison.
    pub mask: String,
    pub params: Option<SectorParams>,
    pub cutoff: Option<usize>,
    /// Number of instances (operator identities, states, ...) checked.
    pub checks: usize,
}

impl VerificationReport {
    pub fn from_residuals(
        identity: impl Into<String>,
        residuals: &[f64],
        tolerance: f64,
        mask: impl Into<String>,
    ) -> Self {
        let residual = residuals.iter().fold(0.0, |m: f64, &r| {
            if r.is_nan() || m.is_nan() {
                f64::NAN
            } else {
                m.max(r)
            }
        });
        let mean_residual = if residuals.is_empty() {
            0.0
        } else {
            residuals.iter().sum::<f64>() / residuals.len() as f64
        };
        VerificationReport {
            identity: identity.into(),
            residual,
            mean_residual,
            tolerance,
            pass: residual <= tolerance,
            mask: mask.into(),
            params: None,
            cutoff: None,
            checks: residuals.len(),
        }
    }

    pub fn with_params(mut self, params: &SectorParams, cutoff: Option<usize>) -> Self {
        self.params = Some(params.clone());
        self.cutoff = cutoff;
        self
    }

    pub(crate) fn for_basis(self, basis: &FockBasis) -> Self {
        self.with_params(basis.params(), Some(basis.cutoff()))
    }
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &SparseOperator, b: &SparseOperator) -> Result<SparseOperator> {
    a.checked_mul(b)?.checked_sub(&b.checked_mul(a)?)
}

/// `[X, Y, Z] = [[X, Y], Z]`.
pub fn triple_bracket(
    x: &SparseOperator,
    y: &SparseOperator,
    z: &SparseOperator,
) -> Result<SparseOperator> {
    commutator(&commutator(x, y)?, z)
}

/// `(raise, lower)` matrices for every mode.
pub fn ladder_set(basis: &FockBasis) -> Result<(Vec<SparseOperator>, Vec<SparseOperator>)> {
    let r = basis.params().modes();
    let raise = (0..r)
        .map(|i| fock::ladder_matrix(basis, i, Ladder::Raise))
        .collect::<Result<Vec<_>>>()?;
    let lower = (0..r)
        .map(|i| fock::ladder_matrix(basis, i, Ladder::Lower))
        .collect::<Result<Vec<_>>>()?;
    Ok((raise, lower))
}

/// Triple relations and mutual commutation, masked with margin 2 on
/// truncated bases.
pub fn verify_triple_relations(basis: &FockBasis, tol: f64) -> Result<VerificationReport> {
    basis.require_cutoff(TRIPLE_MARGIN + 1, "triple relations with interior margin 2")?;
    verify_triple_relations_with_margin(basis, tol, TRIPLE_MARGIN)
}

/// As [`verify_triple_relations`] with an explicit margin; `0` compares every
/// entry, truncation artefacts included.
pub fn verify_triple_relations_with_margin(
    basis: &FockBasis,
    tol: f64,
    margin: usize,
) -> Result<VerificationReport> {
    let (raise, lower) = ladder_set(basis)?;
    verify_triple_relations_for(basis, &raise, &lower, tol, margin)
}

/// Checks, for all `i, j, k`,
///
/// ```text
/// [[a_i^+, a_j^-], a_k^+] + s d_jk a_i^+ + s d_ij a_k^+ = 0
/// [[a_i^+, a_j^-], a_k^-] - s d_ik a_j^- - s d_ij a_k^- = 0
/// [a_i^+, a_j^+] = [a_i^-, a_j^-] = 0
/// ```
///
/// on the supplied operators, which need not come from [`ladder_set`].
pub fn verify_triple_relations_for(
    basis: &FockBasis,
    raise: &[SparseOperator],
    lower: &[SparseOperator],
    tol: f64,
    margin: usize,
) -> Result<VerificationReport> {
    let r = basis.params().modes();
    if raise.len() != r || lower.len() != r {
        return Err(Error::Mismatch(format!(
            "expected {r} raise and lower operators, got {} and {}",
            raise.len(),
            lower.len()
        )));
    }
    basis.require_cutoff(margin + 1, "masked triple relations")?;
    let mask = basis.interior_mask(margin);
    let s = basis.params().sign() as f64;
    let delta = |a: usize, b: usize| if a == b { s } else { 0.0 };

    let mut residuals = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let inner = commutator(&raise[i], &lower[j])?;
            for k in 0..r {
                let eq_raise = commutator(&inner, &raise[k])?
                    .checked_add_scaled(&raise[i], delta(j, k))?
                    .checked_add_scaled(&raise[k], delta(i, j))?;
                residuals.push(eq_raise.max_abs_masked(&mask));

                let eq_lower = commutator(&inner, &lower[k])?
                    .checked_add_scaled(&lower[j], -delta(i, k))?
                    .checked_add_scaled(&lower[k], -delta(i, j))?;
                residuals.push(eq_lower.max_abs_masked(&mask));
            }
        }
    }
    for i in 0..r {
        for j in (i + 1)..r {
            residuals.push(commutator(&raise[i], &raise[j])?.max_abs_masked(&mask));
            residuals.push(commutator(&lower[i], &lower[j])?.max_abs_masked(&mask));
        }
    }
    Ok(VerificationReport::from_residuals(
        "triple relations [[a+,a-],a±] and mutual commutation",
        &residuals,
        tol,
        basis.mask_description(margin),
    )
    .for_basis(basis))
}

/// `[H, a_i^±] = ± e_i a_i^±` with the Hamiltonian built from ladder
/// commutators.
pub fn verify_heisenberg(basis: &FockBasis, tol: f64) -> Result<VerificationReport> {
    verify_heisenberg_with_energies(basis, basis.params().energies(), tol)
}

/// Energies may be any finite reals here, zero included.
pub fn verify_heisenberg_with_energies(
    basis: &FockBasis,
    energies: &[f64],
    tol: f64,
) -> Result<VerificationReport> {
    basis.require_cutoff(
        HEISENBERG_MARGIN + 1,
        "Heisenberg equation with interior margin 1",
    )?;
    let h = fock::hamiltonian_matrix_with_energies(basis, energies, HamiltonianMode::Constructed)?;
    let (raise, lower) = ladder_set(basis)?;
    let mask = basis.interior_mask(HEISENBERG_MARGIN);
    let mut residuals = Vec::new();
    for (i, &e) in energies.iter().enumerate() {
        residuals.push(
            commutator(&h, &raise[i])?
                .checked_add_scaled(&raise[i], -e)?
                .max_abs_masked(&mask),
        );
        residuals.push(
            commutator(&h, &lower[i])?
                .checked_add_scaled(&lower[i], e)?
                .max_abs_masked(&mask),
        );
    }
    Ok(VerificationReport::from_residuals(
        "Heisenberg equation [H,a±] = ±e a±",
        &residuals,
        tol,
        basis.mask_description(HEISENBERG_MARGIN),
    )
    .for_basis(basis))
}

fn random_combination(
    generators: &[SparseOperator],
    rng: &mut ChaCha8Rng,
) -> Result<SparseOperator> {
    let mut acc = SparseOperator::zeros(generators[0].tag(), generators[0].dim());
    for g in generators {
        let c: f64 = rng.random_range(-1.0..=1.0);
        acc = acc.checked_add_scaled(g, c)?;
    }
    Ok(acc)
}

/// Lie triple system axioms on random real combinations of `generators`:
///
/// ```text
/// [x,x,x] = 0
/// [x,y,z] + [y,z,x] + [z,x,y] = 0
/// [x,y,[u,v,w]] = [[x,y,u],v,w] + [u,[x,y,v],w] + [u,v,[x,y,w]]
/// ```
///
/// Coefficients are uniform in `[-1, 1]` from ChaCha8 seeded with `seed`.
pub fn verify_lie_triple_axioms(
    generators: &[SparseOperator],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    if generators.is_empty() {
        return Err(Error::InvalidInput(
            "Lie triple axioms need at least one generator".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut residuals = Vec::with_capacity(3 * samples);
    for _ in 0..samples {
        let mut draw = || random_combination(generators, &mut rng);
        let (x, y, z, u, v, w) = (draw()?, draw()?, draw()?, draw()?, draw()?, draw()?);

        residuals.push(triple_bracket(&x, &x, &x)?.max_abs());

        let cyclic = triple_bracket(&x, &y, &z)?
            .checked_add(&triple_bracket(&y, &z, &x)?)?
            .checked_add(&triple_bracket(&z, &x, &y)?)?;
        residuals.push(cyclic.max_abs());

        let lhs = triple_bracket(&x, &y, &triple_bracket(&u, &v, &w)?)?;
        let rhs = triple_bracket(&triple_bracket(&x, &y, &u)?, &v, &w)?
            .checked_add(&triple_bracket(&u, &triple_bracket(&x, &y, &v)?, &w)?)?
            .checked_add(&triple_bracket(&u, &v, &triple_bracket(&x, &y, &w)?)?)?;
        residuals.push(lhs.checked_sub(&rhs)?.max_abs());
    }
    Ok(VerificationReport::from_residuals(
        "Lie triple system axioms",
        &residuals,
        tol,
        format!("all entries; {samples} samples, seed {seed}"),
    ))
}
