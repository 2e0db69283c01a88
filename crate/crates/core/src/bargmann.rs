//! Analytic realizations of the Fock space on polynomials.
//!
//! A Fock vector `|n>` is sent to `C_n x^n` and the generators become
//! differential operators:
//!
//! | realization | `C_n^2`                                | `a_i^+`                         | `a_i^-`                                   |
//! |-------------|----------------------------------------|---------------------------------|-------------------------------------------|
//! | I (s = +1)  | `(k-1)! / (n_1!..n_r! (k-1+n)!)`       | `w_i`                           | `k d_i + w_i d_i^2 + d_i sum_{j!=i} w_j d_j` |
//! | II (s = +1) | `(k-1+n)! / (n_1!..n_r! (k-1)!)`       | `k z_i + z_i sum_j z_j d_j`     | `d_i`                                     |
//! | fermionic   | `(k-1)! / (n_1!..n_r! (k-1-n)!)`       | `(k-1) z_i - z_i sum_j z_j d_j` | `d_i`                                     |
//!
//! and `N_i = x_i d_i` in all three. The fermionic coefficient and creation
//! operator are the forms forced by the lowering recursion
//! `sqrt(n_i) C_n = sqrt(k - n) C_{n - e_i}`;
//! [`verify_realization_equivalence`] checks them against the matrices.

use alloc::format;
use alloc::vec::Vec;

use crate::algebra::VerificationReport;
use crate::exact::{factorial, factorial_product, ratio_to_f64};
use crate::fock::{self, FockBasis, Ladder};
use crate::{Error, MultiPoly, OccupationVector, Result, Sector, SectorParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RealizationKind {
    /// Creation operators act by multiplication; entire functions on `C^r`.
    BosonicI,
    /// Annihilation operators act by differentiation; unit ball in `C^r`.
    BosonicII,
    /// Polynomials of degree at most `k - 1` on `C^r`.
    Fermionic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Raise,
    Lower,
    Number,
}

impl RealizationKind {
    pub const ALL: [RealizationKind; 3] = [
        RealizationKind::BosonicI,
        RealizationKind::BosonicII,
        RealizationKind::Fermionic,
    ];

    pub fn sector(self) -> Sector {
        match self {
            RealizationKind::BosonicI | RealizationKind::BosonicII => Sector::Bosonic,
            RealizationKind::Fermionic => Sector::Fermionic,
        }
    }

    /// Conventional variable name used when rendering.
    pub fn variable(self) -> &'static str {
        match self {
            RealizationKind::BosonicI => "w",
            RealizationKind::BosonicII => "z",
            RealizationKind::Fermionic => "zeta",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RealizationKind::BosonicI => "I",
            RealizationKind::BosonicII => "II",
            RealizationKind::Fermionic => "fermionic",
        }
    }

    pub fn domain(self) -> &'static str {
        match self {
            RealizationKind::BosonicI | RealizationKind::Fermionic => "C^r",
            RealizationKind::BosonicII => "unit ball |z_1|^2 + ... + |z_r|^2 < 1",
        }
    }

    pub fn check(self, params: &SectorParams) -> Result<()> {
        if params.sector() != self.sector() {
            return Err(Error::IncompatibleSector(format!(
                "realization {} needs the {} sector, got {}",
                self.name(),
                self.sector(),
                params.sector()
            )));
        }
        Ok(())
    }
}

/// `C_n` from exact factorials with a single square root.
pub fn basis_coefficient(
    kind: RealizationKind,
    params: &SectorParams,
    n: &OccupationVector,
) -> Result<f64> {
    kind.check(params)?;
    params.check_state(n)?;
    let k = u64::from(params.k());
    let total = n.total() as u64;
    let occ = factorial_product(n.as_slice());
    let sq = match kind {
        RealizationKind::BosonicI => ratio_to_f64(factorial(k - 1), occ * factorial(k - 1 + total)),
        RealizationKind::BosonicII => {
            ratio_to_f64(factorial(k - 1 + total), occ * factorial(k - 1))
        }
        RealizationKind::Fermionic => {
            ratio_to_f64(factorial(k - 1), occ * factorial(k - 1 - total))
        }
    };
    Ok(libm::sqrt(sq))
}

/// Differential action of `a_i^+`, `a_i^-` or `N_i` on `p`.
pub fn apply_generator(
    kind: RealizationKind,
    params: &SectorParams,
    p: &MultiPoly,
    i: usize,
    action: Action,
) -> Result<MultiPoly> {
    kind.check(params)?;
    params.check_mode(i)?;
    if p.vars() != params.modes() {
        return Err(Error::Mismatch(format!(
            "polynomial in {} variables for {} modes",
            p.vars(),
            params.modes()
        )));
    }
    let k = f64::from(params.k());
    let out = match (kind, action) {
        (_, Action::Number) => p.euler(i),
        (RealizationKind::BosonicI, Action::Raise) => p.mul_var(i),
        (RealizationKind::BosonicI, Action::Lower) => {
            let d = p.derivative(i);
            let mut others = p.euler_total();
            others = &others - &p.euler(i);
            let out = &d.scaled(k) + &d.derivative(i).mul_var(i);
            &out + &others.derivative(i)
        }
        (RealizationKind::BosonicII, Action::Raise) => (&p.scaled(k) + &p.euler_total()).mul_var(i),
        (RealizationKind::Fermionic, Action::Raise) => {
            (&p.scaled(k - 1.0) - &p.euler_total()).mul_var(i)
        }
        (RealizationKind::BosonicII | RealizationKind::Fermionic, Action::Lower) => p.derivative(i),
    };
    Ok(out)
}

/// `sum_n amplitude_n C_n x^n` over the basis.
pub fn state_to_polynomial(
    kind: RealizationKind,
    basis: &FockBasis,
    amplitudes: &[f64],
) -> Result<MultiPoly> {
    kind.check(basis.params())?;
    let coeffs = coefficient_table(kind, basis)?;
    expand(basis, amplitudes, &coeffs)
}

fn coefficient_table(kind: RealizationKind, basis: &FockBasis) -> Result<Vec<f64>> {
    basis
        .states()
        .iter()
        .map(|n| basis_coefficient(kind, basis.params(), n))
        .collect()
}

fn expand(basis: &FockBasis, amplitudes: &[f64], coeffs: &[f64]) -> Result<MultiPoly> {
    if amplitudes.len() != basis.len() {
        return Err(Error::Mismatch(format!(
            "{} amplitudes for a basis of {} states",
            amplitudes.len(),
            basis.len()
        )));
    }
    let mut p = MultiPoly::zero(basis.params().modes());
    for ((n, &a), &c) in basis.states().iter().zip(amplitudes).zip(coeffs) {
        p.add_term(n.clone(), a * c);
    }
    Ok(p)
}

/// Checks that every differential operator reproduces its matrix on every
/// basis vector. Raising on a truncated basis is only compared below the top
/// shell.
pub fn verify_realization_equivalence(
    kind: RealizationKind,
    basis: &FockBasis,
    tol: f64,
) -> Result<VerificationReport> {
    kind.check(basis.params())?;
    let coeffs = coefficient_table(kind, basis)?;
    equivalence_with_coefficients(kind, basis, tol, &coeffs)
}

/// As [`verify_realization_equivalence`] with caller-supplied coefficients
/// `C_n`, one per basis state.
///
/// The residual of each comparison is `max_e |p_e - q_e| / max(1, |q_e|)`
/// over polynomial coefficients.
pub fn equivalence_with_coefficients(
    kind: RealizationKind,
    basis: &FockBasis,
    tol: f64,
    coeffs: &[f64],
) -> Result<VerificationReport> {
    let params = basis.params();
    kind.check(params)?;
    basis.require_cutoff(2, "realization equivalence with raise margin 1")?;
    if coeffs.len() != basis.len() {
        return Err(Error::Mismatch(format!(
            "{} coefficients for a basis of {} states",
            coeffs.len(),
            basis.len()
        )));
    }
    let raise_mask = basis.interior_mask(1);
    let mut residuals = Vec::new();
    let mut unit = alloc::vec![0.0; basis.len()];
    for i in 0..params.modes() {
        let matrices = [
            (Action::Raise, fock::ladder_matrix(basis, i, Ladder::Raise)?),
            (Action::Lower, fock::ladder_matrix(basis, i, Ladder::Lower)?),
            (Action::Number, fock::number_matrix(basis, i)?),
        ];
        for (col, _) in basis.states().iter().enumerate() {
            unit[col] = 1.0;
            let image = expand(basis, &unit, coeffs)?;
            unit[col] = 0.0;
            for (action, matrix) in &matrices {
                if *action == Action::Raise && !raise_mask[col] {
                    continue;
                }
                let lhs = apply_generator(kind, params, &image, i, *action)?;
                let rhs = expand(basis, &matrix.column(col), coeffs)?;
                residuals.push(lhs.max_rel_diff(&rhs));
            }
        }
    }
    let mask = if basis.is_truncated() {
        format!(
            "lower and number on all states; raise on total occupation <= {}",
            basis.cutoff() - 1
        )
    } else {
        basis.mask_description(0)
    };
    Ok(VerificationReport::from_residuals(
        format!("realization {} reproduces the Fock matrices", kind.name()),
        &residuals,
        tol,
        mask,
    )
    .with_params(params, Some(basis.cutoff())))
}
