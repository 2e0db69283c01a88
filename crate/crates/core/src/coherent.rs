//! Coherent-state families as amplitude vectors over a Fock basis.
//!
//! | family | labels          | amplitude of `|n>`               | prefactor `N`                   |
//! |--------|-----------------|----------------------------------|---------------------------------|
//! | GK     | `w` in `C^r`    | `N C^I_n w^n`                    | `(sum_n (C^I_n)^2 |w|^{2n})^-1/2` |
//! | KP     | `z`, `|z| < 1`  | `N C^II_n z^n`                   | `(1 - |z|^2)^{k/2}`             |
//! | CP^r   | `zeta` in `C^r` | `N C^F_n zeta^n`                 | `(1 + |zeta|^2)^{-(k-1)/2}`     |
//!
//! with the realization coefficients `C_n` of [`crate::bargmann`]. Summed
//! over a shell of total `t` the squared coefficients collapse through the
//! multinomial theorem to a function of `X = |x_1|^2 + ... + |x_r|^2` alone,
//! which gives the truncation tail bounds used here.
//!
//! GK and KP states are infinite series, truncated at a total-occupation
//! cutoff and renormalized. CP^r states are finite and never renormalized, so
//! their norm is an honest check of the closed-form prefactor.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::VerificationReport;
use crate::bargmann::RealizationKind;
use crate::fock::{self, FockBasis, Ladder};
use crate::{Error, Result, Sector, SectorParams};

/// Largest cutoff tried by [`Truncation::Auto`].
pub const MAX_AUTO_CUTOFF: usize = 4096;
/// Additive accuracy of the Gazeau–Klauder normalization series.
pub const SERIES_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoherentFamily {
    /// Eigenstates of the annihilators, realization I.
    GazeauKlauder,
    /// Unit-ball states, realization II.
    KlauderPerelomov,
    /// Complex projective states of the fermionic sector.
    ProjectiveCP,
}

impl CoherentFamily {
    pub fn sector(self) -> Sector {
        self.realization().sector()
    }

    pub fn realization(self) -> RealizationKind {
        match self {
            CoherentFamily::GazeauKlauder => RealizationKind::BosonicI,
            CoherentFamily::KlauderPerelomov => RealizationKind::BosonicII,
            CoherentFamily::ProjectiveCP => RealizationKind::Fermionic,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CoherentFamily::GazeauKlauder => "gk",
            CoherentFamily::KlauderPerelomov => "kp",
            CoherentFamily::ProjectiveCP => "cpr",
        }
    }

    /// `S_{t+1} / S_t` for the shell weights `S_t = sum_{|n| = t} C_n^2 |x^n|^2`.
    fn shell_ratio(self, k: f64, x: f64, t: usize) -> f64 {
        let t = t as f64;
        match self {
            CoherentFamily::GazeauKlauder => x / ((t + 1.0) * (k + t)),
            CoherentFamily::KlauderPerelomov => x * (k + t) / (t + 1.0),
            CoherentFamily::ProjectiveCP => x * (k - 1.0 - t) / (t + 1.0),
        }
    }
}

/// A label point of a family.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentPoint {
    family: CoherentFamily,
    coords: Vec<Complex64>,
}

impl CoherentPoint {
    /// KP points must lie in the open unit ball.
    pub fn new(family: CoherentFamily, coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput(
                "a coherent point needs coordinates".into(),
            ));
        }
        if coords
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::OutOfDomain("coordinates must be finite".into()));
        }
        let point = CoherentPoint { family, coords };
        if family == CoherentFamily::KlauderPerelomov && point.modulus_sq() >= 1.0 {
            return Err(Error::OutOfDomain(format!(
                "Klauder–Perelomov labels need |z|^2 < 1 (got {})",
                point.modulus_sq()
            )));
        }
        Ok(point)
    }

    pub fn real(family: CoherentFamily, coords: &[f64]) -> Result<Self> {
        Self::new(
            family,
            coords.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn origin(family: CoherentFamily, modes: usize) -> Self {
        CoherentPoint {
            family,
            coords: alloc::vec![Complex64::new(0.0, 0.0); modes],
        }
    }

    pub fn family(&self) -> CoherentFamily {
        self.family
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// `|x_1|^2 + ... + |x_r|^2`.
    pub fn modulus_sq(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }

    fn check(&self, params: &SectorParams) -> Result<()> {
        if params.sector() != self.family.sector() {
            return Err(Error::IncompatibleSector(format!(
                "{} states need the {} sector, got {}",
                self.family.name(),
                self.family.sector(),
                params.sector()
            )));
        }
        if self.coords.len() != params.modes() {
            return Err(Error::Mismatch(format!(
                "{} coordinates for {} modes",
                self.coords.len(),
                params.modes()
            )));
        }
        Ok(())
    }
}

/// Cutoff policy for the infinite families. Ignored for CP^r.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Truncation {
    Fixed(usize),
    /// Smallest cutoff in the sequence 2, 4, 8, ... whose tail bound is below
    /// `tail_tol`.
    Auto {
        tail_tol: f64,
    },
}

#[derive(Clone, Debug)]
pub struct CoherentState {
    pub point: CoherentPoint,
    pub basis: FockBasis,
    pub amplitudes: Vec<Complex64>,
    /// `N` as returned by [`normalization_constant`].
    pub normalization: f64,
    /// `sum |amplitude|^2` before any renormalization.
    pub raw_norm_sq: f64,
    /// `1 - raw_norm_sq`.
    pub tail_bound: f64,
    /// Analytic upper bound on the truncated relative weight (0 for CP^r).
    pub tail_estimate: f64,
}

impl CoherentState {
    pub fn cutoff(&self) -> usize {
        self.basis.cutoff()
    }

    pub fn params(&self) -> &SectorParams {
        self.basis.params()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// `sum_t S_t` to [`SERIES_TOLERANCE`] for GK, closed forms otherwise.
fn total_weight(family: CoherentFamily, k: f64, x: f64) -> f64 {
    match family {
        CoherentFamily::KlauderPerelomov => libm::pow(1.0 - x, -k),
        CoherentFamily::ProjectiveCP => libm::pow(1.0 + x, k - 1.0),
        CoherentFamily::GazeauKlauder => {
            let mut term = 1.0;
            let mut sum = 0.0;
            let mut t = 0;
            loop {
                sum += term;
                let rho = family.shell_ratio(k, x, t + 1);
                term *= family.shell_ratio(k, x, t);
                t += 1;
                if rho < 1.0 && term / (1.0 - rho) < SERIES_TOLERANCE {
                    break;
                }
            }
            sum
        }
    }
}

/// Prefactor multiplying `C_n x^n` in the normalized state.
pub fn normalization_constant(params: &SectorParams, point: &CoherentPoint) -> Result<f64> {
    point.check(params)?;
    let k = f64::from(params.k());
    Ok(1.0 / libm::sqrt(total_weight(point.family, k, point.modulus_sq())))
}

/// Relative weight of the shells above `cutoff`, bounded by a geometric
/// series with the (decreasing) shell ratio at `cutoff + 1`.
pub fn tail_estimate(params: &SectorParams, point: &CoherentPoint, cutoff: usize) -> f64 {
    let family = point.family;
    if family == CoherentFamily::ProjectiveCP {
        return 0.0;
    }
    let k = f64::from(params.k());
    let x = point.modulus_sq();
    let mut shell = 1.0;
    for t in 0..=cutoff {
        shell *= family.shell_ratio(k, x, t);
    }
    let rho = family.shell_ratio(k, x, cutoff + 1);
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    shell / (1.0 - rho) / total_weight(family, k, x)
}

/// `C_n` for every state of `basis`, by the ratio `C_n / C_{n - e_j}` along
/// the first occupied mode `j`.
fn coefficient_recursion(kind: RealizationKind, basis: &FockBasis) -> Vec<f64> {
    let k = f64::from(basis.params().k());
    let mut coeffs: Vec<f64> = Vec::with_capacity(basis.len());
    for n in basis.states() {
        let Some(j) = n.as_slice().iter().position(|&x| x > 0) else {
            coeffs.push(1.0);
            continue;
        };
        let prev = n.lowered(j).expect("occupied mode");
        let parent = coeffs[basis.index_of(&prev).expect("basis closed under lowering")];
        let nj = f64::from(n.get(j));
        let total = n.total() as f64;
        let ratio = match kind {
            RealizationKind::BosonicI => 1.0 / (nj * (k - 1.0 + total)),
            RealizationKind::BosonicII => (k - 1.0 + total) / nj,
            RealizationKind::Fermionic => (k - total) / nj,
        };
        coeffs.push(parent * libm::sqrt(ratio));
    }
    coeffs
}

fn amplitudes_on(basis: &FockBasis, point: &CoherentPoint, prefactor: f64) -> Vec<Complex64> {
    let coeffs = coefficient_recursion(point.family.realization(), basis);
    let powers: Vec<Vec<Complex64>> = point
        .coords
        .iter()
        .map(|&c| {
            let mut row = Vec::with_capacity(basis.cutoff() + 1);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..=basis.cutoff() {
                row.push(acc);
                acc *= c;
            }
            row
        })
        .collect();
    basis
        .states()
        .iter()
        .zip(&coeffs)
        .map(|(n, &c)| {
            let mono = n
                .as_slice()
                .iter()
                .zip(&powers)
                .fold(Complex64::new(1.0, 0.0), |acc, (&e, row)| {
                    acc * row[e as usize]
                });
            mono * (prefactor * c)
        })
        .collect()
}

fn auto_cutoff(params: &SectorParams, point: &CoherentPoint, tail_tol: f64) -> Result<usize> {
    let mut cutoff = 2;
    loop {
        let tail = tail_estimate(params, point, cutoff);
        if tail < tail_tol {
            return Ok(cutoff);
        }
        let next = 2 * cutoff;
        if next > MAX_AUTO_CUTOFF
            || fock::states_up_to(params.modes(), next) > fock::MAX_BASIS_SIZE as u128
        {
            return Err(Error::TailNotReached {
                cutoff,
                achieved: tail,
                requested: tail_tol,
            });
        }
        cutoff = next;
    }
}

/// Normalized amplitudes of the coherent state labelled by `point`.
pub fn coherent_amplitudes(
    params: &SectorParams,
    point: &CoherentPoint,
    truncation: Truncation,
) -> Result<CoherentState> {
    point.check(params)?;
    let normalization = normalization_constant(params, point)?;
    let cutoff = match (point.family, truncation) {
        (CoherentFamily::ProjectiveCP, _) => 0,
        (_, Truncation::Fixed(c)) => c,
        (_, Truncation::Auto { tail_tol }) => auto_cutoff(params, point, tail_tol)?,
    };
    let basis = fock::enumerate_basis(params, cutoff)?;
    let mut amplitudes = amplitudes_on(&basis, point, normalization);
    let raw_norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    let tail = tail_estimate(params, point, basis.cutoff());
    if point.family != CoherentFamily::ProjectiveCP {
        let scale = 1.0 / libm::sqrt(raw_norm_sq);
        for a in &mut amplitudes {
            *a *= scale;
        }
    }
    Ok(CoherentState {
        point: point.clone(),
        basis,
        amplitudes,
        normalization,
        raw_norm_sq,
        tail_bound: 1.0 - raw_norm_sq,
        tail_estimate: tail,
    })
}

/// `<a|b> = sum_n conj(a_n) b_n`.
pub fn overlap(a: &CoherentState, b: &CoherentState) -> Result<Complex64> {
    if a.point.family != b.point.family
        || a.params() != b.params()
        || a.basis.tag() != b.basis.tag()
    {
        return Err(Error::Mismatch(
            "overlap needs states of one family on the same basis".into(),
        ));
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y))
}

/// Untruncated `<a|b>` from the summed kernels, with `w = sum_i conj(a_i) b_i`:
/// KP `N_a N_b (1 - w)^-k`, CP^r `N_a N_b (1 + w)^{k-1}`, GK the series
/// `N_a N_b sum_t (k-1)! w^t / (t! (k-1+t)!)`.
pub fn overlap_kernel(
    params: &SectorParams,
    a: &CoherentPoint,
    b: &CoherentPoint,
) -> Result<Complex64> {
    if a.family != b.family {
        return Err(Error::Mismatch("kernel needs points of one family".into()));
    }
    let na = normalization_constant(params, a)?;
    let nb = normalization_constant(params, b)?;
    let w = a
        .coords
        .iter()
        .zip(&b.coords)
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y);
    let one = Complex64::new(1.0, 0.0);
    let k = params.k();
    let sum = match a.family {
        CoherentFamily::KlauderPerelomov => one / (one - w).powu(k),
        CoherentFamily::ProjectiveCP => (one + w).powu(k - 1),
        CoherentFamily::GazeauKlauder => {
            let kf = f64::from(k);
            let mut term = one;
            let mut sum = Complex64::new(0.0, 0.0);
            let mut t = 0usize;
            loop {
                sum += term;
                let tf = t as f64;
                term *= w / ((tf + 1.0) * (kf + tf));
                t += 1;
                let rho = w.norm() / ((tf + 2.0) * (kf + tf + 1.0));
                if rho < 1.0 && term.norm() / (1.0 - rho) < SERIES_TOLERANCE * sum.norm().max(1.0) {
                    break;
                }
            }
            sum
        }
    };
    Ok(sum * (na * nb))
}

/// Per-mode residual of `(a_i^- - x_i) |state>`, split into components below
/// the top shell (`interior`) and on it (`boundary`, the truncation error).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenResidual {
    pub interior: f64,
    pub boundary: f64,
}

pub fn eigenstate_residuals(state: &CoherentState) -> Result<Vec<EigenResidual>> {
    let basis = &state.basis;
    let interior_mask = basis.interior_mask(1);
    (0..basis.params().modes())
        .map(|i| {
            let lower = fock::ladder_matrix(basis, i, Ladder::Lower)?;
            let image = lower.apply_complex(&state.amplitudes);
            let x = state.point.coords[i];
            let (mut inner, mut edge) = (0.0, 0.0);
            for ((y, a), &interior) in image.iter().zip(&state.amplitudes).zip(&interior_mask) {
                let d = (y - x * a).norm_sqr();
                if interior {
                    inner += d;
                } else {
                    edge += d;
                }
            }
            Ok(EigenResidual {
                interior: libm::sqrt(inner),
                boundary: libm::sqrt(edge),
            })
        })
        .collect()
}

/// Checks `a_i^- |x> = x_i |x>` on the components below the top shell.
///
/// `cutoff = None` picks one automatically with tail below `tol / 10`; an
/// explicit cutoff whose tail bound is not below `tol / 10` is an error.
/// States of a family other than GK are accepted and are expected to fail.
pub fn verify_annihilation_eigenstate(
    params: &SectorParams,
    point: &CoherentPoint,
    cutoff: Option<usize>,
    tol: f64,
) -> Result<VerificationReport> {
    let tail_tol = tol / 10.0;
    let truncation = match cutoff {
        None => Truncation::Auto { tail_tol },
        Some(c) => Truncation::Fixed(c),
    };
    let state = coherent_amplitudes(params, point, truncation)?;
    if state.tail_estimate >= tail_tol {
        return Err(Error::TailNotReached {
            cutoff: state.cutoff(),
            achieved: state.tail_estimate,
            requested: tail_tol,
        });
    }
    let residuals: Vec<f64> = eigenstate_residuals(&state)?
        .iter()
        .map(|r| r.interior)
        .collect();
    let mask = if state.basis.is_truncated() {
        format!(
            "components with total occupation <= {} (cutoff {})",
            state.cutoff() - 1,
            state.cutoff()
        )
    } else {
        state.basis.mask_description(0)
    };
    Ok(VerificationReport::from_residuals(
        format!(
            "{} state is an eigenvector of every a_i^-",
            point.family.name()
        ),
        &residuals,
        tol,
        mask,
    )
    .with_params(params, Some(state.cutoff())))
}
