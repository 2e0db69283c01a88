//! Fock representation of both sectors.
//!
//! States `|n_1, ..., n_r>` carry the ladder action
//!
//! ```text
//! a_i^- |n> = sqrt(F_i(n))       |n - e_i>
//! a_i^+ |n> = sqrt(F_i(n + e_i)) |n + e_i>
//! F_i(n)    = n_i (k0 + s n),    n = n_1 + ... + n_r
//! ```
//!
//! The fermionic space is finite (`n <= k - 1`). The bosonic space is cut at a
//! total occupation `N_max`; raising out of the top shell gives zero, so any
//! identity involving a raise is only trusted on shells far enough below the
//! cutoff (see [`FockBasis::interior_mask`]).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::sparse::{BasisTag, SparseOperator};
use crate::{Error, OccupationVector, Result, Sector, SectorParams};

/// Refuse to enumerate bases larger than this.
pub const MAX_BASIS_SIZE: usize = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Raise,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HamiltonianMode {
    /// `diag(sum_i e_i n_i)`.
    Diagonal,
    /// `sum_i e_i h_i` with `h_i` built from ladder commutators.
    Constructed,
}

/// Ordered enumeration of occupation vectors up to a total cutoff.
#[derive(Clone, Debug)]
pub struct FockBasis {
    params: SectorParams,
    cutoff: usize,
    states: Vec<OccupationVector>,
    index: BTreeMap<OccupationVector, usize>,
}

/// `C(n + r, r)` in exact integers, saturating.
pub fn states_up_to(modes: usize, total: usize) -> u128 {
    let mut acc: u128 = 1;
    for j in 1..=modes as u128 {
        acc = acc.saturating_mul(total as u128 + j) / j;
    }
    acc
}

/// Appends every occupation vector of the given total, lexicographically
/// ascending.
pub(crate) fn push_shell(modes: usize, total: usize, out: &mut Vec<OccupationVector>) {
    fn fill(pos: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<OccupationVector>) {
        if pos + 1 == cur.len() {
            cur[pos] = remaining;
            out.push(OccupationVector::new(cur.clone()));
            return;
        }
        for v in 0..=remaining {
            cur[pos] = v;
            fill(pos + 1, remaining - v, cur, out);
        }
    }
    let mut cur = vec![0u32; modes];
    fill(0, total as u32, &mut cur, out);
}

/// Enumerates the Fock basis in graded-lexicographic order.
///
/// For the fermionic sector `cutoff` is ignored and the basis always ends at
/// the Pauli bound `k - 1`.
pub fn enumerate_basis(params: &SectorParams, cutoff: usize) -> Result<FockBasis> {
    let cutoff = params.max_total().unwrap_or(cutoff);
    let size = states_up_to(params.modes(), cutoff);
    if size > MAX_BASIS_SIZE as u128 {
        return Err(Error::BasisTooLarge {
            size,
            limit: MAX_BASIS_SIZE,
        });
    }
    let mut states = Vec::with_capacity(size as usize);
    for total in 0..=cutoff {
        push_shell(params.modes(), total, &mut states);
    }
    let index = states
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();
    Ok(FockBasis {
        params: params.clone(),
        cutoff,
        states,
        index,
    })
}

impl FockBasis {
    pub fn params(&self) -> &SectorParams {
        &self.params
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[OccupationVector] {
        &self.states
    }

    pub fn state(&self, idx: usize) -> &OccupationVector {
        &self.states[idx]
    }

    pub fn index_of(&self, n: &OccupationVector) -> Option<usize> {
        self.index.get(n).copied()
    }

    pub fn tag(&self) -> BasisTag {
        BasisTag {
            modes: self.params.modes(),
            sector: self.params.sector(),
            k: self.params.k(),
            cutoff: self.cutoff,
        }
    }

    /// True when the cutoff truncates an infinite space.
    pub fn is_truncated(&self) -> bool {
        self.params.sector() == Sector::Bosonic
    }

    /// States whose total lies at least `margin` shells below the cutoff.
    /// Every state is interior for the fermionic sector.
    pub fn interior_mask(&self, margin: usize) -> Vec<bool> {
        if !self.is_truncated() {
            return vec![true; self.len()];
        }
        let top = self.cutoff.checked_sub(margin);
        self.states
            .iter()
            .map(|n| top.is_some_and(|t| n.total() <= t))
            .collect()
    }

    pub fn mask_description(&self, margin: usize) -> String {
        if !self.is_truncated() {
            return String::from("none: finite fermionic representation, all states checked");
        }
        if margin == 0 {
            return format!(
                "unmasked: all states up to the cutoff {} checked, truncation included",
                self.cutoff
            );
        }
        format!(
            "rows and columns with total occupation <= {} (cutoff {} minus margin {})",
            self.cutoff.saturating_sub(margin),
            self.cutoff,
            margin
        )
    }

    pub(crate) fn require_cutoff(&self, required: usize, reason: &'static str) -> Result<()> {
        if self.is_truncated() && self.cutoff < required {
            return Err(Error::CutoffTooSmall {
                cutoff: self.cutoff,
                required,
                reason,
            });
        }
        Ok(())
    }
}

/// `F_i(n) = n_i (k0 + s n)` in exact integers.
///
/// Accepts every `n` with `k0 + s n >= 0`. For the fermionic sector this
/// includes the first forbidden shell `n = k`, where `F` vanishes: that is the
/// value read when raising from the Pauli boundary.
pub fn structure_value(params: &SectorParams, n: &OccupationVector, i: usize) -> Result<u64> {
    params.check_mode(i)?;
    if n.modes() != params.modes() {
        return Err(Error::InvalidState(format!(
            "occupation vector has {} entries, expected {}",
            n.modes(),
            params.modes()
        )));
    }
    let gap = params.k0() + params.sign() * n.total() as i64;
    if gap < 0 {
        return Err(Error::InvalidState(format!(
            "total occupation {} violates the Pauli bound for k = {}",
            n.total(),
            params.k()
        )));
    }
    Ok(u64::from(n.get(i)) * gap as u64)
}

pub fn structure_function(params: &SectorParams, n: &OccupationVector, i: usize) -> Result<f64> {
    structure_value(params, n, i).map(|v| v as f64)
}

/// Matrix of `a_i^+` or `a_i^-`. The raise matrix is the exact transpose of
/// the lower matrix.
pub fn ladder_matrix(basis: &FockBasis, i: usize, direction: Ladder) -> Result<SparseOperator> {
    let params = basis.params();
    params.check_mode(i)?;
    let mut triplets = Vec::new();
    for (col, n) in basis.states().iter().enumerate() {
        let Some(m) = n.lowered(i) else { continue };
        let f = structure_value(params, n, i)?;
        if f == 0 {
            continue;
        }
        let row = basis.index_of(&m).expect("basis is closed under lowering");
        let amp = libm::sqrt(f as f64);
        match direction {
            Ladder::Lower => triplets.push((row, col, amp)),
            Ladder::Raise => triplets.push((col, row, amp)),
        }
    }
    Ok(SparseOperator::from_triplets(
        basis.tag(),
        basis.len(),
        triplets,
    ))
}

/// `N_i |n> = n_i |n>`. Not the product `a_i^+ a_i^-`.
pub fn number_matrix(basis: &FockBasis, i: usize) -> Result<SparseOperator> {
    basis.params().check_mode(i)?;
    let diag: Vec<f64> = basis.states().iter().map(|n| f64::from(n.get(i))).collect();
    Ok(SparseOperator::diagonal(basis.tag(), &diag))
}

/// The constant `c` in `h_i` that puts the vacuum at zero energy:
/// `c = -(s k0 + 1) / (r + 1)`.
///
/// With it every `h_i` reduces to `N_i` on states where no ladder operator is
/// truncated.
pub fn vacuum_offset(params: &SectorParams) -> f64 {
    let r = params.modes() as f64;
    -((params.sign() * params.k0()) as f64 + 1.0) / (r + 1.0)
}

/// `h_i = s/(r+1) [ (r+1)[a_i^-, a_i^+] - sum_j [a_j^-, a_j^+] ] + c`.
pub fn mode_hamiltonian(basis: &FockBasis, i: usize) -> Result<SparseOperator> {
    let params = basis.params();
    params.check_mode(i)?;
    let r = params.modes();
    let mut brackets = Vec::with_capacity(r);
    for j in 0..r {
        let lower = ladder_matrix(basis, j, Ladder::Lower)?;
        let raise = ladder_matrix(basis, j, Ladder::Raise)?;
        brackets.push(
            lower
                .checked_mul(&raise)?
                .checked_sub(&raise.checked_mul(&lower)?)?,
        );
    }
    let mut inner = brackets[i].scaled((r + 1) as f64);
    for b in &brackets {
        inner = inner.checked_sub(b)?;
    }
    let s = params.sign() as f64;
    let offset = SparseOperator::identity(basis.tag(), basis.len()).scaled(vacuum_offset(params));
    inner.scaled(s / (r + 1) as f64).checked_add(&offset)
}

pub fn hamiltonian_matrix(basis: &FockBasis, mode: HamiltonianMode) -> Result<SparseOperator> {
    hamiltonian_matrix_with_energies(basis, basis.params().energies(), mode)
}

/// Same as [`hamiltonian_matrix`] with explicit energies, which may be any
/// finite reals (zero included).
pub fn hamiltonian_matrix_with_energies(
    basis: &FockBasis,
    energies: &[f64],
    mode: HamiltonianMode,
) -> Result<SparseOperator> {
    let r = basis.params().modes();
    if energies.len() != r || energies.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "need {r} finite mode energies, got {}",
            energies.len()
        )));
    }
    match mode {
        HamiltonianMode::Diagonal => {
            let diag: Vec<f64> = basis
                .states()
                .iter()
                .map(|n| {
                    energies
                        .iter()
                        .enumerate()
                        .map(|(i, e)| e * f64::from(n.get(i)))
                        .sum()
                })
                .collect();
            Ok(SparseOperator::diagonal(basis.tag(), &diag))
        }
        HamiltonianMode::Constructed => {
            let mut h = SparseOperator::zeros(basis.tag(), basis.len());
            for (i, &e) in energies.iter().enumerate() {
                h = h.checked_add_scaled(&mode_hamiltonian(basis, i)?, e)?;
            }
            Ok(h)
        }
    }
}

/// Distance of `a_i^± / sqrt(k)` from the Bose ladder at one `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoseLimitPoint {
    pub k: u32,
    pub deviation: f64,
}

/// For each `k`, the largest `|<m| a_i^± |n> / sqrt(k) - bose entry|` over all
/// modes and all states `n` with total at most `probe_total`.
///
/// The probed entries only need the structure function, so no basis is built;
/// for the fermionic sector the Pauli bound must leave room for one raise above
/// the probe (`k - 1 >= probe_total + 1`).
pub fn bose_limit_deviation(
    modes: usize,
    sector: Sector,
    ks: &[u32],
    probe_total: usize,
) -> Result<Vec<BoseLimitPoint>> {
    let mut probes = Vec::new();
    for total in 0..=probe_total {
        push_shell(modes, total, &mut probes);
    }
    ks.iter()
        .map(|&k| {
            let params = SectorParams::unit_energies(modes, sector, k)?;
            if let Some(max) = params.max_total() {
                if max < probe_total + 1 {
                    return Err(Error::CutoffTooSmall {
                        cutoff: max,
                        required: probe_total + 1,
                        reason: "probing the Bose limit (Pauli bound k - 1)",
                    });
                }
            }
            let scale = libm::sqrt(f64::from(k));
            let mut deviation: f64 = 0.0;
            for n in &probes {
                for i in 0..modes {
                    let ni = f64::from(n.get(i));
                    if n.get(i) > 0 {
                        let f = structure_value(&params, n, i)? as f64;
                        deviation = deviation.max((libm::sqrt(f) / scale - libm::sqrt(ni)).abs());
                    }
                    let f = structure_value(&params, &n.raised(i), i)? as f64;
                    deviation = deviation.max((libm::sqrt(f) / scale - libm::sqrt(ni + 1.0)).abs());
                }
            }
            Ok(BoseLimitPoint { k, deviation })
        })
        .collect()
}

/// Smallest `C` with `deviation <= C (probe_total + 1) / k` at every point.
pub fn bose_limit_constant(points: &[BoseLimitPoint], probe_total: usize) -> f64 {
    points.iter().fold(0.0, |c: f64, p| {
        c.max(p.deviation * f64::from(p.k) / (probe_total + 1) as f64)
    })
}

pub fn is_strictly_decreasing(points: &[BoseLimitPoint]) -> bool {
    points.windows(2).all(|w| w[1].deviation < w[0].deviation)
}
