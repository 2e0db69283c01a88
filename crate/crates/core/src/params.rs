use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::{Error, Result};

/// Sign of the deformation parameter: bosonic (`s = +1`, infinite Fock space)
/// or fermionic (`s = -1`, generalized Pauli bound).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    Bosonic,
    Fermionic,
}

impl Sector {
    pub fn sign(self) -> i64 {
        match self {
            Sector::Bosonic => 1,
            Sector::Fermionic => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sector::Bosonic => "bosonic",
            Sector::Fermionic => "fermionic",
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Defining data of the algebra: number of modes, sector, the integer `k` and
/// the mode energies.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorParams {
    modes: usize,
    sector: Sector,
    k: u32,
    epsilon: Option<f64>,
    energies: Vec<f64>,
}

impl SectorParams {
    /// Validates `k0 = k - (1+s)/2 >= 1` and strictly positive energies, one
    /// per mode.
    pub fn new(modes: usize, sector: Sector, k: u32, energies: Vec<f64>) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidParams("mode count r must be positive".into()));
        }
        match sector {
            Sector::Bosonic if k < 2 => {
                return Err(Error::InvalidParams(format!(
                    "bosonic sector requires k >= 2 so that k0 = k - 1 >= 1 (got k = {k})"
                )))
            }
            Sector::Fermionic if k < 1 => {
                return Err(Error::InvalidParams(
                    "fermionic sector requires k >= 1 (k0 = k)".into(),
                ))
            }
            _ => {}
        }
        if energies.len() != modes {
            return Err(Error::InvalidParams(format!(
                "expected {modes} mode energies, got {}",
                energies.len()
            )));
        }
        if let Some(e) = energies.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(Error::InvalidParams(format!(
                "mode energies must be finite and strictly positive (got {e})"
            )));
        }
        Ok(SectorParams {
            modes,
            sector,
            k,
            epsilon: None,
            energies,
        })
    }

    /// All mode energies set to one.
    pub fn unit_energies(modes: usize, sector: Sector, k: u32) -> Result<Self> {
        Self::new(modes, sector, k, vec![1.0; modes])
    }

    /// Starts from the unrescaled parameter `epsilon`; the sector is its sign.
    /// `epsilon` is kept as metadata only, all operators are the rescaled
    /// `a_i^± = x_i^± / sqrt|epsilon|`.
    pub fn from_epsilon(modes: usize, epsilon: f64, k: u32, energies: Vec<f64>) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon != 0.0) {
            return Err(Error::InvalidParams(format!(
                "epsilon must be finite and nonzero (got {epsilon})"
            )));
        }
        let sector = if epsilon > 0.0 {
            Sector::Bosonic
        } else {
            Sector::Fermionic
        };
        let mut params = Self::new(modes, sector, k, energies)?;
        params.epsilon = Some(epsilon);
        Ok(params)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn sign(&self) -> i64 {
        self.sector.sign()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `k0 = k - (1+s)/2`.
    pub fn k0(&self) -> i64 {
        match self.sector {
            Sector::Bosonic => i64::from(self.k) - 1,
            Sector::Fermionic => i64::from(self.k),
        }
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Largest total occupation allowed by the Pauli bound, if any.
    pub fn max_total(&self) -> Option<usize> {
        match self.sector {
            Sector::Bosonic => None,
            Sector::Fermionic => Some(self.k as usize - 1),
        }
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.modes {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                mode,
                modes: self.modes,
            })
        }
    }

    /// Checks length and, for the fermionic sector, the Pauli bound.
    pub fn check_state(&self, n: &OccupationVector) -> Result<()> {
        if n.modes() != self.modes {
            return Err(Error::InvalidState(format!(
                "occupation vector has {} entries, expected {}",
                n.modes(),
                self.modes
            )));
        }
        if let Some(max) = self.max_total() {
            if n.total() > max {
                return Err(Error::InvalidState(format!(
                    "total occupation {} exceeds the Pauli bound k - 1 = {max}",
                    n.total()
                )));
            }
        }
        Ok(())
    }
}

/// Occupation numbers `(n_1, ..., n_r)`.
///
/// Ordered graded-lexicographically: by total first, then lexicographically
/// on the entries. This is the basis order used everywhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OccupationVector {
    n: Vec<u32>,
}

impl OccupationVector {
    pub fn new(n: Vec<u32>) -> Self {
        OccupationVector { n }
    }

    pub fn vacuum(modes: usize) -> Self {
        OccupationVector { n: vec![0; modes] }
    }

    /// `e_i`, a single quantum in mode `i`.
    pub fn unit(modes: usize, i: usize) -> Self {
        let mut n = vec![0; modes];
        n[i] = 1;
        OccupationVector { n }
    }

    pub fn modes(&self) -> usize {
        self.n.len()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.n[i]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.n
    }

    pub fn total(&self) -> usize {
        self.n.iter().map(|&x| x as usize).sum()
    }

    /// `n + e_i`.
    pub fn raised(&self, i: usize) -> Self {
        let mut n = self.n.clone();
        n[i] += 1;
        OccupationVector { n }
    }

    /// `n - e_i`, or `None` when `n_i = 0`.
    pub fn lowered(&self, i: usize) -> Option<Self> {
        if self.n[i] == 0 {
            return None;
        }
        let mut n = self.n.clone();
        n[i] -= 1;
        Some(OccupationVector { n })
    }
}

impl From<Vec<u32>> for OccupationVector {
    fn from(n: Vec<u32>) -> Self {
        OccupationVector::new(n)
    }
}

impl From<&[u32]> for OccupationVector {
    fn from(n: &[u32]) -> Self {
        OccupationVector::new(n.to_vec())
    }
}

impl Ord for OccupationVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.n.cmp(&other.n))
    }
}

impl PartialOrd for OccupationVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (idx, x) in self.n.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}
