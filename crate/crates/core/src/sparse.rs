//! Real sparse matrices acting on a Fock basis.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result, Sector};

/// Identity of the basis an operator acts on. Two operators can only be
/// combined when their tags agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisTag {
    pub modes: usize,
    pub sector: Sector,
    pub k: u32,
    pub cutoff: usize,
}

/// Square sparse matrix keyed by `(row, col)`.
///
/// Entries equal to zero are never stored; arithmetic drops exact
/// cancellations.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    tag: BasisTag,
    entries: BTreeMap<(usize, usize), f64>,
}

impl SparseOperator {
    pub fn zeros(tag: BasisTag, dim: usize) -> Self {
        SparseOperator {
            dim,
            tag,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(tag: BasisTag, dim: usize) -> Self {
        Self::diagonal(tag, &vec![1.0; dim])
    }

    pub fn diagonal(tag: BasisTag, diag: &[f64]) -> Self {
        let mut op = Self::zeros(tag, diag.len());
        for (i, &d) in diag.iter().enumerate() {
            op.set(i, i, d);
        }
        op
    }

    /// Builds from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets<I>(tag: BasisTag, dim: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut op = Self::zeros(tag, dim);
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside {dim}x{dim}");
            *op.entries.entry((r, c)).or_insert(0.0) += v;
        }
        op.entries.retain(|_, v| *v != 0.0);
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.dim
    }

    pub fn cols(&self) -> usize {
        self.dim
    }

    pub fn tag(&self) -> BasisTag {
        self.tag
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries.get(&(row, col)).copied().unwrap_or(0.0)
    }

    /// Overwrites one entry; setting zero removes it.
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        assert!(
            row < self.dim && col < self.dim,
            "entry ({row}, {col}) outside {0}x{0}",
            self.dim
        );
        if value == 0.0 {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    /// Stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.entries.iter().map(|(&rc, &v)| (rc, v))
    }

    pub fn transpose(&self) -> Self {
        SparseOperator {
            dim: self.dim,
            tag: self.tag,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), &v)| ((c, r), v))
                .collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = Self::zeros(self.tag, self.dim);
        for (&rc, &v) in &self.entries {
            let w = v * factor;
            if w != 0.0 {
                out.entries.insert(rc, w);
            }
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.tag != other.tag {
            return Err(Error::Mismatch(format!(
                "operators on {:?} ({}x{}) and {:?} ({}x{})",
                self.tag, self.dim, self.dim, other.tag, other.dim, other.dim
            )));
        }
        Ok(())
    }

    /// `self + factor * other`.
    pub fn checked_add_scaled(&self, other: &Self, factor: f64) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&rc, &v) in &other.entries {
            *out.entries.entry(rc).or_insert(0.0) += factor * v;
        }
        out.entries.retain(|_, v| *v != 0.0);
        Ok(out)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.checked_add_scaled(other, 1.0)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add_scaled(other, -1.0)
    }

    /// Matrix product `self * other`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut other_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); other.dim];
        for (&(r, c), &v) in &other.entries {
            other_rows[r].push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (&(i, k), &a) in &self.entries {
            for &(j, b) in &other_rows[k] {
                *acc.entry((i, j)).or_insert(0.0) += a * b;
            }
        }
        acc.retain(|_, v| *v != 0.0);
        Ok(SparseOperator {
            dim: self.dim,
            tag: self.tag,
            entries: acc,
        })
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim, "vector length does not match operator");
        let mut y = vec![0.0; self.dim];
        for (&(r, c), &v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    pub fn apply_complex(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim, "vector length does not match operator");
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        for (&(r, c), &v) in &self.entries {
            y[r] += x[c] * v;
        }
        y
    }

    /// Column `col` as a dense vector.
    pub fn column(&self, col: usize) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        for (&(r, c), &v) in &self.entries {
            if c == col {
                y[r] = v;
            }
        }
        y
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|entry|` over entries whose row and column are both kept by
    /// `mask`.
    pub fn max_abs_masked(&self, mask: &[bool]) -> f64 {
        assert_eq!(mask.len(), self.dim, "mask length does not match operator");
        self.entries
            .iter()
            .filter(|(&(r, c), _)| mask[r] && mask[c])
            .fold(0.0, |m, (_, v)| m.max(v.abs()))
    }
}
