use rayon::prelude::*;

use super::{chunk_count, Limits, OracleResult};
use crate::defining::DefiningSet;
use crate::enumerate::{enumerate_subspaces, gaussian_binomial};
use crate::error::{Error, Result};
use crate::linalg::{dot, Subspace};

/// Precomputed state for counting |D ∩ H^⊥| over many H.
///
/// d lies in H^⊥ = ker(B G) exactly when B (G d) = 0, so each element of D is
/// stored as G d and tested against H's canonical basis B.
pub struct DualSearch {
    q: u8,
    ambient: usize,
    len: usize,
    kernel: Subspace,
    targets: Targets,
}

enum Targets {
    /// q = 2, ambient <= 64: bit i holds coordinate i.
    Binary(Vec<u64>),
    General(Vec<Vec<u8>>),
}

impl DualSearch {
    pub fn new(set: &DefiningSet, kernel: Subspace) -> Result<Self> {
        let ambient = set.ambient().dim();
        if kernel.ambient_dim() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: kernel.ambient_dim(),
            });
        }
        let q = set.ambient().q();
        let gram = set.ambient().trace_gram();
        let images: Vec<Vec<u8>> = set
            .flattened()
            .iter()
            .map(|d| gram.matrix().mul_vec(d).expect("ambient-sized vector"))
            .collect();
        let targets = if q == 2 && ambient <= 64 {
            Targets::Binary(images.iter().map(|v| pack_bits(v)).collect())
        } else {
            Targets::General(images)
        };
        Ok(DualSearch {
            q,
            ambient,
            len: set.len(),
            kernel,
            targets,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn set_len(&self) -> usize {
        self.len
    }

    /// Largest r the oracle is defined for: N - dim K.
    pub fn max_r(&self) -> usize {
        self.ambient - self.kernel.dim()
    }

    /// |D ∩ H^⊥|.
    pub fn count(&self, h: &Subspace) -> usize {
        debug_assert_eq!(h.ambient_dim(), self.ambient);
        let basis = h.basis();
        match &self.targets {
            Targets::Binary(ts) => {
                let rows: Vec<u64> = basis.row_vectors().map(pack_bits).collect();
                ts.iter()
                    .filter(|&&t| rows.iter().all(|&b| (b & t).count_ones() % 2 == 0))
                    .count()
            }
            Targets::General(ts) => ts
                .iter()
                .filter(|t| basis.row_vectors().all(|b| dot(b, t, self.q) == 0))
                .count(),
        }
    }

    /// Work (subspace-element tests) needed to solve dimension r.
    pub fn work(&self, r: usize) -> u128 {
        gaussian_binomial(self.ambient, r, self.q).saturating_mul(self.len as u128)
    }

    pub fn solve(&self, r: usize, limits: &Limits) -> Result<OracleResult> {
        if r == 0 || r > self.max_r() {
            return Err(Error::param(format!(
                "r={r} outside 1..={} for the dual oracle",
                self.max_r()
            )));
        }
        limits.check_work(self.work(r), "dual oracle")?;
        let space = enumerate_subspaces(self.ambient, r, self.q)?;
        let chunks = chunk_count(space.len());
        let needs_filter = self.kernel.dim() > 0;
        let best = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let (start, _) = space.chunk_bounds(c, chunks);
                let mut best: Option<(usize, u128, Subspace)> = None;
                for (i, h) in space.chunk(c, chunks).enumerate() {
                    if needs_filter && h.intersect(&self.kernel).expect("same ambient").dim() > 0 {
                        continue;
                    }
                    let count = self.count(&h);
                    if best.as_ref().is_none_or(|b| count > b.0) {
                        best = Some((count, start + i as u128, h));
                    }
                }
                best
            })
            .reduce(|| None, pick_max);
        let (count, _, witness) =
            best.ok_or_else(|| Error::Inconsistent(format!("no admissible subspace at r={r}")))?;
        Ok(OracleResult {
            r,
            value: self.len - count,
            witness,
            examined: space.len(),
        })
    }
}

/// Higher count wins; ties go to the earlier enumeration index.
fn pick_max(
    a: Option<(usize, u128, Subspace)>,
    b: Option<(usize, u128, Subspace)>,
) -> Option<(usize, u128, Subspace)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                Some(y)
            } else {
                Some(x)
            }
        }
    }
}

pub(crate) fn pack_bits(v: &[u8]) -> u64 {
    v.iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | ((b as u64 & 1) << i))
}
