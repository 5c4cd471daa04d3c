use rayon::prelude::*;

use super::{chunk_count, Limits, OracleResult};
use crate::code::CodeInstance;
use crate::enumerate::{enumerate_subspaces, gaussian_binomial};
use crate::error::{Error, Result};
use crate::linalg::Subspace;

/// Exhaustive minimum-support search over the subcodes of a code.
///
/// Every codeword's support is tabulated as a bitset, indexed by its
/// coordinates in the code basis. The support of a subcode is the union of
/// the supports of its basis vectors.
pub struct SupportSearch {
    q: u8,
    code_dim: usize,
    message_dim: usize,
    length: usize,
    words: usize,
    basis_rows: Vec<usize>,
    supports: Vec<u64>,
}

impl SupportSearch {
    pub fn new(code: &CodeInstance, limits: &Limits) -> Result<Self> {
        code.check_budget(limits.codeword_budget, "support oracle")?;
        let q = code.q();
        let length = code.length();
        let words = length.div_ceil(64);
        let basis = code.basis_matrix();
        let total = code.codeword_count() as usize;
        let supports: Vec<u64> = (0..total)
            .into_par_iter()
            .flat_map_iter(|idx| {
                let word = code.codeword_at(&basis, idx as u128);
                let mut bits = vec![0u64; words];
                for (j, &c) in word.iter().enumerate() {
                    if c != 0 {
                        bits[j / 64] |= 1 << (j % 64);
                    }
                }
                bits
            })
            .collect();
        Ok(SupportSearch {
            q,
            code_dim: code.code_dim(),
            message_dim: code.message_dim(),
            length,
            words,
            basis_rows: code.basis_rows().to_vec(),
            supports,
        })
    }

    pub fn code_dim(&self) -> usize {
        self.code_dim
    }

    fn index_of(&self, v: &[u8]) -> usize {
        v.iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.q as usize + c as usize)
    }

    /// |supp| of the subcode spanned by the given code-basis coordinate vectors.
    pub fn support_size(&self, coords: &Subspace) -> usize {
        let mut acc = vec![0u64; self.words];
        for row in coords.basis().row_vectors() {
            let base = self.index_of(row) * self.words;
            for (a, &s) in acc.iter_mut().zip(&self.supports[base..base + self.words]) {
                *a |= s;
            }
        }
        acc.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn work(&self, r: usize) -> u128 {
        gaussian_binomial(self.code_dim, r, self.q).saturating_mul(self.length as u128)
    }

    pub fn solve(&self, r: usize, limits: &Limits) -> Result<OracleResult> {
        if r == 0 || r > self.code_dim {
            return Err(Error::param(format!(
                "r={r} outside 1..={} for the support oracle",
                self.code_dim
            )));
        }
        limits.check_work(self.work(r), "support oracle")?;
        let space = enumerate_subspaces(self.code_dim, r, self.q)?;
        let chunks = chunk_count(space.len());
        let best = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let (start, _) = space.chunk_bounds(c, chunks);
                let mut best: Option<(usize, u128, Subspace)> = None;
                for (i, h) in space.chunk(c, chunks).enumerate() {
                    let size = self.support_size(&h);
                    if best.as_ref().is_none_or(|b| size < b.0) {
                        best = Some((size, start + i as u128, h));
                    }
                }
                best
            })
            .reduce(
                || None,
                |a, b| match (a, b) {
                    (None, x) | (x, None) => x,
                    (Some(x), Some(y)) => {
                        if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) {
                            Some(y)
                        } else {
                            Some(x)
                        }
                    }
                },
            )
            .expect("at least one subspace");
        Ok(OracleResult {
            r,
            value: best.0,
            witness: self.lift(&best.2),
            examined: space.len(),
        })
    }

    /// Code-basis coordinates -> message space (selected generator rows).
    fn lift(&self, coords: &Subspace) -> Subspace {
        let rows: Vec<Vec<u8>> = coords
            .basis()
            .row_vectors()
            .map(|row| {
                let mut v = vec![0u8; self.message_dim];
                for (&c, &i) in row.iter().zip(&self.basis_rows) {
                    v[i] = c;
                }
                v
            })
            .collect();
        Subspace::span(self.q, self.message_dim, &rows).expect("well-formed rows")
    }
}
