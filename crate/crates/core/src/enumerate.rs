//! Exhaustive, duplicate-free enumeration of the r-dimensional subspaces of
//! F_q^N.
//!
//! Subspaces are produced as canonical RREF bases. Pivot-column sets are
//! visited in lexicographic order; within a pivot set the free entries (the
//! non-pivot positions to the right of each pivot, row-major) are counted as a
//! base-q integer with the first free entry least significant. Each pivot set
//! contributes a block of q^(#free) consecutive indices, so any index range can
//! be reached without walking the prefix. That is what makes chunked parallel
//! enumeration coordination-free.

use crate::error::{Error, Result};
use crate::linalg::{increment, FqMatrix, Subspace};

/// Number of r-dimensional subspaces of F_q^n (saturating at `u128::MAX`).
pub fn gaussian_binomial(n: usize, r: usize, q: u8) -> u128 {
    if r > n {
        return 0;
    }
    // q-Pascal: [n, r] = [n-1, r-1] + q^r [n-1, r]
    let mut row = vec![0u128; r + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=r.min(i)).rev() {
            let qj = (q as u128).saturating_pow(j as u32);
            row[j] = row[j - 1].saturating_add(qj.saturating_mul(row[j]));
        }
    }
    row[r]
}

/// Total number of subspaces of every dimension 1..=n.
pub fn total_subspaces(n: usize, q: u8) -> u128 {
    (1..=n).fold(0u128, |acc, r| {
        acc.saturating_add(gaussian_binomial(n, r, q))
    })
}

#[derive(Clone, Debug)]
pub struct SubspaceEnumeration {
    q: u8,
    n: usize,
    r: usize,
    total: u128,
}

pub fn enumerate_subspaces(n: usize, r: usize, q: u8) -> Result<SubspaceEnumeration> {
    if r > n {
        return Err(Error::param(format!(
            "subspace dimension {r} exceeds ambient dimension {n}"
        )));
    }
    Ok(SubspaceEnumeration {
        q,
        n,
        r,
        total: gaussian_binomial(n, r, q),
    })
}

impl SubspaceEnumeration {
    pub fn len(&self) -> u128 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn iter(&self) -> SubspaceIter {
        self.range(0, self.total)
    }

    /// Index bounds `[start, end)` of chunk `index` out of `count`.
    pub fn chunk_bounds(&self, index: usize, count: usize) -> (u128, u128) {
        assert!(count > 0 && index < count, "bad chunk {index}/{count}");
        let t = self.total;
        let start = t / count as u128 * index as u128 + (t % count as u128).min(index as u128);
        let len = t / count as u128 + u128::from((index as u128) < t % count as u128);
        (start, start + len)
    }

    pub fn chunk(&self, index: usize, count: usize) -> SubspaceIter {
        let (s, e) = self.chunk_bounds(index, count);
        self.range(s, e)
    }

    /// Subspaces with global indices in `[start, end)`.
    pub fn range(&self, start: u128, end: u128) -> SubspaceIter {
        let end = end.min(self.total);
        let mut it = SubspaceIter {
            q: self.q,
            n: self.n,
            pivots: (0..self.r).collect(),
            free: Vec::new(),
            digits: Vec::new(),
            pos: start,
            end,
        };
        if start >= end {
            return it;
        }
        // Skip whole pivot-set blocks until `start` falls inside one.
        let mut acc = 0u128;
        loop {
            it.free = free_positions(&it.pivots, self.n);
            let block = (self.q as u128).pow(it.free.len() as u32);
            if start < acc + block {
                let mut off = start - acc;
                it.digits = (0..it.free.len())
                    .map(|_| {
                        let d = (off % self.q as u128) as u8;
                        off /= self.q as u128;
                        d
                    })
                    .collect();
                break;
            }
            acc += block;
            let advanced = next_combination(&mut it.pivots, self.n);
            debug_assert!(advanced, "start index inside total");
        }
        it
    }
}

pub struct SubspaceIter {
    q: u8,
    n: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    digits: Vec<u8>,
    pos: u128,
    end: u128,
}

impl SubspaceIter {
    fn current(&self) -> Subspace {
        let r = self.pivots.len();
        let mut data = vec![0u8; r * self.n];
        for (i, &p) in self.pivots.iter().enumerate() {
            data[i * self.n + p] = 1;
        }
        for (&(i, c), &d) in self.free.iter().zip(&self.digits) {
            data[i * self.n + c] = d;
        }
        let m = FqMatrix::new(self.q, r, self.n, data).expect("entries below q");
        Subspace::from_rref_unchecked(m)
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.pos >= self.end {
            return None;
        }
        let s = self.current();
        self.pos += 1;
        if self.pos < self.end && !increment(&mut self.digits, self.q) {
            next_combination(&mut self.pivots, self.n);
            self.free = free_positions(&self.pivots, self.n);
            self.digits = vec![0; self.free.len()];
        }
        Some(s)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = (self.end - self.pos).min(usize::MAX as u128) as usize;
        (rem, Some(rem))
    }
}

fn free_positions(pivots: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut free = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for c in p + 1..n {
            if !pivots.contains(&c) {
                free.push((i, c));
            }
        }
    }
    free
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let r = c.len();
    for i in (0..r).rev() {
        if c[i] < n - r + i {
            c[i] += 1;
            for j in i + 1..r {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binary_lines() {
        let e = enumerate_subspaces(2, 1, 2).unwrap();
        let subs: Vec<String> = e.iter().map(|s| s.to_string()).collect();
        assert_eq!(subs, vec!["10", "11", "01"]);
    }

    #[test]
    fn planes_in_f2_4() {
        assert_eq!(enumerate_subspaces(4, 2, 2).unwrap().iter().count(), 35);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
    }

    #[test]
    fn zero_dimensional() {
        let e = enumerate_subspaces(5, 0, 3).unwrap();
        let all: Vec<Subspace> = e.iter().collect();
        assert_eq!(all, vec![Subspace::zero(3, 5)]);
    }

    #[test]
    fn out_of_range_dimension() {
        assert!(enumerate_subspaces(3, 4, 2).is_err());
    }

    #[test]
    fn reference_values() {
        assert_eq!(gaussian_binomial(4, 2, 3), 130);
        assert_eq!(gaussian_binomial(8, 4, 2), 200787);
        assert_eq!(total_subspaces(8, 2), 417198);
    }

    #[test]
    fn range_matches_skip() {
        let e = enumerate_subspaces(5, 2, 3).unwrap();
        let all: Vec<Subspace> = e.iter().collect();
        for start in [0u128, 1, 7, 40, 100, e.len() - 1] {
            let got: Vec<Subspace> = e.range(start, start + 5).collect();
            let want: Vec<Subspace> = all.iter().skip(start as usize).take(5).cloned().collect();
            assert_eq!(got, want, "start {start}");
        }
    }
}
