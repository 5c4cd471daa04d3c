//! Character-sum view of the butterfly sets.
//!
//! For an F_2-subspace H of F_{2^m}^2 (flattened, alpha's coordinates first):
//!
//! |D ∩ H^⊥| = (2^{2m} + 2^m S(H) - 2^{2m} [ (1,1) ∈ H ]) / 2^{r+2},
//! S(H) = sum_{(a,b) ∈ H} ((-1)^{Tr(b(a+1))} - (-1)^{Tr(a(b+1))}),
//!
//! where D is the (0,1) butterfly set. Nothing here touches duals or D.

use super::dual::pack_bits;
use crate::defining::{butterfly_pattern, TracePattern};
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::linalg::Subspace;

/// Trace patterns of every point of F_{2^m}^2, indexed by the packed
/// flattened coordinate vector.
pub struct ButterflyTable {
    m: usize,
    /// butterfly_pattern(a, b) = (Tr(a(b+1)), Tr(b(a+1)))
    patterns: Vec<TracePattern>,
}

/// Per-subspace sums gathered in one pass over H.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubspaceSums {
    pub dim: usize,
    /// S(H)
    pub difference_sum: i64,
    /// #{(a,b) ∈ H : (Tr(b(a+1)), Tr(a(b+1))) = (0,1)}
    pub pattern01: usize,
    pub contains_one_one: bool,
}

impl ButterflyTable {
    pub fn new(m: usize) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::param(format!(
                "butterfly table needs 2 <= m <= 16 (got {m})"
            )));
        }
        let ctx = FieldContext::new(2, m)?;
        let all: Vec<_> = ctx.elements().collect();
        let mut patterns = vec![TracePattern(0, 0); 1 << (2 * m)];
        for b in &all {
            for a in &all {
                let idx = a.index() as usize | ((b.index() as usize) << m);
                patterns[idx] = butterfly_pattern(&ctx, a, b);
            }
        }
        Ok(ButterflyTable { m, patterns })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sums(&self, h: &Subspace) -> Result<SubspaceSums> {
        if h.q() != 2 || h.ambient_dim() != 2 * self.m {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.m,
                found: h.ambient_dim(),
            });
        }
        let rows: Vec<u64> = h.basis().row_vectors().map(pack_bits).collect();
        let one_one = 1u64 | (1u64 << self.m);
        let mut sums = SubspaceSums {
            dim: rows.len(),
            difference_sum: 0,
            pattern01: 0,
            contains_one_one: false,
        };
        // Gray-code walk over all 2^r elements
        let mut v = 0u64;
        for step in 0u64..(1u64 << rows.len()) {
            if step > 0 {
                v ^= rows[step.trailing_zeros() as usize];
            }
            let TracePattern(ta, tb) = self.patterns[v as usize];
            // (-1)^{Tr(b(a+1))} - (-1)^{Tr(a(b+1))}
            sums.difference_sum += sign(tb) - sign(ta);
            if tb == 0 && ta == 1 {
                sums.pattern01 += 1;
            }
            if v == one_one {
                sums.contains_one_one = true;
            }
        }
        Ok(sums)
    }

    /// The character-sum expression for |D ∩ H^⊥|.
    pub fn charsum(&self, h: &Subspace) -> Result<i64> {
        let s = self.sums(h)?;
        let full = 1i64 << (2 * self.m);
        let numerator =
            full + (1i64 << self.m) * s.difference_sum - if s.contains_one_one { full } else { 0 };
        let denom = 1i64 << (s.dim + 2);
        if numerator % denom != 0 {
            return Err(Error::Inconsistent(format!(
                "character sum {numerator} not divisible by {denom} for H = {h}"
            )));
        }
        Ok(numerator / denom)
    }
}

fn sign(bit: u8) -> i64 {
    if bit == 0 {
        1
    } else {
        -1
    }
}

/// One-shot form of [`ButterflyTable::charsum`].
pub fn butterfly_charsum_intersection(h: &Subspace, m: usize) -> Result<i64> {
    ButterflyTable::new(m)?.charsum(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_subspace_gives_set_size() {
        for m in 2..=4 {
            let v = butterfly_charsum_intersection(&Subspace::zero(2, 2 * m), m).unwrap();
            assert_eq!(v, 1 << (2 * m - 2));
        }
    }

    #[test]
    fn full_space_contains_one_one() {
        let t = ButterflyTable::new(2).unwrap();
        let s = t.sums(&Subspace::full(2, 4)).unwrap();
        assert!(s.contains_one_one);
        assert_eq!(s.difference_sum, 0);
        assert_eq!(t.charsum(&Subspace::full(2, 4)).unwrap(), 0);
    }

    #[test]
    fn rejects_wrong_ambient() {
        let t = ButterflyTable::new(3).unwrap();
        assert!(t.sums(&Subspace::full(2, 4)).is_err());
    }
}
