//! Closed-form weight hierarchies for the three defining-set families.

use crate::defining::{class2_params, ClassParams};
use crate::error::{Error, Result};
use crate::field::is_prime;

fn pow(q: u32, e: usize) -> i128 {
    (q as i128).pow(e as u32)
}

fn check_r(r: usize, max: usize) -> Result<()> {
    if r == 0 || r > max {
        return Err(Error::param(format!("r={r} outside 1..={max}")));
    }
    Ok(())
}

fn to_weight(v: i128) -> Result<u64> {
    u64::try_from(v).map_err(|_| Error::Inconsistent(format!("negative weight {v}")))
}

/// Class 1, length q^m - (h+1) q^k:
/// d_r = n - q^{m-r} + (h+1) q^{k-r} for r <= k, and n - q^{m-r} + 1 for k < r <= m.
pub fn theorem1_formula(q: u32, m: usize, k: usize, h: usize, r: usize) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if k == 0 || k >= m || !m.is_multiple_of(k) {
        return Err(Error::param(format!(
            "requires k | m and 1 <= k < m (k={k}, m={m})"
        )));
    }
    if h > q as usize - 1 {
        return Err(Error::FormulaUnavailable(format!(
            "h={h} exceeds q-1={}",
            q - 1
        )));
    }
    check_r(r, m)?;
    let h1 = h as i128 + 1;
    let n = pow(q, m) - h1 * pow(q, k);
    let d = if r <= k {
        n - pow(q, m - r) + h1 * pow(q, k - r)
    } else {
        n - pow(q, m - r) + 1
    };
    to_weight(d)
}

/// Class 2, length (q^m - q^s)(q^k - q^l), three pieces split at k-l and m+l.
pub fn theorem2_formula(q: u32, m: usize, s: usize, k: usize, l: usize, r: usize) -> Result<u64> {
    let p = class2_params(q, m, s, k, l)?;
    if p.exceptional {
        return Err(Error::FormulaUnavailable(
            "q^{m-s} <= q^{m+l-k-s} + 1: the code loses dimension (only q=m=k=2, s=l=1); use an oracle"
                .into(),
        ));
    }
    check_r(r, m + k)?;
    let n = (pow(q, m) - pow(q, s)) * (pow(q, k) - pow(q, l));
    let d = if r <= k - l {
        n - pow(q, m + k - r) + pow(q, m + l - r) + pow(q, k + s - r) - pow(q, s + l)
    } else if r <= m + l {
        n - pow(q, m + k - r) + pow(q, m + l - r)
    } else {
        n - pow(q, m + k - r) + 1
    };
    to_weight(d)
}

/// Class 3 (butterfly, q = 2), length 2^{2m-2}.
pub fn theorem3_formula(m: usize, r: usize) -> Result<u64> {
    if m < 2 {
        return Err(Error::param(format!(
            "butterfly sets need m >= 2 (got {m})"
        )));
    }
    check_r(r, 2 * m)?;
    let n = pow(2, 2 * m - 2);
    let d = if r <= m {
        n - pow(2, 2 * m - r - 2) - pow(2, m - 2)
    } else if r < 2 * m {
        n - pow(2, 2 * m - r - 1)
    } else {
        n
    };
    to_weight(d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub first_r: usize,
    pub last_r: usize,
    pub expression: &'static str,
}

/// A closed form bound to concrete parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormSpec {
    params: ClassParams,
    pieces: Vec<Piece>,
}

impl ClosedFormSpec {
    pub fn for_params(params: &ClassParams) -> Result<Self> {
        let piece = |first_r, last_r, expression| Piece {
            first_r,
            last_r,
            expression,
        };
        let pieces = match params {
            ClassParams::Class1(p) => {
                theorem1_formula(p.q, p.m, p.k, p.h, 1)?;
                vec![
                    piece(1, p.k, "n - q^(m-r) + (h+1) q^(k-r)"),
                    piece(p.k + 1, p.m, "n - q^(m-r) + 1"),
                ]
            }
            ClassParams::Class2(p) => {
                theorem2_formula(p.q, p.m, p.s, p.k, p.l, 1)?;
                vec![
                    piece(
                        1,
                        p.k - p.l,
                        "n - q^(m+k-r) + q^(m+l-r) + q^(k+s-r) - q^(s+l)",
                    ),
                    piece(p.k - p.l + 1, p.m + p.l, "n - q^(m+k-r) + q^(m+l-r)"),
                    piece(p.m + p.l + 1, p.m + p.k, "n - q^(m+k-r) + 1"),
                ]
            }
            ClassParams::Class3(p) => {
                if !p.pattern.has_closed_form() {
                    return Err(Error::FormulaUnavailable(format!(
                        "trace pattern {} changes the code dimension",
                        p.pattern
                    )));
                }
                theorem3_formula(p.m, 1)?;
                vec![
                    piece(1, p.m, "2^(2m-2) - 2^(2m-r-2) - 2^(m-2)"),
                    piece(p.m + 1, 2 * p.m - 1, "2^(2m-2) - 2^(2m-r-1)"),
                    piece(2 * p.m, 2 * p.m, "2^(2m-2)"),
                ]
            }
            ClassParams::Custom { label } => {
                return Err(Error::FormulaUnavailable(format!("custom set {label}")))
            }
        };
        Ok(ClosedFormSpec {
            params: params.clone(),
            pieces: pieces
                .into_iter()
                .filter(|p| p.first_r <= p.last_r)
                .collect(),
        })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn max_r(&self) -> usize {
        self.pieces.last().map_or(0, |p| p.last_r)
    }

    pub fn evaluate(&self, r: usize) -> Result<u64> {
        match &self.params {
            ClassParams::Class1(p) => theorem1_formula(p.q, p.m, p.k, p.h, r),
            ClassParams::Class2(p) => theorem2_formula(p.q, p.m, p.s, p.k, p.l, r),
            ClassParams::Class3(p) => theorem3_formula(p.m, r),
            ClassParams::Custom { .. } => unreachable!("rejected at construction"),
        }
    }

    pub fn hierarchy(&self) -> Result<Vec<u64>> {
        (1..=self.max_r()).map(|r| self.evaluate(r)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class1_values() {
        assert_eq!(theorem1_formula(3, 3, 1, 2, 1).unwrap(), 12);
        assert_eq!(theorem1_formula(3, 4, 2, 2, 2).unwrap(), 48);
        // 16 - 8 - 1 + 1
        assert_eq!(theorem1_formula(2, 4, 2, 1, 4).unwrap(), 8);
        assert!(theorem1_formula(3, 3, 1, 2, 4).is_err());
        assert!(theorem1_formula(3, 3, 1, 2, 0).is_err());
        assert!(matches!(
            theorem1_formula(2, 4, 2, 2, 1),
            Err(Error::FormulaUnavailable(_))
        ));
    }

    #[test]
    fn class2_values() {
        assert_eq!(theorem2_formula(2, 3, 1, 2, 1, 1).unwrap(), 4);
        assert_eq!(theorem2_formula(3, 2, 1, 2, 1, 3).unwrap(), 34);
        // 24 - 32 + 16 + 8 - 8
        assert_eq!(theorem2_formula(2, 4, 2, 2, 1, 1).unwrap(), 8);
        assert!(matches!(
            theorem2_formula(2, 2, 1, 2, 1, 1),
            Err(Error::FormulaUnavailable(_))
        ));
    }

    #[test]
    fn class3_values() {
        assert_eq!(theorem3_formula(3, 1).unwrap(), 6);
        assert_eq!(theorem3_formula(2, 4).unwrap(), 4);
        assert_eq!(theorem3_formula(3, 5).unwrap(), 15);
        assert!(theorem3_formula(3, 7).is_err());
    }

    #[test]
    fn pieces_cover_every_r_once() {
        use crate::defining::{class1_build, class2_build, class3_build, ThetaStrategy};
        let sets = [
            class1_build(3, 3, 1, 2, &ThetaStrategy::FirstCosets).unwrap(),
            class1_build(2, 6, 3, 1, &ThetaStrategy::FirstCosets).unwrap(),
            class2_build(2, 3, 1, 2, 1).unwrap(),
            class2_build(2, 4, 2, 2, 1).unwrap(),
            class3_build(3).unwrap(),
        ];
        for set in &sets {
            let spec = ClosedFormSpec::for_params(set.params()).unwrap();
            let mut next = 1;
            for p in spec.pieces() {
                assert_eq!(p.first_r, next);
                next = p.last_r + 1;
            }
            assert_eq!(next - 1, spec.max_r());
        }
    }
}
