//! The linear code C_D of a defining set.
//!
//! Row i of the generator is the evaluation of the i-th power-basis message:
//! Tr(d g^i) in the univariate case; for bivariate sets the first m rows use
//! Tr_1^m(d_1 g^i) and the last k rows Tr_1^k(d_2 g^j). Columns follow the
//! defining set's order.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::defining::{Ambient, DefiningSet, Elements};
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::linalg::{FqMatrix, Subspace};

/// Default cap on the number of codewords any exhaustive pass may visit.
pub const DEFAULT_CODEWORD_BUDGET: u128 = 1 << 24;

#[derive(Clone, Debug)]
pub struct CodeInstance {
    set: DefiningSet,
    generator: FqMatrix,
    code_dim: usize,
    /// Indices of generator rows forming a basis of the code (greedy, in row order).
    basis_rows: Vec<usize>,
}

pub fn build_code(set: &DefiningSet) -> Result<CodeInstance> {
    if set.is_empty() {
        return Err(Error::param("defining set is empty"));
    }
    let q = set.ambient().q();
    let n = set.len();
    let rows: Vec<Vec<u8>> = match (set.ambient(), set.elements()) {
        (Ambient::Univariate(f), Elements::Univariate(ds)) => (0..f.degree())
            .map(|i| {
                let b = f.basis_element(i);
                ds.iter()
                    .map(|d| f.trace_unchecked(&f.mul_unchecked(d, &b)))
                    .collect()
            })
            .collect(),
        (Ambient::Bivariate(fm, fk), Elements::Bivariate(ds)) => {
            let first = eval_rows(fm, ds.iter().map(|(x, _)| x));
            let second = eval_rows(fk, ds.iter().map(|(_, y)| y));
            first.into_iter().chain(second).collect()
        }
        _ => {
            return Err(Error::Inconsistent(
                "element arity does not match ambient".into(),
            ))
        }
    };
    let generator = FqMatrix::from_rows(q, n, &rows)?;

    let mut basis_rows = Vec::new();
    let mut span = Subspace::zero(q, n);
    for (i, row) in rows.iter().enumerate() {
        if !span.contains(row)? {
            basis_rows.push(i);
            span = span.sum(&Subspace::span(q, n, std::slice::from_ref(row))?)?;
        }
    }
    Ok(CodeInstance {
        set: set.clone(),
        code_dim: basis_rows.len(),
        generator,
        basis_rows,
    })
}

fn eval_rows<'a>(
    f: &FieldContext,
    coords: impl Iterator<Item = &'a crate::field::FieldElement> + Clone,
) -> Vec<Vec<u8>> {
    (0..f.degree())
        .map(|i| {
            let b = f.basis_element(i);
            coords
                .clone()
                .map(|d| f.trace_unchecked(&f.mul_unchecked(d, &b)))
                .collect()
        })
        .collect()
}

impl CodeInstance {
    pub fn defining_set(&self) -> &DefiningSet {
        &self.set
    }

    pub fn q(&self) -> u8 {
        self.generator.q()
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn message_dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn code_dim(&self) -> usize {
        self.code_dim
    }

    pub fn generator(&self) -> &FqMatrix {
        &self.generator
    }

    /// Generator rows that form a basis of the code.
    pub fn basis_rows(&self) -> &[usize] {
        &self.basis_rows
    }

    pub fn basis_matrix(&self) -> FqMatrix {
        let rows: Vec<Vec<u8>> = self
            .basis_rows
            .iter()
            .map(|&i| self.generator.row(i).to_vec())
            .collect();
        FqMatrix::from_rows(self.q(), self.length(), &rows).expect("rows of the generator")
    }

    /// Messages whose codeword vanishes: {a : a^T G = 0}.
    pub fn kernel_space(&self) -> Subspace {
        self.generator.transpose().kernel()
    }

    /// q^code_dim, saturating.
    pub fn codeword_count(&self) -> u128 {
        (self.q() as u128).saturating_pow(self.code_dim as u32)
    }

    pub(crate) fn check_budget(&self, budget: u128, what: &str) -> Result<()> {
        let required = self.codeword_count();
        if required > budget {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                required,
                budget,
            });
        }
        Ok(())
    }

    /// Codeword for the code-basis coordinate vector whose base-q digits
    /// (least significant first) spell `index`.
    pub(crate) fn codeword_at(&self, basis: &FqMatrix, mut index: u128) -> Vec<u8> {
        let q = self.q();
        let mut coeffs = vec![0u8; self.code_dim];
        for c in coeffs.iter_mut() {
            *c = (index % q as u128) as u8;
            index /= q as u128;
        }
        let mut word = vec![0u32; self.length()];
        for (&c, row) in coeffs.iter().zip(basis.row_vectors()) {
            if c == 0 {
                continue;
            }
            for (w, &g) in word.iter_mut().zip(row) {
                *w += c as u32 * g as u32;
            }
        }
        word.into_iter().map(|w| (w % q as u32) as u8).collect()
    }

    pub fn weight_distribution(&self, budget: u128) -> Result<WeightDistribution> {
        self.check_budget(budget, "weight distribution")?;
        let basis = self.basis_matrix();
        let total = self.codeword_count();
        let chunks = total.clamp(1, 256) as u64;
        let counts = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = total * c as u128 / chunks as u128;
                let end = total * (c as u128 + 1) / chunks as u128;
                let mut local: BTreeMap<usize, u64> = BTreeMap::new();
                for idx in start..end {
                    let w = self
                        .codeword_at(&basis, idx)
                        .iter()
                        .filter(|&&x| x != 0)
                        .count();
                    *local.entry(w).or_default() += 1;
                }
                local
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (w, c) in b {
                    *a.entry(w).or_default() += c;
                }
                a
            });
        Ok(WeightDistribution { counts })
    }

    pub fn min_distance(&self, budget: u128) -> Result<usize> {
        if self.code_dim == 0 {
            return Err(Error::param("the zero code has no minimum distance"));
        }
        Ok(self
            .weight_distribution(budget)?
            .min_nonzero_weight()
            .expect("nonzero code has a nonzero codeword"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightDistribution {
    /// weight -> number of codewords
    pub counts: BTreeMap<usize, u64>,
}

impl WeightDistribution {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.counts.keys().copied().find(|&w| w > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defining::{class1_build, class2_build, class3_build, ThetaStrategy};

    #[test]
    fn reference_sized_codes() {
        let c =
            build_code(&class1_build(3, 3, 1, 2, &ThetaStrategy::FirstCosets).unwrap()).unwrap();
        assert_eq!((c.length(), c.code_dim()), (18, 3));
        let c = build_code(&class2_build(2, 2, 1, 2, 1).unwrap()).unwrap();
        assert_eq!((c.length(), c.code_dim()), (4, 3));
        assert_eq!(c.kernel_space().dim(), 1);
        let c = build_code(&class3_build(2).unwrap()).unwrap();
        assert_eq!((c.length(), c.code_dim()), (4, 4));
    }

    #[test]
    fn minimum_distances() {
        let c = build_code(&class2_build(3, 2, 1, 2, 1).unwrap()).unwrap();
        assert_eq!(c.min_distance(DEFAULT_CODEWORD_BUDGET).unwrap(), 18);
        let c = build_code(&class3_build(3).unwrap()).unwrap();
        assert_eq!(c.min_distance(DEFAULT_CODEWORD_BUDGET).unwrap(), 6);
    }

    #[test]
    fn simplex_like_code_has_constant_weight() {
        let f = FieldContext::new(2, 2).unwrap();
        let nonzero: Vec<_> = f.elements().skip(1).collect();
        let d = DefiningSet::custom_univariate("nonzero", &f, nonzero).unwrap();
        let c = build_code(&d).unwrap();
        assert_eq!(c.length(), 3);
        let wd = c.weight_distribution(DEFAULT_CODEWORD_BUDGET).unwrap();
        assert_eq!(wd.counts, BTreeMap::from([(0, 1), (2, 3)]));
    }

    #[test]
    fn budget_refusal_names_requirement() {
        let c = build_code(&class3_build(3).unwrap()).unwrap();
        let err = c.weight_distribution(10).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                what: "weight distribution".into(),
                required: 64,
                budget: 10
            }
        );
    }

    #[test]
    fn kernel_of_degenerate_sets() {
        let f = FieldContext::new(2, 4).unwrap();
        let sub = f.enumerate_subfield(2).unwrap();
        let d = DefiningSet::custom_univariate("subfield", &f, sub.clone()).unwrap();
        let k = build_code(&d).unwrap().kernel_space();
        assert_eq!(k.dim(), 2);
        // K is the trace-dual of F_4: elements with Tr_2^4(x) = 0
        for v in k.elements() {
            let x = f.element(v).unwrap();
            assert!(f.relative_trace(&x, 2).unwrap().is_zero());
        }
        let zero = DefiningSet::custom_univariate("zero", &f, vec![f.zero()]).unwrap();
        let c = build_code(&zero).unwrap();
        assert_eq!(c.kernel_space(), Subspace::full(2, 4));
        assert_eq!(c.code_dim(), 0);
        assert!(c.min_distance(DEFAULT_CODEWORD_BUDGET).is_err());
        let empty = DefiningSet::custom_univariate("empty", &f, vec![]).unwrap();
        assert!(build_code(&empty).is_err());
    }
}
