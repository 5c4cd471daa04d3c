//! Exhaustive checks of the inequalities behind the closed forms. A violation
//! means the implementation is wrong somewhere, so each one is reported with
//! the offending subspace.

use rayon::prelude::*;
use serde::Serialize;

use super::butterfly::ButterflyTable;
use super::dual::DualSearch;
use super::Limits;
use crate::defining::{class1_lemma_witness, ClassParams, DefiningSet, TracePattern};
use crate::enumerate::{enumerate_subspaces, total_subspaces};
use crate::error::Result;
use crate::linalg::Subspace;

const MAX_REPORTED: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub name: String,
    pub checked: u128,
    pub violations: Vec<String>,
    pub passed: bool,
}

impl LemmaCheck {
    fn new(name: &str, checked: u128, violations: Vec<String>) -> Self {
        LemmaCheck {
            name: name.to_string(),
            checked,
            passed: violations.is_empty(),
            violations: violations.into_iter().take(MAX_REPORTED).collect(),
        }
    }
}

/// Runs every check that applies to the set's family.
pub fn lemma_checks(set: &DefiningSet, limits: &Limits) -> Result<Vec<LemmaCheck>> {
    match set.params() {
        ClassParams::Class1(_) => {
            let witness = class1_lemma_witness(set)?;
            let violations = match witness {
                Some(_) => vec![],
                None => vec!["no x with Tr_k^m(x) = 0 and Tr(theta_i x) != 0 for all i".into()],
            };
            Ok(vec![LemmaCheck::new(
                "theta-avoiding trace witness",
                1,
                violations,
            )])
        }
        ClassParams::Class2(p) => {
            let n = set.ambient().dim();
            let q = set.ambient().q();
            limits.check_work(
                total_subspaces(n, q).saturating_mul(set.len() as u128),
                "intersection-bound check",
            )?;
            let search = DualSearch::new(set, Subspace::zero(q, n))?;
            let qq = p.q as i128;
            let mut checked = 0;
            let mut violations = Vec::new();
            for r in 1..=n {
                let floor = if r <= p.m + p.l {
                    qq.pow((p.m + p.l - r) as u32)
                } else {
                    1
                };
                let bound = qq.pow((p.m + p.k - r) as u32) - floor;
                let space = enumerate_subspaces(n, r, q)?;
                checked += space.len();
                violations.extend(for_all_subspaces(n, r, q, |h| {
                    let c = search.count(h) as i128;
                    (c > bound).then(|| format!("r={r} H={h}: |D∩H^⊥|={c} > {bound}"))
                })?);
            }
            Ok(vec![LemmaCheck::new(
                "bivariate intersection bound",
                checked,
                violations,
            )])
        }
        ClassParams::Class3(p) if p.pattern == TracePattern::DEFAULT => {
            butterfly_checks(set, p.m, limits)
        }
        _ => Ok(vec![]),
    }
}

fn butterfly_checks(set: &DefiningSet, m: usize, limits: &Limits) -> Result<Vec<LemmaCheck>> {
    let n = 2 * m;
    let total = total_subspaces(n, 2) + 1;
    limits.check_work(total.saturating_mul(set.len() as u128), "butterfly checks")?;
    let table = ButterflyTable::new(m)?;
    let search = DualSearch::new(set, Subspace::zero(2, n))?;
    let bound_s = 1i64 << m;
    let mut pattern = Vec::new();
    let mut range = Vec::new();
    let mut charsum = Vec::new();
    for r in 0..=n {
        let found = for_all_subspaces(n, r, 2, |h| {
            let s = table.sums(h).expect("ambient matches");
            let cs = table.charsum(h);
            let direct = search.count(h) as i64;
            let mut out = Vec::new();
            if r >= 1 && s.pattern01 > 1usize << (r - 1) {
                out.push((
                    0,
                    format!(
                        "r={r} H={h}: {} points with pattern (0,1) > 2^(r-1)",
                        s.pattern01
                    ),
                ));
            }
            if s.difference_sum.abs() > bound_s {
                out.push((
                    1,
                    format!(
                        "r={r} H={h}: difference sum {} outside ±2^m",
                        s.difference_sum
                    ),
                ));
            }
            if s.contains_one_one && s.difference_sum != 0 {
                out.push((
                    1,
                    format!(
                        "r={r} H={h}: contains (1,1) but difference sum is {}",
                        s.difference_sum
                    ),
                ));
            }
            match cs {
                Ok(v) if v == direct => {}
                Ok(v) => out.push((
                    2,
                    format!("r={r} H={h}: character sum {v} != direct count {direct}"),
                )),
                Err(e) => out.push((2, e.to_string())),
            }
            (!out.is_empty()).then_some(out)
        })?;
        for (kind, msg) in found.into_iter().flatten() {
            match kind {
                0 => pattern.push(msg),
                1 => range.push(msg),
                _ => charsum.push(msg),
            }
        }
    }
    Ok(vec![
        LemmaCheck::new("pattern-(0,1) count bound", total, pattern),
        LemmaCheck::new("difference-sum range", total, range),
        LemmaCheck::new("character-sum identity", total, charsum),
    ])
}

/// Applies `f` to every r-dimensional subspace in parallel, collecting the
/// `Some` results in enumeration order.
fn for_all_subspaces<T: Send>(
    n: usize,
    r: usize,
    q: u8,
    f: impl Fn(&Subspace) -> Option<T> + Sync,
) -> Result<Vec<T>> {
    let space = enumerate_subspaces(n, r, q)?;
    let chunks = super::chunk_count(space.len());
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            space
                .chunk(c, chunks)
                .filter_map(|h| f(&h))
                .collect::<Vec<T>>()
        })
        .flatten_iter()
        .collect())
}
