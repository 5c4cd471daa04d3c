//! Batch verification over every valid parameter tuple under size ceilings.

use serde::Serialize;

use crate::defining::{ClassRequest, TracePattern};
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::ghw::{verify_hierarchy, HierarchyReport, Status, VerifyOptions};

/// Default per-method work cap for sweep points.
pub const DEFAULT_SWEEP_WORK: u128 = 200_000_000;

/// Bounds on the swept tuples. `max_ambient` caps the flattened ambient
/// dimension: m for class 1, m+k for class 2, 2m for class 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SweepCeilings {
    pub max_q: u32,
    pub max_ambient: usize,
    /// Replaces the work budget of non-forced limits; points above it are
    /// reported formula-only.
    pub max_work: u128,
}

impl Default for SweepCeilings {
    fn default() -> Self {
        SweepCeilings {
            max_q: 3,
            max_ambient: 8,
            max_work: DEFAULT_SWEEP_WORK,
        }
    }
}

fn proper_divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..n).filter(move |d| n.is_multiple_of(*d))
}

/// All requests under the ceilings, in a fixed order.
pub fn sweep_requests(ceilings: &SweepCeilings) -> Vec<ClassRequest> {
    let primes: Vec<u32> = (2..=ceilings.max_q).filter(|&q| is_prime(q)).collect();
    let top = ceilings.max_ambient;
    let mut out = Vec::new();
    for &q in &primes {
        for m in 2..=top {
            for k in proper_divisors(m) {
                for h in 0..q as usize {
                    // q^m = (h+1) q^k leaves nothing
                    if (q as usize).pow(m as u32) <= (h + 1) * (q as usize).pow(k as u32) {
                        continue;
                    }
                    out.push(ClassRequest::Class1 {
                        q,
                        m,
                        k,
                        h,
                        thetas: None,
                    });
                }
            }
        }
    }
    for &q in &primes {
        for m in 2..=top {
            for k in 2..=top.saturating_sub(m) {
                for s in proper_divisors(m) {
                    for l in proper_divisors(k) {
                        if k - l <= m - s {
                            out.push(ClassRequest::Class2 { q, m, s, k, l });
                        }
                    }
                }
            }
        }
    }
    if primes.contains(&2) {
        for m in 2..=top / 2 {
            for pattern in TracePattern::ALL {
                out.push(ClassRequest::Class3 { m, pattern });
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub incomplete: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub ceilings: SweepCeilings,
    pub points: Vec<HierarchyReport>,
    pub summary: SweepSummary,
}

impl SweepReport {
    pub fn failed(&self) -> bool {
        self.summary.failed > 0
    }
}

/// Verifies each point in turn. Points over budget are kept with status
/// `incomplete` and the refusal recorded.
pub fn run_sweep(ceilings: &SweepCeilings, opts: &VerifyOptions) -> Result<SweepReport> {
    if ceilings.max_q < 2 || ceilings.max_ambient < 2 {
        return Err(Error::param(
            "sweep ceilings need max_q >= 2 and max_ambient >= 2",
        ));
    }
    let mut opts = opts.clone();
    if opts.limits.work_budget.is_some() {
        opts.limits.work_budget = Some(ceilings.max_work);
    }
    let mut points = Vec::new();
    let mut summary = SweepSummary::default();
    for request in sweep_requests(ceilings) {
        let set = request.build()?;
        let report = verify_hierarchy(&set, &opts)?;
        summary.total += 1;
        match report.status {
            Status::Passed => summary.passed += 1,
            Status::Failed => summary.failed += 1,
            Status::Incomplete => summary.incomplete += 1,
        }
        points.push(report);
    }
    Ok(SweepReport {
        ceilings: *ceilings,
        points,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn requests_respect_ceilings() {
        let c = SweepCeilings {
            max_q: 2,
            max_ambient: 4,
            ..SweepCeilings::default()
        };
        let reqs = sweep_requests(&c);
        for r in &reqs {
            match r {
                ClassRequest::Class1 { q, m, .. } => assert!(*q == 2 && *m <= 4),
                ClassRequest::Class2 { m, k, .. } => assert!(m + k <= 4),
                ClassRequest::Class3 { m, .. } => assert!(2 * m <= 4),
            }
            r.build().unwrap();
        }
        assert!(reqs.contains(&ClassRequest::Class2 {
            q: 2,
            m: 2,
            s: 1,
            k: 2,
            l: 1
        }));
    }
}
