//! Generalized Hamming weights of defining-set codes, three ways: directly
//! from subcode supports, from the dual-intersection characterization
//! d_r = n - max |D ∩ H^⊥|, and from closed forms. Plus exhaustive checks of
//! the supporting inequalities and an orchestrator that reconciles them.

mod butterfly;
mod dual;
mod formula;
mod lemmas;
mod report;
mod support;

pub use butterfly::{butterfly_charsum_intersection, ButterflyTable};
pub use dual::DualSearch;
pub use formula::{theorem1_formula, theorem2_formula, theorem3_formula, ClosedFormSpec, Piece};
pub use lemmas::{lemma_checks, LemmaCheck};
pub use report::{
    code_report, verify_hierarchy, Checks, CodeReport, HierarchyReport, HierarchyRow, Status,
    VerifyOptions,
};
pub use support::SupportSearch;

use serde::Serialize;

use crate::code::{CodeInstance, DEFAULT_CODEWORD_BUDGET};
use crate::defining::DefiningSet;
use crate::error::{Error, Result};
use crate::linalg::Subspace;

/// Dual-oracle cost above which callers must opt in explicitly.
pub const DEFAULT_WORK_BUDGET: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Support,
    Dual,
    Formula,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Support, Method::Dual, Method::Formula];

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "support" => Ok(Method::Support),
            "dual" => Ok(Method::Dual),
            "formula" => Ok(Method::Formula),
            other => Err(Error::Parse(format!("method \"{other}\""))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Support => "support",
            Method::Dual => "dual",
            Method::Formula => "formula",
        }
    }
}

/// Caps on exhaustive work.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of codewords (q^dim) a pass may enumerate.
    pub codeword_budget: u128,
    /// Maximum subspace-element tests; `None` means forced (unbounded).
    pub work_budget: Option<u128>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            codeword_budget: DEFAULT_CODEWORD_BUDGET,
            work_budget: Some(DEFAULT_WORK_BUDGET),
        }
    }
}

impl Limits {
    pub fn forced() -> Self {
        Limits {
            work_budget: None,
            ..Limits::default()
        }
    }

    pub(crate) fn check_work(&self, required: u128, what: &str) -> Result<()> {
        match self.work_budget {
            Some(budget) if required > budget => Err(Error::BudgetExceeded {
                what: what.to_string(),
                required,
                budget,
            }),
            _ => Ok(()),
        }
    }
}

/// Optimum of one oracle at one r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub r: usize,
    pub value: usize,
    /// First optimal subspace in enumeration order (a message-space subspace).
    pub witness: Subspace,
    pub examined: u128,
}

/// d_r by minimizing subcode support over all r-dimensional subcodes.
pub fn ghw_support_oracle(code: &CodeInstance, r: usize, limits: &Limits) -> Result<OracleResult> {
    SupportSearch::new(code, limits)?.solve(r, limits)
}

/// d_r = n - max{|D ∩ H^⊥| : dim H = r, H ∩ K = 0}.
pub fn ghw_dual_oracle(
    set: &DefiningSet,
    kernel: &Subspace,
    r: usize,
    limits: &Limits,
) -> Result<OracleResult> {
    DualSearch::new(set, kernel.clone())?.solve(r, limits)
}

/// Number of chunks to split `total` items into for a parallel reduction.
pub(crate) fn chunk_count(total: u128) -> usize {
    (total / 256).clamp(1, 4096) as usize
}
