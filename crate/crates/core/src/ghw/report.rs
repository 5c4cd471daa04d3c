use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use super::dual::DualSearch;
use super::formula::ClosedFormSpec;
use super::lemmas::{lemma_checks, LemmaCheck};
use super::support::SupportSearch;
use super::{Limits, Method, OracleResult};
use crate::code::{build_code, WeightDistribution};
use crate::defining::{ClassParams, DefiningSet, TracePattern};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub methods: Vec<Method>,
    pub lemma_checks: bool,
    pub limits: Limits,
    /// Omit timings and timestamps so output is byte-stable.
    pub deterministic: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            methods: Method::ALL.to_vec(),
            lemma_checks: true,
            limits: Limits::default(),
            deterministic: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Passed,
    /// Some requested method was refused by a budget; everything that ran agreed.
    Incomplete,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HierarchyRow {
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_support: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_dual: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_formula: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub agree: bool,
}

impl HierarchyRow {
    pub fn values(&self) -> Vec<usize> {
        [self.d_support, self.d_dual, self.d_formula]
            .into_iter()
            .flatten()
            .collect()
    }

    /// The agreed value, if any method produced one.
    pub fn value(&self) -> Option<usize> {
        self.values().first().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub monotone: bool,
    pub singleton: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub top_weight: Option<bool>,
    pub lemma_checks: Vec<LemmaCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyReport {
    pub class: String,
    pub params: BTreeMap<String, String>,
    pub n: usize,
    pub dim: usize,
    pub message_dim: usize,
    pub kernel_dim: usize,
    pub rows: Vec<HierarchyRow>,
    pub checks: Checks,
    pub refused: Vec<String>,
    pub notes: Vec<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
}

impl HierarchyReport {
    /// Hierarchy from whichever method filled each row.
    pub fn hierarchy(&self) -> Vec<usize> {
        self.rows.iter().filter_map(HierarchyRow::value).collect()
    }

    pub fn column(&self, method: Method) -> Option<Vec<usize>> {
        self.rows
            .iter()
            .map(|row| match method {
                Method::Support => row.d_support,
                Method::Dual => row.d_dual,
                Method::Formula => row.d_formula,
            })
            .collect()
    }
}

fn budget_note(e: &Error) -> Option<String> {
    matches!(e, Error::BudgetExceeded { .. }).then(|| e.to_string())
}

/// Computes the hierarchy of C_D with each requested method and cross-checks
/// the results.
pub fn verify_hierarchy(set: &DefiningSet, opts: &VerifyOptions) -> Result<HierarchyReport> {
    if opts.methods.is_empty() {
        return Err(Error::param("at least one method is required"));
    }
    let code = build_code(set)?;
    let kernel = code.kernel_space();
    let dim = code.code_dim();
    let n = code.length();
    let mut notes = Vec::new();
    let mut refused = Vec::new();
    let mut timings = BTreeMap::new();
    let mut columns: BTreeMap<Method, Vec<OracleResult>> = BTreeMap::new();
    let mut formula_values: Option<Vec<usize>> = None;

    notes.extend(parameter_notes(set.params()));

    for &method in &opts.methods {
        let started = Instant::now();
        let outcome: Result<()> = (|| {
            match method {
                Method::Support => {
                    let search = SupportSearch::new(&code, &opts.limits)?;
                    let total: u128 = (1..=dim).map(|r| search.work(r)).sum();
                    opts.limits.check_work(total, "support oracle")?;
                    let col = (1..=dim)
                        .map(|r| search.solve(r, &Limits::forced_like(&opts.limits)))
                        .collect::<Result<Vec<_>>>()?;
                    columns.insert(method, col);
                }
                Method::Dual => {
                    let search = DualSearch::new(set, kernel.clone())?;
                    let total: u128 = (1..=search.max_r()).map(|r| search.work(r)).sum();
                    opts.limits.check_work(total, "dual oracle")?;
                    let col = (1..=search.max_r())
                        .map(|r| search.solve(r, &Limits::forced_like(&opts.limits)))
                        .collect::<Result<Vec<_>>>()?;
                    columns.insert(method, col);
                }
                Method::Formula => match ClosedFormSpec::for_params(set.params()) {
                    Ok(spec) => {
                        if spec.max_r() != dim {
                            notes.push(format!(
                                "closed form covers r=1..{} but the code has dimension {dim}",
                                spec.max_r()
                            ));
                        }
                        formula_values =
                            Some(spec.hierarchy()?.into_iter().map(|v| v as usize).collect());
                    }
                    Err(Error::FormulaUnavailable(why)) => {
                        notes.push(format!("formula refused: {why}"));
                    }
                    Err(e) => return Err(e),
                },
            }
            Ok(())
        })();
        if let Err(e) = outcome {
            match budget_note(&e) {
                Some(msg) => refused.push(format!("{}: {msg}", method.name())),
                None => return Err(e),
            }
        }
        timings.insert(
            method.name().to_string(),
            started.elapsed().as_secs_f64() * 1e3,
        );
    }

    let mut rows: Vec<HierarchyRow> = (1..=dim)
        .map(|r| {
            let pick = |m: Method| columns.get(&m).and_then(|c| c.get(r - 1));
            let support = pick(Method::Support);
            let dual = pick(Method::Dual);
            let witness = dual.or(support).map(|o| o.witness.to_string());
            HierarchyRow {
                r,
                d_support: support.map(|o| o.value),
                d_dual: dual.map(|o| o.value),
                d_formula: formula_values.as_ref().and_then(|f| f.get(r - 1).copied()),
                witness,
                agree: true,
            }
        })
        .collect();
    for row in &mut rows {
        let v = row.values();
        row.agree = v.windows(2).all(|w| w[0] == w[1]);
    }
    let length_mismatch = formula_values.as_ref().is_some_and(|f| f.len() != dim)
        || columns.values().any(|c| c.len() != dim);

    let columns_to_check: Vec<Vec<usize>> = Method::ALL
        .iter()
        .filter_map(|&m| {
            let col: Option<Vec<usize>> = rows
                .iter()
                .map(|row| match m {
                    Method::Support => row.d_support,
                    Method::Dual => row.d_dual,
                    Method::Formula => row.d_formula,
                })
                .collect();
            col
        })
        .collect();
    let monotone = columns_to_check
        .iter()
        .all(|c| c.windows(2).all(|w| w[0] < w[1]));
    let singleton = columns_to_check
        .iter()
        .all(|c| c.iter().enumerate().all(|(i, &d)| d + dim <= n + i + 1));
    let top_weight = full_support_expected(set.params())
        .then(|| columns_to_check.iter().all(|c| c.last() == Some(&n)));

    let mut lemma = Vec::new();
    if opts.lemma_checks {
        let started = Instant::now();
        match lemma_checks(set, &opts.limits) {
            Ok(l) => lemma = l,
            Err(e) => match budget_note(&e) {
                Some(msg) => refused.push(format!("lemma checks: {msg}")),
                None => return Err(e),
            },
        }
        timings.insert("lemma_checks".into(), started.elapsed().as_secs_f64() * 1e3);
    }

    let failed = rows.iter().any(|r| !r.agree)
        || length_mismatch
        || !monotone
        || !singleton
        || top_weight == Some(false)
        || lemma.iter().any(|l| !l.passed);
    let status = if failed {
        Status::Failed
    } else if !refused.is_empty() {
        Status::Incomplete
    } else {
        Status::Passed
    };

    Ok(HierarchyReport {
        class: set.params().class_label(),
        params: set.params().describe().into_iter().collect(),
        n,
        dim,
        message_dim: code.message_dim(),
        kernel_dim: kernel.dim(),
        rows,
        checks: Checks {
            monotone,
            singleton,
            top_weight,
            lemma_checks: lemma,
        },
        refused,
        notes,
        status,
        timings: (!opts.deterministic).then_some(timings),
        generated_at: (!opts.deterministic).then(unix_seconds),
    })
}

impl Limits {
    /// The per-r calls inherit the codeword budget; the work cap was already
    /// applied to the whole hierarchy.
    fn forced_like(limits: &Limits) -> Limits {
        Limits {
            codeword_budget: limits.codeword_budget,
            work_budget: None,
        }
    }
}

fn full_support_expected(params: &ClassParams) -> bool {
    match params {
        ClassParams::Class1(_) | ClassParams::Class2(_) => true,
        ClassParams::Class3(p) => p.pattern.has_closed_form(),
        ClassParams::Custom { .. } => false,
    }
}

fn parameter_notes(params: &ClassParams) -> Vec<String> {
    let mut notes = Vec::new();
    match params {
        ClassParams::Class1(p) if (p.q, p.m, p.k, p.h) == (2, 4, 2, 1) => notes.push(
            "reference-parameter mismatch: q=2 m=4 k=2 h=1 gives n=8; the reference \
             [54,4,36] code with hierarchy {36,48,52,54} is q=3 m=4 k=2 h=2"
                .to_string(),
        ),
        ClassParams::Class1(p) if (p.q, p.m, p.k, p.h) == (3, 4, 2, 2) => notes.push(
            "reference-parameter mismatch: these parameters reproduce the reference \
             [54,4,36] code that is listed under q=2 m=4 k=2 h=1"
                .to_string(),
        ),
        ClassParams::Class2(p) if p.exceptional => notes.push(format!(
            "exceptional case: q^(m-s) <= q^(m+l-k-s)+1 ({} <= {}), code dimension drops below m+k",
            (p.q as u128).pow((p.m - p.s) as u32),
            (p.q as u128).pow((p.m + p.l - p.k - p.s) as u32) + 1
        )),
        ClassParams::Class3(p) if p.pattern != TracePattern::DEFAULT => notes.push(format!(
            "butterfly variant with trace pattern {}",
            p.pattern
        )),
        _ => {}
    }
    notes
}

fn unix_seconds() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Length, dimension, minimum distance and weight distribution.
#[derive(Clone, Debug, Serialize)]
pub struct CodeReport {
    pub class: String,
    pub params: BTreeMap<String, String>,
    pub n: usize,
    pub dim: usize,
    pub message_dim: usize,
    pub kernel_dim: usize,
    pub d: Option<usize>,
    pub weight_distribution: WeightDistribution,
}

pub fn code_report(set: &DefiningSet, codeword_budget: u128) -> Result<CodeReport> {
    let code = build_code(set)?;
    let wd = code.weight_distribution(codeword_budget)?;
    Ok(CodeReport {
        class: set.params().class_label(),
        params: set.params().describe().into_iter().collect(),
        n: code.length(),
        dim: code.code_dim(),
        message_dim: code.message_dim(),
        kernel_dim: code.kernel_space().dim(),
        d: wd.min_nonzero_weight(),
        weight_distribution: wd,
    })
}
