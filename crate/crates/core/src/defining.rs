//! The three families of defining sets, plus the butterfly pattern variants.
//!
//! * Class 1 (univariate): D = F_{q^m} \ Omega, Omega = union_{i<=h} (theta_i + F_{q^k}).
//! * Class 2 (bivariate): D = (F_{q^m} \ F_{q^s}) x (F_{q^k} \ F_{q^l}).
//! * Class 3 (bivariate, q = 2, k = m): pairs (x, y) whose trace pattern
//!   (Tr(x(y+1)), Tr(y(x+1))) equals a fixed value, (0,1) by default.
//!
//! Elements are listed in the global element order (univariate) or
//! lexicographic pair order (bivariate), so generator matrices are stable.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::linalg::TraceGram;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThetaStrategy {
    /// Greedy: the h smallest elements whose differences with every earlier
    /// choice (and with 0) avoid F_{q^k}.
    FirstCosets,
    /// User-supplied theta_1..theta_h; theta_0 = 0 is implicit.
    Explicit(Vec<FieldElement>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class1Params {
    pub q: u32,
    pub m: usize,
    pub k: usize,
    pub h: usize,
    /// theta_0 = 0 followed by theta_1..theta_h.
    pub thetas: Vec<FieldElement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Class2Params {
    pub q: u32,
    pub m: usize,
    pub s: usize,
    pub k: usize,
    pub l: usize,
    /// q^{m-s} <= q^{m+l-k-s} + 1: the code degenerates and the closed form
    /// does not apply.
    pub exceptional: bool,
}

/// Value of (Tr(x(y+1)), Tr(y(x+1))) selecting a butterfly set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TracePattern(pub u8, pub u8);

impl TracePattern {
    pub const DEFAULT: TracePattern = TracePattern(0, 1);
    pub const ALL: [TracePattern; 4] = [
        TracePattern(0, 0),
        TracePattern(0, 1),
        TracePattern(1, 0),
        TracePattern(1, 1),
    ];

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "00" => Ok(TracePattern(0, 0)),
            "01" => Ok(TracePattern(0, 1)),
            "10" => Ok(TracePattern(1, 0)),
            "11" => Ok(TracePattern(1, 1)),
            other => Err(Error::Parse(format!("trace pattern \"{other}\""))),
        }
    }

    /// The (0,1) and (1,0) sets are swapped by (x,y) -> (y,x) and share the
    /// closed-form hierarchy; the other two lose dimension.
    pub fn has_closed_form(self) -> bool {
        self == TracePattern(0, 1) || self == TracePattern(1, 0)
    }
}

impl fmt::Display for TracePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Class3Params {
    pub m: usize,
    pub pattern: TracePattern,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassParams {
    Class1(Class1Params),
    Class2(Class2Params),
    Class3(Class3Params),
    /// Hand-built sets used for sanity checks; no closed form.
    Custom {
        label: String,
    },
}

impl ClassParams {
    pub fn class_label(&self) -> String {
        match self {
            ClassParams::Class1(_) => "1".into(),
            ClassParams::Class2(_) => "2".into(),
            ClassParams::Class3(_) => "3".into(),
            ClassParams::Custom { label } => format!("custom:{label}"),
        }
    }

    /// Stable `key=value` parameter listing for reports.
    pub fn describe(&self) -> Vec<(String, String)> {
        let kv = |k: &str, v: String| (k.to_string(), v);
        match self {
            ClassParams::Class1(p) => vec![
                kv("q", p.q.to_string()),
                kv("m", p.m.to_string()),
                kv("k", p.k.to_string()),
                kv("h", p.h.to_string()),
                kv(
                    "thetas",
                    p.thetas
                        .iter()
                        .map(|t| t.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                ),
            ],
            ClassParams::Class2(p) => vec![
                kv("q", p.q.to_string()),
                kv("m", p.m.to_string()),
                kv("s", p.s.to_string()),
                kv("k", p.k.to_string()),
                kv("l", p.l.to_string()),
            ],
            ClassParams::Class3(p) => vec![
                kv("q", "2".into()),
                kv("m", p.m.to_string()),
                kv("pattern", p.pattern.to_string()),
            ],
            ClassParams::Custom { label } => vec![kv("label", label.clone())],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ambient {
    Univariate(FieldContext),
    Bivariate(FieldContext, FieldContext),
}

impl Ambient {
    /// Dimension over F_q of the flattened ambient space.
    pub fn dim(&self) -> usize {
        match self {
            Ambient::Univariate(f) => f.degree(),
            Ambient::Bivariate(a, b) => a.degree() + b.degree(),
        }
    }

    pub fn q(&self) -> u8 {
        match self {
            Ambient::Univariate(f) | Ambient::Bivariate(f, _) => f.q(),
        }
    }

    pub fn trace_gram(&self) -> TraceGram {
        match self {
            Ambient::Univariate(f) => TraceGram::univariate(f),
            Ambient::Bivariate(a, b) => {
                TraceGram::bivariate(a, b).expect("factors share a characteristic")
            }
        }
    }

    pub fn contexts(&self) -> Vec<&FieldContext> {
        match self {
            Ambient::Univariate(f) => vec![f],
            Ambient::Bivariate(a, b) => vec![a, b],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elements {
    Univariate(Vec<FieldElement>),
    Bivariate(Vec<(FieldElement, FieldElement)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningSet {
    params: ClassParams,
    ambient: Ambient,
    elements: Elements,
}

impl DefiningSet {
    pub fn params(&self) -> &ClassParams {
        &self.params
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn elements(&self) -> &Elements {
        &self.elements
    }

    pub fn len(&self) -> usize {
        match &self.elements {
            Elements::Univariate(v) => v.len(),
            Elements::Bivariate(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of every element in the flattened ambient F_q^N (first
    /// factor's coordinates first), in set order.
    pub fn flattened(&self) -> Vec<Vec<u8>> {
        match &self.elements {
            Elements::Univariate(v) => v.iter().map(|x| x.coeffs().to_vec()).collect(),
            Elements::Bivariate(v) => v
                .iter()
                .map(|(x, y)| {
                    let mut c = x.coeffs().to_vec();
                    c.extend_from_slice(y.coeffs());
                    c
                })
                .collect(),
        }
    }

    /// Univariate set from explicit elements; sorted and deduplicated.
    pub fn custom_univariate(
        label: &str,
        ctx: &FieldContext,
        mut elements: Vec<FieldElement>,
    ) -> Result<Self> {
        if let Some(bad) = elements.iter().find(|e| e.tag() != ctx.tag()) {
            return Err(Error::ContextMismatch {
                left: ctx.tag().to_string(),
                right: bad.tag().to_string(),
            });
        }
        elements.sort();
        elements.dedup();
        Ok(DefiningSet {
            params: ClassParams::Custom {
                label: label.to_string(),
            },
            ambient: Ambient::Univariate(ctx.clone()),
            elements: Elements::Univariate(elements),
        })
    }

    pub fn export(&self) -> DefiningSetExport {
        let elements = match &self.elements {
            Elements::Univariate(v) => v
                .iter()
                .map(|x| ExportedElement::Single(x.to_string()))
                .collect(),
            Elements::Bivariate(v) => v
                .iter()
                .map(|(x, y)| ExportedElement::Pair([x.to_string(), y.to_string()]))
                .collect(),
        };
        DefiningSetExport {
            class: self.params.class_label(),
            params: self.params.describe().into_iter().collect(),
            ambient: self
                .ambient
                .contexts()
                .iter()
                .map(|c| c.to_string())
                .collect(),
            elements,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DefiningSetExport {
    pub class: String,
    pub params: std::collections::BTreeMap<String, String>,
    pub ambient: Vec<String>,
    pub elements: Vec<ExportedElement>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ExportedElement {
    Single(String),
    Pair([String; 2]),
}

/// A family plus raw parameters, before construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassRequest {
    Class1 {
        q: u32,
        m: usize,
        k: usize,
        h: usize,
        /// theta_1..theta_h as digit strings; `None` selects the greedy strategy.
        thetas: Option<Vec<String>>,
    },
    Class2 {
        q: u32,
        m: usize,
        s: usize,
        k: usize,
        l: usize,
    },
    Class3 {
        m: usize,
        pattern: TracePattern,
    },
}

impl ClassRequest {
    pub fn build(&self) -> Result<DefiningSet> {
        match self {
            ClassRequest::Class1 { q, m, k, h, thetas } => {
                let strategy = match thetas {
                    None => ThetaStrategy::FirstCosets,
                    Some(list) => {
                        let ctx = FieldContext::new(*q, *m)?;
                        ThetaStrategy::Explicit(
                            list.iter().map(|t| ctx.parse(t)).collect::<Result<_>>()?,
                        )
                    }
                };
                class1_build(*q, *m, *k, *h, &strategy)
            }
            ClassRequest::Class2 { q, m, s, k, l } => class2_build(*q, *m, *s, *k, *l),
            ClassRequest::Class3 { m, pattern } => class3_variant_build(*m, *pattern),
        }
    }
}

fn check_degree_pair(big: usize, small: usize, big_name: &str, small_name: &str) -> Result<()> {
    if small == 0 || small >= big {
        return Err(Error::param(format!(
            "requires 0 < {small_name} < {big_name} (got {small_name}={small}, {big_name}={big})"
        )));
    }
    if !big.is_multiple_of(small) {
        return Err(Error::param(format!(
            "requires {small_name} | {big_name} (got {small_name}={small}, {big_name}={big})"
        )));
    }
    Ok(())
}

/// Class 1: D = F_{q^m} minus h+1 cosets of F_{q^k}.
pub fn class1_build(
    q: u32,
    m: usize,
    k: usize,
    h: usize,
    strategy: &ThetaStrategy,
) -> Result<DefiningSet> {
    check_degree_pair(m, k, "m", "k")?;
    let ctx = FieldContext::new(q, m)?;
    if h > q as usize - 1 {
        return Err(Error::param(format!(
            "requires h <= q-1 (got h={h}, q={q}); larger h is outside the closed-form regime"
        )));
    }
    let in_sub = |x: &FieldElement| ctx.in_subfield_unchecked(x, k);
    let avoids_all = |x: &FieldElement, chosen: &[FieldElement]| {
        chosen.iter().all(|t| {
            let diff = ctx.sub(x, t).expect("same field");
            !in_sub(&diff)
        })
    };
    let mut thetas = vec![ctx.zero()];
    match strategy {
        ThetaStrategy::FirstCosets => {
            for x in ctx.elements().skip(1) {
                if thetas.len() == h + 1 {
                    break;
                }
                if avoids_all(&x, &thetas) {
                    thetas.push(x);
                }
            }
            if thetas.len() != h + 1 {
                return Err(Error::Inconsistent("not enough cosets for theta".into()));
            }
        }
        ThetaStrategy::Explicit(list) => {
            if list.len() != h {
                return Err(Error::param(format!(
                    "expected {h} theta values (theta_1..theta_h), got {}",
                    list.len()
                )));
            }
            for t in list {
                if t.tag() != ctx.tag() {
                    return Err(Error::ContextMismatch {
                        left: ctx.tag().to_string(),
                        right: t.tag().to_string(),
                    });
                }
                if !avoids_all(t, &thetas) {
                    return Err(Error::param(format!(
                        "theta {t} violates theta_i - theta_j not in F_{{q^k}}"
                    )));
                }
                thetas.push(t.clone());
            }
        }
    }
    let elements: Vec<FieldElement> = ctx
        .elements()
        .filter(|x| {
            !thetas.iter().any(|t| {
                let diff = ctx.sub(x, t).expect("same field");
                in_sub(&diff)
            })
        })
        .collect();
    Ok(DefiningSet {
        params: ClassParams::Class1(Class1Params { q, m, k, h, thetas }),
        ambient: Ambient::Univariate(ctx),
        elements: Elements::Univariate(elements),
    })
}

/// Validates Class 2 parameters and computes the exceptional flag.
pub fn class2_params(q: u32, m: usize, s: usize, k: usize, l: usize) -> Result<Class2Params> {
    if !crate::field::is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    check_degree_pair(m, s, "m", "s")?;
    check_degree_pair(k, l, "k", "l")?;
    if k - l > m - s {
        return Err(Error::param(format!(
            "requires k-l <= m-s (got k-l={}, m-s={})",
            k - l,
            m - s
        )));
    }
    let qq = q as u128;
    let exceptional = qq.pow((m - s) as u32) <= qq.pow((m + l - k - s) as u32) + 1;
    Ok(Class2Params {
        q,
        m,
        s,
        k,
        l,
        exceptional,
    })
}

pub fn class2_build(q: u32, m: usize, s: usize, k: usize, l: usize) -> Result<DefiningSet> {
    let params = class2_params(q, m, s, k, l)?;
    let fm = FieldContext::new(q, m)?;
    let fk = FieldContext::new(q, k)?;
    let xs: Vec<FieldElement> = fm
        .elements()
        .filter(|x| !fm.in_subfield_unchecked(x, s))
        .collect();
    let ys: Vec<FieldElement> = fk
        .elements()
        .filter(|y| !fk.in_subfield_unchecked(y, l))
        .collect();
    let elements = xs
        .iter()
        .flat_map(|x| ys.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    Ok(DefiningSet {
        params: ClassParams::Class2(params),
        ambient: Ambient::Bivariate(fm, fk),
        elements: Elements::Bivariate(elements),
    })
}

/// (Tr(x(y+1)), Tr(y(x+1))) over F_{2^m}.
pub fn butterfly_pattern(ctx: &FieldContext, x: &FieldElement, y: &FieldElement) -> TracePattern {
    let one = ctx.one();
    let a = ctx.mul_unchecked(x, &ctx.add_unchecked(y, &one));
    let b = ctx.mul_unchecked(y, &ctx.add_unchecked(x, &one));
    TracePattern(ctx.trace_unchecked(&a), ctx.trace_unchecked(&b))
}

/// The alternative form (Tr(x(x+y)), Tr(y(x+y))).
pub fn butterfly_pattern_quadratic(
    ctx: &FieldContext,
    x: &FieldElement,
    y: &FieldElement,
) -> TracePattern {
    let s = ctx.add_unchecked(x, y);
    let a = ctx.mul_unchecked(x, &s);
    let b = ctx.mul_unchecked(y, &s);
    TracePattern(ctx.trace_unchecked(&a), ctx.trace_unchecked(&b))
}

fn class3_check(m: usize) -> Result<FieldContext> {
    if m < 2 {
        return Err(Error::param(format!(
            "butterfly sets need m >= 2 (got m={m})"
        )));
    }
    FieldContext::new(2, m)
}

pub fn class3_variant_build(m: usize, pattern: TracePattern) -> Result<DefiningSet> {
    if pattern.0 > 1 || pattern.1 > 1 {
        return Err(Error::Parse(format!("trace pattern {pattern}")));
    }
    let ctx = class3_check(m)?;
    let all: Vec<FieldElement> = ctx.elements().collect();
    let mut elements = Vec::new();
    for x in &all {
        for y in &all {
            if butterfly_pattern(&ctx, x, y) == pattern {
                elements.push((x.clone(), y.clone()));
            }
        }
    }
    Ok(DefiningSet {
        params: ClassParams::Class3(Class3Params { m, pattern }),
        ambient: Ambient::Bivariate(ctx.clone(), ctx),
        elements: Elements::Bivariate(elements),
    })
}

pub fn class3_build(m: usize) -> Result<DefiningSet> {
    class3_variant_build(m, TracePattern::DEFAULT)
}

/// Exhaustively checks that the two ways of writing the butterfly predicate
/// select the same pairs.
pub fn class3_membership_equivalence(m: usize) -> Result<bool> {
    let ctx = class3_check(m)?;
    let all: Vec<FieldElement> = ctx.elements().collect();
    Ok(all.iter().all(|x| {
        all.iter().all(|y| {
            (butterfly_pattern(&ctx, x, y) == TracePattern::DEFAULT)
                == (butterfly_pattern_quadratic(&ctx, x, y) == TracePattern::DEFAULT)
        })
    }))
}

/// Scans F_{q^k}^perp = {x : Tr_k^m(x) = 0} for an x with Tr(theta_i x) != 0
/// for every i >= 1. Returns the first such x in global order.
pub fn class1_lemma_witness(set: &DefiningSet) -> Result<Option<FieldElement>> {
    let (ClassParams::Class1(p), Ambient::Univariate(ctx)) = (&set.params, &set.ambient) else {
        return Err(Error::param("witness search applies to class 1 sets"));
    };
    let witness = ctx.elements().find(|x| {
        ctx.relative_trace(x, p.k).expect("k | m").is_zero()
            && p.thetas[1..]
                .iter()
                .all(|t| ctx.trace_unchecked(&ctx.mul_unchecked(t, x)) != 0)
    });
    Ok(witness)
}
