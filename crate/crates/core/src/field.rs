//! Arithmetic in F_{q^n} for prime q.
//!
//! Elements are coordinate vectors in the power basis 1, g, ..., g^{n-1}, where
//! g is the residue of the indeterminate modulo the context's modulus. The
//! modulus is the smallest monic irreducible polynomial of degree n, comparing
//! coefficient vectors lexicographically starting from the constant term, so
//! that a context is fully determined by (q, n).

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly;

/// Identifies a field context. Because modulus selection is deterministic,
/// (q, n) is enough.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldTag {
    pub q: u8,
    pub n: u32,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.q, self.n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldContext {
    q: u8,
    n: usize,
    /// Monic, constant term first, length n + 1.
    modulus: Vec<u8>,
    /// `reduction[i]` = x^(n+i) mod modulus, for 0 <= i < n - 1.
    reduction: Vec<Vec<u8>>,
    /// Absolute trace of each power-basis element.
    trace_basis: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    tag: FieldTag,
    coeffs: Vec<u8>,
}

pub fn is_prime(q: u32) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

pub(crate) fn digit_char(d: u8) -> char {
    char::from_digit(d as u32, 36).expect("digit below 36")
}

pub(crate) fn parse_digits(s: &str, q: u8) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| {
            c.to_digit(36)
                .filter(|&d| d < q as u32)
                .map(|d| d as u8)
                .ok_or_else(|| Error::Parse(format!("digit '{c}' in \"{s}\" for q={q}")))
        })
        .collect()
}

pub(crate) fn format_digits(digits: &[u8]) -> String {
    digits.iter().map(|&d| digit_char(d)).collect()
}

impl FieldContext {
    /// Builds F_{q^n}. `q` must be a prime below 256.
    pub fn new(q: u32, n: usize) -> Result<Self> {
        if !is_prime(q) || q > 255 {
            return Err(Error::NotPrime(q));
        }
        if n == 0 {
            return Err(Error::param("extension degree must be at least 1"));
        }
        let q8 = q as u8;
        let modulus = smallest_irreducible(q8, n)?;
        let reduction = (0..n.saturating_sub(1))
            .map(|i| {
                let mut mono = vec![0u8; n + i + 1];
                mono[n + i] = 1;
                let mut r = poly::rem(&mono, &modulus, q8);
                r.resize(n, 0);
                r
            })
            .collect();
        let mut ctx = FieldContext {
            q: q8,
            n,
            modulus,
            reduction,
            trace_basis: Vec::new(),
        };
        ctx.trace_basis = (0..n)
            .map(|j| {
                let b = ctx.basis_element(j);
                let t = ctx.frobenius_sum(&b, 1, n);
                debug_assert!(t.coeffs[1..].iter().all(|&c| c == 0));
                t.coeffs[0]
            })
            .collect();
        Ok(ctx)
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn tag(&self) -> FieldTag {
        FieldTag {
            q: self.q,
            n: self.n as u32,
        }
    }

    /// Modulus coefficients, constant term first (length n + 1, monic).
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// Number of elements, q^n.
    pub fn order(&self) -> u64 {
        (self.q as u64).pow(self.n as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            tag: self.tag(),
            coeffs: vec![0; self.n],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.scalar(1)
    }

    /// The prime-field constant `c`, embedded.
    pub fn scalar(&self, c: u8) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = c % self.q;
        e
    }

    /// The power-basis element g^j.
    pub fn basis_element(&self, j: usize) -> FieldElement {
        assert!(j < self.n, "basis index out of range");
        let mut e = self.zero();
        e.coeffs[j] = 1;
        e
    }

    /// Residue of the indeterminate. For n = 1 the modulus is x and this is 0.
    pub fn generator(&self) -> FieldElement {
        if self.n == 1 {
            self.zero()
        } else {
            self.basis_element(1)
        }
    }

    pub fn element(&self, coeffs: Vec<u8>) -> Result<FieldElement> {
        if coeffs.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: coeffs.len(),
            });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.q) {
            return Err(Error::param(format!(
                "coordinate {c} out of range for q={}",
                self.q
            )));
        }
        Ok(FieldElement {
            tag: self.tag(),
            coeffs,
        })
    }

    /// Element whose coordinates are the base-q digits of `index`, least
    /// significant first.
    pub fn from_index(&self, mut index: u64) -> FieldElement {
        let q = self.q as u64;
        let coeffs = (0..self.n)
            .map(|_| {
                let d = (index % q) as u8;
                index /= q;
                d
            })
            .collect();
        FieldElement {
            tag: self.tag(),
            coeffs,
        }
    }

    /// All elements in the global order (base-q integer of the coordinates).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    /// Parses a digit string, least significant coordinate first.
    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        let digits = parse_digits(s.trim(), self.q)?;
        if digits.len() != self.n {
            return Err(Error::Parse(format!(
                "\"{s}\" has {} digits, expected {}",
                digits.len(),
                self.n
            )));
        }
        self.element(digits)
    }

    fn check(&self, x: &FieldElement) -> Result<()> {
        if x.tag != self.tag() {
            return Err(Error::ContextMismatch {
                left: self.tag().to_string(),
                right: x.tag.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| poly::sub_mod(x, y, self.q))
            .collect();
        Ok(FieldElement { tag: a.tag, coeffs })
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        let coeffs = a
            .coeffs
            .iter()
            .map(|&x| poly::sub_mod(0, x, self.q))
            .collect();
        Ok(FieldElement { tag: a.tag, coeffs })
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    /// Multiplication by a prime-field scalar.
    pub fn scale(&self, c: u8, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        let coeffs = a
            .coeffs
            .iter()
            .map(|&x| poly::mul_mod(x, c % self.q, self.q))
            .collect();
        Ok(FieldElement { tag: a.tag, coeffs })
    }

    pub fn pow(&self, a: &FieldElement, e: u128) -> Result<FieldElement> {
        self.check(a)?;
        Ok(self.pow_unchecked(a, e))
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow_unchecked(a, self.order() as u128 - 2))
    }

    /// x -> x^q.
    pub fn frobenius(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        Ok(self.pow_unchecked(a, self.q as u128))
    }

    /// Absolute trace Tr_1^n(x), as an F_q scalar.
    pub fn trace_to_prime(&self, x: &FieldElement) -> Result<u8> {
        self.check(x)?;
        Ok(self.trace_unchecked(x))
    }

    /// Relative trace Tr_k^n(x) = sum_{i < n/k} x^(q^(k i)).
    pub fn relative_trace(&self, x: &FieldElement, k: usize) -> Result<FieldElement> {
        self.check(x)?;
        self.check_divisor(k)?;
        Ok(self.frobenius_sum(x, k, self.n / k))
    }

    /// Partial Frobenius sum x + x^q + ... + x^(q^(k-1)). On elements of the
    /// degree-k subfield this is the absolute trace of that subfield.
    pub fn subfield_trace(&self, x: &FieldElement, k: usize) -> Result<FieldElement> {
        self.check(x)?;
        self.check_divisor(k)?;
        Ok(self.frobenius_sum(x, 1, k))
    }

    pub fn is_in_subfield(&self, x: &FieldElement, k: usize) -> Result<bool> {
        self.check(x)?;
        self.check_divisor(k)?;
        Ok(self.in_subfield_unchecked(x, k))
    }

    /// All q^k elements of the degree-k subfield, in global order.
    pub fn enumerate_subfield(&self, k: usize) -> Result<Vec<FieldElement>> {
        self.check_divisor(k)?;
        Ok(self
            .elements()
            .filter(|x| self.in_subfield_unchecked(x, k))
            .collect())
    }

    /// Locates `small` = F_{q^k} inside this field by finding a root of its
    /// modulus in the degree-k subfield (first root in global order).
    pub fn embed_subfield(&self, small: &FieldContext) -> Result<SubfieldEmbedding> {
        if small.q != self.q {
            return Err(Error::ContextMismatch {
                left: self.tag().to_string(),
                right: small.tag().to_string(),
            });
        }
        self.check_divisor(small.n)?;
        let candidates = self.enumerate_subfield(small.n)?;
        let root = candidates
            .into_iter()
            .find(|c| {
                // Horner evaluation of the small modulus at c
                let mut acc = self.zero();
                for &coef in small.modulus.iter().rev() {
                    acc = self.add_unchecked(&self.mul_unchecked(&acc, c), &self.scalar(coef));
                }
                acc.is_zero()
            })
            .ok_or_else(|| Error::Inconsistent("subfield modulus has no root".into()))?;
        let mut powers = Vec::with_capacity(small.n);
        let mut p = self.one();
        for _ in 0..small.n {
            powers.push(p.clone());
            p = self.mul_unchecked(&p, &root);
        }
        let images = small
            .elements()
            .map(|y| {
                y.coeffs
                    .iter()
                    .zip(&powers)
                    .fold(self.zero(), |acc, (&c, pw)| {
                        self.add_unchecked(&acc, &self.scale_unchecked(c, pw))
                    })
            })
            .collect();
        Ok(SubfieldEmbedding {
            small: small.clone(),
            images,
        })
    }

    fn check_divisor(&self, k: usize) -> Result<()> {
        if k == 0 || !self.n.is_multiple_of(k) {
            return Err(Error::NotDivisor { k, n: self.n });
        }
        Ok(())
    }

    pub(crate) fn add_unchecked(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| poly::add_mod(x, y, self.q))
            .collect();
        FieldElement { tag: a.tag, coeffs }
    }

    fn scale_unchecked(&self, c: u8, a: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .map(|&x| poly::mul_mod(x, c, self.q))
            .collect();
        FieldElement { tag: a.tag, coeffs }
    }

    pub(crate) fn mul_unchecked(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let n = self.n;
        let q = self.q as u32;
        let mut wide = vec![0u32; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                wide[i + j] += x as u32 * y as u32;
            }
        }
        let mut out: Vec<u32> = wide[..n].to_vec();
        for (i, &hi) in wide[n..].iter().enumerate() {
            let hi = hi % q;
            if hi == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&self.reduction[i]) {
                *o += hi * r as u32;
            }
        }
        FieldElement {
            tag: a.tag,
            coeffs: out.into_iter().map(|c| (c % q) as u8).collect(),
        }
    }

    fn pow_unchecked(&self, a: &FieldElement, mut e: u128) -> FieldElement {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_unchecked(&result, &base);
            }
            base = self.mul_unchecked(&base, &base);
            e >>= 1;
        }
        result
    }

    fn frob_pow(&self, x: &FieldElement, times: usize) -> FieldElement {
        (0..times).fold(x.clone(), |acc, _| self.pow_unchecked(&acc, self.q as u128))
    }

    /// sum_{i < terms} x^(q^(step i))
    fn frobenius_sum(&self, x: &FieldElement, step: usize, terms: usize) -> FieldElement {
        let mut acc = self.zero();
        let mut cur = x.clone();
        for _ in 0..terms {
            acc = self.add_unchecked(&acc, &cur);
            cur = self.frob_pow(&cur, step);
        }
        acc
    }

    pub(crate) fn trace_unchecked(&self, x: &FieldElement) -> u8 {
        let q = self.q as u32;
        let s: u32 = x
            .coeffs
            .iter()
            .zip(&self.trace_basis)
            .map(|(&c, &t)| c as u32 * t as u32)
            .sum();
        (s % q) as u8
    }

    pub(crate) fn in_subfield_unchecked(&self, x: &FieldElement, k: usize) -> bool {
        self.frob_pow(x, k) == *x
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q={} n={} mod={}",
            self.q,
            self.n,
            format_digits(&self.modulus)
        )
    }
}

fn smallest_irreducible(q: u8, n: usize) -> Result<Vec<u8>> {
    // Lexicographic order with the constant term compared first: the constant
    // coefficient is the most significant digit of the counter.
    let total = (q as u64)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::param("field too large"))?;
    for idx in 0..total {
        let mut f = vec![0u8; n + 1];
        let mut v = idx;
        for i in (0..n).rev() {
            f[i] = (v % q as u64) as u8;
            v /= q as u64;
        }
        f[n] = 1;
        if poly::is_irreducible(&f, q) {
            return Ok(f);
        }
    }
    Err(Error::Inconsistent(format!(
        "no irreducible polynomial of degree {n} over F_{q}"
    )))
}

impl FieldElement {
    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Position in the global order: coordinates read as a base-q integer,
    /// least significant first.
    pub fn index(&self) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.tag.q as u64 + c as u64)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_digits(&self.coeffs))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tag
            .cmp(&other.tag)
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An explicit isomorphism from a small field context onto the subfield of
/// matching degree inside a larger one.
#[derive(Clone, Debug)]
pub struct SubfieldEmbedding {
    small: FieldContext,
    images: Vec<FieldElement>,
}

impl SubfieldEmbedding {
    pub fn small(&self) -> &FieldContext {
        &self.small
    }

    pub fn embed(&self, y: &FieldElement) -> Result<FieldElement> {
        self.small.check(y)?;
        Ok(self.images[y.index() as usize].clone())
    }

    /// Subfield coordinates of `x`, or `None` if `x` lies outside the subfield.
    pub fn restrict(&self, x: &FieldElement) -> Option<FieldElement> {
        self.images
            .iter()
            .position(|img| img == x)
            .map(|i| self.small.from_index(i as u64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldContext::new(4, 2), Err(Error::NotPrime(4)));
        assert_eq!(FieldContext::new(1, 2), Err(Error::NotPrime(1)));
        assert!(matches!(FieldContext::new(2, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn prime_field_has_scalar_elements() {
        let f2 = FieldContext::new(2, 1).unwrap();
        assert_eq!(f2.order(), 2);
        let elems: Vec<String> = f2.elements().map(|e| e.to_string()).collect();
        assert_eq!(elems, vec!["0", "1"]);
        let one = f2.one();
        assert_eq!(f2.trace_to_prime(&one).unwrap(), 1);
    }

    #[test]
    fn f4_modulus_and_square_of_generator() {
        let f4 = FieldContext::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let w = f4.generator();
        let w2 = f4.mul(&w, &w).unwrap();
        let expected = f4.add(&w, &f4.one()).unwrap();
        assert_eq!(w2, expected);
    }

    #[test]
    fn f4_traces() {
        let f4 = FieldContext::new(2, 2).unwrap();
        // 0, 1, w, w+1 in global order
        let traces: Vec<u8> = f4
            .elements()
            .map(|x| f4.trace_to_prime(&x).unwrap())
            .collect();
        assert_eq!(traces, vec![0, 0, 1, 1]);
    }

    #[test]
    fn f27_generator_has_order_26() {
        let f = FieldContext::new(3, 3).unwrap();
        assert_eq!(f.order(), 27);
        let g = f.generator();
        assert_eq!(f.pow(&g, 26).unwrap(), f.one());
        for d in [1u128, 2, 13] {
            assert_ne!(f.pow(&g, d).unwrap(), f.one());
        }
    }

    #[test]
    fn inverses_in_f9() {
        let f9 = FieldContext::new(3, 2).unwrap();
        for a in f9.elements().filter(|a| !a.is_zero()) {
            let prod = f9.mul(&a, &f9.inv(&a).unwrap()).unwrap();
            assert_eq!(prod, f9.one());
        }
        assert_eq!(f9.inv(&f9.zero()), Err(Error::ZeroInverse));
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = FieldContext::new(2, 2).unwrap();
        let b = FieldContext::new(2, 3).unwrap();
        assert!(matches!(
            a.mul(&a.one(), &b.one()),
            Err(Error::ContextMismatch { .. })
        ));
    }

    #[test]
    fn trace_kernel_sizes() {
        for (q, n) in [(2u32, 4usize), (3, 3)] {
            let f = FieldContext::new(q, n).unwrap();
            let zeros = f
                .elements()
                .filter(|x| f.trace_to_prime(x).unwrap() == 0)
                .count() as u64;
            assert_eq!(zeros, (q as u64).pow(n as u32 - 1));
        }
    }

    #[test]
    fn relative_trace_identities() {
        let f = FieldContext::new(2, 4).unwrap();
        for x in f.elements() {
            assert_eq!(f.relative_trace(&x, 4).unwrap(), x);
            let t = f.relative_trace(&x, 2).unwrap();
            assert!(f.is_in_subfield(&t, 2).unwrap());
        }
        let f27 = FieldContext::new(3, 3).unwrap();
        for x in f27.elements() {
            let t = f27.relative_trace(&x, 1).unwrap();
            assert_eq!(t, f27.scalar(f27.trace_to_prime(&x).unwrap()));
        }
        assert_eq!(
            f.relative_trace(&f.one(), 3),
            Err(Error::NotDivisor { k: 3, n: 4 })
        );
    }

    #[test]
    fn trace_transitivity_through_subfield_coordinates() {
        let big = FieldContext::new(2, 4).unwrap();
        let small = FieldContext::new(2, 2).unwrap();
        let emb = big.embed_subfield(&small).unwrap();
        for x in big.elements() {
            let rel = big.relative_trace(&x, 2).unwrap();
            let y = emb.restrict(&rel).expect("relative trace lies in subfield");
            let via_small = small.trace_to_prime(&y).unwrap();
            assert_eq!(via_small, big.trace_to_prime(&x).unwrap());
        }
    }

    #[test]
    fn subfields() {
        let f16 = FieldContext::new(2, 4).unwrap();
        let sub = f16.enumerate_subfield(2).unwrap();
        assert_eq!(sub.len(), 4);
        assert!(sub.contains(&f16.zero()) && sub.contains(&f16.one()));
        for a in &sub {
            for b in &sub {
                assert!(sub.contains(&f16.add(a, b).unwrap()));
                assert!(sub.contains(&f16.mul(a, b).unwrap()));
            }
        }
        let f27 = FieldContext::new(3, 3).unwrap();
        let prime: Vec<String> = f27
            .enumerate_subfield(1)
            .unwrap()
            .iter()
            .map(|e| e.to_string())
            .collect();
        assert_eq!(prime, vec!["000", "100", "200"]);
    }

    #[test]
    fn element_text_round_trip() {
        let f = FieldContext::new(3, 3).unwrap();
        let x = f.parse("120").unwrap();
        assert_eq!(x.coeffs(), &[1, 2, 0]);
        assert_eq!(x.index(), 7);
        assert_eq!(x.to_string(), "120");
        assert!(f.parse("13").is_err());
        assert!(f.parse("130").is_err());
        assert_eq!(
            f.to_string(),
            format!("q=3 n=3 mod={}", format_digits(f.modulus()))
        );
    }

    #[test]
    fn deterministic_modulus() {
        for (q, n) in [(2, 5), (3, 4), (5, 2)] {
            let a = FieldContext::new(q, n).unwrap();
            let b = FieldContext::new(q, n).unwrap();
            assert_eq!(a.modulus(), b.modulus());
        }
    }
}
