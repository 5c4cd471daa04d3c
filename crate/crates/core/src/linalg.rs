//! Linear algebra over a prime field F_q: dense matrices, reduced row echelon
//! form, kernels, and subspaces kept in canonical RREF.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{format_digits, parse_digits, FieldContext};
use crate::poly::{add_mod, inv_mod, mul_mod, sub_mod};

/// Row-major matrix over F_q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    q: u8,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

/// Result of [`FqMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// Same shape as the input; nonzero rows first.
    pub matrix: FqMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FqMatrix {
    pub fn new(q: u8, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|&x| x >= q) {
            return Err(Error::param(format!("matrix entry out of range for q={q}")));
        }
        Ok(FqMatrix {
            q,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(q: u8, rows: usize, cols: usize) -> Self {
        FqMatrix {
            q,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(q: u8, n: usize) -> Self {
        let mut m = Self::zeros(q, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(q: u8, cols: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(q, rows.len(), cols, data)
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v % self.q;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[u8]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = Self::zeros(self.q, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let q = self.q as u32;
        let mut out = Self::zeros(self.q, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: u32 = (0..self.cols)
                    .map(|l| self.get(i, l) as u32 * other.get(l, j) as u32)
                    .sum();
                out.data[i * other.cols + j] = (s % q) as u8;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self.row_vectors().map(|r| dot(r, v, self.q)).collect())
    }

    /// Canonical reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let q = self.q;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = inv_mod(m.get(lead, col), q).expect("nonzero pivot");
            for j in col..m.cols {
                let v = mul_mod(m.get(lead, j), inv, q);
                m.data[lead * m.cols + j] = v;
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let f = m.get(r, col);
                if f == 0 {
                    continue;
                }
                for j in col..m.cols {
                    let v = sub_mod(m.get(r, j), mul_mod(f, m.get(lead, j), q), q);
                    m.data[r * m.cols + j] = v;
                }
            }
            pivots.push(col);
            lead += 1;
        }
        Rref {
            matrix: m,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Null space {v : M v = 0} as a subspace of F_q^cols.
    pub fn kernel(&self) -> Subspace {
        let Rref { matrix, pivots, .. } = self.rref();
        let q = self.q;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors: Vec<Vec<u8>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u8; self.cols];
                v[f] = 1;
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = sub_mod(0, matrix.get(i, f), q);
                }
                v
            })
            .collect();
        Subspace::span(q, self.cols, &vectors).expect("kernel vectors are well formed")
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.row_vectors().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            f.write_str(&format_digits(r))?;
        }
        Ok(())
    }
}

pub(crate) fn dot(a: &[u8], b: &[u8], q: u8) -> u8 {
    let s: u32 = a.iter().zip(b).map(|(&x, &y)| x as u32 * y as u32).sum();
    (s % q as u32) as u8
}

/// An F_q-subspace of F_q^N held as its canonical RREF basis, so that set
/// equality is basis equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: FqMatrix,
}

impl Subspace {
    pub fn zero(q: u8, ambient: usize) -> Self {
        Subspace {
            basis: FqMatrix::zeros(q, 0, ambient),
        }
    }

    pub fn full(q: u8, ambient: usize) -> Self {
        Subspace {
            basis: FqMatrix::identity(q, ambient),
        }
    }

    /// Span of arbitrary vectors.
    pub fn span(q: u8, ambient: usize, vectors: &[Vec<u8>]) -> Result<Self> {
        let m = FqMatrix::from_rows(q, ambient, vectors)?;
        Ok(Self::from_matrix_rows(&m))
    }

    /// Row space of a matrix.
    pub fn from_matrix_rows(m: &FqMatrix) -> Self {
        let Rref { matrix, rank, .. } = m.rref();
        let data = matrix.data[..rank * matrix.cols].to_vec();
        Subspace {
            basis: FqMatrix {
                q: matrix.q,
                rows: rank,
                cols: matrix.cols,
                data,
            },
        }
    }

    /// Caller guarantees `basis` is already canonical RREF with full row rank.
    pub(crate) fn from_rref_unchecked(basis: FqMatrix) -> Self {
        debug_assert_eq!(basis.rref().matrix, basis);
        debug_assert_eq!(basis.rank(), basis.rows);
        Subspace { basis }
    }

    pub fn q(&self) -> u8 {
        self.basis.q
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &FqMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .row_vectors()
            .map(|r| r.iter().position(|&x| x != 0).expect("basis row nonzero"))
            .collect()
    }

    /// Number of vectors, q^dim.
    pub fn size(&self) -> u128 {
        (self.q() as u128).pow(self.dim() as u32)
    }

    fn check_ambient(&self, n: usize) -> Result<()> {
        if n != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: n,
            });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[u8]) -> Result<bool> {
        self.check_ambient(v.len())?;
        let q = self.q();
        let mut w = v.to_vec();
        for (row, p) in self.basis.row_vectors().zip(self.pivots()) {
            let f = w[p];
            if f == 0 {
                continue;
            }
            for (x, &b) in w.iter_mut().zip(row) {
                *x = sub_mod(*x, mul_mod(f, b, q), q);
            }
        }
        Ok(w.iter().all(|&x| x == 0))
    }

    /// Vectors orthogonal to every element under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        self.basis.kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient_dim())?;
        if self.q() != other.q() {
            return Err(Error::param("subspaces over different fields"));
        }
        // v = a B1 lies in H2 iff C2 v = 0, where the rows of C2 span H2's annihilator.
        let check = other.annihilator();
        let system = check.basis.mul(&self.basis.transpose())?;
        let coeffs = system.kernel();
        let vectors: Vec<Vec<u8>> = coeffs
            .basis
            .row_vectors()
            .map(|a| self.combine(a))
            .collect();
        Subspace::span(self.q(), self.ambient_dim(), &vectors)
    }

    /// Smallest subspace containing both.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient_dim())?;
        let vectors: Vec<Vec<u8>> = self
            .basis
            .row_vectors()
            .chain(other.basis.row_vectors())
            .map(|r| r.to_vec())
            .collect();
        Subspace::span(self.q(), self.ambient_dim(), &vectors)
    }

    /// Dual with respect to the bilinear form `gram`: all v with
    /// <h, v> = 0 for every h in this subspace, computed as ker(B G).
    pub fn dual(&self, gram: &TraceGram) -> Result<Subspace> {
        self.check_ambient(gram.dim())?;
        Ok(self.basis.mul(&gram.matrix)?.kernel())
    }

    /// Linear combination sum_i a_i b_i of the basis rows.
    pub fn combine(&self, a: &[u8]) -> Vec<u8> {
        let q = self.q();
        let mut v = vec![0u8; self.ambient_dim()];
        for (&c, row) in a.iter().zip(self.basis.row_vectors()) {
            if c == 0 {
                continue;
            }
            for (x, &b) in v.iter_mut().zip(row) {
                *x = add_mod(*x, mul_mod(c, b, q), q);
            }
        }
        v
    }

    /// Every vector of the subspace, ordered by coefficient vector (first
    /// coefficient least significant).
    pub fn elements(&self) -> Vec<Vec<u8>> {
        let q = self.q();
        let r = self.dim();
        let mut coeffs = vec![0u8; r];
        let mut out = Vec::with_capacity(self.size() as usize);
        loop {
            out.push(self.combine(&coeffs));
            if !increment(&mut coeffs, q) {
                break;
            }
        }
        out
    }

    /// Parses the `;`-joined digit-string form produced by `Display`.
    pub fn parse(q: u8, ambient: usize, s: &str) -> Result<Subspace> {
        let rows: Vec<Vec<u8>> = s
            .split(';')
            .filter(|p| !p.is_empty())
            .map(|p| parse_digits(p, q))
            .collect::<Result<_>>()?;
        Subspace::span(q, ambient, &rows)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.basis.row_vectors().map(format_digits).collect();
        f.write_str(&rows.join(";"))
    }
}

/// Base-q counter increment, digit 0 least significant. Returns false on wrap.
pub(crate) fn increment(digits: &mut [u8], q: u8) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

/// Symmetric bilinear form used to define duals: the trace form
/// <u, v> = Tr(u v) on F_{q^m}, or the block sum of two trace forms on
/// F_{q^m} x F_{q^k} (first factor's coordinates first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceGram {
    matrix: FqMatrix,
}

impl TraceGram {
    pub fn univariate(ctx: &FieldContext) -> Self {
        TraceGram {
            matrix: trace_block(ctx),
        }
    }

    pub fn bivariate(first: &FieldContext, second: &FieldContext) -> Result<Self> {
        if first.q() != second.q() {
            return Err(Error::param("bivariate ambient needs one characteristic"));
        }
        let a = trace_block(first);
        let b = trace_block(second);
        let n = a.rows + b.rows;
        let mut m = FqMatrix::zeros(first.q(), n, n);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m.set(i, j, a.get(i, j));
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                m.set(a.rows + i, a.cols + j, b.get(i, j));
            }
        }
        Ok(TraceGram { matrix: m })
    }

    pub fn from_matrix(matrix: FqMatrix) -> Result<Self> {
        if matrix.rows != matrix.cols {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows,
                found: matrix.cols,
            });
        }
        Ok(TraceGram { matrix })
    }

    pub fn matrix(&self) -> &FqMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix.transpose() == self.matrix
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.matrix.kernel().dim() == 0
    }

    pub fn pair(&self, u: &[u8], v: &[u8]) -> Result<u8> {
        let gv = self.matrix.mul_vec(v)?;
        if u.len() != gv.len() {
            return Err(Error::DimensionMismatch {
                expected: gv.len(),
                found: u.len(),
            });
        }
        Ok(dot(u, &gv, self.matrix.q))
    }
}

fn trace_block(ctx: &FieldContext) -> FqMatrix {
    let n = ctx.degree();
    let mut m = FqMatrix::zeros(ctx.q(), n, n);
    for i in 0..n {
        for j in 0..n {
            let prod = ctx.mul_unchecked(&ctx.basis_element(i), &ctx.basis_element(j));
            m.set(i, j, ctx.trace_unchecked(&prod));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_span_size(q: u8, rows: &[Vec<u8>]) -> usize {
        let n = rows[0].len();
        let mut coeffs = vec![0u8; rows.len()];
        let mut seen = std::collections::HashSet::new();
        loop {
            let mut v = vec![0u8; n];
            for (c, r) in coeffs.iter().zip(rows) {
                for (x, &b) in v.iter_mut().zip(r) {
                    *x = add_mod(*x, mul_mod(*c, b, q), q);
                }
            }
            seen.insert(v);
            if !increment(&mut coeffs, q) {
                break;
            }
        }
        seen.len()
    }

    #[test]
    fn rref_basics() {
        let id = FqMatrix::identity(3, 4);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 4);
        let z = FqMatrix::zeros(2, 3, 5);
        assert_eq!(z.rref().rank, 0);
        assert_eq!(z.rref().matrix, z);
    }

    #[test]
    fn rref_over_f3_rank_one() {
        let rows = vec![vec![1, 2], vec![2, 1]];
        assert_eq!(brute_span_size(3, &rows), 3);
        let m = FqMatrix::from_rows(3, 2, &rows).unwrap();
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.matrix.data(), &[1, 2, 0, 0]);
    }

    #[test]
    fn kernel_edge_cases() {
        assert_eq!(FqMatrix::identity(2, 5).kernel().dim(), 0);
        let zero_map = FqMatrix::zeros(3, 1, 4);
        assert_eq!(zero_map.kernel(), Subspace::full(3, 4));
    }

    #[test]
    fn intersection_of_axes_is_zero() {
        let a = Subspace::span(5, 2, &[vec![1, 0]]).unwrap();
        let b = Subspace::span(5, 2, &[vec![0, 1]]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), Subspace::zero(5, 2));
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn ambient_mismatch_is_rejected() {
        let a = Subspace::full(2, 3);
        let b = Subspace::full(2, 4);
        assert!(a.intersect(&b).is_err());
        assert!(a.contains(&[1, 0]).is_err());
        let g = TraceGram::univariate(&FieldContext::new(2, 4).unwrap());
        assert!(a.dual(&g).is_err());
    }

    #[test]
    fn serialization_round_trip() {
        let s = Subspace::span(3, 4, &[vec![1, 2, 0, 1], vec![0, 0, 1, 2]]).unwrap();
        assert_eq!(s.to_string(), "1201;0012");
        assert_eq!(Subspace::parse(3, 4, &s.to_string()).unwrap(), s);
        assert_eq!(Subspace::zero(3, 4).to_string(), "");
        assert_eq!(Subspace::parse(3, 4, "").unwrap(), Subspace::zero(3, 4));
    }

    #[test]
    fn trace_grams_are_nondegenerate() {
        for (q, n) in [(2, 1), (2, 4), (3, 3), (5, 2), (2, 6)] {
            let ctx = FieldContext::new(q, n).unwrap();
            let g = TraceGram::univariate(&ctx);
            assert!(g.is_symmetric());
            assert!(g.is_nondegenerate(), "q={q} n={n}");
        }
        let a = FieldContext::new(2, 3).unwrap();
        let b = FieldContext::new(2, 2).unwrap();
        let g = TraceGram::bivariate(&a, &b).unwrap();
        assert_eq!(g.dim(), 5);
        assert!(g.is_nondegenerate());
    }

    #[test]
    fn dual_extremes() {
        let ctx = FieldContext::new(3, 2).unwrap();
        let g = TraceGram::univariate(&ctx);
        assert_eq!(Subspace::zero(3, 2).dual(&g).unwrap(), Subspace::full(3, 2));
        assert_eq!(Subspace::full(3, 2).dual(&g).unwrap(), Subspace::zero(3, 2));
    }
}
