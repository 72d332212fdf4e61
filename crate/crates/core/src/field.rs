//! Dense linear algebra over a prime field `F_p`.
//!
//! Everything in the crate bottoms out here: Hom and Ext dimensions are
//! kernel/cokernel dimensions, subobjects are row spaces, and isomorphism
//! questions reduce to ranks. All dimensions involved stay well under 100,
//! so a plain row-major `Vec<u32>` with Gaussian elimination is all we need.

use std::fmt;

use crate::error::{Error, Result};

/// Characteristic bound used when none is configured.
pub const DEFAULT_MAX_PRIME: u32 = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        Self::with_bound(p, DEFAULT_MAX_PRIME)
    }

    pub fn with_bound(p: u32, max_p: u32) -> Result<Self> {
        if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            return Err(Error::Malformed(format!("characteristic {p} is not prime")));
        }
        if p > max_p {
            return Err(Error::Malformed(format!(
                "characteristic {p} exceeds configured bound {max_p}"
            )));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        let mut result = 1;
        let mut base = a % self.p;
        let mut exp = self.p - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        result
    }

    /// `p^k` as a `u64`, or `None` on overflow.
    pub fn checked_pow(&self, k: usize) -> Option<u64> {
        let k = u32::try_from(k).ok()?;
        u64::from(self.p).checked_pow(k)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Iterates over every vector of `F_p^len`, in little-endian counting order
/// (the first coordinate varies fastest).
pub struct VectorIter {
    p: u32,
    current: Option<Vec<u32>>,
}

impl VectorIter {
    pub fn new(field: PrimeField, len: usize) -> Self {
        VectorIter {
            p: field.p(),
            current: Some(vec![0; len]),
        }
    }
}

impl Iterator for VectorIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let mut carried = true;
        for digit in next.iter_mut() {
            *digit += 1;
            if *digit == self.p {
                *digit = 0;
            } else {
                carried = false;
                break;
            }
        }
        if !carried {
            self.current = Some(next);
        }
        Some(out)
    }
}

/// A dense matrix over `F_p`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix[{}x{} over {}](", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, ")")
    }
}

impl FpMatrix {
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Malformed(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&e| e >= field.p()) {
            return Err(Error::Malformed(format!(
                "entry {bad} is not a residue mod {}",
                field.p()
            )));
        }
        Ok(FpMatrix { field, rows, cols, data })
    }

    /// Builds a matrix from rows of residues.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Malformed("ragged matrix rows".into()));
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    /// A matrix with no rows and `cols` columns; the basis of the zero subspace.
    pub fn empty(field: PrimeField, cols: usize) -> Self {
        Self::zeros(field, 0, cols)
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        self.data[r * self.cols + c] = value % self.field.p();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Matrix product `self · other`. Panics on shape mismatch.
    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        assert_eq!(self.field, other.field, "matrix product field mismatch");
        let p = self.field.p();
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = (out.data[idx] + a * other.get(k, c)) % p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let p = self.field.p();
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| (acc + a * b) % p)
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        let f = self.field;
        FpMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape mismatch");
        let f = self.field;
        FpMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: u32) -> FpMatrix {
        let f = self.field;
        FpMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, s % f.p())).collect(),
        }
    }

    pub fn neg(&self) -> FpMatrix {
        self.scale(self.field.p() - 1)
    }

    pub fn pow(&self, mut k: u32) -> FpMatrix {
        assert!(self.is_square());
        let mut result = Self::identity(self.field, self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `self` left of `other`.
    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        FpMatrix {
            field: self.field,
            rows: self.rows,
            cols,
            data,
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &FpMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c);
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> FpMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = Self::zeros(self.field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.data[r * cols + c] = self.get(r0 + r, c0 + c);
            }
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            m.swap_rows(lead, pr);
            let inv = f.inv(m.get(lead, c));
            for k in 0..m.cols {
                let idx = lead * m.cols + k;
                m.data[idx] = f.mul(m.data[idx], inv);
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let factor = m.get(r, c);
                if factor == 0 {
                    continue;
                }
                for k in 0..m.cols {
                    let v = f.sub(m.get(r, k), f.mul(factor, m.get(lead, k)));
                    m.data[r * m.cols + k] = v;
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Rows form a basis of `{v : self · v = 0}`.
    pub fn kernel_basis(&self) -> FpMatrix {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(f, free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            basis.data[i * self.cols + fc] = 1;
            for (pr, &pc) in pivots.iter().enumerate() {
                basis.data[i * self.cols + pc] = f.neg(r.get(pr, fc));
            }
        }
        basis
    }

    /// Some `x` with `self · x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::Malformed(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let rhs = FpMatrix::new(self.field, self.rows, 1, b.iter().map(|&e| e % self.field.p()).collect())?;
        let (r, pivots) = self.hstack(&rhs).rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (pr, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(pr, self.cols);
        }
        Ok(Some(x))
    }

    /// Basis (as rows, in RREF) of the row space.
    pub fn row_basis(&self) -> FpMatrix {
        let (r, pivots) = self.rref();
        r.block(0, 0, pivots.len(), self.cols)
    }

    /// Basis (as rows) of the column space, i.e. the image of `v ↦ self · v`.
    pub fn image_basis(&self) -> FpMatrix {
        self.transpose().row_basis()
    }
}

/// Rows of `candidates` that extend the row space of `base` to the span of both.
///
/// The returned rows are linearly independent modulo `base`.
pub fn complement_rows(base: &FpMatrix, candidates: &FpMatrix) -> FpMatrix {
    let mut acc = base.row_basis();
    let mut out = FpMatrix::empty(base.field(), base.cols());
    for r in 0..candidates.rows() {
        let row = candidates.block(r, 0, 1, candidates.cols());
        let trial = acc.vstack(&row);
        if trial.rank() > acc.rows() {
            acc = trial.row_basis();
            out = out.vstack(&row);
        }
    }
    out
}

/// Coordinates of `v` with respect to the linearly independent rows of `basis`.
pub fn coordinates(basis: &FpMatrix, v: &[u32]) -> Option<Vec<u32>> {
    basis.transpose().solve(v).ok().flatten()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn m(p: u32, rows: &[Vec<u32>]) -> FpMatrix {
        FpMatrix::from_rows(f(p), rows).unwrap()
    }

    #[test]
    fn field_construction() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(13).is_ok());
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(17).is_err());
        assert!(PrimeField::with_bound(17, 17).is_ok());
        let f5 = f(5);
        for a in 1..5 {
            assert_eq!(f5.mul(a, f5.inv(a)), 1);
        }
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(FpMatrix::new(f(2), 1, 2, vec![0, 2]).is_err());
        assert!(FpMatrix::new(f(2), 2, 2, vec![0, 1]).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(FpMatrix::identity(f(2), 2).rank(), 2);
        assert_eq!(m(2, &[vec![1, 1], vec![1, 1]]).rank(), 1);
        assert_eq!(FpMatrix::zeros(f(2), 2, 3).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        let k = m(2, &[vec![1, 1]]).kernel_basis();
        assert_eq!(k, m(2, &[vec![1, 1]]));
        assert_eq!(FpMatrix::identity(f(2), 2).kernel_basis().rows(), 0);
        assert_eq!(FpMatrix::zeros(f(2), 1, 2).kernel_basis().rows(), 2);
    }

    #[test]
    fn solve_examples() {
        let id = FpMatrix::identity(f(2), 2);
        assert_eq!(id.solve(&[1, 0]).unwrap(), Some(vec![1, 0]));
        let x = m(2, &[vec![1, 1]]).solve(&[1]).unwrap().unwrap();
        assert!(x == vec![1, 0] || x == vec![0, 1]);
        assert_eq!(m(2, &[vec![0, 0]]).solve(&[1]).unwrap(), None);
        assert!(id.solve(&[1]).is_err());
    }

    #[test]
    fn vector_iter_counts() {
        assert_eq!(VectorIter::new(f(3), 2).count(), 9);
        assert_eq!(VectorIter::new(f(2), 0).count(), 1);
    }

    #[test]
    fn complement_extends_basis() {
        let base = m(3, &[vec![1, 0, 0]]);
        let cands = FpMatrix::identity(f(3), 3);
        let comp = complement_rows(&base, &cands);
        assert_eq!(comp.rows(), 2);
        assert_eq!(base.vstack(&comp).rank(), 3);
    }
}
