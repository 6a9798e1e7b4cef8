//! Dense matrices over the prime field GF(p).
//!
//! Entries are stored row-major as residues in `[0, p)` and reduced after
//! every ring operation. Matrices act on the left of coordinate columns.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u32);

impl Prime {
    /// Largest modulus accepted. Products of two residues must fit in `u32`.
    pub const MAX: u32 = 65_521;

    pub fn new(p: u32) -> Result<Self> {
        if p > Self::MAX || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduces an arbitrary signed integer to its residue.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.0 - b) % self.0
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.0
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.0 - a) % self.0
    }

    /// Inverse of a nonzero residue by the extended Euclidean algorithm.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(a % self.0 != 0, "inverting zero mod {}", self.0);
        let (mut old_r, mut r) = (a as i64, self.0 as i64);
        let (mut old_s, mut s) = (1i64, 0i64);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        self.reduce(old_s)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = u32::deserialize(d)?;
        Prime::new(p).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A dense `rows × cols` matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`FpMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry mod p.
    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| p.reduce(x)));
        }
        Ok(FpMatrix { p, rows: rows.len(), cols, data })
    }

    /// Builds a matrix from row-major residues. Entries must already lie in `[0, p)`.
    pub fn from_vec(p: Prime, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&e| e >= p.get()) {
            return Err(Error::Invalid(format!("entry {bad} is not a residue mod {p}")));
        }
        Ok(FpMatrix { p, rows, cols, data })
    }

    /// Builds a matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, &v) in c.iter().enumerate() {
                m.data[i * m.cols + j] = v % p.get();
            }
        }
        m
    }

    pub fn column_vector(p: Prime, v: &[u32]) -> Self {
        Self::from_columns(p, v.len(), &[v.to_vec()])
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p.get()
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p.get();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    fn check_field(&self, other: &FpMatrix) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Characteristic(self.p(), other.p()));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &FpMatrix) -> Result<FpMatrix> {
        self.check_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let p = self.p.get();
        let mut out = FpMatrix::zeros(self.p, self.rows, rhs.cols);
        let mut acc = vec![0u64; rhs.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = rhs.row(k);
                for (slot, &b) in acc.iter_mut().zip(brow) {
                    *slot += (a * b) as u64;
                }
            }
            for (j, a) in acc.iter().enumerate() {
                out.data[i * rhs.cols + j] = (*a % p as u64) as u32;
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let s: u64 = self.row(i).iter().zip(v).map(|(&a, &b)| (a * b) as u64).sum();
                (s % self.p() as u64) as u32
            })
            .collect()
    }

    fn zip_with(&self, rhs: &FpMatrix, f: impl Fn(u32, u32) -> u32) -> Result<FpMatrix> {
        self.check_field(rhs)?;
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, rhs: &FpMatrix) -> Result<FpMatrix> {
        let p = self.p;
        self.zip_with(rhs, |a, b| p.add(a, b))
    }

    pub fn sub(&self, rhs: &FpMatrix) -> Result<FpMatrix> {
        let p = self.p;
        self.zip_with(rhs, |a, b| p.sub(a, b))
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let p = self.p;
        let c = c % p.get();
        FpMatrix { data: self.data.iter().map(|&a| p.mul(a, c)).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> FpMatrix {
        let p = self.p;
        FpMatrix { data: self.data.iter().map(|&a| p.neg(a)).collect(), ..self.clone() }
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn pow(&self, mut e: u64) -> Result<FpMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Kronecker product; row/column `(i, j)` of the result is `i * rhs.dim + j`.
    pub fn kronecker(&self, rhs: &FpMatrix) -> Result<FpMatrix> {
        self.check_field(rhs)?;
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let mut out = FpMatrix::zeros(self.p, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.data[(i * rhs.rows + k) * c + j * rhs.cols + l] =
                            self.p.mul(a, rhs.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal matrix `diag(self, rhs)`.
    pub fn block_diag(&self, rhs: &FpMatrix) -> Result<FpMatrix> {
        self.check_field(rhs)?;
        let mut out = FpMatrix::zeros(self.p, self.rows + rhs.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, rhs);
        Ok(out)
    }

    pub fn hstack(&self, rhs: &FpMatrix) -> Result<FpMatrix> {
        self.check_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(Error::Dimension(format!("hstack rows {} vs {}", self.rows, rhs.rows)));
        }
        let mut out = FpMatrix::zeros(self.p, self.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, rhs);
        Ok(out)
    }

    pub fn vstack(&self, rhs: &FpMatrix) -> Result<FpMatrix> {
        self.check_field(rhs)?;
        if self.cols != rhs.cols {
            return Err(Error::Dimension(format!("vstack cols {} vs {}", self.cols, rhs.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(FpMatrix { p: self.p, rows: self.rows + rhs.rows, cols: self.cols, data })
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &FpMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.p, rows, cols);
        for i in 0..rows {
            let src = (r0 + i) * self.cols + c0;
            out.data[i * cols..(i + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.p, self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out.data[i * idx.len() + jj] = self.get(i, j);
            }
        }
        out
    }

    /// Reduced row-echelon form, rank and pivot columns.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        Rref { rank: pivots.len(), reduced: m, pivots }
    }

    /// Row-reduces in place, choosing pivots only among the first `pivot_cols`
    /// columns. Returns the pivot columns.
    fn rref_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == self.rows {
                break;
            }
            let Some(found) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if found != r {
                for k in c..cols {
                    self.data.swap(found * cols + k, r * cols + k);
                }
            }
            let inv = p.inv(self.data[r * cols + c]);
            if inv != 1 {
                for k in c..cols {
                    let e = &mut self.data[r * cols + k];
                    *e = p.mul(*e, inv);
                }
            }
            let support: Vec<(usize, u32)> = (c..cols)
                .map(|k| (k, self.data[r * cols + k]))
                .filter(|&(_, v)| v != 0)
                .collect();
            let (before, rest) = self.data.split_at_mut(r * cols);
            let after = &mut rest[cols..];
            for row in before.chunks_exact_mut(cols).chain(after.chunks_exact_mut(cols)) {
                let f = row[c];
                if f == 0 {
                    continue;
                }
                let nf = p.neg(f);
                for &(k, pv) in &support {
                    row[k] = (row[k] + nf * pv) % p.get();
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Columns form a basis of `ker(self)`; free variables get unit vectors.
    pub fn nullspace(&self) -> FpMatrix {
        let Rref { reduced, pivots, .. } = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = FpMatrix::zeros(p, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.data[f * free.len() + k] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                basis.data[pc * free.len() + k] = p.neg(reduced.get(i, f));
            }
        }
        basis
    }

    /// Rows form a basis of the row space (the nonzero rows of the rref).
    pub fn row_space(&self) -> FpMatrix {
        let r = self.rref();
        r.reduced.submatrix(0, 0, r.rank, self.cols)
    }

    /// Columns form a basis of the column space (the pivot columns of `self`).
    pub fn column_space(&self) -> FpMatrix {
        let pivots = self.rref().pivots;
        self.select_columns(&pivots)
    }

    /// Solves `self · x = b`, zeroing free variables. `None` when inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let rhs = FpMatrix::column_vector(self.p, b);
        Ok(self.solve_matrix(&rhs)?.map(|x| x.column(0)))
    }

    /// Solves `self · X = B` column by column with one elimination.
    pub fn solve_matrix(&self, b: &FpMatrix) -> Result<Option<FpMatrix>> {
        self.check_field(b)?;
        if b.rows != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side has {} rows, matrix has {}",
                b.rows, self.rows
            )));
        }
        let mut aug = self.hstack(b)?;
        let pivots = aug.rref_in_place(self.cols);
        let rank = pivots.len();
        for i in rank..aug.rows {
            if aug.row(i)[self.cols..].iter().any(|&e| e != 0) {
                return Ok(None);
            }
        }
        let mut x = FpMatrix::zeros(self.p, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[pc * b.cols + j] = aug.get(i, self.cols + j);
            }
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<FpMatrix> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve_matrix(&FpMatrix::identity(self.p, self.rows)).ok()??;
        (self.rank() == self.rows).then_some(x)
    }

    /// Row-major flattening as a single column vector.
    pub fn flatten(&self) -> Vec<u32> {
        self.data.clone()
    }

    pub fn reshape(&self, rows: usize, cols: usize) -> Result<FpMatrix> {
        FpMatrix::from_vec(self.p, rows, cols, self.data.clone())
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}, {}x{}) ", self.p, self.rows, self.cols)?;
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// Linear combination `Σ c_i · M_i` of equally shaped matrices.
pub fn combine(p: Prime, rows: usize, cols: usize, coeffs: &[u32], mats: &[FpMatrix]) -> FpMatrix {
    let mut acc = vec![0u64; rows * cols];
    for (&c, m) in coeffs.iter().zip(mats) {
        if c == 0 {
            continue;
        }
        for (a, &e) in acc.iter_mut().zip(&m.data) {
            *a += (c * e) as u64;
        }
    }
    let data = acc.into_iter().map(|a| (a % p.get() as u64) as u32).collect();
    FpMatrix { p, rows, cols, data }
}
