//! Exact linear algebra over prime fields GF(p).
//!
//! Matrices are dense and row-major. Every elimination uses the leftmost
//! available pivot column and the first row carrying a nonzero entry in it,
//! so echelon forms, kernel bases and particular solutions are reproducible
//! bit-for-bit.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest modulus accepted; products of two residues must fit in a `u64`.
pub const MAX_MODULUS: u32 = (1 << 31) - 1;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_modulus(p: u32) -> Result<()> {
    if p > MAX_MODULUS || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (if s >= p as u64 { s - p as u64 } else { s }) as u32
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        (a as u64 + p as u64 - b as u64) as u32
    }
}

#[inline]
pub(crate) fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub(crate) fn pow_mod(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse of a nonzero residue (Fermat).
#[inline]
pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p as u64 - 2, p)
}

pub(crate) fn reduce_signed(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// An element of GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    modulus: u32,
}

impl FpScalar {
    pub fn new(value: i64, modulus: u32) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(FpScalar { value: reduce_signed(value, modulus), modulus })
    }

    pub(crate) fn raw(value: u32, modulus: u32) -> Self {
        FpScalar { value: value % modulus, modulus }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Option<Self> {
        (self.value != 0).then(|| FpScalar::raw(inv_mod(self.value, self.modulus), self.modulus))
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        same_modulus(self.modulus, rhs.modulus)?;
        Ok(FpScalar::raw(add_mod(self.value, rhs.value, self.modulus), self.modulus))
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        same_modulus(self.modulus, rhs.modulus)?;
        Ok(FpScalar::raw(mul_mod(self.value, rhs.value, self.modulus), self.modulus))
    }
}

fn same_modulus(a: u32, b: u32) -> Result<()> {
    if a != b {
        return Err(Error::ModulusMismatch { left: a, right: b });
    }
    Ok(())
}

// Operator impls panic on mixed moduli; use the `checked_*` forms when the
// operands come from untrusted sources.
impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("FpScalar modulus mismatch")
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.modulus, rhs.modulus, "FpScalar modulus mismatch");
        FpScalar::raw(sub_mod(self.value, rhs.value, self.modulus), self.modulus)
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("FpScalar modulus mismatch")
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> Self {
        FpScalar::raw(neg_mod(self.value, self.modulus), self.modulus)
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Dense matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix({}x{} over GF({}))", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = FpMatrix::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        check_modulus(p)?;
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&v| reduce_signed(v, p)));
        }
        Ok(FpMatrix { p, rows: rows.len(), cols, data })
    }

    pub fn from_scalars(rows: &[Vec<FpScalar>]) -> Result<Self> {
        let p = rows
            .iter()
            .flatten()
            .next()
            .map(|s| s.modulus())
            .ok_or_else(|| Error::Dimension("cannot infer modulus from an empty matrix".into()))?;
        let mut ints = Vec::with_capacity(rows.len());
        for row in rows {
            let mut out = Vec::with_capacity(row.len());
            for s in row {
                same_modulus(p, s.modulus())?;
                out.push(s.value() as i64);
            }
            ints.push(out);
        }
        FpMatrix::from_rows(p, &ints)
    }

    pub(crate) fn from_flat(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        FpMatrix { p, rows, cols, data }
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c) % p);
            }
        }
        FpMatrix { p, rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = FpMatrix::zeros(p, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (r, &v) in col.iter().enumerate() {
                m.data[r * m.cols + c] = v;
            }
        }
        m
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn entry(&self, r: usize, c: usize) -> FpScalar {
        FpScalar::raw(self.get(r, c), self.p)
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    fn check_same(&self, other: &FpMatrix) -> Result<()> {
        same_modulus(self.p, other.p)
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &FpMatrix) -> FpMatrix {
        let p = self.p as u64;
        let n = other.cols;
        let mut acc = vec![0u64; n];
        let mut out = FpMatrix::zeros(self.p, self.rows, n);
        // Accumulate up to this many products before reducing.
        let budget = (u64::MAX / ((p - 1).max(1) * (p - 1).max(1))).min(1 << 20) as usize;
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            let mut pending = 0usize;
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * n..(k + 1) * n];
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot += a * b as u64;
                }
                pending += 1;
                if pending + 1 >= budget {
                    acc.iter_mut().for_each(|a| *a %= p);
                    pending = 0;
                }
            }
            for (c, a) in acc.iter().enumerate() {
                out.data[r * n + c] = (a % p) as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.cols);
        let p = self.p as u64;
        let support: Vec<(usize, u64)> = v.iter().enumerate().filter(|(_, &b)| b != 0).map(|(k, &b)| (k, b as u64)).collect();
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let mut s = 0u64;
                for &(k, b) in &support {
                    let a = row[k];
                    if a != 0 {
                        s = (s + a as u64 * b) % p;
                    }
                }
                s as u32
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same(other)?;
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch("cannot add matrices of different shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| add_mod(a, b, self.p)).collect();
        Ok(FpMatrix::from_flat(self.p, self.rows, self.cols, data))
    }

    pub fn sub(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same(other)?;
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch("cannot subtract matrices of different shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| sub_mod(a, b, self.p)).collect();
        Ok(FpMatrix::from_flat(self.p, self.rows, self.cols, data))
    }

    pub fn scale(&self, s: u32) -> FpMatrix {
        let s = s % self.p;
        let data = self.data.iter().map(|&a| mul_mod(a, s, self.p)).collect();
        FpMatrix::from_flat(self.p, self.rows, self.cols, data)
    }

    pub fn neg(&self) -> FpMatrix {
        let data = self.data.iter().map(|&a| neg_mod(a, self.p)).collect();
        FpMatrix::from_flat(self.p, self.rows, self.cols, data)
    }

    /// Adds `s * other` into `self` in place.
    pub(crate) fn add_scaled(&mut self, other: &FpMatrix, s: u32) {
        debug_assert_eq!(self.shape(), other.shape());
        if s.is_multiple_of(self.p) {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if b != 0 {
                *a = add_mod(*a, mul_mod(b, s, self.p), self.p);
            }
        }
    }

    /// Kronecker product; column `(a, s)` of the result is `col_a(self) ⊗ col_s(other)`.
    pub fn kron(&self, other: &FpMatrix) -> FpMatrix {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let mut out = FpMatrix::zeros(self.p, r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        let b = other.get(k, l);
                        if b != 0 {
                            out.data[(i * r2 + k) * (c1 * c2) + j * c2 + l] = mul_mod(a, b, self.p);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(p: u32, rows: usize, blocks: &[&FpMatrix]) -> FpMatrix {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = FpMatrix::zeros(p, rows, cols);
        let mut off = 0;
        for b in blocks {
            debug_assert_eq!(b.rows, rows);
            out.paste(0, off, b);
            off += b.cols;
        }
        out
    }

    pub fn vstack(p: u32, cols: usize, blocks: &[&FpMatrix]) -> FpMatrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            debug_assert_eq!(b.cols, cols);
            data.extend_from_slice(&b.data);
        }
        FpMatrix::from_flat(p, rows, cols, data)
    }

    pub fn block_diag(p: u32, blocks: &[&FpMatrix]) -> FpMatrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = FpMatrix::zeros(p, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.paste(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &FpMatrix) {
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix::from_fn(self.p, rows, cols, |r, c| self.get(r0 + r, c0 + c))
    }

    pub fn select_columns(&self, cols: &[usize]) -> FpMatrix {
        FpMatrix::from_fn(self.p, self.rows, cols.len(), |r, c| self.get(r, cols[c]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> FpMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        FpMatrix::from_flat(self.p, rows.len(), self.cols, data)
    }

    /// Reduced row echelon form and rank.
    pub fn rref(&self) -> (FpMatrix, usize) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots.len())
    }

    /// Row-reduces in place and returns the pivot columns (one per nonzero row).
    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..cols {
            if pr == rows {
                break;
            }
            let Some(found) = (pr..rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if found != pr {
                for k in 0..cols {
                    self.data.swap(found * cols + k, pr * cols + k);
                }
            }
            let inv = inv_mod(self.data[pr * cols + c], p);
            if inv != 1 {
                for k in c..cols {
                    let v = self.data[pr * cols + k];
                    if v != 0 {
                        self.data[pr * cols + k] = mul_mod(v, inv, p);
                    }
                }
            }
            let (before, rest) = self.data.split_at_mut(pr * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let pivot_row = &pivot_row[..];
            let eliminate = |row: &mut [u32]| {
                let f = row[c];
                if f == 0 {
                    return;
                }
                let f = (p - f) as u64;
                for k in c..cols {
                    let b = pivot_row[k];
                    if b != 0 {
                        row[k] = ((row[k] as u64 + f * b as u64) % p as u64) as u32;
                    }
                }
            };
            before.chunks_mut(cols).for_each(eliminate);
            after.chunks_mut(cols).for_each(eliminate);
            pivots.push(c);
            pr += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Eliminating along the shorter side is cheaper.
        if self.rows > self.cols {
            self.transpose().clone().rref_in_place().len()
        } else {
            self.clone().rref_in_place().len()
        }
    }

    /// Basis of `{v : self · v = 0}`.
    pub fn kernel_basis(&self) -> Subspace {
        let (r, pivots) = {
            let mut m = self.clone();
            let piv = m.rref_in_place();
            (m, piv)
        };
        let n = self.cols;
        let mut is_pivot = vec![usize::MAX; n];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = row;
        }
        let mut basis = Vec::new();
        for f in (0..n).filter(|&c| is_pivot[c] == usize::MAX) {
            let mut v = vec![0u32; n];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = neg_mod(r.get(row, f), self.p);
            }
            basis.push(v);
        }
        let sub = Subspace::from_vectors(self.p, n, &basis);
        debug_assert_eq!(sub.dim() + pivots.len(), n, "rank-nullity");
        sub
    }

    /// Solves `self · X = b`; free variables are set to zero.
    pub fn solve_right(&self, b: &FpMatrix) -> Result<Option<FpMatrix>> {
        self.check_same(b)?;
        if self.rows != b.rows {
            return Err(Error::ShapeMismatch(format!(
                "solve_right: lhs has {} rows, rhs has {}",
                self.rows, b.rows
            )));
        }
        let n = self.cols;
        let mut aug = FpMatrix::hstack(self.p, self.rows, &[self, b]);
        let pivots = aug.rref_in_place();
        if pivots.iter().any(|&c| c >= n) {
            return Ok(None);
        }
        let mut x = FpMatrix::zeros(self.p, n, b.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.data[pc * b.cols + c] = aug.get(row, n + c);
            }
        }
        Ok(Some(x))
    }

    /// Basis of the column space.
    pub fn image_basis(&self) -> Subspace {
        Subspace::from_spanning_rows(&self.transpose())
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::from_spanning_rows(self)
    }
}

/// A subspace of GF(p)^n held by its reduced-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, ambient: usize) -> Self {
        Subspace { ambient, basis: FpMatrix::zeros(p, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        Subspace { ambient, basis: FpMatrix::identity(p, ambient), pivots: (0..ambient).collect() }
    }

    pub fn from_spanning_rows(m: &FpMatrix) -> Self {
        let mut b = m.clone();
        let pivots = b.rref_in_place();
        b.rows = pivots.len();
        b.data.truncate(pivots.len() * b.cols);
        Subspace { ambient: m.cols, basis: b, pivots }
    }

    pub fn from_vectors(p: u32, ambient: usize, vectors: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(vectors.len() * ambient);
        for v in vectors {
            debug_assert_eq!(v.len(), ambient);
            data.extend_from_slice(v);
        }
        Subspace::from_spanning_rows(&FpMatrix::from_flat(p, vectors.len(), ambient, data))
    }

    pub fn modulus(&self) -> u32 {
        self.basis.p
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Rows are the reduced-echelon basis vectors.
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vector(&self, i: usize) -> &[u32] {
        self.basis.row(i)
    }

    /// `v` minus its echelon reduction against the basis; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.basis.p;
        let mut r = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let f = r[pc];
            if f == 0 {
                continue;
            }
            let f = neg_mod(f, p);
            for (x, &b) in r.iter_mut().zip(self.basis.row(i)) {
                if b != 0 {
                    *x = add_mod(*x, mul_mod(f, b, p), p);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        let c: Vec<u32> = self.pivots.iter().map(|&pc| v[pc]).collect();
        let p = self.basis.p;
        let mut recon = vec![0u32; self.ambient];
        for (i, &ci) in c.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (x, &b) in recon.iter_mut().zip(self.basis.row(i)) {
                if b != 0 {
                    *x = add_mod(*x, mul_mod(ci, b, p), p);
                }
            }
        }
        (recon == v).then_some(c)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let stacked = FpMatrix::vstack(self.basis.p, self.ambient, &[&self.basis, &other.basis]);
        Ok(Subspace::from_spanning_rows(&stacked))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        // Solve a·U = b·V: kernel of [U^T | -V^T].
        let p = self.basis.p;
        let m = FpMatrix::hstack(p, self.ambient, &[&self.basis.transpose(), &other.basis.transpose().neg()]);
        let ker = m.kernel_basis();
        let k = self.dim();
        let mut vectors = Vec::with_capacity(ker.dim());
        for i in 0..ker.dim() {
            let coeffs = &ker.vector(i)[..k];
            vectors.push(self.combine(coeffs));
        }
        Ok(Subspace::from_vectors(p, self.ambient, &vectors))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && (0..self.dim()).all(|i| other.contains(self.vector(i)))
    }

    /// Linear combination of basis vectors.
    pub fn combine(&self, coeffs: &[u32]) -> Vec<u32> {
        let p = self.basis.p;
        let mut v = vec![0u32; self.ambient];
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                if b != 0 {
                    *x = add_mod(*x, mul_mod(c, b, p), p);
                }
            }
        }
        v
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        same_modulus(self.basis.p, other.basis.p)?;
        if self.ambient != other.ambient {
            return Err(Error::Dimension(format!(
                "subspaces of GF(p)^{} and GF(p)^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

/// The canonical projection onto `ambient / sub`.
///
/// The quotient basis is the image of the standard basis vectors at the
/// non-pivot positions of `sub`, so `complement[t]` indexes a lift of basis
/// vector `t`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub projection: FpMatrix,
    pub complement: Vec<usize>,
    sub: Subspace,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn kernel(&self) -> &Subspace {
        &self.sub
    }

    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        let r = self.sub.reduce(v);
        self.complement.iter().map(|&c| r[c]).collect()
    }
}

pub fn quotient_map(ambient: usize, sub: &Subspace) -> Result<Quotient> {
    if sub.ambient() != ambient {
        return Err(Error::Dimension(format!(
            "subspace lives in dimension {}, not {ambient}",
            sub.ambient()
        )));
    }
    let p = sub.modulus();
    let mut is_pivot = vec![false; ambient];
    for &c in sub.pivots() {
        is_pivot[c] = true;
    }
    let complement: Vec<usize> = (0..ambient).filter(|&c| !is_pivot[c]).collect();
    let mut position = vec![usize::MAX; ambient];
    for (t, &c) in complement.iter().enumerate() {
        position[c] = t;
    }
    let mut projection = FpMatrix::zeros(p, complement.len(), ambient);
    for (t, &c) in complement.iter().enumerate() {
        projection.data[t * ambient + c] = 1 % p;
    }
    for (i, &pc) in sub.pivots().iter().enumerate() {
        // e_pc ≡ e_pc - row_i, which is supported on the complement.
        for (c, &b) in sub.vector(i).iter().enumerate() {
            if b != 0 && !is_pivot[c] {
                projection.data[position[c] * ambient + pc] = neg_mod(b, p);
            }
        }
    }
    Ok(Quotient { projection, complement, sub: sub.clone() })
}
