//! Dense matrices, reduced row-echelon form, kernels and canonical subspaces over F_p.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Fp;

/// Row-major dense matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from rows of residues; entries are reduced mod p.
    pub fn from_rows(field: Fp, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has length {}, expected {}",
                    i,
                    r.len(),
                    cols
                )));
            }
            data.extend(r.iter().map(|&v| v % field.p()));
        }
        Ok(FpMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Build from signed integer rows.
    pub fn from_i64_rows(field: Fp, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let reduced: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, cols, &reduced)
    }

    pub(crate) fn from_raw(field: Fp, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        FpMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        self.row_iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(0u32, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = FpMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        rref_in_place(self.field, self.rows, self.cols, &mut data).len()
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix over {} ({}x{})", self.field, self.rows, self.cols)?;
        for r in self.row_iter() {
            writeln!(f, "  {:?}", r)?;
        }
        Ok(())
    }
}

/// Reduced row-echelon form and pivot columns. Zero rows stay at the bottom.
pub fn rref(m: &FpMatrix) -> (FpMatrix, Vec<usize>) {
    let mut data = m.data.clone();
    let pivots = rref_in_place(m.field, m.rows, m.cols, &mut data);
    (FpMatrix::from_raw(m.field, m.rows, m.cols, data), pivots)
}

/// Gauss-Jordan elimination on a row-major buffer.
pub(crate) fn rref_in_place(field: Fp, rows: usize, cols: usize, data: &mut [u32]) -> Vec<usize> {
    if field.p() == 2 {
        rref_f2(rows, cols, data)
    } else {
        rref_generic(field, rows, cols, data)
    }
}

fn swap_rows(data: &mut [u32], cols: usize, a: usize, b: usize) {
    if a == b {
        return;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let (head, tail) = data.split_at_mut(hi * cols);
    head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
}

fn rref_generic(field: Fp, rows: usize, cols: usize, data: &mut [u32]) -> Vec<usize> {
    let p = field.p() as u64;
    let mut pivots = Vec::new();
    let mut pr = 0;
    let mut nz: Vec<(usize, u64)> = Vec::new();
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(found) = (pr..rows).find(|&r| data[r * cols + c] != 0) else {
            continue;
        };
        swap_rows(data, cols, pr, found);
        let inv = field.inv(data[pr * cols + c]);
        nz.clear();
        for j in c..cols {
            let v = data[pr * cols + j];
            if v != 0 {
                let nv = field.mul(v, inv);
                data[pr * cols + j] = nv;
                nz.push((j, nv as u64));
            }
        }
        for r in 0..rows {
            if r == pr {
                continue;
            }
            let lead = data[r * cols + c];
            if lead == 0 {
                continue;
            }
            let factor = p - lead as u64;
            let row = &mut data[r * cols..(r + 1) * cols];
            for &(j, v) in &nz {
                row[j] = ((row[j] as u64 + factor * v) % p) as u32;
            }
        }
        pivots.push(c);
        pr += 1;
    }
    pivots
}

fn rref_f2(rows: usize, cols: usize, data: &mut [u32]) -> Vec<usize> {
    let words = cols.div_ceil(64);
    let mut packed = vec![0u64; rows * words];
    for r in 0..rows {
        for c in 0..cols {
            if data[r * cols + c] & 1 == 1 {
                packed[r * words + c / 64] |= 1u64 << (c % 64);
            }
        }
    }
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let w = c / 64;
        let bit = 1u64 << (c % 64);
        let Some(found) = (pr..rows).find(|&r| packed[r * words + w] & bit != 0) else {
            continue;
        };
        if found != pr {
            for k in 0..words {
                packed.swap(pr * words + k, found * words + k);
            }
        }
        let pivot_row: Vec<u64> = packed[pr * words + w..(pr + 1) * words].to_vec();
        for r in 0..rows {
            if r != pr && packed[r * words + w] & bit != 0 {
                for (k, pv) in pivot_row.iter().enumerate() {
                    packed[r * words + w + k] ^= pv;
                }
            }
        }
        pivots.push(c);
        pr += 1;
    }
    for r in 0..rows {
        for c in 0..cols {
            data[r * cols + c] = ((packed[r * words + c / 64] >> (c % 64)) & 1) as u32;
        }
    }
    pivots
}

/// `{v : m v = 0}`.
pub fn kernel(m: &FpMatrix) -> Subspace {
    let (r, pivots) = rref(m);
    let f = m.field;
    let n = m.cols;
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut vectors = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; n];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(r.get(i, free));
        }
        vectors.push(v);
    }
    Subspace::span(f, n, &vectors)
}

/// A subspace of F_p^n stored canonically as its RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Fp, ambient: usize) -> Self {
        Subspace {
            basis: FpMatrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Fp, ambient: usize) -> Self {
        Subspace {
            basis: FpMatrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary vectors (entries reduced mod p).
    pub fn span(field: Fp, ambient: usize, vectors: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(vectors.len() * ambient);
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length must match ambient dimension");
            data.extend(v.iter().map(|&x| x % field.p()));
        }
        Self::from_buffer(field, vectors.len(), ambient, data)
    }

    pub fn row_space(m: &FpMatrix) -> Self {
        Self::from_buffer(m.field, m.rows, m.cols, m.data.clone())
    }

    pub(crate) fn from_buffer(field: Fp, rows: usize, cols: usize, mut data: Vec<u32>) -> Self {
        let pivots = rref_in_place(field, rows, cols, &mut data);
        data.truncate(pivots.len() * cols);
        Subspace {
            basis: FpMatrix::from_raw(field, pivots.len(), cols, data),
            pivots,
        }
    }

    pub fn field(&self) -> Fp {
        self.basis.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    /// The RREF basis matrix (no zero rows).
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the basis; the result vanishes on all pivot columns.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut out: Vec<u32> = v.iter().map(|&x| x % f.p()).collect();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = out[pc];
            if c == 0 {
                continue;
            }
            for (j, &b) in self.basis.row(i).iter().enumerate() {
                if b != 0 {
                    out[j] = f.sub(out[j], f.mul(c, b));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.ambient_dim() && self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Orthogonal complement under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        kernel(&self.basis)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field().p(), other.field().p()));
        }
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "ambient {} vs {}",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        let mut data = self.basis.data.clone();
        data.extend_from_slice(&other.basis.data);
        Ok(Self::from_buffer(
            self.field(),
            self.dim() + other.dim(),
            self.ambient_dim(),
            data,
        ))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.row_iter().all(|r| other.contains(r))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in {}^{}, pivots {:?})",
            self.dim(),
            self.field(),
            self.ambient_dim(),
            self.pivots
        )
    }
}
