//! Dense matrices and exact elimination.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldTag, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>, // row-major
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Build from rows of equal length. An empty row list gives a `0 x cols` matrix.
    pub fn from_rows(rows: Vec<Vec<F::Elem>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    /// Build from column vectors of equal length.
    pub fn from_columns(field: &F, columns: &[Vec<F::Elem>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows, cols);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: col.len() });
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut entry: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(entry(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn row_mut(&mut self, r: usize) -> &mut [F::Elem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, field: &F, other: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Matrix::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = field.mul_add(out.get(i, j), a, other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, field: &F, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|r| dot(field, self.row(r), v))
            .collect())
    }

    pub fn is_zero(&self, field: &F) -> bool {
        self.data.iter().all(|x| field.is_zero(x))
    }

    pub fn rank(&self, field: &F) -> usize {
        let mut m = self.clone();
        field.echelonize(&mut m).len()
    }

    pub fn inverse(&self, field: &F) -> Result<Matrix<F>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, field.one());
        }
        let pivots = field.echelonize(&mut aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Matrix::from_fn(n, n, |r, c| aug.get(r, n + c).clone()))
    }

    /// Solve `self * x = b` for a square invertible matrix.
    pub fn solve(&self, field: &F, b: &[F::Elem]) -> Result<Vec<F::Elem>> {
        self.inverse(field)?.mul_vec(field, b)
    }

    pub fn to_json(&self, field: &F) -> MatrixJson {
        MatrixJson {
            field: field.tag(),
            rows: self.rows,
            cols: self.cols,
            entries: self.to_rows().iter().map(|r| r.iter().map(|x| field.format(x)).collect()).collect(),
        }
    }

    pub fn from_json(field: &F, json: &MatrixJson) -> Result<Self> {
        check_tag(field, json.field)?;
        if json.entries.len() != json.rows {
            return Err(Error::DimensionMismatch { expected: json.rows, found: json.entries.len() });
        }
        let rows = json
            .entries
            .iter()
            .map(|r| r.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows, json.cols)
    }
}

pub(crate) fn check_tag<F: Field>(field: &F, tag: FieldTag) -> Result<()> {
    if field.tag() != tag {
        return Err(Error::Parse(format!("field mismatch: have {}, file says {}", field.tag(), tag)));
    }
    Ok(())
}

/// JSON form of a matrix: field tag plus decimal-string entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: FieldTag,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

pub fn dot<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter().zip(b).fold(field.zero(), |acc, (x, y)| field.mul_add(&acc, x, y))
}

/// Generic Gauss-Jordan elimination to reduced row echelon form.
pub fn gauss_jordan<F: Field>(field: &F, m: &mut Matrix<F>) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = field.inv(m.get(r, c)).expect("nonzero pivot");
        for x in m.row_mut(r) {
            *x = field.mul(x, &inv);
        }
        let pivot_row = m.row(r).to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c).clone();
            if field.is_zero(&factor) {
                continue;
            }
            for (x, y) in m.row_mut(i).iter_mut().zip(&pivot_row).skip(c) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Gauss-Jordan specialised to 𝔽_p with p < 2^32: row updates use raw
/// `u64` arithmetic and one reduction per entry.
pub fn gauss_jordan_fp(field: &PrimeField, m: &mut Matrix<PrimeField>) -> Vec<usize> {
    let p = field.modulus();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m.data[i * cols + c] != 0) else {
            continue;
        };
        m.swap_rows(r, piv);
        let inv = field.inv(&m.data[r * cols + c]).expect("nonzero pivot");
        for x in &mut m.data[r * cols + c..(r + 1) * cols] {
            *x = *x * inv % p;
        }
        let (before, rest) = m.data.split_at_mut(r * cols);
        let (pivot_row, after) = rest.split_at_mut(cols);
        let eliminate = |row: &mut [u64]| {
            let factor = row[c];
            if factor == 0 {
                return;
            }
            let neg = p - factor;
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = (*x + neg * y) % p;
            }
        };
        before.chunks_mut(cols).for_each(eliminate);
        after.chunks_mut(cols).for_each(eliminate);
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel basis read off a reduced row echelon form.
pub fn kernel_from_rref<F: Field>(field: &F, rref: &[Vec<F::Elem>], pivots: &[usize], cols: usize) -> Vec<Vec<F::Elem>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); cols];
            v[free] = field.one();
            for (row, &pc) in rref.iter().zip(pivots) {
                v[pc] = field.neg(&row[free]);
            }
            v
        })
        .collect()
}

/// Rank and a kernel basis of `m`. Kernel vectors satisfy `m * v = 0`
/// exactly and `rank + kernel.len() == m.cols()`.
pub fn rref_kernel<F: Field>(field: &F, m: &Matrix<F>) -> (usize, Vec<Vec<F::Elem>>) {
    let mut red = m.clone();
    let pivots = field.echelonize(&mut red);
    let rows: Vec<Vec<F::Elem>> = (0..pivots.len()).map(|r| red.row(r).to_vec()).collect();
    let kernel = kernel_from_rref(field, &rows, &pivots, m.cols);
    (pivots.len(), kernel)
}

/// Indices of the rows that are independent of all earlier rows: the pivot
/// columns of the transpose.
pub fn rank_profile<F: Field>(field: &F, rows: &[Vec<F::Elem>]) -> Vec<usize> {
    let Some(first) = rows.first() else { return Vec::new() };
    let mut t = Matrix::from_fn(first.len(), rows.len(), |r, c| rows[c][r].clone());
    field.echelonize(&mut t)
}

/// Incrementally maintained reduced row echelon basis of a row space.
#[derive(Clone, Debug)]
pub struct RowEchelon<F: Field> {
    cols: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> RowEchelon<F> {
    pub fn new(cols: usize) -> Self {
        RowEchelon { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows<'a>(field: &F, cols: usize, rows: impl IntoIterator<Item = &'a Vec<F::Elem>>) -> Self
    where
        F::Elem: 'a,
    {
        let collected: Vec<Vec<F::Elem>> = rows.into_iter().cloned().collect();
        let mut m = Matrix::from_rows(collected, cols).expect("rows of equal length");
        let pivots = field.echelonize(&mut m);
        let rows = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        RowEchelon { cols, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, field: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let factor = v[pc].clone();
            if field.is_zero(&factor) {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row).skip(pc) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&factor, y));
                }
            }
        }
        v
    }

    pub fn contains(&self, field: &F, v: &[F::Elem]) -> bool {
        self.reduce(field, v).iter().all(|x| field.is_zero(x))
    }

    /// Add a row; returns true when the rank grew.
    pub fn insert(&mut self, field: &F, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.cols, "row length");
        let mut v = self.reduce(field, v);
        let Some(pc) = v.iter().position(|x| !field.is_zero(x)) else {
            return false;
        };
        let inv = field.inv(&v[pc]).expect("nonzero");
        for x in v.iter_mut().skip(pc) {
            *x = field.mul(x, &inv);
        }
        for row in self.rows.iter_mut() {
            let factor = row[pc].clone();
            if field.is_zero(&factor) {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&v).skip(pc) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&factor, y));
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, v);
        true
    }

    pub fn kernel(&self, field: &F) -> Vec<Vec<F::Elem>> {
        kernel_from_rref(field, &self.rows, &self.pivots, self.cols)
    }

    /// Subspace inclusion `self ⊆ other`.
    pub fn is_subspace_of(&self, field: &F, other: &RowEchelon<F>) -> bool {
        self.rows.iter().all(|r| other.contains(field, r))
    }
}

impl<F: Field> PartialEq for RowEchelon<F> {
    /// Reduced echelon bases are canonical, so span equality is structural.
    fn eq(&self, other: &Self) -> bool {
        self.cols == other.cols && self.pivots == other.pivots && self.rows == other.rows
    }
}

/// Basis (in reduced echelon form) of the intersection of two row spaces.
pub fn intersect_row_spaces<F: Field>(field: &F, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>], cols: usize) -> RowEchelon<F> {
    // (α, β) with Σ α_i a_i = Σ β_j b_j: kernel of the column matrix [A^T | -B^T]
    if a.is_empty() || b.is_empty() {
        return RowEchelon::new(cols);
    }
    let mut columns: Vec<Vec<F::Elem>> = a.to_vec();
    columns.extend(b.iter().map(|v| v.iter().map(|x| field.neg(x)).collect()));
    let m = Matrix::from_columns(field, &columns).expect("equal lengths");
    let (_, kernel) = rref_kernel(field, &m);
    let vectors: Vec<Vec<F::Elem>> = kernel
        .iter()
        .map(|coeffs| {
            let mut v = vec![field.zero(); cols];
            for (c, row) in coeffs.iter().zip(a) {
                if field.is_zero(c) {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(row) {
                    *x = field.mul_add(x, c, y);
                }
            }
            v
        })
        .collect();
    RowEchelon::from_rows(field, cols, &vectors)
}
