use std::fmt;
use std::ops::{Deref, DerefMut, Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Dense vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Rational::zero(); dim])
    }

    pub fn from_vec(v: Vec<Rational>) -> Self {
        QVector(v)
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(it: I) -> Self {
        QVector(it.into_iter().map(Rational::from_integer).collect())
    }

    /// 0/1 vector with ones at the given offsets.
    pub fn indicator(dim: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(dim);
        for &i in ones {
            v.0[i] = Rational::one();
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = Rational::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    /// Dot product against a 0/1 vector given by its one-positions.
    pub fn dot_ones(&self, ones: &[usize]) -> Rational {
        ones.iter().map(|&i| &self.0[i]).sum()
    }

    pub fn add(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> QVector {
        QVector(self.0.iter().map(|a| a * s).collect())
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: &Rational, other: &QVector) {
        if s.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a += s * b;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    /// Rescales to a primitive integer vector whose first nonzero entry is
    /// positive. The zero vector is returned unchanged.
    pub fn normalized_primitive(&self) -> QVector {
        let Some(first) = self.0.iter().find(|x| !x.is_zero()) else {
            return self.clone();
        };
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|x| x.numer() * (&lcm / x.denom()))
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if first.is_negative() {
            g = -g;
        }
        QVector(ints.into_iter().map(|x| Rational::from(x / &g)).collect())
    }
}

impl Deref for QVector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl DerefMut for QVector {
    fn deref_mut(&mut self) -> &mut [Rational] {
        &mut self.0
    }
}

impl FromIterator<Rational> for QVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        QVector(iter.into_iter().collect())
    }
}

impl From<Vec<Rational>> for QVector {
    fn from(v: Vec<Rational>) -> Self {
        QVector(v)
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from equal-length rows. An empty row list yields a
    /// `0 x cols` matrix.
    pub fn from_rows(rows: &[QVector], cols: usize) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.dim() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: r.dim(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(QMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let vs: Vec<QVector> = rows
            .iter()
            .map(|r| QVector::from_ints(r.iter().copied()))
            .collect();
        Self::from_rows(&vs, cols).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> QVector {
        QVector::from_vec(self.row(i).to_vec())
    }

    pub fn column_vector(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &QVector) -> Result<QVector, LinalgError> {
        if v.dim() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(i).iter().zip(v.iter()) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect())
    }

    /// `self * v` for a 0/1 vector given by its one-positions.
    pub fn mul_ones(&self, ones: &[usize]) -> QVector {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                ones.iter().map(|&j| &row[j]).sum()
            })
            .collect()
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix, LinalgError> {
        if other.rows != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduction to reduced row echelon form, choosing pivots only
    /// among the first `pivot_cols` columns. Returns the pivot columns; pivot
    /// row `i` holds a leading one in column `pivots[i]`.
    pub fn rref_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols.min(self.cols) {
            if r == self.rows {
                break;
            }
            let Some(p) = self.choose_pivot(r, c) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            let nz: Vec<usize> = (c..self.cols)
                .filter(|&j| !self[(r, j)].is_zero())
                .collect();
            for &j in &nz {
                let v = &self.data[r * self.cols + j] * &inv;
                self.data[r * self.cols + j] = v;
            }
            let pivot_row: Vec<(usize, Rational)> =
                nz.iter().map(|&j| (j, self[(r, j)].clone())).collect();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                let base = i * self.cols;
                for (j, pv) in &pivot_row {
                    let cell = &mut self.data[base + j];
                    *cell = cell.sub_mul(&f, pv);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Largest numerator magnitude, then smallest denominator, then lowest
    /// row index.
    fn choose_pivot(&self, from: usize, c: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for i in from..self.rows {
            let v = &self[(i, c)];
            if v.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => pivot_preference(v, &self[(b, c)]) == std::cmp::Ordering::Greater,
            };
            if better {
                best = Some(i);
            }
        }
        best
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place(m.cols).len()
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        if aug.rref_in_place(n).len() < n {
            return None;
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(inv)
    }
}

fn pivot_preference(a: &Rational, b: &Rational) -> std::cmp::Ordering {
    if let (Some((an, ad)), Some((bn, bd))) = (a.small_parts(), b.small_parts()) {
        return an.unsigned_abs().cmp(&bn.unsigned_abs()).then(bd.cmp(&ad));
    }
    let (an, ad) = a.pivot_key();
    let (bn, bd) = b.pivot_key();
    an.cmp(&bn).then(bd.cmp(&ad))
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Outcome of [`solve_linear_system`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(QVector),
    /// Solvable with `nullity` free directions; `particular` sets every free
    /// variable to zero.
    Underdetermined {
        particular: QVector,
        nullity: usize,
    },
    /// `witness` satisfies `witnessᵀA = 0` and `witnessᵀb ≠ 0`.
    Inconsistent {
        witness: QVector,
    },
}

pub fn solve_linear_system(a: &QMatrix, b: &QVector) -> Result<LinearSolution, LinalgError> {
    if a.rows() != b.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            found: b.dim(),
        });
    }
    let (m, n) = (a.rows(), a.cols());
    // [A | b | I] so that row operations are recorded in the last block.
    let width = n + 1 + m;
    let mut aug = QMatrix::zeros(m, width);
    for i in 0..m {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
        aug[(i, n + 1 + i)] = Rational::one();
    }
    let pivots = aug.rref_in_place(n);
    let rank = pivots.len();
    for i in rank..m {
        if !aug[(i, n)].is_zero() {
            let witness: QVector = (0..m).map(|k| aug[(i, n + 1 + k)].clone()).collect();
            return Ok(LinearSolution::Inconsistent {
                witness: witness.normalized_primitive(),
            });
        }
    }
    let mut x = QVector::zeros(n);
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[(i, n)].clone();
    }
    if rank == n {
        Ok(LinearSolution::Unique(x))
    } else {
        Ok(LinearSolution::Underdetermined {
            particular: x,
            nullity: n - rank,
        })
    }
}

pub fn matrix_rank(a: &QMatrix) -> usize {
    a.rank()
}

/// Basis of `{λ : Σ λᵢ vᵢ = 0, Σ λᵢ = 0}`, each vector scaled to a primitive
/// integer vector with positive leading entry.
pub fn affine_dependencies(points: &[QVector]) -> Result<Vec<QVector>, LinalgError> {
    let k = points.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let dim = points[0].dim();
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(LinalgError::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    // Rows: one per coordinate plus the all-ones row; columns: points.
    let mut m = QMatrix::zeros(dim + 1, k);
    for (j, p) in points.iter().enumerate() {
        for i in 0..dim {
            m[(i, j)] = p[i].clone();
        }
        m[(dim, j)] = Rational::one();
    }
    let pivots = m.rref_in_place(k);
    let mut basis = Vec::new();
    let mut pi = 0;
    for f in 0..k {
        if pi < pivots.len() && pivots[pi] == f {
            pi += 1;
            continue;
        }
        let mut lambda = QVector::zeros(k);
        lambda[f] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            lambda[pc] = -&m[(row, f)];
        }
        basis.push(lambda.normalized_primitive());
    }
    Ok(basis)
}

/// Reduced coordinate system of an affine hull.
///
/// The basis is the reduced row echelon form of the differences
/// `vᵢ - origin`, so the reduced coordinates of a hull point `p` are simply
/// the entries of `p - origin` at the pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineHullFrame {
    pub origin: QVector,
    pub basis: Vec<QVector>,
    pub pivot_columns: Vec<usize>,
}

impl AffineHullFrame {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.origin.dim()
    }

    /// Reduced coordinates of `p`, or `None` if `p` is outside the hull.
    pub fn coords_of(&self, p: &QVector) -> Option<QVector> {
        if p.dim() != self.ambient_dim() {
            return None;
        }
        let c = self.coords_unchecked(p);
        (self.reconstruct(&c) == *p).then_some(c)
    }

    /// Pivot-column read-off; only meaningful for points of the hull.
    pub fn coords_unchecked(&self, p: &QVector) -> QVector {
        self.pivot_columns
            .iter()
            .map(|&c| &p[c] - &self.origin[c])
            .collect()
    }

    pub fn reconstruct(&self, coords: &QVector) -> QVector {
        let mut p = self.origin.clone();
        for (c, b) in coords.iter().zip(&self.basis) {
            p.axpy(c, b);
        }
        p
    }
}

pub fn affine_hull_frame(points: &[QVector]) -> Result<AffineHullFrame, LinalgError> {
    let origin = points.first().cloned().unwrap_or_default();
    let dim = origin.dim();
    let diffs: Vec<QVector> = points[1.min(points.len())..]
        .iter()
        .map(|p| {
            if p.dim() != dim {
                Err(LinalgError::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                })
            } else {
                Ok(p.sub(&origin))
            }
        })
        .collect::<Result<_, _>>()?;
    let mut m = QMatrix::from_rows(&diffs, dim)?;
    let pivots = m.rref_in_place(dim);
    let basis = (0..pivots.len()).map(|i| m.row_vector(i)).collect();
    Ok(AffineHullFrame {
        origin,
        basis,
        pivot_columns: pivots,
    })
}

/// Indices of the first maximal linearly independent prefix-greedy subset of
/// rows.
pub fn independent_rows(rows: &[QVector]) -> Vec<usize> {
    let mut echelon: Vec<(usize, QVector)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        for (pc, e) in &echelon {
            let f = v[*pc].clone();
            if !f.is_zero() {
                v.axpy(&-f, e);
            }
        }
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[pc].recip();
            let v = v.scale(&inv);
            echelon.push((pc, v));
            chosen.push(idx);
        }
    }
    chosen
}
