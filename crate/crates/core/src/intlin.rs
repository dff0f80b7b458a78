//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers. The central
//! routine is [`smith_normal_form`], which produces a factorization
//! `A = U·S·V` with unimodular `U`, `V` and a diagonal `S` whose entries form
//! a divisibility chain. Integer kernels, cokernels and exact solves are all
//! read off that factorization.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntLinError {
    #[error("matrix data has {len} entries, expected {rows}x{cols}")]
    Shape { rows: usize, cols: usize, len: usize },
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("invariant factors must be > 1 and form a divisibility chain, got {0:?}")]
    BadInvariants(Vec<BigInt>),
}

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, IntLinError> {
        if data.len() != rows * cols {
            return Err(IntLinError::Shape {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// `-I` of size `n`.
    pub fn negative_identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = -BigInt::one();
        }
        m
    }

    /// Builds a matrix from `i64` rows. An empty slice gives a `0 x 0` matrix;
    /// use [`IntMatrix::from_i64_rows_with_cols`] when the column count matters.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, IntLinError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_i64_rows_with_cols(rows, cols)
    }

    pub fn from_i64_rows_with_cols<R: AsRef<[i64]>>(
        rows: &[R],
        cols: usize,
    ) -> Result<Self, IntLinError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(IntLinError::Ragged {
                    row: i,
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_big_rows(rows: &[Vec<BigInt>], cols: usize) -> Result<Self, IntLinError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(IntLinError::Ragged {
                    row: i,
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_i64_columns<R: AsRef<[i64]>>(
        columns: &[R],
        rows: usize,
    ) -> Result<Self, IntLinError> {
        Ok(Self::from_i64_rows_with_cols(columns, rows)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Matrix product. Panics on a dimension mismatch.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "dimension mismatch in matrix product"
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Applies the matrix to a small integer vector. `None` if the image does
    /// not fit in `i64`.
    pub fn apply_i64(&self, v: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, &b)| acc + a * b)
                    .to_i64()
            })
            .collect()
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// Vertical concatenation.
    pub fn stack(blocks: &[IntMatrix], cols: usize) -> IntMatrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "column mismatch when stacking");
            rows += b.rows;
            data.extend(b.data.iter().cloned());
        }
        IntMatrix { rows, cols, data }
    }

    /// Sub-matrix formed by the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend(self.row(r).iter().cloned());
        }
        IntMatrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        self.transpose().select_rows(cols).transpose()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.row_vectors();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    /// Rank by fraction-free elimination. Independent of the SNF code path.
    pub fn rank(&self) -> usize {
        let mut m = self.row_vectors();
        let (rows, cols) = (self.rows, self.cols);
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(p, r);
            for i in r + 1..rows {
                if m[i][c].is_zero() {
                    continue;
                }
                let (a, b) = (m[r][c].clone(), m[i][c].clone());
                for j in c..cols {
                    let v = &m[i][j] * &a - &m[r][j] * &b;
                    m[i][j] = v;
                }
            }
            r += 1;
            if r == rows {
                break;
            }
        }
        r
    }

    /// Classical adjugate, `adj(A)·A = det(A)·I`.
    pub fn adjugate(&self) -> IntMatrix {
        assert!(self.is_square());
        let n = self.rows;
        if n == 1 {
            return IntMatrix::identity(1);
        }
        let mut adj = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let keep_rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
                let keep_cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let minor = self.select_rows(&keep_rows).select_columns(&keep_cols).det();
                let cof = if (i + j) % 2 == 0 { minor } else { -minor };
                adj.set(j, i, cof);
            }
        }
        adj
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// `Some(X)` with `X·self = rhs` when `self` is invertible over ℚ and the
    /// unique rational solution is integral.
    pub fn solve_left_integral(&self, rhs: &IntMatrix) -> Option<IntMatrix> {
        assert!(self.is_square() && rhs.cols == self.cols);
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        let scaled = rhs.mul(&self.adjugate());
        let mut data = Vec::with_capacity(scaled.data.len());
        for e in &scaled.data {
            let (q, r) = e.div_rem(&det);
            if !r.is_zero() {
                return None;
            }
            data.push(q);
        }
        Some(IntMatrix {
            rows: scaled.rows,
            cols: scaled.cols,
            data,
        })
    }

    /// Entries as `i64` rows, `None` on overflow.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.to_i64()).collect())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * c;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * c;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl PartialOrd for IntMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shape first, then row-major lexicographic order of the entries.
impl Ord for IntMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rows, self.cols)
            .cmp(&(other.rows, other.cols))
            .then_with(|| self.data.cmp(&other.data))
    }
}

/// `A = U·S·V` with `U`, `V` unimodular and `S` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    u_inv: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfResult {
    /// Inverse of `U`, so that `U⁻¹·A·V⁻¹ = S`.
    pub fn u_inverse(&self) -> &IntMatrix {
        &self.u_inv
    }

    pub fn v_inverse(&self) -> &IntMatrix {
        &self.v_inv
    }

    /// Nonzero diagonal entries of `S`, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k)
            .map(|i| self.s.get(i, i).clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Working state of the reduction. Keeps `A = u·w·v` and the two inverses in
/// sync with every elementary operation applied to `w`.
struct Reducer {
    w: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.w.swap_rows(a, b);
        self.u.swap_cols(a, b);
        self.u_inv.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.w.swap_cols(a, b);
        self.v.swap_rows(a, b);
        self.v_inv.swap_cols(a, b);
    }

    /// row[dst] += c * row[src] on w.
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.w.add_row_multiple(dst, src, c);
        self.u.add_col_multiple(src, dst, &-c);
        self.u_inv.add_row_multiple(dst, src, c);
    }

    /// col[dst] += c * col[src] on w.
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.w.add_col_multiple(dst, src, c);
        self.v.add_row_multiple(src, dst, &-c);
        self.v_inv.add_col_multiple(dst, src, c);
    }

    fn negate_row(&mut self, i: usize) {
        self.w.negate_row(i);
        self.u.negate_col(i);
        self.u_inv.negate_row(i);
    }

    /// Smallest nonzero |entry| among `cells`, ties by (row, col).
    fn min_abs(&self, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for (i, j) in cells {
            let e = self.w.get(i, j);
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            let better = match &best {
                None => true,
                Some((pos, b)) => a < *b || (a == *b && (i, j) < *pos),
            };
            if better {
                best = Some(((i, j), a));
            }
        }
        best.map(|(p, _)| p)
    }
}

/// Smith normal form with unimodular transforms.
///
/// Pivots are chosen by smallest absolute value, ties broken by smallest
/// `(row, col)`, so the output is deterministic.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut r = Reducer {
        w: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    for t in 0..m.min(n) {
        let cells = (t..m).flat_map(|i| (t..n).map(move |j| (i, j)));
        let Some((pi, pj)) = r.min_abs(cells) else {
            break;
        };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let pivot = r.w.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..m {
                let q = r.w.get(i, t).div_floor(&pivot);
                r.add_row(i, t, &-q);
                dirty |= !r.w.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = r.w.get(t, j).div_floor(&pivot);
                r.add_col(j, t, &-q);
                dirty |= !r.w.get(t, j).is_zero();
            }
            if dirty {
                let cross = std::iter::once((t, t))
                    .chain((t + 1..m).map(|i| (i, t)))
                    .chain((t + 1..n).map(|j| (t, j)));
                let (pi, pj) = r.min_abs(cross).expect("pivot row/column is nonzero");
                r.swap_rows(t, pi);
                r.swap_cols(t, pj);
                continue;
            }
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !r.w.get(i, j).is_multiple_of(&pivot));
            match bad {
                Some((i, _)) => r.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if r.w.get(t, t).is_negative() {
            r.negate_row(t);
        }
    }
    SnfResult {
        u: r.u,
        s: r.w,
        v: r.v,
        u_inv: r.u_inv,
        v_inv: r.v_inv,
    }
}

/// Row-style Hermite reduction of a list of integer vectors. Returns a basis
/// of the lattice they span: leading entries positive, entries above each
/// pivot reduced into `[0, pivot)`.
pub fn hermite_rows(vectors: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(width) = vectors.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut rows: Vec<Vec<BigInt>> = vectors.to_vec();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..width {
        if pivot_row == rows.len() {
            break;
        }
        // Euclid down column c among rows pivot_row..
        loop {
            let nz: Vec<usize> = (pivot_row..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    rows.swap(i, pivot_row);
                }
                break;
            }
            let best = *nz
                .iter()
                .min_by(|&&a, &&b| rows[a][c].abs().cmp(&rows[b][c].abs()).then(a.cmp(&b)))
                .unwrap();
            rows.swap(best, pivot_row);
            for i in pivot_row + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[pivot_row][c]);
                let src = rows[pivot_row].clone();
                for (x, s) in rows[i].iter_mut().zip(&src) {
                    *x -= &q * s;
                }
            }
        }
        if rows[pivot_row][c].is_zero() {
            continue;
        }
        if rows[pivot_row][c].is_negative() {
            for x in rows[pivot_row].iter_mut() {
                *x = -&*x;
            }
        }
        let src = rows[pivot_row].clone();
        for row in rows.iter_mut().take(pivot_row) {
            let q = row[c].div_floor(&src[c]);
            for (x, s) in row.iter_mut().zip(&src) {
                *x -= &q * s;
            }
        }
        pivots.push(c);
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows
}

/// Basis of the saturated kernel `{x ∈ ℤ^cols : A·x = 0}`, in Hermite form.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let raw: Vec<Vec<BigInt>> = (r..a.cols()).map(|j| snf.v_inv.column(j)).collect();
    hermite_rows(&raw)
}

/// One integer solution of `A·x = b`, or `None` if none exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let snf = smith_normal_form(a);
    let c = snf.u_inv.mul_vec(b);
    let d = snf.invariant_factors();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        match d.get(i) {
            Some(di) => {
                let (q, rem) = ci.div_rem(di);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = q;
            }
            None if !ci.is_zero() => return None,
            None => {}
        }
    }
    Some(snf.v_inv.mul_vec(&y))
}

/// Finitely generated abelian group `ℤ^r ⊕ ℤ/t₁ ⊕ … ⊕ ℤ/t_k` with
/// `1 < t₁ | t₂ | … | t_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, IntLinError> {
        let ok = torsion.iter().all(|t| *t > BigInt::one())
            && torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        if !ok {
            return Err(IntLinError::BadInvariants(torsion));
        }
        Ok(Self { free_rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Coordinates of a cokernel element: torsion residues then free part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassCoords {
    pub torsion: Vec<BigInt>,
    pub free: Vec<BigInt>,
}

/// The quotient map `ℤ^rows → coker(A)` in canonical coordinates.
#[derive(Clone, Debug)]
pub struct CokernelMap {
    u_inv: IntMatrix,
    factors: Vec<BigInt>,
}

impl CokernelMap {
    pub fn project(&self, x: &[BigInt]) -> ClassCoords {
        let y = self.u_inv.mul_vec(x);
        let r = self.factors.len();
        let torsion = self
            .factors
            .iter()
            .zip(&y)
            .filter(|(d, _)| **d > BigInt::one())
            .map(|(d, yi)| yi.mod_floor(d))
            .collect();
        ClassCoords {
            torsion,
            free: y[r..].to_vec(),
        }
    }

    pub fn project_i64(&self, x: &[i64]) -> ClassCoords {
        let x: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.project(&x)
    }

    /// Image of the i-th standard basis vector.
    pub fn project_basis(&self, i: usize) -> ClassCoords {
        let mut e = vec![BigInt::zero(); self.u_inv.cols()];
        e[i] = BigInt::one();
        self.project(&e)
    }
}

/// `coker(A) = ℤ^rows / A·ℤ^cols` in canonical form, with its projection.
pub fn cokernel_group(a: &IntMatrix) -> (FgAbelianGroup, CokernelMap) {
    let snf = smith_normal_form(a);
    let factors = snf.invariant_factors();
    let torsion: Vec<BigInt> = factors
        .iter()
        .filter(|d| **d > BigInt::one())
        .cloned()
        .collect();
    let group = FgAbelianGroup {
        free_rank: a.rows() - factors.len(),
        torsion,
    };
    (
        group,
        CokernelMap {
            u_inv: snf.u_inv,
            factors,
        },
    )
}

/// Greatest common divisor of a slice of machine integers (0 for all-zero).
pub fn gcd_i64(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
