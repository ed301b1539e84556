//! Exact linear algebra: dense rational matrices for hom spaces and path
//! quotients, and small integer matrices for lattices and the Smith form.

use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Exact rational scalar. Arithmetic is checked; overflow panics rather than wraps.
pub type Q = Ratio<i128>;

fn add(a: &Q, b: &Q) -> Q {
    a.checked_add(b).expect("rational overflow")
}

fn sub(a: &Q, b: &Q) -> Q {
    a.checked_sub(b).expect("rational overflow")
}

fn mul(a: &Q, b: &Q) -> Q {
    a.checked_mul(b).expect("rational overflow")
}

fn div(a: &Q, b: &Q) -> Q {
    a.checked_div(b).expect("rational overflow")
}

/// Dense row-major matrix over `Q`.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        QMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self::from_fn(rows, cols, |r, c| {
            Q::from_integer(entries[r * cols + c] as i128)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| *self.get(c, r))
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] = add(&out.data[idx], &mul(a, b));
                }
            }
        }
        out
    }

    /// Columns `start..start + len` as a new matrix.
    pub fn column_block(&self, start: usize, len: usize) -> QMatrix {
        Self::from_fn(self.rows, len, |r, c| *self.get(r, start + c))
    }

    /// Rows `start..start + len` as a new matrix.
    pub fn row_block(&self, start: usize, len: usize) -> QMatrix {
        Self::from_fn(len, self.cols, |r, c| *self.get(start + r, c))
    }

    /// Stack blocks side by side. All blocks must share a row count.
    pub fn hstack(rows: usize, blocks: &[&QMatrix]) -> QMatrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = QMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for r in 0..rows {
                for c in 0..b.cols {
                    out.set(r, offset + c, *b.get(r, c));
                }
            }
            offset += b.cols;
        }
        out
    }

    /// Stack blocks vertically. All blocks must share a column count.
    pub fn vstack(cols: usize, blocks: &[&QMatrix]) -> QMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = QMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            for r in 0..b.rows {
                for c in 0..cols {
                    out.set(offset + r, c, *b.get(r, c));
                }
            }
            offset += b.rows;
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = div(&Q::one(), self.get(row, col));
            for c in col..self.cols {
                let v = mul(self.get(row, c), &inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = *self.get(r, col);
                if f.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let v = sub(self.get(r, c), &mul(&f, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the null space `{x : A x = 0}`, as the columns of the result.
    pub fn kernel(&self) -> QMatrix {
        let mut r = self.clone();
        let pivots = r.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = QMatrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, Q::one());
            for (row, &p) in pivots.iter().enumerate() {
                basis.set(p, k, -*r.get(row, f));
            }
        }
        basis
    }

    /// Projection onto the cokernel of `self` (viewed as a map from a
    /// `cols`-dimensional space into a `rows`-dimensional one).
    ///
    /// Returns `P` of shape `q x rows` with `P * self = 0` and `P` surjective,
    /// where `q = rows - rank`.
    pub fn cokernel_projection(&self) -> QMatrix {
        let mut image = self.transpose();
        let pivots = image.rref();
        let free: Vec<usize> = (0..self.rows).filter(|c| !pivots.contains(c)).collect();
        let mut proj = QMatrix::zeros(free.len(), self.rows);
        for (k, &f) in free.iter().enumerate() {
            proj.set(k, f, Q::one());
        }
        for (row, &p) in pivots.iter().enumerate() {
            for (k, &f) in free.iter().enumerate() {
                proj.set(k, p, -*image.get(row, f));
            }
        }
        proj
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
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
        write!(f, "]")
    }
}

/// Dense square-or-rectangular integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.to_rows()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data
            .chunks(self.cols.max(1))
            .map(<[i64]>::to_vec)
            .take(self.rows)
            .collect()
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn min_entry(&self) -> Option<(usize, usize, i64)> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .map(|(r, c)| (r, c, self[(r, c)]))
            .min_by_key(|&(_, _, v)| v)
    }

    /// True when every row and every column holds a single 1 and zeros elsewhere.
    pub fn is_permutation(&self) -> bool {
        if self.rows != self.cols || self.data.iter().any(|&v| v != 0 && v != 1) {
            return false;
        }
        (0..self.rows).all(|r| self.row(r).iter().sum::<i64>() == 1)
            && (0..self.cols).all(|c| self.column(c).iter().sum::<i64>() == 1)
    }

    /// Smallest `k >= 1` with `self^k = I`, searching up to `limit`.
    pub fn multiplicative_order(&self, limit: usize) -> Option<usize> {
        let mut p = self.clone();
        for k in 1..=limit {
            if p.is_identity() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    /// Characteristic polynomial `det(xI - A)` as coefficients from the
    /// constant term up to the leading 1 (Faddeev-LeVerrier, exact).
    pub fn charpoly(&self) -> Result<Vec<i128>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let a: Vec<i128> = self.data.iter().map(|&v| v as i128).collect();
        let mut coeffs = vec![0i128; n + 1];
        coeffs[n] = 1;
        let mut m = vec![0i128; n * n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = vec![0i128; n * n];
            for r in 0..n {
                for c in 0..n {
                    let mut s = 0i128;
                    for t in 0..n {
                        s = s
                            .checked_add(
                                a[r * n + t]
                                    .checked_mul(m[t * n + c])
                                    .ok_or(Error::Overflow)?,
                            )
                            .ok_or(Error::Overflow)?;
                    }
                    next[r * n + c] = s;
                }
                next[r * n + r] = next[r * n + r]
                    .checked_add(coeffs[n - k + 1])
                    .ok_or(Error::Overflow)?;
            }
            m = next;
            let mut trace = 0i128;
            for r in 0..n {
                for t in 0..n {
                    trace = trace
                        .checked_add(
                            a[r * n + t]
                                .checked_mul(m[t * n + r])
                                .ok_or(Error::Overflow)?,
                        )
                        .ok_or(Error::Overflow)?;
                }
            }
            if trace % k as i128 != 0 {
                return Err(Error::Consistency(
                    "non-integral Faddeev-LeVerrier step".into(),
                ));
            }
            coeffs[n - k] = -trace / k as i128;
        }
        Ok(coeffs)
    }

    /// Invariant factors of the Smith normal form, in order along the
    /// diagonal (`min(rows, cols)` entries, zeros last).
    pub fn smith_diagonal(&self) -> Result<Vec<i128>> {
        let (m, n) = (self.rows, self.cols);
        let mut a: Vec<Vec<i128>> = (0..m)
            .map(|r| self.row(r).iter().map(|&v| v as i128).collect())
            .collect();
        let steps = m.min(n);
        let mut diag = Vec::with_capacity(steps);
        for t in 0..steps {
            // smallest nonzero entry of the trailing block becomes the pivot
            let Some((pr, pc)) = smallest_nonzero(&a, t) else {
                diag.extend(std::iter::repeat_n(0, steps - t));
                break;
            };
            a.swap(t, pr);
            for row in a.iter_mut() {
                row.swap(t, pc);
            }
            loop {
                let mut dirty = false;
                for r in t + 1..m {
                    if a[r][t] != 0 {
                        let q = a[r][t].div_euclid(a[t][t]);
                        row_axpy(&mut a, r, t, -q)?;
                        if a[r][t] != 0 {
                            dirty = true;
                        }
                    }
                }
                for c in t + 1..n {
                    if a[t][c] != 0 {
                        let q = a[t][c].div_euclid(a[t][t]);
                        col_axpy(&mut a, c, t, -q)?;
                        if a[t][c] != 0 {
                            dirty = true;
                        }
                    }
                }
                if !dirty {
                    // divisibility of the trailing block by the pivot
                    let bad = (t + 1..m).find(|&r| (t + 1..n).any(|c| a[r][c] % a[t][t] != 0));
                    match bad {
                        None => break,
                        Some(r) => {
                            row_axpy(&mut a, t, r, 1)?;
                            continue;
                        }
                    }
                }
                let (pr, pc) = smallest_in_cross(&a, t);
                a.swap(t, pr);
                for row in a.iter_mut() {
                    row.swap(t, pc);
                }
            }
            diag.push(a[t][t].abs());
        }
        Ok(diag)
    }
}

fn smallest_nonzero(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i128)> = None;
    for (r, row) in a.iter().enumerate().skip(t) {
        for (c, &v) in row.iter().enumerate().skip(t) {
            if v != 0 && best.is_none_or(|(_, _, b)| v.abs() < b) {
                best = Some((r, c, v.abs()));
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

fn smallest_in_cross(a: &[Vec<i128>], t: usize) -> (usize, usize) {
    let mut best = (t, t, a[t][t].abs());
    for (r, row) in a.iter().enumerate().skip(t) {
        if row[t] != 0 && (best.2 == 0 || row[t].abs() < best.2) {
            best = (r, t, row[t].abs());
        }
    }
    for (c, &v) in a[t].iter().enumerate().skip(t) {
        if v != 0 && (best.2 == 0 || v.abs() < best.2) {
            best = (t, c, v.abs());
        }
    }
    (best.0, best.1)
}

/// `row[dst] += k * row[src]`
fn row_axpy(a: &mut [Vec<i128>], dst: usize, src: usize, k: i128) -> Result<()> {
    for c in 0..a[dst].len() {
        let v = a[src][c]
            .checked_mul(k)
            .and_then(|x| x.checked_add(a[dst][c]))
            .ok_or(Error::Overflow)?;
        a[dst][c] = v;
    }
    Ok(())
}

/// `col[dst] += k * col[src]`
fn col_axpy(a: &mut [Vec<i128>], dst: usize, src: usize, k: i128) -> Result<()> {
    for row in a.iter_mut() {
        row[dst] = row[src]
            .checked_mul(k)
            .and_then(|x| x.checked_add(row[dst]))
            .ok_or(Error::Overflow)?;
    }
    Ok(())
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (r, c): (usize, usize)) -> &i64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut i64 {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i128) -> Q {
        Q::from_integer(v)
    }

    #[test]
    fn rref_and_rank() {
        let m = QMatrix::from_i64(3, 3, &[1, 2, 3, 2, 4, 6, 1, 0, 1]);
        assert_eq!(m.rank(), 2);
        let mut r = m.clone();
        assert_eq!(r.rref(), vec![0, 1]);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = QMatrix::from_i64(2, 4, &[1, 1, 0, 2, 0, 1, 1, -1]);
        let k = m.kernel();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn cokernel_projection_kills_image() {
        // image spanned by (1,1,0)
        let a = QMatrix::from_i64(3, 1, &[1, 1, 0]);
        let p = a.cokernel_projection();
        assert_eq!(p.rows(), 2);
        assert!(p.mul(&a).is_zero());
        assert_eq!(p.rank(), 2);
        // zero map: projection is the identity
        let z = QMatrix::zeros(2, 3);
        assert_eq!(z.cokernel_projection(), QMatrix::identity(2));
    }

    #[test]
    fn rational_entries_survive_elimination() {
        let m = QMatrix::from_fn(2, 2, |r, c| if r == c { q(3) } else { Q::new(1, 2) });
        assert_eq!(m.rank(), 2);
        assert!(m.kernel().cols() == 0);
    }

    #[test]
    fn smith_diagonal_small_cases() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(m.smith_diagonal().unwrap(), vec![2, 6, 12]);
        let z = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(z.smith_diagonal().unwrap(), vec![1, 0]);
        let e = IntMatrix::zeros(2, 3);
        assert_eq!(e.smith_diagonal().unwrap(), vec![0, 0]);
    }

    #[test]
    fn charpoly_of_rotation() {
        // x^2 + x + 1
        let c = IntMatrix::from_rows(&[vec![-1, -1], vec![1, 0]]);
        assert_eq!(c.charpoly().unwrap(), vec![1, 1, 1]);
        assert_eq!(c.multiplicative_order(10), Some(3));
    }

    #[test]
    fn permutation_detection() {
        assert!(IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).is_permutation());
        assert!(!IntMatrix::from_rows(&[vec![1, 1], vec![0, 0]]).is_permutation());
        assert!(!IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).is_permutation());
    }
}
