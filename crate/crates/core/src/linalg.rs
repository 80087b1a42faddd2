//! Integer and rational linear algebra: Hermite and Smith normal forms,
//! lattice kernels and exact linear solves.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("inconsistent linear system at row {row}")]
    Inconsistent { row: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::Ragged { row: i, expected: cols, found: r.len() });
            }
            data.extend(r.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Matrix times a rational vector.
    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Dimension { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(), |acc, (a, x)| acc + Scalar::from_integer(a.clone()) * x)
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Scalar>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(Scalar::from_integer).collect())
            .collect();
        rref(rows, self.cols).1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * q;
            self.data[dst * self.cols + j] -= v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Row-style Hermite normal form. Returns `(h, u)` with `u` unimodular and
/// `u * m = h`; `h` is in echelon form with positive pivots and the entries
/// above each pivot reduced into `[0, pivot)`. Zero rows come last.
pub fn hermite_rows(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..h.cols {
        if pivot_row == h.rows {
            break;
        }
        loop {
            // smallest nonzero magnitude at or below pivot_row
            let best = (pivot_row..h.rows)
                .filter(|&r| !h[(r, col)].is_zero())
                .min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()).then(a.cmp(&b)));
            let Some(best) = best else { break };
            h.swap_rows(pivot_row, best);
            u.swap_rows(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..h.rows {
                if h[(r, col)].is_zero() {
                    continue;
                }
                let q = h[(r, col)].div_floor(&h[(pivot_row, col)]);
                h.row_axpy(r, pivot_row, &q);
                u.row_axpy(r, pivot_row, &q);
                if !h[(r, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        for r in 0..pivot_row {
            let q = h[(r, col)].div_floor(&h[(pivot_row, col)]);
            if !q.is_zero() {
                h.row_axpy(r, pivot_row, &q);
                u.row_axpy(r, pivot_row, &q);
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    (h, u)
}

/// Invariant factors of the Smith normal form (nonzero diagonal entries,
/// each dividing the next).
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pick smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[(i, j)].is_zero()
                    && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap_rows(t, bi);
        for i in 0..rows {
            let idx_a = i * cols + t;
            let idx_b = i * cols + bj;
            a.data.swap(idx_a, idx_b);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[(i, t)].div_floor(&a[(t, t)]);
            a.row_axpy(i, t, &q);
            if !a[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = a[(t, j)].div_floor(&a[(t, t)]);
            for i in 0..rows {
                let v = &a[(i, t)] * &q;
                a[(i, j)] -= v;
            }
            if !a[(t, j)].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility: fold a non-divisible entry into row t and retry
        let p = a[(t, t)].clone();
        let bad = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !(&a[(i, j)] % &p).is_zero());
        if let Some((i, _)) = bad {
            let one = -BigInt::one();
            a.row_axpy(t, i, &one);
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

/// Basis of the integer kernel lattice `{a in Z^cols : m a = 0}`, returned
/// as the columns of a `cols x l` matrix in Hermite normal form (first
/// nonzero entry of the earliest column positive, etc).
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let t = m.transpose();
    let (h, u) = hermite_rows(&t);
    let basis: Vec<Vec<BigInt>> = (0..h.rows())
        .filter(|&r| h.row(r).iter().all(Zero::is_zero))
        .map(|r| u.row(r).to_vec())
        .collect();
    if basis.is_empty() {
        return IntMatrix::zeros(m.cols(), 0);
    }
    let k = IntMatrix::from_rows(&basis).expect("rectangular");
    let (hk, _) = hermite_rows(&k);
    hk.transpose()
}

/// Exact Gaussian elimination to reduced row echelon form. Returns the
/// reduced rows and pivot columns; pivot choice is the first remaining row
/// with a nonzero entry in the leftmost possible column.
pub(crate) fn rref(mut rows: Vec<Vec<Scalar>>, cols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..rows[i].len() {
                    let d = &rows[r][j] * &f;
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (rows, pivots)
}

/// Rational nullspace basis of the given rows (each of length `cols`).
pub(crate) fn rational_nullspace(rows: Vec<Vec<Scalar>>, cols: usize) -> Vec<Vec<Scalar>> {
    let (red, pivots) = rref(rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -red[i][f].clone();
            }
            v
        })
        .collect()
}

/// One particular solution of `m x = rhs` with free variables set to zero.
/// Pivots are chosen from the rightmost column with a nonzero entry, taking
/// the first such row; the leftover (free) columns are the leftmost ones.
pub fn solve_rational(m: &IntMatrix, rhs: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
    if rhs.len() != m.rows() {
        return Err(LinalgError::Dimension { expected: m.rows(), found: rhs.len() });
    }
    let n = m.cols();
    // augmented rows tagged with their original index
    let mut rows: Vec<(usize, Vec<Scalar>)> = (0..m.rows())
        .map(|i| {
            let mut r: Vec<Scalar> = m.row(i).iter().cloned().map(Scalar::from_integer).collect();
            r.push(rhs[i].clone());
            (i, r)
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    // pivot columns are taken right to left so the free variables are the
    // leading coordinates
    for c in (0..n).rev() {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i].1[c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r].1[c].recip();
        for v in rows[r].1.iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i].1[c].is_zero() {
                let f = rows[i].1[c].clone();
                for j in 0..=n {
                    let d = &rows[r].1[j] * &f;
                    rows[i].1[j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if let Some((orig, _)) = rows[r..].iter().find(|(_, row)| !row[n].is_zero()) {
        return Err(LinalgError::Inconsistent { row: *orig });
    }
    let mut x = vec![Scalar::zero(); n];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = rows[i].1[n].clone();
    }
    Ok(x)
}

/// Integer solution `c` of `c^T m = target^T`, if one exists.
pub fn solve_integer_left(m: &IntMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    if target.len() != m.cols() {
        return None;
    }
    let (h, u) = hermite_rows(m);
    let mut y = vec![BigInt::zero(); m.rows()];
    for i in 0..h.rows() {
        let Some(p) = (0..h.cols()).find(|&c| !h[(i, c)].is_zero()) else { break };
        let partial: BigInt = (0..i).map(|k| &y[k] * &h[(k, p)]).sum();
        let rest = &target[p] - partial;
        let (q, r) = rest.div_rem(&h[(i, p)]);
        if !r.is_zero() {
            return None;
        }
        y[i] = q;
    }
    let c: Vec<BigInt> = (0..m.rows())
        .map(|j| (0..m.rows()).map(|k| &y[k] * &u[(k, j)]).sum())
        .collect();
    let check = (0..m.cols()).all(|col| {
        let s: BigInt = (0..m.rows()).map(|i| &c[i] * &m[(i, col)]).sum();
        s == target[col]
    });
    check.then_some(c)
}
