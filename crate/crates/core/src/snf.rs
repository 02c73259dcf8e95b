//! Smith normal form of small integer matrices.
//!
//! The matrices handled here are relation matrices of group presentations, so
//! they have at most a few dozen rows. Plain row/column reduction with a
//! minimal-magnitude pivot is enough; no modular tricks.

use std::fmt;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows. All rows must share the length `cols`.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += a * self[(i, j)];
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> =
            (0..n).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
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

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        for j in 0..self.cols {
            let s = self[(src, j)];
            self[(dst, j)] += k * s;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        for i in 0..self.rows {
            let s = self[(i, src)];
            self[(i, dst)] += k * s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// `u * r * v == d` with `u`, `v` unimodular and `d` diagonal, each diagonal
/// entry dividing the next. `v_inv` is carried along so callers can move
/// between generator coordinates and the diagonal basis without inverting.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfDecomposition {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<i64> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)]).take_while(|&x| x != 0).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Invariant factors greater than one.
    pub fn torsion_coefficients(&self) -> Vec<i64> {
        self.invariant_factors().into_iter().filter(|&d| d > 1).collect()
    }

    /// Rank of the free part of `Z^n / rowspace(r)`.
    pub fn free_rank(&self) -> usize {
        self.d.cols() - self.rank()
    }
}

pub fn smith_normal_form(r: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (r.rows(), r.cols());
    let mut a = r.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            // Smallest magnitude wins; among ties the rightmost column, so that
            // a relation like C1 + C2 + C3 = 0 eliminates the last generator.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = a[(i, j)];
                    if x == 0 {
                        continue;
                    }
                    best = match best {
                        None => Some((i, j)),
                        Some((bi, bj)) => {
                            let b = a[(bi, bj)].abs();
                            if x.abs() < b || (x.abs() == b && j > bj) {
                                Some((i, j))
                            } else {
                                Some((bi, bj))
                            }
                        }
                    };
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let p = a[(t, t)];
            let mut dirty = false;
            for i in t + 1..m {
                let q = a[(i, t)].div_euclid(p);
                if q != 0 {
                    a.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                }
                dirty |= a[(i, t)] != 0;
            }
            for j in t + 1..n {
                let q = a[(t, j)].div_euclid(p);
                if q != 0 {
                    a.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                    // V' = V E  =>  V'^{-1} = E^{-1} V^{-1}
                    v_inv.add_row(t, j, q);
                }
                dirty |= a[(t, j)] != 0;
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let offending = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[(i, j)] % p != 0));
            match offending {
                Some(i) => {
                    a.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if t < m && t < n && a[(t, t)] < 0 {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    // Free columns of V can be permuted and negated freely (D vanishes there).
    // Sort them by leading index with a positive leading entry so that free
    // coordinates line up with the original generators whenever possible.
    let rank = (0..m.min(n)).take_while(|&i| a[(i, i)] != 0).count();
    let mut free: Vec<usize> = (rank..n).collect();
    let lead = |v: &IntMatrix, j: usize| (0..n).find(|&i| v[(i, j)] != 0).unwrap_or(n);
    free.sort_by_key(|&j| {
        let col: Vec<i64> = (0..n).map(|i| v[(i, j)].abs()).collect();
        (lead(&v, j), std::cmp::Reverse(col))
    });
    let old_v = v.clone();
    let old_v_inv = v_inv.clone();
    for (slot, &src) in free.iter().enumerate() {
        let dst = rank + slot;
        for i in 0..n {
            v[(i, dst)] = old_v[(i, src)];
        }
        for j in 0..n {
            v_inv[(dst, j)] = old_v_inv[(src, j)];
        }
    }
    for j in rank..n {
        let l = lead(&v, j);
        if l < n && v[(l, j)] < 0 {
            v.negate_col(j);
            v_inv.negate_row(j);
        }
    }

    SnfDecomposition { u, d: a, v, v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(r: &IntMatrix) -> SnfDecomposition {
        let s = smith_normal_form(r);
        assert_eq!(s.u.mul(r).mul(&s.v), s.d, "U R V != D for {r:?}");
        assert_eq!(s.u.determinant().abs(), 1);
        assert_eq!(s.v.determinant().abs(), 1);
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(r.cols()));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert_eq!(s.d[(i, j)], 0);
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility chain broken: {f:?}");
        }
        s
    }

    #[test]
    fn already_diagonal() {
        let s = check(&IntMatrix::from_rows(&[vec![2]], 1));
        assert_eq!(s.d, IntMatrix::from_rows(&[vec![2]], 1));
        assert_eq!(s.u, IntMatrix::identity(1));
        assert_eq!(s.v, IntMatrix::identity(1));
    }

    #[test]
    fn single_sum_relation() {
        let s = check(&IntMatrix::from_rows(&[vec![1, 1]], 2));
        assert_eq!(s.d, IntMatrix::from_rows(&[vec![1, 0]], 2));
        assert_eq!(s.free_rank(), 1);
        assert!(s.torsion_coefficients().is_empty());
    }

    #[test]
    fn no_relations() {
        let s = check(&IntMatrix::zeros(0, 2));
        assert_eq!(s.free_rank(), 2);
        let s = check(&IntMatrix::zeros(1, 2));
        assert_eq!(s.free_rank(), 2);
    }

    #[test]
    fn torsion_and_divisibility() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]], 2));
        assert_eq!(s.invariant_factors(), vec![1, 6]);
        let s = check(&IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3));
        assert_eq!(s.invariant_factors(), vec![2, 6, 12]);
    }

    #[test]
    fn surface_relation_keeps_leading_generators_free() {
        let s = check(&IntMatrix::from_rows(&[vec![0, 0, 0, 0, 1, 1, 1]], 7));
        assert_eq!(s.free_rank(), 6);
        // free columns are A1, B1, A2, B2, C1 - C3, C2 - C3
        for k in 0..4 {
            let col: Vec<i64> = (0..7).map(|i| s.v[(i, 1 + k)]).collect();
            let mut e = vec![0; 7];
            e[k] = 1;
            assert_eq!(col, e);
        }
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![7, 4]], 2);
        assert_eq!(m.determinant(), 1);
        let m = IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]], 3);
        assert_eq!(m.determinant(), -1);
    }
}
