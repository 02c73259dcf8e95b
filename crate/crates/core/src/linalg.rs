//! Sparse exact linear algebra over Q.
//!
//! Everything is built on [`Echelon`], an incrementally maintained reduced
//! echelon basis of sparse vectors. Vectors are inserted one at a time; each
//! insertion either enlarges the basis or exhibits a linear dependency. With
//! provenance tracking switched on, every basis vector remembers how it was
//! combined from the inserted vectors, which yields kernel vectors, span
//! witnesses and infeasibility certificates.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse vector: index -> nonzero value.
pub type SparseVec = BTreeMap<usize, Q>;

fn axpy(target: &mut SparseVec, scale: &Q, src: &SparseVec) {
    for (&i, v) in src {
        let delta = scale * v;
        match target.get_mut(&i) {
            Some(t) => {
                *t += delta;
                if t.is_zero() {
                    target.remove(&i);
                }
            }
            None => {
                target.insert(i, delta);
            }
        }
    }
}

/// Pivot preference: small entries keep the numbers tame.
fn pivot_cost(v: &Q) -> u64 {
    v.numer().bits() + v.denom().bits()
}

struct PivotRow {
    pivot: usize,
    vector: SparseVec,
    provenance: SparseVec,
}

/// Outcome of inserting a vector into an [`Echelon`].
pub enum Insert {
    /// The vector was independent; the basis grew.
    Independent,
    /// The vector was a combination of earlier ones. With provenance enabled
    /// the map is a nonzero combination of inserted vectors equal to zero.
    Dependent(Option<SparseVec>),
}

/// Reduced echelon basis maintained under insertion. Every stored vector has a
/// unit entry at its pivot and zeros at all other pivots.
pub struct Echelon {
    rows: Vec<PivotRow>,
    pivot_of: BTreeMap<usize, usize>,
    track: bool,
    inserted: usize,
    /// Coordinates at or beyond this index are only used as pivots when
    /// nothing else is left.
    deferred_from: usize,
}

impl Echelon {
    pub fn new(track_provenance: bool) -> Self {
        Echelon {
            rows: Vec::new(),
            pivot_of: BTreeMap::new(),
            track: track_provenance,
            inserted: 0,
            deferred_from: usize::MAX,
        }
    }

    pub fn with_deferred_pivots(mut self, from: usize) -> Self {
        self.deferred_from = from;
        self
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduces `v` against the basis. Returns the residue and the coefficients
    /// (by basis row) that were subtracted.
    fn reduce(&self, v: &SparseVec) -> (SparseVec, Vec<(usize, Q)>) {
        let mut coeffs = Vec::new();
        for (i, x) in v {
            if let Some(&r) = self.pivot_of.get(i) {
                coeffs.push((r, x.clone()));
            }
        }
        let mut residue = v.clone();
        for (r, c) in &coeffs {
            axpy(&mut residue, &-c, &self.rows[*r].vector);
        }
        (residue, coeffs)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Expresses `v` in terms of inserted vectors, if it lies in the span.
    /// Requires provenance tracking.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        assert!(self.track, "express() needs provenance tracking");
        let (residue, coeffs) = self.reduce(v);
        if !residue.is_empty() {
            return None;
        }
        let mut x = SparseVec::new();
        for (r, c) in coeffs {
            axpy(&mut x, &c, &self.rows[r].provenance);
        }
        Some(x)
    }

    pub fn insert(&mut self, v: &SparseVec) -> Insert {
        let index = self.inserted;
        self.inserted += 1;
        let (mut residue, coeffs) = self.reduce(v);
        let provenance = if self.track {
            let mut p = SparseVec::new();
            p.insert(index, Q::one());
            for (r, c) in &coeffs {
                axpy(&mut p, &-c, &self.rows[*r].provenance);
            }
            Some(p)
        } else {
            None
        };
        if residue.is_empty() {
            return Insert::Dependent(provenance);
        }
        let (&pivot, _) = residue
            .iter()
            .min_by_key(|(&i, x)| (i >= self.deferred_from, pivot_cost(x), i))
            .expect("nonempty residue");
        let inv = residue[&pivot].recip();
        for x in residue.values_mut() {
            *x *= &inv;
        }
        let mut provenance = provenance.unwrap_or_default();
        for x in provenance.values_mut() {
            *x *= &inv;
        }
        // clear the new pivot from existing rows
        for k in 0..self.rows.len() {
            if let Some(c) = self.rows[k].vector.get(&pivot).cloned() {
                let neg = -c;
                axpy(&mut self.rows[k].vector, &neg, &residue);
                if self.track {
                    axpy(&mut self.rows[k].provenance, &neg, &provenance);
                }
            }
        }
        self.pivot_of.insert(pivot, self.rows.len());
        self.rows.push(PivotRow { pivot, vector: residue, provenance });
        Insert::Independent
    }

    /// Provenance of the basis row pivoting at `col`, if there is one.
    pub fn pivot_provenance(&self, col: usize) -> Option<&SparseVec> {
        self.pivot_of.get(&col).map(|&r| &self.rows[r].provenance)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.pivot)
    }
}

#[derive(Debug, Error)]
pub enum MatrixParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// Sparse exact matrix stored by columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseRationalMatrix {
    n_rows: usize,
    n_cols: usize,
    cols: Vec<SparseVec>,
}

impl SparseRationalMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        SparseRationalMatrix { n_rows, n_cols, cols: vec![SparseVec::new(); n_cols] }
    }

    pub fn from_columns(n_rows: usize, cols: Vec<SparseVec>) -> Self {
        for c in &cols {
            debug_assert!(c.keys().all(|&r| r < n_rows));
            debug_assert!(c.values().all(|x| !x.is_zero()));
        }
        SparseRationalMatrix { n_rows, n_cols: cols.len(), cols }
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(n_rows, n_cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_dense(&rows)
    }

    /// Sets an entry; a zero value removes it.
    pub fn set(&mut self, row: usize, col: usize, value: Q) {
        assert!(row < self.n_rows && col < self.n_cols, "entry out of range");
        if value.is_zero() {
            self.cols[col].remove(&row);
        } else {
            self.cols[col].insert(row, value);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Q {
        self.cols[col].get(&row).cloned().unwrap_or_else(Q::zero)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// (row, col, value) triplets in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Q)> + '_ {
        self.cols.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |(&i, x)| (i, j, x)))
    }

    pub fn transpose(&self) -> Self {
        let mut cols = vec![SparseVec::new(); self.n_rows];
        for (i, j, x) in self.triplets() {
            cols[i].insert(j, x.clone());
        }
        SparseRationalMatrix { n_rows: self.n_cols, n_cols: self.n_rows, cols }
    }

    pub fn mul_vec(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.n_cols);
        let mut out = vec![Q::zero(); self.n_rows];
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (&i, a) in &self.cols[j] {
                out[i] += a * xj;
            }
        }
        out
    }

    /// y^T M
    pub fn left_mul_vec(&self, y: &[Q]) -> Vec<Q> {
        assert_eq!(y.len(), self.n_rows);
        self.cols
            .iter()
            .map(|c| c.iter().fold(Q::zero(), |acc, (&i, a)| acc + a * &y[i]))
            .collect()
    }

    fn echelon(&self, track: bool) -> (Echelon, Vec<SparseVec>) {
        let mut e = Echelon::new(track);
        let mut deps = Vec::new();
        for c in &self.cols {
            if let Insert::Dependent(Some(p)) = e.insert(c) {
                deps.push(p);
            }
        }
        (e, deps)
    }

    pub fn rank(&self) -> usize {
        // eliminate along the shorter side
        if self.n_rows < self.n_cols {
            self.transpose().echelon(false).0.rank()
        } else {
            self.echelon(false).0.rank()
        }
    }

    /// Basis of the right null space.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let (_, deps) = self.echelon(true);
        deps.into_iter().map(|d| densify(&d, self.n_cols)).collect()
    }

    /// Whether `v` lies in the column span, with a witness `x` (M x = v).
    pub fn in_span(&self, v: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(v.len(), self.n_rows);
        let (e, _) = self.echelon(true);
        e.express(&sparsify(v)).map(|x| densify(&x, self.n_cols))
    }

    /// Some exact solution of M x = b, or a certificate y with y^T M = 0 and
    /// y . b != 0.
    pub fn solve_affine(&self, b: &[Q]) -> Solution {
        assert_eq!(b.len(), self.n_rows);
        // Row-reduce [M | b]: a row combination that kills M but not b is the
        // certificate. Otherwise the system is consistent.
        let aug = self.n_cols;
        let t = self.transpose();
        let mut e = Echelon::new(true).with_deferred_pivots(aug);
        for (i, bi) in b.iter().enumerate() {
            let mut row = t.cols[i].clone();
            if !bi.is_zero() {
                row.insert(aug, bi.clone());
            }
            e.insert(&row);
        }
        if let Some(r) = e.rows.iter().find(|r| r.pivot == aug) {
            let y = densify(&r.provenance, self.n_rows);
            return Solution::Infeasible(y);
        }
        let x = self.in_span(b).expect("consistent system has a solution");
        Solution::Feasible(x)
    }

    /// Text export: header `n_rows n_cols nnz`, then one `row col value` line
    /// per entry (0-based indices, values as `p` or `p/q`).
    pub fn to_triplet_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {} {}", self.n_rows, self.n_cols, self.nnz()).unwrap();
        for (i, j, x) in self.triplets() {
            writeln!(s, "{i} {j} {x}").unwrap();
        }
        s
    }

    pub fn from_triplet_text(text: &str) -> Result<Self, MatrixParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let syntax = |line, msg: &str| MatrixParseError::Syntax { line, msg: msg.into() };
        let (hl, header) = lines.next().ok_or_else(|| syntax(1, "missing header"))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| syntax(hl, "bad header")))
            .collect::<Result<_, _>>()?;
        if h.len() != 3 {
            return Err(syntax(hl, "header must be `n_rows n_cols nnz`"));
        }
        let mut m = Self::zeros(h[0], h[1]);
        let mut count = 0;
        for (ln, l) in lines {
            let t: Vec<&str> = l.split_whitespace().collect();
            if t.len() != 3 {
                return Err(syntax(ln, "expected `row col value`"));
            }
            let i: usize = t[0].parse().map_err(|_| syntax(ln, "bad row index"))?;
            let j: usize = t[1].parse().map_err(|_| syntax(ln, "bad column index"))?;
            let x = Q::from_str(t[2]).map_err(|_| syntax(ln, "bad rational"))?;
            if i >= h[0] || j >= h[1] {
                return Err(syntax(ln, "index out of range"));
            }
            if m.cols[j].contains_key(&i) {
                return Err(syntax(ln, "duplicate entry"));
            }
            if x.is_zero() {
                return Err(syntax(ln, "explicit zero entry"));
            }
            m.set(i, j, x);
            count += 1;
        }
        if count != h[2] {
            return Err(syntax(hl, "entry count does not match header"));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Feasible(Vec<Q>),
    Infeasible(Vec<Q>),
}

pub fn sparsify(v: &[Q]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn densify(v: &SparseVec, n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    for (&i, x) in v {
        out[i] = x.clone();
    }
    out
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Rank of a list of dense vectors.
pub fn rank_of_vectors(vs: &[Vec<Q>]) -> usize {
    let mut e = Echelon::new(false);
    for v in vs {
        e.insert(&sparsify(v));
    }
    e.rank()
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn abs_max(v: &[Q]) -> Q {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        assert_eq!(SparseRationalMatrix::from_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).rank(), 3);
        assert_eq!(SparseRationalMatrix::from_i64(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(SparseRationalMatrix::zeros(3, 4).rank(), 0);
    }

    #[test]
    fn kernels() {
        let id = SparseRationalMatrix::from_i64(&[vec![1, 0], vec![0, 1]]);
        assert!(id.kernel_basis().is_empty());
        let m = SparseRationalMatrix::from_i64(&[vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], -k[0][1].clone());
        assert!(is_zero_vec(&m.mul_vec(&k[0])));
        assert_eq!(SparseRationalMatrix::zeros(2, 3).kernel_basis().len(), 3);
    }

    #[test]
    fn spans() {
        let m = SparseRationalMatrix::from_i64(&[vec![1, 2], vec![3, 4]]);
        let x = m.in_span(&[q(1), q(3)]).unwrap();
        assert_eq!(x, vec![q(1), q(0)]);
        let m = SparseRationalMatrix::from_i64(&[vec![1], vec![0]]);
        assert!(m.in_span(&[q(0), q(1)]).is_none());
    }

    #[test]
    fn affine() {
        let id = SparseRationalMatrix::from_i64(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(id.solve_affine(&[q(3), q_frac(1, 2)]), Solution::Feasible(vec![q(3), q_frac(1, 2)]));
        let m = SparseRationalMatrix::from_i64(&[vec![1], vec![1]]);
        match m.solve_affine(&[q(0), q(1)]) {
            Solution::Infeasible(y) => {
                assert!(is_zero_vec(&m.left_mul_vec(&y)));
                assert!(!dot(&y, &[q(0), q(1)]).is_zero());
                assert_eq!(y[0], -y[1].clone());
            }
            other => panic!("expected certificate, got {other:?}"),
        }
        let m = SparseRationalMatrix::from_i64(&[vec![2, 0]]);
        assert_eq!(m.solve_affine(&[q(1)]), Solution::Feasible(vec![q_frac(1, 2), q(0)]));
    }

    #[test]
    fn triplet_text() {
        let m = SparseRationalMatrix::from_dense(&[vec![q(0), q_frac(-1, 3)], vec![q(2), q(0)]]);
        let t = m.to_triplet_text();
        assert_eq!(t, "2 2 2\n1 0 2\n0 1 -1/3\n");
        assert_eq!(SparseRationalMatrix::from_triplet_text(&t).unwrap(), m);
        assert!(SparseRationalMatrix::from_triplet_text("2 2 1\n0 0 0\n").is_err());
        assert!(SparseRationalMatrix::from_triplet_text("2 2 2\n0 0 1\n0 0 2\n").is_err());
    }
}
