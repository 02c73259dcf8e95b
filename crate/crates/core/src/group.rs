//! Finitely presented abelian groups with an integral alternating form.
//!
//! Elements are stored in canonical coordinates read off the Smith normal form
//! of the relation matrix: free coordinates first (unconstrained integers),
//! then one residue per nontrivial invariant factor, reduced into `[0, d)`.
//! Two elements are equal iff their coordinates are identical.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::snf::{smith_normal_form, IntMatrix, SnfDecomposition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("a group needs at least one generator")]
    NoGenerators,
    #[error("relation row {row} has length {len}, expected {expected}")]
    RelationShape { row: usize, len: usize, expected: usize },
    #[error("form must be {expected}x{expected}, found a row of length {len} at row {row}")]
    FormShape { row: usize, len: usize, expected: usize },
    #[error("form row count {rows} does not match generator count {expected}")]
    FormRows { rows: usize, expected: usize },
    #[error("form has nonzero diagonal entry at ({index},{index}): {value}")]
    NonzeroDiagonal { index: usize, value: i64 },
    #[error("form is not antisymmetric: entry ({i},{j}) = {a} but ({j},{i}) = {b}")]
    NotAntisymmetric { i: usize, j: usize, a: i64, b: i64 },
    #[error(
        "form does not descend to the quotient: (R*Omega)[{row}][{col}] = {value} for relation row {relation:?}"
    )]
    Descent { row: usize, col: usize, value: i64, relation: Vec<i64> },
    #[error("{0} generator names given for {1} generators")]
    NameCount(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element {0:?} does not belong to this group")]
    Foreign(Vec<i64>),
    #[error("coordinate vector has length {got}, group has {expected} generators")]
    Arity { got: usize, expected: usize },
}

/// Presentation data: generators, integer relations, integer form on generators.
/// Construction validates that the form is alternating and descends to the
/// quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    n_generators: usize,
    relations: Vec<Vec<i64>>,
    form: Vec<Vec<i64>>,
    names: Vec<String>,
}

impl GroupSpec {
    pub fn new(
        n_generators: usize,
        relations: Vec<Vec<i64>>,
        form: Vec<Vec<i64>>,
    ) -> Result<Self, SpecError> {
        let names = (1..=n_generators).map(|i| format!("e{i}")).collect();
        Self::with_names(n_generators, relations, form, names)
    }

    pub fn with_names(
        n_generators: usize,
        relations: Vec<Vec<i64>>,
        form: Vec<Vec<i64>>,
        names: Vec<String>,
    ) -> Result<Self, SpecError> {
        let n = n_generators;
        if n == 0 {
            return Err(SpecError::NoGenerators);
        }
        if names.len() != n {
            return Err(SpecError::NameCount(names.len(), n));
        }
        for (row, r) in relations.iter().enumerate() {
            if r.len() != n {
                return Err(SpecError::RelationShape { row, len: r.len(), expected: n });
            }
        }
        if form.len() != n {
            return Err(SpecError::FormRows { rows: form.len(), expected: n });
        }
        for (row, r) in form.iter().enumerate() {
            if r.len() != n {
                return Err(SpecError::FormShape { row, len: r.len(), expected: n });
            }
        }
        for i in 0..n {
            if form[i][i] != 0 {
                return Err(SpecError::NonzeroDiagonal { index: i, value: form[i][i] });
            }
            for j in i + 1..n {
                if form[i][j] != -form[j][i] {
                    return Err(SpecError::NotAntisymmetric { i, j, a: form[i][j], b: form[j][i] });
                }
            }
        }
        for (row, r) in relations.iter().enumerate() {
            for col in 0..n {
                let value: i64 = (0..n).map(|i| r[i] * form[i][col]).sum();
                if value != 0 {
                    return Err(SpecError::Descent { row, col, value, relation: r.clone() });
                }
            }
        }
        Ok(GroupSpec { n_generators, relations, form, names })
    }

    /// First homology of a compact oriented surface of genus `g` with `r`
    /// boundary components: generators A1,B1,...,Ag,Bg,C1,...,Cr, one relation
    /// C1 + ... + Cr = 0 (none when r = 0), intersection form <Ai,Bi> = 1.
    pub fn surface(g: usize, r: usize) -> Result<Self, SpecError> {
        let n = 2 * g + r;
        let mut form = vec![vec![0; n]; n];
        for i in 0..g {
            form[2 * i][2 * i + 1] = 1;
            form[2 * i + 1][2 * i] = -1;
        }
        let relations = if r == 0 {
            vec![]
        } else {
            let mut row = vec![0; n];
            for c in &mut row[2 * g..] {
                *c = 1;
            }
            vec![row]
        };
        let mut names = Vec::with_capacity(n);
        for i in 1..=g {
            names.push(format!("A{i}"));
            names.push(format!("B{i}"));
        }
        for j in 1..=r {
            names.push(format!("C{j}"));
        }
        Self::with_names(n, relations, form, names)
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    pub fn form(&self) -> &[Vec<i64>] {
        &self.form
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn form_is_zero(&self) -> bool {
        self.form.iter().flatten().all(|&x| x == 0)
    }
}

/// An element of H in canonical coordinates. Ordering is lexicographic on the
/// coordinates and is the total order used to sort wedge factors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    coords: Vec<i64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ">")
    }
}

/// A validated presentation together with its canonical-form machinery.
#[derive(Clone, Debug)]
pub struct AbelianGroup {
    spec: GroupSpec,
    snf: SnfDecomposition,
    free_rank: usize,
    /// Moduli of the torsion coordinates, in coordinate order.
    torsion: Vec<i64>,
    /// Index into the SNF basis for each canonical coordinate.
    slots: Vec<usize>,
    /// Form in canonical coordinates.
    gram: Vec<Vec<i64>>,
    /// Canonical elements of the generators e_1..e_n.
    generators: Vec<GroupElement>,
}

impl AbelianGroup {
    pub fn new(spec: GroupSpec) -> Self {
        let n = spec.n_generators;
        let r = IntMatrix::from_rows(&spec.relations, n);
        let snf = smith_normal_form(&r);
        let factors = snf.invariant_factors();
        let rank = factors.len();
        let mut slots: Vec<usize> = (rank..n).collect();
        let free_rank = slots.len();
        let mut torsion = Vec::new();
        for (i, &d) in factors.iter().enumerate() {
            if d > 1 {
                slots.push(i);
                torsion.push(d);
            }
        }
        // gram = V^{-1} Omega V^{-T}, restricted to kept slots
        let omega = IntMatrix::from_rows(&spec.form, n);
        let full = snf.v_inv.mul(&omega).mul(&snf.v_inv.transpose());
        let gram = slots.iter().map(|&a| slots.iter().map(|&b| full[(a, b)]).collect()).collect();
        let mut g = AbelianGroup {
            spec,
            snf,
            free_rank,
            torsion,
            slots,
            gram,
            generators: Vec::new(),
        };
        g.generators = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                g.from_generator_coords_unchecked(&e)
            })
            .collect();
        g
    }

    pub fn surface(g: usize, r: usize) -> Self {
        Self::new(GroupSpec::surface(g, r).expect("surface presentations are valid"))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn snf(&self) -> &SnfDecomposition {
        &self.snf
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_coefficients(&self) -> &[i64] {
        &self.torsion
    }

    /// Number of canonical coordinates (free rank + number of torsion factors).
    pub fn arity(&self) -> usize {
        self.slots.len()
    }

    pub fn n_generators(&self) -> usize {
        self.spec.n_generators
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&GroupElement> {
        self.spec.generator_index(name).map(|i| &self.generators[i])
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { coords: vec![0; self.arity()] }
    }

    /// Canonical element for a vector of generator coefficients.
    pub fn element(&self, generator_coords: &[i64]) -> Result<GroupElement, GroupError> {
        if generator_coords.len() != self.n_generators() {
            return Err(GroupError::Arity {
                got: generator_coords.len(),
                expected: self.n_generators(),
            });
        }
        Ok(self.from_generator_coords_unchecked(generator_coords))
    }

    fn from_generator_coords_unchecked(&self, c: &[i64]) -> GroupElement {
        let y = self.snf.v.left_mul_vec(c);
        let coords = self.slots.iter().map(|&s| y[s]).collect();
        self.reduce(coords)
    }

    /// Builds an element directly from canonical coordinates, reducing torsion.
    pub fn from_canonical(&self, coords: Vec<i64>) -> Result<GroupElement, GroupError> {
        if coords.len() != self.arity() {
            return Err(GroupError::Arity { got: coords.len(), expected: self.arity() });
        }
        Ok(self.reduce(coords))
    }

    fn reduce(&self, mut coords: Vec<i64>) -> GroupElement {
        for (k, &d) in self.torsion.iter().enumerate() {
            let c = &mut coords[self.free_rank + k];
            *c = c.rem_euclid(d);
        }
        GroupElement { coords }
    }

    pub fn normalize(&self, x: &GroupElement) -> GroupElement {
        self.reduce(x.coords.clone())
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.coords.len() == self.arity()
            && self
                .torsion
                .iter()
                .enumerate()
                .all(|(k, &d)| (0..d).contains(&x.coords[self.free_rank + k]))
    }

    fn check(&self, x: &GroupElement) -> Result<(), GroupError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GroupError::Foreign(x.coords.clone()))
        }
    }

    /// Representative in generator coordinates (a fixed function of the class).
    pub fn representative(&self, x: &GroupElement) -> Vec<i64> {
        let n = self.n_generators();
        let mut y = vec![0; n];
        for (k, &s) in self.slots.iter().enumerate() {
            y[s] = x.coords[k];
        }
        self.snf.v_inv.left_mul_vec(&y)
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.sum(x, y))
    }

    pub fn neg(&self, x: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        Ok(self.negate(x))
    }

    pub fn scalar_mul(&self, k: i64, x: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        Ok(self.scale(k, x))
    }

    // Unchecked arithmetic for hot loops over elements this group produced.

    pub(crate) fn sum(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        debug_assert_eq!(x.coords.len(), y.coords.len());
        self.reduce(x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn difference(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.reduce(x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect())
    }

    pub(crate) fn negate(&self, x: &GroupElement) -> GroupElement {
        self.reduce(x.coords.iter().map(|a| -a).collect())
    }

    pub(crate) fn scale(&self, k: i64, x: &GroupElement) -> GroupElement {
        self.reduce(x.coords.iter().map(|a| k * a).collect())
    }

    pub(crate) fn sum_all<'a>(&self, xs: impl IntoIterator<Item = &'a GroupElement>) -> GroupElement {
        let mut acc = vec![0; self.arity()];
        for x in xs {
            for (a, b) in acc.iter_mut().zip(&x.coords) {
                *a += b;
            }
        }
        self.reduce(acc)
    }

    /// The form <x, y>. Well defined on classes because the form descends.
    pub fn pairing(&self, x: &GroupElement, y: &GroupElement) -> i64 {
        let mut total = 0;
        for (a, row) in x.coords.iter().zip(&self.gram) {
            if *a == 0 {
                continue;
            }
            for (b, w) in y.coords.iter().zip(row) {
                total += a * w * b;
            }
        }
        total
    }

    /// mu(x) as a row vector in canonical coordinates.
    fn mu(&self, x: &GroupElement) -> Vec<i64> {
        let k = self.arity();
        let mut out = vec![0; k];
        for (a, row) in x.coords.iter().zip(&self.gram) {
            if *a == 0 {
                continue;
            }
            for (o, w) in out.iter_mut().zip(row) {
                *o += a * w;
            }
        }
        out
    }

    pub fn in_kernel_mu(&self, x: &GroupElement) -> bool {
        self.mu(x).iter().all(|&c| c == 0)
    }

    /// Membership in H^(1) = H \ ker mu.
    pub fn is_derived_element(&self, x: &GroupElement) -> bool {
        !self.in_kernel_mu(x)
    }

    pub fn is_torsion(&self, x: &GroupElement) -> bool {
        x.coords[..self.free_rank].iter().all(|&c| c == 0)
    }

    pub fn free_part<'a>(&self, x: &'a GroupElement) -> &'a [i64] {
        &x.coords[..self.free_rank]
    }

    /// Max-norm of the free coordinates.
    pub fn radius(&self, x: &GroupElement) -> i64 {
        self.free_part(x).iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn in_box(&self, x: &GroupElement, radius: i64) -> bool {
        self.radius(x) <= radius
    }

    /// A Z-basis of ker mu (as a subgroup of H, up to torsion), read off the
    /// Smith form of the form matrix. Zero images are dropped.
    pub fn kernel_mu_generators(&self) -> Vec<GroupElement> {
        let n = self.n_generators();
        let omega = IntMatrix::from_rows(&self.spec.form, n);
        let s = smith_normal_form(&omega);
        let rank = s.rank();
        let mut out: Vec<GroupElement> = (rank..n)
            .map(|i| self.from_generator_coords_unchecked(s.u.row(i)))
            .filter(|x| *x != self.zero())
            .collect();
        // torsion elements are always central
        for k in 0..self.torsion.len() {
            let mut c = vec![0; self.arity()];
            c[self.free_rank + k] = 1;
            let t = self.reduce(c);
            if !out.contains(&t) {
                out.push(t);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Rank of ker mu tensored with Q.
    pub fn kernel_mu_rank(&self) -> usize {
        let n = self.n_generators();
        let omega = IntMatrix::from_rows(&self.spec.form, n);
        self.free_rank - smith_normal_form(&omega).rank()
    }

    pub fn form_is_zero(&self) -> bool {
        self.gram.iter().flatten().all(|&x| x == 0)
    }

    /// Nondegenerate over Q: ker mu is finite.
    pub fn form_is_nondegenerate(&self) -> bool {
        self.kernel_mu_rank() == 0
    }

    /// Free rank of H / Zz, from the Smith form of the relations augmented by z.
    pub fn quotient_free_rank(&self, z: &GroupElement) -> usize {
        let n = self.n_generators();
        let mut rows = self.spec.relations.clone();
        rows.push(self.representative(z));
        smith_normal_form(&IntMatrix::from_rows(&rows, n)).free_rank()
    }

    /// All elements with free coordinates in [-radius, radius] and arbitrary
    /// torsion residues, in canonical order.
    pub fn box_support(&self, radius: i64) -> Vec<GroupElement> {
        let mut ranges: Vec<(i64, i64)> = vec![(-radius, radius); self.free_rank];
        ranges.extend(self.torsion.iter().map(|&d| (0, d - 1)));
        let mut out = Vec::new();
        let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        if ranges.is_empty() {
            return vec![self.zero()];
        }
        loop {
            out.push(GroupElement { coords: cur.clone() });
            let mut k = ranges.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < ranges[k].1 {
                    cur[k] += 1;
                    for (c, r) in cur[k + 1..].iter_mut().zip(&ranges[k + 1..]) {
                        *c = r.0;
                    }
                    break;
                }
            }
        }
    }

    /// Human-readable rendering in generator coordinates.
    pub fn display(&self, x: &GroupElement) -> String {
        let rep = self.representative(x);
        let parts: Vec<String> = rep.iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(","))
    }

    /// Rendering as a combination of named generators, e.g. `A1-2*C1`.
    pub fn display_named(&self, x: &GroupElement) -> String {
        let rep = self.representative(x);
        let mut s = String::new();
        for (c, name) in rep.iter().zip(&self.spec.names) {
            if *c == 0 {
                continue;
            }
            if *c < 0 {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            if c.abs() != 1 {
                s.push_str(&format!("{}*", c.abs()));
            }
            s.push_str(name);
        }
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> AbelianGroup {
        AbelianGroup::new(GroupSpec::new(2, vec![], vec![vec![0, 1], vec![-1, 0]]).unwrap())
    }

    fn z2_t2() -> AbelianGroup {
        AbelianGroup::new(
            GroupSpec::new(3, vec![vec![0, 0, 2]], vec![vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]])
                .unwrap(),
        )
    }

    #[test]
    fn arithmetic_in_free_group() {
        let h = z2();
        let a = h.element(&[1, 0]).unwrap();
        let b = h.element(&[0, 1]).unwrap();
        assert_eq!(h.add(&a, &b).unwrap(), h.element(&[1, 1]).unwrap());
        let ab = h.element(&[1, 1]).unwrap();
        assert_eq!(h.scalar_mul(-1, &ab).unwrap(), h.element(&[-1, -1]).unwrap());
    }

    #[test]
    fn torsion_wraps() {
        let h = z2_t2();
        let t = h.element(&[0, 0, 1]).unwrap();
        assert_eq!(h.add(&t, &t).unwrap(), h.zero());
        assert!(h.is_torsion(&t));
        assert!(!h.is_torsion(&h.element(&[1, 0, 0]).unwrap()));
        assert!(h.is_torsion(&h.zero()));
        assert_eq!(h.representative(&t), vec![0, 0, 1]);
    }

    #[test]
    fn pairing_values() {
        let h = AbelianGroup::surface(1, 0);
        let a = h.generator("A1").unwrap();
        let b = h.generator("B1").unwrap();
        assert_eq!(h.pairing(a, b), 1);
        assert_eq!(h.pairing(b, a), -1);
        assert_eq!(h.pairing(a, a), 0);
        let t = z2_t2();
        let tor = t.element(&[0, 0, 1]).unwrap();
        for y in t.box_support(2) {
            assert_eq!(t.pairing(&tor, &y), 0);
        }
    }

    #[test]
    fn kernel_and_derived() {
        let h = AbelianGroup::surface(1, 2);
        let c1 = h.generator("C1").unwrap();
        assert!(h.in_kernel_mu(c1));
        assert!(!h.in_kernel_mu(h.generator("A1").unwrap()));
        assert!(h.in_kernel_mu(&h.zero()));
        assert!(!h.is_derived_element(&h.zero()));
        let s = AbelianGroup::surface(2, 3);
        assert!(!s.is_derived_element(s.generator("C1").unwrap()));
        assert!(z2().is_derived_element(&z2().element(&[1, 0]).unwrap()));
    }

    #[test]
    fn surface_structure() {
        let h = AbelianGroup::surface(1, 0);
        assert_eq!(h.free_rank(), 2);
        assert!(h.form_is_nondegenerate());
        let h = AbelianGroup::surface(2, 3);
        assert_eq!(h.free_rank(), 6);
        assert_eq!(h.kernel_mu_rank(), 2);
        let c: Vec<_> = ["C1", "C2", "C3"].iter().map(|n| h.generator(n).unwrap().clone()).collect();
        assert_eq!(h.sum_all(&c), h.zero());
        let h = AbelianGroup::surface(0, 1);
        assert_eq!(h.arity(), 0);
        assert_eq!(h.box_support(3).len(), 1);
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            GroupSpec::new(2, vec![], vec![vec![1, 1], vec![-1, 0]]),
            Err(SpecError::NonzeroDiagonal { .. })
        ));
        assert!(matches!(
            GroupSpec::new(2, vec![], vec![vec![0, 1], vec![1, 0]]),
            Err(SpecError::NotAntisymmetric { .. })
        ));
        assert!(matches!(
            GroupSpec::new(2, vec![vec![2, 0]], vec![vec![0, 1], vec![-1, 0]]),
            Err(SpecError::Descent { row: 0, .. })
        ));
    }

    #[test]
    fn box_sizes() {
        assert_eq!(z2().box_support(1).len(), 9);
        assert_eq!(z2_t2().box_support(1).len(), 18);
        let z = AbelianGroup::new(GroupSpec::new(1, vec![], vec![vec![0]]).unwrap());
        assert_eq!(z.box_support(2).len(), 5);
        let b = z2().box_support(2);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn foreign_elements_rejected() {
        let h = z2_t2();
        let bad = GroupElement { coords: vec![0, 0, 5] };
        assert!(h.add(&bad, &h.zero()).is_err());
        assert!(h.element(&[1, 2]).is_err());
    }

    #[test]
    fn quotient_rank_via_augmented_relations() {
        let h = AbelianGroup::surface(1, 2);
        assert_eq!(h.quotient_free_rank(h.generator("C1").unwrap()), 2);
        assert_eq!(h.quotient_free_rank(&h.zero()), 3);
    }
}
