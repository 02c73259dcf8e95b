//! Chevalley-Eilenberg chains of Q[H] on the basis H, graded by the sum of
//! the wedge factors.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use crate::group::{AbelianGroup, GroupElement};
use crate::linalg::{q, SparseRationalMatrix, SparseVec, Q};

/// [u_1] ^ ... ^ [u_p] with strictly increasing factors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Wedge(Vec<GroupElement>);

impl Wedge {
    /// Sorts the factors. Returns the wedge and the sign of the sorting
    /// permutation, or `None` when a factor repeats.
    pub fn from_unsorted(mut factors: Vec<GroupElement>) -> Option<(Wedge, i64)> {
        assert!(!factors.is_empty(), "wedges have degree >= 1");
        let mut sign = 1;
        // insertion sort, counting transpositions
        for i in 1..factors.len() {
            let mut j = i;
            while j > 0 && factors[j - 1] > factors[j] {
                factors.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if factors.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((Wedge(factors), sign))
    }

    /// Wraps factors already in strictly increasing order.
    pub fn from_sorted(factors: Vec<GroupElement>) -> Wedge {
        debug_assert!(factors.windows(2).all(|w| w[0] < w[1]));
        Wedge(factors)
    }

    pub fn factors(&self) -> &[GroupElement] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Debug for Wedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "^")?;
            }
            write!(f, "[{x:?}]")?;
        }
        Ok(())
    }
}

/// Grading of a wedge: the sum of its factors.
pub fn grading(h: &AbelianGroup, w: &Wedge) -> GroupElement {
    h.sum_all(w.factors())
}

/// A Q-linear combination of p-wedges.
#[derive(Clone, PartialEq, Eq)]
pub struct WedgeChain {
    degree: usize,
    terms: BTreeMap<Wedge, Q>,
}

impl WedgeChain {
    pub fn zero(degree: usize) -> Self {
        WedgeChain { degree, terms: BTreeMap::new() }
    }

    pub fn from_wedge(w: Wedge, c: Q) -> Self {
        let mut out = Self::zero(w.degree());
        out.add_term(w, c);
        out
    }

    /// c [f_1] ^ ... ^ [f_p] for factors in any order.
    pub fn monomial(factors: Vec<GroupElement>, c: Q) -> Self {
        let mut out = Self::zero(factors.len());
        out.add_monomial(factors, c);
        out
    }

    pub fn add_monomial(&mut self, factors: Vec<GroupElement>, c: Q) {
        if let Some((w, s)) = Wedge::from_unsorted(factors) {
            self.add_term(w, c * q(s));
        }
    }

    pub fn add_term(&mut self, w: Wedge, c: Q) {
        assert_eq!(w.degree(), self.degree, "wedge degree mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    /// self += c * other
    pub fn add_scaled(&mut self, other: &WedgeChain, c: &Q) {
        for (w, v) in &other.terms {
            self.add_term(w.clone(), v * c);
        }
    }

    pub fn plus(&self, other: &WedgeChain) -> WedgeChain {
        let mut out = self.clone();
        out.add_scaled(other, &q(1));
        out
    }

    pub fn minus(&self, other: &WedgeChain) -> WedgeChain {
        let mut out = self.clone();
        out.add_scaled(other, &q(-1));
        out
    }

    pub fn scaled(&self, c: &Q) -> WedgeChain {
        let mut out = Self::zero(self.degree);
        out.add_scaled(self, c);
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Wedge, Q> {
        &self.terms
    }

    pub fn coefficient(&self, w: &Wedge) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common grading of all terms; `None` for zero or mixed chains.
    pub fn grading(&self, h: &AbelianGroup) -> Option<GroupElement> {
        let mut it = self.terms.keys().map(|w| grading(h, w));
        let z = it.next()?;
        it.all(|g| g == z).then_some(z)
    }

    /// Splits the chain by grading.
    pub fn homogeneous_parts(&self, h: &AbelianGroup) -> BTreeMap<GroupElement, WedgeChain> {
        let mut out: BTreeMap<GroupElement, WedgeChain> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(grading(h, w))
                .or_insert_with(|| WedgeChain::zero(self.degree))
                .add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&Wedge) -> bool) {
        self.terms.retain(|w, _| keep(w));
    }

    /// Largest radius among all factors.
    pub fn radius(&self, h: &AbelianGroup) -> i64 {
        self.terms.keys().flat_map(|w| w.factors()).map(|x| h.radius(x)).max().unwrap_or(0)
    }
}

impl fmt::Debug for WedgeChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{w:?}")?;
        }
        Ok(())
    }
}

/// The Chevalley-Eilenberg boundary of one wedge, accumulated into `out`
/// with weight `c`.
fn boundary_wedge_into(h: &AbelianGroup, w: &Wedge, c: &Q, out: &mut WedgeChain) {
    let u = w.factors();
    let p = u.len();
    for i in 0..p {
        for j in i + 1..p {
            let pair = h.pairing(&u[i], &u[j]);
            if pair == 0 {
                continue;
            }
            // indices are 1-based in the sign (-1)^{i+j}
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            let mut factors = Vec::with_capacity(p - 1);
            factors.push(h.sum(&u[i], &u[j]));
            factors.extend(u.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, x)| x.clone()));
            out.add_monomial(factors, c * q(sign * pair));
        }
    }
}

/// d([u_1]^...^[u_p]) = sum_{i<j} (-1)^{i+j} <u_i,u_j> [u_i+u_j] ^ (rest).
pub fn boundary(h: &AbelianGroup, c: &WedgeChain) -> WedgeChain {
    if c.degree <= 1 {
        return WedgeChain::zero(c.degree.saturating_sub(1));
    }
    let mut out = WedgeChain::zero(c.degree - 1);
    for (w, v) in &c.terms {
        boundary_wedge_into(h, w, v, &mut out);
    }
    out
}

pub fn boundary_of_wedge(h: &AbelianGroup, w: &Wedge) -> WedgeChain {
    if w.degree() <= 1 {
        return WedgeChain::zero(w.degree() - 1);
    }
    let mut out = WedgeChain::zero(w.degree() - 1);
    boundary_wedge_into(h, w, &q(1), &mut out);
    out
}

/// Which elements of the support may appear as wedge factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Restrict {
    Full,
    DerivedOnly,
    KernelOnly,
}

impl Restrict {
    pub fn admits(self, h: &AbelianGroup, x: &GroupElement) -> bool {
        match self {
            Restrict::Full => true,
            Restrict::DerivedOnly => h.is_derived_element(x),
            Restrict::KernelOnly => h.in_kernel_mu(x),
        }
    }
}

/// All p-subsets of the filtered support with factor sum z, sorted.
pub fn enumerate_basis(
    h: &AbelianGroup,
    support: &[GroupElement],
    p: usize,
    z: &GroupElement,
    restrict: Restrict,
) -> Vec<Wedge> {
    assert!(p >= 1);
    let mut elems: Vec<GroupElement> = support.iter().filter(|x| restrict.admits(h, x)).cloned().collect();
    elems.sort();
    elems.dedup();
    let lookup: HashSet<&GroupElement> = elems.iter().collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(p);
    enumerate_rec(h, &elems, &lookup, p, z, &h.zero(), 0, &mut chosen, &mut out);
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec(
    h: &AbelianGroup,
    elems: &[GroupElement],
    lookup: &HashSet<&GroupElement>,
    p: usize,
    z: &GroupElement,
    partial: &GroupElement,
    start: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Wedge>,
) {
    if chosen.len() + 1 == p {
        // the last factor is forced
        let last = h.difference(z, partial);
        let bigger = chosen.last().map_or(true, |&k| last > elems[k]);
        if bigger && lookup.contains(&last) {
            let mut f: Vec<GroupElement> = chosen.iter().map(|&k| elems[k].clone()).collect();
            f.push(last);
            out.push(Wedge(f));
        }
        return;
    }
    for k in start..elems.len() {
        chosen.push(k);
        let next = h.sum(partial, &elems[k]);
        enumerate_rec(h, elems, lookup, p, z, &next, k + 1, chosen, out);
        chosen.pop();
    }
}

/// Drops every wedge with a ker(mu) factor (the projection onto the derived
/// part of the exterior algebra).
pub fn project_derived(h: &AbelianGroup, c: &WedgeChain) -> WedgeChain {
    let mut out = c.clone();
    out.retain(|w| w.factors().iter().all(|x| h.is_derived_element(x)));
    out
}

/// Whether every factor of every term is in H^(1).
pub fn is_derived_chain(h: &AbelianGroup, c: &WedgeChain) -> bool {
    c.terms.keys().all(|w| w.factors().iter().all(|x| h.is_derived_element(x)))
}

/// Anything that can be evaluated on wedges. `None` means the wedge lies
/// outside the cochain's enumerated support.
pub trait CochainEval {
    fn degree(&self) -> usize;
    fn eval(&self, w: &Wedge) -> Option<Q>;
}

/// A cochain given by a table on an enumerated basis, zero elsewhere on
/// that basis.
#[derive(Clone, Debug, Default)]
pub struct Cochain {
    degree: usize,
    basis: BTreeSet<Wedge>,
    values: BTreeMap<Wedge, Q>,
}

impl Cochain {
    pub fn new(degree: usize, basis: impl IntoIterator<Item = Wedge>) -> Self {
        Cochain { degree, basis: basis.into_iter().collect(), values: BTreeMap::new() }
    }

    pub fn from_fn(degree: usize, basis: impl IntoIterator<Item = Wedge>, mut f: impl FnMut(&Wedge) -> Q) -> Self {
        let mut c = Self::new(degree, basis);
        let values = c.basis.iter().map(|w| (w.clone(), f(w))).filter(|(_, v)| !v.is_zero()).collect();
        c.values = values;
        c
    }

    pub fn set(&mut self, w: Wedge, v: Q) {
        assert!(self.basis.contains(&w), "value outside the enumerated basis");
        if v.is_zero() {
            self.values.remove(&w);
        } else {
            self.values.insert(w, v);
        }
    }

    pub fn basis(&self) -> &BTreeSet<Wedge> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

impl CochainEval for Cochain {
    fn degree(&self) -> usize {
        self.degree
    }

    fn eval(&self, w: &Wedge) -> Option<Q> {
        if !self.basis.contains(w) {
            return None;
        }
        Some(self.values.get(w).cloned().unwrap_or_else(Q::zero))
    }
}

/// Evaluation of a cochain on a chain. Terms outside the support count as
/// zero; the number of such terms is returned alongside.
pub fn evaluate(eta: &dyn CochainEval, c: &WedgeChain) -> (Q, usize) {
    assert_eq!(eta.degree(), c.degree(), "degree mismatch");
    let mut total = Q::zero();
    let mut edges = 0;
    for (w, v) in c.terms() {
        match eta.eval(w) {
            Some(x) => total += x * v,
            None => edges += 1,
        }
    }
    (total, edges)
}

/// (d eta)(w) = eta(boundary w), with the truncation-edge count.
pub fn coboundary_at(h: &AbelianGroup, eta: &dyn CochainEval, w: &Wedge) -> (Q, usize) {
    evaluate(eta, &boundary_of_wedge(h, w))
}

/// The coboundary tabulated on the given (p+1)-wedges.
#[derive(Clone, Debug)]
pub struct Coboundary {
    pub cochain: Cochain,
    /// Number of boundary terms that fell outside the support of eta.
    pub truncation_edges: usize,
}

pub fn coboundary(h: &AbelianGroup, eta: &dyn CochainEval, domain: impl IntoIterator<Item = Wedge>) -> Coboundary {
    let mut cochain = Cochain::new(eta.degree() + 1, domain);
    let mut truncation_edges = 0;
    let ws: Vec<Wedge> = cochain.basis.iter().cloned().collect();
    for w in ws {
        let (v, e) = coboundary_at(h, eta, &w);
        truncation_edges += e;
        cochain.set(w, v);
    }
    Coboundary { cochain, truncation_edges }
}

/// Boundary map restricted to `domain`, as a matrix whose rows are indexed by
/// `codomain`. Boundary terms missing from `codomain` are reported.
pub struct BoundaryMatrix {
    pub matrix: SparseRationalMatrix,
    pub dropped_terms: usize,
}

pub fn boundary_matrix(h: &AbelianGroup, domain: &[Wedge], codomain: &[Wedge]) -> BoundaryMatrix {
    let index: HashMap<&Wedge, usize> = codomain.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut dropped_terms = 0;
    let cols = domain
        .iter()
        .map(|w| {
            let mut col = SparseVec::new();
            for (t, c) in boundary_of_wedge(h, w).terms() {
                match index.get(t) {
                    Some(&i) => {
                        col.insert(i, c.clone());
                    }
                    None => dropped_terms += 1,
                }
            }
            col
        })
        .collect();
    BoundaryMatrix { matrix: SparseRationalMatrix::from_columns(codomain.len(), cols), dropped_terms }
}

/// Coefficient vector of a chain on an enumerated basis; `None` if some term
/// is not in the basis.
pub fn chain_vector(c: &WedgeChain, index: &HashMap<Wedge, usize>) -> Option<SparseVec> {
    let mut v = SparseVec::new();
    for (w, x) in c.terms() {
        v.insert(*index.get(w)?, x.clone());
    }
    Some(v)
}

pub fn basis_index(basis: &[Wedge]) -> HashMap<Wedge, usize> {
    basis.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect()
}

/// Text export of a wedge basis: one line per wedge, `index: c1 | c2 | ...`
/// with each factor given by its canonical coordinates.
pub fn basis_to_text(basis: &[Wedge]) -> String {
    let mut s = String::new();
    for (i, w) in basis.iter().enumerate() {
        let parts: Vec<String> = w
            .factors()
            .iter()
            .map(|x| x.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        writeln!(s, "{i}: {}", parts.join(" | ")).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> AbelianGroup {
        AbelianGroup::surface(1, 0)
    }

    fn el(h: &AbelianGroup, c: &[i64]) -> GroupElement {
        h.element(c).unwrap()
    }

    #[test]
    fn sorting_sign() {
        let h = z2();
        let a = el(&h, &[0, 1]);
        let b = el(&h, &[1, 0]);
        let (w, s) = Wedge::from_unsorted(vec![b.clone(), a.clone()]).unwrap();
        assert_eq!(s, -1);
        assert_eq!(w.factors(), &[a.clone(), b.clone()]);
        assert!(Wedge::from_unsorted(vec![a.clone(), b, a]).is_none());
    }

    #[test]
    fn two_boundary() {
        let h = z2();
        let u = el(&h, &[1, 0]);
        let v = el(&h, &[0, 1]);
        let c = WedgeChain::monomial(vec![u, v], q(1));
        let d = boundary(&h, &c);
        let expected = WedgeChain::monomial(vec![el(&h, &[1, 1])], q(-1));
        assert_eq!(d, expected);
    }

    #[test]
    fn gradings() {
        let h = z2();
        let u = el(&h, &[1, 0]);
        let v = el(&h, &[0, 1]);
        let (w, _) = Wedge::from_unsorted(vec![u.clone(), v]).unwrap();
        assert_eq!(grading(&h, &w), el(&h, &[1, 1]));
        let (s, _) = Wedge::from_unsorted(vec![u.clone()]).unwrap();
        assert_eq!(grading(&h, &s), u);
    }

    #[test]
    fn enumeration_examples() {
        let h = z2();
        let sup = h.box_support(1);
        let ws = enumerate_basis(&h, &sup, 2, &h.zero(), Restrict::DerivedOnly);
        assert_eq!(ws.len(), 4);
        let z = el(&h, &[1, -1]);
        assert_eq!(enumerate_basis(&h, &sup, 1, &z, Restrict::Full).len(), 1);
        assert_eq!(enumerate_basis(&h, &sup, 1, &h.zero(), Restrict::KernelOnly).len(), 1);
        assert!(enumerate_basis(&h, &sup, 2, &h.zero(), Restrict::KernelOnly).is_empty());
    }

    #[test]
    fn zero_cochain_has_zero_coboundary() {
        let h = z2();
        let sup = h.box_support(1);
        let z = h.zero();
        let eta = Cochain::new(2, enumerate_basis(&h, &sup, 2, &z, Restrict::Full));
        let cb = coboundary(&h, &eta, enumerate_basis(&h, &sup, 3, &z, Restrict::Full));
        assert!(cb.cochain.is_zero());
    }

    #[test]
    fn triplet_roundtrip_of_boundary_matrix() {
        let h = z2();
        let sup = h.box_support(1);
        let z = el(&h, &[1, 1]);
        let dom = enumerate_basis(&h, &sup, 2, &z, Restrict::Full);
        let cod = enumerate_basis(&h, &h.box_support(2), 1, &z, Restrict::Full);
        let m = boundary_matrix(&h, &dom, &cod);
        assert_eq!(m.dropped_terms, 0);
        let text = m.matrix.to_triplet_text();
        assert_eq!(SparseRationalMatrix::from_triplet_text(&text).unwrap(), m.matrix);
        assert!(basis_to_text(&dom).lines().count() == dom.len());
    }
}
