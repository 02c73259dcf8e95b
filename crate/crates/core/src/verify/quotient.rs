//! Q (x) (H/Zz) and its exterior powers, with the maps f and g between
//! graded chains and wedge powers of the quotient.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::complex::{Wedge, WedgeChain};
use crate::group::{AbelianGroup, GroupElement};
use crate::linalg::{q, Q};

/// Q (x) (H/Zz) realised on the free coordinates of H: the line spanned by
/// the free part of z is killed by eliminating one pivot coordinate.
#[derive(Clone, Debug)]
pub struct QuotientTensorSpace {
    z: GroupElement,
    z_free: Vec<i64>,
    /// Coordinate eliminated against z, if z has a free part.
    pivot: Option<usize>,
    rank: usize,
}

impl QuotientTensorSpace {
    pub fn new(h: &AbelianGroup, z: &GroupElement) -> Self {
        let z_free = h.free_part(z).to_vec();
        let pivot = z_free.iter().position(|&c| c != 0);
        let rank = h.free_rank() - usize::from(pivot.is_some());
        QuotientTensorSpace { z: z.clone(), z_free, pivot, rank }
    }

    pub fn z(&self) -> &GroupElement {
        &self.z
    }

    pub fn dim(&self) -> usize {
        self.rank
    }

    /// Image of 1 (x) x.
    pub fn project(&self, h: &AbelianGroup, x: &GroupElement) -> Vec<Q> {
        let v = h.free_part(x);
        match self.pivot {
            None => v.iter().map(|&c| q(c)).collect(),
            Some(p) => {
                let t = Q::new(v[p].into(), self.z_free[p].into());
                (0..v.len())
                    .filter(|&i| i != p)
                    .map(|i| q(v[i]) - &t * q(self.z_free[i]))
                    .collect()
            }
        }
    }

    /// Lift of the k-th basis vector: a unit element of H.
    pub fn lift_basis(&self, h: &AbelianGroup, k: usize) -> GroupElement {
        let j = match self.pivot {
            Some(p) if k >= p => k + 1,
            _ => k,
        };
        let mut c = vec![0; h.arity()];
        c[j] = 1;
        h.from_canonical(c).expect("arity matches")
    }
}

/// An element of the exterior power of Q (x) (H/Zz), on sorted index sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExteriorVector {
    degree: usize,
    terms: BTreeMap<Vec<usize>, Q>,
}

impl ExteriorVector {
    pub fn zero(degree: usize) -> Self {
        ExteriorVector { degree, terms: BTreeMap::new() }
    }

    /// e_{i_1} ^ ... ^ e_{i_k} for increasing indices.
    pub fn basis(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        let mut out = Self::zero(indices.len());
        out.terms.insert(indices, q(1));
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, k: Vec<usize>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &ExteriorVector, c: &Q) {
        assert_eq!(self.degree, other.degree);
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    /// self ^ v for a degree-one vector v given by coordinates.
    pub fn wedge_vector(&self, v: &[Q]) -> ExteriorVector {
        let mut out = Self::zero(self.degree + 1);
        for (set, c) in &self.terms {
            for (i, vi) in v.iter().enumerate() {
                if vi.is_zero() || set.binary_search(&i).is_ok() {
                    continue;
                }
                // moving e_i from the end past the larger indices
                let larger = set.iter().filter(|&&s| s > i).count();
                let sign = if larger % 2 == 0 { q(1) } else { q(-1) };
                let mut k = set.clone();
                let pos = k.partition_point(|&s| s < i);
                k.insert(pos, i);
                out.add_term(k, c * vi * sign);
            }
        }
        out
    }

    /// v_1 ^ ... ^ v_k.
    pub fn wedge_of(vectors: &[Vec<Q>]) -> ExteriorVector {
        let mut acc = Self::basis(Vec::new());
        for v in vectors {
            acc = acc.wedge_vector(v);
        }
        acc
    }

    /// Coordinates against a fixed enumeration of index sets.
    pub fn coordinates(&self, index: &BTreeMap<Vec<usize>, usize>) -> Vec<(usize, Q)> {
        self.terms.iter().map(|(k, c)| (index[k], c.clone())).collect()
    }
}

/// f([u_1]^...^[u_p]) = 1 (x) (u_1 ^ ... ^ u_{p-1}) on one sorted wedge.
pub fn f_wedge(h: &AbelianGroup, space: &QuotientTensorSpace, w: &Wedge) -> ExteriorVector {
    let f = w.factors();
    let vs: Vec<Vec<Q>> = f[..f.len() - 1].iter().map(|x| space.project(h, x)).collect();
    ExteriorVector::wedge_of(&vs)
}

/// The map f on a chain graded at z (the grading of `space`).
pub fn f_map(h: &AbelianGroup, space: &QuotientTensorSpace, c: &WedgeChain) -> ExteriorVector {
    let mut out = ExteriorVector::zero(c.degree().saturating_sub(1));
    for (w, v) in c.terms() {
        debug_assert_eq!(&crate::complex::grading(h, w), space.z(), "chain not graded at z");
        out.add_scaled(&f_wedge(h, space, w), v);
    }
    out
}

/// g(1 (x) e_S) = [e_{s_1}] ^ ... ^ [e_{s_k}] ^ [z - sum], extended linearly
/// using unit lifts of the quotient basis.
pub fn g_map(h: &AbelianGroup, space: &QuotientTensorSpace, t: &ExteriorVector) -> WedgeChain {
    let mut out = WedgeChain::zero(t.degree() + 1);
    for (set, c) in t.terms() {
        let mut factors: Vec<GroupElement> = set.iter().map(|&k| space.lift_basis(h, k)).collect();
        let last = h.difference(space.z(), &h.sum_all(factors.iter()));
        factors.push(last);
        out.add_monomial(factors, c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_kills_z_and_torsion() {
        let h = AbelianGroup::surface(1, 2);
        let z = h.generator("C1").unwrap().clone();
        let s = QuotientTensorSpace::new(&h, &z);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.dim(), h.quotient_free_rank(&z));
        assert!(s.project(&h, &z).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn wedge_signs() {
        let e0 = vec![q(1), q(0)];
        let e1 = vec![q(0), q(1)];
        let a = ExteriorVector::wedge_of(&[e0.clone(), e1.clone()]);
        let b = ExteriorVector::wedge_of(&[e1, e0.clone()]);
        let mut s = a.clone();
        s.add_scaled(&b, &q(1));
        assert!(s.is_zero());
        assert!(ExteriorVector::wedge_of(&[e0.clone(), e0]).is_zero());
    }

    #[test]
    fn f_of_generator_pair() {
        let h = AbelianGroup::surface(1, 0);
        let z = h.zero();
        let s = QuotientTensorSpace::new(&h, &z);
        let u = h.element(&[1, 2]).unwrap();
        let c = WedgeChain::monomial(vec![u.clone(), h.difference(&z, &u)], q(1));
        assert_eq!(f_map(&h, &s, &c), ExteriorVector::wedge_of(&[s.project(&h, &u)]));
    }
}
