//! Membership in the ideal I-hat generated by
//! [u+v]^[x] - [u]^[x+v] - [v]^[x+u], in degree two.

use std::collections::HashMap;

use crate::complex::{Wedge, WedgeChain};
use crate::group::{AbelianGroup, GroupElement};
use crate::linalg::{q, Echelon, SparseVec, Q};
use crate::verify::quotient::{f_map, QuotientTensorSpace};

/// The generator with u + v + x = z.
pub fn ideal_generator(h: &AbelianGroup, u: &GroupElement, v: &GroupElement, x: &GroupElement) -> WedgeChain {
    let mut c = WedgeChain::monomial(vec![h.sum(u, v), x.clone()], q(1));
    c.add_monomial(vec![u.clone(), h.sum(x, v)], q(-1));
    c.add_monomial(vec![v.clone(), h.sum(x, u)], q(-1));
    c
}

#[derive(Clone, Debug)]
pub enum Membership {
    /// c = sum coefficient * generator(u, v, x).
    Member(Vec<(Q, [GroupElement; 3])>),
    /// Not in the span of the generators inside the box. When f(c) != 0 this
    /// is definitive, since f vanishes on I-hat.
    NotFound { f_nonzero: bool },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Tests a degree-2 chain graded at z against the generators whose three
/// arguments lie in the radius-`radius` box.
pub fn ideal_membership(h: &AbelianGroup, z: &GroupElement, c: &WedgeChain, radius: i64) -> Membership {
    assert_eq!(c.degree(), 2, "I-hat membership is implemented in degree two");
    let sup = h.box_support(radius);
    let mut index: HashMap<Wedge, usize> = HashMap::new();
    let to_vec =|ch: &WedgeChain, index: &mut HashMap<Wedge, usize>| -> SparseVec {
        ch.terms()
            .iter()
            .map(|(w, x)| {
                let n = index.len();
                (*index.entry(w.clone()).or_insert(n), x.clone())
            })
            .collect()
    };
    let target = to_vec(c, &mut index);
    let mut e = Echelon::new(true);
    let mut gens: Vec<[GroupElement; 3]> = Vec::new();
    let check_every = 256;
    for (i, u) in sup.iter().enumerate() {
        for v in &sup[i..] {
            let x = h.difference(z, &h.sum(u, v));
            if !h.in_box(&x, radius) {
                continue;
            }
            let g = ideal_generator(h, u, v, &x);
            if g.is_zero() {
                continue;
            }
            let col = to_vec(&g, &mut index);
            e.insert(&col);
            gens.push([u.clone(), v.clone(), x]);
            if gens.len() % check_every == 0 {
                if let Some(w) = e.express(&target) {
                    return Membership::Member(collect(w, &gens));
                }
            }
        }
    }
    match e.express(&target) {
        Some(w) => Membership::Member(collect(w, &gens)),
        None => {
            let space = QuotientTensorSpace::new(h, z);
            Membership::NotFound { f_nonzero: !f_map(h, &space, c).is_zero() }
        }
    }
}

fn collect(w: SparseVec, gens: &[[GroupElement; 3]]) -> Vec<(Q, [GroupElement; 3])> {
    w.into_iter().map(|(i, x)| (x, gens[i].clone())).collect()
}

/// Re-expands a membership witness.
pub fn expand(h: &AbelianGroup, witness: &[(Q, [GroupElement; 3])]) -> WedgeChain {
    let mut c = WedgeChain::zero(2);
    for (k, [u, v, x]) in witness {
        c.add_scaled(&ideal_generator(h, u, v, x), k);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::boundary;

    #[test]
    fn generators_and_boundaries_are_members() {
        let h = AbelianGroup::surface(1, 0);
        let z = h.zero();
        let u = h.element(&[1, 0]).unwrap();
        let v = h.element(&[0, 1]).unwrap();
        let x = h.difference(&z, &h.sum(&u, &v));
        let g = ideal_generator(&h, &u, &v, &x);
        match ideal_membership(&h, &z, &g, 2) {
            Membership::Member(w) => assert_eq!(expand(&h, &w), g),
            other => panic!("{other:?}"),
        }
        let t = WedgeChain::monomial(vec![u.clone(), h.element(&[1, 1]).unwrap(), h.element(&[-2, -1]).unwrap()], q(1));
        let d = boundary(&h, &t);
        assert!(ideal_membership(&h, &z, &d, 3).is_member());
        let c = WedgeChain::monomial(vec![u.clone(), h.difference(&z, &u)], q(1));
        match ideal_membership(&h, &z, &c, 2) {
            Membership::NotFound { f_nonzero } => assert!(f_nonzero),
            other => panic!("{other:?}"),
        }
    }
}
