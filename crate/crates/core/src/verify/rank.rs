//! Truncated second homology by exact ranks.
//!
//! Cycles come from the box of radius `m`, boundaries from three-wedges in the
//! box of radius `m_prime`. With A the cycle space and B the boundary span,
//! dim(A cap B) = rank A + rank B - rank(A + B).

use std::collections::HashMap;

use num_traits::Zero;

use crate::complex::{
    basis_index, boundary_of_wedge, enumerate_basis, project_derived, Restrict, Wedge, WedgeChain,
};
use crate::group::{AbelianGroup, GroupElement};
use crate::linalg::{sparsify, Echelon, SparseRationalMatrix, SparseVec};
use crate::verify::quotient::{f_map, QuotientTensorSpace};

#[derive(Clone, Debug)]
pub struct RankRoute {
    pub chains: usize,
    pub triples: usize,
    /// rank of Z_2 on the cycle box
    pub r_cycles: usize,
    /// rank of d_3 on the boundary box
    pub r_boundaries: usize,
    pub r_sum: usize,
    /// dim of Z_2 cap B_2
    pub intersection: usize,
    /// truncated dim H_2
    pub h2: usize,
    /// images of boundaries that are nonzero under f (should be none)
    pub f_nonzero_boundaries: usize,
    /// rank of f on Z_2
    pub f_rank: usize,
    /// boundary terms outside the radius-m_prime box of 2-wedges
    pub overflow_terms: usize,
    /// 3-chains bounding a basis of ker f cap Z_2, when requested
    pub kernel_witnesses: Vec<(WedgeChain, WedgeChain)>,
}

/// Boundary in the complex of Q[H] or, for derived-only support, of the
/// quotient algebra Q[H^(1)].
pub fn restricted_boundary(h: &AbelianGroup, w: &Wedge, restrict: Restrict) -> WedgeChain {
    let d = boundary_of_wedge(h, w);
    match restrict {
        Restrict::DerivedOnly => project_derived(h, &d),
        _ => d,
    }
}

/// Estimated number of 3-wedges in one grading of the radius-r box.
pub fn estimate_triples(h: &AbelianGroup, r: i64) -> f64 {
    let n = (2 * r + 1) as f64;
    let size = n.powi(h.free_rank() as i32) * h.torsion_coefficients().iter().product::<i64>() as f64;
    size * size / 6.0
}

pub fn rank_route(
    h: &AbelianGroup,
    z: &GroupElement,
    m: i64,
    m_prime: i64,
    restrict: Restrict,
    with_witnesses: bool,
) -> RankRoute {
    let small = h.box_support(m);
    let big = h.box_support(m_prime);
    let c2_small = enumerate_basis(h, &small, 2, z, restrict);
    let c2_big = enumerate_basis(h, &big, 2, z, restrict);
    let c3 = enumerate_basis(h, &big, 3, z, restrict);
    // boundary terms may leave the box; the codomain grows to hold them
    let n_box = c2_big.len();
    let mut codomain = c2_big;
    let mut index: HashMap<Wedge, usize> = basis_index(&codomain);

    // cycles: kernel of d_2 on the small box
    let mut d2_cols = Vec::with_capacity(c2_small.len());
    for w in &c2_small {
        let d = restricted_boundary(h, w, restrict);
        // C_1 in grading z is spanned by [z]
        let mut col = SparseVec::new();
        if let Some(c) = d.terms().values().next() {
            col.insert(0, c.clone());
        }
        d2_cols.push(col);
    }
    let d2 = SparseRationalMatrix::from_columns(1, d2_cols);
    let cycles: Vec<SparseVec> = d2
        .kernel_basis()
        .into_iter()
        .map(|k| {
            // re-index from the small basis into the big one
            sparsify(&k).into_iter().map(|(i, x)| (index[&c2_small[i]], x)).collect()
        })
        .collect();

    let space = QuotientTensorSpace::new(h, z);
    let mut f_nonzero_boundaries = 0;
    let mut e = Echelon::new(with_witnesses);
    for w in &c3 {
        let d = restricted_boundary(h, w, restrict);
        if !f_map(h, &space, &d).is_zero() {
            f_nonzero_boundaries += 1;
        }
        let mut col = SparseVec::new();
        for (t, c) in d.terms() {
            let i = *index.entry(t.clone()).or_insert_with(|| {
                codomain.push(t.clone());
                codomain.len() - 1
            });
            col.insert(i, c.clone());
        }
        e.insert(&col);
    }
    let r_boundaries = e.rank();

    // rank of f on the cycles, and a basis of ker f cap Z_2
    let f_images: Vec<SparseVec> = cycles
        .iter()
        .map(|v| {
            let chain = vector_chain(v, &codomain);
            let t = f_map(h, &space, &chain);
            t.terms().iter().map(|(k, c)| (k[0], c.clone())).collect()
        })
        .collect();
    let m_f = SparseRationalMatrix::from_columns(space.dim(), f_images);
    let f_rank = m_f.rank();

    let mut kernel_witnesses = Vec::new();
    if with_witnesses {
        for k in m_f.kernel_basis() {
            let mut v = SparseVec::new();
            for (j, x) in k.iter().enumerate() {
                if !x.is_zero() {
                    for (i, y) in &cycles[j] {
                        *v.entry(*i).or_insert_with(Zero::zero) += x * y;
                    }
                }
            }
            v.retain(|_, x| !x.is_zero());
            let target = vector_chain(&v, &codomain);
            if let Some(p) = e.express(&v) {
                kernel_witnesses.push((target, vector_chain(&p, &c3)));
            }
        }
    }

    let overflow_terms = codomain.len() - n_box;
    let r_cycles = cycles.len();
    for v in &cycles {
        e.insert(v);
    }
    let r_sum = e.rank();
    let intersection = r_cycles + r_boundaries - r_sum;
    RankRoute {
        chains: c2_small.len(),
        triples: c3.len(),
        r_cycles,
        r_boundaries,
        r_sum,
        intersection,
        h2: r_cycles - intersection,
        f_nonzero_boundaries,
        f_rank,
        overflow_terms,
        kernel_witnesses,
    }
}

fn vector_chain(v: &SparseVec, basis: &[Wedge]) -> WedgeChain {
    let degree = basis.first().map_or(0, |w| w.degree());
    let mut c = WedgeChain::zero(degree);
    for (i, x) in v {
        c.add_term(basis[*i].clone(), x.clone());
    }
    c
}

/// A 3-chain on the radius-r box whose (restricted) boundary is `target`,
/// found by elimination over the 3-wedges of the target's grading. Stops as
/// soon as the target is reached.
pub fn boundary_preimage(h: &AbelianGroup, target: &WedgeChain, r: i64, restrict: Restrict) -> Option<WedgeChain> {
    let z = target.grading(h)?;
    if target.is_zero() {
        return Some(WedgeChain::zero(3));
    }
    let triples = enumerate_basis(h, &h.box_support(r), 3, &z, restrict);
    let mut index: HashMap<Wedge, usize> = HashMap::new();
    let mut to_vec = |c: &WedgeChain| -> SparseVec {
        c.terms()
            .iter()
            .map(|(w, x)| {
                let n = index.len();
                (*index.entry(w.clone()).or_insert(n), x.clone())
            })
            .collect()
    };
    let t = to_vec(target);
    let mut e = Echelon::new(true);
    for (k, w) in triples.iter().enumerate() {
        e.insert(&to_vec(&restricted_boundary(h, w, restrict)));
        if (k + 1) % 128 == 0 || k + 1 == triples.len() {
            if let Some(x) = e.express(&t) {
                return Some(vector_chain(&x, &triples));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symplectic_plane_inner_and_outer() {
        let h = AbelianGroup::surface(1, 0);
        let r = rank_route(&h, &h.zero(), 2, 6, Restrict::Full, true);
        assert_eq!(r.h2, 2);
        assert_eq!(r.f_rank, 2);
        assert_eq!(r.intersection, r.r_cycles - r.f_rank);
        assert_eq!(r.f_nonzero_boundaries, 0);
        assert_eq!(r.kernel_witnesses.len(), r.intersection);
        for (t, w) in &r.kernel_witnesses {
            assert_eq!(&crate::complex::boundary(&h, w), t);
        }
        let z = h.element(&[1, 0]).unwrap();
        assert_eq!(rank_route(&h, &z, 2, 6, Restrict::Full, false).h2, 0);
    }
}
