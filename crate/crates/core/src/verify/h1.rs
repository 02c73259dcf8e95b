//! H_1(Q[H]) is the center Q[ker mu]: grading-wise, C_1 = Q[z] and the image
//! of d_2 is spanned by -<u,z>[z].

use crate::complex::{boundary, WedgeChain};
use crate::group::{AbelianGroup, GroupElement};
use crate::linalg::{q, q_frac};
use crate::verify::report::{CheckEntry, Verdict};
use crate::verify::settings::{chain, el, Settings};

/// The truncated H_1 dimension of one grading with its witness: for z outside
/// ker mu, a 2-chain w with d_2 w = [z].
pub fn h1_grading(h: &AbelianGroup, z: &GroupElement, candidates: &[GroupElement]) -> (usize, Option<WedgeChain>) {
    match candidates.iter().find(|y| h.pairing(y, z) != 0) {
        None => (1, None),
        Some(y) => {
            let w = WedgeChain::monomial(vec![y.clone(), h.difference(z, y)], q_frac(-1, h.pairing(y, z)));
            (0, Some(w))
        }
    }
}

pub fn h1_check(h: &AbelianGroup, s: &Settings) -> CheckEntry {
    let mut e = CheckEntry::new("h1-center", "H_1(Q[H]) equals the center Q[ker mu]: dim 1 in gradings of ker mu, 0 elsewhere")
        .param("box", s.m)
        .param("boundary_box", s.m_prime);
    // y from the unit box first, then the generators
    let mut candidates = h.box_support(1);
    candidates.extend(h.generators().iter().cloned());
    let gradings = h.box_support(s.m);
    let mut r = s.m_prime.min(s.m + 1);
    while r > 1 && ((2 * r + 1) as f64).powi(h.free_rank() as i32) > 20_000.0 {
        r -= 1;
    }
    let small = h.box_support(r);
    e = e.param("kernel_scan_box", r);
    let (mut inner, mut outer) = (0usize, 0usize);
    for z in &gradings {
        let (dim, w) = h1_grading(h, z, &candidates);
        let expected = if h.in_kernel_mu(z) { 1 } else { 0 };
        e.require(dim == expected, Verdict::Refuted, || format!("grading {}: dim {dim}, expected {expected}", el(h, z)));
        match w {
            Some(w) => {
                outer += 1;
                let ok = boundary(h, &w) == WedgeChain::monomial(vec![z.clone()], q(1));
                e.require(ok, Verdict::Refuted, || format!("grading {}: witness does not bound [z]", el(h, z)));
                e.witness(|| format!("[{}] = d({})", el(h, z), chain(h, &w)));
            }
            None => {
                inner += 1;
                // every 2-wedge of the grading has zero boundary
                let zero = small.iter().all(|u| {
                    boundary(h, &WedgeChain::monomial(vec![u.clone(), h.difference(z, u)], q(1))).is_zero()
                });
                e.require(zero, Verdict::Refuted, || format!("grading {}: nonzero boundary into [z]", el(h, z)));
            }
        }
    }
    e.fact("gradings", gradings.len());
    e.fact("dim 1 (ker mu)", inner);
    e.fact("dim 0 (H^(1))", outer);
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_and_surface() {
        let h = AbelianGroup::surface(1, 0);
        let e = h1_check(&h, &Settings::new(2, 3));
        assert_eq!(e.verdict, Verdict::Certified);
        assert_eq!(e.facts["dim 1 (ker mu)"], "1");
        let h = AbelianGroup::surface(1, 2);
        let e = h1_check(&h, &Settings::new(1, 3));
        assert_eq!(e.verdict, Verdict::Certified);
        assert_eq!(e.facts["dim 1 (ker mu)"], "3");
    }
}
