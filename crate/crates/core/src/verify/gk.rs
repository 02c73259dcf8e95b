//! The 2-cycle ([2u]-2[u]) ^ ([z-2u]-2[z-u]+[z]) of g_K and its class.

use crate::algebra::{in_gk, k_map, AlgebraVector};
use crate::complex::{boundary, project_derived, Restrict, WedgeChain};
use crate::group::{AbelianGroup, GroupElement};
use crate::linalg::{q, Q};
use crate::verify::homotopy::{contracting_elements, contracting_homotopy};
use crate::verify::rank::{boundary_preimage, estimate_triples};
use crate::verify::relations::{default_helpers, pair_chain, relation_chain, relation_witness};
use crate::verify::report::{CheckEntry, Verdict, VerifyError};
use crate::verify::settings::{chain, el, Settings};

/// a ^ b for a, b in Q[H].
pub fn wedge_product(a: &AlgebraVector, b: &AlgebraVector) -> WedgeChain {
    let mut out = WedgeChain::zero(2);
    for (x, c) in a.terms() {
        for (y, d) in b.terms() {
            out.add_monomial(vec![x.clone(), y.clone()], c * d);
        }
    }
    out
}

pub fn gk_factors(h: &AbelianGroup, u: &GroupElement, z: &GroupElement) -> (AlgebraVector, AlgebraVector) {
    let first = AlgebraVector::from_terms([(h.scale(2, u), q(1)), (u.clone(), q(-2))]);
    let second = AlgebraVector::from_terms([
        (h.difference(z, &h.scale(2, u)), q(1)),
        (h.difference(z, u), q(-2)),
        (z.clone(), q(1)),
    ]);
    (first, second)
}

/// A 3-chain bounding one homogeneous cycle: Phi_2 in outer gradings, the
/// relation witness for R(u,u) = c(2u) - 2c(u) in the inner one.
fn constructive_witness(h: &AbelianGroup, z: &GroupElement, u: &GroupElement, part: &WedgeChain) -> Option<WedgeChain> {
    let g = part.grading(h)?;
    if h.is_derived_element(&g) {
        let y = contracting_elements(h, &g, 1).into_iter().next()?;
        let hom = contracting_homotopy(h, &g, &y).ok()?;
        return Some(hom.cycle_witness(h, part));
    }
    let r = relation_witness(h, z, u, u, &default_helpers(h))?;
    // part should be k R(u,u); the caller re-checks the boundary anyway
    let rel = relation_chain(h, z, u, u);
    let (w, x) = rel.terms().iter().next()?;
    let k: Q = part.coefficient(w) / x;
    Some(r.scaled(&k))
}

pub fn gk_cycle_check(h: &AbelianGroup, u: &GroupElement, z: &GroupElement, s: &Settings) -> Result<CheckEntry, VerifyError> {
    if !h.is_derived_element(u) {
        return Err(VerifyError::Parameter(format!("u = {} is not in H^(1)", el(h, u))));
    }
    if !h.in_kernel_mu(z) {
        return Err(VerifyError::NotInKernel(el(h, z)));
    }
    let (a, b) = gk_factors(h, u, z);
    let c = wedge_product(&a, &b);
    let r = 3 * h.radius(u).max(h.radius(z)).max(1);
    let mut e = CheckEntry::new("gk-cycle", "([2u]-2[u]) ^ ([z-2u]-2[z-u]+[z]) is a 2-cycle of g_K in the class of 6[u]^[z-u]")
        .param("u", el(h, u))
        .param("z", el(h, z))
        .param("boundary_box", r);
    e.fact("K(first factor)", format!("{:?}", k_map(h, &a).to_strings()));
    e.fact("K(second factor)", format!("{:?}", k_map(h, &b).to_strings()));
    e.require(in_gk(h, &a) && in_gk(h, &b), Verdict::Refuted, || "a factor is not in ker K".into());
    let d = boundary(h, &c);
    e.require(d.is_zero(), Verdict::Refuted, || format!("d_2 of the chain is {}", chain(h, &d)));
    e.fact("expanded chain", chain(h, &c));

    let mut target = project_derived(h, &c);
    target.add_scaled(&pair_chain(h, z, u), &q(-6));
    e.fact("projected chain - 6[u]^[z-u]", chain(h, &target));
    let oracle = estimate_triples(h, r) <= s.rank_budget;
    for (g, part) in target.homogeneous_parts(h) {
        let w = constructive_witness(h, z, u, &part);
        let ok = w.as_ref().is_some_and(|w| boundary(h, w) == part);
        e.require(ok, Verdict::Inconclusive, || format!("no explicit witness in grading {}", el(h, &g)));
        if let Some(w) = w.filter(|_| ok) {
            e.witness(|| format!("{} = d({})", chain(h, &part), chain(h, &w)));
        }
        if oracle {
            let found = boundary_preimage(h, &part, r, Restrict::Full);
            let ok = found.as_ref().is_some_and(|w| boundary(h, w) == part);
            e.require(ok, Verdict::Inconclusive, || {
                format!("grading {}: not a boundary of 3-wedges in the radius-{r} box", el(h, &g))
            });
            if let Some(w) = found {
                e.witness(|| format!("[elimination] {} = d({})", chain(h, &part), chain(h, &w)));
            }
        }
    }
    if !oracle {
        e.note("boundary box too large for elimination; explicit witnesses only");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symplectic_plane() {
        let h = AbelianGroup::surface(1, 0);
        let u = h.element(&[1, 0]).unwrap();
        let e = gk_cycle_check(&h, &u, &h.zero(), &Settings::new(1, 3)).unwrap();
        assert_eq!(e.verdict, Verdict::Certified, "{:?}", e);
        assert!(e.witness_count >= 6);
    }
}
