//! Surface groups: the classes [x]^[z-x] of the generators span the inner
//! part, and the decomposition of [Cj]^[z-Cj] through Ag.

use crate::complex::{boundary, is_derived_chain, WedgeChain};
use crate::group::{AbelianGroup, GroupElement};
use crate::linalg::{q, rank_of_vectors};
use crate::verify::ideal::ideal_generator;
use crate::verify::quotient::{f_map, ExteriorVector, QuotientTensorSpace};
use crate::verify::relations::{pair_chain, relation_witness};
use crate::verify::report::{CheckEntry, Verdict, VerifyError};
use crate::verify::settings::{chain, el};

fn named(h: &AbelianGroup, name: &str) -> Result<GroupElement, VerifyError> {
    h.generator(name).cloned().ok_or_else(|| VerifyError::Parameter(format!("no generator {name}")))
}

/// Parts of the Cj identity for one j:
/// lhs = [Cj]^[z-Cj], rhs = [Cj-Ag]^[z-Cj+Ag] + [Ag]^[z-Ag],
/// lifted = [Cj+Bg]^[z-Cj-Bg] - [Bg]^[z-Bg] (derived, same f-image as lhs),
/// witness with d(witness) = lifted - rhs.
pub struct CjIdentity {
    pub lhs: WedgeChain,
    pub rhs: WedgeChain,
    pub lifted: WedgeChain,
    pub witness: Option<WedgeChain>,
}

pub fn cj_identity(h: &AbelianGroup, g: usize, j: usize, z: &GroupElement) -> Result<CjIdentity, VerifyError> {
    let a = named(h, &format!("A{g}"))?;
    let b = named(h, &format!("B{g}"))?;
    let c = named(h, &format!("C{j}"))?;
    let lhs = pair_chain(h, z, &c);
    let ca = h.difference(&c, &a);
    let mut rhs = pair_chain(h, z, &ca);
    rhs.add_scaled(&pair_chain(h, z, &a), &q(1));
    let mut lifted = pair_chain(h, z, &h.sum(&c, &b));
    lifted.add_scaled(&pair_chain(h, z, &b), &q(-1));
    // lifted - rhs = R(Cj-Ag, Ag+Bg) + R(Ag, Bg), both with nonzero pairing
    let ab = h.sum(&a, &b);
    let witness = relation_witness(h, z, &ca, &ab, &[])
        .zip(relation_witness(h, z, &a, &b, &[]))
        .map(|(x, y)| x.plus(&y));
    Ok(CjIdentity { lhs, rhs, lifted, witness })
}

pub fn surface_generator_check(g: usize, r: usize, z_coords: Option<&[i64]>) -> Result<CheckEntry, VerifyError> {
    if g == 0 {
        return Err(VerifyError::Parameter("genus must be at least 1".into()));
    }
    let h = AbelianGroup::surface(g, r);
    let z = match z_coords {
        Some(c) => h.element(c).map_err(|e| VerifyError::Parameter(e.to_string()))?,
        None => h.zero(),
    };
    surface_generator_check_in(&h, g, r, &z)
}

pub fn surface_generator_check_in(h: &AbelianGroup, g: usize, r: usize, z: &GroupElement) -> Result<CheckEntry, VerifyError> {
    if !h.in_kernel_mu(z) {
        return Err(VerifyError::NotInKernel(el(h, z)));
    }
    let mut e = CheckEntry::new(
        "surface-generators",
        "the classes [x]^[z-x], x in {A_i, B_i, C_j}, generate the inner part; [Cj]^[z-Cj] = [Cj-Ag]^[z-Cj+Ag] + [Ag]^[z-Ag]",
    )
    .param("genus", g)
    .param("boundary_components", r)
    .param("z", el(h, z));
    let space = QuotientTensorSpace::new(h, z);
    let names = h.spec().names().to_vec();
    let images: Vec<_> = names
        .iter()
        .map(|n| {
            let x = h.generator(n).expect("generator");
            space.project(h, x)
        })
        .collect();
    let rank = rank_of_vectors(&images);
    let oracle = h.quotient_free_rank(z);
    e.fact("generator classes", names.len());
    e.fact("rank of f-images", rank);
    e.fact("rank Q(x)(H/Zz) [SNF]", oracle);
    e.require(rank == oracle, Verdict::Refuted, || format!("f-images span {rank} of {oracle}"));
    for n in &names {
        let x = h.generator(n).expect("generator");
        let c = pair_chain(h, z, x);
        let f = f_map(h, &space, &c);
        let ok = f == ExteriorVector::wedge_of(&[space.project(h, x)]);
        e.require(ok, Verdict::Refuted, || format!("f([{n}]^[z-{n}]) is not 1 (x) {n}"));
        e.require(boundary(h, &c).is_zero(), Verdict::Refuted, || format!("[{n}]^[z-{n}] is not a cycle"));
    }
    for j in 1..=r {
        let id = cj_identity(h, g, j, z)?;
        let diff = id.lhs.minus(&id.rhs);
        // (a) the difference is one generator of I-hat
        let a = h.generator(&format!("A{g}")).expect("generator");
        let c = h.generator(&format!("C{j}")).expect("generator");
        let gen = ideal_generator(h, &h.difference(c, a), a, &h.difference(z, c));
        e.require(diff == gen, Verdict::Refuted, || format!("C{j}: difference is not the expected generator"));
        // (b) equal f-images
        let ok = f_map(h, &space, &id.lhs) == f_map(h, &space, &id.rhs)
            && f_map(h, &space, &id.lifted) == f_map(h, &space, &id.lhs);
        e.require(ok, Verdict::Refuted, || format!("C{j}: f-images differ"));
        // (c) derived representative minus right side is a boundary
        let target = id.lifted.minus(&id.rhs);
        let ok = is_derived_chain(h, &target)
            && id.witness.as_ref().is_some_and(|w| is_derived_chain(h, w) && boundary(h, w) == target);
        e.require(ok, Verdict::Refuted, || format!("C{j}: boundary witness failed"));
        if let Some(w) = id.witness.as_ref().filter(|_| ok) {
            e.witness(|| format!("C{j}: {} = d({})", chain(h, &target), chain(h, w)));
        }
    }
    if r > 0 {
        e.note("[Cj]^[z-Cj] has a ker mu factor; its class in the derived algebra is represented by [Cj+Bg]^[z-Cj-Bg] - [Bg]^[z-Bg]");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_two_three_boundaries() {
        let e = surface_generator_check(2, 3, None).unwrap();
        assert_eq!(e.verdict, Verdict::Certified, "{e:?}");
        assert_eq!(e.facts["rank of f-images"], "6");
        assert_eq!(e.witness_count, 3);
    }

    #[test]
    fn nonzero_inner_grading() {
        let h = AbelianGroup::surface(1, 2);
        let z = h.generator("C1").unwrap().clone();
        let e = surface_generator_check_in(&h, 1, 2, &z).unwrap();
        assert_eq!(e.verdict, Verdict::Certified, "{e:?}");
        assert_eq!(e.facts["rank of f-images"], "2");
    }
}
