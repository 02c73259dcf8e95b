//! Sampled checks of the Lie algebra and chain complex axioms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{bracket_unchecked, in_gk, k_map, AlgebraVector};
use crate::complex::{
    boundary, coboundary, evaluate, grading, is_derived_chain, project_derived, Cochain, Wedge, WedgeChain,
};
use crate::group::{AbelianGroup, GroupElement};
use crate::linalg::{q, q_frac, Q};
use crate::sample::random_element;
use crate::verify::report::{CheckEntry, Verdict};
use crate::verify::settings::{chain, el};

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    let n = rng.gen_range(-4..=4);
    let d = rng.gen_range(1..=3);
    q_frac(if n == 0 { 1 } else { n }, d)
}

fn random_vector(rng: &mut ChaCha8Rng, h: &AbelianGroup, terms: usize, radius: i64) -> AlgebraVector {
    AlgebraVector::from_terms((0..terms).map(|_| (random_element(rng, h, radius), random_q(rng))))
}

/// A random element of g_K: sum of c([k x] - k[x]) and c([x+y] - [x] - [y]).
fn random_gk(rng: &mut ChaCha8Rng, h: &AbelianGroup, radius: i64) -> AlgebraVector {
    let x = random_element(rng, h, radius);
    let y = random_element(rng, h, radius);
    let k = rng.gen_range(-3..=3);
    let a = AlgebraVector::from_terms([(h.scale(k, &x), q(1)), (x.clone(), q(-k))]);
    let b = AlgebraVector::from_terms([(h.sum(&x, &y), q(1)), (x, q(-1)), (y, q(-1))]);
    &a.scaled(&random_q(rng)) + &b.scaled(&random_q(rng))
}

pub fn bracket_axioms_check(h: &AbelianGroup, samples: usize, seed: u64) -> CheckEntry {
    let mut e = CheckEntry::new("bracket-axioms", "the bracket [[x],[y]] = <x,y>[x+y] is skew and satisfies the Jacobi identity; K kills brackets; g_K is a subalgebra; Q[ker mu] is central")
        .param("samples", samples)
        .param("seed", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let br = |a: &AlgebraVector, b: &AlgebraVector| bracket_unchecked(h, a, b);
    let mut fails = [0usize; 4];
    for _ in 0..samples {
        let a = random_vector(&mut rng, h, 1, 3);
        let b = random_vector(&mut rng, h, 1, 3);
        let c = random_vector(&mut rng, h, 1, 3);
        if br(&a, &b) != -&br(&b, &a) {
            fails[0] += 1;
        }
        let jac = &(&br(&a, &br(&b, &c)) + &br(&b, &br(&c, &a))) + &br(&c, &br(&a, &b));
        if !jac.is_zero() {
            fails[1] += 1;
        }
        // g_K is a subalgebra, but not an ideal and K is no Lie map
        let a2 = random_vector(&mut rng, h, 3, 2);
        if !in_gk(h, &a2) && !k_map(h, &br(&a2, &b)).is_zero() {
            fails[2] += 1;
        }
        let (x, y) = (random_gk(&mut rng, h, 2), random_gk(&mut rng, h, 2));
        if !(in_gk(h, &x) && in_gk(h, &y) && in_gk(h, &br(&x, &y))) {
            fails[3] += 1;
        }
    }
    let names = ["skew", "jacobi", "g_K closed"];
    for (n, f) in names.iter().zip([fails[0], fails[1], fails[3]]) {
        e.fact(n, format!("{} / {samples}", samples - f));
        e.require(f == 0, Verdict::Refuted, || format!("{n} fails on {f} samples"));
    }
    e.fact("K o bracket != 0", format!("{} / {samples} samples outside g_K", fails[2]));
    if let Some((x, y)) = k_bracket_counterexample(h) {
        let kb = k_map(h, &br(&AlgebraVector::basis(x.clone()), &AlgebraVector::basis(y.clone())));
        e.note(format!(
            "K does not kill brackets in general: K([[{}],[{}]]) = {:?}",
            el(h, &x),
            el(h, &y),
            kb.to_strings()
        ));
    }
    // center
    let gens = h.generators().to_vec();
    let kernel = h.kernel_mu_generators();
    let mut central = 0;
    for u in &kernel {
        for _ in 0..samples.min(200) {
            let b = random_vector(&mut rng, h, 2, 3);
            central += 1;
            let z = br(&AlgebraVector::basis(u.clone()), &b);
            e.require(z.is_zero(), Verdict::Refuted, || format!("[{}] is not central", el(h, u)));
        }
    }
    let mut noncentral = 0;
    for _ in 0..samples.min(200) {
        let u = random_element(&mut rng, h, 3);
        if h.is_derived_element(&u) {
            noncentral += 1;
            let hit = gens.iter().any(|g| !br(&AlgebraVector::basis(u.clone()), &AlgebraVector::basis(g.clone())).is_zero());
            e.require(hit, Verdict::Refuted, || format!("[{}] commutes with every generator", el(h, &u)));
        }
    }
    e.fact("center", format!("{central} kernel brackets vanish, {noncentral} derived elements act nontrivially"));
    e.witness_count = samples;
    e
}

/// Generators x, y with K([[x],[y]]) = <x,y> (x+y) != 0.
pub fn k_bracket_counterexample(h: &AbelianGroup) -> Option<(GroupElement, GroupElement)> {
    let gens = h.generators();
    gens.iter().flat_map(|x| gens.iter().map(move |y| (x, y))).find_map(|(x, y)| {
        let b = bracket_unchecked(h, &AlgebraVector::basis(x.clone()), &AlgebraVector::basis(y.clone()));
        (!k_map(h, &b).is_zero()).then(|| (x.clone(), y.clone()))
    })
}

fn random_wedge(rng: &mut ChaCha8Rng, h: &AbelianGroup, p: usize, radius: i64, kernel: &[GroupElement]) -> Option<WedgeChain> {
    let factors: Vec<GroupElement> = if kernel.is_empty() {
        (0..p).map(|_| random_element(rng, h, radius)).collect()
    } else {
        (0..p)
            .map(|_| {
                let mut x = h.zero();
                for k in kernel {
                    x = h.sum(&x, &h.scale(rng.gen_range(-2..=2), k));
                }
                x
            })
            .collect()
    };
    Wedge::from_unsorted(factors).map(|(w, _)| WedgeChain::from_wedge(w, q(1)))
}

pub fn complex_axioms_check(h: &AbelianGroup, samples: usize, seed: u64) -> CheckEntry {
    let mut e = CheckEntry::new("complex-axioms", "d o d = 0, d preserves the grading, d vanishes on Q[ker mu], (d eta)(c) = eta(dc), and the derived projection splits the inclusion")
        .param("samples", samples)
        .param("seed", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tested = [0usize; 5];
    for _ in 0..samples {
        let p = rng.gen_range(2..=5);
        let Some(c) = random_wedge(&mut rng, h, p, 3, &[]) else { continue };
        tested[0] += 1;
        let d = boundary(h, &c);
        let dd = boundary(h, &d);
        e.require(dd.is_zero(), Verdict::Refuted, || format!("d d({}) = {}", chain(h, &c), chain(h, &dd)));
        let g = c.grading(h).expect("homogeneous");
        let ok = d.terms().keys().all(|w| grading(h, w) == g);
        e.require(ok, Verdict::Refuted, || format!("d({}) leaves its grading", chain(h, &c)));
        // duality with a cochain supported on the boundary terms
        if !d.is_zero() {
            tested[1] += 1;
            let mut eta = Cochain::new(p - 1, d.terms().keys().cloned());
            for w in d.terms().keys() {
                eta.set(w.clone(), random_q(&mut rng));
            }
            let lhs = evaluate(&eta, &d).0;
            let deta = coboundary(h, &eta, c.terms().keys().cloned());
            let (rhs, edges) = evaluate(&deta.cochain, &c);
            e.require(lhs == rhs && edges == 0 && deta.truncation_edges == 0, Verdict::Refuted, || {
                format!("duality fails on {}", chain(h, &c))
            });
        }
        let pc = project_derived(h, &c);
        if is_derived_chain(h, &c) {
            tested[2] += 1;
            e.require(pc == c, Verdict::Refuted, || "projection moves a derived chain".into());
        }
    }
    let kernel = h.kernel_mu_generators();
    if !kernel.is_empty() {
        for _ in 0..samples.min(300) {
            let p = rng.gen_range(2..=4);
            if let Some(c) = random_wedge(&mut rng, h, p, 1, &kernel) {
                tested[3] += 1;
                e.require(boundary(h, &c).is_zero(), Verdict::Refuted, || format!("d({}) != 0 on ker mu", chain(h, &c)));
            }
        }
    }
    e.fact("wedges (d o d, grading)", tested[0]);
    e.fact("duality instances", tested[1]);
    e.fact("derived chains projected", tested[2]);
    e.fact("kernel-only chains", tested[3]);
    e.witness_count = tested.iter().sum();
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axioms_on_surfaces() {
        for (g, r) in [(1, 0), (1, 2), (2, 1)] {
            let h = AbelianGroup::surface(g, r);
            let e = bracket_axioms_check(&h, 200, 3);
            assert_eq!(e.verdict, Verdict::Certified, "{:?}", e.notes);
            let e = complex_axioms_check(&h, 200, 3);
            assert_eq!(e.verdict, Verdict::Certified, "{e:?}");
        }
    }
}
