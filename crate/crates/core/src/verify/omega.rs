//! The 3-cocycle omega([u],[v],[z-u-v]) = <u,v> of an inner grading z, and
//! whether it is a coboundary.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{
    boundary_of_wedge, coboundary_at, enumerate_basis, evaluate, grading, CochainEval, Restrict, Wedge,
};
use crate::group::{AbelianGroup, GroupElement};
use crate::linalg::{q, Echelon, SparseVec, Q};
use crate::sample::random_element;
use crate::verify::rank::{estimate_triples, restricted_boundary};
use crate::verify::report::{CheckEntry, Verdict, VerifyError};
use crate::verify::settings::{el, wedge, Settings};

/// omega on sorted 3-wedges of grading z: the pairing of the first two
/// factors. Alternating because <a,b> = <b,c> = <c,a> when a+b+c is in ker mu.
pub struct Omega<'a> {
    h: &'a AbelianGroup,
    z: GroupElement,
}

pub fn omega_cocycle<'a>(h: &'a AbelianGroup, z: &GroupElement) -> Result<Omega<'a>, VerifyError> {
    if !h.in_kernel_mu(z) {
        return Err(VerifyError::NotInKernel(el(h, z)));
    }
    Ok(Omega { h, z: z.clone() })
}

impl CochainEval for Omega<'_> {
    fn degree(&self) -> usize {
        3
    }

    fn eval(&self, w: &Wedge) -> Option<Q> {
        if grading(self.h, w) != self.z {
            return Some(q(0));
        }
        let f = w.factors();
        Some(q(self.h.pairing(&f[0], &f[1])))
    }
}

/// A 2-cochain of grading z given by a function of the first factor of the
/// sorted wedge, on derived pairs; zero elsewhere.
pub struct PairCochain<'a, F: Fn(&GroupElement) -> Q> {
    h: &'a AbelianGroup,
    z: GroupElement,
    value: F,
}

impl<F: Fn(&GroupElement) -> Q> CochainEval for PairCochain<'_, F> {
    fn degree(&self) -> usize {
        2
    }

    fn eval(&self, w: &Wedge) -> Option<Q> {
        let f = w.factors();
        if grading(self.h, w) != self.z || !f.iter().all(|x| self.h.is_derived_element(x)) {
            return Some(q(0));
        }
        Some((self.value)(&f[0]))
    }
}

/// A rational Z-linear f with f(z) = 1: the coordinate dual to z in the basis
/// {z} + {e_i : i != p} of Q (x) H, p the first free coordinate where z is
/// nonzero.
pub fn dual_functional<'a>(h: &'a AbelianGroup, z: &GroupElement) -> Option<impl Fn(&GroupElement) -> Q + 'a> {
    let free = h.free_part(z);
    let p = free.iter().position(|&c| c != 0)?;
    let zp = free[p];
    Some(move |x: &GroupElement| Q::new(h.free_part(x)[p].into(), zp.into()))
}

/// Largest radius <= m whose triple count stays within `budget`.
fn equation_radius(h: &AbelianGroup, m: i64, budget: f64) -> i64 {
    let mut r = m;
    while r > 1 && estimate_triples(h, r) > budget {
        r -= 1;
    }
    r
}

fn derived_triples(h: &AbelianGroup, z: &GroupElement, r: i64) -> Vec<Wedge> {
    let mut ts = enumerate_basis(h, &h.box_support(r), 3, z, Restrict::DerivedOnly);
    ts.sort_by_key(|w| w.factors().iter().map(|x| h.radius(x)).max());
    ts
}

/// d omega = 0 on 4-wedges of grading z: every wedge of the box when few,
/// otherwise `samples` random ones.
fn cocycle_condition(h: &AbelianGroup, omega: &Omega, z: &GroupElement, s: &Settings, e: &mut CheckEntry) {
    let size = estimate_triples(h, s.m).sqrt() * 6f64.sqrt();
    let exhaustive = size.powi(3) / 24.0 <= 4.0 * s.rank_budget;
    let quads: Vec<Wedge> = if exhaustive {
        enumerate_basis(h, &h.box_support(s.m), 4, z, Restrict::Full)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        let mut out = Vec::new();
        for _ in 0..s.samples * 4 {
            let mut f: Vec<GroupElement> = (0..3).map(|_| random_element(&mut rng, h, s.m)).collect();
            let last = h.difference(z, &h.sum_all(f.iter()));
            f.push(last);
            if let Some((w, _)) = Wedge::from_unsorted(f) {
                out.push(w);
                if out.len() == s.samples {
                    break;
                }
            }
        }
        out
    };
    let bad = quads.iter().find(|w| coboundary_at(h, omega, w).0 != q(0));
    e.fact("d omega = 0 on 4-wedges", format!("{} {}", quads.len(), if exhaustive { "(all in box)" } else { "(sampled)" }));
    e.require(bad.is_none(), Verdict::Refuted, || format!("d omega != 0 on {}", wedge(h, bad.unwrap())));
}

/// Box infeasibility of d eta = omega on 2-cochains of Q[H]. Unknowns are the
/// values of eta on the 2-wedges that occur. Returns the certificate as
/// (triple, multiplier) pairs once the reduced system becomes inconsistent.
pub fn omega_obstruction(h: &AbelianGroup, z: &GroupElement, triples: &[Wedge]) -> Option<Vec<(Wedge, Q)>> {
    const AUG: usize = 1 << 40;
    let omega = Omega { h, z: z.clone() };
    let mut unknowns: HashMap<Wedge, usize> = HashMap::new();
    let mut ech = Echelon::new(true).with_deferred_pivots(AUG);
    let mut rows: Vec<&Wedge> = Vec::new();
    for t in triples {
        let d = boundary_of_wedge(h, t);
        let b = omega.eval(t).expect("omega is total");
        if d.is_zero() && b == q(0) {
            continue;
        }
        let mut row: SparseVec = d
            .terms()
            .iter()
            .map(|(w, c)| {
                let n = unknowns.len();
                (*unknowns.entry(w.clone()).or_insert(n), c.clone())
            })
            .collect();
        if b != q(0) {
            row.insert(AUG, b);
        }
        ech.insert(&row);
        rows.push(t);
        if let Some(y) = ech.pivot_provenance(AUG) {
            return Some(y.iter().map(|(i, c)| (rows[*i].clone(), c.clone())).collect());
        }
    }
    None
}

/// Re-checks a certificate: sum y_t d(t) = 0 as a 2-chain, sum y_t omega(t) != 0.
pub fn certificate_holds(h: &AbelianGroup, z: &GroupElement, cert: &[(Wedge, Q)]) -> bool {
    let omega = Omega { h, z: z.clone() };
    let mut total = crate::complex::WedgeChain::zero(2);
    let mut rhs = q(0);
    for (t, y) in cert {
        total.add_scaled(&boundary_of_wedge(h, t), y);
        rhs += omega.eval(t).expect("omega is total") * y;
    }
    total.is_zero() && rhs != q(0)
}

pub fn omega_check(h: &AbelianGroup, z: &GroupElement, s: &Settings) -> Result<CheckEntry, VerifyError> {
    let omega = omega_cocycle(h, z)?;
    let torsion = h.is_torsion(z);
    let statement = if torsion {
        "omega is a cocycle and [omega] != 0 in H^3(Q[H])_(z) for torsion z"
    } else {
        "omega is a cocycle and [omega] = 0 in H^3(Q[H^(1)])_(z) for non-torsion z"
    };
    let r = equation_radius(h, s.m, s.rank_budget);
    let mut e = CheckEntry::new("omega", statement).param("z", el(h, z)).param("box", s.m).param("equation_box", r);
    e.fact("z torsion", torsion);
    if h.form_is_zero() {
        e.note("out of hypothesis: the form is zero and omega vanishes");
        return Ok(e);
    }
    cocycle_condition(h, &omega, z, s, &mut e);
    let triples = derived_triples(h, z, r);
    e.fact("triples", triples.len());
    if torsion {
        match omega_obstruction(h, z, &triples) {
            Some(cert) => {
                let ok = certificate_holds(h, z, &cert);
                e.require(ok, Verdict::Refuted, || "infeasibility certificate failed to re-verify".into());
                e.fact("certificate size", cert.len());
                e.witness(|| {
                    let terms: Vec<String> = cert.iter().take(6).map(|(t, y)| format!("{y}*{}", wedge(h, t))).collect();
                    format!("y = {}{} with y.d = 0, y.omega != 0", terms.join(" + "), if cert.len() > 6 { " + ..." } else { "" })
                });
            }
            None => {
                e.require(false, Verdict::Inconclusive, || "d eta = omega is solvable on this box".into());
            }
        }
        return Ok(e);
    }
    let f = dual_functional(h, z).expect("non-torsion z has a nonzero free coordinate");
    e.require(f(z) == q(1), Verdict::Refuted, || "dual functional has f(z) != 1".into());
    let fails = |eta: &dyn CochainEval| {
        triples
            .iter()
            .filter(|t| evaluate(eta, &restricted_boundary(h, t, Restrict::DerivedOnly)).0 != omega.eval(t).expect("total"))
            .count()
    };
    let verbatim = PairCochain { h, z: z.clone(), value: |u: &GroupElement| f(u) + q(1) };
    let verbatim_fails = fails(&verbatim);
    e.fact("eta = f(u)+1: triples with d eta != omega", verbatim_fails);
    if verbatim_fails > 0 {
        e.note("eta(u,z-u) = f(u)+1 is not alternating (it gives eta(z-u,u) = 2-f(u)); using the alternating solution eta(u,z-u) = 1-2f(u)");
    }
    let eta = PairCochain { h, z: z.clone(), value: |u: &GroupElement| q(1) - q(2) * f(u) };
    // alternation on every pair that occurs
    let alternating = triples.iter().flat_map(|t| t.factors().to_vec()).all(|u| {
        let v = h.difference(z, &u);
        q(1) - q(2) * f(&u) == -(q(1) - q(2) * f(&v))
    });
    e.require(alternating, Verdict::Refuted, || "1-2f is not alternating".into());
    let n = fails(&eta);
    e.fact("eta = 1-2f(u): triples with d eta != omega", n);
    e.require(n == 0, Verdict::Refuted, || format!("d eta != omega on {n} triples"));
    e.witness_count = triples.len();
    if let Some(t) = triples.first() {
        e.witness(|| format!("d eta({}) = {} = omega", wedge(h, t), omega.eval(t).unwrap()));
    }
    Ok(e)
}
