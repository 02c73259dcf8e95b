//! Outer gradings z in H^(1): every 2-cycle bounds, witnessed by d_3 Phi_2.

use num_traits::Zero;
use rayon::prelude::*;

use crate::complex::{boundary, enumerate_basis, Restrict, Wedge, WedgeChain};
use crate::group::{AbelianGroup, GroupElement};
use crate::linalg::SparseRationalMatrix;
use crate::verify::homotopy::{calibrate, contracting_elements, contracting_homotopy, Calibration, Homotopy};
use crate::verify::report::{CheckEntry, Verdict, VerifyError};
use crate::verify::settings::{chain, el, Settings};

/// Full-support 2-wedges of the grading z on the box.
fn c2(h: &AbelianGroup, z: &GroupElement, m: i64) -> Vec<Wedge> {
    enumerate_basis(h, &h.box_support(m), 2, z, Restrict::Full)
}

/// A basis of Z_2 on the wedges `ws` (kernel of d_2 into the line of [z]).
pub fn cycle_basis(h: &AbelianGroup, ws: &[Wedge]) -> Vec<WedgeChain> {
    let cols = ws
        .iter()
        .map(|w| {
            let d = boundary(h, &WedgeChain::from_wedge(w.clone(), num_traits::One::one()));
            d.terms().values().next().map(|c| (0usize, c.clone())).into_iter().collect()
        })
        .collect();
    SparseRationalMatrix::from_columns(1, cols)
        .kernel_basis()
        .into_iter()
        .map(|k| {
            let mut c = WedgeChain::zero(2);
            for (w, x) in ws.iter().zip(k) {
                if !x.is_zero() {
                    c.add_term(w.clone(), x);
                }
            }
            c
        })
        .collect()
}

/// Picks y: the first element of the unit box (canonical order) with
/// <y,z> != 0 whose homotopy keeps witnesses inside the boundary box; the
/// first candidate at all if none does.
pub fn choose_y(h: &AbelianGroup, z: &GroupElement, s: &Settings) -> Result<GroupElement, VerifyError> {
    let cands = contracting_elements(h, z, 1);
    let first = cands.first().cloned().ok_or_else(|| VerifyError::NoContractingElement(el(h, z)))?;
    let fits = |y: &GroupElement| {
        let y2 = h.scale(2, y);
        let y3 = h.difference(z, &h.scale(3, y));
        h.radius(&y2) <= s.m_prime && h.radius(&y3) <= s.m_prime && s.m + 1 <= s.m_prime
    };
    Ok(cands.into_iter().find(|y| fits(y)).unwrap_or(first))
}

pub struct OuterBound {
    pub cycles: usize,
    pub bounded: usize,
    pub failures: usize,
    pub max_radius: i64,
    pub y: GroupElement,
    pub calibration: Calibration,
    pub samples: Vec<String>,
}

/// Bounds every basis cycle of the grading z by d_3 Phi_2.
pub fn outer_cycles_bound(h: &AbelianGroup, z: &GroupElement, s: &Settings) -> Result<OuterBound, VerifyError> {
    if !h.is_derived_element(z) {
        return Err(VerifyError::NotDerived(el(h, z)));
    }
    let y = choose_y(h, z, s)?;
    let base = contracting_homotopy(h, z, &y).map_err(|e| VerifyError::Parameter(e.to_string()))?;
    let ws = c2(h, z, s.m);
    let (hom, calibration) = calibrate(h, &base, &ws);
    let cycles = cycle_basis(h, &ws);
    let results: Vec<(bool, i64)> = cycles
        .par_iter()
        .map(|c| {
            let w = hom.cycle_witness(h, c);
            (boundary(h, &w) == *c, w.radius(h))
        })
        .collect();
    let failures = results.iter().filter(|r| !r.0).count();
    let max_radius = results.iter().map(|r| r.1).max().unwrap_or(0);
    let bounded = if max_radius <= s.m_prime { cycles.len() - failures } else { 0 };
    let samples = cycles
        .iter()
        .take(2)
        .map(|c| format!("{} = d({})", chain(h, c), chain(h, &hom.cycle_witness(h, c))))
        .collect();
    Ok(OuterBound { cycles: cycles.len(), bounded, failures, max_radius, y, calibration, samples })
}

fn note_calibration(e: &mut CheckEntry, cal: &Calibration) {
    if !cal.verbatim_holds {
        e.note(format!(
            "displayed Phi_2 coefficients fail on {} wedges; corrected to alpha={}, beta={}, gamma={}",
            cal.verbatim_failures, cal.coefficients[0], cal.coefficients[1], cal.coefficients[2]
        ));
    }
}

/// H_2(Q[H])_(z) = 0 at truncation, each cycle bounded by d_3 Phi_2(c).
pub fn outer_h2_certify(h: &AbelianGroup, z: &GroupElement, s: &Settings) -> Result<CheckEntry, VerifyError> {
    let o = outer_cycles_bound(h, z, s)?;
    let mut e = CheckEntry::new("outer-h2", "H_2(Q[H])_(z) = 0 for z in H^(1)")
        .param("z", el(h, z))
        .param("box", s.m)
        .param("boundary_box", s.m_prime)
        .param("y", el(h, &o.y));
    e.fact("dim Z_2", o.cycles);
    e.fact("bounded cycles", o.bounded);
    e.fact("max witness radius", o.max_radius);
    note_calibration(&mut e, &o.calibration);
    e.require(o.failures == 0, Verdict::Refuted, || format!("{} witnesses failed", o.failures));
    e.require(o.bounded == o.cycles, Verdict::Inconclusive, || "witnesses leave the boundary box".into());
    if o.cycles == 0 {
        e.note("no 2-wedges in this grading: vacuously certified");
    }
    e.witness_count = o.bounded;
    e.witnesses = o.samples;
    Ok(e)
}

/// Phi_1 d_2 + d_3 Phi_2 = id on every basis wedge of the grading, for the
/// first `n_y` admissible choices of y.
pub fn homotopy_identity_check(
    h: &AbelianGroup,
    z: &GroupElement,
    m: i64,
    n_y: usize,
) -> Result<(CheckEntry, Vec<Homotopy>), VerifyError> {
    if !h.is_derived_element(z) {
        return Err(VerifyError::NotDerived(el(h, z)));
    }
    let ys: Vec<GroupElement> = contracting_elements(h, z, 1).into_iter().take(n_y).collect();
    if ys.is_empty() {
        return Err(VerifyError::NoContractingElement(el(h, z)));
    }
    let ws = c2(h, z, m);
    let mut e = CheckEntry::new("homotopy-identity", "Phi_1 d_2 + d_3 Phi_2 = id on C_2(Q[H])_(z)")
        .param("z", el(h, z))
        .param("box", m)
        .param("y", ys.iter().map(|y| el(h, y)).collect::<Vec<_>>().join(" "));
    e.fact("wedges", ws.len());
    let mut used = Vec::new();
    for y in &ys {
        let base = contracting_homotopy(h, z, y).map_err(|err| VerifyError::Parameter(err.to_string()))?;
        let (hom, cal) = calibrate(h, &base, &ws);
        note_calibration(&mut e, &cal);
        e.require(cal.holds, Verdict::Refuted, || format!("identity fails for y={}", el(h, y)));
        e.witness_count += ws.len();
        used.push(hom);
    }
    e.fact("choices of y", ys.len());
    if ys.len() < n_y {
        e.note(format!("only {} choice(s) of y in the unit box", ys.len()));
    }
    Ok((e, used))
}
