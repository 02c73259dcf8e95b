//! The contracting homotopy (Phi_1, Phi_2) on an outer grading z, for a
//! chosen y with <y,z> != 0.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::complex::{boundary, boundary_of_wedge, Wedge, WedgeChain};
use crate::group::{AbelianGroup, GroupElement};
use crate::linalg::{q, q_frac, Solution, SparseRationalMatrix, SparseVec, Q};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomotopyError {
    #[error("<y,z> = 0, so y cannot contract the grading z")]
    DegeneratePairing,
    #[error("no y with <y,z> != 0 in the search box")]
    NoContractingElement,
}

/// Coefficients of the three term shapes of Phi_2:
/// alpha/<y,z> ([y]^[u-y]^[v] + [y]^[u]^[v-y])
/// + beta/<y,z> [2y]^[u-y]^[v-y]
/// + gamma <u-y,v-y>/<y,z>^2 [y]^[2y]^[z-3y].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiCoefficients {
    pub alpha: Q,
    pub beta: Q,
    pub gamma: Q,
}

impl PhiCoefficients {
    pub fn verbatim() -> Self {
        PhiCoefficients { alpha: q(-1), beta: q_frac(1, 2), gamma: q_frac(1, 2) }
    }

    pub fn to_strings(&self) -> [String; 3] {
        [self.alpha.to_string(), self.beta.to_string(), self.gamma.to_string()]
    }
}

#[derive(Clone, Debug)]
pub struct Homotopy {
    z: GroupElement,
    y: GroupElement,
    yz: i64,
    coeffs: PhiCoefficients,
}

pub fn contracting_homotopy(h: &AbelianGroup, z: &GroupElement, y: &GroupElement) -> Result<Homotopy, HomotopyError> {
    let yz = h.pairing(y, z);
    if yz == 0 {
        return Err(HomotopyError::DegeneratePairing);
    }
    Ok(Homotopy { z: z.clone(), y: y.clone(), yz, coeffs: PhiCoefficients::verbatim() })
}

/// Elements y of the box with <y,z> != 0, in canonical order.
pub fn contracting_elements(h: &AbelianGroup, z: &GroupElement, radius: i64) -> Vec<GroupElement> {
    h.box_support(radius).into_iter().filter(|y| h.pairing(y, z) != 0).collect()
}

impl Homotopy {
    pub fn y(&self) -> &GroupElement {
        &self.y
    }

    pub fn z(&self) -> &GroupElement {
        &self.z
    }

    pub fn coefficients(&self) -> &PhiCoefficients {
        &self.coeffs
    }

    pub fn with_coefficients(mut self, coeffs: PhiCoefficients) -> Self {
        self.coeffs = coeffs;
        self
    }

    /// Phi_1([z]) = -1/<y,z> [y]^[z-y].
    pub fn phi1(&self, h: &AbelianGroup, c: &WedgeChain) -> WedgeChain {
        assert_eq!(c.degree(), 1);
        let mut out = WedgeChain::zero(2);
        for (w, v) in c.terms() {
            assert_eq!(&w.factors()[0], &self.z, "Phi_1 lives on the grading z");
            let k = v * q_frac(-1, self.yz);
            out.add_monomial(vec![self.y.clone(), h.difference(&self.z, &self.y)], k);
        }
        out
    }

    /// The three shape chains of Phi_2([u]^[v]) before coefficients.
    fn shapes(&self, h: &AbelianGroup, u: &GroupElement, v: &GroupElement) -> [WedgeChain; 3] {
        let y = &self.y;
        let y2 = h.scale(2, y);
        let uy = h.difference(u, y);
        let vy = h.difference(v, y);
        let mut t1 = WedgeChain::monomial(vec![y.clone(), uy.clone(), v.clone()], q(1));
        t1.add_monomial(vec![y.clone(), u.clone(), vy.clone()], q(1));
        let t2 = WedgeChain::monomial(vec![y2.clone(), uy.clone(), vy.clone()], q(1));
        let pair = h.pairing(&uy, &vy);
        let z3y = h.difference(&self.z, &h.scale(3, y));
        let t3 = WedgeChain::monomial(vec![y.clone(), y2, z3y], q(pair));
        [t1, t2, t3]
    }

    fn shape_scales(&self) -> [Q; 3] {
        let yz = q(self.yz);
        [&self.coeffs.alpha / &yz, &self.coeffs.beta / &yz, &self.coeffs.gamma / (&yz * &yz)]
    }

    pub fn phi2_wedge(&self, h: &AbelianGroup, w: &Wedge) -> WedgeChain {
        let [u, v] = [&w.factors()[0], &w.factors()[1]];
        let shapes = self.shapes(h, u, v);
        let scales = self.shape_scales();
        let mut out = WedgeChain::zero(3);
        for (s, k) in shapes.iter().zip(scales.iter()) {
            out.add_scaled(s, k);
        }
        out
    }

    pub fn phi2(&self, h: &AbelianGroup, c: &WedgeChain) -> WedgeChain {
        assert_eq!(c.degree(), 2);
        let mut out = WedgeChain::zero(3);
        for (w, v) in c.terms() {
            out.add_scaled(&self.phi2_wedge(h, w), v);
        }
        out
    }

    /// (Phi_1 d_2 + d_3 Phi_2)(w) - w; zero when the identity holds.
    pub fn defect(&self, h: &AbelianGroup, w: &Wedge) -> WedgeChain {
        let c = WedgeChain::from_wedge(w.clone(), Q::one());
        let mut out = self.phi1(h, &boundary(h, &c));
        out.add_scaled(&boundary(h, &self.phi2_wedge(h, w)), &Q::one());
        out.add_scaled(&c, &q(-1));
        out
    }

    /// For a cycle c: Phi_2(c), with d_3 Phi_2(c) = c when the identity holds.
    pub fn cycle_witness(&self, h: &AbelianGroup, c: &WedgeChain) -> WedgeChain {
        self.phi2(h, c)
    }
}

/// Outcome of checking the homotopy identity on a list of wedges, fitting
/// the three shape coefficients when the displayed ones fail.
#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub verbatim_holds: bool,
    /// Wedges (as debug strings) on which the displayed coefficients fail.
    pub verbatim_failures: usize,
    /// Coefficients in force after calibration, as strings alpha, beta, gamma.
    pub coefficients: [String; 3],
    pub corrected: bool,
    /// Whether the identity holds on every wedge with the final coefficients.
    pub holds: bool,
}

/// Checks the identity on `wedges`; on failure, solves for (alpha, beta,
/// gamma) making the identity hold on all of them and re-checks.
pub fn calibrate(h: &AbelianGroup, base: &Homotopy, wedges: &[Wedge]) -> (Homotopy, Calibration) {
    let failures = wedges.iter().filter(|w| !base.defect(h, w).is_zero()).count();
    if failures == 0 {
        let cal = Calibration {
            verbatim_holds: true,
            verbatim_failures: 0,
            coefficients: base.coeffs.to_strings(),
            corrected: false,
            holds: true,
        };
        return (base.clone(), cal);
    }
    // Phi_1 d w + sum_k x_k d(shape_k(w)) * scale_k = w, linear in x.
    let mut rows: std::collections::BTreeMap<(usize, Wedge), usize> = Default::default();
    let mut cols: Vec<SparseVec> = vec![SparseVec::new(); 3];
    let mut rhs: Vec<(usize, Q)> = Vec::new();
    let yz = q(base.yz);
    let unit_scales = [Q::one() / &yz, Q::one() / &yz, Q::one() / (&yz * &yz)];
    let row_of = |key: (usize, Wedge), rows: &mut std::collections::BTreeMap<(usize, Wedge), usize>| {
        let n = rows.len();
        *rows.entry(key).or_insert(n)
    };
    for (i, w) in wedges.iter().enumerate() {
        let c = WedgeChain::from_wedge(w.clone(), Q::one());
        let mut target = c.clone();
        target.add_scaled(&base.phi1(h, &boundary(h, &c)), &q(-1));
        for (t, v) in target.terms() {
            let r = row_of((i, t.clone()), &mut rows);
            rhs.push((r, v.clone()));
        }
        let shapes = base.shapes(h, &w.factors()[0], &w.factors()[1]);
        for (k, s) in shapes.iter().enumerate() {
            let mut ds = WedgeChain::zero(2);
            for (t3, v) in s.terms() {
                ds.add_scaled(&boundary_of_wedge(h, t3), &(v * &unit_scales[k]));
            }
            for (t, v) in ds.terms() {
                let r = row_of((i, t.clone()), &mut rows);
                cols[k].insert(r, v.clone());
            }
        }
    }
    let n_rows = rows.len();
    let mut b = vec![Q::zero(); n_rows];
    for (r, v) in rhs {
        b[r] += v;
    }
    let m = SparseRationalMatrix::from_columns(n_rows, cols);
    let fitted = match m.solve_affine(&b) {
        Solution::Feasible(x) => Some(PhiCoefficients { alpha: x[0].clone(), beta: x[1].clone(), gamma: x[2].clone() }),
        Solution::Infeasible(_) => None,
    };
    match fitted {
        Some(coeffs) => {
            let fixed = base.clone().with_coefficients(coeffs);
            let holds = wedges.iter().all(|w| fixed.defect(h, w).is_zero());
            let cal = Calibration {
                verbatim_holds: false,
                verbatim_failures: failures,
                coefficients: fixed.coeffs.to_strings(),
                corrected: true,
                holds,
            };
            (fixed, cal)
        }
        None => {
            let cal = Calibration {
                verbatim_holds: false,
                verbatim_failures: failures,
                coefficients: base.coeffs.to_strings(),
                corrected: false,
                holds: false,
            };
            (base.clone(), cal)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{enumerate_basis, Restrict};

    #[test]
    fn phi1_formula() {
        let h = AbelianGroup::surface(1, 0);
        let z = h.element(&[1, 0]).unwrap();
        let y = h.element(&[0, 1]).unwrap();
        let hom = contracting_homotopy(&h, &z, &y).unwrap();
        let got = hom.phi1(&h, &WedgeChain::monomial(vec![z.clone()], q(1)));
        // <y,z> = -1
        let expected = WedgeChain::monomial(vec![y.clone(), h.difference(&z, &y)], q(1));
        assert_eq!(got, expected);
        assert_eq!(contracting_homotopy(&h, &z, &z).unwrap_err(), HomotopyError::DegeneratePairing);
    }

    #[test]
    fn identity_on_symplectic_plane() {
        let h = AbelianGroup::surface(1, 0);
        let sup = h.box_support(2);
        for z in sup.iter().filter(|z| h.is_derived_element(z)) {
            let ws = enumerate_basis(&h, &sup, 2, z, Restrict::Full);
            for y in contracting_elements(&h, z, 1).into_iter().take(2) {
                let hom = contracting_homotopy(&h, z, &y).unwrap();
                for w in &ws {
                    assert!(hom.defect(&h, w).is_zero(), "z={z:?} y={y:?} w={w:?}: {:?}", hom.defect(&h, w));
                }
            }
        }
    }
}
