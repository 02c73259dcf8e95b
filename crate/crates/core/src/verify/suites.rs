//! Named check suites and the report aggregator.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::group::{AbelianGroup, GroupElement};
use crate::verify::axioms::{bracket_axioms_check, complex_axioms_check};
use crate::verify::extension::linear_extension_check;
use crate::verify::gk::gk_cycle_check;
use crate::verify::h1::h1_check;
use crate::verify::inner::{inner_h2_certify, main_theorem_check};
use crate::verify::omega::omega_check;
use crate::verify::outer::{homotopy_identity_check, outer_h2_certify};
use crate::verify::report::{CheckEntry, Verdict, VerificationReport, VerifyError};
use crate::verify::settings::{el, Settings};
use crate::verify::surface::surface_generator_check_in;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Bracket,
    Complex,
    Inner,
    Outer,
    Gk,
    Surface,
    Omega,
    H1,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 9] = ["bracket", "complex", "inner", "outer", "gk", "surface", "omega", "h1", "all"];

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "bracket" => Suite::Bracket,
            "complex" => Suite::Complex,
            "inner" => Suite::Inner,
            "outer" => Suite::Outer,
            "gk" => Suite::Gk,
            "surface" => Suite::Surface,
            "omega" => Suite::Omega,
            "h1" => Suite::H1,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite '{s}' (expected one of {})", Suite::NAMES.join(", "))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [
            Suite::Bracket,
            Suite::Complex,
            Suite::Inner,
            Suite::Outer,
            Suite::Gk,
            Suite::Surface,
            Suite::Omega,
            Suite::H1,
            Suite::All,
        ]
        .iter()
        .position(|s| s == self)
        .expect("listed");
        f.write_str(Suite::NAMES[i])
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub settings: Settings,
    pub gradings: Vec<GroupElement>,
    /// (genus, boundary components) when the group is a surface group.
    pub surface: Option<(usize, usize)>,
    pub axiom_samples: usize,
    pub extension_trials: usize,
}

impl SuiteConfig {
    pub fn new(h: &AbelianGroup, settings: Settings) -> Self {
        SuiteConfig {
            gradings: default_gradings(h),
            settings,
            surface: None,
            axiom_samples: 1000,
            extension_trials: 100,
        }
    }
}

/// 0, the generators of ker mu, then the generators in H^(1).
pub fn default_gradings(h: &AbelianGroup) -> Vec<GroupElement> {
    let mut out = vec![h.zero()];
    let derived = h.generators().iter().filter(|x| h.is_derived_element(x)).cloned();
    for x in h.kernel_mu_generators().into_iter().chain(derived) {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub fn group_summary(h: &AbelianGroup) -> BTreeMap<String, String> {
    let mut g = BTreeMap::new();
    g.insert("generators".into(), h.spec().names().join(" "));
    g.insert("free_rank".into(), h.free_rank().to_string());
    g.insert("torsion".into(), format!("{:?}", h.torsion_coefficients()));
    let ker: Vec<String> = h.kernel_mu_generators().iter().map(|x| el(h, x)).collect();
    g.insert("ker_mu".into(), if ker.is_empty() { "0".into() } else { ker.join(", ") });
    g.insert("form".into(), if h.form_is_zero() { "zero".into() } else if h.form_is_nondegenerate() { "nondegenerate".into() } else { "degenerate".into() });
    g
}

type Task<'a> = Box<dyn Fn() -> CheckEntry + Send + Sync + 'a>;

fn or_error(id: &str, z: String, r: Result<CheckEntry, VerifyError>) -> CheckEntry {
    r.unwrap_or_else(|err| {
        let mut e = CheckEntry::new(id, "not applicable").param("z", z);
        e.demote(Verdict::Refuted);
        e.note(format!("error: {err}"));
        e
    })
}

fn tasks<'a>(h: &'a AbelianGroup, suite: Suite, cfg: &'a SuiteConfig) -> Vec<Task<'a>> {
    let s = &cfg.settings;
    let seed = s.seed;
    let inner: Vec<&GroupElement> = cfg.gradings.iter().filter(|z| h.in_kernel_mu(z)).collect();
    let outer: Vec<&GroupElement> = cfg.gradings.iter().filter(|z| h.is_derived_element(z)).collect();
    let mut t: Vec<Task<'a>> = Vec::new();
    if suite.includes(Suite::Bracket) {
        t.push(Box::new(move || bracket_axioms_check(h, cfg.axiom_samples, seed)));
    }
    if suite.includes(Suite::Complex) {
        t.push(Box::new(move || complex_axioms_check(h, cfg.axiom_samples, seed)));
    }
    if suite.includes(Suite::H1) {
        t.push(Box::new(move || h1_check(h, s)));
    }
    if suite.includes(Suite::Inner) {
        for z in &inner {
            let z = (*z).clone();
            let z2 = z.clone();
            t.push(Box::new(move || or_error("inner-h2", el(h, &z), inner_h2_certify(h, &z, s))));
            t.push(Box::new(move || main_theorem_check(h, &z2, s)));
        }
        t.push(Box::new(move || linear_extension_check(h, s.m, cfg.extension_trials, seed)));
    }
    if suite.includes(Suite::Outer) {
        for z in &outer {
            let (z1, z2, z3) = ((*z).clone(), (*z).clone(), (*z).clone());
            t.push(Box::new(move || or_error("outer-h2", el(h, &z1), outer_h2_certify(h, &z1, s))));
            t.push(Box::new(move || {
                or_error("homotopy-identity", el(h, &z2), homotopy_identity_check(h, &z2, s.m, 2).map(|r| r.0))
            }));
            t.push(Box::new(move || main_theorem_check(h, &z3, s)));
        }
    }
    if suite.includes(Suite::Gk) {
        if let Some(u) = h.generators().iter().find(|x| h.is_derived_element(x)) {
            for z in &inner {
                let z = (*z).clone();
                t.push(Box::new(move || or_error("gk-cycle", el(h, &z), gk_cycle_check(h, u, &z, s))));
            }
        }
    }
    if suite.includes(Suite::Surface) {
        if let Some((g, r)) = cfg.surface.filter(|(g, _)| *g >= 1) {
            for z in &inner {
                let z = (*z).clone();
                t.push(Box::new(move || or_error("surface-generators", el(h, &z), surface_generator_check_in(h, g, r, &z))));
            }
        }
    }
    if suite.includes(Suite::Omega) {
        for z in &inner {
            let z = (*z).clone();
            t.push(Box::new(move || or_error("omega", el(h, &z), omega_check(h, &z, s))));
        }
    }
    t
}

/// Runs the suite. Checks run in parallel; the report keeps a fixed order.
pub fn run_suite(h: &AbelianGroup, suite: Suite, cfg: &SuiteConfig) -> VerificationReport {
    let entries: Vec<CheckEntry> = tasks(h, suite, cfg).par_iter().map(|f| f()).collect();
    let mut group = group_summary(h);
    group.insert("suite".into(), suite.to_string());
    VerificationReport { group, seed: cfg.settings.seed, entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_all_suites() {
        let h = AbelianGroup::surface(1, 0);
        let mut cfg = SuiteConfig::new(&h, Settings::new(1, 3).seed(5));
        cfg.axiom_samples = 100;
        cfg.extension_trials = 10;
        cfg.surface = Some((1, 0));
        let r = run_suite(&h, Suite::All, &cfg);
        assert_eq!(r.overall(), Verdict::Certified, "{}", r.to_text());
        let again = run_suite(&h, Suite::All, &cfg);
        assert_eq!(r.to_text(), again.to_text());
    }

    #[test]
    fn suite_names_round_trip() {
        for n in Suite::NAMES {
            assert_eq!(n.parse::<Suite>().unwrap().to_string(), n);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
