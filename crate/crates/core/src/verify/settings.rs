use serde::Serialize;

use crate::complex::{Wedge, WedgeChain};
use crate::group::{AbelianGroup, GroupElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strategy {
    /// Rank computations when the boundary box is small enough, explicit
    /// constructions otherwise.
    Auto,
    Rank,
    Constructive,
}

#[derive(Clone, Debug)]
pub struct Settings {
    /// Cycle box radius.
    pub m: i64,
    /// Boundary box radius.
    pub m_prime: i64,
    pub strategy: Strategy,
    pub seed: u64,
    /// Largest estimated number of 3-wedges for which ranks are computed.
    pub rank_budget: f64,
    /// Random samples for statements checked by sampling.
    pub samples: usize,
}

impl Settings {
    pub fn new(m: i64, enlarge: i64) -> Self {
        Settings { m, m_prime: m * enlarge, strategy: Strategy::Auto, seed: 0, rank_budget: 60_000.0, samples: 2000 }
    }

    pub fn with_boxes(m: i64, m_prime: i64) -> Self {
        Settings { m_prime, ..Settings::new(m, 1) }
    }

    pub fn strategy(mut self, s: Strategy) -> Self {
        self.strategy = s;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn use_ranks(&self, estimated_triples: f64) -> bool {
        match self.strategy {
            Strategy::Rank => true,
            Strategy::Constructive => false,
            Strategy::Auto => estimated_triples <= self.rank_budget,
        }
    }
}

pub fn el(h: &AbelianGroup, x: &GroupElement) -> String {
    h.display_named(x)
}

pub fn wedge(h: &AbelianGroup, w: &Wedge) -> String {
    let parts: Vec<String> = w.factors().iter().map(|x| format!("[{}]", el(h, x))).collect();
    parts.join("^")
}

pub fn chain(h: &AbelianGroup, c: &WedgeChain) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = c.terms().iter().map(|(w, v)| format!("({v}){}", wedge(h, w))).collect();
    parts.join(" + ")
}
