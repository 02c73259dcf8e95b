//! The Lie algebra Q[H] with bracket [[x],[y]] = <x,y>[x+y], and the map
//! K: Q[H] -> Q (x) H.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::group::{AbelianGroup, GroupElement, GroupError};
use crate::linalg::{q, Q};

/// A finite Q-linear combination of basis vectors [x], x in H.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraVector {
    terms: BTreeMap<GroupElement, Q>,
}

impl AlgebraVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis vector [x].
    pub fn basis(x: GroupElement) -> Self {
        Self::term(x, q(1))
    }

    pub fn term(x: GroupElement, c: Q) -> Self {
        let mut v = Self::zero();
        v.add_term(x, c);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GroupElement, Q)>) -> Self {
        let mut v = Self::zero();
        for (x, c) in terms {
            v.add_term(x, c);
        }
        v
    }

    pub fn add_term(&mut self, x: GroupElement, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&x) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&x);
                }
            }
            None => {
                self.terms.insert(x, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<GroupElement, Q> {
        &self.terms
    }

    pub fn coefficient(&self, x: &GroupElement) -> Q {
        self.terms.get(x).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraVector { terms: self.terms.iter().map(|(x, v)| (x.clone(), v * c)).collect() }
    }

    /// (coefficient, canonical coordinates) pairs in canonical order.
    pub fn to_pairs(&self) -> Vec<(String, Vec<i64>)> {
        self.terms.iter().map(|(x, c)| (c.to_string(), x.coords().to_vec())).collect()
    }
}

impl fmt::Debug for AlgebraVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (x, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}[{x:?}]")?;
        }
        Ok(())
    }
}

impl Add for &AlgebraVector {
    type Output = AlgebraVector;
    fn add(self, rhs: &AlgebraVector) -> AlgebraVector {
        let mut out = self.clone();
        for (x, c) in &rhs.terms {
            out.add_term(x.clone(), c.clone());
        }
        out
    }
}

impl Sub for &AlgebraVector {
    type Output = AlgebraVector;
    fn sub(self, rhs: &AlgebraVector) -> AlgebraVector {
        self + &(-rhs)
    }
}

impl Neg for &AlgebraVector {
    type Output = AlgebraVector;
    fn neg(self) -> AlgebraVector {
        self.scaled(&q(-1))
    }
}

/// An element of Q (x) H, stored on the free coordinates (torsion dies).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorVector {
    coords: Vec<Q>,
}

impl TensorVector {
    pub fn zero(rank: usize) -> Self {
        TensorVector { coords: vec![Q::zero(); rank] }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        TensorVector { coords: v.iter().map(|&c| q(c)).collect() }
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

fn check_all(h: &AbelianGroup, a: &AlgebraVector) -> Result<(), GroupError> {
    for x in a.terms.keys() {
        if !h.contains(x) {
            return Err(GroupError::Foreign(x.coords().to_vec()));
        }
    }
    Ok(())
}

/// The Goldman bracket, extended bilinearly.
pub fn bracket(h: &AbelianGroup, a: &AlgebraVector, b: &AlgebraVector) -> Result<AlgebraVector, GroupError> {
    check_all(h, a)?;
    check_all(h, b)?;
    Ok(bracket_unchecked(h, a, b))
}

pub(crate) fn bracket_unchecked(h: &AbelianGroup, a: &AlgebraVector, b: &AlgebraVector) -> AlgebraVector {
    let mut out = AlgebraVector::zero();
    for (x, c) in &a.terms {
        for (y, d) in &b.terms {
            let w = h.pairing(x, y);
            if w != 0 {
                out.add_term(h.sum(x, y), q(w) * c * d);
            }
        }
    }
    out
}

/// K([x]) = 1 (x) x.
pub fn k_map(h: &AbelianGroup, a: &AlgebraVector) -> TensorVector {
    let mut t = TensorVector::zero(h.free_rank());
    for (x, c) in &a.terms {
        for (slot, &v) in t.coords.iter_mut().zip(h.free_part(x)) {
            if v != 0 {
                *slot += c * q(v);
            }
        }
    }
    t
}

/// Membership in g_K = ker K.
pub fn in_gk(h: &AbelianGroup, a: &AlgebraVector) -> bool {
    k_map(h, a).is_zero()
}
