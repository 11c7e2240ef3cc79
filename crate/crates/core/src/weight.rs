//! Weights as exact vectors in a faithful realization of the weight space.
//!
//! A weight is stored as `base - Σ offset_j α_j`, where `base` is recorded by
//! its coroot evaluations on a fixed complement of the root span. Distinct
//! `(base, offset)` pairs are distinct elements, so structural equality is
//! equality of weights.

use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::cartan_datum::BorcherdsCartanDatum;
use crate::rational::Q;

/// Linear-algebra interface shared by the datum and its lift: everything the
/// path operators need to know about the ambient weight space.
pub trait Realization {
    type Index: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync;
    type Vector: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    /// Coroot evaluation `α_i∨(v)`.
    fn eval(&self, i: Self::Index, v: &Self::Vector) -> Q;
    /// Diagonal Cartan entry `a_ii`.
    fn diagonal(&self, i: Self::Index) -> i64;
    fn zero_vector(&self) -> Self::Vector;
    /// `v + c·α_i`
    fn add_root(&self, v: &Self::Vector, i: Self::Index, c: Q) -> Self::Vector;
    /// `v + c·w`
    fn axpy(&self, v: &Self::Vector, c: Q, w: &Self::Vector) -> Self::Vector;

    fn is_real(&self, i: Self::Index) -> bool {
        self.diagonal(i) == 2
    }

    fn scale(&self, c: Q, v: &Self::Vector) -> Self::Vector {
        self.axpy(&self.zero_vector(), c, v)
    }

    /// `r_i(v) = v - α_i∨(v) α_i`
    fn reflect(&self, i: Self::Index, v: &Self::Vector) -> Self::Vector {
        self.add_root(v, i, -self.eval(i, v))
    }

    /// `r_i^{-1}(v) = v + α_i∨(v)/(1 - a_ii) α_i`; equals `reflect` for real `i`.
    fn reflect_inverse(&self, i: Self::Index, v: &Self::Vector) -> Self::Vector {
        let denom = Q::int(1 - self.diagonal(i));
        self.add_root(v, i, self.eval(i, v) / denom)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight {
    #[serde(rename = "base_evals")]
    pub base: Vec<Q>,
    pub offset: Vec<Q>,
}

impl Weight {
    pub fn zero(rank: usize) -> Weight {
        Weight { base: vec![Q::ZERO; rank], offset: vec![Q::ZERO; rank] }
    }

    /// The weight with the given coroot evaluations and no root offset.
    pub fn from_evals(evals: &[i64]) -> Weight {
        Weight {
            base: evals.iter().map(|&e| Q::int(e)).collect(),
            offset: vec![Q::ZERO; evals.len()],
        }
    }

    /// Fundamental weight `ω_k` of the realization.
    pub fn fundamental(rank: usize, k: usize) -> Weight {
        let mut w = Weight::zero(rank);
        w.base[k] = Q::ONE;
        w
    }

    /// The simple root `α_i` itself.
    pub fn simple_root(rank: usize, i: usize) -> Weight {
        let mut w = Weight::zero(rank);
        w.offset[i] = -Q::ONE;
        w
    }

    pub fn rank(&self) -> usize {
        self.base.len()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight {
            base: self.base.iter().zip(&other.base).map(|(a, b)| *a + *b).collect(),
            offset: self.offset.iter().zip(&other.offset).map(|(a, b)| *a + *b).collect(),
        }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight {
            base: self.base.iter().zip(&other.base).map(|(a, b)| *a - *b).collect(),
            offset: self.offset.iter().zip(&other.offset).map(|(a, b)| *a - *b).collect(),
        }
    }

    /// `Σ offset_j`, the Q⁺-height below the base part.
    pub fn depth(&self) -> Q {
        self.offset.iter().copied().sum()
    }

    pub fn evals(&self, datum: &BorcherdsCartanDatum) -> Vec<Q> {
        (0..self.rank()).map(|i| datum.eval(i, self)).collect()
    }

    pub fn is_dominant(&self, datum: &BorcherdsCartanDatum) -> bool {
        (0..self.rank()).all(|i| !datum.eval(i, self).is_negative())
    }

    pub fn is_integral(&self, datum: &BorcherdsCartanDatum) -> bool {
        (0..self.rank()).all(|i| datum.eval(i, self).is_integer())
    }

    /// `self - other` as a root-lattice vector when both share a base part:
    /// the coefficients `c` with `self = other - Σ c_j α_j`.
    pub fn root_difference(&self, other: &Weight) -> Option<Vec<Q>> {
        if self.base != other.base {
            return None;
        }
        Some(self.offset.iter().zip(&other.offset).map(|(a, b)| *a - *b).collect())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.base.iter().map(|q| q.to_string()).collect();
        let o: Vec<String> = self.offset.iter().map(|q| q.to_string()).collect();
        write!(f, "[{}|{}]", b.join(","), o.join(","))
    }
}

impl Realization for BorcherdsCartanDatum {
    type Index = usize;
    type Vector = Weight;

    fn eval(&self, i: usize, v: &Weight) -> Q {
        let mut e = v.base[i];
        for (j, c) in v.offset.iter().enumerate() {
            if !c.is_zero() {
                e -= *c * Q::int(self.entry(i, j));
            }
        }
        e
    }

    fn diagonal(&self, i: usize) -> i64 {
        self.entry(i, i)
    }

    fn zero_vector(&self) -> Weight {
        Weight::zero(self.rank())
    }

    fn add_root(&self, v: &Weight, i: usize, c: Q) -> Weight {
        let mut w = v.clone();
        w.offset[i] -= c;
        w
    }

    fn axpy(&self, v: &Weight, c: Q, w: &Weight) -> Weight {
        Weight {
            base: v.base.iter().zip(&w.base).map(|(a, b)| *a + c * *b).collect(),
            offset: v.offset.iter().zip(&w.offset).map(|(a, b)| *a + c * *b).collect(),
        }
    }
}
