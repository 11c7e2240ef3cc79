//! The lift of the path model to the Kac–Moody datum `Ã` on lifted indices.
//!
//! `Ã` has 2 on the diagonal and `a_ij` at `((i,m),(j,n))` otherwise, so it
//! is an ordinary (infinite) Cartan matrix. A lifted weight is finitely
//! supported: `base` pairs `α̃_{(i,m)}∨` with `base[i]` at every level, and
//! `offset` subtracts finitely many lifted simple roots. Rows of `Ã` at two
//! levels of the same index agree away from their own columns, so any
//! question about all levels reduces to the levels in the support plus one
//! fresh level.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan_datum::{BorcherdsCartanDatum, LiftedIndex};
use crate::error::{Error, Result};
use crate::paths::{self, HFunction, Path};
use crate::rational::Q;
use crate::weight::{Realization, Weight};
use crate::weyl_monoid::to_ordered_index;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LiftedWeight {
    pub base: Vec<Q>,
    pub offset: BTreeMap<LiftedIndex, Q>,
}

impl LiftedWeight {
    /// `μ̃` with `α̃_{(i,m)}∨(μ̃) = α_i∨(μ)` at every level.
    pub fn lift(datum: &BorcherdsCartanDatum, mu: &Weight) -> LiftedWeight {
        LiftedWeight { base: mu.evals(datum), offset: BTreeMap::new() }
    }

    /// Lifted indices carrying a nonzero offset.
    pub fn support(&self) -> impl Iterator<Item = &LiftedIndex> {
        self.offset.keys()
    }
}

impl fmt::Debug for LiftedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.base.iter().map(|q| q.to_string()).collect();
        let o: Vec<String> =
            self.offset.iter().map(|(p, c)| format!("({},{}):{c}", p.base + 1, p.level)).collect();
        write!(f, "[{}|{}]", b.join(","), o.join(","))
    }
}

/// The Kac–Moody datum `Ã` as a realization.
#[derive(Debug, Clone)]
pub struct LiftedDatum {
    datum: BorcherdsCartanDatum,
}

impl LiftedDatum {
    pub fn new(datum: BorcherdsCartanDatum) -> LiftedDatum {
        LiftedDatum { datum }
    }

    pub fn datum(&self) -> &BorcherdsCartanDatum {
        &self.datum
    }

    pub fn entry(&self, p: LiftedIndex, q: LiftedIndex) -> i64 {
        self.datum.lifted_entry_unchecked(p, q)
    }
}

impl Realization for LiftedDatum {
    type Index = LiftedIndex;
    type Vector = LiftedWeight;

    fn eval(&self, p: LiftedIndex, v: &LiftedWeight) -> Q {
        let mut e = v.base[p.base];
        for (&q, &c) in &v.offset {
            e -= c * Q::int(self.entry(p, q));
        }
        e
    }

    fn diagonal(&self, _: LiftedIndex) -> i64 {
        2
    }

    fn zero_vector(&self) -> LiftedWeight {
        LiftedWeight { base: vec![Q::ZERO; self.datum.rank()], offset: BTreeMap::new() }
    }

    fn add_root(&self, v: &LiftedWeight, p: LiftedIndex, c: Q) -> LiftedWeight {
        let mut w = v.clone();
        let slot = w.offset.entry(p).or_insert(Q::ZERO);
        *slot -= c;
        if slot.is_zero() {
            w.offset.remove(&p);
        }
        w
    }

    fn axpy(&self, v: &LiftedWeight, c: Q, w: &LiftedWeight) -> LiftedWeight {
        let mut out = v.clone();
        for (x, y) in out.base.iter_mut().zip(&w.base) {
            *x += c * *y;
        }
        for (&p, &y) in &w.offset {
            let slot = out.offset.entry(p).or_insert(Q::ZERO);
            *slot += c * y;
            if slot.is_zero() {
                out.offset.remove(&p);
            }
        }
        out
    }
}

/// Same as the ordered index of the operator word `f_{i_k} ⋯ f_{i_1}`.
pub fn embed_word(datum: &BorcherdsCartanDatum, fword: &[usize]) -> Vec<LiftedIndex> {
    to_ordered_index(datum, fword)
}

/// A real word `w` with `wμ` dominant, i.e. a witness for `μ ∈ 𝒲_re P⁺`.
pub fn dominant_witness(datum: &BorcherdsCartanDatum, mu: &Weight, max_steps: usize) -> Result<Vec<usize>> {
    let mut cur = mu.clone();
    let mut word = Vec::new();
    while let Some(i) = datum.real_indices().into_iter().find(|&i| datum.eval(i, &cur).is_negative()) {
        if word.len() >= max_steps {
            return Err(Error::WitnessMissing(mu.to_string()));
        }
        cur = datum.reflect(i, &cur);
        word.insert(0, i);
    }
    if !cur.is_dominant(datum) {
        return Err(Error::WitnessMissing(mu.to_string()));
    }
    Ok(word)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub word: Vec<LiftedIndex>,
    pub downstairs: Option<Path<Weight>>,
    pub lifted: Option<Path<LiftedWeight>>,
}

/// `π_Λ = π_{λ_1} ⊗ ⋯ ⊗ π_{λ_n}`
pub fn highest_concatenation<R: Realization>(r: &R, weights: &[R::Vector]) -> Path<R::Vector> {
    let factors: Vec<Path<R::Vector>> = weights.iter().cloned().map(Path::straight).collect();
    paths::concatenate(r, &factors)
}

/// Applies `F_𝐢` to `π_Λ` and `F_{(𝐢,𝐦)}` to `π_Λ̃` in lockstep.
pub fn embed_path(
    lifted: &LiftedDatum,
    fword: &[usize],
    shapes: &[Weight],
    max_witness_steps: usize,
) -> Result<Embedding> {
    let datum = lifted.datum();
    for mu in shapes {
        dominant_witness(datum, mu, max_witness_steps)?;
    }
    let word = embed_word(datum, fword);
    let up: Vec<LiftedWeight> = shapes.iter().map(|m| LiftedWeight::lift(datum, m)).collect();
    let mut down = Some(highest_concatenation(datum, shapes));
    let mut upper = Some(highest_concatenation(lifted, &up));
    for (&i, &p) in fword.iter().zip(&word).rev() {
        down = down.and_then(|x| paths::f_op(datum, &x, i));
        upper = upper.and_then(|x| paths::f_op(lifted, &x, p));
        assert_eq!(down.is_none(), upper.is_none(), "lift and path disagree on vanishing");
        if down.is_none() {
            break;
        }
    }
    Ok(Embedding { word, downstairs: down, lifted: upper })
}

/// Equality of two height functions as functions on `[0,1]`.
pub fn same_height(a: &HFunction, b: &HFunction) -> bool {
    let times: BTreeSet<Q> = a.breakpoints.iter().chain(&b.breakpoints).copied().collect();
    times.into_iter().all(|t| a.value_at(t) == b.value_at(t))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    /// Prefixes compared.
    pub checked: usize,
    /// Prefix lengths `s - 1` at which `H` differed.
    pub mismatches: Vec<usize>,
}

/// Compares `H[F_{𝐢[s-1]} π_Λ; i_s]` with `H[F_{(𝐢,𝐦)[s-1]} π_Λ̃; (i_s, m_s)]`
/// for every prefix on which the paths are non-null.
pub fn h_equality_probe(lifted: &LiftedDatum, fword: &[usize], shapes: &[Weight]) -> ProbeReport {
    let datum = lifted.datum();
    let word = embed_word(datum, fword);
    let up: Vec<LiftedWeight> = shapes.iter().map(|m| LiftedWeight::lift(datum, m)).collect();
    let mut down = highest_concatenation(datum, shapes);
    let mut upper = highest_concatenation(lifted, &up);
    let mut report = ProbeReport::default();
    for (s, (&i, &p)) in fword.iter().zip(&word).rev().enumerate() {
        let hd = paths::h_function(datum, &down, i);
        let hu = paths::h_function(lifted, &upper, p);
        report.checked += 1;
        if !same_height(&hd, &hu) {
            report.mismatches.push(s);
        }
        match (paths::f_op(datum, &down, i), paths::f_op(lifted, &upper, p)) {
            (Some(d), Some(u)) => {
                down = d;
                upper = u;
            }
            (None, None) => break,
            _ => {
                report.mismatches.push(s);
                break;
            }
        }
    }
    report
}

/// Lifted indices to test: every level in the support and one fresh level
/// per imaginary index (real indices only have level 1).
fn representatives(datum: &BorcherdsCartanDatum, path: &Path<LiftedWeight>, within: Option<&[usize]>) -> Vec<LiftedIndex> {
    let mut top: BTreeMap<usize, u32> = BTreeMap::new();
    let mut out: BTreeSet<LiftedIndex> = BTreeSet::new();
    for v in path.slopes() {
        for p in v.support() {
            out.insert(*p);
            let t = top.entry(p.base).or_insert(0);
            *t = (*t).max(p.level);
        }
    }
    for i in 0..datum.rank() {
        let level = if datum.is_real(i) { 1 } else { top.get(&i).copied().unwrap_or(0) + 1 };
        out.insert(LiftedIndex::new(i, level));
    }
    out.into_iter().filter(|p| within.is_none_or(|s| s.contains(&p.base))).collect()
}

/// `H_{(i,m)}(t) + α̃_{(i,m)}∨(shift) ≥ 0` for all `t` and all `(i,m)`.
pub fn is_lifted_dominant(lifted: &LiftedDatum, path: &Path<LiftedWeight>, shift: &LiftedWeight) -> bool {
    representatives(lifted.datum(), path, None).into_iter().all(|p| {
        let h = paths::h_function(lifted, path, p);
        !(h.min() + lifted.eval(p, shift)).is_negative()
    })
}

/// Dominance for the lifted Levi datum on the indices in `subset`.
pub fn is_levi_dominant(lifted: &LiftedDatum, path: &Path<LiftedWeight>, subset: &[usize]) -> bool {
    representatives(lifted.datum(), path, Some(subset))
        .into_iter()
        .all(|p| !paths::h_function(lifted, path, p).min().is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gkm2() -> LiftedDatum {
        LiftedDatum::new(BorcherdsCartanDatum::from_matrix(vec![vec![2, -1], vec![-2, -4]]).unwrap())
    }

    #[test]
    fn ten_letter_word() {
        let l = gkm2();
        let word: Vec<usize> = [2, 2, 1, 2, 2, 2, 1, 1, 2, 2].iter().map(|x| x - 1).collect();
        let levels: Vec<(usize, u32)> = embed_word(l.datum(), &word).iter().map(|p| (p.base + 1, p.level)).collect();
        assert_eq!(levels, vec![(2, 7), (2, 6), (1, 1), (2, 5), (2, 4), (2, 3), (1, 1), (1, 1), (2, 2), (2, 1)]);
        assert!(embed_word(l.datum(), &[0, 0]).iter().all(|p| p.level == 1));
    }

    #[test]
    fn lifted_evaluation_replicates_levels() {
        let l = gkm2();
        let lam = LiftedWeight::lift(l.datum(), &Weight::from_evals(&[1, 2]));
        for m in 1..4 {
            assert_eq!(l.eval(LiftedIndex::new(1, m), &lam), Q::int(2));
        }
        let low = l.add_root(&lam, LiftedIndex::new(1, 1), -Q::ONE);
        assert_eq!(l.eval(LiftedIndex::new(1, 1), &low), Q::ZERO);
        assert_eq!(l.eval(LiftedIndex::new(1, 2), &low), Q::int(6));
        assert_eq!(l.eval(LiftedIndex::new(0, 1), &low), Q::int(2));
    }

    #[test]
    fn embedding_the_example_word() {
        let l = gkm2();
        let word: Vec<usize> = [2, 2, 1, 2, 2, 2, 1, 1, 2, 2].iter().map(|x| x - 1).collect();
        let shapes = [Weight::from_evals(&[1, 1])];
        let e = embed_path(&l, &word, &shapes, 16).unwrap();
        assert!(e.downstairs.is_some() && e.lifted.is_some());
        let r = h_equality_probe(&l, &word, &shapes);
        assert_eq!(r.checked, 10);
        assert!(r.mismatches.is_empty());
        let empty = embed_path(&l, &[], &shapes, 16).unwrap();
        assert_eq!(empty.downstairs, Some(Path::straight(shapes[0].clone())));
    }

    #[test]
    fn dominance_of_lifts() {
        let l = LiftedDatum::new(BorcherdsCartanDatum::from_matrix(vec![vec![2]]).unwrap());
        let mu = Weight::from_evals(&[1]);
        let e = embed_path(&l, &[0], &[mu], 4).unwrap().lifted.unwrap();
        let zero = LiftedWeight::lift(l.datum(), &Weight::from_evals(&[0]));
        let one = LiftedWeight::lift(l.datum(), &Weight::from_evals(&[1]));
        assert!(!is_lifted_dominant(&l, &e, &zero));
        assert!(is_lifted_dominant(&l, &e, &one));
        assert!(!is_levi_dominant(&l, &e, &[0]));
        assert!(is_levi_dominant(&l, &e, &[]));
        let top = Path::straight(one.clone());
        assert!(is_lifted_dominant(&l, &top, &zero));
    }

    #[test]
    fn witnesses_for_the_real_orbit() {
        let d = BorcherdsCartanDatum::from_matrix(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        let mu = d.reflect(0, &Weight::from_evals(&[1, 0]));
        assert_eq!(dominant_witness(&d, &mu, 8).unwrap(), vec![0]);
        let g = BorcherdsCartanDatum::from_matrix(vec![vec![-2]]).unwrap();
        assert!(matches!(dominant_witness(&g, &Weight::from_evals(&[-1]), 8), Err(Error::WitnessMissing(_))));
    }
}
