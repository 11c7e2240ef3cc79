//! Positive real roots and imaginary roots, generated by reflection closure
//! from the simple roots up to a height bound.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::cartan_datum::BorcherdsCartanDatum;
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::weight::{Realization, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootEntry {
    /// Coefficients of `β` in the simple roots.
    pub coeffs: Vec<i64>,
    /// Coefficients of `β∨` in the simple coroots.
    pub coroot: Vec<i64>,
    pub real: bool,
    /// The simple index `i` with `β = v α_i`.
    pub simple: usize,
    /// A real word `v` (leftmost letter applied last) with `β = v α_i`.
    pub word: Vec<usize>,
}

impl RootEntry {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// `β∨(μ)`
    pub fn coroot_eval(&self, datum: &BorcherdsCartanDatum, mu: &Weight) -> Q {
        self.coroot
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(k, c)| Q::int(*c) * datum.eval(k, mu))
            .sum()
    }

    /// `μ - c β`
    pub fn subtract(&self, mu: &Weight, c: Q) -> Weight {
        let mut out = mu.clone();
        for (k, b) in self.coeffs.iter().enumerate() {
            if *b != 0 {
                out.offset[k] += c * Q::int(*b);
            }
        }
        out
    }

    /// `r_β(μ) = μ - β∨(μ) β`
    pub fn reflect(&self, datum: &BorcherdsCartanDatum, mu: &Weight) -> Weight {
        self.subtract(mu, self.coroot_eval(datum, mu))
    }

    /// Monoid word of the reflection `r_β = v r_i v^{-1}`.
    pub fn reflection_word(&self) -> Vec<usize> {
        let mut w = self.word.clone();
        w.push(self.simple);
        w.extend(self.word.iter().rev());
        w
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RootTable {
    pub entries: Vec<RootEntry>,
    pub height_bound: usize,
    /// True when no positive root was dropped for exceeding the height
    /// bound, i.e. the table holds every real and imaginary root.
    pub closed: bool,
}

impl RootTable {
    pub fn build(datum: &BorcherdsCartanDatum, height_bound: usize) -> RootTable {
        let n = datum.rank();
        let mut entries = Vec::new();
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut closed = true;
        for i in 0..n {
            let mut coeffs = vec![0; n];
            coeffs[i] = 1;
            let entry = RootEntry {
                coeffs: coeffs.clone(),
                coroot: coeffs.clone(),
                real: datum.is_real(i),
                simple: i,
                word: Vec::new(),
            };
            seen.insert(coeffs, entries.len());
            queue.push_back(entries.len());
            entries.push(entry);
        }
        let real = datum.real_indices();
        while let Some(idx) = queue.pop_front() {
            for &j in &real {
                let root: &RootEntry = &entries[idx];
                // α_j∨(β) = Σ_k a_jk β_k ; α_j(β∨) = Σ_k β∨_k a_kj
                let pair: i64 = (0..n).map(|k| datum.entry(j, k) * root.coeffs[k]).sum();
                if pair == 0 {
                    continue;
                }
                let mut coeffs = root.coeffs.clone();
                coeffs[j] -= pair;
                if coeffs.iter().any(|&c| c < 0) {
                    continue;
                }
                if coeffs.iter().sum::<i64>() as usize > height_bound {
                    closed = false;
                    continue;
                }
                if seen.contains_key(&coeffs) {
                    continue;
                }
                let co_pair: i64 = (0..n).map(|k| root.coroot[k] * datum.entry(k, j)).sum();
                let mut coroot = root.coroot.clone();
                coroot[j] -= co_pair;
                let mut word = vec![j];
                word.extend(root.word.iter().copied());
                let entry = RootEntry { coeffs: coeffs.clone(), coroot, real: root.real, simple: root.simple, word };
                seen.insert(coeffs, entries.len());
                queue.push_back(entries.len());
                entries.push(entry);
            }
        }
        entries.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.coeffs.cmp(&b.coeffs)));
        RootTable { entries, height_bound, closed }
    }

    pub fn real_roots(&self) -> impl Iterator<Item = &RootEntry> {
        self.entries.iter().filter(|e| e.real)
    }

    pub fn imag_roots(&self) -> impl Iterator<Item = &RootEntry> {
        self.entries.iter().filter(|e| !e.real)
    }

    pub fn find(&self, coeffs: &[i64]) -> Option<&RootEntry> {
        self.entries.iter().find(|e| e.coeffs == coeffs)
    }

    /// Errors unless every root of height up to `needed` is in the table.
    pub fn require_height(&self, needed: usize) -> Result<()> {
        if needed > self.height_bound && !self.closed {
            return Err(Error::TableTooSmall { bound: self.height_bound, needed });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeff_set<'a>(it: impl Iterator<Item = &'a RootEntry>) -> Vec<Vec<i64>> {
        let mut v: Vec<Vec<i64>> = it.map(|e| e.coeffs.clone()).collect();
        v.sort();
        v
    }

    #[test]
    fn a2_roots() {
        let d = BorcherdsCartanDatum::from_matrix(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        let t = RootTable::build(&d, 3);
        assert!(t.closed);
        assert_eq!(coeff_set(t.real_roots()), vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(t.imag_roots().count(), 0);
    }

    #[test]
    fn rank_one_imaginary() {
        let d = BorcherdsCartanDatum::from_matrix(vec![vec![-2]]).unwrap();
        let t = RootTable::build(&d, 5);
        assert_eq!(coeff_set(t.imag_roots()), vec![vec![1]]);
        assert_eq!(t.real_roots().count(), 0);
    }

    #[test]
    fn mixed_roots_and_coroots() {
        let d = BorcherdsCartanDatum::from_matrix(vec![vec![2, -1], vec![-2, -4]]).unwrap();
        let t = RootTable::build(&d, 2);
        assert_eq!(coeff_set(t.real_roots()), vec![vec![1, 0]]);
        assert_eq!(coeff_set(t.imag_roots()), vec![vec![0, 1], vec![1, 1]]);
        let shifted = t.find(&[1, 1]).unwrap();
        assert_eq!(shifted.coroot, vec![2, 1]);
        assert_eq!(shifted.word, vec![0]);
        assert_eq!(shifted.reflection_word(), vec![0, 1, 0]);
    }

    #[test]
    fn b2_closed_at_height_three() {
        let d = BorcherdsCartanDatum::from_matrix(vec![vec![2, -1], vec![-2, 2]]).unwrap();
        let t = RootTable::build(&d, 3);
        assert!(t.closed);
        assert_eq!(t.real_roots().count(), 4);
        let small = RootTable::build(&d, 2);
        assert!(!small.closed);
        assert!(matches!(small.require_height(3), Err(Error::TableTooSmall { .. })));
    }

    #[test]
    fn reflection_matches_word() {
        let d = BorcherdsCartanDatum::from_matrix(vec![vec![2, -1], vec![-2, -4]]).unwrap();
        let t = RootTable::build(&d, 4);
        let mu = Weight::from_evals(&[1, 2]);
        for e in &t.entries {
            let mut by_word = mu.clone();
            let w = e.reflection_word();
            for &k in w.iter().rev() {
                by_word = d.reflect(k, &by_word);
            }
            assert_eq!(e.reflect(&d, &mu), by_word);
        }
    }
}
