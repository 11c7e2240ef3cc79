//! The orbit `𝒲λ` of a dominant weight, enumerated by depth.
//!
//! Every orbit element is reached from `λ` by simple up-steps: applying `r_i`
//! to `κ` with `α_i∨(κ) > 0`, which pushes `κ` strictly down in `λ - Q⁺`.
//! The level of an element is the least number of up-steps needed; covers in
//! the orbit order raise the level by exactly one.

use std::collections::{HashMap, VecDeque};

use crate::cartan_datum::BorcherdsCartanDatum;
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::weight::{Realization, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitEntry {
    pub level: usize,
    /// Monoid word `w` (leftmost letter applied last) with `κ = wλ`.
    pub word: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Orbit {
    shape: Weight,
    depth: i64,
    real_only: bool,
    entries: HashMap<Weight, OrbitEntry>,
}

impl Orbit {
    /// All orbit elements of depth at most `depth` below `shape`. With
    /// `real_only`, only real reflections are used, giving `𝒲_re λ`.
    pub fn generate(
        datum: &BorcherdsCartanDatum,
        shape: &Weight,
        depth: i64,
        real_only: bool,
        cap: usize,
    ) -> Result<Orbit> {
        let mut entries = HashMap::new();
        entries.insert(shape.clone(), OrbitEntry { level: 0, word: Vec::new() });
        let mut queue = VecDeque::from([shape.clone()]);
        let base_depth = shape.depth();
        let indices: Vec<usize> =
            if real_only { datum.real_indices() } else { (0..datum.rank()).collect() };
        while let Some(kappa) = queue.pop_front() {
            let entry = entries[&kappa].clone();
            for &i in &indices {
                let c = datum.eval(i, &kappa);
                if !c.is_positive() {
                    continue;
                }
                let next = datum.add_root(&kappa, i, -c);
                if next.depth() - base_depth > Q::int(depth) || entries.contains_key(&next) {
                    continue;
                }
                if entries.len() >= cap {
                    return Err(Error::BoundExceeded { what: "orbit size".into(), bound: cap });
                }
                let mut word = vec![i];
                word.extend_from_slice(&entry.word);
                entries.insert(next.clone(), OrbitEntry { level: entry.level + 1, word });
                queue.push_back(next);
            }
        }
        Ok(Orbit { shape: shape.clone(), depth, real_only, entries })
    }

    pub fn shape(&self) -> &Weight {
        &self.shape
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn is_real_only(&self) -> bool {
        self.real_only
    }

    /// Depth of `mu` below the shape, when `mu` lies over the same base.
    pub fn relative_depth(&self, mu: &Weight) -> Option<Q> {
        (mu.base == self.shape.base).then(|| mu.depth() - self.shape.depth())
    }

    /// True when membership of `mu` is decided by this enumeration.
    pub fn covers_depth_of(&self, mu: &Weight) -> bool {
        match self.relative_depth(mu) {
            Some(d) => d <= Q::int(self.depth),
            None => true,
        }
    }

    pub fn get(&self, mu: &Weight) -> Option<&OrbitEntry> {
        self.entries.get(mu)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Elements sorted by level, then by weight.
    pub fn elements(&self) -> Vec<(&Weight, &OrbitEntry)> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort_by(|a, b| a.1.level.cmp(&b.1.level).then_with(|| a.0.cmp(b.0)));
        v
    }
}
