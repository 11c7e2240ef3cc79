//! `a`-chains: sequences of covers in the orbit order with the integrality
//! conditions that glue consecutive directions of a GLS path.

use std::collections::HashSet;

use serde::Serialize;

use crate::cartan_datum::BorcherdsCartanDatum;
use crate::error::{Error, Result};
use crate::gls::orbit::Orbit;
use crate::gls::roots::{RootEntry, RootTable};
use crate::rational::Q;
use crate::weight::Weight;

/// Side condition on the pairing `c = β∨(ν_s)` at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRule {
    /// Plain covers: the orbit order itself.
    Any,
    /// `a·c ∈ ℤ>0` for real roots and `a·c = 1` for imaginary roots.
    Integrality(Q),
}

impl StepRule {
    fn admits(&self, real: bool, c: Q) -> bool {
        match *self {
            StepRule::Any => true,
            StepRule::Integrality(a) => {
                let x = a * c;
                if real {
                    x.is_integer() && x.is_positive()
                } else {
                    x == Q::ONE
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    /// `β` in simple-root coordinates.
    pub root: Vec<i64>,
    pub real: bool,
    /// `β∨(ν_s)`
    pub pairing: Q,
    /// `ν_s`, the lower end of the cover.
    pub lower: Weight,
    /// `ν_{s-1} = r_β ν_s`
    pub upper: Weight,
}

/// `μ = ν_0 ← ν_1 ← ⋯ ← ν_k = ν`, stored bottom-up: `steps[0]` starts at `ν`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AChain {
    pub a: Option<Q>,
    pub top: Weight,
    pub bottom: Weight,
    pub steps: Vec<ChainStep>,
}

impl AChain {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-checks every step against the datum and the rule; the orbit is
    /// only consulted for the cover (level) condition.
    pub fn verify(&self, datum: &BorcherdsCartanDatum, table: &RootTable, orbit: &Orbit) -> bool {
        let rule = self.a.map_or(StepRule::Any, StepRule::Integrality);
        let mut cur = &self.bottom;
        for s in &self.steps {
            if &s.lower != cur {
                return false;
            }
            let Some(root) = table.find(&s.root) else { return false };
            let c = root.coroot_eval(datum, cur);
            let (Some(lo), Some(hi)) = (orbit.get(cur), orbit.get(&s.upper)) else { return false };
            if c != s.pairing
                || !c.is_positive()
                || !rule.admits(root.real, c)
                || root.subtract(cur, c) != s.upper
                || hi.level != lo.level + 1
            {
                return false;
            }
            cur = &s.upper;
        }
        cur == &self.top
    }
}

pub(crate) struct ChainSearch<'a> {
    pub datum: &'a BorcherdsCartanDatum,
    pub table: &'a RootTable,
    pub orbit: &'a Orbit,
    pub rule: StepRule,
    pub max_steps: usize,
}

impl ChainSearch<'_> {
    /// Searches a chain of covers from `nu` up to `mu` obeying the rule.
    /// `Ok(None)` is a definite answer: the table and orbit were large enough.
    pub fn run(&self, mu: &Weight, nu: &Weight) -> Result<Option<Vec<ChainStep>>> {
        let (Some(top), Some(bottom)) = (self.orbit.get(mu), self.orbit.get(nu)) else {
            return Ok(None);
        };
        if top.level < bottom.level {
            return Ok(None);
        }
        let gap = top.level - bottom.level;
        if gap > self.max_steps {
            return Err(Error::BoundExceeded { what: "chain length".into(), bound: self.max_steps });
        }
        let Some(diff) = mu.root_difference(nu) else { return Ok(None) };
        if diff.iter().any(|c| c.is_negative()) {
            return Ok(None);
        }
        let height: Q = diff.iter().copied().sum();
        self.table.require_height(height.ceil() as usize)?;
        let mut dead = HashSet::new();
        let mut steps = Vec::with_capacity(gap);
        Ok(self.dfs(nu, mu, top.level, &mut dead, &mut steps).then_some(steps))
    }

    fn dfs(
        &self,
        kappa: &Weight,
        target: &Weight,
        target_level: usize,
        dead: &mut HashSet<Weight>,
        steps: &mut Vec<ChainStep>,
    ) -> bool {
        if kappa == target {
            return true;
        }
        if dead.contains(kappa) {
            return false;
        }
        let level = self.orbit.get(kappa).map(|e| e.level).unwrap_or(usize::MAX);
        if level >= target_level {
            dead.insert(kappa.clone());
            return false;
        }
        let room: Q = target.depth() - kappa.depth();
        for root in &self.table.entries {
            if Q::int(root.height()) > room {
                break;
            }
            if let Some(next) = self.step(root, kappa, target, level) {
                let c = root.coroot_eval(self.datum, kappa);
                steps.push(ChainStep {
                    root: root.coeffs.clone(),
                    real: root.real,
                    pairing: c,
                    lower: kappa.clone(),
                    upper: next.clone(),
                });
                if self.dfs(&next, target, target_level, dead, steps) {
                    return true;
                }
                steps.pop();
            }
        }
        dead.insert(kappa.clone());
        false
    }

    fn step(&self, root: &RootEntry, kappa: &Weight, target: &Weight, level: usize) -> Option<Weight> {
        let c = root.coroot_eval(self.datum, kappa);
        if !c.is_positive() || !self.rule.admits(root.real, c) {
            return None;
        }
        let next = root.subtract(kappa, c);
        if next.offset.iter().zip(&target.offset).any(|(x, t)| x > t) {
            return None;
        }
        let entry = self.orbit.get(&next)?;
        (entry.level == level + 1).then_some(next)
    }
}
