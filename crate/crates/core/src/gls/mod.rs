//! Generalized Lakshmibai–Seshadri paths: the chain condition, membership
//! with certificates, and the cutoff of the imaginary raising operator.

pub mod chain;
pub mod orbit;
pub mod roots;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::cartan_datum::BorcherdsCartanDatum;
use crate::error::{Error, Result};
use crate::paths::{self, Path, Segment};
use crate::rational::Q;
use crate::weight::{Realization, Weight};

pub use chain::{AChain, ChainStep, StepRule};
pub use orbit::{Orbit, OrbitEntry};
pub use roots::{RootEntry, RootTable};

use chain::ChainSearch;

/// Search budgets. Every search that runs out reports `BoundExceeded` or
/// `TableTooSmall` instead of a negative answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Height bound of the root table.
    pub height: usize,
    /// Longest chain of covers searched.
    pub chain: usize,
    /// Largest orbit or crystal enumerated.
    pub orbit: usize,
    /// Largest reduced-word class enumerated.
    pub enumeration: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { height: 24, chain: 64, orbit: 200_000, enumeration: 20_000 }
    }
}

/// A GLS path `(λ_1 > ⋯ > λ_k; 0 = a_0 < ⋯ < a_k = 1)` of shape `λ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GlsPath {
    pub weights: Vec<Weight>,
    pub breaks: Vec<Q>,
    pub shape: Weight,
}

impl GlsPath {
    /// Accepts repetitions in weights and breaks and merges them.
    pub fn new(weights: Vec<Weight>, breaks: Vec<Q>, shape: Weight) -> Result<GlsPath> {
        if breaks.len() != weights.len() + 1 || breaks[0] != Q::ZERO || *breaks.last().unwrap() != Q::ONE {
            return Err(Error::Malformed("breaks must run from 0 to 1, one more than weights".into()));
        }
        if breaks.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Malformed("breaks must be non-decreasing".into()));
        }
        let segs = weights
            .iter()
            .zip(breaks.windows(2))
            .map(|(w, b)| Segment { slope: w.clone(), duration: b[1] - b[0] })
            .collect();
        Ok(GlsPath::from_path(&Path::new(segs)?, shape))
    }

    pub fn straight(shape: &Weight) -> GlsPath {
        GlsPath { weights: vec![shape.clone()], breaks: vec![Q::ZERO, Q::ONE], shape: shape.clone() }
    }

    pub fn from_path(path: &Path<Weight>, shape: Weight) -> GlsPath {
        GlsPath { weights: path.slopes().cloned().collect(), breaks: path.breakpoints(), shape }
    }

    pub fn to_path(&self) -> Path<Weight> {
        Path::from_raw(
            self.weights
                .iter()
                .zip(self.breaks.windows(2))
                .map(|(w, b)| Segment { slope: w.clone(), duration: b[1] - b[0] })
                .collect(),
        )
    }
}

/// The chains witnessing the chain condition: one `a_s`-chain per interior
/// break, then the final 1-chain down to the shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlsCertificate {
    pub chains: Vec<AChain>,
}

/// A datum with its root table, search bounds and memoized orbit and
/// membership data. Shared freely between threads.
pub struct PathModel {
    datum: BorcherdsCartanDatum,
    bounds: Bounds,
    table: RootTable,
    orbits: Mutex<HashMap<(Weight, bool), Arc<Orbit>>>,
    members: Mutex<HashMap<(Weight, Path<Weight>), bool>>,
}

impl PathModel {
    pub fn new(datum: BorcherdsCartanDatum, bounds: Bounds) -> PathModel {
        let table = RootTable::build(&datum, bounds.height);
        PathModel {
            datum,
            bounds,
            table,
            orbits: Mutex::new(HashMap::new()),
            members: Mutex::new(HashMap::new()),
        }
    }

    pub fn datum(&self) -> &BorcherdsCartanDatum {
        &self.datum
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn roots(&self) -> &RootTable {
        &self.table
    }

    /// Checks that `shape` is a dominant integral weight.
    pub fn check_shape(&self, shape: &Weight) -> Result<()> {
        if shape.rank() != self.datum.rank() || shape.offset.len() != self.datum.rank() {
            return Err(Error::Malformed(format!("weight {shape} has the wrong rank")));
        }
        if !shape.is_integral(&self.datum) {
            return Err(Error::Malformed(format!("shape {shape} is not integral")));
        }
        if !shape.is_dominant(&self.datum) {
            return Err(Error::Malformed(format!("shape {shape} is not dominant")));
        }
        Ok(())
    }

    /// Orbit of `shape` enumerated at least to `depth`.
    pub fn orbit(&self, shape: &Weight, depth: i64, real_only: bool) -> Result<Arc<Orbit>> {
        let key = (shape.clone(), real_only);
        if let Some(o) = self.orbits.lock().unwrap().get(&key) {
            if o.depth() >= depth {
                return Ok(o.clone());
            }
        }
        let o = Arc::new(Orbit::generate(&self.datum, shape, depth, real_only, self.bounds.orbit)?);
        let mut cache = self.orbits.lock().unwrap();
        let slot = cache.entry(key).or_insert_with(|| o.clone());
        if slot.depth() < o.depth() {
            *slot = o.clone();
        }
        Ok(slot.clone())
    }

    fn orbit_for(&self, shape: &Weight, mu: &Weight, real_only: bool) -> Result<Option<Arc<Orbit>>> {
        if mu.base != shape.base {
            return Ok(None);
        }
        let d = mu.depth() - shape.depth();
        if d.is_negative() || !d.is_integer() {
            return Ok(None);
        }
        self.orbit(shape, d.ceil() as i64, real_only).map(Some)
    }

    /// `Some(entry)` when `mu ∈ 𝒲λ` (or `𝒲_re λ`), with its level and witness word.
    pub fn orbit_entry(&self, shape: &Weight, mu: &Weight, real_only: bool) -> Result<Option<OrbitEntry>> {
        Ok(self.orbit_for(shape, mu, real_only)?.and_then(|o| o.get(mu).cloned()))
    }

    /// An `a`-chain for `(mu, nu)` in `𝒲λ`, or a chain of covers when `a` is
    /// `None`; `Ok(None)` means none exists.
    pub fn find_a_chain(&self, shape: &Weight, mu: &Weight, nu: &Weight, a: Option<Q>) -> Result<Option<AChain>> {
        if let Some(a) = a {
            if !a.is_positive() || a > Q::ONE {
                return Err(Error::OutOfRange(a.to_string()));
            }
        }
        let Some(orbit) = self.orbit_for(shape, mu, false)? else { return Ok(None) };
        let search = ChainSearch {
            datum: &self.datum,
            table: &self.table,
            orbit: &orbit,
            rule: a.map_or(StepRule::Any, StepRule::Integrality),
            max_steps: self.bounds.chain,
        };
        Ok(search
            .run(mu, nu)?
            .map(|steps| AChain { a, top: mu.clone(), bottom: nu.clone(), steps }))
    }

    /// `mu ≥ nu` in the orbit order.
    pub fn orbit_geq(&self, shape: &Weight, mu: &Weight, nu: &Weight) -> Result<bool> {
        Ok(self.find_a_chain(shape, mu, nu, None)?.is_some())
    }

    pub fn verify_chain(&self, shape: &Weight, chain: &AChain) -> Result<bool> {
        let Some(orbit) = self.orbit_for(shape, &chain.top, false)? else { return Ok(false) };
        Ok(chain.verify(&self.datum, &self.table, &orbit))
    }

    /// Decides the chain condition; on success returns the chains.
    pub fn check_gls(&self, path: &GlsPath) -> Result<Option<GlsCertificate>> {
        self.check_shape(&path.shape)?;
        let canonical = GlsPath::from_path(&path.to_path(), path.shape.clone());
        let k = canonical.weights.len();
        let mut chains = Vec::with_capacity(k);
        for s in 0..k {
            let (mu, nu, a) = if s + 1 < k {
                (&canonical.weights[s], &canonical.weights[s + 1], canonical.breaks[s + 1])
            } else {
                (&canonical.weights[s], &canonical.shape, Q::ONE)
            };
            match self.find_a_chain(&canonical.shape, mu, nu, Some(a))? {
                Some(c) => chains.push(c),
                None => return Ok(None),
            }
        }
        Ok(Some(GlsCertificate { chains }))
    }

    /// Membership of a path in `𝔹(λ)`, memoized.
    pub fn is_gls(&self, path: &Path<Weight>, shape: &Weight) -> Result<bool> {
        let key = (shape.clone(), path.clone());
        if let Some(&b) = self.members.lock().unwrap().get(&key) {
            return Ok(b);
        }
        let b = self.check_gls(&GlsPath::from_path(path, shape.clone()))?.is_some();
        self.members.lock().unwrap().insert(key, b);
        Ok(b)
    }

    /// `e_i` for imaginary `i` on `𝔹(λ)`: the raw operator, set to Null when
    /// the result leaves `𝔹(λ)`.
    pub fn cutoff_e_imag(&self, path: &Path<Weight>, shape: &Weight, i: usize) -> Result<Option<Path<Weight>>> {
        if self.datum.is_real(i) {
            return Err(Error::RealIndex(self.datum.label(i).to_string()));
        }
        let h = paths::h_function(&self.datum, path, i);
        let Some((lo, hi)) = paths::e_window_imag(&h, self.datum.diagonal(i)) else {
            return Ok(None);
        };
        if !lo.is_zero() || !path.breakpoints().contains(&hi) {
            return Ok(None);
        }
        let raised = paths::e_op_imag_raw(&self.datum, path, i)?.expect("window is non-empty");
        Ok(self.is_gls(&raised, shape)?.then_some(raised))
    }

    /// Kashiwara raising operator on `𝔹(λ)`.
    pub fn e(&self, path: &Path<Weight>, shape: &Weight, i: usize) -> Result<Option<Path<Weight>>> {
        if self.datum.is_real(i) {
            paths::e_op_real(&self.datum, path, i)
        } else {
            self.cutoff_e_imag(path, shape, i)
        }
    }

    /// Kashiwara lowering operator on `𝔹(λ)`.
    pub fn f(&self, path: &Path<Weight>, i: usize) -> Option<Path<Weight>> {
        paths::f_op(&self.datum, path, i)
    }

    /// Rebuilds an `a`-chain for `(r_i^{-1}μ, ν)` from one for `(μ, ν)` when
    /// the chain passes through a translate of the imaginary root `α_i`.
    pub fn rewrite_chain_imaginary(&self, shape: &Weight, chain: &AChain, i: usize) -> Result<AChain> {
        if self.datum.is_real(i) {
            return Err(Error::RealIndex(self.datum.label(i).to_string()));
        }
        let a = chain.a.ok_or_else(|| Error::PreconditionFalsified("chain carries no parameter".into()))?;
        let (mu, nu) = (&chain.top, &chain.bottom);
        let depth_i = mu.offset[i] - nu.offset[i];
        if !depth_i.is_positive() {
            return Err(Error::PreconditionFalsified(format!(
                "depth along {} of the chain is {depth_i}",
                self.datum.label(i)
            )));
        }
        let pairing = a * self.datum.eval(i, mu);
        let bound = Q::int(1 - self.datum.diagonal(i));
        if pairing != bound {
            return Err(Error::PreconditionFalsified(format!(
                "a·α∨(μ) = {pairing}, expected {bound}"
            )));
        }
        let raised = self.datum.reflect_inverse(i, mu);
        self.find_a_chain(shape, &raised, nu, Some(a))?.ok_or_else(|| {
            Error::PreconditionFalsified(format!("no {a}-chain for ({raised}, {nu})"))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(m: Vec<Vec<i64>>) -> PathModel {
        PathModel::new(BorcherdsCartanDatum::from_matrix(m).unwrap(), Bounds::default())
    }

    fn two_piece(mu: Weight, lam: Weight, at: Q) -> Path<Weight> {
        Path::new(vec![
            Segment { slope: mu, duration: at },
            Segment { slope: lam, duration: Q::ONE - at },
        ])
        .unwrap()
    }

    #[test]
    fn chains_in_rank_one() {
        let m = model(vec![vec![2]]);
        let lam = Weight::from_evals(&[1]);
        let r = m.datum().reflect(0, &lam);
        let c = m.find_a_chain(&lam, &r, &lam, Some(Q::ONE)).unwrap().unwrap();
        assert_eq!(c.steps.len(), 1);
        assert_eq!(c.steps[0].root, vec![1]);
        assert!(m.verify_chain(&lam, &c).unwrap());
        let refl = m.find_a_chain(&lam, &lam, &lam, Some(Q::new(1, 3))).unwrap().unwrap();
        assert!(refl.is_empty());
        assert_eq!(m.find_a_chain(&lam, &lam, &r, Some(Q::ONE)).unwrap(), None);
    }

    #[test]
    fn imaginary_chain_needs_exact_pairing() {
        let m = model(vec![vec![-2]]);
        for n in 1..4 {
            let lam = Weight::from_evals(&[n]);
            let low = m.datum().add_root(&lam, 0, -Q::int(n));
            let a = Q::new(1, n as i128);
            let c = m.find_a_chain(&lam, &low, &lam, Some(a)).unwrap().unwrap();
            assert_eq!(c.steps[0].pairing, Q::int(n));
            if n > 1 {
                assert_eq!(m.find_a_chain(&lam, &low, &lam, Some(Q::ONE)).unwrap(), None);
            }
        }
    }

    #[test]
    fn membership_in_rank_one() {
        let m = model(vec![vec![2]]);
        let lam = Weight::from_evals(&[2]);
        let r = m.datum().reflect(0, &lam);
        assert!(m.is_gls(&Path::straight(lam.clone()), &lam).unwrap());
        assert!(m.is_gls(&two_piece(r.clone(), lam.clone(), Q::new(1, 2)), &lam).unwrap());
        assert!(!m.is_gls(&two_piece(r, lam.clone(), Q::new(1, 3)), &lam).unwrap());
        let cert = m.check_gls(&GlsPath::straight(&lam)).unwrap().unwrap();
        assert_eq!(cert.chains.len(), 1);
    }

    #[test]
    fn repetitions_are_merged() {
        let lam = Weight::from_evals(&[2]);
        let g = GlsPath::new(
            vec![lam.clone(), lam.clone()],
            vec![Q::ZERO, Q::new(1, 2), Q::ONE],
            lam.clone(),
        )
        .unwrap();
        assert_eq!(g, GlsPath::straight(&lam));
    }

    #[test]
    fn cutoff_kills_the_straight_line() {
        let m = model(vec![vec![-2]]);
        for n in 1..5 {
            let lam = Weight::from_evals(&[n]);
            let p = Path::straight(lam.clone());
            assert_eq!(m.cutoff_e_imag(&p, &lam, 0).unwrap(), None);
            let f = m.f(&p, 0).unwrap();
            assert_eq!(m.cutoff_e_imag(&f, &lam, 0).unwrap(), Some(p));
        }
    }

    #[test]
    fn rewriting_an_imaginary_chain() {
        let m = model(vec![vec![-2]]);
        for n in 1..4 {
            let lam = Weight::from_evals(&[n]);
            let low = m.datum().add_root(&lam, 0, -Q::int(n));
            let c = m.find_a_chain(&lam, &low, &lam, Some(Q::new(1, n as i128))).unwrap().unwrap();
            assert!(m.rewrite_chain_imaginary(&lam, &c, 0).unwrap().is_empty());
        }
        let lam = Weight::from_evals(&[2]);
        let flat = m.find_a_chain(&lam, &lam, &lam, Some(Q::new(1, 2))).unwrap().unwrap();
        assert!(matches!(m.rewrite_chain_imaginary(&lam, &flat, 0), Err(Error::PreconditionFalsified(_))));
    }
}
