//! The generalized Weyl monoid `𝒲` and its shadow Coxeter group `𝔚`.
//!
//! A monoid word lifts to an ordered word over lifted indices: real letters
//! get level 1, and the occurrences of an imaginary letter get levels
//! `1, 2, …` counted from the right. Equality and length in `𝒲` are read off
//! the lifted word in `𝔚`.
//!
//! `𝔚` is handled through a Kac–Moody style realization: its Coxeter matrix
//! is realized by an integer matrix whose pairwise products `0, 1, 2, 3, ≥4`
//! give orders `2, 3, 4, 6, ∞`. An element `x` is recorded by `xρ`, with `ρ`
//! pairing to 1 with every simple coroot; `s` is a left descent of `x`
//! exactly when `α_s∨(xρ) < 0`.
//!
//! Words are slices of indices, leftmost letter applied last.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Mutex;

use serde::Serialize;

use crate::cartan_datum::{BorcherdsCartanDatum, LiftedIndex};
use crate::error::{Error, Result};
use crate::gls::roots::{RootEntry, RootTable};
use crate::weight::{Realization, Weight};

/// Levels for a monoid word: 1 for real letters, and for each imaginary
/// letter the occurrences numbered from the right.
pub fn to_ordered_index(datum: &BorcherdsCartanDatum, word: &[usize]) -> Vec<LiftedIndex> {
    let mut seen: HashMap<usize, u32> = HashMap::new();
    let mut out: Vec<LiftedIndex> = word
        .iter()
        .rev()
        .map(|&i| {
            if datum.is_real(i) {
                LiftedIndex::new(i, 1)
            } else {
                let c = seen.entry(i).or_insert(0);
                *c += 1;
                LiftedIndex::new(i, *c)
            }
        })
        .collect();
    out.reverse();
    out
}

/// Order of `s_p s_q` in `𝔚`; `None` is infinite order.
pub fn coxeter_order(datum: &BorcherdsCartanDatum, p: LiftedIndex, q: LiftedIndex) -> Option<u32> {
    if p == q {
        return Some(1);
    }
    let (i, j) = (p.base, q.base);
    if datum.is_real(i) && datum.is_real(j) {
        match datum.entry(i, j) * datum.entry(j, i) {
            0 => Some(2),
            1 => Some(3),
            2 => Some(4),
            3 => Some(6),
            _ => None,
        }
    } else if datum.entry(i, j) == 0 {
        Some(2)
    } else {
        None
    }
}

/// The Coxeter subgroup of `𝔚` on finitely many lifted indices.
struct Shadow {
    letters: Vec<LiftedIndex>,
    cartan: Vec<Vec<i128>>,
}

impl Shadow {
    fn new(datum: &BorcherdsCartanDatum, letters: BTreeSet<LiftedIndex>) -> Shadow {
        let letters: Vec<LiftedIndex> = letters.into_iter().collect();
        let cartan = letters
            .iter()
            .map(|&p| {
                letters
                    .iter()
                    .map(|&q| {
                        if p == q {
                            return 2;
                        }
                        let both_real = datum.is_real(p.base) && datum.is_real(q.base);
                        match coxeter_order(datum, p, q) {
                            Some(2) => 0,
                            _ if both_real => datum.entry(p.base, q.base) as i128,
                            _ => -2,
                        }
                    })
                    .collect()
            })
            .collect();
        Shadow { letters, cartan }
    }

    fn pos(&self, p: LiftedIndex) -> usize {
        self.letters.binary_search(&p).expect("letter in alphabet")
    }

    fn eval(&self, s: usize, c: &[i128]) -> i128 {
        1 - c.iter().zip(&self.cartan[s]).map(|(x, a)| x * a).sum::<i128>()
    }

    fn apply(&self, s: usize, c: &mut [i128]) {
        c[s] += self.eval(s, c);
    }

    /// `xρ` for the element of the word, as root offsets.
    fn point(&self, word: &[LiftedIndex]) -> Vec<i128> {
        let mut c = vec![0; self.letters.len()];
        for &p in word.iter().rev() {
            self.apply(self.pos(p), &mut c);
        }
        c
    }

    fn descents<'a>(&'a self, c: &'a [i128]) -> impl Iterator<Item = usize> + 'a {
        (0..self.letters.len()).filter(move |&s| self.eval(s, c) < 0)
    }

    /// Lexicographically least reduced word, by greedy smallest left descent.
    fn lexmin_word(&self, mut c: Vec<i128>) -> Vec<LiftedIndex> {
        let mut out = Vec::new();
        loop {
            let Some(s) = self.descents(&c).next() else { break };
            out.push(self.letters[s]);
            self.apply(s, &mut c);
        }
        out
    }
}

/// A dominant reduced expression `w_k r_{i_k} ⋯ w_1 r_{i_1} w_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominantExpression {
    pub word: Vec<usize>,
    /// `(ℓ(w_0), …, ℓ(w_k))`
    pub block_lengths: Vec<usize>,
    /// Imaginary letters `i_1, …, i_k` in order of application.
    pub imaginary: Vec<usize>,
    pub dominant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizerReport {
    pub fixes: bool,
    /// A reduced expression using only letters `i` with `α_i∨(λ) = 0`.
    pub witness: Option<Vec<usize>>,
}

/// The monoid of a datum with memoized normal forms.
pub struct WeylMonoid {
    datum: BorcherdsCartanDatum,
    cap: usize,
    imaginary_involutions: bool,
    canonical: Mutex<HashMap<Vec<LiftedIndex>, Vec<LiftedIndex>>>,
}

impl WeylMonoid {
    pub fn new(datum: BorcherdsCartanDatum, enumeration_cap: usize) -> WeylMonoid {
        WeylMonoid {
            datum,
            cap: enumeration_cap,
            imaginary_involutions: false,
            canonical: Mutex::new(HashMap::new()),
        }
    }

    /// A deliberately wrong monoid in which imaginary generators square to
    /// the identity. Used to check that the property suites catch it.
    pub fn with_involutive_imaginaries(mut self) -> WeylMonoid {
        self.imaginary_involutions = true;
        self
    }

    pub fn datum(&self) -> &BorcherdsCartanDatum {
        &self.datum
    }

    pub fn lift(&self, word: &[usize]) -> Vec<LiftedIndex> {
        if self.imaginary_involutions {
            word.iter().map(|&i| LiftedIndex::new(i, 1)).collect()
        } else {
            to_ordered_index(&self.datum, word)
        }
    }

    fn shadow_of(&self, lifted: &[LiftedIndex]) -> Shadow {
        Shadow::new(&self.datum, lifted.iter().copied().collect())
    }

    /// Canonical reduced word in `𝔚` of an arbitrary lifted word.
    pub fn reduce_lifted(&self, lifted: &[LiftedIndex]) -> Vec<LiftedIndex> {
        if let Some(w) = self.canonical.lock().unwrap().get(lifted) {
            return w.clone();
        }
        let shadow = self.shadow_of(lifted);
        let w = shadow.lexmin_word(shadow.point(lifted));
        self.canonical.lock().unwrap().insert(lifted.to_vec(), w.clone());
        w
    }

    /// Equality key of the monoid element.
    pub fn key(&self, word: &[usize]) -> Vec<LiftedIndex> {
        self.reduce_lifted(&self.lift(word))
    }

    pub fn length(&self, word: &[usize]) -> usize {
        self.key(word).len()
    }

    pub fn equal(&self, u: &[usize], w: &[usize]) -> bool {
        self.key(u) == self.key(w)
    }

    /// All reduced words in `𝔚` of the element of `lifted`.
    pub fn reduced_lifted_words(&self, lifted: &[LiftedIndex]) -> Result<Vec<Vec<LiftedIndex>>> {
        let shadow = self.shadow_of(lifted);
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.all_words(&shadow, shadow.point(lifted), &mut prefix, &mut out, None)?;
        Ok(out.into_iter().map(|w| w.into_iter().map(|s| shadow.letters[s]).collect()).collect())
    }

    /// Reduced expressions in `𝒲` of the element of `word`, ascending.
    pub fn reduced_words(&self, word: &[usize]) -> Result<Vec<Vec<usize>>> {
        let lifted = self.lift(word);
        let shadow = self.shadow_of(&lifted);
        let mut counts = self.imaginary_counts(&lifted);
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.all_words(&shadow, shadow.point(&lifted), &mut prefix, &mut out, Some(&mut counts))?;
        Ok(out
            .into_iter()
            .map(|w| w.into_iter().map(|s| shadow.letters[s].base).collect())
            .collect())
    }

    /// Shortest word for the element, least in lexicographic order.
    pub fn normal_form(&self, word: &[usize]) -> Vec<usize> {
        let lifted = self.lift(word);
        let shadow = self.shadow_of(&lifted);
        let mut counts = self.imaginary_counts(&lifted);
        let mut dead = HashSet::new();
        let mut prefix = Vec::new();
        let found = self.first_ordered(&shadow, shadow.point(&lifted), &mut counts, &mut prefix, &mut dead);
        assert!(found, "every monoid element has an ordered reduced word");
        prefix.into_iter().map(|s| shadow.letters[s].base).collect()
    }

    pub fn product(&self, u: &[usize], w: &[usize]) -> Vec<usize> {
        let mut word = u.to_vec();
        word.extend_from_slice(w);
        self.normal_form(&word)
    }

    fn imaginary_counts(&self, lifted: &[LiftedIndex]) -> HashMap<usize, u32> {
        let mut counts = HashMap::new();
        for p in lifted {
            if !self.datum.is_real(p.base) && !self.imaginary_involutions {
                let c = counts.entry(p.base).or_insert(0);
                *c = (*c).max(p.level);
            }
        }
        counts
    }

    fn admissible(&self, p: LiftedIndex, counts: &HashMap<usize, u32>) -> bool {
        self.datum.is_real(p.base) || self.imaginary_involutions || counts.get(&p.base) == Some(&p.level)
    }

    fn first_ordered(
        &self,
        shadow: &Shadow,
        c: Vec<i128>,
        counts: &mut HashMap<usize, u32>,
        prefix: &mut Vec<usize>,
        dead: &mut HashSet<Vec<i128>>,
    ) -> bool {
        let descents: Vec<usize> = shadow.descents(&c).collect();
        if descents.is_empty() {
            return true;
        }
        if dead.contains(&c) {
            return false;
        }
        for s in descents {
            let p = shadow.letters[s];
            if !self.admissible(p, counts) {
                continue;
            }
            let mut next = c.clone();
            shadow.apply(s, &mut next);
            self.bump(p, counts, -1);
            prefix.push(s);
            if self.first_ordered(shadow, next, counts, prefix, dead) {
                return true;
            }
            prefix.pop();
            self.bump(p, counts, 1);
        }
        dead.insert(c);
        false
    }

    fn bump(&self, p: LiftedIndex, counts: &mut HashMap<usize, u32>, by: i32) {
        if let Some(c) = counts.get_mut(&p.base) {
            if !self.datum.is_real(p.base) && !self.imaginary_involutions {
                *c = (*c as i32 + by) as u32;
            }
        }
    }

    fn all_words(
        &self,
        shadow: &Shadow,
        c: Vec<i128>,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        mut counts: Option<&mut HashMap<usize, u32>>,
    ) -> Result<()> {
        let descents: Vec<usize> = shadow.descents(&c).collect();
        if descents.is_empty() {
            if out.len() >= self.cap {
                return Err(Error::EnumerationBound { cap: self.cap });
            }
            out.push(prefix.clone());
            return Ok(());
        }
        for s in descents {
            let p = shadow.letters[s];
            if let Some(counts) = counts.as_deref() {
                if !self.admissible(p, counts) {
                    continue;
                }
            }
            let mut next = c.clone();
            shadow.apply(s, &mut next);
            if let Some(counts) = counts.as_deref_mut() {
                self.bump(p, counts, -1);
            }
            prefix.push(s);
            self.all_words(shadow, next, prefix, out, counts.as_deref_mut())?;
            prefix.pop();
            if let Some(counts) = counts.as_deref_mut() {
                self.bump(p, counts, 1);
            }
        }
        Ok(())
    }

    /// `wμ` under the representation on weights.
    pub fn act(&self, word: &[usize], mu: &Weight) -> Weight {
        word.iter().rev().fold(mu.clone(), |acc, &i| self.datum.reflect(i, &acc))
    }

    /// `r_i^{-1}μ` for imaginary `i`.
    pub fn act_inverse_imag(&self, i: usize, mu: &Weight) -> Result<Weight> {
        if self.datum.is_real(i) {
            return Err(Error::RealIndex(self.datum.label(i).to_string()));
        }
        Ok(self.datum.reflect_inverse(i, mu))
    }

    /// Normal form of `r_β w`.
    pub fn reflect_by(&self, root: &RootEntry, word: &[usize]) -> Vec<usize> {
        self.product(&root.reflection_word(), word)
    }

    /// `u ≤ w` in the Bruhat order: `w` is reached from `u` by left
    /// multiplications by reflections that raise the length.
    pub fn bruhat_leq(&self, u: &[usize], w: &[usize], table: &RootTable) -> Result<bool> {
        let target = self.key(w);
        let top = target.len();
        let start = self.normal_form(u);
        let mut seen = HashSet::from([self.key(&start)]);
        if seen.contains(&target) {
            return Ok(true);
        }
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let lx = self.length(&x);
            for root in &table.entries {
                let y = self.reflect_by(root, &x);
                let ky = self.key(&y);
                if ky.len() <= lx || ky.len() > top || !seen.insert(ky.clone()) {
                    continue;
                }
                if ky == target {
                    return Ok(true);
                }
                if seen.len() > self.cap {
                    return Err(Error::EnumerationBound { cap: self.cap });
                }
                queue.push_back(y);
            }
        }
        if table.closed {
            Ok(false)
        } else {
            Err(Error::TableTooSmall { bound: table.height_bound, needed: table.height_bound + 1 })
        }
    }

    /// Positions `s` (1-based, counted from the right as in `r_{i_k} ⋯ r_{i_1}`)
    /// of real letters whose deletion yields `r_β w`.
    pub fn exchange_positions(&self, word: &[usize], root: &RootEntry) -> Result<Vec<usize>> {
        if !root.real {
            return Err(Error::ImaginaryIndex(format!("{:?}", root.coeffs)));
        }
        let target = self.key(&root.reflection_word().into_iter().chain(word.iter().copied()).collect::<Vec<_>>());
        if target.len() >= self.length(word) {
            return Err(Error::NotShortening);
        }
        let k = word.len();
        Ok((0..k)
            .filter(|&x| self.datum.is_real(word[x]))
            .filter(|&x| {
                let mut del = word.to_vec();
                del.remove(x);
                self.key(&del) == target
            })
            .map(|x| k - x)
            .collect())
    }

    /// The unique deletion position of the strong exchange property for a
    /// reduced word, if there is exactly one.
    pub fn exchange_check_real(&self, word: &[usize], root: &RootEntry) -> Result<Option<usize>> {
        let pos = self.exchange_positions(word, root)?;
        Ok((pos.len() == 1).then(|| pos[0]))
    }

    /// Deletes the leftmost occurrence of the imaginary index of `root` from
    /// `v`, and checks that `r_β` maps the result back to `v`.
    pub fn exchange_check_imag(&self, v: &[usize], root: &RootEntry) -> Result<Vec<usize>> {
        if root.real {
            return Err(Error::RealIndex(format!("{:?}", root.coeffs)));
        }
        let i = root.simple;
        let x = v
            .iter()
            .position(|&l| l == i)
            .ok_or_else(|| Error::NoOccurrence(self.datum.label(i).to_string()))?;
        let mut pred = v.to_vec();
        pred.remove(x);
        let back = self.reflect_by(root, &pred);
        if !self.equal(&back, v) || self.length(&back) <= self.length(&pred) {
            return Err(Error::PreconditionFalsified(format!(
                "{} is not r_β applied to a shorter element",
                self.format(v)
            )));
        }
        Ok(self.normal_form(&pred))
    }

    /// A reduced expression whose real block lengths, read from the right,
    /// are lexicographically least; its dominance condition is checked on
    /// the fundamental weights.
    pub fn dominant_reduced_expression(&self, word: &[usize]) -> Result<DominantExpression> {
        let best = self
            .reduced_words(word)?
            .into_iter()
            .map(|w| (self.blocks(&w).0, w))
            .min()
            .expect("at least one reduced word");
        let (block_lengths, imaginary) = self.blocks(&best.1);
        let dominant = self.is_dominant_expression(&best.1);
        Ok(DominantExpression { word: best.1, block_lengths, imaginary, dominant })
    }

    fn blocks(&self, word: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut lengths = vec![0];
        let mut imaginary = Vec::new();
        for &i in word.iter().rev() {
            if self.datum.is_real(i) {
                *lengths.last_mut().unwrap() += 1;
            } else {
                imaginary.push(i);
                lengths.push(0);
            }
        }
        (lengths, imaginary)
    }

    /// `r_{i_s} w_{s-1} ⋯ w_0 (P⁺) ⊂ P⁺` for every imaginary letter. Weights
    /// with all coroot evaluations zero are fixed by every generator, so the
    /// inclusion holds once it holds on the fundamental weights.
    pub fn is_dominant_expression(&self, word: &[usize]) -> bool {
        let n = self.datum.rank();
        (0..word.len()).filter(|&x| !self.datum.is_real(word[x])).all(|x| {
            (0..n).all(|k| self.act(&word[x..], &Weight::fundamental(n, k)).is_dominant(&self.datum))
        })
    }

    pub fn stabilizer_check(&self, word: &[usize], lambda: &Weight) -> Result<StabilizerReport> {
        let fixes = self.act(word, lambda) == *lambda;
        let witness = if fixes {
            self.reduced_words(word)?
                .into_iter()
                .find(|w| w.iter().all(|&i| self.datum.eval(i, lambda).is_zero()))
        } else {
            None
        };
        Ok(StabilizerReport { fixes, witness })
    }

    pub fn format(&self, word: &[usize]) -> String {
        let labels: Vec<&str> = word.iter().map(|&i| self.datum.label(i)).collect();
        format!("({})", labels.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(m: Vec<Vec<i64>>) -> BorcherdsCartanDatum {
        BorcherdsCartanDatum::from_matrix(m).unwrap()
    }

    fn lifted(pairs: &[(usize, u32)]) -> Vec<LiftedIndex> {
        pairs.iter().map(|&(b, l)| LiftedIndex::new(b, l)).collect()
    }

    #[test]
    fn ordered_index_of_the_twelve_letter_word() {
        let d = datum(vec![vec![2, -1, -1], vec![-1, -2, -1], vec![-1, -1, -2]]);
        let word: Vec<usize> = [3, 1, 3, 3, 1, 2, 3, 1, 3, 2, 1, 2].iter().map(|x| x - 1).collect();
        let expect = lifted(&[
            (2, 5), (0, 1), (2, 4), (2, 3), (0, 1), (1, 3), (2, 2), (0, 1), (2, 1), (1, 2), (0, 1), (1, 1),
        ]);
        assert_eq!(to_ordered_index(&d, &word), expect);
        assert!(to_ordered_index(&d, &[]).is_empty());
    }

    #[test]
    fn nil_and_braid_moves() {
        let a2 = WeylMonoid::new(datum(vec![vec![2, -1], vec![-1, 2]]), 1000);
        assert!(a2.normal_form(&[0, 0]).is_empty());
        assert_eq!(a2.normal_form(&[1, 0, 1]), vec![0, 1, 0]);
        assert_eq!(a2.length(&[0, 1, 0, 1]), 2);
        assert_eq!(a2.reduced_words(&[0, 1, 0]).unwrap().len(), 2);
    }

    #[test]
    fn imaginary_letters_do_not_cancel() {
        let m = WeylMonoid::new(datum(vec![vec![2, 0], vec![0, -2]]), 1000);
        assert_eq!(m.normal_form(&[1, 1]), vec![1, 1]);
        assert_eq!(m.length(&[1, 0, 1]), 3);
        assert_eq!(m.normal_form(&[1, 0, 1]), vec![0, 1, 1]);
        assert!(m.equal(&[1, 0, 1], &[1, 1, 0]));
        let bad = WeylMonoid::new(datum(vec![vec![2, 0], vec![0, -2]]), 1000).with_involutive_imaginaries();
        assert!(bad.normal_form(&[1, 1]).is_empty());
    }

    #[test]
    fn coxeter_orders() {
        let b2 = datum(vec![vec![2, -1], vec![-2, 2]]);
        assert_eq!(coxeter_order(&b2, LiftedIndex::new(0, 1), LiftedIndex::new(1, 1)), Some(4));
        let g = datum(vec![vec![2, -1], vec![-2, -4]]);
        assert_eq!(coxeter_order(&g, LiftedIndex::new(1, 1), LiftedIndex::new(1, 2)), None);
        assert_eq!(coxeter_order(&g, LiftedIndex::new(0, 1), LiftedIndex::new(1, 3)), None);
        let z = datum(vec![vec![0]]);
        assert_eq!(coxeter_order(&z, LiftedIndex::new(0, 1), LiftedIndex::new(0, 2)), Some(2));
    }

    #[test]
    fn action_and_inverse() {
        let m = WeylMonoid::new(datum(vec![vec![-2]]), 100);
        let lam = Weight::from_evals(&[3]);
        let r = m.act(&[0], &lam);
        assert_eq!(r, m.datum().add_root(&lam, 0, crate::Q::int(-3)));
        assert_eq!(m.act_inverse_imag(0, &r).unwrap(), lam);
    }

    #[test]
    fn bruhat_examples() {
        let a2 = datum(vec![vec![2, -1], vec![-1, 2]]);
        let t = RootTable::build(&a2, 4);
        let m = WeylMonoid::new(a2, 1000);
        assert!(m.bruhat_leq(&[], &[0, 1, 0], &t).unwrap());
        assert!(!m.bruhat_leq(&[0], &[1], &t).unwrap());
        assert!(m.bruhat_leq(&[1], &[0, 1], &t).unwrap());
        let g = datum(vec![vec![2, -1], vec![-2, -4]]);
        let t = RootTable::build(&g, 4);
        let m = WeylMonoid::new(g, 1000);
        assert!(m.bruhat_leq(&[0], &[1, 0], &t).unwrap());
    }

    #[test]
    fn exchange_properties() {
        let a2 = datum(vec![vec![2, -1], vec![-1, 2]]);
        let t = RootTable::build(&a2, 4);
        let m = WeylMonoid::new(a2, 1000);
        let high = t.find(&[1, 1]).unwrap();
        assert_eq!(m.exchange_check_real(&[0, 1, 0], high).unwrap(), Some(2));
        let a1 = t.find(&[1, 0]).unwrap();
        assert_eq!(m.exchange_check_real(&[0], a1).unwrap(), Some(1));
        assert_eq!(m.exchange_check_real(&[1], a1), Err(Error::NotShortening));

        let g = datum(vec![vec![2, -1], vec![-2, -4]]);
        let t = RootTable::build(&g, 4);
        let m = WeylMonoid::new(g, 1000);
        assert_eq!(m.exchange_check_real(&[1, 0], t.find(&[1, 0]).unwrap()), Err(Error::NotShortening));
        let c = datum(vec![vec![2, 0], vec![0, -2]]);
        let tc = RootTable::build(&c, 4);
        let mc = WeylMonoid::new(c, 1000);
        assert_eq!(mc.exchange_check_real(&[1, 0], tc.find(&[1, 0]).unwrap()).unwrap(), Some(1));
        let a2i = t.find(&[0, 1]).unwrap();
        assert_eq!(m.exchange_check_imag(&[1, 0], a2i).unwrap(), vec![0]);
        assert_eq!(m.exchange_check_imag(&[1, 1], a2i).unwrap(), vec![1]);
        assert!(matches!(m.exchange_check_imag(&[0], a2i), Err(Error::NoOccurrence(_))));
    }

    #[test]
    fn dominant_expressions_and_stabilizers() {
        let g = datum(vec![vec![2, 0], vec![0, -2]]);
        let m = WeylMonoid::new(g, 1000);
        let e = m.dominant_reduced_expression(&[1, 0]).unwrap();
        assert_eq!(e.block_lengths, vec![0, 1]);
        assert_eq!(e.word, vec![0, 1]);
        assert!(e.dominant);
        assert!(m.dominant_reduced_expression(&[1]).unwrap().dominant);

        let a2 = WeylMonoid::new(datum(vec![vec![2, -1], vec![-1, 2]]), 1000);
        let w1 = Weight::from_evals(&[1, 0]);
        let s = a2.stabilizer_check(&[1], &w1).unwrap();
        assert!(s.fixes && s.witness == Some(vec![1]));
        assert!(!a2.stabilizer_check(&[0], &w1).unwrap().fixes);
        let s = a2.stabilizer_check(&[0, 1, 0, 1, 0], &w1).unwrap();
        assert!(s.fixes);
        assert_eq!(s.witness, Some(vec![1]));
    }
}
