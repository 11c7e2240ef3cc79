//! Piecewise-linear paths with exact rational breakpoints and the root
//! operators acting on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::weight::Realization;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Segment<V> {
    pub slope: V,
    pub duration: Q,
}

/// A path `π: [0,1] → 𝔥*` with `π(0) = 0`, kept in canonical form: no empty
/// segments and no two consecutive segments with the same slope. Two paths
/// are equal as functions exactly when their canonical forms agree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path<V> {
    segments: Vec<Segment<V>>,
}

impl<V: Clone + Eq> Path<V> {
    pub fn new(segments: Vec<Segment<V>>) -> Result<Path<V>> {
        if segments.is_empty() {
            return Err(Error::Malformed("path needs at least one segment".into()));
        }
        if segments.iter().any(|s| s.duration.is_negative()) {
            return Err(Error::Malformed("negative segment duration".into()));
        }
        let total: Q = segments.iter().map(|s| s.duration).sum();
        if total != Q::ONE {
            return Err(Error::Malformed(format!("durations sum to {total}, not 1")));
        }
        Ok(Path::from_raw(segments))
    }

    pub(crate) fn from_raw(segments: Vec<Segment<V>>) -> Path<V> {
        let mut out: Vec<Segment<V>> = Vec::with_capacity(segments.len());
        for s in segments {
            if s.duration.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.slope == s.slope => last.duration += s.duration,
                _ => out.push(s),
            }
        }
        Path { segments: out }
    }

    /// The straight line `t ↦ tλ`.
    pub fn straight(slope: V) -> Path<V> {
        Path { segments: vec![Segment { slope, duration: Q::ONE }] }
    }

    pub fn segments(&self) -> &[Segment<V>] {
        &self.segments
    }

    pub fn slopes(&self) -> impl Iterator<Item = &V> {
        self.segments.iter().map(|s| &s.slope)
    }

    /// `0 = a_0 < a_1 < … < a_k = 1`.
    pub fn breakpoints(&self) -> Vec<Q> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        let mut t = Q::ZERO;
        out.push(t);
        for s in &self.segments {
            t += s.duration;
            out.push(t);
        }
        out
    }

    /// Cut segments so that every time in `cuts` is a breakpoint.
    fn cut_at(&self, cuts: &[Q]) -> Vec<Segment<V>> {
        let mut out = Vec::with_capacity(self.segments.len() + cuts.len());
        let mut t = Q::ZERO;
        for s in &self.segments {
            let end = t + s.duration;
            let mut start = t;
            for &c in cuts {
                if c > start && c < end {
                    out.push(Segment { slope: s.slope.clone(), duration: c - start });
                    start = c;
                }
            }
            out.push(Segment { slope: s.slope.clone(), duration: end - start });
            t = end;
        }
        out
    }

    /// Replace the slopes on `[lo, hi]` by `f(slope)`.
    fn map_window(&self, lo: Q, hi: Q, f: impl Fn(&V) -> V) -> Path<V> {
        let mut t = Q::ZERO;
        let segs = self
            .cut_at(&[lo, hi])
            .into_iter()
            .map(|s| {
                let start = t;
                t += s.duration;
                if start >= lo && t <= hi {
                    Segment { slope: f(&s.slope), duration: s.duration }
                } else {
                    s
                }
            })
            .collect();
        Path::from_raw(segs)
    }
}

pub fn evaluate<R: Realization>(r: &R, path: &Path<R::Vector>, t: Q) -> Result<R::Vector> {
    if t.is_negative() || t > Q::ONE {
        return Err(Error::OutOfRange(t.to_string()));
    }
    let mut acc = r.zero_vector();
    let mut start = Q::ZERO;
    for s in path.segments() {
        if t <= start {
            break;
        }
        let used = (t - start).min(s.duration);
        acc = r.axpy(&acc, used, &s.slope);
        start += s.duration;
    }
    Ok(acc)
}

/// `π(1)`.
pub fn endpoint<R: Realization>(r: &R, path: &Path<R::Vector>) -> R::Vector {
    path.segments()
        .iter()
        .fold(r.zero_vector(), |acc, s| r.axpy(&acc, s.duration, &s.slope))
}

/// The height function `H_i(t) = α_i∨(π(t))` in breakpoint form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HFunction {
    pub breakpoints: Vec<Q>,
    pub values: Vec<Q>,
}

impl HFunction {
    /// Minimum of the integers attained by `H`. Since `H(0) = 0` and `H` is
    /// continuous, every integer between the minimum and 0 is attained.
    pub fn m(&self) -> i64 {
        let min = self.values.iter().copied().fold(Q::ZERO, Q::min);
        min.ceil() as i64
    }

    pub fn end(&self) -> Q {
        *self.values.last().unwrap()
    }

    pub fn value_at(&self, t: Q) -> Q {
        for k in 0..self.breakpoints.len() - 1 {
            let (t0, t1) = (self.breakpoints[k], self.breakpoints[k + 1]);
            if t >= t0 && t <= t1 {
                let (h0, h1) = (self.values[k], self.values[k + 1]);
                return h0 + (h1 - h0) * (t - t0) / (t1 - t0);
            }
        }
        self.end()
    }

    /// Smallest `t ≥ from` with `H(t) = level`.
    pub fn first_hit(&self, level: Q, from: Q) -> Option<Q> {
        for k in 0..self.breakpoints.len() - 1 {
            let (t0, t1) = (self.breakpoints[k], self.breakpoints[k + 1]);
            if t1 < from {
                continue;
            }
            let start = t0.max(from);
            let h0 = self.value_at_segment(k, start);
            let h1 = self.values[k + 1];
            if h0 == level {
                return Some(start);
            }
            if (h0 < level && level <= h1) || (h0 > level && level >= h1) {
                return Some(start + (level - h0) / (h1 - h0) * (t1 - start));
            }
        }
        None
    }

    /// Largest `t ≤ upto` with `H(t) = level`.
    pub fn last_hit(&self, level: Q, upto: Q) -> Option<Q> {
        for k in (0..self.breakpoints.len() - 1).rev() {
            let (t0, t1) = (self.breakpoints[k], self.breakpoints[k + 1]);
            if t0 > upto {
                continue;
            }
            let stop = t1.min(upto);
            let h0 = self.values[k];
            let h1 = self.value_at_segment(k, stop);
            if h1 == level {
                return Some(stop);
            }
            if (h0 <= level && level < h1) || (h0 >= level && level > h1) {
                return Some(t0 + (level - h0) / (h1 - h0) * (stop - t0));
            }
        }
        None
    }

    /// Minimum of `H` on `[from, 1]`.
    pub fn min_from(&self, from: Q) -> Q {
        self.extreme_from(from, Q::min)
    }

    /// Maximum of `H` on `[from, 1]`.
    pub fn max_from(&self, from: Q) -> Q {
        self.extreme_from(from, Q::max)
    }

    /// Minimum of `H` over all of `[0, 1]`.
    pub fn min(&self) -> Q {
        self.min_from(Q::ZERO)
    }

    fn extreme_from(&self, from: Q, pick: fn(Q, Q) -> Q) -> Q {
        let mut best = self.value_at(from);
        for (t, h) in self.breakpoints.iter().zip(&self.values) {
            if *t > from {
                best = pick(best, *h);
            }
        }
        best
    }

    fn value_at_segment(&self, k: usize, t: Q) -> Q {
        let (t0, t1) = (self.breakpoints[k], self.breakpoints[k + 1]);
        let (h0, h1) = (self.values[k], self.values[k + 1]);
        h0 + (h1 - h0) * (t - t0) / (t1 - t0)
    }
}

pub fn h_function<R: Realization>(r: &R, path: &Path<R::Vector>, i: R::Index) -> HFunction {
    let mut breakpoints = Vec::with_capacity(path.segments().len() + 1);
    let mut values = Vec::with_capacity(path.segments().len() + 1);
    let (mut t, mut h) = (Q::ZERO, Q::ZERO);
    breakpoints.push(t);
    values.push(h);
    for s in path.segments() {
        t += s.duration;
        h += r.eval(i, &s.slope) * s.duration;
        breakpoints.push(t);
        values.push(h);
    }
    HFunction { breakpoints, values }
}

/// `m_i^π`: the minimum over integer values attained by `H_i^π`.
pub fn m_value<R: Realization>(r: &R, path: &Path<R::Vector>, i: R::Index) -> i64 {
    h_function(r, path, i).m()
}

/// The interval `[f_+, f_-]` on which `f_i` reflects, or `None` when `f_i π = 0`.
pub fn f_window(h: &HFunction) -> Option<(Q, Q)> {
    let m = Q::int(h.m());
    let plus = h.last_hit(m, Q::ONE).expect("H attains its integer minimum");
    if plus == Q::ONE {
        return None;
    }
    let minus = h.first_hit(m + Q::ONE, plus).expect("H(1) exceeds m");
    Some((plus, minus))
}

/// The interval `[e_-, e_+]` of the real raising operator.
pub fn e_window_real(h: &HFunction) -> Option<(Q, Q)> {
    let m = Q::int(h.m());
    let plus = h.first_hit(m, Q::ZERO).expect("H attains its integer minimum");
    if plus.is_zero() {
        return None;
    }
    let minus = h.last_hit(m + Q::ONE, plus).expect("H(0) = 0 > m");
    Some((minus, plus))
}

/// The interval `[e_-, e_+]` of the imaginary raising operator on all paths,
/// with the three vanishing clauses applied.
pub fn e_window_imag(h: &HFunction, a_ii: i64) -> Option<(Q, Q)> {
    let m = Q::int(h.m());
    let minus = h.last_hit(m, Q::ONE).expect("H attains its integer minimum");
    if minus == Q::ONE {
        return None;
    }
    let threshold = m + Q::int(1 - a_ii);
    if h.max_from(minus) < threshold {
        return None;
    }
    let plus = h.first_hit(threshold, minus)?;
    if h.min_from(plus) <= m - Q::int(a_ii) {
        return None;
    }
    Some((minus, plus))
}

/// Lowering operator `f_i`.
pub fn f_op<R: Realization>(r: &R, path: &Path<R::Vector>, i: R::Index) -> Option<Path<R::Vector>> {
    let h = h_function(r, path, i);
    let (lo, hi) = f_window(&h)?;
    Some(path.map_window(lo, hi, |v| r.reflect(i, v)))
}

/// Raising operator `e_i` for a real index.
pub fn e_op_real<R: Realization>(
    r: &R,
    path: &Path<R::Vector>,
    i: R::Index,
) -> Result<Option<Path<R::Vector>>> {
    if !r.is_real(i) {
        return Err(Error::ImaginaryIndex(format!("{i:?}")));
    }
    let h = h_function(r, path, i);
    Ok(e_window_real(&h).map(|(lo, hi)| path.map_window(lo, hi, |v| r.reflect(i, v))))
}

/// Raising operator `e_i` for an imaginary index, on all paths (no cutoff).
pub fn e_op_imag_raw<R: Realization>(
    r: &R,
    path: &Path<R::Vector>,
    i: R::Index,
) -> Result<Option<Path<R::Vector>>> {
    if r.is_real(i) {
        return Err(Error::RealIndex(format!("{i:?}")));
    }
    let h = h_function(r, path, i);
    Ok(e_window_imag(&h, r.diagonal(i))
        .map(|(lo, hi)| path.map_window(lo, hi, |v| r.reflect_inverse(i, v))))
}

/// `e_i` on paths: the real operator or the raw imaginary one.
pub fn e_op<R: Realization>(r: &R, path: &Path<R::Vector>, i: R::Index) -> Option<Path<R::Vector>> {
    if r.is_real(i) {
        e_op_real(r, path, i).unwrap()
    } else {
        e_op_imag_raw(r, path, i).unwrap()
    }
}

pub fn epsilon<R: Realization>(r: &R, path: &Path<R::Vector>, i: R::Index) -> i64 {
    if r.is_real(i) {
        -m_value(r, path, i)
    } else {
        0
    }
}

pub fn phi<R: Realization>(r: &R, path: &Path<R::Vector>, i: R::Index) -> i64 {
    let h = h_function(r, path, i);
    let end = h.end().to_integer().expect("path endpoint is integral");
    if r.is_real(i) {
        end - h.m()
    } else {
        end
    }
}

/// The function `ψ` with `(f_i π)(t) = π(t) - ψ(t) α_i`, as its values at the
/// given times; computed from `H_i^π` alone.
pub fn lowering_profile(h: &HFunction, times: &[Q]) -> Option<Vec<Q>> {
    let (lo, hi) = f_window(h)?;
    let m = Q::int(h.m());
    Some(
        times
            .iter()
            .map(|&t| {
                if t <= lo {
                    Q::ZERO
                } else if t >= hi {
                    Q::ONE
                } else {
                    h.value_at(t) - m
                }
            })
            .collect(),
    )
}

/// Concatenation `π_1 ⊗ ⋯ ⊗ π_n` as a single path.
pub fn concatenate<R: Realization>(r: &R, factors: &[Path<R::Vector>]) -> Path<R::Vector> {
    let n = Q::int(factors.len() as i64);
    let segs = factors
        .iter()
        .flat_map(|p| p.segments().iter())
        .map(|s| Segment { slope: r.scale(n, &s.slope), duration: s.duration / n })
        .collect();
    Path::from_raw(segs)
}

/// Inverse of [`concatenate`]: cut at `k/n` and rescale each piece.
pub fn split<R: Realization>(r: &R, path: &Path<R::Vector>, n: usize) -> Vec<Path<R::Vector>> {
    let nq = Q::int(n as i64);
    let cuts: Vec<Q> = (1..n).map(|k| Q::new(k as i128, n as i128)).collect();
    let mut pieces: Vec<Vec<Segment<R::Vector>>> = vec![Vec::new(); n];
    let mut t = Q::ZERO;
    for s in path.cut_at(&cuts) {
        let k = ((t * nq).floor() as usize).min(n - 1);
        t += s.duration;
        pieces[k].push(Segment { slope: r.scale(nq.recip(), &s.slope), duration: s.duration * nq });
    }
    pieces.into_iter().map(Path::from_raw).collect()
}
