//! Seeded property suites over the operators, the monoid, the embedding and
//! the decomposition rules. Reports are plain data and byte-identical for
//! identical inputs.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartan_datum::BorcherdsCartanDatum;
use crate::crystal::{self, GenerateOptions};
use crate::error::{Error, Result};
use crate::gls::{GlsPath, PathModel};
use crate::lift_embed::{self, LiftedDatum};
use crate::paths::{self, Path};
use crate::rational::Q;
use crate::weight::{Realization, Weight};
use crate::weyl_monoid::WeylMonoid;

const KEPT_FAILURES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Operators,
    Monoid,
    Embedding,
    Decomposition,
}

impl std::str::FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<SuiteName> {
        match s {
            "operators" => Ok(SuiteName::Operators),
            "monoid" => Ok(SuiteName::Monoid),
            "embedding" => Ok(SuiteName::Embedding),
            "decomposition" => Ok(SuiteName::Decomposition),
            _ => Err(Error::Parse(format!("unknown suite {s}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random paths, words or pairs drawn.
    pub samples: usize,
    /// Longest random operator or monoid word.
    pub max_len: usize,
    /// Truncation depth of generated crystals.
    pub depth: usize,
    /// Run the monoid suite against a monoid with a wrong relation.
    pub inject_bug: bool,
}

impl SuiteConfig {
    pub fn defaults(name: SuiteName, seed: u64) -> SuiteConfig {
        let (samples, max_len, depth) = match name {
            SuiteName::Operators => (3400, 8, 0),
            SuiteName::Monoid => (200, 6, 0),
            SuiteName::Embedding => (1000, 10, 6),
            SuiteName::Decomposition => (3, 0, 4),
        };
        SuiteConfig { seed, samples, max_len, depth, inject_bug: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub datum: Vec<Vec<i64>>,
    pub config: SuiteConfig,
    /// Number of successful checks per property.
    pub checks: BTreeMap<String, u64>,
    pub failure_count: usize,
    /// The first few counterexamples.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: SuiteName, datum: &BorcherdsCartanDatum, config: SuiteConfig) -> SuiteReport {
        SuiteReport {
            suite,
            datum: datum.matrix().to_vec(),
            config,
            checks: BTreeMap::new(),
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn count(&self, property: &str) -> u64 {
        self.checks.get(property).copied().unwrap_or(0)
    }

    fn check(&mut self, property: &str, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            *self.checks.entry(property.to_string()).or_insert(0) += 1;
        } else {
            self.fail(property, detail());
        }
    }

    fn fail(&mut self, property: &str, detail: String) {
        self.failure_count += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(format!("{property}: {detail}"));
        }
    }

    /// Records a search error: bound overruns are failures too, since the
    /// suites choose sizes that fit the default bounds.
    fn error(&mut self, property: &str, e: Error) {
        self.fail(property, e.to_string());
    }
}

pub fn run(name: SuiteName, model: &PathModel, config: SuiteConfig) -> SuiteReport {
    match name {
        SuiteName::Operators => operators(model, config),
        SuiteName::Monoid => monoid(model, config),
        SuiteName::Embedding => embedding(model, config),
        SuiteName::Decomposition => decomposition(model, config),
    }
}

/// A random dominant weight with coroot evaluations in `0..=2`, not all zero.
pub fn random_shape(rng: &mut ChaCha8Rng, rank: usize) -> Weight {
    loop {
        let evals: Vec<i64> = (0..rank).map(|_| rng.gen_range(0..=2)).collect();
        if evals.iter().any(|&e| e > 0) {
            return Weight::from_evals(&evals);
        }
    }
}

/// Applies up to `steps` random lowering operators to `π_λ`.
pub fn random_path(datum: &BorcherdsCartanDatum, rng: &mut ChaCha8Rng, shape: &Weight, steps: usize) -> (Vec<usize>, Path<Weight>) {
    let mut p = Path::straight(shape.clone());
    let mut applied = Vec::new();
    for _ in 0..steps {
        let options: Vec<(usize, Path<Weight>)> =
            (0..datum.rank()).filter_map(|i| paths::f_op(datum, &p, i).map(|q| (i, q))).collect();
        let Some((i, q)) = options.choose(rng).cloned() else { break };
        applied.insert(0, i);
        p = q;
    }
    (applied, p)
}

fn segment_direction_ending_at(path: &GlsPath, t: Q) -> Option<&Weight> {
    path.breaks.iter().skip(1).position(|&b| b == t).map(|k| &path.weights[k])
}

pub fn operators(model: &PathModel, config: SuiteConfig) -> SuiteReport {
    let datum = model.datum();
    let mut report = SuiteReport::new(SuiteName::Operators, datum, config);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.samples {
        let shape = random_shape(&mut rng, datum.rank());
        let steps = rng.gen_range(0..=config.max_len);
        let (word, pi) = random_path(datum, &mut rng, &shape, steps);
        let wt = paths::endpoint(datum, &pi);
        let show = || format!("shape {shape}, word {word:?}");
        match model.is_gls(&pi, &shape) {
            Ok(b) => report.check("membership", b, show),
            Err(e) => report.error("membership", e),
        }
        let gls = GlsPath::from_path(&pi, shape.clone());
        for i in 0..datum.rank() {
            let real = datum.is_real(i);
            let eval = datum.eval(i, &wt);
            let diff = paths::phi(datum, &pi, i) - paths::epsilon(datum, &pi, i);
            report.check("phi_minus_epsilon", Q::int(diff) == eval, || format!("{}, index {i}", show()));

            if let Some(f) = paths::f_op(datum, &pi, i) {
                let fw = paths::endpoint(datum, &f);
                report.check("wt_shift_f", fw == datum.add_root(&wt, i, -Q::ONE), || format!("{}, f_{i}", show()));
                match model.is_gls(&f, &shape) {
                    Ok(b) => report.check("stability_f", b, || format!("{}, f_{i}", show())),
                    Err(e) => report.error("stability_f", e),
                }
                match model.e(&f, &shape, i) {
                    Ok(back) => report.check("e_after_f", back.as_ref() == Some(&pi), || format!("{}, index {i}", show())),
                    Err(e) => report.error("e_after_f", e),
                }
                if !real {
                    let h = paths::h_function(datum, &pi, i);
                    let (plus, minus) = paths::f_window(&h).expect("f is defined");
                    let level = gls
                        .weights
                        .iter()
                        .zip(&gls.breaks)
                        .filter(|(_, &start)| start < minus)
                        .all(|(w, _)| datum.eval(i, w) * minus == Q::ONE);
                    report.check("shape_f_imaginary", plus.is_zero() && level, || format!("{}, f_{i}", show()));
                }
            }

            let raised = match model.e(&pi, &shape, i) {
                Ok(r) => r,
                Err(e) => {
                    report.error("e", e);
                    continue;
                }
            };
            if let Some(e) = &raised {
                let ew = paths::endpoint(datum, e);
                report.check("wt_shift_e", ew == datum.add_root(&wt, i, Q::ONE), || format!("{}, e_{i}", show()));
                match model.is_gls(e, &shape) {
                    Ok(b) => report.check("stability_e", b, || format!("{}, e_{i}", show())),
                    Err(err) => report.error("stability_e", err),
                }
                report.check("f_after_e", paths::f_op(datum, e, i).as_ref() == Some(&pi), || {
                    format!("{}, index {i}", show())
                });
                if !real {
                    let h = paths::h_function(datum, &pi, i);
                    let (minus, plus) = paths::e_window_imag(&h, datum.diagonal(i)).expect("e is defined");
                    let ok = minus.is_zero()
                        && segment_direction_ending_at(&gls, plus)
                            .is_some_and(|w| plus * datum.eval(i, w) == Q::int(1 - datum.diagonal(i)));
                    report.check("shape_e_imaginary", ok, || format!("{}, e_{i}", show()));
                }
            }
            if real {
                let mut n = 0;
                let mut cur = pi.clone();
                while let Some(next) = paths::e_op_real(datum, &cur, i).expect("real index") {
                    cur = next;
                    n += 1;
                }
                report.check("epsilon_by_iteration", n == paths::epsilon(datum, &pi, i), || {
                    format!("{}, index {i}", show())
                });
                let mut n = 0;
                let mut cur = pi.clone();
                while let Some(next) = paths::f_op(datum, &cur, i) {
                    cur = next;
                    n += 1;
                }
                report.check("phi_by_iteration", n == paths::phi(datum, &pi, i), || format!("{}, index {i}", show()));
            }
        }
    }
    report
}

/// All words of length at most `max_len`, shortest first.
pub fn all_words(rank: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..rank {
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn imaginary_counts(datum: &BorcherdsCartanDatum, word: &[usize]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &i in word.iter().filter(|&&i| !datum.is_real(i)) {
        *m.entry(i).or_insert(0) += 1;
    }
    m
}

pub fn monoid(model: &PathModel, config: SuiteConfig) -> SuiteReport {
    let datum = model.datum();
    let rank = datum.rank();
    let mut report = SuiteReport::new(SuiteName::Monoid, datum, config);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut w = WeylMonoid::new(datum.clone(), model.bounds().enumeration);
    if config.inject_bug {
        w = w.with_involutive_imaginaries();
    }
    let probes: Vec<Weight> = std::iter::once(Weight::from_evals(&vec![1; rank]))
        .chain((0..2).map(|_| {
            let evals: Vec<i64> = (0..rank).map(|_| rng.gen_range(-3..=3)).collect();
            Weight::from_evals(&evals)
        }))
        .collect();

    let words = all_words(rank, config.max_len);
    for word in &words {
        let nf = w.normal_form(word);
        let show = || w.format(word);
        report.check("sigma_round_trip", w.key(&nf) == w.key(word), show);
        report.check("length", w.length(word) == nf.len() && w.length(&nf) == nf.len(), show);
        report.check("idempotent", w.normal_form(&nf) == nf, show);
        report.check("imaginary_letters_kept", imaginary_counts(datum, &nf) == imaginary_counts(datum, word), || {
            format!("{} normalizes to {}", w.format(word), w.format(&nf))
        });
        let acts = probes.iter().all(|mu| w.act(&nf, mu) == w.act(word, mu));
        report.check("action_respects_relations", acts, || {
            format!("{} and {} act differently", w.format(word), w.format(&nf))
        });
    }

    let short: Vec<Vec<usize>> = words.iter().filter(|x| x.len() <= 4 && w.length(x) == x.len()).cloned().collect();
    let table = model.roots();
    let small_roots: Vec<_> = table.entries.iter().filter(|r| r.height() <= 4).collect();
    for word in &short {
        for root in small_roots.iter().filter(|r| r.real) {
            match w.exchange_positions(word, root) {
                Ok(pos) => report.check("strong_exchange", pos.len() == 1, || {
                    format!("{} with root {:?}: positions {pos:?}", w.format(word), root.coeffs)
                }),
                Err(Error::NotShortening) => {}
                Err(e) => report.error("strong_exchange", e),
            }
        }
    }
    for word in short.iter().filter(|x| x.len() <= 3) {
        for root in small_roots.iter().filter(|r| !r.real) {
            let v = w.reflect_by(root, word);
            if w.length(&v) <= w.length(word) {
                continue;
            }
            match w.exchange_check_imag(&v, root) {
                Ok(pred) => report.check("imaginary_deletion", w.equal(&pred, word), || {
                    format!("{} with root {:?} gives {}", w.format(&v), root.coeffs, w.format(&pred))
                }),
                Err(e) => report.fail("imaginary_deletion", format!("{} with root {:?}: {e}", w.format(&v), root.coeffs)),
            }
        }
    }

    for k in 0..rank {
        let lambda = Weight::fundamental(rank, k);
        for word in words.iter().filter(|x| x.len() <= 4) {
            match w.stabilizer_check(word, &lambda) {
                Ok(r) => {
                    if r.fixes {
                        report.check("stabilizer", r.witness.is_some(), || {
                            format!("{} fixes ω_{} without a witness", w.format(word), k + 1)
                        });
                    }
                }
                Err(e) => report.error("stabilizer", e),
            }
        }
    }

    let reals = datum.real_indices();
    let mut drawn = 0;
    while drawn < config.samples && !reals.is_empty() {
        let len = rng.gen_range(0..=4);
        let big: Vec<usize> = (0..len).map(|_| rng.gen_range(0..rank)).collect();
        let big = w.normal_form(&big);
        let sub: Vec<usize> = big.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let small = w.normal_form(&sub);
        drawn += 1;
        match w.bruhat_leq(&small, &big, table) {
            Ok(true) => {}
            Ok(false) => continue,
            Err(e) => {
                report.error("lifting_property", e);
                continue;
            }
        }
        for &i in &reals {
            let left = w.product(&[i], &small);
            let ok = match (w.bruhat_leq(&left, &big, table), w.bruhat_leq(&left, &w.product(&[i], &big), table)) {
                (Ok(a), Ok(b)) => a || b,
                (Err(e), _) | (_, Err(e)) => {
                    report.error("lifting_property", e);
                    continue;
                }
            };
            report.check("lifting_property", ok, || format!("{} ≤ {} with r_{i}", w.format(&small), w.format(&big)));
        }
    }
    report
}

pub fn embedding(model: &PathModel, config: SuiteConfig) -> SuiteReport {
    let datum = model.datum();
    let rank = datum.rank();
    let lifted = LiftedDatum::new(datum.clone());
    let mut report = SuiteReport::new(SuiteName::Embedding, datum, config);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.samples {
        let n = rng.gen_range(1..=2);
        let shapes: Vec<Weight> = (0..n).map(|_| random_shape(&mut rng, rank)).collect();
        let len = rng.gen_range(1..=config.max_len.max(1));
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..rank)).collect();
        let probe = lift_embed::h_equality_probe(&lifted, &word, &shapes);
        *report.checks.entry("prefix_h".into()).or_insert(0) += (probe.checked - probe.mismatches.len()) as u64;
        report.check("lockstep", probe.mismatches.is_empty(), || {
            format!("shapes {shapes:?}, word {word:?}, mismatches at {:?}", probe.mismatches)
        });
    }
    let shapes: Vec<Weight> = (0..3).map(|_| random_shape(&mut rng, rank)).collect();
    for shape in shapes {
        let g = match crystal::generate(datum, &shape, config.depth, GenerateOptions::default()) {
            Ok(g) => g,
            Err(e) => {
                report.error("injectivity", e);
                continue;
            }
        };
        let mut images = HashSet::new();
        for u in 0..g.len() {
            match lift_embed::embed_path(&lifted, &g.fword(u), std::slice::from_ref(&shape), usize::MAX) {
                Ok(emb) => {
                    images.insert(emb.lifted);
                }
                Err(e) => report.error("injectivity", e),
            }
        }
        report.check("injectivity", images.len() == g.len(), || {
            format!("shape {shape}: {} nodes, {} images", g.len(), images.len())
        });
    }
    report
}

pub fn decomposition(model: &PathModel, config: SuiteConfig) -> SuiteReport {
    let datum = model.datum();
    let rank = datum.rank();
    let opts = GenerateOptions { parallel: true, max_nodes: model.bounds().orbit, ..Default::default() };
    let mut report = SuiteReport::new(SuiteName::Decomposition, datum, config);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let monoid = WeylMonoid::new(datum.clone(), model.bounds().enumeration);
    let d = config.depth;
    for _ in 0..config.samples {
        let lambda = random_shape(&mut rng, rank);
        let mu = random_shape(&mut rng, rank);
        let pair = format!("{lambda} ⊗ {mu}");
        let shapes = [lambda.clone(), mu.clone()];
        let result: Result<()> = (|| {
            let whole = crystal::generate(datum, &lambda.add(&mu), d, opts)?;
            let cat = crystal::generate_concat(datum, &shapes, d, opts)?;
            report.check("iso_sum_vs_concatenation", crystal::iso_check(&whole, &cat)?, || pair.clone());
            let outside = crystal::check_membership(model, &cat)?;
            report.check("membership", outside.is_empty(), || pair.clone());
            for p in &cat.nodes {
                report.check("standard", crystal::is_standard(model, &shapes, p)?, || pair.clone());
            }
            for (u, p) in cat.nodes.iter().enumerate().filter(|(u, _)| cat.depths[*u] <= 2) {
                match crystal::search_defining_chain(model, &monoid, &shapes, p, 4) {
                    Ok(Some(c)) => report.check(
                        "defining_chain",
                        crystal::verify_defining_chain(model, &monoid, &shapes, p, &c).holds(),
                        || format!("{pair}, node {u}"),
                    ),
                    Ok(None) => report.fail("defining_chain", format!("{pair}, node {u}: none found")),
                    Err(e) if e.is_bound_exceeded() => {}
                    Err(e) => return Err(e),
                }
            }

            let dec = crystal::tensor_decompose(datum, &lambda, &mu, d, opts)?;
            let r = crystal::verify_decomposition(model, &dec, d, opts)?;
            report.check("tensor_rule", r.passed(), || format!("{pair}: {r:?}"));

            let top = Path::straight(lambda.clone());
            let g_mu = crystal::generate(datum, &mu, 2, opts)?;
            for q in &g_mu.nodes {
                let p = paths::concatenate(datum, &[top.clone(), q.clone()]);
                if crystal::is_standard(model, &shapes, &p)? {
                    continue;
                }
                *report.checks.entry("nonstandard_found".into()).or_insert(0) += 1;
                if let Ok(found) = crystal::search_defining_chain(model, &monoid, &shapes, &p, 4) {
                    report.check("no_chain_when_nonstandard", found.is_none(), || pair.clone());
                }
            }

            for i in 0..rank {
                let br = crystal::branch(datum, &lambda, &[i], d, opts)?;
                let r = crystal::verify_branch(model, &br, d, opts)?;
                report.check("branching_rule", r.passed(), || format!("{lambda} to index {i}: {r:?}"));
            }
            Ok(())
        })();
        if let Err(e) = result {
            report.fail("decomposition", format!("{pair}: {e}"));
        }
    }
    report
}
