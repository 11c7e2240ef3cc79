//! Truncated crystal graphs of GLS paths and of their concatenations, with
//! standardness, defining chains, the tensor-product and branching rules,
//! characters and isomorphism checking.
//!
//! Truncation is by depth: the number of lowering operators applied to the
//! highest element. Comparisons between graphs are only made at aligned
//! depths.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::cartan_datum::BorcherdsCartanDatum;
use crate::error::{Error, Result};
use crate::gls::{GlsPath, PathModel};
use crate::lift_embed::{self, LiftedDatum, LiftedWeight};
use crate::paths::{self, Path};
use crate::rational::Q;
use crate::weight::{Realization, Weight};
use crate::weyl_monoid::WeylMonoid;

/// Unbounded depth: generate until the crystal is exhausted.
pub const FULL: usize = usize::MAX;

#[derive(Debug, Clone, Copy, Default)]
pub struct GenerateOptions {
    /// Complete every real string after the breadth-first pass.
    pub string_close: bool,
    pub parallel: bool,
    /// Node cap; `0` means no cap.
    pub max_nodes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Edge {
    pub source: usize,
    pub label: usize,
    pub target: usize,
}

/// Nodes are concatenations `π_1 ⊗ ⋯ ⊗ π_n` of paths of the given shapes
/// (a single GLS path when `n = 1`). Generated graphs are rooted at node 0.
#[derive(Debug, Clone, Serialize)]
pub struct CrystalGraph {
    pub shapes: Vec<Weight>,
    pub nodes: Vec<Path<Weight>>,
    pub weights: Vec<Weight>,
    /// Number of lowering steps from the highest weight.
    pub depths: Vec<usize>,
    pub edges: Vec<Edge>,
    pub depth: usize,
    pub string_closed: bool,
    #[serde(skip)]
    rank: usize,
    #[serde(skip)]
    index: HashMap<Path<Weight>, usize>,
    #[serde(skip)]
    next: Vec<Vec<Option<usize>>>,
    #[serde(skip)]
    parent: Vec<Option<(usize, usize)>>,
}

impl CrystalGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn id(&self, path: &Path<Weight>) -> Option<usize> {
        self.index.get(path).copied()
    }

    /// Target of the `label`-edge out of `u`, when it lies in the graph.
    pub fn target(&self, u: usize, label: usize) -> Option<usize> {
        self.next[u][label]
    }

    pub fn has_incoming(&self, v: usize, labels: &[usize]) -> bool {
        self.edges.iter().any(|e| e.target == v && labels.contains(&e.label))
    }

    /// Operator word `f_{i_k} ⋯ f_{i_1}` reaching `u` from the root, written
    /// left to right (the last operator applied comes first).
    pub fn fword(&self, u: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = u;
        while let Some((p, i)) = self.parent[cur] {
            word.push(i);
            cur = p;
        }
        word
    }

    /// Nodes reachable from `start` along edges with labels in `labels`.
    pub fn reach(&self, start: usize, labels: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &i in labels {
                if let Some(v) = self.next[u][i] {
                    if seen.insert(v) {
                        queue.push_back(v);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Recomputes all edges among the current nodes.
    fn connect(&mut self, datum: &BorcherdsCartanDatum, parallel: bool) {
        let rank = datum.rank();
        let lower = |p: &Path<Weight>| -> Vec<Option<usize>> {
            (0..rank).map(|i| paths::f_op(datum, p, i).and_then(|q| self.index.get(&q).copied())).collect()
        };
        let next: Vec<Vec<Option<usize>>> = if parallel {
            self.nodes.par_iter().map(lower).collect()
        } else {
            self.nodes.iter().map(lower).collect()
        };
        let mut edges = Vec::new();
        let mut parent = vec![None; self.nodes.len()];
        for (u, row) in next.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                if let Some(v) = *v {
                    edges.push(Edge { source: u, label: i, target: v });
                }
            }
        }
        // parents from a breadth-first pass so that words are shortest and stable
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by_key(|&u| (self.depths[u], u));
        for &u in &order {
            for (i, v) in next[u].iter().enumerate() {
                if let Some(v) = *v {
                    if parent[v].is_none() && v != 0 {
                        parent[v] = Some((u, i));
                    }
                }
            }
        }
        self.edges = edges;
        self.next = next;
        self.parent = parent;
    }
}

fn total(shapes: &[Weight], rank: usize) -> Weight {
    shapes.iter().fold(Weight::zero(rank), |acc, w| acc.add(w))
}

fn depth_below(top: &Weight, w: &Weight) -> usize {
    let d: Q = w.depth() - top.depth();
    d.floor().max(0) as usize
}

/// `π_Λ = π_{λ_1} ⊗ ⋯ ⊗ π_{λ_n}`
pub fn highest(datum: &BorcherdsCartanDatum, shapes: &[Weight]) -> Path<Weight> {
    lift_embed::highest_concatenation(datum, shapes)
}

fn check_shapes(datum: &BorcherdsCartanDatum, shapes: &[Weight]) -> Result<()> {
    if shapes.is_empty() {
        return Err(Error::Malformed("at least one shape is needed".into()));
    }
    for s in shapes {
        if s.rank() != datum.rank() || s.offset.len() != datum.rank() {
            return Err(Error::Malformed(format!("weight {s} has the wrong rank")));
        }
        if !s.is_integral(datum) || !s.is_dominant(datum) {
            return Err(Error::Malformed(format!("shape {s} is not dominant integral")));
        }
    }
    Ok(())
}

/// Breadth-first generation of `𝔹(λ)` to depth `depth`.
pub fn generate(datum: &BorcherdsCartanDatum, shape: &Weight, depth: usize, opts: GenerateOptions) -> Result<CrystalGraph> {
    generate_concat(datum, std::slice::from_ref(shape), depth, opts)
}

/// Breadth-first generation of the component of `π_Λ` in
/// `𝔹(λ_1) ⊗ ⋯ ⊗ 𝔹(λ_n)` to depth `depth`.
pub fn generate_concat(
    datum: &BorcherdsCartanDatum,
    shapes: &[Weight],
    depth: usize,
    opts: GenerateOptions,
) -> Result<CrystalGraph> {
    check_shapes(datum, shapes)?;
    let rank = datum.rank();
    let root = highest(datum, shapes);
    let mut seen: BTreeSet<Path<Weight>> = BTreeSet::from([root.clone()]);
    let mut order = vec![root.clone()];
    let mut frontier = vec![root];
    let mut level = 0;
    let over = |n: usize| opts.max_nodes > 0 && n > opts.max_nodes;
    while level < depth && !frontier.is_empty() {
        let step = |p: &Path<Weight>| -> Vec<Path<Weight>> { (0..rank).filter_map(|i| paths::f_op(datum, p, i)).collect() };
        let found: Vec<Vec<Path<Weight>>> = if opts.parallel {
            frontier.par_iter().map(step).collect()
        } else {
            frontier.iter().map(step).collect()
        };
        let fresh: BTreeSet<Path<Weight>> = found.into_iter().flatten().filter(|p| !seen.contains(p)).collect();
        if over(seen.len() + fresh.len()) {
            return Err(Error::BoundExceeded { what: "crystal nodes".into(), bound: opts.max_nodes });
        }
        seen.extend(fresh.iter().cloned());
        order.extend(fresh.iter().cloned());
        frontier = fresh.into_iter().collect();
        level += 1;
    }
    if opts.string_close {
        // strings through the breadth-first nodes; their upper parts are
        // already present
        for k in 0..order.len() {
            for i in datum.real_indices() {
                let mut cur = order[k].clone();
                while let Some(next) = paths::f_op(datum, &cur, i) {
                    if seen.insert(next.clone()) {
                        order.push(next.clone());
                        if over(order.len()) {
                            return Err(Error::BoundExceeded { what: "crystal nodes".into(), bound: opts.max_nodes });
                        }
                    }
                    cur = next;
                }
            }
        }
    }
    let mut g = CrystalGraph::from_nodes(datum, shapes.to_vec(), order, depth, opts.parallel);
    g.string_closed = opts.string_close;
    Ok(g)
}

/// `e_i` on `𝔹(λ_1) ⊗ ⋯ ⊗ 𝔹(λ_n)`: the path operator on the
/// concatenation, cut off for imaginary `i` when some factor leaves its
/// crystal.
pub fn tensor_e(model: &PathModel, shapes: &[Weight], path: &Path<Weight>, i: usize) -> Result<Option<Path<Weight>>> {
    let datum = model.datum();
    if shapes.len() == 1 {
        return model.e(path, &shapes[0], i);
    }
    if datum.is_real(i) {
        return paths::e_op_real(datum, path, i);
    }
    let Some(raised) = paths::e_op_imag_raw(datum, path, i)? else { return Ok(None) };
    for (factor, shape) in paths::split(datum, &raised, shapes.len()).iter().zip(shapes) {
        if !model.is_gls(factor, shape)? {
            return Ok(None);
        }
    }
    Ok(Some(raised))
}

/// Real indices ascending, then imaginary indices ascending.
fn raising_order(datum: &BorcherdsCartanDatum) -> Vec<usize> {
    let mut v = datum.real_indices();
    v.extend(datum.imag_indices());
    v
}

pub fn is_highest(model: &PathModel, shapes: &[Weight], path: &Path<Weight>) -> Result<bool> {
    for i in raising_order(model.datum()) {
        if tensor_e(model, shapes, path, i)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Applies raising operators until all of them kill the path. Returns the
/// applied word (first applied first) and the terminal path.
pub fn raise_to_highest(model: &PathModel, shapes: &[Weight], path: &Path<Weight>) -> Result<(Vec<usize>, Path<Weight>)> {
    let datum = model.datum();
    let order = raising_order(datum);
    let mut cur = path.clone();
    let mut depth = paths::endpoint(datum, &cur).depth();
    let mut word = Vec::new();
    'outer: loop {
        for &i in &order {
            if let Some(next) = tensor_e(model, shapes, &cur, i)? {
                let d = paths::endpoint(datum, &next).depth();
                assert!(d < depth, "raising must strictly decrease the depth");
                depth = d;
                cur = next;
                word.push(i);
                continue 'outer;
            }
        }
        return Ok((word, cur));
    }
}

/// `π ∈ 𝓕π_Λ`, decided by raising.
pub fn is_standard(model: &PathModel, shapes: &[Weight], path: &Path<Weight>) -> Result<bool> {
    let (_, top) = raise_to_highest(model, shapes, path)?;
    Ok(top == highest(model.datum(), shapes))
}

/// Every node lies in the ambient tensor product, factor by factor.
/// Returns the ids of offending nodes.
pub fn check_membership(model: &PathModel, g: &CrystalGraph) -> Result<Vec<usize>> {
    let n = g.shapes.len();
    let mut bad = Vec::new();
    for (u, p) in g.nodes.iter().enumerate() {
        for (factor, shape) in paths::split(model.datum(), p, n).iter().zip(&g.shapes) {
            if !model.is_gls(factor, shape)? {
                bad.push(u);
                break;
            }
        }
    }
    Ok(bad)
}

/// Weight multiplicities of the nodes of a truncated graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Character {
    pub depth: usize,
    pub counts: BTreeMap<Weight, usize>,
}

impl Character {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

pub fn character(g: &CrystalGraph) -> Character {
    let mut counts = BTreeMap::new();
    for w in &g.weights {
        *counts.entry(w.clone()).or_insert(0) += 1;
    }
    Character { depth: g.depth, counts }
}

/// Synchronized traversal of two deterministic labelled automata. `pairs`
/// matches labels of the first with labels of the second.
fn synchronized(
    a: (&CrystalGraph, usize),
    b: (&CrystalGraph, usize),
    pairs: &[(usize, usize)],
    same: impl Fn(usize, usize) -> bool,
) -> bool {
    let mut fwd: HashMap<usize, usize> = HashMap::from([(a.1, b.1)]);
    let mut back: HashMap<usize, usize> = HashMap::from([(b.1, a.1)]);
    let mut queue = VecDeque::from([(a.1, b.1)]);
    if !same(a.1, b.1) {
        return false;
    }
    while let Some((u, v)) = queue.pop_front() {
        for &(i, j) in pairs {
            match (a.0.target(u, i), b.0.target(v, j)) {
                (None, None) => {}
                (Some(x), Some(y)) => {
                    match (fwd.get(&x), back.get(&y)) {
                        (None, None) => {
                            if !same(x, y) {
                                return false;
                            }
                            fwd.insert(x, y);
                            back.insert(y, x);
                            queue.push_back((x, y));
                        }
                        (Some(&y2), Some(&x2)) if y2 == y && x2 == x => {}
                        _ => return false,
                    }
                }
                _ => return false,
            }
        }
    }
    true
}

/// Isomorphism of rooted crystal graphs truncated at the same depth.
pub fn iso_check(g1: &CrystalGraph, g2: &CrystalGraph) -> Result<bool> {
    if g1.weights[0] != g2.weights[0] {
        return Err(Error::RootMismatch(format!("{} vs {}", g1.weights[0], g2.weights[0])));
    }
    if g1.depth != g2.depth || g1.string_closed != g2.string_closed {
        return Err(Error::TruncationIncomparable(format!(
            "depth {} vs {} (string closure {} vs {})",
            g1.depth, g2.depth, g1.string_closed, g2.string_closed
        )));
    }
    if g1.rank != g2.rank {
        return Ok(false);
    }
    let pairs: Vec<(usize, usize)> = (0..g1.rank).map(|i| (i, i)).collect();
    Ok(g1.len() == g2.len() && synchronized((g1, 0), (g2, 0), &pairs, |x, y| g1.weights[x] == g2.weights[y]))
}

/// `H_i(t) + α_i∨(λ) ≥ 0` for all `i` and `t`.
pub fn is_dominant_over(datum: &BorcherdsCartanDatum, path: &Path<Weight>, shift: &Weight) -> bool {
    (0..datum.rank()).all(|i| !(paths::h_function(datum, path, i).min() + datum.eval(i, shift)).is_negative())
}

#[derive(Debug, Clone, Serialize)]
pub struct Summand {
    /// The indexing path and its operator word from the highest path.
    pub path: Path<Weight>,
    pub fword: Vec<usize>,
    pub depth: usize,
    pub shape: Weight,
}

#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub lambda: Weight,
    pub mu: Weight,
    /// Indexing paths were searched up to this depth; summands indexed by
    /// deeper paths are not listed.
    pub depth: usize,
    pub summands: Vec<Summand>,
}

fn lifted_image(lifted: &LiftedDatum, fword: &[usize], shape: &Weight) -> Result<Path<LiftedWeight>> {
    let emb = lift_embed::embed_path(lifted, fword, std::slice::from_ref(shape), usize::MAX)?;
    emb.lifted.ok_or_else(|| Error::WitnessMissing(format!("lift of a crystal node with word {fword:?}")))
}

/// Summands of `𝔹(λ) ⊗ 𝔹(μ)` indexed by paths `π ∈ 𝔹(μ)` of depth at most
/// `depth` whose lift is `λ̃`-dominant.
pub fn tensor_decompose(datum: &BorcherdsCartanDatum, lambda: &Weight, mu: &Weight, depth: usize, opts: GenerateOptions) -> Result<Decomposition> {
    check_shapes(datum, &[lambda.clone(), mu.clone()])?;
    let g = generate(datum, mu, depth, opts)?;
    let lifted = LiftedDatum::new(datum.clone());
    let shift = LiftedWeight::lift(datum, lambda);
    let mut summands = Vec::new();
    for u in 0..g.len() {
        let fword = g.fword(u);
        let image = lifted_image(&lifted, &fword, mu)?;
        if lift_embed::is_lifted_dominant(&lifted, &image, &shift) {
            summands.push(Summand {
                path: g.nodes[u].clone(),
                fword,
                depth: g.depths[u],
                shape: lambda.add(&g.weights[u]),
            });
        }
    }
    Ok(Decomposition { lambda: lambda.clone(), mu: mu.clone(), depth, summands })
}

/// `𝔹(λ_1) ⊗ 𝔹(λ_2)` truncated to pairs of total depth at most `depth`.
/// Not rooted: node 0 is `π_{λ_1} ⊗ π_{λ_2}` but other components appear.
pub fn tensor_graph(datum: &BorcherdsCartanDatum, lambda: &Weight, mu: &Weight, depth: usize, opts: GenerateOptions) -> Result<CrystalGraph> {
    let a = generate(datum, lambda, depth, opts)?;
    let b = generate(datum, mu, depth, opts)?;
    let mut nodes = Vec::new();
    for (p, &dp) in a.nodes.iter().zip(&a.depths) {
        for (q, &dq) in b.nodes.iter().zip(&b.depths) {
            if dp + dq <= depth {
                nodes.push(paths::concatenate(datum, &[p.clone(), q.clone()]));
            }
        }
    }
    nodes.sort();
    nodes.dedup();
    let shapes = vec![lambda.clone(), mu.clone()];
    let root = highest(datum, &shapes);
    let k = nodes.iter().position(|p| *p == root).expect("the highest pair is present");
    let root = nodes.remove(k);
    nodes.insert(0, root);
    Ok(CrystalGraph::from_nodes(datum, shapes, nodes, depth, opts.parallel))
}

impl CrystalGraph {
    fn from_nodes(
        datum: &BorcherdsCartanDatum,
        shapes: Vec<Weight>,
        nodes: Vec<Path<Weight>>,
        depth: usize,
        parallel: bool,
    ) -> CrystalGraph {
        let top = total(&shapes, datum.rank());
        let index = nodes.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
        let weights: Vec<Weight> = nodes.iter().map(|p| paths::endpoint(datum, p)).collect();
        let depths = weights.iter().map(|w| depth_below(&top, w)).collect();
        let mut g = CrystalGraph {
            shapes,
            nodes,
            weights,
            depths,
            edges: Vec::new(),
            depth,
            string_closed: false,
            rank: datum.rank(),
            index,
            next: Vec::new(),
            parent: Vec::new(),
        };
        g.connect(datum, parallel);
        g
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct DecompositionReport {
    pub depth: usize,
    pub ambient_nodes: usize,
    pub summand_nodes: usize,
    pub summands_checked: usize,
    /// Highest elements found in the ambient graph but not listed, or listed
    /// but not highest.
    pub selection_mismatches: Vec<String>,
    /// Summands whose component is not isomorphic to the generated crystal.
    pub iso_failures: Vec<String>,
    /// Ambient nodes in no component, or in more than one.
    pub coverage_failures: Vec<String>,
    pub character_additive: bool,
    /// Disagreements between raising and lift dominance on `π_λ ⊗ π`.
    pub raising_mismatches: Vec<String>,
    /// Highest ambient nodes whose first factor is not `π_λ` or whose second
    /// factor is not `λ`-dominant.
    pub dominance_failures: Vec<String>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.selection_mismatches.is_empty()
            && self.iso_failures.is_empty()
            && self.coverage_failures.is_empty()
            && self.character_additive
            && self.raising_mismatches.is_empty()
            && self.dominance_failures.is_empty()
    }
}

/// Checks a decomposition against the ambient graph truncated at `depth`:
/// the highest elements, the isomorphism type of every component and the
/// character.
pub fn verify_decomposition(model: &PathModel, dec: &Decomposition, depth: usize, opts: GenerateOptions) -> Result<DecompositionReport> {
    if depth > dec.depth {
        return Err(Error::TruncationIncomparable(format!(
            "verification depth {depth} exceeds the enumeration depth {}",
            dec.depth
        )));
    }
    let datum = model.datum();
    let shapes = [dec.lambda.clone(), dec.mu.clone()];
    let ambient = tensor_graph(datum, &dec.lambda, &dec.mu, depth, opts)?;
    let all: Vec<usize> = (0..datum.rank()).collect();
    let mut report = DecompositionReport { depth, ambient_nodes: ambient.len(), ..Default::default() };

    let by_graph: BTreeSet<usize> = (0..ambient.len()).filter(|&v| !ambient.has_incoming(v, &all)).collect();
    let root_lambda = Path::straight(dec.lambda.clone());
    let mut listed = BTreeSet::new();
    for s in dec.summands.iter().filter(|s| s.depth <= depth) {
        let p = paths::concatenate(datum, &[root_lambda.clone(), s.path.clone()]);
        match ambient.id(&p) {
            Some(v) => {
                listed.insert(v);
            }
            None => report.selection_mismatches.push(format!("listed {} missing from the ambient graph", s.shape)),
        }
    }
    for v in by_graph.symmetric_difference(&listed) {
        let side = if by_graph.contains(v) { "unlisted highest" } else { "listed non-highest" };
        report.selection_mismatches.push(format!("{side} node of weight {}", ambient.weights[*v]));
    }

    for &v in &by_graph {
        let factors = paths::split(datum, &ambient.nodes[v], 2);
        if factors[0] != root_lambda || !is_dominant_over(datum, &factors[1], &dec.lambda) {
            report.dominance_failures.push(format!("highest node of weight {}", ambient.weights[v]));
        }
    }

    let g_mu = generate(datum, &dec.mu, depth, opts)?;
    let lifted = LiftedDatum::new(datum.clone());
    let shift = LiftedWeight::lift(datum, &dec.lambda);
    for u in 0..g_mu.len() {
        let p = paths::concatenate(datum, &[root_lambda.clone(), g_mu.nodes[u].clone()]);
        let killed = is_highest(model, &shapes, &p)?;
        let image = lifted_image(&lifted, &g_mu.fword(u), &dec.mu)?;
        if killed != lift_embed::is_lifted_dominant(&lifted, &image, &shift) {
            report.raising_mismatches.push(format!("word {:?}", g_mu.fword(u)));
        }
    }

    let mut owner = vec![0usize; ambient.len()];
    let mut summed = Character { depth, counts: BTreeMap::new() };
    let pairs: Vec<(usize, usize)> = all.iter().map(|&i| (i, i)).collect();
    for &v in &listed {
        let comp = ambient.reach(v, &all);
        for &x in &comp {
            owner[x] += 1;
        }
        let shape = ambient.weights[v].clone();
        let room = depth - ambient.depths[v];
        let summand = generate(datum, &shape, room, opts)?;
        report.summand_nodes += summand.len();
        report.summands_checked += 1;
        for (w, c) in character(&summand).counts {
            *summed.counts.entry(w).or_insert(0) += c;
        }
        let ok = summand.len() == comp.len()
            && synchronized((&ambient, v), (&summand, 0), &pairs, |x, y| ambient.weights[x] == summand.weights[y]);
        if !ok {
            report.iso_failures.push(format!("summand {shape}"));
        }
    }
    for (x, &c) in owner.iter().enumerate() {
        if c != 1 {
            report.coverage_failures.push(format!("node of weight {} lies in {c} components", ambient.weights[x]));
        }
    }
    report.character_additive = character(&ambient).counts == summed.counts;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct Branching {
    pub shape: Weight,
    pub subset: Vec<usize>,
    pub depth: usize,
    pub summands: Vec<Summand>,
}

/// Summands of the restriction of `𝔹(λ)` to the Levi datum on `subset`,
/// indexed by paths of depth at most `depth` with Levi-dominant lift.
pub fn branch(datum: &BorcherdsCartanDatum, shape: &Weight, subset: &[usize], depth: usize, opts: GenerateOptions) -> Result<Branching> {
    if let Some(&bad) = subset.iter().find(|&&i| i >= datum.rank()) {
        return Err(Error::OutOfRange(format!("index {bad}")));
    }
    let g = generate(datum, shape, depth, opts)?;
    let lifted = LiftedDatum::new(datum.clone());
    let mut summands = Vec::new();
    for u in 0..g.len() {
        let fword = g.fword(u);
        let image = lifted_image(&lifted, &fword, shape)?;
        if lift_embed::is_levi_dominant(&lifted, &image, subset) {
            summands.push(Summand { path: g.nodes[u].clone(), fword, depth: g.depths[u], shape: g.weights[u].clone() });
        }
    }
    Ok(Branching { shape: shape.clone(), subset: subset.to_vec(), depth, summands })
}

/// The weight of `mu` as seen by the Levi datum on `subset`.
pub fn levi_weight(datum: &BorcherdsCartanDatum, mu: &Weight, subset: &[usize]) -> Weight {
    let evals: Vec<Q> = subset.iter().map(|&i| datum.eval(i, mu)).collect();
    Weight { base: evals, offset: vec![Q::ZERO; subset.len()] }
}

/// Checks a branching against the label-restricted graph at `depth`.
pub fn verify_branch(model: &PathModel, br: &Branching, depth: usize, opts: GenerateOptions) -> Result<DecompositionReport> {
    if depth > br.depth {
        return Err(Error::TruncationIncomparable(format!(
            "verification depth {depth} exceeds the enumeration depth {}",
            br.depth
        )));
    }
    let datum = model.datum();
    let s = &br.subset;
    let g = generate(datum, &br.shape, depth, opts)?;
    let levi = datum.restrict(s);
    let mut report = DecompositionReport { depth, ambient_nodes: g.len(), ..Default::default() };

    let by_graph: BTreeSet<usize> = (0..g.len()).filter(|&v| !g.has_incoming(v, s)).collect();
    let mut listed = BTreeSet::new();
    for b in br.summands.iter().filter(|b| b.depth <= depth) {
        match g.id(&b.path) {
            Some(v) => {
                listed.insert(v);
            }
            None => report.selection_mismatches.push(format!("listed {} missing from the graph", b.shape)),
        }
    }
    for v in by_graph.symmetric_difference(&listed) {
        let side = if by_graph.contains(v) { "unlisted highest" } else { "listed non-highest" };
        report.selection_mismatches.push(format!("{side} node of weight {}", g.weights[*v]));
    }
    for v in 0..g.len() {
        let mut killed = true;
        for &i in s {
            if model.e(&g.nodes[v], &br.shape, i)?.is_some() {
                killed = false;
                break;
            }
        }
        if killed != by_graph.contains(&v) {
            report.raising_mismatches.push(format!("node of weight {}", g.weights[v]));
        }
    }

    let mut owner = vec![0usize; g.len()];
    let pairs: Vec<(usize, usize)> = s.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut summed: BTreeMap<Weight, usize> = BTreeMap::new();
    for &v in &listed {
        let comp = g.reach(v, s);
        for &x in &comp {
            owner[x] += 1;
        }
        let top = &g.weights[v];
        let summand = generate(&levi, &levi_weight(datum, top, s), depth - g.depths[v], opts)?;
        report.summand_nodes += summand.len();
        report.summands_checked += 1;
        for w in &summand.weights {
            let mut up = top.clone();
            for (k, &i) in s.iter().enumerate() {
                up.offset[i] += w.offset[k];
            }
            *summed.entry(up).or_insert(0) += 1;
        }
        let relative = |x: usize| -> Vec<Q> { s.iter().map(|&i| g.weights[x].offset[i] - top.offset[i]).collect() };
        let ok = summand.len() == comp.len()
            && synchronized((&g, v), (&summand, 0), &pairs, |x, y| relative(x) == summand.weights[y].offset);
        if !ok {
            report.iso_failures.push(format!("summand {}", levi_weight(datum, top, s)));
        }
    }
    for (x, &c) in owner.iter().enumerate() {
        if c != 1 {
            report.coverage_failures.push(format!("node of weight {} lies in {c} components", g.weights[x]));
        }
    }
    report.character_additive = character(&g).counts == summed;
    Ok(report)
}

/// Monoid words `w_{(m,l)}`: `words[m][l]` for the `l`-th direction of the
/// `m`-th factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct DefiningChain {
    pub words: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Fails(String),
    Bound(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    fn from(r: Result<Option<String>>) -> Verdict {
        match r {
            Ok(None) => Verdict::Holds,
            Ok(Some(why)) => Verdict::Fails(why),
            Err(e) if e.is_bound_exceeded() => Verdict::Bound(e.to_string()),
            Err(e) => Verdict::Fails(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub weights: Verdict,
    pub descending: Verdict,
    pub real_bridges: Verdict,
    pub one_chains: Verdict,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.weights.holds() && self.descending.holds() && self.real_bridges.holds() && self.one_chains.holds()
    }
}

/// Directions `λ_{(m,l)}` of each factor.
pub fn factor_directions(datum: &BorcherdsCartanDatum, shapes: &[Weight], path: &Path<Weight>) -> Vec<Vec<Weight>> {
    paths::split(datum, path, shapes.len())
        .iter()
        .zip(shapes)
        .map(|(p, s)| GlsPath::from_path(p, s.clone()).weights)
        .collect()
}

fn chain_shape_matches(dirs: &[Vec<Weight>], chain: &DefiningChain) -> Option<String> {
    if dirs.len() != chain.words.len() {
        return Some(format!("{} factors but {} word blocks", dirs.len(), chain.words.len()));
    }
    for (m, (d, w)) in dirs.iter().zip(&chain.words).enumerate() {
        if d.len() != w.len() {
            return Some(format!("factor {} has {} directions but {} words", m + 1, d.len(), w.len()));
        }
    }
    None
}

/// Checks the four conditions of a defining chain for `π_1 ⊗ ⋯ ⊗ π_n`.
pub fn verify_defining_chain(
    model: &PathModel,
    monoid: &WeylMonoid,
    shapes: &[Weight],
    path: &Path<Weight>,
    chain: &DefiningChain,
) -> ChainReport {
    let datum = model.datum();
    let dirs = factor_directions(datum, shapes, path);
    if let Some(why) = chain_shape_matches(&dirs, chain) {
        let f = Verdict::Fails(why);
        return ChainReport { weights: f.clone(), descending: f.clone(), real_bridges: f.clone(), one_chains: f };
    }
    let n = shapes.len();
    let weights = Verdict::from(Ok((|| {
        for m in 0..n {
            for (l, w) in chain.words[m].iter().enumerate() {
                let got = monoid.act(w, &shapes[m]);
                if got != dirs[m][l] {
                    return Some(format!("w_({},{}) λ = {got}, expected {}", m + 1, l + 1, dirs[m][l]));
                }
            }
        }
        None
    })()));
    let flat: Vec<&Vec<usize>> = chain.words.iter().flatten().collect();
    let descending = Verdict::from((|| {
        for k in 1..flat.len() {
            if !monoid.bruhat_leq(flat[k], flat[k - 1], model.roots())? {
                return Ok(Some(format!("word {} is not below its predecessor", k + 1)));
            }
        }
        Ok(None)
    })());
    let real_bridges = Verdict::from((|| {
        for m in 0..n.saturating_sub(1) {
            let bridge = monoid.act(&chain.words[m + 1][0], &shapes[m]);
            if model.orbit_entry(&shapes[m], &bridge, true)?.is_none() {
                return Ok(Some(format!("w_({},1) λ_{} = {bridge} is not in the real orbit", m + 2, m + 1)));
            }
        }
        Ok(None)
    })());
    let one_chains = Verdict::from((|| {
        for m in 0..n.saturating_sub(1) {
            let bridge = monoid.act(&chain.words[m + 1][0], &shapes[m]);
            let last = dirs[m].last().expect("paths have a direction");
            if model.find_a_chain(&shapes[m], last, &bridge, Some(Q::ONE))?.is_none() {
                return Ok(Some(format!("no 1-chain for ({last}, {bridge})")));
            }
        }
        Ok(None)
    })());
    ChainReport { weights, descending, real_bridges, one_chains }
}

/// The orbit-level connecting condition. Only the words `w_{(m,l)}` for
/// `2 ≤ m ≤ n-1` and `w_{(n,1)}` are read.
pub fn verify_connecting_condition(
    model: &PathModel,
    monoid: &WeylMonoid,
    shapes: &[Weight],
    path: &Path<Weight>,
    chain: &DefiningChain,
) -> ChainReport {
    let datum = model.datum();
    let dirs = factor_directions(datum, shapes, path);
    let n = shapes.len();
    let used = |m: usize, l: usize| (1..n - 1).contains(&m) || (m == n - 1 && l == 0);
    let malformed = (|| {
        if chain.words.len() != n {
            return Some(format!("{} factors but {} word blocks", n, chain.words.len()));
        }
        for m in 1..n {
            let need = if m + 1 < n { dirs[m].len() } else { 1 };
            if chain.words[m].len() < need {
                return Some(format!("factor {} needs {need} words", m + 1));
            }
        }
        None
    })();
    if let Some(why) = malformed {
        let f = Verdict::Fails(why);
        return ChainReport { weights: f.clone(), descending: f.clone(), real_bridges: f.clone(), one_chains: f };
    }
    let weights = Verdict::from(Ok((|| {
        for m in 0..n {
            for (l, w) in chain.words[m].iter().enumerate() {
                if used(m, l) && monoid.act(w, &shapes[m]) != dirs[m][l] {
                    return Some(format!("w_({},{}) λ differs from the direction", m + 1, l + 1));
                }
            }
        }
        None
    })()));
    let descending = Verdict::from((|| {
        for m in 0..n.saturating_sub(1) {
            let mut prev = dirs[m].last().expect("paths have a direction").clone();
            for (mm, block) in chain.words.iter().enumerate().skip(m + 1) {
                for (l, w) in block.iter().enumerate() {
                    if !used(mm, l) {
                        continue;
                    }
                    let cur = monoid.act(w, &shapes[m]);
                    if !model.orbit_geq(&shapes[m], &prev, &cur)? {
                        return Ok(Some(format!("order fails at ({},{}) in the orbit of λ_{}", mm + 1, l + 1, m + 1)));
                    }
                    prev = cur;
                }
            }
        }
        Ok(None)
    })());
    let real_bridges = Verdict::from((|| {
        for m in 0..n.saturating_sub(1) {
            let bridge = monoid.act(&chain.words[m + 1][0], &shapes[m]);
            if model.orbit_entry(&shapes[m], &bridge, true)?.is_none() {
                return Ok(Some(format!("w_({},1) λ_{} is not in the real orbit", m + 2, m + 1)));
            }
        }
        Ok(None)
    })());
    let one_chains = Verdict::from((|| {
        for m in 0..n.saturating_sub(1) {
            let bridge = monoid.act(&chain.words[m + 1][0], &shapes[m]);
            let last = dirs[m].last().expect("paths have a direction");
            if model.find_a_chain(&shapes[m], last, &bridge, Some(Q::ONE))?.is_none() {
                return Ok(Some(format!("no 1-chain for ({last}, {bridge})")));
            }
        }
        Ok(None)
    })());
    ChainReport { weights, descending, real_bridges, one_chains }
}

/// Monoid elements of length at most `max_len`, as normal-form words.
pub fn monoid_elements(monoid: &WeylMonoid, max_len: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    let rank = monoid.datum().rank();
    let mut seen = BTreeSet::from([Vec::new()]);
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::<usize>::new()];
    for len in 1..=max_len {
        let mut next = BTreeSet::new();
        for w in &frontier {
            for i in 0..rank {
                let mut word = vec![i];
                word.extend_from_slice(w);
                if monoid.length(&word) != len {
                    continue;
                }
                let nf = monoid.normal_form(&word);
                if seen.insert(monoid.key(&nf)) {
                    next.insert(nf);
                }
            }
        }
        if out.len() + next.len() > cap {
            return Err(Error::EnumerationBound { cap });
        }
        out.extend(next.iter().cloned());
        frontier = next.into_iter().collect();
    }
    Ok(out)
}

/// Bounded search for a defining chain among monoid words of length at most
/// `max_len`. `Ok(None)` means none exists within the bound.
pub fn search_defining_chain(
    model: &PathModel,
    monoid: &WeylMonoid,
    shapes: &[Weight],
    path: &Path<Weight>,
    max_len: usize,
) -> Result<Option<DefiningChain>> {
    let datum = model.datum();
    let dirs = factor_directions(datum, shapes, path);
    let elements = monoid_elements(monoid, max_len, model.bounds().enumeration)?;
    let mut slots: Vec<(usize, usize, Vec<Vec<usize>>)> = Vec::new();
    for (m, d) in dirs.iter().enumerate() {
        for (l, target) in d.iter().enumerate() {
            let cands: Vec<Vec<usize>> =
                elements.iter().filter(|w| &monoid.act(w, &shapes[m]) == target).cloned().collect();
            if cands.is_empty() {
                return Ok(None);
            }
            slots.push((m, l, cands));
        }
    }
    let mut picked: Vec<Vec<usize>> = Vec::new();
    let found = chain_dfs(model, monoid, shapes, &dirs, &slots, &mut picked)?;
    if !found {
        return Ok(None);
    }
    let mut words: Vec<Vec<Vec<usize>>> = dirs.iter().map(|_| Vec::new()).collect();
    for ((m, _, _), w) in slots.iter().zip(picked) {
        words[*m].push(w);
    }
    Ok(Some(DefiningChain { words }))
}

fn chain_dfs(
    model: &PathModel,
    monoid: &WeylMonoid,
    shapes: &[Weight],
    dirs: &[Vec<Weight>],
    slots: &[(usize, usize, Vec<Vec<usize>>)],
    picked: &mut Vec<Vec<usize>>,
) -> Result<bool> {
    let k = picked.len();
    if k == slots.len() {
        return Ok(true);
    }
    let (m, l, cands) = &slots[k];
    for w in cands {
        if let Some(prev) = picked.last() {
            if !monoid.bruhat_leq(w, prev, model.roots())? {
                continue;
            }
        }
        if *l == 0 && *m > 0 {
            let bridge = monoid.act(w, &shapes[m - 1]);
            if model.orbit_entry(&shapes[m - 1], &bridge, true)?.is_none() {
                continue;
            }
            let last = dirs[m - 1].last().expect("paths have a direction");
            if model.find_a_chain(&shapes[m - 1], last, &bridge, Some(Q::ONE))?.is_none() {
                continue;
            }
        }
        picked.push(w.clone());
        if chain_dfs(model, monoid, shapes, dirs, slots, picked)? {
            return Ok(true);
        }
        picked.pop();
    }
    Ok(false)
}
