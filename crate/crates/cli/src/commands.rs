//! Execution of the subcommands. Every command renders its result into a
//! byte buffer; `main` decides where it goes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path as FsPath;

use anyhow::{anyhow, Context};
use gls_paths::cartan_datum::DatumFile;
use gls_paths::crystal::{self, CrystalGraph, GenerateOptions, Summand};
use gls_paths::gls::{Bounds, PathModel};
use gls_paths::lift_embed::{self, LiftedDatum, LiftedWeight};
use gls_paths::suites::{self, SuiteConfig, SuiteName};
use gls_paths::weyl_monoid::WeylMonoid;
use gls_paths::{paths, BorcherdsCartanDatum, Error, LiftedIndex, Path, Q, Weight};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, CrystalCmd, DatumCmd, EmbedCmd, GraphFormat, Limits, MonoidCmd};

/// A command-line mistake that clap cannot see, such as an unknown suite.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub struct Outcome {
    pub output: Vec<u8>,
    /// Counterexamples of a failed check; the run exits with status 1.
    pub failures: Vec<String>,
}

impl Outcome {
    fn ok(output: String) -> Outcome {
        Outcome { output: output.into_bytes(), failures: Vec::new() }
    }

    fn checked(output: String, failures: Vec<String>) -> Outcome {
        Outcome { output: output.into_bytes(), failures }
    }
}

pub struct Ctx {
    pub limits: Limits,
    pub seed: u64,
    pub parallel: bool,
}

impl Ctx {
    fn bounds(&self) -> Bounds {
        self.limits.bounds
    }

    fn opts(&self, string_close: bool) -> GenerateOptions {
        GenerateOptions { string_close, parallel: self.parallel, max_nodes: self.limits.nodes }
    }

    fn model(&self, datum: &BorcherdsCartanDatum) -> PathModel {
        PathModel::new(datum.clone(), self.bounds())
    }
}

/// A datum file, or inline JSON: a bare matrix such as `[[2,-1],[-1,2]]` or
/// a full datum object.
pub fn load_datum(source: &str) -> anyhow::Result<BorcherdsCartanDatum> {
    let text = source.trim_start();
    if text.starts_with('[') {
        let matrix: Vec<Vec<i64>> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(BorcherdsCartanDatum::from_matrix(matrix)?);
    }
    if text.starts_with('{') {
        return Ok(BorcherdsCartanDatum::from_json(text)?);
    }
    let body = std::fs::read_to_string(source).with_context(|| format!("reading datum {source}"))?;
    Ok(BorcherdsCartanDatum::from_json(&body)?)
}

/// Coroot evaluations such as `1,0` or `1/2 3`, or a weight in JSON form.
pub fn parse_weight(datum: &BorcherdsCartanDatum, text: &str) -> anyhow::Result<Weight> {
    let text = text.trim();
    let w: Weight = if text.starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        let base = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<Q>().map_err(|_| Error::Parse(format!("bad rational {s:?} in weight {text:?}"))))
            .collect::<Result<Vec<Q>, Error>>()?;
        let n = base.len();
        Weight { base, offset: vec![Q::ZERO; n] }
    };
    if w.base.len() != datum.rank() || w.offset.len() != datum.rank() {
        return Err(Error::Malformed(format!("weight {text:?} does not have rank {}", datum.rank())).into());
    }
    Ok(w)
}

pub fn parse_weights(datum: &BorcherdsCartanDatum, text: &str) -> anyhow::Result<Vec<Weight>> {
    let shapes: Vec<Weight> =
        text.split(';').filter(|s| !s.trim().is_empty()).map(|s| parse_weight(datum, s)).collect::<anyhow::Result<_>>()?;
    if shapes.is_empty() {
        return Err(Error::Malformed("no weights given".into()).into());
    }
    Ok(shapes)
}

fn split_letters(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty())
}

/// Letters of the given words as real generators with no relations between
/// distinct letters.
fn free_datum(words: &[&str]) -> anyhow::Result<BorcherdsCartanDatum> {
    let mut labels: Vec<String> = Vec::new();
    for l in words.iter().flat_map(|w| split_letters(w)) {
        if !labels.iter().any(|x| x == l) {
            labels.push(l.to_string());
        }
    }
    let n = labels.len();
    let matrix = (0..n).map(|i| (0..n).map(|j| if i == j { 2 } else { -2 }).collect()).collect();
    Ok(BorcherdsCartanDatum::new(labels, matrix)?)
}

fn word_labels(datum: &BorcherdsCartanDatum, word: &[usize]) -> String {
    word.iter().map(|&i| datum.label(i)).collect::<Vec<_>>().join(" ")
}

fn lifted_label(datum: &BorcherdsCartanDatum, p: LiftedIndex) -> String {
    format!("({},{})", datum.label(p.base), p.level)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("results serialize");
    s.push('\n');
    s
}

fn lifted_path_json(datum: &BorcherdsCartanDatum, path: &Path<LiftedWeight>) -> Value {
    let segments: Vec<Value> = path
        .segments()
        .iter()
        .map(|s| {
            let offset: BTreeMap<String, Q> = s.slope.offset.iter().map(|(&p, &c)| (lifted_label(datum, p), c)).collect();
            json!({ "slope": { "base_evals": s.slope.base, "offset": offset }, "duration": s.duration })
        })
        .collect();
    Value::Array(segments)
}

fn summand_json(datum: &BorcherdsCartanDatum, s: &Summand) -> Value {
    json!({ "fword": word_labels(datum, &s.fword), "depth": s.depth, "shape": s.shape, "path": s.path })
}

pub fn run(cmd: &Command, ctx: &Ctx) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Datum(c) => datum_cmd(c),
        Command::Monoid(c) => monoid_cmd(c, ctx),
        Command::Embed(c) => embed_cmd(c, ctx),
        Command::Crystal(c) => crystal_cmd(c, ctx),
        Command::Suite { name, datum, inject_bug, samples, max_len, depth } => {
            let name: SuiteName = name.parse().map_err(|_| Usage(format!("unknown suite {name:?} (operators, monoid, embedding, decomposition)")))?;
            let datum = load_datum(datum)?;
            let mut config = SuiteConfig::defaults(name, ctx.seed);
            config.samples = samples.unwrap_or(config.samples);
            config.max_len = max_len.unwrap_or(config.max_len);
            config.depth = depth.unwrap_or(config.depth);
            config.inject_bug = *inject_bug;
            let report = suites::run(name, &ctx.model(&datum), config);
            Ok(Outcome::checked(to_json(&report), report.failures.clone()))
        }
        Command::Rerun { .. } => unreachable!("reruns are dispatched by main"),
    }
}

fn datum_cmd(cmd: &DatumCmd) -> anyhow::Result<Outcome> {
    match cmd {
        DatumCmd::Validate { datum } => {
            let d = load_datum(datum)?;
            let mut out = String::new();
            writeln!(out, "{d}").unwrap();
            writeln!(out, "ordinary: {}", d.is_ordinary()).unwrap();
            writeln!(out, "even: {}", d.is_even()).unwrap();
            let sym = match d.symmetrizer() {
                Some(s) => format!("{s:?} (given)"),
                None => match d.find_symmetrizer(i64::MAX)? {
                    Some(s) => format!("{s:?}"),
                    None => "none".to_string(),
                },
            };
            writeln!(out, "symmetrizer: {sym}").unwrap();
            Ok(Outcome::ok(out))
        }
        DatumCmd::Lift { datum, entry } => {
            let d = load_datum(datum)?;
            let parts: Vec<&str> = entry.split(',').map(str::trim).collect();
            let [i, m, j, n] = parts[..] else {
                return Err(Usage(format!("--entry expects i,m,j,n, got {entry:?}")).into());
            };
            let level = |s: &str| s.parse::<u32>().map_err(|_| Usage(format!("bad level {s:?}")));
            let p = LiftedIndex::new(d.index_of(i)?, level(m)?);
            let q = LiftedIndex::new(d.index_of(j)?, level(n)?);
            Ok(Outcome::ok(format!("{}\n", d.lifted_entry(p, q)?)))
        }
    }
}

fn monoid_cmd(cmd: &MonoidCmd, ctx: &Ctx) -> anyhow::Result<Outcome> {
    let cap = ctx.bounds().enumeration;
    match cmd {
        MonoidCmd::Reduce { word, datum } => {
            let d = match datum {
                Some(src) => load_datum(src)?,
                None => free_datum(&[word])?,
            };
            let monoid = WeylMonoid::new(d.clone(), cap);
            let w = d.parse_word(word)?;
            Ok(Outcome::ok(format!("{}\n", monoid.format(&monoid.normal_form(&w)))))
        }
        MonoidCmd::Leq { u, w, datum } => {
            let d = match datum {
                Some(src) => load_datum(src)?,
                None => free_datum(&[u, w])?,
            };
            let model = ctx.model(&d);
            let monoid = WeylMonoid::new(d.clone(), cap);
            let leq = monoid.bruhat_leq(&d.parse_word(u)?, &d.parse_word(w)?, model.roots())?;
            Ok(Outcome::ok(format!("{leq}\n")))
        }
        MonoidCmd::Act { word, weight, datum } => {
            let d = load_datum(datum)?;
            let monoid = WeylMonoid::new(d.clone(), cap);
            let mu = parse_weight(&d, weight)?;
            let image = monoid.act(&d.parse_word(word)?, &mu);
            Ok(Outcome::ok(to_json(&json!({ "weight": image, "evals": image.evals(&d) }))))
        }
    }
}

fn embed_cmd(cmd: &EmbedCmd, ctx: &Ctx) -> anyhow::Result<Outcome> {
    match cmd {
        EmbedCmd::Word { datum, fword } => {
            let d = load_datum(datum)?;
            let word = lift_embed::embed_word(&d, &d.parse_word(fword)?);
            let shown: Vec<String> = word.iter().map(|&p| lifted_label(&d, p)).collect();
            Ok(Outcome::ok(format!("{}\n", shown.join(" "))))
        }
        EmbedCmd::Path { datum, shape, fword, check_h } => {
            let d = load_datum(datum)?;
            let shapes = parse_weights(&d, shape)?;
            let word = d.parse_word(fword)?;
            let lifted = LiftedDatum::new(d.clone());
            let emb = lift_embed::embed_path(&lifted, &word, &shapes, ctx.bounds().chain)?;
            let mut out = json!({
                "word": emb.word.iter().map(|&p| lifted_label(&d, p)).collect::<Vec<_>>(),
                "downstairs": emb.downstairs,
                "lifted": emb.lifted.as_ref().map(|p| lifted_path_json(&d, p)),
            });
            let mut failures = Vec::new();
            if *check_h {
                let probe = lift_embed::h_equality_probe(&lifted, &word, &shapes);
                failures = probe.mismatches.iter().map(|s| format!("height functions differ after prefix of length {s}")).collect();
                out["probe"] = json!(probe);
            }
            Ok(Outcome::checked(to_json(&out), failures))
        }
    }
}

fn crystal_cmd(cmd: &CrystalCmd, ctx: &Ctx) -> anyhow::Result<Outcome> {
    match cmd {
        CrystalCmd::Gen { datum, shape, depth, string_close, out, check } => {
            let d = load_datum(datum)?;
            let shapes = parse_weights(&d, shape)?;
            let g = crystal::generate_concat(&d, &shapes, *depth, ctx.opts(*string_close))?;
            let mut failures = Vec::new();
            if *check {
                let bad = crystal::check_membership(&ctx.model(&d), &g)?;
                failures = bad.iter().map(|&u| format!("node {u} is outside the ambient crystal: {:?}", g.nodes[u])).collect();
            }
            let text = match out {
                GraphFormat::Dot => render_dot(&d, &g),
                GraphFormat::Jsonl => render_jsonl(&d, &g),
            };
            Ok(Outcome::checked(text, failures))
        }
        CrystalCmd::Tensor { datum, lambda, mu, depth, verify } => {
            let d = load_datum(datum)?;
            let (l, m) = (parse_weight(&d, lambda)?, parse_weight(&d, mu)?);
            let dec = crystal::tensor_decompose(&d, &l, &m, *depth, ctx.opts(false))?;
            let mut out = json!({
                "lambda": dec.lambda,
                "mu": dec.mu,
                "depth": dec.depth,
                "summands": dec.summands.iter().map(|s| summand_json(&d, s)).collect::<Vec<_>>(),
            });
            let mut failures = Vec::new();
            if *verify {
                let report = crystal::verify_decomposition(&ctx.model(&d), &dec, *depth, ctx.opts(false))?;
                failures = report_failures(&report);
                out["report"] = json!(report);
            }
            Ok(Outcome::checked(to_json(&out), failures))
        }
        CrystalCmd::Branch { datum, lambda, subset, depth, verify } => {
            let d = load_datum(datum)?;
            let l = parse_weight(&d, lambda)?;
            let mut subset = d.parse_word(subset)?;
            subset.sort_unstable();
            subset.dedup();
            let br = crystal::branch(&d, &l, &subset, *depth, ctx.opts(false))?;
            let summands: Vec<Value> = br
                .summands
                .iter()
                .map(|s| {
                    let mut v = summand_json(&d, s);
                    v["levi_weight"] = json!(crystal::levi_weight(&d, &s.shape, &subset));
                    v
                })
                .collect();
            let mut out = json!({
                "shape": br.shape,
                "subset": word_labels(&d, &br.subset),
                "depth": br.depth,
                "summands": summands,
            });
            let mut failures = Vec::new();
            if *verify {
                let report = crystal::verify_branch(&ctx.model(&d), &br, *depth, ctx.opts(false))?;
                failures = report_failures(&report);
                out["report"] = json!(report);
            }
            Ok(Outcome::checked(to_json(&out), failures))
        }
        CrystalCmd::Standard { datum, ambient, path_file, max_len } => {
            let d = load_datum(datum)?;
            let shapes = parse_weights(&d, ambient)?;
            let text = std::fs::read_to_string(path_file).with_context(|| format!("reading {}", path_file.display()))?;
            let raw: Path<Weight> = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let path = Path::new(raw.segments().to_vec())?;
            if let Some(bad) = path.slopes().find(|w| w.rank() != d.rank() || w.offset.len() != d.rank()) {
                return Err(Error::Malformed(format!("slope {bad} does not have rank {}", d.rank())).into());
            }
            let model = ctx.model(&d);
            for (m, (factor, shape)) in paths::split(&d, &path, shapes.len()).iter().zip(&shapes).enumerate() {
                if !model.is_gls(factor, shape)? {
                    return Err(Error::PreconditionFalsified(format!("factor {} is not a GLS path of shape {shape}", m + 1)).into());
                }
            }
            let standard = crystal::is_standard(&model, &shapes, &path)?;
            let (raising, top) = crystal::raise_to_highest(&model, &shapes, &path)?;
            let monoid = WeylMonoid::new(d.clone(), ctx.bounds().enumeration);
            let chain = crystal::search_defining_chain(&model, &monoid, &shapes, &path, *max_len)?;
            let mut failures = Vec::new();
            let mut out = json!({
                "standard": standard,
                "raising_word": word_labels(&d, &raising),
                "terminal": top,
                "defining_chain": null,
            });
            if let Some(c) = &chain {
                let report = crystal::verify_defining_chain(&model, &monoid, &shapes, &path, c);
                if !standard {
                    failures.push("a defining chain exists for a path that does not raise to the highest path".to_string());
                }
                if !report.holds() {
                    failures.push(format!("the found chain does not verify: {report:?}"));
                }
                let words: Vec<Vec<String>> =
                    c.words.iter().map(|block| block.iter().map(|w| monoid.format(w)).collect()).collect();
                out["defining_chain"] = json!(words);
                out["chain_report"] = json!(report);
            }
            Ok(Outcome::checked(to_json(&out), failures))
        }
        CrystalCmd::Char { graph_file } => character_of_file(graph_file),
    }
}

fn report_failures(report: &crystal::DecompositionReport) -> Vec<String> {
    let mut out: Vec<String> = report
        .selection_mismatches
        .iter()
        .chain(&report.iso_failures)
        .chain(&report.coverage_failures)
        .chain(&report.raising_mismatches)
        .chain(&report.dominance_failures)
        .cloned()
        .collect();
    if !report.character_additive {
        out.push("characters of the summands do not add up to the ambient character".to_string());
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Nodes labeled by weight, edges by operator label.
pub fn render_dot(datum: &BorcherdsCartanDatum, g: &CrystalGraph) -> String {
    let shapes: Vec<String> = g.shapes.iter().map(|s| s.to_string()).collect();
    let mut out = String::new();
    writeln!(out, "digraph crystal {{").unwrap();
    writeln!(out, "  label=\"{}\";", dot_escape(&shapes.join(" ⊗ "))).unwrap();
    for (u, w) in g.weights.iter().enumerate() {
        writeln!(out, "  n{u} [label=\"{}\"];", dot_escape(&w.to_string())).unwrap();
    }
    for e in &g.edges {
        writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.source, e.target, dot_escape(datum.label(e.label))).unwrap();
    }
    out.push_str("}\n");
    out
}

/// A header record, then one record per node in id order, then one per edge.
pub fn render_jsonl(datum: &BorcherdsCartanDatum, g: &CrystalGraph) -> String {
    let mut out = String::new();
    let file: DatumFile = datum.to_file();
    let header = json!({
        "type": "graph",
        "datum": file,
        "shapes": g.shapes,
        "depth": g.depth,
        "string_closed": g.string_closed,
        "nodes": g.len(),
        "edges": g.edges.len(),
    });
    writeln!(out, "{header}").unwrap();
    for u in 0..g.len() {
        let node = json!({ "type": "node", "id": u, "depth": g.depths[u], "weight": g.weights[u], "path": g.nodes[u] });
        writeln!(out, "{node}").unwrap();
    }
    for e in &g.edges {
        let edge = json!({ "type": "edge", "source": e.source, "label": datum.label(e.label), "target": e.target });
        writeln!(out, "{edge}").unwrap();
    }
    out
}

fn character_of_file(file: &FsPath) -> anyhow::Result<Outcome> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let mut header: Option<Value> = None;
    let mut counts: BTreeMap<Weight, usize> = BTreeMap::new();
    for (k, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let bad = |why: String| Error::Parse(format!("line {}: {why}", k + 1));
        let record: Value = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        match record.get("type").and_then(Value::as_str) {
            Some("graph") => header = Some(record),
            Some("node") => {
                let w: Weight = serde_json::from_value(record["weight"].clone()).map_err(|e| bad(e.to_string()))?;
                *counts.entry(w).or_insert(0) += 1;
            }
            Some("edge") => {}
            _ => return Err(bad("unknown record type".into()).into()),
        }
    }
    let header = header.ok_or_else(|| anyhow!(Error::Parse("missing graph header".into())))?;
    let total: usize = counts.values().sum();
    let counts: Vec<Value> = counts.into_iter().map(|(w, c)| json!({ "weight": w, "multiplicity": c })).collect();
    let out = json!({
        "depth": header["depth"],
        "string_closed": header["string_closed"],
        "total": total,
        "counts": counts,
    });
    Ok(Outcome::ok(to_json(&out)))
}
