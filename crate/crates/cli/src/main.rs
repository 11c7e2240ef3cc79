mod args;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use args::{Cli, Command, Global};
use commands::{Ctx, Outcome, Usage};

const EXIT_DOMAIN: u8 = 1;
const EXIT_BOUND: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Debug, Serialize, Deserialize)]
struct FileDigest {
    path: PathBuf,
    sha256: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct OutputDigest {
    /// `None` for stdout.
    path: Option<PathBuf>,
    sha256: String,
    bytes: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    tool: String,
    version: String,
    /// Arguments after the program name, without the manifest flag.
    args: Vec<String>,
    inputs: Vec<FileDigest>,
    bounds: serde_json::Value,
    seed: u64,
    threads: Option<u16>,
    output: Option<OutputDigest>,
    exit: u8,
    wall_ms: u128,
}

fn sha256(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn diagnostic(kind: &str, exit: u8, message: &str, counterexamples: &[String]) {
    let mut d = json!({ "status": kind, "exit": exit, "message": message });
    if !counterexamples.is_empty() {
        d["counterexamples"] = json!(counterexamples);
    }
    eprintln!("{d}");
}

fn classify(e: &anyhow::Error) -> (&'static str, u8) {
    if e.downcast_ref::<Usage>().is_some() {
        ("usage", EXIT_USAGE)
    } else if e.downcast_ref::<gls_paths::Error>().is_some_and(|e| e.is_bound_exceeded()) {
        ("bound", EXIT_BOUND)
    } else {
        ("domain", EXIT_DOMAIN)
    }
}

fn strip_manifest(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--manifest" {
            skip = true;
        } else if !a.starts_with("--manifest=") {
            out.push(a.clone());
        }
    }
    out
}

/// Digests of the existing files named on the command line.
fn input_digests(args: &[String], output: Option<&Path>) -> Vec<FileDigest> {
    let mut out = Vec::new();
    for a in args {
        let p = Path::new(a);
        if output == Some(p) || !p.is_file() {
            continue;
        }
        if let Ok(bytes) = std::fs::read(p) {
            out.push(FileDigest { path: p.to_path_buf(), sha256: sha256(&bytes) });
        }
    }
    out
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match output {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn context(global: &Global) -> Ctx {
    if let Some(n) = global.threads {
        // only fails when a pool already exists, which keeps its own size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global();
    }
    Ctx { limits: global.bounds, seed: global.seed, parallel: global.threads != Some(1) }
}

/// Runs one command and reports its exit status. The output digest is
/// `None` when nothing was written.
fn execute(cli: &Cli) -> (u8, Option<OutputDigest>) {
    let ctx = context(&cli.global);
    let output = cli.global.output.as_deref();
    match commands::run(&cli.command, &ctx) {
        Ok(Outcome { output: bytes, failures }) => {
            if let Err(e) = emit(output, &bytes) {
                diagnostic("domain", EXIT_DOMAIN, &format!("{e:#}"), &[]);
                return (EXIT_DOMAIN, None);
            }
            let digest = OutputDigest { path: output.map(Path::to_path_buf), sha256: sha256(&bytes), bytes: bytes.len() };
            if failures.is_empty() {
                (0, Some(digest))
            } else {
                diagnostic("check", EXIT_DOMAIN, &format!("{} check(s) failed", failures.len()), &failures);
                (EXIT_DOMAIN, Some(digest))
            }
        }
        Err(e) => {
            let (kind, code) = classify(&e);
            diagnostic(kind, code, &format!("{e:#}"), &[]);
            (code, None)
        }
    }
}

fn rerun(file: &Path) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let m: Manifest = serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", file.display()))?;
    for input in &m.inputs {
        let now = std::fs::read(&input.path).map(|b| sha256(&b)).unwrap_or_default();
        if now != input.sha256 {
            diagnostic("domain", EXIT_DOMAIN, &format!("input {} changed since the recorded run", input.path.display()), &[]);
            return Ok(EXIT_DOMAIN);
        }
    }
    let argv = std::iter::once("gls".to_string()).chain(m.args.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| Usage(format!("recorded arguments no longer parse: {e}")))?;
    let (code, digest) = execute(&cli);
    let same = code == m.exit && digest.as_ref().map(|d| &d.sha256) == m.output.as_ref().map(|d| &d.sha256);
    if !same {
        diagnostic("domain", EXIT_DOMAIN, "rerun does not reproduce the recorded output", &[]);
        return Ok(EXIT_DOMAIN);
    }
    Ok(code)
}

fn real_main(argv: Vec<OsString>) -> u8 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            diagnostic("usage", EXIT_USAGE, &e.kind().to_string(), &[]);
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    if let Command::Rerun { manifest_file } = &cli.command {
        return rerun(manifest_file).unwrap_or_else(|e| {
            let (kind, code) = classify(&e);
            diagnostic(kind, code, &format!("{e:#}"), &[]);
            code
        });
    }
    let args: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let args = strip_manifest(&args);
    let inputs = input_digests(&args, cli.global.output.as_deref());
    let start = Instant::now();
    let (code, output) = execute(&cli);
    let manifest_path = cli.global.manifest.clone().or_else(|| {
        cli.global.output.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    });
    if let Some(path) = manifest_path {
        let b = cli.global.bounds;
        let m = Manifest {
            tool: "gls".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            args,
            inputs,
            bounds: json!({
                "height": b.bounds.height,
                "chain": b.bounds.chain,
                "enum": b.bounds.enumeration,
                "orbit": b.bounds.orbit,
                "nodes": b.nodes,
            }),
            seed: cli.global.seed,
            threads: cli.global.threads,
            output,
            exit: code,
            wall_ms: start.elapsed().as_millis(),
        };
        let text = serde_json::to_string_pretty(&m).expect("manifest serializes") + "\n";
        if let Err(e) = std::fs::write(&path, text) {
            diagnostic("domain", EXIT_DOMAIN, &format!("writing manifest {}: {e}", path.display()), &[]);
            return EXIT_DOMAIN;
        }
    }
    code
}

fn main() -> ExitCode {
    ExitCode::from(real_main(std::env::args_os().collect()))
}
