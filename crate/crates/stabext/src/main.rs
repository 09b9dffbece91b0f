//! `stabext`: command-line front end to the stable-cohomology workbench.
//!
//! Every subcommand prints one JSON document on standard output. Exit
//! codes: 0 success, 1 a check failed, 2 bad input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use stabext_core::algebra::{algebra_from_json, load_algebra, validate_algebra, Algebra};
use stabext_core::arquiver::{ar_sequence_with, build_component, ArOptions, AlmostSplitSequence};
use stabext_core::decomp::{indecomposable, DEFAULT_BUDGET};
use stabext_core::extdeg::{ext_deg, DEFAULT_GUARD, DEFAULT_WINDOW};
use stabext_core::modcat::{load_module, Module};
use stabext_core::resolve::ext_table;
use stabext_core::workbench::{default_corpus_dir, load_corpus, RunParams, Suite, Workbench};
use stabext_core::Error;

#[derive(Parser)]
#[command(name = "stabext", version, about = "Stable cohomology and extension degrees over symmetric algebras")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Largest degree computed (B).
    #[arg(long, global = true, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    /// Trailing zero degrees required before declaring vanishing.
    #[arg(long, global = true, default_value_t = DEFAULT_GUARD)]
    guard: usize,
    /// Component radius for `ar` and `verify`.
    #[arg(long, global = true, default_value_t = 4)]
    radius: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Treat probably-indecomposable modules as vertices.
    #[arg(long, global = true)]
    accept_probable: bool,
    /// Also write the JSON result to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,
}

/// Where module arguments come from: files over `--algebra`, or module
/// names of a corpus entry.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Algebra file; module arguments are module files.
    #[arg(long, value_name = "PATH")]
    algebra: Option<PathBuf>,
    /// Corpus entry; module arguments are module names in it.
    #[arg(long, value_name = "NAME")]
    entry: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate an algebra file, a module file (with --algebra) or a corpus directory.
    Validate {
        path: PathBuf,
        #[arg(long, value_name = "PATH")]
        algebra: Option<PathBuf>,
    },
    /// Dimensions of Êxt^i(M, N) for i in a range.
    Ext {
        #[command(flatten)]
        source: Source,
        m: String,
        n: String,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        from: i64,
        /// Defaults to the window.
        #[arg(long, allow_negative_numbers = true)]
        to: Option<i64>,
    },
    /// Extension degree of a module.
    Extdeg {
        #[command(flatten)]
        source: Source,
        m: String,
    },
    /// Almost split sequence ending in M and, for radius > 0, its component.
    Ar {
        #[command(flatten)]
        source: Source,
        m: String,
        /// Write the component as a `from to` edge list.
        #[arg(long, value_name = "PATH")]
        edge_list: Option<PathBuf>,
    },
    /// Run verification suites over the corpus (all of them by default).
    Verify {
        /// Suite names, or `claims` for the recorded expected values.
        suites: Vec<String>,
    },
}

impl Opts {
    fn params(&self) -> RunParams {
        RunParams {
            window: self.window,
            guard: self.guard,
            radius: self.radius,
            seed: self.seed,
            accept_probable: self.accept_probable,
            ..RunParams::default()
        }
    }

    fn ar_options(&self) -> ArOptions {
        ArOptions { seed: self.seed, budget: DEFAULT_BUDGET, accept_probable: self.accept_probable }
    }
}

/// Errors in the caller's input (exit 2) rather than failed checks (exit 1).
fn is_input_error(err: &anyhow::Error) -> bool {
    match err.downcast_ref::<Error>() {
        Some(Error::Budget(_) | Error::Verification(_)) => false,
        Some(_) | None => true,
    }
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("{}: cannot read", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        anyhow!(Error::Format { path: format!("{}: $", path.display()), message: format!("malformed JSON: {e}") })
    })
}

fn algebra_at(path: &Path) -> anyhow::Result<std::sync::Arc<Algebra>> {
    if !path.exists() {
        bail!("{}: no such file", path.display());
    }
    Ok(load_algebra(path)?)
}

fn modules(source: &Source, names: &[&str]) -> anyhow::Result<Vec<Module>> {
    if let Some(path) = &source.algebra {
        let a = algebra_at(path)?;
        return names
            .iter()
            .map(|n| {
                let p = Path::new(n);
                if !p.exists() {
                    bail!("{n}: no such file");
                }
                Ok(load_module(&a, p)?)
            })
            .collect();
    }
    let entry = source.entry.as_deref().expect("clap requires a source");
    let dir = default_corpus_dir();
    let corpus = load_corpus(&dir)?;
    let e = corpus
        .entry(entry)
        .ok_or_else(|| anyhow!("{}: entries: no entry `{entry}`", dir.join("manifest.json").display()))?;
    names
        .iter()
        .map(|n| e.module(n).cloned().ok_or_else(|| anyhow!("{}: modules: no module `{n}` in `{entry}`", dir.join(entry).display())))
        .collect()
}

fn sequence_json(ar: &AlmostSplitSequence) -> Value {
    let summands: Vec<Value> = ar
        .decomposition
        .summands
        .iter()
        .map(|s| json!({"key": s.key.to_string(), "dim": s.module.dim(), "multiplicity": s.multiplicity, "projective": s.projective}))
        .collect();
    json!({
        "end_dim": ar.end.dim(),
        "tau_end_dim": ar.tau_end.dim(),
        "middle_dim": ar.middle.dim(),
        "alpha": ar.alpha(),
        "summands": summands,
        "lifts_checked": ar.lifts_checked,
    })
}

fn validate(path: &Path, algebra: Option<&Path>, opts: &Opts) -> anyhow::Result<(Value, bool)> {
    if path.is_dir() {
        let corpus = load_corpus(path)?;
        let mut ok = true;
        let entries: Vec<Value> = corpus
            .entries
            .iter()
            .map(|e| {
                let report = validate_algebra(e.algebra.presentation());
                ok &= report.is_ok() && e.algebra.is_symmetric();
                json!({
                    "name": e.name,
                    "algebra": e.algebra.name(),
                    "checks": report.checks,
                    "symmetric": e.algebra.is_symmetric(),
                    "modules": e.modules.len(),
                    "claims": e.claims.len(),
                })
            })
            .collect();
        return Ok((json!({"kind": "corpus", "ok": ok, "entries": entries}), ok));
    }
    if let Some(a) = algebra {
        let a = algebra_at(a)?;
        if !path.exists() {
            bail!("{}: no such file", path.display());
        }
        let m = load_module(&a, path)?;
        let doc = json!({
            "kind": "module",
            "ok": true,
            "name": m.name(),
            "dim": m.dim(),
            "projective": m.is_projective(),
            "indecomposable": indecomposable(&m, opts.seed).is_some(),
        });
        return Ok((doc, true));
    }
    let pres = algebra_from_json(&read_json(path)?).map_err(|e| match e {
        Error::Format { path: p, message } => Error::Format { path: format!("{}: {p}", path.display()), message },
        other => other,
    })?;
    let report = validate_algebra(&pres);
    let symmetric = report.is_ok().then(|| Algebra::new(pres.clone()).map(|a| a.is_symmetric())).transpose()?;
    let ok = report.is_ok() && symmetric == Some(true);
    Ok((json!({"kind": "algebra", "ok": ok, "name": pres.name, "checks": report.checks, "symmetric": symmetric}), ok))
}

fn verify(names: &[String], opts: &Opts) -> anyhow::Result<(Value, bool)> {
    let mut suites: Vec<Option<Suite>> = Vec::new();
    for n in names {
        match n.as_str() {
            "claims" => suites.push(None),
            "all" => suites.extend(Suite::ALL.map(Some)),
            s => suites.push(Some(s.parse::<Suite>().map_err(|e| anyhow!(Error::InvalidInput(e)))?)),
        }
    }
    if suites.is_empty() {
        suites.push(None);
        suites.extend(Suite::ALL.map(Some));
    }
    let wb = Workbench::load(&default_corpus_dir(), opts.params())?;
    let mut ok = true;
    let mut reports = Vec::new();
    for s in suites {
        let t = Instant::now();
        let r = match s {
            Some(s) => wb.run(s),
            None => wb.check_claims(),
        };
        eprintln!("{}: {} passed, {} failed, {} skipped ({:.1?})", r.suite, r.passed, r.failed, r.skipped, t.elapsed());
        ok &= r.ok();
        reports.push(serde_json::to_value(&r)?);
    }
    Ok((json!({"ok": ok, "reports": reports}), ok))
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let opts = &cli.opts;
    let (doc, ok) = match &cli.cmd {
        Cmd::Validate { path, algebra } => validate(path, algebra.as_deref(), opts)?,
        Cmd::Ext { source, m, n, from, to } => {
            let mods = modules(source, &[m, n])?;
            let to = to.unwrap_or(opts.window as i64);
            if to < *from {
                bail!(Error::InvalidInput(format!("empty degree range {from}..{to}")));
            }
            let t = ext_table(&mods[0], &mods[1], *from, to)?;
            let dims: serde_json::Map<String, Value> = t.dims.iter().map(|(i, d)| (i.to_string(), json!(d))).collect();
            (json!({"source": mods[0].name(), "target": mods[1].name(), "dims": dims}), true)
        }
        Cmd::Extdeg { source, m } => {
            let m = modules(source, &[m])?.remove(0);
            (serde_json::to_value(ext_deg(&m, opts.window, opts.guard)?)?, true)
        }
        Cmd::Ar { source, m, edge_list } => {
            let m = modules(source, &[m])?.remove(0);
            let ar = ar_sequence_with(&m, opts.ar_options())?;
            let mut doc = json!({"module": m.name(), "sequence": sequence_json(&ar)});
            if opts.radius > 0 {
                let g = build_component(&m, opts.radius, DEFAULT_BUDGET, opts.ar_options())?;
                if let Some(p) = edge_list {
                    std::fs::write(p, g.edge_list()).with_context(|| format!("{}: cannot write", p.display()))?;
                }
                doc["component"] = g.to_json();
            }
            (doc, true)
        }
        Cmd::Verify { suites } => verify(suites, opts)?,
    };
    let text = serde_json::to_string_pretty(&doc)?;
    if let Some(p) = &opts.json_out {
        std::fs::write(p, format!("{text}\n")).with_context(|| format!("{}: cannot write", p.display()))?;
    }
    // A closed pipe (`stabext ... | head`) is not an error.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(if is_input_error(&err) { 2 } else { 1 })
        }
    }
}
