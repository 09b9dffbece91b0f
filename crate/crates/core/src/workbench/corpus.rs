//! The on-disk corpus.
//!
//! Layout: `manifest.json` at the root lists the entries; each entry is a
//! directory holding `algebra.json`, `modules/<name>.json`,
//! `expected.json` (claims), `notes.md` and optionally `selection.json`
//! (how a module was chosen by a search).
//!
//! The manifest also lists the allowed provenance tag kinds and which of
//! them must name an oracle; claims are checked against that list.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::report::CheckRecord;
use super::RunParams;
use crate::algebra::{load_algebra, Algebra};
use crate::arquiver::{ar_sequence_with, ArOptions};
use crate::modcat::{load_module, stable_hom, Module};
use crate::{Error, Result};

pub const MANIFEST: &str = "manifest.json";
/// Environment variable overriding the corpus directory.
pub const CORPUS_ENV: &str = "STABEXT_CORPUS";

/// `$STABEXT_CORPUS`, or the `corpus/` directory of the source tree.
pub fn default_corpus_dir() -> PathBuf {
    match std::env::var_os(CORPUS_ENV) {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("..").join("..").join("corpus"),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tag_kinds: Vec<String>,
    /// Tag kinds whose note must name the oracle that produced the value.
    pub oracle_required: Vec<String>,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    /// Module file stems, in the order suites visit them.
    pub modules: Vec<String>,
    /// Stress entries feed decomposition and periodicity checks only.
    #[serde(default)]
    pub stress: bool,
    /// Module whose AR component the suites explore.
    #[serde(default)]
    pub component_root: Option<String>,
    /// Pair used by the dimension-shift suite.
    #[serde(default)]
    pub shift_pair: Option<[String; 2]>,
}

/// One expected result.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub check: String,
    #[serde(default)]
    pub module: Option<String>,
    #[serde(default)]
    pub target: Option<String>,
    #[serde(default)]
    pub degree: Option<i64>,
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default)]
    pub guard: Option<usize>,
    pub expect: Value,
    pub provenance: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Expected {
    entry: String,
    claims: Vec<Claim>,
}

/// A parsed provenance tag `[KIND]` or `[KIND: note]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub kind: String,
    pub note: Option<String>,
}

/// Parses and checks a provenance tag against the manifest.
pub fn parse_provenance(s: &str, manifest: &Manifest) -> std::result::Result<Provenance, String> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| format!("`{s}` is not of the form [KIND] or [KIND: note]"))?;
    let (kind, note) = match inner.split_once(':') {
        Some((k, n)) => (k.trim(), Some(n.trim().to_string())),
        None => (inner.trim(), None),
    };
    if kind.is_empty() || !kind.chars().all(|c| c.is_ascii_uppercase()) {
        return Err(format!("tag kind `{kind}` must be upper-case letters"));
    }
    if !manifest.tag_kinds.iter().any(|k| k == kind) {
        return Err(format!("unknown tag kind `{kind}`; allowed: {}", manifest.tag_kinds.join(", ")));
    }
    if manifest.oracle_required.iter().any(|k| k == kind) && note.as_deref().is_none_or(str::is_empty) {
        return Err(format!("`{kind}` values must name their oracle"));
    }
    Ok(Provenance { kind: kind.to_string(), note })
}

/// A record of a fixture search: what was tried and what was kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureSelection {
    pub procedure: String,
    pub window: usize,
    pub guard: usize,
    /// Candidates whose syzygies grew past this dimension were dropped.
    pub growth_cap: usize,
    pub candidates: Vec<CandidateRecord>,
    pub selected: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub generator: String,
    pub outcome: String,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub algebra: Arc<Algebra>,
    pub modules: Vec<Module>,
    pub claims: Vec<Claim>,
    pub notes: String,
    pub stress: bool,
    pub component_root: Option<String>,
    pub shift_pair: Option<[String; 2]>,
    pub selection: Option<FixtureSelection>,
}

impl CorpusEntry {
    pub fn module(&self, name: &str) -> Option<&Module> {
        self.modules.iter().find(|m| m.name() == Some(name))
    }

    pub fn nonprojective(&self) -> impl Iterator<Item = &Module> {
        self.modules.iter().filter(|m| !m.is_projective())
    }

    pub fn root(&self) -> Option<&Module> {
        self.component_root.as_deref().and_then(|r| self.module(r))
    }
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub dir: PathBuf,
    pub manifest: Manifest,
    pub entries: Vec<CorpusEntry>,
}

impl Corpus {
    pub fn entry(&self, name: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn format_err(path: &Path, field: &str, message: impl Into<String>) -> Error {
    Error::Format { path: format!("{}: {field}", path.display()), message: message.into() }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| format_err(path, "$", e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| format_err(path, "$", format!("malformed JSON: {e}")))
}

fn decode<T: serde::de::DeserializeOwned>(path: &Path, v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| format_err(path, "$", e.to_string()))
}

pub fn load_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join(MANIFEST);
    decode(&path, read_json(&path)?)
}

/// Loads one entry directory described by `item`.
pub fn load_entry(dir: &Path, item: &ManifestEntry, manifest: &Manifest) -> Result<CorpusEntry> {
    let edir = dir.join(&item.name);
    let algebra = load_algebra(&edir.join("algebra.json"))?;
    let mut modules = Vec::with_capacity(item.modules.len());
    for stem in &item.modules {
        let m = load_module(&algebra, &edir.join("modules").join(format!("{stem}.json")))?;
        modules.push(if m.name() == Some(stem.as_str()) { m } else { m.with_name(stem.clone()) });
    }
    let exp_path = edir.join("expected.json");
    let expected: Expected = decode(&exp_path, read_json(&exp_path)?)?;
    if expected.entry != item.name {
        return Err(format_err(&exp_path, "entry", format!("names `{}`, expected `{}`", expected.entry, item.name)));
    }
    for (i, c) in expected.claims.iter().enumerate() {
        parse_provenance(&c.provenance, manifest).map_err(|m| format_err(&exp_path, &format!("claims[{i}].provenance"), m))?;
        for (field, name) in [("module", &c.module), ("target", &c.target)] {
            if let Some(n) = name {
                if !item.modules.contains(n) {
                    return Err(format_err(&exp_path, &format!("claims[{i}].{field}"), format!("no module `{n}` in this entry")));
                }
            }
        }
    }
    let notes = std::fs::read_to_string(edir.join("notes.md")).unwrap_or_default();
    let sel_path = edir.join("selection.json");
    let selection = if sel_path.exists() { Some(decode(&sel_path, read_json(&sel_path)?)?) } else { None };
    let named = item.component_root.iter().chain(item.shift_pair.iter().flatten());
    for n in named {
        if !item.modules.contains(n) {
            return Err(format_err(&dir.join(MANIFEST), "entries", format!("entry `{}` has no module `{n}`", item.name)));
        }
    }
    Ok(CorpusEntry {
        name: item.name.clone(),
        algebra,
        modules,
        claims: expected.claims,
        notes,
        stress: item.stress,
        component_root: item.component_root.clone(),
        shift_pair: item.shift_pair.clone(),
        selection,
    })
}

pub fn load_corpus(dir: &Path) -> Result<Corpus> {
    let manifest = load_manifest(dir)?;
    let entries = manifest.entries.iter().map(|item| load_entry(dir, item, &manifest)).collect::<Result<Vec<_>>>()?;
    Ok(Corpus { dir: dir.to_path_buf(), manifest, entries })
}

fn claim_module<'a>(entry: &'a CorpusEntry, name: &Option<String>, field: &str) -> std::result::Result<&'a Module, String> {
    let n = name.as_deref().ok_or_else(|| format!("claim needs `{field}`"))?;
    entry.module(n).ok_or_else(|| format!("no module `{n}`"))
}

/// Whether every key of `expect` appears in `actual` with the same value.
fn json_subset(expect: &Value, actual: &Value) -> bool {
    match (expect, actual) {
        (Value::Object(e), Value::Object(a)) => e.iter().all(|(k, v)| a.get(k).is_some_and(|w| json_subset(v, w))),
        _ => expect == actual,
    }
}

fn evaluate(entry: &CorpusEntry, c: &Claim, params: &RunParams) -> std::result::Result<Value, String> {
    let window = c.window.unwrap_or(params.window);
    let guard = c.guard.unwrap_or(params.guard);
    let e = |err: Error| err.to_string();
    Ok(match c.check.as_str() {
        "symmetric" => json!(entry.algebra.is_symmetric()),
        "dim" => json!(claim_module(entry, &c.module, "module")?.dim()),
        "projective" => json!(claim_module(entry, &c.module, "module")?.is_projective()),
        "indecomposable" => {
            json!(crate::decomp::indecomposable(claim_module(entry, &c.module, "module")?, params.seed).is_some())
        }
        "ext_deg" => {
            let r = crate::extdeg::ext_deg(claim_module(entry, &c.module, "module")?, window, guard).map_err(e)?;
            serde_json::to_value(r).expect("verdicts serialize")
        }
        "ext_hat" => {
            let m = claim_module(entry, &c.module, "module")?;
            let n = claim_module(entry, &c.target, "target")?;
            let i = c.degree.ok_or("claim needs `degree`")?;
            json!(crate::resolve::ext_hat(m, n, i).map_err(e)?)
        }
        "period" => {
            let m = claim_module(entry, &c.module, "module")?;
            json!(crate::resolve::detect_syzygy_period(m, window).map(|p| p.n))
        }
        "stable_endo" => {
            let m = claim_module(entry, &c.module, "module")?;
            json!(stable_hom(m, m).map_err(e)?.stable_dim())
        }
        "alpha" => {
            let m = claim_module(entry, &c.module, "module")?;
            let opts = ArOptions { seed: params.seed, budget: params.budget, accept_probable: params.accept_probable };
            json!(ar_sequence_with(m, opts).map_err(e)?.alpha())
        }
        other => return Err(format!("unknown check kind `{other}`")),
    })
}

/// Evaluates every claim of an entry.
pub fn evaluate_claims(entry: &CorpusEntry, params: &RunParams) -> Vec<CheckRecord> {
    entry
        .claims
        .iter()
        .map(|c| match evaluate(entry, c, params) {
            Ok(actual) => {
                let ok = json_subset(&c.expect, &actual);
                CheckRecord::new(&entry.name, &c.id, ok, json!({ "expect": c.expect, "actual": actual, "provenance": c.provenance }))
            }
            Err(msg) => CheckRecord::new(&entry.name, &c.id, false, json!({ "expect": c.expect, "provenance": c.provenance }))
                .with_reason(msg),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest() -> Manifest {
        Manifest { tag_kinds: vec!["A".into(), "B".into()], oracle_required: vec!["B".into()], entries: vec![] }
    }

    #[test]
    fn provenance_tags() {
        let m = manifest();
        assert_eq!(parse_provenance("[A]", &m).unwrap(), Provenance { kind: "A".into(), note: None });
        assert_eq!(parse_provenance("[B: ext tables]", &m).unwrap().note.as_deref(), Some("ext tables"));
        assert!(parse_provenance("[B]", &m).is_err());
        assert!(parse_provenance("[C: x]", &m).is_err());
        assert!(parse_provenance("A", &m).is_err());
        assert!(parse_provenance("[a]", &m).is_err());
    }

    #[test]
    fn subset_matching() {
        let actual = json!({"verdict": "Finite", "m": 1, "window": 20});
        assert!(json_subset(&json!({"verdict": "Finite", "m": 1}), &actual));
        assert!(!json_subset(&json!({"verdict": "Finite", "m": 2}), &actual));
        assert!(json_subset(&json!(3), &json!(3)));
    }
}
