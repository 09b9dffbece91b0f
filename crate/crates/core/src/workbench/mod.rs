//! Corpus, fixtures, verification suites and reports.

pub mod corpus;
pub mod fixtures;
pub mod report;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

pub use corpus::{default_corpus_dir, evaluate_claims, load_corpus, CandidateRecord, Claim, Corpus, CorpusEntry, FixtureSelection};
pub use report::{CheckRecord, SuiteReport, Status};

use crate::arquiver::{build_component, ArOptions, ComponentGraph};
use crate::extdeg::{ext_deg, ExtDegResult, Verdict, DEFAULT_GUARD, DEFAULT_WINDOW};
use crate::modcat::Module;
use crate::resolve::syzygy;
use crate::{Error, Result};

/// Parameters shared by every suite of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunParams {
    pub window: usize,
    pub guard: usize,
    pub radius: usize,
    /// Decomposition trial budget, also the cap on AR sequences per component.
    pub budget: usize,
    pub seed: u64,
    pub accept_probable: bool,
    /// Random draws per pair in the dimension-shift suite.
    pub draws: usize,
    /// Number of syzygy steps in the Ω-perfect suite.
    pub perfect_bound: usize,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            window: DEFAULT_WINDOW,
            guard: DEFAULT_GUARD,
            radius: 4,
            budget: crate::decomp::DEFAULT_BUDGET,
            seed: 0,
            accept_probable: false,
            draws: 50,
            perfect_bound: 10,
        }
    }
}

impl RunParams {
    pub fn ar_options(&self) -> ArOptions {
        ArOptions { seed: self.seed, budget: self.budget, accept_probable: self.accept_probable }
    }
}

/// The verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    DimensionShift,
    Indices,
    MiddleTerm,
    Cone,
    Jump,
    Perp,
    Tubes,
    OmegaPerfect,
    Quasilength,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::DimensionShift,
        Suite::Indices,
        Suite::MiddleTerm,
        Suite::Cone,
        Suite::Jump,
        Suite::Perp,
        Suite::Tubes,
        Suite::OmegaPerfect,
        Suite::Quasilength,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DimensionShift => "dimension_shift",
            Suite::Indices => "indices",
            Suite::MiddleTerm => "middle_term",
            Suite::Cone => "cone",
            Suite::Jump => "jump",
            Suite::Perp => "perp",
            Suite::Tubes => "tubes",
            Suite::OmegaPerfect => "omega_perfect",
            Suite::Quasilength => "quasilength",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite `{s}`; expected one of {}", names.join(", "))
        })
    }
}

type Shared<T> = std::result::Result<Arc<T>, String>;

/// A corpus with run parameters and memoized components and verdicts.
pub struct Workbench {
    pub corpus: Corpus,
    pub params: RunParams,
    components: Vec<OnceLock<Option<Shared<ComponentGraph>>>>,
    degrees: Mutex<BTreeMap<(usize, usize), ExtDegResult>>,
}

impl Workbench {
    pub fn new(corpus: Corpus, params: RunParams) -> Self {
        let components = corpus.entries.iter().map(|_| OnceLock::new()).collect();
        Workbench { corpus, params, components, degrees: Mutex::new(BTreeMap::new()) }
    }

    pub fn load(dir: &Path, params: RunParams) -> Result<Self> {
        Ok(Workbench::new(load_corpus(dir)?, params))
    }

    /// The component of entry `idx` around its root at the run radius;
    /// `None` when the entry has no root.
    pub fn component(&self, idx: usize) -> Option<Shared<ComponentGraph>> {
        self.components[idx]
            .get_or_init(|| {
                let root = self.corpus.entries[idx].root()?;
                Some(
                    build_component(root, self.params.radius, self.params.budget, self.params.ar_options())
                        .map(Arc::new)
                        .map_err(|e| e.to_string()),
                )
            })
            .clone()
    }

    /// `ext_deg` of vertex `v` of the component of entry `idx`, memoized.
    pub fn vertex_ext_deg(&self, idx: usize, g: &ComponentGraph, v: usize) -> Result<ExtDegResult> {
        if let Some(r) = self.degrees.lock().expect("verdict cache").get(&(idx, v)) {
            return Ok(r.clone());
        }
        let r = ext_deg(&g.vertex(v).module, self.params.window, self.params.guard)?;
        self.degrees.lock().expect("verdict cache").insert((idx, v), r.clone());
        Ok(r)
    }

    pub fn run(&self, suite: Suite) -> SuiteReport {
        match suite {
            Suite::DimensionShift => self.suite_dimension_shift(),
            Suite::Indices => self.suite_indices(),
            Suite::MiddleTerm => self.suite_middle_term(),
            Suite::Cone => self.suite_cone(),
            Suite::Jump => self.suite_jump(),
            Suite::Perp => self.suite_perp(),
            Suite::Tubes => self.suite_tubes(),
            Suite::OmegaPerfect => self.suite_omega_perfect(),
            Suite::Quasilength => self.suite_quasilength(),
        }
    }

    /// Claims of every corpus entry, as one report.
    pub fn check_claims(&self) -> SuiteReport {
        let checks = self.corpus.entries.iter().flat_map(|e| evaluate_claims(e, &self.params)).collect();
        SuiteReport::new("claims", "every expected value recorded in the corpus is reproduced", &self.params, checks)
    }
}

/// Candidates evaluated by default when searching for the Liu–Schulz module.
pub const LIU_SCHULZ_SEARCH_BUDGET: usize = 25;
/// Guard used when selecting the Liu–Schulz module.
pub const LIU_SCHULZ_GUARD: usize = 10;

/// Coefficients `(c1, c2)` of `u = x0 + c1 x1 + c2 x2`, in search order:
/// the reference generator `x0 + x1` first, then a small grid.
fn liu_schulz_candidates() -> Vec<(i64, i64)> {
    let grid = [0i64, 1, -1, 2, -2];
    let mut out = vec![(1, 0)];
    for &c1 in &grid {
        for &c2 in &grid {
            if (c1, c2) != (1, 0) {
                out.push((c1, c2));
            }
        }
    }
    out
}

/// First degree `i <= window` where `dim Ω^i M` exceeds `cap`.
fn syzygy_growth(m: &Module, window: usize, cap: usize) -> Option<usize> {
    let mut cur = m.clone();
    for i in 1..=window {
        cur = syzygy(&cur);
        if cur.dim() > cap {
            return Some(i);
        }
    }
    None
}

/// The Liu–Schulz entry over `Q` with parameter `q`.
///
/// The module `M` is the cyclic ideal `R u` for the first candidate `u`
/// (reference generator first, see [`fixtures::liu_schulz_module`]) whose
/// extension degree is `Finite(1)` at window 20, guard 10. Candidates whose
/// syzygies outgrow twice the algebra dimension are dropped without
/// computing Ext. The search is recorded in the entry's selection.
pub fn build_liu_schulz_fixture(q: i64, search_budget: usize) -> Result<CorpusEntry> {
    build_liu_schulz_fixture_with(q, search_budget, DEFAULT_WINDOW, LIU_SCHULZ_GUARD)
}

pub fn build_liu_schulz_fixture_with(q: i64, search_budget: usize, window: usize, guard: usize) -> Result<CorpusEntry> {
    if matches!(q, -1..=1) {
        return Err(Error::InvalidInput(format!("q = {q} has finite multiplicative order")));
    }
    let algebra = fixtures::liu_schulz_algebra(q);
    if !algebra.is_symmetric() {
        return Err(Error::NotSymmetric(format!("no symmetrizing form found for {}", algebra.name())));
    }
    let cap = 2 * algebra.dim();
    let mut candidates = Vec::new();
    let mut chosen = None;
    for (c1, c2) in liu_schulz_candidates().into_iter().take(search_budget) {
        let m = fixtures::liu_schulz_cyclic(&algebra, c1, c2);
        let generator = fixtures::liu_schulz_generator(c1, c2);
        let outcome = match syzygy_growth(&m, window, cap) {
            Some(i) => format!("dropped: dim Ω^{i} exceeds {cap}"),
            None => ext_deg(&m, window, guard)?.verdict.to_string(),
        };
        let hit = outcome == Verdict::Finite(1).to_string();
        candidates.push(CandidateRecord { generator: generator.clone(), outcome });
        if hit {
            chosen = Some((m, generator));
            break;
        }
    }
    let Some((m, generator)) = chosen else {
        return Err(Error::Budget(format!("no Finite(1) cyclic module among {} candidates", candidates.len())));
    };
    let selection = FixtureSelection {
        procedure: "cyclic ideals R(x0 + c1 x1 + c2 x2), reference generator x0 + x1 first, then c1, c2 over \
                    0, 1, -1, 2, -2; first candidate with ext.deg Finite(1) is kept"
            .into(),
        window,
        guard,
        growth_cap: cap,
        candidates,
        selected: generator,
    };
    let mut x0 = vec![algebra.field().zero(); algebra.dim()];
    x0[1] = algebra.field().one();
    let modules = vec![
        m.with_name("M"),
        fixtures::cyclic_ideal(&algebra, &x0).with_name("Rx0"),
        algebra.regular_module().with_name("P"),
    ];
    Ok(CorpusEntry {
        name: format!("liu_schulz_q{q}"),
        algebra,
        modules,
        claims: Vec::new(),
        notes: String::new(),
        stress: false,
        component_root: Some("M".into()),
        shift_pair: Some(["M".into(), "Rx0".into()]),
        selection: Some(selection),
    })
}
