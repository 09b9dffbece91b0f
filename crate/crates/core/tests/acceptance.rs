//! Acceptance criteria 1-8. Runs sequentially, prints one line per
//! criterion and exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stabext_core::arquiver::{ar_sequence_with, build_component, AlmostSplitSequence, ComponentGraph};
use stabext_core::decomp::{decompose, is_iso, DEFAULT_BUDGET};
use stabext_core::extdeg::{cone_layers, ext_deg, Verdict};
use stabext_core::modcat::{hom_space, stable_hom};
use stabext_core::resolve::{detect_syzygy_period, ext_hat};
use stabext_core::workbench::{default_corpus_dir, load_corpus, Corpus, CorpusEntry, RunParams, Status, Suite, Workbench};
use stabext_core::xfield::{FieldSpec, Matrix};
use stabext_core::Module;

const LS: &str = "liu_schulz_q2";
const LS_GUARD: usize = 10;
const WINDOW: usize = 20;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, || format!("took {:.1?}, limit {limit:?}", t.elapsed()))
}

fn entry<'a>(c: &'a Corpus, name: &str) -> &'a CorpusEntry {
    c.entry(name).unwrap_or_else(|| panic!("corpus has no entry {name}"))
}

fn ls_params() -> RunParams {
    RunParams { guard: LS_GUARD, ..RunParams::default() }
}

/// Tube exclusion over F3[x]/(x^3) and F2[x]/(x^2).
fn criterion_1(c: &Corpus) -> Outcome {
    let t = Instant::now();
    let mut seen = 0;
    for name in ["f3_x3", "f2_x2"] {
        let e = entry(c, name);
        // All nonprojective indecomposables k[x]/(x^i), i < n, are present.
        let dims: BTreeSet<usize> = e.nonprojective().map(Module::dim).collect();
        let n = e.algebra.dim();
        ensure(dims == (1..n).collect(), || format!("{name}: nonprojective dims {dims:?}"))?;
        for m in e.nonprojective() {
            let label = format!("{name}/{}", m.name().unwrap_or("?"));
            let r = ext_deg(m, WINDOW, 8).map_err(|err| format!("{label}: {err}"))?;
            let Verdict::Infinite { period, stable_endo_dim } = r.verdict else {
                return Err(format!("{label}: verdict {}", r.verdict));
            };
            let cert = detect_syzygy_period(m, WINDOW).ok_or_else(|| format!("{label}: no period certificate"))?;
            ensure(cert.n == period, || format!("{label}: period {period} vs certificate {}", cert.n))?;
            ensure(stable_endo_dim > 0, || format!("{label}: zero stable endomorphisms"))?;
            let stable = stable_hom(m, m).map_err(|e| e.to_string())?.stable_dim();
            ensure(stable == stable_endo_dim && common::stable_hom_dim(m, m) == stable, || format!("{label}: stable End mismatch"))?;
            for k in 1..=3 {
                let d = ext_hat(m, m, (k * period) as i64).map_err(|e| e.to_string())?;
                ensure(d == stable, || format!("{label}: dim Ext^{} = {d}, stable End {stable}", k * period))?;
            }
            let oracle = common::ext_dims(m, m, 3 * period);
            ensure((1..=3).all(|k| oracle[k * period - 1] == stable), || format!("{label}: oracle disagrees: {oracle:?}"))?;
            seen += 1;
        }
    }
    within(t, Duration::from_secs(5))?;
    Ok(format!("{seen} modules Infinite with period and stable End certificates"))
}

/// Dimension shift on the corpus pairs plus the cocycle oracle.
fn criterion_2(c: &Corpus) -> Outcome {
    let t = Instant::now();
    let pairs: Vec<&CorpusEntry> = c.entries.iter().filter(|e| e.shift_pair.is_some()).collect();
    ensure(pairs.len() == 5, || format!("{} shift pairs", pairs.len()))?;
    let wb = Workbench::new(c.clone(), RunParams { draws: 50, ..RunParams::default() });
    let r = wb.run(Suite::DimensionShift);
    let draws = r.checks.iter().filter(|k| k.name.contains(" i=")).count();
    ensure(draws == 250, || format!("{draws} draws"))?;
    ensure(r.ok(), || format!("{} failed: {:?}", r.failed, r.failures().next().map(|f| (&f.entry, &f.name))))?;
    for e in pairs {
        let [a, b] = e.shift_pair.as_ref().unwrap();
        let (m, n) = (e.module(a).unwrap(), e.module(b).unwrap());
        let oracle = common::ext_dims(m, n, 5);
        for i in 1..=5 {
            let got = ext_hat(m, n, i as i64).map_err(|e| e.to_string())?;
            ensure(got == oracle[i - 1], || format!("{}: Ext^{i}({a},{b}) = {got}, oracle {}", e.name, oracle[i - 1]))?;
        }
    }
    within(t, Duration::from_secs(30))?;
    Ok(format!("{draws} shift draws and 25 oracle degrees agree"))
}

/// Liu-Schulz headline; returns the radius-4 component for later criteria.
fn criterion_3(c: &Corpus) -> (Outcome, Option<ComponentGraph>) {
    let t = Instant::now();
    let e = entry(c, LS);
    let m = e.module("M").unwrap();
    let run = || -> Result<(String, ComponentGraph), String> {
        let r = ext_deg(m, WINDOW, LS_GUARD).map_err(|e| e.to_string())?;
        ensure(r.verdict == Verdict::Finite(1), || format!("M: {}", r.verdict))?;
        let base = r.dim(1).unwrap();
        let g = build_component(m, 4, DEFAULT_BUDGET, ls_params().ar_options()).map_err(|e| e.to_string())?;
        let qls = g.quasi_lengths();
        let mut found = Vec::new();
        for l in 1..=3usize {
            let xs: Vec<usize> = (0..g.vertices.len()).filter(|&v| qls[v] == Some(l)).collect();
            ensure(!xs.is_empty(), || format!("no vertex of quasi-length {l}"))?;
            for &v in &xs {
                let x = &g.vertex(v).module;
                let r = ext_deg(x, WINDOW, LS_GUARD).map_err(|e| e.to_string())?;
                let want = 1 + 2 * l;
                ensure(r.verdict == Verdict::Finite(want), || format!("{} (ql {l}): {}", g.vertex(v).name(), r.verdict))?;
                let top = r.dim(want as i64).unwrap();
                ensure(top == base, || format!("{}: dim Ext^{want} = {top}, dim Ext^1(M,M) = {base}", g.vertex(v).name()))?;
            }
            found.push(format!("ql {l}: {} x Finite({})", xs.len(), 1 + 2 * l));
        }
        Ok((format!("M Finite(1); {}", found.join(", ")), g))
    };
    match run() {
        Ok((msg, g)) => (within(t, Duration::from_secs(120)).map(|_| msg), Some(g)),
        Err(msg) => (Err(msg), None),
    }
}

/// Middle-term and jump laws on every AR sequence of the radius-3 component.
fn criterion_4(c: &Corpus) -> Outcome {
    let mut only = c.clone();
    only.entries.retain(|e| e.name == LS);
    let wb = Workbench::new(only, RunParams { radius: 3, ..ls_params() });
    let g = wb.component(0).ok_or("no component")??;
    let expanded = g.vertices.iter().filter(|v| v.expanded()).count();
    let mid = wb.run(Suite::MiddleTerm);
    let jump = wb.run(Suite::Jump);
    for r in [&mid, &jump] {
        ensure(r.ok(), || format!("{}: {:?}", r.suite, r.failures().map(|f| &f.name).collect::<Vec<_>>()))?;
    }
    ensure(mid.passed == expanded, || format!("middle term checked on {} of {expanded} sequences", mid.passed))?;
    ensure(jump.passed > 0, || "jump law never applicable".into())?;
    Ok(format!("{} middle-term and {} jump checks on {expanded} sequences ({} without a lower summand)", mid.passed, jump.passed, jump.skipped))
}

/// Cone law for d = 0..3 with an independent membership recursion.
fn criterion_5(g: &ComponentGraph) -> Outcome {
    let layers = cone_layers(g, 3).map_err(|e| e.to_string())?;
    ensure(layers.len() == 4, || format!("{} layers", layers.len()))?;
    for layer in &layers {
        let parts: Vec<Module> = layer.members.iter().map(|&v| g.vertex(v).module.clone()).collect();
        let sum = Module::direct_sum(&parts).map_err(|e| e.to_string())?;
        let r = ext_deg(&sum, WINDOW, LS_GUARD).map_err(|e| e.to_string())?;
        ensure(r.verdict == Verdict::Finite(1 + 2 * layer.d), || format!("C^{}: {}", layer.d, r.verdict))?;
    }
    // C^{d+1} = nonprojective summands of the middle terms ending in C^d,
    // matched to vertices by isomorphism.
    for d in 0..3 {
        let mut expect = BTreeSet::new();
        for &y in &layers[d].members {
            let ar = g.vertex(y).ar.as_ref().ok_or("cone member not expanded")?;
            for s in ar.decomposition.nonprojective() {
                let z = (0..g.vertices.len())
                    .find(|&z| is_iso(&g.vertex(z).module, &s.module).is_iso())
                    .ok_or_else(|| format!("summand of E at {} is not a vertex", g.vertex(y).name()))?;
                expect.insert(z);
            }
        }
        let got: BTreeSet<usize> = layers[d + 1].members.iter().copied().collect();
        ensure(got == expect, || format!("C^{}: {got:?}, recursion gives {expect:?}", d + 1))?;
    }
    let sizes: Vec<usize> = layers.iter().map(|l| l.members.len()).collect();
    Ok(format!("ext.deg(C^d) = 1+2d for d = 0..3, layer sizes {sizes:?}"))
}

fn criterion_6(g: &ComponentGraph) -> Outcome {
    let alphas: Vec<usize> = g.vertices.iter().filter_map(|v| v.alpha).collect();
    ensure(alphas.contains(&1), || "no vertex of valence 1".into())?;
    let max = alphas.iter().max().copied().unwrap_or(0);
    ensure(max <= 2, || format!("valence {max}"))?;
    Ok(format!("{} vertices, {} expanded, valences in 1..={max}", g.vertices.len(), alphas.len()))
}

fn criterion_7(c: &Corpus) -> Outcome {
    let wb = Workbench::new(c.clone(), RunParams::default());
    let r = wb.run(Suite::Perp);
    let tot: Vec<_> = r.checks.iter().filter(|k| k.name.starts_with("two of three")).collect();
    ensure(!tot.is_empty(), || "no sequences checked".into())?;
    let bad: Vec<_> = tot.iter().filter(|k| k.status == Status::Fail).map(|k| format!("{}: {}", k.entry, k.name)).collect();
    ensure(bad.is_empty(), || format!("counterexamples: {bad:?}"))?;
    Ok(format!("{} two-of-three checks, slack 1 below the window", tot.len()))
}

fn rank_nullity(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let fields = [FieldSpec::prime(2).unwrap(), FieldSpec::prime(3).unwrap(), FieldSpec::prime(101).unwrap(), FieldSpec::Rational];
    for k in 0..200 {
        let f = fields[k % fields.len()];
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        // Sparse-ish entries so ranks vary.
        let data = (0..r * c).map(|_| if rng.gen_bool(0.4) { f.zero() } else { f.random(rng, 5) }).collect();
        let m = Matrix::from_rows(f, r, c, data);
        let ker = m.kernel_basis();
        let rows: Vec<Vec<_>> = (0..r).map(|i| m.row(i).to_vec()).collect();
        ensure(m.rank() + ker.len() == c, || format!("matrix {k}: rank {} + nullity {} != {c}", m.rank(), ker.len()))?;
        ensure(m.rank() == common::rank(&rows, c), || format!("matrix {k}: rank disagrees with elimination oracle"))?;
        ensure(ker.iter().all(|v| m.mul_vec(v).iter().all(|x| x.is_zero())), || format!("matrix {k}: kernel vector not killed"))?;
        ensure(common::rank(&ker, c) == ker.len(), || format!("matrix {k}: dependent kernel basis"))?;
    }
    Ok(200)
}

fn same_decomposition(m: &Module) -> Result<(), String> {
    let decs: Vec<_> = (0..3).map(|s| decompose(m, s)).collect();
    let classes = |i: usize| {
        let mut v: Vec<(String, usize)> = decs[i].summands.iter().map(|s| (s.key.to_string(), s.multiplicity)).collect();
        v.sort();
        v
    };
    for i in 1..3 {
        ensure(classes(0) == classes(i), || format!("{:?}: seed {i} gives {:?}, seed 0 {:?}", m.name(), classes(i), classes(0)))?;
        // Each summand class of seed i has an isomorphic partner for seed 0.
        for s in &decs[i].summands {
            let partner = decs[0].summands.iter().any(|t| t.multiplicity == s.multiplicity && is_iso(&t.module, &s.module).is_iso());
            ensure(partner, || format!("{:?}: seed {i} summand without partner", m.name()))?;
        }
    }
    Ok(())
}

/// Checks the defining property of `0 -> τM -> E -> M -> 0` directly: it
/// does not split, and every map into `M` from a test module not
/// isomorphic to `M` factors through `E -> M`.
fn lifting(ar: &AlmostSplitSequence, tests: &[&Module]) -> Result<usize, String> {
    let m = &ar.end;
    let right = ar.right.matrix();
    let through = |y: &Module| -> Result<Vec<Vec<_>>, String> {
        let h = hom_space(y, &ar.middle).map_err(|e| e.to_string())?;
        Ok(h.basis().iter().map(|b| right.mul(b).to_vec()).collect())
    };
    let id = Matrix::identity(m.field(), m.dim()).to_vec();
    let span = through(m)?;
    let mut with_id = span.clone();
    with_id.push(id);
    let n = m.dim() * m.dim();
    ensure(common::rank(&with_id, n) > common::rank(&span, n), || "sequence splits".into())?;
    let mut checked = 0;
    for y in tests {
        if y.dim() == m.dim() && is_iso(y, m).is_iso() {
            continue;
        }
        let span = through(y)?;
        let n = m.dim() * y.dim();
        let base = common::rank(&span, n);
        for f in hom_space(y, m).map_err(|e| e.to_string())?.basis() {
            let mut s = span.clone();
            s.push(f.to_vec());
            ensure(common::rank(&s, n) == base, || format!("a map {:?} -> {:?} does not lift", y.name(), m.name()))?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn criterion_8(c: &Corpus, g: &ComponentGraph) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let matrices = rank_nullity(&mut rng)?;

    let opts = RunParams::default().ar_options();
    let mut modules = 0;
    let mut sequences: Vec<AlmostSplitSequence> = Vec::new();
    for e in &c.entries {
        for m in &e.modules {
            same_decomposition(m)?;
            modules += 1;
            if !m.is_projective() {
                let ar = ar_sequence_with(m, opts).map_err(|err| format!("{}/{:?}: {err}", e.name, m.name()))?;
                same_decomposition(&ar.middle)?;
                sequences.push(ar);
            }
        }
    }
    sequences.extend(g.vertices.iter().filter_map(|v| v.ar.clone()));
    let mut maps = 0;
    for ar in &sequences {
        let mut tests: Vec<&Module> = ar.decomposition.nonprojective().map(|s| &s.module).collect();
        tests.push(&ar.tau_end);
        if ar.end.algebra().presentation() == g.root().module.algebra().presentation() {
            tests.extend(g.vertices.iter().filter(|v| v.module.dim() <= ar.end.dim()).map(|v| &v.module));
        }
        maps += lifting(ar, &tests)?;
    }

    let run = || {
        let wb = Workbench::new(c.clone(), RunParams { radius: 2, ..RunParams::default() });
        let mut out = vec![wb.check_claims().to_json_string()];
        out.extend(Suite::ALL.iter().map(|&s| wb.run(s).to_json_string()));
        out
    };
    let (a, b) = (run(), run());
    ensure(a == b, || "reports differ between runs".into())?;
    let bytes: usize = a.iter().map(String::len).sum();

    Ok(format!(
        "{matrices} matrices; {modules} modules x 3 seeds; {} sequences, {maps} maps lifted; {} reports, {bytes} bytes identical",
        sequences.len(),
        a.len()
    ))
}

fn main() {
    let corpus = load_corpus(&default_corpus_dir()).expect("corpus loads");
    let mut results: Vec<(u8, &str, Outcome, Duration)> = Vec::new();
    let mut timed = |n: u8, title: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = f();
        let line = match &out {
            Ok(msg) => format!("criterion {n} PASS {title}: {msg}"),
            Err(msg) => format!("criterion {n} FAIL {title}: {msg}"),
        };
        println!("{line} ({:.1?})", t.elapsed());
        results.push((n, title, out, t.elapsed()));
    };

    timed(1, "tube exclusion", &mut || criterion_1(&corpus));
    timed(2, "dimension shift", &mut || criterion_2(&corpus));
    let mut component = None;
    timed(3, "Liu-Schulz degrees", &mut || {
        let (out, g) = criterion_3(&corpus);
        component = g;
        out
    });
    timed(4, "middle term and jump", &mut || criterion_4(&corpus));
    let g = component.as_ref();
    let need = || Err::<String, String>("radius-4 component unavailable".into());
    timed(5, "cone degrees", &mut || g.map_or_else(need, criterion_5));
    timed(6, "boundary and valence", &mut || g.map_or_else(need, criterion_6));
    timed(7, "two of three", &mut || criterion_7(&corpus));
    timed(8, "engine soundness", &mut || g.map_or_else(need, |g| criterion_8(&corpus, g)));

    let failed: Vec<u8> = results.iter().filter(|r| r.2.is_err()).map(|r| r.0).collect();
    println!("acceptance: {} of {} criteria pass", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
