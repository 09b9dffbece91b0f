//! The verification suites. Each visits the corpus entries in parallel and
//! reports one record per check, in corpus order.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::report::{CheckRecord, SuiteReport};
use super::Workbench;
use crate::arquiver::{ar_sequence_with, omega_perfect_test, ComponentGraph, PerfectOutcome};
use crate::decomp::is_iso_with;
use crate::extdeg::{cone_layers, ext_deg, perp, two_of_three_check, ExtDegResult, Side, Verdict};
use crate::modcat::{Module, Morphism, ShortExactSequence};
use crate::resolve::{classical_ext, detect_syzygy_period, dimension_shift, ext_hat, ext_table, syzygy_sequence};
use crate::Result;

/// Shifts and degrees in the dimension-shift suite are drawn from
/// `[-SHIFT_RANGE, SHIFT_RANGE]`.
pub const SHIFT_RANGE: i64 = 10;
/// Degrees compared against the classical Ext computation.
pub const ORACLE_DEGREES: usize = 5;
/// Component vertices up to this distance from the root serve as test
/// modules in the index suite.
pub const INDEX_NEIGHBOURHOOD: usize = 1;
/// The quasi-length formula is checked up to this quasi-length.
pub const QL_LIMIT: usize = 3;

const SHAPE_NOTE: &str = "component shape is checked only as consistent with ℤA∞ up to the build radius";
const WINDOW_NOTE: &str = "finite verdicts are relative to the window and guard";

fn dims(m: &Module, n: &Module, lo: i64, hi: i64) -> Result<BTreeMap<i64, usize>> {
    if lo > hi {
        return Ok(BTreeMap::new());
    }
    Ok(ext_table(m, n, lo, hi)?.dims)
}

fn last_nonzero(d: &BTreeMap<i64, usize>) -> Option<i64> {
    d.iter().filter(|(_, &v)| v > 0).map(|(&k, _)| k).max()
}

fn nonzero_in(d: &BTreeMap<i64, usize>, lo: i64) -> Vec<i64> {
    d.iter().filter(|(&k, &v)| k >= lo && v > 0).map(|(&k, _)| k).collect()
}

fn name(m: &Module) -> &str {
    m.name().unwrap_or("?")
}

/// `dim Êxt^i(M, M)`, read from a verdict's evidence when available.
fn self_ext(r: &ExtDegResult, m: &Module, i: usize) -> Result<usize> {
    match r.dim(i as i64) {
        Some(d) => Ok(d),
        None => ext_hat(m, m, i as i64),
    }
}

fn flatten(parts: Vec<Vec<CheckRecord>>) -> Vec<CheckRecord> {
    parts.into_iter().flatten().collect()
}

impl Workbench {
    fn entries_par(&self) -> impl IndexedParallelIterator<Item = (usize, &super::CorpusEntry)> {
        self.corpus.entries.par_iter().enumerate()
    }

    /// The component of a non-stress entry, or a record explaining why
    /// there is none.
    fn usable_component(&self, idx: usize, check: &str) -> std::result::Result<Arc<ComponentGraph>, Option<CheckRecord>> {
        let e = &self.corpus.entries[idx];
        if e.stress {
            return Err(None);
        }
        match self.component(idx) {
            None => Err(None),
            Some(Ok(g)) => Ok(g),
            Some(Err(msg)) => Err(Some(CheckRecord::new(&e.name, check, false, json!(null)).with_reason(msg))),
        }
    }

    /// Extension degree `m` of the component root, when finite.
    fn root_degree(&self, idx: usize, g: &ComponentGraph) -> Result<Option<usize>> {
        Ok(self.vertex_ext_deg(idx, g, 0)?.finite())
    }

    fn expanded(g: &ComponentGraph) -> Vec<usize> {
        g.vertices.iter().filter(|v| v.expanded()).map(|v| v.id).collect()
    }

    pub(super) fn suite_dimension_shift(&self) -> SuiteReport {
        let p = &self.params;
        let seeds: Vec<u64> = (0..self.corpus.entries.len() as u64).map(|i| p.seed.wrapping_add(i)).collect();
        let parts = self
            .entries_par()
            .map(|(idx, e)| {
                let Some([a, b]) = &e.shift_pair else { return Vec::new() };
                let (Some(m), Some(n)) = (e.module(a), e.module(b)) else {
                    return vec![CheckRecord::skipped(&e.name, "shift pair", "pair names a missing module")];
                };
                let mut out = Vec::new();
                let mut rng = ChaCha8Rng::seed_from_u64(seeds[idx]);
                for _ in 0..p.draws {
                    let [i, sm, sn] = [0; 3].map(|_| rng.gen_range(-SHIFT_RANGE..=SHIFT_RANGE));
                    let check = format!("({a},{b}) i={i} m={sm} n={sn}");
                    out.push(match dimension_shift(m, n, i, sm, sn) {
                        Ok((lhs, rhs)) => CheckRecord::new(&e.name, check, lhs == rhs, json!({"lhs": lhs, "rhs": rhs})),
                        Err(err) => CheckRecord::error(&e.name, check, &err),
                    });
                }
                match classical_ext(m, n, ORACLE_DEGREES) {
                    Ok(oracle) => {
                        for (k, &want) in oracle.iter().enumerate() {
                            let i = k as i64 + 1;
                            let check = format!("({a},{b}) classical Ext^{i}");
                            out.push(match ext_hat(m, n, i) {
                                Ok(got) => CheckRecord::new(&e.name, check, got == want, json!({"ext_hat": got, "classical": want})),
                                Err(err) => CheckRecord::error(&e.name, check, &err),
                            });
                        }
                    }
                    Err(err) => out.push(CheckRecord::error(&e.name, "classical Ext", &err)),
                }
                out
            })
            .collect();
        SuiteReport::new(
            "dimension_shift",
            "Tate cohomology is invariant under simultaneous syzygy shifts, Êxt^i(M,N) = Êxt^(i-m+n)(Ω^m M, Ω^n N) \
             for all integers i, m, n, and agrees with classical Ext in positive degrees",
            p,
            flatten(parts),
        )
        .with_seeds(seeds)
    }

    /// Both parts of the index law for one sequence `0 -> Ω²M -> N -> M -> 0`
    /// and one test module `X`.
    fn index_checks(&self, entry: &str, m: &Module, mid: &Module, x: &Module) -> Result<Vec<CheckRecord>> {
        let (b, guard) = (self.params.window as i64, self.params.guard as i64);
        let mut out = Vec::new();
        let tag = format!("X={} M={}", name(x), name(m));

        // Covariant: Êxt^k(X, M) = 0 for k > n.
        let xm = dims(x, m, 0, b)?;
        let n = last_nonzero(&xm).unwrap_or(0);
        if n + guard > b {
            out.push(CheckRecord::skipped(entry, format!("covariant {tag}"), format!("Êxt(X, M) nonzero at degree {n}, no vanishing tail")));
        } else {
            let xn = dims(x, mid, n + 2, b)?;
            let stray = nonzero_in(&xn, n + 3);
            let ok = stray.is_empty() && xn[&(n + 2)] == xm[&n];
            out.push(CheckRecord::new(
                entry,
                format!("covariant {tag}"),
                ok,
                json!({"n": n, "dim_XM_n": xm[&n], "dim_XN_n+2": xn[&(n + 2)], "nonzero_beyond": stray}),
            ));
        }

        // Contravariant: Êxt^k(M, X) = 0 for k > n; Êxt^k(N, X) uses
        // Êxt^{k+2}(M, X), so degrees up to B - 2 are decided.
        let mx = dims(m, x, 0, b)?;
        let n = last_nonzero(&mx).unwrap_or(0);
        if n + guard > b {
            out.push(CheckRecord::skipped(entry, format!("contravariant {tag}"), format!("Êxt(M, X) nonzero at degree {n}, no vanishing tail")));
        } else {
            let nx = dims(mid, x, n, b - 2)?;
            let stray = nonzero_in(&nx, n + 1);
            let ok = stray.is_empty() && nx[&n] == mx[&n];
            out.push(CheckRecord::new(
                entry,
                format!("contravariant {tag}"),
                ok,
                json!({"n": n, "dim_MX_n": mx[&n], "dim_NX_n": nx[&n], "nonzero_beyond": stray}),
            ));
        }
        Ok(out)
    }

    pub(super) fn suite_indices(&self) -> SuiteReport {
        let opts = self.params.ar_options();
        let parts = self
            .entries_par()
            .map(|(idx, e)| {
                if e.stress {
                    return Vec::new();
                }
                let mut out = Vec::new();
                // Test modules: the entry's own, plus the root's neighbours.
                let mut tests: Vec<Module> = e.nonprojective().cloned().collect();
                if let Ok(g) = self.usable_component(idx, "indices") {
                    let near = g.vertices.iter().filter(|v| v.id != 0 && v.distance <= INDEX_NEIGHBOURHOOD);
                    tests.extend(near.map(|v| v.module.clone().with_name(v.name())));
                }
                for m in e.nonprojective() {
                    let ar = match ar_sequence_with(m, opts) {
                        Ok(ar) => ar,
                        Err(err) => {
                            out.push(CheckRecord::error(&e.name, format!("AR sequence ending in {}", name(m)), &err));
                            continue;
                        }
                    };
                    for x in &tests {
                        match self.index_checks(&e.name, m, &ar.middle, x) {
                            Ok(recs) => out.extend(recs),
                            Err(err) => out.push(CheckRecord::error(&e.name, format!("X={} M={}", name(x), name(m)), &err)),
                        }
                    }
                }
                out
            })
            .collect();
        SuiteReport::new(
            "indices",
            "for 0 → Ω²M → N → M → 0: if Êxt^k(X,M) = 0 for k > n then Êxt^k(X,N) = 0 for k > n+2 and \
             Êxt^(n+2)(X,N) ≅ Êxt^n(X,M); if Êxt^k(M,X) = 0 for k > n then Êxt^k(N,X) = 0 for k > n and \
             Êxt^n(N,X) ≅ Êxt^n(M,X)",
            &self.params,
            flatten(parts),
        )
        .with_limitation(WINDOW_NOTE)
    }

    /// Runs `f` on each expanded vertex of each usable component.
    fn over_expanded<F>(&self, check: &str, f: F) -> Vec<CheckRecord>
    where
        F: Fn(usize, &super::CorpusEntry, &ComponentGraph, usize) -> Result<Vec<CheckRecord>> + Sync,
    {
        let parts = self
            .entries_par()
            .map(|(idx, e)| {
                let g = match self.usable_component(idx, check) {
                    Ok(g) => g,
                    Err(rec) => return rec.into_iter().collect(),
                };
                let per: Vec<Vec<CheckRecord>> = Self::expanded(&g)
                    .into_par_iter()
                    .map(|v| {
                        f(idx, e, &g, v).unwrap_or_else(|err| vec![CheckRecord::error(&e.name, format!("{check} at {}", g.vertex(v).name()), &err)])
                    })
                    .collect();
                flatten(per)
            })
            .collect();
        flatten(parts)
    }

    pub(super) fn suite_middle_term(&self) -> SuiteReport {
        let (w, guard) = (self.params.window, self.params.guard);
        let checks = self.over_expanded("middle term", |idx, e, g, v| {
            let x = g.vertex(v);
            let check = format!("middle term of the sequence ending in {}", x.name());
            let r = self.vertex_ext_deg(idx, g, v)?;
            let Some(m) = r.finite() else {
                return Ok(vec![CheckRecord::skipped(&e.name, check, format!("ext.deg is {}", r.verdict))]);
            };
            let ar = x.ar.as_ref().expect("expanded vertex");
            let rn = ext_deg(&ar.middle, w, guard)?;
            let want = self_ext(&r, &x.module, m)?;
            let got = self_ext(&rn, &ar.middle, m + 2)?;
            let ok = rn.verdict == Verdict::Finite(m + 2) && got == want;
            Ok(vec![CheckRecord::new(
                &e.name,
                check,
                ok,
                json!({"m": m, "middle_verdict": rn.verdict.to_string(), "dim_middle_m+2": got, "dim_end_m": want}),
            )])
        });
        SuiteReport::new(
            "middle_term",
            "if ext.deg(M) = m is finite, the middle term N of the almost split sequence ending in M has \
             ext.deg(N) = m+2 and Êxt^(m+2)(N,N) ≅ Êxt^m(M,M)",
            &self.params,
            checks,
        )
        .with_limitation(WINDOW_NOTE)
    }

    pub(super) fn suite_jump(&self) -> SuiteReport {
        let (w, guard) = (self.params.window, self.params.guard);
        let checks = self.over_expanded("jump", |idx, e, g, v| {
            let x = g.vertex(v);
            let check = format!("jump at {}", x.name());
            let r = self.vertex_ext_deg(idx, g, v)?;
            let Some(m) = r.finite() else {
                return Ok(vec![CheckRecord::skipped(&e.name, check, format!("ext.deg is {}", r.verdict))]);
            };
            let (mut low, mut rest) = (Vec::new(), Vec::new());
            for edge in g.edges.iter().filter(|ed| ed.to == v && ed.from_ar) {
                let d = self.vertex_ext_deg(idx, g, edge.from)?;
                let part = g.vertex(edge.from).module.power(edge.multiplicity);
                match d.finite() {
                    Some(n) if n < m => low.push((g.vertex(edge.from).name(), n, part)),
                    _ => rest.push((g.vertex(edge.from).name(), part)),
                }
            }
            if low.is_empty() || rest.is_empty() {
                return Ok(vec![CheckRecord::skipped(&e.name, check, "middle term has no split into lower and remaining degrees")]);
            }
            let l = Module::direct_sum(&rest.iter().map(|(_, p)| p.clone()).collect::<Vec<_>>())?;
            let rl = ext_deg(&l, w, guard)?;
            let want = self_ext(&r, &x.module, m)?;
            let got = self_ext(&rl, &l, m + 2)?;
            let ok = rl.verdict == Verdict::Finite(m + 2) && got == want;
            Ok(vec![CheckRecord::new(
                &e.name,
                check,
                ok,
                json!({
                    "m": m,
                    "lower": low.iter().map(|(n, d, _)| json!({"vertex": n, "ext_deg": d})).collect::<Vec<_>>(),
                    "rest": rest.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
                    "rest_verdict": rl.verdict.to_string(),
                    "dim_rest_m+2": got,
                    "dim_end_m": want,
                }),
            )])
        });
        SuiteReport::new(
            "jump",
            "for an almost split sequence 0 → Ω²M → N ⊕ L → M → 0 with ext.deg(N) < ext.deg(M) = m finite, \
             ext.deg(L) = m+2 and Êxt^(m+2)(L,L) ≅ Êxt^m(M,M)",
            &self.params,
            checks,
        )
        .with_limitation(WINDOW_NOTE)
    }

    fn cone_checks(&self, idx: usize, e: &super::CorpusEntry, g: &ComponentGraph) -> Result<Vec<CheckRecord>> {
        let (w, guard) = (self.params.window, self.params.guard);
        let Some(m) = self.root_degree(idx, g)? else {
            return Ok(vec![CheckRecord::skipped(&e.name, "cone", "root has no finite extension degree")]);
        };
        let root = &g.root().module;
        let mut layers = Vec::new();
        for d in 0..=g.radius {
            match cone_layers(g, d) {
                Ok(l) => layers = l,
                Err(_) => break,
            }
        }
        let mut out = Vec::new();
        for layer in &layers {
            let check = format!("ext.deg of layer {}", layer.d);
            let r = match layer.members.as_slice() {
                [v] => self.vertex_ext_deg(idx, g, *v)?,
                members => {
                    let parts: Vec<Module> = members.iter().map(|&v| g.vertex(v).module.clone()).collect();
                    ext_deg(&Module::direct_sum(&parts)?, w, guard)?
                }
            };
            let want = m + 2 * layer.d;
            out.push(CheckRecord::new(
                &e.name,
                check,
                r.verdict == Verdict::Finite(want),
                json!({"members": layer.members.iter().map(|&v| g.vertex(v).name()).collect::<Vec<_>>(), "verdict": r.verdict.to_string(), "expected": want}),
            ));
        }
        // Layer d+1 against the middle terms of the AR sequences ending in layer d.
        for pair in layers.windows(2) {
            let (cur, next) = (&pair[0], &pair[1]);
            let mut matched = vec![false; next.members.len()];
            let mut missing = Vec::new();
            for &y in &cur.members {
                let ar = g.vertex(y).ar.as_ref().expect("cone members below the last layer are expanded");
                for s in ar.decomposition.nonprojective() {
                    let hit = next.members.iter().position(|&z| {
                        is_iso_with(&g.vertex(z).module, &s.module, self.params.seed, self.params.budget).is_iso()
                    });
                    match hit {
                        Some(k) => matched[k] = true,
                        None => missing.push(format!("summand {} of the middle term at {}", s.key, g.vertex(y).name())),
                    }
                }
            }
            let extra: Vec<String> = next.members.iter().zip(&matched).filter(|(_, &h)| !h).map(|(&z, _)| g.vertex(z).name()).collect();
            out.push(CheckRecord::new(
                &e.name,
                format!("layer {} is the set of immediate predecessors of layer {}", next.d, cur.d),
                missing.is_empty() && extra.is_empty(),
                json!({"missing": missing, "unexplained": extra}),
            ));
        }
        // Vanishing inside the cone, by shortest distance to the root.
        let b = w as i64;
        let mut seen = Vec::new();
        for layer in &layers {
            for (&y, &dy) in layer.members.iter().zip(&layer.distances) {
                if seen.contains(&y) {
                    continue;
                }
                seen.push(y);
                let ym = dims(&g.vertex(y).module, root, m as i64 + 1, b)?;
                let bound = (m + 2 * dy) as i64;
                let my = dims(root, &g.vertex(y).module, bound + 1, b)?;
                let (s1, s2) = (nonzero_in(&ym, 0), nonzero_in(&my, 0));
                out.push(CheckRecord::new(
                    &e.name,
                    format!("cone vanishing at {} (distance {dy})", g.vertex(y).name()),
                    s1.is_empty() && s2.is_empty(),
                    json!({"ext_Y_M_nonzero_beyond_m": s1, "ext_M_Y_nonzero_beyond_m+2d": s2}),
                ));
            }
        }
        Ok(out)
    }

    pub(super) fn suite_cone(&self) -> SuiteReport {
        let parts = self
            .entries_par()
            .map(|(idx, e)| match self.usable_component(idx, "cone") {
                Ok(g) => self.cone_checks(idx, e, &g).unwrap_or_else(|err| vec![CheckRecord::error(&e.name, "cone", &err)]),
                Err(rec) => rec.into_iter().collect(),
            })
            .collect();
        SuiteReport::new(
            "cone",
            "for ext.deg(M) = m finite, the d-th cone layer (iterated immediate predecessors of M) has extension \
             degree m+2d; Êxt^k(Y,M) = 0 for k > m and Êxt^k(M,Y) = 0 for k > m+2d_M(Y) on the cone",
            &self.params,
            flatten(parts),
        )
        .with_limitation(WINDOW_NOTE)
        .with_limitation("layers are checked as deep as the built radius allows")
    }

    fn sequences_of(&self, idx: usize, e: &super::CorpusEntry) -> Vec<(String, Result<ShortExactSequence>, Vec<Module>)> {
        let opts = self.params.ar_options();
        let tests: Vec<Module> = e.nonprojective().cloned().collect();
        let mut out = Vec::new();
        for m in e.nonprojective() {
            let step = syzygy_sequence(m);
            out.push((
                format!("syzygy sequence of {}", name(m)),
                Ok(ShortExactSequence { left: step.left.clone(), right: step.right.clone() }),
                tests.clone(),
            ));
            out.push((format!("AR sequence ending in {}", name(m)), ar_sequence_with(m, opts).map(|a| a.sequence()), tests.clone()));
        }
        if let Ok(g) = self.usable_component(idx, "perp") {
            let root = g.root().module.clone();
            for v in Self::expanded(&g).into_iter().filter(|&v| v != 0) {
                let ar = g.vertex(v).ar.as_ref().expect("expanded");
                out.push((format!("AR sequence ending in {}", g.vertex(v).name()), Ok(ar.sequence()), vec![root.clone()]));
            }
        }
        out
    }

    fn irreducible_perp(&self, idx: usize, e: &super::CorpusEntry, g: &ComponentGraph) -> Result<Vec<CheckRecord>> {
        let (w, guard) = (self.params.window, self.params.guard);
        let mut out = Vec::new();
        if self.root_degree(idx, g)?.is_none() {
            return Ok(vec![CheckRecord::skipped(&e.name, "irreducible maps", "root has no finite extension degree")]);
        }
        for v in Self::expanded(g) {
            let x = g.vertex(v);
            let ar = x.ar.as_ref().expect("expanded");
            for (k, (f, gmap)) in ar.irreducible_maps().into_iter().enumerate() {
                for (label, h) in [("τ-end to summand", f), ("summand to end", gmap)] {
                    let check = format!("{label} #{k} at {}", x.name());
                    let (kind, third) = if h.is_epi() {
                        ("kernel", h.kernel().0)
                    } else if h.is_mono() {
                        ("cokernel", h.cokernel().0)
                    } else {
                        out.push(CheckRecord::skipped(&e.name, check, "map is neither mono nor epi"));
                        continue;
                    };
                    let r = ext_deg(&third, w, guard)?;
                    out.push(CheckRecord::new(
                        &e.name,
                        check,
                        r.finite().is_some(),
                        json!({"third_term": kind, "dim": third.dim(), "verdict": r.verdict.to_string()}),
                    ));
                }
            }
        }
        // Every vertex is perpendicular to the root on both sides.
        let root = &g.root().module;
        for v in &g.vertices {
            let a = perp(root, &v.module, w, guard)?;
            let b = perp(&v.module, root, w, guard)?;
            out.push(CheckRecord::new(
                &e.name,
                format!("{} and the root are mutually perpendicular", v.name()),
                a.holds() && b.holds(),
                json!({"root_perp_X": a, "X_perp_root": b}),
            ));
        }
        Ok(out)
    }

    pub(super) fn suite_perp(&self) -> SuiteReport {
        let (w, guard) = (self.params.window, self.params.guard);
        let parts = self
            .entries_par()
            .map(|(idx, e)| {
                let mut out = Vec::new();
                for (label, ses, tests) in self.sequences_of(idx, e) {
                    let ses = match ses {
                        Ok(s) => s,
                        Err(err) => {
                            out.push(CheckRecord::error(&e.name, label, &err));
                            continue;
                        }
                    };
                    for t in &tests {
                        for side in [Side::Left, Side::Right] {
                            let check = format!("two of three: {label}, T={}, {side:?}", name(t));
                            out.push(match two_of_three_check(&ses, t, side, w, guard) {
                                Ok(r) => CheckRecord::new(&e.name, check, r.consistent, serde_json::to_value(&r).expect("serializes")),
                                Err(err) => CheckRecord::error(&e.name, check, &err),
                            });
                        }
                    }
                }
                if let Ok(g) = self.usable_component(idx, "perp") {
                    match self.irreducible_perp(idx, e, &g) {
                        Ok(recs) => out.extend(recs),
                        Err(err) => out.push(CheckRecord::error(&e.name, "irreducible maps", &err)),
                    }
                }
                out
            })
            .collect();
        SuiteReport::new(
            "perp",
            "⊥T and T⊥ have the two out of three property on short exact sequences; the kernel of an irreducible \
             epimorphism (cokernel of an irreducible monomorphism) onto a module of finite extension degree has \
             finite extension degree; modules in a component of finite extension degree are mutually perpendicular",
            &self.params,
            flatten(parts),
        )
        .with_limitation(WINDOW_NOTE)
        .with_limitation("two of three: the third term is checked in degrees above s+1 and below the window, s the larger vanishing index of the other two")
    }

    pub(super) fn suite_tubes(&self) -> SuiteReport {
        let (w, guard) = (self.params.window, self.params.guard);
        let parts = self
            .entries_par()
            .map(|(idx, e)| {
                let mut out = Vec::new();
                for m in e.nonprojective() {
                    let Some(p) = detect_syzygy_period(m, w) else {
                        out.push(CheckRecord::skipped(&e.name, format!("{} is periodic", name(m)), "no syzygy period within the window"));
                        continue;
                    };
                    let r = match ext_deg(m, w, guard) {
                        Ok(r) => r,
                        Err(err) => {
                            out.push(CheckRecord::error(&e.name, format!("verdict of {}", name(m)), &err));
                            continue;
                        }
                    };
                    let Verdict::Infinite { period, stable_endo_dim } = r.verdict else {
                        out.push(CheckRecord::new(&e.name, format!("{} is Infinite", name(m)), false, json!({"verdict": r.verdict.to_string(), "period": p.n})));
                        continue;
                    };
                    out.push(CheckRecord::new(
                        &e.name,
                        format!("{} is Infinite", name(m)),
                        period == p.n && stable_endo_dim > 0,
                        json!({"period": period, "stable_endo_dim": stable_endo_dim}),
                    ));
                    for k in 1..=3 {
                        let deg = (k * period) as i64;
                        let check = format!("{}: Êxt^{deg} equals the stable endomorphisms", name(m));
                        out.push(match ext_hat(m, m, deg) {
                            Ok(d) => CheckRecord::new(&e.name, check, d == stable_endo_dim, json!({"dim": d, "stable_endo_dim": stable_endo_dim})),
                            Err(err) => CheckRecord::error(&e.name, check, &err),
                        });
                    }
                }
                // A periodic root: the whole component must be Infinite.
                if let Ok(g) = self.usable_component(idx, "tube") {
                    if detect_syzygy_period(&g.root().module, w).is_some() {
                        for v in &g.vertices {
                            let check = format!("component vertex {} is Infinite", v.name());
                            out.push(match self.vertex_ext_deg(idx, &g, v.id) {
                                Ok(r) => CheckRecord::new(
                                    &e.name,
                                    check,
                                    matches!(r.verdict, Verdict::Infinite { .. }),
                                    json!({"verdict": r.verdict.to_string()}),
                                ),
                                Err(err) => CheckRecord::error(&e.name, check, &err),
                            });
                        }
                    }
                }
                out
            })
            .collect();
        SuiteReport::new(
            "tubes",
            "an Ω-periodic nonprojective module of period n has Êxt^(kn)(M,M) ≅ \\underline{End}(M) ≠ 0 for all k, \
             so no finite extension degree coexists with τ-periodicity",
            &self.params,
            flatten(parts),
        )
        .with_limitation("periods are searched up to the window")
    }

    fn perfect_checks(&self, idx: usize, e: &super::CorpusEntry, g: &ComponentGraph) -> Result<Vec<CheckRecord>> {
        let bound = self.params.perfect_bound;
        let w = self.params.window;
        let finite = self.root_degree(idx, g)?.is_some();
        let mut out = Vec::new();
        for v in Self::expanded(g) {
            let x = g.vertex(v);
            let ar = x.ar.as_ref().expect("expanded");
            let maps = ar.irreducible_maps();
            let any_mono = maps.iter().any(|(f, _)| f.is_mono());
            if any_mono {
                out.push(CheckRecord::new(
                    &e.name,
                    format!("injective irreducible map out of τ{} forces valence ≤ 2", x.name()),
                    ar.alpha() <= 2,
                    json!({"alpha": ar.alpha()}),
                ));
            }
            for (k, (f, gmap)) in maps.into_iter().enumerate() {
                for (label, h) in [("τ-end to summand", f), ("summand to end", gmap)] {
                    let check = format!("{label} #{k} at {}", x.name());
                    let verdict = omega_perfect_test(&h, bound)?;
                    if finite {
                        out.push(CheckRecord::new(&e.name, format!("{check} is Ω-perfect"), verdict.perfect(), serde_json::to_value(&verdict).expect("serializes")));
                        continue;
                    }
                    let certified = matches!(verdict.outcome, PerfectOutcome::StableByPeriodicity { .. });
                    out.push(CheckRecord::new(&e.name, format!("{check} settled by periodicity"), certified, serde_json::to_value(&verdict).expect("serializes")));
                    if let Some(flip) = flip_witness(&h, w) {
                        out.push(CheckRecord::new(
                            &e.name,
                            format!("{check} with periodic simple {flip} is flagged"),
                            !verdict.perfect(),
                            json!({"steps": verdict.steps}),
                        ));
                    }
                }
            }
        }
        if finite {
            let alphas: Vec<Option<usize>> = g.vertices.iter().map(|v| v.alpha).collect();
            out.push(CheckRecord::new(&e.name, "a vertex of valence 1 exists", alphas.contains(&Some(1)), json!({"alpha": alphas})));
            out.push(CheckRecord::new(
                &e.name,
                "every computed vertex has valence at most 2",
                g.max_alpha().is_some_and(|a| a <= 2),
                json!({"max_alpha": g.max_alpha()}),
            ));
            out.push(CheckRecord::new(
                &e.name,
                "mesh arrows agree with the AR sequences",
                g.mesh_consistent(),
                json!({"radius": g.radius, "vertices": g.vertices.len(), "frontier": g.frontier.len()}),
            ));
        }
        Ok(out)
    }

    pub(super) fn suite_omega_perfect(&self) -> SuiteReport {
        let parts = self
            .entries_par()
            .map(|(idx, e)| match self.usable_component(idx, "omega perfect") {
                Ok(g) => self.perfect_checks(idx, e, &g).unwrap_or_else(|err| vec![CheckRecord::error(&e.name, "omega perfect", &err)]),
                Err(rec) => rec.into_iter().collect(),
            })
            .collect();
        SuiteReport::new(
            "omega_perfect",
            "in a component of finite extension degree every irreducible map is Ω-perfect, some vertex has \
             valence 1 and no vertex has more than two nonprojective middle summands; an injective irreducible \
             map out of τM forces valence at most 2; an irreducible epimorphism with Ω-periodic simple kernel \
             is not Ω-perfect",
            &self.params,
            flatten(parts),
        )
        .with_limitation(SHAPE_NOTE)
        .with_limitation("Ω-perfection is tested for the first perfect_bound syzygies unless both endpoints are periodic")
    }

    pub(super) fn suite_quasilength(&self) -> SuiteReport {
        let parts = self
            .entries_par()
            .map(|(idx, e)| {
                let g = match self.usable_component(idx, "quasi-length") {
                    Ok(g) => g,
                    Err(rec) => return rec.into_iter().collect(),
                };
                self.quasilength_checks(idx, e, &g).unwrap_or_else(|err| vec![CheckRecord::error(&e.name, "quasi-length", &err)])
            })
            .collect();
        SuiteReport::new(
            "quasilength",
            "in a ℤA∞ component whose quasi-simple M has ext.deg(M) = m, every X has ext.deg(X) = m + 2 ql(X) and \
             Êxt^(m+2l)(X,X) ≅ Êxt^m(M,M)",
            &self.params,
            flatten(parts),
        )
        .with_limitation(SHAPE_NOTE)
        .with_limitation("quasi-lengths are propagated through meshes from valence-1 vertices; undetermined ones are skipped")
    }

    fn quasilength_checks(&self, idx: usize, e: &super::CorpusEntry, g: &ComponentGraph) -> Result<Vec<CheckRecord>> {
        let Some(m) = self.root_degree(idx, g)? else {
            return Ok(vec![CheckRecord::skipped(&e.name, "quasi-length", "root has no finite extension degree")]);
        };
        if g.root().alpha != Some(1) {
            return Ok(vec![CheckRecord::skipped(&e.name, "quasi-length", "root is not quasi-simple")]);
        }
        let base = ext_hat(&g.root().module, &g.root().module, m as i64)?;
        let qls = g.quasi_lengths();
        let checks: Vec<Result<Vec<CheckRecord>>> = g
            .vertices
            .par_iter()
            .map(|v| {
                let mut out = Vec::new();
                if let Some(d) = g.quasi_length_by_distance(v.id) {
                    out.push(CheckRecord::new(
                        &e.name,
                        format!("{} mesh and distance quasi-lengths agree", v.name()),
                        qls[v.id] == Some(d),
                        json!({"mesh": qls[v.id], "distance": d}),
                    ));
                }
                let check = format!("ext.deg of {}", v.name());
                match qls[v.id] {
                    None => out.push(CheckRecord::skipped(&e.name, check, "quasi-length not determined at this radius")),
                    Some(l) if l > QL_LIMIT => out.push(CheckRecord::skipped(&e.name, check, format!("quasi-length {l} beyond {QL_LIMIT}"))),
                    Some(l) => {
                        let r = self.vertex_ext_deg(idx, g, v.id)?;
                        let want = m + 2 * l;
                        let got = self_ext(&r, &v.module, want)?;
                        out.push(CheckRecord::new(
                            &e.name,
                            check,
                            r.verdict == Verdict::Finite(want) && got == base,
                            json!({"ql": l, "verdict": r.verdict.to_string(), "expected": want, "dim_top": got, "dim_root_m": base}),
                        ));
                    }
                }
                Ok(out)
            })
            .collect();
        Ok(flatten(checks.into_iter().collect::<Result<Vec<_>>>()?))
    }
}

/// Name of a periodic simple kernel (of an epimorphism) or cokernel (of a
/// monomorphism), if `h` has one.
fn flip_witness(h: &Morphism, window: usize) -> Option<String> {
    let third = if h.is_epi() && !h.is_mono() {
        h.kernel().0
    } else if h.is_mono() && !h.is_epi() {
        h.cokernel().0
    } else {
        return None;
    };
    let simple = third.radical_space().dim() == 0 && third.composition_length() == 1;
    (simple && detect_syzygy_period(&third, window).is_some()).then(|| format!("{} of dim {}", if h.is_epi() { "kernel" } else { "cokernel" }, third.dim()))
}
