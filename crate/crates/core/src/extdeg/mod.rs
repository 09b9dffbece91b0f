//! Extension degrees, perpendicularity, two-out-of-three, cones and the
//! finitistic extension degree estimate.
//!
//! Every "eventually vanishes" judgment is relative to a window `[1, B]` and
//! a guard `g`: a finite verdict `m` means `Ext^m != 0` and the `g` or more
//! degrees `m+1..=B` were all observed to vanish.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::modcat::{stable_hom, Module, ShortExactSequence};
use crate::resolve::{detect_syzygy_period, ext_table_in, ResolutionWindow};
use crate::Result;

mod cone;

pub use cone::{cone_ext_deg, cone_layers, ConeLayer};

/// Default resolution window and guard.
pub const DEFAULT_WINDOW: usize = 20;
pub const DEFAULT_GUARD: usize = 8;

/// Classification of `ext.deg(M) = sup{i : Ext^i(M, M) != 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `ext.deg = m`, within the window and guard.
    Finite(usize),
    /// `Ω^period M ≅ M` and `\underline{End}(M) != 0`.
    Infinite { period: usize, stable_endo_dim: usize },
    /// Neither conclusion within the given window.
    Unknown(usize),
    /// `M` is projective: the supremum of the empty set.
    MinusInfinity,
}

impl Verdict {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Verdict::Finite(m) => Some(*m),
            _ => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Finite(_) => "Finite",
            Verdict::Infinite { .. } => "Infinite",
            Verdict::Unknown(_) => "Unknown",
            Verdict::MinusInfinity => "MinusInfinity",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Finite(m) => write!(f, "Finite({m})"),
            Verdict::Infinite { period, .. } => write!(f, "Infinite(period {period})"),
            Verdict::Unknown(b) => write!(f, "Unknown({b})"),
            Verdict::MinusInfinity => write!(f, "MinusInfinity"),
        }
    }
}

/// An extension-degree verdict with the evidence it rests on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtDegResult {
    pub verdict: Verdict,
    pub window: usize,
    pub guard: usize,
    /// `dim Ext^i(M, M)` for `1 <= i <= window`.
    pub dims: BTreeMap<i64, usize>,
}

impl Serialize for ExtDegResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("verdict", self.verdict.tag())?;
        match &self.verdict {
            Verdict::Finite(m) => map.serialize_entry("m", m)?,
            Verdict::Infinite { period, stable_endo_dim } => {
                map.serialize_entry("period", period)?;
                map.serialize_entry("stable_endo_dim", stable_endo_dim)?;
            }
            _ => {}
        }
        map.serialize_entry("window", &self.window)?;
        map.serialize_entry("guard", &self.guard)?;
        let dims: BTreeMap<String, usize> = self.dims.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        map.serialize_entry("dims", &dims)?;
        map.end()
    }
}

impl ExtDegResult {
    pub fn finite(&self) -> Option<usize> {
        self.verdict.finite()
    }

    /// `dim Ext^i(M, M)` if `i` lies in the window.
    pub fn dim(&self, i: i64) -> Option<usize> {
        self.dims.get(&i).copied()
    }
}

/// Classifies `ext.deg(M)` from `Ext^i(M, M)`, `1 <= i <= window`.
pub fn ext_deg(m: &Module, window: usize, guard: usize) -> Result<ExtDegResult> {
    let base = crate::resolve::omega(m, 0);
    if base.is_zero() {
        return Ok(ExtDegResult { verdict: Verdict::MinusInfinity, window, guard, dims: BTreeMap::new() });
    }
    let w = ResolutionWindow::with_range(&base, 0, window);
    let dims = if window == 0 { BTreeMap::new() } else { ext_table_in(&w, m, 1, window as i64)?.dims };
    let verdict = classify(&base, &dims, window, guard)?;
    Ok(ExtDegResult { verdict, window, guard, dims })
}

fn classify(base: &Module, dims: &BTreeMap<i64, usize>, window: usize, guard: usize) -> Result<Verdict> {
    if let Some(p) = detect_syzygy_period(base, window) {
        let stable_endo_dim = stable_hom(base, base)?.stable_dim();
        if stable_endo_dim > 0 {
            return Ok(Verdict::Infinite { period: p.n, stable_endo_dim });
        }
    }
    // Êxt^0(M, M) is the stable endomorphism ring, nonzero for M != 0.
    let m = dims.iter().filter(|(_, &d)| d > 0).map(|(&i, _)| i as usize).max().unwrap_or(0);
    Ok(if window >= m + guard { Verdict::Finite(m) } else { Verdict::Unknown(window) })
}

/// Outcome of a window-relative perpendicularity test `M ⊥ N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Perp {
    /// `Ext^i(M, N) = 0` on the tail `(window - guard, window]`.
    HoldsWithinWindow { window: usize, guard: usize, last_nonzero: Option<usize> },
    /// First nonzero degree in the tail.
    Fails { witness: usize, window: usize, guard: usize },
}

impl Perp {
    pub fn holds(&self) -> bool {
        matches!(self, Perp::HoldsWithinWindow { .. })
    }

    pub fn last_nonzero(&self) -> Option<usize> {
        match self {
            Perp::HoldsWithinWindow { last_nonzero, .. } => *last_nonzero,
            Perp::Fails { .. } => None,
        }
    }
}

/// `dim Ext^i(M, N)` for `1 <= i <= window`.
pub fn ext_dims(m: &Module, n: &Module, window: usize) -> Result<BTreeMap<i64, usize>> {
    if window == 0 {
        return Ok(BTreeMap::new());
    }
    let w = ResolutionWindow::with_range(m, 0, window);
    Ok(ext_table_in(&w, n, 1, window as i64)?.dims)
}

fn perp_from_dims(dims: &BTreeMap<i64, usize>, window: usize, guard: usize) -> Perp {
    let tail_start = window.saturating_sub(guard) + 1;
    match (tail_start..=window).find(|&i| dims.get(&(i as i64)).copied().unwrap_or(0) > 0) {
        Some(witness) => Perp::Fails { witness, window, guard },
        None => {
            let last_nonzero = dims.iter().filter(|(_, &d)| d > 0).map(|(&i, _)| i as usize).max();
            Perp::HoldsWithinWindow { window, guard, last_nonzero }
        }
    }
}

/// `M ⊥ N` within the window: the last `guard` degrees vanish.
pub fn perp(m: &Module, n: &Module, window: usize, guard: usize) -> Result<Perp> {
    Ok(perp_from_dims(&ext_dims(m, n, window)?, window, guard))
}

/// Which argument of `Ext` the test module occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// Test `X ⊥ T` for `X` in the sequence (membership in `⊥T`).
    Left,
    /// Test `T ⊥ X` (membership in `T⊥`).
    Right,
}

/// Evidence for the two-out-of-three property on one sequence.
#[derive(Clone, Debug, Serialize)]
pub struct TwoOfThreeReport {
    pub side: Side,
    pub window: usize,
    pub guard: usize,
    /// Perpendicularity of `X`, `Y`, `Z` against the test module.
    pub holds: [bool; 3],
    pub last_nonzero: [Option<usize>; 3],
    /// Instances where two terms held and the third was checked.
    pub instances: usize,
    /// Degree slack from the long exact sequence.
    pub slack: usize,
    pub consistent: bool,
    pub detail: Vec<String>,
}

impl TwoOfThreeReport {
    pub fn vacuous(&self) -> bool {
        self.instances == 0
    }
}

/// Checks the two-out-of-three property of `⊥T` (or `T⊥`) on
/// `0 -> X -> Y -> Z -> 0`: if two terms vanish beyond degree `s`, the long
/// exact sequence forces the third to vanish beyond `s + 1`, which is
/// verified on the degrees up to `window - 1`.
pub fn two_of_three_check(ses: &ShortExactSequence, t: &Module, side: Side, window: usize, guard: usize) -> Result<TwoOfThreeReport> {
    let terms = [ses.x(), ses.y(), ses.z()];
    let mut dims = Vec::with_capacity(3);
    for x in terms {
        dims.push(match side {
            Side::Left => ext_dims(x, t, window)?,
            Side::Right => ext_dims(t, x, window)?,
        });
    }
    let perps: Vec<Perp> = dims.iter().map(|d| perp_from_dims(d, window, guard)).collect();
    let holds = [perps[0].holds(), perps[1].holds(), perps[2].holds()];
    let last = |k: usize| perps[k].last_nonzero();
    let names = ["X", "Y", "Z"];
    let mut instances = 0;
    let mut consistent = true;
    let mut detail = Vec::new();
    for third in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&k| k != third).collect();
        if !others.iter().all(|&k| holds[k]) {
            continue;
        }
        instances += 1;
        let s = others.iter().filter_map(|&k| last(k)).max().unwrap_or(0);
        let bad = (s + 2..window).find(|&i| dims[third].get(&(i as i64)).copied().unwrap_or(0) > 0);
        match bad {
            Some(i) => {
                consistent = false;
                detail.push(format!("{} has nonzero Ext in degree {i} > {} + 1", names[third], s));
            }
            None => detail.push(format!("{} vanishes beyond degree {} + 1", names[third], s)),
        }
    }
    if instances == 0 {
        detail.push("vacuous: fewer than two terms are perpendicular".into());
    }
    Ok(TwoOfThreeReport { side, window, guard, holds, last_nonzero: [last(0), last(1), last(2)], instances, slack: 1, consistent, detail })
}

/// Estimate of `fed` from a list of indecomposables.
#[derive(Clone, Debug, Serialize)]
pub struct FedEstimate {
    /// Largest finite verdict among nonprojectives, if any.
    pub sup: Option<usize>,
    /// Whether only projectives were supplied (the supremum is `-∞`).
    pub minus_infinity: bool,
    pub finite: usize,
    pub infinite: usize,
    pub unknown: usize,
    pub projective: usize,
    pub window: usize,
    pub guard: usize,
    pub verdicts: Vec<(String, ExtDegResult)>,
}

/// Supremum of the finite extension degrees over the supplied modules,
/// with the counts of other verdicts. An estimate, never a certificate.
pub fn fed_estimate(modules: &[Module], window: usize, guard: usize) -> Result<FedEstimate> {
    let mut est = FedEstimate {
        sup: None,
        minus_infinity: false,
        finite: 0,
        infinite: 0,
        unknown: 0,
        projective: 0,
        window,
        guard,
        verdicts: Vec::new(),
    };
    for m in modules {
        let r = ext_deg(m, window, guard)?;
        match r.verdict {
            Verdict::Finite(d) => {
                est.finite += 1;
                est.sup = Some(est.sup.map_or(d, |s| s.max(d)));
            }
            Verdict::Infinite { .. } => est.infinite += 1,
            Verdict::Unknown(_) => est.unknown += 1,
            Verdict::MinusInfinity => est.projective += 1,
        }
        est.verdicts.push((m.name().unwrap_or("?").to_string(), r));
    }
    est.minus_infinity = est.sup.is_none() && est.projective == modules.len();
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workbench::fixtures;

    #[test]
    fn ext_deg_examples() {
        let a = fixtures::truncated_polynomial(3, 3);
        assert_eq!(ext_deg(&a.regular_module(), 20, 8).unwrap().verdict, Verdict::MinusInfinity);
        let m1 = fixtures::truncated_module(&a, 1);
        assert_eq!(ext_deg(&m1, 20, 8).unwrap().verdict, Verdict::Infinite { period: 2, stable_endo_dim: 1 });
        let r = fixtures::liu_schulz_algebra(2);
        let m = fixtures::liu_schulz_module(&r);
        let res = ext_deg(&m, 20, 10).unwrap();
        assert_eq!(res.verdict, Verdict::Finite(1));
        assert_eq!(ext_deg(&m, 10, 10).unwrap().verdict, Verdict::Unknown(10));
        let v = serde_json::to_value(&res).unwrap();
        assert_eq!(v["verdict"], "Finite");
        assert_eq!(v["m"], 1);
        assert_eq!(v["dims"]["1"], 1);
    }

    #[test]
    fn perp_examples() {
        let a = fixtures::truncated_polynomial(3, 3);
        let m1 = fixtures::truncated_module(&a, 1);
        assert!(perp(&a.regular_module(), &m1, 20, 8).unwrap().holds());
        match perp(&m1, &m1, 20, 8).unwrap() {
            Perp::Fails { witness, .. } => assert_eq!(witness, 13),
            p => panic!("{p:?}"),
        }
        let r = fixtures::liu_schulz_algebra(2);
        let m = fixtures::liu_schulz_module(&r);
        assert_eq!(perp(&m, &m, 20, 8).unwrap().last_nonzero(), Some(1));
    }

    #[test]
    fn two_of_three_on_truncated_sequence() {
        let a = fixtures::truncated_polynomial(3, 3);
        let m1 = fixtures::truncated_module(&a, 1);
        let cover = m1.projective_cover();
        let (_, incl) = cover.kernel();
        let ses = ShortExactSequence::new(incl, cover).unwrap();
        let rep = two_of_three_check(&ses, &m1, Side::Left, 12, 4).unwrap();
        assert!(rep.consistent);
        assert_eq!(rep.holds, [false, true, false]);
        assert!(rep.vacuous());
    }

    #[test]
    fn fed_of_projectives_is_minus_infinity() {
        let a = fixtures::truncated_polynomial(3, 3);
        let est = fed_estimate(&[a.regular_module()], 10, 4).unwrap();
        assert!(est.minus_infinity && est.sup.is_none());
        let mods: Vec<Module> = (1..=2).map(|i| fixtures::truncated_module(&a, i)).collect();
        let est = fed_estimate(&mods, 10, 4).unwrap();
        assert_eq!((est.sup, est.infinite), (None, 2));
    }
}
