//! Induced maps `Ω^n f` and the Ω-perfect classification.

use serde::Serialize;

use super::{ar_sequence_with, ArOptions};
use crate::modcat::{Module, Morphism};
use crate::resolve::{detect_syzygy_period, syzygy_sequence};
use crate::{Error, Result};

/// `Ωf: ΩX -> ΩY` for `f: X -> Y`: lift `f` to the projective covers and
/// restrict to the kernels.
pub fn induced_syzygy_map(f: &Morphism) -> Result<Morphism> {
    let sx = syzygy_sequence(f.source());
    let sy = syzygy_sequence(f.target());
    let (ix, px) = (&sx.left, &sx.right);
    let (iy, py) = (&sy.left, &sy.right);
    let lifted = f.source().presentation().lift_through_cover(&f.matrix().mul(px.matrix()), f.target());
    debug_assert_eq!(py.matrix().mul(&lifted), f.matrix().mul(px.matrix()));
    let rhs = lifted.mul(ix.matrix());
    let m = if iy.source().dim() == 0 {
        crate::xfield::Matrix::zeros(f.source().field(), 0, ix.source().dim())
    } else {
        iy.matrix()
            .solve_many(&rhs)?
            .ok_or_else(|| Error::Verification("lifted map does not preserve syzygies".into()))?
    };
    Ok(Morphism::new_unchecked(sx.module.clone(), sy.module.clone(), m))
}

/// Rank classification of a map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Mono,
    Epi,
    Iso,
    Neither,
}

impl MapKind {
    fn of(f: &Morphism) -> MapKind {
        match (f.is_mono(), f.is_epi()) {
            (true, true) => MapKind::Iso,
            (true, false) => MapKind::Mono,
            (false, true) => MapKind::Epi,
            (false, false) => MapKind::Neither,
        }
    }
}

/// Overall shape of the classification sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum PerfectOutcome {
    /// Every `Ω^n f` up to the bound is a monomorphism.
    AllMono { bound: usize },
    AllEpi { bound: usize },
    /// The classification first changes at `step`.
    Mixed { step: usize },
    /// Both endpoints are Ω-periodic with `period` dividing the bound, so
    /// the classification sequence repeats; `first_flip` flags a change.
    StableByPeriodicity { period: usize, first_flip: Option<usize> },
    /// Some `Ω^n f` is neither mono nor epi.
    Inconclusive { bound: usize },
}

/// Per-step classification of `Ω^n f` for `n = 0..=bound`.
#[derive(Clone, Debug, Serialize)]
pub struct OmegaPerfectVerdict {
    pub source: String,
    pub target: String,
    pub steps: Vec<MapKind>,
    pub outcome: PerfectOutcome,
}

impl OmegaPerfectVerdict {
    /// All steps agree (the map is Ω-perfect within the computed range).
    pub fn perfect(&self) -> bool {
        match self.outcome {
            PerfectOutcome::AllMono { .. } | PerfectOutcome::AllEpi { .. } => true,
            PerfectOutcome::StableByPeriodicity { first_flip, .. } => first_flip.is_none(),
            _ => false,
        }
    }
}

fn first_flip(steps: &[MapKind]) -> Option<usize> {
    (1..steps.len()).find(|&n| steps[n] != steps[0])
}

fn lcm(a: usize, b: usize) -> usize {
    let gcd = |mut x: usize, mut y: usize| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    a / gcd(a, b) * b
}

/// Classifies `Ω^n f` as mono or epi for `n = 0..=bound`.
pub fn omega_perfect_test(f: &Morphism, bound: usize) -> Result<OmegaPerfectVerdict> {
    let mut steps = Vec::with_capacity(bound + 1);
    let mut cur = f.clone();
    for n in 0..=bound {
        steps.push(MapKind::of(&cur));
        if n < bound {
            cur = induced_syzygy_map(&cur)?;
        }
    }
    let flip = first_flip(&steps);
    let periodic = match (detect_syzygy_period(f.source(), bound), detect_syzygy_period(f.target(), bound)) {
        (Some(p), Some(q)) if lcm(p.n, q.n) <= bound => Some(lcm(p.n, q.n)),
        _ => None,
    };
    let outcome = if let Some(period) = periodic {
        PerfectOutcome::StableByPeriodicity { period, first_flip: flip }
    } else if steps.contains(&MapKind::Neither) {
        PerfectOutcome::Inconclusive { bound }
    } else if let Some(step) = flip {
        PerfectOutcome::Mixed { step }
    } else if steps[0] == MapKind::Epi {
        PerfectOutcome::AllEpi { bound }
    } else {
        PerfectOutcome::AllMono { bound }
    };
    Ok(OmegaPerfectVerdict {
        source: f.source().name().unwrap_or("X").to_string(),
        target: f.target().name().unwrap_or("Y").to_string(),
        steps,
        outcome,
    })
}

/// Classification of all irreducible maps `τM -> E_i` and `E_i -> M` from
/// the AR sequence ending in `M`.
#[derive(Clone, Debug, Serialize)]
pub struct ModulePerfectVerdict {
    pub module: String,
    pub maps: Vec<OmegaPerfectVerdict>,
    /// `M` is Ω-perfect within the bound.
    pub perfect: bool,
}

pub fn module_omega_perfect(m: &Module, bound: usize, opts: ArOptions) -> Result<ModulePerfectVerdict> {
    let ar = ar_sequence_with(m, opts)?;
    let mut maps = Vec::new();
    for (fi, gi) in ar.irreducible_maps() {
        maps.push(omega_perfect_test(&fi, bound)?);
        maps.push(omega_perfect_test(&gi, bound)?);
    }
    let perfect = maps.iter().all(OmegaPerfectVerdict::perfect);
    Ok(ModulePerfectVerdict { module: m.name().unwrap_or("M").to_string(), maps, perfect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workbench::fixtures;

    #[test]
    fn induced_map_examples() {
        let a = fixtures::truncated_polynomial(3, 3);
        let m1 = fixtures::truncated_module(&a, 1);
        let m2 = fixtures::truncated_module(&a, 2);
        let id = induced_syzygy_map(&Morphism::identity(&m2)).unwrap();
        assert!(id.is_iso());
        assert!(induced_syzygy_map(&Morphism::zero(&m2, &m1)).unwrap().is_zero());
        // The quotient M_2 -> M_1.
        let epi = crate::decomp::is_iso(&m2.top(), &m1).iso().unwrap().compose_after(&m2.quotient(m2.radical_space()).1);
        assert!(epi.is_epi() && epi.intertwines());
        let om = induced_syzygy_map(&epi).unwrap();
        assert_eq!((om.source().dim(), om.target().dim()), (1, 2));
        assert!(om.is_mono() && om.intertwines());

        let v = omega_perfect_test(&epi, 6).unwrap();
        assert_eq!(v.outcome, PerfectOutcome::StableByPeriodicity { period: 2, first_flip: Some(1) });
    }

    #[test]
    fn liu_schulz_boundary_maps_are_perfect() {
        let r = fixtures::liu_schulz_algebra(2);
        let m = fixtures::liu_schulz_module(&r);
        let v = module_omega_perfect(&m, 10, ArOptions::default()).unwrap();
        assert!(!v.maps.is_empty());
        for map in &v.maps {
            assert_eq!(map.steps.len(), 11);
            assert!(map.perfect(), "{map:?}");
        }
    }
}
