//! Syzygies, cosyzygies, complete-resolution windows and stable cohomology.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::decomp::{is_iso, IsoOutcome};
use crate::modcat::{hom_space, stable_hom, Module, Morphism, StableHomSpace};
use crate::xfield::{Matrix, RowSpace};
use crate::Result;

/// One step of a complete resolution. For a syzygy step
/// `0 -> ΩM --left--> P --right--> M -> 0`; for a cosyzygy step
/// `0 -> M --left--> I --right--> Ω⁻¹M -> 0`.
#[derive(Clone, Debug)]
pub struct Step {
    /// The new syzygy or cosyzygy, projective-free.
    pub module: Module,
    pub left: Morphism,
    pub right: Morphism,
    /// Projective summands that had to be split off `module` after taking
    /// the kernel; never nonempty over a self-injective algebra.
    pub stripped: Vec<usize>,
}

fn strip(raw: &Module) -> (Module, Vec<usize>) {
    let (m, removed) = raw.strip_projectives();
    if removed.is_empty() {
        (raw.clone(), removed)
    } else {
        (m, removed)
    }
}

fn syzygy_step(m: &Module) -> &Step {
    m.syzygy_cell().get_or_init(|| {
        let cover = m.projective_cover();
        let (k, incl) = cover.kernel();
        let (module, stripped) = strip(&k);
        Step { module, left: incl, right: cover, stripped }
    })
}

fn cosyzygy_step(m: &Module) -> &Step {
    m.cosyzygy_cell().get_or_init(|| {
        // Injective envelope of M = D(projective cover of D M).
        let d = m.dual();
        let cover = d.projective_cover();
        let (k, incl) = cover.kernel();
        let i = cover.source().dual();
        let raw = k.dual();
        let left = Morphism::new_unchecked(m.clone(), i.clone(), cover.matrix().transpose());
        let right = Morphism::new_unchecked(i, raw.clone(), incl.matrix().transpose());
        let (module, stripped) = strip(&raw);
        Step { module, left, right, stripped }
    })
}

fn label(m: &Module, n: i64) -> String {
    format!("Ω^{n}({})", m.name().unwrap_or("M"))
}

/// `Ω M`: kernel of the projective cover, projective-free. `Ω P = 0`.
pub fn syzygy(m: &Module) -> Module {
    syzygy_step(m).module.clone()
}

/// `Ω⁻¹ M = D Ω D M`, computed over the opposite algebra.
pub fn cosyzygy(m: &Module) -> Module {
    cosyzygy_step(m).module.clone()
}

/// The step data behind [`syzygy`].
pub fn syzygy_sequence(m: &Module) -> Step {
    syzygy_step(m).clone()
}

/// The step data behind [`cosyzygy`].
pub fn cosyzygy_sequence(m: &Module) -> Step {
    cosyzygy_step(m).clone()
}

/// `Ω^n M` for any integer `n`; `n = 0` gives the projective-free part.
pub fn omega(m: &Module, n: i64) -> Module {
    let mut cur = m.strip_projectives().0;
    for _ in 0..n.unsigned_abs() {
        cur = if n > 0 { syzygy(&cur) } else { cosyzygy(&cur) };
    }
    let name = label(m, n);
    cur.with_name(name)
}

/// `Ω^i M` for `i` in `[-bound, bound]` with the connecting sequences.
#[derive(Clone, Debug)]
pub struct ResolutionWindow {
    pub center: Module,
    pub bound: usize,
    /// `positive[i] = Ω^i M` for `0 <= i <= bound`.
    positive: Vec<Module>,
    /// `negative[k] = Ω^{-k} M` for `0 <= k <= bound`.
    negative: Vec<Module>,
}

impl ResolutionWindow {
    pub fn new(m: &Module, bound: usize) -> ResolutionWindow {
        Self::with_range(m, bound, bound)
    }

    /// A window covering `[-below, above]`; `bound` is the larger side.
    pub fn with_range(m: &Module, below: usize, above: usize) -> ResolutionWindow {
        let center = omega(m, 0);
        let mut positive = vec![center.clone()];
        for i in 1..=above {
            let next = syzygy(&positive[i - 1]);
            positive.push(next);
        }
        let mut negative = vec![center.clone()];
        for k in 1..=below {
            let next = cosyzygy(&negative[k - 1]);
            negative.push(next);
        }
        ResolutionWindow { center, bound: below.max(above), positive, negative }
    }

    pub fn range(&self) -> (i64, i64) {
        (-(self.negative.len() as i64 - 1), self.positive.len() as i64 - 1)
    }

    /// `Ω^i M`, if `i` is inside the window.
    pub fn get(&self, i: i64) -> Option<&Module> {
        if i >= 0 {
            self.positive.get(i as usize)
        } else {
            self.negative.get(i.unsigned_abs() as usize)
        }
    }

    /// The step that produced `Ω^i M` from its neighbour towards 0.
    pub fn step(&self, i: i64) -> Option<&Step> {
        if i > 0 {
            self.positive.get(i as usize - 1).map(syzygy_step)
        } else if i < 0 {
            self.negative.get(i.unsigned_abs() as usize - 1).map(cosyzygy_step)
        } else {
            None
        }
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        let (lo, hi) = self.range();
        (lo..=hi).map(|i| (i, self.get(i).expect("in range").dim())).collect()
    }
}

/// `Êxt^i(M, N) = \underline{Hom}(Ω^i M, N)` with a stable basis.
pub fn ext_hat_space(m: &Module, n: &Module, i: i64) -> Result<StableHomSpace> {
    stable_hom(&omega(m, i), n)
}

pub fn ext_hat(m: &Module, n: &Module, i: i64) -> Result<usize> {
    Ok(ext_hat_space(m, n, i)?.stable_dim())
}

/// Tabulated `dim Êxt^i(M, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub source: String,
    pub target: String,
    pub dims: BTreeMap<i64, usize>,
}

impl ExtTable {
    pub fn get(&self, i: i64) -> Option<usize> {
        self.dims.get(&i).copied()
    }
}

/// `Êxt^i(M, N)` for `i` in `lo..=hi`.
pub fn ext_table(m: &Module, n: &Module, lo: i64, hi: i64) -> Result<ExtTable> {
    let window = ResolutionWindow::with_range(m, lo.min(0).unsigned_abs() as usize, hi.max(0) as usize);
    ext_table_in(&window, n, lo, hi)
}

/// As [`ext_table`] but reusing a prebuilt window.
pub fn ext_table_in(window: &ResolutionWindow, n: &Module, lo: i64, hi: i64) -> Result<ExtTable> {
    let mut dims = BTreeMap::new();
    for i in lo..=hi {
        let om = window.get(i).ok_or_else(|| crate::Error::InvalidInput(format!("degree {i} outside the window")))?;
        dims.insert(i, stable_hom(om, n)?.stable_dim());
    }
    Ok(ExtTable {
        source: window.center.name().unwrap_or("M").to_string(),
        target: n.name().unwrap_or("N").to_string(),
        dims,
    })
}

/// Number of indecomposable projective summands in the cover of `Ω^i M`.
pub fn betti(m: &Module, lo: i64, hi: i64) -> BTreeMap<i64, usize> {
    let window = ResolutionWindow::with_range(m, lo.min(0).unsigned_abs() as usize, hi.max(0) as usize);
    (lo..=hi).map(|i| (i, window.get(i).expect("in range").presentation().rank())).collect()
}

/// A syzygy period with its witness isomorphism `Ω^n M -> M`.
#[derive(Clone, Debug)]
pub struct Period {
    pub n: usize,
    pub witness: Morphism,
}

/// Smallest `n <= bound` with `Ω^n M ≅ M`. Degrees where the isomorphism
/// test was inconclusive are skipped.
pub fn detect_syzygy_period(m: &Module, bound: usize) -> Option<Period> {
    let base = omega(m, 0);
    if base.is_zero() {
        return None;
    }
    let mut cur = base.clone();
    for n in 1..=bound {
        cur = syzygy(&cur);
        if cur.dim() != base.dim() {
            continue;
        }
        if let IsoOutcome::Iso(witness) = is_iso(&cur, &base) {
            return Some(Period { n, witness });
        }
    }
    None
}

/// Both sides of the dimension-shift identity
/// `Êxt^i(M, N) = Êxt^{i-m+n}(Ω^m M, Ω^n N)`.
pub fn dimension_shift(m: &Module, n: &Module, i: i64, sm: i64, sn: i64) -> Result<(usize, usize)> {
    let lhs = ext_hat(m, n, i)?;
    let rhs = ext_hat(&omega(m, sm), &omega(n, sn), i - sm + sn)?;
    Ok((lhs, rhs))
}

/// Classical `dim Ext^i(M, N)` for `1 <= i <= max`, computed as cocycles
/// modulo coboundaries of `Hom(P_•, N)` on an explicit projective
/// resolution. Independent of stable Hom; used as a cross-check.
pub fn classical_ext(m: &Module, n: &Module, max: usize) -> Result<Vec<usize>> {
    m.check_same_algebra(n).map_err(|_| crate::Error::AlgebraMismatch)?;
    let f = m.field();
    // d[k]: P_k -> P_{k-1} for k >= 1; P_0 -> M stored separately.
    let mut ps = Vec::with_capacity(max + 2);
    let mut ds: Vec<Matrix> = Vec::with_capacity(max + 2);
    let first = m.projective_cover();
    ps.push(first.source().clone());
    let mut prev_epi = first;
    for _ in 1..=max + 1 {
        let (k, incl) = prev_epi.kernel();
        let cover = k.projective_cover();
        ds.push(incl.matrix().mul(cover.matrix()));
        ps.push(cover.source().clone());
        prev_epi = cover;
    }
    let homs = ps.iter().map(|p| hom_space(p, n)).collect::<Result<Vec<_>>>()?;
    // Matrix of d_k^*: Hom(P_{k-1}, N) -> Hom(P_k, N) in Hom coordinates.
    let dual_map = |k: usize| -> Matrix {
        let (src, dst) = (&homs[k - 1], &homs[k]);
        let cols: Vec<Vec<_>> = src
            .basis()
            .iter()
            .map(|g| dst.coords(&g.mul(&ds[k - 1])).expect("composite is a module map"))
            .collect();
        Matrix::from_columns(f, dst.dim(), &cols)
    };
    let mut out = Vec::with_capacity(max);
    for i in 1..=max {
        let cocycles = homs[i].dim() - dual_map(i + 1).rank();
        let coboundaries = dual_map(i).rank();
        out.push(cocycles - coboundaries);
    }
    Ok(out)
}

/// Whether `Ω⁻¹ Ω M ≅ M` (for projective-free `M`).
pub fn cosyzygy_inverts_syzygy(m: &Module) -> IsoOutcome {
    let base = omega(m, 0);
    is_iso(&cosyzygy(&syzygy(&base)), &base)
}

/// The space spanned by the stable basis of `Êxt^i(M, N)`, for reports.
pub fn ext_hat_basis(m: &Module, n: &Module, i: i64) -> Result<RowSpace> {
    let s = ext_hat_space(m, n, i)?;
    let f = m.field();
    let len = s.hom.target().dim() * s.hom.source().dim();
    Ok(RowSpace::span(f, len, &s.stable_basis.iter().map(Matrix::to_vec).collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workbench::fixtures;

    #[test]
    fn syzygy_examples() {
        let a = fixtures::truncated_polynomial(2, 2);
        let s = a.simple(0);
        assert!(is_iso(&syzygy(&s), &s).is_iso());
        assert!(syzygy(&a.regular_module()).is_zero());
        assert!(is_iso(&cosyzygy(&s), &s).is_iso());

        let b = fixtures::truncated_polynomial(3, 3);
        let (m1, m2) = (fixtures::truncated_module(&b, 1), fixtures::truncated_module(&b, 2));
        assert!(is_iso(&syzygy(&m1), &m2).is_iso());
        assert!(is_iso(&syzygy(&m2), &m1).is_iso());
        assert!(is_iso(&omega(&m1, 2), &m1).is_iso());
        assert!(cosyzygy_inverts_syzygy(&m1).is_iso());
        assert!(cosyzygy(&Module::zero(b.clone())).is_zero());
        for n in -3..=3 {
            assert!(omega(&b.regular_module(), n).is_zero());
        }
    }

    #[test]
    fn steps_are_exact() {
        let a = fixtures::nakayama_two_simples();
        for m in fixtures::small_modules(&a) {
            for step in [syzygy_sequence(&m), cosyzygy_sequence(&m)] {
                assert!(step.stripped.is_empty());
                let ses = crate::modcat::ShortExactSequence::new(step.left.clone(), step.right.clone());
                assert!(ses.is_ok(), "{:?}", m.name());
            }
        }
    }

    #[test]
    fn ext_examples() {
        let a = fixtures::truncated_polynomial(2, 2);
        let s = a.simple(0);
        let t = ext_table(&s, &s, -10, 10).unwrap();
        assert!(t.dims.values().all(|&d| d == 1));
        assert!(betti(&s, 0, 5).values().all(|&b| b == 1));

        let b = fixtures::truncated_polynomial(3, 3);
        let m1 = fixtures::truncated_module(&b, 1);
        assert_eq!(ext_hat(&m1, &m1, 1).unwrap(), 1);
        let t = ext_table(&m1, &m1, 1, 6).unwrap();
        assert!(t.dims.values().all(|&d| d == 1));
        let p = b.regular_module();
        assert!(ext_table(&p, &p, -3, 3).unwrap().dims.values().all(|&d| d == 0));
    }

    #[test]
    fn periods() {
        let a = fixtures::truncated_polynomial(2, 2);
        assert_eq!(detect_syzygy_period(&a.simple(0), 5).unwrap().n, 1);
        let b = fixtures::truncated_polynomial(3, 3);
        let p = detect_syzygy_period(&fixtures::truncated_module(&b, 1), 5).unwrap();
        assert_eq!(p.n, 2);
        assert!(p.witness.intertwines() && p.witness.is_iso());
    }

    #[test]
    fn classical_matches_stable_in_positive_degrees() {
        let a = fixtures::nakayama_two_simples();
        let mods = fixtures::small_modules(&a);
        for m in &mods {
            for n in &mods {
                let classical = classical_ext(m, n, 4).unwrap();
                for (k, c) in classical.iter().enumerate() {
                    assert_eq!(*c, ext_hat(m, n, k as i64 + 1).unwrap(), "{:?} {:?} {}", m.name(), n.name(), k + 1);
                }
            }
        }
    }
}
