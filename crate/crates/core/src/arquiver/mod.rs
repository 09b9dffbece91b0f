//! Almost split sequences, local components of the stable AR quiver,
//! valence, quasi-length and Ω-perfect maps.
//!
//! For a symmetric algebra `τ = Ω²`, and the almost split sequence ending
//! in `M` is the pushout of `0 -> ΩM -> P(M) -> M -> 0` along a map
//! `h: ΩM -> τM` whose class spans a simple `End(M)`-submodule of
//! `Ext¹(M, τM) = \underline{Hom}(ΩM, τM)`.

pub(crate) mod component;
mod perfect;

pub use component::{build_component, ComponentGraph, Edge, Vertex};
pub use perfect::{induced_syzygy_map, module_omega_perfect, omega_perfect_test, MapKind, ModulePerfectVerdict, OmegaPerfectVerdict, PerfectOutcome};

use crate::decomp::{decompose_with, indecomposable, is_iso_with, Certificate, Decomposition, IsoOutcome, DEFAULT_BUDGET};
use crate::modcat::{hom_space, stable_hom, Module, Morphism, ShortExactSequence};
use crate::resolve::{omega, syzygy_sequence};
use crate::xfield::{Matrix, RowSpace, Scalar};
use crate::{Error, Result};

/// `τ M = Ω² M`; projective input is rejected.
pub fn tau(m: &Module) -> Result<Module> {
    if m.is_zero() || m.strip_projectives().0.is_zero() {
        return Err(Error::InvalidInput("τ is undefined on projective modules".into()));
    }
    Ok(omega(m, 2))
}

/// `τ⁻¹ M = Ω⁻² M`.
pub fn tau_inverse(m: &Module) -> Result<Module> {
    if m.is_zero() || m.strip_projectives().0.is_zero() {
        return Err(Error::InvalidInput("τ⁻¹ is undefined on projective modules".into()));
    }
    Ok(omega(m, -2))
}

/// Options shared by AR sequence and component construction.
#[derive(Clone, Copy, Debug)]
pub struct ArOptions {
    pub seed: u64,
    pub budget: usize,
    /// Treat probably-indecomposable modules as genuine vertices.
    pub accept_probable: bool,
}

impl Default for ArOptions {
    fn default() -> Self {
        ArOptions { seed: 0, budget: DEFAULT_BUDGET, accept_probable: false }
    }
}

/// `0 -> τM --left--> E --right--> M -> 0`, almost split.
#[derive(Clone, Debug)]
pub struct AlmostSplitSequence {
    pub end: Module,
    pub tau_end: Module,
    pub middle: Module,
    pub left: Morphism,
    pub right: Morphism,
    pub decomposition: Decomposition,
    /// `dim Ext¹(M, τM)` and the dimension of its `End(M)`-socle.
    pub ext1_dim: usize,
    pub socle_dim: usize,
    /// Number of maps checked by the lifting test.
    pub lifts_checked: usize,
}

impl AlmostSplitSequence {
    /// Number of nonprojective indecomposable summands of the middle term,
    /// with multiplicity.
    pub fn alpha(&self) -> usize {
        self.decomposition.nonprojective_count()
    }

    pub fn sequence(&self) -> ShortExactSequence {
        ShortExactSequence { left: self.left.clone(), right: self.right.clone() }
    }

    /// The irreducible maps `f_i: τM -> E_i` and `g_i: E_i -> M`, one pair
    /// per nonprojective summand copy.
    pub fn irreducible_maps(&self) -> Vec<(Morphism, Morphism)> {
        let mut out = Vec::new();
        for s in self.decomposition.nonprojective() {
            for c in &s.copies {
                out.push((self.left.then(&c.projection), c.inclusion.then(&self.right)));
            }
        }
        out
    }
}

/// Basis of `rad End(M)` for a module with local endomorphism ring.
fn radical_of_end(m: &Module) -> Result<Vec<Matrix>> {
    let f = m.field();
    let d = m.dim();
    let id = Matrix::identity(f, d);
    let mut out = Vec::new();
    for e in m.end_basis() {
        let c = scalar_part(e).ok_or_else(|| {
            Error::Verification("End(M) has a residue field larger than the base field".into())
        })?;
        out.push(e.sub(&id.scale(&c)));
    }
    let flat: Vec<Vec<Scalar>> = out.iter().map(Matrix::to_vec).collect();
    let space = RowSpace::span(f, d * d, &flat);
    Ok(space.basis().into_iter().map(|v| Matrix::from_rows(f, d, d, v)).collect())
}

fn scalar_part(e: &Matrix) -> Option<Scalar> {
    let f = e.field();
    let d = e.rows();
    let id = Matrix::identity(f, d);
    let p = f.characteristic();
    if p == 0 || !(d as u64).is_multiple_of(p) {
        let c = &e.trace() * &f.from_i64(d as i64).inv()?;
        return e.sub(&id.scale(&c)).is_nilpotent().then_some(c);
    }
    (0..p).map(|k| f.from_i64(k as i64)).find(|c| e.sub(&id.scale(c)).is_nilpotent())
}

/// `Ωe: ΩM -> ΩM` for `e ∈ End(M)`, via a lift to the projective cover.
fn omega_endo(incl: &Morphism, cover: &Morphism, e: &Matrix) -> Result<Matrix> {
    let m = cover.target();
    let lifted = m.presentation().lift_through_cover(&e.mul(cover.matrix()), m);
    let rhs = lifted.mul(incl.matrix());
    incl.matrix()
        .solve_many(&rhs)?
        .ok_or_else(|| Error::Verification("lifted endomorphism does not preserve the syzygy".into()))
}

/// The almost split sequence ending in `M` (indecomposable, nonprojective).
pub fn ar_sequence(m: &Module) -> Result<AlmostSplitSequence> {
    ar_sequence_with(m, ArOptions::default())
}

pub fn ar_sequence_with(m: &Module, opts: ArOptions) -> Result<AlmostSplitSequence> {
    if m.is_zero() || m.is_projective() {
        return Err(Error::InvalidInput("AR sequences end in nonprojective modules".into()));
    }
    match indecomposable(m, opts.seed) {
        None => return Err(Error::InvalidInput("AR sequences end in indecomposable modules".into())),
        Some(Certificate::Probable) if !opts.accept_probable => {
            return Err(Error::InvalidInput("end term is only probably indecomposable".into()))
        }
        _ => {}
    }
    let f = m.field();
    let syz = syzygy_sequence(m);
    let (incl, cover) = (syz.left.clone(), syz.right.clone());
    let k = incl.source().clone();
    let tau_end = syzygy_sequence(&k).module;

    // Ext¹(M, τM) as the stable quotient of Hom(ΩM, τM).
    let ext = stable_hom(&k, &tau_end)?;
    let r = ext.stable_dim();
    if r == 0 {
        return Err(Error::Verification("Ext¹(M, τM) vanishes for a nonprojective module".into()));
    }
    // Coordinates of a map modulo projectively trivial maps.
    let (rows, cols) = (tau_end.dim(), k.dim());
    let mut ambient = ext.projective.basis();
    let np = ambient.len();
    ambient.extend(ext.stable_basis.iter().map(Matrix::to_vec));
    let coord_matrix = Matrix::from_columns(f, rows * cols, &ambient);
    let stable_coords = |h: &Matrix| -> Result<Vec<Scalar>> {
        let c = coord_matrix
            .solve(&h.to_vec())?
            .ok_or_else(|| Error::Verification("map outside Hom(ΩM, τM)".into()))?;
        Ok(c[np..].to_vec())
    };

    // Socle of Ext¹ under the right action of rad End(M).
    let mut conditions: Vec<Vec<Scalar>> = Vec::new();
    for rad in radical_of_end(m)? {
        let oe = omega_endo(&incl, &cover, &rad)?;
        let mut action_cols = Vec::with_capacity(r);
        for h in &ext.stable_basis {
            action_cols.push(stable_coords(&h.mul(&oe))?);
        }
        let a = Matrix::from_columns(f, r, &action_cols);
        for i in 0..r {
            conditions.push(a.row(i).to_vec());
        }
    }
    let socle: Vec<Vec<Scalar>> = if conditions.is_empty() {
        crate::modcat::identity_vectors(f, r)
    } else {
        Matrix::from_row_vecs(f, r, &conditions).kernel_basis()
    };
    let xi = socle.first().ok_or_else(|| Error::Verification("empty socle in Ext¹(M, τM)".into()))?;
    let mut h = Matrix::zeros(f, rows, cols);
    for (c, b) in xi.iter().zip(&ext.stable_basis) {
        if !c.is_zero() {
            h.add_scaled(c, b);
        }
    }

    // Pushout of ΩM -> P along h: E = (τM ⊕ P) / {(h k, -ι k)}.
    let p = cover.source().clone();
    let sum = Module::direct_sum(&[tau_end.clone(), p.clone()])?;
    let gen_cols: Vec<Vec<Scalar>> = (0..k.dim())
        .map(|j| {
            let mut v = h.column(j);
            v.extend(incl.matrix().column(j).into_iter().map(|x| -&x));
            v
        })
        .collect();
    let relations = RowSpace::span(f, sum.dim(), &gen_cols);
    let (middle, q) = sum.quotient(&relations);
    let middle = middle.with_name(format!("E({})", m.name().unwrap_or("M")));
    let left_mat = q.matrix().submatrix(0..middle.dim(), 0..tau_end.dim());
    let section = q
        .matrix()
        .solve_many(&Matrix::identity(f, middle.dim()))?
        .ok_or_else(|| Error::Verification("pushout projection is not surjective".into()))?;
    let zero_then_cover = Matrix::zeros(f, m.dim(), tau_end.dim()).hstack(cover.matrix());
    let right_mat = zero_then_cover.mul(&section);
    let left = Morphism::new(tau_end.clone(), middle.clone(), left_mat)?;
    let right = Morphism::new(middle.clone(), m.clone(), right_mat)?;
    let ses = ShortExactSequence::new(left.clone(), right.clone())?;
    if ses.is_split()? {
        return Err(Error::Verification("constructed sequence splits".into()));
    }

    let decomposition = decompose_with(&middle, opts.seed, opts.budget);
    if !opts.accept_probable && !decomposition.all_certified() {
        return Err(Error::Verification("middle term has summands that are only probably indecomposable".into()));
    }
    let lifts_checked = check_lifting(m, &right, &decomposition, opts)?;
    Ok(AlmostSplitSequence {
        end: m.clone(),
        tau_end,
        middle,
        left,
        right,
        decomposition,
        ext1_dim: r,
        socle_dim: socle.len(),
        lifts_checked,
    })
}

/// Every non-isomorphism from a summand of the middle term into `M` must
/// factor through the right map.
fn check_lifting(m: &Module, right: &Morphism, dec: &Decomposition, opts: ArOptions) -> Result<usize> {
    let mut checked = 0;
    for s in &dec.summands {
        let x = &s.module;
        let hom = hom_space(x, m)?;
        let maps: Vec<Matrix> = if x.dim() != m.dim() {
            hom.basis().to_vec()
        } else {
            match is_iso_with(x, m, opts.seed, opts.budget) {
                IsoOutcome::NotIso => hom.basis().to_vec(),
                IsoOutcome::Iso(phi) => radical_of_end(m)?.iter().map(|r| r.mul(phi.matrix())).collect(),
                IsoOutcome::Unknown(why) => return Err(Error::Verification(format!("lifting check: {why}"))),
            }
        };
        if maps.is_empty() {
            continue;
        }
        // One solve over Hom(X, E) for all maps at once.
        let f = m.field();
        let through = hom_space(x, right.source())?;
        let cols: Vec<Vec<Scalar>> = through.basis().iter().map(|h| right.matrix().mul(h).to_vec()).collect();
        let rhs = Matrix::from_columns(f, m.dim() * x.dim(), &maps.iter().map(Matrix::to_vec).collect::<Vec<_>>());
        let lifts = if cols.is_empty() {
            rhs.is_zero()
        } else {
            Matrix::from_columns(f, m.dim() * x.dim(), &cols).solve_many(&rhs)?.is_some()
        };
        if !lifts {
            return Err(Error::Verification(format!(
                "a non-isomorphism {} -> {} does not lift through the AR sequence",
                x.name().unwrap_or("X"),
                m.name().unwrap_or("M")
            )));
        }
        checked += maps.len();
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::is_iso;
    use crate::workbench::fixtures;

    #[test]
    fn tau_examples() {
        let a = fixtures::truncated_polynomial(3, 3);
        let m1 = fixtures::truncated_module(&a, 1);
        assert!(is_iso(&tau(&m1).unwrap(), &m1).is_iso());
        assert!(tau(&a.regular_module()).is_err());
        let b = fixtures::truncated_polynomial(2, 2);
        assert!(is_iso(&tau(&b.simple(0)).unwrap(), &b.simple(0)).is_iso());
        let r = fixtures::liu_schulz_algebra(2);
        let m = fixtures::liu_schulz_module(&r);
        let t = tau(&m).unwrap();
        assert!(is_iso(&t, &m).is_not_iso());
        assert!(is_iso(&tau_inverse(&t).unwrap(), &m).is_iso());
    }

    #[test]
    fn truncated_ar_sequences() {
        let a = fixtures::truncated_polynomial(3, 3);
        let m1 = fixtures::truncated_module(&a, 1);
        let m2 = fixtures::truncated_module(&a, 2);
        let s1 = ar_sequence(&m1).unwrap();
        assert!(is_iso(&s1.middle, &m2).is_iso());
        assert_eq!(s1.alpha(), 1);
        let s2 = ar_sequence(&m2).unwrap();
        assert_eq!(s2.middle.dim(), 4);
        assert_eq!(s2.alpha(), 1);
        let proj: Vec<bool> = s2.decomposition.summands.iter().map(|s| s.projective).collect();
        assert_eq!(proj.iter().filter(|&&p| p).count(), 1);
        assert!(s2.sequence().verify().is_ok());
    }

    #[test]
    fn nakayama_ar_sequences_are_exact_and_nonsplit() {
        let a = fixtures::nakayama_two_simples();
        for m in fixtures::small_modules(&a) {
            if m.is_projective() || crate::decomp::indecomposable(&m, 0).is_none() {
                continue;
            }
            let s = ar_sequence(&m).unwrap();
            assert!(!s.sequence().is_split().unwrap());
            assert!(s.alpha() <= 2);
            assert!(is_iso(&s.tau_end, &omega(&m, 2)).is_iso());
        }
    }

    #[test]
    fn liu_schulz_boundary_has_valence_one() {
        let r = fixtures::liu_schulz_algebra(2);
        let m = fixtures::liu_schulz_module(&r);
        let s = ar_sequence(&m).unwrap();
        assert_eq!(s.alpha(), 1);
        assert!(s.lifts_checked > 0);
    }
}
