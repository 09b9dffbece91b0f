//! Finite-dimensional left modules and the category `A-mod`.
//!
//! A module is a dimension plus one action matrix per basis element of its
//! algebra. Vectors are columns; `act(b) * v` is `b . v`.

mod cover;
mod hom;
mod io;
mod morphism;

use std::fmt;
use std::sync::{Arc, OnceLock};

pub use cover::Presentation;
pub use hom::{hom_space, hom_space_naive, stable_hom, stable_hom_via_cover, HomSpace, StableHomSpace};
pub use io::{load_module, module_from_json, module_to_json, save_module};
pub use morphism::{Morphism, ShortExactSequence};

use crate::algebra::Algebra;
use crate::xfield::{FieldSpec, Matrix, RowSpace, Scalar};
use crate::{Error, Result};

#[derive(Default)]
struct Cache {
    presentation: OnceLock<Arc<Presentation>>,
    dual_actions: OnceLock<Vec<Matrix>>,
    radical: OnceLock<RowSpace>,
    end_basis: OnceLock<Vec<Matrix>>,
    key: OnceLock<crate::decomp::IsoKey>,
    syzygy: OnceLock<crate::resolve::Step>,
    cosyzygy: OnceLock<crate::resolve::Step>,
}

/// A finite-dimensional left module.
#[derive(Clone)]
pub struct Module {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Arc<Vec<Matrix>>,
    name: Option<String>,
    cache: Arc<Cache>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Module")
            .field("algebra", &self.algebra.name())
            .field("dim", &self.dim)
            .field("name", &self.name)
            .finish()
    }
}

impl Module {
    /// Builds a module and checks that the action respects the structure
    /// constants and the unit.
    pub fn new(algebra: Arc<Algebra>, dim: usize, action: Vec<Matrix>) -> Result<Module> {
        let m = Self::new_unchecked(algebra, dim, action);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(algebra: Arc<Algebra>, dim: usize, action: Vec<Matrix>) -> Module {
        Module { algebra, dim, action: Arc::new(action), name: None, cache: Arc::default() }
    }

    /// The zero module.
    pub fn zero(algebra: Arc<Algebra>) -> Module {
        let f = algebra.field();
        let action = vec![Matrix::zeros(f, 0, 0); algebra.dim()];
        Self::new_unchecked(algebra, 0, action)
    }

    /// Checks the module axioms on all basis pairs.
    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        let n = a.dim();
        if self.action.len() != n {
            return Err(Error::InvalidModule(format!("{} action matrices for an algebra of dimension {n}", self.action.len())));
        }
        for (i, m) in self.action.iter().enumerate() {
            if m.rows() != self.dim || m.cols() != self.dim {
                return Err(Error::InvalidModule(format!("action[{i}] is {}x{}, expected {2}x{2}", m.rows(), m.cols(), self.dim)));
            }
            if m.field() != a.field() {
                return Err(Error::InvalidModule(format!("action[{i}] has entries outside {}", a.field())));
            }
        }
        if self.act(a.unit()) != Matrix::identity(a.field(), self.dim) {
            return Err(Error::InvalidModule("the unit does not act as the identity".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if self.action[i].mul(&self.action[j]) != self.act(a.product(i, j)) {
                    return Err(Error::InvalidModule(format!(
                        "action is not multiplicative on basis pair ({}, {})",
                        a.basis_labels()[i],
                        a.basis_labels()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Module {
        self.name = Some(name.into());
        self
    }

    /// Action matrix of basis element `i`.
    pub fn action(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    /// Action matrix of an algebra element given in coordinates.
    pub fn act(&self, x: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.field(), self.dim, self.dim);
        for (c, a) in x.iter().zip(self.action.iter()) {
            m.add_scaled(c, a);
        }
        m
    }

    /// Action matrices of the dual basis elements `b_k^*`.
    pub(crate) fn dual_actions(&self) -> Result<&[Matrix]> {
        if let Some(d) = self.cache.dual_actions.get() {
            return Ok(d);
        }
        let sym = self.algebra.symmetric_data()?;
        let d: Vec<Matrix> = sym.dual.iter().map(|x| self.act(x)).collect();
        Ok(self.cache.dual_actions.get_or_init(|| d))
    }

    pub fn same_algebra(&self, other: &Module) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra.same_as(&other.algebra)
    }

    pub(crate) fn check_same_algebra(&self, other: &Module) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// Basis of `End(M)` (cached).
    pub fn end_basis(&self) -> &[Matrix] {
        self.cache.end_basis.get_or_init(|| hom_space(self, self).expect("same algebra").basis().to_vec())
    }

    /// Isomorphism-invariant key (cached).
    pub fn iso_key(&self) -> &crate::decomp::IsoKey {
        self.cache.key.get_or_init(|| crate::decomp::IsoKey::compute(self))
    }

    pub(crate) fn syzygy_cell(&self) -> &OnceLock<crate::resolve::Step> {
        &self.cache.syzygy
    }

    pub(crate) fn cosyzygy_cell(&self) -> &OnceLock<crate::resolve::Step> {
        &self.cache.cosyzygy
    }

    /// `J M` as a subspace.
    pub fn radical_space(&self) -> &RowSpace {
        self.cache.radical.get_or_init(|| {
            let vecs: Vec<Vec<Scalar>> = self
                .algebra
                .radical()
                .iter()
                .flat_map(|r| {
                    let m = self.act(r);
                    (0..self.dim).map(move |j| m.column(j))
                })
                .collect();
            RowSpace::span(self.field(), self.dim, &vecs)
        })
    }

    /// `J M` as a module.
    pub fn radical(&self) -> Module {
        self.submodule(self.radical_space()).0
    }

    /// `M / J M`.
    pub fn top(&self) -> Module {
        self.quotient(self.radical_space()).0
    }

    /// The socle `{v : r v = 0 for all r in J}` as a subspace.
    pub fn socle_space(&self) -> RowSpace {
        let f = self.field();
        let rad = self.algebra.radical();
        if rad.is_empty() || self.dim == 0 {
            return RowSpace::span(f, self.dim, &identity_vectors(f, self.dim));
        }
        let mut stacked = self.act(&rad[0]);
        for r in &rad[1..] {
            stacked = stacked.vstack(&self.act(r));
        }
        RowSpace::span(f, self.dim, &stacked.kernel_basis())
    }

    pub fn socle(&self) -> Module {
        self.submodule(&self.socle_space()).0
    }

    /// Dimensions of `J^k M` for `k = 0, 1, ...` down to zero.
    pub fn radical_filtration_dims(&self) -> Vec<usize> {
        let f = self.field();
        let mut dims = vec![self.dim];
        let mut cur = RowSpace::span(f, self.dim, &identity_vectors(f, self.dim));
        let actions: Vec<Matrix> = self.algebra.radical().iter().map(|r| self.act(r)).collect();
        while cur.dim() > 0 {
            let vecs: Vec<Vec<Scalar>> =
                actions.iter().flat_map(|a| cur.basis().into_iter().map(move |v| a.mul_vec(&v))).collect();
            let next = RowSpace::span(f, self.dim, &vecs);
            dims.push(next.dim());
            if next.dim() == cur.dim() {
                break;
            }
            cur = next;
        }
        dims
    }

    /// Dimensions of `soc^k M` for `k = 0, 1, ...` up to `dim M`.
    pub fn socle_filtration_dims(&self) -> Vec<usize> {
        let f = self.field();
        let actions: Vec<Matrix> = self.algebra.radical().iter().map(|r| self.act(r)).collect();
        let mut cur = RowSpace::zero(f, self.dim);
        let mut dims = vec![0];
        while cur.dim() < self.dim {
            // soc^{k+1} = {v : r v in soc^k for every radical r}.
            let free = cur.free_coordinates();
            let proj = quotient_projection(&cur, f, self.dim);
            let mut stacked: Option<Matrix> = None;
            for a in &actions {
                let block = proj.mul(a);
                stacked = Some(match stacked {
                    None => block,
                    Some(s) => s.vstack(&block),
                });
            }
            let next = match stacked {
                None => RowSpace::span(f, self.dim, &identity_vectors(f, self.dim)),
                Some(s) if !free.is_empty() => RowSpace::span(f, self.dim, &s.kernel_basis()),
                Some(_) => break,
            };
            if next.dim() == cur.dim() {
                break;
            }
            dims.push(next.dim());
            cur = next;
        }
        dims
    }

    /// Composition length. Simples of the supported algebras are
    /// one-dimensional, so this is the sum of the radical layer dimensions.
    pub fn composition_length(&self) -> usize {
        let d = self.radical_filtration_dims();
        d.windows(2).map(|w| w[0] - w[1]).sum()
    }

    /// Smallest `k` with `J^k M = 0`.
    pub fn loewy_length(&self) -> usize {
        self.radical_filtration_dims().len() - 1
    }

    /// Multiplicity of each simple in `top(M)`.
    pub fn top_multiplicities(&self) -> Vec<usize> {
        self.presentation().multiplicities()
    }

    /// The submodule spanned by `space` (which must be closed under the
    /// action) and its inclusion.
    pub fn submodule(&self, space: &RowSpace) -> (Module, Morphism) {
        let f = self.field();
        let basis = space.basis();
        let action = self
            .action
            .iter()
            .map(|a| {
                let cols: Vec<Vec<Scalar>> = basis
                    .iter()
                    .map(|v| {
                        let w = a.mul_vec(v);
                        debug_assert!(space.contains(&w), "subspace is not a submodule");
                        space.coords_unchecked(&w)
                    })
                    .collect();
                Matrix::from_columns(f, basis.len(), &cols)
            })
            .collect();
        let sub = Module::new_unchecked(self.algebra.clone(), basis.len(), action);
        let incl = Morphism::new_unchecked(sub.clone(), self.clone(), space.basis_matrix());
        (sub, incl)
    }

    /// The submodule generated by the given vectors.
    pub fn generated_submodule(&self, vectors: &[Vec<Scalar>]) -> RowSpace {
        let f = self.field();
        let mut space = RowSpace::span(f, self.dim, vectors);
        loop {
            let mut vecs = space.basis();
            for g in self.algebra.generators() {
                let m = self.act(g);
                for v in space.basis() {
                    vecs.push(m.mul_vec(&v));
                }
            }
            let next = RowSpace::span(f, self.dim, &vecs);
            if next.dim() == space.dim() {
                return space;
            }
            space = next;
        }
    }

    /// `M / space` (the space must be a submodule) and the projection.
    pub fn quotient(&self, space: &RowSpace) -> (Module, Morphism) {
        let f = self.field();
        let free = space.free_coordinates();
        let proj = quotient_projection(space, f, self.dim);
        let action = self.action.iter().map(|a| proj.mul(a).select_columns(&free)).collect();
        let q = Module::new_unchecked(self.algebra.clone(), free.len(), action);
        let pi = Morphism::new_unchecked(self.clone(), q.clone(), proj);
        (q, pi)
    }

    /// Direct sum with block-diagonal action.
    pub fn direct_sum(parts: &[Module]) -> Result<Module> {
        let first = parts.first().ok_or_else(|| Error::InvalidInput("direct sum of no modules".into()))?;
        for p in parts {
            p.check_same_algebra(first)?;
        }
        let f = first.field();
        let dim = parts.iter().map(Module::dim).sum();
        let action = (0..first.algebra.dim())
            .map(|b| {
                let blocks: Vec<&Matrix> = parts.iter().map(|p| &p.action[b]).collect();
                Matrix::block_diagonal(f, &blocks)
            })
            .collect();
        Ok(Module::new_unchecked(first.algebra.clone(), dim, action))
    }

    /// `M^{⊕k}`.
    pub fn power(&self, k: usize) -> Module {
        if k == 0 {
            return Module::zero(self.algebra.clone());
        }
        Module::direct_sum(&vec![self.clone(); k]).expect("same algebra")
    }

    /// The dual `D M = Hom_k(M, k)` as a left module over the opposite
    /// algebra, with transposed action.
    pub fn dual(&self) -> Module {
        let op = self.algebra.opposite();
        let action = self.action.iter().map(Matrix::transpose).collect();
        let mut d = Module::new_unchecked(op, self.dim, action);
        d.name = self.name.as_ref().map(|n| match n.strip_prefix("D(").and_then(|s| s.strip_suffix(')')) {
            Some(inner) => inner.to_string(),
            None => format!("D({n})"),
        });
        d
    }

    /// The projective cover data: top generators, cover, epi and kernel.
    pub fn presentation(&self) -> &Presentation {
        self.cache.presentation.get_or_init(|| Arc::new(Presentation::compute(self)))
    }

    /// Projective cover `P(M) -> M`.
    pub fn projective_cover(&self) -> Morphism {
        let p = self.presentation();
        Morphism::new_unchecked(p.cover.clone(), self.clone(), p.epi.clone())
    }

    /// Whether `M` is projective: the cover epi is injective.
    pub fn is_projective(&self) -> bool {
        self.presentation().cover.dim() == self.dim
    }

    /// Splits off projective summands one at a time using the socle test:
    /// `P_i` is a summand iff the socle element of `A e_i` acts nonzero.
    /// Returns the projective-free part (as a quotient) and the indices of
    /// the removed summands.
    pub fn strip_projectives(&self) -> (Module, Vec<usize>) {
        let mut cur = self.clone();
        let mut removed = Vec::new();
        'outer: loop {
            for i in 0..self.algebra.num_simples() {
                let Some(w) = self.algebra.socle_element(i) else { continue };
                let wm = cur.act(w);
                let Some(j) = (0..cur.dim).find(|&j| (0..cur.dim).any(|r| !wm[(r, j)].is_zero())) else {
                    continue;
                };
                let mut v = vec![cur.field().zero(); cur.dim];
                v[j] = cur.field().one();
                let m = cur.act(&self.algebra.idempotents()[i]).mul_vec(&v);
                let sub = cur.generated_submodule(&[m]);
                cur = cur.quotient(&sub).0;
                removed.push(i);
                continue 'outer;
            }
            break;
        }
        let name = self.name.clone();
        cur.name = name;
        (cur, removed)
    }

    /// Flattened action data, for hashing and exact comparison.
    pub fn same_action(&self, other: &Module) -> bool {
        self.dim == other.dim && self.same_algebra(other) && self.action == other.action
    }
}

pub(crate) fn identity_vectors(f: FieldSpec, n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| {
            let mut v = vec![f.zero(); n];
            v[i] = f.one();
            v
        })
        .collect()
}

/// Matrix of the projection `k^n -> k^n / space` in free coordinates.
pub(crate) fn quotient_projection(space: &RowSpace, f: FieldSpec, n: usize) -> Matrix {
    let free = space.free_coordinates();
    let cols: Vec<Vec<Scalar>> = identity_vectors(f, n).iter().map(|e| space.quotient_coords(e)).collect();
    Matrix::from_columns(f, free.len(), &cols)
}
