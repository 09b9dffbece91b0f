//! Finite-dimensional basic algebras given by structure constants.
//!
//! An [`AlgebraPresentation`] is raw data: a multiplication table together
//! with a unit, a complete set of primitive orthogonal idempotents and a
//! basis of the radical. [`Algebra`] is a presentation that passed
//! [`validate_algebra`] together with derived data: multiplication matrices,
//! a symmetrizing form if one exists, the dual basis, a generating set, and
//! the indecomposable projectives `A e_i` with their socles.
//!
//! Radical maximality is an input contract. Validation checks that the given
//! radical is a nilpotent two-sided ideal complementing the idempotents, but
//! it cannot tell a proper nilpotent ideal from the Jacobson radical.

mod form;
mod io;
mod validate;

use std::sync::{Arc, OnceLock, Weak};

pub use form::{find_symmetrizing_form, gram_matrix, is_symmetrizing_form, FormSearch, FormStatus};
pub use io::{algebra_from_json, algebra_to_json, load_algebra, parse_scalar_value, save_algebra, scalar_to_value};
pub use validate::{validate_algebra, Check, ValidationReport};


use crate::modcat::Module;
use crate::xfield::{FieldSpec, Matrix, RowSpace, Scalar};
use crate::{Error, Result};

/// Budget of random trials used when searching for a symmetrizing form.
pub const DEFAULT_FORM_BUDGET: usize = 256;

/// Raw structure-constant data for an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub name: String,
    pub provenance: String,
    pub field: FieldSpec,
    pub dim: usize,
    pub basis: Vec<String>,
    /// `table[i][j]` holds the coordinates of `b_i * b_j`.
    pub table: Vec<Vec<Vec<Scalar>>>,
    pub unit: Vec<Scalar>,
    pub idempotents: Vec<Vec<Scalar>>,
    pub radical: Vec<Vec<Scalar>>,
}

impl AlgebraPresentation {
    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    /// Product of two elements in coordinates.
    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (o, c) in out.iter_mut().zip(&self.table[i][j]) {
                    if !c.is_zero() {
                        *o = &*o + &(&ab * c);
                    }
                }
            }
        }
        out
    }

    /// The opposite presentation: `table_op[i][j] = table[j][i]`.
    pub fn opposite(&self) -> AlgebraPresentation {
        let n = self.dim;
        let table = (0..n).map(|i| (0..n).map(|j| self.table[j][i].clone()).collect()).collect();
        let name = match self.name.strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.name),
        };
        AlgebraPresentation { name, table, ..self.clone() }
    }
}

/// Data that only exists for symmetric algebras.
#[derive(Clone, Debug)]
pub struct SymmetricData {
    pub lambda: Vec<Scalar>,
    /// `dual[k]` is the coordinate vector of `b_k^*`, defined by
    /// `λ(b_k b_l^*) = δ_{kl}`.
    pub dual: Vec<Vec<Scalar>>,
}

/// A validated algebra with derived data.
#[derive(Debug)]
pub struct Algebra {
    pres: AlgebraPresentation,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
    radical_space: RowSpace,
    generators: Vec<Vec<Scalar>>,
    form_search: FormSearch,
    symmetric: Option<SymmetricData>,
    projectives: Vec<RowSpace>,
    socle_elements: Vec<Option<Vec<Scalar>>>,
    loewy_length: usize,
    opposite: OnceLock<Arc<Algebra>>,
    parent: Weak<Algebra>,
}

impl Algebra {
    /// Validates `pres` and searches for a symmetrizing form with the default
    /// budget and seed 0.
    pub fn new(pres: AlgebraPresentation) -> Result<Arc<Algebra>> {
        Self::with_form_search(pres, DEFAULT_FORM_BUDGET, 0)
    }

    pub fn with_form_search(pres: AlgebraPresentation, budget: usize, seed: u64) -> Result<Arc<Algebra>> {
        let report = validate_algebra(&pres);
        if !report.is_ok() {
            let msgs: Vec<String> = report
                .failures()
                .map(|c| format!("{}: {}", c.name, c.detail.clone().unwrap_or_default()))
                .collect();
            return Err(Error::InvalidAlgebra(format!("{}: {}", pres.name, msgs.join("; "))));
        }
        let search = find_symmetrizing_form(&pres, budget, seed);
        Ok(Arc::new(Self::build(pres, search, Weak::new())))
    }

    fn build(pres: AlgebraPresentation, form_search: FormSearch, parent: Weak<Algebra>) -> Algebra {
        let n = pres.dim;
        let f = pres.field;
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        for i in 0..n {
            let l: Vec<Vec<Scalar>> = (0..n).map(|j| pres.table[i][j].clone()).collect();
            let r: Vec<Vec<Scalar>> = (0..n).map(|j| pres.table[j][i].clone()).collect();
            left.push(Matrix::from_columns(f, n, &l));
            right.push(Matrix::from_columns(f, n, &r));
        }
        let radical_space = RowSpace::span(f, n, &pres.radical);

        // Generators: idempotents and a complement of J^2 in J.
        let mut j2 = Vec::new();
        for a in &pres.radical {
            for b in &pres.radical {
                j2.push(pres.mul(a, b));
            }
        }
        let mut span = RowSpace::span(f, n, &j2);
        let mut generators = pres.idempotents.clone();
        for r in &pres.radical {
            if !span.contains(r) {
                generators.push(r.clone());
                span = span.sum(&RowSpace::span(f, n, std::slice::from_ref(r)));
            }
        }

        let symmetric = form_search.form().and_then(|lambda| {
            let g = gram_matrix(&pres, lambda);
            let d = g.inverse()?;
            let dual = (0..n).map(|k| d.column(k)).collect();
            Some(SymmetricData { lambda: lambda.to_vec(), dual })
        });

        let projectives: Vec<RowSpace> = pres
            .idempotents
            .iter()
            .map(|e| {
                let cols: Vec<Vec<Scalar>> = (0..n).map(|k| pres.mul(&pres.basis_vector(k), e)).collect();
                RowSpace::span(f, n, &cols)
            })
            .collect();

        // soc(A e_i): elements of A e_i killed by every radical element.
        let socle_elements = projectives
            .iter()
            .map(|p| {
                let basis = p.basis();
                if basis.is_empty() {
                    return None;
                }
                let pm = p.basis_matrix();
                let mut eqs: Option<Matrix> = None;
                for r in &pres.radical {
                    let lr = left_mult(&left, r, f, n);
                    let block = lr.mul(&pm);
                    eqs = Some(match eqs {
                        None => block,
                        Some(e) => e.vstack(&block),
                    });
                }
                let ker = match eqs {
                    None => (0..basis.len())
                        .map(|i| {
                            let mut v = vec![f.zero(); basis.len()];
                            v[i] = f.one();
                            v
                        })
                        .collect(),
                    Some(e) => e.kernel_basis(),
                };
                if ker.len() != 1 {
                    return None;
                }
                Some(pm.mul_vec(&ker[0]))
            })
            .collect();

        let loewy_length = {
            let mut power = pres.radical.clone();
            let mut len = 1;
            loop {
                let space = RowSpace::span(f, n, &power);
                if space.dim() == 0 || len > n {
                    break;
                }
                let mut next = Vec::new();
                for x in space.basis() {
                    for r in &pres.radical {
                        next.push(pres.mul(&x, r));
                    }
                }
                power = next;
                len += 1;
            }
            len
        };

        Algebra {
            pres,
            left,
            right,
            radical_space,
            generators,
            form_search,
            symmetric,
            projectives,
            socle_elements,
            loewy_length,
            opposite: OnceLock::new(),
            parent,
        }
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.pres
    }

    pub fn name(&self) -> &str {
        &self.pres.name
    }

    pub fn field(&self) -> FieldSpec {
        self.pres.field
    }

    pub fn dim(&self) -> usize {
        self.pres.dim
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.pres.basis
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        self.pres.basis_vector(i)
    }

    /// Coordinates of `b_i * b_j`.
    pub fn product(&self, i: usize, j: usize) -> &[Scalar] {
        &self.pres.table[i][j]
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.left_matrix_of(x).mul_vec(y)
    }

    /// Matrix of left multiplication by basis element `i`.
    pub fn left_matrix(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    /// Matrix of right multiplication by basis element `i`.
    pub fn right_matrix(&self, i: usize) -> &Matrix {
        &self.right[i]
    }

    pub fn left_matrix_of(&self, x: &[Scalar]) -> Matrix {
        left_mult(&self.left, x, self.field(), self.dim())
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.pres.unit
    }

    pub fn idempotents(&self) -> &[Vec<Scalar>] {
        &self.pres.idempotents
    }

    pub fn num_simples(&self) -> usize {
        self.pres.idempotents.len()
    }

    pub fn radical(&self) -> &[Vec<Scalar>] {
        &self.pres.radical
    }

    pub fn radical_space(&self) -> &RowSpace {
        &self.radical_space
    }

    /// A generating set: idempotents followed by lifts of a basis of `J/J^2`.
    pub fn generators(&self) -> &[Vec<Scalar>] {
        &self.generators
    }

    /// Smallest `k` with `J^k = 0`.
    pub fn loewy_length(&self) -> usize {
        self.loewy_length
    }

    pub fn form_search(&self) -> &FormSearch {
        &self.form_search
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric.is_some()
    }

    pub fn symmetric_data(&self) -> Result<&SymmetricData> {
        self.symmetric.as_ref().ok_or_else(|| Error::NotSymmetric(self.pres.name.clone()))
    }

    /// Basis of `A e_i` inside `A`.
    pub fn projective_space(&self, i: usize) -> &RowSpace {
        &self.projectives[i]
    }

    /// Spanning element of `soc(A e_i)` when that socle is one-dimensional.
    pub fn socle_element(&self, i: usize) -> Option<&[Scalar]> {
        self.socle_elements[i].as_deref()
    }

    /// Structural equality of the multiplication (names are ignored).
    pub fn same_as(&self, other: &Algebra) -> bool {
        std::ptr::eq(self, other) || (self.pres.field == other.pres.field && self.pres.table == other.pres.table)
    }

    /// The opposite algebra. Computed once; `a.opposite().opposite()` is `a`
    /// itself whenever `a` is still alive.
    pub fn opposite(self: &Arc<Self>) -> Arc<Algebra> {
        if let Some(p) = self.parent.upgrade() {
            return p;
        }
        self.opposite
            .get_or_init(|| {
                let pres = self.pres.opposite();
                let search = match &self.form_search {
                    FormSearch::Found(l) => FormSearch::Found(l.clone()),
                    _ => find_symmetrizing_form(&pres, DEFAULT_FORM_BUDGET, 0),
                };
                Arc::new(Algebra::build(pres, search, Arc::downgrade(self)))
            })
            .clone()
    }

    /// The indecomposable projectives `P_i = A e_i`, one per idempotent.
    pub fn projective_indecomposables(self: &Arc<Self>) -> Vec<Module> {
        (0..self.num_simples()).map(|i| self.projective(i)).collect()
    }

    /// `P_i = A e_i` with the left multiplication action.
    pub fn projective(self: &Arc<Self>, i: usize) -> Module {
        let space = &self.projectives[i];
        let basis = space.basis();
        let action = (0..self.dim())
            .map(|b| {
                let cols: Vec<Vec<Scalar>> =
                    basis.iter().map(|v| space.coords_unchecked(&self.left[b].mul_vec(v))).collect();
                Matrix::from_columns(self.field(), basis.len(), &cols)
            })
            .collect();
        Module::new_unchecked(self.clone(), basis.len(), action).with_name(format!("P{}", i + 1))
    }

    /// The simple modules `S_i = P_i / J P_i`.
    pub fn simple_modules(self: &Arc<Self>) -> Vec<Module> {
        (0..self.num_simples()).map(|i| self.simple(i)).collect()
    }

    pub fn simple(self: &Arc<Self>, i: usize) -> Module {
        let p = self.projective(i);
        p.top().with_name(format!("S{}", i + 1))
    }

    /// The regular left module `A`.
    pub fn regular_module(self: &Arc<Self>) -> Module {
        Module::new_unchecked(self.clone(), self.dim(), self.left.clone()).with_name("A")
    }
}

fn left_mult(left: &[Matrix], x: &[Scalar], f: FieldSpec, n: usize) -> Matrix {
    let mut m = Matrix::zeros(f, n, n);
    for (c, l) in x.iter().zip(left) {
        m.add_scaled(c, l);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workbench::fixtures;
    use super::form::dot;

    #[test]
    fn truncated_polynomial_validates_and_is_symmetric() {
        let a = fixtures::truncated_polynomial(3, 3);
        let f = a.field();
        assert!(validate_algebra(a.presentation()).is_ok());
        // The coefficient of x^2: its Gram matrix is the antidiagonal.
        let lambda = a.symmetric_data().unwrap().lambda.clone();
        assert_eq!(lambda, vec![f.zero(), f.zero(), f.one()]);
        let g = gram_matrix(a.presentation(), &lambda);
        assert_eq!(g, Matrix::from_ints(f, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
    }

    #[test]
    fn corrupted_table_names_associativity() {
        let a = fixtures::truncated_polynomial(3, 3);
        let mut p = a.presentation().clone();
        let f = p.field;
        // x * x^2 := x instead of 0, so (x x) x != x (x x).
        p.table[1][2] = vec![f.zero(), f.one(), f.zero()];
        let report = validate_algebra(&p);
        let c = report.check(validate::CHECK_ASSOCIATIVE).unwrap();
        assert!(!c.passed);
        assert!(c.detail.as_ref().unwrap().contains("basis triple"));
        assert!(Algebra::new(p).is_err());
    }

    #[test]
    fn path_algebra_has_no_symmetrizing_form() {
        let p = fixtures::path_algebra_a2_presentation();
        assert!(validate_algebra(&p).is_ok());
        let search = find_symmetrizing_form(&p, 64, 0);
        assert!(matches!(search, FormSearch::CertifiedAbsent { .. }));
        // Exhaustive oracle: all 8 functionals over F_2.
        let f = p.field;
        for bits in 0..8u32 {
            let l: Vec<Scalar> = (0..3).map(|k| f.from_i64(((bits >> k) & 1) as i64)).collect();
            assert!(!is_symmetrizing_form(&p, &l));
        }
    }

    #[test]
    fn group_algebra_c2_forms() {
        let a = fixtures::group_algebra_c2();
        let f = a.field();
        // The coefficient of g: Gram [[0,1],[1,0]], rank 2.
        assert!(is_symmetrizing_form(a.presentation(), &[f.zero(), f.one()]));
        assert!(a.is_symmetric());
    }

    #[test]
    fn projectives_and_simples() {
        let a = fixtures::truncated_polynomial(3, 3);
        let ps = a.projective_indecomposables();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].dim(), 3);
        let ss = a.simple_modules();
        assert_eq!(ss[0].dim(), 1);

        let c22 = fixtures::group_algebra_c2xc2();
        assert_eq!(c22.projective_indecomposables()[0].dim(), 4);

        let nak = fixtures::nakayama_two_simples();
        let ps = nak.projective_indecomposables();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps.iter().map(Module::dim).sum::<usize>(), nak.dim());
        for (p, s) in ps.iter().zip(nak.simple_modules()) {
            assert_eq!(s.dim(), p.dim() - p.radical().dim());
            for r in nak.radical() {
                assert!(s.act(r).is_zero());
            }
        }
    }

    #[test]
    fn opposite_is_an_involution() {
        let a = fixtures::truncated_polynomial(3, 3);
        assert!(a.opposite().same_as(&a));
        let ls = fixtures::liu_schulz_algebra(2);
        let op = ls.opposite();
        assert!(!op.same_as(&ls));
        assert!(Arc::ptr_eq(&op.opposite(), &ls));
        assert_eq!(op.presentation().opposite().table, ls.presentation().table);
        // In the opposite algebra x1 * x0 = x0 x1 (product taken in A).
        let x0x1 = ls.product(1, 2).to_vec();
        assert_eq!(op.product(2, 1), x0x1.as_slice());
    }

    #[test]
    fn casimir_identities() {
        for a in [fixtures::truncated_polynomial(3, 3), fixtures::nakayama_two_simples(), fixtures::liu_schulz_algebra(2)] {
            let sym = a.symmetric_data().unwrap();
            let n = a.dim();
            for k in 0..n {
                for l in 0..n {
                    let v = dot(&sym.lambda, &a.mul(&a.basis_vector(k), &sym.dual[l]));
                    assert_eq!(v.is_one(), k == l);
                    assert_eq!(v.is_zero(), k != l);
                }
            }
        }
    }
}
