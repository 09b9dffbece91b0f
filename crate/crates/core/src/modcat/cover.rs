//! Projective covers and presentations.

use super::{identity_vectors, Module};
use crate::xfield::{Matrix, RowSpace, Scalar};

/// A minimal projective presentation of a module `M`.
///
/// The cover is `P = ⊕_j A e_{i_j}`, one summand per top generator
/// `m_j ∈ e_{i_j} M`; the summand for `j` has the echelon basis of `A e_{i_j}`
/// inside `A`. The epi sends a basis element `x` of summand `j` to `x m_j`.
#[derive(Clone, Debug)]
pub struct Presentation {
    /// `(idempotent index, generator vector)` for each top generator.
    pub generators: Vec<(usize, Vec<Scalar>)>,
    pub cover: Module,
    /// Offsets of the summands inside the cover.
    pub offsets: Vec<usize>,
    /// `dim M x dim P`.
    pub epi: Matrix,
    /// A linear right inverse of `epi` (`dim P x dim M`).
    pub section: Matrix,
    /// `ker(epi)` as a subspace of the cover.
    pub kernel: RowSpace,
}

impl Presentation {
    pub(super) fn compute(m: &Module) -> Presentation {
        let a = m.algebra().clone();
        let f = m.field();
        let d = m.dim();
        let mut span = m.radical_space().clone();
        let mut generators = Vec::new();
        for (i, e) in a.idempotents().iter().enumerate() {
            let em = m.act(e);
            for j in 0..d {
                let v = em.column(j);
                if v.iter().all(Scalar::is_zero) || span.contains(&v) {
                    continue;
                }
                span = span.sum(&RowSpace::span(f, d, std::slice::from_ref(&v)));
                generators.push((i, v));
            }
        }
        debug_assert_eq!(span.dim(), d, "top generators must span M modulo J M");

        let projectives: Vec<Module> = (0..a.num_simples()).map(|i| a.projective(i)).collect();
        let parts: Vec<Module> = generators.iter().map(|(i, _)| projectives[*i].clone()).collect();
        let cover = if parts.is_empty() { Module::zero(a.clone()) } else { Module::direct_sum(&parts).expect("same algebra") };
        let mut offsets = Vec::with_capacity(parts.len());
        let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(cover.dim());
        for (i, v) in &generators {
            offsets.push(cols.len());
            for x in a.projective_space(*i).basis() {
                cols.push(m.act(&x).mul_vec(v));
            }
        }
        let epi = Matrix::from_columns(f, d, &cols);
        let section = if d == 0 {
            Matrix::zeros(f, cover.dim(), 0)
        } else {
            epi.solve_many(&Matrix::identity(f, d)).expect("shapes agree").expect("cover epi is surjective")
        };
        let kernel = if cover.dim() == 0 {
            RowSpace::zero(f, 0)
        } else if d == 0 {
            RowSpace::span(f, cover.dim(), &identity_vectors(f, cover.dim()))
        } else {
            RowSpace::span(f, cover.dim(), &epi.kernel_basis())
        };
        let cover = cover.with_name(format!("P({})", m.name().unwrap_or("M")));
        Presentation { generators, cover, offsets, epi, section, kernel }
    }

    /// Number of summands isomorphic to each `P_i` (equals the multiplicity
    /// of `S_i` in the top).
    pub fn multiplicities(&self) -> Vec<usize> {
        let n = self.cover.algebra().num_simples();
        let mut t = vec![0; n];
        for (i, _) in &self.generators {
            t[*i] += 1;
        }
        t
    }

    /// Number of indecomposable projective summands of the cover.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// The generator of summand `j` of the cover (the idempotent `e_{i_j}`
    /// in cover coordinates).
    pub fn generator_vector(&self, j: usize) -> Vec<Scalar> {
        let a = self.cover.algebra();
        let i = self.generators[j].0;
        let local = a.projective_space(i).coords(&a.idempotents()[i]).expect("e_i lies in A e_i");
        let mut v = vec![self.cover.field().zero(); self.cover.dim()];
        v[self.offsets[j]..self.offsets[j] + local.len()].clone_from_slice(&local);
        v
    }

    /// The module map `P -> N` sending generator `j` to `images[j]`, which
    /// must lie in `e_{i_j} N`.
    pub fn map_from_generators(&self, target: &Module, images: &[Vec<Scalar>]) -> Matrix {
        let a = self.cover.algebra();
        let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(self.cover.dim());
        for ((i, _), y) in self.generators.iter().zip(images) {
            for x in a.projective_space(*i).basis() {
                cols.push(target.act(&x).mul_vec(y));
            }
        }
        Matrix::from_columns(self.cover.field(), target.dim(), &cols)
    }

    /// Lifts `g: P -> N` (`P` this cover) through the projective cover of
    /// `N`: returns `F: P -> P(N)` with `epi_N F = g`.
    pub fn lift_through_cover(&self, g: &Matrix, target: &Module) -> Matrix {
        let tp = target.presentation();
        let a = self.cover.algebra();
        let images: Vec<Vec<Scalar>> = (0..self.generators.len())
            .map(|j| {
                let v = g.mul_vec(&self.generator_vector(j));
                let pre = tp.section.mul_vec(&v);
                tp.cover.act(&a.idempotents()[self.generators[j].0]).mul_vec(&pre)
            })
            .collect();
        self.map_from_generators(&tp.cover, &images)
    }

    /// `ker(epi) ⊆ J P`, the minimality condition.
    pub fn is_minimal(&self) -> bool {
        let rad = self.cover.radical_space();
        self.kernel.basis().iter().all(|v| rad.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use crate::decomp::is_iso;
    use crate::workbench::fixtures;
    use crate::modcat::Morphism;

    #[test]
    fn lifting_through_covers() {
        let a = fixtures::nakayama_two_simples();
        let mods = fixtures::small_modules(&a);
        for m in &mods {
            for n in &mods {
                let pm = m.presentation();
                let pn = n.presentation();
                for h in crate::modcat::hom_space(m, n).unwrap().basis() {
                    let g = h.mul(&pm.epi);
                    let f = pm.lift_through_cover(&g, n);
                    assert_eq!(pn.epi.mul(&f), g);
                    assert!(Morphism::new(pm.cover.clone(), pn.cover.clone(), f).is_ok());
                }
            }
        }
    }

    #[test]
    fn covers_of_small_modules() {
        let a = fixtures::truncated_polynomial(3, 3);
        let s = a.simple(0);
        let p = s.presentation();
        assert_eq!(p.cover.dim(), 3);
        assert!(p.is_minimal());
        assert_eq!(p.kernel.dim(), 2);
        let reg = a.regular_module();
        let pr = reg.presentation();
        assert_eq!(pr.cover.dim(), 3);
        assert!(pr.epi.is_invertible());
        let m2 = fixtures::truncated_module(&a, 2);
        assert_eq!(m2.presentation().cover.dim(), 3);
        assert!(m2.presentation().is_minimal());
        assert!(is_iso(&m2.presentation().cover, &reg).is_iso());
    }

    #[test]
    fn covers_over_two_simples() {
        let a = fixtures::nakayama_two_simples();
        for (i, s) in a.simple_modules().into_iter().enumerate() {
            let p = s.presentation();
            assert_eq!(p.multiplicities()[i], 1);
            assert_eq!(p.rank(), 1);
            assert!(p.is_minimal());
        }
        let sum = crate::modcat::Module::direct_sum(&a.simple_modules()).unwrap();
        assert_eq!(sum.presentation().cover.dim(), a.dim());
    }
}
