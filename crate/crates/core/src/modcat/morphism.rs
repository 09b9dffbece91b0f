//! Module homomorphisms and short exact sequences.

use std::fmt;

use super::Module;
use crate::xfield::{Matrix, RowSpace, Scalar};
use crate::{Error, Result};

/// A module map given by a `dim target x dim source` matrix.
#[derive(Clone)]
pub struct Morphism {
    source: Module,
    target: Module,
    matrix: Matrix,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({:?} -> {:?}, rank {})", self.source, self.target, self.matrix.rank())
    }
}

impl Morphism {
    /// Builds a morphism after checking shapes and that it intertwines the
    /// actions of a generating set of the algebra.
    pub fn new(source: Module, target: Module, matrix: Matrix) -> Result<Morphism> {
        source.check_same_algebra(&target)?;
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::InvalidMorphism(format!(
                "matrix is {}x{} but the map is {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        let f = Morphism { source, target, matrix };
        if !f.intertwines() {
            return Err(Error::InvalidMorphism("matrix does not commute with the action".into()));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: Module, target: Module, matrix: Matrix) -> Morphism {
        debug_assert_eq!((matrix.rows(), matrix.cols()), (target.dim(), source.dim()));
        Morphism { source, target, matrix }
    }

    pub fn identity(m: &Module) -> Morphism {
        Morphism::new_unchecked(m.clone(), m.clone(), Matrix::identity(m.field(), m.dim()))
    }

    pub fn zero(source: &Module, target: &Module) -> Morphism {
        Morphism::new_unchecked(source.clone(), target.clone(), Matrix::zeros(source.field(), target.dim(), source.dim()))
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `matrix * ρ_source(g) = ρ_target(g) * matrix` for every generator `g`.
    pub fn intertwines(&self) -> bool {
        self.source.algebra().generators().iter().all(|g| {
            self.matrix.mul(&self.source.act(g)) == self.target.act(g).mul(&self.matrix)
        })
    }

    /// `self ∘ g`.
    pub fn compose_after(&self, g: &Morphism) -> Morphism {
        debug_assert_eq!(g.target.dim(), self.source.dim());
        Morphism::new_unchecked(g.source.clone(), self.target.clone(), self.matrix.mul(&g.matrix))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Morphism {
        other.compose_after(self)
    }

    pub fn add(&self, o: &Morphism) -> Morphism {
        Morphism::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.add(&o.matrix))
    }

    pub fn scale(&self, c: &Scalar) -> Morphism {
        Morphism::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_mono(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_epi(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_iso(&self) -> bool {
        self.source.dim() == self.target.dim() && self.is_mono()
    }

    /// Kernel with its inclusion.
    pub fn kernel(&self) -> (Module, Morphism) {
        let f = self.source.field();
        let space = if self.target.dim() == 0 {
            RowSpace::span(f, self.source.dim(), &super::identity_vectors(f, self.source.dim()))
        } else {
            RowSpace::span(f, self.source.dim(), &self.matrix.kernel_basis())
        };
        self.source.submodule(&space)
    }

    pub fn image_space(&self) -> RowSpace {
        RowSpace::column_space(&self.matrix)
    }

    /// Image as a submodule of the target, with its inclusion.
    pub fn image(&self) -> (Module, Morphism) {
        self.target.submodule(&self.image_space())
    }

    /// Cokernel with its projection.
    pub fn cokernel(&self) -> (Module, Morphism) {
        self.target.quotient(&self.image_space())
    }

    /// The dual map `D N -> D M`.
    pub fn dual(&self) -> Morphism {
        Morphism::new_unchecked(self.target.dual(), self.source.dual(), self.matrix.transpose())
    }

    /// Some `h` with `self ∘ h = g` (`g: X -> target`), found by a linear
    /// solve over `Hom(X, source)`.
    pub fn lift(&self, g: &Morphism) -> Result<Option<Morphism>> {
        let hom = super::hom_space(g.source(), &self.source)?;
        let cols: Vec<Vec<Scalar>> = hom.basis().iter().map(|h| self.matrix.mul(h).to_vec()).collect();
        if cols.is_empty() {
            return Ok(if g.is_zero() { Some(Morphism::zero(g.source(), &self.source)) } else { None });
        }
        let a = Matrix::from_columns(self.source.field(), g.matrix().rows() * g.matrix().cols(), &cols);
        Ok(a.solve(&g.matrix().to_vec())?.map(|c| {
            let m = hom.combine(&c);
            Morphism::new_unchecked(g.source().clone(), self.source.clone(), m)
        }))
    }

    /// Some `h` with `h ∘ self = g` (`g: source -> Y`).
    pub fn extend(&self, g: &Morphism) -> Result<Option<Morphism>> {
        let hom = super::hom_space(&self.target, g.target())?;
        let cols: Vec<Vec<Scalar>> = hom.basis().iter().map(|h| h.mul(&self.matrix).to_vec()).collect();
        if cols.is_empty() {
            return Ok(if g.is_zero() { Some(Morphism::zero(&self.target, g.target())) } else { None });
        }
        let a = Matrix::from_columns(self.source.field(), g.matrix().rows() * g.matrix().cols(), &cols);
        Ok(a.solve(&g.matrix().to_vec())?.map(|c| {
            let m = hom.combine(&c);
            Morphism::new_unchecked(self.target.clone(), g.target().clone(), m)
        }))
    }

    /// Whether `self` is a split epimorphism (has a module section).
    pub fn is_split_epi(&self) -> Result<bool> {
        Ok(self.is_epi() && self.lift(&Morphism::identity(&self.target))?.is_some())
    }

    /// Whether `self` is a split monomorphism (has a module retraction).
    pub fn is_split_mono(&self) -> Result<bool> {
        Ok(self.is_mono() && self.extend(&Morphism::identity(&self.source))?.is_some())
    }
}

/// `0 -> X --f--> Y --g--> Z -> 0`.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub left: Morphism,
    pub right: Morphism,
}

impl ShortExactSequence {
    /// Checks exactness before wrapping.
    pub fn new(left: Morphism, right: Morphism) -> Result<ShortExactSequence> {
        let s = ShortExactSequence { left, right };
        s.verify()?;
        Ok(s)
    }

    pub fn x(&self) -> &Module {
        self.left.source()
    }

    pub fn y(&self) -> &Module {
        self.left.target()
    }

    pub fn z(&self) -> &Module {
        self.right.target()
    }

    pub fn verify(&self) -> Result<()> {
        let (f, g) = (&self.left, &self.right);
        if f.target().dim() != g.source().dim() {
            return Err(Error::Verification("maps are not composable".into()));
        }
        if !f.is_mono() {
            return Err(Error::Verification("left map is not injective".into()));
        }
        if !g.is_epi() {
            return Err(Error::Verification("right map is not surjective".into()));
        }
        if !g.matrix().mul(f.matrix()).is_zero() {
            return Err(Error::Verification("composite is nonzero".into()));
        }
        if f.source().dim() + g.target().dim() != f.target().dim() {
            return Err(Error::Verification("dimensions do not add up".into()));
        }
        if !f.intertwines() || !g.intertwines() {
            return Err(Error::Verification("maps are not module maps".into()));
        }
        Ok(())
    }

    /// Split iff the right map has a section.
    pub fn is_split(&self) -> Result<bool> {
        self.right.is_split_epi()
    }
}
