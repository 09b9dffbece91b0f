//! Hom spaces and stable Hom spaces.
//!
//! `Hom(M, N)` is computed from the projective presentation of `M`: a map is
//! determined by the images `n_j ∈ e_{i_j} N` of the top generators, subject
//! to vanishing on the kernel of the cover. The direct route (solving the
//! intertwining equations for a generating set) is kept as an oracle.
//!
//! The maps factoring through a projective are the image of the trace map
//! `Tr(g) = Σ_k ρ_N(b_k) g ρ_M(b_k^*)` on linear maps `g` (relative
//! projectivity for symmetric algebras). By the Casimir identity
//! `Σ b_k a ⊗ b_k^* = Σ b_k ⊗ a b_k^*` it suffices to trace rank-one maps
//! `n ⊗ φ` with `n` a top generator of `N` and `φ` a coordinate functional.
//! The composition route (through the projective cover of `N`) is kept as a
//! cross-check: any map into a projective lifts along the cover epi.

use super::{Module, Morphism};
use crate::xfield::{Matrix, RowSpace, Scalar};
use crate::Result;

/// A basis of `Hom(M, N)` in reduced echelon form of the flattened
/// (row-major) matrices.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Module,
    target: Module,
    space: RowSpace,
    basis: Vec<Matrix>,
}

impl HomSpace {
    fn from_vectors(source: &Module, target: &Module, vectors: &[Vec<Scalar>]) -> HomSpace {
        let f = source.field();
        let n = source.dim() * target.dim();
        let space = RowSpace::span(f, n, vectors);
        let basis = space.basis().into_iter().map(|v| Matrix::from_rows(f, target.dim(), source.dim(), v)).collect();
        HomSpace { source: source.clone(), target: target.clone(), space, basis }
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn morphisms(&self) -> Vec<Morphism> {
        self.basis.iter().map(|m| Morphism::new_unchecked(self.source.clone(), self.target.clone(), m.clone())).collect()
    }

    pub fn morphism(&self, i: usize) -> Morphism {
        Morphism::new_unchecked(self.source.clone(), self.target.clone(), self.basis[i].clone())
    }

    /// The flattened span.
    pub fn space(&self) -> &RowSpace {
        &self.space
    }

    /// `Σ c_i basis_i`.
    pub fn combine(&self, c: &[Scalar]) -> Matrix {
        let f = self.source.field();
        let mut m = Matrix::zeros(f, self.target.dim(), self.source.dim());
        for (x, b) in c.iter().zip(&self.basis) {
            m.add_scaled(x, b);
        }
        m
    }

    /// Coordinates of a map in the basis, if it lies in the space.
    pub fn coords(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        self.space.coords(&m.to_vec())
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.space.contains(&m.to_vec())
    }
}

/// `Hom(M, N)` via the projective presentation of `M`.
pub fn hom_space(m: &Module, n: &Module) -> Result<HomSpace> {
    m.check_same_algebra(n)?;
    let f = m.field();
    if m.dim() == 0 || n.dim() == 0 {
        return Ok(HomSpace::from_vectors(m, n, &[]));
    }
    let a = m.algebra();
    let pres = m.presentation();
    // B_i: a basis of e_i N, as the columns of a matrix.
    let e_bases: Vec<Matrix> = a
        .idempotents()
        .iter()
        .map(|e| RowSpace::column_space(&n.act(e)).basis_matrix())
        .collect();
    // W[i][c] = ρ_N(x_c) B_i for the basis x_c of A e_i.
    let w: Vec<Vec<Matrix>> = (0..a.num_simples())
        .map(|i| a.projective_space(i).basis().iter().map(|x| n.act(x).mul(&e_bases[i])).collect())
        .collect();
    let mut var_offset = Vec::with_capacity(pres.generators.len());
    let mut nvars = 0;
    for (i, _) in &pres.generators {
        var_offset.push(nvars);
        nvars += e_bases[*i].cols();
    }
    if nvars == 0 {
        return Ok(HomSpace::from_vectors(m, n, &[]));
    }
    // Φ_t: P -> N as a dim N x dim P matrix, linear in t. Column (j, c) is
    // W[i_j][c] t_j. Constraints: Φ_t κ = 0 for a basis κ of ker(epi).
    let kernel = pres.kernel.basis();
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(kernel.len() * n.dim());
    for kappa in &kernel {
        let mut block = Matrix::zeros(f, n.dim(), nvars);
        for (j, (i, _)) in pres.generators.iter().enumerate() {
            let off = pres.offsets[j];
            for (c, wc) in w[*i].iter().enumerate() {
                let k = &kappa[off + c];
                if k.is_zero() {
                    continue;
                }
                for r in 0..n.dim() {
                    for s in 0..wc.cols() {
                        let x = &wc[(r, s)];
                        if !x.is_zero() {
                            let col = var_offset[j] + s;
                            block[(r, col)] = &block[(r, col)] + &(k * x);
                        }
                    }
                }
            }
        }
        for r in 0..n.dim() {
            rows.push(block.row(r).to_vec());
        }
    }
    let solutions = if rows.is_empty() {
        super::identity_vectors(f, nvars)
    } else {
        Matrix::from_row_vecs(f, nvars, &rows).kernel_basis()
    };
    let vectors: Vec<Vec<Scalar>> = solutions
        .iter()
        .map(|t| {
            let mut phi = Matrix::zeros(f, n.dim(), pres.cover.dim());
            for (j, (i, _)) in pres.generators.iter().enumerate() {
                let tj = &t[var_offset[j]..var_offset[j] + e_bases[*i].cols()];
                for (c, wc) in w[*i].iter().enumerate() {
                    let col = wc.mul_vec(tj);
                    for (r, x) in col.into_iter().enumerate() {
                        phi[(r, pres.offsets[j] + c)] = x;
                    }
                }
            }
            phi.mul(&pres.section).to_vec()
        })
        .collect();
    Ok(HomSpace::from_vectors(m, n, &vectors))
}

/// `Hom(M, N)` by solving `X ρ_M(g) = ρ_N(g) X` for a generating set.
pub fn hom_space_naive(m: &Module, n: &Module) -> Result<HomSpace> {
    m.check_same_algebra(n)?;
    let f = m.field();
    let (dm, dn) = (m.dim(), n.dim());
    if dm == 0 || dn == 0 {
        return Ok(HomSpace::from_vectors(m, n, &[]));
    }
    let nv = dm * dn;
    let mut rows = Vec::new();
    for g in m.algebra().generators() {
        let (a, b) = (m.act(g), n.act(g));
        for i in 0..dn {
            for j in 0..dm {
                let mut r = vec![f.zero(); nv];
                for k in 0..dm {
                    r[i * dm + k] = &r[i * dm + k] + &a[(k, j)];
                }
                for k in 0..dn {
                    r[k * dm + j] = &r[k * dm + j] - &b[(i, k)];
                }
                rows.push(r);
            }
        }
    }
    let sol = Matrix::from_row_vecs(f, nv, &rows).kernel_basis();
    Ok(HomSpace::from_vectors(m, n, &sol))
}

/// `Hom(M, N)` with the maps factoring through projectives split off.
#[derive(Clone, Debug)]
pub struct StableHomSpace {
    pub hom: HomSpace,
    /// Flattened span of the maps factoring through a projective.
    pub projective: RowSpace,
    /// Representatives of a basis of the stable quotient.
    pub stable_basis: Vec<Matrix>,
}

impl StableHomSpace {
    fn assemble(hom: HomSpace, projective: RowSpace) -> StableHomSpace {
        let f = hom.source.field();
        let (rows, cols) = (hom.target.dim(), hom.source.dim());
        let mut acc = projective.clone();
        let mut stable_basis = Vec::new();
        for b in &hom.basis {
            let v = b.to_vec();
            if !acc.contains(&v) {
                acc = acc.sum(&RowSpace::span(f, rows * cols, std::slice::from_ref(&v)));
                stable_basis.push(b.clone());
            }
        }
        StableHomSpace { hom, projective, stable_basis }
    }

    pub fn dim(&self) -> usize {
        self.hom.dim()
    }

    pub fn stable_dim(&self) -> usize {
        self.stable_basis.len()
    }

    pub fn projective_dim(&self) -> usize {
        self.projective.dim()
    }

    pub fn projective_basis(&self) -> Vec<Matrix> {
        let (r, c) = (self.hom.target.dim(), self.hom.source.dim());
        let f = self.hom.source.field();
        self.projective.basis().into_iter().map(|v| Matrix::from_rows(f, r, c, v)).collect()
    }

    /// Whether `g` factors through a projective.
    pub fn is_projectively_trivial(&self, g: &Matrix) -> bool {
        self.projective.contains(&g.to_vec())
    }
}

/// Flattened traces spanning the maps `M -> N` that factor through a
/// projective.
pub(crate) fn projective_maps(m: &Module, n: &Module) -> Result<RowSpace> {
    let f = m.field();
    let (dm, dn) = (m.dim(), n.dim());
    if dm == 0 || dn == 0 {
        return Ok(RowSpace::zero(f, dm * dn));
    }
    let a = m.algebra();
    let dual = m.dual_actions()?;
    let gens = &n.presentation().generators;
    // u[j][k] = ρ_N(b_k) n_j
    let u: Vec<Vec<Vec<Scalar>>> =
        gens.iter().map(|(_, v)| (0..a.dim()).map(|k| n.action(k).mul_vec(v)).collect()).collect();
    let mut vectors = Vec::with_capacity(gens.len() * dm);
    for uj in &u {
        for c in 0..dm {
            let mut t = vec![f.zero(); dn * dm];
            for (k, uk) in uj.iter().enumerate() {
                let phi = dual[k].row(c);
                for (r, x) in uk.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (s, y) in phi.iter().enumerate() {
                        if !y.is_zero() {
                            let idx = r * dm + s;
                            t[idx] = &t[idx] + &(x * y);
                        }
                    }
                }
            }
            vectors.push(t);
        }
    }
    Ok(RowSpace::span(f, dn * dm, &vectors))
}

/// `\underline{Hom}(M, N)` via the trace map. Requires a symmetric algebra.
pub fn stable_hom(m: &Module, n: &Module) -> Result<StableHomSpace> {
    let hom = hom_space(m, n)?;
    let projective = projective_maps(m, n)?;
    debug_assert!(hom.space.contains_space(&projective), "traces must be module maps");
    Ok(StableHomSpace::assemble(hom, projective))
}

/// `\underline{Hom}(M, N)` by composing `Hom(M, P(N))` with the cover epi.
pub fn stable_hom_via_cover(m: &Module, n: &Module) -> Result<StableHomSpace> {
    let hom = hom_space(m, n)?;
    let f = m.field();
    let cover = n.projective_cover();
    let into_cover = hom_space(m, cover.source())?;
    let vectors: Vec<Vec<Scalar>> = into_cover.basis().iter().map(|h| cover.matrix().mul(h).to_vec()).collect();
    let projective = RowSpace::span(f, m.dim() * n.dim(), &vectors);
    Ok(StableHomSpace::assemble(hom, projective))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workbench::fixtures;

    #[test]
    fn small_hom_dimensions() {
        let a = fixtures::truncated_polynomial(3, 3);
        let s = a.simple(0);
        assert_eq!(hom_space(&s, &s).unwrap().dim(), 1);
        let reg = a.regular_module();
        for i in 1..=3 {
            let m = fixtures::truncated_module(&a, i);
            assert_eq!(hom_space(&reg, &m).unwrap().dim(), m.dim());
        }
        let m1 = fixtures::truncated_module(&a, 1);
        let m2 = fixtures::truncated_module(&a, 2);
        assert_eq!(hom_space(&m2, &m1).unwrap().dim(), 1);
        assert_eq!(hom_space_naive(&m2, &m1).unwrap().dim(), 1);
    }

    #[test]
    fn presentation_route_matches_intertwiner_solve() {
        for a in [fixtures::truncated_polynomial(3, 3), fixtures::nakayama_two_simples(), fixtures::group_algebra_c2xc2()] {
            let mods = fixtures::small_modules(&a);
            for m in &mods {
                for n in &mods {
                    let h1 = hom_space(m, n).unwrap();
                    let h2 = hom_space_naive(m, n).unwrap();
                    assert_eq!(h1.basis(), h2.basis(), "{:?} -> {:?}", m, n);
                }
            }
        }
    }

    #[test]
    fn stable_hom_examples() {
        let a = fixtures::truncated_polynomial(3, 3);
        let reg = a.regular_module();
        assert_eq!(stable_hom(&reg, &reg).unwrap().stable_dim(), 0);
        let m1 = fixtures::truncated_module(&a, 1);
        let m2 = fixtures::truncated_module(&a, 2);
        let s11 = stable_hom(&m1, &m1).unwrap();
        assert_eq!(s11.stable_dim(), 1);
        assert_eq!(s11.projective_dim(), 0);
        assert_eq!(stable_hom(&m2, &m1).unwrap().stable_dim(), 1);
    }

    #[test]
    fn trace_route_matches_cover_route() {
        for a in [fixtures::truncated_polynomial(3, 3), fixtures::nakayama_two_simples(), fixtures::group_algebra_c2xc2()] {
            let mods = fixtures::small_modules(&a);
            for m in &mods {
                for n in &mods {
                    let s1 = stable_hom(m, n).unwrap();
                    let s2 = stable_hom_via_cover(m, n).unwrap();
                    assert_eq!(s1.projective.basis(), s2.projective.basis());
                }
            }
        }
    }
}
