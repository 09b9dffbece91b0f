//! Test-side oracles, written against the raw structure constants and
//! action matrices only. They share no code with the engine beyond scalar
//! arithmetic: own elimination, own free resolutions, own Hom systems.

#![allow(dead_code)]

use stabext_core::algebra::AlgebraPresentation;
use stabext_core::xfield::{FieldSpec, Scalar};
use stabext_core::Module;

/// Row-reduces in place; returns the pivot columns. Zero rows are dropped.
pub fn rref(rows: &mut Vec<Vec<Scalar>>, ncols: usize) -> Vec<usize> {
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, i);
        let inv = rows[r][c].inv().expect("nonzero scalars are invertible");
        rows[r] = rows[r].iter().map(|x| &inv * x).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let k = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&k * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Scalar>], ncols: usize) -> usize {
    rref(&mut rows.to_vec(), ncols).len()
}

/// Basis of `{v : row . v = 0 for every row}`.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize, f: FieldSpec) -> Vec<Vec<Scalar>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (k, &p) in pivots.iter().enumerate() {
            v[p] = -&m[k][free];
        }
        out.push(v);
    }
    out
}

/// Raw data of a left module: `act[l]` is the matrix of basis element `l`.
struct Rep {
    dim: usize,
    act: Vec<Vec<Vec<Scalar>>>,
}

impl Rep {
    fn of(m: &Module) -> Rep {
        let act = m
            .actions()
            .iter()
            .map(|a| (0..a.rows()).map(|r| a.row(r).to_vec()).collect())
            .collect();
        Rep { dim: m.dim(), act }
    }

    /// `b_l . v`
    fn apply(&self, l: usize, v: &[Scalar], f: FieldSpec) -> Vec<Scalar> {
        self.act[l].iter().map(|row| dot(row, v, f)).collect()
    }
}

fn dot(a: &[Scalar], b: &[Scalar], f: FieldSpec) -> Scalar {
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| &acc + &(x * y))
}

fn add_into(acc: &mut [Scalar], v: &[Scalar]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = &*a + x;
    }
}

fn scaled(c: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| c * x).collect()
}

/// The algebra, seen through its multiplication table.
struct Alg<'a> {
    p: &'a AlgebraPresentation,
}

impl Alg<'_> {
    fn f(&self) -> FieldSpec {
        self.p.field
    }

    fn d(&self) -> usize {
        self.p.dim
    }

    /// `b_l * x` for `x` in `A`.
    fn left(&self, l: usize, x: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.f().zero(); self.d()];
        for (j, c) in x.iter().enumerate() {
            if !c.is_zero() {
                add_into(&mut out, &scaled(c, &self.p.table[l][j]));
            }
        }
        out
    }

    /// `b_l * v` for `v` in the free module `A^r` (blocks of length `d`).
    fn left_free(&self, l: usize, v: &[Scalar]) -> Vec<Scalar> {
        v.chunks(self.d()).flat_map(|x| self.left(l, x)).collect()
    }

    /// `a . n` for `a` in `A` acting on a module.
    fn act(&self, rep: &Rep, a: &[Scalar], n: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.f().zero(); rep.dim];
        for (l, c) in a.iter().enumerate() {
            if !c.is_zero() {
                add_into(&mut out, &scaled(c, &rep.apply(l, n, self.f())));
            }
        }
        out
    }

    /// `sum_t v_t . n_t` for `v` in `A^r` and `n` in `N^r`: the value at `v`
    /// of the homomorphism `A^r -> N` sending `e_t` to `n_t`.
    fn eval(&self, rep: &Rep, v: &[Scalar], n: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.f().zero(); rep.dim];
        for (vt, nt) in v.chunks(self.d()).zip(n.chunks(rep.dim)) {
            add_into(&mut out, &self.act(rep, vt, nt));
        }
        out
    }

    /// Elements of `space` (a basis of a submodule of a module whose action
    /// is `apply`) whose classes span it modulo its radical.
    fn top_generators<F>(&self, space: &[Vec<Scalar>], ambient: usize, apply: F) -> Vec<Vec<Scalar>>
    where
        F: Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>,
    {
        let mut span: Vec<Vec<Scalar>> = Vec::new();
        for r in &self.p.radical {
            for v in space {
                span.push(apply(r, v));
            }
        }
        let mut rk = rank(&span, ambient);
        let mut gens = Vec::new();
        for v in space {
            span.push(v.clone());
            let r2 = rank(&span, ambient);
            if r2 > rk {
                gens.push(v.clone());
                rk = r2;
            } else {
                span.pop();
            }
        }
        gens
    }

    /// Kernel of `A^g -> target`, `e_j -> gens[j]`, where `apply(a, x)`
    /// is the action on the target.
    fn relations<F>(&self, gens: &[Vec<Scalar>], target_dim: usize, apply: F) -> Vec<Vec<Scalar>>
    where
        F: Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>,
    {
        let d = self.d();
        let f = self.f();
        let ncols = gens.len() * d;
        // Columns are the images of b_l e_j; build the matrix by rows.
        let mut cols = Vec::with_capacity(ncols);
        for g in gens {
            for l in 0..d {
                cols.push(apply(&self.p.basis_vector(l), g));
            }
        }
        let rows: Vec<Vec<Scalar>> = (0..target_dim).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        nullspace(&rows, ncols, f)
    }
}

/// Classical `dim Ext^i(M, N)` for `i = 1..=max`, from a free resolution
/// built here and the cohomology of `Hom(F_*, N)` at each degree.
pub fn ext_dims(m: &Module, n: &Module, max: usize) -> Vec<usize> {
    let alg = Alg { p: m.algebra().presentation() };
    let f = alg.f();
    let d = alg.d();
    let (rm, rn) = (Rep::of(m), Rep::of(n));

    // F_0 = A^g -> M.
    let basis: Vec<Vec<Scalar>> = (0..m.dim()).map(|i| unit(f, m.dim(), i)).collect();
    let gens = alg.top_generators(&basis, m.dim(), |a, x| alg.act(&rm, a, x));
    let mut kernel = alg.relations(&gens, m.dim(), |a, x| alg.act(&rm, a, x));
    let mut rank_prev = gens.len();

    let mut out = Vec::with_capacity(max);
    for _ in 1..=max {
        // K = kernel inside F_{i-1} = A^{rank_prev}; present it by A^g.
        let ambient = rank_prev * d;
        let act_free = |a: &[Scalar], v: &[Scalar]| {
            let mut acc = vec![f.zero(); ambient];
            for (l, c) in a.iter().enumerate() {
                if !c.is_zero() {
                    add_into(&mut acc, &scaled(c, &alg.left_free(l, v)));
                }
            }
            acc
        };
        let gens = alg.top_generators(&kernel, ambient, act_free);
        let next = alg.relations(&gens, ambient, act_free);
        let g = gens.len();
        let unknowns = g * rn.dim;

        // Hom(K, N) = homs A^g -> N vanishing on the relations.
        let mut constraints = Vec::new();
        for w in &next {
            for coord in 0..rn.dim {
                let row: Vec<Scalar> = (0..unknowns)
                    .map(|u| {
                        let e = unit(f, unknowns, u);
                        alg.eval(&rn, w, &e)[coord].clone()
                    })
                    .collect();
                constraints.push(row);
            }
        }
        let hom = unknowns - rank(&constraints, unknowns);

        // Restrictions of homs A^{rank_prev} -> N, read on the generators.
        let prev_unknowns = rank_prev * rn.dim;
        let image: Vec<Vec<Scalar>> = (0..prev_unknowns)
            .map(|u| {
                let psi = unit(f, prev_unknowns, u);
                gens.iter().flat_map(|gv| alg.eval(&rn, gv, &psi)).collect()
            })
            .collect();
        out.push(hom - rank(&image, unknowns));

        kernel = next;
        rank_prev = g;
    }
    out
}

fn unit(f: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![f.zero(); n];
    v[i] = f.one();
    v
}

/// Basis of `Hom_A(X, Y)` as row-major `dim Y x dim X` matrices.
pub fn hom_basis(x: &Module, y: &Module) -> Vec<Vec<Scalar>> {
    let f = x.field();
    let (rx, ry) = (Rep::of(x), Rep::of(y));
    let (p, q) = (ry.dim, rx.dim);
    let n = p * q;
    let mut rows = Vec::new();
    for l in 0..rx.act.len() {
        // (rho_Y(b) H - H rho_X(b))[i][j] = 0
        for i in 0..p {
            for j in 0..q {
                let mut row = vec![f.zero(); n];
                for k in 0..p {
                    let c = &ry.act[l][i][k];
                    if !c.is_zero() {
                        row[k * q + j] = &row[k * q + j] + c;
                    }
                }
                for k in 0..q {
                    let c = &rx.act[l][k][j];
                    if !c.is_zero() {
                        row[i * q + k] = &row[i * q + k] - c;
                    }
                }
                rows.push(row);
            }
        }
    }
    nullspace(&rows, n, f)
}

/// `dim Hom(M, N)` modulo maps factoring through a free module.
pub fn stable_hom_dim(m: &Module, n: &Module) -> usize {
    let alg = Alg { p: m.algebra().presentation() };
    let f = alg.f();
    let d = alg.d();
    let rn = Rep::of(n);
    let hom = hom_basis(m, n);
    // Free cover A^g -> N; maps M -> A^g found as Hom into the regular
    // module, one copy at a time.
    let basis: Vec<Vec<Scalar>> = (0..n.dim()).map(|i| unit(f, n.dim(), i)).collect();
    let gens = alg.top_generators(&basis, n.dim(), |a, v| alg.act(&rn, a, v));
    let regular = m.algebra().regular_module();
    let into_a = hom_basis(m, &regular);
    let mut through = Vec::new();
    for g in &gens {
        for h in &into_a {
            // pi_j o h: m_c -> h(m_c) . g
            let mut comp = vec![f.zero(); n.dim() * m.dim()];
            for c in 0..m.dim() {
                let a: Vec<Scalar> = (0..d).map(|r| h[r * m.dim() + c].clone()).collect();
                let img = alg.act(&rn, &a, g);
                for (r, v) in img.into_iter().enumerate() {
                    comp[r * m.dim() + c] = v;
                }
            }
            through.push(comp);
        }
    }
    hom.len() - rank(&through, n.dim() * m.dim())
}
