//! Searching for a symmetrizing form `λ` with `λ(ab) = λ(ba)` and
//! nondegenerate Gram matrix.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::AlgebraPresentation;
use crate::xfield::{FieldSpec, Matrix, Scalar};

/// Result of [`find_symmetrizing_form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormSearch {
    Found(Vec<Scalar>),
    /// No symmetric functional has a nondegenerate Gram matrix; proven by
    /// exhausting a set of evaluation points large enough to detect a
    /// nonzero determinant polynomial.
    CertifiedAbsent { trace_space_dim: usize },
    NotFoundWithinBudget { trace_space_dim: usize, trials: usize },
}

/// Serializable summary of a [`FormSearch`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum FormStatus {
    Found { lambda: Vec<String> },
    CertifiedAbsent,
    NotFoundWithinBudget { trials: usize },
}

impl FormSearch {
    pub fn form(&self) -> Option<&[Scalar]> {
        match self {
            FormSearch::Found(l) => Some(l),
            _ => None,
        }
    }

    pub fn status(&self) -> FormStatus {
        match self {
            FormSearch::Found(l) => FormStatus::Found { lambda: l.iter().map(|x| x.to_string()).collect() },
            FormSearch::CertifiedAbsent { .. } => FormStatus::CertifiedAbsent,
            FormSearch::NotFoundWithinBudget { trials, .. } => FormStatus::NotFoundWithinBudget { trials: *trials },
        }
    }
}

/// Gram matrix `G[k][l] = λ(b_k b_l)`.
pub fn gram_matrix(p: &AlgebraPresentation, lambda: &[Scalar]) -> Matrix {
    let n = p.dim;
    let mut g = Matrix::zeros(p.field, n, n);
    for k in 0..n {
        for l in 0..n {
            g[(k, l)] = dot(lambda, &p.table[k][l]);
        }
    }
    g
}

/// Whether `lambda` is symmetric on all basis pairs and nondegenerate.
pub fn is_symmetrizing_form(p: &AlgebraPresentation, lambda: &[Scalar]) -> bool {
    if lambda.len() != p.dim {
        return false;
    }
    let g = gram_matrix(p, lambda);
    g == g.transpose() && g.rank() == p.dim
}

pub(super) fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let f = a.first().map(Scalar::field).unwrap_or(FieldSpec::Rational);
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| if x.is_zero() || y.is_zero() { acc } else { &acc + &(x * y) })
}

/// Largest number of evaluation points enumerated for a certificate.
const CERTIFY_LIMIT: u64 = 1 << 16;

/// Finds a symmetrizing form.
///
/// The symmetric functionals form the kernel of the commutator constraints.
/// Inside it the search tries each basis functional, then combinations with
/// coefficients in a small box, then `budget` seeded random combinations.
/// The Gram determinant is a polynomial of degree at most `dim` in the
/// coordinates of the kernel, so if it vanishes on a grid `S^s` with
/// `|S| > dim` (or on all of `F_p^s`) no nondegenerate form exists.
pub fn find_symmetrizing_form(p: &AlgebraPresentation, budget: usize, seed: u64) -> FormSearch {
    let n = p.dim;
    let f = p.field;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let c: Vec<Scalar> = p.table[i][j].iter().zip(&p.table[j][i]).map(|(a, b)| a - b).collect();
            if c.iter().any(|x| !x.is_zero()) {
                rows.push(c);
            }
        }
    }
    let space = if rows.is_empty() {
        (0..n).map(|i| p.basis_vector(i)).collect()
    } else {
        Matrix::from_row_vecs(f, n, &rows).kernel_basis()
    };
    let s = space.len();
    if s == 0 {
        return FormSearch::CertifiedAbsent { trace_space_dim: 0 };
    }
    let combine = |coeffs: &[Scalar]| -> Vec<Scalar> {
        let mut v = vec![f.zero(); n];
        for (c, b) in coeffs.iter().zip(&space) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                *x = &*x + &(c * y);
            }
        }
        v
    };
    let good = |v: &[Scalar]| gram_matrix(p, v).rank() == n;

    for b in &space {
        if good(b) {
            return FormSearch::Found(b.clone());
        }
    }

    // Grid of evaluation points: all of F_p when p <= dim, else {0..=dim}.
    let side: u64 = match f.size() {
        Some(q) if q <= n as u64 => q,
        _ => n as u64 + 1,
    };
    let grid_size = (side as f64).powi(s as i32);
    if grid_size <= CERTIFY_LIMIT as f64 {
        let total = side.pow(s as u32);
        for idx in 0..total {
            let coeffs = grid_point(f, idx, side, s);
            let v = combine(&coeffs);
            if good(&v) {
                return FormSearch::Found(v);
            }
        }
        return FormSearch::CertifiedAbsent { trace_space_dim: s };
    }

    // Small box sweep, then random combinations.
    let mut trials = 0;
    let box_side = 3u64.min(side);
    let box_total = box_side.saturating_pow(s.min(10) as u32).min(budget as u64);
    for idx in 0..box_total {
        let coeffs = grid_point(f, idx, box_side, s);
        trials += 1;
        let v = combine(&coeffs);
        if good(&v) {
            return FormSearch::Found(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let coeffs: Vec<Scalar> = (0..s).map(|_| f.random(&mut rng, 16)).collect();
        trials += 1;
        let v = combine(&coeffs);
        if good(&v) {
            return FormSearch::Found(v);
        }
    }
    FormSearch::NotFoundWithinBudget { trace_space_dim: s, trials }
}

fn grid_point(f: FieldSpec, mut idx: u64, side: u64, s: usize) -> Vec<Scalar> {
    (0..s)
        .map(|_| {
            let d = idx % side;
            idx /= side;
            f.enumerate(d)
        })
        .collect()
}
