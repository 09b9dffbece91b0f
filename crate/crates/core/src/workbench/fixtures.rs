//! Built-in algebras and modules of the corpus, constructed from their
//! multiplication rules.

use std::sync::Arc;

use super::corpus::CorpusEntry;
use crate::algebra::{Algebra, AlgebraPresentation};
use crate::modcat::Module;
use crate::Result;
use crate::xfield::{FieldSpec, RowSpace, Scalar};

fn unit_vec(f: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![f.zero(); n];
    v[i] = f.one();
    v
}

fn build(pres: AlgebraPresentation) -> Arc<Algebra> {
    Algebra::new(pres).expect("built-in fixture validates")
}

/// `F_p[x]/(x^n)` with basis `1, x, ..., x^{n-1}`.
pub fn truncated_polynomial_presentation(p: u64, n: usize) -> AlgebraPresentation {
    let f = FieldSpec::prime(p).expect("prime modulus");
    let table = (0..n)
        .map(|i| (0..n).map(|j| if i + j < n { unit_vec(f, n, i + j) } else { vec![f.zero(); n] }).collect())
        .collect();
    let basis = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    AlgebraPresentation {
        name: format!("F{p}[x]/(x^{n})"),
        provenance: "hand multiplication table of a truncated polynomial ring".into(),
        field: f,
        dim: n,
        basis,
        table,
        unit: unit_vec(f, n, 0),
        idempotents: vec![unit_vec(f, n, 0)],
        radical: (1..n).map(|i| unit_vec(f, n, i)).collect(),
    }
}

pub fn truncated_polynomial(p: u64, n: usize) -> Arc<Algebra> {
    build(truncated_polynomial_presentation(p, n))
}

/// `M_i = k[x]/(x^i)` over a truncated polynomial ring `k[x]/(x^n)`.
pub fn truncated_module(a: &Arc<Algebra>, i: usize) -> Module {
    let n = a.dim();
    let f = a.field();
    let ideal: Vec<Vec<Scalar>> = (i..n).map(|k| unit_vec(f, n, k)).collect();
    let space = RowSpace::span(f, n, &ideal);
    a.regular_module().quotient(&space).0.with_name(format!("M{i}"))
}

/// Group algebra of the group `G` with multiplication table `mul` on
/// `0..order`, identity 0, over `F_p`. The radical basis is `g - 1`.
fn group_algebra(p: u64, labels: &[&str], mul: impl Fn(usize, usize) -> usize, name: &str) -> AlgebraPresentation {
    let f = FieldSpec::prime(p).expect("prime modulus");
    let n = labels.len();
    let table = (0..n).map(|i| (0..n).map(|j| unit_vec(f, n, mul(i, j))).collect()).collect();
    let radical = (1..n)
        .map(|g| {
            let mut v = unit_vec(f, n, g);
            v[0] = -&f.one();
            v
        })
        .collect();
    AlgebraPresentation {
        name: name.to_string(),
        provenance: "group multiplication table; radical is the augmentation ideal".into(),
        field: f,
        dim: n,
        basis: labels.iter().map(|s| s.to_string()).collect(),
        table,
        unit: unit_vec(f, n, 0),
        idempotents: vec![unit_vec(f, n, 0)],
        radical,
    }
}

/// `F_2[C_2]` with group basis `{1, g}`.
pub fn group_algebra_c2() -> Arc<Algebra> {
    build(group_algebra(2, &["1", "g"], |i, j| i ^ j, "F2[C2]"))
}

/// `F_2[C_2 x C_2]` with group basis `{1, g, h, gh}`.
pub fn group_algebra_c2xc2() -> Arc<Algebra> {
    build(group_algebra(2, &["1", "g", "h", "gh"], |i, j| i ^ j, "F2[C2xC2]"))
}

/// The symmetric Nakayama algebra with two simples over `F_3`: the cyclic
/// quiver `1 -a-> 2 -b-> 1` modulo `aba = bab = 0`. Basis
/// `e1, e2, a, b, ab, ba` with `a = e2 a e1`, `b = e1 b e2`.
pub fn nakayama_two_simples_presentation() -> AlgebraPresentation {
    let f = FieldSpec::prime(3).expect("prime modulus");
    let n = 6;
    let (e1, e2, a, b, ab, ba) = (0, 1, 2, 3, 4, 5);
    let mut table = vec![vec![vec![f.zero(); n]; n]; n];
    let mut set = |i: usize, j: usize, k: usize| table[i][j] = unit_vec(f, n, k);
    set(e1, e1, e1);
    set(e2, e2, e2);
    set(e2, a, a);
    set(a, e1, a);
    set(e1, b, b);
    set(b, e2, b);
    set(a, b, ab);
    set(b, a, ba);
    set(e2, ab, ab);
    set(ab, e2, ab);
    set(e1, ba, ba);
    set(ba, e1, ba);
    let mut unit = unit_vec(f, n, e1);
    unit[e2] = f.one();
    AlgebraPresentation {
        name: "Nakayama(2,3)/F3".into(),
        provenance: "path algebra of the 2-cycle modulo paths of length 3".into(),
        field: f,
        dim: n,
        basis: ["e1", "e2", "a", "b", "ab", "ba"].iter().map(|s| s.to_string()).collect(),
        table,
        unit,
        idempotents: vec![unit_vec(f, n, e1), unit_vec(f, n, e2)],
        radical: [a, b, ab, ba].iter().map(|&k| unit_vec(f, n, k)).collect(),
    }
}

pub fn nakayama_two_simples() -> Arc<Algebra> {
    build(nakayama_two_simples_presentation())
}

/// Path algebra of `1 -a-> 2` over `F_2` (not symmetric).
pub fn path_algebra_a2_presentation() -> AlgebraPresentation {
    let f = FieldSpec::prime(2).expect("prime modulus");
    let n = 3;
    let (e1, e2, a) = (0, 1, 2);
    let mut table = vec![vec![vec![f.zero(); n]; n]; n];
    table[e1][e1] = unit_vec(f, n, e1);
    table[e2][e2] = unit_vec(f, n, e2);
    table[e2][a] = unit_vec(f, n, a);
    table[a][e1] = unit_vec(f, n, a);
    let mut unit = unit_vec(f, n, e1);
    unit[e2] = f.one();
    AlgebraPresentation {
        name: "A2/F2".into(),
        provenance: "path algebra of a single arrow".into(),
        field: f,
        dim: n,
        basis: ["e1", "e2", "a"].iter().map(|s| s.to_string()).collect(),
        table,
        unit,
        idempotents: vec![unit_vec(f, n, e1), unit_vec(f, n, e2)],
        radical: vec![unit_vec(f, n, a)],
    }
}

/// Monomials of the Liu–Schulz algebra in basis order.
pub const LIU_SCHULZ_MONOMIALS: [&[usize]; 8] = [&[], &[0], &[1], &[2], &[0, 1], &[1, 2], &[0, 2], &[0, 1, 2]];

/// The 8-dimensional local algebra over `Q` generated by `x0, x1, x2` with
/// `x_i^2 = 0` and `x_{i+1} x_i + q x_i x_{i+1} = 0` (indices mod 3).
/// Basis `1, x0, x1, x2, x0x1, x1x2, x0x2, x0x1x2`.
pub fn liu_schulz_presentation(q: i64) -> AlgebraPresentation {
    let f = FieldSpec::Rational;
    let qs = f.from_i64(q);
    let qinv = qs.inv().expect("q is nonzero");
    // Commuting x_j past x_i for i < j: x_j x_i = -c(i, j) x_i x_j.
    let c = |i: usize, j: usize| -> Scalar {
        match (i, j) {
            (0, 1) | (1, 2) => qs.clone(),
            (0, 2) => qinv.clone(),
            _ => unreachable!(),
        }
    };
    let n = 8;
    let index = |w: &[usize]| LIU_SCHULZ_MONOMIALS.iter().position(|m| *m == w).expect("sorted monomial");
    let mut table = vec![vec![vec![f.zero(); n]; n]; n];
    for (i, a) in LIU_SCHULZ_MONOMIALS.iter().enumerate() {
        for (j, b) in LIU_SCHULZ_MONOMIALS.iter().enumerate() {
            let mut w: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
            let mut sorted = w.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() < w.len() {
                continue;
            }
            let mut coeff = f.one();
            for pass in 0..w.len() {
                for k in 0..w.len().saturating_sub(1 + pass) {
                    if w[k] > w[k + 1] {
                        coeff = &coeff * &-&c(w[k + 1], w[k]);
                        w.swap(k, k + 1);
                    }
                }
            }
            table[i][j] = {
                let mut v = vec![f.zero(); n];
                v[index(&w)] = coeff;
                v
            };
        }
    }
    let basis = ["1", "x0", "x1", "x2", "x0x1", "x1x2", "x0x2", "x0x1x2"].iter().map(|s| s.to_string()).collect();
    AlgebraPresentation {
        name: format!("LiuSchulz(q={q})"),
        provenance: "local symmetric algebra with three nilpotent q-commuting generators; \
                     relations x_i^2 = 0, x_{i+1}x_i + q x_i x_{i+1} = 0 (indices mod 3)"
            .into(),
        field: f,
        dim: n,
        basis,
        table,
        unit: unit_vec(f, n, 0),
        idempotents: vec![unit_vec(f, n, 0)],
        radical: (1..n).map(|k| unit_vec(f, n, k)).collect(),
    }
}

pub fn liu_schulz_algebra(q: i64) -> Arc<Algebra> {
    build(liu_schulz_presentation(q))
}

/// The cyclic left ideal `R u` as a module, `u` in coordinates.
pub fn cyclic_ideal(a: &Arc<Algebra>, u: &[Scalar]) -> Module {
    let reg = a.regular_module();
    let space = reg.generated_submodule(&[u.to_vec()]);
    reg.submodule(&space).0
}

/// `R (x0 + c1 x1 + c2 x2)` over the Liu–Schulz algebra.
pub fn liu_schulz_cyclic(a: &Arc<Algebra>, c1: i64, c2: i64) -> Module {
    let f = a.field();
    let mut u = vec![f.zero(); a.dim()];
    u[1] = f.one();
    u[2] = f.from_i64(c1);
    u[3] = f.from_i64(c2);
    cyclic_ideal(a, &u).with_name(format!("R({})", liu_schulz_generator(c1, c2)))
}

/// `x0 + c1 x1 + c2 x2` written out, e.g. `x0+x1` or `x0-2x1+x2`.
pub fn liu_schulz_generator(c1: i64, c2: i64) -> String {
    let mut s = String::from("x0");
    for (c, x) in [(c1, "x1"), (c2, "x2")] {
        match c {
            0 => {}
            1 => s.push_str(&format!("+{x}")),
            -1 => s.push_str(&format!("-{x}")),
            c => s.push_str(&format!("{c:+}{x}")),
        }
    }
    s
}

/// The distinguished module `R (x0 + x1)`, the reference candidate of
/// [`super::build_liu_schulz_fixture`].
pub fn liu_schulz_module(a: &Arc<Algebra>) -> Module {
    liu_schulz_cyclic(a, 1, 0).with_name("M")
}

/// A handful of small modules used for cross-checks: projectives, simples,
/// radicals of projectives, projectives modulo their socles, and a sum.
pub fn small_modules(a: &Arc<Algebra>) -> Vec<Module> {
    let mut out = Vec::new();
    for (i, p) in a.projective_indecomposables().into_iter().enumerate() {
        out.push(a.simple(i));
        out.push(p.radical().with_name(format!("rad P{}", i + 1)));
        let soc = p.socle_space();
        out.push(p.quotient(&soc).0.with_name(format!("P{}/soc", i + 1)));
        out.push(p);
    }
    out.push(Module::direct_sum(&[a.simple(0), a.projective(0)]).unwrap().with_name("S1+P1"));
    out
}

fn entry(name: &str, algebra: Arc<Algebra>, modules: Vec<Module>, root: Option<&str>, pair: Option<[&str; 2]>) -> CorpusEntry {
    CorpusEntry {
        name: name.to_string(),
        algebra,
        modules,
        claims: Vec::new(),
        notes: String::new(),
        stress: false,
        component_root: root.map(str::to_string),
        shift_pair: pair.map(|[a, b]| [a.to_string(), b.to_string()]),
        selection: None,
    }
}

/// `P / soc P` for a projective indecomposable.
fn modulo_socle(p: &Module) -> Module {
    p.quotient(&p.socle_space()).0
}

/// Algebras and modules of the built-in corpus, without claims or notes.
/// `corpus/` holds these plus the hand-written expected results.
pub fn corpus_entries() -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();

    let a = truncated_polynomial(2, 2);
    out.push(entry(
        "f2_x2",
        a.clone(),
        vec![truncated_module(&a, 1), a.regular_module().with_name("P")],
        Some("M1"),
        Some(["M1", "M1"]),
    ));

    let a = truncated_polynomial(3, 3);
    out.push(entry(
        "f3_x3",
        a.clone(),
        vec![truncated_module(&a, 1), truncated_module(&a, 2), a.regular_module().with_name("P")],
        Some("M1"),
        Some(["M1", "M2"]),
    ));

    let a = group_algebra_c2();
    out.push(entry("f2_c2", a.clone(), vec![a.simple(0).with_name("S"), a.projective(0).with_name("P")], Some("S"), Some(["S", "S"])));

    let a = group_algebra_c2xc2();
    let p = a.projective(0);
    let mut e = entry(
        "f2_c2xc2",
        a.clone(),
        vec![
            a.simple(0).with_name("S"),
            p.radical().with_name("radP"),
            modulo_socle(&p).with_name("P_mod_soc"),
            p.with_name("P"),
        ],
        None,
        None,
    );
    e.stress = true;
    out.push(e);

    let a = nakayama_two_simples();
    let (p1, p2) = (a.projective(0), a.projective(1));
    out.push(entry(
        "nakayama23",
        a.clone(),
        vec![
            a.simple(0).with_name("S1"),
            a.simple(1).with_name("S2"),
            modulo_socle(&p1).with_name("U1"),
            modulo_socle(&p2).with_name("U2"),
            p1.with_name("P1"),
            p2.with_name("P2"),
        ],
        Some("S1"),
        Some(["S1", "U2"]),
    ));

    out.push(super::build_liu_schulz_fixture(2, super::LIU_SCHULZ_SEARCH_BUDGET)?);
    Ok(out)
}
