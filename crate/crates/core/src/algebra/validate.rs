//! Structural checks on an algebra presentation.

use serde::Serialize;

use super::AlgebraPresentation;
use crate::xfield::{Matrix, RowSpace, Scalar};

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// All checks run by [`validate_algebra`], in a fixed order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, failure: Option<String>) {
        self.checks.push(Check { name: name.to_string(), passed: failure.is_none(), detail: failure });
    }
}

pub const CHECK_SHAPE: &str = "shape";
pub const CHECK_ASSOCIATIVE: &str = "associativity";
pub const CHECK_UNIT: &str = "unit";
pub const CHECK_IDEMPOTENTS: &str = "idempotents";
pub const CHECK_RADICAL_IDEAL: &str = "radical-ideal";
pub const CHECK_RADICAL_NILPOTENT: &str = "radical-nilpotent";
pub const CHECK_BASIC: &str = "basic";

/// Checks every invariant of a presentation. Later checks are skipped
/// (reported as failed with a reason) when the table has the wrong shape.
pub fn validate_algebra(p: &AlgebraPresentation) -> ValidationReport {
    let mut report = ValidationReport::default();
    if let Err(msg) = check_shape(p) {
        report.push(CHECK_SHAPE, Some(msg));
        for name in [
            CHECK_ASSOCIATIVE,
            CHECK_UNIT,
            CHECK_IDEMPOTENTS,
            CHECK_RADICAL_IDEAL,
            CHECK_RADICAL_NILPOTENT,
            CHECK_BASIC,
        ] {
            report.push(name, Some("skipped: malformed table".into()));
        }
        return report;
    }
    report.push(CHECK_SHAPE, None);
    report.push(CHECK_ASSOCIATIVE, check_associative(p).err());
    report.push(CHECK_UNIT, check_unit(p).err());
    report.push(CHECK_IDEMPOTENTS, check_idempotents(p).err());
    report.push(CHECK_RADICAL_IDEAL, check_radical_ideal(p).err());
    report.push(CHECK_RADICAL_NILPOTENT, check_radical_nilpotent(p).err());
    report.push(CHECK_BASIC, check_basic(p).err());
    report
}

fn check_shape(p: &AlgebraPresentation) -> Result<(), String> {
    let n = p.dim;
    if p.basis.len() != n {
        return Err(format!("{} basis labels for dimension {n}", p.basis.len()));
    }
    if p.table.len() != n {
        return Err(format!("table has {} rows, expected {n}", p.table.len()));
    }
    for (i, row) in p.table.iter().enumerate() {
        if row.len() != n {
            return Err(format!("table[{i}] has {} entries, expected {n}", row.len()));
        }
        for (j, v) in row.iter().enumerate() {
            if v.len() != n {
                return Err(format!("table[{i}][{j}] has length {}, expected {n}", v.len()));
            }
        }
    }
    let vectors = std::iter::once(("unit".to_string(), &p.unit))
        .chain(p.idempotents.iter().enumerate().map(|(i, v)| (format!("idempotents[{i}]"), v)))
        .chain(p.radical.iter().enumerate().map(|(i, v)| (format!("radical[{i}]"), v)));
    for (name, v) in vectors {
        if v.len() != n {
            return Err(format!("{name} has length {}, expected {n}", v.len()));
        }
    }
    let all = p
        .table
        .iter()
        .flatten()
        .flatten()
        .chain(&p.unit)
        .chain(p.idempotents.iter().flatten())
        .chain(p.radical.iter().flatten());
    for s in all {
        if s.field() != p.field {
            return Err(format!("scalar {s} does not lie in {}", p.field));
        }
    }
    if p.idempotents.is_empty() && n > 0 {
        return Err("no idempotents given".into());
    }
    Ok(())
}

fn check_associative(p: &AlgebraPresentation) -> Result<(), String> {
    let n = p.dim;
    for i in 0..n {
        for j in 0..n {
            let ij = &p.table[i][j];
            for k in 0..n {
                let left = p.mul(ij, &p.basis_vector(k));
                let right = p.mul(&p.basis_vector(i), &p.table[j][k]);
                if left != right {
                    return Err(format!(
                        "({0}*{1})*{2} != {0}*({1}*{2}) at basis triple ({i}, {j}, {k})",
                        p.basis[i], p.basis[j], p.basis[k]
                    ));
                }
            }
        }
    }
    Ok(())
}

fn check_unit(p: &AlgebraPresentation) -> Result<(), String> {
    for i in 0..p.dim {
        let b = p.basis_vector(i);
        if p.mul(&p.unit, &b) != b {
            return Err(format!("unit is not a left identity on basis element {i} ({})", p.basis[i]));
        }
        if p.mul(&b, &p.unit) != b {
            return Err(format!("unit is not a right identity on basis element {i} ({})", p.basis[i]));
        }
    }
    Ok(())
}

fn check_idempotents(p: &AlgebraPresentation) -> Result<(), String> {
    let f = p.field;
    let mut sum = vec![f.zero(); p.dim];
    for (i, e) in p.idempotents.iter().enumerate() {
        if e.iter().all(Scalar::is_zero) {
            return Err(format!("idempotent {i} is zero"));
        }
        for (j, e2) in p.idempotents.iter().enumerate() {
            let prod = p.mul(e, e2);
            if i == j && &prod != e {
                return Err(format!("idempotent {i} does not square to itself"));
            }
            if i != j && prod.iter().any(|x| !x.is_zero()) {
                return Err(format!("idempotents {i} and {j} are not orthogonal"));
            }
        }
        for (s, x) in sum.iter_mut().zip(e) {
            *s = &*s + x;
        }
    }
    if sum != p.unit {
        return Err("idempotents do not sum to the unit".into());
    }
    Ok(())
}

fn radical_space(p: &AlgebraPresentation) -> Result<RowSpace, String> {
    let space = RowSpace::span(p.field, p.dim, &p.radical);
    if space.dim() != p.radical.len() {
        return Err("radical basis vectors are linearly dependent".into());
    }
    Ok(space)
}

fn check_radical_ideal(p: &AlgebraPresentation) -> Result<(), String> {
    let space = radical_space(p)?;
    for (r, v) in p.radical.iter().enumerate() {
        for i in 0..p.dim {
            let b = p.basis_vector(i);
            if !space.contains(&p.mul(&b, v)) {
                return Err(format!("{} * radical[{r}] leaves the radical", p.basis[i]));
            }
            if !space.contains(&p.mul(v, &b)) {
                return Err(format!("radical[{r}] * {} leaves the radical", p.basis[i]));
            }
        }
    }
    Ok(())
}

fn check_radical_nilpotent(p: &AlgebraPresentation) -> Result<(), String> {
    let _ = radical_space(p)?;
    // J^k as a spanning list; stop when it vanishes.
    let mut power = p.radical.clone();
    for k in 1..=p.dim + 1 {
        let space = RowSpace::span(p.field, p.dim, &power);
        if space.dim() == 0 {
            return Ok(());
        }
        if k > p.dim {
            break;
        }
        let mut next = Vec::new();
        for x in space.basis() {
            for r in &p.radical {
                next.push(p.mul(&x, r));
            }
        }
        power = next;
    }
    Err(format!("radical is not nilpotent: J^{} != 0", p.dim + 1))
}

fn check_basic(p: &AlgebraPresentation) -> Result<(), String> {
    let expected = p.dim - p.radical.len().min(p.dim);
    if p.idempotents.len() != expected {
        return Err(format!(
            "{} idempotents but dim A - dim J = {expected}; only basic algebras with \
             one-dimensional simples are supported",
            p.idempotents.len()
        ));
    }
    let mut rows = p.idempotents.clone();
    rows.extend(p.radical.iter().cloned());
    if Matrix::from_row_vecs(p.field, p.dim, &rows).rank() != p.dim {
        return Err("idempotents are not independent modulo the radical".into());
    }
    Ok(())
}
