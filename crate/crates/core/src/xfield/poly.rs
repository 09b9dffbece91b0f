//! Univariate polynomials, characteristic polynomials and roots in the base
//! field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::Matrix;
use super::scalar::{FieldSpec, Rational, Scalar};

/// Dense polynomial, coefficients from the constant term upwards, with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldSpec) -> Self {
        Poly { field, coeffs: vec![field.one()] }
    }

    /// `x - c`.
    pub fn linear(c: &Scalar) -> Self {
        let f = c.field();
        Poly { field: f, coeffs: vec![-c, f.one()] }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// `p(A)` for a square matrix `A`, by Horner's rule.
    pub fn eval_matrix(&self, a: &Matrix) -> Matrix {
        let n = a.rows();
        let mut acc = Matrix::zeros(self.field, n, n);
        let id = Matrix::identity(self.field, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a);
            acc.add_scaled(c, &id);
        }
        acc
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = self.field.zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
            .collect();
        Poly::new(self.field, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-&self.field.one()))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, c)
    }

    /// Euclidean division `(q, r)` with `self = q*d + r`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().inv().expect("leading coefficient is nonzero");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&c * b);
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(self.field, q), Poly::new(self.field, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> Poly {
        match self.lead().inv() {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }
}

/// Characteristic polynomial `det(x I - A)` via reduction to upper
/// Hessenberg form; valid over every field.
pub fn charpoly(a: &Matrix) -> Poly {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let field = a.field();
    let n = a.rows();
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !h[(i, m - 1)].is_zero()) else {
            continue;
        };
        if i != m {
            for j in 0..n {
                let t = h[(i, j)].clone();
                h[(i, j)] = h[(m, j)].clone();
                h[(m, j)] = t;
            }
            for r in 0..n {
                let t = h[(r, i)].clone();
                h[(r, i)] = h[(r, m)].clone();
                h[(r, m)] = t;
            }
        }
        let inv = h[(m, m - 1)].inv().expect("pivot is nonzero");
        for k in m + 1..n {
            let u = &h[(k, m - 1)] * &inv;
            if u.is_zero() {
                continue;
            }
            for j in 0..n {
                let v = &h[(k, j)] - &(&u * &h[(m, j)]);
                h[(k, j)] = v;
            }
            for r in 0..n {
                let v = &h[(r, m)] + &(&u * &h[(r, k)]);
                h[(r, m)] = v;
            }
        }
    }
    // p[m] is the characteristic polynomial of the leading m x m block.
    let x = Poly::new(field, vec![field.zero(), field.one()]);
    let mut p: Vec<Poly> = vec![Poly::one(field)];
    for m in 1..=n {
        let diag = Poly::new(field, vec![h[(m - 1, m - 1)].clone()]);
        let mut pm = x.sub(&diag).mul(&p[m - 1]);
        let mut t = field.one();
        for i in 1..m {
            t = &t * &h[(m - i, m - i - 1)];
            let c = &h[(m - i - 1, m - 1)] * &t;
            if !c.is_zero() {
                pm = pm.sub(&p[m - i - 1].scale(&c));
            }
        }
        p.push(pm);
    }
    p.pop().unwrap()
}

/// Distinct roots of `f` lying in its base field, in ascending order of
/// their canonical representation (residues for `F_p`, numeric for `Q`).
///
/// Over `Q` the rational-root search gives up (returning what it has found)
/// when the integer coefficients are too large to enumerate divisors.
pub fn roots_in_field(f: &Poly) -> Vec<Scalar> {
    if f.degree().is_none_or(|d| d == 0) {
        return Vec::new();
    }
    match f.field {
        FieldSpec::Prime(p) => prime_roots(f, p),
        FieldSpec::Rational => rational_roots(f),
    }
}

const BRUTE_FORCE_LIMIT: u64 = 1 << 16;

fn prime_roots(f: &Poly, p: u64) -> Vec<Scalar> {
    let field = f.field;
    if p <= BRUTE_FORCE_LIMIT {
        return (0..p)
            .map(|v| field.from_i64(v as i64))
            .filter(|x| f.eval(x).is_zero())
            .collect();
    }
    // Split off the product of distinct linear factors, gcd(f, x^p - x),
    // then separate it by Cantor–Zassenhaus.
    let f = f.monic();
    let x = Poly::new(field, vec![field.zero(), field.one()]);
    let xp = x.pow_mod(p, &f);
    let g = f.gcd(&xp.sub(&x));
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    split_linear(&g, p, &mut rng, &mut out);
    out.sort_by_key(|s| s.as_residue());
    out
}

fn split_linear(g: &Poly, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Scalar>) {
    let field = g.field;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let g = g.monic();
            out.push(-&g.coeffs[0]);
        }
        Some(d) => {
            if g.coeffs[0].is_zero() {
                out.push(field.zero());
                let (q, _) = g.div_rem(&Poly::new(field, vec![field.zero(), field.one()]));
                split_linear(&q, p, rng, out);
                return;
            }
            loop {
                let a = field.from_i64(rng.gen_range(0..p) as i64);
                let shift = Poly::new(field, vec![a, field.one()]);
                let h = shift.pow_mod((p - 1) / 2, g).sub(&Poly::one(field));
                let c = g.gcd(&h);
                let dc = c.degree().unwrap_or(0);
                if dc > 0 && dc < d {
                    let (q, _) = g.div_rem(&c);
                    split_linear(&c, p, rng, out);
                    split_linear(&q, p, rng, out);
                    return;
                }
            }
        }
    }
}

/// Largest absolute value whose divisors the rational-root search will
/// enumerate.
const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

fn rational_roots(f: &Poly) -> Vec<Scalar> {
    let field = f.field;
    // Clear denominators.
    let mut lcm = BigInt::one();
    for c in &f.coeffs {
        let r = c.as_rational().expect("rational coefficient");
        lcm = lcm.lcm(&r.denom());
    }
    let ints: Vec<BigInt> = f
        .coeffs
        .iter()
        .map(|c| {
            let r = c.as_rational().unwrap();
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    let mut out = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        out.push(field.zero());
    }
    let a0 = ints[low].abs();
    let an = ints.last().unwrap().abs();
    let (Some(a0), Some(an)) = (a0.to_u64(), an.to_u64()) else {
        return out;
    };
    if a0 > DIVISOR_LIMIT || an > DIVISOR_LIMIT {
        return out;
    }
    let num_divs = divisors(a0);
    let den_divs = divisors(an);
    let mut cands: Vec<Rational> = Vec::new();
    for &n in &num_divs {
        for &d in &den_divs {
            if n.gcd(&d) != 1 {
                continue;
            }
            cands.push(Rational::new(n as i128, d as i128));
            cands.push(Rational::new(-(n as i128), d as i128));
        }
    }
    for r in cands {
        let s = Scalar::Rat(r);
        if f.eval(&s).is_zero() {
            out.push(s);
        }
    }
    out.sort_by(|a, b| {
        let (x, y) = (a.as_rational().unwrap(), b.as_rational().unwrap());
        (x.numer() * y.denom()).cmp(&(y.numer() * x.denom()))
    });
    out.dedup();
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(f: FieldSpec, c: &[i64]) -> Poly {
        Poly::new(f, c.iter().map(|&x| f.from_i64(x)).collect())
    }

    #[test]
    fn charpoly_of_companion_matrix() {
        // Companion matrix of x^3 - 2x^2 + 3x - 5.
        let q = FieldSpec::Rational;
        let a = Matrix::from_ints(q, &[&[0, 0, 5], &[1, 0, -3], &[0, 1, 2]]);
        assert_eq!(charpoly(&a), ints(q, &[-5, 3, -2, 1]));
    }

    #[test]
    fn charpoly_needs_row_swaps() {
        let q = FieldSpec::Rational;
        let a = Matrix::from_ints(q, &[&[1, 2, 0, 1], &[0, 0, 0, 3], &[4, 1, 1, 0], &[0, 0, 2, 1]]);
        let p = charpoly(&a);
        assert!(p.eval_matrix(&a).is_zero());
        assert_eq!(p.coeffs()[3], -&a.trace());
    }

    #[test]
    fn roots_over_small_and_large_primes() {
        let f7 = FieldSpec::prime(7).unwrap();
        // (x-1)(x-3)(x^2+1) over F_7; x^2+1 is irreducible there.
        let p = ints(f7, &[-1, 1]).mul(&ints(f7, &[-3, 1])).mul(&ints(f7, &[1, 0, 1]));
        assert_eq!(roots_in_field(&p), vec![f7.from_i64(1), f7.from_i64(3)]);
        let big = FieldSpec::prime(1_000_003).unwrap();
        let p = ints(big, &[-12345, 1]).mul(&ints(big, &[0, 1])).mul(&ints(big, &[7, 0, 1]));
        let r = roots_in_field(&p);
        assert!(r.contains(&big.from_i64(12345)));
        assert!(r.contains(&big.zero()));
        for x in &r {
            assert!(p.eval(x).is_zero());
        }
    }

    #[test]
    fn rational_roots_found() {
        let q = FieldSpec::Rational;
        // (2x - 3)(x + 4) x^2
        let p = ints(q, &[-3, 2]).mul(&ints(q, &[4, 1])).mul(&ints(q, &[0, 0, 1]));
        let r = roots_in_field(&p);
        assert_eq!(r, vec![q.from_i64(-4), q.zero(), q.parse("3/2").unwrap()]);
        assert!(roots_in_field(&ints(q, &[-2, 0, 1])).is_empty());
    }
}
