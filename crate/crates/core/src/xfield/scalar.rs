//! Field descriptions and exact scalars.
//!
//! Two kinds of base field are supported: prime fields `F_p` and the
//! rationals. Rationals are stored as machine-word fractions while they fit
//! and are promoted to arbitrary precision on overflow; every value is kept in
//! lowest terms so structural equality coincides with numeric equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::Error;

/// The base field of every algebra, module and matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

impl FieldSpec {
    /// `F_p`, after checking that `p` is prime.
    pub fn prime(p: u64) -> Result<Self, Error> {
        if p >= 1 << 62 {
            return Err(Error::InvalidField(format!("modulus {p} is too large")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Mod(Fp { v: 0, p: *p }),
            FieldSpec::Rational => Scalar::Rat(Rational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Mod(Fp::new(n.rem_euclid(*p as i64) as u64, *p)),
            FieldSpec::Rational => Scalar::Rat(Rational::from_int(n)),
        }
    }

    /// A fraction `num/den`; `den` must be invertible in the field.
    pub fn from_fraction(&self, num: i64, den: i64) -> Result<Scalar, Error> {
        let d = self.from_i64(den);
        let inv = d
            .inv()
            .ok_or_else(|| Error::Parse(format!("denominator {den} is zero in {self}")))?;
        Ok(&self.from_i64(num) * &inv)
    }

    /// Parses `"3"`, `"-3/7"` (rationals) or an integer literal (prime fields).
    pub fn parse(&self, s: &str) -> Result<Scalar, Error> {
        match self {
            FieldSpec::Prime(p) => {
                let n: i128 = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("`{s}` is not an integer")))?;
                Ok(Scalar::Mod(Fp::new(n.rem_euclid(*p as i128) as u64, *p)))
            }
            FieldSpec::Rational => Ok(Scalar::Rat(s.parse()?)),
        }
    }

    /// Characteristic (0 for the rationals).
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rational => 0,
        }
    }

    /// Number of elements, if finite.
    pub fn size(&self) -> Option<u64> {
        match self {
            FieldSpec::Prime(p) => Some(*p),
            FieldSpec::Rational => None,
        }
    }

    /// The `k`-th element of a fixed enumeration: `0, 1, 2, ...` for prime
    /// fields; `0, 1, -1, 2, -2, 1/2, ...` style small heights for rationals.
    pub fn enumerate(&self, k: u64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Mod(Fp::new(k % p, *p)),
            FieldSpec::Rational => {
                if k == 0 {
                    return self.zero();
                }
                let n = k.div_ceil(2) as i64;
                let sign = if k % 2 == 1 { 1 } else { -1 };
                self.from_i64(sign * n)
            }
        }
    }

    /// A scalar drawn from `rng`: uniform over `F_p`, or a small-height
    /// rational with numerator in `[-h, h]` and denominator in `[1, 3]`.
    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R, height: i64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Mod(Fp::new(rng.gen_range(0..*p), *p)),
            FieldSpec::Rational => {
                let n = rng.gen_range(-height..=height);
                let d = rng.gen_range(1..=3);
                Scalar::Rat(Rational::new(n as i128, d as i128))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An element of `F_p`. The modulus travels with the value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    fn new(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn inv(&self) -> Option<Fp> {
        if self.v == 0 {
            None
        } else {
            Some(Fp { v: pow_mod(self.v, self.p - 2, self.p), p: self.p })
        }
    }
}

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Rational {
    pub fn zero() -> Self {
        Rational::Small(0, 1)
    }

    pub fn from_int(n: i64) -> Self {
        Rational::Small(n, 1)
    }

    /// Builds `n/d` (d != 0) in lowest terms.
    pub fn new(n: i128, d: i128) -> Self {
        assert!(d != 0, "zero denominator");
        let g = n.gcd(&d);
        let (mut n, mut d) = if g == 0 { (0, 1) } else { (n / g, d / g) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) => Rational::Small(a, b),
            _ => Rational::Big(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(a), Some(b)) => Rational::Small(a, b),
            _ => Rational::Big(Box::new(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(a, b) => BigRational::new_raw(BigInt::from(*a), BigInt::from(*b)),
            Rational::Big(r) => (**r).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(a, _) => BigInt::from(*a),
            Rational::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, b) => BigInt::from(*b),
            Rational::Big(r) => r.denom().clone(),
        }
    }

    pub fn from_big_parts(n: BigInt, d: BigInt) -> Self {
        Rational::from_big(BigRational::new(n, d))
    }

    fn add(&self, o: &Rational) -> Rational {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, o) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Rational::new(a + c, b);
            }
            if let (Some(x), Some(y)) = (a.checked_mul(d), c.checked_mul(b)) {
                if let (Some(n), Some(den)) = (x.checked_add(y), b.checked_mul(d)) {
                    return Rational::new(n, den);
                }
            }
        }
        Rational::from_big(self.to_big() + o.to_big())
    }

    fn neg(&self) -> Rational {
        match self {
            Rational::Small(a, b) if *a != i64::MIN => Rational::Small(-a, *b),
            _ => Rational::from_big(-self.to_big()),
        }
    }

    fn mul(&self, o: &Rational) -> Rational {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, o) {
            if *a == 0 || *c == 0 {
                return Rational::zero();
            }
            return Rational::new(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        Rational::from_big(self.to_big() * o.to_big())
    }

    fn inv(&self) -> Option<Rational> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rational::Small(a, b) => Rational::new(*b as i128, *a as i128),
            Rational::Big(r) => Rational::from_big(r.recip()),
        })
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("`{s}` is not a rational literal"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(a, 1) => write!(f, "{a}"),
            Rational::Small(a, b) => write!(f, "{a}/{b}"),
            Rational::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// A field element. Arithmetic between scalars of different fields is a
/// programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod(Fp),
    Rat(Rational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(x) => x.v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod(x) => x.v == 1,
            Scalar::Rat(r) => matches!(r, Rational::Small(1, 1)),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Mod(x) => FieldSpec::Prime(x.p),
            Scalar::Rat(_) => FieldSpec::Rational,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Mod(x) => x.inv().map(Scalar::Mod),
            Scalar::Rat(r) => r.inv().map(Scalar::Rat),
        }
    }

    /// Integer representative for prime fields, `None` for rationals.
    pub fn as_residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod(x) => Some(x.v),
            Scalar::Rat(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Mod(_) => None,
        }
    }

    /// True for rationals with |numerator| and denominator both below `h`.
    pub fn height_below(&self, h: i64) -> bool {
        match self {
            Scalar::Mod(_) => true,
            Scalar::Rat(Rational::Small(a, b)) => a.abs() < h && *b < h,
            Scalar::Rat(Rational::Big(_)) => false,
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn is_negative_rational(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.numer().is_negative(),
            Scalar::Mod(_) => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(x) => write!(f, "{}", x.v),
            Scalar::Rat(r) => write!(f, "{r}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Mod(a), Scalar::Mod(b)) => {
                debug_assert_eq!(a.p, b.p);
                let s = a.v + b.v;
                Scalar::Mod(Fp { v: if s >= a.p { s - a.p } else { s }, p: a.p })
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a.add(b)),
            _ => panic!("scalar field mismatch"),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Mod(a), Scalar::Mod(b)) => {
                debug_assert_eq!(a.p, b.p);
                let v = if a.v >= b.v { a.v - b.v } else { a.v + a.p - b.v };
                Scalar::Mod(Fp { v, p: a.p })
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a.add(&b.neg())),
            _ => panic!("scalar field mismatch"),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Mod(a), Scalar::Mod(b)) => {
                debug_assert_eq!(a.p, b.p);
                Scalar::Mod(Fp { v: mul_mod(a.v, b.v, a.p), p: a.p })
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a.mul(b)),
            _ => panic!("scalar field mismatch"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod(a) => Scalar::Mod(Fp { v: if a.v == 0 { 0 } else { a.p - a.v }, p: a.p }),
            Scalar::Rat(a) => Scalar::Rat(a.neg()),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// `a - b*c`, the elimination kernel.
#[inline]
pub(crate) fn sub_mul(a: &Scalar, b: &Scalar, c: &Scalar) -> Scalar {
    match (a, b, c) {
        (Scalar::Mod(x), Scalar::Mod(y), Scalar::Mod(z)) => {
            let prod = mul_mod(y.v, z.v, x.p);
            let v = if x.v >= prod { x.v - prod } else { x.v + x.p - prod };
            Scalar::Mod(Fp { v, p: x.p })
        }
        _ => a - &(b * c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1_000_001));
        assert!(FieldSpec::prime(4).is_err());
        assert!(FieldSpec::prime(1).is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(&a + &b, f.from_i64(1));
        assert_eq!(&a - &b, f.from_i64(5));
        assert_eq!(&a * &b, f.from_i64(1));
        assert_eq!(a.inv().unwrap(), b);
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn rationals_stay_reduced() {
        let f = FieldSpec::Rational;
        let a = f.parse("6/8").unwrap();
        assert_eq!(a.to_string(), "3/4");
        let b = f.parse("-1/4").unwrap();
        assert_eq!((&a + &b).to_string(), "1/2");
        assert_eq!(f.parse("2/-4").unwrap().to_string(), "-1/2");
        assert!(f.parse("1/0").is_err());
    }

    #[test]
    fn rationals_promote_and_demote() {
        let f = FieldSpec::Rational;
        let big = f.from_i64(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Scalar::Rat(Rational::Big(_))));
        let back = &sq * &big.inv().unwrap();
        assert_eq!(back, big);
        assert!(matches!(back, Scalar::Rat(Rational::Small(..))));
        let neg_min = -&f.from_i64(i64::MIN);
        assert_eq!(neg_min.to_string(), "9223372036854775808");
    }
}
