//! Exact field arithmetic over the rationals and prime fields.
//!
//! Rationals use a two-tier representation: values whose numerator and
//! denominator fit in an `i64` stay inline, everything else is promoted to a
//! `BigRational`. The representation is canonical (a value that fits is
//! always stored small), so derived equality is value equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The base field: either the rationals or `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// Build `F_p`, rejecting non-primes by trial division.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Parse the CLI / file spelling: `q` or `fp:<p>` (also `fp<p>`).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "q" || s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let rest = s
            .strip_prefix("fp:")
            .or_else(|| s.strip_prefix("fp"))
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("bad field spec `{s}`") })?;
        let p: u64 = rest
            .parse()
            .map_err(|_| Error::Parse { line: 0, msg: format!("bad prime in `{s}`") })?;
        FieldSpec::prime(p)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Rational {
    Small(i64, i64),
    Big(BigRational),
}

impl Rational {
    fn from_i128(n: i128, d: i128) -> Rational {
        debug_assert!(d != 0);
        let (mut n, mut d) = (n, d);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Rational {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(r) => r.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    fn add(&self, o: &Rational) -> Rational {
        match (self, o) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Rational::from_i128(a + c, b)
                } else {
                    Rational::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Rational::from_big(self.to_big() + o.to_big()),
        }
    }

    fn neg(&self) -> Rational {
        match self {
            Rational::Small(a, b) => Rational::from_i128(-(*a as i128), *b as i128),
            Rational::Big(r) => Rational::from_big(-r.clone()),
        }
    }

    fn mul(&self, o: &Rational) -> Rational {
        match (self, o) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * o.to_big()),
        }
    }

    fn inv(&self) -> Option<Rational> {
        match self {
            Rational::Small(0, _) => None,
            Rational::Small(a, b) => Some(Rational::from_i128(*b as i128, *a as i128)),
            Rational::Big(r) => Some(Rational::from_big(r.recip())),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// An exact element of a [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Q(Rational),
    Fp { value: u64, p: u64 },
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Scalar {
        Scalar::from_int(field, 0)
    }

    pub fn one(field: FieldSpec) -> Scalar {
        Scalar::from_int(field, 1)
    }

    pub fn from_int(field: FieldSpec, n: i64) -> Scalar {
        match field {
            FieldSpec::Rationals => Scalar(Repr::Q(Rational::Small(n, 1))),
            FieldSpec::Prime(p) => Scalar(Repr::Fp { value: (n as i128).rem_euclid(p as i128) as u64, p }),
        }
    }

    /// `n / d` in the given field.
    pub fn from_ratio(field: FieldSpec, n: i64, d: i64) -> Result<Scalar> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        Scalar::from_int(field, n).try_div(&Scalar::from_int(field, d))
    }

    fn from_big_ratio(field: FieldSpec, r: BigRational) -> Result<Scalar> {
        match field {
            FieldSpec::Rationals => Ok(Scalar(Repr::Q(Rational::from_big(r)))),
            FieldSpec::Prime(p) => {
                let pb = BigInt::from(p);
                let n = r.numer().mod_floor(&pb).to_u64().unwrap_or(0);
                let d = r.denom().mod_floor(&pb).to_u64().unwrap_or(0);
                Scalar(Repr::Fp { value: n, p }).try_div(&Scalar(Repr::Fp { value: d, p }))
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        match &self.0 {
            Repr::Q(_) => FieldSpec::Rationals,
            Repr::Fp { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Q(r) => r.is_zero(),
            Repr::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one(self.field())
    }

    fn check_field(&self, o: &Scalar) -> Result<()> {
        if self.field() == o.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field().to_string(), o.field().to_string()))
        }
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar> {
        self.check_field(o)?;
        Ok(match (&self.0, &o.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a.add(b))),
            (Repr::Fp { value: a, p }, Repr::Fp { value: b, .. }) => {
                Scalar(Repr::Fp { value: (a + b) % p, p: *p })
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, o: &Scalar) -> Result<Scalar> {
        self.try_add(&o.negate())
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar> {
        self.check_field(o)?;
        Ok(match (&self.0, &o.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a.mul(b))),
            (Repr::Fp { value: a, p }, Repr::Fp { value: b, .. }) => Scalar(Repr::Fp {
                value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            }),
            _ => unreachable!(),
        })
    }

    pub fn try_div(&self, o: &Scalar) -> Result<Scalar> {
        self.check_field(o)?;
        self.try_mul(&o.inverse()?)
    }

    pub fn negate(&self) -> Scalar {
        match &self.0 {
            Repr::Q(a) => Scalar(Repr::Q(a.neg())),
            Repr::Fp { value, p } => Scalar(Repr::Fp { value: (p - value) % p, p: *p }),
        }
    }

    pub fn inverse(&self) -> Result<Scalar> {
        match &self.0 {
            Repr::Q(a) => a.inv().map(|r| Scalar(Repr::Q(r))).ok_or(Error::DivisionByZero),
            Repr::Fp { value, p } => {
                if *value == 0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar(Repr::Fp { value: pow_mod(*value, p - 2, *p), p: *p }))
            }
        }
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Scalar::one(self.field());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Parse `3/4`, `-2`, or `fp5:3`. Plain integers and fractions are
    /// mapped into `field`.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse { line: 0, msg: format!("bad scalar `{s}`") };
        if let Some(rest) = s.strip_prefix("fp") {
            let (p, v) = rest.split_once(':').ok_or_else(bad)?;
            let p: u64 = p.parse().map_err(|_| bad())?;
            if FieldSpec::Prime(p) != field {
                return Err(Error::FieldMismatch(format!("fp:{p}"), field.to_string()));
            }
            let v: i64 = v.parse().map_err(|_| bad())?;
            return Ok(Scalar::from_int(field, v));
        }
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Scalar::from_big_ratio(field, BigRational::new(n, d))
    }

    /// Small integer view, used for display decisions and tests.
    pub fn as_residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Fp { value, .. } => Some(*value),
            Repr::Q(_) => None,
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        match &self.0 {
            Repr::Q(Rational::Small(n, _)) => *n < 0,
            Repr::Q(Rational::Big(r)) => r.is_negative(),
            Repr::Fp { .. } => false,
        }
    }
}

fn pow_mod(b: u64, mut e: u64, p: u64) -> u64 {
    let m = p as u128;
    let mut acc = 1u128;
    let mut base = (b % p) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Q(r) => write!(f, "{r}"),
            Repr::Fp { value, p } => write!(f, "fp{p}:{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.try_add(o).expect("scalar field mismatch")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.try_sub(o).expect("scalar field mismatch")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.try_mul(o).expect("scalar field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.negate()
    }
}

/// Multiplicative order of a nonzero scalar, if finite and at most `bound`.
pub fn multiplicative_order(q: &Scalar, bound: u64) -> Option<u64> {
    if q.is_zero() {
        return None;
    }
    let one = Scalar::one(q.field());
    let mut acc = q.clone();
    for k in 1..=bound {
        if acc == one {
            return Some(k);
        }
        acc = &acc * q;
    }
    None
}

/// An element of multiplicative order exactly `n`, or `None` when the field
/// has none. Over the rationals only `n <= 2` is supported.
pub fn find_root_of_unity(field: FieldSpec, n: u64) -> Result<Option<Scalar>> {
    if n == 0 {
        return Ok(None);
    }
    match field {
        FieldSpec::Rationals => match n {
            1 => Ok(Some(Scalar::one(field))),
            2 => Ok(Some(Scalar::from_int(field, -1))),
            _ => Err(Error::UnsupportedField(format!("no root of unity of order {n} over q"))),
        },
        FieldSpec::Prime(p) => {
            if (p - 1) % n != 0 {
                return Ok(None);
            }
            for v in 1..p {
                let q = Scalar::from_int(field, v as i64);
                if multiplicative_order(&q, n) == Some(n) {
                    return Ok(Some(q));
                }
            }
            Ok(None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(Q, n, d).unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(&q(1, 2) + &q(1, 3), q(5, 6));
        assert_eq!((&q(1, 2) + &q(1, 3)).to_string(), "5/6");
    }

    #[test]
    fn modular_product() {
        let f5 = FieldSpec::prime(5).unwrap();
        let p = &Scalar::from_int(f5, 2) * &Scalar::from_int(f5, 3);
        assert!(p.is_one());
    }

    #[test]
    fn inverse_of_zero() {
        assert_eq!(Scalar::zero(Q).inverse(), Err(Error::DivisionByZero));
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(Scalar::zero(f7).inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn field_mismatch() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert!(matches!(Scalar::one(Q).try_add(&Scalar::one(f5)), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn normalization() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(-2, -4), q(1, 2));
        assert_eq!(q(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn prime_check() {
        assert!(FieldSpec::prime(4).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(2).is_ok());
        assert_eq!(FieldSpec::parse("fp:5").unwrap(), FieldSpec::Prime(5));
    }

    #[test]
    fn roots_of_unity() {
        let f5 = FieldSpec::prime(5).unwrap();
        // exhaustive oracle over F_5^x
        let oracle: Vec<u64> = (1..5u64)
            .filter(|v| {
                let pows: Vec<u64> = (1..=4).map(|k| v.pow(k) % 5).collect();
                pows[3] == 1 && pows[0] != 1 && pows[1] != 1 && pows[2] != 1
            })
            .collect();
        assert_eq!(oracle.first(), Some(&2));
        assert_eq!(find_root_of_unity(f5, 4).unwrap(), Some(Scalar::from_int(f5, 2)));
        assert_eq!(find_root_of_unity(f5, 3).unwrap(), None);
        assert_eq!(find_root_of_unity(Q, 2).unwrap(), Some(Scalar::from_int(Q, -1)));
        assert!(matches!(find_root_of_unity(Q, 3), Err(Error::UnsupportedField(_))));
    }

    #[test]
    fn text_round_trip() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(Scalar::parse(Q, "3/4").unwrap(), q(3, 4));
        assert_eq!(Scalar::parse(Q, "-2").unwrap().to_string(), "-2");
        assert_eq!(Scalar::parse(f5, "fp5:3").unwrap().to_string(), "fp5:3");
        assert_eq!(Scalar::parse(f5, "1/2").unwrap(), Scalar::from_int(f5, 3));
        assert!(Scalar::parse(f5, "fp7:3").is_err());
    }

    #[test]
    fn big_promotion() {
        let big = Scalar::from_int(Q, i64::MAX);
        let sq = &big * &big;
        let back = sq.try_div(&big).unwrap();
        assert_eq!(back, big);
        assert_eq!(&(&sq - &sq) + &q(1, 3), q(1, 3));
    }

    fn arb_q() -> impl Strategy<Value = Scalar> {
        (-1000i64..1000, 1i64..50).prop_map(|(n, d)| q(n, d))
    }

    fn arb_f7() -> impl Strategy<Value = Scalar> {
        (0i64..7).prop_map(|v| Scalar::from_int(FieldSpec::Prime(7), v))
    }

    fn field_laws(a: &Scalar, b: &Scalar, c: &Scalar) {
        assert_eq!(&(a + b) + c, a + &(b + c));
        assert_eq!(&(a * b) * c, a * &(b * c));
        assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        assert_eq!(&(a + b) - b, a.clone());
        if !a.is_zero() {
            assert!((a * &a.inverse().unwrap()).is_one());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn rational_field_axioms(a in arb_q(), b in arb_q(), c in arb_q()) {
            field_laws(&a, &b, &c);
        }

        #[test]
        fn prime_field_axioms(a in arb_f7(), b in arb_f7(), c in arb_f7()) {
            field_laws(&a, &b, &c);
        }
    }
}
