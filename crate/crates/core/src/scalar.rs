//! Exact arithmetic in the cyclotomic field Q(ζ), ζ = e^{iπ/3}.
//!
//! Elements are stored on the basis {1, ζ} and reduced with the minimal
//! polynomial ζ² = ζ − 1. Every sixth root of unity, and hence every
//! coefficient the braid representation produces, lives here.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element `a + b·ζ` of Q(ζ).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Scalar { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Scalar::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    /// `p / q` as a rational scalar. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::new(BigRational::new(p.into(), q.into()), BigRational::zero())
    }

    pub fn rational(r: BigRational) -> Self {
        Scalar::new(r, BigRational::zero())
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_ints(1, 0)
    }

    /// The primitive sixth root of unity ζ (the Hecke parameter q).
    pub fn zeta() -> Self {
        Scalar::from_ints(0, 1)
    }

    /// ζ^k for any integer k.
    pub fn qpow(k: i64) -> Self {
        match k.rem_euclid(6) {
            0 => Scalar::from_ints(1, 0),
            1 => Scalar::from_ints(0, 1),
            2 => Scalar::from_ints(-1, 1),
            3 => Scalar::from_ints(-1, 0),
            4 => Scalar::from_ints(0, -1),
            _ => Scalar::from_ints(1, -1),
        }
    }

    /// Rational part (coefficient of 1).
    pub fn re_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of ζ.
    pub fn zeta_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Complex conjugation; conj(ζ) = 1 − ζ.
    pub fn conj(&self) -> Self {
        Scalar::new(&self.a + &self.b, -&self.b)
    }

    /// Squared complex modulus `a² + ab + b²`.
    pub fn norm_sq(&self) -> BigRational {
        &self.a * &self.a + &self.a * &self.b + &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sq();
        let c = self.conj();
        Ok(Scalar::new(c.a / &n, c.b / n))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Scalar::new(&self.a * r, &self.b * r)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Returns `k` with `self == ζ^k`, if `self` is a sixth root of unity.
    pub fn root_of_unity_exponent(&self) -> Option<u32> {
        (0..6).find(|&k| *self == Scalar::qpow(k as i64))
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p = BigInt::from_str(p).map_err(|e| format!("bad numerator {p:?}: {e}"))?;
    let q = BigInt::from_str(q).map_err(|e| format!("bad denominator {q:?}: {e}"))?;
    if q.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(p, q))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.a)),
            (true, false) => {
                if self.b.is_one() {
                    write!(f, "q")
                } else if (-&self.b).is_one() {
                    write!(f, "-q")
                } else {
                    write!(f, "{}q", fmt_rational(&self.b))
                }
            }
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                let mag = self.b.abs();
                if mag.is_one() {
                    write!(f, "{} {} q", fmt_rational(&self.a), sign)
                } else {
                    write!(f, "{} {} {}q", fmt_rational(&self.a), sign, fmt_rational(&mag))
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let a = format!("{}/{}", self.a.numer(), self.a.denom());
        let b = format!("{}/{}", self.b.numer(), self.b.denom());
        [a, b].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[String; 2]>::deserialize(deserializer)?;
        Ok(Scalar::new(parse_rational(&a).map_err(D::Error::custom)?, parse_rational(&b).map_err(D::Error::custom)?))
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_ints(v, 0)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        // (a + bζ)(c + dζ) = ac + (ad + bc)ζ + bdζ², ζ² = ζ − 1
        let bd = &self.b * &rhs.b;
        Scalar::new(&self.a * &rhs.a - &bd, &self.a * &rhs.b + &self.b * &rhs.a + bd)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-&self.a, -&self.b)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.a, -self.b)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Scalar {
        Scalar::zeta()
    }

    #[test]
    fn defining_relation() {
        assert_eq!(&q() * &q(), Scalar::from_ints(-1, 1));
        assert_eq!(&q() * &q().conj(), Scalar::one());
        let cube = q().pow(3);
        assert_eq!(Scalar::one() - cube, Scalar::from(2));
    }

    #[test]
    fn qpow_values() {
        assert_eq!(Scalar::qpow(0), Scalar::one());
        assert_eq!(Scalar::qpow(3), Scalar::from(-1));
        assert_eq!(Scalar::qpow(-1), Scalar::from_ints(1, -1));
        for k in -12..12 {
            let direct = if k >= 0 { q().pow(k as u64) } else { q().inv().unwrap().pow((-k) as u64) };
            assert_eq!(Scalar::qpow(k), direct, "k = {k}");
        }
    }

    #[test]
    fn primitive_sixth_root() {
        assert!(q().pow(6).is_one());
        for k in 1..6 {
            assert!(!q().pow(k).is_one());
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(Scalar::from(2).norm_sq(), BigRational::from_integer(4.into()));
        assert_eq!(q().norm_sq(), BigRational::one());
        let half = Scalar::new(BigRational::new((-1).into(), 2.into()), BigRational::new(1.into(), 2.into()));
        assert_eq!(half, (q() - Scalar::one()).scale(&BigRational::new(1.into(), 2.into())));
        assert_eq!(half.norm_sq(), BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(Scalar::one().checked_div(&Scalar::zero()), Err(Error::DivisionByZero)));
        assert!(Scalar::zero().inv().is_err());
    }

    #[test]
    fn display_and_serde() {
        assert_eq!(Scalar::ratio(1, 2).to_string(), "1/2");
        assert_eq!(Scalar::from_ints(-1, 1).to_string(), "-1 + q");
        assert_eq!(Scalar::from_ints(0, -3).to_string(), "-3q");
        let s = Scalar::new(BigRational::new(3.into(), 4.into()), BigRational::from_integer((-2).into()));
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"["3/4","-2/1"]"#);
        let back: Scalar = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<Scalar>(r#"["1/0","0/1"]"#).is_err());
    }

    #[test]
    fn roots_of_unity() {
        for k in 0..6 {
            assert_eq!(Scalar::qpow(k).root_of_unity_exponent(), Some(k as u32));
        }
        assert_eq!(Scalar::from(2).root_of_unity_exponent(), None);
    }

    fn small() -> impl Strategy<Value = Scalar> {
        (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(p, q, r, s)| {
            Scalar::new(BigRational::new(p.into(), q.into()), BigRational::new(r.into(), s.into()))
        })
    }

    proptest! {
        #[test]
        fn field_axioms(x in small(), y in small(), z in small()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn conj_is_multiplicative_involution(x in small(), y in small()) {
            prop_assert_eq!(x.conj().conj(), x.clone());
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
            prop_assert_eq!((&x * &y).norm_sq(), x.norm_sq() * y.norm_sq());
            prop_assert_eq!(Scalar::rational(x.norm_sq()), &x * &x.conj());
            prop_assert!(!x.norm_sq().is_negative());
        }
    }
}
