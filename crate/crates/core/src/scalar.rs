//! Scalar fields behind every matrix in the crate.
//!
//! Two backends share one interface: [`Rational`] (exact, arbitrary precision)
//! and `f64` (tolerance based). Complex scalars are `num_complex::Complex<R>`
//! over either, so the exact backend is the Gaussian rationals ℚ(i).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(DEFAULT_TOLERANCE.to_bits());

/// Global tolerance τ used by every float-mode equality and rank decision.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(AtomicOrdering::Relaxed))
}

/// Sets τ for the whole process. Exact mode ignores it.
pub fn set_tolerance(tol: f64) {
    assert!(tol.is_finite() && tol > 0.0, "tolerance must be positive and finite");
    TOLERANCE_BITS.store(tol.to_bits(), AtomicOrdering::Relaxed);
}

/// A real field usable as the coordinate field of algebras and as the
/// component type of complex matrix entries.
pub trait RealScalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Num
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + RemAssign
    + Send
    + Sync
    + 'static
{
    /// True when equality is decided without tolerance.
    const EXACT: bool;
    /// Name used by the document format (`"exact"` or `"float"`).
    const MODE: &'static str;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    fn to_f64(&self) -> f64;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Zero test. Exact mode: literal zero. Float mode: `|x| <= τ·max(scale, 1)`.
    fn is_negligible(&self, scale: f64) -> bool;

    /// Sign as -1, 0 or 1, with negligible values mapped to 0.
    fn sign(&self, scale: f64) -> i8 {
        if self.is_negligible(scale) {
            0
        } else if self.to_f64() > 0.0 {
            1
        } else {
            -1
        }
    }

    fn to_json(&self) -> Value;

    fn from_json(value: &Value) -> Result<Self, String>;
}

/// Exact rational number. Values whose numerator and denominator fit in
/// `i64` stay inline; anything larger is promoted to a `BigRational`.
///
/// Invariant: `Small(n, d)` has `d > 0` and `gcd(n, d) = 1`, and a `Big`
/// value never fits the small form.
#[derive(Clone)]
pub enum Rational {
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            // |n|, |d| < 2^127 after reduction unless one is i128::MIN; the
            // products feeding this never reach that bound.
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub fn from_big(value: BigRational) -> Self {
        match (value.numer().to_i64(), value.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(value)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Rational::Small(n, d) => Self::from_i128((*n as i128).abs(), *d as i128),
            Rational::Big(b) => Rational::Big(Box::new(b.abs())),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n < 0,
            Rational::Big(b) => b.is_negative(),
        }
    }

    fn binary(
        &self,
        other: &Self,
        small: impl Fn(i128, i128, i128, i128) -> (i128, i128),
        big: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Self {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                let (n, den) = small(*a as i128, *b as i128, *c as i128, *d as i128);
                Self::from_i128(n, den)
            }
            _ => Self::from_big(big(&self.to_big(), &other.to_big())),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(b) if b.denom().is_one() => write!(f, "{}", b.numer()),
            Rational::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => a == c && b == d,
            (Rational::Big(x), Rational::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::Small(0, 1)
    }

    fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::Small(1, 1)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &'a Rational) -> Rational {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        self.binary(rhs, |a, b, c, d| (a * d + c * b, b * d), |x, y| x + y)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &'a Rational) -> Rational {
        if rhs.is_zero() {
            return self.clone();
        }
        self.binary(rhs, |a, b, c, d| (a * d - c * b, b * d), |x, y| x - y)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &'a Rational) -> Rational {
        if self.is_zero() || rhs.is_zero() {
            return Rational::zero();
        }
        self.binary(rhs, |a, b, c, d| (a * c, b * d), |x, y| x * y)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Self) -> Self {
        &self / &rhs
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        if self.is_zero() {
            return Rational::zero();
        }
        self.binary(rhs, |a, b, c, d| (a * d, b * c), |x, y| x / y)
    }
}

impl Rem for Rational {
    type Output = Rational;
    fn rem(self, rhs: Self) -> Self {
        Self::from_big(self.to_big() % rhs.to_big())
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Self {
        match self {
            Rational::Small(n, d) => Self::from_i128(-(n as i128), d as i128),
            Rational::Big(b) => Self::from_big(-*b),
        }
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Self) {
        *self = &*self + &rhs;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Self) {
        *self = &*self - &rhs;
    }
}

impl MulAssign for Rational {
    fn mul_assign(&mut self, rhs: Self) {
        *self = &*self * &rhs;
    }
}

impl DivAssign for Rational {
    fn div_assign(&mut self, rhs: Self) {
        *self = &*self / &rhs;
    }
}

impl RemAssign for Rational {
    fn rem_assign(&mut self, rhs: Self) {
        *self = self.clone() % rhs;
    }
}

impl Num for Rational {
    type FromStrRadixErr = num_rational::ParseRatioError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        BigRational::from_str_radix(s, radix).map(Self::from_big)
    }
}

impl FromStr for Rational {
    type Err = num_rational::ParseRatioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.split_once('/') {
            Some(_) => BigRational::from_str(s).map(Self::from_big),
            None => BigRational::from_str(&format!("{s}/1")).map(Self::from_big),
        }
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::Small(v, 1)
    }
}

impl RealScalar for Rational {
    const EXACT: bool = true;
    const MODE: &'static str = "exact";

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(num, den)
    }

    fn to_f64(&self) -> f64 {
        match self {
            Rational::Small(n, d) => *n as f64 / *d as f64,
            Rational::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn sign(&self, _scale: f64) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_negative() {
            -1
        } else {
            1
        }
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(value: &Value) -> Result<Self, String> {
        match value {
            Value::String(s) => s.parse().map_err(|e| format!("invalid rational {s:?}: {e}")),
            Value::Number(n) => match n.as_i64() {
                Some(v) => Ok(Rational::from(v)),
                None => Err(format!("non-integer number {n} in exact mode; write it as \"p/q\"")),
            },
            other => Err(format!("expected a rational string, found {other}")),
        }
    }
}

impl RealScalar for f64 {
    const EXACT: bool = false;
    const MODE: &'static str = "float";

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= tolerance() * scale.max(1.0)
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map(Value::Number).unwrap_or(Value::Null)
    }

    fn from_json(value: &Value) -> Result<Self, String> {
        match value {
            Value::Number(n) => n.as_f64().ok_or_else(|| format!("number {n} out of range")),
            Value::String(s) => {
                s.parse::<Rational>().map(|r| r.to_f64()).map_err(|e| format!("invalid rational {s:?}: {e}"))
            }
            other => Err(format!("expected a number, found {other}")),
        }
    }
}

/// Exact Gaussian rational.
pub type GaussRational = Complex<Rational>;

pub fn is_negligible<R: RealScalar>(z: &Complex<R>, scale: f64) -> bool {
    z.re.is_negligible(scale) && z.im.is_negligible(scale)
}

pub fn modulus<R: RealScalar>(z: &Complex<R>) -> f64 {
    z.re.to_f64().hypot(z.im.to_f64())
}

pub fn complex<R: RealScalar>(re: R, im: R) -> Complex<R> {
    Complex::new(re, im)
}

pub fn real<R: RealScalar>(re: R) -> Complex<R> {
    Complex::new(re, R::zero())
}

pub fn imag_unit<R: RealScalar>() -> Complex<R> {
    Complex::new(R::zero(), R::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values_normalize() {
        assert_eq!(Rational::new(2, -4), Rational::new(-1, 2));
        assert_eq!(Rational::new(0, 7), Rational::zero());
        assert_eq!(Rational::new(6, 3).to_string(), "2");
        assert_eq!(Rational::new(-3, 9).to_string(), "-1/3");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Rational::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back, Rational::Small(..)));
        let neg_min = -Rational::from(i64::MIN);
        assert!(matches!(neg_min, Rational::Big(_)));
    }

    #[test]
    fn parses_json_forms() {
        let v: Value = serde_json::json!("-7/21");
        assert_eq!(Rational::from_json(&v).unwrap(), Rational::new(-1, 3));
        assert_eq!(Rational::from_json(&serde_json::json!(5)).unwrap(), Rational::from(5));
        assert!(Rational::from_json(&serde_json::json!(0.5)).is_err());
        assert_eq!(f64::from_json(&serde_json::json!("1/4")).unwrap(), 0.25);
    }

    #[test]
    fn gaussian_rationals_divide_exactly() {
        let z = complex(Rational::new(1, 2), Rational::from(3));
        let w = complex(Rational::from(-2), Rational::new(5, 7));
        let q = z.clone() / w.clone();
        assert_eq!(q * w, z);
    }

    fn rat() -> impl Strategy<Value = Rational> {
        (any::<i64>(), 1i64..=i64::MAX).prop_map(|(n, d)| Rational::new(n, d))
    }

    proptest! {
        #[test]
        fn agrees_with_bigrational(a in rat(), b in rat()) {
            let (x, y) = (a.to_big(), b.to_big());
            prop_assert_eq!((&a + &b).to_big(), &x + &y);
            prop_assert_eq!((&a - &b).to_big(), &x - &y);
            prop_assert_eq!((&a * &b).to_big(), &x * &y);
            if !b.is_zero() {
                prop_assert_eq!((&a / &b).to_big(), &x / &y);
            }
            prop_assert_eq!(a.cmp(&b), x.cmp(&y));
        }
    }
}
