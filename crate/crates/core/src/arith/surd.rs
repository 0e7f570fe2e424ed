//! Elements of a real quadratic field `Q(sqrt(s))`.
//!
//! A [`QuadSurd`] is `rat + coef * sqrt(rad)` with rational parts and a
//! square-free radicand. Rationals are the special case `coef = 0`, which is
//! always stored with `rad = 0`, so derived equality is value equality.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Exact scalar used throughout the crate.
pub type Scalar = QuadSurd;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    rat: Rational,
    coef: Rational,
    rad: u64,
}

/// Splits `n` as `a^2 * s` with `s` square-free.
pub fn square_free_part(n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 0);
    }
    let mut outer = 1u64;
    let mut rest = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        while rest.is_multiple_of(p * p) {
            rest /= p * p;
            outer *= p;
        }
        p += 1;
    }
    (outer, rest)
}

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

impl QuadSurd {
    /// Builds `rat + coef*sqrt(rad)`, pulling square factors out of `rad`.
    pub fn new(rat: Rational, coef: Rational, rad: u64) -> Self {
        let (outer, s) = square_free_part(rad);
        let coef = coef * Rational::from_integer(BigInt::from(outer));
        match s {
            0 => Self::from_rational(rat),
            1 => Self::from_rational(rat + coef),
            _ if coef.is_zero() => Self::from_rational(rat),
            _ => QuadSurd { rat, coef, rad: s },
        }
    }

    pub fn from_rational(rat: Rational) -> Self {
        QuadSurd {
            rat,
            coef: Rational::zero(),
            rad: 0,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(int(v))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(rational(numer, denom))
    }

    /// Exact square root of a nonnegative rational, `None` for negative input.
    pub fn sqrt_rational(r: &Rational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        // sqrt(p/q) = sqrt(p*q) / q
        let prod = r.numer() * r.denom();
        let prod = prod.to_u64()?;
        let (outer, s) = square_free_part(prod);
        let scale = Rational::new(BigInt::from(outer), r.denom().clone());
        Some(if s <= 1 {
            Self::from_rational(scale * int(s as i64))
        } else {
            QuadSurd {
                rat: Rational::zero(),
                coef: scale,
                rad: s,
            }
        })
    }

    pub fn rat(&self) -> &Rational {
        &self.rat
    }

    pub fn coef(&self) -> &Rational {
        &self.coef
    }

    /// Square-free radicand, or 0 when the value is rational.
    pub fn radicand(&self) -> u64 {
        self.rad
    }

    pub fn is_rational(&self) -> bool {
        self.rad == 0
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.rat)
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|v| v.to_i64())
    }

    pub fn is_integer(&self) -> bool {
        self.to_integer().is_some()
    }

    /// Radicand shared by `self` and `other`, or an error if they disagree.
    pub fn common_radicand(&self, other: &Self) -> Result<u64> {
        match (self.rad, other.rad) {
            (0, s) | (s, 0) => Ok(s),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(Error::MixedRadicands(a, b)),
        }
    }

    fn field_of(&self, other: &Self) -> u64 {
        match self.common_radicand(other) {
            Ok(s) => s,
            Err(e) => panic!("{e}"),
        }
    }

    fn assemble(rat: Rational, coef: Rational, rad: u64) -> Self {
        if rad == 0 || coef.is_zero() {
            Self::from_rational(rat)
        } else {
            QuadSurd { rat, coef, rad }
        }
    }

    /// Exact sign of the real value.
    pub fn signum(&self) -> i8 {
        let a = sign_of(&self.rat);
        let b = sign_of(&self.coef);
        if b == 0 {
            return a;
        }
        if a == 0 || a == b {
            return b;
        }
        // Opposite signs: compare a^2 against b^2 * s.
        let a2 = &self.rat * &self.rat;
        let b2s = &self.coef * &self.coef * int(self.rad as i64);
        match a2.cmp(&b2s) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.signum() >= 0
    }

    /// Field conjugate `rat - coef*sqrt(rad)`.
    pub fn conjugate(&self) -> Self {
        Self::assemble(self.rat.clone(), -self.coef.clone(), self.rad)
    }

    /// `self * conjugate(self)`, a rational.
    pub fn norm(&self) -> Rational {
        &self.rat * &self.rat - &self.coef * &self.coef * int(self.rad as i64)
    }

    pub fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conjugate();
        Some(Self::assemble(&c.rat / &n, &c.coef / &n, self.rad))
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let base = rational_to_f64(&self.rat);
        if self.rad == 0 {
            base
        } else {
            base + rational_to_f64(&self.coef) * libm::sqrt(self.rad as f64)
        }
    }
}

fn sign_of(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        return v;
    }
    let (n, d) = (r.numer(), r.denom());
    let shift = n.bits().max(d.bits()).saturating_sub(60);
    let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rad == 0 {
            return write!(f, "{}", self.rat);
        }
        if self.rat.is_zero() {
            write!(f, "{}*sqrt({})", self.coef, self.rad)
        } else {
            write!(f, "{} + {}*sqrt({})", self.rat, self.coef, self.rad)
        }
    }
}

impl Default for QuadSurd {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for QuadSurd {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for QuadSurd {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<BigInt> for QuadSurd {
    fn from(v: BigInt) -> Self {
        Self::from_rational(Rational::from_integer(v))
    }
}

impl Zero for QuadSurd {
    fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.rad == 0 && self.rat.is_zero()
    }
}

impl One for QuadSurd {
    fn one() -> Self {
        Self::from_rational(Rational::one())
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Panics when the operands come from different quadratic fields.
impl Ord for QuadSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd {
            rat: -self.rat,
            coef: -self.coef,
            rad: self.rad,
        }
    }
}

impl Neg for &QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        -self.clone()
    }
}

impl<'a> Add<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    fn add(self, rhs: &QuadSurd) -> QuadSurd {
        let s = self.field_of(rhs);
        QuadSurd::assemble(&self.rat + &rhs.rat, &self.coef + &rhs.coef, s)
    }
}

impl<'a> Sub<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    fn sub(self, rhs: &QuadSurd) -> QuadSurd {
        let s = self.field_of(rhs);
        QuadSurd::assemble(&self.rat - &rhs.rat, &self.coef - &rhs.coef, s)
    }
}

impl<'a> Mul<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    fn mul(self, rhs: &QuadSurd) -> QuadSurd {
        let s = self.field_of(rhs);
        if s == 0 {
            return QuadSurd::from_rational(&self.rat * &rhs.rat);
        }
        let rat = &self.rat * &rhs.rat + &self.coef * &rhs.coef * int(s as i64);
        let coef = &self.rat * &rhs.coef + &self.coef * &rhs.rat;
        QuadSurd::assemble(rat, coef, s)
    }
}

/// Panics on division by zero, like the integer operators.
impl<'a> Div<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    fn div(self, rhs: &QuadSurd) -> QuadSurd {
        self.field_of(rhs);
        if rhs.is_rational() {
            let r = &rhs.rat;
            assert!(!r.is_zero(), "division by zero");
            return QuadSurd::assemble(&self.rat / r, &self.coef / r, self.rad);
        }
        let inv = rhs.checked_inv().expect("division by zero");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<QuadSurd> for QuadSurd {
            type Output = QuadSurd;
            fn $method(self, rhs: QuadSurd) -> QuadSurd {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a QuadSurd> for QuadSurd {
            type Output = QuadSurd;
            fn $method(self, rhs: &QuadSurd) -> QuadSurd {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<QuadSurd> for &'a QuadSurd {
            type Output = QuadSurd;
            fn $method(self, rhs: QuadSurd) -> QuadSurd {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&QuadSurd> for QuadSurd {
    fn add_assign(&mut self, rhs: &QuadSurd) {
        *self = &*self + rhs;
    }
}

impl AddAssign for QuadSurd {
    fn add_assign(&mut self, rhs: QuadSurd) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&QuadSurd> for QuadSurd {
    fn sub_assign(&mut self, rhs: &QuadSurd) {
        *self = &*self - rhs;
    }
}

impl SubAssign for QuadSurd {
    fn sub_assign(&mut self, rhs: QuadSurd) {
        *self = &*self - &rhs;
    }
}

impl MulAssign<&QuadSurd> for QuadSurd {
    fn mul_assign(&mut self, rhs: &QuadSurd) {
        *self = &*self * rhs;
    }
}

/// Radicand shared by every value, 0 if all are rational.
pub fn common_radicand<'a>(values: impl IntoIterator<Item = &'a QuadSurd>) -> Result<u64> {
    let mut rad = 0;
    for v in values {
        if v.rad != 0 {
            if rad != 0 && rad != v.rad {
                return Err(Error::MixedRadicands(rad, v.rad));
            }
            rad = v.rad;
        }
    }
    Ok(rad)
}

/// Exact sign of `x`, returned as -1, 0 or +1.
pub fn surd_sign(x: &QuadSurd) -> i8 {
    x.signum()
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}
