//! Coefficient fields for filters and transforms.
//!
//! Every polynomial, polyphase matrix and lifting transform in this crate is
//! generic over [`Scalar`]. Three fields are provided:
//!
//! - `f64`, used for the causal Daubechies-4 bank (its coefficients involve √3)
//!   and for radar-scale floating-point runs;
//! - [`Rational`], exact arbitrary-precision fractions, enough for LeGall 5/3;
//! - [`QSqrt2`], the quadratic field Q(√2), which holds the 9/7 scale factor
//!   ζ = 4√2/5 exactly so analysis and dual-analysis scale pairs cancel without
//!   rounding.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Absolute threshold below which a floating-point coefficient is treated as zero
/// by algorithms that need a zero test (Euclidean division, monomial checks).
pub const FLOAT_NEGLIGIBLE: f64 = 1e-12;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic in this field is exact.
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Square root inside the field, if it exists there.
    fn sqrt(&self) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Zero test used by algorithms that branch on zero coefficients.
    fn is_negligible(&self) -> bool;

    /// `±1`: multiplying by it costs no multiplication.
    fn is_unit(&self) -> bool {
        *self == Self::one() || *self == -Self::one()
    }

    /// `±2^k` with `k != 0`: realizable as a bit shift in integer hardware.
    fn is_shift(&self) -> bool;

    fn parse_text(s: &str) -> Option<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= FLOAT_NEGLIGIBLE
    }

    fn is_unit(&self) -> bool {
        self.abs() == 1.0
    }

    fn is_shift(&self) -> bool {
        let a = self.abs();
        a != 0.0 && a != 1.0 && a.is_finite() && a.log2().fract() == 0.0
    }

    fn parse_text(s: &str) -> Option<Self> {
        if let Some(r) = parse_rational(s) {
            return ToPrimitive::to_f64(&r);
        }
        s.trim().parse().ok()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn sqrt(&self) -> Option<Self> {
        rational_sqrt(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn is_shift(&self) -> bool {
        rational_is_shift(self)
    }

    fn parse_text(s: &str) -> Option<Self> {
        parse_rational(s)
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    Rational::from_str(s.trim()).ok()
}

fn is_power_of_two(n: &BigInt) -> bool {
    let n = n.abs();
    n > BigInt::zero() && (&n & (&n - BigInt::one())).is_zero()
}

fn rational_is_shift(r: &Rational) -> bool {
    !r.is_zero() && !r.abs().is_one() && is_power_of_two(r.numer()) && is_power_of_two(r.denom())
}

fn bigint_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    let n = bigint_sqrt(r.numer())?;
    let d = bigint_sqrt(r.denom())?;
    Some(Rational::new(n, d))
}

/// An element `rat + surd·√2` of Q(√2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    pub rat: Rational,
    pub surd: Rational,
}

impl QSqrt2 {
    pub fn new(rat: Rational, surd: Rational) -> Self {
        Self { rat, surd }
    }

    pub fn sqrt2() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    /// The rational part when the surd vanishes.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.surd.is_zero().then_some(&self.rat)
    }

    /// `rat² - 2·surd²`; nonzero for every nonzero element.
    pub fn norm(&self) -> Rational {
        &self.rat * &self.rat - Rational::from_integer(2.into()) * &self.surd * &self.surd
    }

    fn conjugate(&self) -> Self {
        Self::new(self.rat.clone(), -self.surd.clone())
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.surd.is_zero()) {
            (_, true) => write!(f, "{}", self.rat),
            (true, false) => write!(f, "{}*sqrt2", self.surd),
            (false, false) if self.surd.is_negative() => {
                write!(f, "{}-{}*sqrt2", self.rat, -self.surd.clone())
            }
            (false, false) => write!(f, "{}+{}*sqrt2", self.rat, self.surd),
        }
    }
}

impl Zero for QSqrt2 {
    fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.surd.is_zero()
    }
}

impl One for QSqrt2 {
    fn one() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }
}

impl Add for QSqrt2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.rat + rhs.rat, self.surd + rhs.surd)
    }
}

impl Sub for QSqrt2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.rat - rhs.rat, self.surd - rhs.surd)
    }
}

impl Mul for QSqrt2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let two = Rational::from_integer(2.into());
        let rat = &self.rat * &rhs.rat + two * &self.surd * &rhs.surd;
        let surd = &self.rat * &rhs.surd + &self.surd * &rhs.rat;
        Self::new(rat, surd)
    }
}

impl Div for QSqrt2 {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let norm = rhs.norm();
        assert!(!norm.is_zero(), "division by zero in Q(sqrt2)");
        let num = self * rhs.conjugate();
        Self::new(num.rat / &norm, num.surd / &norm)
    }
}

impl Neg for QSqrt2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.rat, -self.surd)
    }
}

impl Scalar for QSqrt2 {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        Self::new(r.clone(), Rational::zero())
    }

    fn sqrt(&self) -> Option<Self> {
        let r = self.as_rational()?;
        if let Some(s) = rational_sqrt(r) {
            return Some(Self::from_rational(&s));
        }
        let half = r / Rational::from_integer(2.into());
        rational_sqrt(&half).map(|s| Self::new(Rational::zero(), s))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(&self.rat).unwrap_or(f64::NAN)
            + ToPrimitive::to_f64(&self.surd).unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn is_shift(&self) -> bool {
        self.as_rational().is_some_and(rational_is_shift)
    }

    fn parse_text(s: &str) -> Option<Self> {
        let s = s.trim();
        let Some(body) = s.strip_suffix("*sqrt2") else {
            return parse_rational(s).map(|r| Self::from_rational(&r));
        };
        let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
        match split {
            None => Some(Self::new(Rational::zero(), parse_rational(body)?)),
            Some(i) => {
                let rat = parse_rational(&body[..i])?;
                let surd = parse_rational(body[i..].trim_start_matches('+'))?;
                Some(Self::new(rat, surd))
            }
        }
    }
}
