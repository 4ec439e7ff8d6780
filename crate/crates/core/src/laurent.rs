//! Finite Laurent polynomials `f(z) = Σ_{n=k1}^{k2} f[n] z^{-n}`.
//!
//! The exponent convention follows the filter literature: the stored index `n`
//! is the *delay*, so `min_exp = k1` is the smallest delay and the polynomial
//! `¼z + ½ + ¼z⁻¹` has `min_exp = -1` and coefficients `[¼, ½, ¼]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<T> {
    min_exp: i64,
    coeffs: Vec<T>,
}

impl<T: Scalar> LaurentPoly<T> {
    /// Builds `Σ coeffs[i] z^{-(min_exp + i)}` in canonical form.
    pub fn new(min_exp: i64, coeffs: Vec<T>) -> Self {
        let mut p = Self { min_exp, coeffs };
        p.trim_by(|c| c.is_zero());
        p
    }

    pub fn zero() -> Self {
        Self { min_exp: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(0, vec![c])
    }

    /// `c · z^{-delay}`.
    pub fn monomial(c: T, delay: i64) -> Self {
        Self::new(delay, vec![c])
    }

    /// Sum of `c · z^{-delay}` terms; repeated delays accumulate.
    pub fn from_terms(terms: &[(i64, T)]) -> Self {
        terms.iter().fold(Self::zero(), |acc, (d, c)| acc + Self::monomial(c.clone(), *d))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent span `k2 - k1`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        (!self.is_zero()).then(|| self.coeffs.len() - 1)
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn max_exp(&self) -> i64 {
        self.min_exp + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `z^{-delay}`.
    pub fn coeff(&self, delay: i64) -> T {
        let i = delay - self.min_exp;
        if i < 0 || i as usize >= self.coeffs.len() {
            T::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Non-zero `(delay, coefficient)` pairs in increasing delay.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    /// `Some((c, d))` when the polynomial is `c·z^{-d}` with `c != 0`.
    pub fn as_monomial(&self) -> Option<(T, i64)> {
        (self.coeffs.len() == 1).then(|| (self.coeffs[0].clone(), self.min_exp))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.min_exp, self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Multiplication by `z^{-d}`.
    pub fn delay(&self, d: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { min_exp: self.min_exp + d, coeffs: self.coeffs.clone() }
    }

    /// `f(z) -> f(z^{-1})`.
    pub fn reflect(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { min_exp: -self.max_exp(), coeffs }
    }

    /// `f(z) -> f(-z)`.
    pub fn alternate(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if (self.min_exp + i as i64).rem_euclid(2) == 1 { -c.clone() } else { c.clone() })
            .collect();
        Self::new(self.min_exp, coeffs)
    }

    /// `f(z) -> f(z^2)`.
    pub fn upsample(&self) -> Self {
        let mut coeffs = vec![T::zero(); 2 * self.coeffs.len().max(1) - 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = c.clone();
        }
        Self::new(2 * self.min_exp, coeffs)
    }

    /// Polyphase components with `f(z) = even(z²) + z⁻¹·odd(z²)`, where `even`
    /// collects the coefficients at even delays and `odd` those at odd delays.
    pub fn split(&self) -> (Self, Self) {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for (d, c) in self.terms() {
            if d.rem_euclid(2) == 0 {
                even.push((d.div_euclid(2), c.clone()));
            } else {
                odd.push(((d - 1).div_euclid(2), c.clone()));
            }
        }
        (Self::from_terms(&even), Self::from_terms(&odd))
    }

    /// Inverse of [`split`](Self::split).
    pub fn merge(even: &Self, odd: &Self) -> Self {
        even.upsample() + odd.upsample().delay(1)
    }

    /// Drops leading/trailing coefficients that [`Scalar::is_negligible`] treats as zero.
    pub fn cleaned(&self) -> Self {
        let mut p = self.clone();
        p.trim_by(|c| c.is_negligible());
        p
    }

    /// If every non-zero coefficient equals the same value `c`, returns it.
    /// Such a step can be evaluated as `c · (sum of taps)`.
    pub fn uniform_coefficient(&self) -> Option<T> {
        let mut it = self.terms().map(|(_, c)| c);
        let first = it.next()?;
        it.all(|c| c == first).then(|| first.clone())
    }

    /// Division with remainder: `self = q·b + r` with `degree(r) < degree(b)`.
    ///
    /// Laurent division is not unique; this one places the remainder window in
    /// the middle of the dividend's span, cancelling quotient terms from both
    /// ends. For symmetric filters this yields the symmetric lifting factors.
    pub fn div_rem(&self, b: &Self) -> Result<(Self, Self)> {
        if b.is_zero() {
            return Err(Error::Algebra("division by the zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok((Self::zero(), Self::zero()));
        }
        let m = self.coeffs.len() - 1;
        let n = b.coeffs.len() - 1;
        if m < n {
            return Ok((Self::zero(), self.clone()));
        }
        let bc = &b.coeffs;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); m - n + 1];
        let low = (m - n).div_ceil(2);
        for k in 0..low {
            let c = rem[k].clone() / bc[0].clone();
            for (i, bi) in bc.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - c.clone() * bi.clone();
            }
            rem[k] = T::zero();
            quot[k] = c;
        }
        for k in (low..=m - n).rev() {
            let c = rem[k + n].clone() / bc[n].clone();
            for (i, bi) in bc.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - c.clone() * bi.clone();
            }
            rem[k + n] = T::zero();
            quot[k] = c;
        }
        let q = Self::new(self.min_exp - b.min_exp, quot);
        let r = Self::new(self.min_exp, rem);
        Ok((q, r))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LaurentPoly<U> {
        LaurentPoly::new(self.min_exp, self.coeffs.iter().map(f).collect())
    }

    pub fn to_f64(&self) -> LaurentPoly<f64> {
        self.map(|c| c.to_f64())
    }

    /// Largest coefficient magnitude, as `f64`.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Plain-text form `k1 c0 c1 ... cN`.
    pub fn to_text(&self) -> String {
        let mut s = self.min_exp.to_string();
        for c in &self.coeffs {
            s.push(' ');
            s.push_str(&c.to_string());
        }
        s
    }

    pub fn parse_text(s: &str) -> Result<Self> {
        let mut fields = s.split_whitespace();
        let k1 = fields
            .next()
            .ok_or_else(|| Error::Parse("empty polynomial".into()))?
            .parse::<i64>()
            .map_err(|e| Error::Parse(format!("bad exponent: {e}")))?;
        let coeffs = fields
            .map(|f| T::parse_text(f).ok_or_else(|| Error::Parse(format!("bad coefficient {f:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(k1, coeffs))
    }

    fn trim_by(&mut self, is_zero: impl Fn(&T) -> bool) {
        let Some(first) = self.coeffs.iter().position(|c| !is_zero(c)) else {
            self.coeffs.clear();
            self.min_exp = 0;
            return;
        };
        let last = self.coeffs.iter().rposition(|c| !is_zero(c)).unwrap();
        self.coeffs.truncate(last + 1);
        self.coeffs.drain(..first);
        self.min_exp += first as i64;
    }
}

impl<T: Scalar> fmt::Display for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match -d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·z")?,
                p => write!(f, "{c}·z^{p}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> Add for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn add(self, rhs: Self) -> LaurentPoly<T> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.min_exp.min(rhs.min_exp);
        let hi = self.max_exp().max(rhs.max_exp());
        let coeffs = (lo..=hi).map(|d| self.coeff(d) + rhs.coeff(d)).collect();
        LaurentPoly::new(lo, coeffs)
    }
}

impl<T: Scalar> Sub for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn sub(self, rhs: Self) -> LaurentPoly<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn neg(self) -> LaurentPoly<T> {
        LaurentPoly { min_exp: self.min_exp, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<T: Scalar> Mul for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn mul(self, rhs: Self) -> LaurentPoly<T> {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        LaurentPoly::new(self.min_exp + rhs.min_exp, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for LaurentPoly<T> {
            type Output = LaurentPoly<T>;
            fn $m(self, rhs: Self) -> LaurentPoly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn neg(self) -> LaurentPoly<T> {
        -&self
    }
}
