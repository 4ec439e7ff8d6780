//! Two-channel filterbanks and their polyphase matrices.
//!
//! Conventions used throughout:
//!
//! - A signal splits as `x(z) = x_e(z²) + z⁻¹ x_o(z²)` with `x_e[n] = x[2n]`,
//!   `x_o[n] = x[2n+1]`.
//! - The analysis matrix `P̃(z⁻¹)` maps `[x_e; x_o]` to `[ã; b̃]`; its rows are
//!   the reflected phases of the analysis filters `h̃(z)`, `g̃(z)`.
//! - The synthesis matrix `P(z) = [h_e g_e; h_o g_o]` has the phases of the
//!   synthesis filters in its columns.
//! - The dual-analysis matrix is `Pᵀ(z⁻¹)`: the synthesis matrix transposed and
//!   reflected. Analyzing `x` with `P̃(z⁻¹)` and `y` with `Pᵀ(z⁻¹)` preserves
//!   their inner product coefficient by coefficient.

use std::fmt;
use std::str::FromStr;

use num_traits::One;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Daubechies-4 orthogonal bank in its causal (delayed-highpass) form.
    Daub4Causal,
    /// LeGall / Tabatabai 5/3 spline biorthogonal bank.
    LeGall53,
    /// CDF 9/7 with rational lifting parameters.
    Cdf97,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Daub4Causal, Family::LeGall53, Family::Cdf97];

    pub fn name(self) -> &'static str {
        match self {
            Family::Daub4Causal => "daub4",
            Family::LeGall53 => "legall53",
            Family::Cdf97 => "cdf97",
        }
    }

    /// Polyphase delay `d` of perfect reconstruction: synthesis after analysis
    /// is `z^{-d}·I`, i.e. a `2d`-sample delay of the signal.
    pub fn reconstruction_delay(self) -> i64 {
        match self {
            Family::Daub4Causal => 1,
            _ => 0,
        }
    }

    pub fn is_orthogonal(self) -> bool {
        self == Family::Daub4Causal
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "daub4" | "daub4_causal" | "db4" => Ok(Family::Daub4Causal),
            "legall53" | "legall" | "5/3" | "53" => Ok(Family::LeGall53),
            "cdf97" | "9/7" | "97" => Ok(Family::Cdf97),
            other => Err(Error::Parameter(format!("unknown filter family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Analysis,
    DualAnalysis,
    Synthesis,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Analysis => "analysis",
            Role::DualAnalysis => "dual_analysis",
            Role::Synthesis => "synthesis",
        })
    }
}

/// Rational lifting parameters of the 9/7 bank, generated from a free variable `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cdf97Params {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    /// ζ² = 2/t². ζ itself is irrational for the tabulated `t` and is only
    /// materialized inside a field that contains it.
    pub zeta_squared: Rational,
}

impl Cdf97Params {
    pub fn from_free_variable(t: &Rational) -> Result<Self> {
        let lo = Rational::new(780.into(), 1000.into());
        let hi = Rational::new(1852.into(), 1000.into());
        if *t <= lo || *t >= hi || t.is_one() {
            return Err(Error::Parameter(format!(
                "free variable t = {t} must lie in (0.780, 1.852) and differ from 1"
            )));
        }
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        let one = Rational::one();
        let tm1 = t - &one;
        let alpha = (-r(2, 1) * t + &one) / (r(4, 1) * &tm1);
        let beta = -(&tm1 * &tm1);
        let gamma = one.clone() / (r(4, 1) * t * &tm1);
        let delta = t * t * t - r(7, 4) * t * t + t;
        let zeta_squared = r(2, 1) / (t * t);
        Ok(Self { alpha, beta, gamma, delta, zeta_squared })
    }

    /// The tabulated parameters at `t = 5/4`.
    pub fn table() -> Self {
        Self::from_free_variable(&Rational::new(5.into(), 4.into())).expect("t = 5/4 lies inside the admissible range")
    }

    pub fn zeta<T: Scalar>(&self) -> Result<T> {
        T::from_rational(&self.zeta_squared)
            .sqrt()
            .ok_or_else(|| Error::Parameter("scale factor ζ is not representable in this field".into()))
    }
}

/// A 2×2 matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyphaseMatrix<T> {
    pub entries: [[LaurentPoly<T>; 2]; 2],
    /// Which filterbank stage the matrix realizes; `None` for products and
    /// intermediate factors.
    pub role: Option<Role>,
}

impl<T: Scalar> PolyphaseMatrix<T> {
    pub fn new(entries: [[LaurentPoly<T>; 2]; 2]) -> Self {
        Self { entries, role: None }
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = Some(role);
        self
    }

    pub fn identity() -> Self {
        Self::diagonal(LaurentPoly::one(), LaurentPoly::one())
    }

    pub fn diagonal(a: LaurentPoly<T>, b: LaurentPoly<T>) -> Self {
        Self::new([[a, LaurentPoly::zero()], [LaurentPoly::zero(), b]])
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly<T> {
        &self.entries[r][c]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let e = |r: usize, c: usize| {
            &(&self.entries[r][0] * &rhs.entries[0][c]) + &(&self.entries[r][1] * &rhs.entries[1][c])
        };
        Self::new([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let e = |r: usize, c: usize| &self.entries[r][c] - &rhs.entries[r][c];
        Self::new([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn map_entries(&self, f: impl Fn(&LaurentPoly<T>) -> LaurentPoly<T>) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        Self::new([[f(a), f(b)], [f(c), f(d)]])
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.entries.clone();
        Self::new([[a, c], [b, d]])
    }

    /// Entrywise `z -> z⁻¹`.
    pub fn reflect(&self) -> Self {
        self.map_entries(LaurentPoly::reflect)
    }

    /// Multiplies every entry by `z^{-d}`.
    pub fn delay(&self, d: i64) -> Self {
        self.map_entries(|p| p.delay(d))
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map_entries(|p| p.scale(c))
    }

    pub fn det(&self) -> LaurentPoly<T> {
        let [[a, b], [c, d]] = &self.entries;
        &(a * d) - &(b * c)
    }

    /// `(c, d)` when the determinant is the monomial `c·z^{-d}`.
    pub fn det_monomial(&self) -> Option<(T, i64)> {
        self.det().cleaned().as_monomial()
    }

    /// Exact inverse, available when the determinant is a monomial.
    pub fn inverse(&self) -> Result<Self> {
        let (c, d) = self.det_monomial().ok_or_else(|| Error::Algebra("determinant is not a monomial".into()))?;
        let inv_det = LaurentPoly::monomial(T::one() / c, -d);
        let [[a, b], [cc, dd]] = &self.entries;
        let adj = Self::new([[dd.clone(), -b], [-cc, a.clone()]]);
        Ok(adj.map_entries(|p| p * &inv_det))
    }

    pub fn cleaned(&self) -> Self {
        let mut m = self.map_entries(LaurentPoly::cleaned);
        m.role = self.role;
        m
    }

    pub fn to_f64(&self) -> PolyphaseMatrix<f64> {
        let [[a, b], [c, d]] = &self.entries;
        PolyphaseMatrix { entries: [[a.to_f64(), b.to_f64()], [c.to_f64(), d.to_f64()]], role: self.role }
    }

    /// Largest coefficient magnitude over all entries.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().map(LaurentPoly::max_abs).fold(0.0, f64::max)
    }

    /// Largest coefficient difference to `other`, as `f64`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.to_f64().sub(&other.to_f64()).max_abs()
    }
}

impl<T: Scalar> fmt::Display for PolyphaseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.entries;
        writeln!(f, "[ {a} ,  {b} ]")?;
        write!(f, "[ {c} ,  {d} ]")
    }
}

/// `g̃(z) = z⁻¹ h(−z⁻¹)` and the inverse of `h̃(z) = −z⁻¹ g(−z⁻¹)`, which is
/// `g(z) = z⁻¹ h̃(−z⁻¹)`.
///
/// Inputs and outputs use the stored forms: `h_tilde` and the returned
/// `g_tilde` are the reflected analysis polynomials `h̃(z⁻¹)`, `g̃(z⁻¹)`;
/// `h` and the returned `g` are synthesis polynomials in `z`.
pub fn derive_highpass<T: Scalar>(h_tilde: &LaurentPoly<T>, h: &LaurentPoly<T>) -> (LaurentPoly<T>, LaurentPoly<T>) {
    let g_tilde_z = h.reflect().alternate().delay(1);
    let g = h_tilde.alternate().delay(1);
    (g_tilde_z.reflect(), g)
}

/// Even and odd polyphase components, `f(z) = even(z²) + z⁻¹ odd(z²)`.
pub fn polyphase_split<T: Scalar>(f: &LaurentPoly<T>) -> (LaurentPoly<T>, LaurentPoly<T>) {
    f.split()
}

/// The four filters of a two-channel bank.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterQuadruple<T> {
    pub family: Family,
    /// Analysis lowpass, stored as `h̃(z⁻¹)`.
    pub h_tilde: LaurentPoly<T>,
    /// Analysis highpass, stored as `g̃(z⁻¹)`.
    pub g_tilde: LaurentPoly<T>,
    /// Synthesis lowpass `h(z)`.
    pub h: LaurentPoly<T>,
    /// Synthesis highpass `g(z)`.
    pub g: LaurentPoly<T>,
    /// Power of `z` applied to the odd-phase column of the analysis matrix.
    /// The causal Daub4 listing takes its phases directly from `h̃(z⁻¹)`,
    /// which puts the odd phase one polyphase sample ahead of the reflected
    /// convention used for the symmetric banks.
    pub analysis_odd_lead: i64,
    /// Factor applied to `P(z)` so that `P̃(z⁻¹)·P(z) = z^{-d}·I`.
    pub synthesis_gain: T,
}

impl<T: Scalar> FilterQuadruple<T> {
    pub fn for_family(family: Family) -> Result<Self> {
        match family {
            Family::LeGall53 => Ok(Self::legall53()),
            Family::Cdf97 => Self::cdf97(&Cdf97Params::table()),
            Family::Daub4Causal => Self::daub4_causal(),
        }
    }

    pub fn legall53() -> Self {
        let r = T::ratio;
        let h_tilde = LaurentPoly::new(-2, vec![r(-1, 8), r(1, 4), r(3, 4), r(1, 4), r(-1, 8)]);
        let h = LaurentPoly::new(-1, vec![r(1, 4), r(1, 2), r(1, 4)]);
        let (g_tilde, g) = derive_highpass(&h_tilde, &h);
        Self { family: Family::LeGall53, h_tilde, g_tilde, h, g, analysis_odd_lead: 0, synthesis_gain: T::from_i64(2) }
    }

    /// The 9/7 bank obtained by multiplying out its lifting factorization.
    pub fn cdf97(params: &Cdf97Params) -> Result<Self> {
        let analysis = cdf97_analysis_product::<T>(params)?;
        let row_filter = |r: usize| {
            // entries are reflect(even), reflect(odd) of f(z); rebuild f(z⁻¹)
            let even = analysis.entries[r][0].reflect();
            let odd = analysis.entries[r][1].reflect();
            LaurentPoly::merge(&even, &odd).reflect()
        };
        let synthesis = analysis.inverse()?;
        let col_filter = |c: usize| LaurentPoly::merge(&synthesis.entries[0][c], &synthesis.entries[1][c]);
        Ok(Self {
            family: Family::Cdf97,
            h_tilde: row_filter(0),
            g_tilde: row_filter(1),
            h: col_filter(0),
            g: col_filter(1),
            analysis_odd_lead: 0,
            synthesis_gain: T::one(),
        })
    }

    /// Causal Daubechies-4. Needs √3, so only floating-point fields qualify.
    pub fn daub4_causal() -> Result<Self> {
        let [h0, h1, h2, h3] = daub4_coefficients::<T>()?;
        let h_tilde = LaurentPoly::new(0, vec![h0.clone(), h1.clone(), h2.clone(), h3.clone()]);
        let g_tilde = LaurentPoly::new(0, vec![-h3.clone(), h2.clone(), -h1.clone(), h0.clone()]);
        let mut quad = Self {
            family: Family::Daub4Causal,
            h_tilde,
            g_tilde,
            h: LaurentPoly::zero(),
            g: LaurentPoly::zero(),
            analysis_odd_lead: 1,
            synthesis_gain: T::one(),
        };
        // orthogonal: P(z) = z⁻¹ P̃(z)ᵀ, the delayed para-adjoint of the analysis matrix
        let synthesis = quad.analysis_matrix().transpose().reflect().delay(1);
        quad.h = LaurentPoly::merge(&synthesis.entries[0][0], &synthesis.entries[1][0]);
        quad.g = LaurentPoly::merge(&synthesis.entries[0][1], &synthesis.entries[1][1]);
        Ok(quad)
    }

    fn analysis_row(&self, stored: &LaurentPoly<T>) -> [LaurentPoly<T>; 2] {
        let (even, odd) = stored.reflect().split();
        [even.reflect(), odd.reflect().delay(-self.analysis_odd_lead)]
    }

    pub fn analysis_matrix(&self) -> PolyphaseMatrix<T> {
        PolyphaseMatrix::new([self.analysis_row(&self.h_tilde), self.analysis_row(&self.g_tilde)])
            .with_role(Role::Analysis)
    }

    /// `P(z)` without the normalizing gain, exactly as the filters define it.
    pub fn synthesis_matrix_unscaled(&self) -> PolyphaseMatrix<T> {
        let (he, ho) = self.h.split();
        let (ge, go) = self.g.split();
        PolyphaseMatrix::new([[he, ge], [ho, go]]).with_role(Role::Synthesis)
    }

    pub fn synthesis_matrix(&self) -> PolyphaseMatrix<T> {
        self.synthesis_matrix_unscaled().scale(&self.synthesis_gain).with_role(Role::Synthesis)
    }

    /// `Pᵀ(z⁻¹)`, advanced by the reconstruction delay so that orthogonal banks
    /// analyze both signals with the same matrix.
    pub fn dual_analysis_matrix(&self) -> PolyphaseMatrix<T> {
        self.synthesis_matrix()
            .transpose()
            .reflect()
            .delay(self.family.reconstruction_delay())
            .with_role(Role::DualAnalysis)
    }

    /// Plain-text form: one `name k1 c0 c1 ... cN` line per filter.
    pub fn to_text(&self) -> String {
        format!(
            "# family {}\nh_tilde {}\nh {}\ng_tilde {}\ng {}\n",
            self.family,
            self.h_tilde.to_text(),
            self.h.to_text(),
            self.g_tilde.to_text(),
            self.g.to_text()
        )
    }

    /// Parses [`to_text`](Self::to_text) output. Structural fields not carried
    /// by the text (phase lead, gain) are taken from the named family.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut family = None;
        let mut filters: [Option<LaurentPoly<T>>; 4] = Default::default();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(name) = rest.trim().strip_prefix("family") {
                    family = Some(name.parse::<Family>()?);
                }
                continue;
            }
            let (name, poly) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let slot = match name {
                "h_tilde" => 0,
                "h" => 1,
                "g_tilde" => 2,
                "g" => 3,
                other => return Err(Error::Parse(format!("unknown filter name {other:?}"))),
            };
            filters[slot] = Some(LaurentPoly::parse_text(poly)?);
        }
        let family = family.ok_or_else(|| Error::Parse("missing '# family' line".into()))?;
        let [h_tilde, h, g_tilde, g] = filters;
        let missing = || Error::Parse("missing filter line".into());
        let (analysis_odd_lead, synthesis_gain) = match family {
            Family::Daub4Causal => (1, T::one()),
            Family::LeGall53 => (0, T::from_i64(2)),
            Family::Cdf97 => (0, T::one()),
        };
        Ok(Self {
            family,
            h_tilde: h_tilde.ok_or_else(missing)?,
            h: h.ok_or_else(missing)?,
            g_tilde: g_tilde.ok_or_else(missing)?,
            g: g.ok_or_else(missing)?,
            analysis_odd_lead,
            synthesis_gain,
        })
    }
}

/// `[h0, h1, h2, h3] = (1+√3, 3+√3, 3−√3, 1−√3) / (4√2)`.
pub fn daub4_coefficients<T: Scalar>() -> Result<[T; 4]> {
    let sqrt3 = T::from_i64(3)
        .sqrt()
        .ok_or_else(|| Error::NotImplemented("daub4 needs √3; use a floating-point field".into()))?;
    let sqrt2 = T::from_i64(2)
        .sqrt()
        .ok_or_else(|| Error::NotImplemented("daub4 needs √2; use a floating-point field".into()))?;
    let den = T::from_i64(4) * sqrt2;
    let one = T::one();
    let three = T::from_i64(3);
    Ok([
        (one.clone() + sqrt3.clone()) / den.clone(),
        (three.clone() + sqrt3.clone()) / den.clone(),
        (three - sqrt3.clone()) / den.clone(),
        (one - sqrt3) / den,
    ])
}

/// `diag(ζ, 1/ζ)·U(δ(1+z⁻¹))·L(γ(1+z))·U(β(1+z⁻¹))·L(α(1+z))`.
fn cdf97_analysis_product<T: Scalar>(p: &Cdf97Params) -> Result<PolyphaseMatrix<T>> {
    let zeta: T = p.zeta()?;
    let fwd = |c: &Rational| LaurentPoly::new(-1, vec![T::from_rational(c), T::from_rational(c)]);
    let back = |c: &Rational| LaurentPoly::new(0, vec![T::from_rational(c), T::from_rational(c)]);
    let lower =
        |q: LaurentPoly<T>| PolyphaseMatrix::new([[LaurentPoly::one(), LaurentPoly::zero()], [q, LaurentPoly::one()]]);
    let upper =
        |q: LaurentPoly<T>| PolyphaseMatrix::new([[LaurentPoly::one(), q], [LaurentPoly::zero(), LaurentPoly::one()]]);
    let scale = PolyphaseMatrix::diagonal(LaurentPoly::constant(zeta.clone()), LaurentPoly::constant(T::one() / zeta));
    Ok(scale
        .mul(&upper(back(&p.delta)))
        .mul(&lower(fwd(&p.gamma)))
        .mul(&upper(back(&p.beta)))
        .mul(&lower(fwd(&p.alpha))))
}

/// Polyphase matrix of `family` in the given role.
pub fn build_polyphase<T: Scalar>(quad: &FilterQuadruple<T>, role: Role) -> PolyphaseMatrix<T> {
    match role {
        Role::Analysis => quad.analysis_matrix(),
        Role::Synthesis => quad.synthesis_matrix(),
        Role::DualAnalysis => quad.dual_analysis_matrix(),
    }
}

/// Scale and delay of a monomial-identity product `A·B = c·z^{-d}·I`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialIdentity<T> {
    pub scale: T,
    pub delay: i64,
}

/// Checks that `A·B` is a scaled monomial identity and returns `(c, d)`.
///
/// Exact fields compare exactly; `f64` entries are compared with the
/// [`FLOAT_NEGLIGIBLE`](crate::scalar::FLOAT_NEGLIGIBLE) coefficient tolerance.
pub fn paraunitary_product<T: Scalar>(a: &PolyphaseMatrix<T>, b: &PolyphaseMatrix<T>) -> Result<MonomialIdentity<T>> {
    let prod = a.mul(b);
    let violation = |prod: &PolyphaseMatrix<T>, expect: &PolyphaseMatrix<T>| Error::Paraunitary {
        residual: prod.sub(expect).cleaned().to_string(),
    };
    let Some((c, d)) = prod.entries[0][0].cleaned().as_monomial() else {
        return Err(violation(&prod, &PolyphaseMatrix::identity()));
    };
    let expect = PolyphaseMatrix::identity().scale(&c).delay(d);
    let residual = prod.sub(&expect).cleaned();
    if residual.entries.iter().flatten().all(LaurentPoly::is_zero) {
        Ok(MonomialIdentity { scale: c, delay: d })
    } else {
        Err(violation(&prod, &expect))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QSqrt2;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn rpoly(k1: i64, c: &[(i64, i64)]) -> LaurentPoly<Rational> {
        LaurentPoly::new(k1, c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn legall_highpass_matches_listing() {
        let quad = FilterQuadruple::<Rational>::legall53();
        // g̃(z⁻¹) = −¼z² + ½z − ¼
        assert_eq!(quad.g_tilde, rpoly(-2, &[(-1, 4), (1, 2), (-1, 4)]));
        // g(z) = −⅛z − ¼ + ¾z⁻¹ − ¼z⁻² − ⅛z⁻³
        assert_eq!(quad.g, rpoly(-1, &[(-1, 8), (-1, 4), (3, 4), (-1, 4), (-1, 8)]));
    }

    #[test]
    fn legall_analysis_matrix_matches_factorized_form() {
        let a = FilterQuadruple::<Rational>::legall53().analysis_matrix();
        let lower = PolyphaseMatrix::new([
            [LaurentPoly::one(), LaurentPoly::zero()],
            [rpoly(-1, &[(-1, 2), (-1, 2)]), LaurentPoly::one()],
        ]);
        let upper = PolyphaseMatrix::new([
            [LaurentPoly::one(), rpoly(0, &[(1, 4), (1, 4)])],
            [LaurentPoly::zero(), LaurentPoly::one()],
        ]);
        let scale = PolyphaseMatrix::diagonal(LaurentPoly::one(), rpoly(0, &[(1, 2)]));
        let expected = scale.mul(&upper).mul(&lower);
        assert_eq!(a.entries, expected.entries);
    }

    #[test]
    fn legall_unscaled_product_is_half_identity() {
        let quad = FilterQuadruple::<Rational>::legall53();
        let id = paraunitary_product(&quad.analysis_matrix(), &quad.synthesis_matrix_unscaled()).unwrap();
        assert_eq!(id, MonomialIdentity { scale: q(1, 2), delay: 0 });
        let id = paraunitary_product(&quad.analysis_matrix(), &quad.synthesis_matrix()).unwrap();
        assert_eq!(id, MonomialIdentity { scale: q(1, 1), delay: 0 });
    }

    #[test]
    fn entry_identities_hold_for_biorthogonal_banks() {
        fn check<T: Scalar>(quad: &FilterQuadruple<T>) {
            let (hte, hto) = quad.h_tilde.reflect().split();
            let (gte, gto) = quad.g_tilde.reflect().split();
            let (he, ho) = quad.h.split();
            let (ge, go) = quad.g.split();
            assert_eq!(hte, go.reflect());
            assert_eq!(hto, -ge.reflect());
            assert_eq!(gte, -ho.reflect());
            assert_eq!(gto, he.reflect());
        }
        check(&FilterQuadruple::<Rational>::legall53());
        check(&FilterQuadruple::<QSqrt2>::cdf97(&Cdf97Params::table()).unwrap());
    }

    #[test]
    fn cdf97_table_constants() {
        let p = Cdf97Params::table();
        assert_eq!(p.alpha, q(-3, 2));
        assert_eq!(p.beta, q(-1, 16));
        assert_eq!(p.gamma, q(4, 5));
        assert_eq!(p.delta, q(15, 32));
        assert_eq!(p.zeta_squared, q(32, 25));
        assert_eq!(p.zeta::<QSqrt2>().unwrap(), QSqrt2::new(q(0, 1), q(4, 5)));
        assert!(p.zeta::<Rational>().is_err());
    }

    #[test]
    fn cdf97_lowpass_agrees_with_printed_listing() {
        // (1/10){9/16, −6/16, −24/16, 86/16, 190/16}/√2 for n = −4..0, symmetric
        let quad = FilterQuadruple::<QSqrt2>::cdf97(&Cdf97Params::table()).unwrap();
        let half = [9, -6, -24, 86, 190];
        for (i, &num) in half.iter().enumerate() {
            // 1/(160·√2) = √2/320
            let expect = QSqrt2::new(q(0, 1), q(num, 320));
            let d = i as i64 - 4;
            assert_eq!(quad.h_tilde.coeff(d), expect);
            assert_eq!(quad.h_tilde.coeff(-d), expect);
        }
        // h[n] = {−3/64, −1/32, 19/64, 18/32}√2, n = 0..3 from the centre
        let syn = [(18, 32), (19, 64), (-1, 32), (-3, 64)];
        let centre = quad.h.min_exp() + 3;
        for (i, &(n, d)) in syn.iter().enumerate() {
            let expect = QSqrt2::new(q(0, 1), q(n, d));
            assert_eq!(quad.h.coeff(centre + i as i64), expect);
            assert_eq!(quad.h.coeff(centre - i as i64), expect);
        }
    }

    #[test]
    fn cdf97_highpass_relations_and_moments() {
        let quad = FilterQuadruple::<QSqrt2>::cdf97(&Cdf97Params::table()).unwrap();
        let (g_tilde, g) = derive_highpass(&quad.h_tilde, &quad.h);
        assert_eq!(g_tilde, quad.g_tilde);
        assert_eq!(g, quad.g);
        for k in 0..4u32 {
            let moment =
                quad.g_tilde.terms().fold(QSqrt2::zero(), |acc, (n, c)| acc + c.clone() * QSqrt2::from_i64(n.pow(k)));
            assert_eq!(moment, QSqrt2::zero(), "moment {k}");
        }
    }

    #[test]
    fn degenerate_lowpass_pair() {
        let one = LaurentPoly::<Rational>::one();
        let (g_tilde, g) = derive_highpass(&one, &one);
        // g̃(z) = z⁻¹, stored reflected
        assert_eq!(g_tilde.reflect(), LaurentPoly::monomial(q(1, 1), 1));
        assert_eq!(g, LaurentPoly::monomial(q(1, 1), 1));
        let quad = FilterQuadruple {
            family: Family::LeGall53,
            h_tilde: one.clone(),
            g_tilde,
            h: one.clone(),
            g,
            analysis_odd_lead: 0,
            synthesis_gain: q(1, 1),
        };
        let a = quad.analysis_matrix();
        assert!(a.det_monomial().is_some());
        assert_eq!(a.entries[0][1], LaurentPoly::zero());
        assert_eq!(a.entries[1][0], LaurentPoly::zero());
        let id = paraunitary_product(&a, &quad.synthesis_matrix()).unwrap();
        assert_eq!(id.scale, q(1, 1));
    }

    #[test]
    fn daub4_causal_analysis_entries() {
        let quad = FilterQuadruple::<f64>::daub4_causal().unwrap();
        let [h0, h1, h2, h3] = daub4_coefficients::<f64>().unwrap();
        let a = quad.analysis_matrix();
        let expect = PolyphaseMatrix::new([
            [LaurentPoly::new(0, vec![h0, h2]), LaurentPoly::new(0, vec![h1, h3])],
            [LaurentPoly::new(0, vec![-h3, -h1]), LaurentPoly::new(0, vec![h2, h0])],
        ]);
        assert!(a.max_abs_diff(&expect) < 1e-15);
        let (c, d) = a.det_monomial().unwrap();
        assert!((c - 1.0).abs() < 1e-12);
        assert_eq!(d, 1);
        let id = paraunitary_product(&quad.synthesis_matrix(), &a).unwrap();
        assert!((id.scale - 1.0).abs() < 1e-12);
        assert_eq!(id.delay, 1);
        // highpass is the alternating flip: g̃'(z⁻¹) = z⁻³ h̃(−z)
        let flip = quad.h_tilde.reflect().alternate().delay(3);
        assert!((&flip - &quad.g_tilde).max_abs() < 1e-15);
        assert!(FilterQuadruple::<Rational>::daub4_causal().is_err());
    }

    #[test]
    fn dual_basis_products_are_identity() {
        fn dual_identity<T: Scalar>(quad: &FilterQuadruple<T>) -> MonomialIdentity<T> {
            let a = quad.analysis_matrix();
            let d = quad.dual_analysis_matrix();
            paraunitary_product(&a.transpose().reflect(), &d).unwrap()
        }
        let id = dual_identity(&FilterQuadruple::<Rational>::legall53());
        assert_eq!((id.scale, id.delay), (q(1, 1), 0));
        let id = dual_identity(&FilterQuadruple::<QSqrt2>::cdf97(&Cdf97Params::table()).unwrap());
        assert_eq!((id.scale, id.delay), (QSqrt2::one(), 0));
        let id = dual_identity(&FilterQuadruple::<f64>::daub4_causal().unwrap());
        assert!((id.scale - 1.0).abs() < 1e-12);
        assert_eq!(id.delay, 0);
    }

    #[test]
    fn determinants_are_monomials() {
        let l = FilterQuadruple::<Rational>::legall53();
        assert_eq!(l.analysis_matrix().det_monomial(), Some((q(1, 2), 0)));
        assert_eq!(l.dual_analysis_matrix().det_monomial(), Some((q(2, 1), 0)));
        let c = FilterQuadruple::<QSqrt2>::cdf97(&Cdf97Params::table()).unwrap();
        assert_eq!(c.analysis_matrix().det_monomial(), Some((QSqrt2::one(), 0)));
        assert_eq!(c.dual_analysis_matrix().det_monomial(), Some((QSqrt2::one(), 0)));
    }

    #[test]
    fn non_identity_product_reports_residual() {
        let quad = FilterQuadruple::<Rational>::legall53();
        let a = quad.analysis_matrix();
        let err = paraunitary_product(&a, &a).unwrap_err();
        assert!(matches!(err, Error::Paraunitary { .. }));
    }

    #[test]
    fn quadruple_text_round_trip() {
        let quad = FilterQuadruple::<Rational>::legall53();
        let text = quad.to_text();
        assert!(text.contains("h_tilde -2 -1/8 1/4 3/4 1/4 -1/8"));
        assert_eq!(FilterQuadruple::parse_text(&text).unwrap(), quad);
        let quad = FilterQuadruple::<QSqrt2>::cdf97(&Cdf97Params::table()).unwrap();
        assert_eq!(FilterQuadruple::parse_text(&quad.to_text()).unwrap(), quad);
    }

    #[test]
    fn family_names() {
        assert_eq!("daub4_causal".parse::<Family>().unwrap(), Family::Daub4Causal);
        assert_eq!("LeGall53".parse::<Family>().unwrap(), Family::LeGall53);
        assert!("haar".parse::<Family>().is_err());
    }

    proptest! {
        // every admissible rational t keeps perfect reconstruction and four
        // vanishing moments of the analysis highpass
        #[test]
        fn free_variable_family(num in 79i64..185) {
            let t = q(num, 100);
            prop_assume!(num != 100);
            let params = Cdf97Params::from_free_variable(&t).unwrap();
            // ζ = √2/t is not in Q(√2)·… only when t is irrational, so this always works
            let quad = FilterQuadruple::<QSqrt2>::cdf97(&params).unwrap();
            let id = paraunitary_product(&quad.analysis_matrix(), &quad.synthesis_matrix()).unwrap();
            prop_assert_eq!(id.scale, QSqrt2::one());
            for k in 0..4u32 {
                let moment = quad.g_tilde.terms().fold(QSqrt2::zero(), |acc, (n, c)| {
                    acc + c.clone() * QSqrt2::from_i64(n.pow(k))
                });
                prop_assert_eq!(moment, QSqrt2::zero());
            }
        }
    }
}
