//! Self-check suites printed as `CHECK <name> PASS|FAIL [residual]` lines.

use std::fmt;

use liftcorr_core::filterbank::{paraunitary_product, MonomialIdentity};
use liftcorr_core::lifting::{
    euclidean_factorize, expand_scheme, forward_direct, forward_lift, inverse_lift, scheme_for,
};
use liftcorr_core::oracle::ScaleProjector;
use liftcorr_core::sidwt::{complex_corr, corr_at_scale, dual_decompose, sidwt_decompose, ComplexCorrOptions};
use liftcorr_core::signal::{circ_corr_bruteforce, circ_shift, dot, ComplexSeq};
use liftcorr_core::{build_polyphase, Family, FilterQuadruple, PolyphaseMatrix, QSqrt2, Rational, Role, Scalar};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Coefficient tolerance for floating-point polyphase identities.
pub const MATRIX_TOL: f64 = 1e-12;
/// Sample tolerance for floating-point reconstructions.
pub const SIGNAL_TOL: f64 = 1e-10;
/// Relative tolerance for floating-point correlations.
pub const CORRELATION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, residual: Option<String>) -> Self {
        Self { name: name.into(), passed, residual }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CHECK {} {}", self.name, if self.passed { "PASS" } else { "FAIL" })?;
        if let Some(r) = &self.residual {
            write!(f, " {r}")?;
        }
        Ok(())
    }
}

/// Runs every suite for `family`; random inputs derive from `seed`.
pub fn verify_family(family: Family, seed: u64) -> Vec<Check> {
    match family {
        Family::LeGall53 => Suite::<Rational>::new(family, seed).run(),
        Family::Cdf97 => Suite::<QSqrt2>::new(family, seed).run(),
        Family::Daub4Causal => Suite::<f64>::new(family, seed).run(),
    }
}

/// Largest absolute difference, with exact fields compared exactly.
fn compare<T: Scalar>(a: &[T], b: &[T], tol: f64) -> (bool, f64) {
    if a.len() != b.len() {
        return (false, f64::INFINITY);
    }
    let residual = a.iter().zip(b).map(|(x, y)| (x.clone() - y.clone()).to_f64().abs()).fold(0.0, f64::max);
    let passed = if T::EXACT { a == b } else { residual <= tol };
    (passed, residual)
}

fn compare_matrices<T: Scalar>(a: &PolyphaseMatrix<T>, b: &PolyphaseMatrix<T>) -> (bool, f64) {
    let residual = a.max_abs_diff(b);
    let passed = if T::EXACT { a.cleaned().entries == b.cleaned().entries } else { residual <= MATRIX_TOL };
    (passed, residual)
}

fn residual_text(residual: f64) -> Option<String> {
    Some(format!("residual {residual:.3e}"))
}

struct Suite<T> {
    family: Family,
    rng: ChaCha8Rng,
    _field: std::marker::PhantomData<T>,
}

impl<T: Scalar> Suite<T> {
    fn new(family: Family, seed: u64) -> Self {
        Self { family, rng: ChaCha8Rng::seed_from_u64(seed), _field: std::marker::PhantomData }
    }

    fn name(&self, check: &str) -> String {
        format!("{}.{check}", self.family)
    }

    /// Multiples of 1/1000 in `(−1, 1)`, exact in every field.
    fn draw(&mut self, len: usize) -> Vec<T> {
        (0..len).map(|_| T::ratio(self.rng.gen_range(-999..1000), 1000)).collect()
    }

    fn draw_complex(&mut self, len: usize) -> ComplexSeq {
        ComplexSeq::new(
            (0..len).map(|_| Complex64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0))).collect(),
        )
    }

    fn run(mut self) -> Vec<Check> {
        let quad = match FilterQuadruple::<T>::for_family(self.family) {
            Ok(q) => q,
            Err(e) => return vec![Check::new(self.name("filters"), false, Some(e.to_string()))],
        };
        let mut checks = self.paraunitary(&quad);
        checks.extend(self.expansion(&quad));
        checks.push(self.round_trip());
        checks.push(self.lift_vs_direct(&quad));
        checks.push(self.inner_product());
        checks.extend(self.correlation());
        checks
    }

    fn identity_check(
        &self,
        name: &str,
        product: liftcorr_core::Result<MonomialIdentity<T>>,
        want_scale: T,
        want_delay: i64,
    ) -> Check {
        match product {
            Ok(id) => {
                let scale_residual = (id.scale.clone() - want_scale.clone()).to_f64().abs();
                let scale_ok = if T::EXACT { id.scale == want_scale } else { scale_residual <= MATRIX_TOL };
                let passed = scale_ok && id.delay == want_delay;
                let delay = if id.delay == 0 { String::new() } else { format!(" delay z^-{}", id.delay) };
                Check::new(
                    self.name(name),
                    passed,
                    Some(format!("scale {}{delay} residual {scale_residual:.3e}", id.scale)),
                )
            }
            Err(e) => Check::new(self.name(name), false, Some(e.to_string().replace('\n', " "))),
        }
    }

    fn paraunitary(&self, quad: &FilterQuadruple<T>) -> Vec<Check> {
        let a = quad.analysis_matrix();
        let delay = self.family.reconstruction_delay();
        let mut checks = vec![self.identity_check(
            "paraunitary",
            paraunitary_product(&quad.synthesis_matrix(), &a),
            T::one(),
            delay,
        )];
        if self.family == Family::LeGall53 {
            checks.push(self.identity_check(
                "paraunitary_unscaled",
                paraunitary_product(&a, &quad.synthesis_matrix_unscaled()),
                T::ratio(1, 2),
                0,
            ));
        }
        checks.push(self.identity_check(
            "dual_basis",
            paraunitary_product(&a.transpose().reflect(), &quad.dual_analysis_matrix()),
            T::one(),
            0,
        ));
        checks
    }

    fn expansion(&self, quad: &FilterQuadruple<T>) -> Vec<Check> {
        let mut checks: Vec<Check> = [Role::Analysis, Role::DualAnalysis, Role::Synthesis]
            .into_iter()
            .map(|role| {
                let name = self.name(&format!("expansion.{role}"));
                match scheme_for::<T>(self.family, role) {
                    Ok(s) => {
                        let (passed, r) = compare_matrices(&expand_scheme(&s), &build_polyphase(quad, role));
                        Check::new(name, passed, residual_text(r))
                    }
                    Err(e) => Check::new(name, false, Some(e.to_string())),
                }
            })
            .collect();
        let a = quad.analysis_matrix();
        let name = self.name("euclid");
        checks.push(match euclidean_factorize(&a) {
            Ok(s) => {
                let (passed, r) = compare_matrices(&expand_scheme(&s), &a);
                Check::new(name, passed, residual_text(r))
            }
            Err(e) => Check::new(name, false, Some(e.to_string())),
        });
        checks
    }

    fn round_trip(&mut self) -> Check {
        let family = self.family;
        let shift = -2 * family.reconstruction_delay();
        let run = |x: &[T]| -> liftcorr_core::Result<Vec<T>> {
            let pair = forward_lift(&scheme_for::<T>(family, Role::Analysis)?, x)?;
            inverse_lift(&scheme_for::<T>(family, Role::Synthesis)?, &pair)
        };
        let mut worst = (true, 0.0f64);
        for len in [8, 32, 64] {
            let x = self.draw(len);
            match run(&x) {
                Ok(y) => {
                    let (ok, r) = compare(&y, &circ_shift(&x, shift), SIGNAL_TOL);
                    worst = (worst.0 && ok, worst.1.max(r));
                }
                Err(e) => return Check::new(self.name("round_trip"), false, Some(e.to_string())),
            }
        }
        let note = if shift == 0 { String::new() } else { format!(" delay {}", -shift) };
        Check::new(self.name("round_trip"), worst.0, Some(format!("residual {:.3e}{note}", worst.1)))
    }

    fn lift_vs_direct(&mut self, quad: &FilterQuadruple<T>) -> Check {
        let mut worst = (true, 0.0f64);
        for role in [Role::Analysis, Role::DualAnalysis] {
            let p = build_polyphase(quad, role);
            for len in [8, 32] {
                let x = self.draw(len);
                let result = scheme_for::<T>(self.family, role)
                    .and_then(|s| forward_lift(&s, &x))
                    .and_then(|lifted| Ok((lifted, forward_direct(&p, &x)?)));
                match result {
                    Ok((l, d)) => {
                        for (a, b) in [(&l.approx, &d.approx), (&l.detail, &d.detail)] {
                            let (ok, r) = compare(a, b, MATRIX_TOL);
                            worst = (worst.0 && ok, worst.1.max(r));
                        }
                    }
                    Err(e) => return Check::new(self.name("lift_vs_direct"), false, Some(e.to_string())),
                }
            }
        }
        Check::new(self.name("lift_vs_direct"), worst.0, residual_text(worst.1))
    }

    fn inner_product(&mut self) -> Check {
        let (x, y) = (self.draw(32), self.draw(32));
        let result = (|| -> liftcorr_core::Result<(T, T)> {
            let a = forward_lift(&scheme_for::<T>(self.family, Role::Analysis)?, &x)?;
            let d = forward_lift(&scheme_for::<T>(self.family, Role::DualAnalysis)?, &y)?;
            Ok((dot(&x, &y), dot(&a.approx, &d.approx) + dot(&a.detail, &d.detail)))
        })();
        match result {
            Ok((lhs, rhs)) => {
                let scale = (dot(&x, &x).to_f64() * dot(&y, &y).to_f64()).sqrt();
                let r = (lhs.clone() - rhs.clone()).to_f64().abs();
                let passed = if T::EXACT { lhs == rhs } else { r <= SIGNAL_TOL * scale };
                Check::new(self.name("inner_product"), passed, residual_text(r))
            }
            Err(e) => Check::new(self.name("inner_product"), false, Some(e.to_string())),
        }
    }

    fn correlation(&mut self) -> Vec<Check> {
        let mut checks = vec![self.complex_correlation()];
        if T::EXACT {
            checks.push(self.exact_correlation());
        }
        checks
    }

    /// Floating-point complex correlation against the projection oracle at
    /// every scale, and against brute force at scale 0.
    fn complex_correlation(&mut self) -> Check {
        let (len, scales) = (64, 3);
        let (x, y) = (self.draw_complex(len), self.draw_complex(len));
        let name = self.name("correlation_oracle");
        let options = ComplexCorrOptions { analytic_factor_2: false };
        let run = || -> liftcorr_core::Result<f64> {
            let results = complex_corr(&x, &y, self.family, scales, options)?;
            let brute = circ_corr_bruteforce(&x, &y)?;
            let brute_peak = brute.values.iter().map(|v| v.norm()).fold(f64::MIN_POSITIVE, f64::max);
            let mut worst: f64 = 0.0;
            // all 2L slots, each lag appearing twice
            for lag in brute.lags() {
                let want = brute.at(lag).expect("lag inside the series");
                worst = worst.max((results[0].at(lag) - want).norm() / brute_peak);
            }
            for (j, r) in results.iter().enumerate() {
                let want = ScaleProjector::<f64>::for_family(self.family, len, j)?.correlate_complex(&x, &y)?;
                let peak = want.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
                let err = r.values.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                worst = worst.max(err / peak);
            }
            Ok(worst)
        };
        match run() {
            Ok(r) => Check::new(name, r <= CORRELATION_TOL, Some(format!("relative residual {r:.3e}"))),
            Err(e) => Check::new(name, false, Some(e.to_string())),
        }
    }

    /// Exact-field correlation of real inputs against the projection oracle.
    fn exact_correlation(&mut self) -> Check {
        // exact 9/7 projections grow quickly; keep them small
        let (len, scales) = if self.family == Family::Cdf97 { (16, 2) } else { (32, 3) };
        let (x, y) = (self.draw(len), self.draw(len));
        let name = self.name("correlation_oracle_exact");
        let run = || -> liftcorr_core::Result<bool> {
            let tree = sidwt_decompose(&x, &scheme_for::<T>(self.family, Role::Analysis)?, scales)?;
            let dual = dual_decompose(&y, &scheme_for::<T>(self.family, Role::DualAnalysis)?, scales)?;
            for j in 0..scales {
                let want = ScaleProjector::<T>::for_family(self.family, len, j)?.correlate(&x, &y)?;
                if corr_at_scale(&tree, &dual, j)? != want {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        match run() {
            Ok(passed) => Check::new(name, passed, None),
            Err(e) => Check::new(name, false, Some(e.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_family_passes() {
        for family in Family::ALL {
            for check in verify_family(family, 3) {
                assert!(check.passed, "{check}");
            }
        }
    }

    #[test]
    fn daub4_reports_its_delay() {
        let checks = verify_family(Family::Daub4Causal, 1);
        let para = checks.iter().find(|c| c.name == "daub4.paraunitary").unwrap();
        assert!(para.to_string().contains("delay z^-1"), "{para}");
    }

    #[test]
    fn line_format() {
        let c = Check::new("x.y", false, Some("residual 1e0".into()));
        assert_eq!(c.to_string(), "CHECK x.y FAIL residual 1e0");
        assert_eq!(Check::new("x", true, None).to_string(), "CHECK x PASS");
    }
}
