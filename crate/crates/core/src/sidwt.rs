//! Shift-invariant DWT (SIDWT) tree and exact multiresolution circular
//! correlation.
//!
//! A critically sampled DWT is only periodically shift-invariant: shifting the
//! input by two samples shifts the one-level coefficients by one. The SIDWT
//! keeps, at level `j`, the decompositions of all `2^j` input phases. A
//! template `x` decomposed this way can be correlated against a received
//! signal `y` — decomposed once in the dual analysis basis — at every fine
//! grid lag, directly in the coefficient domain.
//!
//! # Paths and lags
//!
//! Branch `r` of level `j` (`0 ≤ r < 2^j`) holds the level-`j` decomposition of
//! `circ_shift(x, r)`. Its label lists the bits of `r` least significant first,
//! `e` for 0 and `o` for 1. The children of branch `r` at level `j + 1` are `r`
//! (`e`: the parent approximation as is) and `r + 2^j` (`o`: the parent
//! approximation shifted by one coefficient).
//!
//! A lag `l = 2^{j+1}·p + r` is served by branch `r` of level `j + 1` shifted by
//! `p` coefficients. The value at scale `j` is
//! `⟨shift(ã_r, p), c_{j+1}⟩ + ⟨shift(b̃_r, p), d_{j+1}⟩`, which equals the
//! inner product of the scale-`j` approximations of `circ_shift(x, l)` and `y`
//! in their dual bases. At scale 0 this is the plain circular correlation.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filterbank::{Family, Role};
use crate::lifting::{forward_lift_counted, inverse_lift, scheme_for, DwtPair, LiftingScheme, OpCount};
use crate::scalar::Scalar;
use crate::signal::{centered_lag, circ_shift, dot, ComplexSeq};

/// Label of branch `r` at level `j`, least significant bit first.
pub fn path_label(r: usize, j: usize) -> String {
    (0..j).map(|b| if r >> b & 1 == 0 { 'e' } else { 'o' }).collect()
}

/// Branch index of a label produced by [`path_label`].
pub fn path_index(label: &str) -> Option<usize> {
    label.chars().enumerate().try_fold(0usize, |acc, (b, c)| match c {
        'e' => Some(acc),
        'o' => Some(acc | 1 << b),
        _ => None,
    })
}

fn check_depth(len: usize, scales: usize) -> Result<()> {
    if !len.is_power_of_two() {
        return Err(Error::Dimension(format!("sequence length {len} is not a power of two")));
    }
    if scales == 0 || scales >= usize::BITS as usize || 1usize << scales > len {
        return Err(Error::Depth { depth: scales, len });
    }
    Ok(())
}

fn check_role<T>(scheme: &LiftingScheme<T>, role: Role) -> Result<()> {
    if scheme.role != role {
        return Err(Error::Contract(format!("expected a {role} scheme, got {}", scheme.role)));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SidwtTree<T> {
    /// Length `L` of the decomposed sequence.
    pub len: usize,
    /// `levels[j - 1][r]` is branch `r` of level `j`.
    pub levels: Vec<Vec<DwtPair<T>>>,
}

impl<T: Scalar> SidwtTree<T> {
    pub fn scales(&self) -> usize {
        self.levels.len()
    }

    pub fn branch(&self, level: usize, r: usize) -> Option<&DwtPair<T>> {
        self.levels.get(level.checked_sub(1)?)?.get(r)
    }

    pub fn branch_by_label(&self, label: &str) -> Option<&DwtPair<T>> {
        self.branch(label.len(), path_index(label)?)
    }
}

/// Builds the SIDWT tree of `x` to depth `scales` with an analysis scheme.
pub fn sidwt_decompose<T: Scalar>(x: &[T], scheme: &LiftingScheme<T>, scales: usize) -> Result<SidwtTree<T>> {
    sidwt_decompose_counted(x, scheme, scales).map(|(tree, _)| tree)
}

/// Arithmetic performed while building a [`SidwtTree`], per branch.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SidwtOps {
    /// `per_branch[j - 1][r]` is the cost of producing branch `r` of level `j`.
    pub per_branch: Vec<Vec<OpCount>>,
}

impl SidwtOps {
    pub fn total(&self) -> OpCount {
        self.per_branch.iter().flatten().copied().sum()
    }

    pub fn level(&self, j: usize) -> OpCount {
        self.per_branch.get(j - 1).map_or_else(OpCount::default, |l| l.iter().copied().sum())
    }
}

/// [`sidwt_decompose`] that also reports the arithmetic performed.
pub fn sidwt_decompose_counted<T: Scalar>(
    x: &[T],
    scheme: &LiftingScheme<T>,
    scales: usize,
) -> Result<(SidwtTree<T>, SidwtOps)> {
    check_depth(x.len(), scales)?;
    check_role(scheme, Role::Analysis)?;
    let lift = |v: &[T]| {
        let mut count = OpCount::default();
        forward_lift_counted(scheme, v, &mut count).map(|pair| (pair, count))
    };
    let mut ops = SidwtOps::default();
    let mut levels: Vec<Vec<DwtPair<T>>> = Vec::with_capacity(scales);
    // the parents of level 1 are the input itself
    let mut parents: Vec<Vec<T>> = vec![x.to_vec()];
    for _ in 0..scales {
        // children r and r + 2^j: first all unshifted, then all shifted parents
        let inputs: Vec<Vec<T>> = parents.iter().cloned().chain(parents.iter().map(|p| circ_shift(p, 1))).collect();
        let results = inputs.par_iter().map(|v| lift(v)).collect::<Result<Vec<_>>>()?;
        let (level, counts): (Vec<DwtPair<T>>, Vec<OpCount>) = results.into_iter().unzip();
        ops.per_branch.push(counts);
        parents = level.iter().map(|p| p.approx.clone()).collect();
        levels.push(level);
    }
    Ok((SidwtTree { len: x.len(), levels }, ops))
}

/// Non-redundant decomposition of the received signal in the dual analysis basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCoeffs<T> {
    pub len: usize,
    /// `levels[j - 1]` holds `(c_j, d_j)`.
    pub levels: Vec<DwtPair<T>>,
}

impl<T: Scalar> DualCoeffs<T> {
    pub fn scales(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, j: usize) -> Option<&DwtPair<T>> {
        self.levels.get(j.checked_sub(1)?)
    }
}

pub fn dual_decompose<T: Scalar>(y: &[T], scheme: &LiftingScheme<T>, scales: usize) -> Result<DualCoeffs<T>> {
    dual_decompose_counted(y, scheme, scales).map(|(d, _)| d)
}

pub fn dual_decompose_counted<T: Scalar>(
    y: &[T],
    scheme: &LiftingScheme<T>,
    scales: usize,
) -> Result<(DualCoeffs<T>, OpCount)> {
    check_depth(y.len(), scales)?;
    check_role(scheme, Role::DualAnalysis)?;
    let mut count = OpCount::default();
    let mut levels = Vec::with_capacity(scales);
    let mut current = y.to_vec();
    for _ in 0..scales {
        let pair = forward_lift_counted(scheme, &current, &mut count)?;
        current = pair.approx.clone();
        levels.push(pair);
    }
    Ok((DualCoeffs { len: y.len(), levels }, count))
}

fn check_compatible<T: Scalar>(tree: &SidwtTree<T>, dual: &DualCoeffs<T>) -> Result<()> {
    if tree.len != dual.len {
        return Err(Error::Dimension(format!(
            "template length {} differs from received length {}",
            tree.len, dual.len
        )));
    }
    Ok(())
}

/// Correlation value of branch `r` of `level`, shifted by `p` coefficients.
fn branch_value<T: Scalar>(branch: &DwtPair<T>, coeffs: &DwtPair<T>, p: usize, with_detail: bool) -> T {
    let n = coeffs.approx.len();
    let sum = |a: &[T], c: &[T]| (0..n).fold(T::zero(), |acc, k| acc + a[(k + p) % n].clone() * c[k].clone());
    let approx = sum(&branch.approx, &coeffs.approx);
    if with_detail {
        approx + sum(&branch.detail, &coeffs.detail)
    } else {
        approx
    }
}

fn correlate_level<T: Scalar>(tree: &SidwtTree<T>, dual: &DualCoeffs<T>, level: usize, with_detail: bool) -> Vec<T> {
    let period = 1usize << level;
    let branches = &tree.levels[level - 1];
    let coeffs = &dual.levels[level - 1];
    (0..tree.len)
        .into_par_iter()
        .map(|l| branch_value(&branches[l % period], coeffs, l / period, with_detail))
        .collect()
}

/// Correlation at scale `j ∈ [0, J−1]`, indexed by circular lag `0 .. L−1`.
pub fn corr_at_scale<T: Scalar>(tree: &SidwtTree<T>, dual: &DualCoeffs<T>, j: usize) -> Result<Vec<T>> {
    check_compatible(tree, dual)?;
    let depth = tree.scales().min(dual.scales());
    if j >= depth {
        return Err(Error::Range(format!("scale {j} needs decomposition level {}, only {depth} available", j + 1)));
    }
    Ok(correlate_level(tree, dual, j + 1, true))
}

/// Correlation at the coarsest scale `J` from the level-`J` approximation
/// channels alone, indexed by circular lag.
pub fn corr_coarsest<T: Scalar>(tree: &SidwtTree<T>, dual: &DualCoeffs<T>) -> Result<Vec<T>> {
    check_compatible(tree, dual)?;
    let depth = tree.scales().min(dual.scales());
    if depth == 0 {
        return Err(Error::Range("empty decomposition".into()));
    }
    Ok(correlate_level(tree, dual, depth, false))
}

/// Materializes the block-circulant correlation matrix of scale `j`: row `l`
/// is the concatenation of the shifted approximation and detail vectors of the
/// branch serving lag `l`.
pub fn circulant_matrix<T: Scalar>(tree: &SidwtTree<T>, j: usize) -> Result<Vec<Vec<T>>> {
    let level = j + 1;
    let branches = tree
        .levels
        .get(j)
        .ok_or_else(|| Error::Range(format!("scale {j} exceeds the tree depth {}", tree.scales())))?;
    let period = 1usize << level;
    Ok((0..tree.len)
        .map(|l| {
            let b = &branches[l % period];
            let p = (l / period) as i64;
            let mut row = circ_shift(&b.approx, p);
            row.extend(circ_shift(&b.detail, p));
            row
        })
        .collect())
}

/// [`corr_at_scale`] evaluated as an explicit matrix-vector product.
pub fn corr_at_scale_dense<T: Scalar>(tree: &SidwtTree<T>, dual: &DualCoeffs<T>, j: usize) -> Result<Vec<T>> {
    check_compatible(tree, dual)?;
    let coeffs = dual
        .levels
        .get(j)
        .ok_or_else(|| Error::Range(format!("scale {j} exceeds the dual depth {}", dual.scales())))?;
    let column: Vec<T> = coeffs.approx.iter().chain(&coeffs.detail).cloned().collect();
    Ok(circulant_matrix(tree, j)?.iter().map(|row| dot(row, &column)).collect())
}

/// Complex correlation at one scale.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationResult {
    pub scale: usize,
    /// Values by circular lag `0 .. L−1`.
    pub values: Vec<Complex64>,
    /// Smallest lag in `[−L/2, L/2−1]` attaining the maximum modulus.
    pub peak_lag: i64,
    pub peak_magnitude: f64,
}

impl CorrelationResult {
    pub fn new(scale: usize, values: Vec<Complex64>) -> Self {
        let (peak_lag, peak_magnitude) = peak_lag(&values);
        Self { scale, values, peak_lag, peak_magnitude }
    }

    /// `(lag, value)` pairs in ascending lag order over `[−L/2, L/2−1]`.
    pub fn centered(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let len = self.values.len();
        let half = len / 2;
        (half..len).chain(0..half).map(move |i| (centered_lag(i, len), self.values[i]))
    }

    pub fn at(&self, lag: i64) -> Complex64 {
        self.values[lag.rem_euclid(self.values.len() as i64) as usize]
    }
}

/// Smallest lag in `[−L/2, L/2−1]` attaining the maximum modulus, with that modulus.
pub fn peak_lag(values: &[Complex64]) -> (i64, f64) {
    let len = values.len();
    let half = len / 2;
    let mut best = (0i64, f64::NEG_INFINITY);
    for i in (half..len).chain(0..half) {
        let m = values[i].norm();
        if m > best.1 {
            best = (centered_lag(i, len), m);
        }
    }
    best
}

/// Options of the complex correlation pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexCorrOptions {
    /// Multiply results by 2, the response ratio between the analytic system
    /// and its real part.
    pub analytic_factor_2: bool,
}

impl Default for ComplexCorrOptions {
    fn default() -> Self {
        Self { analytic_factor_2: true }
    }
}

/// Decompositions of a complex template and received signal.
#[derive(Clone, Debug)]
pub struct ComplexDecomposition {
    pub template_re: SidwtTree<f64>,
    pub template_im: SidwtTree<f64>,
    pub received_re: DualCoeffs<f64>,
    pub received_im: DualCoeffs<f64>,
    /// Cost of the template trees, real part then imaginary part.
    pub template_ops: [SidwtOps; 2],
    /// Cost of the two received-signal decompositions.
    pub received_ops: OpCount,
}

pub fn complex_decompose(
    x: &ComplexSeq,
    y: &ComplexSeq,
    family: Family,
    scales: usize,
) -> Result<ComplexDecomposition> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!("template length {} differs from received length {}", x.len(), y.len())));
    }
    x.validate_for_transform()?;
    y.validate_for_transform()?;
    let analysis = scheme_for::<f64>(family, Role::Analysis)?;
    let dual = scheme_for::<f64>(family, Role::DualAnalysis)?;
    let (template, received) = rayon::join(
        || {
            rayon::join(
                || sidwt_decompose_counted(&x.re(), &analysis, scales),
                || sidwt_decompose_counted(&x.im(), &analysis, scales),
            )
        },
        || {
            rayon::join(
                || dual_decompose_counted(&y.re(), &dual, scales),
                || dual_decompose_counted(&y.im(), &dual, scales),
            )
        },
    );
    let (template_re, c1) = template.0?;
    let (template_im, c2) = template.1?;
    let (received_re, c3) = received.0?;
    let (received_im, c4) = received.1?;
    Ok(ComplexDecomposition {
        template_re,
        template_im,
        received_re,
        received_im,
        template_ops: [c1, c2],
        received_ops: c3 + c4,
    })
}

impl ComplexDecomposition {
    fn combine(
        &self,
        scale: usize,
        factor2: bool,
        corr: impl Fn(&SidwtTree<f64>, &DualCoeffs<f64>) -> Result<Vec<f64>>,
    ) -> Result<CorrelationResult> {
        // conj(xr + i·xi)·(yr + i·yi) = (xr·yr + xi·yi) + i(xr·yi − xi·yr)
        let rr = corr(&self.template_re, &self.received_re)?;
        let ii = corr(&self.template_im, &self.received_im)?;
        let ri = corr(&self.template_re, &self.received_im)?;
        let ir = corr(&self.template_im, &self.received_re)?;
        let gain = if factor2 { 2.0 } else { 1.0 };
        let values = (0..rr.len()).map(|l| Complex64::new(rr[l] + ii[l], ri[l] - ir[l]) * gain).collect();
        Ok(CorrelationResult::new(scale, values))
    }

    /// Complex correlation at scale `j ∈ [0, J−1]`.
    pub fn scale(&self, j: usize, options: ComplexCorrOptions) -> Result<CorrelationResult> {
        self.combine(j, options.analytic_factor_2, |t, d| corr_at_scale(t, d, j))
    }

    /// [`scale`](Self::scale) through explicitly materialized circulant matrices.
    pub fn scale_dense(&self, j: usize, options: ComplexCorrOptions) -> Result<CorrelationResult> {
        self.combine(j, options.analytic_factor_2, |t, d| corr_at_scale_dense(t, d, j))
    }

    /// Complex correlation at scale `J` from approximation channels only.
    pub fn coarsest(&self, options: ComplexCorrOptions) -> Result<CorrelationResult> {
        let scale = self.template_re.scales();
        self.combine(scale, options.analytic_factor_2, corr_coarsest)
    }
}

/// Complex correlation of template `x` against received `y` at scales `0 .. J−1`.
pub fn complex_corr(
    x: &ComplexSeq,
    y: &ComplexSeq,
    family: Family,
    scales: usize,
    options: ComplexCorrOptions,
) -> Result<Vec<CorrelationResult>> {
    let dec = complex_decompose(x, y, family, scales)?;
    (0..scales).map(|j| dec.scale(j, options)).collect()
}

/// Rebuilds the level `from_level − 1` coefficients from level `from_level`.
///
/// The approximation channel is synthesized by inverse lifting; the detail
/// channel is the stored one. `scheme` is either the inverse of the dual
/// analysis scheme (role synthesis) or the dual analysis scheme itself, which
/// is then inverted mechanically.
pub fn coarse_to_fine<T: Scalar>(
    dual: &DualCoeffs<T>,
    from_level: usize,
    scheme: &LiftingScheme<T>,
) -> Result<DwtPair<T>> {
    if from_level < 2 || from_level > dual.scales() {
        return Err(Error::Range(format!("level {from_level} is outside 2..={}", dual.scales())));
    }
    let synthesis = match scheme.role {
        Role::Synthesis => scheme.clone(),
        Role::DualAnalysis => scheme.inverted()?,
        Role::Analysis => {
            return Err(Error::Contract("coarse-to-fine synthesis needs a dual-analysis or synthesis scheme".into()))
        }
    };
    let approx = inverse_lift(&synthesis, &dual.levels[from_level - 1])?;
    let detail = dual.levels[from_level - 2].detail.clone();
    Ok(DwtPair { approx, detail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn labels_round_trip() {
        assert_eq!(path_label(0, 1), "e");
        assert_eq!(path_label(1, 1), "o");
        assert_eq!(path_label(2, 2), "eo");
        assert_eq!(path_label(6, 3), "eoo");
        for r in 0..8 {
            assert_eq!(path_index(&path_label(r, 3)), Some(r));
        }
        assert_eq!(path_index("ex"), None);
    }

    #[test]
    fn branch_counts_per_level() {
        let scheme = scheme_for::<Rational>(Family::LeGall53, Role::Analysis).unwrap();
        let x: Vec<Rational> = (0..32).map(q).collect();
        let tree = sidwt_decompose(&x, &scheme, 3).unwrap();
        let counts: Vec<usize> = tree.levels.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![2, 4, 8]);
        for (j, level) in tree.levels.iter().enumerate() {
            assert!(level.iter().all(|b| b.len() == 32 >> (j + 1)));
        }
    }

    #[test]
    fn depth_and_role_errors() {
        let scheme = scheme_for::<Rational>(Family::LeGall53, Role::Analysis).unwrap();
        let x: Vec<Rational> = (0..8).map(q).collect();
        assert!(matches!(sidwt_decompose(&x, &scheme, 4), Err(Error::Depth { .. })));
        assert!(matches!(sidwt_decompose(&x, &scheme, 0), Err(Error::Depth { .. })));
        assert!(matches!(dual_decompose(&x, &scheme, 1), Err(Error::Contract(_))));
        assert!(matches!(sidwt_decompose(&x[..6], &scheme, 1), Err(Error::Dimension(_))));
    }

    #[test]
    fn peak_lag_prefers_smallest_lag() {
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[2] = Complex64::new(1.0, 0.0);
        v[6] = Complex64::new(0.0, 1.0);
        // lag 6 is −2 in the centered window and comes first
        assert_eq!(peak_lag(&v), (-2, 1.0));
    }
}
