//! Dense, transform-independent reference computations.
//!
//! Everything here is built from polyphase matrices and direct circular
//! convolution ([`forward_direct`]), never from lifting steps or the SIDWT
//! tree, so it can serve as an oracle for both.
//!
//! The scale-`j` approximation of a template `x` is its projection onto the
//! primal approximation space, `x_j = D_jᵀ Ã_j x`, and that of a received
//! signal `y` is `y_j = Ã_jᵀ D_j y`, where `Ã_j` and `D_j` are the level-`j`
//! approximation operators of the analysis and dual-analysis banks. Because
//! `D_j Ã_jᵀ = I`, `⟨x_j, y_j⟩ = ⟨Ã_j x, D_j y⟩`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filterbank::{build_polyphase, Family, FilterQuadruple, PolyphaseMatrix, Role};
use crate::lifting::forward_direct;
use crate::scalar::Scalar;
use crate::signal::{circ_shift, dot, ComplexSeq};

/// A row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Self { rows: n, cols: n, data }
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn apply_transpose(&self, v: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.cols];
        for (r, vr) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(r)) {
                *o = o.clone() + a.clone() * vr.clone();
            }
        }
        out
    }
}

/// Approximation channel after `level` applications of `p`.
pub fn approximation<T: Scalar>(p: &PolyphaseMatrix<T>, x: &[T], level: usize) -> Result<Vec<T>> {
    (0..level).try_fold(x.to_vec(), |v, _| forward_direct(p, &v).map(|pair| pair.approx))
}

/// The linear map `x ↦` level-`level` approximation of `x`, materialized
/// column by column from unit impulses.
pub fn level_operator<T: Scalar>(p: &PolyphaseMatrix<T>, len: usize, level: usize) -> Result<DenseMatrix<T>> {
    if len >> level << level != len || (level > 0 && len >> level == 0) {
        return Err(Error::Depth { depth: level, len });
    }
    let rows = len >> level;
    let columns = (0..len)
        .into_par_iter()
        .map(|n| {
            let mut e = vec![T::zero(); len];
            e[n] = T::one();
            approximation(p, &e, level)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut data = vec![T::zero(); rows * len];
    for (n, col) in columns.into_iter().enumerate() {
        for (r, v) in col.into_iter().enumerate() {
            data[r * len + n] = v;
        }
    }
    Ok(DenseMatrix { rows, cols: len, data })
}

/// Projections onto the scale-`j` approximation spaces of a dual pair of banks.
#[derive(Clone, Debug)]
pub struct ScaleProjector<T> {
    pub scale: usize,
    analysis: DenseMatrix<T>,
    dual: DenseMatrix<T>,
}

impl<T: Scalar> ScaleProjector<T> {
    pub fn new(quad: &FilterQuadruple<T>, len: usize, scale: usize) -> Result<Self> {
        let analysis = level_operator(&build_polyphase(quad, Role::Analysis), len, scale)?;
        let dual = level_operator(&build_polyphase(quad, Role::DualAnalysis), len, scale)?;
        Ok(Self { scale, analysis, dual })
    }

    pub fn for_family(family: Family, len: usize, scale: usize) -> Result<Self> {
        Self::new(&FilterQuadruple::for_family(family)?, len, scale)
    }

    /// Time-domain approximation of a template signal.
    pub fn template(&self, x: &[T]) -> Vec<T> {
        self.dual.apply_transpose(&self.analysis.apply(x))
    }

    /// Time-domain approximation of a received signal.
    pub fn received(&self, y: &[T]) -> Vec<T> {
        self.analysis.apply_transpose(&self.dual.apply(y))
    }

    /// `Σ_n x_j^{(l)}[n] · y_j[n]` for every circular lag `l`, where `x_j^{(l)}`
    /// is the approximation of `circ_shift(x, l)`.
    pub fn correlate(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        if x.len() != y.len() || x.len() != self.analysis.cols {
            return Err(Error::Dimension("oracle inputs must match the projector length".into()));
        }
        let yj = self.received(y);
        Ok((0..x.len() as i64).into_par_iter().map(|l| dot(&self.template(&circ_shift(x, l)), &yj)).collect())
    }
}

impl ScaleProjector<f64> {
    pub fn template_complex(&self, x: &ComplexSeq) -> ComplexSeq {
        ComplexSeq::from_parts(&self.template(&x.re()), &self.template(&x.im())).expect("equal part lengths")
    }

    pub fn received_complex(&self, y: &ComplexSeq) -> ComplexSeq {
        ComplexSeq::from_parts(&self.received(&y.re()), &self.received(&y.im())).expect("equal part lengths")
    }

    /// `Σ_n conj(x_j^{(l)}[n]) · y_j[n]` for every circular lag `l`.
    pub fn correlate_complex(&self, x: &ComplexSeq, y: &ComplexSeq) -> Result<Vec<Complex64>> {
        if x.len() != y.len() || x.len() != self.analysis.cols {
            return Err(Error::Dimension("oracle inputs must match the projector length".into()));
        }
        let yj = self.received_complex(y);
        Ok((0..x.len() as i64)
            .into_par_iter()
            .map(|l| {
                let xj = self.template_complex(&x.shifted(l));
                xj.samples.iter().zip(&yj.samples).map(|(a, b)| a.conj() * b).sum()
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::signal::circ_corr_real;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn scale_zero_is_plain_correlation() {
        let p = ScaleProjector::<Rational>::for_family(Family::LeGall53, 8, 0).unwrap();
        let x: Vec<Rational> = [3, -1, 4, 1, -5, 9, 2, -6].map(q).to_vec();
        let y: Vec<Rational> = [2, 7, -1, 8, 2, -8, 1, 8].map(q).to_vec();
        assert_eq!(p.correlate(&x, &y).unwrap(), circ_corr_real(&x, &y).unwrap());
    }

    #[test]
    fn projections_are_idempotent_and_biorthogonal() {
        let p = ScaleProjector::<Rational>::for_family(Family::LeGall53, 16, 2).unwrap();
        let x: Vec<Rational> = (0..16).map(|i| q((i * 7 % 11) - 5)).collect();
        let xj = p.template(&x);
        assert_eq!(p.template(&xj), xj);
        let yj = p.received(&x);
        assert_eq!(p.received(&yj), yj);
        // the received projection annihilates what the template projection drops
        let rest: Vec<Rational> = x.iter().zip(&xj).map(|(a, b)| a - b).collect();
        assert_eq!(dot(&rest, &yj), q(0));
    }
}
