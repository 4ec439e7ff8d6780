//! Lifting factorizations and lifted transforms.
//!
//! A [`LiftingScheme`] is an ordered list of elementary 2×2 polynomial matrices
//! acting on the polyphase vector `[even; odd]`. Steps are stored in
//! application order: the first step touches the data first, so the scheme
//! expands to `M_last ··· M_2 · M_1`.
//!
//! Every step is applied with periodic index wrapping: a polynomial `Σ cₙ z^{-n}`
//! acting on a phase buffer `s` of length `N` yields `Σ cₙ s[(k − n) mod N]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::filterbank::{build_polyphase, Cdf97Params, Family, FilterQuadruple, PolyphaseMatrix, Role};
use crate::laurent::LaurentPoly;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum LiftingStep<T> {
    /// Dual lifting: `odd += p · even`, matrix `[1 0; p 1]`.
    Predict(LaurentPoly<T>),
    /// Primal lifting: `even += p · odd`, matrix `[1 p; 0 1]`.
    Update(LaurentPoly<T>),
    /// `even *= K₀`, `odd *= K₁`.
    Scale { even: T, odd: T },
    /// A general elementary matrix that fits neither lifting shape, such as
    /// `[1 0; 1 z⁻¹]` in the causal Daubechies-4 factorization.
    Fused(PolyphaseMatrix<T>),
}

/// Arithmetic cost of a transform or of a single step.
///
/// `mul` counts multiplications by constants that are neither `±1` nor a power
/// of two; `shift` counts multiplications by `±2^k`, which integer hardware
/// realizes as bit shifts; `add` counts additions and subtractions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCount {
    pub mul: u64,
    pub shift: u64,
    pub add: u64,
}

impl OpCount {
    /// Multiplications when every constant is a floating-point multiply.
    pub fn float_mul(&self) -> u64 {
        self.mul + self.shift
    }

    pub fn times(self, n: u64) -> Self {
        Self { mul: self.mul * n, shift: self.shift * n, add: self.add * n }
    }
}

impl std::ops::Add for OpCount {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { mul: self.mul + rhs.mul, shift: self.shift + rhs.shift, add: self.add + rhs.add }
    }
}

impl std::ops::AddAssign for OpCount {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for OpCount {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| a + b)
    }
}

fn constant_cost<T: Scalar>(c: &T) -> OpCount {
    if c.is_unit() {
        OpCount::default()
    } else if c.is_shift() {
        OpCount { shift: 1, ..OpCount::default() }
    } else {
        OpCount { mul: 1, ..OpCount::default() }
    }
}

/// Cost of accumulating `Σ pᵢ · sᵢ` for one output sample; `polys` are the
/// nonzero contributions. A polynomial with one repeated coefficient is
/// evaluated as `c · Σ s`, costing a single multiplication.
fn row_cost<T: Scalar>(polys: &[&LaurentPoly<T>]) -> OpCount {
    let mut cost = OpCount::default();
    let mut terms = 0u64;
    for p in polys.iter().filter(|p| !p.is_zero()) {
        let n = p.coeffs().len() as u64;
        terms += n;
        match p.uniform_coefficient() {
            Some(c) => cost += constant_cost(&c),
            None => cost += p.coeffs().iter().map(constant_cost).sum(),
        }
    }
    cost.add = terms.saturating_sub(1);
    cost
}

impl<T: Scalar> LiftingStep<T> {
    pub fn matrix(&self) -> PolyphaseMatrix<T> {
        let (one, zero) = (LaurentPoly::one, LaurentPoly::zero);
        match self {
            LiftingStep::Predict(p) => PolyphaseMatrix::new([[one(), zero()], [p.clone(), one()]]),
            LiftingStep::Update(p) => PolyphaseMatrix::new([[one(), p.clone()], [zero(), one()]]),
            LiftingStep::Scale { even, odd } => {
                PolyphaseMatrix::diagonal(LaurentPoly::constant(even.clone()), LaurentPoly::constant(odd.clone()))
            }
            LiftingStep::Fused(m) => m.clone(),
        }
    }

    /// Exact inverse step; `None` for a fused matrix without monomial determinant.
    pub fn inverse(&self) -> Option<Self> {
        Some(match self {
            LiftingStep::Predict(p) => LiftingStep::Predict(-p),
            LiftingStep::Update(p) => LiftingStep::Update(-p),
            LiftingStep::Scale { even, odd } => {
                LiftingStep::Scale { even: T::one() / even.clone(), odd: T::one() / odd.clone() }
            }
            LiftingStep::Fused(m) => LiftingStep::Fused(m.inverse().ok()?),
        })
    }

    /// The step of the dual basis, `[M(z⁻¹)ᵀ]⁻¹`: a predict becomes an update
    /// with the negated, reflected polynomial and scales invert.
    pub fn dual(&self) -> Option<Self> {
        Some(match self {
            LiftingStep::Predict(p) => LiftingStep::Update(-p.reflect()),
            LiftingStep::Update(p) => LiftingStep::Predict(-p.reflect()),
            LiftingStep::Scale { .. } => self.inverse()?,
            LiftingStep::Fused(m) => LiftingStep::Fused(m.transpose().reflect().inverse().ok()?),
        })
    }

    /// Arithmetic cost of applying the step to `n` polyphase pairs.
    pub fn op_count(&self, n: usize) -> OpCount {
        let per_pair = match self {
            LiftingStep::Predict(p) | LiftingStep::Update(p) => {
                let one = LaurentPoly::one();
                row_cost(&[&one, p])
            }
            LiftingStep::Scale { even, odd } => constant_cost(even) + constant_cost(odd),
            LiftingStep::Fused(m) => {
                let row = |r: usize| {
                    let [a, b] = &m.entries[r];
                    // a lone monomial with unit coefficient is a re-indexing, not arithmetic
                    row_cost(&[a, b])
                };
                row(0) + row(1)
            }
        };
        per_pair.times(n as u64)
    }

    fn apply(&self, even: &mut [T], odd: &mut [T]) {
        match self {
            LiftingStep::Predict(p) => {
                let delta = circular_apply(p, even);
                odd.iter_mut().zip(delta).for_each(|(o, d)| *o = o.clone() + d);
            }
            LiftingStep::Update(p) => {
                let delta = circular_apply(p, odd);
                even.iter_mut().zip(delta).for_each(|(e, d)| *e = e.clone() + d);
            }
            LiftingStep::Scale { even: ke, odd: ko } => {
                even.iter_mut().for_each(|v| *v = v.clone() * ke.clone());
                odd.iter_mut().for_each(|v| *v = v.clone() * ko.clone());
            }
            LiftingStep::Fused(m) => {
                let (e, o) = apply_matrix(m, even, odd);
                even.clone_from_slice(&e);
                odd.clone_from_slice(&o);
            }
        }
    }
}

/// `(p · s)[k] = Σ cₙ s[(k − n) mod N]`.
pub fn circular_apply<T: Scalar>(p: &LaurentPoly<T>, s: &[T]) -> Vec<T> {
    let n = s.len() as i64;
    let mut out = vec![T::zero(); s.len()];
    if n == 0 {
        return out;
    }
    for (delay, c) in p.terms() {
        let offset = delay.rem_euclid(n) as usize;
        for (k, o) in out.iter_mut().enumerate() {
            let src = (k + s.len() - offset) % s.len();
            *o = o.clone() + c.clone() * s[src].clone();
        }
    }
    out
}

fn apply_matrix<T: Scalar>(m: &PolyphaseMatrix<T>, even: &[T], odd: &[T]) -> (Vec<T>, Vec<T>) {
    let row = |r: usize| {
        let a = circular_apply(&m.entries[r][0], even);
        let b = circular_apply(&m.entries[r][1], odd);
        a.into_iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>()
    };
    (row(0), row(1))
}

impl<T: Scalar> fmt::Display for LiftingStep<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftingStep::Predict(p) => write!(f, "predict {}", p.to_text()),
            LiftingStep::Update(p) => write!(f, "update {}", p.to_text()),
            LiftingStep::Scale { even, odd } => write!(f, "scale {even} {odd}"),
            LiftingStep::Fused(m) => {
                let [[a, b], [c, d]] = &m.entries;
                write!(f, "fused {} | {} | {} | {}", a.to_text(), b.to_text(), c.to_text(), d.to_text())
            }
        }
    }
}

/// Approximation and detail channels of a one-level transform.
#[derive(Clone, Debug, PartialEq)]
pub struct DwtPair<T> {
    pub approx: Vec<T>,
    pub detail: Vec<T>,
}

impl<T: Scalar> DwtPair<T> {
    pub fn zeros(half_len: usize) -> Self {
        Self { approx: vec![T::zero(); half_len], detail: vec![T::zero(); half_len] }
    }

    pub fn len(&self) -> usize {
        self.approx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.approx.is_empty()
    }

    /// Circularly shifts both channels by `p` coefficients.
    pub fn shifted(&self, p: i64) -> Self {
        Self { approx: crate::signal::circ_shift(&self.approx, p), detail: crate::signal::circ_shift(&self.detail, p) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftingScheme<T> {
    pub steps: Vec<LiftingStep<T>>,
    pub family: Option<Family>,
    pub role: Role,
    /// `d` such that the determinant of the expansion is a constant times `z^{-d}`.
    pub delay_compensation: i64,
}

impl<T: Scalar> LiftingScheme<T> {
    pub fn new(steps: Vec<LiftingStep<T>>, family: Option<Family>, role: Role) -> Self {
        let mut scheme = Self { steps, family, role, delay_compensation: 0 };
        scheme.delay_compensation = expand_scheme(&scheme).det_monomial().map_or(0, |(_, d)| d);
        scheme
    }

    /// The mechanical inverse: steps reversed, lifting polynomials negated,
    /// scales inverted. The result is a synthesis scheme.
    pub fn inverted(&self) -> Result<Self> {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| s.inverse().ok_or_else(|| Error::Algebra(format!("step `{s}` is not invertible"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { steps, family: self.family, role: Role::Synthesis, delay_compensation: -self.delay_compensation })
    }

    /// One line per step, `predict|update k1 c0 c1 ...`, `scale K0 K1` or `fused ...`.
    pub fn to_text(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }

    /// Cost of transforming a sequence of `len` samples.
    pub fn op_count(&self, len: usize) -> OpCount {
        self.steps.iter().map(|s| s.op_count(len / 2)).sum()
    }
}

/// Multiplies the step matrices: `M_last ··· M_first`.
pub fn expand_scheme<T: Scalar>(s: &LiftingScheme<T>) -> PolyphaseMatrix<T> {
    let expanded = s.steps.iter().fold(PolyphaseMatrix::identity(), |acc, step| step.matrix().mul(&acc));
    expanded.with_role(s.role)
}

fn lin<T: Scalar>(c: T) -> LaurentPoly<T> {
    // c (1 + z)
    LaurentPoly::new(-1, vec![c.clone(), c])
}

fn lag<T: Scalar>(c: T) -> LaurentPoly<T> {
    // c (1 + z⁻¹)
    LaurentPoly::new(0, vec![c.clone(), c])
}

/// The factorizations of the three supported families.
pub fn scheme_for<T: Scalar>(family: Family, role: Role) -> Result<LiftingScheme<T>> {
    use LiftingStep::{Fused, Predict, Scale, Update};
    let r = T::ratio;
    let steps = match (family, role) {
        (Family::LeGall53, Role::Analysis) => {
            vec![Predict(lin(r(-1, 2))), Update(lag(r(1, 4))), Scale { even: T::one(), odd: r(1, 2) }]
        }
        (Family::LeGall53, Role::Synthesis) => {
            vec![Scale { even: T::one(), odd: r(2, 1) }, Update(lag(r(-1, 4))), Predict(lin(r(1, 2)))]
        }
        (Family::LeGall53, Role::DualAnalysis) => {
            vec![Update(lag(r(1, 2))), Predict(lin(r(-1, 4))), Scale { even: T::one(), odd: r(2, 1) }]
        }
        (Family::Cdf97, role) => {
            let p = Cdf97Params::table();
            let c = |v: &crate::scalar::Rational| T::from_rational(v);
            let zeta: T = p.zeta()?;
            let inv_zeta = T::one() / zeta.clone();
            let analysis = vec![
                Predict(lin(c(&p.alpha))),
                Update(lag(c(&p.beta))),
                Predict(lin(c(&p.gamma))),
                Update(lag(c(&p.delta))),
                Scale { even: zeta.clone(), odd: inv_zeta.clone() },
            ];
            match role {
                Role::Analysis => analysis,
                Role::DualAnalysis => vec![
                    Update(lag(-c(&p.alpha))),
                    Predict(lin(-c(&p.beta))),
                    Update(lag(-c(&p.gamma))),
                    Predict(lin(-c(&p.delta))),
                    Scale { even: inv_zeta, odd: zeta },
                ],
                Role::Synthesis => {
                    return LiftingScheme::new(analysis, Some(family), Role::Analysis).inverted();
                }
            }
        }
        (Family::Daub4Causal, role) => {
            let sqrt3 = T::from_i64(3)
                .sqrt()
                .ok_or_else(|| Error::NotImplemented("daub4 needs √3; use a floating-point field".into()))?;
            let sqrt2 = T::from_i64(2)
                .sqrt()
                .ok_or_else(|| Error::NotImplemented("daub4 needs √2; use a floating-point field".into()))?;
            let one = T::one();
            let k_even = (sqrt3.clone() + one.clone()) / sqrt2.clone();
            let k_odd = (sqrt3.clone() - one.clone()) / sqrt2;
            let four = T::from_i64(4);
            let update =
                LaurentPoly::new(0, vec![sqrt3.clone() / four.clone(), (sqrt3.clone() - T::from_i64(2)) / four]);
            let z_inv = LaurentPoly::monomial(one.clone(), 1);
            match role {
                Role::Analysis | Role::DualAnalysis => vec![
                    Predict(LaurentPoly::constant(-sqrt3)),
                    Update(update),
                    Fused(PolyphaseMatrix::new([
                        [LaurentPoly::one(), LaurentPoly::zero()],
                        [LaurentPoly::one(), z_inv],
                    ])),
                    Scale { even: k_even, odd: k_odd },
                ],
                Role::Synthesis => vec![
                    Scale { even: k_odd, odd: k_even },
                    Fused(PolyphaseMatrix::new([
                        [z_inv, LaurentPoly::zero()],
                        [LaurentPoly::constant(-one), LaurentPoly::one()],
                    ])),
                    Update(-update),
                    Predict(LaurentPoly::constant(sqrt3)),
                ],
            }
        }
    };
    Ok(LiftingScheme::new(steps, Some(family), role))
}

/// Factorizes a polyphase matrix with monomial determinant into lifting steps
/// by iterated Laurent division on its first row.
///
/// The returned scheme expands to `p` exactly (up to floating-point cleanup of
/// negligible coefficients in `f64`).
pub fn euclidean_factorize<T: Scalar>(p: &PolyphaseMatrix<T>) -> Result<LiftingScheme<T>> {
    let role = p.role.unwrap_or(Role::Analysis);
    let p = p.cleaned();
    if p.det_monomial().is_none() {
        return Err(Error::Factorization("determinant is not a monomial".into()));
    }
    let mut steps = Vec::new();
    let mut m = p.clone();
    // Column operations M ← M·E⁻¹ peel lifting factors off the right; each
    // peeled factor is applied before all factors peeled after it.
    let mut guard = 0usize;
    while !m.entries[0][0].is_zero() && !m.entries[0][1].is_zero() {
        guard += 1;
        if guard > 256 {
            return Err(Error::Factorization("division chain does not terminate".into()));
        }
        let (a, b) = (&m.entries[0][0], &m.entries[0][1]);
        let step = if a.degree() >= b.degree() {
            let (q, _) = a.div_rem(b)?;
            LiftingStep::Predict(q.cleaned())
        } else {
            let (q, _) = b.div_rem(a)?;
            LiftingStep::Update(q.cleaned())
        };
        let undo = step.inverse().expect("lifting steps are invertible").matrix();
        m = m.mul(&undo).cleaned();
        steps.push(step);
    }
    if m.entries[0][0].is_zero() {
        // row is (0, g): move g into the first column with two more lifts
        for step in [LiftingStep::Predict(-LaurentPoly::one()), LiftingStep::Update(LaurentPoly::one())] {
            let undo = step.inverse().expect("lifting steps are invertible").matrix();
            m = m.mul(&undo).cleaned();
            steps.push(step);
        }
    }
    let [[g, _], [c, d]] = &m.entries;
    let (gc, gd) =
        g.as_monomial().ok_or_else(|| Error::Factorization(format!("gcd {g} of the first row is not a monomial")))?;
    let (dc, dd) =
        d.as_monomial().ok_or_else(|| Error::Factorization(format!("remaining diagonal {d} is not a monomial")))?;
    let lower = (c * &LaurentPoly::monomial(T::one() / dc.clone(), -dd)).cleaned();
    if !lower.is_zero() {
        steps.push(LiftingStep::Predict(lower));
    }
    if gd == 0 && dd == 0 {
        steps.push(LiftingStep::Scale { even: gc, odd: dc });
    } else {
        steps.push(LiftingStep::Fused(PolyphaseMatrix::diagonal(g.clone(), d.clone())));
    }
    Ok(LiftingScheme::new(steps, None, role))
}

fn split_phases<T: Scalar>(x: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    if !x.len().is_multiple_of(2) || x.is_empty() {
        return Err(Error::Dimension(format!("transform input length {} is not a positive even number", x.len())));
    }
    Ok((x.iter().step_by(2).cloned().collect(), x.iter().skip(1).step_by(2).cloned().collect()))
}

fn check_analysis_role(role: Role) -> Result<()> {
    match role {
        Role::Analysis | Role::DualAnalysis => Ok(()),
        Role::Synthesis => Err(Error::Contract("forward transform needs an analysis or dual-analysis scheme".into())),
    }
}

/// One analysis level by lifting, in place on the two phase buffers.
pub fn forward_lift<T: Scalar>(s: &LiftingScheme<T>, x: &[T]) -> Result<DwtPair<T>> {
    let mut count = OpCount::default();
    forward_lift_counted(s, x, &mut count)
}

/// [`forward_lift`] that also accumulates the arithmetic cost of every step.
pub fn forward_lift_counted<T: Scalar>(s: &LiftingScheme<T>, x: &[T], count: &mut OpCount) -> Result<DwtPair<T>> {
    check_analysis_role(s.role)?;
    let (mut even, mut odd) = split_phases(x)?;
    for step in &s.steps {
        step.apply(&mut even, &mut odd);
        *count += step.op_count(even.len());
    }
    Ok(DwtPair { approx: even, detail: odd })
}

/// One analysis level by direct circular convolution with the polyphase entries.
pub fn forward_direct<T: Scalar>(p: &PolyphaseMatrix<T>, x: &[T]) -> Result<DwtPair<T>> {
    let (even, odd) = split_phases(x)?;
    let (approx, detail) = apply_matrix(p, &even, &odd);
    Ok(DwtPair { approx, detail })
}

/// Reassembles a sequence from one transform level.
pub fn inverse_lift<T: Scalar>(s: &LiftingScheme<T>, pair: &DwtPair<T>) -> Result<Vec<T>> {
    if s.role != Role::Synthesis {
        return Err(Error::Contract(format!("inverse transform needs a synthesis scheme, got {}", s.role)));
    }
    if pair.approx.len() != pair.detail.len() {
        return Err(Error::Dimension("approximation and detail lengths differ".into()));
    }
    let mut even = pair.approx.clone();
    let mut odd = pair.detail.clone();
    for step in &s.steps {
        step.apply(&mut even, &mut odd);
    }
    Ok(even.into_iter().zip(odd).flat_map(|(e, o)| [e, o]).collect())
}

/// The polyphase matrix a scheme is expected to reproduce.
pub fn reference_matrix<T: Scalar>(family: Family, role: Role) -> Result<PolyphaseMatrix<T>> {
    Ok(build_polyphase(&FilterQuadruple::for_family(family)?, role))
}
