//! Operation counts of the analytic-signal SIDWT against the closed-form
//! computational-load formulas.

use std::collections::BTreeMap;
use std::fmt;

use liftcorr_core::lifting::scheme_for;
use liftcorr_core::sidwt::{sidwt_decompose_counted, SidwtOps};
use liftcorr_core::signal::ComplexSeq;
use liftcorr_core::{Family, OpCount, Role};
use num_complex::Complex64;

use crate::config::RunConfig;
use crate::error::Result;

/// Load coefficients `4·C₀` of `coefficient · L_w · log₂ L_w` for a
/// filterbank realized by lifting steps and by symmetric convolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoadCoefficients {
    pub lifting: u64,
    pub symmetric: u64,
}

impl LoadCoefficients {
    pub fn for_family(family: Family) -> Option<Self> {
        match family {
            Family::LeGall53 => Some(Self { lifting: 10, symmetric: 36 }),
            Family::Cdf97 => Some(Self { lifting: 32, symmetric: 44 }),
            Family::Daub4Causal => None,
        }
    }
}

/// `coefficient · len · log₂ len` for a power-of-two `len`.
pub fn formula_value(coefficient: u64, len: usize) -> u64 {
    assert!(len.is_power_of_two(), "formula length {len} is not a power of two");
    coefficient * len as u64 * u64::from(len.trailing_zeros())
}

/// Accumulated counts keyed by (family, level, branch). Contributions are
/// added commutatively, so totals do not depend on scheduling.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    breakdown: BTreeMap<(Family, usize, usize), OpCount>,
}

impl OpCounter {
    pub fn record(&mut self, family: Family, ops: &SidwtOps) {
        for (j, level) in ops.per_branch.iter().enumerate() {
            for (r, &count) in level.iter().enumerate() {
                *self.breakdown.entry((family, j + 1, r)).or_default() += count;
            }
        }
    }

    pub fn reset(&mut self) {
        self.breakdown.clear();
    }

    pub fn breakdown(&self) -> &BTreeMap<(Family, usize, usize), OpCount> {
        &self.breakdown
    }

    pub fn total(&self) -> OpCount {
        self.breakdown.values().copied().sum()
    }

    pub fn level(&self, family: Family, level: usize) -> OpCount {
        self.breakdown.iter().filter(|((f, j, _), _)| *f == family && *j == level).map(|(_, &c)| c).sum()
    }

    /// Multiplications with power-of-two constants counted as multiplies.
    pub fn mul_count(&self) -> u64 {
        self.total().float_mul()
    }

    pub fn add_count(&self) -> u64 {
        self.total().add
    }
}

/// Counts the SIDWT of both parts of `signal` to depth `scales`.
pub fn count_analytic_sidwt(signal: &ComplexSeq, family: Family, scales: usize) -> Result<OpCounter> {
    let scheme = scheme_for::<f64>(family, Role::Analysis)?;
    let mut counter = OpCounter::default();
    for part in [signal.re(), signal.im()] {
        let (_, ops) = sidwt_decompose_counted(&part, &scheme, scales)?;
        counter.record(family, &ops);
    }
    Ok(counter)
}

/// Multiplications plus additions under both counting conventions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weighted {
    /// Every constant multiplication is a multiply.
    pub float: u64,
    /// Power-of-two multiplications are free shifts.
    pub shift_add: u64,
}

impl From<OpCount> for Weighted {
    fn from(c: OpCount) -> Self {
        Self { float: c.float_mul() + c.add, shift_add: c.mul + c.add }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyBench {
    pub family: Family,
    pub len: usize,
    pub scales: usize,
    pub coefficients: Option<LoadCoefficients>,
    /// Counts at the configured depth.
    pub measured: OpCounter,
    /// Counts at full depth `log₂ L`, the depth the formulas assume.
    pub full_depth: OpCount,
    /// Totals at the configured depth for lengths `L`, `2L`, `4L`.
    pub scaling: Vec<(usize, OpCount)>,
}

impl FamilyBench {
    pub fn formula_lifting(&self) -> Option<u64> {
        self.coefficients.map(|c| formula_value(c.lifting, self.len))
    }

    pub fn formula_symmetric(&self) -> Option<u64> {
        self.coefficients.map(|c| formula_value(c.symmetric, self.len))
    }

    /// Ratios of consecutive scaling totals (float convention).
    pub fn scaling_ratios(&self) -> Vec<f64> {
        self.scaling
            .windows(2)
            .map(|w| Weighted::from(w[1].1).float as f64 / Weighted::from(w[0].1).float as f64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub families: Vec<FamilyBench>,
}

impl BenchReport {
    pub fn family(&self, family: Family) -> Option<&FamilyBench> {
        self.families.iter().find(|b| b.family == family)
    }
}

/// Runs the counted SIDWT of the configured chirp for every family.
pub fn run(config: &RunConfig) -> Result<BenchReport> {
    let scenario = config.scenario()?;
    let len = config.padded_len();
    let padded = |n: usize| {
        let mut s = scenario.chirp.samples.clone();
        s.resize(n, Complex64::new(0.0, 0.0));
        ComplexSeq::new(s)
    };
    let families = Family::ALL
        .iter()
        .map(|&family| {
            let measured = count_analytic_sidwt(&scenario.template, family, config.scales)?;
            let full_depth = count_analytic_sidwt(&scenario.template, family, len.trailing_zeros() as usize)?.total();
            let scaling = [len, 2 * len, 4 * len]
                .into_iter()
                .map(|n| Ok((n, count_analytic_sidwt(&padded(n), family, config.scales)?.total())))
                .collect::<Result<Vec<_>>>()?;
            Ok(FamilyBench {
                family,
                len,
                scales: config.scales,
                coefficients: LoadCoefficients::for_family(family),
                measured,
                full_depth,
                scaling,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchReport { families })
}

impl fmt::Display for FamilyBench {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, log) = (self.len, self.len.trailing_zeros());
        writeln!(f, "family {}  L_w = {l}  J = {}", self.family, self.scales)?;
        match self.coefficients {
            Some(c) => {
                writeln!(
                    f,
                    "  formula lifting   {}·L_w·log2(L_w) = {}·{l}·{log} = {}",
                    c.lifting,
                    c.lifting,
                    formula_value(c.lifting, l)
                )?;
                writeln!(
                    f,
                    "  formula symmetric {}·L_w·log2(L_w) = {}·{l}·{log} = {}",
                    c.symmetric,
                    c.symmetric,
                    formula_value(c.symmetric, l)
                )?;
                writeln!(f, "  lifting vs symmetric convolution: {} vs {}", c.lifting, c.symmetric)?;
            }
            None => writeln!(f, "  formula: no tabulated load for this family")?,
        }
        let t = self.measured.total();
        writeln!(
            f,
            "  measured J = {}: float MUL {} ADD {}; shift-add MUL {} SHIFT {} ADD {}",
            self.scales,
            t.float_mul(),
            t.add,
            t.mul,
            t.shift,
            t.add
        )?;
        for j in 1..=self.scales {
            let c = self.measured.level(self.family, j);
            writeln!(f, "    level {j}: MUL {} SHIFT {} ADD {}", c.mul, c.shift, c.add)?;
        }
        let w = Weighted::from(self.full_depth);
        write!(f, "  measured full depth J = {log}: weighted float {} shift-add {}", w.float, w.shift_add)?;
        match self.formula_lifting() {
            Some(formula) => writeln!(
                f,
                "; ratio to lifting formula float {:.4} shift-add {:.4}",
                w.float as f64 / formula as f64,
                w.shift_add as f64 / formula as f64
            )?,
            None => writeln!(f)?,
        }
        write!(f, "  scaling at J = {}:", self.scales)?;
        for (n, c) in &self.scaling {
            write!(f, " L={n} ops {}", Weighted::from(*c).float)?;
        }
        let ratios: Vec<String> = self.scaling_ratios().iter().map(|r| format!("{r:.4}")).collect();
        writeln!(f, " (ratios {})", ratios.join(", "))
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.families {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values_match_hand_computation() {
        assert_eq!(formula_value(10, 256), 20480);
        assert_eq!(formula_value(32, 256), 65536);
        assert_eq!(formula_value(44, 8), 1056);
    }

    #[test]
    fn counter_totals_are_order_independent() {
        let ops = |a| SidwtOps { per_branch: vec![vec![OpCount { mul: a, shift: 1, add: 2 }; 2]] };
        let (mut x, mut y) = (OpCounter::default(), OpCounter::default());
        x.record(Family::Cdf97, &ops(1));
        x.record(Family::Cdf97, &ops(5));
        y.record(Family::Cdf97, &ops(5));
        y.record(Family::Cdf97, &ops(1));
        assert_eq!(x, y);
        assert_eq!((x.mul_count(), x.add_count()), (16, 8));
        x.reset();
        assert_eq!(x.total(), OpCount::default());
    }

    #[test]
    fn lifting_costs_per_level_equal_one_pair_per_sample() {
        let s = ComplexSeq::new((0..64).map(|n| Complex64::new(n as f64, -(n as f64))).collect());
        let c = count_analytic_sidwt(&s, Family::LeGall53, 3).unwrap();
        // each level performs 64 pair updates per real part
        for j in 1..=3 {
            assert_eq!(c.level(Family::LeGall53, j), OpCount { mul: 0, shift: 3, add: 4 }.times(2 * 64));
        }
    }
}
