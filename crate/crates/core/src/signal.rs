//! Complex sample sequences, LFM chirps, point-target backscatter and the
//! time-domain correlation oracles every transform result is checked against.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A finite sequence of complex samples.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexSeq {
    pub samples: Vec<Complex64>,
}

impl ComplexSeq {
    pub fn new(samples: Vec<Complex64>) -> Self {
        Self { samples }
    }

    pub fn zeros(len: usize) -> Self {
        Self { samples: vec![Complex64::new(0.0, 0.0); len] }
    }

    pub fn from_real(re: &[f64]) -> Self {
        Self { samples: re.iter().map(|&r| Complex64::new(r, 0.0)).collect() }
    }

    pub fn from_parts(re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::Dimension(format!("real part has {} samples, imaginary {}", re.len(), im.len())));
        }
        Ok(Self { samples: re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect() })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn re(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.im).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.samples.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|c| c.is_finite())
    }

    /// Checks the invariants of a transform input: power-of-two length and
    /// finite samples.
    pub fn validate_for_transform(&self) -> Result<()> {
        if !self.len().is_power_of_two() {
            return Err(Error::Dimension(format!("sequence length {} is not a power of two", self.len())));
        }
        if !self.is_finite() {
            return Err(Error::Parameter("sequence contains non-finite samples".into()));
        }
        Ok(())
    }

    /// Zero-pads to the next power of two (a no-op at powers of two).
    pub fn padded_to_pow2(&self) -> Self {
        let mut samples = self.samples.clone();
        samples.resize(self.len().next_power_of_two(), Complex64::new(0.0, 0.0));
        Self { samples }
    }

    pub fn shifted(&self, l: i64) -> Self {
        Self { samples: circ_shift(&self.samples, l) }
    }
}

/// Linear-FM pulse parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChirpParams {
    /// Chirp rate `K` in Hz/s.
    pub chirp_rate: f64,
    /// Pulse duration `T_p` in seconds.
    pub pulse_duration: f64,
}

impl ChirpParams {
    /// Parameters with bandwidth `B` (Hz) and duration `T_p` (s): `K = B / T_p`.
    pub fn from_bandwidth(bandwidth: f64, pulse_duration: f64) -> Self {
        Self { chirp_rate: bandwidth / pulse_duration, pulse_duration }
    }

    /// Parameters with bandwidth `B` and time-bandwidth product `BT_p`.
    pub fn from_time_bandwidth(bandwidth: f64, time_bandwidth: f64) -> Self {
        Self::from_bandwidth(bandwidth, time_bandwidth / bandwidth)
    }

    /// `B = K · T_p`, also the sampling rate.
    pub fn bandwidth(&self) -> f64 {
        self.chirp_rate * self.pulse_duration
    }

    pub fn time_bandwidth(&self) -> f64 {
        self.bandwidth() * self.pulse_duration
    }

    pub fn sample_count(&self) -> usize {
        self.time_bandwidth().round() as usize
    }
}

/// `x[n] = exp(iπK(n/B − T_p/2)²)` for `n = 0 .. round(B·T_p) − 1`, sampled at
/// `B` samples per second with the pulse centred on the time origin.
pub fn gen_chirp(params: &ChirpParams) -> Result<ComplexSeq> {
    let ChirpParams { chirp_rate: k, pulse_duration: tp } = *params;
    if !(k > 0.0 && k.is_finite()) || !(tp > 0.0 && tp.is_finite()) {
        return Err(Error::Parameter(format!("chirp rate {k} and pulse duration {tp} must be positive")));
    }
    let n = params.sample_count();
    if n < 2 {
        return Err(Error::Parameter(format!(
            "time-bandwidth product {} yields fewer than 2 samples",
            params.time_bandwidth()
        )));
    }
    let b = params.bandwidth();
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / b - tp / 2.0;
            Complex64::from_polar(1.0, PI * k * t * t)
        })
        .collect();
    Ok(ComplexSeq { samples })
}

/// A point scatterer: integer sample delay and complex reflectivity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Target {
    pub delay: usize,
    pub reflectivity: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TargetScene {
    pub targets: Vec<Target>,
    /// Receive window length `L_w` in samples.
    pub window: usize,
}

impl TargetScene {
    pub fn validate(&self) -> Result<()> {
        if self.targets.is_empty() {
            return Err(Error::Parameter("target scene is empty".into()));
        }
        if let Some(t) = self.targets.iter().find(|t| t.delay >= self.window) {
            return Err(Error::Parameter(format!(
                "target delay {} is outside the window of {} samples",
                t.delay, self.window
            )));
        }
        if self.targets.iter().any(|t| !t.reflectivity.is_finite()) {
            return Err(Error::Parameter("target reflectivity must be finite".into()));
        }
        Ok(())
    }
}

/// `y[n] = Σ σ_k x[n − d_k]` over a window of `L_w` samples. Copies that run
/// past the end of the window wrap around to its start.
pub fn gen_backscatter(chirp: &ComplexSeq, scene: &TargetScene) -> Result<ComplexSeq> {
    scene.validate()?;
    if chirp.len() > scene.window {
        return Err(Error::Dimension(format!(
            "chirp of {} samples does not fit the window of {} samples",
            chirp.len(),
            scene.window
        )));
    }
    let mut out = ComplexSeq::zeros(scene.window);
    for t in &scene.targets {
        for (n, &c) in chirp.samples.iter().enumerate() {
            out.samples[(n + t.delay) % scene.window] += t.reflectivity * c;
        }
    }
    Ok(out)
}

/// `result[n] = v[(n + l) mod L]`.
pub fn circ_shift<T: Clone>(v: &[T], l: i64) -> Vec<T> {
    if v.is_empty() {
        return Vec::new();
    }
    let s = l.rem_euclid(v.len() as i64) as usize;
    v[s..].iter().chain(&v[..s]).cloned().collect()
}

fn check_equal(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!("sequence lengths differ: {a} vs {b}")));
    }
    Ok(())
}

/// `Σ conj(x[n]) · y[n]`.
pub fn inner_product(x: &ComplexSeq, y: &ComplexSeq) -> Result<Complex64> {
    check_equal(x.len(), y.len())?;
    Ok(x.samples.iter().zip(&y.samples).map(|(a, b)| a.conj() * b).sum())
}

/// Circular correlation values indexed by lag.
#[derive(Clone, Debug, PartialEq)]
pub struct LagSeries<V> {
    /// Lag of `values[0]`.
    pub first_lag: i64,
    pub values: Vec<V>,
}

impl<V: Clone> LagSeries<V> {
    pub fn lags(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.values.len() as i64).map(move |i| self.first_lag + i)
    }

    /// Value at `lag`, which must lie inside the stored window.
    pub fn at(&self, lag: i64) -> Option<&V> {
        usize::try_from(lag - self.first_lag).ok().and_then(|i| self.values.get(i))
    }
}

/// `R[l] = Σ_n conj(x[(n + l) mod L]) · y[n]` for every lag `l ∈ [−L, L−1]`,
/// by direct double loop.
pub fn circ_corr_bruteforce(x: &ComplexSeq, y: &ComplexSeq) -> Result<LagSeries<Complex64>> {
    check_equal(x.len(), y.len())?;
    let len = x.len() as i64;
    let values = (-len..len)
        .map(|l| (0..len).map(|n| x.samples[(n + l).rem_euclid(len) as usize].conj() * y.samples[n as usize]).sum())
        .collect();
    Ok(LagSeries { first_lag: -len, values })
}

/// Real circular correlation `R[l] = Σ x[(n + l) mod L] · y[n]` for the
/// circular lags `l = 0 .. L−1`, in any coefficient field.
pub fn circ_corr_real<T: Scalar>(x: &[T], y: &[T]) -> Result<Vec<T>> {
    check_equal(x.len(), y.len())?;
    let len = x.len();
    Ok((0..len).map(|l| (0..len).fold(T::zero(), |acc, n| acc + x[(n + l) % len].clone() * y[n].clone())).collect())
}

/// Real inner product in any coefficient field.
pub fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// Maps a circular lag in `[0, L)` to the reporting window `[−L/2, L/2 − 1]`.
pub fn centered_lag(lag: usize, len: usize) -> i64 {
    let (lag, len) = (lag as i64, len as i64);
    if lag >= len / 2 {
        lag - len
    } else {
        lag
    }
}
