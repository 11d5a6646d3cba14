//! Iterative engine: the generalized search step applied to an explicit
//! complex statevector.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{Geometry, SearchConfig};
use crate::error::{Error, Result};
use crate::tolerance;

/// Complex amplitudes over all N basis states at step `t`.
///
/// The step counter is part of the state because the unmarked deviations
/// alternate sign with the parity of `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeState {
    config: Arc<SearchConfig>,
    amplitudes: Vec<Complex64>,
    step: u64,
}

/// Averages and variances of the marked and unmarked amplitudes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub k_bar: Complex64,
    pub l_bar: Complex64,
    pub sigma_k_sq: f64,
    pub sigma_l_sq: f64,
}

impl SummaryStats {
    /// `r·(σ_k² + |k̄|²) + (N-r)·(σ_l² + |l̄|²) - 1`, zero for a normalized
    /// state.
    pub fn normalization_residual(&self, geometry: Geometry) -> f64 {
        geometry.r_f64() * (self.sigma_k_sq + self.k_bar.norm_sqr())
            + geometry.unmarked_f64() * (self.sigma_l_sq + self.l_bar.norm_sqr())
            - 1.0
    }
}

impl AmplitudeState {
    /// Builds a state at step `step`, requiring unit norm within 1e-10.
    pub fn new(
        config: impl Into<Arc<SearchConfig>>,
        amplitudes: Vec<Complex64>,
        step: u64,
    ) -> Result<Self> {
        Self::with_norm_tolerance(config, amplitudes, step, tolerance::STATE_NORM)
    }

    pub fn with_norm_tolerance(
        config: impl Into<Arc<SearchConfig>>,
        amplitudes: Vec<Complex64>,
        step: u64,
        norm_tolerance: f64,
    ) -> Result<Self> {
        let state = Self::from_parts_unchecked(config.into(), amplitudes, step)?;
        let norm = state.norm_sqr();
        if norm.is_nan() || (norm - 1.0).abs() > norm_tolerance {
            return Err(Error::NormViolation {
                norm,
                tolerance: norm_tolerance,
            });
        }
        Ok(state)
    }

    /// Real amplitudes embedded with zero imaginary part.
    pub fn from_real(config: impl Into<Arc<SearchConfig>>, amplitudes: &[f64]) -> Result<Self> {
        let amps = amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(config, amps, 0)
    }

    /// Skips the normalization check but still enforces the length.
    pub(crate) fn from_parts_unchecked(
        config: Arc<SearchConfig>,
        amplitudes: Vec<Complex64>,
        step: u64,
    ) -> Result<Self> {
        if amplitudes.len() != config.n_states() {
            return Err(Error::LengthMismatch {
                got: amplitudes.len(),
                expected: config.n_states(),
            });
        }
        Ok(Self {
            config,
            amplitudes,
            step,
        })
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    pub fn shared_config(&self) -> &Arc<SearchConfig> {
        &self.config
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn geometry(&self) -> Geometry {
        self.config.geometry()
    }

    /// `Σ|a_i|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn marked_amplitudes(&self) -> impl Iterator<Item = Complex64> + Clone + '_ {
        self.config.marked().iter().map(|&i| self.amplitudes[i])
    }

    pub fn unmarked_amplitudes(&self) -> impl Iterator<Item = Complex64> + Clone + '_ {
        self.amplitudes
            .iter()
            .zip(self.config.marked_mask())
            .filter_map(|(&a, &m)| (!m).then_some(a))
    }

    /// `C(t) = (2/N)·[(N-r)·l̄ - r·k̄]`, twice the mean amplitude after the
    /// marked states have been flipped.
    pub fn weighted_average_c(&self) -> Complex64 {
        let signed_sum = compensated_sum(
            self.amplitudes
                .iter()
                .zip(self.config.marked_mask())
                .map(|(&a, &m)| if m { -a } else { a }),
        );
        signed_sum * (2.0 / self.geometry().n_f64())
    }

    /// Oracle half-step: negates every marked amplitude. The step counter is
    /// left alone.
    pub fn phase_flip_marked(mut self) -> Self {
        self.flip_marked_in_place();
        self
    }

    /// Diffusion half-step: `a_i ↦ 2·mean - a_i`.
    pub fn inversion_about_average(mut self) -> Self {
        self.invert_in_place();
        self
    }

    /// One full search step: phase flip followed by inversion about the
    /// average.
    pub fn grover_step(mut self) -> Self {
        self.step_in_place();
        self
    }

    /// Applies `steps` search steps. The norm is never renormalized.
    pub fn run(mut self, steps: u64) -> Self {
        for _ in 0..steps {
            self.step_in_place();
        }
        self
    }

    /// Like [`run`](Self::run) but calls `observe` on the initial state and
    /// after every step.
    pub fn run_observed(mut self, steps: u64, mut observe: impl FnMut(&Self)) -> Self {
        observe(&self);
        for _ in 0..steps {
            self.step_in_place();
            observe(&self);
        }
        self
    }

    pub fn step_in_place(&mut self) {
        self.flip_marked_in_place();
        self.invert_in_place();
        self.step += 1;
    }

    fn flip_marked_in_place(&mut self) {
        for &i in self.config.marked() {
            self.amplitudes[i] = -self.amplitudes[i];
        }
    }

    fn invert_in_place(&mut self) {
        let sum = compensated_sum(self.amplitudes.iter().copied());
        let twice_mean = sum * (2.0 / self.amplitudes.len() as f64);
        for a in &mut self.amplitudes {
            *a = twice_mean - *a;
        }
    }

    /// `P(t) = Σ_marked |k_i|²`.
    pub fn success_probability(&self) -> f64 {
        self.marked_amplitudes().map(|a| a.norm_sqr()).sum()
    }

    /// Averages and variances over the marked and unmarked groups.
    ///
    /// Variances use `|·|²`, so they are real and non-negative for complex
    /// amplitudes. Values are shifted by the first element of each group
    /// before averaging, which makes a constant group yield exactly zero
    /// variance.
    pub fn stats(&self) -> SummaryStats {
        let (k_bar, sigma_k_sq) = mean_and_variance(self.marked_amplitudes());
        let (l_bar, sigma_l_sq) = mean_and_variance(self.unmarked_amplitudes());
        SummaryStats {
            k_bar,
            l_bar,
            sigma_k_sq,
            sigma_l_sq,
        }
    }

    /// Draws a basis index with probability `|a_i|²` from a uniform variate
    /// `u ∈ [0, 1)`.
    pub fn sample_index(&self, u: f64) -> usize {
        let target = u * self.norm_sqr();
        let mut acc = 0.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            acc += a.norm_sqr();
            if target < acc {
                return i;
            }
        }
        self.amplitudes
            .iter()
            .rposition(|a| a.norm_sqr() > 0.0)
            .unwrap_or(0)
    }
}

/// Neumaier-compensated sum, applied to each component. Keeps the mean used
/// by the diffusion step accurate to a few ulps regardless of `N`.
fn compensated_sum(values: impl Iterator<Item = Complex64>) -> Complex64 {
    fn add(sum: &mut f64, comp: &mut f64, x: f64) {
        let t = *sum + x;
        if sum.abs() >= x.abs() {
            *comp += (*sum - t) + x;
        } else {
            *comp += (x - t) + *sum;
        }
        *sum = t;
    }
    let (mut re, mut re_c, mut im, mut im_c) = (0.0, 0.0, 0.0, 0.0);
    for v in values {
        add(&mut re, &mut re_c, v.re);
        add(&mut im, &mut im_c, v.im);
    }
    Complex64::new(re + re_c, im + im_c)
}

fn mean_and_variance<I>(values: I) -> (Complex64, f64)
where
    I: Iterator<Item = Complex64> + Clone,
{
    let mut iter = values.clone();
    let Some(shift) = iter.next() else {
        return (Complex64::new(0.0, 0.0), 0.0);
    };
    let (count, shifted_sum) = values
        .clone()
        .fold((0usize, Complex64::new(0.0, 0.0)), |(c, s), v| {
            (c + 1, s + (v - shift))
        });
    let shifted_mean = shifted_sum / count as f64;
    let variance = values
        .map(|v| (v - shift - shifted_mean).norm_sqr())
        .sum::<f64>()
        / count as f64;
    (shift + shifted_mean, variance)
}
