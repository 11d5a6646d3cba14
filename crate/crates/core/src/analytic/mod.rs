//! Closed-form engine.
//!
//! Every amplitude moves by the same shift each step, so the whole
//! trajectory follows from the two group averages. Those obey a linear
//! recurrence whose matrix has eigenvalues `e^{±iω}` with `cos ω = 1 - 2r/N`:
//!
//! ```text
//! k̄(t) = k̄(0)·cos ωt + l̄(0)·√((N-r)/r)·sin ωt
//! l̄(t) = l̄(0)·cos ωt - k̄(0)·√(r/(N-r))·sin ωt
//! ```
//!
//! Per-state amplitudes are recovered from the constants of motion
//! `Δk_i = k_i - k̄` and `Δl_i = (-1)^t·(l_i - l̄)`.

mod diagonal;
mod plan;

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::{Geometry, SearchConfig};
use crate::error::{Error, Result};
use crate::state::{AmplitudeState, SummaryStats};
use crate::tolerance;

pub use diagonal::{verify_diagonalization, DiagonalizationReport};
pub use plan::{MeasurementPlan, PlanMethod};

/// Amplitude-phase parameters: `k̄(t) = α·sin(ωt+φ)`, `l̄(t) = β·cos(ωt+φ)`.
///
/// Only defined when `k̄(0)/l̄(0)` is real. α and β then share the common
/// complex phase of the two averages and have moduli
/// `√(k̄² + l̄²·(N-r)/r)` and `√(l̄² + k̄²·r/(N-r))` of the real
/// representatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseForm {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq)]
struct Deviations {
    config: Arc<SearchConfig>,
    marked: Vec<Complex64>,
    unmarked: Vec<Complex64>,
}

/// Exact solution of the dynamics from a given initial condition.
///
/// Immutable once built. Built from a full state it can reconstruct every
/// amplitude; built from summary statistics alone ("scalar-only") it still
/// supports all averages, probabilities and planning.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormSolution {
    geometry: Geometry,
    omega: f64,
    k_bar0: Complex64,
    l_bar0: Complex64,
    sigma_l_sq: f64,
    p_max: f64,
    origin_step: u64,
    phase: Option<PhaseForm>,
    deviations: Option<Deviations>,
}

impl ClosedFormSolution {
    /// Solves from an explicit state, keeping the per-state deviations.
    ///
    /// Times passed to the evaluation methods are relative to `initial`;
    /// [`reconstruct`](Self::reconstruct) stamps absolute step numbers.
    pub fn solve(initial: &AmplitudeState) -> Result<Self> {
        let stats = initial.stats();
        let config = initial.shared_config().clone();
        let marked = initial
            .marked_amplitudes()
            .map(|k| k - stats.k_bar)
            .collect();
        let unmarked = initial
            .unmarked_amplitudes()
            .map(|l| l - stats.l_bar)
            .collect();
        let mut sol = Self::build(
            config.geometry(),
            stats.k_bar,
            stats.l_bar,
            stats.sigma_l_sq,
        );
        sol.origin_step = initial.step();
        sol.deviations = Some(Deviations {
            config,
            marked,
            unmarked,
        });
        Ok(sol)
    }

    /// Solves from summary statistics only.
    pub fn from_stats(geometry: Geometry, stats: &SummaryStats) -> Result<Self> {
        if stats.sigma_k_sq < 0.0 {
            return Err(Error::InconsistentSummary(format!(
                "negative marked variance {}",
                stats.sigma_k_sq
            )));
        }
        let residual = stats.normalization_residual(geometry);
        if residual.abs() > tolerance::STATE_NORM {
            return Err(Error::InconsistentSummary(format!(
                "normalization residual {residual:e}"
            )));
        }
        Self::from_scalars(geometry, stats.k_bar, stats.l_bar, stats.sigma_l_sq)
    }

    /// Solves from `k̄(0)`, `l̄(0)` and `σ_l²(0)`, which is all the planner
    /// needs. The marked variance is implied by normalization and must come
    /// out non-negative.
    pub fn from_scalars(
        geometry: Geometry,
        k_bar0: Complex64,
        l_bar0: Complex64,
        sigma_l_sq: f64,
    ) -> Result<Self> {
        let finite = [k_bar0.re, k_bar0.im, l_bar0.re, l_bar0.im, sigma_l_sq]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InconsistentSummary("non-finite input".into()));
        }
        if sigma_l_sq < 0.0 {
            return Err(Error::InconsistentSummary(format!(
                "negative unmarked variance {sigma_l_sq}"
            )));
        }
        let sol = Self::build(geometry, k_bar0, l_bar0, sigma_l_sq);
        // r·σ_k² = P(0) - r·|k̄|² must not be negative.
        let marked_spread =
            sol.success_probability_unchecked(0.0) - geometry.r_f64() * k_bar0.norm_sqr();
        if marked_spread < -tolerance::STATE_NORM || sol.p_max > 1.0 + tolerance::STATE_NORM {
            return Err(Error::InconsistentSummary(format!(
                "averages and variance exceed unit norm (P_max={}, r·σ_k²={marked_spread:e})",
                sol.p_max
            )));
        }
        Ok(sol)
    }

    fn build(geometry: Geometry, k_bar0: Complex64, l_bar0: Complex64, sigma_l_sq: f64) -> Self {
        let p_max = 1.0 - geometry.unmarked_f64() * sigma_l_sq;
        Self {
            geometry,
            omega: geometry.omega(),
            k_bar0,
            l_bar0,
            sigma_l_sq,
            p_max,
            origin_step: 0,
            phase: phase_form_parameters(geometry, k_bar0, l_bar0),
            deviations: None,
        }
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn k_bar0(&self) -> Complex64 {
        self.k_bar0
    }

    pub fn l_bar0(&self) -> Complex64 {
        self.l_bar0
    }

    pub fn sigma_l_sq(&self) -> f64 {
        self.sigma_l_sq
    }

    /// `1 - (N-r)·σ_l²`, the time-independent ceiling on `P(t)`.
    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// `None` when the ratio of initial averages is not real.
    pub fn phase(&self) -> Option<&PhaseForm> {
        self.phase.as_ref()
    }

    pub fn has_real_ratio(&self) -> bool {
        self.phase.is_some()
    }

    pub fn is_scalar_only(&self) -> bool {
        self.deviations.is_none()
    }

    /// Step number of the state the solution was built from.
    pub fn origin_step(&self) -> u64 {
        self.origin_step
    }

    pub fn deviations_marked(&self) -> Option<&[Complex64]> {
        self.deviations.as_ref().map(|d| d.marked.as_slice())
    }

    pub fn deviations_unmarked(&self) -> Option<&[Complex64]> {
        self.deviations.as_ref().map(|d| d.unmarked.as_slice())
    }

    /// Amplitude period in steps, `2π/ω`.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }

    /// `(k̄(t), l̄(t))` at integer step `t`.
    pub fn average_amplitudes(&self, t: u64) -> (Complex64, Complex64) {
        self.average_amplitudes_at(t as f64)
    }

    /// `(k̄(t), l̄(t))` with the closed form continued to real `t`.
    pub fn average_amplitudes_at(&self, t: f64) -> (Complex64, Complex64) {
        let (sin, cos) = (self.omega * t).sin_cos();
        let g = self.geometry;
        let k = self.k_bar0 * cos + self.l_bar0 * (g.unmarked_over_marked_sqrt() * sin);
        let l = self.l_bar0 * cos - self.k_bar0 * (g.marked_over_unmarked_sqrt() * sin);
        (k, l)
    }

    /// `(α·sin(ωt+φ), β·cos(ωt+φ))`.
    pub fn phase_form(&self, t: u64) -> Result<(Complex64, Complex64)> {
        self.phase_form_at(t as f64)
    }

    pub fn phase_form_at(&self, t: f64) -> Result<(Complex64, Complex64)> {
        let p = self.phase.ok_or(Error::ComplexRatio)?;
        let (sin, cos) = (self.omega * t + p.phi).sin_cos();
        Ok((p.alpha * sin, p.beta * cos))
    }

    /// Full statevector `t` steps after the initial state:
    /// `k_i = k̄(t) + Δk_i`, `l_i = l̄(t) + (-1)^t·Δl_i`.
    pub fn reconstruct(&self, t: u64) -> Result<AmplitudeState> {
        let dev = self.deviations.as_ref().ok_or(Error::ScalarOnly)?;
        let (k, l) = self.average_amplitudes(t);
        let sign = if t.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut amps = vec![Complex64::new(0.0, 0.0); dev.config.n_states()];
        for (&i, d) in dev.config.marked().iter().zip(&dev.marked) {
            amps[i] = k + d;
        }
        for (i, d) in dev.config.unmarked().zip(&dev.unmarked) {
            amps[i] = l + d * sign;
        }
        AmplitudeState::from_parts_unchecked(dev.config.clone(), amps, self.origin_step + t)
    }

    /// `P(t) = P_max - (N-r)·|l̄(t)|²`.
    ///
    /// # Panics
    ///
    /// If the result leaves `[-1e-10, 1 + 1e-10]`, which means the solution
    /// was built from an unnormalized state.
    pub fn success_probability(&self, t: u64) -> f64 {
        self.success_probability_at(t as f64)
    }

    pub fn success_probability_at(&self, t: f64) -> f64 {
        let p = self.success_probability_unchecked(t);
        assert!(
            (-tolerance::PROBABILITY_SLACK..=1.0 + tolerance::PROBABILITY_SLACK).contains(&p),
            "analytic success probability {p} outside [0, 1] at t={t}"
        );
        p
    }

    fn success_probability_unchecked(&self, t: f64) -> f64 {
        let (_, l) = self.average_amplitudes_at(t);
        self.p_max - self.geometry.unmarked_f64() * l.norm_sqr()
    }
}

/// `Some` when `Im(k̄·conj(l̄))` is negligible relative to `|k̄|·|l̄|`.
fn phase_form_parameters(g: Geometry, k_bar0: Complex64, l_bar0: Complex64) -> Option<PhaseForm> {
    let scale = k_bar0.norm() * l_bar0.norm();
    if scale > 0.0 && (k_bar0 * l_bar0.conj()).im.abs() > tolerance::REAL_RATIO * scale {
        return None;
    }
    // Rotate both averages by their shared phase to get real representatives.
    let common = if k_bar0.im == 0.0 && l_bar0.im == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if l_bar0.norm() >= k_bar0.norm() {
        l_bar0 / l_bar0.norm()
    } else {
        k_bar0 / k_bar0.norm()
    };
    let k = (k_bar0 * common.conj()).re;
    let l = (l_bar0 * common.conj()).re;

    let x = k * g.marked_over_unmarked_sqrt();
    let beta = x.hypot(l);
    let alpha = beta * g.unmarked_over_marked_sqrt();
    let phi = if beta == 0.0 { FRAC_PI_2 } else { x.atan2(l) };
    Some(PhaseForm {
        alpha: common * alpha,
        beta: common * beta,
        phi,
    })
}
