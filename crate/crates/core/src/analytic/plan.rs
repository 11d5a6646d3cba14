use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ClosedFormSolution;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanMethod {
    ClosedForm,
    NumericScan,
}

/// When to measure, and what the analytic engine predicts for it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPlan {
    /// Real-valued optimum; equals `t_step` for the numeric scan.
    pub t_real: f64,
    pub t_step: u64,
    /// Which vanishing point of `l̄(t)`, counted from the first one at or
    /// after `t = 0`.
    pub j: u64,
    pub predicted_success: f64,
    pub method: PlanMethod,
}

impl ClosedFormSolution {
    /// Optimal measurement time from the vanishing points of `l̄(t)`:
    ///
    /// ```text
    /// T_j = ((j + 1/2)·π - φ) / ω,   φ reduced into (-π/2, π/2]
    /// ```
    ///
    /// which is the arctangent form `((j+½)π - arctan[k̄/l̄·√(r/(N-r))]) /
    /// arccos(1-2r/N)`, extended to `l̄(0) = 0` as `T_j = jπ/ω`. The integer
    /// step is whichever of `floor(T)` and `ceil(T)` has the larger analytic
    /// success probability, the earlier one on a tie.
    ///
    /// Fails with [`Error::ComplexRatio`] if `k̄(0)/l̄(0)` is not real; use
    /// [`optimal_time_numeric`](Self::optimal_time_numeric) instead.
    pub fn optimal_time(&self, j: u64) -> Result<MeasurementPlan> {
        let phase = self.phase().ok_or(Error::ComplexRatio)?;
        let phi = reduce_half_turn(phase.phi);
        let t_real = (((j as f64 + 0.5) * PI - phi) / self.omega()).max(0.0);

        let lo = t_real.floor() as u64;
        let hi = t_real.ceil() as u64;
        let (p_lo, p_hi) = (self.success_probability(lo), self.success_probability(hi));
        let (t_step, predicted_success) = if p_hi > p_lo { (hi, p_hi) } else { (lo, p_lo) };
        Ok(MeasurementPlan {
            t_real,
            t_step,
            j,
            predicted_success,
            method: PlanMethod::ClosedForm,
        })
    }

    /// Exhaustive scan of the analytic `P(t)` over one period of `P`,
    /// `t ∈ [0, ceil(π/ω)]`. Works for complex initial averages, where `l̄(t)`
    /// need not vanish and the ceiling `P_max` may never be reached.
    pub fn optimal_time_numeric(&self) -> MeasurementPlan {
        let (t_step, predicted_success) = (0..=self.scan_horizon())
            .map(|t| (t, self.success_probability(t)))
            .fold((0, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
        MeasurementPlan {
            t_real: t_step as f64,
            t_step,
            j: 0,
            predicted_success,
            method: PlanMethod::NumericScan,
        }
    }

    /// Last step examined by [`optimal_time_numeric`](Self::optimal_time_numeric).
    pub fn scan_horizon(&self) -> u64 {
        (PI / self.omega()).ceil() as u64
    }

    /// Closed form when the ratio of initial averages is real, numeric scan
    /// otherwise.
    pub fn plan(&self, j: u64) -> MeasurementPlan {
        self.optimal_time(j)
            .unwrap_or_else(|_| self.optimal_time_numeric())
    }

    /// Three-term expansion of `T_0` for `r/N ≪ 1`:
    ///
    /// ```text
    /// T ≈ -½·k̄(0)/l̄(0) + (π/4)·√(N/r) - (π/24)·√(r/N)
    /// ```
    pub fn optimal_time_approx(&self) -> Result<f64> {
        if !self.has_real_ratio() {
            return Err(Error::ComplexRatio);
        }
        if self.l_bar0().norm() == 0.0 {
            return Err(Error::VanishingUnmarkedAverage);
        }
        let ratio = (self.k_bar0() / self.l_bar0()).re;
        let g = self.geometry();
        let n_over_r = g.n_f64() / g.r_f64();
        Ok(-0.5 * ratio + PI / 4.0 * n_over_r.sqrt() - PI / 24.0 / n_over_r.sqrt())
    }
}

/// Maps an angle onto its representative modulo π in `(-π/2, π/2]`.
fn reduce_half_turn(phi: f64) -> f64 {
    phi - PI * (phi / PI - 0.5).ceil()
}
