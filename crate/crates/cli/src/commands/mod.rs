mod compare;
mod predict;
mod simulate;
mod sweep;

pub use compare::{compare, run_compare, CompareReport, COMPARE_SCHEMA};
pub use predict::{predict, run_predict, PredictReport, PREDICT_SCHEMA};
pub use simulate::{
    run_simulate, simulate, RunRecord, SeriesPoint, SIMULATE_CSV_HEADER, SIMULATE_SCHEMA,
};
pub use sweep::{
    parse_n_axis, parse_r_token, run_sweep, sweep, SweepReport, SweepRow, SweepSettings,
    SWEEP_CSV_HEADER, SWEEP_SCHEMA,
};

use gsearch_core::{AmplitudeState, ClosedFormSolution};
use serde::Serialize;

/// Largest disagreement seen between the iterative and closed-form engines.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Agreement {
    pub max_amplitude_deviation: f64,
    pub max_probability_deviation: f64,
    pub worst_step: u64,
}

/// Iterates `steps` times, comparing every step against the closed form and
/// handing each state to `observe`.
pub(crate) fn cross_run(
    initial: AmplitudeState,
    sol: &ClosedFormSolution,
    steps: u64,
    mut observe: impl FnMut(&AmplitudeState),
) -> (AmplitudeState, Agreement) {
    let origin = initial.step();
    let mut agreement = Agreement::default();
    let last = initial.run_observed(steps, |st| {
        let t = st.step() - origin;
        let predicted = sol
            .reconstruct(t)
            .expect("solution built from a statevector keeps its deviations");
        let dev = st
            .amplitudes()
            .iter()
            .zip(predicted.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let p_dev = (st.success_probability() - sol.success_probability(t)).abs();
        if dev > agreement.max_amplitude_deviation {
            agreement.max_amplitude_deviation = dev;
            agreement.worst_step = st.step();
        }
        agreement.max_probability_deviation = agreement.max_probability_deviation.max(p_dev);
        observe(st);
    });
    (last, agreement)
}
