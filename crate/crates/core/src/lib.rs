//! Generalized Grover search with arbitrary initial amplitude distributions.
//!
//! Two independent engines live here:
//!
//! * [`state`] iterates the oracle phase flip and the inversion about the
//!   average on an explicit complex statevector.
//! * [`analytic`] evaluates the same dynamics in closed form from the
//!   initial marked/unmarked averages, bounds the success probability and
//!   plans the optimal measurement step.
//!
//! [`distributions`] builds reproducible initial states and [`io`] holds the
//! JSON document formats shared with the command-line harness.

pub mod analytic;
pub mod config;
pub mod distributions;
pub mod error;
pub mod io;
pub mod state;
pub mod tolerance;

pub use analytic::{
    verify_diagonalization, ClosedFormSolution, DiagonalizationReport, MeasurementPlan, PhaseForm,
    PlanMethod,
};
pub use config::{Geometry, SearchConfig};
pub use distributions::{generate, ingest, ingest_path, DistributionKind, DistributionSpec};
pub use error::{Error, Result};
pub use state::{AmplitudeState, SummaryStats};

pub use num_complex::Complex64;
