//! Numerical check of the diagonalization behind the closed form.
//!
//! The averages evolve as `v(t+1) = A·v(t)` with `v = (k̄, l̄)` and
//!
//! ```text
//! A = [ a   b ]    a = (N-2r)/N,  b = 2(N-r)/N,  c = 2r/N
//!     [ -c  a ]
//! ```
//!
//! whose eigenvalues `λ± = γ·e^{±iω}` have `γ = √(a² + bc) = 1`. The
//! checks here go through a general eigenvalue solver and an explicit
//! matrix power, so they do not share code with the closed form they
//! validate.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::Serialize;

use super::ClosedFormSolution;
use crate::config::Geometry;
use crate::tolerance;

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalizationReport {
    pub geometry: Geometry,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// `√(a² + bc)`.
    pub gamma: f64,
    /// Moduli of the eigenvalues returned by the solver.
    pub eigen_moduli: [f64; 2],
    /// `|arg λ|` from the solver.
    pub eigen_phase: f64,
    pub omega: f64,
    pub cos_omega_error: f64,
    /// Largest entry of `|S⁻¹·A·S - diag(λ₋, λ₊)|` relative to `‖S‖`.
    pub similarity_error: f64,
    /// Largest `|A^t·v(0) - v(t)|` over the checked horizon.
    pub evolution_error: f64,
    pub horizon: u64,
    pub violations: Vec<String>,
}

impl DiagonalizationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs the diagonalization checks for `geometry`, evolving the initial
/// averages `(k̄(0), l̄(0))` by repeated multiplication with `A` for
/// `horizon` steps.
pub fn verify_diagonalization(
    geometry: Geometry,
    k_bar0: Complex64,
    l_bar0: Complex64,
    horizon: u64,
) -> DiagonalizationReport {
    let n = geometry.n_f64();
    let r = geometry.r_f64();
    let a = (n - 2.0 * r) / n;
    let b = 2.0 * (n - r) / n;
    let c = 2.0 * r / n;
    let gamma = (a * a + b * c).sqrt();
    let omega = geometry.omega();
    let mut violations = Vec::new();

    if (gamma - 1.0).abs() > tolerance::SINGLE_OP {
        violations.push(format!("gamma = {gamma:.17} differs from 1"));
    }
    let cos_omega_error = (omega.cos() - a).abs();
    if cos_omega_error > tolerance::SINGLE_OP {
        violations.push(format!("cos(omega) differs from a by {cos_omega_error:e}"));
    }

    let transfer = Matrix2::new(a, b, -c, a);
    let eigen = transfer.complex_eigenvalues();
    let eigen_moduli = [eigen[0].norm(), eigen[1].norm()];
    let eigen_phase = eigen[0].arg().abs();
    for m in eigen_moduli {
        if (m - 1.0).abs() > tolerance::SINGLE_OP {
            violations.push(format!("eigenvalue modulus {m:.17} differs from 1"));
        }
    }
    if (eigen[0].arg() + eigen[1].arg()).abs() > tolerance::SINGLE_OP {
        violations.push("eigenvalues are not a conjugate pair".into());
    }
    if (eigen_phase - omega).abs() > tolerance::SINGLE_OP {
        violations.push(format!(
            "eigenvalue phase {eigen_phase:.17} differs from omega {omega:.17}"
        ));
    }

    let similarity_error = similarity_residual(geometry, a, b, c, omega);
    if similarity_error > tolerance::SINGLE_OP {
        violations.push(format!("S^-1 A S is off-diagonal by {similarity_error:e}"));
    }

    let closed = ClosedFormSolution::build(geometry, k_bar0, l_bar0, 0.0);
    let transfer_c = transfer.map(|x| Complex64::new(x, 0.0));
    let mut v = Vector2::new(k_bar0, l_bar0);
    let mut evolution_error = 0.0f64;
    for t in 1..=horizon {
        v = transfer_c * v;
        let (k, l) = closed.average_amplitudes(t);
        evolution_error = evolution_error
            .max((v[0] - k).norm())
            .max((v[1] - l).norm());
    }
    if evolution_error > tolerance::ACCUMULATED {
        violations.push(format!(
            "matrix-power evolution deviates from closed form by {evolution_error:e}"
        ));
    }

    DiagonalizationReport {
        geometry,
        a,
        b,
        c,
        gamma,
        eigen_moduli,
        eigen_phase,
        omega,
        cos_omega_error,
        similarity_error,
        evolution_error,
        horizon,
        violations,
    }
}

/// Checks `S⁻¹·A·S = diag(e^{-iω}, e^{iω})` and `S·S⁻¹ = I` with the
/// eigenvector matrix `S = [[i·s, -i·s], [1, 1]]`, `s = √(N/r - 1)`.
fn similarity_residual(g: Geometry, a: f64, b: f64, c: f64, omega: f64) -> f64 {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let s = g.unmarked_over_marked_sqrt();
    let q = g.marked_over_unmarked_sqrt();
    let basis = Matrix2::new(i * s, -i * s, one, one);
    let inverse = Matrix2::new(-i * (q / 2.0), one * 0.5, i * (q / 2.0), one * 0.5);
    let transfer = Matrix2::new(a, b, -c, a).map(|x| Complex64::new(x, 0.0));
    let diag = Matrix2::new(
        Complex64::from_polar(1.0, -omega),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, omega),
    );
    let scale = 1.0 + s;
    let d_err = (inverse * transfer * basis - diag)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let id_err = (basis * inverse - Matrix2::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    d_err.max(id_err) / scale
}
