#![allow(dead_code)]

use gsearch_core::{
    generate, AmplitudeState, Complex64, DistributionKind, DistributionSpec, SearchConfig,
};

pub fn random_complex(n: usize, r: usize, seed: u64) -> AmplitudeState {
    random_state(DistributionKind::RandomComplex, n, r, seed)
}

pub fn random_real(n: usize, r: usize, seed: u64) -> AmplitudeState {
    random_state(DistributionKind::RandomReal, n, r, seed)
}

/// Marks `r` indices spread through the vector rather than the first `r`.
pub fn random_state(kind: DistributionKind, n: usize, r: usize, seed: u64) -> AmplitudeState {
    let stride = n / r;
    let offset = (seed as usize) % stride;
    let cfg = SearchConfig::new(n, (0..r).map(|i| i * stride + offset)).unwrap();
    generate(&DistributionSpec::new(kind, cfg, seed)).unwrap()
}

pub fn uniform(n: usize, r: usize) -> AmplitudeState {
    let cfg = SearchConfig::first_marked(n, r, false).unwrap();
    generate(&DistributionSpec::new(DistributionKind::Uniform, cfg, 0)).unwrap()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Dense `D_ij = 2/N - δ_ij` applied by explicit matrix-vector product.
pub fn dense_diffusion(amps: &[Complex64]) -> Vec<Complex64> {
    let n = amps.len();
    let off = 2.0 / n as f64;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = if i == j { off - 1.0 } else { off };
                    amps[j] * d
                })
                .sum()
        })
        .collect()
}

/// Oracle phase flip as an explicit diagonal `±1` matrix.
pub fn dense_oracle(amps: &[Complex64], cfg: &SearchConfig) -> Vec<Complex64> {
    amps.iter()
        .enumerate()
        .map(|(i, &a)| if cfg.is_marked(i) { -a } else { a })
        .collect()
}
