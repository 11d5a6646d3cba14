use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Database size and marked count without an explicit marked set.
///
/// This is all the closed-form engine needs, so it is also what lets the
/// planner work at sizes far beyond what a statevector could hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub n: u64,
    pub r: u64,
}

/// Largest N whose integer value survives conversion to `f64`.
pub const MAX_EXACT_N: u64 = 1 << 53;

impl Geometry {
    /// Validates `N ≥ 2` and `1 ≤ r ≤ N/2`, or `1 ≤ r ≤ N-1` when
    /// `allow_large_r` is set.
    pub fn new(n: u64, r: u64, allow_large_r: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "N must be at least 2, got {n}"
            )));
        }
        if n > MAX_EXACT_N {
            return Err(Error::InvalidConfig(format!("N={n} exceeds 2^53")));
        }
        if r == 0 || r >= n {
            return Err(Error::InvalidConfig(format!(
                "marked count r={r} must satisfy 1 <= r <= N-1 (N={n})"
            )));
        }
        if !allow_large_r && 2 * r > n {
            return Err(Error::InvalidConfig(format!(
                "marked count r={r} exceeds N/2 (N={n}); pass allow-large-r to override"
            )));
        }
        Ok(Self { n, r })
    }

    pub fn n_f64(&self) -> f64 {
        self.n as f64
    }

    pub fn r_f64(&self) -> f64 {
        self.r as f64
    }

    /// N - r as a float.
    pub fn unmarked_f64(&self) -> f64 {
        (self.n - self.r) as f64
    }

    /// Rotation angle per step, `cos ω = 1 - 2r/N`.
    ///
    /// Evaluated as `2·asin(√(r/N))`, which is the same angle but keeps full
    /// relative precision when r/N is tiny.
    pub fn omega(&self) -> f64 {
        2.0 * (self.r_f64() / self.n_f64()).sqrt().asin()
    }

    /// `√((N-r)/r)`, the coupling from the unmarked to the marked average.
    pub fn unmarked_over_marked_sqrt(&self) -> f64 {
        (self.unmarked_f64() / self.r_f64()).sqrt()
    }

    /// `√(r/(N-r))`, the coupling from the marked to the unmarked average.
    pub fn marked_over_unmarked_sqrt(&self) -> f64 {
        (self.r_f64() / self.unmarked_f64()).sqrt()
    }
}

/// Problem geometry with an explicit marked set.
///
/// Marked indices are stored sorted; the statevector itself is never
/// permuted, so every operation consults membership rather than position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    geometry: Geometry,
    marked: Vec<usize>,
    is_marked: Vec<bool>,
}

impl SearchConfig {
    pub fn new(n_states: usize, marked: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::with_options(n_states, marked, false)
    }

    pub fn with_options(
        n_states: usize,
        marked: impl IntoIterator<Item = usize>,
        allow_large_r: bool,
    ) -> Result<Self> {
        let mut marked: Vec<usize> = marked.into_iter().collect();
        marked.sort_unstable();
        if let Some(w) = marked.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfig(format!(
                "duplicate marked index {}",
                w[0]
            )));
        }
        if let Some(&last) = marked.last() {
            if last >= n_states {
                return Err(Error::IndexOutOfRange {
                    index: last as u64,
                    n: n_states as u64,
                });
            }
        }
        let geometry = Geometry::new(n_states as u64, marked.len() as u64, allow_large_r)?;
        let mut is_marked = vec![false; n_states];
        for &i in &marked {
            is_marked[i] = true;
        }
        Ok(Self {
            geometry,
            marked,
            is_marked,
        })
    }

    /// Marks the first `r` indices.
    pub fn first_marked(n_states: usize, r: usize, allow_large_r: bool) -> Result<Self> {
        if r >= n_states {
            return Err(Error::InvalidConfig(format!(
                "marked count r={r} must be below N={n_states}"
            )));
        }
        Self::with_options(n_states, 0..r, allow_large_r)
    }

    pub fn n_states(&self) -> usize {
        self.is_marked.len()
    }

    pub fn r(&self) -> usize {
        self.marked.len()
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    #[inline]
    pub fn is_marked(&self, index: usize) -> bool {
        self.is_marked[index]
    }

    pub fn marked_mask(&self) -> &[bool] {
        &self.is_marked
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Indices not in the marked set, ascending.
    pub fn unmarked(&self) -> impl Iterator<Item = usize> + '_ {
        self.is_marked
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| (!m).then_some(i))
    }
}
