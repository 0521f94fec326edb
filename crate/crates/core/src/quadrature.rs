//! Composite Simpson quadrature on uniform grids, a Richardson error
//! estimate from the same samples, and deterministic pairwise summation.

use std::ops::{Add, Mul};

use num_complex::Complex64;

/// Values that can be integrated: real or complex.
pub trait Integrand: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Composite Simpson sum of uniformly spaced samples. `samples.len()` must
/// be odd and at least 3.
pub fn simpson_samples<T: Integrand>(samples: &[T], h: f64) -> T {
    let n = samples.len();
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd number (>= 3) of samples, got {n}");
    let mut odd = T::zero();
    let mut even = T::zero();
    for (i, &v) in samples.iter().enumerate().take(n - 1).skip(1) {
        if i % 2 == 1 {
            odd = odd + v;
        } else {
            even = even + v;
        }
    }
    (samples[0] + samples[n - 1] + odd * 4.0 + even * 2.0) * (h / 3.0)
}

/// Simpson value with a Richardson error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: T,
    /// `|S_h − S_2h| / 15`.
    pub error: f64,
}

impl<T: Integrand> Estimate<T> {
    /// Error relative to the magnitude of the value (absolute if the value
    /// vanishes).
    pub fn relative_error(&self) -> f64 {
        let m = self.value.magnitude();
        if m > 0.0 {
            self.error / m
        } else {
            self.error
        }
    }
}

/// Simpson on `samples` with spacing `h`, compared against Simpson on every
/// other sample. Requires `(len − 1) % 4 == 0`.
pub fn simpson_richardson<T: Integrand>(samples: &[T], h: f64) -> Estimate<T> {
    let n = samples.len();
    assert!(n >= 5 && (n - 1) % 4 == 0, "Richardson needs 4k+1 samples, got {n}");
    let fine = simpson_samples(samples, h);
    let coarse_samples: Vec<T> = samples.iter().step_by(2).copied().collect();
    let coarse = simpson_samples(&coarse_samples, 2.0 * h);
    let diff = fine + coarse * -1.0;
    Estimate {
        value: fine,
        error: diff.magnitude() / 15.0,
    }
}

/// Integrates `f` over `[a, b]` with `intervals` Simpson panels (rounded up
/// to a multiple of four) and a Richardson error estimate.
pub fn simpson<T: Integrand, F: Fn(f64) -> T>(f: F, a: f64, b: f64, intervals: usize) -> Estimate<T> {
    let intervals = intervals.max(4).div_ceil(4) * 4;
    let h = (b - a) / intervals as f64;
    let samples: Vec<T> = (0..=intervals).map(|i| f(a + h * i as f64)).collect();
    simpson_richardson(&samples, h)
}

/// Composite Simpson weights (including `h/3`) for `n` uniformly spaced
/// nodes; `n` odd.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd number (>= 3) of nodes, got {n}");
    (0..n)
        .map(|i| {
            let w = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

/// Pairwise (cascade) summation; the result depends only on the order of
/// `values`, never on how they were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
