//! Deterministic numerical building blocks: Hermitian eigendecomposition,
//! bisection, grid extremum search and trapezoidal quadrature.

mod eigh;

pub use eigh::{eigh, EigenDecomposition, HermitianMatrix, HERMITIAN_TOL};

use crate::error::NumericsError;

/// Root of `f` on `[lo, hi]` by bisection.
///
/// Requires `f(lo) * f(hi) <= 0`. Halves the bracket until its width is at
/// most `tol` and returns the midpoint of the final bracket (or an endpoint
/// where `f` vanishes exactly).
pub fn bisect_root<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    Ok(bisect_bracket(f, lo, hi, tol)?.midpoint())
}

/// Final bracket of a bisection run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

pub fn bisect_bracket<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<Bracket, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(NumericsError::BadTolerance(tol));
    }
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(Bracket { lo, hi: lo, iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(Bracket { lo: hi, hi, iterations: 0 });
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(NumericsError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        // bracket can no longer shrink in floating point
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        iterations += 1;
        if f_mid == 0.0 {
            return Ok(Bracket { lo: mid, hi: mid, iterations });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(Bracket { lo, hi, iterations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Max,
    Min,
}

fn check_samples(samples: &[(f64, f64)], needed: usize) -> Result<(), NumericsError> {
    if samples.len() < needed {
        return Err(NumericsError::TooFewSamples {
            needed,
            got: samples.len(),
        });
    }
    if let Some(index) = samples.windows(2).position(|w| !(w[1].0 > w[0].0)) {
        return Err(NumericsError::NotIncreasing { index: index + 1 });
    }
    Ok(())
}

/// Sample achieving the maximum or minimum `y`. Ties go to the smallest `x`.
pub fn grid_extremum(samples: &[(f64, f64)], kind: Extremum) -> Result<(f64, f64), NumericsError> {
    check_samples(samples, 3)?;
    let mut best = samples[0];
    for &s in &samples[1..] {
        let better = match kind {
            Extremum::Max => s.1 > best.1,
            Extremum::Min => s.1 < best.1,
        };
        if better {
            best = s;
        }
    }
    Ok(best)
}

/// Trapezoidal estimate of the integral of `y` over the sampled `x` range.
pub fn integrate_trapezoid(samples: &[(f64, f64)]) -> Result<f64, NumericsError> {
    check_samples(samples, 2)?;
    Ok(samples
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
        .sum())
}

/// `count` equally spaced points on `[start, stop]`, endpoints included.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|i| if i == count - 1 { stop } else { start + i as f64 * step })
                .collect()
        }
    }
}
