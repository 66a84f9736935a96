//! Poisson probability mass and cumulative (percentile) computations.
//!
//! The percentile of a count `t` under rate `lambda` is the cumulative mass
//! `sum_{i=0..t} e^{-lambda} lambda^i / i!`. Both functions use an
//! incremental recurrence in linear space, switching to log-space
//! accumulation when `e^{-lambda}` would underflow.

use thiserror::Error;

/// Rates above this are evaluated in log space; `e^{-lambda}` underflows an
/// f64 near 745.
const LOG_SPACE_THRESHOLD: f64 = 700.0;

#[derive(Debug, Error, PartialEq)]
pub enum PoissonError {
    #[error("rate must be a finite non-negative number, got {0}")]
    InvalidRate(f64),
}

fn check_rate(lambda: f64) -> Result<(), PoissonError> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(PoissonError::InvalidRate(lambda));
    }
    Ok(())
}

/// Probability of observing exactly `x` occurrences given average rate
/// `lambda`.
pub fn pmf(x: u64, lambda: f64) -> Result<f64, PoissonError> {
    check_rate(lambda)?;
    if lambda == 0.0 {
        return Ok(if x == 0 { 1.0 } else { 0.0 });
    }
    if lambda <= LOG_SPACE_THRESHOLD {
        let mut p = (-lambda).exp();
        for i in 0..x {
            p *= lambda / (i + 1) as f64;
        }
        Ok(p.min(1.0))
    } else {
        Ok(log_pmf(x, lambda).exp().min(1.0))
    }
}

/// Cumulative probability of observing at most `t` occurrences given average
/// rate `lambda`. Exactly 1.0 when `lambda` is zero.
pub fn percentile(t: u64, lambda: f64) -> Result<f64, PoissonError> {
    check_rate(lambda)?;
    if lambda == 0.0 {
        return Ok(1.0);
    }
    if lambda <= LOG_SPACE_THRESHOLD {
        let mut p = (-lambda).exp();
        let mut sum = p;
        for i in 0..t {
            p *= lambda / (i + 1) as f64;
            sum += p;
        }
        Ok(sum.min(1.0))
    } else {
        // Accumulate log(sum) with incremental log-add-exp.
        let log_lambda = lambda.ln();
        let mut lp = -lambda;
        let mut lsum = lp;
        for i in 0..t {
            lp += log_lambda - ((i + 1) as f64).ln();
            lsum = log_add_exp(lsum, lp);
        }
        Ok(lsum.exp().min(1.0))
    }
}

fn log_pmf(x: u64, lambda: f64) -> f64 {
    let log_lambda = lambda.ln();
    let mut lp = -lambda;
    for i in 0..x {
        lp += log_lambda - ((i + 1) as f64).ln();
    }
    lp
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}
