//! Jacobi and generalized Laguerre polynomials.
//!
//! Both families are evaluated with the forward three-term recurrence. The
//! parameters are allowed to be large and non-integer (the radial
//! wavefunctions use a first Jacobi parameter of order `β/α`, which easily
//! exceeds 100 at small screening), and the argument may lie outside
//! `[-1, 1]`.

use thiserror::Error;

/// Highest degree for which the recurrence is certified.
pub const MAX_DEGREE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpecialFnError {
    #[error("polynomial degree {degree} exceeds the supported maximum {max}")]
    DegreeCapExceeded { degree: usize, max: usize },
}

fn check_degree(n: usize) -> Result<(), SpecialFnError> {
    if n > MAX_DEGREE {
        Err(SpecialFnError::DegreeCapExceeded {
            degree: n,
            max: MAX_DEGREE,
        })
    } else {
        Ok(())
    }
}

/// Jacobi polynomial `P_n^{(a,b)}(x)`.
pub fn jacobi(n: usize, a: f64, b: f64, x: f64) -> Result<f64, SpecialFnError> {
    check_degree(n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    if n == 1 {
        return Ok(p1);
    }

    let ab = a + b;
    let mut prev = 1.0;
    let mut curr = p1;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let denom = 2.0 * k * (k + ab) * (c - 2.0);
        if denom == 0.0 {
            // a + b is a negative integer and the recurrence breaks down.
            return Ok(jacobi_binomial_sum(n, a, b, x));
        }
        let lin = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b);
        let back = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        let next = (lin * curr - back * prev) / denom;
        prev = curr;
        curr = next;
    }
    Ok(curr)
}

/// Explicit sum over generalized binomial coefficients, defined for every
/// real `a`, `b`. Used only where the recurrence has a vanishing pivot.
fn jacobi_binomial_sum(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let half_minus = 0.5 * (x - 1.0);
    let half_plus = 0.5 * (x + 1.0);
    (0..=n)
        .map(|s| {
            binomial(n as f64 + a, n - s)
                * binomial(n as f64 + b, s)
                * half_minus.powi(s as i32)
                * half_plus.powi((n - s) as i32)
        })
        .sum()
}

fn binomial(z: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (z - i as f64) / (i as f64 + 1.0))
}

/// Derivative `d/dx P_n^{(a,b)}(x) = (n + a + b + 1)/2 · P_{n-1}^{(a+1,b+1)}(x)`.
pub fn jacobi_derivative(n: usize, a: f64, b: f64, x: f64) -> Result<f64, SpecialFnError> {
    check_degree(n)?;
    if n == 0 {
        return Ok(0.0);
    }
    let lower = jacobi(n - 1, a + 1.0, b + 1.0, x)?;
    Ok(0.5 * (n as f64 + a + b + 1.0) * lower)
}

/// Generalized Laguerre polynomial `L_n^{(a)}(x)`.
pub fn laguerre(n: usize, a: f64, x: f64) -> Result<f64, SpecialFnError> {
    check_degree(n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut curr = 1.0 + a - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + a - x) * curr - (k + a) * prev) / (k + 1.0);
        prev = curr;
        curr = next;
    }
    Ok(curr)
}
