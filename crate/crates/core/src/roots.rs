//! Bracketing scan, bisection and golden-section search on scalar functions.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("function not finite at {x}")]
    NotFinite { x: f64 },
}

/// Samples `f` on a uniform grid over `[lo, hi]` and returns every
/// sub-interval on which it changes sign. Points where `f` is undefined
/// (`None`) or not finite break the scan locally.
pub fn scan_brackets<F>(mut f: F, lo: f64, hi: f64, step: f64) -> Vec<(f64, f64)>
where
    F: FnMut(f64) -> Option<f64>,
{
    let mut brackets = Vec::new();
    if !(hi > lo) || !(step > 0.0) {
        return brackets;
    }
    let count = ((hi - lo) / step).ceil().max(1.0) as usize;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=count {
        let x = if i == count { hi } else { lo + i as f64 * step };
        let fx = f(x).filter(|v| v.is_finite());
        match (prev, fx) {
            (Some((xp, fp)), Some(fc)) => {
                if fc == 0.0 {
                    brackets.push((x, x));
                } else if fp != 0.0 && fp.signum() != fc.signum() {
                    brackets.push((xp, x));
                }
            }
            (None, Some(0.0)) => brackets.push((x, x)),
            _ => {}
        }
        prev = fx.map(|v| (x, v));
    }
    brackets
}

/// Bisection until the bracket is narrower than `tol`. Returns the midpoint.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, RootError>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let fb = f(b);
    if !fa.is_finite() {
        return Err(RootError::NotFinite { x: a });
    }
    if !fb.is_finite() {
        return Err(RootError::NotFinite { x: b });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoSignChange { lo: a, hi: b });
    }
    // 200 halvings exhaust f64 resolution on any finite bracket.
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if !fm.is_finite() {
            return Err(RootError::NotFinite { x: m });
        }
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Golden-section minimisation of a unimodal function on `[lo, hi]`.
pub fn golden_section_min<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_all_roots_of_cosine() {
        let brackets = scan_brackets(|x: f64| Some(x.cos()), 0.0, 10.0, 0.01);
        assert_eq!(brackets.len(), 3);
        let roots: Vec<f64> = brackets
            .iter()
            .map(|&(a, b)| bisect(f64::cos, a, b, 1e-14).unwrap())
            .collect();
        for (k, r) in roots.iter().enumerate() {
            let expected = std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::PI;
            assert!((r - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn undefined_points_break_brackets() {
        let f = |x: f64| {
            if (0.4..0.6).contains(&x) {
                None
            } else {
                Some(x - 0.5)
            }
        };
        assert!(scan_brackets(f, 0.0, 1.0, 0.05).is_empty());
    }

    #[test]
    fn bisect_rejects_same_sign() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-10),
            Err(RootError::NoSignChange { .. })
        ));
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_section_min(|x| (x - 0.3).powi(2) + 2.0, -4.0, 5.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-12);
    }
}
