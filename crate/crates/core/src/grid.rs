//! Radial grids uniform in a stretched coordinate `x`, with
//! `r(x) = c·ln(1 + e^x)`. Spacing is geometric near the origin and tends
//! to `c·h` at large `r`.

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub x_start: f64,
    pub h: f64,
    pub scale: f64,
    pub r: Vec<f64>,
    /// `dr/dx` at each node.
    pub jacobian: Vec<f64>,
}

pub(crate) fn softplus(x: f64) -> f64 {
    if x > 36.0 {
        x
    } else {
        x.exp().ln_1p()
    }
}

pub(crate) fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl RadialGrid {
    /// Grid from `r_min` to `r_max` with far-field spacing close to
    /// `far_step` and stretched step `h`. The last node is exactly `r_max`.
    pub fn softplus(r_min: f64, r_max: f64, far_step: f64, h: f64) -> Self {
        assert!(r_min > 0.0 && r_max > r_min, "invalid radial range");
        assert!(far_step > 0.0 && h > 0.0, "invalid step");
        let scale = far_step / h;
        let to_x = |r: f64| (r / scale).exp_m1().ln();
        let x_start = to_x(r_min);
        let x_end = to_x(r_max);
        let intervals = ((x_end - x_start) / h).ceil().max(2.0) as usize;
        let h = (x_end - x_start) / intervals as f64;
        let mut r = Vec::with_capacity(intervals + 1);
        let mut jacobian = Vec::with_capacity(intervals + 1);
        for i in 0..=intervals {
            let x = x_start + i as f64 * h;
            r.push(scale * softplus(x));
            jacobian.push(scale * sigmoid(x));
        }
        r[0] = r_min;
        r[intervals] = r_max;
        Self {
            x_start,
            h,
            scale,
            r,
            jacobian,
        }
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_start + i as f64 * self.h
    }

    /// `(r, dr/dx)` at an arbitrary stretched coordinate.
    pub fn map(&self, x: f64) -> (f64, f64) {
        (self.scale * softplus(x), self.scale * sigmoid(x))
    }

    /// Trapezoidal `∫ f dr` over the grid.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        assert_eq!(f.len(), self.len());
        let mut sum = 0.0;
        for i in 1..self.len() {
            sum += 0.5 * (f[i] + f[i - 1]) * (self.r[i] - self.r[i - 1]);
        }
        sum
    }

    /// `df/dr` by fourth-order central differences in `x`; second order at
    /// the two outermost nodes of each side.
    pub fn derivative(&self, f: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(f.len(), n);
        assert!(n >= 5, "need at least five nodes");
        let h = self.h;
        let mut out = vec![0.0; n];
        for i in 0..n {
            let dfdx = if i >= 2 && i + 2 < n {
                (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h)
            } else if i == 0 {
                (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
            } else if i == n - 1 {
                (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) / (2.0 * h)
            } else {
                (f[i + 1] - f[i - 1]) / (2.0 * h)
            };
            out[i] = dfdx / self.jacobian[i];
        }
        out
    }
}
