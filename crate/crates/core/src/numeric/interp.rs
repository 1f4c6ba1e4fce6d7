//! Monotone piecewise-cubic Hermite interpolation.
//!
//! Node slopes come from fourth-order differences on uniform abscissae and
//! three-point differences otherwise, then pass through the Fritsch–Carlson
//! limiter so nondecreasing data stays nondecreasing.

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
    uniform: Option<f64>,
}

impl MonotoneCubic {
    /// Build from strictly increasing `x` and nondecreasing `y` (at least two points).
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        assert!(n >= 2 && y.len() == n);
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let h0 = h[0];
        let uniform = h.iter().all(|&hi| (hi - h0).abs() <= 1e-9 * h0.abs());
        let mut m = vec![0.0; n];
        if n == 2 {
            m[0] = d[0];
            m[1] = d[0];
        } else {
            for i in 1..n - 1 {
                m[i] = if uniform && i >= 2 && i + 2 < n {
                    (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h0)
                } else {
                    (h[i] * d[i - 1] + h[i - 1] * d[i]) / (h[i - 1] + h[i])
                };
            }
            m[0] = ((2.0 * h[0] + h[1]) * d[0] - h[0] * d[1]) / (h[0] + h[1]);
            m[n - 1] = ((2.0 * h[n - 2] + h[n - 3]) * d[n - 2] - h[n - 2] * d[n - 3]) / (h[n - 2] + h[n - 3]);
        }
        for i in 0..n - 1 {
            if d[i] == 0.0 {
                m[i] = 0.0;
                m[i + 1] = 0.0;
                continue;
            }
            if m[i] / d[i] < 0.0 {
                m[i] = 0.0;
            }
            if m[i + 1] / d[i] < 0.0 {
                m[i + 1] = 0.0;
            }
            let a = m[i] / d[i];
            let b = m[i + 1] / d[i];
            let s = a * a + b * b;
            if s > 9.0 {
                let t = 3.0 / s.sqrt();
                m[i] = t * a * d[i];
                m[i + 1] = t * b * d[i];
            }
        }
        MonotoneCubic {
            x,
            y,
            m,
            uniform: uniform.then_some(h0),
        }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Index of the cell containing `x`, clamped to the table.
    pub fn cell(&self, x: f64) -> usize {
        let n = self.x.len();
        let k = match self.uniform {
            Some(h) => ((x - self.x[0]) / h).floor().max(0.0) as usize,
            None => self.x.partition_point(|&xi| xi <= x).saturating_sub(1),
        };
        k.min(n - 2)
    }

    /// Evaluate the interpolant inside cell `k` (no clamping of `x`).
    #[inline]
    pub fn eval_in(&self, k: usize, x: f64) -> f64 {
        let h = self.x[k + 1] - self.x[k];
        let u = (x - self.x[k]) / h;
        let u2 = u * u;
        let u3 = u2 * u;
        self.y[k] * (2.0 * u3 - 3.0 * u2 + 1.0)
            + h * self.m[k] * (u3 - 2.0 * u2 + u)
            + self.y[k + 1] * (3.0 * u2 - 2.0 * u3)
            + h * self.m[k + 1] * (u3 - u2)
    }

    /// Derivative of the interpolant inside cell `k`.
    #[inline]
    pub fn slope_in(&self, k: usize, x: f64) -> f64 {
        let h = self.x[k + 1] - self.x[k];
        let u = (x - self.x[k]) / h;
        let u2 = u * u;
        (self.y[k] * (6.0 * u2 - 6.0 * u) + self.y[k + 1] * (6.0 * u - 6.0 * u2)) / h
            + self.m[k] * (3.0 * u2 - 4.0 * u + 1.0)
            + self.m[k + 1] * (3.0 * u2 - 2.0 * u)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_in(self.cell(x), x)
    }
}
