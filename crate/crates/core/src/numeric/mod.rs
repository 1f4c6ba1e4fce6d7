//! Shared numerical kernels: quadrature, bracketing solvers, log grids and
//! monotone interpolation.

pub mod grid;
pub mod interp;
pub mod quad;
pub mod solve;

pub use grid::{log_grid, GridSpec};
pub use quad::{integrate, Integral};
pub use solve::{invert_increasing, Tolerance};

/// Log-log slope of `f` between `a` and `b`.
pub fn loglog_slope(fa: f64, fb: f64, a: f64, b: f64) -> f64 {
    (fb.ln() - fa.ln()) / (b.ln() - a.ln())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}
