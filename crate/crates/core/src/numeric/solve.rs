//! Bracketing root finders for monotone functions.
//!
//! Steps are taken in log–log coordinates, where power-law data is linear,
//! using Illinois-modified regula falsi. Any step that fails to shrink the
//! bracket falls back to bisection, so the bracket always contains the root.

use crate::error::{Error, Result};

/// Stopping rule for the bracketing solvers.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Tolerance {
    /// Relative width of the final bracket.
    pub rtol: f64,
    /// Relative residual `|f(x) - y| / y` accepted as exact.
    pub atol: f64,
    pub max_iter: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rtol: 1e-10,
            atol: 1e-14,
            max_iter: 200,
        }
    }
}

const MAX_EXPANSIONS: usize = 2100;

/// Find `x > 0` with `f(x) = y` for a nondecreasing `f` with `f(0) = 0`.
///
/// `hint` seeds the bracket search. Returns 0 for `y <= 0`.
pub fn invert_increasing<F: FnMut(f64) -> f64>(mut f: F, y: f64, hint: f64, tol: Tolerance) -> Result<f64> {
    if !(y > 0.0) {
        return Ok(0.0);
    }
    if y.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let x0 = if hint > 0.0 && hint.is_finite() { hint } else { 1.0 };
    let f0 = f(x0);
    let (mut lo, mut hi, mut flo, mut fhi);
    if f0 < y {
        lo = x0;
        flo = f0;
        hi = x0 * 2.0;
        fhi = f(hi);
        let mut k = 0;
        while fhi < y {
            lo = hi;
            flo = fhi;
            hi *= 2.0;
            fhi = f(hi);
            k += 1;
            if k > MAX_EXPANSIONS || !hi.is_finite() {
                return Err(Error::NonConvergence {
                    what: "bracket expansion",
                    iterations: k,
                    lo,
                    hi,
                });
            }
        }
    } else {
        hi = x0;
        fhi = f0;
        lo = x0 * 0.5;
        flo = f(lo);
        let mut k = 0;
        while flo >= y {
            hi = lo;
            fhi = flo;
            lo *= 0.5;
            flo = f(lo);
            k += 1;
            if k > MAX_EXPANSIONS || lo == 0.0 {
                return Ok(hi);
            }
        }
    }
    refine(&mut f, y, lo, flo, hi, fhi, tol)
}

/// Refine a bracket `f(lo) < y <= f(hi)` for a nondecreasing `f` on `0 < lo < hi`.
pub fn refine<F: FnMut(f64) -> f64>(
    f: &mut F,
    y: f64,
    mut lo: f64,
    mut flo: f64,
    mut hi: f64,
    mut fhi: f64,
    tol: Tolerance,
) -> Result<f64> {
    if fhi == y {
        return Ok(hi);
    }
    let ly = y.ln();
    let g = |v: f64| if v > 0.0 { v.ln() - ly } else { f64::NEG_INFINITY };
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let (mut ga, mut gb) = (g(flo), g(fhi));
    let mut side = 0i8;
    for _ in 0..tol.max_iter {
        if b - a <= tol.rtol {
            return Ok((0.5 * (a + b)).exp());
        }
        let mut v = if ga.is_finite() && gb.is_finite() && gb > ga {
            b - gb * (b - a) / (gb - ga)
        } else {
            0.5 * (a + b)
        };
        let margin = 1e-3 * (b - a);
        if !(v > a + margin && v < b - margin) {
            v = 0.5 * (a + b);
        }
        let x = v.exp();
        let fx = f(x);
        let gv = g(fx);
        if fx.is_nan() {
            return Err(Error::NonConvergence {
                what: "monotone inversion",
                iterations: 0,
                lo,
                hi,
            });
        }
        if (fx - y).abs() <= tol.atol * y {
            return Ok(x);
        }
        if fx < y {
            a = v;
            ga = gv;
            lo = x;
            flo = fx;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            b = v;
            gb = gv;
            hi = x;
            fhi = fx;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
    }
    let _ = (flo, fhi);
    Err(Error::NonConvergence {
        what: "monotone inversion",
        iterations: tol.max_iter,
        lo,
        hi,
    })
}

/// Smallest `x` in `(lo, hi]` where a monotone predicate flips to true,
/// by bisection in `ln x` to relative width `rtol`.
pub fn bisect_predicate<P: FnMut(f64) -> bool>(mut pred: P, mut lo: f64, mut hi: f64, rtol: f64) -> f64 {
    for _ in 0..400 {
        if hi - lo <= rtol * hi {
            break;
        }
        let mid = if lo > 0.0 { (lo * hi).sqrt() } else { 0.5 * hi };
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Golden-section maximisation of `f` on `[a, b]`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_power() {
        let x = invert_increasing(|t| t.powi(3), 8.0, 1.0, Tolerance::default()).unwrap();
        assert!((x - 2.0).abs() < 1e-9);
    }

    #[test]
    fn inverts_across_many_decades() {
        for &y in &[1e-200, 1e-20, 1.0, 1e50, 1e250] {
            let x = invert_increasing(|t| t * t + t.powi(3), y, 1.0, Tolerance::default()).unwrap();
            let r = (x * x + x.powi(3)) / y;
            assert!((r - 1.0).abs() < 1e-9, "y={y} r={r}");
        }
    }

    #[test]
    fn predicate_bisection_finds_jump() {
        let x = bisect_predicate(|t| t > 1.25, 1e-3, 1e3, 1e-12);
        assert!((x - 1.25).abs() < 1e-9);
    }

    #[test]
    fn golden_section_finds_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 80);
        assert!((x - 0.3).abs() < 1e-7 && v.abs() < 1e-12);
    }
}
