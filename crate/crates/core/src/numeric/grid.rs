//! Logarithmic grids and grid-based supremum search.

use super::solve::golden_max;

/// A log-spaced sampling grid.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub per_decade: usize,
}

impl GridSpec {
    pub const fn new(lo: f64, hi: f64, per_decade: usize) -> Self {
        GridSpec { lo, hi, per_decade }
    }

    pub fn points(&self) -> Vec<f64> {
        log_grid(self.lo, self.hi, self.per_decade)
    }
}

/// Log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).round() as usize).max(1);
    let (a, b) = (lo.ln(), hi.ln());
    (0..=n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n {
                hi
            } else {
                (a + (b - a) * i as f64 / n as f64).exp()
            }
        })
        .collect()
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Outcome of [`sup_search`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SupResult {
    pub value: f64,
    pub arg: f64,
    pub finite: bool,
}

/// Supremum of `f` over `(lo, hi)` on a log grid with golden-section
/// refinement around the best grid point.
///
/// `open_lo`/`open_hi` mark ends that are truncations of an unbounded range
/// (towards 0 or infinity). If the argmax sits on such an end, the range is
/// pushed two decades further, up to three times; a supremum that keeps
/// growing by more than `1e-3` relative each time is reported as `+inf`.
pub fn sup_search<F>(f: F, lo: f64, hi: f64, per_decade: usize, open_lo: bool, open_hi: bool) -> SupResult
where
    F: Fn(f64) -> f64 + Sync,
{
    let eval = |xs: &[f64]| -> Vec<f64> {
        use rayon::prelude::*;
        xs.par_iter().map(|&x| f(x)).collect()
    };
    let (mut lo, mut hi) = (lo, hi);
    let mut best = scan(&eval, &f, lo, hi, per_decade);
    for _ in 0..3 {
        if !best.value.is_finite() {
            break;
        }
        let at_lo = open_lo && best.arg <= lo * 1.0001;
        let at_hi = open_hi && best.arg >= hi / 1.0001;
        if !at_lo && !at_hi {
            return best;
        }
        let prev = best.value;
        if at_lo {
            lo *= 1e-2;
        }
        if at_hi {
            hi *= 1e2;
        }
        best = scan(&eval, &f, lo, hi, per_decade);
        if best.value <= prev * (1.0 + 1e-3) {
            return best;
        }
    }
    if best.value.is_finite() {
        let at_lo = open_lo && best.arg <= lo * 1.0001;
        let at_hi = open_hi && best.arg >= hi / 1.0001;
        if at_lo || at_hi {
            best.value = f64::INFINITY;
            best.finite = false;
        }
    }
    best
}

fn scan<E, F>(eval: &E, f: &F, lo: f64, hi: f64, per_decade: usize) -> SupResult
where
    E: Fn(&[f64]) -> Vec<f64>,
    F: Fn(f64) -> f64,
{
    let xs = log_grid(lo, hi, per_decade);
    let ys = eval(&xs);
    let mut k = 0;
    for (i, y) in ys.iter().enumerate() {
        if y.is_nan() {
            continue;
        }
        if *y > ys[k] || ys[k].is_nan() {
            k = i;
        }
    }
    let mut best = SupResult {
        value: ys[k],
        arg: xs[k],
        finite: ys[k].is_finite(),
    };
    if !best.finite {
        return best;
    }
    let a = xs[k.saturating_sub(1)].ln();
    let b = xs[(k + 1).min(xs.len() - 1)].ln();
    if b > a {
        let (u, v) = golden_max(|u| f(u.exp()), a, b, 60);
        if v > best.value {
            best.value = v;
            best.arg = u.exp();
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_and_density() {
        let g = log_grid(1e-2, 1e2, 8);
        assert_eq!(g.len(), 33);
        assert_eq!(g[0], 1e-2);
        assert_eq!(*g.last().unwrap(), 1e2);
    }

    #[test]
    fn interior_peak() {
        let r = sup_search(|x: f64| x / (1.0 + x * x), 1e-4, 1e4, 8, true, true);
        assert!(r.finite);
        assert!((r.value - 0.5).abs() < 1e-10);
        assert!((r.arg - 1.0).abs() < 1e-4);
    }

    #[test]
    fn growth_at_open_end_is_infinite() {
        let r = sup_search(|x: f64| x.powf(-0.25), 1e-4, 1.0, 8, true, false);
        assert!(!r.finite && r.value.is_infinite());
    }

    #[test]
    fn flat_function_is_finite() {
        let r = sup_search(|_x: f64| 3.0, 1e-4, 1e4, 8, true, true);
        assert!(r.finite && r.value == 3.0);
    }
}
