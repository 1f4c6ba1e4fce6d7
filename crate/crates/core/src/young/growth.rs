//! Growth indices and numerical certificates for Young functions.

use rayon::prelude::*;

use super::YoungFunction;
use crate::numeric::{log_grid, GridSpec};

/// Default certification grid and the largest constant still called finite.
pub const CERT_GRID: GridSpec = GridSpec::new(1e-6, 1e6, 25);
pub const C_MAX: f64 = 1e12;

/// Outcome of a Delta-type condition check.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Condition {
    /// Holds on the grid with the smallest admissible constant found.
    Consistent { c: f64 },
    /// Violated: the ratio at the witness exceeds [`C_MAX`].
    Falsified { s: f64, t: f64, ratio: f64 },
}

impl Condition {
    pub fn holds(&self) -> bool {
        matches!(self, Condition::Consistent { .. })
    }
}

/// `sup_t t phi(t) / Phi(t)`, or `+inf` when the supremum keeps growing.
///
/// The grid supremum is refined at interior maxima. When it is attained at a
/// grid end, decade-by-decade values beyond that end are extrapolated with
/// Aitken's process; a sequence that does not settle, or a supremum above
/// `log2(C_MAX)` (where the Delta2 constant would exceed `C_MAX`), is `+inf`.
pub fn p_index(f: &YoungFunction, grid: GridSpec) -> f64 {
    let ratio = |t: f64| {
        let v = f.eval(t);
        if v > 0.0 {
            t * f.derivative(t) / v
        } else {
            f64::NAN
        }
    };
    let r = crate::numeric::grid::sup_search(ratio, grid.lo, grid.hi, grid.per_decade, false, false);
    let mut best = r.value;
    let at_hi = r.arg >= grid.hi / 1.0001;
    let at_lo = r.arg <= grid.lo * 1.0001;
    if at_hi || at_lo {
        let step: f64 = if at_hi { 10.0 } else { 0.1 };
        let start = if at_hi { grid.hi } else { grid.lo };
        let seq: Vec<f64> = (0..8).map(|k| ratio(start * step.powi(k))).collect();
        best = best.max(aitken_limit(&seq));
    }
    if best > C_MAX.log2() {
        f64::INFINITY
    } else {
        best
    }
}

fn aitken_limit(s: &[f64]) -> f64 {
    let n = s.len();
    let d1 = s[n - 1] - s[n - 2];
    let d0 = s[n - 2] - s[n - 3];
    if d1.abs() < 1e-15 * s[n - 1].abs() {
        return s[n - 1];
    }
    let ratio = d1 / d0;
    if !(ratio.abs() < 0.9) {
        return if d1 > 0.0 { f64::INFINITY } else { s[n - 1] };
    }
    let denom = d1 - d0;
    if denom == 0.0 {
        return s[n - 1];
    }
    s[n - 1] - d1 * d1 / denom
}

/// `Phi(2t) <= C Phi(t)` on the grid.
pub fn check_delta2(f: &YoungFunction, grid: GridSpec) -> Condition {
    let ts = grid.points();
    let ratios: Vec<f64> = ts.par_iter().map(|&t| f.eval(2.0 * t) / f.eval(t)).collect();
    let mut c: f64 = 1.0;
    for (t, r) in ts.iter().zip(&ratios) {
        if !(*r <= C_MAX) {
            return Condition::Falsified { s: 2.0, t: *t, ratio: *r };
        }
        c = c.max(*r);
    }
    Condition::Consistent { c }
}

/// `Phi(st) <= C Phi(s) Phi(t)` on the grid squared.
pub fn check_deltaprime(f: &YoungFunction, grid: GridSpec) -> Condition {
    let ts = grid.points();
    let vals: Vec<f64> = ts.iter().map(|&t| f.eval(t)).collect();
    let rows: Vec<(f64, f64, f64)> = ts
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut worst = (0.0, s, 0.0);
            for (j, &t) in ts.iter().enumerate().skip(i) {
                let r = f.eval(s * t) / (vals[i] * vals[j]);
                if !(r <= worst.0) {
                    worst = (r, s, t);
                }
            }
            worst
        })
        .collect();
    let mut c: f64 = 0.0;
    for (r, s, t) in rows {
        if !(r <= C_MAX) {
            return Condition::Falsified { s, t, ratio: r };
        }
        c = c.max(r);
    }
    Condition::Consistent { c }
}

/// Verdict of an endpoint integrability check.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum HVerdict {
    Holds { integral: f64 },
    Fails { exponent: f64 },
    Inconclusive { exponent: f64 },
}

impl HVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, HVerdict::Holds { .. })
    }
}

/// Tolerance on the fitted growth exponent near the critical value `N`.
pub const EXPONENT_TOL: f64 = 1e-3;

/// Limit growth exponent of `Phi` towards 0 (`dir = -1`) or infinity (`dir = 1`).
///
/// Local exponents at two far decades are extrapolated linearly in
/// `1/ln t`, which removes logarithmic corrections. The second value is the
/// drift between the two local exponents.
fn limit_exponent(f: &YoungFunction, dir: f64) -> (f64, f64) {
    let local = |t: f64| {
        let h = 1.0001f64;
        (f.eval(t * h).ln() - f.eval(t / h).ln()) / (2.0 * h.ln())
    };
    let (t1, t2) = if dir < 0.0 { (1e-9, 1e-13) } else { (1e9, 1e13) };
    let (a1, a2) = (local(t1), local(t2));
    let (l1, l2) = (t1.ln().abs(), t2.ln().abs());
    let drift = (a2 - a1).abs();
    if drift < 1e-9 {
        return (a2, 0.0);
    }
    ((a2 * l2 - a1 * l1) / (l2 - l1), drift)
}

fn h_check(f: &YoungFunction, n: f64, dir: f64) -> HVerdict {
    let (a, drift) = limit_exponent(f, dir);
    let crit = a - n;
    if crit.abs() <= EXPONENT_TOL {
        return if drift == 0.0 {
            HVerdict::Fails { exponent: a }
        } else {
            HVerdict::Inconclusive { exponent: a }
        };
    }
    let converges = if dir < 0.0 { a < n } else { a > n };
    if !converges {
        return HVerdict::Fails { exponent: a };
    }
    let e = 1.0 / (n - 1.0);
    let g = |s: f64| (s / f.eval(s)).powf(e);
    let r = if dir < 0.0 {
        crate::numeric::integrate(g, 0.0, 1.0, &[])
    } else {
        crate::numeric::integrate(g, 1.0, f64::INFINITY, &[])
    };
    if r.value.is_finite() {
        HVerdict::Holds { integral: r.value }
    } else {
        HVerdict::Inconclusive { exponent: a }
    }
}

/// `int_0^1 (s / Phi(s))^{1/(N-1)} ds < inf`.
pub fn check_h1(f: &YoungFunction, n: f64) -> HVerdict {
    h_check(f, n, -1.0)
}

/// `int_1^inf (s / Phi(s))^{1/(N-1)} ds < inf`.
pub fn check_h3(f: &YoungFunction, n: f64) -> HVerdict {
    h_check(f, n, 1.0)
}

/// Outcome of a dominance check between two Young functions.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Dominance {
    pub consistent: bool,
    /// Fitted log-log slope of the tested ratio (or slope defect) per `k`.
    pub slopes: Vec<f64>,
    pub last_ratio: Vec<f64>,
}

/// `Phi(kt) / Psi(t) -> 0` as `t -> inf` for each `k`: the fitted tail slope
/// must be negative and the tail ratios decreasing.
pub fn check_prec_prec(f: &YoungFunction, g: &YoungFunction, ks: &[f64]) -> Dominance {
    let ts = log_grid(1e8, 1e12, 2);
    let mut slopes = Vec::new();
    let mut last = Vec::new();
    let mut ok = true;
    for &k in ks {
        let rs: Vec<f64> = ts.iter().map(|&t| f.eval(k * t) / g.eval(t)).collect();
        let slope = crate::numeric::fit_loglog(&ts, &rs);
        let decreasing = rs.windows(2).all(|w| w[1] < w[0]);
        ok &= slope < -EXPONENT_TOL && decreasing;
        slopes.push(slope);
        last.push(*rs.last().unwrap());
    }
    Dominance {
        consistent: ok,
        slopes,
        last_ratio: last,
    }
}

/// Sufficient condition for `Phi << Psi`: `Psi o Phi^{-1}` is convex on the grid.
pub fn check_ll(f: &YoungFunction, g: &YoungFunction, grid: GridSpec) -> Dominance {
    let ts = grid.points();
    let vals: Vec<f64> = ts.iter().map(|&t| g.eval(f.inv(t))).collect();
    let slopes: Vec<f64> = (0..ts.len() - 1).map(|i| (vals[i + 1] - vals[i]) / (ts[i + 1] - ts[i])).collect();
    let mut worst: f64 = 0.0;
    for w in slopes.windows(2) {
        let defect = (w[0] - w[1]) / w[0].abs().max(f64::MIN_POSITIVE);
        worst = worst.max(defect);
    }
    Dominance {
        consistent: worst <= 1e-7,
        slopes: vec![worst],
        last_ratio: vec![],
    }
}

/// Growth indices and Delta-condition verdicts on a certification grid.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GrowthCertificate {
    pub p_index: f64,
    pub delta2: Condition,
    pub deltaprime: Condition,
    pub grid: GridSpec,
}

pub fn certify(f: &YoungFunction, grid: GridSpec) -> GrowthCertificate {
    GrowthCertificate {
        p_index: p_index(f, grid),
        delta2: check_delta2(f, grid),
        deltaprime: check_deltaprime(f, grid),
        grid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::young::Table;

    #[test]
    fn power_index_and_constants() {
        let f = YoungFunction::power(2.0).unwrap();
        assert!((p_index(&f, CERT_GRID) - 2.0).abs() < 1e-12);
        assert_eq!(check_delta2(&f, CERT_GRID), Condition::Consistent { c: 4.0 });
        match check_deltaprime(&f, CERT_GRID) {
            Condition::Consistent { c } => assert!((c - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sum_power_index_from_tail() {
        let f = YoungFunction::sum_power(2.0, 3.0).unwrap();
        assert!((p_index(&f, CERT_GRID) - 3.0).abs() < 1e-6);
    }

    #[test]
    fn power_log_index_slightly_above_p() {
        let f = YoungFunction::power_log(2.0).unwrap();
        let p = p_index(&f, CERT_GRID);
        assert!(p > 2.0 && p < 2.5, "{p}");
    }

    #[test]
    fn exponential_fails_delta2() {
        let tab = Table::sample("exp", f64::exp, 1e-8, 500.0, 64).unwrap();
        let f = YoungFunction::tabulated(tab);
        assert!(!check_delta2(&f, CERT_GRID).holds());
        assert!(p_index(&f, CERT_GRID).is_infinite());
    }

    #[test]
    fn h_conditions_follow_dimension() {
        let f = YoungFunction::power(2.0).unwrap();
        assert!(check_h1(&f, 3.0).holds());
        assert!(!check_h1(&f, 1.5).holds());
        assert!(check_h3(&f, 1.5).holds());
        assert!(!check_h3(&f, 3.0).holds());
        assert!(!check_h1(&f, 2.0).holds());
        let g = YoungFunction::power_log(3.0).unwrap();
        assert!(matches!(check_h3(&g, 3.0), HVerdict::Inconclusive { .. }));
    }

    #[test]
    fn h1_integral_value() {
        // (s / s^2)^{1/2} = s^{-1/2} on (0,1) integrates to 2.
        match check_h1(&YoungFunction::power(2.0).unwrap(), 3.0) {
            HVerdict::Holds { integral } => assert!((integral - 2.0).abs() < 1e-8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dominance_checks() {
        let a2 = YoungFunction::power(2.0).unwrap();
        let a3 = YoungFunction::power(3.0).unwrap();
        assert!(check_prec_prec(&a2, &a3, &[1.0, 10.0]).consistent);
        assert!(!check_prec_prec(&a2, &a2, &[1.0]).consistent);
        assert!(check_ll(&a2, &a3, CERT_GRID).consistent);
        assert!(!check_ll(&a3, &a2, CERT_GRID).consistent);
        let m = YoungFunction::max_power(2.0, 3.0).unwrap();
        assert!(check_ll(&a2, &m, CERT_GRID).consistent);
    }
}
