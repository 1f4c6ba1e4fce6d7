//! Piecewise-linear radial profiles and the radial quadrature shared by the
//! verification harness and the eigenvalue solver.

use crate::error::{domain, Result};
use crate::numeric::quad::GL6;
use crate::rearrange::{omega, WeightProfile};
use crate::young::YoungFunction;

/// `u(x) = U(|x|)` with `U` piecewise linear on `0 = rho_0 < ... < rho_M`,
/// `U(rho_M) = 0`, and `U = 0` beyond `rho_M`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RadialProfile {
    rho: Vec<f64>,
    u: Vec<f64>,
    dim: u32,
}

impl RadialProfile {
    pub fn new(rho: Vec<f64>, u: Vec<f64>, dim: u32) -> Result<Self> {
        if rho.len() < 2 || rho.len() != u.len() {
            return Err(domain("a radial profile needs matching grids of length >= 2"));
        }
        if rho[0] != 0.0 {
            return Err(domain("radial grid must start at 0"));
        }
        if rho.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain("radial grid must increase strictly"));
        }
        if u.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(domain("profile values must be finite and nonnegative"));
        }
        if *u.last().unwrap() != 0.0 {
            return Err(domain("profile must vanish at the outer radius"));
        }
        if dim < 1 {
            return Err(domain("dimension must be positive"));
        }
        Ok(RadialProfile { rho, u, dim })
    }

    /// Sample `f` on `nodes` uniform points of `[0, radius]`, forcing the outer value to 0.
    pub fn sample<F: Fn(f64) -> f64>(f: F, radius: f64, nodes: usize, dim: u32) -> Result<Self> {
        let m = nodes.max(2) - 1;
        let rho: Vec<f64> = (0..=m).map(|i| radius * i as f64 / m as f64).collect();
        let mut u: Vec<f64> = rho.iter().map(|&r| f(r).max(0.0)).collect();
        u[m] = 0.0;
        RadialProfile::new(rho, u, dim)
    }

    /// Truncated cone: 1 on `[0, a]`, linear down to 0 at `b`.
    pub fn cone(a: f64, b: f64, dim: u32) -> Result<Self> {
        if !(b > a) || !(a >= 0.0) {
            return Err(domain("cone needs 0 <= a < b"));
        }
        if a == 0.0 {
            RadialProfile::new(vec![0.0, b], vec![1.0, 0.0], dim)
        } else {
            RadialProfile::new(vec![0.0, a, b], vec![1.0, 1.0, 0.0], dim)
        }
    }

    /// Smooth bump `exp(1 - 1/(1 - (rho/b)^2))` with peak 1 at the origin.
    pub fn bump(b: f64, nodes: usize, dim: u32) -> Result<Self> {
        RadialProfile::sample(|r| bump_value(r / b), b, nodes, dim)
    }

    /// Smooth ring `exp(1 - 1/(1 - ((rho - c)/w)^2))` centred at radius `c`.
    pub fn ring(c: f64, w: f64, nodes: usize, dim: u32) -> Result<Self> {
        RadialProfile::sample(|r| bump_value((r - c) / w), c + w, nodes, dim)
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        *self.rho.last().unwrap()
    }

    /// `|supp u|` as a measure.
    pub fn support_measure(&self) -> f64 {
        omega(self.dim) * self.radius().powi(self.dim as i32)
    }

    pub fn max_value(&self) -> f64 {
        self.u.iter().copied().fold(0.0, f64::max)
    }

    pub fn value(&self, r: f64) -> f64 {
        if r >= self.radius() {
            return 0.0;
        }
        let k = self.rho.partition_point(|&x| x <= r).saturating_sub(1).min(self.rho.len() - 2);
        let t = (r - self.rho[k]) / (self.rho[k + 1] - self.rho[k]);
        self.u[k] + t * (self.u[k + 1] - self.u[k])
    }

    /// `u(x / lambda)`.
    pub fn dilate(&self, lambda: f64) -> RadialProfile {
        RadialProfile {
            rho: self.rho.iter().map(|r| r * lambda).collect(),
            u: self.u.clone(),
            dim: self.dim,
        }
    }

    /// `t u`.
    pub fn scale(&self, t: f64) -> RadialProfile {
        RadialProfile {
            rho: self.rho.clone(),
            u: self.u.iter().map(|v| v * t).collect(),
            dim: self.dim,
        }
    }

    /// `int Phi(|grad u|) dx`, exact for piecewise-linear profiles.
    pub fn gradient_modular(&self, f: &YoungFunction) -> f64 {
        let n = self.dim as i32;
        let w = omega(self.dim);
        let mut total = 0.0;
        for k in 0..self.rho.len() - 1 {
            let h = self.rho[k + 1] - self.rho[k];
            let s = ((self.u[k + 1] - self.u[k]) / h).abs();
            if s > 0.0 {
                total += f.eval(s) * w * (self.rho[k + 1].powi(n) - self.rho[k].powi(n));
            }
        }
        total
    }

    /// Distribution function of the profile.
    pub fn distribution(&self) -> RadialDistribution<'_> {
        RadialDistribution {
            rho: &self.rho,
            v: &self.u,
            dim: self.dim,
        }
    }

    /// Decreasing rearrangement `u*(t)`.
    pub fn rearranged(&self, t: f64) -> f64 {
        self.distribution().rearranged(t)
    }
}

fn bump_value(x: f64) -> f64 {
    let x2 = x * x;
    if x2 >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - x2)).exp()
    }
}

/// Distribution function of piecewise-linear radial data that vanishes beyond the last node.
#[derive(Debug, Clone, Copy)]
pub struct RadialDistribution<'a> {
    pub rho: &'a [f64],
    pub v: &'a [f64],
    pub dim: u32,
}

impl RadialDistribution<'_> {
    /// `|{ x : v(|x|) > s }|` for `s >= 0`, and its derivative in `s`.
    pub fn measure_and_slope(&self, s: f64) -> (f64, f64) {
        let n = self.dim as i32;
        let nf = self.dim as f64;
        let w = omega(self.dim);
        let mut mu = 0.0;
        let mut dmu = 0.0;
        for k in 0..self.rho.len() - 1 {
            let (ra, rb) = (self.rho[k], self.rho[k + 1]);
            let (va, vb) = (self.v[k], self.v[k + 1]);
            let above_a = va > s;
            let above_b = vb > s;
            if above_a && above_b {
                mu += w * (rb.powi(n) - ra.powi(n));
            } else if above_a != above_b {
                let rc = ra + (s - va) / (vb - va) * (rb - ra);
                if above_a {
                    mu += w * (rc.powi(n) - ra.powi(n));
                } else {
                    mu += w * (rb.powi(n) - rc.powi(n));
                }
                dmu -= nf * w * rc.powi(n - 1) * (rb - ra) / (vb - va).abs();
            }
        }
        (mu, dmu)
    }

    pub fn measure(&self, s: f64) -> f64 {
        self.measure_and_slope(s).0
    }

    pub fn max_value(&self) -> f64 {
        self.v.iter().copied().fold(0.0, f64::max)
    }

    /// Right-continuous decreasing rearrangement `inf { s >= 0 : mu(s) <= t }`.
    pub fn rearranged(&self, t: f64) -> f64 {
        let mut hi = self.max_value();
        if self.measure(0.0) <= t {
            return 0.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            if hi - lo <= 1e-15 * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.measure(mid) <= t {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Node values, sorted and deduplicated, as breakpoints in `s`.
    pub fn value_breaks(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.v.to_vec();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }
}

/// Quadrature nodes for `N omega_N int_0^R g(rho) F(rho) rho^{N-1} drho` on a
/// profile grid.
///
/// Each node remembers its profile segment and local coordinate so nodal
/// derivatives can be assembled. The segment touching the origin is refined
/// geometrically, and the innermost piece is closed with the exact weight
/// mass, so integrable singular weights are handled.
#[derive(Debug, Clone)]
pub struct RadialRule {
    pub rho: Vec<f64>,
    pub weight: Vec<f64>,
    pub seg: Vec<usize>,
    pub theta: Vec<f64>,
    /// Weight mass of the innermost ball is infinite (non-integrable weight).
    pub head_infinite: bool,
}

const GRADING_LEVELS: i32 = 40;
const MIN_PIECES: f64 = 64.0;

impl RadialRule {
    pub fn new(w: &WeightProfile, grid: &[f64]) -> Result<Self> {
        if !w.is_radial() {
            return Err(domain("the weight is not radial; supply a radial, constant or power weight"));
        }
        let n = w.dim() as f64;
        let cn = n * omega(w.dim());
        let radius = *grid.last().unwrap();
        let wbreaks = w.radial_breaks();
        let mut rule = RadialRule {
            rho: Vec::new(),
            weight: Vec::new(),
            seg: Vec::new(),
            theta: Vec::new(),
            head_infinite: false,
        };
        let push = |rule: &mut RadialRule, k: usize, a: f64, b: f64| {
            let (ra, rb) = (grid[k], grid[k + 1]);
            let c = 0.5 * (a + b);
            let h = 0.5 * (b - a);
            for &(x, wt) in GL6.iter() {
                let r = c + h * x;
                let g = w.radial_value(r).unwrap_or(0.0);
                rule.rho.push(r);
                rule.weight.push(cn * wt * h * g * r.powf(n - 1.0));
                rule.seg.push(k);
                rule.theta.push((r - ra) / (rb - ra));
            }
        };
        for k in 0..grid.len() - 1 {
            let (ra, rb) = (grid[k], grid[k + 1]);
            let mut cuts = vec![ra];
            cuts.extend(wbreaks.iter().copied().filter(|&x| x > ra && x < rb));
            cuts.push(rb);
            for c in cuts.windows(2) {
                let (a, b) = (c[0], c[1]);
                let pieces = ((b - a) / radius * MIN_PIECES).ceil().max(1.0) as usize;
                for j in 0..pieces {
                    let pa = a + (b - a) * j as f64 / pieces as f64;
                    let pb = a + (b - a) * (j + 1) as f64 / pieces as f64;
                    if pa == 0.0 {
                        let eps = pb * 2f64.powi(-GRADING_LEVELS);
                        for level in 0..GRADING_LEVELS {
                            let hi = pb * 2f64.powi(-level);
                            push(&mut rule, k, hi * 0.5, hi);
                        }
                        let mass = w.ball_mass(eps);
                        if mass.is_infinite() {
                            rule.head_infinite = true;
                        } else {
                            rule.rho.push(0.0);
                            rule.weight.push(mass);
                            rule.seg.push(k);
                            rule.theta.push(0.0);
                        }
                    } else {
                        push(&mut rule, k, pa, pb);
                    }
                }
            }
        }
        Ok(rule)
    }

    /// `sum_j w_j F(u(rho_j))` for a profile on the grid this rule was built for.
    pub fn apply<F: Fn(f64) -> f64>(&self, u: &[f64], f: F) -> f64 {
        let mut total = 0.0;
        for j in 0..self.rho.len() {
            let k = self.seg[j];
            let t = self.theta[j];
            let v = u[k] + t * (u[k + 1] - u[k]);
            total += self.weight[j] * f(v);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_gradient_modular() {
        // Phi = t^2, N = 3, unit cone: 4 pi / 3.
        let u = RadialProfile::cone(0.0, 1.0, 3).unwrap();
        let f = YoungFunction::power(2.0).unwrap();
        let v = u.gradient_modular(&f);
        assert!((v - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn distribution_of_cone() {
        let u = RadialProfile::cone(0.0, 2.0, 3).unwrap();
        let d = u.distribution();
        // {1 - r/2 > s} is the ball of radius 2(1 - s).
        let (mu, dmu) = d.measure_and_slope(0.25);
        let w = omega(3);
        assert!((mu - w * 1.5f64.powi(3)).abs() < 1e-12);
        assert!((dmu + 3.0 * w * 1.5f64.powi(2) * 2.0).abs() < 1e-12);
        assert!((u.rearranged(w * 1.5f64.powi(3)) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(RadialProfile::new(vec![0.0, 1.0], vec![1.0, 0.5], 3).is_err());
        assert!(RadialProfile::new(vec![0.1, 1.0], vec![1.0, 0.0], 3).is_err());
    }
}
