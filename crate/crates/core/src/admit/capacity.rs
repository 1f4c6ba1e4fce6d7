//! Orlicz capacity of concentric balls and the capacity criterion.

use crate::error::{domain, Result};
use crate::numeric::{integrate, invert_increasing, Tolerance};
use crate::profile::RadialProfile;
use crate::rearrange::{omega, WeightProfile};
use crate::young::YoungFunction;

/// Nodes used to sample the minimizer between the two radii.
const PROFILE_NODES: usize = 200;

/// `Cap_Phi(B_a, B_R)` with its radial minimizer.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CapacityResult {
    pub a: f64,
    pub r: f64,
    pub value: f64,
    /// Constant of the first integral `rho^{N-1} phi(-u') = c`.
    pub c: f64,
    #[serde(skip)]
    pub profile: RadialProfile,
}

/// Capacity of the closed ball `B_a` relative to `B_R` in `R^N`.
///
/// The radial minimizer satisfies `rho^{N-1} phi(-u'(rho)) = c`; `c` is
/// fixed by `int_a^R phi^{-1}(c / rho^{N-1}) = 1`.
pub fn capacity_ball(phi: &YoungFunction, n: u32, a: f64, r: f64) -> Result<CapacityResult> {
    if !(a > 0.0 && a < r && r.is_finite()) {
        return Err(domain(format!("capacity needs 0 < a < R < inf, got a={a}, R={r}")));
    }
    let nf = n as f64;
    let slope = |c: f64, rho: f64| phi.phi_inverse(c / rho.powf(nf - 1.0));
    let drop = |c: f64| integrate(|rho| slope(c, rho), a, r, &[]).value;
    let hint = phi.derivative(1.0 / (r - a)) * a.powf(nf - 1.0);
    let c = invert_increasing(drop, 1.0, hint, Tolerance::default())?;
    let value = nf * omega(n) * integrate(|rho| phi.eval(slope(c, rho)) * rho.powf(nf - 1.0), a, r, &[]).value;

    let mut rho = vec![0.0];
    let mut u = vec![1.0];
    let m = PROFILE_NODES - 1;
    let radii: Vec<f64> = (0..=m).map(|i| a + (r - a) * i as f64 / m as f64).collect();
    let mut acc = 0.0;
    let mut tail = vec![0.0; radii.len()];
    for k in (0..m).rev() {
        acc += integrate(|s| slope(c, s), radii[k], radii[k + 1], &[]).value;
        tail[k] = acc;
    }
    for (k, &x) in radii.iter().enumerate() {
        rho.push(x);
        u.push(if k == 0 { 1.0 } else { tail[k].min(1.0) });
    }
    *u.last_mut().unwrap() = 0.0;
    let profile = RadialProfile::new(rho, u, n)?;
    Ok(CapacityResult { a, r, value, c, profile })
}

/// One ball of the capacity criterion.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CapacitySample {
    pub a: f64,
    pub mass: f64,
    pub capacity: f64,
    pub ratio: f64,
}

/// `D = sup_a int_{B_a} g / Psi(Phi^{-1}(Cap_Phi(B_a, B_R)))` over a radius grid.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CapacityCriterion {
    pub value: f64,
    /// Some ball carries infinite weight mass.
    pub divergent: bool,
    pub arg_a: f64,
    pub radius: f64,
    pub samples: Vec<CapacitySample>,
}

pub fn capacity_criterion(
    w: &WeightProfile,
    phi: &YoungFunction,
    psi: &YoungFunction,
    radius: f64,
    a_grid: &[f64],
) -> Result<CapacityCriterion> {
    if !w.is_radial() {
        return Err(domain("the capacity criterion needs a radial weight"));
    }
    let n = w.dim();
    let mut samples = Vec::with_capacity(a_grid.len());
    for &a in a_grid {
        let mass = w.ball_mass(a);
        let cap = capacity_ball(phi, n, a, radius)?;
        let ratio = if mass == 0.0 { 0.0 } else { mass / psi.eval(phi.inv(cap.value)) };
        samples.push(CapacitySample { a, mass, capacity: cap.value, ratio });
    }
    let best = samples.iter().copied().fold(None::<CapacitySample>, |acc, s| match acc {
        Some(b) if b.ratio >= s.ratio => Some(b),
        _ => Some(s),
    });
    let (value, arg_a) = best.map_or((0.0, f64::NAN), |s| (s.ratio, s.a));
    Ok(CapacityCriterion { value, divergent: value.is_infinite(), arg_a, radius, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Discrete minimization over shells: `min sum m_k Phi(s_k)` subject to
    /// `sum s_k h_k = 1`, solved through its KKT condition `m_k phi(s_k) = mu h_k`.
    fn shell_oracle(phi: &YoungFunction, n: u32, a: f64, r: f64, shells: usize) -> f64 {
        let h = (r - a) / shells as f64;
        let vol: Vec<f64> = (0..shells)
            .map(|k| {
                let (x, y) = (a + h * k as f64, a + h * (k + 1) as f64);
                omega(n) * (y.powi(n as i32) - x.powi(n as i32))
            })
            .collect();
        let drop = |mu: f64| vol.iter().map(|m| phi.phi_inverse(mu * h / m) * h).sum::<f64>();
        let (mut lo, mut hi) = (1e-12f64, 1e12f64);
        for _ in 0..300 {
            let mid = (lo * hi).sqrt();
            if drop(mid) < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        vol.iter().map(|m| m * phi.eval(phi.phi_inverse(hi * h / m))).sum()
    }

    #[test]
    fn dirichlet_capacity_closed_form() {
        let phi = YoungFunction::power(2.0).unwrap();
        for &a in &[0.2, 0.5] {
            let c = capacity_ball(&phi, 3, a, 1.0).unwrap();
            let exact = 4.0 * PI / (1.0 / a - 1.0);
            assert!((c.value / exact - 1.0).abs() < 1e-8, "{} vs {exact}", c.value);
        }
    }

    #[test]
    fn agrees_with_shell_minimization() {
        for &p in &[2.0, 3.0] {
            let phi = YoungFunction::power(p).unwrap();
            for &n in &[3u32, 4] {
                for &a in &[0.2, 0.5] {
                    let c = capacity_ball(&phi, n, a, 1.0).unwrap().value;
                    let o = shell_oracle(&phi, n, a, 1.0, 4000);
                    assert!((c / o - 1.0).abs() < 5e-3, "p={p} n={n} a={a}: {c} vs {o}");
                }
            }
        }
    }

    #[test]
    fn monotone_and_blowing_up() {
        let phi = YoungFunction::power(3.0).unwrap();
        let vals: Vec<f64> = [0.9, 0.99, 0.999].iter().map(|&a| capacity_ball(&phi, 3, a, 1.0).unwrap().value).collect();
        assert!(vals[0] < vals[1] && vals[1] < vals[2] && vals[2] > 1e5);
    }

    #[test]
    fn minimizer_meets_constraints() {
        let phi = YoungFunction::power(2.0).unwrap();
        let c = capacity_ball(&phi, 3, 0.5, 1.0).unwrap();
        let u = &c.profile;
        assert_eq!(u.value(0.25), 1.0);
        assert!((u.gradient_modular(&phi) / c.value - 1.0).abs() < 1e-3);
    }

    #[test]
    fn criterion_for_unit_weight() {
        // a^2 (1 - a) / 3 peaks at a = 2/3 with value 4/81.
        let phi = YoungFunction::power(2.0).unwrap();
        let w = WeightProfile::constant(1.0, omega(3), 3, omega(3)).unwrap();
        let grid = crate::numeric::grid::logspace(0.05, 0.95, 60);
        let d = capacity_criterion(&w, &phi, &phi, 1.0, &grid).unwrap();
        assert!(d.value <= 4.0 / 81.0 * (1.0 + 1e-9));
        assert!(d.value > 4.0 / 81.0 * 0.99, "{}", d.value);
    }

    #[test]
    fn criterion_degenerate_weights() {
        let phi = YoungFunction::power(2.0).unwrap();
        let grid = [0.1, 0.5];
        let zero = WeightProfile::constant(0.0, omega(3), 3, omega(3)).unwrap();
        assert_eq!(capacity_criterion(&zero, &phi, &phi, 1.0, &grid).unwrap().value, 0.0);
        let hardy = WeightProfile::hardy(3.0, 3, omega(3)).unwrap();
        assert!(capacity_criterion(&hardy, &phi, &phi, 1.0, &grid).unwrap().divergent);
    }
}
