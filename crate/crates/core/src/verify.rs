//! Numerical check of the weighted modular inequality
//! `Psi^{-1}(int |g| Psi(|u|)) <= C Phi^{-1}(int Phi(|grad u|))` on families
//! of radial test functions.
//!
//! Only radial profiles are tested, so a bounded empirical constant is
//! evidence, not a certificate.

use rayon::prelude::*;

use crate::admit::{Route, RouteId};
use crate::error::{domain, Result};
use crate::numeric::{fit_loglog, grid::logspace};
use crate::profile::{RadialProfile, RadialRule};
use crate::rearrange::WeightProfile;
use crate::young::YoungFunction;

/// Nodes used for sampled smooth profiles.
pub const BUMP_NODES: usize = 401;

/// `Psi^{-1}( int g Psi(u) )`, `+inf` when a non-integrable weight meets `u(0) > 0`.
pub fn modular_lhs(w: &WeightProfile, psi: &YoungFunction, u: &RadialProfile) -> Result<f64> {
    if w.dim() != u.dim() {
        return Err(domain("weight and profile dimensions differ"));
    }
    let rule = RadialRule::new(w, u.rho())?;
    if rule.head_infinite && u.values()[0] > 0.0 {
        return Ok(f64::INFINITY);
    }
    psi.inverse(rule.apply(u.values(), |v| psi.eval(v)))
}

/// `Phi^{-1}( int Phi(|grad u|) )`.
pub fn modular_rhs(phi: &YoungFunction, u: &RadialProfile) -> Result<f64> {
    phi.inverse(u.gradient_modular(phi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Truncated cones `min(1, (b - rho)_+ / (b - a))`.
    Cones,
    /// Smooth bumps of several radii.
    Bumps,
    /// `u(x / lambda)` of a base bump.
    Dilate,
    /// `t u` of a base bump.
    Amplitude,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Cones, Family::Bumps, Family::Dilate, Family::Amplitude];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Cones => "cones",
            Family::Bumps => "bumps",
            Family::Dilate => "dilate",
            Family::Amplitude => "amplitude",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown family `{s}` (expected cones, bumps, dilate or amplitude)"))
    }
}

/// One test function of a family.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TestCase {
    pub test_id: String,
    pub param: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Empirical constant against a route's bound expression.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BoundComparison {
    pub route: RouteId,
    pub expression: f64,
    /// `empirical_constant / expression`: the factor `C` the bound needs.
    pub implied_factor: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HarnessResult {
    pub family: Family,
    pub weight: String,
    pub phi: String,
    pub psi: String,
    pub test_class: &'static str,
    pub cases: Vec<TestCase>,
    pub empirical_constant: f64,
    /// Least-squares slope of `ln ratio` against `ln lambda` (dilation sweeps).
    pub dilation_slope: Option<f64>,
    pub bound: Option<BoundComparison>,
}

impl HarnessResult {
    /// Compare the empirical constant with a route's constant expression.
    pub fn compare(&mut self, route: &Route) {
        let implied = self.empirical_constant / route.constant;
        self.bound = Some(BoundComparison {
            route: route.id,
            expression: route.constant,
            implied_factor: implied,
            satisfied: implied.is_finite() || self.empirical_constant == 0.0,
        });
    }
}

/// Test profiles of a family for a weight on its domain.
///
/// On a ball of radius `R` supports are kept inside the ball: cone radii run
/// over `R * logspace(1e-4, 1, 5)`, and the dilation base has radius `R/100`.
pub fn family_members(family: Family, w: &WeightProfile) -> Result<Vec<(String, f64, RadialProfile)>> {
    let n = w.dim();
    let radius = w.domain_radius();
    let ball = radius.is_finite();
    let scales = if ball { logspace(radius * 1e-4, radius, 5) } else { logspace(1e-2, 1e2, 5) };
    let mut out = Vec::new();
    match family {
        Family::Cones => {
            for &b in &scales {
                for frac in [0.0, 0.2, 0.4, 0.6, 0.8] {
                    out.push((format!("cone-a{frac:.1}"), b, RadialProfile::cone(frac * b, b, n)?));
                }
            }
        }
        Family::Bumps => {
            for &b in &scales {
                out.push(("bump".into(), b, RadialProfile::bump(b, BUMP_NODES, n)?));
            }
        }
        Family::Dilate => {
            let base = RadialProfile::bump(if ball { radius / 100.0 } else { 1.0 }, BUMP_NODES, n)?;
            for lam in logspace(1e-2, 1e2, 9) {
                out.push(("dilate".into(), lam, base.dilate(lam)));
            }
        }
        Family::Amplitude => {
            let base = RadialProfile::bump(if ball { radius / 2.0 } else { 1.0 }, BUMP_NODES, n)?;
            for t in logspace(1e-2, 1e2, 9) {
                out.push(("amplitude".into(), t, base.scale(t)));
            }
        }
    }
    Ok(out)
}

/// Evaluate both sides on every member of a family.
pub fn run_family(w: &WeightProfile, phi: &YoungFunction, psi: &YoungFunction, family: Family) -> Result<HarnessResult> {
    let members = family_members(family, w)?;
    let cases: Vec<TestCase> = members
        .par_iter()
        .enumerate()
        .map(|(i, (id, param, u))| {
            let lhs = modular_lhs(w, psi, u)?;
            let rhs = modular_rhs(phi, u)?;
            let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
            Ok(TestCase { test_id: format!("{}-{i}", id), param: *param, lhs, rhs, ratio })
        })
        .collect::<Result<_>>()?;
    let empirical_constant = cases.iter().map(|c| c.ratio).fold(0.0, f64::max);
    let dilation_slope = if family == Family::Dilate {
        let pts: Vec<(f64, f64)> = cases.iter().filter(|c| c.ratio > 0.0 && c.ratio.is_finite()).map(|c| (c.param, c.ratio)).collect();
        (pts.len() >= 2).then(|| {
            let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            fit_loglog(&x, &y)
        })
    } else {
        None
    };
    Ok(HarnessResult {
        family,
        weight: w.spec().to_string(),
        phi: phi.spec(),
        psi: psi.spec(),
        test_class: "radial family",
        cases,
        empirical_constant,
        dilation_slope,
        bound: None,
    })
}

/// CSV rows `test_id,param,lhs,rhs,ratio`.
pub fn write_csv<W: std::io::Write>(result: &HarnessResult, out: W) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    for c in &result.cases {
        wtr.serialize(c)?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rearrange::omega;
    use std::f64::consts::PI;

    fn pow(p: f64) -> YoungFunction {
        YoungFunction::power(p).unwrap()
    }

    #[test]
    fn cone_sides_closed_form() {
        let w = WeightProfile::constant(1.0, omega(3), 3, omega(3)).unwrap();
        let u = RadialProfile::cone(0.0, 1.0, 3).unwrap();
        let l = modular_lhs(&w, &pow(2.0), &u).unwrap();
        let r = modular_rhs(&pow(2.0), &u).unwrap();
        assert!((l - (4.0 * PI / 30.0).sqrt()).abs() < 1e-12);
        assert!((r - (4.0 * PI / 3.0).sqrt()).abs() < 1e-12);
        let l4 = modular_lhs(&w.scaled(4.0), &pow(2.0), &u).unwrap();
        assert!((l4 / l - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_profile_and_weight() {
        let w = WeightProfile::constant(0.0, 1.0, 3, 1.0).unwrap();
        let u = RadialProfile::cone(0.0, 0.5, 3).unwrap();
        assert_eq!(modular_lhs(&w, &pow(2.0), &u).unwrap(), 0.0);
        let z = RadialProfile::new(vec![0.0, 1.0], vec![0.0, 0.0], 3).unwrap();
        assert_eq!(modular_rhs(&pow(2.0), &z).unwrap(), 0.0);
        let r = run_family(&w, &pow(2.0), &pow(2.0), Family::Cones).unwrap();
        assert!(r.cases.iter().all(|c| c.ratio == 0.0));
    }

    #[test]
    fn bump_refinement_is_stable() {
        let u1 = RadialProfile::bump(1.0, 401, 3).unwrap();
        let u2 = RadialProfile::bump(1.0, 801, 3).unwrap();
        let (a, b) = (modular_rhs(&pow(2.0), &u1).unwrap(), modular_rhs(&pow(2.0), &u2).unwrap());
        assert!((a / b - 1.0).abs() < 1e-3);
    }

    #[test]
    fn hardy_dilation_is_flat() {
        let w = WeightProfile::hardy(2.0, 4, f64::INFINITY).unwrap();
        let r = run_family(&w, &pow(2.0), &pow(2.0), Family::Dilate).unwrap();
        let ratios: Vec<f64> = r.cases.iter().map(|c| c.ratio).collect();
        for x in &ratios {
            assert!((x / ratios[4] - 1.0).abs() < 1e-9);
        }
        assert!(r.dilation_slope.unwrap().abs() < 1e-9);
    }

    #[test]
    fn steep_weight_grows_under_contraction() {
        // ratio ~ lambda^{(p - a)/p}.
        let w = WeightProfile::hardy(3.0, 4, f64::INFINITY).unwrap();
        let r = run_family(&w, &pow(2.0), &pow(2.0), Family::Dilate).unwrap();
        assert!((r.dilation_slope.unwrap() + 0.5).abs() < 1e-6);
    }

    #[test]
    fn amplitude_invariance_for_equal_powers() {
        let w = WeightProfile::hardy(1.0, 3, f64::INFINITY).unwrap();
        let r = run_family(&w, &pow(2.0), &pow(2.0), Family::Amplitude).unwrap();
        let first = r.cases[0].ratio;
        assert!(r.cases.iter().all(|c| (c.ratio / first - 1.0).abs() < 1e-9));
    }

    #[test]
    fn csv_layout() {
        let w = WeightProfile::hardy(2.0, 4, f64::INFINITY).unwrap();
        let r = run_family(&w, &pow(2.0), &pow(2.0), Family::Bumps).unwrap();
        let mut buf = Vec::new();
        write_csv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("test_id,param,lhs,rhs,ratio\n"));
        assert_eq!(text.lines().count(), 6);
    }
}
