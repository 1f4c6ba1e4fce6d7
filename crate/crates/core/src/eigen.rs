//! Radial first eigenvalue of `-Delta_phi u = lambda g psi(|u|) u/|u|` on a
//! ball, by minimizing `J(u) = int Phi(|grad u|)` on the level set
//! `G(u) = int g Psi(|u|) = r`.
//!
//! Profiles are piecewise linear on a uniform radial grid with a Dirichlet
//! node at `R`. The descent direction is preconditioned by the tridiagonal
//! Kacanov matrix of `J` (edge weights `phi(|s|)/|s|`), which for
//! `Phi = Psi = t^2` reduces the iteration to inverse iteration.

use crate::error::{domain, Error, Result};
use crate::numeric::{invert_increasing, Tolerance};
use crate::profile::{RadialProfile, RadialRule};
use crate::rearrange::{omega, WeightProfile};
use crate::young::YoungFunction;

/// `int Phi(|grad u|)`.
pub fn j_phi(phi: &YoungFunction, u: &RadialProfile) -> f64 {
    u.gradient_modular(phi)
}

/// `int g Psi(|u|)`.
pub fn g_psi(w: &WeightProfile, psi: &YoungFunction, u: &RadialProfile) -> Result<f64> {
    let rule = RadialRule::new(w, u.rho())?;
    if rule.head_infinite && u.values()[0] > 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(rule.apply(u.values(), |v| psi.eval(v)))
}

fn scale_to_level<G: Fn(f64) -> f64>(g_of_t: G, g1: f64, r: f64, psi: &YoungFunction) -> Result<f64> {
    if !(g1 > 0.0) || !g1.is_finite() {
        return Err(Error::Degenerate(format!("G_Psi(u) = {g1}; cannot scale onto a level set")));
    }
    if let Some(q) = psi.power_exponent() {
        return Ok((r / g1).powf(1.0 / q));
    }
    let tol = Tolerance { rtol: 1e-13, atol: 1e-15, max_iter: 400 };
    invert_increasing(g_of_t, r, 1.0, tol)
}

/// `t u` with `G_Psi(t u) = r`.
pub fn project_to_level(w: &WeightProfile, psi: &YoungFunction, u: &RadialProfile, r: f64) -> Result<RadialProfile> {
    let rule = RadialRule::new(w, u.rho())?;
    let g = |t: f64| rule.apply(u.values(), |v| psi.eval(t * v));
    let t = scale_to_level(g, g(1.0), r, psi)?;
    Ok(u.scale(t))
}

/// Solver controls.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EigenOptions {
    pub nodes: usize,
    pub max_iter: usize,
    /// Stop once the normalized Euler-Lagrange residual is below this.
    pub residual_tol: f64,
    /// Stop on a relative decrease of `J` below this, once the residual is below `1e-6`.
    pub decrease_tol: f64,
    pub init: Init,
}

/// Starting profile, projected onto the level set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Init {
    #[default]
    Cone,
    Bump,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { nodes: 2000, max_iter: 500, residual_tol: 1e-9, decrease_tol: 1e-10, init: Init::Cone }
    }
}

/// Minimizer of `J` on `N_r` among radial profiles.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EigenResult {
    pub level: f64,
    /// `lambda_1(r) = J(u)`; an upper bound for the non-radial infimum.
    pub lambda1: f64,
    /// Multiplier `<J'(u), u> / <G'(u), u>`.
    pub lambda_tilde: f64,
    pub constraint: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub profile: RadialProfile,
    /// `J` after every accepted step, starting with the projected initial profile.
    #[serde(skip)]
    pub history: Vec<f64>,
}

struct Problem<'a> {
    phi: &'a YoungFunction,
    psi: &'a YoungFunction,
    rule: RadialRule,
    /// Shell volumes `omega_N (rho_{k+1}^N - rho_k^N)`.
    vol: Vec<f64>,
    h: f64,
    m: usize,
}

impl Problem<'_> {
    fn slopes(&self, u: &[f64]) -> Vec<f64> {
        (0..self.m).map(|k| (u[k + 1] - u[k]) / self.h).collect()
    }

    fn j(&self, u: &[f64]) -> f64 {
        self.slopes(u).iter().zip(&self.vol).map(|(s, v)| self.phi.eval(s.abs()) * v).sum()
    }

    fn g(&self, u: &[f64]) -> f64 {
        self.rule.apply(u, |v| self.psi.eval(v.abs()))
    }

    /// Gradient of `J` in the free nodes `0..m`.
    fn grad_j(&self, u: &[f64]) -> Vec<f64> {
        let mut d = vec![0.0; self.m + 1];
        for (k, s) in self.slopes(u).iter().enumerate() {
            let f = self.phi.derivative(s.abs()) * s.signum() * self.vol[k] / self.h;
            d[k] -= f;
            d[k + 1] += f;
        }
        d.truncate(self.m);
        d
    }

    fn grad_g(&self, u: &[f64]) -> Vec<f64> {
        let mut d = vec![0.0; self.m + 1];
        let r = &self.rule;
        for j in 0..r.rho.len() {
            let k = r.seg[j];
            let t = r.theta[j];
            let v = u[k] + t * (u[k + 1] - u[k]);
            let f = r.weight[j] * self.psi.derivative(v.abs()) * v.signum();
            d[k] += f * (1.0 - t);
            d[k + 1] += f * t;
        }
        d.truncate(self.m);
        d
    }

    /// Tridiagonal Kacanov matrix: `(diag, off)` with `off[k]` coupling nodes `k, k+1`.
    fn kacanov(&self, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let s = self.slopes(u);
        let scale = s.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
        let c: Vec<f64> = s
            .iter()
            .zip(&self.vol)
            .map(|(x, v)| {
                let a = x.abs().max(1e-12 * scale);
                self.phi.derivative(a) / a * v / (self.h * self.h)
            })
            .collect();
        let cmax = c.iter().fold(0.0f64, |a, x| a.max(*x));
        let c: Vec<f64> = c.iter().map(|x| x.max(1e-12 * cmax)).collect();
        let mut diag = vec![0.0; self.m];
        let mut off = vec![0.0; self.m.saturating_sub(1)];
        for k in 0..self.m {
            diag[k] += c[k];
            if k + 1 < self.m {
                diag[k + 1] += c[k];
                off[k] = -c[k];
            }
        }
        (diag, off)
    }

    fn level_scale(&self, u: &[f64], r: f64) -> Result<f64> {
        let g = |t: f64| self.rule.apply(u, |v| self.psi.eval(t * v.abs()));
        scale_to_level(g, g(1.0), r, self.psi)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Thomas algorithm for a symmetric tridiagonal system.
fn solve_tridiagonal(diag: &[f64], off: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0];
    c[0] = if n > 1 { off[0] / denom } else { 0.0 };
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - off[i - 1] * c[i - 1];
        if i + 1 < n {
            c[i] = off[i] / denom;
        }
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d
}

/// Minimize `J_Phi` over radial profiles on `B_R` with `G_Psi = r`.
///
/// The iterate starts from the projected cone and follows preconditioned
/// projected descent with backtracking; every accepted step is rescaled onto
/// the level set and replaced by its absolute value.
pub fn minimize_lambda1(
    phi: &YoungFunction,
    psi: &YoungFunction,
    w: &WeightProfile,
    radius: f64,
    r: f64,
    opts: EigenOptions,
) -> Result<EigenResult> {
    if !(r > 0.0) || !(radius > 0.0) || !radius.is_finite() {
        return Err(domain("eigen solver needs a level r > 0 and a finite radius R > 0"));
    }
    if opts.nodes < 3 {
        return Err(domain("eigen solver needs at least 3 nodes"));
    }
    let n = w.dim();
    let m = opts.nodes - 1;
    let h = radius / m as f64;
    let rho: Vec<f64> = (0..=m).map(|i| radius * i as f64 / m as f64).collect();
    let rule = RadialRule::new(w, &rho)?;
    if rule.head_infinite {
        return Err(Error::Hypothesis("the weight is not integrable near the origin".into()));
    }
    let vol: Vec<f64> = (0..m).map(|k| omega(n) * (rho[k + 1].powi(n as i32) - rho[k].powi(n as i32))).collect();
    let pb = Problem { phi, psi, rule, vol, h, m };

    let mut u: Vec<f64> = match opts.init {
        Init::Cone => rho.iter().map(|x| 1.0 - x / radius).collect(),
        Init::Bump => rho.iter().map(|x| (1.0 - (x / radius).powi(2)).powi(2)).collect(),
    };
    let t = pb.level_scale(&u, r)?;
    u.iter_mut().for_each(|v| *v *= t);
    let mut jv = pb.j(&u);
    let mut history = vec![jv];

    let measure = |u: &[f64]| -> (f64, f64) {
        let gj = pb.grad_j(u);
        let gg = pb.grad_g(u);
        let lt = dot(&gj, &u[..m]) / dot(&gg, &u[..m]);
        let gmax = gg.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let res = gj.iter().zip(&gg).map(|(a, b)| (a - lt * b).abs()).fold(0.0, f64::max) / (lt * gmax);
        (lt, res)
    };

    let (mut lt, mut res) = measure(&u);
    let mut iterations = 0;
    let mut converged = res <= opts.residual_tol;
    while !converged && iterations < opts.max_iter {
        iterations += 1;
        let gj = pb.grad_j(&u);
        let gg = pb.grad_g(&u);
        let rhs: Vec<f64> = gj.iter().zip(&gg).map(|(a, b)| -(a - lt * b)).collect();
        let (diag, off) = pb.kacanov(&u);
        let d = solve_tridiagonal(&diag, &off, &rhs);
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let mut trial: Vec<f64> = u.clone();
            for i in 0..m {
                trial[i] = (u[i] + alpha * d[i]).abs();
            }
            if let Ok(s) = pb.level_scale(&trial, r) {
                trial.iter_mut().for_each(|v| *v *= s);
                let jt = pb.j(&trial);
                if jt < jv {
                    accepted = Some((trial, jt));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((next, jn)) = accepted else {
            converged = res <= 1e-6;
            break;
        };
        let decrease = (jv - jn) / jv;
        u = next;
        jv = jn;
        history.push(jv);
        (lt, res) = measure(&u);
        converged = res <= opts.residual_tol || (decrease < opts.decrease_tol && res <= 1e-6);
    }
    let constraint = pb.g(&u);
    let profile = RadialProfile::new(rho, u, n)?;
    let result = EigenResult {
        level: r,
        lambda1: jv,
        lambda_tilde: lt,
        constraint,
        residual: res,
        iterations,
        converged,
        profile,
        history,
    };
    if !converged {
        return Err(Error::EigenNotConverged(Box::new(result)));
    }
    Ok(result)
}
