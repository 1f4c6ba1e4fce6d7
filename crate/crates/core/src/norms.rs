//! Luxemburg norms and the rearrangement-invariant norms built on the
//! functions `eta_Phi` and `eta_{Phi,Psi}`.

use crate::error::Result;
use crate::numeric::grid::{sup_search, SupResult};
use crate::numeric::solve::{invert_increasing, Tolerance};
use crate::numeric::{fit_loglog, integrate, GridSpec};
use crate::rearrange::WeightProfile;
use crate::young::YoungFunction;

/// Sup grid: from `1e-8` to `min(|Omega|, 1e8)` at 32 points per decade.
pub const SUP_LO: f64 = 1e-8;
pub const SUP_HI: f64 = 1e8;
pub const SUP_PER_DECADE: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Luxemburg,
    PhiInfty,
    XPhi,
    XPhiPsi,
    L1,
    OrliczBphi,
}

impl NormKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormKind::Luxemburg => "luxemburg",
            NormKind::PhiInfty => "phi_infty",
            NormKind::XPhi => "x_phi",
            NormKind::XPhiPsi => "x_phi_psi",
            NormKind::L1 => "l1",
            NormKind::OrliczBphi => "orlicz_bphi",
        }
    }
}

/// A computed norm. `value` is `+inf` for an infinite norm or a failed
/// hypothesis, which `note` then explains.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct NormReport {
    pub kind: NormKind,
    pub value: f64,
    pub finite: bool,
    pub sup_arg: Option<f64>,
    pub grid: Option<GridSpec>,
    pub note: Option<String>,
}

impl NormReport {
    fn plain(kind: NormKind, value: f64) -> Self {
        NormReport { kind, value, finite: value.is_finite(), sup_arg: None, grid: None, note: None }
    }

    fn from_sup(kind: NormKind, r: SupResult, grid: GridSpec) -> Self {
        NormReport { kind, value: r.value, finite: r.finite, sup_arg: Some(r.arg), grid: Some(grid), note: None }
    }

    fn failed(kind: NormKind, note: String) -> Self {
        NormReport { kind, value: f64::INFINITY, finite: false, sup_arg: None, grid: None, note: Some(note) }
    }
}

/// `zeta(s) = s^{1/N - 1}`.
pub fn zeta(n: f64, s: f64) -> f64 {
    s.powf(1.0 / n - 1.0)
}

/// `inf { lambda > 0 : I(lambda) <= 1 }` for a modular `I` nonincreasing in `lambda`.
///
/// The modular is assumed to come from a Delta_2 function, so divergence at
/// one scale means divergence at every scale; the scales `10^{10k}` are
/// probed because quadrature sees a divergence only where the integrand has
/// not underflowed.
pub fn luxemburg<M: Fn(f64) -> f64>(modular: M) -> f64 {
    if (0..=30).any(|k| modular(10f64.powi(10 * k)).is_infinite()) || modular(1e300) > 1.0 {
        return f64::INFINITY;
    }
    if modular(1e-300) == 0.0 {
        return 0.0;
    }
    match invert_increasing(|mu| modular(1.0 / mu), 1.0, 1.0, Tolerance::default()) {
        Ok(mu) => 1.0 / mu,
        Err(_) => f64::NAN,
    }
}

/// Luxemburg norm of `f` on `(a, b)` against Lebesgue measure.
pub fn luxemburg_interval<F: Fn(f64) -> f64>(phi: &YoungFunction, f: F, a: f64, b: f64) -> f64 {
    luxemburg(|lam| integrate(|s| phi.eval(f(s) / lam), a, b, &[]).value)
}

/// `||g||_{L^Phi(Omega)}`, computed from `g*` on `(0, |Omega|)`.
pub fn luxemburg_weight(phi: &YoungFunction, w: &WeightProfile) -> f64 {
    let breaks = w.star_breaks();
    luxemburg(|lam| integrate(|t| phi.eval(w.decreasing(t) / lam), 0.0, w.omega(), &breaks).value)
}

fn sup_grid(omega: f64) -> (f64, f64, bool) {
    if omega.is_finite() {
        (SUP_LO.min(omega * 1e-8), omega * (1.0 - 1e-9), false)
    } else {
        (SUP_LO, SUP_HI, true)
    }
}

/// `||g||_{L^{Phi,inf}} = sup_s g**(s) / Phi(s^{-1/N})`.
pub fn norm_phi_infty(w: &WeightProfile, phi: &YoungFunction) -> NormReport {
    let n = w.dim() as f64;
    let (lo, hi, open_hi) = sup_grid(w.omega());
    let r = sup_search(|s| w.maximal(s) / phi.eval(s.powf(-1.0 / n)), lo, hi, SUP_PER_DECADE, true, open_hi);
    NormReport::from_sup(NormKind::PhiInfty, r, GridSpec::new(lo, hi, SUP_PER_DECADE))
}

/// `eta_Phi(r) = r phi( int_r^{|Omega|} ds / G_Phi(s) )` with
/// `G_Phi(s) = Phi(zeta(s)) Phi~(1 / Phi(zeta(s)))`.
#[derive(Debug, Clone)]
pub struct EtaPhi {
    phi: YoungFunction,
    tilde: YoungFunction,
    n: f64,
    omega: f64,
}

impl EtaPhi {
    pub fn new(phi: &YoungFunction, n: f64, omega: f64) -> Result<Self> {
        Ok(EtaPhi { phi: phi.clone(), tilde: phi.complement()?, n, omega })
    }

    pub fn g(&self, s: f64) -> f64 {
        let a = self.phi.eval(zeta(self.n, s));
        a * self.tilde.eval(1.0 / a)
    }

    pub fn inner(&self, r: f64) -> f64 {
        integrate(|s| 1.0 / self.g(s), r, self.omega, &[]).value
    }

    pub fn eval(&self, r: f64) -> f64 {
        let i = self.inner(r);
        if i.is_infinite() {
            return f64::INFINITY;
        }
        r * self.phi.derivative(i)
    }
}

/// Behaviour of an `eta` function as `r -> 0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LimitCheck {
    pub holds: bool,
    /// Fitted log-log slope of `eta` near 0; negative means blow-up.
    pub slope: f64,
    pub value_at_smallest: f64,
}

/// Slope tolerance for the `r -> 0` limit checks.
pub const LIMIT_SLOPE_TOL: f64 = 1e-3;

fn limit_at_zero<F: Fn(f64) -> f64>(eta: F, omega: f64) -> LimitCheck {
    let base = if omega.is_finite() { omega.min(1.0) } else { 1.0 };
    let rs: Vec<f64> = (6..=10).map(|k| base * 10f64.powi(-k)).collect();
    let vs: Vec<f64> = rs.iter().map(|&r| eta(r)).collect();
    if vs.iter().any(|v| !v.is_finite()) {
        return LimitCheck { holds: false, slope: f64::NEG_INFINITY, value_at_smallest: f64::INFINITY };
    }
    let slope = fit_loglog(&rs, &vs);
    LimitCheck { holds: slope > -LIMIT_SLOPE_TOL, slope, value_at_smallest: *vs.last().unwrap() }
}

/// `lim_{r->0} eta_Phi(r) < inf`.
pub fn check_h2(phi: &YoungFunction, n: f64, omega: f64) -> Result<LimitCheck> {
    let eta = EtaPhi::new(phi, n, omega)?;
    Ok(limit_at_zero(|r| eta.eval(r), omega))
}

/// `||g||_{X_Phi} = sup_r g**(r) eta_Phi(r)`, after checking the limit at 0.
pub fn norm_x_phi(w: &WeightProfile, phi: &YoungFunction) -> Result<NormReport> {
    let n = w.dim() as f64;
    let eta = EtaPhi::new(phi, n, w.omega())?;
    let lim = limit_at_zero(|r| eta.eval(r), w.omega());
    if !lim.holds {
        return Ok(NormReport::failed(NormKind::XPhi, format!("eta_Phi is unbounded at 0 (slope {:.4})", lim.slope)));
    }
    let (lo, hi, open_hi) = sup_grid(w.omega());
    let r = sup_search(|s| w.maximal(s) * eta.eval(s), lo, hi, SUP_PER_DECADE, true, open_hi);
    Ok(NormReport::from_sup(NormKind::XPhi, r, GridSpec::new(lo, hi, SUP_PER_DECADE)))
}

/// `eta_{Phi,Psi}(r) = r Psi( ||zeta||_{L^{Phi~}(r, |Omega|)} )`.
#[derive(Debug, Clone)]
pub struct EtaPhiPsi {
    tilde: YoungFunction,
    psi: YoungFunction,
    n: f64,
    omega: f64,
}

impl EtaPhiPsi {
    pub fn new(phi: &YoungFunction, psi: &YoungFunction, n: f64, omega: f64) -> Result<Self> {
        Ok(EtaPhiPsi { tilde: phi.complement()?, psi: psi.clone(), n, omega })
    }

    pub fn zeta_norm(&self, r: f64) -> f64 {
        luxemburg_interval(&self.tilde, |s| zeta(self.n, s), r, self.omega)
    }

    pub fn eval(&self, r: f64) -> f64 {
        r * self.psi.eval(self.zeta_norm(r))
    }
}

/// `lim_{r->0} eta_{Phi,Psi}(r) < inf`.
pub fn check_h4(phi: &YoungFunction, psi: &YoungFunction, n: f64, omega: f64) -> Result<LimitCheck> {
    let eta = EtaPhiPsi::new(phi, psi, n, omega)?;
    Ok(limit_at_zero(|r| eta.eval(r), omega))
}

/// `||g||_{X_{Phi,Psi}} = sup_r g**(r) eta_{Phi,Psi}(r)`.
pub fn norm_x_phi_psi(w: &WeightProfile, phi: &YoungFunction, psi: &YoungFunction) -> Result<NormReport> {
    let n = w.dim() as f64;
    let eta = EtaPhiPsi::new(phi, psi, n, w.omega())?;
    let lim = limit_at_zero(|r| eta.eval(r), w.omega());
    if !lim.holds {
        return Ok(NormReport::failed(NormKind::XPhiPsi, format!("eta_(Phi,Psi) is unbounded at 0 (slope {:.4})", lim.slope)));
    }
    let (lo, hi, open_hi) = sup_grid(w.omega());
    let r = sup_search(|s| w.maximal(s) * eta.eval(s), lo, hi, SUP_PER_DECADE, true, open_hi);
    Ok(NormReport::from_sup(NormKind::XPhiPsi, r, GridSpec::new(lo, hi, SUP_PER_DECADE)))
}

/// `||g||_{L^1}`.
pub fn norm_l1(w: &WeightProfile) -> NormReport {
    NormReport::plain(NormKind::L1, w.l1_norm())
}

/// `||g||_{L^Phi}`.
pub fn norm_luxemburg(w: &WeightProfile, phi: &YoungFunction) -> NormReport {
    NormReport::plain(NormKind::Luxemburg, luxemburg_weight(phi, w))
}

/// `||g||_{L^{B~_Phi}}`.
pub fn norm_orlicz_bphi(w: &WeightProfile, phi: &YoungFunction) -> Result<NormReport> {
    let bt = crate::conjugate::b_tilde(phi, w.dim() as f64)?;
    Ok(NormReport::plain(NormKind::OrliczBphi, luxemburg_weight(&bt, w)))
}
