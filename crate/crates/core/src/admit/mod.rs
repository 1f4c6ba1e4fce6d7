//! Weight admissibility: theorem routes, Muckenhoupt conditions and capacity.
//!
//! Each route pairs a function space `V` for the weight with the hypotheses on
//! `Phi` (and `Psi`) under which `g in V` gives the weighted modular
//! inequality
//! `Psi^{-1}(int |g| Psi(|u|)) <= C Phi^{-1}(int Phi(|grad u|))`.
//!
//! | route | hypotheses | norm |
//! |-------|------------|------|
//! | T1.2 | `Psi = Phi`; `Phi, Phi~` in Delta'; (H1) | `L^{B~_Phi}` |
//! | T1.3 | `Psi = Phi`; `Phi~` in Delta'; `P_Phi < N` | `L^{Phi,inf}` |
//! | T1.4 | `Psi = Phi`; `Phi` in Delta'; `Phi~` in Delta2; (H2) | `X_Phi` |
//! | T1.5 | `abs(Omega) < inf`; `Phi~` in Delta'; (H3) | `L^1` |
//! | T1.7 | (H1); `Phi, Phi~, Psi` in Delta'; `Phi << Psi`; (H4) | `X_{Phi,Psi}` |
//!
//! Hypotheses are checked numerically on grids; an "admissible" verdict is
//! evidence, not proof.

pub mod capacity;
pub mod muckenhoupt;

use rayon::prelude::*;
use serde::ser::SerializeMap;

pub use capacity::{capacity_ball, capacity_criterion, CapacityCriterion, CapacityResult, CapacitySample};
pub use muckenhoupt::{muckenhoupt_sup_general, muckenhoupt_sup_same, HardyPair, MuckenhouptGrid, MuckenhouptResult};

use crate::norms::{self, NormKind, NormReport};
use crate::rearrange::WeightProfile;
use crate::young::growth::{self, Condition, GrowthCertificate, HVerdict, CERT_GRID};
use crate::young::YoungFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub enum RouteId {
    #[serde(rename = "T1.2")]
    T12,
    #[serde(rename = "T1.3")]
    T13,
    #[serde(rename = "T1.4")]
    T14,
    #[serde(rename = "T1.5")]
    T15,
    #[serde(rename = "T1.7")]
    T17,
}

impl RouteId {
    pub const ALL: [RouteId; 5] = [RouteId::T12, RouteId::T13, RouteId::T14, RouteId::T15, RouteId::T17];

    pub fn as_str(&self) -> &'static str {
        match self {
            RouteId::T12 => "T1.2",
            RouteId::T13 => "T1.3",
            RouteId::T14 => "T1.4",
            RouteId::T15 => "T1.5",
            RouteId::T17 => "T1.7",
        }
    }

    pub fn norm_kind(&self) -> NormKind {
        match self {
            RouteId::T12 => NormKind::OrliczBphi,
            RouteId::T13 => NormKind::PhiInfty,
            RouteId::T14 => NormKind::XPhi,
            RouteId::T15 => NormKind::L1,
            RouteId::T17 => NormKind::XPhiPsi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Admissible,
    HypothesisFailed,
    NormInfinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Hypothesis {
    #[serde(skip)]
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl Hypothesis {
    fn new(name: &'static str, ok: bool, detail: String) -> Self {
        Hypothesis { name, status: if ok { Status::Holds } else { Status::Fails }, detail }
    }
}

/// Hypothesis checks in a fixed order; serialized as a map keyed by name.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Hypotheses(pub Vec<Hypothesis>);

impl Hypotheses {
    pub fn all_hold(&self) -> bool {
        self.0.iter().all(|h| h.status == Status::Holds)
    }

    pub fn get(&self, name: &str) -> Option<&Hypothesis> {
        self.0.iter().find(|h| h.name == name)
    }
}

impl serde::Serialize for Hypotheses {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for h in &self.0 {
            m.serialize_entry(h.name, h)?;
        }
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Route {
    pub id: RouteId,
    pub hypotheses: Hypotheses,
    pub norm: NormReport,
    pub verdict: Verdict,
    /// The theorem's constant expression evaluated on the norm.
    pub constant: f64,
    pub constant_expr: &'static str,
}

/// Growth data shared by all routes.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GrowthSummary {
    pub phi: GrowthCertificate,
    pub phi_tilde: GrowthCertificate,
    pub psi: GrowthCertificate,
    pub h1: HVerdict,
    pub h3: HVerdict,
    pub phi_ll_psi: bool,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CapacityOptions {
    pub radius: f64,
    pub a_grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct ReportOptions {
    pub muckenhoupt: Option<MuckenhouptGrid>,
    pub capacity: Option<CapacityOptions>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AdmissibilityReport {
    pub weight: String,
    pub phi: String,
    pub psi: String,
    pub dim: u32,
    pub omega: f64,
    pub growth: GrowthSummary,
    pub routes: Vec<Route>,
    pub muckenhoupt: Option<MuckenhouptResult>,
    pub capacity: Option<CapacityCriterion>,
}

impl AdmissibilityReport {
    pub fn route(&self, id: RouteId) -> Option<&Route> {
        self.routes.iter().find(|r| r.id == id)
    }

    pub fn any_admissible(&self) -> bool {
        self.routes.iter().any(|r| r.verdict == Verdict::Admissible)
    }

    /// No route succeeds and at least one failed on its hypotheses.
    pub fn hypothesis_blocked(&self) -> bool {
        !self.any_admissible() && self.routes.iter().any(|r| r.verdict == Verdict::HypothesisFailed)
    }
}

fn cond(name: &'static str, label: &str, c: &Condition) -> Hypothesis {
    let detail = match c {
        Condition::Consistent { c } => format!("{label} consistent on grid with C = {c:.6}"),
        Condition::Falsified { s, t, ratio } => format!("{label} falsified at s = {s:.3e}, t = {t:.3e} (ratio {ratio:.3e})"),
    };
    Hypothesis::new(name, c.holds(), detail)
}

fn hverdict(name: &'static str, v: &HVerdict) -> Hypothesis {
    match v {
        HVerdict::Holds { integral } => Hypothesis::new(name, true, format!("integral = {integral:.6}")),
        HVerdict::Fails { exponent } => Hypothesis::new(name, false, format!("diverges (limit exponent {exponent:.4})")),
        HVerdict::Inconclusive { exponent } => Hypothesis {
            name,
            status: Status::Inconclusive,
            detail: format!("limit exponent {exponent:.4} is critical"),
        },
    }
}

fn limit(name: &'static str, r: crate::Result<norms::LimitCheck>) -> Hypothesis {
    match r {
        Ok(l) => Hypothesis::new(name, l.holds, format!("slope at 0 = {:.5}, value = {:.6e}", l.slope, l.value_at_smallest)),
        Err(e) => Hypothesis::new(name, false, e.to_string()),
    }
}

fn norm_or_note(kind: NormKind, r: crate::Result<NormReport>) -> NormReport {
    r.unwrap_or_else(|e| NormReport {
        kind,
        value: f64::INFINITY,
        finite: false,
        sup_arg: None,
        grid: None,
        note: Some(e.to_string()),
    })
}

struct Inputs<'a> {
    w: &'a WeightProfile,
    phi: &'a YoungFunction,
    psi: &'a YoungFunction,
    n: f64,
    growth: &'a GrowthSummary,
}

fn same_young(phi: &YoungFunction, psi: &YoungFunction) -> Hypothesis {
    let ok = phi.spec() == psi.spec();
    Hypothesis::new("psi-equals-phi", ok, format!("Phi = {}, Psi = {}", phi.spec(), psi.spec()))
}

fn route(id: RouteId, x: &Inputs) -> Route {
    let g = x.growth;
    let mut hs = Vec::new();
    let omega = x.w.omega();
    match id {
        RouteId::T12 | RouteId::T13 | RouteId::T14 => hs.push(same_young(x.phi, x.psi)),
        _ => {}
    }
    match id {
        RouteId::T12 => {
            hs.push(cond("phi-deltaprime", "Delta'", &g.phi.deltaprime));
            hs.push(cond("phi-tilde-deltaprime", "Delta'", &g.phi_tilde.deltaprime));
            hs.push(hverdict("h1", &g.h1));
        }
        RouteId::T13 => {
            hs.push(cond("phi-tilde-deltaprime", "Delta'", &g.phi_tilde.deltaprime));
            let p = g.phi.p_index;
            hs.push(Hypothesis::new("p-index-below-n", p < x.n, format!("P_Phi = {p:.6}, N = {}", x.n)));
        }
        RouteId::T14 => {
            hs.push(cond("phi-deltaprime", "Delta'", &g.phi.deltaprime));
            hs.push(cond("phi-tilde-delta2", "Delta2", &g.phi_tilde.delta2));
            hs.push(limit("h2", norms::check_h2(x.phi, x.n, omega)));
        }
        RouteId::T15 => {
            hs.push(Hypothesis::new("finite-measure", omega.is_finite(), format!("|Omega| = {omega}")));
            hs.push(cond("phi-tilde-deltaprime", "Delta'", &g.phi_tilde.deltaprime));
            hs.push(hverdict("h3", &g.h3));
        }
        RouteId::T17 => {
            hs.push(hverdict("h1", &g.h1));
            hs.push(cond("phi-deltaprime", "Delta'", &g.phi.deltaprime));
            hs.push(cond("phi-tilde-deltaprime", "Delta'", &g.phi_tilde.deltaprime));
            hs.push(cond("psi-deltaprime", "Delta'", &g.psi.deltaprime));
            hs.push(Hypothesis::new("phi-ll-psi", g.phi_ll_psi, "Psi o Phi^{-1} convex on grid (sufficient)".into()));
            hs.push(limit("h4", norms::check_h4(x.phi, x.psi, x.n, omega)));
        }
    }
    let hypotheses = Hypotheses(hs);
    let kind = id.norm_kind();
    let norm = match id {
        RouteId::T12 if g.h1.holds() => norm_or_note(kind, norms::norm_orlicz_bphi(x.w, x.phi)),
        RouteId::T12 => norm_or_note(kind, Err(crate::Error::Hypothesis("B_Phi needs (H1)".into()))),
        RouteId::T13 => norms::norm_phi_infty(x.w, x.phi),
        RouteId::T14 => norm_or_note(kind, norms::norm_x_phi(x.w, x.phi)),
        RouteId::T15 => norms::norm_l1(x.w),
        RouteId::T17 => norm_or_note(kind, norms::norm_x_phi_psi(x.w, x.phi, x.psi)),
    };
    let v = norm.value;
    let (constant, constant_expr) = match id {
        RouteId::T15 | RouteId::T17 => (v.max(v.powf(1.0 / g.psi.p_index)), "max{|g|, |g|^(1/P_Psi)}"),
        _ => (v, "|g|"),
    };
    let verdict = if !hypotheses.all_hold() {
        Verdict::HypothesisFailed
    } else if norm.finite {
        Verdict::Admissible
    } else {
        Verdict::NormInfinite
    };
    Route { id, hypotheses, norm, verdict, constant, constant_expr }
}

/// Growth certificates for `Phi`, `Phi~` and `Psi`, (H1), (H3) and `Phi << Psi`.
pub fn growth_summary(phi: &YoungFunction, psi: &YoungFunction, n: f64) -> crate::Result<GrowthSummary> {
    let tilde = phi.complement()?;
    let ((cp, ct), cq) = rayon::join(|| rayon::join(|| growth::certify(phi, CERT_GRID), || growth::certify(&tilde, CERT_GRID)), || growth::certify(psi, CERT_GRID));
    Ok(GrowthSummary {
        phi: cp,
        phi_tilde: ct,
        psi: cq,
        h1: growth::check_h1(phi, n),
        h3: growth::check_h3(phi, n),
        phi_ll_psi: growth::check_ll(phi, psi, CERT_GRID).consistent,
    })
}

/// Evaluate every route for the weight `w` and the pair `(Phi, Psi)`.
pub fn admissibility_report(
    w: &WeightProfile,
    phi: &YoungFunction,
    psi: &YoungFunction,
    opts: &ReportOptions,
) -> crate::Result<AdmissibilityReport> {
    let n = w.dim() as f64;
    let growth = growth_summary(phi, psi, n)?;
    let inputs = Inputs { w, phi, psi, n, growth: &growth };
    let routes: Vec<Route> = RouteId::ALL.par_iter().map(|&id| route(id, &inputs)).collect();
    let muckenhoupt = match opts.muckenhoupt {
        Some(grid) => {
            let pair = HardyPair::from_weight(w, phi);
            Some(if phi.spec() == psi.spec() {
                muckenhoupt_sup_same(phi, &pair, grid)
            } else {
                muckenhoupt_sup_general(phi, psi, &pair, grid)?
            })
        }
        None => None,
    };
    let capacity = match &opts.capacity {
        Some(c) => Some(capacity_criterion(w, phi, psi, c.radius, &c.a_grid)?),
        None => None,
    };
    Ok(AdmissibilityReport {
        weight: w.spec().to_string(),
        phi: phi.spec(),
        psi: psi.spec(),
        dim: w.dim(),
        omega: w.omega(),
        growth,
        routes,
        muckenhoupt,
        capacity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow(p: f64) -> YoungFunction {
        YoungFunction::power(p).unwrap()
    }

    #[test]
    fn hardy_weight_in_dimension_four() {
        let w = WeightProfile::hardy(2.0, 4, f64::INFINITY).unwrap();
        let r = admissibility_report(&w, &pow(2.0), &pow(2.0), &ReportOptions::default()).unwrap();
        let t13 = r.route(RouteId::T13).unwrap();
        assert_eq!(t13.verdict, Verdict::Admissible, "{t13:?}");
        assert_eq!(r.route(RouteId::T15).unwrap().verdict, Verdict::HypothesisFailed);
    }

    #[test]
    fn bounded_domain_with_large_exponent() {
        let w = WeightProfile::constant(2.0, 1.0, 2, 1.0).unwrap();
        let r = admissibility_report(&w, &pow(3.0), &pow(4.0), &ReportOptions::default()).unwrap();
        let t15 = r.route(RouteId::T15).unwrap();
        assert_eq!(t15.verdict, Verdict::Admissible, "{t15:?}");
        assert!((t15.norm.value - 2.0).abs() < 1e-12);
        assert!((t15.constant - 2.0).abs() < 1e-12);
        assert_eq!(r.route(RouteId::T13).unwrap().verdict, Verdict::HypothesisFailed);
    }

    #[test]
    fn critical_dimension_fails_index_hypothesis() {
        let w = WeightProfile::hardy(2.0, 2, f64::INFINITY).unwrap();
        let r = admissibility_report(&w, &pow(2.0), &pow(2.0), &ReportOptions::default()).unwrap();
        let t13 = r.route(RouteId::T13).unwrap();
        assert_eq!(t13.verdict, Verdict::HypothesisFailed);
        assert_eq!(t13.hypotheses.get("p-index-below-n").unwrap().status, Status::Fails);
    }

    #[test]
    fn route_norms_scale_linearly() {
        let w = WeightProfile::hardy(2.0, 4, f64::INFINITY).unwrap();
        let a = admissibility_report(&w, &pow(2.0), &pow(2.0), &ReportOptions::default()).unwrap();
        let b = admissibility_report(&w.scaled(3.0), &pow(2.0), &pow(2.0), &ReportOptions::default()).unwrap();
        for id in [RouteId::T13, RouteId::T14] {
            let (x, y) = (a.route(id).unwrap().norm.value, b.route(id).unwrap().norm.value);
            assert!((y / x - 3.0).abs() < 1e-6, "{id:?}: {x} {y}");
        }
    }
}
