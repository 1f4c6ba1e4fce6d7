//! Subcommand bodies. Each returns a JSON value and the CSV rendering; main picks one.

use anyhow::Context;
use orlicz_lab::admit::{admissibility_report, AdmissibilityReport, CapacityOptions, ReportOptions, RouteId, Verdict};
use orlicz_lab::conjugate::bundle;
use orlicz_lab::eigen::{minimize_lambda1, EigenResult, Init};
use orlicz_lab::norms::{self, NormReport};
use orlicz_lab::numeric::grid::logspace;
use orlicz_lab::rearrange::omega;
use orlicz_lab::spec::{parse_measure, parse_weight, parse_young};
use orlicz_lab::verify::{run_family, Family, HarnessResult};
use orlicz_lab::{Error, WeightProfile, YoungFunction};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;
use crate::input_error;

pub struct Output {
    pub json: Value,
    pub csv: Vec<u8>,
    pub status: u8,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    result: T,
}

fn envelope<T: Serialize>(command: &'static str, cfg: &RunConfig, result: T) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(Envelope { command, version: env!("CARGO_PKG_VERSION"), config: cfg, result })?)
}

fn csv_bytes<R: Serialize>(rows: impl IntoIterator<Item = R>) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(w.into_inner()?)
}

struct Inputs {
    phi: YoungFunction,
    psi: YoungFunction,
    weight: WeightProfile,
}

fn young(spec: &str) -> anyhow::Result<YoungFunction> {
    parse_young(spec).map_err(input_error)
}

fn measure(cfg: &RunConfig) -> anyhow::Result<f64> {
    parse_measure(&cfg.omega).map_err(input_error)
}

fn inputs(cfg: &RunConfig, omega_measure: f64) -> anyhow::Result<Inputs> {
    Ok(Inputs {
        phi: young(&cfg.phi)?,
        psi: young(cfg.psi_spec())?,
        weight: parse_weight(&cfg.weight, cfg.dim, omega_measure).map_err(input_error)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum NormChoice {
    Luxemburg,
    PhiInfty,
    XPhi,
    XPhiPsi,
    L1,
    OrliczBphi,
}

impl NormChoice {
    const ALL: [NormChoice; 6] =
        [NormChoice::Luxemburg, NormChoice::PhiInfty, NormChoice::XPhi, NormChoice::XPhiPsi, NormChoice::L1, NormChoice::OrliczBphi];

    fn compute(self, i: &Inputs) -> orlicz_lab::Result<NormReport> {
        match self {
            NormChoice::Luxemburg => Ok(norms::norm_luxemburg(&i.weight, &i.psi)),
            NormChoice::PhiInfty => Ok(norms::norm_phi_infty(&i.weight, &i.phi)),
            NormChoice::XPhi => norms::norm_x_phi(&i.weight, &i.phi),
            NormChoice::XPhiPsi => norms::norm_x_phi_psi(&i.weight, &i.phi, &i.psi),
            NormChoice::L1 => Ok(norms::norm_l1(&i.weight)),
            NormChoice::OrliczBphi => norms::norm_orlicz_bphi(&i.weight, &i.phi),
        }
    }
}

#[derive(Serialize)]
struct ConjugateSample {
    t: f64,
    phi_n: f64,
    b_phi: f64,
    b_tilde: f64,
}

#[derive(Serialize)]
struct PowerTargets {
    phi_n: f64,
    b_phi: f64,
    b_tilde: f64,
}

#[derive(Serialize)]
struct ConjugateOut {
    phi: String,
    dim: u32,
    n_prime: f64,
    b_phi_convex: bool,
    slopes: orlicz_lab::conjugate::AsymptoticSlopes,
    #[serde(skip_serializing_if = "Option::is_none")]
    power_targets: Option<PowerTargets>,
    samples: Vec<ConjugateSample>,
}

pub fn conjugate(cfg: &RunConfig) -> anyhow::Result<Output> {
    let phi = young(&cfg.phi)?;
    let n = cfg.dim as f64;
    let b = bundle(&phi, n)?;
    let c = &cfg.conjugate;
    let samples: Vec<ConjugateSample> = logspace(c.t_min, c.t_max, c.points)
        .into_iter()
        .map(|t| ConjugateSample { t, phi_n: b.phi_n.eval(t), b_phi: b.b_phi.eval(t), b_tilde: b.b_tilde.eval(t) })
        .collect();
    let power_targets = phi.power_exponent().filter(|&p| p < n).map(|p| PowerTargets {
        phi_n: n * p / (n - p),
        b_phi: n / (n - p),
        b_tilde: n / p,
    });
    let out = ConjugateOut {
        phi: phi.spec(),
        dim: cfg.dim,
        n_prime: b.n_prime,
        b_phi_convex: b.b_phi_convex,
        slopes: b.slopes,
        power_targets,
        samples,
    };
    let csv = csv_bytes(&out.samples)?;
    Ok(Output { json: envelope("conjugate", cfg, &out)?, csv, status: 0 })
}

#[derive(Serialize)]
struct NormRow {
    kind: &'static str,
    value: f64,
    finite: bool,
    sup_arg: Option<f64>,
    note: Option<String>,
}

pub fn norm(cfg: &RunConfig, kinds: &[NormChoice]) -> anyhow::Result<Output> {
    let i = inputs(cfg, measure(cfg)?)?;
    let kinds = if kinds.is_empty() { &NormChoice::ALL[..] } else { kinds };
    let reports: Vec<NormReport> = kinds.par_iter().map(|k| k.compute(&i)).collect::<orlicz_lab::Result<_>>()?;
    let rows = reports.iter().map(|r| NormRow { kind: r.kind.as_str(), value: r.value, finite: r.finite, sup_arg: r.sup_arg, note: r.note.clone() });
    let csv = csv_bytes(rows)?;
    Ok(Output { json: envelope("norm", cfg, &reports)?, csv, status: 0 })
}

fn report(cfg: &RunConfig, i: &Inputs) -> anyhow::Result<AdmissibilityReport> {
    let capacity = if cfg.capacity.enabled {
        let radius = cfg.capacity.radius;
        let a_grid = log_range(&cfg.capacity.a_grid, "a-grid")?;
        if a_grid.last().is_some_and(|&a| a >= radius) {
            return Err(input_error(format!("a-grid `{}` must stay below R = {radius}", cfg.capacity.a_grid)));
        }
        Some(CapacityOptions { radius, a_grid })
    } else {
        None
    };
    let opts = ReportOptions { muckenhoupt: cfg.muckenhoupt_enabled.then_some(cfg.muckenhoupt), capacity };
    Ok(admissibility_report(&i.weight, &i.phi, &i.psi, &opts)?)
}

#[derive(Serialize)]
struct RouteRow {
    route: &'static str,
    verdict: Verdict,
    norm: &'static str,
    norm_value: f64,
    constant: f64,
    constant_expr: &'static str,
}

pub fn check(cfg: &RunConfig) -> anyhow::Result<Output> {
    let i = inputs(cfg, measure(cfg)?)?;
    let rep = report(cfg, &i)?;
    let rows = rep.routes.iter().map(|r| RouteRow {
        route: r.id.as_str(),
        verdict: r.verdict,
        norm: r.norm.kind.as_str(),
        norm_value: r.norm.value,
        constant: r.constant,
        constant_expr: r.constant_expr,
    });
    let csv = csv_bytes(rows)?;
    let status = if rep.hypothesis_blocked() { 2 } else { 0 };
    Ok(Output { json: envelope("check", cfg, &rep)?, csv, status })
}

fn parse_route(s: &str) -> anyhow::Result<RouteId> {
    RouteId::ALL.into_iter().find(|r| r.as_str() == s).ok_or_else(|| input_error(format!("unknown route `{s}` (expected T1.2, T1.3, T1.4, T1.5 or T1.7)")))
}

fn families(spec: &str) -> anyhow::Result<Vec<Family>> {
    if spec == "all" {
        return Ok(Family::ALL.to_vec());
    }
    spec.split(',').map(|s| s.trim().parse::<Family>().map_err(input_error)).collect()
}

#[derive(Serialize)]
struct VerifyOut {
    admissible_routes: Vec<RouteId>,
    compared_route: Option<RouteId>,
    families: Vec<HarnessResult>,
}

#[derive(Serialize)]
struct CaseRow<'a> {
    test_id: &'a str,
    param: f64,
    lhs: f64,
    rhs: f64,
    ratio: f64,
}

pub fn verify(cfg: &RunConfig) -> anyhow::Result<Output> {
    let fams = families(&cfg.verify.family)?;
    let wanted = cfg.verify.route.as_deref().map(parse_route).transpose()?;
    let i = inputs(cfg, measure(cfg)?)?;
    let rep = report(cfg, &i)?;
    let admissible: Vec<RouteId> = rep.routes.iter().filter(|r| r.verdict == Verdict::Admissible).map(|r| r.id).collect();
    let compared = wanted.or_else(|| admissible.first().copied());
    let mut results: Vec<HarnessResult> = fams.par_iter().map(|&f| run_family(&i.weight, &i.phi, &i.psi, f)).collect::<orlicz_lab::Result<_>>()?;
    if let Some(route) = compared.and_then(|id| rep.route(id)) {
        for r in &mut results {
            r.compare(route);
        }
    }
    let rows: Vec<CaseRow> = results
        .iter()
        .flat_map(|r| {
            r.cases.iter().map(|c| CaseRow { test_id: &c.test_id, param: c.param, lhs: c.lhs, rhs: c.rhs, ratio: c.ratio })
        })
        .collect();
    let csv = csv_bytes(rows)?;
    let status = if rep.hypothesis_blocked() { 2 } else { 0 };
    let out = VerifyOut { admissible_routes: admissible, compared_route: compared, families: results };
    Ok(Output { json: envelope("verify", cfg, &out)?, csv, status })
}

/// `x` or a log-spaced sweep `lo:hi:n` of positive values.
fn log_range(spec: &str, what: &str) -> anyhow::Result<Vec<f64>> {
    let parse = |s: &str| -> anyhow::Result<f64> {
        let v: f64 = s.trim().parse().map_err(|_| input_error(format!("invalid {what} `{s}`")))?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(input_error(format!("{what} must be positive and finite, got `{s}`")))
        }
    };
    match spec.split(':').collect::<Vec<_>>()[..] {
        [r] => Ok(vec![parse(r)?]),
        [lo, hi, n] => {
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            let n: usize = n.trim().parse().map_err(|_| input_error(format!("invalid {what} count `{n}`")))?;
            if n == 0 || hi < lo {
                return Err(input_error(format!("{what} sweep `{spec}` needs lo <= hi and n >= 1")));
            }
            Ok(logspace(lo, hi, n))
        }
        _ => Err(input_error(format!("{what} `{spec}` is neither a value nor `lo:hi:n`"))),
    }
}

#[derive(Serialize)]
struct ProfileSamples {
    rho: Vec<f64>,
    u: Vec<f64>,
}

#[derive(Serialize)]
struct LevelOut {
    level: f64,
    radial_lambda1: f64,
    lambda_tilde: f64,
    constraint: f64,
    residual: f64,
    iterations: usize,
    converged: bool,
    /// `lambda1` from the bump-initialized run.
    bump_lambda1: f64,
    bump_converged: bool,
    /// Relative gap between the cone- and bump-initialized minima.
    init_disagreement: f64,
    profile: ProfileSamples,
}

#[derive(Serialize)]
struct EigenOut {
    dim: u32,
    radius: f64,
    admissible_routes: Vec<RouteId>,
    levels: Vec<LevelOut>,
    warnings: Vec<String>,
}

fn solve(i: &Inputs, cfg: &RunConfig, r: f64, init: Init) -> anyhow::Result<EigenResult> {
    match minimize_lambda1(&i.phi, &i.psi, &i.weight, cfg.eigen.radius, r, cfg.eigen.options(init)) {
        Ok(e) => Ok(e),
        Err(Error::EigenNotConverged(e)) => Ok(*e),
        Err(e) => Err(e.into()),
    }
}

fn subsample(e: &EigenResult, k: usize) -> ProfileSamples {
    let (rho, u) = (e.profile.rho(), e.profile.values());
    let idx: Vec<usize> = if k >= rho.len() || k < 2 {
        (0..rho.len()).collect()
    } else {
        (0..k).map(|j| j * (rho.len() - 1) / (k - 1)).collect()
    };
    ProfileSamples { rho: idx.iter().map(|&j| rho[j]).collect(), u: idx.iter().map(|&j| u[j]).collect() }
}

#[derive(Serialize)]
struct ProfileRow {
    level: f64,
    rho: f64,
    u: f64,
}

pub fn eigen(cfg: &RunConfig) -> anyhow::Result<Output> {
    let lv = log_range(&cfg.eigen.level, "level")?;
    let radius = cfg.eigen.radius;
    let ball = omega(cfg.dim) * radius.powi(cfg.dim as i32);
    let i = inputs(cfg, ball)?;
    let mut warnings = Vec::new();
    let rep = report(&RunConfig { muckenhoupt_enabled: false, capacity: crate::config::CapacityConfig { enabled: false, ..cfg.capacity.clone() }, ..cfg.clone() }, &i)?;
    let admissible: Vec<RouteId> = rep.routes.iter().filter(|r| r.verdict == Verdict::Admissible).map(|r| r.id).collect();
    if admissible.is_empty() {
        let msg = "no embedding route is admissible; lambda_1 may be zero".to_string();
        eprintln!("warning: {msg}");
        warnings.push(msg);
    }
    let runs: Vec<(EigenResult, EigenResult)> = lv
        .par_iter()
        .map(|&r| Ok((solve(&i, cfg, r, Init::Cone)?, solve(&i, cfg, r, Init::Bump)?)))
        .collect::<anyhow::Result<_>>()
        .context("eigen solve failed")?;
    let mut all_converged = true;
    let mut out_levels = Vec::with_capacity(runs.len());
    let mut rows = Vec::new();
    for (cone, bump) in &runs {
        all_converged &= cone.converged;
        let gap = (cone.lambda1 - bump.lambda1).abs() / cone.lambda1.abs().max(f64::MIN_POSITIVE);
        if gap > cfg.eigen.init_tol && cone.converged && bump.converged {
            let msg = format!("level {:e}: cone and bump starts disagree (relative gap {gap:.3e})", cone.level);
            eprintln!("warning: {msg}");
            warnings.push(msg);
        }
        if !cone.converged {
            eprintln!("warning: level {:e} did not converge (residual {:.3e}); reporting the best iterate", cone.level, cone.residual);
        }
        let profile = subsample(cone, cfg.eigen.profile_samples);
        rows.extend(profile.rho.iter().zip(&profile.u).map(|(&rho, &u)| ProfileRow { level: cone.level, rho, u }));
        out_levels.push(LevelOut {
            level: cone.level,
            radial_lambda1: cone.lambda1,
            lambda_tilde: cone.lambda_tilde,
            constraint: cone.constraint,
            residual: cone.residual,
            iterations: cone.iterations,
            converged: cone.converged,
            bump_lambda1: bump.lambda1,
            bump_converged: bump.converged,
            init_disagreement: gap,
            profile,
        });
    }
    let csv = csv_bytes(rows)?;
    let out = EigenOut { dim: cfg.dim, radius, admissible_routes: admissible, levels: out_levels, warnings };
    Ok(Output { json: envelope("eigen", cfg, &out)?, csv, status: if all_converged { 0 } else { 3 } })
}

#[derive(Serialize)]
struct ExampleRow<'a> {
    id: &'a str,
    quantity: &'a str,
    measured: f64,
    target: f64,
    tolerance: f64,
    pass: bool,
    error: &'a str,
}

pub fn examples(cfg: &RunConfig) -> anyhow::Result<Output> {
    let rows = orlicz_lab::regress::run_examples();
    let failed = rows.iter().filter(|r| !r.pass).count();
    for r in rows.iter().filter(|r| !r.pass) {
        eprintln!("regression failed: {} measured {:e}, target {:e}", r.id, r.measured, r.target);
    }
    let csv = csv_bytes(rows.iter().map(|r| ExampleRow {
        id: &r.id,
        quantity: &r.quantity,
        measured: r.measured,
        target: r.target,
        tolerance: r.tolerance,
        pass: r.pass,
        error: r.error.as_deref().unwrap_or(""),
    }))?;
    Ok(Output { json: envelope("examples", cfg, &rows)?, csv, status: if failed == 0 { 0 } else { 1 } })
}
