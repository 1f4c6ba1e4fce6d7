//! Acceptance suite: one pass/fail line per criterion.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use orlicz_lab::admit::{admissibility_report, capacity_ball, capacity_criterion, muckenhoupt_sup_same, HardyPair, MuckenhouptGrid, ReportOptions};
use orlicz_lab::conjugate::bundle;
use orlicz_lab::eigen::{minimize_lambda1, EigenOptions};
use orlicz_lab::norms::norm_phi_infty;
use orlicz_lab::numeric::grid::logspace;
use orlicz_lab::numeric::integrate;
use orlicz_lab::rearrange::omega;
use orlicz_lab::regress::run_examples;
use orlicz_lab::verify::{run_family, Family};
use orlicz_lab::young::growth::{p_index, CERT_GRID};
use orlicz_lab::young::{Table, TABLE_HI, TABLE_LO, TABLE_PER_DECADE};
use orlicz_lab::{WeightProfile, YoungFunction};
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

fn families() -> Vec<(&'static str, YoungFunction)> {
    let sp = YoungFunction::sum_power(1.5, 3.0).unwrap();
    let table = Table::sample("table:sumpow(1.5,3)", |t| sp.derivative(t), TABLE_LO, TABLE_HI, TABLE_PER_DECADE).unwrap();
    vec![
        ("pow(2.5)", YoungFunction::power(2.5).unwrap()),
        ("sumpow(2,3)", YoungFunction::sum_power(2.0, 3.0).unwrap()),
        ("maxpow(2,3)", YoungFunction::max_power(2.0, 3.0).unwrap()),
        ("powlog(2)", YoungFunction::power_log(2.0).unwrap()),
        ("table", YoungFunction::tabulated(table)),
    ]
}

fn young_calculus() -> Outcome {
    let start = Instant::now();
    let n = 1_000_000;
    let grid = logspace(1e-4, 1e4, n);
    let tol = 1e-6;
    let mut worst = Vec::new();
    for (name, f) in families() {
        let c = f.complement().map_err(|e| e.to_string())?;
        let cc = c.complement().map_err(|e| e.to_string())?;
        let bad = grid
            .par_iter()
            .enumerate()
            .map(|(i, &t)| {
                let s = grid[n - 1 - i];
                let young = s * t <= (f.eval(s) + c.eval(t)) * (1.0 + tol);
                let inv = (cc.eval(t) / f.eval(t) - 1.0).abs() <= tol;
                let prod = f.inv(t) * c.inv(t);
                let sandwich = prod >= t * (1.0 - tol) && prod <= 2.0 * t * (1.0 + tol);
                let tp = t * f.derivative(t);
                let density = f.eval(t) <= tp * (1.0 + tol) && tp <= f.eval(2.0 * t) * (1.0 + tol);
                [young, inv, sandwich, density].map(|ok| usize::from(!ok))
            })
            .reduce(|| [0; 4], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]);
        if bad.iter().any(|&b| b > 0) {
            worst.push(format!("{name}: failures young={} involution={} sandwich={} density={}", bad[0], bad[1], bad[2], bad[3]));
        }
    }
    let el = start.elapsed();
    let detail = format!("5 families x {n} points in {:.2}s", el.as_secs_f64());
    if worst.is_empty() && within(el, 10.0) {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", worst.join("; ")))
    }
}

fn p_index_of_powers() -> Outcome {
    let mut out = Vec::new();
    let mut ok = true;
    for p in [1.5, 2.0, 3.0] {
        let v = p_index(&YoungFunction::power(p).unwrap(), CERT_GRID);
        ok &= (v - p).abs() <= 1e-6;
        out.push(format!("p={p}: {v}"));
    }
    check(ok, out.join(", "))
}

fn conjugate_slopes() -> Outcome {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut ok = true;
    for (p, n) in [(2.0, 3.0), (2.0, 4.0), (3.0, 4.0)] {
        let b = bundle(&YoungFunction::power(p).unwrap(), n).map_err(|e| e.to_string())?;
        let targets = [n * p / (n - p), n / (n - p), n / p];
        let got = [b.slopes.phi_n, b.slopes.b_phi, b.slopes.b_tilde];
        let err = got.iter().zip(&targets).map(|(g, t)| (g / t - 1.0).abs()).fold(0.0, f64::max);
        ok &= err <= 1e-2;
        out.push(format!("(p={p},N={n}) max rel err {err:.2e}"));
    }
    let el = start.elapsed();
    check(ok && within(el, 30.0), format!("{} in {:.2}s", out.join(", "), el.as_secs_f64()))
}

fn regression_rows(prefixes: &[&str]) -> Outcome {
    let rows: Vec<_> = run_examples().into_iter().filter(|r| prefixes.iter().any(|p| r.id.starts_with(p))).collect();
    let failed: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| format!("{} measured {} target {}", r.id, r.measured, r.target)).collect();
    check(!rows.is_empty() && failed.is_empty(), if failed.is_empty() { format!("{} rows pass", rows.len()) } else { failed.join("; ") })
}

/// `sup_s g**(s) / s^{-p/N}` with `g**` integrated directly from `g*(s) = (omega_N / s)^{p/N}`.
fn hardy_oracle(p: f64, n: u32) -> f64 {
    let nf = n as f64;
    logspace(1e-3, 1e3, 7)
        .iter()
        .map(|&s| {
            // Substituting sigma = s x^{N/(N-p)} removes the endpoint singularity.
            let k = nf / (nf - p);
            let gss = integrate(|x| (omega(n) / (s * x.powf(k))).powf(p / nf) * k * x.powf(k - 1.0), 0.0, 1.0, &[]).value;
            gss / s.powf(-p / nf)
        })
        .fold(0.0, f64::max)
}

fn hardy_norm() -> Outcome {
    let mut out = Vec::new();
    let mut ok = true;
    for (p, n) in [(2.0, 3u32), (2.0, 4), (3.0, 4)] {
        let w = WeightProfile::hardy(p, n, f64::INFINITY).unwrap();
        let v = norm_phi_infty(&w, &YoungFunction::power(p).unwrap()).value;
        let nf = n as f64;
        let closed = nf / (nf - p) * omega(n).powf(p / nf);
        let oracle = hardy_oracle(p, n);
        let err = (v / oracle - 1.0).abs().max((v / closed - 1.0).abs());
        ok &= err <= 1e-4;
        out.push(format!("(p={p},N={n}) {v:.8} rel err {err:.1e}"));
    }
    check(ok, out.join(", "))
}

/// Minimize `sum m_k Phi(s_k)` over shell slopes with `sum s_k h_k = 1`.
fn shell_capacity(phi: &YoungFunction, n: u32, a: f64, r: f64, shells: usize) -> f64 {
    let h = (r - a) / shells as f64;
    let vol: Vec<f64> = (0..shells).map(|k| omega(n) * ((a + h * (k + 1) as f64).powi(n as i32) - (a + h * k as f64).powi(n as i32))).collect();
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

fn capacity() -> Outcome {
    let phi = YoungFunction::power(2.0).unwrap();
    let mut out = Vec::new();
    let mut ok = true;
    for a in [0.2, 0.5] {
        let c = capacity_ball(&phi, 3, a, 1.0).map_err(|e| e.to_string())?.value;
        let exact = 4.0 * PI / (1.0 / a - 1.0);
        let shell = shell_capacity(&phi, 3, a, 1.0, 4000);
        let (e1, e2) = ((c / exact - 1.0).abs(), (c / shell - 1.0).abs());
        ok &= e1 <= 5e-3 && e2 <= 5e-3;
        out.push(format!("a={a}: closed-form err {e1:.1e}, shell err {e2:.1e}"));
    }
    let caps: Vec<f64> = logspace(0.05, 0.95, 12).iter().map(|&a| capacity_ball(&phi, 3, a, 1.0).unwrap().value).collect();
    let mono = caps.windows(2).all(|w| w[1] > w[0]);
    ok &= mono;
    out.push(format!("monotone in a: {mono}"));
    check(ok, out.join(", "))
}

fn capacity_sandwich() -> Outcome {
    let phi = YoungFunction::power(2.0).unwrap();
    let w = WeightProfile::constant(1.0, omega(3), 3, omega(3)).unwrap();
    let c = run_family(&w, &phi, &phi, Family::Cones).map_err(|e| e.to_string())?.empirical_constant;
    let d = capacity_criterion(&w, &phi, &phi, 1.0, &logspace(0.01, 0.99, 60)).map_err(|e| e.to_string())?.value;
    let bound = c.max(c.powf(p_index(&phi, CERT_GRID)));
    check(d <= bound, format!("D = {d:.6} <= max(C, C^P) = {bound:.6} with C = {c:.6}"))
}

fn muckenhoupt() -> Outcome {
    let (p, n) = (2.0, 4u32);
    let phi = YoungFunction::power(p).unwrap();
    let pair = |a: f64| HardyPair::from_weight(&WeightProfile::hardy(a, n, f64::INFINITY).unwrap(), &phi);
    let coarse = MuckenhouptGrid::default();
    let fine = MuckenhouptGrid { per_decade: 2 * coarse.per_decade, ..coarse };
    let b = muckenhoupt_sup_same(&phi, &pair(p), coarse);
    let b2 = muckenhoupt_sup_same(&phi, &pair(p), fine);
    let again = muckenhoupt_sup_same(&phi, &pair(p), coarse);
    let steep = muckenhoupt_sup_same(&phi, &pair(p + 0.5), coarse);
    let steep2 = muckenhoupt_sup_same(&phi, &pair(p + 0.5), fine);
    let refine = (b2.value / b.value - 1.0).abs();
    let ok = !b.divergent && b.value.is_finite() && steep.divergent && steep2.divergent && !b2.divergent && refine < 5e-3 && again == b;
    check(ok, format!("B = {:.6} (doubled grid {:.6}, rel change {refine:.1e}); a = {}: divergent = {}", b.value, b2.value, p + 0.5, steep.divergent))
}

fn harness_consistency() -> Outcome {
    let pow = |p: f64| YoungFunction::power(p).unwrap();
    let hardy = |a: f64, n: u32| WeightProfile::hardy(a, n, f64::INFINITY).unwrap();
    let admissible = [
        (hardy(2.0, 4), pow(2.0), pow(2.0)),
        (hardy(2.0, 3), pow(2.0), pow(2.0)),
        (hardy(1.0, 4), pow(2.0), pow(3.0)),
        (hardy(3.0, 5), pow(3.0), pow(3.0)),
    ];
    let mut out = Vec::new();
    let mut ok = true;
    for (w, phi, psi) in &admissible {
        let report = admissibility_report(w, phi, psi, &ReportOptions::default()).map_err(|e| e.to_string())?;
        let slope = run_family(w, phi, psi, Family::Dilate).map_err(|e| e.to_string())?.dilation_slope.unwrap_or(f64::NAN);
        let adm = report.any_admissible();
        ok &= adm && slope.abs() <= 0.02;
        out.push(format!("{} N={} {}/{}: admissible={adm} slope={slope:.2e}", w.spec(), w.dim(), phi.spec(), psi.spec()));
    }
    let (p, a) = (2.0, 3.0);
    let steep = hardy(a, 4);
    let report = admissibility_report(&steep, &pow(p), &pow(p), &ReportOptions::default()).map_err(|e| e.to_string())?;
    let slope = run_family(&steep, &pow(p), &pow(p), Family::Dilate).map_err(|e| e.to_string())?.dilation_slope.unwrap_or(f64::NAN);
    let target = (p - a) / p;
    ok &= !report.any_admissible() && (slope - target).abs() <= 0.05;
    out.push(format!("{} N=4 {}: admissible={} slope={slope:.4} (target {target})", steep.spec(), pow(p).spec(), report.any_admissible()));
    check(ok, out.join("; "))
}

fn eigen() -> Outcome {
    let start = Instant::now();
    let w = WeightProfile::constant(1.0, omega(3), 3, omega(3)).unwrap();
    let pow = |p: f64| YoungFunction::power(p).unwrap();
    let opts = EigenOptions { nodes: 2000, ..Default::default() };
    let e = minimize_lambda1(&pow(2.0), &pow(2.0), &w, 1.0, 1.0, opts).map_err(|e| e.to_string())?;
    let pi_err = (e.lambda_tilde / (PI * PI) - 1.0).abs();
    let mut ok = pi_err <= 5e-3;
    let mut worst_c: f64 = (e.constraint - 1.0).abs();
    let mut nonneg = e.profile.values().iter().all(|&v| v >= 0.0);
    let mut worst_h: f64 = 0.0;
    let mut worst_m: f64 = 0.0;
    for q in [2.0, 3.0] {
        let one = minimize_lambda1(&pow(2.0), &pow(q), &w, 1.0, 1.0, opts).map_err(|e| e.to_string())?;
        for r in [0.5, 2.0] {
            let er = minimize_lambda1(&pow(2.0), &pow(q), &w, 1.0, r, opts).map_err(|e| e.to_string())?;
            worst_h = worst_h.max((er.lambda1 / (r.powf(2.0 / q) * one.lambda1) - 1.0).abs());
            worst_m = worst_m.max((er.lambda1 / (q * r / 2.0 * er.lambda_tilde) - 1.0).abs());
            worst_c = worst_c.max((er.constraint / r - 1.0).abs());
            nonneg &= er.profile.values().iter().all(|&v| v >= 0.0);
        }
    }
    let el = start.elapsed();
    ok &= worst_h <= 1e-2 && worst_m <= 1e-2 && worst_c <= 1e-8 && nonneg && within(el, 60.0);
    check(
        ok,
        format!(
            "lambda~ = {:.6} (pi^2 rel err {pi_err:.1e}), homogeneity err {worst_h:.1e}, multiplier err {worst_m:.1e}, constraint err {worst_c:.1e}, nonnegative {nonneg}, {:.2}s",
            e.lambda_tilde,
            el.as_secs_f64()
        ),
    )
}

fn examples() -> Outcome {
    let start = Instant::now();
    let rows = run_examples();
    let el = start.elapsed();
    let failed: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.id.as_str()).collect();
    check(failed.is_empty() && within(el, 300.0), format!("{} rows, {} failed {:?}, {:.2}s", rows.len(), failed.len(), failed, el.as_secs_f64()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("young calculus on a 1e6-point grid", young_calculus),
        ("p-index of powers", p_index_of_powers),
        ("Sobolev conjugate exponents", conjugate_slopes),
        ("eta_Phi scaling regressions", || regression_rows(&["g-phi-", "eta-phi-slope", "eta-phi-critical", "eta-phi-finite", "x-phi-l1"])),
        ("eta_(Phi,Psi) scaling and (H4) threshold", || regression_rows(&["eta-phi-psi-", "h4-threshold"])),
        ("Hardy weight weak-Orlicz norm", hardy_norm),
        ("radial capacity", capacity),
        ("capacity criterion sandwich", capacity_sandwich),
        ("Muckenhoupt checker", muckenhoupt),
        ("harness consistency", harness_consistency),
        ("radial eigenvalue", eigen),
        ("examples regression table", examples),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name} [{secs:.2}s]: {d}", i + 1),
            Err(d) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} [{secs:.2}s]: {d}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
