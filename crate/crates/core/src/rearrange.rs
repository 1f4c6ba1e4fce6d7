//! Weights, decreasing rearrangements and maximal functions.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{domain, Error, Result};
use crate::numeric::{integrate, quad::integrate_linear};
use crate::profile::{RadialDistribution, RadialProfile, RadialRule};
use crate::young::YoungFunction;

/// Volume of the unit ball in `R^n`.
pub fn omega(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * omega(n - 2),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightForm {
    /// `coef |x|^{-a}`.
    RadialPower { coef: f64, a: f64 },
    /// `c` on a set of measure `m` (a centred ball when a radial form is needed).
    Constant { c: f64, m: f64 },
    /// Step function given by `(value, measure)` pairs, sorted by decreasing value.
    Sampled { values: Vec<f64>, measures: Vec<f64>, cum: Vec<f64> },
    /// Radial table `g(rho)`, piecewise linear, zero beyond the last radius.
    RadialTable { rho: Vec<f64>, g: Vec<f64> },
}

/// A nonnegative weight on a domain of measure `omega` in `R^dim`.
///
/// Radial forms live on the centred ball of measure `omega` (all of `R^N`
/// when `omega` is infinite).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightProfile {
    form: WeightForm,
    dim: u32,
    omega: f64,
    label: String,
}

fn check_domain(dim: u32, omega_measure: f64) -> Result<()> {
    if dim < 1 {
        return Err(domain("dimension must be at least 1"));
    }
    if !(omega_measure > 0.0) {
        return Err(domain("domain measure must be positive (or infinite)"));
    }
    Ok(())
}

impl WeightProfile {
    pub fn radial_power(coef: f64, a: f64, dim: u32, omega_measure: f64) -> Result<Self> {
        check_domain(dim, omega_measure)?;
        if !(a >= 0.0) || !(coef >= 0.0) || !coef.is_finite() {
            return Err(domain("radial power needs a >= 0 and a finite coefficient c >= 0"));
        }
        let label = if coef == 1.0 { format!("hardy:a={a}") } else { format!("hardy:a={a},c={coef}") };
        Ok(WeightProfile { form: WeightForm::RadialPower { coef, a }, dim, omega: omega_measure, label })
    }

    /// `|x|^{-a}`.
    pub fn hardy(a: f64, dim: u32, omega_measure: f64) -> Result<Self> {
        Self::radial_power(1.0, a, dim, omega_measure)
    }

    pub fn constant(c: f64, m: f64, dim: u32, omega_measure: f64) -> Result<Self> {
        check_domain(dim, omega_measure)?;
        if !(c >= 0.0) || !c.is_finite() {
            return Err(domain("constant weight needs a finite c >= 0"));
        }
        if !(m > 0.0) || !m.is_finite() || m > omega_measure * (1.0 + 1e-12) {
            return Err(domain(format!("constant weight measure m={m} must be positive, finite and at most |Omega|")));
        }
        let m = m.min(omega_measure);
        Ok(WeightProfile { form: WeightForm::Constant { c, m }, dim, omega: omega_measure, label: format!("const:c={c},m={m}") })
    }

    pub fn indicator(m: f64, dim: u32, omega_measure: f64) -> Result<Self> {
        let mut w = Self::constant(1.0, m, dim, omega_measure)?;
        w.label = format!("indicator:m={m}");
        Ok(w)
    }

    pub fn sampled(label: impl Into<String>, pairs: &[(f64, f64)], dim: u32, omega_measure: f64) -> Result<Self> {
        check_domain(dim, omega_measure)?;
        if pairs.is_empty() {
            return Err(domain("sampled weight needs at least one (value, measure) pair"));
        }
        let mut p: Vec<(f64, f64)> = pairs.to_vec();
        for &(v, m) in &p {
            if !(v >= 0.0) || !v.is_finite() || !(m >= 0.0) || !m.is_finite() {
                return Err(domain("sampled weight values and measures must be finite and nonnegative"));
            }
        }
        p.sort_by(|a, b| b.0.total_cmp(&a.0));
        let values: Vec<f64> = p.iter().map(|x| x.0).collect();
        let measures: Vec<f64> = p.iter().map(|x| x.1).collect();
        let mut cum = Vec::with_capacity(p.len());
        let mut acc = 0.0;
        for m in &measures {
            acc += m;
            cum.push(acc);
        }
        if acc > omega_measure * (1.0 + 1e-12) {
            return Err(domain("sampled measures exceed |Omega|"));
        }
        Ok(WeightProfile { form: WeightForm::Sampled { values, measures, cum }, dim, omega: omega_measure, label: label.into() })
    }

    pub fn radial_table(label: impl Into<String>, rho: Vec<f64>, g: Vec<f64>, dim: u32, omega_measure: f64) -> Result<Self> {
        check_domain(dim, omega_measure)?;
        if rho.len() < 2 || rho.len() != g.len() {
            return Err(domain("radial table needs at least two (rho, g) rows"));
        }
        if rho[0] != 0.0 || rho.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain("radial table radii must start at 0 and increase"));
        }
        if g.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(domain("radial table values must be finite and nonnegative"));
        }
        let r = *rho.last().unwrap();
        if omega(dim) * r.powi(dim as i32) > omega_measure * (1.0 + 1e-9) {
            return Err(domain("radial table extends beyond the domain"));
        }
        Ok(WeightProfile { form: WeightForm::RadialTable { rho, g }, dim, omega: omega_measure, label: label.into() })
    }

    /// Read `value,measure` rows.
    pub fn sampled_from_csv(path: &Path, dim: u32, omega_measure: f64) -> Result<Self> {
        let rows = read_pairs(path)?;
        Self::sampled(format!("sample:{}", path.display()), &rows, dim, omega_measure)
    }

    /// Read `rho,g` rows.
    pub fn radial_from_csv(path: &Path, dim: u32, omega_measure: f64) -> Result<Self> {
        let rows = read_pairs(path)?;
        let (rho, g) = rows.into_iter().unzip();
        Self::radial_table(format!("radial:{}", path.display()), rho, g, dim, omega_measure)
    }

    pub fn form(&self) -> &WeightForm {
        &self.form
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// `|Omega|`, possibly infinite.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn spec(&self) -> &str {
        &self.label
    }

    /// Radius of the centred ball of measure `|Omega|`.
    pub fn domain_radius(&self) -> f64 {
        (self.omega / omega(self.dim)).powf(1.0 / self.dim as f64)
    }

    /// `c g`.
    pub fn scaled(&self, c: f64) -> WeightProfile {
        let form = match &self.form {
            WeightForm::RadialPower { coef, a } => WeightForm::RadialPower { coef: coef * c, a: *a },
            WeightForm::Constant { c: v, m } => WeightForm::Constant { c: v * c, m: *m },
            WeightForm::Sampled { values, measures, cum } => WeightForm::Sampled {
                values: values.iter().map(|v| v * c).collect(),
                measures: measures.clone(),
                cum: cum.clone(),
            },
            WeightForm::RadialTable { rho, g } => WeightForm::RadialTable { rho: rho.clone(), g: g.iter().map(|v| v * c).collect() },
        };
        WeightProfile { form, dim: self.dim, omega: self.omega, label: format!("{}*{c}", self.label) }
    }

    pub fn is_radial(&self) -> bool {
        !matches!(self.form, WeightForm::Sampled { .. })
    }

    /// `g` at radius `rho` for radial forms.
    pub fn radial_value(&self, r: f64) -> Option<f64> {
        let rd = self.domain_radius();
        match &self.form {
            WeightForm::RadialPower { coef, a } => Some(if r > rd {
                0.0
            } else if *a == 0.0 {
                *coef
            } else {
                coef * r.powf(-a)
            }),
            WeightForm::Constant { c, m } => Some(if omega(self.dim) * r.powi(self.dim as i32) < *m { *c } else { 0.0 }),
            WeightForm::RadialTable { rho, g } => {
                let last = *rho.last().unwrap();
                if r >= last {
                    return Some(0.0);
                }
                let k = rho.partition_point(|&x| x <= r).saturating_sub(1).min(rho.len() - 2);
                let t = (r - rho[k]) / (rho[k + 1] - rho[k]);
                Some(g[k] + t * (g[k + 1] - g[k]))
            }
            WeightForm::Sampled { .. } => None,
        }
    }

    /// Radii where the radial form has kinks or jumps.
    pub fn radial_breaks(&self) -> Vec<f64> {
        match &self.form {
            WeightForm::RadialPower { .. } if self.omega.is_finite() => vec![self.domain_radius()],
            WeightForm::Constant { m, .. } => vec![(m / omega(self.dim)).powf(1.0 / self.dim as f64)],
            WeightForm::RadialTable { rho, .. } => rho.clone(),
            _ => vec![],
        }
    }

    /// `int_{B_r} g`; for sampled weights, the symmetrized value `int_0^{|B_r|} g*`.
    pub fn ball_mass(&self, r: f64) -> f64 {
        let n = self.dim as f64;
        let w = omega(self.dim);
        match &self.form {
            WeightForm::RadialPower { coef, a } => {
                if *coef == 0.0 {
                    return 0.0;
                }
                if *a >= n {
                    return f64::INFINITY;
                }
                let r = r.min(self.domain_radius());
                coef * n * w * r.powf(n - a) / (n - a)
            }
            WeightForm::Constant { c, m } => c * (w * r.powi(self.dim as i32)).min(*m),
            WeightForm::RadialTable { rho, .. } => {
                let top = r.min(*rho.last().unwrap());
                n * w * integrate_linear(|s| self.radial_value(s).unwrap_or(0.0) * s.powf(n - 1.0), 0.0, top, rho)
            }
            WeightForm::Sampled { .. } => {
                let t = w * r.powi(self.dim as i32);
                t * self.maximal(t)
            }
        }
    }

    /// Distribution function `|{ g > s }|`.
    pub fn distribution(&self, s: f64) -> f64 {
        let n = self.dim as f64;
        match &self.form {
            WeightForm::RadialPower { coef, a } => {
                if *a == 0.0 || s <= 0.0 {
                    return if *coef > s { self.omega } else { 0.0 };
                }
                (omega(self.dim) * (coef / s).powf(n / a)).min(self.omega)
            }
            WeightForm::Constant { c, m } => {
                if *c > s {
                    *m
                } else {
                    0.0
                }
            }
            WeightForm::Sampled { values, measures, .. } => values.iter().zip(measures).filter(|(v, _)| **v > s).map(|(_, m)| m).sum(),
            WeightForm::RadialTable { rho, g } => RadialDistribution { rho, v: g, dim: self.dim }.measure(s),
        }
    }

    /// Right-continuous decreasing rearrangement `g*(t)`.
    pub fn decreasing(&self, t: f64) -> f64 {
        if t >= self.omega {
            return 0.0;
        }
        let n = self.dim as f64;
        match &self.form {
            WeightForm::RadialPower { coef, a } => {
                if *a == 0.0 {
                    *coef
                } else {
                    coef * (omega(self.dim) / t).powf(a / n)
                }
            }
            WeightForm::Constant { c, m } => {
                if t < *m {
                    *c
                } else {
                    0.0
                }
            }
            WeightForm::Sampled { values, cum, .. } => {
                let k = cum.partition_point(|&c| c <= t);
                values.get(k).copied().unwrap_or(0.0)
            }
            WeightForm::RadialTable { rho, g } => RadialDistribution { rho, v: g, dim: self.dim }.rearranged(t),
        }
    }

    /// Points in `t` where `g*` has jumps or kinks.
    pub fn star_breaks(&self) -> Vec<f64> {
        match &self.form {
            WeightForm::RadialPower { .. } if self.omega.is_finite() => vec![self.omega],
            WeightForm::Constant { m, .. } => vec![*m],
            WeightForm::Sampled { cum, .. } => cum.clone(),
            WeightForm::RadialTable { rho, g } => {
                let d = RadialDistribution { rho, v: g, dim: self.dim };
                d.value_breaks().iter().map(|&s| d.measure(s)).collect()
            }
            _ => vec![],
        }
    }

    /// Maximal function `g**(t) = (1/t) int_0^t g*`.
    pub fn maximal(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return f64::INFINITY;
        }
        let n = self.dim as f64;
        match &self.form {
            WeightForm::Constant { c, m } => c * t.min(*m) / t,
            WeightForm::Sampled { values, measures, .. } => {
                let mut acc = 0.0;
                let mut used = 0.0;
                for (v, m) in values.iter().zip(measures) {
                    let take = m.min(t - used);
                    if take <= 0.0 {
                        break;
                    }
                    acc += v * take;
                    used += take;
                }
                acc / t
            }
            WeightForm::RadialPower { coef, a } => {
                if *coef == 0.0 {
                    return 0.0;
                }
                if *a >= n {
                    return f64::INFINITY;
                }
                let top = t.min(self.omega);
                integrate(|s| self.decreasing(s), 0.0, top, &[]).value / t
            }
            WeightForm::RadialTable { rho, g } => {
                let d = RadialDistribution { rho, v: g, dim: self.dim };
                let top = d.max_value();
                integrate_linear(|s| d.measure(s).min(t), 0.0, top, &d.value_breaks()) / t
            }
        }
    }

    /// `int g` over the domain.
    pub fn l1_norm(&self) -> f64 {
        match &self.form {
            WeightForm::Constant { c, m } => c * m,
            WeightForm::Sampled { values, measures, .. } => values.iter().zip(measures).map(|(v, m)| v * m).sum(),
            WeightForm::RadialPower { coef, .. } => {
                if *coef == 0.0 {
                    0.0
                } else if self.omega.is_infinite() {
                    f64::INFINITY
                } else {
                    self.omega * self.maximal(self.omega)
                }
            }
            WeightForm::RadialTable { rho, .. } => self.ball_mass(*rho.last().unwrap()),
        }
    }

    /// Singular exponent at the origin (`a` for `|x|^{-a}`), 0 otherwise.
    pub fn singular_exponent(&self) -> f64 {
        match &self.form {
            WeightForm::RadialPower { a, .. } => *a,
            _ => 0.0,
        }
    }
}

fn read_pairs(path: &Path) -> Result<Vec<(f64, f64)>> {
    let err = |message: String| Error::Table { path: path.into(), message };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| err(e.to_string()))?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| err(e.to_string()))?;
        if rec.len() < 2 {
            return Err(err(format!("row {i} has fewer than two columns")));
        }
        match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
            (Ok(a), Ok(b)) => rows.push((a, b)),
            _ if i == 0 => continue,
            _ => return Err(err(format!("row {i} is not numeric"))),
        }
    }
    Ok(rows)
}

/// Both sides of the Hardy–Littlewood inequality
/// `int g Phi(|u|) <= int_0^inf g*(t) Phi(u*(t)) dt`.
pub fn hardy_littlewood_bound(w: &WeightProfile, f: &YoungFunction, u: &RadialProfile) -> Result<(f64, f64)> {
    if w.dim() != u.dim() {
        return Err(domain("weight and profile dimensions differ"));
    }
    let rule = RadialRule::new(w, u.rho())?;
    let lhs = if rule.head_infinite && u.values()[0] > 0.0 {
        f64::INFINITY
    } else {
        rule.apply(u.values(), |v| f.eval(v))
    };
    let d = u.distribution();
    let top = u.support_measure().min(w.omega());
    let mut breaks = w.star_breaks();
    breaks.extend(d.value_breaks().iter().map(|&s| d.measure(s)));
    let rhs = integrate(|t| w.decreasing(t) * f.eval(d.rearranged(t)), 0.0, top, &breaks).value;
    Ok((lhs, rhs))
}

/// Symmetrized and raw gradient modulars `(int Phi(|grad u*|), int Phi(|grad u|))`.
///
/// The symmetrized side is `int_0^{|Omega|} Phi(N omega_N^{1/N} r^{1-1/N} (-du*/dr)) dr`,
/// evaluated through the level-set substitution `r = mu(s)`.
pub fn polya_szego_pair(f: &YoungFunction, u: &RadialProfile) -> (f64, f64) {
    let n = u.dim() as f64;
    let k = n * omega(u.dim()).powf(1.0 / n);
    let d = u.distribution();
    let sym = integrate_linear(
        |s| {
            let (mu, dmu) = d.measure_and_slope(s);
            let dm = dmu.abs();
            if dm == 0.0 || mu == 0.0 {
                0.0
            } else {
                f.eval(k * mu.powf(1.0 - 1.0 / n) / dm) * dm
            }
        },
        0.0,
        d.max_value(),
        &d.value_breaks(),
    );
    (sym, u.gradient_modular(f))
}
