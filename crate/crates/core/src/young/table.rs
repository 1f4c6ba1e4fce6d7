//! Tabulated Young functions.
//!
//! The density `phi` is stored on log-spaced abscissae and interpolated by a
//! monotone cubic in `(ln t, ln phi)`, so pure powers are reproduced exactly.
//! `Phi` is the exact integral of that interpolant. Outside the table the
//! boundary cell's power law is continued and results are marked
//! extrapolated.

use std::path::Path;

use crate::error::{domain, Error, Result};
use crate::numeric::interp::MonotoneCubic;
use crate::numeric::quad::{gauss_legendre, GL8};
use crate::numeric::solve::Tolerance;

/// Default tabulation range and density.
pub const TABLE_LO: f64 = 1e-8;
pub const TABLE_HI: f64 = 1e8;
pub const TABLE_PER_DECADE: usize = 64;

#[derive(Debug, Clone)]
pub struct Table {
    label: String,
    cubic: MonotoneCubic,
    /// `Phi` at the nodes.
    cum: Vec<f64>,
    head_alpha: f64,
    tail_alpha: f64,
}

impl Table {
    /// Build from density samples `(t_i, phi_i)` with `t` strictly increasing
    /// and `phi` positive and nondecreasing.
    pub fn from_density(label: impl Into<String>, t: &[f64], phi: &[f64]) -> Result<Table> {
        if t.len() < 3 || t.len() != phi.len() {
            return Err(domain("a table needs at least three (t, phi) rows"));
        }
        for i in 0..t.len() {
            if !(t[i] > 0.0) || !(phi[i] > 0.0) || !t[i].is_finite() || !phi[i].is_finite() {
                return Err(domain(format!("table row {i}: t and phi must be positive and finite")));
            }
            if i > 0 && !(t[i] > t[i - 1]) {
                return Err(domain(format!("table row {i}: t must increase strictly")));
            }
            if i > 0 && phi[i] < phi[i - 1] {
                return Err(domain(format!("table row {i}: phi must be nondecreasing")));
            }
        }
        let x: Vec<f64> = t.iter().map(|v| v.ln()).collect();
        let y: Vec<f64> = phi.iter().map(|v| v.ln()).collect();
        let n = x.len();
        let head_alpha = (y[1] - y[0]) / (x[1] - x[0]);
        let tail_alpha = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
        let cubic = MonotoneCubic::new(x, y);
        let mut table = Table {
            label: label.into(),
            cubic,
            cum: Vec::with_capacity(n),
            head_alpha,
            tail_alpha,
        };
        let mut c = t[0] * phi[0] / (head_alpha + 1.0);
        table.cum.push(c);
        for k in 0..n - 1 {
            c += table.cell_integral(k, table.cubic.x()[k], table.cubic.x()[k + 1]);
            table.cum.push(c);
        }
        Ok(table)
    }

    /// Sample a density on the log grid `[lo, hi]` with `per_decade` points.
    pub fn sample<F: Fn(f64) -> f64>(label: impl Into<String>, phi: F, lo: f64, hi: f64, per_decade: usize) -> Result<Table> {
        let t = crate::numeric::log_grid(lo, hi, per_decade);
        let v: Vec<f64> = t.iter().map(|&s| phi(s)).collect();
        Table::from_density(label, &t, &v)
    }

    /// Read a CSV of `t,phi` rows. A non-numeric first row is taken as a header.
    pub fn from_csv(path: &Path) -> Result<Table> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(|e| Error::Table { path: path.into(), message: e.to_string() })?;
        let (mut ts, mut ps) = (Vec::new(), Vec::new());
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Table { path: path.into(), message: e.to_string() })?;
            if rec.len() < 2 {
                return Err(Error::Table { path: path.into(), message: format!("row {i} has fewer than two columns") });
            }
            match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
                (Ok(t), Ok(p)) => {
                    ts.push(t);
                    ps.push(p);
                }
                _ if i == 0 => continue,
                _ => return Err(Error::Table { path: path.into(), message: format!("row {i} is not numeric") }),
            }
        }
        Table::from_density(format!("table:{}", path.display()), &ts, &ps)
            .map_err(|e| Error::Table { path: path.into(), message: e.to_string() })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn range(&self) -> (f64, f64) {
        let x = self.cubic.x();
        (x[0].exp(), x[x.len() - 1].exp())
    }

    pub fn is_extrapolated(&self, t: f64) -> bool {
        let (lo, hi) = self.range();
        t < lo || t > hi
    }

    fn cell_integral(&self, k: usize, xa: f64, xb: f64) -> f64 {
        gauss_legendre(&GL8, xa, xb, |x| (self.cubic.eval_in(k, x) + x).exp())
    }

    fn ends(&self) -> (f64, f64, f64, f64) {
        let x = self.cubic.x();
        let y = self.cubic.y();
        let n = x.len();
        (x[0], y[0], x[n - 1], y[n - 1])
    }

    pub fn density(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        let x = t.ln();
        let (x0, y0, xn, yn) = self.ends();
        if x < x0 {
            (y0 + self.head_alpha * (x - x0)).exp()
        } else if x > xn {
            (yn + self.tail_alpha * (x - xn)).exp()
        } else {
            self.cubic.eval_in(self.cubic.cell(x), x).exp()
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        let x = t.ln();
        let (x0, _, xn, yn) = self.ends();
        if x < x0 {
            t * self.density(t) / (self.head_alpha + 1.0)
        } else if x > xn {
            let tn = xn.exp();
            self.cum[self.cum.len() - 1] + (t * self.density(t) - tn * yn.exp()) / (self.tail_alpha + 1.0)
        } else {
            let k = self.cubic.cell(x);
            self.cum[k] + self.cell_integral(k, self.cubic.x()[k], x)
        }
    }

    pub fn inverse(&self, y: f64, tol: Tolerance) -> Result<f64> {
        if !(y > 0.0) {
            return Ok(0.0);
        }
        let (x0, y0, xn, yn) = self.ends();
        let n = self.cum.len();
        if y <= self.cum[0] {
            let a = self.head_alpha;
            return Ok((((y * (a + 1.0)).ln() + a * x0 - y0) / (a + 1.0)).exp());
        }
        if y >= self.cum[n - 1] {
            let a = self.tail_alpha;
            let rhs = (y - self.cum[n - 1]) * (a + 1.0) + (xn + yn).exp();
            return Ok(((rhs.ln() + a * xn - yn) / (a + 1.0)).exp());
        }
        let k = self.cum.partition_point(|&c| c <= y).saturating_sub(1).min(n - 2);
        let xs = self.cubic.x();
        let (mut a, mut b) = (xs[k], xs[k + 1]);
        let mut x = 0.5 * (a + b);
        for _ in 0..tol.max_iter {
            let fx = self.cum[k] + self.cell_integral(k, xs[k], x) - y;
            if fx.abs() <= tol.atol * y {
                return Ok(x.exp());
            }
            if fx < 0.0 {
                a = x;
            } else {
                b = x;
            }
            if b - a <= tol.rtol * 1e-3 {
                return Ok(x.exp());
            }
            let d = (self.cubic.eval_in(k, x) + x).exp();
            let mut next = x - fx / d;
            if !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
            if (next - x).abs() <= tol.rtol * 1e-3 {
                return Ok(next.exp());
            }
            x = next;
        }
        Err(Error::NonConvergence {
            what: "table inverse",
            iterations: tol.max_iter,
            lo: a.exp(),
            hi: b.exp(),
        })
    }

    /// Right-continuous generalized inverse of the density.
    pub fn density_inverse(&self, s: f64) -> f64 {
        if !(s > 0.0) {
            return 0.0;
        }
        let ls = s.ln();
        let (x0, y0, xn, yn) = self.ends();
        if ls < y0 {
            return if self.head_alpha > 0.0 { (x0 + (ls - y0) / self.head_alpha).exp() } else { x0.exp() };
        }
        if ls >= yn {
            return if self.tail_alpha > 0.0 { (xn + (ls - yn) / self.tail_alpha).exp() } else { f64::INFINITY };
        }
        let ys = self.cubic.y();
        let j = ys.partition_point(|&v| v <= ls);
        let k = j - 1;
        let xs = self.cubic.x();
        let (mut a, mut b) = (xs[k], xs[k + 1]);
        for _ in 0..200 {
            if b - a <= 1e-14 * (1.0 + b.abs()) {
                break;
            }
            let m = 0.5 * (a + b);
            if self.cubic.eval_in(k, m) > ls {
                b = m;
            } else {
                a = m;
            }
        }
        b.exp()
    }

    /// Complement, tabulated on the image of the table range under the density.
    pub fn complement(&self, label: impl Into<String>) -> Result<Table> {
        let (lo, hi) = self.range();
        let s_lo = self.density(lo);
        let s_hi = self.density(hi);
        if !(s_hi > s_lo) {
            return Err(domain("table density is constant; complement undefined"));
        }
        Table::sample(label, |s| self.density_inverse(s), s_lo, s_hi, TABLE_PER_DECADE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube_table() -> Table {
        // phi = 3 t^2, Phi = t^3
        Table::sample("cube", |t| 3.0 * t * t, 1e-3, 1e3, 32).unwrap()
    }

    #[test]
    fn pure_power_is_exact() {
        let t = cube_table();
        for &x in &[1e-5, 1e-3, 0.37, 1.0, 29.0, 1e3, 1e5] {
            let r = t.eval(x) / x.powi(3);
            assert!((r - 1.0).abs() < 1e-12, "x={x} r={r}");
        }
        assert!(t.is_extrapolated(1e5) && !t.is_extrapolated(1.0));
    }

    #[test]
    fn inverse_round_trip() {
        let t = cube_table();
        for &y in &[1e-12, 1e-4, 0.5, 7.0, 1e8, 1e12] {
            let x = t.inverse(y, Tolerance::default()).unwrap();
            assert!((t.eval(x) / y - 1.0).abs() < 1e-10, "y={y}");
        }
    }

    #[test]
    fn density_inverse_round_trip() {
        let t = cube_table();
        for &s in &[1e-9, 3e-3, 3.0, 1e4, 1e9] {
            let x = t.density_inverse(s);
            assert!((t.density(x) / s - 1.0).abs() < 1e-12, "s={s}");
        }
    }

    #[test]
    fn smooth_density_integral() {
        // phi = 2t + 3t^2 so Phi = t^2 + t^3.
        let t = Table::sample("sum", |s| 2.0 * s + 3.0 * s * s, TABLE_LO, TABLE_HI, TABLE_PER_DECADE).unwrap();
        for &x in &[1e-6, 0.1, 1.0, 3.0, 1e6] {
            let exact = x * x + x * x * x;
            assert!((t.eval(x) / exact - 1.0).abs() < 1e-9, "x={x}");
        }
    }
}
