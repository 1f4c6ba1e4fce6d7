//! Young functions: evaluation, inverses, complements and growth checks.
//!
//! A Young function here is an N-function `Phi(t) = int_0^t phi`, with `phi`
//! right-continuous, nondecreasing, `phi(0) = 0` and `phi -> inf`.

pub mod growth;
pub mod piecewise;
pub mod table;

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};
use crate::numeric::solve::{invert_increasing, Tolerance};

pub use growth::{GrowthCertificate, HVerdict};
pub use piecewise::{Piece, PiecewisePower};
pub use table::{Table, TABLE_HI, TABLE_LO, TABLE_PER_DECADE};

/// Family tag of a [`YoungFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Power,
    SumPower,
    MaxPower,
    PowerLog,
    Piecewise,
    Tabulated,
}

/// How `phi` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMode {
    ClosedForm,
    Interpolated,
}

#[derive(Debug, Clone)]
pub enum YoungFunction {
    /// `coef * t^p`.
    Power { p: f64, coef: f64 },
    /// `t^p + t^q`.
    SumPower { p: f64, q: f64 },
    /// `max{t^p, t^q}` with `p <= q`.
    MaxPower { p: f64, q: f64 },
    /// `t^p * ln(e + t)`.
    PowerLog { p: f64 },
    Piecewise(Arc<PiecewisePower>),
    Tabulated(Arc<Table>),
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if v > 1.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("exponent {name}={v} must exceed 1")))
    }
}

impl YoungFunction {
    pub fn power(p: f64) -> Result<Self> {
        Self::scaled_power(p, 1.0)
    }

    pub fn scaled_power(p: f64, coef: f64) -> Result<Self> {
        check_exponent("p", p)?;
        if !(coef > 0.0) || !coef.is_finite() {
            return Err(domain(format!("coefficient c={coef} must be positive")));
        }
        Ok(YoungFunction::Power { p, coef })
    }

    pub fn sum_power(p: f64, q: f64) -> Result<Self> {
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        Ok(YoungFunction::SumPower { p: p.min(q), q: p.max(q) })
    }

    pub fn max_power(p: f64, q: f64) -> Result<Self> {
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        Ok(YoungFunction::MaxPower { p: p.min(q), q: p.max(q) })
    }

    pub fn power_log(p: f64) -> Result<Self> {
        check_exponent("p", p)?;
        Ok(YoungFunction::PowerLog { p })
    }

    /// Function with density `coef_i * t^exp_i` on `[start_i, start_{i+1})`.
    pub fn piecewise(pieces: Vec<Piece>) -> Result<Self> {
        Ok(YoungFunction::Piecewise(Arc::new(PiecewisePower::new(pieces)?)))
    }

    pub fn tabulated(table: Table) -> Self {
        YoungFunction::Tabulated(Arc::new(table))
    }

    pub fn family(&self) -> Family {
        match self {
            YoungFunction::Power { .. } => Family::Power,
            YoungFunction::SumPower { .. } => Family::SumPower,
            YoungFunction::MaxPower { .. } => Family::MaxPower,
            YoungFunction::PowerLog { .. } => Family::PowerLog,
            YoungFunction::Piecewise(_) => Family::Piecewise,
            YoungFunction::Tabulated(_) => Family::Tabulated,
        }
    }

    pub fn derivative_mode(&self) -> DerivativeMode {
        match self {
            YoungFunction::Tabulated(_) => DerivativeMode::Interpolated,
            _ => DerivativeMode::ClosedForm,
        }
    }

    /// `Phi(t)`; nonpositive arguments give 0.
    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        match self {
            YoungFunction::Power { p, coef } => coef * t.powf(*p),
            YoungFunction::SumPower { p, q } => t.powf(*p) + t.powf(*q),
            YoungFunction::MaxPower { p, q } => {
                if t < 1.0 {
                    t.powf(*p)
                } else {
                    t.powf(*q)
                }
            }
            YoungFunction::PowerLog { p } => t.powf(*p) * (std::f64::consts::E + t).ln(),
            YoungFunction::Piecewise(pw) => pw.eval(t),
            YoungFunction::Tabulated(tab) => tab.eval(t),
        }
    }

    /// `Phi(t)` with a flag set when a table was extrapolated.
    pub fn eval_flagged(&self, t: f64) -> (f64, bool) {
        (self.eval(t), self.is_extrapolated(t))
    }

    pub fn is_extrapolated(&self, t: f64) -> bool {
        matches!(self, YoungFunction::Tabulated(tab) if tab.is_extrapolated(t))
    }

    /// Right-continuous density `phi(t)`.
    pub fn derivative(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        match self {
            YoungFunction::Power { p, coef } => coef * p * t.powf(p - 1.0),
            YoungFunction::SumPower { p, q } => p * t.powf(p - 1.0) + q * t.powf(q - 1.0),
            YoungFunction::MaxPower { p, q } => {
                if t < 1.0 {
                    p * t.powf(p - 1.0)
                } else {
                    q * t.powf(q - 1.0)
                }
            }
            YoungFunction::PowerLog { p } => {
                let e = std::f64::consts::E;
                p * t.powf(p - 1.0) * (e + t).ln() + t.powf(*p) / (e + t)
            }
            YoungFunction::Piecewise(pw) => pw.density(t),
            YoungFunction::Tabulated(tab) => tab.density(t),
        }
    }

    /// `Phi^{-1}(y)`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Ok(0.0);
        }
        if y.is_infinite() {
            return Ok(f64::INFINITY);
        }
        match self {
            YoungFunction::Power { p, coef } => Ok((y / coef).powf(1.0 / p)),
            YoungFunction::MaxPower { p, q } => Ok(if y < 1.0 { y.powf(1.0 / p) } else { y.powf(1.0 / q) }),
            YoungFunction::SumPower { p, q } => {
                let hint = if y < 1.0 { y.powf(1.0 / p) } else { y.powf(1.0 / q) };
                invert_increasing(|t| self.eval(t), y, hint, Tolerance::default())
            }
            YoungFunction::PowerLog { p } => invert_increasing(|t| self.eval(t), y, y.powf(1.0 / p), Tolerance::default()),
            YoungFunction::Piecewise(pw) => Ok(pw.inverse(y)),
            YoungFunction::Tabulated(tab) => tab.inverse(y, Tolerance::default()),
        }
    }

    /// `Phi^{-1}(y)`, with NaN standing in for a solver failure.
    pub fn inv(&self, y: f64) -> f64 {
        self.inverse(y).unwrap_or(f64::NAN)
    }

    /// Right-continuous inverse of the density, `inf { t : phi(t) > s }`.
    pub fn phi_inverse(&self, s: f64) -> f64 {
        if !(s > 0.0) {
            return 0.0;
        }
        match self {
            YoungFunction::Power { p, coef } => (s / (coef * p)).powf(1.0 / (p - 1.0)),
            YoungFunction::MaxPower { p, q } => {
                if s < *p {
                    (s / p).powf(1.0 / (p - 1.0))
                } else if s < *q {
                    1.0
                } else {
                    (s / q).powf(1.0 / (q - 1.0))
                }
            }
            YoungFunction::SumPower { p, .. } | YoungFunction::PowerLog { p } => {
                let hint = (s / p).powf(1.0 / (p - 1.0)).min(1e300);
                invert_increasing(|t| self.derivative(t), s, hint, Tolerance::default()).unwrap_or(f64::NAN)
            }
            YoungFunction::Piecewise(pw) => pw.density_inverse(s),
            YoungFunction::Tabulated(tab) => tab.density_inverse(s),
        }
    }

    /// The complementary Young function `sup_s (st - Phi(s))`.
    ///
    /// Powers and piecewise powers have exact complements; other families
    /// are tabulated from `phi^{-1}` on the image of `[TABLE_LO, TABLE_HI]`.
    pub fn complement(&self) -> Result<YoungFunction> {
        match self {
            YoungFunction::Power { p, coef } => {
                let pc = p / (p - 1.0);
                let c = (coef * p).powf(-1.0 / (p - 1.0)) / pc;
                YoungFunction::scaled_power(pc, c)
            }
            YoungFunction::MaxPower { p, q } => {
                let pw = PiecewisePower::new(vec![
                    Piece { start: 0.0, coef: *p, exp: p - 1.0 },
                    Piece { start: 1.0, coef: *q, exp: q - 1.0 },
                ])?;
                Ok(YoungFunction::Piecewise(Arc::new(pw.complement()?)))
            }
            YoungFunction::Piecewise(pw) => Ok(YoungFunction::Piecewise(Arc::new(pw.complement()?))),
            YoungFunction::SumPower { .. } | YoungFunction::PowerLog { .. } => {
                let lo = self.derivative(TABLE_LO);
                let hi = self.derivative(TABLE_HI);
                let tab = Table::sample(format!("complement({self})"), |s| self.phi_inverse(s), lo, hi, TABLE_PER_DECADE)?;
                Ok(YoungFunction::tabulated(tab))
            }
            YoungFunction::Tabulated(tab) => Ok(YoungFunction::tabulated(tab.complement(format!("complement({})", tab.label()))?)),
        }
    }

    /// Canonical spec string; parseable for the named families.
    pub fn spec(&self) -> String {
        match self {
            YoungFunction::Power { p, coef } if *coef == 1.0 => format!("pow:p={p}"),
            YoungFunction::Power { p, coef } => format!("pow:p={p},c={coef}"),
            YoungFunction::SumPower { p, q } => format!("sumpow:p={p},q={q}"),
            YoungFunction::MaxPower { p, q } => format!("maxpow:p={p},q={q}"),
            YoungFunction::PowerLog { p } => format!("powlog:p={p}"),
            YoungFunction::Piecewise(pw) => {
                let parts: Vec<String> = pw.pieces().iter().map(|pc| format!("[{}: {} t^{}]", pc.start, pc.coef, pc.exp)).collect();
                format!("piecewise({})", parts.join(" "))
            }
            YoungFunction::Tabulated(tab) => tab.label().to_string(),
        }
    }

    /// Exponent `p` when this is a pure power.
    pub fn power_exponent(&self) -> Option<f64> {
        match self {
            YoungFunction::Power { p, .. } => Some(*p),
            _ => None,
        }
    }
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

impl serde::Serialize for YoungFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.spec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_complement_closed_form() {
        let f = YoungFunction::scaled_power(3.0, 1.0 / 3.0).unwrap();
        match f.complement().unwrap() {
            YoungFunction::Power { p, coef } => {
                assert!((p - 1.5).abs() < 1e-15);
                assert!((coef - 1.0 / 1.5).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn max_power_derivative_is_right_continuous() {
        let f = YoungFunction::max_power(2.0, 3.0).unwrap();
        assert_eq!(f.derivative(1.0), 3.0);
        assert_eq!(f.eval(1.0), 1.0);
    }

    #[test]
    fn rejects_unit_exponent() {
        assert!(YoungFunction::max_power(2.0, 1.0).is_err());
        assert!(YoungFunction::power(0.5).is_err());
    }

    #[test]
    fn inverse_round_trips() {
        let fams = [
            YoungFunction::power(2.5).unwrap(),
            YoungFunction::sum_power(2.0, 3.0).unwrap(),
            YoungFunction::max_power(1.5, 4.0).unwrap(),
            YoungFunction::power_log(2.0).unwrap(),
        ];
        for f in &fams {
            for &t in &[1e-6, 0.3, 1.0, 2.0, 1e5] {
                let r = f.inverse(f.eval(t)).unwrap() / t;
                assert!((r - 1.0).abs() < 1e-9, "{f} t={t}");
            }
        }
    }

    #[test]
    fn smooth_complement_involution() {
        let f = YoungFunction::sum_power(2.0, 3.0).unwrap();
        let ff = f.complement().unwrap().complement().unwrap();
        for &t in &[1e-6, 0.01, 1.0, 50.0, 1e6] {
            assert!((ff.eval(t) / f.eval(t) - 1.0).abs() < 1e-6, "t={t}");
        }
    }
}
