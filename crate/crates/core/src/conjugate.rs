//! Sobolev conjugate `Phi_N` and the associated functions `B_Phi`, `B~_Phi`.
//!
//! With `N' = N/(N-1)`:
//! `H(t) = int_0^t Phi~(s) / s^{1+N'} ds`,
//! `Phi_N(t) = int_0^t s^{N'-1} (H^{-1}(s^{N'}))^{N'} ds`,
//! `B_Phi = Phi_N o Phi^{-1}`, and `B~_Phi` is its complement.

use crate::error::{domain, Error, Result};
use crate::numeric::quad::{adaptive, gauss_legendre, QuadOptions, GL8};
use crate::numeric::{integrate, log_grid};
use crate::young::{Table, YoungFunction, TABLE_HI, TABLE_LO, TABLE_PER_DECADE};

const H_PER_DECADE: usize = 16;

/// Tabulated `H_Phi` with exact in-cell evaluation and inversion.
#[derive(Debug, Clone)]
pub struct HFunction {
    tilde: YoungFunction,
    n_prime: f64,
    t: Vec<f64>,
    cum: Vec<f64>,
}

impl HFunction {
    /// Build `H` for `Phi` in dimension `n`, covering values up to `[y_lo, y_hi]`.
    pub fn new(phi: &YoungFunction, n: f64, y_lo: f64, y_hi: f64) -> Result<Self> {
        if !(n > 1.0) {
            return Err(domain("dimension must exceed 1"));
        }
        let n_prime = n / (n - 1.0);
        let tilde = phi.complement()?;
        let k = |s: f64| tilde.eval(s) / s.powf(1.0 + n_prime);
        let mut lo = 1e-8;
        let mut hi = 1e8;
        let head = integrate(k, 0.0, lo, &[]);
        if !head.is_finite() {
            return Err(Error::Hypothesis(format!(
                "H_Phi diverges at 0 for {phi} with N={n} (needs Phi~(s) = o(s^N') integrability)"
            )));
        }
        let mut h = HFunction { tilde: tilde.clone(), n_prime, t: vec![lo], cum: vec![head.value] };
        h.extend_to(hi)?;
        // Widen downwards until H(t_0) <= y_lo.
        while h.cum[0] > y_lo {
            let new_lo = lo * 1e-4;
            if new_lo < 1e-290 {
                return Err(Error::Degenerate("H_Phi does not reach the requested small values".into()));
            }
            let head = integrate(k, 0.0, new_lo, &[]).value;
            let pts = log_grid(new_lo, lo, H_PER_DECADE);
            let mut t = pts[..pts.len() - 1].to_vec();
            let mut cum = vec![head];
            for w in pts.windows(2).take(pts.len() - 2) {
                let v = *cum.last().unwrap() + h.cell(w[0], w[1]);
                cum.push(v);
            }
            // Re-anchor existing values on the new head.
            let shift = *cum.last().unwrap() + h.cell(pts[pts.len() - 2], lo) - h.cum[0];
            for c in h.cum.iter_mut() {
                *c += shift;
            }
            t.extend(h.t.iter());
            cum.extend(h.cum.iter());
            h.t = t;
            h.cum = cum;
            lo = new_lo;
        }
        while *h.cum.last().unwrap() < y_hi {
            let tail = integrate(k, hi, f64::INFINITY, &[]);
            if tail.is_finite() && *h.cum.last().unwrap() + tail.value < y_hi {
                return Err(Error::Hypothesis(format!(
                    "H_Phi is bounded for {phi} with N={n}; Phi_N would take infinite values"
                )));
            }
            hi *= 1e4;
            if hi > 1e290 {
                return Err(Error::Degenerate("H_Phi grows too slowly to tabulate".into()));
            }
            h.extend_to(hi)?;
        }
        Ok(h)
    }

    fn kernel(&self, s: f64) -> f64 {
        self.tilde.eval(s) / s.powf(1.0 + self.n_prime)
    }

    fn cell(&self, a: f64, b: f64) -> f64 {
        adaptive(|u| {
            let s = u.exp();
            self.kernel(s) * s
        }, a.ln(), b.ln(), &[], QuadOptions { rtol: 1e-12, ..Default::default() })
    }

    fn extend_to(&mut self, hi: f64) -> Result<()> {
        let last = *self.t.last().unwrap();
        let pts = log_grid(last, hi, H_PER_DECADE);
        for w in pts.windows(2) {
            let v = *self.cum.last().unwrap() + self.cell(w[0], w[1]);
            self.t.push(w[1]);
            self.cum.push(v);
        }
        Ok(())
    }

    pub fn n_prime(&self) -> f64 {
        self.n_prime
    }

    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        if t <= self.t[0] {
            return integrate(|s| self.kernel(s), 0.0, t, &[]).value;
        }
        let k = self.t.partition_point(|&x| x <= t).saturating_sub(1);
        if k + 1 >= self.t.len() {
            let last = self.t.len() - 1;
            return self.cum[last] + self.cell(self.t[last], t);
        }
        self.cum[k] + gl_cell(self, self.t[k], t)
    }

    /// `H^{-1}(y)` for `y` inside the tabulated range.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Ok(0.0);
        }
        let n = self.cum.len();
        if y < self.cum[0] || y > self.cum[n - 1] {
            return Err(domain(format!("H^-1({y:e}) is outside the tabulated range")));
        }
        let k = self.cum.partition_point(|&c| c <= y).saturating_sub(1).min(n - 2);
        let (mut a, mut b) = (self.t[k].ln(), self.t[k + 1].ln());
        let mut x = 0.5 * (a + b);
        for _ in 0..100 {
            let fx = self.cum[k] + gl_cell(self, self.t[k], x.exp()) - y;
            if fx < 0.0 {
                a = x;
            } else {
                b = x;
            }
            let s = x.exp();
            let d = self.kernel(s) * s;
            let mut next = x - fx / d;
            if !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
            if (next - x).abs() <= 1e-14 || b - a <= 1e-14 {
                return Ok(next.exp());
            }
            x = next;
        }
        Ok(x.exp())
    }
}

fn gl_cell(h: &HFunction, a: f64, b: f64) -> f64 {
    gauss_legendre(&GL8, a.ln(), b.ln(), |u| {
        let s = u.exp();
        h.kernel(s) * s
    })
}

/// `H_Phi(t)`.
pub fn h_phi(phi: &YoungFunction, n: f64, t: f64) -> Result<f64> {
    let h = HFunction::new(phi, n, t.min(1.0), t.max(1.0))?;
    Ok(h.eval(t))
}

/// Asymptotic log-log slopes at the top of each tabulated range.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AsymptoticSlopes {
    pub phi_n: f64,
    pub b_phi: f64,
    pub b_tilde: f64,
}

/// `Phi_N`, `B_Phi` and `B~_Phi` for one `(Phi, N)`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConjugateBundle {
    pub phi: YoungFunction,
    pub dim: f64,
    pub n_prime: f64,
    #[serde(skip)]
    pub h: HFunction,
    pub phi_n: YoungFunction,
    pub b_phi: YoungFunction,
    /// `B_Phi` passed the convexity check (its density is nondecreasing).
    pub b_phi_convex: bool,
    pub b_tilde: YoungFunction,
    pub slopes: AsymptoticSlopes,
}

/// Tabulate `Phi_N` on `[TABLE_LO, TABLE_HI]`.
pub fn phi_n(phi: &YoungFunction, n: f64) -> Result<YoungFunction> {
    Ok(build_phi_n(phi, n)?.1)
}

fn build_phi_n(phi: &YoungFunction, n: f64) -> Result<(HFunction, YoungFunction)> {
    let np = n / (n - 1.0);
    let y_lo = TABLE_LO.powf(np);
    let y_hi = TABLE_HI.powf(np);
    let h = HFunction::new(phi, n, y_lo, y_hi)?;
    let dens = |s: f64| -> f64 {
        let t = h.inverse(s.powf(np)).unwrap_or(f64::NAN);
        s.powf(np - 1.0) * t.powf(np)
    };
    let tab = Table::sample(format!("conjugate({phi},N={n})"), dens, TABLE_LO, TABLE_HI, TABLE_PER_DECADE)?;
    Ok((h, YoungFunction::tabulated(tab)))
}

/// `B_Phi = Phi_N o Phi^{-1}`, tabulated from its density, with the convexity flag.
pub fn b_phi(phi: &YoungFunction, n: f64) -> Result<(YoungFunction, bool)> {
    let (_, pn) = build_phi_n(phi, n)?;
    b_from(phi, &pn, n)
}

fn b_from(phi: &YoungFunction, pn: &YoungFunction, n: f64) -> Result<(YoungFunction, bool)> {
    let ys = log_grid(TABLE_LO, TABLE_HI, TABLE_PER_DECADE);
    let dens: Vec<f64> = ys
        .iter()
        .map(|&y| {
            let t = phi.inv(y);
            pn.derivative(t) / phi.derivative(t)
        })
        .collect();
    let convex = dens.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
    let mut mono = dens.clone();
    for i in 1..mono.len() {
        mono[i] = mono[i].max(mono[i - 1]);
    }
    let tab = Table::from_density(format!("b({phi},N={n})"), &ys, &mono)?;
    Ok((YoungFunction::tabulated(tab), convex))
}

/// `B~_Phi`, the complement of `B_Phi`.
pub fn b_tilde(phi: &YoungFunction, n: f64) -> Result<YoungFunction> {
    b_phi(phi, n)?.0.complement()
}

fn top_slope(f: &YoungFunction, hi: f64) -> f64 {
    let a = hi / 100.0;
    crate::numeric::loglog_slope(f.eval(a), f.eval(hi), a, hi)
}

/// Build the full bundle for `(Phi, N)`.
pub fn bundle(phi: &YoungFunction, n: f64) -> Result<ConjugateBundle> {
    let (h, pn) = build_phi_n(phi, n)?;
    let (b, convex) = b_from(phi, &pn, n)?;
    let bt = b.complement()?;
    let bt_hi = match &bt {
        YoungFunction::Tabulated(t) => t.range().1,
        _ => TABLE_HI,
    };
    let slopes = AsymptoticSlopes {
        phi_n: top_slope(&pn, TABLE_HI),
        b_phi: top_slope(&b, TABLE_HI),
        b_tilde: top_slope(&bt, bt_hi),
    };
    Ok(ConjugateBundle {
        phi: phi.clone(),
        dim: n,
        n_prime: n / (n - 1.0),
        h,
        phi_n: pn,
        b_phi: b,
        b_phi_convex: convex,
        b_tilde: bt,
        slopes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_closed_form_for_scaled_power() {
        // Phi = t^p/p: H(t) = t^{p'-N'} / (p' (p' - N')).
        let (p, n) = (2.0, 4.0);
        let phi = YoungFunction::scaled_power(p, 1.0 / p).unwrap();
        let h = HFunction::new(&phi, n, 1e-6, 1e6).unwrap();
        let pc = p / (p - 1.0);
        let np = n / (n - 1.0);
        for &t in &[1e-6f64, 1e-2, 1.0, 37.0, 1e5] {
            let exact = t.powf(pc - np) / (pc * (pc - np));
            assert!((h.eval(t) / exact - 1.0).abs() < 1e-9, "t={t}");
            assert!((h.inverse(exact).unwrap() / t - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn h_diverges_when_p_reaches_n() {
        let phi = YoungFunction::power(3.0).unwrap();
        assert!(matches!(HFunction::new(&phi, 3.0, 1e-3, 1e3), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn conjugate_exponent() {
        let b = bundle(&YoungFunction::power(2.0).unwrap(), 4.0).unwrap();
        assert!((b.slopes.phi_n - 4.0).abs() < 1e-6);
        assert!((b.slopes.b_phi - 2.0).abs() < 1e-6);
        assert!((b.slopes.b_tilde - 2.0).abs() < 1e-6);
        assert!(b.b_phi_convex);
    }
}
