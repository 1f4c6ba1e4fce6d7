//! Young functions whose density is a power on each of finitely many pieces.
//!
//! The class is closed under complement: inverting a piecewise power density
//! gives another one, with jumps turning into flat pieces and back.

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    /// Left end of the piece; the first piece starts at 0.
    pub start: f64,
    /// Density on the piece is `coef * t^exp`.
    pub coef: f64,
    pub exp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePower {
    pieces: Vec<Piece>,
    /// `Phi(start_i)`.
    cum: Vec<f64>,
}

impl PiecewisePower {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(domain("piecewise density needs at least one piece"));
        }
        if pieces[0].start != 0.0 || !(pieces[0].exp > 0.0) {
            return Err(domain("first piece must start at 0 with a positive exponent"));
        }
        if !(pieces.last().unwrap().exp > 0.0) {
            return Err(domain("last piece must have a positive exponent"));
        }
        for w in pieces.windows(2) {
            if !(w[1].start > w[0].start) {
                return Err(domain("piece starts must increase"));
            }
        }
        for p in &pieces {
            if !(p.coef > 0.0) || !(p.exp >= 0.0) || !p.coef.is_finite() {
                return Err(domain("piece coefficients must be positive and exponents nonnegative"));
            }
        }
        let mut pw = PiecewisePower { pieces, cum: Vec::new() };
        for i in 1..pw.pieces.len() {
            if pw.density_left(i) > pw.density_at_start(i) * (1.0 + 1e-12) {
                return Err(domain("density must be nondecreasing across pieces"));
            }
        }
        let mut cum = vec![0.0];
        for i in 1..pw.pieces.len() {
            let prev = &pw.pieces[i - 1];
            let v = cum[i - 1] + antideriv(prev, pw.pieces[i].start) - antideriv(prev, prev.start);
            cum.push(v);
        }
        pw.cum = cum;
        Ok(pw)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    fn piece_index(&self, t: f64) -> usize {
        self.pieces.partition_point(|p| p.start <= t).saturating_sub(1)
    }

    fn density_at_start(&self, i: usize) -> f64 {
        let p = &self.pieces[i];
        p.coef * p.start.powf(p.exp)
    }

    /// Left limit of the density at the start of piece `i`.
    fn density_left(&self, i: usize) -> f64 {
        let p = &self.pieces[i - 1];
        p.coef * self.pieces[i].start.powf(p.exp)
    }

    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        let i = self.piece_index(t);
        let p = &self.pieces[i];
        self.cum[i] + antideriv(p, t) - antideriv(p, p.start)
    }

    /// Right-continuous density.
    pub fn density(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        let p = &self.pieces[self.piece_index(t)];
        p.coef * t.powf(p.exp)
    }

    pub fn inverse(&self, y: f64) -> f64 {
        if !(y > 0.0) {
            return 0.0;
        }
        let i = self.cum.partition_point(|&c| c <= y).saturating_sub(1);
        let p = &self.pieces[i];
        let e1 = p.exp + 1.0;
        (p.start.powf(e1) + (y - self.cum[i]) * e1 / p.coef).powf(1.0 / e1)
    }

    /// Right-continuous generalized inverse `inf { t : density(t) > s }`.
    pub fn density_inverse(&self, s: f64) -> f64 {
        if !(s > 0.0) {
            return 0.0;
        }
        let n = self.pieces.len();
        for i in 0..n {
            let p = &self.pieces[i];
            if i > 0 && s < self.density_at_start(i) {
                return p.start;
            }
            let hi = if i + 1 < n { self.density_left(i + 1) } else { f64::INFINITY };
            if p.exp > 0.0 && s < hi {
                return (s / p.coef).powf(1.0 / p.exp);
            }
        }
        unreachable!("last piece has positive exponent")
    }

    /// Density pieces of the complementary function.
    pub fn complement(&self) -> Result<PiecewisePower> {
        let n = self.pieces.len();
        let mut out = Vec::new();
        for i in 0..n {
            let p = &self.pieces[i];
            if i > 0 {
                let left = self.density_left(i);
                let right = self.density_at_start(i);
                if right > left * (1.0 + START_RTOL) {
                    out.push(Piece { start: left, coef: p.start, exp: 0.0 });
                }
            }
            if p.exp > 0.0 {
                out.push(Piece {
                    start: self.density_at_start(i),
                    coef: p.coef.powf(-1.0 / p.exp),
                    exp: 1.0 / p.exp,
                });
            }
        }
        PiecewisePower::new(merge(out))
    }
}

/// Relative gap below which two piece starts are the same point.
const START_RTOL: f64 = 1e-12;

fn merge(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        if let Some(last) = out.last_mut() {
            if last.exp == p.exp && (last.coef - p.coef).abs() <= 1e-15 * p.coef {
                continue;
            }
            if last.start > 0.0 && p.start <= last.start * (1.0 + START_RTOL) {
                *last = Piece { start: last.start, ..p };
                continue;
            }
        }
        out.push(p);
    }
    out
}

fn antideriv(p: &Piece, t: f64) -> f64 {
    let e1 = p.exp + 1.0;
    p.coef * t.powf(e1) / e1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maxpow(p: f64, q: f64) -> PiecewisePower {
        PiecewisePower::new(vec![
            Piece { start: 0.0, coef: p, exp: p - 1.0 },
            Piece { start: 1.0, coef: q, exp: q - 1.0 },
        ])
        .unwrap()
    }

    #[test]
    fn max_power_values() {
        let f = maxpow(2.0, 3.0);
        assert!((f.eval(0.5) - 0.25).abs() < 1e-15);
        assert!((f.eval(2.0) - 8.0).abs() < 1e-14);
        assert_eq!(f.density(1.0), 3.0);
        assert_eq!(f.density_inverse(2.5), 1.0);
    }

    #[test]
    fn complement_is_an_involution() {
        let f = maxpow(2.0, 3.0);
        let ff = f.complement().unwrap().complement().unwrap();
        for &t in &[0.01, 0.5, 1.0, 1.7, 40.0] {
            assert!((ff.eval(t) / f.eval(t) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn double_complement_of_wide_jump() {
        let f = maxpow(1.2, 4.064905222669671);
        let ff = f.complement().unwrap().complement().unwrap();
        for &t in &[0.01, 0.5, 1.0, 1.7, 40.0] {
            assert!((ff.eval(t) / f.eval(t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_decreasing_density() {
        let r = PiecewisePower::new(vec![
            Piece { start: 0.0, coef: 3.0, exp: 1.0 },
            Piece { start: 1.0, coef: 1.0, exp: 1.0 },
        ]);
        assert!(r.is_err());
    }
}
