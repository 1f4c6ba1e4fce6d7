//! Spec strings for Young functions and weights.
//!
//! Grammar: `family(:key=value(,key=value)*)?`, or `family:<path>` for the
//! file-backed families.
//!
//! ```
//! use orlicz_lab::spec::{parse_young, parse_weight};
//!
//! let phi = parse_young("sumpow:p=2,q=3").unwrap();
//! assert_eq!(phi.spec(), "sumpow:p=2,q=3");
//! let g = parse_weight("hardy:a=2", 4, f64::INFINITY).unwrap();
//! assert_eq!(g.spec(), "hardy:a=2");
//! assert!(parse_young("maxpow:p=2,q=1").is_err());
//! ```

use std::path::Path;

use crate::error::{Error, ParseError, Result};
use crate::rearrange::WeightProfile;
use crate::young::{Table, YoungFunction};

struct Spec<'a> {
    input: &'a str,
    family: &'a str,
    /// Byte offset of the argument part.
    args_at: usize,
    args: Option<&'a str>,
}

fn split(input: &str) -> Result<Spec<'_>, ParseError> {
    let lead = input.len() - input.trim_start().len();
    let text = input.trim();
    if text.is_empty() {
        return Err(ParseError::new(input, 0, "empty spec"));
    }
    let (family, args) = match text.find(':') {
        Some(i) => (&text[..i], Some(&text[i + 1..])),
        None => (text, None),
    };
    if family.is_empty() || !family.chars().all(|c| c.is_ascii_alphanumeric()) {
        return Err(ParseError::new(input, lead, format!("malformed family name `{family}`")));
    }
    Ok(Spec { input, family, args_at: lead + family.len() + 1, args })
}

impl<'a> Spec<'a> {
    fn err(&self, at: usize, msg: impl Into<String>) -> Error {
        Error::Parse(ParseError::new(self.input, at, msg))
    }

    /// `key=value` pairs with their value offsets; keys must come from `allowed`.
    fn pairs(&self, allowed: &[&str]) -> Result<Vec<(&'a str, f64, usize)>> {
        let Some(args) = self.args else {
            return Ok(Vec::new());
        };
        let mut out: Vec<(&str, f64, usize)> = Vec::new();
        let mut at = self.args_at;
        for item in args.split(',') {
            let Some(eq) = item.find('=') else {
                return Err(self.err(at, format!("expected key=value, found `{item}`")));
            };
            let key = item[..eq].trim();
            let raw = item[eq + 1..].trim();
            let vat = at + eq + 1;
            if !allowed.contains(&key) {
                return Err(self.err(at, format!("unknown key `{key}` for `{}` (expected {})", self.family, allowed.join(", "))));
            }
            if out.iter().any(|(k, _, _)| *k == key) {
                return Err(self.err(at, format!("duplicate key `{key}`")));
            }
            let v: f64 = raw.parse().map_err(|_| self.err(vat, format!("`{raw}` is not a number")))?;
            if !v.is_finite() {
                return Err(self.err(vat, format!("`{key}` must be finite")));
            }
            out.push((key, v, vat));
            at += item.len() + 1;
        }
        Ok(out)
    }

    fn required(&self, pairs: &[(&str, f64, usize)], key: &str) -> Result<(f64, usize)> {
        pairs
            .iter()
            .find(|(k, _, _)| *k == key)
            .map(|(_, v, at)| (*v, *at))
            .ok_or_else(|| self.err(self.input.len(), format!("`{}` needs `{key}=`", self.family)))
    }

    fn optional(pairs: &[(&str, f64, usize)], key: &str) -> Option<(f64, usize)> {
        pairs.iter().find(|(k, _, _)| *k == key).map(|(_, v, at)| (*v, *at))
    }

    fn exponent(&self, pairs: &[(&str, f64, usize)], key: &str) -> Result<f64> {
        let (v, at) = self.required(pairs, key)?;
        if v > 1.0 {
            Ok(v)
        } else {
            Err(self.err(at, format!("{key} must exceed 1, got {v}")))
        }
    }

    fn path(&self) -> Result<&'a Path> {
        match self.args.map(str::trim) {
            Some(p) if !p.is_empty() => Ok(Path::new(p)),
            _ => Err(self.err(self.input.len(), format!("`{}` needs a file path", self.family))),
        }
    }
}

/// Parse a Young-function spec: `pow:p=2` (optional `c=`), `sumpow:p=2,q=3`,
/// `maxpow:p=2,q=3`, `powlog:p=2` or `table:<path>`.
pub fn parse_young(input: &str) -> Result<YoungFunction> {
    let s = split(input)?;
    match s.family {
        "pow" => {
            let kv = s.pairs(&["p", "c"])?;
            let p = s.exponent(&kv, "p")?;
            match Spec::optional(&kv, "c") {
                Some((c, at)) if !(c > 0.0) => Err(s.err(at, format!("c must be positive, got {c}"))),
                Some((c, _)) => YoungFunction::scaled_power(p, c),
                None => YoungFunction::power(p),
            }
        }
        "sumpow" | "maxpow" => {
            let kv = s.pairs(&["p", "q"])?;
            let p = s.exponent(&kv, "p")?;
            let q = s.exponent(&kv, "q")?;
            if s.family == "sumpow" {
                YoungFunction::sum_power(p, q)
            } else {
                YoungFunction::max_power(p, q)
            }
        }
        "powlog" => {
            let kv = s.pairs(&["p"])?;
            YoungFunction::power_log(s.exponent(&kv, "p")?)
        }
        "table" => Ok(YoungFunction::tabulated(Table::from_csv(s.path()?)?)),
        other => Err(s.err(
            input.len() - input.trim_start().len(),
            format!("unknown Young family `{other}` (expected pow, sumpow, maxpow, powlog or table)"),
        )),
    }
}

/// Parse a weight spec: `hardy:a=<exp>` (optional `c=`), `const:c=<v>,m=<measure>`,
/// `indicator:m=<measure>`, `sample:<path>` (`value,measure` rows) or
/// `radial:<path>` (`rho,g` rows), on a domain of dimension `dim` and measure `omega`.
pub fn parse_weight(input: &str, dim: u32, omega: f64) -> Result<WeightProfile> {
    let s = split(input)?;
    match s.family {
        "hardy" => {
            let kv = s.pairs(&["a", "c"])?;
            let (a, at) = s.required(&kv, "a")?;
            if a < 0.0 {
                return Err(s.err(at, format!("a must be nonnegative, got {a}")));
            }
            let c = Spec::optional(&kv, "c").map_or(1.0, |x| x.0);
            WeightProfile::radial_power(c, a, dim, omega)
        }
        "const" => {
            let kv = s.pairs(&["c", "m"])?;
            let (c, _) = s.required(&kv, "c")?;
            let m = Spec::optional(&kv, "m").map_or(omega, |x| x.0);
            WeightProfile::constant(c, m, dim, omega)
        }
        "indicator" => {
            let kv = s.pairs(&["m"])?;
            WeightProfile::indicator(s.required(&kv, "m")?.0, dim, omega)
        }
        "sample" => WeightProfile::sampled_from_csv(s.path()?, dim, omega),
        "radial" => WeightProfile::radial_from_csv(s.path()?, dim, omega),
        other => Err(s.err(
            input.len() - input.trim_start().len(),
            format!("unknown weight family `{other}` (expected hardy, const, indicator, sample or radial)"),
        )),
    }
}

/// A domain measure: a positive number or `inf`.
pub fn parse_measure(input: &str) -> Result<f64> {
    let t = input.trim();
    let v = if t.eq_ignore_ascii_case("inf") { f64::INFINITY } else { t.parse().unwrap_or(f64::NAN) };
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Parse(ParseError::new(input, 0, "expected a positive measure or `inf`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_err(r: Result<impl std::fmt::Debug>) -> ParseError {
        match r {
            Err(Error::Parse(e)) => e,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn young_round_trip() {
        for text in ["pow:p=2", "pow:p=2.5,c=3", "sumpow:p=2,q=3", "maxpow:p=1.5,q=4", "powlog:p=2"] {
            assert_eq!(parse_young(text).unwrap().spec(), text);
        }
        assert_eq!(parse_young("  pow:p = 3 ").unwrap().spec(), "pow:p=3");
        assert_eq!(parse_young("sumpow:q=2,p=3").unwrap().spec(), "sumpow:p=2,q=3");
    }

    #[test]
    fn young_errors_carry_positions() {
        let e = parse_err(parse_young("maxpow:p=2,q=1"));
        assert_eq!(e.position, 13);
        assert!(e.message.contains("q must exceed 1"));
        assert_eq!(parse_err(parse_young("cube:p=2")).position, 0);
        assert_eq!(parse_err(parse_young("pow:p=x")).position, 6);
        assert_eq!(parse_err(parse_young("pow:r=2")).position, 4);
        assert!(parse_err(parse_young("pow")).message.contains("needs `p=`"));
        assert!(parse_err(parse_young("pow:p=2,p=3")).message.contains("duplicate"));
        assert!(parse_err(parse_young("pow:p=2,c=0")).message.contains("positive"));
        assert!(parse_err(parse_young("pow:p=0")).message.contains("exceed 1"));
        assert!(parse_err(parse_young("")).message.contains("empty"));
    }

    #[test]
    fn table_from_file() {
        let dir = std::env::temp_dir().join(format!("orlicz-spec-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("phi.csv");
        let mut body = String::from("t,phi\n");
        for t in crate::numeric::log_grid(1e-3, 1e3, 8) {
            body.push_str(&format!("{t},{}\n", 2.0 * t));
        }
        std::fs::write(&path, body).unwrap();
        let f = parse_young(&format!("table:{}", path.display())).unwrap();
        assert!((f.eval(2.0) / 4.0 - 1.0).abs() < 1e-6);
        assert!(matches!(parse_young(&format!("table:{}", dir.join("missing.csv").display())), Err(Error::Table { .. })));
        assert!(parse_err(parse_young("table:")).message.contains("file path"));
    }

    #[test]
    fn weights() {
        let g = parse_weight("hardy:a=2", 4, f64::INFINITY).unwrap();
        assert_eq!((g.spec(), g.dim()), ("hardy:a=2", 4));
        assert_eq!(parse_weight("hardy:a=2,c=3", 4, 1.0).unwrap().spec(), "hardy:a=2,c=3");
        assert_eq!(parse_weight("const:c=2,m=1", 2, 5.0).unwrap().spec(), "const:c=2,m=1");
        assert_eq!(parse_weight("const:c=2", 2, 5.0).unwrap().spec(), "const:c=2,m=5");
        assert_eq!(parse_weight("indicator:m=0.5", 3, 1.0).unwrap().l1_norm(), 0.5);
        assert_eq!(parse_err(parse_weight("hardy:a=-1", 3, 1.0)).position, 8);
        assert_eq!(parse_err(parse_weight("ramp:a=1", 3, 1.0)).position, 0);
        assert!(matches!(parse_weight("const:c=1,m=2", 3, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn measures() {
        assert_eq!(parse_measure("inf").unwrap(), f64::INFINITY);
        assert_eq!(parse_measure("2.5").unwrap(), 2.5);
        assert!(parse_measure("0").is_err());
        assert!(parse_measure("abc").is_err());
    }
}
