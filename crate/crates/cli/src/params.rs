//! Parsing of model parameters, partitions and lists from flag values.

use clap::Args;
use num_complex::Complex64;
use thoma_core::error::{Error, Result};
use thoma_core::partition::Partition;
use thoma_core::rational::{parse_rational, to_f64, Rational};
use thoma_core::zmeasure::ZParams;

/// (z, z′, ϑ). Values are rationals (`1/3`, `0.3`) or complex numbers
/// (`0.5+0.8i`). With complex z and no z′, z′ = z̄.
#[derive(Args, Clone, Debug)]
pub struct ZArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, allow_hyphen_values = true)]
    pub zprime: Option<String>,
    #[arg(long, default_value = "1")]
    pub vartheta: String,
}

/// A number as exact rational parts when possible.
#[derive(Clone, Debug, PartialEq)]
enum Num {
    Real(Rational),
    Complex(Rational, Rational),
    Float(Complex64),
}

fn parse_real(s: &str) -> Result<Num> {
    match parse_rational(s) {
        Ok(r) => Ok(Num::Real(r)),
        Err(e) => s.trim().parse::<f64>().map(|x| Num::Float(Complex64::new(x, 0.0))).map_err(|_| e),
    }
}

fn parse_num(s: &str) -> Result<Num> {
    let t = s.trim();
    let Some(body) = t.strip_suffix('i') else { return parse_real(t) };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let im = im.strip_prefix('+').unwrap_or(im);
    match (parse_real(re)?, parse_real(im)?) {
        (Num::Real(a), Num::Real(b)) => Ok(Num::Complex(a, b)),
        (a, b) => Ok(Num::Float(Complex64::new(num_re(&a), num_re(&b)))),
    }
}

fn num_re(n: &Num) -> f64 {
    match n {
        Num::Real(r) => to_f64(r),
        Num::Complex(r, _) => to_f64(r),
        Num::Float(c) => c.re,
    }
}

fn to_complex(n: &Num) -> Complex64 {
    match n {
        Num::Real(r) => Complex64::new(to_f64(r), 0.0),
        Num::Complex(a, b) => Complex64::new(to_f64(a), to_f64(b)),
        Num::Float(c) => *c,
    }
}

pub fn parse_vartheta(s: &str) -> Result<Rational> {
    let v = parse_rational(s)?;
    if v <= Rational::from_integer(0.into()) {
        return Err(Error::Parameter(format!("vartheta must be positive, got {s}")));
    }
    Ok(v)
}

impl ZArgs {
    pub fn build(&self) -> Result<ZParams> {
        let vartheta = parse_vartheta(&self.vartheta)?;
        let z = parse_num(&self.z)?;
        let zp = self.zprime.as_deref().map(parse_num).transpose()?;
        match (z, zp) {
            (Num::Real(a), Some(Num::Real(b))) => ZParams::new_exact_real(a, b, vartheta),
            (Num::Complex(a, b), None) => ZParams::principal_exact(a, b, vartheta),
            (Num::Real(a), None) => ZParams::principal_exact(a, Rational::from_integer(0.into()), vartheta),
            (z, None) => ZParams::principal(to_complex(&z), vartheta),
            (z, Some(zp)) => ZParams::new(to_complex(&z), to_complex(&zp), vartheta),
        }
    }
}

pub fn parse_partition(s: &str) -> Result<Partition> {
    s.parse()
}

/// Partitions separated by `;` (each written with commas).
pub fn parse_partition_list(s: &str) -> Result<Vec<Partition>> {
    s.split(';').map(parse_partition).collect()
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {x:?}"))))
        .collect()
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("not a count: {x:?}"))))
        .collect()
}

pub fn positive_theta(theta: f64) -> Result<f64> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::Parameter(format!("theta must be positive, got {theta}")));
    }
    Ok(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use thoma_core::rational::ratio;
    use thoma_core::zmeasure::ParamCase;

    #[test]
    fn numbers() {
        assert_eq!(parse_num("1/3").unwrap(), Num::Real(ratio(1, 3)));
        assert_eq!(parse_num("0.5-0.25i").unwrap(), Num::Complex(ratio(1, 2), ratio(-1, 4)));
        assert_eq!(parse_num("2i").unwrap(), Num::Complex(ratio(0, 1), ratio(2, 1)));
        assert_eq!(parse_num("-i").unwrap(), Num::Complex(ratio(0, 1), ratio(-1, 1)));
        assert_eq!(parse_num("1e-3+2e-1i").unwrap(), Num::Float(Complex64::new(1e-3, 0.2)));
        assert!(parse_num("x").is_err());
    }

    #[test]
    fn parameter_cases() {
        let z = |z: &str, zp: Option<&str>, v: &str| ZArgs { z: z.into(), zprime: zp.map(Into::into), vartheta: v.into() };
        let p = z("1/3", Some("2/3"), "1").build().unwrap();
        assert_eq!(p.case(), ParamCase::Complementary);
        assert!(p.has_exact());
        let p = z("0.5+0.8i", None, "1").build().unwrap();
        assert_eq!(p.case(), ParamCase::Principal);
        assert!((p.theta() - 0.89).abs() < 1e-12);
        assert!(z("0.3", Some("1.7"), "1").build().is_err());
        assert!(z("0.3", Some("0.7"), "-1").build().is_err());
    }
}
