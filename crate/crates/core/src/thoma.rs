//! Points of the Thoma simplex with finitely many nonzero coordinates.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MASS_TOL: f64 = 1e-12;

/// ω = (α; β) with Σα + Σβ ≤ 1 and residual mass γ = 1 − Σα − Σβ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThomaPoint {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    gamma: f64,
}

impl ThomaPoint {
    /// Sorts both lists into non-increasing order, drops zeros and checks the mass constraint.
    pub fn new(mut alpha: Vec<f64>, mut beta: Vec<f64>) -> Result<Self> {
        for x in alpha.iter().chain(&beta) {
            if !x.is_finite() || *x < 0.0 || *x > 1.0 {
                return Err(Error::Domain(format!("Thoma coordinate {x} outside [0,1]")));
            }
        }
        let desc = |a: &f64, b: &f64| b.total_cmp(a);
        alpha.sort_by(desc);
        beta.sort_by(desc);
        alpha.retain(|&x| x > 0.0);
        beta.retain(|&x| x > 0.0);
        let mass: f64 = alpha.iter().chain(&beta).sum();
        if mass > 1.0 + MASS_TOL {
            return Err(Error::Domain(format!("Thoma point has total mass {mass} > 1")));
        }
        let gamma = (1.0 - mass).max(0.0);
        let gamma = if gamma < MASS_TOL { 0.0 } else { gamma };
        Ok(ThomaPoint { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Σ α_i^k and Σ β_j^k.
    pub fn power_sums(&self, k: u32) -> (f64, f64) {
        let k = k as i32;
        (
            self.alpha.iter().map(|a| a.powi(k)).sum(),
            self.beta.iter().map(|b| b.powi(k)).sum(),
        )
    }

    /// A random point with at most `max_alpha` / `max_beta` nonzero coordinates.
    /// Masses are drawn from a stick-breaking scheme and rounded to multiples of
    /// 1/1000 so that sweeps are reproducible and coordinates are rational.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, max_alpha: usize, max_beta: usize) -> Self {
        let na = rng.random_range(0..=max_alpha);
        let nb = rng.random_range(0..=max_beta);
        let mut remaining = 1000u32;
        let mut draw = |rng: &mut R| -> f64 {
            let take = rng.random_range(0..=remaining);
            remaining -= take;
            take as f64 / 1000.0
        };
        let alpha: Vec<f64> = (0..na).map(|_| draw(rng)).collect();
        let beta: Vec<f64> = (0..nb).map(|_| draw(rng)).collect();
        ThomaPoint::new(alpha, beta).expect("stick-breaking keeps mass <= 1")
    }
}

impl fmt::Display for ThomaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        write!(f, "a={};b={}", join(&self.alpha), join(&self.beta))
    }
}

impl FromStr for ThomaPoint {
    type Err = Error;

    /// `"a=0.5,0.3;b=0.1"`; either section may be omitted or empty.
    fn from_str(s: &str) -> Result<Self> {
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        for section in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, values) = section
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected a=... or b=..., got {section:?}")))?;
            let target = match key.trim() {
                "a" | "alpha" => &mut alpha,
                "b" | "beta" => &mut beta,
                other => return Err(Error::Parse(format!("unknown Thoma key {other:?}"))),
            };
            for v in values.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                target.push(
                    v.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad coordinate {v:?}")))?,
                );
            }
        }
        ThomaPoint::new(alpha, beta)
    }
}
