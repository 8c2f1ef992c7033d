//! The block-counting (pure-death) process of the Kingman coalescent with
//! mutation: rates λ_m = m(m−1+θ)/2, the transition coefficients d_mn(t)
//! and their m → ∞ limits d_n(t).
//!
//! Both families are alternating sums. At small t the terms are many orders
//! of magnitude larger than the result, so evaluation escalates from `f64`
//! to exact rationals with fixed-point exponentials, and reports which was
//! needed.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{int, to_f64, Rational};

/// Largest term over |result| tolerated in double precision.
pub const DOUBLE_CANCELLATION_LIMIT: f64 = 1e12;
/// Auto mode goes exact beyond this ratio, keeping about ten digits.
const AUTO_ESCALATION_RATIO: f64 = 1e6;
/// Default lower time limit for the d_n series.
pub const DEFAULT_T_MIN: f64 = 0.02;
/// Largest chain handled by the matrix-exponential oracle.
pub const ORACLE_MAX_M: usize = 60;

/// Relative target for the truncated tail of the d_n series.
const TRUNCATION_REL: f64 = 1e-14;
/// Terms below e^{−745} vanish in f64 whatever the result.
const LOG_UNDERFLOW: f64 = -745.0;
const MAX_SERIES_TERMS: usize = 100_000;
pub const MAX_LIMIT_LEVEL: usize = 2_000;

/// λ_m = m(m − 1 + θ)/2.
pub fn lambda(m: usize, theta: f64) -> f64 {
    let m = m as f64;
    m * (m - 1.0 + theta) / 2.0
}

/// Arithmetic requested for an alternating series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Precision {
    Double,
    /// Exact rationals, exponentials to `bits` fractional bits (doubled until
    /// the rigorous error bound is below 1e−16 of the result).
    Exact { bits: u32 },
    /// Double first, exact if the cancellation check trips.
    Auto,
}

/// A summed series with its diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Largest |term|.
    pub max_term: f64,
    pub terms: usize,
    /// The arithmetic that produced `value`.
    pub precision: Precision,
}

/// Neumaier's compensated sum.
pub(crate) fn neumaier(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Σ_{k=k0}^{K} e^{−λ_k t} A_k with
/// A_k = (−1)^{k−n} (2k+θ−1)(n+θ)_(k−1) / (n!(k−n)!) · m_[k]/(θ+m)_(k),
/// the last factor dropped when `m` is None (the limit family).
/// For n = 0 the constant term A_0 = 1 is included.
///
/// With `tail` set it is instead 1 − d_0 − d_1 = Σ_{k≥2} B_k e^{−λ_k t}, where
/// B_k = (−1)^k (2k+θ−1)(k−1)(θ+k)(θ)_(k−1) / (θ k!) merges the two
/// coefficient rows; the k = 1 terms cancel exactly.
#[derive(Clone, Copy, Debug)]
struct Series {
    theta: f64,
    t: f64,
    n: usize,
    m: Option<usize>,
    tail: bool,
    k0: usize,
    k_end: usize,
}

impl Series {
    fn new(theta: f64, t: f64, n: usize, m: Option<usize>) -> Self {
        let mut s = Series { theta, t, n, m, tail: false, k0: n.max(1), k_end: 0 };
        s.k_end = match m {
            Some(m) => m,
            None => truncation_point(&s),
        };
        s
    }

    fn tail(theta: f64, t: f64) -> Self {
        let mut s = Series { theta, t, n: 2, m: None, tail: true, k0: 2, k_end: 0 };
        s.k_end = truncation_point(&s);
        s
    }

    /// ln|A_{k0}| and its sign.
    fn first_coeff_log(&self) -> (f64, f64) {
        let th = self.theta;
        if self.tail {
            return (((th + 2.0) * (th + 3.0) / 2.0).ln(), 1.0);
        }
        let n = self.n;
        let k = self.k0;
        // (2k+θ−1)(n+θ)_(k−1)/(n!(k−n)!) with k = max(n,1)
        let mut log_a = ((2 * k) as f64 - 1.0 + th).ln();
        let sign = if n == 0 { -1.0 } else { 1.0 };
        if n > 0 {
            for i in 0..n - 1 {
                log_a += ((n + i) as f64 + th).ln() - ((i + 1) as f64).ln();
            }
            log_a -= (n as f64).ln();
        }
        if let Some(m) = self.m {
            for i in 0..k {
                log_a += ((m - i) as f64).ln() - (th + (m + i) as f64).ln();
            }
        }
        (log_a, sign)
    }

    /// A_{k+1}/A_k.
    fn ratio(&self, k: usize) -> f64 {
        let th = self.theta;
        let n = self.n as f64;
        let kf = k as f64;
        if self.tail {
            return -(2.0 * kf + 1.0 + th) / (2.0 * kf - 1.0 + th) * kf / (kf - 1.0) * (th + kf + 1.0) / (th + kf)
                * (th + kf - 1.0)
                / (kf + 1.0);
        }
        let mut r = -(2.0 * kf + 1.0 + th) / (2.0 * kf - 1.0 + th) * (n + kf - 1.0 + th) / (kf + 1.0 - n);
        if let Some(m) = self.m {
            r *= (m - k) as f64 / (th + (m + k) as f64);
        }
        r
    }

    /// Terms in log space so that huge coefficients meet tiny exponentials
    /// without overflow.
    fn terms(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.k_end + 2 - self.k0);
        if self.n == 0 {
            out.push(1.0);
        }
        let (mut log_a, mut sign) = self.first_coeff_log();
        for k in self.k0..=self.k_end {
            out.push(sign * (log_a - lambda(k, self.theta) * self.t).exp());
            if k < self.k_end {
                let r = self.ratio(k);
                log_a += r.abs().ln();
                sign *= r.signum();
            }
        }
        out
    }

    fn empty(&self, precision: Precision) -> SeriesValue {
        let value = if self.n == 0 { 1.0 } else { 0.0 };
        SeriesValue { value, max_term: value, terms: 0, precision }
    }

    fn sum_double(&self) -> Result<SeriesValue> {
        let precision = Precision::Double;
        if self.k0 > self.k_end {
            return Ok(self.empty(precision));
        }
        let terms = self.terms();
        let max_term = terms.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let value = neumaier(terms.iter().copied());
        if !value.is_finite() || max_term > DOUBLE_CANCELLATION_LIMIT * value.abs() {
            return Err(Error::Unstable(format!(
                "series for n = {} (m = {:?}, theta = {}, t = {}) cancels: max term {max_term:e}, result {value:e}",
                self.n, self.m, self.theta, self.t
            )));
        }
        Ok(SeriesValue { value, max_term, terms: terms.len(), precision })
    }

    fn exact_coeffs(&self, th: &Rational) -> Vec<Rational> {
        let n = self.n;
        let mut coeffs = Vec::new();
        if self.tail {
            let mut b = (th + int(2)) * (th + int(3)) / int(2);
            for k in self.k0..=self.k_end {
                coeffs.push(b.clone());
                let kr = int(k as i64);
                b = -b * (int(2 * k as i64 + 1) + th) / (int(2 * k as i64 - 1) + th) * &kr / (&kr - int(1))
                    * (th + &kr + int(1))
                    / (th + &kr)
                    * (th + &kr - int(1))
                    / (&kr + int(1));
            }
            return coeffs;
        }
        let mut a = int((2 * self.k0) as i64 - 1) + th;
        if n == 0 {
            a = -a;
        } else {
            for i in 0..n - 1 {
                a = a * (int((n + i) as i64) + th) / int((i + 1) as i64);
            }
            a /= int(n as i64);
        }
        if let Some(m) = self.m {
            for i in 0..self.k0 {
                a = a * int((m - i) as i64) / (th + int((m + i) as i64));
            }
        }
        let nr = int(n as i64);
        for k in self.k0..=self.k_end {
            coeffs.push(a.clone());
            let kr = int(k as i64);
            let mut r = -(int(2 * k as i64 + 1) + th) / (int(2 * k as i64 - 1) + th) * (&nr + &kr - int(1) + th)
                / (&kr + int(1) - &nr);
            if let Some(m) = self.m {
                if k < m {
                    r = r * int((m - k) as i64) / (th + int((m + k) as i64));
                }
            }
            a *= r;
        }
        coeffs
    }

    fn sum_exact(&self, start_bits: u32) -> Result<SeriesValue> {
        let th = Rational::from_float(self.theta)
            .ok_or_else(|| Error::Domain("theta must be finite".into()))?;
        let t = Rational::from_float(self.t).ok_or_else(|| Error::Domain("t must be finite".into()))?;
        if self.k0 > self.k_end {
            return Ok(self.empty(Precision::Exact { bits: start_bits }));
        }
        let coeffs = self.exact_coeffs(&th);
        let abs_sum: f64 = coeffs.iter().map(|c| to_f64(&c.abs())).sum();
        let constant = if self.n == 0 { Rational::one() } else { Rational::zero() };
        let mut bits = start_bits.max(64);
        loop {
            let mut total = constant.clone();
            let mut max_term: f64 = to_f64(&constant);
            for (i, c) in coeffs.iter().enumerate() {
                let k = self.k0 + i;
                let kr = int(k as i64);
                let x = &kr * (&kr - int(1) + &th) / int(2) * &t;
                let e = Rational::new(exp_neg_fixed(&x, bits), BigInt::one() << bits);
                let term = c * e;
                max_term = max_term.max(to_f64(&term.abs()));
                total += term;
            }
            let value = to_f64(&total);
            // each exponential is within 2^{−bits+2} in absolute terms
            let bound = abs_sum * 2f64.powi(-(bits as i32) + 2);
            if bound <= 1e-16 * value.abs() {
                return Ok(SeriesValue { value, max_term, terms: coeffs.len(), precision: Precision::Exact { bits } });
            }
            if bits >= 1 << 14 {
                return Err(Error::Unstable(format!(
                    "exact evaluation for n = {} did not reach precision at {bits} bits",
                    self.n
                )));
            }
            bits *= 2;
        }
    }

    fn sum(&self, precision: Precision) -> Result<SeriesValue> {
        match precision {
            Precision::Double => self.sum_double(),
            Precision::Exact { bits } => self.sum_exact(bits),
            Precision::Auto => match self.sum_double() {
                Ok(v) if v.max_term <= AUTO_ESCALATION_RATIO * v.value.abs() => Ok(v),
                _ => self.sum_exact(256),
            },
        }
    }
}

/// Last index K of the limit series such that the tail after K is below
/// 1e−14 of the largest term and also below e^{−745}, so it cannot matter
/// even when the sum cancels far below the terms. Uses the decreasing envelope
/// r̄_k = (2k+1+θ)/(2k−1+θ) · max(1, (n+θ+k−1)/(k+1−n)) · e^{−(k+θ/2)t}
/// of |A_{k+1}/A_k| e^{−(λ_{k+1}−λ_k)t}.
///
/// For the tail series the middle factor is replaced by
/// k/(k−1) · (θ+k+1)/(θ+k) · max(1, (θ+k−1)/(k+1)), also non-increasing.
fn truncation_point(series: &Series) -> usize {
    let Series { theta, t, n, k0, .. } = *series;
    let mut log_a = series.first_coeff_log().0 - lambda(k0, theta) * t;
    let mut log_max = log_a;
    let mut k = k0;
    loop {
        let kf = k as f64;
        let nf = n as f64;
        let growth = if series.tail {
            kf / (kf - 1.0) * (theta + kf + 1.0) / (theta + kf) * ((theta + kf - 1.0) / (kf + 1.0)).max(1.0)
        } else {
            ((nf + theta + kf - 1.0) / (kf + 1.0 - nf)).max(1.0)
        };
        let r = (2.0 * kf + 1.0 + theta) / (2.0 * kf - 1.0 + theta) * growth * (-(kf + theta / 2.0) * t).exp();
        if r < 0.5 {
            // tail after k is at most a_k r/(1−r) ≤ 2 a_k r
            let log_tail = log_a + (2.0 * r).ln();
            if log_tail < log_max + TRUNCATION_REL.ln() && log_tail < LOG_UNDERFLOW {
                return k;
            }
        }
        log_a += r.ln();
        log_max = log_max.max(log_a);
        k += 1;
        if k - k0 > MAX_SERIES_TERMS {
            return k;
        }
    }
}

/// Evaluation options for the coefficient families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoalescentConfig {
    pub precision: Precision,
    /// d_n(t) is refused (instability) for t ≤ t_min.
    pub t_min: f64,
}

impl Default for CoalescentConfig {
    fn default() -> Self {
        CoalescentConfig { precision: Precision::Auto, t_min: DEFAULT_T_MIN }
    }
}

fn check_theta_t(theta: f64, t: f64) -> Result<()> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::Parameter(format!("theta must be positive, got {theta}")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    Ok(())
}

/// d_mn(t) for 1 ≤ n ≤ m with diagnostics.
pub fn d_mn_with(t: f64, m: usize, n: usize, theta: f64, precision: Precision) -> Result<SeriesValue> {
    check_theta_t(theta, t)?;
    if n == 0 || n > m {
        return Err(Error::Domain(format!("d_mn needs 1 <= n <= m, got m = {m}, n = {n}")));
    }
    if t == 0.0 {
        let value = if n == m { 1.0 } else { 0.0 };
        return Ok(SeriesValue { value, max_term: value, terms: 0, precision });
    }
    Series::new(theta, t, n, Some(m)).sum(precision)
}

/// d_mn(t), with d_m0 the complement 1 − Σ_{n≥1} d_mn.
pub fn d_mn(t: f64, m: usize, n: usize, theta: f64) -> Result<f64> {
    if n == 0 {
        return coeff_row(t, m, theta, Precision::Auto).map(|r| r.values[0]);
    }
    d_mn_with(t, m, n, theta, Precision::Auto).map(|v| v.value)
}

/// d_n(t) (n ≥ 1) or d_0(t) = 1 + Σ_{k≥1} A_k e^{−λ_k t}.
pub fn d_n_with(t: f64, n: usize, theta: f64, config: CoalescentConfig) -> Result<SeriesValue> {
    check_theta_t(theta, t)?;
    if t <= config.t_min {
        return Err(Error::Unstable(format!(
            "d_n series at t = {t} <= t_min = {}",
            config.t_min
        )));
    }
    Series::new(theta, t, n, None).sum(config.precision)
}

pub fn d_n(t: f64, n: usize, theta: f64) -> Result<f64> {
    d_n_with(t, n, theta, CoalescentConfig::default()).map(|v| v.value)
}

/// d̃_1(t) = d_0(t) + d_1(t): the collapsed state {0, 1}.
pub fn d_tilde_1(t: f64, theta: f64) -> Result<f64> {
    Ok(d_n(t, 0, theta)? + d_n(t, 1, theta)?)
}

/// A row of coefficients indexed by n.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoeffTable {
    pub theta: f64,
    pub t: f64,
    /// Source level; None for the limit family d_n.
    pub m: Option<usize>,
    pub values: Vec<f64>,
    /// Max |values − oracle| when compared.
    pub oracle_error: Option<f64>,
    /// Arithmetic used for each entry (entry 0 of a finite row is a complement).
    pub precision: Vec<Precision>,
}

impl CoeffTable {
    /// Entries in [−ε, 1+ε] and total within `tol` of 1, ε = 1e−10.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let eps = 1e-10;
        if let Some((n, v)) = self.values.iter().enumerate().find(|(_, v)| **v < -eps || **v > 1.0 + eps) {
            return Err(Error::Consistency(format!("coefficient {n} = {v} outside [0,1]")));
        }
        let total: f64 = self.values.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::Consistency(format!("coefficients sum to {total}")));
        }
        Ok(())
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Fills `oracle_error` from the matrix-exponential row.
    pub fn compare_with_oracle(&mut self) -> Result<f64> {
        let m = self
            .m
            .ok_or_else(|| Error::Domain("oracle comparison needs a finite source level".into()))?;
        let oracle = death_chain_expm_oracle(m, self.theta, self.t)?;
        let err = self
            .values
            .iter()
            .zip(&oracle)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        self.oracle_error = Some(err);
        Ok(err)
    }
}

/// d_m0..d_mm at time t.
///
/// d_m0 is the complement 1 − Σ_{n≥1} d_mn, but subtracting in floating
/// point loses everything when d_m0 is tiny. It is summed instead as
/// 1 + Σ_k A_k e^{−λ_k t} with the n = 0 coefficients, which is the same
/// quantity term by term.
pub fn coeff_row(t: f64, m: usize, theta: f64, precision: Precision) -> Result<CoeffTable> {
    check_theta_t(theta, t)?;
    let rows: Vec<SeriesValue> = (0..=m)
        .into_par_iter()
        .map(|n| {
            if t == 0.0 {
                let value = if n == m { 1.0 } else { 0.0 };
                Ok(SeriesValue { value, max_term: value, terms: 0, precision })
            } else {
                Series::new(theta, t, n, Some(m)).sum(precision)
            }
        })
        .collect::<Result<_>>()?;
    let values = rows.iter().map(|v| v.value).collect();
    let used = rows.iter().map(|v| v.precision).collect();
    Ok(CoeffTable { theta, t, m: Some(m), values, oracle_error: None, precision: used })
}

/// d_0..d_N at time t with N the first level where the remaining mass
/// 1 − Σ_{n≤N} d_n drops below 1e−12 (and d_N is past the mode).
pub fn limit_row(t: f64, theta: f64, config: CoalescentConfig) -> Result<CoeffTable> {
    let mut values = Vec::new();
    let mut used = Vec::new();
    let mut total = 0.0;
    let mut peak: f64 = 0.0;
    for n in 0..=MAX_LIMIT_LEVEL {
        let v = d_n_with(t, n, theta, config)?;
        total += v.value;
        peak = peak.max(v.value);
        values.push(v.value);
        used.push(v.precision);
        if n >= 1 && v.value < peak && (1.0 - total).abs() < 1e-12 {
            break;
        }
    }
    Ok(CoeffTable { theta, t, m: None, values, oracle_error: None, precision: used })
}

/// Row m of exp(tQ) for the pure-death generator on {0,…,m} (rate λ_k
/// for k → k−1), via nalgebra's Padé scaling-and-squaring.
pub fn death_chain_expm_oracle(m: usize, theta: f64, t: f64) -> Result<Vec<f64>> {
    check_theta_t(theta, t)?;
    if m > ORACLE_MAX_M {
        return Err(Error::Capacity { what: "oracle chain length", value: m, max: ORACLE_MAX_M });
    }
    let q = DMatrix::from_fn(m + 1, m + 1, |i, j| {
        if i == j {
            -lambda(i, theta)
        } else if i >= 1 && j == i - 1 {
            lambda(i, theta)
        } else {
            0.0
        }
    });
    let p = (q * t).exp();
    Ok((0..=m).map(|j| p[(m, j)]).collect())
}

/// Σ_{n≥2} d_n(t) = 1 − d̃_1(t) against (θ+1)(θ+2)/2 · e^{−(θ+1)t}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailBound {
    pub t: f64,
    pub theta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// The left side is summed as its own series, since 1 − d̃_1 computed by
/// subtraction has no relative accuracy once it is small.
pub fn tail_bound_check(t: f64, theta: f64) -> Result<TailBound> {
    check_theta_t(theta, t)?;
    if t <= DEFAULT_T_MIN {
        return Err(Error::Unstable(format!("tail series at t = {t} <= t_min = {DEFAULT_T_MIN}")));
    }
    let lhs = Series::tail(theta, t).sum(Precision::Auto)?.value;
    let rhs = (theta + 1.0) * (theta + 2.0) / 2.0 * (-(theta + 1.0) * t).exp();
    Ok(TailBound { t, theta, lhs, rhs, ok: lhs <= rhs + 1e-10 })
}

/// Final states of `paths` independent death chains started at m, run for
/// time t; counts indexed by state. Parallel over ChaCha streams.
pub fn simulate_death_chain(m: usize, theta: f64, t: f64, paths: u64, seed: u64) -> Result<Vec<u64>> {
    check_theta_t(theta, t)?;
    const CHUNK: u64 = 1 << 14;
    let chunks = paths.div_ceil(CHUNK);
    let partial: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut counts = vec![0u64; m + 1];
            let count = CHUNK.min(paths - c * CHUNK);
            for _ in 0..count {
                counts[run_death_chain(m, theta, t, &mut rng)] += 1;
            }
            counts
        })
        .collect();
    Ok(partial.into_iter().fold(vec![0u64; m + 1], |mut acc, c| {
        for (a, b) in acc.iter_mut().zip(c) {
            *a += b;
        }
        acc
    }))
}

fn run_death_chain<R: Rng + ?Sized>(m: usize, theta: f64, t: f64, rng: &mut R) -> usize {
    let mut state = m;
    let mut clock = 0.0;
    while state > 0 {
        let hold = Exp::new(lambda(state, theta)).expect("positive rate").sample(rng);
        clock += hold;
        if clock > t {
            break;
        }
        state -= 1;
    }
    state
}

/// floor(e^{−x} · 2^bits) up to a few units, for rational x ≥ 0.
fn exp_neg_fixed(x: &Rational, bits: u32) -> BigInt {
    let xf = to_f64(x);
    let halvings = if xf > 0.5 { (xf.log2().ceil() as u32) + 1 } else { 0 };
    let work = bits + halvings + 32;
    let one = BigInt::one() << work;
    // y = x / 2^halvings as a fixed-point integer
    let scaled = x * Rational::from_integer(BigInt::one() << work) / Rational::from_integer(BigInt::one() << halvings);
    let y = scaled.floor().to_integer();
    let mut sum = one.clone();
    let mut term = one.clone();
    let mut i = 1u64;
    loop {
        term = -(&term * &y >> work) / BigInt::from(i);
        if term.is_zero() {
            break;
        }
        sum += &term;
        i += 1;
    }
    for _ in 0..halvings {
        sum = &sum * &sum >> work;
    }
    sum >> (work - bits)
}

/// Exact e^{−x} estimate as f64, for tests.
#[cfg(test)]
fn exp_neg_fixed_f64(x: f64, bits: u32) -> f64 {
    use num_traits::ToPrimitive;
    let v = exp_neg_fixed(&Rational::from_float(x).unwrap(), bits);
    v.to_f64().unwrap() / 2f64.powi(bits as i32)
}
