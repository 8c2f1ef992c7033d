//! The kernels K_n(σ,ω) and the two series for the transition density
//! q(t,σ,ω): the spectral form 1 + Σ_m e^{−λ_m t} G_m and the mixture form
//! d_0 + d_1 + Σ_n d_n K_n.

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::coalescent::{self, lambda, neumaier, CoalescentConfig, Precision};
use crate::dual::PhiPoly;
use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, Partition};
use crate::rational::{binomial, factorial, rising, to_f64, Rational};
use crate::symfunc::{phi_power_sum, SymAlgebra};
use crate::thoma::ThomaPoint;
use crate::zmeasure::ZMeasure;

pub const DEFAULT_KERNEL_DEGREE: usize = 8;
pub const MAX_KERNEL_DEGREE: usize = 12;
/// Levels past the truncation that [`KernelTable::for_truncation`] adds
/// so that the first tail terms are computed rather than extrapolated.
pub const TAIL_LOOKAHEAD: usize = 3;
/// Largest level for the weak-convergence probe.
pub const MAX_PROBE_LEVEL: usize = 40;
pub const MAX_PROBE_ZETA: usize = 3;

/// One level of j_η as φ-polynomials, with the stationary masses E j_η = M_n(η).
struct KernelLevel {
    partitions: Vec<Partition>,
    j: Vec<PhiPoly<f64>>,
    mass: Vec<f64>,
}

/// Precomputed j_η for every |η| ≤ `max_degree` at fixed parameters, so
/// that kernels at many points only need the power sums of the points.
pub struct KernelTable {
    theta: f64,
    vartheta: f64,
    levels: Vec<KernelLevel>,
}

/// j_η = dim(η) Φ(J_η) as a φ-polynomial. At ϑ = 1, J_η is the Schur
/// function, which is available beyond the Jack degree cap.
fn j_poly(alg: &SymAlgebra, eta: &Partition, vartheta: &Rational) -> Result<PhiPoly<Rational>> {
    let dim = alg.graph(vartheta)?.dim(eta);
    let j = if vartheta.is_one() {
        PhiPoly::schur(alg, eta)?
    } else {
        PhiPoly::from_symmetric(alg, &alg.jack_paper(eta, vartheta)?)?
    };
    Ok(j.scale(&dim))
}

/// Largest kernel degree the algebra supports at this ϑ.
pub fn kernel_degree_limit(alg: &SymAlgebra, vartheta: &Rational) -> usize {
    if vartheta.is_one() {
        MAX_KERNEL_DEGREE.min(alg.config().max_degree)
    } else {
        MAX_KERNEL_DEGREE.min(alg.config().max_jack_degree)
    }
}

impl KernelTable {
    pub fn new(alg: &SymAlgebra, zm: &ZMeasure, max_degree: usize) -> Result<Self> {
        if max_degree > MAX_KERNEL_DEGREE {
            return Err(Error::Capacity { what: "kernel degree", value: max_degree, max: MAX_KERNEL_DEGREE });
        }
        let vartheta = zm.params().vartheta().clone();
        let levels = (0..=max_degree)
            .map(|n| {
                let partitions = enumerate_partitions(n);
                let rows = partitions
                    .par_iter()
                    .map(|eta| {
                        let mass = zm.m_n_raw(eta)?;
                        if mass == 0.0 {
                            return Err(Error::Parameter(format!("M_{n}({eta}) = 0, kernel undefined")));
                        }
                        Ok((j_poly(alg, eta, &vartheta)?.to_f64(), mass))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let (j, mass) = rows.into_iter().unzip();
                Ok(KernelLevel { partitions, j, mass })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KernelTable { theta: zm.params().theta(), vartheta: to_f64(&vartheta), levels })
    }

    /// A table for density truncation n, with up to [`TAIL_LOOKAHEAD`] extra levels.
    pub fn for_truncation(alg: &SymAlgebra, zm: &ZMeasure, n: usize) -> Result<Self> {
        let limit = kernel_degree_limit(alg, zm.params().vartheta());
        if n > limit {
            return Err(Error::Capacity { what: "density truncation", value: n, max: limit });
        }
        Self::new(alg, zm, (n + TAIL_LOOKAHEAD).min(limit))
    }

    pub fn max_degree(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn phis(&self, omega: &ThomaPoint) -> Vec<f64> {
        (0..=self.max_degree().max(1)).map(|k| if k == 0 { 0.0 } else { phi_power_sum(omega, self.vartheta, k) }).collect()
    }

    fn check(&self, n: usize) -> Result<&KernelLevel> {
        self.levels.get(n).ok_or(Error::Capacity { what: "kernel degree", value: n, max: self.max_degree() })
    }

    /// (η, j_η(ω)) over the level n.
    pub fn j_level(&self, n: usize, omega: &ThomaPoint) -> Result<Vec<(Partition, f64)>> {
        let level = self.check(n)?;
        let phi = self.phis(omega);
        Ok(level.partitions.iter().cloned().zip(level.j.iter().map(|p| p.eval_with(|i| phi[i]))).collect())
    }

    /// K_n(σ,ω) = Σ_{|η|=n} j_η(σ) j_η(ω) / M_n(η), exactly 1 for n ≤ 1.
    pub fn kernel(&self, n: usize, sigma: &ThomaPoint, omega: &ThomaPoint) -> Result<f64> {
        self.kernel_at(n, &self.phis(sigma), &self.phis(omega))
    }

    fn kernel_at(&self, n: usize, ps: &[f64], po: &[f64]) -> Result<f64> {
        let level = self.check(n)?;
        if n <= 1 {
            return Ok(1.0);
        }
        Ok(neumaier(level.j.iter().zip(&level.mass).map(|(j, m)| {
            j.eval_with(|i| ps[i]) * j.eval_with(|i| po[i]) / m
        })))
    }

    /// K_0, …, K_D at (σ, ω).
    pub fn kernels(&self, sigma: &ThomaPoint, omega: &ThomaPoint) -> Result<Vec<f64>> {
        let (ps, po) = (self.phis(sigma), self.phis(omega));
        (0..=self.max_degree()).map(|n| self.kernel_at(n, &ps, &po)).collect()
    }
}

/// K_n(σ,ω) without a prebuilt table.
pub fn kernel_k(alg: &SymAlgebra, zm: &ZMeasure, n: usize, sigma: &ThomaPoint, omega: &ThomaPoint) -> Result<f64> {
    if n <= 1 {
        return Ok(1.0);
    }
    KernelTable::new(alg, zm, n)?.kernels(sigma, omega).map(|k| k[n])
}

/// c_mn = (−1)^{m−n} C(m,n) (θ+2m−1)(θ+n)_{m−1} / m!, the weight of K_n in G_m.
pub fn g_coefficient(m: usize, n: usize, theta: f64) -> f64 {
    let sign = if (m - n) % 2 == 0 { 1.0 } else { -1.0 };
    let c = to_f64(&Rational::from(binomial(m, n))) / to_f64(&Rational::from(factorial(m)));
    sign * c * (theta + 2.0 * m as f64 - 1.0) * rising(&(theta + n as f64), m - 1)
}

/// G_m from the kernel values K_0..K_m.
pub fn g_from_kernels(m: usize, kernels: &[f64], theta: f64) -> f64 {
    neumaier((0..=m).map(|n| g_coefficient(m, n, theta) * kernels[n]))
}

/// G_m(σ,ω).
pub fn g_m(table: &KernelTable, m: usize, sigma: &ThomaPoint, omega: &ThomaPoint) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!("G_m starts at m = 2, got {m}")));
    }
    let k = table.kernels(sigma, omega)?;
    if m >= k.len() {
        return Err(Error::Capacity { what: "G_m order", value: m, max: table.max_degree() });
    }
    Ok(g_from_kernels(m, &k, table.theta))
}

/// |G_m| ≤ c m^{d m}, fitted over the available orders.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    /// log c, raised so the envelope covers every fitted point.
    pub log_c: f64,
    pub d: f64,
    pub points: usize,
}

impl GrowthFit {
    /// Least squares of log|G_m| on m log m, then the intercept is lifted to
    /// the largest residual. Orders with G_m = 0 carry no information.
    pub fn fit(gs: &[(usize, f64)]) -> GrowthFit {
        let pts: Vec<(f64, f64)> = gs
            .iter()
            .filter(|(_, g)| *g != 0.0 && g.is_finite())
            .map(|&(m, g)| (m as f64 * (m as f64).ln(), g.abs().ln()))
            .collect();
        if pts.is_empty() {
            return GrowthFit { log_c: f64::NEG_INFINITY, d: 0.0, points: 0 };
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let d = if sxx > 0.0 { (sxy / sxx).max(0.0) } else { 0.0 };
        let log_c = pts.iter().map(|p| p.1 - d * p.0).fold(f64::NEG_INFINITY, f64::max);
        GrowthFit { log_c, d, points: pts.len() }
    }

    pub fn bound(&self, m: usize) -> f64 {
        let m = m as f64;
        (self.log_c + self.d * m * m.ln()).exp()
    }

    /// Σ_{m>M} e^{−λ_m t} c m^{dm}, summed until the terms are negligible.
    pub fn spectral_tail(&self, from: usize, t: f64, theta: f64) -> f64 {
        if self.log_c == f64::NEG_INFINITY {
            return 0.0;
        }
        let mut total = 0.0;
        for m in from + 1..from + 400 {
            let mf = m as f64;
            let term = (self.log_c + self.d * mf * mf.ln() - lambda(m, theta) * t).exp();
            total += term;
            if m > from + 2 && term < 1e-300_f64.max(total * 1e-17) {
                break;
            }
        }
        total
    }
}

/// d_0, d_1, … until past both the truncation and the mode, with terms
/// below 1e−30 (the cutoff of `limit_row` would drop tail mass near 1e−12).
/// Each value comes with a bound on its own rounding error.
fn coefficients(t: f64, theta: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let config = CoalescentConfig::default();
    let mut out: Vec<f64> = Vec::new();
    let mut err: Vec<f64> = Vec::new();
    let mut peak: f64 = 0.0;
    for k in 0..=coalescent::MAX_LIMIT_LEVEL {
        let v = coalescent::d_n_with(t, k, theta, config)?;
        peak = peak.max(v.value);
        out.push(v.value);
        err.push(match v.precision {
            Precision::Exact { .. } => 2.0 * f64::EPSILON * v.value.abs(),
            _ => 4.0 * f64::EPSILON * v.max_term * v.terms.max(1) as f64,
        });
        if k > n + TAIL_LOOKAHEAD && v.value < peak && v.value < 1e-30 {
            break;
        }
    }
    Ok((out, err))
}

/// Σ_{n>N} d_n |K_n| with the kernels the table holds past N, then
/// |K_n| extrapolated geometrically (ratio ≥ 1) from the last two levels.
fn mixture_tail(d: &[f64], kernels: &[f64], n: usize) -> f64 {
    let top = kernels.len() - 1;
    let known = (n + 1..=top).map(|k| d.get(k).copied().unwrap_or(0.0) * kernels[k].abs());
    let r = if kernels[top - 1] != 0.0 { (kernels[top] / kernels[top - 1]).abs().max(1.0) } else { 1.0 };
    let mut scale = kernels[top].abs().max(1.0);
    let beyond = d.iter().skip(top + 1).map(|x| {
        scale *= r;
        x * scale
    });
    neumaier(known.chain(beyond))
}

/// Both series for q(t,σ,ω) and their truncation-tail estimates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityEval {
    pub t: f64,
    pub sigma: ThomaPoint,
    pub omega: ThomaPoint,
    pub truncation: usize,
    pub value_mixture: f64,
    pub value_spectral: f64,
    /// mixture_tail + spectral_tail + rounding.
    pub tail_estimate: f64,
    /// Σ_{n>N} d_n(t) times the extrapolated kernel size.
    pub mixture_tail: f64,
    /// Σ_{m>N} e^{−λ_m t}|G_m|: computed while the table lasts, then the fitted envelope.
    pub spectral_tail: f64,
    /// Floating-point allowance for comparing the two partial sums.
    pub rounding: f64,
    pub growth: GrowthFit,
    pub kernels: Vec<f64>,
}

impl DensityEval {
    /// |value_mixture − value_spectral| ≤ tail_estimate.
    pub fn consistent(&self) -> bool {
        (self.value_mixture - self.value_spectral).abs() <= self.tail_estimate
    }
}

/// Evaluates both forms with truncation `n` (≤ the table degree). Table
/// levels past n feed the tail estimates; beyond the table the mixture tail
/// extrapolates the kernels and the spectral tail uses the |G_m| fit.
pub fn density(table: &KernelTable, t: f64, sigma: &ThomaPoint, omega: &ThomaPoint, n: usize) -> Result<DensityEval> {
    if n < 2 || n > table.max_degree() {
        return Err(Error::Capacity { what: "density truncation", value: n, max: table.max_degree() });
    }
    let theta = table.theta;
    let top = table.max_degree();
    let kernels = table.kernels(sigma, omega)?;
    let (row, row_err) = coefficients(t, theta, n)?;
    let d = |k: usize| row.get(k).copied().unwrap_or(0.0);
    let envelope = |m: usize| (-lambda(m, theta) * t).exp();

    let value_mixture = neumaier((0..=n).map(|k| d(k) * kernels[k]));
    let gs: Vec<(usize, f64)> = (2..=top).map(|m| (m, g_from_kernels(m, &kernels, theta))).collect();
    let value_spectral = 1.0 + neumaier(gs[..n - 1].iter().map(|&(m, g)| envelope(m) * g));

    let mixture_tail = mixture_tail(&row, &kernels, n);
    let growth = GrowthFit::fit(&gs);
    let spectral_tail = neumaier(gs[n - 1..].iter().map(|&(m, g)| envelope(m) * g.abs()))
        + growth.spectral_tail(top, t, theta);
    // a few ulps of the summed magnitudes on each side, plus what the
    // coefficients already carry
    let magnitude = (0..=n).map(|k| (d(k) * kernels[k]).abs()).sum::<f64>()
        + 1.0
        + gs[..n - 1].iter().map(|&(m, g)| envelope(m) * g.abs()).sum::<f64>();
    let rounding = 8.0 * f64::EPSILON * magnitude + (0..=n).map(|k| row_err[k] * kernels[k].abs()).sum::<f64>();
    Ok(DensityEval {
        t,
        sigma: sigma.clone(),
        omega: omega.clone(),
        truncation: n,
        value_mixture,
        value_spectral,
        tail_estimate: mixture_tail + spectral_tail + rounding,
        mixture_tail,
        spectral_tail,
        rounding,
        growth,
        kernels: kernels[..=n].to_vec(),
    })
}

/// The total-variation bound (θ+1)(θ+2)/2 · e^{−(θ+1)t} and the coefficient
/// tail Σ_{n≥2} d_n(t) it is meant to dominate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErgodicPoint {
    pub t: f64,
    pub theta: f64,
    pub bound: f64,
    pub proxy: f64,
    pub holds: bool,
}

pub fn ergodic_bound(t: f64, theta: f64) -> Result<ErgodicPoint> {
    let tb = coalescent::tail_bound_check(t, theta)?;
    Ok(ErgodicPoint { t, theta, bound: tb.rhs, proxy: tb.lhs, holds: tb.ok })
}

/// Σ_{|η|=m} M_m(η) j_ζ(η̃/m; 1) against M_{|ζ|}(ζ).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeResult {
    pub zeta: Partition,
    pub m: usize,
    pub approx: f64,
    pub target: f64,
    pub gap: f64,
}

/// Weak-convergence probe at ϑ = 1 for every ζ of the given sizes at once:
/// one pass over level m evaluates all the test functions.
pub fn weak_convergence_probe_level(
    alg: &SymAlgebra,
    zm: &ZMeasure,
    zetas: &[Partition],
    m: usize,
) -> Result<Vec<ProbeResult>> {
    if !zm.params().vartheta().eq(&Rational::from_integer(1.into())) {
        return Err(Error::Parameter("the weak-convergence probe needs vartheta = 1".into()));
    }
    if m == 0 || m > MAX_PROBE_LEVEL {
        return Err(Error::Capacity { what: "probe level", value: m, max: MAX_PROBE_LEVEL });
    }
    let one = Rational::from_integer(1.into());
    let polys = zetas
        .iter()
        .map(|z| {
            if z.size() == 0 || z.size() > MAX_PROBE_ZETA {
                return Err(Error::Capacity { what: "probe test-function size", value: z.size(), max: MAX_PROBE_ZETA });
            }
            Ok(j_poly(alg, z, &one)?.to_f64())
        })
        .collect::<Result<Vec<_>>>()?;
    let level = zm.level(m)?;
    let sums = level
        .entries
        .par_iter()
        .map(|e| {
            let w = e.partition.scaled_frobenius()?;
            let phi: Vec<f64> = (0..=MAX_PROBE_ZETA).map(|k| if k == 0 { 0.0 } else { phi_power_sum(&w, 1.0, k) }).collect();
            Ok(polys.iter().map(|p| e.raw * p.eval_with(|i| phi[i])).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    zetas
        .iter()
        .enumerate()
        .map(|(i, zeta)| {
            let approx = neumaier(sums.iter().map(|row| row[i]));
            let target = zm.m_n_raw(zeta)?;
            Ok(ProbeResult { zeta: zeta.clone(), m, approx, target, gap: (approx - target).abs() })
        })
        .collect()
}

pub fn weak_convergence_probe(alg: &SymAlgebra, zm: &ZMeasure, zeta: &Partition, m: usize) -> Result<ProbeResult> {
    Ok(weak_convergence_probe_level(alg, zm, std::slice::from_ref(zeta), m)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::symfunc::schur_eval;
    use crate::symfunc::SymConfig;
    use crate::zmeasure::ZParams;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(z: f64, zp: f64, vartheta: Rational) -> (SymAlgebra, ZMeasure) {
        let alg = SymAlgebra::new(SymConfig::default());
        let params = ZParams::complementary(z, zp, vartheta.clone()).unwrap();
        let zm = ZMeasure::with_graph(params, alg.graph(&vartheta).unwrap()).unwrap();
        (alg, zm)
    }

    fn point(s: &str) -> ThomaPoint {
        s.parse().unwrap()
    }

    #[test]
    fn low_kernels_and_symmetry() {
        let (alg, zm) = setup(0.3, 0.7, int(1));
        let table = KernelTable::new(&alg, &zm, 6).unwrap();
        let (s, w) = (point("a=0.5,0.3;b=0.1"), point("a=0.7;b=0.2"));
        let k = table.kernels(&s, &w).unwrap();
        assert_eq!((k[0], k[1]), (1.0, 1.0));
        let back = table.kernels(&w, &s).unwrap();
        for n in 0..=6 {
            assert!((k[n] - back[n]).abs() <= 1e-12 * k[n].abs().max(1.0));
        }
        assert_eq!(kernel_k(&alg, &zm, 1, &s, &w).unwrap(), 1.0);
        assert!((kernel_k(&alg, &zm, 4, &s, &w).unwrap() - k[4]).abs() < 1e-12);
    }

    /// j_η at a point with finitely many α summing to 1 is dim(η) s_η(α).
    #[test]
    fn j_matches_schur_polynomials() {
        let (alg, zm) = setup(0.3, 0.7, int(1));
        let table = KernelTable::new(&alg, &zm, 5).unwrap();
        let a = [0.3, 0.25, 0.2, 0.15, 0.1];
        let w = ThomaPoint::new(a.to_vec(), vec![]).unwrap();
        let graph = alg.graph(&int(1)).unwrap();
        for (eta, j) in table.j_level(5, &w).unwrap() {
            let want = to_f64(&graph.dim(&eta)) * schur_eval(&eta, &a).unwrap();
            assert!((j - want).abs() < 1e-12, "{eta}");
        }
    }

    #[test]
    fn level_sums_of_j() {
        for vartheta in [int(1), Rational::new(1.into(), 2.into()), int(2)] {
            let alg = SymAlgebra::new(SymConfig::default());
            let params = ZParams::principal(Complex64::new(0.4, 0.9), vartheta.clone()).unwrap();
            let zm = ZMeasure::with_graph(params, alg.graph(&vartheta).unwrap()).unwrap();
            let table = KernelTable::new(&alg, &zm, 5).unwrap();
            let w = point("a=0.4,0.1;b=0.3");
            for n in 1..=5 {
                let total: f64 = table.j_level(n, &w).unwrap().iter().map(|(_, j)| j).sum();
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn g_vanishes_on_constant_kernels() {
        for theta in [0.5, 1.0, 2.0] {
            for m in 2..=10 {
                let g = g_from_kernels(m, &vec![1.0; m + 1], theta);
                assert!(g.abs() < 1e-9, "m = {m}: {g}");
            }
        }
        // G_2 = (θ+2)(θ+3)/2 · (K_2 − 1)
        let theta = 1.0;
        let g = g_from_kernels(2, &[1.0, 1.0, 1.7], theta);
        assert!((g - 6.0 * 0.7).abs() < 1e-12);
    }

    #[test]
    fn growth_envelope_covers_points() {
        let gs = vec![(2, 3.0), (3, -10.0), (4, 50.0), (5, 0.0), (6, 900.0)];
        let fit = GrowthFit::fit(&gs);
        assert_eq!(fit.points, 4);
        for (m, g) in gs {
            assert!(g.abs() <= fit.bound(m) * (1.0 + 1e-12));
        }
        assert!(fit.spectral_tail(6, 1.0, 1.0) > 0.0);
    }

    #[test]
    fn density_forms_agree_within_tails() {
        let alg = SymAlgebra::new(SymConfig::default());
        let params = ZParams::principal(Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3), int(1)).unwrap();
        let zm = ZMeasure::with_graph(params, alg.graph(&int(1)).unwrap()).unwrap();
        let table = KernelTable::for_truncation(&alg, &zm, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let s = ThomaPoint::sample(&mut rng, 3, 2);
            let w = ThomaPoint::sample(&mut rng, 3, 2);
            let ev = density(&table, 0.8, &s, &w, 8).unwrap();
            assert!(ev.consistent(), "{ev:?}");
            assert!(ev.value_mixture > -1e-8);
        }
    }

    #[test]
    fn ergodic_example() {
        let e = ergodic_bound(1.0, 1.0).unwrap();
        assert!((e.bound - 3.0 * (-2.0f64).exp()).abs() < 1e-15);
        let far = ergodic_bound(40.0, 1.0).unwrap();
        assert!(far.bound < 1e-30 && far.proxy < 1e-30);
    }

    #[test]
    fn probe_identities() {
        let (alg, zm) = setup(0.3, 0.7, int(1));
        let zetas: Vec<Partition> = ["1", "2", "1,1"].iter().map(|s| s.parse().unwrap()).collect();
        let r = weak_convergence_probe_level(&alg, &zm, &zetas, 10).unwrap();
        assert!((r[0].approx - 1.0).abs() < 1e-12 && (r[0].target - 1.0).abs() < 1e-12);
        assert!((r[1].approx + r[2].approx - 1.0).abs() < 1e-10);
        let params = ZParams::principal(Complex64::new(0.4, 0.9), int(2)).unwrap();
        let zm2 = ZMeasure::with_graph(params, alg.graph(&int(2)).unwrap()).unwrap();
        let alg2 = SymAlgebra::new(SymConfig::default());
        assert!(weak_convergence_probe(&alg2, &zm2, &zetas[1], 5).is_err());
    }
}
