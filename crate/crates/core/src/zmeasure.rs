//! The Z-measures M_n^{z,z′,ϑ} on the Jack graph and the up / up-down chains.
//!
//! M_n(η) = dim(η) (z)_η (z′)_η / (θ_(n) H′(η;ϑ)), θ = zz′/ϑ, where
//! (z)_η = Π_{(i,j)∈η} (z + (j−1) − (i−1)ϑ) and dimensions come from the
//! graph recursion.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{hook_products, BranchingGraph, GraphKind};
use crate::partition::{enumerate_partitions, Partition};
use crate::rational::{format_rational, int, to_f64, Rational};
use crate::stats::EmpiricalCounts;

const IMAG_TOL: f64 = 1e-12;
const LATTICE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ParamCase {
    /// z′ = z̄ with z off Z≤0 + ϑZ≥0.
    Principal,
    /// ϑ rational and z, z′ real, strictly between two consecutive points of Z + ϑZ.
    Complementary,
}

/// Exact parameter values, when they are available.
#[derive(Clone, Debug, PartialEq, Eq)]
enum ExactZ {
    Conjugate { re: Rational, im: Rational },
    Real { z: Rational, zprime: Rational },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZParams {
    z: Complex64,
    zprime: Complex64,
    vartheta: Rational,
    theta: f64,
    case: ParamCase,
    exact: Option<ExactZ>,
}

/// Is x ∈ Z≤0 + ϑZ≥0 (within tolerance)?
fn on_principal_lattice(x: f64, vartheta: &Rational) -> bool {
    let t = to_f64(vartheta);
    // b ≥ 0 with ϑb − x = a ∈ Z≥0; ϑb mod 1 has period q = denom(ϑ)
    let q = u64::try_from(vartheta.denom()).unwrap_or(u64::MAX).min(1_000_000);
    let b0 = (x / t).ceil().max(0.0) as u64;
    (b0..b0 + q + 1).any(|b| {
        let a = t * b as f64 - x;
        a > -LATTICE_TOL && (a - a.round()).abs() < LATTICE_TOL
    })
}

/// Index k with x ∈ (k/q, (k+1)/q), or None on a lattice point.
fn complementary_cell(x: f64, vartheta: &Rational) -> Option<i64> {
    let q: f64 = to_f64(&Rational::from_integer(vartheta.denom().clone()));
    let s = x * q;
    if (s - s.round()).abs() < LATTICE_TOL {
        return None;
    }
    Some(s.floor() as i64)
}

impl ZParams {
    /// Principal case: z′ = z̄.
    pub fn principal(z: Complex64, vartheta: Rational) -> Result<Self> {
        GraphKind::jack(vartheta.clone())?;
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Parameter("z must be finite".into()));
        }
        if z.im.abs() < LATTICE_TOL && on_principal_lattice(z.re, &vartheta) {
            return Err(Error::Parameter(format!(
                "z = {} lies in Z<=0 + vartheta Z>=0",
                z.re
            )));
        }
        Self::finish(z, z.conj(), vartheta, ParamCase::Principal, None)
    }

    /// Principal case with exact rational real and imaginary parts.
    pub fn principal_exact(re: Rational, im: Rational, vartheta: Rational) -> Result<Self> {
        let z = Complex64::new(to_f64(&re), to_f64(&im));
        let mut p = Self::principal(z, vartheta)?;
        p.exact = Some(ExactZ::Conjugate { re, im });
        Ok(p)
    }

    /// Complementary case: real z, z′ in one open lattice cell of Z + ϑZ.
    pub fn complementary(z: f64, zprime: f64, vartheta: Rational) -> Result<Self> {
        GraphKind::jack(vartheta.clone())?;
        let cz = complementary_cell(z, &vartheta);
        let czp = complementary_cell(zprime, &vartheta);
        match (cz, czp) {
            (Some(a), Some(b)) if a == b => {}
            _ => {
                return Err(Error::Parameter(format!(
                    "z = {z} and z' = {zprime} are not inside one interval between consecutive points of Z + vartheta Z"
                )))
            }
        }
        Self::finish(
            Complex64::new(z, 0.0),
            Complex64::new(zprime, 0.0),
            vartheta,
            ParamCase::Complementary,
            None,
        )
    }

    pub fn complementary_exact(z: Rational, zprime: Rational, vartheta: Rational) -> Result<Self> {
        let mut p = Self::complementary(to_f64(&z), to_f64(&zprime), vartheta)?;
        p.exact = Some(ExactZ::Real { z, zprime });
        Ok(p)
    }

    /// Picks the case from the values: principal when z′ = z̄ (and z is
    /// admissible), complementary otherwise.
    pub fn new(z: Complex64, zprime: Complex64, vartheta: Rational) -> Result<Self> {
        if (zprime - z.conj()).norm() <= LATTICE_TOL * (1.0 + z.norm()) {
            if let Ok(p) = Self::principal(z, vartheta.clone()) {
                return Ok(p);
            }
        }
        if z.im.abs() < LATTICE_TOL && zprime.im.abs() < LATTICE_TOL {
            return Self::complementary(z.re, zprime.re, vartheta);
        }
        Err(Error::Parameter(format!(
            "(z, z') = ({z}, {zprime}) is neither a principal nor a complementary pair"
        )))
    }

    /// Like [`ZParams::new`] for real rational inputs, keeping exact values.
    pub fn new_exact_real(z: Rational, zprime: Rational, vartheta: Rational) -> Result<Self> {
        if z == zprime {
            if let Ok(p) = Self::principal_exact(z.clone(), Rational::zero(), vartheta.clone()) {
                return Ok(p);
            }
        }
        Self::complementary_exact(z, zprime, vartheta)
    }

    fn finish(
        z: Complex64,
        zprime: Complex64,
        vartheta: Rational,
        case: ParamCase,
        exact: Option<ExactZ>,
    ) -> Result<Self> {
        let zz = z * zprime;
        let theta = zz.re / to_f64(&vartheta);
        if zz.im.abs() > IMAG_TOL * zz.norm().max(1.0) || !(theta > 0.0) {
            return Err(Error::Parameter(format!("theta = zz'/vartheta = {zz}/vartheta is not positive")));
        }
        Ok(ZParams { z, zprime, vartheta, theta, case, exact })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn zprime(&self) -> Complex64 {
        self.zprime
    }

    pub fn vartheta(&self) -> &Rational {
        &self.vartheta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn case(&self) -> ParamCase {
        self.case
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// θ as an exact rational, when the parameters are exact.
    pub fn theta_exact(&self) -> Option<Rational> {
        let zz = match self.exact.as_ref()? {
            ExactZ::Conjugate { re, im } => re * re + im * im,
            ExactZ::Real { z, zprime } => z * zprime,
        };
        Some(zz / &self.vartheta)
    }

    /// z + z′ as an exact rational, when the parameters are exact.
    pub fn sum_z_exact(&self) -> Option<Rational> {
        Some(match self.exact.as_ref()? {
            ExactZ::Conjugate { re, .. } => re * int(2),
            ExactZ::Real { z, zprime } => z + zprime,
        })
    }

    /// (z)_η (z′)_η exactly.
    fn pochhammer_pair_exact(&self, eta: &Partition) -> Option<Rational> {
        let exact = self.exact.as_ref()?;
        let mut acc = Rational::one();
        for cell in eta.cells() {
            let c = int(cell.col as i64 - 1) - int(cell.row as i64 - 1) * &self.vartheta;
            acc *= match exact {
                ExactZ::Conjugate { re, im } => {
                    let x = re + &c;
                    &x * &x + im * im
                }
                ExactZ::Real { z, zprime } => (z + &c) * (zprime + &c),
            };
        }
        Some(acc)
    }
}

impl fmt::Display for ZParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "z={}, z'={}, vartheta={}, theta={}, {:?}",
            self.z,
            self.zprime,
            format_rational(&self.vartheta),
            self.theta,
            self.case
        )
    }
}

/// (z)_{η;ϑ} = Π_{(i,j)∈η} (z + (j−1) − (i−1)ϑ).
pub fn z_pochhammer(z: Complex64, eta: &Partition, vartheta: f64) -> Complex64 {
    eta.cells()
        .map(|c| z + (c.col as f64 - 1.0) - (c.row as f64 - 1.0) * vartheta)
        .product()
}

/// θ_(n) = θ(θ+1)…(θ+n−1).
pub fn theta_rising(theta: f64, n: usize) -> f64 {
    (0..n).map(|i| theta + i as f64).product()
}

/// One row of a level table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelEntry {
    pub partition: Partition,
    pub raw: f64,
    pub normalized: f64,
}

/// M_n on a whole level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelTable {
    pub n: usize,
    pub entries: Vec<LevelEntry>,
    /// Σ_η raw M_n(η).
    pub raw_total: f64,
}

impl LevelTable {
    pub fn raw_pairs(&self) -> Vec<(Partition, f64)> {
        self.entries.iter().map(|e| (e.partition.clone(), e.raw)).collect()
    }

    pub fn normalized_pairs(&self) -> Vec<(Partition, f64)> {
        self.entries.iter().map(|e| (e.partition.clone(), e.normalized)).collect()
    }

    pub fn get(&self, eta: &Partition) -> Option<&LevelEntry> {
        self.entries.iter().find(|e| e.partition == *eta)
    }
}

/// Options for [`ZMeasure::updown_simulate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpDownConfig {
    /// Recorded steps, split evenly across chains.
    pub steps: u64,
    /// Discarded steps at the start of every chain.
    pub burn_in: u64,
    /// Independent chains, each on its own ChaCha stream.
    pub chains: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct UpDownRun {
    pub n: usize,
    pub counts: EmpiricalCounts,
    /// TV distance of the empirical law to the normalized M_n.
    pub tv_distance: f64,
    /// Every visited state had size n.
    pub level_preserved: bool,
}

/// Cumulative table for sampling from a finite law.
#[derive(Clone, Debug)]
struct Sampler {
    states: Vec<Partition>,
    cumulative: Vec<f64>,
}

impl Sampler {
    fn new(law: Vec<(Partition, f64)>) -> Self {
        let mut acc = 0.0;
        let mut states = Vec::with_capacity(law.len());
        let mut cumulative = Vec::with_capacity(law.len());
        for (p, w) in law {
            acc += w;
            states.push(p);
            cumulative.push(acc);
        }
        Sampler { states, cumulative }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &Partition {
        let total = *self.cumulative.last().expect("nonempty law");
        let u = rng.random::<f64>() * total;
        let i = self.cumulative.partition_point(|&c| c <= u).min(self.states.len() - 1);
        &self.states[i]
    }
}

/// A Z-measure family together with its graph and level caches.
#[derive(Debug)]
pub struct ZMeasure {
    params: ZParams,
    graph: Arc<BranchingGraph>,
    levels: RwLock<HashMap<usize, Arc<LevelTable>>>,
}

impl ZMeasure {
    pub fn new(params: ZParams) -> Self {
        let graph = Arc::new(BranchingGraph::new(GraphKind::Jack(params.vartheta.clone())));
        ZMeasure { params, graph, levels: RwLock::new(HashMap::new()) }
    }

    /// Shares an existing Jack graph; its ϑ must match.
    pub fn with_graph(params: ZParams, graph: Arc<BranchingGraph>) -> Result<Self> {
        if *graph.kind() != GraphKind::Jack(params.vartheta.clone()) {
            return Err(Error::Parameter("graph parameter does not match vartheta".into()));
        }
        Ok(ZMeasure { params, graph, levels: RwLock::new(HashMap::new()) })
    }

    pub fn params(&self) -> &ZParams {
        &self.params
    }

    pub fn graph(&self) -> &Arc<BranchingGraph> {
        &self.graph
    }

    /// Raw M_n(η) as a complex number before the real-part check.
    fn m_complex(&self, eta: &Partition) -> Complex64 {
        let t = to_f64(&self.params.vartheta);
        let dim = to_f64(&self.graph.dim(eta));
        let hp = to_f64(&hook_products(eta, &self.params.vartheta).h_prime);
        let pair = z_pochhammer(self.params.z, eta, t) * z_pochhammer(self.params.zprime, eta, t);
        pair * dim / (theta_rising(self.params.theta, eta.size()) * hp)
    }

    /// Raw M_n(η) with the imaginary residue checked.
    pub fn m_n_raw(&self, eta: &Partition) -> Result<f64> {
        let v = self.m_complex(eta);
        if v.im.abs() > IMAG_TOL * v.re.abs().max(f64::MIN_POSITIVE) && v.im.abs() > 1e-300 {
            return Err(Error::Consistency(format!(
                "M({eta:?}) has imaginary part {} against real part {}",
                v.im, v.re
            )));
        }
        Ok(v.re)
    }

    /// Raw M_n(η) in exact arithmetic (requires exact parameters).
    pub fn m_n_exact(&self, eta: &Partition) -> Result<Rational> {
        let pair = self
            .params
            .pochhammer_pair_exact(eta)
            .ok_or_else(|| Error::Parameter("exact masses need rational parameters".into()))?;
        let theta = self.params.theta_exact().expect("exact params give exact theta");
        let mut rising = Rational::one();
        for i in 0..eta.size() {
            rising *= &theta + int(i as i64);
        }
        let hp = hook_products(eta, &self.params.vartheta).h_prime;
        Ok(self.graph.dim(eta) * pair / (rising * hp))
    }

    /// Raw and level-normalized masses on level n.
    pub fn level(&self, n: usize) -> Result<Arc<LevelTable>> {
        if let Some(t) = self.levels.read().unwrap().get(&n) {
            return Ok(Arc::clone(t));
        }
        let level = enumerate_partitions(n);
        let raws = level.iter().map(|eta| self.m_n_raw(eta)).collect::<Result<Vec<_>>>()?;
        let raw_total: f64 = raws.iter().sum();
        let entries = level
            .into_iter()
            .zip(raws)
            .map(|(partition, raw)| LevelEntry { partition, raw, normalized: raw / raw_total })
            .collect();
        let table = Arc::new(LevelTable { n, entries, raw_total });
        self.levels.write().unwrap().insert(n, Arc::clone(&table));
        Ok(table)
    }

    /// M_n(η) as (raw, normalized).
    pub fn m_n(&self, eta: &Partition) -> Result<(f64, f64)> {
        let table = self.level(eta.size())?;
        let e = table.get(eta).expect("level contains every partition of its size");
        Ok((e.raw, e.normalized))
    }

    /// p↑(η, ζ) = χ(η,ζ) M_{n+1}(ζ) dim(η) / (M_n(η) dim(ζ)).
    pub fn up_prob(&self, eta: &Partition) -> Result<Vec<(Partition, f64)>> {
        let m = self.m_n_raw(eta)?;
        if m == 0.0 {
            return Err(Error::Domain(format!("M({eta:?}) = 0, no up transition")));
        }
        let dim_eta = to_f64(&self.graph.dim(eta));
        let mut out = Vec::new();
        let mut total = 0.0;
        for (zeta, _) in eta.covers() {
            let chi = to_f64(&self.graph.edge_weight(eta, &zeta)?);
            let p = chi * self.m_n_raw(&zeta)? * dim_eta / (m * to_f64(&self.graph.dim(&zeta)));
            total += p;
            out.push((zeta, p));
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Consistency(format!(
                "up probabilities from {eta:?} sum to {total}"
            )));
        }
        Ok(out)
    }

    /// Exact p↑ (requires exact parameters); the sum to one is asserted.
    pub fn up_prob_exact(&self, eta: &Partition) -> Result<Vec<(Partition, Rational)>> {
        let m = self.m_n_exact(eta)?;
        if m.is_zero() {
            return Err(Error::Domain(format!("M({eta:?}) = 0, no up transition")));
        }
        let dim_eta = self.graph.dim(eta);
        let mut out = Vec::new();
        let mut total = Rational::zero();
        for (zeta, _) in eta.covers() {
            let chi = self.graph.edge_weight(eta, &zeta)?;
            let p = chi * self.m_n_exact(&zeta)? * &dim_eta / (&m * self.graph.dim(&zeta));
            total += &p;
            out.push((zeta, p));
        }
        if !total.is_one() {
            return Err(Error::Consistency(format!(
                "exact up probabilities from {eta:?} sum to {}",
                format_rational(&total)
            )));
        }
        Ok(out)
    }

    /// One up move followed by one down move.
    pub fn updown_step<R: Rng + ?Sized>(&self, eta: &Partition, rng: &mut R) -> Result<Partition> {
        let up = Sampler::new(self.up_prob(eta)?);
        let zeta = up.sample(rng).clone();
        let down = self
            .graph
            .down_prob(&zeta)?
            .into_iter()
            .map(|(p, r)| (p, to_f64(&r)))
            .collect();
        Ok(Sampler::new(down).sample(rng).clone())
    }

    /// Up-down transition matrix on level n, states in canonical order.
    pub fn updown_matrix(&self, n: usize) -> Result<(Vec<Partition>, Vec<Vec<f64>>)> {
        let states = enumerate_partitions(n);
        let index: HashMap<&Partition, usize> = states.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut mat = vec![vec![0.0; states.len()]; states.len()];
        for (i, eta) in states.iter().enumerate() {
            for (zeta, pu) in self.up_prob(eta)? {
                for (back, pd) in self.graph.down_prob(&zeta)? {
                    mat[i][index[&back]] += pu * to_f64(&pd);
                }
            }
        }
        Ok((states, mat))
    }

    /// Exact up-down transition matrix on level n.
    pub fn updown_matrix_exact(&self, n: usize) -> Result<(Vec<Partition>, Vec<Vec<Rational>>)> {
        let states = enumerate_partitions(n);
        let index: HashMap<&Partition, usize> = states.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut mat = vec![vec![Rational::zero(); states.len()]; states.len()];
        for (i, eta) in states.iter().enumerate() {
            for (zeta, pu) in self.up_prob_exact(eta)? {
                for (back, pd) in self.graph.down_prob(&zeta)? {
                    mat[i][index[&back]] += &pu * pd;
                }
            }
        }
        Ok((states, mat))
    }

    /// Detailed balance M(η)P(η,η′) = M(η′)P(η′,η) on level n, exactly.
    pub fn is_reversible_exact(&self, n: usize) -> Result<bool> {
        let (states, mat) = self.updown_matrix_exact(n)?;
        let m = states.iter().map(|s| self.m_n_exact(s)).collect::<Result<Vec<_>>>()?;
        for i in 0..states.len() {
            for j in i + 1..states.len() {
                if &m[i] * &mat[i][j] != &m[j] * &mat[j][i] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Largest |M_n(η) − Σ_ζ p↓(ζ,η) M_{n+1}(ζ)| over level n (raw masses).
    pub fn coherence_defect(&self, n: usize) -> Result<f64> {
        let mut acc: HashMap<Partition, f64> = HashMap::new();
        for zeta in enumerate_partitions(n + 1) {
            let m = self.m_n_raw(&zeta)?;
            for (eta, p) in self.graph.down_prob(&zeta)? {
                *acc.entry(eta).or_insert(0.0) += to_f64(&p) * m;
            }
        }
        let mut worst: f64 = 0.0;
        for eta in enumerate_partitions(n) {
            worst = worst.max((self.m_n_raw(&eta)? - acc.get(&eta).copied().unwrap_or(0.0)).abs());
        }
        Ok(worst)
    }

    /// Runs `config.chains` independent up-down chains on level n, each
    /// started at the one-row partition, and pools the visited states.
    pub fn updown_simulate(&self, n: usize, config: UpDownConfig, seed: u64) -> Result<UpDownRun> {
        if n == 0 {
            return Err(Error::Domain("up-down chain needs level n >= 1".into()));
        }
        let chains = config.chains.max(1);
        let table = self.level(n)?;
        // transition samplers, built once and shared read-only
        let states = enumerate_partitions(n);
        let mut up: HashMap<Partition, Sampler> = HashMap::new();
        for eta in &states {
            up.insert(eta.clone(), Sampler::new(self.up_prob(eta)?));
        }
        let mut down: HashMap<Partition, Sampler> = HashMap::new();
        for zeta in enumerate_partitions(n + 1) {
            let law = self.graph.down_prob(&zeta)?.into_iter().map(|(p, r)| (p, to_f64(&r))).collect();
            down.insert(zeta, Sampler::new(law));
        }
        let per_chain = config.steps / chains;
        let extra = config.steps % chains;
        let results: Vec<(EmpiricalCounts, bool)> = (0..chains)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c);
                let mut state = Partition::from_unsorted(vec![n]);
                let mut counts = EmpiricalCounts::new();
                let mut preserved = true;
                let steps = per_chain + u64::from(c < extra);
                for k in 0..config.burn_in + steps {
                    let zeta = up[&state].sample(&mut rng);
                    state = down[zeta].sample(&mut rng).clone();
                    preserved &= state.size() == n;
                    if k >= config.burn_in {
                        counts.record(&state);
                    }
                }
                (counts, preserved)
            })
            .collect();
        let mut counts = EmpiricalCounts::new();
        let mut level_preserved = true;
        for (c, ok) in results {
            counts = counts.merge(c);
            level_preserved &= ok;
        }
        let tv_distance = counts.tv_distance(&table.normalized_pairs());
        Ok(UpDownRun { n, counts, tv_distance, level_preserved })
    }
}

/// Stationary row vector of an exact stochastic matrix: π P = π, Σπ = 1.
pub fn stationary_exact(p: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    let n = p.len();
    // rows of (P − I)ᵀ, last equation replaced by Σπ = 1
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n)
                .map(|j| if i == j { &p[j][i] - Rational::one() } else { p[j][i].clone() })
                .collect();
            row.push(Rational::zero());
            row
        })
        .collect();
    if n == 0 {
        return Ok(Vec::new());
    }
    a[n - 1] = vec![Rational::one(); n + 1];
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Consistency("stationary system is singular".into()))?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn comp(z: f64, zp: f64, t: Rational) -> ZMeasure {
        ZMeasure::new(ZParams::complementary(z, zp, t).unwrap())
    }

    #[test]
    fn pochhammer_examples() {
        let z = Complex64::new(0.7, 0.2);
        assert_eq!(z_pochhammer(z, &Partition::empty(), 2.0), Complex64::new(1.0, 0.0));
        let t = 2.0;
        let want = z * (z + 1.0) * (z - t);
        assert!((z_pochhammer(z, &p("2,1"), t) - want).norm() < 1e-15);
        for n in 0..=6 {
            for eta in enumerate_partitions(n) {
                let v = z_pochhammer(z, &eta, t) * z_pochhammer(z.conj(), &eta, t);
                assert!(v.re > 0.0 && v.im.abs() < 1e-12 * v.re);
            }
        }
    }

    #[test]
    fn parameter_validation() {
        let one = Rational::one();
        assert!(ZParams::principal(Complex64::new(0.0, 0.0), one.clone()).is_err());
        assert!(ZParams::principal(Complex64::new(-2.0, 0.0), one.clone()).is_err());
        // 1/2 = −1 + 3·(1/2) lies on Z≤0 + ϑZ≥0 for ϑ = 1/2
        assert!(ZParams::principal(Complex64::new(0.5, 0.0), ratio(1, 2)).is_err());
        assert!(ZParams::principal(Complex64::new(0.5, 0.0), one.clone()).is_ok());
        assert!(ZParams::principal(Complex64::new(0.5, 1.0), one.clone()).is_ok());
        assert!(ZParams::complementary(0.3, 0.7, one.clone()).is_ok());
        assert!(ZParams::complementary(0.3, 1.7, one.clone()).is_err());
        assert!(ZParams::complementary(0.3, 0.7, ratio(1, 2)).is_err());
        assert!(ZParams::complementary(0.1, 0.4, ratio(1, 2)).is_ok());
        assert!(ZParams::complementary(-0.3, -0.7, one.clone()).is_ok());
        assert!(ZParams::principal(Complex64::new(1.0, 0.0), int(0)).is_err());
        let auto = ZParams::new(Complex64::new(0.3, 0.0), Complex64::new(0.7, 0.0), one.clone()).unwrap();
        assert_eq!(auto.case(), ParamCase::Complementary);
        assert!((auto.theta() - 0.21).abs() < 1e-15);
        let auto = ZParams::new(Complex64::new(0.3, 1.0), Complex64::new(0.3, -1.0), one).unwrap();
        assert_eq!(auto.case(), ParamCase::Principal);
    }

    #[test]
    fn first_levels() {
        for t in [int(1), int(2), ratio(1, 2)] {
            let z = ZMeasure::new(ZParams::principal(Complex64::new(0.4, 1.3), t).unwrap());
            assert!((z.m_n_raw(&p("1")).unwrap() - 1.0).abs() < 1e-14);
        }
        let z = comp(0.3, 0.7, int(1));
        let total = z.m_n_raw(&p("2")).unwrap() + z.m_n_raw(&p("1,1")).unwrap();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn level_totals_at_vartheta_one() {
        let z = ZMeasure::new(ZParams::principal(Complex64::new(0.5, 0.8), int(1)).unwrap());
        for n in 1..=12 {
            let table = z.level(n).unwrap();
            assert!((table.raw_total - 1.0).abs() < 1e-10, "n = {n}: {}", table.raw_total);
            assert!(table.entries.iter().all(|e| e.raw >= 0.0 && (e.raw - e.normalized).abs() < 1e-10));
        }
    }

    #[test]
    fn exact_masses_sum_to_one() {
        for t in [int(1), int(2), ratio(1, 2)] {
            let params = ZParams::principal_exact(ratio(1, 3), ratio(2, 3), t.clone()).unwrap();
            let z = ZMeasure::new(params);
            for n in 1..=7 {
                let total: Rational = enumerate_partitions(n).iter().map(|e| z.m_n_exact(e).unwrap()).sum();
                assert!(total.is_one(), "vartheta {t}, n {n}: {total}");
            }
        }
    }

    #[test]
    fn up_prob_examples() {
        let z = comp(0.3, 0.7, int(1));
        let up = z.up_prob(&Partition::empty()).unwrap();
        assert_eq!(up.len(), 1);
        assert!((up[0].1 - 1.0).abs() < 1e-15);
        let up = z.up_prob(&p("1")).unwrap();
        let (m2, m11) = (z.m_n_raw(&p("2")).unwrap(), z.m_n_raw(&p("1,1")).unwrap());
        assert!((up[0].1 / up[1].1 - m2 / m11).abs() < 1e-12);
        for t in [int(1), int(2), ratio(1, 2)] {
            let z = ZMeasure::new(ZParams::principal(Complex64::new(-0.2, 0.9), t).unwrap());
            for n in 0..=8 {
                for eta in enumerate_partitions(n) {
                    z.up_prob(&eta).unwrap();
                }
            }
        }
    }

    #[test]
    fn coherence() {
        for t in [int(1), int(2), ratio(1, 2)] {
            let z = ZMeasure::new(ZParams::principal(Complex64::new(0.6, 0.5), t).unwrap());
            for n in 1..=9 {
                assert!(z.coherence_defect(n).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn updown_stationary_and_reversible() {
        let params = ZParams::complementary_exact(ratio(3, 10), ratio(7, 10), int(1)).unwrap();
        let z = ZMeasure::new(params);
        let (states, mat) = z.updown_matrix_exact(3).unwrap();
        let pi = stationary_exact(&mat).unwrap();
        for (s, v) in states.iter().zip(&pi) {
            assert_eq!(*v, z.m_n_exact(s).unwrap());
        }
        for n in 1..=6 {
            assert!(z.is_reversible_exact(n).unwrap());
        }
    }

    #[test]
    fn simulation_preserves_level_and_is_reproducible() {
        let z = comp(0.3, 0.7, int(1));
        let cfg = UpDownConfig { steps: 10_000, burn_in: 100, chains: 4 };
        let a = z.updown_simulate(4, cfg, 11).unwrap();
        let b = z.updown_simulate(4, cfg, 11).unwrap();
        assert!(a.level_preserved);
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.counts.total(), 10_000);
        assert!(a.tv_distance < 0.05);
    }
}
