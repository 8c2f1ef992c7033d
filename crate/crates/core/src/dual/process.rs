//! The dual jump process on the Young graph (ϑ = 1) and the identities
//! linking it to the diffusion.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::Serialize;

use crate::coalescent::{self, lambda, Precision};
use crate::error::{Error, Result};
use crate::graph::{BranchingGraph, GraphKind};
use crate::partition::{enumerate_partitions, subpartitions, Partition};
use crate::rational::{int, to_f64, Rational};
use crate::stats::EmpiricalCounts;
use crate::symfunc::SymAlgebra;
use crate::thoma::ThomaPoint;
use crate::zmeasure::{ZMeasure, ZParams};

use super::generator::{generator_apply, GeneratorParams};
use super::phi::PhiPoly;

/// Largest |η| for the exact duality residual.
pub const MAX_DUALITY_N: usize = 6;
/// Largest |η| for the sampling-distribution formula.
pub const MAX_EXPECTATION_N: usize = 8;

fn require_vartheta_one(params: &ZParams) -> Result<()> {
    if !params.vartheta().is_one() {
        return Err(Error::Parameter(format!(
            "the dual process is only available at vartheta = 1, got {}",
            params.vartheta()
        )));
    }
    Ok(())
}

/// A s°_η + λ_n s°_η − ½ Σ_{ζ ⊂ η} (z+c)(z′+c) s°_ζ, with c the content of
/// the box η/ζ. Zero exactly when the duality identity holds at η.
pub fn duality_residual(alg: &SymAlgebra, eta: &Partition, params: &ZParams) -> Result<PhiPoly<Rational>> {
    require_vartheta_one(params)?;
    let p = GeneratorParams::from_zparams_exact(params)?;
    duality_residual_with(alg, eta, &p)
}

/// Same identity with numeric coefficients, for spot checks in the principal case.
pub fn duality_residual_f64(alg: &SymAlgebra, eta: &Partition, params: &ZParams) -> Result<PhiPoly<f64>> {
    require_vartheta_one(params)?;
    let exact_schur = |x: &Partition| PhiPoly::schur(alg, x).map(|f| f.to_f64());
    let p = GeneratorParams::from_zparams(params);
    residual_generic(eta, &p, exact_schur)
}

fn duality_residual_with(
    alg: &SymAlgebra,
    eta: &Partition,
    p: &GeneratorParams<Rational>,
) -> Result<PhiPoly<Rational>> {
    residual_generic(eta, p, |x| PhiPoly::schur(alg, x))
}

fn residual_generic<S: crate::rational::Scalar>(
    eta: &Partition,
    p: &GeneratorParams<S>,
    schur: impl Fn(&Partition) -> Result<PhiPoly<S>>,
) -> Result<PhiPoly<S>> {
    if eta.size() > MAX_DUALITY_N {
        return Err(Error::Capacity { what: "duality partition size", value: eta.size(), max: MAX_DUALITY_N });
    }
    if eta.is_empty() {
        return Err(Error::Domain("the duality identity starts at |eta| = 1".into()));
    }
    let n = eta.size() as i64;
    let s_eta = schur(eta)?;
    let lam = S::from_i64(n) * (S::from_i64(n - 1) + p.theta.clone()) * S::from_rational(&Rational::new(1.into(), 2.into()));
    let mut residual = generator_apply(&s_eta, p)?.add(&s_eta.scale(&lam));
    let zz = p.theta.clone() * p.vartheta.clone();
    for (zeta, cell) in eta.cocovers() {
        let c = S::from_i64(cell.col as i64 - cell.row as i64);
        // (z+c)(z′+c) = zz′ + c(z+z′) + c²
        let ratio = zz.clone() + c.clone() * p.sum_z.clone() + c.clone() * c;
        let s_zeta = if zeta.is_empty() { PhiPoly::constant(S::one()) } else { schur(&zeta)? };
        let half = S::from_rational(&Rational::new(1.into(), 2.into()));
        residual = residual.sub(&s_zeta.scale(&(ratio * half)));
    }
    Ok(residual)
}

/// One row of a duality sweep.
#[derive(Clone, Debug, Serialize)]
pub struct DualityRow {
    pub partition: String,
    pub residual_terms: usize,
    pub zero: bool,
    /// The residual, one monomial per line (empty when zero).
    pub residual: String,
}

/// The exact residual for every η with 1 ≤ |η| ≤ max_n.
pub fn duality_sweep(alg: &SymAlgebra, max_n: usize, params: &ZParams) -> Result<Vec<DualityRow>> {
    require_vartheta_one(params)?;
    let p = GeneratorParams::from_zparams_exact(params)?;
    let etas: Vec<Partition> = (1..=max_n).flat_map(enumerate_partitions).collect();
    etas.par_iter()
        .map(|eta| {
            let r = duality_residual_with(alg, eta, &p)?;
            Ok(DualityRow {
                partition: eta.to_string(),
                residual_terms: r.len(),
                zero: r.is_zero(),
                residual: if r.is_zero() { String::new() } else { r.to_string() },
            })
        })
        .collect()
}

/// The state of the dual process at an observation time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualState {
    pub current: Partition,
    pub time: f64,
    /// Whether the path has reached (1).
    pub absorbed: bool,
    pub jumps: usize,
    /// Time of the first jump, if one happened before `time`.
    pub first_jump: Option<f64>,
}

/// How the mass that the uncollapsed level process sends to 0 is shown.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Collapse {
    /// d_m1 as displayed; the law has total mass 1 − d_m0.
    AsDisplayed,
    /// d̃_m1 = d_m0 + d_m1, the law of the process absorbed at (1).
    AbsorbedAtOne,
}

/// The dual jump process: at level n it waits Exp(λ_n) and then takes one
/// step of the Young-graph down chain. (1) is absorbing.
pub struct DualProcess {
    theta: f64,
    graph: Arc<BranchingGraph>,
}

impl DualProcess {
    pub fn new(theta: f64) -> Result<Self> {
        Self::with_graph(theta, Arc::new(BranchingGraph::new(GraphKind::young())))
    }

    pub fn with_graph(theta: f64, graph: Arc<BranchingGraph>) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::Parameter(format!("theta must be positive, got {theta}")));
        }
        if graph.kind() != &GraphKind::young() {
            return Err(Error::Parameter("the dual process lives on the Young graph".into()));
        }
        Ok(DualProcess { theta, graph })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn graph(&self) -> &Arc<BranchingGraph> {
        &self.graph
    }

    /// P(D_t = η | D_0 = ν) = d_mn(t) H(η, ν) for 1 ≤ |η| ≤ |ν| (uncollapsed).
    pub fn transition_prob(&self, nu: &Partition, eta: &Partition, t: f64) -> Result<f64> {
        if eta.is_empty() {
            return Err(Error::Domain("the transition law is indexed by |eta| >= 1".into()));
        }
        let h = self.graph.kernel_h(eta, nu)?;
        let d = coalescent::d_mn(t, nu.size(), eta.size(), self.theta)?;
        Ok(d * to_f64(&h))
    }

    /// The law at time t over all η ⊂ ν with |η| ≥ 1, in level order.
    pub fn law(&self, nu: &Partition, t: f64, collapse: Collapse) -> Result<Vec<(Partition, f64)>> {
        if nu.is_empty() {
            return Err(Error::Domain("the dual process starts at |nu| >= 1".into()));
        }
        let m = nu.size();
        let row = coalescent::coeff_row(t, m, self.theta, Precision::Auto)?;
        let mut out = Vec::new();
        for level in subpartitions(nu).into_iter().skip(1) {
            for eta in level {
                let mut d = row.values[eta.size()];
                if eta.size() == 1 && collapse == Collapse::AbsorbedAtOne {
                    d += row.values[0];
                }
                let h = self.graph.kernel_h(&eta, nu)?;
                out.push((eta, d * to_f64(&h)));
            }
        }
        Ok(out)
    }

    fn down_tables(&self, nu: &Partition) -> Result<HashMap<Partition, Vec<(Partition, f64)>>> {
        let mut tables = HashMap::new();
        for level in subpartitions(nu).into_iter().skip(2) {
            for zeta in level {
                let row = self.graph.down_prob(&zeta)?;
                let mut acc = 0.0;
                let cumulative = row
                    .into_iter()
                    .map(|(eta, p)| {
                        acc += to_f64(&p);
                        (eta, acc)
                    })
                    .collect();
                tables.insert(zeta, cumulative);
            }
        }
        Ok(tables)
    }

    fn run<R: Rng + ?Sized>(
        &self,
        nu: &Partition,
        t: f64,
        tables: &HashMap<Partition, Vec<(Partition, f64)>>,
        rng: &mut R,
    ) -> DualState {
        let mut current = nu.clone();
        let mut clock = 0.0;
        let mut jumps = 0;
        let mut first_jump = None;
        while current.size() > 1 {
            let hold = Exp::new(lambda(current.size(), self.theta)).expect("positive rate").sample(rng);
            clock += hold;
            if clock > t {
                break;
            }
            first_jump.get_or_insert(clock);
            let row = &tables[&current];
            let u: f64 = rng.random::<f64>() * row.last().expect("nonempty row").1;
            current = row.iter().find(|(_, c)| u < *c).unwrap_or(row.last().unwrap()).0.clone();
            jumps += 1;
        }
        let absorbed = current.size() == 1;
        DualState { current, time: t, absorbed, jumps, first_jump }
    }

    /// One path from ν observed at time t.
    pub fn simulate<R: Rng + ?Sized>(&self, nu: &Partition, t: f64, rng: &mut R) -> Result<DualState> {
        self.check_start(nu, t)?;
        let tables = self.down_tables(nu)?;
        Ok(self.run(nu, t, &tables, rng))
    }

    fn check_start(&self, nu: &Partition, t: f64) -> Result<()> {
        if nu.is_empty() {
            return Err(Error::Domain("the dual process starts at |nu| >= 1".into()));
        }
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
        }
        Ok(())
    }

    /// `paths` independent paths, in parallel chunks with their own
    /// ChaCha8 streams, reduced to final-state counts.
    pub fn simulate_many(&self, nu: &Partition, t: f64, paths: u64, seed: u64) -> Result<EmpiricalCounts> {
        Ok(self.simulate_states(nu, t, paths, seed)?.0)
    }

    /// Final-state counts and the sum and sum of squares of first-jump
    /// times over the paths that jumped.
    pub fn simulate_states(&self, nu: &Partition, t: f64, paths: u64, seed: u64) -> Result<(EmpiricalCounts, JumpStats)> {
        self.check_start(nu, t)?;
        let tables = self.down_tables(nu)?;
        const CHUNK: u64 = 1 << 13;
        let chunks = paths.div_ceil(CHUNK);
        let parts: Vec<(EmpiricalCounts, JumpStats)> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c);
                let mut counts = EmpiricalCounts::new();
                let mut stats = JumpStats::default();
                for _ in 0..CHUNK.min(paths - c * CHUNK) {
                    let s = self.run(nu, t, &tables, &mut rng);
                    counts.record(&s.current);
                    if let Some(j) = s.first_jump {
                        stats.count += 1;
                        stats.sum += j;
                        stats.sum_sq += j * j;
                    }
                }
                (counts, stats)
            })
            .collect();
        Ok(parts.into_iter().fold((EmpiricalCounts::new(), JumpStats::default()), |(a, s), (b, r)| {
            (a.merge(b), JumpStats { count: s.count + r.count, sum: s.sum + r.sum, sum_sq: s.sum_sq + r.sum_sq })
        }))
    }
}

/// First-jump moments over a batch of paths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct JumpStats {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl JumpStats {
    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        let n = self.count as f64;
        let var = (self.sum_sq / n - self.mean().powi(2)).max(0.0);
        (var / n).sqrt()
    }
}

/// E[j_η(Y_t;1) | Y_0 = ω]
///   = M(η) [d_m1(t) + Σ_{n=2}^m d_mn(t) Σ_{ζ⊂η, |ζ|=n} H(ζ,η) j_ζ(ω)/M(ζ)],
/// where H(ζ, η) is the probability that the down chain from η reaches ζ.
/// `collapse` decides whether d_m1 is taken as displayed or as d̃_m1.
pub fn expected_j_given_start(
    alg: &SymAlgebra,
    zm: &ZMeasure,
    eta: &Partition,
    omega: &ThomaPoint,
    t: f64,
    collapse: Collapse,
) -> Result<f64> {
    require_vartheta_one(zm.params())?;
    let m = eta.size();
    if m == 0 || m > MAX_EXPECTATION_N {
        return Err(Error::Capacity { what: "expectation partition size", value: m, max: MAX_EXPECTATION_N });
    }
    let one = int(1);
    let graph = alg.graph(&one)?;
    let row = coalescent::coeff_row(t, m, zm.params().theta(), Precision::Auto)?;
    let mass = |x: &Partition| -> Result<f64> {
        let v = zm.m_n_raw(x)?;
        if v == 0.0 {
            return Err(Error::Parameter(format!("M({x}) = 0")));
        }
        Ok(v)
    };
    let mut bracket = row.values[1];
    if collapse == Collapse::AbsorbedAtOne {
        bracket += row.values[0];
    }
    for level in subpartitions(eta).into_iter().skip(2) {
        for zeta in level {
            let h = graph.kernel_h(&zeta, eta)?;
            if h.is_zero() {
                continue;
            }
            let j = alg.j_eval(&zeta, omega, &one)?;
            bracket += row.values[zeta.size()] * to_f64(&h) * j / mass(&zeta)?;
        }
    }
    Ok(mass(eta)? * bracket)
}
