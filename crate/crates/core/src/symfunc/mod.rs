//! Graded symmetric functions at bounded degree.
//!
//! Degree-d computations run in exactly d variables, which is inside the
//! stable range, so the results are the symmetric functions themselves.
//! [`SymAlgebra`] owns the (lazily filled, lock-protected) transition
//! tables and Jack expansions.

mod jack;
mod multipoly;
mod tables;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BranchingGraph, GraphKind};
use crate::partition::{enumerate_partitions, Partition};
use crate::rational::{format_rational, to_f64, Rational, Scalar};
use crate::thoma::ThomaPoint;

pub use jack::{jack_p_expansion, t_apply_monomial, t_diagonal, t_off_diagonal};
pub use multipoly::{monomial_eval, schur_eval, sekiguchi_apply, MultiPoly, SEKIGUCHI_MAX_VARS};

use tables::{add_into, Expansion, Kostka};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Monomial,
    PowerSum,
    Schur,
    /// Jack P-functions (leading monomial coefficient 1).
    JackP(Rational),
    /// Jack functions J_η normalized through p_1 J_η = Σ χ(η,ν) J_ν.
    JackPaper(Rational),
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Monomial => write!(f, "m"),
            Basis::PowerSum => write!(f, "p"),
            Basis::Schur => write!(f, "s"),
            Basis::JackP(t) => write!(f, "P[{}]", format_rational(t)),
            Basis::JackPaper(t) => write!(f, "J[{}]", format_rational(t)),
        }
    }
}

/// A symmetric function as a sparse combination of basis elements.
/// Keys may have different sizes; `degree` is the largest one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSymPoly {
    degree: usize,
    basis: Basis,
    coeffs: BTreeMap<Partition, Rational>,
}

impl GradedSymPoly {
    pub fn zero(basis: Basis) -> Self {
        GradedSymPoly { degree: 0, basis, coeffs: BTreeMap::new() }
    }

    /// The basis element indexed by `lambda`.
    pub fn basis_element(basis: Basis, lambda: Partition) -> Self {
        GradedSymPoly::from_terms(basis, [(lambda, Rational::one())])
    }

    /// Builds a polynomial, merging repeated keys and dropping zeros.
    pub fn from_terms(basis: Basis, terms: impl IntoIterator<Item = (Partition, Rational)>) -> Self {
        let mut coeffs = Expansion::new();
        for (k, c) in terms {
            add_into(&mut coeffs, k, c);
        }
        let degree = coeffs.keys().map(Partition::size).max().unwrap_or(0);
        GradedSymPoly { degree, basis, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, lambda: &Partition) -> Rational {
        self.coeffs.get(lambda).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &GradedSymPoly) -> Result<GradedSymPoly> {
        if self.basis != other.basis {
            return Err(Error::Domain(format!(
                "cannot add polynomials in bases {} and {}",
                self.basis, other.basis
            )));
        }
        let terms = self.coeffs.iter().chain(&other.coeffs).map(|(k, c)| (k.clone(), c.clone()));
        Ok(GradedSymPoly::from_terms(self.basis.clone(), terms))
    }

    pub fn scale(&self, c: &Rational) -> GradedSymPoly {
        let terms = self.coeffs.iter().map(|(k, v)| (k.clone(), v * c));
        GradedSymPoly::from_terms(self.basis.clone(), terms)
    }
}

impl fmt::Display for GradedSymPoly {
    /// One `coeff * b_lambda` term per line, in canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (lambda, c) in self.coeffs.iter().rev() {
            writeln!(f, "{} * {}_{}", format_rational(c), self.basis, lambda)?;
        }
        Ok(())
    }
}

/// Degree caps for [`SymAlgebra`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymConfig {
    /// Monomial, power-sum and Schur work.
    pub max_degree: usize,
    /// Jack expansions and normalizations.
    pub max_jack_degree: usize,
}

impl Default for SymConfig {
    fn default() -> Self {
        SymConfig { max_degree: 12, max_jack_degree: 8 }
    }
}

/// Outcome of pinning one J-scalar through one parent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieriCheck {
    pub parent: Partition,
    pub child: Partition,
    /// Scalar c_ν with J_ν = c_ν P_ν implied by this parent.
    #[serde(serialize_with = "ser_rational")]
    pub implied_scalar: Rational,
    /// Agrees with the scalar pinned through the first parent.
    pub consistent: bool,
}

/// A P_ν-term of p_1 J_η with ν not covering η (never expected).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrayTerm {
    pub parent: Partition,
    pub term: Partition,
    #[serde(serialize_with = "ser_rational")]
    pub coeff: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// The scalars c_ν (J_ν = c_ν P_ν) for one ϑ, with every parent checked.
#[derive(Clone, Debug)]
pub struct JackNormalization {
    pub vartheta: Rational,
    pub max_level: usize,
    pub scalars: HashMap<Partition, Rational>,
    pub checks: Vec<PieriCheck>,
    pub stray_terms: Vec<StrayTerm>,
}

impl JackNormalization {
    pub fn is_consistent(&self) -> bool {
        self.stray_terms.is_empty() && self.checks.iter().all(|c| c.consistent)
    }

    pub fn inconsistencies(&self) -> impl Iterator<Item = &PieriCheck> {
        self.checks.iter().filter(|c| !c.consistent)
    }
}

type Cache<K, V> = RwLock<HashMap<K, Arc<V>>>;

fn cached<K, V>(cache: &Cache<K, V>, key: &K, build: impl FnOnce() -> Result<V>) -> Result<Arc<V>>
where
    K: std::hash::Hash + Eq + Clone,
{
    if let Some(v) = cache.read().unwrap().get(key) {
        return Ok(Arc::clone(v));
    }
    let v = Arc::new(build()?);
    cache.write().unwrap().entry(key.clone()).or_insert_with(|| Arc::clone(&v));
    Ok(v)
}

/// Basis-change tables and Jack expansions, filled on demand.
///
/// All caches are internally synchronized, so one instance can be shared
/// across threads.
#[derive(Debug, Default)]
pub struct SymAlgebra {
    config: SymConfig,
    p_in_m: Cache<Partition, Expansion>,
    m_in_p: Cache<usize, HashMap<Partition, Expansion>>,
    schur: Cache<Partition, Expansion>,
    jack_p: Cache<(Partition, Rational), Expansion>,
    normalizations: Cache<Rational, JackNormalization>,
    graphs: Cache<Rational, BranchingGraph>,
}

impl SymAlgebra {
    pub fn new(config: SymConfig) -> Self {
        SymAlgebra { config, ..Default::default() }
    }

    pub fn config(&self) -> SymConfig {
        self.config
    }

    fn check_degree(&self, d: usize) -> Result<()> {
        if d > self.config.max_degree {
            return Err(Error::Capacity { what: "symmetric function degree", value: d, max: self.config.max_degree });
        }
        Ok(())
    }

    fn check_jack_degree(&self, d: usize) -> Result<()> {
        if d > self.config.max_jack_degree {
            return Err(Error::Capacity { what: "Jack degree", value: d, max: self.config.max_jack_degree });
        }
        Ok(())
    }

    fn check_vartheta(t: &Rational) -> Result<()> {
        GraphKind::jack(t.clone()).map(|_| ())
    }

    fn power_sum_in_monomials(&self, lambda: &Partition) -> Result<Arc<Expansion>> {
        self.check_degree(lambda.size())?;
        cached(&self.p_in_m, lambda, || Ok(tables::power_sum_in_monomials(lambda)))
    }

    fn monomials_in_power_sums(&self, n: usize) -> Result<Arc<HashMap<Partition, Expansion>>> {
        self.check_degree(n)?;
        cached(&self.m_in_p, &n, || Ok(tables::monomials_in_power_sums(n)))
    }

    fn schur_in_monomials(&self, lambda: &Partition) -> Result<Arc<Expansion>> {
        self.check_degree(lambda.size())?;
        cached(&self.schur, lambda, || Ok(Kostka::new().schur_in_monomials(lambda)))
    }

    /// P_η(·;ϑ) in monomials, coefficient of m_η equal to 1.
    pub fn jack_in_monomials(&self, eta: &Partition, vartheta: &Rational) -> Result<GradedSymPoly> {
        let e = self.jack_p(eta, vartheta)?;
        Ok(GradedSymPoly::from_terms(
            Basis::Monomial,
            e.iter().map(|(k, v)| (k.clone(), v.clone())),
        ))
    }

    fn jack_p(&self, eta: &Partition, vartheta: &Rational) -> Result<Arc<Expansion>> {
        Self::check_vartheta(vartheta)?;
        self.check_jack_degree(eta.size())?;
        let key = (eta.clone(), vartheta.clone());
        cached(&self.jack_p, &key, || jack_p_expansion(eta, vartheta))
    }

    /// The Jack graph for ϑ, shared across calls.
    pub fn graph(&self, vartheta: &Rational) -> Result<Arc<BranchingGraph>> {
        let kind = GraphKind::jack(vartheta.clone())?;
        cached(&self.graphs, vartheta, || Ok(BranchingGraph::new(kind)))
    }

    /// Scalars c_ν with J_ν = c_ν P_ν for |ν| ≤ `max_level`, pinned through
    /// the first parent (bottom-most removable box) and checked against all
    /// other parents. Inconsistencies are reported, not repaired.
    pub fn jack_normalization(&self, vartheta: &Rational, max_level: usize) -> Result<Arc<JackNormalization>> {
        Self::check_vartheta(vartheta)?;
        self.check_jack_degree(max_level)?;
        if let Some(v) = self.normalizations.read().unwrap().get(vartheta) {
            if v.max_level >= max_level {
                return Ok(Arc::clone(v));
            }
        }
        let norm = Arc::new(self.build_normalization(vartheta, max_level)?);
        self.normalizations.write().unwrap().insert(vartheta.clone(), Arc::clone(&norm));
        Ok(norm)
    }

    fn build_normalization(&self, vartheta: &Rational, max_level: usize) -> Result<JackNormalization> {
        let graph = self.graph(vartheta)?;
        let mut scalars = HashMap::new();
        scalars.insert(Partition::empty(), Rational::one());
        let mut checks = Vec::new();
        let mut stray_terms = Vec::new();
        for n in 0..max_level {
            let next_level = enumerate_partitions(n + 1);
            let mut products: HashMap<Partition, Expansion> = HashMap::new();
            for eta in enumerate_partitions(n) {
                // p_1 J_η in monomials, then peeled into the P basis
                let j = self.jack_p(&eta, vartheta)?;
                let c = &scalars[&eta];
                let scaled: Expansion = j.iter().map(|(k, v)| (k.clone(), v * c)).collect();
                let prod = tables::power_sum_times(1, &scaled);
                let in_p = self.peel(&prod, &next_level, |nu| self.jack_p(nu, vartheta).map(|e| (*e).clone()))?;
                products.insert(eta, in_p);
            }
            for nu in &next_level {
                let mut pinned: Option<Rational> = None;
                for (eta, _) in nu.cocovers() {
                    let a = products[&eta].get(nu).cloned().unwrap_or_else(Rational::zero);
                    let chi = graph.edge_weight(&eta, nu)?;
                    let implied = a / chi;
                    let consistent = match &pinned {
                        None => {
                            pinned = Some(implied.clone());
                            true
                        }
                        Some(p) => *p == implied,
                    };
                    checks.push(PieriCheck { parent: eta, child: nu.clone(), implied_scalar: implied, consistent });
                }
                scalars.insert(nu.clone(), pinned.expect("nonempty partitions have a parent"));
            }
            for (eta, prod) in products {
                for (term, coeff) in prod {
                    if term.added_cell(&eta).is_none() {
                        stray_terms.push(StrayTerm { parent: eta.clone(), term, coeff });
                    }
                }
            }
        }
        Ok(JackNormalization { vartheta: vartheta.clone(), max_level, scalars, checks, stray_terms })
    }

    /// J_η in monomials.
    pub fn jack_paper(&self, eta: &Partition, vartheta: &Rational) -> Result<GradedSymPoly> {
        let norm = self.jack_normalization(vartheta, eta.size())?;
        Ok(self.jack_in_monomials(eta, vartheta)?.scale(&norm.scalars[eta]))
    }

    /// Expresses a homogeneous monomial expansion of degree n in a
    /// dominance-triangular basis whose elements are given by `element`.
    fn peel(
        &self,
        f: &Expansion,
        level: &[Partition],
        element: impl Fn(&Partition) -> Result<Expansion>,
    ) -> Result<Expansion> {
        let mut rest = f.clone();
        let mut out = Expansion::new();
        for lambda in level {
            let Some(a) = rest.get(lambda).cloned() else { continue };
            let e = element(lambda)?;
            let lead = e[lambda].clone();
            let coeff = &a / &lead;
            for (mu, v) in &e {
                add_into(&mut rest, mu.clone(), -(&coeff * v));
            }
            out.insert(lambda.clone(), coeff);
        }
        if !rest.is_empty() {
            return Err(Error::Consistency("basis peel left a remainder".into()));
        }
        Ok(out)
    }

    fn element_in_monomials(&self, basis: &Basis, lambda: &Partition) -> Result<Expansion> {
        Ok(match basis {
            Basis::Monomial => {
                let mut e = Expansion::new();
                e.insert(lambda.clone(), Rational::one());
                e
            }
            Basis::PowerSum => (*self.power_sum_in_monomials(lambda)?).clone(),
            Basis::Schur => (*self.schur_in_monomials(lambda)?).clone(),
            Basis::JackP(t) => (*self.jack_p(lambda, t)?).clone(),
            Basis::JackPaper(t) => self.jack_paper(lambda, t)?.coeffs,
        })
    }

    fn check_basis_degree(&self, basis: &Basis, d: usize) -> Result<()> {
        match basis {
            Basis::JackP(t) | Basis::JackPaper(t) => {
                Self::check_vartheta(t)?;
                self.check_jack_degree(d)
            }
            _ => self.check_degree(d),
        }
    }

    /// Exact change of basis.
    pub fn basis_convert(&self, f: &GradedSymPoly, target: &Basis) -> Result<GradedSymPoly> {
        self.check_basis_degree(&f.basis, f.degree)?;
        self.check_basis_degree(target, f.degree)?;
        if f.basis == *target {
            return Ok(f.clone());
        }
        // through monomials, one homogeneous component at a time
        let mut by_level: BTreeMap<usize, Expansion> = BTreeMap::new();
        for (lambda, c) in &f.coeffs {
            let level = by_level.entry(lambda.size()).or_default();
            for (mu, v) in self.element_in_monomials(&f.basis, lambda)? {
                add_into(level, mu, c * v);
            }
        }
        let mut terms = Vec::new();
        for (n, m) in by_level {
            let converted = match target {
                Basis::Monomial => m,
                Basis::PowerSum => {
                    let table = self.monomials_in_power_sums(n)?;
                    let mut out = Expansion::new();
                    for (mu, c) in &m {
                        for (nu, v) in &table[mu] {
                            add_into(&mut out, nu.clone(), c * v);
                        }
                    }
                    out
                }
                other => self.peel(&m, &enumerate_partitions(n), |nu| self.element_in_monomials(other, nu))?,
            };
            terms.extend(converted);
        }
        Ok(GradedSymPoly::from_terms(target.clone(), terms))
    }

    /// Product, returned in the basis of `f`.
    pub fn mul(&self, f: &GradedSymPoly, g: &GradedSymPoly) -> Result<GradedSymPoly> {
        self.check_degree(f.degree + g.degree)?;
        let fp = self.basis_convert(f, &Basis::PowerSum)?;
        let gp = self.basis_convert(g, &Basis::PowerSum)?;
        let mut terms = Vec::new();
        for (a, c) in &fp.coeffs {
            for (b, d) in &gp.coeffs {
                let mut parts = a.parts().to_vec();
                parts.extend_from_slice(b.parts());
                terms.push((Partition::from_unsorted(parts), c * d));
            }
        }
        let prod = GradedSymPoly::from_terms(Basis::PowerSum, terms);
        self.basis_convert(&prod, &f.basis)
    }

    /// Φ applied to `f`, with p_1 ↦ 1 and p_k ↦ `phi(k)` for k ≥ 2.
    pub fn specialize_with<S: Scalar>(&self, f: &GradedSymPoly, phi: impl Fn(usize) -> S) -> Result<S> {
        let fp = self.basis_convert(f, &Basis::PowerSum)?;
        let mut cache: HashMap<usize, S> = HashMap::new();
        let mut total = S::zero();
        for (lambda, c) in &fp.coeffs {
            let mut term = S::from_rational(c);
            for &k in lambda.parts() {
                if k == 1 {
                    continue;
                }
                let v = cache.entry(k).or_insert_with(|| phi(k)).clone();
                term = term * v;
            }
            total = total + term;
        }
        Ok(total)
    }

    /// Φ_ω(f) for a Thoma point.
    pub fn specialize(&self, f: &GradedSymPoly, omega: &ThomaPoint, vartheta: &Rational) -> Result<f64> {
        let t = to_f64(vartheta);
        self.specialize_with(f, |k| phi_power_sum(omega, t, k))
    }

    /// Φ_ω(f) in exact arithmetic for rational coordinates.
    pub fn specialize_exact(
        &self,
        f: &GradedSymPoly,
        alpha: &[Rational],
        beta: &[Rational],
        vartheta: &Rational,
    ) -> Result<Rational> {
        self.specialize_with(f, |k| phi_power_sum_exact(alpha, beta, vartheta, k))
    }

    /// j_η(ω;ϑ) = dim(η) Φ_ω(J_η).
    pub fn j_eval(&self, eta: &Partition, omega: &ThomaPoint, vartheta: &Rational) -> Result<f64> {
        let dim = self.graph(vartheta)?.dim(eta);
        let j = self.jack_paper(eta, vartheta)?;
        Ok(to_f64(&dim) * self.specialize(&j, omega, vartheta)?)
    }

    /// Exact j_η at a Thoma point with rational coordinates.
    pub fn j_eval_exact(
        &self,
        eta: &Partition,
        alpha: &[Rational],
        beta: &[Rational],
        vartheta: &Rational,
    ) -> Result<Rational> {
        let dim = self.graph(vartheta)?.dim(eta);
        let j = self.jack_paper(eta, vartheta)?;
        Ok(dim * self.specialize_exact(&j, alpha, beta, vartheta)?)
    }
}

/// Φ_ω(p_k) = Σ α_i^k + (−ϑ)^{k−1} Σ β_j^k for k ≥ 2, and 1 for k = 1.
pub fn phi_power_sum(omega: &ThomaPoint, vartheta: f64, k: usize) -> f64 {
    if k == 1 {
        return 1.0;
    }
    let (a, b) = omega.power_sums(k as u32);
    a + (-vartheta).powi(k as i32 - 1) * b
}

pub fn phi_power_sum_exact(alpha: &[Rational], beta: &[Rational], vartheta: &Rational, k: usize) -> Rational {
    if k == 1 {
        return Rational::one();
    }
    let pow = |x: &Rational, e: usize| (0..e).fold(Rational::one(), |acc, _| acc * x);
    let a: Rational = alpha.iter().map(|x| pow(x, k)).sum();
    let b: Rational = beta.iter().map(|x| pow(x, k)).sum();
    a + pow(&-vartheta.clone(), k - 1) * b
}

/// (p_1)^n in the basis `basis`.
pub fn p1_power(alg: &SymAlgebra, n: usize, basis: &Basis) -> Result<GradedSymPoly> {
    let p = GradedSymPoly::basis_element(Basis::PowerSum, Partition::from_unsorted(vec![1; n]));
    alg.basis_convert(&p, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn alg() -> SymAlgebra {
        SymAlgebra::new(SymConfig::default())
    }

    #[test]
    fn p1_is_m1() {
        let a = alg();
        let f = GradedSymPoly::basis_element(Basis::PowerSum, p("1"));
        let m = a.basis_convert(&f, &Basis::Monomial).unwrap();
        assert_eq!(m, GradedSymPoly::basis_element(Basis::Monomial, p("1")));
    }

    #[test]
    fn m11_in_power_sums() {
        let a = alg();
        let f = GradedSymPoly::basis_element(Basis::Monomial, p("1,1"));
        let got = a.basis_convert(&f, &Basis::PowerSum).unwrap();
        let want = GradedSymPoly::from_terms(Basis::PowerSum, [(p("1,1"), ratio(1, 2)), (p("2"), ratio(-1, 2))]);
        assert_eq!(got, want);
    }

    #[test]
    fn schur_round_trip() {
        let a = alg();
        let s = GradedSymPoly::basis_element(Basis::Schur, p("2,1"));
        let m = a.basis_convert(&s, &Basis::Monomial).unwrap();
        assert_eq!(a.basis_convert(&m, &Basis::Schur).unwrap(), s);
    }

    #[test]
    fn capacity_errors() {
        let a = alg();
        let f = GradedSymPoly::basis_element(Basis::Monomial, Partition::from_unsorted(vec![13]));
        assert!(matches!(a.basis_convert(&f, &Basis::PowerSum), Err(Error::Capacity { .. })));
        assert!(matches!(a.jack_in_monomials(&Partition::from_unsorted(vec![9]), &int(1)), Err(Error::Capacity { .. })));
        assert!(a.jack_in_monomials(&p("1"), &int(0)).is_err());
    }

    #[test]
    fn jack_paper_small() {
        let a = alg();
        for t in [int(1), int(2), ratio(1, 2)] {
            let j1 = a.jack_paper(&p("1"), &t).unwrap();
            let p1 = GradedSymPoly::basis_element(Basis::PowerSum, p("1"));
            assert_eq!(a.basis_convert(&j1, &Basis::PowerSum).unwrap(), p1);
        }
    }

    #[test]
    fn pieri_consistent_and_scalars_are_one() {
        let a = alg();
        for t in [int(1), int(2), ratio(1, 2), int(3)] {
            let norm = a.jack_normalization(&t, 8).unwrap();
            assert!(norm.is_consistent(), "vartheta {t}");
            assert!(norm.scalars.values().all(|c| c.is_one()));
        }
    }

    #[test]
    fn jack_paper_is_schur_at_one() {
        let a = alg();
        for n in 0..=8 {
            for eta in enumerate_partitions(n) {
                let j = a.jack_paper(&eta, &int(1)).unwrap();
                let s = a.basis_convert(&GradedSymPoly::basis_element(Basis::Schur, eta.clone()), &Basis::Monomial).unwrap();
                assert_eq!(j, s);
            }
        }
    }

    #[test]
    fn p1_power_expands_with_dimensions() {
        let a = alg();
        for t in [int(1), int(2), ratio(1, 2)] {
            let graph = a.graph(&t).unwrap();
            for n in 0..=8 {
                let got = p1_power(&a, n, &Basis::JackPaper(t.clone())).unwrap();
                let want = GradedSymPoly::from_terms(
                    Basis::JackPaper(t.clone()),
                    enumerate_partitions(n).into_iter().map(|eta| {
                        let d = graph.dim(&eta);
                        (eta, d)
                    }),
                );
                assert_eq!(got, want, "n = {n}, vartheta = {t}");
            }
        }
    }

    #[test]
    fn specialize_examples() {
        let a = alg();
        let omega = ThomaPoint::new(vec![0.5, 0.3], vec![0.1]).unwrap();
        let p2 = GradedSymPoly::basis_element(Basis::PowerSum, p("2"));
        for t in [0.5, 1.0, 2.0] {
            let tr = crate::rational::parse_rational(&t.to_string()).unwrap();
            let v = a.specialize(&p2, &omega, &tr).unwrap();
            assert!((v - (0.34 - 0.01 * t)).abs() < 1e-15);
        }
        let p111 = GradedSymPoly::basis_element(Basis::PowerSum, p("1,1,1"));
        assert_eq!(a.specialize(&p111, &omega, &int(2)).unwrap(), 1.0);
        let omega = ThomaPoint::new(vec![0.6, 0.4], vec![]).unwrap();
        for n in 1..=5 {
            for eta in enumerate_partitions(n) {
                let s = GradedSymPoly::basis_element(Basis::Schur, eta.clone());
                let v = a.specialize(&s, &omega, &int(1)).unwrap();
                let want = if eta.len() > 2 { 0.0 } else { schur_eval(&eta, &[0.6, 0.4]).unwrap() };
                assert!((v - want).abs() < 1e-12, "{eta:?}");
            }
        }
    }

    #[test]
    fn j_eval_examples() {
        let a = alg();
        let omega = ThomaPoint::new(vec![0.2], vec![0.3]).unwrap();
        assert!((a.j_eval(&p("1"), &omega, &int(2)).unwrap() - 1.0).abs() < 1e-15);
        let delta = ThomaPoint::new(vec![1.0], vec![]).unwrap();
        for eta in enumerate_partitions(4) {
            let v = a.j_eval(&eta, &delta, &int(1)).unwrap();
            let want = if eta.len() == 1 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn j_sums_to_one_exactly() {
        let a = alg();
        let alpha = [ratio(1, 3), ratio(1, 5)];
        let beta = [ratio(1, 4)];
        for t in [int(1), int(2), ratio(1, 2)] {
            for n in 0..=6 {
                let total: Rational = enumerate_partitions(n)
                    .iter()
                    .map(|eta| a.j_eval_exact(eta, &alpha, &beta, &t).unwrap())
                    .sum();
                assert!(total.is_one(), "n = {n}, vartheta = {t}: {total}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn j_sums_to_one_at_sampled_points(seed in 0u64..1000, t_idx in 0usize..3) {
            use rand::SeedableRng;
            let a = alg();
            let t = [int(1), int(2), ratio(1, 2)][t_idx].clone();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let omega = ThomaPoint::sample(&mut rng, 3, 3);
            for n in 1..=6 {
                let total: f64 = enumerate_partitions(n)
                    .iter()
                    .map(|eta| a.j_eval(eta, &omega, &t).unwrap())
                    .sum();
                prop_assert!((total - 1.0).abs() < 1e-10);
            }
        }

        #[test]
        fn j_nonnegative_at_vartheta_one(seed in 0u64..1000) {
            use rand::SeedableRng;
            let a = alg();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let omega = ThomaPoint::sample(&mut rng, 3, 3);
            for n in 1..=6 {
                for eta in enumerate_partitions(n) {
                    prop_assert!(a.j_eval(&eta, &omega, &int(1)).unwrap() > -1e-12);
                }
            }
        }

        #[test]
        fn power_sum_round_trip(n in 1usize..=6, seed in 0u64..100) {
            let a = alg();
            let level = enumerate_partitions(n);
            let terms = level.iter().enumerate().map(|(i, l)| (l.clone(), ratio((i as i64 * 7 + seed as i64) % 5 - 2, 3)));
            let f = GradedSymPoly::from_terms(Basis::Monomial, terms);
            let back = a.basis_convert(&a.basis_convert(&f, &Basis::PowerSum).unwrap(), &Basis::Monomial).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
