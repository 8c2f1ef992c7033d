//! Polynomials in φ°_2, φ°_3, … with φ°_1 ≡ 1.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rational::{Rational, Scalar};
use crate::symfunc::{Basis, GradedSymPoly, SymAlgebra};

/// A monomial Π φ_i as its non-decreasing index list (all indices ≥ 2).
pub type PhiMonomial = Vec<usize>;

/// Sparse polynomial in the φ°_i. The weighted degree of φ°_i is i.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiPoly<S> {
    terms: BTreeMap<PhiMonomial, S>,
}

/// Multiplies a monomial by φ_k; φ_1 is the constant 1.
pub(crate) fn times_phi(mono: &[usize], k: usize) -> PhiMonomial {
    let mut out = mono.to_vec();
    if k >= 2 {
        let pos = out.partition_point(|&i| i <= k);
        out.insert(pos, k);
    }
    out
}

/// Removes one factor φ_k, which must be present.
pub(crate) fn without_phi(mono: &[usize], k: usize) -> PhiMonomial {
    let mut out = mono.to_vec();
    let pos = out.iter().position(|&i| i == k).expect("factor present");
    out.remove(pos);
    out
}

/// Distinct indices of a monomial with their exponents.
pub(crate) fn exponents(mono: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &i in mono {
        match out.last_mut() {
            Some((j, e)) if *j == i => *e += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}

impl<S: Scalar> PhiPoly<S> {
    pub fn zero() -> Self {
        PhiPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    /// φ°_i; φ°_1 is the constant 1.
    pub fn phi(i: usize) -> Self {
        Self::monomial(times_phi(&[], i), S::one())
    }

    /// c Π φ_i over `indices` (any order; 1s are dropped, 0 is rejected).
    pub fn monomial(indices: Vec<usize>, c: S) -> Self {
        assert!(!indices.contains(&0), "φ_0 is not a coordinate");
        let mut mono: Vec<usize> = indices.into_iter().filter(|&i| i >= 2).collect();
        mono.sort_unstable();
        let mut p = Self::zero();
        p.add_term(mono, c);
        p
    }

    /// Adds c to the coefficient of `mono` (which must be sorted, indices ≥ 2).
    pub fn add_term(&mut self, mono: PhiMonomial, c: S) {
        debug_assert!(mono.windows(2).all(|w| w[0] <= w[1]) && mono.iter().all(|&i| i >= 2));
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = o.get().clone() + c;
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PhiMonomial, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &[usize]) -> S {
        self.terms.get(mono).cloned().unwrap_or_else(S::zero)
    }

    /// Largest weighted degree Σ i over the monomials (0 for constants and zero).
    pub fn weighted_degree(&self) -> usize {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let mut m = a.clone();
                m.extend_from_slice(b);
                m.sort_unstable();
                out.add_term(m, c.clone() * d.clone());
            }
        }
        out
    }

    /// ∂/∂φ_i (i ≥ 2).
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.iter().filter(|&&k| k == i).count();
            if e > 0 {
                out.add_term(without_phi(m, i), c.clone() * S::from_i64(e as i64));
            }
        }
        out
    }

    /// Evaluates with φ_i ↦ `phi(i)`.
    pub fn eval_with(&self, phi: impl Fn(usize) -> S) -> S {
        let mut cache: BTreeMap<usize, S> = BTreeMap::new();
        let mut total = S::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &i in m {
                let v = cache.entry(i).or_insert_with(|| phi(i)).clone();
                term = term * v;
            }
            total = total + term;
        }
        total
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PhiPoly<T> {
        let mut out = PhiPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl PhiPoly<Rational> {
    /// Φ(f) as a φ-polynomial: power sums p_i ↦ φ_i, p_1 ↦ 1.
    pub fn from_symmetric(alg: &SymAlgebra, f: &GradedSymPoly) -> Result<Self> {
        let fp = alg.basis_convert(f, &Basis::PowerSum)?;
        let mut out = PhiPoly::zero();
        for (lambda, c) in fp.coeffs() {
            let mono: Vec<usize> = lambda.parts().iter().rev().copied().filter(|&i| i >= 2).collect();
            out.add_term(mono, c.clone());
        }
        Ok(out)
    }

    /// s°_η = Φ(s_η).
    pub fn schur(alg: &SymAlgebra, eta: &Partition) -> Result<Self> {
        Self::from_symmetric(alg, &GradedSymPoly::basis_element(Basis::Schur, eta.clone()))
    }

    pub fn to_f64(&self) -> PhiPoly<f64> {
        self.map(|c| c.to_f64_lossy())
    }
}

/// Writes one term per line as `coeff * phi2^2 phi3`.
impl<S: Scalar + fmt::Display> fmt::Display for PhiPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (m, c) in &self.terms {
            write!(f, "{c}")?;
            for (i, e) in exponents(m) {
                if e == 1 {
                    write!(f, " * phi{i}")?;
                } else {
                    write!(f, " * phi{i}^{e}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// All monomials of weighted degree ≤ `max_degree`, ordered by degree.
pub fn monomial_basis(max_degree: usize) -> Vec<PhiMonomial> {
    let mut out = vec![Vec::new()];
    for d in 2..=max_degree {
        out.extend(parts_at_least_two(d));
    }
    out
}

/// Partitions of d with all parts ≥ 2, as non-decreasing lists.
fn parts_at_least_two(d: usize) -> Vec<PhiMonomial> {
    fn go(remaining: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for i in min..=remaining {
            if remaining - i == 0 || remaining - i >= i {
                cur.push(i);
                go(remaining - i, i, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(d, 2, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn check_degree(degree: usize, max: usize) -> Result<()> {
    if degree > max {
        return Err(Error::Capacity { what: "phi-polynomial weighted degree", value: degree, max });
    }
    Ok(())
}
