//! Jack P-functions from the second-order part of D(u;ϑ).
//!
//! In N variables the coefficient of u^{N−2} in D(u;ϑ) is
//! `const − d/2 − T` on degree-d polynomials, with
//!
//! T = ½ Σ x_i² ∂_i² + ϑ Σ_{i<j} (x_i² ∂_i − x_j² ∂_j) / (x_i − x_j).
//!
//! T is triangular on monomials with respect to dominance, so P_λ is found
//! by back-substitution. The full operator stays available as a test oracle.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, Partition};
use crate::rational::{format_rational, int, Rational};

use super::tables::Expansion;

/// Diagonal entry of T on m_μ in `nvars` variables:
/// Σ μ_k(μ_k − 1)/2 + ϑ Σ_k (N − k) μ_k.
pub fn t_diagonal(mu: &Partition, nvars: usize, vartheta: &Rational) -> Rational {
    let mut quad = 0i64;
    let mut lin = 0i64;
    for (k, &m) in mu.parts().iter().enumerate() {
        quad += (m * (m - 1) / 2) as i64;
        lin += ((nvars - (k + 1)) * m) as i64;
    }
    int(quad) + int(lin) * vartheta
}

/// Off-diagonal entries T_{νμ} (coefficient of m_ν in T m_μ) for fixed ν.
/// Each pair of parts (ν_i, ν_j) arises by squeezing a pair (p, q) with
/// q < min(ν_i, ν_j) and p + q = ν_i + ν_j, contributing ϑ(p − q).
/// Zero parts of ν never arise this way, so N does not enter.
pub fn t_off_diagonal(nu: &Partition, vartheta: &Rational) -> Vec<(Partition, Rational)> {
    let parts = nu.parts();
    let mut acc: BTreeMap<Partition, i64> = BTreeMap::new();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let (a, b) = (parts[i], parts[j]);
            for q in 0..a.min(b) {
                let p = a + b - q;
                let mut mu: Vec<usize> = parts.to_vec();
                mu[i] = p;
                mu[j] = q;
                let mu = Partition::from_unsorted(mu);
                *acc.entry(mu).or_insert(0) += (p - q) as i64;
            }
        }
    }
    acc.into_iter().map(|(mu, c)| (mu, int(c) * vartheta)).collect()
}

/// T m_μ expanded in monomials of the same degree (N = |μ| variables).
pub fn t_apply_monomial(mu: &Partition, vartheta: &Rational) -> Expansion {
    let n = mu.size();
    let mut out = Expansion::new();
    let diag = t_diagonal(mu, n, vartheta);
    if !diag.is_zero() {
        out.insert(mu.clone(), diag);
    }
    for nu in enumerate_partitions(n) {
        if nu == *mu || !nu.dominated_by(mu) {
            continue;
        }
        for (src, c) in t_off_diagonal(&nu, vartheta) {
            if src == *mu {
                out.insert(nu.clone(), c);
            }
        }
    }
    out
}

/// Monomial expansion of P_λ(·; ϑ) with leading coefficient 1.
pub fn jack_p_expansion(lambda: &Partition, vartheta: &Rational) -> Result<Expansion> {
    let n = lambda.size();
    let nvars = n;
    let eigen = t_diagonal(lambda, nvars, vartheta);
    let mut coeffs = Expansion::new();
    coeffs.insert(lambda.clone(), Rational::one());
    // canonical order: every μ with T_{νμ} ≠ 0 dominates ν and comes first
    for nu in enumerate_partitions(n) {
        if nu == *lambda || !nu.dominated_by(lambda) {
            continue;
        }
        let gap = &eigen - t_diagonal(&nu, nvars, vartheta);
        if gap.is_zero() {
            return Err(Error::Consistency(format!(
                "eigenvalue collision between {lambda:?} and {nu:?} at vartheta = {}",
                format_rational(vartheta)
            )));
        }
        let mut rhs = Rational::zero();
        for (mu, t) in t_off_diagonal(&nu, vartheta) {
            if let Some(c) = coeffs.get(&mu) {
                rhs += c * t;
            }
        }
        if !rhs.is_zero() {
            coeffs.insert(nu, rhs / gap);
        }
    }
    Ok(coeffs)
}
