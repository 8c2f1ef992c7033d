//! Explicit polynomials in a fixed number of variables, the Sekiguchi
//! operator D(u;ϑ) and determinantal Schur evaluation.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rational::{int, Rational};

use super::tables::Kostka;

/// Largest variable count accepted by [`sekiguchi_apply`].
pub const SEKIGUCHI_MAX_VARS: usize = 8;

const COINCIDENCE_TOL: f64 = 1e-9;

/// A polynomial in `nvars` commuting variables with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The monomial symmetric polynomial m_μ in `nvars` variables
    /// (zero when μ has more rows than variables).
    pub fn monomial_symmetric(mu: &Partition, nvars: usize) -> Self {
        let mut p = MultiPoly::zero(nvars);
        if mu.len() > nvars {
            return p;
        }
        let mut exps: Vec<u32> = mu.parts().iter().map(|&x| x as u32).collect();
        exps.resize(nvars, 0);
        exps.sort_unstable();
        loop {
            p.terms.insert(exps.clone(), Rational::one());
            if !next_permutation(&mut exps) {
                break;
            }
        }
        p
    }

    /// Σ_μ c_μ m_μ in `nvars` variables.
    pub fn from_monomial_expansion<'a>(
        coeffs: impl IntoIterator<Item = (&'a Partition, &'a Rational)>,
        nvars: usize,
    ) -> Self {
        let mut p = MultiPoly::zero(nvars);
        for (mu, c) in coeffs {
            p = p.add(&MultiPoly::monomial_symmetric(mu, nvars).scale(c));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, d) in &self.terms {
            out.terms.insert(e.clone(), d * c);
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| {
            (0..self.nvars.saturating_sub(1)).all(|i| {
                let mut s = e.clone();
                s.swap(i, i + 1);
                self.terms.get(&s) == Some(c)
            })
        })
    }

    /// Exact quotient by (x_i − x_j); a nonzero remainder is an error.
    pub fn div_difference(&self, i: usize, j: usize) -> Result<MultiPoly> {
        // Treat the polynomial as Σ_k c_k x_i^k with c_k free of x_i and run
        // synthetic division by x_i − x_j from the top degree down.
        let mut by_power: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest[i];
            rest[i] = 0;
            by_power
                .entry(k)
                .or_insert_with(|| MultiPoly::zero(self.nvars))
                .add_term(rest, c.clone());
        }
        let Some(&top) = by_power.keys().next_back() else {
            return Ok(MultiPoly::zero(self.nvars));
        };
        let mut quotient = MultiPoly::zero(self.nvars);
        let mut carry = MultiPoly::zero(self.nvars);
        for k in (0..=top).rev() {
            // carry = c_k + x_j · q_k, and q_{k-1} = carry
            let ck = by_power.remove(&k).unwrap_or_else(|| MultiPoly::zero(self.nvars));
            let current = ck.add(&carry.shift(j, 1));
            if k == 0 {
                if !current.is_zero() {
                    return Err(Error::Consistency(format!(
                        "polynomial is not divisible by x_{} - x_{}",
                        i + 1,
                        j + 1
                    )));
                }
                break;
            }
            for (e, c) in &current.terms {
                let mut e = e.clone();
                e[i] = k - 1;
                quotient.add_term(e, c.clone());
            }
            carry = current;
        }
        Ok(quotient)
    }

    fn shift(&self, var: usize, by: u32) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[var] += by;
            out.terms.insert(e, c.clone());
        }
        out
    }

    /// Exact quotient by the Vandermonde Π_{i<j} (x_i − x_j).
    pub fn div_vandermonde(&self) -> Result<MultiPoly> {
        let mut q = self.clone();
        for i in 0..self.nvars {
            for j in i + 1..self.nvars {
                q = q.div_difference(i, j)?;
            }
        }
        Ok(q)
    }

    /// Reads a symmetric polynomial back as Σ c_μ m_μ.
    pub fn to_monomial_expansion(&self) -> Result<BTreeMap<Partition, Rational>> {
        if !self.is_symmetric() {
            return Err(Error::Consistency("polynomial is not symmetric".into()));
        }
        Ok(self
            .terms
            .iter()
            .filter(|(e, _)| e.windows(2).all(|w| w[0] >= w[1]))
            .map(|(e, c)| {
                let parts = e.iter().map(|&x| x as usize).collect();
                (Partition::from_unsorted(parts), c.clone())
            })
            .collect())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono: f64 = e.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product();
                crate::rational::to_f64(c) * mono
            })
            .sum()
    }
}

/// Lexicographic successor; false once the last permutation is reached.
fn next_permutation(v: &mut [u32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of 0..n with their signs.
fn signed_permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    fn go(k: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, bool)>) {
        let n = perm.len();
        if k == n {
            let mut inversions = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if perm[a] > perm[b] {
                        inversions += 1;
                    }
                }
            }
            out.push((perm.clone(), inversions % 2 == 0));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                perm[k] = v;
                go(k + 1, perm, used, out);
                used[v] = false;
            }
        }
    }
    go(0, &mut perm, &mut used, &mut out);
    out
}

/// Applies D(u;ϑ) to a symmetric polynomial. Entry k of the result is the
/// coefficient of u^k, for k = 0..=n.
///
/// D(u;ϑ) = a_δ⁻¹ Σ_σ sgn σ Π_i x_i^{n−σ(i)} (x_i ∂_i + (n−σ(i))ϑ + u).
pub fn sekiguchi_apply(f: &MultiPoly, vartheta: &Rational) -> Result<Vec<MultiPoly>> {
    let n = f.nvars();
    if n > SEKIGUCHI_MAX_VARS {
        return Err(Error::Capacity {
            what: "Sekiguchi variable count",
            value: n,
            max: SEKIGUCHI_MAX_VARS,
        });
    }
    if !f.is_symmetric() {
        return Err(Error::Consistency("Sekiguchi operator needs a symmetric input".into()));
    }
    let perms = signed_permutations(n);
    let mut numer = vec![MultiPoly::zero(n); n + 1];
    for (a, c) in f.terms() {
        for (sigma, even) in &perms {
            // Π_i (a_i + δ_i ϑ + u) as a polynomial in u, δ_i = n − 1 − σ(i)
            let mut poly = vec![Rational::one()];
            let mut exps = a.clone();
            for i in 0..n {
                let delta = (n - 1 - sigma[i]) as u32;
                exps[i] += delta;
                let root = int(a[i] as i64) + int(delta as i64) * vartheta;
                let mut next = vec![Rational::zero(); poly.len() + 1];
                for (k, pk) in poly.iter().enumerate() {
                    next[k] += pk * &root;
                    next[k + 1] += pk;
                }
                poly = next;
            }
            for (k, pk) in poly.into_iter().enumerate() {
                let coef = if *even { pk * c } else { -(pk * c) };
                numer[k].add_term(exps.clone(), coef);
            }
        }
    }
    let out = numer
        .iter()
        .map(MultiPoly::div_vandermonde)
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = out.iter().position(|p| !p.is_symmetric()) {
        return Err(Error::Consistency(format!(
            "Sekiguchi output coefficient of u^{bad} is not symmetric"
        )));
    }
    Ok(out)
}

/// Σ over distinct permutations of μ (padded with zeros) of Π x_i^{μ_σ(i)}.
pub fn monomial_eval(mu: &Partition, x: &[f64]) -> f64 {
    if mu.len() > x.len() {
        return 0.0;
    }
    let mut exps: Vec<u32> = mu.parts().iter().map(|&p| p as u32).collect();
    exps.resize(x.len(), 0);
    exps.sort_unstable();
    let mut total = 0.0;
    loop {
        total += exps
            .iter()
            .zip(x)
            .map(|(&k, &xi)| xi.powi(k as i32))
            .product::<f64>();
        if !next_permutation(&mut exps) {
            break;
        }
    }
    total
}

/// s_η(x) via the bialternant a_{η+δ}/a_δ, or by Kostka expansion into
/// monomials when two variables nearly coincide.
pub fn schur_eval(eta: &Partition, x: &[f64]) -> Result<f64> {
    let n = x.len();
    if eta.len() > n {
        return Err(Error::Domain(format!(
            "s_{eta:?} needs at least {} variables, got {n}",
            eta.len()
        )));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let near = (0..n).any(|i| (i + 1..n).any(|j| (x[i] - x[j]).abs() < COINCIDENCE_TOL));
    if near {
        let mut kostka = Kostka::new();
        return Ok(kostka
            .schur_in_monomials(eta)
            .iter()
            .map(|(mu, k)| crate::rational::to_f64(k) * monomial_eval(mu, x))
            .sum());
    }
    let numer = DMatrix::from_fn(n, n, |i, j| x[i].powi((eta.part(j + 1) + n - 1 - j) as i32));
    let mut vandermonde = 1.0;
    for i in 0..n {
        for j in i + 1..n {
            vandermonde *= x[i] - x[j];
        }
    }
    Ok(numer.determinant() / vandermonde)
}
