//! Transition tables between the monomial, power-sum and Schur bases.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::partition::{enumerate_partitions, Partition};
use crate::rational::{int, Rational};

pub(crate) type Expansion = BTreeMap<Partition, Rational>;

pub(crate) fn add_into(acc: &mut Expansion, key: Partition, value: Rational) {
    if value.is_zero() {
        return;
    }
    match acc.entry(key) {
        Entry::Vacant(v) => {
            v.insert(value);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += value;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// p_k · m_μ in the monomial basis. Raising one part value v (or a new
/// zero part) to v + k yields m_ν with coefficient α_{v+k}(ν).
pub(crate) fn power_sum_times_monomial(k: usize, mu: &Partition) -> Vec<(Partition, usize)> {
    let mut values: Vec<usize> = mu.parts().to_vec();
    values.dedup();
    values.push(0);
    values
        .into_iter()
        .map(|v| {
            let mut parts = mu.parts().to_vec();
            if v == 0 {
                parts.push(k);
            } else {
                let pos = parts.iter().position(|&p| p == v).unwrap();
                parts[pos] += k;
            }
            let nu = Partition::from_unsorted(parts);
            let mult = nu.multiplicity(v + k);
            (nu, mult)
        })
        .collect()
}

/// p_k · f for f in the monomial basis.
pub(crate) fn power_sum_times(k: usize, f: &Expansion) -> Expansion {
    let mut out = Expansion::new();
    for (mu, c) in f {
        for (nu, mult) in power_sum_times_monomial(k, mu) {
            add_into(&mut out, nu, c * int(mult as i64));
        }
    }
    out
}

/// p_λ expanded in monomials.
pub(crate) fn power_sum_in_monomials(lambda: &Partition) -> Expansion {
    let mut f = Expansion::new();
    f.insert(Partition::empty(), Rational::one());
    for &k in lambda.parts() {
        f = power_sum_times(k, &f);
    }
    f
}

/// m_λ expanded in power sums for every λ of size `n`, by triangular
/// inversion of the p → m table (p_λ is supported on μ ⊵ λ).
pub(crate) fn monomials_in_power_sums(n: usize) -> HashMap<Partition, Expansion> {
    let level = enumerate_partitions(n);
    let mut out: HashMap<Partition, Expansion> = HashMap::new();
    for lambda in &level {
        let p = power_sum_in_monomials(lambda);
        let lead = p[lambda].clone();
        // m_λ = (p_λ − Σ_{μ ≠ λ} L_{λμ} m_μ) / L_{λλ}
        let mut m = Expansion::new();
        m.insert(lambda.clone(), Rational::one());
        for (mu, c) in &p {
            if mu == lambda {
                continue;
            }
            for (nu, d) in &out[mu] {
                add_into(&mut m, nu.clone(), -(c * d));
            }
        }
        for v in m.values_mut() {
            *v /= &lead;
        }
        out.insert(lambda.clone(), m);
    }
    out
}

/// Partitions λ' ⊂ λ with λ/λ' a horizontal strip of `k` boxes.
fn horizontal_strips(lambda: &Partition, k: usize) -> Vec<Partition> {
    fn go(lambda: &[usize], i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == lambda.len() {
            if left == 0 {
                out.push(Partition::from_unsorted(cur.clone()));
            }
            return;
        }
        let lower = lambda.get(i + 1).copied().unwrap_or(0);
        let max_take = (lambda[i] - lower).min(left);
        for take in 0..=max_take {
            cur.push(lambda[i] - take);
            go(lambda, i + 1, left - take, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(lambda.parts(), 0, k, &mut Vec::new(), &mut out);
    out
}

/// Kostka numbers K_{λμ}: semistandard tableaux of shape λ and content μ.
pub(crate) struct Kostka {
    memo: HashMap<(Partition, Vec<usize>), u64>,
}

impl Kostka {
    pub(crate) fn new() -> Self {
        Kostka { memo: HashMap::new() }
    }

    pub(crate) fn get(&mut self, lambda: &Partition, content: &[usize]) -> u64 {
        if content.is_empty() {
            return u64::from(lambda.is_empty());
        }
        let key = (lambda.clone(), content.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (last, rest) = content.split_last().unwrap();
        let total = horizontal_strips(lambda, *last)
            .iter()
            .map(|inner| self.get(inner, rest))
            .sum();
        self.memo.insert(key, total);
        total
    }

    /// s_λ expanded in monomials.
    pub(crate) fn schur_in_monomials(&mut self, lambda: &Partition) -> Expansion {
        enumerate_partitions(lambda.size())
            .into_iter()
            .filter(|mu| mu.dominated_by(lambda))
            .filter_map(|mu| {
                let k = self.get(lambda, mu.parts());
                (k != 0).then(|| (mu, int(k as i64)))
            })
            .collect()
    }
}
