//! Empirical distributions over partitions and distances between them.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::partition::Partition;

/// Visit counts; merging is associative and commutative.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EmpiricalCounts {
    counts: BTreeMap<Partition, u64>,
    total: u64,
}

impl EmpiricalCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, p: &Partition) {
        *self.counts.entry(p.clone()).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn merge(mut self, other: EmpiricalCounts) -> EmpiricalCounts {
        for (p, c) in other.counts {
            *self.counts.entry(p).or_insert(0) += c;
        }
        self.total += other.total;
        self
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, p: &Partition) -> u64 {
        self.counts.get(p).copied().unwrap_or(0)
    }

    pub fn frequency(&self, p: &Partition) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.count(p) as f64 / self.total as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, u64)> {
        self.counts.iter().map(|(p, &c)| (p, c))
    }

    /// Total variation distance to `exact`. States missing from `exact`
    /// count with probability zero.
    pub fn tv_distance(&self, exact: &[(Partition, f64)]) -> f64 {
        let exact_map: HashMap<&Partition, f64> = exact.iter().map(|(p, m)| (p, *m)).collect();
        let mut sum = 0.0;
        for (p, m) in exact {
            sum += (self.frequency(p) - m).abs();
        }
        for p in self.counts.keys() {
            if !exact_map.contains_key(p) {
                sum += self.frequency(p);
            }
        }
        sum / 2.0
    }
}

/// Total variation distance between two distributions on the same keys.
pub fn tv_distance<K: Eq + std::hash::Hash>(a: &HashMap<K, f64>, b: &HashMap<K, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, x) in a {
        sum += (x - b.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, y) in b {
        if !a.contains_key(k) {
            sum += y.abs();
        }
    }
    sum / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn tv_of_point_masses() {
        let mut e = EmpiricalCounts::new();
        e.record(&p("2"));
        e.record(&p("2"));
        e.record(&p("1,1"));
        let exact = vec![(p("2"), 0.5), (p("1,1"), 0.5)];
        assert!((e.tv_distance(&exact) - 1.0 / 6.0).abs() < 1e-15);
        let other = vec![(p("3"), 1.0)];
        assert!((e.tv_distance(&other) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn merge_adds_counts() {
        let mut a = EmpiricalCounts::new();
        a.record(&p("1"));
        let mut b = EmpiricalCounts::new();
        b.record(&p("1"));
        b.record(&p("2"));
        let m = a.merge(b);
        assert_eq!(m.total(), 3);
        assert_eq!(m.count(&p("1")), 2);
    }
}
