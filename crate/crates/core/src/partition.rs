//! Integer partitions and Young-diagram geometry.
//!
//! A [`Partition`] is an immutable, non-increasing list of positive parts.
//! Boxes are addressed by 1-indexed `(row, col)` cells, rows growing
//! downward and columns to the right.
//!
//! Within one size, partitions are ordered reverse-lexicographically:
//! `(4) < (3,1) < (2,2) < (2,1,1) < (1,1,1,1)`. Across sizes the smaller
//! size comes first. [`enumerate_partitions`] emits a level in this order,
//! and every map keyed by partitions iterates in it.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::thoma::ThomaPoint;

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

/// A box of a Young diagram, 1-indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl Partition {
    /// Builds a partition, dropping trailing zero parts.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) {
            return Err(Error::Domain(format!("zero part inside {parts:?}")));
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!("parts not non-increasing: {parts:?}")));
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary positive parts into a partition.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub(crate) fn from_sorted_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(!parts.contains(&0));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The i-th part, 1-indexed; zero past the end.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Multiplicity α_i(η): the number of parts equal to `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(1);
        let parts = (1..=width)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    /// Length of the main diagonal.
    pub fn diagonal_len(&self) -> usize {
        self.parts
            .iter()
            .enumerate()
            .take_while(|(i, &p)| p > *i)
            .count()
    }

    pub fn contains_cell(&self, cell: Cell) -> bool {
        cell.row >= 1 && cell.col >= 1 && self.part(cell.row) >= cell.col
    }

    /// True when the diagram of `other` fits inside this one.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p).map(move |j| Cell::new(i + 1, j)))
    }

    /// Arm and leg lengths `(η_i − j, η'_j − i)` of a box.
    pub fn arm_leg(&self, cell: Cell) -> Result<(usize, usize)> {
        if !self.contains_cell(cell) {
            return Err(Error::Domain(format!("box {cell} outside diagram {self}")));
        }
        let arm = self.part(cell.row) - cell.col;
        let col_height = self.parts.iter().take_while(|&&p| p >= cell.col).count();
        Ok((arm, col_height - cell.row))
    }

    pub(crate) fn arm_leg_unchecked(&self, conj: &Partition, cell: Cell) -> (usize, usize) {
        (self.part(cell.row) - cell.col, conj.part(cell.col) - cell.row)
    }

    /// Partition with one box added in the given row, if that yields a partition.
    pub fn add_box(&self, row: usize) -> Option<(Partition, Cell)> {
        if row == 0 || row > self.len() + 1 {
            return None;
        }
        let current = self.part(row);
        if row > 1 && self.part(row - 1) == current {
            return None;
        }
        let mut parts = self.parts.clone();
        if row > parts.len() {
            parts.push(1);
        } else {
            parts[row - 1] += 1;
        }
        Some((Partition { parts }, Cell::new(row, current + 1)))
    }

    /// Partition with the last box of the given row removed, if that yields a partition.
    pub fn remove_box(&self, row: usize) -> Option<(Partition, Cell)> {
        if row == 0 || row > self.len() {
            return None;
        }
        let current = self.part(row);
        if self.part(row + 1) == current {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[row - 1] -= 1;
        if parts[row - 1] == 0 {
            parts.pop();
        }
        Some((Partition { parts }, Cell::new(row, current)))
    }

    /// All ζ ⊃ η with one more box, together with the added box, top row first.
    pub fn covers(&self) -> Vec<(Partition, Cell)> {
        (1..=self.len() + 1).filter_map(|r| self.add_box(r)).collect()
    }

    /// All ζ ⊂ η with one fewer box, together with the removed box, bottom row
    /// first (so the results come out in canonical order).
    pub fn cocovers(&self) -> Vec<(Partition, Cell)> {
        (1..=self.len()).rev().filter_map(|r| self.remove_box(r)).collect()
    }

    /// The single box in `self` but not in `smaller`, when `smaller` is a cocover.
    pub fn added_cell(&self, smaller: &Partition) -> Option<Cell> {
        if self.size() != smaller.size() + 1 || !self.contains(smaller) {
            return None;
        }
        (1..=self.len())
            .find(|&r| self.part(r) != smaller.part(r))
            .map(|r| Cell::new(r, self.part(r)))
    }

    pub fn frobenius(&self) -> FrobeniusCoords {
        let conj = self.conjugate();
        let r = self.diagonal_len();
        let (a, b) = (1..=r)
            .map(|i| {
                let (arm, leg) = self.arm_leg_unchecked(&conj, Cell::new(i, i));
                (arm as f64 + 0.5, leg as f64 + 0.5)
            })
            .unzip();
        FrobeniusCoords { a, b }
    }

    /// The point η̃/n of the Thoma simplex.
    pub fn scaled_frobenius(&self) -> Result<ThomaPoint> {
        if self.is_empty() {
            return Err(Error::Domain("scaled Frobenius coordinates of the empty partition".into()));
        }
        let n = self.size() as f64;
        let f = self.frobenius();
        ThomaPoint::new(
            f.a.iter().map(|x| x / n).collect(),
            f.b.iter().map(|x| x / n).collect(),
        )
    }

    /// Σ (i−1) η_i.
    pub fn n_statistic(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, &p)| i * p).sum()
    }

    /// Dominance order: `self ⊴ other` when every partial sum of `self`
    /// is at most the matching partial sum of `other`. Sizes must agree.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let (mut a, mut b) = (0usize, 0usize);
        for i in 1..=self.len().max(other.len()) {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return false;
            }
        }
        true
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "({self})")
        }
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// `"5,4,1"`; the empty string (or `∅`) is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() || s == "∅" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if parts.contains(&0) {
            return Err(Error::Parse(format!("zero part in {s:?}")));
        }
        Partition::new(parts)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrobeniusCoords {
    /// a(i,i) + 1/2 for i = 1..r.
    pub a: Vec<f64>,
    /// l(i,i) + 1/2 for i = 1..r.
    pub b: Vec<f64>,
}

impl FrobeniusCoords {
    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn to_partition(&self) -> Result<Partition> {
        let r = self.a.len();
        if self.b.len() != r {
            return Err(Error::Domain("Frobenius coordinate lists differ in length".into()));
        }
        let as_int = |x: f64| -> Result<usize> {
            let k = x - 0.5;
            if k < 0.0 || k.fract() != 0.0 {
                return Err(Error::Domain(format!("{x} is not a non-negative half-integer")));
            }
            Ok(k as usize)
        };
        let arms = self.a.iter().map(|&x| as_int(x)).collect::<Result<Vec<_>>>()?;
        let legs = self.b.iter().map(|&x| as_int(x)).collect::<Result<Vec<_>>>()?;
        let mut parts: Vec<usize> = arms.iter().enumerate().map(|(i, a)| a + i + 1).collect();
        let height = legs.first().map_or(0, |l| l + 1);
        for row in r + 1..=height {
            parts.push(legs.iter().enumerate().filter(|(j, &l)| l + j + 1 >= row).count());
        }
        Partition::new(parts)
    }
}

/// All partitions of `n` in reverse-lexicographic order.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Partition::empty());
        return out;
    }
    let mut parts = vec![n];
    loop {
        out.push(Partition::from_sorted_unchecked(parts.clone()));
        // rightmost part larger than one
        let Some(k) = parts.iter().rposition(|&p| p > 1) else {
            break;
        };
        let ones = parts.len() - k - 1;
        let v = parts[k] - 1;
        parts.truncate(k);
        parts.push(v);
        let mut rest = ones + 1;
        while rest > 0 {
            let piece = rest.min(v);
            parts.push(piece);
            rest -= piece;
        }
    }
    out
}

/// Partitions of every size `0..=max_n`, level by level.
pub fn enumerate_up_to(max_n: usize) -> Vec<Vec<Partition>> {
    (0..=max_n).map(enumerate_partitions).collect()
}

/// All partitions contained in `outer`, grouped by size `0..=|outer|`.
pub fn subpartitions(outer: &Partition) -> Vec<Vec<Partition>> {
    let n = outer.size();
    let mut levels: Vec<Vec<Partition>> = vec![Vec::new(); n + 1];
    let mut stack = vec![outer.clone()];
    let mut seen = std::collections::HashSet::new();
    seen.insert(outer.clone());
    while let Some(p) = stack.pop() {
        for (q, _) in p.cocovers() {
            if seen.insert(q.clone()) {
                stack.push(q);
            }
        }
        levels[p.size()].push(p);
    }
    for level in &mut levels {
        level.sort();
    }
    levels
}

/// p(n) by Euler's pentagonal-number recurrence.
pub fn partition_count(n: usize) -> u128 {
    let mut p = vec![0u128; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut acc: i128 = 0;
        for k in 1.. {
            let k = k as i64;
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign: i128 = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[m - g1] as i128;
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                acc += sign * p[m - g2] as i128;
            }
        }
        p[m] = acc as u128;
    }
    p[n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn enumerates_small_levels() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        let four: Vec<String> = enumerate_partitions(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(four, ["4", "3,1", "2,2", "2,1,1", "1,1,1,1"]);
        assert_eq!(enumerate_partitions(10).len(), 42);
    }

    #[test]
    fn enumeration_matches_pentagonal_counts() {
        for n in 0..=40 {
            assert_eq!(enumerate_partitions(n).len() as u128, partition_count(n), "n = {n}");
        }
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        for n in 0..=12 {
            let level = enumerate_partitions(n);
            assert!(level.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn arm_leg_examples() {
        assert_eq!(p("2,1").arm_leg(Cell::new(1, 1)).unwrap(), (1, 1));
        assert_eq!(p("5,4,1").arm_leg(Cell::new(1, 5)).unwrap(), (0, 0));
        assert_eq!(p("2,2").arm_leg(Cell::new(1, 1)).unwrap(), (1, 1));
        assert!(matches!(p("2,1").arm_leg(Cell::new(2, 2)), Err(Error::Domain(_))));
    }

    #[test]
    fn frobenius_examples() {
        let f = p("2,1").frobenius();
        assert_eq!((f.a.clone(), f.b.clone()), (vec![1.5], vec![1.5]));
        let f = p("1").frobenius();
        assert_eq!((f.a, f.b), (vec![0.5], vec![0.5]));
        let w = p("2,1").scaled_frobenius().unwrap();
        assert_eq!(w.alpha(), &[0.5]);
        assert_eq!(w.beta(), &[0.5]);
        assert_eq!(w.gamma(), 0.0);
        assert!(Partition::empty().scaled_frobenius().is_err());
    }

    #[test]
    fn cover_examples() {
        let c: Vec<_> = p("1").covers();
        assert_eq!(c, vec![(p("2"), Cell::new(1, 2)), (p("1,1"), Cell::new(2, 1))]);
        let c = p("2,1").cocovers();
        assert_eq!(c, vec![(p("2"), Cell::new(2, 1)), (p("1,1"), Cell::new(1, 2))]);
        assert_eq!(Partition::empty().covers(), vec![(p("1"), Cell::new(1, 1))]);
        assert!(Partition::empty().cocovers().is_empty());
    }

    #[test]
    fn covers_exceed_cocovers_by_one() {
        for n in 0..=12 {
            for eta in enumerate_partitions(n) {
                assert_eq!(eta.covers().len(), eta.cocovers().len() + 1, "{eta:?}");
            }
        }
    }

    #[test]
    fn conjugation_maps_covers_to_covers() {
        for n in 0..=8 {
            for eta in enumerate_partitions(n) {
                let mut a: Vec<_> = eta.covers().into_iter().map(|(z, _)| z.conjugate()).collect();
                let mut b: Vec<_> = eta.conjugate().covers().into_iter().map(|(z, _)| z).collect();
                a.sort();
                b.sort();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn subpartitions_of_two_two() {
        let levels = subpartitions(&p("2,2"));
        let sizes: Vec<usize> = levels.iter().map(|l| l.len()).collect();
        assert_eq!(sizes, [1, 1, 2, 1, 1]);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("5,4,1").to_string(), "5,4,1");
        assert_eq!(p(""), Partition::empty());
        assert_eq!(Partition::empty().to_string(), "");
        assert!("2,3".parse::<Partition>().is_err());
        assert!("2,0,1".parse::<Partition>().is_err());
    }

    #[test]
    fn dominance() {
        assert!(p("2,2").dominated_by(&p("3,1")));
        assert!(!p("3,1").dominated_by(&p("2,2")));
        assert!(!p("3,3").dominated_by(&p("4,1,1")) && !p("4,1,1").dominated_by(&p("3,3")));
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        proptest::collection::vec(1usize..8, 0..8).prop_map(Partition::from_unsorted)
    }

    proptest! {
        #[test]
        fn conjugate_is_involution(eta in arb_partition()) {
            prop_assert_eq!(eta.conjugate().conjugate(), eta.clone());
            prop_assert_eq!(eta.conjugate().size(), eta.size());
        }

        #[test]
        fn multiplicities_sum_to_size(eta in arb_partition()) {
            let n = eta.size();
            let s: usize = (1..=n).map(|i| i * eta.multiplicity(i)).sum();
            prop_assert_eq!(s, n);
        }

        #[test]
        fn frobenius_round_trips(eta in arb_partition()) {
            let f = eta.frobenius();
            let total: f64 = f.a.iter().chain(&f.b).sum();
            prop_assert_eq!(total, eta.size() as f64);
            prop_assert!(f.a.windows(2).all(|w| w[0] > w[1]));
            prop_assert!(f.b.windows(2).all(|w| w[0] > w[1]));
            prop_assert_eq!(f.to_partition().unwrap(), eta);
        }
    }
}
