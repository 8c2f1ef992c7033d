//! The Kingman and Jack branching graphs.
//!
//! Dimensions are defined by the recursion `dim(∅) = 1`,
//! `dim(ζ) = Σ_{η ↗ ζ} χ(η, ζ) dim(η)` and computed exactly. Closed forms
//! only appear in [`closed_form_report`], where they are compared against
//! the recursion.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, Cell, Partition};
use crate::rational::{factorial, format_rational, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Kingman,
    /// Jack graph with parameter ϑ > 0; ϑ = 1 is the Young graph.
    Jack(Rational),
}

impl GraphKind {
    pub fn jack(vartheta: Rational) -> Result<Self> {
        if vartheta <= Rational::zero() {
            return Err(Error::Parameter(format!(
                "vartheta must be positive, got {}",
                format_rational(&vartheta)
            )));
        }
        Ok(GraphKind::Jack(vartheta))
    }

    pub fn young() -> Self {
        GraphKind::Jack(Rational::one())
    }
}

/// Weight χ(η, ζ) of the edge that adds `cell` to `eta`.
fn weight_for_cell(kind: &GraphKind, eta: &Partition, zeta: &Partition, cell: Cell) -> Rational {
    match kind {
        GraphKind::Kingman => int(zeta.multiplicity(zeta.part(cell.row)) as i64),
        GraphKind::Jack(t) => {
            // boxes of column `cell.col` in eta are rows 1..cell.row-1
            let mut acc = Rational::one();
            let height = cell.row - 1;
            for k in 1..=height {
                let a = int((eta.part(k) - cell.col) as i64);
                let l = int((height - k) as i64);
                let one = Rational::one();
                let two = int(2);
                let num = (&a + (&l + &two) * t) * (&a + &one + &l * t);
                let den = (&a + &one + (&l + &one) * t) * (&a + (&l + &one) * t);
                acc *= num / den;
            }
            acc
        }
    }
}

/// χ(η, ζ) for a cover pair η ↗ ζ.
pub fn edge_weight(kind: &GraphKind, eta: &Partition, zeta: &Partition) -> Result<Rational> {
    let cell = zeta
        .added_cell(eta)
        .ok_or_else(|| Error::Domain(format!("{eta:?} -> {zeta:?} is not an edge")))?;
    Ok(weight_for_cell(kind, eta, zeta, cell))
}

/// H(η;ϑ) = Π (a(b) + 1 + l(b)ϑ) and H'(η;ϑ) = Π (a(b) + (1 + l(b))ϑ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookProducts {
    pub h: Rational,
    pub h_prime: Rational,
}

pub fn hook_products(eta: &Partition, vartheta: &Rational) -> HookProducts {
    let conj = eta.conjugate();
    let mut h = Rational::one();
    let mut h_prime = Rational::one();
    for cell in eta.cells() {
        let (a, l) = eta.arm_leg_unchecked(&conj, cell);
        let a = int(a as i64);
        let l = int(l as i64);
        h *= &a + Rational::one() + &l * vartheta;
        h_prime *= &a + (Rational::one() + &l) * vartheta;
    }
    HookProducts { h, h_prime }
}

/// A branching graph with memoized dimension tables.
///
/// Caches are behind `RwLock`s, so a graph can be shared between threads.
#[derive(Debug)]
pub struct BranchingGraph {
    kind: GraphKind,
    dims: RwLock<HashMap<Partition, Rational>>,
    relative: RwLock<HashMap<(Partition, Partition), Rational>>,
}

impl Clone for BranchingGraph {
    fn clone(&self) -> Self {
        BranchingGraph {
            kind: self.kind.clone(),
            dims: RwLock::new(self.dims.read().unwrap().clone()),
            relative: RwLock::new(self.relative.read().unwrap().clone()),
        }
    }
}

impl BranchingGraph {
    pub fn new(kind: GraphKind) -> Self {
        let mut dims = HashMap::new();
        dims.insert(Partition::empty(), Rational::one());
        BranchingGraph {
            kind,
            dims: RwLock::new(dims),
            relative: RwLock::new(HashMap::new()),
        }
    }

    pub fn kind(&self) -> &GraphKind {
        &self.kind
    }

    pub fn edge_weight(&self, eta: &Partition, zeta: &Partition) -> Result<Rational> {
        edge_weight(&self.kind, eta, zeta)
    }

    /// Fills the dimension table for every partition of size `<= max_n`.
    pub fn warm_up(&self, max_n: usize) {
        for n in 1..=max_n {
            for zeta in enumerate_partitions(n) {
                self.dim(&zeta);
            }
        }
    }

    pub fn dim(&self, zeta: &Partition) -> Rational {
        if let Some(d) = self.dims.read().unwrap().get(zeta) {
            return d.clone();
        }
        let mut total = Rational::zero();
        for (eta, cell) in zeta.cocovers() {
            total += weight_for_cell(&self.kind, &eta, zeta, cell) * self.dim(&eta);
        }
        self.dims.write().unwrap().insert(zeta.clone(), total.clone());
        total
    }

    /// Total weight dim(η, ν) of monotone paths from η up to ν.
    pub fn relative_dim(&self, eta: &Partition, nu: &Partition) -> Result<Rational> {
        if !nu.contains(eta) {
            return Err(Error::Domain(format!("{eta:?} is not contained in {nu:?}")));
        }
        if eta.is_empty() {
            return Ok(self.dim(nu));
        }
        Ok(self.relative_dim_inner(eta, nu))
    }

    fn relative_dim_inner(&self, eta: &Partition, nu: &Partition) -> Rational {
        if eta == nu {
            return Rational::one();
        }
        let key = (eta.clone(), nu.clone());
        if let Some(d) = self.relative.read().unwrap().get(&key) {
            return d.clone();
        }
        let mut total = Rational::zero();
        for (mu, cell) in eta.covers() {
            if nu.contains(&mu) {
                total += weight_for_cell(&self.kind, eta, &mu, cell) * self.relative_dim_inner(&mu, nu);
            }
        }
        self.relative.write().unwrap().insert(key, total.clone());
        total
    }

    /// One step of the down chain from ζ: p↓(ζ, η) = χ(η, ζ) dim(η) / dim(ζ).
    pub fn down_prob(&self, zeta: &Partition) -> Result<Vec<(Partition, Rational)>> {
        if zeta.is_empty() {
            return Err(Error::Domain("the down chain is not defined at ∅".into()));
        }
        let dz = self.dim(zeta);
        Ok(zeta
            .cocovers()
            .into_iter()
            .map(|(eta, cell)| {
                let p = weight_for_cell(&self.kind, &eta, zeta, cell) * self.dim(&eta) / &dz;
                (eta, p)
            })
            .collect())
    }

    /// H(η, ν) = dim(η) dim(η, ν) / dim(ν): the law of the down chain
    /// started at ν after |ν| − |η| steps.
    pub fn kernel_h(&self, eta: &Partition, nu: &Partition) -> Result<Rational> {
        let rel = self.relative_dim(eta, nu)?;
        Ok(self.dim(eta) * rel / self.dim(nu))
    }
}

/// One row of the dimension closed-form comparison.
#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormRow {
    pub partition: String,
    pub recursion: String,
    /// n!/Π η_i! for Kingman, n!/(H H') for Jack.
    pub stated_closed_form: String,
    pub stated_matches: bool,
    /// Jack only: n!/H(η;ϑ).
    pub hook_closed_form: Option<String>,
    pub hook_matches: Option<bool>,
}

/// Compares recursion dimensions with closed forms for every partition of size 1..=max_n.
pub fn closed_form_report(graph: &BranchingGraph, max_n: usize) -> Vec<ClosedFormRow> {
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let nfact = Rational::from_integer(factorial(n));
        for eta in enumerate_partitions(n) {
            let rec = graph.dim(&eta);
            let row = match graph.kind() {
                GraphKind::Kingman => {
                    let denom: BigInt = eta.parts().iter().map(|&p| factorial(p)).product();
                    let closed = &nfact / Rational::from_integer(denom);
                    ClosedFormRow {
                        partition: eta.to_string(),
                        recursion: format_rational(&rec),
                        stated_matches: closed == rec,
                        stated_closed_form: format_rational(&closed),
                        hook_closed_form: None,
                        hook_matches: None,
                    }
                }
                GraphKind::Jack(t) => {
                    let hp = hook_products(&eta, t);
                    let stated = &nfact / (&hp.h * &hp.h_prime);
                    let hook = &nfact / &hp.h;
                    ClosedFormRow {
                        partition: eta.to_string(),
                        recursion: format_rational(&rec),
                        stated_matches: stated == rec,
                        stated_closed_form: format_rational(&stated),
                        hook_matches: Some(hook == rec),
                        hook_closed_form: Some(format_rational(&hook)),
                    }
                }
            };
            rows.push(row);
        }
    }
    rows
}
