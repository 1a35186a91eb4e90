//! Ordinary partitions, generalized partitions and charged Fock-basis labels.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::DEN;

/// Weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition, dropping trailing zeros.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::NotDecreasing(
                parts.iter().map(|p| *p as i64).collect(),
            ));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All partitions of `d`, largest first part first.
pub fn partitions_of(d: u32) -> Vec<Partition> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, &mut Vec::new(), &mut out);
    out
}

/// Weakly decreasing integer sequence of fixed length (any sign).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenPartition {
    entries: Vec<i64>,
}

impl GenPartition {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::ZeroLevel);
        }
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDecreasing(entries));
        }
        Ok(GenPartition { entries })
    }

    /// The all-`r` sequence `(r^level)`.
    pub fn constant(level: usize, r: i64) -> Self {
        GenPartition {
            entries: vec![r; level],
        }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn level(&self) -> usize {
        self.entries.len()
    }

    pub fn size(&self) -> i64 {
        self.entries.iter().sum()
    }

    /// Sum of squared entries.
    pub fn lambda_sq(&self) -> i64 {
        self.entries.iter().map(|x| x * x).sum()
    }

    pub fn first(&self) -> i64 {
        self.entries[0]
    }

    pub fn last(&self) -> i64 {
        *self.entries.last().unwrap()
    }

    /// Adds `r` to every entry.
    pub fn shift(&self, r: i64) -> Self {
        GenPartition {
            entries: self.entries.iter().map(|x| x + r).collect(),
        }
    }

    /// True when all entries are nonnegative.
    pub fn is_ordinary(&self) -> bool {
        self.last() >= 0
    }

    /// `self` dominates `other` (same size and partial sums never smaller).
    pub fn dominates(&self, other: &GenPartition) -> bool {
        if self.level() != other.level() || self.size() != other.size() {
            return false;
        }
        let mut a = 0;
        let mut b = 0;
        for (x, y) in self.entries.iter().zip(&other.entries) {
            a += x;
            b += y;
            if a < b {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for GenPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.entries.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for GenPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All weakly decreasing `level`-tuples with entries in `[lo, hi]` summing to
/// `size`, in decreasing lexicographic order.
pub fn gen_partitions(level: usize, size: i64, lo: i64, hi: i64) -> Vec<GenPartition> {
    fn go(
        slots: usize,
        rest: i64,
        lo: i64,
        max: i64,
        cur: &mut Vec<i64>,
        out: &mut Vec<GenPartition>,
    ) {
        if slots == 0 {
            if rest == 0 {
                out.push(GenPartition {
                    entries: cur.clone(),
                });
            }
            return;
        }
        let n = slots as i64;
        // The remaining entries lie in [lo, x], so x must satisfy
        // x + (n-1) lo <= rest <= n x.
        let top = max.min(rest - (n - 1) * lo);
        let bottom = lo.max(rest.div_euclid(n) + i64::from(rest.rem_euclid(n) != 0));
        for x in (bottom..=top).rev() {
            cur.push(x);
            go(slots - 1, rest - x, lo, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if level > 0 && lo <= hi {
        go(
            level,
            size,
            lo,
            hi,
            &mut Vec::with_capacity(level),
            &mut out,
        );
    }
    out
}

/// One fermion pair's basis label: a charge and a partition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ChargedPartition {
    pub charge: i64,
    pub shape: Partition,
}

impl ChargedPartition {
    pub fn new(charge: i64, shape: Partition) -> Self {
        ChargedPartition { charge, shape }
    }

    pub fn vacuum(charge: i64) -> Self {
        ChargedPartition {
            charge,
            shape: Partition::empty(),
        }
    }

    /// `8 (|shape| + charge^2 / 2)`.
    pub fn energy8(&self) -> i64 {
        DEN * self.shape.size() as i64 + 4 * self.charge * self.charge
    }
}

/// Basis vector of the `level`-fold fermionic Fock space.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FockState {
    pub factors: Vec<ChargedPartition>,
}

impl FockState {
    pub fn new(factors: Vec<ChargedPartition>) -> Self {
        FockState { factors }
    }

    pub fn level(&self) -> usize {
        self.factors.len()
    }

    pub fn charges(&self) -> Vec<i64> {
        self.factors.iter().map(|f| f.charge).collect()
    }
}

impl Ord for FockState {
    fn cmp(&self, other: &Self) -> Ordering {
        state_energy(self)
            .cmp(&state_energy(other))
            .then_with(|| self.charges().cmp(&other.charges()))
            .then_with(|| {
                let a = self.factors.iter().map(|f| &f.shape);
                let b = other.factors.iter().map(|f| &f.shape);
                a.cmp(b)
            })
    }
}

impl PartialOrd for FockState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Energy eigenvalue on the 1/8 grid: `8 sum_i (|mu_i| + c_i^2/2)`.
pub fn state_energy(st: &FockState) -> i64 {
    st.factors.iter().map(ChargedPartition::energy8).sum()
}

/// Largest `|c|` with `4 c^2 < max_energy8`, or `None` if even charge 0 is
/// excluded.
pub fn charge_bound(max_energy8: i64) -> Option<i64> {
    if max_energy8 <= 0 {
        return None;
    }
    let mut c = 0;
    while 4 * (c + 1) * (c + 1) < max_energy8 {
        c += 1;
    }
    Some(c)
}

/// Charge vectors `c` with `4 sum c_i^2 < max_energy8`, lexicographic order.
pub fn charge_vectors(level: usize, max_energy8: i64) -> Vec<Vec<i64>> {
    fn go(slots: usize, budget: i64, bound: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if slots == 0 {
            out.push(cur.clone());
            return;
        }
        for c in -bound..=bound {
            let cost = 4 * c * c;
            if cost < budget {
                cur.push(c);
                go(slots - 1, budget - cost, bound, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if let Some(bound) = charge_bound(max_energy8) {
        go(level, max_energy8, bound, &mut Vec::new(), &mut out);
    }
    out
}

/// Every tuple of `slots` partitions with total size at most `max_total`.
pub fn partition_tuples(slots: usize, max_total: u32) -> Vec<Vec<Partition>> {
    let by_size: Vec<Vec<Partition>> = (0..=max_total).map(partitions_of).collect();
    fn go(
        slots: usize,
        rest: u32,
        by_size: &[Vec<Partition>],
        cur: &mut Vec<Partition>,
        out: &mut Vec<Vec<Partition>>,
    ) {
        if slots == 0 {
            out.push(cur.clone());
            return;
        }
        for d in 0..=rest {
            for p in &by_size[d as usize] {
                cur.push(p.clone());
                go(slots - 1, rest - d, by_size, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(slots, max_total, &by_size, &mut Vec::new(), &mut out);
    out
}

/// States in one charge sector with energy strictly below `max_energy8`,
/// unsorted.
pub fn states_in_sector(charges: &[i64], max_energy8: i64) -> Vec<FockState> {
    let base: i64 = charges.iter().map(|c| 4 * c * c).sum();
    let rest = max_energy8 - base;
    if rest <= 0 {
        return Vec::new();
    }
    let max_total = ((rest - 1) / DEN) as u32;
    partition_tuples(charges.len(), max_total)
        .into_iter()
        .map(|shapes| {
            FockState::new(
                charges
                    .iter()
                    .zip(shapes)
                    .map(|(c, p)| ChargedPartition::new(*c, p))
                    .collect(),
            )
        })
        .collect()
}

/// The truncated basis of the level-`level` Fock space: all states with
/// energy strictly below `max_energy8`, ordered by (energy, charges, shapes).
pub fn enumerate_states(level: usize, max_energy8: i64) -> Vec<FockState> {
    let mut out: Vec<FockState> = charge_vectors(level, max_energy8)
        .iter()
        .flat_map(|c| states_in_sector(c, max_energy8))
        .collect();
    out.sort();
    out
}
