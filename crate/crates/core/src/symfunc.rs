//! Monomial and Schur symmetric Laurent polynomials indexed by generalized
//! partitions, and the Kostka matrix relating the two bases.
//!
//! Orientation: `K[lambda][mu]` is the coefficient of `m_mu` in `s_lambda`,
//! and `Kinv[mu][lambda]` is the coefficient of `s_lambda` in `m_mu`.
//!
//! Index sets are the generalized partitions of a fixed size whose entries lie
//! in a box `[lo, hi]`, sorted in decreasing lexicographic order. That order
//! refines dominance, so `K` is upper unitriangular. A box is closed under
//! dominance intervals (anything between two members dominance-wise has its
//! entries in the same box), so the inverse of the finite block agrees with
//! the corresponding block of the infinite inverse.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::json;

use crate::error::{Error, Result};
use crate::par::*;
use crate::partitions::{gen_partitions, GenPartition};
use crate::qseries::{int, QSeries, EXACT_ORDER8};

/// Symmetric Laurent polynomial in `z_1..z_level`, stored in monomial
/// coordinates: `f = sum_mu coeffs[mu] m_mu`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymLaurentPoly {
    level: usize,
    coeffs: BTreeMap<GenPartition, QSeries>,
}

impl SymLaurentPoly {
    pub fn new(level: usize) -> Self {
        SymLaurentPoly {
            level,
            coeffs: BTreeMap::new(),
        }
    }

    /// `c * m_mu`.
    pub fn monomial(mu: GenPartition, c: QSeries) -> Self {
        let mut f = SymLaurentPoly::new(mu.level());
        f.add_term(mu, &c).expect("level matches by construction");
        f
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Adds `c * m_mu`.
    pub fn add_term(&mut self, mu: GenPartition, c: &QSeries) -> Result<()> {
        if mu.level() != self.level {
            return Err(Error::LengthMismatch {
                expected: self.level,
                got: mu.level(),
            });
        }
        let next = match self.coeffs.remove(&mu) {
            Some(old) => &old + c,
            None => c.clone(),
        };
        if !next.is_zero() {
            self.coeffs.insert(mu, next);
        }
        Ok(())
    }

    pub fn get(&self, mu: &GenPartition) -> Option<&QSeries> {
        self.coeffs.get(mu)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&GenPartition, &QSeries)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GenPartition> {
        self.coeffs.keys()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &SymLaurentPoly) -> Result<SymLaurentPoly> {
        let mut out = self.clone();
        for (mu, c) in &other.coeffs {
            out.add_term(mu.clone(), c)?;
        }
        Ok(out)
    }

    pub fn truncate(&self, order8: i64) -> SymLaurentPoly {
        SymLaurentPoly {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v.truncate(order8)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// `prod_{i=1}^{level} g(z_i)` for a one-variable Laurent polynomial `g`
    /// (given as a level-1 poly). The coefficient of `m_mu` is
    /// `prod_i g[mu_i]`.
    pub fn product_of_copies(g: &SymLaurentPoly, level: usize) -> Result<SymLaurentPoly> {
        if g.level != 1 {
            return Err(Error::LengthMismatch {
                expected: 1,
                got: g.level,
            });
        }
        let keys: Vec<(i64, &QSeries)> = g.coeffs.iter().map(|(k, v)| (k.first(), v)).collect();
        let mut out = SymLaurentPoly::new(level);
        // Weakly decreasing index tuples into `keys` (sorted ascending).
        fn go(start: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if slots == 0 {
                out.push(cur.clone());
                return;
            }
            for i in (0..=start).rev() {
                cur.push(i);
                go(i, slots - 1, cur, out);
                cur.pop();
            }
        }
        if keys.is_empty() {
            return Ok(out);
        }
        let mut tuples = Vec::new();
        go(keys.len() - 1, level, &mut Vec::new(), &mut tuples);
        let terms: Vec<(GenPartition, QSeries)> = tuples
            .par_iter()
            .map(|t| {
                let mu = GenPartition::new(t.iter().map(|&i| keys[i].0).collect())
                    .expect("descending by construction");
                let mut c = QSeries::one(EXACT_ORDER8);
                for &i in t {
                    c = c.mul(keys[i].1);
                }
                (mu, c)
            })
            .collect();
        for (mu, c) in terms {
            out.add_term(mu, &c)?;
        }
        Ok(out)
    }

    /// First monomial (and exponent) at which the two polynomials differ below
    /// their common truncation.
    pub fn first_difference(&self, other: &SymLaurentPoly) -> Option<(GenPartition, i64)> {
        let mut keys: Vec<&GenPartition> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut best: Option<(GenPartition, i64)> = None;
        for k in keys {
            let d = match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.first_difference(b),
                (Some(a), None) | (None, Some(a)) => a.low_exp8_nonzero(),
                (None, None) => None,
            };
            if let Some(e) = d {
                if best.as_ref().is_none_or(|(_, b)| e < *b) {
                    best = Some((k.clone(), e));
                }
            }
        }
        best
    }

    /// Value at `z_1 = ... = z_level = 1`: each `m_mu` counts the distinct
    /// rearrangements of `mu`.
    pub fn at_ones(&self) -> QSeries {
        let mut acc = QSeries::zero(EXACT_ORDER8);
        for (mu, c) in &self.coeffs {
            acc = &acc + &c.scale(&int(orbit_size(mu.entries())));
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "level": self.level,
            "monomials": self
                .coeffs
                .iter()
                .map(|(k, v)| json!([k.entries(), v.to_json()]))
                .collect::<Vec<_>>(),
        })
    }
}

/// Number of distinct rearrangements of a sorted tuple.
fn orbit_size(entries: &[i64]) -> i64 {
    let fact = |n: usize| (1..=n as i64).product::<i64>();
    let mut denom = 1;
    let mut i = 0;
    while i < entries.len() {
        let j = entries[i..]
            .iter()
            .take_while(|&&x| x == entries[i])
            .count();
        denom *= fact(j);
        i += j;
    }
    fact(entries.len()) / denom
}

fn shifted_to_nonnegative(lambda: &GenPartition, mu: &GenPartition) -> (Vec<i64>, Vec<i64>) {
    let r = (-lambda.last().min(mu.last())).max(0);
    (
        lambda.shift(r).entries().to_vec(),
        mu.shift(r).entries().to_vec(),
    )
}

/// Shapes obtained from `shape` by removing a horizontal strip of `size` cells.
fn strip_removals(shape: &[i64], size: i64) -> Vec<Vec<i64>> {
    fn go(i: usize, rest: i64, shape: &[i64], inner: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == shape.len() {
            if rest == 0 {
                out.push(inner.clone());
            }
            return;
        }
        let below = shape.get(i + 1).copied().unwrap_or(0);
        for take in 0..=(shape[i] - below).min(rest) {
            inner[i] = shape[i] - take;
            go(i + 1, rest - take, shape, inner, out);
        }
        inner[i] = shape[i];
    }
    let mut out = Vec::new();
    go(0, size, shape, &mut shape.to_vec(), &mut out);
    out
}

/// Number of semistandard tableaux of shape `shape` (nonnegative, weakly
/// decreasing) and content `content` with entries in `1..=content.len()`.
fn ssyt_count(shape: &[i64], content: &[i64]) -> i64 {
    fn go(
        shape: &[i64],
        k: usize,
        content: &[i64],
        memo: &mut HashMap<(Vec<i64>, usize), i64>,
    ) -> i64 {
        let rows = shape.iter().filter(|&&x| x > 0).count();
        if k == 0 {
            return i64::from(rows == 0);
        }
        if rows > k {
            return 0;
        }
        let key = (shape.to_vec(), k);
        if let Some(v) = memo.get(&key) {
            return *v;
        }
        // The cells holding the entry k form a horizontal strip.
        let total = strip_removals(shape, content[k - 1])
            .iter()
            .map(|inner| go(inner, k - 1, content, memo))
            .sum();
        memo.insert(key, total);
        total
    }
    if content.iter().any(|&c| c < 0) {
        return 0;
    }
    go(shape, content.len(), content, &mut HashMap::new())
}

/// Kostka number for generalized partitions: shift both arguments by a
/// common constant into ordinary partitions and count tableaux.
pub fn kostka_number(lambda: &GenPartition, mu: &GenPartition) -> Result<i64> {
    if lambda.level() != mu.level() {
        return Err(Error::LengthMismatch {
            expected: lambda.level(),
            got: mu.level(),
        });
    }
    if lambda.size() != mu.size() || !lambda.dominates(mu) {
        return Ok(0);
    }
    let (shape, content) = shifted_to_nonnegative(lambda, mu);
    Ok(ssyt_count(&shape, &content))
}

/// Kostka matrix and its inverse on one size class within an entry box.
#[derive(Clone, Debug)]
pub struct KostkaTable {
    size: i64,
    level: usize,
    lo: i64,
    hi: i64,
    index: Vec<GenPartition>,
    position: HashMap<GenPartition, usize>,
    k: Vec<Vec<i64>>,
    kinv: Vec<Vec<i64>>,
}

impl KostkaTable {
    pub fn size(&self) -> i64 {
        self.size
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn index(&self) -> &[GenPartition] {
        &self.index
    }

    pub fn position(&self, p: &GenPartition) -> Option<usize> {
        self.position.get(p).copied()
    }

    pub fn k_matrix(&self) -> &[Vec<i64>] {
        &self.k
    }

    pub fn kinv_matrix(&self) -> &[Vec<i64>] {
        &self.kinv
    }

    /// `K[lambda][mu]`, zero for labels outside the index.
    pub fn k(&self, lambda: &GenPartition, mu: &GenPartition) -> i64 {
        match (self.position(lambda), self.position(mu)) {
            (Some(i), Some(j)) => self.k[i][j],
            _ => 0,
        }
    }

    /// `Kinv[mu][lambda]`: coefficient of `s_lambda` in `m_mu`.
    pub fn kinv(&self, mu: &GenPartition, lambda: &GenPartition) -> i64 {
        match (self.position(mu), self.position(lambda)) {
            (Some(i), Some(j)) => self.kinv[i][j],
            _ => 0,
        }
    }

    /// CSV with a header row and a label column.
    pub fn to_csv(&self, inverse: bool) -> String {
        let m = if inverse { &self.kinv } else { &self.k };
        let label = |p: &GenPartition| format!("\"{p}\"");
        let mut out = String::new();
        out.push_str(if inverse { "mu\\lambda" } else { "lambda\\mu" });
        for p in &self.index {
            out.push(',');
            out.push_str(&label(p));
        }
        out.push('\n');
        for (p, row) in self.index.iter().zip(m) {
            out.push_str(&label(p));
            for x in row {
                out.push(',');
                out.push_str(&x.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Inverts an upper unitriangular integer matrix by back-substitution.
fn unitriangular_inverse(k: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = k.len();
    let columns: Vec<Result<Vec<i64>>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut col = vec![0i64; n];
            col[j] = 1;
            for i in (0..j).rev() {
                let mut acc: i64 = 0;
                for m in (i + 1)..=j {
                    let term = k[i][m]
                        .checked_mul(col[m])
                        .ok_or(Error::Overflow("inverse Kostka"))?;
                    acc = acc
                        .checked_add(term)
                        .ok_or(Error::Overflow("inverse Kostka"))?;
                }
                col[i] = -acc;
            }
            Ok(col)
        })
        .collect();
    let columns: Vec<Vec<i64>> = columns.into_iter().collect::<Result<_>>()?;
    Ok((0..n)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect())
}

pub fn kostka_table(size: i64, level: usize, lo: i64, hi: i64) -> Result<KostkaTable> {
    if level == 0 {
        return Err(Error::ZeroLevel);
    }
    let index = gen_partitions(level, size, lo, hi);
    if index.is_empty() {
        return Err(Error::InvalidParameter {
            field: "bounds",
            reason: format!(
                "no generalized partitions of size {size} with entries in [{lo}, {hi}]"
            ),
        });
    }
    let rows: Vec<Result<Vec<i64>>> = index
        .par_iter()
        .enumerate()
        .map(|(i, lambda)| {
            let mut row = vec![0i64; index.len()];
            for (j, mu) in index.iter().enumerate().skip(i) {
                row[j] = kostka_number(lambda, mu)?;
            }
            Ok(row)
        })
        .collect();
    let k: Vec<Vec<i64>> = rows.into_iter().collect::<Result<_>>()?;
    let kinv = unitriangular_inverse(&k)?;
    let position = index
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    Ok(KostkaTable {
        size,
        level,
        lo,
        hi,
        index,
        position,
        k,
        kinv,
    })
}

type TableKey = (i64, usize, i64, i64);

fn table_cache() -> &'static Mutex<HashMap<TableKey, Arc<KostkaTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<KostkaTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized [`kostka_table`]. The lock is not held while a table is built.
/// Drops every memoized table.
pub fn clear_table_cache() {
    table_cache().lock().unwrap().clear();
}

pub fn cached_kostka_table(size: i64, level: usize, lo: i64, hi: i64) -> Result<Arc<KostkaTable>> {
    let key = (size, level, lo, hi);
    if let Some(t) = table_cache().lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let table = Arc::new(kostka_table(size, level, lo, hi)?);
    let mut cache = table_cache().lock().unwrap();
    Ok(cache.entry(key).or_insert(table).clone())
}

/// `s_lambda` expanded in monomials; coefficients are exact integers.
pub fn schur_in_monomials(lambda: &GenPartition) -> Result<SymLaurentPoly> {
    let table = cached_kostka_table(lambda.size(), lambda.level(), lambda.last(), lambda.first())?;
    let i = table.position(lambda).expect("lambda lies in its own box");
    let mut f = SymLaurentPoly::new(lambda.level());
    for (mu, k) in table.index().iter().zip(&table.k[i]) {
        if *k != 0 {
            f.add_term(mu.clone(), &QSeries::constant(int(*k)))?;
        }
    }
    Ok(f)
}

/// Schur coordinates of `f`, with the table box for each size class taken
/// from the support of `f` itself.
pub fn to_schur_basis(f: &SymLaurentPoly) -> Result<BTreeMap<GenPartition, QSeries>> {
    schur_coords(f, None)
}

/// Like [`to_schur_basis`], but with a fixed entry box; support outside the
/// box means the caller's cutoff was too small.
pub fn to_schur_basis_within(
    f: &SymLaurentPoly,
    lo: i64,
    hi: i64,
) -> Result<BTreeMap<GenPartition, QSeries>> {
    schur_coords(f, Some((lo, hi)))
}

fn schur_coords(
    f: &SymLaurentPoly,
    bounds: Option<(i64, i64)>,
) -> Result<BTreeMap<GenPartition, QSeries>> {
    let mut classes: BTreeMap<i64, Vec<(&GenPartition, &QSeries)>> = BTreeMap::new();
    for (mu, c) in f.coeffs() {
        if let Some((lo, hi)) = bounds {
            for &x in mu.entries() {
                if x < lo || x > hi {
                    return Err(Error::OutOfTableBounds { entry: x, lo, hi });
                }
            }
        }
        classes.entry(mu.size()).or_default().push((mu, c));
    }
    let classes: Vec<(i64, Vec<(&GenPartition, &QSeries)>)> = classes.into_iter().collect();
    let parts: Vec<Result<Vec<(GenPartition, QSeries)>>> = classes
        .par_iter()
        .map(|(size, members)| {
            let (lo, hi) = bounds.unwrap_or_else(|| {
                let lo = members.iter().map(|(m, _)| m.last()).min().unwrap();
                let hi = members.iter().map(|(m, _)| m.first()).max().unwrap();
                (lo, hi)
            });
            let table = cached_kostka_table(*size, f.level(), lo, hi)?;
            let mut acc: BTreeMap<usize, QSeries> = BTreeMap::new();
            for (mu, c) in members {
                let i = table.position(mu).expect("support lies in the box");
                for (j, &x) in table.kinv[i].iter().enumerate() {
                    if x != 0 {
                        let term = c.scale(&int(x));
                        let next = match acc.remove(&j) {
                            Some(old) => &old + &term,
                            None => term,
                        };
                        acc.insert(j, next);
                    }
                }
            }
            Ok(acc
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (table.index[j].clone(), v))
                .collect())
        })
        .collect();
    let mut out = BTreeMap::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Evaluates the coefficient map at a label, returning an exact zero for
/// absent labels when no order is known.
pub fn coeff_or_zero(
    map: &BTreeMap<GenPartition, QSeries>,
    key: &GenPartition,
    order8: i64,
) -> QSeries {
    map.get(key)
        .map(|c| c.truncate(order8))
        .unwrap_or_else(|| QSeries::zero(order8))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn gp(v: &[i64]) -> GenPartition {
        GenPartition::new(v.to_vec()).unwrap()
    }

    /// Fills cells row by row with values 1..=n, checking row-weak and
    /// column-strict conditions, and counts fillings with the given content.
    fn brute_ssyt(shape: &[i64], content: &[i64]) -> i64 {
        let n = content.len() as i64;
        let cells: Vec<(usize, usize)> = shape
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
            .collect();
        let mut grid = vec![vec![0i64; shape.first().copied().unwrap_or(0) as usize]; shape.len()];
        fn go(
            idx: usize,
            cells: &[(usize, usize)],
            grid: &mut Vec<Vec<i64>>,
            n: i64,
            content: &[i64],
        ) -> i64 {
            if idx == cells.len() {
                let mut counts = vec![0i64; content.len()];
                for row in grid.iter() {
                    for &v in row {
                        if v > 0 {
                            counts[(v - 1) as usize] += 1;
                        }
                    }
                }
                return i64::from(counts == content);
            }
            let (r, c) = cells[idx];
            let mut total = 0;
            for v in 1..=n {
                if c > 0 && grid[r][c - 1] > v {
                    continue;
                }
                if r > 0 && grid[r - 1][c] >= v {
                    continue;
                }
                grid[r][c] = v;
                total += go(idx + 1, cells, grid, n, content);
                grid[r][c] = 0;
            }
            total
        }
        go(0, &cells, &mut grid, n, content)
    }

    #[test]
    fn tableau_counts_match_brute_force() {
        for level in 1..=3usize {
            for d in 0..=6 {
                let idx = gen_partitions(level, d, 0, d);
                for lambda in &idx {
                    for mu in &idx {
                        let brute = brute_ssyt(lambda.entries(), mu.entries());
                        assert_eq!(kostka_number(lambda, mu).unwrap(), brute, "{lambda} {mu}");
                    }
                }
            }
        }
    }

    #[test]
    fn kostka_examples() {
        assert_eq!(kostka_number(&gp(&[2, 0]), &gp(&[1, 1])).unwrap(), 1);
        assert_eq!(kostka_number(&gp(&[1, 1]), &gp(&[2, 0])).unwrap(), 0);
        assert_eq!(
            kostka_number(&gp(&[3, -1, -2]), &gp(&[3, -1, -2])).unwrap(),
            1
        );
        assert_eq!(kostka_number(&gp(&[2, 0]), &gp(&[1, 0])).unwrap(), 0);
        assert!(GenPartition::new(vec![1, 0, 1]).is_err());
        assert_eq!(kostka_number(&gp(&[3, 1, 0]), &gp(&[2, 1, 1])).unwrap(), 2);
    }

    #[test]
    fn table_examples() {
        let t = kostka_table(2, 2, 0, 2).unwrap();
        assert_eq!(t.index(), &[gp(&[2, 0]), gp(&[1, 1])]);
        assert_eq!(t.k_matrix(), &[vec![1, 1], vec![0, 1]]);
        assert_eq!(t.kinv_matrix(), &[vec![1, -1], vec![0, 1]]);

        let t = kostka_table(0, 2, -1, 1).unwrap();
        assert_eq!(t.index(), &[gp(&[1, -1]), gp(&[0, 0])]);
        assert_eq!(t.k_matrix(), &[vec![1, 1], vec![0, 1]]);
        assert_eq!(t.kinv(&gp(&[1, -1]), &gp(&[0, 0])), -1);
    }

    #[test]
    fn minimal_row_of_inverse_is_unit() {
        let t = kostka_table(3, 3, -2, 4).unwrap();
        let last = t.index().len() - 1;
        let row = &t.kinv_matrix()[last];
        assert!(row
            .iter()
            .enumerate()
            .all(|(j, &x)| x == i64::from(j == last)));
    }

    #[test]
    fn empty_index_is_rejected() {
        assert!(kostka_table(7, 2, 0, 2).is_err());
    }

    #[test]
    fn schur_examples() {
        let f = schur_in_monomials(&gp(&[1, 0])).unwrap();
        assert_eq!(
            f,
            SymLaurentPoly::monomial(gp(&[1, 0]), QSeries::constant(int(1)))
        );

        let f = schur_in_monomials(&gp(&[1, -1])).unwrap();
        let mut want = SymLaurentPoly::monomial(gp(&[1, -1]), QSeries::constant(int(1)));
        want.add_term(gp(&[0, 0]), &QSeries::constant(int(1)))
            .unwrap();
        assert_eq!(f, want);

        let f = schur_in_monomials(&gp(&[-2, -2, -2])).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn schur_coordinates() {
        let one = QSeries::constant(int(1));
        let c = to_schur_basis(&SymLaurentPoly::monomial(gp(&[0, 0]), one.clone())).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[&gp(&[0, 0])], one);

        let c = to_schur_basis(&SymLaurentPoly::monomial(gp(&[1, -1]), one.clone())).unwrap();
        assert_eq!(c[&gp(&[1, -1])], one);
        assert_eq!(c[&gp(&[0, 0])], QSeries::constant(int(-1)));
    }

    #[test]
    fn schur_round_trip() {
        for level in 1..=3usize {
            for d in -6..=6 {
                for lambda in gen_partitions(level, d, -6, 6) {
                    let lsq: i64 = lambda.entries().iter().map(|x| x.abs()).sum();
                    if lsq > 6 {
                        continue;
                    }
                    let f = schur_in_monomials(&lambda).unwrap();
                    let c = to_schur_basis(&f).unwrap();
                    assert_eq!(c.len(), 1, "{lambda}");
                    assert_eq!(c[&lambda], QSeries::constant(int(1)));
                }
            }
        }
    }

    #[test]
    fn out_of_bounds_support() {
        let f = SymLaurentPoly::monomial(gp(&[3, -3]), QSeries::constant(int(1)));
        assert!(matches!(
            to_schur_basis_within(&f, -2, 2),
            Err(Error::OutOfTableBounds { .. })
        ));
    }

    #[test]
    fn product_of_copies_coefficients() {
        // g = z^-1 + 2 + 3z
        let mut g = SymLaurentPoly::new(1);
        for (k, c) in [(-1, 1), (0, 2), (1, 3)] {
            g.add_term(gp(&[k]), &QSeries::constant(int(c))).unwrap();
        }
        let f = SymLaurentPoly::product_of_copies(&g, 2).unwrap();
        assert_eq!(f.len(), 6);
        assert_eq!(f.get(&gp(&[1, -1])).unwrap(), &QSeries::constant(int(3)));
        assert_eq!(f.get(&gp(&[1, 1])).unwrap(), &QSeries::constant(int(9)));
        assert_eq!(f.get(&gp(&[0, 0])).unwrap(), &QSeries::constant(int(4)));
    }

    #[test]
    fn level_mismatch() {
        let mut f = SymLaurentPoly::new(2);
        assert!(f.add_term(gp(&[1]), &QSeries::constant(int(1))).is_err());
    }

    #[test]
    fn zero_is_dropped() {
        let mut f = SymLaurentPoly::monomial(gp(&[1]), QSeries::constant(int(1)));
        f.add_term(gp(&[1]), &QSeries::constant(int(-1))).unwrap();
        assert!(f.is_empty());
        assert!(QSeries::zero(8).low_exp8_nonzero().is_none());
        assert!(int(0).is_zero());
    }
}
