//! Brute-force traces over the fermionic Fock space.
//!
//! A basis state of the level-`l` space is an `l`-tuple of (charge, partition)
//! pairs. On such a state `q^H` is `q` to the total energy, `z_i^{e_ii}` is
//! `z_i` to the `i`-th charge, and each `T(t)` acts by the eigenvalue computed
//! in [`t_eigenvalue`]. Summing over every state below an energy cutoff gives
//! the trace exactly up to that cutoff. Correlation functions of the
//! irreducible pieces are read off from the Schur coordinates of the trace.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::par::*;
use crate::partitions::{
    charge_bound, charge_vectors, partitions_of, ChargedPartition, FockState, GenPartition,
    Partition,
};
use crate::qseries::{int, rational_pow, QSeries, Rational, DEN};
use crate::symfunc::{coeff_or_zero, to_schur_basis, SymLaurentPoly};

/// An insertion point `t = s^2`, given through its square root `s`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TPoint {
    s: Rational,
}

impl TPoint {
    pub fn new(s: Rational) -> Result<Self> {
        if s.is_zero() || s.is_one() || s == -Rational::one() {
            return Err(Error::InvalidTPoint(crate::qseries::format_rational(&s)));
        }
        Ok(TPoint { s })
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn t(&self) -> Rational {
        &self.s * &self.s
    }
}

/// Product of the `s` values of a set of points (the square root of the
/// product of their `t` values).
pub fn s_product<'a, I: IntoIterator<Item = &'a TPoint>>(pts: I) -> Rational {
    pts.into_iter().fold(Rational::one(), |acc, p| acc * p.s())
}

/// Eigenvalue of `T(t)` on one tensor factor:
/// `sum_{k=1}^{K} t^(mu_k - k + 1/2 + c) + t^(c - K + 1/2) / (t - 1)`,
/// where the second term is the closed form of the tail `k > K`.
pub fn factor_eigenvalue(factor: &ChargedPartition, pt: &TPoint) -> Rational {
    let c = factor.charge;
    let parts = factor.shape.parts();
    let big_k = parts.len() as i64;
    let mut acc = Rational::zero();
    for (k, &p) in parts.iter().enumerate() {
        let k = k as i64 + 1;
        acc += rational_pow(pt.s(), 2 * (p as i64 - k + c) + 1);
    }
    acc + rational_pow(pt.s(), 2 * (c - big_k) + 1) / (pt.t() - int(1))
}

/// Eigenvalue of `T(t)` on a basis state: the sum over tensor factors.
pub fn t_eigenvalue(st: &FockState, pt: &TPoint) -> Rational {
    st.factors.iter().map(|f| factor_eigenvalue(f, pt)).sum()
}

fn check_order(order8: i64) -> Result<()> {
    if order8 <= 0 {
        return Err(Error::BadOrder(order8));
    }
    Ok(())
}

/// Trace of `q^H T(t_1)...T(t_n)` over the states with the given charge
/// vector, exact below `order8`.
pub fn charge_sector_trace(charges: &[i64], pts: &[TPoint], order8: i64) -> Result<QSeries> {
    check_order(order8)?;
    let base: i64 = charges.iter().map(|c| 4 * c * c).sum();
    let rest = order8 - base;
    if rest <= 0 {
        return Ok(QSeries::zero(order8));
    }
    let max_total = ((rest - 1) / DEN) as usize;
    let shapes: Vec<Vec<Partition>> = (0..=max_total as u32).map(partitions_of).collect();

    // Per-factor eigenvalue vectors, indexed [factor][size][shape][point].
    let table: Vec<Vec<Vec<Vec<Rational>>>> = charges
        .iter()
        .map(|&c| {
            shapes
                .iter()
                .map(|of_size| {
                    of_size
                        .iter()
                        .map(|p| {
                            let f = ChargedPartition::new(c, p.clone());
                            pts.iter().map(|pt| factor_eigenvalue(&f, pt)).collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut coeffs = vec![Rational::zero(); max_total + 1];
    let mut sums = vec![Rational::zero(); pts.len()];
    accumulate(&table, 0, 0, max_total, &mut sums, &mut coeffs);

    Ok(QSeries::from_terms(
        order8,
        coeffs
            .into_iter()
            .enumerate()
            .map(|(m, c)| (base + DEN * m as i64, c)),
    ))
}

/// Walks every tuple of shapes (one per factor) with total size at most
/// `max_total`, adding each state's eigenvalue product into `coeffs[size]`.
fn accumulate(
    table: &[Vec<Vec<Vec<Rational>>>],
    factor: usize,
    used: usize,
    max_total: usize,
    sums: &mut Vec<Rational>,
    coeffs: &mut [Rational],
) {
    if factor == table.len() {
        let weight = sums.iter().fold(Rational::one(), |acc, x| acc * x);
        coeffs[used] += weight;
        return;
    }
    for size in 0..=(max_total - used) {
        for ev in &table[factor][size] {
            for (s, e) in sums.iter_mut().zip(ev) {
                *s += e;
            }
            accumulate(table, factor + 1, used + size, max_total, sums, coeffs);
            for (s, e) in sums.iter_mut().zip(ev) {
                *s -= e;
            }
        }
    }
}

/// `Tr(z_1^{e_11}...z_l^{e_ll} q^H T(t_1)...T(t_n))` in monomial coordinates,
/// exact below `order8`. Only weakly decreasing charge vectors are summed:
/// the coefficient of `m_mu` is the coefficient of `z^mu`.
pub fn fock_trace(level: usize, pts: &[TPoint], order8: i64) -> Result<SymLaurentPoly> {
    if level == 0 {
        return Err(Error::ZeroLevel);
    }
    check_order(order8)?;
    let sectors: Vec<Vec<i64>> = charge_vectors(level, order8)
        .into_iter()
        .filter(|c| c.windows(2).all(|w| w[0] >= w[1]))
        .collect();
    let traces: Vec<Result<(Vec<i64>, QSeries)>> = sectors
        .into_par_iter()
        .map(|c| charge_sector_trace(&c, pts, order8).map(|tr| (c, tr)))
        .collect();
    let mut out = SymLaurentPoly::new(level);
    for r in traces {
        let (c, tr) = r?;
        out.add_term(GenPartition::new(c)?, &tr)?;
    }
    Ok(out)
}

/// Reference trace: the direct sum over [`crate::partitions::enumerate_states`]
/// with one eigenvalue evaluation per state. Slow; used to cross-check.
pub fn fock_trace_by_states(level: usize, pts: &[TPoint], order8: i64) -> Result<SymLaurentPoly> {
    check_order(order8)?;
    let mut out = SymLaurentPoly::new(level);
    for st in crate::partitions::enumerate_states(level, order8) {
        let c = st.charges();
        if c.windows(2).any(|w| w[0] < w[1]) {
            continue;
        }
        let w = pts
            .iter()
            .fold(Rational::one(), |acc, pt| acc * t_eigenvalue(&st, pt));
        let e = crate::partitions::state_energy(&st);
        out.add_term(GenPartition::new(c)?, &QSeries::monomial(w, e, order8))?;
    }
    Ok(out)
}

/// The trace restricted to the irreducible component labelled `lambda`,
/// extracted as the `s_lambda` coordinate of [`fock_trace`].
pub fn oracle_npoint(
    level: usize,
    lambda: &GenPartition,
    pts: &[TPoint],
    order8: i64,
) -> Result<QSeries> {
    if lambda.level() != level {
        return Err(Error::LengthMismatch {
            expected: level,
            got: lambda.level(),
        });
    }
    check_order(order8)?;
    let bound = charge_bound(order8).unwrap_or(0);
    if lambda.entries().iter().any(|x| x.abs() > bound) {
        return Err(Error::CutoffTooSmall {
            entries: lambda.entries().to_vec(),
            bound,
        });
    }
    let trace = fock_trace(level, pts, order8)?;
    oracle_from_trace(&trace, lambda, order8)
}

/// Schur-coordinate extraction from a precomputed trace; lets callers reuse
/// one trace for many labels.
pub fn oracle_from_trace(
    trace: &SymLaurentPoly,
    lambda: &GenPartition,
    order8: i64,
) -> Result<QSeries> {
    let coords = to_schur_basis(trace)?;
    Ok(coeff_or_zero(&coords, lambda, order8))
}

/// Level-1 trace over the charge-`k` sector only.
pub fn oracle_level1_charge(k: i64, pts: &[TPoint], order8: i64) -> Result<QSeries> {
    charge_sector_trace(&[k], pts, order8)
}
