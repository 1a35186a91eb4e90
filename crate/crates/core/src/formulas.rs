//! Closed formulas for the correlation functions.
//!
//! The level-1 function is a sum over permutations of determinants of theta
//! derivatives divided by products of thetas. Every theta carries a factor
//! `q^(1/8)`, so intermediate series live on the 1/8 grid and inverses reach
//! below zero; formulas are evaluated at a raised working order and then cut
//! back to the requested one (see [`with_guard`]).

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::fock::{s_product, TPoint};
use crate::par::*;
use crate::partitions::{charge_bound, gen_partitions, GenPartition};
use crate::qseries::{euler_phi, int, rational_pow, theta_deriv, QSeries, Rational, DEN};
use crate::symfunc::{cached_kostka_table, SymLaurentPoly};

/// Rejects point sets where some nonempty subset has `prod t = 1`; the
/// theta denominators vanish there.
pub fn check_subset_products(pts: &[TPoint]) -> Result<()> {
    let n = pts.len();
    if n > 20 {
        return Err(Error::InvalidParameter {
            field: "s",
            reason: format!("{n} points is beyond the supported range"),
        });
    }
    for mask in 1u32..(1 << n) {
        let chosen: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let prod = s_product(chosen.iter().map(|&i| &pts[i]));
        if prod.abs().is_one() {
            return Err(Error::SubsetProductOne(chosen));
        }
    }
    Ok(())
}

fn check_level(level: usize, lambda: &GenPartition) -> Result<()> {
    if level == 0 {
        return Err(Error::ZeroLevel);
    }
    if lambda.level() != level {
        return Err(Error::LengthMismatch {
            expected: level,
            got: lambda.level(),
        });
    }
    Ok(())
}

/// Evaluates `f` at increasing working orders until its result is known to
/// `order8`, then truncates.
pub fn with_guard<F>(order8: i64, f: F) -> Result<QSeries>
where
    F: Fn(i64) -> Result<QSeries>,
{
    if order8 <= 0 {
        return Err(Error::BadOrder(order8));
    }
    let mut guard = 2 * DEN;
    loop {
        let r = f(order8 + guard)?;
        if r.order8() >= order8 {
            return Ok(r.truncate(order8));
        }
        guard *= 2;
        if guard > 64 * DEN {
            return Err(Error::Inconsistent(format!(
                "could not reach order8 {order8} (got {})",
                r.order8()
            )));
        }
    }
}

fn factorial(k: u32) -> Rational {
    int((1..=k as i64).product())
}

/// Entry `(i, j)` (1-based) of the determinant for the ordered points
/// `ordered`: `Theta^(j-i+1)(t_1...t_{n-j}) / (j-i+1)!`, and zero when
/// `j - i + 1 < 0` (reciprocal factorials of negative integers vanish).
pub fn bo_matrix_entry(i: usize, j: usize, ordered: &[TPoint], order8: i64) -> Result<QSeries> {
    let n = ordered.len();
    let k = j as i64 - i as i64 + 1;
    if k < 0 {
        return Ok(QSeries::zero(order8));
    }
    let s = s_product(&ordered[..n - j]);
    let th = theta_deriv(k as u32, &s, order8)?;
    Ok(th.scale(&factorial(k as u32).recip()))
}

/// Determinant by the permutation expansion.
pub fn det_leibniz(m: &[Vec<QSeries>], order8: i64) -> QSeries {
    let n = m.len();
    let mut acc = QSeries::zero(order8);
    for perm in permutations(n) {
        let mut term = QSeries::one(order8);
        for (row, &col) in perm.iter().enumerate() {
            term = term.mul(&m[row][col]);
            if term.is_zero() {
                break;
            }
        }
        if permutation_sign(&perm) < 0 {
            acc = &acc - &term;
        } else {
            acc = &acc + &term;
        }
    }
    acc
}

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(m: &[Vec<QSeries>], order8: i64) -> QSeries {
    let n = m.len();
    if n == 0 {
        return QSeries::one(order8);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = QSeries::zero(order8);
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<QSeries>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = m[0][col].mul(&det_cofactor(&minor, order8));
        acc = if col % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

fn determinant(m: &[Vec<QSeries>], order8: i64) -> QSeries {
    if m.len() <= 4 {
        det_leibniz(m, order8)
    } else {
        det_cofactor(m, order8)
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

fn permutation_sign(p: &[usize]) -> i32 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// One permutation's term: `det(...) / (Theta(t_1) Theta(t_1 t_2) ... )`.
fn permutation_term(ordered: &[TPoint], order8: i64) -> Result<QSeries> {
    let n = ordered.len();
    let mut m = Vec::with_capacity(n);
    for i in 1..=n {
        let mut row = Vec::with_capacity(n);
        for j in 1..=n {
            row.push(bo_matrix_entry(i, j, ordered, order8)?);
        }
        m.push(row);
    }
    let mut term = determinant(&m, order8);
    for k in 1..=n {
        let th = theta_deriv(0, &s_product(&ordered[..k]), order8)?;
        term = term.mul(&th.inv()?);
    }
    Ok(term)
}

type SumKey = (Vec<Rational>, i64);

fn sum_cache() -> &'static Mutex<HashMap<SumKey, QSeries>> {
    static CACHE: OnceLock<Mutex<HashMap<SumKey, QSeries>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Drops every memoized permutation sum.
pub fn clear_sum_cache() {
    sum_cache().lock().unwrap().clear();
}

/// The permutation sum `sum_sigma det(...) / prod Theta(...)`, which equals
/// `phi(q) * F_BO`. Known to `order8`; memoized.
pub fn theta_det_sum(pts: &[TPoint], order8: i64) -> Result<QSeries> {
    check_subset_products(pts)?;
    let key = (pts.iter().map(|p| p.s().clone()).collect(), order8);
    if let Some(v) = sum_cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let n = pts.len();
    let value = with_guard(order8, |w| {
        let terms: Vec<Result<QSeries>> = permutations(n)
            .into_par_iter()
            .map(|perm| {
                let ordered: Vec<TPoint> = perm.iter().map(|&i| pts[i].clone()).collect();
                permutation_term(&ordered, w)
            })
            .collect();
        let mut acc = QSeries::zero(w);
        for t in terms {
            acc = &acc + &t?;
        }
        Ok(acc)
    })?;
    if !value.has_integer_exponents() {
        return Err(Error::Inconsistent(
            "theta determinant sum has fractional q-exponents".into(),
        ));
    }
    sum_cache().lock().unwrap().insert(key, value.clone());
    Ok(value)
}

fn inv_phi(order8: i64) -> QSeries {
    euler_phi(order8).inv().expect("phi has constant term 1")
}

/// The level-1 vacuum correlation function `F_BO(q; t_1..t_n)`.
pub fn f_bo(pts: &[TPoint], order8: i64) -> Result<QSeries> {
    let sum = theta_det_sum(pts, order8)?;
    Ok(sum.mul(&inv_phi(order8)).truncate(order8))
}

/// `prod_{i<j} (1 - q^(lambda_i - lambda_j + j - i))`, an exact polynomial.
pub fn vandermonde_factor(lambda: &GenPartition) -> QSeries {
    let e = lambda.entries();
    let mut acc = QSeries::constant(int(1));
    for i in 0..e.len() {
        for j in (i + 1)..e.len() {
            let a = e[i] - e[j] + (j - i) as i64;
            acc = acc.mul(&QSeries::exact([(0, int(1)), (DEN * a, int(-1))]));
        }
    }
    acc
}

/// `q^(lambda^2/2) prod_{i<j} (1 - q^(lambda_i - lambda_j + j - i))`.
pub fn weight_factor(lambda: &GenPartition) -> QSeries {
    vandermonde_factor(lambda).shift8(4 * lambda.lambda_sq())
}

/// `(t_1 ... t_n)^e`.
pub fn t_power(pts: &[TPoint], e: i64) -> Rational {
    rational_pow(&s_product(pts), 2 * e)
}

/// q-dimension of the level-`level` module labelled `lambda`:
/// `q^(lambda^2/2) prod_{i<j}(1 - q^(lambda_i-lambda_j+j-i)) / phi(q)^level`.
pub fn qdim(level: usize, lambda: &GenPartition, order8: i64) -> Result<QSeries> {
    check_level(level, lambda)?;
    if order8 <= 0 {
        return Err(Error::BadOrder(order8));
    }
    let denom = inv_phi(order8).pow(level as u32);
    Ok(weight_factor(lambda).mul(&denom).truncate(order8))
}

/// Level-`level` correlation function from the theta-determinant formula:
/// the prefactor `q^(lambda^2/2) (t_1..t_n)^|lambda| prod(...) / phi^level`
/// times the `level`-th power of the permutation sum.
pub fn npoint_level(
    level: usize,
    lambda: &GenPartition,
    pts: &[TPoint],
    order8: i64,
) -> Result<QSeries> {
    check_level(level, lambda)?;
    check_subset_products(pts)?;
    let prefactor = weight_factor(lambda).scale(&t_power(pts, lambda.size()));
    let l = level as u32;
    with_guard(order8, |w| {
        let sum = theta_det_sum(pts, w)?;
        let ip = inv_phi(w);
        let literal = prefactor.mul(&ip.pow(l)).mul(&sum.pow(l));
        // The same value read as prefactor (without 1/phi^l) times F_BO^l.
        let factored = prefactor.mul(&sum.mul(&ip).pow(l));
        if let Some(e) = literal.first_difference(&factored) {
            return Err(Error::Inconsistent(format!(
                "the two readings of the level-{level} formula differ at q^({e}/8)"
            )));
        }
        Ok(literal)
    })
}

/// `sum_mu q^(mu^2/2) Kinv[mu][lambda]` over generalized partitions `mu` of
/// size `|lambda|`, truncated at `order8`. Only `|mu_i| <= B` with
/// `4 B^2 < order8` can contribute, since `mu^2 >= mu_i^2`.
pub fn kostka_mu_sum(lambda: &GenPartition, order8: i64) -> Result<QSeries> {
    kostka_mu_sum_oriented(lambda, order8, false)
}

/// As [`kostka_mu_sum`], optionally reading the inverse matrix transposed
/// (`Kinv[lambda][mu]`). Used only to report orientation mismatches.
pub fn kostka_mu_sum_oriented(
    lambda: &GenPartition,
    order8: i64,
    transposed: bool,
) -> Result<QSeries> {
    let bound = charge_bound(order8).unwrap_or(0);
    let lo = (-bound).min(lambda.last());
    let hi = bound.max(lambda.first());
    let table = cached_kostka_table(lambda.size(), lambda.level(), lo, hi)?;
    let terms = table
        .index()
        .iter()
        .filter(|mu| 4 * mu.lambda_sq() < order8)
        .map(|mu| {
            let c = if transposed {
                table.kinv(lambda, mu)
            } else {
                table.kinv(mu, lambda)
            };
            (4 * mu.lambda_sq(), int(c))
        });
    Ok(QSeries::from_terms(order8, terms))
}

/// Level-`level` correlation function from the inverse-Kostka formula:
/// `(t_1..t_n)^|lambda| F_BO^level sum_mu q^(mu^2/2) Kinv[mu][lambda]`.
pub fn npoint_kostka(
    level: usize,
    lambda: &GenPartition,
    pts: &[TPoint],
    order8: i64,
) -> Result<QSeries> {
    check_level(level, lambda)?;
    check_subset_products(pts)?;
    let tp = t_power(pts, lambda.size());
    with_guard(order8, |w| {
        let mu_sum = kostka_mu_sum(lambda, w)?;
        let fbo = f_bo(pts, w)?;
        Ok(fbo.pow(level as u32).mul(&mu_sum).scale(&tp))
    })
}

/// Level-1 trace with a `z`-weight, in factorized form:
/// `F_BO * sum_k (z t_1..t_n)^k q^(k^2/2)`, as a Laurent polynomial in `z`.
pub fn bold_f(pts: &[TPoint], order8: i64) -> Result<SymLaurentPoly> {
    let fbo = f_bo(pts, order8)?;
    let bound = charge_bound(order8).unwrap_or(-1);
    let mut out = SymLaurentPoly::new(1);
    for k in -bound..=bound {
        let c = fbo
            .scale(&t_power(pts, k))
            .shift8(4 * k * k)
            .truncate(order8);
        out.add_term(GenPartition::new(vec![k])?, &c)?;
    }
    Ok(out)
}

/// All generalized partitions of length `level` whose weight factor
/// `q^(lambda^2/2)` lies below `order8`, grouped by nothing, sorted.
pub fn labels_below(level: usize, order8: i64) -> Vec<GenPartition> {
    let bound = match charge_bound(order8) {
        Some(b) => b,
        None => return Vec::new(),
    };
    let b = bound * level as i64;
    (-b..=b)
        .flat_map(|d| gen_partitions(level, d, -bound, bound))
        .filter(|l| 4 * l.lambda_sq() < order8)
        .collect()
}
