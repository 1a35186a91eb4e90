//! Named identity checks. Each check builds both sides independently as
//! truncated series (or Laurent polynomials in `z` with series coefficients)
//! and compares them coefficientwise.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fock::{oracle_level1_charge, oracle_npoint, TPoint};
use crate::formulas::{
    bold_f, f_bo, kostka_mu_sum, kostka_mu_sum_oriented, labels_below, npoint_kostka, npoint_level,
    qdim, t_power, vandermonde_factor, weight_factor, with_guard,
};
use crate::par::*;
use crate::partitions::{charge_bound, gen_partitions, GenPartition};
use crate::qseries::{format_rational, int, rational_pow, QSeries, DEN};
use crate::symfunc::{cached_kostka_table, schur_in_monomials, SymLaurentPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    Jacobi,
    Cor33,
    Lemma35,
    Cor36,
    Cor37,
    Cor42,
    Cor43,
    OkShift,
}

impl IdentityId {
    pub const ALL: [IdentityId; 8] = [
        IdentityId::Jacobi,
        IdentityId::Cor33,
        IdentityId::Lemma35,
        IdentityId::Cor36,
        IdentityId::Cor37,
        IdentityId::Cor42,
        IdentityId::Cor43,
        IdentityId::OkShift,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::Jacobi => "jacobi",
            IdentityId::Cor33 => "cor33",
            IdentityId::Lemma35 => "lemma35",
            IdentityId::Cor36 => "cor36",
            IdentityId::Cor37 => "cor37",
            IdentityId::Cor42 => "cor42",
            IdentityId::Cor43 => "cor43",
            IdentityId::OkShift => "ok-shift",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

/// Inputs shared by the checks; each check reads only what it needs.
/// `lambda` defaults to the zero partition of length `level`, `k` to 1.
#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub level: usize,
    pub lambda: Option<GenPartition>,
    pub pts: Vec<TPoint>,
    pub k: i64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            level: 2,
            lambda: None,
            pts: vec![TPoint::new(int(2)).expect("2 is a valid point")],
            k: 1,
        }
    }
}

impl VerifyParams {
    pub fn lambda(&self) -> Result<GenPartition> {
        match &self.lambda {
            Some(l) => Ok(l.clone()),
            None if self.level == 0 => Err(Error::ZeroLevel),
            None => Ok(GenPartition::constant(self.level, 0)),
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "lambda": self.lambda.as_ref().map(|l| l.entries().to_vec()),
            "s": self.pts.iter().map(|p| format_rational(p.s())).collect::<Vec<_>>(),
            "k": self.k,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub name: String,
    pub params: Value,
    pub order8: i64,
    pub left_digest: String,
    pub right_digest: String,
    pub equal: bool,
    /// Lowest exponent (in eighths) at which the sides differ.
    pub first_discrepancy: Option<i64>,
    /// Which coefficient (a monomial label or a point) holds that discrepancy.
    pub discrepancy_at: Option<String>,
    pub note: Option<String>,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<9} {} order8={} left={} right={}",
            self.name,
            if self.equal { "EQUAL" } else { "MISMATCH" },
            self.order8,
            self.left_digest,
            self.right_digest
        )?;
        if let Some(e) = self.first_discrepancy {
            write!(f, " first-discrepancy=q^({e}/8)")?;
            if let Some(at) = &self.discrepancy_at {
                write!(f, " at {at}")?;
            }
        }
        if let Some(n) = &self.note {
            write!(f, " ({n})")?;
        }
        Ok(())
    }
}

/// One side of an identity: a list of labelled series.
type Side = Vec<(String, QSeries)>;

fn digest(side: &Side) -> String {
    let v: Vec<Value> = side.iter().map(|(k, s)| json!([k, s.to_json()])).collect();
    let bytes = serde_json::to_vec(&v).expect("json values serialize");
    let hash = Sha256::digest(&bytes);
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn compare(left: &Side, right: &Side) -> Option<(String, i64)> {
    let mut best: Option<(String, i64)> = None;
    let mut labels: Vec<&String> = left.iter().chain(right.iter()).map(|(k, _)| k).collect();
    labels.sort();
    labels.dedup();
    for lab in labels {
        let a = left.iter().find(|(k, _)| k == lab).map(|(_, s)| s);
        let b = right.iter().find(|(k, _)| k == lab).map(|(_, s)| s);
        let d = match (a, b) {
            (Some(a), Some(b)) => a.first_difference(b),
            (Some(x), None) | (None, Some(x)) => x.low_exp8_nonzero(),
            (None, None) => None,
        };
        if let Some(e) = d {
            if best.as_ref().is_none_or(|(_, b)| e < *b) {
                best = Some((lab.clone(), e));
            }
        }
    }
    best
}

fn poly_side(f: &SymLaurentPoly) -> Side {
    f.coeffs()
        .map(|(mu, c)| (mu.to_string(), c.clone()))
        .collect()
}

fn report(
    id: IdentityId,
    params: &VerifyParams,
    order8: i64,
    left: Side,
    right: Side,
    note: Option<String>,
) -> VerifyReport {
    let diff = compare(&left, &right);
    VerifyReport {
        name: id.as_str().to_string(),
        params: params.to_json(),
        order8,
        left_digest: digest(&left),
        right_digest: digest(&right),
        equal: diff.is_none(),
        first_discrepancy: diff.as_ref().map(|d| d.1),
        discrepancy_at: diff.map(|d| d.0),
        note,
    }
}

/// Runs one identity check at truncation `order8`.
pub fn verify(id: IdentityId, params: &VerifyParams, order8: i64) -> Result<VerifyReport> {
    if order8 <= 0 {
        return Err(Error::BadOrder(order8));
    }
    let p = params;
    match id {
        IdentityId::Jacobi => {
            if p.pts.is_empty() {
                return Err(Error::InvalidParameter {
                    field: "s",
                    reason: "jacobi needs at least one point".into(),
                });
            }
            let mut left = Side::new();
            let mut right = Side::new();
            for pt in &p.pts {
                let (l, r) = jacobi_sides(&pt.t(), order8);
                let lab = format!("t={}", format_rational(&pt.t()));
                left.push((lab.clone(), l));
                right.push((lab, r));
            }
            Ok(report(id, p, order8, left, right, None))
        }
        IdentityId::Cor33 => {
            let lhs = SymLaurentPoly::product_of_copies(&half_integer_product(order8)?, p.level)?;
            let terms = labels_below(p.level, order8)
                .into_par_iter()
                .map(|lam| qdim(p.level, &lam, order8).map(|c| (lam, c)))
                .collect::<Vec<_>>();
            let rhs = schur_sum(p.level, terms, order8)?;
            Ok(report(
                id,
                p,
                order8,
                poly_side(&lhs.truncate(order8)),
                poly_side(&rhs),
                None,
            ))
        }
        IdentityId::Lemma35 => {
            let lhs = SymLaurentPoly::product_of_copies(&bold_f(&p.pts, order8)?, p.level)?;
            let terms = labels_below(p.level, order8)
                .into_par_iter()
                .map(|lam| npoint_level(p.level, &lam, &p.pts, order8).map(|c| (lam, c)))
                .collect::<Vec<_>>();
            let rhs = schur_sum(p.level, terms, order8)?;
            Ok(report(
                id,
                p,
                order8,
                poly_side(&lhs.truncate(order8)),
                poly_side(&rhs),
                None,
            ))
        }
        IdentityId::Cor36 => {
            let vac = GenPartition::constant(p.level.max(1), 0);
            if p.level == 0 {
                return Err(Error::ZeroLevel);
            }
            let left = npoint_level(p.level, &vac, &p.pts, order8)?;
            let right = f_bo(&p.pts, order8)?
                .pow(p.level as u32)
                .mul(&vandermonde_factor(&vac))
                .truncate(order8);
            let lab = vac.to_string();
            Ok(report(
                id,
                p,
                order8,
                vec![(lab.clone(), left)],
                vec![(lab, right)],
                None,
            ))
        }
        IdentityId::Cor37 => {
            let lhs = SymLaurentPoly::product_of_copies(&theta_in_z(order8)?, p.level)?;
            let terms = labels_below(p.level, order8)
                .into_iter()
                .map(|lam| {
                    let c = weight_factor(&lam).truncate(order8);
                    Ok((lam, c))
                })
                .collect::<Vec<_>>();
            let rhs = schur_sum(p.level, terms, order8)?;
            Ok(report(
                id,
                p,
                order8,
                poly_side(&lhs.truncate(order8)),
                poly_side(&rhs),
                None,
            ))
        }
        IdentityId::Cor42 => {
            let lam = p.lambda()?;
            let left = kostka_mu_sum(&lam, order8)?;
            let right = weight_factor(&lam).truncate(order8);
            let mut note = None;
            if left != right {
                let transposed = kostka_mu_sum_oriented(&lam, order8, true)?;
                if transposed == right {
                    note = Some("passes only with the inverse Kostka matrix transposed".into());
                }
            }
            let lab = lam.to_string();
            Ok(report(
                id,
                p,
                order8,
                vec![(lab.clone(), left)],
                vec![(lab, right)],
                note,
            ))
        }
        IdentityId::Cor43 => {
            let lam = p.lambda()?;
            if !lam.is_ordinary() {
                return Err(Error::InvalidParameter {
                    field: "lambda",
                    reason: format!("{lam} is not an ordinary partition"),
                });
            }
            let left = ordinary_mu_sum(&lam, order8)?;
            let right = weight_factor(&lam).truncate(order8);
            let lab = lam.to_string();
            Ok(report(
                id,
                p,
                order8,
                vec![(lab.clone(), left)],
                vec![(lab, right)],
                None,
            ))
        }
        IdentityId::OkShift => {
            let k = p.k;
            let left = oracle_level1_charge(k, &p.pts, order8)?;
            let right = f_bo(&p.pts, order8)?
                .scale(&t_power(&p.pts, k))
                .shift8(4 * k * k)
                .truncate(order8);
            let lab = format!("k={k}");
            Ok(report(
                id,
                p,
                order8,
                vec![(lab.clone(), left)],
                vec![(lab, right)],
                None,
            ))
        }
    }
}

/// `prod_{j>=1} (1 - q^j)(1 + x q^(j-1/2))(1 + x^-1 q^(j-1/2))` and
/// `sum_k x^k q^(k^2/2)`, both truncated at `order8`.
pub fn jacobi_sides(x: &crate::qseries::Rational, order8: i64) -> (QSeries, QSeries) {
    let xinv = x.recip();
    let mut lhs = QSeries::one(order8);
    let mut j = 1;
    while DEN * j - 4 < order8 {
        let h = DEN * j - 4;
        lhs = lhs.mul(&QSeries::exact([(0, int(1)), (DEN * j, int(-1))]));
        lhs = lhs.mul(&QSeries::exact([(0, int(1)), (h, x.clone())]));
        lhs = lhs.mul(&QSeries::exact([(0, int(1)), (h, xinv.clone())]));
        j += 1;
    }
    let bound = charge_bound(order8).unwrap_or(-1);
    let rhs = QSeries::from_terms(
        order8,
        (-bound..=bound).map(|k| (4 * k * k, rational_pow(x, k))),
    );
    (lhs.truncate(order8), rhs)
}

/// `prod_{r in 1/2 + Z>=0} (1 + q^r z)(1 + q^r z^-1)` as a Laurent
/// polynomial in one variable.
fn half_integer_product(order8: i64) -> Result<SymLaurentPoly> {
    use std::collections::BTreeMap;
    let mut coeffs: BTreeMap<i64, QSeries> = BTreeMap::new();
    coeffs.insert(0, QSeries::one(order8));
    let mut h = 4;
    while h < order8 {
        for dir in [1, -1] {
            let mut next: BTreeMap<i64, QSeries> = BTreeMap::new();
            for (&k, c) in &coeffs {
                let e = next.entry(k).or_insert_with(|| QSeries::zero(order8));
                *e = &*e + c;
                let shifted = c.shift8(h).truncate(order8);
                let e = next.entry(k + dir).or_insert_with(|| QSeries::zero(order8));
                *e = &*e + &shifted;
            }
            coeffs = next;
        }
        h += DEN;
    }
    let mut out = SymLaurentPoly::new(1);
    for (k, c) in coeffs {
        out.add_term(GenPartition::new(vec![k])?, &c)?;
    }
    Ok(out)
}

/// `sum_k z^k q^(k^2/2)`.
fn theta_in_z(order8: i64) -> Result<SymLaurentPoly> {
    let bound = charge_bound(order8).unwrap_or(-1);
    let mut out = SymLaurentPoly::new(1);
    for k in -bound..=bound {
        out.add_term(
            GenPartition::new(vec![k])?,
            &QSeries::monomial(int(1), 4 * k * k, order8),
        )?;
    }
    Ok(out)
}

/// `sum_lambda c_lambda s_lambda` in monomial coordinates.
fn schur_sum(
    level: usize,
    terms: Vec<Result<(GenPartition, QSeries)>>,
    order8: i64,
) -> Result<SymLaurentPoly> {
    let mut out = SymLaurentPoly::new(level);
    for t in terms {
        let (lam, c) = t?;
        if c.is_zero() {
            continue;
        }
        for (mu, k) in schur_in_monomials(&lam)?.coeffs() {
            out.add_term(mu.clone(), &c.mul(k).truncate(order8))?;
        }
    }
    Ok(out.truncate(order8))
}

/// Left side of the ordinary-partition restatement:
/// `sum_mu Kinv[mu][lambda] q^(mu^2/2)` over partitions `mu` with at most
/// `level` parts, plus for `r = 1..level-1` the sum over partitions with
/// fewer than `level` parts of `Kinv[mu][lambda + r] q^(sum (mu_i - r)^2 / 2)`.
pub fn ordinary_mu_sum(lambda: &GenPartition, order8: i64) -> Result<QSeries> {
    let level = lambda.level();
    let bound = charge_bound(order8).unwrap_or(0);
    let mut terms: Vec<(i64, crate::qseries::Rational)> = Vec::new();
    for r in 0..level as i64 {
        let target = lambda.shift(r);
        let size = target.size();
        let hi = (bound + r).max(target.first());
        let table = cached_kostka_table(size, level, 0, hi)?;
        for mu in gen_partitions(level, size, 0, hi) {
            if r > 0 && mu.last() != 0 {
                continue;
            }
            let e8: i64 = mu.entries().iter().map(|m| 4 * (m - r) * (m - r)).sum();
            if e8 >= order8 {
                continue;
            }
            let c = table.kinv(&mu, &target);
            if c != 0 {
                terms.push((e8, int(c)));
            }
        }
    }
    Ok(QSeries::from_terms(order8, terms))
}

/// Result of computing one correlation function by all three routes.
#[derive(Clone, Debug)]
pub struct RouteComparison {
    pub theta: QSeries,
    pub kostka: QSeries,
    pub oracle: QSeries,
}

impl RouteComparison {
    pub fn theta_vs_kostka(&self) -> Option<i64> {
        self.theta.first_difference(&self.kostka)
    }

    pub fn theta_vs_oracle(&self) -> Option<i64> {
        self.theta.first_difference(&self.oracle)
    }

    pub fn kostka_vs_oracle(&self) -> Option<i64> {
        self.kostka.first_difference(&self.oracle)
    }

    pub fn all_equal(&self) -> bool {
        self.theta_vs_kostka().is_none() && self.theta_vs_oracle().is_none()
    }
}

/// Computes the theta-determinant, inverse-Kostka and trace values.
pub fn compare_routes(
    level: usize,
    lambda: &GenPartition,
    pts: &[TPoint],
    order8: i64,
) -> Result<RouteComparison> {
    Ok(RouteComparison {
        theta: npoint_level(level, lambda, pts, order8)?,
        kostka: npoint_kostka(level, lambda, pts, order8)?,
        oracle: oracle_npoint(level, lambda, pts, order8)?,
    })
}

/// The level-`level` theta-determinant value recovered from the product of
/// level-1 traces: the `s_lambda` coordinate of `prod_i Tr_{F}(z_i^C q^H T...)`.
/// This is the trace of the operator acting as `T(t)` on every tensor factor
/// simultaneously (a tensor power), not as a sum over factors.
pub fn tensor_power_trace(
    level: usize,
    lambda: &GenPartition,
    pts: &[TPoint],
    order8: i64,
) -> Result<QSeries> {
    with_guard(order8, |w| {
        let one = crate::fock::fock_trace(1, pts, w)?;
        let prod = SymLaurentPoly::product_of_copies(&one, level)?.truncate(w);
        crate::fock::oracle_from_trace(&prod, lambda, w)
    })
}
