//! Truncated formal power series in `q` with exact rational coefficients.
//!
//! Exponents live on the grid `(1/8)Z`: a term `c q^(n/8)` is stored under the
//! integer key `n`. A series carries `order8`, the first grid point at which it
//! is no longer known; every coefficient with key below `order8` is exact.
//! Products and inverses track how far their result is guaranteed, so an
//! expression built from truncated inputs never claims more than it knows.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Denominator of the exponent grid.
pub const DEN: i64 = 8;

/// Order used for series that are exact polynomials (no truncation).
pub const EXACT_ORDER8: i64 = 1 << 40;

fn clamp(order8: i64) -> i64 {
    order8.min(EXACT_ORDER8)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a/b"` or `"a"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Canonical `"num/den"` form used by the JSON schema.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `r^e` for any integer `e`; `r` must be nonzero when `e < 0`.
pub fn rational_pow(r: &Rational, e: i64) -> Rational {
    let base = if e < 0 { r.recip() } else { r.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    order8: i64,
    terms: BTreeMap<i64, Rational>,
}

impl QSeries {
    /// Builds a series from raw terms, dropping zeros and anything at or past
    /// the truncation order. Repeated exponents are summed.
    pub fn from_terms<I>(order8: i64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let order8 = clamp(order8);
        let mut map: BTreeMap<i64, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e < order8 {
                *map.entry(e).or_insert_with(Rational::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        QSeries { order8, terms: map }
    }

    pub fn zero(order8: i64) -> Self {
        QSeries {
            order8: clamp(order8),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order8: i64) -> Self {
        Self::monomial(Rational::one(), 0, order8)
    }

    /// `c q^(exp8/8)` known to `order8`.
    pub fn monomial(c: Rational, exp8: i64, order8: i64) -> Self {
        Self::from_terms(order8, [(exp8, c)])
    }

    /// A polynomial with no truncation.
    pub fn exact<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        Self::from_terms(EXACT_ORDER8, terms)
    }

    pub fn constant(c: Rational) -> Self {
        Self::exact([(0, c)])
    }

    pub fn order8(&self) -> i64 {
        self.order8
    }

    pub fn is_exact(&self) -> bool {
        self.order8 >= EXACT_ORDER8
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent carrying a nonzero coefficient; for the zero series
    /// this is `order8` (the series is `O(q^(order8/8))`).
    pub fn low_exp8(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.order8)
    }

    /// Lowest nonzero exponent, if any.
    pub fn low_exp8_nonzero(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn coeff(&self, exp8: i64) -> Rational {
        self.terms
            .get(&exp8)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every stored exponent is a multiple of 8 (integral power of q).
    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|e| e.rem_euclid(DEN) == 0)
    }

    /// Lowers the truncation order. Never raises it.
    pub fn truncate(&self, order8: i64) -> Self {
        let order8 = clamp(order8.min(self.order8));
        QSeries {
            order8,
            terms: self
                .terms
                .range(..order8)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order8);
        }
        QSeries {
            order8: self.order8,
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Multiplies by `q^(shift8/8)`.
    pub fn shift8(&self, shift8: i64) -> Self {
        let order8 = if self.is_exact() {
            EXACT_ORDER8
        } else {
            clamp(self.order8 + shift8)
        };
        QSeries {
            order8,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + shift8, c.clone()))
                .collect(),
        }
    }

    /// Exact product. The result is known up to
    /// `min(a.order8 + low(b), b.order8 + low(a))`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let order8 = match (self.is_exact(), other.is_exact()) {
            (true, true) => EXACT_ORDER8,
            (true, false) => clamp(other.order8.saturating_add(self.low_exp8())),
            (false, true) => clamp(self.order8.saturating_add(other.low_exp8())),
            (false, false) => {
                clamp((self.order8 + other.low_exp8()).min(other.order8 + self.low_exp8()))
            }
        };
        if self.is_zero() || other.is_zero() {
            return Self::zero(order8);
        }
        let lo = self.low_exp8() + other.low_exp8();
        let hi_a = *self.terms.keys().next_back().unwrap();
        let hi_b = *other.terms.keys().next_back().unwrap();
        let hi = (hi_a + hi_b + 1).min(order8);
        if hi <= lo {
            return Self::zero(order8);
        }
        let mut dense = vec![Rational::zero(); (hi - lo) as usize];
        for (ea, ca) in &self.terms {
            let limit = hi - ea;
            for (eb, cb) in other.terms.range(..limit) {
                dense[(ea + eb - lo) as usize] += ca * cb;
            }
        }
        QSeries::from_terms(
            order8,
            dense
                .into_iter()
                .enumerate()
                .map(|(i, c)| (lo + i as i64, c)),
        )
    }

    /// Multiplicative inverse. If `self = c q^v (1 + ...)` is known to
    /// `order8`, the inverse starts at `q^-v` and is known to `order8 - 2v`.
    pub fn inv(&self) -> Result<QSeries> {
        if self.is_zero() {
            return Err(Error::NotAUnit);
        }
        if self.is_exact() {
            return Err(Error::Inconsistent(
                "cannot invert an untruncated series; truncate it first".into(),
            ));
        }
        let v = self.low_exp8();
        let lead = self.terms[&v].clone();
        let lead_inv = lead.recip();
        let len = (self.order8 - v) as usize;
        let tail: Vec<(usize, &Rational)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(e, c)| ((e - v) as usize, c))
            .collect();
        let mut out = vec![Rational::zero(); len];
        out[0] = lead_inv.clone();
        for k in 1..len {
            let mut acc = Rational::zero();
            for &(j, a) in &tail {
                if j > k {
                    break;
                }
                let b = &out[k - j];
                if !b.is_zero() {
                    acc += a * b;
                }
            }
            out[k] = -(acc * &lead_inv);
        }
        Ok(QSeries::from_terms(
            self.order8 - 2 * v,
            out.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c)),
        ))
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut acc = QSeries::one(EXACT_ORDER8);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Smallest exponent below the common truncation at which the two series
    /// differ, or `None` if they agree there.
    pub fn first_difference(&self, other: &QSeries) -> Option<i64> {
        let order8 = self.order8.min(other.order8);
        let keys = self
            .terms
            .range(..order8)
            .map(|(e, _)| *e)
            .chain(other.terms.range(..order8).map(|(e, _)| *e));
        keys.filter(|e| self.coeff(*e) != other.coeff(*e)).min()
    }

    /// Coefficientwise equality below the common truncation.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        self.first_difference(other).is_none()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("series serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("series serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    den: i64,
    order8: i64,
    terms: Vec<(i64, String)>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            den: DEN,
            order8: self.order8,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, format_rational(c)))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SeriesJson::deserialize(deserializer)?;
        if raw.den != DEN {
            return Err(D::Error::custom(format!("unsupported den {}", raw.den)));
        }
        let mut terms = Vec::with_capacity(raw.terms.len());
        for (e, c) in raw.terms {
            let c = parse_rational(&c)
                .ok_or_else(|| D::Error::custom(format!("bad rational `{c}`")))?;
            terms.push((e, c));
        }
        Ok(QSeries::from_terms(raw.order8, terms))
    }
}

fn fmt_exp8(e: i64) -> String {
    let (n, d) = (e / e.gcd(&DEN), DEN / e.gcd(&DEN));
    if e == 0 {
        String::new()
    } else if d == 1 && n == 1 {
        "q".to_string()
    } else if d == 1 {
        format!("q^{n}")
    } else {
        format!("q^({n}/{d})")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let mono = fmt_exp8(*e);
            let mag = c.abs();
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else if mag.is_integer() {
                write!(f, "{mag}{mono}")?;
            } else {
                write!(f, "({mag}){mono}")?;
            }
        }
        if self.is_exact() {
            if first {
                write!(f, "0")?;
            }
            return Ok(());
        }
        let big_o = match fmt_exp8(self.order8).as_str() {
            "" => "1".to_string(),
            m => m.to_string(),
        };
        if first {
            write!(f, "O({big_o})")
        } else {
            write!(f, " + O({big_o})")
        }
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries[{self}]")
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let order8 = self.order8.min(rhs.order8);
        QSeries::from_terms(
            order8,
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(e, c)| (*e, c.clone())),
        )
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self + &(-rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            order8: self.order8,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

/// Euler product `prod_{j>=1} (1 - q^j)` known to `order8`.
pub fn euler_phi(order8: i64) -> QSeries {
    let mut acc = QSeries::one(order8);
    let mut j = 1;
    while DEN * j < order8 {
        let factor = QSeries::exact([(0, Rational::one()), (DEN * j, -Rational::one())]);
        acc = acc.mul(&factor);
        j += 1;
    }
    acc
}

/// `(t d/dt)^k Theta(t)` with `Theta(t) = sum_n (-1)^n q^((n+1/2)^2/2) t^(n+1/2)`,
/// evaluated at `t = s^2` (so `t^(n+1/2) = s^(2n+1)`).
pub fn theta_deriv(k: u32, s: &Rational, order8: i64) -> Result<QSeries> {
    if s.is_zero() {
        return Err(Error::ZeroS);
    }
    let mut terms = Vec::new();
    // m = 2n + 1 runs over odd integers with m^2 < order8; exponent8 = m^2.
    let mut m: i64 = 1;
    while m * m < order8 {
        for odd in [m, -m] {
            let n = (odd - 1) / 2;
            let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
            let weight = num_traits::pow(rat(odd, 2), k as usize);
            let c = weight * rational_pow(s, odd) * int(sign);
            terms.push((odd * odd, c));
        }
        m += 2;
    }
    Ok(QSeries::from_terms(order8, terms))
}
