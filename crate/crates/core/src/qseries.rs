//! Truncated Laurent series in `t = q^(1/2)` with big-integer coefficients.
//!
//! Exponents are always counted in powers of `t`, so `q^(k/2)` is stored at
//! index `k`. A [`QSeries`] knows its coefficients exactly up to `t^hi`;
//! anything above `hi` is unknown and never fabricated by arithmetic.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

/// A Laurent series in `t` known exactly on the window `lo..=hi`.
///
/// Coefficients are stored from the lowest nonzero term up to the highest
/// nonzero term; the implicit coefficients between the last stored term and
/// `hi` are zero. The zero series is stored with `lo = hi + 1`, which makes
/// `lo` a valid lower bound on the valuation in every case.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    lo: i64,
    hi: i64,
    coeffs: Vec<BigInt>,
}

/// First coefficient where two series disagree on their common window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesDifference {
    pub exponent: i64,
    #[serde(serialize_with = "ser_bigint")]
    pub left: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub right: BigInt,
}

impl QSeries {
    pub fn zero(hi: i64) -> Self {
        Self { lo: hi + 1, hi, coeffs: Vec::new() }
    }

    pub fn one(hi: i64) -> Self {
        Self::monomial(1, 0, hi)
    }

    /// `c * t^k`, known up to `t^hi`.
    pub fn monomial(c: impl Into<BigInt>, k: i64, hi: i64) -> Self {
        Self::from_coeffs(k, hi, vec![c.into()])
    }

    /// Builds a series from coefficients of `t^lo, t^(lo+1), ...`.
    /// Entries above `hi` are dropped.
    pub fn from_coeffs(lo: i64, hi: i64, coeffs: Vec<BigInt>) -> Self {
        let mut s = Self { lo, hi, coeffs };
        s.normalize();
        s
    }

    pub fn from_i64s(lo: i64, hi: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(lo, hi, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn normalize(&mut self) {
        let room = self.hi - self.lo + 1;
        if room <= 0 {
            self.coeffs.clear();
        } else if self.coeffs.len() as i64 > room {
            self.coeffs.truncate(room as usize);
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.lo = self.hi + 1;
            }
            Some(0) => {}
            Some(p) => {
                self.coeffs.drain(..p);
                self.lo += p as i64;
            }
        }
    }

    /// Lowest tracked exponent. For the zero series this is `hi + 1`.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Truncation order: coefficients of `t^k` for `k > hi` are unknown.
    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Stored coefficients, from `t^lo` up to the highest nonzero term.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the lowest nonzero term, if any is known.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lo)
    }

    /// Exponent of the highest stored nonzero term.
    pub fn top(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.lo + self.coeffs.len() as i64 - 1)
    }

    /// Coefficient of `t^k`, or `None` when `k` lies above the window.
    pub fn coeff(&self, k: i64) -> Option<BigInt> {
        if k > self.hi {
            return None;
        }
        let idx = k - self.lo;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            Some(BigInt::zero())
        } else {
            Some(self.coeffs[idx as usize].clone())
        }
    }

    /// Coefficients of `t^from ..= t^hi`, zero-padded.
    pub fn dense_from(&self, from: i64) -> Vec<BigInt> {
        (from..=self.hi).map(|k| self.coeff(k).unwrap()).collect()
    }

    /// Iterates over the nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.lo + i as i64, c))
    }

    /// Lowers the truncation order to `min(self.hi, hi)`.
    pub fn truncate(&self, hi: i64) -> Self {
        if hi >= self.hi {
            return self.clone();
        }
        Self::from_coeffs(self.lo, hi, self.coeffs.clone())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { lo: self.lo + k, hi: self.hi + k, coeffs: self.coeffs.clone() }
    }

    pub fn shift_in_place(&mut self, k: i64) {
        self.lo += k;
        self.hi += k;
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.hi);
        }
        Self { lo: self.lo, hi: self.hi, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Coefficientwise sum on the common window; `hi = min(a.hi, b.hi)`.
    pub fn add(&self, other: &Self) -> Self {
        let hi = self.hi.min(other.hi);
        let lo = self.lo.min(other.lo);
        let top = [self.top(), other.top()].into_iter().flatten().max();
        let top = match top {
            Some(t) => t.min(hi),
            None => return Self::zero(hi),
        };
        if top < lo {
            return Self::zero(hi);
        }
        let mut out = vec![BigInt::zero(); (top - lo + 1) as usize];
        for s in [self, other] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let k = s.lo + i as i64;
                if k > top {
                    break;
                }
                out[(k - lo) as usize] += c;
            }
        }
        Self::from_coeffs(lo, hi, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { lo: self.lo, hi: self.hi, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Cauchy product; `hi = min(a.hi + b.lo, b.hi + a.lo)`.
    pub fn mul(&self, other: &Self) -> Self {
        let hi = (self.hi + other.lo).min(other.hi + self.lo);
        if self.is_zero() || other.is_zero() {
            return Self::zero(hi);
        }
        let lo = self.lo + other.lo;
        let top = (self.top().unwrap() + other.top().unwrap()).min(hi);
        if top < lo {
            return Self::zero(hi);
        }
        let len = (top - lo + 1) as usize;
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(lo, hi, out)
    }

    /// Multiplicative inverse of a series whose lowest term is `±t^v`.
    pub fn inverse_unit(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::ZeroSeries { hi: self.hi })?;
        let u0 = &self.coeffs[0];
        if !(u0.is_one() || (-u0).is_one()) {
            return Err(Error::NonUnitLeadingCoefficient { exponent: v, coeff: u0.to_string() });
        }
        let n = (self.hi - v) as usize;
        let mut w: Vec<BigInt> = Vec::with_capacity(n + 1);
        w.push(u0.clone());
        for k in 1..=n {
            let mut acc = BigInt::zero();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                acc += &self.coeffs[i] * &w[k - i];
            }
            // w_k = -u0 * acc, and 1/u0 = u0
            w.push(if u0.is_positive() { -acc } else { acc });
        }
        Ok(Self::from_coeffs(-v, self.hi - 2 * v, w))
    }

    /// Multiplication by `1/(1 - q^r)`, exact on the current window.
    pub fn div_one_minus_q_pow(mut self, r: u32) -> Self {
        if self.is_zero() || r == 0 {
            return self;
        }
        let step = 2 * r as usize;
        let len = (self.hi - self.lo + 1) as usize;
        self.coeffs.resize(len, BigInt::zero());
        for k in step..len {
            let (head, tail) = self.coeffs.split_at_mut(k);
            tail[0] += &head[k - step];
        }
        self.normalize();
        self
    }

    /// Multiplication by `P_j = prod_{r=1..j} 1/(1 - q^r)`.
    pub fn mul_poincare(self, j: u32) -> Self {
        (1..=j).fold(self, |s, r| s.div_one_minus_q_pow(r))
    }

    /// Returns the first exponent at which the two series disagree on their
    /// common window, or `None` when they agree there.
    pub fn first_difference(&self, other: &Self) -> Option<SeriesDifference> {
        let hi = self.hi.min(other.hi);
        let lo = self.lo.min(other.lo);
        (lo..=hi).find_map(|k| {
            let (a, b) = (self.coeff(k).unwrap(), other.coeff(k).unwrap());
            (a != b).then_some(SeriesDifference { exponent: k, left: a, right: b })
        })
    }

    /// Equality on the common window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// JSON form `{lo, hi, coeffs}` with `coeffs` covering `lo..=hi`.
    pub fn to_json(&self) -> Value {
        let coeffs = self.dense_from(self.lo).iter().map(bigint_value).collect();
        serde_json::json!({ "lo": self.lo, "hi": self.hi, "coeffs": Value::Array(coeffs) })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("malformed series JSON: {value}"));
        let lo = value.get("lo").and_then(Value::as_i64).ok_or_else(bad)?;
        let hi = value.get("hi").and_then(Value::as_i64).ok_or_else(bad)?;
        let coeffs = value
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .map(|c| match c {
                Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| bad()),
                Value::String(s) => BigInt::from_str(s).map_err(|_| bad()),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(lo, hi, coeffs))
    }
}

/// `P_j` truncated at `t^hi`.
pub fn poincare_p(j: u32, hi: i64) -> QSeries {
    QSeries::one(hi).mul_poincare(j)
}

pub(crate) fn bigint_value(c: &BigInt) -> Value {
    Value::Number(serde_json::Number::from_str(&c.to_string()).expect("integer literal"))
}

pub(crate) fn ser_bigint<S: Serializer>(c: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    bigint_value(c).serialize(s)
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Self::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl<'a> Sub<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl<'a> Mul<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}

impl AddAssign<&QSeries> for QSeries {
    fn add_assign(&mut self, rhs: &QSeries) {
        // Fast path: the right-hand side fits inside our stored range.
        if rhs.hi >= self.hi && !self.is_zero() {
            if let Some(top) = rhs.top() {
                if rhs.lo >= self.lo && top <= self.top().unwrap() {
                    let off = (rhs.lo - self.lo) as usize;
                    for (i, c) in rhs.coeffs.iter().enumerate() {
                        self.coeffs[off + i] += c;
                    }
                    self.normalize();
                    return;
                }
            } else {
                return;
            }
        }
        *self = QSeries::add(self, rhs);
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, k: i64) -> fmt::Result {
    match k {
        2 => write!(f, "q"),
        _ if k % 2 == 0 => write!(f, "q^{}", k / 2),
        _ => write!(f, "q^({k}/2)"),
    }
}

fn fmt_terms<'a>(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (i64, &'a BigInt)>) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
        }
        first = false;
        if k == 0 {
            write!(f, "{mag}")?;
            continue;
        }
        if !mag.is_one() {
            write!(f, "{mag}*")?;
        }
        fmt_power(f, k)?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms())?;
        write!(f, " + O(")?;
        fmt_power(f, self.hi + 1)?;
        write!(f, ")")
    }
}

/// An exact Laurent polynomial in `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    lo: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, k: i64) -> Self {
        Self::from_coeffs(k, vec![c.into()])
    }

    /// Builds `sum c * t^k` from `(c, k)` pairs.
    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        terms.iter().fold(Self::zero(), |acc, &(c, k)| &acc + &Self::monomial(c, k))
    }

    pub fn from_coeffs(lo: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { lo, coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            None => *self = Self::default(),
            Some(p) => {
                self.coeffs.drain(..p);
                self.lo += p as i64;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        let idx = k - self.lo;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.lo + i as i64, c))
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { lo: self.lo + k, coeffs: self.coeffs.clone() }
    }

    /// The involution `t^k -> (-1)^k t^(-k)`, i.e. `q^(1/2) -> -q^(-1/2)`.
    pub fn involute(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let top = self.lo + self.coeffs.len() as i64 - 1;
        let coeffs = self
            .coeffs
            .iter()
            .rev()
            .enumerate()
            .map(|(i, c)| if (top - i as i64) % 2 == 0 { c.clone() } else { -c })
            .collect();
        Self::from_coeffs(-top, coeffs)
    }

    /// The same polynomial viewed as a series known up to `t^hi`.
    pub fn to_series(&self, hi: i64) -> QSeries {
        QSeries::from_coeffs(self.lo, hi, self.coeffs.clone())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(rhs.lo);
        let top = (self.lo + self.coeffs.len() as i64).max(rhs.lo + rhs.coeffs.len() as i64);
        let mut out = vec![BigInt::zero(); (top - lo) as usize];
        for p in [self, rhs] {
            for (i, c) in p.coeffs.iter().enumerate() {
                out[(p.lo - lo) as usize + i] += c;
            }
        }
        LaurentPoly::from_coeffs(lo, out)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { lo: self.lo, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LaurentPoly::from_coeffs(self.lo + rhs.lo, out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms())
    }
}

/// The `z^j` coefficient of `E(z)` as a fraction: `(-1)^j t^(j^2)` over
/// `prod_{k=1..j} (1 - q^k)`.
pub fn dilog_term(j: u32) -> (LaurentPoly, LaurentPoly) {
    let sign = if j.is_multiple_of(2) { 1 } else { -1 };
    let den = (1..=j as i64).fold(LaurentPoly::one(), |acc, k| &acc * &LaurentPoly::from_terms(&[(1, 0), (-1, 2 * k)]));
    (LaurentPoly::monomial(sign, (j * j) as i64), den)
}

/// The `z^j` coefficient of the finite-field form of the dilogarithm:
/// `t^(j^2)` over `prod_{i=0..j-1} (q^j - q^i)`.
pub fn finite_field_dilog_term(j: u32) -> (LaurentPoly, LaurentPoly) {
    let j = j as i64;
    let den = (0..j).fold(LaurentPoly::one(), |acc, i| &acc * &LaurentPoly::from_terms(&[(1, 2 * j), (-1, 2 * i)]));
    (LaurentPoly::monomial(1, j * j), den)
}

/// Whether `q^(1/2) -> -q^(-1/2)` maps the `j`-th term of each form onto the
/// other, checked exactly by cross-multiplying the fractions.
pub fn involution_swaps_terms(j: u32) -> bool {
    let (en, ed) = dilog_term(j);
    let (kn, kd) = finite_field_dilog_term(j);
    let forward = &en.involute() * &kd == &kn * &ed.involute();
    let backward = &kn.involute() * &ed == &en * &kd.involute();
    forward && backward
}
