//! Truncated bivariate power series with exact integer coefficients, and the
//! closed-form products that the enumerations are compared against.
//!
//! A series lives either in the pyramid variables `(q0, q1)`, truncated by
//! total degree, or in the super-rigid variables `(z, q)`, truncated per
//! variable. Terms are kept in a `BTreeMap` keyed by [`Monomial`], so
//! iteration (and therefore serialization) is always in `(e0, e1)`
//! lexicographic order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, usage, Result};

/// A Laurent monomial `q0^e0 q1^e1` (or `z^e0 q^e1` for the super-rigid
/// variables). Exponents may be negative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub e0: i64,
    pub e1: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { e0: 0, e1: 0 };

    pub const fn new(e0: i64, e1: i64) -> Self {
        Monomial { e0, e1 }
    }

    pub const fn q0() -> Self {
        Monomial::new(1, 0)
    }

    pub const fn q1() -> Self {
        Monomial::new(0, 1)
    }

    /// `q = q0 q1`.
    pub const fn q() -> Self {
        Monomial::new(1, 1)
    }

    pub fn total_degree(self) -> i64 {
        self.e0 + self.e1
    }

    pub fn is_one(self) -> bool {
        self == Monomial::ONE
    }

    pub fn is_nonnegative(self) -> bool {
        self.e0 >= 0 && self.e1 >= 0
    }

    pub fn pow(self, k: i64) -> Self {
        Monomial::new(self.e0 * k, self.e1 * k)
    }

    pub fn inverse(self) -> Self {
        Monomial::new(-self.e0, -self.e1)
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial::new(self.e0 + rhs.e0, self.e1 + rhs.e1)
    }
}

impl Div for Monomial {
    type Output = Monomial;

    fn div(self, rhs: Monomial) -> Monomial {
        Monomial::new(self.e0 - rhs.e0, self.e1 - rhs.e1)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_monomial(f, *self, Vars::Q0Q1.names())
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, m: Monomial, names: [&str; 2]) -> fmt::Result {
    if m.is_one() {
        return write!(f, "1");
    }
    let mut first = true;
    for (e, name) in [(m.e0, names[0]), (m.e1, names[1])] {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, " ")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

/// Which pair of variables a series is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Vars {
    /// Pyramid-partition variables `(q0, q1)`.
    Q0Q1,
    /// Super-rigid variables `(z, q)`.
    ZQ,
}

impl Vars {
    pub fn names(self) -> [&'static str; 2] {
        match self {
            Vars::Q0Q1 => ["q0", "q1"],
            Vars::ZQ => ["z", "q"],
        }
    }
}

/// How a series is cut off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truncation {
    /// Keep terms with `e0 + e1 <= D`.
    TotalDegree(u32),
    /// Keep terms with `e0 <= D0` and `e1 <= D1`.
    PerVariable(u32, u32),
}

impl Truncation {
    /// Whether a (non-negative) monomial survives the truncation.
    pub fn admits(self, m: Monomial) -> bool {
        if !m.is_nonnegative() {
            return false;
        }
        match self {
            Truncation::TotalDegree(d) => m.total_degree() <= i64::from(d),
            Truncation::PerVariable(d0, d1) => m.e0 <= i64::from(d0) && m.e1 <= i64::from(d1),
        }
    }

    /// Largest total degree any admitted monomial can have.
    pub fn max_total_degree(self) -> i64 {
        match self {
            Truncation::TotalDegree(d) => i64::from(d),
            Truncation::PerVariable(d0, d1) => i64::from(d0) + i64::from(d1),
        }
    }

    /// True when every monomial admitted by `self` is admitted by `other`.
    pub fn is_within(self, other: Truncation) -> bool {
        match (self, other) {
            (Truncation::TotalDegree(a), Truncation::TotalDegree(b)) => a <= b,
            (Truncation::PerVariable(a0, a1), Truncation::PerVariable(b0, b1)) => a0 <= b0 && a1 <= b1,
            (Truncation::PerVariable(a0, a1), Truncation::TotalDegree(b)) => a0 + a1 <= b,
            (Truncation::TotalDegree(a), Truncation::PerVariable(b0, b1)) => a <= b0 && a <= b1,
        }
    }

    /// Every admitted monomial, sorted by total degree then `(e0, e1)`.
    pub fn monomials(self) -> Vec<Monomial> {
        let (b0, b1) = match self {
            Truncation::TotalDegree(d) => (d, d),
            Truncation::PerVariable(d0, d1) => (d0, d1),
        };
        let mut out: Vec<Monomial> = (0..=i64::from(b0))
            .flat_map(|e0| (0..=i64::from(b1)).map(move |e1| Monomial::new(e0, e1)))
            .filter(|&m| self.admits(m))
            .collect();
        out.sort_by_key(|m| (m.total_degree(), *m));
        out
    }
}

/// A power series in two variables, exact on every admitted term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    vars: Vars,
    trunc: Truncation,
    terms: BTreeMap<Monomial, BigInt>,
}

impl TruncatedSeries {
    pub fn zero(vars: Vars, trunc: Truncation) -> Self {
        TruncatedSeries { vars, trunc, terms: BTreeMap::new() }
    }

    pub fn one(vars: Vars, trunc: Truncation) -> Self {
        Self::monomial(vars, trunc, Monomial::ONE, BigInt::one())
    }

    /// `c * m`, or zero when `m` falls outside the truncation.
    pub fn monomial(vars: Vars, trunc: Truncation, m: Monomial, c: BigInt) -> Self {
        let mut s = Self::zero(vars, trunc);
        if trunc.admits(m) && !c.is_zero() {
            s.terms.insert(m, c);
        }
        s
    }

    /// Series in `(q0, q1)` truncated at total degree `d`.
    pub fn zero_q(d: u32) -> Self {
        Self::zero(Vars::Q0Q1, Truncation::TotalDegree(d))
    }

    pub fn one_q(d: u32) -> Self {
        Self::one(Vars::Q0Q1, Truncation::TotalDegree(d))
    }

    /// Builds a series from explicit terms. Terms beyond the truncation are
    /// dropped; negative exponents are rejected.
    pub fn from_terms<I, C>(vars: Vars, trunc: Truncation, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, C)>,
        C: Into<BigInt>,
    {
        let mut s = Self::zero(vars, trunc);
        for (m, c) in terms {
            if !m.is_nonnegative() {
                return usage(format!("series term {m} has a negative exponent"));
            }
            if trunc.admits(m) {
                s.add_term(m, c.into());
            }
        }
        Ok(s)
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, m: Monomial) -> BigInt {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(Monomial::ONE)
    }

    /// Adds `c` to the coefficient of `m`, silently dropping out-of-range
    /// monomials. Negative exponents must have been excluded by the caller.
    fn add_term(&mut self, m: Monomial, c: BigInt) {
        debug_assert!(m.is_nonnegative());
        if c.is_zero() || !self.trunc.admits(m) {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Overwrites the coefficient of `m` (used by tests that need a
    /// deliberately wrong series).
    pub fn set_coeff(&mut self, m: Monomial, c: BigInt) -> Result<()> {
        if !self.trunc.admits(m) {
            return usage(format!("monomial {m} lies outside the truncation"));
        }
        if c.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, c);
        }
        Ok(())
    }

    fn check_compatible(&self, other: &TruncatedSeries, op: &str) -> Result<()> {
        if self.vars != other.vars {
            return usage(format!("{op}: series are in different variables"));
        }
        if self.trunc != other.trunc {
            return usage(format!(
                "{op}: mismatched truncations {:?} and {:?}",
                self.trunc, other.trunc
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_compatible(other, "add")?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_compatible(other, "sub")?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> TruncatedSeries {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> TruncatedSeries {
        let mut out = Self::zero(self.vars, self.trunc);
        for (m, c) in &self.terms {
            out.add_term(*m, c * k);
        }
        out
    }

    /// Exact product truncated to the shared bound.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_compatible(other, "mul")?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let mut out = Self::zero(self.vars, self.trunc);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = *ma * *mb;
                if self.trunc.admits(m) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> TruncatedSeries {
        let mut acc = Self::one(self.vars, self.trunc);
        for _ in 0..k {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Solves `divisor * c = self` for `c`. The divisor's constant term must
    /// be `±1` so the division stays within the integers.
    pub fn div_unit(&self, divisor: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_compatible(divisor, "div_unit")?;
        let b0 = divisor.constant_term();
        if b0.abs() != BigInt::one() {
            return usage(format!("div_unit: divisor has constant term {b0}, expected ±1"));
        }
        let mut out = Self::zero(self.vars, self.trunc);
        for m in self.trunc.monomials() {
            let mut acc = self.coeff(m);
            for (mb, cb) in &divisor.terms {
                if mb.is_one() {
                    continue;
                }
                let rest = m / *mb;
                if let Some(cc) = out.terms.get(&rest) {
                    acc -= cb * cc;
                }
            }
            out.add_term(m, acc * &b0);
        }
        Ok(out)
    }

    /// Multiplies by a non-negative monomial.
    pub fn mul_monomial(&self, m: Monomial) -> Result<TruncatedSeries> {
        if !m.is_nonnegative() {
            return usage(format!("mul_monomial: {m} has a negative exponent"));
        }
        let mut out = Self::zero(self.vars, self.trunc);
        for (mm, c) in &self.terms {
            out.add_term(*mm * m, c.clone());
        }
        Ok(out)
    }

    /// Divides by `m`, which must divide every stored term. The result keeps
    /// the requested (smaller or equal) truncation, so callers that shift down
    /// should compute `self` to a correspondingly larger bound.
    pub fn div_monomial(&self, m: Monomial, trunc: Truncation) -> Result<TruncatedSeries> {
        let mut out = Self::zero(self.vars, trunc);
        for (mm, c) in &self.terms {
            let r = *mm / m;
            if !r.is_nonnegative() {
                return invalid(format!("div_monomial: {m} does not divide term {mm}"));
            }
            out.add_term(r, c.clone());
        }
        Ok(out)
    }

    /// Drops terms to fit a tighter truncation.
    pub fn truncate(&self, trunc: Truncation) -> Result<TruncatedSeries> {
        if !trunc.is_within(self.trunc) {
            return usage(format!(
                "truncate: {:?} is not contained in {:?}",
                trunc, self.trunc
            ));
        }
        let mut out = Self::zero(self.vars, trunc);
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    /// Re-truncates a `(z, q)` series whose true value has no `z`
    /// dependence into a larger per-variable bound.
    pub fn widen_z(&self, z_bound: u32) -> Result<TruncatedSeries> {
        let Truncation::PerVariable(_, qd) = self.trunc else {
            return usage("widen_z needs a per-variable truncation");
        };
        if self.terms.keys().any(|m| m.e0 != 0) {
            return usage("widen_z: series depends on z");
        }
        let mut out = Self::zero(self.vars, Truncation::PerVariable(z_bound, qd));
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    /// Substitutes `(z, q) -> (q1, q0 q1)` and truncates by total degree `d`.
    ///
    /// `z^a q^b` becomes `q0^b q1^(a+b)` of total degree `a + 2b`, so the
    /// source must be exact up to `a <= d` and `b <= d / 2`.
    pub fn substitute_zq(&self, d: u32) -> Result<TruncatedSeries> {
        if self.vars != Vars::ZQ {
            return usage("substitute_zq needs a (z, q) series");
        }
        let needed = Truncation::PerVariable(d, d / 2);
        if !needed.is_within(self.trunc) {
            return usage(format!(
                "substitute_zq: source truncation {:?} is too small for total degree {d}",
                self.trunc
            ));
        }
        let mut out = Self::zero_q(d);
        for (m, c) in &self.terms {
            out.add_term(Monomial::new(m.e1, m.e0 + m.e1), c.clone());
        }
        Ok(out)
    }

    /// Least monomial (in `(e0, e1)` order) where the two series differ.
    pub fn first_difference(&self, other: &TruncatedSeries) -> Option<(Monomial, BigInt, BigInt)> {
        let mut keys: Vec<Monomial> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|m| {
            let a = self.coeff(m);
            let b = other.coeff(m);
            (a != b).then_some((m, a, b))
        })
    }

    /// Sum of coefficients of terms of total degree exactly `k`.
    pub fn degree_slice_sum(&self, k: i64) -> BigInt {
        self.terms
            .iter()
            .filter(|(m, _)| m.total_degree() == k)
            .map(|(_, c)| c.clone())
            .sum()
    }

    pub fn to_json(&self) -> SeriesJson {
        let (max_total_degree, max_degrees) = match self.trunc {
            Truncation::TotalDegree(d) => (Some(d), None),
            Truncation::PerVariable(a, b) => (None, Some([a, b])),
        };
        SeriesJson {
            vars: self.vars.names().map(String::from),
            max_total_degree,
            max_degrees,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson { e0: m.e0, e1: m.e1, c: c.to_string() })
                .collect(),
        }
    }

    pub fn from_json(json: &SeriesJson) -> Result<Self> {
        let vars = match [json.vars[0].as_str(), json.vars[1].as_str()] {
            ["q0", "q1"] => Vars::Q0Q1,
            ["z", "q"] => Vars::ZQ,
            other => return invalid(format!("unknown series variables {other:?}")),
        };
        let trunc = match (json.max_total_degree, json.max_degrees) {
            (Some(d), None) => Truncation::TotalDegree(d),
            (None, Some([a, b])) => Truncation::PerVariable(a, b),
            _ => return invalid("series needs exactly one of max_total_degree / max_degrees"),
        };
        let mut terms = Vec::with_capacity(json.terms.len());
        for t in &json.terms {
            let c: BigInt = t
                .c
                .parse()
                .map_err(|e| crate::Error::Validation(format!("bad coefficient {:?}: {e}", t.c)))?;
            terms.push((Monomial::new(t.e0, t.e1), c));
        }
        Self::from_terms(vars, trunc, terms)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut sorted: Vec<_> = self.terms.iter().collect();
        sorted.sort_by_key(|(m, _)| (m.total_degree(), **m));
        for (i, (m, c)) in sorted.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                fmt_monomial(f, *m, self.vars.names())?;
            }
        }
        Ok(())
    }
}

/// Wire form of a series: terms sorted by `(e0, e1)`, decimal coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub vars: [String; 2],
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_total_degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_degrees: Option<[u32; 2]>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub e0: i64,
    pub e1: i64,
    pub c: String,
}

/// Exact product of two series with the same truncation.
pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.mul(b)
}

/// `a / b` for `b` with constant term `±1`.
pub fn series_div_unit(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.div_unit(b)
}

/// One factor `(1 + sign * monomial)^exponent` of a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factor {
    pub monomial: Monomial,
    /// `false` for `1 + m`, `true` for `1 - m`.
    pub negated: bool,
    pub exponent: i64,
}

impl Factor {
    pub fn plus(monomial: Monomial, exponent: i64) -> Self {
        Factor { monomial, negated: false, exponent }
    }

    pub fn minus(monomial: Monomial, exponent: i64) -> Self {
        Factor { monomial, negated: true, exponent }
    }
}

/// Generalized binomial coefficients `C(e, j)` for `j = 0..=jmax`.
fn binomials(e: i64, jmax: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(jmax + 1);
    let mut c = BigInt::one();
    out.push(c.clone());
    for j in 0..jmax as i64 {
        c = c * BigInt::from(e - j) / BigInt::from(j + 1);
        out.push(c.clone());
    }
    out
}

/// Expands `(1 ± m)^e` as a series.
fn expand_factor(f: Factor, vars: Vars, trunc: Truncation) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(vars, trunc);
    let deg = f.monomial.total_degree();
    let jmax = (trunc.max_total_degree() / deg) as usize;
    let jmax = if f.exponent >= 0 { jmax.min(f.exponent as usize) } else { jmax };
    for (j, c) in binomials(f.exponent, jmax).into_iter().enumerate() {
        let m = f.monomial.pow(j as i64);
        let c = if f.negated && j % 2 == 1 { -c } else { c };
        s.add_term(m, c);
    }
    s
}

/// Expands `∏ (1 ± m)^e` over a stream of factors, truncated.
///
/// Factors must arrive in non-decreasing total degree; the stream is not
/// consumed past the first factor whose degree exceeds every admitted
/// monomial, so infinite streams are fine.
pub fn product_expand<I>(factors: I, vars: Vars, trunc: Truncation) -> Result<TruncatedSeries>
where
    I: IntoIterator<Item = Factor>,
{
    let mut acc = TruncatedSeries::one(vars, trunc);
    let mut last_degree = i64::MIN;
    for f in factors {
        let deg = f.monomial.total_degree();
        if deg <= 0 {
            return usage(format!(
                "product factor {} has total degree {deg}; truncation needs degree >= 1",
                f.monomial
            ));
        }
        if !f.monomial.is_nonnegative() {
            return usage(format!("product factor {} has a negative exponent", f.monomial));
        }
        if deg < last_degree {
            return usage("product factors must arrive in non-decreasing total degree");
        }
        last_degree = deg;
        if deg > trunc.max_total_degree() {
            break;
        }
        if f.exponent == 0 || !trunc.admits(f.monomial) {
            continue;
        }
        acc = acc.mul_unchecked(&expand_factor(f, vars, trunc));
    }
    Ok(acc)
}

/// `±m`, the first argument of the MacMahon function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedMonomial {
    pub negative: bool,
    pub monomial: Monomial,
}

impl SignedMonomial {
    pub const ONE: SignedMonomial = SignedMonomial { negative: false, monomial: Monomial::ONE };

    pub fn plus(monomial: Monomial) -> Self {
        SignedMonomial { negative: false, monomial }
    }

    pub fn minus(monomial: Monomial) -> Self {
        SignedMonomial { negative: true, monomial }
    }
}

/// The MacMahon function `M(x, qm) = ∏_{k>=1} (1 - x qm^k)^(-k)`, or its
/// reciprocal when `inverse` is set.
pub fn macmahon(
    x: SignedMonomial,
    qm: Monomial,
    inverse: bool,
    vars: Vars,
    trunc: Truncation,
) -> Result<TruncatedSeries> {
    if qm.total_degree() < 1 {
        return usage(format!("macmahon: base {qm} must have total degree >= 1"));
    }
    if (x.monomial * qm).total_degree() < 1 {
        return usage(format!(
            "macmahon: x·qm = {} must have total degree >= 1",
            x.monomial * qm
        ));
    }
    let max = trunc.max_total_degree();
    let factors = (1i64..)
        .map(|k| {
            let m = x.monomial * qm.pow(k);
            // 1 - x qm^k = 1 + (-x) qm^k
            let negated = !x.negative;
            Factor { monomial: m, negated, exponent: if inverse { k } else { -k } }
        })
        .take_while(|f| f.monomial.total_degree() <= max);
    product_expand(factors, vars, trunc)
}

/// `M(1, q0 q1)` to total degree `d`.
pub fn macmahon_q(d: u32) -> Result<TruncatedSeries> {
    macmahon(SignedMonomial::ONE, Monomial::q(), false, Vars::Q0Q1, Truncation::TotalDegree(d))
}

fn pyramid_factors(n: u32, d: u32) -> impl Iterator<Item = Factor> {
    let n = i64::from(n);
    let d = i64::from(d);
    // q0^k q1^(k-1) has degree 2k-1, q0^k q1^(k+1) has degree 2k+1; merge by degree.
    (1..=d).flat_map(move |k| {
        [
            Factor::plus(Monomial::new(k, k - 1), k + n - 1),
            Factor::plus(Monomial::new(k, k + 1), (k - n + 1).max(0)),
        ]
    })
}

/// The closed form for the length-`n` generating function:
/// `M(1,q0q1)^2 ∏(1+q0^k q1^(k-1))^(k+n-1) ∏(1+q0^k q1^(k+1))^max(k-n+1,0)`.
pub fn formula_z(n: u32, d: u32) -> Result<TruncatedSeries> {
    if n < 1 {
        return usage("formula_z needs n >= 1");
    }
    let trunc = Truncation::TotalDegree(d);
    let m = macmahon_q(d)?;
    let prod = product_expand(pyramid_factors(n, d), Vars::Q0Q1, trunc)?;
    m.mul(&m)?.mul(&prod)
}

/// `∏_{k>=1} (1 + q0^k q1^(k-1))^(k+n-1)`, truncated. For `n = 1` this is
/// `M(-q1^-1, q0 q1)^-1`.
pub fn shuffle_prefactor(n: u32, d: u32) -> Result<TruncatedSeries> {
    let n = i64::from(n);
    let factors = (1..=i64::from(d)).map(move |k| Factor::plus(Monomial::new(k, k - 1), k + n - 1));
    product_expand(factors, Vars::Q0Q1, Truncation::TotalDegree(d))
}

/// `∏_{i=1}^{k} (1 + q0^i q1^(i-1))^(i+n-1)`: the factor collected by `k`
/// shuffling steps starting from length `n`.
pub fn finite_shuffle_prefactor(n: u32, k: u32, d: u32) -> Result<TruncatedSeries> {
    let n = i64::from(n);
    let factors = (1..=i64::from(k)).map(move |i| Factor::plus(Monomial::new(i, i - 1), i + n - 1));
    product_expand(factors, Vars::Q0Q1, Truncation::TotalDegree(d))
}

/// `Z_X(z, q) = M(1,q)^2 M(-z,q)^-1`, truncated per variable.
pub fn formula_zx(z_degree: u32, q_degree: u32) -> Result<TruncatedSeries> {
    formula_zx_general(1, z_degree, q_degree)
}

/// `M(1,q)^2 ∏_{i,j>=1} (1 + z q^(i+j+n-2))`; equals `Z_X` at `n = 1`.
pub fn formula_zx_general(n: u32, z_degree: u32, q_degree: u32) -> Result<TruncatedSeries> {
    let trunc = Truncation::PerVariable(z_degree, q_degree);
    let mq = macmahon(SignedMonomial::ONE, Monomial::new(0, 1), false, Vars::ZQ, trunc)?;
    let legs = cauchy_product(n, trunc)?;
    mq.mul(&mq)?.mul(&legs)
}

/// `∏_{i,j>=1} (1 + z q^(i+j+n-2)) = ∏_{k>=n} (1 + z q^k)^(k-n+1)` in `(z, q)`.
pub fn cauchy_product(n: u32, trunc: Truncation) -> Result<TruncatedSeries> {
    if n < 1 {
        return usage("cauchy_product needs n >= 1");
    }
    let n = i64::from(n);
    let max = trunc.max_total_degree();
    let factors = (n..)
        .map(move |k| Factor::plus(Monomial::new(1, k), k - n + 1))
        .take_while(move |f| f.monomial.total_degree() <= max);
    product_expand(factors, Vars::ZQ, trunc)
}

/// `Z(∞; q0, q1) = Z_X(q1, q0 q1)`, truncated by total degree.
pub fn formula_zinf(d: u32) -> Result<TruncatedSeries> {
    formula_zx(d, d / 2)?.substitute_zq(d)
}

/// `M(1,q0q1)^2 M(-q1^-1, q0q1)^-1`: the other reading of `Z(∞)`, kept so
/// the checks can show which reading satisfies the identities.
pub fn formula_zinf_alternate(d: u32) -> Result<TruncatedSeries> {
    let trunc = Truncation::TotalDegree(d);
    let m = macmahon_q(d)?;
    let inv = macmahon(SignedMonomial::minus(Monomial::new(0, -1)), Monomial::q(), true, Vars::Q0Q1, trunc)?;
    m.mul(&m)?.mul(&inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(terms: &[((i64, i64), i64)], d: u32) -> TruncatedSeries {
        TruncatedSeries::from_terms(
            Vars::Q0Q1,
            Truncation::TotalDegree(d),
            terms.iter().map(|&((a, b), c)| (Monomial::new(a, b), BigInt::from(c))),
        )
        .unwrap()
    }

    #[test]
    fn mul_examples() {
        let one = q(&[((0, 0), 1)], 3);
        let a = q(&[((0, 0), 1), ((1, 0), 1)], 3);
        assert_eq!(series_mul(&one, &a).unwrap(), a);

        let p = q(&[((0, 0), 1), ((1, 0), 1)], 2);
        let m = q(&[((0, 0), 1), ((1, 0), -1)], 2);
        assert_eq!(p.mul(&m).unwrap(), q(&[((0, 0), 1), ((2, 0), -1)], 2));

        // (1 + q0q1)^3 = 1 + 3q0q1 + 3q0^2q1^2 + q0^3q1^3, cut at degree 4
        let b = q(&[((0, 0), 1), ((1, 1), 1)], 4);
        assert_eq!(b.pow(3), q(&[((0, 0), 1), ((1, 1), 3), ((2, 2), 3)], 4));
    }

    #[test]
    fn mul_rejects_mismatched_truncation() {
        let a = TruncatedSeries::one_q(2);
        let b = TruncatedSeries::one_q(3);
        assert!(matches!(a.mul(&b), Err(crate::Error::Usage(_))));
    }

    #[test]
    fn div_unit_examples() {
        let a = q(&[((0, 0), 1), ((1, 0), 1)], 3);
        assert_eq!(a.div_unit(&TruncatedSeries::one_q(3)).unwrap(), a);

        let a = q(&[((0, 0), 1), ((2, 0), -1)], 3);
        let b = q(&[((0, 0), 1), ((1, 0), -1)], 3);
        assert_eq!(a.div_unit(&b).unwrap(), q(&[((0, 0), 1), ((1, 0), 1)], 3));

        // geometric series
        let b = q(&[((0, 0), 1), ((1, 1), -1)], 4);
        let got = TruncatedSeries::one_q(4).div_unit(&b).unwrap();
        assert_eq!(got, q(&[((0, 0), 1), ((1, 1), 1), ((2, 2), 1)], 4));
    }

    #[test]
    fn div_unit_rejects_non_unit() {
        let b = q(&[((0, 0), 2), ((1, 0), 1)], 3);
        assert!(TruncatedSeries::one_q(3).div_unit(&b).is_err());
        let b = q(&[((1, 0), 1)], 3);
        assert!(TruncatedSeries::one_q(3).div_unit(&b).is_err());
    }

    #[test]
    fn negative_exponents_are_rejected() {
        let r = TruncatedSeries::from_terms(
            Vars::Q0Q1,
            Truncation::TotalDegree(3),
            [(Monomial::new(2, -1), BigInt::one())],
        );
        assert!(r.is_err());
        assert!(TruncatedSeries::one_q(2).mul_monomial(Monomial::new(0, -1)).is_err());
    }

    #[test]
    fn product_expand_examples() {
        let t = Truncation::TotalDegree(3);
        let empty = product_expand(std::iter::empty(), Vars::Q0Q1, t).unwrap();
        assert_eq!(empty, TruncatedSeries::one_q(3));

        let single = product_expand([Factor::plus(Monomial::q0(), 1)], Vars::Q0Q1, t).unwrap();
        assert_eq!(single, q(&[((0, 0), 1), ((1, 0), 1)], 3));

        let bad = product_expand([Factor::plus(Monomial::new(1, -1), 1)], Vars::Q0Q1, t);
        assert!(matches!(bad, Err(crate::Error::Usage(_))));
    }

    #[test]
    fn product_expand_negative_exponent() {
        // (1 - q0)^-2 = sum (j+1) q0^j
        let s = product_expand([Factor::minus(Monomial::q0(), -2)], Vars::Q0Q1, Truncation::TotalDegree(4))
            .unwrap();
        assert_eq!(s, q(&[((0, 0), 1), ((1, 0), 2), ((2, 0), 3), ((3, 0), 4), ((4, 0), 5)], 4));
    }

    #[test]
    fn product_expand_stops_on_infinite_stream() {
        let factors = (1..).map(|k| Factor::plus(Monomial::new(k, 0), 1));
        let s = product_expand(factors, Vars::Q0Q1, Truncation::TotalDegree(5)).unwrap();
        // distinct-part partitions of 0..5: 1,1,1,2,2,3
        let expected: Vec<i64> = vec![1, 1, 1, 2, 2, 3];
        for (k, e) in expected.into_iter().enumerate() {
            assert_eq!(s.coeff(Monomial::new(k as i64, 0)), BigInt::from(e));
        }
    }

    #[test]
    fn macmahon_examples() {
        let m0 = macmahon(SignedMonomial::ONE, Monomial::q(), false, Vars::Q0Q1, Truncation::TotalDegree(0));
        assert_eq!(m0.unwrap(), TruncatedSeries::one_q(0));

        let m = macmahon(
            SignedMonomial::ONE,
            Monomial::new(0, 1),
            false,
            Vars::ZQ,
            Truncation::PerVariable(0, 5),
        )
        .unwrap();
        let coeffs: Vec<BigInt> = (0..=5).map(|k| m.coeff(Monomial::new(0, k))).collect();
        assert_eq!(coeffs, [1, 1, 3, 6, 13, 24].map(BigInt::from));

        let inv = macmahon(
            SignedMonomial::minus(Monomial::new(0, -1)),
            Monomial::q(),
            true,
            Vars::Q0Q1,
            Truncation::TotalDegree(3),
        )
        .unwrap();
        assert_eq!(inv, q(&[((0, 0), 1), ((1, 0), 1), ((2, 1), 2)], 3));
    }

    #[test]
    fn macmahon_rejects_degenerate_arguments() {
        let t = Truncation::TotalDegree(3);
        assert!(macmahon(SignedMonomial::ONE, Monomial::ONE, false, Vars::Q0Q1, t).is_err());
        let x = SignedMonomial::minus(Monomial::new(-1, -1));
        assert!(macmahon(x, Monomial::q(), false, Vars::Q0Q1, t).is_err());
    }

    #[test]
    fn formula_z_examples() {
        assert_eq!(formula_z(1, 0).unwrap(), TruncatedSeries::one_q(0));
        assert_eq!(
            formula_z(1, 3).unwrap(),
            q(&[((0, 0), 1), ((1, 0), 1), ((1, 1), 2), ((2, 1), 4), ((1, 2), 1)], 3)
        );
        assert_eq!(
            formula_z(2, 2).unwrap(),
            q(&[((0, 0), 1), ((1, 0), 2), ((2, 0), 1), ((1, 1), 2)], 2)
        );
        assert!(formula_z(0, 3).is_err());
    }

    #[test]
    fn zx_examples() {
        assert_eq!(formula_zx(0, 0).unwrap(), TruncatedSeries::one(Vars::ZQ, Truncation::PerVariable(0, 0)));
        let inv = macmahon(
            SignedMonomial::minus(Monomial::new(1, 0)),
            Monomial::new(0, 1),
            true,
            Vars::ZQ,
            Truncation::PerVariable(2, 3),
        )
        .unwrap();
        assert_eq!(inv.coeff(Monomial::new(1, 1)), BigInt::one());
        // M(-z,q)^-1 = (1+zq)(1+zq^2)^2(1+zq^3)^3...: z q^3 has coefficient 3
        assert_eq!(inv.coeff(Monomial::new(1, 3)), BigInt::from(3));
        assert_eq!(inv.coeff(Monomial::new(2, 3)), BigInt::from(2));
    }

    #[test]
    fn zinf_reading_matches_formula_at_n1() {
        // Z(1) = M(-q1^-1, q0q1)^-1 Z(∞) holds with Z(∞) = Z_X(q1, q0q1) ...
        let d = 8;
        let lhs = formula_z(1, d).unwrap();
        let rhs = shuffle_prefactor(1, d).unwrap().mul(&formula_zinf(d).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        // ... and fails with the other reading.
        let alt = shuffle_prefactor(1, d).unwrap().mul(&formula_zinf_alternate(d).unwrap()).unwrap();
        assert_ne!(lhs, alt);
    }

    #[test]
    fn substitution_needs_enough_source_precision() {
        let s = formula_zx(3, 1).unwrap();
        assert!(s.substitute_zq(4).is_err());
        assert!(formula_zx(4, 2).unwrap().substitute_zq(4).is_ok());
    }

    #[test]
    fn json_round_trip_and_order() {
        let s = formula_z(2, 4).unwrap();
        let j = s.to_json();
        let mut sorted = j.terms.clone();
        sorted.sort_by_key(|t| (t.e0, t.e1));
        assert_eq!(sorted, j.terms);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.starts_with(r#"{"vars":["q0","q1"],"max_total_degree":4,"terms":["#));
        let back = TruncatedSeries::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(formula_z(1, 2).unwrap().to_string(), "1 + q0 + 2q0 q1");
    }
}
