//! Univariate polynomials and truncated power series in `z` over the rationals.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::exact_linalg::{rat, Rational};

/// A polynomial (`order == None`) or a series known through degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateSeries {
    coeffs: Vec<Rational>,
    order: Option<usize>,
}

impl UnivariateSeries {
    pub fn polynomial(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivariateSeries { coeffs, order: None }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Self::polynomial(Vec::new())
    }

    pub fn one() -> Self {
        Self::from_integers(&[1])
    }

    /// `c z^d`.
    pub fn monomial(c: Rational, d: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); d + 1];
        coeffs[d] = c;
        Self::polynomial(coeffs)
    }

    /// `1 / (1 - z^k)` through degree `order`; `k >= 1`.
    pub fn geometric(k: usize, order: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("1/(1 - z^0) is undefined"));
        }
        let coeffs = (0..=order).map(|d| if d % k == 0 { Rational::one() } else { Rational::zero() }).collect();
        Ok(UnivariateSeries { coeffs, order: Some(order) })
    }

    /// Drops everything above degree `order`.
    pub fn truncated(&self, order: usize) -> Self {
        let order = self.order.map_or(order, |o| o.min(order));
        let coeffs = (0..=order).map(|d| self.coefficient_or_zero(d)).collect();
        UnivariateSeries { coeffs, order: Some(order) }
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn is_polynomial(&self) -> bool {
        self.order.is_none()
    }

    /// Stored coefficients from degree 0 upward.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^d`, or `None` past the truncation order.
    pub fn coefficient(&self, d: usize) -> Option<Rational> {
        match self.order {
            Some(o) if d > o => None,
            _ => Some(self.coefficient_or_zero(d)),
        }
    }

    fn coefficient_or_zero(&self, d: usize) -> Rational {
        self.coeffs.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    /// Highest degree with a nonzero coefficient; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Value at `z = 1`; only defined for polynomials.
    pub fn evaluate_at_one(&self) -> Result<Rational> {
        if !self.is_polynomial() {
            return Err(invalid("cannot evaluate a truncated series at z = 1"));
        }
        Ok(self.coeffs.iter().sum())
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    fn combine_order(a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    fn finish(mut coeffs: Vec<Rational>, order: Option<usize>) -> Self {
        match order {
            Some(o) => {
                coeffs.resize(o + 1, Rational::zero());
                UnivariateSeries { coeffs, order }
            }
            None => Self::polynomial(coeffs),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = Self::combine_order(self.order, other.order);
        let len = self.coeffs.len().max(other.coeffs.len());
        let len = order.map_or(len, |o| len.min(o + 1));
        let coeffs = (0..len).map(|d| self.coefficient_or_zero(d) + other.coefficient_or_zero(d)).collect();
        Self::finish(coeffs, order)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Self::finish(coeffs, self.order)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = Self::combine_order(self.order, other.order);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::finish(Vec::new(), order);
        }
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let len = order.map_or(full, |o| full.min(o + 1));
        let mut coeffs = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().take(len.saturating_sub(i)) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::finish(coeffs, order)
    }
}

impl fmt::Display for UnivariateSeries {
    /// Ascending terms, e.g. `1 + 2*z^2 - z^3/2`; truncated series end in `+ O(z^k)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = (c.is_negative(), c.abs());
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let var = match d {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{d}"),
            };
            match (d, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => f.write_str(&var)?,
                (_, false) => write!(f, "{mag}*{var}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        if let Some(o) = self.order {
            write!(f, " + O(z^{})", o + 1)?;
        }
        Ok(())
    }
}

/// Integral coefficients serialize as JSON numbers, others as `"p/q"` strings.
pub(crate) fn rational_json(c: &Rational) -> serde_json::Value {
    if c.is_integer() {
        if let Ok(v) = i64::try_from(c.numer()) {
            return serde_json::Value::from(v);
        }
    }
    serde_json::Value::from(c.to_string())
}

impl Serialize for UnivariateSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&rational_json(c))?;
        }
        seq.end()
    }
}
