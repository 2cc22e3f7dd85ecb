//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::ExponentVector;
use crate::error::{invalid, Result};
use crate::exact_linalg::Rational;
use crate::permgroup::Permutation;

/// A polynomial in `x_1..x_n`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    n: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl SparsePolynomial {
    pub fn zero(n: usize) -> Self {
        SparsePolynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::term(c, ExponentVector::zero(n))
    }

    /// `x_k`, one-based.
    pub fn variable(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(invalid(format!("variable x{k} outside x1..x{n}")));
        }
        let mut e = vec![0; n];
        e[k - 1] = 1;
        Ok(Self::term(Rational::one(), ExponentVector(e)))
    }

    pub fn term(c: Rational, exponents: ExponentVector) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (ExponentVector, Rational)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            if e.len() != n {
                return Err(invalid(format!("exponent vector of length {} in {n} variables", e.len())));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Adds `c x^e` in place; `e` must have length `n`.
    pub fn add_term(&mut self, e: ExponentVector, c: Rational) {
        debug_assert_eq!(e.len(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree of the highest term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::total_degree).max()
    }

    /// True for zero and for polynomials whose terms all share one degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(ExponentVector::total_degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(invalid(format!("polynomials in {} and {} variables", self.n, other.n)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        SparsePolynomial { n: self.n, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut out = Self::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ExponentVector(ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect());
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// `σ·p`: every `x_k` becomes `x_{σ(k)}`.
    pub fn permute_variables(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.degree() != self.n {
            return Err(invalid(format!("permutation of degree {} acting on {} variables", sigma.degree(), self.n)));
        }
        let images = sigma.zero_based();
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(permute_exponents(e, images), c.clone());
        }
        Ok(out)
    }

    /// Terms in print order: degree descending, then exponent vectors compared
    /// from the last variable backwards, larger first.
    pub fn sorted_terms(&self) -> Vec<(&ExponentVector, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(e, _)| (Reverse(e.total_degree()), Reverse(e.0.iter().rev().copied().collect::<Vec<_>>())));
        v
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.sorted_terms()
            .into_iter()
            .map(|(e, c)| JsonTerm { coeff: c.to_string(), exponents: e.0.clone() })
            .collect()
    }

    pub fn from_json_terms(n: usize, terms: &[JsonTerm]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|t| {
                let c = Rational::from_str(&t.coeff).map_err(|_| invalid(format!("bad coefficient {:?}", t.coeff)))?;
                Ok((ExponentVector(t.exponents.clone()), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n, parsed)
    }
}

pub(crate) fn permute_exponents(e: &ExponentVector, images: &[usize]) -> ExponentVector {
    let mut out = vec![0; e.len()];
    for (k, &x) in e.0.iter().enumerate() {
        out[images[k]] = x;
    }
    ExponentVector(out)
}

/// One term of the JSON form: `{"coeff": "p/q", "exponents": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub exponents: Vec<u32>,
}

impl Serialize for SparsePolynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(serializer)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &ExponentVector) -> fmt::Result {
    let mut first = true;
    for (k, &x) in e.0.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if x == 1 {
            write!(f, "x{}", k + 1)?;
        } else {
            write!(f, "x{}^{x}", k + 1)?;
        }
    }
    Ok(())
}

impl fmt::Display for SparsePolynomial {
    /// `2*x3 - 2*x1`, `x1^2*x2 + 1/2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let sign = match (i == 0, c.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            f.write_str(sign)?;
            let mag = c.abs();
            let constant = e.total_degree() == 0;
            if constant {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write_monomial(f, e)?;
            } else {
                write!(f, "{mag}*")?;
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}
