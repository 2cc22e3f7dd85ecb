//! Young's seminormal form on the standard-tableaux basis.
//!
//! For the adjacent transposition `s_k = (k, k+1)` and a standard tableau `T`,
//! let `r = c(k+1) - c(k)` be the axial distance (content difference) in `T`
//! and `T'` the tableau with `k` and `k+1` swapped. Then
//!
//! ```text
//! s_k v_T = (1/r) v_T + (1 + 1/r) v_T'
//! ```
//!
//! where the second term is dropped when `T'` is not standard (then `r = ±1`).
//! A permutation acts through its bubble-sort word: if
//! `σ = s_jL ∘ ⋯ ∘ s_j1` then `ρ(σ) = A_jL ⋯ A_j1`.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::combinatorics::{standard_tableaux, Partition, StandardTableau};
use crate::error::{invalid, Result};
use crate::exact_linalg::{inv_mod, mul_mod, ratio, Rational, RationalMatrix, RationalVector};
use crate::permgroup::Permutation;

/// Action of one adjacent transposition, stored per basis tableau.
#[derive(Clone, Debug)]
struct AdjacentAction {
    /// Axial distance `c(k+1) - c(k)` in each tableau; never zero.
    axial: Vec<i64>,
    /// Index of the swapped tableau when it is standard.
    partner: Vec<Option<usize>>,
}

/// Seminormal matrices of one irreducible, built lazily per adjacent transposition.
#[derive(Debug)]
pub struct IrrepMatrixFactory {
    shape: Partition,
    tableaux: Vec<StandardTableau>,
    index: HashMap<Vec<Vec<usize>>, usize>,
    adjacent: Vec<OnceLock<AdjacentAction>>,
}

impl IrrepMatrixFactory {
    pub fn new(shape: &Partition) -> Self {
        let tableaux = standard_tableaux(shape);
        let index = tableaux.iter().enumerate().map(|(i, t)| (t.rows().to_vec(), i)).collect();
        let n = shape.size();
        IrrepMatrixFactory {
            shape: shape.clone(),
            tableaux,
            index,
            adjacent: (1..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn degree(&self) -> usize {
        self.shape.size()
    }

    /// `f^λ`.
    pub fn dimension(&self) -> usize {
        self.tableaux.len()
    }

    /// The basis, in canonical tableau order.
    pub fn tableaux(&self) -> &[StandardTableau] {
        &self.tableaux
    }

    pub fn index_of(&self, t: &StandardTableau) -> Option<usize> {
        self.index.get(t.rows()).copied()
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k >= self.degree() {
            return Err(invalid(format!(
                "adjacent transposition index {k} outside 1..{}",
                self.degree().saturating_sub(1)
            )));
        }
        Ok(())
    }

    fn check_perm(&self, sigma: &Permutation) -> Result<()> {
        if sigma.degree() != self.degree() {
            return Err(invalid(format!(
                "permutation of degree {} acting on a representation of S_{}",
                sigma.degree(),
                self.degree()
            )));
        }
        Ok(())
    }

    fn action(&self, k: usize) -> &AdjacentAction {
        self.adjacent[k - 1].get_or_init(|| {
            let mut axial = Vec::with_capacity(self.dimension());
            let mut partner = Vec::with_capacity(self.dimension());
            for t in &self.tableaux {
                let pos = t.positions();
                let (ra, ca) = pos[k - 1];
                let (rb, cb) = pos[k];
                axial.push((cb as i64 - rb as i64) - (ca as i64 - ra as i64));
                let swappable = ra != rb && ca != cb;
                partner.push(swappable.then(|| {
                    let mut rows = t.rows().to_vec();
                    rows[ra][ca] = k + 1;
                    rows[rb][cb] = k;
                    self.index[&rows]
                }));
            }
            AdjacentAction { axial, partner }
        })
    }

    /// Matrix of `(k, k+1)`, `1 <= k < n`.
    pub fn adjacent_matrix(&self, k: usize) -> Result<RationalMatrix> {
        self.check_k(k)?;
        let act = self.action(k);
        let f = self.dimension();
        let mut m = RationalMatrix::zeros(f, f);
        for t in 0..f {
            let r = act.axial[t];
            m.set(t, t, ratio(1, r));
            if let Some(u) = act.partner[t] {
                m.set(u, t, ratio(r + 1, r));
            }
        }
        Ok(m)
    }

    /// Replaces `v` by `A_k v`.
    pub fn apply_adjacent(&self, k: usize, v: &mut [Rational]) -> Result<()> {
        self.check_k(k)?;
        if v.len() != self.dimension() {
            return Err(invalid(format!("vector of length {} for dimension {}", v.len(), self.dimension())));
        }
        let act = self.action(k);
        for t in 0..v.len() {
            let r = act.axial[t];
            match act.partner[t] {
                None => {
                    if r < 0 {
                        v[t] = -std::mem::take(&mut v[t]);
                    }
                }
                Some(u) if t < u => {
                    // (A v)_T = (1/r) v_T + (1 - 1/r) v_T', and r_T' = -r.
                    let d = ratio(1, r);
                    let (a, b) = (v[t].clone(), v[u].clone());
                    v[t] = &d * &a + (Rational::one() - &d) * &b;
                    v[u] = (Rational::one() + &d) * a - d * b;
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    /// `ρ(σ) v`.
    pub fn apply_permutation(&self, sigma: &Permutation, v: &[Rational]) -> Result<RationalVector> {
        self.check_perm(sigma)?;
        let mut w = v.to_vec();
        for k in sigma.adjacent_word() {
            self.apply_adjacent(k, &mut w)?;
        }
        Ok(w)
    }

    /// `ρ(σ)`; the identity maps to the identity matrix.
    pub fn rep_matrix(&self, sigma: &Permutation) -> Result<RationalMatrix> {
        self.check_perm(sigma)?;
        let f = self.dimension();
        let word = sigma.adjacent_word();
        let mut m = RationalMatrix::zeros(f, f);
        for c in 0..f {
            let mut col = vec![Rational::zero(); f];
            col[c] = Rational::one();
            for &k in &word {
                self.apply_adjacent(k, &mut col)?;
            }
            for (r, x) in col.into_iter().enumerate() {
                m.set(r, c, x);
            }
        }
        Ok(m)
    }

    /// `A_k v` over `Z/p`.
    pub fn apply_adjacent_mod_p(&self, k: usize, v: &mut [u64], p: u64) -> Result<()> {
        self.check_k(k)?;
        let act = self.action(k);
        for t in 0..v.len() {
            let r = act.axial[t];
            match act.partner[t] {
                None => {
                    if r < 0 {
                        v[t] = (p - v[t]) % p;
                    }
                }
                Some(u) if t < u => {
                    let d = signed_inverse_mod(r, p);
                    let one_minus = (1 + p - d) % p;
                    let one_plus = (1 + d) % p;
                    let (a, b) = (v[t], v[u]);
                    v[t] = (mul_mod(d, a, p) + mul_mod(one_minus, b, p)) % p;
                    v[u] = (mul_mod(one_plus, a, p) + mul_mod(p - d, b, p)) % p;
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    /// `ρ(σ)` reduced mod `p`, row-major.
    pub fn rep_matrix_mod_p(&self, sigma: &Permutation, p: u64) -> Result<Vec<u64>> {
        self.check_perm(sigma)?;
        let f = self.dimension();
        let word = sigma.adjacent_word();
        let mut m = vec![0u64; f * f];
        for c in 0..f {
            let mut col = vec![0u64; f];
            col[c] = 1;
            for &k in &word {
                self.apply_adjacent_mod_p(k, &mut col, p)?;
            }
            for (r, x) in col.into_iter().enumerate() {
                m[r * f + c] = x;
            }
        }
        Ok(m)
    }
}

fn signed_inverse_mod(r: i64, p: u64) -> u64 {
    let inv = inv_mod(r.unsigned_abs() % p, p);
    if r < 0 {
        (p - inv) % p
    } else {
        inv
    }
}

/// Convenience: `ρ_λ(σ)` without keeping a factory.
pub fn rep_matrix(shape: &Partition, sigma: &Permutation) -> Result<RationalMatrix> {
    IrrepMatrixFactory::new(shape).rep_matrix(sigma)
}

/// Exact determinant by elimination; only used on small matrices in tests.
#[cfg(test)]
fn determinant(m: &RationalMatrix) -> Rational {
    let n = m.nrows();
    let mut a = m.to_rows();
    let mut det = crate::exact_linalg::rat(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Rational::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let (top, rest) = a.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in rest {
            let f = &row[c] / &pivot[c];
            for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= &f * y;
            }
        }
    }
    det
}
