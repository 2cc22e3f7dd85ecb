//! Young symmetrizers and higher Specht polynomials `F_T^S = ε_T(x_T^{i(S)})`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::combinatorics::{cocharge, monomial, ExponentVector, Partition, StandardTableau};
use crate::error::{consistency, invalid, Result};
use crate::exact_linalg::{rat, Rational};
use crate::permgroup::Permutation;
use crate::polynomial::{permute_exponents, SparsePolynomial};

pub use crate::polynomial::JsonTerm;

/// `ε_T = Σ_{σ ∈ R(T)} Σ_{τ ∈ C(T)} sign(τ) τσ`, with both groups listed explicitly.
#[derive(Clone, Debug)]
pub struct YoungSymmetrizer {
    tableau: StandardTableau,
    row_group: Vec<Permutation>,
    column_group: Vec<(Permutation, i64)>,
}

fn arrangements(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in arrangements(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// All permutations of `{1..n}` that map each block onto itself.
fn block_stabilizer(n: usize, blocks: &[Vec<usize>]) -> Vec<Permutation> {
    let mut perms = vec![(0..n).collect::<Vec<usize>>()];
    for block in blocks.iter().filter(|b| b.len() > 1) {
        let zero: Vec<usize> = block.iter().map(|x| x - 1).collect();
        let choices = arrangements(&zero);
        perms = perms
            .iter()
            .flat_map(|p| {
                choices.iter().map(|img| {
                    let mut q = p.clone();
                    for (&src, &dst) in zero.iter().zip(img) {
                        q[src] = dst;
                    }
                    q
                })
            })
            .collect();
    }
    perms
        .into_iter()
        .map(|images| Permutation::from_images(&images.iter().map(|x| x + 1).collect::<Vec<_>>()).expect("bijection"))
        .collect()
}

impl YoungSymmetrizer {
    pub fn new(tableau: &StandardTableau) -> Self {
        let n = tableau.size();
        let rows = tableau.rows().to_vec();
        let width = rows.first().map_or(0, Vec::len);
        let columns: Vec<Vec<usize>> =
            (0..width).map(|c| rows.iter().filter_map(|r| r.get(c).copied()).collect()).collect();
        let row_group = block_stabilizer(n, &rows);
        let column_group = block_stabilizer(n, &columns).into_iter().map(|p| {
            let s = p.sign();
            (p, s)
        });
        YoungSymmetrizer { tableau: tableau.clone(), row_group, column_group: column_group.collect() }
    }

    pub fn tableau(&self) -> &StandardTableau {
        &self.tableau
    }

    /// `R(T)`.
    pub fn row_group(&self) -> &[Permutation] {
        &self.row_group
    }

    /// `C(T)` with signs.
    pub fn column_group(&self) -> &[(Permutation, i64)] {
        &self.column_group
    }

    /// `ε_T · x^m`: the row sum acts first, then the signed column sum.
    pub fn apply(&self, m: &ExponentVector) -> Result<SparsePolynomial> {
        let n = self.tableau.size();
        if m.len() != n {
            return Err(invalid(format!("monomial in {} variables for a tableau of size {n}", m.len())));
        }
        let mut row_stage: HashMap<ExponentVector, i64> = HashMap::new();
        for sigma in &self.row_group {
            *row_stage.entry(permute_exponents(m, sigma.zero_based())).or_default() += 1;
        }
        let mut out = SparsePolynomial::zero(n);
        let mut stage: Vec<_> = row_stage.into_iter().collect();
        stage.sort();
        for (e, count) in stage {
            for (tau, sign) in &self.column_group {
                out.add_term(permute_exponents(&e, tau.zero_based()), rat(count * sign));
            }
        }
        Ok(out)
    }
}

/// `ε_T(x^m)`.
pub fn apply_symmetrizer(t: &StandardTableau, m: &ExponentVector) -> Result<SparsePolynomial> {
    YoungSymmetrizer::new(t).apply(m)
}

/// `F_T^S`; homogeneous of degree `cocharge(S)` and never zero.
pub fn higher_specht(s: &StandardTableau, t: &StandardTableau) -> Result<SparsePolynomial> {
    higher_specht_with(s, &YoungSymmetrizer::new(t))
}

/// `F_T^S` reusing a prepared symmetrizer for `T`.
pub fn higher_specht_with(s: &StandardTableau, eps: &YoungSymmetrizer) -> Result<SparsePolynomial> {
    let t = eps.tableau();
    if s.shape() != t.shape() {
        return Err(invalid(format!("S has shape {} but T has shape {}", s.shape(), t.shape())));
    }
    let f = eps.apply(&monomial(s, t)?)?;
    if f.is_zero() {
        return Err(consistency(format!("higher Specht polynomial for S = {s}, T = {t} vanished")));
    }
    Ok(f)
}

/// `Σ_T c_T F_T^S` over a shared `S`.
pub fn combination_polynomial(
    s: &StandardTableau,
    combination: &[(StandardTableau, Rational)],
) -> Result<SparsePolynomial> {
    let mut out = SparsePolynomial::zero(s.size());
    for (t, c) in combination {
        if !c.is_zero() {
            out = out.add(&higher_specht(s, t)?.scale(c))?;
        }
    }
    Ok(out)
}

/// `|R(T)|` for a shape: `∏ λ_i!`.
pub fn row_group_order(shape: &Partition) -> u128 {
    shape.parts().iter().map(|&p| (1..=p as u128).product::<u128>()).product()
}

/// Degree of `F_T^S`, i.e. `cocharge(S)`.
pub fn specht_degree(s: &StandardTableau) -> usize {
    cocharge(s)
}

/// The Vandermonde product `∏_{i<j} (x_j - x_i)`.
pub fn vandermonde(n: usize) -> Result<SparsePolynomial> {
    let mut p = SparsePolynomial::constant(n, Rational::one());
    for j in 1..=n {
        for i in 1..j {
            let diff = SparsePolynomial::variable(n, j)?.sub(&SparsePolynomial::variable(n, i)?)?;
            p = p.mul(&diff)?;
        }
    }
    Ok(p)
}
