//! Dense exact linear algebra over the rationals: reduced row echelon form,
//! nullspaces, subspace intersection and common fixed spaces.
//!
//! A small prime-field rank routine lives here too; it is only used to bound
//! ranks from below when certifying fixed-space dimensions.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

pub type Rational = BigRational;
pub type RationalVector = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense row-major matrix of reduced rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<RationalVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`from_rows`](Self::from_rows) but keeps the column count when `rows` is empty.
    pub fn from_rows_with_cols(rows: Vec<RationalVector>, cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(invalid("matrix rows have unequal lengths"));
        }
        let nrows = rows.len();
        Ok(RationalMatrix { rows: nrows, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let data = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        Self::from_rows(data).expect("rectangular literal")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<RationalVector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RationalVector {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self - I`; requires a square matrix.
    pub fn minus_identity(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(invalid(format!("{}x{} matrix is not square", self.rows, self.cols)));
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i) - Rational::one();
            m.set(i, i, v);
        }
        Ok(m)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.data[r * rhs.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Output of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: RationalMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

fn bit_size(x: &Rational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Gauss–Jordan elimination on a row list; returns pivot columns.
///
/// Among the candidate pivots of a column the entry with the smallest bit size
/// is chosen. The resulting RREF is canonical regardless of that choice.
fn rref_rows(rows: &mut [RationalVector], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows.len() {
            break;
        }
        let best = (rank..rows.len()).filter(|&r| !rows[r][c].is_zero()).min_by_key(|&r| bit_size(&rows[r][c]));
        let Some(p) = best else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][c].recip();
        for x in rows[rank][c..].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let (head, tail) = rows.split_at_mut(rank);
        let (pivot_row, below) = tail.split_first_mut().expect("pivot row exists");
        for other in head.iter_mut().chain(below.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let factor = other[c].clone();
            for (x, y) in other[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    pivots
}

/// Canonical reduced row echelon form.
pub fn rref(m: &RationalMatrix) -> Rref {
    let mut rows = m.to_rows();
    let pivots = rref_rows(&mut rows, m.cols);
    let rank = pivots.len();
    let matrix = RationalMatrix::from_rows_with_cols(rows, m.cols).expect("shape preserved");
    Rref { matrix, pivots, rank }
}

pub fn rank(m: &RationalMatrix) -> usize {
    rref(m).rank
}

/// Rank of a list of vectors of common length.
pub fn rank_of_vectors(vectors: &[RationalVector]) -> usize {
    let cols = vectors.first().map_or(0, Vec::len);
    let mut rows = vectors.to_vec();
    rref_rows(&mut rows, cols).len()
}

/// A subspace of `Q^d` held as its canonical RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<RationalVector>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::span(ambient_dim, RationalMatrix::identity(ambient_dim).to_rows())
            .expect("identity rows have the ambient length")
    }

    /// Span of arbitrary vectors, reduced to canonical form.
    pub fn span(ambient_dim: usize, mut vectors: Vec<RationalVector>) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient_dim) {
            return Err(invalid(format!("spanning vectors must have length {ambient_dim}")));
        }
        let rank = rref_rows(&mut vectors, ambient_dim).len();
        vectors.truncate(rank);
        Ok(Subspace { ambient_dim, basis: vectors })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RationalVector] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<RationalVector> {
        self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank_of_vectors(&rows) == self.dim()
    }

    /// `A + B`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim != other.ambient_dim {
            return Err(invalid("subspaces live in different ambient spaces"));
        }
        let vectors = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(self.ambient_dim, vectors)
    }

    /// Vectors orthogonal to every basis vector under the standard form.
    fn annihilator(&self) -> Vec<RationalVector> {
        let m = RationalMatrix::from_rows_with_cols(self.basis.clone(), self.ambient_dim)
            .expect("basis rows have the ambient length");
        nullspace(&m).basis
    }
}

/// Canonical basis of `{v : M v = 0}`.
pub fn nullspace(m: &RationalMatrix) -> Subspace {
    let reduced = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &reduced.pivots {
        is_pivot[p] = true;
    }
    let vectors = (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); m.cols];
            v[free] = Rational::one();
            for (i, &p) in reduced.pivots.iter().enumerate() {
                v[p] = -reduced.matrix.get(i, free).clone();
            }
            v
        })
        .collect();
    Subspace::span(m.cols, vectors).expect("kernel vectors have the column length")
}

/// `A ∩ B`, as the common kernel of both annihilators.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.ambient_dim != b.ambient_dim {
        return Err(invalid(format!("cannot intersect subspaces of Q^{} and Q^{}", a.ambient_dim, b.ambient_dim)));
    }
    let constraints: Vec<RationalVector> = a.annihilator().into_iter().chain(b.annihilator()).collect();
    let m = RationalMatrix::from_rows_with_cols(constraints, a.ambient_dim)?;
    Ok(nullspace(&m))
}

/// `∩_i ker(M_i - I)` in `Q^dim`; the whole space when `mats` is empty.
pub fn fixed_space(mats: &[RationalMatrix], dim: usize) -> Result<Subspace> {
    let mut space = Subspace::full(dim);
    for m in mats {
        if !m.is_square() || m.nrows() != dim {
            return Err(invalid(format!("fixed_space expects {dim}x{dim} matrices, got {}x{}", m.nrows(), m.ncols())));
        }
        space = intersect(&space, &nullspace(&m.minus_identity()?))?;
    }
    Ok(space)
}

/// Solves `A x = b` exactly where the columns of `A` are `columns`.
/// Returns `None` when `b` is outside their span; the solution is the unique
/// one when the columns are independent.
pub fn solve_in_span(columns: &[RationalVector], target: &[Rational]) -> Option<RationalVector> {
    let rows = target.len();
    let k = columns.len();
    let mut aug: Vec<RationalVector> = (0..rows)
        .map(|r| columns.iter().map(|c| c[r].clone()).chain(std::iter::once(target[r].clone())).collect())
        .collect();
    let pivots = rref_rows(&mut aug, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = aug[i][k].clone();
    }
    Some(x)
}

/// Solves `A x_j = b_j` for every target at once (one elimination).
/// Returns `None` if any target lies outside the column span.
pub fn solve_many(columns: &[RationalVector], targets: &[RationalVector]) -> Option<Vec<RationalVector>> {
    let rows = columns.first().or(targets.first()).map_or(0, Vec::len);
    let k = columns.len();
    let width = k + targets.len();
    let mut aug: Vec<RationalVector> =
        (0..rows).map(|r| columns.iter().chain(targets).map(|c| c[r].clone()).collect()).collect();
    let pivots = rref_rows(&mut aug, width);
    if pivots.iter().any(|&p| p >= k) {
        return None;
    }
    Some(
        (0..targets.len())
            .map(|j| {
                let mut x = vec![Rational::zero(); k];
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = aug[i][k + j].clone();
                }
                x
            })
            .collect(),
    )
}

/// Row echelon basis over `Z/p` grown one vector at a time.
#[derive(Clone, Debug)]
pub struct ModPEchelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModPEchelon {
    pub fn new(p: u64) -> Self {
        ModPEchelon { p, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` (entries in `[0, p)`); returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (pivot, row) in &self.rows {
            let f = v[*pivot];
            if f == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row).skip(*pivot) {
                if y != 0 {
                    *x = (*x + mul_mod(p - f, y, p)) % p;
                }
            }
        }
        let Some(pivot) = v.iter().position(|&x| x != 0) else { return false };
        let inv = inv_mod(v[pivot], p);
        for x in v.iter_mut().skip(pivot) {
            *x = mul_mod(*x, inv, p);
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Reduction of a rational into `Z/p`, or `None` if `p` divides the denominator.
pub fn rational_mod_p(x: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb).to_u64()?;
    let den = x.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    Some(mul_mod(num, inv_mod(den, p), p))
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "{a} is not invertible mod {p}");
    t0.rem_euclid(p as i128) as u64
}

/// Rank over `Z/p` of a row-major `rows x cols` matrix with entries in `[0, p)`.
/// Consumes the buffer. `p` must be prime and below `2^32`.
pub fn rank_mod_p(mut data: Vec<u64>, rows: usize, cols: usize, p: u64) -> usize {
    assert!(p < (1 << 32), "prime too large for single-word reduction");
    assert_eq!(data.len(), rows * cols);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| data[r * cols + c] != 0) else { continue };
        if pr != rank {
            for j in 0..cols {
                data.swap(pr * cols + j, rank * cols + j);
            }
        }
        let inv = inv_mod(data[rank * cols + c], p);
        for j in c..cols {
            data[rank * cols + j] = data[rank * cols + j] * inv % p;
        }
        let pivot: Vec<u64> = data[rank * cols + c..(rank + 1) * cols].to_vec();
        for r in rank + 1..rows {
            let f = data[r * cols + c];
            if f == 0 {
                continue;
            }
            let row = &mut data[r * cols + c..(r + 1) * cols];
            for (x, &y) in row.iter_mut().zip(&pivot) {
                if y != 0 {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Exact test `M v = v`.
pub fn is_fixed(m: &RationalMatrix, v: &[Rational]) -> bool {
    m.mul_vec(v) == v
}

/// Largest absolute numerator and denominator bit sizes; a cheap growth gauge.
pub fn max_bits(v: &[Rational]) -> u64 {
    v.iter().map(|x| x.numer().abs().bits().max(x.denom().bits())).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(rows)
    }

    fn v(xs: &[i64]) -> RationalVector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rref_examples() {
        let id = RationalMatrix::identity(3);
        let r = rref(&id);
        assert_eq!((r.matrix.clone(), r.rank), (id, 3));
        let z = RationalMatrix::zeros(2, 3);
        assert_eq!(rref(&z).rank, 0);
        assert!(rref(&z).matrix.is_zero());
        let r = rref(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.matrix, m(&[&[1, 2], &[0, 0]]));
        assert_eq!((r.rank, r.pivots), (1, vec![0]));
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(nullspace(&RationalMatrix::identity(3)).dim(), 0);
        assert_eq!(nullspace(&RationalMatrix::zeros(4, 4)), Subspace::full(4));
        let k = nullspace(&m(&[&[1, -1]]));
        assert_eq!(k.basis(), &[v(&[1, 1])]);
    }

    #[test]
    fn intersection_examples() {
        let a = Subspace::span(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let b = Subspace::span(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        assert_eq!(intersect(&a, &b).unwrap().basis(), &[v(&[0, 1, 0])]);
        assert_eq!(intersect(&a, &Subspace::full(3)).unwrap(), a);
        assert_eq!(intersect(&a, &Subspace::zero(3)).unwrap(), Subspace::zero(3));
        assert!(intersect(&a, &Subspace::full(2)).is_err());
    }

    #[test]
    fn fixed_space_examples() {
        assert_eq!(fixed_space(&[], 4).unwrap().dim(), 4);
        assert_eq!(fixed_space(&[RationalMatrix::identity(3)], 3).unwrap().dim(), 3);
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(fixed_space(&[swap], 2).unwrap().basis(), &[v(&[1, 1])]);
        assert!(fixed_space(&[RationalMatrix::zeros(2, 3)], 2).is_err());
        assert!(fixed_space(&[RationalMatrix::identity(3)], 2).is_err());
    }

    #[test]
    fn solve() {
        let cols = vec![v(&[1, 0, 1]), v(&[0, 1, 1])];
        assert_eq!(solve_in_span(&cols, &v(&[2, 3, 5])).unwrap(), v(&[2, 3]));
        assert!(solve_in_span(&cols, &v(&[1, 1, 1])).is_none());
        let many = solve_many(&cols, &[v(&[2, 3, 5]), v(&[1, 0, 1])]).unwrap();
        assert_eq!(many, vec![v(&[2, 3]), v(&[1, 0])]);
        assert!(solve_many(&cols, &[v(&[2, 3, 5]), v(&[0, 0, 1])]).is_none());
    }

    #[test]
    fn incremental_modular_echelon() {
        let mut e = ModPEchelon::new(7);
        assert!(e.insert(vec![1, 2, 3]));
        assert!(!e.insert(vec![2, 4, 6]));
        assert!(e.insert(vec![0, 1, 1]));
        assert!(!e.insert(vec![1, 3, 4]));
        assert!(!e.insert(vec![0, 0, 0]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn modular_rank() {
        let p = 2_147_483_647;
        assert_eq!(rank_mod_p(vec![1, 2, 2, 4], 2, 2, p), 1);
        assert_eq!(rank_mod_p(vec![1, 2, 3, 4], 2, 2, p), 2);
        assert_eq!(rank_mod_p(vec![0, 0, 0, 0, 0, 5], 3, 2, p), 1);
        assert_eq!(rational_mod_p(&ratio(1, 2), 7), Some(4));
        assert_eq!(rational_mod_p(&ratio(-1, 3), 7), Some(2));
        assert_eq!(rational_mod_p(&ratio(1, 7), 7), None);
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
        proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |xs| {
            let data = xs.chunks(cols).map(|c| c.iter().map(|&x| rat(x)).collect()).collect();
            RationalMatrix::from_rows_with_cols(data, cols).unwrap()
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(a in arb_matrix(4, 5)) {
            let once = rref(&a).matrix;
            prop_assert_eq!(rref(&once).matrix, once);
        }

        #[test]
        fn nullspace_vectors_are_killed(a in arb_matrix(3, 5)) {
            let k = nullspace(&a);
            prop_assert_eq!(k.dim() + rank(&a), 5);
            for vec in k.basis() {
                prop_assert!(a.mul_vec(vec).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn dimension_formula(a in arb_matrix(2, 4), b in arb_matrix(3, 4)) {
            let sa = Subspace::span(4, a.to_rows()).unwrap();
            let sb = Subspace::span(4, b.to_rows()).unwrap();
            let cap = intersect(&sa, &sb).unwrap();
            let cup = sa.sum(&sb).unwrap();
            prop_assert_eq!(sa.dim() + sb.dim(), cap.dim() + cup.dim());
            for w in cap.basis() {
                prop_assert!(sa.contains(w) && sb.contains(w));
            }
        }

        #[test]
        fn fixed_vectors_are_fixed(a in arb_matrix(3, 3), b in arb_matrix(3, 3)) {
            let fs = fixed_space(&[a.clone(), b.clone()], 3).unwrap();
            for w in fs.basis() {
                prop_assert!(is_fixed(&a, w) && is_fixed(&b, w));
            }
        }

        #[test]
        fn modular_rank_bounds_rational_rank(a in arb_matrix(4, 4)) {
            let p = 2_147_483_647;
            let data = (0..4).flat_map(|r| (0..4).map(move |c| (r, c)))
                .map(|(r, c)| rational_mod_p(a.get(r, c), p).unwrap())
                .collect();
            prop_assert_eq!(rank_mod_p(data, 4, 4, p), rank(&a));
        }
    }
}
