//! Partitions, standard tableaux and the tableau statistics behind higher
//! Specht polynomials: index words, index tableaux, cocharge and the
//! monomials `x_T^{i(S)}`.
//!
//! Tableaux are stored as row lists with the longest row first, e.g.
//! `[[1, 2, 4], [3, 5]]`. In French display that first row is the bottom one,
//! so "reading a column from top to bottom" walks the row list backwards.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
    n: usize,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(invalid(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid(format!("partition {parts:?} is not weakly decreasing")));
        }
        let n = parts.iter().sum();
        Ok(Partition { parts, n })
    }

    /// The empty partition of 0.
    pub fn empty() -> Self {
        Partition { parts: Vec::new(), n: 0 }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Transpose of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (0..first).map(|c| self.parts.iter().take_while(|&&p| p > c).count()).collect();
        Partition { parts, n: self.n }
    }

    /// Number of standard tableaux of this shape, by the hook-length formula.
    pub fn hook_length_count(&self) -> u64 {
        hook_length_count(self)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = crate::Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.parts)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[usize]) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("]")
}

/// All partitions of `n` in reverse-lexicographic order: `[n]` first, `[1^n]` last.
pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(invalid("partitions(n) requires n >= 1"));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    push_partitions(n, n, &mut current, &mut out);
    Ok(out)
}

fn push_partitions(remaining: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone(), n: current.iter().sum() });
        return;
    }
    for part in (1..=max.min(remaining)).rev() {
        current.push(part);
        push_partitions(remaining - part, part, current, out);
        current.pop();
    }
}

/// `f^λ = n! / ∏ hooks`.
///
/// Computed in 128-bit arithmetic, which covers every `n <= 34`.
pub fn hook_length_count(shape: &Partition) -> u64 {
    let conj = shape.conjugate();
    let mut hooks: u128 = 1;
    for (i, &row) in shape.parts.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = conj.parts[j] - i - 1;
            hooks *= (arm + leg + 1) as u128;
        }
    }
    let factorial: u128 = (1..=shape.n as u128).product();
    u64::try_from(factorial / hooks).expect("f^lambda overflows u64")
}

/// A standard filling of a partition shape by `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct StandardTableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    /// Validates shape, entry set and row/column strictness.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect())?;
        let n = shape.size();
        let mut seen = vec![false; n + 1];
        for &x in rows.iter().flatten() {
            if x == 0 || x > n || seen[x] {
                return Err(invalid(format!("tableau {rows:?} is not a filling by 1..={n}")));
            }
            seen[x] = true;
        }
        for (r, row) in rows.iter().enumerate() {
            for c in 0..row.len() {
                if c + 1 < row.len() && row[c] >= row[c + 1] {
                    return Err(invalid(format!("tableau {rows:?}: row {r} is not increasing")));
                }
                if r + 1 < rows.len() && c < rows[r + 1].len() && row[c] >= rows[r + 1][c] {
                    return Err(invalid(format!("tableau {rows:?}: column {c} is not increasing")));
                }
            }
        }
        Ok(StandardTableau { shape, rows })
    }

    /// The tableau filled row by row: `[[1, 2, 3], [4, 5]]`.
    pub fn row_superstandard(shape: &Partition) -> Self {
        let mut next = 1;
        let rows = shape
            .parts()
            .iter()
            .map(|&len| {
                let row: Vec<usize> = (next..next + len).collect();
                next += len;
                row
            })
            .collect();
        StandardTableau { shape: shape.clone(), rows }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.shape.size()
    }

    /// `positions()[k - 1]` is the (row, column) of entry `k`.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        let mut pos = vec![(0, 0); self.size()];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                pos[x - 1] = (r, c);
            }
        }
        pos
    }

    /// Content `column - row` of the cell holding `entry`.
    pub fn content(&self, entry: usize) -> i64 {
        let (r, c) = self.positions()[entry - 1];
        c as i64 - r as i64
    }

    /// Column reading word: columns left to right, each read from the top
    /// (French display) down to the first row.
    pub fn reading_word(&self) -> Vec<usize> {
        let width = self.rows.first().map_or(0, Vec::len);
        let mut word = Vec::with_capacity(self.size());
        for c in 0..width {
            for row in self.rows.iter().rev() {
                if let Some(&x) = row.get(c) {
                    word.push(x);
                }
            }
        }
        word
    }
}

impl TryFrom<Vec<Vec<usize>>> for StandardTableau {
    type Error = crate::Error;

    fn try_from(rows: Vec<Vec<usize>>) -> Result<Self> {
        StandardTableau::new(rows)
    }
}

impl From<StandardTableau> for Vec<Vec<usize>> {
    fn from(t: StandardTableau) -> Self {
        t.rows
    }
}

impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write_list(f, row)?;
        }
        f.write_str("]")
    }
}

/// All standard tableaux of `shape`, sorted lexicographically by reading word.
///
/// This order indexes the basis of every representation built on the shape.
pub fn standard_tableaux(shape: &Partition) -> Vec<StandardTableau> {
    let n = shape.size();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); shape.len()];
    fill_tableaux(shape, 1, n, &mut rows, &mut out);
    out.sort_by_cached_key(StandardTableau::reading_word);
    out
}

fn fill_tableaux(shape: &Partition, next: usize, n: usize, rows: &mut Vec<Vec<usize>>, out: &mut Vec<StandardTableau>) {
    if next > n {
        out.push(StandardTableau { shape: shape.clone(), rows: rows.clone() });
        return;
    }
    for r in 0..rows.len() {
        let len = rows[r].len();
        let fits_row = len < shape.parts()[r];
        let fits_column = r == 0 || rows[r - 1].len() > len;
        if fits_row && fits_column {
            rows[r].push(next);
            fill_tableaux(shape, next + 1, n, rows, out);
            rows[r].pop();
        }
    }
}

/// The reading word of `S` with each letter's index:
/// `1` has index 0, and `k + 1` gets index `p + 1` when it sits strictly to
/// the left of `k` in the word (where `k` has index `p`), `p` otherwise.
pub fn index_word(tableau: &StandardTableau) -> Vec<(usize, usize)> {
    let word = tableau.reading_word();
    let indices = letter_indices(&word);
    word.iter().map(|&x| (x, indices[x - 1])).collect()
}

/// `result[k - 1]` is the index of letter `k` in the word.
fn letter_indices(word: &[usize]) -> Vec<usize> {
    let n = word.len();
    let mut position = vec![0; n];
    for (i, &x) in word.iter().enumerate() {
        position[x - 1] = i;
    }
    let mut indices = vec![0; n];
    for k in 1..n {
        indices[k] = indices[k - 1] + usize::from(position[k] < position[k - 1]);
    }
    indices
}

/// Nonnegative filling of a shape; here always the index tableau `i(S)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IndexTableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl IndexTableau {
    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn entry_sum(&self) -> usize {
        self.rows.iter().flatten().sum()
    }
}

/// `i(S)`: each cell of `S` receives the index of its entry in `w(S)`.
pub fn index_tableau(tableau: &StandardTableau) -> IndexTableau {
    let indices = letter_indices(&tableau.reading_word());
    let rows = tableau.rows().iter().map(|row| row.iter().map(|&x| indices[x - 1]).collect()).collect();
    IndexTableau { shape: tableau.shape().clone(), rows }
}

pub fn cocharge(tableau: &StandardTableau) -> usize {
    letter_indices(&tableau.reading_word()).iter().sum()
}

/// Exponents of a monomial in `n` variables; position `k - 1` holds the exponent of `x_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }
}

/// `x_T^{i(S)}`: the variable named by each cell of `T` is raised to the
/// matching cell of `i(S)`.
pub fn monomial(s: &StandardTableau, t: &StandardTableau) -> Result<ExponentVector> {
    if s.shape() != t.shape() {
        return Err(invalid(format!("monomial needs tableaux of equal shape, got {} and {}", s.shape(), t.shape())));
    }
    let index = index_tableau(s);
    let mut exps = vec![0u32; t.size()];
    for (trow, irow) in t.rows().iter().zip(index.rows()) {
        for (&var, &e) in trow.iter().zip(irow) {
            exps[var - 1] = e as u32;
        }
    }
    Ok(ExponentVector(exps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn t(rows: &[&[usize]]) -> StandardTableau {
        StandardTableau::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn partitions_of_four_in_sage_order() {
        let got: Vec<Vec<usize>> = partitions(4).unwrap().into_iter().map(Vec::from).collect();
        assert_eq!(got, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(partitions(1).unwrap(), vec![p(&[1])]);
        assert!(partitions(0).is_err());
    }

    #[test]
    fn partition_count_matches_brute_force() {
        // Oracle: count weakly decreasing compositions by filtering all compositions.
        fn compositions(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 1..=n {
                for mut rest in compositions(n - first) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        for n in 1..=8 {
            let brute = compositions(n).into_iter().filter(|c| c.windows(2).all(|w| w[0] >= w[1])).count();
            assert_eq!(partitions(n).unwrap().len(), brute);
        }
        assert_eq!(partitions(8).unwrap().len(), 22);
    }

    #[test]
    fn partition_rejects_bad_input() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn conjugates() {
        assert_eq!(p(&[4]).conjugate(), p(&[1, 1, 1, 1]));
        assert_eq!(p(&[2, 2]).conjugate(), p(&[2, 2]));
        assert_eq!(p(&[3, 2, 2, 1]).conjugate(), p(&[4, 3, 1]));
    }

    #[test]
    fn standard_tableaux_examples() {
        let five = standard_tableaux(&p(&[2, 2, 1]));
        assert_eq!(five.len(), 5);
        let expected = [
            t(&[&[1, 4], &[2, 5], &[3]]),
            t(&[&[1, 3], &[2, 5], &[4]]),
            t(&[&[1, 2], &[3, 5], &[4]]),
            t(&[&[1, 3], &[2, 4], &[5]]),
            t(&[&[1, 2], &[3, 4], &[5]]),
        ];
        for e in &expected {
            assert!(five.contains(e), "missing {e}");
        }
        assert_eq!(standard_tableaux(&p(&[4])), vec![t(&[&[1, 2, 3, 4]])]);
        assert_eq!(standard_tableaux(&p(&[2, 1])).len(), 2);
    }

    #[test]
    fn standard_tableaux_sorted_by_reading_word() {
        let all = standard_tableaux(&p(&[3, 2]));
        let words: Vec<_> = all.iter().map(StandardTableau::reading_word).collect();
        assert!(words.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn hook_lengths() {
        assert_eq!(hook_length_count(&p(&[4, 3, 2, 1])), 768);
        assert_eq!(hook_length_count(&p(&[7])), 1);
        assert_eq!(hook_length_count(&p(&[2, 2, 1])), 5);
    }

    #[test]
    fn sum_of_squares_is_factorial() {
        let expected = [1u64, 2, 6, 24, 120, 720, 5040, 40320];
        for n in 1..=8 {
            let total: u64 = partitions(n).unwrap().iter().map(|l| hook_length_count(l).pow(2)).sum();
            assert_eq!(total, expected[n - 1]);
        }
    }

    #[test]
    fn hook_formula_matches_enumeration() {
        for n in 1..=7 {
            for shape in partitions(n).unwrap() {
                let tabs = standard_tableaux(&shape);
                assert_eq!(hook_length_count(&shape) as usize, tabs.len(), "{shape}");
                let mut dedup = tabs.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), tabs.len());
                for tab in tabs {
                    assert!(StandardTableau::new(tab.rows().to_vec()).is_ok());
                }
            }
        }
    }

    #[test]
    fn index_word_worked_example() {
        let s = t(&[&[1, 2, 4], &[3, 5]]);
        assert_eq!(index_word(&s), vec![(3, 1), (1, 0), (5, 2), (2, 0), (4, 1)]);
        let row = t(&[&[1, 2, 3, 4]]);
        assert!(index_word(&row).iter().all(|&(_, i)| i == 0));
        let col = t(&[&[1], &[2], &[3], &[4]]);
        assert_eq!(index_word(&col), vec![(4, 3), (3, 2), (2, 1), (1, 0)]);
    }

    #[test]
    fn index_tableaux() {
        let s = t(&[&[1, 2, 4], &[3, 5]]);
        assert_eq!(index_tableau(&s).rows(), &[vec![0, 0, 1], vec![1, 2]]);
        assert_eq!(index_tableau(&t(&[&[1, 2, 3]])).entry_sum(), 0);
        let sq = index_tableau(&t(&[&[1, 3], &[2, 4]]));
        assert_eq!(sq.rows(), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(sq.entry_sum(), 4);
    }

    #[test]
    fn cocharge_examples() {
        assert_eq!(cocharge(&t(&[&[1, 2, 3, 4]])), 0);
        assert_eq!(cocharge(&t(&[&[1], &[2], &[3], &[4]])), 6);
        assert_eq!(cocharge(&t(&[&[1, 2], &[3, 4]])), 2);
    }

    #[test]
    fn monomial_examples() {
        let s = t(&[&[1, 2, 4], &[3, 5]]);
        let tt = t(&[&[1, 3, 5], &[2, 4]]);
        assert_eq!(monomial(&s, &tt).unwrap(), ExponentVector(vec![0, 1, 0, 2, 1]));
        let row = t(&[&[1, 2, 3]]);
        assert_eq!(monomial(&row, &row).unwrap(), ExponentVector(vec![0, 0, 0]));
        let col = t(&[&[1], &[2], &[3]]);
        assert_eq!(monomial(&col, &col).unwrap(), ExponentVector(vec![0, 1, 2]));
        assert!(monomial(&row, &col).is_err());
    }

    #[test]
    fn cocharge_is_monomial_degree() {
        for n in 1..=7 {
            for shape in partitions(n).unwrap() {
                let tabs = standard_tableaux(&shape);
                for s in &tabs {
                    let c = cocharge(s);
                    assert_eq!(index_tableau(s).entry_sum(), c);
                    for tt in tabs.iter().take(3) {
                        assert_eq!(monomial(s, tt).unwrap().total_degree() as usize, c);
                    }
                }
            }
        }
    }

    #[test]
    fn tableau_validation() {
        assert!(StandardTableau::new(vec![vec![1, 3], vec![2]]).is_ok());
        assert!(StandardTableau::new(vec![vec![2, 1]]).is_err());
        assert!(StandardTableau::new(vec![vec![1, 2], vec![2]]).is_err());
        assert!(StandardTableau::new(vec![vec![2, 3], vec![1]]).is_err());
        assert!(StandardTableau::new(vec![vec![1], vec![2, 3]]).is_err());
    }

    #[test]
    fn json_forms() {
        let s = t(&[&[1, 2, 4], &[3, 5]]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[[1,2,4],[3,5]]");
        let back: StandardTableau = serde_json::from_str("[[1,2,4],[3,5]]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<StandardTableau>("[[2,1]]").is_err());
        assert_eq!(serde_json::to_string(&p(&[3, 1])).unwrap(), "[3,1]");
        assert_eq!(p(&[4, 3, 2, 1]).to_string(), "[4, 3, 2, 1]");
    }

    proptest! {
        #[test]
        fn conjugate_is_involution(mut parts in proptest::collection::vec(1usize..8, 0..8)) {
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lambda = Partition::new(parts).unwrap();
            prop_assert_eq!(lambda.conjugate().conjugate(), lambda.clone());
            prop_assert_eq!(lambda.conjugate().size(), lambda.size());
        }
    }
}
