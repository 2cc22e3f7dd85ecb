//! The Specht module realised inside the tabloid permutation module.
//!
//! `σ F_T^S = F_{σT}^S` for every numbering `T`, so `e_T ↦ F_T^S` is an
//! `S_n`-isomorphism from the polytabloid span onto `span{F_T^S}_T` for any
//! fixed `S`. Invariant combinations can therefore be found among
//! polytabloids, where the action is a relabelling and nothing is expanded.
//!
//! Tabloids are stored as keys `key[j] = row of entry n - j`. Comparing keys
//! lexicographically orders tabloids compatibly with dominance, and the
//! leading tabloid of a standard polytabloid `e_T` is `{T}` with coefficient 1.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use crate::combinatorics::{standard_tableaux, Partition, StandardTableau};
use crate::error::{consistency, Result};
use crate::permgroup::Permutation;

type Key = Vec<u8>;

/// Signed tabloids of one polytabloid, as `(row_of, sign)`.
type Expansion = Vec<(Vec<u8>, i128)>;

/// Sparse integer vector in the tabloid module.
pub type TabloidVector = BTreeMap<Key, i128>;

#[derive(Debug)]
pub struct PolytabloidModel {
    shape: Partition,
    tableaux: Vec<StandardTableau>,
    index: HashMap<Vec<Vec<usize>>, usize>,
    /// Row of each entry, zero-based, per standard tableau.
    row_of: Vec<Vec<u8>>,
    columns: Vec<Vec<Vec<usize>>>,
    /// Standard tableaux by descending tabloid key.
    by_key: Vec<usize>,
    /// Full tabloid expansions of `e_T`, built only on demand.
    terms: OnceLock<Vec<Expansion>>,
}

fn column_terms(t: &StandardTableau) -> Expansion {
    let n = t.size();
    let rows = t.rows();
    let width = rows.first().map_or(0, Vec::len);
    let mut out = vec![(vec![0u8; n], 1i128)];
    for c in 0..width {
        let column: Vec<usize> = rows.iter().filter_map(|r| r.get(c).copied()).collect();
        let arrangements = signed_arrangements(column.len());
        out = out
            .into_iter()
            .flat_map(|(row_of, sign)| {
                let column = &column;
                arrangements.iter().map(move |(pi, s)| {
                    let mut r = row_of.clone();
                    for (cell_row, &src) in pi.iter().enumerate() {
                        r[column[src] - 1] = cell_row as u8;
                    }
                    (r, sign * s)
                })
            })
            .collect();
    }
    out
}

/// All permutations of `0..k` with their signs.
fn signed_arrangements(k: usize) -> Vec<(Vec<usize>, i128)> {
    if k == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in signed_arrangements(k - 1) {
        // insert k-1 at position i: moves it past k-1-i elements
        for i in 0..k {
            let mut q = p.clone();
            q.insert(i, k - 1);
            let flip = if (k - 1 - i).is_multiple_of(2) { 1 } else { -1 };
            out.push((q, s * flip));
        }
    }
    out
}

fn key_of(row_of: &[u8]) -> Key {
    row_of.iter().rev().copied().collect()
}

fn add_checked(slot: &mut i128, delta: i128) -> Result<()> {
    *slot = slot.checked_add(delta).ok_or_else(|| consistency("tabloid coefficient overflow"))?;
    Ok(())
}

fn accumulate(w: &mut TabloidVector, key: Key, c: i128) -> Result<()> {
    let slot = w.entry(key.clone()).or_insert(0);
    add_checked(slot, c)?;
    if *slot == 0 {
        w.remove(&key);
    }
    Ok(())
}

/// Coefficient of the tabloid `row_of` in the polytabloid of the numbering
/// `columns`: `±1` if exactly one column permutation carries it there, else 0.
fn tabloid_coefficient(row_of: &[u8], columns: &[Vec<usize>]) -> i128 {
    let mut sign = 1i128;
    let mut seen = [false; 256];
    for column in columns {
        let rows: Vec<u8> = column.iter().map(|&x| row_of[x - 1]).collect();
        for &r in &rows {
            if r as usize >= column.len() || seen[r as usize] {
                for &q in &rows {
                    seen[q as usize] = false;
                }
                return 0;
            }
            seen[r as usize] = true;
        }
        for &r in &rows {
            seen[r as usize] = false;
        }
        let inversions = (0..rows.len()).flat_map(|i| (i + 1..rows.len()).map(move |j| (i, j)));
        if inversions.filter(|&(i, j)| rows[i] > rows[j]).count() % 2 == 1 {
            sign = -sign;
        }
    }
    sign
}

fn columns_of(rows: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let width = rows.first().map_or(0, Vec::len);
    (0..width).map(|c| rows.iter().filter_map(|r| r.get(c).copied()).collect()).collect()
}

impl PolytabloidModel {
    pub fn new(shape: &Partition) -> Self {
        let tableaux = standard_tableaux(shape);
        let n = shape.size();
        let index = tableaux.iter().enumerate().map(|(i, t)| (t.rows().to_vec(), i)).collect();
        let row_of: Vec<Vec<u8>> = tableaux
            .iter()
            .map(|t| {
                let mut r = vec![0u8; n];
                for (i, row) in t.rows().iter().enumerate() {
                    for &x in row {
                        r[x - 1] = i as u8;
                    }
                }
                r
            })
            .collect();
        let columns = tableaux.iter().map(|t| columns_of(t.rows())).collect();
        let mut by_key: Vec<usize> = (0..tableaux.len()).collect();
        by_key.sort_by_key(|&t| std::cmp::Reverse(key_of(&row_of[t])));
        PolytabloidModel { shape: shape.clone(), tableaux, index, row_of, columns, by_key, terms: OnceLock::new() }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn tableaux(&self) -> &[StandardTableau] {
        &self.tableaux
    }

    pub fn dimension(&self) -> usize {
        self.tableaux.len()
    }

    fn terms(&self) -> &[Expansion] {
        self.terms.get_or_init(|| self.tableaux.iter().map(column_terms).collect())
    }

    /// Adds `c · e_{gT}` for the `t`-th standard tableau; `g = None` means the identity.
    fn add_polytabloid(&self, w: &mut TabloidVector, t: usize, g: Option<&Permutation>, c: i128) -> Result<()> {
        let n = self.shape.size();
        for (row_of, sign) in &self.terms()[t] {
            let key = match g {
                None => key_of(row_of),
                Some(g) => {
                    let mut moved = vec![0u8; n];
                    for (x, &r) in row_of.iter().enumerate() {
                        moved[g.apply(x + 1) - 1] = r;
                    }
                    key_of(&moved)
                }
            };
            let delta = sign.checked_mul(c).ok_or_else(|| consistency("tabloid coefficient overflow"))?;
            accumulate(w, key, delta)?;
        }
        Ok(())
    }

    /// `Σ_T c_T e_T` in the tabloid module.
    pub fn embed(&self, coords: &[i128]) -> Result<TabloidVector> {
        let mut w = TabloidVector::new();
        for (t, &c) in coords.iter().enumerate().filter(|(_, c)| **c != 0) {
            self.add_polytabloid(&mut w, t, None, c)?;
        }
        Ok(w)
    }

    /// `g · Σ_T c_T e_T`.
    pub fn act(&self, g: &Permutation, coords: &[i128]) -> Result<TabloidVector> {
        let mut w = TabloidVector::new();
        for (t, &c) in coords.iter().enumerate().filter(|(_, c)| **c != 0) {
            self.add_polytabloid(&mut w, t, Some(g), c)?;
        }
        Ok(w)
    }

    /// Coordinates of `w` in the standard polytabloid basis; fails if `w` is
    /// outside the Specht module.
    pub fn straighten(&self, mut w: TabloidVector) -> Result<Vec<i128>> {
        let n = self.shape.size();
        let mut coords = vec![0i128; self.dimension()];
        while let Some((key, &c)) = w.iter().next_back() {
            let mut rows = vec![Vec::new(); self.shape.len()];
            for x in 1..=n {
                rows[key[n - x] as usize].push(x);
            }
            let t = *self
                .index
                .get(&rows)
                .ok_or_else(|| consistency(format!("leading tabloid {rows:?} is not standard")))?;
            coords[t] = c;
            self.add_polytabloid(&mut w, t, None, -c)?;
        }
        Ok(coords)
    }

    /// Coefficients of `Σ_T c_T e_{gT}` on the standard tabloids. Injective on
    /// the Specht module, so two module elements agree iff these agree.
    pub fn evaluate(&self, g: Option<&Permutation>, coords: &[i128]) -> Result<Vec<i128>> {
        let mut out = vec![0i128; self.dimension()];
        for (t, &c) in coords.iter().enumerate().filter(|(_, c)| **c != 0) {
            let moved: Vec<Vec<usize>> = match g {
                None => self.columns[t].clone(),
                Some(g) => self.columns[t].iter().map(|col| col.iter().map(|&x| g.apply(x)).collect()).collect(),
            };
            for (slot, row_of) in out.iter_mut().zip(&self.row_of) {
                let e = tabloid_coefficient(row_of, &moved);
                if e != 0 {
                    add_checked(slot, e * c)?;
                }
            }
        }
        Ok(out)
    }

    /// Inverts [`Self::evaluate`] with the identity; the evaluation matrix is
    /// unitriangular in descending key order.
    fn solve_evaluation(&self, mut values: Vec<i128>) -> Result<Vec<i128>> {
        let mut coords = vec![0i128; self.dimension()];
        for &t in &self.by_key {
            let c = values[t];
            if c == 0 {
                continue;
            }
            coords[t] = c;
            for (slot, row_of) in values.iter_mut().zip(&self.row_of) {
                let e = tabloid_coefficient(row_of, &self.columns[t]);
                if e != 0 {
                    add_checked(slot, -e * c)?;
                }
            }
        }
        Ok(coords)
    }

    /// `Σ_{g ∈ G} e_{gT}` for the `t`-th standard tableau, in polytabloid coordinates.
    pub fn orbit_sum(&self, t: usize, elements: &[Permutation]) -> Result<Vec<i128>> {
        let mut unit = vec![0i128; self.dimension()];
        unit[t] = 1;
        let mut values = vec![0i128; self.dimension()];
        for g in elements {
            for (acc, v) in values.iter_mut().zip(self.evaluate(Some(g), &unit)?) {
                add_checked(acc, v)?;
            }
        }
        self.solve_evaluation(values)
    }

    /// True if `Σ c_T e_T` is fixed by `g`.
    pub fn is_fixed_by(&self, g: &Permutation, coords: &[i128]) -> Result<bool> {
        Ok(self.evaluate(Some(g), coords)? == self.evaluate(None, coords)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::partitions;
    use crate::exact_linalg::{rat, Rational, RationalMatrix};
    use crate::permgroup::PermutationGroup;
    use crate::rep_matrices::IrrepMatrixFactory;
    use crate::sym_characters::mn_character;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn signed_arrangements_have_correct_signs() {
        for k in 0..=5 {
            let all = signed_arrangements(k);
            assert_eq!(all.len(), (1..=k).product::<usize>().max(1));
            for (pi, s) in all {
                let perm = Permutation::from_images(&pi.iter().map(|x| x + 1).collect::<Vec<_>>()).unwrap();
                assert_eq!(perm.sign() as i128, s);
            }
        }
    }

    #[test]
    fn standard_polytabloids_straighten_to_unit_vectors() {
        for shape in partitions(5).unwrap() {
            let model = PolytabloidModel::new(&shape);
            for t in 0..model.dimension() {
                let mut unit = vec![0; model.dimension()];
                unit[t] = 1;
                assert_eq!(model.straighten(model.embed(&unit).unwrap()).unwrap(), unit);
            }
        }
    }

    /// Matrix of `g` in the polytabloid basis, via straightening.
    fn action_matrix(model: &PolytabloidModel, g: &Permutation) -> RationalMatrix {
        let f = model.dimension();
        let mut m = RationalMatrix::zeros(f, f);
        for t in 0..f {
            let mut unit = vec![0; f];
            unit[t] = 1;
            let col = model.straighten(model.act(g, &unit).unwrap()).unwrap();
            for (r, c) in col.into_iter().enumerate() {
                m.set(r, t, Rational::from_integer((c as i64).into()));
            }
        }
        m
    }

    #[test]
    fn action_has_the_right_character() {
        for n in 2..=5 {
            let sn = PermutationGroup::symmetric(n).unwrap();
            for shape in partitions(n).unwrap() {
                let model = PolytabloidModel::new(&shape);
                for g in sn.elements().unwrap().iter().step_by(7) {
                    let chi = mn_character(&shape, &g.cycle_type()).unwrap();
                    assert_eq!(action_matrix(&model, g).trace(), rat(chi), "{shape} {g}");
                }
            }
        }
    }

    #[test]
    fn orbit_sums_are_fixed() {
        let klein = PermutationGroup::parse(4, "(1,2)(3,4);(1,4)(2,3)").unwrap();
        let model = PolytabloidModel::new(&p(&[2, 2]));
        let elements = klein.elements().unwrap();
        for t in 0..model.dimension() {
            let v = model.orbit_sum(t, elements).unwrap();
            for g in klein.generators() {
                assert!(model.is_fixed_by(g, &v).unwrap());
            }
        }
        // Dimension agrees with the seminormal model.
        let f = IrrepMatrixFactory::new(&p(&[2, 2]));
        assert_eq!(f.dimension(), model.dimension());
    }

    #[test]
    fn evaluation_matches_expansion() {
        let s5 = PermutationGroup::symmetric(5).unwrap();
        for shape in partitions(5).unwrap() {
            let model = PolytabloidModel::new(&shape);
            let f = model.dimension();
            let coords: Vec<i128> = (0..f as i128).map(|i| 3 * i - 4).collect();
            for g in s5.elements().unwrap().iter().step_by(11) {
                let direct = model.straighten(model.act(g, &coords).unwrap()).unwrap();
                let values = model.evaluate(Some(g), &coords).unwrap();
                assert_eq!(model.solve_evaluation(values).unwrap(), direct, "{shape} {g}");
            }
        }
    }

    #[test]
    fn non_specht_vectors_are_rejected() {
        let model = PolytabloidModel::new(&p(&[2, 1]));
        let mut w = TabloidVector::new();
        w.insert(key_of(&[0, 0, 1]), 1);
        assert!(model.straighten(w).is_err());
    }
}
