//! Multiplicities of the trivial `G`-representation inside each `S_n`-irreducible,
//! the degree numerator of the invariant ring, and the Molien-series check.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{cocharge, hook_length_count, partitions, standard_tableaux, Partition};
use crate::error::{consistency, Result};
use crate::exact_linalg::{rat, Rational};
use crate::permgroup::PermutationGroup;
use crate::series::{rational_json, UnivariateSeries};
use crate::sym_characters::mn_character;

pub const DEFAULT_SERIES_ORDER: usize = 20;

/// Which shape's appearance polynomial is paired with `m_λ` in the numerator.
///
/// With `[n]` as the trivial character the pairing is the identity; the
/// conjugate pairing is kept only so the Molien check can reject it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionBridge {
    #[default]
    Identity,
    Conjugate,
}

impl ConventionBridge {
    pub fn apply(self, shape: &Partition) -> Partition {
        match self {
            ConventionBridge::Identity => shape.clone(),
            ConventionBridge::Conjugate => shape.conjugate(),
        }
    }
}

/// `m_λ(G)`: the dimension of the `G`-fixed vectors in the irreducible `λ`.
pub fn trivial_multiplicity(group: &PermutationGroup, shape: &Partition) -> Result<u64> {
    if shape.size() != group.degree() {
        return Err(crate::error::invalid(format!(
            "shape {shape} is not a partition of the group degree {}",
            group.degree()
        )));
    }
    let mut total = BigInt::zero();
    for class in group.conjugacy_classes()? {
        total += BigInt::from(class.size) * mn_character(shape, &class.cycle_type)?;
    }
    let order = BigInt::from(group.order()?);
    if !(&total % &order).is_zero() {
        return Err(consistency(format!("character inner product for {shape} is {total}/{order}, not an integer")));
    }
    (total / order).to_u64().ok_or_else(|| consistency(format!("negative multiplicity for {shape}")))
}

/// `m_λ(G)` for every `λ ⊢ n`, in canonical partition order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityTable {
    pub degree: usize,
    pub group_order: usize,
    pub entries: Vec<MultiplicityEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityEntry {
    pub partition: Partition,
    pub multiplicity: u64,
}

impl MultiplicityTable {
    pub fn get(&self, shape: &Partition) -> Option<u64> {
        self.entries.iter().find(|e| &e.partition == shape).map(|e| e.multiplicity)
    }

    /// Shapes with `m_λ > 0`, canonical order.
    pub fn support(&self) -> impl Iterator<Item = &MultiplicityEntry> {
        self.entries.iter().filter(|e| e.multiplicity > 0)
    }

    /// `Σ m_λ f^λ`.
    pub fn weighted_total(&self) -> u128 {
        self.entries.iter().map(|e| e.multiplicity as u128 * hook_length_count(&e.partition) as u128).sum()
    }

    /// `n! / |G|`.
    pub fn expected_total(&self) -> u128 {
        (1..=self.degree as u128).product::<u128>() / self.group_order as u128
    }

    pub fn as_map(&self) -> BTreeMap<Partition, u64> {
        self.entries.iter().map(|e| (e.partition.clone(), e.multiplicity)).collect()
    }
}

impl fmt::Display for MultiplicityTable {
    /// One line, shapes ascending: `{[1, 1, 1, 1]: 1, [2, 1, 1]: 0, ...}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> =
            self.entries.iter().rev().map(|e| format!("{}: {}", e.partition, e.multiplicity)).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// Full table; checks `Σ m_λ f^λ = n!/|G|` and `m_[n] = 1`.
pub fn multiplicity_table(group: &PermutationGroup) -> Result<MultiplicityTable> {
    let n = group.degree();
    let entries = partitions(n)?
        .into_iter()
        .map(|partition| {
            let multiplicity = trivial_multiplicity(group, &partition)?;
            Ok(MultiplicityEntry { partition, multiplicity })
        })
        .collect::<Result<Vec<_>>>()?;
    let table = MultiplicityTable { degree: n, group_order: group.order()?, entries };
    if table.weighted_total() != table.expected_total() {
        return Err(consistency(format!(
            "sum of m_lambda f^lambda is {}, expected n!/|G| = {}",
            table.weighted_total(),
            table.expected_total()
        )));
    }
    if table.entries.first().map(|e| e.multiplicity) != Some(1) {
        return Err(consistency("trivial shape does not have multiplicity 1"));
    }
    Ok(table)
}

/// `φ(λ, z) = Σ_T z^{cocharge(T)}` over standard tableaux of shape `λ`.
pub fn appearance_polynomial(shape: &Partition) -> UnivariateSeries {
    let tableaux = standard_tableaux(shape);
    let top = tableaux.iter().map(cocharge).max().unwrap_or(0);
    let mut coeffs = vec![Rational::zero(); top + 1];
    for t in &tableaux {
        coeffs[cocharge(t)] += rat(1);
    }
    UnivariateSeries::polynomial(coeffs)
}

/// `Σ_λ m_λ φ(λ, z)`, the generating polynomial of secondary-invariant degrees.
pub fn secondary_degree_numerator(group: &PermutationGroup) -> Result<UnivariateSeries> {
    numerator_from_table(&multiplicity_table(group)?, ConventionBridge::default())
}

pub fn secondary_degree_numerator_with(group: &PermutationGroup, bridge: ConventionBridge) -> Result<UnivariateSeries> {
    numerator_from_table(&multiplicity_table(group)?, bridge)
}

pub fn numerator_from_table(table: &MultiplicityTable, bridge: ConventionBridge) -> Result<UnivariateSeries> {
    let mut num = UnivariateSeries::zero();
    for e in table.support() {
        let phi = appearance_polynomial(&bridge.apply(&e.partition));
        num = num.add(&phi.scale(&rat(e.multiplicity as i64)));
    }
    if !num.has_nonnegative_coefficients() {
        return Err(consistency(format!("numerator {num} has a negative coefficient")));
    }
    let expected = rat(table.expected_total() as i64);
    if num.evaluate_at_one()? != expected {
        return Err(consistency(format!("numerator {num} does not evaluate to n!/|G| = {expected} at z = 1")));
    }
    Ok(num)
}

/// `(1/|G|) Σ_σ ∏_{cycles c} 1/(1 - z^{|c|})` through degree `order`.
pub fn molien_series(group: &PermutationGroup, order: usize) -> Result<UnivariateSeries> {
    let mut total = UnivariateSeries::zero().truncated(order);
    for class in group.conjugacy_classes()? {
        let mut term = UnivariateSeries::one().truncated(order);
        for &len in class.cycle_type.parts() {
            term = term.mul(&UnivariateSeries::geometric(len, order)?);
        }
        total = total.add(&term.scale(&rat(class.size as i64)));
    }
    Ok(total.scale(&Rational::new(1.into(), group.order()?.into())))
}

/// `p(z) / ∏_{i=1..n} (1 - z^i)` through degree `order`.
pub fn divide_by_primary_degrees(numerator: &UnivariateSeries, n: usize, order: usize) -> Result<UnivariateSeries> {
    let mut s = numerator.truncated(order);
    for i in 1..=n {
        s = s.mul(&UnivariateSeries::geometric(i, order)?);
    }
    Ok(s)
}

/// Outcome of comparing the numerator route with the Molien series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertReport {
    pub order: usize,
    pub matches: bool,
    pub first_mismatch_degree: Option<usize>,
    pub lhs: UnivariateSeries,
    pub rhs: UnivariateSeries,
}

impl Serialize for HilbertReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("order", &self.order)?;
        map.serialize_entry("match", &self.matches)?;
        if let Some(d) = self.first_mismatch_degree {
            map.serialize_entry("first_mismatch_degree", &d)?;
        }
        map.serialize_entry("lhs", &self.lhs)?;
        map.serialize_entry("rhs", &self.rhs)?;
        map.end()
    }
}

impl HilbertReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    fn build(order: usize, lhs: UnivariateSeries, rhs: UnivariateSeries) -> Self {
        let first_mismatch_degree = (0..=order).find(|&d| lhs.coefficient(d) != rhs.coefficient(d));
        HilbertReport { order, matches: first_mismatch_degree.is_none(), first_mismatch_degree, lhs, rhs }
    }
}

/// Compares `numerator / ∏(1 - z^i)` against the Molien series through `order`.
pub fn hilbert_consistency(group: &PermutationGroup, order: usize) -> Result<HilbertReport> {
    hilbert_consistency_with(group, order, ConventionBridge::default())
}

pub fn hilbert_consistency_with(
    group: &PermutationGroup,
    order: usize,
    bridge: ConventionBridge,
) -> Result<HilbertReport> {
    let num = secondary_degree_numerator_with(group, bridge)?;
    let lhs = divide_by_primary_degrees(&num, group.degree(), order)?;
    let rhs = molien_series(group, order)?;
    Ok(HilbertReport::build(order, lhs, rhs))
}

/// Coefficients as JSON values (numbers when integral).
pub fn series_json(s: &UnivariateSeries) -> serde_json::Value {
    serde_json::Value::Array(s.coefficients().iter().map(rational_json).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::{edge_action_group, parity_doubled_group};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn klein() -> PermutationGroup {
        PermutationGroup::parse(4, "(1,2)(3,4);(1,4)(2,3)").unwrap()
    }

    #[test]
    fn klein_multiplicities() {
        let t = multiplicity_table(&klein()).unwrap();
        assert_eq!(t.to_string(), "{[1, 1, 1, 1]: 1, [2, 1, 1]: 0, [2, 2]: 2, [3, 1]: 0, [4]: 1}");
        assert_eq!(trivial_multiplicity(&klein(), &p(&[2, 2])).unwrap(), 2);
        assert_eq!(trivial_multiplicity(&klein(), &p(&[3, 1])).unwrap(), 0);
        assert!(trivial_multiplicity(&klein(), &p(&[2, 1])).is_err());
    }

    #[test]
    fn symmetric_group_has_only_the_trivial_shape() {
        for n in 1..=5 {
            let t = multiplicity_table(&PermutationGroup::symmetric(n).unwrap()).unwrap();
            assert_eq!(t.support().count(), 1);
            assert_eq!(t.entries[0].multiplicity, 1);
            assert_eq!(
                secondary_degree_numerator(&PermutationGroup::symmetric(n).unwrap()).unwrap(),
                UnivariateSeries::one()
            );
        }
    }

    #[test]
    fn appearance_polynomials() {
        assert_eq!(appearance_polynomial(&p(&[2, 2])), UnivariateSeries::from_integers(&[0, 0, 1, 0, 1]));
        assert_eq!(appearance_polynomial(&p(&[4])), UnivariateSeries::one());
        assert_eq!(appearance_polynomial(&p(&[1, 1, 1, 1])), UnivariateSeries::monomial(rat(1), 6));
        for n in 1..=7 {
            for shape in partitions(n).unwrap() {
                assert_eq!(
                    appearance_polynomial(&shape).evaluate_at_one().unwrap(),
                    rat(hook_length_count(&shape) as i64)
                );
            }
        }
    }

    #[test]
    fn coinvariant_poincare_polynomial() {
        for n in 1..=6 {
            let mut lhs = UnivariateSeries::zero();
            for shape in partitions(n).unwrap() {
                let phi = appearance_polynomial(&shape.conjugate());
                lhs = lhs.add(&phi.scale(&rat(hook_length_count(&shape) as i64)));
            }
            let mut rhs = UnivariateSeries::one();
            for i in 1..=n {
                rhs = rhs.mul(&UnivariateSeries::from_integers(&vec![1; i]));
            }
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn klein_numerator_and_hilbert_check() {
        let num = secondary_degree_numerator(&klein()).unwrap();
        assert_eq!(num, UnivariateSeries::from_integers(&[1, 0, 2, 0, 2, 0, 1]));
        let report = hilbert_consistency(&klein(), 20).unwrap();
        assert!(report.matches);
        let json = report.to_json();
        assert_eq!(json["match"], true);
        assert!(json.get("first_mismatch_degree").is_none());
    }

    #[test]
    fn molien_examples() {
        let trivial = PermutationGroup::new(1, vec![]).unwrap();
        assert_eq!(molien_series(&trivial, 3).unwrap(), UnivariateSeries::from_integers(&[1, 1, 1, 1]).truncated(3));
        let s4 = PermutationGroup::symmetric(4).unwrap();
        assert_eq!(
            molien_series(&s4, 6).unwrap(),
            UnivariateSeries::from_integers(&[1, 1, 2, 3, 5, 6, 9]).truncated(6)
        );
        let klein_quotient =
            divide_by_primary_degrees(&UnivariateSeries::from_integers(&[1, 0, 2, 0, 2, 0, 1]), 4, 6).unwrap();
        assert_eq!(molien_series(&klein(), 6).unwrap(), klein_quotient);
    }

    #[test]
    fn identity_bridge_is_forced() {
        // m_[3] = m_[2,1] = 1 for <(1,2)> in S_3; only one pairing reproduces Molien.
        let g = PermutationGroup::parse(3, "(1,2)").unwrap();
        assert!(hilbert_consistency_with(&g, 10, ConventionBridge::Identity).unwrap().matches);
        let wrong = hilbert_consistency_with(&g, 10, ConventionBridge::Conjugate).unwrap();
        assert!(!wrong.matches);
        assert_eq!(wrong.first_mismatch_degree, Some(0));
        assert_eq!(secondary_degree_numerator(&g).unwrap(), UnivariateSeries::from_integers(&[1, 1, 1]));
    }

    #[test]
    fn hilbert_examples() {
        assert!(hilbert_consistency(&PermutationGroup::symmetric(5).unwrap(), 15).unwrap().matches);
        assert!(hilbert_consistency(&edge_action_group(4).unwrap(), 12).unwrap().matches);
        let cyclic = PermutationGroup::parse(4, "(1,2,3,4)").unwrap();
        let num = secondary_degree_numerator(&cyclic).unwrap();
        assert_eq!(num, UnivariateSeries::from_integers(&[1, 0, 1, 1, 2, 1]));
        assert!(hilbert_consistency(&cyclic, 20).unwrap().matches);
    }

    #[test]
    fn degree_ten_multiplicities() {
        let t = multiplicity_table(&parity_doubled_group(5).unwrap()).unwrap();
        assert_eq!(t.get(&p(&[4, 3, 2, 1])), Some(6));
        assert_eq!(t.get(&p(&[10])), Some(1));
        assert_eq!(t.get(&p(&[2, 1, 1, 1, 1, 1, 1, 1, 1])), Some(1));
        assert_eq!(t.get(&p(&[3, 2, 2, 1, 1, 1])), Some(2));
        assert_eq!(t.get(&p(&[6, 4])), Some(3));
        assert_eq!(t.weighted_total(), 30240);

        // The edge action of S_5 is a different degree-10 group of the same order.
        let e = multiplicity_table(&edge_action_group(5).unwrap()).unwrap();
        assert_eq!(e.weighted_total(), 30240);
        assert_eq!(e.get(&p(&[4, 3, 2, 1])), Some(5));
        assert_eq!(e.get(&p(&[9, 1])), Some(0));
        assert_eq!(e.get(&p(&[2, 1, 1, 1, 1, 1, 1, 1, 1])), Some(0));
    }

    #[test]
    fn conjugate_subgroups_agree() {
        let g = PermutationGroup::parse(5, "(1,2,3);(4,5)").unwrap();
        let base = multiplicity_table(&g).unwrap();
        let relabel = crate::permgroup::parse_permutation("(1,5,2)(3,4)", 5).unwrap();
        let conj: Vec<_> =
            g.generators().iter().map(|x| relabel.compose(x).unwrap().compose(&relabel.inverse()).unwrap()).collect();
        let gc = PermutationGroup::new(5, conj).unwrap();
        assert_eq!(multiplicity_table(&gc).unwrap().entries, base.entries);
    }
}
