//! Permutations, groups generated by them, and conjugacy classes.
//!
//! Composition is `(a ∘ b)(k) = a(b(k))` everywhere in the crate.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::combinatorics::Partition;
use crate::error::{invalid, Error, Result};

/// Default bound on the number of materialized group elements.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// A bijection of `{1..n}`, stored zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// From one-based images: `images[k - 1]` is the image of `k`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(invalid(format!("{images:?} is not a permutation of 1..={n}")));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { images: images.iter().map(|x| x - 1).collect() })
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        Permutation { images }
    }

    /// The transposition `(i, j)` on `n` points, one-based.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i - 1, j - 1);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of `k`, one-based.
    pub fn apply(&self, k: usize) -> usize {
        self.images[k - 1] + 1
    }

    pub(crate) fn zero_based(&self) -> &[usize] {
        &self.images
    }

    pub fn images_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(invalid(format!(
                "cannot compose permutations of degree {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// Cycles of length at least two, one-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.all_cycles().into_iter().filter(|c| c.len() > 1).collect()
    }

    fn all_cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                cycle.push(k + 1);
                k = self.images[k];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths including fixed points, sorted decreasingly.
    pub fn cycle_type(&self) -> Partition {
        let mut lens: Vec<usize> = self.all_cycles().iter().map(Vec::len).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(lens).expect("cycle lengths form a partition")
    }

    pub fn sign(&self) -> i64 {
        let even = self.all_cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0;
        if even {
            1
        } else {
            -1
        }
    }

    /// Adjacent-transposition factorisation `[j1, …, jL]` (one-based `k` for `(k, k+1)`)
    /// with `self = s_{jL} ∘ ⋯ ∘ s_{j1}`; obtained by bubble-sorting the image sequence.
    pub fn adjacent_word(&self) -> Vec<usize> {
        let mut images = self.images.clone();
        let mut word = Vec::new();
        let n = images.len();
        loop {
            let mut swapped = false;
            for i in 0..n.saturating_sub(1) {
                if images[i] > images[i + 1] {
                    // right-multiplying by s_{i+1} swaps positions i and i+1
                    images.swap(i, i + 1);
                    word.push(i + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        word
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
            write!(f, "({})", body.join(","))?;
        }
        Ok(())
    }
}

/// Parses cycle notation such as `"(1,2)(3,4)"` on `n` points.
///
/// Cycles are applied left to right, so `"(1,2)(2,3)"` means "first (1,2), then (2,3)".
/// Whitespace is ignored; `""` and `"()"` are the identity.
pub fn parse_permutation(text: &str, n: usize) -> Result<Permutation> {
    let err = |position: usize, message: String| Error::Parse { position, message };
    let mut result = Permutation::identity(n);
    let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c != '(' {
            return Err(err(pos, format!("expected '(' but found {c:?}")));
        }
        i += 1;
        let mut cycle: Vec<usize> = Vec::new();
        let mut number = String::new();
        let mut number_start = pos;
        loop {
            let Some(&(pos, c)) = chars.get(i) else {
                return Err(err(text.len(), "unclosed cycle".into()));
            };
            i += 1;
            match c {
                '0'..='9' => {
                    if number.is_empty() {
                        number_start = pos;
                    }
                    number.push(c);
                }
                ',' | ')' => {
                    if number.is_empty() {
                        if c == ')' && cycle.is_empty() {
                            break;
                        }
                        return Err(err(pos, "missing point".into()));
                    }
                    let k: usize = number.parse().map_err(|_| err(number_start, format!("bad number {number:?}")))?;
                    if k == 0 || k > n {
                        return Err(err(number_start, format!("point {k} is outside 1..={n}")));
                    }
                    if cycle.contains(&k) {
                        return Err(err(number_start, format!("point {k} repeated within a cycle")));
                    }
                    cycle.push(k);
                    number.clear();
                    if c == ')' {
                        break;
                    }
                }
                _ => return Err(err(pos, format!("unexpected character {c:?}"))),
            }
        }
        let mut images: Vec<usize> = (0..n).collect();
        for (j, &k) in cycle.iter().enumerate() {
            images[k - 1] = cycle[(j + 1) % cycle.len()] - 1;
        }
        result = Permutation::from_zero_based(images).compose_unchecked(&result);
    }
    Ok(result)
}

/// Parses a `;`-separated generator list on `n` points. Empty items are skipped.
pub fn parse_generators(text: &str, n: usize) -> Result<Vec<Permutation>> {
    text.split(';').filter(|g| !g.trim().is_empty()).map(|g| parse_permutation(g, n)).collect()
}

/// A conjugacy class of a permutation group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: Permutation,
    pub size: usize,
    pub cycle_type: Partition,
}

/// A permutation group given by generators; elements are materialized lazily.
#[derive(Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    element_cap: usize,
    elements: OnceLock<Vec<Permutation>>,
    classes: OnceLock<Vec<ConjugacyClass>>,
}

impl Clone for PermutationGroup {
    fn clone(&self) -> Self {
        PermutationGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            element_cap: self.element_cap,
            elements: self.elements.clone(),
            classes: self.classes.clone(),
        }
    }
}

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(invalid("group degree must be at least 1"));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(invalid(format!("generator {g} has degree {} not {degree}", g.degree())));
        }
        Ok(PermutationGroup {
            degree,
            generators,
            element_cap: DEFAULT_ELEMENT_CAP,
            elements: OnceLock::new(),
            classes: OnceLock::new(),
        })
    }

    /// Parses `;`-separated cycle-notation generators.
    pub fn parse(degree: usize, generators: &str) -> Result<Self> {
        Self::new(degree, parse_generators(generators, degree)?)
    }

    /// The full symmetric group on `n` points.
    pub fn symmetric(n: usize) -> Result<Self> {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::transposition(n, 1, 2));
            let cycle: Vec<usize> = (1..n).chain(std::iter::once(0)).collect();
            gens.push(Permutation::from_zero_based(cycle));
        }
        Self::new(n, gens)
    }

    pub fn with_element_cap(mut self, cap: usize) -> Self {
        self.element_cap = cap;
        self.elements = OnceLock::new();
        self.classes = OnceLock::new();
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements, sorted by image sequence; breadth-first closure of the generators.
    pub fn elements(&self) -> Result<&[Permutation]> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let computed = self.close()?;
        Ok(self.elements.get_or_init(|| computed))
    }

    fn close(&self) -> Result<Vec<Permutation>> {
        let identity = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.compose_unchecked(&x);
                if !seen.contains(&y) {
                    if seen.len() >= self.element_cap {
                        return Err(Error::ResourceLimit {
                            what: "group order (raise the element cap to continue)".into(),
                            cap: self.element_cap,
                        });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<Permutation> = seen.into_iter().collect();
        out.sort_unstable();
        Ok(out)
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        Ok(self.elements()?.binary_search(p).is_ok())
    }

    /// Classes sorted by representative; each representative is the
    /// lexicographically least element of its class.
    pub fn conjugacy_classes(&self) -> Result<&[ConjugacyClass]> {
        if let Some(c) = self.classes.get() {
            return Ok(c);
        }
        let elements = self.elements()?;
        let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let inverses: Vec<Permutation> = self.generators.iter().map(Permutation::inverse).collect();
        let mut visited = vec![false; elements.len()];
        let mut classes = Vec::new();
        for start in 0..elements.len() {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let mut size = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for (g, g_inv) in self.generators.iter().zip(&inverses) {
                    let y = g.compose_unchecked(&elements[i]).compose_unchecked(g_inv);
                    let j = index[&y];
                    if !visited[j] {
                        visited[j] = true;
                        size += 1;
                        queue.push_back(j);
                    }
                }
            }
            let representative = elements[start].clone();
            classes.push(ConjugacyClass { cycle_type: representative.cycle_type(), representative, size });
        }
        Ok(self.classes.get_or_init(|| classes))
    }
}

/// The action of `S_m` on the `C(m, 2)` unordered pairs of `{1..m}`, pairs
/// numbered `1..` in lexicographic order.
pub fn edge_action_group(m: usize) -> Result<PermutationGroup> {
    if m < 2 {
        return Err(invalid("edge_action_group needs m >= 2"));
    }
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let vertex_gens = PermutationGroup::symmetric(m)?.generators;
    let induced = vertex_gens
        .iter()
        .map(|g| {
            let images = pairs
                .iter()
                .map(|&(i, j)| {
                    let (a, b) = (g.images[i], g.images[j]);
                    index[&(a.min(b), a.max(b))]
                })
                .collect();
            Permutation::from_zero_based(images)
        })
        .collect();
    PermutationGroup::new(pairs.len(), induced)
}

/// `S_m` acting on `{1..m} × {even, odd}` by `σ·(i, s) = (σ(i), s·sign σ)`,
/// i.e. on the cosets of `A_m`'s point stabiliser. Point `(i, s)` is numbered
/// `2i - 1` for even `s` and `2i` for odd.
///
/// For `m = 5` this is the transitive group of degree 10 and order 120
/// catalogued as `TransitiveGroup(10, 12)`.
pub fn parity_doubled_group(m: usize) -> Result<PermutationGroup> {
    if m < 2 {
        return Err(invalid("parity_doubled_group needs m >= 2"));
    }
    let vertex_gens = PermutationGroup::symmetric(m)?.generators;
    let induced = vertex_gens
        .iter()
        .map(|g| {
            let flip = usize::from(g.sign() < 0);
            let images = (0..2 * m).map(|x| 2 * g.images[x / 2] + ((x % 2) ^ flip)).collect();
            Permutation::from_zero_based(images)
        })
        .collect();
    PermutationGroup::new(2 * m, induced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(text: &str, n: usize) -> Permutation {
        parse_permutation(text, n).unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(perm("(1,2)(3,4)", 4).images_one_based(), vec![2, 1, 4, 3]);
        assert!(perm("", 5).is_identity());
        assert!(perm("()", 5).is_identity());
        assert_eq!(perm("(1,2,3)", 3).images_one_based(), vec![2, 3, 1]);
        assert_eq!(perm(" ( 1 , 2 ) ", 2).images_one_based(), vec![2, 1]);
        // left to right: (1,2) first, then (2,3)
        assert_eq!(perm("(1,2)(2,3)", 3).images_one_based(), vec![3, 1, 2]);
    }

    #[test]
    fn parse_errors_carry_positions() {
        for (text, pos) in [("(1,5)", 3), ("(1,2,1)", 5), ("(1,2", 4), ("1,2)", 0), ("(1,,2)", 3), ("(1;2)", 2)] {
            match parse_permutation(text, 4) {
                Err(Error::Parse { position, .. }) => assert_eq!(position, pos, "{text}"),
                other => panic!("{text}: expected parse error, got {other:?}"),
            }
        }
        assert!(parse_permutation("(0,1)", 4).is_err());
    }

    #[test]
    fn composition() {
        let b = perm("(1,3)", 3);
        assert_eq!(Permutation::identity(3).compose(&b).unwrap(), b);
        let t = perm("(1,2)", 3);
        assert!(t.compose(&t).unwrap().is_identity());
        // brute force: (a ∘ b)(k) = a(b(k))
        let a = perm("(1,2)", 3);
        let b = perm("(2,3)", 3);
        let c = a.compose(&b).unwrap();
        for k in 1..=3 {
            assert_eq!(c.apply(k), a.apply(b.apply(k)));
        }
        assert_eq!(c, perm("(1,2,3)", 3));
        assert!(a.compose(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Permutation::identity(3).cycle_type().parts(), &[1, 1, 1]);
        assert_eq!(perm("(1,2)(3,4)", 4).cycle_type().parts(), &[2, 2]);
        assert_eq!(perm("(1,2,3)", 3).cycle_type().parts(), &[3]);
    }

    #[test]
    fn element_enumeration() {
        let klein = PermutationGroup::parse(4, "(1,2)(3,4);(1,4)(2,3)").unwrap();
        assert_eq!(klein.order().unwrap(), 4);
        let trivial = PermutationGroup::new(5, vec![]).unwrap();
        assert_eq!(trivial.elements().unwrap(), &[Permutation::identity(5)]);
        let s5 = PermutationGroup::parse(5, "(1,2);(1,2,3,4,5)").unwrap();
        assert_eq!(s5.order().unwrap(), 120);
        let capped = PermutationGroup::parse(5, "(1,2);(1,2,3,4,5)").unwrap().with_element_cap(50);
        assert!(matches!(capped.order(), Err(Error::ResourceLimit { cap: 50, .. })));
    }

    #[test]
    fn closure_is_exhaustive() {
        let g = PermutationGroup::parse(5, "(1,2,3);(3,4,5)").unwrap();
        let els = g.elements().unwrap();
        for a in els {
            assert!(g.contains(&a.inverse()).unwrap());
            for b in els {
                assert!(g.contains(&a.compose(b).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn classes() {
        let klein = PermutationGroup::parse(4, "(1,2)(3,4);(1,4)(2,3)").unwrap();
        let cls = klein.conjugacy_classes().unwrap();
        let summary: Vec<(usize, Vec<usize>)> = cls.iter().map(|c| (c.size, c.cycle_type.parts().to_vec())).collect();
        assert_eq!(summary, vec![(1, vec![1, 1, 1, 1]), (1, vec![2, 2]), (1, vec![2, 2]), (1, vec![2, 2])]);
        let trivial = PermutationGroup::new(3, vec![]).unwrap();
        assert_eq!(trivial.conjugacy_classes().unwrap().len(), 1);
        let s3 = PermutationGroup::parse(3, "(1,2);(1,2,3)").unwrap();
        let mut sizes: Vec<usize> = s3.conjugacy_classes().unwrap().iter().map(|c| c.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn class_sizes_sum_to_order() {
        for (n, gens) in [(4, "(1,2,3,4);(1,3)"), (5, "(1,2,3,4,5);(2,5)(3,4)"), (6, "(1,2);(3,4,5,6)")] {
            let g = PermutationGroup::parse(n, gens).unwrap();
            let order = g.order().unwrap();
            let cls = g.conjugacy_classes().unwrap();
            assert_eq!(cls.iter().map(|c| c.size).sum::<usize>(), order);
            assert!(cls.iter().all(|c| order.is_multiple_of(c.size)));
            assert!(cls.windows(2).all(|w| w[0].representative < w[1].representative));
        }
    }

    #[test]
    fn edge_groups() {
        let k5 = edge_action_group(5).unwrap();
        assert_eq!(k5.degree(), 10);
        assert_eq!(k5.order().unwrap(), 120);
        let k2 = edge_action_group(2).unwrap();
        assert_eq!((k2.degree(), k2.order().unwrap()), (1, 1));
        let k4 = edge_action_group(4).unwrap();
        assert_eq!((k4.degree(), k4.order().unwrap()), (6, 24));
    }

    #[test]
    fn parity_doubled_groups() {
        let g = parity_doubled_group(5).unwrap();
        assert_eq!((g.degree(), g.order().unwrap()), (10, 120));
        // (1,2) is odd, so it swaps layers: (1,+) <-> (2,-) and (i,+) <-> (i,-) elsewhere.
        assert_eq!(g.generators()[0].to_string(), "(1,4)(2,3)(5,6)(7,8)(9,10)");
        let sizes: Vec<usize> = g.conjugacy_classes().unwrap().iter().map(|c| c.size).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 120);
        assert_eq!(sizes.len(), 7);
        assert!(parity_doubled_group(1).is_err());
    }

    #[test]
    fn adjacent_word_reconstructs() {
        for text in ["(1,3,5)(2,4)", "(1,5)", "", "(2,3)"] {
            let p = perm(text, 5);
            let mut acc = Permutation::identity(5);
            for &k in &p.adjacent_word() {
                acc = Permutation::transposition(5, k, k + 1).compose(&acc).unwrap();
            }
            assert_eq!(acc, p, "{text}");
        }
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(Permutation::from_zero_based)
    }

    proptest! {
        #[test]
        fn cycle_type_is_conjugation_invariant(a in arb_perm(7), g in arb_perm(7)) {
            let conj = g.compose(&a).unwrap().compose(&g.inverse()).unwrap();
            prop_assert_eq!(conj.cycle_type(), a.cycle_type());
        }

        #[test]
        fn print_then_parse_round_trips(a in arb_perm(8)) {
            prop_assert_eq!(parse_permutation(&a.to_string(), 8).unwrap(), a);
        }

        #[test]
        fn inverse_cancels(a in arb_perm(6)) {
            prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        }
    }
}
