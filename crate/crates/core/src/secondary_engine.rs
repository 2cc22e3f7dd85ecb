//! Secondary invariants as linear combinations of higher Specht polynomials.
//!
//! For every shape `λ` with `m_λ > 0`:
//!
//! 1. the `G`-fixed subspace of the seminormal irreducible is computed and its
//!    dimension checked against `m_λ`;
//! 2. a basis of invariant combinations `Σ_T c_T F_T^S` is found for each `S`;
//! 3. optionally each combination is expanded and checked against every generator.
//!
//! Step 2 cannot reuse the seminormal coordinates directly: the higher Specht
//! family spans a copy of the same irreducible but in a different basis. The
//! default strategies solve for the action on `{F_T^S}_T` itself, either by
//! expansion (`Concrete`) or through the polytabloid model (`Polytabloid`).

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::combinatorics::{cocharge, hook_length_count, ExponentVector, Partition, StandardTableau};
use crate::error::{consistency, invalid, Error, Result};
use crate::exact_linalg::{
    fixed_space, rank_of_vectors, solve_many, ModPEchelon, Rational, RationalMatrix, RationalVector, Subspace,
};
use crate::multiplicity::{multiplicity_table, numerator_from_table, trivial_multiplicity, ConventionBridge};
use crate::permgroup::{Permutation, PermutationGroup};
use crate::polynomial::SparsePolynomial;
use crate::rep_matrices::IrrepMatrixFactory;
use crate::series::UnivariateSeries;
use crate::specht_poly::{higher_specht_with, YoungSymmetrizer};
use crate::tabloid::PolytabloidModel;

/// Primes for modular screening and trace certificates; all below `2^31`.
pub const PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

/// `Auto` uses the kernel method up to this ambient dimension.
pub const KERNEL_DIMENSION_LIMIT: usize = 60;

/// `Auto` uses projection only for groups up to this order.
pub const PROJECTION_ORDER_LIMIT: usize = 20_000;

/// `Auto` translates by expansion up to this degree and via polytabloids above it.
pub const CONCRETE_DEGREE_LIMIT: usize = 6;

/// Largest degree for which expansion is allowed by default.
pub const DEFAULT_EXPANSION_CAP: usize = 7;

/// How invariant coefficient vectors over `{F_T^S}_T` are obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TranslationStrategy {
    #[default]
    Auto,
    /// Expand `g·F_T^S` and solve for its coordinates.
    Concrete,
    /// Orbit sums of polytabloids, straightened; no expansion.
    Polytabloid,
    /// Reuse seminormal coordinates unchanged; always verified.
    SeminormalDirect,
}

/// How the seminormal fixed space is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FixedSpaceMethod {
    #[default]
    Auto,
    /// Intersect `ker(ρ(g_i) - I)` exactly.
    Kernel,
    /// Reynolds images of unit vectors, with a trace certificate for the dimension.
    Projection,
}

macro_rules! kebab_enum {
    ($ty:ty { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub fn name(self) -> &'static str {
                match self { $(Self::$variant => $name),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(Self::$variant),)+
                    other => Err(invalid(format!(
                        "unknown value {other:?}; expected one of: {}",
                        [$($name),+].join(", ")
                    ))),
                }
            }
        }
    };
}

kebab_enum!(TranslationStrategy {
    Auto => "auto",
    Concrete => "concrete",
    Polytabloid => "polytabloid",
    SeminormalDirect => "seminormal-direct",
});

kebab_enum!(FixedSpaceMethod { Auto => "auto", Kernel => "kernel", Projection => "projection" });

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub expand: bool,
    /// Checks every expanded invariant against every generator; implies `expand`.
    pub verify: bool,
    /// Worker threads for the per-shape fan-out; at least one is used.
    pub workers: usize,
    pub strategy: TranslationStrategy,
    pub fixed_space: FixedSpaceMethod,
    pub expansion_cap: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            expand: false,
            verify: false,
            workers: 1,
            strategy: TranslationStrategy::Auto,
            fixed_space: FixedSpaceMethod::Auto,
            expansion_cap: DEFAULT_EXPANSION_CAP,
        }
    }
}

impl EngineOptions {
    fn resolved_strategy(&self, n: usize) -> TranslationStrategy {
        match self.strategy {
            TranslationStrategy::Auto if n <= CONCRETE_DEGREE_LIMIT => TranslationStrategy::Concrete,
            TranslationStrategy::Auto => TranslationStrategy::Polytabloid,
            s => s,
        }
    }

    fn must_verify(&self) -> bool {
        self.verify || self.strategy == TranslationStrategy::SeminormalDirect
    }

    fn must_expand(&self) -> bool {
        self.expand || self.must_verify()
    }
}

/// `Σ_T c_T F_T^S` as its nonzero `(T, c_T)` pairs in canonical tableau order.
pub type Combination = Vec<(StandardTableau, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondaryInvariant {
    pub shape: Partition,
    /// Carries the degree: `cocharge(S)`.
    pub s: StandardTableau,
    pub degree: usize,
    /// Shared between invariants whose coefficients coincide.
    pub combination: Arc<Combination>,
    pub expanded: Option<SparsePolynomial>,
}

impl SecondaryInvariant {
    pub fn to_json(&self) -> Value {
        let combination: Vec<Value> =
            self.combination.iter().map(|(t, c)| json!({ "T": t, "coeff": c.to_string() })).collect();
        let mut v = json!({
            "shape": self.shape,
            "S": self.s,
            "combination": combination,
            "degree": self.degree,
        });
        if let Some(p) = &self.expanded {
            v["expanded"] = serde_json::to_value(p).expect("polynomial serializes");
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaRecord {
    pub partition: Partition,
    pub ambient_dim: usize,
    pub rank: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineReport {
    pub degree: usize,
    pub generators: Vec<String>,
    pub group_order: usize,
    pub strategy: TranslationStrategy,
    pub per_lambda: Vec<LambdaRecord>,
    /// `Σ rank · f^λ`.
    pub total: u128,
    /// `n! / |G|`.
    pub total_expected: u128,
    pub elapsed: Duration,
}

impl EngineReport {
    /// Trace lines: two per shape, then the totals.
    pub fn trace_text(&self) -> String {
        let mut out = String::new();
        for r in &self.per_lambda {
            out.push_str(&format!("{}  ambient dimension -->  {}\n", r.partition, r.ambient_dim));
            out.push_str(&format!("rank in S_n repr :  {}\n", r.rank));
        }
        out.push_str(&format!("total :  {}\n", self.total));
        out.push_str(&format!("n! / |G| :  {}\n", self.total_expected));
        out
    }

    pub fn timing_text(&self) -> String {
        let mut out = String::new();
        for r in &self.per_lambda {
            out.push_str(&format!("{}  {:.3} s\n", r.partition, r.elapsed.as_secs_f64()));
        }
        out.push_str(&format!("TOTAL CPU TIME :  {:.3}\n", self.elapsed.as_secs_f64()));
        out
    }
}

/// What to put in the JSON document.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JsonOptions {
    pub timings: bool,
    pub invariants: bool,
}

impl Default for JsonOptions {
    fn default() -> Self {
        JsonOptions { timings: false, invariants: true }
    }
}

#[derive(Clone, Debug)]
pub struct SecondaryResult {
    pub invariants: Vec<SecondaryInvariant>,
    pub report: EngineReport,
}

impl SecondaryResult {
    /// `Σ z^{degree}` over the emitted invariants.
    pub fn degree_census(&self) -> UnivariateSeries {
        let top = self.invariants.iter().map(|i| i.degree).max().unwrap_or(0);
        let mut counts = vec![0i64; top + 1];
        for inv in &self.invariants {
            counts[inv.degree] += 1;
        }
        UnivariateSeries::from_integers(&counts)
    }

    pub fn to_json(&self, opts: JsonOptions) -> Value {
        let r = &self.report;
        let per_lambda: Vec<Value> = r
            .per_lambda
            .iter()
            .map(|l| {
                let mut v = json!({ "partition": l.partition, "ambient_dim": l.ambient_dim, "rank": l.rank });
                if opts.timings {
                    v["elapsed_ms"] = json!(l.elapsed.as_millis() as u64);
                }
                v
            })
            .collect();
        let mut doc = json!({
            "degree": r.degree,
            "generators": r.generators,
            "group_order": r.group_order,
            "total_expected": r.total_expected as u64,
            "total": r.total as u64,
            "per_lambda": per_lambda,
        });
        if opts.invariants {
            doc["invariants"] = Value::Array(self.invariants.iter().map(SecondaryInvariant::to_json).collect());
        }
        if opts.timings {
            doc["elapsed_ms"] = json!(r.elapsed.as_millis() as u64);
        }
        doc
    }
}

/// Spanning tree of the group elements from the identity; edges are left
/// multiplications by generators.
#[derive(Debug)]
struct ElementTree {
    generator_of: Vec<usize>,
    children: Vec<Vec<usize>>,
}

impl ElementTree {
    fn new(group: &PermutationGroup) -> Result<Self> {
        group.order()?;
        let id = Permutation::identity(group.degree());
        let mut index: HashMap<Permutation, usize> = HashMap::from([(id.clone(), 0)]);
        let mut elements = vec![id];
        let mut generator_of = vec![usize::MAX];
        let mut children = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (gi, g) in group.generators().iter().enumerate() {
                let h = g.compose(&elements[i])?;
                if index.contains_key(&h) {
                    continue;
                }
                let j = elements.len();
                index.insert(h.clone(), j);
                elements.push(h);
                generator_of.push(gi);
                children.push(Vec::new());
                children[i].push(j);
                queue.push_back(j);
            }
        }
        Ok(ElementTree { generator_of, children })
    }

    /// Visits `ρ(g) v` for every element `g`, depth first.
    fn for_each_image<V>(
        &self,
        start: V,
        mut apply: impl FnMut(usize, &V) -> Result<V>,
        mut visit: impl FnMut(&V),
    ) -> Result<()> {
        let mut stack = vec![(0usize, start)];
        while let Some((node, v)) = stack.pop() {
            visit(&v);
            for &c in &self.children[node] {
                stack.push((c, apply(self.generator_of[c], &v)?));
            }
        }
        Ok(())
    }
}

/// Shared, lazily built group data for one run.
struct GroupContext<'a> {
    group: &'a PermutationGroup,
    tree: OnceLock<ElementTree>,
}

impl<'a> GroupContext<'a> {
    fn new(group: &'a PermutationGroup) -> Self {
        GroupContext { group, tree: OnceLock::new() }
    }

    fn tree(&self) -> Result<&ElementTree> {
        if let Some(t) = self.tree.get() {
            return Ok(t);
        }
        let built = ElementTree::new(self.group)?;
        Ok(self.tree.get_or_init(|| built))
    }
}

fn resolve_method(method: FixedSpaceMethod, f: usize, group: &PermutationGroup) -> Result<FixedSpaceMethod> {
    Ok(match method {
        FixedSpaceMethod::Auto if f <= KERNEL_DIMENSION_LIMIT => FixedSpaceMethod::Kernel,
        FixedSpaceMethod::Auto if group.order()? <= PROJECTION_ORDER_LIMIT => FixedSpaceMethod::Projection,
        FixedSpaceMethod::Auto => FixedSpaceMethod::Kernel,
        m => m,
    })
}

fn dimension_mismatch(shape: &Partition, found: usize, expected: u64) -> Error {
    consistency(format!(
        "shape {shape}: fixed space has dimension {found} but the character inner product gives {expected}"
    ))
}

/// `∩_i ker(ρ_λ(g_i) - I)` for the generators of `G`; its dimension is
/// checked against `m_λ(G)`.
pub fn abstract_fixed_basis(group: &PermutationGroup, shape: &Partition) -> Result<Subspace> {
    abstract_fixed_basis_with(group, shape, FixedSpaceMethod::Auto)
}

pub fn abstract_fixed_basis_with(
    group: &PermutationGroup,
    shape: &Partition,
    method: FixedSpaceMethod,
) -> Result<Subspace> {
    let m = trivial_multiplicity(group, shape)?;
    let factory = IrrepMatrixFactory::new(shape);
    fixed_basis(&GroupContext::new(group), &factory, m, method)
}

fn fixed_basis(ctx: &GroupContext, factory: &IrrepMatrixFactory, m: u64, method: FixedSpaceMethod) -> Result<Subspace> {
    let group = ctx.group;
    let f = factory.dimension();
    let space = match resolve_method(method, f, group)? {
        FixedSpaceMethod::Projection => projection_fixed_basis(ctx, factory, m)?,
        _ => {
            let mats =
                group.generators().iter().map(|g| factory.rep_matrix(g)).collect::<Result<Vec<RationalMatrix>>>()?;
            fixed_space(&mats, f)?
        }
    };
    if space.dim() as u64 != m {
        return Err(dimension_mismatch(factory.shape(), space.dim(), m));
    }
    Ok(space)
}

fn apply_word_mod_p(factory: &IrrepMatrixFactory, word: &[usize], v: &mut [u64], p: u64) -> Result<()> {
    for &k in word {
        factory.apply_adjacent_mod_p(k, v, p)?;
    }
    Ok(())
}

/// `(1/|G|) Σ_C |C| tr ρ(c)` from the seminormal matrices; the rank of the
/// Reynolds projector, hence the exact fixed-space dimension.
fn fixed_dimension_by_trace(group: &PermutationGroup, factory: &IrrepMatrixFactory) -> Result<u64> {
    let p = PRIMES[0];
    let f = factory.dimension();
    let mut sum: i128 = 0;
    for class in group.conjugacy_classes()? {
        let word = class.representative.adjacent_word();
        let mut trace = 0u64;
        for i in 0..f {
            let mut col = vec![0u64; f];
            col[i] = 1;
            apply_word_mod_p(factory, &word, &mut col, p)?;
            trace = (trace + col[i]) % p;
        }
        let lifted = if trace > p / 2 { trace as i128 - p as i128 } else { trace as i128 };
        sum += class.size as i128 * lifted;
    }
    let order = group.order()? as i128;
    if sum % order != 0 || sum < 0 {
        return Err(consistency(format!("shape {}: Reynolds trace {sum}/{order} is not a dimension", factory.shape())));
    }
    Ok((sum / order) as u64)
}

fn projection_fixed_basis(ctx: &GroupContext, factory: &IrrepMatrixFactory, m: u64) -> Result<Subspace> {
    let group = ctx.group;
    let f = factory.dimension();
    let m = m as usize;
    let certified = fixed_dimension_by_trace(group, factory)?;
    if certified as usize != m {
        return Err(dimension_mismatch(factory.shape(), certified as usize, m as u64));
    }
    if m == 0 {
        return Ok(Subspace::zero(f));
    }
    let tree = ctx.tree()?;
    let words: Vec<Vec<usize>> = group.generators().iter().map(Permutation::adjacent_word).collect();

    // Pick unit vectors whose Reynolds images are independent, cheaply mod p.
    let mut chosen = Vec::new();
    for &p in &PRIMES {
        chosen.clear();
        let mut echelon = ModPEchelon::new(p);
        for i in 0..f {
            let mut start = vec![0u64; f];
            start[i] = 1;
            let mut acc = vec![0u64; f];
            tree.for_each_image(
                start,
                |gi, v| {
                    let mut w = v.clone();
                    apply_word_mod_p(factory, &words[gi], &mut w, p)?;
                    Ok(w)
                },
                |v| {
                    for (a, x) in acc.iter_mut().zip(v) {
                        *a = (*a + x) % p;
                    }
                },
            )?;
            if echelon.insert(acc) {
                chosen.push(i);
                if chosen.len() == m {
                    break;
                }
            }
        }
        if chosen.len() == m {
            break;
        }
    }
    if chosen.len() != m {
        return Err(dimension_mismatch(factory.shape(), chosen.len(), m as u64));
    }

    let mut vectors = Vec::with_capacity(m);
    for &i in &chosen {
        let mut start = vec![Rational::zero(); f];
        start[i] = Rational::from_integer(1.into());
        let mut acc = vec![Rational::zero(); f];
        tree.for_each_image(
            start,
            |gi, v| {
                let mut w = v.clone();
                for &k in &words[gi] {
                    factory.apply_adjacent(k, &mut w)?;
                }
                Ok(w)
            },
            |v| {
                for (a, x) in acc.iter_mut().zip(v) {
                    if !x.is_zero() {
                        *a += x;
                    }
                }
            },
        )?;
        for g in group.generators() {
            if factory.apply_permutation(g, &acc)? != acc {
                return Err(consistency(format!("shape {}: Reynolds image not fixed by {g}", factory.shape())));
            }
        }
        vectors.push(acc);
    }
    Subspace::span(f, vectors)
}

/// Coordinates of each `g·F_T^S` in `{F_T^S}_T`, as matrices (column `T` = image of `F_T^S`).
fn concrete_matrices(
    group: &PermutationGroup,
    specht: &[SparsePolynomial],
    label: &str,
) -> Result<Vec<RationalMatrix>> {
    let monomials: BTreeSet<&ExponentVector> = specht.iter().flat_map(|p| p.terms().map(|(e, _)| e)).collect();
    let index: HashMap<&ExponentVector, usize> = monomials.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let to_vector = |p: &SparsePolynomial| -> Option<RationalVector> {
        let mut v = vec![Rational::zero(); index.len()];
        for (e, c) in p.terms() {
            v[*index.get(e)?] = c.clone();
        }
        Some(v)
    };
    let columns: Vec<RationalVector> = specht.iter().map(|p| to_vector(p).expect("own monomials")).collect();
    let f = specht.len();
    let mut mats = Vec::new();
    for g in group.generators() {
        let outside = || consistency(format!("{label}: {g} maps a higher Specht polynomial outside the span"));
        let targets = specht
            .iter()
            .map(|p| to_vector(&p.permute_variables(g)?).ok_or_else(outside))
            .collect::<Result<Vec<_>>>()?;
        let coords = solve_many(&columns, &targets).ok_or_else(outside)?;
        let mut m = RationalMatrix::zeros(f, f);
        for (j, col) in coords.into_iter().enumerate() {
            for (i, x) in col.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        mats.push(m);
    }
    Ok(mats)
}

fn specht_family(s: &StandardTableau, symmetrizers: &[YoungSymmetrizer]) -> Result<Vec<SparsePolynomial>> {
    symmetrizers.iter().map(|eps| higher_specht_with(s, eps)).collect()
}

fn concrete_basis(
    group: &PermutationGroup,
    s: &StandardTableau,
    specht: &[SparsePolynomial],
    m: u64,
) -> Result<Vec<RationalVector>> {
    let shape = s.shape();
    let mats = concrete_matrices(group, specht, &format!("shape {shape}, S = {s}"))?;
    let space = fixed_space(&mats, specht.len())?;
    if space.dim() as u64 != m {
        return Err(dimension_mismatch(shape, space.dim(), m));
    }
    Ok(space.into_basis())
}

fn polytabloid_basis(group: &PermutationGroup, shape: &Partition, m: u64) -> Result<Vec<RationalVector>> {
    let model = PolytabloidModel::new(shape);
    let f = model.dimension();
    let m = m as usize;
    let elements = group.elements()?;
    let p = PRIMES[0];
    let mut echelon = ModPEchelon::new(p);
    let mut kept: Vec<Vec<i128>> = Vec::new();
    for t in 0..f {
        if kept.len() == m {
            break;
        }
        let v = model.orbit_sum(t, elements)?;
        let reduced = v.iter().map(|&c| c.rem_euclid(p as i128) as u64).collect();
        if echelon.insert(reduced) {
            kept.push(v);
        }
    }
    for v in &kept {
        for g in group.generators() {
            if !model.is_fixed_by(g, v)? {
                return Err(consistency(format!("shape {shape}: polytabloid orbit sum not fixed by {g}")));
            }
        }
    }
    let rational: Vec<RationalVector> =
        kept.iter().map(|v| v.iter().map(|&c| Rational::from_integer(c.into())).collect()).collect();
    let space = Subspace::span(f, rational)?;
    if space.dim() != m {
        return Err(dimension_mismatch(shape, space.dim(), m as u64));
    }
    Ok(space.into_basis())
}

/// Coefficient vectors over `STab(λ)` (canonical order) whose higher Specht
/// combinations with fixed `S` are `G`-invariant.
pub fn translate_to_specht_basis(
    group: &PermutationGroup,
    s: &StandardTableau,
    abstract_basis: &Subspace,
    strategy: TranslationStrategy,
) -> Result<Vec<RationalVector>> {
    let shape = s.shape();
    let m = abstract_basis.dim() as u64;
    match strategy {
        TranslationStrategy::Auto if shape.size() > CONCRETE_DEGREE_LIMIT => polytabloid_basis(group, shape, m),
        TranslationStrategy::Auto | TranslationStrategy::Concrete => {
            let symmetrizers: Vec<YoungSymmetrizer> =
                IrrepMatrixFactory::new(shape).tableaux().iter().map(YoungSymmetrizer::new).collect();
            concrete_basis(group, s, &specht_family(s, &symmetrizers)?, m)
        }
        TranslationStrategy::Polytabloid => polytabloid_basis(group, shape, m),
        TranslationStrategy::SeminormalDirect => Ok(abstract_basis.basis().to_vec()),
    }
}

/// Exact check that every generator fixes `p`.
pub fn verify_invariance(p: &SparsePolynomial, group: &PermutationGroup) -> bool {
    first_moving_generator(p, group).is_none()
}

fn first_moving_generator<'g>(p: &SparsePolynomial, group: &'g PermutationGroup) -> Option<&'g Permutation> {
    group.generators().iter().find(|g| p.permute_variables(g).map_or(true, |q| &q != p))
}

fn to_combination(tableaux: &[StandardTableau], v: &[Rational]) -> Combination {
    tableaux.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(t, c)| (t.clone(), c.clone())).collect()
}

fn expand(
    combination: &Combination,
    tableaux: &[StandardTableau],
    specht: &[SparsePolynomial],
) -> Result<SparsePolynomial> {
    let n = specht.first().map_or(0, SparsePolynomial::num_vars);
    let mut out = SparsePolynomial::zero(n);
    let mut j = 0;
    for (t, c) in combination {
        while &tableaux[j] != t {
            j += 1;
        }
        out = out.add(&specht[j].scale(c))?;
    }
    Ok(out)
}

struct LambdaOutput {
    record: LambdaRecord,
    invariants: Vec<SecondaryInvariant>,
}

fn run_lambda(ctx: &GroupContext, shape: &Partition, m: u64, options: &EngineOptions) -> Result<LambdaOutput> {
    let start = Instant::now();
    let group = ctx.group;
    let factory = IrrepMatrixFactory::new(shape);
    let abstract_space = fixed_basis(ctx, &factory, m, options.fixed_space)?;
    let tableaux = factory.tableaux();
    let strategy = options.resolved_strategy(shape.size());
    let expanding = options.must_expand();
    let symmetrizers: Vec<YoungSymmetrizer> = if expanding || strategy == TranslationStrategy::Concrete {
        tableaux.iter().map(YoungSymmetrizer::new).collect()
    } else {
        Vec::new()
    };

    let shared: Option<Vec<Arc<Combination>>> = match strategy {
        TranslationStrategy::Polytabloid => Some(polytabloid_basis(group, shape, m)?),
        TranslationStrategy::SeminormalDirect => Some(abstract_space.basis().to_vec()),
        _ => None,
    }
    .map(|basis| basis.iter().map(|v| Arc::new(to_combination(tableaux, v))).collect());

    let mut invariants = Vec::new();
    let mut previous: Vec<Arc<Combination>> = Vec::new();
    for s in tableaux {
        let specht = if expanding || shared.is_none() { specht_family(s, &symmetrizers)? } else { Vec::new() };
        let combos: Vec<Arc<Combination>> = match &shared {
            Some(c) => c.clone(),
            None => concrete_basis(group, s, &specht, m)?
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let c = to_combination(tableaux, v);
                    match previous.get(i) {
                        Some(prev) if **prev == c => Arc::clone(prev),
                        _ => Arc::new(c),
                    }
                })
                .collect(),
        };
        let degree = cocharge(s);
        let mut block = Vec::with_capacity(combos.len());
        for combination in &combos {
            let expanded = if expanding { Some(expand(combination, tableaux, &specht)?) } else { None };
            if let (true, Some(p)) = (options.must_verify(), &expanded) {
                if p.is_zero() || !p.is_homogeneous() || p.total_degree() != Some(degree as u32) {
                    return Err(consistency(format!(
                        "shape {shape}, S = {s}: invariant is not homogeneous of degree {degree}"
                    )));
                }
                if let Some(g) = first_moving_generator(p, group) {
                    return Err(Error::Verification {
                        shape: shape.to_string(),
                        tableau: s.to_string(),
                        generator: g.to_string(),
                    });
                }
            }
            block.push(SecondaryInvariant {
                shape: shape.clone(),
                s: s.clone(),
                degree,
                combination: Arc::clone(combination),
                expanded,
            });
        }
        if options.must_verify() {
            check_block_independence(&block, shape, s)?;
        }
        invariants.extend(block);
        previous = combos;
    }
    Ok(LambdaOutput {
        record: LambdaRecord {
            partition: shape.clone(),
            ambient_dim: factory.dimension(),
            rank: abstract_space.dim(),
            elapsed: start.elapsed(),
        },
        invariants,
    })
}

fn check_block_independence(block: &[SecondaryInvariant], shape: &Partition, s: &StandardTableau) -> Result<()> {
    let polys: Vec<&SparsePolynomial> = block.iter().filter_map(|i| i.expanded.as_ref()).collect();
    let monomials: BTreeSet<&ExponentVector> = polys.iter().flat_map(|p| p.terms().map(|(e, _)| e)).collect();
    let rows: Vec<RationalVector> =
        polys.iter().map(|p| monomials.iter().map(|e| p.coefficient(e)).collect()).collect();
    let rank = rank_of_vectors(&rows);
    if rank != polys.len() {
        return Err(consistency(format!(
            "shape {shape}, S = {s}: {} invariants span only dimension {rank}",
            polys.len()
        )));
    }
    Ok(())
}

/// Runs the full pipeline; see the module docs.
pub fn secondary_invariants(group: &PermutationGroup, options: &EngineOptions) -> Result<SecondaryResult> {
    let start = Instant::now();
    let n = group.degree();
    if options.must_expand() && n > options.expansion_cap {
        return Err(Error::ResourceLimit { what: format!("expansion in degree {n}"), cap: options.expansion_cap });
    }
    let table = multiplicity_table(group)?;
    let ctx = GroupContext::new(group);
    let jobs: Vec<(Partition, u64)> = table.support().map(|e| (e.partition.clone(), e.multiplicity)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?;
    let outputs: Vec<Result<LambdaOutput>> =
        pool.install(|| jobs.par_iter().map(|(shape, m)| run_lambda(&ctx, shape, *m, options)).collect());

    let mut per_lambda = Vec::with_capacity(outputs.len());
    let mut invariants = Vec::new();
    for out in outputs {
        let out = out?;
        per_lambda.push(out.record);
        invariants.extend(out.invariants);
    }
    let total: u128 = per_lambda.iter().map(|r| r.rank as u128 * hook_length_count(&r.partition) as u128).sum();
    let report = EngineReport {
        degree: n,
        generators: group.generators().iter().map(ToString::to_string).collect(),
        group_order: table.group_order,
        strategy: options.resolved_strategy(n),
        per_lambda,
        total,
        total_expected: table.expected_total(),
        elapsed: start.elapsed(),
    };
    if report.total != report.total_expected || invariants.len() as u128 != report.total_expected {
        return Err(consistency(format!(
            "produced {} invariants (rank total {}) but n!/|G| = {}",
            invariants.len(),
            report.total,
            report.total_expected
        )));
    }
    let result = SecondaryResult { invariants, report };
    let numerator = numerator_from_table(&table, ConventionBridge::default())?;
    if result.degree_census() != numerator {
        return Err(consistency(format!(
            "degree census {} differs from the numerator {numerator}",
            result.degree_census()
        )));
    }
    Ok(result)
}
