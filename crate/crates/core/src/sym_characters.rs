//! Irreducible characters of the symmetric group via the Murnaghan–Nakayama
//! rule, and the full character table with an on-disk cache.
//!
//! Convention: `[n]` is the trivial character and `[1^n]` the sign.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{OnceLock, RwLock};

use crate::combinatorics::{partitions, Partition};
use crate::error::{invalid, Error, Result};

/// Largest degree for which character tables are built unless configured otherwise.
pub const DEFAULT_TABLE_CAP: usize = 20;

const CACHE_HEADER: &str = "specht-chartable v1";

type MemoKey = (Vec<usize>, Vec<usize>);

fn memo() -> &'static RwLock<HashMap<MemoKey, i64>> {
    static MEMO: OnceLock<RwLock<HashMap<MemoKey, i64>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `χ^λ(μ)`: the character of the irreducible `λ` on the class of cycle type `μ`.
pub fn mn_character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(invalid(format!(
            "character of {lambda} on {mu}: sizes {} and {} differ",
            lambda.size(),
            mu.size()
        )));
    }
    Ok(character(lambda.parts(), mu.parts()))
}

fn character(lambda: &[usize], mu: &[usize]) -> i64 {
    let Some((&strip, rest)) = mu.split_first() else {
        return 1;
    };
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(&v) = memo().read().unwrap().get(&key) {
        return v;
    }

    // Beta numbers: removing a border strip of length r moves one bead from b to b - r;
    // the sign counts the beads jumped over.
    let len = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut total = 0i64;
    for (i, &b) in beta.iter().enumerate() {
        if b < strip || beta.contains(&(b - strip)) {
            continue;
        }
        let target = b - strip;
        let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut moved = beta.clone();
        moved[i] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let smaller: Vec<usize> =
            moved.iter().enumerate().map(|(j, &x)| x - (len - 1 - j)).filter(|&p| p > 0).collect();
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        total += sign * character(&smaller, rest);
    }

    memo().write().unwrap().insert(key, total);
    total
}

/// `n! / ∏_j (j^{a_j} a_j!)`, the number of permutations of cycle type `μ`.
pub fn class_size(mu: &Partition) -> u128 {
    let n = mu.size() as u128;
    let mut denom: u128 = 1;
    let mut i = 0;
    let parts = mu.parts();
    while i < parts.len() {
        let j = parts[i];
        let run = parts[i..].iter().take_while(|&&x| x == j).count();
        denom *= (j as u128).pow(run as u32) * (1..=run as u128).product::<u128>();
        i += run;
    }
    (1..=n).product::<u128>() / denom
}

/// Square table of `χ^λ(μ)` with rows and columns in canonical partition order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    n: usize,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    /// Builds the table for degree `n` under the default cap.
    pub fn compute(n: usize) -> Result<Self> {
        Self::compute_with_cap(n, DEFAULT_TABLE_CAP)
    }

    pub fn compute_with_cap(n: usize, cap: usize) -> Result<Self> {
        if n > cap {
            return Err(Error::ResourceLimit { what: format!("character table degree {n}"), cap });
        }
        let parts = partitions(n)?;
        let values = parts.iter().map(|l| parts.iter().map(|m| character(l.parts(), m.parts())).collect()).collect();
        Ok(Self::from_values(n, parts, values))
    }

    fn from_values(n: usize, partitions: Vec<Partition>, values: Vec<Vec<i64>>) -> Self {
        let index = partitions.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        CharacterTable { n, partitions, index, values }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Row labels (irreducibles) and column labels (cycle types); both canonical.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn values(&self) -> &[Vec<i64>] {
        &self.values
    }

    /// `χ^λ(μ)`, or `None` if either label is not a partition of this degree.
    pub fn value(&self, lambda: &Partition, mu: &Partition) -> Option<i64> {
        Some(self.values[*self.index.get(lambda)?][*self.index.get(mu)?])
    }

    /// The cache-file text: a header line then one row of integers per irreducible.
    pub fn to_cache_string(&self) -> String {
        let mut out = format!("{CACHE_HEADER} n={}\n", self.n);
        for row in &self.values {
            let line: Vec<String> = row.iter().map(i64::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_cache_string(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        let n: usize = header
            .strip_prefix(CACHE_HEADER)
            .and_then(|rest| rest.trim().strip_prefix("n="))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| invalid(format!("bad character table header {header:?}")))?;
        let parts = partitions(n)?;
        let values: Vec<Vec<i64>> = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split_whitespace().map(str::parse).collect::<Result<Vec<i64>, _>>())
            .collect::<Result<_, _>>()
            .map_err(|e| invalid(format!("bad character table entry: {e}")))?;
        if values.len() != parts.len() || values.iter().any(|r| r.len() != parts.len()) {
            return Err(invalid(format!("character table for n={n} is not {0}x{0}", parts.len())));
        }
        Ok(Self::from_values(n, parts, values))
    }

    pub fn cache_path(dir: &Path, n: usize) -> PathBuf {
        dir.join(format!("chartable-{n}.txt"))
    }
}

/// Loads the table for `n` from `cache_dir` if present, otherwise computes it
/// and writes the cache file.
pub fn character_table_cached(n: usize, cache_dir: Option<&Path>) -> Result<CharacterTable> {
    let Some(dir) = cache_dir else {
        return CharacterTable::compute(n);
    };
    let path = CharacterTable::cache_path(dir, n);
    if let Ok(text) = fs::read_to_string(&path) {
        let table = CharacterTable::from_cache_string(&text)?;
        if table.degree() == n {
            return Ok(table);
        }
    }
    let table = CharacterTable::compute(n)?;
    fs::create_dir_all(dir)?;
    fs::write(&path, table.to_cache_string())?;
    Ok(table)
}
