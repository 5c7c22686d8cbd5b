//! The column matroid of a generator matrix.
//!
//! A set of columns is a *circuit* when it is dependent but every proper
//! subset is independent. In a rank-`k` matroid circuits have at most `k+1`
//! elements; those of size exactly `k+1` are called trivial. A family of
//! circuits has a *non-trivial union* when no member is contained in the
//! union of the others.
//!
//! `μ` is the least positive `m` such that every non-trivial union of `m`
//! circuits has at least `k+m` elements, and the minimum distance of the
//! code is `n - k - μ + 2`. [`distance_oracle`] computes the same number from
//! codeword weights, independently of circuits.
//!
//! Column sets are handled as `u64` bitmasks, so at most 64 columns are
//! supported.

use crate::field::{linalg, Field, Matrix};
use itertools::Itertools;
use serde::Serialize;

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const MAX_COLUMNS: usize = 64;
pub const ORACLE_MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatroidError {
    #[error("combinatorial budget of {limit} evaluations exhausted")]
    CapExceeded { limit: u64 },
    #[error("n = {n} exceeds the limit of {max} for this computation")]
    TooLarge { n: usize, max: usize },
    #[error("the matrix has rank 0")]
    ZeroRank,
}

/// Counts subset or family evaluations against a fixed limit.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    fn tick(&mut self) -> Result<(), MatroidError> {
        if self.used >= self.limit {
            return Err(MatroidError::CapExceeded { limit: self.limit });
        }
        self.used += 1;
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Circuit {
    members: Vec<usize>,
    size: usize,
}

impl Circuit {
    fn from_mask(mask: u64) -> Self {
        let members = mask_members(mask);
        Circuit { size: members.len(), members }
    }

    /// Sorted 0-based column indices.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mask(&self) -> u64 {
        members_mask(&self.members)
    }
}

fn members_mask(members: &[usize]) -> u64 {
    members.iter().fold(0, |m, &i| m | 1 << i)
}

fn mask_members(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

fn check_columns(n: usize) -> Result<(), MatroidError> {
    if n > MAX_COLUMNS {
        return Err(MatroidError::TooLarge { n, max: MAX_COLUMNS });
    }
    Ok(())
}

/// All circuits with at most `size_cap` elements (capped at `rank + 1`),
/// ordered by size and then lexicographically. Each examined subset costs
/// one unit of `budget`.
pub fn enumerate_circuits<F: Field>(
    f: &F,
    g: &Matrix<F::Elem>,
    size_cap: usize,
    budget: &mut Budget,
) -> Result<Vec<Circuit>, MatroidError> {
    let n = g.cols();
    check_columns(n)?;
    let cap = size_cap.min(linalg::rank(f, g) + 1).min(n);
    let mut found: Vec<u64> = Vec::new();
    for size in 1..=cap {
        for cols in (0..n).combinations(size) {
            budget.tick()?;
            let mask = members_mask(&cols);
            // a dependent proper subset would contain an already found circuit
            if found.iter().any(|&known| known & !mask == 0) {
                continue;
            }
            if linalg::rank_of(f, g, &cols) < size {
                found.push(mask);
            }
        }
    }
    Ok(found.into_iter().map(Circuit::from_mask).collect())
}

/// Whether no member of `family` is contained in the union of the others.
pub fn is_nontrivial_union(family: &[u64]) -> bool {
    (0..family.len()).all(|i| {
        let others = family.iter().enumerate().filter(|&(j, _)| j != i).fold(0, |u, (_, &c)| u | c);
        family[i] & !others != 0
    })
}

/// Searches for `m` circuits with a non-trivial union of fewer than `k + m`
/// elements and returns the indices (into `circuits`) of the first such
/// family in lexicographic order.
///
/// A non-trivial family stays non-trivial when members are removed, and each
/// added member grows the union by at least one element, so a partial family
/// of `j` circuits whose union has `k + j` or more elements cannot be
/// extended into a violating one and is pruned.
pub fn find_small_union(
    circuits: &[u64],
    k: usize,
    m: usize,
    budget: &mut Budget,
) -> Result<Option<Vec<usize>>, MatroidError> {
    fn dfs(
        circuits: &[u64],
        k: usize,
        m: usize,
        start: usize,
        family: &mut Vec<usize>,
        union: u64,
        budget: &mut Budget,
    ) -> Result<bool, MatroidError> {
        for c in start..circuits.len() {
            let new = circuits[c];
            if new & !union == 0 {
                continue;
            }
            budget.tick()?;
            // every earlier member must keep a private element
            let keeps_private = family.iter().all(|&i| {
                let others = family.iter().filter(|&&j| j != i).fold(new, |u, &j| u | circuits[j]);
                circuits[i] & !others != 0
            });
            if !keeps_private {
                continue;
            }
            let grown = union | new;
            let j = family.len() + 1;
            if grown.count_ones() as usize >= k + j {
                continue;
            }
            family.push(c);
            if j == m || dfs(circuits, k, m, c + 1, family, grown, budget)? {
                return Ok(true);
            }
            family.pop();
        }
        Ok(false)
    }
    let mut family = Vec::with_capacity(m);
    Ok(dfs(circuits, k, m, 0, &mut family, 0, budget)?.then_some(family))
}

/// `μ` of the column matroid of `g`, from its full circuit list.
pub fn compute_mu<F: Field>(f: &F, g: &Matrix<F::Elem>, budget: &mut Budget) -> Result<usize, MatroidError> {
    let k = linalg::rank(f, g);
    let circuits = enumerate_circuits(f, g, k + 1, budget)?;
    mu_from_circuits(&circuits, g.cols(), k, budget)
}

pub fn mu_from_circuits(circuits: &[Circuit], n: usize, k: usize, budget: &mut Budget) -> Result<usize, MatroidError> {
    let masks: Vec<u64> = circuits.iter().map(Circuit::mask).collect();
    for m in 1..=n {
        if find_small_union(&masks, k, m, budget)?.is_none() {
            return Ok(m);
        }
    }
    Ok(n + 1)
}

/// `n - k - μ + 2`, with `k` the rank of `g`.
pub fn distance_via_mu<F: Field>(f: &F, g: &Matrix<F::Elem>, budget: &mut Budget) -> Result<usize, MatroidError> {
    let k = linalg::rank(f, g);
    if k == 0 {
        return Err(MatroidError::ZeroRank);
    }
    let mu = compute_mu(f, g, budget)?;
    Ok(g.cols() + 2 - k - mu)
}

/// Exact minimum distance `n - max{|T| : rank(G_T) ≤ k-1}`.
///
/// A largest such `T` is the zero set of a minimum-weight codeword, and it is
/// spanned by `k-1` independent columns. So it is enough to take, for every
/// `(k-1)`-subset `S` of rank `k-1`, the codeword `x·G` with `x·G_S = 0`
/// (unique up to scaling) and record its weight.
pub fn distance_oracle<F: Field>(f: &F, g: &Matrix<F::Elem>) -> Result<usize, MatroidError> {
    let n = g.cols();
    if n > ORACLE_MAX_N {
        return Err(MatroidError::TooLarge { n, max: ORACLE_MAX_N });
    }
    let basis = row_basis(f, g);
    let k = basis.rows();
    if k == 0 {
        return Err(MatroidError::ZeroRank);
    }
    let mut best = n;
    for s in (0..n).combinations(k - 1) {
        let ker = linalg::kernel(f, &basis.select_columns(&s).transpose());
        if ker.len() != 1 {
            continue;
        }
        let weight = linalg::vec_mul(f, &ker[0], &basis).iter().filter(|c| !f.is_zero(c)).count();
        best = best.min(weight);
    }
    Ok(best)
}

/// The rows of `g` kept by a leftmost greedy scan, spanning its row space.
fn row_basis<F: Field>(f: &F, g: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let t = g.transpose();
    let rows = linalg::greedy_independent_columns(f, &t, &(0..g.rows()).collect::<Vec<_>>(), g.rows());
    Matrix::from_rows(rows.iter().map(|&i| g.row(i).to_vec()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// No circuit of size at most `r + 1` contains this index.
    UncoveredIndex { index: usize },
    /// A non-trivial union of `⌈k/r⌉` circuits with fewer than `k + ⌈k/r⌉`
    /// elements.
    SmallUnion { circuits: Vec<Vec<usize>>, union: Vec<usize> },
    /// The exact distance differs from the bound for the given `r` and `δ`.
    Distance { found: usize, bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptimalityVerdict {
    pub optimal: bool,
    pub witness: Option<Witness>,
    /// All non-trivial circuits have size `r + 1` and partition the columns.
    pub circuit_partition: bool,
}

fn div_ceil(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Checks whether `g` is an optimal LRC for locality `r` (and `δ`).
///
/// For `δ = 2`: every index must lie in a circuit of at most `r + 1`
/// elements, and every non-trivial union of `⌈k/r⌉` circuits must have at
/// least `k + ⌈k/r⌉` elements. For `δ > 2` the exact distance must equal
/// `n - k + 1 - (⌈k/r⌉ - 1)(δ - 1)`, which requires `n ≤ 20`.
pub fn verify_optimal_lrc<F: Field>(
    f: &F,
    g: &Matrix<F::Elem>,
    r: usize,
    delta: usize,
    budget: &mut Budget,
) -> Result<OptimalityVerdict, MatroidError> {
    let k = linalg::rank(f, g);
    if k == 0 {
        return Err(MatroidError::ZeroRank);
    }
    let circuits = enumerate_circuits(f, g, k + 1, budget)?;
    verdict_from_circuits(f, g, &circuits, k, r, delta, budget)
}

fn verdict_from_circuits<F: Field>(
    f: &F,
    g: &Matrix<F::Elem>,
    circuits: &[Circuit],
    k: usize,
    r: usize,
    delta: usize,
    budget: &mut Budget,
) -> Result<OptimalityVerdict, MatroidError> {
    let n = g.cols();
    let circuit_partition = {
        let nontrivial: Vec<&Circuit> = circuits.iter().filter(|c| c.size() <= k).collect();
        let mut seen = 0u64;
        let disjoint = nontrivial.iter().all(|c| {
            let m = c.mask();
            let ok = c.size() == r + 1 && seen & m == 0;
            seen |= m;
            ok
        });
        disjoint && seen.count_ones() as usize == n
    };
    let verdict =
        |witness: Option<Witness>| OptimalityVerdict { optimal: witness.is_none(), witness, circuit_partition };

    if delta > 2 {
        let found = distance_oracle(f, g)?;
        let loss = (div_ceil(k, r) - 1) * (delta - 1);
        let bound = (n + 1).saturating_sub(k + loss);
        return Ok(verdict((found != bound).then_some(Witness::Distance { found, bound })));
    }

    let covered = circuits.iter().filter(|c| c.size() <= r + 1).fold(0u64, |u, c| u | c.mask());
    if let Some(index) = (0..n).find(|i| covered >> i & 1 == 0) {
        return Ok(verdict(Some(Witness::UncoveredIndex { index })));
    }
    let masks: Vec<u64> = circuits.iter().map(Circuit::mask).collect();
    let witness = find_small_union(&masks, k, div_ceil(k, r), budget)?.map(|family| {
        let union = family.iter().fold(0, |u, &i| u | masks[i]);
        Witness::SmallUnion {
            circuits: family.iter().map(|&i| circuits[i].members.clone()).collect(),
            union: mask_members(union),
        }
    });
    Ok(verdict(witness))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatroidReport {
    pub n: usize,
    pub k: usize,
    pub circuits: Vec<Circuit>,
    pub mu: usize,
    pub d_formula: usize,
    /// `None` when `n` exceeds the oracle limit.
    pub d_oracle: Option<usize>,
    /// Present when a locality `(r, δ)` was supplied.
    pub optimal_lrc: Option<OptimalityVerdict>,
}

impl MatroidReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Circuits, `μ`, both distances and, if `locality = Some((r, δ))`, the
/// optimality verdict.
pub fn matroid_report<F: Field>(
    f: &F,
    g: &Matrix<F::Elem>,
    locality: Option<(usize, usize)>,
    budget: &mut Budget,
) -> Result<MatroidReport, MatroidError> {
    let n = g.cols();
    let k = linalg::rank(f, g);
    if k == 0 {
        return Err(MatroidError::ZeroRank);
    }
    let circuits = enumerate_circuits(f, g, k + 1, budget)?;
    let mu = mu_from_circuits(&circuits, n, k, budget)?;
    let d_oracle = if n <= ORACLE_MAX_N { Some(distance_oracle(f, g)?) } else { None };
    let optimal_lrc = match locality {
        Some((r, delta)) => Some(verdict_from_circuits(f, g, &circuits, k, r, delta, budget)?),
        None => None,
    };
    Ok(MatroidReport { n, k, circuits, mu, d_formula: n + 2 - k - mu, d_oracle, optimal_lrc })
}
