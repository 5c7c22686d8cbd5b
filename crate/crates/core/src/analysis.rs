//! Probability that `k` symbols chosen uniformly at random suffice to decode.
//!
//! For the δ = 2 construction the only undecodable `k`-subsets are those
//! containing a whole repair group. With `A_i` the event "the subset contains
//! group `i`", inclusion–exclusion over the `n/(r+1)` groups gives
//!
//! ```text
//! P_dec = 1 - Σ_{j≥1} (-1)^(j+1) C(n/(r+1), j) C(n - j(r+1), k - j(r+1)) / C(n, k)
//! ```
//!
//! [`pdec_brute`] counts full-rank `k`-subsets of an actual generator and
//! [`pdec_monte_carlo`] samples them.

use crate::construction::GeneratorMatrix;
use crate::field::{linalg, Field, Matrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

pub const BRUTE_MAX_N: usize = 14;
/// Trials per independently seeded stream in [`pdec_monte_carlo`].
pub const MONTE_CARLO_CHUNK: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("n = {n} exceeds the exhaustive limit of {max}")]
    TooLarge { n: usize, max: usize },
}

fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

fn check_params(n: usize, k: usize, r: usize) -> Result<(), AnalysisError> {
    if r == 0 || !n.is_multiple_of(r + 1) {
        return Err(AnalysisError::Params(format!("r + 1 = {} must divide n = {n}", r + 1)));
    }
    if k == 0 || k > n {
        return Err(AnalysisError::Params(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    Ok(())
}

/// Exact `P_dec` by inclusion–exclusion over the repair groups.
pub fn pdec_exact(n: usize, k: usize, r: usize) -> Result<BigRational, AnalysisError> {
    check_params(n, k, r)?;
    let (n, k, g) = (n as i64, k as i64, (r + 1) as i64);
    let mut union = BigInt::zero();
    for j in 1..=n / g {
        let term = binom(n / g, j) * binom(n - j * g, k - j * g);
        if j % 2 == 1 {
            union += term;
        } else {
            union -= term;
        }
    }
    Ok(BigRational::one() - BigRational::new(union, binom(n, k)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBounds {
    /// `1 - (n/(r+1)) C(n-(r+1), k-(r+1)) / C(n, k)`
    pub union_bound: BigRational,
    /// `1 - (n/(r+1)) (k/n)^(r+1)`, weaker than `union_bound`.
    pub power_bound: BigRational,
}

/// The two union-bound forms of the lower bound on `P_dec`.
pub fn pdec_lower_bound(n: usize, k: usize, r: usize) -> Result<LowerBounds, AnalysisError> {
    check_params(n, k, r)?;
    let groups = BigInt::from(n / (r + 1));
    let (ni, ki, g) = (n as i64, k as i64, (r + 1) as i64);
    let union_bound = BigRational::one() - BigRational::new(groups.clone() * binom(ni - g, ki - g), binom(ni, ki));
    let ratio = BigRational::new(BigInt::from(k), BigInt::from(n));
    let power_bound = BigRational::one() - BigRational::from_integer(groups) * num_traits::pow(ratio, r + 1);
    Ok(LowerBounds { union_bound, power_bound })
}

/// Fraction of `k`-subsets of the columns of `g` with rank `k`, by checking
/// every subset.
pub fn pdec_brute<F: Field>(f: &F, g: &Matrix<F::Elem>, k: usize) -> Result<BigRational, AnalysisError> {
    let n = g.cols();
    if n > BRUTE_MAX_N {
        return Err(AnalysisError::TooLarge { n, max: BRUTE_MAX_N });
    }
    if k == 0 || k > n {
        return Err(AnalysisError::Params(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let subsets: Vec<Vec<usize>> = itertools::Itertools::combinations(0..n, k).collect();
    let good = subsets.par_iter().filter(|s| linalg::rank_of(f, g, s) == k).count();
    Ok(BigRational::new(BigInt::from(good), BigInt::from(subsets.len())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarlo {
    pub estimate: f64,
    pub successes: u64,
    pub trials: u64,
    pub seed: u64,
}

impl MonteCarlo {
    /// Binomial standard deviation `sqrt(p(1-p)/trials)` around `p`.
    pub fn sigma(p: f64, trials: u64) -> f64 {
        (p * (1.0 - p) / trials as f64).sqrt()
    }
}

/// Samples `trials` uniform `k`-subsets and reports the full-rank fraction.
///
/// Trials are split into chunks of [`MONTE_CARLO_CHUNK`]; chunk `c` draws
/// from a ChaCha8 generator seeded with `seed` on stream `c`, taking each
/// subset as the prefix of a partial Fisher–Yates shuffle of `0..n`. The
/// result depends only on `seed` and `trials`, not on thread scheduling.
pub fn pdec_monte_carlo<F: Field>(
    f: &F,
    g: &Matrix<F::Elem>,
    k: usize,
    trials: u64,
    seed: u64,
) -> Result<MonteCarlo, AnalysisError> {
    let n = g.cols();
    if trials == 0 {
        return Err(AnalysisError::Params("need at least one trial".into()));
    }
    if k == 0 || k > n {
        return Err(AnalysisError::Params(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let chunks = trials.div_ceil(MONTE_CARLO_CHUNK);
    let successes: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = MONTE_CARLO_CHUNK.min(trials - c * MONTE_CARLO_CHUNK);
            let mut idx: Vec<usize> = (0..n).collect();
            let mut ok = 0u64;
            for _ in 0..count {
                let (chosen, _) = idx.partial_shuffle(&mut rng, k);
                if linalg::rank_of(f, g, chosen) == k {
                    ok += 1;
                }
            }
            ok
        })
        .sum();
    Ok(MonteCarlo { estimate: successes as f64 / trials as f64, successes, trials, seed })
}

/// An exact probability, serialized as numerator/denominator strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact(pub BigRational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            numerator: String,
            denominator: String,
            approx: f64,
        }
        Repr {
            numerator: self.0.numer().to_string(),
            denominator: self.0.denom().to_string(),
            approx: self.0.to_f64().unwrap_or(f64::NAN),
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodabilityReport {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub p_exact: Exact,
    pub p_lower_bound: Exact,
    pub p_power_bound: Exact,
    pub p_brute: Option<Exact>,
    /// `Some(false)` flags a generator whose exhaustive count disagrees with
    /// the group-containment formula.
    pub brute_matches_exact: Option<bool>,
    pub p_monte_carlo: Option<MonteCarlo>,
}

impl DecodabilityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Formulas for the code's `(n, k, r)`, the exhaustive count when
/// `n ≤ 14`, and a Monte Carlo estimate when `trials > 0`.
///
/// The formulas describe `δ = 2`. For larger `δ` they are evaluated with
/// groups of `r + δ - 1` symbols, and only the sampled and exhaustive values
/// describe the code.
pub fn decodability_report(gm: &GeneratorMatrix, trials: u64, seed: u64) -> Result<DecodabilityReport, AnalysisError> {
    let p = gm.params();
    decodability_report_for(gm.field(), gm.matrix(), p.k(), p.r(), p.group_size(), trials, seed)
}

/// [`decodability_report`] for an arbitrary generator whose columns form
/// consecutive repair groups of `group_size`.
pub fn decodability_report_for<F: Field>(
    f: &F,
    g: &Matrix<F::Elem>,
    k: usize,
    r: usize,
    group_size: usize,
    trials: u64,
    seed: u64,
) -> Result<DecodabilityReport, AnalysisError> {
    let n = g.cols();
    if group_size == 0 {
        return Err(AnalysisError::Params("group size must be positive".into()));
    }
    let exact = pdec_exact(n, k, group_size - 1)?;
    let bounds = pdec_lower_bound(n, k, group_size - 1)?;
    let brute = if n <= BRUTE_MAX_N { Some(pdec_brute(f, g, k)?) } else { None };
    let mc = if trials > 0 { Some(pdec_monte_carlo(f, g, k, trials, seed)?) } else { None };
    Ok(DecodabilityReport {
        n,
        k,
        r,
        brute_matches_exact: brute.as_ref().map(|b| *b == exact),
        p_exact: Exact(exact),
        p_lower_bound: Exact(bounds.union_bound),
        p_power_bound: Exact(bounds.power_bound),
        p_brute: brute.map(Exact),
        p_monte_carlo: mc,
    })
}
