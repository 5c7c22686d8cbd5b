//! Dense univariate polynomials over a [`BaseField`], constant term first.
//!
//! These back the extension-field modulus search and the extended Euclidean
//! inverse. A polynomial is normalized when it has no trailing zero
//! coefficients; the zero polynomial is the empty vector.

use super::{BaseField, Field};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Poly = Vec<u32>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(f: &BaseField, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            f.add(&x, &y)
        })
        .collect();
    trim(out)
}

pub fn sub(f: &BaseField, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            f.sub(&x, &y)
        })
        .collect();
    trim(out)
}

pub fn mul(f: &BaseField, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = f.mul(x, y);
            out[i + j] = f.add(&out[i + j], &t);
        }
    }
    trim(out)
}

/// Quotient and remainder of `a / b`. Panics if `b` is zero.
pub fn divrem(f: &BaseField, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut rem = trim(a.to_vec());
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u32; rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = f.mul(&rem[dr], &lead_inv);
        let shift = dr - db;
        quot[shift] = c;
        for (j, bj) in b[..=db].iter().enumerate() {
            let t = f.mul(&c, bj);
            rem[shift + j] = f.sub(&rem[shift + j], &t);
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

pub fn rem(f: &BaseField, a: &[u32], b: &[u32]) -> Poly {
    divrem(f, a, b).1
}

/// Monic greatest common divisor (zero if both inputs are zero).
pub fn gcd(f: &BaseField, a: &[u32], b: &[u32]) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    make_monic(f, a)
}

pub fn make_monic(f: &BaseField, a: Poly) -> Poly {
    match degree(&a) {
        None => a,
        Some(d) => {
            let inv = f.inv(&a[d]).expect("nonzero leading coefficient");
            a.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

pub fn mulmod(f: &BaseField, a: &[u32], b: &[u32], m: &[u32]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &BaseField, a: &[u32], mut exp: u64, m: &[u32]) -> Poly {
    let mut acc = rem(f, &[1], m);
    let mut sq = rem(f, a, m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(f, &acc, &sq, m);
        }
        exp >>= 1;
        if exp > 0 {
            sq = mulmod(f, &sq, &sq, m);
        }
    }
    acc
}

/// Rabin's irreducibility test for a polynomial of degree `d ≥ 1`:
/// `x^(q^d) ≡ x (mod f)` and `gcd(x^(q^(d/ℓ)) - x, f) = 1` for every prime
/// `ℓ | d`.
pub fn is_irreducible(f: &BaseField, poly: &[u32]) -> bool {
    let poly = trim(poly.to_vec());
    let d = match degree(&poly) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    let q = f.size() as u64;
    let x = rem(f, &[0, 1], &poly);
    // h = x^(q^i) mod poly; every d/ℓ is at most d/2, so checking all i up
    // to d/2 covers the gcd conditions and rejects small factors early
    let mut h = x.clone();
    for i in 1..=d {
        h = powmod(f, &h, q, &poly);
        if i <= d / 2 && gcd(f, &sub(f, &h, &x), &poly) != [1] {
            return false;
        }
    }
    h == x
}

/// Candidates tested in counter order before [`find_irreducible`] switches
/// to pseudo-random candidates.
pub const SCAN_LIMIT: u64 = 1 << 17;

/// The first monic irreducible polynomial of the given degree in scan order.
///
/// Candidates `x^d + c_{d-1} x^{d-1} + ... + c_0` are visited with the
/// coefficient vector `(c_0, ..., c_{d-1})` read as a base-`q` integer
/// counting upward, so the constant term varies fastest. The result is
/// returned constant term first and includes the leading `1`.
///
/// In characteristic 2 the sparse candidates at the start of this order are
/// all reducible for some even degrees (`x^4 + c = (x + c^(1/4))^4`, and
/// similar families), and over large bases the first irreducible lies
/// billions of candidates away. After [`SCAN_LIMIT`] tested candidates the
/// search therefore continues with coefficient vectors drawn from ChaCha8
/// seeded with 0, which stays deterministic.
pub fn find_irreducible(f: &BaseField, degree: usize) -> Vec<u32> {
    assert!(degree >= 1, "irreducible polynomials have degree at least 1");
    let q = f.size();
    let mut cand = vec![0u32; degree + 1];
    cand[degree] = 1;
    let mut tested = 0u64;
    'counter: while tested < SCAN_LIMIT {
        // degree > 1 with a zero constant term is divisible by x
        if degree == 1 || cand[0] != 0 {
            tested += 1;
            if is_irreducible(f, &cand) {
                return cand;
            }
        }
        let mut i = 0;
        loop {
            if i == degree {
                break 'counter;
            }
            cand[i] += 1;
            if cand[i] < q {
                break;
            }
            cand[i] = 0;
            i += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    loop {
        for c in cand.iter_mut().take(degree) {
            *c = rng.gen_range(0..q);
        }
        if is_irreducible(f, &cand) {
            return cand;
        }
    }
}
