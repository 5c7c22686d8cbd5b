use super::{Field, FieldError};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Polynomial in `ω` with arbitrary-precision integer coefficients, constant
/// term first and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(exp: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); exp + 1];
        coeffs[exp] = BigInt::one();
        IntPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        IntPoly::from_coeffs(
            (0..n).map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)).collect(),
        )
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }

    /// Evaluates at `w` after mapping each integer coefficient into `f`.
    pub fn eval<F: Field>(&self, f: &F, w: &F::Elem) -> F::Elem {
        let ch = BigInt::from(f.characteristic());
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            let mut r = c % &ch;
            if r.is_negative() {
                r += &ch;
            }
            let c = f.integer(r.to_u64().expect("reduced below characteristic"));
            acc = f.add(&f.mul(&acc, w), &c);
        }
        acc
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "ω")?,
                (1, false) => write!(f, "{a}ω")?,
                (_, true) => write!(f, "ω^{i}")?,
                (_, false) => write!(f, "{a}ω^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// A matrix whose entries are either `0` (`None`) or a power `ω^j`
/// (`Some(j)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Option<u64>>,
}

impl PatternMatrix {
    pub fn from_rows(rows: Vec<Vec<Option<u64>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PatternMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u64> {
        self.entries[i * self.cols + j]
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let rows = (0..self.rows).map(|i| cols.iter().map(|&j| self.get(i, j)).collect()).collect();
        PatternMatrix::from_rows(rows)
    }

    pub fn max_exponent(&self) -> Option<u64> {
        self.entries.iter().flatten().copied().max()
    }
}

/// Non-square permanent of an `r × t` pattern (`t ≤ r`): the sum over all
/// injective assignments of columns to rows of the product of the selected
/// entries, as a polynomial in `ω` over the integers.
///
/// Every entry is `0` or a monomial, so each assignment contributes either
/// nothing or a single `ω^(sum of exponents)`. The sum is accumulated column
/// by column over subsets of used rows.
pub fn intpoly_permanent(b: &PatternMatrix) -> Result<IntPoly, FieldError> {
    if b.cols > b.rows {
        return Err(FieldError::Shape(format!(
            "permanent needs at most as many columns as rows, got {}x{}",
            b.rows, b.cols
        )));
    }
    if b.rows > 63 {
        return Err(FieldError::Shape("permanent supports at most 63 rows".into()));
    }
    // used-row mask -> (exponent -> number of assignments)
    let mut states: HashMap<u64, BTreeMap<u64, BigInt>> = HashMap::new();
    states.insert(0, BTreeMap::from([(0, BigInt::one())]));
    for col in 0..b.cols {
        let mut next: HashMap<u64, BTreeMap<u64, BigInt>> = HashMap::new();
        for (mask, terms) in &states {
            for row in 0..b.rows {
                if mask >> row & 1 == 1 {
                    continue;
                }
                let Some(e) = b.get(row, col) else { continue };
                let slot = next.entry(mask | 1 << row).or_default();
                for (exp, count) in terms {
                    *slot.entry(exp + e).or_default() += count;
                }
            }
        }
        states = next;
    }
    let mut total: BTreeMap<u64, BigInt> = BTreeMap::new();
    for terms in states.into_values() {
        for (exp, count) in terms {
            *total.entry(exp).or_default() += count;
        }
    }
    let Some(&top) = total.keys().next_back() else {
        return Ok(IntPoly::zero());
    };
    let mut coeffs = vec![BigInt::zero(); top as usize + 1];
    for (exp, count) in total {
        coeffs[exp as usize] = count;
    }
    Ok(IntPoly::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::BaseField;
    use proptest::prelude::*;

    fn w(e: u64) -> Option<u64> {
        Some(e)
    }

    #[test]
    fn three_by_two_example() {
        let b = PatternMatrix::from_rows(vec![vec![w(0), None], vec![w(1), w(0)], vec![None, w(1)]]);
        assert_eq!(intpoly_permanent(&b).unwrap(), IntPoly::from_i64s(&[1, 1, 1]));
        assert_eq!(intpoly_permanent(&b).unwrap().to_string(), "ω^2 + ω + 1");
    }

    #[test]
    fn block_example_from_standard_local_code() {
        // columns 1, 2, 4, 5 of the 4x5 bidiagonal pattern
        let b = PatternMatrix::from_rows(vec![
            vec![w(0), w(1), None, None],
            vec![None, w(0), None, None],
            vec![None, None, w(1), None],
            vec![None, None, w(0), w(1)],
        ]);
        assert_eq!(intpoly_permanent(&b).unwrap(), IntPoly::monomial(2));
    }

    #[test]
    fn identity_and_shape_error() {
        let id = PatternMatrix::from_rows((0..4).map(|i| (0..4).map(|j| (i == j).then_some(0)).collect()).collect());
        assert_eq!(intpoly_permanent(&id).unwrap(), IntPoly::one());
        let wide = PatternMatrix::from_rows(vec![vec![w(0), w(0)]]);
        assert!(matches!(intpoly_permanent(&wide), Err(FieldError::Shape(_))));
        let zero = PatternMatrix::from_rows(vec![vec![None], vec![None]]);
        assert!(intpoly_permanent(&zero).unwrap().is_zero());
    }

    #[test]
    fn repeated_monomials_are_not_monic() {
        let b = PatternMatrix::from_rows(vec![vec![w(1), w(1)], vec![w(1), w(1)]]);
        let p = intpoly_permanent(&b).unwrap();
        assert_eq!(p, IntPoly::from_i64s(&[0, 0, 2]));
        assert!(!p.is_monic());
    }

    /// Permanent of a square field matrix by cofactor expansion with every
    /// sign set to `+`.
    fn unsigned_expansion(f: &BaseField, m: &[Vec<u32>]) -> u32 {
        use crate::field::Field;
        let n = m.len();
        if n == 0 {
            return 1;
        }
        let mut acc = 0;
        for j in 0..n {
            let minor: Vec<Vec<u32>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                .collect();
            acc = f.add(&acc, &f.mul(&m[0][j], &unsigned_expansion(f, &minor)));
        }
        acc
    }

    fn pattern() -> impl Strategy<Value = Vec<Vec<Option<u64>>>> {
        (1usize..=4).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(prop::option::of(0u64..6), n), n))
    }

    proptest! {
        #[test]
        fn specialization_matches_unsigned_expansion(rows in pattern(), at in 0u32..13) {
            use crate::field::Field;
            let f = BaseField::prime(13).unwrap();
            let b = PatternMatrix::from_rows(rows.clone());
            let perm = intpoly_permanent(&b).unwrap();
            let m: Vec<Vec<u32>> = rows
                .iter()
                .map(|row| row.iter().map(|e| e.map_or(0, |e| f.pow(&at, e))).collect())
                .collect();
            prop_assert_eq!(perm.eval(&f, &at), unsigned_expansion(&f, &m));
        }
    }
}
