use super::ParamError;
use crate::field::{intpoly_permanent, IntPoly, PatternMatrix};
use itertools::Itertools;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalCodeKind {
    /// Bidiagonal `r × (r+1)` pattern: `1` on the diagonal, `ω` just above.
    Standard,
    /// `ω^((i-1)·r^j)` at row `i`, column `j` (both 1-indexed).
    Generalized,
    /// Caller-supplied pattern.
    Custom,
}

/// Generator pattern of the `(r+δ-1, r)` local code applied to every group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalCode {
    r: usize,
    delta: usize,
    pattern: PatternMatrix,
    max_exponent: u64,
    kind: LocalCodeKind,
}

impl LocalCode {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn group_size(&self) -> usize {
        self.r + self.delta - 1
    }

    pub fn pattern(&self) -> &PatternMatrix {
        &self.pattern
    }

    /// Largest `ω` exponent among the entries (`a`).
    pub fn max_exponent(&self) -> u64 {
        self.max_exponent
    }

    pub fn kind(&self) -> LocalCodeKind {
        self.kind
    }

    /// Wraps an arbitrary `r × (r+δ-1)` pattern. It is only usable by the
    /// construction after [`verify_monic_permanents`] certifies it.
    pub fn custom(r: usize, delta: usize, pattern: PatternMatrix) -> Result<Self, ParamError> {
        if r < 2 || delta < 2 {
            return Err(ParamError::LocalCode(format!("need r >= 2 and delta >= 2, got r={r}, delta={delta}")));
        }
        if pattern.rows() != r || pattern.cols() != r + delta - 1 {
            return Err(ParamError::LocalCode(format!(
                "pattern is {}x{}, expected {}x{}",
                pattern.rows(),
                pattern.cols(),
                r,
                r + delta - 1
            )));
        }
        let max_exponent = pattern.max_exponent().unwrap_or(0);
        Ok(LocalCode { r, delta, pattern, max_exponent, kind: LocalCodeKind::Custom })
    }
}

pub fn build_local_code(r: usize) -> Result<LocalCode, ParamError> {
    if r < 2 {
        return Err(ParamError::LocalCode(format!("local code needs r >= 2, got {r}")));
    }
    let rows = (0..r)
        .map(|i| {
            (0..=r)
                .map(|j| match j.wrapping_sub(i) {
                    0 => Some(0),
                    1 => Some(1),
                    _ => None,
                })
                .collect()
        })
        .collect();
    Ok(LocalCode {
        r,
        delta: 2,
        pattern: PatternMatrix::from_rows(rows),
        max_exponent: 1,
        kind: LocalCodeKind::Standard,
    })
}

pub fn build_local_code_general(r: usize, delta: usize) -> Result<LocalCode, ParamError> {
    if r < 2 || delta < 2 {
        return Err(ParamError::LocalCode(format!("need r >= 2 and delta >= 2, got r={r}, delta={delta}")));
    }
    let g = r + delta - 1;
    let overflow = || ParamError::LocalCode(format!("exponents overflow for r={r}, delta={delta}"));
    let mut rows = Vec::with_capacity(r);
    for i in 0..r {
        let mut row = Vec::with_capacity(g);
        for j in 1..=g {
            let rj = (r as u64).checked_pow(j as u32).ok_or_else(overflow)?;
            row.push(Some((i as u64).checked_mul(rj).ok_or_else(overflow)?));
        }
        rows.push(row);
    }
    let max_exponent = (r as u64 - 1) * (r as u64).pow(g as u32);
    Ok(LocalCode { r, delta, pattern: PatternMatrix::from_rows(rows), max_exponent, kind: LocalCodeKind::Generalized })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermanentVerdict {
    Certified {
        subsets_checked: usize,
    },
    Violation {
        /// Column subset (0-based) whose permanent fails.
        columns: Vec<usize>,
        permanent: IntPoly,
        reason: String,
    },
}

impl PermanentVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, PermanentVerdict::Certified { .. })
    }
}

/// Checks that every `r × t` column submatrix (`1 ≤ t ≤ r`) has a monic
/// permanent, and for the standard bidiagonal pattern that its degree is at
/// most `t`.
pub fn verify_monic_permanents(code: &LocalCode) -> PermanentVerdict {
    verify_pattern_permanents(&code.pattern, code.kind == LocalCodeKind::Standard)
}

/// Pattern-level form of [`verify_monic_permanents`]. Subsets are visited
/// from the widest (`t = r`) down to single columns, lexicographically within
/// a width; the first failure is returned.
pub fn verify_pattern_permanents(pattern: &PatternMatrix, degree_at_most_t: bool) -> PermanentVerdict {
    let mut checked = 0;
    for t in (1..=pattern.rows().min(pattern.cols())).rev() {
        for cols in (0..pattern.cols()).combinations(t) {
            let sub = pattern.select_columns(&cols);
            let perm = intpoly_permanent(&sub).expect("t <= r");
            checked += 1;
            if !perm.is_monic() {
                return PermanentVerdict::Violation {
                    reason: format!("leading coefficient {} is not 1", perm.leading_coefficient()),
                    columns: cols,
                    permanent: perm,
                };
            }
            if degree_at_most_t && perm.degree().is_some_and(|d| d > t) {
                return PermanentVerdict::Violation {
                    reason: format!("degree {} exceeds {t}", perm.degree().unwrap_or(0)),
                    columns: cols,
                    permanent: perm,
                };
            }
        }
    }
    PermanentVerdict::Certified { subsets_checked: checked }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exps(code: &LocalCode) -> Vec<Vec<Option<u64>>> {
        let p = code.pattern();
        (0..p.rows()).map(|i| (0..p.cols()).map(|j| p.get(i, j)).collect()).collect()
    }

    #[test]
    fn standard_r3_pattern() {
        let a = build_local_code(3).unwrap();
        assert_eq!(
            exps(&a),
            vec![
                vec![Some(0), Some(1), None, None],
                vec![None, Some(0), Some(1), None],
                vec![None, None, Some(0), Some(1)],
            ]
        );
        assert_eq!(a.max_exponent(), 1);
        assert_eq!(a.group_size(), 4);
    }

    #[test]
    fn standard_r2_pattern() {
        let a = build_local_code(2).unwrap();
        assert_eq!(exps(&a), vec![vec![Some(0), Some(1), None], vec![None, Some(0), Some(1)]]);
        assert!(build_local_code(1).is_err());
    }

    #[test]
    fn generalized_patterns() {
        let a = build_local_code_general(3, 3).unwrap();
        let e = exps(&a);
        assert_eq!(e[0], vec![Some(0); 5]);
        assert_eq!(e[1], vec![Some(3), Some(9), Some(27), Some(81), Some(243)]);
        assert_eq!(e[2], vec![Some(6), Some(18), Some(54), Some(162), Some(486)]);
        assert_eq!(a.max_exponent(), 486);

        let a = build_local_code_general(2, 3).unwrap();
        assert_eq!(exps(&a), vec![vec![Some(0); 4], vec![Some(2), Some(4), Some(8), Some(16)]]);
        assert_eq!(a.max_exponent(), 16);
        assert!(build_local_code_general(2, 1).is_err());
    }

    #[test]
    fn certificates() {
        for r in 2..=6 {
            assert!(verify_monic_permanents(&build_local_code(r).unwrap()).is_certified(), "r={r}");
        }
        for r in [2, 3] {
            for d in [2, 3] {
                let a = build_local_code_general(r, d).unwrap();
                assert!(verify_monic_permanents(&a).is_certified(), "r={r} delta={d}");
            }
        }
    }

    #[test]
    fn adversarial_pattern_rejected() {
        let p = PatternMatrix::from_rows(vec![vec![Some(1), Some(1)], vec![Some(1), Some(1)]]);
        match verify_pattern_permanents(&p, false) {
            PermanentVerdict::Violation { columns, permanent, .. } => {
                assert_eq!(columns, vec![0, 1]);
                assert_eq!(permanent, IntPoly::from_i64s(&[0, 0, 2]));
            }
            v => panic!("expected violation, got {v:?}"),
        }
        // a zero column has the zero permanent, which is not monic either
        let p = PatternMatrix::from_rows(vec![vec![Some(0), Some(1), None], vec![Some(1), Some(0), None]]);
        let code = LocalCode::custom(2, 2, p).unwrap();
        match verify_monic_permanents(&code) {
            PermanentVerdict::Violation { columns, permanent, .. } => {
                assert_eq!(columns, vec![0, 2]);
                assert!(permanent.is_zero());
            }
            v => panic!("expected violation, got {v:?}"),
        }
    }
}
